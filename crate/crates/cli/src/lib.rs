//! Command driver for `ion-forge`. [`run`] takes the argument vector and
//! returns the exit code and both output streams, so tests can drive the CLI
//! without spawning a process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ion_forge::design::{DesignFile, Goal, ScenarioSection, SweepSpec};
use ion_forge::explorer::{self, OptimizeOutcome, SweepResult};
use ion_forge::report::{self, render_report, Format, Report};
use ion_forge::{derive, Error};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ion-forge",
    version,
    about = "Trapped-ion quantum computer resource estimator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the full parameter chain and print both tables.
    Derive(Common),
    /// Evaluate the feasibility constraints; exits 2 if any fails.
    Check(Common),
    /// Evaluate the grid given in the design file's [sweep] section.
    Sweep(Common),
    /// Optimise the [sweep] objective over its axes and constraints.
    Optimize(Common),
    /// Evaluate the improvement scenarios of the [scenario] section.
    Scenario(ScenarioArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Design file (TOML).
    pub design: PathBuf,
    /// Output format: human or machine.
    #[arg(long, default_value = "human")]
    pub format: String,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Set a design-file key, e.g. `geometry.rho_m=5e-6`. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Replace the file's species with a registry entry.
    #[arg(long)]
    pub species: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ancilla-pipelining scale s.
    #[arg(long)]
    pub pipelining: Option<f64>,
    /// Odd number of ions read per measured p-bit.
    #[arg(long)]
    pub redundancy: Option<u64>,
    /// Gate error for the size-versus-noise rule.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Reference gate error for the size-versus-noise rule.
    #[arg(long)]
    pub gamma_ref: Option<f64>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure of an invocation, before or after the engine ran.
#[derive(Debug)]
enum Failure {
    Engine(Error),
    Io { path: PathBuf, message: String },
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Engine(e) if e.is_infeasible() => EXIT_INFEASIBLE,
            Failure::Engine(_) | Failure::Usage(_) => EXIT_VALIDATION,
            Failure::Io { .. } => EXIT_VALIDATION,
        }
    }

    fn record(&self) -> Value {
        let (kind, message, extra) = match self {
            Failure::Engine(e) => (engine_kind(e), e.to_string(), engine_detail(e)),
            Failure::Io { path, message } => (
                "io",
                message.clone(),
                json!({ "path": path.display().to_string() }),
            ),
            Failure::Usage(m) => ("usage", m.clone(), Value::Null),
        };
        let mut rec =
            json!({ "error": { "kind": kind, "exit_code": self.code(), "message": message } });
        if !extra.is_null() {
            rec["error"]["detail"] = extra;
        }
        rec
    }
}

fn engine_kind(e: &Error) -> &'static str {
    match e {
        Error::Validation { .. } => "validation",
        Error::UnknownSpecies(_) => "unknown-species",
        Error::UnknownParameter(_) => "unknown-parameter",
        Error::UnknownField(_) => "unknown-field",
        Error::InfeasibleScattering { .. } => "infeasible-scattering",
        Error::InsufficientPbits { .. } => "insufficient-pbits",
        Error::BoundNotBinding { .. } => "bound-not-binding",
        Error::OutsideRuleOfThumb(_) => "outside-rule-of-thumb",
        Error::Parse { .. } => "parse",
        Error::UnknownFormat(_) => "unknown-format",
    }
}

fn engine_detail(e: &Error) -> Value {
    match e {
        Error::Validation { field, reason } => json!({ "field": field, "reason": reason }),
        Error::Parse { location, .. } => json!({ "location": location }),
        Error::UnknownParameter(k) | Error::UnknownField(k) | Error::UnknownSpecies(k) => {
            json!({ "name": k })
        }
        Error::InfeasibleScattering { target, minimum } => {
            json!({ "target": target, "minimum": minimum })
        }
        _ => Value::Null,
    }
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => {
                    let f = Failure::Usage(text.trim().to_string());
                    Outcome {
                        code: f.code(),
                        stdout: String::new(),
                        stderr: format!("{}\n", f.record()),
                    }
                }
            };
        }
    };
    let result = match std::panic::catch_unwind(|| execute(&cli.command)) {
        Ok(r) => r,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            let rec = json!({ "error": { "kind": "internal", "exit_code": EXIT_INTERNAL, "message": message } });
            return Outcome {
                code: EXIT_INTERNAL,
                stdout: String::new(),
                stderr: format!("{rec}\n"),
            };
        }
    };
    match result {
        Ok((code, text, out)) => match out {
            Some(path) => match std::fs::write(&path, &text) {
                Ok(()) => Outcome {
                    code,
                    stdout: String::new(),
                    stderr: String::new(),
                },
                Err(e) => {
                    let f = Failure::Io {
                        path,
                        message: format!("cannot write output: {e}"),
                    };
                    Outcome {
                        code: EXIT_INTERNAL,
                        stdout: String::new(),
                        stderr: format!("{}\n", f.record()),
                    }
                }
            },
            None => Outcome {
                code,
                stdout: text,
                stderr: String::new(),
            },
        },
        Err(f) => Outcome {
            code: f.code(),
            stdout: String::new(),
            stderr: format!("{}\n", f.record()),
        },
    }
}

fn split_override(raw: &str) -> Result<(String, String), Failure> {
    raw.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| Failure::Usage(format!("--override expects KEY=VALUE, got `{raw}`")))
}

/// Reads the design file and applies `--override` and `--species`.
fn load(common: &Common) -> Result<DesignFile, Failure> {
    let text = read(&common.design)?;
    let overrides = common
        .overrides
        .iter()
        .map(|o| split_override(o))
        .collect::<Result<Vec<_>, _>>()?;
    let mut file = DesignFile::parse_with_overrides(&text, &overrides)?;
    if let Some(name) = &common.species {
        file.species = ion_forge::design::SpeciesSection {
            name: name.clone(),
            linewidth_rad_per_s: None,
            wavelength_m: None,
            mass_number: None,
            fine_structure_rad_per_s: None,
            provenance: None,
        };
    }
    Ok(file)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io {
        path: path.to_path_buf(),
        message: format!("cannot read design file {}: {e}", path.display()),
    })
}

type Rendered = (i32, String, Option<PathBuf>);

fn execute(command: &Command) -> Result<Rendered, Failure> {
    match command {
        Command::Derive(c) => {
            let format: Format = c.format.parse()?;
            let file = load(c)?;
            let report = build_report(&file, &file.scenario)?;
            Ok((EXIT_OK, render(&report, format)?, c.out.clone()))
        }
        Command::Check(c) => {
            let format: Format = c.format.parse()?;
            let file = load(c)?;
            let report = build_report(&file, &ScenarioSection::default())?;
            let code = if report.pass {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            };
            let text = match format {
                Format::Machine => pretty(&json!({
                    "format": "ion-forge-check/1",
                    "species": report.species,
                    "pass": report.pass,
                    "constraints": report.constraints,
                })),
                Format::Human => render_constraints(&report),
            };
            Ok((code, text, c.out.clone()))
        }
        Command::Sweep(c) => {
            let format: Format = c.format.parse()?;
            let file = load(c)?;
            let spec = sweep_spec(&file)?;
            let result = explorer::sweep(&file.config()?, &spec)?;
            Ok((EXIT_OK, render_sweep(&result, format), c.out.clone()))
        }
        Command::Optimize(c) => {
            let format: Format = c.format.parse()?;
            let file = load(c)?;
            let spec = sweep_spec(&file)?;
            let outcome = explorer::optimize(&file.config()?, &spec)?;
            let code = if outcome.feasible() {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            };
            Ok((
                code,
                render_optimum(&spec, &outcome, format)?,
                c.out.clone(),
            ))
        }
        Command::Scenario(s) => {
            let format: Format = s.common.format.parse()?;
            let file = load(&s.common)?;
            let section = ScenarioSection {
                pipelining_scale: s.pipelining.or(file.scenario.pipelining_scale),
                redundancy_k: s.redundancy.or(file.scenario.redundancy_k),
                noise_gamma: s.gamma.or(file.scenario.noise_gamma),
                noise_gamma_ref: s.gamma_ref.or(file.scenario.noise_gamma_ref),
            };
            if section.is_empty() {
                return Err(Failure::Usage(
                    "no scenario requested: add a [scenario] section or pass --pipelining/--redundancy/--gamma".into(),
                ));
            }
            let report = build_report(&file, &section)?;
            Ok((EXIT_OK, render(&report, format)?, s.common.out.clone()))
        }
    }
}

fn build_report(file: &DesignFile, scenario: &ScenarioSection) -> Result<Report, Error> {
    let design = derive(&file.config()?)?;
    Report::new(&design, scenario)
}

fn render(report: &Report, format: Format) -> Result<String, Error> {
    render_report(
        report,
        match format {
            Format::Human => "human",
            Format::Machine => "machine",
        },
    )
}

fn sweep_spec(file: &DesignFile) -> Result<SweepSpec, Failure> {
    file.sweep.clone().ok_or_else(|| {
        Error::Validation {
            field: "sweep".into(),
            reason: "design file has no [sweep] section".into(),
        }
        .into()
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serialises");
    s.push('\n');
    s
}

fn render_constraints(report: &Report) -> String {
    let text = report::render_human(report);
    // the constraint block of the full report, plus the verdict
    let start = text.find("\nConstraints").map_or(0, |i| i + 1);
    let end = text.find("\nNotes").unwrap_or(text.len());
    let mut out = format!("ion-forge constraint check: {}\n\n", report.species);
    out.push_str(text[start..end].trim_end());
    out.push('\n');
    if !report.pass {
        out.push('\n');
    }
    for f in report.constraints.failures() {
        let _ = writeln!(out, "FAILED {}: {}", f.name, f.rationale);
    }
    out
}

fn goal_word(g: Goal) -> &'static str {
    match g {
        Goal::Minimize => "minimize",
        Goal::Maximize => "maximize",
    }
}

fn point_json(names: &[String], params: &[f64], e: &explorer::Evaluation) -> Value {
    let params: serde_json::Map<String, Value> = names
        .iter()
        .cloned()
        .zip(params.iter().map(|&v| json!(v)))
        .collect();
    match e {
        explorer::Evaluation::Derived {
            constraints,
            feasible,
            objective,
            violation,
            ..
        } => json!({
            "params": params,
            "feasible": feasible,
            "objective": objective,
            "violation": violation,
            "failed_constraints": constraints.failures().map(|c| c.name.clone()).collect::<Vec<_>>(),
        }),
        explorer::Evaluation::Failed { reason } => json!({
            "params": params,
            "feasible": false,
            "objective": Value::Null,
            "violation": Value::Null,
            "error": reason,
        }),
    }
}

fn render_sweep(r: &SweepResult, format: Format) -> String {
    let names: Vec<String> = r.spec.axes.iter().map(|a| a.name.clone()).collect();
    match format {
        Format::Machine => pretty(&json!({
            "format": "ion-forge-sweep/1",
            "objective": r.spec.objective,
            "goal": goal_word(r.spec.goal),
            "axes": r.spec.axes,
            "constraints": r.spec.constraints,
            "shape": r.shape,
            "best": r.best,
            "points": r.points.iter().map(|p| point_json(&names, &p.params, &p.evaluation)).collect::<Vec<_>>(),
        })),
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "ion-forge sweep: {} {} over {} points",
                goal_word(r.spec.goal),
                r.spec.objective,
                r.points.len()
            );
            for c in &r.spec.constraints {
                let _ = writeln!(
                    out,
                    "  subject to {} {} {}",
                    c.field,
                    c.relation.symbol(),
                    report::sig(c.bound, 4)
                );
            }
            let mut header: Vec<String> = names.clone();
            header.push(r.spec.objective.clone());
            header.push("status".into());
            let rows: Vec<Vec<String>> = r
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let mut row: Vec<String> =
                        p.params.iter().map(|&v| report::sig(v, 4)).collect();
                    row.push(
                        p.evaluation
                            .objective()
                            .map_or("-".into(), |v| report::sig(v, 4)),
                    );
                    let status = match &p.evaluation {
                        explorer::Evaluation::Failed { .. } => "error".to_string(),
                        e if e.feasible() => "feasible".to_string(),
                        explorer::Evaluation::Derived { constraints, .. } => {
                            let failed: Vec<&str> =
                                constraints.failures().map(|c| c.name.as_str()).collect();
                            if failed.is_empty() {
                                "infeasible (user constraint)".into()
                            } else {
                                format!("infeasible ({})", failed.join(", "))
                            }
                        }
                    };
                    row.push(if r.best == Some(i) {
                        format!("{status} *best")
                    } else {
                        status
                    });
                    row
                })
                .collect();
            let widths: Vec<usize> = (0..header.len())
                .map(|c| {
                    rows.iter()
                        .map(|r| r[c].chars().count())
                        .chain([header[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "\n{}", line(&header));
            for row in &rows {
                let _ = writeln!(out, "{}", line(row));
            }
            if r.best.is_none() {
                let _ = writeln!(out, "\nno feasible point");
            }
            out
        }
    }
}

fn render_optimum(spec: &SweepSpec, o: &OptimizeOutcome, format: Format) -> Result<String, Error> {
    let names: Vec<String> = spec.axes.iter().map(|a| a.name.clone()).collect();
    let report = match o.design() {
        Some(d) => Some(Report::new(d, &ScenarioSection::default())?),
        None => None,
    };
    let user: Vec<Value> = spec
        .constraints
        .iter()
        .map(|c| {
            let actual = o.design().and_then(|d| d.field(&c.field));
            json!({
                "field": c.field,
                "relation": c.relation,
                "bound": c.bound,
                "actual": actual,
                "pass": actual.is_some_and(|a| c.relation.holds(a, c.bound)),
            })
        })
        .collect();
    Ok(match format {
        Format::Machine => {
            let mut v = point_json(&names, &o.params, &o.evaluation);
            v["format"] = json!("ion-forge-optimize/1");
            v["objective_field"] = json!(spec.objective);
            v["goal"] = json!(goal_word(spec.goal));
            v["evaluations"] = json!(o.evaluations);
            v["constraints"] = json!(user);
            v["report"] = serde_json::to_value(&report).expect("report serialises");
            pretty(&v)
        }
        Format::Human => {
            let mut out = String::new();
            let verdict = if o.feasible() {
                "feasible optimum"
            } else {
                "no feasible point; nearest point"
            };
            let _ = writeln!(
                out,
                "ion-forge optimize: {} {} ({verdict})",
                goal_word(spec.goal),
                spec.objective
            );
            for (n, v) in names.iter().zip(&o.params) {
                let _ = writeln!(out, "  {n} = {}", report::sig(*v, 6));
            }
            let _ = writeln!(
                out,
                "  {} = {}",
                spec.objective,
                o.objective().map_or("-".into(), |v| report::sig(v, 6))
            );
            for c in &user {
                let _ = writeln!(
                    out,
                    "  {} = {} ({} {}) {}",
                    c["field"].as_str().unwrap_or_default(),
                    c["actual"]
                        .as_f64()
                        .map_or("-".into(), |v| report::sig(v, 6)),
                    c["relation"].as_str().unwrap_or_default(),
                    report::sig(c["bound"].as_f64().unwrap_or(f64::NAN), 4),
                    if c["pass"].as_bool() == Some(true) {
                        "pass"
                    } else {
                        "FAIL"
                    },
                );
            }
            let _ = writeln!(out, "  evaluations: {}", o.evaluations);
            if let explorer::Evaluation::Failed { reason } = &o.evaluation {
                let _ = writeln!(out, "  error: {reason}");
            }
            if let Some(r) = &report {
                out.push('\n');
                out.push_str(&report::render_human(r));
            }
            out
        }
    })
}
