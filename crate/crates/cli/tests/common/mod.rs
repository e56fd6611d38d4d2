#![allow(dead_code)]

use std::path::PathBuf;

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

/// Every bundled fixture through every command that applies to it.
pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "derive_cd_default_human",
        args: &["derive", "fixtures/cd_default.toml"],
        code: 0,
    },
    GoldenCase {
        name: "derive_cd_default_machine",
        args: &["derive", "fixtures/cd_default.toml", "--format", "machine"],
        code: 0,
    },
    GoldenCase {
        name: "derive_ca_default_human",
        args: &["derive", "fixtures/ca_default.toml"],
        code: 0,
    },
    GoldenCase {
        name: "derive_ca_default_machine",
        args: &["derive", "fixtures/ca_default.toml", "--format", "machine"],
        code: 0,
    },
    GoldenCase {
        name: "check_cd_default_machine",
        args: &["check", "fixtures/cd_default.toml", "--format", "machine"],
        code: 0,
    },
    GoldenCase {
        name: "check_cd_rho1um_human",
        args: &["check", "fixtures/cd_rho1um.toml"],
        code: 2,
    },
    GoldenCase {
        name: "scenario_cd_explore_human",
        args: &["scenario", "fixtures/cd_explore.toml"],
        code: 0,
    },
    GoldenCase {
        name: "scenario_cd_explore_machine",
        args: &[
            "scenario",
            "fixtures/cd_explore.toml",
            "--format",
            "machine",
        ],
        code: 0,
    },
    GoldenCase {
        name: "sweep_cd_explore_human",
        args: &["sweep", "fixtures/cd_explore.toml"],
        code: 0,
    },
    GoldenCase {
        name: "sweep_cd_explore_machine",
        args: &["sweep", "fixtures/cd_explore.toml", "--format", "machine"],
        code: 0,
    },
    GoldenCase {
        name: "optimize_cd_explore_human",
        args: &["optimize", "fixtures/cd_explore.toml"],
        code: 0,
    },
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir()
        .join("tests/golden")
        .join(format!("{name}.txt"))
}

pub fn fixture(name: &str) -> String {
    manifest_dir()
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

/// Runs the CLI in-process from the crate root so fixture paths resolve.
pub fn run_case(args: &[&str]) -> ion_forge_cli::Outcome {
    let dir = manifest_dir();
    let args: Vec<String> = std::iter::once("ion-forge".to_string())
        .chain(args.iter().map(|a| {
            if a.starts_with("fixtures/") {
                dir.join(a).display().to_string()
            } else {
                a.to_string()
            }
        }))
        .collect();
    ion_forge_cli::run(args)
}

/// Compares one golden case; returns a description of the mismatch.
pub fn check_golden(case: &GoldenCase) -> Result<(), String> {
    let out = run_case(case.args);
    if out.code != case.code {
        return Err(format!(
            "{}: exit {} (expected {}), stderr: {}",
            case.name, out.code, case.code, out.stderr
        ));
    }
    let path = golden_path(case.name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != out.stdout {
        let line = expected
            .lines()
            .zip(out.stdout.lines())
            .position(|(a, b)| a != b)
            .map_or_else(
                || "length differs".to_string(),
                |i| format!("first difference at line {}", i + 1),
            );
        return Err(format!(
            "{}: output differs from golden file ({line})",
            case.name
        ));
    }
    Ok(())
}
