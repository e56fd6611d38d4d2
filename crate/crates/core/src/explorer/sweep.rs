//! Grid evaluation of the full chain over up to three design parameters.

use rayon::prelude::*;

use super::constraints::{check_constraints, ConstraintReport};
use crate::design::{AxisScale, DesignConfig, FieldConstraint, Goal, SweepAxis, SweepSpec};
use crate::error::{Error, Result};
use crate::pipeline::{derive, DerivedDesign};

pub const MAX_AXES: usize = 3;

impl SweepAxis {
    fn is_degenerate(&self) -> bool {
        self.min == self.max
    }

    /// Grid values along the axis, endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        if self.is_degenerate() {
            return vec![self.min];
        }
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.max
                } else {
                    self.at(i as f64 / (n - 1) as f64)
                }
            })
            .collect()
    }

    /// Maps `u` in `[0, 1]` onto the axis range.
    pub fn at(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        if u == 0.0 {
            return self.min;
        }
        if u == 1.0 {
            return self.max;
        }
        match self.scale {
            AxisScale::Linear => self.min + u * (self.max - self.min),
            AxisScale::Log => (self.min.ln() + u * (self.max.ln() - self.min.ln())).exp(),
        }
    }

    fn validate(&self, base: &DesignConfig) -> Result<()> {
        base.get(&self.name)?;
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::invalid(&self.name, "range must be finite"));
        }
        if self.min > self.max {
            return Err(Error::invalid(&self.name, "inverted range (min > max)"));
        }
        if !self.is_degenerate() && self.steps < 2 {
            return Err(Error::invalid(&self.name, "need at least 2 steps"));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::invalid(
                &self.name,
                "log axis needs a positive range",
            ));
        }
        for v in [self.min, self.max] {
            let mut probe = base.clone();
            probe.set(&self.name, v)?;
            probe.validate()?;
        }
        Ok(())
    }
}

impl SweepSpec {
    pub fn validate(&self, base: &DesignConfig) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > MAX_AXES {
            return Err(Error::invalid(
                "sweep.axes",
                "need between 1 and 3 swept parameters",
            ));
        }
        for (i, axis) in self.axes.iter().enumerate() {
            if self.axes[..i].iter().any(|a| a.name == axis.name) {
                return Err(Error::invalid(&axis.name, "swept twice"));
            }
            axis.validate(base)?;
        }
        let probe = derive(base).ok();
        let known = |field: &str| probe.as_ref().is_none_or(|d| d.field(field).is_some());
        if !known(&self.objective) {
            return Err(Error::UnknownField(self.objective.clone()));
        }
        if let Some(c) = self.constraints.iter().find(|c| !known(&c.field)) {
            return Err(Error::UnknownField(c.field.clone()));
        }
        Ok(())
    }

    /// Orders two objective values; `true` if `a` is strictly better than `b`.
    pub fn better(&self, a: f64, b: f64) -> bool {
        match self.goal {
            Goal::Minimize => a < b,
            Goal::Maximize => a > b,
        }
    }
}

/// Outcome of evaluating one parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluation {
    Derived {
        design: Box<DerivedDesign>,
        constraints: ConstraintReport,
        /// Check-constraint pass and every user constraint satisfied.
        feasible: bool,
        objective: f64,
        /// Summed relative violation over all failing constraints.
        violation: f64,
    },
    /// The chain could not be evaluated (e.g. unreachable scattering target).
    Failed { reason: String },
}

impl Evaluation {
    pub fn feasible(&self) -> bool {
        matches!(self, Evaluation::Derived { feasible: true, .. })
    }

    pub fn objective(&self) -> Option<f64> {
        match self {
            Evaluation::Derived { objective, .. } => Some(*objective),
            Evaluation::Failed { .. } => None,
        }
    }

    pub fn violation(&self) -> f64 {
        match self {
            Evaluation::Derived { violation, .. } => *violation,
            Evaluation::Failed { .. } => f64::INFINITY,
        }
    }

    pub fn design(&self) -> Option<&DerivedDesign> {
        match self {
            Evaluation::Derived { design, .. } => Some(design),
            Evaluation::Failed { .. } => None,
        }
    }

    /// Constraint-check pass alone, ignoring user constraints.
    pub fn constraints_pass(&self) -> bool {
        matches!(self, Evaluation::Derived { constraints, .. } if constraints.pass())
    }
}

fn user_violation(d: &DerivedDesign, constraints: &[FieldConstraint]) -> f64 {
    constraints
        .iter()
        .map(|c| {
            c.relation
                .violation(d.field(&c.field).unwrap_or(f64::NAN), c.bound)
        })
        .sum()
}

/// Evaluates the chain with the swept parameters set to `params`.
pub fn evaluate(base: &DesignConfig, spec: &SweepSpec, params: &[f64]) -> Evaluation {
    let mut config = base.clone();
    for (axis, &v) in spec.axes.iter().zip(params) {
        if let Err(e) = config.set(&axis.name, v) {
            return Evaluation::Failed {
                reason: e.to_string(),
            };
        }
    }
    match derive(&config) {
        Ok(design) => {
            let constraints = check_constraints(&design);
            let violation = constraints.violation() + user_violation(&design, &spec.constraints);
            let objective = design.field(&spec.objective).unwrap_or(f64::NAN);
            Evaluation::Derived {
                feasible: violation == 0.0 && objective.is_finite(),
                objective,
                violation,
                constraints,
                design: Box::new(design),
            }
        }
        Err(e) => Evaluation::Failed {
            reason: e.to_string(),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub params: Vec<f64>,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// Number of grid values per axis; points are stored row-major, last axis fastest.
    pub shape: Vec<usize>,
    pub points: Vec<SweepPoint>,
    /// Index of the best feasible point on the objective.
    pub best: Option<usize>,
}

impl SweepResult {
    pub fn feasible_mask(&self) -> Vec<bool> {
        self.points
            .iter()
            .map(|p| p.evaluation.feasible())
            .collect()
    }

    pub fn best_point(&self) -> Option<&SweepPoint> {
        self.best.map(|i| &self.points[i])
    }
}

fn grid(axes: &[SweepAxis]) -> (Vec<usize>, Vec<Vec<f64>>) {
    let values: Vec<Vec<f64>> = axes.iter().map(SweepAxis::values).collect();
    let shape: Vec<usize> = values.iter().map(Vec::len).collect();
    let total: usize = shape.iter().product();
    let points = (0..total)
        .map(|flat| {
            let mut rem = flat;
            let mut p = vec![0.0; axes.len()];
            for dim in (0..axes.len()).rev() {
                p[dim] = values[dim][rem % shape[dim]];
                rem /= shape[dim];
            }
            p
        })
        .collect();
    (shape, points)
}

pub(crate) fn best_index(spec: &SweepSpec, evals: &[&Evaluation]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, e) in evals.iter().enumerate() {
        if !e.feasible() {
            continue;
        }
        let obj = e.objective().unwrap_or(f64::NAN);
        if best.is_none_or(|(_, b)| spec.better(obj, b)) {
            best = Some((i, obj));
        }
    }
    best.map(|(i, _)| i)
}

/// Evaluates every grid point. Points are evaluated in parallel; the result is
/// independent of evaluation order.
pub fn sweep(base: &DesignConfig, spec: &SweepSpec) -> Result<SweepResult> {
    base.validate()?;
    spec.validate(base)?;
    let (shape, params) = grid(&spec.axes);
    let points: Vec<SweepPoint> = params
        .into_par_iter()
        .map(|p| SweepPoint {
            evaluation: evaluate(base, spec, &p),
            params: p,
        })
        .collect();
    let evals: Vec<&Evaluation> = points.iter().map(|p| &p.evaluation).collect();
    let best = best_index(spec, &evals);
    Ok(SweepResult {
        spec: spec.clone(),
        shape,
        points,
        best,
    })
}
