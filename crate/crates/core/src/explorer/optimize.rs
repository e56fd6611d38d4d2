//! Constrained optimisation: grid search followed by a pattern-search refinement.

use std::cmp::Ordering;

use rayon::prelude::*;

use super::sweep::{evaluate, sweep, Evaluation};
use crate::design::{DesignConfig, SweepSpec};
use crate::error::Result;
use crate::pipeline::DerivedDesign;

/// Refinement stops once the step in normalised coordinates drops below this.
pub const MIN_STEP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOutcome {
    pub params: Vec<f64>,
    pub evaluation: Evaluation,
    /// Total number of chain evaluations, grid included.
    pub evaluations: usize,
}

impl OptimizeOutcome {
    pub fn feasible(&self) -> bool {
        self.evaluation.feasible()
    }

    pub fn design(&self) -> Option<&DerivedDesign> {
        self.evaluation.design()
    }

    pub fn objective(&self) -> Option<f64> {
        self.evaluation.objective()
    }
}

/// `Less` when `a` should be preferred over `b`: feasible first, then
/// objective, then smaller violation.
pub fn rank(spec: &SweepSpec, a: &Evaluation, b: &Evaluation) -> Ordering {
    match (a.feasible(), b.feasible()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => {
            let (x, y) = (
                a.objective().unwrap_or(f64::NAN),
                b.objective().unwrap_or(f64::NAN),
            );
            if spec.better(x, y) {
                Ordering::Less
            } else if spec.better(y, x) {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
        (false, false) => a.violation().total_cmp(&b.violation()),
    }
}

/// Unit directions along each axis plus the pairwise diagonals, so the search
/// can slide along a constraint boundary that is not axis-aligned.
fn directions(active: &[usize], dims: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for &i in active {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; dims];
            d[i] = s;
            out.push(d);
        }
    }
    for (n, &i) in active.iter().enumerate() {
        for &j in &active[n + 1..] {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut d = vec![0.0; dims];
                d[i] = si;
                d[j] = sj;
                out.push(d);
            }
        }
    }
    out
}

type Trial = (Vec<f64>, Vec<f64>, Evaluation);

fn params_at(spec: &SweepSpec, u: &[f64]) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(i, &x)| spec.axes[i].at(x))
        .collect()
}

/// Boundary slide: a step along axis `i` that improves the objective but
/// breaks a constraint, repaired by the smallest feasible shift along axis `j`.
/// Returns the best repaired point and the number of evaluations spent.
fn slide(
    base: &DesignConfig,
    spec: &SweepSpec,
    u: &[f64],
    current: &Evaluation,
    step: f64,
    active: &[usize],
) -> (Option<Trial>, usize) {
    let Some(now) = current.objective() else {
        return (None, 0);
    };
    let moves: Vec<(usize, usize, f64, f64)> = active
        .iter()
        .flat_map(|&i| {
            active
                .iter()
                .filter(move |&&j| j != i)
                .map(move |&j| (i, j))
        })
        .flat_map(|(i, j)| {
            [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].map(|(a, b)| (i, j, a, b))
        })
        .collect();
    let results: Vec<(Option<Trial>, usize)> = moves
        .par_iter()
        .map(|&(i, j, si, sj)| {
            let mut cand = u.to_vec();
            cand[i] = (cand[i] + si * step).clamp(0.0, 1.0);
            if cand[i] == u[i] {
                return (None, 0);
            }
            let e = evaluate(base, spec, &params_at(spec, &cand));
            let mut used = 1;
            let improves = e.objective().is_some_and(|v| spec.better(v, now));
            if e.feasible() || !improves {
                return (None, used);
            }
            let reach = if sj > 0.0 { 1.0 - cand[j] } else { cand[j] };
            if reach <= 0.0 {
                return (None, used);
            }
            let shifted = |t: f64| {
                let mut c = cand.clone();
                c[j] = (c[j] + sj * t).clamp(0.0, 1.0);
                c
            };
            let far = shifted(reach);
            let far_eval = evaluate(base, spec, &params_at(spec, &far));
            used += 1;
            if !far_eval.feasible() {
                return (None, used);
            }
            let (mut lo, mut hi, mut best) = (0.0, reach, (far, far_eval));
            while hi - lo > MIN_STEP {
                let mid = 0.5 * (lo + hi);
                let c = shifted(mid);
                let e = evaluate(base, spec, &params_at(spec, &c));
                used += 1;
                if e.feasible() {
                    hi = mid;
                    best = (c, e);
                } else {
                    lo = mid;
                }
            }
            let (c, e) = best;
            if rank(spec, &e, current) == Ordering::Less {
                (Some((c.clone(), params_at(spec, &c), e)), used)
            } else {
                (None, used)
            }
        })
        .collect();
    let used = results.iter().map(|r| r.1).sum();
    let best = results
        .into_iter()
        .filter_map(|r| r.0)
        .min_by(|a, b| rank(spec, &a.2, &b.2));
    (best, used)
}

/// Optimises `spec.objective` over the swept axes. Returns the best feasible
/// point, or the least-violating point when no feasible point was found.
pub fn optimize(base: &DesignConfig, spec: &SweepSpec) -> Result<OptimizeOutcome> {
    let grid = sweep(base, spec)?;
    let mut evaluations = grid.points.len();
    let start = grid
        .points
        .iter()
        .min_by(|a, b| rank(spec, &a.evaluation, &b.evaluation))
        .expect("grid is never empty");

    let axes = &spec.axes;
    let to_unit = |i: usize, v: f64| {
        let a = &axes[i];
        if a.min == a.max {
            return 0.0;
        }
        match a.scale {
            crate::design::AxisScale::Linear => (v - a.min) / (a.max - a.min),
            crate::design::AxisScale::Log => (v / a.min).ln() / (a.max / a.min).ln(),
        }
    };
    let active: Vec<usize> = (0..axes.len())
        .filter(|&i| axes[i].min < axes[i].max)
        .collect();
    let mut u: Vec<f64> = start
        .params
        .iter()
        .enumerate()
        .map(|(i, &v)| to_unit(i, v))
        .collect();
    let mut params = start.params.clone();
    let mut current = start.evaluation.clone();

    if !active.is_empty() {
        let dirs = directions(&active, axes.len());
        let coarsest = active
            .iter()
            .map(|&i| axes[i].steps.max(2) - 1)
            .min()
            .unwrap_or(1);
        let mut step = 1.0 / coarsest as f64;
        while step >= MIN_STEP {
            let trials: Vec<(Vec<f64>, Vec<f64>, Evaluation)> = dirs
                .par_iter()
                .filter_map(|d| {
                    // Moves past an edge are projected back onto the box.
                    let cand: Vec<f64> = u
                        .iter()
                        .zip(d)
                        .map(|(x, s)| (x + s * step).clamp(0.0, 1.0))
                        .collect();
                    if cand == u {
                        return None;
                    }
                    let p: Vec<f64> = cand
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| axes[i].at(x))
                        .collect();
                    let e = evaluate(base, spec, &p);
                    Some((cand, p, e))
                })
                .collect();
            evaluations += trials.len();
            let best = trials
                .into_iter()
                .filter(|t| rank(spec, &t.2, &current) == Ordering::Less)
                .min_by(|a, b| rank(spec, &a.2, &b.2));
            let best = match best {
                Some(b) => Some(b),
                None if current.feasible() => {
                    let (found, used) = slide(base, spec, &u, &current, step, &active);
                    evaluations += used;
                    found
                }
                None => None,
            };
            match best {
                Some((cand, p, e)) => {
                    u = cand;
                    params = p;
                    current = e;
                }
                None => step *= 0.5,
            }
        }
    }

    Ok(OptimizeOutcome {
        params,
        evaluation: current,
        evaluations,
    })
}
