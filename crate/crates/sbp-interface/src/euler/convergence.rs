use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::solver::{EulerConfig, EulerSolver};
use crate::{Error, Result};

pub const VARIABLES: [&str; 4] = ["rho", "u", "v", "p"];

/// `q = log10(e1/e2) / log10(h1/h2)`.
pub fn convergence_rate(e1: f64, e2: f64, h1: f64, h2: f64) -> Result<f64> {
    if !(e1 > 0.0 && e2 > 0.0) {
        return Err(Error::Invalid(format!("errors must be positive, got {e1:e} and {e2:e}")));
    }
    if !(h1 > 0.0 && h2 > 0.0) || h1 == h2 {
        return Err(Error::Invalid(format!("grid sizes {h1} and {h2} do not form a refinement")));
    }
    Ok((e1 / e2).log10() / (h1 / h2).log10())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub m: usize,
    pub steps: usize,
    pub log10_errors: [f64; 4],
    /// Rates against the previous row.
    pub q: Option<[f64; 4]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub order: String,
    pub coupling: crate::sat::CouplingMode,
    pub t_end: f64,
    pub cfl: f64,
    pub variables: [String; 4],
    pub rows: Vec<ConvergenceRow>,
    /// `(x, y, ρ, u, v, p)` on the finest grid, when requested.
    #[serde(skip)]
    pub fields: Option<Vec<[f64; 6]>>,
}

impl ConvergenceReport {
    pub fn last_q(&self) -> Option<[f64; 4]> {
        self.rows.last().and_then(|r| r.q)
    }
}

struct Run {
    errors: [f64; 4],
    steps: usize,
    fields: Option<Vec<[f64; 6]>>,
}

fn run_once(cfg: &EulerConfig, keep_fields: bool) -> Result<Run> {
    let solver = EulerSolver::new(cfg.clone())?;
    let end = solver.integrate(&solver.exact_state(0.0), cfg.t_end)?;
    Ok(Run {
        errors: solver.l2_error(&end),
        steps: solver.steps_to(cfg.t_end),
        fields: keep_fields.then(|| solver.field_rows(&end)),
    })
}

/// Runs the vortex to `t_end` on one grid; returns errors and the number of steps.
pub fn run_vortex(cfg: &EulerConfig) -> Result<([f64; 4], usize)> {
    let r = run_once(cfg, false)?;
    Ok((r.errors, r.steps))
}

/// Runs `base` at each `M` in `ms` (in parallel when `jobs > 1`) and tabulates observed rates.
pub fn refinement_study(base: &EulerConfig, ms: &[usize], jobs: usize) -> Result<ConvergenceReport> {
    refinement_study_with_fields(base, ms, jobs, false)
}

/// As [`refinement_study`], optionally keeping the final fields of the last grid.
pub fn refinement_study_with_fields(
    base: &EulerConfig,
    ms: &[usize],
    jobs: usize,
    keep_fields: bool,
) -> Result<ConvergenceReport> {
    if ms.is_empty() {
        return Err(Error::Invalid("no grid sizes given".into()));
    }
    let last = ms.len() - 1;
    let indexed: Vec<(usize, usize)> = ms.iter().copied().enumerate().collect();
    let run = |&(i, m): &(usize, usize)| run_once(&EulerConfig { m, ..base.clone() }, keep_fields && i == last);
    let results: Vec<Result<Run>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
        pool.install(|| indexed.par_iter().map(run).collect())
    } else {
        indexed.iter().map(run).collect()
    };
    let mut fields = None;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ms.len());
    for (&m, res) in ms.iter().zip(results) {
        let Run { errors: err, steps, fields: f } = res?;
        if f.is_some() {
            fields = f;
        }
        let q = match rows.last() {
            None => None,
            Some(prev) => {
                let (h1, h2) = (1.0 / (prev.m - 1) as f64, 1.0 / (m - 1) as f64);
                let mut q = [0.0; 4];
                for v in 0..4 {
                    q[v] = convergence_rate(10f64.powf(prev.log10_errors[v]), err[v], h1, h2)?;
                }
                Some(q)
            }
        };
        rows.push(ConvergenceRow { m, steps, log10_errors: err.map(f64::log10), q });
    }
    Ok(ConvergenceReport {
        order: base.order.label(),
        coupling: base.coupling_mode()?,
        t_end: base.t_end,
        cfl: base.cfl_value(),
        variables: VARIABLES.map(String::from),
        rows,
        fields,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_formula() {
        let q = convergence_rate(10f64.powf(-4.16), 10f64.powf(-4.76), 1.0 / 50.0, 1.0 / 100.0).unwrap();
        assert!((q - 2.0).abs() < 0.01);
        assert_eq!(convergence_rate(1.0, 1.0, 2.0, 1.0).unwrap(), 0.0);
        assert!((convergence_rate(4.0, 1.0, 2.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(convergence_rate(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(convergence_rate(1.0, 1.0, 1.0, 1.0).is_err());
    }
}
