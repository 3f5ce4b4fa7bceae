//! Sweeps, verification suites and record output behind the `jlparity` binary.

mod record;
mod suites;
mod sweep;

pub use record::{write_records, write_report, Format, InstanceRecord, WitnessSummary, SCHEMA_VERSION};
pub use suites::{
    beta_independence, csd_equivalence, dieudonne_suite, framework_suite, gl_checks, gl_checks_on, tower_spec,
    verify_suite,
};
pub use sweep::{evaluate_point, instance_params, run_sweep, Indexed, PointModels, SweepOutcome};

use serde::Serialize;

use crate::division::Case;
use crate::error::{Error, Result};
use crate::galois::{prime_power, TABLE_LIMIT};

/// Largest degree of the induced representation a sweep will build.
pub const MAX_DIM: u64 = 200;

/// One `(case, q, n)` point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GridPoint {
    pub case: Case,
    pub q: u64,
    pub n: u32,
}

impl GridPoint {
    /// `(q^n - 1)/(q - 1)`.
    pub fn dim(&self) -> u64 {
        (self.q.pow(self.n) - 1) / (self.q - 1)
    }

    /// Order of the top field `F_{q^n}` or `F_{q^{2n}}`.
    pub fn field_order(&self) -> Option<u64> {
        let e = match self.case {
            Case::Ramified => 2 * self.n,
            _ => self.n,
        };
        self.q.checked_pow(e)
    }

    pub fn qprime(&self) -> Option<u64> {
        (self.case == Case::Unramified).then(|| (self.q as f64).sqrt().round() as u64)
    }

    /// Rejects points outside the supported range.
    pub fn check_range(&self) -> Result<()> {
        let (p, f) = prime_power(self.q)?;
        if self.n == 0 {
            return Err(Error::InvalidParameters("n must be positive".into()));
        }
        match self.case {
            Case::Unramified if f % 2 != 0 => {
                return Err(Error::InvalidParameters(format!("unramified case needs q = q'^2, got q = {}", self.q)))
            }
            Case::Ramified if p == 2 => return Err(Error::InvalidParameters("ramified case needs odd q".into())),
            _ => {}
        }
        match self.field_order() {
            Some(o) if o <= TABLE_LIMIT => {}
            _ => {
                return Err(Error::UnsupportedRange(format!(
                    "{} q={} n={}: field order exceeds {TABLE_LIMIT}",
                    self.case, self.q, self.n
                )))
            }
        }
        if self.dim() > MAX_DIM {
            return Err(Error::UnsupportedRange(format!(
                "{} q={} n={}: dimension {} exceeds {MAX_DIM}",
                self.case,
                self.q,
                self.n,
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Everything a run needs besides the subcommand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub cases: Vec<Case>,
    pub q: Option<Vec<u64>>,
    pub qprime: Option<Vec<u64>>,
    pub n: Option<Vec<u32>>,
    pub m: usize,
    /// Order `N` of the roots of unity `c` ranges over; `4(q-1)` when absent.
    pub c_order: Option<u64>,
    pub seed: u64,
    pub timing: bool,
    pub inject_fault: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cases: vec![Case::Split, Case::Ramified, Case::Unramified],
            q: None,
            qprime: None,
            n: None,
            m: 2,
            c_order: None,
            seed: 0,
            timing: false,
            inject_fault: false,
        }
    }
}

fn default_qs(case: Case) -> Vec<u64> {
    match case {
        Case::Split => vec![2, 3, 4, 5],
        Case::Ramified => vec![3, 5],
        Case::Unramified => vec![4, 9],
    }
}

fn default_ns(case: Case) -> Vec<u32> {
    match case {
        Case::Split => vec![2, 4],
        Case::Ramified => vec![1, 3],
        Case::Unramified => vec![2, 3],
    }
}

impl RunConfig {
    /// `c_order` for a given `q`.
    pub fn c_order_for(&self, q: u64) -> u64 {
        self.c_order.unwrap_or(4 * (q - 1))
    }

    /// Points of the sweep, sorted. Explicit values out of range are an error;
    /// combinations that do not exist for a case (for instance even `q` when
    /// ramified) are skipped.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        if self.m == 0 {
            return Err(Error::InvalidParameters("m must be at least 1".into()));
        }
        if self.c_order == Some(0) {
            return Err(Error::InvalidParameters("c-order must be positive".into()));
        }
        let mut out = Vec::new();
        for &case in &self.cases {
            let qs = match (case, &self.qprime, &self.q) {
                (Case::Unramified, Some(qp), _) => qp.iter().map(|&x| x * x).collect(),
                (_, _, Some(q)) => q.clone(),
                _ => default_qs(case),
            };
            let ns = self.n.clone().unwrap_or_else(|| default_ns(case));
            for &q in &qs {
                let (p, f) = prime_power(q)?;
                let exists = match case {
                    Case::Split => true,
                    Case::Ramified => p != 2,
                    Case::Unramified => f % 2 == 0,
                };
                if !exists {
                    continue;
                }
                for &n in &ns {
                    let pt = GridPoint { case, q, n };
                    pt.check_range()?;
                    out.push(pt);
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let g = RunConfig::default().grid().unwrap();
        assert_eq!(g.len(), 8 + 4 + 4);
        assert!(g.iter().all(|p| p.dim() <= MAX_DIM));
    }

    #[test]
    fn out_of_range_is_rejected() {
        let cfg = RunConfig { cases: vec![Case::Split], q: Some(vec![5]), n: Some(vec![5]), ..Default::default() };
        assert!(matches!(cfg.grid(), Err(Error::UnsupportedRange(_))));
    }

    #[test]
    fn missing_case_is_skipped() {
        let cfg = RunConfig { cases: vec![Case::Ramified], q: Some(vec![4]), ..Default::default() };
        assert!(cfg.grid().unwrap().is_empty());
    }
}
