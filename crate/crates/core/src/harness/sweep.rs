use std::time::Instant;

use rayon::prelude::*;

use super::record::{InstanceRecord, WitnessSummary, SCHEMA_VERSION};
use super::{GridPoint, RunConfig};
use crate::cyclo::RootOfUnity;
use crate::division::{DModel, TwistData};
use crate::error::{Error, Result};
use crate::galois::MultChar;
use crate::gl::{is_conjugate_self_dual, GlModel, SscParamsGL};
use crate::parity::{evaluate_instance, ParityOutcome};

/// Models for one grid point, sharing one field.
#[derive(Debug, Clone)]
pub struct PointModels {
    pub point: GridPoint,
    pub d: DModel,
    pub gl: GlModel,
    pub tw: TwistData,
}

impl PointModels {
    pub fn new(point: GridPoint, m: usize) -> Result<PointModels> {
        let d = DModel::new(point.case, point.q, point.n, m)?;
        let gl = GlModel::for_d(&d)?;
        let tw = TwistData::canonical(&d)?;
        Ok(PointModels { point, d, gl, tw })
    }
}

/// A parameter triple with its integer coordinates.
#[derive(Debug, Clone)]
pub struct Indexed {
    pub zeta_dlog: u64,
    pub chi_exp: u64,
    pub c_exp: u64,
    pub c_order: u64,
    pub params: SscParamsGL,
}

/// Every `(zeta, chi, c)` with `c` an `N`-th root of unity, in sort order.
pub fn instance_params(gl: &GlModel, c_order: u64) -> Result<Vec<Indexed>> {
    let f = gl.field();
    let q = gl.q();
    let g = f.subfield_generator(gl.q_degree())?;
    let mut out = Vec::new();
    for zl in 0..q - 1 {
        let zeta = f.pow(g, zl as i64)?;
        for ce in 0..q - 1 {
            let chi = MultChar::new(f, gl.q_degree(), ce as i64)?;
            for k in 0..c_order {
                let c = RootOfUnity::new(c_order, k as i64)?;
                out.push(Indexed {
                    zeta_dlog: zl,
                    chi_exp: ce,
                    c_exp: k,
                    c_order,
                    params: SscParamsGL::new(gl, zeta, chi, c)?,
                });
            }
        }
    }
    Ok(out)
}

pub(crate) fn record_of(
    pm: &PointModels,
    ix: &Indexed,
    outcome: Result<ParityOutcome>,
    ms: Option<f64>,
) -> InstanceRecord {
    let pt = pm.point;
    let mut rec = InstanceRecord {
        schema_version: SCHEMA_VERSION,
        case: pt.case,
        q: pt.q,
        qprime: pt.qprime(),
        n: pt.n,
        zeta_dlog: ix.zeta_dlog,
        chi_exp: ix.chi_exp,
        c_order: ix.c_order,
        c_exp: ix.c_exp,
        csd: false,
        tau_matches_dual: false,
        irreducible: false,
        c_jl_brute: None,
        c_jl_closed: None,
        c_jl_expected: None,
        c_rec_predicted: None,
        consistent: false,
        witness: None,
        error: None,
        timing_ms: ms,
    };
    match outcome {
        Ok(o) => {
            rec.csd = o.csd;
            rec.tau_matches_dual = o.tau_matches_dual;
            rec.irreducible = o.irreducible;
            rec.c_jl_brute = o.brute;
            rec.c_jl_closed = o.closed;
            rec.c_jl_expected = o.expected_jl;
            rec.c_rec_predicted = o.predicted_rec;
            rec.consistent = o.consistent();
            rec.error = o.closed_error.clone();
            rec.witness = o.witness.as_ref().map(|w| WitnessSummary {
                z_valuation: w.z.k,
                z_leading: w.z.leading().0,
                z_in_h: w.z_in_h,
                epsilon: w.epsilon.map(|e| e.0),
            });
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

pub(crate) fn evaluate(pm: &PointModels, ix: &Indexed, timing: bool) -> InstanceRecord {
    let start = Instant::now();
    let outcome = evaluate_instance(&pm.gl, &pm.d, &pm.tw, &ix.params);
    let ms = timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    record_of(pm, ix, outcome, ms)
}

/// Evaluates one triple given by integer coordinates, whether or not it is self-dual.
pub fn evaluate_point(
    pt: GridPoint,
    m: usize,
    zeta_dlog: u64,
    chi_exp: u64,
    c_order: u64,
    c_exp: u64,
) -> Result<InstanceRecord> {
    pt.check_range()?;
    if c_order == 0 {
        return Err(Error::InvalidParameters("c-order must be positive".into()));
    }
    let pm = PointModels::new(pt, m)?;
    let f = pm.gl.field();
    let zeta = f.pow(f.subfield_generator(pm.gl.q_degree())?, zeta_dlog as i64)?;
    let chi = MultChar::new(f, pm.gl.q_degree(), chi_exp as i64)?;
    let c = RootOfUnity::new(c_order, c_exp as i64)?;
    let ix = Indexed {
        zeta_dlog: zeta_dlog % (pt.q - 1),
        chi_exp: chi.exponent,
        c_exp: c_exp % c_order,
        c_order,
        params: SscParamsGL::new(&pm.gl, zeta, chi, c)?,
    };
    Ok(evaluate(&pm, &ix, false))
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub records: Vec<InstanceRecord>,
    pub warnings: Vec<String>,
}

impl SweepOutcome {
    pub fn all_consistent(&self) -> bool {
        self.records.iter().all(|r| r.consistent)
    }
}

/// Evaluates every conjugate self-dual triple of the configured grid.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepOutcome> {
    let grid = cfg.grid()?;
    let mut warnings = Vec::new();
    if grid.is_empty() {
        warnings.push("no (case, q, n) point matches the requested ranges".to_string());
    }
    let mut jobs = Vec::new();
    for pt in grid {
        let pm = PointModels::new(pt, cfg.m)?;
        let mut count = 0;
        for ix in instance_params(&pm.gl, cfg.c_order_for(pt.q))? {
            if is_conjugate_self_dual(&pm.gl, &ix.params)? {
                jobs.push((pm.clone(), ix));
                count += 1;
            }
        }
        if count == 0 {
            warnings.push(format!("{} q={} n={}: no conjugate self-dual parameters", pt.case, pt.q, pt.n));
        }
    }
    let mut records: Vec<InstanceRecord> = jobs.par_iter().map(|(pm, ix)| evaluate(pm, ix, cfg.timing)).collect();
    records.sort_by_key(|r| r.sort_key());
    Ok(SweepOutcome { records, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::Case;

    #[test]
    fn split_q3_n2_has_eight_instances() {
        let cfg = RunConfig { cases: vec![Case::Split], q: Some(vec![3]), n: Some(vec![2]), ..Default::default() };
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.records.len(), 8);
        assert!(out.all_consistent());
    }

    #[test]
    fn ramified_even_n_warns() {
        let cfg = RunConfig { cases: vec![Case::Ramified], q: Some(vec![3]), n: Some(vec![2]), ..Default::default() };
        let out = run_sweep(&cfg).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.warnings.len(), 1);
    }
}
