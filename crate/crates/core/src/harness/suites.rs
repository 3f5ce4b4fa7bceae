use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sweep::{evaluate, instance_params, PointModels};
use super::{GridPoint, RunConfig};
use crate::cyclo::RootOfUnity;
use crate::division::{all_betas, check_nonsquare_twist, Case, DModel, SscParamsD, TwistData};
use crate::error::Result;
use crate::galois::{prime_power, MultChar, Tower, TowerSpec};
use crate::gl::{
    contragredient_params, is_conjugate_self_dual, jl_of_gl_params, tau_params, verify_intertwiner_gl,
    verify_intertwiner_with, verify_tau_twist_gl, CheckBudget, GlModel, SscParamsGL,
};
use crate::parity::framework::{builtin, check_framework_finite, check_product};
use crate::parity::monomial::verify_cocycle;
use crate::parity::{build_rep_d, evaluate_instance, irreducibility_check};
use crate::report::Report;

fn case_exists(case: Case, q: u64) -> bool {
    let Ok((p, f)) = prime_power(q) else { return false };
    match case {
        Case::Split => true,
        Case::Ramified => p != 2,
        Case::Unramified => f % 2 == 0,
    }
}

/// Every existing `(case, q, n)` with `q <= q_max`, `n <= n_max`.
fn all_points(q_max: u64, n_max: u32) -> Vec<GridPoint> {
    let mut out = Vec::new();
    for case in [Case::Split, Case::Ramified, Case::Unramified] {
        for q in 2..=q_max {
            if !case_exists(case, q) {
                continue;
            }
            for n in 1..=n_max {
                out.push(GridPoint { case, q, n });
            }
        }
    }
    out
}

fn seeded(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn tag_of(pt: &GridPoint) -> u64 {
    (pt.case as u64) << 40 | pt.q << 8 | pt.n as u64
}

/// Intertwiner and `tau`-twist identities on the GL side for every model with
/// `q <= q_max`, `n <= n_max`. Level-2 elements of `Iw_+` are enumerated when
/// `q, n <= exhaustive_max`; `samples` random elements of `H` are checked per `zeta`.
pub fn gl_checks(q_max: u64, n_max: u32, exhaustive_max: u64, samples: usize, seed: u64) -> Result<Report> {
    let mut r = gl_checks_on(&all_points(q_max, n_max), exhaustive_max, samples, seed)?;
    r.name = format!("GL identities q<={q_max} n<={n_max}");
    Ok(r)
}

/// [`gl_checks`] on an explicit list of points.
pub fn gl_checks_on(points: &[GridPoint], exhaustive_max: u64, samples: usize, seed: u64) -> Result<Report> {
    let jobs: Vec<(GridPoint, u64)> =
        points.iter().copied().flat_map(|pt| (0..pt.q - 1).map(move |z| (pt, z))).collect();
    let reports: Vec<Result<Report>> = jobs
        .par_iter()
        .map(|&(pt, zl)| {
            let gl = GlModel::new(pt.case, pt.q, pt.n)?;
            let f = gl.field();
            let zeta = f.pow(f.subfield_generator(gl.q_degree())?, zl as i64)?;
            let budget = CheckBudget { exhaustive: pt.q <= exhaustive_max && pt.n as u64 <= exhaustive_max, samples };
            let mut rng = seeded(seed, tag_of(&pt) ^ zl);
            let mut r = Report::new(format!("{} q={} n={} zeta=g^{zl}", pt.case, pt.q, pt.n));
            let c = RootOfUnity::new(4 * (pt.q - 1), 1)?;
            let chi = MultChar::new(f, gl.q_degree(), 1)?;
            let p = SscParamsGL::new(&gl, zeta, chi, c)?;
            r.absorb(verify_intertwiner_gl(&gl, &p, budget, &mut rng)?);
            r.absorb(verify_tau_twist_gl(&gl, &p, budget, &mut rng)?);
            let light = CheckBudget { exhaustive: false, samples: 0 };
            for ce in 0..pt.q - 1 {
                let chi = MultChar::new(f, gl.q_degree(), ce as i64)?;
                let p = SscParamsGL::new(&gl, zeta, chi, c)?;
                r.absorb(verify_intertwiner_gl(&gl, &p, light, &mut rng)?);
                r.absorb(verify_tau_twist_gl(&gl, &p, light, &mut rng)?);
            }
            Ok(r)
        })
        .collect();
    let mut out = Report::new("GL identities");
    for r in reports {
        out.absorb(r?);
    }
    Ok(out)
}

/// Self-duality criterion against `tau(params) = dual(params)` on every triple
/// with `q <= q_max`, `n <= n_max`; then the pairing solver on every
/// self-dual triple and on `non_csd_per_point` random other triples of each
/// point within the supported range.
pub fn csd_equivalence(q_max: u64, n_max: u32, non_csd_per_point: usize, seed: u64) -> Result<Report> {
    let mut out = Report::new(format!("self-duality criterion q<={q_max} n<={n_max}"));
    let mut solver_jobs = Vec::new();
    for pt in all_points(q_max, n_max) {
        let pm = match pt.check_range() {
            Ok(()) => Some(PointModels::new(pt, 2)?),
            Err(_) => None,
        };
        let gl = match &pm {
            Some(pm) => pm.gl.clone(),
            None => GlModel::new(pt.case, pt.q, pt.n)?,
        };
        let params = instance_params(&gl, 4 * (pt.q - 1))?;
        let mut agree = true;
        let mut csd = Vec::new();
        let mut other = Vec::new();
        for ix in params {
            let c = is_conjugate_self_dual(&gl, &ix.params)?;
            agree &= c == (tau_params(&gl, &ix.params) == contragredient_params(&gl, &ix.params)?);
            if c {
                csd.push(ix);
            } else {
                other.push(ix);
            }
        }
        out.check_detail(
            format!("{} q={} n={}: criterion = (tau = dual)", pt.case, pt.q, pt.n),
            agree,
            format!("{} self-dual of {}", csd.len(), csd.len() + other.len()),
        );
        if let Some(pm) = pm {
            other.shuffle(&mut seeded(seed, tag_of(&pt)));
            other.truncate(non_csd_per_point);
            for ix in csd.into_iter().chain(other) {
                solver_jobs.push((pm.clone(), ix));
            }
        }
    }
    let records: Vec<_> = solver_jobs.par_iter().map(|(pm, ix)| evaluate(pm, ix, false)).collect();
    let non_csd = records.iter().filter(|r| !r.csd).count();
    let bad_none = records.iter().filter(|r| !r.csd && r.c_jl_brute.is_some()).count();
    let bad_some = records.iter().filter(|r| r.csd && r.c_jl_brute.is_none()).count();
    out.check_detail(
        "solver finds no pairing off the self-dual locus",
        bad_none == 0,
        format!("{bad_none} of {non_csd}"),
    );
    out.check_detail(
        "solver finds a pairing on the self-dual locus",
        bad_some == 0,
        format!("{bad_some} of {}", records.len() - non_csd),
    );
    out.check_detail("at least 50 non-self-dual solver instances", non_csd >= 50, format!("{non_csd}"));
    for r in records.iter().filter(|r| !r.consistent) {
        out.check_detail(
            format!(
                "{} q={} n={} zeta={} chi={} c={}/{} consistent",
                r.case, r.q, r.n, r.zeta_dlog, r.chi_exp, r.c_exp, r.c_order
            ),
            false,
            r.error.clone().unwrap_or_default(),
        );
    }
    Ok(out)
}

/// Every `beta` of a ramified model gives a valid twist with the same
/// self-dual locus and the same parities.
pub fn beta_independence(q: u64, n: u32) -> Result<Report> {
    let d = DModel::new(Case::Ramified, q, n, 2)?;
    let gl = GlModel::for_d(&d)?;
    let params = instance_params(&gl, 4 * (q - 1))?;
    let betas = all_betas(&d)?;
    let mut out = Report::new(format!("beta independence q={q} n={n}"));
    out.check_detail("beta count = q^n - 1", betas.len() as u64 == q.pow(n) - 1, format!("{}", betas.len()));
    let rows: Vec<Result<(Report, Vec<(bool, Option<i8>)>)>> = betas
        .par_iter()
        .map(|&beta| {
            let tw = TwistData::ramified(&d, beta)?;
            let mut r = tw.check_axioms(&d);
            r.name = format!("beta={beta}");
            let mut sig = Vec::with_capacity(params.len());
            let mut consistent = true;
            for ix in &params {
                let o = evaluate_instance(&gl, &d, &tw, &ix.params)?;
                consistent &= o.consistent();
                sig.push((o.brute.is_some(), o.brute));
            }
            r.check("all triples consistent", consistent);
            Ok((r, sig))
        })
        .collect();
    let mut first: Option<Vec<(bool, Option<i8>)>> = None;
    let mut same = true;
    for row in rows {
        let (r, sig) = row?;
        out.absorb(r);
        match &first {
            None => first = Some(sig),
            Some(f) => same &= *f == sig,
        }
    }
    out.check_detail(
        "identical pairing existence and parity for every beta",
        same,
        format!("{} triples", params.len()),
    );
    Ok(out)
}

fn fault_checks(seed: u64) -> Result<Report> {
    let mut r = Report::new("injected faults");
    let gl = GlModel::new(Case::Split, 3, 2)?;
    let p = SscParamsGL::new(&gl, crate::galois::Elem(1), MultChar::trivial(gl.field(), 1)?, RootOfUnity::one())?;
    let ones = vec![crate::galois::Elem(1); gl.n()];
    let mut rng = seeded(seed, 1);
    r.absorb(verify_intertwiner_with(&gl, &p, &ones, CheckBudget { exhaustive: true, samples: 0 }, &mut rng)?);
    let d = DModel::new(Case::Split, 3, 2, 2)?;
    let tw = TwistData::canonical(&d)?;
    let pd = SscParamsD::new(&d, crate::galois::Elem(1), MultChar::trivial(d.field(), 1)?, RootOfUnity::one())?
        .with_trivial_wild_part();
    r.check("trivial wild part: induced representation irreducible", irreducibility_check(&build_rep_d(&d, &pd, &tw)?));
    Ok(r)
}

/// Twist axioms, cocycle, irreducibility and the GL identities. Without explicit
/// ranges the GL identities cover every model with `q <= 5`, `n <= 4`.
pub fn verify_suite(cfg: &RunConfig) -> Result<Report> {
    let mut out = Report::new("verify");
    for pt in cfg.grid()? {
        let pm = PointModels::new(pt, cfg.m)?;
        let mut r = pm.tw.check_axioms(&pm.d);
        r.name = format!("{} q={} n={}", pt.case, pt.q, pt.n);
        if pt.case == Case::Ramified && pt.n % 2 == 1 {
            r.absorb(check_nonsquare_twist(&pm.d)?);
        }
        let mut rng = seeded(cfg.seed, tag_of(&pt));
        let mut irreducible = true;
        let mut z_in_h = true;
        let mut count = 0;
        for ix in instance_params(&pm.gl, cfg.c_order_for(pt.q))? {
            if !is_conjugate_self_dual(&pm.gl, &ix.params)? {
                continue;
            }
            let pd = jl_of_gl_params(&pm.d, &ix.params)?;
            if count < 3 {
                r.absorb(verify_cocycle(&pm.d, &pd, 200, &mut rng)?);
            }
            let o = evaluate_instance(&pm.gl, &pm.d, &pm.tw, &ix.params)?;
            irreducible &= o.irreducible;
            z_in_h &= o.witness.as_ref().is_some_and(|w| w.z_in_h);
            count += 1;
        }
        r.check_detail("induced representations irreducible", irreducible, format!("{count} self-dual triples"));
        r.check("closed-form z lies in H", z_in_h);
        out.absorb(r);
    }
    let explicit = cfg.q.is_some() || cfg.qprime.is_some() || cfg.n.is_some();
    let points = if explicit { cfg.grid()? } else { all_points(5, 4) };
    out.absorb(gl_checks_on(&points, 3, 1000, cfg.seed)?);
    if cfg.inject_fault {
        out.absorb(fault_checks(cfg.seed)?);
    }
    Ok(out)
}

/// Dieudonne modules, formal modules and every `beta` for `q = 3`, `n = 3`.
pub fn dieudonne_suite(n_max: u32, q_max: u64) -> Result<Report> {
    let mut out = Report::new("dieudonne");
    out.absorb(crate::dieudonne::dieudonne_suite(n_max, q_max)?);
    out.absorb(crate::dieudonne::all_beta_suite(&DModel::new(Case::Ramified, 3, 3, 2)?)?);
    Ok(out)
}

/// Built-in finite groups and a few products.
pub fn framework_suite() -> Result<Report> {
    let mut out = Report::new("framework");
    let all = builtin::all()?;
    for (g, reps) in &all {
        out.absorb(check_framework_finite(g, reps)?);
    }
    for (i, j) in [(4, 3), (1, 6), (2, 0), (5, 5)] {
        let (g1, r1) = &all[i];
        let (g2, r2) = &all[j];
        out.absorb(check_product(g1, r1, g2, r2)?);
    }
    Ok(out)
}

/// The field tower used for one `(case, q, n)`.
pub fn tower_spec(pt: GridPoint) -> Result<TowerSpec> {
    let (p, f) = prime_power(pt.q)?;
    let mut levels: Vec<(&str, u32)> = vec![("F_p", 1), ("F_q", f), ("F_q^n", f * pt.n)];
    if pt.case == Case::Unramified {
        levels.push(("F_q'", f / 2));
    }
    if pt.case == Case::Ramified {
        levels.push(("F_q^2n", 2 * f * pt.n));
    }
    Ok(Tower::new(p, &levels)?.spec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_independence_q3_n1() {
        assert!(beta_independence(3, 1).unwrap().passed());
    }

    #[test]
    fn faults_are_detected() {
        let r = fault_checks(0).unwrap();
        assert!(r.failures().any(|c| c.name.contains("Lambda identity")), "{r}");
        assert!(r.failures().any(|c| c.name.contains("trivial wild part")), "{r}");
    }

    #[test]
    fn tower_matches_model_field() {
        let pt = GridPoint { case: Case::Ramified, q: 3, n: 3 };
        let spec = tower_spec(pt).unwrap();
        let d = DModel::new(pt.case, pt.q, pt.n, 2).unwrap();
        assert_eq!(spec.modulus, d.field().modulus().to_vec());
        assert_eq!(spec.levels.len(), 4);
    }

    #[test]
    fn framework_passes() {
        assert!(framework_suite().unwrap().passed());
    }
}
