//! The standard Dieudonne module `(D, F, V)` of rank `n` over `F_qbar[[u]]/u^m`,
//! the action of `O_D = O_{F_n}[Pi]` on it, and the explicit isomorphisms used to
//! identify the pair `(tau, t)` in the unramified and ramified cases.
//!
//! Semilinear twists are counted in absolute `p`-Frobenius units, so `sigma`
//! (the `q`-Frobenius) has twist `f` where `q = p^f`.

use std::sync::Arc;

use serde::Serialize;

use crate::division::{all_betas, nonsquare_beta, Case, DModel, TwistData};
use crate::error::{Error, Result};
use crate::galois::{Elem, GaloisField};
use crate::local::{rank_over_field, OreRing, SemilinearMap, TruncElem, TruncRing};
use crate::report::Report;

/// `(D, F, V)` with `F(e_i) = u e_{i+1}`, `F(e_n) = e_1`, `V(e_i) = e_{i-1}`, `V(e_1) = u e_n`.
#[derive(Debug, Clone)]
pub struct StdDieudonne {
    pub n: usize,
    pub ring: TruncRing,
    /// `sigma` in `p`-Frobenius units.
    pub sigma: i64,
    qn_degree: u32,
    pub frob: SemilinearMap,
    pub ver: SemilinearMap,
    pub pi: SemilinearMap,
}

/// `(D, F', V')` with `-u` in place of `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistedDieudonne {
    pub frob: SemilinearMap,
    pub ver: SemilinearMap,
}

/// Columns of the shift `e_i -> c_i e_{i+1}` (up) or `e_i -> c_i e_{i-1}` (down), with wrap factor `w`.
fn shift(ring: &TruncRing, n: usize, up: bool, step: &TruncElem, wrap: &TruncElem, twist: i64) -> SemilinearMap {
    let columns: Vec<Vec<TruncElem>> = (0..n)
        .map(|j| {
            let mut col = vec![ring.zero(); n];
            if up {
                if j + 1 < n {
                    col[j + 1] = step.clone();
                } else {
                    col[0] = ring.add(&col[0], wrap);
                }
            } else if j > 0 {
                col[j - 1] = step.clone();
            } else {
                col[n - 1] = ring.add(&col[n - 1], wrap);
            }
            col
        })
        .collect();
    SemilinearMap::from_columns(ring, &columns, twist)
}

impl StdDieudonne {
    /// Uses `field` for coefficients; it must contain `F_{q^n}`.
    pub fn build(field: Arc<GaloisField>, q_degree: u32, n: usize, m: usize) -> Result<StdDieudonne> {
        if n == 0 || m < 2 {
            return Err(Error::InvalidParameters("need n >= 1 and m >= 2".into()));
        }
        let qn_degree = q_degree * n as u32;
        if field.degree() % qn_degree != 0 {
            return Err(Error::NotSubfield { sub: qn_degree, sup: field.degree() });
        }
        let ring = TruncRing::new(field, m)?;
        let u = ring.uniformizer();
        let one = ring.one();
        let sigma = q_degree as i64;
        // for n = 1 both branches land on e_1, giving F = 1 and V = u
        let frob = shift(&ring, n, true, &u, &one, sigma);
        let ver = shift(&ring, n, false, &one, &u, -sigma);
        let pi = SemilinearMap { twist: 0, ..ver.clone() };
        Ok(StdDieudonne { n, ring, sigma, qn_degree, frob, ver, pi })
    }

    /// Builds the module on the coefficient field of a division algebra model.
    pub fn for_model(model: &DModel) -> Result<StdDieudonne> {
        Self::build(model.field().clone(), model.q_degree(), model.n() as usize, model.m().max(2))
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.ring.field()
    }

    pub fn twisted(&self) -> TwistedDieudonne {
        let r = &self.ring;
        let minus_u = r.neg(&r.uniformizer());
        TwistedDieudonne {
            frob: shift(r, self.n, true, &minus_u, &r.one(), self.sigma),
            ver: shift(r, self.n, false, &r.one(), &minus_u, -self.sigma),
        }
    }

    /// `a` acting by `e_i -> sigma^i(a) e_i`.
    pub fn scalar_action(&self, a: Elem) -> SemilinearMap {
        let f = self.field();
        let diag: Vec<TruncElem> =
            (1..=self.n).map(|i| self.ring.constant(f.frobenius_p(a, self.sigma * i as i64))).collect();
        SemilinearMap::diagonal(&self.ring, &diag, 0)
    }

    pub fn scalar_u(&self, c: Elem) -> SemilinearMap {
        let cu = self.ring.scale(c, &self.ring.uniformizer());
        SemilinearMap::diagonal(&self.ring, &vec![cu; self.n], 0)
    }

    /// A spanning set of `F_{q^n}`: a multiplicative generator and an additive basis.
    pub fn test_scalars(&self) -> Result<Vec<Elem>> {
        let f = self.field();
        let mut out = vec![f.subfield_generator(self.qn_degree)?];
        out.extend(f.subfield_basis(self.qn_degree)?);
        Ok(out)
    }

    fn compose(&self, a: &SemilinearMap, b: &SemilinearMap) -> Result<SemilinearMap> {
        a.compose(&self.ring, b)
    }

    /// The defining shape of `F`, `V`, `Pi` together with `FV = VF = u`, `Pi^n = u` and `dim D/VD = 1`.
    pub fn check_invariants(&self) -> Result<Report> {
        let mut r = Report::new(format!("Dieudonne module n={} q-degree={}", self.n, self.sigma));
        let e = |i: usize| -> Vec<TruncElem> {
            let mut v = vec![self.ring.zero(); self.n];
            v[i] = self.ring.one();
            v
        };
        let u = self.ring.uniformizer();
        let mut f_ok = true;
        let mut v_ok = true;
        for i in 0..self.n {
            let fe = self.frob.apply(&self.ring, &e(i))?;
            let expect_f = if i + 1 < self.n {
                let mut v = vec![self.ring.zero(); self.n];
                v[i + 1] = u.clone();
                v
            } else {
                e(0)
            };
            f_ok &= fe == expect_f;
            let ve = self.ver.apply(&self.ring, &e(i))?;
            let expect_v = if i > 0 {
                e(i - 1)
            } else {
                let mut v = vec![self.ring.zero(); self.n];
                v[self.n - 1] = u.clone();
                v
            };
            v_ok &= ve == expect_v;
        }
        if self.n > 1 {
            r.check("F(e_i) = u e_(i+1), F(e_n) = e_1", f_ok);
            r.check("V(e_i) = e_(i-1), V(e_1) = u e_n", v_ok);
        } else {
            r.check("F(e_1) = e_1", f_ok);
            r.check("V(e_1) = u e_1", v_ok);
        }
        let ucoef = self.scalar_u(Elem(1));
        r.check("FV = u", self.compose(&self.frob, &self.ver)? == ucoef);
        r.check("VF = u", self.compose(&self.ver, &self.frob)? == ucoef);
        let mut pin = SemilinearMap::identity(&self.ring, self.n);
        for _ in 0..self.n {
            pin = self.compose(&pin, &self.pi)?;
        }
        r.check("Pi^n = u", pin == ucoef);
        let rank = rank_over_field(self.field(), self.n, self.n, &self.ver.residue());
        r.check_detail("dim D/VD = 1", rank + 1 == self.n, format!("rank of V mod u = {rank}"));
        Ok(r)
    }
}

/// `Pi` commutes with `F`, `V`; scalars commute with `F`, `V`; `Pi a = sigma(a) Pi`.
pub fn check_endo_relations(module: &StdDieudonne, pi: &SemilinearMap) -> Result<Report> {
    let mut r = Report::new(format!("endomorphisms n={}", module.n));
    let c = |a: &SemilinearMap, b: &SemilinearMap| module.compose(a, b);
    r.check("Pi F = F Pi", c(pi, &module.frob)? == c(&module.frob, pi)?);
    r.check("Pi V = V Pi", c(pi, &module.ver)? == c(&module.ver, pi)?);
    let f = module.field();
    let (mut comm_f, mut comm_v, mut skew) = (true, true, true);
    for a in module.test_scalars()? {
        let act = module.scalar_action(a);
        comm_f &= c(&act, &module.frob)? == c(&module.frob, &act)?;
        comm_v &= c(&act, &module.ver)? == c(&module.ver, &act)?;
        let sa = module.scalar_action(f.frobenius_p(a, module.sigma));
        skew &= c(pi, &act)? == c(&sa, pi)?;
    }
    r.check("scalars commute with F", comm_f);
    r.check("scalars commute with V", comm_v);
    r.check("Pi a = sigma(a) Pi", skew);
    Ok(r)
}

/// Unramified case: `Pi = V` as arrays, the coordinatewise identification fixes `F` and `V`,
/// and `sigma` applied after `V` equals `Pi`. Cross-checked against the division algebra twist.
pub fn verify_unramified_iota(model: &DModel) -> Result<Report> {
    if model.case() != Case::Unramified {
        return Err(Error::InvalidParameters("model is not unramified".into()));
    }
    let module = StdDieudonne::for_model(model)?;
    let ring = &module.ring;
    let mut r = Report::new(format!("unramified iota q={} n={}", model.q(), model.n()));
    r.check("Pi(e_i) = V(e_i)", module.pi.entries == module.ver.entries);
    let half = module.sigma / 2;
    let tau = SemilinearMap { twist: half, ..SemilinearMap::identity(ring, module.n) };
    let tau_inv = SemilinearMap { twist: -half, ..tau.clone() };
    let conj = |m: &SemilinearMap| -> Result<SemilinearMap> { tau.compose(ring, &m.compose(ring, &tau_inv)?) };
    r.check("tau_* F = F under coordinatewise tau", conj(&module.frob)? == module.frob);
    r.check("tau_* V = V under coordinatewise tau", conj(&module.ver)? == module.ver);
    let sigma_coords = SemilinearMap { twist: module.sigma, ..SemilinearMap::identity(ring, module.n) };
    r.check("sigma o V = Pi", sigma_coords.compose(ring, &module.ver)? == module.pi);

    let tw = TwistData::unramified(model)?;
    r.check("division algebra twist has t = Pi", tw.t == model.pi());
    r.check("division algebra twist fixes Pi", tw.apply(model, &model.pi()) == model.pi());
    let f = model.field();
    let mut scal = true;
    for a in module.test_scalars()? {
        let conj_a = conj(&module.scalar_action(a))?;
        let image = f.frobenius_p(a, half);
        scal &= conj_a == module.scalar_action(image);
        scal &= tw.apply(model, &model.constant(a)) == model.constant(image);
    }
    r.check("tau(a) = a^q' on both sides", scal);
    Ok(r)
}

/// Ramified case for one `beta`: with `iota = diag(sigma^i(beta)^{-1})`,
/// `iota a iota^{-1} = a`, `iota Pi iota^{-1} = tau^{-1}(alpha Pi)` and `iota iota = beta^{-2}`.
pub fn verify_ramified_iota(model: &DModel, beta: Elem) -> Result<Report> {
    let tw = TwistData::ramified(model, beta)?;
    let alpha = tw.alpha.expect("ramified twist carries alpha");
    let module = StdDieudonne::for_model(model)?;
    let ring = &module.ring;
    let f = model.field();
    let n = module.n;
    let mut r = Report::new(format!("ramified iota q={} n={} beta={}", model.q(), model.n(), beta));

    let sig = |x: Elem, i: i64| f.frobenius_p(x, module.sigma * i);
    r.check("sigma(beta)/beta = alpha", f.div(sig(beta, 1), beta)? == alpha);
    r.check("sigma(beta)/sigma^n(beta) = -alpha", f.div(sig(beta, 1), sig(beta, n as i64))? == f.neg(alpha));
    let iota_diag: Vec<TruncElem> =
        (1..=n).map(|i| Ok(ring.constant(f.inv(sig(beta, i as i64))?))).collect::<Result<_>>()?;
    let iota = SemilinearMap::diagonal(ring, &iota_diag, 0);
    let iota_inv_diag: Vec<TruncElem> = (1..=n).map(|i| ring.constant(sig(beta, i as i64))).collect();
    let iota_inv = SemilinearMap::diagonal(ring, &iota_inv_diag, 0);
    let conj = |m: &SemilinearMap| -> Result<SemilinearMap> { iota.compose(ring, &m.compose(ring, &iota_inv)?) };
    let tau_inv_entries = |m: &SemilinearMap| m.map_entries(|e| ring.negate_u(e));

    let mut scal = true;
    for a in module.test_scalars()? {
        let act = module.scalar_action(a);
        scal &= tau_inv_entries(&conj(&act)?) == act;
    }
    r.check("iota a iota^-1 = a", scal);
    let alpha_pi = module.scalar_action(alpha).compose(ring, &module.pi)?;
    r.check("iota Pi iota^-1 = tau^-1(alpha Pi)", conj(&module.pi)? == tau_inv_entries(&alpha_pi));
    let beta_m2 = f.pow(beta, -2)?;
    r.check("iota iota = beta^-2", iota.compose(ring, &iota)? == module.scalar_action(beta_m2));
    let tw_mod = module.twisted();
    r.check("iota V = V' iota", iota.compose(ring, &module.ver)? == tw_mod.ver.compose(ring, &iota)?);
    r.check("F'V' = V'F' = -u", {
        let mu = module.scalar_u(f.from_int(-1));
        tw_mod.frob.compose(ring, &tw_mod.ver)? == mu && tw_mod.ver.compose(ring, &tw_mod.frob)? == mu
    });

    r.check("division algebra twist: tau(Pi) = alpha Pi", tw.apply(model, &model.pi()) == model.monomial(alpha, 1));
    r.check("division algebra twist: t = beta^-2", tw.t == model.constant(beta_m2));
    Ok(r)
}

/// The formal module `[a]X = aX`, `[u]X = X^(q^n)`: `tau` and `t` in `F_{q^n}[Pi]`
/// computed from `iota`, compared with the division algebra twist.
pub fn verify_eqchar(model: &DModel, tw: &TwistData) -> Result<Report> {
    let f = model.field().clone();
    let ring = OreRing::new(f.clone(), model.q_degree());
    let mut r = Report::new(format!("equal characteristic {} q={} n={}", model.case(), model.q(), model.n()));
    let pi = ring.pi();
    let pin = ring.pow(&pi, model.n());
    let gens: Vec<Elem> = {
        let mut g = vec![f.subfield_generator(model.qn_degree())?];
        g.extend(f.subfield_basis(model.qn_degree())?);
        g
    };
    let samples: Vec<Elem> = f.subfield_elements(model.qn_degree())?.into_iter().take(12).collect();
    match model.case() {
        Case::Split => {
            r.check("split: t = 1", tw.t == model.identity());
        }
        Case::Unramified => {
            let half = (model.q_degree() / 2) as i64;
            let tau = |p: &crate::local::OrePoly| {
                crate::local::OrePoly(p.0.iter().map(|&c| f.frobenius_p(c, half)).collect())
            };
            r.check("tau(Pi) = Pi", tau(&pi) == pi);
            let mut hom = true;
            let mut sq = true;
            for &a in &gens {
                let x = ring.add(&ring.constant(a), &pi);
                let y = ring.add(&ring.monomial(a, 2), &ring.constant(Elem(1)));
                hom &= tau(&ring.mul(&x, &y)) == ring.mul(&tau(&x), &tau(&y));
                // tau^2 = Int(Pi)
                sq &= ring.mul(&tau(&tau(&x)), &pi) == ring.mul(&pi, &x);
            }
            r.check("coefficientwise tau is a ring map", hom);
            r.check("tau^2 = Int(t) with t = Pi", sq);
            r.check("matches division algebra twist (t = Pi)", tw.t == model.pi());
        }
        Case::Ramified => {
            let beta = tw.beta.ok_or_else(|| Error::InvalidParameters("ramified twist without beta".into()))?;
            let alpha = tw.alpha.expect("ramified twist carries alpha");
            let binv = f.inv(beta)?;
            // tau(h) = iota h iota^{-1} with iota = beta^{-1}
            let tau = |p: &crate::local::OrePoly| ring.mul(&ring.mul(&ring.constant(binv), p), &ring.constant(beta));
            r.check("tau(Pi) = alpha Pi", tau(&pi) == ring.monomial(alpha, 1));
            r.check("tau(a) = a", gens.iter().all(|&a| tau(&ring.constant(a)) == ring.constant(a)));
            let act_ok = samples.iter().all(|&x| {
                let lhs = ring.apply(&tau(&pi), x);
                let rhs = f.mul(binv, f.frobenius_p(f.mul(beta, x), model.q_degree() as i64));
                lhs == rhs && lhs == f.mul(alpha, f.frobenius_p(x, model.q_degree() as i64))
            });
            r.check("beta^-1 (beta X)^q = alpha X^q", act_ok);
            let t = ring.mul(&ring.constant(binv), &ring.constant(binv));
            r.check("t = beta^-2", t == ring.constant(f.pow(beta, -2)?));
            r.check("matches division algebra twist (alpha)", Some(alpha) == f.pow(beta, model.q() as i64 - 1).ok());
            r.check("matches division algebra twist (t)", tw.t == model.constant(f.pow(beta, -2)?));
            r.check("Pi^n commutes with tau-image", ring.mul(&tau(&pin), &pi) == ring.mul(&pi, &tau(&pin)));
            if model.n() % 2 == 1 {
                if let Ok(b0) = nonsquare_beta(model) {
                    if b0 == beta {
                        r.check("nonsquare choice gives alpha = -1", alpha == f.from_int(-1));
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Runs every Dieudonne and formal-module check for `n <= n_max`, `q <= q_max`.
pub fn dieudonne_suite(n_max: u32, q_max: u64) -> Result<Report> {
    let mut r = Report::new(format!("Dieudonne suite n<={n_max} q<={q_max}"));
    let qs: Vec<u64> = (2..=q_max).filter(|&q| crate::galois::prime_power(q).is_ok()).collect();
    for &q in &qs {
        for n in 1..=n_max {
            let split = DModel::new(Case::Split, q, n, 2)?;
            let module = StdDieudonne::for_model(&split)?;
            r.absorb(module.check_invariants()?);
            r.absorb(check_endo_relations(&module, &module.pi)?);
            r.absorb(crate::local::formal_module_endo_check(n, q)?);
            if let Ok(unr) = DModel::new(Case::Unramified, q, n, 2) {
                r.absorb(verify_unramified_iota(&unr)?);
                r.absorb(verify_eqchar(&unr, &TwistData::canonical(&unr)?)?);
            }
            if let Ok(ram) = DModel::new(Case::Ramified, q, n, 2) {
                let tw = TwistData::canonical(&ram)?;
                r.absorb(verify_ramified_iota(&ram, tw.beta.expect("ramified"))?);
                r.absorb(verify_eqchar(&ram, &tw)?);
                r.absorb(StdDieudonne::for_model(&ram)?.check_invariants()?);
            }
        }
    }
    Ok(r)
}

/// Every `beta` for one ramified model, through both the Dieudonne and the formal-module route.
pub fn all_beta_suite(model: &DModel) -> Result<Report> {
    let mut r = Report::new(format!("all beta q={} n={}", model.q(), model.n()));
    let betas = all_betas(model)?;
    r.check_detail(
        "beta count = q^n - 1",
        betas.len() as u64 == model.q().pow(model.n()) - 1,
        format!("{}", betas.len()),
    );
    for beta in betas {
        r.absorb(verify_ramified_iota(model, beta)?);
        r.absorb(verify_eqchar(model, &TwistData::ramified(model, beta)?)?);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(q: u64, n: usize) -> StdDieudonne {
        let (p, f) = crate::galois::prime_power(q).unwrap();
        let field = Arc::new(GaloisField::new(p, f * n as u32).unwrap());
        StdDieudonne::build(field, f, n, 3).unwrap()
    }

    #[test]
    fn n2_frobenius_array() {
        let m = module(3, 2);
        let r = &m.ring;
        let expect = vec![r.zero(), r.one(), r.uniformizer(), r.zero()];
        assert_eq!(m.frob.entries, expect);
        assert_eq!(m.frob.twist, 1);
    }

    #[test]
    fn invariants_and_endos() {
        for (q, n) in [(2, 1), (3, 2), (2, 4), (4, 3)] {
            let m = module(q, n);
            let r = m.check_invariants().unwrap();
            assert!(r.passed(), "{r}");
            let r = check_endo_relations(&m, &m.pi).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn corrupted_pi_fails() {
        let m = module(3, 2);
        let mut bad = m.pi.clone();
        bad.entries[1] = m.ring.constant(Elem(2));
        assert!(!check_endo_relations(&m, &bad).unwrap().passed());
    }

    #[test]
    fn unramified_small() {
        for (q, n) in [(4, 2), (9, 3)] {
            let model = DModel::new(Case::Unramified, q, n, 2).unwrap();
            let r = verify_unramified_iota(&model).unwrap();
            assert!(r.passed(), "{r}");
            let r = verify_eqchar(&model, &TwistData::canonical(&model).unwrap()).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn ramified_q3_n1_hand_case() {
        let model = DModel::new(Case::Ramified, 3, 1, 2).unwrap();
        let f = model.field();
        let beta = f.pow(f.generator(), 2).unwrap();
        let r = verify_ramified_iota(&model, beta).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn ramified_q3_n3_all_betas() {
        let model = DModel::new(Case::Ramified, 3, 3, 2).unwrap();
        let r = all_beta_suite(&model).unwrap();
        assert!(r.passed(), "{r}");
    }
}
