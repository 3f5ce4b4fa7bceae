//! The unit group of the division algebra of invariant `1/n`, modulo `1 + Pi^m O_D`.
//!
//! In equal characteristic `O_D = F_{q^n}[[Pi]]` with `Pi a = a^q Pi` and
//! `Pi^n = u` central. An element is stored as `w Pi^k` with `w` a unit
//! power series in `Pi` (unit on the left), so that
//! `(v Pi^k)(w Pi^l) = v sigma^k(w) Pi^(k+l)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclo::{lcm_u64, CycScalar, RootOfUnity};
use crate::error::{Error, Result};
use crate::galois::{prime_power, AddChar, Elem, GaloisField, MultChar};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Split,
    Unramified,
    Ramified,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::Split, Case::Unramified, Case::Ramified];

    pub fn name(&self) -> &'static str {
        match self {
            Case::Split => "split",
            Case::Unramified => "unramified",
            Case::Ramified => "ramified",
        }
    }
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Case> {
        match s {
            "split" => Ok(Case::Split),
            "unramified" | "unram" => Ok(Case::Unramified),
            "ramified" | "ram" => Ok(Case::Ramified),
            other => Err(Error::InvalidParameters(format!("unknown case {other}"))),
        }
    }
}

/// `w Pi^k` with `w = sum unit[i] Pi^i`, `unit[0] != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DElement {
    pub k: i64,
    pub unit: Vec<Elem>,
}

impl DElement {
    pub fn leading(&self) -> Elem {
        self.unit[0]
    }
}

/// Field data and group law for one `(case, q, n, m)`.
#[derive(Debug, Clone)]
pub struct DModel {
    case: Case,
    p: u64,
    f: u32,
    q: u64,
    n: u32,
    m: usize,
    field: Arc<GaloisField>,
}

impl DModel {
    pub fn new(case: Case, q: u64, n: u32, m: usize) -> Result<DModel> {
        let (p, f) = prime_power(q)?;
        if n == 0 {
            return Err(Error::InvalidParameters("n must be positive".into()));
        }
        if m < 1 {
            return Err(Error::InvalidParameters("truncation must be at least 1".into()));
        }
        if case == Case::Unramified && f % 2 != 0 {
            return Err(Error::InvalidParameters(format!("unramified case needs q = q'^2, got q = {q}")));
        }
        if case == Case::Ramified && p == 2 {
            return Err(Error::InvalidParameters("ramified case needs odd residue characteristic".into()));
        }
        let top = match case {
            Case::Ramified => 2 * f * n,
            _ => f * n,
        };
        let field = Arc::new(GaloisField::new(p, top)?);
        Ok(DModel { case, p, f, q, n, m, field })
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `q'` with `q = q'^2` in the unramified case, otherwise `q`.
    pub fn qprime(&self) -> u64 {
        match self.case {
            Case::Unramified => self.p.pow(self.f / 2),
            _ => self.q,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    /// Degree over `F_p` of `F_q`.
    pub fn q_degree(&self) -> u32 {
        self.f
    }

    /// Degree over `F_p` of `F_{q^n}`.
    pub fn qn_degree(&self) -> u32 {
        self.f * self.n
    }

    /// Number of cosets `(q^n - 1)/(q - 1)`.
    pub fn coset_count(&self) -> u64 {
        (self.q.pow(self.n) - 1) / (self.q - 1)
    }

    /// `sigma^k`, the `q^k`-power map.
    pub fn sigma(&self, x: Elem, k: i64) -> Elem {
        self.field.frobenius_p(x, k * self.f as i64)
    }

    pub fn teichmuller_generator(&self) -> Elem {
        self.field.subfield_generator(self.qn_degree()).expect("F_{q^n} is a level of the model")
    }

    pub fn in_fqn(&self, x: Elem) -> bool {
        self.field.in_subfield(x, self.qn_degree())
    }

    pub fn in_fq(&self, x: Elem) -> bool {
        self.field.in_subfield(x, self.f)
    }

    pub fn identity(&self) -> DElement {
        self.constant(self.field.one())
    }

    pub fn constant(&self, a: Elem) -> DElement {
        let mut unit = vec![Elem(0); self.m];
        unit[0] = a;
        DElement { k: 0, unit }
    }

    pub fn pi(&self) -> DElement {
        DElement { k: 1, ..self.identity() }
    }

    /// `a Pi^k`.
    pub fn monomial(&self, a: Elem, k: i64) -> DElement {
        DElement { k, ..self.constant(a) }
    }

    /// `1 + d Pi^s`.
    pub fn one_plus(&self, d: Elem, s: usize) -> DElement {
        let mut x = self.identity();
        if s < self.m {
            x.unit[s] = self.field.add(x.unit[s], d);
        }
        x
    }

    pub fn element(&self, k: i64, unit: &[Elem]) -> Result<DElement> {
        if unit.first().map_or(true, |c| c.0 == 0) {
            return Err(Error::InvalidParameters("leading unit coefficient must be nonzero".into()));
        }
        if let Some(bad) = unit.iter().find(|&&c| !self.in_fqn(c)) {
            return Err(Error::InvalidParameters(format!("{bad} is not in F_(q^n)")));
        }
        let mut u = vec![Elem(0); self.m];
        for (s, &c) in u.iter_mut().zip(unit) {
            *s = c;
        }
        Ok(DElement { k, unit: u })
    }

    fn unit_mul(&self, v: &[Elem], w: &[Elem]) -> Vec<Elem> {
        let fld = &self.field;
        let mut out = vec![Elem(0); self.m];
        for (i, &a) in v.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, &b) in w.iter().enumerate().take(self.m - i) {
                if b.0 != 0 {
                    out[i + j] = fld.add(out[i + j], fld.mul(a, self.sigma(b, i as i64)));
                }
            }
        }
        out
    }

    fn unit_inv(&self, v: &[Elem]) -> Vec<Elem> {
        let fld = &self.field;
        let a0_inv = fld.inv(v[0]).expect("unit has nonzero leading coefficient");
        let mut w = vec![Elem(0); self.m];
        w[0] = a0_inv;
        for s in 1..self.m {
            let mut acc = Elem(0);
            for i in 1..=s {
                acc = fld.add(acc, fld.mul(v[i], self.sigma(w[s - i], i as i64)));
            }
            w[s] = fld.neg(fld.mul(a0_inv, acc));
        }
        w
    }

    fn sigma_unit(&self, v: &[Elem], k: i64) -> Vec<Elem> {
        v.iter().map(|&c| self.sigma(c, k)).collect()
    }

    pub fn mul(&self, x: &DElement, y: &DElement) -> DElement {
        let tw = self.sigma_unit(&y.unit, x.k);
        DElement { k: x.k + y.k, unit: self.unit_mul(&x.unit, &tw) }
    }

    pub fn inv(&self, x: &DElement) -> DElement {
        let w = self.unit_inv(&x.unit);
        DElement { k: -x.k, unit: self.sigma_unit(&w, -x.k) }
    }

    pub fn pow(&self, x: &DElement, e: i64) -> DElement {
        let base = if e < 0 { self.inv(x) } else { x.clone() };
        let mut acc = self.identity();
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self, a: &DElement, h: &DElement) -> DElement {
        self.mul(&self.mul(a, h), &self.inv(a))
    }

    /// Generators of `D^x` mod `1 + Pi^m O_D`: a generator of `F_{q^n}^x`, `Pi`,
    /// and `1 + d Pi^s` for an `F_p`-basis `d` and `1 <= s < m`.
    pub fn generators(&self) -> Vec<DElement> {
        let mut gens = vec![self.constant(self.teichmuller_generator()), self.pi()];
        let basis = self.field.subfield_basis(self.qn_degree()).expect("F_{q^n} is a level of the model");
        for s in 1..self.m {
            for &d in &basis {
                gens.push(self.one_plus(d, s));
            }
        }
        gens
    }
}

/// The pair `(tau, t)` on `D^x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistData {
    pub case: Case,
    /// `beta` in `F_{q^{2n}}` with `beta^(q^n - 1) = -1` (ramified case).
    pub beta: Option<Elem>,
    /// `alpha = beta^(q-1)` (ramified case).
    pub alpha: Option<Elem>,
    pub t: DElement,
}

impl TwistData {
    pub fn split(model: &DModel) -> Result<TwistData> {
        if model.case != Case::Split {
            return Err(Error::InvalidParameters("model is not split".into()));
        }
        Ok(TwistData { case: Case::Split, beta: None, alpha: None, t: model.identity() })
    }

    pub fn unramified(model: &DModel) -> Result<TwistData> {
        if model.case != Case::Unramified {
            return Err(Error::InvalidParameters("model is not unramified".into()));
        }
        Ok(TwistData { case: Case::Unramified, beta: None, alpha: None, t: model.pi() })
    }

    pub fn ramified(model: &DModel, beta: Elem) -> Result<TwistData> {
        if model.case != Case::Ramified {
            return Err(Error::InvalidParameters("model is not ramified".into()));
        }
        let f = &model.field;
        let qn = model.q.pow(model.n);
        if beta.0 == 0 || f.pow(beta, (qn - 1) as i64)? != f.from_int(-1) {
            return Err(Error::InvalidParameters(format!("{beta} does not satisfy beta^(q^n - 1) = -1")));
        }
        let alpha = f.pow(beta, model.q as i64 - 1)?;
        let t = f.pow(beta, -2)?;
        Ok(TwistData { case: Case::Ramified, beta: Some(beta), alpha: Some(alpha), t: model.constant(t) })
    }

    /// The default pair for a model: for the ramified case with `n` odd, the
    /// choice through a square root of a nonsquare; otherwise the smallest-log root.
    pub fn canonical(model: &DModel) -> Result<TwistData> {
        match model.case {
            Case::Split => Self::split(model),
            Case::Unramified => Self::unramified(model),
            Case::Ramified => {
                let beta = if model.n % 2 == 1 {
                    nonsquare_beta(model)?
                } else {
                    let f = &model.field;
                    f.solve_power(f.from_int(-1), model.q.pow(model.n) as i64 - 1, 2 * model.qn_degree())?
                };
                Self::ramified(model, beta)
            }
        }
    }

    /// `tau(x)`.
    pub fn apply(&self, model: &DModel, x: &DElement) -> DElement {
        match self.case {
            Case::Split => x.clone(),
            Case::Unramified => {
                let half = (model.f / 2) as i64;
                DElement { k: x.k, unit: x.unit.iter().map(|&c| model.field.frobenius_p(c, half)).collect() }
            }
            Case::Ramified => {
                let alpha = self.alpha.expect("ramified twist carries alpha");
                let fld = &model.field;
                // sum a_i (alpha Pi)^i = sum a_i N_i(alpha) Pi^i
                let mut unit = Vec::with_capacity(model.m);
                let mut norm = fld.one();
                for (i, &a) in x.unit.iter().enumerate() {
                    unit.push(fld.mul(a, norm));
                    norm = fld.mul(norm, model.sigma(alpha, i as i64));
                }
                let tu = DElement { k: 0, unit };
                let alpha_pi = model.monomial(alpha, 1);
                model.mul(&tu, &model.pow(&alpha_pi, x.k))
            }
        }
    }

    /// `tau^{-1}(x) = t^{-1} tau(x) t`.
    pub fn apply_inv(&self, model: &DModel, x: &DElement) -> DElement {
        let tinv = model.inv(&self.t);
        model.mul(&model.mul(&tinv, &self.apply(model, x)), &self.t)
    }

    pub fn check_axioms(&self, model: &DModel) -> Report {
        let mut r = Report::new(format!("twist {} q={} n={} m={}", self.case, model.q, model.n, model.m));
        let gens = model.generators();
        let tinv = model.inv(&self.t);
        let mut sq_ok = true;
        for g in &gens {
            let lhs = self.apply(model, &self.apply(model, g));
            let rhs = model.mul(&model.mul(&self.t, g), &tinv);
            sq_ok &= lhs == rhs;
        }
        r.check("tau^2 = Int(t) on generators", sq_ok);
        r.check("tau(t) = t", self.apply(model, &self.t) == self.t);
        let mut hom_ok = true;
        for a in &gens {
            for b in &gens {
                let lhs = self.apply(model, &model.mul(a, b));
                let rhs = model.mul(&self.apply(model, a), &self.apply(model, b));
                hom_ok &= lhs == rhs;
            }
        }
        r.check("tau multiplicative on generator pairs", hom_ok);
        let mut inv_ok = true;
        for g in &gens {
            inv_ok &= self.apply_inv(model, &self.apply(model, g)) == *g;
        }
        r.check("tau^{-1} tau = id on generators", inv_ok);
        if self.case == Case::Ramified {
            let fld = &model.field;
            let alpha = self.alpha.expect("ramified twist carries alpha");
            r.check("alpha in F_(q^n)", model.in_fqn(alpha));
            let nr = fld.norm_to(alpha, model.qn_degree(), model.f);
            r.check("Nr(alpha) = -1", nr.ok() == Some(fld.from_int(-1)));
            r.check("beta^-2 in F_(q^n)", model.in_fqn(self.t.leading()));
            let tau_varpi = self.apply(model, &model.pow(&model.pi(), model.n as i64));
            r.check("tau(varpi) = -varpi", tau_varpi == model.monomial(fld.from_int(-1), model.n as i64));
        }
        r
    }
}

/// `beta` lifting `eta` with `eta^2 = eps^{-1}`, `eps` the smallest-log nonsquare of `F_q` (`n` odd).
pub fn nonsquare_beta(model: &DModel) -> Result<Elem> {
    if model.case != Case::Ramified || model.n % 2 == 0 {
        return Err(Error::InvalidParameters("the nonsquare choice of beta needs the ramified case with n odd".into()));
    }
    let f = &model.field;
    let eps = smallest_nonsquare(model)?;
    f.solve_power(f.inv(eps)?, 2, 2 * model.f)
}

/// The generator of `F_q^x`, which is the nonsquare of least discrete log.
pub fn smallest_nonsquare(model: &DModel) -> Result<Elem> {
    if model.p == 2 {
        return Err(Error::InvalidParameters("every element of F_q is a square in characteristic 2".into()));
    }
    model.field.subfield_generator(model.f)
}

/// All `beta` in `F_{q^{2n}}` with `beta^(q^n - 1) = -1`, in increasing log order.
pub fn all_betas(model: &DModel) -> Result<Vec<Elem>> {
    if model.case != Case::Ramified {
        return Err(Error::InvalidParameters("beta only exists in the ramified case".into()));
    }
    let f = &model.field;
    let qn = model.q.pow(model.n);
    let g = f.subfield_generator(2 * model.qn_degree())?;
    let step = qn + 1;
    let first = qn.div_ceil(2);
    let count = qn - 1;
    (0..count).map(|i| f.pow(g, (first + i * step) as i64)).collect()
}

/// `(zeta, chi, c)` together with the chosen `xi`, `Nr(xi) = zeta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SscParamsD {
    pub zeta: Elem,
    pub chi: MultChar,
    pub c: RootOfUnity,
    pub xi: Elem,
    #[serde(skip)]
    trivial_wild: bool,
}

impl SscParamsD {
    /// Uses the `xi` of least discrete log.
    pub fn new(model: &DModel, zeta: Elem, chi: MultChar, c: RootOfUnity) -> Result<SscParamsD> {
        let f = &model.field;
        let l = f
            .subfield_dlog(zeta, model.f)
            .map_err(|_| Error::InvalidParameters(format!("zeta = {zeta} is not in F_q^x")))?;
        let xi = f.pow(model.teichmuller_generator(), l as i64)?;
        Self::with_xi(model, zeta, chi, c, xi)
    }

    pub fn with_xi(model: &DModel, zeta: Elem, chi: MultChar, c: RootOfUnity, xi: Elem) -> Result<SscParamsD> {
        if chi.level != model.f {
            return Err(Error::InvalidParameters("chi must be a character of F_q^x".into()));
        }
        let nr = model.field.norm_to(xi, model.qn_degree(), model.f)?;
        if xi.0 == 0 || nr != zeta {
            return Err(Error::InvalidParameters(format!("Nr({xi}) != {zeta}")));
        }
        Ok(SscParamsD { zeta, chi, c, xi, trivial_wild: false })
    }

    /// A deliberately wrong character that ignores `1 + Pi O_D`; only for negative controls.
    #[doc(hidden)]
    pub fn with_trivial_wild_part(mut self) -> SscParamsD {
        self.trivial_wild = true;
        self
    }

    pub fn b_pi(&self, model: &DModel) -> DElement {
        model.monomial(self.xi, 1)
    }

    /// A cyclotomic modulus holding every value of the character.
    pub fn run_modulus(&self, model: &DModel) -> u32 {
        [model.p, model.q - 1, 4, self.c.order()].into_iter().fold(1, lcm_u64) as u32
    }
}

/// `h = w (b Pi)^k`: returns `(w0, k, w1)` if `h` lies in `H`.
pub fn factor_h(model: &DModel, params: &SscParamsD, h: &DElement) -> Result<(Elem, i64, Elem)> {
    let bp = params.b_pi(model);
    let w = model.mul(h, &model.pow(&bp, -h.k));
    debug_assert_eq!(w.k, 0);
    let w0 = w.leading();
    if !model.in_fq(w0) {
        return Err(Error::NotInH(format!("leading unit {w0} of h (b Pi)^(-k) is not in F_q")));
    }
    Ok((w0, h.k, w.unit.get(1).copied().unwrap_or(Elem(0))))
}

pub fn in_h(model: &DModel, params: &SscParamsD, h: &DElement) -> bool {
    factor_h(model, params, h).is_ok()
}

/// `Lambda^D(h)` as an exact root of unity.
pub fn lambda_d_root(model: &DModel, params: &SscParamsD, h: &DElement) -> Result<RootOfUnity> {
    let (w0, k, w1) = factor_h(model, params, h)?;
    let fld = &model.field;
    let mut val = params.chi.eval_root(fld, w0)?.mul(&params.c.pow(k));
    if !params.trivial_wild && w1.0 != 0 {
        let x = fld.div(w1, fld.mul(w0, params.xi))?;
        let psi = AddChar { level: model.qn_degree() };
        val = val.mul(&psi.eval_root(fld, x)?);
    }
    Ok(val)
}

pub fn lambda_d_eval(model: &DModel, params: &SscParamsD, h: &DElement) -> Result<CycScalar> {
    lambda_d_root(model, params, h)?.to_cyc(params.run_modulus(model))
}

/// Coset representatives `u_j = g^j`, `0 <= j < d`, for `H \ D^x`.
pub fn coset_rep(model: &DModel, j: usize) -> DElement {
    let g = model.teichmuller_generator();
    model.constant(model.field.pow(g, j as i64).expect("nonzero base"))
}

/// `u_i g = h u_j` with `h` in `H`; returns `(j, Lambda^D(h))`.
pub fn coset_action(model: &DModel, params: &SscParamsD, i: usize, g: &DElement) -> Result<(usize, RootOfUnity)> {
    let d = model.coset_count();
    if i as u64 >= d {
        return Err(Error::Coset(format!("index {i} out of range 0..{d}")));
    }
    let fld = &model.field;
    let y = model.mul(&coset_rep(model, i), g);
    let bp = params.b_pi(model);
    let w = model.mul(&y, &model.pow(&bp, -y.k));
    let lead = model.sigma(w.leading(), -y.k);
    let gen = model.teichmuller_generator();
    let l = fld.subfield_dlog(lead, model.qn_degree()).map_err(|e| Error::Coset(e.to_string()))?;
    let j = (l % d) as usize;
    let uj_inv = model.constant(fld.pow(gen, -(j as i64))?);
    let h = model.mul(&y, &uj_inv);
    let lam = lambda_d_root(model, params, &h).map_err(|e| Error::Coset(e.to_string()))?;
    Ok((j, lam))
}

/// Checks the nonsquare choice of `beta` for odd `n`: `alpha = -1` and `t = eps`.
pub fn check_nonsquare_twist(model: &DModel) -> Result<Report> {
    let tw = TwistData::ramified(model, nonsquare_beta(model)?)?;
    let f = &model.field;
    let mut r = Report::new(format!("nonsquare beta q={} n={}", model.q, model.n));
    r.check("alpha = -1", tw.alpha == Some(f.from_int(-1)));
    r.check("t = eps", tw.t == model.constant(smallest_nonsquare(model)?));
    Ok(r)
}
