//! The `GL_n(F)` side: `psi_zeta`, `phi_zeta`, `Lambda_{zeta,chi,c}` on `H_zeta`,
//! the parameter maps for contragredient and `tau`-twist, and finite-level
//! checks of the intertwining identities.
//!
//! `F` is modelled as `F_q((u))` with `varpi = u`. Matrices are stored over
//! `F_q[u]/u^P`. Elements of `H_zeta` are written `x phi^k g` with `x` a
//! Teichmuller scalar, `0 <= k < n` and `g` in `Iw_+`; the center is not needed
//! because every check is a character identity on such products.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::cyclo::{CycScalar, RootOfUnity};
use crate::division::{Case, DModel, SscParamsD};
use crate::error::{Error, Result};
use crate::galois::{prime_power, AddChar, Elem, GaloisField, MultChar};
use crate::report::Report;

/// Residue field data and the quadratic-extension type for `GL_n(F)`.
#[derive(Debug, Clone)]
pub struct GlModel {
    case: Case,
    p: u64,
    f: u32,
    q: u64,
    n: usize,
    prec: usize,
    field: Arc<GaloisField>,
}

impl GlModel {
    pub fn new(case: Case, q: u64, n: u32) -> Result<GlModel> {
        let (p, f) = prime_power(q)?;
        Self::over(case, q, n, Arc::new(GaloisField::new(p, f)?))
    }

    /// Shares the field of a division algebra model, so characters and elements agree.
    pub fn for_d(model: &DModel) -> Result<GlModel> {
        Self::over(model.case(), model.q(), model.n(), model.field().clone())
    }

    pub fn over(case: Case, q: u64, n: u32, field: Arc<GaloisField>) -> Result<GlModel> {
        let (p, f) = prime_power(q)?;
        if field.characteristic() != p || field.degree() % f != 0 {
            return Err(Error::NotSubfield { sub: f, sup: field.degree() });
        }
        if n == 0 {
            return Err(Error::InvalidParameters("n must be positive".into()));
        }
        if case == Case::Unramified && f % 2 != 0 {
            return Err(Error::InvalidParameters(format!("unramified case needs q = q'^2, got q = {q}")));
        }
        if case == Case::Ramified && p == 2 {
            return Err(Error::InvalidParameters("ramified case needs odd residue characteristic".into()));
        }
        let n = n as usize;
        Ok(GlModel { case, p, f, q, n, prec: n.max(3), field })
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn qprime(&self) -> Option<u64> {
        (self.case == Case::Unramified).then(|| self.p.pow(self.f / 2))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q_degree(&self) -> u32 {
        self.f
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn units(&self) -> Vec<Elem> {
        self.field.subfield_elements(self.f).expect("F_q is a level").into_iter().skip(1).collect()
    }

    /// `tau` on residues: the `q'`-Frobenius in the unramified case, otherwise trivial.
    pub fn tau_residue(&self, x: Elem) -> Elem {
        match self.case {
            Case::Unramified => self.field.frobenius(x, 1, self.f / 2),
            _ => x,
        }
    }

    /// `tau` on a matrix, entrywise: Frobenius on coefficients, or `u -> -u`.
    pub fn tau_matrix(&self, m: &GlMat) -> GlMat {
        let mut out = m.clone();
        for (idx, c) in out.data.iter_mut().enumerate() {
            let t = idx % self.prec;
            *c = match self.case {
                Case::Split => *c,
                Case::Unramified => self.tau_residue(*c),
                Case::Ramified if t % 2 == 1 => self.field.neg(*c),
                Case::Ramified => *c,
            };
        }
        out
    }
}

/// An `n x n` matrix over `F_q[u]/u^P`; coefficient `t` of entry `(i, j)` sits at `(i n + j) P + t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GlMat {
    pub n: usize,
    pub prec: usize,
    pub data: Vec<Elem>,
}

impl GlMat {
    pub fn zeros(model: &GlModel) -> GlMat {
        GlMat { n: model.n, prec: model.prec, data: vec![Elem(0); model.n * model.n * model.prec] }
    }

    pub fn scalar(model: &GlModel, x: Elem) -> GlMat {
        let mut m = Self::zeros(model);
        for i in 0..model.n {
            m.set(i, i, 0, x);
        }
        m
    }

    pub fn identity(model: &GlModel) -> GlMat {
        Self::scalar(model, Elem(1))
    }

    pub fn get(&self, i: usize, j: usize, t: usize) -> Elem {
        self.data[(i * self.n + j) * self.prec + t]
    }

    pub fn set(&mut self, i: usize, j: usize, t: usize, v: Elem) {
        self.data[(i * self.n + j) * self.prec + t] = v;
    }

    fn entry(&self, i: usize, j: usize) -> &[Elem] {
        let s = (i * self.n + j) * self.prec;
        &self.data[s..s + self.prec]
    }
}

fn poly_mul_acc(f: &GaloisField, acc: &mut [Elem], a: &[Elem], b: &[Elem]) {
    let p = acc.len();
    for (s, &x) in a.iter().enumerate() {
        if x.0 == 0 {
            continue;
        }
        for t in 0..p - s {
            if b[t].0 != 0 {
                acc[s + t] = f.add(acc[s + t], f.mul(x, b[t]));
            }
        }
    }
}

impl GlModel {
    pub fn mat_mul(&self, a: &GlMat, b: &GlMat) -> GlMat {
        let n = self.n;
        let mut out = GlMat::zeros(self);
        let mut acc = vec![Elem(0); self.prec];
        for i in 0..n {
            for j in 0..n {
                acc.iter_mut().for_each(|c| *c = Elem(0));
                for k in 0..n {
                    poly_mul_acc(&self.field, &mut acc, a.entry(i, k), b.entry(k, j));
                }
                let s = (i * n + j) * self.prec;
                out.data[s..s + self.prec].copy_from_slice(&acc);
            }
        }
        out
    }

    pub fn mat_pow(&self, a: &GlMat, k: usize) -> GlMat {
        (0..k).fold(GlMat::identity(self), |acc, _| self.mat_mul(&acc, a))
    }

    pub fn scale(&self, x: Elem, a: &GlMat) -> GlMat {
        GlMat { data: a.data.iter().map(|&c| self.field.mul(x, c)).collect(), ..a.clone() }
    }

    /// `D a D^{-1}` for a diagonal `D` with constant unit entries.
    pub fn conj_diag(&self, d: &[Elem], a: &GlMat) -> Result<GlMat> {
        let mut out = a.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let s = self.field.div(d[i], d[j])?;
                for t in 0..self.prec {
                    out.set(i, j, t, self.field.mul(s, a.get(i, j, t)));
                }
            }
        }
        Ok(out)
    }

    /// Divides every entry by `u`; the top coefficient becomes zero and is not meaningful.
    fn div_u(&self, a: &GlMat) -> Result<GlMat> {
        let mut out = a.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if a.get(i, j, 0).0 != 0 {
                    return Err(Error::NotInH("entry not divisible by the uniformizer".into()));
                }
                for t in 0..self.prec {
                    let v = if t + 1 < self.prec { a.get(i, j, t + 1) } else { Elem(0) };
                    out.set(i, j, t, v);
                }
            }
        }
        Ok(out)
    }

    /// Determinant by cofactor expansion, as a truncated series.
    pub fn det(&self, a: &GlMat) -> Vec<Elem> {
        let cols: Vec<usize> = (0..self.n).collect();
        self.minor_det(a, 0, &cols)
    }

    fn minor_det(&self, a: &GlMat, row: usize, cols: &[usize]) -> Vec<Elem> {
        let f = &self.field;
        if cols.is_empty() {
            let mut one = vec![Elem(0); self.prec];
            one[0] = Elem(1);
            return one;
        }
        let mut acc = vec![Elem(0); self.prec];
        for (idx, &c) in cols.iter().enumerate() {
            let e = a.entry(row, c);
            if e.iter().all(|x| x.0 == 0) {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sub = self.minor_det(a, row + 1, &rest);
            let mut term = vec![Elem(0); self.prec];
            poly_mul_acc(f, &mut term, e, &sub);
            for t in 0..self.prec {
                acc[t] = if idx % 2 == 0 { f.add(acc[t], term[t]) } else { f.sub(acc[t], term[t]) };
            }
        }
        acc
    }

    /// Membership in `Iw_+` modulo `u`: unipotent upper triangular residue.
    pub fn in_iw_plus(&self, g: &GlMat) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let r = g.get(i, j, 0);
                if i == j {
                    r.0 == 1
                } else if i > j {
                    r.0 == 0
                } else {
                    true
                }
            })
        })
    }

    /// `phi_zeta`: ones on the superdiagonal and `zeta u` in the corner.
    pub fn phi(&self, zeta: Elem) -> GlMat {
        let mut m = GlMat::zeros(self);
        for i in 0..self.n - 1 {
            m.set(i, i + 1, 0, Elem(1));
        }
        m.set(self.n - 1, 0, 1, zeta);
        m
    }

    /// `a = diag(1, -1, ..., (-1)^(n-1))`.
    pub fn sign_diag(&self) -> Vec<Elem> {
        (0..self.n).map(|i| if i % 2 == 0 { Elem(1) } else { self.field.from_int(-1) }).collect()
    }

    fn signed(&self, zeta: Elem) -> Elem {
        if self.n % 2 == 0 {
            zeta
        } else {
            self.field.neg(zeta)
        }
    }

    /// `psi_zeta(g)` for `g` in `Iw_+`. For `n = 1` the corner term reads `u^{-1}(a_11 - 1)`.
    pub fn psi_zeta_root(&self, zeta: Elem, g: &GlMat) -> Result<RootOfUnity> {
        if !self.in_iw_plus(g) {
            return Err(Error::NotInIwahori("g is not in Iw_+".into()));
        }
        let f = &self.field;
        let mut s = Elem(0);
        for i in 0..self.n - 1 {
            s = f.add(s, g.get(i, i + 1, 0));
        }
        let corner = g.get(self.n - 1, 0, 1);
        s = f.add(s, f.div(corner, zeta)?);
        AddChar { level: self.f }.eval_root(f, s)
    }

    pub fn psi_zeta_eval(&self, zeta: Elem, g: &GlMat, modulus: u32) -> Result<CycScalar> {
        self.psi_zeta_root(zeta, g)?.to_cyc(modulus)
    }
}

/// `x phi_zeta^k g` with `x` a Teichmuller unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HFactor {
    pub x: Elem,
    pub k: i64,
    pub g: GlMat,
}

impl HFactor {
    /// The matrix for `0 <= k`.
    pub fn to_matrix(&self, model: &GlModel, zeta: Elem) -> Result<GlMat> {
        if self.k < 0 {
            return Err(Error::UnsupportedRange("negative powers of phi".into()));
        }
        let phk = model.mat_pow(&model.phi(zeta), self.k as usize);
        Ok(model.scale(self.x, &model.mat_mul(&phk, &self.g)))
    }
}

impl GlModel {
    /// Writes `m` as `x phi_zeta^k g` with `0 <= k < n`, reading `k` off the determinant.
    pub fn factor_h(&self, zeta: Elem, m: &GlMat) -> Result<HFactor> {
        let det = self.det(m);
        let k = det
            .iter()
            .position(|c| c.0 != 0)
            .ok_or_else(|| Error::NotInH("determinant vanishes to working precision".into()))?;
        if k >= self.n {
            return Err(Error::UnsupportedRange("valuation of det must be below n".into()));
        }
        // phi^{-k} = (zeta u)^{-1} phi^{n-k}
        let y = if k == 0 {
            m.clone()
        } else {
            let shifted = self.mat_mul(&self.mat_pow(&self.phi(zeta), self.n - k), m);
            let inv_zeta = self.field.inv(zeta)?;
            self.scale(inv_zeta, &self.div_u(&shifted)?)
        };
        let x = y.get(0, 0, 0);
        if x.0 == 0 {
            return Err(Error::NotInH("leading diagonal entry is not a unit".into()));
        }
        let g = self.scale(self.field.inv(x)?, &y);
        if !self.in_iw_plus(&g) {
            return Err(Error::NotInH("residual factor is not in Iw_+".into()));
        }
        Ok(HFactor { x, k: k as i64, g })
    }
}

/// `(zeta, chi, c)` for `GL_n(F)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SscParamsGL {
    pub case: Case,
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qprime: Option<u64>,
    pub n: u32,
    pub zeta: Elem,
    pub chi: MultChar,
    pub c: RootOfUnity,
}

impl SscParamsGL {
    pub fn new(model: &GlModel, zeta: Elem, chi: MultChar, c: RootOfUnity) -> Result<SscParamsGL> {
        if zeta.0 == 0 || !model.field.in_subfield(zeta, model.f) {
            return Err(Error::InvalidParameters(format!("zeta = {zeta} is not in F_q^x")));
        }
        if chi.level != model.f {
            return Err(Error::InvalidParameters("chi must be a character of F_q^x".into()));
        }
        Ok(SscParamsGL { case: model.case, q: model.q, qprime: model.qprime(), n: model.n as u32, zeta, chi, c })
    }

    fn with(&self, zeta: Elem, chi: MultChar, c: RootOfUnity) -> SscParamsGL {
        SscParamsGL { zeta, chi, c, ..self.clone() }
    }
}

/// `chi(x) c^k psi_zeta(g)`.
pub fn lambda_gl_root(model: &GlModel, params: &SscParamsGL, h: &HFactor) -> Result<RootOfUnity> {
    let chi = params.chi.eval_root(&model.field, h.x)?;
    Ok(chi.mul(&params.c.pow(h.k)).mul(&model.psi_zeta_root(params.zeta, &h.g)?))
}

pub fn lambda_gl_eval(model: &GlModel, params: &SscParamsGL, h: &HFactor, modulus: u32) -> Result<CycScalar> {
    lambda_gl_root(model, params, h)?.to_cyc(modulus)
}

fn chi_minus_one(model: &GlModel, chi: &MultChar) -> Result<RootOfUnity> {
    chi.eval_root(&model.field, model.field.from_int(-1))
}

/// `((-1)^n zeta, chi^{-1}, chi(-1) c^{-1})`.
pub fn contragredient_params(model: &GlModel, p: &SscParamsGL) -> Result<SscParamsGL> {
    let c = chi_minus_one(model, &p.chi)?.mul(&p.c.inv());
    Ok(p.with(model.signed(p.zeta), p.chi.inverse(), c))
}

/// Parameters of `pi^tau`.
pub fn tau_params(model: &GlModel, p: &SscParamsGL) -> SscParamsGL {
    match model.case {
        Case::Split => p.clone(),
        Case::Unramified => {
            let qp = model.qprime().expect("unramified");
            p.with(model.tau_residue(p.zeta), p.chi.compose_power(qp), p.c)
        }
        Case::Ramified => p.with(model.field.neg(p.zeta), p.chi, p.c),
    }
}

/// The explicit criterion. The parity condition on `n` is read as `(-1)^n zeta = zeta`
/// in the split case, which differs from "n even" only in characteristic 2.
pub fn is_conjugate_self_dual(model: &GlModel, p: &SscParamsGL) -> Result<bool> {
    let c_ok = p.c.pow(2) == chi_minus_one(model, &p.chi)?;
    let chi_sq = p.chi.pow(2).is_trivial();
    Ok(match model.case {
        Case::Unramified => {
            let qp = model.qprime().expect("unramified");
            model.tau_residue(p.zeta) == model.signed(p.zeta) && p.chi.compose_power(qp) == p.chi.inverse() && c_ok
        }
        Case::Ramified => model.n % 2 == 1 && chi_sq && c_ok,
        Case::Split => model.signed(p.zeta) == p.zeta && chi_sq && c_ok,
    })
}

/// All `eps` in `F_q` with `eps^(q'-1) = -1`.
pub fn unramified_epsilons(model: &GlModel) -> Result<Vec<Elem>> {
    let qp = model.qprime().ok_or_else(|| Error::InvalidParameters("not unramified".into()))?;
    let minus_one = model.field.from_int(-1);
    let f = &model.field;
    Ok(model
        .units()
        .into_iter()
        .filter(|&e| f.pow(e, qp as i64 - 1).map(|v| v == minus_one).unwrap_or(false))
        .collect())
}

/// The parity of the Langlands parameter predicted by the closed form.
pub fn predicted_rec_parity(model: &GlModel, p: &SscParamsGL) -> Result<i8> {
    if !is_conjugate_self_dual(model, p)? {
        return Err(Error::NotConjugateSelfDual);
    }
    match model.case {
        Case::Unramified => {
            let qp = model.qprime().expect("unramified");
            let eps = model.field.solve_power(model.field.from_int(-1), qp as i64 - 1, model.f)?;
            p.chi.eval_root(&model.field, eps)?.mul(&p.c).as_sign()
        }
        Case::Ramified => Ok(if p.chi.is_trivial() { 1 } else { -1 }),
        Case::Split if model.n % 2 == 1 => Ok(1),
        Case::Split => Ok(if p.chi.is_trivial() { -1 } else { 1 }),
    }
}

/// `chi(eps) c` for every admissible `eps`; the unramified value should not depend on the choice.
pub fn unramified_parity_over_epsilons(model: &GlModel, p: &SscParamsGL) -> Result<Vec<i8>> {
    unramified_epsilons(model)?.into_iter().map(|e| p.chi.eval_root(&model.field, e)?.mul(&p.c).as_sign()).collect()
}

/// `(zeta, chi, (-1)^(n-1) c)` on the division algebra side.
pub fn jl_of_gl_params(model: &DModel, p: &SscParamsGL) -> Result<SscParamsD> {
    let c = if p.n % 2 == 0 { p.c.mul(&RootOfUnity::minus_one()) } else { p.c };
    SscParamsD::new(model, p.zeta, p.chi, c)
}

/// How many elements the intertwiner checks visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckBudget {
    /// Visit every level-2 element of `Iw_+`.
    pub exhaustive: bool,
    /// Random elements `x phi^k g` checked in addition.
    pub samples: usize,
}

impl GlModel {
    /// Number of level-2 elements of `Iw_+`.
    pub fn level2_count(&self) -> u64 {
        let coeffs = self.n + self.n * (self.n - 1) + self.n * (self.n - 1) / 2;
        self.q.saturating_pow(coeffs as u32)
    }

    fn level2_slots(&self) -> Vec<(usize, usize, usize)> {
        let mut slots = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i < j {
                    slots.push((i, j, 0));
                }
                slots.push((i, j, 1));
            }
        }
        if self.n == 1 {
            return vec![(0, 0, 1)];
        }
        slots
    }

    /// Calls `visit` on every element of `Iw_+` with entries of degree below 2.
    pub fn for_each_level2<E>(
        &self,
        mut visit: impl FnMut(&GlMat) -> std::result::Result<(), E>,
    ) -> std::result::Result<(), E> {
        let slots = self.level2_slots();
        let elems = self.field.subfield_elements(self.f).expect("F_q is a level");
        let mut idx = vec![0usize; slots.len()];
        let mut g = GlMat::identity(self);
        loop {
            visit(&g)?;
            let mut pos = 0;
            loop {
                if pos == slots.len() {
                    return Ok(());
                }
                idx[pos] += 1;
                if idx[pos] == elems.len() {
                    idx[pos] = 0;
                }
                let (i, j, t) = slots[pos];
                g.set(i, j, t, elems[idx[pos]]);
                if idx[pos] != 0 {
                    break;
                }
                pos += 1;
            }
        }
    }

    pub fn random_level2<R: Rng>(&self, rng: &mut R) -> GlMat {
        let elems = self.field.subfield_elements(self.f).expect("F_q is a level");
        let mut g = GlMat::identity(self);
        for (i, j, t) in self.level2_slots() {
            g.set(i, j, t, elems[rng.gen_range(0..elems.len())]);
        }
        g
    }

    pub fn random_h<R: Rng>(&self, rng: &mut R) -> HFactor {
        let units = self.units();
        HFactor {
            x: units[rng.gen_range(0..units.len())],
            k: rng.gen_range(0..self.n) as i64,
            g: self.random_level2(rng),
        }
    }
}

/// Checks `a phi_zeta a^{-1} = -phi_{(-1)^n zeta}` and `Lambda(h)^{-1} = Lambda'(a h a^{-1})`
/// for the contragredient parameters `Lambda'`.
pub fn verify_intertwiner_gl<R: Rng>(
    model: &GlModel,
    p: &SscParamsGL,
    budget: CheckBudget,
    rng: &mut R,
) -> Result<Report> {
    verify_intertwiner_with(model, p, &model.sign_diag(), budget, rng)
}

/// As [`verify_intertwiner_gl`] with an arbitrary constant diagonal `a`.
pub fn verify_intertwiner_with<R: Rng>(
    model: &GlModel,
    p: &SscParamsGL,
    a: &[Elem],
    budget: CheckBudget,
    rng: &mut R,
) -> Result<Report> {
    let mut r = Report::new(format!("GL intertwiner {} q={} n={}", model.case, model.q, model.n));
    let f = &model.field;
    let dual = contragredient_params(model, p)?;
    let phi = model.phi(p.zeta);
    let lhs = model.conj_diag(a, &phi)?;
    let rhs = model.scale(f.from_int(-1), &model.phi(dual.zeta));
    r.check("a phi a^-1 = -phi'", lhs == rhs);
    let phi_n = model.mat_pow(&phi, model.n);
    let mut central = GlMat::zeros(model);
    for i in 0..model.n {
        central.set(i, i, 1, p.zeta);
    }
    r.check("phi^n = zeta u", phi_n == central);

    let check_one = |h: &HFactor| -> Result<bool> {
        let m = h.to_matrix(model, p.zeta)?;
        let moved = model.conj_diag(a, &m)?;
        let Ok(h2) = model.factor_h(dual.zeta, &moved) else {
            return Ok(false);
        };
        Ok(lambda_gl_root(model, &dual, &h2)? == lambda_gl_root(model, p, h)?.inv())
    };

    if budget.exhaustive {
        let mut ok = true;
        let mut count = 0u64;
        model.for_each_level2(|g| -> Result<()> {
            let h = HFactor { x: Elem(1), k: 0, g: g.clone() };
            ok &= check_one(&h)?;
            count += 1;
            Ok(())
        })?;
        r.check(format!("Lambda identity on all {count} level-2 elements of Iw_+"), ok);
    }
    let mut ok = true;
    for x in model.units() {
        for k in 0..model.n as i64 {
            ok &= check_one(&HFactor { x, k, g: GlMat::identity(model) })?;
        }
    }
    r.check("Lambda identity on O^x phi^k", ok);
    if budget.samples > 0 {
        let mut ok = true;
        for _ in 0..budget.samples {
            ok &= check_one(&model.random_h(rng))?;
        }
        r.check(format!("Lambda identity on {} sampled elements of H", budget.samples), ok);
    }
    Ok(r)
}

/// Checks `Lambda(tau(h)) = Lambda''(h)` for `h` in `H_{zeta''}`, where `''` are the `tau`-twisted parameters.
pub fn verify_tau_twist_gl<R: Rng>(
    model: &GlModel,
    p: &SscParamsGL,
    budget: CheckBudget,
    rng: &mut R,
) -> Result<Report> {
    let mut r = Report::new(format!("GL tau-twist {} q={} n={}", model.case, model.q, model.n));
    let tp = tau_params(model, p);
    let inv_case = tau_params(model, &tp);
    r.check("tau-twist is an involution on parameters", inv_case == *p);
    let check_one = |h: &HFactor| -> Result<bool> {
        let m = h.to_matrix(model, tp.zeta)?;
        let moved = model.tau_matrix(&m);
        let Ok(h2) = model.factor_h(p.zeta, &moved) else {
            return Ok(false);
        };
        Ok(lambda_gl_root(model, p, &h2)? == lambda_gl_root(model, &tp, h)?)
    };
    if budget.exhaustive {
        let mut ok = true;
        model.for_each_level2(|g| -> Result<()> {
            ok &= check_one(&HFactor { x: Elem(1), k: 0, g: g.clone() })?;
            Ok(())
        })?;
        r.check("tau identity on all level-2 elements of Iw_+", ok);
    }
    let mut ok = true;
    for x in model.units() {
        for k in 0..model.n as i64 {
            ok &= check_one(&HFactor { x, k, g: GlMat::identity(model) })?;
        }
    }
    r.check("tau identity on O^x phi^k", ok);
    if budget.samples > 0 {
        let mut ok = true;
        for _ in 0..budget.samples {
            ok &= check_one(&model.random_h(rng))?;
        }
        r.check(format!("tau identity on {} sampled elements of H", budget.samples), ok);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model(case: Case, q: u64, n: u32) -> GlModel {
        GlModel::new(case, q, n).unwrap()
    }

    #[test]
    fn psi_examples() {
        let m = model(Case::Split, 3, 2);
        let f = m.field().clone();
        let mut g = GlMat::identity(&m);
        assert!(m.psi_zeta_root(Elem(1), &g).unwrap().is_one());
        g.set(0, 1, 0, Elem(1));
        assert_eq!(m.psi_zeta_root(Elem(1), &g).unwrap(), RootOfUnity::new(3, 1).unwrap());
        let mut g = GlMat::identity(&m);
        g.set(1, 0, 1, Elem(1));
        assert_eq!(m.psi_zeta_root(f.from_int(2), &g).unwrap(), RootOfUnity::new(3, 2).unwrap());
    }

    #[test]
    fn lambda_on_phi_and_center() {
        let m = model(Case::Split, 3, 3);
        let chi = MultChar::new(m.field(), 1, 1).unwrap();
        let c = RootOfUnity::new(8, 3).unwrap();
        let p = SscParamsGL::new(&m, Elem(1), chi, c).unwrap();
        let h = HFactor { x: Elem(1), k: 1, g: GlMat::identity(&m) };
        assert_eq!(lambda_gl_root(&m, &p, &h).unwrap(), c);
        let gen = m.field().subfield_generator(1).unwrap();
        let hx = HFactor { x: gen, k: 0, g: GlMat::identity(&m) };
        assert_eq!(lambda_gl_root(&m, &p, &hx).unwrap(), RootOfUnity::minus_one());
    }

    #[test]
    fn factor_roundtrip() {
        let m = model(Case::Split, 3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let h = m.random_h(&mut rng);
            let mat = h.to_matrix(&m, Elem(2)).unwrap();
            let back = m.factor_h(Elem(2), &mat).unwrap();
            assert_eq!(back.x, h.x);
            assert_eq!(back.k, h.k);
            let p =
                SscParamsGL::new(&m, Elem(2), MultChar::trivial(m.field(), 1).unwrap(), RootOfUnity::one()).unwrap();
            assert_eq!(lambda_gl_root(&m, &p, &back).unwrap(), lambda_gl_root(&m, &p, &h).unwrap());
        }
    }

    #[test]
    fn contragredient_examples() {
        let m = model(Case::Split, 3, 2);
        let quad = MultChar::new(m.field(), 1, 1).unwrap();
        let i = RootOfUnity::new(4, 1).unwrap();
        let p = SscParamsGL::new(&m, Elem(1), quad, i).unwrap();
        let d = contragredient_params(&m, &p).unwrap();
        assert_eq!((d.zeta, d.chi, d.c), (Elem(1), quad, i));
        assert_eq!(contragredient_params(&m, &d).unwrap(), p);
    }

    #[test]
    fn csd_examples() {
        let m = model(Case::Split, 3, 3);
        let p = SscParamsGL::new(&m, Elem(1), MultChar::trivial(m.field(), 1).unwrap(), RootOfUnity::one()).unwrap();
        assert!(!is_conjugate_self_dual(&m, &p).unwrap());
        let m = model(Case::Unramified, 4, 2);
        for e in 0..3 {
            let chi = MultChar::new(m.field(), 2, e).unwrap();
            let p = SscParamsGL::new(&m, Elem(1), chi, RootOfUnity::one()).unwrap();
            assert!(is_conjugate_self_dual(&m, &p).unwrap());
            assert_eq!(predicted_rec_parity(&m, &p).unwrap(), 1);
        }
    }

    #[test]
    fn intertwiner_small_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let budget = CheckBudget { exhaustive: true, samples: 100 };
        for (case, q, n) in [(Case::Split, 3, 2), (Case::Split, 2, 3), (Case::Ramified, 3, 3), (Case::Unramified, 4, 2)]
        {
            let m = model(case, q, n);
            let chi = MultChar::new(m.field(), m.q_degree(), 1).unwrap();
            let p = SscParamsGL::new(&m, m.field().from_int(1), chi, RootOfUnity::new(5, 2).unwrap()).unwrap();
            let r = verify_intertwiner_gl(&m, &p, budget, &mut rng).unwrap();
            assert!(r.passed(), "{r}");
            let r = verify_tau_twist_gl(&m, &p, budget, &mut rng).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn corrupted_intertwiner_fails() {
        let m = model(Case::Split, 3, 2);
        let p = SscParamsGL::new(&m, Elem(1), MultChar::trivial(m.field(), 1).unwrap(), RootOfUnity::one()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = verify_intertwiner_with(
            &m,
            &p,
            &[Elem(1), Elem(1)],
            CheckBudget { exhaustive: true, samples: 0 },
            &mut rng,
        )
        .unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn jl_sign() {
        let d = DModel::new(Case::Split, 3, 4, 2).unwrap();
        let g = GlModel::for_d(&d).unwrap();
        let i = RootOfUnity::new(4, 1).unwrap();
        let p = SscParamsGL::new(&g, Elem(1), MultChar::trivial(g.field(), 1).unwrap(), i).unwrap();
        assert_eq!(jl_of_gl_params(&d, &p).unwrap().c, RootOfUnity::new(4, 3).unwrap());
    }
}
