//! Equal-characteristic local rings at finite precision.
//!
//! `O/p^m` is modelled as `F[u]/u^m` with `u` playing the uniformiser, the
//! maximal order of the division algebra through the Ore ring `F[Pi]` with
//! `Pi a = sigma(a) Pi`, and Dieudonne-type operators as semilinear matrices.
//! Frobenius twists are counted in absolute units: twist `e` means
//! `x -> x^(p^e)` on coefficients.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{Elem, GaloisField};
use crate::report::Report;

/// `sum c_i u^i mod u^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TruncElem(pub Vec<Elem>);

impl TruncElem {
    pub fn coeff(&self, i: usize) -> Elem {
        self.0.get(i).copied().unwrap_or(Elem(0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.0 == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeff(0).0 != 0
    }

    /// `u`-adic valuation, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| c.0 != 0)
    }
}

#[derive(Debug, Clone)]
pub struct TruncRing {
    field: Arc<GaloisField>,
    m: usize,
}

impl TruncRing {
    pub fn new(field: Arc<GaloisField>, m: usize) -> Result<TruncRing> {
        if m == 0 {
            return Err(Error::InvalidParameters("truncation length must be positive".into()));
        }
        Ok(TruncRing { field, m })
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn precision(&self) -> usize {
        self.m
    }

    pub fn zero(&self) -> TruncElem {
        TruncElem(vec![Elem(0); self.m])
    }

    pub fn one(&self) -> TruncElem {
        self.constant(Elem(1))
    }

    pub fn constant(&self, c: Elem) -> TruncElem {
        let mut v = vec![Elem(0); self.m];
        v[0] = c;
        TruncElem(v)
    }

    /// `c u^k`, zero once `k >= m`.
    pub fn monomial(&self, c: Elem, k: usize) -> TruncElem {
        let mut v = vec![Elem(0); self.m];
        if k < self.m {
            v[k] = c;
        }
        TruncElem(v)
    }

    pub fn uniformizer(&self) -> TruncElem {
        self.monomial(Elem(1), 1)
    }

    pub fn from_coeffs(&self, coeffs: &[Elem]) -> TruncElem {
        let mut v = vec![Elem(0); self.m];
        for (slot, &c) in v.iter_mut().zip(coeffs) {
            *slot = c;
        }
        TruncElem(v)
    }

    pub fn add(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        TruncElem((0..self.m).map(|i| self.field.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &TruncElem) -> TruncElem {
        TruncElem((0..self.m).map(|i| self.field.neg(a.coeff(i))).collect())
    }

    pub fn sub(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        let f = &self.field;
        let mut out = vec![Elem(0); self.m];
        for i in 0..self.m {
            let x = a.coeff(i);
            if x.0 == 0 {
                continue;
            }
            for j in 0..self.m - i {
                let y = b.coeff(j);
                if y.0 != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(x, y));
                }
            }
        }
        TruncElem(out)
    }

    pub fn scale(&self, c: Elem, a: &TruncElem) -> TruncElem {
        TruncElem((0..self.m).map(|i| self.field.mul(c, a.coeff(i))).collect())
    }

    pub fn inv(&self, a: &TruncElem) -> Result<TruncElem> {
        let f = &self.field;
        let a0_inv = f.inv(a.coeff(0))?;
        let mut b = vec![Elem(0); self.m];
        b[0] = a0_inv;
        for k in 1..self.m {
            let mut s = Elem(0);
            for i in 1..=k {
                s = f.add(s, f.mul(a.coeff(i), b[k - i]));
            }
            b[k] = f.neg(f.mul(a0_inv, s));
        }
        Ok(TruncElem(b))
    }

    pub fn pow(&self, a: &TruncElem, e: u64) -> TruncElem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Coefficientwise `x -> x^(p^e)`.
    pub fn frob(&self, a: &TruncElem, e: i64) -> TruncElem {
        TruncElem((0..self.m).map(|i| self.field.frobenius_p(a.coeff(i), e)).collect())
    }

    /// The involution `u -> -u`.
    pub fn negate_u(&self, a: &TruncElem) -> TruncElem {
        TruncElem(
            (0..self.m)
                .map(|i| {
                    let c = a.coeff(i);
                    if i % 2 == 1 {
                        self.field.neg(c)
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }
}

/// `sum a_i Pi^i` with `Pi a = sigma(a) Pi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OrePoly(pub Vec<Elem>);

impl OrePoly {
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| c.0 != 0)
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.0.get(i).copied().unwrap_or(Elem(0))
    }

    fn trimmed(mut self) -> OrePoly {
        while self.0.last().is_some_and(|c| c.0 == 0) {
            self.0.pop();
        }
        self
    }
}

/// `K[Pi]` where `Pi a = a^(p^sigma) Pi`.
#[derive(Debug, Clone)]
pub struct OreRing {
    field: Arc<GaloisField>,
    sigma: u32,
}

impl OreRing {
    pub fn new(field: Arc<GaloisField>, sigma: u32) -> OreRing {
        OreRing { field, sigma }
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn constant(&self, a: Elem) -> OrePoly {
        OrePoly(vec![a]).trimmed()
    }

    /// `a Pi^k`.
    pub fn monomial(&self, a: Elem, k: usize) -> OrePoly {
        let mut v = vec![Elem(0); k + 1];
        v[k] = a;
        OrePoly(v).trimmed()
    }

    pub fn pi(&self) -> OrePoly {
        self.monomial(Elem(1), 1)
    }

    pub fn add(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        let n = f.0.len().max(g.0.len());
        OrePoly((0..n).map(|i| self.field.add(f.coeff(i), g.coeff(i))).collect()).trimmed()
    }

    pub fn mul(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        if f.0.is_empty() || g.0.is_empty() {
            return OrePoly(Vec::new());
        }
        let fld = &self.field;
        let mut out = vec![Elem(0); f.0.len() + g.0.len() - 1];
        for (i, &a) in f.0.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, &b) in g.0.iter().enumerate() {
                if b.0 == 0 {
                    continue;
                }
                let tb = fld.frobenius_p(b, i as i64 * self.sigma as i64);
                out[i + j] = fld.add(out[i + j], fld.mul(a, tb));
            }
        }
        OrePoly(out).trimmed()
    }

    pub fn pow(&self, f: &OrePoly, e: u32) -> OrePoly {
        let mut acc = self.constant(Elem(1));
        for _ in 0..e {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// Evaluates `f` as the additive polynomial `sum a_i X^(p^(i sigma))` at `x`.
    pub fn apply(&self, f: &OrePoly, x: Elem) -> Elem {
        let fld = &self.field;
        f.0.iter()
            .enumerate()
            .fold(Elem(0), |acc, (i, &a)| fld.add(acc, fld.mul(a, fld.frobenius_p(x, i as i64 * self.sigma as i64))))
    }
}

/// `x -> A sigma^twist(x)`, `A` a `dim x dim` array stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemilinearMap {
    pub dim: usize,
    pub entries: Vec<TruncElem>,
    pub twist: i64,
}

impl SemilinearMap {
    pub fn entry(&self, i: usize, j: usize) -> &TruncElem {
        &self.entries[i * self.dim + j]
    }

    pub fn identity(ring: &TruncRing, dim: usize) -> SemilinearMap {
        Self::diagonal(ring, &vec![ring.one(); dim], 0)
    }

    pub fn diagonal(ring: &TruncRing, diag: &[TruncElem], twist: i64) -> SemilinearMap {
        let dim = diag.len();
        let mut entries = vec![ring.zero(); dim * dim];
        for (i, d) in diag.iter().enumerate() {
            entries[i * dim + i] = d.clone();
        }
        SemilinearMap { dim, entries, twist }
    }

    pub fn from_columns(ring: &TruncRing, columns: &[Vec<TruncElem>], twist: i64) -> SemilinearMap {
        let dim = columns.len();
        let mut entries = vec![ring.zero(); dim * dim];
        for (j, col) in columns.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                entries[i * dim + j] = e.clone();
            }
        }
        SemilinearMap { dim, entries, twist }
    }

    /// `(A, e) o (B, f) = (A sigma^e(B), e + f)`.
    pub fn compose(&self, ring: &TruncRing, other: &SemilinearMap) -> Result<SemilinearMap> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "composing {}x{} with {}x{}",
                self.dim, self.dim, other.dim, other.dim
            )));
        }
        let d = self.dim;
        let twisted: Vec<TruncElem> = other.entries.iter().map(|x| ring.frob(x, self.twist)).collect();
        let mut entries = vec![ring.zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &twisted[k * d + j];
                    if !b.is_zero() {
                        entries[i * d + j] = ring.add(&entries[i * d + j], &ring.mul(a, b));
                    }
                }
            }
        }
        Ok(SemilinearMap { dim: d, entries, twist: self.twist + other.twist })
    }

    pub fn apply(&self, ring: &TruncRing, v: &[TruncElem]) -> Result<Vec<TruncElem>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a {}x{} map",
                v.len(),
                self.dim,
                self.dim
            )));
        }
        let tv: Vec<TruncElem> = v.iter().map(|x| ring.frob(x, self.twist)).collect();
        Ok((0..self.dim)
            .map(|i| (0..self.dim).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(self.entry(i, j), &tv[j]))))
            .collect())
    }

    /// Applies a ring map to every entry, keeping the twist.
    pub fn map_entries(&self, f: impl Fn(&TruncElem) -> TruncElem) -> SemilinearMap {
        SemilinearMap { dim: self.dim, entries: self.entries.iter().map(f).collect(), twist: self.twist }
    }

    /// The matrix mod `u` as plain field entries.
    pub fn residue(&self) -> Vec<Elem> {
        self.entries.iter().map(|e| e.coeff(0)).collect()
    }
}

/// Rank of a matrix over a finite field by elimination.
pub fn rank_over_field(field: &GaloisField, rows: usize, cols: usize, m: &[Elem]) -> usize {
    let mut a = m.to_vec();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + c].0 != 0) else {
            continue;
        };
        for j in 0..cols {
            a.swap(rank * cols + j, piv * cols + j);
        }
        let inv = field.inv(a[rank * cols + c]).expect("pivot is nonzero");
        for r in 0..rows {
            if r == rank || a[r * cols + c].0 == 0 {
                continue;
            }
            let factor = field.mul(a[r * cols + c], inv);
            for j in 0..cols {
                let t = field.mul(factor, a[rank * cols + j]);
                a[r * cols + j] = field.sub(a[r * cols + j], t);
            }
        }
        rank += 1;
    }
    rank
}

/// Checks `Pi a = a^q Pi` and centrality of `Pi^n` in `F_{q^n}[Pi]`.
pub fn formal_module_endo_check(n: u32, q: u64) -> Result<Report> {
    let (p, f) = crate::galois::prime_power(q)?;
    let field = Arc::new(GaloisField::new(p, f * n)?);
    let ring = OreRing::new(field.clone(), f);
    let mut report = Report::new(format!("endo n={n} q={q}"));
    let pi = ring.pi();
    let pin = ring.pow(&pi, n);
    report.check("Pi^n is the monomial of degree n", pin == ring.monomial(Elem(1), n as usize));
    let gens = field.subfield_elements(f * n)?;
    let mut skew_ok = true;
    let mut central_ok = true;
    let mut additive_ok = true;
    for &a in gens.iter().skip(1) {
        let lhs = ring.mul(&pi, &ring.constant(a));
        let rhs = ring.mul(&ring.constant(field.frobenius_p(a, f as i64)), &pi);
        skew_ok &= lhs == rhs;
        let ca = ring.constant(a);
        central_ok &= ring.mul(&pin, &ca) == ring.mul(&ca, &pin);
        // Pi acts as X -> X^q; composition of additive maps matches the Ore product
        for &x in gens.iter().take(8) {
            additive_ok &= ring.apply(&lhs, x) == ring.apply(&pi, ring.apply(&ca, x));
        }
    }
    report.check("Pi a = sigma(a) Pi", skew_ok);
    report.check("Pi^n central", central_ok);
    report.check("Ore product matches composition of q-polynomials", additive_ok);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<GaloisField> {
        Arc::new(GaloisField::new(3, 2).unwrap())
    }

    #[test]
    fn trunc_inverse() {
        let ring = TruncRing::new(f9(), 4).unwrap();
        let g = ring.field().generator();
        let x = ring.from_coeffs(&[g, Elem(1), Elem(0), g]);
        let y = ring.inv(&x).unwrap();
        assert_eq!(ring.mul(&x, &y), ring.one());
        assert!(ring.inv(&ring.uniformizer()).is_err());
    }

    #[test]
    fn ore_examples() {
        let f = f9();
        let ring = OreRing::new(f.clone(), 1);
        let a = f.generator();
        let lhs = ring.mul(&ring.pi(), &ring.constant(a));
        assert_eq!(lhs, ring.monomial(f.frobenius_p(a, 1), 1));
        let g = ring.add(&ring.pi(), &ring.constant(a));
        assert_eq!(ring.mul(&g, &ring.constant(Elem(1))), g);
    }

    #[test]
    fn endo_examples() {
        for (n, q) in [(2, 3), (1, 2), (3, 2)] {
            let r = formal_module_endo_check(n, q).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn semilinear_twists_add() {
        let ring = TruncRing::new(f9(), 2).unwrap();
        let a = SemilinearMap::identity(&ring, 2);
        let b = SemilinearMap { twist: 1, ..a.clone() };
        let c = SemilinearMap { twist: -1, ..a.clone() };
        assert_eq!(b.compose(&ring, &c).unwrap(), a);
        assert_eq!(b.compose(&ring, &a).unwrap(), b);
        let wrong = SemilinearMap::identity(&ring, 3);
        assert!(a.compose(&ring, &wrong).is_err());
    }

    #[test]
    fn rank_examples() {
        let f = f9();
        let m = [Elem(1), Elem(2), Elem(2), Elem(1)];
        // rows (1,2) and (2,1): 2*(1,2) = (2,1) over F_3
        assert_eq!(rank_over_field(&f, 2, 2, &m), 1);
        assert_eq!(rank_over_field(&f, 2, 2, &[Elem(1), Elem(0), Elem(0), Elem(1)]), 2);
    }
}
