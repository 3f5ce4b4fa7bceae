//! Conjugate self-duality for explicit finite groups.
//!
//! A [`FiniteGroupModel`] is a multiplication table together with an
//! automorphism `tau` and an element `t` with `tau^2 = Int(t)`, `tau(t) = t`.
//! Parities are computed by solving for the invariant pairing directly.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclo::CycScalar;
use crate::error::{Error, Result};
use crate::parity::linalg::{nullspace, Matrix};
use crate::report::Report;

#[derive(Debug, Clone)]
pub struct FiniteGroupModel {
    pub name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    pub tau: Vec<usize>,
    pub t: usize,
}

impl FiniteGroupModel {
    pub fn new(name: impl Into<String>, table: Vec<usize>, tau: Vec<usize>, t: usize) -> Result<FiniteGroupModel> {
        let order = tau.len();
        if table.len() != order * order || t >= order {
            return Err(Error::DimensionMismatch("group table does not match tau".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e * order + g] == g && table[g * order + e] == g))
            .ok_or_else(|| Error::InvalidParameters("no identity element".into()))?;
        let mut inverses = vec![usize::MAX; order];
        for g in 0..order {
            inverses[g] = (0..order)
                .find(|&h| table[g * order + h] == identity)
                .ok_or_else(|| Error::InvalidParameters(format!("element {g} has no inverse")))?;
        }
        let model = FiniteGroupModel { name: name.into(), order, table, identity, inverses, tau, t };
        let r = model.check_axioms();
        if !r.passed() {
            return Err(Error::InvalidParameters(r.to_string()));
        }
        Ok(model)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn check_axioms(&self) -> Report {
        let n = self.order;
        let mut r = Report::new(format!("axioms {}", self.name));
        let assoc =
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))));
        r.check("associative", assoc);
        let mut seen = vec![false; n];
        for &x in &self.tau {
            if x < n {
                seen[x] = true;
            }
        }
        r.check("tau bijective", seen.iter().all(|&s| s));
        let hom = (0..n).all(|a| (0..n).all(|b| self.tau[self.mul(a, b)] == self.mul(self.tau[a], self.tau[b])));
        r.check("tau multiplicative", hom);
        let ti = self.inv(self.t);
        let sq = (0..n).all(|g| self.tau[self.tau[g]] == self.mul(self.mul(self.t, g), ti));
        r.check("tau^2 = Int(t)", sq);
        r.check("tau(t) = t", self.tau[self.t] == self.t);
        r
    }

    /// `(Int(h) o tau, h tau(h) t)`.
    pub fn change_tau(&self, h: usize) -> Result<FiniteGroupModel> {
        let hi = self.inv(h);
        let tau = (0..self.order).map(|g| self.mul(self.mul(h, self.tau[g]), hi)).collect();
        let t = self.mul(self.mul(h, self.tau[h]), self.t);
        FiniteGroupModel::new(format!("{}^h{h}", self.name), self.table.clone(), tau, t)
    }

    pub fn product(&self, other: &FiniteGroupModel) -> Result<FiniteGroupModel> {
        let (n1, n2) = (self.order, other.order);
        let n = n1 * n2;
        let idx = |a: usize, b: usize| a * n2 + b;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[x * n + y] = idx(self.mul(x / n2, y / n2), other.mul(x % n2, y % n2));
            }
        }
        let tau = (0..n).map(|x| idx(self.tau[x / n2], other.tau[x % n2])).collect();
        FiniteGroupModel::new(format!("{} x {}", self.name, other.name), table, tau, idx(self.t, other.t))
    }
}

/// A matrix representation given on every group element.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub name: String,
    pub dim: usize,
    pub mats: Vec<Matrix>,
}

impl MatrixRep {
    pub fn kron(&self, other: &MatrixRep) -> MatrixRep {
        let mut mats = Vec::with_capacity(self.mats.len() * other.mats.len());
        for a in &self.mats {
            for b in &other.mats {
                mats.push(a.kron(b));
            }
        }
        MatrixRep { name: format!("{} (x) {}", self.name, other.name), dim: self.dim * other.dim, mats }
    }

    fn modulus(&self) -> u32 {
        self.mats
            .iter()
            .flat_map(|m| m.data.iter().map(CycScalar::modulus))
            .fold(1u64, |a, b| num_integer::lcm(a, b as u64)) as u32
    }

    /// The one-dimensional representation `det pi`.
    pub fn det(&self) -> Result<MatrixRep> {
        let mats = self.mats.iter().map(|m| Matrix::from_rows(vec![vec![m.det()?]])).collect::<Result<Vec<_>>>()?;
        Ok(MatrixRep { name: format!("det {}", self.name), dim: 1, mats })
    }
}

fn rational(n: u32, num: i64, den: i64) -> Result<CycScalar> {
    CycScalar::from_rational(n, BigRational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn is_homomorphism(g: &FiniteGroupModel, rep: &MatrixRep) -> Result<bool> {
    for a in 0..g.order() {
        for b in 0..g.order() {
            if rep.mats[g.mul(a, b)] != rep.mats[a].mul(&rep.mats[b])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `sum_g |tr pi(g)|^2 = |G|`.
pub fn is_irreducible(g: &FiniteGroupModel, rep: &MatrixRep) -> Result<bool> {
    let n = rep.modulus();
    let mut acc = CycScalar::zero(n)?;
    for m in &rep.mats {
        let tr = m.trace()?;
        acc = &acc + &(&tr * &tr.conj());
    }
    Ok(acc == CycScalar::from_int(n, g.order() as i64)?)
}

/// `(1/|G|) sum_g tr pi(g^2)`, by direct summation.
pub fn frobenius_schur_indicator(g: &FiniteGroupModel, rep: &MatrixRep) -> Result<CycScalar> {
    let n = rep.modulus();
    let mut acc = CycScalar::zero(n)?;
    for x in 0..g.order() {
        acc = &acc + &rep.mats[g.mul(x, x)].trace()?;
    }
    Ok(&acc * &rational(n, 1, g.order() as i64)?)
}

/// Solutions `B` of `pi(tau g)^T B pi(g) = B` for all `g`, as flattened matrices.
pub fn invariant_pairings(g: &FiniteGroupModel, rep: &MatrixRep) -> Result<Vec<Matrix>> {
    let d = rep.dim;
    let n = rep.modulus();
    let unknowns = d * d;
    let mut rows = Vec::new();
    let one = CycScalar::one(n)?;
    for x in 0..g.order() {
        let a = &rep.mats[g.tau[x]];
        let c = &rep.mats[x];
        for k in 0..d {
            for l in 0..d {
                let mut row = vec![CycScalar::zero(n)?; unknowns];
                for i in 0..d {
                    let aik = a.get(i, k);
                    if aik.is_zero() {
                        continue;
                    }
                    for j in 0..d {
                        row[i * d + j] = &row[i * d + j] + &(aik * c.get(j, l));
                    }
                }
                row[k * d + l] = &row[k * d + l] - &one;
                rows.push(row);
            }
        }
    }
    let sys = Matrix::from_rows(rows)?;
    Ok(nullspace(&sys)?.into_iter().map(|v| Matrix { rows: d, cols: d, data: v }).collect())
}

/// `None` if `pi` is not conjugate self-dual; otherwise the scalar `C` with `pi(t)^T B = C B^T`.
pub fn parity(g: &FiniteGroupModel, rep: &MatrixRep) -> Result<Option<CycScalar>> {
    let sols = invariant_pairings(g, rep)?;
    let b = match sols.len() {
        0 => return Ok(None),
        1 => &sols[0],
        k => return Err(Error::PairingNotUnique(k)),
    };
    if b.rank() != rep.dim {
        return Err(Error::DegeneratePairing);
    }
    let lhs = rep.mats[g.t].transpose().mul(b)?;
    let bt = b.transpose();
    let (k, l) = (0..rep.dim * rep.dim)
        .map(|x| (x / rep.dim, x % rep.dim))
        .find(|&(k, l)| !bt.get(k, l).is_zero())
        .ok_or(Error::DegeneratePairing)?;
    let c = lhs.get(k, l).div(bt.get(k, l))?;
    if lhs != bt.scale(&c) {
        return Err(Error::NoParityScalar);
    }
    Ok(Some(c))
}

/// Runs every framework check for one group and its irreducible representations.
pub fn check_framework_finite(g: &FiniteGroupModel, reps: &[MatrixRep]) -> Result<Report> {
    let mut r = Report::new(format!("framework {}", g.name));
    r.absorb(g.check_axioms());
    let classical = g.tau.iter().enumerate().all(|(i, &x)| i == x) && g.t == g.identity();
    for rep in reps {
        let tag = &rep.name;
        r.check(format!("{tag}: homomorphism"), is_homomorphism(g, rep)?);
        r.check(format!("{tag}: irreducible"), is_irreducible(g, rep)?);
        let c = parity(g, rep)?;
        if classical {
            let fs = frobenius_schur_indicator(g, rep)?;
            let expect = match &c {
                Some(c) => c.clone(),
                None => CycScalar::zero(fs.modulus())?,
            };
            r.check(format!("{tag}: parity = Frobenius-Schur indicator"), fs == expect);
        }
        for h in 0..g.order() {
            let g2 = g.change_tau(h)?;
            let c2 = parity(&g2, rep)?;
            r.check(format!("{tag}: change of tau by h={h}"), c2 == c);
        }
        let Some(c) = c else {
            continue;
        };
        let sign = c.as_sign();
        r.check(format!("{tag}: C in {{+1,-1}}"), sign.is_ok());
        r.check(format!("{tag}: C^2 = 1"), (&c * &c).is_one());
        if rep.dim == 1 {
            r.check(format!("{tag}: C = pi(t)"), c == *rep.mats[g.t].get(0, 0));
        }
        let det = rep.det()?;
        let c_det = parity(g, &det)?;
        let c_pow = c.pow(rep.dim as i64)?;
        r.check(format!("{tag}: C(det) = C^dim"), c_det.as_ref() == Some(&c_pow));
        r.check(format!("{tag}: C(det) = det pi(t)"), c_det.as_ref() == Some(det.mats[g.t].get(0, 0)));
    }
    Ok(r)
}

/// Multiplicativity over `G1 x G2` for every pair of conjugate self-dual representations.
pub fn check_product(
    g1: &FiniteGroupModel,
    reps1: &[MatrixRep],
    g2: &FiniteGroupModel,
    reps2: &[MatrixRep],
) -> Result<Report> {
    let g = g1.product(g2)?;
    let mut r = Report::new(format!("product {}", g.name));
    for a in reps1 {
        let Some(ca) = parity(g1, a)? else { continue };
        for b in reps2 {
            let Some(cb) = parity(g2, b)? else { continue };
            let ab = a.kron(b);
            r.check(format!("{}: irreducible", ab.name), is_irreducible(&g, &ab)?);
            let cab = parity(&g, &ab)?;
            r.check(format!("{}: C = C1 C2", ab.name), cab == Some(&ca * &cb));
        }
    }
    Ok(r)
}

pub mod builtin {
    //! Small groups with their irreducible representations.

    use super::*;

    fn scalar_rep(name: String, vals: Vec<CycScalar>) -> Result<MatrixRep> {
        let mats = vals.into_iter().map(|v| Matrix::from_rows(vec![vec![v]])).collect::<Result<Vec<_>>>()?;
        Ok(MatrixRep { name, dim: 1, mats })
    }

    fn cyclic_table(n: usize) -> Vec<usize> {
        (0..n * n).map(|x| (x / n + x % n) % n).collect()
    }

    fn cyclic_chars(n: usize) -> Result<Vec<MatrixRep>> {
        (0..n)
            .map(|j| {
                let vals =
                    (0..n).map(|k| CycScalar::root_of_unity(n as u32, (j * k) as i64)).collect::<Result<Vec<_>>>()?;
                scalar_rep(format!("chi{j}"), vals)
            })
            .collect()
    }

    /// `Z/n` with `tau = -1` and the given `t`.
    pub fn cyclic_negation(n: usize, t: usize) -> Result<(FiniteGroupModel, Vec<MatrixRep>)> {
        let tau = (0..n).map(|x| (n - x) % n).collect();
        let g = FiniteGroupModel::new(format!("Z/{n} tau=-1 t={t}"), cyclic_table(n), tau, t)?;
        Ok((g, cyclic_chars(n)?))
    }

    const S3: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];

    /// `S_3` with `tau = id`, `t = 1`.
    pub fn s3() -> Result<(FiniteGroupModel, Vec<MatrixRep>)> {
        let compose = |a: &[usize; 3], b: &[usize; 3]| -> [usize; 3] { [a[b[0]], a[b[1]], a[b[2]]] };
        let index = |p: [usize; 3]| S3.iter().position(|q| *q == p).expect("S3 is closed");
        let mut table = Vec::with_capacity(36);
        for a in &S3 {
            for b in &S3 {
                table.push(index(compose(a, b)));
            }
        }
        let g = FiniteGroupModel::new("S3", table, (0..6).collect(), 0)?;
        let n = 1;
        let sign = |p: &[usize; 3]| -> i64 {
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            if inversions % 2 == 0 {
                1
            } else {
                -1
            }
        };
        let triv = scalar_rep("trivial".into(), (0..6).map(|_| CycScalar::one(n)).collect::<Result<_>>()?)?;
        let sgn =
            scalar_rep("sign".into(), S3.iter().map(|p| CycScalar::from_int(n, sign(p))).collect::<Result<_>>()?)?;
        // action on the sum-zero plane with basis e1-e2, e2-e3
        let mut mats = Vec::with_capacity(6);
        for p in &S3 {
            let image = |v: [i64; 3]| -> [i64; 3] {
                let mut w = [0i64; 3];
                for i in 0..3 {
                    w[p[i]] += v[i];
                }
                w
            };
            let cols: Vec<[i64; 2]> = [[1, -1, 0], [0, 1, -1]]
                .iter()
                .map(|&v| {
                    let w = image(v);
                    [w[0], -w[2]]
                })
                .collect();
            let rows = (0..2)
                .map(|i| (0..2).map(|j| CycScalar::from_int(n, cols[j][i])).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            mats.push(Matrix::from_rows(rows)?);
        }
        let std = MatrixRep { name: "standard".into(), dim: 2, mats };
        Ok((g, vec![triv, sgn, std]))
    }

    // quaternion units as (sign, unit) with unit in {1, i, j, k}
    fn q8_unit_mul(a: usize, b: usize) -> (bool, usize) {
        const T: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        T[a][b]
    }

    fn q8_table() -> Vec<usize> {
        // element index = 4 * negative + unit
        let mut table = Vec::with_capacity(64);
        for x in 0..8 {
            for y in 0..8 {
                let (neg, u) = q8_unit_mul(x % 4, y % 4);
                let sign = (x / 4 == 1) ^ (y / 4 == 1) ^ neg;
                table.push(4 * sign as usize + u);
            }
        }
        table
    }

    fn q8_reps() -> Result<Vec<MatrixRep>> {
        let n = 4;
        let mut reps = Vec::new();
        for (si, sj) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
            let unit_val = [1, si, sj, si * sj];
            let vals = (0..8).map(|x| CycScalar::from_int(n, unit_val[x % 4])).collect::<Result<Vec<_>>>()?;
            scalar_rep(format!("chi({si},{sj})"), vals).map(|r| reps.push(r))?;
        }
        let z = |k: i64| CycScalar::root_of_unity(n, k);
        let zero = CycScalar::zero(n)?;
        let units = [
            Matrix::identity(n, 2)?,
            Matrix::from_rows(vec![vec![z(1)?, zero.clone()], vec![zero.clone(), z(3)?]])?,
            Matrix::from_rows(vec![vec![zero.clone(), z(0)?], vec![z(2)?, zero.clone()]])?,
            Matrix::from_rows(vec![vec![zero.clone(), z(1)?], vec![z(1)?, zero.clone()]])?,
        ];
        let minus = CycScalar::from_int(n, -1)?;
        let mats = (0..8).map(|x| if x / 4 == 1 { units[x % 4].scale(&minus) } else { units[x % 4].clone() }).collect();
        reps.push(MatrixRep { name: "two-dim".into(), dim: 2, mats });
        Ok(reps)
    }

    /// `Q_8` with `tau = id`, `t = 1`.
    pub fn q8() -> Result<(FiniteGroupModel, Vec<MatrixRep>)> {
        let g = FiniteGroupModel::new("Q8", q8_table(), (0..8).collect(), 0)?;
        Ok((g, q8_reps()?))
    }

    /// `Q_8` with `tau` swapping `i` and `j` (so `k -> -k`) and `t = +-1`.
    pub fn q8_swap(t_negative: bool) -> Result<(FiniteGroupModel, Vec<MatrixRep>)> {
        let swap_unit = [0usize, 2, 1, 3];
        let tau = (0..8)
            .map(|x| {
                let u = swap_unit[x % 4];
                let neg = (x / 4 == 1) ^ (x % 4 == 3);
                4 * neg as usize + u
            })
            .collect();
        let t = if t_negative { 4 } else { 0 };
        let g = FiniteGroupModel::new(
            format!("Q8 tau=swap t={}", if t_negative { "-1" } else { "1" }),
            q8_table(),
            tau,
            t,
        )?;
        Ok((g, q8_reps()?))
    }

    /// Every built-in model.
    pub fn all() -> Result<Vec<(FiniteGroupModel, Vec<MatrixRep>)>> {
        Ok(vec![
            cyclic_negation(4, 0)?,
            cyclic_negation(4, 2)?,
            cyclic_negation(3, 0)?,
            s3()?,
            q8()?,
            q8_swap(false)?,
            q8_swap(true)?,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_faithful_character() {
        let (g, reps) = builtin::cyclic_negation(4, 0).unwrap();
        let c = parity(&g, &reps[1]).unwrap().unwrap();
        assert!(c.is_one());
    }

    #[test]
    fn q8_two_dim_is_symplectic() {
        let (g, reps) = builtin::q8().unwrap();
        let c = parity(&g, &reps[4]).unwrap().unwrap();
        assert_eq!(c.as_sign().unwrap(), -1);
        let fs = frobenius_schur_indicator(&g, &reps[4]).unwrap();
        assert_eq!(fs, CycScalar::from_int(4, -1).unwrap());
    }

    #[test]
    fn all_builtins_pass() {
        for (g, reps) in builtin::all().unwrap() {
            let r = check_framework_finite(&g, &reps).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn product_multiplicative() {
        let (g1, r1) = builtin::q8().unwrap();
        let (g2, r2) = builtin::s3().unwrap();
        let r = check_product(&g1, &r1, &g2, &r2).unwrap();
        assert!(r.passed(), "{r}");
        assert!(!r.is_empty());
    }

    #[test]
    fn bad_tau_rejected() {
        // tau = negation on Z/3 with t = 1 fails tau^2 = Int(t)? Z/3 is abelian so Int(t) = id; use a non-automorphism instead
        let table: Vec<usize> = (0..9).map(|x| (x / 3 + x % 3) % 3).collect();
        assert!(FiniteGroupModel::new("bad", table, vec![0, 1, 1], 0).is_err());
    }
}
