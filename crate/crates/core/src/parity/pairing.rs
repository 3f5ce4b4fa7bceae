//! Invariant pairings on monomial representations.
//!
//! The condition `pi(tau g)^T B pi(g) = B` for a monomial `pi` says
//! `B[P(i)][Q(j)] = s(i) s'(j) B[i][j]`: each generator moves one entry of
//! `B` to another entry times a root of unity. The solution space is spanned
//! by the orbits of entry positions on which these factors are consistent,
//! so its dimension is the number of consistent orbits.

use serde::Serialize;

use crate::cyclo::{CycScalar, RootOfUnity};
use crate::error::{Error, Result};
use crate::parity::linalg::Matrix;
use crate::parity::monomial::{MonomialMatrix, MonomialRep};

/// `x^T B y`, entries stored row-major. `None` entries are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BilinearForm {
    pub dim: usize,
    pub entries: Vec<Option<RootOfUnity>>,
}

impl BilinearForm {
    pub fn get(&self, i: usize, j: usize) -> Option<RootOfUnity> {
        self.entries[i * self.dim + j]
    }

    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn to_dense(&self, n: u32) -> Result<Matrix> {
        let mut m = Matrix::zeros(n, self.dim, self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if let Some(r) = self.get(i, j) {
                    m.set(i, j, r.to_cyc(n)?);
                }
            }
        }
        Ok(m)
    }

    pub fn to_cyc_entries(&self, n: u32) -> Result<Vec<CycScalar>> {
        Ok(self.to_dense(n)?.data)
    }

    fn is_permutation_pattern(&self) -> bool {
        let d = self.dim;
        let mut rows = vec![0usize; d];
        let mut cols = vec![0usize; d];
        for i in 0..d {
            for j in 0..d {
                if self.get(i, j).is_some() {
                    rows[i] += 1;
                    cols[j] += 1;
                }
            }
        }
        rows.iter().chain(&cols).all(|&c| c == 1)
    }

    /// Exact nondegeneracy; a permutation-shaped support is decided without elimination.
    pub fn is_nondegenerate(&self, n: u32) -> Result<bool> {
        if self.is_permutation_pattern() {
            return Ok(true);
        }
        Ok(self.to_dense(n)?.rank() == self.dim)
    }
}

/// One orbit of entry positions with values relative to its first node.
struct Orbit {
    nodes: Vec<(usize, RootOfUnity)>,
    consistent: bool,
}

/// Orbits of `(i, j) -> (pa(i), pb(j))` with value factor `fa(i) fb(j)`.
fn orbits(dim: usize, maps: &[(&[usize], Vec<RootOfUnity>, &[usize], Vec<RootOfUnity>)]) -> Vec<Orbit> {
    let total = dim * dim;
    let mut value: Vec<Option<RootOfUnity>> = vec![None; total];
    let mut out = Vec::new();
    for start in 0..total {
        if value[start].is_some() {
            continue;
        }
        value[start] = Some(RootOfUnity::one());
        let mut nodes = vec![(start, RootOfUnity::one())];
        let mut consistent = true;
        let mut head = 0;
        while head < nodes.len() {
            let (node, v) = nodes[head];
            head += 1;
            let (i, j) = (node / dim, node % dim);
            for (pa, fa, pb, fb) in maps {
                let target = pa[i] * dim + pb[j];
                let tv = fa[i].mul(&fb[j]).mul(&v);
                match value[target] {
                    Some(existing) => consistent &= existing == tv,
                    None => {
                        value[target] = Some(tv);
                        nodes.push((target, tv));
                    }
                }
            }
        }
        out.push(Orbit { nodes, consistent });
    }
    out
}

fn pairing_maps(rep: &MonomialRep) -> Vec<(&[usize], Vec<RootOfUnity>, &[usize], Vec<RootOfUnity>)> {
    rep.actions
        .iter()
        .zip(&rep.tau_actions)
        .map(|(g, tg)| (tg.perm.as_slice(), tg.scalars.clone(), g.perm.as_slice(), g.scalars.clone()))
        .collect()
}

/// Dimension of the space of invariant pairings.
pub fn pairing_space_dimension(rep: &MonomialRep) -> usize {
    orbits(rep.dim, &pairing_maps(rep)).iter().filter(|o| o.consistent).count()
}

/// The invariant pairing, normalised so its first nonzero entry is 1; `None` if there is none.
pub fn solve_invariant_pairing(rep: &MonomialRep) -> Result<Option<BilinearForm>> {
    let orbs = orbits(rep.dim, &pairing_maps(rep));
    let good: Vec<&Orbit> = orbs.iter().filter(|o| o.consistent).collect();
    match good.len() {
        0 => Ok(None),
        1 => {
            let mut entries = vec![None; rep.dim * rep.dim];
            for &(node, v) in &good[0].nodes {
                entries[node] = Some(v);
            }
            let form = BilinearForm { dim: rep.dim, entries };
            if !form.is_nondegenerate(rep.modulus)? {
                return Err(Error::DegeneratePairing);
            }
            Ok(Some(form))
        }
        k => Err(Error::PairingNotUnique(k)),
    }
}

/// Checks `pi(tau g)^T B pi(g) = B` on every generator.
pub fn verify_invariance(rep: &MonomialRep, form: &BilinearForm) -> bool {
    let d = rep.dim;
    rep.actions.iter().zip(&rep.tau_actions).all(|(g, tg)| {
        (0..d).all(|i| {
            (0..d).all(|j| {
                let moved = form.get(i, j).map(|v| tg.scalars[i].mul(&g.scalars[j]).mul(&v));
                form.get(tg.perm[i], g.perm[j]) == moved
            })
        })
    })
}

/// The scalar `C` with `pi(t)^T B = C B^T`, as a root of unity.
pub fn parity_scalar(t: &MonomialMatrix, form: &BilinearForm) -> Result<RootOfUnity> {
    let d = form.dim;
    let mut c: Option<RootOfUnity> = None;
    // (pi(t)^T B)[perm(i)][l] = s(i) B[i][l]
    for i in 0..d {
        let k = t.perm[i];
        for l in 0..d {
            let lhs = form.get(i, l).map(|v| t.scalars[i].mul(&v));
            let rhs = form.get(l, k);
            match (lhs, rhs) {
                (None, None) => {}
                (Some(a), Some(b)) => {
                    let ratio = a.mul(&b.inv());
                    match c {
                        None => c = Some(ratio),
                        Some(prev) if prev != ratio => return Err(Error::NoParityScalar),
                        _ => {}
                    }
                }
                _ => return Err(Error::NoParityScalar),
            }
        }
    }
    c.ok_or(Error::NoParityScalar)
}

/// The parity sign from the pairing.
pub fn parity_bruteforce(rep: &MonomialRep, form: &BilinearForm) -> Result<i8> {
    parity_scalar(&rep.t_action, form)?.as_sign()
}

/// Dimension of the commutant: orbits of `X[P i][P j] = s(i)^{-1} s(j) X[i][j]`.
pub fn commutant_dimension(rep: &MonomialRep) -> usize {
    let maps: Vec<_> = rep
        .actions
        .iter()
        .map(|g| {
            (
                g.perm.as_slice(),
                g.scalars.iter().map(RootOfUnity::inv).collect::<Vec<_>>(),
                g.perm.as_slice(),
                g.scalars.clone(),
            )
        })
        .collect();
    orbits(rep.dim, &maps).iter().filter(|o| o.consistent).count()
}

/// Irreducible iff the intertwining number is 1.
pub fn irreducibility_check(rep: &MonomialRep) -> bool {
    commutant_dimension(rep) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::{Case, DModel, SscParamsD, TwistData};
    use crate::galois::{Elem, MultChar};
    use crate::parity::monomial::build_rep_d;

    fn rep_for(case: Case, q: u64, n: u32, zeta: u64, chi_e: i64, c: RootOfUnity) -> MonomialRep {
        let model = DModel::new(case, q, n, 2).unwrap();
        let f = model.q_degree();
        let chi = MultChar::new(model.field(), f, chi_e).unwrap();
        let params = SscParamsD::new(&model, Elem(zeta), chi, c).unwrap();
        let tw = TwistData::canonical(&model).unwrap();
        build_rep_d(&model, &params, &tw).unwrap()
    }

    #[test]
    fn split_quadratic_is_symplectic() {
        // q = 3, n = 2, chi quadratic, c_D = -i
        let rep = rep_for(Case::Split, 3, 2, 1, 1, RootOfUnity::new(4, 3).unwrap());
        assert!(irreducibility_check(&rep));
        let form = solve_invariant_pairing(&rep).unwrap().expect("self-dual");
        assert!(verify_invariance(&rep, &form));
        assert_eq!(parity_bruteforce(&rep, &form).unwrap(), -1);
    }

    #[test]
    fn split_not_self_dual_has_no_pairing() {
        // c^2 = chi(-1) fails for c = 1 with chi quadratic on F_3
        let rep = rep_for(Case::Split, 3, 2, 1, 1, RootOfUnity::one());
        assert_eq!(solve_invariant_pairing(&rep).unwrap(), None);
    }

    #[test]
    fn one_dimensional_split() {
        // over F_2 the wild part takes values in {+1, -1}
        let rep = rep_for(Case::Split, 2, 1, 1, 0, RootOfUnity::one());
        assert_eq!(rep.dim, 1);
        let form = solve_invariant_pairing(&rep).unwrap().unwrap();
        assert_eq!(form.get(0, 0), Some(RootOfUnity::one()));
        assert_eq!(parity_bruteforce(&rep, &form).unwrap(), 1);
        // for odd p a depth-one character of F^x is never self-dual
        let odd = rep_for(Case::Split, 3, 1, 1, 0, RootOfUnity::one());
        assert_eq!(solve_invariant_pairing(&odd).unwrap(), None);
    }

    #[test]
    fn unramified_q4_trivial_chi() {
        let rep = rep_for(Case::Unramified, 4, 2, 1, 0, RootOfUnity::minus_one());
        let form = solve_invariant_pairing(&rep).unwrap().unwrap();
        assert_eq!(parity_bruteforce(&rep, &form).unwrap(), -1);
    }
}
