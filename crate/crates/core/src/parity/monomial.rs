//! Induced representations of `D^x` as permutation-with-scalars matrices on cosets.

use rand::Rng;
use serde::Serialize;

use crate::cyclo::{CycScalar, RootOfUnity};
use crate::division::{coset_action, DElement, DModel, SscParamsD, TwistData};
use crate::error::{Error, Result};
use crate::parity::linalg::Matrix;
use crate::report::Report;

/// `M[i][perm[i]] = scalars[i]`, all other entries zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialMatrix {
    pub perm: Vec<usize>,
    pub scalars: Vec<RootOfUnity>,
}

impl MonomialMatrix {
    pub fn identity(dim: usize) -> MonomialMatrix {
        MonomialMatrix { perm: (0..dim).collect(), scalars: vec![RootOfUnity::one(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let perm = self.perm.iter().map(|&j| other.perm[j]).collect();
        let scalars = self.scalars.iter().zip(&self.perm).map(|(s, &j)| s.mul(&other.scalars[j])).collect();
        MonomialMatrix { perm, scalars }
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut scalars = vec![RootOfUnity::one(); d];
        for i in 0..d {
            let j = self.perm[i];
            perm[j] = i;
            scalars[j] = self.scalars[i].inv();
        }
        MonomialMatrix { perm, scalars }
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.dim()];
        for &j in &self.perm {
            if j >= seen.len() || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        true
    }

    pub fn trace(&self) -> RootSum {
        RootSum((0..self.dim()).filter(|&i| self.perm[i] == i).map(|i| self.scalars[i]).collect())
    }

    pub fn to_dense(&self, n: u32) -> Result<Matrix> {
        let d = self.dim();
        let mut m = Matrix::zeros(n, d, d)?;
        for i in 0..d {
            m.set(i, self.perm[i], self.scalars[i].to_cyc(n)?);
        }
        Ok(m)
    }
}

/// A formal sum of roots of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSum(pub Vec<RootOfUnity>);

impl RootSum {
    pub fn to_cyc(&self, n: u32) -> Result<CycScalar> {
        let mut acc = CycScalar::zero(n)?;
        for r in &self.0 {
            acc = &acc + &r.to_cyc(n)?;
        }
        Ok(acc)
    }
}

/// `cInd_H^{D^x} Lambda^D` on the generators of `D^x` and their `tau`-images.
#[derive(Debug, Clone, Serialize)]
pub struct MonomialRep {
    pub dim: usize,
    pub generators: Vec<DElement>,
    pub actions: Vec<MonomialMatrix>,
    pub tau_actions: Vec<MonomialMatrix>,
    pub t_action: MonomialMatrix,
    pub params: SscParamsD,
    pub modulus: u32,
}

/// The monomial matrix of an arbitrary element.
pub fn matrix_of(model: &DModel, params: &SscParamsD, g: &DElement) -> Result<MonomialMatrix> {
    let d = model.coset_count() as usize;
    let mut perm = Vec::with_capacity(d);
    let mut scalars = Vec::with_capacity(d);
    for i in 0..d {
        let (j, lam) = coset_action(model, params, i, g)?;
        perm.push(j);
        scalars.push(lam);
    }
    let m = MonomialMatrix { perm, scalars };
    if !m.is_permutation() {
        return Err(Error::Coset("coset action is not a permutation".into()));
    }
    Ok(m)
}

pub fn build_rep_d(model: &DModel, params: &SscParamsD, tw: &TwistData) -> Result<MonomialRep> {
    let generators = model.generators();
    let actions = generators.iter().map(|g| matrix_of(model, params, g)).collect::<Result<Vec<_>>>()?;
    let tau_actions =
        generators.iter().map(|g| matrix_of(model, params, &tw.apply(model, g))).collect::<Result<Vec<_>>>()?;
    let t_action = matrix_of(model, params, &tw.t)?;
    Ok(MonomialRep {
        dim: model.coset_count() as usize,
        generators,
        actions,
        tau_actions,
        t_action,
        params: params.clone(),
        modulus: params.run_modulus(model),
    })
}

/// Compares the action of random products against products of actions.
pub fn verify_cocycle<R: Rng>(model: &DModel, params: &SscParamsD, samples: usize, rng: &mut R) -> Result<Report> {
    let gens = model.generators();
    let mut r = Report::new(format!("cocycle q={} n={}", model.q(), model.n()));
    let word = |rng: &mut R| {
        let len = rng.gen_range(1..5);
        let mut x = model.identity();
        for _ in 0..len {
            let g = &gens[rng.gen_range(0..gens.len())];
            let g = if rng.gen_bool(0.3) { model.inv(g) } else { g.clone() };
            x = model.mul(&x, &g);
        }
        x
    };
    let mut ok = true;
    for _ in 0..samples {
        let a = word(rng);
        let b = word(rng);
        let lhs = matrix_of(model, params, &model.mul(&a, &b))?;
        let rhs = matrix_of(model, params, &a)?.compose(&matrix_of(model, params, &b)?);
        ok &= lhs == rhs;
    }
    r.check(format!("pi(gh) = pi(g) pi(h) on {samples} random pairs"), ok);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::Case;
    use crate::galois::{Elem, MultChar};
    use rand::SeedableRng;

    #[test]
    fn dimensions() {
        for (q, n, d) in [(3, 2, 4), (2, 3, 7), (4, 2, 5)] {
            let model = DModel::new(Case::Split, q, n, 2).unwrap();
            let chi = MultChar::trivial(model.field(), model.q_degree()).unwrap();
            let params = SscParamsD::new(&model, Elem(1), chi, RootOfUnity::one()).unwrap();
            let tw = TwistData::canonical(&model).unwrap();
            let rep = build_rep_d(&model, &params, &tw).unwrap();
            assert_eq!(rep.dim, d);
        }
    }

    #[test]
    fn teichmuller_generator_shifts_cosets() {
        let model = DModel::new(Case::Split, 3, 2, 2).unwrap();
        let chi = MultChar::trivial(model.field(), 1).unwrap();
        let params = SscParamsD::new(&model, Elem(1), chi, RootOfUnity::one()).unwrap();
        let g = model.constant(model.teichmuller_generator());
        let m = matrix_of(&model, &params, &g).unwrap();
        assert_eq!(m.perm, vec![1, 2, 3, 0]);
        let id = matrix_of(&model, &params, &model.identity()).unwrap();
        assert_eq!(id, MonomialMatrix::identity(4));
    }

    #[test]
    fn cocycle_holds() {
        let model = DModel::new(Case::Unramified, 4, 2, 2).unwrap();
        let chi = MultChar::new(model.field(), 2, 1).unwrap();
        let params = SscParamsD::new(&model, Elem(1), chi, RootOfUnity::new(3, 1).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let r = verify_cocycle(&model, &params, 40, &mut rng).unwrap();
        assert!(r.passed(), "{r}");
    }
}
