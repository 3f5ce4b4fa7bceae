//! Parity from an explicit intertwiner.
//!
//! If `a` satisfies `tau(a h a^{-1})` in `H` and `Lambda(tau(a h a^{-1})) = Lambda(h)^{-1}`
//! for all `h` in `H`, then `z = tau(a) t a` lies in `H` and the parity is `Lambda(z)`.

use serde::Serialize;

use crate::cyclo::RootOfUnity;
use crate::division::{
    in_h, lambda_d_root, nonsquare_beta, smallest_nonsquare, Case, DElement, DModel, SscParamsD, TwistData,
};
use crate::error::{Error, Result};
use crate::galois::Elem;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFormWitness {
    pub case: Case,
    pub a: DElement,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Elem>,
    pub xi: Elem,
    pub z: DElement,
    pub z_in_h: bool,
    pub value: RootOfUnity,
}

/// Generators of `H`: a generator of `F_q^x`, `b Pi`, and `1 + d Pi^s`.
pub fn h_generators(model: &DModel, params: &SscParamsD) -> Vec<DElement> {
    let fld = model.field();
    let gq = fld.subfield_generator(model.q_degree()).expect("F_q is a level of the model");
    let mut gens = vec![model.constant(gq), params.b_pi(model)];
    let basis = fld.subfield_basis(model.qn_degree()).expect("F_{q^n} is a level of the model");
    for s in 1..model.m() {
        for &d in &basis {
            gens.push(model.one_plus(d, s));
        }
    }
    gens
}

/// Checks the intertwining conditions for `a` on the generators of `H`.
pub fn check_intertwiner(model: &DModel, params: &SscParamsD, tw: &TwistData, a: &DElement) -> Result<Report> {
    let mut r = Report::new("intertwiner");
    for (idx, h) in h_generators(model, params).iter().enumerate() {
        let moved = tw.apply(model, &model.conj(a, h));
        if !r.check(format!("tau(a h{idx} a^-1) in H"), in_h(model, params, &moved)) {
            continue;
        }
        let lhs = lambda_d_root(model, params, &moved)?;
        let rhs = lambda_d_root(model, params, h)?.inv();
        r.check(format!("Lambda(tau(a h{idx} a^-1)) = Lambda(h{idx})^-1"), lhs == rhs);
    }
    Ok(r)
}

fn witness_element(
    model: &DModel,
    params: &SscParamsD,
    tw: &TwistData,
) -> Result<(DElement, Option<Elem>, Option<Elem>, Option<Elem>)> {
    let fld = model.field();
    let minus_one = fld.from_int(-1);
    match model.case() {
        Case::Unramified => {
            let qp = model.qprime() as i64;
            let eps = fld.solve_power(minus_one, qp - 1, model.q_degree())?;
            let target = fld.mul(eps, params.xi);
            let eta = fld.solve_power(target, qp + 1, model.qn_degree()).map_err(|_| Error::NotConjugateSelfDual)?;
            let a0 = model.constant(eta);
            let a = tw.apply_inv(model, &a0);
            Ok((a, Some(eta), Some(eta), Some(eps)))
        }
        Case::Ramified => {
            let beta0 = nonsquare_beta(model).map_err(|_| Error::NotConjugateSelfDual)?;
            let beta = tw.beta.ok_or_else(|| Error::InvalidParameters("ramified twist without beta".into()))?;
            let ratio = fld.div(beta, beta0)?;
            if !model.in_fqn(ratio) {
                return Err(Error::InvalidParameters("beta / beta0 is not in F_(q^n)".into()));
            }
            Ok((model.constant(ratio), None, None, Some(smallest_nonsquare(model)?)))
        }
        Case::Split => {
            let eps = if model.p() == 2 {
                fld.one()
            } else {
                if model.n() % 2 != 0 {
                    return Err(Error::NotConjugateSelfDual);
                }
                fld.solve_power(minus_one, model.q() as i64 - 1, 2 * model.q_degree())?
            };
            Ok((model.constant(eps), None, None, Some(eps)))
        }
    }
}

/// The sign `Lambda^D(z)` with its witness; errors if the intertwiner conditions fail.
pub fn parity_closed_form(model: &DModel, params: &SscParamsD, tw: &TwistData) -> Result<(i8, ClosedFormWitness)> {
    let (a, a0, eta, epsilon) = witness_element(model, params, tw)?;
    let report = check_intertwiner(model, params, tw, &a)?;
    if !report.passed() {
        return Err(Error::NotConjugateSelfDual);
    }
    let z = model.mul(&model.mul(&tw.apply(model, &a), &tw.t), &a);
    let z_in_h = in_h(model, params, &z);
    if !z_in_h {
        return Err(Error::NotInH("z = tau(a) t a".into()));
    }
    let value = lambda_d_root(model, params, &z)?;
    let sign = value.as_sign()?;
    Ok((sign, ClosedFormWitness { case: model.case(), a, a0, eta, epsilon, xi: params.xi, z, z_in_h, value }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::MultChar;

    #[test]
    fn unramified_q4() {
        let model = DModel::new(Case::Unramified, 4, 2, 2).unwrap();
        let tw = TwistData::canonical(&model).unwrap();
        let chi = MultChar::trivial(model.field(), 2).unwrap();
        for c in [RootOfUnity::one(), RootOfUnity::minus_one()] {
            let params = SscParamsD::new(&model, Elem(1), chi, c).unwrap();
            let (sign, w) = parity_closed_form(&model, &params, &tw).unwrap();
            assert_eq!(w.epsilon, Some(Elem(1)));
            assert_eq!(sign, c.as_sign().unwrap());
        }
    }

    #[test]
    fn ramified_q3_n3() {
        let model = DModel::new(Case::Ramified, 3, 3, 2).unwrap();
        let tw = TwistData::canonical(&model).unwrap();
        let quad = MultChar::new(model.field(), 1, 1).unwrap();
        // c^2 = chi(-1) = -1
        let params = SscParamsD::new(&model, Elem(1), quad, RootOfUnity::new(4, 1).unwrap()).unwrap();
        let (sign, w) = parity_closed_form(&model, &params, &tw).unwrap();
        assert_eq!(sign, -1);
        assert_eq!(w.epsilon, Some(Elem(2)));
    }

    #[test]
    fn split_trivial() {
        let model = DModel::new(Case::Split, 3, 2, 2).unwrap();
        let tw = TwistData::canonical(&model).unwrap();
        let chi = MultChar::trivial(model.field(), 1).unwrap();
        let params = SscParamsD::new(&model, Elem(1), chi, RootOfUnity::one()).unwrap();
        assert_eq!(parity_closed_form(&model, &params, &tw).unwrap().0, 1);
        let bad =
            SscParamsD::new(&model, Elem(1), MultChar::new(model.field(), 1, 1).unwrap(), RootOfUnity::one()).unwrap();
        assert_eq!(parity_closed_form(&model, &bad, &tw).unwrap_err(), Error::NotConjugateSelfDual);
    }
}
