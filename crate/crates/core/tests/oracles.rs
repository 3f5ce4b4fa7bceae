//! The orbit-based pairing solver against a dense nullspace computation.

use jlparity::cyclo::CycScalar;
use jlparity::division::Case;
use jlparity::gl::jl_of_gl_params;
use jlparity::harness::{instance_params, GridPoint, PointModels};
use jlparity::parity::linalg::{nullspace, Matrix};
use jlparity::parity::{build_rep_d, parity_bruteforce, solve_invariant_pairing, MonomialRep};

/// Dense solution of `pi(tau g)^T B pi(g) = B` for every generator, as row-major vectors.
fn dense_pairings(rep: &MonomialRep) -> Vec<Vec<CycScalar>> {
    let n = rep.modulus;
    let d = rep.dim;
    let id = Matrix::identity(n, d * d).unwrap();
    let mut rows = Vec::new();
    for (g, tg) in rep.actions.iter().zip(&rep.tau_actions) {
        let m = tg.to_dense(n).unwrap().transpose();
        let p = g.to_dense(n).unwrap();
        // row-major vec(M B P) = (M kron P^T) vec(B)
        let k = m.kron(&p.transpose());
        for i in 0..d * d {
            rows.push((0..d * d).map(|j| k.get(i, j) - id.get(i, j)).collect::<Vec<_>>());
        }
    }
    nullspace(&Matrix::from_rows(rows).unwrap()).unwrap()
}

/// `C` with `pi(t)^T B = C B^T`.
fn dense_parity(rep: &MonomialRep, b: &[CycScalar]) -> i8 {
    let n = rep.modulus;
    let d = rep.dim;
    let bm = Matrix::from_rows((0..d).map(|i| b[i * d..(i + 1) * d].to_vec()).collect()).unwrap();
    let lhs = rep.t_action.to_dense(n).unwrap().transpose().mul(&bm).unwrap();
    let bt = bm.transpose();
    let (i, j) = (0..d * d).map(|x| (x / d, x % d)).find(|&(i, j)| !bt.get(i, j).is_zero()).unwrap();
    let c = lhs.get(i, j).div(bt.get(i, j)).unwrap();
    for i in 0..d {
        for j in 0..d {
            assert_eq!(*lhs.get(i, j), &c * bt.get(i, j));
        }
    }
    c.as_sign().unwrap()
}

fn compare(case: Case, q: u64, n: u32) -> (usize, usize) {
    let pm = PointModels::new(GridPoint { case, q, n }, 2).unwrap();
    let (mut with, mut without) = (0, 0);
    for ix in instance_params(&pm.gl, 4 * (q - 1)).unwrap() {
        let pd = jl_of_gl_params(&pm.d, &ix.params).unwrap();
        let rep = build_rep_d(&pm.d, &pd, &pm.tw).unwrap();
        let dense = dense_pairings(&rep);
        let orbit = solve_invariant_pairing(&rep).unwrap();
        assert!(dense.len() <= 1, "{case} q={q} n={n}: pairing space of dimension {}", dense.len());
        assert_eq!(dense.len(), usize::from(orbit.is_some()), "{case} q={q} n={n} {:?}", ix.params);
        if let Some(form) = orbit {
            assert_eq!(dense_parity(&rep, &dense[0]), parity_bruteforce(&rep, &form).unwrap());
            with += 1;
        } else {
            without += 1;
        }
    }
    (with, without)
}

#[test]
fn split_q3_n2() {
    let (w, wo) = compare(Case::Split, 3, 2);
    assert_eq!(w, 8);
    assert!(wo > 0);
}

#[test]
fn split_q2_n3() {
    let (w, _) = compare(Case::Split, 2, 3);
    assert!(w > 0);
}

#[test]
fn ramified_q3_n1_and_q5_n1() {
    assert!(compare(Case::Ramified, 3, 1).0 > 0);
    assert!(compare(Case::Ramified, 5, 1).0 > 0);
}

#[test]
fn unramified_q4_n2() {
    assert!(compare(Case::Unramified, 4, 2).0 > 0);
}

#[test]
fn ramified_q3_n3() {
    let (w, wo) = compare(Case::Ramified, 3, 3);
    assert!(w > 0 && wo > 0);
}

#[test]
fn truncation_does_not_change_parity() {
    use jlparity::parity::evaluate_instance;
    for (case, q, n) in [(Case::Split, 3, 2), (Case::Ramified, 3, 3), (Case::Unramified, 4, 2)] {
        let pt = GridPoint { case, q, n };
        let m2 = PointModels::new(pt, 2).unwrap();
        let m3 = PointModels::new(pt, 3).unwrap();
        for ix in instance_params(&m2.gl, 4 * (q - 1)).unwrap() {
            let a = evaluate_instance(&m2.gl, &m2.d, &m2.tw, &ix.params).unwrap();
            let b = evaluate_instance(&m3.gl, &m3.d, &m3.tw, &ix.params).unwrap();
            assert_eq!((a.brute, a.closed), (b.brute, b.closed), "{case} q={q} n={n}");
        }
    }
}
