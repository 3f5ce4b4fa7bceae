use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jlparity::cyclo::{CycScalar, RootOfUnity};
use jlparity::division::{Case, DElement, DModel, SscParamsD, TwistData};
use jlparity::galois::{Elem, GaloisField, MultChar};
use jlparity::gl::{lambda_gl_root, GlModel, SscParamsGL};
use jlparity::harness::{run_sweep, RunConfig};
use jlparity::parity::monomial::matrix_of;

fn field_3_6() -> &'static GaloisField {
    static F: OnceLock<GaloisField> = OnceLock::new();
    F.get_or_init(|| GaloisField::new(3, 6).unwrap())
}

fn models() -> &'static [DModel] {
    static M: OnceLock<Vec<DModel>> = OnceLock::new();
    M.get_or_init(|| {
        vec![
            DModel::new(Case::Split, 3, 2, 3).unwrap(),
            DModel::new(Case::Ramified, 3, 3, 2).unwrap(),
            DModel::new(Case::Unramified, 4, 2, 3).unwrap(),
        ]
    })
}

fn d_element(model: &DModel, k: i64, raw: &[u64]) -> DElement {
    let f = model.field();
    let fqn = f.subfield_elements(model.qn_degree()).unwrap();
    let mut unit: Vec<Elem> = raw.iter().map(|r| fqn[(*r as usize) % fqn.len()]).collect();
    if unit[0].0 == 0 {
        unit[0] = Elem(1);
    }
    model.element(k, &unit).unwrap()
}

fn cyc(n: u32, coeffs: &[i64]) -> CycScalar {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| CycScalar::from_int(n, c).unwrap() * CycScalar::root_of_unity(n, k as i64).unwrap())
        .fold(CycScalar::zero(n).unwrap(), |a, b| a + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_laws(n in prop::sample::select(vec![3u32, 4, 8, 12, 15]),
                            a in prop::collection::vec(-3i64..4, 1..6),
                            b in prop::collection::vec(-3i64..4, 1..6),
                            c in prop::collection::vec(-3i64..4, 1..6)) {
        let (a, b, c) = (cyc(n, &a), cyc(n, &b), cyc(n, &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a - &a).is_zero(), true);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!((&a * &b).galois(n as i64 - 1).unwrap(), &a.conj() * &b.conj());
    }

    #[test]
    fn roots_of_unity_form_a_group(o1 in 1u64..40, e1 in -50i64..50, o2 in 1u64..40, e2 in -50i64..50) {
        let x = RootOfUnity::new(o1, e1).unwrap();
        let y = RootOfUnity::new(o2, e2).unwrap();
        prop_assert!(x.mul(&x.inv()).is_one());
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        let n = num_integer::lcm(o1, o2) as u32;
        prop_assert_eq!(x.mul(&y).to_cyc(n).unwrap(), x.to_cyc(n).unwrap() * y.to_cyc(n).unwrap());
    }

    #[test]
    fn frobenius_norm_trace(a in 0u64..729, b in 0u64..729, r in 0i64..6) {
        let f = field_3_6();
        let (a, b) = (Elem(a), Elem(b));
        prop_assert_eq!(f.frobenius_p(f.mul(a, b), r), f.mul(f.frobenius_p(a, r), f.frobenius_p(b, r)));
        prop_assert_eq!(f.frobenius_p(f.add(a, b), r), f.add(f.frobenius_p(a, r), f.frobenius_p(b, r)));
        prop_assert_eq!(f.norm_to(f.mul(a, b), 6, 2).unwrap(), f.mul(f.norm_to(a, 6, 2).unwrap(), f.norm_to(b, 6, 2).unwrap()));
        prop_assert_eq!(f.trace_to(f.add(a, b), 6, 3).unwrap(), f.add(f.trace_to(a, 6, 3).unwrap(), f.trace_to(b, 6, 3).unwrap()));
        if a.0 != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem(1));
        }
    }

    #[test]
    fn characters_are_multiplicative(e in 0i64..8, a in 1u64..729, b in 1u64..729) {
        let f = field_3_6();
        let chi = MultChar::new(f, 2, e).unwrap();
        let (x, y) = (f.norm_to(Elem(a), 6, 2).unwrap(), f.norm_to(Elem(b), 6, 2).unwrap());
        let lhs = chi.eval_root(f, f.mul(x, y)).unwrap();
        prop_assert_eq!(lhs, chi.eval_root(f, x).unwrap().mul(&chi.eval_root(f, y).unwrap()));
    }

    #[test]
    fn division_group_laws(which in 0usize..3, k in -3i64..4, l in -3i64..4, j in -3i64..4,
                           x in prop::collection::vec(0u64..1000, 3), y in prop::collection::vec(0u64..1000, 3),
                           z in prop::collection::vec(0u64..1000, 3)) {
        let d = &models()[which];
        let (x, y, z) = (d_element(d, k, &x), d_element(d, l, &y), d_element(d, j, &z));
        prop_assert_eq!(d.mul(&d.mul(&x, &y), &z), d.mul(&x, &d.mul(&y, &z)));
        prop_assert_eq!(d.mul(&x, &d.inv(&x)), d.identity());
        let tw = TwistData::canonical(d).unwrap();
        prop_assert_eq!(tw.apply(d, &d.mul(&x, &y)), d.mul(&tw.apply(d, &x), &tw.apply(d, &y)));
        prop_assert_eq!(tw.apply_inv(d, &tw.apply(d, &x)), x);
    }

    #[test]
    fn monomial_rep_is_a_homomorphism(which in 0usize..3, k in -2i64..3, l in -2i64..3,
                                      x in prop::collection::vec(0u64..1000, 2), y in prop::collection::vec(0u64..1000, 2),
                                      chi in 0i64..3) {
        let d = &models()[which];
        let f = d.field();
        let params = SscParamsD::new(d, Elem(1), MultChar::new(f, d.q_degree(), chi).unwrap(), RootOfUnity::new(4, 1).unwrap()).unwrap();
        let (x, y) = (d_element(d, k, &x), d_element(d, l, &y));
        let mx = matrix_of(d, &params, &x).unwrap();
        let my = matrix_of(d, &params, &y).unwrap();
        let mxy = matrix_of(d, &params, &d.mul(&x, &y)).unwrap();
        prop_assert_eq!(mx.compose(&my), mxy);
    }

    #[test]
    fn gl_character_is_multiplicative(seed in 0u64..1000, case in 0usize..3) {
        let gl = match case {
            0 => GlModel::new(Case::Split, 3, 3).unwrap(),
            1 => GlModel::new(Case::Ramified, 5, 2).unwrap(),
            _ => GlModel::new(Case::Unramified, 4, 2).unwrap(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zeta = gl.units()[seed as usize % (gl.q() as usize - 1)];
        let chi = MultChar::new(gl.field(), gl.q_degree(), seed as i64).unwrap();
        let p = SscParamsGL::new(&gl, zeta, chi, RootOfUnity::new(12, seed as i64).unwrap()).unwrap();
        let a = gl.random_h(&mut rng);
        let mut b = gl.random_h(&mut rng);
        b.k = rng.gen_range(0..gl.n() as i64 - a.k);
        let ab = gl.mat_mul(&a.to_matrix(&gl, zeta).unwrap(), &b.to_matrix(&gl, zeta).unwrap());
        let hab = gl.factor_h(zeta, &ab).unwrap();
        // dividing by u in the factorisation costs one digit of precision
        let back = hab.to_matrix(&gl, zeta).unwrap();
        let n = gl.n();
        for (i, j, t) in (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..ab.prec - 1).map(move |t| (i, j, t)))) {
            prop_assert_eq!(back.get(i, j, t), ab.get(i, j, t));
        }
        let lhs = lambda_gl_root(&gl, &p, &hab).unwrap();
        let rhs = lambda_gl_root(&gl, &p, &a).unwrap().mul(&lambda_gl_root(&gl, &p, &b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn sweep_is_sorted_and_consistent(q in prop::sample::select(vec![2u64, 3, 4, 5]), n in 1u32..4, mult in 1u64..3) {
        let cfg = RunConfig {
            cases: vec![Case::Split],
            q: Some(vec![q]),
            n: Some(vec![n]),
            c_order: Some(mult * 4 * (q - 1)),
            ..Default::default()
        };
        let out = run_sweep(&cfg).unwrap();
        prop_assert!(out.all_consistent());
        prop_assert!(out.records.windows(2).all(|w| w[0].sort_key() < w[1].sort_key()));
    }
}
