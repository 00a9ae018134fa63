use num_complex::Complex64 as C64;
use proptest::prelude::*;
use xplego::dense::{self, omega_pow, render_operator, DenseOperator};
use xplego::xp::antisymmetric;
use xplego::XpOperator;

const TOL: f64 = 1e-12;

fn operator(n: usize, precision: u32) -> impl Strategy<Value = XpOperator> {
    (
        prop::collection::vec(0..2i64, n),
        prop::collection::vec(0..precision as i64, n),
        0..2 * precision as i64,
    )
        .prop_map(move |(x, z, p)| XpOperator::new(precision, &x, &z, p).unwrap())
}

fn pair() -> impl Strategy<Value = (XpOperator, XpOperator)> {
    (1usize..=3, prop::sample::select(vec![2u32, 3, 4, 6, 8])).prop_flat_map(|(n, nn)| (operator(n, nn), operator(n, nn)))
}

fn dense(a: &XpOperator) -> DenseOperator {
    render_operator(a).unwrap()
}

proptest! {
    #[test]
    fn multiplication_matches_matrices((a, b) in pair()) {
        let ab = a.multiply(&b).unwrap();
        prop_assert!(dense(&ab).distance(&dense(&a).matmul(&dense(&b))) < TOL);
    }

    #[test]
    fn group_law_via_antisymmetric_correction((a, b) in pair()) {
        // XP(u1)·XP(u2) = XP(u1 + u2)·D_N(2·x2·z1) with componentwise sums.
        let nn = a.precision();
        let x: Vec<i64> = a.x().iter().zip(b.x()).map(|(&s, &t)| s as i64 + t as i64).collect();
        let z: Vec<i64> = a.z().iter().zip(b.z()).map(|(&s, &t)| s as i64 + t as i64).collect();
        let sum = XpOperator::new(nn, &x, &z, a.p() as i64 + b.p() as i64).unwrap();
        let w: Vec<i64> = b.x().iter().zip(a.z()).map(|(&s, &t)| 2 * s as i64 * t as i64).collect();
        let d = antisymmetric(&w, nn);
        prop_assert!(dense(&a.multiply(&b).unwrap()).distance(&dense(&sum).matmul(&dense(&d))) < TOL);
    }

    #[test]
    fn inverse_is_the_adjoint((a, _) in pair()) {
        let inv = a.inverse();
        prop_assert!(a.multiply(&inv).unwrap().is_identity());
        prop_assert!(dense(&inv).distance(&dense(&a).adjoint()) < TOL);
    }

    #[test]
    fn power_matches_repeated_product((a, _) in pair(), k in -5i64..9) {
        let mut acc = XpOperator::identity(a.n(), a.precision());
        let step = if k < 0 { a.inverse() } else { a.clone() };
        for _ in 0..k.abs() {
            acc = acc.multiply(&step).unwrap();
        }
        prop_assert_eq!(a.power(k), acc);
    }

    #[test]
    fn conjugate_and_commutator_match_matrices((a, b) in pair()) {
        let (da, db) = (dense(&a), dense(&b));
        let conj = da.matmul(&db).matmul(&da.adjoint());
        prop_assert!(dense(&XpOperator::conjugate(&a, &b).unwrap()).distance(&conj) < TOL);
        let comm = conj.matmul(&db.adjoint());
        prop_assert!(dense(&XpOperator::commutator(&a, &b).unwrap()).distance(&comm) < TOL);
    }

    #[test]
    fn rendering_is_unitary_with_root_of_unity_entries((a, _) in pair()) {
        let m = dense(&a);
        prop_assert!(m.matmul(&m.adjoint()).distance(&DenseOperator::identity(a.n())) < TOL);
        let roots: Vec<C64> = (0..2 * a.precision() as i64).map(|k| omega_pow(a.precision(), k)).collect();
        for v in &m.data {
            prop_assert!(v.norm() < TOL || roots.iter().any(|r| (r - v).norm() < TOL));
        }
    }

    #[test]
    fn basis_action_matches_rendered_columns((a, _) in pair()) {
        let m = dense(&a);
        for e in 0..(1u64 << a.n()) {
            let (f, ph) = a.act_on_basis(e);
            let col = m.column(e as usize);
            let mut want = dense::DenseState::zero(a.n());
            want.amps[f as usize] = omega_pow(a.precision(), ph as i64);
            prop_assert!(col.amps.iter().zip(&want.amps).all(|(u, v)| (u - v).norm() < TOL));
        }
    }

    #[test]
    fn display_round_trips((a, _) in pair()) {
        prop_assert_eq!(a.to_string().parse::<XpOperator>().unwrap(), a);
    }
}

#[test]
fn identity_renders_to_identity() {
    let id = XpOperator::identity(3, 8);
    assert!(dense(&id).distance(&DenseOperator::identity(3)) < TOL);
}
