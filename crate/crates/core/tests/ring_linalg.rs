use std::collections::HashSet;

use proptest::prelude::*;
use xplego::ring_linalg::{
    howell_form, left_kernel, rref_gf2, solve_linear_mod, solve_linear_mod_lexmin, span_contains, LinearSolver, ModMatrix,
};

/// Every vector `xᵀ·a` by brute force over all `x`.
fn brute_span(a: &ModMatrix) -> HashSet<Vec<u64>> {
    let m = a.modulus();
    let mut out = HashSet::new();
    let total = (m as usize).pow(a.rows() as u32);
    for mut idx in 0..total {
        let mut x = vec![0u64; a.rows()];
        for v in x.iter_mut() {
            *v = (idx % m as usize) as u64;
            idx /= m as usize;
        }
        out.insert(a.left_mul(&x).unwrap());
    }
    out
}

fn all_vectors(len: usize, m: u64) -> Vec<Vec<u64>> {
    let total = (m as usize).pow(len as u32);
    (0..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let v = (idx % m as usize) as u64;
                    idx /= m as usize;
                    v
                })
                .collect()
        })
        .collect()
}

fn matrix() -> impl Strategy<Value = ModMatrix> {
    (prop::sample::select(vec![2u64, 4, 6, 8, 16]), 1usize..=3, 1usize..=3).prop_flat_map(|(m, r, c)| {
        prop::collection::vec(prop::collection::vec(0..m as i64, c), r)
            .prop_map(move |rows| ModMatrix::from_rows(&rows, c, m).unwrap())
    })
}

fn binary_matrix() -> impl Strategy<Value = ModMatrix> {
    (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(0..2i64, c), r).prop_map(move |rows| ModMatrix::from_rows(&rows, c, 2).unwrap())
    })
}

proptest! {
    #[test]
    fn howell_preserves_the_row_module(a in matrix()) {
        let h = howell_form(&a);
        prop_assert_eq!(brute_span(&h), brute_span(&a));
    }

    #[test]
    fn howell_is_unique_under_row_operations(a in matrix(), k in 0i64..16) {
        let m = a.modulus();
        let mut rows: Vec<Vec<i64>> = a.to_rows().iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect();
        rows.reverse();
        if rows.len() > 1 {
            let first = rows[0].clone();
            for (x, y) in rows[1].iter_mut().zip(&first) {
                *x += k * y;
            }
        }
        let b = ModMatrix::from_rows(&rows, a.cols(), m).unwrap();
        prop_assert_eq!(howell_form(&a), howell_form(&b));
        prop_assert_eq!(howell_form(&howell_form(&a)), howell_form(&a));
    }

    #[test]
    fn span_membership_matches_brute_force(a in matrix()) {
        let span = brute_span(&a);
        for v in all_vectors(a.cols(), a.modulus()) {
            prop_assert_eq!(span_contains(&a, &v), span.contains(&v));
        }
    }

    #[test]
    fn solve_matches_brute_force(a in matrix()) {
        let span = brute_span(&a);
        let solver = LinearSolver::new(&a);
        for b in all_vectors(a.cols(), a.modulus()) {
            let x = solve_linear_mod(&a, &b).unwrap();
            prop_assert_eq!(x.is_some(), span.contains(&b));
            if let Some(x) = x {
                prop_assert_eq!(a.left_mul(&x).unwrap(), b.clone());
            }
            prop_assert_eq!(solver.solve(&b).is_some(), span.contains(&b));
        }
    }

    #[test]
    fn lexmin_solution_is_the_smallest(a in matrix()) {
        let xs = all_vectors(a.rows(), a.modulus());
        for b in brute_span(&a) {
            let want = xs.iter().filter(|x| a.left_mul(x).unwrap() == b).min().cloned();
            prop_assert_eq!(solve_linear_mod_lexmin(&a, &b).unwrap(), want);
        }
    }

    #[test]
    fn left_kernel_is_complete(a in matrix()) {
        let k = left_kernel(&a);
        let zero = vec![0u64; a.cols()];
        for i in 0..k.rows() {
            prop_assert_eq!(a.left_mul(k.row(i)).unwrap(), zero.clone());
        }
        for x in all_vectors(a.rows(), a.modulus()) {
            if a.left_mul(&x).unwrap() == zero && x.iter().any(|&v| v != 0) {
                prop_assert!(k.rows() > 0 && span_contains(&k, &x));
            }
        }
    }

    #[test]
    fn rref_gf2_is_idempotent_and_span_preserving(a in binary_matrix()) {
        let (r, piv) = rref_gf2(&a).unwrap();
        let (r2, piv2) = rref_gf2(&r).unwrap();
        prop_assert_eq!(&r, &r2);
        prop_assert_eq!(&piv, &piv2);
        for i in 0..a.rows() {
            prop_assert!(span_contains(&r, a.row(i)));
        }
        for i in 0..piv.len() {
            prop_assert!(span_contains(&a, r.row(i)));
            for (j, &p) in piv.iter().enumerate() {
                prop_assert_eq!(r.get(i, p), (i == j) as u64);
            }
        }
    }
}
