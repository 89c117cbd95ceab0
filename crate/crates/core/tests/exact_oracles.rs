use flatkern::exactalg::{
    int, parse_rational, format_rational, positive_solution, qspan_dimension, rat, rational_closure, rational_kernel,
    rational_rank, QMatrix, QuadraticNumber, Rational,
};
use itertools::Itertools;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn qn(d: u64) -> impl Strategy<Value = QuadraticNumber> {
    (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6)
        .prop_map(move |(a, b, c, e)| QuadraticNumber::new(rat(a, b), if d == 0 { int(0) } else { rat(c, e) }, d).unwrap())
}

fn ctx() -> impl Strategy<Value = u64> {
    prop_oneof![Just(0u64), Just(2), Just(3), Just(5), Just(6)]
}

proptest! {
    #[test]
    fn field_laws((d, x, y, z) in ctx().prop_flat_map(|d| (Just(d), qn(d), qn(d), qn(d)))) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, QuadraticNumber::zero(d));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), QuadraticNumber::one(d));
            prop_assert_eq!(x.try_div(&x).unwrap(), QuadraticNumber::one(d));
        }
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn sign_agrees_with_floats((_d, x, y) in ctx().prop_flat_map(|d| (Just(d), qn(d), qn(d)))) {
        let diff = x.approx() - y.approx();
        if diff.abs() > 1e-9 {
            prop_assert_eq!(x.try_cmp(&y).unwrap(), diff.partial_cmp(&0.0).unwrap());
        }
    }

    #[test]
    fn json_round_trip(x in ctx().prop_flat_map(qn)) {
        let s = serde_json::to_string(&x).unwrap();
        let back: QuadraticNumber = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn rational_text_round_trip(a in -1000i64..1000, b in 1i64..1000) {
        let r = rat(a, b);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn kernel_is_kernel((d, rows, cols) in (ctx(), 1usize..4, 1usize..5)
        .prop_flat_map(|(d, r, c)| (Just(d), prop::collection::vec(qn(d), r * c), Just(c))))
    {
        let m = QMatrix::new(rows.len() / cols, cols, d, rows).unwrap();
        let ker = m.kernel_basis();
        prop_assert_eq!(ker.len() + m.rank(), cols);
        for v in &ker {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn qspan_scaling((d, xs, s) in ctx().prop_flat_map(|d| (Just(d), prop::collection::vec(qn(d), 1..5), qn(d)))) {
        let base = qspan_dimension(&xs).unwrap();
        if !s.is_zero() {
            let scaled: Vec<QuadraticNumber> = xs.iter().map(|x| x * &s).collect();
            prop_assert_eq!(qspan_dimension(&scaled).unwrap(), base);
        }
        let cap = if d == 0 { 1 } else { 2 };
        prop_assert!(base <= cap);
    }

    #[test]
    fn closure_contains_vector(xs in prop::collection::vec(qn(5), 1..5)) {
        prop_assume!(xs.iter().any(|x| !x.is_zero()));
        let cl = rational_closure(&xs).unwrap();
        prop_assert_eq!(cl.len(), qspan_dimension(&xs).unwrap());
        // a and b parts of u each lie in the span
        let a: Vec<Rational> = xs.iter().map(|x| x.a.clone()).collect();
        let b: Vec<Rational> = xs.iter().map(|x| x.b.clone()).collect();
        for part in [a, b] {
            let mut rows = cl.clone();
            rows.push(part);
            prop_assert_eq!(rational_rank(&rows, xs.len()), cl.len());
        }
    }
}

/// Vertex oracle for {x : A x = 0, x ≥ 1}: the feasible set is a polyhedron
/// whose vertices have some coordinates pinned to 1; try every subset.
fn vertex_oracle(rows: &[Vec<Rational>], n: usize) -> bool {
    for k in 0..=n {
        for s in (0..n).combinations(k) {
            let mut eq: Vec<Vec<Rational>> = rows.iter().map(|r| {
                let mut r = r.clone();
                r.push(Rational::zero());
                r
            }).collect();
            for &i in &s {
                let mut r = vec![Rational::zero(); n + 1];
                r[i] = Rational::one();
                r[n] = Rational::one();
                eq.push(r);
            }
            // solve the augmented system, accept unique solutions only
            let mut m = eq.clone();
            let piv = flatkern::exactalg::rref_in_place(&mut m, n + 1);
            if piv.contains(&n) || piv.len() != n {
                continue;
            }
            let x: Vec<Rational> = (0..n).map(|i| m[i][n].clone()).collect();
            if x.iter().all(|v| *v >= Rational::one()) {
                return true;
            }
        }
    }
    false
}

#[test]
fn positive_solution_matches_vertex_oracle() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strat = (1usize..=3, 2usize..=5).prop_flat_map(|(r, n)| {
        (prop::collection::vec(prop::collection::vec(-2i64..=2, n), r), Just(n))
    });
    let mut feasible = 0;
    for _ in 0..300 {
        let (rows, n) = strat.new_tree(&mut runner).unwrap().current();
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let fast = positive_solution(&rows, n);
        if let Some(x) = &fast {
            for r in &rows {
                let s: Rational = r.iter().zip(x).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
            assert!(x.iter().all(|v| *v > Rational::zero()));
            feasible += 1;
        }
        assert_eq!(fast.is_some(), vertex_oracle(&rows, n), "{rows:?}");
    }
    assert!(feasible > 20 && feasible < 280, "{feasible}");
}

#[test]
fn kernel_of_rational_rows() {
    let rows = vec![vec![int(1), int(-1), int(0)], vec![int(0), int(1), int(-1)]];
    let k = rational_kernel(&rows, 3);
    assert_eq!(k, vec![vec![int(1), int(1), int(1)]]);
}
