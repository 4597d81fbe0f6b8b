//! Randomized property tests for the polynomial ring, the differential
//! operators, and the serialization layer.

use std::collections::HashMap;

use num::BigRational;
use proptest::prelude::*;

use todaqc_core::operators::{apply_d, apply_delta};
use todaqc_core::poly::{Monomial, Polynomial, Rational};
use todaqc_core::vars::{VarId, VarUniverse};

fn u(n: u8) -> VarUniverse {
    VarUniverse::new(n).unwrap()
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12)
        .prop_map(|(num, den)| BigRational::new(num.into(), den.into()))
}

/// A term over X1..Xn, Q1..Qn, mu and z; only z may carry a negative exponent.
fn arb_term(n: u8) -> impl Strategy<Value = (Vec<(VarId, i32)>, Rational)> {
    let exps = (
        proptest::collection::vec(0i32..=2, n as usize),
        proptest::collection::vec(0i32..=2, n as usize),
        0i32..=2,
        -1i32..=1,
    )
        .prop_map(move |(xs, qs, mu, z)| {
            let mut out = Vec::new();
            for (i, e) in xs.into_iter().enumerate() {
                out.push((VarId::X(i as u8 + 1), e));
            }
            for (i, e) in qs.into_iter().enumerate() {
                out.push((VarId::Q(i as u8 + 1), e));
            }
            out.push((VarId::Mu, mu));
            out.push((VarId::Z, z));
            out
        });
    (exps, arb_rational())
}

fn arb_poly(n: u8) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(arb_term(n), 0..5).prop_map(move |terms| {
        let uni = u(n);
        let mut p = Polynomial::zero(uni);
        for (exps, c) in terms {
            let m = Monomial::from_exps(exps).unwrap();
            p = &p + &Polynomial::term(uni, m, c).unwrap();
        }
        p
    })
}

/// An element of the module V: squarefree in X, polynomial in Q, no mu or z.
fn arb_v_elem(n: u8) -> impl Strategy<Value = Polynomial> {
    let term = (
        0u32..(1 << n as u32),
        proptest::collection::vec(0i32..=1, n as usize),
        arb_rational(),
    );
    proptest::collection::vec(term, 0..5).prop_map(move |terms| {
        let uni = u(n);
        let mut p = Polynomial::zero(uni);
        for (mask, qs, c) in terms {
            let mut exps = Vec::new();
            for i in 0..n as u32 {
                if mask & (1 << i) != 0 {
                    exps.push((VarId::X(i as u8 + 1), 1));
                }
            }
            for (i, e) in qs.iter().enumerate() {
                exps.push((VarId::Q(i as u8 + 1), *e));
            }
            let m = Monomial::from_exps(exps).unwrap();
            p = &p + &Polynomial::term(uni, m, c).unwrap();
        }
        p
    })
}

/// Assignment with magnitudes in [0.5, 1.5] so z^-1 stays well conditioned.
fn arb_assignment(n: u8) -> impl Strategy<Value = HashMap<VarId, f64>> {
    proptest::collection::vec(0.5f64..1.5, 2 * n as usize + 2).prop_map(move |vals| {
        let mut a = HashMap::new();
        let mut it = vals.into_iter();
        for i in 1..=n {
            a.insert(VarId::X(i), it.next().unwrap());
            a.insert(VarId::Q(i), it.next().unwrap());
        }
        a.insert(VarId::Mu, it.next().unwrap());
        a.insert(VarId::Z, it.next().unwrap());
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn add_commutes(f in arb_poly(3), g in arb_poly(3)) {
        prop_assert_eq!(&f + &g, &g + &f);
    }

    #[test]
    fn mul_commutes(f in arb_poly(3), g in arb_poly(3)) {
        prop_assert_eq!(&f * &g, &g * &f);
    }

    #[test]
    fn add_associates(f in arb_poly(3), g in arb_poly(3), h in arb_poly(3)) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
    }

    #[test]
    fn mul_associates(f in arb_poly(3), g in arb_poly(3), h in arb_poly(3)) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
    }

    #[test]
    fn mul_distributes(f in arb_poly(3), g in arb_poly(3), h in arb_poly(3)) {
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn additive_inverse(f in arb_poly(3)) {
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &Polynomial::one(u(3)), f.clone());
    }

    #[test]
    fn leibniz_rule(f in arb_poly(3), g in arb_poly(3)) {
        for v in [VarId::X(1), VarId::X(2), VarId::Q(3), VarId::Mu] {
            let lhs = (&f * &g).partial(v).unwrap();
            let rhs = &(&f.partial(v).unwrap() * &g) + &(&f * &g.partial(v).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn partials_commute(f in arb_poly(3)) {
        let fx = f.partial(VarId::X(1)).unwrap().partial(VarId::X(2)).unwrap();
        let fy = f.partial(VarId::X(2)).unwrap().partial(VarId::X(1)).unwrap();
        prop_assert_eq!(fx, fy);
    }

    #[test]
    fn partial_matches_finite_difference(f in arb_poly(3), a in arb_assignment(3)) {
        let exact = f.partial(VarId::X(1)).unwrap().eval_numeric(&a).unwrap();
        let h = 1e-5;
        let mut hi = a.clone();
        let mut lo = a.clone();
        *hi.get_mut(&VarId::X(1)).unwrap() += h;
        *lo.get_mut(&VarId::X(1)).unwrap() -= h;
        let approx =
            (f.eval_numeric(&hi).unwrap() - f.eval_numeric(&lo).unwrap()) / (2.0 * h);
        let scale = f64::max(1.0, exact.abs());
        prop_assert!(
            (approx - exact).abs() / scale < 1e-6,
            "exact {exact}, central difference {approx}"
        );
    }

    #[test]
    fn substitute_variable_by_itself_is_identity(f in arb_poly(3)) {
        for v in [VarId::X(2), VarId::Q(1), VarId::Mu, VarId::Z] {
            let back = f.substitute(v, &Polynomial::var(u(3), v).unwrap()).unwrap();
            prop_assert_eq!(&back, &f);
        }
    }

    #[test]
    fn substitute_then_eval_agrees(f in arb_poly(3), a in arb_assignment(3), c in 1i64..=5) {
        // replace X1 by the constant c symbolically, or numerically: same value
        let constant = Polynomial::from_int(u(3), c);
        let substituted = f.substitute(VarId::X(1), &constant).unwrap();
        let mut a2 = a.clone();
        a2.insert(VarId::X(1), c as f64);
        let lhs = substituted.eval_numeric(&a).unwrap();
        let rhs = f.eval_numeric(&a2).unwrap();
        let scale = f64::max(1.0, rhs.abs());
        prop_assert!((lhs - rhs).abs() / scale < 1e-12);
    }

    #[test]
    fn json_round_trip(f in arb_poly(3)) {
        let encoded = f.to_json();
        let decoded = Polynomial::from_json(&encoded).unwrap();
        prop_assert_eq!(decoded, f);
    }

    #[test]
    fn exact_division_inverts_multiplication(f in arb_poly(3), g in arb_poly(3)) {
        prop_assume!(!g.is_zero());
        let q = (&f * &g).exact_div(&g).unwrap();
        prop_assert_eq!(q, f);
    }

    #[test]
    fn d_and_delta_are_mutually_inverse_on_v(p in arb_v_elem(4)) {
        for i in 1..=4u8 {
            let round1 = apply_d(u(4), i, &apply_delta(u(4), i, &p).unwrap()).unwrap();
            let round2 = apply_delta(u(4), i, &apply_d(u(4), i, &p).unwrap()).unwrap();
            prop_assert_eq!(&round1, &p, "D{} after delta{}", i, i);
            prop_assert_eq!(&round2, &p, "delta{} after D{}", i, i);
        }
    }

    #[test]
    fn d_operators_commute(f in arb_poly(4)) {
        for i in 1..=4u8 {
            for j in 1..=4u8 {
                let ij = apply_d(u(4), i, &apply_d(u(4), j, &f).unwrap()).unwrap();
                let ji = apply_d(u(4), j, &apply_d(u(4), i, &f).unwrap()).unwrap();
                prop_assert_eq!(&ij, &ji, "D{} D{}", i, j);
            }
        }
    }

    #[test]
    fn d_is_linear(f in arb_poly(3), g in arb_poly(3), c in arb_rational()) {
        let lhs = apply_d(u(3), 2, &(&f.scale(&c) + &g)).unwrap();
        let rhs = &apply_d(u(3), 2, &f).unwrap().scale(&c) + &apply_d(u(3), 2, &g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_commutes_past_untouched_factors(f in arb_poly(4)) {
        // D_1 differentiates X1 and X2 only, so it commutes with
        // multiplication by (X3 + mu)
        let factor = &Polynomial::var(u(4), VarId::X(3)).unwrap()
            + &Polynomial::var(u(4), VarId::Mu).unwrap();
        let lhs = apply_d(u(4), 1, &(&factor * &f)).unwrap();
        let rhs = &factor * &apply_d(u(4), 1, &f).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
