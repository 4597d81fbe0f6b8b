//! Acceptance gate: one test per top-level claim, with pinned tolerances.
//! Each test prints a single pass/fail line via the harness.

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use todaqc_core::laxdet::{
    build_lax, char_poly, char_poly_bareiss, conserved, open_char_poly_recursive,
    periodic_from_open, LaxVariant,
};
use todaqc_core::poly::{Monomial, Polynomial, Rational};
use todaqc_core::quantumrel::{ev_q_normal_form, qs_family, qs_hat_family};
use todaqc_core::todaflow::{integrate, lax_residual, FlowState};
use todaqc_core::vars::{VarId, VarUniverse};
use todaqc_core::verify::{run_suite, squarefree_x_monomials, Suite};

fn u(n: u8) -> VarUniverse {
    VarUniverse::new(n).unwrap()
}

/// 1. QS^k_n from the operator chain equals P^k_n from the symbolic
///    determinant, exactly, for n = 3..=7 and every k = 0..=n.
#[test]
fn criterion_1_quantum_relations_equal_periodic_conserved() {
    for n in 3..=7 {
        let qs = qs_family(u(n)).unwrap();
        let cons = conserved(u(n), LaxVariant::Periodic).unwrap();
        assert_eq!(qs.relations.len(), n as usize + 1);
        assert_eq!(cons.coefficients.len(), n as usize + 1);
        for (k, (lhs, rhs)) in qs.relations.iter().zip(&cons.coefficients).enumerate() {
            assert_eq!(lhs, rhs, "n = {n}, k = {k}");
        }
    }
}

/// 2. Hat relations equal the open conserved quantities, exactly, n = 2..=7.
#[test]
fn criterion_2_hat_relations_equal_open_conserved() {
    for n in 2..=7 {
        let qs = qs_hat_family(u(n)).unwrap();
        let cons = conserved(u(n), LaxVariant::Open).unwrap();
        for (k, (lhs, rhs)) in qs.relations.iter().zip(&cons.coefficients).enumerate() {
            assert_eq!(lhs, rhs, "n = {n}, k = {k}");
        }
    }
}

/// 3. The last-row recursion rebuilds the open characteristic polynomial,
///    matching both the memoized-cofactor and the fraction-free determinant,
///    n = 1..=7.
#[test]
fn criterion_3_open_recursion_matches_two_determinants() {
    for n in 1..=7 {
        let m = build_lax(u(n), LaxVariant::Open).unwrap();
        let cofactor = char_poly(&m);
        let bareiss = char_poly_bareiss(&m).unwrap();
        let recursive = open_char_poly_recursive(u(n)).unwrap();
        assert_eq!(recursive, cofactor, "recursion vs cofactor, n = {n}");
        assert_eq!(cofactor, bareiss, "cofactor vs fraction-free, n = {n}");
    }
}

/// 4. P_n = D_n O_n - z + (-1)^{n+1} Q_1..Q_n / z exactly, n = 3..=7, with
///    the corner coefficients A_n = (-1)^{n+1} prod Q_i and B_n = -1 forced
///    by the corner entries -z and Q_n/z of the periodic Lax matrix.
#[test]
fn criterion_4_periodic_assembly_and_corner_coefficients() {
    for n in 3..=7 {
        let det = char_poly(&build_lax(u(n), LaxVariant::Periodic).unwrap());
        let assembled = periodic_from_open(u(n)).unwrap();
        assert_eq!(assembled, det, "assembly vs determinant, n = {n}");

        let mut corner = Monomial::one();
        for i in 1..=n {
            corner = corner.mul(&Monomial::var(VarId::Q(i))).unwrap();
        }
        let sign = if n % 2 == 0 { -1 } else { 1 };
        let a_expected =
            Polynomial::term(u(n), corner, Rational::from_integer(sign.into())).unwrap();
        assert_eq!(det.coeff_of(VarId::Z, -1), a_expected, "A_{n}");
        assert_eq!(det.coeff_of(VarId::Z, 1), Polynomial::from_int(u(n), -1), "B_{n}");
    }
}

/// 5. D-chain and delta-chain are mutually inverse on all 2^n - 1 squarefree
///    X-monomials for n <= 7, and the worked n = 3 normal form reproduces
///    byte-exactly.
#[test]
fn criterion_5_chain_round_trip_on_v() {
    for n in 2..=7 {
        let report = run_suite(Suite::Prop23, u(n)).unwrap();
        assert!(report.all_pass(), "round trip failed at n = {n}: {:?}", report.rows);
        assert_eq!(
            squarefree_x_monomials(u(n)).count(),
            (1usize << n) - 1,
            "enumeration size, n = {n}"
        );
    }
    let x1x2x3 = Polynomial::term(
        u(3),
        Monomial::from_exps([(VarId::X(1), 1), (VarId::X(2), 1), (VarId::X(3), 1)]).unwrap(),
        Rational::from_integer(1.into()),
    )
    .unwrap();
    let nf = ev_q_normal_form(&x1x2x3).unwrap();
    assert_eq!(nf.to_string(), "X1*X2*X3 - Q1*X3 - Q2*X1 - Q3*X2");
}

/// 6. Substituting Q_n = 0 into the periodic family yields the open-hat
///    family exactly, n = 3..=7.
#[test]
fn criterion_6_degeneration_to_open_hat() {
    for n in 3..=7 {
        let report = run_suite(Suite::Degeneration, u(n)).unwrap();
        assert!(report.all_pass(), "degeneration failed at n = {n}: {:?}", report.rows);
    }
}

fn random_state(rng: &mut ChaCha8Rng, n: usize, variant: LaxVariant) -> FlowState {
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = x.iter().sum::<f64>() / n as f64;
    for xi in &mut x {
        *xi -= mean;
    }
    let m = match variant {
        LaxVariant::Open => n - 1,
        LaxVariant::Periodic => n,
    };
    let q: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..-0.5)).collect();
    FlowState::new(variant, x, q).unwrap()
}

/// 7. RK4 at h = 1e-3 over t in [0, 1], random admissible states: relative
///    drift of every conserved coefficient < 1e-8; |sum x| < 1e-12; periodic
///    prod q drift < 1e-10; halving h reduces drift by a factor in [12, 20].
#[test]
fn criterion_7_toda_conservation_and_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x70da);
    for variant in [LaxVariant::Open, LaxVariant::Periodic] {
        for n in [3usize, 4, 5, 6] {
            let s0 = random_state(&mut rng, n, variant);
            let (_, report) = integrate(&s0, 1.0, 1e-3, variant).unwrap();
            assert!(
                report.max_drift() < 1e-8,
                "{variant} n = {n}: drift {} >= 1e-8",
                report.max_drift()
            );
            assert!(
                report.sumx_max < 1e-12,
                "{variant} n = {n}: |sum x| {} >= 1e-12",
                report.sumx_max
            );
            if let Some(p) = report.prodq_drift {
                assert!(p < 1e-10, "{variant} n = {n}: prod q drift {p} >= 1e-10");
            }
        }
    }

    // order check at coarser steps, where truncation error dominates rounding
    for variant in [LaxVariant::Open, LaxVariant::Periodic] {
        let s0 = random_state(&mut rng, 4, variant);
        let (_, coarse) = integrate(&s0, 1.0, 0.02, variant).unwrap();
        let (_, fine) = integrate(&s0, 1.0, 0.01, variant).unwrap();
        let ratio = coarse.max_drift() / fine.max_drift();
        assert!(
            (12.0..=20.0).contains(&ratio),
            "{variant}: halving h gave drift ratio {ratio}, expected within [12, 20]"
        );
    }
}

/// 8. The central-difference residual of Ldot = [L, M] shrinks ~4x when the
///    differencing step halves, at 5 random states, with 8 unit-circle z
///    samples in the periodic case.
#[test]
fn criterion_8_lax_residual_falsifiability() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a4);
    let z_samples: Vec<Complex64> = (0..8)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 8.0))
        .collect();
    for variant in [LaxVariant::Open, LaxVariant::Periodic] {
        for trial in 0..5 {
            let s = random_state(&mut rng, 4, variant);
            let h = 1e-3;
            let coarse = lax_residual(&s, variant, &z_samples, h).unwrap();
            let fine = lax_residual(&s, variant, &z_samples, h / 2.0).unwrap();
            let ratio = coarse / fine;
            assert!(
                (3.0..=5.0).contains(&ratio),
                "{variant} trial {trial}: residual ratio {ratio}, expected ~4 \
                 (coarse {coarse:e}, fine {fine:e})"
            );
        }
    }
}
