//! Verification suites: each polynomial identity is checked by comparing two
//! independently computed sides; failures carry the difference polynomial as
//! a witness.

use std::fmt;

use num::traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laxdet::{
    build_lax, char_poly, char_poly_bareiss, open_char_poly_recursive, periodic_from_open,
    LaxVariant,
};
use crate::par::par_flat_map;
use crate::poly::{Monomial, Polynomial, Rational};
use crate::quantumrel::{qs_family, qs_hat_family, verify_cor42, verify_theorem31};
use crate::vars::{VarId, VarUniverse};

#[derive(Debug, Clone)]
pub struct VerifyRow {
    pub suite: &'static str,
    pub n: u8,
    pub k: Option<u8>,
    pub pass: bool,
    pub witness: Option<Polynomial>,
}

impl VerifyRow {
    pub fn compare(
        suite: &'static str,
        n: u8,
        k: Option<u8>,
        lhs: &Polynomial,
        rhs: &Polynomial,
    ) -> VerifyRow {
        let diff = lhs - rhs;
        if diff.is_zero() {
            VerifyRow { suite, n, k, pass: true, witness: None }
        } else {
            VerifyRow { suite, n, k, pass: false, witness: Some(diff) }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "n": self.n,
            "k": self.k,
            "status": if self.pass { "pass" } else { "fail" },
            "witness": self.witness.as_ref().map(|w| w.to_string()),
        })
    }
}

impl fmt::Display for VerifyRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.suite, self.n)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        write!(f, " {}", if self.pass { "PASS" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            write!(f, " witness: {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn extend(&mut self, other: VerifyReport) {
        self.rows.extend(other.rows);
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.rows.iter().map(VerifyRow::to_json).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Thm31,
    Cor42,
    Prop32_1,
    Prop32_2,
    Prop23,
    Degeneration,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Thm31,
        Suite::Cor42,
        Suite::Prop32_1,
        Suite::Prop32_2,
        Suite::Prop23,
        Suite::Degeneration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm31 => "thm31",
            Suite::Cor42 => "cor42",
            Suite::Prop32_1 => "prop32-1",
            Suite::Prop32_2 => "prop32-2",
            Suite::Prop23 => "prop23",
            Suite::Degeneration => "degeneration",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|s| s.name() == name)
    }

    /// Smallest lattice size the suite is defined for.
    pub fn min_n(self) -> u8 {
        match self {
            Suite::Prop32_1 => 1,
            Suite::Cor42 | Suite::Prop23 => 2,
            _ => 3,
        }
    }
}

/// Recursion vs. both determinant algorithms for the open lattice.
pub fn verify_prop32_1(u: VarUniverse) -> Result<VerifyReport> {
    let m = build_lax(u, LaxVariant::Open)?;
    let cofactor = char_poly(&m);
    let bareiss = char_poly_bareiss(&m)?;
    let recursive = open_char_poly_recursive(u)?;
    let mut rows = vec![VerifyRow::compare("prop32-1", u.n(), None, &recursive, &cofactor)];
    rows.push(VerifyRow::compare("prop32-1", u.n(), None, &cofactor, &bareiss));
    Ok(VerifyReport { rows })
}

/// `P_n = D_n O_n - z + (-1)^{n+1} Q_1...Q_n / z`, and the corner
/// coefficients A_n and B_n forced by the periodic Lax matrix.
pub fn verify_prop32_2(u: VarUniverse) -> Result<VerifyReport> {
    let n = u.n();
    let m = build_lax(u, LaxVariant::Periodic)?;
    let det = char_poly(&m);
    let assembled = periodic_from_open(u)?;
    let mut rows = vec![VerifyRow::compare("prop32-2", n, None, &assembled, &det)];

    let mut corner = Monomial::one();
    for i in 1..=n {
        corner = corner.mul(&Monomial::var(u.q(i)?))?;
    }
    let sign = if n.is_multiple_of(2) { -1 } else { 1 };
    let a_expected = Polynomial::term(u, corner, Rational::from_integer(sign.into()))?;
    rows.push(VerifyRow::compare(
        "prop32-2",
        n,
        None,
        &det.coeff_of(VarId::Z, -1),
        &a_expected,
    ));
    rows.push(VerifyRow::compare(
        "prop32-2",
        n,
        None,
        &det.coeff_of(VarId::Z, 1),
        &Polynomial::from_int(u, -1),
    ));
    Ok(VerifyReport { rows })
}

/// Iterator over all 2^n - 1 nonempty squarefree X-monomials.
pub fn squarefree_x_monomials(u: VarUniverse) -> impl Iterator<Item = Polynomial> {
    let n = u.n() as u32;
    (1u32..1 << n).map(move |mask| {
        let m = Monomial::from_exps(
            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| (VarId::X(i as u8 + 1), 1)),
        )
        .expect("squarefree monomial");
        Polynomial::term(u, m, Rational::one()).expect("in universe")
    })
}

/// Round trip of the delta- and D-chains on every squarefree X-monomial.
pub fn verify_prop23(u: VarUniverse) -> Result<VerifyReport> {
    use crate::quantumrel::{ev_c_from_quantum, ev_q_normal_form};
    let mut pass = true;
    let mut witness = None;
    for p in squarefree_x_monomials(u) {
        let forward = ev_c_from_quantum(&ev_q_normal_form(&p)?)?;
        let backward = ev_q_normal_form(&ev_c_from_quantum(&p)?)?;
        for round in [forward, backward] {
            let diff = &round - &p;
            if !diff.is_zero() {
                pass = false;
                witness.get_or_insert(diff);
            }
        }
    }
    Ok(VerifyReport {
        rows: vec![VerifyRow { suite: "prop23", n: u.n(), k: None, pass, witness }],
    })
}

/// Setting Q_n = 0 collapses the periodic family onto the open-hat family.
pub fn verify_degeneration(u: VarUniverse) -> Result<VerifyReport> {
    let n = u.n();
    let periodic = qs_family(u)?;
    let hat = qs_hat_family(u)?;
    let zero = Polynomial::zero(u);
    let rows = periodic
        .relations
        .iter()
        .zip(&hat.relations)
        .enumerate()
        .map(|(k, (p, h))| {
            let collapsed = p.substitute(VarId::Q(n), &zero)?;
            Ok(VerifyRow::compare("degeneration", n, Some(k as u8), &collapsed, h))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { rows })
}

pub fn run_suite(suite: Suite, u: VarUniverse) -> Result<VerifyReport> {
    match suite {
        Suite::Thm31 => verify_theorem31(u),
        Suite::Cor42 => verify_cor42(u),
        Suite::Prop32_1 => verify_prop32_1(u),
        Suite::Prop32_2 => verify_prop32_2(u),
        Suite::Prop23 => verify_prop23(u),
        Suite::Degeneration => verify_degeneration(u),
    }
}

/// Runs the selected suites for every admissible n up to `n_max`. The (suite,
/// n) pairs are independent and evaluated in parallel when the `parallel`
/// feature is enabled; rows come back in deterministic order.
pub fn run_suites(suites: &[Suite], n_max: u8) -> Result<VerifyReport> {
    if n_max < 3 {
        return Err(Error::IndexOutOfRange { index: n_max, n: 3 });
    }
    let jobs: Vec<(Suite, u8)> = suites
        .iter()
        .flat_map(|&s| (s.min_n()..=n_max).map(move |n| (s, n)))
        .collect();
    let results: Vec<Result<Vec<VerifyRow>>> = par_flat_map(jobs, |(suite, n)| {
        let u = VarUniverse::new(n)?;
        Ok(run_suite(suite, u)?.rows)
    });
    let mut report = VerifyReport::default();
    for rows in results {
        report.rows.extend(rows?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
        }
        assert_eq!(Suite::parse("nope"), None);
    }

    #[test]
    fn squarefree_enumeration_count() {
        let u = VarUniverse::new(4).unwrap();
        assert_eq!(squarefree_x_monomials(u).count(), 15);
    }

    #[test]
    fn all_suites_pass_small() {
        let report = run_suites(&Suite::ALL, 4).unwrap();
        assert!(report.all_pass(), "{:#?}", report.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>());
    }

    #[test]
    fn negative_control_detects_corruption() {
        // a wrong sign in the corner term must produce a nonzero witness
        let u = VarUniverse::new(3).unwrap();
        let det = char_poly(&build_lax(u, LaxVariant::Periodic).unwrap());
        let wrong = det.coeff_of(VarId::Z, -1).scale(&-Rational::from_integer(1.into()));
        let mut corner = Monomial::one();
        for i in 1..=3 {
            corner = corner.mul(&Monomial::var(VarId::Q(i))).unwrap();
        }
        let expected = Polynomial::term(u, corner, Rational::from_integer(1.into())).unwrap();
        let row = VerifyRow::compare("prop32-2", 3, None, &wrong, &expected);
        assert!(!row.pass);
        assert!(row.witness.is_some());
    }
}
