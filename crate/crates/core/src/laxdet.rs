//! Open and periodic Lax matrices, their characteristic polynomials by two
//! independent determinant algorithms, and the conserved-quantity extraction.

use std::collections::HashMap;
use std::fmt;

use num::traits::One;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::operators::apply_d;
use crate::poly::{Monomial, Polynomial, Rational};
use crate::vars::{VarId, VarUniverse};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaxVariant {
    Open,
    Periodic,
}

impl fmt::Display for LaxVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaxVariant::Open => write!(f, "open"),
            LaxVariant::Periodic => write!(f, "periodic"),
        }
    }
}

/// The matrix L_n (open) or its loop-algebra version with the -z and Q_n/z
/// corners (periodic). mu is added by `char_poly`, not stored here.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxMatrix {
    universe: VarUniverse,
    variant: LaxVariant,
    entries: Vec<Vec<Polynomial>>,
}

impl LaxMatrix {
    pub fn n(&self) -> u8 {
        self.universe.n()
    }

    pub fn variant(&self) -> LaxVariant {
        self.variant
    }

    pub fn universe(&self) -> VarUniverse {
        self.universe
    }

    /// 1-based entry access.
    pub fn entry(&self, i: u8, j: u8) -> &Polynomial {
        &self.entries[(i - 1) as usize][(j - 1) as usize]
    }
}

pub fn build_lax(u: VarUniverse, variant: LaxVariant) -> Result<LaxMatrix> {
    let n = u.n() as usize;
    if variant == LaxVariant::Periodic && n < 3 {
        return Err(Error::PeriodicTooSmall(u.n()));
    }
    let zero = Polynomial::zero(u);
    let mut entries = vec![vec![zero; n]; n];
    for i in 0..n {
        entries[i][i] = Polynomial::var(u, u.x(i as u8 + 1)?)?;
        if i + 1 < n {
            entries[i][i + 1] = Polynomial::var(u, u.q(i as u8 + 1)?)?;
            entries[i + 1][i] = Polynomial::from_int(u, -1);
        }
    }
    if variant == LaxVariant::Periodic {
        let z = Polynomial::var(u, VarId::Z)?;
        entries[0][n - 1] = -&z;
        let qn = Monomial::from_exps([(u.q(u.n())?, 1), (VarId::Z, -1)])?;
        entries[n - 1][0] = Polynomial::term(u, qn, Rational::one())?;
    }
    Ok(LaxMatrix { universe: u, variant, entries })
}

fn plus_mu(m: &LaxMatrix) -> Vec<Vec<Polynomial>> {
    let mu = Polynomial::var(m.universe, VarId::Mu).expect("mu");
    let mut entries = m.entries.clone();
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = &row[i] + &mu;
    }
    entries
}

/// Laplace expansion along successive rows, memoized on the set of unused
/// columns.
pub fn det_cofactor(a: &[Vec<Polynomial>], u: VarUniverse) -> Polynomial {
    fn go(
        a: &[Vec<Polynomial>],
        u: VarUniverse,
        cols: u32,
        memo: &mut HashMap<u32, Polynomial>,
    ) -> Polynomial {
        if cols == 0 {
            return Polynomial::one(u);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let n = a.len();
        let row = n - cols.count_ones() as usize;
        let mut det = Polynomial::zero(u);
        let mut sign = Rational::one();
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            let e = &a[row][j];
            if !e.is_zero() {
                let minor = go(a, u, cols & !(1 << j), memo);
                det = &det + &(e * &minor).scale(&sign);
            }
            sign = -sign;
        }
        memo.insert(cols, det.clone());
        det
    }
    let n = a.len();
    let mut memo = HashMap::new();
    go(a, u, (1u32 << n) - 1, &mut memo)
}

/// Bareiss fraction-free elimination; every division is exact.
pub fn det_bareiss(a: &[Vec<Polynomial>], u: VarUniverse) -> Result<Polynomial> {
    let n = a.len();
    if n == 0 {
        return Ok(Polynomial::one(u));
    }
    let mut m: Vec<Vec<Polynomial>> = a.to_vec();
    let mut prev = Polynomial::one(u);
    let mut sign = 1i64;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let pivot_row = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match pivot_row {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(Polynomial::zero(u)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev)?;
            }
            m[i][k] = Polynomial::zero(u);
        }
        prev = m[k][k].clone();
    }
    Ok(m[n - 1][n - 1].scale(&Rational::from_integer(sign.into())))
}

/// det(L + mu I) by cofactor expansion.
pub fn char_poly(m: &LaxMatrix) -> Polynomial {
    det_cofactor(&plus_mu(m), m.universe)
}

/// det(L + mu I) by fraction-free elimination; the independent second route.
pub fn char_poly_bareiss(m: &LaxMatrix) -> Result<Polynomial> {
    det_bareiss(&plus_mu(m), m.universe)
}

/// The mu-coefficients of the characteristic polynomial, plus the z^-1 and z
/// coefficients in the periodic case.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedSet {
    universe: VarUniverse,
    variant: LaxVariant,
    /// coefficients[k] is O^k_n (open) or P^k_n (periodic), k = 0..=n.
    pub coefficients: Vec<Polynomial>,
    pub a_term: Option<Polynomial>,
    pub b_term: Option<Polynomial>,
}

impl ConservedSet {
    pub fn n(&self) -> u8 {
        self.universe.n()
    }

    pub fn variant(&self) -> LaxVariant {
        self.variant
    }

    pub fn universe(&self) -> VarUniverse {
        self.universe
    }

    /// "O" or "P" depending on the variant.
    pub fn letter(&self) -> &'static str {
        match self.variant {
            LaxVariant::Open => "O",
            LaxVariant::Periodic => "P",
        }
    }

    /// JSON object with keys "O0".."On" (open) or "P0".."Pn","A","B".
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        for (k, p) in self.coefficients.iter().enumerate() {
            obj.insert(format!("{}{k}", self.letter()), p.to_json());
        }
        if let Some(a) = &self.a_term {
            obj.insert("A".to_string(), a.to_json());
        }
        if let Some(b) = &self.b_term {
            obj.insert("B".to_string(), b.to_json());
        }
        Value::Object(obj)
    }
}

pub fn conserved(u: VarUniverse, variant: LaxVariant) -> Result<ConservedSet> {
    let cp = char_poly(&build_lax(u, variant)?);
    let mu_part = match variant {
        LaxVariant::Open => cp.clone(),
        LaxVariant::Periodic => cp.coeff_of(VarId::Z, 0),
    };
    let coefficients = (0..=u.n() as i32).map(|k| mu_part.coeff_of(VarId::Mu, k)).collect();
    let (a_term, b_term) = match variant {
        LaxVariant::Open => (None, None),
        LaxVariant::Periodic => (
            Some(cp.coeff_of(VarId::Z, -1)),
            Some(cp.coeff_of(VarId::Z, 1)),
        ),
    };
    Ok(ConservedSet { universe: u, variant, coefficients, a_term, b_term })
}

/// O_n built by the last-row expansion recursion
/// `O_1 = X_1 + mu`, `O_{k+1} = D_k { (X_{k+1} + mu) O_k }`.
pub fn open_char_poly_recursive(u: VarUniverse) -> Result<Polynomial> {
    let mu = Polynomial::var(u, VarId::Mu)?;
    let mut o = &Polynomial::var(u, u.x(1)?)? + &mu;
    for k in 1..u.n() {
        let xk1 = Polynomial::var(u, u.x(k + 1)?)?;
        o = apply_d(u, k, &(&(&xk1 + &mu) * &o))?;
    }
    Ok(o)
}

/// `P_n = D_n O_n - z + (-1)^{n+1} Q_1...Q_n / z`, assembled from the open
/// characteristic polynomial. The signs of the z and 1/z terms are forced by
/// the corner entries `-z` and `Q_n/z` of the periodic Lax matrix: with those
/// corners the coefficient of z in det(L + mu*I) is exactly -1, and the
/// coefficient of 1/z is (-1)^{n+1} Q_1...Q_n (cross-checked against both
/// determinant algorithms in the test suite).
pub fn periodic_from_open(u: VarUniverse) -> Result<Polynomial> {
    let n = u.n();
    if n < 3 {
        return Err(Error::PeriodicTooSmall(n));
    }
    let o = open_char_poly_recursive(u)?;
    let dn_o = apply_d(u, n, &o)?;
    let z = Polynomial::var(u, VarId::Z)?;
    let mut corner = Monomial::from_exps([(VarId::Z, -1)])?;
    for i in 1..=n {
        corner = corner.mul(&Monomial::var(u.q(i)?))?;
    }
    let sign = if n.is_multiple_of(2) { -1 } else { 1 };
    let corner = Polynomial::term(u, corner, Rational::from_integer(sign.into()))?;
    Ok(&(&dn_o - &z) + &corner)
}
