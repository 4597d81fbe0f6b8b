//! Sparse multivariate Laurent polynomials over the exact rationals.
//!
//! Terms live in a `BTreeMap` keyed by monomial, so a polynomial is always
//! in canonical form and structural equality is semantic equality. The term
//! order is graded lexicographic: higher total degree first, ties broken by
//! exponents with Q most significant, then X, Y, mu, z. Only z may carry
//! negative exponents.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::traits::{One, Signed, ToPrimitive, Zero};
use num::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::vars::{VarId, VarUniverse};

pub type Rational = BigRational;

/// Exponent vector in canonical form: no zero exponents stored, negative
/// exponents only for z.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: BTreeMap<VarId, i32>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Monomial {
        let mut exps = BTreeMap::new();
        exps.insert(v, 1);
        Monomial { exps }
    }

    pub fn from_exps<I: IntoIterator<Item = (VarId, i32)>>(iter: I) -> Result<Monomial> {
        let mut exps = BTreeMap::new();
        for (v, e) in iter {
            if e == 0 {
                continue;
            }
            let e = match exps.get(&v) {
                Some(prev) => prev + e,
                None => e,
            };
            if e == 0 {
                exps.remove(&v);
                continue;
            }
            if e < 0 && !v.allows_negative() {
                return Err(Error::NegativeExponent(v));
            }
            exps.insert(v, e);
        }
        Ok(Monomial { exps })
    }

    pub fn exp(&self, v: VarId) -> i32 {
        self.exps.get(&v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, i32)> + '_ {
        self.exps.iter().map(|(&v, &e)| (v, e))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.values().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        Monomial::from_exps(self.iter().chain(other.iter()))
    }

    /// self / other; fails if a non-z exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Result<Monomial> {
        Monomial::from_exps(self.iter().chain(other.iter().map(|(v, e)| (v, -e))))
    }

    pub fn pow(&self, k: i32) -> Result<Monomial> {
        Monomial::from_exps(self.iter().map(|(v, e)| (v, e * k)))
    }

    pub fn without(&self, v: VarId) -> Monomial {
        let mut exps = self.exps.clone();
        exps.remove(&v);
        Monomial { exps }
    }

    /// Exponents sorted by the significance order used for the term order.
    fn sig_sorted(&self) -> Vec<((u8, u8), i32)> {
        let mut out: Vec<_> = self.exps.iter().map(|(&v, &e)| (v.sig_key(), e)).collect();
        out.sort_unstable_by_key(|&(k, _)| k);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let a = self.sig_sorted();
        let b = other.sig_sorted();
        let mut ia = a.iter().peekable();
        let mut ib = b.iter().peekable();
        loop {
            match (ia.peek(), ib.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(&&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&&(_, eb))) => return 0.cmp(&eb),
                (Some(&&(ka, ea)), Some(&&(kb, eb))) => {
                    // earlier variable in significance order decides first
                    match ka.cmp(&kb) {
                        Ordering::Less => return ea.cmp(&0),
                        Ordering::Greater => return 0.cmp(&eb),
                        Ordering::Equal => match ea.cmp(&eb) {
                            Ordering::Equal => {
                                ia.next();
                                ib.next();
                            }
                            ord => return ord,
                        },
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        // print factors in significance order (Q, X, Y, mu, z)
        let mut vars: Vec<VarId> = self.exps.keys().copied().collect();
        vars.sort_unstable_by_key(|v| v.sig_key());
        for v in vars {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let e = self.exp(v);
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse Laurent polynomial over the rationals in a fixed variable universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    universe: VarUniverse,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(u: VarUniverse) -> Polynomial {
        Polynomial { universe: u, terms: BTreeMap::new() }
    }

    pub fn one(u: VarUniverse) -> Polynomial {
        Polynomial::constant(u, Rational::one())
    }

    pub fn constant(u: VarUniverse, c: Rational) -> Polynomial {
        let mut p = Polynomial::zero(u);
        p.insert(Monomial::one(), c);
        p
    }

    pub fn from_int(u: VarUniverse, k: i64) -> Polynomial {
        Polynomial::constant(u, Rational::from_integer(k.into()))
    }

    pub fn var(u: VarUniverse, v: VarId) -> Result<Polynomial> {
        u.check(v)?;
        let mut p = Polynomial::zero(u);
        p.insert(Monomial::var(v), Rational::one());
        Ok(p)
    }

    pub fn term(u: VarUniverse, m: Monomial, c: Rational) -> Result<Polynomial> {
        for (v, _) in m.iter() {
            u.check(v)?;
        }
        let mut p = Polynomial::zero(u);
        p.insert(m, c);
        Ok(p)
    }

    pub fn universe(&self) -> VarUniverse {
        self.universe
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending canonical order (the serialization order).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_universe(&self, other: &Polynomial) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch(self.universe.n(), other.universe.n()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_universe(other)?;
        let mut out = Polynomial::zero(self.universe);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.mul(mb)?, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.universe);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial { universe: self.universe, terms }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.universe);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn min_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.total_degree()).min().unwrap_or(0)
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: VarId) -> Result<Polynomial> {
        self.universe.check(v)?;
        if self.terms.keys().any(|m| m.exp(v) < 0) {
            return Err(Error::DifferentiateNegative(v));
        }
        let mut out = Polynomial::zero(self.universe);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut lowered = m.without(v);
            if e > 1 {
                lowered = lowered.mul(&Monomial::from_exps([(v, e - 1)])?)?;
            }
            out.insert(lowered, c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Replaces every occurrence of `v` by `r`. If `v` appears with negative
    /// exponents, `r` must be a single invertible monomial.
    pub fn substitute(&self, v: VarId, r: &Polynomial) -> Result<Polynomial> {
        self.universe.check(v)?;
        self.check_universe(r)?;
        let mut out = Polynomial::zero(self.universe);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let base = Polynomial::term(self.universe, m.without(v), c.clone())?;
            let replaced = match e.cmp(&0) {
                Ordering::Equal => base,
                Ordering::Greater => &base * &r.pow(e as u32),
                Ordering::Less => {
                    if r.num_terms() != 1 {
                        return Err(Error::NonInvertibleSubstitution(v));
                    }
                    let (rm, rc) = r.leading().expect("single term");
                    let inv_mono = rm.pow(e)?;
                    let inv_coeff = Rational::one() / rc.clone().pow(-e);
                    &base * &Polynomial::term(self.universe, inv_mono, inv_coeff)?
                }
            };
            out = &out + &replaced;
        }
        Ok(out)
    }

    /// Coefficient of `v^k`, a polynomial free of `v`.
    pub fn coeff_of(&self, v: VarId, k: i32) -> Polynomial {
        let mut out = Polynomial::zero(self.universe);
        for (m, c) in &self.terms {
            if m.exp(v) == k {
                out.insert(m.without(v), c.clone());
            }
        }
        out
    }

    /// Floating-point evaluation; all occurring variables must be assigned.
    pub fn eval_numeric(&self, assignment: &HashMap<VarId, f64>) -> Result<f64> {
        let mut total = 0.0;
        for (m, c) in self.terms() {
            let mut val = rational_to_f64(c);
            for (v, e) in m.iter() {
                let x = *assignment.get(&v).ok_or(Error::MissingVariable(v))?;
                if x == 0.0 && e < 0 {
                    return Err(Error::ZeroToNegativePower(v));
                }
                val *= x.powi(e);
            }
            total += val;
        }
        Ok(total)
    }

    /// Membership in the module V: squarefree in X, free of Y, mu, z;
    /// Q exponents unrestricted.
    pub fn is_in_v(&self) -> bool {
        self.terms.keys().all(|m| {
            m.iter().all(|(v, e)| match v {
                VarId::X(_) => e <= 1,
                VarId::Q(_) => true,
                _ => false,
            })
        })
    }

    /// First monomial violating V membership, for diagnostics.
    pub fn violating_monomial(&self) -> Option<&Monomial> {
        self.terms().map(|(m, _)| m).find(|m| {
            m.iter().any(|(v, e)| match v {
                VarId::X(_) => e > 1,
                VarId::Q(_) => false,
                _ => true,
            })
        })
    }

    /// Exact division; errors when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial> {
        self.check_universe(d)?;
        if d.is_zero() {
            return Err(Error::InexactDivision);
        }
        let floor = self.min_degree() - d.min_degree();
        let (dm, dc) = d.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quo = Polynomial::zero(self.universe);
        while let Some((lm, lc)) = rem.leading() {
            let qm = lm.div(dm).map_err(|_| Error::InexactDivision)?;
            if qm.total_degree() < floor {
                return Err(Error::InexactDivision);
            }
            let qt = Polynomial::term(self.universe, qm, lc / dc)?;
            rem = &rem - &(&qt * d);
            quo = &quo + &qt;
        }
        Ok(quo)
    }

    /// `{"vars":{"n":N},"terms":[{"coeff":"-3/2","exps":{"X1":1,...}},...]}`
    /// with terms in the canonical order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(m, c)| {
                let mut exps = Map::new();
                // JSON keys in universe order X, Q, Y, mu, z
                for (v, e) in m.iter() {
                    exps.insert(v.to_string(), json!(e));
                }
                json!({ "coeff": c.to_string(), "exps": Value::Object(exps) })
            })
            .collect();
        json!({ "vars": { "n": self.universe.n() }, "terms": terms })
    }

    pub fn from_json(value: &Value) -> Result<Polynomial> {
        let bad = |msg: &str| Error::Json(msg.to_string());
        let n = value
            .pointer("/vars/n")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing vars.n"))?;
        let u = VarUniverse::new(n as u8)?;
        let mut p = Polynomial::zero(u);
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing terms array"))?;
        for t in terms {
            let coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("missing coeff string"))?;
            let c = Rational::from_str(coeff).map_err(|e| bad(&format!("bad coeff: {e}")))?;
            let exps = t
                .get("exps")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("missing exps object"))?;
            let mut pairs = Vec::new();
            for (name, e) in exps {
                let v = VarId::parse(name).ok_or_else(|| bad(&format!("unknown variable {name}")))?;
                u.check(v)?;
                let e = e.as_i64().ok_or_else(|| bad("non-integer exponent"))? as i32;
                pairs.push((v, e));
            }
            p.insert(Monomial::from_exps(pairs)?, c);
        }
        Ok(p)
    }
}

fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("variable universe mismatch")
            }
        }
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$checked(&rhs).expect("variable universe mismatch")
            }
        }
    };
}

impl_binop!(Add, add, try_add);
impl_binop!(Sub, sub, try_sub);
impl_binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

/// Polynomial precompiled for repeated float evaluation along a trajectory.
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    /// `slot` maps each occurring variable to an index into the value slice.
    pub fn compile(p: &Polynomial, slot: impl Fn(VarId) -> Option<usize>) -> Result<CompiledPoly> {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let mut factors = Vec::new();
            for (v, e) in m.iter() {
                let s = slot(v).ok_or(Error::MissingVariable(v))?;
                factors.push((s, e));
            }
            terms.push((rational_to_f64(c), factors));
        }
        Ok(CompiledPoly { terms })
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, factors)| {
                factors
                    .iter()
                    .fold(*c, |acc, &(s, e)| acc * values[s].powi(e))
            })
            .sum()
    }
}
