//! The operators `D_i = Id + Q_i d^2/dX_i dX_{i+1}` and
//! `delta_i = Id - Q_i d^2/dX_i dX_{i+1}`, indices cyclic mod n.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::vars::VarUniverse;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    D,
    Delta,
}

/// Ordered product of operator factors; the rightmost factor applies first,
/// matching composition notation (`D_n D_{n-1} ... D_1` applies `D_1` first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorChain {
    universe: VarUniverse,
    factors: Vec<(OpKind, u8)>,
}

fn second_partial(u: VarUniverse, i: u8, p: &Polynomial) -> Result<Polynomial> {
    let xi = u.x(i)?;
    let xj = u.x_next(i)?;
    p.partial(xi)?.partial(xj)
}

/// `p + Q_i * d^2 p / dX_i dX_{i+1}`, with X_{n+1} read as X_1.
pub fn apply_d(u: VarUniverse, i: u8, p: &Polynomial) -> Result<Polynomial> {
    let qi = Polynomial::var(u, u.q(i)?)?;
    Ok(p + &(&qi * &second_partial(u, i, p)?))
}

/// `p - Q_i * d^2 p / dX_i dX_{i+1}`, with X_{n+1} read as X_1.
pub fn apply_delta(u: VarUniverse, i: u8, p: &Polynomial) -> Result<Polynomial> {
    let qi = Polynomial::var(u, u.q(i)?)?;
    Ok(p - &(&qi * &second_partial(u, i, p)?))
}

impl OperatorChain {
    pub fn new(u: VarUniverse, factors: Vec<(OpKind, u8)>) -> Result<OperatorChain> {
        for &(_, i) in &factors {
            u.q(i)?;
        }
        Ok(OperatorChain { universe: u, factors })
    }

    /// The full chain `D_m D_{m-1} ... D_1`.
    pub fn d_chain(u: VarUniverse, m: u8) -> Result<OperatorChain> {
        OperatorChain::new(u, (1..=m).rev().map(|i| (OpKind::D, i)).collect())
    }

    /// The full chain `delta_m delta_{m-1} ... delta_1`.
    pub fn delta_chain(u: VarUniverse, m: u8) -> Result<OperatorChain> {
        OperatorChain::new(u, (1..=m).rev().map(|i| (OpKind::Delta, i)).collect())
    }

    pub fn factors(&self) -> &[(OpKind, u8)] {
        &self.factors
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut acc = p.clone();
        for &(kind, i) in self.factors.iter().rev() {
            acc = match kind {
                OpKind::D => apply_d(self.universe, i, &acc)?,
                OpKind::Delta => apply_delta(self.universe, i, &acc)?,
            };
        }
        Ok(acc)
    }
}

impl fmt::Display for OperatorChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Id");
        }
        for (i, &(kind, idx)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            match kind {
                OpKind::D => write!(f, "D{idx}")?,
                OpKind::Delta => write!(f, "d{idx}")?,
            }
        }
        Ok(())
    }
}

impl OperatorChain {
    /// Parses the debug text form, e.g. `D3*D2*D1` or `d2*D1`.
    pub fn parse(u: VarUniverse, text: &str) -> Result<OperatorChain> {
        let err = |pos, msg: &str| Error::Parse { pos, msg: msg.to_string() };
        if text == "Id" {
            return OperatorChain::new(u, Vec::new());
        }
        let mut factors = Vec::new();
        for part in text.split('*') {
            let kind = match part.chars().next() {
                Some('D') => OpKind::D,
                Some('d') => OpKind::Delta,
                _ => return Err(err(0, "expected D<i> or d<i>")),
            };
            let idx: u8 = part[1..].parse().map_err(|_| err(1, "bad operator index"))?;
            factors.push((kind, idx));
        }
        OperatorChain::new(u, factors)
    }
}
