//! The fixed variable universe X_1..X_n, Q_1..Q_n, Y_1..Y_n, mu, z.

use std::fmt;

use crate::error::{Error, Result};

/// Identifier of a variable in a universe of lattice size n.
///
/// The derived order is the universe order X_1 < ... < X_n < Q_1 < ... < Q_n
/// < Y_1 < ... < Y_n < mu < z. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    X(u8),
    Q(u8),
    Y(u8),
    Mu,
    Z,
}

impl VarId {
    /// Sort key used for the canonical term order and for printing factors:
    /// Q variables are most significant, then X, Y, mu, z.
    pub(crate) fn sig_key(self) -> (u8, u8) {
        match self {
            VarId::Q(i) => (0, i),
            VarId::X(i) => (1, i),
            VarId::Y(i) => (2, i),
            VarId::Mu => (3, 0),
            VarId::Z => (4, 0),
        }
    }

    /// Only z may carry negative exponents.
    pub fn allows_negative(self) -> bool {
        matches!(self, VarId::Z)
    }

    pub fn parse(name: &str) -> Option<VarId> {
        match name {
            "mu" => return Some(VarId::Mu),
            "z" => return Some(VarId::Z),
            _ => {}
        }
        let (head, idx) = name.split_at(1);
        let i: u8 = idx.parse().ok()?;
        if i == 0 {
            return None;
        }
        match head {
            "X" => Some(VarId::X(i)),
            "Q" => Some(VarId::Q(i)),
            "Y" => Some(VarId::Y(i)),
            _ => None,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::X(i) => write!(f, "X{i}"),
            VarId::Q(i) => write!(f, "Q{i}"),
            VarId::Y(i) => write!(f, "Y{i}"),
            VarId::Mu => write!(f, "mu"),
            VarId::Z => write!(f, "z"),
        }
    }
}

/// A variable universe for lattice size n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarUniverse {
    n: u8,
}

impl VarUniverse {
    pub fn new(n: u8) -> Result<VarUniverse> {
        if n == 0 {
            return Err(Error::IndexOutOfRange { index: 0, n });
        }
        Ok(VarUniverse { n })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// Checks an indexed variable against the universe bound.
    pub fn check(&self, v: VarId) -> Result<VarId> {
        match v {
            VarId::X(i) | VarId::Q(i) | VarId::Y(i) if i == 0 || i > self.n => {
                Err(Error::IndexOutOfRange { index: i, n: self.n })
            }
            _ => Ok(v),
        }
    }

    pub fn x(&self, i: u8) -> Result<VarId> {
        self.check(VarId::X(i))
    }

    pub fn q(&self, i: u8) -> Result<VarId> {
        self.check(VarId::Q(i))
    }

    pub fn y(&self, i: u8) -> Result<VarId> {
        self.check(VarId::Y(i))
    }

    /// X_{i+1} with the cyclic convention X_{n+1} = X_1.
    pub fn x_next(&self, i: u8) -> Result<VarId> {
        self.check(VarId::X(if i == self.n { 1 } else { i + 1 }))
    }
}
