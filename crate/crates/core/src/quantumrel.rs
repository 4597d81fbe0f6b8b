//! S_n, the quantum relation families QS_n and their hat variants, the
//! X <-> Y variable changes, and the evaluation-map normal forms on V.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laxdet::{conserved, LaxVariant};
use crate::operators::OperatorChain;
use crate::poly::Polynomial;
use crate::vars::{VarId, VarUniverse};
use crate::verify::{VerifyReport, VerifyRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyVariant {
    Periodic,
    OpenHat,
}

impl FamilyVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyVariant::Periodic => "periodic",
            FamilyVariant::OpenHat => "open-hat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    X,
    Y,
}

/// Boundary convention for the X -> Y change of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YBoundary {
    /// Y_0 = Y_n (periodic flag manifold).
    Cyclic,
    /// Y_0 = Y_n = 0 (finite-dimensional flag manifold).
    Zero,
}

/// The relations QS^0..QS^n (coefficients of mu^0..mu^n), in one basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationFamily {
    universe: VarUniverse,
    pub variant: FamilyVariant,
    pub basis: Basis,
    pub relations: Vec<Polynomial>,
}

impl RelationFamily {
    pub fn n(&self) -> u8 {
        self.universe.n()
    }

    pub fn universe(&self) -> VarUniverse {
        self.universe
    }

    /// Converts to the Y basis with the boundary convention matching the
    /// variant (cyclic for periodic, zero for open-hat).
    pub fn into_y_basis(self) -> Result<RelationFamily> {
        if self.basis == Basis::Y {
            return Ok(self);
        }
        let boundary = match self.variant {
            FamilyVariant::Periodic => YBoundary::Cyclic,
            FamilyVariant::OpenHat => YBoundary::Zero,
        };
        let relations = self
            .relations
            .iter()
            .map(|p| to_y_basis(p, boundary))
            .collect::<Result<Vec<_>>>()?;
        Ok(RelationFamily { basis: Basis::Y, relations, ..self })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "variant": self.variant.as_str(),
            "basis": match self.basis { Basis::X => "X", Basis::Y => "Y" },
            "relations": self.relations.iter().map(Polynomial::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `S_n = (X_1 + mu)...(X_n + mu)`.
pub fn s_poly(u: VarUniverse) -> Result<Polynomial> {
    let mu = Polynomial::var(u, VarId::Mu)?;
    let mut p = Polynomial::one(u);
    for i in 1..=u.n() {
        p = &p * &(&Polynomial::var(u, u.x(i)?)? + &mu);
    }
    Ok(p)
}

fn split_by_mu(u: VarUniverse, p: &Polynomial) -> Vec<Polynomial> {
    (0..=u.n() as i32).map(|k| p.coeff_of(VarId::Mu, k)).collect()
}

/// `QS_n = D_n D_{n-1} ... D_1 S_n`, split by mu-coefficient.
pub fn qs_family(u: VarUniverse) -> Result<RelationFamily> {
    let chain = OperatorChain::d_chain(u, u.n())?;
    let qs = chain.apply(&s_poly(u)?)?;
    Ok(RelationFamily {
        universe: u,
        variant: FamilyVariant::Periodic,
        basis: Basis::X,
        relations: split_by_mu(u, &qs),
    })
}

/// The hat variant `D_{n-1} ... D_1 S_n`, omitting the final cyclic factor.
pub fn qs_hat_family(u: VarUniverse) -> Result<RelationFamily> {
    let chain = OperatorChain::d_chain(u, u.n() - 1)?;
    let qs = chain.apply(&s_poly(u)?)?;
    Ok(RelationFamily {
        universe: u,
        variant: FamilyVariant::OpenHat,
        basis: Basis::X,
        relations: split_by_mu(u, &qs),
    })
}

/// Substitutes X_i -> Y_i - Y_{i-1} with the chosen boundary convention.
pub fn to_y_basis(p: &Polynomial, boundary: YBoundary) -> Result<Polynomial> {
    let u = p.universe();
    let n = u.n();
    let mut out = p.clone();
    for i in 1..=n {
        let yi = match (boundary, i) {
            (YBoundary::Zero, i) if i == n => Polynomial::zero(u),
            _ => Polynomial::var(u, u.y(i)?)?,
        };
        let yprev = match (boundary, i) {
            (YBoundary::Cyclic, 1) => Polynomial::var(u, u.y(n)?)?,
            (YBoundary::Zero, 1) => Polynomial::zero(u),
            (_, i) => Polynomial::var(u, u.y(i - 1)?)?,
        };
        out = out.substitute(u.x(i)?, &(&yi - &yprev))?;
    }
    Ok(out)
}

fn require_in_v(p: &Polynomial) -> Result<()> {
    match p.violating_monomial() {
        None => Ok(()),
        Some(m) => Err(Error::NotInV(m.to_string())),
    }
}

/// The quantum normal form `delta_n ... delta_1 p` on V: every adjacent pair
/// X_i X_{i+1} picks up the correction -Q_i.
pub fn ev_q_normal_form(p: &Polynomial) -> Result<Polynomial> {
    require_in_v(p)?;
    let u = p.universe();
    OperatorChain::delta_chain(u, u.n())?.apply(p)
}

/// The inverse chain `D_n ... D_1 p` on V.
pub fn ev_c_from_quantum(p: &Polynomial) -> Result<Polynomial> {
    require_in_v(p)?;
    let u = p.universe();
    OperatorChain::d_chain(u, u.n())?.apply(p)
}

/// `QS^k_n = P^k_n` for all k, by two independent computation paths.
pub fn verify_theorem31(u: VarUniverse) -> Result<VerifyReport> {
    let qs = qs_family(u)?;
    let cons = conserved(u, LaxVariant::Periodic)?;
    let rows = qs
        .relations
        .iter()
        .zip(&cons.coefficients)
        .enumerate()
        .map(|(k, (lhs, rhs))| VerifyRow::compare("thm31", u.n(), Some(k as u8), lhs, rhs))
        .collect();
    Ok(VerifyReport { rows })
}

/// `QhatS^k_n = O^k_n` for all k.
pub fn verify_cor42(u: VarUniverse) -> Result<VerifyReport> {
    let qs = qs_hat_family(u)?;
    let cons = conserved(u, LaxVariant::Open)?;
    let rows = qs
        .relations
        .iter()
        .zip(&cons.coefficients)
        .enumerate()
        .map(|(k, (lhs, rhs))| VerifyRow::compare("cor42", u.n(), Some(k as u8), lhs, rhs))
        .collect();
    Ok(VerifyReport { rows })
}
