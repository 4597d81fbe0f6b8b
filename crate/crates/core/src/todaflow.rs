//! Numerical integration of the open and periodic Toda lattices in the Lax
//! variables, with drift measurement of the conserved quantities.
//!
//! Coordinate equations: `xdot_i = q_i - q_{i-1}`, `qdot_i = q_i (x_i -
//! x_{i+1})`, with `q_0 = q_n = 0` for the open lattice and indices mod n for
//! the periodic one. They are realized by the Lax pair with
//! `M = sum_i q_i E_{i,i+1}` (plus `q_n z^{-1} E_{n,1}` in the periodic
//! case); `lax_residual` checks that reconstruction against the flow.

use num::complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::laxdet::{conserved, LaxVariant};
use crate::par::par_map;
use crate::poly::CompiledPoly;
use crate::vars::{VarId, VarUniverse};

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub x: Vec<f64>,
    pub q: Vec<f64>,
}

fn q_len(n: usize, variant: LaxVariant) -> usize {
    match variant {
        LaxVariant::Open => n - 1,
        LaxVariant::Periodic => n,
    }
}

impl FlowState {
    /// Validates lengths and the admissibility constraints: sum x_i = 0
    /// (within rounding) and all q_i < 0.
    pub fn new(variant: LaxVariant, x: Vec<f64>, q: Vec<f64>) -> Result<FlowState> {
        let n = x.len();
        if n == 0 {
            return Err(Error::InvalidState("empty x vector".into()));
        }
        if q.len() != q_len(n, variant) {
            return Err(Error::InvalidState(format!(
                "expected {} q entries for {variant} n = {n}, got {}",
                q_len(n, variant),
                q.len()
            )));
        }
        let sum: f64 = x.iter().sum();
        if sum.abs() > 1e-9 {
            return Err(Error::InvalidState(format!("sum of x is {sum}, expected 0")));
        }
        // rejects NaN as well: a NaN entry is neither negative nor valid
        if let Some(bad) = q.iter().find(|&&qi| qi >= 0.0 || qi.is_nan()) {
            return Err(Error::InvalidState(format!("q entries must be negative, got {bad}")));
        }
        Ok(FlowState { t: 0.0, x, q })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(self.q.iter()).all(|v| v.is_finite())
    }
}

/// Time derivative (dx, dq) of the state.
pub fn vector_field(x: &[f64], q: &[f64], variant: LaxVariant) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    // q_i with the boundary convention, 1-based index
    let qv = |i: usize| -> f64 {
        match variant {
            LaxVariant::Open => {
                if i == 0 || i == n {
                    0.0
                } else {
                    q[i - 1]
                }
            }
            LaxVariant::Periodic => q[(i + n - 1) % n],
        }
    };
    let dx: Vec<f64> = (1..=n).map(|i| qv(i) - qv(i - 1)).collect();
    let dq: Vec<f64> = match variant {
        LaxVariant::Open => (1..n).map(|i| q[i - 1] * (x[i - 1] - x[i])).collect(),
        LaxVariant::Periodic => (0..n).map(|j| q[j] * (x[j] - x[(j + 1) % n])).collect(),
    };
    (dx, dq)
}

fn rk4_signed(s: &FlowState, h: f64, variant: LaxVariant) -> FlowState {
    let add = |x: &[f64], d: &[f64], c: f64| -> Vec<f64> {
        x.iter().zip(d).map(|(a, b)| a + c * b).collect()
    };
    let (kx1, kq1) = vector_field(&s.x, &s.q, variant);
    let (kx2, kq2) = vector_field(&add(&s.x, &kx1, h / 2.0), &add(&s.q, &kq1, h / 2.0), variant);
    let (kx3, kq3) = vector_field(&add(&s.x, &kx2, h / 2.0), &add(&s.q, &kq2, h / 2.0), variant);
    let (kx4, kq4) = vector_field(&add(&s.x, &kx3, h), &add(&s.q, &kq3, h), variant);
    let combine = |v: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
        v.iter()
            .enumerate()
            .map(|(i, a)| a + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    };
    FlowState {
        t: s.t + h,
        x: combine(&s.x, &kx1, &kx2, &kx3, &kx4),
        q: combine(&s.q, &kq1, &kq2, &kq3, &kq4),
    }
}

/// One explicit classical Runge-Kutta step, h > 0.
pub fn rk4_step(s: &FlowState, h: f64, variant: LaxVariant) -> FlowState {
    assert!(h > 0.0, "step size must be positive");
    rk4_signed(s, h, variant)
}

#[derive(Debug, Clone)]
pub struct DriftReport {
    pub n: usize,
    pub variant: LaxVariant,
    pub dt: f64,
    pub t_end: f64,
    /// (label, max relative drift) per conserved quantity, k = 0..n-1.
    pub drift: Vec<(String, f64)>,
    pub sumx_max: f64,
    pub prodq_drift: Option<f64>,
    pub integrator_order: u8,
    pub steps: usize,
}

impl DriftReport {
    pub fn max_drift(&self) -> f64 {
        self.drift.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("n".into(), json!(self.n));
        obj.insert("variant".into(), json!(self.variant.to_string()));
        obj.insert("dt".into(), json!(self.dt));
        obj.insert("t_end".into(), json!(self.t_end));
        let mut drift = Map::new();
        for (label, d) in &self.drift {
            drift.insert(label.clone(), json!(d));
        }
        obj.insert("drift".into(), Value::Object(drift));
        obj.insert("sumx_max".into(), json!(self.sumx_max));
        if let Some(p) = self.prodq_drift {
            obj.insert("prodq_drift".into(), json!(p));
        }
        obj.insert("integrator_order".into(), json!(self.integrator_order));
        obj.insert("steps".into(), json!(self.steps));
        Value::Object(obj)
    }
}

/// Compiles the symbolic conserved quantities k = 0..n-1 into fast numeric
/// evaluators over the slot layout [x_1..x_n, q_1..q_m].
fn compiled_conserved(n: usize, variant: LaxVariant) -> Result<Vec<CompiledPoly>> {
    let u = VarUniverse::new(n as u8)?;
    let set = conserved(u, variant)?;
    let slot = |v: VarId| -> Option<usize> {
        match v {
            VarId::X(i) => Some(i as usize - 1),
            VarId::Q(i) => Some(n + i as usize - 1),
            _ => None,
        }
    };
    set.coefficients[..n]
        .iter()
        .map(|p| CompiledPoly::compile(p, slot))
        .collect()
}

fn state_values(s: &FlowState) -> Vec<f64> {
    s.x.iter().chain(s.q.iter()).copied().collect()
}

fn relative_drift(v: f64, v0: f64) -> f64 {
    (v - v0).abs() / f64::max(1.0, v0.abs())
}

/// Integrates from `s0` to `t_end` with fixed step `h`, sampling every step,
/// and reports the worst relative drift of each conserved quantity.
pub fn integrate(
    s0: &FlowState,
    t_end: f64,
    h: f64,
    variant: LaxVariant,
) -> Result<(Vec<FlowState>, DriftReport)> {
    assert!(h > 0.0, "step size must be positive");
    assert!(t_end >= 0.0, "t_end must be nonnegative");
    let n = s0.n();
    let steps = (t_end / h).round() as usize;

    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(s0.clone());
    for _ in 0..steps {
        let next = rk4_signed(trajectory.last().unwrap(), h, variant);
        if !next.is_finite() {
            return Err(Error::NonFiniteState(next.t));
        }
        trajectory.push(next);
    }

    let evaluators = compiled_conserved(n, variant)?;
    // conserved values per sample; trajectory samples are independent
    let values: Vec<Vec<f64>> = par_map(trajectory.clone(), |s| {
        let vals = state_values(&s);
        evaluators.iter().map(|e| e.eval(&vals)).collect()
    });

    let initial = &values[0];
    let letter = match variant {
        LaxVariant::Open => "O",
        LaxVariant::Periodic => "P",
    };
    let drift: Vec<(String, f64)> = (0..n)
        .map(|k| {
            let worst = values
                .iter()
                .map(|row| relative_drift(row[k], initial[k]))
                .fold(0.0, f64::max);
            (format!("{letter}{k}"), worst)
        })
        .collect();

    let sumx_max = trajectory
        .iter()
        .map(|s| s.x.iter().sum::<f64>().abs())
        .fold(0.0, f64::max);
    let prodq_drift = match variant {
        LaxVariant::Open => None,
        LaxVariant::Periodic => {
            let prod = |s: &FlowState| s.q.iter().product::<f64>();
            let p0 = prod(&trajectory[0]);
            Some(
                trajectory
                    .iter()
                    .map(|s| relative_drift(prod(s), p0))
                    .fold(0.0, f64::max),
            )
        }
    };

    let report = DriftReport {
        n,
        variant,
        dt: h,
        t_end,
        drift,
        sumx_max,
        prodq_drift,
        integrator_order: 4,
        steps,
    };
    Ok((trajectory, report))
}

fn lax_matrix_numeric(s: &FlowState, variant: LaxVariant, z: Complex64) -> Vec<Vec<Complex64>> {
    let n = s.n();
    let zero = Complex64::new(0.0, 0.0);
    let mut m = vec![vec![zero; n]; n];
    for i in 0..n {
        m[i][i] = Complex64::new(s.x[i], 0.0);
        if i + 1 < n {
            m[i][i + 1] = Complex64::new(s.q[i], 0.0);
            m[i + 1][i] = Complex64::new(-1.0, 0.0);
        }
    }
    if variant == LaxVariant::Periodic {
        m[0][n - 1] = -z;
        m[n - 1][0] = Complex64::new(s.q[n - 1], 0.0) / z;
    }
    m
}

fn m_matrix_numeric(s: &FlowState, variant: LaxVariant, z: Complex64) -> Vec<Vec<Complex64>> {
    let n = s.n();
    let zero = Complex64::new(0.0, 0.0);
    let mut m = vec![vec![zero; n]; n];
    for i in 0..n - 1 {
        m[i][i + 1] = Complex64::new(s.q[i], 0.0);
    }
    if variant == LaxVariant::Periodic {
        m[n - 1][0] = Complex64::new(s.q[n - 1], 0.0) / z;
    }
    m
}

fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn frobenius(a: &[Vec<Complex64>]) -> f64 {
    a.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Central-difference residual `|| Ldot - [L, M] ||` of the Lax equation at
/// the given state, maximized over the z samples (ignored for the open
/// lattice).
pub fn lax_residual(
    s: &FlowState,
    variant: LaxVariant,
    z_samples: &[Complex64],
    fd_step: f64,
) -> Result<f64> {
    assert!(fd_step > 0.0);
    let zs: Vec<Complex64> = match variant {
        LaxVariant::Open => vec![Complex64::new(1.0, 0.0)],
        LaxVariant::Periodic => {
            if z_samples.is_empty() {
                return Err(Error::InvalidState("periodic residual needs z samples".into()));
            }
            z_samples.to_vec()
        }
    };
    let fwd = rk4_signed(s, fd_step, variant);
    let bwd = rk4_signed(s, -fd_step, variant);
    let mut worst: f64 = 0.0;
    for z in zs {
        let lf = lax_matrix_numeric(&fwd, variant, z);
        let lb = lax_matrix_numeric(&bwd, variant, z);
        let l = lax_matrix_numeric(s, variant, z);
        let m = m_matrix_numeric(s, variant, z);
        let lm = mat_mul(&l, &m);
        let ml = mat_mul(&m, &l);
        let n = l.len();
        let mut diff = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let ldot = (lf[i][j] - lb[i][j]) / (2.0 * fd_step);
                diff[i][j] = ldot - (lm[i][j] - ml[i][j]);
            }
        }
        worst = worst.max(frobenius(&diff));
    }
    Ok(worst)
}

/// Coefficients of det(L + mu I) for the numerically instantiated open
/// tridiagonal matrix, by the three-term recurrence. Index k is the mu^k
/// coefficient. Independent of the symbolic route.
pub fn numeric_open_char_coeffs(x: &[f64], q: &[f64]) -> Vec<f64> {
    let n = x.len();
    // det recurrence: D_k = (x_k + mu) D_{k-1} + q_{k-1} D_{k-2}
    let mut prev: Vec<f64> = vec![1.0];
    let mut cur: Vec<f64> = vec![x[0], 1.0];
    for k in 2..=n {
        let mut next = vec![0.0; k + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i] += x[k - 1] * c;
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] += q[k - 2] * c;
        }
        prev = std::mem::take(&mut cur);
        cur = next;
    }
    cur
}
