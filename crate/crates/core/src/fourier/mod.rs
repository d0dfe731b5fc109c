//! Fourier coefficients `c_n(f) = (1/2π) ∫_{-π}^{π} e^{-inθ} f(θ) dθ` of the
//! family `f(θ) = (iθ)^m`, by an exact recurrence and by panel quadrature,
//! plus the Parseval pairing of convolution powers of `τ`.
//!
//! The Fourier function of `τ` is `iθ`, so these are the coefficients that
//! the convolution powers `τ^m` must reproduce.

mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::braidexp::tau;
use crate::conv::power;
use crate::error::{Error, Result};

pub use quadrature::GaussLegendre;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureMethod {
    ClosedForm,
    GaussLegendre,
}

/// Evaluation policy for the Fourier-coefficient oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    /// Minimum number of panels on `[-π, π]`. The quadrature raises this to
    /// `2|n| + 2` so that every panel sees at most half an oscillation of
    /// `e^{-inθ}`.
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Absolute error target; also the largest accepted gap between the
    /// half-resolution and full-resolution evaluations.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::GaussLegendre,
            panels: 8,
            nodes_per_panel: 16,
            tolerance: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.panels < 1 {
            return Err(Error::InvalidQuadrature("panels must be at least 1".into()));
        }
        if self.nodes_per_panel < 2 {
            return Err(Error::InvalidQuadrature(
                "nodes_per_panel must be at least 2".into(),
            ));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidQuadrature(
                "tolerance must be positive and finite".into(),
            ));
        }
        Ok(())
    }

    /// Panel count actually used for frequency `n`.
    pub fn panels_for(&self, n: i64) -> usize {
        self.panels.max(2 * n.unsigned_abs() as usize + 2)
    }
}

/// `c_n(θ) = i(-1)^n / n` for `n ≠ 0`, and `0` for `n = 0`.
pub fn cn_sawtooth(n: i64) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Complex64::new(0.0, sign / n as f64)
}

fn i_pow(m: u32) -> Complex64 {
    match m % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

/// Boundary term of the integration by parts,
/// `(i/n)(-1)^n π^k (1 - (-1)^k)`; it vanishes for even `k`.
fn boundary_term(k: u32, n: i64) -> Complex64 {
    if k.is_multiple_of(2) {
        return Complex64::new(0.0, 0.0);
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Complex64::new(0.0, 2.0 * sign * PI.powi(k as i32) / n as f64)
}

/// `J(m, n) = ∫_{-π}^{π} θ^m e^{-inθ} dθ`.
///
/// For `n ≠ 0` integration by parts gives
/// `J(m, n) = (i/n)(-1)^n π^m (1 - (-1)^m) - (i m / n) J(m-1, n)`, `J(0, n) = 0`.
/// Run upward, each step multiplies the rounding error by `m/|n|` while the
/// solution itself grows by about `π`, so the upward sweep is only used while
/// `m ≤ π|n|`. Beyond that the same recurrence is run downward from a start
/// index high enough that an arbitrary (zero) seed has decayed below 1e-20
/// relative, which is stable in that regime.
pub fn theta_power_integral(m: u32, n: i64) -> Complex64 {
    if n == 0 {
        return if m % 2 == 1 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(2.0 * PI.powi(m as i32 + 1) / (m as f64 + 1.0), 0.0)
        };
    }
    let nf = n as f64;
    let abs_n = nf.abs();
    if (m as f64) <= PI * abs_n {
        let mut j = Complex64::new(0.0, 0.0);
        for k in 1..=m {
            j = boundary_term(k, n) - I * (k as f64 / nf) * j;
        }
        j
    } else {
        let mut start = m;
        let mut damping = 1.0;
        while damping > 1e-20 {
            start += 1;
            damping *= PI * abs_n / start as f64;
        }
        start += 8;
        // J(k-1) = (n / (i k)) (A_k - J(k))
        let mut j = Complex64::new(0.0, 0.0);
        for k in (m + 1..=start).rev() {
            j = -I * (nf / k as f64) * (boundary_term(k, n) - j);
        }
        j
    }
}

/// `c_n((iθ)^m) = i^m J(m, n) / 2π`, the `n`-th coefficient of `τ^m`.
pub fn cn_theta_power_closed(n: i64, m: u32) -> Complex64 {
    i_pow(m) * theta_power_integral(m, n) / (2.0 * PI)
}

/// `(1/2π) ∫_{-π}^{π} e^{-inθ} f(θ) dθ` by composite Gauss–Legendre, checked
/// against the same rule on half as many panels.
pub fn fourier_coefficient(
    n: i64,
    spec: &QuadratureSpec,
    f: impl Fn(f64) -> Complex64,
) -> std::result::Result<Complex64, (Complex64, f64)> {
    let rule = GaussLegendre::new(spec.nodes_per_panel);
    let panels = spec.panels_for(n);
    let nf = n as f64;
    let integrand = |theta: f64| Complex64::from_polar(1.0, -nf * theta) * f(theta);
    let full = rule.integrate_panels(-PI, PI, panels, integrand) / (2.0 * PI);
    let half = rule.integrate_panels(-PI, PI, (panels / 2).max(1), integrand) / (2.0 * PI);
    let diff = (full - half).norm();
    if diff > spec.tolerance {
        Err((full, diff))
    } else {
        Ok(full)
    }
}

/// Quadrature path for `c_n((iθ)^m)`.
pub fn cn_theta_power_quad(n: i64, m: u32, spec: &QuadratureSpec) -> Result<Complex64> {
    spec.validate()?;
    if spec.method != QuadratureMethod::GaussLegendre {
        return Err(Error::InvalidQuadrature(
            "numerical path requires method gauss_legendre".into(),
        ));
    }
    let im = i_pow(m);
    fourier_coefficient(n, spec, |theta| im * theta.powi(m as i32)).map_err(|(_, diff)| {
        Error::QuadratureNotConverged {
            n,
            m,
            diff,
            tolerance: spec.tolerance,
        }
    })
}

/// Dispatches on `spec.method`.
pub fn cn_theta_power(n: i64, m: u32, spec: &QuadratureSpec) -> Result<Complex64> {
    match spec.method {
        QuadratureMethod::ClosedForm => Ok(cn_theta_power_closed(n, m)),
        QuadratureMethod::GaussLegendre => cn_theta_power_quad(n, m, spec),
    }
}

/// Both sides of Parseval's identity for `A = (iθ)^j`, `B = (iθ)^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalPair {
    /// `Σ_n c_n(τ^j) conj(c_n(τ^k))` over the window of `τ` truncated at `N`.
    pub lhs: Complex64,
    /// `(1/2π) ∫ (iθ)^j conj((iθ)^k) dθ`.
    pub rhs: Complex64,
}

impl ParsevalPair {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    /// Known bound on the gap: the tail `Σ_{|n|>N} n^{-2} < 2/N` for
    /// `(j, k) = (1, 1)`, and zero whenever one side is `δ_0` against `δ_0`.
    pub fn known_bound(j: u32, k: u32, window: usize) -> Option<f64> {
        match (j, k) {
            (0, 0) => Some(0.0),
            (1, 1) => Some(2.0 / window as f64),
            _ => None,
        }
    }
}

/// `i^{j-k} π^{j+k} / (j+k+1)` when `j + k` is even, else `0`.
pub fn parseval_rhs(j: u32, k: u32) -> Complex64 {
    let total = j + k;
    if total % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    // i^{j-k} = i^j · conj(i^k)
    i_pow(j) * i_pow(k).conj() * PI.powi(total as i32) / (total as f64 + 1.0)
}

/// Evaluates both sides of Parseval's identity for `(iθ)^j` and `(iθ)^k`,
/// the left side in coefficient space from `τ` on the window `-N..=N`.
/// Powers are taken without clamping.
pub fn parseval_pair(j: u32, k: u32, window: usize) -> Result<ParsevalPair> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    let t = tau(window);
    let cap = (j.max(k).max(1) as usize) * window;
    let a = power(&t, j, cap)?.seq;
    let b = if j == k {
        a.clone()
    } else {
        power(&t, k, cap)?.seq
    };
    Ok(ParsevalPair {
        lhs: a.inner(&b),
        rhs: parseval_rhs(j, k),
    })
}
