//! The logarithm `τ` of the pure braid generator and the convolution
//! exponential that recovers `q = exp(τ)`.
//!
//! For two strands `P₂ ≅ ℤ` and the degree-`i` invariant of `q^k` is
//! `(k t)^i / i!` with `t = Z₁(q)`. Sending `c·t^i` to `c·τ^i` turns the
//! invariant series of `q^k` into the exponential series of `kτ`, whose
//! limit is `δ_k`. Everything here runs on finite windows; truncation of
//! `τ` at `N`, of the series at `M`, and of the powers at a cap are all
//! reported rather than hidden.

use std::collections::BTreeMap;
use std::f64::consts::E;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::conv::{convolve_fast, Power, Powers};
use crate::error::{Error, Result};
use crate::fourier::{fourier_coefficient, QuadratureSpec};
use crate::seq::CoeffSeq;

/// Probes `-8..=8` unless the caller says otherwise.
pub const DEFAULT_PROBE_RADIUS: i64 = 8;
pub const DEFAULT_CAP_FACTOR: f64 = 2.0;

pub fn default_probes() -> Vec<i64> {
    (-DEFAULT_PROBE_RADIUS..=DEFAULT_PROBE_RADIUS).collect()
}

/// The pure braid `q^k` in `P₂ ≅ ℤ`; negative `k` are powers of `p = q⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidPower(pub i64);

impl BraidPower {
    pub const IDENTITY: Self = Self(0);
    pub const Q: Self = Self(1);
    pub const P: Self = Self(-1);

    pub fn compose(self, other: Self) -> Self {
        Self(self.0 + other.0)
    }

    pub fn inverse(self) -> Self {
        Self(-self.0)
    }

    /// The braid as the unit sequence `δ_k`.
    pub fn as_seq(self) -> CoeffSeq {
        CoeffSeq::delta(self.0)
    }
}

/// Degree-`i` invariant `Z_i(b) = coeff · t^i`; the value space for two
/// strands is one-dimensional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VassilievValue {
    pub degree: usize,
    pub coeff: f64,
}

/// `τ` truncated to the window `-N..=N`: `c_n = (-1)^{n+1}/n`, `c_{-n} = -c_n`, `c_0 = 0`.
pub fn tau(window: usize) -> CoeffSeq {
    CoeffSeq::from_vec_unchecked(
        window,
        (-(window as i64)..=window as i64)
            .map(|n| Complex64::new(tau_coeff(n), 0.0))
            .collect(),
    )
}

fn tau_coeff(n: i64) -> f64 {
    match n {
        0 => 0.0,
        n if n > 0 => (if n % 2 == 1 { 1.0 } else { -1.0 }) / n as f64,
        n => -tau_coeff(-n),
    }
}

/// Laurent polynomial in `q` with exact rational coefficients.
pub type RationalLaurent = BTreeMap<i64, BigRational>;

/// `ln(1 + x)` to order `x^N`, as exact coefficients of `x^1..=x^N`.
fn log1p_series(order: usize) -> Vec<BigRational> {
    (1..=order as i64)
        .map(|n| {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            BigRational::new(BigInt::from(sign), BigInt::from(n))
        })
        .collect()
}

/// `ln(1+q) - ln(1+p)` with both logarithms expanded to order `N`, in
/// exact rational arithmetic. Writing `q = (1+q)/(1+p)` makes this the formal
/// logarithm of `q`.
pub fn log_candidate_exact(window: usize) -> RationalLaurent {
    let mut out = RationalLaurent::new();
    // ln(1+q) contributes to q^n, ln(1+p) to p^n = q^{-n}
    for (k, c) in log1p_series(window).into_iter().enumerate() {
        let n = k as i64 + 1;
        *out.entry(n).or_insert_with(BigRational::zero) += c.clone();
        *out.entry(-n).or_insert_with(BigRational::zero) -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `τ` on `-N..=N` with exact rational coefficients, straight from its
/// defining series `Σ (-1)^{n+1}(q^n - p^n)/n`.
pub fn tau_exact(window: usize) -> RationalLaurent {
    let mut out = RationalLaurent::new();
    for n in 1..=window as i64 {
        let c = BigRational::new(BigInt::from(if n % 2 == 1 { 1 } else { -1 }), BigInt::from(n));
        out.insert(-n, -c.clone());
        out.insert(n, c);
    }
    out
}

/// Converts an exact Laurent polynomial to a floating sequence on the smallest
/// symmetric window that holds it.
pub fn rational_to_seq(poly: &RationalLaurent) -> CoeffSeq {
    let radius = poly
        .keys()
        .map(|k| k.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    CoeffSeq::from_vec_unchecked(
        radius,
        (-(radius as i64)..=radius as i64)
            .map(|n| {
                let v = poly.get(&n).map_or(0.0, |c| {
                    c.to_f64().expect("rational coefficient fits in f64")
                });
                Complex64::new(v, 0.0)
            })
            .collect(),
    )
}

/// Floating-point view of [`log_candidate_exact`].
pub fn log_candidate(window: usize) -> CoeffSeq {
    rational_to_seq(&log_candidate_exact(window)).rewindow(window).0
}

/// `exp(L) · L^{M+1} / (M+1)!`: bound on the ℓ¹ norm, and hence on every
/// coefficient, of the exponential-series remainder after `M` terms when the
/// argument has ℓ¹ norm `L`.
pub fn series_tail_bound(l1: f64, terms: u32) -> f64 {
    if l1 == 0.0 {
        return 0.0;
    }
    let k = terms as f64 + 1.0;
    let log_fact: f64 = (1..=terms + 1).map(|j| (j as f64).ln()).sum();
    (l1 + k * l1.ln() - log_fact).exp()
}

/// `ceil(e · L) + 10` series terms.
///
/// The ℓ¹ bound [`series_tail_bound`] is still of order one here for large
/// `L`. What makes this count sufficient is the sharper coefficient bound
/// `|c_n(a^m)| ≤ (sup_θ |f(θ)|)^m` with `f` the Fourier function of `a`; for
/// `τ_N` the sup stays below `π + 0.6` for every `N`.
pub fn auto_terms(l1: f64) -> u32 {
    (E * l1).ceil() as u32 + 10
}

/// Partial sum of the exponential series with its error accounting.
#[derive(Debug, Clone)]
pub struct SeriesExp {
    pub terms: u32,
    pub seq: CoeffSeq,
    /// [`series_tail_bound`] for the argument's ℓ¹ norm.
    pub tail_bound: f64,
    /// `Σ_m discarded(a^m) / m!`.
    pub discarded: f64,
    /// `Σ_m error_bound(a^m) / m!`, bounding `‖Σ a^m/m! - seq‖₂` from clamping.
    pub clamp_error_bound: f64,
}

/// Partial sums `Σ_{m=0}^{M} w_m · a^m` for every `M` in `terms` (ascending),
/// with `w_m` supplied by `weight(m)`.
fn weighted_partial_sums(
    a: &CoeffSeq,
    cap: usize,
    terms: &[u32],
    mut weight: impl FnMut(u32) -> f64,
) -> Result<Vec<SeriesExp>> {
    let powers = Powers::new(a, cap)?;
    let l1 = a.l1_norm();
    let Some(&last) = terms.iter().max() else {
        return Ok(Vec::new());
    };
    let mut acc = CoeffSeq::zero();
    let mut discarded = 0.0;
    let mut bound = 0.0;
    let mut out = Vec::with_capacity(terms.len());
    for Power {
        exponent,
        seq,
        discarded: d,
        error_bound: b,
    } in powers.take(last as usize + 1)
    {
        let w = weight(exponent);
        acc.add_scaled(&seq, Complex64::new(w, 0.0));
        discarded += d * w.abs();
        bound += b * w.abs();
        for _ in terms.iter().filter(|&&t| t == exponent) {
            out.push(SeriesExp {
                terms: exponent,
                seq: acc.clone(),
                tail_bound: series_tail_bound(l1, exponent),
                discarded,
                clamp_error_bound: bound,
            });
        }
    }
    Ok(out)
}

fn exp_weights() -> impl FnMut(u32) -> f64 {
    let mut w = 1.0;
    move |m| {
        if m > 0 {
            w /= m as f64;
        }
        w
    }
}

/// `Σ_{m=0}^{M} a^m / m!` with powers clamped to radius `cap`.
pub fn exp_seq(a: &CoeffSeq, terms: u32, cap: usize) -> Result<SeriesExp> {
    let mut sums = weighted_partial_sums(a, cap, &[terms], exp_weights())?;
    Ok(sums.pop().expect("one partial sum requested"))
}

/// Errors of a sequence against the target `δ_k` on a probe set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeErrors {
    /// `|c_k - 1|`.
    pub err_target: f64,
    /// `max |c_n|` over probes `n ≠ k`.
    pub err_off: f64,
    /// ℓ² distance to `δ_k` over the probes together with `k`.
    pub l2_err: f64,
}

pub fn probe_errors(seq: &CoeffSeq, target: i64, probes: &[i64]) -> ProbeErrors {
    let err_target = (seq.get(target) - 1.0).norm();
    let err_off = probes
        .iter()
        .filter(|&&n| n != target)
        .map(|&n| seq.get(n).norm())
        .fold(0.0, f64::max);
    let mut indices: Vec<i64> = probes.to_vec();
    indices.push(target);
    indices.sort_unstable();
    indices.dedup();
    ProbeErrors {
        err_target,
        err_off,
        l2_err: seq.l2_distance_on(&CoeffSeq::delta(target), &indices),
    }
}

/// Number of series terms: automatic from the ℓ¹ norm, or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terms {
    Auto,
    List(Vec<u32>),
}

impl Terms {
    fn resolve(&self, l1: f64) -> Vec<u32> {
        let mut ms = match self {
            Terms::Auto => vec![auto_terms(l1)],
            Terms::List(ms) => ms.clone(),
        };
        ms.sort_unstable();
        ms.dedup();
        ms
    }
}

/// One `(N, M)` cell of a convergence study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub window: usize,
    #[serde(rename = "M")]
    pub terms: u32,
    pub err_c1: f64,
    pub err_off: f64,
    pub l2_err: f64,
    pub discarded_mass: f64,
    /// ℓ¹ norm of the exponent; rows with `M > l1` are past the series hump.
    #[serde(skip)]
    pub l1: f64,
}

/// Which monotone trend a pair of rows broke.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendViolation {
    pub column: &'static str,
    pub earlier: (usize, u32),
    pub later: (usize, u32),
    pub earlier_value: f64,
    pub later_value: f64,
}

impl std::fmt::Display for TrendViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} rises from {:e} at (N={}, M={}) to {:e} at (N={}, M={})",
            self.column,
            self.earlier_value,
            self.earlier.0,
            self.earlier.1,
            self.later_value,
            self.later.0,
            self.later.1
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    fn columns(row: &ConvergenceRow) -> [(&'static str, f64); 3] {
        [
            ("err_c1", row.err_c1),
            ("err_off", row.err_off),
            ("l2_err", row.l2_err),
        ]
    }

    /// Checks the two monotone trends:
    /// - for fixed `N`, errors do not increase with `M` once `M > ‖τ_N‖₁`;
    /// - among rows with `M ≥ auto_terms(‖τ_N‖₁)`, keeping the largest `M`
    ///   per `N`, errors strictly decrease as `N` grows.
    pub fn trend_violations(&self) -> Vec<TrendViolation> {
        let mut out = Vec::new();
        let mut by_window: BTreeMap<usize, Vec<&ConvergenceRow>> = BTreeMap::new();
        for row in &self.rows {
            by_window.entry(row.window).or_default().push(row);
        }
        for rows in by_window.values() {
            let settled: Vec<_> = rows.iter().filter(|r| r.terms as f64 > r.l1).collect();
            for pair in settled.windows(2) {
                for ((name, a), (_, b)) in Self::columns(pair[0])
                    .into_iter()
                    .zip(Self::columns(pair[1]))
                {
                    if b > a {
                        out.push(violation(name, pair[0], pair[1], a, b));
                    }
                }
            }
        }
        let converged: Vec<&ConvergenceRow> = by_window
            .values()
            .filter_map(|rows| {
                rows.iter()
                    .filter(|r| r.terms >= auto_terms(r.l1))
                    .max_by_key(|r| r.terms)
                    .copied()
            })
            .collect();
        for pair in converged.windows(2) {
            for ((name, a), (_, b)) in Self::columns(pair[0])
                .into_iter()
                .zip(Self::columns(pair[1]))
            {
                if b >= a {
                    out.push(violation(name, pair[0], pair[1], a, b));
                }
            }
        }
        out
    }
}

fn violation(
    column: &'static str,
    a: &ConvergenceRow,
    b: &ConvergenceRow,
    av: f64,
    bv: f64,
) -> TrendViolation {
    TrendViolation {
        column,
        earlier: (a.window, a.terms),
        later: (b.window, b.terms),
        earlier_value: av,
        later_value: bv,
    }
}

/// Cap for a window and cap factor, `ceil(factor · N)`.
pub fn cap_for(window: usize, cap_factor: f64) -> Result<usize> {
    if !(cap_factor.is_finite() && cap_factor > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cap factor must be positive, got {cap_factor}"
        )));
    }
    Ok((cap_factor * window as f64).ceil() as usize)
}

fn check_probes(probes: &[i64], cap: usize) -> Result<()> {
    match probes.iter().find(|p| p.unsigned_abs() as usize > cap) {
        Some(&probe) => Err(Error::ProbeOutsideWindow { probe, cap }),
        None => Ok(()),
    }
}

/// Convergence study of `exp(τ_N)` toward `q = δ_1`, one row per `(N, M)`.
/// Windows run in parallel; rows come back sorted by `(N, M)`.
pub fn verify_exp_tau(
    windows: &[usize],
    terms: &Terms,
    probes: &[i64],
    cap_factor: f64,
) -> Result<ConvergenceReport> {
    if windows.contains(&0) {
        return Err(Error::InvalidArgument("window radii must be positive".into()));
    }
    let per_window: Vec<Vec<ConvergenceRow>> = windows
        .par_iter()
        .map(|&window| {
            let cap = cap_for(window, cap_factor)?;
            check_probes(probes, cap)?;
            let t = tau(window);
            let l1 = t.l1_norm();
            let sums = weighted_partial_sums(&t, cap, &terms.resolve(l1), exp_weights())?;
            Ok(sums
                .into_iter()
                .map(|s| {
                    let e = probe_errors(&s.seq, 1, probes);
                    ConvergenceRow {
                        window,
                        terms: s.terms,
                        err_c1: e.err_target,
                        err_off: e.err_off,
                        l2_err: e.l2_err,
                        discarded_mass: s.discarded,
                        l1,
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<ConvergenceRow> = per_window.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.window, r.terms));
    rows.dedup_by(|a, b| (a.window, a.terms) == (b.window, b.terms));
    Ok(ConvergenceReport { rows })
}

/// `Z_i(q^k) = (k t)^i / i!`, i.e. `coeff = k^i / i!`.
pub fn vassiliev_z(b: BraidPower, degree: usize) -> VassilievValue {
    let k = b.0 as f64;
    let coeff = (1..=degree).fold(1.0, |acc, j| acc * k / j as f64);
    VassilievValue { degree, coeff }
}

/// `ψ_i(c·t^i) = c·τ^i`, with `τ` on window `N` and powers clamped at `cap`.
pub fn psi(degree: usize, v: VassilievValue, window: usize, cap: usize) -> Result<CoeffSeq> {
    let power = crate::conv::power(&tau(window), degree_u32(degree)?, cap)?;
    psi_of_power(degree, v, &power.seq)
}

fn psi_of_power(degree: usize, v: VassilievValue, tau_power: &CoeffSeq) -> Result<CoeffSeq> {
    if v.degree != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            got: v.degree,
        });
    }
    Ok(tau_power.scale(Complex64::new(v.coeff, 0.0)))
}

fn degree_u32(degree: usize) -> Result<u32> {
    u32::try_from(degree).map_err(|_| Error::InvalidArgument(format!("degree {degree} too large")))
}

/// Outcome of comparing `ψ_{i+j}(t^{i+j})` with `ψ_i(t^i) ∗ ψ_j(t^j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiCheck {
    /// ℓ² discrepancy on the probe window `-8..=8`.
    pub discrepancy: f64,
    /// Clamping loss: a bound on the full ℓ² discrepancy in exact arithmetic,
    /// `B_{i+j} + B_i L^j + L^i B_j` with `B` the per-power clamp error bounds
    /// and `L = ‖τ_N‖₁`. Zero when nothing was clamped.
    pub clamping_loss: f64,
}

/// Multiplicativity of `ψ` on the generators `t^i`, `t^j`.
pub fn check_psi_multiplicative(i: usize, j: usize, window: usize, cap: usize) -> Result<PsiCheck> {
    let t = tau(window);
    let l1 = t.l1_norm();
    let (iu, ju) = (degree_u32(i)?, degree_u32(j)?);
    let powers: Vec<Power> = Powers::new(&t, cap)?
        .take((iu + ju) as usize + 1)
        .collect();
    let unit = |d: usize| VassilievValue {
        degree: d,
        coeff: 1.0,
    };
    let lhs = psi_of_power(i + j, unit(i + j), &powers[i + j].seq)?;
    let left = psi_of_power(i, unit(i), &powers[i].seq)?;
    let right = psi_of_power(j, unit(j), &powers[j].seq)?;
    // a zero-degree factor is δ_0; multiplying by it is the identity
    let rhs = if i == 0 {
        right
    } else if j == 0 {
        left
    } else {
        convolve_fast(&left, &right)
    };
    let probes = default_probes();
    let discrepancy = lhs.l2_distance_on(&rhs, &probes);
    let clamping_loss = powers[i + j].error_bound
        + powers[i].error_bound * l1.powi(ju as i32)
        + l1.powi(iu as i32) * powers[j].error_bound;
    Ok(PsiCheck {
        discrepancy,
        clamping_loss,
    })
}

/// `Σ_{i=0}^{M} ψ_i(Z_i(b))`, the invariant series of `b = q^k` pushed into
/// ℓ²(ℤ). Equals the exponential series of `kτ`; the target is `δ_k`.
pub fn reconstruct(b: BraidPower, terms: u32, window: usize, cap: usize) -> Result<SeriesExp> {
    let t = tau(window);
    let l1 = b.0.unsigned_abs() as f64 * t.l1_norm();
    let mut acc = CoeffSeq::zero();
    let mut discarded = 0.0;
    let mut bound = 0.0;
    for p in Powers::new(&t, cap)?.take(terms as usize + 1) {
        let degree = p.exponent as usize;
        let v = vassiliev_z(b, degree);
        let term = psi_of_power(degree, v, &p.seq)?;
        acc.add_scaled(&term, Complex64::new(1.0, 0.0));
        // clamp errors of τ^i scale by |k|^i / i!
        discarded += p.discarded * v.coeff.abs();
        bound += p.error_bound * v.coeff.abs();
    }
    Ok(SeriesExp {
        terms,
        seq: acc,
        tail_bound: series_tail_bound(l1, terms),
        discarded,
        clamp_error_bound: bound,
    })
}

/// Default number of terms for reconstructing `q^k` from `τ_N`.
pub fn auto_terms_for(b: BraidPower, window: usize) -> u32 {
    auto_terms(b.0.unsigned_abs() as f64 * tau(window).l1_norm())
}

/// Fourier function `Σ_n a_n e^{inθ}` of a finitely supported sequence.
pub fn fourier_function(a: &CoeffSeq, theta: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, theta);
    // Horner in z from the top index down, then shift by z^{-N}
    let acc = a
        .coeffs()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    acc * Complex64::from_polar(1.0, -(a.radius() as f64) * theta)
}

/// Quadrature oracle for `c_n(exp(a))`: the coefficient of the Fourier
/// function `exp(Σ a_k e^{ikθ})`, with no series truncation and no clamping.
/// Integrand oscillations come from `a` as well as from `e^{-inθ}`, so the
/// panel count is raised to cover frequencies up to the radius of `a`.
pub fn exp_coefficient_oracle(a: &CoeffSeq, n: i64, spec: &QuadratureSpec) -> Result<Complex64> {
    spec.validate()?;
    let widened = QuadratureSpec {
        panels: spec.panels.max(2 * (a.radius() + n.unsigned_abs() as usize) + 2),
        ..*spec
    };
    fourier_coefficient(n, &widened, |theta| fourier_function(a, theta).exp()).map_err(
        |(_, diff)| Error::QuadratureNotConverged {
            n,
            m: 0,
            diff,
            tolerance: spec.tolerance,
        },
    )
}

/// The sine series `2 Σ_{k≤N} (-1)^{k+1} sin(kθ)/k`, which is `τ_N`'s Fourier
/// function divided by `i`; it tends to `θ` on `(-π, π)`.
pub fn sawtooth_partial_sum(window: usize, theta: f64) -> f64 {
    (1..=window)
        .map(|k| {
            let sign = if k % 2 == 1 { 2.0 } else { -2.0 };
            sign * (k as f64 * theta).sin() / k as f64
        })
        .sum()
}
