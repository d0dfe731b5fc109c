//! Convolution on ℓ²(ℤ): the group-ring product of `Σ a_n q^n` and `Σ b_n q^n`.
//!
//! [`convolve_direct`] is the quadratic reference. [`convolve_fast`] zero-pads
//! both inputs to a power-of-two length of at least `2(N_a + N_b) + 1` and
//! multiplies spectra, which leaves no room for cyclic wrap-around.
//! [`power`] and [`Powers`] iterate the fast product under a window cap and
//! track what the cap throws away.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::seq::CoeffSeq;

/// Exact product of two finitely supported sequences, `c_n = Σ_k a_k b_{n-k}`.
pub fn convolve_direct(a: &CoeffSeq, b: &CoeffSeq) -> CoeffSeq {
    let radius = a.radius() + b.radius();
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * radius + 1];
    // array position i in `a` is index i - N_a, so positions simply add
    for (i, &x) in a.coeffs().iter().enumerate() {
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &y) in b.coeffs().iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    CoeffSeq::from_vec_unchecked(radius, out)
}

/// FFT size for a product of radii `ra` and `rb`.
pub fn transform_len(ra: usize, rb: usize) -> usize {
    (2 * (ra + rb) + 1).next_power_of_two()
}

/// Same contract as [`convolve_direct`], computed through a zero-padded FFT.
pub fn convolve_fast(a: &CoeffSeq, b: &CoeffSeq) -> CoeffSeq {
    let radius = a.radius() + b.radius();
    let out_len = 2 * radius + 1;
    let len = transform_len(a.radius(), b.radius());

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);

    let mut fa = vec![Complex64::new(0.0, 0.0); len];
    fa[..a.coeffs().len()].copy_from_slice(a.coeffs());
    let mut fb = vec![Complex64::new(0.0, 0.0); len];
    fb[..b.coeffs().len()].copy_from_slice(b.coeffs());

    forward.process(&mut fa);
    forward.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inverse.process(&mut fa);

    let norm = 1.0 / len as f64;
    fa.truncate(out_len);
    for x in &mut fa {
        *x *= norm;
    }
    CoeffSeq::from_vec_unchecked(radius, fa)
}

/// A clamped convolution power together with its truncation accounting.
#[derive(Debug, Clone)]
pub struct Power {
    pub exponent: u32,
    pub seq: CoeffSeq,
    /// Sum over all products of the ℓ² norm of the coefficients cut off by the cap.
    pub discarded: f64,
    /// Rigorous bound on `‖a^m - seq‖₂` in exact arithmetic: each cut is
    /// propagated through later products by Young's inequality
    /// `‖e ∗ a‖₂ ≤ ‖e‖₂ ‖a‖₁`.
    pub error_bound: f64,
}

/// Successive clamped powers `a^0, a^1, a^2, …`, each product cut back to
/// radius `cap`.
#[derive(Debug, Clone)]
pub struct Powers<'a> {
    base: &'a CoeffSeq,
    base_l1: f64,
    cap: usize,
    current: Option<Power>,
}

impl<'a> Powers<'a> {
    pub fn new(base: &'a CoeffSeq, cap: usize) -> Result<Self> {
        if cap < base.radius() {
            return Err(Error::CapTooSmall {
                cap,
                radius: base.radius(),
            });
        }
        Ok(Self {
            base,
            base_l1: base.l1_norm(),
            cap,
            current: None,
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

impl Iterator for Powers<'_> {
    type Item = Power;

    fn next(&mut self) -> Option<Power> {
        let next = match &self.current {
            None => Power {
                exponent: 0,
                seq: CoeffSeq::delta(0),
                discarded: 0.0,
                error_bound: 0.0,
            },
            Some(p) if p.exponent == 0 => Power {
                exponent: 1,
                seq: self.base.clone(),
                discarded: 0.0,
                error_bound: 0.0,
            },
            Some(p) => {
                let full = convolve_fast(&p.seq, self.base);
                let (seq, dropped) = if full.radius() > self.cap {
                    full.rewindow(self.cap)
                } else {
                    (full, 0.0)
                };
                Power {
                    exponent: p.exponent + 1,
                    seq,
                    discarded: p.discarded + dropped,
                    error_bound: p.error_bound * self.base_l1 + dropped,
                }
            }
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

/// `a^m` by iterated [`convolve_fast`], clamped to radius `cap` after each
/// product. `power(a, 0, cap)` is `delta(0)`.
pub fn power(a: &CoeffSeq, m: u32, cap: usize) -> Result<Power> {
    Ok(Powers::new(a, cap)?
        .nth(m as usize)
        .expect("power iterator is infinite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braidexp::tau;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_seq(rng: &mut impl Rng, radius: usize) -> CoeffSeq {
        CoeffSeq::from_fn(radius, |_| {
            // uniform in the unit disc
            loop {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if z.norm_sqr() <= 1.0 {
                    return z;
                }
            }
        })
        .unwrap()
    }

    #[test]
    fn deltas_follow_group_law() {
        for i in -4..=4 {
            for j in -4..=4 {
                let d = convolve_direct(&CoeffSeq::delta(i), &CoeffSeq::delta(j));
                assert!(d.approx_eq(&CoeffSeq::delta(i + j), 0.0));
                let f = convolve_fast(&CoeffSeq::delta(i), &CoeffSeq::delta(j));
                assert!(f.approx_eq(&CoeffSeq::delta(i + j), 1e-15));
            }
        }
        let id = convolve_fast(&CoeffSeq::delta(3), &CoeffSeq::delta(-3));
        assert!(id.approx_eq(&CoeffSeq::delta(0), 1e-15));
    }

    #[test]
    fn identity_and_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_seq(&mut rng, 9);
        assert!(convolve_direct(&a, &CoeffSeq::delta(0)).approx_eq(&a, 0.0));
        assert!(convolve_fast(&CoeffSeq::zero(), &a).approx_eq(&CoeffSeq::zero(), 0.0));
    }

    #[test]
    fn tau_squared_constant_term() {
        for n in [16usize, 256, 2048] {
            let t = tau(n);
            let c0 = convolve_direct(&t, &t).get(0);
            // antisymmetry: c_0(τ²) = Σ_k τ_k τ_{-k} = -Σ_{0<|k|≤N} k^{-2}
            let basel: f64 = (1..=n).map(|k| 2.0 / (k as f64 * k as f64)).sum();
            assert!((c0.re + basel).abs() < 1e-12);
            let exact = -std::f64::consts::PI.powi(2) / 3.0;
            assert!((c0.re - exact).abs() <= 2.0 / n as f64);
            assert!(c0.re > exact);
        }
    }

    #[test]
    fn fast_matches_direct_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..20 {
            let a = { let r = rng.gen_range(0..300); random_seq(&mut rng, r) };
            let b = { let r = rng.gen_range(0..300); random_seq(&mut rng, r) };
            let tol = 1e-12 * (1.0 + a.l1_norm() * b.l1_norm());
            let d = convolve_direct(&a, &b);
            let f = convolve_fast(&a, &b);
            assert_eq!(d.radius(), f.radius());
            assert!(d.max_abs_diff(&f) <= tol);
        }
    }

    #[test]
    fn commutative_and_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = { let r = rng.gen_range(0..40); random_seq(&mut rng, r) };
            let b = { let r = rng.gen_range(0..40); random_seq(&mut rng, r) };
            let c = { let r = rng.gen_range(0..40); random_seq(&mut rng, r) };
            assert!(convolve_fast(&a, &b).max_abs_diff(&convolve_fast(&b, &a)) <= 1e-12);
            let left = convolve_fast(&convolve_fast(&a, &b), &c);
            let right = convolve_fast(&a, &convolve_fast(&b, &c));
            assert!(left.max_abs_diff(&right) <= 1e-10);
        }
    }

    #[test]
    fn coefficients_match_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_seq(&mut rng, 5);
        let b = random_seq(&mut rng, 3);
        let f = convolve_fast(&a, &b);
        for n in -8..=8i64 {
            let by_def: Complex64 = (-5..=5).map(|k| a.get(k) * b.get(n - k)).sum();
            assert!((f.get(n) - by_def).norm() < 1e-14);
        }
    }

    #[test]
    fn transform_length_covers_linear_product() {
        assert_eq!(transform_len(0, 0), 1);
        assert_eq!(transform_len(1, 1), 8);
        assert_eq!(transform_len(2048, 2048), 16384);
        assert_eq!(transform_len(4096, 8192), 32768);
    }

    #[test]
    fn power_edge_cases() {
        let t = tau(8);
        let p0 = power(&t, 0, 8).unwrap();
        assert!(p0.seq.approx_eq(&CoeffSeq::delta(0), 0.0));
        assert_eq!(
            power(&t, 2, 7).unwrap_err(),
            Error::CapTooSmall { cap: 7, radius: 8 }
        );
        for m in 0..6 {
            let p = power(&CoeffSeq::delta(1), m, 6).unwrap();
            assert!(p.seq.approx_eq(&CoeffSeq::delta(m as i64), 1e-15));
            assert_eq!(p.discarded, 0.0);
        }
    }

    #[test]
    fn unclamped_square_matches_direct() {
        let n = 300;
        let t = tau(n);
        let p = power(&t, 2, 4 * n).unwrap();
        assert_eq!(p.discarded, 0.0);
        assert!(p.seq.max_abs_diff(&convolve_direct(&t, &t)) < 1e-13);
    }

    #[test]
    fn clamping_loss_bounds_the_error() {
        let n = 64;
        let t = tau(n);
        let exact = power(&t, 4, 4 * n).unwrap();
        assert_eq!(exact.error_bound, 0.0);
        let clamped = power(&t, 4, n + n / 2).unwrap();
        assert!(clamped.discarded > 0.0);
        assert!(clamped.error_bound >= clamped.discarded);
        assert_eq!(clamped.seq.radius(), n + n / 2);
        let err = exact.seq.sub(&clamped.seq).l2_norm();
        assert!(err <= clamped.error_bound, "{err} > {}", clamped.error_bound);
    }
}
