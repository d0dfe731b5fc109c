//! Two-sided coefficient sequences on a symmetric window `-N..=N`.
//!
//! A [`CoeffSeq`] stands for the formal sum `Σ c_n q^n` with all
//! coefficients outside the window equal to zero. Every operation aligns
//! coefficients by index, never by array position, so sequences of
//! different radii mix freely.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Finitely supported element of ℓ²(ℤ), stored on the window `-radius..=radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    radius: usize,
    coeffs: Vec<Complex64>,
}

impl CoeffSeq {
    /// Builds a sequence from `2 * radius + 1` coefficients ordered from
    /// index `-radius` up to `radius`.
    pub fn from_coeffs(radius: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = 2 * radius + 1;
        if coeffs.len() != expected {
            return Err(Error::WindowLength {
                radius,
                len: coeffs.len(),
                expected,
            });
        }
        if let Some(pos) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                index: pos as i64 - radius as i64,
            });
        }
        Ok(Self { radius, coeffs })
    }

    /// Builds a sequence from a coefficient function evaluated on `-radius..=radius`.
    pub fn from_fn(radius: usize, mut f: impl FnMut(i64) -> Complex64) -> Result<Self> {
        let r = radius as i64;
        Self::from_coeffs(radius, (-r..=r).map(&mut f).collect())
    }

    pub(crate) fn from_vec_unchecked(radius: usize, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), 2 * radius + 1);
        Self { radius, coeffs }
    }

    pub fn zeros(radius: usize) -> Self {
        Self {
            radius,
            coeffs: vec![ZERO; 2 * radius + 1],
        }
    }

    /// The zero sequence on the trivial window.
    pub fn zero() -> Self {
        Self::zeros(0)
    }

    /// The unit sequence at index `k`, i.e. the braid `q^k`.
    pub fn delta(k: i64) -> Self {
        let radius = k.unsigned_abs() as usize;
        let mut s = Self::zeros(radius);
        s.coeffs[(k + radius as i64) as usize] = ONE;
        s
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Coefficients ordered from index `-radius` to `radius`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `c_n`; zero outside the window.
    pub fn get(&self, n: i64) -> Complex64 {
        let r = self.radius as i64;
        if n < -r || n > r {
            ZERO
        } else {
            self.coeffs[(n + r) as usize]
        }
    }

    /// `(index, coefficient)` pairs over the window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let r = self.radius as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(pos, &c)| (pos as i64 - r, c))
    }

    /// Re-embeds the sequence into a window of the given radius. Growing pads
    /// with zeros; shrinking discards the outer coefficients, whose ℓ² mass
    /// is returned alongside.
    pub fn rewindow(&self, radius: usize) -> (Self, f64) {
        if radius >= self.radius {
            let pad = radius - self.radius;
            let mut coeffs = Vec::with_capacity(2 * radius + 1);
            coeffs.resize(pad, ZERO);
            coeffs.extend_from_slice(&self.coeffs);
            coeffs.resize(2 * radius + 1, ZERO);
            (Self { radius, coeffs }, 0.0)
        } else {
            let cut = self.radius - radius;
            let len = self.coeffs.len();
            let dropped: f64 = self.coeffs[..cut]
                .iter()
                .chain(&self.coeffs[len - cut..])
                .map(|c| c.norm_sqr())
                .sum();
            let coeffs = self.coeffs[cut..len - cut].to_vec();
            (Self { radius, coeffs }, dropped.sqrt())
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            radius: self.radius,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// `self += s * other`, growing the window when `other` is wider.
    pub fn add_scaled(&mut self, other: &Self, s: Complex64) {
        if other.radius > self.radius {
            *self = self.rewindow(other.radius).0;
        }
        let offset = self.radius - other.radius;
        for (dst, &c) in self.coeffs[offset..].iter_mut().zip(&other.coeffs) {
            *dst += c * s;
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let radius = self.radius.max(other.radius);
        let r = radius as i64;
        let coeffs = (-r..=r).map(|n| f(self.get(n), other.get(n))).collect();
        Self { radius, coeffs }
    }

    /// `Σ_n a_n · conj(b_n)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let r = self.radius.min(other.radius) as i64;
        (-r..=r).map(|n| self.get(n) * other.get(n).conj()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Largest coefficient modulus.
    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise distance, with implicit zeros outside either window.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).sup_norm()
    }

    /// Coefficientwise equality up to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// ℓ² distance to `other` restricted to the given indices.
    pub fn l2_distance_on(&self, other: &Self, indices: &[i64]) -> f64 {
        indices
            .iter()
            .map(|&n| (self.get(n) - other.get(n)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest imaginary part in modulus.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}
