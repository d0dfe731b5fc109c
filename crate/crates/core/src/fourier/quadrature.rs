//! Composite Gauss–Legendre quadrature on equal panels.

use num_complex::Complex64;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `degree` nodes, found by Newton iteration on `P_degree`
    /// started from the Tricomi approximation of each root.
    pub fn new(degree: usize) -> Self {
        assert!(degree >= 1, "Gauss-Legendre rule needs at least one node");
        let n = degree;
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f` with `panels` equal subintervals.
    pub fn integrate_panels(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Complex64 {
        let width = (b - a) / panels as f64;
        let half = 0.5 * width;
        let mut total = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            let mut panel = Complex64::new(0.0, 0.0);
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                panel += f(mid + half * x) * w;
            }
            total += panel * half;
        }
        total
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [2, 3, 8, 16, 33] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn two_point_rule() {
        let rule = GaussLegendre::new(2);
        let r = 1.0 / 3f64.sqrt();
        assert!((rule.nodes()[0] + r).abs() < 1e-15);
        assert!((rule.nodes()[1] - r).abs() < 1e-15);
        assert!((rule.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::new(16);
        for k in 0..32u32 {
            let got = rule.integrate_panels(-1.0, 1.0, 1, |x| Complex64::new(x.powi(k as i32), 0.0));
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got.re - want).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn panels_resolve_oscillation() {
        let rule = GaussLegendre::new(16);
        // ∫_0^π sin(40x) dx = (1 - cos 40π)/40 = 0
        let got = rule.integrate_panels(0.0, std::f64::consts::PI, 42, |x| {
            Complex64::new((40.0 * x).sin(), 0.0)
        });
        assert!(got.norm() < 1e-13);
    }
}
