//! Radial and polar integration kernels.
//!
//! Radial integrals use a panel-composite Gauss–Legendre rule on `[0, r_max]`;
//! the polar kernel adds a trapezoidal rule in φ, which converges spectrally
//! for smooth periodic integrands. Every result is accepted only after the
//! node count has been doubled once and the two estimates agree to
//! `rel_tol`.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation and node counts for every numeric integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Radial truncation, in the same units as the mode waists.
    pub r_max: f64,
    /// Gauss–Legendre nodes per panel.
    pub radial_nodes: usize,
    pub panels: usize,
    /// Trapezoidal nodes in φ (2D path only).
    pub azimuthal_nodes: usize,
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            r_max: 8.0,
            radial_nodes: 32,
            panels: 8,
            azimuthal_nodes: 256,
            rel_tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::config(
                "r_max",
                format!("must be positive, got {}", self.r_max),
            ));
        }
        if self.radial_nodes == 0 {
            return Err(Error::config("radial_nodes", "must be at least 1"));
        }
        if self.panels == 0 {
            return Err(Error::config("panels", "must be at least 1"));
        }
        if self.azimuthal_nodes == 0 {
            return Err(Error::config("azimuthal_nodes", "must be at least 1"));
        }
        if !(self.rel_tol >= 1e-12 && self.rel_tol.is_finite()) {
            return Err(Error::config(
                "rel_tol",
                format!("must be >= 1e-12, got {}", self.rel_tol),
            ));
        }
        Ok(())
    }

    /// Same configuration with radial and azimuthal node counts doubled.
    pub fn doubled(&self) -> Self {
        QuadratureConfig {
            radial_nodes: 2 * self.radial_nodes,
            azimuthal_nodes: 2 * self.azimuthal_nodes,
            ..*self
        }
    }

    pub fn radial_rule(&self) -> RadialRule {
        RadialRule::new(self.r_max, self.panels, self.radial_nodes)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // P_n(x) and P_{n-1}(x) by recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
            x = 0.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule on `[0, r_max]`, nodes ascending.
#[derive(Debug, Clone)]
pub struct RadialRule {
    pub r_max: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialRule {
    pub fn new(r_max: f64, panels: usize, nodes_per_panel: usize) -> Self {
        let (x, w) = gauss_legendre(nodes_per_panel);
        let h = r_max / panels as f64;
        let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
        let mut weights = Vec::with_capacity(panels * nodes_per_panel);
        for p in 0..panels {
            let a = p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(a + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        RadialRule {
            r_max,
            nodes,
            weights,
        }
    }

    /// Weighted sum over pre-sampled integrand values.
    pub fn sum<T: QuadValue>(&self, values: &[T]) -> T {
        values
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (v, w)| acc + *v * *w)
    }

    pub fn apply<T: QuadValue>(&self, f: impl Fn(f64) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (r, w)| acc + f(*r) * *w)
    }

    fn apply_with_abs<T: QuadValue>(&self, f: impl Fn(f64) -> T) -> (T, f64) {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold((T::zero(), 0.0), |(acc, abs), (r, w)| {
                let v = f(*r);
                (acc + v * *w, abs + v.magnitude() * w)
            })
    }
}

/// Scalar types the kernels can integrate.
pub trait QuadValue: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Accept `fine` if it agrees with `coarse` to `rel_tol` on the scale of the
/// integral, where the scale is the larger of `|fine|` and `∫|f|`.
fn check_converged(fine: f64, l1: f64, difference: f64, rel_tol: f64) -> Result<()> {
    let tolerance = rel_tol * fine.max(l1);
    if difference <= tolerance {
        Ok(())
    } else {
        Err(Error::NonConvergence {
            difference,
            tolerance,
        })
    }
}

/// `∫_0^{r_max} f(r) dr`; `f` is the full integrand including the Jacobian `r`.
pub fn integrate_radial<T: QuadValue + Into<Complex64>>(
    f: impl Fn(f64) -> T,
    quad: &QuadratureConfig,
) -> Result<Complex64> {
    let (coarse, _) = quad.radial_rule().apply_with_abs(&f);
    let (fine, l1) = quad.doubled().radial_rule().apply_with_abs(&f);
    let (coarse, fine): (Complex64, Complex64) = (coarse.into(), fine.into());
    check_converged(fine.norm(), l1, (fine - coarse).norm(), quad.rel_tol)?;
    Ok(fine)
}

/// Same as [`integrate_radial`] for a pair of pre-built rules, avoiding the
/// node construction when many integrals share one configuration.
pub fn integrate_radial_with<T: QuadValue + Into<Complex64>>(
    f: impl Fn(f64) -> T,
    coarse_rule: &RadialRule,
    fine_rule: &RadialRule,
    rel_tol: f64,
) -> Result<Complex64> {
    let (coarse, _) = coarse_rule.apply_with_abs(&f);
    let (fine, l1) = fine_rule.apply_with_abs(&f);
    let (coarse, fine): (Complex64, Complex64) = (coarse.into(), fine.into());
    check_converged(fine.norm(), l1, (fine - coarse).norm(), rel_tol)?;
    Ok(fine)
}

fn polar_sum(
    f: &impl Fn(f64, f64) -> Complex64,
    rule: &RadialRule,
    azimuthal_nodes: usize,
) -> (Complex64, f64) {
    let h = 2.0 * PI / azimuthal_nodes as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for (r, w) in rule.nodes.iter().zip(&rule.weights) {
        let mut ring = Complex64::new(0.0, 0.0);
        let mut ring_abs = 0.0;
        for j in 0..azimuthal_nodes {
            let v = f(*r, j as f64 * h);
            ring += v;
            ring_abs += v.norm();
        }
        total += ring * (w * h);
        abs += ring_abs * w * h;
    }
    (total, abs)
}

/// `∫_0^{r_max} ∫_0^{2π} f(r, φ) dφ dr` for 2π-periodic `f`; as with the
/// radial kernel, `f` carries its own Jacobian.
pub fn integrate_polar_2d(
    f: impl Fn(f64, f64) -> Complex64,
    quad: &QuadratureConfig,
) -> Result<Complex64> {
    let (coarse, _) = polar_sum(&f, &quad.radial_rule(), quad.azimuthal_nodes);
    let fine_quad = quad.doubled();
    let (fine, l1) = polar_sum(&f, &fine_quad.radial_rule(), fine_quad.azimuthal_nodes);
    check_converged(fine.norm(), l1, (fine - coarse).norm(), quad.rel_tol)?;
    Ok(fine)
}
