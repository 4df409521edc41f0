//! Numerical Fourier-lens transform, used as an independent check of the
//! closed-form perfect-vortex profile.
//!
//! A thin lens of focal length `f` maps a field `ψ(ρ, θ)` in its front focal
//! plane to
//!
//! ```text
//! ψ(r, φ) = k / (i 2π f) ∫∫ ψ(ρ, θ) exp(-i (k/f) ρ r cos(θ - φ)) ρ dρ dθ
//! ```
//!
//! For a Bessel-Gauss source `J_l(k_r ρ) e^{ilθ} e^{-ρ²/w²}` the result is
//! the practical POV ring with `r0 = k_r f / k`, `w0 = 2f / (k w)` and
//! amplitude `w / w0`, up to a global phase.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{ModeFamily, ModeSpec};
use crate::quadrature::{QuadratureConfig, RadialRule};

/// Focal length and total wavenumber of the transforming lens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lens {
    pub focal_length: f64,
    pub wavenumber: f64,
}

impl Default for Lens {
    fn default() -> Self {
        Lens {
            focal_length: 1.0,
            wavenumber: 8.0,
        }
    }
}

/// POV mode produced by a lens from a Bessel-Gauss source, with its amplitude
/// prefactor `w / w0`.
pub fn pov_from_bessel_gauss(source: &ModeSpec, lens: &Lens) -> Result<(ModeSpec, f64)> {
    if source.family != ModeFamily::BesselGauss {
        return Err(Error::InvalidMode(format!(
            "lens construction needs a Bessel-Gauss source, got {}",
            source.family.label()
        )));
    }
    source.validate()?;
    let ratio = lens.focal_length / lens.wavenumber;
    let r0 = source.k_r * ratio;
    let w0 = 2.0 * ratio / source.w0;
    Ok((ModeSpec::pov(source.l, r0, w0), source.w0 / w0))
}

/// Source sampled once on a polar tensor grid.
struct SampledSource {
    /// (ρ, radial weight × ρ × azimuthal step, samples over θ)
    rings: Vec<(f64, f64, Vec<Complex64>)>,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    abs_integral: f64,
}

impl SampledSource {
    fn new(
        source: &(impl Fn(f64, f64) -> Complex64 + Sync),
        rule: &RadialRule,
        azimuthal_nodes: usize,
    ) -> Self {
        let h = 2.0 * PI / azimuthal_nodes as f64;
        let thetas: Vec<f64> = (0..azimuthal_nodes).map(|j| j as f64 * h).collect();
        let rings: Vec<(f64, f64, Vec<Complex64>)> = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map(|(&rho, &w)| {
                let samples: Vec<Complex64> = thetas.iter().map(|&t| source(rho, t)).collect();
                (rho, w * rho * h, samples)
            })
            .collect();
        let abs_integral = rings
            .iter()
            .map(|(_, w, s)| w * s.iter().map(|v| v.norm()).sum::<f64>())
            .sum();
        SampledSource {
            rings,
            cos_theta: thetas.iter().map(|t| t.cos()).collect(),
            sin_theta: thetas.iter().map(|t| t.sin()).collect(),
            abs_integral,
        }
    }

    /// `∫∫ ψ(ρ,θ) exp(-i κ ρ r cos(θ - φ)) ρ dρ dθ`.
    fn transform(&self, kappa: f64, r: f64, phi: f64) -> Complex64 {
        let (c, s) = (phi.cos(), phi.sin());
        let mut total = Complex64::new(0.0, 0.0);
        for (rho, weight, samples) in &self.rings {
            let scale = kappa * rho * r;
            let mut ring = Complex64::new(0.0, 0.0);
            for ((v, ct), st) in samples.iter().zip(&self.cos_theta).zip(&self.sin_theta) {
                // cos(θ - φ) = cos θ cos φ + sin θ sin φ
                let arg = -scale * (ct * c + st * s);
                ring += v * Complex64::from_polar(1.0, arg);
            }
            total += ring * *weight;
        }
        total
    }
}

/// Evaluate the lens transform of `source` at each polar point, checking
/// each value against a node-doubled evaluation.
pub fn fourier_lens_profile(
    source: impl Fn(f64, f64) -> Complex64 + Sync,
    lens: &Lens,
    points: &[(f64, f64)],
    quad: &QuadratureConfig,
) -> Result<Vec<Complex64>> {
    quad.validate()?;
    if !(lens.focal_length > 0.0 && lens.wavenumber > 0.0) {
        return Err(Error::config(
            "lens",
            "focal length and wavenumber must be positive",
        ));
    }
    let fine_quad = quad.doubled();
    let coarse = SampledSource::new(&source, &quad.radial_rule(), quad.azimuthal_nodes);
    let fine = SampledSource::new(&source, &fine_quad.radial_rule(), fine_quad.azimuthal_nodes);
    let kappa = lens.wavenumber / lens.focal_length;
    let prefactor = Complex64::new(0.0, -lens.wavenumber / (2.0 * PI * lens.focal_length));
    let scale = prefactor.norm() * fine.abs_integral;

    points
        .par_iter()
        .map(|&(r, phi)| {
            let a = coarse.transform(kappa, r, phi) * prefactor;
            let b = fine.transform(kappa, r, phi) * prefactor;
            let difference = (a - b).norm();
            let tolerance = quad.rel_tol * b.norm().max(scale);
            if difference <= tolerance {
                Ok(b)
            } else {
                Err(Error::NonConvergence {
                    difference,
                    tolerance,
                })
            }
        })
        .collect()
}

/// Single-point form of [`fourier_lens_profile`].
pub fn fourier_lens_transform(
    source: impl Fn(f64, f64) -> Complex64 + Sync,
    lens: &Lens,
    r: f64,
    phi: f64,
    quad: &QuadratureConfig,
) -> Result<Complex64> {
    Ok(fourier_lens_profile(source, lens, &[(r, phi)], quad)?[0])
}

/// Oracle-versus-closed-form comparison along a radial line.
#[derive(Debug, Clone, Serialize)]
pub struct PovValidation {
    pub l: i32,
    pub pov: ModeSpec,
    pub radii: Vec<f64>,
    pub oracle_magnitude: Vec<f64>,
    pub closed_form_magnitude: Vec<f64>,
    /// `‖|oracle| - |closed|‖₂ / ‖closed‖₂` over the radial grid.
    pub relative_l2_error: f64,
}

/// Bessel-Gauss source that the lens maps onto a POV ring of the given
/// geometry: `k_r = r0 k / f`, `w = 2 f / (k w0)`.
pub fn bessel_gauss_for_ring(l: i32, r0: f64, w0: f64, lens: &Lens) -> ModeSpec {
    let ratio = lens.focal_length / lens.wavenumber;
    ModeSpec::bessel_gauss(l, r0 / ratio, 2.0 * ratio / w0)
}

/// Transform `source` numerically and compare magnitudes with the closed
/// form on `radii` (at φ = 0).
pub fn validate_pov(
    source: &ModeSpec,
    lens: &Lens,
    radii: &[f64],
    quad: &QuadratureConfig,
) -> Result<PovValidation> {
    let (pov, amplitude) = pov_from_bessel_gauss(source, lens)?;
    let points: Vec<(f64, f64)> = radii.iter().map(|&r| (r, 0.0)).collect();
    let oracle = fourier_lens_profile(|rho, theta| source.eval(rho, theta), lens, &points, quad)?;
    let oracle_magnitude: Vec<f64> = oracle.iter().map(|v| v.norm()).collect();
    let closed_form_magnitude: Vec<f64> = radii
        .iter()
        .map(|&r| amplitude * pov.radial_profile(r).abs())
        .collect();
    let num: f64 = oracle_magnitude
        .iter()
        .zip(&closed_form_magnitude)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let den: f64 = closed_form_magnitude.iter().map(|b| b * b).sum();
    Ok(PovValidation {
        l: source.l,
        pov,
        radii: radii.to_vec(),
        oracle_magnitude,
        closed_form_magnitude,
        relative_l2_error: (num / den).sqrt(),
    })
}
