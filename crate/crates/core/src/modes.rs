//! Transverse mode functions at the waist plane.
//!
//! All families use the azimuthal phase `e^{+ilφ}`. A mode factors as
//!
//! ```text
//! ψ(r, φ) = scale · R_{|l|}(r) · i^q · e^{ilφ}
//! ```
//!
//! with a real radial profile `R`, an integer quarter-turn phase `q` and a
//! real normalization `scale`. Keeping the phase as an integer makes the
//! overlap phases exact.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_radial, QuadratureConfig};
use crate::special::{bessel_i_scaled, bessel_j, laguerre_poly, ln_factorial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeFamily {
    #[serde(rename = "lg")]
    LaguerreGauss,
    BesselGauss,
    #[serde(rename = "pov")]
    PerfectVortex,
}

impl ModeFamily {
    pub fn label(&self) -> &'static str {
        match self {
            ModeFamily::LaguerreGauss => "LG",
            ModeFamily::BesselGauss => "BG",
            ModeFamily::PerfectVortex => "POV",
        }
    }
}

/// A transverse mode: family, indices and geometry.
///
/// `w0` is the Gaussian waist for LG, the ring width for POV and the envelope
/// waist for Bessel-Gauss. `r0` is the POV ring radius, `k_r` the Bessel-Gauss
/// radial wavevector; unused fields are ignored by the other families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub family: ModeFamily,
    pub l: i32,
    pub p: u32,
    pub w0: f64,
    pub r0: f64,
    pub k_r: f64,
}

impl ModeSpec {
    /// LG mode with unit waist.
    pub fn lg(l: i32, p: u32) -> Self {
        ModeSpec {
            family: ModeFamily::LaguerreGauss,
            l,
            p,
            w0: 1.0,
            r0: 0.0,
            k_r: 0.0,
        }
    }

    pub fn with_waist(self, w0: f64) -> Self {
        ModeSpec { w0, ..self }
    }

    pub fn pov(l: i32, r0: f64, w0: f64) -> Self {
        ModeSpec {
            family: ModeFamily::PerfectVortex,
            l,
            p: 0,
            w0,
            r0,
            k_r: 0.0,
        }
    }

    /// Bessel-Gauss vortex `J_l(k_r ρ) e^{ilθ} e^{-ρ²/w²}`.
    pub fn bessel_gauss(l: i32, k_r: f64, w: f64) -> Self {
        ModeSpec {
            family: ModeFamily::BesselGauss,
            l,
            p: 0,
            w0: w,
            r0: 0.0,
            k_r,
        }
    }

    /// Same family and geometry with a different azimuthal index.
    pub fn with_l(self, l: i32) -> Self {
        ModeSpec { l, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.w0) {
            return Err(Error::InvalidMode(format!(
                "w0 must be positive, got {}",
                self.w0
            )));
        }
        match self.family {
            ModeFamily::LaguerreGauss => {}
            ModeFamily::PerfectVortex => {
                if self.p != 0 {
                    return Err(Error::InvalidMode(
                        "POV modes have no radial index (p must be 0)".into(),
                    ));
                }
                if !positive(self.r0) {
                    return Err(Error::InvalidMode(format!(
                        "POV ring radius r0 must be positive, got {}",
                        self.r0
                    )));
                }
            }
            ModeFamily::BesselGauss => {
                if self.p != 0 {
                    return Err(Error::InvalidMode(
                        "Bessel-Gauss modes have no radial index (p must be 0)".into(),
                    ));
                }
                if !positive(self.k_r) {
                    return Err(Error::InvalidMode(format!(
                        "k_r must be positive, got {}",
                        self.k_r
                    )));
                }
            }
        }
        Ok(())
    }

    /// Real radial profile `R(r)`, without normalization or phase.
    pub fn radial_profile(&self, r: f64) -> f64 {
        match self.family {
            ModeFamily::LaguerreGauss => lg_radial(self.l, self.p, self.w0, r),
            ModeFamily::BesselGauss => {
                bessel_j(self.l, self.k_r * r) * (-(r * r) / (self.w0 * self.w0)).exp()
            }
            ModeFamily::PerfectVortex => {
                let w2 = self.w0 * self.w0;
                let d = r - self.r0;
                // e^{-(r²+r0²)/w0²} I_l(x) = e^{-(r-r0)²/w0²} e^{-x} I_l(x), x = 2 r0 r / w0²
                (-(d * d) / w2).exp() * bessel_i_scaled(self.l, 2.0 * self.r0 * r / w2)
            }
        }
    }

    /// Constant phase as a power of `i`.
    pub fn phase_quarters(&self) -> i32 {
        match self.family {
            ModeFamily::PerfectVortex => self.l - 1,
            _ => 0,
        }
    }

    /// Unnormalized complex amplitude.
    pub fn eval(&self, r: f64, phi: f64) -> Complex64 {
        quarter_phase(self.phase_quarters())
            * Complex64::from_polar(self.radial_profile(r), self.l as f64 * phi)
    }
}

/// `i^q` exactly.
pub fn quarter_phase(q: i32) -> Complex64 {
    match q.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn lg_radial(l: i32, p: u32, w0: f64, r: f64) -> f64 {
    let a = l.unsigned_abs();
    let s = r / w0;
    let ln_norm = 0.5 * ((2.0 / PI).ln() + ln_factorial(p) - ln_factorial(a + p));
    let x = 2.0 * s * s;
    ln_norm.exp() / w0 * (2f64.sqrt() * s).powi(a as i32) * laguerre_poly(p, a, x) * (-s * s).exp()
}

/// Laguerre-Gauss amplitude at the waist plane; unit L2 norm by construction.
pub fn lg_mode(spec: &ModeSpec, r: f64, phi: f64) -> Complex64 {
    debug_assert_eq!(spec.family, ModeFamily::LaguerreGauss);
    spec.eval(r, phi)
}

/// Bessel-Gauss amplitude with a decaying Gaussian envelope.
pub fn bg_mode(spec: &ModeSpec, rho: f64, theta: f64) -> Complex64 {
    debug_assert_eq!(spec.family, ModeFamily::BesselGauss);
    spec.eval(rho, theta)
}

/// Practical perfect-vortex amplitude
/// `i^{l-1} e^{ilφ} e^{-(r²+r0²)/w0²} I_l(2 r0 r / w0²)`.
///
/// The lens-dependent amplitude `w/w0` is a constant and is left to
/// [`crate::lens::pov_from_bessel_gauss`]; normalized use goes through [`Mode`].
pub fn pov_mode(spec: &ModeSpec, r: f64, phi: f64) -> Complex64 {
    debug_assert_eq!(spec.family, ModeFamily::PerfectVortex);
    spec.eval(r, phi)
}

/// A mode together with a real amplitude scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub spec: ModeSpec,
    pub scale: f64,
}

impl Mode {
    pub fn new(spec: ModeSpec) -> Self {
        Mode { spec, scale: 1.0 }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Mode {
            scale: self.scale * factor,
            ..self
        }
    }

    pub fn l(&self) -> i32 {
        self.spec.l
    }

    pub fn radial(&self, r: f64) -> f64 {
        self.scale * self.spec.radial_profile(r)
    }

    pub fn eval(&self, r: f64, phi: f64) -> Complex64 {
        self.spec.eval(r, phi) * self.scale
    }
}

/// `∫|ψ|² r dr dφ` over the quadrature window.
pub fn l2_norm_squared(mode: &Mode, quad: &QuadratureConfig) -> Result<f64> {
    let radial = integrate_radial(
        |r| {
            let v = mode.radial(r);
            v * v * r
        },
        quad,
    )?;
    Ok(2.0 * PI * radial.re)
}

/// Rescale `mode` to unit L2 norm.
pub fn l2_normalize(mode: &Mode, quad: &QuadratureConfig) -> Result<Mode> {
    let norm2 = l2_norm_squared(mode, quad)?;
    if !(norm2 > 0.0 && norm2.is_finite()) {
        return Err(Error::DegenerateMode(format!(
            "{} l={} has L2 norm² {norm2} over r <= {}",
            mode.spec.family.label(),
            mode.spec.l,
            quad.r_max
        )));
    }
    Ok(mode.scaled(1.0 / norm2.sqrt()))
}

/// Radius of the intensity maximum: grid argmax on `[0, r_max]` with step
/// `step`, refined by a parabola through the three points around it.
pub fn peak_radius(mode: &Mode, step: f64, r_max: f64) -> f64 {
    let n = (r_max / step).floor() as usize;
    let intensity = |i: usize| mode.radial(i as f64 * step).powi(2);
    let (best, _) = (0..=n)
        .map(|i| (i, intensity(i)))
        .fold(
            (0, f64::MIN),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    if best == 0 || best == n {
        return best as f64 * step;
    }
    let (a, b, c) = (intensity(best - 1), intensity(best), intensity(best + 1));
    let denom = a - 2.0 * b + c;
    let shift = if denom != 0.0 {
        0.5 * (a - c) / denom
    } else {
        0.0
    };
    (best as f64 + shift) * step
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn lg_examples() {
        let g = lg_mode(&ModeSpec::lg(0, 0), 0.0, 0.0);
        assert!((g.re - (2.0 / PI).sqrt()).abs() < 1e-15);
        assert_eq!(g.im, 0.0);
        assert!((0.7978845608 - g.re).abs() < 1e-10);
        assert_eq!(lg_mode(&ModeSpec::lg(2, 0), 0.0, 1.3).norm(), 0.0);
        let n = l2_norm_squared(&Mode::new(ModeSpec::lg(3, 0)), &quad()).unwrap();
        assert!((n - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lg_phase_convention_is_positive() {
        let v = lg_mode(&ModeSpec::lg(2, 0), 1.0, 0.25 * PI);
        assert!((v.arg() - 0.5 * PI).abs() < 1e-14);
    }

    #[test]
    fn lg_orthonormality() {
        let q = quad();
        for l in -5..=5 {
            for p in 0..=5 {
                for p2 in 0..=5 {
                    let (a, b) = (ModeSpec::lg(l, p), ModeSpec::lg(l, p2));
                    let value = 2.0
                        * PI
                        * integrate_radial(|r| a.radial_profile(r) * b.radial_profile(r) * r, &q)
                            .unwrap()
                            .re;
                    let want = if p == p2 { 1.0 } else { 0.0 };
                    assert!((value - want).abs() < 1e-8, "l={l} p={p} p'={p2}: {value}");
                }
            }
        }
        // different l: orthogonal through the azimuthal integral
        let a = ModeSpec::lg(1, 2);
        let b = ModeSpec::lg(-2, 2);
        let cross = crate::quadrature::integrate_polar_2d(
            |r, phi| a.eval(r, phi) * b.eval(r, phi).conj() * r,
            &q,
        )
        .unwrap();
        assert!(cross.norm() < 1e-8);
    }

    #[test]
    fn lg_general_waist_is_scaled_copy() {
        let wide = ModeSpec::lg(2, 1).with_waist(1.7);
        let unit = ModeSpec::lg(2, 1);
        let r = 0.9;
        assert!((wide.radial_profile(r) - unit.radial_profile(r / 1.7) / 1.7).abs() < 1e-15);
        let n = l2_norm_squared(&Mode::new(wide), &quad()).unwrap();
        assert!((n - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bg_examples() {
        let s = ModeSpec::bessel_gauss(0, 1.0, 2.0);
        assert_eq!(bg_mode(&s, 0.0, 0.0), Complex64::new(1.0, 0.0));
        assert_eq!(bg_mode(&s.with_l(2), 0.0, 0.4).norm(), 0.0);
        let v = bg_mode(&ModeSpec::bessel_gauss(1, 1.0, 2.0), 1.0, 0.0);
        assert!((v.re - 0.440_050_585_744_933_5 * (-0.25f64).exp()).abs() < 1e-14);
        assert!((v.re - 0.342712).abs() < 1e-6);
    }

    #[test]
    fn bg_decays_inside_window() {
        let s = ModeSpec::bessel_gauss(1, 8.0, 1.0);
        let peak = (0..800)
            .map(|i| s.radial_profile(i as f64 * 0.01).abs())
            .fold(0.0, f64::max);
        assert!(s.radial_profile(8.0).abs() < 1e-12 * peak);
    }

    #[test]
    fn pov_examples() {
        let s = ModeSpec::pov(1, 1.0, 0.25);
        assert_eq!(pov_mode(&s, 0.0, 0.0).norm(), 0.0);
        let m = l2_normalize(&Mode::new(s), &quad()).unwrap();
        let n = l2_norm_squared(&m, &quad()).unwrap();
        assert!((n - 1.0).abs() < 1e-10, "{n}");
    }

    #[test]
    fn pov_matches_direct_formula_where_representable() {
        let s = ModeSpec::pov(2, 0.8, 0.5);
        for &r in &[0.1, 0.5, 0.8, 1.3] {
            let x: f64 = 2.0 * 0.8 * r / 0.25;
            let direct = (-(r * r + 0.64) / 0.25).exp() * crate::special::bessel_i(2, x).unwrap();
            let v = pov_mode(&s, r, 0.0);
            // i^{l-1} = i for l = 2
            assert!((v - Complex64::new(0.0, direct)).norm() < 1e-14 * direct.abs().max(1e-300));
        }
    }

    #[test]
    fn pov_ring_radius_is_order_independent() {
        let step = 0.025;
        let peaks: Vec<f64> = (0..=5)
            .map(|l| {
                let m = l2_normalize(&Mode::new(ModeSpec::pov(l, 1.0, 0.25)), &quad()).unwrap();
                peak_radius(&m, step, 3.0)
            })
            .collect();
        let spread = peaks.iter().cloned().fold(f64::MIN, f64::max)
            - peaks.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < step, "{peaks:?}");
        assert!(peaks.iter().all(|p| (p - 1.0).abs() < 0.25));
        // LG rings grow with l, for contrast.
        let lg0 = peak_radius(&Mode::new(ModeSpec::lg(1, 0)), step, 6.0);
        let lg5 = peak_radius(&Mode::new(ModeSpec::lg(5, 0)), step, 6.0);
        assert!(lg5 - lg0 > 0.5);
    }

    #[test]
    fn normalization_properties() {
        let q = quad();
        let lg = Mode::new(ModeSpec::lg(2, 1));
        let again = l2_normalize(&lg, &q).unwrap();
        assert!((again.scale - 1.0).abs() < 1e-10);
        let doubled = l2_normalize(&lg.scaled(2.0), &q).unwrap();
        assert!((doubled.scale - 1.0).abs() < 1e-10);
        let zero = Mode::new(ModeSpec::lg(0, 0)).scaled(0.0);
        assert!(matches!(
            l2_normalize(&zero, &q),
            Err(Error::DegenerateMode(_))
        ));
    }

    #[test]
    fn validation() {
        assert!(ModeSpec::lg(3, 2).validate().is_ok());
        assert!(ModeSpec::pov(1, 0.0, 0.25).validate().is_err());
        assert!(ModeSpec::pov(1, 1.0, -0.25).validate().is_err());
        let mut s = ModeSpec::pov(1, 1.0, 0.25);
        s.p = 1;
        assert!(s.validate().is_err());
        assert!(ModeSpec::bessel_gauss(0, 0.0, 1.0).validate().is_err());
    }

    #[test]
    fn quarter_phase_cycles() {
        assert_eq!(quarter_phase(-1), Complex64::new(0.0, -1.0));
        assert_eq!(quarter_phase(5), Complex64::new(0.0, 1.0));
        assert_eq!(quarter_phase(-6), Complex64::new(-1.0, 0.0));
    }
}
