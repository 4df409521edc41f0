//! Biphoton expansion coefficients as three-mode overlap integrals.
//!
//! The amplitude for finding the signal in mode `s` and the idler in mode `i`
//! is `C = ∫ ψ_p conj(ψ_s) conj(ψ_i) r dr dφ`. With every mode carrying
//! `e^{ilφ}`, the azimuthal integral is `2π` when `l_p = l_s + l_i` and zero
//! otherwise, so only a radial integral remains.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{l2_normalize, quarter_phase, Mode, ModeFamily, ModeSpec};
use crate::quadrature::{integrate_polar_2d, integrate_radial_with, QuadratureConfig, RadialRule};
use crate::special::ln_factorial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    RadialQuadrature,
    Full2D,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coefficient {
    pub l_s: i32,
    pub l_i: i32,
    pub value: Complex64,
    pub method: Method,
}

/// `(1/3) √(8/π)`: the all-Gaussian overlap of three unit-waist LG modes.
pub fn gaussian_overlap_constant() -> f64 {
    (8.0 / PI).sqrt() / 3.0
}

/// Analytic overlap of three unit-waist, `p = 0` LG modes:
/// `C = P (2/3)^L L! / √(|l_p|! |l_s|! |l_i|!)` with
/// `L = (|l_p| + |l_s| + |l_i|) / 2`. Zero unless `l_s + l_i = l_p`.
pub fn closed_form_coefficient(l_p: i32, l_s: i32, l_i: i32) -> f64 {
    if l_s + l_i != l_p {
        return 0.0;
    }
    let (a, b, c) = (l_p.unsigned_abs(), l_s.unsigned_abs(), l_i.unsigned_abs());
    // |l_s| + |l_i| ≡ l_s + l_i = l_p (mod 2)
    assert!((a + b + c) % 2 == 0, "odd |l| sum for a conserving triple");
    let big_l = (a + b + c) / 2;
    let ln = big_l as f64 * (2.0f64 / 3.0).ln() + ln_factorial(big_l)
        - 0.5 * (ln_factorial(a) + ln_factorial(b) + ln_factorial(c));
    gaussian_overlap_constant() * ln.exp()
}

/// Overlap evaluator holding the radial rules and the mode normalization
/// policy, so a batch of coefficients shares one set of nodes.
#[derive(Debug, Clone)]
pub struct OverlapEngine {
    pub quad: QuadratureConfig,
    /// L2-normalize each mode before the overlap.
    pub normalize_modes: bool,
    coarse: RadialRule,
    fine: RadialRule,
}

impl OverlapEngine {
    pub fn new(quad: QuadratureConfig) -> Result<Self> {
        quad.validate()?;
        Ok(OverlapEngine {
            coarse: quad.radial_rule(),
            fine: quad.doubled().radial_rule(),
            quad,
            normalize_modes: true,
        })
    }

    pub fn with_mode_normalization(mut self, on: bool) -> Self {
        self.normalize_modes = on;
        self
    }

    /// Validate and, if configured, normalize a mode.
    pub fn prepare(&self, spec: &ModeSpec) -> Result<Mode> {
        spec.validate()?;
        let mode = Mode::new(*spec);
        if self.normalize_modes {
            l2_normalize(&mode, &self.quad)
        } else {
            Ok(mode)
        }
    }

    /// Overlap of prepared modes by radial quadrature.
    pub fn overlap(&self, pump: &Mode, signal: &Mode, idler: &Mode) -> Result<Coefficient> {
        let (l_s, l_i) = (signal.l(), idler.l());
        let zero = Coefficient {
            l_s,
            l_i,
            value: Complex64::new(0.0, 0.0),
            method: Method::RadialQuadrature,
        };
        if pump.l() != l_s + l_i {
            return Ok(zero);
        }
        // Inner product first so the result is exactly symmetric in (s, i).
        let integrand = |r: f64| r * (pump.radial(r) * (signal.radial(r) * idler.radial(r)));
        self.check_truncation(&integrand)?;
        let radial = integrate_radial_with(integrand, &self.coarse, &self.fine, self.quad.rel_tol)?;
        let phase = quarter_phase(
            pump.spec.phase_quarters() - signal.spec.phase_quarters() - idler.spec.phase_quarters(),
        );
        Ok(Coefficient {
            value: phase * radial.re * (2.0 * PI),
            ..zero
        })
    }

    /// Overlap of prepared modes by full polar quadrature, without using the
    /// azimuthal selection rule.
    pub fn overlap_2d(&self, pump: &Mode, signal: &Mode, idler: &Mode) -> Result<Coefficient> {
        let value = integrate_polar_2d(
            |r, phi| pump.eval(r, phi) * (signal.eval(r, phi) * idler.eval(r, phi)).conj() * r,
            &self.quad,
        )?;
        Ok(Coefficient {
            l_s: signal.l(),
            l_i: idler.l(),
            value,
            method: Method::Full2D,
        })
    }

    fn check_truncation(&self, f: &impl Fn(f64) -> f64) -> Result<()> {
        let peak = self
            .fine
            .nodes
            .iter()
            .map(|&r| f(r).abs())
            .fold(0.0, f64::max);
        if peak == 0.0 {
            return Ok(());
        }
        let ratio = f(self.quad.r_max).abs() / peak;
        if ratio > 1e-12 {
            return Err(Error::Truncation {
                r_max: self.quad.r_max,
                ratio,
            });
        }
        Ok(())
    }
}

/// Expansion coefficient for one (pump, signal, idler) triple, with all modes
/// L2-normalized. Non-conserving triples return an exact zero without any
/// integration.
pub fn coefficient(
    pump: &ModeSpec,
    signal: &ModeSpec,
    idler: &ModeSpec,
    quad: &QuadratureConfig,
) -> Result<Coefficient> {
    coefficient_with_method(pump, signal, idler, quad, Method::RadialQuadrature)
}

pub fn coefficient_with_method(
    pump: &ModeSpec,
    signal: &ModeSpec,
    idler: &ModeSpec,
    quad: &QuadratureConfig,
    method: Method,
) -> Result<Coefficient> {
    for spec in [pump, signal, idler] {
        spec.validate()?;
    }
    if pump.l != signal.l + idler.l {
        return Ok(Coefficient {
            l_s: signal.l,
            l_i: idler.l,
            value: Complex64::new(0.0, 0.0),
            method,
        });
    }
    match method {
        Method::ClosedForm => {
            let all_unit_lg = [pump, signal, idler]
                .iter()
                .all(|s| s.family == ModeFamily::LaguerreGauss && s.p == 0 && s.w0 == 1.0);
            if !all_unit_lg {
                return Err(Error::InvalidMode(
                    "closed form applies only to unit-waist LG modes with p = 0".into(),
                ));
            }
            Ok(Coefficient {
                l_s: signal.l,
                l_i: idler.l,
                value: Complex64::new(closed_form_coefficient(pump.l, signal.l, idler.l), 0.0),
                method,
            })
        }
        Method::RadialQuadrature | Method::Full2D => {
            let engine = OverlapEngine::new(*quad)?;
            let (p, s, i) = (
                engine.prepare(pump)?,
                engine.prepare(signal)?,
                engine.prepare(idler)?,
            );
            if method == Method::Full2D {
                engine.overlap_2d(&p, &s, &i)
            } else {
                engine.overlap(&p, &s, &i)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lg(l: i32) -> ModeSpec {
        ModeSpec::lg(l, 0)
    }

    #[test]
    fn closed_form_examples() {
        let p = gaussian_overlap_constant();
        assert!((p - 0.5319230405).abs() < 1e-10);
        assert!((closed_form_coefficient(0, 0, 0) - p).abs() < 1e-15);
        assert!((closed_form_coefficient(0, 1, -1) - 0.3546153603).abs() < 1e-10);
        assert!((closed_form_coefficient(1, 1, 0) - 0.3546153603).abs() < 1e-10);
        assert_eq!(closed_form_coefficient(1, 1, 1), 0.0);
    }

    #[test]
    fn non_conserving_is_exact_zero() {
        let c = coefficient(&lg(1), &lg(1), &lg(1), &QuadratureConfig::default()).unwrap();
        assert_eq!(c.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let q = QuadratureConfig::default();
        let c = coefficient(&lg(0), &lg(0), &lg(0), &q).unwrap();
        assert!((c.value.re - 0.5319230405).abs() < 1e-10);
        let c = coefficient(&lg(2), &lg(1), &lg(1), &q).unwrap();
        let want = closed_form_coefficient(2, 1, 1);
        assert!(((c.value.re - want) / want).abs() < 1e-9);
        assert_eq!(c.value.im, 0.0);
    }

    #[test]
    fn two_d_path_agrees() {
        let q = QuadratureConfig::default();
        for (lp, ls) in [(0, 0), (1, 3), (-2, -1)] {
            let a = coefficient_with_method(&lg(lp), &lg(ls), &lg(lp - ls), &q, Method::Full2D)
                .unwrap();
            let b = coefficient(&lg(lp), &lg(ls), &lg(lp - ls), &q).unwrap();
            assert!((a.value - b.value).norm() < 1e-10 * b.value.norm());
        }
    }

    #[test]
    fn closed_form_rejects_other_families() {
        let pov = ModeSpec::pov(0, 1.0, 0.25);
        let r = coefficient_with_method(
            &pov,
            &lg(0),
            &lg(0),
            &QuadratureConfig::default(),
            Method::ClosedForm,
        );
        assert!(r.is_err());
    }

    #[test]
    fn truncated_window_is_reported() {
        let q = QuadratureConfig {
            r_max: 2.0,
            ..Default::default()
        };
        let err = coefficient(&lg(0), &lg(0), &lg(0), &q).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }), "{err}");
    }

    #[test]
    fn pov_triple_phase_is_constant() {
        // i^{(l_p-1) - (l_s-1) - (l_i-1)} = i on every conserving triple.
        let q = QuadratureConfig::default();
        let pov = |l| ModeSpec::pov(l, 1.0, 0.25);
        for (lp, ls) in [(0, 2), (3, 1), (-2, 4)] {
            let c = coefficient(&pov(lp), &pov(ls), &pov(lp - ls), &q).unwrap();
            assert_eq!(c.value.re, 0.0);
            assert!(c.value.im > 0.0);
        }
    }
}
