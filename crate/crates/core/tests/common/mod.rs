//! Property checks shared by the property suite and the acceptance harness.
#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use spdc_oam::entanglement::{entropy_of, LogBase};
use spdc_oam::overlap::OverlapEngine;
use spdc_oam::quadrature::integrate_radial;
use spdc_oam::special::{bessel_i_scaled, bessel_j, laguerre_poly, ln_factorial};
use spdc_oam::spectrum::{build_spectrum, PovGeometry, ScenarioKind};
use spdc_oam::{ModeFamily, ModeSpec, QuadratureConfig};

pub type Check = std::result::Result<(), TestCaseError>;

pub fn spec(family: ModeFamily, l: i32) -> ModeSpec {
    let pov = PovGeometry::default();
    match family {
        ModeFamily::PerfectVortex => ModeSpec::pov(l, pov.r0, pov.w0),
        _ => ModeSpec::lg(l, 0),
    }
}

pub fn family() -> impl Strategy<Value = ModeFamily> {
    prop_oneof![
        Just(ModeFamily::LaguerreGauss),
        Just(ModeFamily::PerfectVortex)
    ]
}

pub fn engine(normalize: bool) -> OverlapEngine {
    OverlapEngine::new(QuadratureConfig::default())
        .unwrap()
        .with_mode_normalization(normalize)
}

fn amplitude(
    engine: &OverlapEngine,
    pump: ModeFamily,
    proj: ModeFamily,
    lp: i32,
    ls: i32,
    li: i32,
) -> Complex64 {
    let p = engine.prepare(&spec(pump, lp)).unwrap();
    let s = engine.prepare(&spec(proj, ls)).unwrap();
    let i = engine.prepare(&spec(proj, li)).unwrap();
    engine.overlap(&p, &s, &i).unwrap().value
}

pub fn conservation_zeroing(
    pump: ModeFamily,
    proj: ModeFamily,
    normalize: bool,
    lp: i32,
    ls: i32,
    li: i32,
) -> Check {
    prop_assume!(ls + li != lp);
    let c = amplitude(&engine(normalize), pump, proj, lp, ls, li);
    prop_assert_eq!(c, Complex64::new(0.0, 0.0));
    Ok(())
}

pub fn exchange_symmetry(pump: ModeFamily, proj: ModeFamily, lp: i32, ls: i32) -> Check {
    let e = engine(false);
    let a = amplitude(&e, pump, proj, lp, ls, lp - ls);
    let b = amplitude(&e, pump, proj, lp, lp - ls, ls);
    prop_assert_eq!(a, b);
    Ok(())
}

/// Exact for all-LG triples, in magnitude otherwise.
pub fn sign_flip_symmetry(pump: ModeFamily, proj: ModeFamily, lp: i32, ls: i32) -> Check {
    let e = engine(false);
    let a = amplitude(&e, pump, proj, lp, ls, lp - ls);
    let b = amplitude(&e, pump, proj, -lp, -ls, ls - lp);
    if pump == ModeFamily::LaguerreGauss && proj == ModeFamily::LaguerreGauss {
        prop_assert_eq!(a, b);
    } else {
        prop_assert_eq!(a.norm(), b.norm());
    }
    Ok(())
}

pub fn laguerre_recurrences(p: u32, a: u32, x: f64) -> Check {
    let (prev, cur, next) = (
        laguerre_poly(p - 1, a, x),
        laguerre_poly(p, a, x),
        laguerre_poly(p + 1, a, x),
    );
    let (pf, af) = (p as f64, a as f64);
    // (p+1) L_{p+1} = (2p+1+a-x) L_p - (p+a) L_{p-1}
    let terms = [
        (pf + 1.0) * next,
        (2.0 * pf + 1.0 + af - x) * cur,
        (pf + af) * prev,
    ];
    let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.abs()));
    prop_assert!((terms[0] - terms[1] + terms[2]).abs() <= 1e-12 * scale);

    // L_p^a = L_p^{a+1} - L_{p-1}^{a+1}
    let (up, up_prev) = (laguerre_poly(p, a + 1, x), laguerre_poly(p - 1, a + 1, x));
    let scale = cur.abs().max(up.abs()).max(up_prev.abs()).max(1.0);
    prop_assert!((cur - (up - up_prev)).abs() <= 1e-12 * scale);
    Ok(())
}

pub fn laguerre_explicit_sum(p: u32, a: u32, x: f64) -> Check {
    let mut sum = 0.0;
    let mut scale = 0.0f64;
    for m in 0..=p {
        let ln_binom = ln_factorial(p + a) - ln_factorial(p - m) - ln_factorial(a + m);
        let term = (ln_binom - ln_factorial(m)).exp() * x.powi(m as i32);
        sum += if m % 2 == 0 { term } else { -term };
        scale = scale.max(term);
    }
    prop_assert!((laguerre_poly(p, a, x) - sum).abs() <= 1e-11 * scale.max(1.0));
    Ok(())
}

pub fn bessel_recurrences(l: i32, x: f64) -> Check {
    // I_{l-1} - I_{l+1} = (2l/x) I_l, in scaled form
    let (a, b, c) = (
        bessel_i_scaled(l - 1, x),
        bessel_i_scaled(l, x),
        bessel_i_scaled(l + 1, x),
    );
    let rhs = 2.0 * l as f64 / x * b;
    prop_assert!(
        (a - c - rhs).abs() <= 1e-13 * a.max(rhs),
        "I: {} vs {}",
        a - c,
        rhs
    );

    // J_{l-1} + J_{l+1} = (2l/x) J_l
    let (a, b, c) = (bessel_j(l - 1, x), bessel_j(l, x), bessel_j(l + 1, x));
    let rhs = 2.0 * l as f64 / x * b;
    let scale = a.abs().max(c.abs()).max(rhs.abs());
    prop_assert!(
        (a + c - rhs).abs() <= 1e-12 * scale,
        "J: {} vs {}",
        a + c,
        rhs
    );
    Ok(())
}

pub fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 1e-6f64..1.0], 1..40)
}

pub fn entropy_bounds(weights: Vec<f64>) -> Check {
    prop_assume!(weights.iter().any(|&w| w > 0.0));
    let s = entropy_of(&weights, LogBase::Natural, true);
    let rank = weights.iter().filter(|&&w| w > 0.0).count() as f64;
    prop_assert!(s >= 0.0);
    prop_assert!(s <= rank.ln() + 1e-12, "S = {} > ln {}", s, rank);
    let s2 = entropy_of(&weights, LogBase::Two, true);
    prop_assert!((s2 - s / std::f64::consts::LN_2).abs() <= 1e-12 * s.max(1.0));
    Ok(())
}

/// `∫ r^k e^{-a r²} dr` under node doubling, and against `Γ((k+1)/2) / (2 a^{(k+1)/2})`.
pub fn quadrature_doubling(k: i32, a: f64) -> Check {
    let q = QuadratureConfig::default();
    let f = |r: f64| r.powi(k) * (-a * r * r).exp();
    let coarse = integrate_radial(f, &q).unwrap();
    let fine = integrate_radial(f, &q.doubled()).unwrap();
    prop_assert!((coarse - fine).norm() <= q.rel_tol * fine.norm());
    let half = (k + 1) as f64 / 2.0;
    let mut gamma = if k % 2 == 0 {
        std::f64::consts::PI.sqrt()
    } else {
        1.0
    };
    let mut g = if k % 2 == 0 { 0.5 } else { 1.0 };
    while g < half {
        gamma *= g;
        g += 1.0;
    }
    let exact = gamma / (2.0 * a.powf(half));
    prop_assert!(
        (fine.re - exact).abs() <= 1e-10 * exact,
        "{} vs {}",
        fine.re,
        exact
    );
    Ok(())
}

pub fn spectrum_normalized(lp: i32, kind: usize) -> Check {
    let scenario = ScenarioKind::ALL[kind].scenario(lp, PovGeometry::default());
    let grid = build_spectrum(&scenario, &QuadratureConfig::default()).unwrap();
    let total: f64 = grid.probabilities().iter().sum();
    prop_assert!((total - 1.0).abs() <= 1e-12);
    let s = entropy_of(&grid.probabilities(), LogBase::Natural, false);
    let rank = grid.probabilities().iter().filter(|&&p| p > 0.0).count() as f64;
    prop_assert!(s >= 0.0 && s <= rank.ln() + 1e-12);
    Ok(())
}
