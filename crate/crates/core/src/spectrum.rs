//! Normalized OAM spectra over a truncated `(l_s, l_i)` window.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{Mode, ModeFamily, ModeSpec};
use crate::overlap::OverlapEngine;
use crate::quadrature::QuadratureConfig;

/// Edge probabilities must stay below this fraction of the maximum.
pub const EDGE_RATIO_LIMIT: f64 = 1e-6;
/// Largest window the automatic sizing will try.
pub const MAX_AUTO_WINDOW: u32 = 128;
const AUTO_WINDOW_STEP: u32 = 8;

/// Ring radius and width shared by POV pump and POV projections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovGeometry {
    pub r0: f64,
    pub w0: f64,
}

impl Default for PovGeometry {
    fn default() -> Self {
        PovGeometry { r0: 0.35, w0: 0.45 }
    }
}

/// The three pump/projection combinations compared throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScenarioKind {
    #[serde(rename = "LG->LG,LG")]
    LgToLg,
    #[serde(rename = "POV->LG,LG")]
    PovToLg,
    #[serde(rename = "POV->POV,POV")]
    PovToPov,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [
        ScenarioKind::LgToLg,
        ScenarioKind::PovToLg,
        ScenarioKind::PovToPov,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ScenarioKind::LgToLg => "LG->LG,LG",
            ScenarioKind::PovToLg => "POV->LG,LG",
            ScenarioKind::PovToPov => "POV->POV,POV",
        }
    }

    pub fn families(&self) -> (ModeFamily, ModeFamily) {
        match self {
            ScenarioKind::LgToLg => (ModeFamily::LaguerreGauss, ModeFamily::LaguerreGauss),
            ScenarioKind::PovToLg => (ModeFamily::PerfectVortex, ModeFamily::LaguerreGauss),
            ScenarioKind::PovToPov => (ModeFamily::PerfectVortex, ModeFamily::PerfectVortex),
        }
    }

    /// Scenario for pump charge `l_p`, `p = 0` and unit LG waist.
    pub fn scenario(&self, l_p: i32, pov: PovGeometry) -> Scenario {
        let (pump, proj) = self.families();
        let pump = match pump {
            ModeFamily::PerfectVortex => ModeSpec::pov(l_p, pov.r0, pov.w0),
            _ => ModeSpec::lg(l_p, 0),
        };
        Scenario {
            pump,
            signal_family: proj,
            idler_family: proj,
            l_window: None,
            pov,
            lg_waist: 1.0,
            normalize_modes: false,
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A pump mode and the bases the signal and idler are projected onto.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    pub pump: ModeSpec,
    pub signal_family: ModeFamily,
    pub idler_family: ModeFamily,
    /// `|l_s|, |l_i| <= l_window`; `None` sizes the window automatically.
    pub l_window: Option<u32>,
    /// Geometry of POV projection modes.
    pub pov: PovGeometry,
    /// Waist of LG projection modes.
    pub lg_waist: f64,
    /// L2-normalize every mode numerically before the overlap. When off, LG
    /// modes keep their analytic normalization and POV modes their raw
    /// closed-form amplitude.
    pub normalize_modes: bool,
}

impl Scenario {
    pub fn with_window(self, l_window: u32) -> Self {
        Scenario {
            l_window: Some(l_window),
            ..self
        }
    }

    pub fn with_mode_normalization(self, normalize_modes: bool) -> Self {
        Scenario {
            normalize_modes,
            ..self
        }
    }

    pub fn label(&self) -> String {
        format!(
            "{}->{},{}",
            self.pump.family.label(),
            self.signal_family.label(),
            self.idler_family.label()
        )
    }

    /// Smallest window accepted for this pump.
    pub fn min_window(&self) -> u32 {
        self.pump.l.unsigned_abs() + 4
    }

    /// Starting window for automatic sizing.
    pub fn default_window(&self) -> u32 {
        8.max(self.pump.l.unsigned_abs() + 6)
    }

    pub fn projection_spec(&self, family: ModeFamily, l: i32) -> ModeSpec {
        match family {
            ModeFamily::PerfectVortex => ModeSpec::pov(l, self.pov.r0, self.pov.w0),
            _ => ModeSpec::lg(l, 0).with_waist(self.lg_waist),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.pump.validate()?;
        for (name, fam) in [
            ("signal_family", self.signal_family),
            ("idler_family", self.idler_family),
        ] {
            if fam == ModeFamily::BesselGauss {
                return Err(Error::config(name, "projections must be LG or POV"));
            }
        }
        if let Some(w) = self.l_window {
            if w < self.min_window() {
                return Err(Error::config(
                    "l_window",
                    format!(
                        "must be at least |l_p| + 4 = {}, got {w}",
                        self.min_window()
                    ),
                ));
            }
        }
        self.projection_spec(self.signal_family, 0).validate()?;
        self.projection_spec(self.idler_family, 0).validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub l_s: i32,
    pub l_i: i32,
    pub amplitude: Complex64,
    pub probability: f64,
}

/// Normalized spectrum. Only the conserving anti-diagonal
/// `l_i = l_p - l_s` is stored, ordered by `l_s` ascending.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumGrid {
    pub scenario: Scenario,
    pub l_window: u32,
    pub entries: Vec<SpectrumEntry>,
    /// Geometric extrapolation of the probability beyond both window edges.
    pub tail_mass: f64,
}

impl SpectrumGrid {
    pub fn l_p(&self) -> i32 {
        self.scenario.pump.l
    }

    /// Probability of `(l_s, l_i)`; zero off the anti-diagonal or outside the window.
    pub fn probability(&self, l_s: i32, l_i: i32) -> f64 {
        if l_s + l_i != self.l_p() {
            return 0.0;
        }
        self.entries
            .iter()
            .find(|e| e.l_s == l_s)
            .map_or(0.0, |e| e.probability)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.probability).collect()
    }

    /// Every `(l_s, l_i)` in the square window, row-major in `l_s` then `l_i`.
    pub fn full_grid(&self) -> Vec<(i32, i32, f64)> {
        let w = self.l_window as i32;
        let mut out = Vec::with_capacity(((2 * w + 1) * (2 * w + 1)) as usize);
        for l_s in -w..=w {
            for l_i in -w..=w {
                out.push((l_s, l_i, self.probability(l_s, l_i)));
            }
        }
        out
    }

    /// Largest edge probability relative to the maximum.
    pub fn edge_ratio(&self) -> f64 {
        let max = self.probabilities().into_iter().fold(0.0, f64::max);
        match (self.entries.first(), self.entries.last()) {
            (Some(a), Some(b)) if max > 0.0 => a.probability.max(b.probability) / max,
            _ => 0.0,
        }
    }
}

/// l_s range of the anti-diagonal inside the square window.
fn anti_diagonal(l_p: i32, w: i32) -> std::ops::RangeInclusive<i32> {
    (l_p - w).max(-w)..=w.min(l_p + w)
}

fn tail_estimate(inner: f64, edge: f64) -> f64 {
    if edge == 0.0 {
        return 0.0;
    }
    let ratio = edge / inner;
    if ratio < 1.0 {
        edge * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    }
}

/// Amplitudes cached across window growth.
struct Assembler<'a> {
    scenario: &'a Scenario,
    engine: OverlapEngine,
    pump: Mode,
    amplitudes: BTreeMap<i32, Complex64>,
}

impl<'a> Assembler<'a> {
    fn fill(&mut self, w: u32) -> Result<()> {
        let l_p = self.scenario.pump.l;
        let missing: Vec<i32> = anti_diagonal(l_p, w as i32)
            .filter(|l_s| !self.amplitudes.contains_key(l_s))
            .collect();
        let engine = &self.engine;
        let pump = &self.pump;
        let sc = self.scenario;
        let computed: Vec<Result<(i32, Complex64)>> = missing
            .par_iter()
            .map(|&l_s| {
                let signal = engine.prepare(&sc.projection_spec(sc.signal_family, l_s))?;
                let idler = engine.prepare(&sc.projection_spec(sc.idler_family, l_p - l_s))?;
                Ok((l_s, engine.overlap(pump, &signal, &idler)?.value))
            })
            .collect();
        for item in computed {
            let (l_s, c) = item?;
            self.amplitudes.insert(l_s, c);
        }
        Ok(())
    }

    fn grid(&self, w: u32) -> Result<SpectrumGrid> {
        let l_p = self.scenario.pump.l;
        let raw: Vec<(i32, Complex64)> = anti_diagonal(l_p, w as i32)
            .map(|l_s| (l_s, self.amplitudes[&l_s]))
            .collect();
        let total: f64 = raw.iter().map(|(_, c)| c.norm_sqr()).sum();
        if raw.is_empty() || total.is_nan() || total <= 0.0 {
            return Err(Error::EmptySpectrum);
        }
        let entries: Vec<SpectrumEntry> = raw
            .iter()
            .map(|&(l_s, c)| SpectrumEntry {
                l_s,
                l_i: l_p - l_s,
                amplitude: c,
                probability: c.norm_sqr() / total,
            })
            .collect();
        let n = entries.len();
        let tail_mass = if n >= 2 {
            tail_estimate(entries[1].probability, entries[0].probability)
                + tail_estimate(entries[n - 2].probability, entries[n - 1].probability)
        } else {
            0.0
        };
        Ok(SpectrumGrid {
            scenario: *self.scenario,
            l_window: w,
            entries,
            tail_mass,
        })
    }
}

/// Compute the normalized spectrum of `scenario`.
///
/// With an explicit window, edge probabilities above [`EDGE_RATIO_LIMIT`] of
/// the maximum are an error. Without one, the window starts at
/// `max(8, |l_p| + 6)` and grows until the edges are negligible.
pub fn build_spectrum(scenario: &Scenario, quad: &QuadratureConfig) -> Result<SpectrumGrid> {
    scenario.validate()?;
    let engine = OverlapEngine::new(*quad)?.with_mode_normalization(scenario.normalize_modes);
    build_spectrum_with(scenario, engine)
}

/// [`build_spectrum`] with a caller-configured overlap engine, whose mode
/// normalization policy takes precedence over the scenario's.
pub fn build_spectrum_with(scenario: &Scenario, engine: OverlapEngine) -> Result<SpectrumGrid> {
    scenario.validate()?;
    let pump = engine.prepare(&scenario.pump)?;
    let mut asm = Assembler {
        scenario,
        engine,
        pump,
        amplitudes: BTreeMap::new(),
    };
    let mut w = scenario
        .l_window
        .unwrap_or_else(|| scenario.default_window());
    loop {
        asm.fill(w)?;
        let grid = asm.grid(w)?;
        let edge_ratio = grid.edge_ratio();
        if edge_ratio <= EDGE_RATIO_LIMIT {
            return Ok(grid);
        }
        if scenario.l_window.is_some() || w >= MAX_AUTO_WINDOW {
            return Err(Error::WindowTooSmall {
                l_window: w,
                edge_ratio,
            });
        }
        w = (w + AUTO_WINDOW_STEP).min(MAX_AUTO_WINDOW);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Maximum {
    pub l_s: i32,
    pub l_i: i32,
    pub probability: f64,
}

/// Local maxima along the anti-diagonal, largest first; exact ties are
/// ordered by `l_s` ascending.
pub fn find_maxima(grid: &SpectrumGrid) -> Vec<Maximum> {
    let p = grid.probabilities();
    let n = p.len();
    let mut out: Vec<Maximum> = (0..n)
        .filter(|&k| p[k] > 0.0 && (k == 0 || p[k] >= p[k - 1]) && (k + 1 == n || p[k] >= p[k + 1]))
        .map(|k| Maximum {
            l_s: grid.entries[k].l_s,
            l_i: grid.entries[k].l_i,
            probability: p[k],
        })
        .collect();
    out.sort_by(|a, b| {
        b.probability
            .partial_cmp(&a.probability)
            .expect("probabilities are finite")
            .then(a.l_s.cmp(&b.l_s))
    });
    out
}

/// Maxima sharing the largest probability.
pub fn global_maxima(grid: &SpectrumGrid) -> Vec<Maximum> {
    let all = find_maxima(grid);
    let top = all.first().map_or(0.0, |m| m.probability);
    all.into_iter().filter(|m| m.probability == top).collect()
}

/// Local maxima that are not global.
pub fn secondary_maxima(grid: &SpectrumGrid) -> Vec<Maximum> {
    let all = find_maxima(grid);
    let top = all.first().map_or(0.0, |m| m.probability);
    all.into_iter().filter(|m| m.probability < top).collect()
}

/// Participation ratio `1 / Σ p²` of the anti-diagonal probabilities.
pub fn spectrum_width(grid: &SpectrumGrid) -> f64 {
    participation_ratio(&grid.probabilities())
}

pub fn participation_ratio(probs: &[f64]) -> f64 {
    1.0 / probs.iter().map(|p| p * p).sum::<f64>()
}

/// Whether probabilities fall strictly towards both window edges beyond the
/// outermost local maxima.
pub fn tails_decay_monotonically(grid: &SpectrumGrid) -> bool {
    let p = grid.probabilities();
    let maxima = find_maxima(grid);
    let index = |l_s: i32| grid.entries.iter().position(|e| e.l_s == l_s).unwrap();
    let (Some(lo), Some(hi)) = (
        maxima.iter().map(|m| index(m.l_s)).min(),
        maxima.iter().map(|m| index(m.l_s)).max(),
    ) else {
        return true;
    };
    p[..=lo].windows(2).all(|w| w[0] < w[1]) && p[hi..].windows(2).all(|w| w[0] > w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_from(probs: &[f64]) -> SpectrumGrid {
        let scenario = ScenarioKind::LgToLg.scenario(0, PovGeometry::default());
        let half = (probs.len() / 2) as i32;
        SpectrumGrid {
            scenario,
            l_window: half as u32,
            entries: probs
                .iter()
                .enumerate()
                .map(|(k, &p)| SpectrumEntry {
                    l_s: k as i32 - half,
                    l_i: half - k as i32,
                    amplitude: Complex64::new(p.sqrt(), 0.0),
                    probability: p,
                })
                .collect(),
            tail_mass: 0.0,
        }
    }

    #[test]
    fn width_examples() {
        assert_eq!(spectrum_width(&grid_from(&[0.0, 1.0, 0.0])), 1.0);
        assert_eq!(participation_ratio(&[0.5, 0.5]), 2.0);
    }

    #[test]
    fn maxima_ordering_and_ties() {
        let g = grid_from(&[0.05, 0.1, 0.05, 0.3, 0.3, 0.05, 0.1, 0.05, 0.0]);
        let m = find_maxima(&g);
        assert_eq!(m.len(), 4);
        assert_eq!((m[0].l_s, m[1].l_s), (-1, 0));
        assert_eq!(global_maxima(&g).len(), 2);
        assert_eq!(secondary_maxima(&g).len(), 2);
        assert!(tails_decay_monotonically(&g));
    }

    #[test]
    fn lg_spectrum_basics() {
        let q = QuadratureConfig::default();
        let g = build_spectrum(
            &ScenarioKind::LgToLg.scenario(0, PovGeometry::default()),
            &q,
        )
        .unwrap();
        let total: f64 = g.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(global_maxima(&g)[0].l_s, 0);
        assert_eq!(g.probability(1, 1), 0.0);
        assert!(g.edge_ratio() <= EDGE_RATIO_LIMIT);
        assert!(g.tail_mass < 1e-5);

        let g1 = build_spectrum(
            &ScenarioKind::LgToLg.scenario(1, PovGeometry::default()),
            &q,
        )
        .unwrap();
        let top = global_maxima(&g1);
        assert_eq!(top.len(), 2);
        assert_eq!(
            (top[0].l_s, top[0].l_i, top[1].l_s, top[1].l_i),
            (0, 1, 1, 0)
        );
        assert_eq!(top[0].probability, top[1].probability);
    }

    #[test]
    fn explicit_window_too_small() {
        let q = QuadratureConfig::default();
        let s = ScenarioKind::LgToLg
            .scenario(0, PovGeometry::default())
            .with_window(8);
        assert!(matches!(
            build_spectrum(&s, &q),
            Err(Error::WindowTooSmall { l_window: 8, .. })
        ));
        let s = ScenarioKind::LgToLg
            .scenario(3, PovGeometry::default())
            .with_window(5);
        assert!(matches!(build_spectrum(&s, &q), Err(Error::Config { .. })));
    }
}
