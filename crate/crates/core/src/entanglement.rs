//! Schmidt weights and von Neumann entropy of the biphoton OAM state.
//!
//! For a fixed pump charge the state is `Σ C_{l_s} |l_s⟩|l_p - l_s⟩`, already
//! in Schmidt form: the reduced idler density matrix is diagonal with entries
//! `|C_{l_s}|²`, so the entropy needs no eigen-decomposition.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlap::OverlapEngine;
use crate::quadrature::QuadratureConfig;
use crate::spectrum::{
    build_spectrum_with, spectrum_width, PovGeometry, ScenarioKind, SpectrumGrid,
};

/// Weights at or below this count as zero for the Schmidt rank.
pub const RANK_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogBase {
    #[serde(rename = "e")]
    Natural,
    #[serde(rename = "2")]
    Two,
    /// Base `d`, the dimension of the truncated space.
    Dimension(u32),
}

impl LogBase {
    fn ln_base(&self) -> f64 {
        match self {
            LogBase::Natural => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::Dimension(d) => (*d as f64).ln(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            LogBase::Natural => "e".into(),
            LogBase::Two => "2".into(),
            LogBase::Dimension(d) => format!("d={d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtDecomposition {
    pub l_p: i32,
    /// Signal charge of each weight; the idler carries `l_p - l_s`.
    pub l_s: Vec<i32>,
    pub weights: Vec<f64>,
    pub normalized: bool,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.weights.iter().filter(|&&w| w > RANK_THRESHOLD).count()
    }

    pub fn is_entangled(&self) -> bool {
        self.rank() > 1
    }
}

/// Schmidt weights from a spectrum: the normalized probabilities, or the raw
/// `|C|²` when `normalize` is off. Ordered by `l_s` ascending.
pub fn schmidt_from_spectrum(grid: &SpectrumGrid, normalize: bool) -> Result<SchmidtDecomposition> {
    if grid.entries.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let weights = grid
        .entries
        .iter()
        .map(|e| {
            if normalize {
                e.probability
            } else {
                e.amplitude.norm_sqr()
            }
        })
        .collect();
    Ok(SchmidtDecomposition {
        l_p: grid.l_p(),
        l_s: grid.entries.iter().map(|e| e.l_s).collect(),
        weights,
        normalized: normalize,
    })
}

/// `S = -Σ λ log λ` with `0 log 0 = 0`. With `normalize`, weights are first
/// rescaled to unit sum.
pub fn von_neumann_entropy(
    decomp: &SchmidtDecomposition,
    log_base: LogBase,
    normalize: bool,
) -> f64 {
    entropy_of(&decomp.weights, log_base, normalize)
}

pub fn entropy_of(weights: &[f64], log_base: LogBase, normalize: bool) -> f64 {
    let total = if normalize {
        weights.iter().sum::<f64>()
    } else {
        1.0
    };
    let s: f64 = weights
        .iter()
        .map(|&w| w / total)
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.ln())
        .sum();
    // -0.0 for a single unit weight
    (s / log_base.ln_base()) + 0.0
}

/// How entropies are computed from overlaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyConvention {
    pub log_base: LogBase,
    /// Rescale Schmidt weights to unit sum.
    pub normalize_weights: bool,
    /// L2-normalize every mode before the overlap.
    pub normalize_modes: bool,
    pub pov: PovGeometry,
}

impl Default for EntropyConvention {
    fn default() -> Self {
        EntropyConvention {
            log_base: LogBase::Natural,
            normalize_weights: true,
            normalize_modes: false,
            pov: PovGeometry::default(),
        }
    }
}

impl EntropyConvention {
    pub fn label(&self) -> String {
        format!(
            "log={} weights={} modes={} r0={} w0={}",
            self.log_base.label(),
            if self.normalize_weights {
                "normalized"
            } else {
                "raw"
            },
            if self.normalize_modes {
                "normalized"
            } else {
                "raw"
            },
            self.pov.r0,
            self.pov.w0
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyCell {
    pub entropy: f64,
    pub rank: usize,
    pub width: f64,
    pub l_window: u32,
}

/// Entropy per (pump charge × scenario), rows by `l_p`, columns by scenario.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub convention: EntropyConvention,
    pub l_p_values: Vec<i32>,
    pub scenarios: Vec<ScenarioKind>,
    pub cells: Vec<Vec<EntropyCell>>,
}

impl EntropyReport {
    pub fn entropy(&self, row: usize, col: usize) -> f64 {
        self.cells[row][col].entropy
    }

    /// Aligned text table, one row per `l_p`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.convention.label());
        let _ = write!(out, "{:>4}", "l_p");
        for s in &self.scenarios {
            let _ = write!(out, " {:>14}", s.label());
        }
        out.push('\n');
        for (row, l_p) in self.l_p_values.iter().enumerate() {
            let _ = write!(out, "{l_p:>4}");
            for cell in &self.cells[row] {
                let _ = write!(out, " {:>14.4}", cell.entropy);
            }
            out.push('\n');
        }
        out
    }
}

/// Spectra for every (l_p, scenario) cell under one geometry and mode policy.
pub fn table_spectra(
    l_p_values: &[i32],
    scenarios: &[ScenarioKind],
    quad: &QuadratureConfig,
    pov: PovGeometry,
    normalize_modes: bool,
) -> Result<Vec<Vec<SpectrumGrid>>> {
    let engine = OverlapEngine::new(*quad)?.with_mode_normalization(normalize_modes);
    l_p_values
        .par_iter()
        .map(|&l_p| {
            scenarios
                .iter()
                .map(|kind| {
                    let scenario = kind
                        .scenario(l_p, pov)
                        .with_mode_normalization(normalize_modes);
                    build_spectrum_with(&scenario, engine.clone())
                })
                .collect()
        })
        .collect()
}

/// Entropy table for precomputed spectra, laid out as [`table_spectra`] returns them.
pub fn report_from_spectra(
    spectra: &[Vec<SpectrumGrid>],
    l_p_values: &[i32],
    scenarios: &[ScenarioKind],
    convention: EntropyConvention,
) -> Result<EntropyReport> {
    let cells = spectra
        .iter()
        .map(|row| {
            row.iter()
                .map(|grid| {
                    let d = schmidt_from_spectrum(grid, convention.normalize_weights)?;
                    Ok(EntropyCell {
                        entropy: von_neumann_entropy(
                            &d,
                            convention.log_base,
                            convention.normalize_weights,
                        ),
                        rank: d.rank(),
                        width: spectrum_width(grid),
                        l_window: grid.l_window,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyReport {
        convention,
        l_p_values: l_p_values.to_vec(),
        scenarios: scenarios.to_vec(),
        cells,
    })
}

pub fn entropy_table(
    l_p_values: &[i32],
    scenarios: &[ScenarioKind],
    quad: &QuadratureConfig,
    convention: EntropyConvention,
) -> Result<EntropyReport> {
    let spectra = table_spectra(
        l_p_values,
        scenarios,
        quad,
        convention.pov,
        convention.normalize_modes,
    )?;
    report_from_spectra(&spectra, l_p_values, scenarios, convention)
}

/// Reference entropies the calibration is scored against; rows `l_p = 0..=4`,
/// columns in [`ScenarioKind::ALL`] order.
pub const REFERENCE_ENTROPIES: [[f64; 3]; 5] = [
    [1.8537, 0.8850, 0.3662],
    [2.4014, 1.3921, 0.8165],
    [2.7030, 1.6016, 1.0025],
    [2.9133, 1.6998, 1.1361],
    [3.0683, 1.7469, 1.2397],
];

pub const REFERENCE_L_P: [i32; 5] = [0, 1, 2, 3, 4];

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationEntry {
    pub convention: EntropyConvention,
    /// Largest `|S - S_ref| / S_ref` over all fifteen cells.
    pub max_relative_deviation: f64,
    /// Same, restricted to the LG column.
    pub lg_column_deviation: f64,
    pub entropies: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationReport {
    pub reference: Vec<[f64; 3]>,
    /// Sorted by `max_relative_deviation`, best first.
    pub entries: Vec<CalibrationEntry>,
    /// Geometries whose spectra could not be computed with the given quadrature.
    pub skipped: Vec<SkippedGeometry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedGeometry {
    pub pov: PovGeometry,
    pub normalize_modes: bool,
    pub reason: String,
}

impl CalibrationReport {
    pub fn best(&self) -> &CalibrationEntry {
        &self.entries[0]
    }
}

/// The convention axes swept by default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationGrid {
    pub log_bases: Vec<LogBase>,
    pub normalize_weights: Vec<bool>,
    pub normalize_modes: Vec<bool>,
    pub geometries: Vec<PovGeometry>,
}

impl Default for CalibrationGrid {
    fn default() -> Self {
        let r0s = [0.25, 0.3, 0.35, 0.4, 0.5, 0.75, 1.0];
        let w0s = [0.25, 0.35, 0.45, 0.55, 0.75, 1.0];
        CalibrationGrid {
            log_bases: vec![LogBase::Natural, LogBase::Two],
            normalize_weights: vec![true, false],
            normalize_modes: vec![true, false],
            geometries: r0s
                .iter()
                .flat_map(|&r0| w0s.iter().map(move |&w0| PovGeometry { r0, w0 }))
                .collect(),
        }
    }
}

fn deviation(values: &[[f64; 3]], columns: std::ops::Range<usize>) -> f64 {
    values
        .iter()
        .zip(REFERENCE_ENTROPIES.iter())
        .flat_map(|(got, want)| {
            columns
                .clone()
                .map(move |c| ((got[c] - want[c]) / want[c]).abs())
        })
        .fold(0.0, f64::max)
}

/// Score every convention in `grid` against [`REFERENCE_ENTROPIES`].
pub fn calibrate(grid: &CalibrationGrid, quad: &QuadratureConfig) -> Result<CalibrationReport> {
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for &normalize_modes in &grid.normalize_modes {
        let results: Vec<(PovGeometry, Result<Vec<Vec<SpectrumGrid>>>)> = grid
            .geometries
            .par_iter()
            .map(|&pov| {
                (
                    pov,
                    table_spectra(
                        &REFERENCE_L_P,
                        &ScenarioKind::ALL,
                        quad,
                        pov,
                        normalize_modes,
                    ),
                )
            })
            .collect();
        for (pov, result) in &results {
            let spectra = match result {
                Ok(s) => s,
                Err(e) => {
                    skipped.push(SkippedGeometry {
                        pov: *pov,
                        normalize_modes,
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            for &log_base in &grid.log_bases {
                for &normalize_weights in &grid.normalize_weights {
                    let convention = EntropyConvention {
                        log_base,
                        normalize_weights,
                        normalize_modes,
                        pov: *pov,
                    };
                    let report = report_from_spectra(
                        spectra,
                        &REFERENCE_L_P,
                        &ScenarioKind::ALL,
                        convention,
                    )?;
                    let entropies: Vec<[f64; 3]> = (0..REFERENCE_L_P.len())
                        .map(|r| {
                            [
                                report.entropy(r, 0),
                                report.entropy(r, 1),
                                report.entropy(r, 2),
                            ]
                        })
                        .collect();
                    entries.push(CalibrationEntry {
                        convention,
                        max_relative_deviation: deviation(&entropies, 0..3),
                        lg_column_deviation: deviation(&entropies, 0..1),
                        entropies,
                    });
                }
            }
        }
    }
    entries.sort_by(|a, b| {
        a.max_relative_deviation
            .partial_cmp(&b.max_relative_deviation)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    if entries.is_empty() {
        return Err(Error::config(
            "calibration",
            "no convention in the grid could be evaluated",
        ));
    }
    Ok(CalibrationReport {
        reference: REFERENCE_ENTROPIES.to_vec(),
        entries,
        skipped,
    })
}
