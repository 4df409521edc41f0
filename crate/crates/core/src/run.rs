//! Execution of a [`RunConfig`]: compute, write artifacts, summarize.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::config::{Command, Format, RunConfig};
use crate::entanglement::{
    calibrate, report_from_spectra, table_spectra, CalibrationGrid, EntropyConvention,
    EntropyReport, LogBase,
};
use crate::error::Result;
use crate::lens::{bessel_gauss_for_ring, validate_pov};
use crate::output;
use crate::spectrum::{
    build_spectrum, global_maxima, secondary_maxima, spectrum_width, ScenarioKind,
};

/// Files written by a run and a short human-readable summary.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

struct Writer<'a> {
    cfg: &'a RunConfig,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    /// Write the primary artifact to `--output` or `<dir>/<stem>.<ext>`.
    fn primary(&mut self, stem: &str, contents: &str) -> Result<()> {
        let path = match &self.cfg.output {
            Some(p) => p.clone(),
            None => self
                .cfg
                .resolved_out_dir()
                .join(format!("{stem}.{}", self.cfg.format.extension())),
        };
        self.write(path, contents)
    }

    /// Write a companion file next to the primary artifact.
    fn companion(&mut self, name: &str, contents: &str) -> Result<()> {
        let dir = match &self.cfg.output {
            Some(p) => p.parent().map(PathBuf::from).unwrap_or_default(),
            None => self.cfg.resolved_out_dir(),
        };
        self.write(dir.join(name), contents)
    }

    fn write(&mut self, path: PathBuf, contents: &str) -> Result<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(&path, contents)?;
        self.files.push(path);
        Ok(())
    }
}

/// Every convention the entropy table can be reported under, for one geometry.
pub fn all_conventions(base: &EntropyConvention) -> Vec<EntropyConvention> {
    let mut out = Vec::new();
    for normalize_modes in [false, true] {
        for log_base in [LogBase::Natural, LogBase::Two] {
            for normalize_weights in [true, false] {
                out.push(EntropyConvention {
                    log_base,
                    normalize_weights,
                    normalize_modes,
                    pov: base.pov,
                });
            }
        }
    }
    out
}

/// Entropy tables for `conventions`, sharing spectra between conventions
/// with the same mode policy.
pub fn entropy_reports(
    cfg: &RunConfig,
    conventions: &[EntropyConvention],
) -> Result<Vec<EntropyReport>> {
    let mut reports = Vec::with_capacity(conventions.len());
    let mut cache: Vec<(bool, Vec<Vec<crate::spectrum::SpectrumGrid>>)> = Vec::new();
    for c in conventions {
        if !cache.iter().any(|(m, _)| *m == c.normalize_modes) {
            let spectra = table_spectra(
                &cfg.l_p_values,
                &ScenarioKind::ALL,
                &cfg.quadrature,
                c.pov,
                c.normalize_modes,
            )?;
            cache.push((c.normalize_modes, spectra));
        }
        let spectra = &cache
            .iter()
            .find(|(m, _)| *m == c.normalize_modes)
            .expect("cached")
            .1;
        reports.push(report_from_spectra(
            spectra,
            &cfg.l_p_values,
            &ScenarioKind::ALL,
            *c,
        )?);
    }
    Ok(reports)
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut w = Writer {
        cfg,
        files: Vec::new(),
    };
    let mut summary = String::new();
    match cfg.command {
        Command::Spectrum => {
            let scenario = cfg.scenario();
            let grid = build_spectrum(&scenario, &cfg.quadrature)?;
            let contents = match cfg.format {
                Format::Csv => output::spectrum_csv(&grid),
                Format::Json => output::spectrum_json(&grid)?,
            };
            let stem = format!(
                "spectrum_{}{}_{}_{}",
                cfg.pump.label().to_lowercase(),
                cfg.l_p,
                cfg.signal.label().to_lowercase(),
                cfg.idler.label().to_lowercase()
            );
            w.primary(&stem, &contents)?;
            let _ = writeln!(
                summary,
                "{} l_p={} l_window={}",
                scenario.label(),
                cfg.l_p,
                grid.l_window
            );
            let _ = writeln!(summary, "width {}", output::sig12(spectrum_width(&grid)));
            let fmt = |ms: Vec<crate::spectrum::Maximum>| {
                ms.iter()
                    .map(|m| format!("({},{})={}", m.l_s, m.l_i, output::sig12(m.probability)))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let _ = writeln!(summary, "global maxima {}", fmt(global_maxima(&grid)));
            let _ = writeln!(summary, "secondary maxima {}", fmt(secondary_maxima(&grid)));
            if let Some((l_s, l_i)) = cfg.pair {
                let _ = writeln!(
                    summary,
                    "P({l_s},{l_i}) = {}",
                    output::sig12(grid.probability(l_s, l_i))
                );
            }
        }
        Command::EntropyTable => {
            let conventions = if cfg.all_conventions {
                all_conventions(&cfg.convention())
            } else {
                vec![cfg.convention()]
            };
            let reports = entropy_reports(cfg, &conventions)?;
            let contents = match cfg.format {
                Format::Csv => output::entropy_csv(&reports),
                Format::Json => output::entropy_json(&reports)?,
            };
            let text = output::entropy_text(&reports);
            w.primary("entropy_table", &contents)?;
            w.companion("entropy_table.txt", &text)?;
            summary.push_str(&text);
        }
        Command::ValidatePov => {
            let radii = cfg.validate_radii();
            let profiles = cfg
                .validate_l
                .iter()
                .map(|&l| {
                    let source = bessel_gauss_for_ring(l, cfg.pov.r0, cfg.pov.w0, &cfg.lens);
                    validate_pov(&source, &cfg.lens, &radii, &cfg.quadrature)
                })
                .collect::<Result<Vec<_>>>()?;
            let contents = match cfg.format {
                Format::Csv => output::validation_csv(&profiles),
                Format::Json => output::validation_json(&profiles)?,
            };
            w.primary("validate_pov", &contents)?;
            for v in &profiles {
                let _ = writeln!(
                    summary,
                    "l={} relative L2 error {}",
                    v.l,
                    output::sig12(v.relative_l2_error)
                );
            }
        }
        Command::Calibrate => {
            let mut grid = CalibrationGrid::default();
            if !grid.geometries.contains(&cfg.pov) {
                grid.geometries.push(cfg.pov);
            }
            let report = calibrate(&grid, &cfg.quadrature)?;
            let contents = match cfg.format {
                Format::Csv => output::calibration_csv(&report),
                Format::Json => output::calibration_json(&report)?,
            };
            w.primary("calibration", &contents)?;
            let best = report.best();
            let _ = writeln!(
                summary,
                "best convention: {} (max relative deviation {})",
                best.convention.label(),
                output::sig12(best.max_relative_deviation)
            );
            if !report.skipped.is_empty() {
                let _ = writeln!(summary, "{} geometries skipped", report.skipped.len());
            }
        }
    }
    Ok(RunOutcome {
        files: w.files,
        summary,
    })
}
