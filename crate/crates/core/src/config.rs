//! Run configuration shared by the command-line front end and config files.
//!
//! A config file is TOML with the same field names as [`RunConfig`]; every
//! field is optional and falls back to its default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::entanglement::{EntropyConvention, LogBase};
use crate::error::{Error, Result};
use crate::lens::Lens;
use crate::modes::{ModeFamily, ModeSpec};
use crate::quadrature::QuadratureConfig;
use crate::spectrum::{PovGeometry, Scenario, MAX_AUTO_WINDOW};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SPDC_OAM_OUT_DIR";

/// Largest pump or projection charge accepted.
pub const MAX_CHARGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    EntropyTable,
    ValidatePov,
    Calibrate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,

    pub pump: ModeFamily,
    pub l_p: i32,
    /// Radial index of an LG pump.
    pub p: u32,
    pub signal: ModeFamily,
    pub idler: ModeFamily,
    /// Half-width of the square `(l_s, l_i)` window; automatic when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_window: Option<u32>,
    /// Report the probability of this `(l_s, l_i)` pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(i32, i32)>,

    /// Pump charges of the entropy table rows.
    pub l_p_values: Vec<i32>,
    pub log_base: LogBase,
    pub normalize_weights: bool,
    pub normalize_modes: bool,
    /// Emit one entropy table per convention instead of just the configured one.
    pub all_conventions: bool,

    pub pov: PovGeometry,
    pub lens: Lens,
    /// Charges checked by `validate-pov`.
    pub validate_l: Vec<i32>,
    /// Radial sample points of the `validate-pov` profile, spanning `[0, validate_r_max]`.
    pub validate_points: usize,
    pub validate_r_max: f64,

    pub quadrature: QuadratureConfig,

    /// Output directory; the environment variable, then `.`, when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    /// Explicit output file, overriding the directory and generated name.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let convention = EntropyConvention::default();
        RunConfig {
            command: Command::Spectrum,
            pump: ModeFamily::LaguerreGauss,
            l_p: 0,
            p: 0,
            signal: ModeFamily::LaguerreGauss,
            idler: ModeFamily::LaguerreGauss,
            l_window: None,
            pair: None,
            l_p_values: vec![0, 1, 2, 3, 4],
            log_base: convention.log_base,
            normalize_weights: convention.normalize_weights,
            normalize_modes: convention.normalize_modes,
            all_conventions: false,
            pov: convention.pov,
            lens: Lens::default(),
            validate_l: vec![0, 1, 2, 3],
            validate_points: 81,
            validate_r_max: 2.0,
            quadrature: QuadratureConfig::default(),
            out_dir: None,
            output: None,
            format: Format::Csv,
        }
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

fn charge(field: &str, l: i32) -> Result<()> {
    if l.abs() <= MAX_CHARGE {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("|l| must be at most {MAX_CHARGE}, got {l}"),
        ))
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.pump == ModeFamily::BesselGauss {
            return Err(Error::config("pump", "must be lg or pov"));
        }
        charge("l_p", self.l_p)?;
        if self.p > 32 {
            return Err(Error::config(
                "p",
                format!("must be at most 32, got {}", self.p),
            ));
        }
        if self.pump == ModeFamily::PerfectVortex && self.p != 0 {
            return Err(Error::config("p", "POV pumps have no radial index"));
        }
        if let Some(w) = self.l_window {
            if w > MAX_AUTO_WINDOW {
                return Err(Error::config(
                    "l_window",
                    format!("must be at most {MAX_AUTO_WINDOW}, got {w}"),
                ));
            }
        }
        if let Some((l_s, l_i)) = self.pair {
            charge("pair", l_s)?;
            charge("pair", l_i)?;
        }
        if self.l_p_values.is_empty() {
            return Err(Error::config("l_p_values", "must not be empty"));
        }
        for &l in &self.l_p_values {
            charge("l_p_values", l)?;
        }
        if let LogBase::Dimension(d) = self.log_base {
            if d < 2 {
                return Err(Error::config(
                    "log_base",
                    format!("dimension must be at least 2, got {d}"),
                ));
            }
        }
        positive("pov.r0", self.pov.r0)?;
        positive("pov.w0", self.pov.w0)?;
        positive("lens.focal_length", self.lens.focal_length)?;
        positive("lens.wavenumber", self.lens.wavenumber)?;
        if self.validate_l.is_empty() {
            return Err(Error::config("validate_l", "must not be empty"));
        }
        for &l in &self.validate_l {
            charge("validate_l", l)?;
        }
        if self.validate_points < 2 {
            return Err(Error::config("validate_points", "must be at least 2"));
        }
        positive("validate_r_max", self.validate_r_max)?;
        self.quadrature.validate().map_err(|e| match e {
            Error::Config { field, message } => {
                Error::config(format!("quadrature.{field}"), message)
            }
            other => other,
        })?;
        self.scenario().validate()
    }

    pub fn pump_spec(&self) -> ModeSpec {
        match self.pump {
            ModeFamily::PerfectVortex => ModeSpec::pov(self.l_p, self.pov.r0, self.pov.w0),
            _ => ModeSpec::lg(self.l_p, self.p),
        }
    }

    pub fn scenario(&self) -> Scenario {
        Scenario {
            pump: self.pump_spec(),
            signal_family: self.signal,
            idler_family: self.idler,
            l_window: self.l_window,
            pov: self.pov,
            lg_waist: 1.0,
            normalize_modes: self.normalize_modes,
        }
    }

    pub fn convention(&self) -> EntropyConvention {
        EntropyConvention {
            log_base: self.log_base,
            normalize_weights: self.normalize_weights,
            normalize_modes: self.normalize_modes,
            pov: self.pov,
        }
    }

    /// Radii of the `validate-pov` profile.
    pub fn validate_radii(&self) -> Vec<f64> {
        let n = self.validate_points;
        (0..n)
            .map(|i| self.validate_r_max * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Output directory: the configured one, else the environment variable, else `.`.
    pub fn resolved_out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}
