//! OAM spectra of down-converted photon pairs.
//!
//! Overlap integrals between a pump mode and signal/idler projection modes
//! (Laguerre-Gauss or perfect optical vortex) give the biphoton amplitudes
//! `C_{l_s, l_i}`. From them the crate builds normalized OAM spectra, their
//! Schmidt weights and the von Neumann entropy of the reduced state.
//!
//! ```
//! use spdc_oam::overlap::closed_form_coefficient;
//! use spdc_oam::spectrum::{build_spectrum, global_maxima, PovGeometry, ScenarioKind};
//! use spdc_oam::QuadratureConfig;
//!
//! assert!((closed_form_coefficient(0, 0, 0) - 0.5319230405).abs() < 1e-10);
//!
//! let scenario = ScenarioKind::LgToLg.scenario(1, PovGeometry::default());
//! let grid = build_spectrum(&scenario, &QuadratureConfig::default()).unwrap();
//! let top: Vec<_> = global_maxima(&grid).iter().map(|m| (m.l_s, m.l_i)).collect();
//! assert_eq!(top, vec![(0, 1), (1, 0)]);
//! ```

pub mod config;
pub mod entanglement;
pub mod error;
pub mod lens;
pub mod modes;
pub mod output;
pub mod overlap;
pub mod quadrature;
pub mod run;
pub mod special;
pub mod spectrum;

pub use error::{Error, Result};
pub use modes::{Mode, ModeFamily, ModeSpec};
pub use quadrature::QuadratureConfig;
