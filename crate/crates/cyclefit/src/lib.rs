//! Cyclical-dynamics toolkit for multi-sector annual panels.
//!
//! The pipeline: ingest sector-by-year CSV panels, fit trend-plus-harmonics
//! regressions on an exact frequency grid, select significant harmonics and
//! the fluctuation period, derive determination coefficients, identify the
//! inter-sector system matrices from the fitted trajectories, and produce
//! forecasts, phase schedules, and forward simulations.
//!
//! All types are immutable value types; operations are pure functions, so
//! per-sector work can run concurrently without coordination.

pub mod error;
pub mod harmonic;
pub mod panel;

pub use error::{Error, Result};
pub use harmonic::{
    fit_closed_form, fit_normal_equations, Estimator, FitResult, FrequencySpectrum,
    HarmonicTerm, HarmonicTrendModel,
};
pub use panel::{load_panel, Panel, PanelKind, SectorSeries, TimeGrid, TOTAL_NAME};
