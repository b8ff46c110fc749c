//! Trend-plus-harmonics regression on an exact frequency grid.
//!
//! A series of length `N` is modelled additively as
//!
//! ```text
//! x_t = x̄ + b (t − t̄) + Σ_k (a_k cos ω_k t + b_k sin ω_k t) + ν_t,
//! ```
//!
//! with `t = 1..=N`, `t̄ = (N + 1)/2` and frequencies drawn from the grid
//! `ω_k = 2πk/N`, on which every harmonic averages to zero over the window
//! and distinct harmonics are mutually orthogonal.
//!
//! Two estimators are provided. The normal-equations solver is the
//! authoritative least-squares minimizer and carries the coefficient
//! covariance used for significance testing. The closed-form estimator
//! evaluates the explicit per-coefficient formulas that the orthogonal grid
//! admits; it is kept verbatim and cross-checked against the solver by
//! [`compare_fits`] rather than silently corrected.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::SectorSeries;

/// One admissible frequency of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub k: usize,
    pub omega: f64,
}

/// Ascending set of admissible harmonics for a window of length `n`.
///
/// Every entry satisfies `omega = 2πk/n` with `1 ≤ k < n/2`; the strict
/// Nyquist bound keeps the sine column away from identical zero on the
/// integer grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySpectrum {
    n: usize,
    frequencies: Vec<Frequency>,
}

/// Angular frequency of harmonic `k` on a window of length `n`.
pub fn omega(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

impl FrequencySpectrum {
    pub fn new(n: usize, ks: &[usize]) -> Result<Self> {
        if n < 4 {
            return Err(Error::WindowTooShort(n));
        }
        if ks.is_empty() {
            return Err(Error::EmptyKSet);
        }
        let mut sorted: Vec<usize> = ks.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut frequencies = Vec::with_capacity(sorted.len());
        for &k in &sorted {
            if k == 0 {
                return Err(Error::InadmissibleK { k, n });
            }
            if 2 * k >= n {
                return Err(Error::KAboveNyquist { k, n });
            }
            frequencies.push(Frequency { k, omega: omega(k, n) });
        }
        Ok(Self { n, frequencies })
    }

    /// Spectrum with no harmonics, for trend-only fits.
    pub fn trend_only(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::WindowTooShort(n));
        }
        Ok(Self {
            n,
            frequencies: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frequencies(&self) -> &[Frequency] {
        &self.frequencies
    }

    pub fn ks(&self) -> Vec<usize> {
        self.frequencies.iter().map(|f| f.k).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

/// Which estimator produced a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    ClosedForm,
    NormalEquations,
}

/// Fitted cosine/sine pair of one harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub k: usize,
    /// Cosine coefficient.
    pub a: f64,
    /// Sine coefficient.
    pub b: f64,
    /// Amplitude `sqrt(a² + b²)`.
    pub c: f64,
}

impl HarmonicTerm {
    pub fn new(k: usize, a: f64, b: f64) -> Self {
        Self {
            k,
            a,
            b,
            c: a.hypot(b),
        }
    }
}

/// Fitted parameters of one series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTrendModel {
    /// Sample mean of the fitted window.
    pub x_bar: f64,
    /// Mean time `(N + 1)/2`.
    pub t_bar: f64,
    /// Trend slope.
    pub b_slope: f64,
    /// Harmonic terms, ascending in `k`.
    pub terms: Vec<HarmonicTerm>,
    /// Fit window length.
    pub n: usize,
    pub estimator: Estimator,
}

impl HarmonicTrendModel {
    /// Model value at (possibly fractional, possibly out-of-window) time `t`.
    pub fn evaluate(&self, t: f64) -> f64 {
        let mut v = self.x_bar + self.b_slope * (t - self.t_bar);
        for term in &self.terms {
            let w = omega(term.k, self.n) * t;
            v += term.a * w.cos() + term.b * w.sin();
        }
        v
    }

    /// Analytic time derivative at `t`.
    pub fn derivative(&self, t: f64) -> f64 {
        let mut v = self.b_slope;
        for term in &self.terms {
            let om = omega(term.k, self.n);
            let w = om * t;
            v += om * (-term.a * w.sin() + term.b * w.cos());
        }
        v
    }

    /// Model with every coefficient multiplied by `factor`; maps a fit of a
    /// rescaled series back to original units.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            x_bar: self.x_bar * factor,
            t_bar: self.t_bar,
            b_slope: self.b_slope * factor,
            terms: self
                .terms
                .iter()
                .map(|t| HarmonicTerm::new(t.k, t.a * factor, t.b * factor))
                .collect(),
            n: self.n,
            estimator: self.estimator,
        }
    }

    pub fn ks(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.k).collect()
    }

    /// Number of fitted columns: trend plus a cosine/sine pair per harmonic.
    pub fn column_count(&self) -> usize {
        1 + 2 * self.terms.len()
    }
}

/// A fitted series: model, residuals, and (for the normal-equations
/// estimator) the coefficient covariance `s²(XᵀX)⁻¹` over the columns
/// `(b, a_k, b_k, ...)`.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub sector: String,
    pub model: HarmonicTrendModel,
    /// Residuals `ν_t = x_t − model(t)`.
    pub residuals: Vec<f64>,
    /// Detrended values `ε_t = x_t − x̄ − b̂(t − t̄)`.
    pub detrended: Vec<f64>,
    /// Present only for the normal-equations estimator with at least one
    /// residual degree of freedom.
    pub covariance: Option<DMatrix<f64>>,
}

impl FitResult {
    /// Residual sum of squares, twice: `S = Σ ν_t²` computed directly, and
    /// the orthogonal-grid identity `Σ ε_t² − (N/2) Σ ĉ_k²`. The two agree
    /// on exact-spectrum fits; both are returned so callers can compare.
    pub fn rss(&self) -> (f64, f64) {
        let direct: f64 = self.residuals.iter().map(|r| r * r).sum();
        let eps_sq: f64 = self.detrended.iter().map(|e| e * e).sum();
        let c_sq: f64 = self.model.terms.iter().map(|t| t.c * t.c).sum();
        let formula = eps_sq - 0.5 * self.model.n as f64 * c_sq;
        (direct, formula)
    }

    /// Total variance around the mean, `Σ (x_t − x̄)²`.
    pub fn total_variance(&self) -> f64 {
        self.detrended
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let y = e + self.model.b_slope * ((i + 1) as f64 - self.model.t_bar);
                y * y
            })
            .sum()
    }

    pub fn column_count(&self) -> usize {
        self.model.column_count()
    }

    /// Coefficient names in covariance order.
    pub fn coefficient_names(&self) -> Vec<String> {
        let mut names = vec!["b".to_string()];
        for term in &self.model.terms {
            names.push(format!("a{}", term.k));
            names.push(format!("b{}", term.k));
        }
        names
    }

    /// Coefficient estimates in covariance order.
    pub fn coefficient_values(&self) -> Vec<f64> {
        let mut values = vec![self.model.b_slope];
        for term in &self.model.terms {
            values.push(term.a);
            values.push(term.b);
        }
        values
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Design matrix over `t = 1..=N`: columns `t − t̄`, then
/// `cos ω_k t, sin ω_k t` per harmonic in ascending `k`.
pub fn design_matrix(spectrum: &FrequencySpectrum) -> DMatrix<f64> {
    let n = spectrum.n();
    let t_bar = (n as f64 + 1.0) / 2.0;
    let cols = 1 + 2 * spectrum.frequencies().len();
    let mut x = DMatrix::zeros(n, cols);
    for row in 0..n {
        let t = (row + 1) as f64;
        x[(row, 0)] = t - t_bar;
        for (j, f) in spectrum.frequencies().iter().enumerate() {
            let w = f.omega * t;
            x[(row, 1 + 2 * j)] = w.cos();
            x[(row, 2 + 2 * j)] = w.sin();
        }
    }
    x
}

fn check_length(series: &SectorSeries, spectrum: &FrequencySpectrum) -> Result<()> {
    if series.len() != spectrum.n() {
        return Err(Error::LengthMismatch {
            expected: spectrum.n(),
            got: series.len(),
        });
    }
    Ok(())
}

fn build_result(
    series: &SectorSeries,
    spectrum: &FrequencySpectrum,
    x_bar: f64,
    b_slope: f64,
    terms: Vec<HarmonicTerm>,
    estimator: Estimator,
    covariance: Option<DMatrix<f64>>,
) -> FitResult {
    let n = spectrum.n();
    let t_bar = (n as f64 + 1.0) / 2.0;
    let model = HarmonicTrendModel {
        x_bar,
        t_bar,
        b_slope,
        terms,
        n,
        estimator,
    };
    let detrended: Vec<f64> = series
        .values
        .iter()
        .enumerate()
        .map(|(i, &x)| x - x_bar - b_slope * ((i + 1) as f64 - t_bar))
        .collect();
    let residuals: Vec<f64> = series
        .values
        .iter()
        .enumerate()
        .map(|(i, &x)| x - model.evaluate((i + 1) as f64))
        .collect();
    FitResult {
        sector: series.name.clone(),
        model,
        residuals,
        detrended,
        covariance,
    }
}

/// Closed-form least-squares estimates on the exact frequency grid.
///
/// The slope uses the explicit ratio whose denominator is
/// `(N²−1)/6 − Σ_k 1/sin²(ω_k/2)`; the harmonic coefficients then follow
/// from the grid cross-moments. No covariance is produced.
pub fn fit_closed_form(series: &SectorSeries, spectrum: &FrequencySpectrum) -> Result<FitResult> {
    check_length(series, spectrum)?;
    let n = spectrum.n();
    let nf = n as f64;
    let x_bar = mean(&series.values);

    let cots: Vec<f64> = spectrum
        .frequencies()
        .iter()
        .map(|f| 1.0 / (0.5 * f.omega).tan())
        .collect();
    let inv_sin_sq: f64 = spectrum
        .frequencies()
        .iter()
        .map(|f| {
            let s = (0.5 * f.omega).sin();
            1.0 / (s * s)
        })
        .sum();

    let trend_moment = (nf * nf - 1.0) / 6.0;
    let denominator = trend_moment - inv_sin_sq;
    if denominator.abs() <= 1e-12 * (trend_moment + inv_sin_sq) {
        return Err(Error::DegenerateDenominator(denominator));
    }

    let mut numerator = 0.0;
    for (i, &x) in series.values.iter().enumerate() {
        let t = (i + 1) as f64;
        let mut weight = t;
        for (f, &cot) in spectrum.frequencies().iter().zip(&cots) {
            let w = f.omega * t;
            weight += cot * w.sin() - w.cos();
        }
        numerator += (x - x_bar) * weight;
    }
    numerator *= 2.0 / nf;
    let b_slope = numerator / denominator;

    let mut terms = Vec::with_capacity(spectrum.frequencies().len());
    for (f, &cot) in spectrum.frequencies().iter().zip(&cots) {
        let mut cos_sum = 0.0;
        let mut sin_sum = 0.0;
        for (i, &x) in series.values.iter().enumerate() {
            let w = f.omega * (i + 1) as f64;
            cos_sum += x * w.cos();
            sin_sum += x * w.sin();
        }
        let a = 2.0 / nf * cos_sum - b_slope;
        let b = 2.0 / nf * sin_sum + b_slope * cot;
        terms.push(HarmonicTerm::new(f.k, a, b));
    }

    Ok(build_result(
        series,
        spectrum,
        x_bar,
        b_slope,
        terms,
        Estimator::ClosedForm,
        None,
    ))
}

/// Exact least-squares fit via an orthogonal decomposition of the design
/// matrix, with rank-deficiency detection. Produces the coefficient
/// covariance `s²(XᵀX)⁻¹` whenever a residual degree of freedom remains.
pub fn fit_normal_equations(
    series: &SectorSeries,
    spectrum: &FrequencySpectrum,
) -> Result<FitResult> {
    check_length(series, spectrum)?;
    let n = spectrum.n();
    let x_bar = mean(&series.values);
    let y = DVector::from_iterator(n, series.values.iter().map(|&v| v - x_bar));

    let design = design_matrix(spectrum);
    let cols = design.ncols();
    let svd = design.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let tol = f64::EPSILON * n.max(cols) as f64 * sigma_max;
    let rank = svd.rank(tol);
    if rank < cols {
        return Err(Error::RankDeficientDesign { rank, cols });
    }
    let beta = svd
        .solve(&y, tol)
        .map_err(|_| Error::RankDeficientDesign { rank, cols })?;

    // (XᵀX)⁻¹ = V Σ⁻² Vᵀ from the same decomposition.
    let v_t = svd.v_t.as_ref().expect("svd computed with v_t");
    let mut xtx_inv = DMatrix::zeros(cols, cols);
    for i in 0..cols {
        for j in 0..cols {
            let mut sum = 0.0;
            for r in 0..cols {
                let s = svd.singular_values[r];
                sum += v_t[(r, i)] * v_t[(r, j)] / (s * s);
            }
            xtx_inv[(i, j)] = sum;
        }
    }

    let b_slope = beta[0];
    let terms: Vec<HarmonicTerm> = spectrum
        .frequencies()
        .iter()
        .enumerate()
        .map(|(j, f)| HarmonicTerm::new(f.k, beta[1 + 2 * j], beta[2 + 2 * j]))
        .collect();

    let residual = &y - &design * &beta;
    let rss: f64 = residual.iter().map(|r| r * r).sum();
    let covariance = if n > cols {
        let s2 = rss / (n - cols) as f64;
        Some(xtx_inv * s2)
    } else {
        None
    };

    Ok(build_result(
        series,
        spectrum,
        x_bar,
        b_slope,
        terms,
        Estimator::NormalEquations,
        covariance,
    ))
}

/// Per-coefficient comparison of two fits of the same series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientDiscrepancy {
    pub coef: String,
    pub closed_form: f64,
    pub normal_eq: f64,
    /// `|closed − normal| / max(|closed|, |normal|, 1e-9)`.
    pub rel_diff: f64,
}

/// Compare the closed-form estimates against the normal-equations fit,
/// coefficient by coefficient. Entries cover every coefficient; callers
/// filter on `rel_diff` to surface deviations.
pub fn compare_fits(closed: &FitResult, normal: &FitResult) -> Vec<CoefficientDiscrepancy> {
    let names = normal.coefficient_names();
    let cf = closed.coefficient_values();
    let ne = normal.coefficient_values();
    debug_assert_eq!(cf.len(), ne.len());
    names
        .into_iter()
        .zip(cf.into_iter().zip(ne))
        .map(|(coef, (closed_form, normal_eq))| {
            let scale = closed_form.abs().max(normal_eq.abs()).max(1e-9);
            CoefficientDiscrepancy {
                coef,
                closed_form,
                normal_eq,
                rel_diff: (closed_form - normal_eq).abs() / scale,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(values: Vec<f64>) -> SectorSeries {
        SectorSeries::new("test", values).unwrap()
    }

    fn model_series(model: &HarmonicTrendModel) -> SectorSeries {
        series((1..=model.n).map(|t| model.evaluate(t as f64)).collect())
    }

    /// Residual sum of squares of arbitrary parameters, straight from the
    /// definition; independent of the fitting code paths.
    fn rss_of_params(
        values: &[f64],
        spectrum: &FrequencySpectrum,
        x_bar: f64,
        b: f64,
        coefs: &[(f64, f64)],
    ) -> f64 {
        let n = values.len() as f64;
        let t_bar = (n + 1.0) / 2.0;
        values
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let t = (i + 1) as f64;
                let mut fitted = x_bar + b * (t - t_bar);
                for (f, &(a, bb)) in spectrum.frequencies().iter().zip(coefs) {
                    let w = f.omega * t;
                    fitted += a * w.cos() + bb * w.sin();
                }
                let r = x - fitted;
                r * r
            })
            .sum()
    }

    #[test]
    fn spectrum_frequencies_are_exact() {
        let s = FrequencySpectrum::new(50, &[1]).unwrap();
        assert_eq!(s.frequencies()[0].omega, 2.0 * PI / 50.0);
        assert!((s.frequencies()[0].omega - 0.125_663_7).abs() < 1e-7);

        let s = FrequencySpectrum::new(50, &[6, 1, 3, 2]).unwrap();
        assert_eq!(s.ks(), vec![1, 2, 3, 6]);
        for f in s.frequencies() {
            assert_eq!(f.omega, 2.0 * PI * f.k as f64 / 50.0);
        }
    }

    #[test]
    fn spectrum_rejects_nyquist_and_empty() {
        assert!(matches!(
            FrequencySpectrum::new(50, &[25]),
            Err(Error::KAboveNyquist { k: 25, n: 50 })
        ));
        assert!(matches!(
            FrequencySpectrum::new(50, &[]),
            Err(Error::EmptyKSet)
        ));
        assert!(matches!(
            FrequencySpectrum::new(50, &[0]),
            Err(Error::InadmissibleK { k: 0, .. })
        ));
        assert!(matches!(
            FrequencySpectrum::new(3, &[1]),
            Err(Error::WindowTooShort(3))
        ));
    }

    #[test]
    fn spectrum_harmonics_average_to_zero() {
        for n in [4usize, 12, 50, 51] {
            for k in 1..(n + 1) / 2 {
                if 2 * k >= n {
                    continue;
                }
                let om = omega(k, n);
                let cos_sum: f64 = (1..=n).map(|t| (om * t as f64).cos()).sum();
                let sin_sum: f64 = (1..=n).map(|t| (om * t as f64).sin()).sum();
                assert!(cos_sum.abs() < 1e-10, "cos sum {cos_sum} at n={n} k={k}");
                assert!(sin_sum.abs() < 1e-10, "sin sum {sin_sum} at n={n} k={k}");
            }
        }
    }

    #[test]
    fn closed_form_constant_series_is_flat() {
        let s = series(vec![5.0; 50]);
        let spectrum = FrequencySpectrum::new(50, &[1, 2, 3, 6]).unwrap();
        let fit = fit_closed_form(&s, &spectrum).unwrap();
        assert_eq!(fit.model.x_bar, 5.0);
        assert!(fit.model.b_slope.abs() < 1e-12);
        for term in &fit.model.terms {
            assert!(term.a.abs() < 1e-12 && term.b.abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_recovers_pure_cosine() {
        let n = 50;
        let om = omega(2, n);
        let s = series((1..=n).map(|t| 3.0 * (om * t as f64).cos()).collect());
        let spectrum = FrequencySpectrum::new(n, &[2]).unwrap();
        let fit = fit_closed_form(&s, &spectrum).unwrap();
        assert!((fit.model.terms[0].a - 3.0).abs() < 1e-9);
        assert!(fit.model.terms[0].b.abs() < 1e-9);
        assert!(fit.model.b_slope.abs() < 1e-9);
    }

    #[test]
    fn closed_form_matches_normal_equations_on_noisy_series() {
        let n = 50;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let om = omega(1, n);
        let s = series(
            (1..=n)
                .map(|t| {
                    let t = t as f64;
                    2.0 + 0.5 * t
                        + 2.0 * (om * t).cos()
                        + 0.1 * (rng.random::<f64>() - 0.5)
                })
                .collect(),
        );
        let spectrum = FrequencySpectrum::new(n, &[1, 2]).unwrap();
        let closed = fit_closed_form(&s, &spectrum).unwrap();
        let normal = fit_normal_equations(&s, &spectrum).unwrap();
        for d in compare_fits(&closed, &normal) {
            assert!(
                d.rel_diff < 1e-9,
                "coefficient {} deviates: {} vs {}",
                d.coef,
                d.closed_form,
                d.normal_eq
            );
        }
    }

    #[test]
    fn closed_form_degenerate_denominator() {
        // The full odd-window spectrum makes the trend collinear with the
        // harmonic columns and the slope denominator vanish exactly.
        let s = series(vec![1.0, 2.0, 1.5, 0.5, 1.2]);
        let spectrum = FrequencySpectrum::new(5, &[1, 2]).unwrap();
        assert!(matches!(
            fit_closed_form(&s, &spectrum),
            Err(Error::DegenerateDenominator(_))
        ));
        // The same design is rank deficient for the solver.
        assert!(matches!(
            fit_normal_equations(&s, &spectrum),
            Err(Error::RankDeficientDesign { .. })
        ));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let s = series(vec![1.0; 10]);
        let spectrum = FrequencySpectrum::new(50, &[1]).unwrap();
        assert!(matches!(
            fit_closed_form(&s, &spectrum),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            fit_normal_equations(&s, &spectrum),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn normal_equations_exact_trend() {
        let n = 24;
        let s = series((1..=n).map(|t| 1.0 + 2.0 * t as f64).collect());
        let spectrum = FrequencySpectrum::new(n, &[1]).unwrap();
        let fit = fit_normal_equations(&s, &spectrum).unwrap();
        assert!((fit.model.b_slope - 2.0).abs() < 1e-10);
        assert!(fit.model.terms[0].c < 1e-10);
        let (rss, _) = fit.rss();
        assert!(rss < 1e-18);
    }

    #[test]
    fn normal_equations_minimizes_rss() {
        // Brute-force optimality: every ±1e-4 perturbation of any single
        // coefficient strictly increases the residual sum of squares.
        let n = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let s = series((0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect());
        let spectrum = FrequencySpectrum::new(n, &[1, 2]).unwrap();
        let fit = fit_normal_equations(&s, &spectrum).unwrap();

        let base_coefs: Vec<(f64, f64)> =
            fit.model.terms.iter().map(|t| (t.a, t.b)).collect();
        let base = rss_of_params(
            &s.values,
            &spectrum,
            fit.model.x_bar,
            fit.model.b_slope,
            &base_coefs,
        );
        let (direct, _) = fit.rss();
        assert!((base - direct).abs() < 1e-10);

        for delta in [1e-4, -1e-4] {
            let perturbed = rss_of_params(
                &s.values,
                &spectrum,
                fit.model.x_bar,
                fit.model.b_slope + delta,
                &base_coefs,
            );
            assert!(perturbed > base, "slope perturbation did not increase S");
            for idx in 0..base_coefs.len() {
                for part in 0..2 {
                    let mut coefs = base_coefs.clone();
                    if part == 0 {
                        coefs[idx].0 += delta;
                    } else {
                        coefs[idx].1 += delta;
                    }
                    let perturbed = rss_of_params(
                        &s.values,
                        &spectrum,
                        fit.model.x_bar,
                        fit.model.b_slope,
                        &coefs,
                    );
                    assert!(perturbed > base, "perturbation did not increase S");
                }
            }
        }
    }

    #[test]
    fn rss_identity_on_pure_harmonic() {
        let n = 50;
        let om = omega(2, n);
        let s = series((1..=n).map(|t| 3.0 * (om * t as f64).cos()).collect());
        let spectrum = FrequencySpectrum::new(n, &[2]).unwrap();
        let fit = fit_normal_equations(&s, &spectrum).unwrap();
        let (direct, formula) = fit.rss();
        assert!(direct < 1e-18);
        assert!(formula.abs() < 1e-9);
        let eps_sq: f64 = fit.detrended.iter().map(|e| e * e).sum();
        assert!((eps_sq - 0.5 * n as f64 * 9.0).abs() < 1e-8);
    }

    #[test]
    fn rss_identity_on_noisy_series() {
        let n = 50;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let om1 = omega(1, n);
        let s = series(
            (1..=n)
                .map(|t| {
                    let t = t as f64;
                    1.0 + 0.3 * t + 1.5 * (om1 * t).sin() + 0.2 * (rng.random::<f64>() - 0.5)
                })
                .collect(),
        );
        let spectrum = FrequencySpectrum::new(n, &[1, 3]).unwrap();
        let fit = fit_normal_equations(&s, &spectrum).unwrap();
        let (direct, formula) = fit.rss();
        let eps_sq: f64 = fit.detrended.iter().map(|e| e * e).sum();
        assert!((direct - formula).abs() / eps_sq.max(1e-12) < 1e-8);
    }

    #[test]
    fn evaluate_zero_model_returns_mean() {
        let model = HarmonicTrendModel {
            x_bar: 4.2,
            t_bar: 25.5,
            b_slope: 0.0,
            terms: vec![],
            n: 50,
            estimator: Estimator::NormalEquations,
        };
        for t in [-10.0, 0.0, 1.0, 25.5, 50.0, 99.0] {
            assert_eq!(model.evaluate(t), 4.2);
        }
    }

    #[test]
    fn evaluate_is_periodic_up_to_trend() {
        let model = HarmonicTrendModel {
            x_bar: 1.0,
            t_bar: 25.5,
            b_slope: 0.7,
            terms: vec![HarmonicTerm::new(1, 2.0, -1.0), HarmonicTerm::new(3, 0.5, 0.2)],
            n: 50,
            estimator: Estimator::NormalEquations,
        };
        for t in [0.0, 1.0, 17.3, 50.0] {
            let diff = model.evaluate(t + 50.0) - model.evaluate(t);
            assert!((diff - 0.7 * 50.0).abs() < 1e-9);
        }
    }

    #[test]
    fn evaluate_matches_literal_intercept_form() {
        // Aggregate-economy fixture: intercept/slope form with four waves.
        let intercept = -7.10705;
        let slope = 3.3429;
        let coefs = [
            (1usize, 7.2722, -8.898),
            (2, 4.4042, -4.1148),
            (3, -1.3436, -0.1239),
            (6, 0.2233, -0.0976),
        ];
        let n = 50;
        let t_bar = 25.5;
        let model = HarmonicTrendModel {
            x_bar: intercept + slope * t_bar,
            t_bar,
            b_slope: slope,
            terms: coefs
                .iter()
                .map(|&(k, a, b)| HarmonicTerm::new(k, a, b))
                .collect(),
            n,
            estimator: Estimator::NormalEquations,
        };
        for t in [1.0, 10.0, 25.5, 50.0, 60.0] {
            let mut expected = intercept + slope * t;
            for &(k, a, b) in &coefs {
                let w = omega(k, n) * t;
                expected += a * w.cos() + b * w.sin();
            }
            assert!((model.evaluate(t) - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn derivative_of_pure_trend_is_constant() {
        let model = HarmonicTrendModel {
            x_bar: 0.0,
            t_bar: 25.5,
            b_slope: 2.0,
            terms: vec![],
            n: 50,
            estimator: Estimator::NormalEquations,
        };
        for t in [0.0, 1.0, 33.3] {
            assert_eq!(model.derivative(t), 2.0);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let model = HarmonicTrendModel {
            x_bar: 2.0,
            t_bar: 25.5,
            b_slope: 0.4,
            terms: vec![HarmonicTerm::new(1, 1.5, -0.7), HarmonicTerm::new(6, 0.3, 0.9)],
            n: 50,
            estimator: Estimator::NormalEquations,
        };
        let h = 1e-5;
        for t in [-3.0, 1.0, 12.7, 42.0, 55.0] {
            let fd = (model.evaluate(t + h) - model.evaluate(t - h)) / (2.0 * h);
            assert!((model.derivative(t) - fd).abs() < 1e-6);
        }
    }

    #[test]
    fn refitting_model_trajectory_is_idempotent() {
        let model = HarmonicTrendModel {
            x_bar: 3.0,
            t_bar: 25.5,
            b_slope: 0.25,
            terms: vec![HarmonicTerm::new(1, 1.0, 0.5), HarmonicTerm::new(4, -0.6, 0.2)],
            n: 50,
            estimator: Estimator::NormalEquations,
        };
        let s = model_series(&model);
        let spectrum = FrequencySpectrum::new(50, &[1, 4]).unwrap();
        for fit in [
            fit_normal_equations(&s, &spectrum).unwrap(),
            fit_closed_form(&s, &spectrum).unwrap(),
        ] {
            assert!((fit.model.x_bar - 3.0).abs() < 1e-9);
            assert!((fit.model.b_slope - 0.25).abs() < 1e-9);
            for (t, expected) in fit.model.terms.iter().zip(&model.terms) {
                assert!((t.a - expected.a).abs() < 1e-9);
                assert!((t.b - expected.b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn scaled_model_scales_values() {
        let model = HarmonicTrendModel {
            x_bar: 3.0,
            t_bar: 25.5,
            b_slope: 0.25,
            terms: vec![HarmonicTerm::new(2, 1.0, 0.5)],
            n: 50,
            estimator: Estimator::NormalEquations,
        };
        let scaled = model.scaled(10.0);
        for t in [1.0, 20.0, 51.0] {
            assert!((scaled.evaluate(t) - 10.0 * model.evaluate(t)).abs() < 1e-9);
            assert!((scaled.derivative(t) - 10.0 * model.derivative(t)).abs() < 1e-9);
        }
    }
}
