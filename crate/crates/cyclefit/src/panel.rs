//! Sector-by-year observation panels: loading, validation, normalization,
//! and aggregation.
//!
//! A panel is a rectangular block of per-sector annual observations on a
//! gapless integer time grid. Internally time runs `t = 1..=N`; calendar
//! years are display metadata attached to the grid.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name given to the element-wise sum over all sectors.
pub const TOTAL_NAME: &str = "TOTAL";

/// Gapless integer time grid: `N` consecutive samples indexed `t = 1..=N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeGrid {
    /// Calendar year of the first sample (`t = 1`).
    pub t0_label: i32,
    /// Number of samples.
    pub n: usize,
}

impl TimeGrid {
    pub fn new(t0_label: i32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyPanel);
        }
        Ok(Self { t0_label, n })
    }

    /// Calendar year for the (possibly fractional) internal index `t`.
    pub fn year_of(&self, t: f64) -> f64 {
        f64::from(self.t0_label) + t - 1.0
    }

    /// Grid for the window covering the last `len` samples of `self`,
    /// ending `skip_tail` samples before the end.
    pub fn window(&self, len: usize, skip_tail: usize) -> Result<Self> {
        if len + skip_tail > self.n {
            return Err(Error::WindowTooLong {
                t: len,
                holdback: skip_tail,
                len: self.n,
            });
        }
        let start = self.n - skip_tail - len;
        TimeGrid::new(self.t0_label + start as i32, len)
    }
}

/// One named sector's observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorSeries {
    pub name: String,
    pub values: Vec<f64>,
}

impl SectorSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    name: name.clone(),
                    index,
                });
            }
        }
        Ok(Self { name, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// What the panel's observations measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelKind {
    Output,
    Consumption,
}

/// Rectangular sectors-by-time block of observations.
///
/// `scale` keeps, per series, the divisor applied by [`Panel::normalize`]
/// (1.0 while the panel is raw). All values are finite and every series has
/// exactly `grid.n` samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub grid: TimeGrid,
    pub kind: PanelKind,
    pub series: Vec<SectorSeries>,
    pub scale: Vec<f64>,
}

impl Panel {
    pub fn new(grid: TimeGrid, kind: PanelKind, series: Vec<SectorSeries>) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::EmptyPanel);
        }
        let mut seen = BTreeSet::new();
        for s in &series {
            if s.len() != grid.n {
                return Err(Error::LengthMismatch {
                    expected: grid.n,
                    got: s.len(),
                });
            }
            if !seen.insert(s.name.clone()) {
                return Err(Error::DuplicateSector(s.name.clone()));
            }
        }
        let scale = vec![1.0; series.len()];
        Ok(Self {
            grid,
            kind,
            series,
            scale,
        })
    }

    pub fn sector_names(&self) -> Vec<&str> {
        self.series.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&SectorSeries> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn scale_of(&self, name: &str) -> Option<f64> {
        self.series
            .iter()
            .position(|s| s.name == name)
            .map(|i| self.scale[i])
    }

    /// Divide each series by its own value at `t = 1`, recording the divisor
    /// in `scale`. Values at `t = 1` become exactly 1, so re-applying is a
    /// no-op apart from the scale bookkeeping.
    pub fn normalize(&self) -> Result<Panel> {
        let mut series = Vec::with_capacity(self.series.len());
        let mut scale = Vec::with_capacity(self.series.len());
        for (s, &old_scale) in self.series.iter().zip(&self.scale) {
            let base = s.values[0];
            if base == 0.0 {
                return Err(Error::ZeroBaseValue(s.name.clone()));
            }
            let values = s.values.iter().map(|v| v / base).collect();
            series.push(SectorSeries {
                name: s.name.clone(),
                values,
            });
            scale.push(old_scale * base);
        }
        Ok(Panel {
            grid: self.grid,
            kind: self.kind,
            series,
            scale,
        })
    }

    /// Sum sectors into groups. `grouping` maps every source sector to its
    /// target name and must cover the whole panel. Intended for raw
    /// (un-normalized) panels: sums of normalized series have no meaning.
    pub fn aggregate_sectors(&self, grouping: &BTreeMap<String, String>) -> Result<Panel> {
        if grouping.is_empty() {
            return Err(Error::EmptyGrouping);
        }
        for source in grouping.keys() {
            if self.get(source).is_none() {
                return Err(Error::UnknownSector(source.clone()));
            }
        }
        // Targets keep the order in which they first appear.
        let mut targets: Vec<String> = Vec::new();
        let mut sums: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for s in &self.series {
            let target = grouping
                .get(&s.name)
                .ok_or_else(|| Error::UngroupedSector(s.name.clone()))?;
            let acc = sums.entry(target.clone()).or_insert_with(|| {
                targets.push(target.clone());
                vec![0.0; self.grid.n]
            });
            for (a, v) in acc.iter_mut().zip(&s.values) {
                *a += v;
            }
        }
        let series = targets
            .into_iter()
            .map(|name| {
                let values = sums.remove(&name).expect("target accumulated");
                SectorSeries { name, values }
            })
            .collect();
        Panel::new(self.grid, self.kind, series)
    }

    /// Element-wise sum over all sectors, named [`TOTAL_NAME`].
    pub fn aggregate_total(&self) -> Result<SectorSeries> {
        if self.series.is_empty() {
            return Err(Error::EmptyPanel);
        }
        let mut values = vec![0.0; self.grid.n];
        for s in &self.series {
            for (a, v) in values.iter_mut().zip(&s.values) {
                *a += v;
            }
        }
        Ok(SectorSeries {
            name: TOTAL_NAME.to_string(),
            values,
        })
    }

    /// Panel restricted to the last `len` samples ending `skip_tail` samples
    /// before the end of the data.
    pub fn window(&self, len: usize, skip_tail: usize) -> Result<Panel> {
        let grid = self.grid.window(len, skip_tail)?;
        let start = self.grid.n - skip_tail - len;
        let series = self
            .series
            .iter()
            .map(|s| SectorSeries {
                name: s.name.clone(),
                values: s.values[start..start + len].to_vec(),
            })
            .collect();
        let mut panel = Panel::new(grid, self.kind, series)?;
        panel.scale = self.scale.clone();
        Ok(panel)
    }
}

/// Read a panel from CSV: header `year,<sector>,...`, one row per
/// consecutive year, decimal-point numbers.
pub fn load_panel(path: impl AsRef<Path>, kind: PanelKind) -> Result<Panel> {
    let mut reader = csv::Reader::from_path(path.as_ref())?;
    let headers = reader.headers()?.clone();
    let mut cols = headers.iter();
    match cols.next() {
        Some("year") => {}
        _ => return Err(Error::MissingColumn("year".to_string())),
    }
    let names: Vec<String> = cols.map(|c| c.to_string()).collect();
    if names.is_empty() {
        return Err(Error::EmptyPanel);
    }
    let mut seen = BTreeSet::new();
    for name in &names {
        if name.trim().is_empty() {
            return Err(Error::MissingColumn("<sector name>".to_string()));
        }
        if !seen.insert(name.clone()) {
            return Err(Error::DuplicateSector(name.clone()));
        }
    }

    let mut years: Vec<i32> = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        let row = row_idx + 1;
        let year_cell = record.get(0).unwrap_or("").trim();
        let year: i32 = year_cell.parse().map_err(|_| Error::NonNumericCell {
            row,
            col: "year".to_string(),
        })?;
        if let Some(&prev) = years.last() {
            if year != prev + 1 {
                return Err(Error::GapInYears {
                    row,
                    expected: prev + 1,
                    found: year,
                });
            }
        }
        years.push(year);
        for (j, name) in names.iter().enumerate() {
            let cell = record.get(j + 1).unwrap_or("").trim();
            let value: f64 = cell.parse().map_err(|_| Error::NonNumericCell {
                row,
                col: name.clone(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonNumericCell {
                    row,
                    col: name.clone(),
                });
            }
            columns[j].push(value);
        }
    }
    if years.is_empty() {
        return Err(Error::EmptyPanel);
    }

    let grid = TimeGrid::new(years[0], years.len())?;
    let series = names
        .into_iter()
        .zip(columns)
        .map(|(name, values)| SectorSeries { name, values })
        .collect();
    Panel::new(grid, kind, series)
}
