//! Value types shared by the generators, distances and file formats.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A multidimensional time series: `len` rows (time steps) of `dim` values,
/// stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    dim: usize,
}

impl TimeSeries {
    /// Builds a series from row-major values. Requires at least one row, at
    /// least one column and only finite entries.
    pub fn new(values: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("time series dimensionality must be at least 1"));
        }
        if values.is_empty() {
            return Err(Error::invalid("time series must have at least one point"));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!(
                "{} values do not form rows of dimensionality {dim}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite value at time step {}, dimension {}",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { values, dim })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::invalid(format!(
                    "row {i} has {} values, expected {dim}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::new(values, dim)
    }

    /// One-dimensional series from scalar samples.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec(), 1)
    }

    /// Internal constructor for generator output that is finite by construction.
    pub(crate) fn from_raw(values: Vec<f64>, dim: usize) -> Self {
        debug_assert!(dim > 0 && !values.is_empty() && values.len().is_multiple_of(dim));
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self { values, dim }
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn view(&self) -> SeriesView<'_> {
        SeriesView {
            values: &self.values,
            dim: self.dim,
        }
    }
}

/// Borrowed row-major view of a series. Unlike [`TimeSeries`] it may be
/// empty, which edit-style distances accept.
#[derive(Debug, Clone, Copy)]
pub struct SeriesView<'a> {
    values: &'a [f64],
    dim: usize,
}

impl<'a> SeriesView<'a> {
    pub fn new(values: &'a [f64], dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimensionality must be at least 1"));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!(
                "{} values do not form rows of dimensionality {dim}",
                values.len()
            )));
        }
        Ok(Self { values, dim })
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &'a [f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }
}

impl<'a> From<&'a TimeSeries> for SeriesView<'a> {
    fn from(s: &'a TimeSeries) -> Self {
        s.view()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries {
    label: String,
    series: TimeSeries,
}

impl LabeledSeries {
    pub fn new(label: impl Into<String>, series: TimeSeries) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::invalid("class label must be non-empty"));
        }
        Ok(Self { label, series })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn series(&self) -> &TimeSeries {
        &self.series
    }
}

/// Provenance recorded alongside a dataset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetMeta {
    pub generator: String,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub rng: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    items: Vec<LabeledSeries>,
    dim: usize,
    meta: DatasetMeta,
}

impl LabeledDataset {
    pub fn new(items: Vec<LabeledSeries>, meta: DatasetMeta) -> Result<Self> {
        let Some(first) = items.first() else {
            return Err(Error::invalid("dataset must contain at least one series"));
        };
        let dim = first.series.dim();
        if let Some((i, bad)) = items.iter().enumerate().find(|(_, it)| it.series.dim() != dim) {
            return Err(Error::invalid(format!(
                "series {i} has dimensionality {}, expected {dim}",
                bad.series.dim()
            )));
        }
        Ok(Self { items, dim, meta })
    }

    pub fn items(&self) -> &[LabeledSeries] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn meta(&self) -> &DatasetMeta {
        &self.meta
    }

    /// Distinct labels in first-appearance order.
    pub fn labels(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for it in &self.items {
            if !seen.contains(&it.label()) {
                seen.push(it.label());
            }
        }
        seen
    }
}
