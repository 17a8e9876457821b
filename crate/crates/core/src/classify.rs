//! Leave-one-out 1-NN scoring and parameter sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cbf::{cbf_generate_dataset, CbfParams};
use crate::distance::{distance, DistanceKind};
use crate::error::{Error, Result};
use crate::ram::{ram_generate_dataset, RamParams};
use crate::random::derive_child_seed;
use crate::series::{LabeledDataset, TimeSeries};

/// Fraction of items whose nearest other item (under `kind`) shares their
/// label. Ties go to the smallest dataset index.
pub fn knn1_loo_score(dataset: &LabeledDataset, kind: DistanceKind) -> Result<f64> {
    knn1_loo_score_with(dataset, |a, b| distance(kind, a, b))
}

/// [`knn1_loo_score`] with an arbitrary symmetric distance. `dist` is called
/// exactly once per unordered pair.
pub fn knn1_loo_score_with<F>(dataset: &LabeledDataset, dist: F) -> Result<f64>
where
    F: Fn(&TimeSeries, &TimeSeries) -> Result<f64> + Sync,
{
    let items = dataset.items();
    let n = items.len();
    if n < 2 {
        return Err(Error::invalid(format!(
            "1-NN scoring needs at least 2 series, got {n}"
        )));
    }
    if dataset.labels().len() < 2 {
        return Err(Error::invalid("1-NN scoring needs at least 2 distinct labels"));
    }

    // rows[i][k] = d(i, i + 1 + k)
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| dist(items[i].series(), items[j].series()))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let pair = |i: usize, j: usize| {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        rows[lo][hi - lo - 1]
    };

    let correct = (0..n)
        .filter(|&q| {
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for p in (0..n).filter(|&p| p != q) {
                let d = pair(q, p);
                if d < best_d || best == usize::MAX {
                    best = p;
                    best_d = d;
                }
            }
            items[best].label() == items[q].label()
        })
        .count();
    Ok(correct as f64 / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Cbf,
    Ram,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Cbf => "cbf",
            Generator::Ram => "ram",
        }
    }

    /// Parameters that must be given (as an axis or fixed value).
    fn required(self) -> &'static [Param] {
        match self {
            Generator::Cbf => &[Param::Length, Param::Dim, Param::Classes, Param::ClassSize],
            Generator::Ram => &[
                Param::Length,
                Param::Dim,
                Param::Radius,
                Param::Distortion,
                Param::Classes,
                Param::ClassSize,
            ],
        }
    }

    fn supports(self, p: Param) -> bool {
        self.required().contains(&p) || (self == Generator::Ram && p == Param::ImpulseScale)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cbf" => Ok(Generator::Cbf),
            "ram" => Ok(Generator::Ram),
            _ => Err(Error::invalid(format!(
                "unknown generator {s:?} (expected cbf or ram)"
            ))),
        }
    }
}

/// A generation parameter that can be swept or fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Length,
    Dim,
    Radius,
    Distortion,
    Classes,
    ClassSize,
    ImpulseScale,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Length => "length",
            Param::Dim => "dim",
            Param::Radius => "radius",
            Param::Distortion => "distortion",
            Param::Classes => "classes",
            Param::ClassSize => "class_size",
            Param::ImpulseScale => "impulse_scale",
        }
    }

    fn is_integer(self) -> bool {
        matches!(
            self,
            Param::Length | Param::Dim | Param::Classes | Param::ClassSize
        )
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "length" => Ok(Param::Length),
            "dim" | "dimensionality" => Ok(Param::Dim),
            "radius" => Ok(Param::Radius),
            "distortion" => Ok(Param::Distortion),
            "classes" | "num_classes" => Ok(Param::Classes),
            "class_size" | "class-size" => Ok(Param::ClassSize),
            "impulse_scale" | "impulse-scale" => Ok(Param::ImpulseScale),
            _ => Err(Error::invalid(format!("unknown parameter {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub generator: Generator,
    pub kinds: Vec<DistanceKind>,
    pub axes: Vec<Axis>,
    pub fixed: BTreeMap<Param, f64>,
    pub replicates: usize,
    pub seed: u64,
}

/// Fully specified generation parameters for one dataset.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetParams {
    Cbf(CbfParams),
    Ram(RamParams),
}

impl DatasetParams {
    pub fn generate(&self) -> Result<LabeledDataset> {
        match self {
            DatasetParams::Cbf(p) => cbf_generate_dataset(p),
            DatasetParams::Ram(p) => ram_generate_dataset(p),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            DatasetParams::Cbf(p) => p.validate(),
            DatasetParams::Ram(p) => p.validate(),
        }
    }
}

fn as_count(p: Param, v: f64) -> Result<usize> {
    if v.fract() != 0.0 || v < 0.0 || v > u32::MAX as f64 {
        return Err(Error::invalid(format!(
            "{p} must be a non-negative integer, got {v}"
        )));
    }
    Ok(v as usize)
}

impl SweepSpec {
    pub fn cell_count(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// Per-axis value indices of a cell, first axis most significant.
    pub fn cell_coords(&self, mut cell: usize) -> Vec<usize> {
        let mut coords = vec![0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            coords[k] = cell % axis.values.len();
            cell /= axis.values.len();
        }
        coords
    }

    pub fn validate(&self) -> Result<()> {
        if self.kinds.is_empty() {
            return Err(Error::invalid("sweep needs at least one distance kind"));
        }
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::invalid(format!(
                "sweep needs 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("replicate count must be at least 1"));
        }
        let mut seen = Vec::new();
        for axis in &self.axes {
            if !self.generator.supports(axis.param) {
                return Err(Error::invalid(format!(
                    "generator {} has no parameter {}",
                    self.generator, axis.param
                )));
            }
            if axis.values.is_empty() {
                return Err(Error::invalid(format!("axis {} has no values", axis.param)));
            }
            if seen.contains(&axis.param) || self.fixed.contains_key(&axis.param) {
                return Err(Error::invalid(format!("parameter {} given twice", axis.param)));
            }
            seen.push(axis.param);
        }
        for &p in self.fixed.keys() {
            if !self.generator.supports(p) {
                return Err(Error::invalid(format!(
                    "generator {} has no parameter {p}",
                    self.generator
                )));
            }
        }
        for &p in self.generator.required() {
            if !seen.contains(&p) && !self.fixed.contains_key(&p) {
                return Err(Error::invalid(format!("missing parameter {p}")));
            }
        }
        for cell in 0..self.cell_count() {
            self.cell_params(cell, 0)?.validate()?;
        }
        Ok(())
    }

    /// Parameters and seed of one replicate of one cell.
    pub fn cell_params(&self, cell: usize, replicate: usize) -> Result<DatasetParams> {
        let mut values = self.fixed.clone();
        for (axis, idx) in self.axes.iter().zip(self.cell_coords(cell)) {
            values.insert(axis.param, axis.values[idx]);
        }
        let seed = derive_child_seed(self.seed, &[cell as u64, replicate as u64]);
        let get = |p: Param| -> Result<f64> {
            let v = *values
                .get(&p)
                .ok_or_else(|| Error::invalid(format!("missing parameter {p}")))?;
            if p.is_integer() {
                as_count(p, v)?;
            }
            Ok(v)
        };
        let count = |p: Param| get(p).map(|v| v as usize);
        Ok(match self.generator {
            Generator::Cbf => DatasetParams::Cbf(CbfParams {
                length: count(Param::Length)?,
                dim: count(Param::Dim)?,
                num_classes: count(Param::Classes)?,
                class_size: count(Param::ClassSize)?,
                seed,
            }),
            Generator::Ram => DatasetParams::Ram(RamParams {
                length: count(Param::Length)?,
                dim: count(Param::Dim)?,
                radius: get(Param::Radius)?,
                distortion: get(Param::Distortion)?,
                num_classes: count(Param::Classes)?,
                class_size: count(Param::ClassSize)?,
                impulse_scale: values.get(&Param::ImpulseScale).copied().unwrap_or(1.0),
                seed,
            }),
        })
    }
}

/// Grid of 1-NN scores over one or two parameter axes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub axis_names: Vec<String>,
    pub axis_values: Vec<Vec<f64>>,
    /// One entry per cell (row-major, first axis most significant), each with
    /// `replicates` scores.
    pub replicate_scores: Vec<Vec<f64>>,
    pub replicates: usize,
    pub master_seed: u64,
    pub generator: String,
    pub distance: DistanceKind,
    pub fixed_params: BTreeMap<String, f64>,
}

impl ScoreTable {
    pub fn validate(&self) -> Result<()> {
        if self.axis_names.len() != self.axis_values.len() || self.axis_names.is_empty() {
            return Err(Error::invalid("axis names and values disagree"));
        }
        let cells: usize = self.axis_values.iter().map(Vec::len).product();
        if cells != self.replicate_scores.len() {
            return Err(Error::invalid(format!(
                "grid has {} cells, expected {cells}",
                self.replicate_scores.len()
            )));
        }
        for row in &self.replicate_scores {
            if row.len() != self.replicates || self.replicates == 0 {
                return Err(Error::invalid("replicate count mismatch"));
            }
            if row.iter().any(|s| !(0.0..=1.0).contains(s)) {
                return Err(Error::invalid("scores must lie in [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.replicate_scores.len()
    }

    /// Replicate mean of every cell.
    pub fn means(&self) -> Vec<f64> {
        self.replicate_scores.iter().map(|r| mean(r)).collect()
    }

    /// Mean score at the given per-axis value indices.
    pub fn mean_at(&self, coords: &[usize]) -> f64 {
        let mut cell = 0;
        for (idx, values) in coords.iter().zip(&self.axis_values) {
            cell = cell * values.len() + idx;
        }
        mean(&self.replicate_scores[cell])
    }

    /// Mean score at the given axis values (looked up exactly).
    pub fn mean_where(&self, values: &[f64]) -> Option<f64> {
        let coords = values
            .iter()
            .zip(&self.axis_values)
            .map(|(v, axis)| axis.iter().position(|a| a == v))
            .collect::<Option<Vec<_>>>()?;
        Some(self.mean_at(&coords))
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Runs every cell × replicate and returns one table per distance kind, in
/// the order of `spec.kinds`. All kinds score the same generated datasets.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ScoreTable>> {
    spec.validate()?;
    let cells = spec.cell_count();
    let tasks: Vec<(usize, usize)> = (0..cells)
        .flat_map(|c| (0..spec.replicates).map(move |r| (c, r)))
        .collect();
    let results: Vec<Vec<f64>> = tasks
        .par_iter()
        .map(|&(cell, rep)| {
            let dataset = spec.cell_params(cell, rep)?.generate()?;
            spec.kinds
                .iter()
                .map(|&k| knn1_loo_score(&dataset, k))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let fixed_params: BTreeMap<String, f64> = spec
        .fixed
        .iter()
        .map(|(p, v)| (p.name().to_string(), *v))
        .collect();
    Ok(spec
        .kinds
        .iter()
        .enumerate()
        .map(|(k, &kind)| ScoreTable {
            axis_names: spec.axes.iter().map(|a| a.param.name().to_string()).collect(),
            axis_values: spec.axes.iter().map(|a| a.values.clone()).collect(),
            replicate_scores: (0..cells)
                .map(|c| {
                    (0..spec.replicates)
                        .map(|r| results[c * spec.replicates + r][k])
                        .collect()
                })
                .collect(),
            replicates: spec.replicates,
            master_seed: spec.seed,
            generator: spec.generator.name().to_string(),
            distance: kind,
            fixed_params: fixed_params.clone(),
        })
        .collect())
}
