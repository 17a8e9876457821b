//! Random accelerated motion (RAM) generator.
//!
//! Base series are impulse-driven walks confined to a ball: each step adds a
//! random unit vector to the impulse and the impulse to the position, and a
//! step that leaves the ball is pulled back onto the sphere with the impulse
//! mirrored about the tangent plane. Class representatives are a base series
//! resampled at random arc-length positions ([`time_distortion`]) and then
//! perturbed by capped derivative noise ([`space_distortion`]).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::random::{
    derive_child_seed, norm, sample_uniform_ball, sample_uniform_sphere, RandomSource, RNG_NAME,
};
use crate::series::{DatasetMeta, LabeledDataset, LabeledSeries, TimeSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct RamParams {
    pub length: usize,
    pub dim: usize,
    pub radius: f64,
    pub distortion: f64,
    pub num_classes: usize,
    pub class_size: usize,
    /// Norm of the per-step impulse increment. 1 unless experimenting.
    pub impulse_scale: f64,
    pub seed: u64,
}

impl RamParams {
    pub fn validate(&self) -> Result<()> {
        check_base(self.length, self.dim, self.radius)?;
        check_distortion(self.distortion)?;
        if !(self.impulse_scale > 0.0 && self.impulse_scale.is_finite()) {
            return Err(Error::invalid(format!(
                "impulse scale must be positive, got {}",
                self.impulse_scale
            )));
        }
        if self.num_classes == 0 {
            return Err(Error::invalid("number of classes must be at least 1"));
        }
        if self.class_size == 0 {
            return Err(Error::invalid("class size must be at least 1"));
        }
        Ok(())
    }

    fn meta_params(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("length".to_string(), self.length as f64),
            ("dim".to_string(), self.dim as f64),
            ("radius".to_string(), self.radius),
            ("distortion".to_string(), self.distortion),
            ("classes".to_string(), self.num_classes as f64),
            ("class_size".to_string(), self.class_size as f64),
            ("impulse_scale".to_string(), self.impulse_scale),
        ])
    }
}

fn check_base(length: usize, dim: usize, radius: f64) -> Result<()> {
    if length < 2 {
        return Err(Error::invalid(format!(
            "RAM length must be at least 2, got {length}"
        )));
    }
    if dim == 0 {
        return Err(Error::invalid("dimensionality must be at least 1"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {radius}")));
    }
    Ok(())
}

fn check_distortion(distortion: f64) -> Result<()> {
    if !(distortion >= 0.0 && distortion.is_finite()) {
        return Err(Error::invalid(format!(
            "distortion must be non-negative, got {distortion}"
        )));
    }
    Ok(())
}

/// A boundary hit recorded by [`ram_base_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct Bounce {
    pub step: usize,
    pub impulse_before: Vec<f64>,
    pub impulse_after: Vec<f64>,
}

pub fn ram_base(length: usize, dim: usize, radius: f64, rng: &mut RandomSource) -> Result<TimeSeries> {
    ram_base_traced(length, dim, radius, 1.0, rng).map(|(s, _)| s)
}

/// Base trajectory plus every reflection event. `impulse_scale` multiplies
/// the unit increment added to the impulse each step.
pub fn ram_base_traced(
    length: usize,
    dim: usize,
    radius: f64,
    impulse_scale: f64,
    rng: &mut RandomSource,
) -> Result<(TimeSeries, Vec<Bounce>)> {
    check_base(length, dim, radius)?;
    let mut values = Vec::with_capacity(length * dim);
    values.extend(sample_uniform_ball(dim, radius, rng)?);
    let mut impulse = vec![0.0; dim];
    let mut pos = values.clone();
    let mut bounces = Vec::new();

    for step in 1..length {
        let kick = sample_uniform_sphere(dim, rng)?;
        for ((p, v), k) in pos.iter_mut().zip(impulse.iter_mut()).zip(&kick) {
            *v += impulse_scale * k;
            *p += *v;
        }
        let r = norm(&pos);
        if r > radius {
            pos.iter_mut().for_each(|p| *p *= radius / r);
            let before = impulse.clone();
            let normal: Vec<f64> = pos.iter().map(|p| p / radius).collect();
            let along: f64 = impulse.iter().zip(&normal).map(|(v, u)| v * u).sum();
            impulse
                .iter_mut()
                .zip(&normal)
                .for_each(|(v, u)| *v -= 2.0 * along * u);
            bounces.push(Bounce {
                step,
                impulse_before: before,
                impulse_after: impulse.clone(),
            });
        }
        values.extend_from_slice(&pos);
    }
    Ok((TimeSeries::from_raw(values, dim), bounces))
}

/// Adds standard normal noise to the first derivative (the first point's
/// predecessor is the origin) and keeps every point within `distortion` of
/// the matching input point by radial projection.
pub fn space_distortion(base: &TimeSeries, distortion: f64, rng: &mut RandomSource) -> Result<TimeSeries> {
    check_distortion(distortion)?;
    let dim = base.dim();
    let mut out = Vec::with_capacity(base.values().len());
    let mut prev_base = vec![0.0; dim];
    let mut prev_out = vec![0.0; dim];
    let mut cur = vec![0.0; dim];

    for point in base.points() {
        for d in 0..dim {
            cur[d] = prev_out[d] + (point[d] - prev_base[d]) + rng.standard_normal();
        }
        let dev = cur
            .iter()
            .zip(point)
            .map(|(c, p)| (c - p) * (c - p))
            .sum::<f64>()
            .sqrt();
        if dev > distortion {
            let scale = distortion / dev;
            for d in 0..dim {
                cur[d] = point[d] + scale * (cur[d] - point[d]);
            }
        }
        out.extend_from_slice(&cur);
        prev_base.copy_from_slice(point);
        prev_out.copy_from_slice(&cur);
    }
    Ok(TimeSeries::from_raw(out, dim))
}

/// Cumulative polyline length up to each point; starts at 0.
pub fn arc_lengths(series: &TimeSeries) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(series.len());
    out.push(0.0);
    for w in series.values().windows(2 * series.dim()).step_by(series.dim()) {
        let (a, b) = w.split_at(series.dim());
        acc += a
            .iter()
            .zip(b)
            .map(|(x, y)| (y - x) * (y - x))
            .sum::<f64>()
            .sqrt();
        out.push(acc);
    }
    out
}

/// Point on the polyline at arc parameter `x`, given `arcs = arc_lengths(series)`.
/// Zero-length segments are never selected, so the interpolation weight is
/// always well defined.
pub fn point_at_arc_length(series: &TimeSeries, arcs: &[f64], x: f64) -> Vec<f64> {
    let last = series.len() - 1;
    if x <= 0.0 {
        return series.point(0).to_vec();
    }
    if x >= arcs[last] {
        return series.point(last).to_vec();
    }
    // largest i with arcs[i] <= x; then arcs[i] <= x < arcs[i + 1]
    let i = arcs.partition_point(|&l| l <= x) - 1;
    let u = (x - arcs[i]) / (arcs[i + 1] - arcs[i]);
    series
        .point(i)
        .iter()
        .zip(series.point(i + 1))
        .map(|(a, b)| (1.0 - u) * a + u * b)
        .collect()
}

/// Resamples the series at the given (sorted) arc-length positions.
pub fn resample_at_arc_lengths(series: &TimeSeries, positions: &[f64]) -> TimeSeries {
    let arcs = arc_lengths(series);
    let mut values = Vec::with_capacity(positions.len() * series.dim());
    for &x in positions {
        values.extend(point_at_arc_length(series, &arcs, x));
    }
    TimeSeries::from_raw(values, series.dim())
}

/// The sorted arc-length positions used by [`time_distortion`]: both
/// endpoints plus `L - 2` uniform draws over the total length.
pub fn draw_arc_positions(total: f64, length: usize, rng: &mut RandomSource) -> Vec<f64> {
    let mut t = Vec::with_capacity(length);
    t.push(0.0);
    t.push(total);
    for _ in 0..length.saturating_sub(2) {
        t.push(rng.uniform(0.0, total));
    }
    t.sort_by(f64::total_cmp);
    t
}

/// Reparameterizes by arc length and resamples at uniformly random positions,
/// keeping both endpoints. A series with zero total length is returned as is.
pub fn time_distortion(series: &TimeSeries, rng: &mut RandomSource) -> Result<TimeSeries> {
    if series.len() < 2 {
        return Err(Error::invalid("time distortion needs at least 2 points"));
    }
    let total = *arc_lengths(series).last().expect("non-empty");
    if total == 0.0 {
        return Ok(series.clone());
    }
    let positions = draw_arc_positions(total, series.len(), rng);
    Ok(resample_at_arc_lengths(series, &positions))
}

fn class_label(i: usize, num_classes: usize) -> String {
    let width = (num_classes.saturating_sub(1)).to_string().len();
    format!("class_{i:0width$}")
}

/// `num_classes` base series (stream `[i, 0]`), each distorted `class_size`
/// times (streams `[i, j]`, `j >= 1`). Only representatives are emitted.
pub fn ram_generate_dataset(params: &RamParams) -> Result<LabeledDataset> {
    params.validate()?;
    let mut items = Vec::with_capacity(params.num_classes * params.class_size);
    for class in 0..params.num_classes {
        let mut base_rng = RandomSource::from_seed(derive_child_seed(params.seed, &[class as u64, 0]));
        let (base, _) = ram_base_traced(
            params.length,
            params.dim,
            params.radius,
            params.impulse_scale,
            &mut base_rng,
        )?;
        let label = class_label(class, params.num_classes);
        for repr in 1..=params.class_size {
            let mut rng =
                RandomSource::from_seed(derive_child_seed(params.seed, &[class as u64, repr as u64]));
            let warped = time_distortion(&base, &mut rng)?;
            let series = space_distortion(&warped, params.distortion, &mut rng)?;
            items.push(LabeledSeries::new(label.clone(), series)?);
        }
    }
    let meta = DatasetMeta {
        generator: "ram".to_string(),
        params: params.meta_params(),
        seed: params.seed,
        rng: RNG_NAME.to_string(),
    };
    LabeledDataset::new(items, meta)
}
