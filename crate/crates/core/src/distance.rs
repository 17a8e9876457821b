//! Time-series distances.
//!
//! The ground cost between two points is the (unsquared) Euclidean norm of
//! their difference. DTW, ERP and DK run the full dynamic program without a
//! warping window, keeping only two rows in memory.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::series::SeriesView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistanceKind {
    Euclidean,
    Dtw,
    Erp,
    Dk,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 4] = [
        DistanceKind::Euclidean,
        DistanceKind::Dtw,
        DistanceKind::Erp,
        DistanceKind::Dk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Euclidean => "euclidean",
            DistanceKind::Dtw => "dtw",
            DistanceKind::Erp => "erp",
            DistanceKind::Dk => "dk",
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "ed" => Ok(DistanceKind::Euclidean),
            "dtw" => Ok(DistanceKind::Dtw),
            "erp" => Ok(DistanceKind::Erp),
            "dk" | "frechet" => Ok(DistanceKind::Dk),
            _ => Err(Error::invalid(format!("unknown distance kind {s:?}"))),
        }
    }
}

#[inline]
pub fn local_cost(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn same_dim(x: &SeriesView<'_>, y: &SeriesView<'_>) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::invalid(format!(
            "dimensionality mismatch: {} vs {}",
            x.dim(),
            y.dim()
        )));
    }
    Ok(())
}

fn non_empty(x: &SeriesView<'_>, y: &SeriesView<'_>) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::invalid("distance requires non-empty series"));
    }
    Ok(())
}

/// Lockstep distance `sqrt(Σ ‖xᵢ − yᵢ‖²)`.
pub fn euclidean<'a, 'b>(x: impl Into<SeriesView<'a>>, y: impl Into<SeriesView<'b>>) -> Result<f64> {
    let (x, y) = (x.into(), y.into());
    same_dim(&x, &y)?;
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "euclidean distance needs equal lengths: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let sum: f64 = (0..x.len())
        .map(|i| {
            let (a, b) = (x.point(i), y.point(i));
            a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>()
        })
        .sum();
    Ok(sum.sqrt())
}

/// Shared two-row DP for DTW and DK: `combine(cost, best_predecessor)`.
fn warping_dp(x: SeriesView<'_>, y: SeriesView<'_>, combine: impl Fn(f64, f64) -> f64) -> f64 {
    let m = y.len();
    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![f64::INFINITY; m];
    for i in 0..x.len() {
        let xi = x.point(i);
        for j in 0..m {
            let cost = local_cost(xi, y.point(j));
            let best = if i == 0 && j == 0 {
                None
            } else {
                let up = prev[j];
                let left = if j > 0 { cur[j - 1] } else { f64::INFINITY };
                let diag = if j > 0 { prev[j - 1] } else { f64::INFINITY };
                Some(up.min(left).min(diag))
            };
            cur[j] = match best {
                None => cost,
                Some(b) => combine(cost, b),
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

/// Dynamic time warping: minimum over warping paths of the summed cost.
pub fn dtw<'a, 'b>(x: impl Into<SeriesView<'a>>, y: impl Into<SeriesView<'b>>) -> Result<f64> {
    let (x, y) = (x.into(), y.into());
    same_dim(&x, &y)?;
    non_empty(&x, &y)?;
    Ok(warping_dp(x, y, |c, b| c + b))
}

/// Dog-keeper (discrete Fréchet) distance: minimum over warping paths of the
/// largest cost on the path.
pub fn dk<'a, 'b>(x: impl Into<SeriesView<'a>>, y: impl Into<SeriesView<'b>>) -> Result<f64> {
    let (x, y) = (x.into(), y.into());
    same_dim(&x, &y)?;
    non_empty(&x, &y)?;
    Ok(warping_dp(x, y, f64::max))
}

/// Edit distance with real penalty against the gap element `gap`. Either
/// series may be empty.
pub fn erp<'a, 'b>(x: impl Into<SeriesView<'a>>, y: impl Into<SeriesView<'b>>, gap: &[f64]) -> Result<f64> {
    let (x, y) = (x.into(), y.into());
    same_dim(&x, &y)?;
    if gap.len() != x.dim() {
        return Err(Error::invalid(format!(
            "gap element has dimensionality {}, expected {}",
            gap.len(),
            x.dim()
        )));
    }
    let m = y.len();
    let y_gap: Vec<f64> = (0..m).map(|j| local_cost(y.point(j), gap)).collect();
    let mut prev = Vec::with_capacity(m + 1);
    prev.push(0.0);
    for j in 0..m {
        prev.push(prev[j] + y_gap[j]);
    }
    let mut cur = vec![0.0; m + 1];
    for i in 1..=x.len() {
        let xi = x.point(i - 1);
        let x_gap = local_cost(xi, gap);
        cur[0] = prev[0] + x_gap;
        for j in 1..=m {
            let matched = prev[j - 1] + local_cost(xi, y.point(j - 1));
            let deleted = prev[j] + x_gap;
            let inserted = cur[j - 1] + y_gap[j - 1];
            cur[j] = matched.min(deleted).min(inserted);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m])
}

/// Dispatch by kind; ERP uses the zero gap element.
pub fn distance<'a, 'b>(
    kind: DistanceKind,
    x: impl Into<SeriesView<'a>>,
    y: impl Into<SeriesView<'b>>,
) -> Result<f64> {
    let (x, y) = (x.into(), y.into());
    match kind {
        DistanceKind::Euclidean => euclidean(x, y),
        DistanceKind::Dtw => dtw(x, y),
        DistanceKind::Erp => erp(x, y, &vec![0.0; x.dim()]),
        DistanceKind::Dk => dk(x, y),
    }
}
