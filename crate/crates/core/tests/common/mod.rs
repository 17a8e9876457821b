#![allow(dead_code)]

use std::collections::HashMap;

use tsgen::random::RandomSource;
use tsgen::TimeSeries;

pub fn random_series(rng: &mut RandomSource, len: usize, dim: usize) -> TimeSeries {
    let values = (0..len * dim).map(|_| rng.standard_normal()).collect();
    TimeSeries::new(values, dim).unwrap()
}

fn cost(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Enumerates every monotone warping path from (0, 0) to the far corner and
/// returns (min over paths of summed cost, min over paths of max cost).
pub fn brute_force_warping(x: &TimeSeries, y: &TimeSeries) -> (f64, f64) {
    fn walk(x: &TimeSeries, y: &TimeSeries, i: usize, j: usize, sum: f64, max: f64, best: &mut (f64, f64)) {
        let c = cost(x.point(i), y.point(j));
        let (sum, max) = (sum + c, max.max(c));
        if i + 1 == x.len() && j + 1 == y.len() {
            best.0 = best.0.min(sum);
            best.1 = best.1.min(max);
            return;
        }
        if i + 1 < x.len() {
            walk(x, y, i + 1, j, sum, max, best);
        }
        if j + 1 < y.len() {
            walk(x, y, i, j + 1, sum, max, best);
        }
        if i + 1 < x.len() && j + 1 < y.len() {
            walk(x, y, i + 1, j + 1, sum, max, best);
        }
    }
    let mut best = (f64::INFINITY, f64::INFINITY);
    walk(x, y, 0, 0, 0.0, 0.0, &mut best);
    best
}

/// ERP as the memoized head-first recursion over suffixes:
/// match the heads, or pair one head with the gap element.
pub fn erp_reference(x: &TimeSeries, y: &TimeSeries, gap: &[f64]) -> f64 {
    fn rec(
        x: &TimeSeries,
        y: &TimeSeries,
        gap: &[f64],
        i: usize,
        j: usize,
        memo: &mut HashMap<(usize, usize), f64>,
    ) -> f64 {
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = if i == x.len() {
            (j..y.len()).map(|k| cost(y.point(k), gap)).sum()
        } else if j == y.len() {
            (i..x.len()).map(|k| cost(x.point(k), gap)).sum()
        } else {
            let matched = rec(x, y, gap, i + 1, j + 1, memo) + cost(x.point(i), y.point(j));
            let del = rec(x, y, gap, i + 1, j, memo) + cost(x.point(i), gap);
            let ins = rec(x, y, gap, i, j + 1, memo) + cost(gap, y.point(j));
            matched.min(del).min(ins)
        };
        memo.insert((i, j), v);
        v
    }
    rec(x, y, gap, 0, 0, &mut HashMap::new())
}

/// Distance from `p` to the closest segment of the polyline through `s`.
pub fn distance_to_polyline(s: &TimeSeries, p: &[f64]) -> f64 {
    if s.len() == 1 {
        return cost(s.point(0), p);
    }
    (0..s.len() - 1)
        .map(|k| {
            let (a, b) = (s.point(k), s.point(k + 1));
            let ab: Vec<f64> = a.iter().zip(b).map(|(u, v)| v - u).collect();
            let ap: Vec<f64> = a.iter().zip(p).map(|(u, v)| v - u).collect();
            let len2: f64 = ab.iter().map(|v| v * v).sum();
            let t = if len2 == 0.0 {
                0.0
            } else {
                (ab.iter().zip(&ap).map(|(u, v)| u * v).sum::<f64>() / len2).clamp(0.0, 1.0)
            };
            let proj: Vec<f64> = a.iter().zip(&ab).map(|(u, v)| u + t * v).collect();
            cost(&proj, p)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
