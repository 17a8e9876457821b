//! Multidimensional cylinder-bell-funnel generator.
//!
//! A series of length ℓ has a noise prefix, a shaped middle segment on
//! `[a, b)` and a noise suffix. In the multidimensional form every dimension
//! carries its own shape but all dimensions share the same `(a, b)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::random::{derive_child_seed, RandomSource, RNG_NAME};
use crate::series::{DatasetMeta, LabeledDataset, LabeledSeries, TimeSeries};

pub const MIN_LENGTH: usize = 8;
const BASE_AMPLITUDE: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CbfShape {
    Cylinder,
    Bell,
    Funnel,
}

impl CbfShape {
    pub const ALL: [CbfShape; 3] = [CbfShape::Cylinder, CbfShape::Bell, CbfShape::Funnel];

    pub fn tag(self) -> char {
        match self {
            CbfShape::Cylinder => 'c',
            CbfShape::Bell => 'b',
            CbfShape::Funnel => 'f',
        }
    }

    pub fn from_tag(c: char) -> Option<Self> {
        match c {
            'c' => Some(CbfShape::Cylinder),
            'b' => Some(CbfShape::Bell),
            'f' => Some(CbfShape::Funnel),
            _ => None,
        }
    }
}

/// One shape per dimension; displays as e.g. `"cbf"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CbfLabel(Vec<CbfShape>);

impl CbfLabel {
    pub fn new(shapes: Vec<CbfShape>) -> Result<Self> {
        if shapes.is_empty() {
            return Err(Error::invalid("CBF label needs at least one dimension"));
        }
        Ok(Self(shapes))
    }

    pub fn shapes(&self) -> &[CbfShape] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The `index`-th label of the base-3 enumeration over `dim` digits,
    /// leftmost dimension most significant, digit order c < b < f.
    pub fn canonical(dim: usize, index: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("CBF label needs at least one dimension"));
        }
        if let Some(max) = class_capacity(dim) {
            if index >= max {
                return Err(Error::invalid(format!(
                    "class index {index} out of range for {dim} dimensions"
                )));
            }
        }
        let mut shapes = vec![CbfShape::Cylinder; dim];
        let mut rest = index;
        for slot in shapes.iter_mut().rev() {
            *slot = CbfShape::ALL[(rest % 3) as usize];
            rest /= 3;
            if rest == 0 {
                break;
            }
        }
        Ok(Self(shapes))
    }
}

impl fmt::Display for CbfLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.tag())?;
        }
        Ok(())
    }
}

impl FromStr for CbfLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let shapes = s
            .chars()
            .map(|c| {
                CbfShape::from_tag(c).ok_or_else(|| Error::invalid(format!("unknown CBF shape tag {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(shapes)
    }
}

/// `3^dim`, or `None` when it does not fit in a `u64`.
pub fn class_capacity(dim: usize) -> Option<u64> {
    u32::try_from(dim).ok().and_then(|d| 3u64.checked_pow(d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CbfParams {
    pub length: usize,
    pub dim: usize,
    pub num_classes: usize,
    pub class_size: usize,
    pub seed: u64,
}

impl CbfParams {
    pub fn validate(&self) -> Result<()> {
        check_length(self.length)?;
        if self.dim == 0 {
            return Err(Error::invalid("dimensionality must be at least 1"));
        }
        if self.num_classes == 0 {
            return Err(Error::invalid("number of classes must be at least 1"));
        }
        if let Some(max) = class_capacity(self.dim) {
            if self.num_classes as u64 > max {
                return Err(Error::invalid(format!(
                    "number of classes {} exceeds 3^{} = {max}",
                    self.num_classes, self.dim
                )));
            }
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
            ("classes".to_string(), self.num_classes as f64),
            ("class_size".to_string(), self.class_size as f64),
        ])
    }
}

fn check_length(length: usize) -> Result<()> {
    if length < MIN_LENGTH {
        return Err(Error::invalid(format!(
            "CBF length must be at least {MIN_LENGTH}, got {length}"
        )));
    }
    Ok(())
}

/// Event boundaries of one series: the middle segment is `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundaries {
    pub start: usize,
    pub end: usize,
}

/// Draws `a` uniformly on `[ℓ/8, 2ℓ/8]` and `b` on `[6ℓ/8, 7ℓ/8]`, rounded
/// to the nearest index.
pub fn cbf_draw_boundaries(length: usize, rng: &mut RandomSource) -> Result<Boundaries> {
    check_length(length)?;
    let l = length as f64;
    let a = rng.uniform(l / 8.0, 2.0 * l / 8.0).round() as usize;
    let b = rng.uniform(6.0 * l / 8.0, 7.0 * l / 8.0).round() as usize;
    debug_assert!(1 <= a && a < b && b < length);
    Ok(Boundaries { start: a, end: b })
}

pub fn cbf_generate_series(length: usize, label: &CbfLabel, rng: &mut RandomSource) -> Result<TimeSeries> {
    cbf_generate_series_traced(length, label, rng).map(|(s, _)| s)
}

/// Like [`cbf_generate_series`] but also returns the shared boundaries.
pub fn cbf_generate_series_traced(
    length: usize,
    label: &CbfLabel,
    rng: &mut RandomSource,
) -> Result<(TimeSeries, Boundaries)> {
    let bounds = cbf_draw_boundaries(length, rng)?;
    let Boundaries { start: a, end: b } = bounds;
    let dim = label.dim();
    let width = (b - a) as f64;
    let mut values = vec![0.0; length * dim];

    for (d, &shape) in label.shapes().iter().enumerate() {
        let amplitude = BASE_AMPLITUDE + rng.standard_normal();
        for i in 0..length {
            let noise = rng.standard_normal();
            let signal = if i < a || i >= b {
                0.0
            } else {
                match shape {
                    CbfShape::Cylinder => amplitude,
                    CbfShape::Bell => amplitude * (i - a) as f64 / width,
                    CbfShape::Funnel => amplitude * (b - i) as f64 / width,
                }
            };
            values[i * dim + d] = signal + noise;
        }
    }
    Ok((TimeSeries::from_raw(values, dim), bounds))
}

/// `class_size` representatives for each of the first `num_classes`
/// canonical labels, class-major. Representative `j` of class `i` is drawn
/// from the stream `derive_child_seed(seed, [i, j])`.
pub fn cbf_generate_dataset(params: &CbfParams) -> Result<LabeledDataset> {
    params.validate()?;
    let mut items = Vec::with_capacity(params.num_classes * params.class_size);
    for class in 0..params.num_classes {
        let label = CbfLabel::canonical(params.dim, class as u64)?;
        let name = label.to_string();
        for repr in 0..params.class_size {
            let seed = derive_child_seed(params.seed, &[class as u64, repr as u64]);
            let mut rng = RandomSource::from_seed(seed);
            let series = cbf_generate_series(params.length, &label, &mut rng)?;
            items.push(LabeledSeries::new(name.clone(), series)?);
        }
    }
    let meta = DatasetMeta {
        generator: "cbf".to_string(),
        params: params.meta_params(),
        seed: params.seed,
        rng: RNG_NAME.to_string(),
    };
    LabeledDataset::new(items, meta)
}
