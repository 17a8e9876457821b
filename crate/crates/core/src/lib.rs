//! Synthetic multidimensional time-series datasets and the tooling to score
//! them with nearest-neighbor classifiers.
//!
//! Two generators are provided:
//!
//! * [`cbf`]: the cylinder-bell-funnel family, extended so that every
//!   dimension independently carries one of the three shapes (`3^n` classes).
//! * [`ram`]: random accelerated motion inside a ball, with class
//!   representatives produced by arc-length time distortion followed by
//!   capped derivative noise.
//!
//! [`distance`] implements lockstep Euclidean, DTW, ERP and the dog-keeper
//! (discrete Fréchet) distance; [`classify`] computes leave-one-out 1-NN scores
//! and runs parameter sweeps; [`io`] holds the on-disk formats.

pub mod cbf;
pub mod classify;
pub mod distance;
pub mod error;
pub mod io;
pub mod ram;
pub mod random;
pub mod series;

pub use error::{Error, Result};
pub use series::{DatasetMeta, LabeledDataset, LabeledSeries, SeriesView, TimeSeries};
