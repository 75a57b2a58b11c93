//! Weighted least squares, abstract splines and smoothing problems over
//! finite-dimensional complex Hilbert spaces.
//!
//! Every module is generic over the real scalar `T: Real` (`f32` or `f64`);
//! operators are dense `Complex<T>` matrices. The aliases at the crate root
//! fix `T = f64`.

pub mod error;
pub mod linalg;
pub mod oracles;
pub mod scalar;
pub mod schatten;
pub mod shorted;
pub mod smoothing;
pub mod spline;
pub mod wls;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex64;

pub type Operator = linalg::Operator<f64>;
pub type Vector = scalar::CVector<f64>;
pub type Tolerances = linalg::Tolerances<f64>;
pub type PsdWeight = linalg::PsdWeight<f64>;
pub type Subspace = linalg::Subspace<f64>;
pub type SchattenIndex = schatten::SchattenIndex<f64>;
pub type BlockWeight = smoothing::BlockWeight<f64>;
pub type CompatCertificate = shorted::CompatCertificate<f64>;
pub type WlsReport = wls::WlsReport<f64>;
pub type SplineReport = spline::SplineReport<f64>;
pub type SmoothingReport = smoothing::SmoothingReport<f64>;
