//! Exact planar cyclotomic arithmetic, model-set generation, discrete
//! X-ray transforms, and uniqueness certificates for convex subsets.

pub mod cyclo;
pub mod error;
pub mod exact;
pub mod model_set;
pub mod polygon;
pub mod successive;
pub(crate) mod util;
pub mod xray;
pub mod valuation;

pub use cyclo::{field_norm_real, CycloRat, OrderData, RealCycloRat};
pub use error::{QtError, QtResult};
