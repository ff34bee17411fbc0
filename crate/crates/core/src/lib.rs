// Negated float comparisons are how NaN gets rejected here.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod delay;
pub mod error;
pub mod gamow;
pub mod model;
pub mod oracle;
pub mod output;
pub mod poles;
pub mod special;

pub use error::{Error, Result};
pub use model::{ModelSpec, UnitsConvention};
