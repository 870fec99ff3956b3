pub mod corpus;
pub mod curvature;
pub mod detect;
pub mod error;
pub mod linsolve;
pub mod manifest;
pub mod numeric;
pub mod report;
pub mod symbolic;
pub mod tensor;

pub use error::{Error, Result};
pub use symbolic::{parse_expression, Polynomial, RationalFunction};
