pub mod bounds;
pub mod cad;
pub mod estimate;
pub mod error;
pub mod fit;
pub mod formulas;
pub mod poly;
pub mod realroots;
pub mod scalar;

pub use error::{Error, Result};
pub use poly::{parse_poly, Degree, FloatPoly, Monomial, Polynomial};
pub use scalar::{Real, Scalar, Sign};

/// Exact rational scalar of the algebraic core.
pub type Rational = num_rational::BigRational;
/// Exact multivariate polynomial over the rationals.
pub type Poly = Polynomial<Rational>;
