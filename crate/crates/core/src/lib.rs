//! Exact computer algebra for descending a complex affine variety with an
//! antiholomorphic involution to a model over the real subfield of its
//! coefficient field.
//!
//! * [`numbers`]: ℚ and imaginary quadratic fields with conjugation.
//! * [`poly`]: sparse multivariate polynomials, monomial orders, maps.
//! * [`parser`]: the problem-file format and canonical printing.
//! * [`ideal`]: Gröbner bases, membership, elimination, radical tests.
//! * [`descent`]: the descent construction and its certificates.
//! * [`cli`]: the `realdescent` command line.

pub mod cli;
pub mod descent;
pub mod ideal;
pub mod numbers;
pub mod parser;
pub mod poly;

pub use descent::{descend, DescentProblem, DescentReport};
pub use ideal::Ideal;
pub use numbers::{FieldElement, FieldSpec};
pub use poly::{MonomialOrder, PolyMap, Polynomial, VariableContext};
