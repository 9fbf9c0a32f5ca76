//! Exact integer and rational linear algebra, and integral-affine polytopes.

pub mod fm;
mod matrix;
mod polytope;
mod vector;

use thiserror::Error;

pub use matrix::{abs_det, rational_rank, smith_diagonal, solve_rational, unimodular_completion, IntMatrix};
pub use polytope::{
    project_point, quotient_basis, Constraint, IntegralAffineFunctional, IntegralAffinePolytope, Stratum,
};
pub use vector::{parameter_along, IntegralVector, RationalPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("vector {0} is not primitive")]
    NotPrimitive(IntegralVector),
    #[error("matrix is singular")]
    Singular,
    #[error("constraints have no common solution")]
    EmptyPolytope,
    #[error("direction is tangent to no stratum")]
    EmptyStratum,
    #[error("quotient by the zero vector")]
    ZeroDirection,
    #[error("{0} spans no infinite ray in the polytope")]
    NoInfiniteRay(IntegralVector),
    #[error("point {0} is not in the polytope")]
    PointOutside(RationalPoint),
}
