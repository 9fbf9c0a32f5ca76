//! Exact combinatorics of tropical gluing formulae for Gromov–Witten invariants.
//!
//! Polytopes and curves live in an embedded integral-affine complex; all arithmetic is
//! over arbitrary-precision integers and rationals.

pub mod complex;
pub mod curve;
pub mod enumerate;
pub mod evalspace;
pub mod example;
pub mod gw;
pub mod lattice;

pub use complex::{dual_complex, Fan, NCDegenerationDescription, PolyhedralComplex};
pub use curve::{BalancingMode, TropicalCurve};
pub use enumerate::{enumerate_rigid, ConstraintSet, Enumeration, PointConstraint, RigidCurveRecord};
pub use evalspace::{EvaluationComponent, GluingDiagramDescriptor};
pub use gw::{glue_classes, GWClass, VertexInvariant};
pub use lattice::{IntegralAffinePolytope, IntegralVector, RationalPoint};
