//! Shared fixtures for the criterion benches.

use std::collections::BTreeMap;

use num_rational::BigRational;
use tropglue_core::example::END_DIRECTIONS;
use tropglue_core::{ConstraintSet, IntegralVector, PointConstraint, PolyhedralComplex, RationalPoint};

/// Cluster face and the coordinates `(numerator, denominator)` of a point.
pub type Seed = (&'static str, (i64, i64), (i64, i64));

/// Eight generic points clustered 3/3/2 around the corners of the example triangle.
pub const POINTS: [Seed; 8] = [
    ("M1", (-1909, 2000), (-4813, 5000)),
    ("M1", (-451, 500), (-2411, 2500)),
    ("M1", (-2589, 2500), (-2589, 2500)),
    ("M2", (9847, 5000), (-10109, 10000)),
    ("M2", (1039, 500), (-2309, 2500)),
    ("M2", (833, 400), (-10601, 10000)),
    ("M3", (-10859, 10000), (10311, 5000)),
    ("M3", (-9007, 10000), (5069, 2500)),
];

/// The clustered constraints with three unbounded ends in each direction.
pub fn example_constraints(c: &PolyhedralComplex) -> ConstraintSet {
    let points = POINTS
        .iter()
        .map(|&(cluster, x, y)| {
            let position = RationalPoint::from_fractions(&[x, y]);
            let face = c.stratum_containing(&position).expect("points lie in the complex").face;
            PointConstraint { label: None, face, position, cluster: Some(cluster.to_string()) }
        })
        .collect();
    ConstraintSet {
        points,
        degree_bound: 2,
        end_distribution: BTreeMap::from([("M1".into(), 3), ("M2".into(), 3), ("M3".into(), 2)]),
        unbounded_ends: END_DIRECTIONS.iter().flat_map(|&(x, y)| std::iter::repeat_n(IntegralVector::from_i64s(&[x, y]), 3)).collect(),
        cluster_radius: BigRational::new(1.into(), 2.into()),
    }
}
