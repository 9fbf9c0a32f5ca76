//! The worked example: a triangle with corners `(-1,-1)`, `(2,-1)`, `(-1,2)` in `R^2`,
//! the three-edge curve inside it, and an unbounded extension used for enumeration.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use crate::complex::{Face, PolyhedralComplex};
use crate::curve::{End, InternalEdge, TropicalCurve, Vertex};
use crate::gw::{EnergySum, GWClass, ToricDatum, VertexInvariant};
use crate::lattice::{IntegralAffinePolytope, IntegralVector, RationalPoint};

/// Corners of the triangle, in the order `M1, M2, M3`.
pub const CORNERS: [(i64, i64); 3] = [(-1, -1), (2, -1), (-1, 2)];

/// Directions of the unbounded ends in the extended complex.
pub const END_DIRECTIONS: [(i64, i64); 3] = [(-1, 0), (0, 1), (1, -1)];

/// Ends at each corner in the example: 3, 3, 2.
pub const END_COUNTS: [usize; 3] = [3, 3, 2];

fn poly(rows: &[([i64; 2], i64)]) -> IntegralAffinePolytope {
    let rows: Vec<(Vec<i64>, i64)> = rows.iter().map(|(l, c)| (l.to_vec(), *c)).collect();
    IntegralAffinePolytope::from_i64_constraints(2, &rows).expect("example faces are nonempty")
}

fn face(id: &str, p: IntegralAffinePolytope) -> Face {
    Face { id: id.to_string(), polytope: p, chart_real_dim: 4 }
}

fn pairs(list: &[(&str, &[&str])]) -> Vec<(String, String)> {
    list.iter()
        .flat_map(|(big, smalls)| smalls.iter().map(move |s| (s.to_string(), big.to_string())))
        .collect()
}

fn bounded_faces() -> Vec<Face> {
    vec![
        face("M1", IntegralAffinePolytope::point(&RationalPoint::from_i64s(&[-1, -1]))),
        face("M2", IntegralAffinePolytope::point(&RationalPoint::from_i64s(&[2, -1]))),
        face("M3", IntegralAffinePolytope::point(&RationalPoint::from_i64s(&[-1, 2]))),
        face("M1&M2", poly(&[([0, 1], 1), ([0, -1], -1), ([1, 0], 1), ([-1, 0], 2)])),
        face("M2&M3", poly(&[([1, 1], -1), ([-1, -1], 1), ([1, 0], 1), ([-1, 0], 2)])),
        face("M1&M3", poly(&[([1, 0], 1), ([-1, 0], -1), ([0, 1], 1), ([0, -1], 2)])),
        face("M1&M2&M3", poly(&[([0, 1], 1), ([1, 0], 1), ([-1, -1], 1)])),
    ]
}

const BOUNDED_INCIDENCE: &[(&str, &[&str])] = &[
    ("M1&M2", &["M1", "M2"]),
    ("M2&M3", &["M2", "M3"]),
    ("M1&M3", &["M1", "M3"]),
    ("M1&M2&M3", &["M1&M2", "M2&M3", "M1&M3"]),
];

/// The triangle with its edges and corners; every chart has real dimension 4.
pub fn paper_complex() -> PolyhedralComplex {
    PolyhedralComplex::new(2, bounded_faces(), &pairs(BOUNDED_INCIDENCE)).expect("example complex is valid")
}

/// The triangle together with three strips along its edges and three corner wedges,
/// covering the plane. Recession directions are [`END_DIRECTIONS`].
pub fn extended_complex() -> PolyhedralComplex {
    let mut faces = bounded_faces();
    faces.extend([
        face("R1w", poly(&[([0, 1], 1), ([0, -1], -1), ([-1, 0], -1)])),
        face("R1s", poly(&[([1, 1], 2), ([-1, -1], -2), ([1, 0], 1)])),
        face("R2s", poly(&[([1, 1], -1), ([-1, -1], 1), ([1, 0], -2)])),
        face("R2n", poly(&[([1, 0], -2), ([-1, 0], 2), ([0, 1], 1)])),
        face("R3n", poly(&[([1, 0], 1), ([-1, 0], -1), ([0, 1], -2)])),
        face("R3w", poly(&[([0, 1], -2), ([0, -1], 2), ([-1, 0], -1)])),
        face("S12", poly(&[([0, -1], -1), ([1, 1], 2), ([-1, -1], 1)])),
        face("S23", poly(&[([1, 1], -1), ([1, 0], 1), ([-1, 0], 2)])),
        face("S13", poly(&[([-1, 0], -1), ([0, 1], 1), ([0, -1], 2)])),
        face("W1", poly(&[([0, -1], -1), ([-1, -1], -2)])),
        face("W2", poly(&[([1, 1], -1), ([1, 0], -2)])),
        face("W3", poly(&[([-1, 0], -1), ([0, 1], -2)])),
    ]);
    let mut incidence = pairs(BOUNDED_INCIDENCE);
    incidence.extend(pairs(&[
        ("R1w", &["M1"]),
        ("R1s", &["M1"]),
        ("R2s", &["M2"]),
        ("R2n", &["M2"]),
        ("R3n", &["M3"]),
        ("R3w", &["M3"]),
        ("S12", &["M1&M2", "R1s", "R2s"]),
        ("S23", &["M2&M3", "R2n", "R3n"]),
        ("S13", &["M1&M3", "R1w", "R3w"]),
        ("W1", &["R1w", "R1s"]),
        ("W2", &["R2s", "R2n"]),
        ("W3", &["R3n", "R3w"]),
    ]));
    PolyhedralComplex::new(2, faces, &incidence).expect("extended complex is valid")
}

/// The curve of the example: a central vertex at the origin joined by unit-length
/// edges of weight `(-1,-1)`, `(2,-1)`, `(-1,2)` to corner vertices carrying
/// 3, 3 and 2 zero-derivative ends labelled `p1..p8`.
pub fn paper_curve() -> TropicalCurve {
    let mut vertices = vec![Vertex { id: "v0".into(), position: RationalPoint::from_i64s(&[0, 0]), genus: 0 }];
    let mut edges = Vec::new();
    let mut ends = Vec::new();
    let mut label = 0;
    for (i, (&(x, y), &n)) in CORNERS.iter().zip(&END_COUNTS).enumerate() {
        let v = format!("v{}", i + 1);
        vertices.push(Vertex { id: v.clone(), position: RationalPoint::from_i64s(&[x, y]), genus: 0 });
        edges.push(InternalEdge {
            id: format!("e{}", i + 1),
            tail: "v0".into(),
            head: v.clone(),
            length: BigRational::from_integer(1.into()),
            derivative: IntegralVector::from_i64s(&[x, y]),
        });
        for _ in 0..n {
            label += 1;
            ends.push(End { id: format!("p{label}"), vertex: v.clone(), derivative: IntegralVector::zero(2), label: format!("p{label}") });
        }
    }
    TropicalCurve::new(vertices, edges, ends).expect("example curve is well formed")
}

fn energy(terms: &[(&str, i64)]) -> EnergySum {
    EnergySum::new(terms.iter().map(|(k, v)| (k.to_string(), *v)))
}

/// Vertex classes of the example. The central vertex carries the toric class dual to the
/// three weight quotients; `v1`, `v2` carry a degree-2 generator on their edge's torus factor.
pub fn paper_invariants() -> Vec<VertexInvariant> {
    let one = BigRational::from_integer(1.into());
    let class = |hbar: i64, q: EnergySum, degree: i64, fiber: &[&str]| GWClass {
        coefficient: one.clone(),
        q_exponent: q,
        hbar_exponent: hbar,
        degree,
        toric: None,
        fiber_generators: fiber.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>(),
    };
    let weight_rows: BTreeMap<String, IntegralVector> = CORNERS
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| (format!("e{}", i + 1), IntegralVector::from_i64s(&[x, y])))
        .collect();
    let theta0 = GWClass { toric: Some(ToricDatum { rank: 2, weight_rows }), ..class(1, EnergySum::default(), 2, &[]) };
    vec![
        VertexInvariant { vertex: "v0".into(), class: theta0, euler_check: 1 },
        VertexInvariant { vertex: "v1".into(), class: class(2, energy(&[("E13", 1), ("E12", 2)]), 2, &["e1"]), euler_check: 2 },
        VertexInvariant { vertex: "v2".into(), class: class(2, energy(&[("E21", 1), ("E23", 2)]), 2, &["e2"]), euler_check: 2 },
        VertexInvariant { vertex: "v3".into(), class: class(1, energy(&[("E31", 2), ("E32", 1)]), 0, &[]), euler_check: 1 },
    ]
}
