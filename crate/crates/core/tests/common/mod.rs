#![allow(dead_code)]

use num_rational::BigRational;
use proptest::prelude::*;
use tropglue_core::curve::{End, InternalEdge, TropicalCurve, Vertex};
use tropglue_core::{IntegralVector, RationalPoint};

/// Grid points `(a/4, b/4)` of the example triangle `x, y >= -1`, `x + y <= 1`.
pub fn triangle_point() -> impl Strategy<Value = (i64, i64)> {
    (-4i64..=4, -4i64..=4).prop_filter("inside the triangle", |(a, b)| a + b <= 4)
}

#[derive(Clone, Debug)]
pub struct Shape {
    pub points: Vec<(i64, i64)>,
    pub genera: Vec<u32>,
    pub parents: Vec<usize>,
    pub extra: Vec<(usize, usize)>,
    pub ends: Vec<usize>,
}

pub fn shape(max_vertices: usize, max_extra: usize) -> impl Strategy<Value = Shape> {
    (1..=max_vertices)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(triangle_point(), n),
                prop::collection::vec(0u32..=2, n),
                (1..n.max(2)).map(|i| 0..i).collect::<Vec<_>>(),
                prop::collection::vec((0..n, 0..n), 0..=max_extra),
                prop::collection::vec(0..n, 0..=5),
            )
        })
        .prop_map(|(points, genera, mut parents, extra, ends)| {
            parents.truncate(points.len().saturating_sub(1));
            Shape { points, genera, parents, extra, ends }
        })
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn edge(id: String, tail: usize, head: usize, pts: &[(i64, i64)]) -> InternalEdge {
    let (a, b) = (pts[tail], pts[head]);
    let d = [b.0 - a.0, b.1 - a.1];
    // same position: a contracted edge of arbitrary length
    let length = if d == [0, 0] { q(1 + tail as i64, 3) } else { q(1, 4) };
    InternalEdge { id, tail: format!("v{tail}"), head: format!("v{head}"), length, derivative: IntegralVector::from_i64s(&d) }
}

/// A connected curve in the example triangle: a spanning tree plus `extra` edges,
/// zero-derivative ends, arbitrary vertex genera.
pub fn build(s: &Shape) -> TropicalCurve {
    let vertices = s
        .points
        .iter()
        .zip(&s.genera)
        .enumerate()
        .map(|(i, (&(a, b), &g))| Vertex { id: format!("v{i}"), position: RationalPoint::from_fractions(&[(a, 4), (b, 4)]), genus: g })
        .collect();
    let mut edges: Vec<InternalEdge> = s.parents.iter().enumerate().map(|(i, &p)| edge(format!("e{}", i + 1), p, i + 1, &s.points)).collect();
    edges.extend(s.extra.iter().enumerate().map(|(k, &(a, b))| edge(format!("x{}", k + 1), a, b, &s.points)));
    let ends = s
        .ends
        .iter()
        .enumerate()
        .map(|(k, &v)| End { id: format!("n{}", k + 1), vertex: format!("v{v}"), derivative: IntegralVector::zero(2), label: format!("p{}", k + 1) })
        .collect();
    TropicalCurve::new(vertices, edges, ends).expect("generated curve is well formed")
}

pub fn curve(max_vertices: usize, max_extra: usize) -> impl Strategy<Value = TropicalCurve> {
    shape(max_vertices, max_extra).prop_map(|s| build(&s))
}
