//! Decorated-graph backtracking: automorphisms fixing ends, and isomorphism.

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::TropicalCurve;
use crate::lattice::{IntegralVector, RationalPoint};

type EdgeKey = (usize, usize, BigRational, IntegralVector);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    position: RationalPoint,
    genus: u32,
    ends: Vec<(String, IntegralVector)>,
    germs: Vec<(BigRational, IntegralVector)>,
}

struct Prepared<'a> {
    curve: &'a TropicalCurve,
    sigs: Vec<Signature>,
    index: BTreeMap<&'a str, usize>,
}

impl<'a> Prepared<'a> {
    fn new(curve: &'a TropicalCurve) -> Self {
        let index: BTreeMap<&str, usize> = curve.vertices().iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let sigs = curve
            .vertices()
            .iter()
            .map(|v| {
                let mut ends: Vec<(String, IntegralVector)> = curve
                    .ends()
                    .iter()
                    .filter(|e| e.vertex == v.id)
                    .map(|e| (e.label.clone(), e.derivative.clone()))
                    .collect();
                ends.sort();
                let mut germs: Vec<(BigRational, IntegralVector)> = Vec::new();
                for e in curve.edges() {
                    if e.tail == v.id {
                        germs.push((e.length.clone(), e.derivative.clone()));
                    }
                    if e.head == v.id {
                        germs.push((e.length.clone(), -&e.derivative));
                    }
                }
                germs.sort();
                Signature { position: v.position.clone(), genus: v.genus, ends, germs }
            })
            .collect();
        Prepared { curve, sigs, index }
    }

    /// Edge multiset under the vertex relabeling `map`, normalized so tail <= head.
    fn edge_keys(&self, map: &[usize]) -> Vec<EdgeKey> {
        let mut keys: Vec<EdgeKey> = self
            .curve
            .edges()
            .iter()
            .map(|e| {
                let (t, h) = (map[self.index[e.tail.as_str()]], map[self.index[e.head.as_str()]]);
                if t < h {
                    (t, h, e.length.clone(), e.derivative.clone())
                } else if t > h {
                    (h, t, e.length.clone(), -&e.derivative)
                } else {
                    (t, h, e.length.clone(), e.derivative.sign_normalized())
                }
            })
            .collect();
        keys.sort();
        keys
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Vertex bijections `a → b` compatible with all decorations, found by backtracking.
fn vertex_maps(a: &Prepared, b: &Prepared, first_only: bool) -> u64 {
    let n = a.sigs.len();
    if n != b.sigs.len() || a.curve.edges().len() != b.curve.edges().len() || a.curve.ends().len() != b.curve.ends().len() {
        return 0;
    }
    let target = b.edge_keys(&(0..n).collect::<Vec<_>>());
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(i: usize, a: &Prepared, b: &Prepared, target: &[EdgeKey], map: &mut [usize], used: &mut [bool], first_only: bool) -> u64 {
        let n = map.len();
        if i == n {
            return u64::from(a.edge_keys(map) == target);
        }
        let mut count = 0;
        for j in 0..n {
            if used[j] || a.sigs[i] != b.sigs[j] {
                continue;
            }
            map[i] = j;
            used[j] = true;
            count += rec(i + 1, a, b, target, map, used, first_only);
            used[j] = false;
            if first_only && count > 0 {
                break;
            }
        }
        map[i] = usize::MAX;
        count
    }
    rec(0, a, b, &target, &mut map, &mut used, first_only)
}

/// Order of the group of automorphisms of `γ` fixing every end.
///
/// Parallel edges with equal data permute freely, and a loop with zero
/// derivative contributes a flip.
pub fn aut_order(g: &TropicalCurve) -> u64 {
    let p = Prepared::new(g);
    let vertex_part = vertex_maps(&p, &p, false);
    let keys = p.edge_keys(&(0..p.sigs.len()).collect::<Vec<_>>());
    let mut edge_part = 1u64;
    let mut k = 0;
    while k < keys.len() {
        let run = keys[k..].iter().take_while(|x| **x == keys[k]).count();
        edge_part *= factorial(run);
        k += run;
    }
    let flips = g.edges().iter().filter(|e| e.tail == e.head && e.derivative.is_zero()).count();
    (vertex_part * edge_part) << flips
}

/// Exact isomorphism: ids may differ, everything else (positions, labels) must match.
pub fn is_isomorphic(a: &TropicalCurve, b: &TropicalCurve) -> bool {
    let (pa, pb) = (Prepared::new(a), Prepared::new(b));
    let mut sa = pa.sigs.clone();
    let mut sb = pb.sigs.clone();
    sa.sort();
    sb.sort();
    sa == sb && vertex_maps(&pa, &pb, true) > 0
}

/// Isomorphism ignoring vertex positions and edge lengths.
pub fn is_isomorphic_combinatorially(a: &TropicalCurve, b: &TropicalCurve) -> bool {
    is_isomorphic(&forget_metric(a), &forget_metric(b))
}

fn forget_metric(g: &TropicalCurve) -> TropicalCurve {
    let origin = RationalPoint::origin(g.dim());
    let one = BigRational::from_integer(1.into());
    TropicalCurve::new(
        g.vertices().iter().map(|v| super::Vertex { position: origin.clone(), ..v.clone() }).collect(),
        g.edges().iter().map(|e| super::InternalEdge { length: one.clone(), ..e.clone() }).collect(),
        g.ends().to_vec(),
    )
    .expect("same structure as a valid curve")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{End, InternalEdge, Vertex};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn parallel_edges_swap() {
        let c = TropicalCurve::new(
            vec![
                Vertex { id: "a".into(), position: RationalPoint::from_i64s(&[0, 0]), genus: 0 },
                Vertex { id: "b".into(), position: RationalPoint::from_i64s(&[0, 0]), genus: 0 },
            ],
            ["x", "y"]
                .iter()
                .map(|id| InternalEdge { id: id.to_string(), tail: "a".into(), head: "b".into(), length: q(1), derivative: IntegralVector::zero(2) })
                .collect(),
            vec![],
        )
        .unwrap();
        // swap the two edges; also swap a <-> b (reversing zero derivatives)
        assert_eq!(aut_order(&c), 4);
    }

    #[test]
    fn ends_pin_vertices() {
        let c = TropicalCurve::new(
            vec![
                Vertex { id: "a".into(), position: RationalPoint::from_i64s(&[0, 0]), genus: 0 },
                Vertex { id: "b".into(), position: RationalPoint::from_i64s(&[0, 0]), genus: 0 },
            ],
            ["x", "y"]
                .iter()
                .map(|id| InternalEdge { id: id.to_string(), tail: "a".into(), head: "b".into(), length: q(1), derivative: IntegralVector::zero(2) })
                .collect(),
            vec![End { id: "e".into(), vertex: "a".into(), derivative: IntegralVector::zero(2), label: "p".into() }],
        )
        .unwrap();
        assert_eq!(aut_order(&c), 2);
    }

    #[test]
    fn single_vertex_and_loop() {
        let lone = TropicalCurve::new(
            vec![Vertex { id: "a".into(), position: RationalPoint::from_i64s(&[0, 0]), genus: 0 }],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(aut_order(&lone), 1);
        let looped = TropicalCurve::new(
            vec![Vertex { id: "a".into(), position: RationalPoint::from_i64s(&[0, 0]), genus: 0 }],
            vec![InternalEdge { id: "l".into(), tail: "a".into(), head: "a".into(), length: q(1), derivative: IntegralVector::zero(2) }],
            vec![],
        )
        .unwrap();
        assert_eq!(aut_order(&looped), 2);
    }
}
