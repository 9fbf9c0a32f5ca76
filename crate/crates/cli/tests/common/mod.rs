#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use tropglue_core::curve::{End, InternalEdge, TropicalCurve, Vertex};
use tropglue_core::lattice::{quotient_basis, Constraint, IntegralAffineFunctional};
use tropglue_core::{IntegralAffinePolytope, IntegralVector, RationalPoint};

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

/// Rows `(linear, constant, strict)` meaning `linear · y + constant ≥ 0` (or `> 0`).
pub type Row = (Vec<BigRational>, BigRational, bool);

/// Brute-force Fourier–Motzkin elimination of coordinate 0.
pub fn fm_drop_first(rows: &[Row]) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::new();
    let (pos, rest): (Vec<&Row>, Vec<&Row>) = rows.iter().partition(|r| r.0[0].is_positive());
    let (neg, zero): (Vec<&Row>, Vec<&Row>) = rest.into_iter().partition(|r| r.0[0].is_negative());
    for r in zero {
        out.push((r.0[1..].to_vec(), r.1.clone(), r.2));
    }
    for p in &pos {
        for n in &neg {
            let (a, b) = (-n.0[0].clone(), p.0[0].clone());
            let lin = (1..p.0.len()).map(|j| &p.0[j] * &a + &n.0[j] * &b).collect();
            out.push((lin, &p.1 * &a + &n.1 * &b, p.2 || n.2));
        }
    }
    out
}

pub fn to_polytope(dim: usize, rows: &[Row]) -> IntegralAffinePolytope {
    let constraints = rows
        .iter()
        .map(|(lin, c, strict)| {
            let l = lin.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let scale = BigRational::from_integer(l);
            let linear = IntegralVector::new(lin.iter().map(|x| (x * &scale).to_integer()).collect());
            let f = IntegralAffineFunctional::new(linear, c * &scale);
            if *strict {
                Constraint::open(f)
            } else {
                Constraint::closed(f)
            }
        })
        .collect();
    IntegralAffinePolytope::new(dim, constraints).unwrap()
}

/// `quotient(p, v)` recomputed by projecting the tangent strata along the ray coordinate.
pub fn projected_quotient(p: &IntegralAffinePolytope, v: &IntegralVector) -> IntegralAffinePolytope {
    let b = quotient_basis(v).unwrap();
    let pv = p.strata_union_tangent(v).unwrap();
    let rows: Vec<Row> = pv
        .constraints()
        .iter()
        .map(|c| {
            let lin = (0..b.cols()).map(|j| BigRational::from_integer(c.functional.linear.dot(&b.column(j)))).collect();
            (lin, c.functional.constant.clone(), c.strict)
        })
        .collect();
    to_polytope(p.ambient_dim() - 1, &fm_drop_first(&rows))
}

/// A complete polytope containing `x0` that recedes along `v`; some constraints are tangent to `v`.
pub fn complete_polytope() -> impl Strategy<Value = (IntegralAffinePolytope, IntegralVector)> {
    (2usize..=4)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-3i64..=3, n),
                prop::collection::vec(-4i64..=4, n),
                prop::collection::vec((prop::collection::vec(-3i64..=3, n), 0i64..3, any::<bool>()), 1..=6),
            )
        })
        .prop_filter("nonzero direction", |(v, _, _)| v.iter().any(|&x| x != 0))
        .prop_map(|(v, x0, rows)| {
            let n = v.len();
            let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
            let vv = dot(&v, &v);
            let constraints: Vec<(Vec<i64>, i64)> = rows
                .into_iter()
                .map(|(mut l, slack, tangent)| {
                    if tangent {
                        let lv = dot(&l, &v);
                        l = (0..n).map(|i| l[i] * vv - lv * v[i]).collect();
                    } else if dot(&l, &v) < 0 {
                        l.iter_mut().for_each(|x| *x = -*x);
                    }
                    let c = slack - dot(&l, &x0);
                    (l, c)
                })
                .collect();
            (IntegralAffinePolytope::from_i64_constraints(n, &constraints).unwrap(), IntegralVector::from_i64s(&v))
        })
}

pub fn scenario_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

/// Counts vertex bijections together with compatible edge bijections (loops may flip).
pub fn brute_force_aut(g: &TropicalCurve) -> u64 {
    fn count(k: usize, edges: &[(usize, usize, &InternalEdge)], perm: &[usize], used: &mut [bool]) -> u64 {
        if k == edges.len() {
            return 1;
        }
        let (t, h, e) = edges[k];
        let mut c = 0;
        for (j, &(t2, h2, f)) in edges.iter().enumerate() {
            if used[j] || f.length != e.length {
                continue;
            }
            let forward = perm[t] == t2 && perm[h] == h2 && f.derivative == e.derivative;
            let backward = perm[t] == h2 && perm[h] == t2 && f.derivative == -&e.derivative;
            for ok in [forward, backward] {
                if ok {
                    used[j] = true;
                    c += count(k + 1, edges, perm, used);
                    used[j] = false;
                }
            }
        }
        c
    }
    let vs = g.vertices();
    let n = vs.len();
    let idx = |id: &str| vs.iter().position(|v| v.id == id).unwrap();
    let edges: Vec<(usize, usize, &InternalEdge)> = g.edges().iter().map(|e| (idx(&e.tail), idx(&e.head), e)).collect();
    let fixed: Vec<usize> = g.ends().iter().map(|e| idx(&e.vertex)).collect();
    let mut total = 0;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let ok = (0..n).all(|i| vs[perm[i]].position == vs[i].position && vs[perm[i]].genus == vs[i].genus)
            && fixed.iter().all(|&v| perm[v] == v);
        if ok {
            total += count(0, &edges, &perm, &mut vec![false; edges.len()]);
        }
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    total
}
