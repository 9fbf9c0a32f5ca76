//! Tropical curves in a polyhedral complex.

mod iso;
mod ops;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::complex::PolyhedralComplex;
use crate::lattice::{IntegralVector, RationalPoint};

pub use iso::{aut_order, is_isomorphic, is_isomorphic_combinatorially};
pub use ops::{cut, glue, induced_matching, midpoint_cuts, star, CutCurveComponent, CutEdge, Side, StarCurve, StarRay};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("duplicate end label {0}")]
    DuplicateLabel(String),
    #[error("{item} refers to unknown vertex {vertex}")]
    UnknownVertex { item: String, vertex: String },
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("edge {0} has non-positive length")]
    NonPositiveLength(String),
    #[error("{item} has dimension {found}, expected {expected}")]
    DimensionMismatch { item: String, expected: usize, found: usize },
    #[error("a curve needs at least one vertex")]
    NoVertices,
    #[error("curve is disconnected; component genera {genera:?}")]
    Disconnected { genera: Vec<u64> },
    #[error("cut point on {edge} must be strictly inside it")]
    CutOutOfRange { edge: String },
    #[error("no cut point given for {0}")]
    MissingCut(String),
    #[error("ray {ray} leaves the tangent cone at {vertex}")]
    RayOutsideCone { vertex: String, ray: String },
    #[error("cut edges {a} and {b} do not meet: images {pa} and {pb}")]
    EvaluationMismatch { a: String, b: String, pa: RationalPoint, pb: RationalPoint },
    #[error("cut edges {a} and {b} have derivatives that are not opposite")]
    NotOpposite { a: String, b: String },
    #[error("unmatched cut edge {0} cannot be extended to an end")]
    NotExtendable(String),
    #[error("cut edge {0} is matched more than once")]
    RematchedCutEdge(String),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub position: RationalPoint,
    pub genus: u32,
}

/// `[0, length]` with constant derivative, so `head = tail + length · derivative`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalEdge {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub length: BigRational,
    pub derivative: IntegralVector,
}

/// A semi-infinite edge leaving `vertex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct End {
    pub id: String,
    pub vertex: String,
    pub derivative: IntegralVector,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurve {
    vertices: Vec<Vertex>,
    edges: Vec<InternalEdge>,
    ends: Vec<End>,
}

/// Where balancing is required.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BalancingMode {
    Off,
    /// Only vertices lying in the relative interior of a maximal face.
    #[default]
    InteriorOnly,
    On,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    Displacement { edge: String },
    VertexOutside { vertex: String },
    EdgeOutside { edge: String },
    EndNotRay { end: String },
    Unbalanced { vertex: String, sum: IntegralVector },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::Displacement { edge } => write!(f, "displacement: edge {edge} has head != tail + length * derivative"),
            Issue::VertexOutside { vertex } => write!(f, "vertex {vertex} lies outside the complex"),
            Issue::EdgeOutside { edge } => write!(f, "edge {edge} leaves the complex"),
            Issue::EndNotRay { end } => write!(f, "end {end} does not span an infinite ray"),
            Issue::Unbalanced { vertex, sum } => write!(f, "vertex {vertex} is unbalanced: sum {sum}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl TropicalCurve {
    /// Checks ids, references, lengths, dimensions and label uniqueness.
    /// Geometry against a complex is checked by [`TropicalCurve::validate`].
    pub fn new(vertices: Vec<Vertex>, edges: Vec<InternalEdge>, ends: Vec<End>) -> Result<Self, CurveError> {
        let Some(first) = vertices.first() else {
            return Err(CurveError::NoVertices);
        };
        let dim = first.position.dim();
        let mut ids = BTreeSet::new();
        let mut vids = BTreeSet::new();
        for v in &vertices {
            if !ids.insert(v.id.clone()) {
                return Err(CurveError::DuplicateId(v.id.clone()));
            }
            vids.insert(v.id.as_str());
            if v.position.dim() != dim {
                return Err(CurveError::DimensionMismatch { item: v.id.clone(), expected: dim, found: v.position.dim() });
            }
        }
        for e in &edges {
            if !ids.insert(e.id.clone()) {
                return Err(CurveError::DuplicateId(e.id.clone()));
            }
            for end in [&e.tail, &e.head] {
                if !vids.contains(end.as_str()) {
                    return Err(CurveError::UnknownVertex { item: e.id.clone(), vertex: end.clone() });
                }
            }
            if !e.length.is_positive() {
                return Err(CurveError::NonPositiveLength(e.id.clone()));
            }
            if e.derivative.dim() != dim {
                return Err(CurveError::DimensionMismatch { item: e.id.clone(), expected: dim, found: e.derivative.dim() });
            }
        }
        let mut labels = BTreeSet::new();
        for e in &ends {
            if !ids.insert(e.id.clone()) {
                return Err(CurveError::DuplicateId(e.id.clone()));
            }
            if !vids.contains(e.vertex.as_str()) {
                return Err(CurveError::UnknownVertex { item: e.id.clone(), vertex: e.vertex.clone() });
            }
            if !labels.insert(e.label.clone()) {
                return Err(CurveError::DuplicateLabel(e.label.clone()));
            }
            if e.derivative.dim() != dim {
                return Err(CurveError::DimensionMismatch { item: e.id.clone(), expected: dim, found: e.derivative.dim() });
            }
        }
        Ok(TropicalCurve { vertices, edges, ends })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[InternalEdge] {
        &self.edges
    }

    pub fn ends(&self) -> &[End] {
        &self.ends
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].position.dim()
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&InternalEdge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn end(&self, id: &str) -> Option<&End> {
        self.ends.iter().find(|e| e.id == id)
    }

    /// Outgoing derivatives at `v`: edges (both ends of a loop) and ends.
    pub fn outgoing(&self, v: &str) -> Vec<(String, IntegralVector)> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.tail == v {
                out.push((e.id.clone(), e.derivative.clone()));
            }
            if e.head == v {
                out.push((e.id.clone(), -&e.derivative));
            }
        }
        for e in &self.ends {
            if e.vertex == v {
                out.push((e.id.clone(), e.derivative.clone()));
            }
        }
        out
    }

    /// Number of edge germs at `v` (a loop counts twice).
    pub fn valence(&self, v: &str) -> usize {
        self.outgoing(v).len()
    }

    fn position(&self, id: &str) -> &RationalPoint {
        &self.vertex(id).expect("validated reference").position
    }

    pub fn validate(&self, c: &PolyhedralComplex, balancing: BalancingMode) -> ValidationReport {
        let mut issues = Vec::new();
        for v in &self.vertices {
            if !c.contains(&v.position) {
                issues.push(Issue::VertexOutside { vertex: v.id.clone() });
            }
        }
        for e in &self.edges {
            let (a, b) = (self.position(&e.tail), self.position(&e.head));
            if a.translate(&e.length, &e.derivative) != *b {
                issues.push(Issue::Displacement { edge: e.id.clone() });
            } else if !c.contains_segment(a, b) {
                issues.push(Issue::EdgeOutside { edge: e.id.clone() });
            }
        }
        for e in &self.ends {
            if !c.contains_ray(self.position(&e.vertex), &e.derivative) {
                issues.push(Issue::EndNotRay { end: e.id.clone() });
            }
        }
        if balancing != BalancingMode::Off {
            for v in &self.vertices {
                let check = match balancing {
                    BalancingMode::On => true,
                    _ => c
                        .stratum_containing(&v.position)
                        .ok()
                        .is_some_and(|loc| c.is_maximal(&loc.face).unwrap_or(false)),
                };
                if !check {
                    continue;
                }
                let sum = self
                    .outgoing(&v.id)
                    .iter()
                    .fold(IntegralVector::zero(self.dim()), |acc, (_, d)| &acc + d);
                if !sum.is_zero() {
                    issues.push(Issue::Unbalanced { vertex: v.id.clone(), sum });
                }
            }
        }
        ValidationReport { issues }
    }

    /// Vertex ids grouped by connected component, in first-appearance order.
    pub fn connected_components(&self) -> Vec<Vec<String>> {
        let idx: BTreeMap<&str, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, idx[e.tail.as_str()]), find(&mut parent, idx[e.head.as_str()]));
            parent[a] = b;
        }
        let mut groups: Vec<(usize, Vec<String>)> = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let r = find(&mut parent, i);
            match groups.iter_mut().find(|(root, _)| *root == r) {
                Some((_, g)) => g.push(v.id.clone()),
                None => groups.push((r, vec![v.id.clone()])),
            }
        }
        groups.into_iter().map(|(_, g)| g).collect()
    }

    fn genus_of(&self, comp: &[String]) -> u64 {
        let set: BTreeSet<&str> = comp.iter().map(String::as_str).collect();
        let g: u64 = self.vertices.iter().filter(|v| set.contains(v.id.as_str())).map(|v| u64::from(v.genus)).sum();
        let e = self.edges.iter().filter(|e| set.contains(e.tail.as_str())).count() as u64;
        g + e + 1 - comp.len() as u64
    }

    /// `Σ g_v + b_1`. Disconnected curves report each component's genus in the error.
    pub fn genus(&self) -> Result<u64, CurveError> {
        let comps = self.connected_components();
        if comps.len() != 1 {
            return Err(CurveError::Disconnected { genera: comps.iter().map(|c| self.genus_of(c)).collect() });
        }
        Ok(self.genus_of(&comps[0]))
    }

    /// `2g − 2 + n`.
    pub fn euler_exponent(&self) -> Result<i64, CurveError> {
        Ok(2 * self.genus()? as i64 - 2 + self.ends.len() as i64)
    }

    /// Product of the contents of the internal-edge derivatives.
    pub fn k_gamma(&self) -> BigInt {
        self.edges.iter().fold(BigInt::one(), |acc, e| acc * e.derivative.content())
    }

    pub fn has_contracted_edge(&self) -> bool {
        self.edges.iter().any(|e| e.derivative.is_zero())
    }

    /// Copy with every vertex, edge and end id passed through `f`. End labels are kept.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> TropicalCurve {
        TropicalCurve {
            vertices: self.vertices.iter().map(|v| Vertex { id: f(&v.id), ..v.clone() }).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| InternalEdge { id: f(&e.id), tail: f(&e.tail), head: f(&e.head), ..e.clone() })
                .collect(),
            ends: self.ends.iter().map(|e| End { id: f(&e.id), vertex: f(&e.vertex), ..e.clone() }).collect(),
        }
    }
}

/// Sum of outgoing derivatives at every vertex, zero vectors included.
pub fn balancing_defects(g: &TropicalCurve) -> BTreeMap<String, IntegralVector> {
    g.vertices()
        .iter()
        .map(|v| {
            let s = g.outgoing(&v.id).iter().fold(IntegralVector::zero(g.dim()), |acc, (_, d)| &acc + d);
            (v.id.clone(), s)
        })
        .collect()
}
