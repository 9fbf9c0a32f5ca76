//! Cutting a curve at a point on every edge, gluing cut components back, and stars.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{CurveError, End, InternalEdge, TropicalCurve, Vertex};
use crate::complex::{Fan, PolyhedralComplex};
use crate::lattice::{IntegralVector, RationalPoint};

/// Which piece of the parent edge a cut edge is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Tail,
    Head,
    /// The finite piece of an end.
    End,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Tail => "tail",
            Side::Head => "head",
            Side::End => "end",
        }
    }
}

/// A finite edge leaving `origin` and stopping at a cut point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutEdge {
    pub id: String,
    pub origin: String,
    /// Points away from `origin`.
    pub derivative: IntegralVector,
    pub cut_length: BigRational,
    pub parent: String,
    pub side: Side,
    /// End label carried over when the parent is an end.
    pub label: Option<String>,
}

/// A connected piece of a cut curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutCurveComponent {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<InternalEdge>,
    pub cut_edges: Vec<CutEdge>,
}

impl CutCurveComponent {
    fn origin_position(&self, c: &CutEdge) -> &RationalPoint {
        &self.vertices.iter().find(|v| v.id == c.origin).expect("origin is a component vertex").position
    }

    /// Where the cut edge stops.
    pub fn cut_point(&self, c: &CutEdge) -> RationalPoint {
        self.origin_position(c).translate(&c.cut_length, &c.derivative)
    }

    /// `2g − 2 + n` with `n` the number of cut edges.
    pub fn euler_exponent(&self) -> i64 {
        let g: i64 = self.vertices.iter().map(|v| i64::from(v.genus)).sum::<i64>() + self.edges.len() as i64 + 1
            - self.vertices.len() as i64;
        2 * g - 2 + self.cut_edges.len() as i64
    }
}

/// Cut at parameter `t` along each edge: `tail + t · derivative` for internal edges
/// (`0 < t < length`), `vertex + t · derivative` for ends (`t > 0`).
/// Every edge is cut, so each component is a single vertex.
pub fn cut(g: &TropicalCurve, at: &BTreeMap<String, BigRational>) -> Result<Vec<CutCurveComponent>, CurveError> {
    if let Some(unknown) = at.keys().find(|k| g.edge(k).is_none() && g.end(k).is_none()) {
        return Err(CurveError::UnknownEdge(unknown.clone()));
    }
    let mut comps: Vec<CutCurveComponent> = g
        .vertices()
        .iter()
        .map(|v| CutCurveComponent { vertices: vec![v.clone()], edges: Vec::new(), cut_edges: Vec::new() })
        .collect();
    let slot = |id: &str| g.vertices().iter().position(|v| v.id == id).expect("validated reference");
    for e in g.edges() {
        let t = at.get(&e.id).ok_or_else(|| CurveError::MissingCut(e.id.clone()))?;
        if !t.is_positive() || *t >= e.length {
            return Err(CurveError::CutOutOfRange { edge: e.id.clone() });
        }
        comps[slot(&e.tail)].cut_edges.push(CutEdge {
            id: format!("{}/tail", e.id),
            origin: e.tail.clone(),
            derivative: e.derivative.clone(),
            cut_length: t.clone(),
            parent: e.id.clone(),
            side: Side::Tail,
            label: None,
        });
        comps[slot(&e.head)].cut_edges.push(CutEdge {
            id: format!("{}/head", e.id),
            origin: e.head.clone(),
            derivative: -&e.derivative,
            cut_length: &e.length - t,
            parent: e.id.clone(),
            side: Side::Head,
            label: None,
        });
    }
    for e in g.ends() {
        let t = at.get(&e.id).ok_or_else(|| CurveError::MissingCut(e.id.clone()))?;
        if !t.is_positive() {
            return Err(CurveError::CutOutOfRange { edge: e.id.clone() });
        }
        comps[slot(&e.vertex)].cut_edges.push(CutEdge {
            id: format!("{}/end", e.id),
            origin: e.vertex.clone(),
            derivative: e.derivative.clone(),
            cut_length: t.clone(),
            parent: e.id.clone(),
            side: Side::End,
            label: Some(e.label.clone()),
        });
    }
    Ok(comps)
}

/// Half of each internal edge, and parameter 1 on each end.
pub fn midpoint_cuts(g: &TropicalCurve) -> BTreeMap<String, BigRational> {
    let half = BigRational::new(1.into(), 2.into());
    g.edges()
        .iter()
        .map(|e| (e.id.clone(), &e.length * &half))
        .chain(g.ends().iter().map(|e| (e.id.clone(), BigRational::one())))
        .collect()
}

/// Pairs the tail and head pieces of each cut internal edge.
pub fn induced_matching(comps: &[CutCurveComponent]) -> Vec<(String, String)> {
    let mut by_parent: BTreeMap<&str, [Option<&str>; 2]> = BTreeMap::new();
    for c in comps.iter().flat_map(|c| &c.cut_edges) {
        let slot = match c.side {
            Side::Tail => 0,
            Side::Head => 1,
            Side::End => continue,
        };
        by_parent.entry(c.parent.as_str()).or_default()[slot] = Some(c.id.as_str());
    }
    by_parent
        .into_values()
        .filter_map(|[t, h]| Some((t?.to_string(), h?.to_string())))
        .collect()
}

/// Glues matched cut edges into internal edges; unmatched ones become ends.
pub fn glue(
    comps: &[CutCurveComponent],
    matching: &[(String, String)],
    c: &PolyhedralComplex,
) -> Result<TropicalCurve, CurveError> {
    let mut cut_edges: BTreeMap<&str, (usize, &CutEdge)> = BTreeMap::new();
    for (k, comp) in comps.iter().enumerate() {
        for ce in &comp.cut_edges {
            cut_edges.insert(ce.id.as_str(), (k, ce));
        }
    }
    let lookup = |id: &str| cut_edges.get(id).copied().ok_or_else(|| CurveError::UnknownEdge(id.to_string()));
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut edges = Vec::new();
    for (a, b) in matching {
        for id in [a, b] {
            if !used.insert(id.clone()) {
                return Err(CurveError::RematchedCutEdge(id.clone()));
            }
        }
        let ((ka, ea), (kb, eb)) = (lookup(a)?, lookup(b)?);
        let (pa, pb) = (comps[ka].cut_point(ea), comps[kb].cut_point(eb));
        if pa != pb {
            return Err(CurveError::EvaluationMismatch { a: a.clone(), b: b.clone(), pa, pb });
        }
        if eb.derivative != -&ea.derivative {
            return Err(CurveError::NotOpposite { a: a.clone(), b: b.clone() });
        }
        let (t, h) = if ea.side == Side::Head && eb.side == Side::Tail { (eb, ea) } else { (ea, eb) };
        let id = if t.parent == h.parent { t.parent.clone() } else { format!("{}~{}", t.id, h.id) };
        edges.push(InternalEdge {
            id,
            tail: t.origin.clone(),
            head: h.origin.clone(),
            length: &t.cut_length + &h.cut_length,
            derivative: t.derivative.clone(),
        });
    }
    let mut ends = Vec::new();
    for comp in comps {
        for ce in &comp.cut_edges {
            if used.contains(&ce.id) {
                continue;
            }
            if !c.contains_ray(comp.origin_position(ce), &ce.derivative) {
                return Err(CurveError::NotExtendable(ce.id.clone()));
            }
            ends.push(End {
                id: if ce.side == Side::End { ce.parent.clone() } else { ce.id.clone() },
                vertex: ce.origin.clone(),
                derivative: ce.derivative.clone(),
                label: ce.label.clone().unwrap_or_else(|| ce.id.clone()),
            });
        }
    }
    let vertices = comps.iter().flat_map(|c| c.vertices.iter().cloned()).collect();
    let inner = comps.iter().flat_map(|c| c.edges.iter().cloned());
    TropicalCurve::new(vertices, inner.chain(edges).collect(), ends)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarRay {
    pub id: String,
    pub derivative: IntegralVector,
    pub label: Option<String>,
}

/// A single vertex at the apex of a fan, with semi-infinite rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCurve {
    pub vertex: String,
    pub genus: u32,
    pub fan: Fan,
    pub rays: Vec<StarRay>,
}

/// The star of `v` in the tangent cone at its position.
pub fn star(g: &TropicalCurve, v: &str, c: &PolyhedralComplex) -> Result<StarCurve, CurveError> {
    let vert = g
        .vertex(v)
        .ok_or_else(|| CurveError::UnknownVertex { item: "star".into(), vertex: v.to_string() })?;
    let fan = c.tangent_cone(&vert.position)?;
    let labels: BTreeMap<&str, &str> = g.ends().iter().map(|e| (e.id.as_str(), e.label.as_str())).collect();
    let rays: Vec<StarRay> = g
        .outgoing(v)
        .into_iter()
        .map(|(id, d)| StarRay { label: labels.get(id.as_str()).map(|l| l.to_string()), id, derivative: d })
        .collect();
    if let Some(bad) = rays.iter().find(|r| !fan.contains_direction(&r.derivative)) {
        return Err(CurveError::RayOutsideCone { vertex: v.to_string(), ray: bad.id.clone() });
    }
    Ok(StarCurve { vertex: v.to_string(), genus: vert.genus, fan, rays })
}
