//! Symbolic Gromov–Witten classes and the evaluation of the gluing formula in the toric regime.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::curve::{aut_order, CurveError, TropicalCurve};
use crate::evalspace::GluingDiagramDescriptor;
use crate::lattice::{abs_det, IntMatrix, IntegralVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GwError {
    #[error("{fiber_edges} fiber-generator edges but torus rank {rank}")]
    DegreeMismatch { fiber_edges: usize, rank: usize },
    #[error("more than one toric datum (vertices {0:?})")]
    UnsupportedRegime(Vec<String>),
    #[error("hbar exponents do not add up: vertices {vertices:?} sum to {sum}, curve has {expected}")]
    Bookkeeping { vertices: Vec<String>, sum: i64, expected: i64 },
    #[error("vertex {vertex}: hbar exponent {found}, expected {expected}")]
    VertexBookkeeping { vertex: String, found: i64, expected: i64 },
    #[error("no invariant for vertex {0}")]
    MissingInvariant(String),
    #[error("invariant given for unknown or repeated vertex {0}")]
    ExtraInvariant(String),
    #[error("{0} is not an internal edge")]
    UnknownEdge(String),
    #[error("toric weight row for {edge} has length {found}, rank is {rank}")]
    BadWeightRow { edge: String, found: usize, rank: usize },
    #[error("class degree {0} is odd")]
    OddDegree(i64),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Formal integer combination of energy symbols, e.g. `2 E12 + E13`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnergySum(BTreeMap<String, i64>);

impl EnergySum {
    pub fn new(terms: impl IntoIterator<Item = (String, i64)>) -> Self {
        let mut s = EnergySum::default();
        for (k, v) in terms {
            *s.0.entry(k).or_insert(0) += v;
        }
        s.0.retain(|_, v| *v != 0);
        s
    }

    pub fn terms(&self) -> &BTreeMap<String, i64> {
        &self.0
    }

    pub fn add(&self, other: &EnergySum) -> EnergySum {
        EnergySum::new(self.0.iter().chain(&other.0).map(|(k, v)| (k.clone(), *v)))
    }
}

impl fmt::Display for EnergySum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(k, v)| if *v == 1 { k.clone() } else { format!("{v}{k}") }).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Weight covectors of a torus of rank `rank`, one per internal edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDatum {
    pub rank: usize,
    pub weight_rows: BTreeMap<String, IntegralVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWClass {
    pub coefficient: BigRational,
    pub q_exponent: EnergySum,
    pub hbar_exponent: i64,
    /// Real cohomological degree.
    pub degree: i64,
    pub toric: Option<ToricDatum>,
    /// Internal edges whose torus factor carries a degree-2 generator from this class.
    pub fiber_generators: BTreeSet<String>,
}

impl GWClass {
    pub fn scalar(coefficient: BigRational, hbar_exponent: i64) -> Self {
        GWClass {
            coefficient,
            q_exponent: EnergySum::default(),
            hbar_exponent,
            degree: 0,
            toric: None,
            fiber_generators: BTreeSet::new(),
        }
    }

    pub fn zero(hbar_exponent: i64) -> Self {
        Self::scalar(BigRational::zero(), hbar_exponent)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }
}

impl fmt::Display for GWClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} hbar^{} q^({}) [deg {}]", self.coefficient, self.hbar_exponent, self.q_exponent, self.degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexInvariant {
    pub vertex: String,
    pub class: GWClass,
    /// Expected `2 g_v − 2 + n_v`.
    pub euler_check: i64,
}

/// Result of the gluing formula with its ingredients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedClass {
    pub class: GWClass,
    pub k_gamma: BigInt,
    pub aut_order: u64,
    pub lattice_index: BigInt,
}

/// `2 g_v − 2 + n_v` for each vertex, with `n_v` counting edge germs and ends.
pub fn vertex_euler(g: &TropicalCurve) -> BTreeMap<String, i64> {
    g.vertices().iter().map(|v| (v.id.clone(), 2 * i64::from(v.genus) - 2 + g.valence(&v.id) as i64)).collect()
}

/// `(k_γ / |Aut γ|) · i_! Δ^* ∏_v η_v`.
pub fn glue_classes(
    g: &TropicalCurve,
    diagram: &GluingDiagramDescriptor,
    invariants: &[VertexInvariant],
    descendant_degree_shift: u32,
) -> Result<GluedClass, GwError> {
    let mut by_vertex: BTreeMap<&str, &VertexInvariant> = BTreeMap::new();
    for inv in invariants {
        if g.vertex(&inv.vertex).is_none() || by_vertex.insert(inv.vertex.as_str(), inv).is_some() {
            return Err(GwError::ExtraInvariant(inv.vertex.clone()));
        }
    }
    if let Some(v) = g.vertices().iter().find(|v| !by_vertex.contains_key(v.id.as_str())) {
        return Err(GwError::MissingInvariant(v.id.clone()));
    }
    let local = vertex_euler(g);
    for inv in invariants {
        let expected = local[&inv.vertex];
        for found in [inv.euler_check, inv.class.hbar_exponent] {
            if found != expected {
                return Err(GwError::VertexBookkeeping { vertex: inv.vertex.clone(), found, expected });
            }
        }
        if inv.class.degree % 2 != 0 {
            return Err(GwError::OddDegree(inv.class.degree));
        }
    }
    let hbar: i64 = invariants.iter().map(|i| i.class.hbar_exponent).sum();
    let expected = g.euler_exponent()?;
    if hbar != expected {
        return Err(GwError::Bookkeeping {
            vertices: invariants.iter().map(|i| i.vertex.clone()).collect(),
            sum: hbar,
            expected,
        });
    }
    let q = invariants.iter().fold(EnergySum::default(), |acc, i| acc.add(&i.class.q_exponent));

    let toric: Vec<(&str, &ToricDatum)> =
        invariants.iter().filter_map(|i| i.class.toric.as_ref().map(|t| (i.vertex.as_str(), t))).collect();
    if toric.len() > 1 {
        return Err(GwError::UnsupportedRegime(toric.iter().map(|(v, _)| v.to_string()).collect()));
    }
    let fiber: BTreeSet<&str> =
        invariants.iter().flat_map(|i| i.class.fiber_generators.iter().map(String::as_str)).collect();
    for id in fiber.iter().copied().chain(toric.iter().flat_map(|(_, t)| t.weight_rows.keys().map(String::as_str))) {
        if g.edge(id).is_none() {
            return Err(GwError::UnknownEdge(id.to_string()));
        }
    }
    let lattice_index = match toric.first() {
        None if fiber.is_empty() => BigInt::one(),
        None => return Err(GwError::DegreeMismatch { fiber_edges: fiber.len(), rank: 0 }),
        Some((_, t)) => {
            if fiber.len() != t.rank {
                return Err(GwError::DegreeMismatch { fiber_edges: fiber.len(), rank: t.rank });
            }
            let mut rows = Vec::with_capacity(fiber.len());
            for id in &fiber {
                let row = t.weight_rows.get(*id).ok_or_else(|| GwError::UnknownEdge(id.to_string()))?;
                if row.dim() != t.rank {
                    return Err(GwError::BadWeightRow { edge: id.to_string(), found: row.dim(), rank: t.rank });
                }
                rows.push(row.clone());
            }
            abs_det(&IntMatrix::from_vectors(&rows).expect("rows have equal length")).expect("square by construction")
        }
    };

    let k_gamma = g.k_gamma();
    let aut = aut_order(g);
    let zero_class = || GWClass {
        coefficient: BigRational::zero(),
        q_exponent: q.clone(),
        hbar_exponent: hbar,
        degree: 0,
        toric: None,
        fiber_generators: BTreeSet::new(),
    };
    if k_gamma.is_zero() {
        return Ok(GluedClass { class: zero_class(), k_gamma, aut_order: aut, lattice_index });
    }
    let degree_sum: i64 = invariants.iter().map(|i| i.class.degree).sum::<i64>() + i64::from(descendant_degree_shift);
    let degree = degree_sum - diagram.fiber_real_dimension as i64;
    if degree < 0 {
        return Ok(GluedClass { class: zero_class(), k_gamma, aut_order: aut, lattice_index });
    }
    let product: BigRational = invariants.iter().fold(BigRational::one(), |acc, i| acc * &i.class.coefficient);
    let coefficient = BigRational::new(k_gamma.clone(), BigInt::from(aut)) * BigRational::from_integer(lattice_index.clone()) * product;
    let class = GWClass { coefficient, q_exponent: q, hbar_exponent: hbar, degree, toric: None, fiber_generators: BTreeSet::new() };
    Ok(GluedClass { class, k_gamma, aut_order: aut, lattice_index })
}

/// Degree contributed by the top Chern class of a complex bundle of rank `rank`.
pub fn chern_shift(rank: u32) -> u32 {
    2 * rank
}

/// Shape of the curve as seen by the splitting and genus-reduction axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodePattern {
    /// A non-separating node: a loop, or an edge whose removal keeps the curve connected.
    GenusReduction,
    /// A separating node.
    Splitting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerLedger {
    pub per_vertex: BTreeMap<String, i64>,
    pub total: i64,
    pub expected: i64,
    pub patterns: Vec<(String, NodePattern)>,
}

/// Checks `Σ_v (2 g_v − 2 + n_v) = 2g − 2 + n`, and against supplied invariants if any.
pub fn euler_ledger(g: &TropicalCurve, invariants: &[VertexInvariant]) -> Result<EulerLedger, GwError> {
    let per_vertex = vertex_euler(g);
    for inv in invariants {
        let expected = *per_vertex.get(&inv.vertex).ok_or_else(|| GwError::ExtraInvariant(inv.vertex.clone()))?;
        if inv.class.hbar_exponent != expected {
            return Err(GwError::VertexBookkeeping { vertex: inv.vertex.clone(), found: inv.class.hbar_exponent, expected });
        }
    }
    let total: i64 = per_vertex.values().sum();
    let expected = g.euler_exponent()?;
    if total != expected {
        return Err(GwError::Bookkeeping { vertices: per_vertex.keys().cloned().collect(), sum: total, expected });
    }
    let patterns = g
        .edges()
        .iter()
        .map(|e| {
            let rest: Vec<_> = g.edges().iter().filter(|f| f.id != e.id).cloned().collect();
            let without = TropicalCurve::new(g.vertices().to_vec(), rest, g.ends().to_vec()).expect("subgraph of a valid curve");
            let pattern = if without.connected_components().len() == 1 { NodePattern::GenusReduction } else { NodePattern::Splitting };
            (e.id.clone(), pattern)
        })
        .collect();
    Ok(EulerLedger { per_vertex, total, expected, patterns })
}
