//! Components of the evaluation targets for ends and edges, and the gluing diagram.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::complex::{cone_of_face_at, ComplexError, PolyhedralComplex};
use crate::curve::{CutCurveComponent, Side, TropicalCurve};
use crate::lattice::{IntegralAffinePolytope, IntegralVector, LatticeError, RationalPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{direction} spans no infinite ray in face {face}")]
    NoComponent { face: String, direction: IntegralVector },
    #[error("components matched along {edge} differ")]
    Mismatch { edge: String },
    #[error("edge {edge} is missing its {side} cut piece")]
    MissingCut { edge: String, side: &'static str },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `ℝend`: end positions; `End`: its quotient by the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Target {
    #[default]
    REnd,
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Full,
    RayQuotient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stabilizer {
    Trivial,
    /// The one-dimensional exploded torus.
    Torus,
    Cyclic(BigInt),
}

impl fmt::Display for Stabilizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stabilizer::Trivial => write!(f, "trivial"),
            Stabilizer::Torus => write!(f, "T"),
            Stabilizer::Cyclic(m) => write!(f, "Z/{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationComponent {
    pub kind: ComponentKind,
    pub face: String,
    pub direction: IntegralVector,
    pub polytope: IntegralAffinePolytope,
    pub stabilizer: Stabilizer,
    pub real_dimension: usize,
}

impl EvaluationComponent {
    /// Key under which `v` and `-v` components are identified.
    pub fn identification_key(&self) -> (String, Option<IntegralVector>, BigInt) {
        (self.face.clone(), self.direction.primitive().map(|p| p.sign_normalized()), self.direction.content())
    }

    /// Rank of the quotient lattice the component lives in.
    pub fn lattice_rank(&self) -> usize {
        self.polytope.ambient_dim()
    }
}

/// The component of end positions over `face` with direction `v`.
pub fn end_component(
    c: &PolyhedralComplex,
    face: &str,
    v: &IntegralVector,
    target: Target,
) -> Result<EvaluationComponent, EvalError> {
    let f = c.face(face)?;
    component_over(face, &f.polytope, f.chart_real_dim, v, target)
}

fn component_over(
    face: &str,
    p: &IntegralAffinePolytope,
    chart_real_dim: usize,
    v: &IntegralVector,
    target: Target,
) -> Result<EvaluationComponent, EvalError> {
    if v.is_zero() {
        return Ok(EvaluationComponent {
            kind: ComponentKind::Full,
            face: face.to_string(),
            direction: v.clone(),
            polytope: p.clone(),
            stabilizer: match target {
                Target::REnd => Stabilizer::Trivial,
                Target::End => Stabilizer::Torus,
            },
            real_dimension: chart_real_dim,
        });
    }
    let quotient = p.quotient(v).map_err(|e| match e {
        LatticeError::NoInfiniteRay(_) => EvalError::NoComponent { face: face.to_string(), direction: v.clone() },
        other => other.into(),
    })?;
    Ok(EvaluationComponent {
        kind: ComponentKind::RayQuotient,
        face: face.to_string(),
        direction: v.clone(),
        polytope: quotient,
        stabilizer: Stabilizer::Cyclic(v.content()),
        real_dimension: chart_real_dim - 2,
    })
}

/// Component over the tropical completion of the stratum containing `at`:
/// the minimal face there is replaced by its cone at `at`.
pub fn completed_component(
    c: &PolyhedralComplex,
    at: &RationalPoint,
    v: &IntegralVector,
    target: Target,
) -> Result<EvaluationComponent, EvalError> {
    let loc = c.stratum_containing(at)?;
    let f = c.face(&loc.face)?;
    component_over(&loc.face, &cone_of_face_at(&f.polytope, at), f.chart_real_dim, v, target)
}

/// One component per edge of `γ`, keyed by edge id: internal edges first, then ends.
pub fn rend_gamma(c: &PolyhedralComplex, g: &TropicalCurve) -> Result<Vec<(String, EvaluationComponent)>, EvalError> {
    let pos = |id: &str| g.vertex(id).expect("validated reference").position.clone();
    let mut out = Vec::new();
    for e in g.edges() {
        let mid = pos(&e.tail).midpoint(&pos(&e.head));
        out.push((e.id.clone(), completed_component(c, &mid, &e.derivative, Target::REnd)?));
    }
    for e in g.ends() {
        let base = pos(&e.vertex);
        let comp = if e.derivative.is_zero() {
            completed_component(c, &base, &e.derivative, Target::REnd)?
        } else {
            let t = c.ray_settling_parameter(&base, &e.derivative) + BigRational::from_integer(1.into());
            let far = base.translate(&t, &e.derivative);
            let loc = c.stratum_containing(&far)?;
            end_component(c, &loc.face, &e.derivative, Target::REnd)?
        };
        out.push((e.id.clone(), comp));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalPair {
    pub edge: String,
    pub tail: EvaluationComponent,
    pub head: EvaluationComponent,
}

/// `Δ` identifies the two sides of each internal edge; `i` forgets them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingDiagramDescriptor {
    pub diagonal: Vec<DiagonalPair>,
    /// End label → component, in label order.
    pub outputs: Vec<(String, EvaluationComponent)>,
    /// Internal edge → factor forgotten by `i`.
    pub forgotten: Vec<(String, EvaluationComponent)>,
    pub fiber_real_dimension: usize,
}

/// Builds the diagram from the cut components of `γ`.
pub fn gluing_diagram(
    c: &PolyhedralComplex,
    g: &TropicalCurve,
    comps: &[CutCurveComponent],
) -> Result<GluingDiagramDescriptor, EvalError> {
    let mut sides: BTreeMap<(&str, Side), EvaluationComponent> = BTreeMap::new();
    for comp in comps {
        for ce in &comp.cut_edges {
            let at = comp.cut_point(ce);
            let target = if ce.side == Side::End { Target::REnd } else { Target::End };
            let component = if ce.side == Side::End && !ce.derivative.is_zero() {
                let t = c.ray_settling_parameter(&at, &ce.derivative) + BigRational::from_integer(1.into());
                let loc = c.stratum_containing(&at.translate(&t, &ce.derivative))?;
                end_component(c, &loc.face, &ce.derivative, target)?
            } else {
                completed_component(c, &at, &ce.derivative, target)?
            };
            sides.insert((ce.parent.as_str(), ce.side), component);
        }
    }
    let mut diagonal = Vec::new();
    let mut forgotten = Vec::new();
    for e in g.edges() {
        let take = |side: Side, name: &'static str| {
            sides.get(&(e.id.as_str(), side)).cloned().ok_or_else(|| EvalError::MissingCut { edge: e.id.clone(), side: name })
        };
        let (tail, head) = (take(Side::Tail, "tail")?, take(Side::Head, "head")?);
        if tail.identification_key() != head.identification_key() || tail.polytope != head.polytope {
            return Err(EvalError::Mismatch { edge: e.id.clone() });
        }
        forgotten.push((e.id.clone(), tail.clone()));
        diagonal.push(DiagonalPair { edge: e.id.clone(), tail, head });
    }
    let mut outputs: Vec<(String, EvaluationComponent)> = g
        .ends()
        .iter()
        .map(|e| {
            sides
                .get(&(e.id.as_str(), Side::End))
                .cloned()
                .map(|comp| (e.label.clone(), comp))
                .ok_or_else(|| EvalError::MissingCut { edge: e.id.clone(), side: "end" })
        })
        .collect::<Result<_, _>>()?;
    outputs.sort_by(|a, b| a.0.cmp(&b.0));
    let fiber_real_dimension = forgotten.iter().map(|(_, comp)| comp.real_dimension).sum();
    Ok(GluingDiagramDescriptor { diagonal, outputs, forgotten, fiber_real_dimension })
}
