//! Scenario files: TOML with integer arrays for vectors and `"p/q"` strings for rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use tropglue_core::complex::{dual_complex, Face, Fan, NCDegenerationDescription, PolyhedralComplex};
use tropglue_core::curve::{CutCurveComponent, CutEdge, End, InternalEdge, Side, TropicalCurve, Vertex};
use tropglue_core::enumerate::{ConstraintSet, PointConstraint};
use tropglue_core::evalspace::{ComponentKind, EvaluationComponent, Stabilizer};
use tropglue_core::gw::{EnergySum, GWClass, ToricDatum, VertexInvariant};
use tropglue_core::lattice::{Constraint, IntegralAffineFunctional, IntegralAffinePolytope, IntegralVector, RationalPoint};

use crate::CliError;

/// An integer that serializes as a TOML/JSON integer when it fits, else as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(i) => s.serialize_i64(i),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                v.trim().parse().map(Int).map_err(|_| E::custom(format!("bad integer {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

/// A rational written `"p/q"` or `"p"`; bare integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub BigRational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a rational string \"p/q\" or an integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                parse_rational(v).map(Rat).ok_or_else(|| E::custom(format!("bad rational {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (BigInt, BigInt) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
            (d != BigInt::from(0)).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn ints(v: &IntegralVector) -> Vec<Int> {
    v.entries().iter().cloned().map(Int).collect()
}

fn vector(v: &[Int]) -> IntegralVector {
    IntegralVector::new(v.iter().map(|i| i.0.clone()).collect())
}

fn rats(p: &RationalPoint) -> Vec<Rat> {
    p.coords().iter().cloned().map(Rat).collect()
}

fn point(v: &[Rat]) -> RationalPoint {
    RationalPoint::new(v.iter().map(|r| r.0.clone()).collect())
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_zero_u32(x: &u32) -> bool {
    *x == 0
}

fn is_zero_i64(x: &i64) -> bool {
    *x == 0
}

fn is_one(r: &Rat) -> bool {
    r.0.is_one()
}

fn one() -> Rat {
    Rat(BigRational::one())
}

fn half() -> Rat {
    Rat(BigRational::new(1.into(), 2.into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintRow {
    pub linear: Vec<Int>,
    pub constant: Rat,
    #[serde(default, skip_serializing_if = "is_false")]
    pub strict: bool,
}

pub fn polytope_rows(p: &IntegralAffinePolytope) -> Vec<ConstraintRow> {
    p.constraints()
        .iter()
        .map(|c| ConstraintRow { linear: ints(&c.functional.linear), constant: Rat(c.functional.constant.clone()), strict: c.strict })
        .collect()
}

pub fn polytope_from_rows(dim: usize, rows: &[ConstraintRow], what: &str) -> Result<IntegralAffinePolytope, CliError> {
    let constraints = rows
        .iter()
        .map(|r| {
            if r.linear.len() != dim {
                return Err(CliError::Validation(format!("{what}: constraint has {} entries, dimension is {dim}", r.linear.len())));
            }
            let f = IntegralAffineFunctional::new(vector(&r.linear), r.constant.0.clone());
            Ok(if r.strict { Constraint::open(f) } else { Constraint::closed(f) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    IntegralAffinePolytope::new(dim, constraints).map_err(|e| CliError::Validation(format!("{what}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceSpec {
    pub id: String,
    #[serde(default)]
    pub constraints: Vec<ConstraintRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart_real_dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegenerationSpec {
    pub components: Vec<String>,
    #[serde(default)]
    pub intersections: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Default chart dimension for faces that do not set one; `2 · dim` if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart_real_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<FaceSpec>,
    /// Pairs `[smaller, larger]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub incidence: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneration: Option<DegenerationSpec>,
}

impl ComplexSpec {
    pub fn from_complex(c: &PolyhedralComplex) -> Self {
        ComplexSpec {
            dim: Some(c.ambient_dim()),
            chart_real_dim: None,
            faces: c
                .faces()
                .iter()
                .map(|f| FaceSpec { id: f.id.clone(), constraints: polytope_rows(&f.polytope), chart_real_dim: Some(f.chart_real_dim) })
                .collect(),
            incidence: c.incidence().into_iter().map(|(a, b)| [a, b]).collect(),
            degeneration: None,
        }
    }

    pub fn build(&self) -> Result<PolyhedralComplex, CliError> {
        if let Some(d) = &self.degeneration {
            if !self.faces.is_empty() {
                return Err(CliError::Validation("complex: give either faces or a degeneration, not both".into()));
            }
            let desc = NCDegenerationDescription { components: d.components.clone(), intersections: d.intersections.clone() };
            return dual_complex(&desc).map_err(|e| CliError::Validation(format!("complex: {e}")));
        }
        let dim = self.dim.ok_or_else(|| CliError::Validation("complex: `dim` is required with explicit faces".into()))?;
        let default_chart = self.chart_real_dim.unwrap_or(2 * dim);
        let faces = self
            .faces
            .iter()
            .map(|f| {
                Ok(Face {
                    id: f.id.clone(),
                    polytope: polytope_from_rows(dim, &f.constraints, &format!("face {}", f.id))?,
                    chart_real_dim: f.chart_real_dim.unwrap_or(default_chart),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let incidence: Vec<(String, String)> = self.incidence.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        PolyhedralComplex::new(dim, faces, &incidence).map_err(|e| CliError::Validation(format!("complex: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: String,
    pub position: Vec<Rat>,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub length: Rat,
    pub derivative: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndSpec {
    pub id: String,
    pub vertex: String,
    pub derivative: Vec<Int>,
    /// Defaults to the id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub name: String,
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub ends: Vec<EndSpec>,
}

impl CurveSpec {
    pub fn from_curve(name: &str, g: &TropicalCurve) -> Self {
        CurveSpec {
            name: name.to_string(),
            vertices: g.vertices().iter().map(|v| VertexSpec { id: v.id.clone(), position: rats(&v.position), genus: v.genus }).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    tail: e.tail.clone(),
                    head: e.head.clone(),
                    length: Rat(e.length.clone()),
                    derivative: ints(&e.derivative),
                })
                .collect(),
            ends: g
                .ends()
                .iter()
                .map(|e| EndSpec {
                    id: e.id.clone(),
                    vertex: e.vertex.clone(),
                    derivative: ints(&e.derivative),
                    label: (e.label != e.id).then(|| e.label.clone()),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<TropicalCurve, CliError> {
        let vertices = self.vertices.iter().map(|v| Vertex { id: v.id.clone(), position: point(&v.position), genus: v.genus }).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| InternalEdge {
                id: e.id.clone(),
                tail: e.tail.clone(),
                head: e.head.clone(),
                length: e.length.0.clone(),
                derivative: vector(&e.derivative),
            })
            .collect();
        let ends = self
            .ends
            .iter()
            .map(|e| End {
                id: e.id.clone(),
                vertex: e.vertex.clone(),
                derivative: vector(&e.derivative),
                label: e.label.clone().unwrap_or_else(|| e.id.clone()),
            })
            .collect();
        TropicalCurve::new(vertices, edges, ends).map_err(|e| CliError::Validation(format!("curve {}: {e}", self.name)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricSpec {
    pub rank: usize,
    pub weight_rows: BTreeMap<String, Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub coefficient: Rat,
    pub hbar: i64,
    #[serde(default, skip_serializing_if = "is_zero_i64")]
    pub degree: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub q: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fiber_generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toric: Option<ToricSpec>,
}

impl ClassSpec {
    pub fn from_class(c: &GWClass) -> Self {
        ClassSpec {
            coefficient: Rat(c.coefficient.clone()),
            hbar: c.hbar_exponent,
            degree: c.degree,
            q: c.q_exponent.terms().clone(),
            fiber_generators: c.fiber_generators.iter().cloned().collect(),
            toric: c.toric.as_ref().map(|t| ToricSpec {
                rank: t.rank,
                weight_rows: t.weight_rows.iter().map(|(k, v)| (k.clone(), ints(v))).collect(),
            }),
        }
    }

    pub fn build(&self) -> GWClass {
        GWClass {
            coefficient: self.coefficient.0.clone(),
            q_exponent: EnergySum::new(self.q.iter().map(|(k, v)| (k.clone(), *v))),
            hbar_exponent: self.hbar,
            degree: self.degree,
            toric: self.toric.as_ref().map(|t| ToricDatum {
                rank: t.rank,
                weight_rows: t.weight_rows.iter().map(|(k, v)| (k.clone(), vector(v))).collect(),
            }),
            fiber_generators: self.fiber_generators.iter().cloned().collect::<BTreeSet<_>>(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantSpec {
    pub curve: String,
    pub vertex: String,
    /// Expected `2 g_v − 2 + n_v`; defaults to `hbar`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_check: Option<i64>,
    #[serde(flatten)]
    pub class: ClassSpec,
}

impl InvariantSpec {
    pub fn from_invariant(curve: &str, v: &VertexInvariant) -> Self {
        InvariantSpec {
            curve: curve.to_string(),
            vertex: v.vertex.clone(),
            euler_check: (v.euler_check != v.class.hbar_exponent).then_some(v.euler_check),
            class: ClassSpec::from_class(&v.class),
        }
    }

    pub fn build(&self) -> VertexInvariant {
        VertexInvariant { vertex: self.vertex.clone(), class: self.class.build(), euler_check: self.euler_check.unwrap_or(self.class.hbar) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Located in the complex when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face: Option<String>,
    pub position: Vec<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub degree_bound: u32,
    #[serde(default = "half")]
    pub cluster_radius: Rat,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub end_distribution: BTreeMap<String, usize>,
    pub unbounded_ends: Vec<Vec<Int>>,
    pub points: Vec<PointSpec>,
}

impl ConstraintSpec {
    pub fn from_set(cs: &ConstraintSet) -> Self {
        ConstraintSpec {
            degree_bound: cs.degree_bound,
            cluster_radius: Rat(cs.cluster_radius.clone()),
            end_distribution: cs.end_distribution.clone(),
            unbounded_ends: cs.unbounded_ends.iter().map(ints).collect(),
            points: cs
                .points
                .iter()
                .map(|p| PointSpec { label: p.label.clone(), face: Some(p.face.clone()), position: rats(&p.position), cluster: p.cluster.clone() })
                .collect(),
        }
    }

    pub fn build(&self, c: &PolyhedralComplex) -> Result<ConstraintSet, CliError> {
        let points = self
            .points
            .iter()
            .map(|p| {
                let position = point(&p.position);
                let face = match &p.face {
                    Some(f) => f.clone(),
                    None => c
                        .stratum_containing(&position)
                        .map_err(|e| CliError::Validation(format!("constraint point {position}: {e}")))?
                        .face,
                };
                Ok(PointConstraint { label: p.label.clone(), face, position, cluster: p.cluster.clone() })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let cs = ConstraintSet {
            points,
            degree_bound: self.degree_bound,
            end_distribution: self.end_distribution.clone(),
            unbounded_ends: self.unbounded_ends.iter().map(|v| vector(v)).collect(),
            cluster_radius: self.cluster_radius.0.clone(),
        };
        cs.validate(c).map_err(|e| CliError::Validation(format!("constraints: {e}")))?;
        Ok(cs)
    }
}

/// Inputs for the individual subcommands.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    /// Curve used when `--curve` is not given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    /// Cut parameters per edge and end; midpoints (and 1 on ends) when absent.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cut_at: BTreeMap<String, Rat>,
    /// Explicit gluing of cut edges; the induced matching when absent.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matching: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub descendant_shift: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub complex: ComplexSpec,
    /// Energy symbols allowed in `q` exponents; unchecked when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub energies: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<CurveSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub invariants: Vec<InvariantSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<ConstraintSpec>,
    #[serde(default)]
    pub run: RunSpec,
}

/// A scenario with every block built and cross-checked.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub complex: PolyhedralComplex,
    pub curves: Vec<(String, TropicalCurve)>,
    pub invariants: BTreeMap<String, Vec<VertexInvariant>>,
    pub constraints: Option<ConstraintSet>,
    pub run: RunSpec,
}

impl Loaded {
    pub fn curve(&self, name: Option<&str>) -> Result<(&str, &TropicalCurve), CliError> {
        let name = name.or(self.run.curve.as_deref());
        let found = match name {
            Some(n) => self.curves.iter().find(|(k, _)| k == n),
            None => self.curves.first(),
        };
        found
            .map(|(k, g)| (k.as_str(), g))
            .ok_or_else(|| CliError::Reference(format!("no curve {}", name.unwrap_or("in scenario"))))
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(src, s.start));
            CliError::Parse { line, column, message: e.message().to_string() }
        })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&src)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        let complex = self.complex.build()?;
        let mut curves: Vec<(String, TropicalCurve)> = Vec::new();
        for spec in &self.curves {
            if curves.iter().any(|(n, _)| *n == spec.name) {
                return Err(CliError::Reference(format!("curve {} defined twice", spec.name)));
            }
            let g = spec.build()?;
            if g.dim() != complex.ambient_dim() {
                return Err(CliError::Validation(format!("curve {} has dimension {}, complex {}", spec.name, g.dim(), complex.ambient_dim())));
            }
            curves.push((spec.name.clone(), g));
        }
        let allowed: BTreeSet<&str> = self.energies.iter().map(String::as_str).collect();
        let mut invariants: BTreeMap<String, Vec<VertexInvariant>> = BTreeMap::new();
        for inv in &self.invariants {
            let Some((_, g)) = curves.iter().find(|(n, _)| *n == inv.curve) else {
                return Err(CliError::Reference(format!("invariant for unknown curve {}", inv.curve)));
            };
            if g.vertex(&inv.vertex).is_none() {
                return Err(CliError::Reference(format!("invariant for unknown vertex {} of {}", inv.vertex, inv.curve)));
            }
            let edges = inv.class.fiber_generators.iter().chain(inv.class.toric.iter().flat_map(|t| t.weight_rows.keys()));
            for e in edges {
                if g.edge(e).is_none() {
                    return Err(CliError::Reference(format!("invariant at {} names unknown edge {e}", inv.vertex)));
                }
            }
            if !allowed.is_empty() {
                if let Some(sym) = inv.class.q.keys().find(|k| !allowed.contains(k.as_str())) {
                    return Err(CliError::Reference(format!("undeclared energy symbol {sym}")));
                }
            }
            invariants.entry(inv.curve.clone()).or_default().push(inv.build());
        }
        let constraints = self.constraints.as_ref().map(|c| c.build(&complex)).transpose()?;
        if let Some(name) = &self.run.curve {
            if !curves.iter().any(|(n, _)| n == name) {
                return Err(CliError::Reference(format!("run.curve names unknown curve {name}")));
            }
        }
        Ok(Loaded { complex, curves, invariants, constraints, run: self.run.clone() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutEdgeSpec {
    pub id: String,
    pub origin: String,
    pub derivative: Vec<Int>,
    pub cut_length: Rat,
    pub parent: String,
    pub side: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutComponentSpec {
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    pub cut_edges: Vec<CutEdgeSpec>,
}

impl CutComponentSpec {
    pub fn from_component(c: &CutCurveComponent) -> Self {
        let shell = CurveSpec::from_curve(
            "",
            &TropicalCurve::new(c.vertices.clone(), c.edges.clone(), Vec::new()).expect("components are well formed"),
        );
        CutComponentSpec {
            vertices: shell.vertices,
            edges: shell.edges,
            cut_edges: c
                .cut_edges
                .iter()
                .map(|e| CutEdgeSpec {
                    id: e.id.clone(),
                    origin: e.origin.clone(),
                    derivative: ints(&e.derivative),
                    cut_length: Rat(e.cut_length.clone()),
                    parent: e.parent.clone(),
                    side: e.side.as_str().to_string(),
                    label: e.label.clone(),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<CutCurveComponent, CliError> {
        let shell = CurveSpec { name: "cut".into(), vertices: self.vertices.clone(), edges: self.edges.clone(), ends: Vec::new() }.build()?;
        let cut_edges = self
            .cut_edges
            .iter()
            .map(|e| {
                let side = match e.side.as_str() {
                    "tail" => Side::Tail,
                    "head" => Side::Head,
                    "end" => Side::End,
                    other => return Err(CliError::Validation(format!("cut edge {}: unknown side {other}", e.id))),
                };
                Ok(CutEdge {
                    id: e.id.clone(),
                    origin: e.origin.clone(),
                    derivative: vector(&e.derivative),
                    cut_length: e.cut_length.0.clone(),
                    parent: e.parent.clone(),
                    side,
                    label: e.label.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CutCurveComponent { vertices: shell.vertices().to_vec(), edges: shell.edges().to_vec(), cut_edges })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub face: String,
    pub constraints: Vec<ConstraintRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub ambient_dim: usize,
    pub cones: Vec<ConeSpec>,
}

impl FanSpec {
    pub fn from_fan(f: &Fan) -> Self {
        FanSpec {
            ambient_dim: f.ambient_dim,
            cones: f.cones.iter().map(|(id, p)| ConeSpec { face: id.clone(), constraints: polytope_rows(p) }).collect(),
        }
    }

    pub fn build(&self) -> Result<Fan, CliError> {
        let cones = self
            .cones
            .iter()
            .map(|c| Ok((c.face.clone(), polytope_from_rows(self.ambient_dim, &c.constraints, &c.face)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Fan { ambient_dim: self.ambient_dim, cones })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub kind: String,
    pub face: String,
    pub direction: Vec<Int>,
    pub lattice_rank: usize,
    pub constraints: Vec<ConstraintRow>,
    pub stabilizer: String,
    pub real_dimension: usize,
}

impl ComponentSpec {
    pub fn from_component(c: &EvaluationComponent) -> Self {
        ComponentSpec {
            kind: match c.kind {
                ComponentKind::Full => "full",
                ComponentKind::RayQuotient => "ray-quotient",
            }
            .to_string(),
            face: c.face.clone(),
            direction: ints(&c.direction),
            lattice_rank: c.lattice_rank(),
            constraints: polytope_rows(&c.polytope),
            stabilizer: c.stabilizer.to_string(),
            real_dimension: c.real_dimension,
        }
    }

    pub fn build(&self) -> Result<EvaluationComponent, CliError> {
        let kind = match self.kind.as_str() {
            "full" => ComponentKind::Full,
            "ray-quotient" => ComponentKind::RayQuotient,
            other => return Err(CliError::Validation(format!("unknown component kind {other}"))),
        };
        let stabilizer = match self.stabilizer.as_str() {
            "trivial" => Stabilizer::Trivial,
            "T" => Stabilizer::Torus,
            s => Stabilizer::Cyclic(
                s.strip_prefix("Z/")
                    .and_then(|m| m.parse().ok())
                    .ok_or_else(|| CliError::Validation(format!("unknown stabilizer {s}")))?,
            ),
        };
        Ok(EvaluationComponent {
            kind,
            face: self.face.clone(),
            direction: vector(&self.direction),
            polytope: polytope_from_rows(self.lattice_rank, &self.constraints, &self.face)?,
            stabilizer,
            real_dimension: self.real_dimension,
        })
    }
}
