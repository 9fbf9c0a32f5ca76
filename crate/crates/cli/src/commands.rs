use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use tropglue_core::curve::{cut, glue, induced_matching, is_isomorphic, midpoint_cuts, star, CutCurveComponent, StarCurve};
use tropglue_core::enumerate::{enumerate_rigid, multiplicity_of_type, EnumerateError, DEFAULT_BUDGET};
use tropglue_core::evalspace::{gluing_diagram, rend_gamma, GluingDiagramDescriptor};
use tropglue_core::gw::{euler_ledger, glue_classes, GwError, NodePattern};
use tropglue_core::{RationalPoint, TropicalCurve};

use crate::scenario::{ClassSpec, ComponentSpec, CurveSpec, CutComponentSpec, FanSpec, Int, Loaded, Rat, Scenario};
use crate::{svg, CliError, Command, Options, Report};

pub fn run(cmd: Command, opts: &Options) -> Result<Report, CliError> {
    let loaded = Scenario::read(&opts.scenario)?.load()?;
    let report = match cmd {
        Command::Validate => validate(&loaded, opts),
        Command::Cut => cut_report(&loaded, opts),
        Command::Glue => glue_report(&loaded, opts),
        Command::Star => star_report(&loaded, opts),
        Command::Complete => complete(&loaded),
        Command::Rend => rend(&loaded, opts),
        Command::GlueClasses => classes(&loaded, opts),
        Command::Enumerate => enumerate(&loaded, opts),
        Command::Ledger => ledger(&loaded, opts),
    }?;
    if let Some(path) = &opts.emit_diagram {
        let curve = if loaded.curves.is_empty() { None } else { Some(loaded.curve(opts.curve.as_deref())?.1) };
        let doc = svg::render(&loaded.complex, curve)?;
        std::fs::write(path, doc).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}

fn toml_block<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("emitted objects serialize")
}

/// The selected curve, checked against the complex.
fn checked_curve<'a>(l: &'a Loaded, opts: &Options) -> Result<(&'a str, &'a TropicalCurve), CliError> {
    let (name, g) = l.curve(opts.curve.as_deref())?;
    let report = g.validate(&l.complex, opts.balancing);
    if !report.is_valid() {
        let issues: Vec<String> = report.issues.iter().map(|i| i.to_string()).collect();
        return Err(CliError::Validation(format!("curve {name}: {}", issues.join("; "))));
    }
    Ok((name, g))
}

fn cut_parameters(l: &Loaded, g: &TropicalCurve) -> Result<BTreeMap<String, BigRational>, CliError> {
    let mut at = midpoint_cuts(g);
    for (id, t) in &l.run.cut_at {
        if !at.contains_key(id) {
            return Err(CliError::Reference(format!("run.cut_at names unknown edge {id}")));
        }
        at.insert(id.clone(), t.0.clone());
    }
    Ok(at)
}

fn cut_curve(l: &Loaded, g: &TropicalCurve) -> Result<Vec<CutCurveComponent>, CliError> {
    cut(g, &cut_parameters(l, g)?).map_err(|e| CliError::Compute(e.to_string()))
}

fn validate(l: &Loaded, opts: &Options) -> Result<Report, CliError> {
    let targets: Vec<&(String, TropicalCurve)> = match &opts.curve {
        Some(n) => vec![l.curves.iter().find(|(k, _)| k == n).ok_or_else(|| CliError::Reference(format!("no curve {n}")))?],
        None => l.curves.iter().collect(),
    };
    let mut text = format!("complex: {} faces, dimension {}\n", l.complex.faces().len(), l.complex.ambient_dim());
    let mut problems = Vec::new();
    let mut rows = Vec::new();
    for (name, g) in targets {
        let report = g.validate(&l.complex, opts.balancing);
        let issues: Vec<String> = report.issues.iter().map(|i| i.to_string()).collect();
        let genus = g.genus().map_err(|e| CliError::Validation(format!("curve {name}: {e}")))?;
        if issues.is_empty() {
            let _ = writeln!(text, "curve {name}: ok (genus {genus}, {} vertices, {} edges, {} ends)", g.vertices().len(), g.edges().len(), g.ends().len());
        } else {
            problems.push(format!("curve {name}: {}", issues.join("; ")));
        }
        rows.push(json!({ "curve": name, "valid": issues.is_empty(), "genus": genus, "issues": issues }));
    }
    if let Some(cs) = &l.constraints {
        let _ = writeln!(text, "constraints: {} points, {} unbounded ends", cs.points.len(), cs.unbounded_ends.len());
    }
    if !problems.is_empty() {
        return Err(CliError::Validation(problems.join("\n")));
    }
    Ok(Report { text, json: json!({ "complex": { "faces": l.complex.faces().len(), "dim": l.complex.ambient_dim() }, "curves": rows }) })
}

#[derive(Serialize)]
struct CutOutput<'a> {
    curve: &'a str,
    components: Vec<CutComponentSpec>,
}

fn cut_report(l: &Loaded, opts: &Options) -> Result<Report, CliError> {
    let (name, g) = checked_curve(l, opts)?;
    let comps = cut_curve(l, g)?;
    let out = CutOutput { curve: name, components: comps.iter().map(CutComponentSpec::from_component).collect() };
    let mut text = format!("curve {name}: {} components\n", comps.len());
    for c in &comps {
        let ids: Vec<&str> = c.vertices.iter().map(|v| v.id.as_str()).collect();
        let _ = writeln!(text, "  [{}] {} cut edges, euler {}", ids.join(" "), c.cut_edges.len(), c.euler_exponent());
    }
    text.push('\n');
    text.push_str(&toml_block(&out));
    Ok(Report { text, json: serde_json::to_value(&out).expect("serializable") })
}

#[derive(Serialize)]
struct GlueOutput {
    isomorphic_to_input: bool,
    curve: CurveSpec,
}

fn glue_report(l: &Loaded, opts: &Options) -> Result<Report, CliError> {
    let (name, g) = checked_curve(l, opts)?;
    let comps = cut_curve(l, g)?;
    let matching: Vec<(String, String)> = if l.run.matching.is_empty() {
        induced_matching(&comps)
    } else {
        l.run.matching.iter().map(|[a, b]| (a.clone(), b.clone())).collect()
    };
    let glued = glue(&comps, &matching, &l.complex).map_err(|e| CliError::Compute(e.to_string()))?;
    let out = GlueOutput { isomorphic_to_input: is_isomorphic(&glued, g), curve: CurveSpec::from_curve(&format!("{name}.glued"), &glued) };
    let mut text = format!("glued {} pairs; isomorphic to {name}: {}\n\n", matching.len(), out.isomorphic_to_input);
    text.push_str(&toml_block(&out));
    Ok(Report { text, json: serde_json::to_value(&out).expect("serializable") })
}

#[derive(Serialize)]
pub struct RaySpec {
    pub id: String,
    pub derivative: Vec<Int>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Serialize)]
struct StarSpec {
    vertex: String,
    genus: u32,
    fan: FanSpec,
    rays: Vec<RaySpec>,
}

impl StarSpec {
    fn new(s: &StarCurve) -> Self {
        StarSpec {
            vertex: s.vertex.clone(),
            genus: s.genus,
            fan: FanSpec::from_fan(&s.fan),
            rays: s
                .rays
                .iter()
                .map(|r| RaySpec {
                    id: r.id.clone(),
                    derivative: r.derivative.entries().iter().cloned().map(Int).collect(),
                    label: r.label.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct StarOutput<'a> {
    curve: &'a str,
    stars: Vec<StarSpec>,
}

fn star_report(l: &Loaded, opts: &Options) -> Result<Report, CliError> {
    let (name, g) = checked_curve(l, opts)?;
    let ids: Vec<String> = match &l.run.vertex {
        Some(v) => vec![v.clone()],
        None => g.vertices().iter().map(|v| v.id.clone()).collect(),
    };
    let mut stars = Vec::new();
    let mut text = format!("curve {name}\n");
    for id in &ids {
        let s = star(g, id, &l.complex).map_err(|e| CliError::Reference(e.to_string()))?;
        let dirs: Vec<String> = s.rays.iter().map(|r| r.derivative.to_string()).collect();
        let _ = writeln!(text, "  {id}: genus {}, fan dimension {}, {} cones, rays {}", s.genus, s.fan.dimension(), s.fan.cones.len(), dirs.join(" "));
        stars.push(StarSpec::new(&s));
    }
    let out = StarOutput { curve: name, stars };
    text.push('\n');
    text.push_str(&toml_block(&out));
    Ok(Report { text, json: serde_json::to_value(&out).expect("serializable") })
}

#[derive(Serialize)]
struct CompleteOutput {
    point: Vec<Rat>,
    face: String,
    dimension: usize,
    fan: FanSpec,
}

fn complete(l: &Loaded) -> Result<Report, CliError> {
    let p = l.run.point.as_ref().ok_or_else(|| CliError::Reference("complete needs run.point".into()))?;
    let point = RationalPoint::new(p.iter().map(|r| r.0.clone()).collect());
    if point.dim() != l.complex.ambient_dim() {
        return Err(CliError::Validation(format!("run.point has dimension {}, complex {}", point.dim(), l.complex.ambient_dim())));
    }
    let loc = l.complex.stratum_containing(&point).map_err(|e| CliError::Validation(e.to_string()))?;
    let fan = l.complex.tangent_cone(&point).map_err(|e| CliError::Validation(e.to_string()))?;
    let out = CompleteOutput { point: p.clone(), face: loc.face.clone(), dimension: loc.dimension, fan: FanSpec::from_fan(&fan) };
    let mut text = format!("point {point} lies in face {} (dimension {})\n", loc.face, loc.dimension);
    let _ = writeln!(text, "tangent cone: {} cones, dimension {}\n", fan.cones.len(), fan.dimension());
    text.push_str(&toml_block(&out));
    Ok(Report { text, json: serde_json::to_value(&out).expect("serializable") })
}

#[derive(Serialize)]
struct Keyed {
    id: String,
    component: ComponentSpec,
}

#[derive(Serialize)]
struct RendOutput<'a> {
    curve: &'a str,
    components: Vec<Keyed>,
    diagonal: Vec<String>,
    outputs: Vec<Keyed>,
    forgotten: Vec<Keyed>,
    fiber_real_dimension: usize,
}

fn keyed(list: &[(String, tropglue_core::EvaluationComponent)]) -> Vec<Keyed> {
    list.iter().map(|(id, c)| Keyed { id: id.clone(), component: ComponentSpec::from_component(c) }).collect()
}

fn diagram(l: &Loaded, g: &TropicalCurve) -> Result<GluingDiagramDescriptor, CliError> {
    let comps = cut_curve(l, g)?;
    gluing_diagram(&l.complex, g, &comps).map_err(|e| CliError::Compute(e.to_string()))
}

fn rend(l: &Loaded, opts: &Options) -> Result<Report, CliError> {
    let (name, g) = checked_curve(l, opts)?;
    let comps = rend_gamma(&l.complex, g).map_err(|e| CliError::Compute(e.to_string()))?;
    let d = diagram(l, g)?;
    let out = RendOutput {
        curve: name,
        components: keyed(&comps),
        diagonal: d.diagonal.iter().map(|p| p.edge.clone()).collect(),
        outputs: keyed(&d.outputs),
        forgotten: keyed(&d.forgotten),
        fiber_real_dimension: d.fiber_real_dimension,
    };
    let mut text = format!("curve {name}: {} evaluation components\n", comps.len());
    for (id, c) in &comps {
        let kind = ComponentSpec::from_component(c).kind;
        let _ = writeln!(
            text,
            "  {id}: {kind} over {} along {}, rank {}, stabilizer {}, real dimension {}",
            c.face,
            c.direction,
            c.lattice_rank(),
            c.stabilizer,
            c.real_dimension
        );
    }
    let _ = writeln!(text, "diagonal: {}", out.diagonal.join(" "));
    let labels: Vec<&str> = d.outputs.iter().map(|(k, _)| k.as_str()).collect();
    let _ = writeln!(text, "outputs: {}", labels.join(" "));
    let _ = writeln!(text, "fiber real dimension: {}", d.fiber_real_dimension);
    Ok(Report { text, json: serde_json::to_value(&out).expect("serializable") })
}

fn gw_error(e: GwError) -> CliError {
    match e {
        GwError::MissingInvariant(_) | GwError::ExtraInvariant(_) | GwError::UnknownEdge(_) => CliError::Reference(e.to_string()),
        GwError::Bookkeeping { .. } | GwError::VertexBookkeeping { .. } | GwError::OddDegree(_) | GwError::BadWeightRow { .. } => {
            CliError::Validation(e.to_string())
        }
        _ => CliError::Compute(e.to_string()),
    }
}

fn invariants_for<'a>(l: &'a Loaded, name: &str) -> &'a [tropglue_core::VertexInvariant] {
    l.invariants.get(name).map_or(&[], Vec::as_slice)
}

fn classes(l: &Loaded, opts: &Options) -> Result<Report, CliError> {
    let (name, g) = checked_curve(l, opts)?;
    let d = diagram(l, g)?;
    let glued = glue_classes(g, &d, invariants_for(l, name), l.run.descendant_shift).map_err(gw_error)?;
    let c = &glued.class;
    let mut text = format!("curve {name}\n");
    let _ = writeln!(text, "k_gamma: {}", glued.k_gamma);
    let _ = writeln!(text, "aut: {}", glued.aut_order);
    let _ = writeln!(text, "lattice index: {}", glued.lattice_index);
    let _ = writeln!(text, "coefficient: {}", c.coefficient);
    let _ = writeln!(text, "hbar exponent: {}", c.hbar_exponent);
    let _ = writeln!(text, "degree: {}", c.degree);
    let _ = writeln!(text, "q exponent: {}", c.q_exponent);
    let _ = writeln!(text, "class: {c}");
    let json = json!({
        "curve": name,
        "k_gamma": Int(glued.k_gamma.clone()),
        "aut": glued.aut_order,
        "lattice_index": Int(glued.lattice_index.clone()),
        "fiber_real_dimension": d.fiber_real_dimension,
        "class": ClassSpec::from_class(c),
    });
    Ok(Report { text, json })
}

fn ledger(l: &Loaded, opts: &Options) -> Result<Report, CliError> {
    let (name, g) = l.curve(opts.curve.as_deref())?;
    let led = euler_ledger(g, invariants_for(l, name)).map_err(gw_error)?;
    let mut text = format!("curve {name}\n");
    for (v, x) in &led.per_vertex {
        let _ = writeln!(text, "  {v}: {x}");
    }
    let _ = writeln!(text, "total: {}", led.total);
    let _ = writeln!(text, "expected 2g-2+n: {}", led.expected);
    let pattern = |p: NodePattern| match p {
        NodePattern::GenusReduction => "genus-reduction",
        NodePattern::Splitting => "splitting",
    };
    for (e, p) in &led.patterns {
        let _ = writeln!(text, "  node {e}: {}", pattern(*p));
    }
    let patterns: BTreeMap<&str, &str> = led.patterns.iter().map(|(e, p)| (e.as_str(), pattern(*p))).collect();
    let json = json!({
        "curve": name,
        "per_vertex": led.per_vertex,
        "total": led.total,
        "expected": led.expected,
        "patterns": patterns,
    });
    Ok(Report { text, json })
}

#[derive(Serialize)]
struct RecordOut {
    code: String,
    multiplicity: Int,
    curve: CurveSpec,
}

fn enumerate(l: &Loaded, opts: &Options) -> Result<Report, CliError> {
    let cs = l.constraints.as_ref().ok_or_else(|| CliError::Reference("enumerate needs a [constraints] block".into()))?;
    let e = enumerate_rigid(&l.complex, cs, opts.budget.unwrap_or(DEFAULT_BUDGET)).map_err(|e| match e {
        EnumerateError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        other => CliError::Validation(other.to_string()),
    })?;
    let total = e.total_multiplicity();
    let mut text = format!(
        "{} trivalent types, {} admissible, {} search nodes\n{:>4}  {:>4}  code\n",
        e.types_considered, e.types_admissible, e.search_nodes, "#", "mult"
    );
    for (i, r) in e.records.iter().enumerate() {
        let _ = writeln!(text, "{:>4}  {:>4}  {}", i + 1, r.multiplicity, r.code);
    }
    let _ = writeln!(text, "total multiplicity: {total}");
    let mut json = json!({
        "types_considered": e.types_considered,
        "types_admissible": e.types_admissible,
        "search_nodes": e.search_nodes,
        "total_multiplicity": Int(total),
        "warnings": e.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "records": e.records.iter().enumerate().map(|(i, r)| RecordOut {
            code: r.code.clone(),
            multiplicity: Int(r.multiplicity.clone()),
            curve: CurveSpec::from_curve(&format!("rigid{}", i + 1), &r.curve),
        }).collect::<Vec<_>>(),
    });
    if !l.curves.is_empty() {
        let (name, g) = l.curve(opts.curve.as_deref())?;
        let m = multiplicity_of_type(&e, g, cs, &l.complex);
        let _ = writeln!(text, "type of {name}: multiplicity {m}");
        json["type_multiplicity"] = json!({ "curve": name, "multiplicity": Int(m) });
    }
    for w in &e.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    Ok(Report { text, json })
}
