mod common;

use std::path::{Path, PathBuf};
use std::process::Command as Process;

use common::scenario_path;
use num_bigint::BigInt;
use num_rational::BigRational;
use tropglue_cli::scenario::{ClassSpec, ComponentSpec, CurveSpec, CutComponentSpec, FanSpec};
use tropglue_cli::{execute, run, Command, Format, Options, Scenario};
use tropglue_core::curve::{cut, glue, induced_matching, midpoint_cuts};
use tropglue_core::evalspace::rend_gamma;
use tropglue_core::example::{extended_complex, paper_complex, paper_curve};

fn opts(path: &Path, format: Format) -> Options {
    Options { scenario: path.to_path_buf(), format, ..Default::default() }
}

fn example() -> PathBuf {
    scenario_path("paper_example.toml")
}

fn json(cmd: Command, path: &Path) -> serde_json::Value {
    run(cmd, &opts(path, Format::Json)).unwrap().json
}

fn binary(args: &[&str]) -> (String, String, i32) {
    let out = Process::new(env!("CARGO_BIN_EXE_tropglue")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap(), out.status.code().unwrap())
}

fn edited(replace: &str, with: &str) -> tempfile::NamedTempFile {
    let src = std::fs::read_to_string(example()).unwrap();
    assert!(src.contains(replace), "{replace}");
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), src.replacen(replace, with, 1)).unwrap();
    f
}

#[test]
fn glue_classes_prints_the_example_class() {
    let path = example();
    let (out, err, code) = binary(&["glue-classes", "--scenario", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    for line in ["k_gamma: 1", "aut: 1", "lattice index: 3", "coefficient: 3", "hbar exponent: 6", "degree: 0"] {
        assert!(out.lines().any(|l| l == line), "missing {line:?} in\n{out}");
    }
    let j = json(Command::GlueClasses, &path);
    let class: ClassSpec = serde_json::from_value(j["class"].clone()).unwrap();
    let class = class.build();
    assert_eq!(class.coefficient, BigRational::from_integer(3.into()));
    assert_eq!((class.hbar_exponent, class.degree), (6, 0));
}

#[test]
fn ledger_of_the_example() {
    let (out, _, code) = binary(&["ledger", "--scenario", example().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    let per: Vec<i64> = ["v0", "v1", "v2", "v3"].iter().map(|v| j["per_vertex"][v].as_i64().unwrap()).collect();
    assert_eq!(per, [1, 2, 2, 1]);
    assert_eq!(j["total"], 6);
    assert_eq!(j["expected"], 6);
}

#[test]
fn length_inconsistent_edge_fails_validation() {
    let f = edited(r#"length = "1", derivative = [2, -1]"#, r#"length = "2", derivative = [2, -1]"#);
    let (_, err, code) = binary(&["validate", "--scenario", f.path().to_str().unwrap()]);
    assert_ne!(code, 0);
    assert_eq!(code, 5);
    assert!(err.starts_with("error[validation]"), "{err}");
    assert!(err.contains("displacement: edge e2"), "{err}");
    let (_, err, _) = binary(&["validate", "--scenario", f.path().to_str().unwrap(), "--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(j["error"]["category"], "validation");
}

#[test]
fn error_categories() {
    let bad_syntax = edited("hbar = 1\ndegree = 2", "hbar = 1\ndegree = \"two\"");
    let (_, err, code) = execute(Command::Ledger, &opts(bad_syntax.path(), Format::Json));
    assert_eq!(code, 3);
    let j: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(j["error"]["category"], "parse");
    assert!(j["error"]["line"].as_u64().unwrap() > 1);
    assert!(j["error"]["column"].as_u64().unwrap() >= 1);

    let (_, err, code) = execute(Command::Ledger, &opts(Path::new("/nonexistent/scenario.toml"), Format::Text));
    assert_eq!(code, 4);
    assert!(err.starts_with("error[io]"));

    let dangling = edited(r#"vertex = "v3"
hbar = 1"#, r#"vertex = "v9"
hbar = 1"#);
    let (_, err, code) = execute(Command::GlueClasses, &opts(dangling.path(), Format::Text));
    assert_eq!(code, 5);
    assert!(err.starts_with("error[reference]"), "{err}");

    let unknown_energy = edited("q = { E31 = 2", "q = { E99 = 2");
    let (_, err, _) = execute(Command::GlueClasses, &opts(unknown_energy.path(), Format::Text));
    assert!(err.contains("E99"), "{err}");

    let bad_hbar = edited("vertex = \"v3\"\nhbar = 1", "vertex = \"v3\"\nhbar = 2");
    let (_, err, code) = execute(Command::GlueClasses, &opts(bad_hbar.path(), Format::Text));
    assert_eq!(code, 5);
    assert!(err.starts_with("error[validation]"), "{err}");

    let mut o = opts(&scenario_path("enumeration.toml"), Format::Text);
    o.budget = Some(10);
    let (_, err, code) = execute(Command::Enumerate, &o);
    assert_eq!(code, 7);
    assert!(err.starts_with("error[budget]"), "{err}");

    let (_, err, code) = execute(Command::Enumerate, &opts(&example(), Format::Text));
    assert_eq!(code, 5);
    assert!(err.contains("[constraints]"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    let (_, _, code) = binary(&["no-such-command"]);
    assert_eq!(code, 2);
    let (_, _, code) = binary(&["ledger"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_deterministic() {
    for cmd in Command::ALL.into_iter().filter(|c| *c != Command::Enumerate) {
        for format in [Format::Text, Format::Json] {
            let a = execute(cmd, &opts(&example(), format));
            let b = execute(cmd, &opts(&example(), format));
            assert_eq!(a.2, 0, "{} failed: {}", cmd.name(), a.1);
            assert_eq!(a, b, "{}", cmd.name());
        }
    }
}

#[test]
fn enumeration_report() {
    let path = scenario_path("enumeration.toml");
    let first = execute(Command::Enumerate, &opts(&path, Format::Json));
    assert_eq!(first.2, 0, "{}", first.1);
    assert_eq!(first, execute(Command::Enumerate, &opts(&path, Format::Json)));
    let j: serde_json::Value = serde_json::from_str(&first.0).unwrap();
    assert_eq!(j["total_multiplicity"], 12);
    assert_eq!(j["type_multiplicity"]["multiplicity"], 3);
    assert!(j["warnings"].as_array().unwrap().is_empty());
    let c = extended_complex();
    let mut sum = BigInt::from(0);
    for r in j["records"].as_array().unwrap() {
        let g = serde_json::from_value::<CurveSpec>(r["curve"].clone()).unwrap().build().unwrap();
        assert!(g.validate(&c, tropglue_core::BalancingMode::On).is_valid());
        sum += r["multiplicity"].as_i64().unwrap();
    }
    assert_eq!(sum, BigInt::from(12));
}

#[test]
fn emitted_objects_reparse_to_equal_objects() {
    let (c, g) = (paper_complex(), paper_curve());
    let comps = cut(&g, &midpoint_cuts(&g)).unwrap();

    let j = json(Command::Cut, &example());
    let parsed: Vec<CutComponentSpec> = serde_json::from_value(j["components"].clone()).unwrap();
    let rebuilt: Vec<_> = parsed.iter().map(|s| s.build().unwrap()).collect();
    assert_eq!(rebuilt, comps);

    let j = json(Command::Glue, &example());
    assert_eq!(j["isomorphic_to_input"], true);
    let glued = serde_json::from_value::<CurveSpec>(j["curve"].clone()).unwrap().build().unwrap();
    assert_eq!(glued, glue(&comps, &induced_matching(&comps), &c).unwrap());

    let j = json(Command::Complete, &example());
    let fan = serde_json::from_value::<FanSpec>(j["fan"].clone()).unwrap().build().unwrap();
    assert_eq!(fan, c.tangent_cone(&tropglue_core::RationalPoint::from_i64s(&[0, 0])).unwrap());

    let j = json(Command::Star, &example());
    let fan = serde_json::from_value::<FanSpec>(j["stars"][0]["fan"].clone()).unwrap().build().unwrap();
    assert_eq!(fan, tropglue_core::curve::star(&g, "v0", &c).unwrap().fan);

    let j = json(Command::Rend, &example());
    let expected = rend_gamma(&c, &g).unwrap();
    let got: Vec<(String, tropglue_core::EvaluationComponent)> = j["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| (k["id"].as_str().unwrap().to_string(), serde_json::from_value::<ComponentSpec>(k["component"].clone()).unwrap().build().unwrap()))
        .collect();
    assert_eq!(got, expected);
    assert_eq!(j["fiber_real_dimension"], 6);

    // the text report embeds the same objects as TOML
    let text = run(Command::Glue, &opts(&example(), Format::Text)).unwrap().text;
    let body = &text[text.find("isomorphic_to_input").unwrap()..];
    #[derive(serde::Deserialize)]
    struct Glued {
        curve: CurveSpec,
    }
    let from_text: Glued = toml::from_str(body).unwrap();
    assert_eq!(from_text.curve.build().unwrap(), glued);
}

#[test]
fn bundled_scenarios_round_trip() {
    for name in ["paper_example.toml", "enumeration.toml"] {
        let s = Scenario::read(&scenario_path(name)).unwrap();
        let again = Scenario::parse(&s.to_toml()).unwrap();
        assert_eq!(again, s);
        let (a, b) = (s.load().unwrap(), again.load().unwrap());
        assert_eq!(a.complex, b.complex);
        assert_eq!(a.curves, b.curves);
        assert_eq!(a.invariants, b.invariants);
        assert_eq!(a.constraints, b.constraints);
    }
    let loaded = Scenario::read(&example()).unwrap().load().unwrap();
    assert_eq!(loaded.complex, paper_complex());
    assert_eq!(loaded.curves[0].1, paper_curve());
    assert_eq!(loaded.invariants["gamma"], tropglue_core::example::paper_invariants());
    let ext = Scenario::read(&scenario_path("enumeration.toml")).unwrap().load().unwrap();
    assert_eq!(ext.complex, extended_complex());
}

#[test]
fn degeneration_block_builds_the_dual_complex() {
    let src = r#"
[complex.degeneration]
components = ["X1", "X2", "X3"]
intersections = [["X1", "X2"], ["X2", "X3"], ["X1", "X3"], ["X1", "X2", "X3"]]
"#;
    let s = Scenario::parse(src).unwrap();
    let c = s.load().unwrap().complex;
    // one coordinate per component; faces are the 3 vertices, 3 edges and the triangle
    assert_eq!(c.ambient_dim(), 3);
    assert_eq!(c.faces().len(), 7);
    let explicit = tropglue_cli::scenario::ComplexSpec::from_complex(&c).build().unwrap();
    assert_eq!(explicit, c);
}

#[test]
fn diagram_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("example.svg");
    let mut o = opts(&example(), Format::Text);
    o.emit_diagram = Some(svg.clone());
    let (_, err, code) = execute(Command::Validate, &o);
    assert_eq!(code, 0, "{err}");
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert!(doc.starts_with("<svg") && doc.trim_end().ends_with("</svg>"));
    assert_eq!(doc.matches("<polygon").count(), 1);
    assert_eq!(doc.matches("<line").count(), 3);
    assert!(doc.contains("M1&amp;M2&amp;M3") && !doc.contains("M1&M2"));
    execute(Command::Validate, &o);
    assert_eq!(std::fs::read_to_string(&svg).unwrap(), doc);
}
