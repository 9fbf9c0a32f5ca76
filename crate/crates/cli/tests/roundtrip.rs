mod common;

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tropglue_cli::scenario::{
    polytope_from_rows, ClassSpec, ConstraintRow, ConstraintSpec, CurveSpec, CutComponentSpec, Int, PointSpec, Rat, ToricSpec,
};
use tropglue_core::curve::{cut, midpoint_cuts, End, InternalEdge, Vertex};
use tropglue_core::{RationalPoint, TropicalCurve};

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct Holder<T> {
    item: T,
}

fn both_ways<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: T) -> Result<T, TestCaseError> {
    let toml_text = toml::to_string(&Holder { item: &x }).unwrap();
    let from_toml: Holder<T> = toml::from_str(&toml_text).unwrap();
    prop_assert_eq!(&from_toml.item, &x);
    let json_text = serde_json::to_string(&x).unwrap();
    let from_json: T = serde_json::from_str(&json_text).unwrap();
    prop_assert_eq!(&from_json, &x);
    Ok(from_json)
}

fn big_int() -> impl Strategy<Value = BigInt> {
    prop_oneof![
        any::<i64>().prop_map(BigInt::from),
        (any::<bool>(), prop::collection::vec(any::<u32>(), 1..5))
            .prop_map(|(neg, digits)| BigInt::from_slice(if neg { Sign::Minus } else { Sign::Plus }, &digits)),
    ]
}

fn big_rational() -> impl Strategy<Value = BigRational> {
    (big_int(), big_int().prop_filter("nonzero", |d| !d.is_zero())).prop_map(|(n, d)| BigRational::new(n, d))
}

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

/// A random curve moved by a rational scaling and translation, so coordinates are arbitrary rationals.
fn curve() -> impl Strategy<Value = TropicalCurve> {
    (common::curve(6, 3), positive_rational(), big_rational(), big_rational()).prop_map(|(g, s, tx, ty)| {
        let shift = [tx, ty];
        let vertices: Vec<Vertex> = g
            .vertices()
            .iter()
            .map(|v| Vertex {
                position: RationalPoint::new(v.position.coords().iter().zip(&shift).map(|(c, t)| c * &s + t).collect()),
                ..v.clone()
            })
            .collect();
        let edges: Vec<InternalEdge> = g.edges().iter().map(|e| InternalEdge { length: &e.length * &s, ..e.clone() }).collect();
        let ends: Vec<End> = g.ends().to_vec();
        TropicalCurve::new(vertices, edges, ends).unwrap()
    })
}

fn ints(n: usize) -> impl Strategy<Value = Vec<Int>> {
    prop::collection::vec(big_int().prop_map(Int), n)
}

fn rows(dim: usize) -> impl Strategy<Value = Vec<ConstraintRow>> {
    prop::collection::vec(
        (ints(dim), big_rational(), any::<bool>()).prop_map(|(linear, c, strict)| ConstraintRow { linear, constant: Rat(c), strict }),
        0..6,
    )
}

fn class() -> impl Strategy<Value = ClassSpec> {
    (
        big_rational(),
        -20i64..20,
        0i64..8,
        prop::collection::btree_map("E[0-9]{2}", -5i64..5, 0..4),
        prop::collection::btree_set("e[0-9]", 0..3),
        prop::option::of((1usize..4).prop_flat_map(|r| (Just(r), prop::collection::btree_map("e[0-9]", ints(r), 0..4)))),
    )
        .prop_map(|(c, hbar, degree, q, fiber, toric)| ClassSpec {
            coefficient: Rat(c),
            hbar,
            degree,
            q,
            fiber_generators: fiber.into_iter().collect(),
            toric: toric.map(|(rank, weight_rows)| ToricSpec { rank, weight_rows }),
        })
}

fn constraints() -> impl Strategy<Value = ConstraintSpec> {
    (
        0u32..5,
        positive_rational(),
        prop::collection::btree_map("M[1-3]", 0usize..4, 0..3),
        prop::collection::vec(ints(2), 0..6),
        prop::collection::vec(
            (prop::option::of("p[0-9]"), prop::option::of("M[1-3]"), prop::collection::vec(big_rational().prop_map(Rat), 2), prop::option::of("M[1-3]"))
                .prop_map(|(label, face, position, cluster)| PointSpec { label, face, position, cluster }),
            0..5,
        ),
    )
        .prop_map(|(degree_bound, r, end_distribution, unbounded_ends, points)| ConstraintSpec {
            degree_bound,
            cluster_radius: Rat(r),
            end_distribution,
            unbounded_ends,
            points,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn curves_round_trip(g in curve()) {
        let back = both_ways(CurveSpec::from_curve("g", &g))?;
        prop_assert_eq!(back.build().unwrap(), g);
    }

    #[test]
    fn cut_components_round_trip(g in curve()) {
        for comp in cut(&g, &midpoint_cuts(&g)).unwrap() {
            let back = both_ways(CutComponentSpec::from_component(&comp))?;
            prop_assert_eq!(back.build().unwrap(), comp);
        }
    }

    #[test]
    fn classes_round_trip(c in class()) {
        let built = c.build();
        let back = both_ways(ClassSpec::from_class(&built))?;
        prop_assert_eq!(back.build(), built);
    }

    #[test]
    fn polytopes_round_trip((dim, r) in (1usize..5).prop_flat_map(|d| (Just(d), rows(d)))) {
        // build through the spec and back, skipping row sets the polytope type rejects
        let r = both_ways(r)?;
        if let Ok(p) = polytope_from_rows(dim, &r, "random") {
            let again = polytope_from_rows(dim, &tropglue_cli::scenario::polytope_rows(&p), "random").unwrap();
            prop_assert_eq!(again, p);
        }
    }

    #[test]
    fn constraint_blocks_round_trip(c in constraints()) {
        both_ways(c)?;
    }

    #[test]
    fn rationals_print_in_lowest_terms(r in big_rational()) {
        let s = serde_json::to_string(&Rat(r.clone())).unwrap();
        let text: String = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(text, r.to_string());
        prop_assert_eq!(tropglue_cli::scenario::parse_rational(&r.to_string()), Some(r));
    }
}

#[test]
fn integer_forms_are_accepted_for_rationals() {
    let h: Holder<BTreeMap<String, Rat>> = toml::from_str("[item]\na = 3\nb = \"-6/4\"\nc = \"12345678901234567890123/7\"\n").unwrap();
    assert_eq!(h.item["a"].0, BigRational::from_integer(3.into()));
    assert_eq!(h.item["b"].0, BigRational::new((-3).into(), 2.into()));
    assert!(toml::from_str::<Holder<Rat>>("item = \"1/0\"").is_err());
    assert!(toml::from_str::<Holder<Rat>>("item = 0.5").is_err());
}
