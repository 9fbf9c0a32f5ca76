use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use tropglue_core::lattice::{
    abs_det, project_point, quotient_basis, smith_diagonal, Constraint, IntMatrix, IntegralAffineFunctional,
    IntegralAffinePolytope, IntegralVector, LatticeError, RationalPoint,
};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Determinant by Gaussian elimination over the rationals.
fn rational_det(rows: &[Vec<i64>]) -> BigRational {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let d = &f * &a[c][j];
                a[i][j] -= d;
            }
        }
    }
    det
}

fn square(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-6i64..=6, n), n))
}

#[test]
fn determinant_examples() {
    let m = |r: &[Vec<i64>]| abs_det(&IntMatrix::from_i64_rows(r).unwrap()).unwrap();
    assert_eq!(m(&[vec![-1, -1], vec![2, -1]]), BigInt::from(3));
    assert_eq!(m(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), BigInt::from(1));
    assert_eq!(m(&[vec![2, 4], vec![1, 2]]), BigInt::from(0));
    let wide = IntMatrix::from_i64_rows(&[vec![1, 2, 3]]).unwrap();
    assert!(matches!(abs_det(&wide), Err(LatticeError::NotSquare { .. })));
}

#[test]
fn content_examples() {
    assert_eq!(IntegralVector::from_i64s(&[2, 4]).content(), BigInt::from(2));
    assert_eq!(IntegralVector::from_i64s(&[0, 0]).content(), BigInt::from(0));
    assert_eq!(IntegralVector::from_i64s(&[-1, 2]).content(), BigInt::from(1));
    assert_eq!(IntegralVector::from_i64s(&[2, -1]).content(), BigInt::from(1));
}

fn quadrant() -> IntegralAffinePolytope {
    IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0), (vec![0, 1], 0)]).unwrap()
}

#[test]
fn strata_examples() {
    assert_eq!(quadrant().strata().len(), 4);
    assert_eq!(IntegralAffinePolytope::whole_space(2).strata().len(), 1);
    let triangle =
        IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0), (vec![0, 1], 0), (vec![-1, -1], 1)]).unwrap();
    assert_eq!(triangle.strata().len(), 7);
}

#[test]
fn tangent_strata_examples() {
    let p = quadrant();
    let open = p.strata_union_tangent(&IntegralVector::from_i64s(&[1, 1])).unwrap();
    assert!(open.constraints().iter().all(|c| c.strict));
    assert_eq!(p.strata_union_tangent(&IntegralVector::zero(2)).unwrap(), p);
    let half = IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0)]).unwrap();
    assert_eq!(half.strata_union_tangent(&IntegralVector::from_i64s(&[0, 1])).unwrap(), half);
}

#[test]
fn ray_examples() {
    let p = quadrant();
    let base = RationalPoint::from_i64s(&[1, 1]);
    assert!(p.spans_infinite_ray(&base, &IntegralVector::from_i64s(&[1, 1])).unwrap());
    assert!(!p.spans_infinite_ray(&base, &IntegralVector::from_i64s(&[-1, 0])).unwrap());
    let triangle =
        IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0), (vec![0, 1], 0), (vec![-1, -1], 1)]).unwrap();
    let inside = RationalPoint::from_fractions(&[(1, 4), (1, 4)]);
    for v in [[1, 0], [0, 1], [-1, 0], [1, -1], [3, 2]] {
        assert!(!triangle.spans_infinite_ray(&inside, &IntegralVector::from_i64s(&v)).unwrap());
    }
    assert!(matches!(
        p.spans_infinite_ray(&RationalPoint::from_i64s(&[-1, 0]), &IntegralVector::from_i64s(&[1, 0])),
        Err(LatticeError::PointOutside(_))
    ));
}

#[test]
fn quotient_examples() {
    let p = quadrant();
    let whole = p.quotient(&IntegralVector::from_i64s(&[1, 1])).unwrap();
    assert_eq!((whole.ambient_dim(), whole.constraints().len()), (1, 0));
    let half = IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0)]).unwrap();
    let line = half.quotient(&IntegralVector::from_i64s(&[0, 1])).unwrap();
    assert_eq!(line.ambient_dim(), 1);
    assert!(line.contains(&project_point(&IntegralVector::from_i64s(&[0, 1]), &RationalPoint::from_i64s(&[2, 5])).unwrap()));
    assert!(!line.contains(&project_point(&IntegralVector::from_i64s(&[0, 1]), &RationalPoint::from_i64s(&[-2, 5])).unwrap()));
    let r3 = IntegralAffinePolytope::whole_space(3).quotient(&IntegralVector::from_i64s(&[2, 0, 4])).unwrap();
    assert_eq!((r3.ambient_dim(), r3.constraints().len()), (2, 0));
    assert!(matches!(p.quotient(&IntegralVector::zero(2)), Err(LatticeError::ZeroDirection)));
    assert!(matches!(p.quotient(&IntegralVector::from_i64s(&[-1, 0])), Err(LatticeError::NoInfiniteRay(_))));
}

#[test]
fn opposite_directions_share_a_quotient() {
    let strip = IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0), (vec![-1, 0], 3)]).unwrap();
    let up = strip.quotient(&IntegralVector::from_i64s(&[0, 2])).unwrap();
    let down = strip.quotient(&IntegralVector::from_i64s(&[0, -1])).unwrap();
    assert_eq!(up, down);
}

/// Rows `(linear, constant, strict)` meaning `linear · y + constant ≥ 0` (or `> 0`).
type Row = (Vec<BigRational>, BigRational, bool);

/// Brute-force Fourier–Motzkin elimination of coordinate 0.
fn fm_drop_first(rows: &[Row]) -> Vec<Row> {
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

fn to_polytope(dim: usize, rows: &[Row]) -> IntegralAffinePolytope {
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

/// A complete polytope containing `x0` that recedes along `v`; some constraints are tangent to `v`.
fn complete_polytope() -> impl Strategy<Value = (IntegralAffinePolytope, IntegralVector)> {
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn content_times_primitive(v in prop::collection::vec(-50i64..=50, 1..6)) {
        let v = IntegralVector::from_i64s(&v);
        match v.primitive() {
            None => prop_assert!(v.is_zero() && v.content().is_zero()),
            Some(p) => {
                prop_assert_eq!(p.content(), BigInt::one());
                prop_assert_eq!(p.scale(&v.content()), v);
            }
        }
    }

    #[test]
    fn abs_det_matches_rational_elimination(rows in square(6)) {
        let d = abs_det(&IntMatrix::from_i64_rows(&rows).unwrap()).unwrap();
        prop_assert_eq!(BigRational::from_integer(d), rational_det(&rows).abs());
    }

    #[test]
    fn abs_det_matches_smith_product(rows in square(5)) {
        let m = IntMatrix::from_i64_rows(&rows).unwrap();
        let diag = smith_diagonal(&m);
        for w in diag.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && (&w[1] % &w[0]).is_zero());
        }
        let product: BigInt = diag.iter().product();
        prop_assert_eq!(abs_det(&m).unwrap(), product);
    }

    #[test]
    fn quotient_is_complete_and_matches_projection((p, v) in complete_polytope()) {
        prop_assert!(p.is_complete());
        let quot = p.quotient(&v).unwrap();
        prop_assert!(quot.is_complete());
        // P_v in the coordinates of the quotient basis, then project out the ray coordinate
        let b = quotient_basis(&v).unwrap();
        let pv = p.strata_union_tangent(&v).unwrap();
        let rows: Vec<Row> = pv
            .constraints()
            .iter()
            .map(|c| {
                let lin = (0..b.cols())
                    .map(|j| BigRational::from_integer(c.functional.linear.dot(&b.column(j))))
                    .collect();
                (lin, c.functional.constant.clone(), c.strict)
            })
            .collect();
        let oracle = to_polytope(p.ambient_dim() - 1, &fm_drop_first(&rows));
        prop_assert!(quot.same_set(&oracle), "{} vs {}", quot, oracle);
    }

    #[test]
    fn strata_partition_the_polytope((p, _) in complete_polytope(), samples in prop::collection::vec(prop::collection::vec(-8i64..=8, 4), 12)) {
        let strata = p.strata();
        let n = p.ambient_dim();
        let exact_member = |s: &tropglue_core::lattice::Stratum, x: &RationalPoint| {
            p.constraints().iter().enumerate().all(|(i, c)| {
                let val = c.functional.eval(x);
                if s.active.contains(&i) { val.is_zero() } else { val.is_positive() }
            })
        };
        let mut points: Vec<RationalPoint> = strata.iter().map(|s| s.sample.clone()).collect();
        points.extend(samples.iter().map(|s| RationalPoint::from_fractions(&s[..n].iter().map(|&x| (x, 2)).collect::<Vec<_>>())));
        for x in points.iter().filter(|x| p.contains(x)) {
            prop_assert_eq!(strata.iter().filter(|s| exact_member(s, x)).count(), 1);
        }
    }
}
