use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::fm::{self, Row};
use super::matrix::{rational_rank, unimodular_completion, IntMatrix};
use super::{IntegralVector, LatticeError, RationalPoint};

/// `x ↦ ⟨linear, x⟩ + constant`, with integral linear part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralAffineFunctional {
    pub linear: IntegralVector,
    pub constant: BigRational,
}

impl IntegralAffineFunctional {
    pub fn new(linear: IntegralVector, constant: BigRational) -> Self {
        IntegralAffineFunctional { linear, constant }
    }

    pub fn from_i64s(linear: &[i64], constant: i64) -> Self {
        Self::new(IntegralVector::from_i64s(linear), BigRational::from_integer(constant.into()))
    }

    pub fn eval(&self, x: &RationalPoint) -> BigRational {
        self.linear.dot_rational(x.coords()) + &self.constant
    }

    fn negated(&self) -> Self {
        Self::new(-&self.linear, -self.constant.clone())
    }
}

/// `functional >= 0`, or `functional > 0` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub functional: IntegralAffineFunctional,
    pub strict: bool,
}

impl Constraint {
    pub fn closed(functional: IntegralAffineFunctional) -> Self {
        Constraint { functional, strict: false }
    }

    pub fn open(functional: IntegralAffineFunctional) -> Self {
        Constraint { functional, strict: true }
    }

    pub fn holds_at(&self, x: &RationalPoint) -> bool {
        let v = self.functional.eval(x);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }

    fn row(&self) -> Row {
        Row { coeffs: self.functional.linear.to_rational(), constant: self.functional.constant.clone(), strict: self.strict }
    }

    /// The complementary half-space, as a row.
    fn violation_row(&self) -> Row {
        let neg = self.functional.negated();
        Row { coeffs: neg.linear.to_rational(), constant: neg.constant, strict: !self.strict }
    }
}

/// Nonempty rational polyhedron `{x : α_i(x) >= 0 (or > 0)}` in `R^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralAffinePolytope {
    ambient_dim: usize,
    constraints: Vec<Constraint>,
}

/// A relatively open face: the points where exactly `active` constraints vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub active: Vec<usize>,
    pub dimension: usize,
    pub sample: RationalPoint,
}

impl IntegralAffinePolytope {
    /// Fails with `EmptyPolytope` if no point satisfies the constraints.
    pub fn new(ambient_dim: usize, constraints: Vec<Constraint>) -> Result<Self, LatticeError> {
        if let Some(c) = constraints.iter().find(|c| c.functional.linear.dim() != ambient_dim) {
            return Err(LatticeError::DimensionMismatch { expected: ambient_dim, found: c.functional.linear.dim() });
        }
        let p = IntegralAffinePolytope { ambient_dim, constraints };
        if p.witness().is_none() {
            return Err(LatticeError::EmptyPolytope);
        }
        Ok(p)
    }

    pub fn whole_space(ambient_dim: usize) -> Self {
        IntegralAffinePolytope { ambient_dim, constraints: Vec::new() }
    }

    /// Closed polytope from `(linear, constant)` pairs.
    pub fn from_i64_constraints(ambient_dim: usize, rows: &[(Vec<i64>, i64)]) -> Result<Self, LatticeError> {
        Self::new(
            ambient_dim,
            rows.iter().map(|(l, c)| Constraint::closed(IntegralAffineFunctional::from_i64s(l, *c))).collect(),
        )
    }

    /// The single point `p`, as a closed polytope cut out by coordinate equalities.
    pub fn point(p: &RationalPoint) -> Self {
        let n = p.dim();
        let mut constraints = Vec::with_capacity(2 * n);
        for i in 0..n {
            let e = IntegralVector::unit(n, i);
            constraints.push(Constraint::closed(IntegralAffineFunctional::new(e.clone(), -p.coords()[i].clone())));
            constraints.push(Constraint::closed(IntegralAffineFunctional::new(-e, p.coords()[i].clone())));
        }
        IntegralAffinePolytope { ambient_dim: n, constraints }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    fn rows(&self) -> Vec<Row> {
        self.constraints.iter().map(Constraint::row).collect()
    }

    /// Some point of the polytope.
    pub fn witness(&self) -> Option<RationalPoint> {
        fm::feasible_point(self.ambient_dim, &self.rows()).map(RationalPoint::new)
    }

    pub fn contains(&self, x: &RationalPoint) -> bool {
        x.dim() == self.ambient_dim && self.constraints.iter().all(|c| c.holds_at(x))
    }

    /// No strict constraints, so the polytope is closed.
    pub fn is_complete(&self) -> bool {
        self.constraints.iter().all(|c| !c.strict)
    }

    pub fn closure(&self) -> Self {
        IntegralAffinePolytope {
            ambient_dim: self.ambient_dim,
            constraints: self.constraints.iter().map(|c| Constraint::closed(c.functional.clone())).collect(),
        }
    }

    /// Constraints vanishing at `x`.
    pub fn active_at(&self, x: &RationalPoint) -> Vec<usize> {
        (0..self.constraints.len()).filter(|&i| self.constraints[i].functional.eval(x).is_zero()).collect()
    }

    fn rank_of(&self, idx: &[usize]) -> usize {
        let rows: Vec<Vec<BigRational>> = idx.iter().map(|&i| self.constraints[i].functional.linear.to_rational()).collect();
        rational_rank(&rows)
    }

    /// Constraints that vanish on all of the polytope.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        let base = self.rows();
        (0..self.constraints.len())
            .filter(|&i| {
                if self.constraints[i].strict {
                    return false;
                }
                let mut rows = base.clone();
                rows[i].strict = true;
                fm::feasible_point(self.ambient_dim, &rows).is_none()
            })
            .collect()
    }

    /// Dimension of the affine span.
    pub fn affine_dimension(&self) -> usize {
        self.ambient_dim - self.rank_of(&self.implicit_equalities())
    }

    /// All nonempty relatively open faces, by exact active set. They partition the polytope.
    pub fn strata(&self) -> Vec<Stratum> {
        let m = self.constraints.len();
        let closable: Vec<usize> = (0..m).filter(|&i| !self.constraints[i].strict).collect();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << closable.len()) {
            let active: Vec<usize> =
                closable.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i).collect();
            let rows: Vec<Row> = (0..m)
                .flat_map(|i| {
                    let c = &self.constraints[i];
                    if active.contains(&i) {
                        vec![c.row(), Constraint::closed(c.functional.negated()).row()]
                    } else {
                        let mut r = c.row();
                        r.strict = true;
                        vec![r]
                    }
                })
                .collect();
            if let Some(x) = fm::feasible_point(self.ambient_dim, &rows) {
                out.push(Stratum { dimension: self.ambient_dim - self.rank_of(&active), active, sample: RationalPoint::new(x) });
            }
        }
        out.sort_by(|a, b| b.dimension.cmp(&a.dimension).then_with(|| a.active.cmp(&b.active)));
        out
    }

    /// The stratum whose exact active set is that of `x`.
    pub fn stratum_of(&self, x: &RationalPoint) -> Option<Stratum> {
        if !self.contains(x) {
            return None;
        }
        let active = self.active_at(x);
        Some(Stratum { dimension: self.ambient_dim - self.rank_of(&active), active, sample: x.clone() })
    }

    /// `P_v`: constraints pairing nonzero with `v` become strict.
    pub fn strata_union_tangent(&self, v: &IntegralVector) -> Result<Self, LatticeError> {
        self.check_dim(v)?;
        let constraints = self
            .constraints
            .iter()
            .map(|c| Constraint {
                functional: c.functional.clone(),
                strict: c.strict || !c.functional.linear.dot(v).is_zero(),
            })
            .collect();
        IntegralAffinePolytope::new(self.ambient_dim, constraints).map_err(|_| LatticeError::EmptyStratum)
    }

    /// Whether `base + t v` stays in the polytope for all `t >= 0`.
    pub fn spans_infinite_ray(&self, base: &RationalPoint, v: &IntegralVector) -> Result<bool, LatticeError> {
        self.check_dim(v)?;
        if !self.contains(base) {
            return Err(LatticeError::PointOutside(base.clone()));
        }
        Ok(self.recedes_along(v))
    }

    /// `v` lies in the recession cone.
    pub fn recedes_along(&self, v: &IntegralVector) -> bool {
        self.constraints.iter().all(|c| !c.functional.linear.dot(v).is_negative())
    }

    /// `P/v` in coordinates `y = B⁻¹x` with the first coordinate dropped,
    /// where `B = unimodular_completion(±primitive(v))` is the sign-normalized completion.
    pub fn quotient(&self, v: &IntegralVector) -> Result<Self, LatticeError> {
        self.check_dim(v)?;
        let b = quotient_basis(v)?;
        if !self.recedes_along(v) {
            return Err(LatticeError::NoInfiniteRay(v.clone()));
        }
        self.strata_union_tangent(v).map_err(|_| LatticeError::NoInfiniteRay(v.clone()))?;
        let constraints = self
            .constraints
            .iter()
            .filter(|c| c.functional.linear.dot(v).is_zero())
            .map(|c| {
                let lin = b.left_mul_vector(&c.functional.linear).expect("dimensions checked");
                Constraint {
                    functional: IntegralAffineFunctional::new(
                        IntegralVector::new(lin.into_entries().into_iter().skip(1).collect()),
                        c.functional.constant.clone(),
                    ),
                    strict: c.strict,
                }
            })
            .collect();
        IntegralAffinePolytope::new(self.ambient_dim - 1, constraints)
    }

    /// `self ⊆ other`, decided exactly.
    pub fn subset_of(&self, other: &Self) -> bool {
        if self.ambient_dim != other.ambient_dim {
            return false;
        }
        let base = self.rows();
        other.constraints.iter().all(|c| {
            let mut rows = base.clone();
            rows.push(c.violation_row());
            fm::feasible_point(self.ambient_dim, &rows).is_none()
        })
    }

    pub fn same_set(&self, other: &Self) -> bool {
        self.subset_of(other) && other.subset_of(self)
    }

    pub fn intersection(&self, other: &Self) -> Option<Self> {
        if self.ambient_dim != other.ambient_dim {
            return None;
        }
        let constraints: Vec<Constraint> = self.constraints.iter().chain(&other.constraints).cloned().collect();
        IntegralAffinePolytope::new(self.ambient_dim, constraints).ok()
    }

    /// Adds `functional = 0` for each listed constraint. `None` if that empties the polytope.
    pub fn restrict_to_equalities(&self, idx: &[usize]) -> Option<Self> {
        let mut constraints = self.constraints.clone();
        for &i in idx {
            constraints.push(Constraint::closed(self.constraints[i].functional.negated()));
        }
        IntegralAffinePolytope::new(self.ambient_dim, constraints).ok()
    }

    fn check_dim(&self, v: &IntegralVector) -> Result<(), LatticeError> {
        if v.dim() != self.ambient_dim {
            return Err(LatticeError::DimensionMismatch { expected: self.ambient_dim, found: v.dim() });
        }
        Ok(())
    }
}

/// The basis used by [`IntegralAffinePolytope::quotient`]. Its first column is
/// the sign-normalized primitive of `v`, so `v` and `-v` share it.
pub fn quotient_basis(v: &IntegralVector) -> Result<IntMatrix, LatticeError> {
    let prim = v.primitive().ok_or(LatticeError::ZeroDirection)?;
    unimodular_completion(&prim.sign_normalized())
}

/// Image of `x` in the coordinates of `P/v`.
pub fn project_point(v: &IntegralVector, x: &RationalPoint) -> Result<RationalPoint, LatticeError> {
    let b = quotient_basis(v)?;
    let y = super::matrix::solve_rational(&b, x.coords()).ok_or(LatticeError::Singular)?;
    Ok(RationalPoint::new(y.into_iter().skip(1).collect()))
}

impl fmt::Display for IntegralAffinePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constraints.is_empty() {
            return write!(f, "R^{}", self.ambient_dim);
        }
        let parts: Vec<String> = self
            .constraints
            .iter()
            .map(|c| {
                let terms: Vec<String> = c
                    .functional
                    .linear
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(i, a)| format!("{a}*x{i}"))
                    .collect();
                let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                format!("{lhs} + {} {} 0", c.functional.constant, if c.strict { ">" } else { ">=" })
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrant() -> IntegralAffinePolytope {
        IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0), (vec![0, 1], 0)]).unwrap()
    }

    fn triangle() -> IntegralAffinePolytope {
        IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0), (vec![0, 1], 0), (vec![-1, -1], 1)]).unwrap()
    }

    #[test]
    fn empty_is_rejected() {
        let r = IntegralAffinePolytope::from_i64_constraints(1, &[(vec![1], -2), (vec![-1], 1)]);
        assert_eq!(r, Err(LatticeError::EmptyPolytope));
    }

    #[test]
    fn strata_counts() {
        assert_eq!(quadrant().strata().len(), 4);
        assert_eq!(IntegralAffinePolytope::whole_space(2).strata().len(), 1);
        assert_eq!(triangle().strata().len(), 7);
        let dims: Vec<usize> = triangle().strata().iter().map(|s| s.dimension).collect();
        assert_eq!(dims, vec![2, 1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn tangent_union_examples() {
        let pv = quadrant().strata_union_tangent(&IntegralVector::from_i64s(&[1, 1])).unwrap();
        assert!(pv.constraints().iter().all(|c| c.strict));
        assert!(!pv.contains(&RationalPoint::from_i64s(&[0, 1])));
        assert_eq!(quadrant().strata_union_tangent(&IntegralVector::zero(2)).unwrap(), quadrant());
        let half = IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0)]).unwrap();
        assert_eq!(half.strata_union_tangent(&IntegralVector::from_i64s(&[0, 1])).unwrap(), half);
    }

    #[test]
    fn rays() {
        let base = RationalPoint::from_i64s(&[1, 1]);
        assert!(quadrant().spans_infinite_ray(&base, &IntegralVector::from_i64s(&[1, 1])).unwrap());
        assert!(!quadrant().spans_infinite_ray(&base, &IntegralVector::from_i64s(&[-1, 0])).unwrap());
        let inside = RationalPoint::from_fractions(&[(1, 4), (1, 4)]);
        for v in [[1, 0], [0, 1], [-1, 0], [1, -1], [-1, -1]] {
            assert!(!triangle().spans_infinite_ray(&inside, &IntegralVector::from_i64s(&v)).unwrap());
        }
        assert!(matches!(
            quadrant().spans_infinite_ray(&RationalPoint::from_i64s(&[-1, 0]), &IntegralVector::from_i64s(&[1, 0])),
            Err(LatticeError::PointOutside(_))
        ));
    }

    #[test]
    fn quotient_examples() {
        let q = quadrant().quotient(&IntegralVector::from_i64s(&[1, 1])).unwrap();
        assert_eq!(q.ambient_dim(), 1);
        assert!(q.constraints().is_empty());

        let half = IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, 0], 0)]).unwrap();
        let q = half.quotient(&IntegralVector::from_i64s(&[0, 1])).unwrap();
        assert_eq!(q.ambient_dim(), 1);
        assert!(q.is_complete());
        assert_eq!(q.constraints().len(), 1);
        assert!(q.contains(&RationalPoint::from_i64s(&[0])));
        assert_eq!(q.affine_dimension(), 1);
        assert_eq!(q.strata().len(), 2);

        let r3 = IntegralAffinePolytope::whole_space(3).quotient(&IntegralVector::from_i64s(&[2, -3, 5])).unwrap();
        assert_eq!(r3.ambient_dim(), 2);

        assert_eq!(quadrant().quotient(&IntegralVector::zero(2)), Err(LatticeError::ZeroDirection));
        assert!(matches!(
            quadrant().quotient(&IntegralVector::from_i64s(&[-1, 0])),
            Err(LatticeError::NoInfiniteRay(_))
        ));
    }

    #[test]
    fn quotient_ignores_sign_of_direction() {
        let strip = IntegralAffinePolytope::from_i64_constraints(2, &[(vec![1, -1], 0), (vec![-1, 1], 3)]).unwrap();
        let a = strip.quotient(&IntegralVector::from_i64s(&[2, 2])).unwrap();
        let b = strip.quotient(&IntegralVector::from_i64s(&[-1, -1])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn affine_dimension_of_degenerate_polytope() {
        let seg = IntegralAffinePolytope::from_i64_constraints(2, &[(vec![0, 1], 0), (vec![0, -1], 0), (vec![1, 0], 0), (vec![-1, 0], 1)])
            .unwrap();
        assert_eq!(seg.affine_dimension(), 1);
        assert_eq!(seg.strata().len(), 3);
    }

    #[test]
    fn subset_and_intersection() {
        assert!(triangle().subset_of(&quadrant()));
        assert!(!quadrant().subset_of(&triangle()));
        let i = triangle().intersection(&quadrant()).unwrap();
        assert!(i.same_set(&triangle()));
    }
}
