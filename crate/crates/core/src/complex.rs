//! Embedded polyhedral complexes, dual complexes of normal-crossing degenerations, tangent cones.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    Constraint, IntegralAffineFunctional, IntegralAffinePolytope, IntegralVector, LatticeError, RationalPoint,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("duplicate face id {0}")]
    DuplicateFace(String),
    #[error("unknown face id {0}")]
    UnknownFace(String),
    #[error("face {face} lives in dimension {found}, complex in {expected}")]
    DimensionMismatch { face: String, expected: usize, found: usize },
    #[error("{smaller} is declared a face of {larger} but is not one")]
    NotAFace { smaller: String, larger: String },
    #[error("faces {a} and {b} meet outside a common face")]
    BadIntersection { a: String, b: String },
    #[error("intersection {0:?} names an unknown component")]
    UnknownComponent(Vec<String>),
    #[error("intersection {missing:?} is implied by {of:?} but not declared")]
    NotSubsetClosed { missing: Vec<String>, of: Vec<String> },
    #[error("face {0} has strict constraints")]
    OpenFace(String),
    #[error("point {0} lies in no face")]
    OutsideComplex(RationalPoint),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    pub polytope: IntegralAffinePolytope,
    /// Real dimension of the exploded chart over this face.
    pub chart_real_dim: usize,
}

/// A complex of closed integral-affine polytopes in a common `R^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralComplex {
    ambient_dim: usize,
    faces: Vec<Face>,
    /// `below[j]`: indices of faces of face `j`, itself excluded, transitively closed.
    below: Vec<BTreeSet<usize>>,
    dims: Vec<usize>,
}

/// Where a point sits: its minimal face and the constraints of that face active there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub face: String,
    pub active: Vec<usize>,
    pub dimension: usize,
}

impl PolyhedralComplex {
    /// Validates face-of pairs `(smaller, larger)` and the intersection condition.
    /// `chart_real_dim` is left as given on each face.
    pub fn new(ambient_dim: usize, faces: Vec<Face>, incidence: &[(String, String)]) -> Result<Self, ComplexError> {
        let mut index = BTreeMap::new();
        for (i, f) in faces.iter().enumerate() {
            if index.insert(f.id.clone(), i).is_some() {
                return Err(ComplexError::DuplicateFace(f.id.clone()));
            }
            if f.polytope.ambient_dim() != ambient_dim {
                return Err(ComplexError::DimensionMismatch {
                    face: f.id.clone(),
                    expected: ambient_dim,
                    found: f.polytope.ambient_dim(),
                });
            }
            if !f.polytope.is_complete() {
                return Err(ComplexError::OpenFace(f.id.clone()));
            }
        }
        let lookup = |id: &String| index.get(id).copied().ok_or_else(|| ComplexError::UnknownFace(id.clone()));
        let mut below = vec![BTreeSet::new(); faces.len()];
        for (s, l) in incidence {
            let (si, li) = (lookup(s)?, lookup(l)?);
            if si == li || !is_face_of(&faces[si].polytope, &faces[li].polytope) {
                return Err(ComplexError::NotAFace { smaller: s.clone(), larger: l.clone() });
            }
            below[li].insert(si);
        }
        // transitive closure
        loop {
            let mut grew = false;
            for j in 0..faces.len() {
                let extra: BTreeSet<usize> = below[j].iter().flat_map(|&k| below[k].iter().copied()).collect();
                for k in extra {
                    grew |= below[j].insert(k);
                }
            }
            if !grew {
                break;
            }
        }
        let dims = faces.iter().map(|f| f.polytope.affine_dimension()).collect();
        let c = PolyhedralComplex { ambient_dim, faces, below, dims };
        c.check_intersections()?;
        Ok(c)
    }

    /// Every face gets `chart_real_dim = 2 · (largest face dimension)`.
    pub fn with_uniform_chart(
        ambient_dim: usize,
        faces: Vec<(String, IntegralAffinePolytope)>,
        incidence: &[(String, String)],
    ) -> Result<Self, ComplexError> {
        let top = faces.iter().map(|(_, p)| p.affine_dimension()).max().unwrap_or(0);
        let faces = faces
            .into_iter()
            .map(|(id, polytope)| Face { id, polytope, chart_real_dim: 2 * top })
            .collect();
        Self::new(ambient_dim, faces, incidence)
    }

    fn check_intersections(&self) -> Result<(), ComplexError> {
        for a in 0..self.faces.len() {
            for b in a + 1..self.faces.len() {
                let Some(meet) = self.faces[a].polytope.intersection(&self.faces[b].polytope) else {
                    continue;
                };
                let common = self.closed_below(a).intersection(&self.closed_below(b)).copied().collect::<Vec<_>>();
                if !common.iter().any(|&h| meet.same_set(&self.faces[h].polytope)) {
                    return Err(ComplexError::BadIntersection {
                        a: self.faces[a].id.clone(),
                        b: self.faces[b].id.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn closed_below(&self, i: usize) -> BTreeSet<usize> {
        let mut s = self.below[i].clone();
        s.insert(i);
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Affine dimension of face `id`.
    pub fn face_dimension(&self, id: &str) -> Result<usize, ComplexError> {
        Ok(self.dims[self.face_index(id)?])
    }

    pub fn face(&self, id: &str) -> Result<&Face, ComplexError> {
        self.faces.iter().find(|f| f.id == id).ok_or_else(|| ComplexError::UnknownFace(id.to_string()))
    }

    fn face_index(&self, id: &str) -> Result<usize, ComplexError> {
        self.faces.iter().position(|f| f.id == id).ok_or_else(|| ComplexError::UnknownFace(id.to_string()))
    }

    /// Ids of the (proper) faces of `id`.
    pub fn faces_of(&self, id: &str) -> Result<Vec<&str>, ComplexError> {
        let i = self.face_index(id)?;
        Ok(self.below[i].iter().map(|&k| self.faces[k].id.as_str()).collect())
    }

    /// Declared face-of pairs `(smaller, larger)`, transitively closed.
    pub fn incidence(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (j, ks) in self.below.iter().enumerate() {
            for &k in ks {
                out.push((self.faces[k].id.clone(), self.faces[j].id.clone()));
            }
        }
        out
    }

    /// Faces not contained in any other face.
    pub fn is_maximal(&self, id: &str) -> Result<bool, ComplexError> {
        let i = self.face_index(id)?;
        Ok(!self.below.iter().any(|s| s.contains(&i)))
    }

    pub fn faces_containing(&self, p: &RationalPoint) -> Vec<&Face> {
        self.faces.iter().filter(|f| f.polytope.contains(p)).collect()
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.faces.iter().any(|f| f.polytope.contains(p))
    }

    /// The minimal face containing `p`; `p` is in its relative interior.
    pub fn stratum_containing(&self, p: &RationalPoint) -> Result<Location, ComplexError> {
        let i = (0..self.faces.len())
            .filter(|&i| self.faces[i].polytope.contains(p))
            .min_by_key(|&i| (self.dims[i], &self.faces[i].id))
            .ok_or_else(|| ComplexError::OutsideComplex(p.clone()))?;
        let f = &self.faces[i];
        let s = f.polytope.stratum_of(p).expect("face contains p");
        Ok(Location { face: f.id.clone(), active: s.active, dimension: self.dims[i] })
    }

    /// One cone per face containing `p`, in coordinates centred at `p`.
    pub fn tangent_cone(&self, p: &RationalPoint) -> Result<Fan, ComplexError> {
        let cones: Vec<(String, IntegralAffinePolytope)> =
            self.faces_containing(p).into_iter().map(|f| (f.id.clone(), cone_of_face_at(&f.polytope, p))).collect();
        if cones.is_empty() {
            return Err(ComplexError::OutsideComplex(p.clone()));
        }
        Ok(Fan { ambient_dim: self.ambient_dim, cones })
    }

    /// The face `id` together with all of its faces.
    pub fn closure_of_stratum(&self, id: &str) -> Result<PolyhedralComplex, ComplexError> {
        let i = self.face_index(id)?;
        let keep = self.closed_below(i);
        let faces: Vec<Face> = keep.iter().map(|&k| self.faces[k].clone()).collect();
        let incidence: Vec<(String, String)> = keep
            .iter()
            .flat_map(|&j| self.below[j].iter().map(move |&k| (k, j)))
            .filter(|(k, _)| keep.contains(k))
            .map(|(k, j)| (self.faces[k].id.clone(), self.faces[j].id.clone()))
            .collect();
        PolyhedralComplex::new(self.ambient_dim, faces, &incidence)
    }

    /// Whether the closed segment `[a, b]` lies in the complex.
    pub fn contains_segment(&self, a: &RationalPoint, b: &RationalPoint) -> bool {
        let d = a.displacement_to(b);
        let mut ts: BTreeSet<BigRational> = [BigRational::zero(), BigRational::one()].into();
        for f in &self.faces {
            for c in f.polytope.constraints() {
                let slope = c.functional.linear.dot_rational(&d);
                if slope.is_zero() {
                    continue;
                }
                let t = -c.functional.eval(a) / slope;
                if t.is_positive() && t < BigRational::one() {
                    ts.insert(t);
                }
            }
        }
        let at = |t: &BigRational| RationalPoint::new(a.coords().iter().zip(&d).map(|(x, y)| x + t * y).collect());
        let ts: Vec<BigRational> = ts.into_iter().collect();
        let two = BigRational::from_integer(2.into());
        ts.iter().all(|t| self.contains(&at(t)))
            && ts.windows(2).all(|w| self.contains(&at(&((&w[0] + &w[1]) / &two))))
    }

    /// Parameter beyond which the ray `base + t v` crosses no face boundary.
    pub fn ray_settling_parameter(&self, base: &RationalPoint, v: &IntegralVector) -> BigRational {
        let mut last = BigRational::zero();
        for f in &self.faces {
            for c in f.polytope.constraints() {
                let slope = BigRational::from_integer(c.functional.linear.dot(v));
                if slope.is_zero() {
                    continue;
                }
                let t = -c.functional.eval(base) / slope;
                if t > last {
                    last = t;
                }
            }
        }
        last
    }

    /// Whether `base + t v` lies in the complex for every `t >= 0`.
    pub fn contains_ray(&self, base: &RationalPoint, v: &IntegralVector) -> bool {
        if v.is_zero() {
            return self.contains(base);
        }
        let far_t = self.ray_settling_parameter(base, v) + BigRational::one();
        let far = base.translate(&far_t, v);
        self.contains_segment(base, &far)
            && self.faces.iter().any(|f| f.polytope.contains(&far) && f.polytope.recedes_along(v))
    }
}

/// `{x : α_i(x) >= 0 for the constraints active at p}`, constants zeroed.
pub fn cone_of_face_at(p: &IntegralAffinePolytope, at: &RationalPoint) -> IntegralAffinePolytope {
    let constraints = p
        .active_at(at)
        .into_iter()
        .map(|i| {
            let c = &p.constraints()[i];
            Constraint { functional: IntegralAffineFunctional::new(c.functional.linear.clone(), BigRational::zero()), strict: c.strict }
        })
        .collect();
    IntegralAffinePolytope::new(p.ambient_dim(), constraints).expect("a cone contains its apex")
}

/// `smaller` is the face of `larger` cut out by the constraints of `larger` vanishing on it.
fn is_face_of(smaller: &IntegralAffinePolytope, larger: &IntegralAffinePolytope) -> bool {
    if !smaller.subset_of(larger) {
        return false;
    }
    let Some(w) = smaller.witness() else { return false };
    // anything vanishing on `smaller` vanishes at w
    let vanishing: Vec<usize> = larger
        .active_at(&w)
        .into_iter()
        .filter(|&i| {
            let f = &larger.constraints()[i].functional;
            let neg = Constraint::closed(IntegralAffineFunctional::new(-&f.linear, -f.constant.clone()));
            IntegralAffinePolytope::new(smaller.ambient_dim(), vec![neg]).is_ok_and(|h| smaller.subset_of(&h))
        })
        .collect();
    larger.restrict_to_equalities(&vanishing).is_some_and(|f| f.same_set(smaller))
}

/// Cones with apex at the origin, each tagged with the face it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub ambient_dim: usize,
    pub cones: Vec<(String, IntegralAffinePolytope)>,
}

impl Fan {
    /// Some cone contains the direction `v`.
    pub fn contains_direction(&self, v: &IntegralVector) -> bool {
        let p = RationalPoint::new(v.to_rational());
        self.cones.iter().any(|(_, c)| c.contains(&p))
    }

    /// Dimension of the largest cone.
    pub fn dimension(&self) -> usize {
        self.cones.iter().map(|(_, c)| c.affine_dimension()).max().unwrap_or(0)
    }
}

/// Components of the singular fibre and the intersections declared nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCDegenerationDescription {
    pub components: Vec<String>,
    pub intersections: Vec<Vec<String>>,
}

impl NCDegenerationDescription {
    pub fn validate(&self) -> Result<BTreeSet<BTreeSet<usize>>, ComplexError> {
        let pos: BTreeMap<&str, usize> = self.components.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        if pos.len() != self.components.len() {
            let dup = self.components.iter().find(|c| self.components.iter().filter(|d| d == c).count() > 1);
            return Err(ComplexError::DuplicateFace(dup.cloned().unwrap_or_default()));
        }
        let mut simplices: BTreeSet<BTreeSet<usize>> = (0..self.components.len()).map(|i| [i].into()).collect();
        for s in &self.intersections {
            let idx: Option<BTreeSet<usize>> = s.iter().map(|c| pos.get(c.as_str()).copied()).collect();
            let idx = idx.ok_or_else(|| ComplexError::UnknownComponent(s.clone()))?;
            simplices.insert(idx);
        }
        for s in &simplices {
            for &drop in s {
                let mut t = s.clone();
                t.remove(&drop);
                if !t.is_empty() && !simplices.contains(&t) {
                    let name = |set: &BTreeSet<usize>| set.iter().map(|&i| self.components[i].clone()).collect();
                    return Err(ComplexError::NotSubsetClosed { missing: name(&t), of: name(s) });
                }
            }
        }
        Ok(simplices)
    }
}

/// One standard simplex per declared intersection, in `R^{#components}`.
pub fn dual_complex(d: &NCDegenerationDescription) -> Result<PolyhedralComplex, ComplexError> {
    let simplices = d.validate()?;
    let k = d.components.len();
    let name = |s: &BTreeSet<usize>| s.iter().map(|&i| d.components[i].as_str()).collect::<Vec<_>>().join("&");
    let faces: Vec<(String, IntegralAffinePolytope)> = simplices
        .iter()
        .map(|s| {
            let mut rows: Vec<(Vec<i64>, i64)> = Vec::new();
            for i in 0..k {
                let e: Vec<i64> = (0..k).map(|j| i64::from(i == j)).collect();
                if !s.contains(&i) {
                    rows.push((e.iter().map(|x| -x).collect(), 0));
                }
                rows.push((e, 0));
            }
            rows.push((vec![-1; k], 1));
            rows.push((vec![1; k], -1));
            (name(s), IntegralAffinePolytope::from_i64_constraints(k, &rows).expect("standard simplex is nonempty"))
        })
        .collect();
    let incidence: Vec<(String, String)> = simplices
        .iter()
        .flat_map(|a| simplices.iter().filter(move |b| a != *b && a.is_subset(b)).map(move |b| (name(a), name(b))))
        .collect();
    let top = simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0);
    let faces = faces.into_iter().map(|(id, polytope)| Face { id, polytope, chart_real_dim: 2 * top }).collect();
    PolyhedralComplex::new(k, faces, &incidence)
}
