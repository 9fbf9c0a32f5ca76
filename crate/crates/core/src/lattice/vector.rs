use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A vector in the integer lattice `Z^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralVector(Vec<BigInt>);

impl IntegralVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntegralVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntegralVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        IntegralVector(vec![BigInt::zero(); dim])
    }

    /// The `i`-th standard basis vector of `Z^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::from(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the absolute values of the entries; zero exactly for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }

    /// `self / content(self)`, or `None` for the zero vector.
    pub fn primitive(&self) -> Option<IntegralVector> {
        let c = self.content();
        if c.is_zero() {
            return None;
        }
        Some(IntegralVector(self.0.iter().map(|x| x / &c).collect()))
    }

    /// Representative of `±self` whose first nonzero entry is positive.
    pub fn sign_normalized(&self) -> IntegralVector {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => -self,
            _ => self.clone(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntegralVector {
        IntegralVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn dot(&self, other: &IntegralVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rational(&self, x: &[BigRational]) -> BigRational {
        debug_assert_eq!(self.dim(), x.len());
        self.0
            .iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (a, b)| acc + b * BigRational::from_integer(a.clone()))
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|x| BigRational::from_integer(x.clone())).collect()
    }

    /// Largest absolute value of an entry.
    pub fn max_abs_entry(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for IntegralVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Neg for &IntegralVector {
    type Output = IntegralVector;
    fn neg(self) -> IntegralVector {
        IntegralVector(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for IntegralVector {
    type Output = IntegralVector;
    fn neg(self) -> IntegralVector {
        -&self
    }
}

impl Add for &IntegralVector {
    type Output = IntegralVector;
    fn add(self, rhs: &IntegralVector) -> IntegralVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntegralVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntegralVector {
    type Output = IntegralVector;
    fn sub(self, rhs: &IntegralVector) -> IntegralVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntegralVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// A point of `Q^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(Vec<BigRational>);

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalPoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        RationalPoint(vec![BigRational::zero(); dim])
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// Builds a point from `(numerator, denominator)` pairs.
    pub fn from_fractions(coords: &[(i64, i64)]) -> Self {
        RationalPoint(
            coords
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    /// `self + t * v`.
    pub fn translate(&self, t: &BigRational, v: &IntegralVector) -> RationalPoint {
        debug_assert_eq!(self.dim(), v.dim());
        RationalPoint(
            self.0
                .iter()
                .zip(v.entries())
                .map(|(x, d)| x + t * BigRational::from_integer(d.clone()))
                .collect(),
        )
    }

    pub fn displacement_to(&self, other: &RationalPoint) -> Vec<BigRational> {
        self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect()
    }

    pub fn midpoint(&self, other: &RationalPoint) -> RationalPoint {
        let two = BigRational::from_integer(2.into());
        RationalPoint(self.0.iter().zip(&other.0).map(|(a, b)| (a + b) / &two).collect())
    }

    /// Sup-norm distance.
    pub fn sup_distance(&self, other: &RationalPoint) -> BigRational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Solves `base + t * dir = target` for `t`, if `target - base` is a multiple of `dir`.
/// Returns `None` when `dir` is zero or the displacement is not parallel to it.
pub fn parameter_along(base: &RationalPoint, dir: &IntegralVector, target: &RationalPoint) -> Option<BigRational> {
    let disp = base.displacement_to(target);
    let pivot = dir.entries().iter().position(|d| !d.is_zero())?;
    let t = &disp[pivot] / BigRational::from_integer(dir.entries()[pivot].clone());
    let consistent = disp
        .iter()
        .zip(dir.entries())
        .all(|(x, d)| *x == &t * BigRational::from_integer(d.clone()));
    consistent.then_some(t)
}
