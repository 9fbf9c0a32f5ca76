//! Fourier–Motzkin elimination over the rationals, with strict rows.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `coeffs · x + constant >= 0`, or `> 0` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
    pub strict: bool,
}

impl Row {
    pub fn holds_at(&self, x: &[BigRational]) -> bool {
        let v: BigRational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<BigRational>() + &self.constant;
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn trivially_false(&self) -> bool {
        self.is_trivial() && (self.constant.is_negative() || (self.strict && self.constant.is_zero()))
    }

    /// Scales so the first nonzero coefficient has absolute value 1.
    fn normalized(mut self) -> Row {
        let pivot = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .unwrap_or_else(|| if self.constant.is_zero() { BigRational::one() } else { self.constant.abs() });
        for c in &mut self.coeffs {
            *c /= &pivot;
        }
        self.constant /= &pivot;
        self
    }
}

fn tidy(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    for r in rows {
        if r.trivially_false() {
            return None;
        }
        if r.is_trivial() {
            continue;
        }
        out.push(r.normalized());
    }
    out.sort();
    out.dedup();
    // among rows with identical coefficients keep only the tightest
    let mut kept: Vec<Row> = Vec::with_capacity(out.len());
    for r in out {
        if let Some(last) = kept.last_mut() {
            if last.coeffs == r.coeffs {
                let tighter = r.constant < last.constant || (r.constant == last.constant && r.strict);
                if tighter {
                    *last = r;
                }
                continue;
            }
        }
        kept.push(r);
    }
    Some(kept)
}

/// Eliminates variable `k` (the column is kept, with zero coefficients).
/// Returns `None` when the system is detected infeasible.
pub fn eliminate(rows: &[Row], k: usize) -> Option<Vec<Row>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        if r.coeffs[k].is_positive() {
            pos.push(r);
        } else if r.coeffs[k].is_negative() {
            neg.push(r);
        } else {
            out.push(r.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let a = p.coeffs[k].clone();
            let b = -n.coeffs[k].clone();
            let coeffs: Vec<BigRational> =
                p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &b + y * &a).collect();
            out.push(Row {
                coeffs,
                constant: &p.constant * &b + &n.constant * &a,
                strict: p.strict || n.strict,
            });
        }
    }
    tidy(out)
}

/// A point satisfying every row, or `None` if the system is infeasible.
pub fn feasible_point(dim: usize, rows: &[Row]) -> Option<Vec<BigRational>> {
    // stages[j] involves only x_0..x_{j-1}
    let mut stages: Vec<Vec<Row>> = vec![Vec::new(); dim + 1];
    stages[dim] = tidy(rows.to_vec())?;
    for j in (0..dim).rev() {
        stages[j] = eliminate(&stages[j + 1], j)?;
    }
    let mut x: Vec<BigRational> = vec![BigRational::zero(); dim];
    for j in 0..dim {
        let mut lower: Option<(BigRational, bool)> = None;
        let mut upper: Option<(BigRational, bool)> = None;
        for r in &stages[j + 1] {
            let a = &r.coeffs[j];
            if a.is_zero() {
                continue;
            }
            let rest: BigRational =
                r.coeffs[..j].iter().zip(&x[..j]).map(|(c, v)| c * v).sum::<BigRational>() + &r.constant;
            let bound = -rest / a;
            if a.is_positive() {
                let better = lower.as_ref().is_none_or(|(l, s)| bound > *l || (bound == *l && r.strict && !s));
                if better {
                    lower = Some((bound, r.strict));
                }
            } else {
                let better = upper.as_ref().is_none_or(|(u, s)| bound < *u || (bound == *u && r.strict && !s));
                if better {
                    upper = Some((bound, r.strict));
                }
            }
        }
        let two = BigRational::from_integer(2.into());
        x[j] = match (lower, upper) {
            (None, None) => BigRational::zero(),
            (Some((l, _)), None) => l.floor() + BigRational::one(),
            (None, Some((u, _))) => u.ceil() - BigRational::one(),
            (Some((l, ls)), Some((u, us))) => {
                if l == u {
                    debug_assert!(!ls && !us);
                    l
                } else {
                    (l + u) / two
                }
            }
        };
    }
    debug_assert!(rows.iter().all(|r| r.holds_at(&x)));
    Some(x)
}

/// Projects the system onto the variables not listed in `drop` (columns are kept, zeroed).
pub fn project(rows: &[Row], drop: &[usize]) -> Option<Vec<Row>> {
    let mut cur = tidy(rows.to_vec())?;
    for &k in drop {
        cur = eliminate(&cur, k)?;
    }
    Some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn row(c: &[i64], k: i64, strict: bool) -> Row {
        Row { coeffs: c.iter().map(|&x| q(x)).collect(), constant: q(k), strict }
    }

    #[test]
    fn open_interval_is_feasible_but_degenerate_strict_one_is_not() {
        // 0 < x < 1
        let p = feasible_point(1, &[row(&[1], 0, true), row(&[-1], 1, true)]).unwrap();
        assert!(p[0] > q(0) && p[0] < q(1));
        // x > 0 and x <= 0
        assert!(feasible_point(1, &[row(&[1], 0, true), row(&[-1], 0, false)]).is_none());
        // x >= 0 and x <= 0
        assert_eq!(feasible_point(1, &[row(&[1], 0, false), row(&[-1], 0, false)]), Some(vec![q(0)]));
    }

    #[test]
    fn triangle_witness() {
        let rows = [row(&[1, 0], 0, false), row(&[0, 1], 0, false), row(&[-1, -1], 1, true)];
        let p = feasible_point(2, &rows).unwrap();
        assert!(rows.iter().all(|r| r.holds_at(&p)));
    }
}
