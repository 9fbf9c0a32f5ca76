//! Rigid genus-0 tropical curves in a planar complex through point constraints.
//!
//! Combinatorial types are trivalent trees whose leaves are the prescribed unbounded
//! ends; each point constraint sits on an edge. Positions are solved by
//! propagating ray intersections outward from the points.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::PolyhedralComplex;
use crate::curve::{is_isomorphic_combinatorially, End, InternalEdge, TropicalCurve, Vertex};
use crate::lattice::{IntegralVector, RationalPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("enumeration needs a 2-dimensional complex, got dimension {0}")]
    NotPlanar(usize),
    #[error("point {label} is not in face {face}")]
    PointOutsideFace { label: String, face: String },
    #[error("unknown face {0}")]
    UnknownFace(String),
    #[error("unbounded ends sum to {0}, not zero")]
    Unbalanced(IntegralVector),
    #[error("end direction {0} exceeds the degree bound")]
    EndExceedsBound(IntegralVector),
    #[error("end direction {0} is not planar or is zero")]
    BadEnd(IntegralVector),
    #[error("search needs about {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("end distribution says {expected} points over {face}, constraints place {found}")]
    Distribution { face: String, expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConstraint {
    pub label: Option<String>,
    pub face: String,
    pub position: RationalPoint,
    /// Corner component the point clusters around, if any.
    pub cluster: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet {
    pub points: Vec<PointConstraint>,
    /// Bound on the absolute value of every derivative entry.
    pub degree_bound: u32,
    /// Expected number of point constraints per cluster.
    pub end_distribution: BTreeMap<String, usize>,
    /// Directions of the unbounded ends, with repetition.
    pub unbounded_ends: Vec<IntegralVector>,
    /// Sup-norm radius within which vertices are absorbed into their cluster.
    pub cluster_radius: BigRational,
}

impl ConstraintSet {
    /// Point labels, with wildcards numbered `q1, q2, ...` by position in the list.
    pub fn labels(&self) -> Vec<String> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| p.label.clone().unwrap_or_else(|| format!("q{}", i + 1)))
            .collect()
    }

    pub fn validate(&self, c: &PolyhedralComplex) -> Result<(), EnumerateError> {
        if c.ambient_dim() != 2 {
            return Err(EnumerateError::NotPlanar(c.ambient_dim()));
        }
        for (p, label) in self.points.iter().zip(self.labels()) {
            let f = c.face(&p.face).map_err(|_| EnumerateError::UnknownFace(p.face.clone()))?;
            if !f.polytope.contains(&p.position) {
                return Err(EnumerateError::PointOutsideFace { label, face: p.face.clone() });
            }
        }
        let mut found: BTreeMap<&str, usize> = BTreeMap::new();
        for p in &self.points {
            if let Some(cl) = &p.cluster {
                c.face(cl).map_err(|_| EnumerateError::UnknownFace(cl.clone()))?;
                *found.entry(cl.as_str()).or_default() += 1;
            }
        }
        for (face, &expected) in &self.end_distribution {
            let got = found.get(face.as_str()).copied().unwrap_or(0);
            if got != expected {
                return Err(EnumerateError::Distribution { face: face.clone(), expected, found: got });
            }
        }
        let bound = BigInt::from(self.degree_bound);
        let mut sum = IntegralVector::zero(2);
        for d in &self.unbounded_ends {
            if d.dim() != 2 || d.is_zero() {
                return Err(EnumerateError::BadEnd(d.clone()));
            }
            if d.max_abs_entry() > bound {
                return Err(EnumerateError::EndExceedsBound(d.clone()));
            }
            sum = &sum + d;
        }
        if !sum.is_zero() {
            return Err(EnumerateError::Unbalanced(sum));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidCurveRecord {
    /// Canonical encoding of the marked combinatorial type.
    pub code: String,
    pub curve: TropicalCurve,
    pub multiplicity: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// Fewer point constraints than the dimension of the family of curves.
    PositiveDimensional { free_parameters: usize },
    /// More point constraints than the family can absorb.
    Overdetermined { excess: usize },
    /// A point landed exactly on a vertex of a candidate curve.
    NonGeneric { code: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::PositiveDimensional { free_parameters } => {
                write!(f, "constraints leave a {free_parameters}-parameter family; no rigid curves")
            }
            Warning::Overdetermined { excess } => write!(f, "{excess} more constraints than parameters"),
            Warning::NonGeneric { code } => write!(f, "non-generic constraints for type {code}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Enumeration {
    pub records: Vec<RigidCurveRecord>,
    pub warnings: Vec<Warning>,
    pub types_considered: usize,
    pub types_admissible: usize,
    pub search_nodes: u64,
}

impl Enumeration {
    pub fn total_multiplicity(&self) -> BigInt {
        self.records.iter().map(|r| &r.multiplicity).sum()
    }
}

pub const DEFAULT_BUDGET: u64 = 200_000_000;

type V2 = [i64; 2];

fn cross(a: V2, b: V2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn add(a: V2, b: V2) -> V2 {
    [a[0] + b[0], a[1] + b[1]]
}

/// A tree on `nodes` nodes; nodes `0..leaves` are the leaves.
#[derive(Clone, Debug)]
struct Shape {
    leaves: usize,
    nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl Shape {
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut a = vec![Vec::new(); self.nodes];
        for (i, &(x, y)) in self.edges.iter().enumerate() {
            a[x].push((y, i));
            a[y].push((x, i));
        }
        a
    }
}

/// Canonical string of a tree whose leaves carry tokens, rooted at its centre.
fn canonical(adj: &[Vec<(usize, usize)>], token: &dyn Fn(usize) -> Option<String>) -> String {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &(w, _) in &adj[v] {
                if degree[w] > 1 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
            degree[v] = 0;
        }
        layer = next;
    }
    fn enc(adj: &[Vec<(usize, usize)>], token: &dyn Fn(usize) -> Option<String>, v: usize, parent: usize) -> String {
        if let Some(t) = token(v) {
            return t;
        }
        let mut parts: Vec<String> = adj[v].iter().filter(|(w, _)| *w != parent).map(|&(w, _)| enc(adj, token, w, v)).collect();
        parts.sort();
        format!("({})", parts.join(","))
    }
    match layer.as_slice() {
        [c] => enc(adj, token, *c, usize::MAX),
        [a, b] => {
            let mut pair = [enc(adj, token, *a, *b), enc(adj, token, *b, *a)];
            pair.sort();
            format!("[{}|{}]", pair[0], pair[1])
        }
        _ => String::new(),
    }
}

/// Trivalent trees with leaf types `types` (sorted), up to type-preserving isomorphism.
fn trivalent_types(types: &[usize]) -> Vec<(Shape, String)> {
    let n = types.len();
    let tok = |t: usize| format!("L{t}");
    if n < 3 {
        return Vec::new();
    }
    let start = Shape { leaves: 3, nodes: 4, edges: vec![(3, 0), (3, 1), (3, 2)] };
    let mut stage: Vec<Shape> = vec![start];
    // leaves are renumbered so that 0..k are leaves at each stage
    for k in 3..n {
        let mut seen: BTreeMap<String, Shape> = BTreeMap::new();
        for s in &stage {
            for i in 0..s.edges.len() {
                // shift internal nodes up by one to make room for leaf k
                let shift = |x: usize| if x >= k { x + 1 } else { x };
                let mut edges: Vec<(usize, usize)> = s.edges.iter().map(|&(a, b)| (shift(a), shift(b))).collect();
                let (a, b) = edges.remove(i);
                let mid = s.nodes + 1;
                edges.extend([(a, mid), (mid, b), (mid, k)]);
                let t = Shape { leaves: k + 1, nodes: s.nodes + 2, edges };
                let adj = t.adjacency();
                let code = canonical(&adj, &|v| (v <= k).then(|| tok(types[v])));
                seen.entry(code).or_insert(t);
            }
        }
        stage = seen.into_values().collect();
    }
    let mut out: Vec<(Shape, String)> = stage
        .into_iter()
        .map(|s| {
            let adj = s.adjacency();
            let code = canonical(&adj, &|v| (v < n).then(|| tok(types[v])));
            (s, code)
        })
        .collect();
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

/// A type with its edge directions, checked against the bound.
struct Analysed {
    shape: Shape,
    adj: Vec<Vec<(usize, usize)>>,
    /// `dir[e]`: direction travelling from `edges[e].0` to `edges[e].1`.
    dir: Vec<V2>,
    multiplicity: i64,
}

impl Analysed {
    fn toward(&self, e: usize, to: usize) -> V2 {
        let d = self.dir[e];
        if self.shape.edges[e].1 == to {
            d
        } else {
            [-d[0], -d[1]]
        }
    }
}

fn analyse(shape: Shape, ends: &[V2], bound: i64) -> Option<Analysed> {
    let adj = shape.adjacency();
    // flux beyond `to` when leaving `from`
    fn beyond(adj: &[Vec<(usize, usize)>], ends: &[V2], leaves: usize, from: usize, to: usize) -> V2 {
        if to < leaves {
            return ends[to];
        }
        adj[to].iter().filter(|(w, _)| *w != from).fold([0, 0], |acc, &(w, _)| add(acc, beyond(adj, ends, leaves, to, w)))
    }
    let dir: Vec<V2> = shape.edges.iter().map(|&(a, b)| beyond(&adj, ends, shape.leaves, a, b)).collect();
    if dir.iter().any(|d| d[0].abs() > bound || d[1].abs() > bound) {
        return None;
    }
    let mut multiplicity = 1i64;
    for v in shape.leaves..shape.nodes {
        let out: Vec<V2> = adj[v]
            .iter()
            .map(|&(_, e)| if shape.edges[e].0 == v { dir[e] } else { [-dir[e][0], -dir[e][1]] })
            .collect();
        let m = cross(out[0], out[1]).abs();
        if m == 0 {
            return None;
        }
        multiplicity *= m;
    }
    Some(Analysed { shape, adj, dir, multiplicity })
}

#[derive(Clone, Copy, Debug)]
enum Input {
    /// The point on cut edge `slot`; the vertex lies along `dir` from it.
    Slot { slot: usize, dir: V2 },
    Vertex { from: usize, dir: V2 },
}

/// Propagation schedule for one choice of marked edges.
struct Plan {
    /// Slot order: the marked edge filled at each depth.
    slots: Vec<usize>,
    inputs: Vec<[Input; 2]>,
    /// Vertices that become solvable once slot `s` is filled, in order.
    ready: Vec<Vec<usize>>,
}

fn plan(a: &Analysed, marked: &[usize]) -> Option<Plan> {
    let s = &a.shape;
    let is_marked: Vec<bool> = (0..s.edges.len()).map(|e| marked.contains(&e)).collect();
    // every component of the tree minus the marked edges holds exactly one leaf
    let mut comp = vec![usize::MAX; s.nodes];
    for l in 0..s.leaves {
        let mut stack = vec![l];
        comp[l] = l;
        while let Some(x) = stack.pop() {
            for &(y, e) in &a.adj[x] {
                if is_marked[e] || comp[y] != usize::MAX {
                    if !is_marked[e] && comp[y] != l {
                        return None;
                    }
                    continue;
                }
                comp[y] = l;
                stack.push(y);
            }
        }
    }
    if comp.contains(&usize::MAX) {
        return None;
    }
    // orient each component toward its leaf
    let mut next_hop = vec![usize::MAX; s.nodes];
    for l in 0..s.leaves {
        let mut stack = vec![l];
        while let Some(x) = stack.pop() {
            for &(y, e) in &a.adj[x] {
                if is_marked[e] || y == l || next_hop[y] != usize::MAX || comp[y] != l || y < s.leaves {
                    continue;
                }
                next_hop[y] = x;
                stack.push(y);
            }
        }
    }
    let mut inputs: Vec<[Input; 2]> = vec![[Input::Vertex { from: 0, dir: [0, 0] }; 2]; s.nodes];
    for v in s.leaves..s.nodes {
        let mut found = Vec::with_capacity(2);
        for &(y, e) in &a.adj[v] {
            if is_marked[e] {
                found.push(Input::Slot { slot: e, dir: a.toward(e, v) });
            } else if next_hop[v] != y {
                found.push(Input::Vertex { from: y, dir: a.toward(e, v) });
            }
        }
        inputs[v] = found.try_into().ok()?;
    }
    // slots ordered so each vertex's marked inputs are consecutive, in dependency order
    let mut slots: Vec<usize> = Vec::with_capacity(marked.len());
    let mut order: Vec<usize> = Vec::new();
    let mut done = vec![false; s.nodes];
    while order.len() < s.nodes - s.leaves {
        let before = order.len();
        for v in s.leaves..s.nodes {
            if done[v] {
                continue;
            }
            let ok = inputs[v].iter().all(|i| match i {
                Input::Slot { .. } => true,
                Input::Vertex { from, .. } => done[*from],
            });
            if ok {
                for i in &inputs[v] {
                    if let Input::Slot { slot, .. } = i {
                        if !slots.contains(slot) {
                            slots.push(*slot);
                        }
                    }
                }
                done[v] = true;
                order.push(v);
            }
        }
        if order.len() == before {
            return None;
        }
    }
    for &e in marked {
        if !slots.contains(&e) {
            slots.push(e);
        }
    }
    let depth_of: BTreeMap<usize, usize> = slots.iter().enumerate().map(|(d, &e)| (e, d)).collect();
    let mut ready_at = vec![0usize; s.nodes];
    let mut ready = vec![Vec::new(); slots.len()];
    for &v in &order {
        let r = inputs[v]
            .iter()
            .map(|i| match i {
                Input::Slot { slot, .. } => depth_of[slot],
                Input::Vertex { from, .. } => ready_at[*from],
            })
            .max()
            .unwrap_or(0);
        ready_at[v] = r;
        ready[r].push(v);
    }
    // remap slot inputs from edge ids to depths
    for inp in inputs.iter_mut().skip(s.leaves) {
        for i in inp.iter_mut() {
            if let Input::Slot { slot, dir } = *i {
                *i = Input::Slot { slot: depth_of[&slot], dir };
            }
        }
    }
    Some(Plan { slots, inputs, ready })
}

enum Step<T> {
    Ok(T),
    Reject,
    /// A vertex lands exactly on a constraint point or a neighbouring vertex.
    Boundary(T),
}

type F2 = [f64; 2];
type B2 = [BigRational; 2];

/// Relative slack of the floating filter; anything within it is decided exactly.
const SLACK: f64 = 1e-9;

/// `p + t d = q + s e` with `t, s > 0`, in floating point. The flag marks a near tie.
fn meet_float(p: F2, d: V2, q: F2, e: V2) -> (Step<F2>, bool) {
    let det = cross(d, e);
    if det == 0 {
        return (Step::Reject, false);
    }
    let (df, ef) = ([d[0] as f64, d[1] as f64], [e[0] as f64, e[1] as f64]);
    let r = [q[0] - p[0], q[1] - p[1]];
    let sign = det.signum() as f64;
    let t_num = (r[0] * ef[1] - r[1] * ef[0]) * sign;
    let s_num = (r[0] * df[1] - r[1] * df[0]) * sign;
    let scale = (1.0 + r[0].abs().max(r[1].abs())) * (1.0 + df[0].abs().max(df[1].abs()) + ef[0].abs().max(ef[1].abs()));
    let tol = SLACK * scale * (1.0 + p[0].abs().max(p[1].abs()) + q[0].abs().max(q[1].abs()));
    if t_num < -tol || s_num < -tol {
        return (Step::Reject, false);
    }
    let t = t_num / (det as f64).abs();
    (Step::Ok([p[0] + t * df[0], p[1] + t * df[1]]), t_num <= tol || s_num <= tol)
}

fn meet_exact(p: &B2, d: V2, q: &B2, e: V2) -> Step<B2> {
    let det = cross(d, e);
    if det == 0 {
        return Step::Reject;
    }
    let k = |x: i64| BigRational::from_integer(x.into());
    let r = [&q[0] - &p[0], &q[1] - &p[1]];
    let t_num = &r[0] * k(e[1]) - &r[1] * k(e[0]);
    let s_num = &r[0] * k(d[1]) - &r[1] * k(d[0]);
    let forward = |x: &BigRational| x.is_zero() || x.is_positive() == (det > 0);
    if !forward(&t_num) || !forward(&s_num) {
        return Step::Reject;
    }
    let boundary = t_num.is_zero() || s_num.is_zero();
    let t = t_num / k(det);
    let x = [&p[0] + &t * k(d[0]), &p[1] + &t * k(d[1])];
    if boundary {
        Step::Boundary(x)
    } else {
        Step::Ok(x)
    }
}

struct Found {
    assignment: Vec<usize>,
    positions: Vec<Option<B2>>,
}

struct Search<'a> {
    plan: &'a Plan,
    points: &'a [F2],
    exact_points: &'a [B2],
    assign: Vec<usize>,
    used: Vec<bool>,
    pos: Vec<F2>,
    nodes: u64,
    degenerate: bool,
    found: Vec<Found>,
}

impl Search<'_> {
    fn ray_base(&self, i: &Input) -> (F2, V2) {
        match *i {
            Input::Slot { slot, dir } => (self.points[self.assign[slot]], dir),
            Input::Vertex { from, dir } => (self.pos[from], dir),
        }
    }

    /// Exact positions of every vertex solvable once slots `0..=depth` are filled.
    fn exact(&self, depth: usize) -> Step<Vec<Option<B2>>> {
        let mut boundary = false;
        let mut pos: Vec<Option<B2>> = vec![None; self.pos.len()];
        for ready in &self.plan.ready[..=depth] {
            for &v in ready {
                let base = |i: &Input| match *i {
                    Input::Slot { slot, dir } => (self.exact_points[self.assign[slot]].clone(), dir),
                    Input::Vertex { from, dir } => (pos[from].clone().expect("dependency order"), dir),
                };
                let ((p, d), (q, e)) = (base(&self.plan.inputs[v][0]), base(&self.plan.inputs[v][1]));
                match meet_exact(&p, d, &q, e) {
                    Step::Ok(x) => pos[v] = Some(x),
                    Step::Reject => return Step::Reject,
                    Step::Boundary(x) => {
                        boundary = true;
                        pos[v] = Some(x);
                    }
                }
            }
        }
        if boundary {
            Step::Boundary(pos)
        } else {
            Step::Ok(pos)
        }
    }

    fn run(&mut self, depth: usize) {
        self.nodes += 1;
        if depth == self.plan.slots.len() {
            match self.exact(depth - 1) {
                Step::Ok(positions) => self.found.push(Found { assignment: self.assign.clone(), positions }),
                Step::Reject => {}
                Step::Boundary(_) => self.degenerate = true,
            }
            return;
        }
        'choice: for k in 0..self.points.len() {
            if self.used[k] {
                continue;
            }
            self.assign[depth] = k;
            let mut tie = false;
            for &v in &self.plan.ready[depth] {
                let (p, d) = self.ray_base(&self.plan.inputs[v][0]);
                let (q, e) = self.ray_base(&self.plan.inputs[v][1]);
                match meet_float(p, d, q, e) {
                    (Step::Ok(x), near) => {
                        self.pos[v] = x;
                        tie |= near;
                    }
                    _ => continue 'choice,
                }
            }
            if tie {
                if let Step::Reject = self.exact(depth) {
                    continue;
                }
            }
            self.used[k] = true;
            self.run(depth + 1);
            self.used[k] = false;
        }
    }
}

fn double_factorial_upto(n: u128) -> u128 {
    let mut acc: u128 = 1;
    let mut k = n;
    while k > 1 {
        acc = acc.saturating_mul(k);
        k -= 2;
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Enumerates rigid curves through the constraint points, with multiplicities.
pub fn enumerate_rigid(c: &PolyhedralComplex, cs: &ConstraintSet, budget: u64) -> Result<Enumeration, EnumerateError> {
    cs.validate(c)?;
    let mut result = Enumeration::default();
    let n = cs.unbounded_ends.len();
    let k = cs.points.len();
    if n < 3 {
        return Ok(result);
    }
    let needed = double_factorial_upto(2 * n as u128 - 5);
    if needed > u128::from(budget) {
        return Err(EnumerateError::BudgetExceeded { needed, budget });
    }
    match k.cmp(&(n - 1)) {
        std::cmp::Ordering::Less => {
            result.warnings.push(Warning::PositiveDimensional { free_parameters: n - 1 - k });
            return Ok(result);
        }
        std::cmp::Ordering::Greater => {
            result.warnings.push(Warning::Overdetermined { excess: k + 1 - n });
            return Ok(result);
        }
        std::cmp::Ordering::Equal => {}
    }

    // leaf types: distinct directions, sorted
    let dirs: Vec<V2> = cs
        .unbounded_ends
        .iter()
        .map(|d| [d.entries()[0].to_i64().unwrap_or(i64::MAX), d.entries()[1].to_i64().unwrap_or(i64::MAX)])
        .collect();
    let distinct: Vec<V2> = dirs.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut types: Vec<usize> = dirs.iter().map(|d| distinct.iter().position(|x| x == d).expect("present")).collect();
    types.sort();
    let ends: Vec<V2> = types.iter().map(|&t| distinct[t]).collect();

    let bound = i64::from(cs.degree_bound);
    let shapes = trivalent_types(&types);
    result.types_considered = shapes.len();
    let analysed: Vec<Analysed> = shapes.into_iter().filter_map(|(s, _)| analyse(s, &ends, bound)).collect();
    result.types_admissible = analysed.len();

    let exact_points: Vec<B2> = cs.points.iter().map(|p| [p.position.coords()[0].clone(), p.position.coords()[1].clone()]).collect();
    let points: Vec<F2> = exact_points
        .iter()
        .map(|[x, y]| [x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN)])
        .collect();
    let labels = cs.labels();
    let spent = AtomicU64::new(0);
    let per_type: Vec<(Vec<RigidCurveRecord>, bool)> = analysed
        .par_iter()
        .map(|a| {
            let mut records = Vec::new();
            let mut degenerate = false;
            for marked in combinations(a.shape.edges.len(), k) {
                if spent.load(Ordering::Relaxed) > budget {
                    break;
                }
                let Some(p) = plan(a, &marked) else { continue };
                let mut search = Search {
                    plan: &p,
                    points: &points,
                    exact_points: &exact_points,
                    assign: vec![0; k],
                    used: vec![false; k],
                    pos: vec![[0.0; 2]; a.shape.nodes],
                    nodes: 0,
                    degenerate: false,
                    found: Vec::new(),
                };
                search.run(0);
                spent.fetch_add(search.nodes, Ordering::Relaxed);
                degenerate |= search.degenerate;
                records.extend(search.found.iter().map(|f| build_record(a, &p, f, &ends, &cs.points, &labels)));
            }
            (records, degenerate)
        })
        .collect();
    result.search_nodes = spent.into_inner();
    if result.search_nodes > budget {
        return Err(EnumerateError::BudgetExceeded { needed: u128::from(result.search_nodes), budget });
    }
    let mut non_generic: BTreeSet<String> = BTreeSet::new();
    let mut records = Vec::new();
    for (a, (found, degenerate)) in analysed.iter().zip(per_type) {
        if degenerate {
            non_generic.insert(canonical(&a.adj, &|v| (v < a.shape.leaves).then(|| format!("({},{})", ends[v][0], ends[v][1]))));
        }
        records.extend(found);
    }
    records.sort_by(|x, y| x.code.cmp(&y.code).then_with(|| position_key(&x.curve).cmp(&position_key(&y.curve))));
    records.dedup_by(|x, y| x.code == y.code && position_key(&x.curve) == position_key(&y.curve));
    result.records = records;
    result.warnings.extend(non_generic.into_iter().map(|code| Warning::NonGeneric { code }));
    Ok(result)
}

fn position_key(g: &TropicalCurve) -> Vec<RationalPoint> {
    let mut v: Vec<RationalPoint> = g.vertices().iter().map(|v| v.position.clone()).collect();
    v.sort();
    v
}

fn build_record(
    a: &Analysed,
    p: &Plan,
    f: &Found,
    ends: &[V2],
    constraints: &[PointConstraint],
    labels: &[String],
) -> RigidCurveRecord {
    let s = &a.shape;
    let point_of_edge: BTreeMap<usize, usize> = p.slots.iter().enumerate().map(|(depth, &e)| (e, f.assignment[depth])).collect();
    let vid = |v: usize| format!("v{}", v - s.leaves + 1);
    let pos = |v: usize| RationalPoint::new(f.positions[v].clone().expect("every vertex is solved").to_vec());
    let iv = |d: V2| IntegralVector::from_i64s(&d);
    let mut vertices: Vec<Vertex> = (s.leaves..s.nodes).map(|v| Vertex { id: vid(v), position: pos(v), genus: 0 }).collect();
    let mut edges = Vec::new();
    let mut curve_ends = Vec::new();
    let mut direction_count: BTreeMap<V2, usize> = BTreeMap::new();
    let mut unbounded_label = |d: V2| {
        let c = direction_count.entry(d).or_default();
        *c += 1;
        format!("u({},{})#{}", d[0], d[1], c)
    };
    let length = |from: &RationalPoint, to: &RationalPoint, d: V2| {
        crate::lattice::parameter_along(from, &iv(d), to).expect("solved positions are consistent")
    };
    for (e, &(x, y)) in s.edges.iter().enumerate() {
        // orient from the internal node
        let (x, y, d) = if x < s.leaves { (y, x, a.toward(e, x)) } else { (x, y, a.dir[e]) };
        let marked = point_of_edge.get(&e).copied();
        let tail = (vid(x), pos(x));
        let (mid_id, mid_pos) = match marked {
            Some(k) => {
                let id = format!("x{}", labels[k]);
                vertices.push(Vertex { id: id.clone(), position: constraints[k].position.clone(), genus: 0 });
                curve_ends.push(End { id: labels[k].clone(), vertex: id.clone(), derivative: IntegralVector::zero(2), label: labels[k].clone() });
                edges.push(InternalEdge {
                    id: format!("{}-{}", tail.0, id),
                    tail: tail.0.clone(),
                    head: id.clone(),
                    length: length(&tail.1, &constraints[k].position, d),
                    derivative: iv(d),
                });
                (id, constraints[k].position.clone())
            }
            None => tail.clone(),
        };
        if y < s.leaves {
            let label = unbounded_label(ends[y]);
            curve_ends.push(End { id: label.clone(), vertex: mid_id, derivative: iv(ends[y]), label });
        } else {
            let head = vid(y);
            edges.push(InternalEdge {
                id: format!("{mid_id}-{head}"),
                tail: mid_id,
                head: head.clone(),
                length: length(&mid_pos, &pos(y), d),
                derivative: iv(d),
            });
        }
    }
    let curve = TropicalCurve::new(vertices, edges, curve_ends).expect("record is well formed");
    RigidCurveRecord { code: record_code(&curve), curve, multiplicity: BigInt::from(a.multiplicity) }
}

/// Canonical encoding of a tree-shaped curve: unbounded ends by direction, marked ends by label.
pub fn record_code(g: &TropicalCurve) -> String {
    let vs = g.vertices();
    let index: BTreeMap<&str, usize> = vs.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
    let n = vs.len() + g.ends().len();
    let mut adj = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        let (a, b) = (index[e.tail.as_str()], index[e.head.as_str()]);
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    let mut tokens: Vec<Option<String>> = vec![None; n];
    for (j, e) in g.ends().iter().enumerate() {
        let leaf = vs.len() + j;
        let a = index[e.vertex.as_str()];
        adj[a].push((leaf, usize::MAX - j));
        adj[leaf].push((a, usize::MAX - j));
        tokens[leaf] = Some(if e.derivative.is_zero() { e.label.clone() } else { e.derivative.to_string() });
    }
    canonical(&adj, &|v| tokens[v].clone())
}

/// Collapses vertices within the cluster radius of a cluster face onto that face, contracting
/// edges inside a cluster and dropping unbounded ends there.
pub fn coarse_type(g: &TropicalCurve, cs: &ConstraintSet, c: &PolyhedralComplex) -> TropicalCurve {
    let clusters: Vec<(String, RationalPoint)> = cs
        .points
        .iter()
        .filter_map(|p| p.cluster.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter_map(|cl| c.face(&cl).ok().and_then(|f| f.polytope.witness()).map(|w| (cl, w)))
        .collect();
    let home = |p: &RationalPoint| clusters.iter().find(|(_, w)| p.sup_distance(w) <= cs.cluster_radius).map(|(cl, _)| cl.clone());
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    let mut vertices: Vec<Vertex> = Vec::new();
    for v in g.vertices() {
        match home(&v.position) {
            Some(cl) => {
                if !vertices.iter().any(|x| x.id == cl) {
                    let w = clusters.iter().find(|(id, _)| *id == cl).expect("cluster exists").1.clone();
                    vertices.push(Vertex { id: cl.clone(), position: w, genus: 0 });
                }
                rename.insert(v.id.clone(), cl);
            }
            None => {
                vertices.push(v.clone());
                rename.insert(v.id.clone(), v.id.clone());
            }
        }
    }
    let clustered = |id: &str| clusters.iter().any(|(cl, _)| cl == id);
    let mut edges = Vec::new();
    for e in g.edges() {
        let (t, h) = (rename[&e.tail].clone(), rename[&e.head].clone());
        if t == h && clustered(&t) {
            continue;
        }
        edges.push(InternalEdge { tail: t, head: h, ..e.clone() });
    }
    let ends: Vec<End> = g
        .ends()
        .iter()
        .filter_map(|e| {
            let v = rename[&e.vertex].clone();
            (e.derivative.is_zero() || !clustered(&v)).then(|| End { vertex: v, ..e.clone() })
        })
        .collect();
    TropicalCurve::new(vertices, edges, ends).expect("coarsening keeps references valid")
}

/// Total multiplicity of the records whose coarse type matches `gamma` combinatorially.
pub fn multiplicity_of_type(
    e: &Enumeration,
    gamma: &TropicalCurve,
    cs: &ConstraintSet,
    c: &PolyhedralComplex,
) -> BigInt {
    e.records
        .iter()
        .filter(|r| is_isomorphic_combinatorially(&coarse_type(&r.curve, cs, c), gamma))
        .map(|r| &r.multiplicity)
        .sum()
}
