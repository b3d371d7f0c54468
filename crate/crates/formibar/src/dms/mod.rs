//! Dynamic metric spaces: per-pair distance curves over a finite point set,
//! their construction from trajectories and ultrametrics, and the Rips graph
//! functor into dynamic graphs.

mod pl;
mod trajectories;

pub use pl::Pl;
pub(crate) use pl::{push_closed, Lin};
pub use trajectories::{dms_from_trajectories, TrajectorySet};

use serde::{Deserialize, Serialize};

use crate::base::{DynamicGraph, Elem, Ext, Graph, Interval, Rat, Timeline, Universe};
use crate::error::{Error, Result};

/// Denominator used when an exact value would be irrational.
pub const ROUNDING_DENOM: u64 = 1_000_000;

/// A finite (pseudo-)metric space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetric {
    universe: Universe,
    d: Vec<Vec<Rat>>,
}

impl FiniteMetric {
    /// Checks shape, zero diagonal, symmetry, nonnegativity and the triangle inequality.
    pub fn new(universe: Universe, d: Vec<Vec<Rat>>) -> Result<FiniteMetric> {
        let n = universe.len();
        if d.len() != n || d.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("distance matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(Error::Invalid(format!(
                    "nonzero diagonal at `{}`",
                    universe.name(i as Elem)
                )));
            }
            for j in 0..n {
                if d[i][j] != d[j][i] || d[i][j].is_negative() {
                    return Err(Error::Invalid(format!(
                        "distance {}-{} is negative or asymmetric",
                        universe.name(i as Elem),
                        universe.name(j as Elem)
                    )));
                }
                for k in 0..n {
                    if d[i][k] > &d[i][j] + &d[j][k] {
                        return Err(Error::Invalid(format!(
                            "triangle inequality fails at {}, {}, {}",
                            universe.name(i as Elem),
                            universe.name(j as Elem),
                            universe.name(k as Elem)
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetric { universe, d })
    }

    /// Points named by `ids`, integer distances row by row.
    pub fn from_rows(ids: &[&str], rows: &[&[i64]]) -> Result<FiniteMetric> {
        let d = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rat::int(x)).collect())
            .collect();
        FiniteMetric::new(Universe::new(ids.iter().copied()), d)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn dist(&self, i: Elem, j: Elem) -> &Rat {
        &self.d[i as usize][j as usize]
    }

    pub fn matrix(&self) -> &[Vec<Rat>] {
        &self.d
    }

    pub fn is_ultrametric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| self.d[i][k] <= std::cmp::max(&self.d[i][j], &self.d[j][k]).clone())
            })
        })
    }

    /// Whether distinct points are at positive distance.
    pub fn is_genuine(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.d[i][j].is_positive()))
    }
}

/// Squared distance that is quadratic between consecutive times and constant outside.
/// On piece `k` the value is `a + b s + c s²` with `s = t - times[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadCurve {
    times: Vec<Rat>,
    coeffs: Vec<[Rat; 3]>,
    first: Rat,
    last: Rat,
}

impl QuadCurve {
    pub fn new(times: Vec<Rat>, coeffs: Vec<[Rat; 3]>) -> Result<QuadCurve> {
        if times.is_empty() || coeffs.len() + 1 != times.len() {
            return Err(Error::Invalid(
                "quadratic curve needs n times and n-1 pieces".into(),
            ));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("times must be strictly increasing".into()));
        }
        if coeffs.iter().any(|[_, _, c]| c.is_negative()) {
            return Err(Error::Invalid(
                "squared distance must be convex on each piece".into(),
            ));
        }
        let first = match coeffs.first() {
            Some(c) => c[0].clone(),
            None => Rat::zero(),
        };
        let last = match coeffs.last() {
            Some([a, b, c]) => {
                let l = &times[times.len() - 1] - &times[times.len() - 2];
                a + &(b * &l) + &(c * &(&l * &l))
            }
            None => Rat::zero(),
        };
        Ok(QuadCurve {
            times,
            coeffs,
            first,
            last,
        })
    }

    /// A constant squared distance.
    pub fn constant_sq(v: Rat) -> QuadCurve {
        QuadCurve {
            times: vec![Rat::zero()],
            coeffs: vec![],
            first: v.clone(),
            last: v,
        }
    }

    pub fn times(&self) -> &[Rat] {
        &self.times
    }

    pub fn coeffs(&self) -> &[[Rat; 3]] {
        &self.coeffs
    }

    pub fn eval_sq(&self, t: &Rat) -> Rat {
        let n = self.times.len();
        if n == 1 {
            return self.first.clone();
        }
        if t <= &self.times[0] {
            return self.first.clone();
        }
        if t >= &self.times[n - 1] {
            return self.last.clone();
        }
        let k = self.times.partition_point(|x| x <= t) - 1;
        let s = t - &self.times[k];
        let [a, b, c] = &self.coeffs[k];
        a + &(b * &s) + &(c * &(&s * &s))
    }

    /// The exact curve when every piece is the square of a linear function.
    pub fn as_pl(&self) -> Option<Pl> {
        let n = self.times.len();
        if n == 1 {
            return Some(Pl::constant(self.first.exact_sqrt()?));
        }
        let mut knots: Vec<(Rat, Rat)> = Vec::new();
        for (k, [a, b, c]) in self.coeffs.iter().enumerate() {
            if (b * b) != (&(a * c) * &Rat::int(4)) {
                return None;
            }
            let ra = a.exact_sqrt()?;
            let rc = c.exact_sqrt()?;
            let rc = if b.is_negative() { -rc } else { rc };
            // d = |ra + rc s| on this piece
            let t0 = &self.times[k];
            let len = &self.times[k + 1] - t0;
            if knots.is_empty() {
                knots.push((t0.clone(), ra.clone()));
            }
            if rc.is_negative() {
                let root = -(&ra / &rc);
                if root.is_positive() && root < len {
                    knots.push((t0 + &root, Rat::zero()));
                }
            }
            let end = &ra + &(&rc * &len);
            knots.push((self.times[k + 1].clone(), end.abs()));
        }
        Pl::with_flat_tails(knots).ok()
    }

    /// Chord of the distance through values rounded up at the knots; lies
    /// above the curve because the distance is convex on each piece. For display.
    pub fn envelope(&self) -> Pl {
        let knots = self
            .times
            .iter()
            .map(|t| (t.clone(), sqrt_up(&self.eval_sq(t))))
            .collect();
        Pl::with_flat_tails(knots).expect("increasing times")
    }

    /// Closed sublevel set `{t : d(t) <= level}`. Irrational crossings are moved
    /// outward to the grid `1/ROUNDING_DENOM`; the second value counts them.
    pub fn sublevel(&self, level: &Rat) -> (Vec<(Ext, Ext)>, usize) {
        let lsq = level * level;
        let n = self.times.len();
        let mut out = Vec::new();
        let mut rounded = 0;
        if self.first <= lsq {
            let hi = if n == 1 {
                Ext::PosInf
            } else {
                Ext::Fin(self.times[0].clone())
            };
            push_closed(&mut out, Ext::NegInf, hi);
        }
        for (k, [a, b, c]) in self.coeffs.iter().enumerate() {
            let t0 = &self.times[k];
            let t1 = &self.times[k + 1];
            let len = t1 - t0;
            // p(s) = c s² + b s + (a - lsq) <= 0
            let a0 = a - &lsq;
            let piece = if c.is_zero() {
                if b.is_zero() {
                    (!a0.is_positive()).then(|| (Rat::zero(), len.clone()))
                } else {
                    let r = -(&a0 / b);
                    if b.is_positive() {
                        (!r.is_negative()).then(|| (Rat::zero(), std::cmp::min(r, len.clone())))
                    } else {
                        (r <= len).then(|| (std::cmp::max(r, Rat::zero()), len.clone()))
                    }
                }
            } else {
                let disc = b * b - &(&(c * &a0) * &Rat::int(4));
                if disc.is_negative() {
                    None
                } else {
                    let two_c = c * &Rat::int(2);
                    let (lo, hi) = match disc.exact_sqrt() {
                        Some(sd) => ((-b - &sd) / &two_c + t0, (-b + &sd) / &two_c + t0),
                        None => {
                            let p = |t: &Rat| {
                                let s = t - t0;
                                &(c * &(&s * &s)) + &(b * &s) + &a0
                            };
                            let v = -(b.to_f64()) / two_c.to_f64();
                            let w = disc.to_f64().sqrt() / two_c.to_f64();
                            let lo = grid_root(&p, t0.to_f64() + v - w, true);
                            let hi = grid_root(&p, t0.to_f64() + v + w, false);
                            // only roots that end up bounding the piece count
                            rounded +=
                                (lo > *t0 && lo <= *t1) as usize + (hi >= *t0 && hi < *t1) as usize;
                            (lo, hi)
                        }
                    };
                    let lo = std::cmp::max(lo, t0.clone());
                    let hi = std::cmp::min(hi, t1.clone());
                    (lo <= hi).then(|| (&lo - t0, &hi - t0))
                }
            };
            if let Some((s0, s1)) = piece {
                push_closed(&mut out, Ext::Fin(t0 + &s0), Ext::Fin(t0 + &s1));
            }
        }
        if n > 1 && self.last <= lsq {
            push_closed(&mut out, Ext::Fin(self.times[n - 1].clone()), Ext::PosInf);
        }
        (out, rounded)
    }

    /// Infimum of the squared distance over the closure of `iv`.
    pub fn inf_sq_on(&self, iv: &Interval) -> Rat {
        let mut pts: Vec<Rat> = Vec::new();
        if let Ext::Fin(a) = &iv.left {
            pts.push(a.clone());
        }
        if let Ext::Fin(b) = &iv.right {
            pts.push(b.clone());
        }
        let inside = |t: &Rat| iv.left <= *t && iv.right >= *t;
        pts.extend(self.times.iter().filter(|t| inside(t)).cloned());
        for (k, [_, b, c]) in self.coeffs.iter().enumerate() {
            if c.is_positive() {
                let v = &self.times[k] - &(b / &(c * &Rat::int(2)));
                if v > self.times[k] && v < self.times[k + 1] && inside(&v) {
                    pts.push(v);
                }
            }
        }
        if pts.is_empty() {
            // a ray beyond every time: the value is the constant tail
            return if iv.left >= self.times[self.times.len() - 1] {
                self.last.clone()
            } else {
                self.first.clone()
            };
        }
        pts.iter().map(|t| self.eval_sq(t)).min().expect("nonempty")
    }
}

/// Smallest multiple of `1/ROUNDING_DENOM` whose square is at least `x`.
fn sqrt_up(x: &Rat) -> Rat {
    if let Some(r) = x.exact_sqrt() {
        return r;
    }
    let den = ROUNDING_DENOM as i64;
    let mut k = (x.to_f64().sqrt() * den as f64).ceil() as i64 - 1;
    loop {
        let r = Rat::new(k, den);
        if &(&r * &r) >= x {
            return r;
        }
        k += 1;
    }
}

/// Grid point next to a root of the convex `p` near `guess`: the largest grid
/// point below it when `entering` (p turns nonpositive there), else the
/// smallest one above it. Either way the sublevel set only grows.
fn grid_root(p: &impl Fn(&Rat) -> Rat, guess: f64, entering: bool) -> Rat {
    let den = ROUNDING_DENOM as i64;
    let at = |k: i64| p(&Rat::new(k, den));
    if entering {
        let mut k = (guess * den as f64).floor() as i64;
        for _ in 0..4 {
            if at(k).is_positive() {
                break;
            }
            k -= 1;
        }
        for _ in 0..4 {
            if at(k + 1).is_positive() {
                k += 1;
            } else {
                break;
            }
        }
        Rat::new(k, den)
    } else {
        let mut k = (guess * den as f64).ceil() as i64;
        for _ in 0..4 {
            if at(k).is_positive() {
                break;
            }
            k += 1;
        }
        for _ in 0..4 {
            if at(k - 1).is_positive() {
                k -= 1;
            } else {
                break;
            }
        }
        Rat::new(k, den)
    }
}

/// The distance between one pair of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Curve {
    Pl(Pl),
    /// Stored as a squared distance.
    Quad(QuadCurve),
}

impl Curve {
    pub fn as_pl(&self) -> Option<&Pl> {
        match self {
            Curve::Pl(p) => Some(p),
            Curve::Quad(_) => None,
        }
    }

    /// `d(t) <= level`, decided exactly.
    pub fn within(&self, t: &Rat, level: &Rat) -> bool {
        match self {
            Curve::Pl(p) => &p.eval(t) <= level,
            Curve::Quad(q) => q.eval_sq(t) <= level * level,
        }
    }

    pub fn is_positive_at(&self, t: &Rat) -> bool {
        match self {
            Curve::Pl(p) => p.eval(t).is_positive(),
            Curve::Quad(q) => q.eval_sq(t).is_positive(),
        }
    }

    /// All breakpoint times.
    pub fn times(&self) -> Vec<Rat> {
        match self {
            Curve::Pl(p) => p.knots().iter().map(|k| k.0.clone()).collect(),
            Curve::Quad(q) => q.times().to_vec(),
        }
    }

    /// The curve itself if PL, else its upper envelope.
    pub fn display_pl(&self) -> Pl {
        match self {
            Curve::Pl(p) => p.clone(),
            Curve::Quad(q) => q.envelope(),
        }
    }
}

/// A dynamic metric space: one distance curve per unordered pair of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dms {
    universe: Universe,
    curves: Vec<Curve>,
    /// Period of the underlying analytic family, when the data is a finite
    /// window of a periodic one.
    pub period: Option<Rat>,
}

fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

impl Dms {
    /// Curves listed for pairs `(0,1), (0,2), (1,2), (0,3), …`. Checks the
    /// invariants of a dynamic metric space.
    pub fn new(universe: Universe, curves: Vec<Curve>) -> Result<Dms> {
        let n = universe.len();
        if curves.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::Invalid(format!(
                "{n} points need {} curves",
                n * n.saturating_sub(1) / 2
            )));
        }
        let d = Dms {
            universe,
            curves,
            period: None,
        };
        validate_dms(&d)?;
        Ok(d)
    }

    /// Build from a curve per pair, `f(i, j)` with `i < j`.
    pub fn from_fn(universe: Universe, mut f: impl FnMut(Elem, Elem) -> Curve) -> Result<Dms> {
        let n = universe.len();
        let mut curves = Vec::new();
        for j in 0..n {
            for i in 0..j {
                curves.push(f(i as Elem, j as Elem));
            }
        }
        Dms::new(universe, curves)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    /// `None` on the diagonal, where the distance is identically zero.
    pub fn curve(&self, i: Elem, j: Elem) -> Option<&Curve> {
        let (i, j) = (i.min(j) as usize, i.max(j) as usize);
        (i != j).then(|| &self.curves[pair_index(i, j)])
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn is_pl(&self) -> bool {
        self.curves.iter().all(|c| matches!(c, Curve::Pl(_)))
    }

    /// Distance curve as PL; zero on the diagonal.
    pub fn pl(&self, i: Elem, j: Elem) -> Result<Pl> {
        match self.curve(i, j) {
            None => Ok(Pl::constant(Rat::zero())),
            Some(Curve::Pl(p)) => Ok(p.clone()),
            Some(Curve::Quad(_)) => Err(Error::NotPiecewiseLinear(format!(
                "distance {}-{} comes from trajectories",
                self.universe.name(i),
                self.universe.name(j)
            ))),
        }
    }

    /// Every breakpoint time of every curve, sorted.
    pub fn breakpoints(&self) -> Vec<Rat> {
        let mut ts: Vec<Rat> = self.curves.iter().flat_map(Curve::times).collect();
        ts.sort();
        ts.dedup();
        ts
    }

    pub fn with_period(mut self, p: Rat) -> Dms {
        self.period = Some(p);
        self
    }
}

/// Checks the pseudometric conditions at all times and that some time carries a genuine metric.
pub fn validate_dms(d: &Dms) -> Result<()> {
    let n = d.len();
    let u = &d.universe;
    for (idx, c) in d.curves.iter().enumerate() {
        if let Curve::Pl(p) = c {
            if !p.is_nonneg() {
                let j = (1..n).find(|&j| pair_index(0, j) + j > idx).unwrap_or(1);
                return Err(Error::Invalid(format!(
                    "distance curve #{idx} takes negative values (pair ending at `{}`)",
                    u.name(j as Elem)
                )));
            }
        }
    }
    // Triangle inequality. Trajectory distances satisfy it by construction.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k || i > k {
                    continue;
                }
                let (Some(Curve::Pl(ik)), Some(Curve::Pl(ij)), Some(Curve::Pl(jk))) = (
                    d.curve(i as Elem, k as Elem),
                    d.curve(i as Elem, j as Elem),
                    d.curve(j as Elem, k as Elem),
                ) else {
                    continue;
                };
                if !triangle_holds(ik, ij, jk) {
                    return Err(Error::Invalid(format!(
                        "triangle inequality fails for {}-{} via {}",
                        u.name(i as Elem),
                        u.name(k as Elem),
                        u.name(j as Elem)
                    )));
                }
            }
        }
    }
    if n >= 2 && !genuine_somewhere(d) {
        return Err(Error::Invalid(
            "no time at which all distinct points are apart".into(),
        ));
    }
    Ok(())
}

/// `ik <= ij + jk` everywhere. All three are linear between consecutive
/// common breakpoints, so the grid points and the tail slopes decide it.
fn triangle_holds(ik: &Pl, ij: &Pl, jk: &Pl) -> bool {
    let mut grid: Vec<Rat> = [ik, ij, jk]
        .iter()
        .flat_map(|p| p.knots().iter().map(|k| k.0.clone()))
        .collect();
    grid.sort();
    grid.dedup();
    let slack = |t: &Rat| ij.eval(t) + jk.eval(t) - ik.eval(t);
    if grid.iter().any(|t| slack(t).is_negative()) {
        return false;
    }
    let left = ij.left_slope() + jk.left_slope() - ik.left_slope().clone();
    let right = ij.right_slope() + jk.right_slope() - ik.right_slope().clone();
    !left.is_positive() && !right.is_negative()
}

fn genuine_somewhere(d: &Dms) -> bool {
    let grid = d.breakpoints();
    let mut samples: Vec<Rat> = Vec::new();
    let m = d.curves.len();
    match (grid.first(), grid.last()) {
        (Some(a), Some(b)) => {
            samples.push(a - &Rat::one());
            samples.push(b + &Rat::one());
        }
        _ => samples.push(Rat::zero()),
    }
    for w in grid.windows(2) {
        // a curve vanishing at more than one interior point of a piece vanishes on all of it,
        // so m+1 interior points per piece see every gap in the zero sets
        for q in 1..=m + 1 {
            let s = Rat::new(q as i64, m as i64 + 2);
            samples.push(&w[0] + &(&(&w[1] - &w[0]) * &s));
        }
    }
    samples.extend(grid);
    samples
        .iter()
        .any(|t| d.curves.iter().all(|c| c.is_positive_at(t)))
}

/// `d(t) = max(0, u - t)`.
pub fn dms_from_ultrametric(u: &FiniteMetric) -> Result<Dms> {
    if !u.is_ultrametric() {
        return Err(Error::Invalid("not an ultrametric".into()));
    }
    Dms::from_fn(u.universe().clone(), |i, j| {
        Curve::Pl(
            Pl::new(
                vec![(u.dist(i, j).clone(), Rat::zero())],
                -Rat::one(),
                Rat::zero(),
            )
            .expect("one knot"),
        )
    })
}

/// The constant dynamic metric space.
pub fn constant_dms(m: &FiniteMetric) -> Result<Dms> {
    Dms::from_fn(m.universe().clone(), |i, j| {
        Curve::Pl(Pl::constant(m.dist(i, j).clone()))
    })
}

/// `d(t) = psi(t) · m` for a nonnegative `psi`.
pub fn scaled_dms(m: &FiniteMetric, psi: &Pl) -> Result<Dms> {
    Dms::from_fn(m.universe().clone(), |i, j| {
        Curve::Pl(psi.scaled(m.dist(i, j)))
    })
}

/// Empty for `t < 0`; from then on all points with self-loops, and an edge
/// `{x, x'}` once `t >= d(x, x')`.
pub fn dms_from_metric_filtration(m: &FiniteMetric) -> DynamicGraph {
    let u = m.universe().clone();
    let mut cands: Vec<Rat> = vec![Rat::zero()];
    cands.extend(m.matrix().iter().flatten().cloned());
    Timeline::from_fn(&cands, |t| {
        if t.is_negative() {
            return Graph::empty(u.clone());
        }
        let n = m.len() as Elem;
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| m.dist(i, j) <= t);
        Graph::with_loops(u.clone(), u.elems(), edges.collect::<Vec<_>>())
            .expect("edges among vertices")
    })
}

/// What `rips_dg_with_meta` had to round.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RipsMeta {
    /// Number of irrational crossing times replaced by grid points.
    pub rounded_roots: usize,
    /// Upper bound on how far any crossing time moved.
    pub rounding_radius: Rat,
}

/// Saturated DG with edge `{x, x'}` present exactly when `d(t)(x, x') <= delta`.
pub fn rips_dg(g: &Dms, delta: &Rat) -> Result<DynamicGraph> {
    Ok(rips_dg_with_meta(g, delta)?.0)
}

pub fn rips_dg_with_meta(g: &Dms, delta: &Rat) -> Result<(DynamicGraph, RipsMeta)> {
    if delta.is_negative() {
        return Err(Error::Invalid(format!("negative scale {delta}")));
    }
    validate_dms(g)?;
    let n = g.len();
    let mut meta = RipsMeta::default();
    let mut sets: Vec<((Elem, Elem), Vec<(Ext, Ext)>)> = Vec::new();
    for j in 0..n {
        for i in 0..j {
            let c = g.curve(i as Elem, j as Elem).expect("off-diagonal");
            let set = match c {
                Curve::Pl(p) => p.sublevel(delta),
                Curve::Quad(q) => {
                    let (s, r) = q.sublevel(delta);
                    meta.rounded_roots += r;
                    s
                }
            };
            sets.push(((i as Elem, j as Elem), set));
        }
    }
    if meta.rounded_roots > 0 {
        meta.rounding_radius = Rat::new(1, ROUNDING_DENOM as i64);
    }
    let mut cands: Vec<Rat> = Vec::new();
    for (_, s) in &sets {
        for (a, b) in s {
            cands.extend(a.fin().cloned());
            cands.extend(b.fin().cloned());
        }
    }
    let u = g.universe().clone();
    let dg = Timeline::from_fn(&cands, |t| {
        let edges: Vec<(Elem, Elem)> = sets
            .iter()
            .filter(|(_, s)| s.iter().any(|(a, b)| *a <= *t && *b >= *t))
            .map(|(e, _)| *e)
            .collect();
        Graph::with_loops(u.clone(), u.elems(), edges).expect("edges among vertices")
    });
    Ok((dg, meta))
}

/// Barcode of the connected components of the Rips graphs at `delta`.
pub fn rips_barcode(g: &Dms, delta: &Rat) -> Result<crate::base::Barcode> {
    let f = crate::clustering::pi0_dg(&rips_dg(g, delta)?)?;
    crate::zigzag::barcode_of_formigram(&f)
}

/// Per-pair infimum of the distance over the window. Exact for PL curves; for
/// trajectory curves the square root is rounded to the nearest `1/ROUNDING_DENOM`
/// unless it is rational.
pub fn window_min_distance(g: &Dms, iv: &Interval) -> Vec<Vec<Rat>> {
    let n = g.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for j in 0..n {
        for i in 0..j {
            let v = match g.curve(i as Elem, j as Elem).expect("off-diagonal") {
                Curve::Pl(p) => p.inf_on(iv).expect("distances are bounded below"),
                Curve::Quad(q) => {
                    let sq = q.inf_sq_on(iv);
                    sq.exact_sqrt()
                        .unwrap_or_else(|| Rat::round_f64(sq.to_f64().sqrt(), ROUNDING_DENOM))
                }
            };
            out[i][j] = v.clone();
            out[j][i] = v;
        }
    }
    out
}

/// `1 + cos t` sampled on the grid `k / 2^step_log2` of one period `2π_q`,
/// with exact zeros at the odd multiples of `π_q`, repeated `periods` times
/// starting at 0. Values are rounded to multiples of `2^-30`.
pub fn one_plus_cos(pi_q: &Rat, step_log2: u32, periods: u32) -> Pl {
    let step = Rat::new(1, 1i64 << step_log2);
    let period = pi_q * &Rat::int(2);
    let mut one: Vec<(Rat, Rat)> = Vec::new();
    let mut t = Rat::zero();
    let mut zero_done = false;
    while t < period {
        if !zero_done && &t >= pi_q {
            if &t > pi_q {
                one.push((pi_q.clone(), Rat::zero()));
            }
            zero_done = true;
        }
        let v = if &t == pi_q {
            Rat::zero()
        } else {
            Rat::round_f64(1.0 + t.to_f64().cos(), 1 << 30)
        };
        one.push((t.clone(), v));
        t = &t + &step;
    }
    let mut knots = Vec::with_capacity(one.len() * periods as usize + 1);
    for p in 0..periods {
        let off = &period * &Rat::int(p as i64);
        knots.extend(one.iter().map(|(t, v)| (t + &off, v.clone())));
    }
    knots.push((&period * &Rat::int(periods as i64), Rat::int(2)));
    Pl::with_flat_tails(knots).expect("increasing grid")
}

/// Two-point spaces with distances `ψ₀(t) = 1 + cos t` and `ψ₁(t) = ψ₀(t + τ)`,
/// both PL-sampled as in [`one_plus_cos`]; `ψ₁` is an exact translate of `ψ₀`.
#[derive(Clone, Debug)]
pub struct CosinePair {
    pub x0: Dms,
    pub x1: Dms,
    pub tau: Rat,
    pub pi: Rat,
    /// A whole period away from the ends of the sampled window.
    pub check_window: Interval,
}

pub fn cosine_pair(tau: f64, step_log2: u32, periods: u32) -> CosinePair {
    assert!(periods >= 3, "at least three periods");
    let pi = Rat::round_f64(std::f64::consts::PI, 1 << 40);
    let tau = Rat::round_f64(tau, 1 << 40);
    let psi0 = one_plus_cos(&pi, step_log2, periods);
    let psi1 = psi0.translated(&tau);
    let u = Universe::new(["x", "x'"]);
    let period = &pi * &Rat::int(2);
    let x0 = Dms::new(u.clone(), vec![Curve::Pl(psi0)])
        .expect("valid")
        .with_period(period.clone());
    let x1 = Dms::new(u, vec![Curve::Pl(psi1)])
        .expect("valid")
        .with_period(period.clone());
    let mid = Rat::int(periods as i64 / 2);
    let check_window = Interval::closed(&period * &mid, &period * &(&mid + &Rat::one()));
    CosinePair {
        x0,
        x1,
        tau,
        pi,
        check_window,
    }
}

/// Drop bars with exactly one infinite end: on a finite window of a periodic
/// family these are artefacts of where the window stops.
pub fn drop_boundary_bars(b: &crate::base::Barcode) -> crate::base::Barcode {
    b.intervals()
        .iter()
        .filter(|iv| iv.left.is_finite() == iv.right.is_finite())
        .cloned()
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SquaredDoc {
    times: Vec<Rat>,
    coeffs: Vec<[Rat; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constant: Option<Rat>,
}

#[derive(Serialize, Deserialize)]
struct PairDoc {
    a: String,
    b: String,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pl: Option<pl::PlDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    squared: Option<SquaredDoc>,
}

#[derive(Serialize, Deserialize)]
struct DmsDoc {
    kind: String,
    universe: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<Rat>,
    pairs: Vec<PairDoc>,
}

pub fn dms_to_json(d: &Dms) -> String {
    let u = &d.universe;
    let mut pairs = Vec::new();
    for j in 0..d.len() {
        for i in 0..j {
            let c = d.curve(i as Elem, j as Elem).expect("off-diagonal");
            let (pl, squared) = match c {
                Curve::Pl(p) => (Some(pl::PlDoc::from(p)), None),
                Curve::Quad(q) => (
                    None,
                    Some(SquaredDoc {
                        times: q.times.clone(),
                        coeffs: q.coeffs.clone(),
                        constant: (q.times.len() == 1).then(|| q.first.clone()),
                    }),
                ),
            };
            pairs.push(PairDoc {
                a: u.name(i as Elem).to_string(),
                b: u.name(j as Elem).to_string(),
                pl,
                squared,
            });
        }
    }
    let doc = DmsDoc {
        kind: "dms".into(),
        universe: u.ids().to_vec(),
        period: d.period.clone(),
        pairs,
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn dms_from_json(s: &str) -> Result<Dms> {
    let doc: DmsDoc = serde_json::from_str(s)?;
    if doc.kind != "dms" {
        return Err(Error::Parse(format!(
            "expected kind \"dms\", got {:?}",
            doc.kind
        )));
    }
    let u = Universe::new(doc.universe);
    let n = u.len();
    let mut slots: Vec<Option<Curve>> = vec![None; n * n.saturating_sub(1) / 2];
    for p in doc.pairs {
        let (i, j) = (u.elem(&p.a)? as usize, u.elem(&p.b)? as usize);
        if i == j {
            return Err(Error::Parse(format!(
                "pair `{}`-`{}` is on the diagonal",
                p.a, p.b
            )));
        }
        let c = match (p.pl, p.squared) {
            (Some(pl), None) => Curve::Pl(Pl::try_from(pl)?),
            (None, Some(sq)) => match sq.constant {
                Some(v) => Curve::Quad(QuadCurve::constant_sq(v)),
                None => Curve::Quad(QuadCurve::new(sq.times, sq.coeffs)?),
            },
            _ => {
                return Err(Error::Parse(format!(
                    "pair `{}`-`{}` needs exactly one of knots or squared",
                    p.a, p.b
                )))
            }
        };
        let k = pair_index(i.min(j), i.max(j));
        if slots[k].replace(c).is_some() {
            return Err(Error::Parse(format!(
                "pair `{}`-`{}` listed twice",
                p.a, p.b
            )));
        }
    }
    let curves = slots
        .into_iter()
        .enumerate()
        .map(|(k, c)| c.ok_or_else(|| Error::Parse(format!("missing distance curve #{k}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut d = Dms::new(u, curves)?;
    d.period = doc.period;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ultrametric_curve() {
        let u = FiniteMetric::from_rows(&["x", "y"], &[&[0, 3], &[3, 0]]).unwrap();
        let d = dms_from_ultrametric(&u).unwrap();
        let c = d.pl(0, 1).unwrap();
        assert_eq!(c.eval(&Rat::zero()), Rat::int(3));
        assert_eq!(c.eval(&Rat::int(1)), Rat::int(2));
        assert_eq!(c.eval(&Rat::int(7)), Rat::zero());
    }

    #[test]
    fn filtration_births() {
        let m = FiniteMetric::from_rows(&["x", "y"], &[&[0, 1], &[1, 0]]).unwrap();
        let g = dms_from_metric_filtration(&m);
        assert_eq!(g.crit(), &[Rat::zero(), Rat::one()]);
        assert!(!g.value_at(&Rat::new(1, 2)).has_edge(0, 1));
        assert!(g.value_at(&Rat::one()).has_edge(0, 1));
    }

    #[test]
    fn json_round_trip() {
        let u = FiniteMetric::from_rows(&["a", "b", "c"], &[&[0, 1, 2], &[1, 0, 2], &[2, 2, 0]])
            .unwrap();
        let d = dms_from_ultrametric(&u).unwrap();
        assert_eq!(dms_from_json(&dms_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn quad_sublevel_rounds_outward() {
        // d² = 2 + s², crossing d = 2 at s = ±√2
        let q = QuadCurve::new(
            vec![Rat::int(-3), Rat::int(3)],
            vec![[Rat::int(11), Rat::int(-6), Rat::one()]],
        )
        .unwrap();
        let (s, r) = q.sublevel(&Rat::int(2));
        assert_eq!(r, 2);
        let (Ext::Fin(a), Ext::Fin(b)) = (&s[0].0, &s[0].1) else {
            panic!()
        };
        let root = std::f64::consts::SQRT_2;
        assert!(a.to_f64() <= -root && a.to_f64() > -root - 1e-6);
        assert!(b.to_f64() >= root && b.to_f64() < root + 1e-6);
    }
}
