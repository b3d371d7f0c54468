//! The λ-slack interleaving distance between piecewise-linear dynamic metric spaces.
//!
//! A correspondence works at ε when for every two related pairs and every
//! time `t` in the checked window, the minimum of one distance over
//! `[t - ε, t + ε]` is at most the other distance at `t` plus `λε`, both ways.
//! That condition splits over pairs of point pairs, so the least ε is found
//! per pair of distance curves and a correspondence costs the worst of its pairs.

use rayon::prelude::*;

use super::check_size;
use crate::base::{covering_relations, Dist, Elem, Ext, Interval, Rat};
use crate::dms::{Dms, Lin, Pl};
use crate::error::Result;

/// A PL function with a range-minimum table over its knot values.
struct Windowed<'a> {
    f: &'a Pl,
    times: Vec<Rat>,
    table: Vec<Vec<Rat>>,
}

impl<'a> Windowed<'a> {
    fn new(f: &'a Pl) -> Windowed<'a> {
        let times: Vec<Rat> = f.knots().iter().map(|k| k.0.clone()).collect();
        let mut table = vec![f.knots().iter().map(|k| k.1.clone()).collect::<Vec<_>>()];
        let mut w = 1;
        while 2 * w <= times.len() {
            let prev = table.last().expect("nonempty");
            let next = (0..prev.len() - w)
                .map(|i| std::cmp::min(&prev[i], &prev[i + w]).clone())
                .collect();
            table.push(next);
            w *= 2;
        }
        Windowed { f, times, table }
    }

    /// Minimum knot value over indices `lo..hi`, if nonempty.
    fn range_min(&self, lo: usize, hi: usize) -> Option<Rat> {
        if lo >= hi {
            return None;
        }
        let k = (usize::BITS - 1 - (hi - lo).leading_zeros()) as usize;
        let row = &self.table[k];
        Some(std::cmp::min(&row[lo], &row[hi - (1 << k)]).clone())
    }

    /// Minimum over the knots strictly inside `(a, b)`.
    fn inner_min(&self, a: &Rat, b: &Rat) -> Option<Rat> {
        let lo = self.times.partition_point(|t| t <= a);
        let hi = self.times.partition_point(|t| t < b);
        self.range_min(lo, hi)
    }

    /// `min f` over `[t - eps, t + eps]`.
    fn window_min(&self, t: &Rat, eps: &Rat) -> Rat {
        let a = t - eps;
        let b = t + eps;
        let mut v = std::cmp::min(self.f.eval(&a), self.f.eval(&b));
        if let Some(c) = self.inner_min(&a, &b) {
            v = std::cmp::min(v, c);
        }
        v
    }
}

/// `sup_t (min over [t-eps, t+eps] of f) - g(t)` for `t` in the closure of `w`.
///
/// Breakpoints in `t` are the knots of `g` and the knots of `f` shifted by
/// `±eps`. Between two of them the window minimum is the least of two
/// lines (the window ends) and a constant (the knots inside), so the sup on
/// a piece is attained at its ends or where two of those cross; on a ray it
/// is `+inf` exactly when the difference keeps growing.
fn sup_gap(f: &Windowed, g: &Pl, eps: &Rat, w: &Interval) -> Ext {
    let mut pts: Vec<Rat> = g.knots().iter().map(|k| k.0.clone()).collect();
    for t in &f.times {
        pts.push(t - eps);
        pts.push(t + eps);
    }
    pts.extend(w.left.fin().cloned());
    pts.extend(w.right.fin().cloned());
    pts.retain(|t| w.left <= *t && w.right >= *t);
    pts.sort();
    pts.dedup();
    let gap_at = |t: &Rat| f.window_min(t, eps) - g.eval(t);
    let mut best: Option<Rat> = None;
    let mut take = |v: Rat| {
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    };
    for t in &pts {
        take(gap_at(t));
    }
    let mut pieces: Vec<(Ext, Ext)> = Vec::with_capacity(pts.len() + 1);
    if w.left == Ext::NegInf {
        pieces.push((
            Ext::NegInf,
            pts.first().map_or(Ext::PosInf, |p| Ext::Fin(p.clone())),
        ));
    }
    for p in pts.windows(2) {
        pieces.push((Ext::Fin(p[0].clone()), Ext::Fin(p[1].clone())));
    }
    if w.right == Ext::PosInf {
        if let Some(p) = pts.last() {
            pieces.push((Ext::Fin(p.clone()), Ext::PosInf));
        }
    }
    for (lo, hi) in pieces {
        let m = match (&lo, &hi) {
            (Ext::Fin(a), Ext::Fin(b)) => a.midpoint(b),
            (Ext::NegInf, Ext::Fin(b)) => b - &Rat::one(),
            (Ext::Fin(a), Ext::PosInf) => a + &Rat::one(),
            _ => Rat::zero(),
        };
        let left_end = f.f.lin(f.f.piece_right(&(&m - eps))).shifted(&-eps);
        let right_end = f.f.lin(f.f.piece_right(&(&m + eps))).shifted(eps);
        let inner = f.inner_min(&(&m - eps), &(&m + eps));
        let gl = g.lin(g.piece_right(&m));
        let mut lines: Vec<Lin> = vec![left_end, right_end];
        if let Some(c) = &inner {
            lines.push(Lin {
                s: Rat::zero(),
                c: c.clone(),
            });
        }
        let slopes = lines.iter().map(|l| &l.s);
        if hi == Ext::PosInf && slopes.clone().min().expect("lines") > &gl.s {
            return Ext::PosInf;
        }
        if lo == Ext::NegInf && slopes.max().expect("lines") < &gl.s {
            return Ext::PosInf;
        }
        let value = |t: &Rat| lines.iter().map(|l| l.at(t)).min().expect("lines") - gl.at(t);
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if let Some(t) = lines[i].crossing(&lines[j]) {
                    if lo < t && hi > t {
                        take(value(&t));
                    }
                }
            }
        }
        if pts.is_empty() {
            take(value(&m));
        }
    }
    match best {
        Some(b) => Ext::Fin(b),
        None => Ext::NegInf,
    }
}

/// `sup_gap - λ ε`, as a signed extended value.
fn phi(f: &Windowed, g: &Pl, lambda: &Rat, eps: &Rat, w: &Interval) -> Ext {
    match sup_gap(f, g, eps, w) {
        Ext::Fin(v) => Ext::Fin(v - lambda * eps),
        other => other,
    }
}

fn nonpos(v: &Ext) -> bool {
    match v {
        Ext::Fin(x) => !x.is_positive(),
        Ext::NegInf => true,
        Ext::PosInf => false,
    }
}

/// Least `ε >= 0` with `min_{[t-ε,t+ε]} f <= g(t) + λε` for every `t` in `w`.
///
/// The slack `phi(ε)` is nonincreasing and piecewise linear in ε. After a
/// bracket is found, bisection narrows it and the line through the last two
/// infeasible points proposes the exact root of the current piece. Without a
/// confirmed root the result is the upper end of a bracket of relative width 2^-60.
fn least_eps(f: &Windowed, g: &Pl, lambda: &Rat, w: &Interval) -> Dist {
    if f.f.is_zero() {
        return Ext::Fin(Rat::zero());
    }
    let ph = |e: &Rat| phi(f, g, lambda, e, w);
    let zero = Rat::zero();
    let p0 = ph(&zero);
    if nonpos(&p0) {
        return Ext::Fin(zero);
    }
    let mut lefts: Vec<(Rat, Rat)> = Vec::new();
    if let Ext::Fin(v) = &p0 {
        lefts.push((zero.clone(), v.clone()));
    }
    let mut lo = zero;
    let mut hi = Rat::one();
    let mut found = false;
    for _ in 0..64 {
        let v = ph(&hi);
        if nonpos(&v) {
            found = true;
            break;
        }
        if let Ext::Fin(v) = v {
            lefts.push((hi.clone(), v));
        }
        lo = hi.clone();
        hi = &hi * &Rat::int(2);
    }
    if !found {
        return Ext::PosInf;
    }
    // Bisection keeps trial points dyadic so their size stays small. Every few
    // steps the last two samples left of the root propose an exact root, which is
    // accepted when the line through them is confirmed between `lo` and it.
    let tol = &hi * &Rat::new(1, 1 << 30) * &Rat::new(1, 1 << 30);
    let mut step = 0u32;
    while &hi - &lo > tol {
        step += 1;
        if step.is_multiple_of(4) {
            if let Some(r) = secant_root(&lefts, &lo, &hi) {
                if nonpos(&ph(&r)) {
                    let (e2, p2) = lefts.last().expect("two samples").clone();
                    let (e1, p1) = lefts[lefts.len() - 2].clone();
                    let slope = (&p2 - &p1) / (&e2 - &e1);
                    let mid = lo.midpoint(&r);
                    let predicted = &p2 + &(&slope * &(&mid - &e2));
                    if matches!(ph(&mid), Ext::Fin(v) if v.is_positive() && v == predicted) {
                        return Ext::Fin(r);
                    }
                }
            }
        }
        let mid = lo.midpoint(&hi);
        match ph(&mid) {
            v if nonpos(&v) => hi = mid,
            Ext::Fin(v) => {
                lefts.push((mid.clone(), v));
                lo = mid;
            }
            _ => {
                lefts.clear();
                lo = mid;
            }
        }
    }
    Ext::Fin(hi)
}

/// Root of the line through the last two samples, if it falls in `(lo, hi]`.
fn secant_root(lefts: &[(Rat, Rat)], lo: &Rat, hi: &Rat) -> Option<Rat> {
    let [.., (e1, p1), (e2, p2)] = lefts else {
        return None;
    };
    if e2 != lo {
        return None;
    }
    let slope = (p2 - p1) / (e2 - e1);
    if !slope.is_negative() {
        return None;
    }
    let r = e2 - &(p2 / &slope);
    (r > *lo && r <= *hi).then_some(r)
}

/// The least ε making the pair `(f, g)` compatible in both directions.
pub fn pair_slack(f: &Pl, g: &Pl, lambda: &Rat, window: Option<&Interval>) -> Dist {
    let full = Interval::full();
    let w = window.unwrap_or(&full);
    let a = least_eps(&Windowed::new(f), g, lambda, w);
    let b = least_eps(&Windowed::new(g), f, lambda, w);
    std::cmp::max(a, b)
}

pub fn interleaving_dms_exact(x: &Dms, y: &Dms, lambda: &Rat) -> Result<Dist> {
    interleaving_dms_exact_with(x, y, lambda, None, super::size_bound())
}

/// As [`interleaving_dms_exact`], with the condition checked only for times in
/// `window` (window minima still see the whole curves) and an explicit size bound.
pub fn interleaving_dms_exact_with(
    x: &Dms,
    y: &Dms,
    lambda: &Rat,
    window: Option<&Interval>,
    bound: usize,
) -> Result<Dist> {
    if lambda.is_negative() {
        return Err(crate::Error::Invalid(format!("negative slack {lambda}")));
    }
    check_size(x.universe(), y.universe(), bound)?;
    let (m, n) = (x.len(), y.len());
    let rels = covering_relations(m, n);
    if rels.is_empty() {
        return Ok(Ext::PosInf);
    }
    let pairs = |k: usize| -> Vec<(Elem, Elem)> {
        (0..k as Elem)
            .flat_map(|j| (0..=j).map(move |i| (i, j)))
            .collect()
    };
    let (px, py) = (pairs(m), pairs(n));
    let cx = px
        .iter()
        .map(|&(i, j)| x.pl(i, j))
        .collect::<Result<Vec<_>>>()?;
    let cy = py
        .iter()
        .map(|&(i, j)| y.pl(i, j))
        .collect::<Result<Vec<_>>>()?;
    let idx = |i: Elem, j: Elem| -> usize {
        let (i, j) = (i.min(j) as usize, i.max(j) as usize);
        j * (j + 1) / 2 + i
    };
    let jobs: Vec<(usize, usize)> = (0..px.len())
        .flat_map(|a| (0..py.len()).map(move |b| (a, b)))
        .collect();
    let table: Vec<Dist> = jobs
        .par_iter()
        .map(|&(a, b)| pair_slack(&cx[a], &cy[b], lambda, window))
        .collect();
    let cost = |a: usize, b: usize| &table[a * py.len() + b];
    let best = rels
        .par_iter()
        .map(|r| {
            let mut worst = Ext::Fin(Rat::zero());
            for &(x1, y1) in r {
                for &(x2, y2) in r {
                    let c = cost(idx(x1, x2), idx(y1, y2));
                    if *c > worst {
                        worst = c.clone();
                    }
                }
            }
            worst
        })
        .min()
        .expect("a correspondence exists");
    Ok(best)
}
