//! Bottleneck distance, exact interleaving distances at small sizes,
//! Gromov–Hausdorff distance and the dendrogram/ultrametric bridge.

mod dms_exact;

pub use dms_exact::{interleaving_dms_exact, interleaving_dms_exact_with, pair_slack};

use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;
use rayon::prelude::*;

use crate::base::{
    covering_relations, validate, Barcode, Digraph, Dist, DynamicDigraph, DynamicGraph, Elem, Ext,
    Formigram, Graph, Interval, Rat, Snapshot, SubPartition, Timeline, Universe,
};
use crate::dms::FiniteMetric;
use crate::error::{Error, Result};
use crate::smoothing::{smooth_ddg, smooth_dg, smooth_formigram};

/// Default bound on `|X|·|Y|` for the exact interleaving distances.
pub const DEFAULT_SIZE_BOUND: usize = 12;

/// Largest space size for [`gromov_hausdorff_exact`].
pub const GH_MAX_POINTS: usize = 5;

/// The bound in effect: `FORMIBAR_SIZE_BOUND` if set to a number, else the default.
pub fn size_bound() -> usize {
    std::env::var("FORMIBAR_SIZE_BOUND")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_BOUND)
}

pub(crate) fn check_size(x: &Universe, y: &Universe, bound: usize) -> Result<()> {
    let p = x.len() * y.len();
    if p > bound {
        return Err(Error::SizeBound(format!(
            "{} x {} points exceeds the bound {bound} on |X|·|Y|",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

/// Sorted, deduplicated nonnegative values.
fn sorted_candidates(mut v: Vec<Rat>) -> Vec<Rat> {
    v.retain(|x| !x.is_negative());
    v.push(Rat::zero());
    v.sort();
    v.dedup();
    v
}

/// The first point of `c_0, m_0, c_1, m_1, …, c_K, c_K + 1` (with `m_k` the
/// midpoint of `c_k` and `c_{k+1}`) where the monotone `ok` holds, reported
/// as the candidate `c_k` at or just before it; `+inf` if none.
fn first_feasible(cands: &[Rat], ok: impl Fn(&Rat) -> bool) -> Dist {
    let k = cands.len();
    let point = |i: usize| -> Rat {
        let c = &cands[i / 2];
        if i.is_multiple_of(2) {
            c.clone()
        } else if i / 2 + 1 < k {
            c.midpoint(&cands[i / 2 + 1])
        } else {
            c + &Rat::one()
        }
    };
    let (mut lo, mut hi) = (0, 2 * k);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(&point(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if lo == 2 * k {
        Ext::PosInf
    } else {
        Ext::Fin(cands[lo / 2].clone())
    }
}

fn has_long(iv: &Interval, two_delta: &Rat) -> bool {
    iv.left.shift(two_delta) < iv.right
}

fn close(a: &Interval, b: &Interval, delta: &Rat) -> bool {
    a.is_subset_of(&b.widened(delta)) && b.is_subset_of(&a.widened(delta))
}

/// Whether a δ-matching exists: a perfect matching in the graph where each
/// bar can pair with a close bar of the other side or, if short, with its own
/// dummy; dummies pair freely among themselves.
fn matching_exists(a: &[Interval], b: &[Interval], delta: &Rat) -> bool {
    let (na, nb) = (a.len(), b.len());
    let two = delta + delta;
    let mut g: UnGraph<(), ()> = UnGraph::with_capacity(2 * (na + nb), 0);
    let nodes: Vec<_> = (0..2 * (na + nb)).map(|_| g.add_node(())).collect();
    let (a_bar, b_dummy, b_bar, a_dummy) = (0, na, na + nb, na + 2 * nb);
    for i in 0..na {
        let long = has_long(&a[i], &two);
        if !long {
            g.add_edge(nodes[a_bar + i], nodes[a_dummy + i], ());
        }
        for j in 0..nb {
            if close(&a[i], &b[j], delta) {
                g.add_edge(nodes[a_bar + i], nodes[b_bar + j], ());
            }
        }
    }
    for j in 0..nb {
        if !has_long(&b[j], &two) {
            g.add_edge(nodes[b_dummy + j], nodes[b_bar + j], ());
        }
        for i in 0..na {
            g.add_edge(nodes[b_dummy + j], nodes[a_dummy + i], ());
        }
    }
    maximum_matching(&g).is_perfect()
}

/// Bottleneck distance. Feasibility only changes where an endpoint
/// difference or a half-length is crossed, so those values and the cells
/// between them are searched.
pub fn bottleneck(a: &Barcode, b: &Barcode) -> Dist {
    let (ai, bi) = (a.intervals(), b.intervals());
    let mut cands = Vec::new();
    for x in ai {
        for y in bi {
            if let (Some(p), Some(q)) = (x.left.fin(), y.left.fin()) {
                cands.push((p - q).abs());
            }
            if let (Some(p), Some(q)) = (x.right.fin(), y.right.fin()) {
                cands.push((p - q).abs());
            }
        }
    }
    for iv in ai.iter().chain(bi) {
        if let Ext::Fin(l) = iv.length() {
            cands.push(l.half());
        }
    }
    let cands = sorted_candidates(cands);
    first_feasible(&cands, |d| matching_exists(ai, bi, d))
}

/// Half the bottleneck distance: a lower bound for the interleaving distance of
/// the dynamic graphs, digraphs (after clustering) or metric spaces the
/// barcodes come from.
pub fn stability_lower_bound(a: &Barcode, b: &Barcode) -> Dist {
    match bottleneck(a, b) {
        Ext::Fin(r) => Ext::Fin(r.half()),
        other => other,
    }
}

/// Snapshots that the exact interleaving search can compare.
pub trait Interleave: Snapshot + Sync + Send {
    fn smooth(t: &Timeline<Self>, eps: &Rat) -> Result<Timeline<Self>>;
    /// Whether `self` is carried into `other` by the relation, given as the
    /// list of partners of each element.
    fn maps_into(&self, other: &Self, partners: &[Vec<Elem>]) -> bool;
}

impl Interleave for SubPartition {
    fn smooth(t: &Timeline<Self>, eps: &Rat) -> Result<Timeline<Self>> {
        smooth_formigram(t, eps)
    }

    fn maps_into(&self, other: &Self, partners: &[Vec<Elem>]) -> bool {
        self.blocks().iter().all(|blk| {
            let mut target = None;
            blk.iter().flat_map(|&x| &partners[x as usize]).all(|&y| {
                match (other.block_of(y), target) {
                    (None, _) => false,
                    (Some(b), None) => {
                        target = Some(b);
                        true
                    }
                    (Some(b), Some(t)) => b == t,
                }
            })
        })
    }
}

impl Interleave for Graph {
    fn smooth(t: &Timeline<Self>, eps: &Rat) -> Result<Timeline<Self>> {
        smooth_dg(t, eps)
    }

    fn maps_into(&self, other: &Self, partners: &[Vec<Elem>]) -> bool {
        self.vertices().iter().all(|&x| {
            partners[x as usize]
                .iter()
                .all(|y| other.vertices().contains(y))
        }) && self.edges().iter().all(|&(a, b)| {
            partners[a as usize]
                .iter()
                .all(|&p| partners[b as usize].iter().all(|&q| other.has_edge(p, q)))
        })
    }
}

impl Interleave for Digraph {
    fn smooth(t: &Timeline<Self>, eps: &Rat) -> Result<Timeline<Self>> {
        smooth_ddg(t, eps)
    }

    fn maps_into(&self, other: &Self, partners: &[Vec<Elem>]) -> bool {
        self.vertices().iter().all(|&x| {
            partners[x as usize]
                .iter()
                .all(|y| other.vertices().contains(y))
        }) && self.arcs().iter().all(|&(a, b)| {
            partners[a as usize]
                .iter()
                .all(|&p| partners[b as usize].iter().all(|&q| other.has_arc(p, q)))
        })
    }
}

fn partners(rel: &[(Elem, Elem)], m: usize, flip: bool) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new(); m];
    for &(x, y) in rel {
        let (a, b) = if flip { (y, x) } else { (x, y) };
        out[a as usize].push(b);
    }
    out
}

/// Critical times of all the timelines, plus a sample inside every gap.
fn sample_times<V>(ts: &[&Timeline<V>]) -> Vec<Rat> {
    let mut crit: Vec<Rat> = ts.iter().flat_map(|t| t.crit().iter().cloned()).collect();
    crit.sort();
    crit.dedup();
    let mut out = Vec::with_capacity(2 * crit.len() + 1);
    match (crit.first(), crit.last()) {
        (Some(a), Some(_)) => out.push(a - &Rat::one()),
        _ => out.push(Rat::zero()),
    }
    for (i, c) in crit.iter().enumerate() {
        out.push(c.clone());
        out.push(match crit.get(i + 1) {
            Some(d) => c.midpoint(d),
            None => c + &Rat::one(),
        });
    }
    out
}

fn interleaving_exact<V: Interleave>(
    x: &Timeline<V>,
    y: &Timeline<V>,
    bound: usize,
) -> Result<Dist> {
    validate(x).into_result()?;
    validate(y).into_result()?;
    let (ux, uy) = (x.universe().clone(), y.universe().clone());
    check_size(&ux, &uy, bound)?;
    let (m, n) = (ux.len(), uy.len());
    let rels = covering_relations(m, n);
    if rels.is_empty() {
        return Ok(Ext::PosInf);
    }
    let fwd: Vec<Vec<Vec<Elem>>> = rels.iter().map(|r| partners(r, m, false)).collect();
    let bwd: Vec<Vec<Vec<Elem>>> = rels.iter().map(|r| partners(r, n, true)).collect();
    // Feasibility is monotone in ε, and it can only change when an event of one
    // side meets a shifted event of the other (ε = |a - b|) or two shifted
    // events of one side meet (ε = |a - b| / 2). Between such values nothing
    // changes, and since smoothing uses closed windows the feasible set is closed.
    let mut times: Vec<Rat> = x.crit().iter().chain(y.crit()).cloned().collect();
    times.sort();
    times.dedup();
    let mut cands = Vec::new();
    for (i, a) in times.iter().enumerate() {
        for b in &times[i + 1..] {
            let d = b - a;
            cands.push(d.half());
            cands.push(d);
        }
    }
    let cands = sorted_candidates(cands);
    let err: std::sync::Mutex<Option<Error>> = std::sync::Mutex::new(None);
    let ok = |eps: &Rat| -> bool {
        let (sx, sy) = match (V::smooth(x, eps), V::smooth(y, eps)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                *err.lock().expect("lock") = Some(e);
                return false;
            }
        };
        let samples = sample_times(&[x, y, &sx, &sy]);
        let vals: Vec<[&V; 4]> = samples
            .iter()
            .map(|t| [x.value_at(t), y.value_at(t), sx.value_at(t), sy.value_at(t)])
            .collect();
        (0..rels.len()).into_par_iter().any(|r| {
            vals.iter()
                .all(|[vx, vy, svx, svy]| vx.maps_into(svy, &fwd[r]) && vy.maps_into(svx, &bwd[r]))
        })
    };
    let d = first_feasible(&cands, ok);
    if let Some(e) = err.into_inner().expect("lock") {
        return Err(e);
    }
    Ok(d)
}

pub fn interleaving_formigram_exact(a: &Formigram, b: &Formigram) -> Result<Dist> {
    interleaving_formigram_exact_with(a, b, size_bound())
}

pub fn interleaving_formigram_exact_with(
    a: &Formigram,
    b: &Formigram,
    bound: usize,
) -> Result<Dist> {
    interleaving_exact(a, b, bound)
}

pub fn interleaving_dg_exact(a: &DynamicGraph, b: &DynamicGraph) -> Result<Dist> {
    interleaving_dg_exact_with(a, b, size_bound())
}

pub fn interleaving_dg_exact_with(
    a: &DynamicGraph,
    b: &DynamicGraph,
    bound: usize,
) -> Result<Dist> {
    interleaving_exact(a, b, bound)
}

pub fn interleaving_ddg_exact(a: &DynamicDigraph, b: &DynamicDigraph) -> Result<Dist> {
    interleaving_ddg_exact_with(a, b, size_bound())
}

pub fn interleaving_ddg_exact_with(
    a: &DynamicDigraph,
    b: &DynamicDigraph,
    bound: usize,
) -> Result<Dist> {
    interleaving_exact(a, b, bound)
}

/// Half the least distortion of a correspondence.
pub fn gromov_hausdorff_exact(a: &FiniteMetric, b: &FiniteMetric) -> Result<Rat> {
    if a.len() > GH_MAX_POINTS || b.len() > GH_MAX_POINTS {
        return Err(Error::SizeBound(format!(
            "Gromov-Hausdorff search supports at most {GH_MAX_POINTS} points per space, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("metric spaces must be nonempty".into()));
    }
    let best = covering_relations(a.len(), b.len())
        .par_iter()
        .map(|r| {
            let mut worst = Rat::zero();
            for &(x, y) in r {
                for &(x2, y2) in r {
                    let d = (a.dist(x, x2) - b.dist(y, y2)).abs();
                    if d > worst {
                        worst = d;
                    }
                }
            }
            worst
        })
        .min()
        .expect("a correspondence exists");
    Ok(best.half())
}

/// The ultrametric of a dendrogram: `u(x, x')` is the first time `x` and `x'`
/// share a block. A dendrogram here is empty before 0, a partition of the
/// whole set from 0 on, coarsening and right-continuous, and one block at the end.
pub fn dendrogram_ultrametric(theta: &Formigram) -> Result<FiniteMetric> {
    validate(theta).into_result()?;
    let u = theta.universe().clone();
    let not = |why: &str| Err(Error::Precondition(format!("not a dendrogram: {why}")));
    if u.is_empty() {
        return not("empty set");
    }
    if !theta.left_tail().is_empty() || theta.crit().first() != Some(&Rat::zero()) {
        return not("must be empty before time 0 and start at 0");
    }
    if !theta.at_crit()[0].is_full() {
        return not("every point must be present from time 0");
    }
    for i in 0..theta.crit().len() {
        if theta.at_crit()[i] != theta.gaps()[i + 1] {
            return not("not right-continuous");
        }
    }
    for l in 1..theta.num_levels() - 1 {
        if !theta.level(l).refines(theta.level(l + 1))? {
            return not("a block splits over time");
        }
    }
    let last = theta.right_tail();
    if last.len() != 1 || !last.is_full() {
        return not("does not end in a single block");
    }
    let n = u.len();
    let mut d: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
    for (t, p) in theta.crit().iter().zip(theta.at_crit()) {
        for blk in p.blocks() {
            for &a in blk {
                for &b in blk {
                    d[a as usize][b as usize].get_or_insert_with(|| t.clone());
                }
            }
        }
    }
    let d = d
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, v)| {
                    if i == j {
                        Rat::zero()
                    } else {
                        v.expect("single final block")
                    }
                })
                .collect()
        })
        .collect();
    FiniteMetric::new(u, d)
}

/// The dendrogram of an ultrametric: empty before 0, then the classes of
/// `u <= t` at each time `t >= 0`.
pub fn ultrametric_dendrogram(u: &FiniteMetric) -> Result<Formigram> {
    if !u.is_ultrametric() {
        return Err(Error::Invalid("not an ultrametric".into()));
    }
    let univ = u.universe().clone();
    let n = u.len();
    let mut cands = vec![Rat::zero()];
    cands.extend(u.matrix().iter().flatten().cloned());
    Ok(Timeline::from_fn(&cands, |t| {
        if t.is_negative() {
            return SubPartition::empty(univ.clone());
        }
        let mut labels: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            if labels[i].is_none() {
                for j in i..n {
                    if u.dist(i as Elem, j as Elem) <= t {
                        labels[j] = Some(i);
                    }
                }
            }
        }
        SubPartition::from_labels(univ.clone(), &labels)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc(s: &str) -> Barcode {
        Barcode::parse_list(s).unwrap()
    }

    #[test]
    fn bottleneck_basics() {
        assert_eq!(
            bottleneck(&bc("(0,4)"), &bc("(0,4)")),
            Ext::Fin(Rat::zero())
        );
        assert_eq!(bottleneck(&bc("(0,4)"), &bc("(1,4)")), Ext::Fin(Rat::one()));
        assert_eq!(bottleneck(&bc("(0,4)"), &bc("")), Ext::Fin(Rat::int(2)));
        assert_eq!(bottleneck(&bc("(-inf,inf)"), &bc("")), Ext::PosInf);
        assert_eq!(
            bottleneck(&bc("(-inf,inf) (-inf,inf)"), &bc("(-inf,inf)")),
            Ext::PosInf
        );
        assert_eq!(bottleneck(&bc("[2,2]"), &bc("")), Ext::Fin(Rat::zero()));
    }

    #[test]
    fn gh_two_points() {
        let a = FiniteMetric::from_rows(&["p", "q"], &[&[0, 3], &[3, 0]]).unwrap();
        let b = FiniteMetric::from_rows(&["p", "q"], &[&[0, 1], &[1, 0]]).unwrap();
        let c = FiniteMetric::from_rows(&["p"], &[&[0]]).unwrap();
        assert_eq!(gromov_hausdorff_exact(&a, &b).unwrap(), Rat::one());
        assert_eq!(gromov_hausdorff_exact(&a, &c).unwrap(), Rat::new(3, 2));
    }

    #[test]
    fn dendrogram_round_trip() {
        let u = FiniteMetric::from_rows(&["a", "b", "c"], &[&[0, 1, 2], &[1, 0, 2], &[2, 2, 0]])
            .unwrap();
        let t = ultrametric_dendrogram(&u).unwrap();
        assert_eq!(dendrogram_ultrametric(&t).unwrap(), u);
    }
}
