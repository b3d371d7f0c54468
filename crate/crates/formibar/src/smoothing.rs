//! ε-smoothing of dynamic graphs and formigrams, and the window union and
//! coarsening primitives it is built from.

use crate::base::{
    validate, Digraph, DynamicDigraph, DynamicGraph, Formigram, Graph, Interval, Rat, Snapshot,
    SubPartition, Timeline,
};
use crate::error::{Error, Result};

fn combine<V: Snapshot>(
    t: &Timeline<V>,
    levels: std::ops::RangeInclusive<usize>,
    join: &impl Fn(&[&V]) -> V,
) -> V {
    let vals: Vec<&V> = levels.map(|l| t.level(l)).collect();
    join(&vals)
}

fn graph_union(vals: &[&Graph]) -> Graph {
    let mut g = vals[0].clone();
    for v in &vals[1..] {
        g.union_with(v);
    }
    g
}

fn digraph_union(vals: &[&Digraph]) -> Digraph {
    let mut g = vals[0].clone();
    for v in &vals[1..] {
        g.union_with(v);
    }
    g
}

fn partition_join(vals: &[&SubPartition]) -> SubPartition {
    SubPartition::join_all(vals.iter().copied()).expect("levels share a universe")
}

/// Replace the value at every `t` by the join over `[t-eps, t+eps]`. The
/// result can only change at `c ± eps` for critical `c`, so sampling there
/// and in between is exact.
fn smooth<V: Snapshot>(
    t: &Timeline<V>,
    eps: &Rat,
    join: impl Fn(&[&V]) -> V,
) -> Result<Timeline<V>> {
    if eps.is_negative() {
        return Err(Error::Invalid(format!(
            "negative smoothing parameter {eps}"
        )));
    }
    validate(t).into_result()?;
    if eps.is_zero() {
        return Ok(t.clone());
    }
    let cands: Vec<Rat> = t.crit().iter().flat_map(|c| [c - eps, c + eps]).collect();
    Ok(Timeline::from_fn(&cands, |s| {
        combine(t, t.levels_in_window(s, eps), &join)
    }))
}

/// Union of all snapshots whose support meets `iv`.
pub fn union_over_interval(g: &DynamicGraph, iv: &Interval) -> Graph {
    combine(g, g.levels_meeting(iv), &graph_union)
}

/// Union of all snapshots whose support meets `iv`.
pub fn union_over_interval_digraph(g: &DynamicDigraph, iv: &Interval) -> Digraph {
    combine(g, g.levels_meeting(iv), &digraph_union)
}

/// Finest common coarsening of all values whose support meets `iv`.
pub fn coarsen_over_interval(theta: &Formigram, iv: &Interval) -> SubPartition {
    combine(theta, theta.levels_meeting(iv), &partition_join)
}

pub fn smooth_dg(g: &DynamicGraph, eps: &Rat) -> Result<DynamicGraph> {
    smooth(g, eps, graph_union)
}

pub fn smooth_ddg(g: &DynamicDigraph, eps: &Rat) -> Result<DynamicDigraph> {
    smooth(g, eps, digraph_union)
}

pub fn smooth_formigram(theta: &Formigram, eps: &Rat) -> Result<Formigram> {
    smooth(theta, eps, partition_join)
}
