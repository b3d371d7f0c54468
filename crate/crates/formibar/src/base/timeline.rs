//! Piecewise-constant timelines with finitely many critical times.

use std::fmt;

use super::graph::{Digraph, Graph};
use super::interval::Interval;
use super::partition::SubPartition;
use super::rat::{Ext, Rat};
use super::universe::{Elem, Universe};
use crate::error::{Error, Result};

/// Values that can live on a timeline.
pub trait Snapshot: Clone + PartialEq + fmt::Debug {
    fn universe(&self) -> &Universe;
    /// The comparability order: a gap value must be `leq` its adjacent critical values.
    fn leq(&self, other: &Self) -> bool;
    fn has_elem(&self, x: Elem) -> bool;
    /// Violations local to one snapshot (for example missing self-loops).
    fn local_violations(&self) -> Vec<String> {
        Vec::new()
    }
}

impl Snapshot for SubPartition {
    fn universe(&self) -> &Universe {
        SubPartition::universe(self)
    }
    fn leq(&self, other: &Self) -> bool {
        self.refines(other).unwrap_or(false)
    }
    fn has_elem(&self, x: Elem) -> bool {
        self.contains(x)
    }
}

impl Snapshot for Graph {
    fn universe(&self) -> &Universe {
        Graph::universe(self)
    }
    fn leq(&self, other: &Self) -> bool {
        self.is_subgraph_of(other)
    }
    fn has_elem(&self, x: Elem) -> bool {
        self.vertices().contains(&x)
    }
    fn local_violations(&self) -> Vec<String> {
        self.missing_loops()
            .into_iter()
            .map(|v| format!("vertex `{}` lacks its self-loop", self.universe().name(v)))
            .collect()
    }
}

impl Snapshot for Digraph {
    fn universe(&self) -> &Universe {
        Digraph::universe(self)
    }
    fn leq(&self, other: &Self) -> bool {
        self.is_subgraph_of(other)
    }
    fn has_elem(&self, x: Elem) -> bool {
        self.vertices().contains(&x)
    }
    fn local_violations(&self) -> Vec<String> {
        self.missing_loops()
            .into_iter()
            .map(|v| format!("vertex `{}` lacks its self-loop", self.universe().name(v)))
            .collect()
    }
}

/// Where a level sits on the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Open interval before `crit[i]` (and after `crit[i-1]`); `Gap(n)` is the right tail.
    Gap(usize),
    /// The critical time `crit[i]`.
    Crit(usize),
}

/// A function of time given by critical times, their values, and the constant
/// values on the open gaps between them. `gaps[0]` is the left tail and
/// `gaps[n]` the right tail, so there are `2n+1` levels.
#[derive(Clone, PartialEq, Eq)]
pub struct Timeline<V> {
    crit: Vec<Rat>,
    at_crit: Vec<V>,
    gaps: Vec<V>,
}

pub type DynamicGraph = Timeline<Graph>;
pub type DynamicDigraph = Timeline<Digraph>;
pub type Formigram = Timeline<SubPartition>;

impl<V> Timeline<V> {
    /// Checks only the shape; use [`crate::validate`] for the semantic invariants.
    pub fn new(crit: Vec<Rat>, at_crit: Vec<V>, gaps: Vec<V>) -> Result<Timeline<V>> {
        if at_crit.len() != crit.len() || gaps.len() != crit.len() + 1 {
            return Err(Error::Invalid(format!(
                "timeline shape: {} critical times, {} critical values, {} gap values (need n, n, n+1)",
                crit.len(),
                at_crit.len(),
                gaps.len()
            )));
        }
        Ok(Timeline {
            crit,
            at_crit,
            gaps,
        })
    }

    pub fn constant(v: V) -> Timeline<V> {
        Timeline {
            crit: Vec::new(),
            at_crit: Vec::new(),
            gaps: vec![v],
        }
    }

    pub fn crit(&self) -> &[Rat] {
        &self.crit
    }

    pub fn at_crit(&self) -> &[V] {
        &self.at_crit
    }

    /// Gap values, tails included.
    pub fn gaps(&self) -> &[V] {
        &self.gaps
    }

    pub fn left_tail(&self) -> &V {
        &self.gaps[0]
    }

    pub fn right_tail(&self) -> &V {
        self.gaps.last().expect("at least one gap")
    }

    pub fn num_levels(&self) -> usize {
        2 * self.crit.len() + 1
    }

    pub fn level_kind(&self, l: usize) -> Level {
        if l.is_multiple_of(2) {
            Level::Gap(l / 2)
        } else {
            Level::Crit(l / 2)
        }
    }

    pub fn level(&self, l: usize) -> &V {
        match self.level_kind(l) {
            Level::Gap(i) => &self.gaps[i],
            Level::Crit(i) => &self.at_crit[i],
        }
    }

    pub fn levels(&self) -> impl Iterator<Item = &V> {
        (0..self.num_levels()).map(move |l| self.level(l))
    }

    /// The level whose support contains `t`.
    pub fn level_at(&self, t: &Rat) -> usize {
        match self.crit.binary_search(t) {
            Ok(i) => 2 * i + 1,
            Err(i) => 2 * i,
        }
    }

    pub fn value_at(&self, t: &Rat) -> &V {
        self.level(self.level_at(t))
    }

    /// A representative time for every level: the critical time itself, gap
    /// midpoints, and points one unit beyond the extreme critical times.
    pub fn sample_time(&self, l: usize) -> Rat {
        let n = self.crit.len();
        match self.level_kind(l) {
            Level::Crit(i) => self.crit[i].clone(),
            Level::Gap(_) if n == 0 => Rat::zero(),
            Level::Gap(0) => &self.crit[0] - Rat::one(),
            Level::Gap(i) if i == n => &self.crit[n - 1] + Rat::one(),
            Level::Gap(i) => self.crit[i - 1].midpoint(&self.crit[i]),
        }
    }

    /// Open support `(a, b)` of gap `i`.
    pub fn gap_bounds(&self, i: usize) -> (Ext, Ext) {
        let a = if i == 0 {
            Ext::NegInf
        } else {
            Ext::Fin(self.crit[i - 1].clone())
        };
        let b = if i == self.crit.len() {
            Ext::PosInf
        } else {
            Ext::Fin(self.crit[i].clone())
        };
        (a, b)
    }

    /// Whether the support of level `l` meets the interval.
    pub fn level_meets(&self, l: usize, iv: &Interval) -> bool {
        match self.level_kind(l) {
            Level::Crit(i) => iv.contains(&self.crit[i]),
            Level::Gap(i) => {
                let (a, b) = self.gap_bounds(i);
                let lo = std::cmp::max(&a, &iv.left);
                let hi = std::cmp::min(&b, &iv.right);
                if lo < hi {
                    true
                } else if lo == hi {
                    match lo {
                        Ext::Fin(v) => a < *v && b > *v && iv.contains(v),
                        _ => false,
                    }
                } else {
                    false
                }
            }
        }
    }

    /// Levels whose supports meet `iv`, a contiguous range.
    pub fn levels_meeting(&self, iv: &Interval) -> std::ops::RangeInclusive<usize> {
        let hits: Vec<usize> = (0..self.num_levels())
            .filter(|&l| self.level_meets(l, iv))
            .collect();
        let lo = *hits.first().expect("nonempty interval meets some level");
        let hi = *hits.last().expect("nonempty interval meets some level");
        lo..=hi
    }

    /// Levels whose supports meet the closed window `[t-eps, t+eps]`.
    pub fn levels_in_window(&self, t: &Rat, eps: &Rat) -> std::ops::RangeInclusive<usize> {
        let lo = self.level_at(&(t - eps));
        let hi = self.level_at(&(t + eps));
        lo..=hi
    }

    pub fn map<W, F: FnMut(&V) -> W>(&self, mut f: F) -> Timeline<W> {
        Timeline {
            crit: self.crit.clone(),
            at_crit: self.at_crit.iter().map(&mut f).collect(),
            gaps: self.gaps.iter().map(&mut f).collect(),
        }
    }

    pub fn try_map<W, F: FnMut(&V) -> Result<W>>(&self, mut f: F) -> Result<Timeline<W>> {
        Ok(Timeline {
            crit: self.crit.clone(),
            at_crit: self.at_crit.iter().map(&mut f).collect::<Result<_>>()?,
            gaps: self.gaps.iter().map(&mut f).collect::<Result<_>>()?,
        })
    }
}

impl<V: Clone + PartialEq> Timeline<V> {
    /// Build by sampling `f` at the sorted candidate times, at each gap midpoint,
    /// and beyond both ends, then pruning. Exact whenever every discontinuity
    /// of the sampled function is a candidate.
    pub fn from_fn<F: FnMut(&Rat) -> V>(candidates: &[Rat], mut f: F) -> Timeline<V> {
        let mut cand = candidates.to_vec();
        cand.sort();
        cand.dedup();
        let proto: Timeline<V> = Timeline {
            crit: cand,
            at_crit: Vec::new(),
            gaps: Vec::new(),
        };
        let n = proto.crit.len();
        let mut at_crit = Vec::with_capacity(n);
        let mut gaps = Vec::with_capacity(n + 1);
        for l in 0..2 * n + 1 {
            let v = f(&proto.sample_time(l));
            if l % 2 == 0 {
                gaps.push(v);
            } else {
                at_crit.push(v);
            }
        }
        Timeline {
            crit: proto.crit,
            at_crit,
            gaps,
        }
        .pruned()
    }

    /// Drop critical times whose value equals both neighbouring gap values.
    pub fn pruned(&self) -> Timeline<V> {
        let mut crit = Vec::new();
        let mut at_crit = Vec::new();
        let mut gaps = vec![self.gaps[0].clone()];
        for i in 0..self.crit.len() {
            let keep = !(self.at_crit[i] == self.gaps[i] && self.at_crit[i] == self.gaps[i + 1]);
            if keep {
                crit.push(self.crit[i].clone());
                at_crit.push(self.at_crit[i].clone());
                gaps.push(self.gaps[i + 1].clone());
            }
        }
        Timeline {
            crit,
            at_crit,
            gaps,
        }
    }

    /// Insert extra non-critical times, duplicating the gap value there.
    pub fn refined(&self, extra: &[Rat]) -> Timeline<V> {
        let mut all = self.crit.clone();
        all.extend(extra.iter().cloned());
        Timeline::from_fn_unpruned(&all, |t| self.value_at(t).clone(), self)
    }

    fn from_fn_unpruned<F: FnMut(&Rat) -> V>(
        cands: &[Rat],
        mut f: F,
        src: &Timeline<V>,
    ) -> Timeline<V> {
        let mut crit = cands.to_vec();
        crit.sort();
        crit.dedup();
        let at_crit = crit.iter().map(&mut f).collect();
        let mut gaps = Vec::with_capacity(crit.len() + 1);
        for i in 0..=crit.len() {
            let t = if i == 0 {
                // left tail
                src.left_tail().clone()
            } else if i == crit.len() {
                src.right_tail().clone()
            } else {
                f(&crit[i - 1].midpoint(&crit[i]))
            };
            gaps.push(t);
        }
        Timeline {
            crit,
            at_crit,
            gaps,
        }
    }

    /// Same function of time, ignoring redundant critical times.
    pub fn same_function(&self, other: &Timeline<V>) -> bool {
        self.pruned() == other.pruned()
    }
}

impl<V: Snapshot> Timeline<V> {
    pub fn universe(&self) -> &Universe {
        self.gaps[0].universe()
    }
}

impl<V: fmt::Debug> fmt::Debug for Timeline<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Timeline[ {:?}", self.gaps[0])?;
        for i in 0..self.crit.len() {
            write!(
                f,
                " | @{}: {:?} | {:?}",
                self.crit[i],
                self.at_crit[i],
                self.gaps[i + 1]
            )?;
        }
        write!(f, " ]")
    }
}

/// Sorted union of two critical-time lists.
pub fn merge_times(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut v: Vec<Rat> = a.iter().chain(b.iter()).cloned().collect();
    v.sort();
    v.dedup();
    v
}
