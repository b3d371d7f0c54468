use std::fmt;

use super::dsu::Dsu;
use super::universe::{Elem, Universe};
use crate::error::{Error, Result};

/// A partition of a subset of the universe. Blocks are sorted id lists, and
/// the block list is sorted by smallest element.
#[derive(Clone, PartialEq, Eq)]
pub struct SubPartition {
    universe: Universe,
    blocks: Vec<Vec<Elem>>,
}

impl SubPartition {
    pub fn new(universe: Universe, blocks: Vec<Vec<Elem>>) -> Result<SubPartition> {
        let mut seen = vec![false; universe.len()];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::Invalid("empty block in sub-partition".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                let slot = seen
                    .get_mut(x as usize)
                    .ok_or_else(|| Error::UnknownElement(format!("#{x}")))?;
                if *slot {
                    return Err(Error::Invalid(format!(
                        "element `{}` appears in two blocks",
                        universe.name(x)
                    )));
                }
                *slot = true;
            }
        }
        blocks.sort_unstable();
        Ok(SubPartition { universe, blocks })
    }

    /// Build from blocks of string ids.
    pub fn from_ids<B, S>(universe: &Universe, blocks: B) -> Result<SubPartition>
    where
        B: IntoIterator,
        B::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let blocks = blocks
            .into_iter()
            .map(|b| {
                b.into_iter()
                    .map(|s| universe.elem(s.as_ref()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SubPartition::new(universe.clone(), blocks)
    }

    /// Build from a per-element block label; `None` marks absent elements.
    pub fn from_labels(universe: Universe, labels: &[Option<usize>]) -> SubPartition {
        let mut groups: std::collections::BTreeMap<usize, Vec<Elem>> = Default::default();
        for (x, l) in labels.iter().enumerate() {
            if let Some(l) = l {
                groups.entry(*l).or_default().push(x as Elem);
            }
        }
        let mut blocks: Vec<Vec<Elem>> = groups.into_values().collect();
        blocks.sort_unstable();
        SubPartition { universe, blocks }
    }

    pub fn empty(universe: Universe) -> SubPartition {
        SubPartition {
            universe,
            blocks: Vec::new(),
        }
    }

    /// The partition of the whole universe into one block (or empty if the universe is).
    pub fn single_block(universe: Universe) -> SubPartition {
        let all: Vec<Elem> = universe.elems().collect();
        let blocks = if all.is_empty() { vec![] } else { vec![all] };
        SubPartition { universe, blocks }
    }

    pub fn discrete(universe: Universe) -> SubPartition {
        let blocks = universe.elems().map(|x| vec![x]).collect();
        SubPartition { universe, blocks }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn blocks(&self) -> &[Vec<Elem>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn underlying(&self) -> Vec<Elem> {
        let mut u: Vec<Elem> = self.blocks.iter().flatten().copied().collect();
        u.sort_unstable();
        u
    }

    pub fn is_full(&self) -> bool {
        self.blocks.iter().map(Vec::len).sum::<usize>() == self.universe.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.block_of(x).is_some()
    }

    pub fn block_of(&self, x: Elem) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }

    /// Block index per element, `None` when absent.
    pub fn labels(&self) -> Vec<Option<usize>> {
        let mut l = vec![None; self.universe.len()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                l[x as usize] = Some(i);
            }
        }
        l
    }

    /// Whether every block of `self` lies inside some block of `other`.
    pub fn refines(&self, other: &SubPartition) -> Result<bool> {
        self.universe.check_same(&other.universe)?;
        let lab = other.labels();
        Ok(self.blocks.iter().all(|b| {
            let first = lab[b[0] as usize];
            first.is_some() && b.iter().all(|&x| lab[x as usize] == first)
        }))
    }

    /// The block map sending each block of `self` to the block of `other` containing it.
    pub fn canonical_map(&self, other: &SubPartition) -> Result<Vec<usize>> {
        if !self.refines(other)? {
            return Err(Error::Precondition(format!(
                "{self} does not refine {other}"
            )));
        }
        let lab = other.labels();
        Ok(self
            .blocks
            .iter()
            .map(|b| lab[b[0] as usize].expect("refinement checked"))
            .collect())
    }

    /// Finest common coarsening of a nonempty family.
    pub fn join_all<'a, I>(parts: I) -> Result<SubPartition>
    where
        I: IntoIterator<Item = &'a SubPartition>,
    {
        let mut iter = parts.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Precondition("empty family".into()))?;
        let n = first.universe.len();
        let mut dsu = Dsu::new(n);
        let mut present = vec![false; n];
        let mut absorb = |p: &SubPartition| {
            for b in &p.blocks {
                for &x in b {
                    present[x as usize] = true;
                    dsu.union(b[0] as usize, x as usize);
                }
            }
        };
        absorb(first);
        for p in iter {
            first.universe.check_same(&p.universe)?;
            absorb(p);
        }
        let labels: Vec<Option<usize>> = (0..n).map(|x| present[x].then(|| dsu.find(x))).collect();
        Ok(SubPartition::from_labels(first.universe.clone(), &labels))
    }

    pub fn join(&self, other: &SubPartition) -> Result<SubPartition> {
        SubPartition::join_all([self, other])
    }

    pub fn block_names(&self) -> Vec<Vec<String>> {
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&x| self.universe.name(x).to_string())
                    .collect()
            })
            .collect()
    }
}

pub(crate) fn fmt_block(u: &Universe, b: &[Elem], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{{")?;
    for (i, &x) in b.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{}", u.name(x))?;
    }
    write!(f, "}}")
}

pub fn block_label(u: &Universe, b: &[Elem]) -> String {
    let names: Vec<&str> = b.iter().map(|&x| u.name(x)).collect();
    format!("{{{}}}", names.join(","))
}

impl fmt::Display for SubPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            fmt_block(&self.universe, b, f)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SubPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
