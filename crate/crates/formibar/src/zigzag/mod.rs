//! Zigzag diagrams of formigrams, their interval decomposition over F₂, and
//! the translation of level intervals into real intervals.

mod f2;
mod oracle;

pub use f2::{nullspace, Bits, Echelon};
pub use oracle::{rank_oracle_barcode, rank_oracle_linear, ORACLE_MAX_LEVELS};

use crate::base::{validate, Barcode, Elem, Ext, Formigram, Interval, Rat};
use crate::error::{Error, Result};

/// A map between neighbouring levels `l` and `l+1`. Forward maps go from `l`
/// to `l+1`, backward maps from `l+1` to `l`; `map[i]` is the image of element `i`
/// of the source level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetArrow {
    pub forward: bool,
    pub map: Vec<usize>,
}

/// A zigzag of finite sets and maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagSetDiagram {
    /// Block labels of each level, used only for display.
    pub levels: Vec<Vec<Vec<Elem>>>,
    pub arrows: Vec<SetArrow>,
}

/// A level range `[lo, hi]` of the zigzag, both ends inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZZInterval {
    pub lo: usize,
    pub hi: usize,
}

/// Linear maps given by columns: `cols[j]` is the image of basis vector `j` of the source.
#[derive(Clone, Debug)]
pub struct LinArrow {
    pub forward: bool,
    pub cols: Vec<Bits>,
}

/// A zigzag of F₂ vector spaces.
#[derive(Clone, Debug)]
pub struct LinearZigzag {
    pub dims: Vec<usize>,
    pub arrows: Vec<LinArrow>,
}

impl ZigzagSetDiagram {
    pub fn new(levels: Vec<Vec<Vec<Elem>>>, arrows: Vec<SetArrow>) -> Result<ZigzagSetDiagram> {
        if levels.is_empty() || arrows.len() + 1 != levels.len() {
            return Err(Error::Invalid(
                "zigzag needs n levels and n-1 arrows".into(),
            ));
        }
        for (l, a) in arrows.iter().enumerate() {
            let (src, dst) = if a.forward { (l, l + 1) } else { (l + 1, l) };
            if a.map.len() != levels[src].len() || a.map.iter().any(|&i| i >= levels[dst].len()) {
                return Err(Error::Invalid(format!("arrow {l} is not a total map")));
            }
        }
        Ok(ZigzagSetDiagram { levels, arrows })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Free F₂ vector spaces on the levels, basis-to-basis maps.
    pub fn linearize(&self) -> LinearZigzag {
        let dims = self.dims();
        let arrows = self
            .arrows
            .iter()
            .enumerate()
            .map(|(l, a)| {
                let dst = if a.forward { dims[l + 1] } else { dims[l] };
                LinArrow {
                    forward: a.forward,
                    cols: a.map.iter().map(|&i| Bits::unit(dst, i)).collect(),
                }
            })
            .collect();
        LinearZigzag { dims, arrows }
    }
}

/// Levels in time order: left tail, `c_1`, gap, `c_2`, …, right tail. Gap
/// levels map into both neighbouring critical levels.
pub fn formigram_to_diagram(theta: &Formigram) -> Result<ZigzagSetDiagram> {
    validate(theta).into_result()?;
    let levels: Vec<Vec<Vec<Elem>>> = theta.levels().map(|p| p.blocks().to_vec()).collect();
    let mut arrows = Vec::with_capacity(levels.len().saturating_sub(1));
    for l in 0..theta.num_levels() - 1 {
        let (gap, crit) = if l % 2 == 0 { (l, l + 1) } else { (l + 1, l) };
        let map = theta.level(gap).canonical_map(theta.level(crit))?;
        arrows.push(SetArrow {
            forward: l % 2 == 0,
            map,
        });
    }
    ZigzagSetDiagram::new(levels, arrows)
}

#[derive(Clone, Copy, Debug)]
struct Bar {
    birth: usize,
    forward_born: bool,
}

impl Bar {
    /// Bars may absorb bars of smaller key. Backward-born bars come first,
    /// later births first; forward-born bars follow, earlier births first.
    fn key(&self) -> (u8, i64) {
        if self.forward_born {
            (1, self.birth as i64)
        } else {
            (0, -(self.birth as i64))
        }
    }
}

/// Interval decomposition of a zigzag of F₂ vector spaces.
///
/// A basis of the current level is carried along, each vector tagged with the
/// bar it represents. Basis changes only add a bar to a bar of larger key,
/// which keeps the already-built part of the decomposition a valid direct sum.
pub fn decompose(m: &LinearZigzag) -> Vec<ZZInterval> {
    let n = m.dims.len();
    let mut out = Vec::new();
    let mut bars: Vec<Bar> = Vec::new();
    // alive bars with their basis vector in the current level
    let mut alive: Vec<(usize, Bits)> = Vec::new();
    for i in 0..m.dims[0] {
        bars.push(Bar {
            birth: 0,
            forward_born: true,
        });
        alive.push((bars.len() - 1, Bits::unit(m.dims[0], i)));
    }
    for k in 0..n - 1 {
        let arrow = &m.arrows[k];
        let dim_next = m.dims[k + 1];
        let mut next: Vec<(usize, Bits)> = Vec::new();
        alive.sort_by_key(|(b, _)| bars[*b].key());
        if arrow.forward {
            // image echelon, pivot = top bit
            let mut ech: Vec<Option<Bits>> = vec![None; dim_next];
            for (b, v) in &alive {
                let mut img = apply(&arrow.cols, v, dim_next);
                loop {
                    match img.top() {
                        None => {
                            out.push(ZZInterval {
                                lo: bars[*b].birth,
                                hi: k,
                            });
                            break;
                        }
                        Some(p) => match &ech[p] {
                            Some(r) => img.xor(r),
                            None => {
                                ech[p] = Some(img.clone());
                                next.push((*b, img));
                                break;
                            }
                        },
                    }
                }
            }
            for i in 0..dim_next {
                let mut e = Bits::unit(dim_next, i);
                while let Some(p) = e.top() {
                    match &ech[p] {
                        Some(r) => e.xor(r),
                        None => {
                            ech[p] = Some(e.clone());
                            bars.push(Bar {
                                birth: k + 1,
                                forward_born: true,
                            });
                            next.push((bars.len() - 1, Bits::unit(dim_next, i)));
                            break;
                        }
                    }
                }
            }
        } else {
            // coordinates of g(e) in the alive basis, indexed by key rank
            let r = alive.len();
            let dim_here = m.dims[k];
            let mut coord_ech: Vec<Option<(Bits, Bits)>> = vec![None; dim_here];
            for (rank, (_, v)) in alive.iter().enumerate() {
                let mut v = v.clone();
                let mut c = Bits::unit(r, rank);
                while let Some(p) = v.top() {
                    match &coord_ech[p] {
                        Some((rv, rc)) => {
                            v.xor(rv);
                            c.xor(rc);
                        }
                        None => {
                            coord_ech[p] = Some((v, c));
                            break;
                        }
                    }
                }
            }
            let coords = |mut w: Bits| -> Bits {
                let mut c = Bits::zeros(r);
                while let Some(p) = w.top() {
                    let (rv, rc) = coord_ech[p].as_ref().expect("alive vectors span the level");
                    w.xor(rv);
                    c.xor(rc);
                }
                c
            };
            let mut reduced: Vec<Option<(Bits, Bits)>> = vec![None; r];
            for e in 0..dim_next {
                let mut c = coords(arrow.cols[e].clone());
                let mut u = Bits::unit(dim_next, e);
                loop {
                    match c.top() {
                        None => {
                            bars.push(Bar {
                                birth: k + 1,
                                forward_born: false,
                            });
                            next.push((bars.len() - 1, u));
                            break;
                        }
                        Some(p) => match &reduced[p] {
                            Some((rc, ru)) => {
                                c.xor(rc);
                                u.xor(ru);
                            }
                            None => {
                                reduced[p] = Some((c, u));
                                break;
                            }
                        },
                    }
                }
            }
            for (rank, (b, _)) in alive.iter().enumerate() {
                match &reduced[rank] {
                    Some((_, u)) => next.push((*b, u.clone())),
                    None => out.push(ZZInterval {
                        lo: bars[*b].birth,
                        hi: k,
                    }),
                }
            }
        }
        alive = next;
    }
    for (b, _) in alive {
        out.push(ZZInterval {
            lo: bars[b].birth,
            hi: n - 1,
        });
    }
    out.sort();
    out
}

fn apply(cols: &[Bits], v: &Bits, dim: usize) -> Bits {
    let mut out = Bits::zeros(dim);
    for j in v.ones() {
        out.xor(&cols[j]);
    }
    out
}

/// Interval decomposition of the F₂-linearized set diagram.
pub fn zigzag_barcode_indices(d: &ZigzagSetDiagram) -> Vec<ZZInterval> {
    decompose(&d.linearize())
}

/// Translate a level interval of the chain over critical times `crit` into a
/// real interval: critical levels give closed ends, gap levels open ends at
/// the adjacent critical time, tails give infinite ends.
pub fn level_interval_to_real(iv: ZZInterval, crit: &[Rat]) -> Interval {
    let n = crit.len();
    let (left, lc) = if iv.lo == 0 {
        (Ext::NegInf, false)
    } else if iv.lo.is_multiple_of(2) {
        (Ext::Fin(crit[iv.lo / 2 - 1].clone()), false)
    } else {
        (Ext::Fin(crit[iv.lo / 2].clone()), true)
    };
    let (right, rc) = if iv.hi == 2 * n {
        (Ext::PosInf, false)
    } else if iv.hi.is_multiple_of(2) {
        (Ext::Fin(crit[iv.hi / 2].clone()), false)
    } else {
        (Ext::Fin(crit[iv.hi / 2].clone()), true)
    };
    Interval::new(left, lc, right, rc).expect("level intervals map to valid intervals")
}

/// The zigzag barcode of a formigram.
pub fn barcode_of_formigram(theta: &Formigram) -> Result<Barcode> {
    let d = formigram_to_diagram(theta)?;
    Ok(zigzag_barcode_indices(&d)
        .into_iter()
        .map(|iv| level_interval_to_real(iv, theta.crit()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{SubPartition, Timeline, Universe};

    #[test]
    fn single_level_single_point() {
        let d = ZigzagSetDiagram::new(vec![vec![vec![0]]], vec![]).unwrap();
        assert_eq!(
            zigzag_barcode_indices(&d),
            vec![ZZInterval { lo: 0, hi: 0 }]
        );
    }

    #[test]
    fn constant_formigram_full_bars() {
        let u = Universe::new(["a", "b", "c"]);
        let t = Timeline::constant(SubPartition::discrete(u));
        let b = barcode_of_formigram(&t).unwrap();
        assert_eq!(b.to_string(), "{(-inf,inf), (-inf,inf), (-inf,inf)}");
    }

    #[test]
    fn merge_then_split() {
        // two points merged only at t = 0
        let u = Universe::new(["a", "b"]);
        let t = Timeline::new(
            vec![Rat::zero()],
            vec![SubPartition::single_block(u.clone())],
            vec![SubPartition::discrete(u.clone()), SubPartition::discrete(u)],
        )
        .unwrap();
        let b = barcode_of_formigram(&t).unwrap();
        assert_eq!(b.to_string(), "{(-inf,0), (-inf,inf), (0,inf)}");
    }
}
