//! Piecewise-linear functions of time with linear tails.

use serde::{Deserialize, Serialize};

use crate::base::{Ext, Interval, Rat};
use crate::error::{Error, Result};

/// `value(t) = s * t + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Lin {
    pub s: Rat,
    pub c: Rat,
}

impl Lin {
    pub fn at(&self, t: &Rat) -> Rat {
        &self.s * t + &self.c
    }

    /// `t` with `self(t) == other(t)`, if the lines are not parallel.
    pub fn crossing(&self, other: &Lin) -> Option<Rat> {
        let ds = &self.s - &other.s;
        if ds.is_zero() {
            None
        } else {
            Some((&other.c - &self.c) / ds)
        }
    }

    /// The line `t ↦ self(t + d)`.
    pub fn shifted(&self, d: &Rat) -> Lin {
        Lin {
            s: self.s.clone(),
            c: &self.c + &self.s * d,
        }
    }
}

/// A continuous piecewise-linear function on the whole line: linear between
/// knots, with prescribed slopes before the first and after the last knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pl {
    knots: Vec<(Rat, Rat)>,
    left_slope: Rat,
    right_slope: Rat,
    lins: Vec<Lin>,
}

impl Pl {
    pub fn new(knots: Vec<(Rat, Rat)>, left_slope: Rat, right_slope: Rat) -> Result<Pl> {
        if knots.is_empty() {
            return Err(Error::Invalid(
                "piecewise-linear function needs a knot".into(),
            ));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Invalid(
                "knot times must be strictly increasing".into(),
            ));
        }
        let n = knots.len();
        let mut lins = Vec::with_capacity(n + 1);
        let through = |s: Rat, (t, v): &(Rat, Rat)| Lin {
            c: v - &(&s * t),
            s,
        };
        lins.push(through(left_slope.clone(), &knots[0]));
        for w in knots.windows(2) {
            let s = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
            lins.push(through(s, &w[0]));
        }
        lins.push(through(right_slope.clone(), &knots[n - 1]));
        Ok(Pl {
            knots,
            left_slope,
            right_slope,
            lins,
        })
    }

    /// Constant tails.
    pub fn with_flat_tails(knots: Vec<(Rat, Rat)>) -> Result<Pl> {
        Pl::new(knots, Rat::zero(), Rat::zero())
    }

    pub fn constant(v: Rat) -> Pl {
        Pl::with_flat_tails(vec![(Rat::zero(), v)]).expect("one knot")
    }

    pub fn knots(&self) -> &[(Rat, Rat)] {
        &self.knots
    }

    pub fn left_slope(&self) -> &Rat {
        &self.left_slope
    }

    pub fn right_slope(&self) -> &Rat {
        &self.right_slope
    }

    pub fn is_zero(&self) -> bool {
        self.left_slope.is_zero()
            && self.right_slope.is_zero()
            && self.knots.iter().all(|(_, v)| v.is_zero())
    }

    /// Number of linear pieces, rays included.
    pub(crate) fn num_pieces(&self) -> usize {
        self.lins.len()
    }

    pub(crate) fn lin(&self, p: usize) -> &Lin {
        &self.lins[p]
    }

    /// Closure of piece `p` as `(lo, hi)`.
    pub(crate) fn piece_bounds(&self, p: usize) -> (Ext, Ext) {
        let n = self.knots.len();
        let lo = if p == 0 {
            Ext::NegInf
        } else {
            Ext::Fin(self.knots[p - 1].0.clone())
        };
        let hi = if p == n {
            Ext::PosInf
        } else {
            Ext::Fin(self.knots[p].0.clone())
        };
        (lo, hi)
    }

    /// The piece containing `t`, taking the one on the right at a knot.
    pub(crate) fn piece_right(&self, t: &Rat) -> usize {
        self.knots.partition_point(|k| &k.0 <= t)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.lins[self.piece_right(t)].at(t)
    }

    /// `t ↦ self(t + d)`.
    pub fn translated(&self, d: &Rat) -> Pl {
        let knots = self.knots.iter().map(|(t, v)| (t - d, v.clone())).collect();
        Pl::new(knots, self.left_slope.clone(), self.right_slope.clone()).expect("same shape")
    }

    pub fn scaled(&self, k: &Rat) -> Pl {
        let knots = self.knots.iter().map(|(t, v)| (t.clone(), v * k)).collect();
        Pl::new(knots, &self.left_slope * k, &self.right_slope * k).expect("same shape")
    }

    /// Nonnegative everywhere, tails included.
    pub fn is_nonneg(&self) -> bool {
        !self.left_slope.is_positive()
            && !self.right_slope.is_negative()
            && self.knots.iter().all(|(_, v)| !v.is_negative())
    }

    /// Infimum over the closure of `iv`; `None` when it is `-inf`.
    pub fn inf_on(&self, iv: &Interval) -> Option<Rat> {
        let mut best: Option<Rat> = None;
        let mut take = |v: Rat| {
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        };
        match &iv.left {
            Ext::Fin(a) => take(self.eval(a)),
            _ if self.left_slope.is_positive() => return None,
            _ => {}
        }
        match &iv.right {
            Ext::Fin(b) => take(self.eval(b)),
            _ if self.right_slope.is_negative() => return None,
            _ => {}
        }
        for (t, v) in &self.knots {
            if iv.left <= *t && iv.right >= *t {
                take(v.clone());
            }
        }
        best
    }

    /// Closed sublevel set `{t : self(t) <= level}` as disjoint closed pieces in order.
    pub fn sublevel(&self, level: &Rat) -> Vec<(Ext, Ext)> {
        let mut out: Vec<(Ext, Ext)> = Vec::new();
        for p in 0..self.num_pieces() {
            let (lo, hi) = self.piece_bounds(p);
            let l = &self.lins[p];
            let part = if l.s.is_zero() {
                (&l.c <= level).then_some((lo, hi))
            } else {
                let r = Ext::Fin((level - &l.c) / &l.s);
                let (a, b) = if l.s.is_positive() {
                    (lo, std::cmp::min(hi, r))
                } else {
                    (std::cmp::max(lo, r), hi)
                };
                (a <= b).then_some((a, b))
            };
            if let Some((a, b)) = part {
                push_closed(&mut out, a, b);
            }
        }
        out
    }
}

/// Append a closed piece, merging with the last one when they touch.
pub(crate) fn push_closed(out: &mut Vec<(Ext, Ext)>, a: Ext, b: Ext) {
    if let Some(last) = out.last_mut() {
        if a <= last.1 {
            if b > last.1 {
                last.1 = b;
            }
            return;
        }
    }
    out.push((a, b));
}

#[derive(Serialize, Deserialize)]
pub(crate) struct PlDoc {
    pub knots: Vec<[Rat; 2]>,
    #[serde(default)]
    pub left_slope: Rat,
    #[serde(default)]
    pub right_slope: Rat,
}

impl From<&Pl> for PlDoc {
    fn from(p: &Pl) -> PlDoc {
        PlDoc {
            knots: p
                .knots
                .iter()
                .map(|(t, v)| [t.clone(), v.clone()])
                .collect(),
            left_slope: p.left_slope.clone(),
            right_slope: p.right_slope.clone(),
        }
    }
}

impl TryFrom<PlDoc> for Pl {
    type Error = Error;
    fn try_from(d: PlDoc) -> Result<Pl> {
        Pl::new(
            d.knots.into_iter().map(|[t, v]| (t, v)).collect(),
            d.left_slope,
            d.right_slope,
        )
    }
}
