use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rat::{Ext, Rat};
use crate::error::{Error, Result};

/// An interval of the extended real line with open/closed endpoint flags.
///
/// Field order gives the canonical barcode order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub left: Ext,
    pub left_closed: bool,
    pub right: Ext,
    pub right_closed: bool,
}

impl Interval {
    pub fn new(left: Ext, left_closed: bool, right: Ext, right_closed: bool) -> Result<Interval> {
        let bad = |m: &str| Err(Error::Invalid(format!("interval: {m}")));
        if left == Ext::PosInf || right == Ext::NegInf {
            return bad("left end +inf or right end -inf");
        }
        if (!left.is_finite() && left_closed) || (!right.is_finite() && right_closed) {
            return bad("infinite endpoints must be open");
        }
        if left > right {
            return bad("left > right");
        }
        if left == right && !(left_closed && right_closed) {
            return bad("degenerate interval must be a closed point");
        }
        Ok(Interval {
            left,
            left_closed,
            right,
            right_closed,
        })
    }

    pub fn open(a: Ext, b: Ext) -> Interval {
        Interval::new(a, false, b, false).expect("valid open interval")
    }

    pub fn closed(a: Rat, b: Rat) -> Interval {
        Interval::new(Ext::Fin(a), true, Ext::Fin(b), true).expect("valid closed interval")
    }

    pub fn point(a: Rat) -> Interval {
        Interval::closed(a.clone(), a)
    }

    pub fn full() -> Interval {
        Interval::open(Ext::NegInf, Ext::PosInf)
    }

    pub fn contains(&self, t: &Rat) -> bool {
        let left_ok = match &self.left {
            Ext::NegInf => true,
            Ext::Fin(a) => a < t || (self.left_closed && a == t),
            Ext::PosInf => false,
        };
        let right_ok = match &self.right {
            Ext::PosInf => true,
            Ext::Fin(b) => t < b || (self.right_closed && b == t),
            Ext::NegInf => false,
        };
        left_ok && right_ok
    }

    /// Length `right - left`, `+inf` when unbounded.
    pub fn length(&self) -> Ext {
        self.right.diff(&self.left).unwrap_or(Ext::PosInf)
    }

    pub fn is_full(&self) -> bool {
        self.left == Ext::NegInf && self.right == Ext::PosInf
    }

    /// Whether `self` ⊆ `other`, respecting endpoint types.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let left_ok = self.left > other.left
            || (self.left == other.left && (other.left_closed || !self.left_closed));
        let right_ok = self.right < other.right
            || (self.right == other.right && (other.right_closed || !self.right_closed));
        left_ok && right_ok
    }

    /// Same endpoint types, endpoints moved out by `d` (infinities fixed).
    /// Used for δ-expansions; does not validate.
    pub fn widened(&self, d: &Rat) -> Interval {
        Interval {
            left: self.left.shift(&-d),
            left_closed: self.left_closed,
            right: self.right.shift(d),
            right_closed: self.right_closed,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.left_closed { '[' } else { '(' },
            self.left,
            self.right,
            if self.right_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Interval {
    type Err = Error;
    /// Parses `(a,b)`, `[a,b)`, `(a,b]`, `[a,b]` with `-inf`/`inf` ends.
    fn from_str(s: &str) -> Result<Interval> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not an interval: `{s}`"));
        let lc = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let rc = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let body = &s[1..s.len() - 1];
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        Interval::new(Ext::parse(a)?, lc, Ext::parse(b)?, rc)
    }
}

/// A multiset of intervals kept in canonical order.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Barcode {
    intervals: Vec<Interval>,
}

impl Barcode {
    pub fn new(mut intervals: Vec<Interval>) -> Barcode {
        intervals.sort();
        Barcode { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn count_containing(&self, t: &Rat) -> usize {
        self.intervals.iter().filter(|i| i.contains(t)).count()
    }

    /// Parse a list such as `(-inf,inf) (2,10) [1,3)`; separators are whitespace or `;`.
    pub fn parse_list(s: &str) -> Result<Barcode> {
        let mut out = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            if cur.is_empty() && (ch.is_whitespace() || ch == ';' || ch == '{' || ch == '}') {
                continue;
            }
            cur.push(ch);
            if ch == ')' || ch == ']' {
                out.push(cur.trim().parse()?);
                cur.clear();
            }
        }
        if !cur.trim().is_empty() {
            return Err(Error::Parse(format!("trailing text `{cur}`")));
        }
        Ok(Barcode::new(out))
    }
}

impl FromIterator<Interval> for Barcode {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> Barcode {
        Barcode::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{iv}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_contains() {
        let i: Interval = "[2,10)".parse().unwrap();
        assert!(i.contains(&Rat::int(2)));
        assert!(!i.contains(&Rat::int(10)));
        let j: Interval = "(-inf,inf)".parse().unwrap();
        assert!(j.contains(&Rat::int(-1000)));
        assert!("[inf,inf]".parse::<Interval>().is_err());
        assert!("(1,1)".parse::<Interval>().is_err());
        assert!("[1,1]".parse::<Interval>().is_ok());
    }

    #[test]
    fn canonical_order() {
        let b = Barcode::parse_list("(6,17) (-inf,inf) (2,10) [2,10) (15,17)").unwrap();
        assert_eq!(
            b.to_string(),
            "{(-inf,inf), (2,10), [2,10), (6,17), (15,17)}"
        );
    }

    #[test]
    fn subset_with_types() {
        let a: Interval = "[1,2]".parse().unwrap();
        let b: Interval = "(1,2]".parse().unwrap();
        assert!(b.is_subset_of(&a));
        assert!(!a.is_subset_of(&b));
        let c: Interval = "(0,3)".parse().unwrap();
        assert!(a.is_subset_of(&c));
        let full = Interval::full();
        assert!(full.is_subset_of(&full));
    }
}
