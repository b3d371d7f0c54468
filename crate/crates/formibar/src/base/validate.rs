use std::fmt;

use super::timeline::{Level, Snapshot, Timeline};

/// One broken invariant, with the time or element it concerns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub at: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.at, self.message)
    }
}

/// All violations found; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, at: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            at: at.into(),
            message: message.into(),
        });
    }

    pub fn into_result(self) -> crate::Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(crate::Error::Invalid(self.to_string()))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn level_name<V>(t: &Timeline<V>, l: usize) -> String {
    match t.level_kind(l) {
        Level::Crit(i) => format!("t={}", t.crit()[i]),
        Level::Gap(i) => {
            let (a, b) = t.gap_bounds(i);
            format!("({a},{b})")
        }
    }
}

/// Check ordering of critical times, per-snapshot invariants, comparability
/// of gap values with adjacent critical values, and closed-interval lifespans.
pub fn validate<V: Snapshot>(t: &Timeline<V>) -> Report {
    let mut r = Report::default();
    let u = t.universe().clone();
    for w in t.crit().windows(2) {
        if w[0] >= w[1] {
            r.push(
                format!("t={}", w[1]),
                "critical times not strictly increasing",
            );
        }
    }
    for l in 0..t.num_levels() {
        let v = t.level(l);
        if v.universe() != &u {
            r.push(level_name(t, l), "value over a different universe");
            return r;
        }
        for m in v.local_violations() {
            r.push(level_name(t, l), m);
        }
    }
    for i in 0..t.crit().len() {
        let c = &t.at_crit()[i];
        for g in [2 * i, 2 * i + 2] {
            if !t.level(g).leq(c) {
                r.push(
                    level_name(t, g),
                    format!(
                        "comparability: value is not below the value at t={}",
                        t.crit()[i]
                    ),
                );
            }
        }
    }
    let top = t.num_levels() - 1;
    for x in u.elems() {
        let present: Vec<usize> = (0..t.num_levels())
            .filter(|&l| t.level(l).has_elem(x))
            .collect();
        let name = u.name(x);
        let Some((&lo, &hi)) = present.first().zip(present.last()) else {
            r.push(format!("element `{name}`"), "lifespan is empty");
            continue;
        };
        if hi - lo + 1 != present.len() {
            r.push(
                format!("element `{name}`"),
                "lifespan is not an interval (absent in between)",
            );
            continue;
        }
        if lo != 0 && lo % 2 == 0 {
            r.push(
                format!("element `{name}`"),
                format!(
                    "lifespan is not closed on the left at {}",
                    level_name(t, lo)
                ),
            );
        }
        if hi != top && hi % 2 == 0 {
            r.push(
                format!("element `{name}`"),
                format!(
                    "lifespan is not closed on the right at {}",
                    level_name(t, hi)
                ),
            );
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Graph, Rat, SubPartition, Universe};

    #[test]
    fn detects_comparability_and_lifespan() {
        let u = Universe::new(["x", "y"]);
        let both = Graph::from_ids(&u, &["x", "y"], &[("x", "y")]).unwrap();
        let apart = Graph::from_ids(&u, &["x", "y"], &[]).unwrap();
        let bad = Timeline::new(
            vec![Rat::int(0)],
            vec![apart.clone()],
            vec![both.clone(), apart.clone()],
        )
        .unwrap();
        let rep = validate(&bad);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.message.contains("comparability")));

        let p = |b: &[&[&str]]| SubPartition::from_ids(&u, b.iter().map(|x| x.iter())).unwrap();
        let split = Timeline::new(
            vec![Rat::int(0), Rat::int(1), Rat::int(2), Rat::int(3)],
            vec![
                p(&[&["x"], &["y"]]),
                p(&[&["y"]]),
                p(&[&["x"], &["y"]]),
                p(&[&["y"]]),
            ],
            vec![
                p(&[&["y"]]),
                p(&[&["y"]]),
                p(&[&["y"]]),
                p(&[&["y"]]),
                p(&[&["y"]]),
            ],
        )
        .unwrap();
        let rep = validate(&split);
        assert!(
            rep.violations
                .iter()
                .any(|v| v.message.contains("not an interval")),
            "{rep}"
        );
    }

    #[test]
    fn missing_loop_reported() {
        let u = Universe::new(["x"]);
        let g = Graph::new(u.clone(), [0], []).unwrap();
        let rep = validate(&Timeline::constant(g));
        assert!(rep.violations[0].message.contains("self-loop"));
    }
}
