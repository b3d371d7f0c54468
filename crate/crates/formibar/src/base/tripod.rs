use super::universe::{Elem, Universe};
use crate::error::{Error, Result};

/// A correspondence between two universes: a relation whose projections are onto.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tripod {
    x: Universe,
    y: Universe,
    pairs: Vec<(Elem, Elem)>,
}

impl Tripod {
    pub fn new(x: Universe, y: Universe, mut pairs: Vec<(Elem, Elem)>) -> Result<Tripod> {
        pairs.sort_unstable();
        pairs.dedup();
        let mut hit_x = vec![false; x.len()];
        let mut hit_y = vec![false; y.len()];
        for &(a, b) in &pairs {
            *hit_x
                .get_mut(a as usize)
                .ok_or_else(|| Error::UnknownElement(format!("#{a}")))? = true;
            *hit_y
                .get_mut(b as usize)
                .ok_or_else(|| Error::UnknownElement(format!("#{b}")))? = true;
        }
        if let Some(i) = hit_x.iter().position(|h| !h) {
            return Err(Error::Invalid(format!(
                "`{}` has no partner",
                x.name(i as Elem)
            )));
        }
        if let Some(i) = hit_y.iter().position(|h| !h) {
            return Err(Error::Invalid(format!(
                "`{}` has no partner",
                y.name(i as Elem)
            )));
        }
        Ok(Tripod { x, y, pairs })
    }

    pub fn from_ids(x: &Universe, y: &Universe, pairs: &[(&str, &str)]) -> Result<Tripod> {
        let p = pairs
            .iter()
            .map(|(a, b)| Ok((x.elem(a)?, y.elem(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Tripod::new(x.clone(), y.clone(), p)
    }

    pub fn pairs(&self) -> &[(Elem, Elem)] {
        &self.pairs
    }

    pub fn x(&self) -> &Universe {
        &self.x
    }

    pub fn y(&self) -> &Universe {
        &self.y
    }

    pub fn inverse(&self) -> Tripod {
        Tripod {
            x: self.y.clone(),
            y: self.x.clone(),
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }
}

/// Every correspondence between `m` and `n` points contains one of the relations
/// listed here: the graph of a map `f: X → Y` together with one chosen partner for
/// each point of `Y` missed by `f`. Distances that can only get worse when
/// pairs are added are therefore minimized over this list.
pub fn covering_relations(m: usize, n: usize) -> Vec<Vec<(Elem, Elem)>> {
    let mut out = Vec::new();
    if m == 0 || n == 0 {
        if m == 0 && n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut f = vec![0usize; m];
    loop {
        let mut covered = vec![false; n];
        for &y in &f {
            covered[y] = true;
        }
        let missed: Vec<usize> = (0..n).filter(|&y| !covered[y]).collect();
        let mut g = vec![0usize; missed.len()];
        loop {
            let mut rel: Vec<(Elem, Elem)> = f
                .iter()
                .enumerate()
                .map(|(x, &y)| (x as Elem, y as Elem))
                .collect();
            rel.extend(missed.iter().zip(&g).map(|(&y, &x)| (x as Elem, y as Elem)));
            rel.sort_unstable();
            out.push(rel);
            if !odometer(&mut g, m) {
                break;
            }
        }
        if !odometer(&mut f, n) {
            break;
        }
    }
    out
}

fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_correspondences(m: usize, n: usize) -> Vec<Vec<(Elem, Elem)>> {
        let cells: Vec<(Elem, Elem)> = (0..m)
            .flat_map(|a| (0..n).map(move |b| (a as Elem, b as Elem)))
            .collect();
        (0u32..1 << cells.len())
            .map(|mask| {
                cells
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, c)| *c)
                    .collect::<Vec<_>>()
            })
            .filter(|r| {
                (0..m).all(|a| r.iter().any(|p| p.0 == a as Elem))
                    && (0..n).all(|b| r.iter().any(|p| p.1 == b as Elem))
            })
            .collect()
    }

    #[test]
    fn every_correspondence_contains_a_covering_relation() {
        for m in 1..=3 {
            for n in 1..=3 {
                let covers = covering_relations(m, n);
                for c in &covers {
                    assert!((0..m).all(|a| c.iter().any(|p| p.0 == a as Elem)));
                    assert!((0..n).all(|b| c.iter().any(|p| p.1 == b as Elem)));
                }
                for r in all_correspondences(m, n) {
                    assert!(covers.iter().any(|c| c.iter().all(|p| r.contains(p))));
                }
            }
        }
    }

    #[test]
    fn tripod_requires_full_projections() {
        let x = Universe::new(["a", "b"]);
        let y = Universe::new(["c"]);
        assert!(Tripod::from_ids(&x, &y, &[("a", "c")]).is_err());
        assert!(Tripod::from_ids(&x, &y, &[("a", "c"), ("b", "c")]).is_ok());
    }
}
