//! Point trajectories in ℝ^d and their pairwise distances.

use std::io::Read;

use super::{Curve, Dms, QuadCurve};
use crate::base::{Rat, Universe};
use crate::error::{Error, Result};

/// Time-stamped positions per point, linear in between and constant outside
/// the common window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrajectorySet {
    ids: Vec<String>,
    dim: usize,
    paths: Vec<Vec<(Rat, Vec<Rat>)>>,
}

impl TrajectorySet {
    pub fn new(ids: Vec<String>, paths: Vec<Vec<(Rat, Vec<Rat>)>>) -> Result<TrajectorySet> {
        if ids.len() != paths.len() {
            return Err(Error::Invalid("one path per point id".into()));
        }
        let dim = paths
            .first()
            .and_then(|p| p.first())
            .map_or(0, |r| r.1.len());
        let mut window: Option<(Rat, Rat)> = None;
        for (id, p) in ids.iter().zip(&paths) {
            if p.is_empty() {
                return Err(Error::Invalid(format!("point `{id}` has no rows")));
            }
            if let Some(r) = p.iter().find(|r| r.1.len() != dim) {
                return Err(Error::Invalid(format!(
                    "point `{id}` at time {} has {} coordinates, expected {dim}",
                    r.0,
                    r.1.len()
                )));
            }
            if let Some(w) = p.windows(2).find(|w| w[0].0 >= w[1].0) {
                return Err(Error::Invalid(format!(
                    "times of point `{id}` are not strictly increasing at {}",
                    w[1].0
                )));
            }
            let span = (p[0].0.clone(), p[p.len() - 1].0.clone());
            match &window {
                None => window = Some(span),
                Some(w) if *w != span => {
                    return Err(Error::Invalid(format!(
                        "point `{id}` spans [{}, {}] but the others span [{}, {}]",
                        span.0, span.1, w.0, w.1
                    )))
                }
                _ => {}
            }
        }
        Ok(TrajectorySet { ids, dim, paths })
    }

    /// Rows `point_id,time,x1,...,xd` with an optional header line. Rows of
    /// one point must appear in increasing time order.
    pub fn from_csv(r: impl Read) -> Result<TrajectorySet> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .comment(Some(b'#'))
            .from_reader(r);
        let mut ids: Vec<String> = Vec::new();
        let mut paths: Vec<Vec<(Rat, Vec<Rat>)>> = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() < 2 {
                return Err(Error::Parse(format!(
                    "row {}: expected point_id,time,coordinates",
                    line + 1
                )));
            }
            let t = match Rat::parse(&rec[1]) {
                Ok(t) => t,
                Err(_) if line == 0 => continue,
                Err(e) => return Err(Error::Parse(format!("row {}: {e}", line + 1))),
            };
            let xs = (2..rec.len())
                .map(|i| Rat::parse(&rec[i]))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", line + 1)))?;
            let id = rec[0].to_string();
            let k = match ids.iter().position(|x| *x == id) {
                Some(k) => k,
                None => {
                    ids.push(id);
                    paths.push(Vec::new());
                    ids.len() - 1
                }
            };
            paths[k].push((t, xs));
        }
        TrajectorySet::new(ids, paths)
    }

    pub fn from_csv_str(s: &str) -> Result<TrajectorySet> {
        TrajectorySet::from_csv(s.as_bytes())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("point_id,time");
        for i in 1..=self.dim {
            out.push_str(&format!(",x{i}"));
        }
        out.push('\n');
        for (id, p) in self.ids.iter().zip(&self.paths) {
            for (t, xs) in p {
                out.push_str(&format!("{id},{}", t.to_fraction_string()));
                for x in xs {
                    out.push(',');
                    out.push_str(&x.to_fraction_string());
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn paths(&self) -> &[Vec<(Rat, Vec<Rat>)>] {
        &self.paths
    }

    pub fn position(&self, k: usize, t: &Rat) -> Vec<Rat> {
        let p = &self.paths[k];
        let i = p.partition_point(|r| &r.0 <= t);
        if i == 0 {
            return p[0].1.clone();
        }
        if i == p.len() {
            return p[i - 1].1.clone();
        }
        let (t0, x0) = &p[i - 1];
        let (t1, x1) = &p[i];
        let s = (t - t0) / (t1 - t0);
        x0.iter()
            .zip(x1)
            .map(|(a, b)| a + &(&(b - a) * &s))
            .collect()
    }
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Squared distance between paths `i` and `j` on their merged time grid.
fn pair_curve(t: &TrajectorySet, i: usize, j: usize) -> QuadCurve {
    let mut grid: Vec<Rat> = t.paths[i]
        .iter()
        .chain(&t.paths[j])
        .map(|r| r.0.clone())
        .collect();
    grid.sort();
    grid.dedup();
    let diffs: Vec<Vec<Rat>> = grid
        .iter()
        .map(|s| sub(&t.position(i, s), &t.position(j, s)))
        .collect();
    if grid.len() == 1 {
        return QuadCurve::constant_sq(dot(&diffs[0], &diffs[0]));
    }
    let coeffs = (0..grid.len() - 1)
        .map(|k| {
            let len = &grid[k + 1] - &grid[k];
            let d0 = &diffs[k];
            let v: Vec<Rat> = sub(&diffs[k + 1], d0).iter().map(|x| x / &len).collect();
            [dot(d0, d0), &dot(d0, &v) * &Rat::int(2), dot(&v, &v)]
        })
        .collect();
    QuadCurve::new(grid, coeffs).expect("merged grid is increasing")
}

/// Euclidean distances between the paths. Pairs whose distance happens to be
/// piecewise linear are stored exactly as such; the rest keep their squared form.
pub fn dms_from_trajectories(t: &TrajectorySet) -> Result<Dms> {
    Dms::from_fn(Universe::new(t.ids.iter().cloned()), |i, j| {
        let q = pair_curve(t, i as usize, j as usize);
        match q.as_pl() {
            Some(p) => Curve::Pl(p),
            None => Curve::Quad(q),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_optional() {
        let a =
            TrajectorySet::from_csv_str("point_id,time,x1\np,0,0\np,1,1\nq,0,2\nq,1,2\n").unwrap();
        let b = TrajectorySet::from_csv_str("p,0,0\np,1,1\nq,0,2\nq,1,2\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(TrajectorySet::from_csv_str(&a.to_csv()).unwrap(), a);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(TrajectorySet::from_csv_str("p,0,0,0\np,1,1\n").is_err());
        assert!(TrajectorySet::from_csv_str("p,1,0\np,0,1\n").is_err());
        assert!(TrajectorySet::from_csv_str("p,0,0\np,1,1\nq,0,0\n").is_err());
    }
}
