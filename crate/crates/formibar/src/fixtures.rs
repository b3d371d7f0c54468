//! Small hand-written formigrams and dynamic graphs used by tests, docs and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{DynamicGraph, Formigram, Graph, Rat, SubPartition, Timeline, Universe};
use crate::dms::TrajectorySet;

fn part(u: &Universe, blocks: &[&[&str]]) -> SubPartition {
    SubPartition::from_ids(u, blocks.iter().map(|b| b.iter())).expect("fixture partition")
}

fn ints(ts: &[i64]) -> Vec<Rat> {
    ts.iter().map(|&t| Rat::int(t)).collect()
}

/// Three points that disband at 2, 6 and 15 and merge at 10 and 17.
/// Barcode: (-inf,inf), (2,10), (6,17), (15,17).
pub fn disband_merge_formigram() -> Formigram {
    let u = Universe::new(["x1", "x2", "x3"]);
    let all = part(&u, &[&["x1", "x2", "x3"]]);
    let a = part(&u, &[&["x1", "x2"], &["x3"]]);
    let d = part(&u, &[&["x1"], &["x2"], &["x3"]]);
    let b = part(&u, &[&["x1"], &["x2", "x3"]]);
    Timeline::new(
        ints(&[2, 6, 10, 15, 17]),
        vec![all.clone(), a.clone(), b.clone(), b.clone(), all.clone()],
        vec![all.clone(), a, d.clone(), b, d, all],
    )
    .expect("fixture shape")
}

/// Points with finite lifespans: x1 on [-5,3], x2 on [-5,2], x3 on [-3,5].
pub fn lifespan_formigram() -> Formigram {
    let u = Universe::new(["x1", "x2", "x3"]);
    let e = SubPartition::empty(u.clone());
    let p12 = part(&u, &[&["x1", "x2"]]);
    let p12_3 = part(&u, &[&["x1", "x2"], &["x3"]]);
    let all = part(&u, &[&["x1", "x2", "x3"]]);
    let p13_2 = part(&u, &[&["x1", "x3"], &["x2"]]);
    let p13 = part(&u, &[&["x1", "x3"]]);
    let p3 = part(&u, &[&["x3"]]);
    Timeline::new(
        ints(&[-5, -3, -1, 1, 2, 3, 5]),
        vec![
            p12.clone(),
            p12_3.clone(),
            all.clone(),
            all.clone(),
            p13_2.clone(),
            p13.clone(),
            p3.clone(),
        ],
        vec![e.clone(), p12, p12_3, all, p13_2, p13, p3, e],
    )
    .expect("fixture shape")
}

/// Two non-isomorphic formigrams with the same Reeb graph; their interleaving distance is 1.
pub fn same_reeb_pair() -> (Formigram, Formigram) {
    let ux = Universe::new(["x1", "x2"]);
    let jx = part(&ux, &[&["x1", "x2"]]);
    let dx = part(&ux, &[&["x1"], &["x2"]]);
    let tx = Timeline::new(
        ints(&[-3, -1, 1, 3]),
        vec![jx.clone(); 4],
        vec![jx.clone(), dx.clone(), jx.clone(), dx, jx],
    )
    .expect("fixture shape");
    let uy = Universe::new(["y1", "y2", "y3"]);
    let jy = part(&uy, &[&["y1", "y2", "y3"]]);
    let a = part(&uy, &[&["y1", "y2"], &["y3"]]);
    let b = part(&uy, &[&["y1"], &["y2", "y3"]]);
    let ty = Timeline::new(
        ints(&[-3, -1, 1, 3]),
        vec![jy.clone(); 4],
        vec![jy.clone(), a, jy.clone(), b, jy],
    )
    .expect("fixture shape");
    (tx, ty)
}

/// Nine points in three groups that disband on (1,2) and regroup across
/// groups; the Reeb graph contains a K3,3 minor.
pub fn k33_formigram() -> Formigram {
    let ids = ["x1", "x2", "x3", "y1", "y2", "y3", "z1", "z2", "z3"];
    let u = Universe::new(ids);
    let before = part(
        &u,
        &[
            &["x1", "x2", "x3"],
            &["y1", "y2", "y3"],
            &["z1", "z2", "z3"],
        ],
    );
    let apart = SubPartition::discrete(u.clone());
    let after = part(
        &u,
        &[
            &["x1", "y1", "z1"],
            &["x2", "y2", "z2"],
            &["x3", "y3", "z3"],
        ],
    );
    Timeline::new(
        ints(&[1, 2]),
        vec![before.clone(), after.clone()],
        vec![before, apart, after],
    )
    .expect("fixture shape")
}

/// A constant singleton against a pair that separates on (-1,1); interleaving distance 1.
pub fn singleton_vs_pair() -> (Formigram, Formigram) {
    let ux = Universe::new(["x"]);
    let tx = Timeline::constant(SubPartition::single_block(ux));
    let uy = Universe::new(["y1", "y2"]);
    let j = SubPartition::single_block(uy.clone());
    let d = SubPartition::discrete(uy);
    let ty = Timeline::new(
        ints(&[-1, 1]),
        vec![j.clone(), j.clone()],
        vec![j.clone(), d, j],
    )
    .expect("fixture shape");
    (tx, ty)
}

/// A dynamic graph with births, an edge that comes and goes, and a late arrival.
pub fn sample_dynamic_graph() -> DynamicGraph {
    let u = Universe::new(["a", "b", "c", "d"]);
    let g = |v: &[&str], e: &[(&str, &str)]| Graph::from_ids(&u, v, e).expect("fixture graph");
    let g0 = g(&["a", "b"], &[]);
    let g1 = g(&["a", "b", "c"], &[("a", "b")]);
    let g2 = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
    let g3 = g(&["a", "b", "c"], &[("b", "c")]);
    let g4 = g(&["a", "b", "c", "d"], &[("b", "c"), ("c", "d")]);
    let g5 = g(&["a", "b", "c", "d"], &[("c", "d")]);
    Timeline::new(
        ints(&[1, 2, 3, 4, 5]),
        vec![g1.clone(), g2.clone(), g2.clone(), g4.clone(), g4.clone()],
        vec![g0, g1, g2.clone(), g3, g4, g5],
    )
    .expect("fixture shape")
}

/// Rips scale at which the regimes of [`three_regime_trajectories`] separate.
pub const REGIME_DELTA: i64 = 2;

/// One synthetic group of three moving points.
#[derive(Clone, Debug)]
pub struct RegimeSample {
    pub regime: &'static str,
    pub name: String,
    pub set: TrajectorySet,
}

/// Three points observed at integer times `0..=12` in the plane, in one of
/// three regimes: a tight flock drifting together, a scattered group that
/// never comes close, and a group that meets every four time units and
/// spreads out in between. Positions carry small seeded jitter on a grid of
/// `1/20`.
pub fn three_regime_trajectories(seed: u64, per_regime: usize) -> Vec<RegimeSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let q = |k: i64| Rat::new(k, 20);
    let times: Vec<i64> = (0..=12).collect();
    for regime in ["flock", "scatter", "meet"] {
        for s in 0..per_regime {
            let offsets: [(i64, i64); 3] = match regime {
                "flock" => [(0, 0), (20, 0), (0, 20)],
                _ => [(0, 0), (160, 0), (0, 160)],
            };
            let drift = (rng.gen_range(10..30i64), rng.gen_range(-10..10i64));
            let mut paths = Vec::new();
            for off in &offsets {
                let base = (
                    off.0 + rng.gen_range(-5..=5i64),
                    off.1 + rng.gen_range(-5..=5i64),
                );
                let mut rows = Vec::new();
                for &t in &times {
                    // the meeting group is together at multiples of 4 and fully spread two units later
                    let spread = match regime {
                        "meet" => Rat::new(2 - (t % 4 - 2).abs(), 2),
                        _ => Rat::one(),
                    };
                    let jitter = if regime == "flock" { 2 } else { 0 };
                    let j = (
                        rng.gen_range(-jitter..=jitter),
                        rng.gen_range(-jitter..=jitter),
                    );
                    let x = q(drift.0 * t + j.0) + q(base.0) * spread.clone();
                    let y = q(drift.1 * t + j.1) + q(base.1) * spread;
                    rows.push((Rat::int(t), vec![x, y]));
                }
                paths.push(rows);
            }
            let ids = ["a", "b", "c"].iter().map(|x| x.to_string()).collect();
            out.push(RegimeSample {
                regime,
                name: format!("{regime}{s}"),
                set: TrajectorySet::new(ids, paths).expect("fixture trajectories"),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::validate;

    #[test]
    fn fixtures_are_valid() {
        assert!(validate(&disband_merge_formigram()).is_valid());
        assert!(validate(&lifespan_formigram()).is_valid());
        let (a, b) = same_reeb_pair();
        assert!(validate(&a).is_valid() && validate(&b).is_valid());
        assert!(validate(&k33_formigram()).is_valid());
        let (a, b) = singleton_vs_pair();
        assert!(validate(&a).is_valid() && validate(&b).is_valid());
        let r = validate(&sample_dynamic_graph());
        assert!(r.is_valid(), "{r}");
    }
}
