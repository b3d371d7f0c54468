#![allow(dead_code)]

use formibar::dms::{Curve, Dms, FiniteMetric, Pl};
use formibar::reeb::{reeb_of_formigram, ReebGraph};
use formibar::zigzag::{SetArrow, ZigzagSetDiagram};
use formibar::{
    Barcode, Digraph, DynamicDigraph, DynamicGraph, Elem, Ext, Formigram, Graph, Interval, Rat,
    SubPartition, Timeline, Universe,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn universe(m: usize) -> Universe {
    Universe::new((0..m).map(|i| format!("p{i}")))
}

/// Distinct sorted half-integer times.
pub fn times(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    let mut pool: Vec<i64> = (0..4 * n as i64 + 4).collect();
    pool.shuffle(rng);
    let mut t: Vec<i64> = pool[..n].to_vec();
    t.sort();
    t.into_iter().map(|k| Rat::new(k, 2)).collect()
}

/// Closed level ranges: left end is level 0 or a critical level, right end is
/// the last level or a critical level.
fn lifespans(rng: &mut ChaCha8Rng, m: usize, n: usize, saturated: bool) -> Vec<(usize, usize)> {
    let top = 2 * n;
    (0..m)
        .map(|_| {
            if saturated || n == 0 || rng.gen_bool(0.4) {
                return (0, top);
            }
            let pick = |rng: &mut ChaCha8Rng, ends: bool| {
                if ends && rng.gen_bool(0.3) {
                    None
                } else {
                    Some(2 * rng.gen_range(0..n) + 1)
                }
            };
            let lo = pick(rng, true).unwrap_or(0);
            let hi = pick(rng, true).unwrap_or(top);
            if lo <= hi {
                (lo, hi)
            } else {
                (hi, lo)
            }
        })
        .collect()
}

fn random_labels(rng: &mut ChaCha8Rng, alive: &[bool], groups: usize) -> Vec<Option<usize>> {
    alive
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            a.then(|| {
                if rng.gen_bool(0.6) {
                    rng.gen_range(0..groups.max(1))
                } else {
                    1000 + i
                }
            })
        })
        .collect()
}

fn assemble<V: Clone>(crit: Vec<Rat>, levels: Vec<V>) -> Timeline<V> {
    let at: Vec<V> = levels.iter().skip(1).step_by(2).cloned().collect();
    let gaps: Vec<V> = levels.iter().step_by(2).cloned().collect();
    Timeline::new(crit, at, gaps).unwrap()
}

pub fn random_formigram_with(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    saturated: bool,
) -> Formigram {
    let u = universe(m);
    let crit = times(rng, n);
    let life = lifespans(rng, m, n, saturated);
    let alive = |l: usize| -> Vec<bool> { life.iter().map(|&(a, b)| a <= l && l <= b).collect() };
    let groups = rng.gen_range(1..=3);
    let mut levels: Vec<SubPartition> = Vec::with_capacity(2 * n + 1);
    for l in 0..=2 * n {
        if l % 2 == 0 {
            levels.push(SubPartition::from_labels(
                u.clone(),
                &random_labels(rng, &alive(l), groups),
            ));
        } else {
            levels.push(SubPartition::empty(u.clone()));
        }
    }
    for l in (1..2 * n).step_by(2) {
        let extra = if rng.gen_bool(0.5) {
            random_labels(rng, &alive(l), groups)
        } else {
            alive(l)
                .iter()
                .enumerate()
                .map(|(i, &a)| a.then_some(i))
                .collect()
        };
        let extra = SubPartition::from_labels(u.clone(), &extra);
        levels[l] = SubPartition::join_all([&levels[l - 1], &levels[l + 1], &extra]).unwrap();
    }
    assemble(crit, levels)
}

pub fn random_formigram(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize) -> Formigram {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(0..=max_n);
    let sat = rng.gen_bool(0.3);
    random_formigram_with(rng, m, n, sat)
}

fn random_edges(rng: &mut ChaCha8Rng, alive: &[bool], p: f64, directed: bool) -> Vec<(Elem, Elem)> {
    let m = alive.len();
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if a == b || !alive[a] || !alive[b] || (!directed && b < a) {
                continue;
            }
            if rng.gen_bool(p) {
                out.push((a as Elem, b as Elem));
            }
        }
    }
    out
}

fn verts(alive: &[bool]) -> Vec<Elem> {
    (0..alive.len())
        .filter(|&i| alive[i])
        .map(|i| i as Elem)
        .collect()
}

pub fn random_dg_with(rng: &mut ChaCha8Rng, m: usize, n: usize, saturated: bool) -> DynamicGraph {
    let u = universe(m);
    let crit = times(rng, n);
    let life = lifespans(rng, m, n, saturated);
    let alive = |l: usize| -> Vec<bool> { life.iter().map(|&(a, b)| a <= l && l <= b).collect() };
    let p = rng.gen_range(0.15..0.5);
    let mut levels: Vec<Graph> = Vec::new();
    for l in 0..=2 * n {
        let al = alive(l);
        if l % 2 == 0 {
            let e = random_edges(rng, &al, p, false);
            levels.push(Graph::with_loops(u.clone(), verts(&al), e).unwrap());
        } else {
            levels.push(Graph::empty(u.clone()));
        }
    }
    for l in (1..2 * n).step_by(2) {
        let al = alive(l);
        let e = random_edges(rng, &al, p / 3.0, false);
        let mut g = Graph::with_loops(u.clone(), verts(&al), e).unwrap();
        g.union_with(&levels[l - 1]);
        g.union_with(&levels[l + 1]);
        levels[l] = g;
    }
    assemble(crit, levels)
}

pub fn random_dg(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize) -> DynamicGraph {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(0..=max_n);
    let sat = rng.gen_bool(0.4);
    random_dg_with(rng, m, n, sat)
}

pub fn random_ddg_with(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    saturated: bool,
) -> DynamicDigraph {
    let u = universe(m);
    let crit = times(rng, n);
    let life = lifespans(rng, m, n, saturated);
    let alive = |l: usize| -> Vec<bool> { life.iter().map(|&(a, b)| a <= l && l <= b).collect() };
    let p = rng.gen_range(0.15..0.5);
    let mut levels: Vec<Digraph> = Vec::new();
    for l in 0..=2 * n {
        let al = alive(l);
        if l % 2 == 0 {
            let e = random_edges(rng, &al, p, true);
            levels.push(Digraph::with_loops(u.clone(), verts(&al), e).unwrap());
        } else {
            levels.push(Digraph::empty(u.clone()));
        }
    }
    for l in (1..2 * n).step_by(2) {
        let al = alive(l);
        let e = random_edges(rng, &al, p / 3.0, true);
        let mut g = Digraph::with_loops(u.clone(), verts(&al), e).unwrap();
        g.union_with(&levels[l - 1]);
        g.union_with(&levels[l + 1]);
        levels[l] = g;
    }
    assemble(crit, levels)
}

pub fn random_ddg(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize) -> DynamicDigraph {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(0..=max_n);
    let sat = rng.gen_bool(0.4);
    random_ddg_with(rng, m, n, sat)
}

/// Distinct integer points in the plane under the L1 norm.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetric {
    let mut pts: Vec<(i64, i64)> = Vec::new();
    while pts.len() < n {
        let p = (rng.gen_range(0..5), rng.gen_range(0..5));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let d = pts
        .iter()
        .map(|a| {
            pts.iter()
                .map(|b| Rat::int((a.0 - b.0).abs() + (a.1 - b.1).abs()))
                .collect()
        })
        .collect();
    FiniteMetric::new(universe(n), d).unwrap()
}

/// Distances interpolating linearly between random metrics placed at integer
/// times; convex combinations of metrics are metrics.
pub fn random_pl_dms(rng: &mut ChaCha8Rng, n: usize, knots: usize) -> Dms {
    let ms: Vec<FiniteMetric> = (0..knots).map(|_| random_metric(rng, n)).collect();
    let start = rng.gen_range(-2..=1i64);
    Dms::from_fn(universe(n), |i, j| {
        let k = ms
            .iter()
            .enumerate()
            .map(|(s, m)| (Rat::int(start + s as i64), m.dist(i, j).clone()))
            .collect();
        Curve::Pl(Pl::with_flat_tails(k).unwrap())
    })
    .unwrap()
}

/// All ultrametrics on `1..=max_n` points with off-diagonal values in `values`,
/// one per relabeling class.
pub fn ultrametrics(max_n: usize, values: &[i64]) -> Vec<FiniteMetric> {
    let mut out: Vec<FiniteMetric> = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let mut seen: Vec<Vec<i64>> = Vec::new();
        let total = values.len().pow(pairs.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut d = vec![vec![0i64; n]; n];
            for &(i, j) in &pairs {
                d[i][j] = values[c % values.len()];
                d[j][i] = d[i][j];
                c /= values.len();
            }
            let ultra =
                (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| d[i][k] <= d[i][j].max(d[j][k]))));
            if !ultra {
                continue;
            }
            let canon = permutations(n)
                .iter()
                .map(|p| {
                    pairs
                        .iter()
                        .map(|&(i, j)| d[p[i]][p[j]])
                        .collect::<Vec<_>>()
                })
                .min()
                .unwrap();
            if seen.contains(&canon) {
                continue;
            }
            seen.push(canon);
            let rows = d
                .iter()
                .map(|r| r.iter().map(|&x| Rat::int(x)).collect())
                .collect();
            out.push(FiniteMetric::new(universe(n), rows).unwrap());
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `2 * x`, infinities absorbing.
pub fn twice(x: &Ext) -> Ext {
    match x {
        Ext::Fin(r) => Ext::Fin(r + r),
        other => other.clone(),
    }
}

pub fn random_diagram(rng: &mut ChaCha8Rng, max_levels: usize) -> ZigzagSetDiagram {
    let n = rng.gen_range(1..=max_levels);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    let mut arrows = Vec::new();
    let mut sizes = sizes;
    for l in 0..n - 1 {
        let forward = rng.gen_bool(0.5);
        let (src, dst) = if forward { (l, l + 1) } else { (l + 1, l) };
        if sizes[dst] == 0 {
            sizes[src] = 0;
        }
        arrows.push((forward, src, dst));
    }
    // a source emptied above may have been the target of an earlier arrow
    for _ in 0..n {
        for &(_, src, dst) in &arrows {
            if sizes[dst] == 0 {
                sizes[src] = 0;
            }
        }
    }
    let levels = sizes
        .iter()
        .map(|&s| (0..s as u32).map(|i| vec![i]).collect())
        .collect();
    let arrows = arrows
        .into_iter()
        .map(|(forward, src, dst)| SetArrow {
            forward,
            map: (0..sizes[src])
                .map(|_| rng.gen_range(0..sizes[dst]))
                .collect(),
        })
        .collect();
    ZigzagSetDiagram::new(levels, arrows).unwrap()
}

/// Open ends move inward by eps, closed ends outward; short open bars vanish.
pub fn smoothing_table(b: &Barcode, eps: &Rat) -> Barcode {
    b.intervals()
        .iter()
        .filter_map(|iv| {
            let both_open = !iv.left_closed && !iv.right_closed;
            if both_open {
                if let Ext::Fin(len) = iv.length() {
                    if len <= Rat::int(2) * eps {
                        return None;
                    }
                }
            }
            let l = if iv.left_closed {
                iv.left.shift(&-eps.clone())
            } else {
                iv.left.shift(eps)
            };
            let r = if iv.right_closed {
                iv.right.shift(eps)
            } else {
                iv.right.shift(&-eps.clone())
            };
            Some(Interval::new(l, iv.left_closed, r, iv.right_closed).unwrap())
        })
        .collect()
}

/// Reeb graph over a window one unit wider than the critical times.
pub fn padded(t: &Formigram) -> ReebGraph {
    let (a, b) = match (t.crit().first(), t.crit().last()) {
        (Some(a), Some(b)) => (a - Rat::one(), b + Rat::one()),
        _ => (Rat::zero(), Rat::one()),
    };
    reeb_of_formigram(t, &a, &b).unwrap()
}
