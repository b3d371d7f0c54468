//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Sample sizes, seeds, tolerances and time limits are
//! fixed below.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    padded, random_ddg, random_dg, random_diagram, random_formigram, rng, smoothing_table, twice,
    ultrametrics,
};
use formibar::clustering::{cluster_ddg, pi0_dg, Functor};
use formibar::dms::{
    constant_dms, cosine_pair, dms_from_metric_filtration, dms_from_ultrametric,
    drop_boundary_bars, rips_dg, Dms,
};
use formibar::fixtures::{
    disband_merge_formigram, k33_formigram, lifespan_formigram, same_reeb_pair, singleton_vs_pair,
    three_regime_trajectories, REGIME_DELTA,
};
use formibar::metrics::*;
use formibar::reeb::{levelset_barcode0, Tails};
use formibar::smoothing::smooth_formigram;
use formibar::zigzag::{barcode_of_formigram, rank_oracle_barcode, zigzag_barcode_indices};
use formibar::{Barcode, Error, Ext, Formigram, Interval, Rat, SubPartition, Timeline, Universe};
use rand::Rng;
use rayon::prelude::*;

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const STABILITY_LIMIT: Duration = Duration::from_secs(300);
const COSINE_TOL: f64 = 1e-4;
const COSINE_STEP_LOG2: u32 = 8;
const COSINE_PERIODS: u32 = 3;
const SMALL_SIZE_BOUND: usize = 16;
const REGIME_MARGIN: f64 = 0.1;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bars(t: &Formigram) -> Barcode {
    barcode_of_formigram(t).unwrap()
}

fn rips_bars(x: &Dms, delta: &Rat) -> Barcode {
    bars(&pi0_dg(&rips_dg(x, delta).unwrap()).unwrap())
}

fn golden_barcode() -> Outcome {
    let start = Instant::now();
    let b = bars(&disband_merge_formigram());
    let took = start.elapsed();
    let want = Barcode::parse_list("(-inf,inf) (2,10) (6,17) (15,17)").unwrap();
    check(b == want, || format!("got {b}"))?;
    check(took < GOLDEN_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("{b} in {took:?}"))
}

fn constant_blocks() -> Outcome {
    for m in 1..=6usize {
        // m blocks over m + 2 elements, so some blocks are not singletons
        let u = common::universe(m + 2);
        let labels: Vec<Option<usize>> = (0..m + 2).map(|i| Some(i % m)).collect();
        let p = SubPartition::from_labels(u, &labels);
        let b = bars(&Timeline::constant(p));
        let want: Barcode = (0..m).map(|_| Interval::full()).collect();
        check(b == want, || format!("{m} blocks gave {b}"))?;
    }
    Ok("m = 1..6".into())
}

fn count_invariant() -> Outcome {
    let mut r = rng(3);
    let mut probes = 0;
    for k in 0..500 {
        let t = random_formigram(&mut r, 8, 10);
        let b = bars(&t);
        for l in 0..t.num_levels() {
            let s = t.sample_time(l);
            let (have, want) = (b.count_containing(&s), t.value_at(&s).len());
            check(have == want, || {
                format!("sample {k} at {s}: {have} bars, {want} blocks")
            })?;
            probes += 1;
        }
    }
    Ok(format!("500 formigrams, {probes} event and gap times"))
}

fn zigzag_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let mut levels = 0;
    for k in 0..200 {
        let d = random_diagram(&mut r, 24);
        levels = levels.max(d.num_levels());
        let (got, want) = (zigzag_barcode_indices(&d), rank_oracle_barcode(&d).unwrap());
        check(got == want, || {
            format!("diagram {k}: {got:?} vs oracle {want:?}")
        })?;
    }
    let took = start.elapsed();
    check(took < ORACLE_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("200 diagrams up to {levels} levels in {took:?}"))
}

fn smoothing_table_check() -> Outcome {
    let mut r = rng(5);
    let eps = [Rat::new(1, 4), Rat::one(), Rat::int(3)];
    for k in 0..200 {
        let t = random_formigram(&mut r, 8, 10);
        let b = bars(&t);
        for e in &eps {
            let got = bars(&smooth_formigram(&t, e).unwrap());
            let want = smoothing_table(&b, e);
            check(got == want, || {
                format!("sample {k}, eps {e}: {got} vs {want}")
            })?;
        }
    }
    Ok("200 formigrams x 3 scales".into())
}

fn reeb_coincidence() -> Outcome {
    let (a, b) = same_reeb_pair();
    let (c, d) = singleton_vs_pair();
    let mut all = vec![
        disband_merge_formigram(),
        lifespan_formigram(),
        k33_formigram(),
        a,
        b,
        c,
        d,
    ];
    all.push(Timeline::constant(SubPartition::discrete(Universe::new([
        "a", "b",
    ]))));
    let mut r = rng(6);
    all.extend((0..200).map(|_| random_formigram(&mut r, 8, 10)));
    for (k, t) in all.iter().enumerate() {
        let got = levelset_barcode0(&padded(t), Tails::Extend).unwrap();
        let want = bars(t);
        check(got == want, || format!("case {k}: {got} vs {want}"))?;
    }
    Ok(format!("{} fixtures and 200 random", all.len() - 200))
}

/// Draws pairs until `n` fit under the size bound; returns the pairs and the
/// number of draws rejected.
fn pairs_within_bound<T: Send + Sync, D: Send>(
    seed: u64,
    n: usize,
    draw: impl Fn(&mut rand_chacha::ChaCha8Rng) -> T,
    dist: impl Fn(&T, &T) -> formibar::Result<D> + Sync,
) -> Result<(Vec<(T, T, D)>, usize), String> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut rejected = 0;
    while out.len() < n {
        let batch: Vec<(T, T)> = (0..n - out.len())
            .map(|_| (draw(&mut r), draw(&mut r)))
            .collect();
        let results: Vec<_> = batch
            .into_par_iter()
            .map(|(a, b)| {
                let d = dist(&a, &b);
                (a, b, d)
            })
            .collect();
        for (a, b, d) in results {
            match d {
                Ok(d) => out.push((a, b, d)),
                Err(Error::SizeBound(_)) => rejected += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
        if rejected > 20 * n {
            return Err(format!(
                "only {} of {n} pairs fit the size bound",
                out.len()
            ));
        }
    }
    Ok((out, rejected))
}

fn stability() -> Outcome {
    let start = Instant::now();
    let (pairs, rejected) =
        pairs_within_bound(7, 100, |r| random_dg(r, 4, 4), interleaving_dg_exact)?;
    let mut worst = 0.0f64;
    for (k, (a, b, d)) in pairs.iter().enumerate() {
        let db = bottleneck(&bars(&pi0_dg(a).unwrap()), &bars(&pi0_dg(b).unwrap()));
        check(db <= twice(d), || format!("pair {k}: d_B {db} > 2 * {d}"))?;
        if let (Ext::Fin(x), Ext::Fin(y)) = (&db, d) {
            if y.is_positive() {
                worst = worst.max(x.to_f64() / (2.0 * y.to_f64()));
            }
        }
    }
    let took = start.elapsed();
    check(took < STABILITY_LIMIT, || format!("took {took:?}"))?;
    Ok(format!(
        "100 pairs ({rejected} over the bound redrawn), max d_B/(2 d_I) = {worst:.3}, {took:?}"
    ))
}

fn lipschitz_chain() -> Outcome {
    let (pairs, r1) = pairs_within_bound(8, 100, |r| random_dg(r, 4, 4), interleaving_dg_exact)?;
    let results: Vec<Result<(), String>> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, (a, b, d))| {
            let df = interleaving_formigram_exact(&pi0_dg(a).unwrap(), &pi0_dg(b).unwrap())
                .map_err(|e| e.to_string())?;
            check(df <= *d, || format!("graph pair {k}: d_F {df} > d_G {d}"))
        })
        .collect();
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let (pairs, r2) = pairs_within_bound(9, 100, |r| random_ddg(r, 4, 4), interleaving_ddg_exact)?;
    let results: Vec<Result<(), String>> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, (a, b, d))| {
            let (fa, fb) = (
                cluster_ddg(a, Functor::Weak).unwrap(),
                cluster_ddg(b, Functor::Weak).unwrap(),
            );
            let df = interleaving_formigram_exact(&fa, &fb).map_err(|e| e.to_string())?;
            check(df <= *d, || format!("digraph pair {k}: d_F {df} > d_D {d}"))
        })
        .collect();
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(format!(
        "100 graph pairs, 100 digraph pairs ({} redrawn)",
        r1 + r2
    ))
}

fn cosine() -> Outcome {
    let pi = std::f64::consts::PI;
    let tau = std::f64::consts::FRAC_PI_4;
    let c = cosine_pair(tau, COSINE_STEP_LOG2, COSINE_PERIODS);
    let d = interleaving_dms_exact_with(
        &c.x0,
        &c.x1,
        &Rat::zero(),
        Some(&c.check_window),
        DEFAULT_SIZE_BOUND,
    )
    .map_err(|e| e.to_string())?;
    let dv = d.to_f64();
    check((dv - tau).abs() < COSINE_TOL, || {
        format!("distance {dv}, want {tau}")
    })?;
    let mut lbs = Vec::new();
    for (n, k) in [(0, 1), (1, 2), (1, 1), (3, 2)] {
        let delta = Rat::new(n, k);
        let lb = stability_lower_bound(
            &drop_boundary_bars(&rips_bars(&c.x0, &delta)),
            &drop_boundary_bars(&rips_bars(&c.x1, &delta)),
        )
        .to_f64();
        let want = 0.5 * tau.min(2.0 * pi - tau).min((delta.to_f64() - 1.0).acos());
        check((lb - want).abs() < COSINE_TOL, || {
            format!("delta {delta}: bound {lb}, want {want}")
        })?;
        lbs.push(format!("{lb:.6}"));
    }
    Ok(format!(
        "d = {dv:.9}, bounds [{}] at step 2^-{COSINE_STEP_LOG2}",
        lbs.join(", ")
    ))
}

fn partitions(n: usize) -> Vec<SubPartition> {
    fn rgs(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let top = cur.iter().max().map_or(0, |m| m + 1);
        for v in 0..=top {
            cur.push(v);
            rgs(n, cur, out);
            cur.pop();
        }
    }
    let mut codes = Vec::new();
    rgs(n, &mut Vec::new(), &mut codes);
    let u = common::universe(n);
    codes
        .into_iter()
        .map(|c| SubPartition::from_labels(u.clone(), &c.into_iter().map(Some).collect::<Vec<_>>()))
        .collect()
}

fn all_pairs<T: Sync>(
    xs: &[T],
    f: impl Fn(&T, &T) -> Result<(), String> + Sync,
) -> Result<usize, String> {
    let idx: Vec<(usize, usize)> = (0..xs.len())
        .flat_map(|i| (0..xs.len()).map(move |j| (i, j)))
        .collect();
    idx.par_iter()
        .map(|&(i, j)| f(&xs[i], &xs[j]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(idx.len())
}

fn constant_dichotomy() -> Outcome {
    let all: Vec<SubPartition> = (1..=4).flat_map(partitions).collect();
    let n = all_pairs(&all, |p, q| {
        let (a, b) = (Timeline::constant(p.clone()), Timeline::constant(q.clone()));
        let d = interleaving_formigram_exact_with(&a, &b, SMALL_SIZE_BOUND)
            .map_err(|e| e.to_string())?;
        let want = if p.len() == q.len() {
            Ext::Fin(Rat::zero())
        } else {
            Ext::PosInf
        };
        check(d == want, || format!("{p:?} vs {q:?}: {d}"))
    })?;
    Ok(format!("{n} pairs of partitions"))
}

fn dendrogram_bridge() -> Outcome {
    let us = ultrametrics(4, &[1, 2, 3]);
    let n = all_pairs(&us, |a, b| {
        let (ta, tb) = (
            ultrametric_dendrogram(a).unwrap(),
            ultrametric_dendrogram(b).unwrap(),
        );
        let gh = gromov_hausdorff_exact(a, b).map_err(|e| e.to_string())?;
        let d = interleaving_formigram_exact_with(&ta, &tb, SMALL_SIZE_BOUND)
            .map_err(|e| e.to_string())?;
        check(d == Ext::Fin(&gh + &gh), || {
            format!("{a:?} vs {b:?}: {d} vs 2 * {gh}")
        })
    })?;
    Ok(format!("{n} dendrogram pairs on up to 4 leaves"))
}

fn gh_embeddings() -> Outcome {
    let us = ultrametrics(3, &[1, 2, 3]);
    let w = Interval::new(Ext::Fin(Rat::zero()), true, Ext::PosInf, false).unwrap();
    let n = all_pairs(&us, |a, b| {
        let gh = gromov_hausdorff_exact(a, b).map_err(|e| e.to_string())?;
        let want = Ext::Fin(&gh + &gh);
        let dg = interleaving_dg_exact(
            &dms_from_metric_filtration(a),
            &dms_from_metric_filtration(b),
        )
        .map_err(|e| e.to_string())?;
        check(dg == want, || {
            format!("filtrations {a:?} vs {b:?}: {dg} vs {want}")
        })?;
        let (x, y) = (
            dms_from_ultrametric(a).unwrap(),
            dms_from_ultrametric(b).unwrap(),
        );
        let dm = interleaving_dms_exact_with(&x, &y, &Rat::zero(), Some(&w), DEFAULT_SIZE_BOUND)
            .map_err(|e| e.to_string())?;
        check(dm == want, || {
            format!("metric spaces {a:?} vs {b:?}: {dm} vs {want}")
        })
    })?;
    Ok(format!("{n} ultrametric pairs, both embeddings"))
}

fn mismatched_sizes() -> Outcome {
    let mut r = rng(13);
    let mut cases = 0;
    for _ in 0..30 {
        let m = r.gen_range(1..=3);
        let n = loop {
            let n = r.gen_range(1..=3);
            if n != m {
                break n;
            }
        };
        let pairs = [
            (
                constant_dms(&common::random_metric(&mut r, m)).unwrap(),
                constant_dms(&common::random_metric(&mut r, n)).unwrap(),
            ),
            (
                common::random_pl_dms(&mut r, m, 3),
                common::random_pl_dms(&mut r, n, 3),
            ),
        ];
        for (x, y) in &pairs {
            let db = bottleneck(&rips_bars(x, &Rat::zero()), &rips_bars(y, &Rat::zero()));
            check(db == Ext::PosInf, || format!("{m} vs {n} points: d_B {db}"))?;
            let d = interleaving_dms_exact(x, y, &Rat::zero()).map_err(|e| e.to_string())?;
            check(d == Ext::PosInf, || {
                format!("{m} vs {n} points: distance {d}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} pairs of genuine metric spaces"))
}

fn regimes() -> Outcome {
    let samples = three_regime_trajectories(7, 3);
    let delta = Rat::int(REGIME_DELTA);
    let bars: Vec<Barcode> = samples
        .par_iter()
        .map(|s| {
            let x = formibar::dms::dms_from_trajectories(&s.set).unwrap();
            rips_bars(&x, &delta)
        })
        .collect();
    let mut within = 0.0f64;
    let mut across = f64::INFINITY;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let v = stability_lower_bound(&bars[i], &bars[j]).to_f64();
            if samples[i].regime == samples[j].regime {
                within = within.max(v);
            } else {
                across = across.min(v);
            }
        }
    }
    check(within + REGIME_MARGIN <= across, || {
        format!("within {within}, across {across}")
    })?;
    Ok(format!(
        "max within {within:.4}, min across {across:.4}, margin >= {REGIME_MARGIN}"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("1 golden barcode", golden_barcode),
        ("2 constant formigrams", constant_blocks),
        ("3 bar count equals block count", count_invariant),
        ("4 zigzag rank oracle", zigzag_oracle),
        ("5 smoothing table", smoothing_table_check),
        ("6 Reeb graph coincidence", reeb_coincidence),
        ("7 stability", stability),
        ("8 clustering is 1-Lipschitz", lipschitz_chain),
        ("9 cosine family", cosine),
        ("10 constant formigram dichotomy", constant_dichotomy),
        ("11 dendrograms and Gromov-Hausdorff", dendrogram_bridge),
        ("12 Gromov-Hausdorff embeddings", gh_embeddings),
        ("13 mismatched sizes", mismatched_sizes),
        ("R three-regime trajectories", regimes),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.2}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({secs:.2}s): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
