use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use formibar::base::io::barcode_from_json;
use formibar::{Barcode, Rat};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("formibar-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formibar"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reference_barcode() {
    let f = data("disband_merge.json");
    let out = ok(&["barcode", path(&f)]);
    let want = Barcode::parse_list("(-inf,inf) (2,10) (6,17) (15,17)").unwrap();
    assert_eq!(barcode_from_json(&out).unwrap(), want);
    let text = ok(&["barcode", path(&f), "--format", "text"]);
    assert_eq!(text, "(-inf,inf)\n(2,10)\n(6,17)\n(15,17)\n");
}

#[test]
fn smoothed_barcode() {
    let f = data("disband_merge.json");
    let out = ok(&["barcode", path(&f), "--smooth", "3", "--format", "text"]);
    assert_eq!(out, "(-inf,inf)\n(5,7)\n(9,14)\n");
    let frac = ok(&["barcode", path(&f), "--smooth", "6/2", "--format", "text"]);
    let dec = ok(&["barcode", path(&f), "--smooth", "3.0", "--format", "text"]);
    assert_eq!(frac, out);
    assert_eq!(dec, out);
}

#[test]
fn metric_space_at_zero_scale() {
    let f = data("triangle.json");
    let out = ok(&["barcode", path(&f), "--delta", "0", "--format", "text"]);
    assert_eq!(out, "(-inf,inf)\n(-inf,inf)\n(-inf,inf)\n");
    let o = run(&["barcode", path(&f)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--delta"));
}

#[test]
fn invalid_input_fails_with_report() {
    let d = scratch("invalid");
    let bad = d.join("bad.json");
    let text = std::fs::read_to_string(data("disband_merge.json"))
        .unwrap()
        .replacen(
            "\"x3\"\n      ]\n    ]",
            "\"x3\"\n      ],\n      [\"x1\"]\n    ]",
            1,
        );
    std::fs::write(&bad, text).unwrap();
    let o = run(&["barcode", path(&bad)]);
    assert!(!o.status.success());
    assert!(!o.stderr.is_empty());
    let o = run(&["barcode", path(&d.join("missing.json"))]);
    assert!(!o.status.success());
}

#[test]
fn svg_output() {
    let d = scratch("svg");
    let svg = d.join("bars.svg");
    let out = ok(&[
        "barcode",
        path(&data("disband_merge.json")),
        "--svg",
        path(&svg),
        "--format",
        "text",
    ]);
    assert_eq!(out.lines().count(), 4);
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.starts_with("<svg"));
    assert_eq!(
        s.matches("<polygon").count(),
        2,
        "one arrowhead per infinite end"
    );
    let bars = d.join("closed.json");
    let b = Barcode::parse_list("[0,2] (1,3] [4,4]").unwrap();
    std::fs::write(&bars, formibar::base::io::barcode_to_json(&b)).unwrap();
    let closed = ok(&["barcode", path(&bars), "--format", "svg"]);
    assert!(closed.contains(">[<") && closed.contains(">]<"));
    assert_eq!(
        closed.matches("<circle").count(),
        2,
        "one open end and one point bar"
    );
}

#[test]
fn compare_identical_inputs() {
    let f = data("disband_merge.json");
    for mode in ["bottleneck", "lower-bound", "exact-interleaving"] {
        let out = ok(&["compare", path(&f), path(&f), "--mode", mode]);
        assert_eq!(
            out,
            ",disband_merge,disband_merge\ndisband_merge,0/1,0/1\ndisband_merge,0/1,0/1\n"
        );
    }
}

#[test]
fn compare_exact_pair() {
    let out = ok(&[
        "compare",
        path(&data("same_reeb_x.json")),
        path(&data("same_reeb_y.json")),
        "--mode",
        "exact-interleaving",
    ]);
    assert_eq!(
        out,
        ",same_reeb_x,same_reeb_y\nsame_reeb_x,0/1,1/1\nsame_reeb_y,1/1,0/1\n"
    );
}

#[test]
fn compare_size_bound_names_the_pair() {
    let f = data("k33.json");
    let g = data("disband_merge.json");
    let o = Command::new(env!("CARGO_BIN_EXE_formibar"))
        .args([
            "compare",
            path(&f),
            path(&g),
            "--mode",
            "exact-interleaving",
        ])
        .env("FORMIBAR_SIZE_BOUND", "12")
        .output()
        .unwrap();
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("k33.json") && err.contains("disband_merge.json"),
        "{err}"
    );
}

#[test]
fn generated_regimes_separate() {
    let d = scratch("regimes");
    ok(&["generate", "regimes", "--seed", "7", "--out-dir", path(&d)]);
    let mut files: Vec<PathBuf> = std::fs::read_dir(&d)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    let again = scratch("regimes2");
    ok(&[
        "generate",
        "regimes",
        "--seed",
        "7",
        "--out-dir",
        path(&again),
    ]);
    for f in &files {
        let g = again.join(f.file_name().unwrap());
        assert_eq!(
            std::fs::read(f).unwrap(),
            std::fs::read(g).unwrap(),
            "seeded output is reproducible"
        );
    }
    let mut args = vec!["compare", "--mode", "lower-bound", "--delta", "2"];
    args.extend(files.iter().map(|f| path(f)));
    let out = ok(&args);
    assert_eq!(ok(&args), out, "byte-identical reruns");
    let rows: Vec<Vec<String>> = out
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    let names = &rows[0][1..];
    let regime = |s: &str| s.trim_end_matches(char::is_numeric).to_string();
    let mut within = 0.0f64;
    let mut across = f64::INFINITY;
    for (i, row) in rows[1..].iter().enumerate() {
        for (j, cell) in row[1..].iter().enumerate() {
            if i == j {
                assert_eq!(cell, "0/1");
                continue;
            }
            assert_eq!(cell, &rows[j + 1][i + 1], "symmetric");
            let v = formibar::Ext::parse(cell).unwrap().to_f64();
            if regime(&names[i]) == regime(&names[j]) {
                within = within.max(v);
            } else {
                across = across.min(v);
            }
        }
    }
    assert!(within + 0.1 <= across, "within {within} across {across}");
}

#[test]
fn cosine_lower_bound_matrix() {
    let d = scratch("cosine");
    ok(&["generate", "cosine", "--step", "6", "--out-dir", path(&d)]);
    let out = ok(&[
        "compare",
        path(&d.join("cosine0.json")),
        path(&d.join("cosine1.json")),
        "--delta",
        "1/2",
    ]);
    let cell = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .to_string();
    let v = Rat::parse(&cell).unwrap().to_f64();
    assert!((v - std::f64::consts::FRAC_PI_8).abs() < 1e-4, "{v}");
    let text = ok(&[
        "barcode",
        path(&d.join("cosine0.json")),
        "--delta",
        "1/2",
        "--format",
        "text",
    ]);
    assert!(
        text.lines()
            .all(|l| !l.contains("inf") || l == "(-inf,inf)"),
        "periodic windows drop cut-off bars"
    );
}

#[test]
fn reeb_exports() {
    let f = data("disband_merge.json");
    assert_eq!(
        ok(&["reeb", path(&f), "--window", "0", "20"]),
        golden("disband_merge.dot")
    );
    let k = data("k33.json");
    assert_eq!(
        ok(&["reeb", path(&k), "--window", "1/2", "5/2"]),
        golden("k33.dot")
    );
    let empty = ok(&["reeb", path(&f), "--window", "5", "-5", "--format", "json"]);
    let g = formibar::reeb::reeb_from_json(&empty).unwrap();
    assert!(g.vertices.is_empty() && g.edges.is_empty());
    let svg = ok(&["reeb", path(&f), "--window", "0", "20", "--format", "svg"]);
    assert!(svg.starts_with("<svg"));
    assert_eq!(
        ok(&["reeb", path(&f), "--window", "0", "20", "--format", "svg"]),
        svg
    );
}

#[test]
fn dynamic_graph_input() {
    let f = data("sample_dg.json");
    let out = ok(&["barcode", path(&f), "--format", "text"]);
    assert!(!out.is_empty());
    let d = scratch("dg");
    let o = d.join("b.json");
    ok(&["barcode", path(&f), "--out", path(&o)]);
    assert!(barcode_from_json(&std::fs::read_to_string(&o).unwrap()).is_ok());
}
