//! Reeb graphs of formigrams over a time window, their export, and the
//! levelset barcode read off the graph.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::base::{block_label, validate, Barcode, Elem, Formigram, Rat, Universe};
use crate::error::{Error, Result};
use crate::zigzag::{level_interval_to_real, zigzag_barcode_indices, SetArrow, ZigzagSetDiagram};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebVertex {
    pub time: Rat,
    pub label: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebEdge {
    pub source: usize,
    pub target: usize,
    pub span: (Rat, Rat),
    pub label: Vec<Elem>,
}

/// A combinatorial Reeb graph: vertices are blocks at the critical times
/// inside the window and at its ends, edges are blocks on the open pieces in
/// between, attached to the vertex blocks that contain them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebGraph {
    pub universe: Universe,
    pub window: (Rat, Rat),
    /// Vertex times in increasing order.
    pub times: Vec<Rat>,
    pub vertices: Vec<ReebVertex>,
    pub edges: Vec<ReebEdge>,
    /// Whether the window strictly contains every critical time of the source.
    pub covers_all: bool,
}

/// How the levelset barcode treats the window ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tails {
    /// Continue the end values to ±∞, recovering the barcode of the source formigram.
    Extend,
    /// Stop at the window: bars reaching an end are closed there.
    Truncate,
}

pub fn reeb_of_formigram(theta: &Formigram, a: &Rat, b: &Rat) -> Result<ReebGraph> {
    if a > b {
        return Err(Error::Invalid(format!("window [{a},{b}] is empty")));
    }
    validate(theta).into_result()?;
    let mut times = vec![a.clone()];
    times.extend(theta.crit().iter().filter(|c| *c > a && *c < b).cloned());
    if b > a {
        times.push(b.clone());
    }
    let covers_all = theta.crit().iter().all(|c| c > a && c < b);
    let mut vertices = Vec::new();
    let mut first = Vec::with_capacity(times.len());
    for t in &times {
        first.push(vertices.len());
        for blk in theta.value_at(t).blocks() {
            vertices.push(ReebVertex {
                time: t.clone(),
                label: blk.clone(),
            });
        }
    }
    let mut edges = Vec::new();
    for i in 0..times.len().saturating_sub(1) {
        let (l, r) = (&times[i], &times[i + 1]);
        let mid = theta.value_at(&l.midpoint(r));
        let left = mid.canonical_map(theta.value_at(l))?;
        let right = mid.canonical_map(theta.value_at(r))?;
        for (k, blk) in mid.blocks().iter().enumerate() {
            edges.push(ReebEdge {
                source: first[i] + left[k],
                target: first[i + 1] + right[k],
                span: (l.clone(), r.clone()),
                label: blk.clone(),
            });
        }
    }
    Ok(ReebGraph {
        universe: theta.universe().clone(),
        window: (a.clone(), b.clone()),
        times,
        vertices,
        edges,
        covers_all,
    })
}

impl ReebGraph {
    pub fn num_components(&self) -> usize {
        let mut dsu = crate::base::Dsu::new(self.vertices.len());
        let mut n = self.vertices.len();
        for e in &self.edges {
            if dsu.union(e.source, e.target) {
                n -= 1;
            }
        }
        n
    }

    /// Rank of the first homology of the graph.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.num_components() - self.vertices.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.source == v) as usize + (e.target == v) as usize)
            .sum()
    }

    fn time_index(&self, t: &Rat) -> usize {
        self.times.binary_search(t).expect("vertex time")
    }
}

/// Levelset barcode in degree zero, computed from the vertex and edge labels alone.
pub fn levelset_barcode0(r: &ReebGraph, tails: Tails) -> Result<Barcode> {
    if tails == Tails::Extend && !r.covers_all {
        return Err(Error::Precondition(
            "window does not strictly contain every critical time".into(),
        ));
    }
    let k = r.times.len();
    let mut vlevel: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, v) in r.vertices.iter().enumerate() {
        vlevel[r.time_index(&v.time)].push(i);
    }
    let mut elevel: Vec<Vec<usize>> = vec![Vec::new(); k.saturating_sub(1)];
    for (i, e) in r.edges.iter().enumerate() {
        elevel[r.time_index(&e.span.0)].push(i);
    }
    let pos = |i: usize| -> usize {
        let t = r.time_index(&r.vertices[i].time);
        vlevel[t]
            .iter()
            .position(|&j| j == i)
            .expect("vertex in its level")
    };
    let labels_v = |t: usize| -> Vec<Vec<Elem>> {
        vlevel[t]
            .iter()
            .map(|&i| r.vertices[i].label.clone())
            .collect()
    };
    let mut levels = Vec::new();
    let mut arrows = Vec::new();
    if tails == Tails::Extend {
        levels.push(labels_v(0));
        arrows.push(SetArrow {
            forward: true,
            map: (0..vlevel[0].len()).collect(),
        });
    }
    for t in 0..k {
        levels.push(labels_v(t));
        if t + 1 < k {
            let es = &elevel[t];
            levels.push(es.iter().map(|&i| r.edges[i].label.clone()).collect());
            arrows.push(SetArrow {
                forward: false,
                map: es.iter().map(|&i| pos(r.edges[i].source)).collect(),
            });
            arrows.push(SetArrow {
                forward: true,
                map: es.iter().map(|&i| pos(r.edges[i].target)).collect(),
            });
        }
    }
    if tails == Tails::Extend {
        levels.push(labels_v(k - 1));
        arrows.push(SetArrow {
            forward: false,
            map: (0..vlevel[k - 1].len()).collect(),
        });
    }
    let d = ZigzagSetDiagram::new(levels, arrows)?;
    let shift = if tails == Tails::Extend { 0 } else { 1 };
    Ok(zigzag_barcode_indices(&d)
        .into_iter()
        .map(|mut iv| {
            iv.lo += shift;
            iv.hi += shift;
            level_interval_to_real(iv, &r.times)
        })
        .collect())
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Deterministic Graphviz output; vertices carry time and label, edges their span and label.
pub fn export_dot(r: &ReebGraph) -> String {
    let mut s = String::from("digraph reeb {\n");
    if !r.vertices.is_empty() {
        s.push_str("  rankdir=LR;\n");
    }
    for (i, v) in r.vertices.iter().enumerate() {
        let _ = writeln!(
            s,
            "  v{i} [label=\"t={}\\n{}\"];",
            v.time,
            dot_escape(&block_label(&r.universe, &v.label))
        );
    }
    for e in &r.edges {
        let _ = writeln!(
            s,
            "  v{} -> v{} [label=\"({},{}) {}\"];",
            e.source,
            e.target,
            e.span.0,
            e.span.1,
            dot_escape(&block_label(&r.universe, &e.label))
        );
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    time: Rat,
    label: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    source: usize,
    target: usize,
    span: [Rat; 2],
    label: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ReebDoc {
    kind: String,
    universe: Vec<String>,
    window: [Rat; 2],
    covers_all: bool,
    times: Vec<Rat>,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

fn names(u: &Universe, b: &[Elem]) -> Vec<String> {
    b.iter().map(|&x| u.name(x).to_string()).collect()
}

pub fn reeb_to_json(r: &ReebGraph) -> String {
    let doc = ReebDoc {
        kind: "reeb".into(),
        universe: r.universe.ids().to_vec(),
        window: [r.window.0.clone(), r.window.1.clone()],
        covers_all: r.covers_all,
        times: r.times.clone(),
        vertices: r
            .vertices
            .iter()
            .map(|v| VertexDoc {
                time: v.time.clone(),
                label: names(&r.universe, &v.label),
            })
            .collect(),
        edges: r
            .edges
            .iter()
            .map(|e| EdgeDoc {
                source: e.source,
                target: e.target,
                span: [e.span.0.clone(), e.span.1.clone()],
                label: names(&r.universe, &e.label),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn reeb_from_json(s: &str) -> Result<ReebGraph> {
    let doc: ReebDoc = serde_json::from_str(s)?;
    if doc.kind != "reeb" {
        return Err(Error::Parse(format!(
            "expected kind \"reeb\", got {:?}",
            doc.kind
        )));
    }
    let u = Universe::new(doc.universe);
    let lab = |xs: &[String]| -> Result<Vec<Elem>> {
        let mut v = xs.iter().map(|x| u.elem(x)).collect::<Result<Vec<_>>>()?;
        v.sort_unstable();
        Ok(v)
    };
    let vertices = doc
        .vertices
        .iter()
        .map(|v| {
            Ok(ReebVertex {
                time: v.time.clone(),
                label: lab(&v.label)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let times = doc.times;
    if times.windows(2).any(|w| w[0] >= w[1])
        || vertices
            .iter()
            .any(|v| times.binary_search(&v.time).is_err())
    {
        return Err(Error::Parse(
            "vertex times must be listed in increasing order".into(),
        ));
    }
    let [a, b] = doc.window;
    let edges = doc
        .edges
        .iter()
        .map(|e| {
            if e.source >= vertices.len() || e.target >= vertices.len() {
                return Err(Error::Parse("edge endpoint out of range".into()));
            }
            let [l, r] = e.span.clone();
            Ok(ReebEdge {
                source: e.source,
                target: e.target,
                span: (l, r),
                label: lab(&e.label)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReebGraph {
        universe: u,
        window: (a, b),
        times,
        vertices,
        edges,
        covers_all: doc.covers_all,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::disband_merge_formigram;

    #[test]
    fn reference_graph_counts() {
        let r = reeb_of_formigram(&disband_merge_formigram(), &Rat::zero(), &Rat::int(20)).unwrap();
        assert_eq!(r.vertices.len(), 10);
        assert_eq!(r.edges.len(), 12);
        assert_eq!(r.cycle_rank(), 3);
    }

    #[test]
    fn json_round_trip() {
        let r = reeb_of_formigram(&disband_merge_formigram(), &Rat::zero(), &Rat::int(20)).unwrap();
        assert_eq!(reeb_from_json(&reeb_to_json(&r)).unwrap(), r);
    }
}
