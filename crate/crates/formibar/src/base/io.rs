//! JSON forms of timelines and barcodes. Times are `"p/q"` strings.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::graph::{Digraph, Graph};
use super::interval::{Barcode, Interval};
use super::partition::SubPartition;
use super::rat::Rat;
use super::timeline::{Snapshot, Timeline};
use super::universe::Universe;
use crate::error::{Error, Result};

/// Snapshot types with a JSON form.
pub trait SnapshotJson: Snapshot + Sized {
    type Doc: Serialize + DeserializeOwned;
    const KIND: &'static str;
    fn to_doc(&self) -> Self::Doc;
    fn from_doc(u: &Universe, d: &Self::Doc) -> Result<Self>;
}

#[derive(Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
pub struct DigraphDoc {
    pub vertices: Vec<String>,
    pub arcs: Vec<[String; 2]>,
}

impl SnapshotJson for SubPartition {
    type Doc = Vec<Vec<String>>;
    const KIND: &'static str = "formigram";
    fn to_doc(&self) -> Self::Doc {
        self.block_names()
    }
    fn from_doc(u: &Universe, d: &Self::Doc) -> Result<Self> {
        SubPartition::from_ids(u, d.iter().map(|b| b.iter()))
    }
}

fn names(u: &Universe, xs: impl Iterator<Item = u32>) -> Vec<String> {
    xs.map(|x| u.name(x).to_string()).collect()
}

fn pairs(u: &Universe, ps: impl Iterator<Item = (u32, u32)>) -> Vec<[String; 2]> {
    ps.map(|(a, b)| [u.name(a).to_string(), u.name(b).to_string()])
        .collect()
}

fn elems(u: &Universe, xs: &[String]) -> Result<Vec<u32>> {
    xs.iter().map(|s| u.elem(s)).collect()
}

fn elem_pairs(u: &Universe, ps: &[[String; 2]]) -> Result<Vec<(u32, u32)>> {
    ps.iter()
        .map(|[a, b]| Ok((u.elem(a)?, u.elem(b)?)))
        .collect()
}

impl SnapshotJson for Graph {
    type Doc = GraphDoc;
    const KIND: &'static str = "dg";
    fn to_doc(&self) -> GraphDoc {
        let u = self.universe();
        GraphDoc {
            vertices: names(u, self.vertices().iter().copied()),
            edges: pairs(u, self.edges().iter().copied()),
        }
    }
    fn from_doc(u: &Universe, d: &GraphDoc) -> Result<Self> {
        Graph::new(u.clone(), elems(u, &d.vertices)?, elem_pairs(u, &d.edges)?)
    }
}

impl SnapshotJson for Digraph {
    type Doc = DigraphDoc;
    const KIND: &'static str = "ddg";
    fn to_doc(&self) -> DigraphDoc {
        let u = self.universe();
        DigraphDoc {
            vertices: names(u, self.vertices().iter().copied()),
            arcs: pairs(u, self.arcs().iter().copied()),
        }
    }
    fn from_doc(u: &Universe, d: &DigraphDoc) -> Result<Self> {
        Digraph::new(u.clone(), elems(u, &d.vertices)?, elem_pairs(u, &d.arcs)?)
    }
}

#[derive(Serialize, Deserialize)]
pub struct TimelineDoc<T> {
    pub kind: String,
    pub universe: Vec<String>,
    pub crit: Vec<Rat>,
    pub at_crit: Vec<T>,
    pub on_gap: Vec<T>,
    pub left_tail: T,
    pub right_tail: T,
}

pub fn timeline_to_doc<V: SnapshotJson>(t: &Timeline<V>) -> TimelineDoc<V::Doc> {
    let g = t.gaps();
    TimelineDoc {
        kind: V::KIND.to_string(),
        universe: t.universe().ids().to_vec(),
        crit: t.crit().to_vec(),
        at_crit: t.at_crit().iter().map(V::to_doc).collect(),
        on_gap: g[1..g.len() - 1].iter().map(V::to_doc).collect(),
        left_tail: g[0].to_doc(),
        right_tail: g[g.len() - 1].to_doc(),
    }
}

pub fn timeline_from_doc<V: SnapshotJson>(d: TimelineDoc<V::Doc>) -> Result<Timeline<V>> {
    if d.kind != V::KIND {
        return Err(Error::Parse(format!(
            "expected kind `{}`, found `{}`",
            V::KIND,
            d.kind
        )));
    }
    let n = d.universe.len();
    let u = Universe::new(d.universe);
    if u.len() != n {
        return Err(Error::Parse("duplicate ids in universe".into()));
    }
    let at_crit = d
        .at_crit
        .iter()
        .map(|v| V::from_doc(&u, v))
        .collect::<Result<Vec<_>>>()?;
    let mut gaps = vec![V::from_doc(&u, &d.left_tail)?];
    for v in &d.on_gap {
        gaps.push(V::from_doc(&u, v)?);
    }
    gaps.push(V::from_doc(&u, &d.right_tail)?);
    if d.crit.is_empty() {
        // a single level: both tails must agree
        if gaps[0] != gaps[1] {
            return Err(Error::Parse("no critical times but tails differ".into()));
        }
        gaps.pop();
    }
    Timeline::new(d.crit, at_crit, gaps)
}

pub fn timeline_to_json<V: SnapshotJson>(t: &Timeline<V>) -> String {
    serde_json::to_string_pretty(&timeline_to_doc(t)).expect("serializable") + "\n"
}

pub fn timeline_from_json<V: SnapshotJson>(s: &str) -> Result<Timeline<V>> {
    let d: TimelineDoc<V::Doc> = serde_json::from_str(s)?;
    timeline_from_doc(d)
}

/// Kind tag of a JSON document, if present.
pub fn json_kind(s: &str) -> Result<Option<String>> {
    let v: serde_json::Value = serde_json::from_str(s)?;
    Ok(v.get("kind").and_then(|k| k.as_str()).map(str::to_string))
}

#[derive(Serialize, Deserialize)]
struct BarcodeDoc {
    kind: String,
    intervals: Vec<Interval>,
}

pub fn barcode_to_json(b: &Barcode) -> String {
    let d = BarcodeDoc {
        kind: "barcode".into(),
        intervals: b.intervals().to_vec(),
    };
    serde_json::to_string_pretty(&d).expect("serializable") + "\n"
}

pub fn barcode_from_json(s: &str) -> Result<Barcode> {
    let d: BarcodeDoc = serde_json::from_str(s)?;
    if d.kind != "barcode" {
        return Err(Error::Parse(format!(
            "expected kind `barcode`, found `{}`",
            d.kind
        )));
    }
    for iv in &d.intervals {
        Interval::new(
            iv.left.clone(),
            iv.left_closed,
            iv.right.clone(),
            iv.right_closed,
        )?;
    }
    Ok(Barcode::new(d.intervals))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formigram_round_trip() {
        let u = Universe::new(["a", "b"]);
        let p = SubPartition::from_ids(&u, [vec!["a", "b"]]).unwrap();
        let q = SubPartition::from_ids(&u, [vec!["a"], vec!["b"]]).unwrap();
        let t = Timeline::new(vec![Rat::new(1, 3)], vec![p.clone()], vec![q.clone(), q]).unwrap();
        let s = timeline_to_json(&t);
        assert!(s.contains("\"1/3\""));
        let back: Timeline<SubPartition> = timeline_from_json(&s).unwrap();
        assert_eq!(back, t);
        assert!(timeline_from_json::<Graph>(&s).is_err());
    }

    #[test]
    fn barcode_round_trip() {
        let b = Barcode::parse_list("(-inf,inf) [1/2,3)").unwrap();
        let s = barcode_to_json(&b);
        assert!(s.contains("\"-inf\""));
        assert_eq!(barcode_from_json(&s).unwrap(), b);
    }
}
