//! Connected-component functors from (di)graphs to sub-partitions, applied
//! pointwise to dynamic (di)graphs.

use std::str::FromStr;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::base::{
    validate, Digraph, Dsu, DynamicDigraph, DynamicGraph, Elem, Formigram, Graph, SubPartition,
    Universe,
};
use crate::error::{Error, Result};

/// Clustering functor for digraphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    /// Components of the symmetrized graph.
    Weak,
    /// Components of the graph of mutual arcs.
    Reciprocal,
    /// Strongly connected components.
    Nonreciprocal,
}

impl FromStr for Functor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Functor> {
        match s {
            "weak" => Ok(Functor::Weak),
            "reciprocal" => Ok(Functor::Reciprocal),
            "nonreciprocal" => Ok(Functor::Nonreciprocal),
            _ => Err(Error::Parse(format!("unknown functor `{s}`"))),
        }
    }
}

fn components<'a, I>(
    u: &Universe,
    vertices: I,
    edges: impl Iterator<Item = (Elem, Elem)>,
) -> SubPartition
where
    I: Iterator<Item = &'a Elem>,
{
    let mut dsu = Dsu::new(u.len());
    for (a, b) in edges {
        dsu.union(a as usize, b as usize);
    }
    let mut labels = vec![None; u.len()];
    for &v in vertices {
        labels[v as usize] = Some(dsu.find(v as usize));
    }
    SubPartition::from_labels(u.clone(), &labels)
}

/// Connected components of an undirected graph over its vertex set.
pub fn pi0_graph(g: &Graph) -> SubPartition {
    components(g.universe(), g.vertices().iter(), g.edges().iter().copied())
}

/// Cluster a digraph with the chosen functor.
pub fn cluster_digraph(g: &Digraph, functor: Functor) -> SubPartition {
    let u = g.universe();
    match functor {
        Functor::Weak => components(u, g.vertices().iter(), g.arcs().iter().copied()),
        Functor::Reciprocal => components(
            u,
            g.vertices().iter(),
            g.arcs().iter().copied().filter(|&(a, b)| g.has_arc(b, a)),
        ),
        Functor::Nonreciprocal => {
            let verts: Vec<Elem> = g.vertices().iter().copied().collect();
            let mut pg = DiGraph::<Elem, ()>::new();
            let idx: Vec<_> = verts.iter().map(|&v| pg.add_node(v)).collect();
            let pos = |v: Elem| verts.binary_search(&v).expect("arc endpoint is a vertex");
            for &(a, b) in g.arcs() {
                pg.add_edge(idx[pos(a)], idx[pos(b)], ());
            }
            let mut labels = vec![None; u.len()];
            for (c, comp) in tarjan_scc(&pg).into_iter().enumerate() {
                for n in comp {
                    labels[pg[n] as usize] = Some(c);
                }
            }
            SubPartition::from_labels(u.clone(), &labels)
        }
    }
}

/// Pointwise connected components of a dynamic graph, with redundant critical times pruned.
pub fn pi0_dg(g: &DynamicGraph) -> Result<Formigram> {
    validate(g).into_result()?;
    Ok(g.map(pi0_graph).pruned())
}

/// Pointwise clustering of a dynamic digraph, with redundant critical times pruned.
pub fn cluster_ddg(g: &DynamicDigraph, functor: Functor) -> Result<Formigram> {
    validate(g).into_result()?;
    Ok(g.map(|d| cluster_digraph(d, functor)).pruned())
}
