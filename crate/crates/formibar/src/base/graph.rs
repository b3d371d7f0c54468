use std::collections::BTreeSet;
use std::fmt;

use super::universe::{Elem, Universe};
use crate::error::{Error, Result};

/// An undirected simple graph with optional self-loops. Edges are stored as `(min, max)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    universe: Universe,
    vertices: BTreeSet<Elem>,
    edges: BTreeSet<(Elem, Elem)>,
}

impl Graph {
    pub fn new<V, E>(universe: Universe, vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator<Item = Elem>,
        E: IntoIterator<Item = (Elem, Elem)>,
    {
        let vertices: BTreeSet<Elem> = vertices.into_iter().collect();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if !vertices.contains(&a) || !vertices.contains(&b) {
                return Err(Error::Invalid(format!(
                    "edge endpoint outside the vertex set: #{a}-#{b}"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        if let Some(&v) = vertices.iter().next_back() {
            if v as usize >= universe.len() {
                return Err(Error::UnknownElement(format!("#{v}")));
            }
        }
        Ok(Graph {
            universe,
            vertices,
            edges: set,
        })
    }

    /// A graph whose vertices all carry self-loops, plus the given edges.
    pub fn with_loops<V, E>(universe: Universe, vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator<Item = Elem>,
        E: IntoIterator<Item = (Elem, Elem)>,
    {
        let vertices: Vec<Elem> = vertices.into_iter().collect();
        let loops: Vec<(Elem, Elem)> = vertices.iter().map(|&v| (v, v)).collect();
        Graph::new(universe, vertices, edges.into_iter().chain(loops))
    }

    /// Same as [`Graph::with_loops`] with string ids.
    pub fn from_ids(
        universe: &Universe,
        vertices: &[&str],
        edges: &[(&str, &str)],
    ) -> Result<Graph> {
        let vs = vertices
            .iter()
            .map(|s| universe.elem(s))
            .collect::<Result<Vec<_>>>()?;
        let es = edges
            .iter()
            .map(|(a, b)| Ok((universe.elem(a)?, universe.elem(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::with_loops(universe.clone(), vs, es)
    }

    pub fn empty(universe: Universe) -> Graph {
        Graph {
            universe,
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn vertices(&self) -> &BTreeSet<Elem> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(Elem, Elem)> {
        &self.edges
    }

    pub fn has_edge(&self, a: Elem, b: Elem) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertices.is_subset(&other.vertices) && self.edges.is_subset(&other.edges)
    }

    pub fn union_with(&mut self, other: &Graph) {
        self.vertices.extend(other.vertices.iter().copied());
        self.edges.extend(other.edges.iter().copied());
    }

    pub fn missing_loops(&self) -> Vec<Elem> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| !self.edges.contains(&(v, v)))
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = &self.universe;
        let vs: Vec<&str> = self.vertices.iter().map(|&v| u.name(v)).collect();
        let es: Vec<String> = self
            .edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| format!("{}-{}", u.name(a), u.name(b)))
            .collect();
        write!(f, "G(V={vs:?}, E={es:?})")
    }
}

/// A directed graph; arcs are ordered pairs and self-loops are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    universe: Universe,
    vertices: BTreeSet<Elem>,
    arcs: BTreeSet<(Elem, Elem)>,
}

impl Digraph {
    pub fn new<V, A>(universe: Universe, vertices: V, arcs: A) -> Result<Digraph>
    where
        V: IntoIterator<Item = Elem>,
        A: IntoIterator<Item = (Elem, Elem)>,
    {
        let vertices: BTreeSet<Elem> = vertices.into_iter().collect();
        let arcs: BTreeSet<(Elem, Elem)> = arcs.into_iter().collect();
        if arcs
            .iter()
            .any(|(a, b)| !vertices.contains(a) || !vertices.contains(b))
        {
            return Err(Error::Invalid("arc endpoint outside the vertex set".into()));
        }
        if let Some(&v) = vertices.iter().next_back() {
            if v as usize >= universe.len() {
                return Err(Error::UnknownElement(format!("#{v}")));
            }
        }
        Ok(Digraph {
            universe,
            vertices,
            arcs,
        })
    }

    /// Vertices with self-loops plus the given arcs.
    pub fn with_loops<V, A>(universe: Universe, vertices: V, arcs: A) -> Result<Digraph>
    where
        V: IntoIterator<Item = Elem>,
        A: IntoIterator<Item = (Elem, Elem)>,
    {
        let vertices: Vec<Elem> = vertices.into_iter().collect();
        let loops: Vec<(Elem, Elem)> = vertices.iter().map(|&v| (v, v)).collect();
        Digraph::new(universe, vertices, arcs.into_iter().chain(loops))
    }

    pub fn from_ids(
        universe: &Universe,
        vertices: &[&str],
        arcs: &[(&str, &str)],
    ) -> Result<Digraph> {
        let vs = vertices
            .iter()
            .map(|s| universe.elem(s))
            .collect::<Result<Vec<_>>>()?;
        let es = arcs
            .iter()
            .map(|(a, b)| Ok((universe.elem(a)?, universe.elem(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Digraph::with_loops(universe.clone(), vs, es)
    }

    pub fn empty(universe: Universe) -> Digraph {
        Digraph {
            universe,
            vertices: BTreeSet::new(),
            arcs: BTreeSet::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn vertices(&self) -> &BTreeSet<Elem> {
        &self.vertices
    }

    pub fn arcs(&self) -> &BTreeSet<(Elem, Elem)> {
        &self.arcs
    }

    pub fn has_arc(&self, a: Elem, b: Elem) -> bool {
        self.arcs.contains(&(a, b))
    }

    pub fn is_subgraph_of(&self, other: &Digraph) -> bool {
        self.vertices.is_subset(&other.vertices) && self.arcs.is_subset(&other.arcs)
    }

    pub fn union_with(&mut self, other: &Digraph) {
        self.vertices.extend(other.vertices.iter().copied());
        self.arcs.extend(other.arcs.iter().copied());
    }

    pub fn missing_loops(&self) -> Vec<Elem> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| !self.arcs.contains(&(v, v)))
            .collect()
    }

    /// The underlying undirected graph.
    pub fn symmetrized(&self) -> Graph {
        Graph {
            universe: self.universe.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .arcs
                .iter()
                .map(|&(a, b)| (a.min(b), a.max(b)))
                .collect(),
        }
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = &self.universe;
        let vs: Vec<&str> = self.vertices.iter().map(|&v| u.name(v)).collect();
        let es: Vec<String> = self
            .arcs
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| format!("{}->{}", u.name(a), u.name(b)))
            .collect();
        write!(f, "D(V={vs:?}, A={es:?})")
    }
}
