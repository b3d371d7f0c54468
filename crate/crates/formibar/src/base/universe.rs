use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Element index into a [`Universe`].
pub type Elem = u32;

#[derive(Debug)]
struct Inner {
    ids: Vec<String>,
    index: HashMap<String, Elem>,
}

/// A finite, sorted set of opaque string ids shared by the values of a timeline.
#[derive(Clone)]
pub struct Universe(Arc<Inner>);

impl Universe {
    /// Sorts and deduplicates the ids.
    pub fn new<I, S>(ids: I) -> Universe
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        ids.sort();
        ids.dedup();
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as Elem))
            .collect();
        Universe(Arc::new(Inner { ids, index }))
    }

    pub fn empty() -> Universe {
        Universe::new(Vec::<String>::new())
    }

    pub fn len(&self) -> usize {
        self.0.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.0.ids
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.0.ids[x as usize]
    }

    pub fn elem(&self, id: &str) -> Result<Elem> {
        self.0
            .index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        0..self.len() as Elem
    }

    pub fn check_same(&self, other: &Universe) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::UniverseMismatch(format!(
                "{:?} vs {:?}",
                self.ids(),
                other.ids()
            )))
        }
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Universe) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.ids == other.0.ids
    }
}

impl Eq for Universe {}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Universe{:?}", self.0.ids)
    }
}
