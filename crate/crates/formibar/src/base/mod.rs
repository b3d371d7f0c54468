//! Shared domain types: rationals, sub-partitions, (di)graphs, timelines,
//! intervals, barcodes and tripods.

mod dsu;
mod graph;
mod interval;
pub mod io;
mod partition;
mod rat;
mod timeline;
mod tripod;
mod universe;
mod validate;

pub use dsu::Dsu;
pub use graph::{Digraph, Graph};
pub use interval::{Barcode, Interval};
pub use partition::{block_label, SubPartition};
pub use rat::{Dist, Ext, Rat};
pub use timeline::{
    merge_times, DynamicDigraph, DynamicGraph, Formigram, Level, Snapshot, Timeline,
};
pub use tripod::{covering_relations, Tripod};
pub use universe::{Elem, Universe};
pub use validate::{validate, Report, Violation};
