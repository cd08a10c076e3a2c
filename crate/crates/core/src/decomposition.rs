//! Gallai modular decomposition and canonical trees.
//!
//! The maximal strong modules are found by the textbook trichotomy: the
//! connected components when the graph is disconnected, the co-components
//! when its complement is disconnected, and otherwise the classes of the
//! relation "the smallest module containing both vertices is proper". The
//! whole decomposition costs O(n³) word operations, which is ample for the
//! graph sizes handled here.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::tree::{Decoration, DecoratedTree};

/// Top-level shape of a graph in the modular decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionKind {
    /// Complement disconnected: the modules are the co-components.
    Join,
    /// Graph disconnected: the modules are the components.
    Union,
    /// Graph and complement connected: the quotient is prime.
    Prime(LabeledGraph),
}

/// Maximal strong modules of a graph and the shape that groups them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPartition {
    pub kind: PartitionKind,
    /// Vertex-index sets, each sorted, ordered by smallest element.
    pub modules: Vec<Vec<usize>>,
}

/// Maximal strong modules of `g`, which must have at least two vertices and
/// no blossom.
pub fn modular_partition(g: &LabeledGraph) -> Result<ModularPartition> {
    if g.has_blossom() {
        return Err(Error::InvalidGraph("modular decomposition of a blossomed graph".into()));
    }
    if g.order() < 2 {
        return Err(Error::Domain("modular partition needs at least two vertices".into()));
    }
    let comps = g.components();
    if comps.len() > 1 {
        return Ok(ModularPartition { kind: PartitionKind::Union, modules: comps });
    }
    let co = g.complement()?.components();
    if co.len() > 1 {
        return Ok(ModularPartition { kind: PartitionKind::Join, modules: co });
    }
    let modules = maximal_modules(g);
    let reps: Vec<usize> = modules.iter().map(|m| m[0]).collect();
    Ok(ModularPartition { kind: PartitionKind::Prime(g.induced_on(&reps)), modules })
}

/// Maximal proper modules of a graph that is connected and co-connected;
/// they partition the vertex set.
fn maximal_modules(g: &LabeledGraph) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut assigned = FixedBitSet::with_capacity(n);
    let mut out = Vec::new();
    for v in 0..n {
        if assigned.contains(v) {
            continue;
        }
        let mut class = FixedBitSet::with_capacity(n);
        class.insert(v);
        for u in 0..n {
            if class.contains(u) || assigned.contains(u) {
                continue;
            }
            let mut seed = class.clone();
            seed.insert(u);
            let closure = g.module_closure(&seed);
            if closure.count_ones(..) < n {
                class = closure;
            }
        }
        assigned.union_with(&class);
        out.push(class.ones().collect());
    }
    out
}

/// Whether `g` is prime: at least three vertices and only trivial modules.
pub fn is_prime(g: &LabeledGraph) -> bool {
    let n = g.order();
    if n < 3 || g.has_blossom() {
        return false;
    }
    for u in 0..n {
        for v in u + 1..n {
            let mut seed = FixedBitSet::with_capacity(n);
            seed.insert(u);
            seed.insert(v);
            if g.module_closure(&seed).count_ones(..) < n {
                return false;
            }
        }
    }
    true
}

/// Canonical tree of a blossom-free graph; `graph_of` inverts it.
pub fn canonical_tree(g: &LabeledGraph) -> Result<DecoratedTree> {
    if g.has_blossom() {
        return Err(Error::InvalidGraph("canonical tree of a blossomed graph".into()));
    }
    let all: Vec<usize> = (0..g.order()).collect();
    Ok(build(g, &all))
}

fn build(g: &LabeledGraph, vertices: &[usize]) -> DecoratedTree {
    if vertices.len() == 1 {
        return DecoratedTree::leaf(vertices[0] + 1);
    }
    let sub = g.induced_on(vertices);
    let part = modular_partition(&sub).expect("at least two vertices, no blossom");
    let children: Vec<DecoratedTree> = part
        .modules
        .iter()
        .map(|m| {
            let members: Vec<usize> = m.iter().map(|&i| vertices[i]).collect();
            build(g, &members)
        })
        .collect();
    let decoration = match part.kind {
        PartitionKind::Join => Decoration::Join,
        PartitionKind::Union => Decoration::Union,
        PartitionKind::Prime(q) => Decoration::Prime(q),
    };
    DecoratedTree::node(decoration, children).expect("quotient arity matches")
}
