//! Decorated non-plane trees: canonical trees, grammar trees and patterns.
//!
//! Children of an internal node are always stored sorted by the smallest
//! leaf label of their subtree. A `Prime` decoration is indexed in that same
//! order, so vertex `i` of the decoration stands for the `i`-th child. With
//! this normal form the derived structural equality is exactly equality of
//! non-plane trees.

use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, PartialInjection};

/// Decoration of an internal node.
///
/// `Join` and `Union` stand for the complete and the edgeless graph of the
/// node's arity. `Prime` holds any other graph; despite the name it is not
/// required to be prime, because restrictions of prime decorations that
/// appear in induced subtrees need not be.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Decoration {
    Join,
    Union,
    Prime(LabeledGraph),
}

impl Decoration {
    /// Normal form of a graph used as a decoration.
    pub fn from_graph(g: LabeledGraph) -> Self {
        if g.is_complete() {
            Decoration::Join
        } else if g.is_edgeless() {
            Decoration::Union
        } else {
            Decoration::Prime(g)
        }
    }

    /// Whether the decoration is `Join` or `Union`.
    pub fn is_linear(&self) -> bool {
        !matches!(self, Decoration::Prime(_))
    }

    /// The decoration as a graph on `arity` vertices.
    pub fn graph(&self, arity: usize) -> LabeledGraph {
        match self {
            Decoration::Join => LabeledGraph::complete(arity),
            Decoration::Union => LabeledGraph::empty(arity),
            Decoration::Prime(g) => g.clone(),
        }
    }

    /// Whether positions `i` and `j` are adjacent.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        match self {
            Decoration::Join => i != j,
            Decoration::Union => false,
            Decoration::Prime(g) => g.has_edge(i, j),
        }
    }

    /// Decoration obtained by exchanging `Join` and `Union` and
    /// complementing prime graphs.
    pub fn flipped(&self) -> Self {
        match self {
            Decoration::Join => Decoration::Union,
            Decoration::Union => Decoration::Join,
            Decoration::Prime(g) => Decoration::Prime(g.complement().expect("no blossom")),
        }
    }

    /// Restriction to the positions in `idx`, relabeled in that order.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        match self {
            Decoration::Join => Decoration::Join,
            Decoration::Union => Decoration::Union,
            Decoration::Prime(g) => Decoration::from_graph(g.induced_on(idx)),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Decoration::Join => "J",
            Decoration::Union => "U",
            Decoration::Prime(_) => "P",
        }
    }
}

/// Internal node of a [`DecoratedTree`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    decoration: Decoration,
    children: Vec<DecoratedTree>,
    min_label: usize,
    size: usize,
}

impl Node {
    /// Decoration of the node.
    pub fn decoration(&self) -> &Decoration {
        &self.decoration
    }

    /// Children sorted by smallest leaf label.
    pub fn children(&self) -> &[DecoratedTree] {
        &self.children
    }
}

/// Rooted non-plane tree with labeled leaves and decorated internal nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DecoratedTree {
    Leaf(usize),
    Node(Node),
}

impl DecoratedTree {
    /// Single leaf.
    pub fn leaf(label: usize) -> Self {
        DecoratedTree::Leaf(label)
    }

    /// Internal node; children are reordered by smallest leaf label and a
    /// prime decoration (given in the order of `children`) is relabeled
    /// accordingly. Complete or edgeless prime decorations are normalized
    /// to `Join` or `Union`.
    pub fn node(decoration: Decoration, children: Vec<DecoratedTree>) -> Result<Self> {
        let k = children.len();
        if k < 2 {
            return Err(Error::InvalidTree(format!("internal node with {k} children")));
        }
        if let Decoration::Prime(g) = &decoration {
            if g.has_blossom() {
                return Err(Error::InvalidTree("decorations carry no blossom".into()));
            }
            if g.order() != k {
                return Err(Error::InvalidTree(format!(
                    "decoration of size {} on a node with {k} children",
                    g.order()
                )));
            }
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| children[i].min_label());
        let decoration = match decoration {
            Decoration::Prime(g) => {
                if order.iter().enumerate().all(|(i, &o)| i == o) {
                    Decoration::from_graph(g)
                } else {
                    Decoration::from_graph(g.induced_on(&order))
                }
            }
            linear => linear,
        };
        let mut slots: Vec<Option<DecoratedTree>> = children.into_iter().map(Some).collect();
        let children: Vec<DecoratedTree> =
            order.iter().map(|&i| slots[i].take().expect("each index once")).collect();
        let size = children.iter().map(DecoratedTree::size).sum();
        let min_label = children[0].min_label();
        Ok(DecoratedTree::Node(Node { decoration, children, min_label, size }))
    }

    /// `Join` node over the given children.
    pub fn join(children: Vec<DecoratedTree>) -> Result<Self> {
        Self::node(Decoration::Join, children)
    }

    /// `Union` node over the given children.
    pub fn union(children: Vec<DecoratedTree>) -> Result<Self> {
        Self::node(Decoration::Union, children)
    }

    /// Node decorated with `g`, children listed in vertex order of `g`.
    pub fn prime(g: LabeledGraph, children: Vec<DecoratedTree>) -> Result<Self> {
        Self::node(Decoration::Prime(g), children)
    }

    /// Node decorated with `g` whose children are the leaves `1..=|g|`.
    pub fn prime_of_leaves(g: LabeledGraph) -> Self {
        let k = g.order();
        Self::prime(g, (1..=k).map(Self::leaf).collect()).expect("arity matches")
    }

    /// Number of leaves.
    pub fn size(&self) -> usize {
        match self {
            DecoratedTree::Leaf(_) => 1,
            DecoratedTree::Node(n) => n.size,
        }
    }

    /// Smallest leaf label.
    pub fn min_label(&self) -> usize {
        match self {
            DecoratedTree::Leaf(l) => *l,
            DecoratedTree::Node(n) => n.min_label,
        }
    }

    /// Whether the tree is a single leaf.
    pub fn is_leaf(&self) -> bool {
        matches!(self, DecoratedTree::Leaf(_))
    }

    /// The root node, unless the tree is a leaf.
    pub fn as_node(&self) -> Option<&Node> {
        match self {
            DecoratedTree::Leaf(_) => None,
            DecoratedTree::Node(n) => Some(n),
        }
    }

    /// Root decoration, unless the tree is a leaf.
    pub fn decoration(&self) -> Option<&Decoration> {
        self.as_node().map(Node::decoration)
    }

    /// Children of the root (empty for a leaf).
    pub fn children(&self) -> &[DecoratedTree] {
        match self {
            DecoratedTree::Leaf(_) => &[],
            DecoratedTree::Node(n) => &n.children,
        }
    }

    /// Leaf labels in depth-first order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            DecoratedTree::Leaf(l) => out.push(*l),
            DecoratedTree::Node(n) => n.children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Number of internal nodes.
    pub fn internal_count(&self) -> usize {
        match self {
            DecoratedTree::Leaf(_) => 0,
            DecoratedTree::Node(n) => 1 + n.children.iter().map(Self::internal_count).sum::<usize>(),
        }
    }

    /// Visits every internal node in preorder.
    pub fn for_each_node<'a>(&'a self, f: &mut impl FnMut(&'a Node)) {
        if let DecoratedTree::Node(n) = self {
            f(n);
            for c in &n.children {
                c.for_each_node(f);
            }
        }
    }

    /// Whether the leaf labels are exactly `1..=size`.
    pub fn is_substitution_tree(&self) -> bool {
        let n = self.size();
        let mut seen = FixedBitSet::with_capacity(n + 1);
        for l in self.leaves() {
            if l == 0 || l > n || seen.contains(l) {
                return false;
            }
            seen.insert(l);
        }
        true
    }

    /// Whether the tree satisfies the canonical-tree constraints: no `Join`
    /// child under `Join`, no `Union` child under `Union`, and every
    /// non-linear decoration prime.
    pub fn is_canonical(&self) -> bool {
        match self {
            DecoratedTree::Leaf(_) => true,
            DecoratedTree::Node(n) => {
                let ok_here = match &n.decoration {
                    Decoration::Prime(g) => crate::decomposition::is_prime(g),
                    linear => n.children.iter().all(|c| c.decoration() != Some(linear)),
                };
                ok_here && n.children.iter().all(Self::is_canonical)
            }
        }
    }

    /// Tree with `Join`/`Union` exchanged and prime decorations
    /// complemented; its graph is the complement of this tree's graph.
    pub fn flipped(&self) -> Self {
        match self {
            DecoratedTree::Leaf(l) => DecoratedTree::Leaf(*l),
            DecoratedTree::Node(n) => DecoratedTree::Node(Node {
                decoration: n.decoration.flipped(),
                children: n.children.iter().map(Self::flipped).collect(),
                min_label: n.min_label,
                size: n.size,
            }),
        }
    }

    /// Tree with every leaf label `l` replaced by `map(l)`.
    pub fn relabeled(&self, map: &impl Fn(usize) -> usize) -> Self {
        match self {
            DecoratedTree::Leaf(l) => DecoratedTree::Leaf(map(*l)),
            DecoratedTree::Node(n) => Self::node(
                n.decoration.clone(),
                n.children.iter().map(|c| c.relabeled(map)).collect(),
            )
            .expect("relabeling keeps arities"),
        }
    }

    /// The graph `Graph(t)` of a substitution tree.
    pub fn graph_of(&self) -> Result<LabeledGraph> {
        if !self.is_substitution_tree() {
            return Err(Error::InvalidTree("leaf labels are not exactly 1..=size".into()));
        }
        let mut g = LabeledGraph::new(self.size());
        self.fill_edges(&mut g);
        Ok(g)
    }

    /// Adds the edges of `Graph(self)` to `g` and returns the leaf set.
    fn fill_edges(&self, g: &mut LabeledGraph) -> FixedBitSet {
        match self {
            DecoratedTree::Leaf(l) => {
                let mut s = FixedBitSet::with_capacity(g.order());
                s.insert(l - 1);
                s
            }
            DecoratedTree::Node(n) => {
                let sets: Vec<FixedBitSet> = n.children.iter().map(|c| c.fill_edges(g)).collect();
                for i in 0..sets.len() {
                    for j in i + 1..sets.len() {
                        if n.decoration.adjacent(i, j) {
                            g.connect_sets(&sets[i], &sets[j]);
                        }
                    }
                }
                let mut all = FixedBitSet::with_capacity(g.order());
                sets.iter().for_each(|s| all.union_with(s));
                all
            }
        }
    }

    /// Induced subtree `t_𝕴`: the marked leaves (relabeled by their marks)
    /// and the first common ancestors of marked leaves, with decorations
    /// restricted to the children that contain a mark.
    pub fn induced_subtree(&self, inj: &PartialInjection) -> Result<Self> {
        if inj.is_empty() {
            return Err(Error::Domain("induced subtree of an empty marking".into()));
        }
        let found = self.induce(inj);
        match found {
            Some((t, count)) if count == inj.len() => Ok(t),
            _ => Err(Error::Domain("the injection marks labels absent from the tree".into())),
        }
    }

    /// Returns the induced subtree of the marked leaves below `self` and the
    /// number of marked leaves found.
    fn induce(&self, inj: &PartialInjection) -> Option<(Self, usize)> {
        match self {
            DecoratedTree::Leaf(l) => inj.get(*l).map(|m| (DecoratedTree::Leaf(m), 1)),
            DecoratedTree::Node(n) => {
                let mut idx = Vec::new();
                let mut parts = Vec::new();
                let mut count = 0;
                for (i, c) in n.children.iter().enumerate() {
                    if let Some((t, k)) = c.induce(inj) {
                        idx.push(i);
                        parts.push(t);
                        count += k;
                    }
                }
                match parts.len() {
                    0 => None,
                    1 => parts.pop().map(|t| (t, count)),
                    _ => {
                        let dec = n.decoration.restrict(&idx);
                        Some((Self::node(dec, parts).expect("restriction keeps arity"), count))
                    }
                }
            }
        }
    }

    /// S-expression form: leaves are labels, `(J …)`, `(U …)` and
    /// `(P <graph-json> …)` with children in decoration order.
    pub fn to_sexp(&self) -> String {
        let mut out = String::new();
        self.write_sexp(&mut out);
        out
    }

    fn write_sexp(&self, out: &mut String) {
        match self {
            DecoratedTree::Leaf(l) => {
                let _ = write!(out, "{l}");
            }
            DecoratedTree::Node(n) => {
                out.push('(');
                out.push_str(n.decoration.symbol());
                if let Decoration::Prime(g) = &n.decoration {
                    out.push(' ');
                    out.push_str(&g.to_json_string());
                }
                for c in &n.children {
                    out.push(' ');
                    c.write_sexp(out);
                }
                out.push(')');
            }
        }
    }

    /// Parses the S-expression form produced by [`DecoratedTree::to_sexp`].
    /// Children of a `P` node may be listed in any order; they are matched
    /// with the decoration's vertices in the order written.
    pub fn parse_sexp(text: &str) -> Result<Self> {
        let mut parser = SexpParser { text: text.as_bytes(), pos: 0 };
        let t = parser.tree()?;
        parser.skip_ws();
        if parser.pos != parser.text.len() {
            return Err(Error::Parse(format!("trailing input at byte {}", parser.pos)));
        }
        Ok(t)
    }

    /// Graphviz rendering for visual debugging.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n  node [shape=circle];\n");
        let mut next = 0usize;
        self.write_dot(&mut out, &mut next);
        out.push_str("}\n");
        out
    }

    fn write_dot(&self, out: &mut String, next: &mut usize) -> usize {
        let id = *next;
        *next += 1;
        match self {
            DecoratedTree::Leaf(l) => {
                let _ = writeln!(out, "  n{id} [label=\"{l}\", shape=box];");
            }
            DecoratedTree::Node(n) => {
                let label = match &n.decoration {
                    Decoration::Join => "⊕".to_string(),
                    Decoration::Union => "⊖".to_string(),
                    Decoration::Prime(g) => format!("{g:?}").replace('"', "'"),
                };
                let _ = writeln!(out, "  n{id} [label=\"{label}\"];");
                for c in &n.children {
                    let cid = c.write_dot(out, next);
                    let _ = writeln!(out, "  n{id} -> n{cid};");
                }
            }
        }
        id
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexp())
    }
}

struct SexpParser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl SexpParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn atom(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an atom"));
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos]).expect("ascii"))
    }

    fn json_object(&mut self) -> Result<LabeledGraph> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        while self.pos < self.text.len() {
            match self.text[self.pos] {
                b'{' => depth += 1,
                b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += 1;
                        let slice = std::str::from_utf8(&self.text[start..self.pos])
                            .map_err(|e| Error::Parse(e.to_string()))?;
                        return LabeledGraph::from_json_str(slice);
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        Err(self.error("unterminated graph object"))
    }

    fn tree(&mut self) -> Result<DecoratedTree> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let head = self.atom()?.to_string();
                let decoration = match head.as_str() {
                    "J" => Decoration::Join,
                    "U" => Decoration::Union,
                    "P" => {
                        if self.peek() != Some(b'{') {
                            return Err(self.error("expected a graph object after P"));
                        }
                        Decoration::Prime(self.json_object()?)
                    }
                    other => return Err(self.error(&format!("unknown node kind {other:?}"))),
                };
                let mut children = Vec::new();
                while self.peek() != Some(b')') {
                    if self.peek().is_none() {
                        return Err(self.error("unbalanced parenthesis"));
                    }
                    children.push(self.tree()?);
                }
                self.pos += 1;
                DecoratedTree::node(decoration, children)
            }
            Some(c) if c.is_ascii_digit() => {
                let atom = self.atom()?;
                let label: usize = atom.parse().map_err(|_| Error::Parse(format!("bad label {atom}")))?;
                if label == 0 {
                    return Err(Error::Parse("leaf labels are positive".into()));
                }
                Ok(DecoratedTree::Leaf(label))
            }
            _ => Err(self.error("expected a tree")),
        }
    }
}
