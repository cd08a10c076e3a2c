//! Labeled simple graphs with optional blossoms.
//!
//! A [`LabeledGraph`] stores its vertices in a fixed order: the labeled
//! vertices come first, vertex index `v` carrying label `v + 1`, and the
//! blossoms (placeholder vertices written `*`, `*_0` or `*_1`) come last.
//! With that convention the labeling is implicit, two labeled graphs are
//! equal exactly when their adjacency rows and blossom tags agree, and the
//! label reduction applied after a quotient is just a re-indexing.

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest graph accepted by the exhaustive isomorphism routines.
pub const ISOMORPHISM_BOUND: usize = 12;

/// Flavour of a blossom vertex.
///
/// A graph carries no blossom, one [`BlossomTag::Plain`] blossom, or exactly
/// two blossoms tagged [`BlossomTag::Zero`] and [`BlossomTag::One`] (the
/// result of a second quotient taken on a graph that already had a blossom).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlossomTag {
    Plain,
    Zero,
    One,
}

/// How [`LabeledGraph::blossom_quotient`] names the blossoms it produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlossomMode {
    /// The graph has no blossom; the collapsed module becomes `*`.
    Plain,
    /// The existing blossom becomes `*_0` and the new one `*_1`.
    KeepZero,
    /// The existing blossom becomes `*_1` and the new one `*_0`.
    KeepOne,
}

/// Finite simple graph whose non-blossom vertices are labeled `1..=N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    rows: Vec<FixedBitSet>,
    blossoms: Vec<BlossomTag>,
}

impl LabeledGraph {
    /// Edgeless graph on `labeled` labeled vertices and no blossom.
    pub fn new(labeled: usize) -> Self {
        Self {
            rows: (0..labeled).map(|_| FixedBitSet::with_capacity(labeled)).collect(),
            blossoms: Vec::new(),
        }
    }

    /// Edgeless graph on `labeled` labeled vertices followed by blossoms.
    ///
    /// Accepted tag lists are `[]`, `[Plain]` and `[Zero, One]`.
    pub fn with_blossoms(labeled: usize, tags: &[BlossomTag]) -> Result<Self> {
        match tags {
            [] | [BlossomTag::Plain] | [BlossomTag::Zero, BlossomTag::One] => {}
            _ => {
                return Err(Error::InvalidGraph(format!(
                    "unsupported blossom configuration {tags:?}"
                )))
            }
        }
        let n = labeled + tags.len();
        Ok(Self {
            rows: (0..n).map(|_| FixedBitSet::with_capacity(n)).collect(),
            blossoms: tags.to_vec(),
        })
    }

    /// Graph on `labeled` labeled vertices with the given edges between
    /// zero-based vertex indices (index `v` has label `v + 1`).
    pub fn from_edges(labeled: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(labeled);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Complete graph on `k` vertices.
    pub fn complete(k: usize) -> Self {
        let mut g = Self::new(k);
        for u in 0..k {
            for v in u + 1..k {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Edgeless graph on `k` vertices.
    pub fn empty(k: usize) -> Self {
        Self::new(k)
    }

    /// Path `1 - 2 - … - k`.
    pub fn path(k: usize) -> Self {
        let mut g = Self::new(k);
        for v in 1..k {
            g.add_edge(v - 1, v);
        }
        g
    }

    /// Cycle `1 - 2 - … - k - 1`.
    pub fn cycle(k: usize) -> Self {
        let mut g = Self::path(k);
        if k >= 3 {
            g.add_edge(0, k - 1);
        }
        g
    }

    /// Total number of vertices, blossoms included.
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// Number of labeled vertices, written `N(G)`.
    pub fn labeled_count(&self) -> usize {
        self.rows.len() - self.blossoms.len()
    }

    /// Tags of the blossoms, in vertex order.
    pub fn blossom_tags(&self) -> &[BlossomTag] {
        &self.blossoms
    }

    /// Whether the graph has at least one blossom.
    pub fn has_blossom(&self) -> bool {
        !self.blossoms.is_empty()
    }

    /// Index of the unique blossom, if the graph has exactly one.
    pub fn blossom_vertex(&self) -> Option<usize> {
        (self.blossoms.len() == 1).then(|| self.labeled_count())
    }

    /// Whether vertex `v` is a blossom.
    pub fn is_blossom(&self, v: usize) -> bool {
        v >= self.labeled_count()
    }

    /// Blossom tag of vertex `v`, `None` for labeled vertices.
    pub fn tag(&self, v: usize) -> Option<BlossomTag> {
        v.checked_sub(self.labeled_count()).map(|i| self.blossoms[i])
    }

    /// Label of vertex `v`, `None` for blossoms.
    pub fn label(&self, v: usize) -> Option<usize> {
        (!self.is_blossom(v)).then_some(v + 1)
    }

    /// Whether `u` and `v` are adjacent.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    /// Adds the edge `{u, v}`; panics on out-of-range indices or loops.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "simple graphs have no loops");
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.order();
        if u >= n || v >= n || u == v {
            return Err(Error::InvalidGraph(format!("bad edge ({u}, {v}) on {n} vertices")));
        }
        self.add_edge(u, v);
        Ok(())
    }

    /// Removes the edge `{u, v}` if present.
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].set(v, false);
        self.rows[v].set(u, false);
    }

    /// Makes every vertex of `a` adjacent to every vertex of `b` (the sets
    /// must be disjoint).
    pub(crate) fn connect_sets(&mut self, a: &FixedBitSet, b: &FixedBitSet) {
        for u in a.ones() {
            self.rows[u].union_with(b);
        }
        for v in b.ones() {
            self.rows[v].union_with(a);
        }
    }

    /// Neighbourhood of `v` as a bitset over vertex indices.
    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    /// Degree of `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones(..)
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.order() {
            out.extend(self.rows[u].ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Whether every pair of distinct vertices is adjacent.
    pub fn is_complete(&self) -> bool {
        let n = self.order();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    /// Whether the graph has no edge.
    pub fn is_edgeless(&self) -> bool {
        self.rows.iter().all(|r| r.is_clear())
    }

    /// Set of all vertices.
    pub fn vertex_set(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.order());
        s.insert_range(..);
        s
    }

    /// Complementary graph; labels are preserved.
    pub fn complement(&self) -> Result<Self> {
        if self.has_blossom() {
            return Err(Error::InvalidGraph("complement of a graph with blossoms".into()));
        }
        let n = self.order();
        let mut g = self.clone();
        for v in 0..n {
            g.rows[v].toggle_range(..);
            g.rows[v].set(v, false);
        }
        Ok(g)
    }

    /// Subgraph induced by labeled vertices listed in `vertices`; the i-th
    /// listed vertex receives label `i + 1`.
    pub fn induced_on(&self, vertices: &[usize]) -> Self {
        let k = vertices.len();
        let mut g = Self::new(k);
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Relabels the labeled vertices: old index `v` moves to `perm[v]`.
    /// Blossoms keep their positions.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let labeled = self.labeled_count();
        debug_assert_eq!(perm.len(), labeled);
        let image = |v: usize| if v < labeled { perm[v] } else { v };
        let mut g = Self::with_blossoms(labeled, &self.blossoms).expect("tags already valid");
        for (u, v) in self.edges() {
            g.add_edge(image(u), image(v));
        }
        g
    }

    /// Labeled subgraph `G_𝕴`: keeps the vertices whose labels lie in the
    /// domain of `inj`, ordered by their marks (marks are then reduced to
    /// `1..=k`, which is the identity when they already are `1..=k`).
    pub fn induced_subgraph(&self, inj: &PartialInjection) -> Result<Self> {
        let mut by_mark: Vec<(usize, usize)> = Vec::with_capacity(inj.len());
        for (label, mark) in inj.iter() {
            if label == 0 || label > self.labeled_count() {
                return Err(Error::InvalidGraph(format!(
                    "label {label} is not a labeled vertex of the host"
                )));
            }
            by_mark.push((mark, label - 1));
        }
        by_mark.sort_unstable();
        let order: Vec<usize> = by_mark.into_iter().map(|(_, v)| v).collect();
        Ok(self.induced_on(&order))
    }

    /// Substitution `outer[parts]`: vertex `i` of `outer` is replaced by
    /// `parts[i]`, whose labels are shifted past those of earlier parts.
    pub fn substitute(outer: &Self, parts: &[Self]) -> Result<Self> {
        if outer.has_blossom() || parts.iter().any(Self::has_blossom) {
            return Err(Error::InvalidGraph("substitution of graphs with blossoms".into()));
        }
        if outer.order() != parts.len() {
            return Err(Error::InvalidGraph(format!(
                "outer graph has {} vertices but {} parts were given",
                outer.order(),
                parts.len()
            )));
        }
        let mut offsets = Vec::with_capacity(parts.len());
        let mut total = 0;
        for p in parts {
            offsets.push(total);
            total += p.order();
        }
        let mut g = Self::new(total);
        for (i, p) in parts.iter().enumerate() {
            for (u, v) in p.edges() {
                g.add_edge(offsets[i] + u, offsets[i] + v);
            }
        }
        for (a, b) in outer.edges() {
            for u in 0..parts[a].order() {
                for v in 0..parts[b].order() {
                    g.add_edge(offsets[a] + u, offsets[b] + v);
                }
            }
        }
        Ok(g)
    }

    /// Join `⊕[parts]`.
    pub fn join(parts: &[Self]) -> Result<Self> {
        Self::substitute(&Self::complete(parts.len()), parts)
    }

    /// Disjoint union `⊖[parts]`.
    pub fn union(parts: &[Self]) -> Result<Self> {
        Self::substitute(&Self::empty(parts.len()), parts)
    }

    /// Whether `set` is a module: every vertex outside it sees all or none
    /// of it.
    pub fn is_module(&self, set: &FixedBitSet) -> bool {
        let Some(first) = set.ones().next() else {
            return true;
        };
        set.ones().all(|m| {
            let mut diff = self.rows[m].clone();
            diff.symmetric_difference_with(&self.rows[first]);
            diff.difference_with(set);
            diff.is_clear()
        })
    }

    /// Smallest module containing `seed` (which must be non-empty).
    ///
    /// A vertex outside the current set splits it when its adjacency differs
    /// between two members; comparing every new member with a fixed one is
    /// enough to find all splitters.
    pub fn module_closure(&self, seed: &FixedBitSet) -> FixedBitSet {
        let mut set = seed.clone();
        let Some(anchor) = set.ones().next() else {
            return set;
        };
        let mut queue: Vec<usize> = set.ones().collect();
        while let Some(x) = queue.pop() {
            let mut split = self.rows[x].clone();
            split.symmetric_difference_with(&self.rows[anchor]);
            split.difference_with(&set);
            for z in split.ones() {
                set.insert(z);
                queue.push(z);
            }
        }
        set
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for s in 0..n {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for v in self.rows[u].ones() {
                    if !seen.contains(v) {
                        seen.insert(v);
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether the graph is connected (the empty graph counts as connected).
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Quotient `blo_M(G)`: the module `M` is replaced by a blossom adjacent
    /// to exactly the vertices complete to `M`, then labels are reduced.
    pub fn blossom_quotient(&self, module: &[usize], mode: BlossomMode) -> Result<Self> {
        if module.is_empty() {
            return Err(Error::InvalidGraph("empty module".into()));
        }
        let n = self.order();
        let mut set = FixedBitSet::with_capacity(n);
        for &m in module {
            if m >= n {
                return Err(Error::InvalidGraph(format!("vertex {m} out of range")));
            }
            if self.is_blossom(m) {
                return Err(Error::InvalidGraph("the module contains a blossom".into()));
            }
            set.insert(m);
        }
        if !self.is_module(&set) {
            return Err(Error::InvalidGraph("the vertex set is not a module".into()));
        }
        let old_blossom = match (mode, self.blossoms.as_slice()) {
            (BlossomMode::Plain, []) => None,
            (BlossomMode::KeepZero | BlossomMode::KeepOne, [BlossomTag::Plain]) => {
                Some(self.labeled_count())
            }
            _ => {
                return Err(Error::InvalidGraph(format!(
                    "blossom mode {mode:?} does not match {} blossom(s)",
                    self.blossoms.len()
                )))
            }
        };
        let kept: Vec<usize> = (0..self.labeled_count()).filter(|v| !set.contains(*v)).collect();
        let anchor = module[0];
        // Vertex list of the result, in index order, as (source, is_new).
        let mut sources: Vec<Option<usize>> = kept.iter().map(|&v| Some(v)).collect();
        let tags = match (mode, old_blossom) {
            (BlossomMode::Plain, _) => {
                sources.push(None);
                vec![BlossomTag::Plain]
            }
            (BlossomMode::KeepZero, Some(b)) => {
                sources.push(Some(b));
                sources.push(None);
                vec![BlossomTag::Zero, BlossomTag::One]
            }
            (BlossomMode::KeepOne, Some(b)) => {
                sources.push(None);
                sources.push(Some(b));
                vec![BlossomTag::Zero, BlossomTag::One]
            }
            _ => unreachable!("validated above"),
        };
        let mut g = Self::with_blossoms(kept.len(), &tags)?;
        let adjacent = |a: Option<usize>, b: Option<usize>| match (a, b) {
            (Some(x), Some(y)) => self.has_edge(x, y),
            (Some(x), None) | (None, Some(x)) => self.has_edge(x, anchor),
            (None, None) => false,
        };
        for i in 0..sources.len() {
            for j in i + 1..sources.len() {
                if adjacent(sources[i], sources[j]) {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Induced P4's, each reported once as a path `[a, b, c, d]` with
    /// midpoints `b < c`.
    pub fn induced_p4s(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for (b, c) in self.edges() {
            let (ends_b, ends_c) = self.p4_ends(b, c);
            for a in ends_b.ones() {
                for d in ends_c.ones() {
                    if !self.has_edge(a, d) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        out
    }

    /// Number of induced P4's (as vertex sets).
    pub fn induced_p4_count(&self) -> u64 {
        let mut total = 0u64;
        for (b, c) in self.edges() {
            let (ends_b, ends_c) = self.p4_ends(b, c);
            let nb = ends_b.count_ones(..) as u64;
            let nc = ends_c.count_ones(..) as u64;
            if nb == 0 || nc == 0 {
                continue;
            }
            let mut linked = 0u64;
            for a in ends_b.ones() {
                linked += self.rows[a].intersection_count(&ends_c) as u64;
            }
            total += nb * nc - linked;
        }
        total
    }

    /// Candidate endpoints of an induced P4 with middle edge `{b, c}`:
    /// neighbours of `b` missing `c`, and neighbours of `c` missing `b`.
    fn p4_ends(&self, b: usize, c: usize) -> (FixedBitSet, FixedBitSet) {
        let mut ends_b = self.rows[b].clone();
        ends_b.difference_with(&self.rows[c]);
        ends_b.set(c, false);
        let mut ends_c = self.rows[c].clone();
        ends_c.difference_with(&self.rows[b]);
        ends_c.set(b, false);
        (ends_b, ends_c)
    }

    /// Serializable edge-list form with one-based vertex ids.
    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.order(),
            edges: self.edges().into_iter().map(|(u, v)| [u + 1, v + 1]).collect(),
            blossoms: (self.labeled_count()..self.order()).map(|v| v + 1).collect(),
        }
    }

    /// Builds a graph from its edge-list form. Non-blossom ids are reduced
    /// to labels `1..=N` in increasing order; with two blossoms the first
    /// listed is `*_0` and the second `*_1`.
    pub fn from_json(data: &GraphJson) -> Result<Self> {
        let n = data.n;
        let mut is_blossom = vec![false; n + 1];
        for &b in &data.blossoms {
            if b == 0 || b > n || is_blossom[b] {
                return Err(Error::InvalidGraph(format!("bad blossom id {b}")));
            }
            is_blossom[b] = true;
        }
        let tags: Vec<BlossomTag> = match data.blossoms.len() {
            0 => vec![],
            1 => vec![BlossomTag::Plain],
            2 => vec![BlossomTag::Zero, BlossomTag::One],
            k => return Err(Error::InvalidGraph(format!("{k} blossoms are not supported"))),
        };
        let labeled = n - data.blossoms.len();
        let mut index = vec![usize::MAX; n + 1];
        let mut next = 0;
        for id in 1..=n {
            if !is_blossom[id] {
                index[id] = next;
                next += 1;
            }
        }
        for (i, &b) in data.blossoms.iter().enumerate() {
            index[b] = labeled + i;
        }
        let mut g = Self::with_blossoms(labeled, &tags)?;
        for &[u, v] in &data.edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidGraph(format!("edge [{u}, {v}] out of range")));
            }
            g.try_add_edge(index[u], index[v])?;
        }
        Ok(g)
    }

    /// Parses the JSON edge-list format.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let data: GraphJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&data)
    }

    /// Compact JSON text of the edge-list format.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data always serializes")
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph{{n={}", self.order())?;
        if self.has_blossom() {
            write!(f, ", blossoms={:?}", self.blossoms)?;
        }
        write!(f, ", edges=[")?;
        for (i, (u, v)) in self.edges().into_iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}-{}", u + 1, v + 1)?;
        }
        write!(f, "]}}")
    }
}

/// Edge-list interchange format `{n, edges: [[i, j], …], blossoms: [i, …]}`
/// with one-based vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub blossoms: Vec<usize>,
}

/// Injective partial map from host labels to positive marks, written `𝕴`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartialInjection {
    map: BTreeMap<usize, usize>,
}

impl PartialInjection {
    /// Builds an injection from `(label, mark)` pairs.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut marks = std::collections::BTreeSet::new();
        for (label, mark) in pairs {
            if mark == 0 {
                return Err(Error::Domain("marks are positive integers".into()));
            }
            if map.insert(label, mark).is_some() || !marks.insert(mark) {
                return Err(Error::Domain(format!(
                    "label {label} or mark {mark} used twice"
                )));
            }
        }
        Ok(Self { map })
    }

    /// Identity on labels `1..=n`.
    pub fn identity(n: usize) -> Self {
        Self { map: (1..=n).map(|l| (l, l)).collect() }
    }

    /// Mark of `label`, if marked.
    pub fn get(&self, label: usize) -> Option<usize> {
        self.map.get(&label).copied()
    }

    /// Size of the domain.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    /// Whether no label is marked.
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `(label, mark)` pairs by increasing label.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().map(|(&l, &m)| (l, m))
    }
}

/// Every labeled graph on `n` vertices, `2^(n(n−1)/2)` of them, in the
/// order of their edge masks. Intended for exhaustive checks at small `n`.
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = LabeledGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    assert!(pairs.len() < 64, "too many graphs to enumerate");
    (0u64..(1 << pairs.len())).map(move |mask| {
        let mut g = LabeledGraph::new(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    })
}

/// Blossom handling for [`count_occurrences`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OccurrenceMode {
    /// Only labeled host vertices may be marked.
    IgnoreBlossom,
    /// The host blossom must be marked, and receive mark `a` (one-based).
    FixedMark(usize),
}

/// Number of partial injections `𝕴` from host labels (and, in fixed-mark
/// mode, the blossom) such that the induced labeled graph equals `pattern`
/// exactly, labels included.
pub fn count_occurrences(
    pattern: &LabeledGraph,
    host: &LabeledGraph,
    mode: OccurrenceMode,
) -> Result<u128> {
    if pattern.has_blossom() {
        return Err(Error::InvalidGraph("patterns carry no blossom".into()));
    }
    if host.blossom_tags().len() > 1 {
        return Err(Error::InvalidGraph("hosts carry at most one blossom".into()));
    }
    let k = pattern.order();
    let mut labeled = FixedBitSet::with_capacity(host.order());
    labeled.insert_range(..host.labeled_count());
    let forced = match mode {
        OccurrenceMode::IgnoreBlossom => None,
        OccurrenceMode::FixedMark(a) => {
            let b = host.blossom_vertex().ok_or_else(|| {
                Error::InvalidGraph("fixed-mark counting needs a host blossom".into())
            })?;
            if a == 0 || a > k {
                return Err(Error::Domain(format!("mark {a} outside 1..={k}")));
            }
            Some((a - 1, b))
        }
    };
    let allowed: Vec<FixedBitSet> = (0..k)
        .map(|i| match forced {
            Some((p, b)) if p == i => {
                let mut s = FixedBitSet::with_capacity(host.order());
                s.insert(b);
                s
            }
            _ => labeled.clone(),
        })
        .collect();
    Ok(count_embeddings(pattern, host, &allowed, None))
}

/// Counts injective maps `x` from pattern vertices to host vertices with
/// `x(i) ∈ allowed[i]` and `pattern.has_edge(i, j) == host.has_edge(x(i), x(j))`,
/// stopping early once `limit` is reached.
fn count_embeddings(
    pattern: &LabeledGraph,
    host: &LabeledGraph,
    allowed: &[FixedBitSet],
    limit: Option<u128>,
) -> u128 {
    let k = pattern.order();
    if k == 0 {
        return 1;
    }
    let mut assign = vec![0usize; k];
    let mut total = 0u128;
    embed_level(pattern, host, allowed, &mut assign, 0, &mut total, limit);
    total
}

fn embed_level(
    pattern: &LabeledGraph,
    host: &LabeledGraph,
    allowed: &[FixedBitSet],
    assign: &mut [usize],
    i: usize,
    total: &mut u128,
    limit: Option<u128>,
) {
    let mut cand = allowed[i].clone();
    for (j, &x) in assign[..i].iter().enumerate() {
        if pattern.has_edge(i, j) {
            cand.intersect_with(host.neighbors(x));
        } else {
            cand.difference_with(host.neighbors(x));
        }
        cand.set(x, false);
    }
    if i + 1 == assign.len() {
        *total += cand.count_ones(..) as u128;
        return;
    }
    for v in cand.ones() {
        if limit.is_some_and(|l| *total >= l) {
            return;
        }
        assign[i] = v;
        embed_level(pattern, host, allowed, assign, i + 1, total, limit);
    }
}

fn tag_classes(g: &LabeledGraph, h: &LabeledGraph) -> Vec<FixedBitSet> {
    (0..g.order())
        .map(|v| {
            let mut s = FixedBitSet::with_capacity(h.order());
            for w in 0..h.order() {
                if g.tag(v) == h.tag(w) && g.degree(v) == h.degree(w) {
                    s.insert(w);
                }
            }
            s
        })
        .collect()
}

fn check_bound(g: &LabeledGraph) -> Result<()> {
    if g.order() > ISOMORPHISM_BOUND {
        return Err(Error::TooLarge {
            what: "isomorphism test",
            size: g.order(),
            bound: ISOMORPHISM_BOUND,
        });
    }
    Ok(())
}

/// Unlabeled isomorphism test; blossoms must map to blossoms of the same tag.
pub fn are_isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> Result<bool> {
    check_bound(g)?;
    check_bound(h)?;
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    if g.blossom_tags() != h.blossom_tags() {
        return Ok(false);
    }
    let mut dg: Vec<usize> = (0..g.order()).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.order()).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(false);
    }
    Ok(count_embeddings(g, h, &tag_classes(g, h), Some(1)) > 0)
}

/// Number of automorphisms (blossoms fixed by tag).
pub fn automorphism_count(g: &LabeledGraph) -> u128 {
    count_embeddings(g, g, &tag_classes(g, g), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> LabeledGraph {
        LabeledGraph::path(4)
    }

    fn bull() -> LabeledGraph {
        // Triangle 1-2-5 with pendants 3 (on 1) and 4 (on 2).
        LabeledGraph::from_edges(5, &[(0, 1), (0, 4), (1, 4), (0, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn join_and_union_of_singletons() {
        let k1 = LabeledGraph::new(1);
        let j = LabeledGraph::join(&[k1.clone(), k1.clone()]).unwrap();
        assert_eq!(j, LabeledGraph::complete(2));
        let u = LabeledGraph::union(&[k1.clone(), k1.clone(), k1]).unwrap();
        assert_eq!(u, LabeledGraph::empty(3));
    }

    #[test]
    fn substitution_of_a_union_into_a_join_is_p3() {
        let k1 = LabeledGraph::new(1);
        let inner = LabeledGraph::union(&[k1.clone(), k1.clone()]).unwrap();
        let g = LabeledGraph::join(&[inner, k1]).unwrap();
        assert_eq!(g.edges(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn substitution_rejects_arity_mismatch() {
        let k1 = LabeledGraph::new(1);
        assert!(LabeledGraph::substitute(&p4(), &[k1]).is_err());
    }

    #[test]
    fn complement_of_p4_is_a_p4() {
        let c = p4().complement().unwrap();
        assert_eq!(c.edges(), vec![(0, 2), (0, 3), (1, 3)]);
        assert_eq!(c.complement().unwrap(), p4());
        assert_eq!(LabeledGraph::complete(2).complement().unwrap(), LabeledGraph::empty(2));
    }

    #[test]
    fn induced_subgraph_examples() {
        let g = p4();
        assert_eq!(g.induced_subgraph(&PartialInjection::identity(4)).unwrap(), g);
        let inj = PartialInjection::new([(1, 1), (2, 2)]).unwrap();
        assert_eq!(g.induced_subgraph(&inj).unwrap(), LabeledGraph::complete(2));
        let c5 = LabeledGraph::cycle(5);
        let inj = PartialInjection::new([(2, 1), (3, 2), (4, 3), (5, 4)]).unwrap();
        assert_eq!(c5.induced_subgraph(&inj).unwrap(), p4());
    }

    #[test]
    fn injections_must_be_injective() {
        assert!(PartialInjection::new([(1, 1), (2, 1)]).is_err());
        assert!(PartialInjection::new([(1, 0)]).is_err());
    }

    #[test]
    fn occurrences_of_a_single_vertex() {
        let k1 = LabeledGraph::new(1);
        let host = LabeledGraph::cycle(7);
        assert_eq!(count_occurrences(&k1, &host, OccurrenceMode::IgnoreBlossom).unwrap(), 7);
    }

    #[test]
    fn occurrences_of_p4_in_p4_and_c5() {
        let mode = OccurrenceMode::IgnoreBlossom;
        assert_eq!(count_occurrences(&p4(), &p4(), mode).unwrap(), 2);
        assert_eq!(count_occurrences(&p4(), &LabeledGraph::cycle(5), mode).unwrap(), 10);
        assert_eq!(count_occurrences(&p4(), &LabeledGraph::path(5), mode).unwrap(), 4);
    }

    #[test]
    fn fixed_mark_occurrences_in_a_blossomed_bull() {
        // Collapsing the R vertex of the bull gives the blossomed bull.
        let b = bull().blossom_quotient(&[4], BlossomMode::Plain).unwrap();
        assert_eq!(b.labeled_count(), 4);
        assert_eq!(b.blossom_vertex(), Some(4));
        // Pattern: the bull itself with R labeled 5; the blossom must carry
        // mark 5 and the two automorphisms fixing R both count.
        let occ = count_occurrences(&bull(), &b, OccurrenceMode::FixedMark(5)).unwrap();
        assert_eq!(occ, 2);
        let occ = count_occurrences(&bull(), &b, OccurrenceMode::FixedMark(1)).unwrap();
        assert_eq!(occ, 0);
        assert!(count_occurrences(&bull(), &bull(), OccurrenceMode::FixedMark(1)).is_err());
    }

    #[test]
    fn quotient_of_k2_and_the_bull() {
        let q = LabeledGraph::complete(2).blossom_quotient(&[0], BlossomMode::Plain).unwrap();
        assert_eq!(q.labeled_count(), 1);
        assert!(q.has_edge(0, 1));
        let b = bull().blossom_quotient(&[4], BlossomMode::Plain).unwrap();
        // The blossom sees exactly the two clique vertices 1 and 2.
        assert_eq!(b.neighbors(4).ones().collect::<Vec<_>>(), vec![0, 1]);
        assert!(bull().blossom_quotient(&[0, 1], BlossomMode::Plain).is_err());
    }

    #[test]
    fn second_quotient_tags_blossoms() {
        let g = LabeledGraph::complete(3).blossom_quotient(&[0], BlossomMode::Plain).unwrap();
        let h = g.blossom_quotient(&[1], BlossomMode::KeepZero).unwrap();
        assert_eq!(h.blossom_tags(), &[BlossomTag::Zero, BlossomTag::One]);
        assert_eq!(h.labeled_count(), 1);
        assert!(g.blossom_quotient(&[1], BlossomMode::Plain).is_err());
    }

    #[test]
    fn quotient_of_a_three_vertex_module_in_an_eight_vertex_graph() {
        // A C5 on 1..5 with vertex 5 blown up into the triangle {5,6,7}
        // and a pendant 8 on vertex 1.
        let mut g = LabeledGraph::new(8);
        for &(u, v) in &[(0, 1), (1, 2), (2, 3), (0, 7), (4, 5), (4, 6), (5, 6)] {
            g.add_edge(u, v);
        }
        for m in [4, 5, 6] {
            g.add_edge(3, m);
            g.add_edge(0, m);
        }
        let q = g.blossom_quotient(&[4, 5, 6], BlossomMode::Plain).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(q.labeled_count(), 5);
    }

    #[test]
    fn isomorphism_examples() {
        assert!(are_isomorphic(&p4(), &p4().permuted(&[2, 0, 3, 1])).unwrap());
        assert!(!are_isomorphic(&p4(), &LabeledGraph::cycle(4)).unwrap());
        let p5bar = LabeledGraph::path(5).complement().unwrap();
        // Diamond 1,2,3,4 (missing 3-4) with a pendant 5 on 3: six edges,
        // like P̄5, but with a different degree sequence.
        let diamond_pendant =
            LabeledGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4)])
                .unwrap();
        assert_eq!(diamond_pendant.edge_count(), p5bar.edge_count());
        assert!(!are_isomorphic(&p5bar, &diamond_pendant).unwrap());
        let house = LabeledGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4)])
            .unwrap();
        assert!(are_isomorphic(&p5bar, &house).unwrap());
        assert!(are_isomorphic(&LabeledGraph::new(13), &LabeledGraph::new(13)).is_err());
    }

    #[test]
    fn automorphisms_of_small_graphs() {
        assert_eq!(automorphism_count(&p4()), 2);
        assert_eq!(automorphism_count(&LabeledGraph::cycle(5)), 10);
        assert_eq!(automorphism_count(&LabeledGraph::complete(4)), 24);
        assert_eq!(automorphism_count(&bull()), 2);
    }

    #[test]
    fn induced_p4_enumeration_and_count_agree() {
        let g = LabeledGraph::path(6);
        assert_eq!(g.induced_p4s().len(), 3);
        assert_eq!(g.induced_p4_count(), 3);
        assert_eq!(LabeledGraph::cycle(5).induced_p4_count(), 5);
    }

    #[test]
    fn json_round_trip_with_blossom() {
        let b = bull().blossom_quotient(&[4], BlossomMode::Plain).unwrap();
        let text = b.to_json_string();
        assert_eq!(LabeledGraph::from_json_str(&text).unwrap(), b);
        assert!(LabeledGraph::from_json_str("{\"n\":2,\"edges\":[[1,1]]}").is_err());
    }

    #[test]
    fn module_tests() {
        let c4 = LabeledGraph::cycle(4);
        let mut s = FixedBitSet::with_capacity(4);
        s.insert(0);
        s.insert(2);
        assert!(c4.is_module(&s));
        let mut seed = FixedBitSet::with_capacity(4);
        seed.insert(0);
        seed.insert(1);
        assert_eq!(p4().module_closure(&seed).count_ones(..), 4);
    }
}
