//! The six graph classes: spider taxonomy, class specifications and
//! membership tests.
//!
//! Every class is described by data only: which sporadic prime graphs it
//! admits (`C5`, `P5` with its complement), which spider sizes, and whether
//! pseudo-spiders are allowed. The sets `P` and `P•` of the tree grammar,
//! the canonical-tree recognizer and the orbit data used by the series
//! generators and samplers are all derived from those four fields.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::decomposition::canonical_tree;
use crate::error::{Error, Result};
use crate::graph::{are_isomorphic, BlossomTag, LabeledGraph};
use crate::random::RandomSource;
use crate::series::factorial;
use crate::tree::{Decoration, DecoratedTree, Node};

/// Largest graph accepted by [`is_member_definitional`].
pub const DEFINITIONAL_BOUND: usize = 10;

/// Largest number of labeled vertices accepted by [`labeled_family`].
pub const FAMILY_BOUND: usize = 8;

/// One of the six classes of graphs with few induced P4's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphClass {
    Cograph,
    Reducible,
    Sparse,
    Extendible,
    Lite,
    Tidy,
}

impl GraphClass {
    /// All classes, smallest first.
    pub const ALL: [GraphClass; 6] = [
        GraphClass::Cograph,
        GraphClass::Reducible,
        GraphClass::Sparse,
        GraphClass::Extendible,
        GraphClass::Lite,
        GraphClass::Tidy,
    ];

    /// Short lowercase name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            GraphClass::Cograph => "cograph",
            GraphClass::Reducible => "reducible",
            GraphClass::Sparse => "sparse",
            GraphClass::Extendible => "extendible",
            GraphClass::Lite => "lite",
            GraphClass::Tidy => "tidy",
        }
    }

    /// The class data.
    pub fn spec(self) -> ClassSpec {
        let (c5, p5, spiders, pseudo) = match self {
            GraphClass::Cograph => (false, false, SpiderRange::None, false),
            GraphClass::Reducible => (false, false, SpiderRange::OnlyTwo, false),
            GraphClass::Sparse => (false, false, SpiderRange::All, false),
            GraphClass::Extendible => (true, true, SpiderRange::OnlyTwo, true),
            GraphClass::Lite => (false, true, SpiderRange::All, true),
            GraphClass::Tidy => (true, true, SpiderRange::All, true),
        };
        ClassSpec { class: self, c5, p5, spiders, pseudo }
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix("p4-").unwrap_or(&key);
        match key {
            "cograph" | "cographs" | "free" => Ok(GraphClass::Cograph),
            "reducible" => Ok(GraphClass::Reducible),
            "sparse" => Ok(GraphClass::Sparse),
            "extendible" | "extensible" => Ok(GraphClass::Extendible),
            "lite" => Ok(GraphClass::Lite),
            "tidy" => Ok(GraphClass::Tidy),
            _ => Err(Error::Parse(format!("unknown graph class `{s}`"))),
        }
    }
}

/// Spider sizes `|K|` admitted by a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpiderRange {
    None,
    /// Only `|K| = 2` (the P4 and the bull).
    OnlyTwo,
    All,
}

impl SpiderRange {
    /// Whether spiders with `|K| = k` are admitted.
    pub fn allows(self, k: usize) -> bool {
        match self {
            SpiderRange::None => false,
            SpiderRange::OnlyTwo => k == 2,
            SpiderRange::All => k >= 2,
        }
    }
}

/// Data describing a class through its prime decorations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassSpec {
    pub class: GraphClass,
    /// `C5` is a decoration.
    pub c5: bool,
    /// `P5` and its complement are decorations.
    pub p5: bool,
    /// Admitted spider sizes.
    pub spiders: SpiderRange,
    /// Pseudo-spiders over admitted spiders are decorations.
    pub pseudo: bool,
}

/// Side of a spider holding the duplicated vertex of a pseudo-spider.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    K,
    S,
}

/// Isomorphism type of a decoration in `P` or `P•`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orbit {
    C5,
    P5,
    P5Bar,
    /// Spider with clique `K = {1..k}` and stable set `S = {k+1..2k}`.
    Spider { k: usize, fat: bool },
    /// Spider whose first `K` or `S` vertex gets a twin labeled `2k+1`.
    PseudoSpider { k: usize, fat: bool, origin: Side, twin_edge: bool },
}

impl Orbit {
    /// Number of labeled (non-blossom) vertices.
    pub fn labeled_size(self) -> usize {
        match self {
            Orbit::C5 | Orbit::P5 | Orbit::P5Bar => 5,
            Orbit::Spider { k, .. } => 2 * k,
            Orbit::PseudoSpider { k, .. } => 2 * k + 1,
        }
    }

    /// Number of automorphisms (the blossom, if any, is fixed).
    pub fn automorphisms(self) -> BigUint {
        match self {
            Orbit::C5 => BigUint::from(10u32),
            Orbit::P5 | Orbit::P5Bar => BigUint::from(2u32),
            Orbit::Spider { k, .. } => factorial(k),
            Orbit::PseudoSpider { k, .. } => factorial(k - 1) * 2u32,
        }
    }

    /// Number of distinct labelings of the orbit.
    pub fn labelings(self) -> BigUint {
        factorial(self.labeled_size()) / self.automorphisms()
    }

    /// A representative; in `P•` the blossom is the spider's `R` vertex,
    /// adjacent to all of `K`.
    pub fn representative(self, blossomed: bool) -> LabeledGraph {
        match self {
            Orbit::C5 => LabeledGraph::cycle(5),
            Orbit::P5 => LabeledGraph::path(5),
            Orbit::P5Bar => LabeledGraph::path(5).complement().expect("no blossom"),
            Orbit::Spider { k, fat } => spider_graph(k, fat, blossomed, None),
            Orbit::PseudoSpider { k, fat, origin, twin_edge } => {
                spider_graph(k, fat, blossomed, Some((origin, twin_edge)))
            }
        }
    }

    /// Short human-readable name.
    pub fn describe(self) -> String {
        match self {
            Orbit::C5 => "C5".into(),
            Orbit::P5 => "P5".into(),
            Orbit::P5Bar => "co-P5".into(),
            Orbit::Spider { k, fat } => {
                format!("{} spider |K|={k}", if fat { "fat" } else { "thin" })
            }
            Orbit::PseudoSpider { k, fat, origin, twin_edge } => format!(
                "{} pseudo-spider |K|={k} twin in {:?} {}",
                if fat { "fat" } else { "thin" },
                origin,
                if twin_edge { "adjacent" } else { "non-adjacent" }
            ),
        }
    }
}

fn spider_graph(k: usize, fat: bool, blossomed: bool, twin: Option<(Side, bool)>) -> LabeledGraph {
    let labeled = 2 * k + usize::from(twin.is_some());
    let mut g = if blossomed {
        LabeledGraph::with_blossoms(labeled, &[BlossomTag::Plain]).expect("one plain blossom")
    } else {
        LabeledGraph::new(labeled)
    };
    for i in 0..k {
        for j in i + 1..k {
            g.add_edge(i, j);
        }
        for j in 0..k {
            if (i == j) != fat {
                g.add_edge(i, k + j);
            }
        }
        if blossomed {
            g.add_edge(i, labeled);
        }
    }
    if let Some((side, edge)) = twin {
        let original = if side == Side::K { 0 } else { k };
        let duplicate = 2 * k;
        let nbrs: Vec<usize> = g.neighbors(original).ones().collect();
        for w in nbrs {
            g.add_edge(duplicate, w);
        }
        if edge {
            g.add_edge(duplicate, original);
        }
    }
    g
}

impl ClassSpec {
    /// Orbits of the decorations in `P` (or `P•` when `blossomed`) with
    /// `size` labeled vertices.
    pub fn orbits(&self, size: usize, blossomed: bool) -> Vec<Orbit> {
        let mut out = Vec::new();
        if !blossomed && size == 5 {
            if self.c5 {
                out.push(Orbit::C5);
            }
            if self.p5 {
                out.push(Orbit::P5);
                out.push(Orbit::P5Bar);
            }
        }
        if size >= 4 && size % 2 == 0 && self.spiders.allows(size / 2) {
            let k = size / 2;
            out.push(Orbit::Spider { k, fat: false });
            if k >= 3 {
                out.push(Orbit::Spider { k, fat: true });
            }
        }
        if self.pseudo && size >= 5 && size % 2 == 1 && self.spiders.allows((size - 1) / 2) {
            let k = (size - 1) / 2;
            let fats: &[bool] = if k >= 3 { &[false, true] } else { &[false] };
            for &fat in fats {
                for origin in [Side::K, Side::S] {
                    for twin_edge in [false, true] {
                        out.push(Orbit::PseudoSpider { k, fat, origin, twin_edge });
                    }
                }
            }
        }
        out
    }

    /// Number of labeled decorations of the given size, that is
    /// `size!·[z^size]P` (or `P•`).
    pub fn family_count(&self, size: usize, blossomed: bool) -> BigUint {
        self.orbits(size, blossomed).into_iter().map(Orbit::labelings).sum()
    }

    /// Whether a classified decoration belongs to `P` (or to `P•` when the
    /// decoration carries a blossom).
    pub fn admits(&self, kind: &PrimeDecorationKind) -> bool {
        let spider_ok = |r: Option<usize>, k: usize| {
            self.spiders.allows(k) && r.is_some() == kind.blossomed && kind.blossomed == kind.r_is_blossom
        };
        match kind.tag {
            DecorationTag::C5 => self.c5 && !kind.blossomed,
            DecorationTag::P5 | DecorationTag::P5Bar => self.p5 && !kind.blossomed,
            DecorationTag::ThinSpider(k) | DecorationTag::FatSpider(k) => spider_ok(kind.r_vertex, k),
            DecorationTag::PseudoSpider { k, .. } => self.pseudo && spider_ok(kind.r_vertex, k),
            DecorationTag::Other => false,
        }
    }
}

/// Shape of a decoration as reported by [`classify_prime_decoration`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecorationTag {
    C5,
    P5,
    P5Bar,
    ThinSpider(usize),
    FatSpider(usize),
    /// Spider with one vertex duplicated; `fat` is always false for `k = 2`.
    PseudoSpider { k: usize, fat: bool, origin: Side, twin_edge: bool },
    Other,
}

/// Classification of a graph with at most one blossom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeDecorationKind {
    pub tag: DecorationTag,
    pub blossomed: bool,
    /// Vertex index of the spider's `R` vertex, when `|R| = 1`.
    pub r_vertex: Option<usize>,
    /// Whether `r_vertex` is the blossom.
    pub r_is_blossom: bool,
}

struct SpiderShape {
    k: usize,
    fat: bool,
    clique: Vec<usize>,
    r: Option<usize>,
}

fn spider_shape(h: &LabeledGraph) -> Option<SpiderShape> {
    if let Some(b) = h.blossom_vertex() {
        return try_spider(h, Some(b));
    }
    if h.order() % 2 == 0 {
        try_spider(h, None)
    } else {
        (0..h.order()).find_map(|r| try_spider(h, Some(r)))
    }
}

fn try_spider(h: &LabeledGraph, r: Option<usize>) -> Option<SpiderShape> {
    let rest: Vec<usize> = (0..h.order()).filter(|&v| Some(v) != r).collect();
    if rest.len() < 4 || rest.len() % 2 == 1 {
        return None;
    }
    let k = rest.len() / 2;
    let (clique, stable): (Vec<usize>, Vec<usize>) = match r {
        Some(r) => rest.iter().partition(|&&v| h.has_edge(r, v)),
        None => {
            let mut by_degree = rest.clone();
            by_degree.sort_by_key(|&v| std::cmp::Reverse(h.degree(v)));
            if h.degree(by_degree[k - 1]) == h.degree(by_degree[k]) {
                return None;
            }
            let stable = by_degree.split_off(k);
            (by_degree, stable)
        }
    };
    if clique.len() != k {
        return None;
    }
    let all_pairs = |set: &[usize], want: bool| {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| h.has_edge(u, v) == want))
    };
    if !all_pairs(&clique, true) || !all_pairs(&stable, false) {
        return None;
    }
    let mut stable_set = FixedBitSet::with_capacity(h.order());
    stable.iter().for_each(|&s| stable_set.insert(s));
    let mut clique_set = FixedBitSet::with_capacity(h.order());
    clique.iter().for_each(|&c| clique_set.insert(c));
    let degrees: Vec<usize> = clique
        .iter()
        .map(|&x| h.neighbors(x).intersection_count(&stable_set))
        .chain(stable.iter().map(|&s| h.neighbors(s).intersection_count(&clique_set)))
        .collect();
    let fat = if degrees.iter().all(|&d| d == 1) {
        false
    } else if degrees.iter().all(|&d| d == k - 1) {
        true
    } else {
        return None;
    };
    Some(SpiderShape { k, fat, clique, r })
}

/// Graph without vertex `y`, keeping the blossom last.
fn delete_vertex(g: &LabeledGraph, y: usize) -> LabeledGraph {
    let mut h = LabeledGraph::with_blossoms(g.labeled_count() - 1, g.blossom_tags())
        .expect("tags already valid");
    let idx = |v: usize| if v > y { v - 1 } else { v };
    for (u, v) in g.edges() {
        if u != y && v != y {
            h.add_edge(idx(u), idx(v));
        }
    }
    h
}

fn are_twins(g: &LabeledGraph, x: usize, y: usize) -> bool {
    let mut nx = g.neighbors(x).clone();
    let mut ny = g.neighbors(y).clone();
    nx.set(y, false);
    ny.set(x, false);
    nx == ny
}

/// Classifies a graph with at most one blossom as a sporadic prime graph,
/// a spider, a pseudo-spider or something else.
///
/// Spiders are recognized by rebuilding `(K, S, R)`: the blossom or a
/// candidate vertex plays `R` and `K` is its neighbourhood, or without `R`
/// the `|K|` highest degrees form `K`. Pseudo-spiders are recognized by
/// deleting one vertex of a twin pair and classifying the rest.
pub fn classify_prime_decoration(g: &LabeledGraph) -> PrimeDecorationKind {
    let blossomed = g.has_blossom();
    let make = |tag, r_vertex: Option<usize>| PrimeDecorationKind {
        tag,
        blossomed,
        r_vertex,
        r_is_blossom: r_vertex.is_some() && r_vertex == g.blossom_vertex(),
    };
    if g.blossom_tags().len() > 1 {
        return make(DecorationTag::Other, None);
    }
    if !blossomed && g.order() == 5 {
        for (orbit, tag) in [
            (Orbit::C5, DecorationTag::C5),
            (Orbit::P5, DecorationTag::P5),
            (Orbit::P5Bar, DecorationTag::P5Bar),
        ] {
            if are_isomorphic(g, &orbit.representative(false)).unwrap_or(false) {
                return make(tag, None);
            }
        }
    }
    if let Some(shape) = spider_shape(g) {
        let tag = if shape.fat {
            DecorationTag::FatSpider(shape.k)
        } else {
            DecorationTag::ThinSpider(shape.k)
        };
        return make(tag, shape.r);
    }
    let labeled = g.labeled_count();
    for x in 0..labeled {
        for y in x + 1..labeled {
            if !are_twins(g, x, y) {
                continue;
            }
            let rest = delete_vertex(g, y);
            if let Some(shape) = spider_shape(&rest) {
                if shape.r == Some(x) {
                    continue;
                }
                let origin = if shape.clique.contains(&x) { Side::K } else { Side::S };
                let r_vertex = shape.r.map(|r| if r >= y { r + 1 } else { r });
                let tag = DecorationTag::PseudoSpider {
                    k: shape.k,
                    fat: shape.fat,
                    origin,
                    twin_edge: g.has_edge(x, y),
                };
                return make(tag, r_vertex);
            }
        }
    }
    make(DecorationTag::Other, None)
}

/// Result of the canonical-tree recognizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub member: bool,
    /// Canonical tree of the input graph.
    pub tree: DecoratedTree,
    /// First offending node (preorder), as an S-expression and a reason.
    pub violation: Option<(String, String)>,
}

/// Canonical-tree recognizer with a diagnostic.
pub fn membership(g: &LabeledGraph, class: GraphClass) -> Result<MembershipReport> {
    let tree = canonical_tree(g)?;
    let spec = class.spec();
    let mut violation = None;
    check_tree(&tree, &spec, &mut violation);
    Ok(MembershipReport { member: violation.is_none(), tree, violation })
}

fn check_tree(t: &DecoratedTree, spec: &ClassSpec, violation: &mut Option<(String, String)>) {
    let Some(node) = t.as_node() else { return };
    if violation.is_some() {
        return;
    }
    if let Some(reason) = check_node(node, spec) {
        *violation = Some((t.to_sexp(), reason));
        return;
    }
    for c in node.children() {
        check_tree(c, spec, violation);
    }
}

fn check_node(node: &Node, spec: &ClassSpec) -> Option<String> {
    let Decoration::Prime(d) = node.decoration() else { return None };
    let kind = classify_prime_decoration(d);
    let children = node.children();
    let all_leaves = |skip: Option<usize>| {
        children.iter().enumerate().all(|(i, c)| Some(i) == skip || c.is_leaf())
    };
    let sporadic = |allowed: bool, name: &str| {
        if !allowed {
            Some(format!("{name} decorations are not allowed"))
        } else if !all_leaves(None) {
            Some(format!("a {name} node must have leaves as children"))
        } else {
            None
        }
    };
    match kind.tag {
        DecorationTag::C5 => sporadic(spec.c5, "C5"),
        DecorationTag::P5 => sporadic(spec.p5, "P5"),
        DecorationTag::P5Bar => sporadic(spec.p5, "co-P5"),
        DecorationTag::ThinSpider(k) | DecorationTag::FatSpider(k) => {
            if !spec.spiders.allows(k) {
                return Some(format!("spider decorations with |K|={k} are not allowed"));
            }
            if spec.pseudo {
                let mut pairs = 0;
                for (i, c) in children.iter().enumerate() {
                    if Some(i) == kind.r_vertex {
                        continue;
                    }
                    match c.size() {
                        1 => {}
                        2 => pairs += 1,
                        _ => return Some("a spider child outside R has more than two leaves".into()),
                    }
                }
                (pairs > 1).then(|| "two spider children outside R have two leaves".into())
            } else if all_leaves(kind.r_vertex) {
                None
            } else {
                Some("spider children outside R must be leaves".into())
            }
        }
        DecorationTag::PseudoSpider { .. } | DecorationTag::Other => {
            Some("prime decoration outside the class".into())
        }
    }
}

/// Tree-based membership test.
pub fn is_member(g: &LabeledGraph, class: GraphClass) -> Result<bool> {
    Ok(membership(g, class)?.member)
}

/// Membership test by the literal definition of each class; exponential,
/// limited to [`DEFINITIONAL_BOUND`] vertices.
pub fn is_member_definitional(g: &LabeledGraph, class: GraphClass) -> Result<bool> {
    if g.has_blossom() {
        return Err(Error::InvalidGraph("membership of a blossomed graph".into()));
    }
    if g.order() > DEFINITIONAL_BOUND {
        return Err(Error::TooLarge {
            what: "definitional membership",
            size: g.order(),
            bound: DEFINITIONAL_BOUND,
        });
    }
    let p4s = g.induced_p4s();
    Ok(match class {
        GraphClass::Cograph => p4s.is_empty(),
        GraphClass::Reducible => {
            let mut seen = vec![false; g.order()];
            p4s.iter().flatten().all(|&v| !std::mem::replace(&mut seen[v], true))
        }
        GraphClass::Sparse => at_most_per_subset(g, &p4s, 5, 1, &|_| false),
        GraphClass::Lite => {
            let exempt = [thin_spider_s3(), thin_spider_s3().complement().expect("no blossom")];
            at_most_per_subset(g, &p4s, 6, 2, &|h| exempt.iter().any(|s| are_isomorphic(h, s).unwrap_or(false)))
        }
        GraphClass::Extendible => extendible_condition(&p4s),
        GraphClass::Tidy => tidy_condition(g, &p4s),
    })
}

/// The thin spider with a three-vertex clique: clique `0 1 2`, with `3`,
/// `4`, `5` pendant on `0`, `1`, `2`. It has three induced P4's.
fn thin_spider_s3() -> LabeledGraph {
    LabeledGraph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (2, 5)]).expect("valid edges")
}

/// Every vertex subset of size `size` (or the whole graph if smaller)
/// contains at most `max` induced P4's or induces a graph that `exempt`
/// accepts.
fn at_most_per_subset(
    g: &LabeledGraph,
    p4s: &[[usize; 4]],
    size: usize,
    max: usize,
    exempt: &dyn Fn(&LabeledGraph) -> bool,
) -> bool {
    if p4s.len() <= max {
        return true;
    }
    let n = g.order();
    if n <= size {
        return exempt(g);
    }
    let masks: Vec<u32> = p4s.iter().map(|p| p.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
    // Subsets of exactly `size` vertices suffice. A smaller violating set
    // lies in a violating set of `size` vertices, and that larger set is not
    // exempt because every proper subset of an exempt graph has at most
    // `max` P4's.
    let mut subset: u32 = (1 << size) - 1;
    let limit: u32 = 1 << n;
    while subset < limit {
        if masks.iter().filter(|&&m| m & subset == m).count() > max {
            let vertices: Vec<usize> = (0..n).filter(|&v| subset >> v & 1 == 1).collect();
            if !exempt(&g.induced_on(&vertices)) {
                return false;
            }
        }
        // Gosper's hack: next integer with the same number of set bits.
        let c = subset & subset.wrapping_neg();
        let r = subset + c;
        subset = (((r ^ subset) >> 2) / c) | r;
    }
    true
}

fn extendible_condition(p4s: &[[usize; 4]]) -> bool {
    let masks: Vec<u32> = p4s.iter().map(|p| p.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
    masks.iter().all(|&h| {
        let mut extra = 0u32;
        for &other in &masks {
            if other & h != 0 {
                extra |= other & !h;
            }
        }
        extra.count_ones() <= 1
    })
}

fn tidy_condition(g: &LabeledGraph, p4s: &[[usize; 4]]) -> bool {
    p4s.iter().all(|&[a, b, c, d]| {
        let partners = (0..g.order())
            .filter(|&y| ![a, b, c, d].contains(&y))
            .filter(|&y| {
                let adj = [a, b, c, d].map(|v| g.has_edge(y, v));
                let count = adj.iter().filter(|&&x| x).count();
                let midpoints_only = adj == [false, true, true, false];
                count > 0 && count < 4 && !midpoints_only
            })
            .count();
        partners <= 1
    })
}

/// All labeled decorations of `P` (or `P•`) with `size` labeled vertices;
/// limited to [`FAMILY_BOUND`].
pub fn labeled_family(class: GraphClass, size: usize, blossomed: bool) -> Result<Vec<LabeledGraph>> {
    if size > FAMILY_BOUND {
        return Err(Error::TooLarge { what: "labeled family enumeration", size, bound: FAMILY_BOUND });
    }
    let mut out = Vec::new();
    for orbit in class.spec().orbits(size, blossomed) {
        let rep = orbit.representative(blossomed);
        let mut seen = HashSet::new();
        for perm in permutations(size) {
            let g = rep.permuted(&perm);
            if seen.insert(g.clone()) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else { break };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("exists");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Uniform labeled decoration of `P` (or `P•`) with `size` labeled
/// vertices: an orbit is drawn with probability proportional to its number
/// of labelings, then a uniform relabeling is applied.
pub fn sample_prime_decoration(
    class: GraphClass,
    size: usize,
    blossomed: bool,
    rng: &mut RandomSource,
) -> Result<LabeledGraph> {
    let orbits = class.spec().orbits(size, blossomed);
    let total: BigUint = orbits.iter().map(|o| o.labelings()).sum();
    if total.is_zero() {
        return Err(Error::Domain(format!(
            "class {class} has no {} decoration with {size} labeled vertices",
            if blossomed { "blossomed" } else { "plain" }
        )));
    }
    let mut draw = rng.below_big(&total);
    let mut chosen = orbits[0];
    for orbit in orbits {
        let w = orbit.labelings();
        if draw < w {
            chosen = orbit;
            break;
        }
        draw -= w;
    }
    let mut perm: Vec<usize> = (0..size).collect();
    rng.shuffle(&mut perm);
    Ok(chosen.representative(blossomed).permuted(&perm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_labeled_graphs, count_occurrences};
    use crate::graph::OccurrenceMode;

    fn bull() -> LabeledGraph {
        LabeledGraph::from_edges(5, &[(0, 1), (0, 4), (1, 4), (0, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn lite_admits_the_three_clique_spider_and_its_complement() {
        let s3 = thin_spider_s3();
        assert_eq!(s3.induced_p4_count(), 3);
        for g in [s3.clone(), s3.complement().unwrap()] {
            assert!(is_member_definitional(&g, GraphClass::Lite).unwrap());
            assert!(is_member(&g, GraphClass::Lite).unwrap());
        }
        // Three P4's on six vertices outside the exemption.
        let mut three = LabeledGraph::path(6);
        three.add_edge(0, 5);
        assert!(!is_member_definitional(&LabeledGraph::path(6), GraphClass::Lite).unwrap());
        assert!(!is_member(&LabeledGraph::path(6), GraphClass::Lite).unwrap());
        assert!(!is_member_definitional(&three, GraphClass::Lite).unwrap());
    }

    #[test]
    fn class_names_round_trip() {
        for c in GraphClass::ALL {
            assert_eq!(c.name().parse::<GraphClass>().unwrap(), c);
        }
        assert_eq!("P4-Tidy".parse::<GraphClass>().unwrap(), GraphClass::Tidy);
        assert!("tiny".parse::<GraphClass>().is_err());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_prime_decoration(&LabeledGraph::cycle(5)).tag, DecorationTag::C5);
        let plain_bull = classify_prime_decoration(&bull());
        assert_eq!(plain_bull.tag, DecorationTag::ThinSpider(2));
        assert_eq!(plain_bull.r_vertex, Some(4));
        assert!(!plain_bull.blossomed);
        let blossomed = bull().blossom_quotient(&[4], crate::graph::BlossomMode::Plain).unwrap();
        let kind = classify_prime_decoration(&blossomed);
        assert_eq!(kind.tag, DecorationTag::ThinSpider(2));
        assert!(kind.blossomed && kind.r_is_blossom);
        // Path 1-2-3-4 with a true twin 5 of endpoint 1.
        let pseudo =
            LabeledGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (4, 1), (4, 0)]).unwrap();
        assert_eq!(
            classify_prime_decoration(&pseudo).tag,
            DecorationTag::PseudoSpider { k: 2, fat: false, origin: Side::S, twin_edge: true }
        );
        assert_eq!(classify_prime_decoration(&LabeledGraph::cycle(6)).tag, DecorationTag::Other);
    }

    #[test]
    fn every_orbit_representative_classifies_to_itself() {
        for k in 2..=5 {
            for blossomed in [false, true] {
                for orbit in GraphClass::Tidy.spec().orbits(2 * k, blossomed)
                    .into_iter()
                    .chain(GraphClass::Tidy.spec().orbits(2 * k + 1, blossomed))
                {
                    let g = orbit.representative(blossomed);
                    let kind = classify_prime_decoration(&g);
                    let expected = match orbit {
                        Orbit::Spider { k, fat: false } => DecorationTag::ThinSpider(k),
                        Orbit::Spider { k, fat: true } => DecorationTag::FatSpider(k),
                        Orbit::PseudoSpider { k, fat, origin, twin_edge } => {
                            DecorationTag::PseudoSpider { k, fat, origin, twin_edge }
                        }
                        _ => continue,
                    };
                    assert_eq!(kind.tag, expected, "{}", orbit.describe());
                    assert_eq!(kind.blossomed, blossomed);
                    assert!(GraphClass::Tidy.spec().admits(&kind));
                }
            }
        }
    }

    #[test]
    fn automorphism_counts_match_the_orbit_data() {
        for blossomed in [false, true] {
            for size in 4..=7 {
                for orbit in GraphClass::Tidy.spec().orbits(size, blossomed) {
                    let aut = crate::graph::automorphism_count(&orbit.representative(blossomed));
                    assert_eq!(BigUint::from(aut), orbit.automorphisms(), "{}", orbit.describe());
                }
            }
        }
    }

    #[test]
    fn labeled_families_have_the_orbit_sizes() {
        for class in GraphClass::ALL {
            for size in 0..=7 {
                for blossomed in [false, true] {
                    let family = labeled_family(class, size, blossomed).unwrap();
                    assert_eq!(BigUint::from(family.len()), class.spec().family_count(size, blossomed));
                    for g in family.iter().take(50) {
                        assert!(class.spec().admits(&classify_prime_decoration(g)));
                    }
                }
            }
        }
    }

    #[test]
    fn spider_occurrence_counts_match_the_closed_counts() {
        // P̃4 is the path 1-2-3-4 with labels in path order.
        let p4 = LabeledGraph::path(4);
        for k in 2..=6 {
            for fat in [false, true] {
                if fat && k == 2 {
                    continue;
                }
                let spider = Orbit::Spider { k, fat }.representative(false);
                let occ = count_occurrences(&p4, &spider, OccurrenceMode::IgnoreBlossom).unwrap();
                assert_eq!(occ, (k * (k - 1)) as u128);
                let pseudo = Orbit::PseudoSpider { k, fat, origin: Side::S, twin_edge: false }
                    .representative(false);
                let occ = count_occurrences(&p4, &pseudo, OccurrenceMode::IgnoreBlossom).unwrap();
                assert_eq!(occ, ((k + 2) * (k - 1)) as u128);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let c5 = LabeledGraph::cycle(5);
        let p5 = LabeledGraph::path(5);
        for class in GraphClass::ALL {
            assert!(is_member(&LabeledGraph::complete(4), class).unwrap());
            let spec = class.spec();
            assert_eq!(is_member(&c5, class).unwrap(), spec.c5);
            assert_eq!(is_member(&p5, class).unwrap(), spec.p5);
        }
        assert!(is_member_definitional(&LabeledGraph::path(4), GraphClass::Reducible).unwrap());
        assert!(!is_member_definitional(&p5, GraphClass::Sparse).unwrap());
        assert!(!is_member_definitional(&c5, GraphClass::Sparse).unwrap());
        assert!(is_member_definitional(&c5, GraphClass::Tidy).unwrap());
        let report = membership(&c5, GraphClass::Lite).unwrap();
        assert!(report.violation.is_some());
    }

    #[test]
    fn recognizers_agree_on_all_graphs_up_to_five_vertices() {
        for n in 1..=5 {
            for g in all_labeled_graphs(n) {
                for class in GraphClass::ALL {
                    assert_eq!(
                        is_member(&g, class).unwrap(),
                        is_member_definitional(&g, class).unwrap(),
                        "{class} on {g:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn sampled_decorations_are_members_of_the_family() {
        let mut rng = RandomSource::new(5);
        for _ in 0..200 {
            let g = sample_prime_decoration(GraphClass::Tidy, 7, true, &mut rng).unwrap();
            assert!(GraphClass::Tidy.spec().admits(&classify_prime_decoration(&g)));
        }
        assert!(sample_prime_decoration(GraphClass::Sparse, 5, false, &mut rng).is_err());
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
