//! Trees with a prescribed induced subtree.
//!
//! A marked tree `(t, 𝕴)` is a grammar tree `t` with a partial injection
//! `𝕴` from its leaf labels to marks `1..=|τ|`; it belongs to `𝒯_τ` when
//! the induced subtree `t_𝕴` equals the pattern `τ`. Each internal node
//! `v` of `τ` is the image of an internal node of `t`, which is either
//! linear with the decoration of `v` (role [`NodeRole::Linear`]) or prime,
//! in which case the way the marks sit below it gives one of the roles
//! `V0` to `V3`. Summing the generating functions of all role assignments
//! gives `T_τ`.
//!
//! Two evaluations are provided: [`assignment_series`] instantiates the
//! closed product of one assignment, and [`pattern_counts`] sums over all
//! assignments at once by a recursion over `τ` in the labeled-count basis.
//! [`brute_force_pattern_count`] counts marked trees by enumeration.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::classes::{labeled_family, GraphClass};
use crate::decomposition::is_prime;
use crate::egf::{ClassSeriesBundle, SeriesKind};
use crate::error::{Error, Result};
use crate::graph::{all_labeled_graphs, LabeledGraph, PartialInjection};
use crate::occurrence::{occ_host_counts, occ_series, OccMode};
use crate::series::{LabeledCounts, PowerSeries};
use crate::tree::{Decoration, DecoratedTree};

/// Largest pattern accepted by the assignment enumeration.
pub const PATTERN_SIZE_BOUND: usize = 16;

/// Largest size accepted by the tree enumeration.
pub const TREE_ENUMERATION_BOUND: usize = 8;

/// Role of an internal node `v` of a pattern in a marked tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRole {
    /// Image is a linear node decorated like `v`; only for linear `v`.
    Linear,
    /// Image is a prime node from `P`, so every child of `v` is a leaf.
    V0,
    /// Image is a prime node from `P•` whose distinguished subtree holds
    /// no mark; every child of `v` is a leaf.
    V1,
    /// As `V1`, but the distinguished subtree holds the mark of the leaf
    /// child of rank `rk` (one-based).
    V2 { rk: usize },
    /// Image is a prime node from `P•` whose distinguished subtree holds
    /// the only non-leaf child of `v`.
    V3,
}

impl NodeRole {
    /// Whether the role is one of `V0` to `V3`.
    pub fn in_v(self) -> bool {
        self != NodeRole::Linear
    }
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Leaf,
    Node(usize),
}

#[derive(Debug)]
struct FlatNode {
    decoration: Decoration,
    children: Vec<Slot>,
}

impl FlatNode {
    fn pattern_graph(&self) -> LabeledGraph {
        self.decoration.graph(self.children.len())
    }

    /// Whether every child is a leaf.
    fn in_u0(&self) -> bool {
        self.children.iter().all(|c| matches!(c, Slot::Leaf))
    }

    /// Position and id of the only non-leaf child, if there is exactly one.
    fn branch(&self) -> Option<(usize, usize)> {
        let mut internal = self.children.iter().enumerate().filter_map(|(i, c)| match c {
            Slot::Node(id) => Some((i, *id)),
            Slot::Leaf => None,
        });
        let first = internal.next()?;
        internal.next().is_none().then_some(first)
    }
}

/// Internal nodes of a pattern in preorder; node 0 is the root.
#[derive(Debug)]
struct FlatPattern {
    nodes: Vec<FlatNode>,
}

impl FlatPattern {
    fn new(tau: &DecoratedTree) -> Self {
        let mut nodes = Vec::new();
        Self::push(tau, &mut nodes);
        Self { nodes }
    }

    fn push(t: &DecoratedTree, nodes: &mut Vec<FlatNode>) -> Slot {
        match t {
            DecoratedTree::Leaf(_) => Slot::Leaf,
            DecoratedTree::Node(n) => {
                let id = nodes.len();
                nodes.push(FlatNode { decoration: n.decoration().clone(), children: Vec::new() });
                let children = n.children().iter().map(|c| Self::push(c, nodes)).collect();
                nodes[id].children = children;
                Slot::Node(id)
            }
        }
    }

    /// Roles a node may take.
    fn allowed_roles(&self, id: usize) -> Vec<NodeRole> {
        let node = &self.nodes[id];
        let mut roles = Vec::new();
        if node.decoration.is_linear() {
            roles.push(NodeRole::Linear);
        }
        if node.in_u0() {
            roles.push(NodeRole::V0);
            roles.push(NodeRole::V1);
            roles.extend((1..=node.children.len()).map(|rk| NodeRole::V2 { rk }));
        } else if node.branch().is_some() {
            roles.push(NodeRole::V3);
        }
        roles
    }
}

fn check_pattern(tau: &DecoratedTree) -> Result<()> {
    if tau.size() < 2 || !tau.is_substitution_tree() {
        return Err(Error::InvalidTree("patterns are substitution trees with at least 2 leaves".into()));
    }
    if tau.size() > PATTERN_SIZE_BOUND {
        return Err(Error::TooLarge { what: "pattern", size: tau.size(), bound: PATTERN_SIZE_BOUND });
    }
    Ok(())
}

/// Counters of the product formula for one assignment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AssignmentCounters {
    /// Edges between two linear-role nodes with equal decorations.
    pub d_eq: usize,
    /// Edges between two linear-role nodes with different decorations.
    pub d_neq: usize,
    /// Edges from a linear-role node to a child in `V`.
    pub d_out_to_v: usize,
    /// Edges from a linear-role node to a leaf.
    pub d_out_to_leaf: usize,
    /// Number of linear-role nodes.
    pub n_l: usize,
    /// Nodes of `V3` whose non-leaf child has the linear role.
    pub n1: usize,
    /// Nodes of `V3` whose non-leaf child is in `V`.
    pub n2: usize,
    /// Size of `V1`.
    pub v1: usize,
    /// Size of `V2`.
    pub v2: usize,
    /// Whether the root is in `V`.
    pub root_in_v: bool,
}

/// A pattern with a role for each internal node, in preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternAssignment {
    tau: DecoratedTree,
    roles: Vec<NodeRole>,
}

impl PatternAssignment {
    /// Validates the roles: a linear role needs a linear decoration, `V0`,
    /// `V1` and `V2` need leaf children only, `V3` needs exactly one
    /// non-leaf child, and ranks lie in `1..=arity`.
    pub fn new(tau: DecoratedTree, roles: Vec<NodeRole>) -> Result<Self> {
        check_pattern(&tau)?;
        let flat = FlatPattern::new(&tau);
        if roles.len() != flat.nodes.len() {
            return Err(Error::Domain(format!(
                "{} roles for {} internal nodes",
                roles.len(),
                flat.nodes.len()
            )));
        }
        for (id, role) in roles.iter().enumerate() {
            if !flat.allowed_roles(id).contains(role) {
                return Err(Error::Domain(format!("role {role:?} not allowed at node {id}")));
            }
        }
        Ok(Self { tau, roles })
    }

    /// The pattern.
    pub fn tau(&self) -> &DecoratedTree {
        &self.tau
    }

    /// Roles of the internal nodes in preorder.
    pub fn roles(&self) -> &[NodeRole] {
        &self.roles
    }

    /// Counters of the product formula.
    pub fn counters(&self) -> AssignmentCounters {
        let flat = FlatPattern::new(&self.tau);
        let mut c = AssignmentCounters { root_in_v: self.roles[0].in_v(), ..Default::default() };
        for (id, node) in flat.nodes.iter().enumerate() {
            match self.roles[id] {
                NodeRole::Linear => {
                    c.n_l += 1;
                    for slot in &node.children {
                        match *slot {
                            Slot::Leaf => c.d_out_to_leaf += 1,
                            Slot::Node(child) if self.roles[child].in_v() => c.d_out_to_v += 1,
                            Slot::Node(child) if flat.nodes[child].decoration == node.decoration => c.d_eq += 1,
                            Slot::Node(_) => c.d_neq += 1,
                        }
                    }
                }
                NodeRole::V1 => c.v1 += 1,
                NodeRole::V2 { .. } => c.v2 += 1,
                NodeRole::V3 => {
                    let (_, child) = node.branch().expect("validated");
                    if self.roles[child].in_v() {
                        c.n2 += 1;
                    } else {
                        c.n1 += 1;
                    }
                }
                NodeRole::V0 => {}
            }
        }
        c
    }
}

/// All valid assignments of a pattern, in preorder-lexicographic order of
/// roles (linear first, then `V0`, `V1`, `V2` by rank, `V3`). Empty when
/// some prime node has two or more non-leaf children.
pub fn enumerate_assignments(tau: &DecoratedTree) -> Result<Vec<PatternAssignment>> {
    check_pattern(tau)?;
    let flat = FlatPattern::new(tau);
    let choices: Vec<Vec<NodeRole>> = (0..flat.nodes.len()).map(|id| flat.allowed_roles(id)).collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut idx = vec![0; choices.len()];
    loop {
        let roles = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        out.push(PatternAssignment { tau: tau.clone(), roles });
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn series_pow(s: &PowerSeries<BigRational>, e: usize) -> PowerSeries<BigRational> {
    (0..e).fold(PowerSeries::constant(BigRational::one(), s.order()), |acc, _| acc.mul(s))
}

/// Generating function of the marked trees realising one assignment,
/// instantiated literally from the product formula
/// `z^{|τ|}·T^root·(T_not⊕^⊕)^{d=}·(T_not⊕^⊖)^{d≠}·(T_not⊕^blo)^{d_{V̄→V}}·(T_not⊕')^{d_{V̄→ℓ}}
/// ·exp(n_L·T_not⊕)·T^{|V1|}·T'^{|V2|}·(T^⊕)^{n1}·(T^blo)^{n2}·F`,
/// where `F` holds one occurrence series per node in `V`.
pub fn assignment_series(
    pa: &PatternAssignment,
    class: GraphClass,
    order: usize,
) -> Result<PowerSeries<BigRational>> {
    let bundle = ClassSeriesBundle::new(class, order + 1);
    let s = |k: SeriesKind| bundle.series(k).truncated(order);
    let c = pa.counters();
    let t_root = if c.root_in_v { s(SeriesKind::TBlo) } else { s(SeriesKind::TPlus) };
    let exp_t_notplus = bundle.exp_t_notplus().to_series().truncated(order);
    let factors = [
        (t_root, 1),
        (s(SeriesKind::TNotPlusPlus), c.d_eq),
        (s(SeriesKind::TNotPlusMinus), c.d_neq),
        (s(SeriesKind::TNotPlusBlo), c.d_out_to_v),
        (bundle.series(SeriesKind::TNotPlus).derivative(), c.d_out_to_leaf),
        (exp_t_notplus, c.n_l),
        (s(SeriesKind::T), c.v1),
        (bundle.series(SeriesKind::T).derivative(), c.v2),
        (s(SeriesKind::TPlus), c.n1),
        (s(SeriesKind::TBlo), c.n2),
    ];
    let mut product = PowerSeries::constant(BigRational::one(), order);
    for (f, e) in &factors {
        product = product.mul(&series_pow(f, *e));
    }
    let flat = FlatPattern::new(&pa.tau);
    for (id, node) in flat.nodes.iter().enumerate() {
        let g = node.pattern_graph();
        let mode = match pa.roles[id] {
            NodeRole::Linear => continue,
            NodeRole::V0 => OccMode::P,
            NodeRole::V1 => OccMode::PBullet,
            NodeRole::V2 { rk } => OccMode::PBulletAt(rk),
            NodeRole::V3 => OccMode::PBulletAt(node.branch().expect("validated").0 + 1),
        };
        product = product.mul(&occ_series(&g, class, mode, order)?);
    }
    Ok(product.shift_up(pa.tau.size()))
}

/// `T_τ` up to `order` as the sum of [`assignment_series`] over all
/// assignments.
pub fn pattern_series_by_assignments(
    tau: &DecoratedTree,
    class: GraphClass,
    order: usize,
) -> Result<PowerSeries<BigRational>> {
    let mut total = PowerSeries::zero(order);
    for pa in enumerate_assignments(tau)? {
        total = total.add(&assignment_series(&pa, class, order)?);
    }
    Ok(total)
}

/// Labeled counts `n·f_n` of the series with one leaf distinguished.
fn pointed(f: &LabeledCounts) -> LabeledCounts {
    let counts = f.counts().iter().enumerate().map(|(n, c)| c * BigInt::from(n)).collect();
    LabeledCounts::from_counts(counts, f.order())
}

struct PatternDp<'a> {
    bundle: &'a ClassSeriesBundle,
    flat: FlatPattern,
    pointed_t_notplus: LabeledCounts,
    pointed_t: LabeledCounts,
}

impl PatternDp<'_> {
    fn occ(&self, node: &FlatNode, mode: OccMode) -> Result<LabeledCounts> {
        occ_host_counts(&node.pattern_graph(), self.bundle.class(), mode, self.bundle.order())
    }

    /// Counts of the marked subtrees hanging from the image of node `id`:
    /// with the linear role (if allowed), and summed over the roles in `V`.
    fn node(&self, id: usize) -> Result<(Option<LabeledCounts>, LabeledCounts)> {
        let b = self.bundle;
        let order = b.order();
        let node = &self.flat.nodes[id];
        let mut child_values = Vec::with_capacity(node.children.len());
        for slot in &node.children {
            child_values.push(match *slot {
                Slot::Leaf => None,
                Slot::Node(c) => Some((c, self.node(c)?)),
            });
        }
        let linear = if node.decoration.is_linear() {
            // Unmarked children form a set of trees whose root differs from
            // the node's decoration; each marked child is such a tree
            // holding the mark or the image of the pattern child.
            let mut acc = b.exp_t_notplus().clone();
            for value in &child_values {
                let factor = match value {
                    None => self.pointed_t_notplus.clone(),
                    Some((c, (outside, inside))) => {
                        let mut f = b.t_notplus_blo().mul(inside);
                        if let Some(out) = outside {
                            let context = if self.flat.nodes[*c].decoration == node.decoration {
                                b.t_notplus_plus()
                            } else {
                                b.t_notplus_minus()
                            };
                            f = f.add(&context.mul(out));
                        }
                        f
                    }
                };
                acc = acc.mul(&factor);
            }
            Some(acc)
        } else {
            None
        };
        let inside = if node.in_u0() {
            let mut total = self.occ(node, OccMode::P)?;
            total = total.add(&self.occ(node, OccMode::PBullet)?.mul(b.t()));
            let mut anchored = LabeledCounts::zero(order);
            for a in 1..=node.children.len() {
                anchored = anchored.add(&self.occ(node, OccMode::PBulletAt(a))?);
            }
            total.add(&anchored.mul(&self.pointed_t))
        } else if let Some((pos, _)) = node.branch() {
            let (_, (outside, inside)) = child_values[pos].as_ref().expect("branch is internal");
            let mut inner = b.t_blo().mul(inside);
            if let Some(out) = outside {
                inner = inner.add(&b.t_plus().mul(out));
            }
            self.occ(node, OccMode::PBulletAt(pos + 1))?.mul(&inner)
        } else {
            LabeledCounts::zero(order)
        };
        Ok((linear, inside))
    }
}

/// Labeled counts `n!·[zⁿ]T_τ` up to the bundle order, summed over all
/// assignments by a recursion over `τ`.
///
/// The image of the root hangs from a context, a tree with one blossom: a
/// `⊕`-replaceable one (`T^⊕`, equal to its `⊖` counterpart by symmetry)
/// for a linear image, any blossom (`T^blo`) for a prime one. Below a
/// linear image the marked children hang from contexts whose root avoids
/// the parent's decoration, and below a `V3` image the distinguished
/// subtree is again a context.
pub fn pattern_counts(tau: &DecoratedTree, bundle: &ClassSeriesBundle) -> Result<LabeledCounts> {
    check_pattern(tau)?;
    let dp = PatternDp {
        bundle,
        flat: FlatPattern::new(tau),
        pointed_t_notplus: pointed(bundle.t_notplus()),
        pointed_t: pointed(bundle.t()),
    };
    let (outside, inside) = dp.node(0)?;
    let mut total = bundle.t_blo().mul(&inside);
    if let Some(out) = outside {
        total = total.add(&bundle.t_plus().mul(&out));
    }
    Ok(total)
}

/// `T_τ` up to `order` with rational coefficients.
pub fn pattern_series(tau: &DecoratedTree, class: GraphClass, order: usize) -> Result<PowerSeries<BigRational>> {
    Ok(pattern_counts(tau, &ClassSeriesBundle::new(class, order))?.to_series())
}

fn falling(n: usize, k: usize) -> BigUint {
    (n - k + 1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn ratio(num: BigInt, den: BigInt) -> Result<BigRational> {
    if den.is_zero() {
        return Err(Error::Domain("the class has no graph of this size".into()));
    }
    Ok(BigRational::new(num, den))
}

/// The single-node pattern of a prime graph.
pub fn prime_pattern(pattern: &LabeledGraph) -> Result<DecoratedTree> {
    if pattern.has_blossom() || !is_prime(pattern) {
        return Err(Error::Domain("the pattern is not a prime graph".into()));
    }
    Ok(DecoratedTree::prime_of_leaves(pattern.clone()))
}

/// Exact expected number of occurrences (injections inducing exactly the
/// labeled pattern) of a prime pattern in a uniform graph of size `n`,
/// `[zⁿ]T_τ / [zⁿ]T`.
pub fn expected_occurrences_exact(pattern: &LabeledGraph, class: GraphClass, n: usize) -> Result<BigRational> {
    let tau = prime_pattern(pattern)?;
    if n < pattern.order() {
        return Ok(BigRational::zero());
    }
    let bundle = ClassSeriesBundle::new(class, n);
    let counts = pattern_counts(&tau, &bundle)?;
    ratio(counts.count(n), bundle.t().count(n))
}

/// Exact probability that `ℓ` uniformly chosen distinct leaves of a
/// uniform tree of size `n`, marked `1..=ℓ` in order of choice, induce the
/// binary pattern `τ`: `[zⁿ]T_τ / (n(n−1)…(n−ℓ+1)·[zⁿ]T)`.
pub fn subtree_probability_exact(tau: &DecoratedTree, class: GraphClass, n: usize) -> Result<BigRational> {
    let mut binary = true;
    tau.for_each_node(&mut |node| binary &= node.children().len() == 2);
    if !binary || tau.size() < 2 {
        return Err(Error::InvalidTree("expected a binary pattern with at least 2 leaves".into()));
    }
    let l = tau.size();
    if n < l {
        return Err(Error::Domain(format!("size {n} below the pattern size {l}")));
    }
    let bundle = ClassSeriesBundle::new(class, n);
    let counts = pattern_counts(tau, &bundle)?;
    ratio(counts.count(n), bundle.t().count(n) * BigInt::from(falling(n, l)))
}

/// The trees of sizes `1..m` of a class, by root type.
struct TreeTables {
    /// Leaves and prime roots, indexed by size.
    other: Vec<Vec<DecoratedTree>>,
    /// `Union` roots.
    union: Vec<Vec<DecoratedTree>>,
    /// `Join` roots.
    join: Vec<Vec<DecoratedTree>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RootKind {
    Other,
    Union,
    Join,
}

impl TreeTables {
    fn trees<'a>(&'a self, m: usize, kinds: &'a [RootKind]) -> impl Iterator<Item = &'a DecoratedTree> + 'a {
        kinds.iter().flat_map(move |k| match k {
            RootKind::Other => self.other[m].iter(),
            RootKind::Union => self.union[m].iter(),
            RootKind::Join => self.join[m].iter(),
        })
    }
}

/// Set partitions of `labels` into at least two blocks, blocks in order of
/// their smallest element.
fn set_partitions(labels: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn rec(labels: &[usize], i: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == labels.len() {
            if blocks.len() >= 2 {
                out.push(blocks.clone());
            }
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(labels[i]);
            rec(labels, i + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![labels[i]]);
        rec(labels, i + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(labels, 0, &mut Vec::new(), &mut out);
    out
}

/// `k`-subsets of `1..=m`, increasing.
fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=m {
            if m - x + 1 < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, m, k, &mut Vec::new(), &mut out);
    out
}

fn relabel_onto(t: &DecoratedTree, labels: &[usize]) -> DecoratedTree {
    t.relabeled(&|l| labels[l - 1])
}

/// A blossomed decoration as a plain graph whose blossom is an ordinary
/// vertex, together with the blossom's index.
pub(crate) fn unblossomed(h: &LabeledGraph) -> (LabeledGraph, usize) {
    let b = h.blossom_vertex().expect("blossomed decoration");
    let mut g = LabeledGraph::new(h.order());
    for (u, v) in h.edges() {
        g.add_edge(u, v);
    }
    (g, b)
}

/// Emits every tree of size `m` with leaf labels `1..=m`, given the tables
/// for smaller sizes.
fn generate_level(
    class: GraphClass,
    m: usize,
    tables: &TreeTables,
    sink: &mut dyn FnMut(RootKind, DecoratedTree),
) -> Result<()> {
    if m == 1 {
        sink(RootKind::Other, DecoratedTree::leaf(1));
        return Ok(());
    }
    // (D2): a decoration of P over leaves.
    for h in labeled_family(class, m, false)? {
        sink(RootKind::Other, DecoratedTree::prime_of_leaves(h));
    }
    // (D4): a decoration of P• over leaves and one tree at the blossom.
    for s in 1..m {
        let family = labeled_family(class, s, true)?;
        if family.is_empty() {
            continue;
        }
        let j = m - s;
        let all = [RootKind::Other, RootKind::Union, RootKind::Join];
        for inner_labels in combinations(m, j) {
            let rest: Vec<usize> = (1..=m).filter(|l| !inner_labels.contains(l)).collect();
            for inner in tables.trees(j, &all) {
                let inner = relabel_onto(inner, &inner_labels);
                for h in &family {
                    let (g, b) = unblossomed(h);
                    let children = (0..g.order())
                        .map(|v| if v == b { inner.clone() } else { DecoratedTree::leaf(rest[v]) })
                        .collect();
                    sink(RootKind::Other, DecoratedTree::prime(g, children)?);
                }
            }
        }
    }
    // (D3): linear roots over trees whose root has another decoration.
    let labels: Vec<usize> = (1..=m).collect();
    for partition in set_partitions(&labels) {
        for (decoration, kind, allowed) in [
            (Decoration::Union, RootKind::Union, [RootKind::Other, RootKind::Join]),
            (Decoration::Join, RootKind::Join, [RootKind::Other, RootKind::Union]),
        ] {
            let lists: Vec<Vec<DecoratedTree>> = partition
                .iter()
                .map(|block| tables.trees(block.len(), &allowed).map(|t| relabel_onto(t, block)).collect())
                .collect();
            if lists.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0; lists.len()];
            'product: loop {
                let children = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
                sink(kind, DecoratedTree::node(decoration.clone(), children)?);
                let mut pos = lists.len();
                loop {
                    if pos == 0 {
                        break 'product;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < lists[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
    }
    Ok(())
}

/// Calls `f` on every grammar tree of the class with leaf labels
/// `1..=n`, each exactly once. Only trees of smaller sizes are stored.
pub fn for_each_tree(class: GraphClass, n: usize, f: &mut dyn FnMut(DecoratedTree)) -> Result<()> {
    if n > TREE_ENUMERATION_BOUND {
        return Err(Error::TooLarge { what: "tree enumeration", size: n, bound: TREE_ENUMERATION_BOUND });
    }
    if n == 0 {
        return Ok(());
    }
    let mut tables = TreeTables { other: vec![Vec::new()], union: vec![Vec::new()], join: vec![Vec::new()] };
    for m in 1..n {
        let (mut other, mut union, mut join) = (Vec::new(), Vec::new(), Vec::new());
        generate_level(class, m, &tables, &mut |kind, t| match kind {
            RootKind::Other => other.push(t),
            RootKind::Union => union.push(t),
            RootKind::Join => join.push(t),
        })?;
        tables.other.push(other);
        tables.union.push(union);
        tables.join.push(join);
    }
    generate_level(class, n, &tables, &mut |_, t| f(t))
}

/// Every grammar tree of the class with leaf labels `1..=n`.
pub fn enumerate_trees(class: GraphClass, n: usize) -> Result<Vec<DecoratedTree>> {
    let mut out = Vec::new();
    for_each_tree(class, n, &mut |t| out.push(t))?;
    Ok(out)
}

/// Number of marked trees `(t, 𝕴)` of size `n` with `t_𝕴 = τ`, by
/// enumeration.
///
/// Relabeling leaves permutes the trees of a class, so every injection of
/// the `|τ|` marks is realised by the same number of trees as the injection
/// marking labels `1..=|τ|` in order; the count is that number times
/// `n(n−1)…(n−|τ|+1)`.
pub fn brute_force_pattern_count(tau: &DecoratedTree, class: GraphClass, n: usize) -> Result<BigUint> {
    check_pattern(tau)?;
    let p = tau.size();
    if p > n {
        return Ok(BigUint::zero());
    }
    Ok(brute_force_pattern_census(class, n, p)?.remove(tau).unwrap_or_default())
}

/// [`brute_force_pattern_count`] for every pattern of size `p` at once, in
/// a single pass over the trees of size `n`. Patterns that never occur are
/// absent from the map.
pub fn brute_force_pattern_census(class: GraphClass, n: usize, p: usize) -> Result<HashMap<DecoratedTree, BigUint>> {
    if p == 0 || p > n {
        return Err(Error::Domain(format!("cannot mark {p} of {n} leaves")));
    }
    let marking = PartialInjection::identity(p);
    let mut hits: HashMap<DecoratedTree, u64> = HashMap::new();
    let mut err = None;
    for_each_tree(class, n, &mut |t| match t.induced_subtree(&marking) {
        Ok(sub) => *hits.entry(sub).or_default() += 1,
        Err(e) => err = Some(e),
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let scale = falling(n, p);
    Ok(hits.into_iter().map(|(tau, h)| (tau, &scale * h)).collect())
}

/// Every substitution tree with leaf labels `1..=p`, with every graph on
/// `k` vertices allowed as a decoration of a node with `k` children.
pub fn all_patterns(p: usize) -> Result<Vec<DecoratedTree>> {
    if p > 5 {
        return Err(Error::TooLarge { what: "pattern enumeration", size: p, bound: 5 });
    }
    fn on(labels: &[usize]) -> Vec<DecoratedTree> {
        if labels.len() == 1 {
            return vec![DecoratedTree::leaf(labels[0])];
        }
        let mut out = Vec::new();
        for partition in set_partitions(labels) {
            let lists: Vec<Vec<DecoratedTree>> = partition.iter().map(|b| on(b)).collect();
            let decorations: Vec<Decoration> =
                all_labeled_graphs(partition.len()).map(Decoration::from_graph).collect();
            let mut idx = vec![0; lists.len()];
            'product: loop {
                let children: Vec<DecoratedTree> = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
                for d in &decorations {
                    out.push(DecoratedTree::node(d.clone(), children.clone()).expect("arity matches"));
                }
                let mut pos = lists.len();
                loop {
                    if pos == 0 {
                        break 'product;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < lists[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        out
    }
    Ok(on(&(1..=p).collect::<Vec<_>>()))
}
