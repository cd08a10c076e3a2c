//! Exact uniform random generation by the recursive method, and a
//! Monte-Carlo harness for occurrence and induced-subtree statistics.
//!
//! A tree of the class is a set of components whose roots are not `⊕`
//! (`T = exp(T_not⊕) − 1`): one component is the tree itself, two or more
//! hang below a `⊕` root. A tree rooted away from `⊕` is a leaf, a prime
//! node over leaves (mass `P`), a blossomed prime node with one arbitrary
//! tree at its blossom (mass `T·P•`) or a `⊖` node over at least two
//! components rooted away from `⊖`. The last case is the first one with
//! `⊕` and `⊖` exchanged, so the sampler carries a parity and flips
//! decorations instead of keeping a second family of tables.
//!
//! Sets of components are drawn by the component holding the smallest
//! label: with `m` labels its size is `k` with weight
//! `C(m−1,k−1)·u_k·e_{m−k}`, where `u = n!·[zⁿ]T_not⊕` and
//! `e = n!·[zⁿ]exp(T_not⊕)`. Its other labels form a uniform subset of the
//! remaining ones. Anchoring on the smallest label gives each set exactly
//! one construction, so no ordering correction is needed.
//!
//! Every choice compares a uniform big integer below the exact total mass
//! with running partial sums, so the distribution is exact.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{sample_prime_decoration, GraphClass};
use crate::decomposition::is_prime;
use crate::egf::ClassSeriesBundle;
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, PartialInjection};
use crate::occurrence::{bull, p4_tilde};
use crate::pattern::unblossomed;
use crate::random::RandomSource;
use crate::series::LabeledCounts;
use crate::tree::{Decoration, DecoratedTree};

/// Largest size the sampler tables may be built for.
pub const SAMPLER_SIZE_BOUND: usize = 4096;

/// Exact labeled counts (`n!·[zⁿ]`) driving the sampler, for sizes
/// `0..=n_max`.
///
/// For every `n ≥ 1`, `t_notplus[n] = leaf[n] + p[n] + blossomed[n] + linear[n]`,
/// which is the case split of a tree whose root is not `⊕`.
#[derive(Clone, Debug)]
pub struct SamplerTables {
    class: GraphClass,
    n_max: usize,
    /// Trees rooted away from `⊕`.
    t_notplus: Vec<BigUint>,
    /// Sets of such trees, `exp(T_not⊕)`; entry `n ≥ 1` counts all trees.
    exp_t_notplus: Vec<BigUint>,
    /// Prime decorations `P`.
    p: Vec<BigUint>,
    /// Blossomed prime decorations `P•`, by number of labeled vertices.
    p_bullet: Vec<BigUint>,
    /// Blossomed prime node with a tree at the blossom, `T·P•`.
    blossomed: Vec<BigUint>,
    /// `⊖` roots over at least two components, `exp(T_not⊕) − 1 − T_not⊕`.
    linear: Vec<BigUint>,
}

/// Mass of each case for trees of one size whose root is not `⊕`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseMasses {
    /// Single leaf.
    pub leaf: BigUint,
    /// Prime node whose children are all leaves.
    pub prime: BigUint,
    /// Blossomed prime node with a tree at the blossom.
    pub blossomed: BigUint,
    /// Linear node over at least two components.
    pub linear: BigUint,
}

impl CaseMasses {
    /// Sum of the four masses.
    pub fn total(&self) -> BigUint {
        &self.leaf + &self.prime + &self.blossomed + &self.linear
    }
}

fn to_naturals(counts: &LabeledCounts) -> Vec<BigUint> {
    counts
        .counts()
        .iter()
        .map(|c| c.to_biguint().expect("labeled counts of a class are non-negative"))
        .collect()
}

/// Builds the tables of `class` for sizes up to `n_max`.
pub fn build_tables(class: GraphClass, n_max: usize) -> Result<SamplerTables> {
    if n_max == 0 {
        return Err(Error::Domain("sampler tables need n_max ≥ 1".into()));
    }
    if n_max > SAMPLER_SIZE_BOUND {
        return Err(Error::TooLarge { what: "sampler tables", size: n_max, bound: SAMPLER_SIZE_BOUND });
    }
    let bundle = ClassSeriesBundle::new(class, n_max);
    Ok(SamplerTables::from_bundle(&bundle))
}

impl SamplerTables {
    /// Tables read off an already solved bundle.
    pub fn from_bundle(bundle: &ClassSeriesBundle) -> Self {
        let n_max = bundle.order();
        let t_notplus = to_naturals(bundle.t_notplus());
        let exp_t_notplus = to_naturals(bundle.exp_t_notplus());
        let p = to_naturals(bundle.p());
        let p_bullet = to_naturals(bundle.p_bullet());
        let mut blossomed = vec![BigUint::zero(); n_max + 1];
        for (n, slot) in blossomed.iter_mut().enumerate().skip(1) {
            let mut binom = BigUint::one();
            for s in 1..n {
                // binom = C(n, s)
                binom = binom * BigUint::from(n - s + 1) / BigUint::from(s);
                if !p_bullet[s].is_zero() {
                    *slot += &binom * &p_bullet[s] * &exp_t_notplus[n - s];
                }
            }
        }
        let linear = (0..=n_max)
            .map(|n| if n == 0 { BigUint::zero() } else { &exp_t_notplus[n] - &t_notplus[n] })
            .collect();
        Self { class: bundle.class(), n_max, t_notplus, exp_t_notplus, p, p_bullet, blossomed, linear }
    }

    /// The class.
    pub fn class(&self) -> GraphClass {
        self.class
    }

    /// Largest supported size.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of labeled graphs of the class on `n` vertices.
    pub fn graph_count(&self, n: usize) -> Result<&BigUint> {
        self.check_size(n)?;
        Ok(&self.exp_t_notplus[n])
    }

    /// Number of trees of size `n` whose root is not `⊕`.
    pub fn t_notplus(&self, n: usize) -> Result<&BigUint> {
        self.check_size(n)?;
        Ok(&self.t_notplus[n])
    }

    /// Case masses for trees of size `n` whose root is not `⊕`.
    pub fn case_masses(&self, n: usize) -> Result<CaseMasses> {
        self.check_size(n)?;
        Ok(CaseMasses {
            leaf: if n == 1 { BigUint::one() } else { BigUint::zero() },
            prime: self.p[n].clone(),
            blossomed: self.blossomed[n].clone(),
            linear: self.linear[n].clone(),
        })
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.n_max {
            return Err(Error::Domain(format!("size {n} outside the tables' range 1..={}", self.n_max)));
        }
        Ok(())
    }

    /// Uniform tree of the class with leaf labels `1..=n`.
    pub fn sample_tree(&self, n: usize, rng: &mut RandomSource) -> Result<DecoratedTree> {
        self.check_size(n)?;
        let labels: Vec<usize> = (1..=n).collect();
        self.any_tree(&labels, false, rng)
    }

    /// Uniform graph of the class on labels `1..=n`.
    pub fn sample_graph(&self, n: usize, rng: &mut RandomSource) -> Result<LabeledGraph> {
        self.sample_tree(n, rng)?.graph_of()
    }

    /// Uniform tree on `labels` (sorted). Without flip its root may be
    /// anything; the components are rooted away from `⊕` and a `⊕` root is
    /// added when there are several.
    fn any_tree(&self, labels: &[usize], flipped: bool, rng: &mut RandomSource) -> Result<DecoratedTree> {
        let mut parts = self.component_set(labels, flipped, false, rng)?;
        if parts.len() == 1 {
            return Ok(parts.pop().expect("one part"));
        }
        DecoratedTree::node(linear_decoration(!flipped), parts)
    }

    /// Uniform set of components rooted away from `⊕` (away from `⊖` when
    /// flipped) on `labels`, with at least two components if `several`.
    fn component_set(
        &self,
        labels: &[usize],
        flipped: bool,
        several: bool,
        rng: &mut RandomSource,
    ) -> Result<Vec<DecoratedTree>> {
        let mut parts = Vec::new();
        let mut rest = labels.to_vec();
        let mut need_several = several;
        while !rest.is_empty() {
            let m = rest.len();
            let total = if need_several { &self.linear[m] } else { &self.exp_t_notplus[m] };
            let k = self.first_component_size(m, total, need_several, rng)?;
            let mut picked = vec![rest[0]];
            let others = rng.subset(m - 1, k - 1);
            picked.extend(others.iter().map(|&i| rest[i + 1]));
            let mut keep = vec![true; m];
            keep[0] = false;
            for &i in &others {
                keep[i + 1] = false;
            }
            rest = rest.iter().zip(&keep).filter(|(_, &k)| k).map(|(&l, _)| l).collect();
            parts.push(self.component(&picked, flipped, rng)?);
            need_several = false;
        }
        Ok(parts)
    }

    /// Size of the component holding the smallest of `m` labels, drawn with
    /// weight `C(m−1,k−1)·u_k·e_{m−k}` among sizes `k ≤ m` (`k < m` when
    /// `several`). Sizes are visited as `1, m, 2, m−1, …`, where the mass
    /// concentrates, so that one binomial serves each pair.
    fn first_component_size(&self, m: usize, total: &BigUint, several: bool, rng: &mut RandomSource) -> Result<usize> {
        if total.is_zero() {
            return Err(Error::Domain(format!("no structure of size {m} in class {}", self.class)));
        }
        let mut draw = rng.below_big(total);
        let mut binom = BigUint::one();
        let mut j = 0;
        while 2 * j < m {
            let low = j + 1;
            let high = m - j;
            let sizes = if low == high { &[low][..] } else { &[low, high][..] };
            for &k in sizes {
                if several && k == m {
                    continue;
                }
                let w = &binom * &self.t_notplus[k] * &self.exp_t_notplus[m - k];
                if draw < w {
                    return Ok(k);
                }
                draw -= w;
            }
            // binom = C(m−1, j+1)
            binom = binom * BigUint::from(m - 1 - j) / BigUint::from(j + 1);
            j += 1;
        }
        unreachable!("the weights sum to the total mass")
    }

    /// Uniform tree on `labels` rooted away from `⊕` (away from `⊖` when
    /// flipped).
    fn component(&self, labels: &[usize], flipped: bool, rng: &mut RandomSource) -> Result<DecoratedTree> {
        let n = labels.len();
        if n == 1 {
            return Ok(DecoratedTree::leaf(labels[0]));
        }
        let mut draw = rng.below_big(&self.t_notplus[n]);
        if draw < self.linear[n] {
            let parts = self.component_set(labels, !flipped, true, rng)?;
            return DecoratedTree::node(linear_decoration(flipped), parts);
        }
        draw -= &self.linear[n];
        if draw < self.p[n] {
            let g = orient(sample_prime_decoration(self.class, n, false, rng)?, flipped)?;
            return DecoratedTree::prime(g, labels.iter().map(|&l| DecoratedTree::leaf(l)).collect());
        }
        draw -= &self.p[n];
        let s = self.blossom_outer_size(n, draw)?;
        let inner_idx = rng.subset(n, n - s);
        let mut is_inner = vec![false; n];
        inner_idx.iter().for_each(|&i| is_inner[i] = true);
        let inner_labels: Vec<usize> = inner_idx.iter().map(|&i| labels[i]).collect();
        let outer_labels: Vec<usize> = (0..n).filter(|&i| !is_inner[i]).map(|i| labels[i]).collect();
        let inner = self.any_tree(&inner_labels, flipped, rng)?;
        let (g, b) = unblossomed(&sample_prime_decoration(self.class, s, true, rng)?);
        let g = orient(g, flipped)?;
        let mut outer = outer_labels.into_iter();
        let mut inner = Some(inner);
        let children = (0..g.order())
            .map(|v| {
                if v == b {
                    inner.take().expect("one blossom")
                } else {
                    DecoratedTree::leaf(outer.next().expect("one label per vertex"))
                }
            })
            .collect();
        DecoratedTree::prime(g, children)
    }

    /// Number of labeled decoration vertices of a blossomed node of size
    /// `n`, given a draw below its mass `Σ_s C(n,s)·P•_s·e_{n−s}`.
    fn blossom_outer_size(&self, n: usize, mut draw: BigUint) -> Result<usize> {
        let mut binom = BigUint::one();
        for s in 1..n {
            binom = binom * BigUint::from(n - s + 1) / BigUint::from(s);
            if self.p_bullet[s].is_zero() {
                continue;
            }
            let w = &binom * &self.p_bullet[s] * &self.exp_t_notplus[n - s];
            if draw < w {
                return Ok(s);
            }
            draw -= w;
        }
        Err(Error::Domain("draw exceeds the blossomed mass".into()))
    }
}

/// `⊖` (`Union`) unless flipped, then `⊕` (`Join`).
fn linear_decoration(flipped: bool) -> Decoration {
    if flipped {
        Decoration::Join
    } else {
        Decoration::Union
    }
}

fn orient(g: LabeledGraph, flipped: bool) -> Result<LabeledGraph> {
    if flipped {
        g.complement()
    } else {
        Ok(g)
    }
}

/// Uniform tree of `class` with `n` leaves; builds the tables each call.
pub fn sample_tree(class: GraphClass, n: usize, rng: &mut RandomSource) -> Result<DecoratedTree> {
    build_tables(class, n)?.sample_tree(n, rng)
}

/// Uniform graph of `class` on `n` vertices; builds the tables each call.
pub fn sample_graph(class: GraphClass, n: usize, rng: &mut RandomSource) -> Result<LabeledGraph> {
    build_tables(class, n)?.sample_graph(n, rng)
}

/// Number of occurrences (injections inducing exactly the labeled graph)
/// of a prime `pattern` in the graph of `tree`.
///
/// An induced copy of a prime graph meets each child of its first common
/// ancestor in at most one vertex, since the parts would otherwise form a
/// nontrivial module of the pattern. That ancestor is therefore a prime
/// node, and the copy is an embedding of the pattern into its decoration
/// with one leaf chosen below each used child. Summing these weighted
/// embeddings over prime nodes counts every occurrence once.
pub fn prime_occurrences_in_tree(pattern: &LabeledGraph, tree: &DecoratedTree) -> Result<u128> {
    if pattern.has_blossom() || !is_prime(pattern) {
        return Err(Error::Domain("the pattern is not a prime graph".into()));
    }
    let mut total: u128 = 0;
    tree.for_each_node(&mut |node| {
        if let Decoration::Prime(g) = node.decoration() {
            let weights: Vec<u128> = node.children().iter().map(|c| c.size() as u128).collect();
            let mut image = Vec::with_capacity(pattern.order());
            total += weighted_embeddings(pattern, g, &weights, &mut image);
        }
    });
    Ok(total)
}

/// Σ over injective induced embeddings extending `image` of the product of
/// the weights of the host vertices used.
fn weighted_embeddings(pattern: &LabeledGraph, host: &LabeledGraph, weights: &[u128], image: &mut Vec<usize>) -> u128 {
    let next = image.len();
    if next == pattern.order() {
        return image.iter().map(|&v| weights[v]).product();
    }
    let mut sum = 0;
    for v in 0..host.order() {
        if image.contains(&v) {
            continue;
        }
        if image.iter().enumerate().all(|(u, &w)| pattern.has_edge(u, next) == host.has_edge(w, v)) {
            image.push(v);
            sum += weighted_embeddings(pattern, host, weights, image);
            image.pop();
        }
    }
    sum
}

/// Mean and standard error of a Monte-Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        Self { mean, std_error: (var / n).sqrt() }
    }
}

/// Observed frequency of one induced-subtree shape.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubtreeFrequency {
    /// Number of marked leaves.
    pub ell: usize,
    /// The induced subtree as an S-expression, leaves labeled by mark.
    pub shape: String,
    /// Number of trials that produced this shape.
    pub hits: usize,
    /// `hits / trials`, with its binomial standard error.
    pub frequency: Estimate,
}

/// Monte-Carlo statistics over uniform samples of one size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalStats {
    pub class: String,
    pub n: usize,
    pub trials: usize,
    /// `Occ_{P̃4}(G)/n`.
    pub occ_p4_over_n: Estimate,
    /// `Occ_bull(G)/n^{3/2}`.
    pub occ_bull_over_n_three_halves: Estimate,
    /// Shapes induced by 2 and by 3 uniformly chosen leaves, marked in the
    /// order of choice; one marking of each size per trial.
    pub subtree_frequencies: Vec<SubtreeFrequency>,
}

struct Trial {
    occ_p4: u128,
    occ_bull: u128,
    shapes: [String; 2],
}

/// Runs `trials` independent samples of size `n` in parallel. Trial `i`
/// uses the stream `rng.split(i)`, so the report depends on the seed only.
pub fn empirical_stats(class: GraphClass, n: usize, trials: usize, rng: &RandomSource) -> Result<EmpiricalStats> {
    let tables = build_tables(class, n)?;
    empirical_stats_with(&tables, n, trials, rng)
}

/// [`empirical_stats`] with prebuilt tables.
pub fn empirical_stats_with(tables: &SamplerTables, n: usize, trials: usize, rng: &RandomSource) -> Result<EmpiricalStats> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is needed".into()));
    }
    if n < 3 {
        return Err(Error::Domain("statistics need n ≥ 3 to mark three leaves".into()));
    }
    let (p4, bull) = (p4_tilde(), bull());
    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.split(i as u64);
            let tree = tables.sample_tree(n, &mut r)?;
            let shapes = [2, 3].map(|ell| {
                let mut picked = r.subset(n, ell);
                r.shuffle(&mut picked);
                let inj = PartialInjection::new(picked.iter().enumerate().map(|(m, &i)| (i + 1, m + 1)))
                    .expect("distinct labels and marks");
                tree.induced_subtree(&inj).map(|t| t.to_sexp())
            });
            let [a, b] = shapes;
            Ok(Trial {
                occ_p4: prime_occurrences_in_tree(&p4, &tree)?,
                occ_bull: prime_occurrences_in_tree(&bull, &tree)?,
                shapes: [a?, b?],
            })
        })
        .collect::<Result<_>>()?;
    let nf = n as f64;
    let p4s: Vec<f64> = outcomes.iter().map(|t| t.occ_p4.to_f64().unwrap_or(f64::INFINITY) / nf).collect();
    let bulls: Vec<f64> =
        outcomes.iter().map(|t| t.occ_bull.to_f64().unwrap_or(f64::INFINITY) / nf.powf(1.5)).collect();
    let mut tallies: BTreeMap<(usize, String), usize> = BTreeMap::new();
    for t in &outcomes {
        for (slot, shape) in t.shapes.iter().enumerate() {
            *tallies.entry((slot + 2, shape.clone())).or_default() += 1;
        }
    }
    let tf = trials as f64;
    let subtree_frequencies = tallies
        .into_iter()
        .map(|((ell, shape), hits)| {
            let p = hits as f64 / tf;
            SubtreeFrequency { ell, shape, hits, frequency: Estimate { mean: p, std_error: (p * (1.0 - p) / tf).sqrt() } }
        })
        .collect();
    Ok(EmpiricalStats {
        class: tables.class().name().to_string(),
        n,
        trials,
        occ_p4_over_n: Estimate::from_samples(&p4s),
        occ_bull_over_n_three_halves: Estimate::from_samples(&bulls),
        subtree_frequencies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{is_member, is_member_definitional};
    use crate::graph::{count_occurrences, OccurrenceMode};
    use crate::pattern::enumerate_trees;
    use std::collections::HashMap;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn case_masses_partition_the_not_plus_counts() {
        for class in GraphClass::ALL {
            let tables = build_tables(class, 30).unwrap();
            for n in 1..=30 {
                assert_eq!(tables.case_masses(n).unwrap().total(), *tables.t_notplus(n).unwrap(), "{class} {n}");
            }
            assert_eq!(*tables.graph_count(4).unwrap(), crate::egf::graph_count(class, 4).unwrap());
        }
        let cograph = build_tables(GraphClass::Cograph, 12).unwrap();
        for n in 1..=12 {
            let masses = cograph.case_masses(n).unwrap();
            assert!(masses.prime.is_zero() && masses.blossomed.is_zero());
        }
    }

    #[test]
    fn size_guards() {
        assert!(build_tables(GraphClass::Tidy, 0).is_err());
        assert!(build_tables(GraphClass::Tidy, SAMPLER_SIZE_BOUND + 1).is_err());
        let tables = build_tables(GraphClass::Tidy, 5).unwrap();
        assert!(tables.sample_tree(6, &mut RandomSource::new(1)).is_err());
    }

    #[test]
    fn single_leaf() {
        let mut rng = RandomSource::new(3);
        for class in GraphClass::ALL {
            assert_eq!(sample_tree(class, 1, &mut rng).unwrap(), DecoratedTree::leaf(1));
        }
    }

    fn chi_square_p_value(class: GraphClass, n: usize, samples: usize, seed: u64) -> f64 {
        let population = enumerate_trees(class, n).unwrap();
        let index: HashMap<DecoratedTree, usize> =
            population.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let tables = build_tables(class, n).unwrap();
        let mut rng = RandomSource::new(seed);
        let mut hits = vec![0usize; population.len()];
        for _ in 0..samples {
            let t = tables.sample_tree(n, &mut rng).unwrap();
            hits[*index.get(&t).expect("sample belongs to the enumerated population")] += 1;
        }
        let expected = samples as f64 / population.len() as f64;
        let stat: f64 = hits.iter().map(|&h| (h as f64 - expected).powi(2) / expected).sum();
        let dist = ChiSquared::new((population.len() - 1) as f64).unwrap();
        1.0 - dist.cdf(stat)
    }

    #[test]
    fn uniform_over_small_populations() {
        for class in GraphClass::ALL {
            for n in 2..=4 {
                let p = chi_square_p_value(class, n, 20_000, 11 + n as u64);
                assert!(p > 1e-3, "{class} n={n} p={p}");
            }
        }
    }

    #[test]
    fn cograph_pairs_split_evenly() {
        let tables = build_tables(GraphClass::Cograph, 2).unwrap();
        let mut rng = RandomSource::new(5);
        let trials = 20_000;
        let joins = (0..trials)
            .filter(|_| tables.sample_tree(2, &mut rng).unwrap().decoration() == Some(&Decoration::Join))
            .count();
        let sigma = (trials as f64 * 0.25).sqrt();
        assert!((joins as f64 - trials as f64 / 2.0).abs() < 4.0 * sigma, "{joins}");
    }

    #[test]
    fn root_decorations_are_balanced() {
        let tables = build_tables(GraphClass::Extendible, 40).unwrap();
        let mut rng = RandomSource::new(8);
        let (mut joins, mut unions) = (0i64, 0i64);
        for _ in 0..4000 {
            match tables.sample_tree(40, &mut rng).unwrap().decoration() {
                Some(Decoration::Join) => joins += 1,
                Some(Decoration::Union) => unions += 1,
                _ => {}
            }
        }
        let sigma = ((joins + unions) as f64).sqrt();
        assert!(((joins - unions) as f64).abs() < 4.0 * sigma, "{joins} vs {unions}");
    }

    #[test]
    fn samples_are_members() {
        let mut rng = RandomSource::new(21);
        for class in GraphClass::ALL {
            let tables = build_tables(class, 60).unwrap();
            for n in [5, 8, 10] {
                for _ in 0..20 {
                    let g = tables.sample_graph(n, &mut rng).unwrap();
                    assert!(is_member(&g, class).unwrap(), "{class}");
                    assert!(is_member_definitional(&g, class).unwrap(), "{class}");
                }
            }
            for _ in 0..5 {
                let t = tables.sample_tree(60, &mut rng).unwrap();
                assert!(is_member(&t.graph_of().unwrap(), class).unwrap(), "{class}");
            }
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let tables = build_tables(GraphClass::Tidy, 50).unwrap();
        let run = |seed| {
            let mut rng = RandomSource::new(seed);
            (0..10).map(|_| tables.sample_tree(50, &mut rng).unwrap().to_sexp()).collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
        let a = empirical_stats_with(&tables, 50, 64, &RandomSource::new(2)).unwrap();
        let b = empirical_stats_with(&tables, 50, 64, &RandomSource::new(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tree_occurrence_count_matches_direct_count() {
        let mut rng = RandomSource::new(13);
        for class in [GraphClass::Tidy, GraphClass::Lite, GraphClass::Sparse, GraphClass::Reducible] {
            let tables = build_tables(class, 30).unwrap();
            for (pattern, n) in [(p4_tilde(), 30), (bull(), 12)] {
                for _ in 0..6 {
                    let t = tables.sample_tree(n, &mut rng).unwrap();
                    let direct =
                        count_occurrences(&pattern, &t.graph_of().unwrap(), OccurrenceMode::IgnoreBlossom).unwrap();
                    assert_eq!(prime_occurrences_in_tree(&pattern, &t).unwrap(), direct, "{class}");
                }
            }
        }
        let not_prime = LabeledGraph::path(3);
        assert!(prime_occurrences_in_tree(&not_prime, &DecoratedTree::leaf(1)).is_err());
    }

    #[test]
    fn cograph_stats() {
        let stats = empirical_stats(GraphClass::Cograph, 30, 200, &RandomSource::new(4)).unwrap();
        assert_eq!(stats.occ_p4_over_n.mean, 0.0);
        assert_eq!(stats.occ_bull_over_n_three_halves.mean, 0.0);
        let pairs: usize = stats.subtree_frequencies.iter().filter(|f| f.ell == 2).map(|f| f.hits).sum();
        assert_eq!(pairs, 200);
        assert!(stats.subtree_frequencies.iter().filter(|f| f.ell == 2).count() <= 2);
    }
}
