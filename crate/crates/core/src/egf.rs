//! Exponential generating functions of the tree grammar of each class.
//!
//! The trees of a class whose root is not `⊕` satisfy
//! `T_not⊕ = z + P + (exp(T_not⊕) − 1)·P• + exp(T_not⊕) − 1 − T_not⊕`,
//! every tree satisfies `T = exp(T_not⊕) − 1`, and the trees carrying one
//! blossom are rational functions of `exp(T_not⊕)` and `P•`. All of these
//! count labeled objects, so they are computed exactly as
//! [`LabeledCounts`], degree by degree.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::classes::{is_member_definitional, GraphClass};
use crate::error::{Error, Result};
use crate::graph::all_labeled_graphs;
use crate::series::{factorial, LabeledCounts, PowerSeries};

/// Largest size accepted by [`brute_force_class_count`].
pub const BRUTE_FORCE_BOUND: usize = 6;

/// Series of the form `A(z)·exp(z²) + B(z)` with rational polynomials
/// `A` and `B`, which covers every closed form of the decoration families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpQuadForm {
    /// Coefficients of `A`, constant first.
    pub exp_part: Vec<BigRational>,
    /// Coefficients of `B`, constant first.
    pub poly_part: Vec<BigRational>,
}

fn rationals(coeffs: &[(i64, i64)]) -> Vec<BigRational> {
    coeffs.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect()
}

fn to_float<F: Float>(q: &BigRational) -> F {
    let n = F::from(q.numer().to_i64().expect("small numerator")).expect("representable");
    let d = F::from(q.denom().to_i64().expect("small denominator")).expect("representable");
    n / d
}

fn horner<F: Float>(coeffs: &[BigRational], x: F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x + to_float::<F>(c))
}

impl ExpQuadForm {
    /// Form from `(numerator, denominator)` pairs.
    pub fn new(exp_part: &[(i64, i64)], poly_part: &[(i64, i64)]) -> Self {
        Self { exp_part: rationals(exp_part), poly_part: rationals(poly_part) }
    }

    /// The zero series.
    pub fn zero() -> Self {
        Self { exp_part: Vec::new(), poly_part: Vec::new() }
    }

    /// Exact coefficients up to `order`.
    pub fn series(&self, order: usize) -> PowerSeries<BigRational> {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.exp_part.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut j = 0;
            while i + 2 * j <= order {
                let w = BigRational::new(BigInt::one(), BigInt::from(factorial(j)));
                coeffs[i + 2 * j] += a * w;
                j += 1;
            }
        }
        for (i, b) in self.poly_part.iter().enumerate().take(order + 1) {
            coeffs[i] += b;
        }
        PowerSeries::from_coeffs(coeffs, order)
    }

    /// Labeled counts `n!·[zⁿ]` up to `order`; the closed forms used here
    /// all count labeled graphs, so these are integers.
    pub fn labeled_counts(&self, order: usize) -> LabeledCounts {
        LabeledCounts::from_series(&self.series(order)).expect("closed forms count labeled graphs")
    }

    /// Value at a real point.
    pub fn eval<F: Float>(&self, x: F) -> F {
        horner(&self.exp_part, x) * (x * x).exp() + horner(&self.poly_part, x)
    }

    /// Derivative, again of the same shape: `(A' + 2zA)·exp(z²) + B'`.
    pub fn derivative(&self) -> Self {
        let deriv = |p: &[BigRational]| -> Vec<BigRational> {
            p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect()
        };
        let mut exp_part = deriv(&self.exp_part);
        for (i, a) in self.exp_part.iter().enumerate() {
            if exp_part.len() < i + 2 {
                exp_part.resize(i + 2, BigRational::zero());
            }
            exp_part[i + 1] += a * BigRational::from_integer(2.into());
        }
        Self { exp_part, poly_part: deriv(&self.poly_part) }
    }

    /// `self + c·z^k`.
    pub fn plus_monomial(mut self, c: BigRational, k: usize) -> Self {
        if self.poly_part.len() <= k {
            self.poly_part.resize(k + 1, BigRational::zero());
        }
        self.poly_part[k] += c;
        self
    }
}

/// Closed form of `P•` for a class.
pub fn pbullet_closed_form(class: GraphClass) -> ExpQuadForm {
    match class {
        GraphClass::Tidy | GraphClass::Lite => ExpQuadForm::new(
            &[(2, 1), (0, 1), (0, 1), (4, 1)],
            &[(-2, 1), (0, 1), (-2, 1), (-4, 1), (-1, 2), (-2, 1)],
        ),
        GraphClass::Extendible => ExpQuadForm::new(&[], &[(0, 1), (0, 1), (0, 1), (0, 1), (1, 2), (2, 1)]),
        GraphClass::Sparse => ExpQuadForm::new(&[(2, 1)], &[(-2, 1), (0, 1), (-2, 1), (0, 1), (-1, 2)]),
        GraphClass::Reducible => ExpQuadForm::new(&[], &[(0, 1), (0, 1), (0, 1), (0, 1), (1, 2)]),
        GraphClass::Cograph => ExpQuadForm::zero(),
    }
}

/// Closed form of `P` for a class. For the tidy and extendible classes the
/// extra term is written, as published, `z⁵ + z⁵/10`.
pub fn p_closed_form(class: GraphClass) -> ExpQuadForm {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let base = pbullet_closed_form(class);
    match class {
        GraphClass::Tidy | GraphClass::Extendible => base.plus_monomial(q(1, 1), 5).plus_monomial(q(1, 10), 5),
        GraphClass::Lite => base.plus_monomial(q(1, 1), 5),
        GraphClass::Sparse | GraphClass::Reducible | GraphClass::Cograph => base,
    }
}

/// Coefficients of `P` up to `order`, from the closed form.
pub fn series_p(class: GraphClass, order: usize) -> PowerSeries<BigRational> {
    p_closed_form(class).series(order)
}

/// Coefficients of `P•` up to `order`, from the closed form.
pub fn series_pbullet(class: GraphClass, order: usize) -> PowerSeries<BigRational> {
    pbullet_closed_form(class).series(order)
}

/// Coefficients of `P` (or `P•`) generated independently from the orbit
/// data: each orbit of size `m` contributes `z^m / |Aut|`.
pub fn orbit_series(class: GraphClass, order: usize, blossomed: bool) -> PowerSeries<BigRational> {
    let spec = class.spec();
    let coeffs = (0..=order)
        .map(|m| {
            spec.orbits(m, blossomed)
                .into_iter()
                .map(|o| BigRational::new(BigInt::one(), BigInt::from(o.automorphisms())))
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect();
    PowerSeries::from_coeffs(coeffs, order)
}

/// Solves the equation of `T_not⊕` up to `order`, returning the labeled
/// counts of `T_not⊕` and of `exp(T_not⊕)`.
///
/// Writing `u`, `e`, `p`, `q` for the labeled counts of `T_not⊕`,
/// `exp(T_not⊕)`, `P` and `(exp(T_not⊕) − 1)·P•`, and
/// `r_n = Σ_{k<n} C(n−1, k−1)·u_k·e_{n−k}`, the equation reads
/// `u_n = [n = 1] + p_n + q_n + r_n` and then `e_n = u_n + r_n`. Since `P•`
/// starts at degree 4, `q_n` only involves `e_k` with `k ≤ n − 4`.
fn solve_counts(p: &LabeledCounts, pb: &LabeledCounts, order: usize) -> (LabeledCounts, LabeledCounts) {
    let mut u = vec![BigInt::zero(); order + 1];
    let mut e = vec![BigInt::zero(); order + 1];
    e[0] = BigInt::one();
    let pbc = pb.counts();
    for n in 1..=order {
        // r_n over k = 1..n−1 with C(n−1, k−1).
        let mut r = BigInt::zero();
        let mut binom = BigInt::one();
        for k in 1..n {
            if k > 1 {
                binom = binom * (n - k + 1) / (k - 1);
            }
            if !u[k].is_zero() {
                r += &binom * &u[k] * &e[n - k];
            }
        }
        // q_n = Σ_{k≥1} C(n, k)·e_k·pb_{n−k}.
        let mut q = BigInt::zero();
        let mut binom = BigInt::one();
        for k in 1..=n {
            binom = binom * (n - k + 1) / k;
            if !pbc[n - k].is_zero() {
                q += &binom * &e[k] * &pbc[n - k];
            }
        }
        let mut un = p.count(n) + q + &r;
        if n == 1 {
            un += 1;
        }
        e[n] = &un + &r;
        u[n] = un;
    }
    (LabeledCounts::from_counts(u, order), LabeledCounts::from_counts(e, order))
}

/// `T_not⊕` up to `order` as an exact series.
pub fn solve_t_notplus(class: GraphClass, order: usize) -> PowerSeries<BigRational> {
    let p = p_closed_form(class).labeled_counts(order);
    let pb = pbullet_closed_form(class).labeled_counts(order);
    solve_counts(&p, &pb, order).0.to_series()
}

/// Names of the series held by a [`ClassSeriesBundle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    P,
    PBullet,
    /// Trees whose root is not `⊕`.
    TNotPlus,
    /// All trees.
    T,
    /// One `⊕`-replaceable blossom.
    TPlus,
    /// Root not `⊕`, one `⊕`-replaceable blossom.
    TNotPlusPlus,
    /// Root not `⊕`, one `⊖`-replaceable blossom.
    TNotPlusMinus,
    /// One blossom.
    TBlo,
    /// Root not `⊕`, one blossom.
    TNotPlusBlo,
}

impl SeriesKind {
    /// All nine series.
    pub const ALL: [SeriesKind; 9] = [
        SeriesKind::P,
        SeriesKind::PBullet,
        SeriesKind::TNotPlus,
        SeriesKind::T,
        SeriesKind::TPlus,
        SeriesKind::TNotPlusPlus,
        SeriesKind::TNotPlusMinus,
        SeriesKind::TBlo,
        SeriesKind::TNotPlusBlo,
    ];

    /// Short name.
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::P => "P",
            SeriesKind::PBullet => "P•",
            SeriesKind::TNotPlus => "T_not⊕",
            SeriesKind::T => "T",
            SeriesKind::TPlus => "T^⊕",
            SeriesKind::TNotPlusPlus => "T_not⊕^⊕",
            SeriesKind::TNotPlusMinus => "T_not⊕^⊖",
            SeriesKind::TBlo => "T^blo",
            SeriesKind::TNotPlusBlo => "T_not⊕^blo",
        }
    }
}

/// The nine series of a class at a common order, as labeled counts.
///
/// `P`, `P•`, `T_not⊕` and `T` are computed on construction; the blossomed
/// series are computed on first use and cached. The bundle is immutable
/// and can be shared between threads.
#[derive(Debug)]
pub struct ClassSeriesBundle {
    class: GraphClass,
    order: usize,
    p: LabeledCounts,
    pb: LabeledCounts,
    t_notplus: LabeledCounts,
    exp_t_notplus: LabeledCounts,
    t: LabeledCounts,
    t_plus: OnceLock<LabeledCounts>,
    t_notplus_plus: OnceLock<LabeledCounts>,
    t_notplus_minus: OnceLock<LabeledCounts>,
    t_blo: OnceLock<LabeledCounts>,
}

impl ClassSeriesBundle {
    /// Solves the class equations up to `order`.
    pub fn new(class: GraphClass, order: usize) -> Self {
        let p = p_closed_form(class).labeled_counts(order);
        let pb = pbullet_closed_form(class).labeled_counts(order);
        let (t_notplus, exp_t_notplus) = solve_counts(&p, &pb, order);
        let t = exp_t_notplus.sub(&LabeledCounts::constant(1, order));
        Self {
            class,
            order,
            p,
            pb,
            t_notplus,
            exp_t_notplus,
            t,
            t_plus: OnceLock::new(),
            t_notplus_plus: OnceLock::new(),
            t_notplus_minus: OnceLock::new(),
            t_blo: OnceLock::new(),
        }
    }

    /// The class.
    pub fn class(&self) -> GraphClass {
        self.class
    }

    /// Common truncation order.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `P`.
    pub fn p(&self) -> &LabeledCounts {
        &self.p
    }

    /// `P•`.
    pub fn p_bullet(&self) -> &LabeledCounts {
        &self.pb
    }

    /// `T_not⊕` (equal to `T_not⊖` by the flip involution).
    pub fn t_notplus(&self) -> &LabeledCounts {
        &self.t_notplus
    }

    /// `exp(T_not⊕)`, that is `1 + T`.
    pub fn exp_t_notplus(&self) -> &LabeledCounts {
        &self.exp_t_notplus
    }

    /// `T`.
    pub fn t(&self) -> &LabeledCounts {
        &self.t
    }

    /// `T^⊕ = 1 / (2 − exp(T_not⊕) − P•·exp(T_not⊕))`.
    pub fn t_plus(&self) -> &LabeledCounts {
        self.t_plus.get_or_init(|| {
            let e = &self.exp_t_notplus;
            let one_plus_pb = self.pb.add(&LabeledCounts::constant(1, self.order));
            let d = LabeledCounts::constant(2, self.order).sub(&e.mul(&one_plus_pb));
            d.inverse().expect("constant term 1")
        })
    }

    /// `T_not⊕^⊕ = (T^⊕ − 1) / exp(T_not⊕)`.
    pub fn t_notplus_plus(&self) -> &LabeledCounts {
        self.t_notplus_plus.get_or_init(|| {
            let num = self.t_plus().sub(&LabeledCounts::constant(1, self.order));
            num.div(&self.exp_t_notplus).expect("constant term 1")
        })
    }

    /// `T_not⊕^⊖ = T^⊕ / exp(T_not⊕)`.
    pub fn t_notplus_minus(&self) -> &LabeledCounts {
        self.t_notplus_minus
            .get_or_init(|| self.t_plus().div(&self.exp_t_notplus).expect("constant term 1"))
    }

    /// `T^blo = exp(T_not⊕)·T^⊕`.
    pub fn t_blo(&self) -> &LabeledCounts {
        self.t_blo.get_or_init(|| self.exp_t_notplus.mul(self.t_plus()))
    }

    /// `T_not⊕^blo = T^⊕`.
    pub fn t_notplus_blo(&self) -> &LabeledCounts {
        self.t_plus()
    }

    /// Any of the nine series by name.
    pub fn get(&self, kind: SeriesKind) -> &LabeledCounts {
        match kind {
            SeriesKind::P => self.p(),
            SeriesKind::PBullet => self.p_bullet(),
            SeriesKind::TNotPlus => self.t_notplus(),
            SeriesKind::T => self.t(),
            SeriesKind::TPlus => self.t_plus(),
            SeriesKind::TNotPlusPlus => self.t_notplus_plus(),
            SeriesKind::TNotPlusMinus => self.t_notplus_minus(),
            SeriesKind::TBlo => self.t_blo(),
            SeriesKind::TNotPlusBlo => self.t_notplus_blo(),
        }
    }

    /// Any of the nine series with ordinary rational coefficients.
    pub fn series(&self, kind: SeriesKind) -> PowerSeries<BigRational> {
        self.get(kind).to_series()
    }

    /// Number of labeled graphs of size `n` in the class, `n ≤ order`.
    pub fn graph_count(&self, n: usize) -> Result<BigUint> {
        if n > self.order {
            return Err(Error::Domain(format!("size {n} beyond the bundle order {}", self.order)));
        }
        Ok(self.t.count(n).to_biguint().expect("counts are non-negative"))
    }
}

/// Number of labeled graphs of size `n` in the class, `n!·[zⁿ]T`.
pub fn graph_count(class: GraphClass, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("graph counts start at size 1".into()));
    }
    ClassSeriesBundle::new(class, n).graph_count(n)
}

/// Counts of all sizes `1..=n_max`.
pub fn graph_counts(class: GraphClass, n_max: usize) -> Vec<BigUint> {
    let bundle = ClassSeriesBundle::new(class, n_max);
    (1..=n_max).map(|n| bundle.graph_count(n).expect("within order")).collect()
}

/// Number of labeled graphs of size `n` passing the definitional test,
/// by exhaustive enumeration of all `2^(n(n−1)/2)` graphs.
pub fn brute_force_class_count(class: GraphClass, n: usize) -> Result<u64> {
    if n > BRUTE_FORCE_BOUND {
        return Err(Error::TooLarge { what: "exhaustive class census", size: n, bound: BRUTE_FORCE_BOUND });
    }
    let mut count = 0;
    for g in all_labeled_graphs(n) {
        if is_member_definitional(&g, class)? {
            count += 1;
        }
    }
    Ok(count)
}
