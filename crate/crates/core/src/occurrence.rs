//! Occurrence series of a pattern in the decoration families of a class.
//!
//! For a blossom-free pattern `G` with `p` vertices,
//! `Occ_{G,P}(z) = Σ_{H∈P} Occ_G(H)·z^{N(H)−p} / N(H)!`, similarly over `P•`,
//! and the anchored variant `Occ_{G,a,P•}` counts only occurrences mapping
//! mark `a` to the blossom, with exponent `N(H) − p + 1`. Grouping the
//! labelings of each orbit gives the weight `Occ_G(rep)/|Aut(rep)|` per
//! orbit, which is how the series are generated.
//!
//! Inside one spider family (fixed thinness, twin side and twin adjacency)
//! the number of occurrences of a fixed pattern is a polynomial of degree
//! at most `p` in `k = |K|`: an occurrence is determined by a combinatorial
//! type (which marks land in `K`, `S`, `R`, on the twin, and which share a
//! spider leg) and each type is realised by a falling factorial of `k`
//! choices. Large hosts are therefore handled by exact interpolation,
//! verified on extra sample points, instead of direct enumeration.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::classes::{GraphClass, Orbit};
use crate::egf::ExpQuadForm;
use crate::error::{Error, Result};
use crate::graph::{count_occurrences, LabeledGraph, OccurrenceMode};
use crate::series::{factorial, LabeledCounts, PowerSeries};

/// Which family and which occurrences an occurrence series counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OccMode {
    /// Occurrences in decorations of `P`.
    P,
    /// Occurrences avoiding the blossom in decorations of `P•`.
    PBullet,
    /// Occurrences in `P•` sending mark `a` (one-based) to the blossom.
    PBulletAt(usize),
}

impl OccMode {
    fn blossomed(self) -> bool {
        !matches!(self, OccMode::P)
    }

    fn occurrence_mode(self) -> OccurrenceMode {
        match self {
            OccMode::PBulletAt(a) => OccurrenceMode::FixedMark(a),
            _ => OccurrenceMode::IgnoreBlossom,
        }
    }

    /// Number of labeled host vertices used by an occurrence of a pattern
    /// with `p` vertices.
    fn host_vertices_used(self, p: usize) -> usize {
        match self {
            OccMode::PBulletAt(_) => p - 1,
            _ => p,
        }
    }
}

/// The labeled path `1 − 2 − 3 − 4`.
pub fn p4_tilde() -> LabeledGraph {
    LabeledGraph::path(4)
}

/// The labeled bull: triangle `1 2 5` with pendant `3` on `1` and pendant
/// `4` on `2`. It is a thin spider with a two-vertex clique and one
/// vertex in its rest.
pub fn bull() -> LabeledGraph {
    LabeledGraph::from_edges(5, &[(0, 1), (0, 4), (1, 4), (0, 2), (1, 3)]).expect("valid edges")
}

/// Hard-coded closed form of the occurrence series of `P̃4`, when the mode
/// has one. The anchored series vanish identically: no decoration of any
/// of the six classes has a `P4` through its blossom.
pub fn p4_tilde_closed_form(class: GraphClass, mode: OccMode) -> ExpQuadForm {
    let bullet = match class {
        GraphClass::Tidy | GraphClass::Lite => ExpQuadForm::new(&[(2, 1), (16, 1), (0, 1), (4, 1)], &[(-1, 1), (-8, 1)]),
        GraphClass::Extendible => ExpQuadForm::new(&[], &[(1, 1), (8, 1)]),
        GraphClass::Sparse => ExpQuadForm::new(&[(2, 1)], &[(-1, 1)]),
        GraphClass::Reducible => ExpQuadForm::new(&[], &[(1, 1)]),
        GraphClass::Cograph => ExpQuadForm::zero(),
    };
    let five = BigRational::from_integer(5.into());
    match mode {
        OccMode::PBulletAt(_) => ExpQuadForm::zero(),
        OccMode::PBullet => bullet,
        OccMode::P => match class {
            GraphClass::Tidy | GraphClass::Extendible => bullet.plus_monomial(five, 1),
            GraphClass::Lite => bullet.plus_monomial(BigRational::from_integer(4.into()), 1),
            _ => bullet,
        },
    }
}

/// Family of an orbit with `k` forgotten, used to group orbits whose
/// occurrence counts share one polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Family {
    Sporadic(Orbit),
    Spider { fat: bool },
    Pseudo { fat: bool, origin: crate::classes::Side, twin_edge: bool },
}

impl Family {
    fn of(orbit: Orbit) -> Self {
        match orbit {
            Orbit::Spider { fat, .. } => Family::Spider { fat },
            Orbit::PseudoSpider { fat, origin, twin_edge, .. } => Family::Pseudo { fat, origin, twin_edge },
            other => Family::Sporadic(other),
        }
    }

    fn member(self, k: usize) -> Orbit {
        match self {
            Family::Sporadic(o) => o,
            Family::Spider { fat } => Orbit::Spider { k, fat },
            Family::Pseudo { fat, origin, twin_edge } => Orbit::PseudoSpider { k, fat, origin, twin_edge },
        }
    }
}

fn spider_k(orbit: Orbit) -> Option<usize> {
    match orbit {
        Orbit::Spider { k, .. } | Orbit::PseudoSpider { k, .. } => Some(k),
        _ => None,
    }
}

/// Generator of occurrence counts of one pattern in the orbits of a class.
///
/// Counts are obtained by enumeration for spiders with `|K|` up to a
/// limit, and by interpolation in `|K|` beyond it.
#[derive(Debug)]
pub struct OccurrenceCounter {
    pattern: LabeledGraph,
    class: GraphClass,
    mode: OccMode,
    direct_k_limit: usize,
    direct: HashMap<Orbit, BigInt>,
    polynomials: HashMap<Family, Vec<(BigInt, BigInt)>>,
}

impl OccurrenceCounter {
    /// Counter for a blossom-free pattern.
    pub fn new(pattern: &LabeledGraph, class: GraphClass, mode: OccMode) -> Result<Self> {
        if pattern.has_blossom() {
            return Err(Error::InvalidGraph("patterns carry no blossom".into()));
        }
        if pattern.order() == 0 {
            return Err(Error::InvalidGraph("patterns have at least one vertex".into()));
        }
        if let OccMode::PBulletAt(a) = mode {
            if a == 0 || a > pattern.order() {
                return Err(Error::Domain(format!("anchor {a} is not a mark of the pattern")));
            }
        }
        Ok(Self {
            direct_k_limit: pattern.order() + 5,
            pattern: pattern.clone(),
            class,
            mode,
            direct: HashMap::new(),
            polynomials: HashMap::new(),
        })
    }

    fn count_direct(&mut self, orbit: Orbit) -> Result<BigInt> {
        if let Some(c) = self.direct.get(&orbit) {
            return Ok(c.clone());
        }
        let host = orbit.representative(self.mode.blossomed());
        let c = BigInt::from(count_occurrences(&self.pattern, &host, self.mode.occurrence_mode())?);
        self.direct.insert(orbit, c.clone());
        Ok(c)
    }

    /// Sample points `(k, count)` for the polynomial of a family, checked
    /// for consistency on the last two points.
    fn polynomial(&mut self, family: Family) -> Result<Vec<(BigInt, BigInt)>> {
        if let Some(p) = self.polynomials.get(&family) {
            return Ok(p.clone());
        }
        let degree = self.pattern.order();
        let ks: Vec<usize> = (3..3 + degree + 3).collect();
        let mut points = Vec::with_capacity(ks.len());
        for &k in &ks {
            points.push((BigInt::from(k), self.count_direct(family.member(k))?));
        }
        let (fit, check) = points.split_at(degree + 1);
        for (k, value) in check {
            if interpolate(fit, k) != BigRational::from_integer(value.clone()) {
                return Err(Error::Numerical(format!(
                    "occurrence counts of {family:?} are not polynomial of degree {degree}"
                )));
            }
        }
        self.polynomials.insert(family, fit.to_vec());
        Ok(fit.to_vec())
    }

    /// `Occ_G(rep)` for one orbit.
    pub fn occurrences(&mut self, orbit: Orbit) -> Result<BigInt> {
        match spider_k(orbit) {
            Some(k) if k > self.direct_k_limit => {
                let poly = self.polynomial(Family::of(orbit))?;
                Ok(interpolate(&poly, &BigInt::from(k)).to_integer())
            }
            _ => self.count_direct(orbit),
        }
    }

    /// `Σ Occ_G(rep)/|Aut(rep)|` over the orbits with `m` labeled vertices.
    pub fn weight(&mut self, m: usize) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for orbit in self.class.spec().orbits(m, self.mode.blossomed()) {
            let occ = self.occurrences(orbit)?;
            if !occ.is_zero() {
                total += BigRational::new(occ, BigInt::from(orbit.automorphisms()));
            }
        }
        Ok(total)
    }

    /// The occurrence series up to `order`.
    pub fn series(&mut self, order: usize) -> Result<PowerSeries<BigRational>> {
        let used = self.mode.host_vertices_used(self.pattern.order());
        let coeffs = (0..=order).map(|j| self.weight(j + used)).collect::<Result<Vec<_>>>()?;
        Ok(PowerSeries::from_coeffs(coeffs, order))
    }

    /// Total occurrences over all labeled decorations of each size `m`,
    /// `Σ_{N(H)=m} Occ_G(H) = m!·weight(m)`, for `m ≤ order`.
    pub fn host_counts(&mut self, order: usize) -> Result<LabeledCounts> {
        let counts = (0..=order)
            .map(|m| {
                let w = self.weight(m)?;
                Ok((w * BigRational::from_integer(BigInt::from(factorial(m)))).to_integer())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LabeledCounts::from_counts(counts, order))
    }
}

/// Lagrange interpolation through `points`, evaluated at `x`.
fn interpolate(points: &[(BigInt, BigInt)], x: &BigInt) -> BigRational {
    let mut total = BigRational::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = BigRational::from_integer(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                term *= BigRational::new(x - xj, xi - xj);
            }
        }
        total += term;
    }
    total
}

/// Occurrence series up to `order` by the orbit sum.
pub fn occ_series_generic(
    pattern: &LabeledGraph,
    class: GraphClass,
    mode: OccMode,
    order: usize,
) -> Result<PowerSeries<BigRational>> {
    OccurrenceCounter::new(pattern, class, mode)?.series(order)
}

/// Occurrence series up to `order`, from the closed form for `P̃4` and by
/// the orbit sum otherwise.
pub fn occ_series(
    pattern: &LabeledGraph,
    class: GraphClass,
    mode: OccMode,
    order: usize,
) -> Result<PowerSeries<BigRational>> {
    if *pattern == p4_tilde() {
        return Ok(p4_tilde_closed_form(class, mode).series(order));
    }
    occ_series_generic(pattern, class, mode, order)
}

/// Total occurrences of `pattern` over all labeled decorations of each
/// size up to `order`, as labeled counts indexed by the decoration size.
pub fn occ_host_counts(pattern: &LabeledGraph, class: GraphClass, mode: OccMode, order: usize) -> Result<LabeledCounts> {
    if *pattern == p4_tilde() {
        let used = mode.host_vertices_used(4);
        let series = p4_tilde_closed_form(class, mode).series(order);
        let counts = (0..=order)
            .map(|m| {
                if m < used {
                    BigInt::zero()
                } else {
                    (series.coeff(m - used) * BigRational::from_integer(BigInt::from(factorial(m)))).to_integer()
                }
            })
            .collect();
        return Ok(LabeledCounts::from_counts(counts, order));
    }
    OccurrenceCounter::new(pattern, class, mode)?.host_counts(order)
}

/// Whether some coefficient of the series is non-zero.
pub fn is_nonzero(series: &PowerSeries<BigRational>) -> bool {
    series.coeffs().iter().any(|c| !c.is_zero())
}
