//! Singularity analysis of the class series: the dominant singularity `R`,
//! the square-root constant `κ`, the growth constant `C` with
//! `n!·[zⁿ]T ~ C·n!/(Rⁿ·n^{3/2})`, and the linear or `n^{3/2}` growth of the
//! expected number of occurrences of a prime pattern.
//!
//! The numerics are generic over [`Float`]; the crate aliases use `f64`,
//! whose rounding error (about 1e−16) is far below the tolerances of
//! interest since every function involved is entire.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive};
use serde::Serialize;

use crate::classes::GraphClass;
use crate::decomposition::is_prime;
use crate::egf::{p_closed_form, pbullet_closed_form, ClassSeriesBundle, ExpQuadForm};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::series::{ln_biguint, PowerSeries};

pub use crate::occurrence::{occ_series, occ_series_generic, p4_tilde, p4_tilde_closed_form, OccMode};

/// Upper end of the bracket searched for `R`.
pub const R_BRACKET: f64 = 0.5;

/// Largest series order used when evaluating an occurrence series at `R`.
const MAX_EVALUATION_ORDER: usize = 200;

fn cast<F: Float>(x: f64) -> F {
    F::from(x).expect("representable constant")
}

/// Value of `r + P(r) + 2ln(1 + P•(r)) − P•(r) − (2ln2 − 1)`, whose root in
/// `(0, R_BRACKET]` is the dominant singularity.
pub fn defining_function<F: Float>(class: GraphClass, r: F) -> F {
    let p = p_closed_form(class).eval(r);
    let pb = pbullet_closed_form(class).eval(r);
    let two = cast::<F>(2.0);
    r + p + two * (F::one() + pb).ln() - pb - (two * two.ln() - F::one())
}

fn defining_derivative<F: Float>(class: GraphClass, r: F) -> F {
    let dp = p_closed_form(class).derivative().eval(r);
    let pb = pbullet_closed_form(class).eval(r);
    let dpb = pbullet_closed_form(class).derivative().eval(r);
    F::one() + dp + (F::one() - pb) / (F::one() + pb) * dpb
}

/// Dominant singularity `R` of `T`, to absolute accuracy `precision`.
///
/// Bisection on `(0, R_BRACKET]` narrows the root to a bracket where Newton
/// steps on the closed forms converge quadratically; the result must
/// satisfy `P•(R) < 1`.
pub fn find_r<F: Float>(class: GraphClass, precision: F) -> Result<F> {
    let g = |r: F| defining_function(class, r);
    let mut lo = F::zero();
    let mut hi = cast::<F>(R_BRACKET);
    if g(lo) >= F::zero() || g(hi) <= F::zero() {
        return Err(Error::Numerical(format!("no sign change of the defining function for {class}")));
    }
    let newton_start = cast::<F>(1e-3).max(precision);
    while hi - lo > newton_start {
        let mid = (lo + hi) / cast(2.0);
        if g(mid) < F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = (lo + hi) / cast(2.0);
    for _ in 0..100 {
        let step = g(r) / defining_derivative(class, r);
        let next = (r - step).max(lo).min(hi);
        let done = (next - r).abs() <= precision * cast(1e-3) || next == r;
        r = next;
        if done {
            break;
        }
    }
    if pbullet_closed_form(class).eval(r) >= F::one() {
        return Err(Error::Numerical(format!("P•(R) ≥ 1 for {class}")));
    }
    Ok(r)
}

/// `κ = sqrt(R·(1 + P'(R) + (1 − P•(R))·P•'(R)/(1 + P•(R))))`.
pub fn kappa<F: Float>(class: GraphClass, r: F) -> F {
    (r * defining_derivative(class, r)).sqrt()
}

/// `C = κ/(√π·(1 + P•(R)))`.
pub fn growth_constant_c<F: Float + FromPrimitive>(class: GraphClass, r: F) -> F {
    let pi = F::from_f64(std::f64::consts::PI).expect("representable");
    kappa(class, r) / (pi.sqrt() * (F::one() + pbullet_closed_form(class).eval(r)))
}

/// Singularity data of a class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityReport {
    pub class: GraphClass,
    /// Dominant singularity.
    pub r: f64,
    /// `1/R`, the exponential growth rate.
    pub r_inv: f64,
    pub kappa: f64,
    /// Growth constant in `a_n ~ C·n!/(Rⁿ·n^{3/2})`.
    pub c: f64,
    /// `P•(R)`, below 1.
    pub p_bullet_at_r: f64,
    /// Absolute residual of the defining equation at `R`.
    pub residual: f64,
    /// Target absolute accuracy of `R`.
    pub precision: f64,
}

/// Computes the singularity data of a class.
pub fn singularity_report(class: GraphClass, precision: f64) -> Result<SingularityReport> {
    let r = find_r(class, precision)?;
    Ok(SingularityReport {
        class,
        r,
        r_inv: 1.0 / r,
        kappa: kappa(class, r),
        c: growth_constant_c(class, r),
        p_bullet_at_r: pbullet_closed_form(class).eval(r),
        residual: defining_function(class, r).abs(),
        precision,
    })
}

/// Growth of the expected number of occurrences of a prime pattern.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum OccurrenceExponent {
    /// `E[Occ] ~ K·n`.
    Linear,
    /// `E[Occ] ~ K·n^{3/2}`, when condition (A) holds.
    ThreeHalves,
}

impl OccurrenceExponent {
    /// The exponent as a number.
    pub fn value(self) -> f64 {
        match self {
            OccurrenceExponent::Linear => 1.0,
            OccurrenceExponent::ThreeHalves => 1.5,
        }
    }
}

/// Result of [`k_prime`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeOccurrenceReport {
    pub exponent: OccurrenceExponent,
    /// The constant `K_H`.
    pub k: f64,
    /// Whether some anchored occurrence series is positive at `R`.
    pub condition_a: bool,
}

/// Evaluates a series with non-negative-or-small coefficients at `x`.
fn evaluate(series: &PowerSeries<BigRational>, x: f64) -> f64 {
    series.to_f64().evaluate(&x)
}

/// Value of an occurrence series at `x`: the closed form for `P̃4`,
/// otherwise the orbit sum truncated once the remaining terms are
/// negligible.
///
/// A decoration with `m` labeled vertices has at least `⌊(m−1)/2⌋ − 1`
/// factorial automorphisms and at most `m^p` occurrences of a pattern with
/// `p` vertices, and each size holds at most ten orbits, so the term of
/// degree `j` is bounded by `10·m^p·x^j/(⌊(m−1)/2⌋−1)!` with `m = j + p`.
pub fn occ_value_at(pattern: &LabeledGraph, class: GraphClass, mode: OccMode, x: f64, precision: f64) -> Result<f64> {
    if *pattern == p4_tilde() {
        return Ok(p4_tilde_closed_form(class, mode).eval(x));
    }
    let p = pattern.order();
    let mut order = 8;
    while order < MAX_EVALUATION_ORDER {
        let m = (order + 1 + p) as f64;
        let half = ((order + p) / 2).saturating_sub(1);
        let ln_bound =
            10f64.ln() + p as f64 * m.ln() + (order + 1) as f64 * x.ln() - ln_biguint(&crate::series::factorial(half));
        // The bound decreases super-geometrically, so twice its value covers
        // the whole tail once the ratio has dropped below one half.
        if ln_bound < (precision / 20.0).ln() {
            break;
        }
        order += 4;
    }
    Ok(evaluate(&occ_series(pattern, class, mode, order)?, x))
}

/// Growth exponent and constant `K_H` of the expected number of
/// occurrences of a prime pattern `H` with `ℓ` vertices:
///
/// * if some `Occ_{H,a,P•}(R) > 0` (condition (A)), the exponent is 3/2 and
///   `K_H = R^{ℓ−1}·√π·Σ_a Occ_{H,a,P•}(R)/(κ·(1 + P•(R)))`;
/// * otherwise the exponent is 1 and
///   `K_H = ((1 − P•(R))/(1 + P•(R))·Occ_{H,P•}(R) + Occ_{H,P}(R))·R^ℓ/κ²`.
pub fn k_prime(pattern: &LabeledGraph, class: GraphClass, precision: f64) -> Result<PrimeOccurrenceReport> {
    if pattern.has_blossom() || !is_prime(pattern) {
        return Err(Error::Domain("the pattern is not a prime graph".into()));
    }
    let l = pattern.order();
    let r = find_r(class, precision.min(1e-13))?;
    let kap = kappa(class, r);
    let pb = pbullet_closed_form(class).eval(r);
    // Occurrence series have non-negative coefficients, so positivity at R
    // is decided exactly on the coefficients.
    let mut anchored = 0.0;
    let mut condition_a = false;
    for a in 1..=l {
        let series = if *pattern == p4_tilde() {
            p4_tilde_closed_form(class, OccMode::PBulletAt(a)).series(40)
        } else {
            occ_series(pattern, class, OccMode::PBulletAt(a), 40)?
        };
        if crate::occurrence::is_nonzero(&series) {
            condition_a = true;
            anchored += occ_value_at(pattern, class, OccMode::PBulletAt(a), r, precision)?;
        }
    }
    if condition_a {
        let k = r.powi(l as i32 - 1) * std::f64::consts::PI.sqrt() * anchored / (kap * (1.0 + pb));
        return Ok(PrimeOccurrenceReport { exponent: OccurrenceExponent::ThreeHalves, k, condition_a });
    }
    let occ_pb = occ_value_at(pattern, class, OccMode::PBullet, r, precision)?;
    let occ_p = occ_value_at(pattern, class, OccMode::P, r, precision)?;
    let k = ((1.0 - pb) / (1.0 + pb) * occ_pb + occ_p) * r.powi(l as i32) / (kap * kap);
    Ok(PrimeOccurrenceReport { exponent: OccurrenceExponent::Linear, k, condition_a })
}

/// Normalised count `a_n·Rⁿ·n^{3/2}/n!`, which tends to `C`.
pub fn normalized_count(count: &BigUint, n: usize, r: f64) -> f64 {
    if count == &BigUint::from(0u32) {
        return 0.0;
    }
    let ln = ln_biguint(count) - ln_biguint(&crate::series::factorial(n)) + n as f64 * r.ln() + 1.5 * (n as f64).ln();
    ln.exp()
}

/// `(n, a_n·Rⁿ·n^{3/2}/n!)` for `n = 1..=n_max`.
pub fn growth_trend(class: GraphClass, n_max: usize) -> Result<Vec<(usize, f64)>> {
    let r = find_r(class, 1e-14)?;
    let bundle = ClassSeriesBundle::new(class, n_max);
    (1..=n_max).map(|n| Ok((n, normalized_count(&bundle.graph_count(n)?, n, r)))).collect()
}

/// Closed form of `P` and of `P•`, for callers evaluating them directly.
pub fn closed_forms(class: GraphClass) -> (ExpQuadForm, ExpQuadForm) {
    (p_closed_form(class), pbullet_closed_form(class))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: [(GraphClass, f64, f64, f64); 6] = [
        (GraphClass::Tidy, 2.90405818, 0.34434572, 0.40883495),
        (GraphClass::Lite, 2.90146936, 0.34465296, 0.40833239),
        (GraphClass::Extendible, 2.88492066, 0.34662998, 0.40351731),
        (GraphClass::Sparse, 2.72743550, 0.36664478, 0.37405701),
        (GraphClass::Reducible, 2.71715531, 0.36803196, 0.37115484),
        (GraphClass::Cograph, 1.0 / 0.38629436, 0.38629436, 0.35065840),
    ];

    #[test]
    fn cograph_constants_in_closed_form() {
        let r = find_r(GraphClass::Cograph, 1e-14).unwrap();
        assert!((r - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-14);
        assert!((kappa(GraphClass::Cograph, r) - r.sqrt()).abs() < 1e-14);
        assert!((kappa(GraphClass::Cograph, r) - 0.62152583).abs() < 1e-7);
    }

    #[test]
    fn published_singularities() {
        for (class, r_inv, r, c) in TABLE {
            let rep = singularity_report(class, 1e-14).unwrap();
            assert!(rep.residual < 1e-12, "{class}");
            assert!(rep.p_bullet_at_r < 1.0);
            assert!((rep.r - r).abs() < 1e-7, "{class}: R = {}", rep.r);
            if class != GraphClass::Cograph {
                assert!((rep.r_inv - r_inv).abs() < 1e-7, "{class}: 1/R = {}", rep.r_inv);
            }
            assert!((rep.c - c).abs() < 1e-7, "{class}: C = {}", rep.c);
        }
    }

    #[test]
    fn single_precision_root() {
        let r: f32 = find_r(GraphClass::Tidy, 1e-6).unwrap();
        assert!((r - 0.34434572).abs() < 1e-5);
    }

    #[test]
    fn p4_tilde_constants() {
        let expected = [
            (GraphClass::Tidy, 0.29200322),
            (GraphClass::Lite, 0.28507010),
            (GraphClass::Extendible, 0.24959979),
            (GraphClass::Sparse, 0.10280703),
            (GraphClass::Reducible, 0.08249263),
            (GraphClass::Cograph, 0.0),
        ];
        for (class, k) in expected {
            let rep = k_prime(&p4_tilde(), class, 1e-12).unwrap();
            assert_eq!(rep.exponent, OccurrenceExponent::Linear);
            assert!((rep.k - k).abs() < 1e-7, "{class}: {}", rep.k);
        }
    }

    #[test]
    fn bull_grows_faster() {
        let bull = LabeledGraph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4)]).unwrap();
        for class in GraphClass::ALL {
            let rep = k_prime(&bull, class, 1e-10).unwrap();
            if class == GraphClass::Cograph {
                assert_eq!(rep.k, 0.0);
            } else {
                assert_eq!(rep.exponent, OccurrenceExponent::ThreeHalves, "{class}");
                assert!(rep.k > 0.0);
            }
        }
        assert!(k_prime(&LabeledGraph::complete(3), GraphClass::Tidy, 1e-10).is_err());
    }

    #[test]
    fn generic_evaluation_matches_the_closed_form() {
        let p4 = p4_tilde();
        let r = find_r(GraphClass::Tidy, 1e-14).unwrap();
        let series = occ_series_generic(&p4, GraphClass::Tidy, OccMode::PBullet, 40).unwrap();
        let generic = series.to_f64().evaluate(&r);
        let closed = p4_tilde_closed_form(GraphClass::Tidy, OccMode::PBullet).eval(r);
        assert!((generic - closed).abs() < 1e-13);
    }

    #[test]
    fn normalized_counts_approach_c() {
        let trend = growth_trend(GraphClass::Sparse, 120).unwrap();
        let c = singularity_report(GraphClass::Sparse, 1e-14).unwrap().c;
        let dev = |n: usize| (trend[n - 1].1 - c).abs() / c;
        assert!(dev(120) < dev(60));
        assert!(dev(120) < 0.05);
    }
}
