//! Acceptance run: every criterion at its stated tolerance, one PASS or
//! FAIL line each. The process exits with status 1 if any criterion fails.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use p4forge::asymptotics::{growth_trend, k_prime, singularity_report, OccurrenceExponent};
use p4forge::classes::{is_member, is_member_definitional, GraphClass};
use p4forge::egf::{brute_force_class_count, graph_count, ClassSeriesBundle};
use p4forge::occurrence::{bull, occ_series_generic, p4_tilde, p4_tilde_closed_form, OccMode};
use p4forge::pattern::{
    all_patterns, brute_force_pattern_census, enumerate_trees, pattern_counts, pattern_series_by_assignments,
    prime_pattern,
};
use p4forge::random::RandomSource;
use p4forge::sampler::{empirical_stats_with, SamplerTables};
use p4forge::tree::DecoratedTree;

type Outcome = Result<String, String>;

const SEED: u64 = 0x5eed_2024;

/// R⁻¹, R and C as printed in the table of numerical approximations.
const SINGULARITY_TABLE: [(GraphClass, f64, f64, f64); 6] = [
    (GraphClass::Tidy, 2.90405818, 0.34434572, 0.40883495),
    (GraphClass::Lite, 2.90146936, 0.34465296, 0.40833239),
    (GraphClass::Extendible, 2.88492066, 0.34662998, 0.40351731),
    (GraphClass::Sparse, 2.72743550, 0.36664478, 0.37405701),
    (GraphClass::Reducible, 2.71715531, 0.36803196, 0.37115484),
    (GraphClass::Cograph, 2.58869945, 0.38629436, 0.35065840),
];

/// K of the labeled P4 as printed in the table of numerical approximations.
const K_TABLE: [(GraphClass, f64); 6] = [
    (GraphClass::Tidy, 0.29200322),
    (GraphClass::Lite, 0.28507010),
    (GraphClass::Extendible, 0.24959979),
    (GraphClass::Sparse, 0.10280703),
    (GraphClass::Reducible, 0.08249263),
    (GraphClass::Cograph, 0.0),
];

/// A named criterion and the function that evaluates it.
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("exact counts equal the definitional census for n <= 6", census),
        ("R^-1, R and C match the table to 1e-7", singularity_table),
        ("K of the labeled P4 matches the table to 1e-7", k_table),
        ("orbit-sum occurrence series equal the closed forms to order 30", occurrence_closed_forms),
        ("pattern series equal marked-tree counts for 2 <= |tau| <= 3, n <= 7", pattern_oracle),
        ("normalized counts approach C (5% at 200, 2% at 500, decreasing from 50)", growth),
        ("induced subtree probabilities at n = 400", subtrees),
        ("sampler is uniform at n = 4, 5 (chi-square, 1e6 samples) and samples are members", sampler_uniformity),
        ("prime occurrence exponents and Monte-Carlo mean at n = 1000", prime_occurrences),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{}] {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn census() -> Outcome {
    for class in GraphClass::ALL {
        for n in 1..=6 {
            let exhaustive = brute_force_class_count(class, n).map_err(|e| e.to_string())?;
            let exact = graph_count(class, n).map_err(|e| e.to_string())?;
            check(exact == BigUint::from(exhaustive), || format!("{class} n={n}: {exact} vs census {exhaustive}"))?;
        }
    }
    Ok("36 of 36 (class, n) pairs equal".into())
}

fn singularity_table() -> Outcome {
    let mut worst: f64 = 0.0;
    for (class, r_inv, r, c) in SINGULARITY_TABLE {
        let report = singularity_report(class, 1e-14).map_err(|e| e.to_string())?;
        for (got, want, what) in [(report.r_inv, r_inv, "R^-1"), (report.r, r, "R"), (report.c, c, "C")] {
            let err = (got - want).abs();
            worst = worst.max(err);
            check(err < 1e-7, || format!("{class} {what} = {got:.10}, table {want:.8}"))?;
        }
    }
    let exact = 2.0 * std::f64::consts::LN_2 - 1.0;
    let cograph = singularity_report(GraphClass::Cograph, 1e-14).map_err(|e| e.to_string())?;
    check((cograph.r - exact).abs() < 1e-12, || format!("cograph R = {} vs 2 ln 2 - 1", cograph.r))?;
    Ok(format!("largest deviation {worst:.2e}"))
}

fn k_table() -> Outcome {
    let mut worst: f64 = 0.0;
    for (class, want) in K_TABLE {
        let got = k_prime(&p4_tilde(), class, 1e-14).map_err(|e| e.to_string())?.k;
        let err = (got - want).abs();
        worst = worst.max(err);
        check(err < 1e-7, || format!("{class} K = {got:.10}, table {want:.8}"))?;
    }
    Ok(format!("largest deviation {worst:.2e}"))
}

fn occurrence_closed_forms() -> Outcome {
    let modes = [OccMode::P, OccMode::PBullet, OccMode::PBulletAt(1), OccMode::PBulletAt(2), OccMode::PBulletAt(3), OccMode::PBulletAt(4)];
    let mut compared = 0;
    for class in GraphClass::ALL {
        for mode in modes {
            let generic = occ_series_generic(&p4_tilde(), class, mode, 30).map_err(|e| e.to_string())?;
            let closed = p4_tilde_closed_form(class, mode).series(30);
            for k in 0..=30 {
                check(generic.coeff(k) == closed.coeff(k), || {
                    format!("{class} {mode:?} z^{k}: orbit sum {} vs closed form {}", generic.coeff(k), closed.coeff(k))
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} rational coefficients equal"))
}

fn pattern_oracle() -> Outcome {
    let patterns: Vec<DecoratedTree> = (2..=3)
        .map(all_patterns)
        .collect::<p4forge::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .flatten()
        .collect();
    let results: Vec<Result<usize, String>> = GraphClass::ALL
        .par_iter()
        .map(|&class| {
            let bundle = ClassSeriesBundle::new(class, 7);
            let mut checked = 0;
            let mut censuses: HashMap<(usize, usize), HashMap<DecoratedTree, BigUint>> = HashMap::new();
            for n in 1..=7 {
                for p in 2..=3.min(n) {
                    let census = brute_force_pattern_census(class, n, p).map_err(|e| e.to_string())?;
                    censuses.insert((n, p), census);
                }
            }
            for tau in &patterns {
                let dp = pattern_counts(tau, &bundle).map_err(|e| e.to_string())?;
                let literal = pattern_series_by_assignments(tau, class, 7).map_err(|e| e.to_string())?;
                for n in 1..=7 {
                    let brute = censuses.get(&(n, tau.size())).and_then(|c| c.get(tau)).cloned().unwrap_or_default();
                    let brute = BigInt::from(brute);
                    let literal_count = literal.coeff(n) * BigRational::from_integer(factorial(n));
                    check(dp.count(n) == brute && literal_count == BigRational::from_integer(brute.clone()), || {
                        format!("{class} tau={tau} n={n}: dp {} literal {} brute {brute}", dp.count(n), literal_count)
                    })?;
                    checked += 1;
                }
            }
            Ok(checked)
        })
        .collect();
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{} patterns, {total} (class, tau, n) triples equal", patterns.len()))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn growth() -> Outcome {
    let mut summary = Vec::new();
    for (class, _, _, c) in SINGULARITY_TABLE {
        let trend = growth_trend(class, 500).map_err(|e| e.to_string())?;
        let dev = |n: usize| (trend[n - 1].1 - c).abs() / c;
        check(dev(200) < 0.05, || format!("{class}: deviation {:.4} at n = 200", dev(200)))?;
        check(dev(500) < 0.02, || format!("{class}: deviation {:.4} at n = 500", dev(500)))?;
        for n in 50..500 {
            check(dev(n + 1) < dev(n), || format!("{class}: deviation grows from n = {n} to {}", n + 1))?;
        }
        summary.push(format!("{class} {:.4}/{:.4}", dev(200), dev(500)));
    }
    Ok(format!("relative deviation at 200/500: {}", summary.join(", ")))
}

fn is_binary(tau: &DecoratedTree) -> bool {
    let mut binary = true;
    tau.for_each_node(&mut |node| binary &= node.children().len() == 2);
    binary
}

fn falling(n: usize, k: usize) -> BigInt {
    (n - k + 1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn subtrees() -> Outcome {
    const N: usize = 400;
    let pairs = all_patterns(2).map_err(|e| e.to_string())?;
    let triples: Vec<DecoratedTree> =
        all_patterns(3).map_err(|e| e.to_string())?.into_iter().filter(is_binary).collect();
    check(pairs.len() == 2 && triples.len() == 12, || "unexpected number of binary shapes".into())?;
    let results: Vec<Result<(f64, f64), String>> = GraphClass::ALL
        .par_iter()
        .map(|&class| {
            let bundle = ClassSeriesBundle::new(class, N);
            let probability = |tau: &DecoratedTree, n: usize| -> Result<BigRational, String> {
                let counts = pattern_counts(tau, &bundle).map_err(|e| e.to_string())?;
                Ok(BigRational::new(counts.count(n), falling(n, tau.size()) * bundle.t().count(n)))
            };
            let pair_counts: Vec<_> =
                pairs.iter().map(|t| pattern_counts(t, &bundle)).collect::<p4forge::Result<_>>().map_err(|e| e.to_string())?;
            for n in 2..=N {
                check(pair_counts[0].count(n) == pair_counts[1].count(n), || {
                    format!("{class}: the two shapes on two leaves differ at n = {n}")
                })?;
            }
            let mut worst2: f64 = 0.0;
            for tau in &pairs {
                let p = probability(tau, N)?.to_f64().unwrap_or(f64::NAN);
                worst2 = worst2.max((p - 0.5).abs() / 0.5);
                check((p - 0.5).abs() <= 0.05 * 0.5, || format!("{class} {tau}: {p:.5} not within 5% of 1/2"))?;
            }
            let mut worst3: f64 = 0.0;
            for tau in &triples {
                let p = probability(tau, N)?.to_f64().unwrap_or(f64::NAN);
                let target = 1.0 / 12.0;
                worst3 = worst3.max((p - target).abs() / target);
                check((p - target).abs() <= 0.10 * target, || format!("{class} {tau}: {p:.5} not within 10% of 1/12"))?;
            }
            Ok((worst2, worst3))
        })
        .collect();
    let (mut w2, mut w3): (f64, f64) = (0.0, 0.0);
    for r in results {
        let (a, b) = r?;
        w2 = w2.max(a);
        w3 = w3.max(b);
    }
    Ok(format!("ell = 2 shapes equal at every n <= 400; worst relative deviation {w2:.4} (ell = 2), {w3:.4} (ell = 3)"))
}

fn sampler_uniformity() -> Outcome {
    const SAMPLES: usize = 1_000_000;
    const CHUNK: usize = 10_000;
    let mut lines = Vec::new();
    for class in GraphClass::ALL {
        let tables = SamplerTables::from_bundle(&ClassSeriesBundle::new(class, 5));
        for n in [4, 5] {
            let population = enumerate_trees(class, n).map_err(|e| e.to_string())?;
            let index: HashMap<DecoratedTree, usize> =
                population.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
            let master = RandomSource::new(SEED ^ (n as u64) << 8 ^ class as u64);
            let hits = (0..SAMPLES / CHUNK)
                .into_par_iter()
                .map(|chunk| -> Result<Vec<u64>, String> {
                    let mut rng = master.split(chunk as u64);
                    let mut local = vec![0u64; population.len()];
                    for _ in 0..CHUNK {
                        let t = tables.sample_tree(n, &mut rng).map_err(|e| e.to_string())?;
                        let i = index.get(&t).ok_or_else(|| format!("{class}: sample {t} outside the population"))?;
                        local[*i] += 1;
                    }
                    Ok(local)
                })
                .try_reduce(
                    || vec![0u64; population.len()],
                    |mut a, b| {
                        a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                        Ok(a)
                    },
                )?;
            // Membership is a property of the tree, so checking every tree
            // that was drawn at least once covers every sample.
            for (t, &h) in population.iter().zip(&hits) {
                if h > 0 {
                    let g = t.graph_of().map_err(|e| e.to_string())?;
                    let member = is_member(&g, class).map_err(|e| e.to_string())?
                        && is_member_definitional(&g, class).map_err(|e| e.to_string())?;
                    check(member, || format!("{class}: sampled graph of {t} rejected by a recognizer"))?;
                }
            }
            let expected = SAMPLES as f64 / population.len() as f64;
            let stat: f64 = hits.iter().map(|&h| (h as f64 - expected).powi(2) / expected).sum();
            let dof = (population.len() - 1) as f64;
            let p = 1.0 - ChiSquared::new(dof).map_err(|e| e.to_string())?.cdf(stat);
            check(p > 1e-3, || format!("{class} n={n}: chi-square {stat:.1} on {dof} dof, p = {p:.2e}"))?;
            lines.push(format!("{class}/{n} p={p:.3}"));
        }
    }
    Ok(lines.join(", "))
}

fn prime_occurrences() -> Outcome {
    const N: usize = 1000;
    const TRIALS: usize = 2000;
    let mut lines = Vec::new();
    for class in GraphClass::ALL.into_iter().filter(|&c| c != GraphClass::Cograph) {
        let p4 = k_prime(&p4_tilde(), class, 1e-14).map_err(|e| e.to_string())?;
        let b = k_prime(&bull(), class, 1e-14).map_err(|e| e.to_string())?;
        check(p4.exponent == OccurrenceExponent::Linear, || format!("{class}: P4 exponent {:?}", p4.exponent))?;
        check(b.exponent == OccurrenceExponent::ThreeHalves, || format!("{class}: bull exponent {:?}", b.exponent))?;
    }
    for class in GraphClass::ALL {
        let bundle = ClassSeriesBundle::new(class, N);
        let tau = prime_pattern(&p4_tilde()).map_err(|e| e.to_string())?;
        let counts = pattern_counts(&tau, &bundle).map_err(|e| e.to_string())?;
        let exact = BigRational::new(counts.count(N), bundle.t().count(N) * BigInt::from(N));
        let exact = exact.to_f64().unwrap_or(f64::NAN);
        let tables = SamplerTables::from_bundle(&bundle);
        let rng = RandomSource::new(SEED ^ class as u64);
        let stats = empirical_stats_with(&tables, N, TRIALS, &rng).map_err(|e| e.to_string())?;
        let est = stats.occ_p4_over_n;
        if exact.is_zero() {
            check(est.mean == 0.0, || format!("{class}: P4 found in a class without P4"))?;
        } else {
            let z = (est.mean - exact) / est.std_error;
            check(z.abs() <= 3.0, || {
                format!("{class}: mean {:.5} +- {:.5} vs exact {exact:.5} (z = {z:.2})", est.mean, est.std_error)
            })?;
        }
        lines.push(format!("{class} {:.4}+-{:.4}/{exact:.4}", est.mean, est.std_error));
    }
    Ok(format!("exponents 1 and 3/2 in the five classes; Monte-Carlo/exact: {}", lines.join(", ")))
}
