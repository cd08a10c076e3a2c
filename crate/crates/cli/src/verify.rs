//! The `verify` command: the exact oracles, the reference constants and a
//! sampler uniformity check, one PASS or FAIL line each.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use anyhow::Result;
use clap::ValueEnum;
use num_bigint::BigUint;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use p4forge::asymptotics::{k_prime, singularity_report};
use p4forge::classes::{is_member, is_member_definitional, GraphClass};
use p4forge::egf::{brute_force_class_count, graph_count, ClassSeriesBundle};
use p4forge::occurrence::{occ_series_generic, p4_tilde, p4_tilde_closed_form, OccMode};
use p4forge::pattern::{all_patterns, brute_force_pattern_census, enumerate_trees, pattern_counts};
use p4forge::random::RandomSource;
use p4forge::sampler::SamplerTables;
use p4forge::tree::DecoratedTree;

/// How much of each suite to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    /// Small sizes only; a few seconds.
    Quick,
    /// Full oracle sizes; under a minute on a desktop.
    Desk,
}

struct Sizes {
    census: usize,
    occ_order: usize,
    pattern_n: usize,
    samples: usize,
}

impl Level {
    fn sizes(self) -> Sizes {
        match self {
            Level::Quick => Sizes { census: 5, occ_order: 12, pattern_n: 5, samples: 20_000 },
            Level::Desk => Sizes { census: 6, occ_order: 30, pattern_n: 7, samples: 200_000 },
        }
    }
}

/// Class, `R⁻¹`, `R`, `C` and `K` of the labeled P4, to eight decimals.
const REFERENCE: [(GraphClass, f64, f64, f64, f64); 6] = [
    (GraphClass::Tidy, 2.90405818, 0.34434572, 0.40883495, 0.29200322),
    (GraphClass::Lite, 2.90146936, 0.34465296, 0.40833239, 0.28507010),
    (GraphClass::Extendible, 2.88492066, 0.34662998, 0.40351731, 0.24959979),
    (GraphClass::Sparse, 2.72743550, 0.36664478, 0.37405701, 0.10280703),
    (GraphClass::Reducible, 2.71715531, 0.36803196, 0.37115484, 0.08249263),
    (GraphClass::Cograph, 2.58869945, 0.38629436, 0.35065840, 0.0),
];

type Check = std::result::Result<String, String>;

/// A named check, evaluated lazily so progress can be reported between checks.
type NamedCheck = (&'static str, Box<dyn Fn() -> Check>);

fn fail(ok: bool, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn text(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Runs every check at `level`; `Ok(false)` if any failed.
pub fn run(level: Level, precision: f64, verbose: bool, out: &mut dyn Write) -> Result<bool> {
    let sizes = level.sizes();
    let precision = precision.min(1e-10);
    let checks: Vec<NamedCheck> = vec![
        ("class counts equal the exhaustive census", Box::new(move || census(sizes.census))),
        ("reference constants R^-1, R, C, K to 1e-7", Box::new(move || constants(precision))),
        ("orbit sums equal the closed occurrence forms", Box::new(move || occurrences(sizes.occ_order))),
        ("pattern counts equal marked-tree enumeration", Box::new(move || patterns(sizes.pattern_n))),
        ("sampler is uniform at n = 4 and samples are members", Box::new(move || sampler(sizes.samples))),
    ];
    let mut all_ok = true;
    for (name, check) in checks {
        if verbose {
            eprintln!("running: {name}");
        }
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => writeln!(out, "PASS {name} ({secs:.1}s): {detail}")?,
            Err(detail) => {
                all_ok = false;
                writeln!(out, "FAIL {name} ({secs:.1}s): {detail}")?;
            }
        }
    }
    Ok(all_ok)
}

fn census(n_max: usize) -> Check {
    for class in GraphClass::ALL {
        for n in 1..=n_max {
            let exhaustive = brute_force_class_count(class, n).map_err(text)?;
            let exact = graph_count(class, n).map_err(text)?;
            fail(exact == BigUint::from(exhaustive), || format!("{class} n={n}: {exact} vs {exhaustive}"))?;
        }
    }
    Ok(format!("n <= {n_max}, all classes"))
}

fn constants(precision: f64) -> Check {
    let mut worst: f64 = 0.0;
    for (class, r_inv, r, c, k) in REFERENCE {
        let s = singularity_report(class, precision).map_err(text)?;
        let got_k = k_prime(&p4_tilde(), class, precision).map_err(text)?.k;
        for (got, want, what) in [(s.r_inv, r_inv, "R^-1"), (s.r, r, "R"), (s.c, c, "C"), (got_k, k, "K")] {
            worst = worst.max((got - want).abs());
            fail((got - want).abs() < 1e-7, || format!("{class} {what} = {got:.10}, reference {want:.8}"))?;
        }
    }
    Ok(format!("largest deviation {worst:.1e}"))
}

fn occurrences(order: usize) -> Check {
    let modes = [OccMode::P, OccMode::PBullet, OccMode::PBulletAt(1), OccMode::PBulletAt(2), OccMode::PBulletAt(3), OccMode::PBulletAt(4)];
    for class in GraphClass::ALL {
        for mode in modes {
            let generic = occ_series_generic(&p4_tilde(), class, mode, order).map_err(text)?;
            let closed = p4_tilde_closed_form(class, mode).series(order);
            fail(generic == closed, || format!("{class} {mode:?} differs"))?;
        }
    }
    Ok(format!("labeled P4, every mode, order {order}"))
}

fn patterns(n_max: usize) -> Check {
    let taus: Vec<DecoratedTree> = [2, 3]
        .into_iter()
        .map(all_patterns)
        .collect::<p4forge::Result<Vec<_>>>()
        .map_err(text)?
        .into_iter()
        .flatten()
        .collect();
    let results: Vec<std::result::Result<(), String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = GraphClass::ALL
            .iter()
            .map(|&class| {
                let taus = &taus;
                scope.spawn(move || -> std::result::Result<(), String> {
                    let bundle = ClassSeriesBundle::new(class, n_max);
                    let mut censuses: HashMap<(usize, usize), HashMap<DecoratedTree, BigUint>> = HashMap::new();
                    for n in 2..=n_max {
                        for p in 2..=3.min(n) {
                            censuses.insert((n, p), brute_force_pattern_census(class, n, p).map_err(text)?);
                        }
                    }
                    for tau in taus {
                        let counts = pattern_counts(tau, &bundle).map_err(text)?;
                        for n in 2..=n_max {
                            let brute = censuses.get(&(n, tau.size())).and_then(|c| c.get(tau)).cloned().unwrap_or_default();
                            fail(counts.count(n) == brute.into(), || format!("{class} {tau} n={n}"))?;
                        }
                    }
                    Ok(())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err("worker panicked".into()))).collect()
    });
    for r in results {
        r?;
    }
    Ok(format!("{} patterns, n <= {n_max}, all classes", taus.len()))
}

fn sampler(samples: usize) -> Check {
    let mut worst: f64 = 1.0;
    for class in GraphClass::ALL {
        let tables = SamplerTables::from_bundle(&ClassSeriesBundle::new(class, 8));
        let population = enumerate_trees(class, 4).map_err(text)?;
        let index: HashMap<&DecoratedTree, usize> = population.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut rng = RandomSource::new(0x7e57 ^ class as u64);
        let mut hits = vec![0usize; population.len()];
        for _ in 0..samples {
            let t = tables.sample_tree(4, &mut rng).map_err(text)?;
            hits[*index.get(&t).ok_or_else(|| format!("{class}: sample outside the population"))?] += 1;
        }
        let expected = samples as f64 / population.len() as f64;
        let stat: f64 = hits.iter().map(|&h| (h as f64 - expected).powi(2) / expected).sum();
        let p = 1.0 - ChiSquared::new((population.len() - 1) as f64).map_err(text)?.cdf(stat);
        worst = worst.min(p);
        fail(p > 1e-3, || format!("{class}: chi-square p = {p:.2e}"))?;
        for _ in 0..50 {
            let g = tables.sample_graph(8, &mut rng).map_err(text)?;
            let ok = is_member(&g, class).map_err(text)? && is_member_definitional(&g, class).map_err(text)?;
            fail(ok, || format!("{class}: sampled graph rejected"))?;
        }
    }
    Ok(format!("{samples} samples per class, smallest p-value {worst:.3}"))
}
