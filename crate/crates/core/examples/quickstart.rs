//! Counts, constants and a uniform sample for the tidy class.

use p4forge::asymptotics::{k_prime, singularity_report};
use p4forge::classes::{is_member, GraphClass};
use p4forge::decomposition::canonical_tree;
use p4forge::egf::graph_count;
use p4forge::occurrence::p4_tilde;
use p4forge::random::RandomSource;
use p4forge::sampler::build_tables;

fn main() -> p4forge::Result<()> {
    let class = GraphClass::Tidy;
    println!("{}", graph_count(class, 10)?);

    let s = singularity_report(class, 1e-12)?;
    let k = k_prime(&p4_tilde(), class, 1e-12)?.k;
    println!("R = {:.8}, C = {:.8}, K = {:.8}", s.r, s.c, k);

    let tables = build_tables(class, 200)?;
    let mut rng = RandomSource::new(42);
    let g = tables.sample_graph(200, &mut rng)?;
    assert!(is_member(&g, class)?);
    println!("{}", canonical_tree(&g)?.size());
    Ok(())
}
