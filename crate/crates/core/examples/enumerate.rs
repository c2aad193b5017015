//! Every augmentation plan for a configuration, with a one-line summary each.
//!
//! `cargo run --release --example enumerate -- examples/data/chain3.json`

use std::collections::BTreeMap;

use tiltsurf::pipeline::{enumerate, plan_count, PipelineConfig};

fn main() -> anyhow::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/chain3.json").into()
    });
    let config = PipelineConfig::from_json(&std::fs::read_to_string(&path)?)?;
    println!("{} plans", plan_count(&config));
    let result = enumerate(&config, 10_000)?;
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for p in result.summary() {
        let verdict = match p.tilting {
            Some(true) => "tilting",
            Some(false) => "certificate failed",
            None => "not constructed",
        };
        *tally.entry(verdict).or_default() += 1;
        println!(
            "{:?}: {verdict}, max rank {:?}, strong {:?}",
            p.positions, p.max_rank, p.strong
        );
    }
    println!("{tally:?}");
    Ok(())
}
