//! The whole pipeline on a JSON configuration: prints the report.
//!
//! `cargo run --example pipeline -- examples/data/f1_mixed.json`

use tiltsurf::pipeline::{run, PipelineConfig};

fn main() -> anyhow::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/f1_mixed.json").into()
    });
    let config = PipelineConfig::from_json(&std::fs::read_to_string(&path)?)?;
    let report = run(&config)?;
    print!("{}", report.to_json());
    eprintln!(
        "ranks {:?}; tilting {}; failures {:?}",
        report.candidate.ranks(),
        report.passed(),
        report.certificates.tilting.failures
    );
    Ok(())
}
