use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use tiltsurf::pipeline::{enumerate, run, PipelineConfig};
use tiltsurf::uext::Mode;

/// Build a tilting bundle on a toric blow-up of a Hirzebruch surface.
///
/// Exit status: 0 when the tilting certificate passes, 2 when the
/// construction finished but a certificate failed, 1 on any error.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Pipeline configuration (JSON).
    input: PathBuf,
    /// Directory for the report and graphs; created if missing.
    output: PathBuf,
    /// Try every augmentation position left unspecified in the input.
    #[arg(long)]
    enumerate: bool,
    /// `extend`/`coextend` for all blocks, or `POS=MODE` for the block whose
    /// least member sits at 1-based position POS. Repeatable.
    #[arg(long = "mode", value_name = "SPEC")]
    modes: Vec<String>,
    /// Also write the blow-up graph and Ext-graph as DOT.
    #[arg(long)]
    dot: bool,
    /// Upper bound on the number of plans in enumeration mode.
    #[arg(long, default_value_t = 10_000)]
    max_plans: usize,
}

fn apply_modes(config: &mut PipelineConfig, specs: &[String]) -> anyhow::Result<()> {
    for spec in specs {
        match spec.split_once('=') {
            Some((pos, mode)) => {
                let pos: usize = pos
                    .parse()
                    .with_context(|| format!("bad block position in `{spec}`"))?;
                config.modes.blocks.insert(pos, mode.parse::<Mode>()?);
            }
            None => config.modes.default = spec.parse::<Mode>()?,
        }
    }
    Ok(())
}

fn write(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn main_inner(args: Args) -> anyhow::Result<bool> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let mut config = PipelineConfig::from_json(&text)?;
    apply_modes(&mut config, &args.modes)?;
    fs::create_dir_all(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;

    if args.enumerate {
        let result = enumerate(&config, args.max_plans)?;
        write(&args.output, "summary.json", &result.summary_json())?;
        let plans_dir = args.output.join("plans");
        fs::create_dir_all(&plans_dir)?;
        for (k, plan) in result.plans.iter().enumerate() {
            let stem = format!("plan-{:04}", k + 1);
            match &plan.result {
                Ok(report) => {
                    write(&plans_dir, &format!("{stem}.json"), &report.to_json())?;
                    if args.dot {
                        write(
                            &plans_dir,
                            &format!("{stem}-ext.dot"),
                            &report.ext_graph_dot(),
                        )?;
                    }
                }
                Err(e) => write(&plans_dir, &format!("{stem}.error.txt"), &format!("{e}\n"))?,
            }
        }
        if args.dot {
            if let Some(Ok(first)) = result.plans.first().map(|p| &p.result) {
                write(&args.output, "blowup_graph.dot", &first.blowup_graph_dot())?;
            }
        }
        let passed = result
            .plans
            .iter()
            .filter(|p| p.result.as_ref().is_ok_and(|r| r.passed()))
            .count();
        eprintln!(
            "{passed}/{} plans pass the tilting certificate",
            result.plans.len()
        );
        return Ok(result.all_passed());
    }

    let report = run(&config)?;
    write(&args.output, "report.json", &report.to_json())?;
    if args.dot {
        write(&args.output, "blowup_graph.dot", &report.blowup_graph_dot())?;
        write(&args.output, "ext_graph.dot", &report.ext_graph_dot())?;
    }
    let t = &report.certificates.tilting;
    if t.pass {
        eprintln!("tilting: PASS (max summand rank {})", report.max_rank());
    } else {
        eprintln!("tilting: FAIL");
        for f in &t.failures {
            eprintln!("  {f}");
        }
    }
    Ok(t.pass)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
