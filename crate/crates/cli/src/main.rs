use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use jio_stap::complexity::{sweep, write_sweep_csv};
use jio_stap::harness::{
    ber_vs_fdt, ber_vs_rank, ber_vs_snr, ber_vs_symbols, ber_vs_users, emit_csv, emit_plotdata, Axis, Estimator,
    ExperimentSpec, HarnessError, RunResult,
};
use jio_stap::rank::Selector;

/// Monte-Carlo BER experiments and complexity tables for joint iterative
/// reduced-rank space-time receivers.
#[derive(Parser)]
#[command(name = "jio-stap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// BER against the rank D.
    BerVsRank(ExperimentArgs),
    /// BER against the number of received symbols.
    BerVsSymbols(ExperimentArgs),
    /// BER against the normalized Doppler f_d T.
    BerVsFdt(ExperimentArgs),
    /// BER against Eb/N0 in dB.
    BerVsSnr(ExperimentArgs),
    /// BER against the number of users.
    BerVsUsers(ExperimentArgs),
    /// Arithmetic cost per symbol of every algorithm, as CSV.
    Complexity(ComplexityArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML file overriding the default experiment.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    /// full-rank-rls, jio-rls, jio-rls-autorank, mmse-genie or rr-svd-oracle.
    #[arg(long)]
    estimator: Option<Estimator>,
    /// extended, multiple, stopping or cv; implies jio-rls-autorank.
    #[arg(long)]
    rank_selector: Option<Selector>,
    /// Fixed rank D.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    d_min: Option<usize>,
    #[arg(long)]
    d_max: Option<usize>,
    /// Forgetting factor of the rank-selection costs.
    #[arg(long)]
    alpha: Option<f64>,
    /// Threshold of the stopping rule.
    #[arg(long)]
    stopping_delta: Option<f64>,
    /// Comma-separated sweep values replacing the default grid.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Output directory for `<name>.csv` and `<name>.dat`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ComplexityArgs {
    /// Inclusive range `lo..hi` or `lo..=hi` of JM values.
    #[arg(long, default_value = "4..=64")]
    jm_range: String,
    #[arg(long, default_value_t = 4)]
    d: u64,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn spec(&self) -> Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                ExperimentSpec::from_toml_str(&text)?
            }
            None => ExperimentSpec::default(),
        };
        if let Some(v) = self.seed {
            spec.seed = v;
        }
        if let Some(v) = self.runs {
            spec.runs = v;
        }
        if let Some(v) = self.estimator {
            spec.estimator = v;
        }
        if let Some(sel) = self.rank_selector {
            match spec.estimator {
                Estimator::JioRls | Estimator::JioRlsAutorank(_) => spec.estimator = Estimator::JioRlsAutorank(sel),
                other => bail!("--rank-selector does not apply to {other}"),
            }
        }
        if let Some(v) = self.d {
            spec.rank = v;
        }
        let rs = &mut spec.rank_selection;
        rs.d_min = self.d_min.unwrap_or(rs.d_min);
        rs.d_max = self.d_max.unwrap_or(rs.d_max);
        rs.alpha = self.alpha.unwrap_or(rs.alpha);
        rs.delta = self.stopping_delta.unwrap_or(rs.delta);
        Ok(spec)
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let (lo, hi, inclusive) = if let Some((lo, hi)) = s.split_once("..=") {
        (lo, hi, true)
    } else if let Some((lo, hi)) = s.split_once("..") {
        (lo, hi, false)
    } else {
        bail!("expected `lo..hi` or `lo..=hi`, got `{s}`")
    };
    let lo: u64 = lo.trim().parse().with_context(|| format!("bad range start in `{s}`"))?;
    let hi: u64 = hi.trim().parse().with_context(|| format!("bad range end in `{s}`"))?;
    let hi = if inclusive { hi } else { hi.checked_sub(1).context("empty range")? };
    if lo > hi {
        bail!("empty range `{s}`");
    }
    Ok(lo..=hi)
}

type Runner = fn(&ExperimentSpec) -> Result<RunResult, HarnessError>;

fn experiment(args: &ExperimentArgs, axis: Axis, run: Runner) -> Result<()> {
    let mut spec = args.spec()?.with_axis(axis);
    if let Some(values) = &args.values {
        spec.sweep.values = values.clone();
    }
    let result = run(&spec)?;
    write_outputs(&result, &args.out, &format!("ber_vs_{axis}"))
}

fn write_outputs(result: &RunResult, dir: &Path, name: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv = dir.join(format!("{name}.csv"));
    let dat = dir.join(format!("{name}.dat"));
    emit_csv(result, &csv)?;
    emit_plotdata(result, &dat)?;
    for p in &result.points {
        println!(
            "{} = {:<8} BER {:.3e} ± {:.1e}  ({} runs, {} failed)",
            result.axis, p.value, p.ber, p.half_width, p.runs, p.failed_runs
        );
    }
    log::info!("wrote {} and {}", csv.display(), dat.display());
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::BerVsRank(a) => experiment(&a, Axis::Rank, ber_vs_rank),
        Command::BerVsSymbols(a) => experiment(&a, Axis::Symbols, ber_vs_symbols),
        Command::BerVsFdt(a) => experiment(&a, Axis::Fdt, ber_vs_fdt),
        Command::BerVsSnr(a) => experiment(&a, Axis::Snr, ber_vs_snr),
        Command::BerVsUsers(a) => experiment(&a, Axis::Users, ber_vs_users),
        Command::Complexity(a) => {
            let rows = sweep(parse_range(&a.jm_range)?, a.d)?;
            match a.out {
                Some(path) => write_sweep_csv(&rows, fs::File::create(&path)?)?,
                None => write_sweep_csv(&rows, std::io::stdout().lock())?,
            }
            Ok(())
        }
    }
}
