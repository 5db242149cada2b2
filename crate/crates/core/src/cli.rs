//! Command-line front end.
//!
//! Every subcommand writes its main artifact (CSV or report text) to `--out`
//! or stdout, and short summaries to stderr. Exit status is 0 when all
//! checks pass, 1 when a computed invariant fails, 2 on bad input.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use crate::config::{load_product_config, load_spec};
use crate::density::{checkpoint_densities, DensityProfile};
use crate::error::{Error, Result};
use crate::gallery::{remark1_report, solve_theorem, Targets, Theorem};
use crate::product::ProductSpec;
use crate::rational::{format_sig, parse_rational, show, to_f64, Rational};
use crate::sampler::{compare_counts, digits_respect, enumerate_points, sample_points, PointCloud, DEFAULT_POINT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fracdim", version, about = "Dimensions of digit-restriction Cantor sets and their products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact density d_k for k = 1..=k-max, as CSV.
    Density {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        k_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checkpoint densities d_{k_n} with their certified bounds, as CSV.
    Checkpoints {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower and upper dimension estimates of a set or product.
    Dims {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long)]
        n_burn: Option<usize>,
        /// Also write the covering profile E_k / k for k = 1..=k-max.
        #[arg(long)]
        k_max: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated points at level K, as CSV of dyadic rationals.
    Sample {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        cloud: CloudArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical box counts against 2^{E_k} for k = 0..=K, as CSV.
    Crosscheck {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        cloud: CloudArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve and check one theorem instance.
    Theorem {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        #[arg(long, value_parser = rational_arg)]
        beta: Rational,
        #[arg(long, value_parser = rational_arg)]
        gamma: Rational,
        #[arg(long, value_parser = rational_arg)]
        lambda: Rational,
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two dimension-1/4 sets whose product has dimension 7/12.
    Remark1 {
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Digit-set file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Product file listing factor digit-set files.
    #[arg(long)]
    product: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CloudArgs {
    /// Truncation level K.
    #[arg(long)]
    level: usize,
    /// Largest point count enumerated in full.
    #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
    cap: u64,
    /// Seed for random sampling, used when full enumeration exceeds the cap.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled points when falling back to random sampling.
    #[arg(long, default_value_t = 4096)]
    count: usize,
}

fn rational_arg(text: &str) -> std::result::Result<Rational, String> {
    parse_rational(text.trim()).ok_or_else(|| format!("`{text}` is not a rational p/q"))
}

impl Source {
    /// Product validated to checkpoint depth `depth`.
    fn at_depth(&self, depth: usize) -> Result<ProductSpec> {
        match (&self.spec, &self.product) {
            (Some(path), _) => Ok(ProductSpec::single(load_spec(path)?.validate(depth)?)),
            (None, Some(path)) => load_product_config(path)?.build(depth),
            (None, None) => Err(Error::InvalidArgument("one of --spec or --product is required".into())),
        }
    }

    /// Product whose factors all cover `k`.
    fn covering(&self, k: u64) -> Result<ProductSpec> {
        let k = BigUint::from(k.max(1));
        match (&self.spec, &self.product) {
            (Some(path), _) => Ok(ProductSpec::single(load_spec(path)?.validate_covering(&k)?)),
            (None, Some(path)) => {
                let cfg = load_product_config(path)?;
                let specs = cfg
                    .specs()?
                    .iter()
                    .map(|s| s.validate_covering(&k))
                    .collect::<Result<Vec<_>>>()?;
                ProductSpec::from_specs(specs)?.power(cfg.power)
            }
            (None, None) => Err(Error::InvalidArgument("one of --spec or --product is required".into())),
        }
    }
}

fn with_output<F>(out: Option<&Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let result = match out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            write(&mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write(&mut w).and_then(|_| w.flush())
        }
    };
    result.map_err(|source| Error::Io {
        path: out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("<stdout>")),
        source,
    })
}

fn status(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_INVARIANT
    }
}

fn cloud_for(prod: &ProductSpec, args: &CloudArgs) -> Result<PointCloud> {
    match enumerate_points(prod, args.level, args.cap) {
        Err(Error::CapExceeded { needed, .. }) => {
            eprintln!(
                "full enumeration needs {needed} points (cap {}); sampling {} points with seed {}",
                args.cap, args.count, args.seed
            );
            sample_points(prod, args.level, args.count, args.seed)
        }
        other => other,
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Density { spec, k_max, out } => {
            if k_max == 0 {
                return Err(Error::InvalidArgument("--k-max must be at least 1".into()));
            }
            let spec = load_spec(&spec)?.validate_covering(&BigUint::from(k_max))?;
            let profile = DensityProfile::sweep(&spec, 1, k_max)?;
            with_output(out.as_deref(), |w| profile.write_csv(w))?;
            Ok(EXIT_OK)
        }
        Command::Checkpoints { spec, n, out } => {
            let spec = load_spec(&spec)?.validate(n)?;
            let cps = checkpoint_densities(&spec, n)?;
            let mut ok = true;
            with_output(out.as_deref(), |w| {
                writeln!(w, "n,k,count,density,density_float,target,sandwich_lo,sandwich_hi,error,bound")?;
                for c in &cps {
                    ok &= c.sandwich.0 <= c.density && c.density <= c.sandwich.1 && c.error() <= c.bound;
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{},{},{}",
                        c.n,
                        c.k,
                        c.count,
                        show(&c.density),
                        format_sig(to_f64(&c.density), 12),
                        show(&c.target),
                        show(&c.sandwich.0),
                        show(&c.sandwich.1),
                        format_sig(to_f64(&c.error()), 6),
                        format_sig(to_f64(&c.bound), 6)
                    )?;
                }
                Ok(())
            })?;
            if !ok {
                eprintln!("a checkpoint density escaped its certified bounds");
            }
            Ok(status(ok))
        }
        Command::Dims {
            source,
            n,
            n_burn,
            k_max,
            out,
        } => {
            let prod = source.at_depth(n)?;
            let report = prod.dimension_report(n, n_burn)?;
            let text = report.render();
            match k_max {
                Some(k_max) => {
                    let profile = source.covering(k_max)?.covering_profile((1..=k_max).map(BigUint::from))?;
                    with_output(out.as_deref(), |w| profile.write_csv(w))?;
                    eprint!("{text}");
                }
                None => with_output(out.as_deref(), |w| w.write_all(text.as_bytes()))?,
            }
            if out.is_some() {
                print!("{text}");
            }
            Ok(status(report.limits.is_certified()))
        }
        Command::Sample { source, cloud, out } => {
            let prod = source.covering(cloud.level as u64)?;
            let points = cloud_for(&prod, &cloud)?;
            let ok = digits_respect(&prod, &points)?;
            with_output(out.as_deref(), |w| points.write_csv(w))?;
            eprintln!("{} points at level {}", points.len(), points.truncation);
            if !ok {
                eprintln!("a sampled point has a digit outside its digit set");
            }
            Ok(status(ok))
        }
        Command::Crosscheck { source, cloud, out } => {
            let prod = source.covering(cloud.level as u64)?;
            let points = cloud_for(&prod, &cloud)?;
            let report = compare_counts(&prod, &points)?;
            with_output(out.as_deref(), |w| report.write_csv(w))?;
            let bad: Vec<String> = report.mismatches().map(|l| l.k.to_string()).collect();
            if bad.is_empty() {
                eprintln!("box counts agree at all {} levels ({} points)", report.levels.len(), report.points);
            } else {
                eprintln!("box counts disagree at k = {}", bad.join(", "));
            }
            Ok(status(report.passed()))
        }
        Command::Theorem {
            which,
            alpha,
            beta,
            gamma,
            lambda,
            n,
            out,
        } => {
            let instance = solve_theorem(Theorem::from_number(which)?, Targets::new(alpha, beta, gamma, lambda))?;
            let report = instance.report(n)?;
            with_output(out.as_deref(), |w| w.write_all(report.render().as_bytes()))?;
            Ok(status(report.passed()))
        }
        Command::Remark1 { n, out } => {
            let report = remark1_report(n)?;
            with_output(out.as_deref(), |w| w.write_all(report.render().as_bytes()))?;
            Ok(status(report.passed()))
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
