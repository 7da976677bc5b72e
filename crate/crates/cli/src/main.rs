//! `kselfdual`: command-line front end.
//!
//! Exit codes: 0 when the answer is yes (selfdual, all claims verified),
//! 1 when it is no, 2 on any error.

mod generate;
mod manifest;
mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kselfdual::claims::{self, Catalog};
use kselfdual::dualdim;
use kselfdual::search::{self, SearchFilter, SearchJob, DEFAULT_MAX_SUBSETS};
use kselfdual::{osculation, selfdual, LatticeConfiguration};

use manifest::{ManifestBuilder, RunManifest};

const WORKERS_ENV: &str = "KSELFDUAL_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "kselfdual",
    version,
    about = "Decide k-selfduality of lattice point configurations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Filter {
    Knap,
    Selfdual,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a configuration at order k.
    Classify {
        /// Configuration file, text or JSON; `-` reads stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: u32,
        /// Also measure the dimension of the k-th dual numerically.
        #[arg(long)]
        crosscheck: bool,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Hilbert function values H(1), ..., H(k_max).
    Hilbert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "k-max", default_value_t = 4)]
        k_max: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Generate a configuration from a named family.
    Generate {
        /// One of segment, box, cube, simplex, scroll, cayley, join, togliatti,
        /// three-root-conic, aprime, mulliken, random-general, fixture.
        #[arg(long, required_unless_present = "name")]
        family: Option<String>,
        /// Comma separated parameters; nested specs for cayley and join are
        /// separated by `;`, e.g. `segment:2;segment:2`.
        #[arg(long, default_value = "")]
        params: String,
        /// Shorthand for `--family fixture --params NAME`.
        #[arg(long, conflicts_with = "family")]
        name: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "box-size", default_value_t = 10)]
        box_size: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate subsets of a lattice box and report the knap or selfdual ones.
    Search {
        /// Side lengths of the box [0,l_1] x ... x [0,l_m].
        #[arg(long = "box", value_delimiter = ',', required = true)]
        box_dims: Vec<u32>,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Filter::Selfdual)]
        filter: Filter,
        /// Keep one subset per class under signed coordinate permutations
        /// and translations.
        #[arg(long)]
        dedup: bool,
        #[arg(long = "max-subsets", default_value_t = DEFAULT_MAX_SUBSETS)]
        max_subsets: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Check every recorded claim against the built-in fixtures.
    VerifyPaper {
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
        /// Replace a fixture by a configuration file, `NAME=PATH`.
        #[arg(long = "replace-fixture")]
        replace: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_workers() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_workers() -> Result<()> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("{WORKERS_ENV} must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        bail!("{WORKERS_ENV} must be a positive integer");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    log::debug!("using {n} workers");
    Ok(())
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Classify {
            input,
            k,
            crosscheck,
            trials,
            seed,
            output,
        } => classify(&input, k, crosscheck, trials, seed, &output),
        Command::Hilbert { input, k_max, output } => hilbert(&input, k_max, &output),
        Command::Generate {
            family,
            params,
            name,
            seed,
            box_size,
            output,
        } => {
            let (tag, params) = match name {
                Some(n) => ("fixture".to_string(), n),
                None => (family.unwrap_or_default(), params),
            };
            generate(&tag, &params, seed, box_size, &output)
        }
        Command::Search {
            box_dims,
            size,
            k,
            filter,
            dedup,
            max_subsets,
            output,
        } => {
            let job = SearchJob {
                box_dims,
                size,
                k,
                filter: match filter {
                    Filter::Knap => SearchFilter::Knap,
                    Filter::Selfdual => SearchFilter::Selfdual,
                },
                dedup,
                max_subsets,
            };
            search_cmd(&job, &output)
        }
        Command::VerifyPaper { json, replace, output } => {
            let format = if json { Format::Json } else { output.format };
            verify_paper(&replace, format, output.out.as_deref())
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load(path: &Path, manifest: &mut ManifestBuilder) -> Result<LatticeConfiguration> {
    let bytes = read_input(path)?;
    manifest.input(&path.display().to_string(), &bytes);
    let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    kselfdual::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn structured(manifest: RunManifest, mut body: Value) -> Result<String> {
    body["manifest"] = serde_json::to_value(manifest)?;
    let mut s = serde_json::to_string_pretty(&body)?;
    s.push('\n');
    Ok(s)
}

fn classify(input: &Path, k: u32, crosscheck: bool, trials: usize, seed: u64, output: &Output) -> Result<u8> {
    let params = json!({ "input": input, "k": k, "crosscheck": crosscheck, "trials": trials });
    let mut manifest = ManifestBuilder::new("classify", params).seed(seed);
    let cfg = load(input, &mut manifest)?;
    log::info!("classifying {} points at k = {k}", cfg.len());
    let verdict = if crosscheck {
        dualdim::crosscheck_characterizations(&cfg, k, trials, seed)?.verdict
    } else {
        selfdual::classify(&cfg, k)
    };
    let body = match output.format {
        Format::Text => render::verdict(&cfg, &verdict),
        Format::Json => structured(manifest.finish(), json!({ "configuration": cfg, "verdict": verdict }))?,
    };
    emit(output.out.as_deref(), &body)?;
    Ok(if verdict.selfdual { 0 } else { 1 })
}

fn hilbert(input: &Path, k_max: u32, output: &Output) -> Result<u8> {
    let mut manifest = ManifestBuilder::new("hilbert", json!({ "input": input, "k_max": k_max }));
    let cfg = load(input, &mut manifest)?;
    let values = osculation::hilbert_series(&cfg, k_max);
    let body = match output.format {
        Format::Text => render::hilbert(&values),
        Format::Json => structured(manifest.finish(), json!({ "hilbert": values }))?,
    };
    emit(output.out.as_deref(), &body)?;
    Ok(0)
}

fn generate(tag: &str, params: &str, seed: u64, box_size: u32, output: &Output) -> Result<u8> {
    let sampling = generate::Sampling { seed, box_size };
    let cfg = generate::build(tag, params, sampling)?;
    let body = match output.format {
        Format::Text => cfg.to_text(),
        Format::Json => {
            let manifest = ManifestBuilder::new(
                "generate",
                json!({ "family": tag, "params": params, "box_size": box_size }),
            )
            .seed(seed)
            .finish();
            let mut v = serde_json::to_value(&cfg)?;
            v["manifest"] = serde_json::to_value(manifest)?;
            let mut s = serde_json::to_string_pretty(&v)?;
            s.push('\n');
            s
        }
    };
    emit(output.out.as_deref(), &body)?;
    Ok(0)
}

fn search_cmd(job: &SearchJob, output: &Output) -> Result<u8> {
    let manifest = ManifestBuilder::new("search", serde_json::to_value(job)?);
    log::info!(
        "searching {}-subsets of box {:?} at k = {} on {} workers",
        job.size,
        job.box_dims,
        job.k,
        rayon::current_num_threads()
    );
    let out = search::run(job)?;
    let body = match output.format {
        Format::Text => render::search(&out),
        Format::Json => structured(manifest.finish(), serde_json::to_value(&out)?)?,
    };
    emit(output.out.as_deref(), &body)?;
    Ok(0)
}

fn verify_paper(replace: &[String], format: Format, out: Option<&Path>) -> Result<u8> {
    let mut manifest = ManifestBuilder::new("verify-paper", json!({ "replace_fixture": replace }));
    let mut catalog = Catalog::new();
    for r in replace {
        let Some((name, path)) = r.split_once('=') else {
            bail!("--replace-fixture expects NAME=PATH, got {r:?}");
        };
        kselfdual::families::fixture(name)?;
        let cfg = load(Path::new(path), &mut manifest)?;
        log::warn!("fixture {name} replaced by {path}");
        catalog = catalog.with_override(name, cfg);
    }
    let report = claims::verify(&catalog);
    let body = match format {
        Format::Text => render::report(&report),
        Format::Json => structured(
            manifest.finish(),
            json!({ "all_passed": report.all_passed(), "report": report }),
        )?,
    };
    emit(out, &body)?;
    Ok(if report.all_passed() { 0 } else { 1 })
}
