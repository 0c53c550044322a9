use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use explorable::bench::fixtures::{self, AdversarySpec};
use explorable::bench::generate::{
    gen_random, gen_subdivision_reduction, Corruption, GeneratorConfig,
};
use explorable::bench::suite::{
    emit, run_suite, BenchConfig, Format, ResultTable, SuiteInstance, SuiteParams,
};
use explorable::learn::{
    draw_samples, empirical_km, erm_mandatory_set, SampleDistribution, WeightSampleSet,
};
use explorable::model::{format_rational, q, Instance};
use explorable::orient::{
    alg_km_with_set, run, run_bound, run_with_oracle, Algorithm, RunOptions, RunResult,
};
use explorable::vcover::VcBackend;

#[derive(Parser)]
#[command(
    name = "explorable",
    version,
    about = "Query algorithms under explorable uncertainty with predictions"
)]
struct Cli {
    /// Vertex-cover backend used by the orientation algorithms.
    #[arg(long, value_enum, global = true, default_value = "exact")]
    vc: Vc,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Vc {
    Exact,
    Approx,
}

impl From<Vc> for VcBackend {
    fn from(v: Vc) -> Self {
        match v {
            Vc::Exact => VcBackend::default(),
            Vc::Approx => VcBackend::Approx,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Orientation,
    Sorting,
    Fixture,
    Adversary,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Plotdata,
}

impl From<TableFormat> for Format {
    fn from(f: TableFormat) -> Self {
        match f {
            TableFormat::Csv => Format::Csv,
            TableFormat::Plotdata => Format::Plotdata,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Plotdata,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance as JSON.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        edges: usize,
        /// none, flip:FRACTION or adversarial.
        #[arg(long, default_value = "none")]
        corruption: String,
        /// Fixture name or adversary spec such as lb1:3.
        #[arg(long)]
        name: Option<String>,
        /// Write this many sampled realizations for `learn` instead of the instance.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm on an instance file or against an adversary.
    Run {
        #[arg(
            long,
            conflicts_with = "adversary",
            required_unless_present = "adversary"
        )]
        instance: Option<PathBuf>,
        #[arg(long)]
        adversary: Option<String>,
        /// offline, witness, alg1, alg2, alg1r, alg2r or sort.
        #[arg(long)]
        algorithm: String,
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
        /// Predicted mandatory set from `learn`, used by alg2 in place of the predictions.
        #[arg(long, conflicts_with = "adversary")]
        predicted_set: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
        #[arg(long)]
        assert_bounds: bool,
    },
    /// Run the sweeps of a TOML config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        assert_bounds: bool,
    },
    /// Build the reduction instance of a graph given as lines `a b`.
    Reduce {
        #[arg(long)]
        edges: PathBuf,
        /// Vertex count; defaults to one more than the largest id.
        #[arg(long)]
        vertices: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Learn a predicted mandatory set from a sample file.
    Learn {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_corruption(s: &str) -> Result<Corruption> {
    Ok(match s.split_once(':') {
        None if s == "none" => Corruption::None,
        None if s == "adversarial" => Corruption::Adversarial,
        Some(("flip", f)) => {
            let f: f64 = f
                .parse()
                .with_context(|| format!("bad flip fraction {f:?}"))?;
            if !(0.0..=1.0).contains(&f) {
                bail!("flip fraction must lie in [0, 1]");
            }
            Corruption::Flip(f)
        }
        _ => bail!("unknown corruption {s:?}; use none, flip:F or adversarial"),
    })
}

fn gen(
    cli: &Cli,
    family: Family,
    n: usize,
    edges: usize,
    corruption: &str,
    name: Option<&str>,
) -> Result<Instance> {
    let c = parse_corruption(corruption)?;
    Ok(match family {
        Family::Orientation => gen_random(&GeneratorConfig::orientation(n, edges, c, cli.seed))?,
        Family::Sorting => gen_random(&GeneratorConfig::sorting(n, c, cli.seed))?,
        Family::Fixture => {
            let name = name.ok_or_else(|| anyhow!("--name is required for fixtures"))?;
            fixtures::fixture(name).ok_or_else(|| anyhow!("unknown fixture {name:?}"))?
        }
        Family::Adversary => {
            let name = name.ok_or_else(|| anyhow!("--name is required for adversaries"))?;
            AdversarySpec::parse(name)
                .map_err(|e| anyhow!(e))?
                .static_instance()
        }
    })
}

fn read_predicted_set(path: &Path) -> Result<BTreeSet<usize>> {
    let v: serde_json::Value = serde_json::from_str(&read(path)?)?;
    let list = v.get("predicted").unwrap_or(&v);
    serde_json::from_value(list.clone())
        .context("expected a list of vertex ids under \"predicted\"")
}

fn violates(r: &RunResult) -> bool {
    r.guarantee_exact && q(r.cost as i64, 1) > run_bound(r)
}

fn emit_table(table: &ResultTable, format: Format, out: Option<&Path>) -> Result<()> {
    let mut buf = Vec::new();
    emit(table, format, &mut buf)?;
    write_out(out, &String::from_utf8(buf)?)
}

fn report_table(table: &ResultTable, assert_bounds: bool) -> Result<ExitCode> {
    for f in &table.failures {
        eprintln!("failed: {} {}: {}", f.instance, f.algorithm, f.message);
    }
    let bad = table.bound_violations();
    for r in &bad {
        eprintln!(
            "bound violated: {} {} cost {} > {}",
            r.instance, r.algorithm, r.cost, r.bound_rhs
        );
    }
    if assert_bounds && (!bad.is_empty() || !table.failures.is_empty()) {
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn run_cmd(
    cli: &Cli,
    instance: Option<&Path>,
    adversary: Option<&str>,
    algorithm: &str,
    gamma: f64,
    predicted_set: Option<&Path>,
    format: OutFormat,
    assert_bounds: bool,
) -> Result<ExitCode> {
    let alg = Algorithm::parse(algorithm, gamma).map_err(|e| anyhow!(e))?;
    let opts = RunOptions {
        backend: cli.vc.into(),
        seed: cli.seed,
    };
    let table_format = match format {
        OutFormat::Json => None,
        OutFormat::Csv => Some(Format::Csv),
        OutFormat::Plotdata => Some(Format::Plotdata),
    };
    if let Some(f) = table_format {
        if predicted_set.is_some() {
            bail!("--predicted-set only supports --format json");
        }
        let item = match (instance, adversary) {
            (Some(p), _) => {
                let name = p
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                SuiteInstance::fixed(&name, "file", Instance::from_json(&read(p)?)?)
            }
            (None, Some(spec)) => {
                SuiteInstance::adversary(AdversarySpec::parse(spec).map_err(|e| anyhow!(e))?)
            }
            (None, None) => bail!("give --instance or --adversary"),
        };
        let params = SuiteParams {
            backend: opts.backend,
            seeds: vec![cli.seed],
        };
        let table = run_suite(&[item], &[alg], &params);
        if table.rows.is_empty() && table.failures.is_empty() {
            bail!("{alg} does not apply to this instance");
        }
        emit_table(&table, f, None)?;
        return report_table(&table, assert_bounds);
    }
    let result = match (instance, adversary) {
        (Some(p), _) => {
            let inst = Instance::from_json(&read(p)?)?;
            match predicted_set {
                Some(ps) => match alg {
                    Algorithm::Km(g) => {
                        alg_km_with_set(&inst, &read_predicted_set(ps)?, g, opts.backend)?
                    }
                    _ => bail!("--predicted-set needs alg2"),
                },
                None => run(alg, &inst, opts)?,
            }
        }
        (None, Some(spec)) => {
            let spec = AdversarySpec::parse(spec).map_err(|e| anyhow!(e))?;
            let sk = spec.skeleton();
            run_with_oracle(alg, &sk, spec.oracle(), opts)?
        }
        (None, None) => bail!("give --instance or --adversary"),
    };
    write_out(None, &(serde_json::to_string_pretty(&result)? + "\n"))?;
    if violates(&result) {
        eprintln!(
            "bound violated: cost {} > {}",
            result.cost,
            run_bound(&result)
        );
        if assert_bounds {
            return Ok(ExitCode::FAILURE);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ids: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        let [a, b] = ids[..] else {
            bail!("line {}: expected two vertex ids", i + 1)
        };
        out.push((
            a.parse().with_context(|| format!("line {}", i + 1))?,
            b.parse().with_context(|| format!("line {}", i + 1))?,
        ));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Gen {
            family,
            n,
            edges,
            corruption,
            name,
            samples,
            out,
        } => {
            let inst = gen(cli, *family, *n, *edges, corruption, name.as_deref())?;
            let text = match samples {
                None => inst.to_json(),
                Some(m) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    let dists = [SampleDistribution::UniformGrid];
                    draw_samples(inst.skeleton(), &dists, *m, &mut rng)?.to_json()
                }
            };
            write_out(out.as_deref(), &(text + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            instance,
            adversary,
            algorithm,
            gamma,
            predicted_set,
            format,
            assert_bounds,
        } => run_cmd(
            cli,
            instance.as_deref(),
            adversary.as_deref(),
            algorithm,
            *gamma,
            predicted_set.as_deref(),
            *format,
            *assert_bounds,
        ),
        Command::Bench {
            config,
            format,
            out,
            assert_bounds,
        } => {
            let cfg = BenchConfig::from_toml(&read(config)?).map_err(|e| anyhow!(e))?;
            let algs = cfg.algorithms().map_err(|e| anyhow!(e))?;
            let insts = cfg.instances().map_err(|e| anyhow!(e))?;
            let table = run_suite(&insts, &algs, &cfg.params(cli.vc.into()));
            emit_table(&table, (*format).into(), out.as_deref())?;
            report_table(&table, *assert_bounds)
        }
        Command::Reduce {
            edges,
            vertices,
            out,
        } => {
            let list = parse_edges(&read(edges)?)?;
            let n = vertices
                .unwrap_or_else(|| list.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0));
            let inst = gen_subdivision_reduction(n, &list)?;
            write_out(out.as_deref(), &(inst.to_json() + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Learn { samples, out } => {
            let set = WeightSampleSet::from_json(&read(samples)?)?;
            let p = erm_mandatory_set(&set)?;
            let body = serde_json::json!({
                "predicted": p,
                "empirical_km": format_rational(&empirical_km(&p, &set)),
                "samples": set.samples().len(),
            });
            write_out(
                out.as_deref(),
                &(serde_json::to_string_pretty(&body)? + "\n"),
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
