//! Experiment runner, sweep configs and CSV / plot-data output.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::fixtures::{self, AdversarySpec};
use crate::bench::generate::{gen_random, Corruption, GeneratorConfig};
use crate::model::{format_rational, parse_rational, Instance, Kind, Rational};
use crate::orient::{run, run_bound, run_with_oracle, Algorithm, RunOptions, RunResult};
use crate::vcover::VcBackend;

#[derive(Debug, Clone)]
pub enum Source {
    Static(Instance),
    Adversary(AdversarySpec),
}

#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub name: String,
    pub family: String,
    /// Injected error level, used as the x coordinate of plot data.
    pub level: f64,
    pub source: Source,
}

impl SuiteInstance {
    pub fn fixed(name: &str, family: &str, instance: Instance) -> Self {
        SuiteInstance {
            name: name.into(),
            family: family.into(),
            level: 0.0,
            source: Source::Static(instance),
        }
    }

    pub fn adversary(spec: AdversarySpec) -> Self {
        SuiteInstance {
            name: spec.name(),
            family: "adversary".into(),
            level: 0.0,
            source: Source::Adversary(spec),
        }
    }

    pub fn kind(&self) -> Kind {
        match &self.source {
            Source::Static(i) => i.kind(),
            Source::Adversary(a) => a.skeleton().kind(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match &self.source {
            Source::Static(i) => i.vertex_count(),
            Source::Adversary(a) => a.skeleton().vertex_count(),
        }
    }
}

fn rational_str<S: serde::Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn rational_parse<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let text = String::deserialize(d)?;
    parse_rational(&text).map_err(serde::de::Error::custom)
}

/// One CSV row. Field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub family: String,
    pub n: usize,
    pub algorithm: String,
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
    pub cost: usize,
    pub opt: usize,
    pub ratio: f64,
    pub k_num: usize,
    pub k_hop: usize,
    pub k_mand: usize,
    #[serde(serialize_with = "rational_str", deserialize_with = "rational_parse")]
    pub bound_rhs: Rational,
    pub bound_ok: bool,
    #[serde(skip)]
    pub level: f64,
}

impl ResultRow {
    fn from_run(inst: &SuiteInstance, r: &RunResult) -> Self {
        let bound = run_bound(r);
        ResultRow {
            instance: inst.name.clone(),
            family: inst.family.clone(),
            n: inst.vertex_count(),
            algorithm: r.algorithm.clone(),
            gamma: r.gamma,
            seed: r.seed,
            cost: r.cost,
            opt: r.opt_size,
            ratio: r.ratio(),
            k_num: r.errors.k_number,
            k_hop: r.errors.k_hop,
            k_mand: r.errors.k_mandatory,
            bound_rhs: bound,
            bound_ok: Rational::from_integer(r.cost as i64) <= bound,
            level: inst.level,
        }
    }

    pub fn ratio_of(cost: usize, opt: usize) -> f64 {
        if opt == 0 {
            1.0
        } else {
            cost as f64 / opt as f64
        }
    }

    /// Label of the algorithm and its γ, one plot series each.
    pub fn series(&self) -> String {
        match self.gamma {
            Some(g) => format!("{}@{g}", self.algorithm),
            None => self.algorithm.clone(),
        }
    }

    /// Error measure the algorithm's bound is stated in.
    pub fn eta(&self) -> usize {
        match self.algorithm.as_str() {
            "alg1" | "alg1r" => self.k_hop,
            "alg2" | "alg2r" => self.k_mand,
            "sort" => self.k_num.min(self.k_hop).min(self.k_mand),
            _ => self.k_num,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub algorithm: String,
    pub seed: Option<u64>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    pub failures: Vec<Failure>,
}

impl ResultTable {
    pub fn bound_violations(&self) -> Vec<&ResultRow> {
        self.rows.iter().filter(|r| !r.bound_ok).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub backend: VcBackend,
    /// Seeds for the randomized wrappers; deterministic runs use the first.
    pub seeds: Vec<u64>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            backend: VcBackend::default(),
            seeds: vec![0],
        }
    }
}

fn randomized(alg: &Algorithm) -> bool {
    matches!(alg, Algorithm::HopRandom(_) | Algorithm::KmRandom(_))
}

/// Runs every algorithm on every instance. The sorting algorithm is skipped
/// on orientation instances and the offline algorithm on adversaries.
pub fn run_suite(
    instances: &[SuiteInstance],
    algorithms: &[Algorithm],
    params: &SuiteParams,
) -> ResultTable {
    let first = params.seeds.first().copied().unwrap_or(0);
    let mut jobs = Vec::new();
    for inst in instances {
        for alg in algorithms {
            if *alg == Algorithm::Sorting && inst.kind() != Kind::Sorting {
                continue;
            }
            if *alg == Algorithm::Offline && matches!(inst.source, Source::Adversary(_)) {
                continue;
            }
            let seeds = if randomized(alg) {
                params.seeds.clone()
            } else {
                vec![first]
            };
            for seed in seeds {
                jobs.push((inst, *alg, seed));
            }
        }
    }
    let outcomes: Vec<Result<ResultRow, Failure>> = jobs
        .par_iter()
        .map(|&(inst, alg, seed)| {
            let opts = RunOptions {
                backend: params.backend,
                seed,
            };
            let result = match &inst.source {
                Source::Static(i) => run(alg, i, opts),
                Source::Adversary(spec) => {
                    let sk = spec.skeleton();
                    run_with_oracle(alg, &sk, spec.oracle(), opts)
                }
            };
            let fail = |message: String| Failure {
                instance: inst.name.clone(),
                algorithm: alg.to_string(),
                seed: Some(seed),
                message,
            };
            match result {
                Ok(r) => {
                    let row = ResultRow::from_run(inst, &r);
                    if r.guarantee_exact && !row.bound_ok {
                        Err(fail(format!(
                            "cost {} exceeds bound {}",
                            row.cost, row.bound_rhs
                        )))
                    } else {
                        Ok(row)
                    }
                }
                Err(e) => Err(fail(e.to_string())),
            }
        })
        .collect();
    let mut table = ResultTable::default();
    for o in outcomes {
        match o {
            Ok(row) => table.rows.push(row),
            Err(f) => table.failures.push(f),
        }
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Plotdata,
}

#[derive(Debug, Serialize)]
struct PlotRow {
    series: String,
    level: f64,
    eta: usize,
    cost: usize,
    opt: usize,
    ratio: f64,
    #[serde(serialize_with = "rational_str")]
    bound_rhs: Rational,
    bound_ratio: f64,
}

pub fn emit(table: &ResultTable, format: Format, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    match format {
        Format::Csv => {
            for row in &table.rows {
                let mut row = row.clone();
                row.ratio = ResultRow::ratio_of(row.cost, row.opt);
                w.serialize(row)?;
            }
        }
        Format::Plotdata => {
            let mut rows: Vec<PlotRow> = table
                .rows
                .iter()
                .map(|r| PlotRow {
                    series: r.series(),
                    level: r.level,
                    eta: r.eta(),
                    cost: r.cost,
                    opt: r.opt,
                    ratio: ResultRow::ratio_of(r.cost, r.opt),
                    bound_rhs: r.bound_rhs,
                    bound_ratio: if r.opt == 0 {
                        1.0
                    } else {
                        crate::model::rational_to_f64(&r.bound_rhs) / r.opt as f64
                    },
                })
                .collect();
            rows.sort_by(|a, b| {
                (&a.series, a.eta, a.bound_rhs)
                    .cmp(&(&b.series, b.eta, b.bound_rhs))
                    .then(a.level.total_cmp(&b.level))
            });
            for r in rows {
                w.serialize(r)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn emit_string(table: &ResultTable, format: Format) -> String {
    let mut buf = Vec::new();
    emit(table, format, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Reads rows written by [`emit`] in CSV format.
pub fn read_csv(input: impl Read) -> csv::Result<Vec<ResultRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// Sweep description read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    /// Algorithm specs such as `alg1:2`, `alg2r:2.5`, `sort`, `witness`.
    pub algorithms: Vec<String>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub sweep: Vec<Sweep>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Sweep {
    Orientation {
        n: usize,
        edges: usize,
        levels: Vec<f64>,
        #[serde(default = "one")]
        count: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        adversarial: bool,
    },
    Sorting {
        n: usize,
        levels: Vec<f64>,
        #[serde(default = "one")]
        count: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        adversarial: bool,
    },
    Fixture {
        names: Vec<String>,
    },
    Adversary {
        specs: Vec<String>,
    },
}

fn one() -> usize {
    1
}

/// `name` or `name:gamma`.
pub fn parse_algorithm(spec: &str) -> Result<Algorithm, String> {
    match spec.split_once(':') {
        Some((name, g)) => {
            let gamma: f64 = g.parse().map_err(|_| format!("bad gamma in {spec:?}"))?;
            Algorithm::parse(name, gamma)
        }
        None => Algorithm::parse(spec, 2.0),
    }
}

fn random_family(
    out: &mut Vec<SuiteInstance>,
    base: impl Fn(Corruption, u64) -> GeneratorConfig,
    family: &str,
    levels: &[f64],
    count: usize,
    seed: u64,
    adversarial: bool,
) -> Result<(), String> {
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let mut add = |level: f64, c: Corruption, tag: String| -> Result<(), String> {
            let inst = gen_random(&base(c, s)).map_err(|e| e.to_string())?;
            out.push(SuiteInstance {
                name: format!("{family}-{s}-{tag}"),
                family: family.into(),
                level,
                source: Source::Static(inst),
            });
            Ok(())
        };
        for &level in levels {
            add(level, Corruption::Flip(level), format!("{level}"))?;
        }
        if adversarial {
            add(1.0, Corruption::Adversarial, "adv".into())?;
        }
    }
    Ok(())
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn algorithms(&self) -> Result<Vec<Algorithm>, String> {
        self.algorithms.iter().map(|a| parse_algorithm(a)).collect()
    }

    pub fn instances(&self) -> Result<Vec<SuiteInstance>, String> {
        let mut out = Vec::new();
        for sweep in &self.sweep {
            match sweep {
                Sweep::Orientation {
                    n,
                    edges,
                    levels,
                    count,
                    seed,
                    adversarial,
                } => random_family(
                    &mut out,
                    |c, s| GeneratorConfig::orientation(*n, *edges, c, s),
                    "orientation",
                    levels,
                    *count,
                    *seed,
                    *adversarial,
                )?,
                Sweep::Sorting {
                    n,
                    levels,
                    count,
                    seed,
                    adversarial,
                } => random_family(
                    &mut out,
                    |c, s| GeneratorConfig::sorting(*n, c, s),
                    "sorting",
                    levels,
                    *count,
                    *seed,
                    *adversarial,
                )?,
                Sweep::Fixture { names } => {
                    for name in names {
                        let inst = fixtures::fixture(name)
                            .ok_or_else(|| format!("unknown fixture {name:?}"))?;
                        out.push(SuiteInstance::fixed(name, "fixture", inst));
                    }
                }
                Sweep::Adversary { specs } => {
                    for spec in specs {
                        out.push(SuiteInstance::adversary(AdversarySpec::parse(spec)?));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn params(&self, backend: VcBackend) -> SuiteParams {
        SuiteParams {
            backend,
            seeds: self.seeds.clone(),
        }
    }
}

/// Static fixtures plus every lower-bound family at small sizes.
pub fn fixture_suite() -> Vec<SuiteInstance> {
    let mut out: Vec<SuiteInstance> = fixtures::all_static()
        .into_iter()
        .map(|(name, inst)| SuiteInstance::fixed(name, "fixture", inst))
        .collect();
    for spec in ["lb1:1", "lb1:3", "lbknum:3", "fig5:4:2", "lberror:2"] {
        out.push(SuiteInstance::adversary(
            AdversarySpec::parse(spec).expect("valid spec"),
        ));
    }
    out
}
