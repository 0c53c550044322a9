//! Query algorithms for hypergraph orientation and the shared run plumbing.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::errors::{error_report, ErrorReport};
use crate::model::{
    q, Instance, ModelError, QuerySession, Rational, Skeleton, VertexId, WeightOracle,
};
use crate::structure::{
    enforces, is_witness_pair, known_mandatory_closure, mandatory_set, prediction_mandatory_set,
    vertex_cover_instance,
};
use crate::vcover::{CoverError, VcBackend};

#[derive(Debug, Error)]
pub enum AlgError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("gamma must be at least 2, got {0}")]
    InvalidGamma(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0} needs the full realization and cannot run against an adversary")]
    NeedsRealization(&'static str),
    #[error("the sorting algorithm needs predicted weights, not only a predicted mandatory set")]
    IncompatiblePrediction,
}

/// Which part of an algorithm issued a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    /// Known-mandatory closure between other steps.
    Closure,
    /// Vertex mandatory under the true weights (offline stage one).
    Mandatory,
    /// Current prediction-mandatory vertex (Algorithm 1 inner loop).
    Predicted,
    /// u or w of an enforcement triple.
    Witness,
    /// v of an enforcement triple, after w_u landed in I_v.
    Enforced,
    /// v of an enforcement pair when no triple exists.
    EnforcedOnly,
    /// Batch of predicted-mandatory vertices plus a witness partner (Algorithm 2).
    Batch,
    /// Whole remaining predicted set (Algorithm 2 with fewer than γ−1 left).
    Remainder,
    Cover,
    FinalClosure,
    /// Extra cover rounds if cover plus closure left something unsolved.
    Fallback,
    /// Sorting: remaining predicted-mandatory vertices after the first closure.
    SortPredicted,
    /// Sorting: path component queries.
    SortPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub vertex: VertexId,
    pub phase: Phase,
    pub round: usize,
}

#[derive(Debug, Default)]
pub struct Recorder {
    pub steps: Vec<Step>,
    pub round: usize,
}

impl Recorder {
    pub fn ask(
        &mut self,
        s: &mut QuerySession,
        v: VertexId,
        phase: Phase,
    ) -> Result<Rational, AlgError> {
        let w = s.query(v)?;
        self.steps.push(Step {
            vertex: v,
            phase,
            round: self.round,
        });
        Ok(w)
    }

    pub fn close(&mut self, s: &mut QuerySession, phase: Phase) -> Result<Vec<VertexId>, AlgError> {
        let done = known_mandatory_closure(s)?;
        self.steps.extend(done.iter().map(|&v| Step {
            vertex: v,
            phase,
            round: self.round,
        }));
        Ok(done)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Offline,
    Witness,
    Hop(u32),
    Km(u32),
    HopRandom(f64),
    KmRandom(f64),
    Sorting,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Offline => "offline",
            Algorithm::Witness => "witness",
            Algorithm::Hop(_) => "alg1",
            Algorithm::Km(_) => "alg2",
            Algorithm::HopRandom(_) => "alg1r",
            Algorithm::KmRandom(_) => "alg2r",
            Algorithm::Sorting => "sort",
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Algorithm::Hop(g) | Algorithm::Km(g) => Some(g as f64),
            Algorithm::HopRandom(g) | Algorithm::KmRandom(g) => Some(g),
            _ => None,
        }
    }

    pub fn parse(name: &str, gamma: f64) -> Result<Algorithm, String> {
        let integral = || {
            if gamma >= 2.0 && gamma.fract() == 0.0 {
                Ok(gamma as u32)
            } else {
                Err(format!("{name} needs an integral gamma >= 2, got {gamma}"))
            }
        };
        Ok(match name {
            "offline" => Algorithm::Offline,
            "witness" => Algorithm::Witness,
            "alg1" => Algorithm::Hop(integral()?),
            "alg2" => Algorithm::Km(integral()?),
            "alg1r" => Algorithm::HopRandom(gamma),
            "alg2r" => Algorithm::KmRandom(gamma),
            "sort" | "alg3" => Algorithm::Sorting,
            _ => return Err(format!("unknown algorithm {name:?}")),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gamma() {
            Some(g) => write!(f, "{}(γ={g})", self.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub algorithm: String,
    pub gamma: Option<f64>,
    /// Integral γ the run actually used (drawn for the randomized wrappers).
    pub gamma_used: Option<u32>,
    pub seed: Option<u64>,
    pub trace: Vec<VertexId>,
    pub steps: Vec<Step>,
    pub cost: usize,
    pub opt_size: usize,
    pub errors: ErrorReport,
    pub guarantee_exact: bool,
}

impl RunResult {
    pub fn ratio(&self) -> f64 {
        if self.opt_size == 0 {
            1.0
        } else {
            self.cost as f64 / self.opt_size as f64
        }
    }

    pub fn phase_vertices(&self, phase: Phase) -> Vec<VertexId> {
        self.steps
            .iter()
            .filter(|s| s.phase == phase)
            .map(|s| s.vertex)
            .collect()
    }
}

fn check_gamma(gamma: u32) -> Result<(), AlgError> {
    if gamma < 2 {
        return Err(AlgError::InvalidGamma(gamma as f64));
    }
    Ok(())
}

/// Query a cover of the vertex-cover instance, then close. Repeats while
/// something stays unsolved, tagging extra rounds as [`Phase::Fallback`].
pub fn cover_and_close(
    s: &mut QuerySession,
    rec: &mut Recorder,
    backend: VcBackend,
) -> Result<(), AlgError> {
    let mut phase = (Phase::Cover, Phase::FinalClosure);
    loop {
        let g = vertex_cover_instance(s);
        for v in backend.solve(&g)?.cover {
            if !s.is_queried(v) {
                rec.ask(s, v, phase.0)?;
            }
        }
        rec.close(s, phase.1)?;
        if s.is_solved().is_some() {
            return Ok(());
        }
        phase = (Phase::Fallback, Phase::Fallback);
    }
}

/// Offline optimum on a session backed by the instance's own weights.
pub fn offline_session(
    s: &mut QuerySession,
    weights: &[Rational],
    rec: &mut Recorder,
    backend: VcBackend,
) -> Result<(), AlgError> {
    loop {
        let m = mandatory_set(s.hypergraph(), s.current_intervals(), weights);
        if m.is_empty() {
            break;
        }
        for v in m {
            rec.ask(s, v, Phase::Mandatory)?;
        }
    }
    cover_and_close(s, rec, backend)
}

/// A minimum feasible query set computed with full knowledge of the weights.
pub fn optimal_query_set(instance: &Instance) -> Result<Vec<VertexId>, AlgError> {
    let mut s = QuerySession::new(instance);
    let mut rec = Recorder::default();
    offline_session(
        &mut s,
        instance.true_weights(),
        &mut rec,
        VcBackend::default(),
    )?;
    Ok(s.trace().to_vec())
}

pub fn witness_session(s: &mut QuerySession, rec: &mut Recorder) -> Result<(), AlgError> {
    rec.close(s, Phase::Closure)?;
    while let Some(e) = (0..s.hypergraph().edges().len()).find(|&e| !s.edge_solved(e)) {
        rec.round += 1;
        let v = crate::structure::leftmost(s, e);
        let u = s
            .hypergraph()
            .edge(e)
            .iter()
            .copied()
            .find(|&u| u != v && s.interval(u).is_open() && s.interval(u).intersects(s.interval(v)))
            .ok_or_else(|| {
                AlgError::Precondition("unsolved hyperedge without a witness pair".into())
            })?;
        rec.ask(s, v, Phase::Witness)?;
        rec.ask(s, u, Phase::Witness)?;
        rec.close(s, Phase::Closure)?;
    }
    Ok(())
}

/// First enforcement triple (u, v, w) in (u, v, w) id order.
pub fn find_triple(s: &QuerySession) -> Option<(VertexId, VertexId, VertexId)> {
    let n = s.vertex_count();
    for u in 0..n {
        for v in 0..n {
            if !enforces(s, u, v) {
                continue;
            }
            if let Some(w) = (0..n)
                .find(|&w| w != u && w != v && s.interval(w).is_open() && is_witness_pair(s, u, w))
            {
                return Some((u, v, w));
            }
        }
    }
    None
}

pub fn find_enforcement(s: &QuerySession) -> Option<(VertexId, VertexId)> {
    let n = s.vertex_count();
    (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .find(|&(u, v)| enforces(s, u, v))
}

pub fn hop_session(
    s: &mut QuerySession,
    gamma: u32,
    rec: &mut Recorder,
    backend: VcBackend,
) -> Result<(), AlgError> {
    check_gamma(gamma)?;
    rec.close(s, Phase::Closure)?;
    loop {
        rec.round += 1;
        let before = s.cost();
        let mut p = prediction_mandatory_set(s);
        let mut count = 0;
        while count + 2 < gamma {
            let Some(&v) = p.first() else { break };
            rec.ask(s, v, Phase::Predicted)?;
            count += 1;
            rec.close(s, Phase::Closure)?;
            p = prediction_mandatory_set(s);
        }
        if let Some((u, v, w)) = find_triple(s) {
            let wu = rec.ask(s, u, Phase::Witness)?;
            rec.ask(s, w, Phase::Witness)?;
            if !s.is_queried(v) && s.interval(v).contains(&wu) {
                rec.ask(s, v, Phase::Enforced)?;
            }
        } else if let Some((_, v)) = find_enforcement(s) {
            rec.ask(s, v, Phase::EnforcedOnly)?;
        }
        rec.close(s, Phase::Closure)?;
        if prediction_mandatory_set(s).is_empty() || s.cost() == before {
            break;
        }
    }
    cover_and_close(s, rec, backend)
}

pub fn km_session(
    s: &mut QuerySession,
    predicted: &BTreeSet<VertexId>,
    gamma: u32,
    rec: &mut Recorder,
    backend: VcBackend,
) -> Result<(), AlgError> {
    check_gamma(gamma)?;
    let n = s.vertex_count();
    let mut p: BTreeSet<VertexId> = predicted
        .iter()
        .copied()
        .filter(|&v| v < n && s.interval(v).is_open())
        .collect();
    loop {
        let pair = p.iter().find_map(|&a| {
            (0..n)
                .find(|&b| b != a && s.interval(b).is_open() && is_witness_pair(s, a, b))
                .map(|b| (a, b))
        });
        let Some((a, b)) = pair else { break };
        rec.round += 1;
        let size = (gamma - 1) as usize;
        if p.len() >= size {
            let mut batch = vec![a];
            batch.extend(p.iter().copied().filter(|&x| x != a).take(size - 1));
            if !batch.contains(&b) {
                batch.push(b);
            }
            for &v in &batch {
                rec.ask(s, v, Phase::Batch)?;
                p.remove(&v);
            }
            for v in rec.close(s, Phase::Closure)? {
                p.remove(&v);
            }
        } else {
            for v in std::mem::take(&mut p) {
                rec.ask(s, v, Phase::Remainder)?;
            }
        }
    }
    rec.close(s, Phase::Closure)?;
    cover_and_close(s, rec, backend)
}

/// γ′ = ⌈γ⌉ with probability equal to the fractional part of γ, else ⌊γ⌋.
pub fn draw_gamma(gamma: f64, rng: &mut impl Rng) -> Result<u32, AlgError> {
    if gamma.is_nan() || gamma < 2.0 || !gamma.is_finite() {
        return Err(AlgError::InvalidGamma(gamma));
    }
    let floor = gamma.floor();
    let frac = gamma - floor;
    if frac == 0.0 {
        return Ok(floor as u32);
    }
    Ok(if rng.gen_bool(frac) {
        floor as u32 + 1
    } else {
        floor as u32
    })
}

/// Options shared by every run.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub backend: VcBackend,
    pub seed: u64,
}

/// Runs an algorithm on a static instance.
pub fn run(alg: Algorithm, instance: &Instance, opts: RunOptions) -> Result<RunResult, AlgError> {
    let oracle = crate::model::StaticOracle::new(instance.true_weights().to_vec());
    let weights = instance.true_weights().to_vec();
    run_inner(
        alg,
        instance.skeleton(),
        Box::new(oracle),
        Some(&weights),
        opts,
    )
}

/// Runs an algorithm against an arbitrary weight oracle such as an adversary.
pub fn run_with_oracle<'a>(
    alg: Algorithm,
    skeleton: &'a Skeleton,
    oracle: Box<dyn WeightOracle + 'a>,
    opts: RunOptions,
) -> Result<RunResult, AlgError> {
    run_inner(alg, skeleton, oracle, None, opts)
}

fn run_inner<'a>(
    alg: Algorithm,
    skeleton: &'a Skeleton,
    oracle: Box<dyn WeightOracle + 'a>,
    weights: Option<&[Rational]>,
    opts: RunOptions,
) -> Result<RunResult, AlgError> {
    let mut s = QuerySession::with_oracle(skeleton, oracle);
    let mut rec = Recorder::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut gamma_used = None;
    let mut uses_cover = true;
    match alg {
        Algorithm::Offline => {
            let w = weights.ok_or(AlgError::NeedsRealization("offline"))?;
            offline_session(&mut s, w, &mut rec, opts.backend)?;
        }
        Algorithm::Witness => {
            uses_cover = false;
            witness_session(&mut s, &mut rec)?;
        }
        Algorithm::Hop(g) => {
            gamma_used = Some(g);
            hop_session(&mut s, g, &mut rec, opts.backend)?;
        }
        Algorithm::Km(g) => {
            gamma_used = Some(g);
            let p = prediction_mandatory_set(&s);
            km_session(&mut s, &p, g, &mut rec, opts.backend)?;
        }
        Algorithm::HopRandom(g) => {
            let g = draw_gamma(g, &mut rng)?;
            gamma_used = Some(g);
            hop_session(&mut s, g, &mut rec, opts.backend)?;
        }
        Algorithm::KmRandom(g) => {
            let g = draw_gamma(g, &mut rng)?;
            gamma_used = Some(g);
            let p = prediction_mandatory_set(&s);
            km_session(&mut s, &p, g, &mut rec, opts.backend)?;
        }
        Algorithm::Sorting => {
            uses_cover = false;
            crate::sorting::sorting_session(&mut s, &mut rec)?;
        }
    }
    let seeded = matches!(alg, Algorithm::HopRandom(_) | Algorithm::KmRandom(_));
    finish(
        alg,
        &s,
        rec,
        gamma_used,
        seeded.then_some(opts.seed),
        !uses_cover || opts.backend.is_exact(),
    )
}

fn finish(
    alg: Algorithm,
    s: &QuerySession,
    rec: Recorder,
    gamma_used: Option<u32>,
    seed: Option<u64>,
    guarantee_exact: bool,
) -> Result<RunResult, AlgError> {
    if s.is_solved().is_none() {
        return Err(AlgError::Precondition(format!(
            "{alg} stopped before solving"
        )));
    }
    let committed = s.committed_instance()?;
    let opt_size = optimal_query_set(&committed)?.len();
    Ok(RunResult {
        algorithm: alg.name().to_string(),
        gamma: alg.gamma(),
        gamma_used,
        seed,
        trace: s.trace().to_vec(),
        steps: rec.steps,
        cost: s.cost(),
        opt_size,
        errors: error_report(&committed),
        guarantee_exact,
    })
}

pub(crate) fn finish_sorting(s: &QuerySession, rec: Recorder) -> Result<RunResult, AlgError> {
    finish(Algorithm::Sorting, s, rec, None, None, true)
}

/// Algorithm 2 driven by a predicted mandatory set instead of weights.
pub fn alg_km_with_set(
    instance: &Instance,
    predicted: &BTreeSet<VertexId>,
    gamma: u32,
    backend: VcBackend,
) -> Result<RunResult, AlgError> {
    let mut s = QuerySession::new(instance);
    let mut rec = Recorder::default();
    km_session(&mut s, predicted, gamma, &mut rec, backend)?;
    let mut r = finish(
        Algorithm::Km(gamma),
        &s,
        rec,
        Some(gamma),
        None,
        backend.is_exact(),
    )?;
    let real = &r.errors.real_mandatory;
    r.errors.k_mandatory = predicted.symmetric_difference(real).count();
    r.errors.pred_mandatory = predicted.clone();
    Ok(r)
}

pub fn offline_optimal(instance: &Instance) -> Result<RunResult, AlgError> {
    run(Algorithm::Offline, instance, RunOptions::default())
}

pub fn witness_baseline(instance: &Instance) -> Result<RunResult, AlgError> {
    run(Algorithm::Witness, instance, RunOptions::default())
}

pub fn alg_hop(instance: &Instance, gamma: u32) -> Result<RunResult, AlgError> {
    run(Algorithm::Hop(gamma), instance, RunOptions::default())
}

pub fn alg_km(instance: &Instance, gamma: u32) -> Result<RunResult, AlgError> {
    run(Algorithm::Km(gamma), instance, RunOptions::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Hop,
    Km,
}

pub fn alg_randomized(
    instance: &Instance,
    gamma: f64,
    flavor: Flavor,
    seed: u64,
) -> Result<RunResult, AlgError> {
    let alg = match flavor {
        Flavor::Hop => Algorithm::HopRandom(gamma),
        Flavor::Km => Algorithm::KmRandom(gamma),
    };
    run(
        alg,
        instance,
        RunOptions {
            seed,
            ..RunOptions::default()
        },
    )
}

/// min{(1 + 1/γ)(opt + k_h), γ·opt}
pub fn hop_bound(gamma: u32, opt: usize, k_hop: usize) -> Rational {
    let g = gamma as i64;
    let a = q(g + 1, g) * q((opt + k_hop) as i64, 1);
    a.min(q(g * opt as i64, 1))
}

/// min{(1 + 1/(γ−1))(opt + k_M), γ·opt}
pub fn km_bound(gamma: u32, opt: usize, k_mand: usize) -> Rational {
    let g = gamma as i64;
    let a = q(g, g - 1) * q((opt + k_mand) as i64, 1);
    a.min(q(g * opt as i64, 1))
}

/// min{opt + min(k_#, k_M, k_h), 2·opt}
pub fn sorting_bound(opt: usize, e: &ErrorReport) -> Rational {
    let k = e.k_number.min(e.k_mandatory).min(e.k_hop);
    q((opt + k).min(2 * opt) as i64, 1)
}

/// Worst-case bound of a finished run, evaluated with the γ it used.
pub fn run_bound(r: &RunResult) -> Rational {
    let opt = r.opt_size;
    match r.algorithm.as_str() {
        "offline" => q(opt as i64, 1),
        "witness" => q(2 * opt as i64, 1),
        "alg1" | "alg1r" => hop_bound(r.gamma_used.unwrap_or(2), opt, r.errors.k_hop),
        "alg2" | "alg2r" => km_bound(r.gamma_used.unwrap_or(2), opt, r.errors.k_mandatory),
        _ => sorting_bound(opt, &r.errors),
    }
}

/// Additive term ξ of the randomized bounds.
pub fn xi(gamma: f64, flavor: Flavor) -> f64 {
    let fl = gamma.floor();
    let frac = gamma - fl;
    if frac == 0.0 {
        return 0.0;
    }
    match flavor {
        Flavor::Km => frac * (1.0 - frac) / ((gamma - 1.0) * fl * (fl - 1.0)),
        Flavor::Hop => frac * (1.0 - frac) / (gamma * fl * (fl + 1.0)),
    }
}

/// Expected-cost bound of the randomized wrappers.
pub fn randomized_bound(gamma: f64, flavor: Flavor, opt: usize, k: usize) -> f64 {
    let (opt, k) = (opt as f64, k as f64);
    let lead = match flavor {
        Flavor::Km => 1.0 + 1.0 / (gamma - 1.0),
        Flavor::Hop => 1.0 + 1.0 / gamma,
    };
    ((lead + xi(gamma, flavor)) * (opt + k)).min(gamma * opt)
}
