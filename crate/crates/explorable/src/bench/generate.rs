//! Seeded random instances and the vertex-cover reduction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::errors::passes_limit;
use crate::model::{q, Instance, Interval, Kind, ModelError, Rational, Skeleton, VertexId};

/// Grid resolution of generated weights.
pub const GRID: i64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "model", content = "fraction")]
pub enum Corruption {
    None,
    /// Re-draws the prediction of this fraction of vertices across a limit.
    Flip(f64),
    /// Every prediction maximizes its own hop count.
    Adversarial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub kind: Kind,
    pub n: usize,
    /// Hyperedge count (orientation only).
    pub edges: usize,
    pub max_edge_size: usize,
    /// Lower limits are drawn from 0..span; 0 picks a default from n.
    pub span: i64,
    pub max_len: i64,
    pub corruption: Corruption,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn orientation(n: usize, edges: usize, corruption: Corruption, seed: u64) -> Self {
        GeneratorConfig {
            kind: Kind::Orientation,
            n,
            edges,
            max_edge_size: 4,
            span: 0,
            max_len: 4,
            corruption,
            seed,
        }
    }

    pub fn sorting(n: usize, corruption: Corruption, seed: u64) -> Self {
        GeneratorConfig {
            kind: Kind::Sorting,
            n,
            edges: 0,
            max_edge_size: 2,
            span: 0,
            max_len: 3,
            corruption,
            seed,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("infeasible generator config: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Grid points strictly inside an integer-ended interval.
fn grid_points(iv: &Interval) -> Vec<Rational> {
    let (l, u) = (iv.lower(), iv.upper());
    let lo = (l * GRID).to_integer();
    let hi = (u * GRID).to_integer();
    (lo + 1..hi).map(|k| q(k, GRID)).collect()
}

pub fn gen_random(config: &GeneratorConfig) -> Result<Instance, GenError> {
    let n = config.n;
    if n == 0 {
        return Err(GenError::Infeasible("n must be positive".into()));
    }
    if config.kind == Kind::Orientation && config.edges > 0 && (n < 2 || config.max_edge_size < 2) {
        return Err(GenError::Infeasible("hyperedges need two vertices".into()));
    }
    if config.max_len < 1 {
        return Err(GenError::Infeasible("max_len must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let span = if config.span > 0 {
        config.span
    } else {
        match config.kind {
            Kind::Orientation => 2 * n as i64 / 3 + 2,
            Kind::Sorting => n as i64 + 1,
        }
    };
    let intervals: Vec<Interval> = (0..n)
        .map(|_| {
            let l = rng.gen_range(0..span);
            let len = rng.gen_range(1..=config.max_len);
            Interval::open_ints(l, l + len)
        })
        .collect();
    let weights: Vec<Rational> = intervals
        .iter()
        .map(|iv| *grid_points(iv).choose(&mut rng).expect("grid"))
        .collect();
    let edges = match config.kind {
        Kind::Sorting => None,
        Kind::Orientation => {
            let ids: Vec<VertexId> = (0..n).collect();
            let top = config.max_edge_size.min(n);
            Some(
                (0..config.edges)
                    .map(|_| {
                        let size = rng.gen_range(2..=top);
                        let mut e: Vec<VertexId> =
                            ids.choose_multiple(&mut rng, size).copied().collect();
                        e.sort_unstable();
                        e
                    })
                    .collect(),
            )
        }
    };
    let preds = corrupt(&intervals, &weights, config.corruption, &mut rng);
    let skeleton = Skeleton::new(config.kind, edges, intervals, preds)?;
    Ok(Instance::from_skeleton(skeleton, weights)?)
}

/// Prediction on the other side of some limit inside I_v, if one exists.
fn crossing_prediction(
    intervals: &[Interval],
    v: VertexId,
    w: Rational,
    rng: &mut impl Rng,
) -> Option<Rational> {
    let iv = &intervals[v];
    let mut limits: Vec<Rational> = intervals
        .iter()
        .enumerate()
        .filter(|&(u, _)| u != v)
        .flat_map(|(_, o)| [o.lower(), o.upper()])
        .filter(|x| iv.contains(x) && *x != w)
        .collect();
    limits.sort();
    limits.dedup();
    let b = *limits.choose(rng)?;
    let pts = grid_points(iv);
    let side: Vec<Rational> = if b > w {
        pts.into_iter().filter(|&g| g > b).collect()
    } else {
        pts.into_iter().filter(|&g| g < b).collect()
    };
    side.choose(rng).copied()
}

fn corrupt(
    intervals: &[Interval],
    weights: &[Rational],
    model: Corruption,
    rng: &mut impl Rng,
) -> Vec<Rational> {
    let n = weights.len();
    let mut preds = weights.to_vec();
    match model {
        Corruption::None => {}
        Corruption::Flip(f) => {
            let count = ((f.clamp(0.0, 1.0) * n as f64).round() as usize).min(n);
            let mut ids: Vec<VertexId> = (0..n).collect();
            ids.shuffle(rng);
            for &v in &ids[..count] {
                preds[v] = match crossing_prediction(intervals, v, weights[v], rng) {
                    Some(p) => p,
                    None => {
                        let others: Vec<Rational> = grid_points(&intervals[v])
                            .into_iter()
                            .filter(|&g| g != weights[v])
                            .collect();
                        others.choose(rng).copied().unwrap_or(weights[v])
                    }
                };
            }
        }
        Corruption::Adversarial => {
            for v in 0..n {
                let hops = |p: Rational| {
                    intervals
                        .iter()
                        .enumerate()
                        .filter(|&(u, o)| u != v && passes_limit(p, weights[v], o))
                        .count()
                };
                preds[v] = grid_points(&intervals[v])
                    .into_iter()
                    .max_by_key(|&p| (hops(p), std::cmp::Reverse(p)))
                    .expect("grid");
            }
        }
    }
    preds
}

/// The graph with every edge replaced by a path of three edges. Returns the
/// new vertex count and edge list; new vertices follow the originals, two
/// per edge in input order.
pub fn two_subdivision(n: usize, edges: &[(usize, usize)]) -> (usize, Vec<(usize, usize)>) {
    let mut out = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        let (x, y) = (n + 2 * i, n + 2 * i + 1);
        out.extend([(a, x), (x, y), (y, b)]);
    }
    (n + 2 * edges.len(), out)
}

/// Orientation instance whose optimum equals a minimum vertex cover of the
/// 2-subdivision of the input graph.
pub fn gen_subdivision_reduction(n: usize, edges: &[(usize, usize)]) -> Result<Instance, GenError> {
    let mut seen = std::collections::BTreeSet::new();
    for &(a, b) in edges {
        if a == b || a >= n || b >= n || !seen.insert((a.min(b), a.max(b))) {
            return Err(GenError::Infeasible(format!(
                "not a simple graph edge: ({a}, {b})"
            )));
        }
    }
    let mut intervals: Vec<Interval> = (0..n as i64)
        .map(|i| Interval::open_ints(10 * i, 10 * i + 3))
        .collect();
    let mut weights: Vec<Rational> = (0..n as i64).map(|i| q(20 * i + 3, 2)).collect();
    for &(a, b) in edges {
        let (u, v) = (a.min(b) as i64, a.max(b) as i64);
        intervals.push(Interval::open_ints(10 * u + 2, 10 * u + 5));
        weights.push(q(10 * u + 3, 1));
        intervals.push(Interval::open_ints(10 * u + 4, 10 * v + 1));
        weights.push(q(10 * v, 1));
    }
    let ordered: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let (_, sub) = two_subdivision(n, &ordered);
    let sub_edges = sub.into_iter().map(|(x, y)| vec![x, y]).collect();
    let skeleton = Skeleton::new(
        Kind::Orientation,
        Some(sub_edges),
        intervals,
        weights.clone(),
    )?;
    Ok(Instance::from_skeleton(skeleton, weights)?)
}
