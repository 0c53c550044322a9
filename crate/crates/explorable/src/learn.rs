//! Learning the prediction-mandatory set from sampled realizations, and the
//! finite candidate set for predicted weights.

use std::collections::BTreeSet;

use rand::Rng;
use thiserror::Error;

use crate::model::{
    format_rational, parse_entries, parse_rational, Hypergraph, Instance, InstanceFile, Interval,
    Kind, ModelError, Rational, Skeleton, VertexEntry, VertexId,
};
use crate::structure::mandatory_set;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("the sample set is empty")]
    EmptySampleSet,
    #[error("sample {sample}: weight of vertex {vertex} outside its interval")]
    SampleOutsideInterval { sample: usize, vertex: VertexId },
    #[error("sample {0} has the wrong length")]
    SampleLength(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSampleSet {
    kind: Kind,
    hypergraph: Hypergraph,
    intervals: Vec<Interval>,
    samples: Vec<Vec<Rational>>,
}

impl WeightSampleSet {
    pub fn new(skeleton: &Skeleton, samples: Vec<Vec<Rational>>) -> Result<Self, LearnError> {
        let n = skeleton.vertex_count();
        for (j, s) in samples.iter().enumerate() {
            if s.len() != n {
                return Err(LearnError::SampleLength(j));
            }
            if let Some(v) = (0..n).find(|&v| !skeleton.intervals()[v].contains(&s[v])) {
                return Err(LearnError::SampleOutsideInterval {
                    sample: j,
                    vertex: v,
                });
            }
        }
        Ok(WeightSampleSet {
            kind: skeleton.kind(),
            hypergraph: skeleton.hypergraph().clone(),
            intervals: skeleton.intervals().to_vec(),
            samples,
        })
    }

    pub fn samples(&self) -> &[Vec<Rational>] {
        &self.samples
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    /// Mandatory set of the instance realized by sample `j`.
    pub fn mandatory_of(&self, j: usize) -> BTreeSet<VertexId> {
        mandatory_set(&self.hypergraph, &self.intervals, &self.samples[j])
    }

    pub fn to_json(&self) -> String {
        let vertices = self
            .intervals
            .iter()
            .enumerate()
            .map(|(v, iv)| VertexEntry::from_parts(v, iv, None, None))
            .collect();
        let file = InstanceFile {
            kind: self.kind,
            vertex_count: self.intervals.len(),
            vertices,
            hyperedges: match self.kind {
                Kind::Sorting => None,
                Kind::Orientation => Some(self.hypergraph.edges().to_vec()),
            },
            samples: Some(
                self.samples
                    .iter()
                    .map(|s| s.iter().map(format_rational).collect())
                    .collect(),
            ),
        };
        serde_json::to_string_pretty(&file).expect("sample set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LearnError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        let intervals = parse_entries(&file)?;
        let preds = intervals.iter().map(Interval::midpoint).collect();
        let skeleton = Skeleton::new(file.kind, file.hyperedges.clone(), intervals, preds)?;
        let samples = file
            .samples
            .as_deref()
            .unwrap_or_default()
            .iter()
            .map(|s| {
                s.iter()
                    .map(|x| parse_rational(x))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        WeightSampleSet::new(&skeleton, samples)
    }
}

/// Vertices mandatory in at least half of the samples.
pub fn erm_mandatory_set(set: &WeightSampleSet) -> Result<BTreeSet<VertexId>, LearnError> {
    let m = set.samples.len();
    if m == 0 {
        return Err(LearnError::EmptySampleSet);
    }
    let mut p = vec![0usize; set.intervals.len()];
    for j in 0..m {
        for v in set.mandatory_of(j) {
            p[v] += 1;
        }
    }
    Ok((0..p.len()).filter(|&v| m - p[v] <= p[v]).collect())
}

/// Mean symmetric difference between `predicted` and each sample's
/// mandatory set.
pub fn empirical_km(predicted: &BTreeSet<VertexId>, set: &WeightSampleSet) -> Rational {
    let m = set.samples.len();
    if m == 0 {
        return Rational::from_integer(0);
    }
    let total: usize = (0..m)
        .map(|j| set.mandatory_of(j).symmetric_difference(predicted).count())
        .sum();
    Rational::new(total as i64, m as i64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    /// Limits of other intervals strictly inside I_v, ascending.
    pub limits: Vec<Vec<Rational>>,
    /// Midpoints of the gaps between consecutive limits and the endpoints.
    pub midpoints: Vec<Vec<Rational>>,
}

impl CandidateSet {
    /// Limits followed by gap midpoints.
    pub fn candidates(&self, v: VertexId) -> Vec<Rational> {
        self.limits[v]
            .iter()
            .chain(&self.midpoints[v])
            .copied()
            .collect()
    }

    /// The candidate standing in for `x` at vertex `v`: `x` itself when it
    /// is a limit, otherwise the midpoint of its gap.
    pub fn snap(&self, v: VertexId, x: Rational) -> Rational {
        let limits = &self.limits[v];
        if limits.contains(&x) {
            return x;
        }
        let gap = limits.iter().filter(|&&b| b < x).count();
        self.midpoints[v][gap]
    }
}

pub fn discretize_candidates(intervals: &[Interval]) -> CandidateSet {
    let two = Rational::from_integer(2);
    let mut limits = Vec::with_capacity(intervals.len());
    let mut midpoints = Vec::with_capacity(intervals.len());
    for (v, iv) in intervals.iter().enumerate() {
        let inside: BTreeSet<Rational> = intervals
            .iter()
            .enumerate()
            .filter(|&(u, _)| u != v)
            .flat_map(|(_, o)| [o.lower(), o.upper()])
            .filter(|x| iv.contains(x))
            .collect();
        let inside: Vec<Rational> = inside.into_iter().collect();
        let mut bounds = vec![iv.lower()];
        bounds.extend(&inside);
        bounds.push(iv.upper());
        midpoints.push(bounds.windows(2).map(|w| (w[0] + w[1]) / two).collect());
        limits.push(inside);
    }
    CandidateSet { limits, midpoints }
}

pub fn discretize_instance(instance: &Instance) -> CandidateSet {
    discretize_candidates(instance.intervals())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleDistribution {
    /// Uniform over the seven interior points of an eight-step grid.
    UniformGrid,
    /// Always the predicted weight.
    PointMass,
    /// One eighth in from either endpoint, each with probability one half.
    TwoPoint,
}

pub fn draw_samples(
    skeleton: &Skeleton,
    dists: &[SampleDistribution],
    m: usize,
    rng: &mut impl Rng,
) -> Result<WeightSampleSet, LearnError> {
    let grid = |iv: &Interval, k: i64| iv.lower() + (iv.upper() - iv.lower()) * Rational::new(k, 8);
    let samples = (0..m)
        .map(|_| {
            skeleton
                .intervals()
                .iter()
                .enumerate()
                .map(|(v, iv)| match (iv, dists[v % dists.len()]) {
                    (Interval::Trivial(x), _) => *x,
                    (_, SampleDistribution::UniformGrid) => grid(iv, rng.gen_range(1..8)),
                    (_, SampleDistribution::PointMass) => skeleton.predictions()[v],
                    (_, SampleDistribution::TwoPoint) => {
                        grid(iv, if rng.gen_bool(0.5) { 1 } else { 7 })
                    }
                })
                .collect()
        })
        .collect();
    WeightSampleSet::new(skeleton, samples)
}
