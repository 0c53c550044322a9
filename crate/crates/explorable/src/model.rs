//! Intervals, instances, the query session and solvedness.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = num_rational::Ratio<i64>;
pub type VertexId = usize;

/// Largest vertex count accepted by the subset-enumeration oracle.
pub const BRUTE_FORCE_LIMIT: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("vertex {0}: true weight outside its interval")]
    WeightOutsideInterval(VertexId),
    #[error("vertex {0}: predicted weight outside its interval")]
    PredictionOutsideInterval(VertexId),
    #[error("vertex {0}: open interval needs lower < upper")]
    DegenerateInterval(VertexId),
    #[error("hyperedge {0} has fewer than 2 distinct vertices")]
    SmallHyperedge(usize),
    #[error("hyperedge {edge} references vertex {vertex} out of range")]
    VertexOutOfRange { edge: usize, vertex: VertexId },
    #[error("sorting instances derive their edges; explicit hyperedges were given")]
    SortingWithEdges,
    #[error("vertex records are not numbered 0..n in order")]
    BadVertexIds,
    #[error("vertex {0} was already queried")]
    AlreadyQueried(VertexId),
    #[error("vertex {0} has a trivial interval and cannot be queried")]
    NotQueryable(VertexId),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(VertexId),
    #[error("weight oracle answered outside the interval of vertex {0}")]
    OracleOutOfRange(VertexId),
    #[error("{n} vertices exceed the brute-force limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn parse_rational(s: &str) -> Result<Rational, ModelError> {
    let s = s.trim();
    let bad = || ModelError::Parse(format!("not a number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    if frac_part.len() > 15 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if neg {
        numer = -numer;
    }
    let denom = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
    Ok(Rational::new(numer, denom))
}

/// Exact decimal when the denominator divides a power of ten, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    let d = *r.denom();
    if d == 1 {
        return r.numer().to_string();
    }
    let mut rest = d;
    let mut k = 0u32;
    while rest % 10 == 0 {
        rest /= 10;
        k += 1;
    }
    while rest % 2 == 0 {
        rest /= 2;
        k += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        k += 1;
    }
    if rest != 1 || k > 18 {
        return format!("{}/{}", r.numer(), d);
    }
    let scale = 10i128.pow(k) / d as i128;
    let scaled = (*r.numer() as i128) * scale;
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.unsigned_abs();
    let p = 10u128.pow(k);
    let frac = format!("{:0width$}", abs % p, width = k as usize);
    format!("{sign}{}.{}", abs / p, frac.trim_end_matches('0'))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interval {
    Open { lower: Rational, upper: Rational },
    Trivial(Rational),
}

impl Interval {
    pub fn open(lower: Rational, upper: Rational) -> Self {
        Interval::Open { lower, upper }
    }

    pub fn open_ints(lower: i64, upper: i64) -> Self {
        Interval::open(Rational::from_integer(lower), Rational::from_integer(upper))
    }

    pub fn lower(&self) -> Rational {
        match *self {
            Interval::Open { lower, .. } => lower,
            Interval::Trivial(x) => x,
        }
    }

    pub fn upper(&self) -> Rational {
        match *self {
            Interval::Open { upper, .. } => upper,
            Interval::Trivial(x) => x,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Interval::Trivial(_))
    }

    pub fn is_open(&self) -> bool {
        !self.is_trivial()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Interval::Open { lower, upper } => lower < x && x < upper,
            Interval::Trivial(v) => v == x,
        }
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        match (self, other) {
            (Interval::Open { lower: a, upper: b }, Interval::Open { lower: c, upper: d }) => {
                a < d && c < b
            }
            (Interval::Open { .. }, Interval::Trivial(x)) => self.contains(x),
            (Interval::Trivial(x), Interval::Open { .. }) => other.contains(x),
            (Interval::Trivial(x), Interval::Trivial(y)) => x == y,
        }
    }

    /// `self ⊆ other` for open intervals.
    pub fn nested_in(&self, other: &Interval) -> bool {
        match (self, other) {
            (Interval::Open { lower: a, upper: b }, Interval::Open { lower: c, upper: d }) => {
                c <= a && b <= d
            }
            (Interval::Trivial(x), _) => other.contains(x),
            _ => false,
        }
    }

    pub fn midpoint(&self) -> Rational {
        (self.lower() + self.upper()) / Rational::from_integer(2)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Open { lower, upper } => {
                write!(
                    f,
                    "({}, {})",
                    format_rational(lower),
                    format_rational(upper)
                )
            }
            Interval::Trivial(x) => write!(f, "[{}]", format_rational(x)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Orientation,
    Sorting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: Vec<Vec<VertexId>>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(vertex_count: usize, edges: Vec<Vec<VertexId>>) -> Result<Self, ModelError> {
        let mut clean = Vec::with_capacity(edges.len());
        for (i, mut e) in edges.into_iter().enumerate() {
            if let Some(&v) = e.iter().find(|&&v| v >= vertex_count) {
                return Err(ModelError::VertexOutOfRange { edge: i, vertex: v });
            }
            e.sort_unstable();
            e.dedup();
            if e.len() < 2 {
                return Err(ModelError::SmallHyperedge(i));
            }
            clean.push(e);
        }
        let mut incidence = vec![Vec::new(); vertex_count];
        for (i, e) in clean.iter().enumerate() {
            for &v in e {
                incidence[v].push(i);
            }
        }
        Ok(Hypergraph {
            vertex_count,
            edges: clean,
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &[VertexId] {
        &self.edges[i]
    }

    /// Indices of the hyperedges containing `v`.
    pub fn incident(&self, v: VertexId) -> &[usize] {
        &self.incidence[v]
    }

    pub fn shared_edges(&self, a: VertexId, b: VertexId) -> impl Iterator<Item = usize> + '_ {
        self.incidence[a]
            .iter()
            .copied()
            .filter(move |&e| self.edges[e].binary_search(&b).is_ok())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRecord {
    pub interval: Interval,
    pub true_weight: Rational,
    pub predicted: Rational,
}

/// Everything an online algorithm may see: hypergraph, intervals and predictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    kind: Kind,
    hypergraph: Hypergraph,
    intervals: Vec<Interval>,
    predictions: Vec<Rational>,
}

impl Skeleton {
    pub fn new(
        kind: Kind,
        edges: Option<Vec<Vec<VertexId>>>,
        intervals: Vec<Interval>,
        predictions: Vec<Rational>,
    ) -> Result<Self, ModelError> {
        assert_eq!(
            intervals.len(),
            predictions.len(),
            "one prediction per interval"
        );
        for (v, iv) in intervals.iter().enumerate() {
            if let Interval::Open { lower, upper } = iv {
                if lower >= upper {
                    return Err(ModelError::DegenerateInterval(v));
                }
            }
            if !iv.contains(&predictions[v]) {
                return Err(ModelError::PredictionOutsideInterval(v));
            }
        }
        let n = intervals.len();
        let edges = match kind {
            Kind::Sorting => {
                if edges.is_some_and(|e| !e.is_empty()) {
                    return Err(ModelError::SortingWithEdges);
                }
                sorting_edges(&intervals)
            }
            Kind::Orientation => edges.unwrap_or_default(),
        };
        Ok(Skeleton {
            kind,
            hypergraph: Hypergraph::new(n, edges)?,
            intervals,
            predictions,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn predictions(&self) -> &[Rational] {
        &self.predictions
    }

    pub fn vertex_count(&self) -> usize {
        self.intervals.len()
    }

    pub fn with_predictions(&self, predictions: Vec<Rational>) -> Result<Skeleton, ModelError> {
        let edges = match self.kind {
            Kind::Sorting => None,
            Kind::Orientation => Some(self.hypergraph.edges.clone()),
        };
        Skeleton::new(self.kind, edges, self.intervals.clone(), predictions)
    }
}

/// Pairs of vertices whose intervals intersect.
pub fn sorting_edges(intervals: &[Interval]) -> Vec<Vec<VertexId>> {
    let mut edges = Vec::new();
    for a in 0..intervals.len() {
        for b in a + 1..intervals.len() {
            if intervals[a].intersects(&intervals[b]) {
                edges.push(vec![a, b]);
            }
        }
    }
    edges
}

/// A skeleton together with the hidden precise weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    skeleton: Skeleton,
    weights: Vec<Rational>,
}

impl Instance {
    pub fn build(
        kind: Kind,
        edges: Option<Vec<Vec<VertexId>>>,
        records: Vec<VertexRecord>,
    ) -> Result<Self, ModelError> {
        let intervals: Vec<_> = records.iter().map(|r| r.interval).collect();
        let predictions: Vec<_> = records.iter().map(|r| r.predicted).collect();
        let weights: Vec<_> = records.iter().map(|r| r.true_weight).collect();
        let skeleton = Skeleton::new(kind, edges, intervals, predictions)?;
        Instance::from_skeleton(skeleton, weights)
    }

    pub fn from_skeleton(skeleton: Skeleton, weights: Vec<Rational>) -> Result<Self, ModelError> {
        assert_eq!(
            skeleton.vertex_count(),
            weights.len(),
            "one weight per vertex"
        );
        for (v, w) in weights.iter().enumerate() {
            if !skeleton.intervals[v].contains(w) {
                return Err(ModelError::WeightOutsideInterval(v));
            }
        }
        Ok(Instance { skeleton, weights })
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn kind(&self) -> Kind {
        self.skeleton.kind
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.skeleton.hypergraph
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.skeleton.intervals
    }

    pub fn predictions(&self) -> &[Rational] {
        &self.skeleton.predictions
    }

    pub fn vertex_count(&self) -> usize {
        self.skeleton.vertex_count()
    }

    /// The hidden realization. Offline computations only; online algorithms
    /// work on a [`QuerySession`] and never see this.
    pub fn true_weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn with_predictions(&self, predictions: Vec<Rational>) -> Result<Instance, ModelError> {
        Instance::from_skeleton(
            self.skeleton.with_predictions(predictions)?,
            self.weights.clone(),
        )
    }
}

/// Source of precise weights for a session. Static instances answer from a
/// fixed vector; adversaries decide at query time.
pub trait WeightOracle {
    fn reveal(&mut self, v: VertexId, queried: &[bool]) -> Rational;
    /// A full realization consistent with every answer given so far.
    fn realization(&self) -> Vec<Rational>;
}

pub struct StaticOracle {
    weights: Vec<Rational>,
}

impl StaticOracle {
    pub fn new(weights: Vec<Rational>) -> Self {
        StaticOracle { weights }
    }
}

impl WeightOracle for StaticOracle {
    fn reveal(&mut self, v: VertexId, _queried: &[bool]) -> Rational {
        self.weights[v]
    }

    fn realization(&self) -> Vec<Rational> {
        self.weights.clone()
    }
}

/// Adaptive query state of one algorithm run.
pub struct QuerySession<'a> {
    skeleton: &'a Skeleton,
    oracle: Box<dyn WeightOracle + 'a>,
    current: Vec<Interval>,
    queried: Vec<bool>,
    trace: Vec<VertexId>,
}

impl<'a> QuerySession<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        QuerySession::with_oracle(
            &instance.skeleton,
            Box::new(StaticOracle::new(instance.weights.clone())),
        )
    }

    pub fn with_oracle(skeleton: &'a Skeleton, oracle: Box<dyn WeightOracle + 'a>) -> Self {
        let n = skeleton.vertex_count();
        QuerySession {
            skeleton,
            oracle,
            current: skeleton.intervals.clone(),
            queried: vec![false; n],
            trace: Vec::new(),
        }
    }

    pub fn query(&mut self, v: VertexId) -> Result<Rational, ModelError> {
        if v >= self.current.len() {
            return Err(ModelError::NoSuchVertex(v));
        }
        if self.queried[v] {
            return Err(ModelError::AlreadyQueried(v));
        }
        if self.current[v].is_trivial() {
            return Err(ModelError::NotQueryable(v));
        }
        let w = self.oracle.reveal(v, &self.queried);
        if !self.current[v].contains(&w) {
            return Err(ModelError::OracleOutOfRange(v));
        }
        self.current[v] = Interval::Trivial(w);
        self.queried[v] = true;
        self.trace.push(v);
        Ok(w)
    }

    pub fn skeleton(&self) -> &'a Skeleton {
        self.skeleton
    }

    pub fn hypergraph(&self) -> &'a Hypergraph {
        &self.skeleton.hypergraph
    }

    pub fn vertex_count(&self) -> usize {
        self.current.len()
    }

    pub fn interval(&self, v: VertexId) -> &Interval {
        &self.current[v]
    }

    pub fn current_intervals(&self) -> &[Interval] {
        &self.current
    }

    pub fn predicted(&self, v: VertexId) -> Rational {
        self.skeleton.predictions[v]
    }

    pub fn is_queried(&self, v: VertexId) -> bool {
        self.queried[v]
    }

    /// Weight known for `v`: revealed, or given by a trivial original interval.
    pub fn known_weight(&self, v: VertexId) -> Option<Rational> {
        match self.current[v] {
            Interval::Trivial(x) => Some(x),
            Interval::Open { .. } => None,
        }
    }

    pub fn trace(&self) -> &[VertexId] {
        &self.trace
    }

    pub fn cost(&self) -> usize {
        self.trace.len()
    }

    pub fn provably_precedes(&self, v: VertexId, u: VertexId) -> bool {
        provably_precedes(&self.current, v, u)
    }

    pub fn is_solved(&self) -> Option<Orientation> {
        orientation(self.hypergraph(), &self.current)
    }

    pub fn edge_solved(&self, e: usize) -> bool {
        edge_minimum(&self.current, self.hypergraph().edge(e)).is_some()
    }

    /// Realization committed by the oracle, as a full instance.
    pub fn committed_instance(&self) -> Result<Instance, ModelError> {
        Instance::from_skeleton(self.skeleton.clone(), self.oracle.realization())
    }
}

/// Every realization consistent with `current` puts `v` no later than `u`.
pub fn provably_precedes(current: &[Interval], v: VertexId, u: VertexId) -> bool {
    match (&current[v], &current[u]) {
        (Interval::Trivial(a), Interval::Trivial(b)) => a < b || (a == b && v < u),
        (a, b) => a.upper() <= b.lower(),
    }
}

/// Sort key for "leftmost": lower limit, trivial before open on equal limits.
pub(crate) fn left_key(iv: &Interval) -> (Rational, bool) {
    (iv.lower(), iv.is_open())
}

/// The provable minimum of a hyperedge, if any.
pub fn edge_minimum(current: &[Interval], edge: &[VertexId]) -> Option<VertexId> {
    let cand = *edge.iter().min_by_key(|&&v| (left_key(&current[v]), v))?;
    edge.iter()
        .all(|&u| u == cand || provably_precedes(current, cand, u))
        .then_some(cand)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    pub minima: Vec<VertexId>,
}

pub fn orientation(h: &Hypergraph, current: &[Interval]) -> Option<Orientation> {
    let minima = h
        .edges()
        .iter()
        .map(|e| edge_minimum(current, e))
        .collect::<Option<Vec<_>>>()?;
    Some(Orientation { minima })
}

/// State after querying exactly `q` on the original intervals.
pub fn state_after(instance: &Instance, q: impl IntoIterator<Item = VertexId>) -> Vec<Interval> {
    let mut cur = instance.intervals().to_vec();
    for v in q {
        cur[v] = Interval::Trivial(instance.weights[v]);
    }
    cur
}

pub fn feasible_oracle(instance: &Instance, q: &[VertexId]) -> bool {
    orientation(
        instance.hypergraph(),
        &state_after(instance, q.iter().copied()),
    )
    .is_some()
}

/// Size of a minimum feasible query set by subset enumeration.
pub fn min_feasible_size(instance: &Instance) -> Result<usize, ModelError> {
    Ok(min_feasible_set(instance)?.len())
}

pub fn min_feasible_set(instance: &Instance) -> Result<Vec<VertexId>, ModelError> {
    let open: Vec<VertexId> = (0..instance.vertex_count())
        .filter(|&v| instance.intervals()[v].is_open())
        .collect();
    let k = open.len();
    if k > BRUTE_FORCE_LIMIT {
        return Err(ModelError::TooLarge {
            n: k,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let h = instance.hypergraph();
    let mut cur = instance.intervals().to_vec();
    for size in 0..=k {
        let mut found = None;
        for_each_subset(k, size, &mut |mask| {
            for (i, &v) in open.iter().enumerate() {
                cur[v] = if mask >> i & 1 == 1 {
                    Interval::Trivial(instance.weights[v])
                } else {
                    instance.intervals()[v]
                };
            }
            if orientation(h, &cur).is_some() {
                found = Some(mask);
                return false;
            }
            true
        });
        if let Some(mask) = found {
            return Ok((0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| open[i])
                .collect());
        }
    }
    unreachable!("querying every vertex always solves")
}

/// Calls `f` on every `size`-subset of `0..k` as a bitmask in increasing
/// numeric order, stopping when `f` returns false.
pub fn for_each_subset(k: usize, size: usize, f: &mut dyn FnMut(u64) -> bool) {
    if size > k {
        return;
    }
    if size == 0 {
        f(0);
        return;
    }
    let limit = 1u64 << k;
    let mut mask: u64 = (1u64 << size) - 1;
    while mask < limit {
        if !f(mask) {
            return;
        }
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

// ---- instance file format ----

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub(crate) struct VertexEntry {
    pub id: usize,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none", default)]
    pub lower: Option<String>,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none", default)]
    pub upper: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub what: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct InstanceFile {
    pub kind: Kind,
    pub vertex_count: usize,
    pub vertices: Vec<VertexEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hyperedges: Option<Vec<Vec<VertexId>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<Vec<Vec<String>>>,
}

impl VertexEntry {
    pub(crate) fn from_parts(
        id: usize,
        iv: &Interval,
        w: Option<Rational>,
        what: Option<Rational>,
    ) -> Self {
        let (lower, upper, value) = match iv {
            Interval::Open { lower, upper } => (
                Some(format_rational(lower)),
                Some(format_rational(upper)),
                None,
            ),
            Interval::Trivial(x) => (None, None, Some(format_rational(x))),
        };
        VertexEntry {
            id,
            lower,
            upper,
            value,
            w: w.as_ref().map(format_rational),
            what: what.as_ref().map(format_rational),
        }
    }

    pub(crate) fn interval(&self) -> Result<Interval, ModelError> {
        let opt = |s: &Option<String>| s.as_deref().map(parse_rational).transpose();
        match (opt(&self.lower)?, opt(&self.upper)?, opt(&self.value)?) {
            (Some(l), Some(u), None) => Ok(Interval::open(l, u)),
            (None, None, Some(x)) => Ok(Interval::Trivial(x)),
            _ => Err(ModelError::Parse(format!(
                "vertex {}: need L and U, or value",
                self.id
            ))),
        }
    }
}

pub(crate) fn parse_entries(file: &InstanceFile) -> Result<Vec<Interval>, ModelError> {
    if file.vertices.len() != file.vertex_count
        || file.vertices.iter().enumerate().any(|(i, v)| v.id != i)
    {
        return Err(ModelError::BadVertexIds);
    }
    file.vertices.iter().map(VertexEntry::interval).collect()
}

impl Instance {
    pub fn to_json(&self) -> String {
        let vertices = (0..self.vertex_count())
            .map(|v| {
                VertexEntry::from_parts(
                    v,
                    &self.intervals()[v],
                    Some(self.weights[v]),
                    Some(self.predictions()[v]),
                )
            })
            .collect();
        let file = InstanceFile {
            kind: self.kind(),
            vertex_count: self.vertex_count(),
            vertices,
            hyperedges: match self.kind() {
                Kind::Sorting => None,
                Kind::Orientation => Some(self.hypergraph().edges().to_vec()),
            },
            samples: None,
        };
        serde_json::to_string_pretty(&file).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Instance, ModelError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        let intervals = parse_entries(&file)?;
        let mut records = Vec::with_capacity(intervals.len());
        for (entry, iv) in file.vertices.iter().zip(intervals) {
            let get = |s: &Option<String>| -> Result<Rational, ModelError> {
                match s {
                    Some(s) => parse_rational(s),
                    None => match iv {
                        Interval::Trivial(x) => Ok(x),
                        Interval::Open { .. } => Err(ModelError::Parse(format!(
                            "vertex {}: missing w or what",
                            entry.id
                        ))),
                    },
                }
            };
            records.push(VertexRecord {
                interval: iv,
                true_weight: get(&entry.w)?,
                predicted: get(&entry.what)?,
            });
        }
        Instance::build(file.kind, file.hyperedges, records)
    }
}

/// Shorthand for `Rational::new(n, d)`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}
