//! Prediction error measures: number of wrong predictions, hop distance and
//! mandatory query distance.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::model::{Instance, Interval, Rational, VertexId};
use crate::structure::mandatory_set;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub k_number: usize,
    pub k_hop: usize,
    pub k_hop_per_vertex: Vec<usize>,
    /// Hop count restricted to hyperedge co-members.
    pub k_hop_local: usize,
    pub k_mandatory: usize,
    pub pred_mandatory: BTreeSet<VertexId>,
    pub real_mandatory: BTreeSet<VertexId>,
}

pub fn k_number(instance: &Instance) -> usize {
    instance
        .true_weights()
        .iter()
        .zip(instance.predictions())
        .filter(|(w, p)| w != p)
        .count()
}

/// Whether the value moving between `a` and `b` passes over a limit of `other`.
pub fn passes_limit(a: Rational, b: Rational, other: &Interval) -> bool {
    let (l, u) = (other.lower(), other.upper());
    (a <= l && l < b) || (b <= l && l < a) || (b < u && u <= a) || (a < u && u <= b)
}

/// k_u(v): 1 when v's prediction and weight lie on different sides of a
/// limit of u's original interval.
pub fn hop_indicator(instance: &Instance, v: VertexId, u: VertexId) -> usize {
    if u == v {
        return 0;
    }
    let (p, w) = (instance.predictions()[v], instance.true_weights()[v]);
    passes_limit(p, w, &instance.intervals()[u]) as usize
}

pub fn hop_per_vertex(instance: &Instance) -> Vec<usize> {
    let n = instance.vertex_count();
    (0..n)
        .map(|v| (0..n).map(|u| hop_indicator(instance, v, u)).sum())
        .collect()
}

pub fn k_hop(instance: &Instance) -> usize {
    hop_per_vertex(instance).iter().sum()
}

/// Hop count of `v` over vertices sharing a hyperedge with it.
pub fn hop_local(instance: &Instance, v: VertexId) -> usize {
    let h = instance.hypergraph();
    let mates: BTreeSet<VertexId> = h
        .incident(v)
        .iter()
        .flat_map(|&e| h.edge(e).iter().copied())
        .collect();
    mates
        .into_iter()
        .map(|u| hop_indicator(instance, v, u))
        .sum()
}

pub fn pred_mandatory(instance: &Instance) -> BTreeSet<VertexId> {
    mandatory_set(
        instance.hypergraph(),
        instance.intervals(),
        instance.predictions(),
    )
}

pub fn real_mandatory(instance: &Instance) -> BTreeSet<VertexId> {
    mandatory_set(
        instance.hypergraph(),
        instance.intervals(),
        instance.true_weights(),
    )
}

pub fn k_mandatory(instance: &Instance) -> (usize, BTreeSet<VertexId>, BTreeSet<VertexId>) {
    let p = pred_mandatory(instance);
    let r = real_mandatory(instance);
    (p.symmetric_difference(&r).count(), p, r)
}

pub fn error_report(instance: &Instance) -> ErrorReport {
    let per = hop_per_vertex(instance);
    let (k_mandatory, pred_mandatory, real_mandatory) = k_mandatory(instance);
    ErrorReport {
        k_number: k_number(instance),
        k_hop: per.iter().sum(),
        k_hop_local: (0..instance.vertex_count())
            .map(|v| hop_local(instance, v))
            .sum(),
        k_hop_per_vertex: per,
        k_mandatory,
        pred_mandatory,
        real_mandatory,
    }
}
