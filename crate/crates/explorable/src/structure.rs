//! Witness pairs, mandatory vertices, closure, enforcement and the
//! vertex-cover instance.

use std::collections::BTreeSet;

use crate::model::{
    edge_minimum, left_key, Hypergraph, Interval, ModelError, QuerySession, Rational, VertexId,
};
use crate::vcover::VertexCoverGraph;

/// Leftmost member of hyperedge `e`: minimum lower limit, lowest id on ties.
pub fn leftmost(session: &QuerySession, e: usize) -> VertexId {
    let cur = session.current_intervals();
    *session
        .hypergraph()
        .edge(e)
        .iter()
        .min_by_key(|&&v| (left_key(&cur[v]), v))
        .expect("hyperedges are nonempty")
}

/// Whether `v` attains the minimum lower limit among `edge` without `skip`.
pub fn is_leftmost_in(
    current: &[Interval],
    edge: &[VertexId],
    v: VertexId,
    skip: Option<VertexId>,
) -> bool {
    let min = edge
        .iter()
        .filter(|&&x| Some(x) != skip)
        .map(|&x| left_key(&current[x]))
        .min();
    min == Some(left_key(&current[v]))
}

pub fn is_witness_pair(session: &QuerySession, v: VertexId, u: VertexId) -> bool {
    if v == u {
        return false;
    }
    let cur = session.current_intervals();
    if !cur[v].intersects(&cur[u]) {
        return false;
    }
    let h = session.hypergraph();
    h.shared_edges(v, u).any(|e| {
        let edge = h.edge(e);
        is_leftmost_in(cur, edge, v, None) || is_leftmost_in(cur, edge, u, None)
    })
}

/// Minimum of `edge` under `weights`, ties to the lowest id.
fn weight_minimum(edge: &[VertexId], weights: &[Rational]) -> VertexId {
    *edge
        .iter()
        .min_by_key(|&&v| (weights[v], v))
        .expect("hyperedges are nonempty")
}

/// The two-case characterization of mandatory vertices for a full weight
/// assignment. `intervals` are the current intervals.
pub fn is_mandatory_given_weights(
    h: &Hypergraph,
    intervals: &[Interval],
    v: VertexId,
    weights: &[Rational],
) -> bool {
    let iv = &intervals[v];
    if iv.is_trivial() {
        return false;
    }
    h.incident(v).iter().any(|&e| {
        let edge = h.edge(e);
        let m = weight_minimum(edge, weights);
        if m == v {
            edge.iter().any(|&u| u != v && iv.contains(&weights[u]))
        } else {
            iv.contains(&weights[m])
        }
    })
}

pub fn mandatory_set(
    h: &Hypergraph,
    intervals: &[Interval],
    weights: &[Rational],
) -> BTreeSet<VertexId> {
    (0..intervals.len())
        .filter(|&v| is_mandatory_given_weights(h, intervals, v, weights))
        .collect()
}

/// Reference check: `v` is mandatory iff querying every other vertex
/// leaves some hyperedge unsolved.
pub fn mandatory_by_simulation(
    h: &Hypergraph,
    intervals: &[Interval],
    v: VertexId,
    weights: &[Rational],
) -> bool {
    if intervals[v].is_trivial() {
        return false;
    }
    let state: Vec<Interval> = (0..intervals.len())
        .map(|u| {
            if u == v {
                intervals[u]
            } else {
                Interval::Trivial(weights[u])
            }
        })
        .collect();
    h.edges().iter().any(|e| edge_minimum(&state, e).is_none())
}

/// Revealed weights for queried vertices, predictions elsewhere.
pub fn predicted_realization(session: &QuerySession) -> Vec<Rational> {
    (0..session.vertex_count())
        .map(|v| {
            session
                .known_weight(v)
                .unwrap_or_else(|| session.predicted(v))
        })
        .collect()
}

pub fn prediction_mandatory_set(session: &QuerySession) -> BTreeSet<VertexId> {
    mandatory_set(
        session.hypergraph(),
        session.current_intervals(),
        &predicted_realization(session),
    )
}

/// First vertex that is mandatory by the known-mandatory rule, scanning
/// hyperedges by index and then ids.
pub fn known_mandatory_vertex(session: &QuerySession) -> Option<VertexId> {
    let cur = session.current_intervals();
    let h = session.hypergraph();
    for (e, edge) in h.edges().iter().enumerate() {
        if session.edge_solved(e) {
            continue;
        }
        for &v in edge {
            if cur[v].is_trivial() || !is_leftmost_in(cur, edge, v, None) {
                continue;
            }
            if edge.iter().any(|&u| u != v && cur[u].nested_in(&cur[v])) {
                return Some(v);
            }
        }
    }
    None
}

pub fn known_mandatory_closure(session: &mut QuerySession) -> Result<Vec<VertexId>, ModelError> {
    let mut queried = Vec::new();
    while let Some(v) = known_mandatory_vertex(session) {
        session.query(v)?;
        queried.push(v);
    }
    Ok(queried)
}

pub fn enforces(session: &QuerySession, u: VertexId, v: VertexId) -> bool {
    if u == v {
        return false;
    }
    let cur = session.current_intervals();
    if cur[u].is_trivial() || cur[v].is_trivial() || !cur[v].contains(&session.predicted(u)) {
        return false;
    }
    let h = session.hypergraph();
    h.shared_edges(u, v).any(|e| {
        let edge = h.edge(e);
        is_leftmost_in(cur, edge, v, None)
            || (is_leftmost_in(cur, edge, u, None) && is_leftmost_in(cur, edge, v, Some(u)))
    })
}

pub fn vertex_cover_instance(session: &QuerySession) -> VertexCoverGraph {
    let cur = session.current_intervals();
    let h = session.hypergraph();
    let mut edges = BTreeSet::new();
    for (e, edge) in h.edges().iter().enumerate() {
        if session.edge_solved(e) {
            continue;
        }
        for &v in edge {
            if cur[v].is_trivial() || !is_leftmost_in(cur, edge, v, None) {
                continue;
            }
            for &u in edge {
                if u != v && cur[u].is_open() && cur[u].intersects(&cur[v]) {
                    edges.insert((v.min(u), v.max(u)));
                }
            }
        }
    }
    VertexCoverGraph::from_edges(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::fixtures;

    #[test]
    fn fig3l_leftmost_moves_after_query() {
        let inst = fixtures::fig3l();
        let mut s = QuerySession::new(&inst);
        assert_eq!(leftmost(&s, 0), 0);
        s.query(0).unwrap();
        assert_eq!(leftmost(&s, 0), 1);
    }

    #[test]
    fn fig3l_witness_pairs() {
        let inst = fixtures::fig3l();
        let s = QuerySession::new(&inst);
        assert!(is_witness_pair(&s, 0, 1));
        assert!(!is_witness_pair(&s, 2, 3));
    }

    #[test]
    fn nested_interval_triggers_closure() {
        let inst = crate::model::Instance::build(
            crate::model::Kind::Orientation,
            Some(vec![vec![0, 1]]),
            vec![
                crate::model::VertexRecord {
                    interval: Interval::open_ints(0, 10),
                    true_weight: crate::model::q(5, 1),
                    predicted: crate::model::q(5, 1),
                },
                crate::model::VertexRecord {
                    interval: Interval::open_ints(2, 3),
                    true_weight: crate::model::q(5, 2),
                    predicted: crate::model::q(5, 2),
                },
            ],
        )
        .unwrap();
        let mut s = QuerySession::new(&inst);
        assert_eq!(known_mandatory_closure(&mut s).unwrap()[0], 0);
    }

    #[test]
    fn fig3l_enforcement() {
        let inst = fixtures::fig3l();
        let s = QuerySession::new(&inst);
        assert!(enforces(&s, 3, 0));
        assert!(!enforces(&s, 0, 1));
    }

    #[test]
    fn fig3l_cover_instance_is_a_star() {
        let inst = fixtures::fig3l();
        let s = QuerySession::new(&inst);
        let g = vertex_cover_instance(&s);
        assert_eq!(
            g.edges().iter().copied().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (0, 3)]
        );
    }

    #[test]
    fn fig4_closure_after_v3() {
        let inst = fixtures::fig4();
        let mut s = QuerySession::new(&inst);
        s.query(2).unwrap();
        assert_eq!(known_mandatory_closure(&mut s).unwrap(), vec![1]);
    }
}
