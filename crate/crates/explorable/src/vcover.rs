//! Minimum vertex cover: exact branch and bound, and a matching-based
//! 2-approximation.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::VertexId;

pub const DEFAULT_EXACT_LIMIT: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("{n} vertices exceed the exact cover limit of {limit}; use the approximate backend")]
    TooLarge { n: usize, limit: usize },
}

/// Undirected simple graph on vertex ids. Only vertices touching an edge are
/// listed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexCoverGraph {
    vertices: Vec<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl VertexCoverGraph {
    pub fn from_edges(edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let edges: BTreeSet<_> = edges
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let vertices: BTreeSet<_> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        VertexCoverGraph {
            vertices: vertices.into_iter().collect(),
            edges,
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_cover(&self, cover: &BTreeSet<VertexId>) -> bool {
        self.edges
            .iter()
            .all(|(a, b)| cover.contains(a) || cover.contains(b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    pub cover: BTreeSet<VertexId>,
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcBackend {
    Exact { limit: usize },
    Approx,
}

impl Default for VcBackend {
    fn default() -> Self {
        VcBackend::Exact {
            limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

impl VcBackend {
    pub fn solve(&self, g: &VertexCoverGraph) -> Result<CoverResult, CoverError> {
        match *self {
            VcBackend::Exact { limit } => min_vertex_cover_exact_with_limit(g, limit),
            VcBackend::Approx => Ok(min_vertex_cover_approx(g)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, VcBackend::Exact { .. })
    }
}

pub fn min_vertex_cover_exact(g: &VertexCoverGraph) -> Result<CoverResult, CoverError> {
    min_vertex_cover_exact_with_limit(g, DEFAULT_EXACT_LIMIT)
}

pub fn min_vertex_cover_exact_with_limit(
    g: &VertexCoverGraph,
    limit: usize,
) -> Result<CoverResult, CoverError> {
    let n = g.vertices.len();
    if n > limit.min(64) {
        return Err(CoverError::TooLarge {
            n,
            limit: limit.min(64),
        });
    }
    let index = |v: VertexId| {
        g.vertices
            .binary_search(&v)
            .expect("edge endpoint is listed")
    };
    let mut adj = vec![0u64; n];
    for &(a, b) in &g.edges {
        let (i, j) = (index(a), index(b));
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = Best {
        size: n as u32 + 1,
        mask: all,
    };
    branch(&adj, all, 0, &mut best);
    let cover = (0..n)
        .filter(|&i| best.mask >> i & 1 == 1)
        .map(|i| g.vertices[i])
        .collect();
    Ok(CoverResult { cover, exact: true })
}

struct Best {
    size: u32,
    mask: u64,
}

fn branch(adj: &[u64], mut active: u64, mut chosen: u64, best: &mut Best) {
    // isolated and degree-one reductions
    loop {
        let mut changed = false;
        let mut rest = active;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if active >> v & 1 == 0 {
                continue;
            }
            let nb = adj[v] & active;
            match nb.count_ones() {
                0 => {
                    active &= !(1 << v);
                    changed = true;
                }
                1 => {
                    chosen |= nb;
                    active &= !(nb | 1 << v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    if active == 0 {
        if chosen.count_ones() < best.size {
            *best = Best {
                size: chosen.count_ones(),
                mask: chosen,
            };
        }
        return;
    }
    if chosen.count_ones() + matching_bound(adj, active) >= best.size {
        return;
    }
    let mut pick = usize::MAX;
    let mut pick_deg = 0;
    let mut rest = active;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & active).count_ones();
        if d > pick_deg {
            pick = v;
            pick_deg = d;
        }
    }
    let bit = 1u64 << pick;
    branch(adj, active & !bit, chosen | bit, best);
    let nb = adj[pick] & active;
    branch(adj, active & !bit & !nb, chosen | nb, best);
}

fn matching_bound(adj: &[u64], active: u64) -> u32 {
    let mut free = active;
    let mut size = 0;
    while free != 0 {
        let v = free.trailing_zeros() as usize;
        free &= !(1 << v);
        let nb = adj[v] & free;
        if nb != 0 {
            free &= !(1 << nb.trailing_zeros());
            size += 1;
        }
    }
    size
}

/// Both endpoints of a greedy maximal matching, edges in sorted order.
pub fn min_vertex_cover_approx(g: &VertexCoverGraph) -> CoverResult {
    let mut cover = BTreeSet::new();
    for &(a, b) in &g.edges {
        if !cover.contains(&a) && !cover.contains(&b) {
            cover.insert(a);
            cover.insert(b);
        }
    }
    CoverResult {
        cover,
        exact: false,
    }
}
