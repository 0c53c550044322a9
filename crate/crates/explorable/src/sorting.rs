//! Sorting under uncertainty: the prediction-based algorithm with its clique
//! partition and path-component phase.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::model::{Instance, Interval, Kind, QuerySession, Rational, VertexId};
use crate::orient::{finish_sorting, AlgError, Phase, Recorder, RunResult};
use crate::structure::{known_mandatory_vertex, prediction_mandatory_set};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArborescenceForest {
    /// Chosen parent π(v) for every v ∈ I_P \ M, accepted or not.
    pub parent: BTreeMap<VertexId, VertexId>,
    /// Accepted arcs (π(v), v).
    pub arcs: BTreeSet<(VertexId, VertexId)>,
}

impl ArborescenceForest {
    /// Parent along an accepted arc.
    pub fn tree_parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent
            .get(&v)
            .copied()
            .filter(|&p| self.arcs.contains(&(p, v)))
    }

    fn tree_parents(&self) -> BTreeMap<VertexId, VertexId> {
        self.arcs.iter().map(|&(p, v)| (v, p)).collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
}

/// Lowest-id u ≠ v whose prediction lies in the original interval of v.
fn lowest_witness(intervals: &[Interval], preds: &[Rational], v: VertexId) -> Option<VertexId> {
    (0..intervals.len()).find(|&u| u != v && intervals[v].contains(&preds[u]))
}

pub fn build_arborescence_forest(
    session: &QuerySession,
    predicted: &BTreeSet<VertexId>,
    known: &BTreeSet<VertexId>,
) -> Result<ArborescenceForest, AlgError> {
    let sk = session.skeleton();
    let (intervals, preds) = (sk.intervals(), sk.predictions());
    let mut uf = UnionFind((0..intervals.len()).collect());
    let mut forest = ArborescenceForest::default();
    for &v in predicted.difference(known) {
        let p = lowest_witness(intervals, preds, v).ok_or_else(|| {
            AlgError::Precondition(format!("vertex {v} has no prediction inside its interval"))
        })?;
        forest.parent.insert(v, p);
        let (a, b) = (uf.find(p), uf.find(v));
        if a != b {
            uf.0[b] = a;
            forest.arcs.insert((p, v));
        }
    }
    Ok(forest)
}

fn depth(parents: &BTreeMap<VertexId, VertexId>, mut v: VertexId) -> usize {
    let mut d = 0;
    while let Some(&p) = parents.get(&v) {
        v = p;
        d += 1;
    }
    d
}

/// Deepest-first grouping: the deepest remaining vertex takes all remaining
/// siblings, plus their parent if it is still remaining.
pub fn group_deepest(
    members: &BTreeSet<VertexId>,
    parents: &BTreeMap<VertexId, VertexId>,
) -> Vec<Vec<VertexId>> {
    let mut left = members.clone();
    let mut out = Vec::new();
    while let Some(&v) = left
        .iter()
        .max_by_key(|&&v| (depth(parents, v), Reverse(v)))
    {
        let mut c: Vec<VertexId> = match parents.get(&v) {
            Some(&p) => {
                let mut c: Vec<_> = left
                    .iter()
                    .copied()
                    .filter(|x| parents.get(x) == Some(&p))
                    .collect();
                if left.contains(&p) {
                    c.push(p);
                }
                c
            }
            None => vec![v],
        };
        c.sort_unstable();
        for x in &c {
            left.remove(x);
        }
        out.push(c);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Note {
    InM,
    Partner(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clique {
    pub members: Vec<VertexId>,
    /// Set for singletons only.
    pub note: Option<Note>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CliquePartition {
    pub cliques: Vec<Clique>,
}

impl CliquePartition {
    /// Partners of singletons that are not known mandatory.
    pub fn critical_partners(&self) -> BTreeSet<VertexId> {
        self.cliques
            .iter()
            .filter_map(|c| match c.note {
                Some(Note::Partner(u)) => Some(u),
                _ => None,
            })
            .collect()
    }

    pub fn covered(&self) -> BTreeSet<VertexId> {
        self.cliques
            .iter()
            .flat_map(|c| c.members.iter().copied())
            .collect()
    }
}

/// A tree whose root is itself prediction mandatory, with `witness` the
/// descendant whose prediction lies in the root's interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedTree {
    pub root: VertexId,
    /// child → parent
    pub parent: BTreeMap<VertexId, VertexId>,
    pub witness: VertexId,
}

fn subtree(parents: &BTreeMap<VertexId, VertexId>, top: VertexId) -> BTreeSet<VertexId> {
    let mut out = BTreeSet::from([top]);
    loop {
        let more: Vec<_> = parents
            .iter()
            .filter(|(c, p)| out.contains(p) && !out.contains(c))
            .map(|(&c, _)| c)
            .collect();
        if more.is_empty() {
            return out;
        }
        out.extend(more);
    }
}

fn group_subtree(
    parents: &BTreeMap<VertexId, VertexId>,
    top: VertexId,
) -> (Vec<Vec<VertexId>>, usize) {
    let nodes = subtree(parents, top);
    let local: BTreeMap<_, _> = parents
        .iter()
        .filter(|(c, p)| nodes.contains(c) && nodes.contains(p) && **c != top)
        .map(|(&c, &p)| (c, p))
        .collect();
    let cliques = group_deepest(&nodes, &local);
    let root_idx = cliques
        .iter()
        .position(|c| c.contains(&top))
        .expect("top is grouped");
    (cliques, root_idx)
}

/// Re-partitions a tree with a prediction-mandatory root into cliques of
/// size at least two.
pub fn repartition_tree(
    tree: &AnnotatedTree,
    intervals: &[Interval],
    preds: &[Rational],
) -> Result<Vec<Vec<VertexId>>, AlgError> {
    let r = tree.root;
    let m = tree.witness;
    let mut parents = tree.parent.clone();
    let nodes = subtree(&parents, r);
    if !nodes.contains(&m) || m == r {
        return Err(AlgError::Precondition(format!(
            "witness {m} is not a descendant of {r}"
        )));
    }
    for &v in &nodes {
        if v != r && parents[&v] != r && intervals[v].contains(&preds[r]) {
            parents.insert(v, r);
        }
    }
    let children: Vec<VertexId> = parents
        .iter()
        .filter(|(_, &p)| p == r)
        .map(|(&c, _)| c)
        .collect();
    let mut groups: Vec<(VertexId, Vec<Vec<VertexId>>, usize)> = children
        .iter()
        .map(|&c| {
            let (g, i) = group_subtree(&parents, c);
            (c, g, i)
        })
        .collect();
    let flatten = |groups: Vec<(VertexId, Vec<Vec<VertexId>>, usize)>| {
        let mut out: Vec<Vec<VertexId>> = groups.into_iter().flat_map(|(_, g, _)| g).collect();
        for c in &mut out {
            c.sort_unstable();
        }
        out
    };

    let singles: Vec<usize> = (0..groups.len())
        .filter(|&i| groups[i].1[groups[i].2].len() == 1)
        .collect();
    if !singles.is_empty() {
        let mut merged = vec![r];
        for &i in singles.iter().rev() {
            let (_, g, idx) = &mut groups[i];
            merged.extend(g.remove(*idx));
        }
        let mut out = flatten(groups);
        merged.sort_unstable();
        out.push(merged);
        return Ok(out);
    }
    if let Some(i) = (0..groups.len()).find(|&i| groups[i].1[groups[i].2].len() >= 3) {
        let (c, g, idx) = &mut groups[i];
        let c = *c;
        g[*idx].retain(|&x| x != c);
        let mut out = flatten(groups);
        out.push(vec![c.min(r), c.max(r)]);
        return Ok(out);
    }
    if let Some(i) = (0..groups.len()).find(|&i| intervals[r].contains(&preds[groups[i].0])) {
        let (_, g, idx) = &mut groups[i];
        g[*idx].push(r);
        return Ok(flatten(groups));
    }
    let Some(i) = (0..groups.len()).find(|&i| subtree(&parents, groups[i].0).contains(&m)) else {
        return Err(AlgError::Precondition("witness left the tree".into()));
    };
    let v = groups.remove(i).0;
    parents.insert(m, r);
    let (mut gm, im) = group_subtree(&parents, m);
    let mut local = parents.clone();
    local.retain(|&c, _| c != m);
    let (mut gv, iv) = group_subtree(&local, v);
    let mut out = flatten(groups);
    if gm[im].len() == 1 || gv[iv].len() == 1 {
        let mut merged = vec![r];
        if gm[im].len() == 1 {
            merged.extend(gm.remove(im));
        }
        if gv[iv].len() == 1 {
            merged.extend(gv.remove(iv));
        }
        merged.sort_unstable();
        out.push(merged);
    } else {
        gm[im].push(r);
    }
    for mut c in gm.into_iter().chain(gv) {
        c.sort_unstable();
        out.push(c);
    }
    Ok(out)
}

pub fn clique_partition(
    session: &QuerySession,
    predicted: &BTreeSet<VertexId>,
    known: &BTreeSet<VertexId>,
) -> Result<(CliquePartition, ArborescenceForest), AlgError> {
    if known_mandatory_vertex(session).is_some()
        || predicted.union(known).any(|&v| !session.is_queried(v))
    {
        return Err(AlgError::Precondition(
            "clique partition needs every predicted vertex queried and closure done".into(),
        ));
    }
    let sk = session.skeleton();
    let forest = build_arborescence_forest(session, predicted, known)?;
    let parents = forest.tree_parents();
    let members: BTreeSet<VertexId> = predicted.union(known).copied().collect();
    let groups = group_deepest(&members, &parents);

    let mut out: Vec<Clique> = Vec::new();
    let mut replaced: BTreeSet<VertexId> = BTreeSet::new();
    for g in &groups {
        if g.len() > 1 {
            continue;
        }
        let v = g[0];
        if known.contains(&v) || parents.contains_key(&v) {
            continue;
        }
        let tree = AnnotatedTree {
            root: v,
            parent: parents
                .iter()
                .filter(|(c, _)| subtree(&parents, v).contains(c))
                .map(|(&c, &p)| (c, p))
                .collect(),
            witness: forest.parent[&v],
        };
        for c in repartition_tree(&tree, sk.intervals(), sk.predictions())? {
            replaced.extend(c.iter().copied());
            out.push(Clique {
                members: c,
                note: None,
            });
        }
    }
    let mut by_partner: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for g in groups {
        if g.iter().any(|v| replaced.contains(v)) {
            continue;
        }
        if g.len() > 1 {
            out.push(Clique {
                members: g,
                note: None,
            });
            continue;
        }
        let v = g[0];
        if known.contains(&v) {
            out.push(Clique {
                members: g,
                note: Some(Note::InM),
            });
        } else {
            match parents.get(&v) {
                Some(&p) if !members.contains(&p) => by_partner.entry(p).or_default().push(v),
                _ => {
                    return Err(AlgError::Precondition(format!(
                        "singleton {v} has neither a partner nor a known-mandatory root"
                    )))
                }
            }
        }
    }
    for (p, vs) in by_partner {
        let note = (vs.len() == 1).then_some(Note::Partner(p));
        out.push(Clique { members: vs, note });
    }
    out.sort_by(|a, b| a.members.cmp(&b.members));
    Ok((CliquePartition { cliques: out }, forest))
}

/// Component of the current interval graph, listed by non-increasing lower
/// limit.
pub type PathComponent = Vec<VertexId>;

pub fn path_components(session: &QuerySession) -> Result<Vec<PathComponent>, AlgError> {
    if known_mandatory_vertex(session).is_some() || !prediction_mandatory_set(session).is_empty() {
        return Err(AlgError::Precondition(
            "path components need a session without (predicted) mandatory vertices".into(),
        ));
    }
    let cur = session.current_intervals();
    let open: Vec<VertexId> = (0..cur.len()).filter(|&v| cur[v].is_open()).collect();
    let mut seen = BTreeSet::new();
    let mut comps = Vec::new();
    for &start in &open {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &open {
                if !seen.contains(&y) && cur[x].intersects(&cur[y]) {
                    seen.insert(y);
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_by_key(|&v| (Reverse(cur[v].lower()), v));
        for i in 0..comp.len() {
            for j in i + 1..comp.len() {
                if cur[comp[i]].intersects(&cur[comp[j]]) != (j == i + 1) {
                    return Err(AlgError::Precondition(format!(
                        "component {comp:?} is not a path"
                    )));
                }
            }
        }
        comps.push(comp);
    }
    Ok(comps)
}

#[derive(Debug, Clone, Default)]
pub struct SortingDetails {
    pub predicted: BTreeSet<VertexId>,
    pub first_closure: Vec<VertexId>,
    pub second_closure: Vec<VertexId>,
    pub partition: CliquePartition,
    pub forest: ArborescenceForest,
    pub paths: Vec<PathComponent>,
}

/// Positions (1-based) to query on a path of `p` vertices.
pub fn path_queries(p: usize, first_is_partner: bool) -> Vec<usize> {
    if p % 2 == 1 {
        (2..p).step_by(2).collect()
    } else if first_is_partner {
        (1..p).step_by(2).collect()
    } else {
        (2..=p).step_by(2).collect()
    }
}

pub fn sorting_session(
    s: &mut QuerySession,
    rec: &mut Recorder,
) -> Result<SortingDetails, AlgError> {
    if s.skeleton().kind() != Kind::Sorting {
        return Err(AlgError::Precondition(
            "the sorting algorithm needs a sorting instance".into(),
        ));
    }
    let predicted = prediction_mandatory_set(s);
    let first_closure = rec.close(s, Phase::Closure)?;
    for &v in &predicted {
        if !s.is_queried(v) {
            rec.ask(s, v, Phase::SortPredicted)?;
        }
    }
    let second_closure = rec.close(s, Phase::Closure)?;
    let known: BTreeSet<VertexId> = first_closure
        .iter()
        .chain(&second_closure)
        .copied()
        .collect();
    let (partition, forest) = clique_partition(s, &predicted, &known)?;
    let partners = partition.critical_partners();
    let mut paths = Vec::new();
    while let Some(path) = path_components(s)?.into_iter().find(|c| c.len() >= 2) {
        rec.round += 1;
        for i in path_queries(path.len(), partners.contains(&path[0])) {
            rec.ask(s, path[i - 1], Phase::SortPath)?;
        }
        rec.close(s, Phase::Closure)?;
        paths.push(path);
    }
    Ok(SortingDetails {
        predicted,
        first_closure,
        second_closure,
        partition,
        forest,
        paths,
    })
}

pub fn alg_sorting(instance: &Instance) -> Result<RunResult, AlgError> {
    Ok(alg_sorting_detailed(instance)?.0)
}

pub fn alg_sorting_detailed(instance: &Instance) -> Result<(RunResult, SortingDetails), AlgError> {
    let mut s = QuerySession::new(instance);
    let mut rec = Recorder::default();
    let details = sorting_session(&mut s, &mut rec)?;
    Ok((finish_sorting(&s, rec)?, details))
}
