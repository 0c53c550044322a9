//! Hand-made instances and the adaptive adversaries of the lower-bound
//! constructions.

use crate::model::{q, Instance, Interval, Kind, Rational, Skeleton, VertexId, WeightOracle};
use crate::sorting::AnnotatedTree;

fn half(x: i64) -> Rational {
    q(x, 2)
}

fn build(
    kind: Kind,
    edges: Option<Vec<Vec<VertexId>>>,
    intervals: Vec<Interval>,
    preds: Vec<Rational>,
    weights: Vec<Rational>,
) -> Instance {
    let sk = Skeleton::new(kind, edges, intervals, preds).expect("fixture is valid");
    Instance::from_skeleton(sk, weights).expect("fixture weights are valid")
}

fn iv(l: Rational, u: Rational) -> Interval {
    Interval::open(l, u)
}

/// One hyperedge on four vertices with k_h = 5.
pub fn fig3l() -> Instance {
    build(
        Kind::Orientation,
        Some(vec![vec![0, 1, 2, 3]]),
        vec![
            iv(q(0, 1), q(4, 1)),
            iv(half(3), q(6, 1)),
            iv(half(5), q(6, 1)),
            iv(q(31, 10), q(6, 1)),
        ],
        vec![q(1, 1), half(9), half(9), q(13, 4)],
        vec![q(11, 4), q(2, 1), half(11), q(15, 4)],
    )
}

/// Same shape as [`fig3l`] with every wrong prediction sitting below U_v1.
pub fn fig3r() -> Instance {
    build(
        Kind::Orientation,
        Some(vec![vec![0, 1, 2, 3]]),
        vec![
            iv(q(0, 1), q(4, 1)),
            iv(half(3), q(6, 1)),
            iv(half(5), q(6, 1)),
            iv(q(3, 1), q(6, 1)),
        ],
        vec![q(1, 1), q(13, 4), q(13, 4), q(13, 4)],
        vec![q(1, 1), half(11), half(11), half(11)],
    )
}

/// Five staggered intervals for sorting.
pub fn fig4() -> Instance {
    build(
        Kind::Sorting,
        None,
        (0..5)
            .map(|i| Interval::open_ints(2 * i, 2 * i + 3))
            .collect(),
        vec![half(1), half(5), half(11), half(15), half(19)],
        vec![q(1, 1), half(7), half(9), half(15), half(17)],
    )
}

/// Two overlapping intervals, both predictions in the overlap.
pub fn fig2() -> Instance {
    lb_error_static(1)
}

/// `copies` disjoint copies of [`fig2`] with the static weights.
pub fn lb_error_static(copies: usize) -> Instance {
    let sk = lb_error_skeleton(copies);
    let weights = (0..copies as i64)
        .flat_map(|i| [q(8 * i + 3, 2), q(8 * i + 5, 2)])
        .collect();
    Instance::from_skeleton(sk, weights).expect("fixture weights are valid")
}

pub fn lb_error_skeleton(copies: usize) -> Skeleton {
    let mut intervals = Vec::new();
    let mut preds = Vec::new();
    for i in 0..copies as i64 {
        intervals.push(Interval::open_ints(4 * i, 4 * i + 2));
        intervals.push(Interval::open_ints(4 * i + 1, 4 * i + 3));
        preds.extend([q(8 * i + 3, 2), q(8 * i + 3, 2)]);
    }
    Skeleton::new(Kind::Sorting, None, intervals, preds).expect("fixture is valid")
}

/// Whichever vertex of a copy is queried first gets the overlap value; the
/// other one then lands outside it.
#[derive(Debug, Clone)]
pub struct LbErrorAdversary {
    answers: Vec<Option<Rational>>,
}

impl LbErrorAdversary {
    pub fn new(copies: usize) -> Self {
        LbErrorAdversary {
            answers: vec![None; 2 * copies],
        }
    }

    fn value(&self, v: VertexId) -> Rational {
        let (copy, side) = ((v / 2) as i64, v % 2);
        let partner = self.answers[v ^ 1];
        let base = q(8 * copy, 2);
        match (side, partner) {
            (_, None) => base + if side == 0 { half(3) } else { half(5) },
            (0, Some(_)) => base + half(1),
            _ => base + half(5),
        }
    }
}

impl WeightOracle for LbErrorAdversary {
    fn reveal(&mut self, v: VertexId, _queried: &[bool]) -> Rational {
        let copy = (v / 2) as i64;
        let w = if self.answers[v ^ 1].is_none() {
            q(8 * copy + 3, 2)
        } else {
            self.value(v)
        };
        self.answers[v] = Some(w);
        w
    }

    fn realization(&self) -> Vec<Rational> {
        (0..self.answers.len())
            .map(|v| self.answers[v].unwrap_or_else(|| self.value(v)))
            .collect()
    }
}

/// Star-like hyperedge {0, 1..β}: I_0 = (0,2), the rest (1,3).
pub fn lb1_skeleton(beta: usize) -> Skeleton {
    let mut intervals = vec![Interval::open_ints(0, 2)];
    let mut preds = vec![half(3)];
    for _ in 0..beta {
        intervals.push(Interval::open_ints(1, 3));
        preds.push(half(5));
    }
    Skeleton::new(
        Kind::Orientation,
        Some(vec![(0..=beta).collect()]),
        intervals,
        preds,
    )
    .expect("fixture is valid")
}

/// Answers predictions until the last of 1..β is queried before 0; that one
/// lands inside I_0 and vertex 0 then lands left of every other interval.
#[derive(Debug, Clone)]
pub struct Lb1Adversary {
    beta: usize,
    deviated: bool,
    answers: Vec<Option<Rational>>,
}

impl Lb1Adversary {
    pub fn new(beta: usize) -> Self {
        Lb1Adversary {
            beta,
            deviated: false,
            answers: vec![None; beta + 1],
        }
    }

    fn zero_value(&self) -> Rational {
        if self.deviated {
            half(1)
        } else {
            half(3)
        }
    }
}

impl WeightOracle for Lb1Adversary {
    fn reveal(&mut self, v: VertexId, queried: &[bool]) -> Rational {
        let w = if v == 0 {
            self.zero_value()
        } else {
            let last = (1..=self.beta).all(|i| i == v || queried[i]);
            if last && !queried[0] {
                self.deviated = true;
                half(3)
            } else {
                half(5)
            }
        };
        self.answers[v] = Some(w);
        w
    }

    fn realization(&self) -> Vec<Rational> {
        (0..=self.beta)
            .map(|v| self.answers[v].unwrap_or(if v == 0 { self.zero_value() } else { half(5) }))
            .collect()
    }
}

/// Vertices 0..n with I = (0,2), n..2n with I = (1,3); hyperedges
/// {i} ∪ {n..2n} for each i < n.
pub fn lb_knum_skeleton(n: usize) -> Skeleton {
    let mut intervals = vec![Interval::open_ints(0, 2); n];
    intervals.extend(vec![Interval::open_ints(1, 3); n]);
    let mut preds = vec![half(1); n];
    preds.extend(vec![half(5); n]);
    let edges = (0..n)
        .map(|i| std::iter::once(i).chain(n..2 * n).collect())
        .collect();
    Skeleton::new(Kind::Orientation, Some(edges), intervals, preds).expect("fixture is valid")
}

/// Predictions are correct except for the vertex that completes the first
/// fully queried group, which lands in (1,2).
#[derive(Debug, Clone)]
pub struct LbKnumAdversary {
    n: usize,
    deviated: bool,
    answers: Vec<Option<Rational>>,
}

impl LbKnumAdversary {
    pub fn new(n: usize) -> Self {
        LbKnumAdversary {
            n,
            deviated: false,
            answers: vec![None; 2 * n],
        }
    }

    fn predicted(&self, v: VertexId) -> Rational {
        if v < self.n {
            half(1)
        } else {
            half(5)
        }
    }
}

impl WeightOracle for LbKnumAdversary {
    fn reveal(&mut self, v: VertexId, queried: &[bool]) -> Rational {
        let group = if v < self.n {
            0..self.n
        } else {
            self.n..2 * self.n
        };
        let last = group.into_iter().all(|u| u == v || queried[u]);
        let w = if last && !self.deviated {
            self.deviated = true;
            half(3)
        } else {
            self.predicted(v)
        };
        self.answers[v] = Some(w);
        w
    }

    fn realization(&self) -> Vec<Rational> {
        (0..2 * self.n)
            .map(|v| self.answers[v].unwrap_or_else(|| self.predicted(v)))
            .collect()
    }
}

/// Vertices 0..b with I = (0,2) and prediction 1.5, b..a with I = (1,3) and
/// prediction 2.5; hyperedges {i} ∪ {b..a} for i < b.
pub fn lb_fig5_skeleton(a: usize, b: usize) -> Skeleton {
    assert!(b > 0 && a >= 2 * b, "needs a >= 2b > 0");
    let mut intervals = vec![Interval::open_ints(0, 2); b];
    intervals.extend(vec![Interval::open_ints(1, 3); a - b]);
    let mut preds = vec![half(3); b];
    preds.extend(vec![half(5); a - b]);
    let edges = (0..b)
        .map(|i| std::iter::once(i).chain(b..a).collect())
        .collect();
    Skeleton::new(Kind::Orientation, Some(edges), intervals, preds).expect("fixture is valid")
}

/// Left vertices answer 0.5 and right ones 2.5, except that whichever group
/// is completed first has its last vertex land in the overlap.
#[derive(Debug, Clone)]
pub struct LbFig5Adversary {
    a: usize,
    b: usize,
    deviated: bool,
    answers: Vec<Option<Rational>>,
}

impl LbFig5Adversary {
    pub fn new(a: usize, b: usize) -> Self {
        LbFig5Adversary {
            a,
            b,
            deviated: false,
            answers: vec![None; a],
        }
    }

    fn default_value(&self, v: VertexId) -> Rational {
        if v < self.b {
            half(1)
        } else {
            half(5)
        }
    }
}

impl WeightOracle for LbFig5Adversary {
    fn reveal(&mut self, v: VertexId, queried: &[bool]) -> Rational {
        let group = if v < self.b {
            0..self.b
        } else {
            self.b..self.a
        };
        let last = group.into_iter().all(|u| u == v || queried[u]);
        let w = if last && !self.deviated {
            self.deviated = true;
            half(3)
        } else {
            self.default_value(v)
        };
        self.answers[v] = Some(w);
        w
    }

    fn realization(&self) -> Vec<Rational> {
        (0..self.a)
            .map(|v| self.answers[v].unwrap_or_else(|| self.default_value(v)))
            .collect()
    }
}

/// A lower-bound family with its adversary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversarySpec {
    Lb1 { beta: usize },
    LbKnum { n: usize },
    LbFig5 { a: usize, b: usize },
    LbError { copies: usize },
}

impl AdversarySpec {
    /// Parses `lb1:3`, `lbknum:4`, `fig5:3:1` or `lberror:2`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize, String> {
            parts
                .get(i)
                .ok_or_else(|| format!("{s}: missing parameter"))?
                .parse()
                .map_err(|_| format!("{s}: bad parameter"))
        };
        let spec = match parts[0] {
            "lb1" => AdversarySpec::Lb1 { beta: num(1)? },
            "lbknum" => AdversarySpec::LbKnum { n: num(1)? },
            "fig5" | "lbfig5" => AdversarySpec::LbFig5 {
                a: num(1)?,
                b: num(2)?,
            },
            "lberror" | "fig2" => AdversarySpec::LbError { copies: num(1)? },
            other => return Err(format!("unknown adversary family {other:?}")),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), String> {
        match *self {
            AdversarySpec::Lb1 { beta: 0 } => Err("lb1 needs beta >= 1".into()),
            AdversarySpec::LbKnum { n: 0 } => Err("lbknum needs n >= 1".into()),
            AdversarySpec::LbFig5 { a, b } if b == 0 || a < 2 * b => {
                Err("fig5 needs a >= 2b > 0".into())
            }
            AdversarySpec::LbError { copies: 0 } => Err("lberror needs at least one copy".into()),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            AdversarySpec::Lb1 { beta } => format!("lb1:{beta}"),
            AdversarySpec::LbKnum { n } => format!("lbknum:{n}"),
            AdversarySpec::LbFig5 { a, b } => format!("fig5:{a}:{b}"),
            AdversarySpec::LbError { copies } => format!("lberror:{copies}"),
        }
    }

    pub fn skeleton(&self) -> Skeleton {
        match *self {
            AdversarySpec::Lb1 { beta } => lb1_skeleton(beta),
            AdversarySpec::LbKnum { n } => lb_knum_skeleton(n),
            AdversarySpec::LbFig5 { a, b } => lb_fig5_skeleton(a, b),
            AdversarySpec::LbError { copies } => lb_error_skeleton(copies),
        }
    }

    pub fn oracle(&self) -> Box<dyn WeightOracle> {
        match *self {
            AdversarySpec::Lb1 { beta } => Box::new(Lb1Adversary::new(beta)),
            AdversarySpec::LbKnum { n } => Box::new(LbKnumAdversary::new(n)),
            AdversarySpec::LbFig5 { a, b } => Box::new(LbFig5Adversary::new(a, b)),
            AdversarySpec::LbError { copies } => Box::new(LbErrorAdversary::new(copies)),
        }
    }

    /// The family with every prediction correct.
    pub fn static_instance(&self) -> Instance {
        let sk = self.skeleton();
        let w = sk.predictions().to_vec();
        Instance::from_skeleton(sk, w).expect("predictions lie inside their intervals")
    }
}

/// Static fixtures by name.
pub fn fixture(name: &str) -> Option<Instance> {
    Some(match name {
        "fig3l" => fig3l(),
        "fig3r" => fig3r(),
        "fig4" => fig4(),
        "fig2" => fig2(),
        _ => return AdversarySpec::parse(name).ok().map(|s| s.static_instance()),
    })
}

pub fn all_static() -> Vec<(&'static str, Instance)> {
    vec![
        ("fig3l", fig3l()),
        ("fig3r", fig3r()),
        ("fig4", fig4()),
        ("fig2", fig2()),
    ]
}

/// A tree whose root's own parent arc closed a cycle, for the re-partition
/// routine.
#[derive(Debug, Clone)]
pub struct AnnotatedTreeFixture {
    pub name: &'static str,
    pub tree: AnnotatedTree,
    pub intervals: Vec<Interval>,
    pub predictions: Vec<Rational>,
}

impl AnnotatedTreeFixture {
    fn new(
        name: &'static str,
        root: VertexId,
        parent: &[(VertexId, VertexId)],
        witness: VertexId,
        ends: &[(i64, i64)],
        preds: &[i64],
    ) -> Self {
        AnnotatedTreeFixture {
            name,
            tree: AnnotatedTree {
                root,
                parent: parent.iter().copied().collect(),
                witness,
            },
            intervals: ends
                .iter()
                .map(|&(l, u)| Interval::open_ints(l, u))
                .collect(),
            predictions: preds.iter().map(|&p| half(p)).collect(),
        }
    }

    pub fn all() -> Vec<Self> {
        vec![
            Self::new("two-cycle", 1, &[(0, 1)], 0, &[(0, 3), (1, 4)], &[4, 3]),
            Self::new(
                "three-cycle",
                2,
                &[(0, 1), (1, 2)],
                0,
                &[(0, 3), (2, 5), (1, 4)],
                &[3, 5, 7],
            ),
            Self::new(
                "star",
                0,
                &[(1, 0), (2, 0)],
                1,
                &[(0, 4), (1, 3), (2, 5)],
                &[5, 3, 9],
            ),
        ]
    }
}
