//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use explorable::bench::fixtures::{self, AdversarySpec, AnnotatedTreeFixture};
use explorable::bench::generate::{gen_subdivision_reduction, two_subdivision, Corruption};
use explorable::bench::suite::{emit_string, run_suite, BenchConfig, Format};
use explorable::errors::{error_report, k_hop, k_mandatory};
use explorable::learn::{
    discretize_instance, draw_samples, empirical_km, erm_mandatory_set, SampleDistribution,
};
use explorable::model::{min_feasible_size, Instance, QuerySession};
use explorable::orient::{
    alg_hop, alg_km, alg_randomized, draw_gamma, hop_bound, km_bound, offline_optimal,
    randomized_bound, run_with_oracle, Algorithm, Flavor, Phase, RunOptions,
};
use explorable::sorting::{alg_sorting, alg_sorting_detailed, repartition_tree, Note};
use explorable::structure::{
    known_mandatory_closure, prediction_mandatory_set, vertex_cover_instance,
};
use explorable::vcover::{min_vertex_cover_approx, min_vertex_cover_exact, VcBackend};

/// Allowed gap between the empirical and nominal probability of rounding γ up.
const DRAW_TOLERANCE: f64 = 0.02;
/// Standard errors of slack on the Monte-Carlo mean cost.
const MEAN_SLACK_SE: f64 = 3.0;
const GAMMA_DRAWS: usize = 10_000;
const RANDOM_SEEDS: u64 = 1_000;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_fixture_instances() -> Vec<(String, Instance)> {
    let mut out: Vec<(String, Instance)> = fixtures::all_static()
        .into_iter()
        .map(|(n, i)| (n.to_string(), i))
        .collect();
    for spec in ["lb1:1", "lb1:3", "lbknum:3", "fig5:4:2", "lberror:2"] {
        let s = AdversarySpec::parse(spec).unwrap();
        out.push((s.name(), s.static_instance()));
    }
    out
}

fn c1_fixture_errors() -> Check {
    let l = error_report(&fixtures::fig3l());
    ensure(l.k_hop == 5 && l.k_mandatory == 1, || {
        format!("fig3l k_h={} k_M={}", l.k_hop, l.k_mandatory)
    })?;
    let r = error_report(&fixtures::fig3r());
    ensure(r.k_hop == 3 && r.k_mandatory == 1, || {
        format!("fig3r k_h={} k_M={}", r.k_hop, r.k_mandatory)
    })?;
    ensure(
        r.pred_mandatory == BTreeSet::from([0]) && r.real_mandatory.is_empty(),
        || {
            format!(
                "fig3r I_P={:?} I_R={:?}",
                r.pred_mandatory, r.real_mandatory
            )
        },
    )?;
    Ok("fig3l k_h=5 k_M=1; fig3r k_h=3 k_M=1 I_P={v1} I_R={}".into())
}

fn c2_offline_matches_brute_force() -> Check {
    let mut cases: Vec<(String, Instance)> = (0..200)
        .map(|s| {
            (
                format!("random seed {s}"),
                common::orientation(s, common::mixed(s)),
            )
        })
        .collect();
    cases.extend(all_fixture_instances());
    let mut positive = 0;
    for (name, inst) in &cases {
        let off = offline_optimal(inst).map_err(|e| format!("{name}: {e}"))?;
        let brute = min_feasible_size(inst).map_err(|e| format!("{name}: {e}"))?;
        ensure(off.cost == brute && off.opt_size == brute, || {
            format!("{name}: offline {} vs brute force {brute}", off.cost)
        })?;
        positive += (brute > 0) as usize;
    }
    Ok(format!(
        "{} instances ({positive} with opt > 0), exact equality",
        cases.len()
    ))
}

fn c3_km_at_most_kh() -> Check {
    let mut cases: Vec<Instance> = (0..1000)
        .map(|s| {
            if s % 2 == 0 {
                common::orientation(s, common::mixed(s / 2))
            } else {
                common::sorting(s, common::mixed(s / 2))
            }
        })
        .collect();
    cases.extend(all_fixture_instances().into_iter().map(|(_, i)| i));
    let bad = cases.iter().filter(|i| k_mandatory(i).0 > k_hop(i)).count();
    ensure(bad == 0, || format!("{bad} violations"))?;
    Ok(format!("{} instances, 0 violations", cases.len()))
}

const LEVELS: [f64; 3] = [0.0, 0.25, 1.0];

fn suite_instances() -> Vec<(u64, f64, Instance)> {
    let mut out = Vec::new();
    for s in 0..500u64 {
        let level = LEVELS[(s % 3) as usize];
        let inst = if s % 5 == 4 {
            common::sorting(s, common::corruption(level))
        } else {
            common::orientation(s, common::corruption(level))
        };
        out.push((s, level, inst));
    }
    out
}

fn c4_alg1_bound() -> Check {
    let (mut runs, mut erroneous) = (0, 0);
    for (s, _, inst) in suite_instances() {
        for g in [2u32, 3, 4] {
            let r = alg_hop(&inst, g).map_err(|e| format!("seed {s} γ={g}: {e}"))?;
            let cost = explorable::model::q(r.cost as i64, 1);
            ensure(cost <= hop_bound(g, r.opt_size, r.errors.k_hop), || {
                format!(
                    "seed {s} γ={g}: cost {} opt {} k_h {}",
                    r.cost, r.opt_size, r.errors.k_hop
                )
            })?;
            if r.errors.k_number == 0 {
                ensure(cost <= hop_bound(g, r.opt_size, 0), || {
                    format!(
                        "seed {s} γ={g}: not consistent, cost {} opt {}",
                        r.cost, r.opt_size
                    )
                })?;
            }
            runs += 1;
            erroneous += (r.errors.k_number > 0) as usize;
        }
    }
    Ok(format!(
        "{runs} runs ({erroneous} with wrong predictions), 0 violations"
    ))
}

fn c5_alg2_bound() -> Check {
    let (mut runs, mut erroneous) = (0, 0);
    for (s, _, inst) in suite_instances() {
        for g in [2u32, 3, 4] {
            let r = alg_km(&inst, g).map_err(|e| format!("seed {s} γ={g}: {e}"))?;
            let cost = explorable::model::q(r.cost as i64, 1);
            ensure(
                cost <= km_bound(g, r.opt_size, r.errors.k_mandatory),
                || {
                    format!(
                        "seed {s} γ={g}: cost {} opt {} k_M {}",
                        r.cost, r.opt_size, r.errors.k_mandatory
                    )
                },
            )?;
            let late = r.phase_vertices(Phase::FinalClosure);
            ensure(
                late.iter().all(|v| !r.errors.pred_mandatory.contains(v)),
                || format!("seed {s} γ={g}: final closure queried {late:?} from I_P"),
            )?;
            ensure(r.phase_vertices(Phase::Fallback).is_empty(), || {
                format!("seed {s} γ={g}: cover stage needed a second round")
            })?;
            runs += 1;
            erroneous += (r.errors.k_number > 0) as usize;
        }
    }
    Ok(format!(
        "{runs} runs ({erroneous} with wrong predictions), 0 violations"
    ))
}

fn c6_sorting() -> Check {
    for s in 0..500u64 {
        let inst = common::sorting(s, Corruption::None);
        let r = alg_sorting(&inst).map_err(|e| format!("seed {s}: {e}"))?;
        ensure(r.cost == r.opt_size, || {
            format!(
                "seed {s}: exact predictions, cost {} opt {}",
                r.cost, r.opt_size
            )
        })?;
    }
    let mut above_opt = 0;
    for s in 0..500u64 {
        let c = if s % 2 == 0 {
            Corruption::Adversarial
        } else {
            Corruption::Flip(0.25 + 0.75 * (s % 3) as f64 / 2.0)
        };
        let inst = common::sorting(s, c);
        let r = alg_sorting(&inst).map_err(|e| format!("seed {s}: {e}"))?;
        let e = &r.errors;
        let k = e.k_number.min(e.k_mandatory).min(e.k_hop);
        ensure(r.cost <= 2 * r.opt_size && r.cost <= r.opt_size + k, || {
            format!(
                "seed {s}: cost {} opt {} k#={} kM={} kh={}",
                r.cost, r.opt_size, e.k_number, e.k_mandatory, e.k_hop
            )
        })?;
        above_opt += (r.cost > r.opt_size) as usize;
    }
    let f4 = alg_sorting(&fixtures::fig4()).map_err(|e| e.to_string())?;
    ensure(f4.cost == 3 && f4.opt_size == 2, || {
        format!("fig4 cost {} opt {}", f4.cost, f4.opt_size)
    })?;
    let spec = AdversarySpec::LbError { copies: 1 };
    let sk = spec.skeleton();
    let f2 = run_with_oracle(
        Algorithm::Sorting,
        &sk,
        spec.oracle(),
        RunOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(f2.cost == 2 && f2.opt_size == 1, || {
        format!("fig2 cost {} opt {}", f2.cost, f2.opt_size)
    })?;
    Ok(format!("500 exact runs cost = opt; 500 corrupted runs within bounds ({above_opt} above opt); fig4 3/2; fig2 2/1"))
}

fn c7_partition_and_paths() -> Check {
    let mut cliques = 0;
    for s in 0..500u64 {
        let inst = common::sorting(s, common::mixed(s));
        let (_, d) = alg_sorting_detailed(&inst).map_err(|e| format!("seed {s}: {e}"))?;
        let iv = inst.intervals();
        let known: BTreeSet<usize> = d
            .first_closure
            .iter()
            .chain(&d.second_closure)
            .copied()
            .collect();
        let target: BTreeSet<usize> = d.predicted.union(&known).copied().collect();
        let mut seen = BTreeSet::new();
        let mut partners = BTreeSet::new();
        for c in &d.partition.cliques {
            cliques += 1;
            for &v in &c.members {
                ensure(seen.insert(v), || format!("seed {s}: {v} in two cliques"))?;
            }
            for (i, &a) in c.members.iter().enumerate() {
                for &b in &c.members[i + 1..] {
                    ensure(iv[a].intersects(&iv[b]), || {
                        format!("seed {s}: {a},{b} disjoint")
                    })?;
                }
            }
            if let [v] = c.members[..] {
                match c.note {
                    Some(Note::InM) => {
                        ensure(known.contains(&v), || format!("seed {s}: {v} not in M"))?
                    }
                    Some(Note::Partner(u)) => {
                        ensure(
                            u != v && !target.contains(&u) && iv[u].intersects(&iv[v]),
                            || format!("seed {s}: bad partner {u} for {v}"),
                        )?;
                        ensure(partners.insert(u), || {
                            format!("seed {s}: partner {u} reused")
                        })?;
                    }
                    None => return Err(format!("seed {s}: bare singleton {v}")),
                }
            }
        }
        ensure(seen == target, || {
            format!("seed {s}: partition covers {seen:?}, want {target:?}")
        })?;
        for p in &d.paths {
            for (i, &a) in p.iter().enumerate() {
                for (j, &b) in p.iter().enumerate().skip(i + 1) {
                    let meet = iv[a].intersects(&iv[b]);
                    ensure(meet == (j == i + 1), || {
                        format!("seed {s}: {p:?} is not a path")
                    })?;
                }
                if i > 0 {
                    ensure(iv[p[i - 1]].lower() >= iv[a].lower(), || {
                        format!("seed {s}: {p:?} out of order")
                    })?;
                }
            }
        }
    }
    for fx in AnnotatedTreeFixture::all() {
        let out = repartition_tree(&fx.tree, &fx.intervals, &fx.predictions)
            .map_err(|e| format!("{}: {e}", fx.name))?;
        ensure(out.iter().all(|c| c.len() >= 2), || {
            format!("{}: singleton in {out:?}", fx.name)
        })?;
    }
    Ok(format!(
        "500 instances, {cliques} cliques valid; cyclic-parent trees give no singleton"
    ))
}

fn c8_cover_property() -> Check {
    let mut trials = 0;
    for s in 0..500u64 {
        let inst = common::orientation(s, common::mixed(s));
        let mut base = QuerySession::new(&inst);
        known_mandatory_closure(&mut base).map_err(|e| e.to_string())?;
        let g = vertex_cover_instance(&base);
        let exact = min_vertex_cover_exact(&g).map_err(|e| e.to_string())?.cover;
        let approx = min_vertex_cover_approx(&g).cover;
        let all: BTreeSet<usize> = g.vertices().iter().copied().collect();
        let covers = [exact, approx, all];
        let cover = &covers[(s % 3) as usize];
        let mut sess = QuerySession::new(&inst);
        known_mandatory_closure(&mut sess).map_err(|e| e.to_string())?;
        for &v in cover {
            sess.query(v).map_err(|e| e.to_string())?;
        }
        known_mandatory_closure(&mut sess).map_err(|e| e.to_string())?;
        ensure(sess.is_solved().is_some(), || {
            format!("seed {s}: cover {cover:?} left the instance unsolved")
        })?;
        trials += 1;
    }
    Ok(format!("{trials} trials solved"))
}

fn c9_erm() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let dists = [
        SampleDistribution::UniformGrid,
        SampleDistribution::TwoPoint,
        SampleDistribution::PointMass,
    ];
    for t in 0..100u64 {
        let inst = common::orientation(t * 7 % 1000, Corruption::Flip(0.5));
        let m = 1 + (t % 6) as usize;
        let set = draw_samples(inst.skeleton(), &dists, m, &mut rng).map_err(|e| e.to_string())?;
        let p = erm_mandatory_set(&set).map_err(|e| e.to_string())?;
        let got = empirical_km(&p, &set);
        let n = inst.vertex_count();
        let mands: Vec<BTreeSet<usize>> = (0..m).map(|j| set.mandatory_of(j)).collect();
        let mut best = usize::MAX;
        for mask in 0u32..(1 << n) {
            let cand: BTreeSet<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            best = best.min(
                mands
                    .iter()
                    .map(|r| r.symmetric_difference(&cand).count())
                    .sum(),
            );
        }
        let best = explorable::model::q(best as i64, m as i64);
        ensure(got == best, || {
            format!("trial {t}: ERM {got} vs exhaustive {best}")
        })?;
    }
    for t in 0..300u64 {
        let inst = if t % 2 == 0 {
            common::orientation(t, common::mixed(t))
        } else {
            common::sorting(t, common::mixed(t))
        };
        let c = discretize_instance(&inst);
        let snapped: Vec<_> = (0..inst.vertex_count())
            .map(|v| c.snap(v, inst.predictions()[v]))
            .collect();
        let moved = inst.with_predictions(snapped).map_err(|e| e.to_string())?;
        let before = prediction_mandatory_set(&QuerySession::new(&inst));
        let after = prediction_mandatory_set(&QuerySession::new(&moved));
        ensure(before == after, || {
            format!("trial {t}: I_P {before:?} became {after:?}")
        })?;
    }
    Ok("100 ERM trials optimal; 300 discretizations keep I_P".into())
}

fn c10_randomized() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut notes = Vec::new();
    for gamma in [2.25, 2.5, 3.75] {
        let ups = (0..GAMMA_DRAWS)
            .filter(|_| draw_gamma(gamma, &mut rng).unwrap() as f64 == gamma.ceil())
            .count();
        let freq = ups as f64 / GAMMA_DRAWS as f64;
        let frac = gamma - gamma.floor();
        ensure((freq - frac).abs() <= DRAW_TOLERANCE, || {
            format!("γ={gamma}: Pr[up]={freq}")
        })?;
        notes.push(format!("{freq:.3}"));
    }
    let mut checked = 0;
    for (name, inst) in all_fixture_instances() {
        let opt = offline_optimal(&inst).map_err(|e| e.to_string())?.opt_size;
        let rep = error_report(&inst);
        for flavor in [Flavor::Hop, Flavor::Km] {
            let k = match flavor {
                Flavor::Hop => rep.k_hop,
                Flavor::Km => rep.k_mandatory,
            };
            for gamma in [2.25, 2.5, 3.75] {
                let costs: Vec<f64> = (0..RANDOM_SEEDS)
                    .map(|seed| alg_randomized(&inst, gamma, flavor, seed).map(|r| r.cost as f64))
                    .collect::<Result<_, _>>()
                    .map_err(|e| format!("{name}: {e}"))?;
                let n = costs.len() as f64;
                let mean = costs.iter().sum::<f64>() / n;
                let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
                let bound =
                    randomized_bound(gamma, flavor, opt, k) + MEAN_SLACK_SE * (var / n).sqrt();
                ensure(mean <= bound + 1e-12, || {
                    format!("{name} {flavor:?} γ={gamma}: mean {mean} > {bound}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "Pr[up] = {}; {checked} fixture means within bound",
        notes.join(", ")
    ))
}

/// Minimum vertex cover size by trying every subset.
fn brute_cover(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|mask| {
            edges
                .iter()
                .all(|&(a, b)| mask >> a & 1 == 1 || mask >> b & 1 == 1)
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

fn c11_reduction() -> Check {
    let mut graphs = 0;
    for n in 0..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let inst = gen_subdivision_reduction(n, &edges).map_err(|e| e.to_string())?;
            let (sn, sub) = two_subdivision(n, &edges);
            let g = explorable::vcover::VertexCoverGraph::from_edges(sub.iter().copied());
            let vc = min_vertex_cover_exact(&g)
                .map_err(|e| e.to_string())?
                .cover
                .len();
            ensure(vc == brute_cover(n, &edges) + edges.len(), || {
                format!("n={n} {edges:?}: solver VC {vc}")
            })?;
            let opt = offline_optimal(&inst).map_err(|e| e.to_string())?.cost;
            ensure(opt == vc, || {
                format!("n={n} {edges:?}: optimum {opt} vs VC {vc}")
            })?;
            if sn <= 14 {
                let brute = min_feasible_size(&inst).map_err(|e| e.to_string())?;
                ensure(brute == vc, || {
                    format!("n={n} {edges:?}: brute force {brute} vs VC {vc}")
                })?;
            }
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs"))
}

const DETERMINISM_CONFIG: &str = r#"
algorithms = ["alg1:2", "alg2:3", "alg1r:2.5", "alg2r:2.25", "sort", "witness"]
seeds = [1, 2, 3]

[[sweep]]
family = "orientation"
n = 8
edges = 4
levels = [0.0, 0.25, 1.0]
count = 3
seed = 100
adversarial = true

[[sweep]]
family = "sorting"
n = 7
levels = [0.0, 1.0]
count = 3
seed = 200

[[sweep]]
family = "fixture"
names = ["fig3l", "fig3r", "fig4", "fig2"]

[[sweep]]
family = "adversary"
specs = ["lb1:3", "lberror:2"]
"#;

fn c12_determinism() -> Check {
    let once = || -> Result<String, String> {
        let cfg = BenchConfig::from_toml(DETERMINISM_CONFIG)?;
        let table = run_suite(
            &cfg.instances()?,
            &cfg.algorithms()?,
            &cfg.params(VcBackend::default()),
        );
        ensure(table.failures.is_empty(), || {
            format!("failures: {:?}", table.failures)
        })?;
        Ok(emit_string(&table, Format::Csv))
    };
    let (a, b) = (once()?, once()?);
    ensure(a == b, || "CSV differs between runs".into())?;
    Ok(format!("{} identical CSV bytes", a.len()))
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("fixture error values", c1_fixture_errors),
        (
            "offline optimum equals brute force",
            c2_offline_matches_brute_force,
        ),
        ("k_M <= k_h", c3_km_at_most_kh),
        ("Algorithm 1 bound", c4_alg1_bound),
        ("Algorithm 2 bound", c5_alg2_bound),
        ("Algorithm 3 guarantees", c6_sorting),
        ("clique partition and paths", c7_partition_and_paths),
        ("vertex cover property", c8_cover_property),
        ("ERM and discretization", c9_erm),
        ("randomized gamma wrapper", c10_randomized),
        ("vertex cover reduction", c11_reduction),
        ("byte-identical CSV", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
