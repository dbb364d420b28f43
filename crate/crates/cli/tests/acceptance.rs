//! Acceptance suite: one PASS/FAIL line per criterion, each with its time
//! budget. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use tvm_cli::{cmd_consensus, cmd_sweep, Cli, Command, SweepDocument};
use tvm_core::criteria::{
    bd_hitting_expectation, collision_distribution, conflict_partition, fluctuation_report, parse_rational,
    pq_coefficients, s_general, s_reg, Rational, ThresholdModel,
};
use tvm_core::dynamics::{
    pile_profile, replica_rng, run_trajectory_with, sample_initial_with, Configuration, Simulation, TrajectoryOptions,
};
use tvm_core::graph::{check_distance_regular, Family, IntersectionNumbers, OpinionGraph, SpatialGraph};
use tvm_core::stats::{bd_simulate, collision_chi_square, outcomes_for, par_replicas, regime_diagnostics};

/// Outcome of one criterion: pass flag and a one-line detail.
type Outcome = (bool, String);

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn table(f: Family) -> tvm_core::graph::IntersectionTable {
    check_distance_regular(&f.build().unwrap()).unwrap()
}

fn c1_exact_functionals() -> Outcome {
    let cube = s_reg(&Family::Cube.build().unwrap(), 1).unwrap();
    let ico = s_reg(&Family::Icosahedron.build().unwrap(), 1).unwrap();
    (
        cube == q("2") && ico == q("8"),
        format!("S_reg(cube, 1) = {cube}, S_reg(icosahedron, 1) = {ico}"),
    )
}

fn c2_coefficients() -> Outcome {
    let mut bad = Vec::new();
    let mut check = |name: String, got: &Rational, want: &str| {
        if *got != q(want) {
            bad.push(format!("{name} = {got}, want {want}"));
        }
    };
    let cube = pq_coefficients(&table(Family::Cube), 1).unwrap();
    check("cube p2".into(), cube.p(2), "2/3");
    check("cube q2".into(), cube.q(2), "1/3");
    let ico = pq_coefficients(&table(Family::Icosahedron), 1).unwrap();
    check("icosahedron p2".into(), ico.p(2), "2/5");
    check("icosahedron q2".into(), ico.q(2), "1/5");
    let dodeca = pq_coefficients(&table(Family::Dodecahedron), 2).unwrap();
    check("dodecahedron(tau=2) p2".into(), dodeca.p(2), "1/2");
    for tau in 1..=5 {
        let bd = pq_coefficients(&table(Family::Cycle { vertices: 4 * tau + 2 }), tau).unwrap();
        check(format!("cycle({}) tau={tau} p2", 4 * tau + 2), bd.p(2), "1/2");
    }
    let detail = if bad.is_empty() {
        "cube, icosahedron, dodecahedron, cycle(4tau+2) for tau 1..5 exact".into()
    } else {
        bad.join("; ")
    };
    (bad.is_empty(), detail)
}

fn c3_summary_table() -> Outcome {
    let cli = Cli::try_parse_from(["tvm", "sweep", "--preset", "summary"]).unwrap();
    let Command::Sweep(args) = cli.command else {
        unreachable!()
    };
    match cmd_sweep(&args).unwrap() {
        SweepDocument::Preset {
            checks, disagreements, ..
        } => {
            let mut detail = format!("{} checks, {disagreements} disagreements", checks.len());
            for c in checks.iter().filter(|c| !c.agrees) {
                detail.push_str(&format!("\n      {c}"));
            }
            (disagreements == 0, detail)
        }
        other => (false, format!("unexpected document {other:?}")),
    }
}

/// Ordered pairs at each distance, from a BFS independent of the library.
fn brute_pair_counts(g: &OpinionGraph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut counts = vec![0u64; n];
    for src in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for d in dist {
            counts[d] += 1;
        }
    }
    counts
}

fn c4_closed_forms() -> Outcome {
    let mut bad = Vec::new();
    for f in 2..=50usize {
        let n = brute_pair_counts(&Family::Path { vertices: f }.build().unwrap());
        for (s, &count) in n.iter().enumerate().take(f).skip(1) {
            if count != 2 * (f - s) as u64 {
                bad.push(format!("path F={f} N({s}) = {count}"));
            }
        }
    }
    for b in 2..=6i64 {
        for r in 1..=10i64 {
            let n = brute_pair_counts(
                &Family::Star {
                    branches: b as usize,
                    length: r as usize,
                }
                .build()
                .unwrap(),
            );
            for s in 1..=2 * r {
                let want = if s <= r {
                    b * (2 * r + (b - 3) * (s - 1))
                } else {
                    b * (b - 1) * (2 * r - s + 1)
                };
                if n[s as usize] as i64 != want {
                    bad.push(format!("star b={b} r={r} N({s}) = {}, want {want}", n[s as usize]));
                }
            }
        }
    }
    let mut quadratics = 0;
    for tau in 1..=12i64 {
        for f in (4 * tau + 2)..=(5 * tau + 1) {
            let g = Family::Path { vertices: f as usize }.build().unwrap();
            let s = s_general(&g, tau as usize).unwrap();
            let want = 3 * f * f - (20 * tau + 3) * f + 10 * (3 * tau + 1) * tau;
            if s != Rational::from_integer(BigInt::from(want)) {
                bad.push(format!("path F={f} tau={tau} S = {s}, want {want}"));
            }
            quadratics += 1;
        }
    }
    let detail = if bad.is_empty() {
        format!("paths F<=50, stars b<=6 r<=10, {quadratics} path quadratics exact")
    } else {
        bad.join("; ")
    };
    (bad.is_empty(), detail)
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn c5_hypercube_identity() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for d in 1..=12usize {
        let t = table(Family::Hypercube { dim: d });
        for tau in 1..d {
            for s_minus in 1..=tau {
                for s_plus in tau + 1..=(2 * tau).min(d) {
                    let lhs: BigInt = (1..=tau).map(|s| t.count(s_minus, s, s_plus)).sum();
                    let k = (s_minus + s_plus - tau).div_ceil(2);
                    let rhs: u128 = (k..=s_minus)
                        .map(|a| {
                            binomial(s_minus as u64, a as u64) * binomial((d - s_minus) as u64, (s_plus - a) as u64)
                        })
                        .sum();
                    if lhs != BigInt::from(rhs) {
                        bad.push(format!("d={d} tau={tau} ({s_minus},{s_plus}): {lhs} vs {rhs}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{checked} (d, tau, s_-, s_+) cases, d <= 12")
    } else {
        bad.join("; ")
    };
    (bad.is_empty(), detail)
}

fn c6_birth_death_oracle() -> Outcome {
    let cases = [
        ("cube", Family::Cube, 1),
        ("icosahedron", Family::Icosahedron, 1),
        ("cycle(6)", Family::Cycle { vertices: 6 }, 1),
        ("dodecahedron", Family::Dodecahedron, 2),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, (name, family, tau)) in cases.into_iter().enumerate() {
        let bd = pq_coefficients(&table(family), tau).unwrap();
        for k in 1..=bd.states() {
            let exact = bd_hitting_expectation(&bd, k).unwrap().to_f64().unwrap();
            let est = bd_simulate(&bd, k, 10_000, 100 + i as u64).unwrap();
            let hit = est.within(exact, 3.0);
            ok &= hit;
            parts.push(format!(
                "{name} k={k}: {:.3}±{:.3} vs {exact:.3}{}",
                est.mean,
                est.standard_error,
                if hit { "" } else { " MISS" }
            ));
        }
    }
    (ok, parts.join(", "))
}

fn c7_consensus_bound() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, graph_args) in [
        ("path(3)", vec!["--graph", "path", "--F", "3"]),
        ("star(3,1)", vec!["--graph", "star", "--b", "3", "--r", "1"]),
    ] {
        let mut argv = vec![
            "tvm",
            "consensus",
            "--tau",
            "1",
            "--ring-L",
            "20",
            "--replicas",
            "2000",
            "--seed",
            "7",
        ];
        argv.extend(graph_args);
        let cli = Cli::try_parse_from(argv).unwrap();
        let Command::Consensus(args) = cli.command else {
            unreachable!()
        };
        let doc = cmd_consensus(&args).unwrap();
        ok &= doc.bound_within_band && doc.result.censored == 0;
        parts.push(format!(
            "{label}: {:.4}±{:.4} vs rho_cent {}",
            doc.result.estimate.mean, doc.result.estimate.standard_error, doc.rho_cent
        ));
    }
    (ok, parts.join(", "))
}

fn c8_collision_law() -> Outcome {
    let m = ThresholdModel::uniform(Family::Cube.build().unwrap(), 1);
    let ring = SpatialGraph::ring(500).unwrap();
    let opts = TrajectoryOptions {
        record_collisions: true,
        ..TrajectoryOptions::new(10_000.0)
    };
    let mut replicas = 16;
    let outcomes = loop {
        let runs = par_replicas(replicas, 8, |rng| run_trajectory_with(&m, &ring, &opts, rng).unwrap());
        let outcomes: Vec<usize> = runs
            .iter()
            .flat_map(|r| outcomes_for(&r.collision_samples, 1, 2))
            .collect();
        if outcomes.len() >= 2000 {
            break outcomes;
        }
        replicas *= 2;
    };
    let predicted: Vec<f64> = collision_distribution(&table(Family::Cube), 1, 2)
        .unwrap()
        .iter()
        .map(|p| p.to_f64().unwrap())
        .collect();
    let r = collision_chi_square(&outcomes, &predicted).unwrap();
    (
        r.p_value > 0.01,
        format!(
            "{} (1,2) collisions over {replicas} rings, chi2 = {:.3}, dof {}, p = {:.4}",
            r.samples, r.statistic, r.degrees_of_freedom, r.p_value
        ),
    )
}

fn c9_conservation() -> Outcome {
    let m = ThresholdModel::uniform(Family::Cycle { vertices: 8 }.build().unwrap(), 3);
    let g = m.graph();
    let ring = SpatialGraph::ring(1000).unwrap();
    let mut rng = replica_rng(9, 0);
    let start = sample_initial_with(&m, &ring, &mut rng);
    let mut sim = Simulation::new(&m, &ring, &start, rng);
    let diameter = g.diameter() as u32;
    let (mut collisions, mut violations) = (0u64, Vec::new());
    let mut previous = sim.pile_sum();
    for _ in 0..1_000_000 {
        let ev = sim.step();
        if sim.pile_sum() > previous {
            violations.push(format!("sum rose {previous} -> {} at t={}", sim.pile_sum(), ev.time));
        }
        previous = sim.pile_sum();
        if let Some(c) = ev.collision {
            collisions += 1;
            if c.s < c.s_minus.abs_diff(c.s_plus) || c.s > c.s_minus + c.s_plus || c.s > diameter {
                violations.push(format!("collision {c:?}"));
            }
        }
        if violations.len() > 5 {
            break;
        }
    }
    let end = Configuration::new(ring.clone(), sim.opinions().to_vec(), g).unwrap();
    if pile_profile(&end, g).unwrap().total() != sim.pile_sum() {
        violations.push("tracked pile sum differs from recomputation".into());
    }
    let detail = if violations.is_empty() {
        format!(
            "{} events, {collisions} collisions, final sum {}",
            sim.events(),
            sim.pile_sum()
        )
    } else {
        violations.join("; ")
    };
    (violations.is_empty(), detail)
}

fn c10_regime_diagnostics() -> Outcome {
    let ring = SpatialGraph::ring(1000).unwrap();
    let cycle = Family::Cycle { vertices: 8 }.build().unwrap();
    let fluct = regime_diagnostics(&ThresholdModel::uniform(cycle.clone(), 3), &ring, 500.0, 20, 10).unwrap();
    let fix = regime_diagnostics(&ThresholdModel::uniform(cycle, 1), &ring, 500.0, 20, 11).unwrap();
    let checks = [
        ("tau=3 u(T) < 0.05", fluct.mean_xi_end < 0.05, fluct.mean_xi_end),
        ("tau=3 quiet < 0.2", fluct.quiet_fraction < 0.2, fluct.quiet_fraction),
        ("tau=1 frozen > 0.05", fix.frozen_end > 0.05, fix.frozen_end),
        ("tau=1 drift < 0.1", fix.frozen_drift < 0.1, fix.frozen_drift),
    ];
    let detail = checks
        .iter()
        .map(|(name, ok, v)| format!("{name}: {v:.4} {}", if *ok { "ok" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join(", ");
    (checks.iter().all(|c| c.1), detail)
}

/// Whether some nonempty split has every cross pair within `tau`.
fn brute_partition_exists(g: &OpinionGraph, tau: usize) -> bool {
    let n = g.vertex_count();
    let dist = |i: usize, j: usize| g.dist(i, j);
    // opinion 0 always in the first block
    (1..(1u32 << (n - 1))).any(|mask| {
        let in_second = |v: usize| v > 0 && mask >> (v - 1) & 1 == 1;
        (0..n).all(|i| (0..n).all(|j| in_second(i) == in_second(j) || dist(i, j) <= tau))
    })
}

fn c11_partition_checker() -> Outcome {
    let mut families = Vec::new();
    families.extend((2..=12).map(|f| Family::Path { vertices: f }));
    families.extend((3..=12).map(|f| Family::Cycle { vertices: f }));
    for b in 2..=11 {
        families.extend((1..=11 / b).map(|r| Family::Star { branches: b, length: r }));
    }
    families.extend((1..=3).map(|dim| Family::Hypercube { dim }));
    families.extend([
        Family::Tetrahedron,
        Family::Cube,
        Family::Octahedron,
        Family::Icosahedron,
    ]);
    let mut cases = 0;
    let mut bad = Vec::new();
    for family in families {
        let g = family.build().unwrap();
        assert!(g.vertex_count() <= 12);
        for tau in 0..=g.diameter() {
            let brute = brute_partition_exists(&g, tau);
            let evidence = fluctuation_report(&g, tau).is_some();
            let partition = conflict_partition(&g, tau);
            let partition_ok = match &partition {
                Some((v1, v2)) => v1.iter().all(|&i| v2.iter().all(|&j| g.dist(i, j) <= tau)),
                None => true,
            };
            if brute != evidence || brute != partition.is_some() || !partition_ok {
                bad.push(format!("{family} tau={tau}: brute {brute}, report {evidence}"));
            }
            cases += 1;
        }
    }
    let detail = if bad.is_empty() {
        format!("{cases} (graph, tau) cases agree")
    } else {
        bad.join("; ")
    };
    (bad.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("exact S_reg values", Duration::from_secs(1), c1_exact_functionals),
        ("birth-death coefficients", Duration::from_secs(1), c2_coefficients),
        ("summary table preset", Duration::from_secs(10), c3_summary_table),
        ("closed forms vs brute force", Duration::from_secs(5), c4_closed_forms),
        (
            "hypercube counting identity",
            Duration::from_secs(5),
            c5_hypercube_identity,
        ),
        (
            "birth-death Monte Carlo oracle",
            Duration::from_secs(30),
            c6_birth_death_oracle,
        ),
        ("consensus lower bound", Duration::from_secs(120), c7_consensus_bound),
        ("collision law chi-square", Duration::from_secs(120), c8_collision_law),
        ("pile conservation", Duration::from_secs(60), c9_conservation),
        ("regime diagnostics", Duration::from_secs(600), c10_regime_diagnostics),
        (
            "partition checker vs exhaustive search",
            Duration::from_secs(30),
            c11_partition_checker,
        ),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        let elapsed = start.elapsed();
        let pass = ok && elapsed <= limit;
        failures += !pass as usize;
        println!(
            "criterion {:>2} {} {name} [{:.2?} / {:?}]: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            limit
        );
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
