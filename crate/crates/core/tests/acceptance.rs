//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! `ACCEPTANCE_ONLY=4,7` runs a subset. With `ACCEPTANCE_STRICT=1` the process
//! exits nonzero when any criterion fails; by default failures are reported
//! but do not fail `cargo test`.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::*;
use nalgebra::DVector;
use netspill::meanfield::{seeded_initial_state, MeanField};
use netspill::netgen::*;
use netspill::rng::derive_seed;
use netspill::spectral::*;
use netspill::spillover::*;
use netspill::stochastic::{simulate, SimOptions};
use netspill::EpidemicParams;

const MASTER_SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

type Check = fn(&mut Shared) -> Outcome;

/// Artifacts reused by the determinism check.
#[derive(Default)]
struct Shared {
    c4_csv: Option<Vec<u8>>,
}

fn main() {
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");

    let criteria: [(usize, &str, Duration, Check); 10] = [
        (1, "threshold curve shape", secs(60), c1_curve_shape),
        (2, "spectral self-consistency", secs(10), c2_spectral_oracle),
        (3, "spread / no-spread dichotomy", secs(60), c3_dichotomy),
        (4, "link-fraction transition", secs(600), c4_link_fraction),
        (5, "beta12 transition", secs(600), c5_beta12),
        (6, "hub acceleration", secs(900), c6_hubs),
        (7, "hyperbola consistency", secs(1200), c7_boundary),
        (8, "topology ordering", secs(1800), c8_topology),
        (9, "stochastic engine exactness", secs(30), c9_exactness),
        (10, "determinism", secs(600), c10_determinism),
    ];

    let mut shared = Shared::default();
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, limit, check) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let out = check(&mut shared);
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} C{id:<2} {name}: {} [{:.1} s{}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            if in_time {
                String::new()
            } else {
                format!(", limit {} s", limit.as_secs())
            },
        );
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if strict && failed > 0 {
        std::process::exit(1);
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn opts() -> PowerOptions {
    PowerOptions::default()
}

fn ws_pair() -> (Graph, Graph) {
    (
        gen_watts_strogatz(500, 20, 0.2, 1).unwrap(),
        gen_watts_strogatz(100, 4, 0.1, 2).unwrap(),
    )
}

fn c1_curve_shape(_: &mut Shared) -> Outcome {
    let (l1, l2) = ws_pair();
    let grid: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let mut curves = Vec::new();
    for omega in [0.2, 0.042, 0.01] {
        let net = couple_random(l1.clone(), l2.clone(), LinkSpec::Probability(omega), 3).unwrap();
        let c = threshold_curve(&net, 1.0, &grid, opts()).unwrap();
        curves.push(c.points.iter().map(|p| p.1).collect::<Vec<_>>());
    }
    let mut problems = Vec::new();
    for (c, omega) in curves.iter().zip([0.2, 0.042, 0.01]) {
        if (c[0] - 1.0).abs() > 1e-6 {
            problems.push(format!("omega {omega} starts at {}", c[0]));
        }
        if c.windows(2).any(|w| w[1] > w[0]) {
            problems.push(format!("omega {omega} increases"));
        }
        if c.iter().any(|&v| !(v > 0.0 && v <= 1.0 + 1e-12)) {
            problems.push(format!("omega {omega} leaves (0, 1]"));
        }
    }
    for pair in curves.windows(2) {
        if pair[0]
            .iter()
            .zip(&pair[1])
            .any(|(hi_omega, lo_omega)| hi_omega > lo_omega)
        {
            problems.push("curves not ordered by omega".into());
        }
    }
    let ends: Vec<String> = curves.iter().map(|c| format!("{:.3}", c[9])).collect();
    let detail = format!("values at tau2=0.9 for omega 0.2/0.042/0.01: {}", ends.join("/"));
    Outcome::new(
        problems.is_empty(),
        if problems.is_empty() {
            detail
        } else {
            problems.join("; ")
        },
    )
}

fn c2_spectral_oracle(_: &mut Shared) -> Outcome {
    let mut worst_block: f64 = 0.0;
    let mut worst_ht: f64 = 0.0;
    for seed in 0..10 {
        let n1 = 15 + (seed as usize * 7) % 20;
        let n2 = 60 - n1 - (seed as usize % 5);
        let net = random_instance(n1, n2, 0.2, 0.2, 0.1, 100 + seed);
        let lambda2 = spectral_radius(net.layer2(), opts()).unwrap().value;
        for (t, alpha) in [(0.0, 1.0), (0.2, 0.5), (0.4, 1.0), (0.6, 1.5), (0.9, 2.0)] {
            let tau22 = t / lambda2;
            let tau11 = epidemic_threshold(&net, tau22, alpha, opts()).unwrap();
            let cross = (tau11 * tau22).sqrt() / alpha;
            let rho = block_spectral_radius(&net, [[tau11, cross], [cross, tau22]], opts()).unwrap();
            worst_block = worst_block.max((rho - 1.0).abs());

            let op = build_ht_operator(&net, tau22, alpha).unwrap();
            let dense = dense_ht(&net, tau22, alpha);
            let x: Vec<f64> = (0..net.n1())
                .map(|i| ((i * 13 + seed as usize) % 17) as f64 / 17.0 - 0.4)
                .collect();
            let mut y = vec![0.0; net.n1()];
            op.apply(&x, &mut y);
            let want = &dense * DVector::from_column_slice(&x);
            for i in 0..net.n1() {
                worst_ht = worst_ht.max((y[i] - want[i]).abs());
            }
        }
    }
    Outcome::new(
        worst_block <= 1e-6 && worst_ht <= 1e-8,
        format!("max |rho - 1| = {worst_block:.2e}, max H_T deviation = {worst_ht:.2e}"),
    )
}

fn c3_dichotomy(_: &mut Shared) -> Outcome {
    let (l1, l2) = ws_pair();
    let lambda1 = spectral_radius(&l1, opts()).unwrap().value;
    let lambda2 = spectral_radius(&l2, opts()).unwrap().value;
    let params = EpidemicParams::from_normalized(0.4, 0.4, lambda1, lambda2, 1.0, 1.0).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for (omega, spreads) in [(0.2, true), (0.01, false)] {
        let net = couple_random(l1.clone(), l2.clone(), LinkSpec::Probability(omega), 3).unwrap();
        let lead = jacobian_leading_eigenvalue(&net, &params, opts()).unwrap();
        let init = seeded_initial_state(&net, 0.01, 4).unwrap();
        let seeded: f64 = init.iter().map(|s| s.i).sum();
        let [a, b] = MeanField::default()
            .integrate(&net, &params, &init)
            .unwrap()
            .final_totals();
        let ever = a.i + a.r + b.i + b.r;
        let ok = if spreads {
            lead > 0.0 && a.r >= 0.1 * net.n1() as f64
        } else {
            lead < 0.0 && ever < 3.0 * seeded
        };
        pass &= ok;
        parts.push(format!(
            "omega {omega}: eigenvalue {lead:+.4}, layer1 recovered {:.1}, ever-infected {ever:.1} from {seeded} seeds",
            a.r
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn er_pops() -> Populations {
    Populations::new(
        gen_erdos_renyi_gnm(1000, 3255, 1).unwrap(),
        gen_erdos_renyi_gnm(1000, 3255, 2).unwrap(),
    )
}

fn cfg() -> SpilloverConfig {
    SpilloverConfig {
        master_seed: MASTER_SEED,
        ..Default::default()
    }
}

/// Crossing under the stricter "more than three host cases" reading, from the
/// same realizations.
fn crossing_above_three(r: &SweepResult) -> Option<f64> {
    let probs: Vec<f64> = r
        .points
        .iter()
        .map(|p| spillover_probability(&p.sizes, SIZE_THRESHOLD + 1).unwrap())
        .collect();
    detect_transition(&r.grid(), &probs, r.p_threshold).unwrap()
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("none".into(), |v| format!("{v:.5}"))
}

fn c4_sweep() -> SweepResult {
    let params = EpidemicParams {
        beta22: 0.15,
        beta12: 0.02,
        ..Default::default()
    };
    let grid: Vec<f64> = (1..=10).map(|i| (3 * i) as f64 / 10000.0).collect();
    sweep_links(&er_pops(), &params, &grid, CouplingMode::Random, &cfg()).unwrap()
}

fn c4_link_fraction(shared: &mut Shared) -> Outcome {
    let r = c4_sweep();
    let mut csv = Vec::new();
    r.write_summary_csv(&mut csv).unwrap();
    r.write_sweep_csv(&mut csv).unwrap();
    shared.c4_csv = Some(csv);
    let pass = r.critical.is_some_and(|c| (0.0008..=0.0020).contains(&c));
    Outcome::new(
        pass,
        format!(
            "critical fraction {} (band [0.0008, 0.0020]; size > 3 reading: {})",
            fmt_opt(r.critical),
            fmt_opt(crossing_above_three(&r))
        ),
    )
}

fn c5_beta12(_: &mut Shared) -> Outcome {
    let params = EpidemicParams {
        beta22: 0.15,
        ..Default::default()
    };
    let grid: Vec<f64> = (2..=20).map(|i| (5 * i) as f64 / 1000.0).collect();
    let r = sweep_beta12(&er_pops(), &params, &grid, 1000, &cfg()).unwrap();
    let pass = r.critical.is_some_and(|c| (0.018..=0.040).contains(&c));
    Outcome::new(
        pass,
        format!(
            "critical beta12 {} (band [0.018, 0.040]; size > 3 reading: {})",
            fmt_opt(r.critical),
            fmt_opt(crossing_above_three(&r))
        ),
    )
}

fn c6_hubs(_: &mut Shared) -> Outcome {
    let pops = Populations::new(
        gen_barabasi_albert_edges(1000, 3, 2957, 1).unwrap(),
        gen_barabasi_albert_edges(1000, 3, 2957, 2).unwrap(),
    );
    let params = EpidemicParams {
        beta22: 0.1,
        beta12: 0.02,
        ..Default::default()
    };
    let hub_grid: Vec<f64> = (1..=12).map(|i| (5 * i) as f64 / 100000.0).collect();
    let random_grid: Vec<f64> = (1..=10).map(|i| (3 * i) as f64 / 10000.0).collect();
    let hubs = sweep_links(
        &pops,
        &params,
        &hub_grid,
        CouplingMode::Hubs { num_hubs: 5 },
        &cfg(),
    )
    .unwrap();
    let random = sweep_links(&pops, &params, &random_grid, CouplingMode::Random, &cfg()).unwrap();
    let pass = match (hubs.critical, random.critical) {
        (Some(h), Some(r)) => (0.0001..=0.0004).contains(&h) && r >= 3.0 * h,
        _ => false,
    };
    let ratio = match (hubs.critical, random.critical) {
        (Some(h), Some(r)) => format!("{:.1}", r / h),
        _ => "n/a".into(),
    };
    Outcome::new(
        pass,
        format!(
            "hub critical fraction {} (band [0.0001, 0.0004]), random {}, ratio {ratio} (need >= 3)",
            fmt_opt(hubs.critical),
            fmt_opt(random.critical)
        ),
    )
}

fn c7_boundary(_: &mut Shared) -> Outcome {
    let params = EpidemicParams {
        beta22: 0.15,
        ..Default::default()
    };
    let b = regime_boundary(
        &er_pops(),
        &params,
        &[0.0012, 0.0024, 0.0048],
        BisectionOptions::default(),
        &cfg(),
    )
    .unwrap();
    let points: Vec<String> = b
        .points
        .iter()
        .map(|p| format!("{}: {}", p.fraction, fmt_opt(p.beta12_critical)))
        .collect();
    let spread = b.product_spread();
    Outcome::new(
        spread.is_some_and(|s| s <= 2.0),
        format!(
            "critical beta12 {}; product max/min {} (need <= 2)",
            points.join(", "),
            spread.map_or("n/a".into(), |s| format!("{s:.3}"))
        ),
    )
}

pub const TOPOLOGY_REALIZATIONS: usize = 16_000;

fn c8_topology(_: &mut Shared) -> Outcome {
    let case = |name: &str, spec: &str| TopologyCase {
        name: name.into(),
        host: spec.parse().unwrap(),
        reservoir: spec.parse().unwrap(),
    };
    let cases = [
        case("scale_free", "ba:1000,3,2957"),
        case("erdos_renyi", "gnm:1000,3255"),
        case("lattice", "ws:1000,8,0"),
        case("ws_0.01", "ws:1000,8,0.01"),
        case("ws_0.1", "ws:1000,8,0.1"),
        case("ws_0.5", "ws:1000,8,0.5"),
        case("ws_1", "ws:1000,8,1"),
    ];
    let cfg = SpilloverConfig {
        realizations: TOPOLOGY_REALIZATIONS,
        ..cfg()
    };
    let rows = match topology_threshold_links(&cases, 0.02, 1.0, CalibrationTarget::default(), None, &cfg) {
        Ok(rows) => rows,
        Err(e) => return Outcome::new(false, format!("error: {e}")),
    };
    let links: BTreeMap<&str, usize> = rows
        .iter()
        .map(|r| (r.name.as_str(), r.min_links.unwrap_or(usize::MAX)))
        .collect();
    let l = |n: &str| links[n];
    let ordered =
        l("scale_free") < l("erdos_renyi") && l("erdos_renyi") < l("ws_0.1") && l("ws_0.1") < l("lattice");
    let rewiring = l("ws_0.01") > l("ws_0.1") && l("ws_0.1") > l("ws_0.5") && l("ws_0.5") > l("ws_1");
    let table: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{} {} (beta22 {:.4})",
                r.name,
                r.min_links.map_or("none".into(), |m| m.to_string()),
                r.beta22
            )
        })
        .collect();
    Outcome::new(
        ordered && rewiring,
        format!(
            "{}; ordering {}, rewiring monotone {}",
            table.join(", "),
            if ordered { "holds" } else { "violated" },
            if rewiring { "holds" } else { "violated" }
        ),
    )
}

fn c9_exactness(_: &mut Shared) -> Outcome {
    let two = LayeredNetwork::decoupled(Graph::from_edges(2, [(0, 1)]).unwrap(), Graph::empty(0));
    let params = EpidemicParams {
        beta11: 0.6,
        mu: 1.0,
        ..Default::default()
    };
    let runs = 100_000u64;
    let hits = (0..runs)
        .filter(|&r| {
            simulate(
                &two,
                &params,
                &[0],
                derive_seed(MASTER_SEED, r),
                SimOptions::default(),
            )
            .unwrap()
            .ever_infected[0]
                == 2
        })
        .count();
    let p_two = 0.6 / 1.6;
    let two_ok = within_binomial(hits, runs as usize, p_two, 3.0);

    let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let rate = |u: usize, v: usize| if path.has_edge(u, v) { 1.2 } else { 0.0 };
    let mut oracle: BTreeMap<u32, f64> = BTreeMap::new();
    for (set, p) in final_set_distribution(3, &rate, 1.0, 1) {
        *oracle.entry(set.count_ones()).or_default() += p;
    }
    let net = LayeredNetwork::decoupled(path.clone(), Graph::empty(0));
    let params = EpidemicParams {
        beta11: 1.2,
        ..Default::default()
    };
    let n = 50_000u64;
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for r in 0..n {
        let o = simulate(
            &net,
            &params,
            &[0],
            derive_seed(MASTER_SEED + 1, r),
            SimOptions::default(),
        )
        .unwrap();
        *counts.entry(o.ever_infected[0] as u32).or_default() += 1;
    }
    let path_ok = counts.keys().all(|k| oracle.contains_key(k))
        && oracle
            .iter()
            .all(|(k, &p)| within_binomial(counts.get(k).copied().unwrap_or(0), n as usize, p, 3.0));
    let dist: Vec<String> = oracle
        .iter()
        .map(|(k, p)| {
            format!(
                "{k}: {:.4} vs {p:.4}",
                counts.get(k).copied().unwrap_or(0) as f64 / n as f64
            )
        })
        .collect();
    Outcome::new(
        two_ok && path_ok,
        format!(
            "two-node {:.4} vs {p_two:.4} at 1e5 runs; path final sizes {}",
            hits as f64 / runs as f64,
            dist.join(", ")
        ),
    )
}

fn c10_determinism(shared: &mut Shared) -> Outcome {
    let first = shared.c4_csv.take().unwrap_or_else(|| {
        let r = c4_sweep();
        let mut csv = Vec::new();
        r.write_summary_csv(&mut csv).unwrap();
        r.write_sweep_csv(&mut csv).unwrap();
        csv
    });
    let r = c4_sweep();
    let mut again = Vec::new();
    r.write_summary_csv(&mut again).unwrap();
    r.write_sweep_csv(&mut again).unwrap();
    Outcome::new(
        first == again,
        format!(
            "link-fraction sweep re-run: {} bytes, identical: {}",
            first.len(),
            first == again
        ),
    )
}
