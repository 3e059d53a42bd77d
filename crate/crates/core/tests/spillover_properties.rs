use netspill::netgen::{gen_barabasi_albert_edges, gen_erdos_renyi_gnm};
use netspill::spillover::*;
use netspill::EpidemicParams;

fn er_pops() -> Populations {
    Populations::new(
        gen_erdos_renyi_gnm(400, 1300, 1).unwrap(),
        gen_erdos_renyi_gnm(400, 1300, 2).unwrap(),
    )
}

fn cfg(realizations: usize) -> SpilloverConfig {
    SpilloverConfig {
        realizations,
        master_seed: 21,
        ..Default::default()
    }
}

fn assert_trend_within_2se(r: &SweepResult) {
    for w in r.points.windows(2) {
        let se = (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        assert!(
            w[1].probability >= w[0].probability - 2.0 * se,
            "{} -> {}: {} then {}",
            w[0].value,
            w[1].value,
            w[0].probability,
            w[1].probability
        );
    }
}

#[test]
fn sweeps_trend_upward_and_are_self_consistent() {
    let pops = er_pops();
    let params = EpidemicParams {
        beta22: 0.15,
        beta12: 0.1,
        ..Default::default()
    };
    let links = sweep_links(
        &pops,
        &params,
        &[0.0005, 0.001, 0.002, 0.004, 0.008],
        CouplingMode::Random,
        &cfg(400),
    )
    .unwrap();
    assert_trend_within_2se(&links);
    let beta = sweep_beta12(&pops, &params, &[0.0, 0.02, 0.05, 0.1, 0.2, 0.4], 300, &cfg(400)).unwrap();
    assert_trend_within_2se(&beta);
    assert_eq!(beta.points[0].probability, 0.0);
    for r in [&links, &beta] {
        for (i, p) in r.points.iter().enumerate() {
            assert!((0.0..=1.0).contains(&p.probability));
            let clamped = r.clamped_sizes(i);
            for (&raw, &c) in p.sizes.iter().zip(&clamped) {
                assert_eq!(c == 0, raw < SIZE_THRESHOLD);
            }
            let spill = clamped.iter().filter(|&&c| c > 0).count();
            assert_eq!(spill as f64 / p.realizations() as f64, p.probability);
            assert_eq!(
                p.stderr,
                (p.probability * (1.0 - p.probability) / p.realizations() as f64).sqrt()
            );
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let pops = er_pops();
    let params = EpidemicParams {
        beta22: 0.15,
        beta12: 0.1,
        ..Default::default()
    };
    let run = || sweep_links(&pops, &params, &[0.001, 0.004], CouplingMode::Random, &cfg(300)).unwrap();
    let parallel = run();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(run);
    assert_eq!(parallel, single);
    let mut a = Vec::new();
    let mut b = Vec::new();
    parallel.write_sweep_csv(&mut a).unwrap();
    single.write_sweep_csv(&mut b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn hubs_dominate_random_placement_at_equal_link_count() {
    let pops = Populations::new(
        gen_barabasi_albert_edges(1000, 3, 2957, 1).unwrap(),
        gen_barabasi_albert_edges(1000, 3, 2957, 2).unwrap(),
    );
    let params = EpidemicParams {
        beta22: 0.1,
        beta12: 0.02,
        ..Default::default()
    };
    for count in [200, 500] {
        let c = cfg(1000);
        let hubs =
            estimate_probability(&pops, &params, count, CouplingMode::Hubs { num_hubs: 5 }, &c).unwrap();
        let random = estimate_probability(&pops, &params, count, CouplingMode::Random, &c).unwrap();
        let se = binomial_stderr(random, 1000);
        assert!(hubs >= random - 2.0 * se, "{count}: hubs {hubs}, random {random}");
    }
}

#[test]
fn singleton_boundary_fits_its_own_product() {
    let pops = er_pops();
    let params = EpidemicParams {
        beta22: 0.15,
        ..Default::default()
    };
    let b = regime_boundary(&pops, &params, &[0.004], BisectionOptions::default(), &cfg(300)).unwrap();
    let p = &b.points[0];
    let product = p.product().expect("crossing found");
    assert_eq!(b.constant, Some(product));
    assert_eq!(b.max_relative_deviation, Some(0.0));
}
