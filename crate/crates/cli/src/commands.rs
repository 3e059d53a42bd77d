use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use netspill::meanfield::{seeded_initial_state, MeanField, DEFAULT_DT, DEFAULT_T_END};
use netspill::netgen::{couple_random, save_graph, save_interlinks, Graph, Layer, LayeredNetwork, LinkSpec};
use netspill::rng::{derive_seed, setup_seed, SetupLabel};
use netspill::spectral::{
    jacobian_leading_eigenvalue, spectral_radius, threshold_curve, PowerOptions, ThresholdCurve,
};
use netspill::spillover::{
    calibrate_reservoir_rate, regime_boundary, sweep_beta12, sweep_links, topology_threshold_links,
    write_topology_csv, BisectionOptions, CalibrationTarget, CouplingMode, Populations, SpilloverConfig,
    SweepResult, DEFAULT_REALIZATIONS, DEFAULT_SEEDS_PER_RUN, P_THRESHOLD, SIZE_THRESHOLD,
};
use netspill::stochastic::{simulate, SeedStrategy, SimOptions};
use netspill::EpidemicParams;

use crate::config::{Command, CouplingModeKey, RunConfig};
use crate::CliError;

const DEFAULT_TAU2_GRID: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
const DEFAULT_INIT_FRACTION: f64 = 0.01;
const DEFAULT_LINK_COUNT: usize = 1000;

/// Files written so far, relative to the output directory.
pub struct Outputs {
    dir: PathBuf,
    pub files: Vec<String>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Writes `name` through `body`. `name` must be a bare file name.
    pub fn write(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        debug_assert!(!name.contains('/'));
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut w = BufWriter::new(file);
        body(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn record(&mut self, name: &str) {
        self.files.push(name.to_string());
    }
}

pub fn dispatch(command: Command, cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    match command {
        Command::ThresholdCurve => run_threshold_curve(cfg, out),
        Command::Meanfield => run_meanfield(cfg, out),
        Command::Simulate => run_simulate(cfg, out),
        Command::SweepLinks => run_sweep_links(cfg, out),
        Command::SweepBeta => run_sweep_beta(cfg, out),
        Command::Boundary => run_boundary(cfg, out),
        Command::Calibrate => run_calibrate(cfg, out),
        Command::TopologyCompare => run_topology_compare(cfg, out),
    }
}

fn power_options(cfg: &RunConfig) -> PowerOptions {
    let d = PowerOptions::default();
    PowerOptions {
        tol: cfg.power_tol.unwrap_or(d.tol),
        max_iter: cfg.power_max_iter.unwrap_or(d.max_iter),
    }
}

fn build_layers(cfg: &RunConfig, out: &mut Outputs) -> Result<(Arc<Graph>, Arc<Graph>), CliError> {
    let seed = cfg.master_seed()?;
    let l1 = Arc::new(
        cfg.require("layer1", &cfg.layer1)?
            .build(setup_seed(seed, SetupLabel::Layer1))?,
    );
    let l2 = if cfg.same_instance.unwrap_or(false) {
        l1.clone()
    } else {
        Arc::new(
            cfg.require("layer2", &cfg.layer2)?
                .build(setup_seed(seed, SetupLabel::Layer2))?,
        )
    };
    if cfg.write_networks.unwrap_or(false) {
        for (name, g) in [("layer1.edges", &l1), ("layer2.edges", &l2)] {
            let path = out.path(name);
            save_graph(g, &path)?;
            out.record(name);
        }
    }
    Ok((l1, l2))
}

fn coupled(cfg: &RunConfig, out: &mut Outputs) -> Result<LayeredNetwork, CliError> {
    let (l1, l2) = build_layers(cfg, out)?;
    let spec = cfg.link_spec().unwrap_or(LinkSpec::Count(0));
    let net = couple_random(l1, l2, spec, setup_seed(cfg.master_seed()?, SetupLabel::Coupling))?;
    if cfg.write_networks.unwrap_or(false) {
        save_interlinks(net.interlinks(), net.n1(), net.n2(), out.path("interlinks.edges"))?;
        out.record("interlinks.edges");
    }
    Ok(net)
}

fn params(cfg: &RunConfig) -> EpidemicParams {
    let d = EpidemicParams::default();
    EpidemicParams {
        beta11: cfg.beta11.unwrap_or(d.beta11),
        beta12: cfg.beta12.unwrap_or(d.beta12),
        beta21: cfg.beta21.unwrap_or(d.beta21),
        beta22: cfg.beta22.unwrap_or(d.beta22),
        mu: cfg.mu.unwrap_or(d.mu),
        alpha: cfg.alpha.unwrap_or(d.alpha),
    }
}

/// Rates from `tau1`/`tau2` (constrained, normalized by the layers' spectral
/// radii) when both are given, otherwise from the `beta*` keys.
fn resolved_params(cfg: &RunConfig, net: &LayeredNetwork) -> Result<EpidemicParams, CliError> {
    match (cfg.tau1, cfg.tau2) {
        (Some(t1), Some(t2)) => {
            let opts = power_options(cfg);
            let l1 = spectral_radius(net.layer1(), opts)?.value;
            let l2 = spectral_radius(net.layer2(), opts)?.value;
            let base = params(cfg);
            Ok(EpidemicParams::from_normalized(
                t1, t2, l1, l2, base.alpha, base.mu,
            )?)
        }
        (None, None) => {
            let p = params(cfg);
            p.validate()?;
            Ok(p)
        }
        _ => Err(CliError::Config(
            "keys `tau1` and `tau2` must be given together".into(),
        )),
    }
}

fn run_threshold_curve(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let (l1, l2) = build_layers(cfg, out)?;
    let grid = cfg.tau2_grid.clone().unwrap_or(DEFAULT_TAU2_GRID.to_vec());
    let alpha = cfg.alpha.unwrap_or(1.0);
    let coupling_seed = setup_seed(cfg.master_seed()?, SetupLabel::Coupling);
    let specs: Vec<(String, LinkSpec)> = match &cfg.omegas {
        Some(ws) => ws
            .iter()
            .map(|&w| (format!("threshold_curve_omega_{w}.csv"), LinkSpec::Probability(w)))
            .collect(),
        None => vec![(
            "threshold_curve.csv".to_string(),
            cfg.link_spec().unwrap_or(LinkSpec::Count(0)),
        )],
    };
    for (name, spec) in specs {
        let net = couple_random(l1.clone(), l2.clone(), spec, coupling_seed)?;
        let mut curve: ThresholdCurve = threshold_curve(&net, alpha, &grid, power_options(cfg))?;
        if let LinkSpec::Probability(w) = spec {
            curve.omega = Some(w);
        }
        let level = curve.coupling_level(net.n1(), net.n2());
        out.write(&name, |w| {
            writeln!(w, "{}", ThresholdCurve::CSV_HEADER)?;
            curve.write_csv_rows(w, level)
        })?;
    }
    Ok(())
}

fn run_meanfield(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let net = coupled(cfg, out)?;
    let p = resolved_params(cfg, &net)?;
    let init = seeded_initial_state(
        &net,
        cfg.init_fraction.unwrap_or(DEFAULT_INIT_FRACTION),
        derive_seed(cfg.master_seed()?, 0),
    )?;
    let mf = MeanField {
        t_end: cfg.t_end.unwrap_or(DEFAULT_T_END),
        dt: cfg.dt.unwrap_or(DEFAULT_DT),
        record_nodes: cfg.record_nodes.unwrap_or(false),
    };
    let traj = mf.integrate(&net, &p, &init)?;
    out.write("meanfield.csv", |w| traj.write_csv(w))?;
    if mf.record_nodes {
        out.write("meanfield_nodes.csv", |w| traj.write_node_csv(w))?;
    }
    let lead = jacobian_leading_eigenvalue(&net, &p, power_options(cfg))?;
    out.write("meanfield_params.csv", |w| {
        writeln!(
            w,
            "beta11,beta12,beta21,beta22,mu,alpha,jacobian_leading_eigenvalue"
        )?;
        writeln!(
            w,
            "{},{},{},{},{},{},{lead}",
            p.beta11, p.beta12, p.beta21, p.beta22, p.mu, p.alpha
        )
    })
}

fn seed_layer(cfg: &RunConfig) -> Layer {
    match cfg.seed_layer {
        Some(1) => Layer::One,
        _ => Layer::Two,
    }
}

fn run_simulate(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let net = coupled(cfg, out)?;
    let p = resolved_params(cfg, &net)?;
    let rng_seed = derive_seed(cfg.master_seed()?, 0);
    let layer = seed_layer(cfg);
    let seeds = match &cfg.seeds {
        Some(local) => {
            let n = net.layer(layer).node_count();
            if let Some(&bad) = local.iter().find(|&&v| v >= n) {
                return Err(CliError::Config(format!(
                    "key `seeds`: node {bad} out of range for a {n}-node layer"
                )));
            }
            local.iter().map(|&v| net.global(layer, v)).collect()
        }
        None => SeedStrategy {
            layer,
            count: cfg.seeds_per_run.unwrap_or(DEFAULT_SEEDS_PER_RUN),
        }
        .draw(&net, rng_seed)?,
    };
    let opts = SimOptions {
        t_max: cfg.t_max,
        record_events: cfg.record_events.unwrap_or(false),
    };
    let outcome = simulate(&net, &p, &seeds, rng_seed, opts)?;
    out.write("outcome.csv", |w| {
        writeln!(
            w,
            "ever_infected_layer1,ever_infected_layer2,extinction_time,truncated,rng_seed"
        )?;
        writeln!(
            w,
            "{},{},{},{},{}",
            outcome.ever_infected[0],
            outcome.ever_infected[1],
            outcome.extinction_time,
            outcome.truncated,
            outcome.rng_seed
        )
    })?;
    if opts.record_events {
        out.write("events.csv", |w| outcome.write_event_csv(w))?;
    }
    Ok(())
}

fn spillover_config(cfg: &RunConfig) -> Result<SpilloverConfig, CliError> {
    Ok(SpilloverConfig {
        realizations: cfg.realizations.unwrap_or(DEFAULT_REALIZATIONS),
        seeds_per_run: cfg.seeds_per_run.unwrap_or(DEFAULT_SEEDS_PER_RUN),
        size_threshold: cfg.size_threshold.unwrap_or(SIZE_THRESHOLD),
        p_threshold: cfg.p_threshold.unwrap_or(P_THRESHOLD),
        coupling_draw: cfg.coupling_draw.unwrap_or_default(),
        master_seed: cfg.master_seed()?,
    })
}

fn populations(cfg: &RunConfig, out: &mut Outputs) -> Result<Populations, CliError> {
    let (host, reservoir) = build_layers(cfg, out)?;
    Ok(Populations::new(host, reservoir))
}

fn write_sweep(result: &SweepResult, out: &mut Outputs) -> Result<(), CliError> {
    out.write("sweep.csv", |w| result.write_sweep_csv(w))?;
    out.write("summary.csv", |w| result.write_summary_csv(w))
}

fn run_sweep_links(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let pops = populations(cfg, out)?;
    let grid = cfg.require("fraction_grid", &cfg.fraction_grid)?;
    let mode = match cfg.coupling_mode.unwrap_or_default() {
        CouplingModeKey::Random => CouplingMode::Random,
        CouplingModeKey::Hubs => CouplingMode::Hubs {
            num_hubs: *cfg.require("num_hubs", &cfg.num_hubs)?,
        },
    };
    let result = sweep_links(&pops, &params(cfg), grid, mode, &spillover_config(cfg)?)?;
    write_sweep(&result, out)
}

fn run_sweep_beta(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let pops = populations(cfg, out)?;
    let grid = cfg.require("beta12_grid", &cfg.beta12_grid)?;
    let count = cfg.link_count.unwrap_or(DEFAULT_LINK_COUNT);
    let result = sweep_beta12(&pops, &params(cfg), grid, count, &spillover_config(cfg)?)?;
    write_sweep(&result, out)
}

fn run_boundary(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let pops = populations(cfg, out)?;
    let grid = cfg.require("fraction_grid", &cfg.fraction_grid)?;
    let d = BisectionOptions::default();
    let bisection = BisectionOptions {
        lower: cfg.bisection_lower.unwrap_or(d.lower),
        upper: cfg.bisection_upper.unwrap_or(d.upper),
        iterations: cfg.bisection_iterations.unwrap_or(d.iterations),
    };
    let b = regime_boundary(&pops, &params(cfg), grid, bisection, &spillover_config(cfg)?)?;
    for p in &b.points {
        if let Some(why) = &p.error {
            eprintln!("fraction {}: {why}", p.fraction);
        }
    }
    out.write("boundary.csv", |w| b.write_csv(w))?;
    out.write("boundary_fit.csv", |w| {
        writeln!(w, "constant,max_relative_deviation")?;
        let show = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        writeln!(w, "{},{}", show(b.constant), show(b.max_relative_deviation))
    })
}

fn target(cfg: &RunConfig) -> CalibrationTarget {
    let d = CalibrationTarget::default();
    CalibrationTarget {
        lower: cfg.target_lower.unwrap_or(d.lower),
        upper: cfg.target_upper.unwrap_or(d.upper),
    }
}

fn run_calibrate(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let seed = cfg.master_seed()?;
    let spec = cfg.require("layer2", &cfg.layer2)?;
    let reservoir = Arc::new(spec.build(setup_seed(seed, SetupLabel::Layer2))?);
    let sc = spillover_config(cfg)?;
    let cal = calibrate_reservoir_rate(
        &reservoir,
        target(cfg),
        sc.seeds_per_run,
        cfg.mu.unwrap_or(1.0),
        sc.realizations,
        seed,
    );
    let cal = match cal {
        Ok(c) => c,
        Err(netspill::Error::Calibration { reason, trace }) => {
            out.write("calibration_trace.csv", |w| write_trace(w, &trace))?;
            return Err(netspill::Error::Calibration { reason, trace }.into());
        }
        Err(e) => return Err(e.into()),
    };
    out.write("calibration_trace.csv", |w| write_trace(w, &cal.trace))?;
    out.write("calibration.csv", |w| {
        writeln!(w, "beta22,mean,realizations")?;
        writeln!(w, "{},{},{}", cal.beta22, cal.mean, cal.realizations)
    })
}

fn write_trace(w: &mut impl Write, trace: &[(f64, f64)]) -> std::io::Result<()> {
    writeln!(w, "beta22,mean")?;
    for (b, m) in trace {
        writeln!(w, "{b},{m}")?;
    }
    Ok(())
}

fn run_topology_compare(cfg: &RunConfig, out: &mut Outputs) -> Result<(), CliError> {
    let cases = cfg.require("topologies", &cfg.topologies)?;
    let beta12 = *cfg.require("beta12", &cfg.beta12)?;
    let rows = topology_threshold_links(
        cases,
        beta12,
        cfg.mu.unwrap_or(1.0),
        target(cfg),
        cfg.max_links,
        &spillover_config(cfg)?,
    )?;
    out.write("topology.csv", |w| write_topology_csv(&rows, w))
}
