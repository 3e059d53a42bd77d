//! Monte Carlo spillover experiments.
//!
//! Layer 1 is the host population and layer 2 the reservoir. Every
//! realization seeds the reservoir, runs the chain to extinction and records
//! the host's cumulative infections; a realization with at least
//! `size_threshold` of them counts as a spillover.
//!
//! Realization `r` always uses seed [`derive_seed`]`(master_seed, r)`, for its
//! coupling, its seed nodes and its dynamics, at every grid point. Estimates
//! at neighbouring grid points therefore share their randomness, which keeps
//! sweeps smooth and bisections stable.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::{
    fraction_to_count, sample_hub_links, sample_random_links, select_hubs, Graph, Layer, LayeredNetwork,
    LinkSpec, NetworkSpec,
};
use crate::params::EpidemicParams;
use crate::rng::{derive_seed, setup_seed, stream_rng, SetupLabel, Stream};
use crate::stochastic::{run_ensemble, simulate, SeedStrategy, SimOptions};

pub const SIZE_THRESHOLD: usize = 3;
pub const P_THRESHOLD: f64 = 0.1;
pub const DEFAULT_REALIZATIONS: usize = 2000;
pub const DEFAULT_SEEDS_PER_RUN: usize = 10;

/// Fraction of `sizes` that reach `size_threshold`.
pub fn spillover_probability(sizes: &[usize], size_threshold: usize) -> Result<f64> {
    if sizes.is_empty() {
        return Err(Error::param("sizes", "need at least one realization"));
    }
    let hits = sizes.iter().filter(|&&s| s >= size_threshold).count();
    Ok(hits as f64 / sizes.len() as f64)
}

/// Binomial standard error `sqrt(p (1 - p) / r)`.
pub fn binomial_stderr(p: f64, r: usize) -> f64 {
    (p * (1.0 - p) / r as f64).sqrt()
}

/// Sizes below the threshold are reported as 0.
pub fn clamp_size(size: usize, size_threshold: usize) -> usize {
    if size >= size_threshold {
        size
    } else {
        0
    }
}

/// First crossing of `p_threshold`, linearly interpolated between the grid
/// points either side of it. `grid[0]` if the first estimate already reaches
/// it, `None` if no estimate does.
pub fn detect_transition(grid: &[f64], probs: &[f64], p_threshold: f64) -> Result<Option<f64>> {
    if grid.len() != probs.len() {
        return Err(Error::param(
            "probs",
            format!("{} estimates for {} grid points", probs.len(), grid.len()),
        ));
    }
    check_increasing("grid", grid)?;
    let Some(j) = probs.iter().position(|&p| p >= p_threshold) else {
        return Ok(None);
    };
    if j == 0 {
        return Ok(Some(grid[0]));
    }
    let (x0, x1, p0, p1) = (grid[j - 1], grid[j], probs[j - 1], probs[j]);
    Ok(Some(x0 + (p_threshold - p0) / (p1 - p0) * (x1 - x0)))
}

fn check_increasing(name: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param(name, "grid is empty"));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::param(name, "grid values must be finite"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param(name, "grid must be strictly increasing"));
    }
    Ok(())
}

/// Whether each realization draws its own inter-links or all share one set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingDraw {
    #[default]
    Redraw,
    /// One link set drawn from the master seed and reused by every realization.
    Fixed,
}

/// Where inter-links land in the reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    Random,
    /// Split evenly over the `num_hubs` highest-degree reservoir nodes.
    Hubs {
        num_hubs: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpilloverConfig {
    pub realizations: usize,
    pub seeds_per_run: usize,
    pub size_threshold: usize,
    pub p_threshold: f64,
    pub coupling_draw: CouplingDraw,
    pub master_seed: u64,
}

impl Default for SpilloverConfig {
    fn default() -> Self {
        SpilloverConfig {
            realizations: DEFAULT_REALIZATIONS,
            seeds_per_run: DEFAULT_SEEDS_PER_RUN,
            size_threshold: SIZE_THRESHOLD,
            p_threshold: P_THRESHOLD,
            coupling_draw: CouplingDraw::Redraw,
            master_seed: 0,
        }
    }
}

impl SpilloverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::param("realizations", "need at least one realization"));
        }
        if !(self.p_threshold > 0.0 && self.p_threshold <= 1.0) {
            return Err(Error::param(
                "p_threshold",
                format!("{} must lie in (0, 1]", self.p_threshold),
            ));
        }
        Ok(())
    }
}

/// Host and reservoir layers shared by every realization of an experiment.
#[derive(Debug, Clone)]
pub struct Populations {
    pub host: Arc<Graph>,
    pub reservoir: Arc<Graph>,
}

impl Populations {
    pub fn new(host: impl Into<Arc<Graph>>, reservoir: impl Into<Arc<Graph>>) -> Self {
        Populations {
            host: host.into(),
            reservoir: reservoir.into(),
        }
    }

    fn n1(&self) -> usize {
        self.host.node_count()
    }

    fn n2(&self) -> usize {
        self.reservoir.node_count()
    }

    fn capacity(&self) -> usize {
        self.n1() * self.n2()
    }
}

/// Host sizes of `cfg.realizations` runs with `count` inter-links placed by
/// `mode`.
pub fn host_sizes(
    pops: &Populations,
    params: &EpidemicParams,
    count: usize,
    mode: CouplingMode,
    cfg: &SpilloverConfig,
) -> Result<Vec<usize>> {
    cfg.validate()?;
    params.validate()?;
    let (n1, n2) = (pops.n1(), pops.n2());
    let hubs = match mode {
        CouplingMode::Random => Vec::new(),
        CouplingMode::Hubs { num_hubs } => select_hubs(&pops.reservoir, num_hubs)?,
    };
    let draw_links = |seed: u64| -> Result<Vec<(usize, usize)>> {
        let mut rng = stream_rng(seed, Stream::Coupling);
        match mode {
            CouplingMode::Random => sample_random_links(&mut rng, n1, n2, LinkSpec::Count(count)),
            CouplingMode::Hubs { .. } => sample_hub_links(&mut rng, n1, &hubs, count),
        }
    };
    let strategy = SeedStrategy {
        layer: Layer::Two,
        count: cfg.seeds_per_run,
    };
    let one_run = |net: &LayeredNetwork, seed: u64| -> Result<usize> {
        let seeds = strategy.draw(net, seed)?;
        let outcome = simulate(net, params, &seeds, seed, SimOptions::default())?;
        Ok(outcome.ever_infected[0])
    };
    let realizations = 0..cfg.realizations as u64;
    match cfg.coupling_draw {
        CouplingDraw::Fixed => {
            let links = draw_links(setup_seed(cfg.master_seed, SetupLabel::Coupling))?;
            let net = LayeredNetwork::new(pops.host.clone(), pops.reservoir.clone(), links)?;
            realizations
                .into_par_iter()
                .map(|r| one_run(&net, derive_seed(cfg.master_seed, r)))
                .collect()
        }
        CouplingDraw::Redraw => realizations
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(cfg.master_seed, r);
                let net = LayeredNetwork::new(pops.host.clone(), pops.reservoir.clone(), draw_links(seed)?)?;
                one_run(&net, seed)
            })
            .collect(),
    }
}

/// Spillover probability with `count` links placed by `mode`.
pub fn estimate_probability(
    pops: &Populations,
    params: &EpidemicParams,
    count: usize,
    mode: CouplingMode,
    cfg: &SpilloverConfig,
) -> Result<f64> {
    let sizes = host_sizes(pops, params, count, mode, cfg)?;
    spillover_probability(&sizes, cfg.size_threshold)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    LinkFraction,
    Beta12,
    LinkCount,
}

impl SweepParameter {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParameter::LinkFraction => "link_fraction",
            SweepParameter::Beta12 => "beta12",
            SweepParameter::LinkCount => "link_count",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    /// Inter-links used at this point.
    pub link_count: usize,
    /// Host cumulative infections, one per realization.
    pub sizes: Vec<usize>,
    pub probability: f64,
    pub stderr: f64,
}

impl SweepPoint {
    fn new(value: f64, link_count: usize, sizes: Vec<usize>, size_threshold: usize) -> Result<Self> {
        let probability = spillover_probability(&sizes, size_threshold)?;
        let stderr = binomial_stderr(probability, sizes.len());
        Ok(SweepPoint {
            value,
            link_count,
            sizes,
            probability,
            stderr,
        })
    }

    pub fn realizations(&self) -> usize {
        self.sizes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub points: Vec<SweepPoint>,
    pub size_threshold: usize,
    pub p_threshold: f64,
    /// Interpolated crossing of `p_threshold`, if the sweep reaches it.
    pub critical: Option<f64>,
}

pub const SWEEP_CSV_HEADER: &str = "param_value,realization,raw_size,clamped_size";
pub const SUMMARY_CSV_HEADER: &str = "param_value,R,probability,stderr";

impl SweepResult {
    fn from_points(
        parameter: SweepParameter,
        points: Vec<SweepPoint>,
        cfg: &SpilloverConfig,
    ) -> Result<Self> {
        let grid: Vec<f64> = points.iter().map(|p| p.value).collect();
        let probs: Vec<f64> = points.iter().map(|p| p.probability).collect();
        let critical = detect_transition(&grid, &probs, cfg.p_threshold)?;
        Ok(SweepResult {
            parameter,
            points,
            size_threshold: cfg.size_threshold,
            p_threshold: cfg.p_threshold,
            critical,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.probability).collect()
    }

    pub fn clamped_sizes(&self, point: usize) -> Vec<usize> {
        self.points[point]
            .sizes
            .iter()
            .map(|&s| clamp_size(s, self.size_threshold))
            .collect()
    }

    pub fn write_sweep_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{SWEEP_CSV_HEADER}")?;
        for p in &self.points {
            for (r, &s) in p.sizes.iter().enumerate() {
                writeln!(out, "{},{r},{s},{}", p.value, clamp_size(s, self.size_threshold))?;
            }
        }
        Ok(())
    }

    /// One row per grid point, then a `# critical_<parameter>=` trailer
    /// (`none` when the sweep never crosses).
    pub fn write_summary_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{SUMMARY_CSV_HEADER}")?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{}",
                p.value,
                p.realizations(),
                p.probability,
                p.stderr
            )?;
        }
        match self.critical {
            Some(c) => writeln!(out, "# critical_{}={c}", self.parameter.as_str()),
            None => writeln!(out, "# critical_{}=none", self.parameter.as_str()),
        }
    }
}

/// Spillover probability against the fraction of the `N1 * N2` possible
/// inter-links that are present.
pub fn sweep_links(
    pops: &Populations,
    params: &EpidemicParams,
    fraction_grid: &[f64],
    mode: CouplingMode,
    cfg: &SpilloverConfig,
) -> Result<SweepResult> {
    check_increasing("fraction_grid", fraction_grid)?;
    if let Some(&f) = fraction_grid.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
        return Err(Error::param(
            "fraction_grid",
            format!("fraction {f} must lie in (0, 1]"),
        ));
    }
    let mut points = Vec::with_capacity(fraction_grid.len());
    for &f in fraction_grid {
        let count = fraction_to_count(f, pops.n1(), pops.n2());
        let sizes = host_sizes(pops, params, count, mode, cfg)?;
        points.push(SweepPoint::new(f, count, sizes, cfg.size_threshold)?);
    }
    SweepResult::from_points(SweepParameter::LinkFraction, points, cfg)
}

/// Spillover probability against `beta12` with `link_count` random links.
pub fn sweep_beta12(
    pops: &Populations,
    params_base: &EpidemicParams,
    beta12_grid: &[f64],
    link_count: usize,
    cfg: &SpilloverConfig,
) -> Result<SweepResult> {
    check_increasing("beta12_grid", beta12_grid)?;
    if let Some(&b) = beta12_grid.iter().find(|&&b| b < 0.0) {
        return Err(Error::param("beta12_grid", format!("rate {b} must be >= 0")));
    }
    check_link_count(pops, link_count)?;
    let mut points = Vec::with_capacity(beta12_grid.len());
    for &b in beta12_grid {
        let params = EpidemicParams {
            beta12: b,
            ..*params_base
        };
        let sizes = host_sizes(pops, &params, link_count, CouplingMode::Random, cfg)?;
        points.push(SweepPoint::new(b, link_count, sizes, cfg.size_threshold)?);
    }
    SweepResult::from_points(SweepParameter::Beta12, points, cfg)
}

fn check_link_count(pops: &Populations, count: usize) -> Result<()> {
    if count > pops.capacity() {
        return Err(Error::param(
            "link_count",
            format!("{count} links exceed the {} possible pairs", pops.capacity()),
        ));
    }
    Ok(())
}

/// Bisection settings for locating a critical `beta12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BisectionOptions {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

impl Default for BisectionOptions {
    fn default() -> Self {
        BisectionOptions {
            lower: 0.001,
            upper: 1.0,
            iterations: 12,
        }
    }
}

/// Smallest link fraction for which the boundary is mapped; below it the
/// inverse proportionality is not expected to hold.
pub const MIN_BOUNDARY_FRACTION: f64 = 0.001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub fraction: f64,
    pub beta12_critical: Option<f64>,
    /// Why no critical rate was found, when it wasn't.
    pub error: Option<String>,
}

impl BoundaryPoint {
    pub fn product(&self) -> Option<f64> {
        self.beta12_critical.map(|b| b * self.fraction)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeBoundary {
    pub points: Vec<BoundaryPoint>,
    /// Median of `fraction * beta12_critical` over the located points.
    pub constant: Option<f64>,
    /// Largest `|product - constant| / constant`.
    pub max_relative_deviation: Option<f64>,
}

pub const BOUNDARY_CSV_HEADER: &str = "fraction,beta12_critical,product";

impl RegimeBoundary {
    /// Ratio of the largest to the smallest product.
    pub fn product_spread(&self) -> Option<f64> {
        let products: Vec<f64> = self.points.iter().filter_map(BoundaryPoint::product).collect();
        let max = products.iter().cloned().reduce(f64::max)?;
        let min = products.iter().cloned().reduce(f64::min)?;
        Some(max / min)
    }

    /// Unlocated fractions are written with empty rate and product fields.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{BOUNDARY_CSV_HEADER}")?;
        for p in &self.points {
            match (p.beta12_critical, p.product()) {
                (Some(b), Some(c)) => writeln!(out, "{},{b},{c}", p.fraction)?,
                _ => writeln!(out, "{},,", p.fraction)?,
            }
        }
        Ok(())
    }
}

/// Critical `beta12` for each link fraction, by bisection on the spillover
/// probability, and the hyperbola constant fitted to them.
pub fn regime_boundary(
    pops: &Populations,
    params_base: &EpidemicParams,
    fraction_grid: &[f64],
    bisection: BisectionOptions,
    cfg: &SpilloverConfig,
) -> Result<RegimeBoundary> {
    check_increasing("fraction_grid", fraction_grid)?;
    if let Some(&f) = fraction_grid
        .iter()
        .find(|&&f| !(MIN_BOUNDARY_FRACTION..=1.0).contains(&f))
    {
        return Err(Error::param(
            "fraction_grid",
            format!("fraction {f} outside [{MIN_BOUNDARY_FRACTION}, 1]"),
        ));
    }
    if !(bisection.lower > 0.0 && bisection.lower < bisection.upper) {
        return Err(Error::param("bisection", "need 0 < lower < upper"));
    }
    let mut points = Vec::with_capacity(fraction_grid.len());
    for &fraction in fraction_grid {
        let count = fraction_to_count(fraction, pops.n1(), pops.n2());
        let crossing = critical_beta12(pops, params_base, count, bisection, cfg)?;
        points.push(match crossing {
            Ok(b) => BoundaryPoint {
                fraction,
                beta12_critical: Some(b),
                error: None,
            },
            Err(why) => BoundaryPoint {
                fraction,
                beta12_critical: None,
                error: Some(why),
            },
        });
    }
    let mut products: Vec<f64> = points.iter().filter_map(BoundaryPoint::product).collect();
    products.sort_by(f64::total_cmp);
    let constant = median(&products);
    let max_relative_deviation =
        constant.map(|c| products.iter().map(|p| (p - c).abs() / c).fold(0.0, f64::max));
    Ok(RegimeBoundary {
        points,
        constant,
        max_relative_deviation,
    })
}

fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some(0.5 * (sorted[n / 2 - 1] + sorted[n / 2])),
    }
}

/// The outer `Result` carries hard errors; the inner one a bracket failure,
/// which the boundary records and moves past.
fn critical_beta12(
    pops: &Populations,
    params_base: &EpidemicParams,
    count: usize,
    bisection: BisectionOptions,
    cfg: &SpilloverConfig,
) -> Result<std::result::Result<f64, String>> {
    let prob = |b: f64| {
        let params = EpidemicParams {
            beta12: b,
            ..*params_base
        };
        estimate_probability(pops, &params, count, CouplingMode::Random, cfg)
    };
    let (mut lo, mut hi) = (bisection.lower, bisection.upper);
    let (p_lo, p_hi) = (prob(lo)?, prob(hi)?);
    if p_lo >= cfg.p_threshold {
        return Ok(Err(format!(
            "probability {p_lo} at beta12 = {lo} already reaches {}",
            cfg.p_threshold
        )));
    }
    if p_hi < cfg.p_threshold {
        return Ok(Err(format!(
            "probability {p_hi} at beta12 = {hi} stays below {}",
            cfg.p_threshold
        )));
    }
    let (mut p_lo, mut p_hi) = (p_lo, p_hi);
    for _ in 0..bisection.iterations {
        let mid = 0.5 * (lo + hi);
        let p = prob(mid)?;
        if p >= cfg.p_threshold {
            (hi, p_hi) = (mid, p);
        } else {
            (lo, p_lo) = (mid, p);
        }
    }
    Ok(Ok(lo + (cfg.p_threshold - p_lo) / (p_hi - p_lo) * (hi - lo)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTarget {
    pub lower: f64,
    pub upper: f64,
}

impl Default for CalibrationTarget {
    fn default() -> Self {
        CalibrationTarget {
            lower: 51.0,
            upper: 53.0,
        }
    }
}

impl CalibrationTarget {
    fn contains(&self, m: f64) -> bool {
        self.lower <= m && m <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub beta22: f64,
    pub mean: f64,
    pub realizations: usize,
    /// Every `(beta22, mean)` evaluated, in order.
    pub trace: Vec<(f64, f64)>,
}

const MAX_BISECTION_STEPS: usize = 60;
const MAX_BRACKET_RATE: f64 = 1e6;

/// Within-reservoir rate whose mean outbreak size, from `seeds_per_run`
/// random seeds, falls in `target`. Retries once with four times the
/// realizations if Monte Carlo noise defeats the bisection.
pub fn calibrate_reservoir_rate(
    reservoir: &Arc<Graph>,
    target: CalibrationTarget,
    seeds_per_run: usize,
    mu: f64,
    realizations: usize,
    master_seed: u64,
) -> Result<Calibration> {
    if !(target.lower > 0.0 && target.lower <= target.upper) {
        return Err(Error::param("target", "need 0 < lower <= upper"));
    }
    let net = LayeredNetwork::decoupled(Graph::empty(0), reservoir.clone());
    let mut trace = Vec::new();
    let mut r = realizations;
    for attempt in 0..2 {
        if let Some(mut c) = calibrate_once(&net, target, seeds_per_run, mu, r, master_seed, &mut trace)? {
            c.trace = trace;
            return Ok(c);
        }
        if attempt == 0 {
            r *= 4;
        }
    }
    Err(Error::Calibration {
        reason: format!(
            "no rate gave a mean in [{}, {}], also with {r} realizations",
            target.lower, target.upper
        ),
        trace,
    })
}

fn calibrate_once(
    net: &LayeredNetwork,
    target: CalibrationTarget,
    seeds_per_run: usize,
    mu: f64,
    realizations: usize,
    master_seed: u64,
    trace: &mut Vec<(f64, f64)>,
) -> Result<Option<Calibration>> {
    let strategy = SeedStrategy {
        layer: Layer::Two,
        count: seeds_per_run,
    };
    let mut mean_at = |beta22: f64| -> Result<f64> {
        let params = EpidemicParams {
            beta22,
            mu,
            ..Default::default()
        };
        let outcomes = run_ensemble(net, &params, strategy, realizations, master_seed)?;
        let total: usize = outcomes.iter().map(|o| o.ever_infected[1]).sum();
        let m = total as f64 / realizations as f64;
        trace.push((beta22, m));
        Ok(m)
    };
    let done = |beta22, mean| {
        Ok(Some(Calibration {
            beta22,
            mean,
            realizations,
            trace: Vec::new(),
        }))
    };

    let m0 = mean_at(0.0)?;
    if target.contains(m0) {
        return done(0.0, m0);
    }
    if m0 > target.upper {
        return Err(Error::param(
            "target",
            format!("{seeds_per_run} seeds already exceed the target mean"),
        ));
    }
    let mut lo = 0.0;
    let mut hi = 0.05 * mu;
    loop {
        let m = mean_at(hi)?;
        if target.contains(m) {
            return done(hi, m);
        }
        if m > target.upper {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > MAX_BRACKET_RATE {
            return Err(Error::param(
                "target",
                format!("mean outbreak stays at {m}, below the target, at rate {lo}"),
            ));
        }
    }
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let m = mean_at(mid)?;
        if target.contains(m) {
            return done(mid, m);
        }
        if m < target.lower {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(None)
}

/// One entry of a topology comparison: the generators for the host and
/// reservoir layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyCase {
    pub name: String,
    pub host: NetworkSpec,
    pub reservoir: NetworkSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyThreshold {
    pub name: String,
    pub beta22: f64,
    pub calibrated_mean: f64,
    /// Smallest random link count with spillover probability at least
    /// `p_threshold`; `None` when even `max_links` falls short.
    pub min_links: Option<usize>,
}

pub const TOPOLOGY_CSV_HEADER: &str = "topology,beta22,calibrated_mean,min_links";

pub fn write_topology_csv(rows: &[TopologyThreshold], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{TOPOLOGY_CSV_HEADER}")?;
    for t in rows {
        let links = t.min_links.map_or(String::new(), |c| c.to_string());
        writeln!(out, "{},{},{},{links}", t.name, t.beta22, t.calibrated_mean)?;
    }
    Ok(())
}

/// Smallest number of random inter-links with spillover probability at least
/// `cfg.p_threshold`: doubling from one link, then integer bisection.
pub fn minimal_link_count(
    pops: &Populations,
    params: &EpidemicParams,
    max_links: usize,
    cfg: &SpilloverConfig,
) -> Result<Option<usize>> {
    check_link_count(pops, max_links)?;
    if params.beta12 == 0.0 || max_links == 0 {
        // Nothing can cross into the host.
        return Ok(None);
    }
    let reaches = |c: usize| -> Result<bool> {
        Ok(estimate_probability(pops, params, c, CouplingMode::Random, cfg)? >= cfg.p_threshold)
    };
    let mut lo = 0;
    let mut hi = 1;
    while !reaches(hi)? {
        if hi == max_links {
            return Ok(None);
        }
        lo = hi;
        hi = (2 * hi).min(max_links);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Calibrates each reservoir to `target`, then finds the minimal link count
/// for spillover at rate `beta12`. Topology `i` builds its layers from setup
/// seeds of `cfg.master_seed`.
pub fn topology_threshold_links(
    cases: &[TopologyCase],
    beta12: f64,
    mu: f64,
    target: CalibrationTarget,
    max_links: Option<usize>,
    cfg: &SpilloverConfig,
) -> Result<Vec<TopologyThreshold>> {
    let mut rows = Vec::with_capacity(cases.len());
    for (i, case) in cases.iter().enumerate() {
        let i = i as u64;
        let host = case
            .host
            .build(setup_seed(cfg.master_seed, SetupLabel::TopologyHost(i)))?;
        let reservoir = Arc::new(
            case.reservoir
                .build(setup_seed(cfg.master_seed, SetupLabel::TopologyReservoir(i)))?,
        );
        let cal = calibrate_reservoir_rate(
            &reservoir,
            target,
            cfg.seeds_per_run,
            mu,
            cfg.realizations,
            cfg.master_seed,
        )?;
        let pops = Populations::new(host, reservoir);
        let params = EpidemicParams {
            beta12,
            beta22: cal.beta22,
            mu,
            ..Default::default()
        };
        let min_links = minimal_link_count(&pops, &params, max_links.unwrap_or(pops.capacity()), cfg)?;
        rows.push(TopologyThreshold {
            name: case.name.clone(),
            beta22: cal.beta22,
            calibrated_mean: cal.mean,
            min_links,
        });
    }
    Ok(rows)
}
