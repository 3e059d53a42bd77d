//! Exact continuous-time Markov chain simulation of SIR on coupled layers.
//!
//! A susceptible node of layer `m` becomes infected at rate
//! `beta_m1 * (infected layer-1 neighbors) + beta_m2 * (infected layer-2
//! neighbors)`; an infected node recovers at rate `mu`. Events are drawn with
//! the direct Gillespie method. Per-node transition rates live in a binary sum
//! tree whose internal nodes are recomputed from their children on every
//! update, so the total rate never accumulates round-off drift.

use std::io::Write;

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::{Layer, LayeredNetwork};
use crate::params::EpidemicParams;
use crate::rng::{derive_seed, stream_rng, Stream};

/// Binary tree of non-negative weights supporting O(log n) update and
/// proportional sampling.
#[derive(Debug, Clone)]
pub(crate) struct SumTree {
    leaves: usize,
    nodes: Vec<f64>,
}

impl SumTree {
    pub(crate) fn new(n: usize) -> Self {
        let leaves = n.next_power_of_two().max(1);
        SumTree {
            leaves,
            nodes: vec![0.0; 2 * leaves],
        }
    }

    pub(crate) fn total(&self) -> f64 {
        self.nodes[1]
    }

    pub(crate) fn get(&self, i: usize) -> f64 {
        self.nodes[self.leaves + i]
    }

    pub(crate) fn set(&mut self, i: usize, w: f64) {
        let mut k = self.leaves + i;
        self.nodes[k] = w;
        while k > 1 {
            k /= 2;
            self.nodes[k] = self.nodes[2 * k] + self.nodes[2 * k + 1];
        }
    }

    /// Leaf `i` such that the prefix sum before `i` is `<= u` and the prefix
    /// sum through `i` exceeds it. `u` must be in `[0, total)`.
    pub(crate) fn find(&self, mut u: f64) -> usize {
        let mut k = 1;
        while k < self.leaves {
            let left = self.nodes[2 * k];
            if u < left {
                k *= 2;
            } else {
                u -= left;
                k = 2 * k + 1;
            }
        }
        k - self.leaves
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transition {
    Infection,
    Recovery,
}

impl Transition {
    fn as_str(self) -> &'static str {
        match self {
            Transition::Infection => "infection",
            Transition::Recovery => "recovery",
        }
    }
}

/// One state change of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    /// Local index within `layer`.
    pub node: usize,
    pub layer: Layer,
    pub transition: Transition,
}

/// Summary of one realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationOutcome {
    /// Nodes that were ever infected, seeds included: `[layer 1, layer 2]`.
    pub ever_infected: [usize; 2],
    /// Time of the last recovery, or of the cutoff when `t_max` stopped the run.
    pub extinction_time: f64,
    /// True if the run hit `t_max` with infected nodes remaining.
    pub truncated: bool,
    pub events: Option<Vec<Event>>,
    pub rng_seed: u64,
}

impl RealizationOutcome {
    pub fn ever_infected_in(&self, layer: Layer) -> usize {
        self.ever_infected[layer.index()]
    }

    pub const EVENT_CSV_HEADER: &'static str = "t,node,layer,transition";

    /// Event log as `t,node,layer,transition`; header only when no log was kept.
    pub fn write_event_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{}", Self::EVENT_CSV_HEADER)?;
        for e in self.events.iter().flatten() {
            writeln!(
                out,
                "{},{},{},{}",
                e.t,
                e.node,
                e.layer.number(),
                e.transition.as_str()
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SimOptions {
    /// Stop once simulated time reaches this value; `None` runs to extinction.
    pub t_max: Option<f64>,
    pub record_events: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Compartment {
    S,
    I,
    R,
}

/// Runs one realization from the given infected seed nodes (global indices).
///
/// Draws from stream [`Stream::Dynamics`] of `rng_seed`, so identical inputs
/// give identical outcomes.
pub fn simulate(
    net: &LayeredNetwork,
    params: &EpidemicParams,
    seeds: &[usize],
    rng_seed: u64,
    opts: SimOptions,
) -> Result<RealizationOutcome> {
    params.validate()?;
    if let Some(&bad) = seeds.iter().find(|&&s| s >= net.node_count()) {
        return Err(Error::param(
            "seeds",
            format!("node {bad} out of range for {} nodes", net.node_count()),
        ));
    }
    if let Some(t) = opts.t_max {
        if t.is_nan() || t < 0.0 {
            return Err(Error::param("t_max", format!("{t} must be >= 0")));
        }
    }
    let mut rng = stream_rng(rng_seed, Stream::Dynamics);
    Ok(run_chain(net, params, seeds, &mut rng, rng_seed, opts))
}

struct Chain<'a> {
    net: &'a LayeredNetwork,
    params: &'a EpidemicParams,
    /// Per node: infected neighbors in layer 1 and in layer 2.
    pressure: Vec<[u32; 2]>,
    state: Vec<Compartment>,
    rates: SumTree,
    ever: [usize; 2],
    infected: usize,
}

impl<'a> Chain<'a> {
    fn new(net: &'a LayeredNetwork, params: &'a EpidemicParams) -> Self {
        let n = net.node_count();
        Chain {
            net,
            params,
            pressure: vec![[0; 2]; n],
            state: vec![Compartment::S; n],
            rates: SumTree::new(n),
            ever: [0; 2],
            infected: 0,
        }
    }

    fn layer_of(&self, v: usize) -> Layer {
        if v < self.net.n1() {
            Layer::One
        } else {
            Layer::Two
        }
    }

    /// Moves `v` into or out of I and refreshes its susceptible neighbors.
    fn set_infectious(&mut self, v: usize, now_infectious: bool) {
        let source = self.layer_of(v).index();
        let Chain {
            net,
            params,
            pressure,
            state,
            rates,
            ..
        } = self;
        let n1 = net.n1();
        net.for_each_neighbor(v, |_, w| {
            let counts = &mut pressure[w];
            if now_infectious {
                counts[source] += 1;
            } else {
                counts[source] -= 1;
            }
            if state[w] == Compartment::S {
                let target = if w < n1 { Layer::One } else { Layer::Two };
                let rate = params.beta(target, Layer::One) * counts[0] as f64
                    + params.beta(target, Layer::Two) * counts[1] as f64;
                rates.set(w, rate);
            }
        });
    }

    fn infect(&mut self, v: usize) {
        self.state[v] = Compartment::I;
        self.infected += 1;
        self.ever[self.layer_of(v).index()] += 1;
        self.rates.set(v, self.params.mu);
        self.set_infectious(v, true);
    }

    fn recover(&mut self, v: usize) {
        self.state[v] = Compartment::R;
        self.infected -= 1;
        self.rates.set(v, 0.0);
        self.set_infectious(v, false);
    }
}

fn run_chain(
    net: &LayeredNetwork,
    params: &EpidemicParams,
    seeds: &[usize],
    rng: &mut ChaCha8Rng,
    rng_seed: u64,
    opts: SimOptions,
) -> RealizationOutcome {
    let n = net.node_count();
    let mut chain = Chain::new(net, params);
    let mut events = opts.record_events.then(Vec::new);
    for &s in seeds {
        if chain.state[s] == Compartment::S {
            chain.infect(s);
        }
    }

    let t_max = opts.t_max.unwrap_or(f64::INFINITY);
    let mut t = 0.0;
    let mut truncated = false;
    while chain.infected > 0 {
        let total = chain.rates.total();
        let u: f64 = rng.random();
        let wait = -(1.0 - u).ln() / total;
        if t + wait >= t_max {
            t = t_max;
            truncated = true;
            break;
        }
        t += wait;
        // Rounding can land on a zero-weight leaf at a boundary; redraw.
        let v = loop {
            let v = chain.rates.find(rng.random::<f64>() * total);
            if v < n && chain.rates.get(v) > 0.0 {
                break v;
            }
        };
        let transition = match chain.state[v] {
            Compartment::I => {
                chain.recover(v);
                Transition::Recovery
            }
            Compartment::S => {
                chain.infect(v);
                Transition::Infection
            }
            Compartment::R => unreachable!("recovered nodes carry zero rate"),
        };
        if let Some(log) = events.as_mut() {
            let (layer, node) = net.locate(v);
            log.push(Event {
                t,
                node,
                layer,
                transition,
            });
        }
    }
    RealizationOutcome {
        ever_infected: chain.ever,
        extinction_time: t,
        truncated,
        events,
        rng_seed,
    }
}

/// Which layer receives the initial infections, and how many.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedStrategy {
    pub layer: Layer,
    pub count: usize,
}

impl SeedStrategy {
    /// Draws `count` distinct nodes of `layer` (global indices) from stream
    /// [`Stream::Seeding`] of `seed`.
    pub fn draw(&self, net: &LayeredNetwork, seed: u64) -> Result<Vec<usize>> {
        let n = net.layer(self.layer).node_count();
        if self.count > n {
            return Err(Error::param(
                "seeds_per_run",
                format!("{} seeds requested from a {n}-node layer", self.count),
            ));
        }
        let mut rng = stream_rng(seed, Stream::Seeding);
        let mut seeds: Vec<usize> = index::sample(&mut rng, n, self.count)
            .into_iter()
            .map(|local| net.global(self.layer, local))
            .collect();
        seeds.sort_unstable();
        Ok(seeds)
    }
}

/// `realizations` independent runs. Realization `r` uses seed
/// [`derive_seed`]`(master_seed, r)` for both its seed nodes and its dynamics.
/// Runs execute in parallel; output is ordered by realization index and does
/// not depend on scheduling.
pub fn run_ensemble(
    net: &LayeredNetwork,
    params: &EpidemicParams,
    strategy: SeedStrategy,
    realizations: usize,
    master_seed: u64,
) -> Result<Vec<RealizationOutcome>> {
    if realizations == 0 {
        return Err(Error::param("realizations", "need at least one realization"));
    }
    params.validate()?;
    (0..realizations as u64)
        .into_par_iter()
        .map(|r| {
            let seed = derive_seed(master_seed, r);
            let seeds = strategy.draw(net, seed)?;
            simulate(net, params, &seeds, seed, SimOptions::default())
        })
        .collect()
}

pub const ENSEMBLE_CSV_HEADER: &str = "realization,ever_infected_layer1,ever_infected_layer2,extinction_time";

pub fn write_ensemble_csv(outcomes: &[RealizationOutcome], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{ENSEMBLE_CSV_HEADER}")?;
    for (r, o) in outcomes.iter().enumerate() {
        writeln!(
            out,
            "{r},{},{},{}",
            o.ever_infected[0], o.ever_infected[1], o.extinction_time
        )?;
    }
    Ok(())
}
