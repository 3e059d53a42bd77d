//! Node-level mean-field SIR dynamics on coupled layers.
//!
//! For node `v` of layer `m`, with infection pressure
//! `P_v = beta_m1 sum_{z in layer 1} a_vz I_z + beta_m2 sum_{z in layer 2} a_vz I_z`:
//!
//! ```text
//! dS_v/dt = -S_v P_v
//! dI_v/dt =  S_v P_v - mu I_v
//! dR_v/dt =  mu I_v
//! ```
//!
//! integrated with the classic fixed-step fourth-order Runge–Kutta scheme.

use std::io::Write;

use rand::seq::index;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::netgen::{Layer, LayeredNetwork};
use crate::params::EpidemicParams;
use crate::rng::{stream_rng, Stream};

/// Per-step tolerance on the simplex invariants before integration aborts.
pub const STEP_TOLERANCE: f64 = 1e-6;

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_T_END: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeState {
    pub s: f64,
    pub i: f64,
    pub r: f64,
}

impl NodeState {
    pub const SUSCEPTIBLE: NodeState = NodeState {
        s: 1.0,
        i: 0.0,
        r: 0.0,
    };
    pub const INFECTED: NodeState = NodeState {
        s: 0.0,
        i: 1.0,
        r: 0.0,
    };

    fn clamped(self) -> Self {
        NodeState {
            s: self.s.max(0.0),
            i: self.i.max(0.0),
            r: self.r.max(0.0),
        }
    }
}

/// Expected compartment counts of one layer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LayerTotals {
    pub s: f64,
    pub i: f64,
    pub r: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `[layer 1, layer 2]` totals at each sample.
    pub totals: Vec<[LayerTotals; 2]>,
    /// Clamped node states at each sample, global node order; present when
    /// requested.
    pub states: Option<Vec<Vec<NodeState>>>,
}

impl Trajectory {
    pub fn final_totals(&self) -> [LayerTotals; 2] {
        *self.totals.last().expect("trajectory has at least one sample")
    }

    pub const CSV_HEADER: &'static str = "t,layer,S,I,R";

    /// `t,layer,S,I,R`, one row per sample and layer.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for (t, totals) in self.times.iter().zip(&self.totals) {
            for (layer, tot) in totals.iter().enumerate() {
                writeln!(out, "{t},{},{},{},{}", layer + 1, tot.s, tot.i, tot.r)?;
            }
        }
        Ok(())
    }

    /// `t,node,S,I,R` for every node at every sample. Requires recorded states.
    pub fn write_node_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "t,node,S,I,R")?;
        let Some(states) = &self.states else {
            return Ok(());
        };
        for (t, row) in self.times.iter().zip(states) {
            for (v, st) in row.iter().enumerate() {
                writeln!(out, "{t},{v},{},{},{}", st.s, st.i, st.r)?;
            }
        }
        Ok(())
    }
}

/// Integration settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanField {
    pub t_end: f64,
    pub dt: f64,
    pub record_nodes: bool,
}

impl Default for MeanField {
    fn default() -> Self {
        MeanField {
            t_end: DEFAULT_T_END,
            dt: DEFAULT_DT,
            record_nodes: false,
        }
    }
}

/// Flat state: `s` for all nodes, then `i`, then `r`.
struct Rhs<'a> {
    net: &'a LayeredNetwork,
    params: &'a EpidemicParams,
    pressure: Vec<f64>,
}

impl Rhs<'_> {
    /// `pressure[v] = P_v` for infection probabilities `inf`.
    fn fill_pressure(&mut self, inf: &[f64]) {
        let net = self.net;
        let n1 = net.n1();
        let links = net.interlinks();
        let p = self.params;
        let (inf1, inf2) = inf.split_at(n1);
        for u in 0..n1 {
            let within: f64 = net.layer1().neighbors(u).iter().map(|&z| inf1[z]).sum();
            let across: f64 = links.partners_of_layer1(u).iter().map(|&w| inf2[w]).sum();
            self.pressure[u] = p.beta11 * within + p.beta12 * across;
        }
        for w in 0..net.n2() {
            let across: f64 = links.partners_of_layer2(w).iter().map(|&u| inf1[u]).sum();
            let within: f64 = net.layer2().neighbors(w).iter().map(|&z| inf2[z]).sum();
            self.pressure[n1 + w] = p.beta21 * across + p.beta22 * within;
        }
    }

    fn eval(&mut self, x: &[f64], dx: &mut [f64]) {
        let n = self.net.node_count();
        let (s, rest) = x.split_at(n);
        let (i, _) = rest.split_at(n);
        self.fill_pressure(i);
        let mu = self.params.mu;
        let (ds, rest) = dx.split_at_mut(n);
        let (di, dr) = rest.split_at_mut(n);
        for v in 0..n {
            let flux = s[v] * self.pressure[v];
            ds[v] = -flux;
            di[v] = flux - mu * i[v];
            dr[v] = mu * i[v];
        }
    }
}

fn check_state(init: &[NodeState], n: usize) -> Result<()> {
    if init.len() != n {
        return Err(Error::param(
            "init",
            format!("{} node states given for {n} nodes", init.len()),
        ));
    }
    for (v, st) in init.iter().enumerate() {
        let ok = [st.s, st.i, st.r].iter().all(|&x| (0.0..=1.0).contains(&x))
            && (st.s + st.i + st.r - 1.0).abs() <= 1e-9;
        if !ok {
            return Err(Error::param(
                "init",
                format!("node {v} state {st:?} is not a probability triple"),
            ));
        }
    }
    Ok(())
}

impl MeanField {
    pub fn integrate(
        &self,
        net: &LayeredNetwork,
        params: &EpidemicParams,
        init: &[NodeState],
    ) -> Result<Trajectory> {
        params.validate()?;
        let n = net.node_count();
        check_state(init, n)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("dt", format!("step {} must be > 0", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::param("t_end", format!("{} must be >= 0", self.t_end)));
        }

        let mut x = vec![0.0; 3 * n];
        for (v, st) in init.iter().enumerate() {
            x[v] = st.s;
            x[n + v] = st.i;
            x[2 * n + v] = st.r;
        }
        let mut rhs = Rhs {
            net,
            params,
            pressure: vec![0.0; n],
        };
        let mut traj = Trajectory {
            times: Vec::new(),
            totals: Vec::new(),
            states: self.record_nodes.then(Vec::new),
        };
        self.record(&mut traj, 0.0, &x, net);

        let steps = (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize;
        let mut k = [
            vec![0.0; 3 * n],
            vec![0.0; 3 * n],
            vec![0.0; 3 * n],
            vec![0.0; 3 * n],
        ];
        let mut stage = vec![0.0; 3 * n];
        let mut t = 0.0;
        for step in 1..=steps {
            let h = if step == steps { self.t_end - t } else { self.dt };
            rhs.eval(&x, &mut k[0]);
            for j in 0..3 * n {
                stage[j] = x[j] + 0.5 * h * k[0][j];
            }
            rhs.eval(&stage, &mut k[1]);
            for j in 0..3 * n {
                stage[j] = x[j] + 0.5 * h * k[1][j];
            }
            rhs.eval(&stage, &mut k[2]);
            for j in 0..3 * n {
                stage[j] = x[j] + h * k[2][j];
            }
            rhs.eval(&stage, &mut k[3]);
            for j in 0..3 * n {
                x[j] += h / 6.0 * (k[0][j] + 2.0 * k[1][j] + 2.0 * k[2][j] + k[3][j]);
            }
            t = if step == steps {
                self.t_end
            } else {
                step as f64 * self.dt
            };

            for v in 0..n {
                let (s, i, r) = (x[v], x[n + v], x[2 * n + v]);
                let deviation = (s + i + r - 1.0).abs().max(-s.min(i).min(r).min(0.0));
                if deviation > STEP_TOLERANCE || !deviation.is_finite() {
                    return Err(Error::StepSize {
                        t,
                        dt: self.dt,
                        deviation,
                    });
                }
            }
            self.record(&mut traj, t, &x, net);
        }
        Ok(traj)
    }

    fn record(&self, traj: &mut Trajectory, t: f64, x: &[f64], net: &LayeredNetwork) {
        let n = net.node_count();
        let n1 = net.n1();
        let mut totals = [LayerTotals::default(); 2];
        let mut row = self.record_nodes.then(|| Vec::with_capacity(n));
        for v in 0..n {
            let st = NodeState {
                s: x[v],
                i: x[n + v],
                r: x[2 * n + v],
            }
            .clamped();
            let tot = &mut totals[usize::from(v >= n1)];
            tot.s += st.s;
            tot.i += st.i;
            tot.r += st.r;
            if let Some(row) = row.as_mut() {
                row.push(st);
            }
        }
        traj.times.push(t);
        traj.totals.push(totals);
        if let (Some(states), Some(row)) = (traj.states.as_mut(), row) {
            states.push(row);
        }
    }
}

/// Integrates from `init` to `t_end` with step `dt`, recording node states at
/// every step.
pub fn integrate(
    net: &LayeredNetwork,
    params: &EpidemicParams,
    init: &[NodeState],
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    MeanField {
        t_end,
        dt,
        record_nodes: true,
    }
    .integrate(net, params, init)
}

/// All nodes susceptible except `round(fraction * n)` uniformly chosen nodes
/// per layer, which start infected.
pub fn seeded_initial_state(net: &LayeredNetwork, fraction: f64, seed: u64) -> Result<Vec<NodeState>> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::param(
            "init_fraction",
            format!("{fraction} is not in [0, 1]"),
        ));
    }
    let mut rng = stream_rng(seed, Stream::Seeding);
    let mut state = vec![NodeState::SUSCEPTIBLE; net.node_count()];
    for layer in [Layer::One, Layer::Two] {
        let n = net.layer(layer).node_count();
        let k = ((fraction * n as f64) + 0.5).floor() as usize;
        for local in index::sample(&mut rng, n, k.min(n)) {
            state[net.global(layer, local)] = NodeState::INFECTED;
        }
    }
    Ok(state)
}

/// Growth of the total infected mass under the dynamics linearized around the
/// disease-free state (`S = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthIndicator {
    /// `(d/dt sum_v I_v) / sum_v I_v` at the horizon.
    pub rate: f64,
    pub horizon: f64,
}

impl GrowthIndicator {
    pub fn is_growing(&self) -> bool {
        self.rate > 0.0
    }
}

/// Largest initial infection probability accepted by
/// [`linearized_growth_check`].
pub const LINEARIZATION_LIMIT: f64 = 0.01;

/// Relative growth rate of the total infected mass of the linearized system
/// `dI/dt = (B - mu) I`, evaluated after evolving `init` for `horizon` time
/// units (RK4, step `min(0.01, horizon)`). At `horizon = 0` this is the
/// instantaneous rate at `t = 0+`; as the horizon grows it converges to the
/// leading Jacobian eigenvalue whenever `init` overlaps the Perron vector.
pub fn linearized_growth_check(
    net: &LayeredNetwork,
    params: &EpidemicParams,
    init: &[NodeState],
    horizon: f64,
) -> Result<GrowthIndicator> {
    params.validate()?;
    check_state(init, net.node_count())?;
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::param("horizon", format!("{horizon} must be >= 0")));
    }
    if let Some(v) = init.iter().position(|st| st.i > LINEARIZATION_LIMIT) {
        return Err(Error::param(
            "init",
            format!(
                "node {v} has i = {} > {LINEARIZATION_LIMIT}; linearization needs a small seed",
                init[v].i
            ),
        ));
    }
    let n = net.node_count();
    let mut x: Vec<f64> = init.iter().map(|st| st.i).collect();
    let mass: f64 = x.iter().sum();
    if mass == 0.0 {
        return Err(Error::param("init", "no infected mass"));
    }
    x.iter_mut().for_each(|v| *v /= mass);

    let mut rhs = Rhs {
        net,
        params,
        pressure: vec![0.0; n],
    };
    let mu = params.mu;
    let mut linear = |y: &[f64], dy: &mut [f64]| {
        rhs.fill_pressure(y);
        for v in 0..n {
            dy[v] = rhs.pressure[v] - mu * y[v];
        }
    };

    let dt = DEFAULT_DT.min(horizon);
    let steps = if horizon == 0.0 {
        0
    } else {
        (horizon / dt - 1e-9).ceil() as usize
    };
    let mut k = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut stage = vec![0.0; n];
    let mut t = 0.0;
    for step in 1..=steps {
        let h = if step == steps { horizon - t } else { dt };
        linear(&x, &mut k[0]);
        for j in 0..n {
            stage[j] = x[j] + 0.5 * h * k[0][j];
        }
        linear(&stage, &mut k[1]);
        for j in 0..n {
            stage[j] = x[j] + 0.5 * h * k[1][j];
        }
        linear(&stage, &mut k[2]);
        for j in 0..n {
            stage[j] = x[j] + h * k[2][j];
        }
        linear(&stage, &mut k[3]);
        for j in 0..n {
            x[j] += h / 6.0 * (k[0][j] + 2.0 * k[1][j] + 2.0 * k[2][j] + k[3][j]);
        }
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);
        t = step as f64 * dt;
    }
    let mut dx = vec![0.0; n];
    linear(&x, &mut dx);
    let rate = dx.iter().sum::<f64>() / x.iter().sum::<f64>();
    Ok(GrowthIndicator { rate, horizon })
}
