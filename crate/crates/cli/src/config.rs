use std::path::{Path, PathBuf};

use clap::ValueEnum;
use netspill::netgen::{LinkSpec, NetworkSpec};
use netspill::spillover::{CouplingDraw, TopologyCase};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ThresholdCurve,
    Meanfield,
    Simulate,
    SweepLinks,
    SweepBeta,
    Boundary,
    Calibrate,
    TopologyCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ThresholdCurve => "threshold-curve",
            Command::Meanfield => "meanfield",
            Command::Simulate => "simulate",
            Command::SweepLinks => "sweep-links",
            Command::SweepBeta => "sweep-beta",
            Command::Boundary => "boundary",
            Command::Calibrate => "calibrate",
            Command::TopologyCompare => "topology-compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingModeKey {
    #[default]
    Random,
    Hubs,
}

/// One flat run configuration. Every key is optional in the file; commands
/// check for what they need and fill in defaults. The keys are listed in
/// the guide's command-line chapter.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer1: Option<NetworkSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer2: Option<NetworkSpec>,
    /// Use the layer-1 graph instance for layer 2 as well.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub same_instance: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub write_networks: Option<bool>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omegas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link_fraction: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta11: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta12: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta21: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta22: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau2: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau2_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_max_iter: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_nodes: Option<bool>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_layer: Option<u8>,
    /// Explicit seed nodes (local indices in `seed_layer`) for `simulate`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds_per_run: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_events: Option<bool>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub realizations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fraction_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta12_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_mode: Option<CouplingModeKey>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_hubs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_draw: Option<CouplingDraw>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_threshold: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_threshold: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub bisection_lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bisection_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bisection_iterations: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub topologies: Option<Vec<TopologyCase>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_links: Option<usize>,
}

pub fn parse_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_config_str(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, CliError> {
    let cfg: RunConfig =
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_string()))?;
    cfg.check_ranges()?;
    Ok(cfg)
}

fn key_error(key: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("key `{key}`: {why}"))
}

impl RunConfig {
    /// Values in `over` replace those in `self`.
    pub fn merge(mut self, over: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            command,
            master_seed,
            out,
            threads,
            layer1,
            layer2,
            same_instance,
            write_networks,
            omega,
            omegas,
            link_count,
            link_fraction,
            alpha,
            mu,
            beta11,
            beta12,
            beta21,
            beta22,
            tau1,
            tau2,
            tau2_grid,
            power_tol,
            power_max_iter,
            t_end,
            dt,
            init_fraction,
            record_nodes,
            seed_layer,
            seeds,
            seeds_per_run,
            t_max,
            record_events,
            realizations,
            fraction_grid,
            beta12_grid,
            coupling_mode,
            num_hubs,
            coupling_draw,
            size_threshold,
            p_threshold,
            bisection_lower,
            bisection_upper,
            bisection_iterations,
            target_lower,
            target_upper,
            topologies,
            max_links
        );
        self
    }

    /// Range checks that need no other key.
    pub fn check_ranges(&self) -> Result<(), CliError> {
        let prob = |key: &str, v: Option<f64>| match v {
            Some(x) if !(0.0..=1.0).contains(&x) => Err(key_error(key, format!("{x} is outside [0, 1]"))),
            _ => Ok(()),
        };
        prob("omega", self.omega)?;
        if let Some(ws) = &self.omegas {
            for &w in ws {
                prob("omegas", Some(w))?;
            }
        }
        prob("link_fraction", self.link_fraction)?;
        prob("init_fraction", self.init_fraction)?;
        prob("p_threshold", self.p_threshold)?;
        for (key, v) in [
            ("beta11", self.beta11),
            ("beta12", self.beta12),
            ("beta21", self.beta21),
            ("beta22", self.beta22),
            ("tau1", self.tau1),
            ("tau2", self.tau2),
            ("t_max", self.t_max),
        ] {
            if let Some(x) = v {
                if !(x >= 0.0 && x.is_finite()) {
                    return Err(key_error(key, format!("{x} must be finite and >= 0")));
                }
            }
        }
        for (key, v) in [
            ("mu", self.mu),
            ("alpha", self.alpha),
            ("dt", self.dt),
            ("power_tol", self.power_tol),
        ] {
            if let Some(x) = v {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(key_error(key, format!("{x} must be finite and > 0")));
                }
            }
        }
        if let Some(l) = self.seed_layer {
            if l != 1 && l != 2 {
                return Err(key_error("seed_layer", format!("{l} is not 1 or 2")));
            }
        }
        for (key, v) in [("realizations", self.realizations), ("threads", self.threads)] {
            if v == Some(0) {
                return Err(key_error(key, "must be at least 1"));
            }
        }
        let couplings = [
            self.omega.is_some(),
            self.link_count.is_some(),
            self.link_fraction.is_some(),
        ];
        if couplings.iter().filter(|&&b| b).count() > 1 {
            return Err(CliError::Config(
                "keys `omega`, `link_count` and `link_fraction` are mutually exclusive".into(),
            ));
        }
        Ok(())
    }

    pub fn master_seed(&self) -> Result<u64, CliError> {
        self.master_seed
            .ok_or_else(|| key_error("master_seed", "missing mandatory key"))
    }

    pub fn require<'a, T>(&self, key: &str, v: &'a Option<T>) -> Result<&'a T, CliError> {
        v.as_ref()
            .ok_or_else(|| key_error(key, format!("required by `{}`", self.command_name())))
    }

    fn command_name(&self) -> &'static str {
        self.command.map_or("this command", Command::name)
    }

    /// The single coupling of `threshold-curve`, `meanfield` and `simulate`.
    pub fn link_spec(&self) -> Option<LinkSpec> {
        if let Some(w) = self.omega {
            Some(LinkSpec::Probability(w))
        } else if let Some(c) = self.link_count {
            Some(LinkSpec::Count(c))
        } else {
            self.link_fraction.map(LinkSpec::Fraction)
        }
    }
}
