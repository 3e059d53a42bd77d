use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::generators::*;
use super::graph::Graph;
use super::io::load_graph;
use crate::error::{Error, Result};

/// A recipe for one layer: a generator with its parameters, or a file.
///
/// Written as `kind:args`, e.g. `ws:500,20,0.2`, `er:500,0.02`,
/// `gnm:1000,3255`, `ba:1000,3`, `ba:1000,3,2957` (trimmed to 2957 edges),
/// or `file:path/to/edges.txt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NetworkSpec {
    ErdosRenyi {
        n: usize,
        p: f64,
    },
    ErdosRenyiGnm {
        n: usize,
        m: usize,
    },
    WattsStrogatz {
        n: usize,
        k: usize,
        p_rewire: f64,
    },
    BarabasiAlbert {
        n: usize,
        m_attach: usize,
        target_edges: Option<usize>,
    },
    File(PathBuf),
}

impl NetworkSpec {
    pub fn build(&self, seed: u64) -> Result<Graph> {
        match *self {
            NetworkSpec::ErdosRenyi { n, p } => gen_erdos_renyi(n, p, seed),
            NetworkSpec::ErdosRenyiGnm { n, m } => gen_erdos_renyi_gnm(n, m, seed),
            NetworkSpec::WattsStrogatz { n, k, p_rewire } => gen_watts_strogatz(n, k, p_rewire, seed),
            NetworkSpec::BarabasiAlbert {
                n,
                m_attach,
                target_edges: None,
            } => gen_barabasi_albert(n, m_attach, seed),
            NetworkSpec::BarabasiAlbert {
                n,
                m_attach,
                target_edges: Some(e),
            } => gen_barabasi_albert_edges(n, m_attach, e, seed),
            NetworkSpec::File(ref path) => load_graph(path),
        }
    }

    /// Node count, when known without building.
    pub fn node_count(&self) -> Option<usize> {
        match *self {
            NetworkSpec::ErdosRenyi { n, .. }
            | NetworkSpec::ErdosRenyiGnm { n, .. }
            | NetworkSpec::WattsStrogatz { n, .. }
            | NetworkSpec::BarabasiAlbert { n, .. } => Some(n),
            NetworkSpec::File(_) => None,
        }
    }
}

impl fmt::Display for NetworkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkSpec::ErdosRenyi { n, p } => write!(f, "er:{n},{p}"),
            NetworkSpec::ErdosRenyiGnm { n, m } => write!(f, "gnm:{n},{m}"),
            NetworkSpec::WattsStrogatz { n, k, p_rewire } => write!(f, "ws:{n},{k},{p_rewire}"),
            NetworkSpec::BarabasiAlbert {
                n,
                m_attach,
                target_edges,
            } => match target_edges {
                None => write!(f, "ba:{n},{m_attach}"),
                Some(e) => write!(f, "ba:{n},{m_attach},{e}"),
            },
            NetworkSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for NetworkSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::param("network", format!("`{s}`: {why}"));
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| bad("expected `kind:args`, e.g. `ws:500,20,0.2`"))?;
        if kind == "file" {
            return Ok(NetworkSpec::File(PathBuf::from(args)));
        }
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let int = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .ok_or_else(|| bad("too few arguments"))?
                .parse()
                .map_err(|_| bad("expected an integer"))
        };
        let real = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| bad("too few arguments"))?
                .parse()
                .map_err(|_| bad("expected a number"))
        };
        let arity = |want: &[usize]| {
            if want.contains(&parts.len()) {
                Ok(())
            } else {
                Err(bad("wrong number of arguments"))
            }
        };
        match kind {
            "er" => {
                arity(&[2])?;
                Ok(NetworkSpec::ErdosRenyi {
                    n: int(0)?,
                    p: real(1)?,
                })
            }
            "gnm" => {
                arity(&[2])?;
                Ok(NetworkSpec::ErdosRenyiGnm {
                    n: int(0)?,
                    m: int(1)?,
                })
            }
            "ws" => {
                arity(&[3])?;
                Ok(NetworkSpec::WattsStrogatz {
                    n: int(0)?,
                    k: int(1)?,
                    p_rewire: real(2)?,
                })
            }
            "ba" => {
                arity(&[2, 3])?;
                Ok(NetworkSpec::BarabasiAlbert {
                    n: int(0)?,
                    m_attach: int(1)?,
                    target_edges: if parts.len() == 3 { Some(int(2)?) } else { None },
                })
            }
            _ => Err(bad("unknown kind; use er, gnm, ws, ba or file")),
        }
    }
}

impl TryFrom<String> for NetworkSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<NetworkSpec> for String {
    fn from(spec: NetworkSpec) -> String {
        spec.to_string()
    }
}
