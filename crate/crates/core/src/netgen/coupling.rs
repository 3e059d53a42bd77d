use std::sync::Arc;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::generators::distinct_indices;
use super::graph::{Graph, LayeredNetwork};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// How many inter-layer links to place between an `n1`- and an `n2`-node layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkSpec {
    /// Each of the `n1 * n2` potential pairs independently with probability ω.
    Probability(f64),
    /// Exactly this many distinct pairs.
    Count(usize),
    /// `round(f * n1 * n2)` distinct pairs, rounding half up.
    Fraction(f64),
}

impl LinkSpec {
    pub fn validate(&self, n1: usize, n2: usize) -> Result<()> {
        let capacity = n1 as u64 * n2 as u64;
        match *self {
            LinkSpec::Probability(w) if !(0.0..=1.0).contains(&w) => Err(Error::param(
                "omega",
                format!("{w} is not a probability in [0, 1]"),
            )),
            LinkSpec::Fraction(f) if !(0.0..=1.0).contains(&f) => Err(Error::param(
                "fraction",
                format!("{f} is not a fraction in [0, 1]"),
            )),
            LinkSpec::Count(m) if m as u64 > capacity => Err(Error::param(
                "count",
                format!("{m} links requested but only {capacity} layer pairs exist"),
            )),
            _ => Ok(()),
        }
    }

    /// The exact link count for count and fraction modes; `None` for
    /// probability mode.
    pub fn exact_count(&self, n1: usize, n2: usize) -> Option<usize> {
        match *self {
            LinkSpec::Probability(_) => None,
            LinkSpec::Count(m) => Some(m),
            LinkSpec::Fraction(f) => Some(fraction_to_count(f, n1, n2)),
        }
    }

    /// Expected fraction of the `n1 * n2` pairs that become links.
    pub fn density(&self, n1: usize, n2: usize) -> f64 {
        match *self {
            LinkSpec::Probability(w) => w,
            LinkSpec::Fraction(f) => f,
            LinkSpec::Count(m) => m as f64 / (n1 as f64 * n2 as f64),
        }
    }
}

/// `round(f * n1 * n2)` with halves rounded up.
pub fn fraction_to_count(f: f64, n1: usize, n2: usize) -> usize {
    (f * n1 as f64 * n2 as f64 + 0.5).floor() as usize
}

/// Draws inter-layer pairs according to `spec` from `rng`.
pub fn sample_random_links<R: Rng + ?Sized>(
    rng: &mut R,
    n1: usize,
    n2: usize,
    spec: LinkSpec,
) -> Result<Vec<(usize, usize)>> {
    spec.validate(n1, n2)?;
    let links = match spec {
        LinkSpec::Probability(w) => {
            let mut links = Vec::new();
            for u in 0..n1 {
                for v in 0..n2 {
                    // One uniform per pair keeps link sets nested in ω for a fixed seed.
                    if rng.random::<f64>() < w {
                        links.push((u, v));
                    }
                }
            }
            links
        }
        _ => {
            let m = spec.exact_count(n1, n2).expect("count mode");
            let capacity = n1 as u64 * n2 as u64;
            let m = m.min(capacity as usize);
            distinct_indices(rng, capacity, m as u64)
                .into_iter()
                .map(|k| ((k / n2 as u64) as usize, (k % n2 as u64) as usize))
                .collect()
        }
    };
    Ok(links)
}

/// Couples two layers with randomly placed links.
pub fn couple_random(
    layer1: impl Into<Arc<Graph>>,
    layer2: impl Into<Arc<Graph>>,
    spec: LinkSpec,
    seed: u64,
) -> Result<LayeredNetwork> {
    let (layer1, layer2) = (layer1.into(), layer2.into());
    let mut rng = stream_rng(seed, Stream::Coupling);
    let links = sample_random_links(&mut rng, layer1.node_count(), layer2.node_count(), spec)?;
    LayeredNetwork::new(layer1, layer2, links)
}

/// The `num_hubs` highest-degree nodes of `g`, highest first; ties go to the
/// lower index.
pub fn select_hubs(g: &Graph, num_hubs: usize) -> Result<Vec<usize>> {
    if num_hubs > g.node_count() {
        return Err(Error::param(
            "num_hubs",
            format!("{num_hubs} hubs requested from a {}-node layer", g.node_count()),
        ));
    }
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(g.degree(u)), u));
    order.truncate(num_hubs);
    Ok(order)
}

/// Splits `count` links over `num_hubs` hubs as evenly as possible; the
/// remainder goes to the first (highest-degree) hubs.
pub fn hub_quotas(count: usize, num_hubs: usize) -> Vec<usize> {
    if num_hubs == 0 {
        return Vec::new();
    }
    let (base, extra) = (count / num_hubs, count % num_hubs);
    (0..num_hubs).map(|h| base + usize::from(h < extra)).collect()
}

/// Draws hub-targeted links: hub `hubs[h]` of layer 2 receives `quotas[h]`
/// distinct partners sampled uniformly from the `n1` layer-1 nodes.
pub fn sample_hub_links<R: Rng + ?Sized>(
    rng: &mut R,
    n1: usize,
    hubs: &[usize],
    count: usize,
) -> Result<Vec<(usize, usize)>> {
    if hubs.is_empty() && count > 0 {
        return Err(Error::param("num_hubs", "no hubs to attach links to"));
    }
    let capacity = hubs.len() * n1;
    if count > capacity {
        return Err(Error::param(
            "count",
            format!(
                "{count} links exceed the capacity {capacity} of {} hubs over {n1} nodes",
                hubs.len()
            ),
        ));
    }
    let mut links = Vec::with_capacity(count);
    for (&hub, quota) in hubs.iter().zip(hub_quotas(count, hubs.len())) {
        for u in index::sample(rng, n1, quota) {
            links.push((u, hub));
        }
    }
    Ok(links)
}

/// Couples two layers by linking layer-1 nodes to the `num_hubs`
/// highest-degree nodes of layer 2.
pub fn couple_to_hubs(
    layer1: impl Into<Arc<Graph>>,
    layer2: impl Into<Arc<Graph>>,
    count: usize,
    num_hubs: usize,
    seed: u64,
) -> Result<LayeredNetwork> {
    let (layer1, layer2) = (layer1.into(), layer2.into());
    let hubs = select_hubs(&layer2, num_hubs)?;
    let mut rng = stream_rng(seed, Stream::Coupling);
    let links = sample_hub_links(&mut rng, layer1.node_count(), &hubs, count)?;
    LayeredNetwork::new(layer1, layer2, links)
}
