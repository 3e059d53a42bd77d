use std::collections::{BTreeSet, HashSet};

use rand::seq::index;
use rand::Rng;

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream_rng, Stream};

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(name, format!("{p} is not a probability in [0, 1]")))
    }
}

fn check_nodes(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::param("n", "a graph needs at least one node"))
    } else {
        Ok(())
    }
}

/// Draws `m` distinct indices from `0..total`.
///
/// For `m <= total / 2` indices are drawn one after another with rejection of
/// repeats, so with the same RNG state the sample for a smaller `m` is a prefix
/// of the sample for a larger one.
pub(crate) fn distinct_indices<R: Rng + ?Sized>(rng: &mut R, total: u64, m: u64) -> Vec<u64> {
    assert!(m <= total);
    if m == 0 {
        return Vec::new();
    }
    if m <= total / 2 {
        let mut seen = HashSet::with_capacity(m as usize);
        let mut out = Vec::with_capacity(m as usize);
        while (out.len() as u64) < m {
            let k = rng.random_range(0..total);
            if seen.insert(k) {
                out.push(k);
            }
        }
        out
    } else {
        let total = usize::try_from(total).expect("index space fits in memory");
        index::sample(rng, total, m as usize)
            .into_iter()
            .map(|k| k as u64)
            .collect()
    }
}

/// Maps `k` in `0..n(n-1)/2` to the `k`-th pair `(u, v)`, `u < v`, in
/// lexicographic order.
fn unrank_pair(k: u64, n: u64) -> (usize, usize) {
    // Pairs before row u: u(2n - u - 1)/2.
    let before = |u: u64| u * (2 * n - u - 1) / 2;
    let nf = n as f64;
    let disc = (2.0 * nf - 1.0).powi(2) - 8.0 * k as f64;
    let mut u = (((2.0 * nf - 1.0) - disc.max(0.0).sqrt()) / 2.0).floor().max(0.0) as u64;
    u = u.min(n - 2);
    while u > 0 && before(u) > k {
        u -= 1;
    }
    while u + 1 < n - 1 && before(u + 1) <= k {
        u += 1;
    }
    let v = u + 1 + (k - before(u));
    (u as usize, v as usize)
}

/// Gilbert random graph `G(n, p)`: every pair is an edge independently with
/// probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_nodes(n)?;
    check_probability("p", p)?;
    let mut rng = stream_rng(seed, Stream::Graph);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_sorted_unique(n, &edges))
}

/// Uniform random graph with exactly `m` edges, `G(n, m)`.
pub fn gen_erdos_renyi_gnm(n: usize, m: usize, seed: u64) -> Result<Graph> {
    check_nodes(n)?;
    let total = (n as u64) * (n as u64 - 1) / 2;
    if m as u64 > total {
        return Err(Error::param(
            "m",
            format!("{m} edges requested but only {total} node pairs exist"),
        ));
    }
    let mut rng = stream_rng(seed, Stream::Graph);
    let mut edges: Vec<_> = distinct_indices(&mut rng, total, m as u64)
        .into_iter()
        .map(|k| unrank_pair(k, n as u64))
        .collect();
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, &edges))
}

/// Watts–Strogatz small world: a ring lattice where every node links to its
/// `k/2` nearest neighbors on each side, after which the far endpoint of each
/// lattice edge is rewired with probability `p_rewire`. Rewired targets avoid
/// self-loops and duplicates; an edge whose source is already adjacent to
/// every other node stays in place. The edge count is always `n k / 2`.
pub fn gen_watts_strogatz(n: usize, k: usize, p_rewire: f64, seed: u64) -> Result<Graph> {
    check_nodes(n)?;
    check_probability("p_rewire", p_rewire)?;
    if !k.is_multiple_of(2) {
        return Err(Error::param("k", format!("mean degree {k} must be even")));
    }
    if k >= n {
        return Err(Error::param(
            "k",
            format!("mean degree {k} must be below the node count {n}"),
        ));
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut rng = stream_rng(seed, Stream::Graph);
    for j in 1..=k / 2 {
        for u in 0..n {
            if rng.random::<f64>() >= p_rewire {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let v = (u + j) % n;
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges: Vec<_> = adj
        .iter()
        .enumerate()
        .flat_map(|(u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
        .collect();
    Ok(Graph::from_sorted_unique(n, &edges))
}

/// Barabási–Albert preferential attachment. Starts from a clique on
/// `m_attach + 1` nodes; every later node links to `m_attach` distinct
/// existing nodes chosen with probability proportional to degree. Produces
/// `C(m_attach + 1, 2) + (n - m_attach - 1) m_attach` edges.
pub fn gen_barabasi_albert(n: usize, m_attach: usize, seed: u64) -> Result<Graph> {
    check_nodes(n)?;
    if m_attach == 0 || m_attach >= n {
        return Err(Error::param(
            "m_attach",
            format!("need 1 <= m_attach < n, got m_attach = {m_attach}, n = {n}"),
        ));
    }
    let mut rng = stream_rng(seed, Stream::Graph);
    let mut edges = Vec::with_capacity(m_attach * n);
    // Every node appears once per incident edge.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m_attach * n);
    for u in 0..=m_attach {
        for v in u + 1..=m_attach {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut targets = Vec::with_capacity(m_attach);
    for new in m_attach + 1..n {
        targets.clear();
        while targets.len() < m_attach {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, new));
            endpoints.push(t);
            endpoints.push(new);
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, &edges))
}

/// Barabási–Albert graph trimmed to `target_edges` by deleting uniformly
/// chosen edges from a [`gen_barabasi_albert`] draw. Connectivity is not
/// preserved.
pub fn gen_barabasi_albert_edges(n: usize, m_attach: usize, target_edges: usize, seed: u64) -> Result<Graph> {
    let full = gen_barabasi_albert(n, m_attach, seed)?;
    let have = full.edge_count();
    if target_edges > have {
        return Err(Error::param(
            "target_edges",
            format!("{target_edges} exceeds the {have} edges produced with m_attach = {m_attach}"),
        ));
    }
    let mut rng = stream_rng(derive_seed(seed, 0), Stream::Graph);
    let mut drop = vec![false; have];
    for k in index::sample(&mut rng, have, have - target_edges) {
        drop[k] = true;
    }
    let edges: Vec<_> = full
        .edges()
        .zip(drop)
        .filter_map(|(e, d)| (!d).then_some(e))
        .collect();
    Ok(Graph::from_sorted_unique(n, &edges))
}
