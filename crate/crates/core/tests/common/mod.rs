//! Independent oracles shared by the integration and acceptance tests. None
//! of this goes through the library's own numerics.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use netspill::netgen::{couple_random, gen_erdos_renyi, LayeredNetwork, LinkSpec};

/// Exact distribution of the final ever-infected set of an SIR chain on `n`
/// nodes, by recursion over the embedded jump chain. `rate(u, v)` is the rate
/// at which infected `u` infects susceptible `v`. Sets are bit masks.
pub fn final_set_distribution(
    n: usize,
    rate: &dyn Fn(usize, usize) -> f64,
    mu: f64,
    seeds: u32,
) -> BTreeMap<u32, f64> {
    assert!(n <= 16);
    let mut memo = HashMap::new();
    absorb(n, rate, mu, seeds, 0, &mut memo).into_iter().collect()
}

fn absorb(
    n: usize,
    rate: &dyn Fn(usize, usize) -> f64,
    mu: f64,
    inf: u32,
    rec: u32,
    memo: &mut HashMap<(u32, u32), HashMap<u32, f64>>,
) -> HashMap<u32, f64> {
    if inf == 0 {
        return HashMap::from([(rec, 1.0)]);
    }
    if let Some(d) = memo.get(&(inf, rec)) {
        return d.clone();
    }
    let mut moves: Vec<(f64, u32, u32)> = Vec::new();
    for u in (0..n).filter(|&u| inf >> u & 1 == 1) {
        moves.push((mu, inf & !(1 << u), rec | 1 << u));
    }
    for v in (0..n).filter(|&v| (inf | rec) >> v & 1 == 0) {
        let r: f64 = (0..n).filter(|&u| inf >> u & 1 == 1).map(|u| rate(u, v)).sum();
        if r > 0.0 {
            moves.push((r, inf | 1 << v, rec));
        }
    }
    let total: f64 = moves.iter().map(|m| m.0).sum();
    let mut out = HashMap::new();
    for (r, i2, r2) in moves {
        for (set, p) in absorb(n, rate, mu, i2, r2, memo) {
            *out.entry(set).or_insert(0.0) += r / total * p;
        }
    }
    memo.insert((inf, rec), out.clone());
    out
}

/// Dense adjacency blocks `(A11, A12, A22)`.
pub fn dense_blocks(net: &LayeredNetwork) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let (n1, n2) = (net.n1(), net.n2());
    let mut a11 = DMatrix::zeros(n1, n1);
    for (u, v) in net.layer1().edges() {
        a11[(u, v)] = 1.0;
        a11[(v, u)] = 1.0;
    }
    let mut a22 = DMatrix::zeros(n2, n2);
    for (u, v) in net.layer2().edges() {
        a22[(u, v)] = 1.0;
        a22[(v, u)] = 1.0;
    }
    let mut a12 = DMatrix::zeros(n1, n2);
    for &(u, w) in net.interlinks().pairs() {
        a12[(u, w)] = 1.0;
    }
    (a11, a12, a22)
}

/// `A11 + (tau22 / alpha^2) A12 (I - tau22 A22)^-1 A12^T`, by explicit inversion.
pub fn dense_ht(net: &LayeredNetwork, tau22: f64, alpha: f64) -> DMatrix<f64> {
    let (a11, a12, a22) = dense_blocks(net);
    let n2 = net.n2();
    let resolvent = (DMatrix::identity(n2, n2) - a22 * tau22)
        .try_inverse()
        .expect("I - tau22 A22 invertible");
    a11 + (&a12 * resolvent * a12.transpose()) * (tau22 / (alpha * alpha))
}

/// Full block matrix `[t11 A11, t12 A12; t21 A21, t22 A22]`.
pub fn dense_block_matrix(net: &LayeredNetwork, taus: [[f64; 2]; 2]) -> DMatrix<f64> {
    let (a11, a12, a22) = dense_blocks(net);
    let (n1, n2) = (net.n1(), net.n2());
    let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
    m.view_mut((0, 0), (n1, n1)).copy_from(&(a11 * taus[0][0]));
    m.view_mut((0, n1), (n1, n2)).copy_from(&(&a12 * taus[0][1]));
    m.view_mut((n1, 0), (n2, n1))
        .copy_from(&(a12.transpose() * taus[1][0]));
    m.view_mut((n1, n1), (n2, n2)).copy_from(&(a22 * taus[1][1]));
    m
}

/// Largest eigenvalue magnitude of a symmetric matrix.
pub fn dense_radius(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()))
}

/// A small random coupled instance.
pub fn random_instance(n1: usize, n2: usize, p1: f64, p2: f64, omega: f64, seed: u64) -> LayeredNetwork {
    let g1 = gen_erdos_renyi(n1, p1, seed).unwrap();
    let g2 = gen_erdos_renyi(n2, p2, seed ^ 0xA5A5).unwrap();
    couple_random(g1, g2, LinkSpec::Probability(omega), seed).unwrap()
}

/// Whether `k` successes in `n` trials are within `sigmas` binomial standard
/// errors of probability `p`.
pub fn within_binomial(k: usize, n: usize, p: f64, sigmas: f64) -> bool {
    let se = (p * (1.0 - p) / n as f64).sqrt();
    (k as f64 / n as f64 - p).abs() <= sigmas * se
}
