//! Spectral epidemic thresholds of two coupled layers.
//!
//! Below threshold the linearized SIR dynamics decay. For coupled layers with
//! strengths `tau_mn = beta_mn / mu` and `tau11 tau22 = alpha^2 tau12 tau21`,
//! the critical layer-1 strength given layer 2 is `tau11c = 1 / rho(H_T)` with
//!
//! ```text
//! H_T = A11 + (tau22 / alpha^2) A12 (I - tau22 A22)^-1 A12^T
//! ```
//!
//! The `1 / alpha^2` follows from substituting `tau12 tau21 = tau11 tau22 /
//! alpha^2` into the layer-1 eigenproblem, and makes the full block matrix
//! have spectral radius 1 at `tau11c`.
//!
//! which requires `tau22 lambda(A22) < 1`. All operators here act on vectors
//! without materializing `H_T` or the block matrix.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::netgen::{Graph, LayeredNetwork};
use crate::params::EpidemicParams;

/// A real linear map on vectors of length [`LinearOperator::dim`].
pub trait LinearOperator {
    fn dim(&self) -> usize;
    /// `y = A x`; `y` is fully overwritten.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for Graph {
    fn dim(&self) -> usize {
        self.node_count()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.adjacency_mul(x, y)
    }
}

/// Wraps a closure as a [`LinearOperator`].
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnOperator { dim, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct PowerOptions {
    /// Relative eigen-residual `|A v - rho v| <= tol * rho` with `|v| = 1`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

/// Dominant eigenvalue and unit eigenvector.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Spectral radius of a non-negative operator by power iteration.
///
/// Starts from the all-ones vector. Each step iterates `A + s I` with
/// `s = rho_est / 4`, which leaves the eigenvectors unchanged but separates
/// `rho` from `-rho` (bipartite layers) and from other eigenvalues on the
/// spectral circle of periodic operators. For an irreducible non-negative
/// operator the returned vector is the entrywise-positive Perron vector.
pub fn spectral_radius(op: &impl LinearOperator, opts: PowerOptions) -> Result<Eigenpair> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::param("dim", "operator of dimension 0"));
    }
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut w = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iterations in 1..=opts.max_iter {
        op.apply(&v, &mut w);
        let wnorm = norm(&w);
        if wnorm == 0.0 {
            return Ok(Eigenpair {
                value: 0.0,
                vector: v,
                iterations,
            });
        }
        let rho = dot(&v, &w);
        residual = v
            .iter()
            .zip(&w)
            .map(|(vi, wi)| (wi - rho * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= opts.tol * rho.abs() {
            if v.iter().sum::<f64>() < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            return Ok(Eigenpair {
                value: rho.abs(),
                vector: v,
                iterations,
            });
        }
        let shift = 0.25 * rho.max(0.0);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi + shift * *vi;
        }
        let vnorm = norm(&v);
        v.iter_mut().for_each(|x| *x /= vnorm);
    }
    Err(Error::Convergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// Relative residual to which `(I - tau22 A22) z = b` is solved.
pub const INNER_SOLVE_TOL: f64 = 1e-10;

/// Layer-2 systems up to this size are factorized densely.
pub const DENSE_SOLVE_LIMIT: usize = 2000;

enum ResolventSolver {
    Zero,
    Dense(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    ConjugateGradient,
}

/// The action of `H_T` on layer-1 vectors.
pub struct HtOperator<'a> {
    net: &'a LayeredNetwork,
    tau22: f64,
    alpha: f64,
    solver: ResolventSolver,
}

impl<'a> HtOperator<'a> {
    fn with_lambda2(net: &'a LayeredNetwork, tau22: f64, alpha: f64, lambda2: f64) -> Result<Self> {
        if !(tau22 >= 0.0 && tau22.is_finite()) {
            return Err(Error::param("tau22", format!("{tau22} must be finite and >= 0")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param("alpha", format!("{alpha} must be > 0")));
        }
        let normalized = tau22 * lambda2;
        if normalized >= 1.0 {
            return Err(Error::SupercriticalLayer2 { normalized });
        }
        let n2 = net.n2();
        let solver = if tau22 == 0.0 || net.interlinks().is_empty() {
            ResolventSolver::Zero
        } else if n2 <= DENSE_SOLVE_LIMIT {
            let mut m = DMatrix::<f64>::identity(n2, n2);
            for (a, b) in net.layer2().edges() {
                m[(a, b)] = -tau22;
                m[(b, a)] = -tau22;
            }
            match nalgebra::Cholesky::new(m) {
                Some(c) => ResolventSolver::Dense(c),
                None => return Err(Error::SupercriticalLayer2 { normalized }),
            }
        } else {
            ResolventSolver::ConjugateGradient
        };
        Ok(HtOperator {
            net,
            tau22,
            alpha,
            solver,
        })
    }

    /// Solves `(I - tau22 A22) z = b`.
    fn solve_resolvent(&self, b: &[f64]) -> Vec<f64> {
        match &self.solver {
            ResolventSolver::Zero => b.to_vec(),
            ResolventSolver::Dense(chol) => {
                let z = chol.solve(&DVector::from_column_slice(b));
                z.as_slice().to_vec()
            }
            ResolventSolver::ConjugateGradient => {
                conjugate_gradient(self.net.layer2(), self.tau22, b, INNER_SOLVE_TOL)
            }
        }
    }
}

/// CG for the symmetric positive definite system `(I - tau A) z = b`.
fn conjugate_gradient(a: &Graph, tau: f64, b: &[f64], tol: f64) -> Vec<f64> {
    let n = b.len();
    let apply = |x: &[f64], y: &mut [f64]| {
        a.adjacency_mul(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = xi - tau * *yi;
        }
    };
    let bnorm = norm(b);
    let mut z = vec![0.0; n];
    if bnorm == 0.0 {
        return z;
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    for _ in 0..10 * n.max(10) {
        if rr.sqrt() <= tol * bnorm {
            break;
        }
        apply(&p, &mut ap);
        let step = rr / dot(&p, &ap);
        for i in 0..n {
            z[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let rr_next = dot(&r, &r);
        let beta = rr_next / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_next;
    }
    z
}

impl LinearOperator for HtOperator<'_> {
    fn dim(&self) -> usize {
        self.net.n1()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.net.layer1().adjacency_mul(x, y);
        if matches!(self.solver, ResolventSolver::Zero) {
            return;
        }
        let links = self.net.interlinks();
        let mut t = vec![0.0; self.net.n2()];
        links.mul_a21(x, &mut t);
        let z = self.solve_resolvent(&t);
        let mut back = vec![0.0; self.net.n1()];
        links.mul_a12(&z, &mut back);
        let scale = self.tau22 / (self.alpha * self.alpha);
        for (yi, bi) in y.iter_mut().zip(&back) {
            *yi += scale * bi;
        }
    }
}

/// `H_T` for the given layer-2 strength and coupling constant.
///
/// Fails with [`Error::SupercriticalLayer2`] when `tau22 lambda(A22) >= 1`.
pub fn build_ht_operator(net: &LayeredNetwork, tau22: f64, alpha: f64) -> Result<HtOperator<'_>> {
    let lambda2 = if tau22 == 0.0 {
        0.0
    } else {
        spectral_radius(net.layer2(), PowerOptions::default())?.value
    };
    HtOperator::with_lambda2(net, tau22, alpha, lambda2)
}

/// Critical layer-1 strength `tau11c = 1 / rho(H_T)`.
pub fn epidemic_threshold(net: &LayeredNetwork, tau22: f64, alpha: f64, opts: PowerOptions) -> Result<f64> {
    let ht = build_ht_operator(net, tau22, alpha)?;
    threshold_of(&ht, opts)
}

fn threshold_of(ht: &HtOperator<'_>, opts: PowerOptions) -> Result<f64> {
    let rho = spectral_radius(ht, opts)?.value;
    if rho == 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    Ok(1.0 / rho)
}

/// The block matrix `[t11 A11, t12 A12; t21 A21, t22 A22]` on global vectors
/// (layer 1 first).
pub struct BlockOperator<'a> {
    net: &'a LayeredNetwork,
    taus: [[f64; 2]; 2],
}

impl<'a> BlockOperator<'a> {
    pub fn new(net: &'a LayeredNetwork, taus: [[f64; 2]; 2]) -> Result<Self> {
        for row in taus {
            for t in row {
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(Error::param("tau", format!("{t} must be finite and >= 0")));
                }
            }
        }
        Ok(BlockOperator { net, taus })
    }
}

impl LinearOperator for BlockOperator<'_> {
    fn dim(&self) -> usize {
        self.net.node_count()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n1 = self.net.n1();
        let (x1, x2) = x.split_at(n1);
        let (y1, y2) = y.split_at_mut(n1);
        let [[t11, t12], [t21, t22]] = self.taus;
        let links = self.net.interlinks();

        self.net.layer1().adjacency_mul(x1, y1);
        let mut cross1 = vec![0.0; n1];
        links.mul_a12(x2, &mut cross1);
        for (yi, ci) in y1.iter_mut().zip(&cross1) {
            *yi = t11 * *yi + t12 * ci;
        }

        self.net.layer2().adjacency_mul(x2, y2);
        let mut cross2 = vec![0.0; x2.len()];
        links.mul_a21(x1, &mut cross2);
        for (yi, ci) in y2.iter_mut().zip(&cross2) {
            *yi = t22 * *yi + t21 * ci;
        }
    }
}

/// Spectral radius of the block matrix with strengths `[[t11, t12], [t21, t22]]`.
pub fn block_spectral_radius(net: &LayeredNetwork, taus: [[f64; 2]; 2], opts: PowerOptions) -> Result<f64> {
    Ok(spectral_radius(&BlockOperator::new(net, taus)?, opts)?.value)
}

/// Leading eigenvalue of the Jacobian of the linearized dynamics,
/// `[b11 A11, b12 A12; b21 A21, b22 A22] - mu I`. Positive means the
/// disease-free state is unstable.
pub fn jacobian_leading_eigenvalue(
    net: &LayeredNetwork,
    params: &EpidemicParams,
    opts: PowerOptions,
) -> Result<f64> {
    params.validate()?;
    let rho = block_spectral_radius(net, params.taus(), opts)?;
    Ok(params.mu * rho - params.mu)
}

/// Normalized threshold curve: `tau_c1 = tau11c lambda1` against
/// `tau2 = tau22 lambda2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdCurve {
    /// `(tau2, tau_c1)` in increasing `tau2`.
    pub points: Vec<(f64, f64)>,
    pub alpha: f64,
    /// Interlink probability, when the coupling was drawn that way.
    pub omega: Option<f64>,
    pub interlinks: usize,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl ThresholdCurve {
    /// Coupling level reported in CSV output: the configured ω if known,
    /// otherwise the realized link density.
    pub fn coupling_level(&self, n1: usize, n2: usize) -> f64 {
        self.omega
            .unwrap_or(self.interlinks as f64 / (n1 as f64 * n2 as f64))
    }

    pub const CSV_HEADER: &'static str = "tau2,tau_c1,omega,alpha,lambda1,lambda2";

    /// Writes rows (without header) for this curve.
    pub fn write_csv_rows(&self, out: &mut impl Write, coupling_level: f64) -> std::io::Result<()> {
        for &(t2, tc1) in &self.points {
            writeln!(
                out,
                "{t2},{tc1},{coupling_level},{},{},{}",
                self.alpha, self.lambda1, self.lambda2
            )?;
        }
        Ok(())
    }
}

/// Evaluates the normalized threshold at each `tau2` of `grid`.
///
/// Grid points are independent and evaluated in parallel; the result does not
/// depend on scheduling.
pub fn threshold_curve(
    net: &LayeredNetwork,
    alpha: f64,
    grid: &[f64],
    opts: PowerOptions,
) -> Result<ThresholdCurve> {
    if let Some(&bad) = grid.iter().find(|&&t| !(0.0..1.0).contains(&t)) {
        return Err(Error::param("tau2_grid", format!("{bad} is outside [0, 1)")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("tau2_grid", "grid must be strictly increasing"));
    }
    let lambda1 = spectral_radius(net.layer1(), opts)?.value;
    let lambda2 = spectral_radius(net.layer2(), opts)?.value;
    if lambda1 == 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    let points = grid
        .par_iter()
        .map(|&t2| {
            let tau22 = if lambda2 > 0.0 { t2 / lambda2 } else { 0.0 };
            let ht = HtOperator::with_lambda2(net, tau22, alpha, lambda2)?;
            let tc1 = if tau22 == 0.0 {
                // H_T reduces to A11 exactly.
                1.0
            } else {
                threshold_of(&ht, opts)? * lambda1
            };
            Ok((t2, tc1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThresholdCurve {
        points,
        alpha,
        omega: None,
        interlinks: net.interlinks().len(),
        lambda1,
        lambda2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{gen_erdos_renyi, gen_watts_strogatz, Graph};
    use approx::assert_relative_eq;

    fn dense_adjacency(g: &Graph) -> DMatrix<f64> {
        let n = g.node_count();
        let mut m = DMatrix::zeros(n, n);
        for (u, v) in g.edges() {
            m[(u, v)] = 1.0;
            m[(v, u)] = 1.0;
        }
        m
    }

    fn dense_max_eigenvalue(m: &DMatrix<f64>) -> f64 {
        m.clone().symmetric_eigen().eigenvalues.max()
    }

    #[test]
    fn complete_graph_and_cycle() {
        let k5 = gen_erdos_renyi(5, 1.0, 0).unwrap();
        let e = spectral_radius(&k5, PowerOptions::default()).unwrap();
        assert_relative_eq!(e.value, 4.0, epsilon = 1e-10);
        let c8 = Graph::from_edges(8, (0..8).map(|i| (i, (i + 1) % 8))).unwrap();
        let e = spectral_radius(&c8, PowerOptions::default()).unwrap();
        assert_relative_eq!(e.value, 2.0, epsilon = 1e-10);
        assert!(e.vector.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn star_matches_dense_solver() {
        let star = Graph::from_edges(11, (1..11).map(|i| (0, i))).unwrap();
        let expected = dense_max_eigenvalue(&dense_adjacency(&star));
        let e = spectral_radius(&star, PowerOptions::default()).unwrap();
        assert_relative_eq!(e.value, expected, epsilon = 1e-9);
        assert_relative_eq!(expected, 10f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn zero_operator_has_zero_radius() {
        let e = spectral_radius(&Graph::empty(4), PowerOptions::default()).unwrap();
        assert_eq!(e.value, 0.0);
        assert_relative_eq!(norm(&e.vector), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let g = gen_erdos_renyi(60, 0.1, 1).unwrap();
        let opts = PowerOptions {
            tol: 1e-14,
            max_iter: 3,
        };
        match spectral_radius(&g, opts) {
            Err(Error::Convergence { iterations, .. }) => assert_eq!(iterations, 3),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    /// 2 + 2 nodes: K2 in each layer, one link between layer-1 node 0 and
    /// layer-2 node 0.
    fn two_plus_two() -> LayeredNetwork {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        LayeredNetwork::new(k2.clone(), k2, vec![(0, 0)]).unwrap()
    }

    #[test]
    fn ht_two_plus_two_by_hand() {
        // (I - 0.3 A22)^-1 = [1, 0.3; 0.3, 1] / 0.91; A12 = e0 e0^T, so
        // H_T = A11 + 0.3 / 0.91 e0 e0^T.
        let net = two_plus_two();
        let ht = build_ht_operator(&net, 0.3, 1.0).unwrap();
        let expected = [[0.3 / 0.91, 1.0], [1.0, 0.0]];
        for j in 0..2 {
            let mut e = [0.0; 2];
            e[j] = 1.0;
            let mut y = [0.0; 2];
            ht.apply(&e, &mut y);
            for i in 0..2 {
                assert_relative_eq!(y[i], expected[i][j], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn ht_reduces_to_a11() {
        let g1 = gen_erdos_renyi(12, 0.4, 1).unwrap();
        let g2 = gen_erdos_renyi(6, 0.5, 2).unwrap();
        let decoupled = LayeredNetwork::decoupled(g1.clone(), g2.clone());
        let coupled = LayeredNetwork::new(g1.clone(), g2, vec![(0, 1), (3, 2)]).unwrap();
        let x: Vec<f64> = (0..12).map(|i| (i as f64).sin()).collect();
        let mut expected = vec![0.0; 12];
        g1.adjacency_mul(&x, &mut expected);
        for (net, tau22) in [(&decoupled, 0.1), (&coupled, 0.0)] {
            let mut y = vec![0.0; 12];
            build_ht_operator(net, tau22, 1.0).unwrap().apply(&x, &mut y);
            assert_eq!(y, expected);
        }
    }

    #[test]
    fn supercritical_layer2_is_rejected() {
        let net = two_plus_two();
        // lambda(K2) = 1.
        assert!(matches!(
            build_ht_operator(&net, 1.0, 1.0),
            Err(Error::SupercriticalLayer2 { .. })
        ));
        assert!(build_ht_operator(&net, 0.999, 1.0).is_ok());
    }

    #[test]
    fn conjugate_gradient_matches_dense() {
        let g = gen_erdos_renyi(40, 0.15, 3).unwrap();
        let lambda = spectral_radius(&g, PowerOptions::default()).unwrap().value;
        let tau = 0.8 / lambda;
        let b: Vec<f64> = (0..40).map(|i| 1.0 + (i % 3) as f64).collect();
        let z = conjugate_gradient(&g, tau, &b, 1e-12);
        let m = DMatrix::identity(40, 40) - dense_adjacency(&g) * tau;
        let zd = m.lu().solve(&DVector::from_column_slice(&b)).unwrap();
        for i in 0..40 {
            assert_relative_eq!(z[i], zd[i], epsilon = 1e-9);
        }
    }

    #[test]
    fn isolated_layer_threshold() {
        let g1 = gen_watts_strogatz(60, 4, 0.2, 1).unwrap();
        let g2 = gen_watts_strogatz(20, 4, 0.2, 2).unwrap();
        let lambda1 = spectral_radius(&g1, PowerOptions::default()).unwrap().value;
        let lambda2 = spectral_radius(&g2, PowerOptions::default()).unwrap().value;
        let net = LayeredNetwork::decoupled(g1, g2);
        let t = epidemic_threshold(&net, 0.5 / lambda2, 1.0, PowerOptions::default()).unwrap();
        assert_relative_eq!(t, 1.0 / lambda1, max_relative = 1e-9);
    }

    #[test]
    fn block_diagonal_radius() {
        let g1 = gen_erdos_renyi(15, 0.3, 4).unwrap();
        let g2 = gen_erdos_renyi(10, 0.4, 5).unwrap();
        let l1 = dense_max_eigenvalue(&dense_adjacency(&g1));
        let l2 = dense_max_eigenvalue(&dense_adjacency(&g2));
        let net = LayeredNetwork::new(g1, g2, vec![(0, 0), (1, 2)]).unwrap();
        let opts = PowerOptions::default();
        assert_eq!(block_spectral_radius(&net, [[0.0; 2]; 2], opts).unwrap(), 0.0);
        let rho = block_spectral_radius(&net, [[0.2, 0.0], [0.0, 0.7]], opts).unwrap();
        assert_relative_eq!(rho, (0.2 * l1).max(0.7 * l2), max_relative = 1e-8);
    }

    #[test]
    fn jacobian_basic_cases() {
        let g1 = gen_watts_strogatz(30, 4, 0.3, 7).unwrap();
        let g2 = gen_watts_strogatz(20, 4, 0.3, 8).unwrap();
        let lambda1 = spectral_radius(&g1, PowerOptions::default()).unwrap().value;
        let net = LayeredNetwork::decoupled(g1, g2);
        let zero = EpidemicParams::default();
        let l = jacobian_leading_eigenvalue(&net, &zero, PowerOptions::default()).unwrap();
        assert_relative_eq!(l, -1.0, epsilon = 1e-15);
        let critical = EpidemicParams {
            beta11: 2.0 / lambda1,
            mu: 2.0,
            ..Default::default()
        };
        let l = jacobian_leading_eigenvalue(&net, &critical, PowerOptions::default()).unwrap();
        assert!(l.abs() < 1e-8, "{l}");
    }

    #[test]
    fn curve_validation() {
        let net = two_plus_two();
        let opts = PowerOptions::default();
        assert!(threshold_curve(&net, 1.0, &[0.0, 1.0], opts).is_err());
        assert!(threshold_curve(&net, 1.0, &[0.5, 0.2], opts).is_err());
        let flat = LayeredNetwork::decoupled(
            gen_watts_strogatz(40, 4, 0.2, 1).unwrap(),
            gen_watts_strogatz(20, 4, 0.2, 2).unwrap(),
        );
        let curve = threshold_curve(&flat, 1.0, &[0.0, 0.3, 0.6, 0.9], opts).unwrap();
        for &(_, tc1) in &curve.points {
            assert_relative_eq!(tc1, 1.0, epsilon = 1e-9);
        }
    }
}
