//! Monte Carlo oracles for the analytic layer: GUE sampling, Hermitian matrix
//! Brownian motion (exact multitime noncolliding samples), Euler-Maruyama
//! integration of the interacting SDE, absorbing-walk survival estimation, the
//! 3D Bessel demonstration, and empirical correlation estimators.
//!
//! Reproducibility: every path draws from its own counter-based stream,
//! ChaCha8 seeded by the run seed with the path index as the stream number, so
//! results are bit-identical regardless of how paths are scheduled.

mod eigen;

pub use eigen::{hermitian_eigenvalues, sym_tridiag_eigenvalues};

use dpk_core::weylkm::Configuration;
use dpk_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Gamma, StandardNormal};
use rayon::prelude::*;

/// Integration scheme for ensemble generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Scheme {
    /// Hermitian matrix Brownian motion, diagonalized at the requested times;
    /// exact in law at every fixed time vector.
    Matrix,
    /// Euler-Maruyama on the interacting SDE with pairwise 1/(x_j - x_k) drift.
    Sde,
}

/// Parameters of a Monte Carlo run.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SimulationConfig {
    pub n: usize,
    pub times: Vec<f64>,
    pub dt: f64,
    pub paths: usize,
    pub seed: u64,
    pub scheme: Scheme,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Argument("need at least one particle"));
        }
        if self.paths == 0 {
            return Err(Error::Argument("need at least one path"));
        }
        if !(self.dt > 0.0) {
            return Err(Error::Domain("dt must be positive"));
        }
        if self.times.is_empty() {
            return Err(Error::Argument("need at least one observation time"));
        }
        if !(self.times[0] > 0.0) || self.times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Argument(
                "observation times must be positive and increasing",
            ));
        }
        Ok(())
    }
}

/// Sampled trajectories: per path, per observation time, a sorted configuration.
#[derive(Debug, Clone)]
pub struct PathEnsemble {
    config: SimulationConfig,
    /// path-major, then time, then particle
    positions: Vec<f64>,
    collision_events: u64,
}

impl PathEnsemble {
    pub(crate) fn from_parts(
        config: SimulationConfig,
        positions: Vec<f64>,
        collision_events: u64,
    ) -> Self {
        PathEnsemble {
            config,
            positions,
            collision_events,
        }
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn collision_events(&self) -> u64 {
        self.collision_events
    }

    pub fn positions(&self, path: usize, time_idx: usize) -> &[f64] {
        let n = self.config.n;
        let stride = self.config.times.len() * n;
        let base = path * stride + time_idx * n;
        &self.positions[base..base + n]
    }

    pub fn raw(&self) -> &[f64] {
        &self.positions
    }

    pub fn time_index(&self, t: f64) -> Option<usize> {
        self.config
            .times
            .iter()
            .position(|&u| (u - t).abs() <= 1e-12 * u.abs().max(1.0))
    }
}

fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64 + 1);
    rng
}

/// A reproducible stream for ad-hoc sampling outside the path machinery.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Eigenvalues of an N x N GUE matrix with entry variance `variance`, sorted.
///
/// Sampled through the tridiagonal beta = 2 ensemble: N(0,1) diagonal and
/// sub-diagonal sqrt(Gamma(N-1-i, 1)), scaled by sqrt(variance), which has the
/// GUE eigenvalue law exactly and keeps the cost at O(N^2) per draw.
pub fn gue_sample(n: usize, variance: f64, rng: &mut ChaCha8Rng) -> Result<Configuration> {
    if n == 0 {
        return Err(Error::Argument("need at least one particle"));
    }
    if !(variance > 0.0) {
        return Err(Error::Domain("variance must be positive"));
    }
    let s = variance.sqrt();
    let d: Vec<f64> = (0..n)
        .map(|_| s * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut e = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let shape = (n - 1 - i) as f64;
        let g = Gamma::new(shape, 1.0).expect("valid shape");
        e.push((variance * rng.sample::<f64, _>(g)).sqrt());
    }
    let eig = sym_tridiag_eigenvalues(d, e);
    Configuration::new(eig)
}

/// Seeded convenience wrapper around [`gue_sample`].
pub fn gue_sample_seeded(n: usize, variance: f64, seed: u64) -> Result<Configuration> {
    gue_sample(n, variance, &mut path_rng(seed, 0))
}

/// Multitime samples of the noncolliding walk via Hermitian matrix Brownian
/// motion from the zero matrix, diagonalized at each requested time.
pub fn matrix_bm_eigen(config: &SimulationConfig) -> Result<PathEnsemble> {
    config.validate()?;
    if config.scheme != Scheme::Matrix {
        return Err(Error::Argument("config.scheme must be Matrix"));
    }
    let n = config.n;
    let times = config.times.clone();
    let stride = times.len() * n;
    let rows: Vec<Vec<f64>> = (0..config.paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(config.seed, p);
            let mut re = vec![0.0f64; n * n];
            let mut im = vec![0.0f64; n * n];
            let mut out = Vec::with_capacity(stride);
            let mut t_prev = 0.0;
            for &t in &times {
                let sd = (t - t_prev).sqrt();
                for j in 0..n {
                    re[j * n + j] += sd * rng.sample::<f64, _>(StandardNormal);
                    for k in j + 1..n {
                        let a =
                            sd / std::f64::consts::SQRT_2 * rng.sample::<f64, _>(StandardNormal);
                        let b =
                            sd / std::f64::consts::SQRT_2 * rng.sample::<f64, _>(StandardNormal);
                        re[j * n + k] += a;
                        re[k * n + j] += a;
                        im[j * n + k] += b;
                        im[k * n + j] -= b;
                    }
                }
                let mut eig = hermitian_eigenvalues(&re, &im, n);
                // ties have probability zero; keep index order if they happen
                eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
                out.extend_from_slice(&eig);
                t_prev = t;
            }
            out
        })
        .collect();
    let mut positions = Vec::with_capacity(config.paths * stride);
    for row in rows {
        positions.extend(row);
    }
    Ok(PathEnsemble::from_parts(config.clone(), positions, 0))
}

/// Euler-Maruyama integration of dX_j = dB_j + sum_{k != j} dt / (X_j - X_k).
///
/// A step that breaks the ordering is retried with halved step size (up to 20
/// halvings); if the ordering still fails, positions are minimally separated
/// by 1e-12 and the event is counted in the ensemble metadata.
pub fn dyson_sde(config: &SimulationConfig, x0: &Configuration) -> Result<PathEnsemble> {
    config.validate()?;
    if config.scheme != Scheme::Sde {
        return Err(Error::Argument("config.scheme must be Sde"));
    }
    if x0.len() != config.n {
        return Err(Error::Argument("x0 size must match config.n"));
    }
    let min_gap = x0
        .points()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if config.n > 1 && !(config.dt < min_gap * min_gap / 4.0) {
        return Err(Error::Argument("dt must be smaller than (min gap)^2 / 4"));
    }
    let n = config.n;
    let times = config.times.clone();
    let stride = times.len() * n;
    let results: Vec<(Vec<f64>, u64)> = (0..config.paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(config.seed, p);
            let mut state: Vec<f64> = x0.points().to_vec();
            let mut out = Vec::with_capacity(stride);
            let mut events = 0u64;
            let mut t = 0.0;
            for &target in &times {
                while t < target - 1e-12 {
                    let h = config.dt.min(target - t);
                    sde_step(&mut state, h, &mut rng, 0, &mut events);
                    t += h;
                }
                out.extend_from_slice(&state);
            }
            (out, events)
        })
        .collect();
    let mut positions = Vec::with_capacity(config.paths * stride);
    let mut events = 0u64;
    for (row, ev) in results {
        positions.extend(row);
        events += ev;
    }
    Ok(PathEnsemble::from_parts(config.clone(), positions, events))
}

fn sde_step(state: &mut [f64], h: f64, rng: &mut ChaCha8Rng, depth: u32, events: &mut u64) {
    let n = state.len();
    let mut proposal = vec![0.0f64; n];
    let sd = h.sqrt();
    for j in 0..n {
        let mut drift = 0.0;
        for k in 0..n {
            if k != j {
                drift += 1.0 / (state[j] - state[k]);
            }
        }
        proposal[j] = state[j] + sd * rng.sample::<f64, _>(StandardNormal) + h * drift;
    }
    let ordered = proposal.windows(2).all(|w| w[0] < w[1]);
    if ordered {
        state.copy_from_slice(&proposal);
        return;
    }
    if depth < 20 {
        // retry the same span as two half steps
        sde_step(state, h / 2.0, rng, depth + 1, events);
        sde_step(state, h / 2.0, rng, depth + 1, events);
        return;
    }
    // give up: force a minimal separation and record the event
    for j in 1..n {
        if proposal[j] <= proposal[j - 1] {
            proposal[j] = proposal[j - 1] + 1e-12;
            *events += 1;
        }
    }
    state.copy_from_slice(&proposal);
}

/// Monte Carlo estimate of the probability that N independent walkers started
/// at `x` keep their order at every step of a dt-grid up to time t.
///
/// Ordering is only checked at grid times, which biases the estimate upward
/// by O(sqrt(dt)).
pub fn survival_mc(
    t: f64,
    x: &Configuration,
    dt: f64,
    paths: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if !(t > 0.0) || !(dt > 0.0) {
        return Err(Error::Domain("survival_mc needs positive t and dt"));
    }
    if paths == 0 {
        return Err(Error::Argument("need at least one path"));
    }
    let n = x.len();
    let survived: u64 = (0..paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(seed, p);
            let mut state: Vec<f64> = x.points().to_vec();
            let mut remaining = t;
            while remaining > 0.0 {
                let h = dt.min(remaining);
                let sd = h.sqrt();
                for s in state.iter_mut() {
                    *s += sd * rng.sample::<f64, _>(StandardNormal);
                }
                for w in 0..n.saturating_sub(1) {
                    if state[w] >= state[w + 1] {
                        return 0u64;
                    }
                }
                remaining -= h;
            }
            1u64
        })
        .sum();
    let p_hat = survived as f64 / paths as f64;
    let stderr = (p_hat * (1.0 - p_hat) / paths as f64).sqrt();
    Ok((p_hat, stderr))
}

/// Survival evaluation method, mirroring the quadrature/Monte Carlo split.
#[derive(Debug, Clone, Copy)]
pub enum SurvivalMethod {
    Quadrature,
    MonteCarlo { dt: f64, paths: usize, seed: u64 },
}

pub struct SurvivalEstimate {
    pub value: f64,
    pub stderr: Option<f64>,
}

/// Survival probability by the requested method: quadrature (N <= 3) or the
/// Monte Carlo path estimator (any N).
pub fn survival(t: f64, x: &Configuration, method: SurvivalMethod) -> Result<SurvivalEstimate> {
    match method {
        SurvivalMethod::Quadrature => Ok(SurvivalEstimate {
            value: dpk_core::weylkm::survival_quadrature(t, x)?,
            stderr: None,
        }),
        SurvivalMethod::MonteCarlo { dt, paths, seed } => {
            let (value, stderr) = survival_mc(t, x, dt, paths, seed)?;
            Ok(SurvivalEstimate {
                value,
                stderr: Some(stderr),
            })
        }
    }
}

/// Summary of the 3D Bessel demonstration.
#[derive(Debug)]
pub struct Bessel3Summary {
    /// sup over paths of | lambda_+ of M(t) - |B(t)| |
    pub max_eigen_deviation: f64,
    /// chi-square statistic of the X(t) histogram against (y/x) p_abs
    pub chi_square: f64,
    pub chi_square_dof: usize,
    /// 99.9% quantile of the chi-square reference distribution
    pub chi_square_threshold: f64,
    pub min_radius: f64,
    pub paths: usize,
}

impl Bessel3Summary {
    pub fn passes(&self) -> bool {
        self.max_eigen_deviation <= 1e-12
            && self.chi_square <= self.chi_square_threshold
            && self.min_radius > 0.0
    }
}

/// Simulate three independent Brownian coordinates, form the radius process,
/// and check both realizations: the traceless 2x2 matrix spectrum equals
/// +-X(t) per path, and the histogram of X(t) started from `start` matches the
/// h-transformed absorbing density.
pub fn bessel3_demo(t: f64, start: f64, paths: usize, seed: u64) -> Result<Bessel3Summary> {
    if !(t > 0.0) || !(start > 0.0) {
        return Err(Error::Domain("bessel3_demo needs t > 0 and start > 0"));
    }
    if paths == 0 {
        return Err(Error::Argument("need at least one path"));
    }
    let sd = t.sqrt();
    let samples: Vec<(f64, f64)> = (0..paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(seed, p);
            let b1: f64 = start + sd * rng.sample::<f64, _>(StandardNormal);
            let b2: f64 = sd * rng.sample::<f64, _>(StandardNormal);
            let b3: f64 = sd * rng.sample::<f64, _>(StandardNormal);
            let radius = (b1 * b1 + b2 * b2 + b3 * b3).sqrt();
            let re = [b1, b2, b2, -b1];
            let im = [0.0, b3, -b3, 0.0];
            let eig = hermitian_eigenvalues(&re, &im, 2);
            let dev = (eig[1] - radius).abs().max((eig[0] + radius).abs());
            (radius, dev)
        })
        .collect();
    let max_eigen_deviation = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let min_radius = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);

    // histogram chi-square against the closed-form density (y/x) p_abs
    let hi = start + 6.0 * sd + 4.0 * sd;
    let bins = 40usize;
    let width = hi / bins as f64;
    let mut counts = vec![0u64; bins + 1];
    for &(r, _) in &samples {
        let idx = ((r / width) as usize).min(bins);
        counts[idx] += 1;
    }
    let mut chi_square = 0.0;
    let mut dof = 0usize;
    for (i, &c) in counts.iter().enumerate().take(bins) {
        let (a, b) = (i as f64 * width, (i + 1) as f64 * width);
        let expected = paths as f64
            * dpk_core::quad::integrate(
                |y| {
                    dpk_core::weylkm::abs_bm_1d(t, y, start)
                        .map(|v| v.1)
                        .unwrap_or(0.0)
                },
                a.max(1e-12),
                b,
                1e-10,
            )
            .value;
        if expected >= 5.0 {
            let d = c as f64 - expected;
            chi_square += d * d / expected;
            dof += 1;
        }
    }
    let dof = dof.saturating_sub(1);
    Ok(Bessel3Summary {
        max_eigen_deviation,
        chi_square,
        chi_square_dof: dof,
        chi_square_threshold: chi_square_quantile(dof as f64, 3.09),
        min_radius,
        paths,
    })
}

/// Wilson-Hilferty approximation to the chi-square quantile at normal score z.
pub fn chi_square_quantile(dof: f64, z: f64) -> f64 {
    let a = 2.0 / (9.0 * dof);
    dof * (1.0 - a + z * a.sqrt()).powi(3)
}

/// Kernel-density estimate of a multitime product density with bootstrap
/// standard error.
#[derive(Debug)]
pub struct CorrelationEstimate {
    pub value: f64,
    pub stderr: f64,
    /// set when the path count is too small to resolve the bandwidth
    pub underresolved: bool,
}

/// Estimate the multitime product density of `request` from an ensemble by a
/// Gaussian product-kernel estimator over distinct-particle tuples.
pub fn empirical_correlation(
    ensemble: &PathEnsemble,
    request: &dpk_core::corr::CorrelationRequest,
    bandwidth: f64,
) -> Result<CorrelationEstimate> {
    if !(bandwidth > 0.0) {
        return Err(Error::Domain("bandwidth must be positive"));
    }
    let mut slots = Vec::new();
    for (t, pts) in request.blocks() {
        let idx = ensemble
            .time_index(*t)
            .ok_or(Error::Argument("request time not sampled by the ensemble"))?;
        if pts.len() > 3 {
            return Err(Error::UnsupportedSize {
                limit: 3,
                got: pts.len(),
            });
        }
        slots.push((idx, pts.clone()));
    }
    let paths = ensemble.config().paths;
    let norm = 1.0 / (bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    let kern = |u: f64| norm * (-u * u / (2.0 * bandwidth * bandwidth)).exp();
    let contributions: Vec<f64> = (0..paths)
        .into_par_iter()
        .map(|p| {
            let mut prod = 1.0;
            for (idx, pts) in &slots {
                let xs = ensemble.positions(p, *idx);
                let m = xs.len();
                let block = match pts.len() {
                    1 => xs.iter().map(|&v| kern(v - pts[0])).sum::<f64>(),
                    2 => {
                        let mut s = 0.0;
                        for j in 0..m {
                            for k in 0..m {
                                if j != k {
                                    s += kern(xs[j] - pts[0]) * kern(xs[k] - pts[1]);
                                }
                            }
                        }
                        s
                    }
                    3 => {
                        let mut s = 0.0;
                        for j in 0..m {
                            for k in 0..m {
                                for l in 0..m {
                                    if j != k && j != l && k != l {
                                        s += kern(xs[j] - pts[0])
                                            * kern(xs[k] - pts[1])
                                            * kern(xs[l] - pts[2]);
                                    }
                                }
                            }
                        }
                        s
                    }
                    _ => unreachable!(),
                };
                prod *= block;
            }
            prod
        })
        .collect();
    let value = contributions.iter().sum::<f64>() / paths as f64;

    // bootstrap over path contributions
    let mut rng = ChaCha8Rng::seed_from_u64(ensemble.config().seed ^ 0x626f6f74);
    rng.set_stream(u64::MAX);
    let resamples = 200;
    let mut means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let mut acc = 0.0;
        for _ in 0..paths {
            acc += contributions[rng.random_range(0..paths)];
        }
        means.push(acc / paths as f64);
    }
    let mb = means.iter().sum::<f64>() / resamples as f64;
    let var = means.iter().map(|v| (v - mb) * (v - mb)).sum::<f64>() / (resamples as f64 - 1.0);
    let stderr = var.sqrt();
    let underresolved = value <= 3.0 * stderr || (paths as f64) * bandwidth < 1e3;
    Ok(CorrelationEstimate {
        value,
        stderr,
        underresolved,
    })
}
