//! Multitime correlation functions as block determinants, Fredholm-determinant
//! generating functions on quadrature grids, gap probabilities, and the
//! two-time expansion identity.

use alloc::vec::Vec;

use crate::kernels::{
    anti_propagator, delta_t, kernel_eval, propagator, static_kernel, KernelKind, SpaceTimePoint,
};
use crate::linalg;
use crate::quad;
use crate::{Error, Result};

/// Ordered list of (time, points) blocks for a multitime determinant.
#[derive(Debug, Clone)]
pub struct CorrelationRequest {
    kind: KernelKind,
    blocks: Vec<(f64, Vec<f64>)>,
}

impl CorrelationRequest {
    pub fn new(kind: KernelKind, blocks: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        kind.validate()?;
        if blocks.is_empty() {
            return Err(Error::Argument("correlation request needs a block"));
        }
        if blocks.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::Argument("block times must be strictly increasing"));
        }
        for (t, pts) in &blocks {
            if pts.is_empty() {
                return Err(Error::Argument("every block must hold a point"));
            }
            if let KernelKind::HermiteFinite { n } = kind {
                if pts.len() > n {
                    return Err(Error::Argument("block size exceeds the particle count"));
                }
                if !(*t > 0.0) {
                    return Err(Error::Argument("HermiteFinite blocks need times > 0"));
                }
            }
        }
        Ok(CorrelationRequest { kind, blocks })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn blocks(&self) -> &[(f64, Vec<f64>)] {
        &self.blocks
    }

    pub fn total_points(&self) -> usize {
        self.blocks.iter().map(|(_, p)| p.len()).sum()
    }
}

/// Step function sum_i value_i 1_{[a_i, b_i)}; the chi = e^{theta f} - 1 test
/// functions of the generating function are restricted to this class.
#[derive(Debug, Clone)]
pub struct StepFunction {
    intervals: Vec<(f64, f64, f64)>,
}

impl StepFunction {
    pub fn new(mut intervals: Vec<(f64, f64, f64)>) -> Result<Self> {
        if intervals.iter().any(|&(a, b, _)| !(a < b)) {
            return Err(Error::Argument("step intervals need a < b"));
        }
        intervals.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        if intervals.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::Argument("step intervals must be disjoint"));
        }
        Ok(StepFunction { intervals })
    }

    /// The zero function (empty support).
    pub fn zero() -> Self {
        StepFunction {
            intervals: Vec::new(),
        }
    }

    /// Constant `value` on [a, b).
    pub fn indicator(a: f64, b: f64, value: f64) -> Result<Self> {
        StepFunction::new(alloc::vec![(a, b, value)])
    }

    pub fn eval(&self, x: f64) -> f64 {
        for &(a, b, v) in &self.intervals {
            if x >= a && x < b {
                return v;
            }
        }
        0.0
    }

    pub fn intervals(&self) -> &[(f64, f64, f64)] {
        &self.intervals
    }

    pub fn scaled(&self, factor: f64) -> Self {
        StepFunction {
            intervals: self
                .intervals
                .iter()
                .map(|&(a, b, v)| (a, b, v * factor))
                .collect(),
        }
    }
}

/// Weighted nodes discretizing one time slice of the Fredholm operator.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    covered: Vec<(f64, f64)>,
}

impl QuadratureGrid {
    /// Gauss-Legendre nodes per interval; 64 nodes per interval is the default
    /// used by the front end.
    pub fn gauss_legendre(intervals: &[(f64, f64)], nodes_per_interval: usize) -> Result<Self> {
        if intervals.is_empty() || nodes_per_interval == 0 {
            return Err(Error::Argument("grid needs intervals and nodes"));
        }
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut covered = Vec::new();
        for &(a, b) in intervals {
            if !(a < b) {
                return Err(Error::Argument("grid intervals need a < b"));
            }
            let (x, w) = quad::gauss_legendre(nodes_per_interval, a, b);
            nodes.extend(x);
            weights.extend(w);
            covered.push((a, b));
        }
        covered.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        Ok(QuadratureGrid {
            nodes,
            weights,
            covered,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn covers(&self, a: f64, b: f64) -> bool {
        // merged coverage containment
        let mut cursor = a;
        for &(lo, hi) in &self.covered {
            if lo > cursor + 1e-12 {
                break;
            }
            if hi > cursor {
                cursor = hi;
            }
            if cursor >= b - 1e-12 {
                return true;
            }
        }
        cursor >= b - 1e-12
    }
}

/// How the discrete Fredholm operator is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscretizationMode {
    /// D^{1/2} K chi D^{1/2}: similar to the plain operator, better conditioned.
    SymmetricSplit,
    /// Plain Nystrom row scaling K chi D; kept as a cross-check.
    PlainNystrom,
}

/// Multitime correlation function: determinant of the block matrix
/// K(t_m, x_j^{(m)}; t_n, x_k^{(n)}) over all point pairs.
pub fn multitime_correlation(request: &CorrelationRequest) -> Result<f64> {
    let pts: Vec<SpaceTimePoint> = request
        .blocks()
        .iter()
        .flat_map(|(t, xs)| xs.iter().map(|&x| SpaceTimePoint::new(*t, x)))
        .collect();
    let n = pts.len();
    let mut m = Vec::with_capacity(n * n);
    for &p in &pts {
        for &q in &pts {
            m.push(kernel_eval(request.kind(), p, q)?);
        }
    }
    let (sign, logmag) = linalg::det_sign_log(&m, n);
    let det = if sign == 0.0 {
        0.0
    } else {
        sign * libm::exp(logmag)
    };
    if det < -1e-10 {
        return Err(Error::NumericalConsistency(
            "correlation determinant is negative beyond rounding",
        ));
    }
    Ok(det.max(0.0))
}

/// Fredholm generating function det(1 + K chi) over the discretized operator.
///
/// The operator kernel is K(t_m, x; t_n, y) chi_n(y) on the weighted nodes of
/// `grid`, one copy per time slice; with all chi = 0 the result is exactly 1.
pub fn fredholm_generating(
    kind: KernelKind,
    times: &[f64],
    chis: &[StepFunction],
    grid: &QuadratureGrid,
    mode: DiscretizationMode,
) -> Result<f64> {
    kind.validate()?;
    if times.is_empty() || times.len() != chis.len() {
        return Err(Error::Argument("need one chi per time"));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Argument("times must be strictly increasing"));
    }
    for chi in chis {
        for &(a, b, v) in chi.intervals() {
            if v != 0.0 && !grid.covers(a, b) {
                return Err(Error::Argument("grid does not cover a chi support"));
            }
        }
    }
    let g = grid.len();
    let dim = g * times.len();
    let mut m = alloc::vec![0.0f64; dim * dim];
    for (mi, &tm) in times.iter().enumerate() {
        for (ni, &tn) in times.iter().enumerate() {
            for i in 0..g {
                let xi = grid.nodes()[i];
                for j in 0..g {
                    let yj = grid.nodes()[j];
                    let chi = chis[ni].eval(yj);
                    let row = mi * g + i;
                    let col = ni * g + j;
                    let mut v = if chi == 0.0 {
                        0.0
                    } else {
                        let k = kernel_eval(
                            kind,
                            SpaceTimePoint::new(tm, xi),
                            SpaceTimePoint::new(tn, yj),
                        )?;
                        match mode {
                            DiscretizationMode::SymmetricSplit => {
                                libm::sqrt(grid.weights()[i])
                                    * k
                                    * chi
                                    * libm::sqrt(grid.weights()[j])
                            }
                            DiscretizationMode::PlainNystrom => k * chi * grid.weights()[j],
                        }
                    };
                    if row == col {
                        v += 1.0;
                    }
                    m[row * dim + col] = v;
                }
            }
        }
    }
    let (sign, logmag) = linalg::det_sign_log(&m, dim);
    if sign == 0.0 {
        return Ok(0.0);
    }
    Ok(sign * libm::exp(logmag))
}

/// Probability that the interval (a, b) holds no particle at the given time:
/// the generating function with chi = -1 on the interval.
pub fn gap_probability(
    kind: KernelKind,
    time: f64,
    interval: (f64, f64),
    grid: &QuadratureGrid,
) -> Result<f64> {
    let (a, b) = interval;
    if a > b {
        return Err(Error::Argument("gap interval needs a <= b"));
    }
    if a == b {
        return Ok(1.0);
    }
    let chi = StepFunction::indicator(a, b, -1.0)?;
    let v = fredholm_generating(
        kind,
        &[time],
        &[chi],
        grid,
        DiscretizationMode::SymmetricSplit,
    )?;
    if !(-1e-8..=1.0 + 1e-8).contains(&v) {
        return Err(Error::Precision {
            achieved: v,
            required: 1e-8,
        });
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Both routes of the two-time correlation expansion: the direct determinant
/// of the mixed matrix (with the complement-side propagator in the lower-left
/// block) and its expansion over transition-kernel minors.
///
/// Supported for the Sine and Airy families, whose closed-form delta_t shares
/// the kernel's coordinates; m, n <= 2.
pub fn two_time_expansion_check(
    kind: KernelKind,
    t: f64,
    x_points: &[f64],
    y_points: &[f64],
) -> Result<(f64, f64)> {
    match kind {
        KernelKind::Sine | KernelKind::Airy => {}
        _ => {
            return Err(Error::Argument(
                "expansion check supports the Sine and Airy families",
            ))
        }
    }
    if !(t > 0.0) {
        return Err(Error::Domain("two_time_expansion_check needs t > 0"));
    }
    let m = x_points.len();
    let n = y_points.len();
    if m > 2 || n > 2 || m == 0 {
        return Err(Error::UnsupportedSize {
            limit: 2,
            got: m.max(n),
        });
    }
    let dim = m + n;
    // the two matrices share everything except the lower-left block:
    // Gbar_t (direct route) versus G_{-t} (expansion route)
    let mut direct = alloc::vec![0.0f64; dim * dim];
    let mut expanded_base = alloc::vec![0.0f64; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let (di, ei);
            if i < m && j < m {
                di = static_kernel(kind, x_points[i], x_points[j])?;
                ei = di;
            } else if i < m && j >= m {
                di = propagator(kind, t, x_points[i], y_points[j - m])?;
                ei = di;
            } else if i >= m && j < m {
                di = anti_propagator(kind, t, y_points[i - m], x_points[j])?;
                ei = propagator(kind, -t, y_points[i - m], x_points[j])?;
            } else {
                di = static_kernel(kind, y_points[i - m], y_points[j - m])?;
                ei = di;
            }
            direct[i * dim + j] = di;
            expanded_base[i * dim + j] = ei;
        }
    }
    let direct_det = linalg::det_lu(&direct, dim);

    let mut expanded = linalg::det_lu(&expanded_base, dim);
    let ell_max = m.min(n);
    for ell in 1..=ell_max {
        for a_idx in combinations(m, ell) {
            for b_idx in combinations(n, ell) {
                // det of the delta_t minor rows a (x side), cols b (y side)
                let mut dmat = alloc::vec![0.0f64; ell * ell];
                for (r, &ai) in a_idx.iter().enumerate() {
                    for (c, &bi) in b_idx.iter().enumerate() {
                        dmat[r * ell + c] = delta_t(kind, t, x_points[ai], y_points[bi])?;
                    }
                }
                let det_d = linalg::det_lu(&dmat, ell);
                // complement of expanded_base: remove rows m + b_i, columns a_i
                let keep_rows: Vec<usize> = (0..dim)
                    .filter(|&r| !(r >= m && b_idx.contains(&(r - m))))
                    .collect();
                let keep_cols: Vec<usize> = (0..dim)
                    .filter(|&c| !a_idx.contains(&c) || c >= m)
                    .collect();
                let sub = dim - ell;
                let mut comp = alloc::vec![0.0f64; sub * sub];
                for (r, &rr) in keep_rows.iter().enumerate() {
                    for (c, &cc) in keep_cols.iter().enumerate() {
                        comp[r * sub + c] = expanded_base[rr * dim + cc];
                    }
                }
                let det_c = linalg::det_lu(&comp, sub);
                let sign_exp: usize = ell
                    + a_idx.iter().map(|&a| a + 1).sum::<usize>()
                    + b_idx.iter().map(|&b| m + b + 1).sum::<usize>();
                let sign = if sign_exp.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                expanded += sign * det_d * det_c;
            }
        }
    }
    Ok((direct_det, expanded))
}

/// All size-`k` index subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
