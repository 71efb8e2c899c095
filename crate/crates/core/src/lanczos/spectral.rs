//! Spectral-measure backend.
//!
//! In the eigenbasis `H|m> = E_m|m>` the Liouvillian acts diagonally,
//! `L |m><n| = i(E_m - E_n) |m><n|`, so every Krylov vector of a Hermitian
//! operator `O` has the form `i^p f(omega) O_mn` with a real polynomial `f`
//! of definite parity. Folding `omega -> |omega|` leaves a discrete measure on
//! `x >= 0` with weights `W(x) = sum |O_mn|^2 / N` over pairs with
//! `|E_m - E_n| = x`, and the recursion only needs that measure. A vector is
//! stored as a phase power `p` (0 or 1, sign folded into the values), a
//! parity, and the values `sqrt(W) f(x)` so inner products are plain dot
//! products.

use num_complex::Complex64;

use super::{KrylovSpace, LiouvillianKind};
use crate::algebra::{normalize, Hamiltonian, OperatorState, HERMITICITY_TOL};
use crate::error::{KrylovError, Result};
use crate::linalg::{tridiagonal_eigh, Eigensystem, DENSE_EIGEN_LIMIT};

/// Weights at or below this are dropped when building a measure.
const WEIGHT_FLOOR: f64 = 1e-28;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    freq: Vec<f64>,
    sqrt_w: Vec<f64>,
    hilbert_dim: usize,
    bounds: Option<(f64, f64)>,
    compressed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    phase: u8,
    odd: bool,
    values: Vec<f64>,
}

impl SpectralVector {
    /// Power of `i` multiplying the real polynomial, 0 or 1.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `i^p f` with real odd/even `f` is Hermitian exactly when `p` matches the parity.
    pub fn is_hermitian(&self) -> bool {
        (self.phase == 1) == self.odd
    }
}

impl SpectralMeasure {
    /// Builds the measure of a Hermitian operator, normalizing it first.
    pub fn from_operator(h: &Hamiltonian, o0: &OperatorState) -> Result<Self> {
        Self::from_operator_with_limit(h, o0, DENSE_EIGEN_LIMIT)
    }

    pub fn from_operator_with_limit(
        h: &Hamiltonian,
        o0: &OperatorState,
        limit: usize,
    ) -> Result<Self> {
        if h.dim() != o0.dim() {
            return Err(KrylovError::DimensionMismatch { left: h.dim(), right: o0.dim() });
        }
        let deviation = o0.hermiticity_deviation();
        if deviation > HERMITICITY_TOL {
            return Err(KrylovError::NotHermitian { deviation });
        }
        let o = normalize(o0)?;
        let eig = Eigensystem::of(h, limit)?;
        let rotated = eig.to_eigenbasis(o.matrix());
        drop(o);
        let dim = h.dim();
        let inv_dim = 1.0 / dim as f64;
        let e = &eig.values;

        let mut points: Vec<(f64, f64)> = Vec::new();
        let mut diagonal = 0.0;
        for n in 0..dim {
            diagonal += rotated[(n, n)].norm_sqr() * inv_dim;
            for m in 0..n {
                let w = (rotated[(m, n)].norm_sqr() + rotated[(n, m)].norm_sqr()) * inv_dim;
                if w > WEIGHT_FLOOR {
                    points.push(((e[m] - e[n]).abs(), w));
                }
            }
        }
        drop(rotated);
        if diagonal > WEIGHT_FLOOR {
            points.push((0.0, diagonal));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut freq = Vec::with_capacity(points.len());
        let mut sqrt_w = Vec::with_capacity(points.len());
        for (x, w) in points {
            freq.push(x);
            sqrt_w.push(w.sqrt());
        }
        Ok(Self { freq, sqrt_w, hilbert_dim: dim, bounds: Some(eig.min_max()), compressed: false })
    }

    /// A measure from explicit nonnegative frequencies and weights, rescaled to unit mass.
    pub fn from_points(freqs: &[f64], weights: &[f64], hilbert_dim: usize) -> Result<Self> {
        if freqs.len() != weights.len() {
            return Err(KrylovError::DimensionMismatch { left: freqs.len(), right: weights.len() });
        }
        if freqs.is_empty() {
            return Err(KrylovError::EmptyInput("spectral measure points"));
        }
        if let Some(x) = freqs.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(KrylovError::InvalidParameter(format!("frequency {x} is not a finite nonnegative number")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(KrylovError::InvalidParameter(format!("weight {w} is not a finite nonnegative number")));
        }
        let total: f64 = weights.iter().sum();
        if total <= WEIGHT_FLOOR {
            return Err(KrylovError::NullOperator { norm_sq: total });
        }
        let mut points: Vec<(f64, f64)> =
            freqs.iter().copied().zip(weights.iter().map(|w| w / total)).collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            freq: points.iter().map(|p| p.0).collect(),
            sqrt_w: points.iter().map(|p| p.1.sqrt()).collect(),
            hilbert_dim: hilbert_dim.max(2),
            bounds: None,
            compressed: false,
        })
    }

    pub fn len(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.freq
    }

    pub fn weights(&self) -> Vec<f64> {
        self.sqrt_w.iter().map(|s| s * s).collect()
    }

    pub fn total_weight(&self) -> f64 {
        dot(&self.sqrt_w, &self.sqrt_w)
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    /// `(E_min, E_max)` of the Hamiltonian when the measure came from an eigensolve.
    pub fn spectral_bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    pub fn is_compressed(&self) -> bool {
        self.compressed
    }

    /// The normalized initial operator.
    pub fn start_vector(&self) -> SpectralVector {
        SpectralVector { phase: 0, odd: false, values: self.sqrt_w.clone() }
    }

    /// Even moment `(O|L~^{2k} O) = sum W x^{2k}`.
    pub fn moment(&self, k: u32) -> f64 {
        self.freq
            .iter()
            .zip(&self.sqrt_w)
            .map(|(x, s)| s * s * x.powi(2 * k as i32))
            .sum()
    }

    /// Replaces the measure by a smaller one with the same moments `sum W x^{2k}`
    /// for every `k` a Lanczos run of `max_steps` steps can see.
    ///
    /// The points are taken in order of `lambda = x^2` and cut into chunks; each
    /// chunk is replaced by its Gauss rule in `lambda`. A rule with `g` nodes
    /// integrates `lambda^j` exactly for `j < 2g`, and `b_1..b_M` only involve
    /// `lambda^j` with `j <= M`. Chunks are merged repeatedly until at most
    /// `target_points` remain or no further reduction is possible.
    pub fn compress(&self, max_steps: usize, target_points: usize) -> SpectralMeasure {
        // the bare minimum is max_steps / 2 + 1 nodes, but the last coefficients
        // of a rule with no spare nodes are very sensitive to rounding
        let g = 3 * max_steps / 4 + 2;
        let chunk = 16 * g;
        let mut lam: Vec<f64> = self.freq.iter().map(|x| x * x).collect();
        let mut sw = self.sqrt_w.clone();
        let mut reduced = false;

        while lam.len() > target_points.max(g) {
            let mut next_lam = Vec::new();
            let mut next_sw = Vec::new();
            for (l, s) in lam.chunks(chunk).zip(sw.chunks(chunk)) {
                if l.len() <= g {
                    next_lam.extend_from_slice(l);
                    next_sw.extend_from_slice(s);
                    continue;
                }
                let (nodes, weights) = gauss_rule(l, s, g);
                next_lam.extend(nodes);
                next_sw.extend(weights.iter().map(|w| w.sqrt()));
            }
            if next_lam.len() >= lam.len() {
                break;
            }
            reduced = true;
            let mut order: Vec<usize> = (0..next_lam.len()).collect();
            order.sort_by(|&a, &b| next_lam[a].total_cmp(&next_lam[b]));
            lam = order.iter().map(|&k| next_lam[k]).collect();
            sw = order.iter().map(|&k| next_sw[k]).collect();
        }

        SpectralMeasure {
            freq: lam.iter().map(|l| l.max(0.0).sqrt()).collect(),
            sqrt_w: sw,
            hilbert_dim: self.hilbert_dim,
            bounds: self.bounds,
            compressed: self.compressed || reduced,
        }
    }
}

/// Gauss quadrature with at most `g` nodes for the measure `sum s_k^2 delta(lambda - lambda_k)`.
///
/// The Jacobi matrix is built by the Gragg-Harrod (RKPW) update, which adds one
/// point at a time through a chain of plane rotations. Entry `k` of the update
/// only reads entries `<= k`, so keeping the leading `g` entries is exact and
/// the cost is `O(len * g)`.
fn gauss_rule(lam: &[f64], sw: &[f64], g: usize) -> (Vec<f64>, Vec<f64>) {
    let mut alpha = vec![0.0; g];
    let mut beta = vec![0.0; g];
    let mut count = 0;
    for (&x, &s) in lam.iter().zip(sw) {
        let w = s * s;
        if w <= 0.0 {
            continue;
        }
        if count == 0 {
            alpha[0] = x;
            beta[0] = w;
            count = 1;
            continue;
        }
        let (mut pn, mut gam, mut sig, mut t) = (w, 1.0, 0.0, 0.0);
        for k in 0..(count + 1).min(g) {
            if k == count {
                alpha[k] = x;
                beta[k] = 0.0;
            }
            let rho = beta[k] + pn;
            let tmp = gam * rho;
            let tsig = sig;
            if rho <= 0.0 {
                gam = 1.0;
                sig = 0.0;
            } else {
                gam = beta[k] / rho;
                sig = pn / rho;
            }
            let tk = sig * (alpha[k] - x) - gam * t;
            alpha[k] -= tk - t;
            t = tk;
            pn = if sig <= 0.0 { tsig * beta[k] } else { t * t / sig };
            beta[k] = tmp;
        }
        count += 1;
    }
    let m = count.min(g);
    if m == 0 {
        return (Vec::new(), Vec::new());
    }
    let mu0 = beta[0];
    let off: Vec<f64> = beta[1..m].iter().map(|b| b.max(0.0).sqrt()).collect();
    let (nodes, vecs) = tridiagonal_eigh(&alpha[..m], &off);
    let weights = (0..nodes.len()).map(|j| mu0 * vecs[(0, j)] * vecs[(0, j)]).collect();
    (nodes, weights)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `i^k` for `k` taken mod 4.
fn i_pow(k: i32) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl KrylovSpace for SpectralMeasure {
    type Vector = SpectralVector;

    fn apply(&self, v: &SpectralVector, kind: LiouvillianKind) -> SpectralVector {
        let mut values: Vec<f64> = v.values.iter().zip(&self.freq).map(|(a, x)| a * x).collect();
        let phase = match kind {
            LiouvillianKind::Tilde => v.phase,
            LiouvillianKind::Standard => {
                // i * i^p; i^2 = -1 is folded into the values
                if v.phase == 1 {
                    values.iter_mut().for_each(|a| *a = -*a);
                    0
                } else {
                    1
                }
            }
        };
        SpectralVector { phase, odd: !v.odd, values }
    }

    fn inner(&self, a: &SpectralVector, b: &SpectralVector) -> Complex64 {
        if a.odd != b.odd {
            return Complex64::new(0.0, 0.0);
        }
        i_pow(b.phase as i32 - a.phase as i32) * dot(&a.values, &b.values)
    }

    fn hermitize(&self, v: &mut SpectralVector) {
        if !v.is_hermitian() {
            v.values.iter_mut().for_each(|a| *a = 0.0);
            v.phase = v.odd as u8;
        }
    }

    fn axpy(&self, alpha: Complex64, x: &SpectralVector, y: &mut SpectralVector) {
        if x.odd != y.odd {
            // different parities are orthogonal; in exact arithmetic alpha is zero here
            debug_assert!(alpha.norm() == 0.0);
            return;
        }
        let c = alpha * i_pow(x.phase as i32 - y.phase as i32);
        axpy(c.re, &x.values, &mut y.values);
    }

    fn scale(&self, v: &mut SpectralVector, factor: f64) {
        v.values.iter_mut().for_each(|a| *a *= factor);
    }

    fn krylov_bound(&self) -> usize {
        self.hilbert_dim * self.hilbert_dim - self.hilbert_dim + 1
    }
}
