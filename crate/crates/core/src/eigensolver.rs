//! Generalized eigensolver for the sector pairs built by [`crate::assembly`].
//!
//! `B` is factored as `L Lᵀ` and the eigenvalues of `L⁻¹ A L⁻ᵀ` are read off
//! a real Schur form. `A` is not symmetric, so complex eigenvalues are
//! possible in principle; imaginary parts above `1e−8 (1 + |β|)` are an error,
//! anything below is dropped. Eigenvectors come from inverse iteration on the
//! original banded pencil `A − βB`.
//!
//! The continuous operator is self-adjoint with respect to `F̃ dθ`, so states
//! are normalized with the surface measure `α F̃ dθ` (R = 1) and are mutually
//! orthogonal under the same weight.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{self, ModeSpec, OperatorPair, Parity};
use crate::error::{Error, Result};
use crate::geometry::angle_grid;

/// Imaginary parts below `REALITY_TOL (1 + |β|)` are discarded.
pub const REALITY_TOL: f64 = 1e-8;
/// Largest truncation tried by [`converge_spectrum`].
pub const MAX_TRUNCATION: usize = 1024;
/// Number of lowest eigenvalues tracked for convergence.
pub const TRACKED_STATES: usize = 5;
pub const NODE_SAMPLES: usize = 4096;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

const SCHUR_MAX_ITER: usize = 10_000;
const INVERSE_ITERATIONS: usize = 8;
const RESIDUAL_TARGET: f64 = 1e-12;

/// One eigenpair of a sector pencil, coefficients unnormalized.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub beta: f64,
    pub coeffs: DVector<f64>,
}

/// Normalized angular wavefunction `ψ(θ) = Σ c_j b_j(θ)` in one parity sector.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    pub alpha: f64,
    pub parity: Parity,
    pub coeffs: Vec<f64>,
    /// Leading coefficient of the normalized state when written as
    /// `norm_constant · [1 + (c_1/c_0) b_1 + …]`.
    pub norm_constant: f64,
    pub node_count: usize,
}

impl Wavefunction {
    pub fn eval(&self, theta: f64) -> f64 {
        eval_series(self.parity, &self.coeffs, theta)
    }

    /// `(θ, ψ(θ))` on a uniform closed-open grid over `[0, 2π)`.
    pub fn sample(&self, samples: usize) -> Vec<(f64, f64)> {
        angle_grid(samples).map(|t| (t, self.eval(t))).collect()
    }

    /// `∫ ψ² α (1 + α cos θ) dθ` from the coefficients.
    pub fn norm_squared(&self) -> f64 {
        surface_norm_squared(self.alpha, self.parity, &self.coeffs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub beta: f64,
    pub m: u32,
    /// Rank by ascending `β` within the `(m, parity)` sector.
    pub n_index: usize,
    pub wavefunction: Wavefunction,
}

impl Eigenstate {
    pub fn parity(&self) -> Parity {
        self.wavefunction.parity
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.wavefunction.coeffs
    }

    /// `±m` are solved once, so `m > 0` states count twice.
    pub fn degeneracy(&self) -> u32 {
        if self.m == 0 {
            1
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub alpha: f64,
    pub m: u32,
    pub parity: Parity,
    pub include_vc: bool,
    pub states: Vec<Eigenstate>,
    pub truncation_used: usize,
    pub converged: bool,
}

impl Spectrum {
    pub fn ground(&self) -> Option<&Eigenstate> {
        self.states.first()
    }

    pub fn betas(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.beta).collect()
    }

    /// Indices `i` where `β_{i+1} − β_i ≤ tol`.
    pub fn near_degenerate(&self, tol: f64) -> Vec<usize> {
        self.states
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1].beta - w[0].beta <= tol)
            .map(|(i, _)| i)
            .collect()
    }
}

pub(crate) fn eval_series(parity: Parity, coeffs: &[f64], theta: f64) -> f64 {
    // (cos jθ, sin jθ) by repeated rotation
    let (s1, c1) = theta.sin_cos();
    let (mut cos_j, mut sin_j) = match parity {
        Parity::Even => (1.0, 0.0),
        Parity::Odd => (c1, s1),
    };
    let mut sum = 0.0;
    for &c in coeffs {
        sum += c * match parity {
            Parity::Even => cos_j,
            Parity::Odd => sin_j,
        };
        (cos_j, sin_j) = (cos_j * c1 - sin_j * s1, sin_j * c1 + cos_j * s1);
    }
    sum
}

/// Gram matrix of the sector basis under `(1/2π)∫ · (1 + α cos θ) dθ`.
pub fn measure_gram(alpha: f64, parity: Parity, dim: usize) -> DMatrix<f64> {
    let g = |d: i64| match d.abs() {
        0 => 1.0,
        1 => 0.5 * alpha,
        _ => 0.0,
    };
    DMatrix::from_fn(dim, dim, |r, c| {
        let k = parity.harmonic(r) as i64;
        let n = parity.harmonic(c) as i64;
        match parity {
            Parity::Even => 0.5 * (g(k - n) + g(k + n)),
            Parity::Odd => 0.5 * (g(k - n) - g(k + n)),
        }
    })
}

/// `∫₀^{2π} ψ² α (1 + α cos θ) dθ`.
pub fn surface_norm_squared(alpha: f64, parity: Parity, coeffs: &[f64]) -> f64 {
    let n = coeffs.len();
    let g = |d: i64| match d.abs() {
        0 => 1.0,
        1 => 0.5 * alpha,
        _ => 0.0,
    };
    let mut acc = 0.0;
    for (r, &cr) in coeffs.iter().enumerate() {
        let k = parity.harmonic(r) as i64;
        // the weight couples neighbouring harmonics only
        for c in r.saturating_sub(1)..(r + 2).min(n) {
            let h = parity.harmonic(c) as i64;
            let w = match parity {
                Parity::Even => 0.5 * (g(k - h) + g(k + h)),
                Parity::Odd => 0.5 * (g(k - h) - g(k + h)),
            };
            acc += cr * w * coeffs[c];
        }
    }
    2.0 * std::f64::consts::PI * alpha * acc
}

/// Sign changes of `ψ` around the circle, sampled at `samples` points.
pub fn count_nodes(parity: Parity, coeffs: &[f64], samples: usize) -> usize {
    let values: Vec<f64> = angle_grid(samples).map(|t| eval_series(parity, coeffs, t)).collect();
    sign_changes(&values)
}

fn sign_changes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-10 * peak;
    let signs: Vec<bool> = values.iter().filter(|v| v.abs() > floor).map(|v| *v > 0.0).collect();
    if signs.is_empty() {
        return 0;
    }
    let mut changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    if signs[0] != signs[signs.len() - 1] {
        changes += 1;
    }
    changes
}

/// Sector basis functions tabulated on the node-counting grid.
fn basis_table(parity: Parity, dim: usize) -> DMatrix<f64> {
    let thetas: Vec<f64> = angle_grid(NODE_SAMPLES).collect();
    DMatrix::from_fn(NODE_SAMPLES, dim, |i, j| parity.basis(j, thetas[i]))
}

/// Rescales a coefficient vector to unit surface norm with a non-negative
/// leading coefficient (constant term or `sin θ` term).
pub fn normalize_state(coeffs: &[f64], alpha: f64, parity: Parity) -> Result<Wavefunction> {
    let mut w = rescale(coeffs, alpha, parity)?;
    w.node_count = count_nodes(parity, &w.coeffs, NODE_SAMPLES);
    Ok(w)
}

fn rescale(coeffs: &[f64], alpha: f64, parity: Parity) -> Result<Wavefunction> {
    let peak = coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 || !peak.is_finite() {
        return Err(Error::ZeroVector);
    }
    // Reference coefficient: the leading one unless it is negligible.
    let reference = coeffs
        .iter()
        .copied()
        .find(|c| c.abs() > 1e-12 * peak)
        .unwrap_or(peak);
    let unit: Vec<f64> = coeffs.iter().map(|c| c / reference).collect();
    let norm_constant = 1.0 / surface_norm_squared(alpha, parity, &unit).sqrt();
    let coeffs: Vec<f64> = unit.iter().map(|c| c * norm_constant).collect();
    Ok(Wavefunction { alpha, parity, coeffs, norm_constant, node_count: 0 })
}

fn cholesky_reduce(pair: &OperatorPair) -> Result<DMatrix<f64>> {
    let chol = nalgebra::Cholesky::new(pair.b_matrix.clone())
        .ok_or_else(|| Error::SolverFailure("weight matrix is not positive definite".into()))?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(&pair.a_matrix)
        .ok_or_else(|| Error::SolverFailure("singular Cholesky factor".into()))?;
    let y = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::SolverFailure("singular Cholesky factor".into()))?;
    Ok(y.transpose())
}

/// All eigenvalues of the sector pencil, ascending.
pub fn sector_eigenvalues(pair: &OperatorPair) -> Result<Vec<f64>> {
    let reduced = cholesky_reduce(pair)?;
    let schur = nalgebra::Schur::try_new(reduced, f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::SolverFailure("Schur iteration did not converge".into()))?;
    let mut betas = Vec::with_capacity(pair.dimension());
    for z in schur.complex_eigenvalues().iter() {
        if z.im.abs() > REALITY_TOL * (1.0 + z.re.abs()) {
            return Err(Error::NonRealSpectrum { re: z.re, im: z.im });
        }
        betas.push(z.re);
    }
    betas.sort_by(f64::total_cmp);
    Ok(betas)
}

/// LU factorization with partial pivoting that only touches the band.
struct BandedLu {
    lu: DMatrix<f64>,
    perm: Vec<usize>,
    lower: usize,
    upper: usize,
}

impl BandedLu {
    fn bandwidths(m: &DMatrix<f64>) -> (usize, usize) {
        let (mut lower, mut upper) = (0, 0);
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                if m[(r, c)] != 0.0 {
                    if r > c {
                        lower = lower.max(r - c);
                    } else {
                        upper = upper.max(c - r);
                    }
                }
            }
        }
        (lower, upper)
    }

    fn factor(mut lu: DMatrix<f64>, lower: usize, upper: usize) -> Self {
        let n = lu.nrows();
        let upper = upper + lower; // fill-in from row swaps
        let scale = lu.amax().max(f64::MIN_POSITIVE);
        let mut perm: Vec<usize> = (0..n).collect();
        for j in 0..n {
            let last = (j + lower).min(n - 1);
            let p = (j..=last)
                .max_by(|&a, &b| lu[(a, j)].abs().total_cmp(&lu[(b, j)].abs()))
                .unwrap_or(j);
            if p != j {
                lu.swap_rows(p, j);
                perm.swap(p, j);
            }
            if lu[(j, j)].abs() < f64::EPSILON * scale * 1e-3 {
                // exact shift: keep the direction, avoid division by zero
                lu[(j, j)] = f64::EPSILON * scale * 1e-3;
            }
            let pivot = lu[(j, j)];
            let right = (j + upper).min(n - 1);
            for r in j + 1..=last {
                let f = lu[(r, j)] / pivot;
                if f == 0.0 {
                    continue;
                }
                lu[(r, j)] = f;
                for c in j + 1..=right {
                    lu[(r, c)] -= f * lu[(j, c)];
                }
            }
        }
        Self { lu, perm, lower, upper }
    }

    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let n = rhs.len();
        let mut x = DVector::from_fn(n, |i, _| rhs[self.perm[i]]);
        for i in 0..n {
            let lo = i.saturating_sub(self.lower);
            let mut s = x[i];
            for j in lo..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let hi = (i + self.upper).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=hi {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }
}

fn residual(pair: &OperatorPair, beta: f64, v: &DVector<f64>) -> f64 {
    let bv = &pair.b_matrix * v;
    let r = &pair.a_matrix * v - &bv * beta;
    r.norm() / bv.norm()
}

/// Eigenvector for a known eigenvalue by inverse iteration on `A − βB`.
fn eigenvector(pair: &OperatorPair, beta: f64, lower: usize, upper: usize) -> Result<DVector<f64>> {
    let n = pair.dimension();
    let shifted = &pair.a_matrix - &pair.b_matrix * beta;
    let lu = BandedLu::factor(shifted, lower, upper);
    let mut v = DVector::from_fn(n, |i, _| 1.0 + ((i * 7919) % 13) as f64 / 13.0);
    v /= v.norm();
    let mut best = f64::INFINITY;
    for _ in 0..INVERSE_ITERATIONS {
        let mut w = lu.solve(&(&pair.b_matrix * &v));
        let norm = w.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::SolverFailure(format!("inverse iteration broke down at beta = {beta}")));
        }
        w /= norm;
        v = w;
        best = residual(pair, beta, &v);
        if best <= RESIDUAL_TARGET {
            break;
        }
    }
    if !best.is_finite() {
        return Err(Error::SolverFailure(format!("no eigenvector for beta = {beta}")));
    }
    Ok(v)
}

/// Every eigenpair of the sector, ascending in `β`.
pub fn solve_pair(pair: &OperatorPair) -> Result<Vec<Eigenpair>> {
    let betas = sector_eigenvalues(pair)?;
    let (lower, upper) = BandedLu::bandwidths(&(&pair.a_matrix + &pair.b_matrix));
    betas
        .into_iter()
        .map(|beta| Ok(Eigenpair { beta, coeffs: eigenvector(pair, beta, lower, upper)? }))
        .collect()
}

/// Relative eigen-residual `‖A c − β B c‖ / ‖B c‖`.
pub fn eigen_residual(pair: &OperatorPair, beta: f64, coeffs: &[f64]) -> f64 {
    residual(pair, beta, &DVector::from_column_slice(coeffs))
}

/// Solves one sector at a fixed truncation and normalizes every state.
pub fn solve_spectrum(alpha: f64, spec: ModeSpec) -> Result<Spectrum> {
    let pair = assembly::assemble_sector(alpha, spec)?;
    let pairs = solve_pair(&pair)?;
    let table = basis_table(spec.parity, pair.dimension());
    let states = pairs
        .iter()
        .enumerate()
        .map(|(n_index, p)| {
            let mut wavefunction = rescale(p.coeffs.as_slice(), alpha, spec.parity)?;
            let values = &table * DVector::from_column_slice(&wavefunction.coeffs);
            wavefunction.node_count = sign_changes(values.as_slice());
            Ok(Eigenstate { beta: p.beta, m: spec.m, n_index, wavefunction })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        alpha,
        m: spec.m,
        parity: spec.parity,
        include_vc: spec.include_vc,
        states,
        truncation_used: spec.n_basis,
        converged: false,
    })
}

/// Solves at `spec.n_basis` and marks the result converged when the lowest
/// five eigenvalues agree with a solve at twice the truncation to `tol`.
pub fn solve_checked(alpha: f64, spec: ModeSpec, tol: f64) -> Result<Spectrum> {
    let mut spectrum = solve_spectrum(alpha, spec)?;
    let doubled = lowest(alpha, ModeSpec { n_basis: 2 * spec.n_basis, ..spec })?;
    spectrum.converged = spectrum
        .states
        .iter()
        .zip(&doubled)
        .all(|(s, b)| (s.beta - b).abs() < tol);
    Ok(spectrum)
}

fn lowest(alpha: f64, spec: ModeSpec) -> Result<Vec<f64>> {
    let pair = assembly::assemble_sector(alpha, spec)?;
    let mut betas = sector_eigenvalues(&pair)?;
    betas.truncate(TRACKED_STATES);
    Ok(betas)
}

/// Doubles the truncation from `n_start` until the lowest five eigenvalues
/// move by less than `tol`, up to [`MAX_TRUNCATION`].
pub fn converge_spectrum(
    alpha: f64,
    m: u32,
    parity: Parity,
    include_vc: bool,
    tol: f64,
    n_start: usize,
) -> Result<Spectrum> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if n_start < 8 {
        return Err(Error::InvalidArgument(format!("starting truncation must be >= 8, got {n_start}")));
    }
    assembly::check_alpha(alpha)?;
    let mut n = n_start;
    let mut prev = lowest(alpha, ModeSpec::new(m, parity, n, include_vc)?)?;
    let mut converged = false;
    while n < MAX_TRUNCATION {
        let next_n = (2 * n).min(MAX_TRUNCATION);
        let next = lowest(alpha, ModeSpec::new(m, parity, next_n, include_vc)?)?;
        let drift = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        n = next_n;
        prev = next;
        if drift < tol {
            converged = true;
            break;
        }
    }
    let mut spectrum = solve_spectrum(alpha, ModeSpec::new(m, parity, n, include_vc)?)?;
    spectrum.converged = converged;
    Ok(spectrum)
}
