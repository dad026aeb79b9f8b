//! Fourier-Galerkin matrices for the poloidal eigenproblem on the torus.
//!
//! With `F̃ = 1 + α cos θ` the angular equation
//!
//! ```text
//! ψ'' − α sin θ / F̃ · ψ' − (m²α² − ¼) / F̃² · ψ + β ψ = 0
//! ```
//!
//! is multiplied through by `F̃²` so every coefficient is a trigonometric
//! polynomial of degree two. In the basis `e^{inθ}`, `n ∈ [−N, N]`, this gives
//! the pentadiagonal generalized problem `A c = β B c` where `B` is the
//! multiplication matrix of `F̃²`. Dropping the curvature potential removes the
//! `¼` term only.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 64;
pub const MIN_TRUNCATION: usize = 4;
pub const MIN_QUADRATURE_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// Cosine series `{1, cos θ, …, cos Nθ}`.
    Even,
    /// Sine series `{sin θ, …, sin Nθ}`.
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    /// Dimension of the sector for truncation `n_basis`.
    pub fn dimension(self, n_basis: usize) -> usize {
        match self {
            Parity::Even => n_basis + 1,
            Parity::Odd => n_basis,
        }
    }

    /// Fourier index of the `j`-th basis function in this sector.
    pub fn harmonic(self, j: usize) -> usize {
        match self {
            Parity::Even => j,
            Parity::Odd => j + 1,
        }
    }

    /// `j`-th basis function evaluated at `theta`.
    pub fn basis(self, j: usize, theta: f64) -> f64 {
        let x = self.harmonic(j) as f64 * theta;
        match self {
            Parity::Even => x.cos(),
            Parity::Odd => x.sin(),
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One (m, parity) block of the problem at a given truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeSpec {
    pub m: u32,
    pub parity: Parity,
    pub n_basis: usize,
    pub include_vc: bool,
}

impl ModeSpec {
    pub fn new(m: u32, parity: Parity, n_basis: usize, include_vc: bool) -> Result<Self> {
        if n_basis < MIN_TRUNCATION {
            return Err(Error::InvalidTruncation(n_basis));
        }
        Ok(Self { m, parity, n_basis, include_vc })
    }
}

/// `(A, B)` over the complex-exponential indices `n ∈ [−N, N]`; row/column
/// `i` holds index `i − N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullOperatorPair {
    pub a_matrix: DMatrix<f64>,
    pub b_matrix: DMatrix<f64>,
    pub alpha: f64,
    pub m: u32,
    pub n_basis: usize,
    pub include_vc: bool,
}

impl FullOperatorPair {
    pub fn index_of(&self, n: i64) -> usize {
        (n + self.n_basis as i64) as usize
    }
}

/// `(A, B)` restricted to one parity sector.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPair {
    pub a_matrix: DMatrix<f64>,
    pub b_matrix: DMatrix<f64>,
    pub spec: ModeSpec,
    pub alpha: f64,
}

impl OperatorPair {
    pub fn dimension(&self) -> usize {
        self.a_matrix.nrows()
    }
}

/// Which matrix of the pair a quadrature element refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// `A`, the `F̃²`-multiplied differential operator.
    Operator,
    /// `B`, multiplication by `F̃²`.
    Weight,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// Constant term `m²α² − ¼` (or `m²α²` without the potential). Written as a
/// product so it is exactly zero when `mα = ½`.
pub fn potential_coefficient(alpha: f64, m: u32, include_vc: bool) -> f64 {
    let ma = m as f64 * alpha;
    if include_vc {
        (ma - 0.5) * (ma + 0.5)
    } else {
        ma * ma
    }
}

/// Fourier coefficient `f_d` of `F̃² = (1 + α cos θ)²`.
pub fn weight_band(alpha: f64, d: i64) -> f64 {
    match d.abs() {
        0 => 1.0 + 0.5 * alpha * alpha,
        1 => alpha,
        2 => 0.25 * alpha * alpha,
        _ => 0.0,
    }
}

/// Closed-form `A_{k,n}`.
pub fn operator_entry(alpha: f64, m: u32, include_vc: bool, k: i64, n: i64) -> f64 {
    let kf = k as f64;
    match k - n {
        0 => kf * kf * (1.0 + 0.5 * alpha * alpha) + potential_coefficient(alpha, m, include_vc),
        -1 => alpha * (kf + 1.0) * (kf + 0.5),
        1 => alpha * (kf - 1.0) * (kf - 0.5),
        -2 => 0.25 * alpha * alpha * (kf + 2.0) * (kf + 1.0),
        2 => 0.25 * alpha * alpha * (kf - 2.0) * (kf - 1.0),
        _ => 0.0,
    }
}

/// Assembles the pentadiagonal pair over `n ∈ [−N, N]`.
pub fn assemble_full(alpha: f64, m: u32, n_basis: usize, include_vc: bool) -> Result<FullOperatorPair> {
    check_alpha(alpha)?;
    if n_basis < MIN_TRUNCATION {
        return Err(Error::InvalidTruncation(n_basis));
    }
    let dim = 2 * n_basis + 1;
    let offset = n_basis as i64;
    let mut a = DMatrix::zeros(dim, dim);
    let mut b = DMatrix::zeros(dim, dim);
    for row in 0..dim {
        let k = row as i64 - offset;
        let lo = row.saturating_sub(2);
        let hi = (row + 2).min(dim - 1);
        for col in lo..=hi {
            let n = col as i64 - offset;
            a[(row, col)] = operator_entry(alpha, m, include_vc, k, n);
            b[(row, col)] = weight_band(alpha, k - n);
        }
    }
    Ok(FullOperatorPair { a_matrix: a, b_matrix: b, alpha, m, n_basis, include_vc })
}

/// Restricts the full pair to one parity sector.
///
/// A sector vector `x` expands as `c_0 = x_0`, `c_{±j} = x_j / 2` (even) or
/// `c_{±j} = ±x_j / 2` (odd), i.e. in the unnormalized basis `{1, cos jθ}` or
/// `{sin jθ}`. Reflection symmetry makes rows `−k` redundant, so only rows
/// `k ≥ 0` (even) or `k ≥ 1` (odd) are kept. The resulting `B` is the Gram
/// matrix of the sector basis under `(1/2π)∫ · F̃² dθ` and stays symmetric.
pub fn parity_project(full: &FullOperatorPair, parity: Parity) -> OperatorPair {
    let n_basis = full.n_basis;
    let dim = parity.dimension(n_basis);
    let project = |src: &DMatrix<f64>| {
        DMatrix::from_fn(dim, dim, |r, j| {
            let k = parity.harmonic(r) as i64;
            let n = parity.harmonic(j) as i64;
            let pos = src[(full.index_of(k), full.index_of(n))];
            if n == 0 {
                pos
            } else {
                let neg = src[(full.index_of(k), full.index_of(-n))];
                match parity {
                    Parity::Even => 0.5 * (pos + neg),
                    Parity::Odd => 0.5 * (pos - neg),
                }
            }
        })
    };
    OperatorPair {
        a_matrix: project(&full.a_matrix),
        b_matrix: project(&full.b_matrix),
        spec: ModeSpec { m: full.m, parity, n_basis, include_vc: full.include_vc },
        alpha: full.alpha,
    }
}

/// Assembles and projects in one step.
pub fn assemble_sector(alpha: f64, spec: ModeSpec) -> Result<OperatorPair> {
    let full = assemble_full(alpha, spec.m, spec.n_basis, spec.include_vc)?;
    Ok(parity_project(&full, spec.parity))
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn check_grid(grid_points: usize) -> Result<()> {
    if grid_points < MIN_QUADRATURE_POINTS || !grid_points.is_power_of_two() {
        return Err(Error::GridTooSmall(grid_points));
    }
    Ok(())
}

/// `(k, n)` element of `A` or `B` over exponentials, computed by trapezoidal
/// quadrature of `(1/2π)∫ e^{−ikθ} · Op e^{inθ} dθ`, with `Op` applied
/// analytically to `e^{inθ}`.
pub fn quadrature_oracle(
    alpha: f64,
    m: u32,
    include_vc: bool,
    kind: MatrixKind,
    k: i64,
    n: i64,
    grid_points: usize,
) -> Result<f64> {
    check_grid(grid_points)?;
    let c = potential_coefficient(alpha, m, include_vc);
    let nf = n as f64;
    let d = (n - k) as f64;
    let h = 2.0 * std::f64::consts::PI / grid_points as f64;
    let mut sum = CompensatedSum::default();
    for i in 0..grid_points {
        let theta = i as f64 * h;
        let ft = 1.0 + alpha * theta.cos();
        // Op e^{inθ} = g(θ) e^{inθ}
        let (g_re, g_im) = match kind {
            MatrixKind::Weight => (ft * ft, 0.0),
            MatrixKind::Operator => (nf * nf * ft * ft + c, nf * alpha * theta.sin() * ft),
        };
        let (s, co) = (d * theta).sin_cos();
        sum.add(g_re * co - g_im * s);
    }
    Ok(sum.value() / grid_points as f64)
}

/// Sector counterpart of [`quadrature_oracle`]:
/// `(1/2π)∫ b_k(θ) · Op b_n(θ) dθ` with `b_j` the unnormalized sector basis.
#[allow(clippy::too_many_arguments)]
pub fn sector_quadrature_oracle(
    alpha: f64,
    m: u32,
    include_vc: bool,
    parity: Parity,
    kind: MatrixKind,
    row: usize,
    col: usize,
    grid_points: usize,
) -> Result<f64> {
    check_grid(grid_points)?;
    let c = potential_coefficient(alpha, m, include_vc);
    let n = parity.harmonic(col) as f64;
    let h = 2.0 * std::f64::consts::PI / grid_points as f64;
    let mut sum = CompensatedSum::default();
    for i in 0..grid_points {
        let theta = i as f64 * h;
        let ft = 1.0 + alpha * theta.cos();
        let basis = parity.basis(col, theta);
        let applied = match kind {
            MatrixKind::Weight => ft * ft * basis,
            MatrixKind::Operator => {
                // derivative of cos nθ is −n sin nθ, of sin nθ is n cos nθ
                let deriv = match parity {
                    Parity::Even => -n * (n * theta).sin(),
                    Parity::Odd => n * (n * theta).cos(),
                };
                n * n * ft * ft * basis + alpha * theta.sin() * ft * deriv + c * basis
            }
        };
        sum.add(parity.basis(row, theta) * applied);
    }
    Ok(sum.value() / grid_points as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_entries_at_half() {
        let p = assemble_full(0.5, 0, 8, true).unwrap();
        let z = p.index_of(0);
        assert_eq!(p.a_matrix[(z, z)], -0.25);
        assert_eq!(p.b_matrix[(z, z)], 1.125);
        assert_eq!(p.b_matrix[(z, z + 1)], 0.5);
        assert_eq!(p.b_matrix[(z, z - 1)], 0.5);
        assert_eq!(p.b_matrix[(z, z + 2)], 0.0625);
        assert_eq!(p.b_matrix[(z, z - 2)], 0.0625);
        assert_eq!(p.b_matrix[(z, z + 3)], 0.0);
    }

    #[test]
    fn reference_entries_match_oracle() {
        let a00 = quadrature_oracle(0.5, 0, true, MatrixKind::Operator, 0, 0, 4096).unwrap();
        assert!((a00 + 0.25).abs() < 1e-12);
        for (d, f) in [(0, 1.125), (1, 0.5), (2, 0.0625)] {
            let v = quadrature_oracle(0.5, 0, true, MatrixKind::Weight, 0, d, 4096).unwrap();
            assert!((v - f).abs() < 1e-12, "{d}: {v}");
        }
        for (k, n) in [(0, 3), (5, -2), (-7, 7)] {
            for kind in [MatrixKind::Operator, MatrixKind::Weight] {
                let v = quadrature_oracle(0.7, 3, true, kind, k, n, 1024).unwrap();
                assert!(v.abs() < 1e-13, "{k},{n}: {v}");
            }
        }
    }

    #[test]
    fn free_constant_column_vanishes() {
        for alpha in [0.05, 0.3, 0.9] {
            let p = assemble_full(alpha, 0, 10, false).unwrap();
            let z = p.index_of(0);
            assert!(p.a_matrix.column(z).iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn magic_radius_gives_free_m0_matrices() {
        for m in 1..=4u32 {
            let alpha = 1.0 / (2.0 * m as f64);
            let constrained = assemble_full(alpha, m, 16, true).unwrap();
            let free = assemble_full(alpha, 0, 16, false).unwrap();
            assert_eq!(constrained.a_matrix, free.a_matrix, "m = {m}");
            assert_eq!(constrained.b_matrix, free.b_matrix);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(assemble_full(1.0, 0, 8, true), Err(Error::InvalidAlpha(1.0)));
        assert_eq!(assemble_full(0.0, 0, 8, true), Err(Error::InvalidAlpha(0.0)));
        assert_eq!(assemble_full(0.5, 0, 3, true), Err(Error::InvalidTruncation(3)));
        assert!(ModeSpec::new(0, Parity::Even, 3, true).is_err());
        assert_eq!(
            quadrature_oracle(0.5, 0, true, MatrixKind::Weight, 0, 0, 512),
            Err(Error::GridTooSmall(512))
        );
        assert!(quadrature_oracle(0.5, 0, true, MatrixKind::Weight, 0, 0, 1500).is_err());
    }

    #[test]
    fn sector_dimensions_and_symmetry() {
        let full = assemble_full(0.6, 2, 12, true).unwrap();
        let even = parity_project(&full, Parity::Even);
        let odd = parity_project(&full, Parity::Odd);
        assert_eq!(even.dimension() + odd.dimension(), full.a_matrix.nrows());
        for sector in [&even, &odd] {
            let b = &sector.b_matrix;
            assert!((b - b.transpose()).amax() < 1e-14);
            let min_eig = b.clone().symmetric_eigenvalues().min();
            assert!(min_eig > 0.0);
        }
    }

    #[test]
    fn even_weight_row_zero() {
        let even = assemble_sector(0.5, ModeSpec::new(0, Parity::Even, 8, true).unwrap()).unwrap();
        let row: Vec<f64> = even.b_matrix.row(0).iter().copied().collect();
        assert_eq!(&row[..4], &[1.125, 0.5, 0.0625, 0.0]);
        for col in 0..4 {
            let q = sector_quadrature_oracle(0.5, 0, true, Parity::Even, MatrixKind::Weight, 0, col, 4096)
                .unwrap();
            assert!((q - row[col]).abs() < 1e-12);
        }
    }

    #[test]
    fn sector_matrices_match_sector_quadrature() {
        for parity in [Parity::Even, Parity::Odd] {
            let spec = ModeSpec::new(1, parity, 8, true).unwrap();
            let pair = assemble_sector(0.45, spec).unwrap();
            for r in 0..pair.dimension() {
                for c in 0..pair.dimension() {
                    for (kind, m) in [(MatrixKind::Operator, &pair.a_matrix), (MatrixKind::Weight, &pair.b_matrix)] {
                        let q = sector_quadrature_oracle(0.45, 1, true, parity, kind, r, c, 2048).unwrap();
                        assert!((q - m[(r, c)]).abs() < 1e-11, "{parity} {kind:?} ({r},{c})");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn closed_form_matches_quadrature(
            alpha in 0.01f64..0.99, m in 0u32..8, vc: bool, k in -20i64..=20, n in -20i64..=20,
        ) {
            let a = operator_entry(alpha, m, vc, k, n);
            let qa = quadrature_oracle(alpha, m, vc, MatrixKind::Operator, k, n, 1024).unwrap();
            prop_assert!((a - qa).abs() < 1e-12, "A: {} vs {}", a, qa);
            let b = weight_band(alpha, k - n);
            let qb = quadrature_oracle(alpha, m, vc, MatrixKind::Weight, k, n, 1024).unwrap();
            prop_assert!((b - qb).abs() < 1e-12);
        }

        #[test]
        fn reflection_symmetry(alpha in 0.01f64..0.99, m in 0u32..6, vc: bool) {
            let p = assemble_full(alpha, m, 6, vc).unwrap();
            let d = p.a_matrix.nrows();
            for r in 0..d {
                for c in 0..d {
                    prop_assert_eq!(p.a_matrix[(r, c)], p.a_matrix[(d - 1 - r, d - 1 - c)]);
                    prop_assert_eq!(p.b_matrix[(r, c)], p.b_matrix[(d - 1 - r, d - 1 - c)]);
                }
            }
        }
    }
}
