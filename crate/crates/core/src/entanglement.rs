//! Bipartite pure states: partial traces, Schmidt decomposition, purification,
//! von Neumann entropy, qubit Bloch vectors and Page's average entropy.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::group::Group;
use crate::haar_sampler::{mc_estimate_streams, sample, CMatrix, McEstimate, RngStream};
use crate::scalar::{self, Scalar};

pub const STATE_TOLERANCE: f64 = 1e-12;
pub const MIN_ENTROPY_SAMPLES: usize = 100;
const CLIP: f64 = 1e-12;

/// A unit vector in `C^m ⊗ C^n`, amplitude of `e_i ⊗ f_j` at `i·n + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    m: usize,
    n: usize,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(m: usize, n: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        if m == 0 || n == 0 || amplitudes.len() != m * n {
            return invalid(format!("{} amplitudes do not fit dimensions {m}×{n}", amplitudes.len()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOLERANCE {
            return invalid(format!("state has norm {norm}, expected 1"));
        }
        Ok(Self { m, n, amplitudes })
    }

    /// Normalizes `amplitudes` first.
    pub fn normalized(m: usize, n: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return invalid("cannot normalize the zero vector");
        }
        Self::new(m, n, amplitudes / Complex64::new(norm, 0.0))
    }

    /// `e_i ⊗ f_j`, zero-based.
    pub fn product(m: usize, n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= m || j >= n {
            return invalid("basis index out of range");
        }
        let mut v = DVector::zeros(m * n);
        v[i * n + j] = Complex64::new(1.0, 0.0);
        Self::new(m, n, v)
    }

    /// `(e_1⊗f_1 + e_2⊗f_2)/√2` on two qubits.
    pub fn bell() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::zero();
        Self::new(2, 2, DVector::from_vec(vec![h, z, z, h])).expect("unit vector")
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// The coefficient matrix `M_{ij} = ⟨e_i⊗f_j|v⟩`.
    pub fn coefficient_matrix(&self) -> CMatrix {
        DMatrix::from_fn(self.m, self.n, |i, j| self.amplitudes[i * self.n + j])
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix { matrix: &self.amplitudes * self.amplitudes.adjoint() }
    }
}

/// Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return invalid("density matrix must be square and non-empty");
        }
        let herm = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > STATE_TOLERANCE {
            return invalid(format!("matrix is not Hermitian (residual {herm:e})"));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOLERANCE {
            return invalid(format!("trace is {tr}, expected 1"));
        }
        let min = matrix.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return invalid(format!("matrix has negative eigenvalue {min:e}"));
        }
        Ok(Self { matrix })
    }

    /// `I/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: CMatrix::identity(d, d) / Complex64::new(d as f64, 0.0) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues clipped at zero, in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eigs: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().map(|&x| if x < CLIP { 0.0 } else { x }).collect();
        eigs.sort_by(|a, b| b.total_cmp(a));
        eigs
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// The marginal on `keep` of a state on `C^m ⊗ C^n`.
pub fn partial_trace(rho: &DensityMatrix, m: usize, n: usize, keep: Subsystem) -> Result<DensityMatrix> {
    if m == 0 || n == 0 || rho.dim() != m * n {
        return invalid(format!("dimension {} does not factor as {m}×{n}", rho.dim()));
    }
    let r = &rho.matrix;
    let out = match keep {
        Subsystem::A => DMatrix::from_fn(m, m, |i, k| (0..n).map(|j| r[(i * n + j, k * n + j)]).sum()),
        Subsystem::B => DMatrix::from_fn(n, n, |j, l| (0..m).map(|i| r[(i * n + j, i * n + l)]).sum()),
    };
    Ok(DensityMatrix { matrix: out })
}

/// `v = Σ ξ_k e_k ⊗ f_k`.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub basis_a: Vec<DVector<Complex64>>,
    pub basis_b: Vec<DVector<Complex64>>,
}

impl Schmidt {
    pub fn reconstruct(&self) -> DVector<Complex64> {
        let (m, n) = (self.basis_a[0].len(), self.basis_b[0].len());
        let mut v = DVector::zeros(m * n);
        for ((x, e), f) in self.coefficients.iter().zip(&self.basis_a).zip(&self.basis_b) {
            for i in 0..m {
                for j in 0..n {
                    v[i * n + j] += e[i] * f[j] * *x;
                }
            }
        }
        v
    }
}

/// Schmidt decomposition through the SVD of the coefficient matrix.
pub fn schmidt(v: &PureState) -> Schmidt {
    let svd = v.coefficient_matrix().svd(true, true);
    let (u, vt) = (svd.u.expect("requested U"), svd.v_t.expect("requested V^T"));
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    Schmidt {
        coefficients: order.iter().map(|&k| svd.singular_values[k]).collect(),
        basis_a: order.iter().map(|&k| u.column(k).into_owned()).collect(),
        // M = Σ ξ_k u_k v_k†, so f_k is the k-th row of V†
        basis_b: order.iter().map(|&k| vt.row(k).transpose()).collect(),
    }
}

/// `v = Σ √λ_i e_i ⊗ f_i`.
pub fn purify(eigs: &[f64], m: usize, n: usize) -> Result<PureState> {
    if eigs.len() > m.min(n) {
        return invalid(format!("{} eigenvalues do not fit a {m}×{n} purification", eigs.len()));
    }
    if eigs.iter().any(|&x| x < 0.0) || (eigs.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
        return invalid("eigenvalues must be non-negative and sum to 1");
    }
    let mut v = DVector::zeros(m * n);
    for (i, &l) in eigs.iter().enumerate() {
        v[i * n + i] = Complex64::new(l.sqrt(), 0.0);
    }
    PureState::normalized(m, n, v)
}

/// `−Σ λ ln λ` over an eigenvalue list, with `0·ln 0 = 0`; the list is renormalized after clipping.
pub fn spectrum_entropy(eigs: &[f64]) -> f64 {
    let clipped: Vec<f64> = eigs.iter().map(|&x| if x < CLIP { 0.0 } else { x }).collect();
    let total: f64 = clipped.iter().sum();
    -clipped.iter().filter(|&&x| x > 0.0).map(|&x| x / total).map(|p| p * p.ln()).sum::<f64>()
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    spectrum_entropy(&rho.eigenvalues())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// `(Tr ρσ₁, Tr ρσ₂, Tr ρσ₃)` for a qubit.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return invalid(format!("Bloch vectors need a qubit, got dimension {}", rho.dim()));
    }
    let r = &rho.matrix;
    Ok(BlochVector { x: 2.0 * r[(0, 1)].re, y: -2.0 * r[(0, 1)].im, z: (r[(0, 0)] - r[(1, 1)]).re })
}

/// Lubkin's approximation `ln m − m/(2n)`.
pub fn page_entropy_approx(m: usize, n: usize) -> f64 {
    (m as f64).ln() - m as f64 / (2.0 * n as f64)
}

/// `Σ_{k=n+1}^{mn} 1/k − (m−1)/(2n)` as an exact rational, for `m ≤ n`.
pub fn page_entropy_exact_rational(m: usize, n: usize) -> Result<Scalar> {
    if m == 0 || n == 0 {
        return invalid("dimensions must be positive");
    }
    if m > n {
        return invalid(format!("the formula needs m ≤ n; call with ({n}, {m}) instead, the average is symmetric"));
    }
    let mut s = Scalar::zero();
    for k in n + 1..=m * n {
        s += scalar::ratio(1, k as i64);
    }
    Ok(s - scalar::ratio(m as i64 - 1, 2 * n as i64))
}

pub fn page_entropy_exact(m: usize, n: usize) -> Result<f64> {
    Ok(scalar::to_f64(&page_entropy_exact_rational(m, n)?))
}

/// First column of a Haar unitary on `C^{mn}`.
pub fn random_pure_state(m: usize, n: usize, stream: RngStream) -> PureState {
    let u = sample(Group::U, m * n, stream);
    PureState::normalized(m, n, u.matrix.column(0).into_owned()).expect("unitary columns are unit vectors")
}

/// Normalized standard complex Gaussian vector on `C^{mn}`.
pub fn gaussian_pure_state(m: usize, n: usize, stream: RngStream) -> PureState {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = stream.rng();
    let v = DVector::from_fn(m * n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    PureState::normalized(m, n, v).expect("Gaussian vectors are nonzero")
}

/// `S(ρ_A)` of a pure state.
pub fn entanglement_entropy(v: &PureState) -> f64 {
    let (m, n) = v.dims();
    von_neumann_entropy(&partial_trace(&v.density_matrix(), m, n, Subsystem::A).expect("dimensions match"))
}

/// Mean of `S(ρ_A)` over Haar-random pure states.
pub fn mc_average_entropy(m: usize, n: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    if m == 0 || n == 0 {
        return invalid("dimensions must be positive");
    }
    if samples < MIN_ENTROPY_SAMPLES {
        return invalid(format!("need at least {MIN_ENTROPY_SAMPLES} samples, got {samples}"));
    }
    Ok(mc_estimate_streams(samples, seed, |s| Complex64::new(entanglement_entropy(&random_pure_state(m, n, s)), 0.0)))
}
