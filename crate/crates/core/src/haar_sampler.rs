//! Haar-distributed random matrices and deterministic parallel Monte Carlo.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::Group;

pub type CMatrix = DMatrix<Complex64>;

/// Counter-based random stream: sample `stream` of run `seed` always draws the same numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// A matrix drawn from `group` (`2N × 2N` for `Sp`).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSample {
    pub group: Group,
    pub matrix: CMatrix,
}

impl GroupSample {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// `‖M*M − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim();
        let g = self.matrix.adjoint() * &self.matrix - CMatrix::identity(d, d);
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }

    /// `‖MᵀJM − J‖_max` for the symplectic form with `J_{2k−1,2k} = 1 = −J_{2k,2k−1}`.
    pub fn symplectic_residual(&self) -> f64 {
        let j = symplectic_j(self.dim() / 2);
        let g = self.matrix.transpose() * &j * &self.matrix - &j;
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imaginary(&self) -> f64 {
        self.matrix.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// The `2N × 2N` form `J` with `J_{2k−1,2k} = 1` and `J_{2k,2k−1} = −1` (one-based).
pub fn symplectic_j(rank: usize) -> CMatrix {
    let mut j = CMatrix::zeros(2 * rank, 2 * rank);
    for k in 0..rank {
        j[(2 * k, 2 * k + 1)] = Complex64::new(1.0, 0.0);
        j[(2 * k + 1, 2 * k)] = Complex64::new(-1.0, 0.0);
    }
    j
}

fn complex_gaussian(rng: &mut ChaCha20Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn real_gaussian(rng: &mut ChaCha20Rng) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), 0.0)
}

/// QR of `z`, with the columns of `Q` rescaled by the phases of `R`'s diagonal.
fn haar_from_gaussian(z: CMatrix) -> CMatrix {
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (k, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        col *= phase;
    }
    q
}

pub fn sample_unitary(n: usize, stream: RngStream) -> GroupSample {
    let mut rng = stream.rng();
    let z = CMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng));
    GroupSample { group: Group::U, matrix: haar_from_gaussian(z) }
}

pub fn sample_special_unitary(n: usize, stream: RngStream) -> GroupSample {
    let mut u = sample_unitary(n, stream).matrix;
    let det = u.determinant();
    u *= Complex64::from_polar(1.0, -det.arg() / n as f64);
    GroupSample { group: Group::SU, matrix: u }
}

pub fn sample_orthogonal(n: usize, stream: RngStream) -> GroupSample {
    let mut rng = stream.rng();
    let z = CMatrix::from_fn(n, n, |_, _| real_gaussian(&mut rng));
    let mut q = haar_from_gaussian(z);
    q.iter_mut().for_each(|x| x.im = 0.0);
    GroupSample { group: Group::O, matrix: q }
}

pub fn sample_special_orthogonal(n: usize, stream: RngStream) -> GroupSample {
    let mut q = sample_orthogonal(n, stream).matrix;
    if q.determinant().re < 0.0 {
        q.column_mut(0).neg_mut();
    }
    GroupSample { group: Group::SO, matrix: q }
}

/// Haar on `Sp(2N) ∩ U(2N)`: column `2k−1` is a Gaussian vector orthonormalized
/// against the previous columns and column `2k` is `Jᵀ` applied to its conjugate.
pub fn sample_compact_symplectic(rank: usize, stream: RngStream) -> GroupSample {
    let mut rng = stream.rng();
    let d = 2 * rank;
    let jt = symplectic_j(rank).transpose();
    let mut u = CMatrix::zeros(d, d);
    for k in 0..rank {
        let mut v = nalgebra::DVector::from_fn(d, |_, _| complex_gaussian(&mut rng));
        // two passes keep the residual at round-off level
        for _ in 0..2 {
            for c in 0..2 * k {
                let col = u.column(c);
                let ip = col.dotc(&v);
                v -= col * ip;
            }
        }
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        let partner = &jt * v.map(|z| z.conj());
        u.set_column(2 * k, &v);
        u.set_column(2 * k + 1, &partner);
    }
    GroupSample { group: Group::Sp, matrix: u }
}

/// One Haar sample of `group` at parameter `n` (rank for `Sp`).
pub fn sample(group: Group, n: usize, stream: RngStream) -> GroupSample {
    match group {
        Group::U => sample_unitary(n, stream),
        Group::SU => sample_special_unitary(n, stream),
        Group::O => sample_orthogonal(n, stream),
        Group::SO => sample_special_orthogonal(n, stream),
        Group::Sp => sample_compact_symplectic(n, stream),
    }
}

/// A Monte Carlo mean with its standard error `s/√n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    #[serde(with = "complex_parts", flatten)]
    pub mean: Complex64,
    pub stderr: f64,
    pub n: usize,
    pub seed: u64,
}

mod complex_parts {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Parts {
        mean_re: f64,
        mean_im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Parts { mean_re: z.re, mean_im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let p = Parts::deserialize(d)?;
        Ok(Complex64::new(p.mean_re, p.mean_im))
    }
}

impl McEstimate {
    /// Whether `value` lies within `sigmas` standard errors; a zero standard error
    /// falls back to an absolute tolerance of `1e-12`.
    pub fn agrees_with(&self, value: Complex64, sigmas: f64) -> bool {
        let diff = (self.mean - value).norm();
        diff <= sigmas * self.stderr + 1e-12
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("estimate serializes")
    }
}

/// Pairwise (cascade) summation; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Evaluates `f` on stream `i` of `seed` for `i in 0..samples` (in parallel) and
/// reduces in sample order, so the estimate does not depend on the thread count.
pub fn mc_estimate_streams<F>(samples: usize, seed: u64, f: F) -> McEstimate
where
    F: Fn(RngStream) -> Complex64 + Sync,
{
    assert!(samples >= 2, "need at least two samples for a standard error");
    let values: Vec<Complex64> = (0..samples as u64).into_par_iter().map(|i| f(RngStream::new(seed, i))).collect();
    summarize(&values, seed)
}

pub(crate) fn summarize(values: &[Complex64], seed: u64) -> McEstimate {
    let n = values.len();
    let mean = pairwise_sum(values) / n as f64;
    let dev: Vec<Complex64> = values.iter().map(|&x| Complex64::new((x - mean).norm_sqr(), 0.0)).collect();
    let var = pairwise_sum(&dev).re / (n as f64 - 1.0);
    McEstimate { mean, stderr: (var / n as f64).sqrt(), n, seed }
}

/// `E[f(u)]` for Haar-random `u` in `group`.
pub fn mc_expectation<F>(group: Group, n: usize, f: F, samples: usize, seed: u64) -> McEstimate
where
    F: Fn(&GroupSample) -> Complex64 + Sync,
{
    mc_estimate_streams(samples, seed, |s| f(&sample(group, n, s)))
}
