//! Wigner `d` and `D` matrices and Haar integrals of products of SU(2)
//! representation matrix elements. Spins and magnetic numbers are stored
//! doubled, so `J = twice_j / 2`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::haar_sampler::pairwise_sum;
use crate::scalar::{binomial, factorial, log_abs, ExactValue, Scalar};

pub const MIN_QUADRATURE_NODES: usize = 8;
pub const DEFAULT_QUADRATURE_NODES: usize = 32;

/// `(J, m′, m)` with every entry doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinTriple {
    pub twice_j: u32,
    pub twice_mp: i32,
    pub twice_m: i32,
}

impl SpinTriple {
    pub fn new(twice_j: u32, twice_mp: i32, twice_m: i32) -> Result<Self> {
        let t = Self { twice_j, twice_mp, twice_m };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let j = self.twice_j as i32;
        for m in [self.twice_mp, self.twice_m] {
            if m.abs() > j || (j - m) % 2 != 0 {
                return invalid(format!("magnetic index {m}/2 is not valid for J = {j}/2"));
            }
        }
        Ok(())
    }

    /// `(j+m, j−m, j+m′, j−m′)` as integers.
    fn shifts(&self) -> (u64, u64, u64, u64) {
        let j = self.twice_j as i64;
        let h = |x: i64| (x / 2) as u64;
        (h(j + self.twice_m as i64), h(j - self.twice_m as i64), h(j + self.twice_mp as i64), h(j - self.twice_mp as i64))
    }

    /// `(j+m)!(j−m)!(j+m′)!(j−m′)!`, the square of the common numerator.
    fn factorial_product(&self) -> BigInt {
        let (a, b, c, d) = self.shifts();
        factorial(a) * factorial(b) * factorial(c) * factorial(d)
    }

    /// Terms `(sign / denominator, cos power, sin power)` of the μ sum, without the
    /// common `√((j+m)!(j−m)!(j+m′)!(j−m′)!)`.
    fn expansion(&self) -> Vec<(Scalar, u32, u32)> {
        let (jpm, jmm, _, jmmp) = self.shifts();
        let diff = (self.twice_mp - self.twice_m) / 2;
        let lo = (-diff).max(0) as u64;
        let hi = jpm.min(jmmp);
        let mut out = Vec::new();
        for mu in lo..=hi {
            let den = factorial(mu) * factorial(jpm - mu) * factorial(jmmp - mu) * factorial((diff + mu as i32) as u64);
            let sign = if (diff as i64 + mu as i64).rem_euclid(2) == 0 { 1 } else { -1 };
            let cos_pow = (jpm + jmm) as i64 - diff as i64 - 2 * mu as i64;
            let sin_pow = 2 * mu as i64 + diff as i64;
            out.push((Scalar::new(BigInt::from(sign), den), cos_pow as u32, sin_pow as u32));
        }
        out
    }
}

/// Float coefficients of the μ sum for one triple.
#[derive(Debug, Clone)]
struct SmallD {
    terms: Vec<(f64, i32, i32)>,
}

impl SmallD {
    fn new(t: SpinTriple) -> Self {
        let root = 0.5 * log_abs(&t.factorial_product());
        let terms = t
            .expansion()
            .into_iter()
            .map(|(coef, a, b)| {
                let mag = (root + log_abs(coef.numer()) - log_abs(coef.denom())).exp();
                (if coef.is_negative() { -mag } else { mag }, a as i32, b as i32)
            })
            .collect();
        Self { terms }
    }

    fn eval(&self, beta: f64) -> f64 {
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        self.terms.iter().map(|&(k, a, b)| k * c.powi(a) * s.powi(b)).sum()
    }
}

/// `d^J_{m′m}(β)` by the alternating factorial sum.
pub fn wigner_small_d(t: SpinTriple, beta: f64) -> Result<f64> {
    t.validate()?;
    Ok(SmallD::new(t).eval(beta))
}

/// Euler angles `α ∈ [0, 4π)`, `β ∈ [0, π]`, `γ ∈ [0, 4π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// `D^J_{m′m}(α,β,γ) = e^{−i(αm′+γm)} d^J_{m′m}(β)`.
pub fn wigner_big_d(t: SpinTriple, angles: EulerAngles) -> Result<Complex64> {
    let d = wigner_small_d(t, angles.beta)?;
    let phase = -(angles.alpha * t.twice_mp as f64 + angles.gamma * t.twice_m as f64) / 2.0;
    Ok(Complex64::from_polar(d, phase))
}

/// The full `(2J+1) × (2J+1)` matrix `d^J(β)`, rows and columns ordered `m = J, J−1, …, −J`.
pub fn small_d_matrix(twice_j: u32, beta: f64) -> Vec<Vec<f64>> {
    let ms: Vec<i32> = (0..=twice_j).map(|k| twice_j as i32 - 2 * k as i32).collect();
    ms.iter()
        .map(|&mp| ms.iter().map(|&m| wigner_small_d(SpinTriple { twice_j, twice_mp: mp, twice_m: m }, beta).unwrap()).collect())
        .collect()
}

/// One factor `D^J_{m′m}` (or its conjugate) of an SU(2) monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Su2Factor {
    pub twice_j: u32,
    pub twice_mp: i32,
    pub twice_m: i32,
    #[serde(default)]
    pub conj: bool,
}

impl Su2Factor {
    pub fn triple(&self) -> SpinTriple {
        SpinTriple { twice_j: self.twice_j, twice_mp: self.twice_mp, twice_m: self.twice_m }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Su2MonomialSpec {
    pub factors: Vec<Su2Factor>,
}

impl Su2MonomialSpec {
    pub fn new(factors: Vec<Su2Factor>) -> Result<Self> {
        let s = Self { factors };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.factors.iter().try_for_each(|f| f.triple().validate())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// `(Σ_plain m′ − Σ_conj m′, Σ_plain m − Σ_conj m)`, doubled.
    fn charges(&self) -> (i64, i64) {
        self.factors.iter().fold((0, 0), |(a, b), f| {
            let s = if f.conj { -1 } else { 1 };
            (a + s * f.twice_mp as i64, b + s * f.twice_m as i64)
        })
    }
}

/// `(1/2)∫₀^π sin β cos^A(β/2) sin^B(β/2) dβ = (A/2)!(B/2)!/((A+B)/2+1)!` for even `A`, `B`.
pub fn beta_integral(a: u32, b: u32) -> Scalar {
    assert!(a.is_multiple_of(2) && b.is_multiple_of(2), "exponents must be even");
    let (a, b) = (a as u64 / 2, b as u64 / 2);
    Scalar::new(factorial(a) * factorial(b), factorial(a + b + 1))
}

/// The same integral as an alternating binomial sum over `x = sin²(β/2)`:
/// `Σ_{i=0}^{A/2} (−1)^i C(A/2, i) / (i + 1 + B/2)`.
pub fn binomial_integral(a: u32, b: u32) -> Scalar {
    assert!(a.is_multiple_of(2) && b.is_multiple_of(2), "exponents must be even");
    let (l, h) = (a as u64 / 2, b as u64 / 2);
    let mut acc = Scalar::zero();
    for i in 0..=l {
        let term = Scalar::new(binomial(l, i), BigInt::from(i + 1 + h));
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Integrates `∏ d` products over β with `beta`, after the α and γ constraints.
fn closed_with(spec: &Su2MonomialSpec, use_identity: bool, beta: fn(u32, u32) -> Scalar) -> Result<ExactValue> {
    spec.validate()?;
    let (qa, qg) = spec.charges();
    if qa != 0 || qg != 0 {
        return Ok(ExactValue::Rational(Scalar::zero()));
    }
    let mut radicand = BigInt::one();
    let mut prefactor = Scalar::one();
    let mut expansions = Vec::with_capacity(spec.factors.len());
    for f in &spec.factors {
        let mut t = f.triple();
        if use_identity && f.conj {
            // D*_{m′m} = (−1)^{m′−m} D_{−m′,−m}
            if ((t.twice_mp - t.twice_m) / 2).rem_euclid(2) == 1 {
                prefactor = -prefactor;
            }
            t = SpinTriple { twice_j: t.twice_j, twice_mp: -t.twice_mp, twice_m: -t.twice_m };
        }
        radicand *= t.factorial_product();
        expansions.push(t.expansion());
    }
    let mut total = Scalar::zero();
    let mut stack: Vec<(usize, Scalar, u32, u32)> = vec![(0, Scalar::one(), 0, 0)];
    while let Some((k, c, a, b)) = stack.pop() {
        if k == expansions.len() {
            total += c * beta(a, b);
            continue;
        }
        for (coef, da, db) in &expansions[k] {
            stack.push((k + 1, &c * coef, a + da, b + db));
        }
    }
    if radicand.is_zero() {
        return Ok(ExactValue::Rational(Scalar::zero()));
    }
    Ok(ExactValue::with_sqrt(prefactor * total, &Scalar::from_integer(radicand)))
}

/// Exact value via the Beta function; the factorial square roots leave a surd.
pub fn su2_integral_exact(spec: &Su2MonomialSpec) -> Result<ExactValue> {
    closed_with(spec, false, beta_integral)
}

/// Exact value by the alternating binomial sum, with conjugated factors rewritten
/// through the conjugation identity so the half-angle exponents no longer depend on `m′ − m`.
pub fn su2_integral_binomial(spec: &Su2MonomialSpec) -> Result<ExactValue> {
    closed_with(spec, true, binomial_integral)
}

pub fn su2_integral_closed(spec: &Su2MonomialSpec) -> Result<f64> {
    Ok(su2_integral_exact(spec)?.to_f64())
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn scaled_rule(n: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
    x.iter().zip(&w).map(|(&x, &w)| (mid + half * x, half * w)).collect()
}

/// Tensor-product Gauss–Legendre estimate of the integral (complex; the imaginary
/// part is quadrature noise).
pub fn su2_integral_quadrature_complex(spec: &Su2MonomialSpec, nodes: usize) -> Result<Complex64> {
    spec.validate()?;
    if nodes < MIN_QUADRATURE_NODES {
        return invalid(format!("need at least {MIN_QUADRATURE_NODES} nodes per dimension, got {nodes}"));
    }
    let four_pi = 4.0 * std::f64::consts::PI;
    let ra = scaled_rule(nodes, 0.0, four_pi);
    let rb = scaled_rule(nodes, 0.0, std::f64::consts::PI);
    let norm = 1.0 / (32.0 * std::f64::consts::PI * std::f64::consts::PI);
    // d values at every β node, and the signed doubled (m′, m) charges of each factor
    let d_at: Vec<Vec<f64>> = spec
        .factors
        .iter()
        .map(|f| {
            let d = SmallD::new(f.triple());
            rb.iter().map(|&(beta, _)| d.eval(beta)).collect()
        })
        .collect();
    let signs: Vec<f64> = spec.factors.iter().map(|f| if f.conj { -1.0 } else { 1.0 }).collect();
    let per_alpha: Vec<Complex64> = ra
        .par_iter()
        .map(|&(alpha, wa)| {
            let mut terms = Vec::with_capacity(nodes * nodes);
            for (ib, &(beta, wb)) in rb.iter().enumerate() {
                for &(gamma, wg) in &ra {
                    let mut phase = 0.0;
                    let mut v = wa * wb * wg * beta.sin() * norm;
                    for (k, f) in spec.factors.iter().enumerate() {
                        phase -= signs[k] * (alpha * f.twice_mp as f64 + gamma * f.twice_m as f64) / 2.0;
                        v *= d_at[k][ib];
                    }
                    terms.push(Complex64::from_polar(v, phase));
                }
            }
            pairwise_sum(&terms)
        })
        .collect();
    Ok(pairwise_sum(&per_alpha))
}

pub fn su2_integral_quadrature(spec: &Su2MonomialSpec, nodes: usize) -> Result<f64> {
    Ok(su2_integral_quadrature_complex(spec, nodes)?.re)
}

/// One row of the equal-spin exploration table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub twice_j: u32,
    pub value: String,
    pub value_f64: f64,
    /// `(2J+1)·value`, which Schur orthogonality pins to 1 when `k = k′ = 1`.
    pub scaled: f64,
}

/// `∫ |D^J_{m m}|^{2k}` with `m` the lowest non-negative magnetic number, for each
/// `2J` in `twice_js`. Numbers only; no asymptotic claim is attached.
pub fn equal_spin_scan(k: usize, twice_js: &[u32]) -> Result<Vec<ScanRow>> {
    twice_js
        .iter()
        .map(|&tj| {
            let tm = (tj % 2) as i32;
            let f = Su2Factor { twice_j: tj, twice_mp: tm, twice_m: tm, conj: false };
            let mut factors = vec![f; k];
            factors.extend(vec![Su2Factor { conj: true, ..f }; k]);
            let v = su2_integral_exact(&Su2MonomialSpec::new(factors)?)?;
            let x = v.to_f64();
            Ok(ScanRow { twice_j: tj, value: v.to_string(), value_f64: x, scaled: x * (tj + 1) as f64 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use std::f64::consts::PI;

    fn fac(tj: u32, tmp: i32, tm: i32, conj: bool) -> Su2Factor {
        Su2Factor { twice_j: tj, twice_mp: tmp, twice_m: tm, conj }
    }

    fn spec(f: Vec<Su2Factor>) -> Su2MonomialSpec {
        Su2MonomialSpec::new(f).unwrap()
    }

    fn triples(max_tj: u32) -> Vec<SpinTriple> {
        let mut out = Vec::new();
        for tj in 0..=max_tj {
            for a in 0..=tj {
                for b in 0..=tj {
                    out.push(SpinTriple { twice_j: tj, twice_mp: tj as i32 - 2 * a as i32, twice_m: tj as i32 - 2 * b as i32 });
                }
            }
        }
        out
    }

    #[test]
    fn small_d_examples() {
        let half = SpinTriple::new(1, 1, 1).unwrap();
        let one = SpinTriple::new(2, 0, 0).unwrap();
        for beta in [0.0, 0.3, 1.2, 2.9, PI] {
            assert!((wigner_small_d(half, beta).unwrap() - (beta / 2.0).cos()).abs() < 1e-15);
            assert!((wigner_small_d(one, beta).unwrap() - beta.cos()).abs() < 1e-14);
            assert!((wigner_small_d(SpinTriple::new(1, 1, -1).unwrap(), beta).unwrap() + (beta / 2.0).sin()).abs() < 1e-15);
        }
        for t in triples(6) {
            let want = if t.twice_mp == t.twice_m { 1.0 } else { 0.0 };
            assert_eq!(wigner_small_d(t, 0.0).unwrap(), want);
        }
        assert!(SpinTriple::new(2, 1, 0).is_err());
        assert!(SpinTriple::new(1, 3, 1).is_err());
    }

    #[test]
    fn small_d_is_orthogonal() {
        for tj in 0..=6 {
            for beta in [0.4, 1.7, 2.8] {
                let d = small_d_matrix(tj, beta);
                let n = d.len();
                for a in 0..n {
                    for b in 0..n {
                        let dot: f64 = (0..n).map(|k| d[k][a] * d[k][b]).sum();
                        assert!((dot - f64::from(u8::from(a == b))).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn big_d_half_matches_su2_matrix() {
        let angles = [EulerAngles { alpha: 0.3, beta: 1.1, gamma: 2.5 }, EulerAngles { alpha: 3.9, beta: 0.2, gamma: 11.0 }];
        for a in angles {
            let c = (a.beta / 2.0).cos();
            let s = (a.beta / 2.0).sin();
            let i = Complex64::i();
            let want = [
                [(-i * (a.alpha + a.gamma) / 2.0).exp() * c, -(-i * (a.alpha - a.gamma) / 2.0).exp() * s],
                [(i * (a.alpha - a.gamma) / 2.0).exp() * s, (i * (a.alpha + a.gamma) / 2.0).exp() * c],
            ];
            for (r, mp) in [1, -1].into_iter().enumerate() {
                for (col, m) in [1, -1].into_iter().enumerate() {
                    let got = wigner_big_d(SpinTriple::new(1, mp, m).unwrap(), a).unwrap();
                    assert!((got - want[r][col]).norm() < 1e-12);
                }
            }
        }
        let zero = EulerAngles { alpha: 0.0, beta: 0.0, gamma: 0.0 };
        assert_eq!(wigner_big_d(SpinTriple::new(0, 0, 0).unwrap(), EulerAngles { alpha: 1.0, beta: 2.0, gamma: 3.0 }).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(wigner_big_d(SpinTriple::new(1, 1, -1).unwrap(), zero).unwrap().norm(), 0.0);
    }

    #[test]
    fn conjugation_identity() {
        let mut rng_state = 12345u64;
        let mut next = || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let a = EulerAngles { alpha: 4.0 * PI * next(), beta: PI * next(), gamma: 4.0 * PI * next() };
            for t in triples(4) {
                let lhs = wigner_big_d(t, a).unwrap().conj();
                let flipped = SpinTriple { twice_j: t.twice_j, twice_mp: -t.twice_mp, twice_m: -t.twice_m };
                let sign = if ((t.twice_mp - t.twice_m) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let rhs = wigner_big_d(flipped, a).unwrap() * sign;
                assert!((lhs - rhs).norm() < 1e-12);
                assert!((wigner_big_d(t, a).unwrap().norm() - wigner_small_d(t, a.beta).unwrap().abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn beta_and_binomial_routes_agree() {
        for a in (0..=20).step_by(2) {
            for b in (0..=20).step_by(2) {
                assert_eq!(beta_integral(a, b), binomial_integral(a, b));
            }
        }
        assert_eq!(beta_integral(0, 0), ratio(1, 1));
        assert_eq!(beta_integral(2, 0), ratio(1, 2));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(su2_integral_exact(&spec(vec![fac(0, 0, 0, false)])).unwrap(), ExactValue::Rational(ratio(1, 1)));
        assert!(su2_integral_exact(&spec(vec![fac(1, 1, 1, false)])).unwrap().is_zero());
        let d100 = spec(vec![fac(2, 0, 0, false), fac(2, 0, 0, true)]);
        assert_eq!(su2_integral_exact(&d100).unwrap(), ExactValue::Rational(ratio(1, 3)));
        assert_eq!(su2_integral_binomial(&d100).unwrap(), ExactValue::Rational(ratio(1, 3)));
        assert!((su2_integral_quadrature(&d100, 16).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((su2_integral_quadrature(&spec(vec![]), 8).unwrap() - 1.0).abs() < 1e-12);
        let half = spec(vec![fac(1, 1, 1, false), fac(1, 1, 1, true)]);
        assert!((su2_integral_quadrature(&half, 16).unwrap() - 0.5).abs() < 1e-10);
        assert!(su2_integral_quadrature(&half, 4).is_err());
    }

    // every monomial of degree ≤ 4 built from factors with J ≤ 1
    fn small_grid() -> Vec<Su2MonomialSpec> {
        let mut singles = Vec::new();
        for t in triples(2) {
            for conj in [false, true] {
                singles.push(fac(t.twice_j, t.twice_mp, t.twice_m, conj));
            }
        }
        let mut out = vec![spec(vec![])];
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for combo in &layer {
                let start = combo.last().copied().unwrap_or(0);
                for k in start..singles.len() {
                    let mut c = combo.clone();
                    c.push(k);
                    out.push(spec(c.iter().map(|&i| singles[i]).collect()));
                    next.push(c);
                }
            }
            layer = next;
        }
        out
    }

    #[test]
    fn closed_form_matches_quadrature_and_binomial_route() {
        let grid = small_grid();
        let (mut nonzero, mut checked) = (0, 0);
        for s in &grid {
            let exact = su2_integral_exact(s).unwrap();
            assert_eq!(exact, su2_integral_binomial(s).unwrap(), "{s:?}");
            let closed = exact.to_f64();
            if closed != 0.0 {
                nonzero += 1;
            }
            let (qa, qg) = s.charges();
            checked += 1;
            // monomials failing a charge constraint vanish; spot-check some of them
            if (qa == 0 && qg == 0) || checked % 50 == 0 {
                let q = su2_integral_quadrature_complex(s, 24).unwrap();
                assert!((q.re - closed).abs() < 1e-10 && q.im.abs() < 1e-10, "{s:?}: {closed} vs {q}");
            }
        }
        assert!(nonzero > 50);
    }

    #[test]
    fn schur_orthogonality() {
        for t1 in triples(3) {
            for t2 in triples(3) {
                let s = spec(vec![
                    fac(t1.twice_j, t1.twice_mp, t1.twice_m, false),
                    fac(t2.twice_j, t2.twice_mp, t2.twice_m, true),
                ]);
                let want = if t1 == t2 { ratio(1, t1.twice_j as i64 + 1) } else { Scalar::zero() };
                assert_eq!(su2_integral_exact(&s).unwrap(), ExactValue::Rational(want.clone()));
                if t1.twice_j == t2.twice_j && t1.twice_j == 3 && t1.twice_m == t2.twice_m {
                    assert!((su2_integral_quadrature(&s, 24).unwrap() - crate::scalar::to_f64(&want)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn large_spins_stay_finite() {
        let s = spec(vec![fac(40, 0, 0, false); 2].into_iter().chain(vec![fac(40, 0, 0, true); 2]).collect());
        let v = su2_integral_closed(&s).unwrap();
        assert!(v.is_finite() && v > 0.0 && v < 1.0);
        let rows = equal_spin_scan(1, &[0, 1, 2, 7, 40]).unwrap();
        for r in rows {
            assert!((r.scaled - 1.0).abs() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn spec_json() {
        let s = Su2MonomialSpec::from_json(r#"{"factors":[{"twice_j":2,"twice_mp":0,"twice_m":0},{"twice_j":2,"twice_mp":0,"twice_m":0,"conj":true}]}"#).unwrap();
        assert_eq!(Su2MonomialSpec::from_json(&s.to_json()).unwrap(), s);
        assert!(Su2MonomialSpec::from_json(r#"{"factors":[{"twice_j":2,"twice_mp":1,"twice_m":0}]}"#).is_err());
    }
}
