//! Orthonormal bases of irreducible modules built from symmetrized tableau
//! tensors, their representation matrices, and integrals of products of
//! representation matrix elements.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{invalid, Error, Result};
use crate::group::Group;
use crate::haar_sampler::{mc_estimate_streams, sample, CMatrix, GroupSample, McEstimate};
use crate::scalar::{self, ExactValue, Scalar};
use crate::tableaux::{enumerate_gl_tableaux, enumerate_o_tableaux, enumerate_sp_tableaux, Partition, Tableau};
use crate::tensor_algebra::{
    apply_symmetrizer, inner_product, row_major_symmetrizer, BilinearFormSpec, SparseTensor, TraceSpace,
};
use crate::weingarten_engine::{special_group_gate, Commutant, CostCaps, TensorFactor, WeingartenEngine};

pub const DEFAULT_MAX_WEIGHT: usize = 6;
pub const DEFAULT_MAX_N: usize = 4;

/// One orthonormal basis vector, stored as `tensor / √norm_squared`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisVector {
    pub tensor: SparseTensor,
    pub norm_squared: Scalar,
}

/// Orthonormal basis of the irreducible module with signature `lambda`.
#[derive(Debug, Clone)]
pub struct IrrepBasis {
    group: Group,
    n: usize,
    lambda: Partition,
    vectors: Vec<BasisVector>,
    tableaux: Vec<Tableau>,
    dropped: usize,
}

impl IrrepBasis {
    pub fn group(&self) -> Group {
        self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn weight(&self) -> usize {
        self.lambda.weight()
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[BasisVector] {
        &self.vectors
    }

    /// Tableau `T(i)` behind basis vector `i` (one-based).
    pub fn tableau(&self, i: usize) -> Option<&Tableau> {
        i.checked_sub(1).and_then(|k| self.tableaux.get(k))
    }

    /// Tableaux whose symmetrized tensor was linearly dependent on earlier ones.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn alphabet(&self) -> Alphabet {
        module_alphabet(self.group, self.n)
    }
}

fn module_alphabet(group: Group, n: usize) -> Alphabet {
    match group {
        Group::U | Group::SU => Alphabet::plain(n),
        Group::O | Group::SO => Alphabet::orthogonal(n),
        Group::Sp => Alphabet::symplectic(n),
    }
}

fn module_form(group: Group, n: usize) -> Option<BilinearFormSpec> {
    match group {
        Group::U | Group::SU => None,
        Group::O | Group::SO => Some(BilinearFormSpec::orthogonal(n)),
        Group::Sp => Some(BilinearFormSpec::symplectic(n)),
    }
}

/// Commutant matching the module coordinates (the split form for orthogonal groups).
pub fn module_commutant(group: Group, n: usize) -> Commutant {
    match module_form(group, n) {
        None => Commutant::Unitary { n },
        Some(form) => Commutant::Form(form),
    }
}

fn admissible_tableaux(group: Group, lambda: &Partition, n: usize) -> Result<Vec<Tableau>> {
    if n == 0 {
        return invalid("N must be positive");
    }
    match group {
        Group::U | Group::SU => {
            if lambda.len() > n {
                return Err(Error::NotAdmissible(format!("{group}({n}) signature {lambda} has more than {n} rows")));
            }
            Ok(enumerate_gl_tableaux(lambda, n))
        }
        Group::O | Group::SO => enumerate_o_tableaux(lambda, n),
        Group::Sp => {
            if lambda.len() > n {
                return Err(Error::NotAdmissible(format!("Sp({n}) signature {lambda} has more than {n} rows")));
            }
            Ok(enumerate_sp_tableaux(lambda, n))
        }
    }
}

/// Gram–Schmidt over `c(e_T)` (traceless-projected for `O` and `Sp`) in tableau order.
pub fn build_irrep_basis(group: Group, lambda: &Partition, n: usize) -> Result<IrrepBasis> {
    let tableaux = admissible_tableaux(group, lambda, n)?;
    let alphabet = module_alphabet(group, n);
    let c = row_major_symmetrizer(lambda);
    let mut trace_space = module_form(group, n).map(|f| TraceSpace::new(f, lambda.weight()));
    let mut vectors: Vec<BasisVector> = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = 0;
    for t in tableaux {
        let e = SparseTensor::basis(alphabet, &t.reading_word())?;
        let mut x = apply_symmetrizer(&c, &e)?;
        if let Some(ts) = trace_space.as_mut() {
            x = ts.split(&x).0;
        }
        for v in &vectors {
            let ip = inner_product(&v.tensor, &x);
            if !ip.is_zero() {
                x = x.sub(&v.tensor.scale(&(ip / &v.norm_squared)));
            }
        }
        if x.is_zero() {
            dropped += 1;
            continue;
        }
        let norm_squared = inner_product(&x, &x);
        vectors.push(BasisVector { tensor: x, norm_squared });
        kept.push(t);
    }
    Ok(IrrepBasis { group, n, lambda: lambda.clone(), vectors, tableaux: kept, dropped })
}

/// `S` with columns `w_ī = (e_{2i−1} + i·e_{2i})/√2`, `w_i = (e_{2i−1} − i·e_{2i})/√2`
/// and `w_0 = e_N`; `S†uS` is `u` in the split coordinates.
pub fn split_basis_change(n: usize) -> CMatrix {
    let mut s = CMatrix::zeros(n, n);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..n / 2 {
        s[(2 * k, 2 * k)] = Complex64::new(h, 0.0);
        s[(2 * k + 1, 2 * k)] = Complex64::new(0.0, h);
        s[(2 * k, 2 * k + 1)] = Complex64::new(h, 0.0);
        s[(2 * k + 1, 2 * k + 1)] = Complex64::new(0.0, -h);
    }
    if n % 2 == 1 {
        s[(n - 1, n - 1)] = Complex64::new(1.0, 0.0);
    }
    s
}

fn same_family(a: Group, b: Group) -> bool {
    matches!((a, b), (Group::U | Group::SU, Group::U | Group::SU) | (Group::O | Group::SO, Group::O | Group::SO) | (Group::Sp, Group::Sp))
}

/// `u` in the coordinates of the module alphabet.
pub fn module_coordinates(u: &GroupSample, group: Group, n: usize) -> Result<CMatrix> {
    if !same_family(u.group, group) || u.dim() != group.matrix_dim(n) {
        return invalid(format!("a {}×{} {} sample does not act on {group}({n}) modules", u.dim(), u.dim(), u.group));
    }
    Ok(match group {
        Group::O | Group::SO => {
            let s = split_basis_change(n);
            s.adjoint() * &u.matrix * s
        }
        _ => u.matrix.clone(),
    })
}

/// Float view of a basis for fast matrix elements.
struct FloatBasis {
    vectors: Vec<(Vec<(Vec<usize>, f64)>, f64)>,
}

impl FloatBasis {
    fn new(basis: &IrrepBasis) -> Self {
        let alphabet = basis.alphabet();
        let vectors = basis
            .vectors
            .iter()
            .map(|v| {
                let terms = v
                    .tensor
                    .terms()
                    .map(|(idx, c)| (idx.iter().map(|&e| alphabet.position(e).expect("entry in alphabet")).collect(), scalar::to_f64(c)))
                    .collect();
                (terms, scalar::to_f64(&v.norm_squared).sqrt())
            })
            .collect();
        Self { vectors }
    }

    /// `⟨b_i| u^{⊗m} |b_j⟩`, zero-based.
    fn entry(&self, u: &CMatrix, i: usize, j: usize) -> Complex64 {
        let (vi, ni) = &self.vectors[i];
        let (vj, nj) = &self.vectors[j];
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, ca) in vi {
            for (b, cb) in vj {
                let mut p = Complex64::new(ca * cb, 0.0);
                for (&x, &y) in a.iter().zip(b) {
                    p *= u[(x, y)];
                }
                acc += p;
            }
        }
        acc / (ni * nj)
    }
}

/// `ρ^λ(u)` with entries `⟨b̃_i, u^{⊗m} b̃_j⟩`.
pub fn rho_matrix(u: &GroupSample, basis: &IrrepBasis) -> Result<CMatrix> {
    let coords = module_coordinates(u, basis.group, basis.n)?;
    let fb = FloatBasis::new(basis);
    let r = basis.rank();
    Ok(DMatrix::from_fn(r, r, |i, j| fb.entry(&coords, i, j)))
}

/// One factor `ρ^λ_{ij}(u)` (or its conjugate), indices one-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepFactor {
    pub lambda: Partition,
    pub i: usize,
    pub j: usize,
    #[serde(default)]
    pub conj: bool,
}

/// `∫ ∏_r ρ^{λ_r}_{i_r j_r}(u)^{(conj_r)} du`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepMatrixElementSpec {
    pub group: Group,
    #[serde(rename = "N")]
    pub n: usize,
    pub factors: Vec<IrrepFactor>,
}

impl RepMatrixElementSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if spec.n == 0 {
            return invalid("N must be positive");
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// Total weights of the plain and conjugated factors.
    pub fn weights(&self) -> (usize, usize) {
        let p = self.factors.iter().filter(|f| !f.conj).map(|f| f.lambda.weight()).sum();
        let c = self.factors.iter().filter(|f| f.conj).map(|f| f.lambda.weight()).sum();
        (p, c)
    }
}

/// Limits on the exact path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrrepCaps {
    pub max_weight: usize,
    pub max_n: usize,
}

impl Default for IrrepCaps {
    fn default() -> Self {
        Self { max_weight: DEFAULT_MAX_WEIGHT, max_n: DEFAULT_MAX_N }
    }
}

/// Irrep integrals for one `(group, N)`, caching bases by signature.
pub struct IrrepEngine {
    group: Group,
    n: usize,
    caps: IrrepCaps,
    bases: std::sync::Mutex<BTreeMap<Partition, Arc<IrrepBasis>>>,
    weingarten: WeingartenEngine,
}

impl IrrepEngine {
    pub fn new(group: Group, n: usize) -> Self {
        Self::with_caps(group, n, IrrepCaps::default())
    }

    pub fn with_caps(group: Group, n: usize, caps: IrrepCaps) -> Self {
        let wcaps = CostCaps { max_degree: CostCaps::default().max_degree.max(caps.max_weight.div_ceil(2)) };
        Self {
            group,
            n,
            caps,
            bases: std::sync::Mutex::new(BTreeMap::new()),
            weingarten: WeingartenEngine::with_caps(module_commutant(group, n), wcaps),
        }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self, lambda: &Partition) -> Result<Arc<IrrepBasis>> {
        if let Some(b) = self.bases.lock().expect("basis cache").get(lambda) {
            return Ok(b.clone());
        }
        let b = Arc::new(build_irrep_basis(self.group, lambda, self.n)?);
        self.bases.lock().expect("basis cache").insert(lambda.clone(), b.clone());
        Ok(b)
    }

    /// Builds (in parallel) and validates every basis the spec refers to.
    fn bases_for(&self, spec: &RepMatrixElementSpec) -> Result<Vec<Arc<IrrepBasis>>> {
        if spec.group != self.group || spec.n != self.n {
            return invalid(format!("spec is for {}({}), engine for {}({})", spec.group, spec.n, self.group, self.n));
        }
        let distinct: BTreeSet<&Partition> = spec.factors.iter().map(|f| &f.lambda).collect();
        let built: Vec<Result<Arc<IrrepBasis>>> = distinct.into_par_iter().map(|l| self.basis(l)).collect();
        for b in built {
            b?;
        }
        let mut out = Vec::with_capacity(spec.factors.len());
        for f in &spec.factors {
            let b = self.basis(&f.lambda)?;
            let r = b.rank();
            if f.i == 0 || f.j == 0 || f.i > r || f.j > r {
                return invalid(format!("indices ({}, {}) outside 1..={r} for signature {}", f.i, f.j, f.lambda));
            }
            out.push(b);
        }
        Ok(out)
    }

    /// Total number of dropped vectors across the spec's bases.
    pub fn dropped_basis_vectors(&self, spec: &RepMatrixElementSpec) -> Result<usize> {
        let bases = self.bases_for(spec)?;
        let distinct: BTreeMap<&Partition, usize> = bases.iter().map(|b| (b.lambda(), b.dropped())).collect();
        Ok(distinct.values().sum())
    }

    fn tensor_factors(&self, spec: &RepMatrixElementSpec, bases: &[Arc<IrrepBasis>]) -> (Vec<TensorFactor>, Scalar) {
        let mut inv_norms = Scalar::one();
        let factors = spec
            .factors
            .iter()
            .zip(bases)
            .map(|(f, b)| {
                let (vi, vj) = (&b.vectors[f.i - 1], &b.vectors[f.j - 1]);
                inv_norms /= &vi.norm_squared * &vj.norm_squared;
                TensorFactor { row: vi.tensor.clone(), col: vj.tensor.clone(), conj: f.conj }
            })
            .collect();
        (factors, inv_norms)
    }

    /// Exact value through the Weingarten engine.
    pub fn integrate_exact(&self, spec: &RepMatrixElementSpec) -> Result<ExactValue> {
        let bases = self.bases_for(spec)?;
        let (p, c) = spec.weights();
        if p + c > self.caps.max_weight {
            return Err(Error::CostGate { what: "total irrep weight".into(), limit: self.caps.max_weight, requested: p + c });
        }
        if self.n > self.caps.max_n {
            return Err(Error::CostGate { what: "N for exact irrep integrals".into(), limit: self.caps.max_n, requested: self.n });
        }
        if let Some(v) = special_group_gate(self.group, self.n, p, c)? {
            return Ok(ExactValue::Rational(v));
        }
        let (factors, inv_norms) = self.tensor_factors(spec, &bases);
        let v = self.weingarten.integrate(&factors)?;
        Ok(ExactValue::with_sqrt(v, &inv_norms))
    }

    /// Leading large-`N` value at this `N`.
    pub fn asymptotic(&self, spec: &RepMatrixElementSpec) -> Result<ExactValue> {
        let bases = self.bases_for(spec)?;
        let (factors, inv_norms) = self.tensor_factors(spec, &bases);
        let v = self.weingarten.leading(&factors)?;
        Ok(ExactValue::with_sqrt(v, &inv_norms))
    }

    /// Monte Carlo estimate from `samples` Haar draws.
    pub fn integrate_mc(&self, spec: &RepMatrixElementSpec, samples: usize, seed: u64) -> Result<McEstimate> {
        let bases = self.bases_for(spec)?;
        let floats: Vec<FloatBasis> = bases.iter().map(|b| FloatBasis::new(b)).collect();
        let (group, n) = (self.group, self.n);
        Ok(mc_estimate_streams(samples, seed, |s| {
            let u = sample(group, n, s);
            let coords = module_coordinates(&u, group, n).expect("sample matches the group");
            let mut acc = Complex64::new(1.0, 0.0);
            for (f, fb) in spec.factors.iter().zip(&floats) {
                let z = fb.entry(&coords, f.i - 1, f.j - 1);
                acc *= if f.conj { z.conj() } else { z };
            }
            acc
        }))
    }
}

pub fn integrate_irrep_exact(spec: &RepMatrixElementSpec) -> Result<ExactValue> {
    IrrepEngine::new(spec.group, spec.n).integrate_exact(spec)
}

pub fn integrate_irrep_mc(spec: &RepMatrixElementSpec, samples: usize, seed: u64) -> Result<McEstimate> {
    IrrepEngine::new(spec.group, spec.n).integrate_mc(spec, samples, seed)
}

pub fn asymptotic_irrep(spec: &RepMatrixElementSpec) -> Result<ExactValue> {
    IrrepEngine::new(spec.group, spec.n).asymptotic(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar_sampler::RngStream;
    use crate::scalar::{int, ratio};
    use crate::tableaux::GroupTag;
    use crate::weingarten_engine::{exact_integral, parse_factors, MonomialSpec};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn f(lambda: &[usize], i: usize, j: usize, conj: bool) -> IrrepFactor {
        IrrepFactor { lambda: p(lambda), i, j, conj }
    }

    fn spec(group: Group, n: usize, factors: Vec<IrrepFactor>) -> RepMatrixElementSpec {
        RepMatrixElementSpec { group, n, factors }
    }

    fn rat(v: ExactValue) -> Scalar {
        v.as_rational().cloned().unwrap_or_else(|| panic!("{v} is not rational"))
    }

    // Weyl dimension ∏_{i<j} (λ_i − λ_j + j − i)/(j − i)
    fn weyl_dim_u(lambda: &Partition, n: usize) -> Scalar {
        let l = |i: usize| lambda.parts().get(i).copied().unwrap_or(0) as i64;
        let mut d = Scalar::one();
        for i in 0..n {
            for j in i + 1..n {
                d *= ratio(l(i) - l(j) + (j - i) as i64, (j - i) as i64);
            }
        }
        d
    }

    #[test]
    fn unitary_ranks_match_weyl_dimension() {
        for n in 1..=3 {
            for m in 0..=4 {
                for lambda in Partition::all_of_weight(m) {
                    if lambda.len() > n {
                        assert!(build_irrep_basis(Group::U, &lambda, n).is_err());
                        continue;
                    }
                    let b = build_irrep_basis(Group::U, &lambda, n).unwrap();
                    assert_eq!(b.dropped(), 0);
                    assert_eq!(int(b.rank() as i64), weyl_dim_u(&lambda, n), "{lambda} N={n}");
                }
            }
        }
        assert_eq!(build_irrep_basis(Group::U, &p(&[1]), 2).unwrap().rank(), 2);
        assert_eq!(build_irrep_basis(Group::U, &p(&[2]), 2).unwrap().rank(), 3);
    }

    #[test]
    fn basis_is_orthogonal_and_traceless() {
        for (g, n, lambda) in [(Group::U, 3, p(&[2, 1])), (Group::O, 3, p(&[2])), (Group::O, 4, p(&[2, 1])), (Group::Sp, 2, p(&[1, 1]))] {
            let b = build_irrep_basis(g, &lambda, n).unwrap();
            for (a, va) in b.vectors().iter().enumerate() {
                assert!(va.norm_squared > Scalar::zero());
                assert_eq!(inner_product(&va.tensor, &va.tensor), va.norm_squared);
                for vb in &b.vectors()[a + 1..] {
                    assert!(inner_product(&va.tensor, &vb.tensor).is_zero());
                }
                if let Some(form) = module_form(g, n) {
                    assert!(crate::tensor_algebra::is_traceless(&va.tensor, &form).unwrap());
                }
            }
        }
    }

    #[test]
    fn orthogonal_and_symplectic_ranks() {
        assert_eq!(build_irrep_basis(Group::O, &p(&[2]), 3).unwrap().rank(), 5);
        assert_eq!(build_irrep_basis(Group::O, &p(&[1, 1]), 3).unwrap().rank(), 3);
        assert_eq!(build_irrep_basis(Group::O, &p(&[1, 1, 1]), 3).unwrap().rank(), 1);
        assert_eq!(build_irrep_basis(Group::O, &p(&[2]), 4).unwrap().rank(), 9);
        assert_eq!(build_irrep_basis(Group::Sp, &p(&[1]), 2).unwrap().rank(), 4);
        assert_eq!(build_irrep_basis(Group::Sp, &p(&[2]), 2).unwrap().rank(), 10);
        assert_eq!(build_irrep_basis(Group::Sp, &p(&[1, 1]), 2).unwrap().rank(), 5);
        assert!(build_irrep_basis(Group::O, &p(&[1, 1]), 1).is_err());
        assert!(build_irrep_basis(Group::Sp, &p(&[1, 1]), 1).is_err());
        for n in 1..=4 {
            for m in 0..=3 {
                for lambda in Partition::all_of_weight(m) {
                    let Ok(ts) = enumerate_o_tableaux(&lambda, n) else { continue };
                    let b = build_irrep_basis(Group::O, &lambda, n).unwrap();
                    assert_eq!((b.rank(), b.dropped()), (ts.len(), 0), "O({n}) {lambda}");
                }
                for lambda in Partition::all_of_weight(m).into_iter().filter(|l| l.len() <= n) {
                    let b = build_irrep_basis(Group::Sp, &lambda, n).unwrap();
                    assert_eq!((b.rank(), b.dropped()), (enumerate_sp_tableaux(&lambda, n).len(), 0), "Sp({n}) {lambda}");
                }
            }
        }
    }

    #[test]
    fn tableau_map() {
        let b = build_irrep_basis(Group::U, &p(&[2]), 2).unwrap();
        assert_eq!(b.tableau(1).unwrap().group(), GroupTag::GL);
        assert!(b.tableau(0).is_none());
        assert!(b.tableau(4).is_none());
    }

    #[test]
    fn rho_is_a_unitary_homomorphism() {
        for (g, n, lambda) in [
            (Group::U, 2, p(&[2])),
            (Group::U, 3, p(&[2, 1])),
            (Group::SU, 2, p(&[1, 1])),
            (Group::O, 3, p(&[2])),
            (Group::SO, 4, p(&[1, 1])),
            (Group::Sp, 2, p(&[1, 1])),
        ] {
            let b = build_irrep_basis(g, &lambda, n).unwrap();
            let id = GroupSample { group: g, matrix: CMatrix::identity(g.matrix_dim(n), g.matrix_dim(n)) };
            let r = rho_matrix(&id, &b).unwrap();
            assert!((r - CMatrix::identity(b.rank(), b.rank())).norm() < 1e-12);
            for k in 0..3 {
                let u1 = sample(g, n, RngStream::new(11, k));
                let u2 = sample(g, n, RngStream::new(12, k));
                let u12 = GroupSample { group: g, matrix: &u1.matrix * &u2.matrix };
                let (r1, r2, r12) = (rho_matrix(&u1, &b).unwrap(), rho_matrix(&u2, &b).unwrap(), rho_matrix(&u12, &b).unwrap());
                assert!((&r12 - &r1 * &r2).norm() < 1e-9, "{g}({n}) {lambda}");
                let rr = r1.adjoint() * &r1;
                assert!((rr - CMatrix::identity(b.rank(), b.rank())).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn vector_rep_is_the_matrix_in_module_coordinates() {
        for (g, n) in [(Group::U, 3), (Group::Sp, 2), (Group::O, 3)] {
            let b = build_irrep_basis(g, &p(&[1]), n).unwrap();
            let u = sample(g, n, RngStream::new(5, 0));
            let r = rho_matrix(&u, &b).unwrap();
            assert!((r - module_coordinates(&u, g, n).unwrap()).norm() < 1e-12);
        }
        assert!(rho_matrix(&sample(Group::U, 2, RngStream::new(0, 0)), &build_irrep_basis(Group::U, &p(&[1]), 3).unwrap()).is_err());
    }

    #[test]
    fn split_coordinates_preserve_the_split_form() {
        for n in [2, 3, 4] {
            let s = split_basis_change(n);
            assert!((s.adjoint() * &s - CMatrix::identity(n, n)).norm() < 1e-12);
            let form = BilinearFormSpec::orthogonal(n);
            let a = form.alphabet();
            let g = s.transpose() * &s;
            for x in 0..n {
                for y in 0..n {
                    let w = form.omega(a.entry_at(x), a.entry_at(y)) as f64;
                    assert!((g[(x, y)] - Complex64::new(w, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn schur_orthogonality_example() {
        let s = spec(Group::U, 2, vec![f(&[2], 1, 1, false), f(&[2], 1, 1, true)]);
        assert_eq!(rat(integrate_irrep_exact(&s).unwrap()), ratio(1, 3));
        let mc = integrate_irrep_mc(&s, 20_000, 3).unwrap();
        assert!(mc.agrees_with(Complex64::new(1.0 / 3.0, 0.0), 4.0), "{mc:?}");
    }

    #[test]
    fn schur_orthogonality_grid() {
        for g in [Group::U, Group::O, Group::Sp] {
            for n in 1..=3 {
                let engine = IrrepEngine::new(g, n);
                let lambdas: Vec<Partition> =
                    (0..=3).flat_map(Partition::all_of_weight).filter(|l| engine.basis(l).is_ok()).collect();
                for l1 in &lambdas {
                    for l2 in &lambdas {
                        let (r1, r2) = (engine.basis(l1).unwrap().rank(), engine.basis(l2).unwrap().rank());
                        // a few index quadruples per pair keep the grid fast
                        for (i, j, k, l) in [(1, 1, 1, 1), (r1, 1, r2, 1), (1, r1, 1, r2), (r1, r1, r2.min(2), r2)] {
                            let s = spec(g, n, vec![f(l1.parts(), i, j, false), f(l2.parts(), k, l, true)]);
                            let want = if l1 == l2 && i == k && j == l { ratio(1, r1 as i64) } else { Scalar::zero() };
                            assert_eq!(rat(engine.integrate_exact(&s).unwrap()), want, "{g}({n}) {l1} {l2} {i}{j}{k}{l}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vector_specs_match_the_weingarten_engine() {
        for (g, n, fs) in [
            (Group::U, 2, "1,1;2,2;1,1,-;2,2,-"),
            (Group::U, 3, "1,2;2,1;1,2,-;2,1,-"),
            (Group::Sp, 1, "1,1;2,2"),
            (Group::Sp, 2, "1,2;3,4;1,2,-;3,4,-"),
            (Group::SU, 2, "1,1;2,2"),
        ] {
            let factors = parse_factors(fs).unwrap();
            let ms = MonomialSpec::new(g, n, factors.clone()).unwrap();
            let is = spec(g, n, factors.iter().map(|x| f(&[1], x.i, x.j, x.conj)).collect());
            let got = integrate_irrep_exact(&is);
            match exact_integral(&ms) {
                Ok(v) => assert_eq!(rat(got.unwrap()), v, "{g} {fs}"),
                Err(_) => assert!(got.is_err()),
            }
            assert_eq!(
                rat(asymptotic_irrep(&is).unwrap()),
                crate::weingarten_engine::asymptotic_leading(&ms).unwrap()
            );
        }
        // the middle split vector w_0 is e_N, so these entries coincide
        for k in 1..=3 {
            let ms = MonomialSpec::new(Group::O, 3, vec![crate::weingarten_engine::Factor { i: 3, j: 3, conj: false }; 2 * k]).unwrap();
            let is = spec(Group::O, 3, vec![f(&[1], 3, 3, false); 2 * k]);
            assert_eq!(rat(integrate_irrep_exact(&is).unwrap()), exact_integral(&ms).unwrap());
        }
    }

    #[test]
    fn orthogonal_vector_rep_matches_euclidean_engine_after_basis_change() {
        use crate::weingarten_engine::{Factor, WeingartenEngine};
        use num_complex::Complex;
        type Gauss = Complex<Scalar>;
        // √2·S restricted to the paired coordinates: column 2k is (1, i), column 2k+1 is (1, −i)
        let t = |x: usize, a: usize| -> Gauss {
            if x / 2 != a / 2 {
                return Gauss::new(Scalar::zero(), Scalar::zero());
            }
            match (x % 2, a % 2) {
                (0, _) => Gauss::new(Scalar::one(), Scalar::zero()),
                (1, 0) => Gauss::new(Scalar::zero(), Scalar::one()),
                _ => Gauss::new(Scalar::zero(), -Scalar::one()),
            }
        };
        let n = 4;
        let euclid = WeingartenEngine::new(Commutant::for_group(Group::O, n));
        for fs in ["1,1;2,2", "1,2;2,1", "1,1;1,1,-", "1,2;3,4;2,1;4,3", "1,1;2,2;1,1,-;2,2,-", "1,3;1,3,-;2,2;2,2,-"] {
            let factors = parse_factors(fs).unwrap();
            let is = spec(Group::O, n, factors.iter().map(|x| f(&[1], x.i, x.j, x.conj)).collect());
            let got = rat(integrate_irrep_exact(&is).unwrap());
            // expand every u'_{ab} = ½ Σ conj(T_{xa}) u_{xy} T_{yb}; u is real
            let mut terms: Vec<(Gauss, Vec<Factor>)> = vec![(Gauss::new(Scalar::one(), Scalar::zero()), Vec::new())];
            for x in &factors {
                let (a, b) = (x.i - 1, x.j - 1);
                let mut next = Vec::new();
                for (c, mono) in &terms {
                    for r in 0..n {
                        for cidx in 0..n {
                            let (ta, tb) = (t(r, a), t(cidx, b));
                            let w = if x.conj { ta * tb.conj() } else { ta.conj() * tb };
                            if w.re.is_zero() && w.im.is_zero() {
                                continue;
                            }
                            let mut m = mono.clone();
                            m.push(Factor { i: r + 1, j: cidx + 1, conj: false });
                            next.push((c * w * Gauss::new(ratio(1, 2), Scalar::zero()), m));
                        }
                    }
                }
                terms = next;
            }
            let mut total = Gauss::new(Scalar::zero(), Scalar::zero());
            for (c, mono) in terms {
                let v = crate::weingarten_engine::exact_integral_with(&euclid, &MonomialSpec::new(Group::O, n, mono).unwrap()).unwrap();
                total += c * Gauss::new(v, Scalar::zero());
            }
            assert!(total.im.is_zero(), "{fs}");
            assert_eq!(total.re, got, "{fs}");
        }
    }

    #[test]
    fn exact_matches_mc_on_small_specs() {
        let cases = vec![
            spec(Group::U, 2, vec![f(&[2], 1, 1, false), f(&[2], 3, 3, false), f(&[2], 1, 1, true), f(&[2], 3, 3, true)]),
            spec(Group::U, 2, vec![f(&[1], 1, 2, false), f(&[1, 1], 1, 1, false), f(&[2], 2, 3, true)]),
            spec(Group::O, 3, vec![f(&[2], 1, 2, false), f(&[2], 2, 1, false)]),
            spec(Group::O, 3, vec![f(&[1], 1, 2, false), f(&[1, 1], 2, 3, false), f(&[2, 1], 1, 1, true)]),
            spec(Group::Sp, 2, vec![f(&[1, 1], 1, 2, false), f(&[1, 1], 1, 2, true)]),
            spec(Group::Sp, 1, vec![f(&[2], 1, 2, false), f(&[1], 1, 1, false), f(&[1], 2, 2, true)]),
        ];
        for s in cases {
            // the first case has weight 8, above the default gate
            let engine = IrrepEngine::with_caps(s.group, s.n, IrrepCaps { max_weight: 8, max_n: 4 });
            let exact = engine.integrate_exact(&s).unwrap_or_else(|e| panic!("{s:?}: {e}")).to_f64();
            let mc = engine.integrate_mc(&s, 40_000, 17).unwrap();
            assert!(mc.agrees_with(Complex64::new(exact, 0.0), 4.0), "{s:?}: exact {exact}, mc {mc:?}");
        }
    }

    #[test]
    fn trivial_rep_and_parity() {
        let s = spec(Group::U, 3, vec![f(&[], 1, 1, false)]);
        assert_eq!(rat(integrate_irrep_exact(&s).unwrap()), Scalar::one());
        let mc = integrate_irrep_mc(&s, 100, 1).unwrap();
        assert_eq!((mc.mean, mc.stderr), (Complex64::new(1.0, 0.0), 0.0));
        let odd = spec(Group::O, 3, vec![f(&[2], 1, 1, false), f(&[1], 1, 1, false)]);
        assert!(integrate_irrep_exact(&odd).unwrap().is_zero());
        assert!(asymptotic_irrep(&odd).unwrap().is_zero());
        let unbalanced = spec(Group::U, 3, vec![f(&[2], 1, 1, false), f(&[1], 1, 1, true)]);
        assert!(integrate_irrep_exact(&unbalanced).unwrap().is_zero());
    }

    #[test]
    fn cost_gate_and_validation() {
        let big = spec(Group::U, 2, vec![f(&[2, 2], 1, 1, false), f(&[2, 1], 1, 1, true)]);
        assert!(matches!(integrate_irrep_exact(&big), Err(Error::CostGate { .. })));
        let wide = spec(Group::U, 5, vec![f(&[1], 1, 1, false), f(&[1], 1, 1, true)]);
        assert!(matches!(integrate_irrep_exact(&wide), Err(Error::CostGate { .. })));
        assert!(asymptotic_irrep(&wide).is_ok());
        let bad = spec(Group::U, 2, vec![f(&[2], 4, 1, false)]);
        assert!(integrate_irrep_exact(&bad).is_err());
        assert!(integrate_irrep_exact(&spec(Group::Sp, 1, vec![f(&[1, 1], 1, 1, false)])).is_err());
    }

    #[test]
    fn asymptotic_consistency_for_schur_spec() {
        // N^m·|exact − leading| bounded
        let mut worst = 0.0f64;
        for n in 3..=8 {
            let engine = IrrepEngine::with_caps(Group::U, n, IrrepCaps { max_weight: 6, max_n: 10 });
            let s = spec(Group::U, n, vec![f(&[2], 1, 1, false), f(&[2], 1, 1, true)]);
            let exact = rat(engine.integrate_exact(&s).unwrap());
            assert_eq!(exact, ratio(2, (n * (n + 1)) as i64));
            let lead = rat(engine.asymptotic(&s).unwrap());
            let gap = scalar::to_f64(&(exact - lead)).abs() * (n * n) as f64;
            worst = worst.max(gap);
        }
        assert!(worst < 4.0, "{worst}");
    }

    #[test]
    fn spec_json_round_trip() {
        let s = RepMatrixElementSpec::from_json(r#"{"group":"U","N":2,"factors":[{"lambda":[2],"i":1,"j":1},{"lambda":[2],"i":1,"j":1,"conj":true}]}"#).unwrap();
        assert_eq!(s.factors.len(), 2);
        assert_eq!(RepMatrixElementSpec::from_json(&s.to_json()).unwrap(), s);
        assert!(RepMatrixElementSpec::from_json(r#"{"group":"U","N":2,"factors":[{"lambda":[1,2],"i":1,"j":1}]}"#).is_err());
        assert!(RepMatrixElementSpec::from_json(r#"{"group":"U","N":0,"factors":[]}"#).is_err());
    }
}
