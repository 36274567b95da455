//! Exact Haar integrals of polynomials in matrix entries through the Gram matrix
//! of a commutant basis and its (generalized) inverse, and the leading-order
//! large-`N` approximations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, CellEntry};
use crate::error::{invalid, Error, Result};
use crate::group::Group;
use crate::linalg::RationalMatrix;
use crate::scalar::{self, Scalar};
use crate::tensor_algebra::{BilinearFormSpec, PairPartition, Permutation, SparseTensor, TensorOperator};

/// Largest degree `q` (operators on `V^{⊗q}`) accepted without an explicit override.
pub const DEFAULT_MAX_DEGREE: usize = 4;

/// One factor `u_{ij}` (or `ū_{ij}` when `conj`), indices one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub i: usize,
    pub j: usize,
    #[serde(default)]
    pub conj: bool,
}

/// A monomial `∏ u_{i_p j_p}^{(conj_p)}` over Haar-random `u ∈ group`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialSpec {
    pub group: Group,
    /// `N`; the rank for `Sp`, whose matrices are `2N × 2N`.
    #[serde(rename = "N")]
    pub n: usize,
    pub factors: Vec<Factor>,
}

impl MonomialSpec {
    pub fn new(group: Group, n: usize, factors: Vec<Factor>) -> Result<Self> {
        let spec = Self { group, n, factors };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return invalid("N must be at least 1");
        }
        let d = self.group.matrix_dim(self.n);
        for f in &self.factors {
            if !(1..=d).contains(&f.i) || !(1..=d).contains(&f.j) {
                return invalid(format!("factor index ({}, {}) outside 1..={d}", f.i, f.j));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// Number of unconjugated and conjugated factors.
    pub fn degrees(&self) -> (usize, usize) {
        let c = self.factors.iter().filter(|f| f.conj).count();
        (self.factors.len() - c, c)
    }

    /// Degree of the operators in the commutant computation.
    pub fn operator_degree(&self) -> usize {
        match self.group {
            Group::U | Group::SU => self.degrees().0,
            _ => self.factors.len() / 2,
        }
    }
}

/// Parses `"i,j,±;i,j,±;…"`: `+` marks `u_{ij}`, `-` or `*` marks `ū_{ij}`; the sign may be omitted.
pub fn parse_factors(text: &str) -> Result<Vec<Factor>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|part| {
            let fields: Vec<&str> = part.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("bad factor {part:?}; expected i,j,+ or i,j,-"));
            let idx = |s: &str| s.parse::<usize>().map_err(|_| bad());
            match fields.as_slice() {
                [i, j] => Ok(Factor { i: idx(i)?, j: idx(j)?, conj: false }),
                [i, j, c] => {
                    let conj = match *c {
                        "+" | "" => false,
                        "-" | "*" => true,
                        _ => return Err(bad()),
                    };
                    Ok(Factor { i: idx(i)?, j: idx(j)?, conj })
                }
                _ => Err(bad()),
            }
        })
        .collect()
}

/// Commutant structure: unitary groups use permutations, the others pairings
/// of a bilinear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Commutant {
    Unitary { n: usize },
    Form(BilinearFormSpec),
}

impl Commutant {
    /// Vector representation of `group` in the standard basis (`δ` for `O`, `J` for `Sp`).
    pub fn for_group(group: Group, n: usize) -> Self {
        match group {
            Group::U | Group::SU => Commutant::Unitary { n },
            Group::O | Group::SO => Commutant::Form(BilinearFormSpec::euclidean(n)),
            Group::Sp => Commutant::Form(BilinearFormSpec::symplectic(n)),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Commutant::Unitary { n } => Alphabet::plain(*n),
            Commutant::Form(f) => f.alphabet(),
        }
    }

    fn form(&self) -> Option<&BilinearFormSpec> {
        match self {
            Commutant::Unitary { .. } => None,
            Commutant::Form(f) => Some(f),
        }
    }

    pub fn dim(&self) -> usize {
        self.alphabet().dim()
    }
}

/// Basis operators of the commutant on `V^{⊗q}`, each stored as a matching of
/// `2q` slots (even slots outputs, odd slots inputs). Permutation `σ` is the
/// matching `{(2σ(a), 2a+1)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutantBasis {
    pub commutant: Commutant,
    pub q: usize,
    pub diagrams: Vec<PairPartition>,
    /// For the unitary case, the permutation behind each diagram.
    pub permutations: Option<Vec<Permutation>>,
}

fn permutation_diagram(sigma: &Permutation) -> PairPartition {
    let pairs = (0..sigma.len()).map(|a| (2 * sigma.image(a), 2 * a + 1)).collect();
    PairPartition::new(2 * sigma.len(), pairs).expect("permutation gives a matching")
}

/// All `q!` permutations (unitary) or `(2q−1)!!` pairings, in a fixed order.
pub fn build_commutant_basis(commutant: Commutant, q: usize) -> CommutantBasis {
    match commutant {
        Commutant::Unitary { .. } => {
            let perms = Permutation::all(q);
            CommutantBasis {
                commutant,
                q,
                diagrams: perms.iter().map(permutation_diagram).collect(),
                permutations: Some(perms),
            }
        }
        Commutant::Form(_) => CommutantBasis { commutant, q, diagrams: PairPartition::all(2 * q), permutations: None },
    }
}

/// Value of one pair of a diagram given the entries at its two slots (`a < b`).
fn pair_factor(form: Option<&BilinearFormSpec>, a: usize, b: usize, va: CellEntry, vb: CellEntry) -> i32 {
    let (oa, ob) = (a.is_multiple_of(2), b.is_multiple_of(2));
    match form {
        None => i32::from(va == vb && oa != ob),
        Some(f) => {
            if oa == ob {
                f.omega(va, vb)
            } else if va != vb {
                0
            } else if !oa && f.is_skew() {
                -1
            } else {
                1
            }
        }
    }
}

/// Slot reached from `v` across the pair: the form partner for same-side pairs.
fn across(form: Option<&BilinearFormSpec>, a: usize, b: usize, v: CellEntry) -> CellEntry {
    match form {
        Some(f) if a % 2 == b % 2 => f.partner(v),
        _ => v,
    }
}

/// `⟨out|B|inp⟩` for a diagram.
pub fn diagram_element(commutant: &Commutant, d: &PairPartition, out: &[CellEntry], inp: &[CellEntry]) -> i32 {
    let value = |s: usize| if s.is_multiple_of(2) { out[s / 2] } else { inp[s / 2] };
    let form = commutant.form();
    let mut acc = 1;
    for &(a, b) in d.pairs() {
        acc *= pair_factor(form, a, b, value(a), value(b));
        if acc == 0 {
            return 0;
        }
    }
    acc
}

/// `Tr(B_σᵀ B_τ)` by summing over the closed loops of the two superimposed matchings.
pub fn diagram_trace_pair(commutant: &Commutant, s: &PairPartition, t: &PairPartition) -> Scalar {
    let form = commutant.form();
    let size = s.size();
    let partner = |d: &PairPartition| {
        let mut p = vec![0; size];
        for &(a, b) in d.pairs() {
            p[a] = b;
            p[b] = a;
        }
        p
    };
    let (ps, pt) = (partner(s), partner(t));
    let entries = commutant.alphabet().entries();
    let mut seen = vec![false; size];
    let mut total = Scalar::one();
    for start in 0..size {
        if seen[start] {
            continue;
        }
        let mut loop_sum = 0i64;
        for &x in &entries {
            let mut v = x;
            let mut slot = start;
            let mut prod = 1i64;
            let mut use_s = true;
            loop {
                let next = if use_s { ps[slot] } else { pt[slot] };
                let w = across(form, slot, next, v);
                let (a, b, va, vb) = if slot < next { (slot, next, v, w) } else { (next, slot, w, v) };
                prod *= pair_factor(form, a, b, va, vb) as i64;
                slot = next;
                v = w;
                use_s = !use_s;
                if slot == start && use_s {
                    break;
                }
            }
            if v == x {
                loop_sum += prod;
            }
        }
        let mut slot = start;
        let mut use_s = true;
        loop {
            seen[slot] = true;
            slot = if use_s { ps[slot] } else { pt[slot] };
            seen[slot] = true;
            use_s = !use_s;
            if slot == start && use_s {
                break;
            }
        }
        total *= Scalar::from_integer(loop_sum.into());
        if total.is_zero() {
            break;
        }
    }
    total
}

/// `G_{στ} = Tr(B_σᵀ B_τ)`; the basis operators are real, so `B† = Bᵀ`.
pub fn gram_matrix(basis: &CommutantBasis) -> RationalMatrix {
    let n = basis.diagrams.len();
    let mut g = RationalMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = diagram_trace_pair(&basis.commutant, &basis.diagrams[a], &basis.diagrams[b]);
            g[(b, a)] = v.clone();
            g[(a, b)] = v;
        }
    }
    g
}

/// The basis operators materialized on `V^{⊗q}`.
pub fn basis_operators(basis: &CommutantBasis) -> Vec<TensorOperator> {
    let alphabet = basis.commutant.alphabet();
    basis
        .diagrams
        .iter()
        .map(|d| {
            TensorOperator::from_fn(alphabet, basis.q, |e| {
                let (inp, _) = e.terms().next().expect("basis tensor");
                let mut out = SparseTensor::zero(alphabet, basis.q);
                for idx in crate::tensor_algebra::all_indices(&alphabet, basis.q) {
                    let v = diagram_element(&basis.commutant, d, &idx, inp);
                    if v != 0 {
                        out = out.add(&SparseTensor::basis(alphabet, &idx).unwrap().scale(&scalar::int(v as i64)));
                    }
                }
                out
            })
        })
        .collect()
}

/// Gram matrix from explicit operator traces on `V^{⊗q}`; exponential in `q`.
pub fn gram_matrix_direct(basis: &CommutantBasis) -> RationalMatrix {
    let ops = basis_operators(basis);
    let mats: Vec<RationalMatrix> = ops.iter().map(TensorOperator::to_matrix).collect();
    RationalMatrix::from_fn(ops.len(), ops.len(), |a, b| {
        let (x, y) = (&mats[a], &mats[b]);
        let mut acc = Scalar::zero();
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                if !x[(i, j)].is_zero() && !y[(i, j)].is_zero() {
                    acc += &x[(i, j)] * &y[(i, j)];
                }
            }
        }
        acc
    })
}

/// Generalized inverse of the Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeingartenData {
    pub w: RationalMatrix,
    pub rank: usize,
    /// `true` when the Gram matrix is singular and `w` is a generalized inverse.
    pub singular: bool,
}

/// Exact inverse, or the pivot-block generalized inverse with `G·W·G = G` checked.
pub fn weingarten_data(g: &RationalMatrix) -> Result<WeingartenData> {
    if !g.is_square() || !g.is_symmetric() {
        return Err(Error::Assertion("Gram matrix must be square and symmetric".into()));
    }
    let (w, rank) = g.generalized_inverse_psd();
    let singular = rank < g.rows();
    if singular && g.mul(&w).mul(g) != *g {
        return Err(Error::Assertion("generalized inverse violates G·W·G = G".into()));
    }
    Ok(WeingartenData { w, rank, singular })
}

/// One factor of a generalized integrand: `⟨row| u^{⊗m} |col⟩` (or its conjugate),
/// with `row` and `col` tensors of the same order `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorFactor {
    pub row: SparseTensor,
    pub col: SparseTensor,
    pub conj: bool,
}

impl TensorFactor {
    pub fn entry(alphabet: Alphabet, i: CellEntry, j: CellEntry, conj: bool) -> Result<Self> {
        Ok(Self { row: SparseTensor::basis(alphabet, &[i])?, col: SparseTensor::basis(alphabet, &[j])?, conj })
    }
}

/// Caps that keep exact computations at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostCaps {
    /// Maximum operator degree `q`.
    pub max_degree: usize,
}

impl Default for CostCaps {
    fn default() -> Self {
        Self { max_degree: DEFAULT_MAX_DEGREE }
    }
}

/// Caches commutant bases and Weingarten matrices by degree.
#[derive(Debug)]
pub struct WeingartenEngine {
    commutant: Commutant,
    caps: CostCaps,
    cache: Mutex<HashMap<usize, Arc<(CommutantBasis, WeingartenData)>>>,
}

impl WeingartenEngine {
    pub fn new(commutant: Commutant) -> Self {
        Self::with_caps(commutant, CostCaps::default())
    }

    pub fn with_caps(commutant: Commutant, caps: CostCaps) -> Self {
        Self { commutant, caps, cache: Mutex::new(HashMap::new()) }
    }

    pub fn commutant(&self) -> &Commutant {
        &self.commutant
    }

    pub fn data(&self, q: usize) -> Result<Arc<(CommutantBasis, WeingartenData)>> {
        if q > self.caps.max_degree {
            return Err(Error::CostGate { what: "Weingarten degree q".into(), limit: self.caps.max_degree, requested: q });
        }
        if let Some(d) = self.cache.lock().expect("cache lock").get(&q) {
            return Ok(d.clone());
        }
        let basis = build_commutant_basis(self.commutant, q);
        let w = weingarten_data(&gram_matrix(&basis))?;
        let entry = Arc::new((basis, w));
        self.cache.lock().expect("cache lock").insert(q, entry.clone());
        Ok(entry)
    }

    /// Balances plain and conjugated slots; `None` when the integral vanishes by degree.
    fn prepare(&self, factors: &[TensorFactor]) -> Result<Option<Prepared>> {
        let alphabet = self.commutant.alphabet();
        for f in factors {
            if f.row.alphabet() != alphabet || f.col.alphabet() != alphabet || f.row.order() != f.col.order() {
                return invalid("factor tensors must share the engine alphabet and order");
            }
            if f.row.is_zero() || f.col.is_zero() {
                return Ok(None);
            }
        }
        let plain: usize = factors.iter().filter(|f| !f.conj).map(|f| f.row.order()).sum();
        let conj: usize = factors.iter().filter(|f| f.conj).map(|f| f.row.order()).sum();
        let (mut rows, mut cols, mut slot_conj) = (Vec::new(), Vec::new(), Vec::new());
        for f in factors {
            rows.push(f.row.clone());
            cols.push(f.col.clone());
            slot_conj.push(vec![f.conj; f.row.order()]);
        }
        let q = match &self.commutant {
            Commutant::Unitary { .. } => {
                if plain != conj {
                    return Ok(None);
                }
                plain
            }
            Commutant::Form(form) => {
                let m = plain + conj;
                if m % 2 == 1 {
                    return Ok(None);
                }
                let q = m / 2;
                // move slots across using ū_{ij} = s_{p(i)} s_{p(j)} u_{p(i)p(j)}
                let (from_conj, mut excess) = if plain > q { (false, plain - q) } else { (true, conj - q) };
                'outer: for k in (0..factors.len()).rev() {
                    for s in (0..slot_conj[k].len()).rev() {
                        if excess == 0 {
                            break 'outer;
                        }
                        if slot_conj[k][s] == from_conj {
                            rows[k] = flip_slot(&rows[k], s, form);
                            cols[k] = flip_slot(&cols[k], s, form);
                            slot_conj[k][s] = !from_conj;
                            excess -= 1;
                        }
                    }
                }
                q
            }
        };
        // operator slot of each flattened factor slot: outputs 2a, inputs 2b+1
        let mut positions: Vec<Vec<usize>> = Vec::new();
        let (mut a, mut b) = (0, 0);
        for sc in &slot_conj {
            positions.push(
                sc.iter()
                    .map(|&c| {
                        if c {
                            b += 1;
                            2 * (b - 1) + 1
                        } else {
                            a += 1;
                            2 * (a - 1)
                        }
                    })
                    .collect(),
            );
        }
        Ok(Some(Prepared { q, rows, cols, positions }))
    }

    /// `∫ ∏_k ⟨row_k|u^{⊗m_k}|col_k⟩^{(conj_k)} du`.
    pub fn integrate(&self, factors: &[TensorFactor]) -> Result<Scalar> {
        let Some(p) = self.prepare(factors)? else {
            return Ok(Scalar::zero());
        };
        let data = self.data(p.q)?;
        let (basis, wd) = (&data.0, &data.1);
        let (f_rows, f_cols) = self.functionals(basis, &p);
        let mut total = Scalar::zero();
        for (t, ft) in f_rows.iter().enumerate() {
            if ft.is_zero() {
                continue;
            }
            for (s, fs) in f_cols.iter().enumerate() {
                if fs.is_zero() || wd.w[(t, s)].is_zero() {
                    continue;
                }
                total += &wd.w[(t, s)] * fs * ft;
            }
        }
        Ok(total)
    }

    /// Leading large-`N` part of [`Self::integrate`]: `W` replaced by `diag(G)^{-1}`.
    pub fn leading(&self, factors: &[TensorFactor]) -> Result<Scalar> {
        let Some(p) = self.prepare(factors)? else {
            return Ok(Scalar::zero());
        };
        if p.q > self.caps.max_degree {
            return Err(Error::CostGate { what: "Weingarten degree q".into(), limit: self.caps.max_degree, requested: p.q });
        }
        let basis = build_commutant_basis(self.commutant, p.q);
        let (f_rows, f_cols) = self.functionals(&basis, &p);
        let mut total = Scalar::zero();
        for (k, d) in basis.diagrams.iter().enumerate() {
            if f_rows[k].is_zero() || f_cols[k].is_zero() {
                continue;
            }
            total += &f_rows[k] * &f_cols[k] / diagram_trace_pair(&self.commutant, d, d);
        }
        Ok(total)
    }

    fn functionals(&self, basis: &CommutantBasis, p: &Prepared) -> (Vec<Scalar>, Vec<Scalar>) {
        let form = self.commutant.form();
        let eval = |ts: &[SparseTensor]| -> Vec<Scalar> {
            basis.diagrams.par_iter().map(|d| diagram_functional(form, d, ts, &p.positions)).collect()
        };
        (eval(&p.rows), eval(&p.cols))
    }
}

struct Prepared {
    q: usize,
    rows: Vec<SparseTensor>,
    cols: Vec<SparseTensor>,
    positions: Vec<Vec<usize>>,
}

/// Relabels slot `s` by the form partner with sign `s_{p(x)}`.
fn flip_slot(t: &SparseTensor, s: usize, form: &BilinearFormSpec) -> SparseTensor {
    let terms = t.terms().map(|(idx, c)| {
        let mut new = idx.clone();
        let p = form.partner(idx[s]);
        new[s] = p;
        (new, c * Scalar::from_integer(form.sign(p).into()))
    });
    SparseTensor::from_terms(t.alphabet(), t.order(), terms.collect::<Vec<_>>()).expect("relabeled tensor is valid")
}

/// `Σ ∏_k T_k[I_k] · ⟨I|B|I′⟩` with the factor slots placed at `positions`,
/// summed depth-first with pruning on completed pairs.
fn diagram_functional(
    form: Option<&BilinearFormSpec>,
    d: &PairPartition,
    tensors: &[SparseTensor],
    positions: &[Vec<usize>],
) -> Scalar {
    let size = d.size();
    let mut partner = vec![0; size];
    for &(a, b) in d.pairs() {
        partner[a] = b;
        partner[b] = a;
    }
    let mut values: Vec<Option<CellEntry>> = vec![None; size];
    let terms: Vec<Vec<(&Vec<CellEntry>, &Scalar)>> = tensors.iter().map(|t| t.terms().collect()).collect();

    fn rec(
        k: usize,
        form: Option<&BilinearFormSpec>,
        partner: &[usize],
        terms: &[Vec<(&Vec<CellEntry>, &Scalar)>],
        positions: &[Vec<usize>],
        values: &mut Vec<Option<CellEntry>>,
    ) -> Scalar {
        if k == terms.len() {
            return Scalar::one();
        }
        let mut acc = Scalar::zero();
        'term: for (idx, c) in &terms[k] {
            let mut sign = 1;
            let mut assigned = 0;
            for (s, &pos) in positions[k].iter().enumerate() {
                values[pos] = Some(idx[s]);
                assigned += 1;
                let other = partner[pos];
                if let Some(w) = values[other] {
                    let (a, b, va, vb) = if pos < other { (pos, other, idx[s], w) } else { (other, pos, w, idx[s]) };
                    sign *= pair_factor(form, a, b, va, vb);
                    if sign == 0 {
                        for &p in &positions[k][..assigned] {
                            values[p] = None;
                        }
                        continue 'term;
                    }
                }
            }
            let rest = rec(k + 1, form, partner, terms, positions, values);
            if !rest.is_zero() {
                acc += *c * rest * Scalar::from_integer(sign.into());
            }
            for &p in &positions[k] {
                values[p] = None;
            }
        }
        acc
    }

    rec(0, form, &partner, &terms, positions, &mut values)
}

fn entry_of(alphabet: &Alphabet, index: usize) -> CellEntry {
    alphabet.entry_at(index - 1)
}

fn vector_factors(spec: &MonomialSpec, alphabet: Alphabet) -> Result<Vec<TensorFactor>> {
    spec.factors
        .iter()
        .map(|f| TensorFactor::entry(alphabet, entry_of(&alphabet, f.i), entry_of(&alphabet, f.j), f.conj))
        .collect()
}

/// Degree rules for `SU` and `SO`, whose invariants include determinant terms.
/// `Some(0)` means the integral vanishes; `None` means the parent group's value applies.
pub(crate) fn special_group_gate(group: Group, n: usize, p: usize, c: usize) -> Result<Option<Scalar>> {
    match group {
        Group::SU if p != c => {
            if (p as i64 - c as i64) % n as i64 != 0 {
                return Ok(Some(Scalar::zero()));
            }
            Err(Error::Unsupported(format!(
                "SU({n}) integrals with {p} plain and {c} conjugated factors involve determinant invariants"
            )))
        }
        Group::SO => {
            let m = p + c;
            // extra SO invariants involve one ε and need degree ≥ N of the same parity
            if m >= n && (m - n).is_multiple_of(2) {
                return Err(Error::Unsupported(format!("SO({n}) integrals of degree {m} involve determinant invariants")));
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}

/// Exact integral with an explicit engine (reusing its caches).
pub fn exact_integral_with(engine: &WeingartenEngine, spec: &MonomialSpec) -> Result<Scalar> {
    spec.validate()?;
    let (p, c) = spec.degrees();
    if let Some(v) = special_group_gate(spec.group, spec.n, p, c)? {
        return Ok(v);
    }
    if engine.commutant != Commutant::for_group(spec.group, spec.n) {
        return invalid("engine does not match the spec's group");
    }
    engine.integrate(&vector_factors(spec, engine.commutant.alphabet())?)
}

/// Exact rational value of `∫ ∏ u_{ij}^{(conj)} du`.
pub fn exact_integral(spec: &MonomialSpec) -> Result<Scalar> {
    spec.validate()?;
    exact_integral_with(&WeingartenEngine::new(Commutant::for_group(spec.group, spec.n)), spec)
}

/// `δ(t1, t2) = ∏ δ_{t1_p t2_p}`.
pub fn delta_form(t1: &[usize], t2: &[usize]) -> Result<i32> {
    if t1.len() != t2.len() {
        return invalid("delta_form needs equal lengths");
    }
    Ok(i32::from(t1 == t2))
}

/// `J_{ab}` for the `2N × 2N` symplectic form: `J_{2k−1,2k} = 1`, `J_{2k,2k−1} = −1`.
pub fn symplectic_j(a: usize, b: usize) -> i32 {
    if a % 2 == 1 && b == a + 1 {
        1
    } else if a.is_multiple_of(2) && a >= 2 && b == a - 1 {
        -1
    } else {
        0
    }
}

/// `M(t1, t2) = ∏_p M^{k_p l_p}_{t1_p t2_p}` with `M^{kl}_{ij} = J_{ij}` when the two
/// conjugation tags agree and `δ_{ij}` otherwise.
pub fn m_form(t1: &[usize], t2: &[usize], same_tag: &[bool]) -> Result<i32> {
    if t1.len() != t2.len() || t1.len() != same_tag.len() {
        return invalid("m_form needs equal lengths");
    }
    Ok(t1
        .iter()
        .zip(t2)
        .zip(same_tag)
        .map(|((&a, &b), &same)| if same { symplectic_j(a, b) } else { i32::from(a == b) })
        .product())
}

fn pairings_of(items: usize) -> Vec<Vec<(usize, usize)>> {
    PairPartition::all(items).into_iter().map(|p| p.pairs().to_vec()).collect()
}

/// Leading large-`N` term: `W ≈ I/d^q` in the integral formula. Unitary groups sum
/// over matchings of plain with conjugated factors, `O` over pairings of all factors
/// with row and column deltas, `Sp` over pairings with the `M` form.
pub fn asymptotic_leading(spec: &MonomialSpec) -> Result<Scalar> {
    spec.validate()?;
    let f = &spec.factors;
    match spec.group {
        Group::U | Group::SU => {
            let plain: Vec<&Factor> = f.iter().filter(|x| !x.conj).collect();
            let conj: Vec<&Factor> = f.iter().filter(|x| x.conj).collect();
            if plain.len() != conj.len() {
                return Ok(Scalar::zero());
            }
            let q = plain.len();
            let count = Permutation::all(q)
                .iter()
                .filter(|s| (0..q).all(|a| plain[a].i == conj[s.image(a)].i && plain[a].j == conj[s.image(a)].j))
                .count();
            Ok(Scalar::from_integer(count.into()) / scalar::pow(&scalar::int(spec.n as i64), q as u32))
        }
        Group::O | Group::SO | Group::Sp => {
            if f.len() % 2 == 1 {
                return Ok(Scalar::zero());
            }
            let q = f.len() / 2;
            let d = spec.group.matrix_dim(spec.n) as i64;
            let mut total = 0i64;
            for pairs in pairings_of(f.len()) {
                let mut prod = 1i64;
                for (a, b) in pairs {
                    let (x, y) = (&f[a], &f[b]);
                    prod *= if spec.group == Group::Sp {
                        let same = x.conj == y.conj;
                        (m_form(&[x.i], &[y.i], &[same])? * m_form(&[x.j], &[y.j], &[same])?) as i64
                    } else {
                        (delta_form(&[x.i], &[y.i])? * delta_form(&[x.j], &[y.j])?) as i64
                    };
                    if prod == 0 {
                        break;
                    }
                }
                total += prod;
            }
            Ok(Scalar::from_integer(total.into()) / scalar::pow(&scalar::int(d), q as u32))
        }
    }
}
