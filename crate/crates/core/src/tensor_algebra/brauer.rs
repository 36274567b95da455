use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::symmetrizer::{central_idempotent, row_major_symmetrizer, FormalGroupAlgebraElement, Permutation};
use super::{all_indices, apply_permutation, apply_symmetrizer, contraction, expansion, index_position};
use super::{BilinearFormSpec, SparseTensor, TraceSpace};
use crate::alphabet::{Alphabet, CellEntry};
use crate::error::{invalid, Error, Result};
use crate::linalg::RationalMatrix;
use crate::scalar::Scalar;
use crate::tableaux::{young_constant_mu, Partition};

/// Largest tensor order accepted by [`epsilon_projection`] and [`symmetrized_pairing_sum`].
pub const EPSILON_MAX_ORDER: usize = 3;

/// A perfect matching of `2k` zero-based slots. Even slots are output factors and
/// odd slots are input factors of the associated operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition {
    size: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    pub fn new(size: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = vec![false; size];
        let mut norm = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            for s in [a, b] {
                if s >= size || std::mem::replace(&mut seen[s], true) {
                    return invalid(format!("slot {s} repeated or out of range in a matching of {size}"));
                }
            }
            norm.push((a.min(b), a.max(b)));
        }
        if seen.iter().any(|&x| !x) {
            return invalid("matching does not cover every slot");
        }
        norm.sort_unstable();
        Ok(Self { size, pairs: norm })
    }

    /// `θ_k = {(0,1), (2,3), …}`, the matching sent to the identity operator.
    pub fn theta(k: usize) -> Self {
        Self { size: 2 * k, pairs: (0..k).map(|i| (2 * i, 2 * i + 1)).collect() }
    }

    /// All `(size-1)!!` matchings, generated smallest-slot-first.
    pub fn all(size: usize) -> Vec<Self> {
        fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, size: usize, out: &mut Vec<PairPartition>) {
            if free.is_empty() {
                out.push(PairPartition { size, pairs: cur.clone() });
                return;
            }
            let a = free.remove(0);
            for n in 0..free.len() {
                let b = free.remove(n);
                cur.push((a, b));
                rec(free, cur, size, out);
                cur.pop();
                free.insert(n, b);
            }
            free.insert(0, a);
        }
        let mut out = Vec::new();
        if size.is_multiple_of(2) {
            rec(&mut (0..size).collect(), &mut Vec::new(), size, &mut out);
        }
        out
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Image under a slot permutation, with the number of pairs whose orientation flipped.
    pub fn relabel(&self, g: &Permutation) -> (Self, usize) {
        assert_eq!(g.len(), self.size);
        let mut flips = 0;
        let mut pairs: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (g.image(a), g.image(b));
                if x > y {
                    flips += 1;
                    (y, x)
                } else {
                    (x, y)
                }
            })
            .collect();
        pairs.sort_unstable();
        (Self { size: self.size, pairs }, flips)
    }
}

/// A linear operator on `V^{⊗k}`, stored as the images of the basis tensors in
/// the order of [`all_indices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorOperator {
    alphabet: Alphabet,
    order: usize,
    columns: Vec<SparseTensor>,
}

impl TensorOperator {
    pub fn from_fn(alphabet: Alphabet, order: usize, mut f: impl FnMut(&SparseTensor) -> SparseTensor) -> Self {
        let columns = all_indices(&alphabet, order)
            .into_iter()
            .map(|idx| {
                let col = f(&SparseTensor::basis(alphabet, &idx).expect("index in alphabet"));
                assert_eq!(col.order(), order, "operator must preserve the tensor order");
                col
            })
            .collect();
        Self { alphabet, order, columns }
    }

    pub fn identity(alphabet: Alphabet, order: usize) -> Self {
        Self::from_fn(alphabet, order, |e| e.clone())
    }

    pub fn zero(alphabet: Alphabet, order: usize) -> Self {
        Self::from_fn(alphabet, order, |_| SparseTensor::zero(alphabet, order))
    }

    /// Action of a group-algebra element of `S_k`.
    pub fn from_group_element(alphabet: Alphabet, c: &FormalGroupAlgebraElement) -> Self {
        Self::from_fn(alphabet, c.order(), |e| apply_symmetrizer(c, e).expect("orders match"))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn apply(&self, t: &SparseTensor) -> SparseTensor {
        assert_eq!((t.alphabet(), t.order()), (self.alphabet, self.order), "tensor does not match operator");
        let mut out = SparseTensor::zero(self.alphabet, self.order);
        for (idx, c) in t.terms() {
            let col = &self.columns[index_position(&self.alphabet, idx).expect("index in alphabet")];
            for (k, v) in col.terms() {
                out.add_term(k.clone(), c * v);
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { columns: other.columns.iter().map(|c| self.apply(c)).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.add(b)).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self { columns: self.columns.iter().map(|c| c.scale(s)).collect(), ..self.clone() }
    }

    pub fn matrix_element(&self, out: &[CellEntry], inp: &[CellEntry]) -> Scalar {
        index_position(&self.alphabet, inp).map(|p| self.columns[p].coeff(out)).unwrap_or_else(Scalar::zero)
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        let indices = all_indices(&self.alphabet, self.order);
        let mut m = RationalMatrix::zeros(indices.len(), indices.len());
        for (j, col) in self.columns.iter().enumerate() {
            for (idx, c) in col.terms() {
                m[(index_position(&self.alphabet, idx).unwrap(), j)] = c.clone();
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.to_matrix().rank()
    }

    pub fn trace(&self) -> Scalar {
        all_indices(&self.alphabet, self.order)
            .iter()
            .zip(&self.columns)
            .map(|(idx, col)| col.coeff(idx))
            .fold(Scalar::zero(), |a, b| a + b)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseTensor::is_zero)
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose(self) == *self
    }
}

fn is_output(slot: usize) -> bool {
    slot.is_multiple_of(2)
}

/// `⟨out|ψ(π)|inp⟩` from the pairing directly: output pairs give `ω(out_a, out_b)`,
/// input pairs `ω(inp_a, inp_b)`, through lines `δ`, negated for a skew form when
/// the input end precedes the output end.
pub fn psi_matrix_element(pi: &PairPartition, form: &BilinearFormSpec, out: &[CellEntry], inp: &[CellEntry]) -> i32 {
    let value = |s: usize| if is_output(s) { out[s / 2] } else { inp[s / 2] };
    let mut acc = 1;
    for &(a, b) in pi.pairs() {
        acc *= match (is_output(a), is_output(b)) {
            (true, true) | (false, false) => form.omega(value(a), value(b)),
            _ if value(a) != value(b) => 0,
            (false, true) if form.is_skew() => -1,
            _ => 1,
        };
        if acc == 0 {
            break;
        }
    }
    acc
}

/// `ψ(π)` as contractions of the input pairs, expansions for the output pairs, and
/// a final slot permutation routing the through lines.
pub fn psi(pi: &PairPartition, form: &BilinearFormSpec) -> TensorOperator {
    assert!(pi.size().is_multiple_of(2));
    let k = pi.size() / 2;
    let mut through = vec![None; k];
    let mut sign = 1i64;
    let mut input_pairs = Vec::new();
    let mut output_pairs = Vec::new();
    for &(a, b) in pi.pairs() {
        match (is_output(a), is_output(b)) {
            (true, true) => output_pairs.push((a / 2, b / 2)),
            (false, false) => input_pairs.push((a / 2, b / 2)),
            (true, false) => through[b / 2] = Some(a / 2),
            (false, true) => {
                through[a / 2] = Some(b / 2);
                if form.is_skew() {
                    sign = -sign;
                }
            }
        }
    }
    let sign = Scalar::from_integer(sign.into());
    TensorOperator::from_fn(form.alphabet(), k, |e| {
        let mut t = e.clone();
        let mut alive: Vec<usize> = (0..k).collect();
        for &(x, y) in &input_pairs {
            let px = alive.iter().position(|&s| s == x).unwrap();
            let py = alive.iter().position(|&s| s == y).unwrap();
            t = contraction(px + 1, py + 1, &t, form).expect("slots in range");
            alive.remove(py);
            alive.remove(px);
        }
        let mut dest: Vec<usize> = alive.iter().map(|&x| through[x].expect("through line")).collect();
        for &(x, y) in &output_pairs {
            let r = t.order();
            t = expansion(r + 1, r + 2, &t, form).expect("slots in range");
            dest.extend([x, y]);
        }
        let route = Permutation::from_images(dest).expect("routing is a bijection");
        apply_permutation(&route, &t).expect("orders match").scale(&sign)
    })
}

fn check_epsilon_order(lambda: &Partition, k: usize) -> Result<()> {
    if lambda.weight() != k {
        return invalid(format!("shape {lambda} has weight {} but the order is {k}", lambda.weight()));
    }
    if k > EPSILON_MAX_ORDER {
        return Err(Error::CostGate {
            what: format!("pairing sum over S_{} ((2k)! = {} terms)", 2 * k, crate::scalar::factorial(2 * k as u64)),
            limit: EPSILON_MAX_ORDER,
            requested: k,
        });
    }
    Ok(())
}

/// `(1/μ²) Σ_{s∈S_2k} ψ(s c^{2λ} s⁻¹ θ_k)` with `μ` the constant of `2λ`, evaluated literally.
///
/// For a symmetric form this is the identity at `k = 1` but is not idempotent for
/// `k ≥ 2`; for a skew form it already vanishes at `k = 1`. See
/// [`epsilon_projection`] for the isotypic projector.
pub fn symmetrized_pairing_sum(lambda: &Partition, form: &BilinearFormSpec) -> Result<TensorOperator> {
    let k = lambda.weight();
    check_epsilon_order(lambda, k)?;
    let doubled = lambda.doubled();
    let c = row_major_symmetrizer(&doubled);
    let mut conj = FormalGroupAlgebraElement::zero(2 * k);
    for s in Permutation::all(2 * k) {
        conj = conj.add(&c.conjugate_by(&s));
    }
    let theta = PairPartition::theta(k);
    let mut by_pairing: BTreeMap<PairPartition, Scalar> = BTreeMap::new();
    for (g, coeff) in conj.terms() {
        let (pairing, flips) = theta.relabel(g);
        let signed = if form.is_skew() && flips % 2 == 1 { -coeff.clone() } else { coeff.clone() };
        *by_pairing.entry(pairing).or_insert_with(Scalar::zero) += signed;
    }
    let mu = young_constant_mu(&doubled);
    let norm = Scalar::one() / (&mu * &mu);
    let mut acc = TensorOperator::zero(form.alphabet(), k);
    for (pairing, coeff) in by_pairing {
        if !coeff.is_zero() {
            acc = acc.add(&psi(&pairing, form).scale(&(coeff * &norm)));
        }
    }
    Ok(acc)
}

/// Orthogonal projector onto the traceless subspace of `V^{⊗k}`.
pub fn traceless_projector(order: usize, form: &BilinearFormSpec) -> TensorOperator {
    if order < 2 {
        return TensorOperator::identity(form.alphabet(), order);
    }
    let mut space = TraceSpace::new(*form, order);
    TensorOperator::from_fn(form.alphabet(), order, |e| space.split(e).0)
}

/// Projector onto the `λ`-isotypic block `R^λ ⊗ Ω^λ` of the traceless tensors,
/// `P₀ ∘ z_λ` with `z_λ` the central idempotent of `S_k`.
pub fn epsilon_projection(lambda: &Partition, k: usize, form: &BilinearFormSpec) -> Result<TensorOperator> {
    check_epsilon_order(lambda, k)?;
    let z = TensorOperator::from_group_element(form.alphabet(), &central_idempotent(lambda));
    Ok(traceless_projector(k, form).compose(&z))
}
