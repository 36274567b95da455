//! Exact sparse tensors on `V^{⊗k}`, Young symmetrizers, bilinear forms,
//! contraction and expansion maps, traceless projection and pairing operators.

mod brauer;
mod form;
mod symmetrizer;
mod trace;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, CellEntry};
use crate::error::{invalid, Error, Result};
use crate::scalar::{self, Scalar};

pub use brauer::{
    epsilon_projection, psi, psi_matrix_element, symmetrized_pairing_sum, traceless_projector,
    PairPartition, TensorOperator, EPSILON_MAX_ORDER,
};
pub use form::{BilinearFormSpec, FormKind};
pub use symmetrizer::{
    apply_permutation, apply_symmetrizer, central_idempotent, normalization_squared,
    row_major_symmetrizer, young_symmetrizer, FormalGroupAlgebraElement, NormalizationCheck,
    Permutation,
};
pub use trace::{contraction, expansion, is_traceless, traceless_project, TraceSpace};

pub type MultiIndex = Vec<CellEntry>;

/// Element of `V^{⊗k}` with exact rational coefficients in the basis indexed by `alphabet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseTensor {
    alphabet: Alphabet,
    order: usize,
    coeffs: BTreeMap<MultiIndex, Scalar>,
}

impl SparseTensor {
    pub fn zero(alphabet: Alphabet, order: usize) -> Self {
        Self { alphabet, order, coeffs: BTreeMap::new() }
    }

    /// The order-0 tensor with coefficient one.
    pub fn unit(alphabet: Alphabet) -> Self {
        let mut t = Self::zero(alphabet, 0);
        t.coeffs.insert(Vec::new(), Scalar::one());
        t
    }

    /// Elementary tensor `w_{i_1}⊗…⊗w_{i_k}`.
    pub fn basis(alphabet: Alphabet, index: &[CellEntry]) -> Result<Self> {
        Self::from_terms(alphabet, index.len(), [(index.to_vec(), Scalar::one())])
    }

    pub fn from_terms(
        alphabet: Alphabet,
        order: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Result<Self> {
        let mut t = Self::zero(alphabet, order);
        for (idx, c) in terms {
            if idx.len() != order {
                return invalid(format!("index of length {} in a tensor of order {order}", idx.len()));
            }
            for &e in &idx {
                alphabet.check(e)?;
            }
            t.add_term(idx, c);
        }
        Ok(t)
    }

    pub(crate) fn add_term(&mut self, idx: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(idx.len(), self.order);
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, idx: &[CellEntry]) -> Scalar {
        self.coeffs.get(idx).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.coeffs.iter()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.alphabet, other.alphabet, "tensors over different alphabets");
        assert_eq!(self.order, other.order, "tensors of different order");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.alphabet, self.order);
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
            ..self.clone()
        }
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        assert_eq!(self.alphabet, other.alphabet, "tensors over different alphabets");
        let mut out = Self::zero(self.alphabet, self.order + other.order);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                out.add_term(idx, x * y);
            }
        }
        out
    }

    /// Keeps the terms whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&[CellEntry]) -> bool) -> Self {
        Self {
            coeffs: self.coeffs.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(
            &self.coeffs
                .iter()
                .map(|(k, v)| JsonTerm { index: k.iter().map(|e| e.0).collect(), coeff: scalar::format(v) })
                .collect::<Vec<_>>(),
        )
        .expect("tensor terms serialize")
    }

    /// Parses `[{"index": [...], "coeff": "p/q"}, ...]`. The order is taken from the
    /// first term when `order` is `None`; an empty list is then the zero scalar.
    pub fn from_json(text: &str, alphabet: Alphabet, order: Option<usize>) -> Result<Self> {
        let terms: Vec<JsonTerm> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let order = order.or_else(|| terms.first().map(|t| t.index.len())).unwrap_or(0);
        let parsed = terms
            .into_iter()
            .map(|t| Ok((t.index.into_iter().map(CellEntry).collect(), scalar::parse(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(alphabet, order, parsed)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTerm {
    index: Vec<i32>,
    coeff: String,
}

/// `⟨s, t⟩` in the orthonormal basis; coefficients are real, so no conjugation is needed.
pub fn inner_product(s: &SparseTensor, t: &SparseTensor) -> Scalar {
    let (small, large) = if s.len() <= t.len() { (s, t) } else { (t, s) };
    small
        .coeffs
        .iter()
        .filter_map(|(k, v)| large.coeffs.get(k).map(|w| v * w))
        .fold(Scalar::zero(), |acc, x| acc + x)
}

/// All multi-indices of length `k` in lexicographic order of alphabet positions.
pub fn all_indices(alphabet: &Alphabet, k: usize) -> Vec<MultiIndex> {
    let entries = alphabet.entries();
    let d = entries.len();
    let total = d.checked_pow(k as u32).expect("index space too large");
    (0..total)
        .map(|mut n| {
            let mut idx = vec![CellEntry(0); k];
            for slot in (0..k).rev() {
                idx[slot] = entries[n % d];
                n /= d;
            }
            idx
        })
        .collect()
}

/// Position of a multi-index in the ordering of [`all_indices`].
pub fn index_position(alphabet: &Alphabet, idx: &[CellEntry]) -> Option<usize> {
    let d = alphabet.dim();
    idx.iter().try_fold(0usize, |acc, &e| alphabet.position(e).map(|p| acc * d + p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[i32]) -> MultiIndex {
        v.iter().map(|&x| CellEntry(x)).collect()
    }

    #[test]
    fn inner_products_of_basis_tensors() {
        let a = Alphabet::plain(2);
        let t12 = SparseTensor::basis(a, &e(&[1, 2])).unwrap();
        let t21 = SparseTensor::basis(a, &e(&[2, 1])).unwrap();
        assert_eq!(inner_product(&t12, &t12), scalar::int(1));
        assert_eq!(inner_product(&t12, &t21), scalar::int(0));
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let a = Alphabet::plain(2);
        let t = SparseTensor::basis(a, &e(&[1, 2])).unwrap();
        let z = t.sub(&t);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
        let from = SparseTensor::from_terms(a, 1, [(e(&[1]), scalar::int(0))]).unwrap();
        assert!(from.is_zero());
    }

    #[test]
    fn rejects_foreign_entries() {
        assert!(SparseTensor::basis(Alphabet::plain(2), &e(&[3])).is_err());
        assert!(SparseTensor::basis(Alphabet::orthogonal(2), &e(&[0])).is_err());
        assert!(SparseTensor::from_terms(Alphabet::plain(2), 2, [(e(&[1]), scalar::int(1))]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = Alphabet::symplectic(1);
        let t = SparseTensor::from_terms(a, 2, [(e(&[-1, 1]), scalar::ratio(1, 2)), (e(&[1, -1]), scalar::int(-3))]).unwrap();
        let text = t.to_json();
        assert_eq!(text, r#"[{"index":[-1,1],"coeff":"1/2"},{"index":[1,-1],"coeff":"-3"}]"#);
        assert_eq!(SparseTensor::from_json(&text, a, None).unwrap(), t);
        assert!(SparseTensor::from_json(r#"[{"index":[1],"coeff":"1/0"}]"#, a, None).is_err());
        assert!(SparseTensor::from_json(r#"[{"index":[1],"coeff":"1"},{"index":[1,1],"coeff":"1"}]"#, a, None).is_err());
    }

    #[test]
    fn index_positions_follow_enumeration() {
        let a = Alphabet::orthogonal(3);
        for (n, idx) in all_indices(&a, 3).iter().enumerate() {
            assert_eq!(index_position(&a, idx), Some(n));
        }
    }
}
