use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::SparseTensor;
use crate::alphabet::{Alphabet, CellEntry};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::tableaux::{young_constant_mu, GroupTag, Partition, Tableau};

/// A permutation of tensor slots, stored by images: the factor in slot `a`
/// moves to slot `self.image(a)`. Slots are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Self((0..k).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return invalid(format!("not a permutation: {images:?}"));
            }
        }
        Ok(Self(images))
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(k);
        p.0.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, a: usize) -> usize {
        self.0[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "permutations of different size");
        Self(other.0.iter().map(|&a| self.0[a]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (a, &b) in self.0.iter().enumerate() {
            inv[b] = a;
        }
        Self(inv)
    }

    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.len()];
        let mut s = 1;
        for start in 0..self.len() {
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.0[j];
                len += 1;
            }
            if len > 0 && len % 2 == 0 {
                s = -s;
            }
        }
        s
    }

    /// All of `S_k` in lexicographic order of images.
    pub fn all(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        let mut used = vec![false; k];
        fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == k {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 0..k {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(k, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(k, &mut cur, &mut used, &mut out);
        out
    }

    /// Permutations of `k` slots that preserve every block of `blocks`.
    fn block_group(k: usize, blocks: &[Vec<usize>]) -> Vec<Self> {
        let mut out = vec![Self::identity(k)];
        for block in blocks {
            let local = Self::all(block.len());
            let mut next = Vec::with_capacity(out.len() * local.len());
            for g in &out {
                for l in &local {
                    let mut img = g.0.clone();
                    for (a, &b) in l.0.iter().enumerate() {
                        img[block[a]] = block[b];
                    }
                    next.push(Self(img));
                }
            }
            out = next;
        }
        out
    }

    fn act(&self, idx: &[CellEntry]) -> Vec<CellEntry> {
        let mut out = vec![CellEntry(0); idx.len()];
        for (a, &e) in idx.iter().enumerate() {
            out[self.0[a]] = e;
        }
        out
    }
}

pub fn apply_permutation(sigma: &Permutation, t: &SparseTensor) -> Result<SparseTensor> {
    if sigma.len() != t.order() {
        return invalid(format!("permutation of {} slots on a tensor of order {}", sigma.len(), t.order()));
    }
    let mut out = SparseTensor::zero(t.alphabet(), t.order());
    for (idx, c) in t.terms() {
        out.add_term(sigma.act(idx), c.clone());
    }
    Ok(out)
}

/// A finite formal sum `Σ a_g g` in the group algebra of `S_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroupAlgebraElement {
    order: usize,
    terms: BTreeMap<Permutation, Scalar>,
}

impl FormalGroupAlgebraElement {
    pub fn zero(order: usize) -> Self {
        Self { order, terms: BTreeMap::new() }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_terms(order, [(Scalar::one(), Permutation::identity(order))]).expect("identity is valid")
    }

    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (Scalar, Permutation)>) -> Result<Self> {
        let mut out = Self::zero(order);
        for (c, g) in terms {
            if g.len() != order {
                return invalid(format!("permutation of {} slots in an element of order {order}", g.len()));
            }
            out.add_term(g, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, g: Permutation, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &Permutation) -> Scalar {
        self.terms.get(g).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.order);
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c * s);
        }
        out
    }

    /// Product in the group algebra; `self * other` acts as `other` first.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let mut acc: BTreeMap<Permutation, Scalar> = BTreeMap::new();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                *acc.entry(g.compose(h)).or_insert_with(Scalar::zero) += a * b;
            }
        }
        Self { order: self.order, terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    /// `s · self · s⁻¹`.
    pub fn conjugate_by(&self, s: &Permutation) -> Self {
        let inv = s.inverse();
        let mut out = Self::zero(self.order);
        for (g, c) in &self.terms {
            out.add_term(s.compose(g).compose(&inv), c.clone());
        }
        out
    }
}

/// `c = Σ_{q∈C, p∈R} sgn(q)·q∘p`. `labeling[n]` is the one-based slot of the
/// `n`-th cell of `shape` in row-major order.
pub fn young_symmetrizer(shape: &Partition, labeling: &[usize]) -> Result<FormalGroupAlgebraElement> {
    let m = shape.weight();
    if labeling.len() != m {
        return invalid(format!("labeling has {} slots for {m} cells", labeling.len()));
    }
    let zero_based: Vec<usize> = labeling.iter().map(|&s| s.wrapping_sub(1)).collect();
    Permutation::from_images(zero_based.clone())
        .map_err(|_| Error::Invalid(format!("labeling {labeling:?} is not a bijection onto 1..={m}")))?;
    let cells = shape.cells();
    let slot_of = |r: usize, c: usize| zero_based[cells.iter().position(|&x| x == (r, c)).unwrap()];
    let rows: Vec<Vec<usize>> = shape.parts().iter().enumerate().map(|(r, &l)| (0..l).map(|c| slot_of(r, c)).collect()).collect();
    let cols: Vec<Vec<usize>> = shape
        .conjugate()
        .parts()
        .iter()
        .enumerate()
        .map(|(c, &h)| (0..h).map(|r| slot_of(r, c)).collect())
        .collect();
    let row_group = Permutation::block_group(m, &rows);
    let col_group = Permutation::block_group(m, &cols);
    let mut out = FormalGroupAlgebraElement::zero(m);
    for q in &col_group {
        let s = Scalar::from_integer(q.sign().into());
        for p in &row_group {
            out.add_term(q.compose(p), s.clone());
        }
    }
    Ok(out)
}

/// Symmetrizer with cells labelled `1..=m` in row-major order.
pub fn row_major_symmetrizer(shape: &Partition) -> FormalGroupAlgebraElement {
    let labeling: Vec<usize> = (1..=shape.weight()).collect();
    young_symmetrizer(shape, &labeling).expect("row-major labeling is a bijection")
}

/// The central idempotent `(1/μ²) Σ_{s∈S_m} s c s⁻¹` of the isotypic block of `shape`.
pub fn central_idempotent(shape: &Partition) -> FormalGroupAlgebraElement {
    let m = shape.weight();
    let c = row_major_symmetrizer(shape);
    let mu = young_constant_mu(shape);
    let mut acc = FormalGroupAlgebraElement::zero(m);
    for s in Permutation::all(m) {
        acc = acc.add(&c.conjugate_by(&s));
    }
    acc.scale(&(Scalar::one() / (&mu * &mu)))
}

pub fn apply_symmetrizer(c: &FormalGroupAlgebraElement, t: &SparseTensor) -> Result<SparseTensor> {
    if c.order() != t.order() {
        return invalid(format!("element of order {} on a tensor of order {}", c.order(), t.order()));
    }
    let mut out = SparseTensor::zero(t.alphabet(), t.order());
    for (g, a) in c.terms() {
        for (idx, b) in t.terms() {
            out.add_term(g.act(idx), a * b);
        }
    }
    Ok(out)
}

/// Both sides of the normalization identity for `c(e_T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationCheck {
    /// `⟨c(e_T), c(e_T)⟩`, computed directly.
    pub norm_squared: Scalar,
    /// `μ·⟨c(e_T), e_T⟩`.
    pub mu_overlap: Scalar,
}

impl NormalizationCheck {
    pub fn agrees(&self) -> bool {
        self.norm_squared == self.mu_overlap
    }
}

/// Squared norm of `c(e_T)` with `e_T` the row-major reading word.
/// Errors when the symmetrizer annihilates `e_T`; the caller must drop the vector.
pub fn normalization_squared(t: &Tableau) -> Result<NormalizationCheck> {
    let alphabet = tableau_alphabet(t);
    let e_t = SparseTensor::basis(alphabet, &t.reading_word())?;
    let c = row_major_symmetrizer(t.shape());
    let ct = apply_symmetrizer(&c, &e_t)?;
    if ct.is_zero() {
        return Err(Error::NotAdmissible(format!("c(e_T) vanishes for T = {t}")));
    }
    Ok(NormalizationCheck {
        norm_squared: super::inner_product(&ct, &ct),
        mu_overlap: young_constant_mu(t.shape()) * super::inner_product(&ct, &e_t),
    })
}

/// Smallest alphabet containing every entry; inner products do not depend on the choice.
fn tableau_alphabet(t: &Tableau) -> Alphabet {
    let word = t.reading_word();
    let m = word.iter().map(|e| e.0.unsigned_abs() as usize).max().unwrap_or(0);
    match t.group() {
        GroupTag::GL => Alphabet::plain(m),
        GroupTag::Sp => Alphabet::symplectic(m),
        GroupTag::O | GroupTag::SO if word.contains(&CellEntry(0)) => Alphabet::orthogonal(2 * m + 1),
        GroupTag::O | GroupTag::SO => Alphabet::orthogonal(2 * m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::tableaux::enumerate_gl_tableaux;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn basis(a: Alphabet, v: &[i32]) -> SparseTensor {
        SparseTensor::basis(a, &v.iter().map(|&x| CellEntry(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn permutation_action() {
        let a = Alphabet::plain(2);
        let t = basis(a, &[1, 2]);
        let swap = Permutation::transposition(2, 0, 1);
        assert_eq!(apply_permutation(&Permutation::identity(2), &t).unwrap(), t);
        assert_eq!(apply_permutation(&swap, &t).unwrap(), basis(a, &[2, 1]));
        let twice = apply_permutation(&swap, &apply_permutation(&swap, &t).unwrap()).unwrap();
        assert_eq!(twice, t);
        assert!(apply_permutation(&Permutation::identity(3), &t).is_err());
    }

    #[test]
    fn composition_matches_sequential_action() {
        let a = Alphabet::plain(3);
        let t = basis(a, &[1, 2, 3]);
        let g = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let h = Permutation::transposition(3, 0, 2);
        let seq = apply_permutation(&g, &apply_permutation(&h, &t).unwrap()).unwrap();
        assert_eq!(apply_permutation(&g.compose(&h), &t).unwrap(), seq);
        assert_eq!(g.compose(&g.inverse()), Permutation::identity(3));
    }

    #[test]
    fn small_symmetrizers() {
        let two = row_major_symmetrizer(&p(&[2]));
        assert_eq!(two.len(), 2);
        assert_eq!(two.coeff(&Permutation::identity(2)), int(1));
        assert_eq!(two.coeff(&Permutation::transposition(2, 0, 1)), int(1));
        let one_one = row_major_symmetrizer(&p(&[1, 1]));
        assert_eq!(one_one.coeff(&Permutation::transposition(2, 0, 1)), int(-1));
        let c21 = row_major_symmetrizer(&p(&[2, 1]));
        assert_eq!(c21.len(), 4);
        let total: Scalar = c21.terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, int(0));
        assert!(young_symmetrizer(&p(&[2]), &[1, 1]).is_err());
        assert!(young_symmetrizer(&p(&[2]), &[1, 3]).is_err());
    }

    #[test]
    fn symmetrizer_on_basis_tensors() {
        let a = Alphabet::plain(2);
        let c2 = row_major_symmetrizer(&p(&[2]));
        assert_eq!(apply_symmetrizer(&c2, &basis(a, &[1, 2])).unwrap(), basis(a, &[1, 2]).add(&basis(a, &[2, 1])));
        let c11 = row_major_symmetrizer(&p(&[1, 1]));
        assert!(apply_symmetrizer(&c11, &basis(a, &[1, 1])).unwrap().is_zero());
        let c21 = row_major_symmetrizer(&p(&[2, 1]));
        let v = apply_symmetrizer(&c21, &basis(a, &[1, 2, 1])).unwrap();
        // q∘p summed: (1,2,1)+(2,1,1)-(1,2,1)-(1,1,2)
        let expected = basis(a, &[2, 1, 1]).sub(&basis(a, &[1, 1, 2]));
        assert_eq!(v, expected);
    }

    #[test]
    fn c_squared_is_mu_c() {
        for m in 1..=4 {
            for shape in Partition::all_of_weight(m) {
                let c = row_major_symmetrizer(&shape);
                assert_eq!(c.mul(&c), c.scale(&young_constant_mu(&shape)), "shape {shape}");
            }
        }
    }

    #[test]
    fn central_idempotents_are_orthogonal() {
        for m in 1..=3 {
            let shapes = Partition::all_of_weight(m);
            let zs: Vec<_> = shapes.iter().map(central_idempotent).collect();
            let mut sum = FormalGroupAlgebraElement::zero(m);
            for (i, z) in zs.iter().enumerate() {
                assert_eq!(z.mul(z), *z);
                for (j, w) in zs.iter().enumerate() {
                    if i != j {
                        assert!(z.mul(w).is_empty());
                    }
                }
                sum = sum.add(z);
            }
            assert_eq!(sum, FormalGroupAlgebraElement::identity(m));
        }
    }

    #[test]
    fn normalization_examples() {
        let gl = |rows: Vec<Vec<i32>>| {
            Tableau::new(rows.into_iter().map(|r| r.into_iter().map(CellEntry).collect()).collect(), GroupTag::GL).unwrap()
        };
        let n12 = normalization_squared(&gl(vec![vec![1, 2]])).unwrap();
        assert_eq!(n12.norm_squared, int(2));
        assert!(n12.agrees());
        assert_eq!(normalization_squared(&gl(vec![vec![1], vec![2]])).unwrap().norm_squared, int(2));
        let n11 = normalization_squared(&gl(vec![vec![1, 1]])).unwrap();
        assert_eq!(n11.norm_squared, int(4));
        assert_eq!(n11.mu_overlap, int(4));
        assert!(normalization_squared(&gl(vec![vec![1], vec![1]])).is_err());
    }

    #[test]
    fn normalization_identity_holds_for_rows_and_columns_only() {
        for m in 1..=4 {
            for shape in [p(&[m]), p(&vec![1; m])] {
                for t in enumerate_gl_tableaux(&shape, 3) {
                    assert!(normalization_squared(&t).unwrap().agrees(), "{t}");
                }
            }
        }
        let t = Tableau::new(vec![vec![CellEntry(1), CellEntry(2)], vec![CellEntry(2)]], GroupTag::GL).unwrap();
        let check = normalization_squared(&t).unwrap();
        assert!(!check.agrees(), "{check:?}");
    }

    #[test]
    fn symmetrizer_commutes_with_relabeling() {
        let a = Alphabet::plain(3);
        let relabel = |t: &SparseTensor| {
            let mut out = SparseTensor::zero(a, t.order());
            for (idx, c) in t.terms() {
                out.add_term(idx.iter().map(|e| CellEntry(e.0 % 3 + 1)).collect(), c.clone());
            }
            out
        };
        for shape in Partition::all_of_weight(3) {
            let c = row_major_symmetrizer(&shape);
            for idx in crate::tensor_algebra::all_indices(&a, 3) {
                let t = SparseTensor::basis(a, &idx).unwrap();
                assert_eq!(
                    apply_symmetrizer(&c, &relabel(&t)).unwrap(),
                    relabel(&apply_symmetrizer(&c, &t).unwrap())
                );
            }
        }
    }
}
