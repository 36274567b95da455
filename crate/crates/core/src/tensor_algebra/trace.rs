use std::collections::BTreeMap;

use num_traits::Zero;

use super::{all_indices, inner_product, BilinearFormSpec, MultiIndex, SparseTensor};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

fn check_form(t: &SparseTensor, form: &BilinearFormSpec) -> Result<()> {
    if t.alphabet() != form.alphabet() {
        return invalid(format!("tensor alphabet {:?} does not match form alphabet {:?}", t.alphabet(), form.alphabet()));
    }
    Ok(())
}

/// `C_ij`: pairs the factors in one-based slots `i < j` with `ω`.
pub fn contraction(i: usize, j: usize, t: &SparseTensor, form: &BilinearFormSpec) -> Result<SparseTensor> {
    check_form(t, form)?;
    if !(1 <= i && i < j && j <= t.order()) {
        return invalid(format!("contraction slots ({i},{j}) out of range for order {}", t.order()));
    }
    let mut out = SparseTensor::zero(t.alphabet(), t.order() - 2);
    for (idx, c) in t.terms() {
        let w = form.omega(idx[i - 1], idx[j - 1]);
        if w != 0 {
            let rest: MultiIndex = idx
                .iter()
                .enumerate()
                .filter(|&(s, _)| s != i - 1 && s != j - 1)
                .map(|(_, &e)| e)
                .collect();
            out.add_term(rest, c * Scalar::from_integer(w.into()));
        }
    }
    Ok(out)
}

/// `D_ij`: inserts `Σ_p f_p ⊗ f^p` so that it occupies one-based slots `i < j` of the output.
pub fn expansion(i: usize, j: usize, t: &SparseTensor, form: &BilinearFormSpec) -> Result<SparseTensor> {
    check_form(t, form)?;
    let k = t.order() + 2;
    if !(1 <= i && i < j && j <= k) {
        return invalid(format!("expansion slots ({i},{j}) out of range for output order {k}"));
    }
    let pairs = form.pair_terms();
    let mut out = SparseTensor::zero(t.alphabet(), k);
    for (idx, c) in t.terms() {
        for &(a, b, w) in &pairs {
            let mut new = idx.clone();
            new.insert(i - 1, a);
            new.insert(j - 1, b);
            out.add_term(new, c * Scalar::from_integer(w.into()));
        }
    }
    Ok(out)
}

pub fn is_traceless(t: &SparseTensor, form: &BilinearFormSpec) -> Result<bool> {
    for i in 1..=t.order() {
        for j in i + 1..=t.order() {
            if !contraction(i, j, t, form)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orthogonal bases of the trace subspace `Σ_{i<j} im D_ij ⊂ V^{⊗k}`, built per
/// torus weight on demand.
#[derive(Debug, Clone)]
pub struct TraceSpace {
    form: BilinearFormSpec,
    order: usize,
    sources: BTreeMap<Vec<i32>, Vec<MultiIndex>>,
    blocks: BTreeMap<Vec<i32>, Vec<(SparseTensor, Scalar)>>,
}

impl TraceSpace {
    pub fn new(form: BilinearFormSpec, order: usize) -> Self {
        let mut sources: BTreeMap<Vec<i32>, Vec<MultiIndex>> = BTreeMap::new();
        if order >= 2 {
            for idx in all_indices(&form.alphabet(), order - 2) {
                sources.entry(form.weight(&idx)).or_default().push(idx);
            }
        }
        Self { form, order, sources, blocks: BTreeMap::new() }
    }

    pub fn form(&self) -> &BilinearFormSpec {
        &self.form
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn block(&mut self, weight: &[i32]) -> &[(SparseTensor, Scalar)] {
        if !self.blocks.contains_key(weight) {
            let mut basis: Vec<(SparseTensor, Scalar)> = Vec::new();
            let alphabet = self.form.alphabet();
            for src in self.sources.get(weight).map(Vec::as_slice).unwrap_or(&[]) {
                let e = SparseTensor::basis(alphabet, src).expect("source index in alphabet");
                for i in 1..=self.order {
                    for j in i + 1..=self.order {
                        let mut r = expansion(i, j, &e, &self.form).expect("slots in range");
                        for (v, n) in &basis {
                            let ip = inner_product(v, &r);
                            if !ip.is_zero() {
                                r = r.sub(&v.scale(&(ip / n)));
                            }
                        }
                        if !r.is_zero() {
                            let n = inner_product(&r, &r);
                            basis.push((r, n));
                        }
                    }
                }
            }
            self.blocks.insert(weight.to_vec(), basis);
        }
        &self.blocks[weight]
    }

    /// Dimension of the trace subspace at torus weight `weight`.
    pub fn dim_at(&mut self, weight: &[i32]) -> usize {
        self.block(weight).len()
    }

    /// Orthogonal projection onto the trace subspace.
    pub fn project(&mut self, t: &SparseTensor) -> SparseTensor {
        assert_eq!(t.order(), self.order, "tensor order does not match trace space");
        let mut by_weight: BTreeMap<Vec<i32>, SparseTensor> = BTreeMap::new();
        for (idx, c) in t.terms() {
            by_weight
                .entry(self.form.weight(idx))
                .or_insert_with(|| SparseTensor::zero(t.alphabet(), t.order()))
                .add_term(idx.clone(), c.clone());
        }
        let mut out = SparseTensor::zero(t.alphabet(), t.order());
        for (w, part) in by_weight {
            for (v, n) in self.block(&w) {
                let ip = inner_product(v, &part);
                if !ip.is_zero() {
                    out = out.add(&v.scale(&(ip / n)));
                }
            }
        }
        out
    }

    /// `(t0, t1)` with `t0` traceless and `t1` in the trace subspace.
    pub fn split(&mut self, t: &SparseTensor) -> (SparseTensor, SparseTensor) {
        let t1 = self.project(t);
        (t.sub(&t1), t1)
    }
}

/// Orthogonal decomposition `t = t0 + t1` into traceless part and trace part.
pub fn traceless_project(t: &SparseTensor, form: &BilinearFormSpec) -> Result<(SparseTensor, SparseTensor)> {
    check_form(t, form)?;
    if t.order() < 2 {
        return Ok((t.clone(), SparseTensor::zero(t.alphabet(), t.order())));
    }
    Ok(TraceSpace::new(*form, t.order()).split(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::CellEntry;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn basis(f: &BilinearFormSpec, v: &[i32]) -> SparseTensor {
        SparseTensor::basis(f.alphabet(), &v.iter().map(|&x| CellEntry(x)).collect::<Vec<_>>()).unwrap()
    }

    fn unit(f: &BilinearFormSpec) -> SparseTensor {
        SparseTensor::unit(f.alphabet())
    }

    #[test]
    fn contraction_examples() {
        let o = BilinearFormSpec::orthogonal(2);
        assert_eq!(contraction(1, 2, &basis(&o, &[1, -1]), &o).unwrap(), unit(&o));
        assert!(contraction(1, 2, &basis(&o, &[1, 1]), &o).unwrap().is_zero());
        let o4 = BilinearFormSpec::orthogonal(4);
        assert!(contraction(1, 2, &basis(&o4, &[1, 2]), &o4).unwrap().is_zero());
        let sp = BilinearFormSpec::symplectic(1);
        let t = basis(&sp, &[-1, 1]).sub(&basis(&sp, &[1, -1]));
        assert_eq!(contraction(1, 2, &t, &sp).unwrap(), unit(&sp).scale(&int(2)));
        assert!(contraction(2, 2, &t, &sp).is_err());
        assert!(contraction(1, 3, &t, &sp).is_err());
    }

    #[test]
    fn expansion_of_unit() {
        let o = BilinearFormSpec::orthogonal(2);
        let d = expansion(1, 2, &unit(&o), &o).unwrap();
        assert_eq!(d, basis(&o, &[1, -1]).add(&basis(&o, &[-1, 1])));
        assert!(expansion(1, 3, &unit(&o), &o).is_err());
    }

    #[test]
    fn contraction_after_expansion_is_dimension() {
        for f in [
            BilinearFormSpec::euclidean(3),
            BilinearFormSpec::orthogonal(2),
            BilinearFormSpec::orthogonal(5),
            BilinearFormSpec::symplectic(1),
            BilinearFormSpec::symplectic(3),
        ] {
            let cd = contraction(1, 2, &expansion(1, 2, &unit(&f), &f).unwrap(), &f).unwrap();
            assert_eq!(cd, unit(&f).scale(&int(f.dim() as i64)), "{f:?}");
        }
    }

    #[test]
    fn expansion_at_separated_slots() {
        let f = BilinearFormSpec::symplectic(1);
        let d = expansion(1, 3, &basis(&f, &[1]), &f).unwrap();
        let expected = basis(&f, &[-1, 1, 1]).sub(&basis(&f, &[1, 1, -1]));
        assert_eq!(d, expected);
    }

    #[test]
    fn expansion_is_adjoint_of_contraction() {
        let f = BilinearFormSpec::symplectic(2);
        let a = f.alphabet();
        for s in all_indices(&a, 1) {
            for t in all_indices(&a, 3) {
                let s = SparseTensor::basis(a, &s).unwrap();
                let t = SparseTensor::basis(a, &t).unwrap();
                for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                    assert_eq!(
                        inner_product(&expansion(i, j, &s, &f).unwrap(), &t),
                        inner_product(&s, &contraction(i, j, &t, &f).unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn traceless_examples() {
        let o = BilinearFormSpec::orthogonal(2);
        let t = basis(&o, &[1, -1]);
        let (t0, t1) = traceless_project(&t, &o).unwrap();
        assert_eq!(t1, basis(&o, &[1, -1]).add(&basis(&o, &[-1, 1])).scale(&ratio(1, 2)));
        assert_eq!(t0.add(&t1), t);
        assert!(is_traceless(&t0, &o).unwrap());

        let traceless = basis(&o, &[1, 1]);
        assert_eq!(traceless_project(&traceless, &o).unwrap(), (traceless.clone(), SparseTensor::zero(o.alphabet(), 2)));

        let d = expansion(1, 2, &unit(&o), &o).unwrap();
        let (d0, d1) = traceless_project(&d, &o).unwrap();
        assert!(d0.is_zero());
        assert_eq!(d1, d);
    }

    #[test]
    fn trace_space_dimensions() {
        // dim V₁ = dim V^{⊗k} − dim V₀; for k = 2 the trace part is one-dimensional.
        for f in [BilinearFormSpec::orthogonal(3), BilinearFormSpec::symplectic(2)] {
            let mut space = TraceSpace::new(f, 2);
            assert_eq!(space.dim_at(&f.weight(&[])), 1);
        }
        // O(3), k = 3: V₀ is the 7-dimensional (3) plus 5-dimensional (2,1) plus
        // 1-dimensional (1,1,1) parts (the last two with multiplicity 2 and 1),
        // so dim V₁ = 27 − 7 − 2·5 − 1 = 9.
        let f = BilinearFormSpec::orthogonal(3);
        let mut space = TraceSpace::new(f, 3);
        let total: usize = all_indices(&f.alphabet(), 3)
            .iter()
            .map(|idx| f.weight(idx))
            .collect::<std::collections::BTreeSet<_>>()
            .iter()
            .map(|w| space.dim_at(w))
            .sum();
        assert_eq!(total, 9);
    }

    fn arb_tensor(f: BilinearFormSpec, k: usize) -> impl Strategy<Value = SparseTensor> {
        let entries = f.alphabet().entries();
        let idx = proptest::collection::vec(proptest::sample::select(entries), k);
        proptest::collection::vec((idx, -3i64..=3), 0..6).prop_map(move |terms| {
            SparseTensor::from_terms(f.alphabet(), k, terms.into_iter().map(|(i, c)| (i, int(c)))).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn traceless_projection_properties(
            t in prop_oneof![arb_tensor(BilinearFormSpec::orthogonal(3), 3), arb_tensor(BilinearFormSpec::symplectic(2), 3)],
        ) {
            let f = match t.alphabet().kind {
                crate::alphabet::AlphabetKind::Symplectic => BilinearFormSpec::symplectic(2),
                _ => BilinearFormSpec::orthogonal(3),
            };
            let (t0, t1) = traceless_project(&t, &f).unwrap();
            prop_assert_eq!(t0.add(&t1), t.clone());
            prop_assert!(is_traceless(&t0, &f).unwrap());
            prop_assert!(inner_product(&t0, &t1).is_zero());
            let (t00, t01) = traceless_project(&t0, &f).unwrap();
            prop_assert_eq!(t00, t0);
            prop_assert!(t01.is_zero());
        }
    }
}
