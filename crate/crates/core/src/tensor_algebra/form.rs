use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, AlphabetKind, CellEntry};
use crate::tableaux::GroupTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    /// `δ_{ij}` on the standard basis `e_1..e_N`.
    Euclidean,
    /// Split symmetric form, `ω(i, j̄) = δ_{ij}`, `ω(0,0) = 1`.
    OrthogonalSymmetric,
    /// `ω(ī, i) = 1 = -ω(i, ī)`.
    SymplecticSkew,
}

/// A nondegenerate bilinear form whose matrix is a signed involution on the
/// basis: `ω(w_a, w_b) = s_a` when `b` is the partner of `a`, zero otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BilinearFormSpec {
    kind: FormKind,
    alphabet: Alphabet,
}

impl BilinearFormSpec {
    pub fn euclidean(n: usize) -> Self {
        Self { kind: FormKind::Euclidean, alphabet: Alphabet::plain(n) }
    }

    pub fn orthogonal(n: usize) -> Self {
        Self { kind: FormKind::OrthogonalSymmetric, alphabet: Alphabet::orthogonal(n) }
    }

    pub fn symplectic(rank: usize) -> Self {
        Self { kind: FormKind::SymplecticSkew, alphabet: Alphabet::symplectic(rank) }
    }

    /// The invariant form of `O(N)`/`SO(N)` (split basis) or `Sp(2N)`; `None` for `GL`.
    pub fn for_group(group: GroupTag, n: usize) -> Option<Self> {
        match group {
            GroupTag::GL => None,
            GroupTag::O | GroupTag::SO => Some(Self::orthogonal(n)),
            GroupTag::Sp => Some(Self::symplectic(n)),
        }
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.alphabet.dim()
    }

    pub fn is_skew(&self) -> bool {
        self.kind == FormKind::SymplecticSkew
    }

    /// The unique `b` with `ω(a, b) ≠ 0`.
    pub fn partner(&self, a: CellEntry) -> CellEntry {
        match self.kind {
            FormKind::Euclidean => a,
            _ => a.dual(),
        }
    }

    /// `ω(a, partner(a))`.
    pub fn sign(&self, a: CellEntry) -> i32 {
        match self.kind {
            FormKind::SymplecticSkew if a.0 > 0 => -1,
            _ => 1,
        }
    }

    pub fn omega(&self, a: CellEntry, b: CellEntry) -> i32 {
        if self.partner(a) == b {
            self.sign(a)
        } else {
            0
        }
    }

    /// Nonzero terms of `Σ_p f_p ⊗ f^p`; the coefficient of `w_a ⊗ w_b` is `ω(a, b)`.
    pub fn pair_terms(&self) -> Vec<(CellEntry, CellEntry, i32)> {
        self.alphabet
            .entries()
            .into_iter()
            .map(|a| (a, self.partner(a), self.sign(a)))
            .collect()
    }

    /// Torus weight of a multi-index; the split forms make `D_ij` weight-preserving.
    /// Euclidean indices all share the trivial weight.
    pub fn weight(&self, idx: &[CellEntry]) -> Vec<i32> {
        if self.kind == FormKind::Euclidean {
            return Vec::new();
        }
        let rank = match self.alphabet.kind {
            AlphabetKind::Symplectic => self.alphabet.n,
            _ => self.alphabet.n / 2,
        };
        let mut w = vec![0; rank];
        for e in idx {
            if e.0 != 0 {
                w[e.0.unsigned_abs() as usize - 1] += e.0.signum();
            }
        }
        w
    }
}
