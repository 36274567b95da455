//! Signed index alphabets shared by tableaux and tensors.
//!
//! Entry `i` is encoded as `+i`, its dual `ī` as `-i`, and the middle index of
//! an odd-dimensional orthogonal space as `0`. For orthogonal and symplectic
//! alphabets the order `1̄ < 1 < 2̄ < 2 < … (< 0)` coincides with the basis
//! position: `ī ↦ 2i-1`, `i ↦ 2i`, `0 ↦ N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellEntry(pub i32);

impl CellEntry {
    pub fn value(self) -> i32 {
        self.0
    }

    pub fn dual(self) -> CellEntry {
        CellEntry(-self.0)
    }
}

impl std::fmt::Display for CellEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            v if v < 0 => write!(f, "{}̄", -v),
            v => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlphabetKind {
    /// Plain entries `1..=N`.
    Plain,
    /// `1̄,1,…,r̄,r` with `r = ⌊N/2⌋`, plus `0` when `N` is odd.
    Orthogonal,
    /// `1̄,1,…,N̄,N` for a `2N`-dimensional space.
    Symplectic,
}

/// An ordered alphabet together with the dimension of the space it indexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    pub kind: AlphabetKind,
    /// `N` for plain and orthogonal alphabets, the rank for symplectic ones.
    pub n: usize,
}

impl Alphabet {
    pub fn plain(n: usize) -> Self {
        Self { kind: AlphabetKind::Plain, n }
    }

    pub fn orthogonal(n: usize) -> Self {
        Self { kind: AlphabetKind::Orthogonal, n }
    }

    pub fn symplectic(rank: usize) -> Self {
        Self { kind: AlphabetKind::Symplectic, n: rank }
    }

    /// Dimension of the underlying vector space.
    pub fn dim(&self) -> usize {
        match self.kind {
            AlphabetKind::Plain | AlphabetKind::Orthogonal => self.n,
            AlphabetKind::Symplectic => 2 * self.n,
        }
    }

    /// Zero-based basis position of an entry, `None` if it is not in the alphabet.
    pub fn position(&self, e: CellEntry) -> Option<usize> {
        let v = e.0;
        match self.kind {
            AlphabetKind::Plain => (v >= 1 && v as usize <= self.n).then(|| v as usize - 1),
            AlphabetKind::Orthogonal | AlphabetKind::Symplectic => {
                let r = match self.kind {
                    AlphabetKind::Orthogonal => self.n / 2,
                    _ => self.n,
                };
                if v == 0 {
                    (self.kind == AlphabetKind::Orthogonal && self.n % 2 == 1).then(|| self.n - 1)
                } else {
                    let a = v.unsigned_abs() as usize;
                    if a > r {
                        None
                    } else if v < 0 {
                        Some(2 * a - 2)
                    } else {
                        Some(2 * a - 1)
                    }
                }
            }
        }
    }

    pub fn entry_at(&self, pos: usize) -> CellEntry {
        assert!(pos < self.dim(), "position {pos} out of range");
        match self.kind {
            AlphabetKind::Plain => CellEntry(pos as i32 + 1),
            _ => {
                if self.kind == AlphabetKind::Orthogonal && self.n % 2 == 1 && pos == self.n - 1 {
                    CellEntry(0)
                } else if pos.is_multiple_of(2) {
                    CellEntry(-(pos as i32 / 2 + 1))
                } else {
                    CellEntry(pos as i32 / 2 + 1)
                }
            }
        }
    }

    pub fn contains(&self, e: CellEntry) -> bool {
        self.position(e).is_some()
    }

    /// Entries in increasing order.
    pub fn entries(&self) -> Vec<CellEntry> {
        (0..self.dim()).map(|p| self.entry_at(p)).collect()
    }

    pub fn check(&self, e: CellEntry) -> Result<usize> {
        self.position(e)
            .ok_or_else(|| Error::Invalid(format!("entry {} not in alphabet {:?}", e.0, self)))
    }
}
