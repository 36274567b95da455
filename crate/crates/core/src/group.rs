use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Compact classical groups. For `Sp` the parameter `N` is the rank and matrices are `2N × 2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    U,
    SU,
    O,
    SO,
    Sp,
}

impl Group {
    pub const ALL: [Group; 5] = [Group::U, Group::SU, Group::O, Group::SO, Group::Sp];

    /// Dimension of the defining representation.
    pub fn matrix_dim(self, n: usize) -> usize {
        match self {
            Group::Sp => 2 * n,
            _ => n,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Group::O | Group::SO)
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Group::U => "U",
            Group::SU => "SU",
            Group::O => "O",
            Group::SO => "SO",
            Group::Sp => "Sp",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" | "u" => Ok(Group::U),
            "SU" | "su" => Ok(Group::SU),
            "O" | "o" => Ok(Group::O),
            "SO" | "so" => Ok(Group::SO),
            "Sp" | "sp" | "SP" => Ok(Group::Sp),
            _ => Err(Error::Parse(format!("unknown group {s:?} (expected U, SU, O, SO or Sp)"))),
        }
    }
}
