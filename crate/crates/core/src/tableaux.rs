//! Partitions, standard tableaux for `GL(N)`, `O(N)` and `Sp(2N)`, and the
//! combinatorial constants attached to them.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, CellEntry};
use crate::error::{invalid, Error, Result};
use crate::scalar::{factorial, Scalar};

/// A weakly decreasing list of positive parts; trailing zeros are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("parts must be weakly decreasing: {parts:?}"));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Column lengths.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (0..cols).map(|c| self.parts.iter().filter(|&&l| l > c).count()).collect(),
        }
    }

    /// The shape with every row doubled.
    pub fn doubled(&self) -> Partition {
        Partition {
            parts: self.parts.iter().map(|p| 2 * p).collect(),
        }
    }

    /// Cells `(row, col)` in row-major order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &l)| (0..l).map(move |c| (r, c)))
            .collect()
    }

    /// All partitions of `m`, in decreasing lexicographic order.
    pub fn all_of_weight(m: usize) -> Vec<Partition> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, m, &mut Vec::new(), &mut out);
        out
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Parses `"2,1"`, `"(2,1)"` or `"2 1"`; the empty string and `"()"` give the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body);
        let parts = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad part {t:?} in shape {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    GL,
    O,
    SO,
    Sp,
}

impl GroupTag {
    /// Alphabet for this group at parameter `n` (`N` for `GL`/`O`/`SO`, rank for `Sp`).
    pub fn alphabet(self, n: usize) -> Alphabet {
        match self {
            GroupTag::GL => Alphabet::plain(n),
            GroupTag::O | GroupTag::SO => Alphabet::orthogonal(n),
            GroupTag::Sp => Alphabet::symplectic(n),
        }
    }
}

/// A filling of a Young diagram, rows stored top to bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<CellEntry>>,
    group: GroupTag,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<CellEntry>>, group: GroupTag) -> Result<Self> {
        if rows.iter().any(|r| r.is_empty()) {
            return invalid("tableau rows must be nonempty");
        }
        let shape = Partition::new(rows.iter().map(|r| r.len()).collect())?;
        Ok(Self { shape, rows, group })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<CellEntry>] {
        &self.rows
    }

    pub fn group(&self) -> GroupTag {
        self.group
    }

    pub fn get(&self, row: usize, col: usize) -> Option<CellEntry> {
        self.rows.get(row).and_then(|r| r.get(col)).copied()
    }

    /// Entries in row-major reading order.
    pub fn reading_word(&self) -> Vec<CellEntry> {
        self.rows.iter().flatten().copied().collect()
    }

    /// Rows weakly increasing, columns strictly increasing in the alphabet order.
    pub fn is_semistandard(&self, alphabet: &Alphabet) -> bool {
        let key = |e: CellEntry| alphabet.position(e);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &e) in row.iter().enumerate() {
                let Some(k) = key(e) else { return false };
                if c > 0 && key(row[c - 1]) > Some(k) {
                    return false;
                }
                if r > 0 && key(self.rows[r - 1][c]) >= Some(k) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| e.0).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }

    /// Parses `[[1,1],[2]]`-style rows and checks them against the group alphabet.
    pub fn from_json(text: &str, group: GroupTag, n: usize) -> Result<Self> {
        let rows: Vec<Vec<i32>> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let t = Tableau::new(
            rows.into_iter().map(|r| r.into_iter().map(CellEntry).collect()).collect(),
            group,
        )?;
        let alphabet = group.alphabet(n);
        for e in t.reading_word() {
            alphabet.check(e)?;
        }
        Ok(t)
    }
}

impl std::fmt::Display for Tableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

/// Semistandard fillings over `alphabet` in lexicographic order of the reading word.
fn semistandard_fillings(shape: &Partition, alphabet: &Alphabet, group: GroupTag) -> Vec<Tableau> {
    let cells = shape.cells();
    let entries = alphabet.entries();
    let mut grid: Vec<Vec<usize>> = shape.parts().iter().map(|&l| vec![0; l]).collect();
    let mut out = Vec::new();

    fn rec(
        idx: usize,
        cells: &[(usize, usize)],
        entries: &[CellEntry],
        grid: &mut Vec<Vec<usize>>,
        group: GroupTag,
        out: &mut Vec<Tableau>,
    ) {
        if idx == cells.len() {
            let rows = grid.iter().map(|r| r.iter().map(|&k| entries[k]).collect()).collect();
            out.push(Tableau::new(rows, group).expect("shape is a partition"));
            return;
        }
        let (r, c) = cells[idx];
        let mut lo = 0;
        if c > 0 {
            lo = lo.max(grid[r][c - 1]);
        }
        if r > 0 {
            lo = lo.max(grid[r - 1][c] + 1);
        }
        for k in lo..entries.len() {
            grid[r][c] = k;
            rec(idx + 1, cells, entries, grid, group, out);
        }
    }

    rec(0, &cells, &entries, &mut grid, group, &mut out);
    out
}

/// Semistandard tableaux of `shape` with entries in `1..=n`.
pub fn enumerate_gl_tableaux(shape: &Partition, n: usize) -> Vec<Tableau> {
    if shape.len() > n {
        return Vec::new();
    }
    semistandard_fillings(shape, &Alphabet::plain(n), GroupTag::GL)
}

/// Orthogonal standard tableaux (Proctor's conditions) over `1̄<1<…<r̄<r(<0)`.
pub fn enumerate_o_tableaux(shape: &Partition, n: usize) -> Result<Vec<Tableau>> {
    orthogonal_admissible(shape, n)?;
    let alphabet = Alphabet::orthogonal(n);
    Ok(semistandard_fillings(shape, &alphabet, GroupTag::O)
        .into_iter()
        .filter(|t| satisfies_proctor(t, n))
        .collect())
}

pub(crate) fn orthogonal_admissible(shape: &Partition, n: usize) -> Result<()> {
    let cols = shape.conjugate();
    let c1 = cols.parts().first().copied().unwrap_or(0);
    let c2 = cols.parts().get(1).copied().unwrap_or(0);
    if c1 + c2 > n {
        return Err(Error::NotAdmissible(format!(
            "O({n}) shape {shape} has first two columns of total length {} > {n}",
            c1 + c2
        )));
    }
    Ok(())
}

fn satisfies_proctor(t: &Tableau, n: usize) -> bool {
    let r = n / 2;
    let cols = t.shape().conjugate();
    let col_len = |c: usize| cols.parts().get(c).copied().unwrap_or(0);
    // entries ≤ i in the order 1̄<1<…: nonzero with |e| ≤ i
    let at_most = |e: CellEntry, i: i32| e.0 != 0 && e.0.abs() <= i;
    for i in 1..=r as i32 {
        let count = |c: usize| {
            (0..col_len(c))
                .filter(|&row| at_most(t.get(row, c).unwrap(), i))
                .count()
        };
        let (alpha, beta) = (count(0), count(1));
        let two_i = 2 * i as usize;
        if alpha + beta > two_i {
            return false;
        }
        if alpha + beta != two_i || t.get(alpha.wrapping_sub(1), 0) != Some(CellEntry(-i)) {
            continue;
        }
        let row_with_i = if alpha > beta {
            Some(beta)
        } else if alpha == i as usize && beta == i as usize {
            Some(i as usize)
        } else {
            None
        };
        if let Some(b_row) = row_with_i {
            if b_row == 0 {
                continue;
            }
            let row = &t.rows()[b_row - 1];
            for (b, &e) in row.iter().enumerate() {
                if e == CellEntry(i) && (b_row < 2 || t.get(b_row - 2, b) != Some(CellEntry(-i))) {
                    return false;
                }
            }
        }
    }
    true
}

/// Symplectic standard tableaux: semistandard over `1̄<1<…<N̄<N` with every
/// entry of row `i` at least `ī`. The row condition only applies to rows `i ≤ N`.
pub fn enumerate_sp_tableaux(shape: &Partition, rank: usize) -> Vec<Tableau> {
    let alphabet = Alphabet::symplectic(rank);
    semistandard_fillings(shape, &alphabet, GroupTag::Sp)
        .into_iter()
        .filter(|t| {
            t.rows().iter().enumerate().take(rank).all(|(i, row)| {
                let floor = 2 * i;
                row.iter().all(|&e| alphabet.position(e).unwrap() >= floor)
            })
        })
        .collect()
}

/// Number of standard fillings of `shape` with `1..=m`, by the product formula
/// `m!·∏_{i<j}(l_i-l_j)/∏ l_i!`, `l_i = m_i + n - i`.
pub fn count_standard_tableaux(shape: &Partition) -> BigInt {
    let n = shape.len();
    let m = shape.weight();
    let l: Vec<i64> = (0..n).map(|i| (shape.parts()[i] + n - 1 - i) as i64).collect();
    let mut num = factorial(m as u64);
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(l[i] - l[j]);
        }
    }
    let den = l.iter().fold(BigInt::one(), |acc, &li| acc * factorial(li as u64));
    num / den
}

/// Number of semistandard tableaux of `shape` whose entries are distinct values from
/// `1..=n`: `C(n, m)` times the standard count.
pub fn count_distinct_entry_tableaux(shape: &Partition, n: usize) -> BigInt {
    crate::scalar::binomial(n as u64, shape.weight() as u64) * count_standard_tableaux(shape)
}

/// `μ = m!/t`, the constant with `c² = μ·c` for the Young symmetrizer of `shape`.
pub fn young_constant_mu(shape: &Partition) -> Scalar {
    Scalar::new(factorial(shape.weight() as u64), count_standard_tableaux(shape))
}

/// Triangular array `m_{μν}` = number of entries `≤ ν` in row `μ`, for `1 ≤ μ ≤ ν ≤ N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GelfandCounts {
    n: usize,
    counts: Vec<Vec<usize>>,
}

impl GelfandCounts {
    /// 1-based access; zero outside `1 ≤ μ ≤ ν ≤ N`.
    pub fn get(&self, mu: usize, nu: usize) -> usize {
        if mu == 0 || mu > nu || nu > self.n {
            return 0;
        }
        self.counts[mu - 1][nu - mu]
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Labels are alphabet positions plus one, so `N` is the alphabet dimension.
pub fn gelfand_counts(t: &Tableau, n: usize) -> Result<GelfandCounts> {
    let alphabet = t.group().alphabet(n);
    if !t.is_semistandard(&alphabet) {
        return invalid(format!("tableau {t} is not standard"));
    }
    let d = alphabet.dim();
    let counts = (1..=d)
        .map(|mu| {
            (mu..=d)
                .map(|nu| match t.rows().get(mu - 1) {
                    Some(row) => row
                        .iter()
                        .filter(|&&e| alphabet.position(e).unwrap() < nu)
                        .count(),
                    None => 0,
                })
                .collect()
        })
        .collect();
    Ok(GelfandCounts { n: d, counts })
}

/// `f = ∏(m_{μν} - m_{μ,ν-1})!`, the number of row permutations fixing the filling.
pub fn row_repetition_factor(t: &Tableau, n: usize) -> Result<BigInt> {
    let g = gelfand_counts(t, n)?;
    let mut f = BigInt::one();
    for mu in 1..=g.n() {
        for nu in mu..=g.n() {
            f *= factorial((g.get(mu, nu) - g.get(mu, nu - 1)) as u64);
        }
    }
    Ok(f)
}

pub fn count_as_usize(x: &BigInt) -> usize {
    x.to_usize().expect("count fits in usize")
}
