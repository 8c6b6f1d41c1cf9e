//! Schubert indices `(i, j)`, `0 ≤ i < j ≤ 4`, for lines in P⁴ and their
//! Bruhat order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u8; 2]", into = "[u8; 2]")]
pub struct SchubertIndex {
    i: u8,
    j: u8,
}

impl SchubertIndex {
    pub fn new(i: u8, j: u8) -> Result<Self> {
        if i < j && j <= 4 {
            Ok(SchubertIndex { i, j })
        } else {
            Err(Error::IndexOutOfRange(format!("({i}, {j}) needs 0 <= i < j <= 4")))
        }
    }

    pub fn i(self) -> u8 {
        self.i
    }

    pub fn j(self) -> u8 {
        self.j
    }

    /// Dimension of the Schubert variety.
    pub fn rank(self) -> usize {
        (self.i + self.j - 1) as usize
    }

    pub fn dual(self) -> Self {
        SchubertIndex {
            i: 4 - self.j,
            j: 4 - self.i,
        }
    }

    /// Containment `X_self ⊂ X_other`.
    pub fn le(self, other: Self) -> bool {
        self.i <= other.i && self.j <= other.j
    }

    /// All ten indices by rank, larger `i` first within a rank.
    pub fn all() -> Vec<Self> {
        let mut v: Vec<Self> = (0..5u8)
            .flat_map(|j| (0..j).map(move |i| SchubertIndex { i, j }))
            .collect();
        v.sort_by_key(|x| (x.rank(), std::cmp::Reverse(x.i)));
        v
    }
}

impl fmt::Display for SchubertIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.i, self.j)
    }
}

impl FromStr for SchubertIndex {
    type Err = Error;

    /// Accepts `13` or `1,3`.
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::IndexOutOfRange(format!("bad Schubert index {s:?}")))?;
        match digits.as_slice() {
            [i, j] => SchubertIndex::new(*i, *j),
            _ => Err(Error::IndexOutOfRange(format!("bad Schubert index {s:?}"))),
        }
    }
}

impl TryFrom<[u8; 2]> for SchubertIndex {
    type Error = Error;

    fn try_from(v: [u8; 2]) -> Result<Self> {
        SchubertIndex::new(v[0], v[1])
    }
}

impl From<SchubertIndex> for [u8; 2] {
    fn from(x: SchubertIndex) -> Self {
        [x.i, x.j]
    }
}

#[derive(Debug, Clone)]
pub struct SchubertPoset {
    elements: Vec<SchubertIndex>,
    covers: Vec<(SchubertIndex, SchubertIndex)>,
}

impl Default for SchubertPoset {
    fn default() -> Self {
        Self::new()
    }
}

impl SchubertPoset {
    pub fn new() -> Self {
        let elements = SchubertIndex::all();
        let mut covers = Vec::new();
        for &a in &elements {
            for &b in &elements {
                if a != b && a.le(b) && b.rank() == a.rank() + 1 {
                    covers.push((a, b));
                }
            }
        }
        SchubertPoset { elements, covers }
    }

    pub fn elements(&self) -> &[SchubertIndex] {
        &self.elements
    }

    /// Pairs `(a, b)` with `b` covering `a`.
    pub fn covers(&self) -> &[(SchubertIndex, SchubertIndex)] {
        &self.covers
    }

    pub fn elements_of_rank(&self, k: usize) -> Vec<SchubertIndex> {
        self.elements.iter().copied().filter(|x| x.rank() == k).collect()
    }

    pub fn rank_counts(&self) -> Vec<usize> {
        (0..=6).map(|k| self.elements_of_rank(k).len()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str) -> SchubertIndex {
        s.parse().unwrap()
    }

    #[test]
    fn ranks_and_duals() {
        assert_eq!(idx("34").rank(), 6);
        assert_eq!(idx("13").dual(), idx("13"));
        assert_eq!(idx("04").dual(), idx("04"));
        assert_eq!(idx("01").dual(), idx("34"));
        assert!(idx("01").le(idx("34")));
        assert!(!idx("04").le(idx("13")));
        assert!(SchubertIndex::new(2, 2).is_err());
        assert!(SchubertIndex::new(1, 5).is_err());
        assert_eq!(idx("1,3").to_string(), "13");
    }

    #[test]
    fn poset_shape() {
        let p = SchubertPoset::new();
        assert_eq!(p.elements().len(), 10);
        assert_eq!(p.rank_counts(), vec![1, 1, 2, 2, 2, 1, 1]);
        assert_eq!(p.elements_of_rank(3), vec![idx("13"), idx("04")]);
        // Bruhat order on G(2,5): 01<02<{12,03}<{13,04}<{23,14}<24<34
        assert_eq!(p.covers().len(), 12);
        assert!(p.covers().contains(&(idx("12"), idx("13"))));
        assert!(!p.covers().contains(&(idx("12"), idx("04"))));
    }

    #[test]
    fn dual_is_rank_complementary_involution() {
        for a in SchubertIndex::all() {
            assert_eq!(a.dual().dual(), a);
            assert_eq!(a.rank() + a.dual().rank(), 6);
        }
    }

    #[test]
    fn serde_as_pair() {
        let s = serde_json::to_string(&idx("13")).unwrap();
        assert_eq!(s, "[1,3]");
        assert!(serde_json::from_str::<SchubertIndex>("[3,1]").is_err());
    }
}
