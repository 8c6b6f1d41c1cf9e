//! Effective bases, intersection matrices and recovery of cycle classes from
//! witness degrees, `c(V) = M⁻¹ d(V)`, in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::grassmann::{SchubertIndex, SchubertPoset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabel {
    pub name: String,
    /// Dimension of the basis cycle.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    pub ambient_dim: usize,
    /// `grades[k]` lists the basis cycles of dimension `k`.
    pub grades: Vec<Vec<BasisLabel>>,
}

impl GradedBasis {
    pub fn new(ambient_dim: usize, grades: Vec<Vec<BasisLabel>>) -> Result<Self> {
        if grades.len() != ambient_dim + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} grades for ambient dimension {ambient_dim}",
                grades.len()
            )));
        }
        for (k, g) in grades.iter().enumerate() {
            for (i, l) in g.iter().enumerate() {
                if l.rank != k {
                    return Err(Error::InvalidParameter(format!("label {} has rank {} in grade {k}", l.name, l.rank)));
                }
                if g[..i].iter().any(|o| o.name == l.name) {
                    return Err(Error::InvalidParameter(format!("duplicate label {} in grade {k}", l.name)));
                }
            }
        }
        for k in 0..=ambient_dim {
            if grades[k].len() != grades[ambient_dim - k].len() {
                return Err(Error::InvalidParameter(format!(
                    "b_{k} = {} differs from b_{} = {}",
                    grades[k].len(),
                    ambient_dim - k,
                    grades[ambient_dim - k].len()
                )));
            }
        }
        Ok(GradedBasis { ambient_dim, grades })
    }

    pub fn betti(&self) -> Vec<usize> {
        self.grades.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, k: usize) -> Result<&[BasisLabel]> {
        self.grades
            .get(k)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::IndexOutOfRange(format!("grade {k} of {}", self.ambient_dim)))
    }
}

/// `M^(k)`: entry `(i, j)` is the degree of `[L_i^(n−k)]·[L_j^(k)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub grade: usize,
    entries: Vec<Vec<i64>>,
}

impl IntersectionMatrix {
    pub fn new(grade: usize, entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("intersection matrix must be square".into()));
        }
        Ok(IntersectionMatrix { grade, entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleClass {
    pub grade: usize,
    pub coeffs: Vec<BigRational>,
}

impl CycleClass {
    pub fn from_integers(grade: usize, coeffs: &[i64]) -> Self {
        CycleClass {
            grade,
            coeffs: coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector {
    pub grade: usize,
    pub degrees: Vec<i64>,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact solve of `M·c = d` by Gaussian elimination over ℚ.
pub fn class_from_degrees(m: &IntersectionMatrix, d: &DegreeVector) -> Result<CycleClass> {
    if m.grade != d.grade {
        return Err(Error::InvalidParameter(format!(
            "matrix grade {} but degree vector grade {}",
            m.grade, d.grade
        )));
    }
    let n = m.size();
    if d.degrees.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: d.degrees.len(),
        });
    }
    let mut a: Vec<Vec<BigRational>> = m
        .entries
        .iter()
        .zip(&d.degrees)
        .map(|(row, &rhs)| row.iter().map(|&x| rat(x)).chain(std::iter::once(rat(rhs))).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot).skip(col) {
                    *x -= p * &f;
                }
            }
        }
    }
    Ok(CycleClass {
        grade: m.grade,
        coeffs: a.into_iter().map(|row| row[n].clone()).collect(),
    })
}

/// `M·c`, exactly.
pub fn degrees_from_class(m: &IntersectionMatrix, c: &CycleClass) -> Vec<BigRational> {
    m.entries
        .iter()
        .map(|row| row.iter().zip(&c.coeffs).map(|(&x, y)| rat(x) * y).sum())
        .collect()
}

pub fn pairing_degree(m: &IntersectionMatrix, i: usize, j: usize) -> Result<i64> {
    m.entries
        .get(i)
        .and_then(|r| r.get(j))
        .copied()
        .ok_or_else(|| Error::IndexOutOfRange(format!("({i}, {j}) in a {0}x{0} matrix", m.size())))
}

/// True iff `M` is a permutation matrix, i.e. the basis is self-dual.
pub fn is_duality_basis(m: &IntersectionMatrix) -> bool {
    let n = m.size();
    let entries_ok = m.entries.iter().flatten().all(|&x| x == 0 || x == 1);
    let rows_ok = m.entries.iter().all(|r| r.iter().filter(|&&x| x == 1).count() == 1);
    let cols_ok = (0..n).all(|j| m.entries.iter().filter(|r| r[j] == 1).count() == 1);
    entries_ok && rows_ok && cols_ok
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Pn(usize),
    Product(usize, usize),
    BlowupP2,
    G14,
}

impl std::str::FromStr for Space {
    type Err = Error;

    /// `pn:N`, `product:M,N`, `blowup-p2`, `g14`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown space {s:?}"));
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "g14" => return Ok(Space::G14),
            "blowup-p2" | "blowup" => return Ok(Space::BlowupP2),
            _ => {}
        }
        if let Some(rest) = lower.strip_prefix("product:") {
            let (m, n) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(Space::Product(m.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?));
        }
        if let Some(n) = lower.strip_prefix("pn:").or_else(|| lower.strip_prefix('p')) {
            return n.parse().map(Space::Pn).map_err(|_| bad());
        }
        Err(bad())
    }
}

#[derive(Debug, Clone)]
pub struct BuiltinBasis {
    pub space: Space,
    pub basis: GradedBasis,
    /// `matrices[k]` is `M^(k)`.
    pub matrices: Vec<IntersectionMatrix>,
}

impl BuiltinBasis {
    pub fn matrix(&self, k: usize) -> Result<&IntersectionMatrix> {
        self.matrices
            .get(k)
            .ok_or_else(|| Error::IndexOutOfRange(format!("grade {k} of {}", self.basis.ambient_dim)))
    }
}

fn label(name: impl Into<String>, rank: usize) -> BasisLabel {
    BasisLabel {
        name: name.into(),
        rank,
    }
}

/// `M^(k)` from a pairing rule between grade-`(n−k)` and grade-`k` labels.
fn matrices_from_rule<F>(basis: &GradedBasis, rule: F) -> Vec<IntersectionMatrix>
where
    F: Fn(&BasisLabel, &BasisLabel) -> i64,
{
    let n = basis.ambient_dim;
    (0..=n)
        .map(|k| {
            let entries = basis.grades[n - k]
                .iter()
                .map(|li| basis.grades[k].iter().map(|lj| rule(li, lj)).collect())
                .collect();
            IntersectionMatrix { grade: k, entries }
        })
        .collect()
}

pub fn schubert_label(idx: SchubertIndex) -> String {
    format!("{}{}", idx.i(), idx.j())
}

pub fn builtin_basis(space: Space) -> Result<BuiltinBasis> {
    let (basis, matrices) = match space {
        Space::Pn(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter("P^0 has no proper cycles".into()));
            }
            let basis = GradedBasis::new(n, (0..=n).map(|k| vec![label(format!("L{k}"), k)]).collect())?;
            let m = matrices_from_rule(&basis, |_, _| 1);
            (basis, m)
        }
        Space::Product(m, n) => {
            if m == 0 || n == 0 {
                return Err(Error::InvalidParameter("product factors must be positive-dimensional".into()));
            }
            let grades = (0..=m + n)
                .map(|k| {
                    (0..=k.min(m))
                        .filter(|&a| k - a <= n)
                        .map(|a| label(format!("({a},{})", k - a), k))
                        .collect()
                })
                .collect();
            let basis = GradedBasis::new(m + n, grades)?;
            let parse = |l: &BasisLabel| -> (usize, usize) {
                let (a, b) = l.name.trim_matches(|c| c == '(' || c == ')').split_once(',').expect("label format");
                (a.parse().expect("label"), b.parse().expect("label"))
            };
            let mats = matrices_from_rule(&basis, |li, lj| {
                let (ai, bi) = parse(li);
                let (aj, bj) = parse(lj);
                i64::from(ai + aj == m && bi + bj == n)
            });
            (basis, mats)
        }
        Space::BlowupP2 => {
            let basis = GradedBasis::new(
                2,
                vec![vec![label("pt", 0)], vec![label("l", 1), label("E", 1)], vec![label("X", 2)]],
            )?;
            let mats = matrices_from_rule(&basis, |li, lj| match (li.name.as_str(), lj.name.as_str()) {
                ("l", "l") => 1,
                ("E", "E") => -1,
                ("l", "E") | ("E", "l") => 0,
                _ => 1,
            });
            (basis, mats)
        }
        Space::G14 => {
            let poset = SchubertPoset::new();
            let grades = (0..=6)
                .map(|k| {
                    poset
                        .elements_of_rank(k)
                        .into_iter()
                        .map(|idx| label(schubert_label(idx), k))
                        .collect()
                })
                .collect();
            let basis = GradedBasis::new(6, grades)?;
            let mats = matrices_from_rule(&basis, |li, lj| {
                let a: SchubertIndex = li.name.parse().expect("schubert label");
                let b: SchubertIndex = lj.name.parse().expect("schubert label");
                i64::from(a == b.dual())
            });
            (basis, mats)
        }
    };
    Ok(BuiltinBasis {
        space,
        basis,
        matrices,
    })
}

/// Product of two grade-3 classes on `G(1,P⁴)`, a multiple of the point class
/// `[X₀₁]`. The degree of `[X_α]·[X_β]` for complementary grades is the
/// pairing-matrix entry, so `[X₁₃]² = [X₀₄]² = [X₀₁]` and `[X₁₃]·[X₀₄] = 0`.
pub fn intersect_classes(basis: &BuiltinBasis, c1: &CycleClass, c2: &CycleClass) -> Result<CycleClass> {
    if basis.space != Space::G14 {
        return Err(Error::UnsupportedProduct("products are only stored for G(1,P4)".into()));
    }
    if c1.grade != 3 || c2.grade != 3 {
        return Err(Error::UnsupportedProduct(format!(
            "grades {} and {}; only grade 3 x grade 3 is supported",
            c1.grade, c2.grade
        )));
    }
    let m = basis.matrix(3)?;
    if c1.coeffs.len() != m.size() || c2.coeffs.len() != m.size() {
        return Err(Error::DimensionMismatch {
            expected: m.size(),
            got: c1.coeffs.len().min(c2.coeffs.len()),
        });
    }
    // grade-3 labels index both rows and columns of M^(3)
    let mut total = BigRational::zero();
    for (i, a) in c1.coeffs.iter().enumerate() {
        for (j, b) in c2.coeffs.iter().enumerate() {
            total += a * b * rat(m.entries[i][j]);
        }
    }
    Ok(CycleClass {
        grade: 0,
        coeffs: vec![total],
    })
}

/// `(numerator, denominator)` strings, denominator positive.
pub fn rational_strings(q: &BigRational) -> [String; 2] {
    let (n, d) = if q.denom().is_negative() {
        (-q.numer(), -q.denom())
    } else {
        (q.numer().clone(), q.denom().clone())
    };
    [n.to_string(), d.to_string()]
}

pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g14() -> BuiltinBasis {
        builtin_basis(Space::G14).unwrap()
    }

    #[test]
    fn blowup_recovers_exceptional_class() {
        let b = builtin_basis(Space::BlowupP2).unwrap();
        let m = b.matrix(1).unwrap();
        assert_eq!(m.entries(), &[vec![1, 0], vec![0, -1]]);
        let c = class_from_degrees(m, &DegreeVector { grade: 1, degrees: vec![0, -1] }).unwrap();
        assert_eq!(c, CycleClass::from_integers(1, &[0, 1]));
        assert!(!is_duality_basis(m));
    }

    #[test]
    fn projective_space_is_identity() {
        let b = builtin_basis(Space::Pn(4)).unwrap();
        assert_eq!(b.basis.betti(), vec![1; 5]);
        let c = class_from_degrees(b.matrix(2).unwrap(), &DegreeVector { grade: 2, degrees: vec![5] }).unwrap();
        assert_eq!(c, CycleClass::from_integers(2, &[5]));
        assert!(is_duality_basis(b.matrix(0).unwrap()));
    }

    #[test]
    fn g14_grade_three() {
        let b = g14();
        let names: Vec<_> = b.basis.grades[3].iter().map(|l| l.name.clone()).collect();
        assert_eq!(names, vec!["13", "04"]);
        let m = b.matrix(3).unwrap();
        assert!(is_duality_basis(m));
        let c = class_from_degrees(m, &DegreeVector { grade: 3, degrees: vec![4, 0] }).unwrap();
        assert_eq!(c, CycleClass::from_integers(3, &[4, 0]));
        let sq = intersect_classes(&b, &c, &c).unwrap();
        assert_eq!(sq, CycleClass::from_integers(0, &[16]));
    }

    #[test]
    fn g14_structure_constants() {
        let b = g14();
        let x13 = CycleClass::from_integers(3, &[1, 0]);
        let x04 = CycleClass::from_integers(3, &[0, 1]);
        let zero = CycleClass::from_integers(3, &[0, 0]);
        assert_eq!(intersect_classes(&b, &x13, &x04).unwrap(), CycleClass::from_integers(0, &[0]));
        assert_eq!(intersect_classes(&b, &x13, &x13).unwrap(), CycleClass::from_integers(0, &[1]));
        assert!(intersect_classes(&b, &zero, &zero).unwrap().is_zero());
        let x12 = CycleClass::from_integers(2, &[1, 0]);
        assert_eq!(intersect_classes(&b, &x12, &x13).unwrap_err().kind(), "UnsupportedProduct");
        let p = builtin_basis(Space::Pn(2)).unwrap();
        assert!(intersect_classes(&p, &x13, &x13).is_err());
    }

    #[test]
    fn pairing_lookups() {
        let b = builtin_basis(Space::BlowupP2).unwrap();
        let m = b.matrix(1).unwrap();
        assert_eq!(pairing_degree(m, 0, 0).unwrap(), 1);
        assert_eq!(pairing_degree(m, 1, 1).unwrap(), -1);
        assert_eq!(pairing_degree(m, 0, 1).unwrap(), 0);
        assert_eq!(pairing_degree(m, 2, 0).unwrap_err().kind(), "IndexOutOfRange");
        let p = builtin_basis(Space::Product(1, 1)).unwrap();
        let m = p.matrix(1).unwrap();
        let names: Vec<_> = p.basis.grades[1].iter().map(|l| l.name.clone()).collect();
        assert_eq!(names, vec!["(0,1)", "(1,0)"]);
        assert_eq!(m.entries(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(pairing_degree(m, 0, 1).unwrap(), 1);
        let one = IntersectionMatrix::new(0, vec![vec![1]]).unwrap();
        assert!(is_duality_basis(&one));
        assert_eq!(pairing_degree(&one, 0, 0).unwrap(), 1);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = IntersectionMatrix::new(1, vec![vec![1, 2], vec![2, 4]]).unwrap();
        let err = class_from_degrees(&m, &DegreeVector { grade: 1, degrees: vec![1, 1] }).unwrap_err();
        assert_eq!(err.kind(), "SingularMatrix");
    }

    #[test]
    fn rational_coefficients() {
        let m = IntersectionMatrix::new(1, vec![vec![2, 1], vec![1, 3]]).unwrap();
        let d = DegreeVector { grade: 1, degrees: vec![1, 0] };
        let c = class_from_degrees(&m, &d).unwrap();
        assert_eq!(rational_strings(&c.coeffs[0]), ["3".to_string(), "5".to_string()]);
        assert_eq!(rational_strings(&c.coeffs[1]), ["-1".to_string(), "5".to_string()]);
        assert_eq!(degrees_from_class(&m, &c), vec![rat(1), rat(0)]);
    }

    #[test]
    fn betti_symmetry_and_g14_ranks() {
        let poset = SchubertPoset::new();
        for space in [Space::Pn(3), Space::Product(2, 3), Space::BlowupP2, Space::G14] {
            let b = builtin_basis(space).unwrap();
            let betti = b.basis.betti();
            let n = b.basis.ambient_dim;
            for k in 0..=n {
                assert_eq!(betti[k], betti[n - k]);
                let m = b.matrix(k).unwrap();
                assert_eq!(m.size(), betti[k]);
            }
            if space == Space::G14 {
                let ranks: Vec<usize> = (0..=6).map(|k| poset.elements_of_rank(k).len()).collect();
                assert_eq!(betti, ranks);
            }
        }
    }

    #[test]
    fn space_parsing() {
        assert_eq!("g14".parse::<Space>().unwrap(), Space::G14);
        assert_eq!("blowup-p2".parse::<Space>().unwrap(), Space::BlowupP2);
        assert_eq!("pn:4".parse::<Space>().unwrap(), Space::Pn(4));
        assert_eq!("product:1,2".parse::<Space>().unwrap(), Space::Product(1, 2));
        assert!("torus".parse::<Space>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn recovery_is_exact(d in prop::collection::vec(-50i64..50, 2), k in 0usize..=6) {
                for space in [Space::BlowupP2, Space::G14, Space::Product(2, 2)] {
                    let b = builtin_basis(space).unwrap();
                    if k > b.basis.ambient_dim { continue; }
                    let m = b.matrix(k).unwrap();
                    let degrees: Vec<i64> = d.iter().cycle().take(m.size()).copied().collect();
                    let dv = DegreeVector { grade: k, degrees: degrees.clone() };
                    let c = class_from_degrees(m, &dv).unwrap();
                    let back: Vec<BigRational> = degrees_from_class(m, &c);
                    prop_assert_eq!(back, degrees.iter().map(|&x| rat(x)).collect::<Vec<_>>());
                    if is_duality_basis(m) {
                        // c_β = d_{β̂}: the permutation maps coefficients to degrees
                        for (j, cj) in c.coeffs.iter().enumerate() {
                            let i = (0..m.size()).find(|&i| m.entries()[i][j] == 1).unwrap();
                            prop_assert_eq!(cj.clone(), rat(degrees[i]));
                        }
                    }
                }
            }
        }
    }
}
