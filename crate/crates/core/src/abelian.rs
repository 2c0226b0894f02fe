//! Integer matrices, Smith normal form and abelianization.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{Generator, Word};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, entries: rows.iter().flatten().map(|&x| x.into()).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Rows of `self` followed by the rows of `other`.
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "dimension mismatch");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    // row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `u · m · v` is diagonal with the invariant factors `d` on the diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: Vec<BigInt>,
    pub rank: usize,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal matrix `u · m · v` should equal.
    pub fn diagonal(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (k, x) in self.d.iter().enumerate() {
            out[(k, k)] = x.clone();
        }
        out
    }

    /// Checks every invariant against the original matrix.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        self.u.mul(m).mul(&self.v) == self.diagonal()
            && self.d.iter().all(|x| x.is_positive())
            && self.d.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
            && self.u.determinant().abs().is_one()
            && self.v.determinant().abs().is_one()
    }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form by pivoting on the smallest nonzero entry.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let mut t = 0;
    while let Some((pi, pj)) = smallest_nonzero(&a, t) {
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // reduce the pivot column and row modulo the pivot
            let mut dirty = false;
            for i in t + 1..a.rows() {
                if !a[(i, t)].is_zero() {
                    let q = -a[(i, t)].div_floor(&a[(t, t)]);
                    a.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    dirty |= !a[(i, t)].is_zero();
                }
            }
            for j in t + 1..a.cols() {
                if !a[(t, j)].is_zero() {
                    let q = -a[(t, j)].div_floor(&a[(t, t)]);
                    a.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    dirty |= !a[(t, j)].is_zero();
                }
            }
            if dirty {
                // a remainder is now smaller than the pivot
                let (bi, bj) = smallest_in_cross(&a, t);
                a.swap_rows(t, bi);
                u.swap_rows(t, bi);
                a.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            let bad = (t + 1..a.rows())
                .flat_map(|i| (t + 1..a.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&a[(t, t)]));
            match bad {
                Some((i, _)) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let d = (0..t).map(|k| a[(k, k)].clone()).collect();
    SmithForm { d, rank: t, u, v }
}

fn smallest_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cells = (t..a.rows()).map(|i| (i, t)).chain((t + 1..a.cols()).map(|j| (t, j)));
    for (i, j) in cells {
        let x = &a[(i, j)];
        if !x.is_zero() && x.abs() < a[best].abs() {
            best = (i, j);
        }
    }
    best
}

/// `Z^free_rank ⊕ Z/t₁ ⊕ ⋯` with `1 < t₁ | t₂ | ⋯`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FGAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FGAbelianGroup {
    pub fn trivial() -> Self {
        FGAbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z^free_rank ⊕ ⨁ Z/c` for arbitrary orders `c` (0 means a copy of Z).
    pub fn from_cyclic_orders(free_rank: usize, orders: &[i64]) -> Self {
        let mut m = IntMatrix::zeros(orders.len(), orders.len());
        for (k, &c) in orders.iter().enumerate() {
            m[(k, k)] = BigInt::from(c);
        }
        let mut g = cokernel(&m);
        g.free_rank += free_rank;
        g
    }

    pub fn direct_sum(&self, other: &FGAbelianGroup) -> Self {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        let mut m = IntMatrix::zeros(orders.len(), orders.len());
        for (k, c) in orders.into_iter().enumerate() {
            m[(k, k)] = c;
        }
        let mut g = cokernel(&m);
        g.free_rank += self.free_rank + other.free_rank;
        g
    }

    pub fn power(&self, k: usize) -> Self {
        (0..k).fold(Self::trivial(), |acc, _| acc.direct_sum(self))
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of cyclic summands in the canonical decomposition.
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn to_json(&self) -> Value {
        let torsion: Vec<Value> =
            self.torsion.iter().map(|t| t.to_u64().map_or_else(|| json!(t.to_string()), |x| json!(x))).collect();
        json!({ "free_rank": self.free_rank, "torsion": torsion })
    }
}

pub fn has_torsion(g: &FGAbelianGroup) -> bool {
    g.has_torsion()
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" x "))
    }
}

/// Cokernel of `m : Z^cols → Z^rows`.
pub fn cokernel(m: &IntMatrix) -> FGAbelianGroup {
    let snf = smith_normal_form(m);
    FGAbelianGroup {
        free_rank: m.rows() - snf.rank,
        torsion: snf.d.into_iter().filter(|x| !x.is_one()).collect(),
    }
}

/// Rows are relators, columns generators; entries are exponent sums.
pub fn relation_matrix(p: &Presentation) -> IntMatrix {
    let index: HashMap<Generator, usize> = p.generators.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    let mut m = IntMatrix::zeros(p.relators.len(), p.generators.len());
    for (r, rel) in p.relators.iter().enumerate() {
        for l in rel.letters() {
            m[(r, index[&l.generator])] += l.exponent();
        }
    }
    m
}

/// Abelianization of the presented group.
pub fn h1(p: &Presentation) -> FGAbelianGroup {
    cokernel(&relation_matrix(p).transpose())
}

/// Class of `w` in the free abelian group on `generators`.
pub fn abelianize_word(w: &Word, generators: &[Generator]) -> Result<Vec<BigInt>> {
    let index: HashMap<Generator, usize> = generators.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    let mut v = vec![BigInt::zero(); generators.len()];
    for l in w.letters() {
        let k = index.get(&l.generator).ok_or(Error::UnknownGenerator(l.generator))?;
        v[*k] += l.exponent();
    }
    Ok(v)
}

/// Matrix of the induced map on generator classes: column `c` holds the
/// abelianized image of the c-th source generator in target coordinates.
pub fn hom_on_h1(images: &HashMap<Generator, Word>, source: &Presentation, target: &Presentation) -> Result<IntMatrix> {
    let mut m = IntMatrix::zeros(target.generators.len(), source.generators.len());
    for (c, g) in source.generators.iter().enumerate() {
        let w = images.get(g).ok_or(Error::MissingImage(*g))?;
        for (r, x) in abelianize_word(w, &target.generators)?.into_iter().enumerate() {
            m[(r, c)] = x;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{artin_presentation, element_theta, orbit_presentation};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, ints(&[1, 1, 1]));

        let m = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, -2]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, ints(&[1, 1, 2]));
        assert!(s.verify(&m));

        let z = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&z);
        assert_eq!(s.rank, 0);
        assert!(s.d.is_empty());
        assert!(s.verify(&z));
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        // diag(2, 3) has invariant factors (1, 6)
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, ints(&[1, 6]));
        assert!(s.verify(&m));
        let m = IntMatrix::from_rows(&[vec![4, 6, 0], vec![6, 4, 2], vec![0, 10, 14]]);
        let s = smith_normal_form(&m);
        assert!(s.verify(&m));
        assert_eq!(s.d.iter().product::<BigInt>().abs(), m.determinant().abs());
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).determinant(), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.determinant(), BigInt::from(4));
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(g, FGAbelianGroup { free_rank: 0, torsion: ints(&[2]) });
        let g = cokernel(&IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, -2]]));
        assert_eq!(g.to_string(), "Z/2");
        assert!(cokernel(&IntMatrix::zeros(0, 4)).is_trivial());
        assert_eq!(cokernel(&IntMatrix::zeros(3, 0)), FGAbelianGroup::free(3));
    }

    #[test]
    fn group_display_and_json() {
        let g = FGAbelianGroup::from_cyclic_orders(2, &[2, 3, 4]);
        assert_eq!(g.to_string(), "Z^2 x Z/2 x Z/12");
        assert_eq!(g.to_json(), json!({"free_rank": 2, "torsion": [2, 12]}));
        assert_eq!(FGAbelianGroup::trivial().to_string(), "0");
        assert_eq!(FGAbelianGroup::from_cyclic_orders(0, &[1, 0]).to_string(), "Z^1");
    }

    #[test]
    fn relation_matrices() {
        for n in 1..=4 {
            assert!(relation_matrix(&orbit_presentation(n).unwrap()).is_zero());
        }
        let p = orbit_presentation(2).unwrap();
        let theta = element_theta(2).unwrap();
        let q = p.quotient_by(&[theta.pow(2)]).unwrap();
        let m = relation_matrix(&q);
        assert_eq!(m.row(m.rows() - 1), ints(&[2, 2, 0, 0]).as_slice());
        assert_eq!(relation_matrix(&Presentation::new(vec![], vec![]).unwrap()).rows(), 0);
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1(&orbit_presentation(3).unwrap()), FGAbelianGroup::free(9));
        assert_eq!(h1(&artin_presentation(3).unwrap()), FGAbelianGroup::free(3));
        for n in 1..=3 {
            let q = orbit_presentation(n).unwrap().quotient_by(&[element_theta(n).unwrap().pow(2)]).unwrap();
            assert_eq!(h1(&q), FGAbelianGroup::from_cyclic_orders((n * n - 1) as usize, &[2]));
        }
    }
}
