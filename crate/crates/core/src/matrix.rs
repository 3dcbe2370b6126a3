//! Dense rational vectors and matrices, plus the exact linear-algebra kernel.
//!
//! Elimination is fraction-free (Bareiss) on an integer copy of the input:
//! every row is scaled by the lcm of its denominators first, so intermediate
//! entries stay integral and the pivot sequence depends only on the input.
//! Pivots are the first nonzero entry in column order.

use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

pub type QVec = Vec<Rational>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims("row-major matrix data", rows * cols, data.len()));
        }
        Ok(Mat { rows, cols, data })
    }

    /// Builds from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<QVec>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::dims("matrix row", c, bad.len()));
        }
        Mat::from_row_major(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds from columns; every column must have the same length.
    pub fn from_cols(cols: Vec<QVec>) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if let Some(bad) = cols.iter().find(|col| col.len() != r) {
            return Err(Error::dims("matrix column", r, bad.len()));
        }
        let mut m = Mat::zeros(r, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, x) in col.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    /// Small integer matrices for tests and embedded data.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<QVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_cols(&self) -> Vec<QVec> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::dims("matrix product", self.cols, other.rows));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<QVec> {
        if self.cols != x.len() {
            return Err(Error::dims("matrix-vector product", self.cols, x.len()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn scale(&self, s: &Rational) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::input(format!(
                "matrix difference: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::dims("hstack", self.rows, other.rows));
        }
        let mut cols = self.to_cols();
        cols.extend(other.to_cols());
        if cols.is_empty() {
            return Ok(Mat::zeros(self.rows, 0));
        }
        Mat::from_cols(cols)
    }

    /// Rows `rows` and columns `cols` taken in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Zero-pads to `rows x cols`, keeping the existing block in the top-left.
    pub fn pad(&self, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..self.rows.min(rows) {
            for j in 0..self.cols.min(cols) {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::input(format!("inverse of non-square {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let ech = Echelon::new(self, Some(&Mat::identity(n)));
        if ech.pivots.len() < n {
            return Err(Error::input("matrix is singular"));
        }
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            cols.push(ech.back_substitute(j).expect("nonsingular system is consistent"));
        }
        Mat::from_cols(cols)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// JSON form: a list of columns, each a list of rational strings.
impl serde::Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.cols))?;
        for j in 0..self.cols {
            let col: Vec<String> = self.col(j).iter().map(crate::rational::format_rational).collect();
            seq.serialize_element(&col)?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for Mat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let cols = Vec::<serde_json::Value>::deserialize(d)?;
        let cols = cols
            .iter()
            .map(|c| match c {
                serde_json::Value::Array(xs) => xs.iter().map(crate::rational::serde_rational::from_value).collect(),
                other => Err(Error::input(format!("expected a matrix column, got {other}"))),
            })
            .collect::<Result<Vec<QVec>>>()
            .map_err(D::Error::custom)?;
        if cols.is_empty() {
            return Ok(Mat::zeros(0, 0));
        }
        Mat::from_cols(cols).map_err(D::Error::custom)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Rational], s: &Rational) -> QVec {
    a.iter().map(|x| x * s).collect()
}

pub fn vec_neg(a: &[Rational]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Row echelon form of `[A | B]` computed fraction-free, remembering which
/// columns of `A` carry pivots.
struct Echelon {
    /// Integer rows `[A | B]` after Bareiss elimination.
    rows: Vec<Vec<BigInt>>,
    a_cols: usize,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(a: &Mat, rhs: Option<&Mat>) -> Self {
        let b_cols = rhs.map_or(0, Mat::cols);
        let width = a.cols + b_cols;
        let mut rows: Vec<Vec<BigInt>> = (0..a.rows)
            .map(|i| {
                let mut r: QVec = a.row(i).to_vec();
                if let Some(b) = rhs {
                    r.extend_from_slice(b.row(i));
                }
                clear_denominators(&r)
            })
            .collect();

        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..a.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let (top, bottom) = rows.split_at_mut(r + 1);
            let pivot_row = &top[r];
            for row in bottom.iter_mut() {
                let factor = row[c].clone();
                for j in 0..width {
                    if j < c {
                        continue;
                    }
                    // Bareiss step: exact division by the previous pivot.
                    let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                    row[j] = v / &prev;
                }
            }
            prev = rows[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        Echelon { rows, a_cols: a.cols, pivots }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solves against right-hand column `k`; `None` when inconsistent. Free
    /// variables are set to zero.
    fn back_substitute(&self, k: usize) -> Option<QVec> {
        let rank = self.rank();
        let rhs = |i: usize| Rational::from_integer(self.rows[i][self.a_cols + k].clone());
        if (rank..self.rows.len()).any(|i| !self.rows[i][self.a_cols + k].is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.a_cols];
        for (i, &c) in self.pivots.iter().enumerate().rev() {
            let mut acc = rhs(i);
            for j in (c + 1)..self.a_cols {
                if !self.rows[i][j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(self.rows[i][j].clone()) * &x[j];
                }
            }
            x[c] = acc / Rational::from_integer(self.rows[i][c].clone());
        }
        Some(x)
    }
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Returns some `x` with `A x = b`, or `None` when the system is inconsistent.
pub fn solve_linear(a: &Mat, b: &[Rational]) -> Result<Option<QVec>> {
    if a.rows() != b.len() {
        return Err(Error::dims("solve_linear right-hand side", a.rows(), b.len()));
    }
    let rhs = Mat::from_row_major(b.len(), 1, b.to_vec())?;
    Ok(Echelon::new(a, Some(&rhs)).back_substitute(0))
}

pub fn rank(a: &Mat) -> usize {
    Echelon::new(a, None).rank()
}

/// Basis of `{x : A x = 0}`. Each vector has a free coordinate set to one and
/// is scaled so that its first nonzero entry is one. Empty iff `A` has full
/// column rank.
pub fn kernel_basis(a: &Mat) -> Vec<QVec> {
    let ech = Echelon::new(a, None);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Rational::zero(); n];
        x[f] = Rational::one();
        for (i, &c) in ech.pivots.iter().enumerate().rev() {
            let mut acc = Rational::zero();
            for j in (c + 1)..n {
                if !ech.rows[i][j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(ech.rows[i][j].clone()) * &x[j];
                }
            }
            x[c] = acc / Rational::from_integer(ech.rows[i][c].clone());
        }
        let lead = x.iter().find(|v| !v.is_zero()).cloned().expect("kernel vector is nonzero");
        basis.push(x.iter().map(|v| v / &lead).collect());
    }
    basis
}

/// Whether `v` has all entries zero.
pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Lexicographic comparison used for canonical ordering of point sets.
pub fn lex_cmp(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    a.cmp(b)
}

/// Sign of the first nonzero entry; `0` for the zero vector.
pub fn leading_sign(v: &[Rational]) -> i32 {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_positive() => 1,
        Some(_) => -1,
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn solve_identity() {
        let b = vec![int(1), rat(1, 2), int(-2)];
        assert_eq!(solve_linear(&Mat::identity(3), &b).unwrap(), Some(b));
    }

    #[test]
    fn solve_inconsistent() {
        let a = Mat::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve_linear(&a, &[int(1), int(2)]).unwrap(), None);
    }

    #[test]
    fn solve_diagonal() {
        let a = Mat::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            solve_linear(&a, &[int(1), int(1)]).unwrap(),
            Some(vec![rat(1, 2), rat(1, 3)])
        );
    }

    #[test]
    fn solve_dimension_mismatch() {
        assert!(matches!(solve_linear(&Mat::identity(2), &[int(1)]), Err(Error::Input(_))));
    }

    #[test]
    fn solve_needs_row_swap() {
        let a = Mat::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(solve_linear(&a, &[int(3), int(4)]).unwrap(), Some(vec![int(4), int(3)]));
    }

    #[test]
    fn kernel_of_sum_row() {
        let k = kernel_basis(&Mat::from_i64(&[&[1, 1, 1, 1]]));
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(v.iter().fold(Rational::zero(), |a, x| a + x).is_zero());
        }
        let k3 = kernel_basis(&Mat::from_i64(&[&[1, 1, 1]]));
        assert_eq!(k3, vec![vec![int(1), int(-1), int(0)], vec![int(1), int(0), int(-1)]]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&Mat::identity(2)).is_empty());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&Mat::identity(4)), 4);
        assert_eq!(rank(&Mat::zeros(3, 3)), 0);
        // columns u2, u3, u4 with u_k = e1 - e_k
        let u = Mat::from_i64(&[&[1, 1, 1], &[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        assert_eq!(rank(&u), 3);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Mat::from_row_major(2, 2, vec![rat(1, 2), int(3), int(-1), rat(2, 3)]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    fn small_mat(rows: usize, cols: usize) -> impl proptest::strategy::Strategy<Value = Mat> {
        proptest::collection::vec((-3i64..=3, 1i64..=2), rows * cols).prop_map(move |v| {
            Mat::from_row_major(rows, cols, v.into_iter().map(|(p, q)| rat(p, q)).collect()).unwrap()
        })
    }

    use proptest::prelude::*;

    proptest::proptest! {
        #[test]
        fn solve_recovers_consistent_rhs(
            (a, x) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
                (small_mat(r, c), proptest::collection::vec((-4i64..=4).prop_map(int), c))
            })
        ) {
            let b = a.mul_vec(&x).unwrap();
            let y = solve_linear(&a, &b).unwrap().expect("consistent system");
            proptest::prop_assert_eq!(a.mul_vec(&y).unwrap(), b);
        }

        #[test]
        fn rank_nullity(a in (1usize..5, 1usize..6).prop_flat_map(|(r, c)| small_mat(r, c))) {
            let k = kernel_basis(&a);
            proptest::prop_assert_eq!(rank(&a) + k.len(), a.cols());
            for v in &k {
                proptest::prop_assert!(is_zero_vec(&a.mul_vec(v).unwrap()));
                proptest::prop_assert_eq!(leading_sign(v), 1);
            }
            if !k.is_empty() {
                proptest::prop_assert_eq!(rank(&Mat::from_cols(k.clone()).unwrap()), k.len());
            }
        }

        #[test]
        fn rank_is_transpose_invariant(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| small_mat(r, c))) {
            proptest::prop_assert_eq!(rank(&a), rank(&a.transpose()));
        }
    }
}
