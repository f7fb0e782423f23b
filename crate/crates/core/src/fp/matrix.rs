use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{Prime, Subspace};

/// Dense matrix over a prime field, row-major.
///
/// Entries are stored as residues in `[0, p)`. Matrices act on column vectors, so
/// column `j` holds the image of the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Full solution set of `A x = b`: `particular + kernel`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<u8>,
    pub kernel: Subspace,
}

impl FpMatrix {
    pub fn new(p: Prime, rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x as u32 >= p.get()) {
            return Err(Error::EntryOutOfRange {
                value: bad as u32,
                p: p.get(),
            });
        }
        Ok(FpMatrix {
            p,
            rows,
            cols,
            data: entries,
        })
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&x| p.reduce(x)))
            .collect();
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_raw(p: Prime, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    pub fn from_fn(p: Prime, rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(p.reduce(f(i, j)));
            }
        }
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u8>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("column length".into()));
        }
        Ok(FpMatrix::from_fn(p, rows, columns.len(), |i, j| {
            columns[j][i] as i64
        }))
    }

    pub fn zero(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        FpMatrix::from_fn(p, n, n, |i, j| (i == j) as i64)
    }

    pub fn scalar(p: Prime, n: usize, c: u8) -> Self {
        FpMatrix::from_fn(p, n, n, |i, j| if i == j { c as i64 } else { 0 })
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn entries(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = self.p.reduce(v);
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn check_prime(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_prime(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &FpMatrix) -> FpMatrix {
        let p = self.p.get();
        let mut data = vec![0u8; self.rows * other.cols];
        for i in 0..self.rows {
            let out = &mut data[i * other.cols..(i + 1) * other.cols];
            let mut acc = vec![0u32; other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k) as u32;
                if a != 0 {
                    for (s, &b) in acc.iter_mut().zip(other.row(k)) {
                        *s += a * b as u32;
                    }
                }
            }
            for (o, s) in out.iter_mut().zip(acc) {
                *o = (s % p) as u8;
            }
        }
        FpMatrix::from_raw(self.p, self.rows, other.cols, data)
    }

    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let p = self.p.get();
        Ok((0..self.rows)
            .map(|i| {
                let s: u32 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u32 * b as u32)
                    .sum();
                (s % p) as u8
            })
            .collect())
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_prime(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.p.add(a, b))
            .collect();
        Ok(FpMatrix::from_raw(self.p, self.rows, self.cols, data))
    }

    pub fn scale(&self, c: u8) -> FpMatrix {
        let data = self.data.iter().map(|&a| self.p.mul(a, c)).collect();
        FpMatrix::from_raw(self.p, self.rows, self.cols, data)
    }

    pub fn transpose(&self) -> FpMatrix {
        FpMatrix::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i) as i64)
    }

    pub fn pow(&self, mut e: u64) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u8))
    }

    /// Row-reduces a copy in place and returns it with its pivot columns.
    fn rref(&self) -> (Vec<u8>, Vec<usize>) {
        let mut m = self.data.clone();
        let pivots = rref_in_place(self.p, &mut m, self.rows, self.cols, self.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<u8> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let p = self.p;
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = 1u8;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| m[r * n + c] != 0) else {
                return Ok(0);
            };
            if r != c {
                for j in 0..n {
                    m.swap(r * n + j, c * n + j);
                }
                det = p.neg(det);
            }
            let piv = m[c * n + c];
            det = p.mul(det, piv);
            let inv = p.inv(piv).expect("nonzero pivot");
            for r in c + 1..n {
                let f = p.mul(m[r * n + c], inv);
                if f != 0 {
                    for j in c..n {
                        m[r * n + j] = p.sub(m[r * n + j], p.mul(f, m[c * n + j]));
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        self.try_inverse().ok_or(Error::SingularMatrix)
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn try_inverse(&self) -> Option<FpMatrix> {
        let n = self.rows;
        let w = 2 * n;
        let mut aug = vec![0u8; n * w];
        for i in 0..n {
            aug[i * w..i * w + n].copy_from_slice(self.row(i));
            aug[i * w + n + i] = 1;
        }
        let pivots = rref_in_place(self.p, &mut aug, n, w, n);
        if pivots.len() < n {
            return None;
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            data.extend_from_slice(&aug[i * w + n..(i + 1) * w]);
        }
        Some(FpMatrix::from_raw(self.p, n, n, data))
    }

    /// Right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (m, pivots) = self.rref();
        kernel_from_rref(self.p, &m, self.cols, &pivots)
    }

    /// Solves `A x = b`, returning every solution as `particular + kernel`, or `None`
    /// when the system is inconsistent.
    pub fn solve_affine(&self, b: &[u8]) -> Result<Option<AffineSolution>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let w = self.cols + 1;
        let mut aug = vec![0u8; self.rows * w];
        for i in 0..self.rows {
            aug[i * w..i * w + self.cols].copy_from_slice(self.row(i));
            aug[i * w + self.cols] = b[i] % self.p.get() as u8;
        }
        let pivots = rref_in_place(self.p, &mut aug, self.rows, w, self.cols);
        // inconsistent iff some zero row carries a nonzero constant
        for i in pivots.len()..self.rows {
            if aug[i * w + self.cols] != 0 {
                return Ok(None);
            }
        }
        let mut particular = vec![0u8; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            particular[c] = aug[i * w + self.cols];
        }
        let mut coef = vec![0u8; self.rows * self.cols];
        for i in 0..self.rows {
            coef[i * self.cols..(i + 1) * self.cols].copy_from_slice(&aug[i * w..i * w + self.cols]);
        }
        Ok(Some(AffineSolution {
            particular,
            kernel: kernel_from_rref(self.p, &coef, self.cols, &pivots),
        }))
    }

    /// Solves `A X = B` column by column. The kernel describes the freedom in each column.
    pub fn solve_matrix(&self, rhs: &FpMatrix) -> Result<Option<(FpMatrix, Subspace)>> {
        self.check_prime(rhs)?;
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch("solve_matrix row counts".into()));
        }
        let mut columns = Vec::with_capacity(rhs.cols);
        let mut kernel = None;
        for j in 0..rhs.cols {
            match self.solve_affine(&rhs.column(j))? {
                Some(sol) => {
                    columns.push(sol.particular);
                    kernel = Some(sol.kernel);
                }
                None => return Ok(None),
            }
        }
        let kernel = kernel.unwrap_or_else(|| self.kernel());
        Ok(Some((FpMatrix::from_columns(self.p, self.cols, &columns)?, kernel)))
    }
}

/// In-place reduced row echelon form over the first `pivot_cols` columns of a
/// `rows x cols` row-major buffer. Returns the pivot columns.
pub(crate) fn rref_in_place(
    p: Prime,
    m: &mut [u8],
    rows: usize,
    cols: usize,
    pivot_cols: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| m[k * cols + c] != 0) else {
            continue;
        };
        if k != r {
            for j in 0..cols {
                m.swap(k * cols + j, r * cols + j);
            }
        }
        let inv = p.inv(m[r * cols + c]).expect("nonzero pivot");
        if inv != 1 {
            for j in c..cols {
                m[r * cols + j] = p.mul(m[r * cols + j], inv);
            }
        }
        for k in 0..rows {
            if k == r {
                continue;
            }
            let f = m[k * cols + c];
            if f != 0 {
                for j in c..cols {
                    m[k * cols + j] = p.sub(m[k * cols + j], p.mul(f, m[r * cols + j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_from_rref(p: Prime, m: &[u8], cols: usize, pivots: &[usize]) -> Subspace {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let vectors = free.iter().map(|&f| {
        let mut v = vec![0u8; cols];
        v[f] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = p.neg(m[i * cols + f]);
        }
        v
    });
    Subspace::span(p, cols, vectors).expect("kernel vectors have ambient length")
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Canonical JSON shape `{"p", "rows", "cols", "entries"}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl Serialize for FpMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            p: self.p.get(),
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|&x| x as u32).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FpMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = MatrixJson::deserialize(d)?;
        let p = Prime::new(j.p).map_err(D::Error::custom)?;
        if let Some(&bad) = j.entries.iter().find(|&&x| x >= p.get()) {
            return Err(D::Error::custom(Error::EntryOutOfRange {
                value: bad,
                p: p.get(),
            }));
        }
        let entries = j.entries.into_iter().map(|x| x as u8).collect();
        FpMatrix::new(p, j.rows, j.cols, entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Prime {
        Prime::TWO
    }

    fn f5() -> Prime {
        Prime::new(5).unwrap()
    }

    #[test]
    fn products() {
        let m = FpMatrix::from_rows(Prime::new(3).unwrap(), &[[1, 2, 0], [0, 1, 1], [2, 2, 2]])
            .unwrap();
        let i3 = FpMatrix::identity(m.prime(), 3);
        assert_eq!(i3.mul(&m).unwrap(), m);

        let u = FpMatrix::from_rows(f2(), &[[1, 1], [0, 1]]).unwrap();
        assert!(u.mul(&u).unwrap().is_identity());

        let a = FpMatrix::from_rows(f5(), &[[2, 0], [0, 1]]).unwrap();
        let b = FpMatrix::from_rows(f5(), &[[3, 0], [0, 1]]).unwrap();
        assert!(a.mul(&b).unwrap().is_identity());
    }

    #[test]
    fn product_errors() {
        let a = FpMatrix::identity(f2(), 2);
        let b = FpMatrix::identity(f5(), 2);
        assert!(matches!(a.mul(&b), Err(Error::PrimeMismatch(2, 5))));
        let c = FpMatrix::zero(f2(), 3, 1);
        assert!(matches!(a.mul(&c), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn inverses() {
        assert!(FpMatrix::identity(f2(), 3).inverse().unwrap().is_identity());
        let swap = FpMatrix::from_rows(f2(), &[[0, 1], [1, 0]]).unwrap();
        assert_eq!(swap.inverse().unwrap(), swap);
        let a = FpMatrix::from_rows(f5(), &[[2, 0], [0, 1]]).unwrap();
        assert_eq!(
            a.inverse().unwrap(),
            FpMatrix::from_rows(f5(), &[[3, 0], [0, 1]]).unwrap()
        );
        let sing = FpMatrix::from_rows(f2(), &[[1, 1], [1, 1]]).unwrap();
        assert!(matches!(sing.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn rank_kernel_solve() {
        assert_eq!(FpMatrix::zero(f5(), 3, 4).rank(), 0);
        assert_eq!(FpMatrix::identity(f5(), 4).kernel().dim(), 0);

        let a = FpMatrix::from_rows(f2(), &[[1, 1]]).unwrap();
        let sol = a.solve_affine(&[0]).unwrap().unwrap();
        assert_eq!(sol.particular, vec![0, 0]);
        assert_eq!(sol.kernel, Subspace::span(f2(), 2, [[1u8, 1]]).unwrap());

        let b = FpMatrix::from_rows(f2(), &[[1, 0], [1, 0]]).unwrap();
        assert!(b.solve_affine(&[1, 0]).unwrap().is_none());
    }

    #[test]
    fn determinant() {
        let a = FpMatrix::from_rows(f5(), &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(a.det().unwrap(), f5().reduce(4 - 6));
        let swap = FpMatrix::from_rows(f5(), &[[0, 1], [1, 0]]).unwrap();
        assert_eq!(swap.det().unwrap(), 4);
    }

    #[test]
    fn json_encoding_is_canonical() {
        let a = FpMatrix::from_rows(f5(), &[[2, 0], [1, 4]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"p":5,"rows":2,"cols":2,"entries":[2,0,1,4]}"#);
        let back: FpMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<FpMatrix>(r#"{"p":5,"rows":1,"cols":1,"entries":[5]}"#)
            .is_err());
        assert!(serde_json::from_str::<FpMatrix>(r#"{"p":6,"rows":1,"cols":1,"entries":[1]}"#)
            .is_err());
    }
}
