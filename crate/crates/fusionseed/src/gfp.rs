//! Exact arithmetic and linear algebra over a prime field `F_p`, `3 <= p <= 97`.
//!
//! Vectors are column vectors; a matrix `g` acts by `v -> g * v`. Subspaces
//! are stored through a basis in reduced row-echelon form, so two subspaces
//! are equal exactly when their stored bases are equal byte for byte.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfpError {
    #[error("{0} is not an odd prime in 3..=97")]
    NotPrime(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
}

/// An odd prime `p <= 97` with a precomputed reduction constant.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime {
    p: u32,
    // ceil(2^64 / p), for branchless reduction of 32-bit values
    magic: u64,
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime({})", self.p)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

impl Prime {
    pub fn new(p: u32) -> Result<Self, GfpError> {
        if !(3..=97).contains(&p) || p % 2 == 0 || (3..p).take_while(|d| d * d <= p).any(|d| p % d == 0)
        {
            return Err(GfpError::NotPrime(p));
        }
        Ok(Prime { p, magic: u64::MAX / p as u64 + 1 })
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: u32) -> u8 {
        let low = self.magic.wrapping_mul(x as u64);
        ((low as u128 * self.p as u128) >> 64) as u8
    }

    pub fn reduce_i64(self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        let s = a as u32 + b as u32;
        if s >= self.p {
            (s - self.p) as u8
        } else {
            s as u8
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            (a as u32 + self.p - b as u32) as u8
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            (self.p - a as u32) as u8
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        self.reduce(a as u32 * b as u32)
    }

    pub fn pow(self, a: u8, mut e: u64) -> u8 {
        let mut base = a;
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order_of(self, a: u8) -> u32 {
        assert!(a != 0);
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Smallest generator of the cyclic group `F_p^x`.
    pub fn primitive_root(self) -> u8 {
        (2..self.p as u8).find(|&a| self.order_of(a) == self.p - 1).expect("F_p^x is cyclic")
    }

    pub fn is_square(self, a: u8) -> bool {
        a != 0 && self.pow(a, ((self.p - 1) / 2) as u64) == 1
    }

    /// Nonzero residues `1..p`.
    pub fn units(self) -> impl Iterator<Item = u8> {
        1..self.p as u8
    }

    /// Discrete logarithm of `a` to the base `primitive_root()`.
    pub fn log(self, a: u8) -> u32 {
        let g = self.primitive_root();
        let mut x = 1u8;
        for k in 0..self.p - 1 {
            if x == a {
                return k;
            }
            x = self.mul(x, g);
        }
        panic!("log of zero")
    }
}

/// Dense matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix<F_{}>[", self.p)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    /// Builds a matrix from raw row-major residues; entries must already be reduced.
    pub fn from_data(p: Prime, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length");
        debug_assert!(data.iter().all(|&x| (x as u32) < p.value()));
        FpMatrix { p, rows, cols, data }
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<Self, GfpError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(GfpError::DimensionMismatch("ragged rows".into()));
            }
            data.extend(r.iter().map(|&x| p.reduce_i64(x)));
        }
        Ok(FpMatrix { p, rows: nrows, cols: ncols, data })
    }

    pub fn zero(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        Self::scalar(p, n, 1)
    }

    pub fn scalar(p: Prime, n: usize, s: u8) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = s;
        }
        m
    }

    pub fn diagonal(p: Prime, diag: &[u8]) -> Self {
        let n = diag.len();
        let mut m = Self::zero(p, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Permutation matrix sending basis vector `e_i` to `e_{perm[i]}`.
    pub fn permutation(p: Prime, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(p, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.data[j * n + i] = 1;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: Prime, n: usize, cols: &[Vec<u8>]) -> Self {
        let mut m = Self::zero(p, n, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), n);
            for r in 0..n {
                m.data[r * cols.len() + c] = v[r];
            }
        }
        m
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
    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u8) {
        self.data[r * self.cols + c] = x;
    }
    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        assert_eq!(self.p, other.p, "matrix product prime");
        let mut out = FpMatrix::zero(self.p, self.rows, other.cols);
        mul_into(self.p, &self.data, &other.data, self.rows, self.cols, other.cols, &mut out.data);
        out
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let s: u32 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
                self.p.reduce(s)
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.p.add(a, b)).collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.p.sub(a, b)).collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: u8) -> FpMatrix {
        let data = self.data.iter().map(|&a| self.p.mul(a, s)).collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> FpMatrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let x = m.get(i, i);
            m.set(i, i, self.p.sub(x, 1));
        }
        m
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() == Some(1)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// The scalar `s` if `self = s * I`.
    pub fn is_scalar(&self) -> Option<u8> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let s = if n == 0 { 1 } else { self.data[0] };
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { s } else { 0 };
                if self.data[r * n + c] != want {
                    return None;
                }
            }
        }
        Some(s)
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&FpMatrix::identity(self.p, n));
        let (r, rank) = rref(&aug);
        if rank < n || (0..n).any(|i| r.get(i, i) != 1) {
            return None;
        }
        let mut inv = FpMatrix::zero(self.p, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&r.row(i)[n..]);
        }
        Some(inv)
    }

    /// Multiplicative order of an invertible square matrix.
    pub fn order(&self) -> u64 {
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut m = FpMatrix::zero(self.p, self.rows, cols);
        for r in 0..self.rows {
            m.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            m.data[r * cols + self.cols..(r + 1) * cols].copy_from_slice(other.row(r));
        }
        m
    }

    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &FpMatrix) -> FpMatrix {
        let mut m = FpMatrix::zero(self.p, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    /// Kronecker product, with `(a ⊗ b)[(i,k),(j,l)] = a[i,j] b[k,l]`.
    pub fn kron(&self, other: &FpMatrix) -> FpMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = FpMatrix::zero(self.p, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m.set(i * other.rows + k, j * other.cols + l, self.p.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        m
    }

    /// Columns `cols` as a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> FpMatrix {
        let mut m = FpMatrix::zero(self.p, self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                m.set(r, k, self.get(r, c));
            }
        }
        m
    }
}

/// `out = a * b` for raw row-major buffers, `a` is `n x k`, `b` is `k x m`.
#[inline]
pub(crate) fn mul_into(p: Prime, a: &[u8], b: &[u8], n: usize, k: usize, m: usize, out: &mut [u8]) {
    let mut acc = [0u32; 128];
    if m <= acc.len() && k <= 400 {
        for i in 0..n {
            let acc = &mut acc[..m];
            acc.iter_mut().for_each(|x| *x = 0);
            for t in 0..k {
                let x = a[i * k + t] as u32;
                if x == 0 {
                    continue;
                }
                let brow = &b[t * m..(t + 1) * m];
                for (s, &y) in acc.iter_mut().zip(brow) {
                    *s += x * y as u32;
                }
            }
            for (o, &s) in out[i * m..(i + 1) * m].iter_mut().zip(acc.iter()) {
                *o = p.reduce(s);
            }
        }
    } else {
        for i in 0..n {
            for j in 0..m {
                let mut s = 0u64;
                for t in 0..k {
                    s += a[i * k + t] as u64 * b[t * m + j] as u64;
                }
                out[i * m + j] = (s % p.value() as u64) as u8;
            }
        }
    }
}

/// Reduced row-echelon form and rank.
pub fn rref(m: &FpMatrix) -> (FpMatrix, usize) {
    let mut r = m.clone();
    let rank = rref_in_place(&mut r);
    (r, rank)
}

fn rref_in_place(m: &mut FpMatrix) -> usize {
    let p = m.p;
    let (rows, cols) = (m.rows, m.cols);
    let mut pivot_row = 0;
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(sel) = (pivot_row..rows).find(|&r| m.data[r * cols + c] != 0) else {
            continue;
        };
        if sel != pivot_row {
            for k in 0..cols {
                m.data.swap(sel * cols + k, pivot_row * cols + k);
            }
        }
        let inv = p.inv(m.data[pivot_row * cols + c]);
        if inv != 1 {
            for k in c..cols {
                let x = m.data[pivot_row * cols + k];
                m.data[pivot_row * cols + k] = p.mul(x, inv);
            }
        }
        for r in 0..rows {
            if r == pivot_row {
                continue;
            }
            let f = m.data[r * cols + c];
            if f == 0 {
                continue;
            }
            let nf = p.value() - f as u32;
            for k in c..cols {
                let piv = m.data[pivot_row * cols + k] as u32;
                let cur = m.data[r * cols + k] as u32;
                m.data[r * cols + k] = p.reduce(cur + nf * piv);
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

/// Pivot columns of a matrix already in reduced row-echelon form.
fn pivots(r: &FpMatrix, rank: usize) -> Vec<usize> {
    (0..rank).map(|i| r.row(i).iter().position(|&x| x != 0).expect("nonzero pivot row")).collect()
}

/// `ker(m) = { v : m v = 0 }`.
pub fn kernel_basis(m: &FpMatrix) -> Subspace {
    let p = m.p;
    let n = m.cols;
    let (r, rank) = rref(m);
    let piv = pivots(&r, rank);
    let mut is_pivot = vec![false; n];
    for &c in &piv {
        is_pivot[c] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u8; n];
        v[free] = 1;
        for (i, &pc) in piv.iter().enumerate() {
            v[pc] = p.neg(r.get(i, free));
        }
        vectors.push(v);
    }
    Subspace::span(p, n, &vectors)
}

/// Column space of `m`.
pub fn image_basis(m: &FpMatrix) -> Subspace {
    let t = m.transpose();
    Subspace::from_row_matrix(t)
}

/// Solve `m x = rhs`; `None` if inconsistent.
pub fn solve(m: &FpMatrix, rhs: &[u8]) -> Result<Option<Vec<u8>>, GfpError> {
    if rhs.len() != m.rows {
        return Err(GfpError::DimensionMismatch(format!("rhs {} vs rows {}", rhs.len(), m.rows)));
    }
    let col = FpMatrix::from_columns(m.p, m.rows, &[rhs.to_vec()]);
    let (r, rank) = rref(&m.hstack(&col));
    let piv = pivots(&r, rank);
    if piv.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![0u8; m.cols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = r.get(i, m.cols);
    }
    Ok(Some(x))
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, GfpError> {
    a.check_compatible(b)?;
    Ok(a.intersect(b))
}

pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace, GfpError> {
    a.check_compatible(b)?;
    Ok(a.sum(b))
}

/// Whether `a` contains `b`.
pub fn contains(a: &Subspace, b: &Subspace) -> Result<bool, GfpError> {
    a.check_compatible(b)?;
    Ok(a.contains(b))
}

/// A subspace of `F_p^n`, held as a canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: FpMatrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in F_{}^{}: {:?})", self.dim(), self.basis.p, self.basis.cols, self.basis)
    }
}

impl Subspace {
    pub fn zero(p: Prime, n: usize) -> Self {
        Subspace { basis: FpMatrix::zero(p, 0, n) }
    }

    pub fn full(p: Prime, n: usize) -> Self {
        Subspace { basis: FpMatrix::identity(p, n) }
    }

    pub fn span(p: Prime, n: usize, vectors: &[Vec<u8>]) -> Self {
        let mut data = Vec::with_capacity(vectors.len() * n);
        for v in vectors {
            assert_eq!(v.len(), n, "vector length");
            data.extend_from_slice(v);
        }
        Self::from_row_matrix(FpMatrix::from_data(p, vectors.len(), n, data))
    }

    /// Span of the rows of `m`.
    pub fn from_row_matrix(mut m: FpMatrix) -> Self {
        let rank = rref_in_place(&mut m);
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        Subspace { basis: m }
    }

    pub fn prime(&self) -> Prime {
        self.basis.p
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    /// The canonical basis rows.
    pub fn basis(&self) -> Vec<Vec<u8>> {
        self.basis.to_rows()
    }

    /// The canonical basis as a `dim x n` matrix.
    pub fn basis_matrix(&self) -> &FpMatrix {
        &self.basis
    }

    /// Basis vectors as the columns of an `n x dim` matrix.
    pub fn column_matrix(&self) -> FpMatrix {
        self.basis.transpose()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), GfpError> {
        if self.prime() != other.prime() {
            return Err(GfpError::PrimeMismatch(self.prime().value(), other.prime().value()));
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(GfpError::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u8]) -> Option<Vec<u8>> {
        let p = self.prime();
        let piv = pivots(&self.basis, self.dim());
        let coords: Vec<u8> = piv.iter().map(|&c| v[c]).collect();
        let mut w = v.to_vec();
        for (i, &a) in coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, x) in w.iter_mut().enumerate() {
                *x = p.sub(*x, p.mul(a, self.basis.get(i, k)));
            }
        }
        w.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[u8]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.dim() <= self.dim() && (0..other.dim()).all(|i| self.contains_vector(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::from_row_matrix(self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let p = self.prime();
        let n = self.ambient_dim();
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(p, n);
        }
        // v = sum c_i a_i lies in `other` iff it is killed by a basis of other's annihilator.
        let ann = other.annihilator();
        if ann.dim() == 0 {
            return self.clone();
        }
        let cond = ann.basis.mul(&self.basis.transpose());
        let coeffs = kernel_basis(&cond);
        let vectors: Vec<Vec<u8>> = coeffs
            .basis()
            .iter()
            .map(|c| self.basis.transpose().mul_vec(c))
            .collect();
        Subspace::span(p, n, &vectors)
    }

    /// `{ w : w . v = 0 for all v in self }`.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.prime(), self.ambient_dim());
        }
        kernel_basis(&self.basis)
    }

    /// Image under a linear map.
    pub fn image_under(&self, m: &FpMatrix) -> Subspace {
        let vectors: Vec<Vec<u8>> = self.basis().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(self.prime(), m.rows(), &vectors)
    }

    /// Whether `m` maps the subspace into itself.
    pub fn is_invariant(&self, m: &FpMatrix) -> bool {
        self.basis().iter().all(|v| self.contains_vector(&m.mul_vec(v)))
    }

    /// Some vector of `self` outside `inner`, if any.
    pub fn vector_outside(&self, inner: &Subspace) -> Option<Vec<u8>> {
        self.basis().into_iter().find(|v| !inner.contains_vector(v))
    }

    /// A complement basis: vectors from the standard basis extending `self` to `F_p^n`.
    pub fn complement_basis(&self) -> Vec<Vec<u8>> {
        let n = self.ambient_dim();
        let piv = pivots(&self.basis, self.dim());
        (0..n)
            .filter(|c| !piv.contains(c))
            .map(|c| {
                let mut v = vec![0u8; n];
                v[c] = 1;
                v
            })
            .collect()
    }

    /// Every vector in the subspace, in lexicographic coefficient order.
    pub fn elements(&self) -> Vec<Vec<u8>> {
        let p = self.prime();
        let n = self.ambient_dim();
        let d = self.dim();
        let count = (p.value() as usize).pow(d as u32);
        let mut out = Vec::with_capacity(count);
        let mut coeffs = vec![0u8; d];
        for _ in 0..count {
            let mut v = vec![0u8; n];
            for (i, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    for (k, x) in v.iter_mut().enumerate() {
                        *x = p.add(*x, p.mul(c, self.basis.get(i, k)));
                    }
                }
            }
            out.push(v);
            for c in coeffs.iter_mut().rev() {
                *c += 1;
                if *c as u32 == p.value() {
                    *c = 0;
                } else {
                    break;
                }
            }
        }
        out
    }
}

/// Scalar `s` with `g w - s w` in `lower`, for `w` in `upper` outside `lower`,
/// assuming `upper / lower` is a `g`-invariant line.
pub fn scalar_on_quotient(g: &FpMatrix, upper: &Subspace, lower: &Subspace) -> Option<u8> {
    if upper.dim() != lower.dim() + 1 || !upper.contains(lower) {
        return None;
    }
    let p = g.prime();
    let w = upper.vector_outside(lower)?;
    let gw = g.mul_vec(&w);
    (0..p.value() as u8).find(|&s| {
        let diff: Vec<u8> = gw.iter().zip(&w).map(|(&a, &b)| p.sub(a, p.mul(s, b))).collect();
        lower.contains_vector(&diff)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn cycle(p: Prime, n: usize) -> FpMatrix {
        let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FpMatrix::permutation(p, &perm)
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(101).is_err());
        for q in [3, 5, 7, 11, 13, 89, 97] {
            assert!(Prime::new(q).is_ok());
        }
    }

    #[test]
    fn reduction_matches_remainder() {
        for q in [3u32, 5, 7, 31, 97] {
            let p = f(q);
            for x in (0..200_000u32).step_by(7).chain([u32::MAX, u32::MAX - 1]) {
                assert_eq!(p.reduce(x) as u32, x % q);
            }
        }
    }

    #[test]
    fn rref_examples() {
        let p5 = f(5);
        let id = FpMatrix::identity(p5, 3);
        assert_eq!(rref(&id), (id.clone(), 3));
        let z = FpMatrix::zero(f(3), 2, 4);
        assert_eq!(rref(&z), (z.clone(), 0));
        let m = FpMatrix::from_rows(p5, &[[1, 1], [2, 2]]).unwrap();
        let want = FpMatrix::from_rows(p5, &[[1, 1], [0, 0]]).unwrap();
        assert_eq!(rref(&m), (want, 1));
    }

    #[test]
    fn kernel_and_image_of_cycle() {
        let p = f(5);
        let x = cycle(p, 5).minus_identity();
        let k = kernel_basis(&x);
        assert_eq!(k, Subspace::span(p, 5, &[vec![1; 5]]));
        let im = image_basis(&x);
        assert_eq!(im.dim(), 4);
        for v in im.basis() {
            assert_eq!(v.iter().map(|&a| a as u32).sum::<u32>() % 5, 0);
        }
        assert_eq!(intersect(&k, &im).unwrap(), k);
        assert!(contains(&Subspace::full(p, 5), &im).unwrap());
        assert_eq!(kernel_basis(&FpMatrix::identity(p, 3)).dim(), 0);
        assert_eq!(kernel_basis(&FpMatrix::zero(p, 3, 3)), Subspace::full(p, 3));
    }

    #[test]
    fn inverse_and_solve() {
        let p = f(7);
        let m = FpMatrix::from_rows(p, &[[2, 1, 0], [0, 3, 1], [1, 0, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let x = solve(&m, &[1, 2, 3]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 2, 3]);
        let sing = FpMatrix::from_rows(p, &[[1, 2], [2, 4]]).unwrap();
        assert!(sing.inverse().is_none());
        assert_eq!(solve(&sing, &[1, 0]).unwrap(), None);
        assert!(solve(&sing, &[1, 0, 0]).is_err());
    }

    #[test]
    fn mismatched_subspaces_are_rejected() {
        let a = Subspace::full(f(5), 3);
        assert!(matches!(intersect(&a, &Subspace::full(f(7), 3)), Err(GfpError::PrimeMismatch(5, 7))));
        assert!(matches!(sum(&a, &Subspace::full(f(5), 4)), Err(GfpError::DimensionMismatch(_))));
    }

    #[test]
    fn quotient_scalar() {
        let p = f(5);
        let g = FpMatrix::from_rows(p, &[[3, 1], [0, 2]]).unwrap();
        let upper = Subspace::full(p, 2);
        let lower = Subspace::span(p, 2, &[vec![1, 0]]);
        assert_eq!(scalar_on_quotient(&g, &upper, &lower), Some(2));
        assert_eq!(scalar_on_quotient(&g, &lower, &Subspace::zero(p, 2)), Some(3));
    }
}
