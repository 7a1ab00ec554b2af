//! Exact linear algebra over prime fields F_p.
//!
//! Residues are stored as `u32` in `[0, p)` and every product is taken in
//! `u64` before reduction, so any prime below 2^31 is supported.
//!
//! Vectors are plain `Vec<u32>` columns. Matrices are row-major. The tensor
//! basis convention used throughout the crate is the Kronecker one: the
//! pair `(i, j)` of a `m`-dimensional and `n`-dimensional factor sits at
//! index `i * n + j`.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// The prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    p: u32,
}

impl TryFrom<u64> for FieldSpec {
    type Error = LinalgError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        FieldSpec::new(p)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.p as u64
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(FieldSpec { p: p as u32 })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        // Fermat: a^(p-2)
        let mut base = a as u64;
        let mut exp = self.p as u64 - 2;
        let m = self.p as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u32
    }

    pub fn dot(self, a: &[u32], b: &[u32]) -> u32 {
        debug_assert_eq!(a.len(), b.len());
        let m = self.p as u64;
        let mut acc = 0u64;
        for (&x, &y) in a.iter().zip(b) {
            acc = (acc + x as u64 * y as u64) % m;
        }
        acc as u32
    }

    pub fn check_same(self, other: FieldSpec) -> Result<(), LinalgError> {
        if self == other {
            Ok(())
        } else {
            Err(LinalgError::FieldMismatch(self.p, other.p))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A dense matrix over F_p. Zero-row and zero-column matrices are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, reducing each one mod p.
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        let p = field.p;
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn from_ints(field: FieldSpec, rows: usize, cols: usize, entries: &[i64]) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        let entries = entries.iter().map(|&e| field.reduce(e)).collect();
        Ok(Matrix { field, rows, cols, entries })
    }

    /// Builds a matrix from a list of rows; `cols` is needed for the zero-row case.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: r.len() });
            }
            entries.extend(r.iter().map(|&e| e % field.p));
        }
        Ok(Matrix { field, rows: rows.len(), cols, entries })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// A single column.
    pub fn column_vector(field: FieldSpec, v: &[u32]) -> Self {
        Matrix { field, rows: v.len(), cols: 1, entries: v.iter().map(|&e| e % field.p).collect() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = v % self.field.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.field.check_same(other.field)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let m = self.field.p as u64;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = ((*d as u64 + a * b as u64) % m) as u32;
                }
            }
        }
        Ok(Matrix { field: self.field, rows: self.rows, cols: other.cols, entries: out })
    }

    /// Matrix product. Panics on shape or field mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.checked_mul(other).expect("matrix product shape mismatch")
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    /// `vᵀ · self` for a row vector `v`.
    pub fn apply_left(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows, "vector-matrix shape mismatch");
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &e) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, e));
            }
        }
        out
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(u32, u32) -> u32) -> Matrix {
        assert_eq!(self.field, other.field);
        assert_eq!(self.shape(), other.shape(), "elementwise shape mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| op(a, b)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&e| f.mul(c, e)).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field);
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Matrix { field: self.field, rows: self.rows, cols, entries }
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field);
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let top = self.hstack(&Matrix::zeros(self.field, self.rows, other.cols));
        let bottom = Matrix::zeros(self.field, other.rows, self.cols).hstack(other);
        top.vstack(&bottom)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.entries[i * idx.len() + k] = self.get(i, j);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        Matrix { field: self.field, rows: idx.len(), cols: self.cols, entries }
    }

    /// Row-major flattening.
    pub fn vectorize(&self) -> Vec<u32> {
        self.entries.clone()
    }

    /// In-place Gauss-Jordan elimination; returns pivot columns.
    fn eliminate(&mut self) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.entries[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.entries.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.entries[r * cols + c]);
            for j in c..cols {
                self.entries[r * cols + j] = f.mul(inv, self.entries[r * cols + j]);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.entries[i * cols + c];
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = f.mul(factor, self.entries[r * cols + j]);
                    self.entries[i * cols + j] = f.sub(self.entries[i * cols + j], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form with zero rows dropped, plus pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate();
        m.rows = pivots.len();
        m.entries.truncate(pivots.len() * m.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Square and of full rank.
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let (r, pivots) = aug.rref_with_pivots();
        if n > 0 && (pivots.len() < n || pivots[n - 1] >= n) {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(r.select_columns(&idx))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Wire form `{"p":p,"rows":r,"cols":c,"entries":[...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        MatrixJson {
            p: m.field.p as u64,
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(|&e| e as i64).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = LinalgError;
    fn try_from(j: MatrixJson) -> Result<Self, Self::Error> {
        let field = FieldSpec::new(j.p)?;
        Matrix::from_ints(field, j.rows, j.cols, &j.entries)
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        Matrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Reduced row echelon form, zero rows removed.
pub fn rref(m: &Matrix) -> Matrix {
    m.rref_with_pivots().0
}

/// The null space `{v : m·v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, pivots) = m.rref_with_pivots();
    let f = m.field;
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; n];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(i, free));
        }
        basis.push(v);
    }
    Subspace::from_rows(f, n, &basis)
}

/// Some `v` with `m·v = b`, free variables set to zero; `None` when inconsistent.
pub fn solve(m: &Matrix, b: &[u32]) -> Result<Option<Vec<u32>>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch { expected: m.rows, found: b.len() });
    }
    let aug = m.hstack(&Matrix::column_vector(m.field, b));
    let (r, pivots) = aug.rref_with_pivots();
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut v = vec![0u32; m.cols];
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = r.get(i, m.cols);
    }
    Ok(Some(v))
}

/// Kronecker product; entry `((ia, ib), (ja, jb))` sits at
/// `(ia·rows(b) + ib, ja·cols(b) + jb)`.
pub fn kron(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    a.field.check_same(b.field)?;
    let f = a.field;
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = Matrix::zeros(f, rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a.get(ia, ja);
            if x == 0 {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out.entries[(ia * b.rows + ib) * cols + ja * b.cols + jb] = f.mul(x, b.get(ib, jb));
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of two vectors in the same index convention.
pub fn kron_vec(f: FieldSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(f.mul(x, y));
        }
    }
    out
}

/// `{(a, b) : f·a = g·b}` inside `A ⊕ B`.
pub fn pullback_pair(f: &Matrix, g: &Matrix) -> Result<Subspace, LinalgError> {
    f.field.check_same(g.field)?;
    if f.rows != g.rows {
        return Err(LinalgError::DimensionMismatch { expected: f.rows, found: g.rows });
    }
    Ok(kernel(&f.hstack(&g.scale(f.field.neg(1)))))
}

/// A surjection with kernel exactly `sub`, onto the pivot-complement coordinates.
pub fn quotient_map(whole: usize, sub: &Subspace) -> Result<Matrix, LinalgError> {
    if sub.ambient_dim != whole {
        return Err(LinalgError::DimensionMismatch { expected: whole, found: sub.ambient_dim });
    }
    Ok(sub.quotient_map())
}

/// Meet, join and containment of two subspaces of the same ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceRelations {
    pub meet: Subspace,
    pub join: Subspace,
    pub left_contains_right: bool,
    pub right_contains_left: bool,
}

pub fn subspace_ops(u: &Subspace, v: &Subspace) -> Result<SubspaceRelations, LinalgError> {
    u.field.check_same(v.field)?;
    if u.ambient_dim != v.ambient_dim {
        return Err(LinalgError::DimensionMismatch { expected: u.ambient_dim, found: v.ambient_dim });
    }
    Ok(SubspaceRelations {
        meet: u.meet(v),
        join: u.join(v),
        left_contains_right: u.contains_subspace(v),
        right_contains_left: v.contains_subspace(u),
    })
}

/// A subspace of F_p^n, stored by its canonical (rref, no zero rows) basis.
///
/// Two subspaces are equal iff their bases are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The span of the rows of `generators`.
    pub fn span(generators: &Matrix) -> Subspace {
        let (basis, pivots) = generators.rref_with_pivots();
        Subspace { field: generators.field, ambient_dim: generators.cols, basis, pivots }
    }

    pub fn from_rows(field: FieldSpec, ambient_dim: usize, rows: &[Vec<u32>]) -> Subspace {
        let m = Matrix::from_rows(field, ambient_dim, rows).expect("generator length mismatch");
        Subspace::span(&m)
    }

    pub fn zero(field: FieldSpec, n: usize) -> Subspace {
        Subspace::span(&Matrix::zeros(field, 0, n))
    }

    pub fn full(field: FieldSpec, n: usize) -> Subspace {
        Subspace::span(&Matrix::identity(field, n))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vector(&self, k: usize) -> &[u32] {
        self.basis.row(k)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.ambient_dim, "vector length does not match ambient dimension");
        // rref rows carry a 1 at their pivot and 0 at the other pivots
        let coords: Vec<u32> = self.pivots.iter().map(|&c| v[c]).collect();
        if self.combine(&coords) == v {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `Σ coeffs_k · basis_k`.
    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        self.basis.apply_left(coeffs)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|k| self.contains(other.basis_vector(k)))
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        Subspace::span(&self.basis.vstack(&other.basis))
    }

    pub fn meet(&self, other: &Subspace) -> Subspace {
        kernel(&self.quotient_map().vstack(&other.quotient_map()))
    }

    /// The non-pivot coordinates, which span a complement.
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Quotient map onto the pivot-complement coordinates: row `k` reads
    /// off coordinate `c_k` of `v − Σ_i v[pivot_i]·basis_i`.
    pub fn quotient_map(&self) -> Matrix {
        let f = self.field;
        let comp = self.complement_coords();
        let mut q = Matrix::zeros(f, comp.len(), self.ambient_dim);
        for (k, &c) in comp.iter().enumerate() {
            q.set(k, c, 1);
            for (i, &pc) in self.pivots.iter().enumerate() {
                q.set(k, pc, f.neg(self.basis.get(i, c)));
            }
        }
        q
    }

    /// A right inverse of [`Subspace::quotient_map`]: the inclusion of the
    /// complement coordinates.
    pub fn quotient_section(&self) -> Matrix {
        let comp = self.complement_coords();
        let mut s = Matrix::zeros(self.field, self.ambient_dim, comp.len());
        for (k, &c) in comp.iter().enumerate() {
            s.set(c, k, 1);
        }
        s
    }

    /// Image of the subspace under a linear map (columns = ambient).
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        Subspace::span(&self.basis.mul(&m.transpose()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn mat(p: u64, rows: usize, cols: usize, e: &[i64]) -> Matrix {
        Matrix::from_ints(f(p), rows, cols, e).unwrap()
    }

    #[test]
    fn primality_is_checked() {
        assert!(FieldSpec::new(4).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(0).is_err());
        assert_eq!(FieldSpec::new(7).unwrap().p(), 7);
        let f5 = f(5);
        for a in 1..5 {
            assert_eq!(f5.mul(a, f5.inv(a)), 1);
        }
    }

    #[test]
    fn rref_examples() {
        assert_eq!(rref(&mat(2, 2, 2, &[1, 1, 1, 1])), mat(2, 1, 2, &[1, 1]));
        assert_eq!(rref(&mat(2, 2, 2, &[0, 1, 1, 0])), mat(2, 2, 2, &[1, 0, 0, 1]));
        assert_eq!(rref(&mat(5, 2, 2, &[2, 4, 1, 2])), mat(5, 1, 2, &[1, 2]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Matrix::identity(f(3), 2)), Subspace::zero(f(3), 2));
        assert_eq!(kernel(&mat(2, 1, 2, &[1, 1])), Subspace::from_rows(f(2), 2, &[vec![1, 1]]));
        assert_eq!(kernel(&Matrix::zeros(f(5), 2, 3)), Subspace::full(f(5), 3));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&Matrix::identity(f(3), 2), &[1, 2]).unwrap(), Some(vec![1, 2]));
        assert_eq!(solve(&mat(2, 1, 2, &[1, 1]), &[1]).unwrap(), Some(vec![1, 0]));
        assert_eq!(solve(&mat(2, 1, 2, &[0, 0]), &[1]).unwrap(), None);
        assert!(solve(&mat(2, 1, 2, &[0, 0]), &[1, 0]).is_err());
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&mat(5, 1, 1, &[3]), &mat(5, 1, 1, &[4])).unwrap(), mat(5, 1, 1, &[2]));
        let i2 = Matrix::identity(f(2), 2);
        assert_eq!(kron(&i2, &i2).unwrap(), Matrix::identity(f(2), 4));
        let row = mat(2, 1, 2, &[1, 1]);
        let col = mat(2, 2, 1, &[1, 1]);
        assert_eq!(kron(&row, &col).unwrap(), mat(2, 2, 2, &[1, 1, 1, 1]));
        // index convention on a non-symmetric pair
        let a = mat(7, 1, 2, &[1, 2]);
        let b = mat(7, 2, 1, &[3, 5]);
        // rows (ia·2+ib), cols (ja·1+jb): entry a[0][ja]·b[ib][0]
        assert_eq!(kron(&a, &b).unwrap(), mat(7, 2, 2, &[3, 6, 5, 10]));
        assert!(kron(&a, &mat(5, 1, 1, &[1])).is_err());
    }

    #[test]
    fn pullback_examples() {
        let i1 = Matrix::identity(f(2), 1);
        assert_eq!(pullback_pair(&i1, &i1).unwrap(), Subspace::from_rows(f(2), 2, &[vec![1, 1]]));
        let z = Matrix::zeros(f(2), 1, 1);
        assert_eq!(pullback_pair(&z, &z).unwrap(), Subspace::full(f(2), 2));
        let i3 = Matrix::identity(f(3), 1);
        let z3 = Matrix::zeros(f(3), 1, 1);
        assert_eq!(pullback_pair(&i3, &z3).unwrap(), Subspace::from_rows(f(3), 2, &[vec![0, 1]]));
        assert!(pullback_pair(&i3, &Matrix::zeros(f(3), 2, 1)).is_err());
    }

    #[test]
    fn quotient_examples() {
        let f2 = f(2);
        assert_eq!(quotient_map(2, &Subspace::zero(f2, 2)).unwrap(), Matrix::identity(f2, 2));
        assert_eq!(quotient_map(2, &Subspace::full(f2, 2)).unwrap().rows(), 0);
        let diag = Subspace::from_rows(f2, 2, &[vec![1, 1]]);
        let q = quotient_map(2, &diag).unwrap();
        // kernel must be exactly the diagonal: q = [[-1, 1]] = [[1, 1]] over F_2
        assert_eq!(q, mat(2, 1, 2, &[1, 1]));
        assert_eq!(kernel(&q), diag);
        assert!(quotient_map(3, &diag).is_err());
        let f5 = f(5);
        let line = Subspace::from_rows(f5, 2, &[vec![1, 3]]);
        let q = line.quotient_map();
        assert_eq!(q, mat(5, 1, 2, &[-3, 1]));
        assert_eq!(q.mul(&line.quotient_section()), Matrix::identity(f5, 1));
    }

    #[test]
    fn subspace_op_examples() {
        let f2 = f(2);
        let u = Subspace::from_rows(f2, 2, &[vec![1, 0]]);
        let r = subspace_ops(&u, &u).unwrap();
        assert_eq!((r.meet.clone(), r.join.clone()), (u.clone(), u.clone()));
        assert!(r.left_contains_right && r.right_contains_left);
        let v = Subspace::from_rows(f2, 2, &[vec![0, 1]]);
        let r = subspace_ops(&u, &v).unwrap();
        assert_eq!(r.meet, Subspace::zero(f2, 2));
        assert_eq!(r.join, Subspace::full(f2, 2));
        let f5 = f(5);
        let u = Subspace::from_rows(f5, 2, &[vec![1, 1]]);
        let v = Subspace::from_rows(f5, 2, &[vec![1, 2]]);
        let r = subspace_ops(&u, &v).unwrap();
        assert_eq!(r.meet.dim(), 0);
        assert_eq!(r.join.dim(), 2);
        assert!(!r.left_contains_right);
        assert!(subspace_ops(&u, &Subspace::zero(f5, 3)).is_err());
    }

    #[test]
    fn empty_matrices_are_first_class() {
        let f3 = f(3);
        let e = Matrix::zeros(f3, 0, 3);
        assert_eq!(e.rank(), 0);
        assert_eq!(kernel(&e).dim(), 3);
        assert_eq!(kernel(&Matrix::zeros(f3, 2, 0)).dim(), 0);
        assert_eq!(solve(&Matrix::zeros(f3, 0, 0), &[]).unwrap(), Some(vec![]));
        assert_eq!(Matrix::identity(f3, 0).inverse(), Some(Matrix::identity(f3, 0)));
    }

    #[test]
    fn exhaustive_rref_2x2_f2() {
        let f2 = f(2);
        for bits in 0u32..16 {
            let e: Vec<u32> = (0..4).map(|k| (bits >> k) & 1).collect();
            let m = Matrix::new(f2, 2, 2, e).unwrap();
            let r = rref(&m);
            assert_eq!(rref(&r), r);
            assert_eq!(r.rank(), m.rank());
            assert_eq!(Subspace::span(&m), Subspace::span(&r));
        }
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = Matrix> {
        (prop::sample::select(vec![2u64, 3, 5]), 0..=max, 0..=max).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0u32..p as u32, r * c)
                .prop_map(move |e| Matrix::new(FieldSpec::new(p).unwrap(), r, c, e).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent_and_rank_preserving(m in arb_matrix(6)) {
            let r = rref(&m);
            prop_assert_eq!(rref(&r), r.clone());
            prop_assert_eq!(r.rank(), m.rank());
            prop_assert_eq!(Subspace::span(&m), Subspace::span(&r));
        }

        #[test]
        fn rank_nullity(m in arb_matrix(6)) {
            prop_assert_eq!(kernel(&m).dim() + m.rank(), m.cols());
            let k = kernel(&m);
            for i in 0..k.dim() {
                prop_assert!(m.apply(k.basis_vector(i)).iter().all(|&e| e == 0));
            }
        }

        #[test]
        fn solve_returns_exact_solutions(m in arb_matrix(5), seed in any::<u64>()) {
            let p = m.field().p() as u64;
            let b: Vec<u32> = (0..m.rows()).map(|i| ((seed >> (i % 60)) % p) as u32).collect();
            if let Some(v) = solve(&m, &b).unwrap() {
                prop_assert_eq!(m.apply(&v), b);
            }
            // consistent right-hand sides are always solved
            let x: Vec<u32> = (0..m.cols()).map(|i| ((seed >> (i % 61)) % p) as u32).collect();
            let y = m.apply(&x);
            prop_assert!(solve(&m, &y).unwrap().is_some());
        }

        #[test]
        fn kron_rank_and_associativity(a in arb_matrix(3), bb in prop::collection::vec(0u32..5, 0..9), cc in prop::collection::vec(0u32..5, 0..4)) {
            let f = a.field();
            let b = Matrix::new(f, 1, bb.len(), bb.clone()).unwrap();
            let c = Matrix::new(f, cc.len(), 1, cc.clone()).unwrap();
            let ab = kron(&a, &b).unwrap();
            prop_assert_eq!(ab.rank(), a.rank() * b.rank());
            let left = kron(&ab, &c).unwrap();
            let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn quotient_kernel_is_sub(m in arb_matrix(5)) {
            let s = Subspace::span(&m);
            let q = s.quotient_map();
            prop_assert_eq!(q.rows(), s.ambient_dim() - s.dim());
            prop_assert_eq!(kernel(&q), s.clone());
            prop_assert_eq!(q.mul(&s.quotient_section()), Matrix::identity(s.field(), q.rows()));
        }

        #[test]
        fn inverse_is_two_sided(m in arb_matrix(4)) {
            if let Some(inv) = m.inverse() {
                prop_assert_eq!(m.mul(&inv), Matrix::identity(m.field(), m.rows()));
                prop_assert_eq!(inv.mul(&m), Matrix::identity(m.field(), m.rows()));
            } else {
                prop_assert!(!m.is_invertible());
            }
        }
    }

    #[test]
    fn pullback_matches_enumeration_f2() {
        // all f: A→C, g: B→C over F_2 with a + b + c ≤ 4 (ambient of the pullback ≤ 8 when c small)
        let f2 = f(2);
        for a in 0..=3usize {
            for b in 0..=3usize {
                for c in 0..=2usize {
                    if a + b > 4 || (a + b) * c > 8 {
                        continue;
                    }
                    let nf = c * a;
                    let ng = c * b;
                    for bits in 0u32..(1 << (nf + ng)) {
                        let fe: Vec<u32> = (0..nf).map(|k| (bits >> k) & 1).collect();
                        let ge: Vec<u32> = (0..ng).map(|k| (bits >> (nf + k)) & 1).collect();
                        let fm = Matrix::new(f2, c, a, fe).unwrap();
                        let gm = Matrix::new(f2, c, b, ge).unwrap();
                        let pb = pullback_pair(&fm, &gm).unwrap();
                        let mut members = Vec::new();
                        for v in 0u32..(1 << (a + b)) {
                            let x: Vec<u32> = (0..a).map(|k| (v >> k) & 1).collect();
                            let y: Vec<u32> = (0..b).map(|k| (v >> (a + k)) & 1).collect();
                            if fm.apply(&x) == gm.apply(&y) {
                                members.push([x, y].concat());
                            }
                        }
                        assert_eq!(members.len(), 1 << pb.dim());
                        for v in &members {
                            assert!(pb.contains(v));
                        }
                    }
                }
            }
        }
    }
}
