//! Exact integer and rational linear algebra on small dense matrices.
//!
//! All inputs in this crate are lattice data in dimension at most seven, so the
//! implementations favour exactness and clarity over asymptotics: Bareiss
//! fraction-free elimination for determinants, textbook Smith reduction with
//! transform tracking, rational Gauss elimination for solving, and a
//! Fourier-Motzkin feasibility kernel used by the fan validator.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::num::IntScalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("matrix is not unimodular (det {det})")]
    NotUnimodular { det: String },
    #[error("matrix is singular")]
    Singular,
}

pub type Result<T> = std::result::Result<T, LatticeError>;

macro_rules! fmt_vec_like {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "(")?;
            for (i, e) in self.entries.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", e)?;
            }
            write!(f, ")")
        }
    };
}

// ---------------------------------------------------------------------------
// vectors

/// Integer vector; `dim` is the entry count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntVec<T: IntScalar> {
    entries: Vec<T>,
}

impl<T: IntScalar> IntVec<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Self { entries }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Self::new(entries.iter().map(|&v| T::of_i64(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![T::zero(); dim])
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &T {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, v: T) {
        self.entries[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn dot(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.entries.iter().map(|a| T::zero() - a.clone()).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.entries.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// gcd of the entries (nonnegative; zero only for the zero vector).
    pub fn content(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, e| acc.gcd(&e.abs()))
    }

    /// Divides by the gcd of the entries, keeping the sign of the first
    /// nonzero entry.
    pub fn primitive_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        let g = self.content();
        Ok(Self::new(
            self.entries.iter().map(|e| e.clone() / g.clone()).collect(),
        ))
    }

    pub fn to_rat(&self) -> RatVec<T> {
        RatVec::new(
            self.entries
                .iter()
                .map(|e| Ratio::from_integer(e.clone()))
                .collect(),
        )
    }
}

impl<T: IntScalar> fmt::Debug for IntVec<T> {
    fmt_vec_like!();
}

/// Rational vector; entries stay reduced with positive denominator by
/// construction of `num_rational::Ratio`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatVec<T: IntScalar> {
    entries: Vec<Ratio<T>>,
}

impl<T: IntScalar> RatVec<T> {
    pub fn new(entries: Vec<Ratio<T>>) -> Self {
        Self { entries }
    }

    pub fn from_i64_pairs(entries: &[(i64, i64)]) -> Self {
        Self::new(
            entries
                .iter()
                .map(|&(n, d)| Ratio::new(T::of_i64(n), T::of_i64(d)))
                .collect(),
        )
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Self::new(
            entries
                .iter()
                .map(|&n| Ratio::from_integer(T::of_i64(n)))
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Ratio::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Ratio<T>] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Ratio<T> {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, v: Ratio<T>) {
        self.entries[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn dot(&self, other: &Self) -> Ratio<T> {
        assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(Ratio::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn scale(&self, c: &Ratio<T>) -> Self {
        Self::new(self.entries.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn sum(&self) -> Ratio<T> {
        self.entries
            .iter()
            .fold(Ratio::zero(), |acc, e| acc + e.clone())
    }

    /// Clears denominators and reduces to a primitive integer vector.
    pub fn primitive_direction(&self) -> Result<IntVec<T>> {
        if self.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        let lcm = self
            .entries
            .iter()
            .fold(T::one(), |acc, e| acc.lcm(e.denom()));
        let ints: Vec<T> = self
            .entries
            .iter()
            .map(|e| e.numer().clone() * (lcm.clone() / e.denom().clone()))
            .collect();
        IntVec::new(ints).primitive_part()
    }

    /// Exact integer vector if every entry has denominator one.
    pub fn to_int(&self) -> Option<IntVec<T>> {
        if self.entries.iter().all(|e| e.denom().is_one()) {
            Some(IntVec::new(
                self.entries.iter().map(|e| e.numer().clone()).collect(),
            ))
        } else {
            None
        }
    }
}

impl<T: IntScalar> fmt::Debug for RatVec<T> {
    fmt_vec_like!();
}

// ---------------------------------------------------------------------------
// matrices

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat<T: IntScalar> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: IntScalar> IntMat<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| T::of_i64(v)));
        }
        Self::new(r, c, entries)
    }

    pub fn from_row_vecs(rows: &[IntVec<T>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].dim() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.dim(), c, "ragged rows");
            entries.extend(row.entries().iter().cloned());
        }
        Self::new(r, c, entries)
    }

    pub fn from_col_vecs(cols: &[IntVec<T>]) -> Self {
        Self::from_row_vecs(cols).transpose()
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> IntVec<T> {
        IntVec::new((0..self.cols).map(|c| self.get(r, c).clone()).collect())
    }

    pub fn col(&self, c: usize) -> IntVec<T> {
        IntVec::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dim mismatch in matrix product");
        let mut m = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(r, k).clone() * other.get(k, c).clone();
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &IntVec<T>) -> IntVec<T> {
        assert_eq!(self.cols, v.dim());
        IntVec::new((0..self.rows).map(|r| self.row(r).dot(v)).collect())
    }

    pub fn mul_rat_vec(&self, v: &RatVec<T>) -> RatVec<T> {
        self.to_rat().mul_vec(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .map(|a| T::zero() - a.clone())
                .collect(),
        )
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a: Vec<Vec<T>> = (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                // pivot search
                let swap = (k + 1..n).find(|&r| !a[r][k].is_zero());
                match swap {
                    Some(r) => {
                        a.swap(k, r);
                        sign = T::zero() - sign;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    a[i][j] = q;
                }
                a[i][k] = T::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * a[n - 1][n - 1].clone())
    }

    /// True iff the determinant is plus or minus one.
    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.det()?.abs().is_one())
    }

    /// Inverse of a unimodular integer matrix, again integral.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let det = self.det()?;
        if !det.abs().is_one() {
            return Err(LatticeError::NotUnimodular {
                det: format!("{det}"),
            });
        }
        let inv = self
            .to_rat()
            .inverse()
            .expect("unimodular matrix is invertible");
        let n = self.rows;
        let mut m = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let e = inv.get(r, c);
                debug_assert!(e.denom().is_one());
                m.set(r, c, e.numer().clone());
            }
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.to_rat().rank()
    }

    pub fn to_rat(&self) -> RatMat<T> {
        RatMat::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .map(|e| Ratio::from_integer(e.clone()))
                .collect(),
        )
    }

    /// Smith normal form invariants: the rank together with the nonzero
    /// invariant factors in divisibility order.
    pub fn smith_invariants(&self) -> (usize, Vec<T>) {
        let (d, _, _) = self.smith_with_transforms();
        let mut factors: Vec<T> = Vec::new();
        for i in 0..d.rows.min(d.cols) {
            if !d.get(i, i).is_zero() {
                factors.push(d.get(i, i).abs());
            }
        }
        (factors.len(), factors)
    }

    /// Smith reduction `U * self * V = D` with `U`, `V` unimodular and `D`
    /// diagonal with the divisibility chain.
    pub fn smith_with_transforms(&self) -> (Self, Self, Self) {
        let mut d = self.clone();
        let mut u = Self::identity(self.rows);
        let mut v = Self::identity(self.cols);
        let n = self.rows.min(self.cols);

        'diag: for t in 0..n {
            // move a nonzero pivot of minimal absolute value to (t, t)
            loop {
                let mut best: Option<(usize, usize)> = None;
                for r in t..d.rows {
                    for c in t..d.cols {
                        if !d.get(r, c).is_zero() {
                            let better = match &best {
                                None => true,
                                Some((br, bc)) => d.get(r, c).abs() < d.get(*br, *bc).abs(),
                            };
                            if better {
                                best = Some((r, c));
                            }
                        }
                    }
                }
                let (pr, pc) = match best {
                    Some(p) => p,
                    None => break 'diag, // all remaining entries zero
                };
                d.swap_rows(t, pr);
                u.swap_rows(t, pr);
                d.swap_cols(t, pc);
                v.swap_cols(t, pc);

                let mut dirty = false;
                for r in t + 1..d.rows {
                    if !d.get(r, t).is_zero() {
                        let q = quot_round(d.get(r, t), d.get(t, t));
                        d.row_sub_mul(r, t, &q);
                        u.row_sub_mul(r, t, &q);
                        if !d.get(r, t).is_zero() {
                            dirty = true;
                        }
                    }
                }
                for c in t + 1..d.cols {
                    if !d.get(t, c).is_zero() {
                        let q = quot_round(d.get(t, c), d.get(t, t));
                        d.col_sub_mul(c, t, &q);
                        v.col_sub_mul(c, t, &q);
                        if !d.get(t, c).is_zero() {
                            dirty = true;
                        }
                    }
                }
                if !dirty {
                    // pivot must also divide the rest of the block
                    let mut fixed = true;
                    'outer: for r in t + 1..d.rows {
                        for c in t + 1..d.cols {
                            if !d.get(r, c).clone().mod_floor(d.get(t, t)).is_zero() {
                                // fold row r into row t to shrink the pivot
                                d.row_add(t, r);
                                u.row_add(t, r);
                                fixed = false;
                                break 'outer;
                            }
                        }
                    }
                    if fixed {
                        break;
                    }
                }
            }
        }
        // normalize signs
        for i in 0..n {
            if d.get(i, i).is_negative() {
                d.row_negate(i);
                u.row_negate(i);
            }
        }
        (d, u, v)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let va = self.get(a, c).clone();
            let vb = self.get(b, c).clone();
            self.set(a, c, vb);
            self.set(b, c, va);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let va = self.get(r, a).clone();
            let vb = self.get(r, b).clone();
            self.set(r, a, vb);
            self.set(r, b, va);
        }
    }

    fn row_sub_mul(&mut self, r: usize, pivot: usize, q: &T) {
        for c in 0..self.cols {
            let v = self.get(r, c).clone() - q.clone() * self.get(pivot, c).clone();
            self.set(r, c, v);
        }
    }

    fn col_sub_mul(&mut self, c: usize, pivot: usize, q: &T) {
        for r in 0..self.rows {
            let v = self.get(r, c).clone() - q.clone() * self.get(r, pivot).clone();
            self.set(r, c, v);
        }
    }

    fn row_add(&mut self, r: usize, other: usize) {
        for c in 0..self.cols {
            let v = self.get(r, c).clone() + self.get(other, c).clone();
            self.set(r, c, v);
        }
    }

    fn row_negate(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = T::zero() - self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// Some integer solution of `self * x = b`, if one exists.
    pub fn solve_integer(&self, b: &IntVec<T>) -> Result<Option<IntVec<T>>> {
        if self.rows != b.dim() {
            return Err(LatticeError::DimMismatch {
                left: self.rows,
                right: b.dim(),
            });
        }
        let (d, u, v) = self.smith_with_transforms();
        let ub = u.mul_vec(b);
        let n = self.rows.min(self.cols);
        let mut y = IntVec::zeros(self.cols);
        for i in 0..self.rows {
            let rhs = ub.get(i).clone();
            if i < n && !d.get(i, i).is_zero() {
                let (q, r) = rhs.div_rem(d.get(i, i));
                if !r.is_zero() {
                    return Ok(None);
                }
                y.set(i, q);
            } else if !rhs.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(v.mul_vec(&y)))
    }
}

impl<T: IntScalar> fmt::Debug for IntMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Round-to-nearest quotient, which keeps remainders small in Smith steps.
fn quot_round<T: IntScalar>(a: &T, b: &T) -> T {
    let two = T::of_i64(2);
    let (q, r) = a.div_rem(b);
    if r.abs() * two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + T::one()
        } else {
            q - T::one()
        }
    } else {
        q
    }
}

/// Dense row-major rational matrix (solver workhorse).
#[derive(Clone, PartialEq, Eq)]
pub struct RatMat<T: IntScalar> {
    rows: usize,
    cols: usize,
    entries: Vec<Ratio<T>>,
}

impl<T: IntScalar> RatMat<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<Ratio<T>>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Ratio::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Ratio::one());
        }
        m
    }

    pub fn from_col_vecs(cols: &[RatVec<T>]) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].dim() };
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.dim(), r);
            for i in 0..r {
                m.set(i, j, col.get(i).clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Ratio<T> {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Ratio<T>) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn col(&self, c: usize) -> RatVec<T> {
        RatVec::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut m = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Ratio::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(r, k).clone() * other.get(k, c).clone();
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &RatVec<T>) -> RatVec<T> {
        assert_eq!(self.cols, v.dim());
        RatVec::new(
            (0..self.rows)
                .map(|r| {
                    let mut acc = Ratio::zero();
                    for k in 0..self.cols {
                        acc = acc + self.get(r, k).clone() * v.get(k).clone();
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        let (reduced, pivots) = self.row_echelon();
        let _ = reduced;
        pivots.len()
    }

    fn row_echelon(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let pr = (r..m.rows).find(|&i| !m.get(i, c).is_zero());
            let pr = match pr {
                Some(p) => p,
                None => continue,
            };
            for k in 0..m.cols {
                let vr = m.get(r, k).clone();
                let vp = m.get(pr, k).clone();
                m.set(r, k, vp);
                m.set(pr, k, vr);
            }
            let pivot = m.get(r, c).clone();
            for k in 0..m.cols {
                let v = m.get(r, k).clone() / pivot.clone();
                m.set(r, k, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for k in 0..m.cols {
                        let v = m.get(i, k).clone() - f.clone() * m.get(r, k).clone();
                        m.set(i, k, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Ratio::one());
        }
        let (red, pivots) = aug.row_echelon();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// Unique solution `X` of `self * X = rhs`, if it exists; `None` when the
    /// system is inconsistent or underdetermined.
    pub fn solve_unique(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let n = self.cols;
        let mut aug = Self::zeros(self.rows, n + rhs.cols);
        for r in 0..self.rows {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            for c in 0..rhs.cols {
                aug.set(r, n + c, rhs.get(r, c).clone());
            }
        }
        let (red, pivots) = aug.row_echelon();
        let lead: Vec<usize> = pivots.iter().copied().filter(|&p| p < n).collect();
        if pivots.iter().any(|&p| p >= n) {
            return None; // inconsistent
        }
        if lead.len() < n {
            return None; // underdetermined
        }
        let mut x = Self::zeros(n, rhs.cols);
        for (ri, &pc) in lead.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, red.get(ri, n + c).clone());
            }
        }
        Some(x)
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<RatVec<T>> {
        let (red, pivots) = self.row_echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = RatVec::zeros(self.cols);
            v.set(fc, Ratio::one());
            for (ri, &pc) in pivots.iter().enumerate() {
                v.set(pc, Ratio::zero() - red.get(ri, fc).clone());
            }
            basis.push(v);
        }
        basis
    }
}

impl<T: IntScalar> fmt::Debug for RatMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.col(r))?;
        }
        write!(f, "]")
    }
}

/// Outcome of an exact linear solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution<T: IntScalar> {
    Unique(RatVec<T>),
    NoSolution,
    NonUnique,
}

/// Solves `a * x = b` exactly, distinguishing the inconsistent and the
/// underdetermined cases.
pub fn solve_rational<T: IntScalar>(a: &IntMat<T>, b: &RatVec<T>) -> Result<Solution<T>> {
    if a.rows() != b.dim() {
        return Err(LatticeError::DimMismatch {
            left: a.rows(),
            right: b.dim(),
        });
    }
    let mut aug = RatMat::zeros(a.rows(), a.cols() + 1);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            aug.set(r, c, Ratio::from_integer(a.get(r, c).clone()));
        }
        aug.set(r, a.cols(), b.get(r).clone());
    }
    let (red, pivots) = aug.row_echelon();
    if pivots.contains(&a.cols()) {
        return Ok(Solution::NoSolution);
    }
    if pivots.len() < a.cols() {
        return Ok(Solution::NonUnique);
    }
    let mut x = RatVec::zeros(a.cols());
    for (ri, &pc) in pivots.iter().enumerate() {
        x.set(pc, red.get(ri, a.cols()).clone());
    }
    Ok(Solution::Unique(x))
}

// ---------------------------------------------------------------------------
// linear constraint feasibility (Fourier-Motzkin)

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    /// expr <= 0
    Le,
    /// expr < 0
    Lt,
    /// expr == 0
    Eq,
}

/// `coeffs . x + constant REL 0`
#[derive(Clone, Debug)]
pub struct LinCon<T: IntScalar> {
    pub coeffs: Vec<Ratio<T>>,
    pub constant: Ratio<T>,
    pub rel: Rel,
}

impl<T: IntScalar> LinCon<T> {
    pub fn new(coeffs: Vec<Ratio<T>>, constant: Ratio<T>, rel: Rel) -> Self {
        Self {
            coeffs,
            constant,
            rel,
        }
    }
}

/// Exact feasibility of a system of linear constraints by equality
/// substitution followed by Fourier-Motzkin elimination. Sound for the small
/// systems produced by the fan validator (at most a dozen variables).
pub fn feasible<T: IntScalar>(cons: &[LinCon<T>], nvars: usize) -> bool {
    let mut sys: Vec<LinCon<T>> = cons.to_vec();
    let mut live: Vec<usize> = (0..nvars).collect();

    // substitute equalities away
    loop {
        let mut used = None;
        'search: for (ci, con) in sys.iter().enumerate() {
            if con.rel == Rel::Eq {
                for &v in &live {
                    if !con.coeffs[v].is_zero() {
                        used = Some((ci, v));
                        break 'search;
                    }
                }
            }
        }
        match used {
            None => break,
            Some((ci, v)) => {
                let eq = sys.remove(ci);
                let pivot = eq.coeffs[v].clone();
                for con in &mut sys {
                    if !con.coeffs[v].is_zero() {
                        let f = con.coeffs[v].clone() / pivot.clone();
                        for j in 0..nvars {
                            con.coeffs[j] = con.coeffs[j].clone() - f.clone() * eq.coeffs[j].clone();
                        }
                        con.constant = con.constant.clone() - f * eq.constant.clone();
                    }
                }
                live.retain(|&x| x != v);
            }
        }
    }
    // Fourier-Motzkin on the remaining inequalities
    let mut ineqs: Vec<LinCon<T>> = sys;
    for &v in &live.clone() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for con in ineqs.drain(..) {
            if con.coeffs[v].is_positive() {
                pos.push(con);
            } else if con.coeffs[v].is_negative() {
                neg.push(con);
            } else {
                zero.push(con);
            }
        }
        for p in &pos {
            for ng in &neg {
                // p: a x <= c with a>0  =>  x <= c/a ; ng: x >= c'/|a'|
                let fa = p.coeffs[v].clone();
                let fb = Ratio::zero() - ng.coeffs[v].clone();
                let coeffs: Vec<Ratio<T>> = (0..nvars)
                    .map(|j| p.coeffs[j].clone() * fb.clone() + ng.coeffs[j].clone() * fa.clone())
                    .collect();
                let constant = p.constant.clone() * fb.clone() + ng.constant.clone() * fa.clone();
                let rel = if p.rel == Rel::Lt || ng.rel == Rel::Lt {
                    Rel::Lt
                } else {
                    Rel::Le
                };
                zero.push(LinCon::new(coeffs, constant, rel));
            }
        }
        ineqs = zero;
    }
    ineqs.iter().all(|con| {
        debug_assert!(con.coeffs.iter().all(|c| c.is_zero()));
        match con.rel {
            Rel::Le => !con.constant.is_positive(),
            Rel::Lt => con.constant.is_negative(),
            Rel::Eq => con.constant.is_zero(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Int, Rat};
    use proptest::prelude::*;

    type IV = IntVec<Int>;
    type IM = IntMat<Int>;
    type RV = RatVec<Int>;

    #[test]
    fn det_identity_and_diagonal() {
        assert_eq!(IM::identity(3).det().unwrap(), Int::from(1));
        let d = IM::from_rows_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(d.det().unwrap(), Int::from(6));
    }

    #[test]
    fn det_cofactor_cross_check() {
        // independent 2x2 oracle: ad - bc
        let m = IM::from_rows_i64(&[&[1, 0], &[-1, -1]]);
        let oracle = Int::from(1) * Int::from(-1) - Int::from(0) * Int::from(-1);
        assert_eq!(m.det().unwrap(), oracle);
        assert_eq!(m.det().unwrap(), Int::from(-1));
    }

    #[test]
    fn det_rejects_non_square() {
        let m = IM::from_rows_i64(&[&[1, 0, 0], &[0, 1, 0]]);
        assert!(matches!(m.det(), Err(LatticeError::NotSquare { .. })));
    }

    #[test]
    fn unimodular_examples() {
        assert!(IM::identity(4).is_unimodular().unwrap());
        let m = IM::from_col_vecs(&[IV::from_i64(&[1, 0]), IV::from_i64(&[-1, -1])]);
        assert!(m.is_unimodular().unwrap());
        let m = IM::from_col_vecs(&[IV::from_i64(&[2, 0]), IV::from_i64(&[0, 1])]);
        assert!(!m.is_unimodular().unwrap());
    }

    #[test]
    fn solve_examples() {
        let id = IM::identity(2);
        let b = RV::from_ints(&[1, 2]);
        assert_eq!(
            solve_rational(&id, &b).unwrap(),
            Solution::Unique(RV::from_ints(&[1, 2]))
        );

        let a = IM::from_rows_i64(&[&[1, 1], &[1, -1]]);
        let b = RV::from_ints(&[2, 0]);
        assert_eq!(
            solve_rational(&a, &b).unwrap(),
            Solution::Unique(RV::from_ints(&[1, 1]))
        );

        let a = IM::from_rows_i64(&[&[1, 1]]);
        let b = RV::from_ints(&[1]);
        assert_eq!(solve_rational(&a, &b).unwrap(), Solution::NonUnique);

        let a = IM::from_rows_i64(&[&[1, 0], &[1, 0]]);
        let b = RV::from_ints(&[1, 2]);
        assert_eq!(solve_rational(&a, &b).unwrap(), Solution::NoSolution);

        let a = IM::from_rows_i64(&[&[1, 0]]);
        let b = RV::from_ints(&[1, 2]);
        assert!(solve_rational(&a, &b).is_err());
    }

    #[test]
    fn smith_examples() {
        let z = IM::zeros(2, 3);
        assert_eq!(z.smith_invariants(), (0, vec![]));

        let id = IM::identity(2);
        assert_eq!(id.smith_invariants(), (2, vec![Int::from(1), Int::from(1)]));

        // elementary-operations oracle: diag(2,4) is already in Smith form
        let d = IM::from_rows_i64(&[&[2, 0], &[0, 4]]);
        assert_eq!(d.smith_invariants(), (2, vec![Int::from(2), Int::from(4)]));

        // a case that needs the divisibility fix-up
        let m = IM::from_rows_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(m.smith_invariants(), (2, vec![Int::from(1), Int::from(6)]));
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(
            IV::from_i64(&[2, 4]).primitive_part().unwrap(),
            IV::from_i64(&[1, 2])
        );
        assert_eq!(
            IV::from_i64(&[1, 0, 0]).primitive_part().unwrap(),
            IV::from_i64(&[1, 0, 0])
        );
        assert_eq!(
            IV::from_i64(&[-3, 6, -9]).primitive_part().unwrap(),
            IV::from_i64(&[-1, 2, -3])
        );
        assert!(IV::from_i64(&[0, 0]).primitive_part().is_err());
    }

    #[test]
    fn solve_integer_membership() {
        // rows of [[1,0,-1],[0,1,-1]] span the principal divisors of the
        // projective plane; (1,0,-1) is in the lattice span, (1,0,0) is not.
        let a = IM::from_rows_i64(&[&[1, 0], &[0, 1], &[-1, -1]]); // transpose of row span
        assert!(a
            .solve_integer(&IV::from_i64(&[1, 0, -1]))
            .unwrap()
            .is_some());
        assert!(a
            .solve_integer(&IV::from_i64(&[1, 0, 0]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn feasibility_basics() {
        // x >= 1 and x <= 0 infeasible
        let cons = vec![
            LinCon::new(vec![Rat::from(Int::from(-1))], Rat::from(Int::from(1)), Rel::Le),
            LinCon::new(vec![Rat::from(Int::from(1))], Rat::from(Int::from(0)), Rel::Le),
        ];
        assert!(!feasible(&cons, 1));
        // x >= 0, x < 1 feasible
        let cons = vec![
            LinCon::new(vec![Rat::from(Int::from(-1))], Rat::from(Int::from(0)), Rel::Le),
            LinCon::new(vec![Rat::from(Int::from(1))], Rat::from(Int::from(-1)), Rel::Lt),
        ];
        assert!(feasible(&cons, 1));
        // strict: x > 0 and x < 0 infeasible even though x = 0 satisfies the closures
        let cons = vec![
            LinCon::new(vec![Rat::from(Int::from(-1))], Rat::from(Int::from(0)), Rel::Lt),
            LinCon::new(vec![Rat::from(Int::from(1))], Rat::from(Int::from(0)), Rel::Lt),
        ];
        assert!(!feasible(&cons, 1));
    }

    fn small_mat(n: usize) -> impl Strategy<Value = IM> {
        proptest::collection::vec(-5i64..=5, n * n)
            .prop_map(move |v| IM::new(n, n, v.into_iter().map(Int::from).collect()))
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in small_mat(3), b in small_mat(3)) {
            let lhs = a.mul(&b).det().unwrap();
            let rhs = a.det().unwrap() * b.det().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn solve_satisfies_system(a in small_mat(3), bv in proptest::collection::vec(-5i64..=5, 3)) {
            let b = RV::from_ints(&bv);
            if let Solution::Unique(x) = solve_rational(&a, &b).unwrap() {
                let ax = a.to_rat().mul_vec(&x);
                prop_assert_eq!(ax, b);
            }
        }

        #[test]
        fn smith_divisibility_and_det(a in small_mat(3)) {
            let (rank, factors) = a.smith_invariants();
            prop_assert_eq!(rank, factors.len());
            for w in factors.windows(2) {
                prop_assert!((w[1].clone() % w[0].clone()).is_zero());
            }
            let det = a.det().unwrap();
            if !det.is_zero() {
                let prod = factors.iter().fold(Int::from(1), |acc, f| acc * f);
                prop_assert_eq!(prod, det.abs());
            }
            // transforms really diagonalize
            let (d, u, v) = a.smith_with_transforms();
            prop_assert_eq!(u.mul(&a).mul(&v), d);
        }

        #[test]
        fn primitive_part_idempotent(v in proptest::collection::vec(-20i64..=20, 1..5)) {
            let iv = IV::from_i64(&v);
            if !iv.is_zero() {
                let p = iv.primitive_part().unwrap();
                prop_assert_eq!(p.primitive_part().unwrap(), p);
            }
        }
    }
}
