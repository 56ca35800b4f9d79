//! Windowed unitriangular matrix algebra: products, closed-form inverses,
//! anti-diagonal conjugation, exact minors, and the triple decomposition
//! G = B_m · B(m) · B^(m).
//!
//! Window indices are genuine (possibly negative) integers, so the
//! formulas for the two-sided infinite group transcribe without shifting.

mod io;

pub use io::{functional_to_rational, read_matrix_str, unipotent_to_rational, write_matrix, MatrixFile};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("index ({0},{1}) out of window")]
    IndexOutOfWindow(i32, i32),
    #[error("entry ({0},{1}) is on the wrong side of the diagonal")]
    WrongTriangle(i32, i32),
    #[error("matrix is not square")]
    NotSquare,
    #[error("bad matrix file: {0}")]
    BadFile(String),
}

/// Contiguous inclusive index range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i32,
    pub hi: i32,
}

impl Window {
    pub fn new(lo: i32, hi: i32) -> Self {
        assert!(lo <= hi, "empty window [{lo},{hi}]");
        Window { lo, hi }
    }

    /// Indices 1..n, the plain B(n,R) convention.
    pub fn size(n: i32) -> Self {
        Window::new(1, n)
    }

    /// The centered window [m-n, m+n+1].
    pub fn centered(m: i32, n: i32) -> Self {
        assert!(n >= 1);
        Window::new(m - n, m + n + 1)
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: i32) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn indices(&self) -> impl Iterator<Item = i32> + Clone {
        self.lo..=self.hi
    }

    /// All strictly-upper pairs k < r inside the window.
    pub fn upper_pairs(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        for k in self.indices() {
            for r in k + 1..=self.hi {
                out.push((k, r));
            }
        }
        out
    }

    /// Symmetric about the anti-diagonal through m, i.e. closed under
    /// i -> 2m+1-i.
    pub fn symmetric_about(&self, m: i32) -> bool {
        self.lo + self.hi == 2 * m + 1
    }
}

/// Centered window with the three index regions of the split at m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexWindow {
    pub m: i32,
    pub n: i32,
}

impl IndexWindow {
    pub fn new(m: i32, n: i32) -> Self {
        assert!(n >= 1);
        IndexWindow { m, n }
    }

    pub fn window(&self) -> Window {
        Window::centered(self.m, self.n)
    }

    /// Δ(m,n) = {(k,r) : m-n <= k <= m < r <= m+n+1}.
    pub fn delta_mid(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        for k in self.m - self.n..=self.m {
            for r in self.m + 1..=self.m + self.n + 1 {
                out.push((k, r));
            }
        }
        out
    }

    /// Δ_{m,n} = {(k,r) : m+1 <= k < r <= m+n+1}.
    pub fn delta_low(&self) -> Vec<(i32, i32)> {
        Window::new(self.m + 1, self.m + self.n + 1).upper_pairs()
    }

    /// Δ^{(m,n)} = {(k,r) : m-n <= k < r <= m}.
    pub fn delta_up(&self) -> Vec<(i32, i32)> {
        Window::new(self.m - self.n, self.m).upper_pairs()
    }

    /// Anti-diagonal support {(m+p+1, m-p) : 0 <= p <= n} of a generic point.
    pub fn antidiagonal(&self) -> Vec<(i32, i32)> {
        (0..=self.n).map(|p| (self.m + p + 1, self.m - p)).collect()
    }
}

/// Corner anti-diagonal of the split window: pairs (hi-p, lo+p) below the
/// diagonal with row > m >= column. Coincides with the centered-window
/// anti-diagonal when the window is symmetric about m.
pub fn corner_antidiagonal(window: Window, m: i32) -> Vec<(i32, i32)> {
    let pmax = (window.hi - m - 1).min(m - window.lo);
    (0..=pmax).map(|p| (window.hi - p, window.lo + p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Upper,
    Lower,
}

/// Unitriangular matrix: implicit ones on the diagonal, stored entries
/// strictly on one side, all inside the window.
#[derive(Debug, Clone, PartialEq)]
pub struct UnipotentMatrix<S> {
    window: Window,
    triangle: Triangle,
    entries: BTreeMap<(i32, i32), S>,
}

impl<S: Scalar> UnipotentMatrix<S> {
    pub fn identity(window: Window, triangle: Triangle) -> Self {
        UnipotentMatrix { window, triangle, entries: BTreeMap::new() }
    }

    pub fn upper(window: Window) -> Self {
        Self::identity(window, Triangle::Upper)
    }

    pub fn lower(window: Window) -> Self {
        Self::identity(window, Triangle::Lower)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn triangle(&self) -> Triangle {
        self.triangle
    }

    pub fn set(&mut self, k: i32, r: i32, v: S) -> Result<(), MatError> {
        if !self.window.contains(k) || !self.window.contains(r) {
            return Err(MatError::IndexOutOfWindow(k, r));
        }
        let ok = match self.triangle {
            Triangle::Upper => k < r,
            Triangle::Lower => k > r,
        };
        if !ok {
            return Err(MatError::WrongTriangle(k, r));
        }
        if v.is_zero() {
            self.entries.remove(&(k, r));
        } else {
            self.entries.insert((k, r), v);
        }
        Ok(())
    }

    /// Entry with the implicit unit diagonal.
    pub fn get(&self, k: i32, r: i32) -> S {
        if k == r {
            return S::one();
        }
        self.entries.get(&(k, r)).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(i32, i32), &S)> {
        self.entries.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }

    /// Strictly off-diagonal support.
    pub fn support(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.entries.keys().copied()
    }

    pub fn supported_on(&self, allowed: &[(i32, i32)]) -> bool {
        self.entries.keys().all(|p| allowed.contains(p))
    }

    pub fn transpose(&self) -> UnipotentMatrix<S> {
        UnipotentMatrix {
            window: self.window,
            triangle: match self.triangle {
                Triangle::Upper => Triangle::Lower,
                Triangle::Lower => Triangle::Upper,
            },
            entries: self
                .entries
                .iter()
                .map(|(&(k, r), v)| ((r, k), v.clone()))
                .collect(),
        }
    }

    /// Product of unitriangular matrices of the same shape.
    pub fn mul(&self, rhs: &UnipotentMatrix<S>) -> Result<UnipotentMatrix<S>, MatError> {
        if self.window != rhs.window {
            return Err(MatError::WindowMismatch(format!(
                "{:?} vs {:?}",
                self.window, rhs.window
            )));
        }
        if self.triangle != rhs.triangle {
            return Err(MatError::WindowMismatch(
                "cannot multiply upper by lower unitriangular in place".into(),
            ));
        }
        let mut out = UnipotentMatrix::identity(self.window, self.triangle);
        let between = |k: i32, r: i32| -> Box<dyn Iterator<Item = i32>> {
            match self.triangle {
                Triangle::Upper => Box::new(k + 1..r),
                Triangle::Lower => Box::new(r + 1..k),
            }
        };
        for k in self.window.indices() {
            for r in self.window.indices() {
                let valid = match self.triangle {
                    Triangle::Upper => k < r,
                    Triangle::Lower => k > r,
                };
                if !valid {
                    continue;
                }
                let mut sum = self.get(k, r) + rhs.get(k, r);
                for j in between(k, r) {
                    let a = self.get(k, j);
                    let b = rhs.get(j, r);
                    if !a.is_zero() && !b.is_zero() {
                        sum = sum + a * b;
                    }
                }
                out.set(k, r, sum)?;
            }
        }
        Ok(out)
    }

    /// Closed-form inverse: alternating signed sums over strictly monotone
    /// index chains k < i_1 < ... < i_r < n.
    pub fn invert(&self) -> UnipotentMatrix<S> {
        let mut out = UnipotentMatrix::identity(self.window, self.triangle);
        let pairs: Vec<(i32, i32)> = match self.triangle {
            Triangle::Upper => self.window.upper_pairs(),
            Triangle::Lower => self
                .window
                .upper_pairs()
                .into_iter()
                .map(|(k, r)| (r, k))
                .collect(),
        };
        for (k, r) in pairs {
            let v = self.chain_sum(k, r);
            if !v.is_zero() {
                out.set(k, r, v).unwrap();
            }
        }
        out
    }

    /// Σ over chains from k to r of (-1)^(chain length) · product of entries.
    fn chain_sum(&self, k: i32, r: i32) -> S {
        fn rec<S: Scalar>(m: &UnipotentMatrix<S>, from: i32, to: i32, acc: &S, sign: bool) -> S {
            // direct step
            let step = m.get(from, to);
            let mut total = if step.is_zero() {
                S::zero()
            } else {
                let v = acc.clone() * step;
                if sign {
                    -v
                } else {
                    v
                }
            };
            let (lo, hi) = if from < to { (from, to) } else { (to, from) };
            for mid in lo + 1..hi {
                let first = m.get(from, mid);
                if first.is_zero() {
                    continue;
                }
                let acc2 = acc.clone() * first;
                total = total + rec(m, mid, to, &acc2, !sign);
            }
            total
        }
        rec(self, k, r, &S::one(), true)
    }

    /// Neumann-series inverse I - N + N^2 - ... (N nilpotent); independent
    /// cross-check of the closed-form chain sums.
    pub fn invert_neumann(&self) -> UnipotentMatrix<S> {
        let dim = self.window.len();
        let n = {
            let mut d = self.to_dense();
            for i in self.window.indices() {
                d.set(i, i, S::zero()).unwrap();
            }
            d
        };
        let mut out = DenseMatrix::identity_on(self.window);
        let mut power = DenseMatrix::identity_on(self.window);
        let mut negate = true;
        for _ in 0..dim {
            power = power.mul(&n).unwrap();
            if power.is_zero() {
                break;
            }
            out = if negate { out.sub(&power) } else { out.add(&power) };
            negate = !negate;
        }
        let mut inv = UnipotentMatrix::identity(self.window, self.triangle);
        for k in self.window.indices() {
            for r in self.window.indices() {
                if k != r {
                    let v = out.get(k, r).clone();
                    if !v.is_zero() {
                        inv.set(k, r, v).unwrap();
                    }
                }
            }
        }
        inv
    }

    pub fn to_dense(&self) -> DenseMatrix<S> {
        let idx: Vec<i32> = self.window.indices().collect();
        let mut d = DenseMatrix::zero(idx.clone(), idx);
        for i in self.window.indices() {
            d.set(i, i, S::one()).unwrap();
        }
        for (&(k, r), v) in &self.entries {
            d.set(k, r, v.clone()).unwrap();
        }
        d
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> UnipotentMatrix<T> {
        UnipotentMatrix {
            window: self.window,
            triangle: self.triangle,
            entries: self.entries.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }
}

/// Functional on the Lie algebra: strictly lower-triangular windowed array.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional<S> {
    window: Window,
    entries: BTreeMap<(i32, i32), S>,
    generic_antidiagonal: bool,
}

impl<S: Scalar> Functional<S> {
    pub fn zero(window: Window) -> Self {
        Functional { window, entries: BTreeMap::new(), generic_antidiagonal: false }
    }

    /// Generic anti-diagonal point on the centered window: entries exactly
    /// {(m+p+1, m-p)}, all nonzero.
    pub fn generic_antidiagonal(
        iw: IndexWindow,
        values: impl Fn(i32) -> S,
    ) -> Result<Self, MatError> {
        let mut f = Functional::zero(iw.window());
        for p in 0..=iw.n {
            let v = values(p);
            if v.is_zero() {
                return Err(MatError::WrongTriangle(iw.m + p + 1, iw.m - p));
            }
            f.set(iw.m + p + 1, iw.m - p, v)?;
        }
        f.generic_antidiagonal = true;
        Ok(f)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_generic_antidiagonal(&self, iw: IndexWindow) -> bool {
        self.is_generic_corner(iw.window(), iw.m)
    }

    /// Entries exactly on the corner anti-diagonal of the split, all nonzero.
    pub fn is_generic_corner(&self, window: Window, m: i32) -> bool {
        let anti = corner_antidiagonal(window, m);
        anti.iter().all(|&(k, r)| !self.get(k, r).is_zero())
            && self.entries.keys().all(|p| anti.contains(p))
    }

    pub fn set(&mut self, k: i32, r: i32, v: S) -> Result<(), MatError> {
        if !self.window.contains(k) || !self.window.contains(r) {
            return Err(MatError::IndexOutOfWindow(k, r));
        }
        if k <= r {
            return Err(MatError::WrongTriangle(k, r));
        }
        if v.is_zero() {
            self.entries.remove(&(k, r));
        } else {
            self.entries.insert((k, r), v);
        }
        self.generic_antidiagonal = false;
        Ok(())
    }

    pub fn get(&self, k: i32, r: i32) -> S {
        self.entries.get(&(k, r)).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(i32, i32), &S)> {
        self.entries.iter()
    }

    pub fn is_zero_functional(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> DenseMatrix<S> {
        let idx: Vec<i32> = self.window.indices().collect();
        let mut d = DenseMatrix::zero(idx.clone(), idx);
        for (&(k, r), v) in &self.entries {
            d.set(k, r, v.clone()).unwrap();
        }
        d
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Functional<T> {
        Functional {
            window: self.window,
            entries: self.entries.iter().map(|(k, v)| (*k, f(v))).collect(),
            generic_antidiagonal: self.generic_antidiagonal,
        }
    }
}

/// Dense rectangular matrix with explicit integer row/column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: Vec<i32>,
    cols: Vec<i32>,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zero(rows: Vec<i32>, cols: Vec<i32>) -> Self {
        let data = vec![S::zero(); rows.len() * cols.len()];
        DenseMatrix { rows, cols, data }
    }

    pub fn identity_on(window: Window) -> Self {
        let idx: Vec<i32> = window.indices().collect();
        let mut m = Self::zero(idx.clone(), idx);
        for i in window.indices() {
            m.set(i, i, S::one()).unwrap();
        }
        m
    }

    pub fn from_rows(rows: Vec<i32>, cols: Vec<i32>, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows.len() * cols.len());
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> &[i32] {
        &self.rows
    }

    pub fn cols(&self) -> &[i32] {
        &self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    fn rpos(&self, k: i32) -> Result<usize, MatError> {
        self.rows
            .iter()
            .position(|&i| i == k)
            .ok_or(MatError::IndexOutOfWindow(k, self.cols.first().copied().unwrap_or(0)))
    }

    fn cpos(&self, r: i32) -> Result<usize, MatError> {
        self.cols
            .iter()
            .position(|&i| i == r)
            .ok_or(MatError::IndexOutOfWindow(self.rows.first().copied().unwrap_or(0), r))
    }

    pub fn get(&self, k: i32, r: i32) -> &S {
        let i = self.rpos(k).expect("row label");
        let j = self.cpos(r).expect("col label");
        &self.data[i * self.cols.len() + j]
    }

    pub fn get_pos(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols.len() + j]
    }

    pub fn set(&mut self, k: i32, r: i32, v: S) -> Result<(), MatError> {
        let i = self.rpos(k)?;
        let j = self.cpos(r)?;
        let w = self.cols.len();
        self.data[i * w + j] = v;
        Ok(())
    }

    pub fn set_pos(&mut self, i: usize, j: usize, v: S) {
        let w = self.cols.len();
        self.data[i * w + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, rhs: &DenseMatrix<S>) -> DenseMatrix<S> {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        DenseMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &DenseMatrix<S>) -> DenseMatrix<S> {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        DenseMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &DenseMatrix<S>) -> Result<DenseMatrix<S>, MatError> {
        if self.cols != rhs.rows {
            return Err(MatError::WindowMismatch(format!(
                "inner labels {:?} vs {:?}",
                self.cols, rhs.rows
            )));
        }
        let mut out = DenseMatrix::zero(self.rows.clone(), rhs.cols.clone());
        for i in 0..self.rows.len() {
            for j in 0..rhs.cols.len() {
                let mut sum = S::zero();
                for t in 0..self.cols.len() {
                    let a = self.get_pos(i, t);
                    let b = rhs.get_pos(t, j);
                    if !a.is_zero() && !b.is_zero() {
                        sum = sum + a.clone() * b.clone();
                    }
                }
                out.set_pos(i, j, sum);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> DenseMatrix<S> {
        let mut out = DenseMatrix::zero(self.cols.clone(), self.rows.clone());
        for i in 0..self.rows.len() {
            for j in 0..self.cols.len() {
                out.set_pos(j, i, self.get_pos(i, j).clone());
            }
        }
        out
    }

    /// Positional anti-transpose (reflection along the anti-diagonal). Label
    /// lists are preserved.
    pub fn anti_transpose(&self) -> Result<DenseMatrix<S>, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare);
        }
        let n = self.rows.len();
        let mut out = DenseMatrix::zero(self.rows.clone(), self.cols.clone());
        for i in 0..n {
            for j in 0..n {
                out.set_pos(i, j, self.get_pos(n - 1 - j, n - 1 - i).clone());
            }
        }
        Ok(out)
    }

    /// Right multiplication by J_m = Σ_r E_{m+r+1, m-r}: column labeled j
    /// moves to label 2m+1-j, so the column set is mirrored.
    pub fn mul_j_right(&self, m: i32) -> Result<DenseMatrix<S>, MatError> {
        let mapped: Vec<i32> = self.cols.iter().map(|&j| 2 * m + 1 - j).collect();
        let mut sorted = mapped.clone();
        sorted.sort_unstable();
        let mut out = DenseMatrix::zero(self.rows.clone(), sorted);
        for i in 0..self.rows.len() {
            for (j, &newlab) in mapped.iter().enumerate() {
                out.set(self.rows[i], newlab, self.get_pos(i, j).clone())?;
            }
        }
        Ok(out)
    }

    /// Left multiplication by J_m: row labeled i moves to label 2m+1-i.
    pub fn mul_j_left(&self, m: i32) -> Result<DenseMatrix<S>, MatError> {
        let mapped: Vec<i32> = self.rows.iter().map(|&i| 2 * m + 1 - i).collect();
        let mut sorted = mapped.clone();
        sorted.sort_unstable();
        let mut out = DenseMatrix::zero(sorted, self.cols.clone());
        for (i, &newlab) in mapped.iter().enumerate() {
            for j in 0..self.cols.len() {
                out.set(newlab, self.cols[j], self.get_pos(i, j).clone())?;
            }
        }
        Ok(out)
    }

    /// J_m · a · J_m.
    pub fn conjugate_j(&self, m: i32) -> Result<DenseMatrix<S>, MatError> {
        self.mul_j_left(m)?.mul_j_right(m)
    }

    /// Exact minor over the labeled rows and columns, by fraction-free
    /// Bareiss elimination with row pre-scaling to clear denominators.
    pub fn minor(&self, rows: &[i32], cols: &[i32]) -> Result<S, MatError> {
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(MatError::NotSquare);
        }
        let mut sub: Vec<Vec<S>> = Vec::with_capacity(rows.len());
        for &k in rows {
            let i = self.rpos(k)?;
            let mut row = Vec::with_capacity(cols.len());
            for &r in cols {
                let j = self.cpos(r)?;
                row.push(self.get_pos(i, j).clone());
            }
            sub.push(row);
        }
        Ok(bareiss_determinant(sub))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DenseMatrix<T> {
        DenseMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            data: self.data.iter().map(&f).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for DenseMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows.len() {
            write!(f, "{}:", self.rows[i])?;
            for j in 0..self.cols.len() {
                write!(f, " {}", self.get_pos(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Fraction-free determinant: rows are scaled to polynomial form, then the
/// Bareiss recurrence keeps every intermediate value in the base ring; the
/// scale is divided out once at the end. Row swaps handle vanishing pivots.
fn bareiss_determinant<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    let mut scale = S::one();
    for row in a.iter_mut() {
        let mut f = S::one();
        for e in row.iter() {
            let d = e.denominator_part();
            if !d.is_one() {
                f = f * d;
            }
        }
        if !f.is_one() {
            for e in row.iter_mut() {
                *e = e.clone() * f.clone();
            }
            scale = scale * f;
        }
    }
    let mut sign_neg = false;
    let mut prev = S::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign_neg = !sign_neg;
                }
                None => return S::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v.exact_div(&prev);
            }
            a[i][k] = S::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone().exact_div(&scale);
    if sign_neg {
        -det
    } else {
        det
    }
}

/// Triple decomposition g = x_m · x(m) · x^(m) of an upper unitriangular
/// matrix at the split point m. The factors carry the entries of g in the
/// three regions; the middle factor is returned as a unipotent matrix
/// supported on Δ(m).
pub type TripleFactors<S> = (UnipotentMatrix<S>, UnipotentMatrix<S>, UnipotentMatrix<S>);

pub fn triple_decompose<S: Scalar>(
    g: &UnipotentMatrix<S>,
    m: i32,
) -> Result<TripleFactors<S>, MatError> {
    if g.triangle() != Triangle::Upper {
        return Err(MatError::WindowMismatch("triple split needs an upper matrix".into()));
    }
    let w = g.window();
    if !(w.lo <= m && m < w.hi) {
        return Err(MatError::WindowMismatch(format!(
            "split point {m} outside window [{},{}]",
            w.lo, w.hi
        )));
    }
    let mut low = UnipotentMatrix::upper(w);
    let mut mid = UnipotentMatrix::upper(w);
    let mut up = UnipotentMatrix::upper(w);
    for (&(k, r), v) in &g.entries {
        if k > m {
            low.set(k, r, v.clone())?;
        } else if r > m {
            mid.set(k, r, v.clone())?;
        } else {
            up.set(k, r, v.clone())?;
        }
    }
    Ok((low, mid, up))
}

/// The alternative middle factor h = x_m · x(m) · x_m^{-1} from the second
/// decomposition G = B(m) · B_m · B^(m).
pub fn triple_h_factor<S: Scalar>(
    x_low: &UnipotentMatrix<S>,
    x_mid: &UnipotentMatrix<S>,
) -> Result<UnipotentMatrix<S>, MatError> {
    let prod = x_low.mul(x_mid)?.mul(&x_low.invert())?;
    Ok(prod)
}
