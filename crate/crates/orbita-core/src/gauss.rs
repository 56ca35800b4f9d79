//! Gauss LDU decomposition: fraction-free elimination, the independent
//! quotient-of-minors route, the UDL variant via anti-transposition, and a
//! growing-window streamed form for truncations of infinite matrices.
//!
//! Existence requires all leading principal minors to be nonzero; the
//! elimination detects a vanishing minor lazily and reports its stage.

use thiserror::Error;

use crate::scalar::Scalar;
use crate::unimat::{DenseMatrix, MatError, Triangle, UnipotentMatrix, Window};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaussError {
    /// The k-th leading principal minor vanishes (1-based stage).
    #[error("leading principal minor {0} vanishes")]
    PrincipalMinorVanishes(usize),
    #[error("window at radius {0} is not a nested extension of the previous one")]
    WindowNotNested(usize),
    #[error("matrix must be square on matching row/column labels")]
    NotSquareOnWindow,
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// The three exact factors of C = L·D·U.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussFactors<S> {
    pub l: UnipotentMatrix<S>,
    /// Diagonal entries keyed by window index, ascending.
    pub d: Vec<(i32, S)>,
    pub u: UnipotentMatrix<S>,
}

impl<S: Scalar> GaussFactors<S> {
    pub fn window(&self) -> Window {
        self.l.window()
    }

    pub fn d_matrix(&self) -> DenseMatrix<S> {
        let idx: Vec<i32> = self.window().indices().collect();
        let mut m = DenseMatrix::zero(idx.clone(), idx);
        for (i, v) in &self.d {
            m.set(*i, *i, v.clone()).unwrap();
        }
        m
    }

    /// L·D·U as a dense matrix.
    pub fn reassemble(&self) -> DenseMatrix<S> {
        self.l
            .to_dense()
            .mul(&self.d_matrix())
            .unwrap()
            .mul(&self.u.to_dense())
            .unwrap()
    }

    /// Leading block restriction, used by the streamed consistency checks.
    fn truncate(&self, len: usize) -> GaussFactors<S> {
        let w = self.window();
        let hi = w.lo + len as i32 - 1;
        let sub = Window::new(w.lo, hi);
        let mut l = UnipotentMatrix::identity(sub, Triangle::Lower);
        let mut u = UnipotentMatrix::identity(sub, Triangle::Upper);
        for (&(k, r), v) in self.l.entries() {
            if sub.contains(k) && sub.contains(r) {
                l.set(k, r, v.clone()).unwrap();
            }
        }
        for (&(k, r), v) in self.u.entries() {
            if sub.contains(k) && sub.contains(r) {
                u.set(k, r, v.clone()).unwrap();
            }
        }
        let d = self
            .d
            .iter()
            .filter(|(i, _)| sub.contains(*i))
            .cloned()
            .collect();
        GaussFactors { l, d, u }
    }
}

fn window_of<S: Scalar>(c: &DenseMatrix<S>) -> Result<Window, GaussError> {
    if c.rows() != c.cols() || c.rows().is_empty() {
        return Err(GaussError::NotSquareOnWindow);
    }
    let rows = c.rows();
    for w in rows.windows(2) {
        if w[1] != w[0] + 1 {
            return Err(GaussError::NotSquareOnWindow);
        }
    }
    Ok(Window::new(rows[0], rows[rows.len() - 1]))
}

/// LDU by a single fraction-free elimination pass.
///
/// Rows are pre-scaled to clear denominators, the Bareiss recurrence keeps
/// every intermediate entry polynomial, and divisions appear only when the
/// final L, D, U entries are formed. A zero pivot at stage k means the k-th
/// leading principal minor of the input vanishes.
pub fn ldu<S: Scalar>(c: &DenseMatrix<S>) -> Result<GaussFactors<S>, GaussError> {
    let win = window_of(c)?;
    let n = win.len();
    let labels: Vec<i32> = win.indices().collect();

    let mut m: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| c.get_pos(i, j).clone()).collect())
        .collect();
    let mut row_scale: Vec<S> = vec![S::one(); n];
    for (row, f) in m.iter_mut().zip(row_scale.iter_mut()) {
        let mut factor = S::one();
        for e in row.iter() {
            let d = e.denominator_part();
            if !d.is_one() {
                factor = factor * d;
            }
        }
        if !factor.is_one() {
            for e in row.iter_mut() {
                *e = e.clone() * factor.clone();
            }
            *f = factor;
        }
    }

    let mut l = UnipotentMatrix::identity(win, Triangle::Lower);
    let mut u = UnipotentMatrix::identity(win, Triangle::Upper);
    let mut d = Vec::with_capacity(n);
    let mut prev = S::one();
    for k in 0..n {
        let pivot = m[k][k].clone();
        if pivot.is_zero() {
            return Err(GaussError::PrincipalMinorVanishes(k + 1));
        }
        for i in k + 1..n {
            let v = m[i][k].clone();
            if !v.is_zero() {
                // unscale: l_ik = l'_ik * f_k / f_i
                let val = (v.exact_div(&pivot) * row_scale[k].clone())
                    .exact_div(&row_scale[i]);
                l.set(labels[i], labels[k], val)?;
            }
        }
        for j in k + 1..n {
            let v = m[k][j].clone();
            if !v.is_zero() {
                u.set(labels[k], labels[j], v.exact_div(&pivot))?;
            }
        }
        // d_k = (a_k / a_{k-1}) / f_k with a_k the scaled principal minors
        let dk = pivot.exact_div(&prev).exact_div(&row_scale[k]);
        d.push((labels[k], dk));
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[k][k].clone() * m[i][j].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v.exact_div(&prev);
            }
            m[i][k] = S::zero();
        }
        prev = pivot;
    }
    Ok(GaussFactors { l, d, u })
}

/// LDU with every entry computed independently from the quotient-of-minors
/// formulas: d_1 = M^1_1, d_k = M^{1..k}/M^{1..k-1},
/// l_mk = M^{1..k-1,m}_{1..k} / M^{1..k}_{1..k} and transposed for u_km.
pub fn ldu_by_minors<S: Scalar>(c: &DenseMatrix<S>) -> Result<GaussFactors<S>, GaussError> {
    let win = window_of(c)?;
    let labels: Vec<i32> = win.indices().collect();
    let n = labels.len();

    let mut d = Vec::with_capacity(n);
    let mut prev = S::one();
    let mut principals = Vec::with_capacity(n);
    for k in 1..=n {
        let mk = c.minor(&labels[..k], &labels[..k])?;
        if mk.is_zero() {
            return Err(GaussError::PrincipalMinorVanishes(k));
        }
        d.push((labels[k - 1], mk.exact_div(&prev)));
        prev = mk.clone();
        principals.push(mk);
    }

    let mut l = UnipotentMatrix::identity(win, Triangle::Lower);
    let mut u = UnipotentMatrix::identity(win, Triangle::Upper);
    for k in 1..=n {
        let denom = &principals[k - 1];
        for mi in k + 1..=n {
            let mut rows: Vec<i32> = labels[..k - 1].to_vec();
            rows.push(labels[mi - 1]);
            let num = c.minor(&rows, &labels[..k])?;
            if !num.is_zero() {
                l.set(labels[mi - 1], labels[k - 1], num.exact_div(denom))?;
            }
            let mut cols: Vec<i32> = labels[..k - 1].to_vec();
            cols.push(labels[mi - 1]);
            let num = c.minor(&labels[..k], &cols)?;
            if !num.is_zero() {
                u.set(labels[k - 1], labels[mi - 1], num.exact_div(denom))?;
            }
        }
    }
    Ok(GaussFactors { l, d, u })
}

/// The U·D·L decomposition, realised as LDU of the anti-transpose: with
/// a ↦ aᵃ the reflection along the anti-diagonal, C = (Uᵃ')(Dᵃ')(Lᵃ')
/// follows from Cᵃ = L'·D'·U' because reflection is a product-reversing
/// involution preserving triangle type.
pub fn udl<S: Scalar>(c: &DenseMatrix<S>) -> Result<GaussFactors<S>, GaussError> {
    let win = window_of(c)?;
    let flipped = c.anti_transpose()?;
    let f = ldu(&flipped)?;
    let refl = |i: i32| -> i32 { win.lo + win.hi - i };
    let mut u = UnipotentMatrix::identity(win, Triangle::Upper);
    for (&(k, r), v) in f.u.entries() {
        u.set(refl(r), refl(k), v.clone())?;
    }
    let mut l = UnipotentMatrix::identity(win, Triangle::Lower);
    for (&(k, r), v) in f.l.entries() {
        l.set(refl(r), refl(k), v.clone())?;
    }
    let mut d: Vec<(i32, S)> = f.d.iter().map(|(i, v)| (refl(*i), v.clone())).collect();
    d.sort_by_key(|a| a.0);
    Ok(GaussFactors { l, d, u })
}

/// U·D·L reassembly for factors produced by [`udl`].
pub fn reassemble_udl<S: Scalar>(f: &GaussFactors<S>) -> DenseMatrix<S> {
    f.u.to_dense()
        .mul(&f.d_matrix())
        .unwrap()
        .mul(&f.l.to_dense())
        .unwrap()
}

/// Streamed LDU over a growing, nested family of windows.
///
/// The radius-r matrix must extend the previous one as its leading
/// principal block (labels included). Factors at consecutive radii are
/// asserted block-stable, which the minor formulas guarantee for any
/// honestly nested supplier.
pub struct LduStream<S, F> {
    supplier: F,
    radii: std::vec::IntoIter<usize>,
    prev: Option<(DenseMatrix<S>, GaussFactors<S>)>,
}

impl<S, F> LduStream<S, F>
where
    S: Scalar,
    F: FnMut(usize) -> DenseMatrix<S>,
{
    pub fn new(supplier: F, radii: Vec<usize>) -> Self {
        LduStream { supplier, radii: radii.into_iter(), prev: None }
    }
}

impl<S, F> Iterator for LduStream<S, F>
where
    S: Scalar,
    F: FnMut(usize) -> DenseMatrix<S>,
{
    type Item = Result<(usize, GaussFactors<S>), GaussError>;

    fn next(&mut self) -> Option<Self::Item> {
        let radius = self.radii.next()?;
        let c = (self.supplier)(radius);
        if let Some((pc, _)) = &self.prev {
            let plen = pc.rows().len();
            if c.rows().len() < plen
                || c.rows()[..plen] != *pc.rows()
                || c.cols()[..plen] != *pc.cols()
            {
                return Some(Err(GaussError::WindowNotNested(radius)));
            }
            for i in 0..plen {
                for j in 0..plen {
                    if c.get_pos(i, j) != pc.get_pos(i, j) {
                        return Some(Err(GaussError::WindowNotNested(radius)));
                    }
                }
            }
        }
        let factors = match ldu(&c) {
            Ok(f) => f,
            Err(e) => return Some(Err(e)),
        };
        if let Some((pc, pf)) = &self.prev {
            let plen = pc.rows().len();
            assert_eq!(
                factors.truncate(plen),
                *pf,
                "streamed factors must be block-stable under window growth"
            );
        }
        self.prev = Some((c, factors.clone()));
        Some(Ok((radius, factors)))
    }
}
