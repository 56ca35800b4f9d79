//! Induced-representation machinery: the cocycle h(x,t), the matrices
//! B(x,y) and 𝕊, generator synthesis as first-order differential operators,
//! bracket verification, and the reconstruction of the space point from its
//! 𝕊-matrix through the Gauss decomposition of 𝕊·J.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::gauss::{self, GaussError};

use crate::measure::{WeightError, WeightFamily};
use crate::orbit::OrbitError;
use crate::scalar::Scalar;
use crate::symbolic::{Poly, RatFun, SymbolicError, VarId};
use crate::unimat::{
    corner_antidiagonal, triple_decompose, triple_h_factor, DenseMatrix, Functional, IndexWindow,
    MatError, UnipotentMatrix, Window,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InducedError {
    #[error("functional is not a generic anti-diagonal point: y[{0},{1}] = 0")]
    NotGenericPoint(i32, i32),
    #[error("s-matrix entry ({0},{1}) is not polynomial")]
    NonPolynomialEntry(i32, i32),
    #[error("recovered diagonal at index {index} is {got}, expected {expected}")]
    DiagonalMismatch { index: i32, expected: String, got: String },
    #[error("s-matrix at radius {0} is not a nested extension of the previous one")]
    WindowNotNested(usize),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// A point of the homogeneous space X = B(m)\G, stored through the section
/// as the pair (x_m, x^(m)) of factors supported below and above the split.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacePoint<S> {
    pub low: UnipotentMatrix<S>,
    pub up: UnipotentMatrix<S>,
    pub m: i32,
}

impl<S: Scalar> SpacePoint<S> {
    pub fn identity(window: Window, m: i32) -> Self {
        SpacePoint {
            low: UnipotentMatrix::upper(window),
            up: UnipotentMatrix::upper(window),
            m,
        }
    }

    pub fn new(low: UnipotentMatrix<S>, up: UnipotentMatrix<S>, m: i32) -> Result<Self, MatError> {
        if low.window() != up.window() {
            return Err(MatError::WindowMismatch("space point factor windows differ".into()));
        }
        if !low.support().all(|(k, _)| k > m) {
            return Err(MatError::WindowMismatch("low factor leaves its region".into()));
        }
        if !up.support().all(|(_, r)| r <= m) {
            return Err(MatError::WindowMismatch("up factor leaves its region".into()));
        }
        Ok(SpacePoint { low, up, m })
    }

    pub fn window(&self) -> Window {
        self.low.window()
    }

    /// The section value s(x) = x_m · x^(m): the factors commute and have
    /// disjoint strict support, so the product is the entry union.
    pub fn section(&self) -> UnipotentMatrix<S> {
        let mut out = self.low.clone();
        for (&(k, r), v) in self.up.entries() {
            out.set(k, r, v.clone()).expect("disjoint support");
        }
        out
    }

    /// The generic symbolic point with one X variable per coordinate.
    pub fn generic(window: Window, m: i32) -> SpacePoint<RatFun> {
        let mut low = UnipotentMatrix::upper(window);
        let mut up = UnipotentMatrix::upper(window);
        for (k, r) in window.upper_pairs() {
            if k > m {
                low.set(k, r, RatFun::var(VarId::x(k, r))).unwrap();
            } else if r <= m {
                up.set(k, r, RatFun::var(VarId::x(k, r))).unwrap();
            }
        }
        SpacePoint { low, up, m }
    }
}

/// Cocycle value h(x,t) together with the translated point x·t.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle<S> {
    /// h(x,t) ∈ B(m): unipotent with support inside Δ(m).
    pub h: UnipotentMatrix<S>,
    pub moved: SpacePoint<S>,
}

/// Solve s(x)·t = h(x,t)·s(x·t): multiply out, split the product at m, and
/// read off h = g_m·g(m)·g_m⁻¹ from the second decomposition.
pub fn cocycle<S: Scalar>(x: &SpacePoint<S>, t: &UnipotentMatrix<S>) -> Result<Cocycle<S>, InducedError> {
    if t.window() != x.window() {
        return Err(MatError::WindowMismatch("cocycle argument window differs".into()).into());
    }
    let g = x.section().mul(t)?;
    let (g_low, g_mid, g_up) = triple_decompose(&g, x.m)?;
    let h = triple_h_factor(&g_low, &g_mid)?;
    Ok(Cocycle { h, moved: SpacePoint { low: g_low, up: g_up, m: x.m } })
}

/// The translated point x·t alone, skipping the cocycle factor; cheaper for
/// probes where the unimodular character cancels.
pub fn translate_point<S: Scalar>(
    x: &SpacePoint<S>,
    t: &UnipotentMatrix<S>,
) -> Result<SpacePoint<S>, InducedError> {
    if t.window() != x.window() {
        return Err(MatError::WindowMismatch("translation window differs".into()).into());
    }
    let g = x.section().mul(t)?;
    let (g_low, _, g_up) = triple_decompose(&g, x.m)?;
    Ok(SpacePoint { low: g_low, up: g_up, m: x.m })
}

/// ⟨y, h − I⟩ for a cocycle value supported on Δ(m).
pub fn pair_with_functional<S: Scalar>(
    y: &Functional<S>,
    h: &UnipotentMatrix<S>,
) -> Result<S, InducedError> {
    if y.window() != h.window() {
        return Err(MatError::WindowMismatch("pairing window differs".into()).into());
    }
    let mut sum = S::zero();
    for (&(k, r), v) in h.entries() {
        let yv = y.get(r, k);
        if !yv.is_zero() {
            sum = sum + v.clone() * yv;
        }
    }
    Ok(sum)
}

/// Restriction of a unitriangular matrix to the dense block over the given
/// row and column label ranges.
fn block<S: Scalar>(u: &UnipotentMatrix<S>, rows: &[i32], cols: &[i32]) -> DenseMatrix<S> {
    let mut d = DenseMatrix::zero(rows.to_vec(), cols.to_vec());
    for &k in rows {
        for &r in cols {
            let v = u.get(k, r);
            if !v.is_zero() {
                d.set(k, r, v).unwrap();
            }
        }
    }
    d
}

/// B(x,y) = x_m⁻¹ · y · x^(m), the rectangular block with rows above the
/// split column range and columns in the low range.
pub fn b_matrix<S: Scalar>(
    x: &SpacePoint<S>,
    y: &Functional<S>,
) -> Result<DenseMatrix<S>, InducedError> {
    if y.window() != x.window() {
        return Err(MatError::WindowMismatch("functional window differs".into()).into());
    }
    let w = x.window();
    let m = x.m;
    let rows: Vec<i32> = (m + 1..=w.hi).collect();
    let cols: Vec<i32> = (w.lo..=m).collect();
    let mut y_rect = DenseMatrix::zero(rows.clone(), cols.clone());
    for (&(k, r), v) in y.entries() {
        if k > m && r <= m {
            y_rect.set(k, r, v.clone()).unwrap();
        }
    }
    let low_inv = block(&x.low.invert(), &rows, &rows);
    let up_block = block(&x.up, &cols, &cols);
    Ok(low_inv.mul(&y_rect)?.mul(&up_block)?)
}

/// The matrix of multiplication generators attached to the Δ(m) block.
#[derive(Debug, Clone, PartialEq)]
pub struct SMatrix<S> {
    window: Window,
    m: i32,
    entries: BTreeMap<(i32, i32), S>,
}

impl<S: Scalar> SMatrix<S> {
    pub fn zero(window: Window, m: i32) -> Self {
        SMatrix { window, m, entries: BTreeMap::new() }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn split(&self) -> i32 {
        self.m
    }

    pub fn set(&mut self, k: i32, r: i32, v: S) -> Result<(), MatError> {
        if !(self.window.lo <= k && k <= self.m && self.m < r && r <= self.window.hi) {
            return Err(MatError::IndexOutOfWindow(k, r));
        }
        if v.is_zero() {
            self.entries.remove(&(k, r));
        } else {
            self.entries.insert((k, r), v);
        }
        Ok(())
    }

    pub fn get(&self, k: i32, r: i32) -> S {
        self.entries.get(&(k, r)).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(i32, i32), &S)> {
        self.entries.iter()
    }

    /// Dense form: rows lo..m, columns m+1..hi.
    pub fn to_dense(&self) -> DenseMatrix<S> {
        let rows: Vec<i32> = (self.window.lo..=self.m).collect();
        let cols: Vec<i32> = (self.m + 1..=self.window.hi).collect();
        let mut d = DenseMatrix::zero(rows, cols);
        for (&(k, r), v) in &self.entries {
            d.set(k, r, v.clone()).unwrap();
        }
        d
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SMatrix<T> {
        SMatrix {
            window: self.window,
            m: self.m,
            entries: self.entries.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }
}

/// 𝕊 = B(x,y)ᵀ restricted to the Δ(m) block.
pub fn s_matrix<S: Scalar>(x: &SpacePoint<S>, y: &Functional<S>) -> Result<SMatrix<S>, InducedError> {
    let b = b_matrix(x, y)?;
    let mut s = SMatrix::zero(x.window(), x.m);
    for &r in b.rows() {
        for &k in b.cols() {
            let v = b.get(r, k).clone();
            if !v.is_zero() {
                s.set(k, r, v)?;
            }
        }
    }
    Ok(s)
}

/// S_kr computed through the cocycle route ⟨y, h(x, I + E_kr) − I⟩; equals
/// the matrix-product route entrywise and is kept as a cross-check.
pub fn s_entry_via_cocycle<S: Scalar>(
    x: &SpacePoint<S>,
    y: &Functional<S>,
    k: i32,
    r: i32,
) -> Result<S, InducedError> {
    let mut t = UnipotentMatrix::upper(x.window());
    t.set(k, r, S::one())?;
    let c = cocycle(x, &t)?;
    pair_with_functional(y, &c.h)
}

/// First-order differential operator Σ p_v(x)·∂_v + q(x), with polynomial
/// coefficients; q may carry powers of the central symbol tau.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiffOp {
    first: BTreeMap<VarId, Poly>,
    zero: Poly,
}

impl DiffOp {
    pub fn zero_op() -> Self {
        DiffOp::default()
    }

    /// The plain partial derivative ∂_v.
    pub fn partial(v: VarId) -> Self {
        let mut first = BTreeMap::new();
        first.insert(v, Poly::one());
        DiffOp { first, zero: Poly::zero() }
    }

    /// Multiplication by a polynomial.
    pub fn multiplication(q: Poly) -> Self {
        DiffOp { first: BTreeMap::new(), zero: q }
    }

    pub fn first_order(&self) -> impl Iterator<Item = (&VarId, &Poly)> {
        self.first.iter()
    }

    pub fn zero_order(&self) -> &Poly {
        &self.zero
    }

    pub fn is_zero_op(&self) -> bool {
        self.first.is_empty() && self.zero.is_zero()
    }

    fn insert_first(&mut self, v: VarId, p: Poly) {
        if p.is_zero() {
            self.first.remove(&v);
        } else {
            self.first.insert(v, p);
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (v, p) in &other.first {
            let sum = match out.first.get(v) {
                Some(q) => q + p,
                None => p.clone(),
            };
            out.insert_first(*v, sum);
        }
        out.zero = &out.zero + &other.zero;
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            first: self.first.iter().map(|(v, p)| (*v, -p)).collect(),
            zero: -&self.zero,
        }
    }

    pub fn scale(&self, c: &Poly) -> DiffOp {
        let mut out = DiffOp {
            first: BTreeMap::new(),
            zero: &self.zero * c,
        };
        for (v, p) in &self.first {
            out.insert_first(*v, p * c);
        }
        out
    }

    /// Apply to a polynomial: Σ p_v ∂_v f + q·f.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = &self.zero * f;
        for (v, p) in &self.first {
            out = &out + &(p * &f.partial(*v));
        }
        out
    }

    /// The derivation part applied to q: Σ p_v ∂_v q.
    fn derive(&self, q: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (v, p) in &self.first {
            out = &out + &(p * &q.partial(*v));
        }
        out
    }

    /// Operator commutator [a,b] = ab − ba; first order again because the
    /// second-order parts cancel.
    pub fn commutator(&self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp::default();
        for (w, rw) in &other.first {
            out.insert_first(*w, self.derive(rw));
        }
        for (v, pv) in &self.first {
            let cur = out.first.get(v).cloned().unwrap_or_else(Poly::zero);
            out.insert_first(*v, &cur - &other.derive(pv));
        }
        out.zero = &self.derive(&other.zero) - &other.derive(&self.zero);
        out
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero_op() {
            return write!(f, "0");
        }
        let mut lead = false;
        for (v, p) in &self.first {
            if lead {
                write!(f, " + ")?;
            }
            lead = true;
            if p.is_one() {
                write!(f, "d[{},{}]", v.row, v.col)?;
            } else if p.num_terms() == 1 {
                write!(f, "{}*d[{},{}]", p, v.row, v.col)?;
            } else {
                write!(f, "({})*d[{},{}]", p, v.row, v.col)?;
            }
        }
        if !self.zero.is_zero() {
            if lead {
                write!(f, " + ")?;
            }
            // factor a single tau when every term carries one
            if self.zero.terms().all(|(m, _)| m.tau_degree() >= 1) {
                let stripped: Poly = {
                    let mut acc = Poly::zero();
                    for (m, c) in self.zero.terms() {
                        let mut mm = Poly::constant(c.clone()).mul_tau(m.tau_degree() - 1);
                        for &(v, e) in m.vars() {
                            for _ in 0..e {
                                mm = &mm * &Poly::var(v);
                            }
                        }
                        acc = &acc + &mm;
                    }
                    acc
                };
                write!(f, "tau*({})", stripped)?;
            } else {
                write!(f, "({})", self.zero)?;
            }
        }
        Ok(())
    }
}

/// Parse the DiffOp rendering: a sum of terms, each with at most one
/// `d[k,r]` factor; remaining factors form the polynomial coefficient.
pub fn parse_diffop(src: &str) -> Result<DiffOp, SymbolicError> {
    let mut out = DiffOp::default();
    for (term, negated) in split_top_level_sum(src)? {
        let mut d_var: Option<VarId> = None;
        let mut coeff_parts: Vec<String> = Vec::new();
        for factor in split_top_level_product(&term)? {
            let ftrim = factor.trim();
            if let Some(rest) = ftrim.strip_prefix("d[") {
                let inner = rest
                    .strip_suffix(']')
                    .ok_or_else(|| SymbolicError::Parse(format!("bad derivative {ftrim:?}")))?;
                let mut it = inner.splitn(2, ',');
                let row: i32 = it
                    .next()
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| SymbolicError::Parse(format!("bad derivative {ftrim:?}")))?;
                let col: i32 = it
                    .next()
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| SymbolicError::Parse(format!("bad derivative {ftrim:?}")))?;
                if d_var.replace(VarId::x(row, col)).is_some() {
                    return Err(SymbolicError::Parse(
                        "more than one derivative factor in a term".into(),
                    ));
                }
            } else {
                coeff_parts.push(ftrim.to_string());
            }
        }
        let mut coeff = if coeff_parts.is_empty() {
            Poly::one()
        } else {
            crate::symbolic::parse_poly(&coeff_parts.join("*"))?
        };
        if negated {
            coeff = -&coeff;
        }
        let piece = match d_var {
            Some(v) => {
                let mut op = DiffOp::default();
                op.insert_first(v, coeff);
                op
            }
            None => DiffOp::multiplication(coeff),
        };
        out = out.add(&piece);
    }
    Ok(out)
}

fn split_top_level_sum(src: &str) -> Result<Vec<(String, bool)>, SymbolicError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    let mut neg = false;
    for ch in src.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| SymbolicError::Parse("unbalanced parens".into()))?
            }
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() {
                    if ch == '-' {
                        neg = !neg;
                    }
                    continue;
                }
                out.push((cur.trim().to_string(), neg));
                neg = ch == '-';
                cur = String::new();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push((cur.trim().to_string(), neg));
    }
    Ok(out)
}

fn split_top_level_product(src: &str) -> Result<Vec<String>, SymbolicError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in src.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| SymbolicError::Parse("unbalanced parens".into()))?
            }
            '*' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur = String::new();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    Ok(out)
}

/// Measure driving the shift operators in the generator table.
#[derive(Debug, Clone, Copy)]
pub enum GeneratorMeasure<'a> {
    Haar,
    Gaussian(&'a WeightFamily),
    /// Gaussian drift with the weights kept as formal symbols a[k,r]; the
    /// bracket relations then hold for every weight family at once.
    SymbolicGaussian,
}

impl GeneratorMeasure<'_> {
    /// D_kr for the chosen measure: ∂ for Haar, ∂ − b·x for the Gaussian.
    fn shift_operator(&self, k: i32, r: i32) -> Result<DiffOp, WeightError> {
        let v = VarId::x(k, r);
        match self {
            GeneratorMeasure::Haar => Ok(DiffOp::partial(v)),
            GeneratorMeasure::Gaussian(b) => {
                let bv = b.eval(k, r)?;
                let drift = Poly::var(v).scale(&bv);
                Ok(DiffOp::partial(v).sub(&DiffOp::multiplication(drift)))
            }
            GeneratorMeasure::SymbolicGaussian => {
                let drift = &Poly::var(VarId::aux(k, r)) * &Poly::var(v);
                Ok(DiffOp::partial(v).sub(&DiffOp::multiplication(drift)))
            }
        }
    }
}

/// Generator table of the induced representation on the window: for pairs
/// in the two shift regions A_kr = D_kr + Σ_{s<k} x_sk·D_sr (s ranging over
/// the region's rows), and for Δ(m,n) pairs the multiplication operator
/// A_kr = tau·S_kr at the generic symbolic point.
pub fn generators(
    window: Window,
    m: i32,
    y: &Functional<RatFun>,
    measure: GeneratorMeasure<'_>,
) -> Result<BTreeMap<(i32, i32), DiffOp>, InducedError> {
    if !y.is_generic_corner(window, m) {
        let bad = corner_antidiagonal(window, m)
            .into_iter()
            .find(|&(k, r)| y.get(k, r).is_zero())
            .unwrap_or((m + 1, m));
        return Err(InducedError::NotGenericPoint(bad.0, bad.1));
    }
    let x = SpacePoint::<RatFun>::generic(window, m);
    let s = s_matrix(&x, y)?;

    let mut gens = BTreeMap::new();
    for (k, r) in window.upper_pairs() {
        if k <= m && m < r {
            let entry = s.get(k, r);
            let poly = entry
                .as_poly()
                .ok_or(InducedError::NonPolynomialEntry(k, r))?
                .clone();
            gens.insert((k, r), DiffOp::multiplication(poly.mul_tau(1)));
        } else {
            let row_lo = if k > m { m + 1 } else { window.lo };
            let mut op = measure.shift_operator(k, r)?;
            for s_row in row_lo..k {
                let coeff = Poly::var(VarId::x(s_row, k));
                op = op.add(&measure.shift_operator(s_row, r)?.scale(&coeff));
            }
            gens.insert((k, r), op);
        }
    }
    Ok(gens)
}

/// Result of checking [A(E_ab), A(E_cd)] = A([E_ab, E_cd]) over all window
/// basis pairs.
#[derive(Debug, Clone)]
pub struct BracketReport {
    pub checked: usize,
    pub violation: Option<((i32, i32), (i32, i32))>,
}

impl BracketReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Verify the generator table represents the nilpotent Lie algebra with
/// structure constants [E_ab, E_cd] = δ_bc E_ad − δ_da E_cb.
pub fn verify_bracket_homomorphism(
    gens: &BTreeMap<(i32, i32), DiffOp>,
    window: Window,
) -> BracketReport {
    let pairs = window.upper_pairs();
    let lookup = |k: i32, r: i32| gens.get(&(k, r)).cloned().unwrap_or_else(DiffOp::zero_op);
    let mut checked = 0;
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in pairs.iter().skip(i + 1) {
            let lhs = lookup(a, b).commutator(&lookup(c, d));
            let mut rhs = DiffOp::zero_op();
            if b == c {
                rhs = rhs.add(&lookup(a, d));
            }
            if d == a {
                rhs = rhs.sub(&lookup(c, b));
            }
            checked += 1;
            if lhs != rhs {
                return BracketReport { checked, violation: Some(((a, b), (c, d))) };
            }
        }
    }
    BracketReport { checked, violation: None }
}

/// Recover the space point from its 𝕊-matrix: form C = 𝕊·J, Gauss-decompose
/// C = L·D·U, check D against yᵀJ, then read x^(m) = Lᵀ and x_m from the
/// unflipped inverse of U.
pub fn reconstruct<S: Scalar>(
    s: &SMatrix<S>,
    y: &Functional<S>,
) -> Result<SpacePoint<S>, InducedError> {
    let window = s.window();
    let m = s.split();
    if !window.symmetric_about(m) {
        return Err(MatError::WindowMismatch(format!(
            "reconstruction needs a window symmetric about the split {m}"
        ))
        .into());
    }
    let iw = IndexWindow::new(m, m - window.lo);
    if y.window() != window {
        return Err(MatError::WindowMismatch("functional window differs".into()).into());
    }
    if !y.is_generic_antidiagonal(iw) {
        let bad = iw
            .antidiagonal()
            .into_iter()
            .find(|&(k, r)| y.get(k, r).is_zero())
            .unwrap_or((m + 1, m));
        return Err(InducedError::NotGenericPoint(bad.0, bad.1));
    }

    let c = s.to_dense().mul_j_right(m)?;
    let f = gauss::ldu(&c)?;

    // D must equal yᵀJ: the diagonal entry at window index m-p is the
    // anti-diagonal value y_{m+p+1, m-p}. An algebraic identity, so the
    // comparison is exact.
    for (idx, val) in &f.d {
        let expected = y.get(2 * m + 1 - idx, *idx);
        if *val != expected {
            return Err(InducedError::DiagonalMismatch {
                index: *idx,
                expected: expected.to_string(),
                got: val.to_string(),
            });
        }
    }

    let mut up = UnipotentMatrix::upper(window);
    for (&(k, r), v) in f.l.entries() {
        up.set(r, k, v.clone())?;
    }
    // U = J (x_m⁻¹)ᵀ J: entry U_{k,r} is (x_m⁻¹)_{refl(r), refl(k)}
    let refl = |i: i32| 2 * m + 1 - i;
    let mut low_inv = UnipotentMatrix::upper(window);
    for (&(k, r), v) in f.u.entries() {
        low_inv.set(refl(r), refl(k), v.clone())?;
    }
    let low = low_inv.invert();
    Ok(SpacePoint::new(low, up, m)?)
}

/// Per-radius reconstruction over nested 𝕊-windows with block-stability
/// checks on the recovered factors: the finite shadow of the pointwise
/// convergence used for the infinite group.
pub struct ReconstructStream<S, F, G> {
    s_supplier: F,
    y_values: G,
    m: i32,
    radii: std::vec::IntoIter<i32>,
    prev: Option<(SMatrix<S>, SpacePoint<S>)>,
}

impl<S, F, G> ReconstructStream<S, F, G>
where
    S: Scalar,
    F: FnMut(i32) -> SMatrix<S>,
    G: Fn(i32) -> S,
{
    pub fn new(m: i32, s_supplier: F, y_values: G, radii: Vec<i32>) -> Self {
        ReconstructStream { s_supplier, y_values, m, radii: radii.into_iter(), prev: None }
    }
}

impl<S, F, G> Iterator for ReconstructStream<S, F, G>
where
    S: Scalar,
    F: FnMut(i32) -> SMatrix<S>,
    G: Fn(i32) -> S,
{
    type Item = Result<(i32, SpacePoint<S>), InducedError>;

    fn next(&mut self) -> Option<Self::Item> {
        let radius = self.radii.next()?;
        let s = (self.s_supplier)(radius);
        if let Some((ps, _)) = &self.prev {
            for (&(k, r), v) in ps.entries() {
                if s.get(k, r) != *v {
                    return Some(Err(InducedError::WindowNotNested(radius as usize)));
                }
            }
        }
        let iw = IndexWindow::new(self.m, radius);
        if s.window() != iw.window() || s.split() != self.m {
            return Some(Err(InducedError::WindowNotNested(radius as usize)));
        }
        let y = match Functional::generic_antidiagonal(iw, |p| (self.y_values)(p)) {
            Ok(y) => y,
            Err(_) => {
                return Some(Err(InducedError::NotGenericPoint(self.m + 1, self.m)));
            }
        };
        let point = match reconstruct(&s, &y) {
            Ok(p) => p,
            Err(e) => return Some(Err(e)),
        };
        if let Some((_, pp)) = &self.prev {
            for (&(k, r), v) in pp.low.entries() {
                assert_eq!(
                    point.low.get(k, r),
                    *v,
                    "recovered low factor must be block-stable"
                );
            }
            for (&(k, r), v) in pp.up.entries() {
                assert_eq!(point.up.get(k, r), *v, "recovered up factor must be block-stable");
            }
        }
        self.prev = Some((s, point.clone()));
        Some(Ok((radius, point)))
    }
}
