//! Lie-algebra pairing, adjoint and coadjoint actions, generic-orbit
//! invariants, subordination tests and character construction.
//!
//! The coadjoint action is (t⁻¹ y t)₋, the strictly lower truncation of the
//! conjugate, taken as a right action; the pairing is ⟨y,x⟩ = tr(xy).

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::symbolic::{RatFun, Rational, SymbolicError, VarId};
use crate::unimat::{DenseMatrix, Functional, MatError, Triangle, UnipotentMatrix, Window};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error("subalgebra is not subordinate to the functional: pairing with [b{0}, b{1}] = {2}")]
    NotSubordinate(usize, usize, String),
    #[error("basis element {0} bracket {1} leaves the span of the subalgebra")]
    NotClosed(usize, usize),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Strictly upper-triangular windowed array: an element of the nilpotent
/// Lie algebra sitting above the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<S> {
    window: Window,
    entries: BTreeMap<(i32, i32), S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(window: Window) -> Self {
        AlgebraElement { window, entries: BTreeMap::new() }
    }

    /// The matrix unit E_{k,r}, k < r.
    pub fn unit(window: Window, k: i32, r: i32) -> Result<Self, MatError> {
        let mut e = Self::zero(window);
        e.set(k, r, num_traits::One::one())?;
        Ok(e)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn set(&mut self, k: i32, r: i32, v: S) -> Result<(), MatError> {
        if !self.window.contains(k) || !self.window.contains(r) {
            return Err(MatError::IndexOutOfWindow(k, r));
        }
        if k >= r {
            return Err(MatError::WrongTriangle(k, r));
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

    pub fn is_zero_element(&self) -> bool {
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

    fn from_dense_strict_upper(window: Window, d: &DenseMatrix<S>) -> Self {
        let mut out = Self::zero(window);
        for k in window.indices() {
            for r in window.indices() {
                if k < r {
                    let v = d.get(k, r).clone();
                    if !v.is_zero() {
                        out.set(k, r, v).unwrap();
                    }
                } else {
                    debug_assert!(d.get(k, r).is_zero(), "conjugate left the algebra");
                }
            }
        }
        out
    }

    /// Lie bracket [a, b] = ab - ba.
    pub fn bracket(&self, other: &AlgebraElement<S>) -> Result<AlgebraElement<S>, MatError> {
        if self.window != other.window {
            return Err(MatError::WindowMismatch("bracket windows differ".into()));
        }
        let a = self.to_dense();
        let b = other.to_dense();
        let ab = a.mul(&b)?;
        let ba = b.mul(&a)?;
        Ok(Self::from_dense_strict_upper(self.window, &ab.sub(&ba)))
    }
}

/// A subalgebra presented by a basis, checked to close under the bracket.
#[derive(Debug, Clone)]
pub struct Subalgebra<S> {
    basis: Vec<AlgebraElement<S>>,
}

impl<S: Scalar> Subalgebra<S> {
    /// Build after verifying closure of the basis under the bracket.
    pub fn new(basis: Vec<AlgebraElement<S>>) -> Result<Self, OrbitError> {
        let sub = Subalgebra { basis };
        sub.check_closed()?;
        Ok(sub)
    }

    pub fn basis(&self) -> &[AlgebraElement<S>] {
        &self.basis
    }

    fn coords(elem: &AlgebraElement<S>, pairs: &[(i32, i32)]) -> Vec<S> {
        pairs.iter().map(|&(k, r)| elem.get(k, r)).collect()
    }

    fn check_closed(&self) -> Result<(), OrbitError> {
        if self.basis.is_empty() {
            return Ok(());
        }
        let window = self.basis[0].window();
        let pairs = window.upper_pairs();
        // Row echelon of the basis coordinate vectors.
        let mut echelon: Vec<Vec<S>> = Vec::new();
        for b in &self.basis {
            let mut v = Self::coords(b, &pairs);
            reduce_against(&mut v, &echelon);
            if v.iter().any(|c| !c.is_zero()) {
                echelon.push(v);
            }
        }
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let br = self.basis[i].bracket(&self.basis[j])?;
                let mut v = Self::coords(&br, &pairs);
                reduce_against(&mut v, &echelon);
                if v.iter().any(|c| !c.is_zero()) {
                    return Err(OrbitError::NotClosed(i, j));
                }
            }
        }
        Ok(())
    }
}

/// Subtract multiples of echelon rows to reduce v; echelon rows have
/// distinct leading positions.
fn reduce_against<S: Scalar>(v: &mut [S], echelon: &[Vec<S>]) {
    for row in echelon {
        let lead = match row.iter().position(|c| !c.is_zero()) {
            Some(p) => p,
            None => continue,
        };
        if v[lead].is_zero() {
            continue;
        }
        let factor = v[lead].exact_div(&row[lead]);
        for (vi, ri) in v.iter_mut().zip(row.iter()) {
            *vi = vi.clone() - factor.clone() * ri.clone();
        }
    }
}

/// ⟨y, x⟩ = tr(xy) = Σ_{k<r} x_{kr} · y_{rk}.
pub fn pairing<S: Scalar>(y: &Functional<S>, x: &AlgebraElement<S>) -> Result<S, OrbitError> {
    if y.window() != x.window() {
        return Err(MatError::WindowMismatch("pairing windows differ".into()).into());
    }
    let mut sum = S::zero();
    for (&(k, r), xv) in x.entries() {
        let yv = y.get(r, k);
        if !yv.is_zero() {
            sum = sum + xv.clone() * yv;
        }
    }
    Ok(sum)
}

/// Ad_t(x) = t x t⁻¹; strictly upper automatically for the nilpotent algebra.
pub fn adjoint<S: Scalar>(
    t: &UnipotentMatrix<S>,
    x: &AlgebraElement<S>,
) -> Result<AlgebraElement<S>, OrbitError> {
    if t.window() != x.window() {
        return Err(MatError::WindowMismatch("adjoint windows differ".into()).into());
    }
    if t.triangle() != Triangle::Upper {
        return Err(MatError::WindowMismatch("adjoint expects an upper element".into()).into());
    }
    let prod = t
        .to_dense()
        .mul(&x.to_dense())?
        .mul(&t.invert().to_dense())?;
    Ok(AlgebraElement::from_dense_strict_upper(x.window(), &prod))
}

/// Ad*_t(y) = (t⁻¹ y t)₋, the strictly lower truncation of the conjugate.
pub fn coadjoint<S: Scalar>(
    t: &UnipotentMatrix<S>,
    y: &Functional<S>,
) -> Result<Functional<S>, OrbitError> {
    if t.window() != y.window() {
        return Err(MatError::WindowMismatch("coadjoint windows differ".into()).into());
    }
    if t.triangle() != Triangle::Upper {
        return Err(MatError::WindowMismatch("coadjoint expects an upper element".into()).into());
    }
    let w = y.window();
    let conj = t
        .invert()
        .to_dense()
        .mul(&y.to_dense())?
        .mul(&t.to_dense())?;
    let mut out = Functional::zero(w);
    for k in w.indices() {
        for r in w.indices() {
            if k > r {
                let v = conj.get(k, r).clone();
                if !v.is_zero() {
                    out.set(k, r, v)?;
                }
            }
        }
    }
    Ok(out)
}

/// The corner minors Δ_k: determinant of the last k rows against the first
/// k columns of the functional, k = 1 .. ⌊n/2⌋. Invariants of the coadjoint
/// action on the window.
pub fn orbit_invariants<S: Scalar>(y: &Functional<S>) -> Vec<S> {
    let w = y.window();
    let idx: Vec<i32> = w.indices().collect();
    let n = idx.len();
    let dense = y.to_dense();
    (1..=n / 2)
        .map(|k| {
            let rows = &idx[n - k..];
            let cols = &idx[..k];
            dense.minor(rows, cols).expect("window indices are valid")
        })
        .collect()
}

/// Outcome of the subordination test, carrying the violating basis pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinationReport<S> {
    pub subordinate: bool,
    /// (i, j, ⟨f, [b_i, b_j]⟩) for the first violating pair.
    pub witness: Option<(usize, usize, S)>,
}

/// h is subordinate to f iff ⟨f, [x, y]⟩ = 0 for all basis pairs;
/// bilinearity makes the basis check complete.
pub fn is_subordinate<S: Scalar>(
    h: &Subalgebra<S>,
    f: &Functional<S>,
) -> Result<SubordinationReport<S>, OrbitError> {
    for i in 0..h.basis().len() {
        for j in i + 1..h.basis().len() {
            let br = h.basis()[i].bracket(&h.basis()[j])?;
            let val = pairing(f, &br)?;
            if !val.is_zero() {
                return Ok(SubordinationReport {
                    subordinate: false,
                    witness: Some((i, j, val)),
                });
            }
        }
    }
    Ok(SubordinationReport { subordinate: true, witness: None })
}

/// Formal character exponent tau·⟨f, x⟩ with tau standing for 2πi.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterExponent {
    pub exponent: RatFun,
}

impl CharacterExponent {
    /// Unit-circle value exp(2πi·⟨f,x⟩) at a rational point: the rational
    /// argument is reduced mod 1 before the single float conversion.
    pub fn eval_unit_circle(
        &self,
        assign: &BTreeMap<VarId, Rational>,
    ) -> Result<(f64, f64), SymbolicError> {
        let den = self.exponent.den().eval(assign)?;
        if den.is_zero() {
            return Err(SymbolicError::DenominatorVanishes);
        }
        let parts = self.exponent.num().eval_tau_parts(assign)?;
        let mut arg = Rational::zero();
        for (deg, val) in parts {
            match deg {
                0 if val.is_zero() => {}
                1 => arg += val,
                _ => return Err(SymbolicError::TauNotNumeric),
            }
        }
        arg /= den;
        Ok(unit_circle(&arg))
    }
}

/// (cos 2πq, sin 2πq) with q reduced into [0,1) exactly first.
pub fn unit_circle(q: &Rational) -> (f64, f64) {
    let frac = q - q.floor();
    let angle = 2.0 * std::f64::consts::PI * rational_to_f64(&frac);
    (angle.cos(), angle.sin())
}

/// Exact rational to nearest double.
pub fn rational_to_f64(q: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).expect("rational converts to f64")
}

/// Character exponent tau·⟨f, x⟩, optionally validating subordination of the
/// subalgebra the element is taken from.
pub fn character(
    f: &Functional<RatFun>,
    x: &AlgebraElement<RatFun>,
    validate: Option<&Subalgebra<RatFun>>,
) -> Result<CharacterExponent, OrbitError> {
    if let Some(h) = validate {
        let rep = is_subordinate(h, f)?;
        if let Some((i, j, v)) = rep.witness {
            return Err(OrbitError::NotSubordinate(i, j, v.to_string()));
        }
    }
    let pair = pairing(f, x)?;
    let exponent = RatFun::new(pair.num().mul_tau(1), pair.den().clone())?;
    Ok(CharacterExponent { exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{rint, Poly};
    use num_traits::One;

    fn heis_t() -> UnipotentMatrix<RatFun> {
        let w = Window::size(3);
        let mut t = UnipotentMatrix::upper(w);
        t.set(1, 2, RatFun::var(VarId::t(1, 2))).unwrap();
        t.set(1, 3, RatFun::var(VarId::t(1, 3))).unwrap();
        t.set(2, 3, RatFun::var(VarId::t(2, 3))).unwrap();
        t
    }

    fn heis_y() -> Functional<RatFun> {
        let w = Window::size(3);
        let mut y = Functional::zero(w);
        y.set(2, 1, RatFun::var(VarId::y(2, 1))).unwrap();
        y.set(3, 1, RatFun::var(VarId::y(3, 1))).unwrap();
        y.set(3, 2, RatFun::var(VarId::y(3, 2))).unwrap();
        y
    }

    #[test]
    fn heisenberg_coadjoint_entries() {
        let t = heis_t();
        let y = heis_y();
        let ad = coadjoint(&t, &y).unwrap();
        let y21 = RatFun::var(VarId::y(2, 1));
        let y31 = RatFun::var(VarId::y(3, 1));
        let y32 = RatFun::var(VarId::y(3, 2));
        let t12 = RatFun::var(VarId::t(1, 2));
        let t23 = RatFun::var(VarId::t(2, 3));
        assert_eq!(ad.get(2, 1), &y21 - &(&t23 * &y31));
        assert_eq!(ad.get(3, 1), y31.clone());
        assert_eq!(ad.get(3, 2), &(&y31 * &t12) + &y32);

        let id = UnipotentMatrix::upper(Window::size(3));
        assert_eq!(coadjoint(&id, &y).unwrap(), y);
    }

    #[test]
    fn heisenberg_pairing() {
        let w = Window::size(3);
        let mut f = Functional::zero(w);
        f.set(2, 1, RatFun::var(VarId::y(2, 1))).unwrap();
        f.set(3, 2, RatFun::var(VarId::y(3, 2))).unwrap();
        let mut x = AlgebraElement::zero(w);
        x.set(1, 2, RatFun::var(VarId::x(1, 2))).unwrap();
        x.set(1, 3, RatFun::var(VarId::x(1, 3))).unwrap();
        x.set(2, 3, RatFun::var(VarId::x(2, 3))).unwrap();
        let p = pairing(&f, &x).unwrap();
        let expect = &(&RatFun::var(VarId::x(1, 2)) * &RatFun::var(VarId::y(2, 1)))
            + &(&RatFun::var(VarId::x(2, 3)) * &RatFun::var(VarId::y(3, 2)));
        assert_eq!(p, expect);
        assert!(pairing(&f, &AlgebraElement::zero(w)).unwrap().is_zero());
    }

    #[test]
    fn adjoint_matches_direct_product() {
        let w = Window::size(4);
        let mut t = UnipotentMatrix::<Rational>::upper(w);
        t.set(1, 2, rint(2)).unwrap();
        t.set(2, 4, rint(-3)).unwrap();
        t.set(3, 4, rint(5)).unwrap();
        let mut x = AlgebraElement::<Rational>::zero(w);
        x.set(1, 3, rint(7)).unwrap();
        x.set(2, 3, rint(1)).unwrap();
        let ad = adjoint(&t, &x).unwrap();
        let direct = t
            .to_dense()
            .mul(&x.to_dense())
            .unwrap()
            .mul(&t.invert().to_dense())
            .unwrap();
        assert_eq!(ad.to_dense(), direct);
        // identity and commuting cases
        let id = UnipotentMatrix::<Rational>::upper(w);
        assert_eq!(adjoint(&id, &x).unwrap(), x);
    }

    #[test]
    fn invariants_on_b5_point() {
        let w = Window::size(5);
        let mut y = Functional::<RatFun>::zero(w);
        y.set(5, 1, RatFun::var(VarId::y(5, 1))).unwrap();
        y.set(4, 2, RatFun::var(VarId::y(4, 2))).unwrap();
        let inv = orbit_invariants(&y);
        assert_eq!(inv.len(), 2);
        assert_eq!(inv[0], RatFun::var(VarId::y(5, 1)));
        // det [[y41=0, y42],[y51, y52=0]] = -y42*y51
        assert_eq!(
            inv[1],
            -(&RatFun::var(VarId::y(4, 2)) * &RatFun::var(VarId::y(5, 1)))
        );
        let zero = Functional::<RatFun>::zero(w);
        assert!(orbit_invariants(&zero).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn subordination_heisenberg_cases() {
        let w = Window::size(3);
        let full: Vec<_> = [(1, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(k, r)| AlgebraElement::<RatFun>::unit(w, k, r).unwrap())
            .collect();
        let g = Subalgebra::new(full).unwrap();

        // case 1: y31 = 0 makes the whole algebra subordinate
        let mut f1 = Functional::zero(w);
        f1.set(2, 1, RatFun::var(VarId::y(2, 1))).unwrap();
        f1.set(3, 2, RatFun::var(VarId::y(3, 2))).unwrap();
        assert!(is_subordinate(&g, &f1).unwrap().subordinate);

        // h1 = span{E13, E23} is subordinate to any functional
        let h1 = Subalgebra::new(vec![
            AlgebraElement::<RatFun>::unit(w, 1, 3).unwrap(),
            AlgebraElement::<RatFun>::unit(w, 2, 3).unwrap(),
        ])
        .unwrap();
        assert!(is_subordinate(&h1, &heis_y()).unwrap().subordinate);

        // y31 != 0: the full algebra fails with witness [E12, E23] = E13
        let rep = is_subordinate(&g, &heis_y()).unwrap();
        assert!(!rep.subordinate);
        let (i, j, v) = rep.witness.unwrap();
        assert_eq!((i, j), (0, 2));
        assert_eq!(v, RatFun::var(VarId::y(3, 1)));
    }

    #[test]
    fn character_exponent_b5() {
        // H3 on B(5): exponent tau(t15 y51 + t24 y42)
        let w = Window::size(5);
        let mut f = Functional::zero(w);
        f.set(5, 1, RatFun::var(VarId::y(5, 1))).unwrap();
        f.set(4, 2, RatFun::var(VarId::y(4, 2))).unwrap();
        let mut x = AlgebraElement::zero(w);
        x.set(1, 5, RatFun::var(VarId::t(1, 5))).unwrap();
        x.set(2, 4, RatFun::var(VarId::t(2, 4))).unwrap();
        let ch = character(&f, &x, None).unwrap();
        let expect = &(&Poly::var(VarId::t(1, 5)) * &Poly::var(VarId::y(5, 1)))
            + &(&Poly::var(VarId::t(2, 4)) * &Poly::var(VarId::y(4, 2)));
        assert_eq!(ch.exponent, RatFun::from_poly(expect.mul_tau(1)));

        // zero functional: exponent 0, character identically 1
        let zero = Functional::zero(w);
        let ch0 = character(&zero, &x, None).unwrap();
        assert!(ch0.exponent.is_zero());
        let mut assign = BTreeMap::new();
        assign.insert(VarId::t(1, 5), rint(3));
        assign.insert(VarId::t(2, 4), rint(-2));
        let (re, im) = ch0.eval_unit_circle(&assign).unwrap();
        assert_eq!((re, im), (1.0, 0.0));
    }

    #[test]
    fn character_validation_rejects_non_subordinate_algebras() {
        let w = Window::size(3);
        let g = Subalgebra::new(
            [(1, 2), (1, 3), (2, 3)]
                .iter()
                .map(|&(k, r)| AlgebraElement::<RatFun>::unit(w, k, r).unwrap())
                .collect(),
        )
        .unwrap();
        let mut x = AlgebraElement::zero(w);
        x.set(1, 2, RatFun::var(VarId::x(1, 2))).unwrap();
        let err = character(&heis_y(), &x, Some(&g));
        assert!(matches!(err, Err(OrbitError::NotSubordinate(0, 2, _))));
    }

    #[test]
    fn closure_check_rejects_open_sets() {
        let w = Window::size(3);
        // {E12, E23} brackets to E13 outside the span
        let err = Subalgebra::new(vec![
            AlgebraElement::<RatFun>::unit(w, 1, 2).unwrap(),
            AlgebraElement::<RatFun>::unit(w, 2, 3).unwrap(),
        ]);
        assert_eq!(err.err(), Some(OrbitError::NotClosed(0, 1)));
    }

    #[test]
    fn case2_points_are_fixed() {
        let w = Window::size(4);
        let mut y = Functional::<Rational>::zero(w);
        for k in 1..4 {
            y.set(k + 1, k, rint(k as i64 + 1)).unwrap();
        }
        for (k, r) in w.upper_pairs() {
            let mut t = UnipotentMatrix::<Rational>::upper(w);
            t.set(k, r, rint(3)).unwrap();
            assert_eq!(coadjoint(&t, &y).unwrap(), y, "fixed under E({k},{r})");
        }
    }

    #[test]
    fn pairing_bilinear_form_antisymmetry() {
        let w = Window::size(4);
        let y = {
            let mut f = Functional::<Rational>::zero(w);
            f.set(2, 1, rint(3)).unwrap();
            f.set(4, 1, rint(-2)).unwrap();
            f.set(4, 3, rint(5)).unwrap();
            f
        };
        let mut a = AlgebraElement::<Rational>::zero(w);
        a.set(1, 2, rint(2)).unwrap();
        a.set(3, 4, rint(-1)).unwrap();
        let mut b = AlgebraElement::<Rational>::zero(w);
        b.set(2, 4, rint(4)).unwrap();
        b.set(1, 3, rint(1)).unwrap();
        let ab = pairing(&y, &a.bracket(&b).unwrap()).unwrap();
        let ba = pairing(&y, &b.bracket(&a).unwrap()).unwrap();
        assert_eq!(ab, -ba);
        assert!(!ab.is_zero() || Rational::one().is_one());
    }
}
