//! Exact scalar kernel: arbitrary-precision rationals, multivariate
//! polynomials over indexed variables, and unreduced rational functions.
//!
//! Polynomials carry a per-term power of the formal central symbol `tau`
//! (standing for 2πi); it is never expanded numerically here. Canonical form
//! is a graded-lexicographic term order, so equal polynomials have identical
//! stored (and rendered) form.

mod parse;

pub use parse::{parse_poly, parse_rational, parse_ratfun};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;

/// Shorthand for small rational constants.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Integer rational.
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("unbound variable {0}")]
    UnboundVariable(VarId),
    #[error("tau is not numeric in an exact evaluation")]
    TauNotNumeric,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Variable roles, ordered X < Y < T < Aux for the global term order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarRole {
    X,
    Y,
    T,
    Aux,
}

/// An indexed variable `x[k,r]`, `y[k,r]`, `t[k,r]` or `a[k,r]`.
///
/// X and T variables sit strictly above the diagonal (row < col), Y
/// variables strictly below (row > col). `(role, row, col)` is the total
/// order key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub role: VarRole,
    pub row: i32,
    pub col: i32,
}

impl VarId {
    pub fn x(row: i32, col: i32) -> Self {
        assert!(row < col, "x[{row},{col}]: upper variables need row < col");
        VarId { role: VarRole::X, row, col }
    }

    pub fn y(row: i32, col: i32) -> Self {
        assert!(row > col, "y[{row},{col}]: lower variables need row > col");
        VarId { role: VarRole::Y, row, col }
    }

    pub fn t(row: i32, col: i32) -> Self {
        assert!(row < col, "t[{row},{col}]: upper variables need row < col");
        VarId { role: VarRole::T, row, col }
    }

    pub fn aux(row: i32, col: i32) -> Self {
        VarId { role: VarRole::Aux, row, col }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.role {
            VarRole::X => "x",
            VarRole::Y => "y",
            VarRole::T => "t",
            VarRole::Aux => "a",
        };
        write!(f, "{}[{},{}]", letter, self.row, self.col)
    }
}

/// A monomial: sorted variables with positive exponents plus a tau power.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    /// Sorted by `VarId`, exponents strictly positive.
    vars: Vec<(VarId, u32)>,
    tau: u32,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Self {
        Monomial { vars: vec![(v, 1)], tau: 0 }
    }

    pub fn tau_power(e: u32) -> Self {
        Monomial { vars: Vec::new(), tau: e }
    }

    pub fn degree(&self) -> u32 {
        self.tau + self.vars.iter().map(|(_, e)| e).sum::<u32>()
    }

    pub fn tau_degree(&self) -> u32 {
        self.tau
    }

    pub fn vars(&self) -> &[(VarId, u32)] {
        &self.vars
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.vars
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            match self.vars[i].0.cmp(&other.vars[j].0) {
                std::cmp::Ordering::Less => {
                    vars.push(self.vars[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    vars.push(other.vars[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    vars.push((self.vars[i].0, self.vars[i].1 + other.vars[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[j..]);
        Monomial { vars, tau: self.tau + other.tau }
    }

    /// Exact monomial quotient, `None` when `other` does not divide `self`.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.tau > self.tau {
            return None;
        }
        let mut vars = Vec::with_capacity(self.vars.len());
        let mut j = 0;
        for &(v, e) in &self.vars {
            if j < other.vars.len() && other.vars[j].0 == v {
                let oe = other.vars[j].1;
                j += 1;
                if oe > e {
                    return None;
                }
                if e > oe {
                    vars.push((v, e - oe));
                }
            } else {
                vars.push((v, e));
            }
        }
        if j < other.vars.len() {
            return None;
        }
        Some(Monomial { vars, tau: self.tau - other.tau })
    }
}

// Graded lexicographic: total degree first, then lex over the variable
// universe (tau, then VarId ascending) with the earlier variable most
// significant. A genuine monomial order, fixed globally so canonical forms
// are bit-stable and leading-term division terminates.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let grade = self.degree().cmp(&other.degree());
        if grade != Ordering::Equal {
            return grade;
        }
        let tau = self.tau.cmp(&other.tau);
        if tau != Ordering::Equal {
            return tau;
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.vars.get(i), other.vars.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va == vb {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    } else if va < vb {
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with rational coefficients in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rint(n))
    }

    pub fn var(v: VarId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Rational::one());
        Poly { terms }
    }

    pub fn tau() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::tau_power(1), Rational::one());
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().degree() == 0)
    }

    /// The constant value when `is_constant`, else `None`.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        let mut seen = std::collections::BTreeSet::new();
        self.terms
            .keys()
            .flat_map(|m| m.vars().iter().map(|(v, _)| *v))
            .filter(move |v| seen.insert(*v))
    }

    pub fn has_tau(&self) -> bool {
        self.terms.keys().any(|m| m.tau_degree() > 0)
    }

    fn insert_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiply by `tau^e`.
    pub fn mul_tau(&self, e: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.tau += e;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `v`; tau is a constant.
    pub fn partial(&self, v: VarId) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut vars: Vec<(VarId, u32)> = Vec::with_capacity(m.vars.len());
            for &(w, we) in &m.vars {
                if w == v {
                    if we > 1 {
                        vars.push((w, we - 1));
                    }
                } else {
                    vars.push((w, we));
                }
            }
            out.insert_term(Monomial { vars, tau: m.tau }, c * rint(e as i64));
        }
        out
    }

    /// Exact evaluation; fails on unbound variables or any tau power.
    pub fn eval(&self, assign: &BTreeMap<VarId, Rational>) -> Result<Rational, SymbolicError> {
        let parts = self.eval_tau_parts(assign)?;
        let mut it = parts.into_iter();
        match it.next() {
            None => Ok(Rational::zero()),
            Some((0, v)) if it.next().is_none() => Ok(v),
            _ => Err(SymbolicError::TauNotNumeric),
        }
    }

    /// Exact evaluation grouped by tau power: returns `(tau_degree, value)`
    /// pairs so callers can substitute their own value for tau.
    pub fn eval_tau_parts(
        &self,
        assign: &BTreeMap<VarId, Rational>,
    ) -> Result<Vec<(u32, Rational)>, SymbolicError> {
        let mut parts: BTreeMap<u32, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(var, e) in m.vars() {
                let val = assign
                    .get(&var)
                    .ok_or(SymbolicError::UnboundVariable(var))?;
                for _ in 0..e {
                    v *= val;
                }
            }
            *parts.entry(m.tau_degree()).or_insert_with(Rational::zero) += v;
        }
        Ok(parts.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    /// Substitute polynomials for variables (tau passes through).
    pub fn substitute_polys(&self, assign: &BTreeMap<VarId, Poly>) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone()).mul_tau(m.tau_degree());
            for &(var, e) in m.vars() {
                let base = assign.get(&var).cloned().unwrap_or_else(|| Poly::var(var));
                for _ in 0..e {
                    term = &term * &base;
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Exact polynomial quotient; `None` when the division is not exact.
    pub fn div_exact(&self, den: &Poly) -> Option<Poly> {
        if den.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::default());
        }
        let (dm, dc) = den.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::default();
        while !rem.is_zero() {
            let (lm, lc) = rem
                .terms
                .iter()
                .next_back()
                .map(|(m, c)| (m.clone(), c.clone()))
                .unwrap();
            let qm = lm.div(&dm)?;
            let qc = lc / &dc;
            let mut single = Poly::default();
            single.insert_term(qm, qc);
            rem = &rem - &(&single * den);
            quot = &quot + &single;
        }
        Some(quot)
    }

    /// Joint content of the coefficient list (gcd of numerators over lcm of
    /// denominators), used to keep RatFun representations small.
    fn content(&self) -> Rational {
        use num_integer::Integer;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rational::one()
        } else {
            Rational::new(num, den)
        }
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rational::one())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(Poly);

fn fmt_coeff(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_negative() {
        if c.denom().is_one() {
            write!(f, "({})", c.numer())
        } else {
            write!(f, "({}/{})", c.numer(), c.denom())
        }
    } else if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let unit_monomial = m.degree() == 0;
            let unit_coeff = c.is_one();
            if unit_monomial {
                fmt_coeff(f, c)?;
                continue;
            }
            let mut lead = false;
            if !unit_coeff {
                fmt_coeff(f, c)?;
                lead = true;
            }
            for &(v, e) in m.vars() {
                if lead {
                    write!(f, "*")?;
                }
                lead = true;
                write!(f, "{}", v)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
            if m.tau_degree() > 0 {
                if lead {
                    write!(f, "*")?;
                }
                write!(f, "tau")?;
                if m.tau_degree() > 1 {
                    write!(f, "^{}", m.tau_degree())?;
                }
            }
        }
        Ok(())
    }
}

/// Rational function `num/den`, not gcd-reduced; equality is decided by
/// cross-multiplication. Joint integer content is stripped on construction.
#[derive(Debug, Clone)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(Self::new_unchecked(num, den))
    }

    fn new_unchecked(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFun { num, den: Poly::one() };
        }
        // Cheap normalisations: exact cancellation when the division happens
        // to be polynomial, plus joint content stripping.
        if let Some(q) = num.div_exact(&den) {
            return RatFun { num: q, den: Poly::one() };
        }
        let c = {
            let cn = num.content();
            let cd = den.content();
            use num_integer::Integer;
            let g = cn.numer().gcd(cd.numer());
            let l = cn.denom().lcm(cd.denom());
            Rational::new(g, l)
        };
        if c.is_one() {
            RatFun { num, den }
        } else {
            let inv = c.recip();
            RatFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        RatFun::constant(rint(n))
    }

    pub fn var(v: VarId) -> Self {
        RatFun::from_poly(Poly::var(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The numerator when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly> {
        if self.is_polynomial() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<RatFun, SymbolicError> {
        if self.num.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(RatFun::new_unchecked(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, rhs: &RatFun) -> Result<RatFun, SymbolicError> {
        if rhs.num.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(RatFun::new_unchecked(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, assign: &BTreeMap<VarId, Rational>) -> Result<Rational, SymbolicError> {
        let den = self.den.eval(assign)?;
        if den.is_zero() {
            return Err(SymbolicError::DenominatorVanishes);
        }
        Ok(self.num.eval(assign)? / den)
    }
}

/// Exact evaluation of a rational function at a fully rational point.
pub fn substitute(
    f: &RatFun,
    assign: &BTreeMap<VarId, Rational>,
) -> Result<Rational, SymbolicError> {
    f.eval(assign)
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::from_poly(Poly::default())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFun {
    fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new_unchecked(&self.num + &rhs.num, self.den.clone());
        }
        RatFun::new_unchecked(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new_unchecked(&self.num - &rhs.num, self.den.clone());
        }
        RatFun::new_unchecked(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new_unchecked(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

owned_ops!(RatFun);

impl Div for RatFun {
    type Output = RatFun;
    fn div(self, rhs: RatFun) -> RatFun {
        self.try_div(&rhs).expect("division by zero rational function")
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
