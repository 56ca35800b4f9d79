//! Weight families, Gaussian product measures, Radon-Nikodym cocycles,
//! drift operators, and certified three-valued adjudication of the series
//! criteria for concentration, quasi-invariance and ergodicity.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::induced::DiffOp;
use crate::orbit::rational_to_f64;
use crate::symbolic::{rint, Poly, Rational, SymbolicError, VarId};
use crate::unimat::IndexWindow;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("weight parameter must be strictly positive, got {0}")]
    NonPositive(String),
    #[error("weight requested at ({0},{1}) with row >= column")]
    BadIndex(i32, i32),
    #[error("table has no entry for ({0},{1})")]
    MissingEntry(i32, i32),
    #[error("index ({0},{1}) outside the measure window")]
    IndexOutOfWindow(i32, i32),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Closed-form positive weight families b_kn (and a_kn), indexed by pairs
/// k < n; the 2Z-indexed table form covers everything else.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFamily {
    /// q^(n-k).
    Geometric(Rational),
    /// q^((n-k)^2).
    GaussLike(Rational),
    /// (n-k)!.
    Factorial,
    Table(BTreeMap<(i32, i32), Rational>),
}

impl WeightFamily {
    pub fn geometric(q: Rational) -> Result<Self, WeightError> {
        if q.is_positive() {
            Ok(WeightFamily::Geometric(q))
        } else {
            Err(WeightError::NonPositive(q.to_string()))
        }
    }

    pub fn gauss_like(q: Rational) -> Result<Self, WeightError> {
        if q.is_positive() {
            Ok(WeightFamily::GaussLike(q))
        } else {
            Err(WeightError::NonPositive(q.to_string()))
        }
    }

    pub fn table(entries: BTreeMap<(i32, i32), Rational>) -> Result<Self, WeightError> {
        for ((k, n), v) in &entries {
            if !v.is_positive() {
                return Err(WeightError::NonPositive(format!("b[{k},{n}] = {v}")));
            }
        }
        Ok(WeightFamily::Table(entries))
    }

    pub fn eval(&self, k: i32, n: i32) -> Result<Rational, WeightError> {
        if k >= n {
            return Err(WeightError::BadIndex(k, n));
        }
        let gap = (n - k) as u32;
        match self {
            WeightFamily::Geometric(q) => Ok(rat_pow(q, gap)),
            WeightFamily::GaussLike(q) => Ok(rat_pow(q, gap * gap)),
            WeightFamily::Factorial => {
                let mut v = Rational::one();
                for i in 2..=gap as i64 {
                    v *= rint(i);
                }
                Ok(v)
            }
            WeightFamily::Table(t) => t
                .get(&(k, n))
                .cloned()
                .ok_or(WeightError::MissingEntry(k, n)),
        }
    }
}

fn rat_pow(q: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= q;
    }
    out
}

/// Outcome of the submultiplicativity scan a_kn <= C·a_km·a_mn.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// First violating triple (k, m, n) with the two sides of the inequality.
    pub witness: Option<(i32, i32, i32, Rational, Rational)>,
}

/// Exhaustive submultiplicativity check over all triples k < m < n in the
/// window.
pub fn weight_admissible(
    a: &WeightFamily,
    c: &Rational,
    window: crate::unimat::Window,
) -> Result<AdmissibilityReport, WeightError> {
    for k in window.indices() {
        for m in k + 1..window.hi {
            for n in m + 1..=window.hi {
                let lhs = a.eval(k, n)?;
                let rhs = c * a.eval(k, m)? * a.eval(m, n)?;
                if lhs > rhs {
                    return Ok(AdmissibilityReport {
                        admissible: false,
                        witness: Some((k, m, n, lhs, rhs)),
                    });
                }
            }
        }
    }
    Ok(AdmissibilityReport { admissible: true, witness: None })
}

/// Product of centered one-dimensional Gaussians with density
/// sqrt(b/π)·exp(-b·x²) per coordinate of Δ_{m,n} ∪ Δ^{(m,n)}.
#[derive(Debug, Clone)]
pub struct GaussianMeasure {
    pub weights: WeightFamily,
    pub window: IndexWindow,
}

impl GaussianMeasure {
    pub fn new(weights: WeightFamily, window: IndexWindow) -> Self {
        GaussianMeasure { weights, window }
    }

    /// Coordinates carrying the measure.
    pub fn coordinates(&self) -> Vec<(i32, i32)> {
        let mut c = self.window.delta_low();
        c.extend(self.window.delta_up());
        c
    }

    pub fn weight(&self, k: i32, r: i32) -> Result<Rational, WeightError> {
        if !self.coordinates().contains(&(k, r)) {
            return Err(WeightError::IndexOutOfWindow(k, r));
        }
        self.weights.eval(k, r)
    }

    /// Coordinate variance 1/(2 b_kr).
    pub fn variance(&self, k: i32, r: i32) -> Result<Rational, WeightError> {
        Ok(rat_frac_recip(&(rint(2) * self.weight(k, r)?)))
    }
}

fn rat_frac_recip(q: &Rational) -> Rational {
    Rational::one() / q
}

/// One-coordinate Radon-Nikodym ratio dμ(x + tE)/dμ(x) and its square
/// root, with the exact log-scale argument kept alongside the floats.
#[derive(Debug, Clone, PartialEq)]
pub struct RnRatio {
    /// Exact exponent: log ratio = -b(2xt + t²).
    pub log_ratio: Rational,
    pub ratio: f64,
    pub sqrt_ratio: f64,
}

/// Density ratio for the shift of coordinate (k,r) by t at the point x.
pub fn rn_cocycle(
    mu: &GaussianMeasure,
    x: &BTreeMap<(i32, i32), Rational>,
    k: i32,
    r: i32,
    t: &Rational,
) -> Result<RnRatio, WeightError> {
    let b = mu.weight(k, r)?;
    let xv = x.get(&(k, r)).cloned().unwrap_or_else(Rational::zero);
    let log_ratio = -b * (rint(2) * &xv * t + t * t);
    Ok(rn_from_log(log_ratio))
}

fn rn_from_log(log_ratio: Rational) -> RnRatio {
    let lf = rational_to_f64(&log_ratio);
    RnRatio { log_ratio, ratio: lf.exp(), sqrt_ratio: (lf / 2.0).exp() }
}

/// Exact log density ratio dμ(to)/dμ(from) across all shifted coordinates.
pub fn log_density_ratio(
    mu: &GaussianMeasure,
    from: &BTreeMap<(i32, i32), Rational>,
    to: &BTreeMap<(i32, i32), Rational>,
) -> Result<Rational, WeightError> {
    let mut arg = Rational::zero();
    let zero = Rational::zero();
    let keys: std::collections::BTreeSet<&(i32, i32)> = from.keys().chain(to.keys()).collect();
    for key in keys {
        let a = from.get(key).unwrap_or(&zero);
        let b = to.get(key).unwrap_or(&zero);
        if a == b {
            continue;
        }
        let w = mu.weight(key.0, key.1)?;
        arg += w * (a * a - b * b);
    }
    Ok(arg)
}

/// Symbolic form of the one-coordinate shift exponent: -b(2·x_kr·t_kr + t_kr²).
pub fn rn_exponent_symbolic(mu: &GaussianMeasure, k: i32, r: i32) -> Result<Poly, WeightError> {
    let b = mu.weight(k, r)?;
    let x = Poly::var(VarId::x(k, r));
    let t = Poly::var(VarId::t(k, r));
    let arg = &(&x.scale(&rint(2)) * &t) + &(&t * &t);
    Ok(arg.scale(&-b))
}

/// The shift operator D_kr(μ_b) = ∂_kr − b_kr·x_kr.
pub fn drift_operator(mu: &GaussianMeasure, k: i32, r: i32) -> Result<DiffOp, WeightError> {
    let b = mu.weight(k, r)?;
    let v = VarId::x(k, r);
    Ok(DiffOp::partial(v).sub(&DiffOp::multiplication(Poly::var(v).scale(&b))))
}

/// Moment of the density sqrt(b/π)·exp(-b x²): zero for odd orders,
/// (2j-1)!! / (2b)^j for order 2j. Exact.
pub fn gaussian_moment(b: &Rational, order: u32) -> Rational {
    if order % 2 == 1 {
        return Rational::zero();
    }
    let j = order / 2;
    let mut num = Rational::one();
    let mut i = 1i64;
    for _ in 0..j {
        num *= rint(i);
        i += 2;
    }
    let mut den = Rational::one();
    for _ in 0..j {
        den *= rint(2) * b;
    }
    num / den
}

/// Exact expectation of a polynomial in window coordinates under the
/// product measure; fails on tau.
pub fn poly_expectation(p: &Poly, mu: &GaussianMeasure) -> Result<Rational, WeightError> {
    let mut total = Rational::zero();
    for (mon, coeff) in p.terms() {
        if mon.tau_degree() > 0 {
            return Err(WeightError::Symbolic(SymbolicError::TauNotNumeric));
        }
        let mut factor = coeff.clone();
        for &(v, e) in mon.vars() {
            let b = mu.weight(v.row, v.col)?;
            factor *= gaussian_moment(&b, e);
            if factor.is_zero() {
                break;
            }
        }
        total += factor;
    }
    Ok(total)
}

/// Three-valued adjudication of a series criterion, certified or honest
/// about being inconclusive.
#[derive(Debug, Clone, PartialEq)]
pub enum VerdictState {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Eventual shell-sum ratio bounded by ρ < 1.
    RatioBound(Rational),
    /// Shell sums bounded below by ε > 0.
    TermFloor(Rational),
    /// Tail is exactly zero.
    VanishingTail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub state: VerdictState,
    pub partial_sum: Rational,
    pub depth: usize,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    fn inconclusive(partial: Rational, depth: usize) -> Self {
        Verdict {
            state: VerdictState::Inconclusive,
            partial_sum: partial,
            depth,
            certificate: None,
        }
    }

    pub fn partial_sum_f64(&self) -> f64 {
        self.partial_sum.to_f64().unwrap_or(f64::NAN)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let state = match self.state {
            VerdictState::Converges => "CONVERGES",
            VerdictState::Diverges => "DIVERGES",
            VerdictState::Inconclusive => "INCONCLUSIVE",
        };
        write!(f, "{state} sum={:.12e} depth={}", self.partial_sum_f64(), self.depth)?;
        match &self.certificate {
            Some(Certificate::RatioBound(r)) => {
                write!(f, " certificate=ratio<{:.6}", rational_to_f64(r))
            }
            Some(Certificate::TermFloor(e)) => {
                write!(f, " certificate=floor>{:.6e}", rational_to_f64(e))
            }
            Some(Certificate::VanishingTail) => write!(f, " certificate=zero-tail"),
            None => Ok(()),
        }
    }
}

/// Certify from exact shell sums: all observed tail ratios below 1 gives a
/// ratio certificate, a non-decaying positive tail certifies divergence,
/// anything else stays inconclusive. The observation window is the last
/// half of the shells (at most 6).
fn adjudicate(shells: &[Rational]) -> Verdict {
    let depth = shells.len();
    let partial: Rational = shells.iter().cloned().sum();
    if depth == 0 {
        return Verdict::inconclusive(partial, depth);
    }
    let w = (depth / 2).clamp(1, 6);
    let tail = &shells[depth - w.min(depth)..];
    if tail.iter().all(|t| t.is_zero()) {
        return Verdict {
            state: VerdictState::Converges,
            partial_sum: partial,
            depth,
            certificate: Some(Certificate::VanishingTail),
        };
    }
    if depth < 2 {
        return Verdict::inconclusive(partial, depth);
    }
    let start = depth - w.min(depth - 1) - 1;
    let pairs: Vec<(&Rational, &Rational)> =
        shells[start..].windows(2).map(|p| (&p[0], &p[1])).collect();
    if pairs.iter().any(|(a, _)| a.is_zero()) {
        return Verdict::inconclusive(partial, depth);
    }
    let ratios: Vec<Rational> = pairs.iter().map(|(a, b)| *b / *a).collect();
    let one = Rational::one();
    if ratios.iter().all(|r| r < &one) {
        let rho = ratios.iter().cloned().fold(Rational::zero(), |a, b| a.max(b));
        return Verdict {
            state: VerdictState::Converges,
            partial_sum: partial,
            depth,
            certificate: Some(Certificate::RatioBound(rho)),
        };
    }
    if ratios.iter().all(|r| r >= &one) {
        let floor = shells[start..]
            .iter()
            .cloned()
            .fold(shells[start].clone(), |a, b| a.min(b));
        return Verdict {
            state: VerdictState::Diverges,
            partial_sum: partial,
            depth,
            certificate: Some(Certificate::TermFloor(floor)),
        };
    }
    Verdict::inconclusive(partial, depth)
}

/// Concentration criterion Σ a_kn/b_kn over the measure coordinates.
///
/// The adjudication follows the gap profile: shell d carries the largest
/// ratio a/b among same-gap pairs inside the depth window. For the named
/// translation-invariant families the raw series over the doubly infinite
/// family diverges as soon as one term does not vanish, so the profile is
/// the informative axis; a positive profile floor still certifies honest
/// divergence of the full series.
pub fn concentration_check(
    a: &WeightFamily,
    b: &WeightFamily,
    m: i32,
    depth: usize,
) -> Result<Verdict, WeightError> {
    let mut shells = Vec::with_capacity(depth);
    let n = depth as i32;
    for gap in 1..=depth as i32 {
        let mut worst: Option<Rational> = None;
        let iw = IndexWindow::new(m, n);
        for (k, r) in iw.delta_low().into_iter().chain(iw.delta_up()) {
            if r - k != gap {
                continue;
            }
            let term = a.eval(k, r)? / b.eval(k, r)?;
            worst = Some(match worst {
                Some(w) => w.max(term),
                None => term,
            });
        }
        shells.push(worst.unwrap_or_else(Rational::zero));
    }
    Ok(adjudicate(&shells))
}

/// Quasi-invariance tail S^R_kn(μ_b) = Σ_{r → -∞} b_rn / b_rk for a fixed
/// pair k < n; shells are the individual terms r = k-1, k-2, ...
pub fn quasi_invariance_check(
    b: &WeightFamily,
    k: i32,
    n: i32,
    depth: usize,
) -> Result<Verdict, WeightError> {
    if k >= n {
        return Err(WeightError::BadIndex(k, n));
    }
    let mut shells = Vec::with_capacity(depth);
    for j in 1..=depth as i32 {
        let r = k - j;
        shells.push(b.eval(r, n)? / b.eval(r, k)?);
    }
    Ok(adjudicate(&shells))
}

/// Ergodicity criterion E(μ_b) = Σ_{k<n≤m} S^R_kn/b_kn: outer shells walk
/// k = m-1, m-2, ... with all admissible n; inner tails reuse the
/// quasi-invariance adjudicator and propagate its divergence.
pub fn ergodicity_check(b: &WeightFamily, m: i32, depth: usize) -> Result<Verdict, WeightError> {
    let mut shells = Vec::with_capacity(depth);
    for s in 1..=depth as i32 {
        let k = m - s;
        let mut shell = Rational::zero();
        for n in k + 1..=m {
            let inner = quasi_invariance_check(b, k, n, depth)?;
            match inner.state {
                VerdictState::Diverges => {
                    return Ok(Verdict {
                        state: VerdictState::Diverges,
                        partial_sum: inner.partial_sum,
                        depth,
                        certificate: inner.certificate,
                    });
                }
                VerdictState::Inconclusive => {
                    return Ok(Verdict::inconclusive(inner.partial_sum, depth));
                }
                VerdictState::Converges => {}
            }
            shell += inner.partial_sum / b.eval(k, n)?;
        }
        shells.push(shell);
    }
    Ok(adjudicate(&shells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;
    use crate::unimat::Window;

    fn half() -> Rational {
        rat(1, 2)
    }
    fn two() -> Rational {
        rat(2, 1)
    }

    #[test]
    fn weight_values() {
        let g = WeightFamily::geometric(two()).unwrap();
        assert_eq!(g.eval(1, 4).unwrap(), rat(8, 1));
        let gl = WeightFamily::gauss_like(half()).unwrap();
        assert_eq!(gl.eval(0, 3).unwrap(), rat(1, 512));
        assert_eq!(WeightFamily::Factorial.eval(1, 5).unwrap(), rat(24, 1));
        assert!(g.eval(3, 3).is_err());
        assert!(WeightFamily::geometric(rat(-1, 2)).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let w = Window::new(1, 6);
        let ones = WeightFamily::geometric(Rational::one()).unwrap();
        assert!(weight_admissible(&ones, &Rational::one(), w)
            .unwrap()
            .admissible);

        // 2^((n-k)^2) fails at (1,2,3): 16 > 1·2·2
        let grow = WeightFamily::gauss_like(two()).unwrap();
        let rep = weight_admissible(&grow, &Rational::one(), w).unwrap();
        assert!(!rep.admissible);
        let (k, m, n, lhs, rhs) = rep.witness.unwrap();
        assert_eq!((k, m, n), (1, 2, 3));
        assert_eq!(lhs, rat(16, 1));
        assert_eq!(rhs, rat(4, 1));

        // 2^(-(n-k)^2) is admissible with C = 1 on windows up to radius 8
        let shrink = WeightFamily::gauss_like(half()).unwrap();
        let big = Window::centered(0, 8);
        assert!(weight_admissible(&shrink, &Rational::one(), big)
            .unwrap()
            .admissible);
    }

    #[test]
    fn rn_ratio_examples() {
        let mu = GaussianMeasure::new(
            WeightFamily::geometric(Rational::one()).unwrap(),
            IndexWindow::new(0, 1),
        );
        let x = BTreeMap::new();
        let r0 = rn_cocycle(&mu, &x, 1, 2, &Rational::zero()).unwrap();
        assert_eq!(r0.log_ratio, Rational::zero());
        assert_eq!(r0.ratio, 1.0);

        // b = 1, x = 0, t = 1: ratio e^{-1}
        let r1 = rn_cocycle(&mu, &x, 1, 2, &Rational::one()).unwrap();
        assert_eq!(r1.log_ratio, rat(-1, 1));
        assert!((r1.ratio - (-1.0f64).exp()).abs() < 1e-15);

        // cocycle inverse: ratio(x,t)·ratio(x+tE,-t) = 1 exactly in logs
        let mut shifted = BTreeMap::new();
        shifted.insert((1, 2), Rational::one());
        let back = rn_cocycle(&mu, &shifted, 1, 2, &(-Rational::one())).unwrap();
        assert_eq!(r1.log_ratio.clone() + back.log_ratio, Rational::zero());
    }

    #[test]
    fn rn_multiplicative_along_coordinate() {
        let mu = GaussianMeasure::new(
            WeightFamily::geometric(two()).unwrap(),
            IndexWindow::new(0, 1),
        );
        let mut x = BTreeMap::new();
        x.insert((1, 2), rat(3, 7));
        let t1 = rat(2, 5);
        let t2 = rat(-1, 3);
        let full = rn_cocycle(&mu, &x, 1, 2, &(t1.clone() + t2.clone())).unwrap();
        let step1 = rn_cocycle(&mu, &x, 1, 2, &t1).unwrap();
        let mut x2 = x.clone();
        x2.insert((1, 2), rat(3, 7) + t1);
        let step2 = rn_cocycle(&mu, &x2, 1, 2, &t2).unwrap();
        assert_eq!(full.log_ratio, step1.log_ratio + step2.log_ratio);
    }

    #[test]
    fn drift_operator_forms() {
        let mu = GaussianMeasure::new(
            WeightFamily::geometric(two()).unwrap(),
            IndexWindow::new(0, 1),
        );
        let d = drift_operator(&mu, 1, 2).unwrap();
        // applied to the constant 1: -b·x
        let applied = d.apply(&Poly::one());
        assert_eq!(applied, Poly::var(VarId::x(1, 2)).scale(&rat(-2, 1)));

        let haar = GaussianMeasure::new(
            WeightFamily::Table(BTreeMap::new()),
            IndexWindow::new(0, 1),
        );
        assert!(drift_operator(&haar, 1, 2).is_err());
    }

    #[test]
    fn drift_skew_symmetry_by_exact_moments() {
        // <Df, g> + <f, Dg> = 0 for the Gaussian-weighted pairing on
        // polynomials of degree <= 4 in the shifted coordinate
        let mu = GaussianMeasure::new(
            WeightFamily::geometric(rat(3, 2)).unwrap(),
            IndexWindow::new(0, 1),
        );
        let v = VarId::x(1, 2);
        let d = drift_operator(&mu, 1, 2).unwrap();
        let monomials: Vec<Poly> = (0..=4u32)
            .map(|e| {
                let mut p = Poly::one();
                for _ in 0..e {
                    p = &p * &Poly::var(v);
                }
                p
            })
            .collect();
        for f in &monomials {
            for g in &monomials {
                if f.total_degree() + g.total_degree() > 4 {
                    continue;
                }
                let lhs = poly_expectation(&(&d.apply(f) * g), &mu).unwrap();
                let rhs = poly_expectation(&(f * &d.apply(g)), &mu).unwrap();
                assert!((lhs + rhs).is_zero(), "failed at degrees {f} | {g}");
            }
        }
    }

    #[test]
    fn moments_are_rational() {
        let b = rat(3, 4);
        assert_eq!(gaussian_moment(&b, 0), Rational::one());
        assert_eq!(gaussian_moment(&b, 1), Rational::zero());
        assert_eq!(gaussian_moment(&b, 2), rat(2, 3));
        assert_eq!(gaussian_moment(&b, 4), rat(4, 3));
    }

    #[test]
    fn concentration_verdicts() {
        let a = WeightFamily::gauss_like(half()).unwrap();
        let b = WeightFamily::gauss_like(two()).unwrap();
        let v = concentration_check(&a, &b, 0, 8).unwrap();
        assert_eq!(v.state, VerdictState::Converges);
        assert!(matches!(v.certificate, Some(Certificate::RatioBound(_))));

        let same = concentration_check(&a, &a, 0, 8).unwrap();
        assert_eq!(same.state, VerdictState::Diverges);

        // oscillating table: no eventual ratio bound
        let mut t = BTreeMap::new();
        for gap in 1..=8 {
            let v = if gap % 2 == 0 { rat(1, 4) } else { rat(4, 1) };
            t.insert((0, gap), v);
            // cover the full window scan
            for k in -8..8 {
                t.insert((k, k + gap), if gap % 2 == 0 { rat(1, 4) } else { rat(4, 1) });
            }
        }
        let osc = WeightFamily::table(t).unwrap();
        let ones = WeightFamily::geometric(Rational::one()).unwrap();
        let v = concentration_check(&ones, &osc, 0, 6).unwrap();
        assert_eq!(v.state, VerdictState::Inconclusive);
    }

    #[test]
    fn quasi_invariance_verdicts() {
        let b = WeightFamily::gauss_like(half()).unwrap();
        let v = quasi_invariance_check(&b, 2, 4, 10).unwrap();
        assert_eq!(v.state, VerdictState::Converges);
        // ratio of consecutive terms is exactly 2^{-2(n-k)} = 1/16
        match v.certificate {
            Some(Certificate::RatioBound(r)) => assert_eq!(r, rat(1, 16)),
            other => panic!("expected ratio bound, got {other:?}"),
        }

        let g = WeightFamily::geometric(two()).unwrap();
        let v = quasi_invariance_check(&g, 2, 4, 10).unwrap();
        assert_eq!(v.state, VerdictState::Diverges);

        let v = quasi_invariance_check(&b, 2, 4, 0).unwrap();
        assert_eq!(v.state, VerdictState::Inconclusive);
    }

    #[test]
    fn ergodicity_verdicts() {
        // diffuse weights: inner sums converge but outer terms persist
        let b = WeightFamily::gauss_like(half()).unwrap();
        let v = ergodicity_check(&b, 0, 8).unwrap();
        assert_eq!(v.state, VerdictState::Diverges);

        // growing weights: inner tails already diverge and propagate
        let b2 = WeightFamily::gauss_like(two()).unwrap();
        let v2 = ergodicity_check(&b2, 0, 6).unwrap();
        assert_eq!(v2.state, VerdictState::Diverges);

        // table tuned for convergence: b_kn = 2^(8(m-k) - (n-k)^2) >= 1 on
        // the scanned region, inner S^R <= 4^{-(n-k)}, outer shells decay
        let m = 0;
        let depth = 6usize;
        let mut t = BTreeMap::new();
        for k in (m - 2 * depth as i32)..=m {
            for n in (k + 1)..=m {
                let s = m - k;
                let d = n - k;
                let exp = 8 * s - d * d;
                let val = if exp >= 0 {
                    rat_pow(&two(), exp as u32)
                } else {
                    rat_pow(&half(), (-exp) as u32)
                };
                t.insert((k, n), val);
            }
        }
        let tuned = WeightFamily::table(t).unwrap();
        let v3 = ergodicity_check(&tuned, m, depth).unwrap();
        assert_eq!(v3.state, VerdictState::Converges);
    }

    #[test]
    fn verdicts_stable_under_depth_doubling() {
        let a = WeightFamily::gauss_like(half()).unwrap();
        let b = WeightFamily::gauss_like(two()).unwrap();
        let g = WeightFamily::geometric(two()).unwrap();
        for depth in [6usize, 12] {
            assert_eq!(
                concentration_check(&a, &b, 0, depth).unwrap().state,
                VerdictState::Converges
            );
            assert_eq!(
                quasi_invariance_check(&b, 2, 4, depth).unwrap().state,
                VerdictState::Diverges
            );
            assert_eq!(
                quasi_invariance_check(&g, 2, 4, depth).unwrap().state,
                VerdictState::Diverges
            );
            assert_eq!(
                ergodicity_check(&a, 0, depth).unwrap().state,
                VerdictState::Diverges
            );
        }
    }
}
