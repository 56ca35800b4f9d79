//! Seeded Monte-Carlo probes of the truncated induced representation acting
//! on polynomial test functions in L²(μ_b): unitarity, the group law,
//! generator consistency, and truncation convergence.
//!
//! Sample coordinates are drawn by a counter-based per-coordinate generator,
//! so the stream of a coordinate never depends on which other coordinates
//! are present. Everything algebraic (cocycle, character argument, density
//! ratios, test-function values) is computed in exact rational arithmetic;
//! floats appear only in one final conversion per factor.

use std::collections::BTreeMap;

use num_traits::{FromPrimitive, Zero};
use thiserror::Error;

use crate::induced::{cocycle, pair_with_functional, translate_point, DiffOp, InducedError, SpacePoint};
use crate::measure::{log_density_ratio, GaussianMeasure, WeightError};
use crate::orbit::{rational_to_f64, unit_circle};
use crate::symbolic::{Poly, Rational, SymbolicError};
use crate::unimat::{Functional, IndexWindow, MatError, UnipotentMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("sample count must be at least 1")]
    EmptySample,
    #[error("sample coordinate ({0},{1}) is not finite")]
    NonFiniteSample(i32, i32),
    #[error(transparent)]
    Induced(#[from] InducedError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Minimal complex double, enough for the probe arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }

    pub fn real(re: f64) -> Self {
        C64 { re, im: 0.0 }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn scale(self, s: f64) -> C64 {
        C64::new(self.re * s, self.im * s)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// A sampled point of B_{m,n} × B^{(m,n)}: one double per coordinate.
pub type SamplePoint = BTreeMap<(i32, i32), f64>;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[allow(clippy::unusual_byte_groupings)]
mod stream_keys {
    pub const SEED_XOR: u64 = 0xD1B5_4A32_D192_ED03;
    pub const FOLD: u64 = 0x100_0000_01B3;
}

/// Per-coordinate deterministic stream: the i-th draw for coordinate (k,r)
/// depends only on (seed, k, r, i).
struct CoordStream {
    state: u64,
}

impl CoordStream {
    fn new(seed: u64, k: i32, r: i32) -> Self {
        let mut state = seed ^ stream_keys::SEED_XOR;
        // fold the coordinate into the stream key
        state = state
            .wrapping_mul(stream_keys::FOLD)
            .wrapping_add(k as u64 & 0xFFFF_FFFF);
        let _ = splitmix64(&mut state);
        state = state
            .wrapping_mul(stream_keys::FOLD)
            .wrapping_add(r as u64 & 0xFFFF_FFFF);
        let _ = splitmix64(&mut state);
        CoordStream { state }
    }

    fn uniform(&mut self) -> f64 {
        // 53 random bits in [0, 1)
        (splitmix64(&mut self.state) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller (cosine branch).
    fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Draw `count` i.i.d. points of the product Gaussian; coordinate (k,r) has
/// variance 1/(2 b_kr). Deterministic given the seed.
pub fn sample(mu: &GaussianMeasure, count: usize, seed: u64) -> Result<Vec<SamplePoint>, RepError> {
    if count == 0 {
        return Err(RepError::EmptySample);
    }
    let coords = mu.coordinates();
    let mut streams: Vec<((i32, i32), CoordStream, f64)> = Vec::with_capacity(coords.len());
    for (k, r) in coords {
        let var = mu.variance(k, r)?;
        streams.push((
            (k, r),
            CoordStream::new(seed, k, r),
            rational_to_f64(&var).sqrt(),
        ));
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut pt = SamplePoint::new();
        for (key, stream, sigma) in streams.iter_mut() {
            pt.insert(*key, stream.normal() * *sigma);
        }
        out.push(pt);
    }
    Ok(out)
}

/// Polynomial test function in the window x-coordinates; square-integrable
/// against every product Gaussian by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub poly: Poly,
}

impl TestFunction {
    pub fn new(poly: Poly) -> Self {
        TestFunction { poly }
    }

    pub fn one() -> Self {
        TestFunction { poly: num_traits::One::one() }
    }

    fn eval(&self, x: &BTreeMap<(i32, i32), Rational>) -> Result<Rational, RepError> {
        let assign: BTreeMap<_, _> = x
            .iter()
            .map(|(&(k, r), v)| (crate::symbolic::VarId::x(k, r), v.clone()))
            .collect();
        // unbound variables evaluate at 0: the zero-extension embedding
        let mut padded = assign;
        for v in self.poly.variables() {
            padded.entry(v).or_insert_with(Rational::zero);
        }
        Ok(self.poly.eval(&padded)?)
    }
}

/// Everything a representation evaluation needs: the window, the generic
/// point y, and the Gaussian measure.
#[derive(Debug, Clone)]
pub struct RepContext {
    pub iw: IndexWindow,
    pub y: Functional<Rational>,
    pub mu: GaussianMeasure,
}

impl RepContext {
    pub fn new(iw: IndexWindow, y: Functional<Rational>, mu: GaussianMeasure) -> Self {
        RepContext { iw, y, mu }
    }
}

fn rationalize(x: &SamplePoint) -> Result<BTreeMap<(i32, i32), Rational>, RepError> {
    let mut out = BTreeMap::new();
    for (&(k, r), &v) in x {
        let q = Rational::from_f64(v).ok_or(RepError::NonFiniteSample(k, r))?;
        out.insert((k, r), q);
    }
    Ok(out)
}

fn point_from_coords(
    ctx: &RepContext,
    coords: &BTreeMap<(i32, i32), Rational>,
) -> Result<SpacePoint<Rational>, RepError> {
    let w = ctx.iw.window();
    let m = ctx.iw.m;
    let mut low = UnipotentMatrix::upper(w);
    let mut up = UnipotentMatrix::upper(w);
    for (&(k, r), v) in coords {
        if v.is_zero() {
            continue;
        }
        if k > m {
            low.set(k, r, v.clone())?;
        } else if r <= m {
            up.set(k, r, v.clone())?;
        } else {
            return Err(RepError::Mat(MatError::IndexOutOfWindow(k, r)));
        }
    }
    Ok(SpacePoint::new(low, up, m)?)
}

fn coords_of(point: &SpacePoint<Rational>) -> BTreeMap<(i32, i32), Rational> {
    let mut out = BTreeMap::new();
    for (&(k, r), v) in point.low.entries() {
        out.insert((k, r), v.clone());
    }
    for (&(k, r), v) in point.up.entries() {
        out.insert((k, r), v.clone());
    }
    out
}

/// One application (T_t g)(x) where g is an arbitrary evaluator on exact
/// coordinates. The character argument and the density-ratio exponent stay
/// rational until the final conversion.
fn apply_one<G>(
    ctx: &RepContext,
    t: &UnipotentMatrix<Rational>,
    g: &G,
    coords: &BTreeMap<(i32, i32), Rational>,
) -> Result<C64, RepError>
where
    G: Fn(&BTreeMap<(i32, i32), Rational>) -> Result<C64, RepError>,
{
    let x = point_from_coords(ctx, coords)?;
    let c = cocycle(&x, t)?;
    let char_arg = pair_with_functional(&ctx.y, &c.h)?;
    let moved = coords_of(&c.moved);
    let rn_log = log_density_ratio(&ctx.mu, coords, &moved)?;
    let (re, im) = unit_circle(&char_arg);
    let character = C64::new(re, im);
    let sqrt_rn = (rational_to_f64(&rn_log) / 2.0).exp();
    Ok(g(&moved)?.mul(character).scale(sqrt_rn))
}

/// (T_t f)(x) across the sample list.
pub fn apply_rep(
    ctx: &RepContext,
    t: &UnipotentMatrix<Rational>,
    f: &TestFunction,
    pts: &[SamplePoint],
) -> Result<Vec<C64>, RepError> {
    let g = |coords: &BTreeMap<(i32, i32), Rational>| -> Result<C64, RepError> {
        Ok(C64::real(rational_to_f64(&f.eval(coords)?)))
    };
    pts.iter()
        .map(|p| apply_one(ctx, t, &g, &rationalize(p)?))
        .collect()
}

/// Monte-Carlo comparison of ‖T_t f‖² against ‖f‖² on a shared sample
/// stream, reweighting by the density ratio instead of re-sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitarityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub std_err: f64,
    pub tol: f64,
    pub count: usize,
}

impl UnitarityReport {
    pub fn pass(&self) -> bool {
        self.abs_err <= self.tol
    }
}

pub fn unitarity_probe(
    ctx: &RepContext,
    t: &UnipotentMatrix<Rational>,
    f: &TestFunction,
    count: usize,
    seed: u64,
) -> Result<UnitarityReport, RepError> {
    let pts = sample(&ctx.mu, count, seed)?;
    // Precompose the whole integrand symbolically once: the coordinate map
    // x ↦ x·t is polynomial, so f∘t and the density-ratio exponent become
    // fixed polynomials. No phase enters a norm comparison, so these can be
    // compiled to plain float evaluators without a cancellation hazard.
    let generic = SpacePoint::<crate::symbolic::RatFun>::generic(ctx.iw.window(), ctx.iw.m);
    let t_sym = t.map(|v| crate::symbolic::RatFun::constant(v.clone()));
    let moved_sym = translate_point(&generic, &t_sym)?;
    let mut coord_map: BTreeMap<crate::symbolic::VarId, Poly> = BTreeMap::new();
    let mut rn_log_poly = Poly::zero();
    let slots: Vec<(i32, i32)> = ctx.mu.coordinates();
    for &(k, r) in &slots {
        let v = crate::symbolic::VarId::x(k, r);
        let here = Poly::var(v);
        let moved = if k > ctx.iw.m {
            moved_sym.low.get(k, r)
        } else {
            moved_sym.up.get(k, r)
        };
        let moved = moved
            .as_poly()
            .ok_or(InducedError::NonPolynomialEntry(k, r))
            .map_err(RepError::Induced)?
            .clone();
        let b = ctx.mu.weight(k, r)?;
        rn_log_poly = &rn_log_poly + &(&(&here * &here) - &(&moved * &moved)).scale(&b);
        coord_map.insert(v, moved);
    }
    let f_moved_poly = f.poly.substitute_polys(&coord_map);
    let rn_eval = CompiledPoly::new(&rn_log_poly, &slots)?;
    let f_here_eval = CompiledPoly::new(&f.poly, &slots)?;
    let f_moved_eval = CompiledPoly::new(&f_moved_poly, &slots)?;
    let mut diffs = Vec::with_capacity(count);
    let mut lhs_sum = 0.0;
    let mut rhs_sum = 0.0;
    let mut vals = vec![0.0f64; slots.len()];
    for p in &pts {
        for (slot, key) in slots.iter().enumerate() {
            vals[slot] = *p.get(key).unwrap_or(&0.0);
        }
        let weight = rn_eval.eval(&vals).exp();
        let f_moved = f_moved_eval.eval(&vals);
        let f_here = f_here_eval.eval(&vals);
        let lhs = weight * f_moved * f_moved;
        let rhs = f_here * f_here;
        lhs_sum += lhs;
        rhs_sum += rhs;
        diffs.push(lhs - rhs);
    }
    let n = count as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
    let std_err = (var / n).sqrt();
    Ok(UnitarityReport {
        lhs: lhs_sum / n,
        rhs: rhs_sum / n,
        abs_err: mean.abs(),
        std_err,
        tol: 3.0 * std_err,
        count,
    })
}

/// Pointwise comparison of T_{t1}(T_{t2} f) against T_{t1 t2} f; an exact
/// identity, so the tolerance is pure floating-point roundoff.
#[derive(Debug, Clone, PartialEq)]
pub struct HomomorphismReport {
    pub max_dev: f64,
    pub tol: f64,
    pub count: usize,
}

impl HomomorphismReport {
    pub fn pass(&self) -> bool {
        self.max_dev <= self.tol
    }
}

pub fn homomorphism_probe(
    ctx: &RepContext,
    t1: &UnipotentMatrix<Rational>,
    t2: &UnipotentMatrix<Rational>,
    f: &TestFunction,
    pts: &[SamplePoint],
) -> Result<HomomorphismReport, RepError> {
    let feval = |coords: &BTreeMap<(i32, i32), Rational>| -> Result<C64, RepError> {
        Ok(C64::real(rational_to_f64(&f.eval(coords)?)))
    };
    let inner = |coords: &BTreeMap<(i32, i32), Rational>| -> Result<C64, RepError> {
        apply_one(ctx, t2, &feval, coords)
    };
    let t12 = t1.mul(t2)?;
    let mut max_dev: f64 = 0.0;
    for p in pts {
        let coords = rationalize(p)?;
        let nested = apply_one(ctx, t1, &inner, &coords)?;
        let direct = apply_one(ctx, &t12, &feval, &coords)?;
        max_dev = max_dev.max(nested.sub(direct).abs());
    }
    Ok(HomomorphismReport { max_dev, tol: 1e-10, count: pts.len() })
}

/// Central finite difference of ε ↦ T_{I+εE_kr} against the symbolic
/// generator applied to f, per ε in the list.
#[derive(Debug, Clone, PartialEq)]
pub struct FdReport {
    /// (ε, max abs deviation over the samples).
    pub errors: Vec<(f64, f64)>,
    /// errors[i] / errors[i+1]; second order means ratio ≈ (ε_i/ε_{i+1})².
    pub ratios: Vec<f64>,
}

pub fn generator_fd_probe(
    ctx: &RepContext,
    gen: &DiffOp,
    k: i32,
    r: i32,
    eps_list: &[Rational],
    f: &TestFunction,
    pts: &[SamplePoint],
) -> Result<FdReport, RepError> {
    let mut errors = Vec::with_capacity(eps_list.len());
    for eps in eps_list {
        let mut plus = UnipotentMatrix::upper(ctx.iw.window());
        plus.set(k, r, eps.clone())?;
        let mut minus = UnipotentMatrix::upper(ctx.iw.window());
        minus.set(k, r, -eps.clone())?;
        let vp = apply_rep(ctx, &plus, f, pts)?;
        let vm = apply_rep(ctx, &minus, f, pts)?;
        let divisor = 2.0 * rational_to_f64(eps);
        let mut max_err: f64 = 0.0;
        let applied = gen.apply(&f.poly);
        for (i, p) in pts.iter().enumerate() {
            let coords = rationalize(p)?;
            let fd = vp[i].sub(vm[i]).scale(1.0 / divisor);
            let exact = eval_tau_poly(&applied, &coords)?;
            max_err = max_err.max(fd.sub(exact).abs());
        }
        errors.push((rational_to_f64(eps), max_err));
    }
    let ratios = errors
        .windows(2)
        .map(|w| if w[1].1 == 0.0 { f64::INFINITY } else { w[0].1 / w[1].1 })
        .collect();
    Ok(FdReport { errors, ratios })
}

/// Flat float evaluator for a tau-free polynomial over slotted coordinates.
struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    fn new(p: &Poly, slots: &[(i32, i32)]) -> Result<Self, RepError> {
        let mut terms = Vec::new();
        for (mon, coeff) in p.terms() {
            if mon.tau_degree() > 0 {
                return Err(RepError::Symbolic(SymbolicError::TauNotNumeric));
            }
            let mut factors = Vec::new();
            for &(v, e) in mon.vars() {
                let slot = slots
                    .iter()
                    .position(|&(k, r)| v == crate::symbolic::VarId::x(k, r))
                    .ok_or(RepError::NonFiniteSample(v.row, v.col))?;
                factors.push((slot, e));
            }
            terms.push((rational_to_f64(coeff), factors));
        }
        Ok(CompiledPoly { terms })
    }

    fn eval(&self, vals: &[f64]) -> f64 {
        let mut total = 0.0;
        for (c, factors) in &self.terms {
            let mut term = *c;
            for &(slot, e) in factors {
                for _ in 0..e {
                    term *= vals[slot];
                }
            }
            total += term;
        }
        total
    }
}

/// Evaluate a polynomial that may carry tau-powers, substituting tau = 2πi.
fn eval_tau_poly(p: &Poly, x: &BTreeMap<(i32, i32), Rational>) -> Result<C64, RepError> {
    let mut assign: BTreeMap<_, _> = x
        .iter()
        .map(|(&(k, r), v)| (crate::symbolic::VarId::x(k, r), v.clone()))
        .collect();
    for v in p.variables() {
        assign.entry(v).or_insert_with(Rational::zero);
    }
    let parts = p.eval_tau_parts(&assign)?;
    let tau = C64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut out = C64::default();
    for (deg, val) in parts {
        let mut factor = C64::real(rational_to_f64(&val));
        for _ in 0..deg {
            factor = factor.mul(tau);
        }
        out = C64::new(out.re + factor.re, out.im + factor.im);
    }
    Ok(out)
}

/// Evaluation of (T_t f)(x) across growing radii with the zero-extension
/// embedding of the base-window sample.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub radii: Vec<i32>,
    /// Per-radius values, one row per radius, one column per sample.
    pub values: Vec<Vec<C64>>,
    /// Max abs difference between consecutive radii.
    pub diffs: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn truncation_convergence_probe(
    m: i32,
    radii: &[i32],
    y_values: impl Fn(i32) -> Rational,
    b: &crate::measure::WeightFamily,
    t_builder: impl Fn(i32) -> UnipotentMatrix<Rational>,
    f: &TestFunction,
    count: usize,
    seed: u64,
) -> Result<ConvergenceReport, RepError> {
    let base = radii
        .first()
        .copied()
        .ok_or(RepError::EmptySample)?;
    let base_mu = GaussianMeasure::new(b.clone(), IndexWindow::new(m, base));
    let pts = sample(&base_mu, count, seed)?;
    let mut values = Vec::with_capacity(radii.len());
    for &radius in radii {
        let iw = IndexWindow::new(m, radius);
        let y = Functional::generic_antidiagonal(iw, &y_values)
            .map_err(RepError::Mat)?;
        let mu = GaussianMeasure::new(b.clone(), iw);
        let ctx = RepContext::new(iw, y, mu);
        let t = t_builder(radius);
        // base-window samples, zero-extended into the larger window
        values.push(apply_rep(&ctx, &t, f, &pts)?);
    }
    let mut diffs = Vec::new();
    for w in values.windows(2) {
        let d = w[0]
            .iter()
            .zip(&w[1])
            .map(|(a, b)| a.sub(*b).abs())
            .fold(0.0f64, f64::max);
        diffs.push(d);
    }
    Ok(ConvergenceReport { radii: radii.to_vec(), values, diffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::induced::{generators, GeneratorMeasure};
    use crate::measure::WeightFamily;
    use crate::symbolic::{rat, RatFun, VarId};
    use num_traits::One;

    fn b4_ctx() -> RepContext {
        let iw = IndexWindow::new(3, 1);
        let y = Functional::generic_antidiagonal(iw, |p| rat(p as i64 + 1, 2)).unwrap();
        let mu = GaussianMeasure::new(
            WeightFamily::geometric(Rational::one()).unwrap(),
            iw,
        );
        RepContext::new(iw, y, mu)
    }

    #[test]
    fn sampling_is_deterministic_and_order_free() {
        let ctx = b4_ctx();
        let a = sample(&ctx.mu, 16, 7).unwrap();
        let b = sample(&ctx.mu, 16, 7).unwrap();
        assert_eq!(a, b);
        let c = sample(&ctx.mu, 16, 8).unwrap();
        assert_ne!(a, c);
        assert!(sample(&ctx.mu, 0, 7).is_err());

        // per-coordinate streams: the same coordinate in a smaller window
        // yields the same values
        let small = GaussianMeasure::new(
            WeightFamily::geometric(Rational::one()).unwrap(),
            IndexWindow::new(3, 1),
        );
        let big = GaussianMeasure::new(
            WeightFamily::geometric(Rational::one()).unwrap(),
            IndexWindow::new(3, 2),
        );
        let ps = sample(&small, 4, 42).unwrap();
        let pb = sample(&big, 4, 42).unwrap();
        for i in 0..4 {
            for (key, v) in &ps[i] {
                assert_eq!(pb[i][key], *v);
            }
        }
    }

    #[test]
    fn sample_variance_matches_weight() {
        let mu = GaussianMeasure::new(
            WeightFamily::geometric(rat(2, 1)).unwrap(),
            IndexWindow::new(0, 1),
        );
        let pts = sample(&mu, 100_000, 11).unwrap();
        let xs: Vec<f64> = pts.iter().map(|p| p[&(1, 2)]).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / xs.len() as f64;
        // b_{12} = 2 so the variance is 1/4
        assert!((var - 0.25).abs() / 0.25 < 0.05, "variance {var}");
    }

    #[test]
    fn identity_acts_trivially() {
        let ctx = b4_ctx();
        let pts = sample(&ctx.mu, 8, 3).unwrap();
        let f = TestFunction::new(Poly::var(VarId::x(2, 3)));
        let t = UnipotentMatrix::upper(ctx.iw.window());
        let vals = apply_rep(&ctx, &t, &f, &pts).unwrap();
        for (v, p) in vals.iter().zip(&pts) {
            assert_eq!(v.im, 0.0);
            assert!((v.re - p[&(2, 3)]).abs() < 1e-12);
        }
    }

    #[test]
    fn mid_block_translation_is_a_character() {
        // t = I + E_{2,5} multiplies by exp(2πi·S_25) = exp(2πi·y52) and
        // moves nothing
        let ctx = b4_ctx();
        let pts = sample(&ctx.mu, 8, 3).unwrap();
        let f = TestFunction::one();
        let mut t = UnipotentMatrix::upper(ctx.iw.window());
        t.set(2, 5, Rational::one()).unwrap();
        let vals = apply_rep(&ctx, &t, &f, &pts).unwrap();
        let y52 = rational_to_f64(&ctx.y.get(5, 2));
        let expect = C64::new(
            (2.0 * std::f64::consts::PI * y52).cos(),
            (2.0 * std::f64::consts::PI * y52).sin(),
        );
        for v in vals {
            assert!((v.re - expect.re).abs() < 1e-12);
            assert!((v.im - expect.im).abs() < 1e-12);
            assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unitarity_at_identity_and_elementary() {
        let ctx = b4_ctx();
        let f = TestFunction::new(
            &Poly::var(VarId::x(2, 3)) + &Poly::one(),
        );
        let t = UnipotentMatrix::upper(ctx.iw.window());
        let rep = unitarity_probe(&ctx, &t, &f, 64, 5).unwrap();
        assert_eq!(rep.abs_err, 0.0);
        assert!(rep.pass());

        let mut t2 = UnipotentMatrix::upper(ctx.iw.window());
        t2.set(2, 3, rat(1, 2)).unwrap();
        let rep2 = unitarity_probe(&ctx, &t2, &f, 20_000, 5).unwrap();
        assert!(rep2.pass(), "err {} tol {}", rep2.abs_err, rep2.tol);
    }

    #[test]
    fn homomorphism_exact_and_contrast() {
        let ctx = b4_ctx();
        let pts = sample(&ctx.mu, 32, 9).unwrap();
        let f = TestFunction::new(Poly::var(VarId::x(2, 3)));
        let mut t1 = UnipotentMatrix::upper(ctx.iw.window());
        t1.set(2, 3, rat(1, 3)).unwrap();
        t1.set(4, 5, rat(-2, 1)).unwrap();
        let mut t2 = UnipotentMatrix::upper(ctx.iw.window());
        t2.set(3, 4, rat(3, 2)).unwrap();
        let rep = homomorphism_probe(&ctx, &t1, &t2, &f, &pts).unwrap();
        assert!(rep.pass(), "dev {}", rep.max_dev);

        // reversing a non-commuting pair must show an order-one deviation
        let t12 = t1.mul(&t2).unwrap();
        let t21 = t2.mul(&t1).unwrap();
        assert_ne!(t12, t21);
        let a = apply_rep(&ctx, &t12, &f, &pts).unwrap();
        let b = apply_rep(&ctx, &t21, &f, &pts).unwrap();
        let dev = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.sub(*y).abs())
            .fold(0.0f64, f64::max);
        assert!(dev > 1e-3, "noncommutativity visible, dev {dev}");
    }

    #[test]
    fn generator_fd_second_order() {
        let ctx = b4_ctx();
        let pts = sample(&ctx.mu, 12, 17).unwrap();
        let y_sym = ctx.y.map(|v| RatFun::constant(v.clone()));
        let gens = generators(
            ctx.iw.window(),
            ctx.iw.m,
            &y_sym,
            GeneratorMeasure::Gaussian(&ctx.mu.weights),
        )
        .unwrap();
        let f = TestFunction::new(
            &(&Poly::var(VarId::x(2, 3)) * &Poly::var(VarId::x(2, 3)))
                + &Poly::var(VarId::x(4, 5)),
        );
        for &(k, r) in &[(2, 3), (4, 5), (3, 4)] {
            let eps = vec![rat(1, 100), rat(1, 1000)];
            let rep =
                generator_fd_probe(&ctx, &gens[&(k, r)], k, r, &eps, &f, &pts).unwrap();
            let ratio = rep.ratios[0];
            assert!(
                (80.0..=120.0).contains(&ratio),
                "({k},{r}): ratio {ratio}, errors {:?}",
                rep.errors
            );
        }
    }

    #[test]
    fn truncation_probe_zero_for_window_supported_t() {
        let m = 3;
        let yv = |p: i32| rat(p as i64 + 1, 2);
        let b = WeightFamily::geometric(Rational::one()).unwrap();
        let f = TestFunction::new(Poly::var(VarId::x(2, 3)));
        let t_builder = |radius: i32| {
            let mut t = UnipotentMatrix::upper(IndexWindow::new(3, radius).window());
            t.set(2, 3, rat(1, 2)).unwrap();
            t.set(2, 4, rat(-1, 3)).unwrap();
            t
        };
        let rep =
            truncation_convergence_probe(m, &[1, 2, 3], yv, &b, t_builder, &f, 16, 23)
                .unwrap();
        assert_eq!(rep.diffs.len(), 2);
        for d in rep.diffs {
            assert_eq!(d, 0.0, "window-supported t must project consistently");
        }

        // single radius: no differences to report
        let rep1 = truncation_convergence_probe(m, &[2], yv, &b, t_builder, &f, 8, 23).unwrap();
        assert!(rep1.diffs.is_empty());
    }

    #[test]
    fn truncation_probe_decays_for_growing_t() {
        let m = 3;
        // summable anti-diagonal tail
        let yv = |p: i32| rat(1, 1 << (2 * p.min(20) as u32));
        let b = WeightFamily::geometric(Rational::one()).unwrap();
        let f = TestFunction::one();
        let t_builder = |radius: i32| {
            let iw = IndexWindow::new(3, radius);
            let mut t = UnipotentMatrix::upper(iw.window());
            // one new mid-block entry per radius, shrinking with p
            for p in 0..=radius.min(6) {
                t.set(3 - p, 3 + p + 1, rat(1, 1 << p.min(20) as u32)).unwrap();
            }
            t
        };
        let rep =
            truncation_convergence_probe(m, &[1, 2, 3, 4], yv, &b, t_builder, &f, 8, 31)
                .unwrap();
        assert_eq!(rep.diffs.len(), 3);
        assert!(rep.diffs[0] > rep.diffs[1] && rep.diffs[1] > rep.diffs[2],
            "diffs should decay: {:?}", rep.diffs);
    }

    #[test]
    fn shift_region_modulus_is_the_density_root_alone() {
        // f ≡ 1 and t in a shift region: |T_t f|(x) = rn^{1/2}(x,t), the
        // character being unimodular
        let ctx = b4_ctx();
        let pts = sample(&ctx.mu, 16, 29).unwrap();
        let f = TestFunction::one();
        let mut t = UnipotentMatrix::upper(ctx.iw.window());
        t.set(2, 3, rat(2, 3)).unwrap();
        let vals = apply_rep(&ctx, &t, &f, &pts).unwrap();
        for (v, p) in vals.iter().zip(&pts) {
            let coords = rationalize(p).unwrap();
            let x = point_from_coords(&ctx, &coords).unwrap();
            let moved = coords_of(&translate_point(&x, &t).unwrap());
            let rn_log = log_density_ratio(&ctx.mu, &coords, &moved).unwrap();
            let sqrt_rn = (rational_to_f64(&rn_log) / 2.0).exp();
            assert!((v.abs() - sqrt_rn).abs() < 1e-12);
        }
    }

    #[test]
    fn character_is_unimodular_everywhere() {
        let ctx = b4_ctx();
        let pts = sample(&ctx.mu, 32, 13).unwrap();
        let f = TestFunction::one();
        let mut t = UnipotentMatrix::upper(ctx.iw.window());
        t.set(2, 4, rat(5, 3)).unwrap();
        t.set(3, 5, rat(-7, 2)).unwrap();
        let vals = apply_rep(&ctx, &t, &f, &pts).unwrap();
        for (v, p) in vals.iter().zip(&pts) {
            // t in the mid block: no movement, rn = 1, |value| = |character| = 1
            assert!((v.norm_sqr() - 1.0).abs() < 1e-12, "at {p:?}");
        }
    }

    #[test]
    fn fd_probe_constant_function_matches_s_entry() {
        let ctx = b4_ctx();
        let pts = sample(&ctx.mu, 8, 19).unwrap();
        let y_sym = ctx.y.map(|v| RatFun::constant(v.clone()));
        let gens = generators(ctx.iw.window(), ctx.iw.m, &y_sym, GeneratorMeasure::Haar).unwrap();
        let f = TestFunction::one();
        // (2,5) lies in the mid block: A = tau·S_25 = tau·y52, a constant
        let eps = vec![rat(1, 100), rat(1, 1000)];
        let rep = generator_fd_probe(&ctx, &gens[&(2, 5)], 2, 5, &eps, &f, &pts).unwrap();
        assert!(rep.errors[1].1 < 1e-4, "errors {:?}", rep.errors);
        assert!((80.0..=120.0).contains(&rep.ratios[0]), "ratios {:?}", rep.ratios);
    }
}
