//! Gaussian machinery: moment generating functions for coupled pairs of
//! Gaussians, exact complex Wick calculus on the positive nilpotent
//! subalgebra, Monte Carlo cross-evaluators, and the closed-form
//! normalization of the nilpotent Gaussian weight.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::{Rat, C64};

const ZERO_C: C64 = C64::new(0.0, 0.0);
const ONE_C: C64 = C64::new(1.0, 0.0);

/// Samples per independent RNG stream; fixed so results are reproducible
/// for a given seed regardless of thread count.
pub const CHUNK: u64 = 8192;

/// Parameters `(a, b, c)` of the quadratic coupling, with
/// `delta = a c - b^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl QuadraticParams {
    pub fn new(a: C64, b: C64, c: C64) -> Self {
        QuadraticParams { a, b, c }
    }

    pub fn delta(&self) -> C64 {
        self.a * self.c - self.b * self.b
    }

    fn require_nonsingular(&self) -> Result<C64> {
        let d = self.delta();
        if d.norm() < 1e-300 {
            return Err(Error::SingularParameters(
                "delta = a c - b^2 vanishes".to_string(),
            ));
        }
        Ok(d)
    }

    /// Sufficient condition for the two-real-vector Gaussian to be a
    /// normalizable density: real `a, c > 0` with `a c > b^2`, real `b`.
    pub fn in_real_domain(&self) -> bool {
        self.a.im == 0.0
            && self.b.im == 0.0
            && self.c.im == 0.0
            && self.a.re > 0.0
            && self.c.re > 0.0
            && self.a.re * self.c.re > self.b.re * self.b.re
    }

    /// Sufficient condition for the single-complex-vector Gaussian to be a
    /// normalizable density: `c = conj(a)` and real `b > |a|`.
    pub fn in_complex_domain(&self) -> bool {
        self.b.im == 0.0
            && (self.c - self.a.conj()).norm() == 0.0
            && self.b.re > self.a.norm()
    }
}

/// Monte Carlo result: complex mean, standard error, and sample count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: C64,
    pub stderr: f64,
    pub samples: u64,
    /// Set when the target measure was reached by reweighting a real
    /// reference Gaussian (complex coupling).
    pub reweighted: bool,
}

impl Estimate {
    /// z-score of the discrepancy against a reference value, using this
    /// estimate's standard error.
    pub fn z_against(&self, reference: C64) -> f64 {
        let dist = (self.value - reference).norm();
        if dist == 0.0 {
            0.0
        } else {
            dist / self.stderr
        }
    }
}

/// Accumulates (sum, sum of squared magnitudes, count) and merges
/// associatively across chunks.
#[derive(Debug, Clone, Copy, Default)]
struct Accum {
    sum: C64,
    sum_sq: f64,
    count: u64,
}

impl Accum {
    fn push(&mut self, v: C64) {
        self.sum += v;
        self.sum_sq += v.norm_sqr();
        self.count += 1;
    }

    fn merge(mut self, other: Accum) -> Accum {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.count += other.count;
        self
    }

    fn estimate(&self) -> Estimate {
        let n = self.count as f64;
        let mean = self.sum / C64::new(n, 0.0);
        let var = (self.sum_sq / n - mean.norm_sqr()).max(0.0);
        Estimate {
            value: mean,
            stderr: (var / n).sqrt(),
            samples: self.count,
            reweighted: false,
        }
    }
}

/// Run a chunked, seeded Monte Carlo loop; the chunk plan (and therefore
/// the result) depends only on `(seed, samples)`.
fn chunked_mc<F>(samples: u64, seed: u64, f: F) -> Accum
where
    F: Fn(&mut ChaCha8Rng, &mut Accum) + Sync,
{
    let chunks: Vec<(u64, u64)> = (0..samples.div_ceil(CHUNK))
        .map(|c| (c, CHUNK.min(samples - c * CHUNK)))
        .collect();
    chunks
        .par_iter()
        .map(|&(stream, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut acc = Accum::default();
            for _ in 0..len {
                f(&mut rng, &mut acc);
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Accum::default(), Accum::merge)
}

/// Moment generating function of the coupled Gaussian pair:
/// `exp[ (c<A,A> + a<B,B> - 2b<A,B>) / (4 delta) ]` with the bilinear
/// pairing `<U,V> = sum_i U_i V_i`.
pub fn generating_function(a_vec: &[C64], b_vec: &[C64], qp: &QuadraticParams) -> Result<C64> {
    if a_vec.len() != b_vec.len() {
        return Err(Error::DimensionMismatch {
            expected: a_vec.len(),
            got: b_vec.len(),
        });
    }
    let d = qp.require_nonsingular()?;
    let dot = |u: &[C64], v: &[C64]| -> C64 { u.iter().zip(v).map(|(&x, &y)| x * y).sum() };
    let arg = (qp.c * dot(a_vec, a_vec) + qp.a * dot(b_vec, b_vec)
        - C64::new(2.0, 0.0) * qp.b * dot(a_vec, b_vec))
        / (C64::new(4.0, 0.0) * d);
    Ok(arg.exp())
}

/// Sparse polynomial on `V x V`, with variable indices `0..n` for the first
/// slot and `n..2n` for the second. In the real picture the slots are
/// `(x, y)`; in the complex picture they are `(z, conj z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentPolynomial {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u16>, C64>,
}

impl MomentPolynomial {
    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut terms = BTreeMap::new();
        if c != ZERO_C {
            terms.insert(vec![0u16; 2 * nvars], c);
        }
        MomentPolynomial { nvars, terms }
    }

    /// Monomial from per-variable exponents (length `2 nvars`).
    pub fn monomial(nvars: usize, exps: Vec<u16>, coeff: C64) -> Self {
        assert_eq!(exps.len(), 2 * nvars);
        let mut terms = BTreeMap::new();
        terms.insert(exps, coeff);
        MomentPolynomial { nvars, terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, &c) in &other.terms {
            *terms.entry(m.clone()).or_insert(ZERO_C) += c;
        }
        MomentPolynomial {
            nvars: self.nvars,
            terms,
        }
    }

    /// Evaluate with the first slot at `u` and the second at `v`.
    pub fn eval(&self, u: &[C64], v: &[C64]) -> C64 {
        let mut acc = ZERO_C;
        for (m, &coeff) in &self.terms {
            let mut t = coeff;
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    let base = if i < self.nvars {
                        u[i]
                    } else {
                        v[i - self.nvars]
                    };
                    t *= base.powu(e as u32);
                }
            }
            acc += t;
        }
        acc
    }
}

/// Wick pairing over a covariance closure: sum over perfect matchings of
/// the monomial's letters.
fn wick_letters(letters: &[usize], cov: &impl Fn(usize, usize) -> C64) -> C64 {
    if letters.is_empty() {
        return ONE_C;
    }
    if letters.len() % 2 == 1 {
        return ZERO_C;
    }
    let first = letters[0];
    let mut acc = ZERO_C;
    for k in 1..letters.len() {
        let mut rest: Vec<usize> = Vec::with_capacity(letters.len() - 2);
        rest.extend_from_slice(&letters[1..k]);
        rest.extend_from_slice(&letters[k + 1..]);
        acc += cov(first, letters[k]) * wick_letters(&rest, cov);
    }
    acc
}

/// Shared symbolic moment: the polynomial applied as derivatives to the
/// generating function at the origin, evaluated as a Wick sum over its
/// second-derivative matrix.
fn moment_symbolic(f: &MomentPolynomial, qp: &QuadraticParams) -> Result<C64> {
    let d = qp.require_nonsingular()?;
    let n = f.nvars;
    let half = C64::new(2.0, 0.0) * d;
    let cov = move |u: usize, v: usize| -> C64 {
        let (iu, su) = (u % n, u >= n);
        let (iv, sv) = (v % n, v >= n);
        if iu != iv {
            return ZERO_C;
        }
        match (su, sv) {
            (false, false) => qp.c / half,
            (true, true) => qp.a / half,
            _ => -qp.b / half,
        }
    };
    let mut acc = ZERO_C;
    for (m, &coeff) in &f.terms {
        let mut letters = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                letters.push(i);
            }
        }
        acc += coeff * wick_letters(&letters, &cov);
    }
    Ok(acc)
}

/// Moment of `F` against the two-real-vector Gaussian. Computed through the
/// generating function, so the only restriction is `delta != 0`.
pub fn moment_real(f: &MomentPolynomial, qp: &QuadraticParams) -> Result<C64> {
    moment_symbolic(f, qp)
}

/// Moment of `F(z, conj z)` against the one-complex-vector Gaussian. As a
/// polynomial in `a/delta, b/delta, c/delta` it coincides with
/// [`moment_real`]; both share the symbolic evaluation.
pub fn moment_complex(f: &MomentPolynomial, qp: &QuadraticParams) -> Result<C64> {
    moment_symbolic(f, qp)
}

/// Literal-integral Monte Carlo over `V_R x V_R`; test oracle for
/// [`moment_real`]. Requires parameters in the real convergence domain.
pub fn moment_real_mc(
    f: &MomentPolynomial,
    qp: &QuadraticParams,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if !qp.in_real_domain() {
        return Err(Error::OutOfDomain(
            "real-domain sampling needs real a, c > 0 with a c > b^2".to_string(),
        ));
    }
    let (a, b, c) = (qp.a.re, qp.b.re, qp.c.re);
    let delta = a * c - b * b;
    // Per-coordinate covariance of (x_i, y_i) is [[c, -b], [-b, a]]/(2 delta).
    let sxx = c / (2.0 * delta);
    let syy = a / (2.0 * delta);
    let sxy = -b / (2.0 * delta);
    let l11 = sxx.sqrt();
    let l21 = sxy / l11;
    let l22 = (syy - l21 * l21).sqrt();
    let n = f.nvars;
    let acc = chunked_mc(samples, seed, |rng, acc| {
        let mut xs = vec![ZERO_C; n];
        let mut ys = vec![ZERO_C; n];
        for i in 0..n {
            let g1: f64 = rng.sample(StandardNormal);
            let g2: f64 = rng.sample(StandardNormal);
            xs[i] = C64::new(l11 * g1, 0.0);
            ys[i] = C64::new(l21 * g1 + l22 * g2, 0.0);
        }
        acc.push(f.eval(&xs, &ys));
    });
    Ok(acc.estimate())
}

/// Literal-integral Monte Carlo over `V_C`; test oracle for
/// [`moment_complex`]. Requires parameters in the complex convergence
/// domain (`c = conj a`, real `b > |a|`).
pub fn moment_complex_mc(
    f: &MomentPolynomial,
    qp: &QuadraticParams,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if !qp.in_complex_domain() {
        return Err(Error::OutOfDomain(
            "complex-domain sampling needs c = conj(a) and real b > |a|".to_string(),
        ));
    }
    let (ar, ai, b) = (qp.a.re, qp.a.im, qp.b.re);
    // Density exp(-(x,y) Q (x,y)^T) per coordinate z = x + i y.
    let q11 = 2.0 * (b + ar);
    let q22 = 2.0 * (b - ar);
    let q12 = -2.0 * ai;
    let det = q11 * q22 - q12 * q12;
    // Covariance = Q^{-1} / 2.
    let sxx = q22 / (2.0 * det);
    let syy = q11 / (2.0 * det);
    let sxy = -q12 / (2.0 * det);
    let l11 = sxx.sqrt();
    let l21 = sxy / l11;
    let l22 = (syy - l21 * l21).sqrt();
    let n = f.nvars;
    let acc = chunked_mc(samples, seed, |rng, acc| {
        let mut zs = vec![ZERO_C; n];
        let mut zbars = vec![ZERO_C; n];
        for i in 0..n {
            let g1: f64 = rng.sample(StandardNormal);
            let g2: f64 = rng.sample(StandardNormal);
            let x = l11 * g1;
            let y = l21 * g1 + l22 * g2;
            zs[i] = C64::new(x, y);
            zbars[i] = C64::new(x, -y);
        }
        acc.push(f.eval(&zs, &zbars));
    });
    Ok(acc.estimate())
}

/// The nilpotent Gaussian weight `exp(gamma B(N, theta N))` on `n_+`,
/// factorized per positive root: each coefficient `n_alpha` is an
/// independent complex Gaussian with `E|n_alpha|^2 = <a,a>/(2 gamma)`.
#[derive(Debug, Clone)]
pub struct NilpotentGaussianSpec {
    rs: Arc<RootSystem>,
    gamma: C64,
    variances: Vec<C64>,
}

impl NilpotentGaussianSpec {
    pub fn new(rs: Arc<RootSystem>, gamma: C64) -> Result<Self> {
        if gamma.re <= 0.0 {
            return Err(Error::OutOfDomain(format!(
                "nilpotent Gaussian weight needs Re(gamma) > 0, got {gamma}"
            )));
        }
        let variances = (0..rs.num_positive())
            .map(|p| {
                C64::new(rs.norm(p).to_f64().expect("norm fits f64"), 0.0)
                    / (C64::new(2.0, 0.0) * gamma)
            })
            .collect();
        Ok(NilpotentGaussianSpec {
            rs,
            gamma,
            variances,
        })
    }

    pub fn rs(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn gamma(&self) -> C64 {
        self.gamma
    }

    /// `E|n_alpha|^2` for positive root index `p`.
    pub fn variance(&self, p: usize) -> C64 {
        self.variances[p]
    }

    pub fn num_vars(&self) -> usize {
        self.variances.len()
    }
}

/// Monomial exponents per positive root: (holomorphic, antiholomorphic).
pub type GaussMonomial = Vec<(u16, u16)>;

/// Sparse polynomial in the variables `n_alpha`, `conj(n_alpha)` over the
/// positive roots.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussPolynomial {
    pub nvars: usize,
    pub terms: BTreeMap<GaussMonomial, C64>,
}

impl GaussPolynomial {
    pub fn zero(nvars: usize) -> Self {
        GaussPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        if c != ZERO_C {
            p.terms.insert(vec![(0, 0); nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, ONE_C)
    }

    /// The holomorphic variable `n_p`.
    pub fn var_hol(nvars: usize, p: usize) -> Self {
        let mut m = vec![(0u16, 0u16); nvars];
        m[p].0 = 1;
        let mut poly = Self::zero(nvars);
        poly.terms.insert(m, ONE_C);
        poly
    }

    /// The antiholomorphic variable `conj(n_p)`.
    pub fn var_anti(nvars: usize, p: usize) -> Self {
        let mut m = vec![(0u16, 0u16); nvars];
        m[p].1 = 1;
        let mut poly = Self::zero(nvars);
        poly.terms.insert(m, ONE_C);
        poly
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, &c) in &other.terms {
            let e = self.terms.entry(m.clone()).or_insert(ZERO_C);
            *e += c;
            if e.norm_sqr() == 0.0 {
                self.terms.remove(m);
            }
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == ZERO_C {
            return Self::zero(self.nvars);
        }
        GaussPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                let m: GaussMonomial = m1
                    .iter()
                    .zip(m2)
                    .map(|(&(h1, a1), &(h2, a2))| (h1 + h2, a1 + a2))
                    .collect();
                let e = out.terms.entry(m).or_insert(ZERO_C);
                *e += c1 * c2;
            }
        }
        out.terms.retain(|_, v| v.norm_sqr() != 0.0);
        out
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&(h, a)| (h + a) as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Evaluate at a sample of the holomorphic coordinates.
    pub fn eval(&self, n_vals: &[C64]) -> C64 {
        let mut acc = ZERO_C;
        for (m, &coeff) in &self.terms {
            let mut t = coeff;
            for (p, &(h, a)) in m.iter().enumerate() {
                if h > 0 {
                    t *= n_vals[p].powu(h as u32);
                }
                if a > 0 {
                    t *= n_vals[p].conj().powu(a as u32);
                }
            }
            acc += t;
        }
        acc
    }
}

/// Exact Gaussian expectation of a polynomial in `n_alpha, conj(n_alpha)`
/// under the per-root complex Gaussian weights: independent roots, so each
/// factor contributes `k! var^k` when holomorphic and antiholomorphic
/// degrees match, and the term vanishes otherwise.
pub fn wick_expectation(p: &GaussPolynomial, spec: &NilpotentGaussianSpec) -> C64 {
    let mut acc = ZERO_C;
    'terms: for (m, &coeff) in &p.terms {
        let mut t = coeff;
        for (idx, &(h, a)) in m.iter().enumerate() {
            if h != a {
                continue 'terms;
            }
            if h > 0 {
                let var = spec.variance(idx);
                let mut fact = 1.0;
                for k in 2..=h as u64 {
                    fact *= k as f64;
                }
                t *= var.powu(h as u32) * C64::new(fact, 0.0);
            }
        }
        acc += t;
    }
    acc
}

/// Seeded Monte Carlo expectation against the same per-root Gaussian
/// measure. Complex couplings are reached by reweighting a real-coupling
/// reference and flagged in the estimate.
pub fn mc_expectation<F>(
    f: F,
    spec: &NilpotentGaussianSpec,
    samples: u64,
    seed: u64,
) -> Result<Estimate>
where
    F: Fn(&[C64]) -> C64 + Sync,
{
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let nvars = spec.num_vars();
    let gamma = spec.gamma();
    if gamma.im == 0.0 {
        let scales: Vec<f64> = (0..nvars)
            .map(|p| (spec.variance(p).re / 2.0).sqrt())
            .collect();
        let acc = chunked_mc(samples, seed, |rng, acc| {
            let mut ns = vec![ZERO_C; nvars];
            for (i, &s) in scales.iter().enumerate() {
                let g1: f64 = rng.sample(StandardNormal);
                let g2: f64 = rng.sample(StandardNormal);
                ns[i] = C64::new(s * g1, s * g2);
            }
            acc.push(f(&ns));
        });
        Ok(acc.estimate())
    } else {
        // Reference with gamma_ref = Re(gamma); weight carries the rest.
        let g_ref = C64::new(gamma.re, 0.0);
        let ref_spec = NilpotentGaussianSpec::new(spec.rs().clone(), g_ref)?;
        let scales: Vec<f64> = (0..nvars)
            .map(|p| (ref_spec.variance(p).re / 2.0).sqrt())
            .collect();
        let coeffs: Vec<C64> = (0..nvars)
            .map(|p| {
                let norm = C64::new(
                    spec.rs().norm(p).to_f64().expect("norm fits f64"),
                    0.0,
                );
                // exp[-2(gamma - g_ref)/<a,a> |n|^2]
                -C64::new(2.0, 0.0) * (gamma - g_ref) / norm
            })
            .collect();
        let num = chunked_mc(samples, seed, |rng, acc| {
            let mut ns = vec![ZERO_C; nvars];
            let mut logw = ZERO_C;
            for (i, &s) in scales.iter().enumerate() {
                let g1: f64 = rng.sample(StandardNormal);
                let g2: f64 = rng.sample(StandardNormal);
                ns[i] = C64::new(s * g1, s * g2);
                logw += coeffs[i] * C64::new(ns[i].norm_sqr(), 0.0);
            }
            acc.push(f(&ns) * logw.exp());
        });
        let den = chunked_mc(samples, seed.wrapping_add(0x9e3779b97f4a7c15), |rng, acc| {
            let mut logw = ZERO_C;
            for (i, &s) in scales.iter().enumerate() {
                let g1: f64 = rng.sample(StandardNormal);
                let g2: f64 = rng.sample(StandardNormal);
                let n = C64::new(s * g1, s * g2);
                logw += coeffs[i] * C64::new(n.norm_sqr(), 0.0);
            }
            acc.push(logw.exp());
        });
        let en = num.estimate();
        let ed = den.estimate();
        let value = en.value / ed.value;
        let rel = (en.stderr / en.value.norm().max(1e-300)).hypot(ed.stderr / ed.value.norm());
        Ok(Estimate {
            value,
            stderr: value.norm() * rel,
            samples,
            reweighted: true,
        })
    }
}

/// Exact coefficient `prod_{a>0} <a,a>/2` of the closed-form normalization:
/// the full integral is this times `(pi / gamma)^{#positive roots}`.
pub fn z_nplus_exact(rs: &RootSystem) -> BigRational {
    let mut acc = BigRational::one();
    for p in 0..rs.num_positive() {
        let r: Rat = rs.norm(p) / Rat::from_integer(2);
        acc *= BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    }
    acc
}

/// Closed-form normalization of the nilpotent Gaussian weight:
/// `prod_{a>0} pi <a,a> / (2 gamma)`.
pub fn z_nplus(rs: &RootSystem, gamma: C64) -> Result<C64> {
    if gamma.norm() == 0.0 {
        return Err(Error::SingularParameters(
            "normalization diverges at gamma = 0".to_string(),
        ));
    }
    let m = rs.num_positive() as i32;
    let coeff = z_nplus_exact(rs).to_f64().expect("coefficient fits f64");
    Ok((C64::new(std::f64::consts::PI, 0.0) / gamma).powi(m) * C64::new(coeff, 0.0))
}
