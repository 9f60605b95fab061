//! The Weyl-alternating right-hand side of the spherical integral identity:
//! exact constants, the closed form for `F = 1`, the determinant
//! cross-check for the A family, symbolic expansion of trace polynomials
//! over the nilpotent Gaussian, and the generalized Schur decomposition.

pub mod dsl;
pub mod schur;
pub mod weyl_ratio;

use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::chevalley::{Representation, StructureConstants};
use crate::error::{Error, Result};
use crate::gaussian::{
    mc_expectation, wick_expectation, z_nplus, GaussPolynomial, NilpotentGaussianSpec,
};
use crate::rootsys::{delta, weyl_act, weyl_group, CartanElement, RootSystem, WeylElement};
use crate::{Rat, C64};

pub use dsl::{parse_invariant, InvariantPolynomial, Slot, Term, TraceWord};
pub use schur::{generalized_schur, SchurDecomposition};
pub use weyl_ratio::{complex_weyl_ratio_check, RatioCheckConfig, RatioCheckReport};

const ZERO_C: C64 = C64::new(0.0, 0.0);
const ONE_C: C64 = C64::new(1.0, 0.0);

/// Threshold below which an alternating-sum denominator counts as
/// degenerate; inputs this close to a Weyl wall are rejected.
pub const REGULARITY_TOL: f64 = 1e-12;

/// `|W|` from the exponent product rule, without enumeration.
pub fn weyl_order(rs: &RootSystem) -> usize {
    crate::rootsys::exponents(rs).iter().map(|m| m + 1).product()
}

/// Exact coefficient of the overall constant: `C = coeff * gamma^{-m}` with
/// `m` the number of positive roots and
/// `coeff = |W| * prod_j m_j! * prod_{a>0} <a,a>/2`.
pub fn hc_constant_exact(rs: &RootSystem) -> BigRational {
    let mut acc = BigRational::from_integer(BigInt::from(weyl_order(rs) as i64));
    for m in crate::rootsys::exponents(rs) {
        for k in 2..=m {
            acc *= BigRational::from_integer(BigInt::from(k as i64));
        }
    }
    for p in 0..rs.num_positive() {
        let r: Rat = rs.norm(p) / Rat::from_integer(2);
        acc *= BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    }
    acc
}

/// The normalization constant of the Weyl-alternating sum:
/// `|W| * prod_j m_j! * prod_{a>0} <a,a>/(2 gamma)`.
pub fn hc_constant(rs: &RootSystem, gamma: C64) -> Result<C64> {
    if gamma.norm() == 0.0 {
        return Err(Error::SingularParameters(
            "constant diverges at gamma = 0".to_string(),
        ));
    }
    let coeff = hc_constant_exact(rs).to_f64().expect("coefficient fits f64");
    Ok(C64::new(coeff, 0.0) * gamma.powi(-(rs.num_positive() as i32)))
}

fn require_regular(rs: &RootSystem, h: &CartanElement, name: &str) -> Result<C64> {
    let d = delta(rs, h);
    if d.norm() < REGULARITY_TOL {
        return Err(Error::Degenerate(format!(
            "{name} lies on a Weyl wall (Delta = {d})"
        )));
    }
    Ok(d)
}

/// Closed form of the identity for `F = 1`:
/// `(C/|W|) sum_w exp(gamma B(H, J_w)) / (Delta(H) Delta(J_w))`.
pub fn hc_f1(rs: &RootSystem, h: &CartanElement, j: &CartanElement, gamma: C64) -> Result<C64> {
    let dh = require_regular(rs, h, "H")?;
    require_regular(rs, j, "J")?;
    let w_all = weyl_group(rs)?;
    let constant = hc_constant(rs, gamma)? / C64::new(w_all.len() as f64, 0.0);
    let mut acc = ZERO_C;
    for w in &w_all {
        let jw = weyl_act(rs, w, j)?;
        let djw = delta(rs, &jw);
        acc += (gamma * rs.killing_h(h, &jw)).exp() / (dh * djw);
    }
    Ok(constant * acc)
}

/// `det(exp(gamma' x_i y_j)) / (Vandermonde(x) Vandermonde(y))`.
pub fn iz_determinant(x: &[f64], y: &[f64], gamma: C64) -> Result<C64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let n = x.len();
    let vandermonde = |v: &[f64]| -> f64 {
        let mut acc = 1.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                acc *= v[i] - v[j];
            }
        }
        acc
    };
    let check_distinct = |v: &[f64], name: &str| -> Result<()> {
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if (v[i] - v[j]).abs() < REGULARITY_TOL {
                    return Err(Error::Degenerate(format!(
                        "repeated entries in {name}: positions {i} and {j}"
                    )));
                }
            }
        }
        Ok(())
    };
    check_distinct(x, "x")?;
    check_distinct(y, "y")?;
    let m = DMatrix::<C64>::from_fn(n, n, |i, j| (gamma * C64::new(x[i] * y[j], 0.0)).exp());
    let det = m.determinant();
    Ok(det / C64::new(vandermonde(x) * vandermonde(y), 0.0))
}

/// One instance of the identity: algebra data, a regular pair `(H, J)`,
/// the coupling, and the invariant polynomial (with the representation its
/// traces are taken in).
#[derive(Debug, Clone)]
pub struct SphericalProblem {
    pub sc: Arc<StructureConstants>,
    pub rep: Arc<Representation>,
    pub h: CartanElement,
    pub j: CartanElement,
    pub gamma: C64,
    pub f: InvariantPolynomial,
}

impl SphericalProblem {
    pub fn new(
        sc: Arc<StructureConstants>,
        rep: Arc<Representation>,
        h: CartanElement,
        j: CartanElement,
        gamma: C64,
        f: InvariantPolynomial,
    ) -> Result<Self> {
        let rs = sc.rs();
        if h.coords.len() != rs.rank() || j.coords.len() != rs.rank() {
            return Err(Error::DimensionMismatch {
                expected: rs.rank(),
                got: h.coords.len().max(j.coords.len()),
            });
        }
        require_regular(rs, &h, "H")?;
        require_regular(rs, &j, "J")?;
        Ok(SphericalProblem {
            sc,
            rep,
            h,
            j,
            gamma,
            f,
        })
    }

    pub fn rs(&self) -> &Arc<RootSystem> {
        self.sc.rs()
    }

    /// Closed form for this problem's `(H, J, gamma)` with `F = 1`.
    pub fn hc_f1(&self) -> Result<C64> {
        hc_f1(self.rs(), &self.h, &self.j, self.gamma)
    }
}

/// The default representation for a label: the defining one for classical
/// families, the orthonormalized adjoint otherwise (its frame makes the
/// compact group literally unitary, and trace words are frame-invariant).
pub fn default_rep(sc: &Arc<StructureConstants>) -> Result<Arc<Representation>> {
    let rep = if sc.rs().label().is_classical() {
        Representation::defining(sc.clone())?
    } else {
        Representation::adjoint_orthonormal(sc.clone())
    };
    Ok(Arc::new(rep))
}

/// How to evaluate the nilpotent Gaussian factor of each Weyl term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhsMethod {
    ExactWick,
    GaussianMc { samples: u64, seed: u64 },
}

/// Per-Weyl-element record of the alternating sum.
#[derive(Debug, Clone)]
pub struct WeylTermRecord {
    pub word: Vec<usize>,
    pub sign: i64,
    /// `exp(gamma B(H, J_w))`.
    pub phase: C64,
    /// `Delta(H) Delta(J_w)`.
    pub denom: C64,
    /// Normalized nilpotent Gaussian factor.
    pub nilpotent: C64,
    pub nil_stderr: f64,
    /// `phase / denom * nilpotent`.
    pub term: C64,
}

/// The assembled right-hand side with its per-element breakdown.
#[derive(Debug, Clone)]
pub struct RHSBreakdown {
    /// `C / |W|`.
    pub constant: C64,
    pub records: Vec<WeylTermRecord>,
    pub total: C64,
    pub total_stderr: f64,
    /// The same total assembled through the simplified constant form
    /// `(prod m_j! / pi^m) * Z_{n+}`; must agree with `total`.
    pub remark_total: C64,
}

/// Evaluate the right-hand side of the identity: for each Weyl element,
/// expand `F(H + N, J_w + theta(N))` in the coefficients of `N` and
/// average against the nilpotent Gaussian weight, then assemble the
/// alternating sum with its exact constants.
pub fn rhs_eval(p: &SphericalProblem, method: RhsMethod) -> Result<RHSBreakdown> {
    let rs = p.rs().clone();
    let sc = &p.sc;
    let rep = &p.rep;
    let gamma = p.gamma;
    if let RhsMethod::GaussianMc { .. } = method {
        if gamma.im != 0.0 {
            return Err(Error::OutOfDomain(
                "Monte Carlo evaluation needs real gamma; use exact Wick".to_string(),
            ));
        }
    }
    let dh = require_regular(&rs, &p.h, "H")?;
    require_regular(&rs, &p.j, "J")?;

    let nil_spec = NilpotentGaussianSpec::new(rs.clone(), gamma)?;
    let npos = rs.num_positive();
    let w_all = weyl_group(&rs)?;
    let constant = hc_constant(&rs, gamma)? / C64::new(w_all.len() as f64, 0.0);

    // X = rho(H) + sum_p n_p rho(E_p) is shared by every Weyl term.
    let rho_h = rep.image_cartan(&p.h);
    let pos_imgs: Vec<&DMatrix<C64>> = (0..npos).map(|q| rep.image_basis(sc.e_index(q))).collect();
    let neg_imgs: Vec<&DMatrix<C64>> = (0..npos)
        .map(|q| rep.image_basis(sc.e_index(rs.neg_index(q))))
        .collect();
    let nd = rep.dim();
    let sym_x = if method == RhsMethod::ExactWick && !p.f.is_constant() {
        Some(symbolic_matrix(&rho_h, &pos_imgs, npos, nd, true))
    } else {
        None
    };

    let mut records = Vec::with_capacity(w_all.len());
    let mut acc = ZERO_C;
    let mut var_acc = 0.0;
    for w in &w_all {
        let jw = weyl_act(&rs, w, &p.j)?;
        let rho_jw = rep.image_cartan(&jw);
        let djw = delta(&rs, &jw);
        let phase = (gamma * rs.killing_h(&p.h, &jw)).exp();
        let denom = dh * djw;
        let (nilpotent, nil_stderr) = if p.f.is_constant() {
            (C64::new(p.f.constant_value(), 0.0), 0.0)
        } else {
            match method {
                RhsMethod::ExactWick => {
                    let sym_y = symbolic_matrix(&rho_jw, &neg_imgs, npos, nd, false);
                    let poly = expand_invariant(&p.f, sym_x.as_ref().unwrap(), &sym_y, npos, nd);
                    (wick_expectation(&poly, &nil_spec), 0.0)
                }
                RhsMethod::GaussianMc { samples, seed } => {
                    let f = &p.f;
                    let est = mc_expectation(
                        |ns: &[C64]| {
                            let mut x = rho_h.clone();
                            let mut y = rho_jw.clone();
                            for q in 0..npos {
                                x += pos_imgs[q].map(|v| v * ns[q]);
                                y += neg_imgs[q].map(|v| v * (-ns[q].conj()));
                            }
                            f.eval_matrices(&x, &y)
                        },
                        &nil_spec,
                        samples,
                        seed,
                    )?;
                    (est.value, est.stderr)
                }
            }
        };
        let term = phase / denom * nilpotent;
        acc += term;
        let scale = (constant * phase / denom).norm();
        var_acc += scale * scale * nil_stderr * nil_stderr;
        records.push(WeylTermRecord {
            word: w.word.clone(),
            sign: w.sign,
            phase,
            denom,
            nilpotent,
            nil_stderr,
            term,
        });
    }
    let total = constant * acc;
    let total_stderr = var_acc.sqrt();

    // Cross-check through the simplified constant convention: the overall
    // factor is (prod m_j! / pi^m) and each term carries the unnormalized
    // Gaussian integral Z_{n+} * nilpotent.
    let mut fact_prod = 1.0;
    for m in crate::rootsys::exponents(&rs) {
        for k in 2..=m {
            fact_prod *= k as f64;
        }
    }
    let z = z_nplus(&rs, gamma)?;
    let remark_constant = C64::new(
        fact_prod / std::f64::consts::PI.powi(npos as i32),
        0.0,
    );
    let remark_total = remark_constant
        * records
            .iter()
            .map(|r| r.phase / r.denom * (z * r.nilpotent))
            .sum::<C64>();
    let agreement = (total - remark_total).norm();
    if agreement > 1e-12 * total.norm().max(1e-30) {
        return Err(Error::Consistency(format!(
            "constant conventions disagree: {total} vs {remark_total}"
        )));
    }

    Ok(RHSBreakdown {
        constant,
        records,
        total,
        total_stderr,
        remark_total,
    })
}

/// Entry polynomials of `rho(H or J_w) + sum_p (+-) v_p rho(E_{+-p})`, with
/// holomorphic variables for the positive side and negated antiholomorphic
/// variables for the theta-image side.
fn symbolic_matrix(
    base: &DMatrix<C64>,
    imgs: &[&DMatrix<C64>],
    npos: usize,
    nd: usize,
    holomorphic: bool,
) -> Vec<GaussPolynomial> {
    let mut out = vec![GaussPolynomial::zero(npos); nd * nd];
    for i in 0..nd {
        for j in 0..nd {
            let mut poly = GaussPolynomial::constant(npos, base[(i, j)]);
            for (q, img) in imgs.iter().enumerate() {
                let c = img[(i, j)];
                if c != ZERO_C {
                    let var = if holomorphic {
                        GaussPolynomial::var_hol(npos, q).scale(c)
                    } else {
                        GaussPolynomial::var_anti(npos, q).scale(-c)
                    };
                    poly.add_assign(&var);
                }
            }
            out[i * nd + j] = poly;
        }
    }
    out
}

fn poly_mat_mul(
    a: &[GaussPolynomial],
    b: &[GaussPolynomial],
    npos: usize,
    nd: usize,
) -> Vec<GaussPolynomial> {
    let mut out = vec![GaussPolynomial::zero(npos); nd * nd];
    for i in 0..nd {
        for j in 0..nd {
            let mut acc = GaussPolynomial::zero(npos);
            for k in 0..nd {
                acc.add_assign(&a[i * nd + k].mul(&b[k * nd + j]));
            }
            out[i * nd + j] = acc;
        }
    }
    out
}

fn poly_trace(a: &[GaussPolynomial], npos: usize, nd: usize) -> GaussPolynomial {
    let mut acc = GaussPolynomial::zero(npos);
    for i in 0..nd {
        acc.add_assign(&a[i * nd + i]);
    }
    acc
}

/// Expand the invariant polynomial at the symbolic arguments into a
/// polynomial in the nilpotent coefficients.
fn expand_invariant(
    f: &InvariantPolynomial,
    sym_x: &[GaussPolynomial],
    sym_y: &[GaussPolynomial],
    npos: usize,
    nd: usize,
) -> GaussPolynomial {
    let mut total = GaussPolynomial::zero(npos);
    for term in &f.terms {
        let mut val = GaussPolynomial::constant(npos, C64::new(term.coeff, 0.0));
        for word in &term.words {
            let pick = |s: Slot| match s {
                Slot::X => sym_x,
                Slot::Y => sym_y,
            };
            let mut prod: Option<Vec<GaussPolynomial>> = None;
            for &s in &word.0 {
                prod = Some(match prod {
                    None => pick(s).to_vec(),
                    Some(p) => poly_mat_mul(&p, pick(s), npos, nd),
                });
            }
            let tr = poly_trace(&prod.expect("nonempty word"), npos, nd);
            val = val.mul(&tr);
        }
        total.add_assign(&val);
    }
    total
}
