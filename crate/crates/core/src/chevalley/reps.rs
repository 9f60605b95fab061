//! Concrete matrix representations: the adjoint representation (integer
//! matrices straight from the bracket table), the defining representations
//! of the classical families, and an orthonormalized adjoint variant whose
//! compact-form images are anti-hermitian (used to exponentiate random-walk
//! samples for the exceptional groups).

use std::sync::Arc;

use nalgebra::{DMatrix, Dyn};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::label::Family;
use crate::rootsys::CartanElement;
use crate::C64;

use super::{ad, killing, AlgebraElement, StructureConstants};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Adjoint,
    /// Adjoint conjugated into a basis orthonormal for `-B(x, theta(y))`;
    /// compact elements map to anti-hermitian matrices.
    AdjointOrthonormal,
    Defining,
}

/// A faithful matrix representation with per-basis images, the measured
/// ratio between the Killing form and the representation trace form, and
/// the data needed to re-expand matrices over the Chevalley basis.
pub struct Representation {
    sc: Arc<StructureConstants>,
    kind: RepKind,
    dim: usize,
    images: Vec<DMatrix<C64>>,
    index_ratio: f64,
    /// Invariant bilinear form preserved by the group (B/C/D defining reps).
    form: Option<DMatrix<C64>>,
    /// Unitary frame change mapping standard sampler output (real
    /// orthogonal / interleaved quaternionic matrices) into this
    /// realization's compact group.
    intertwiner: Option<DMatrix<C64>>,
    expand_stack: DMatrix<C64>,
    expand_svd: nalgebra::linalg::SVD<C64, Dyn, Dyn>,
}

impl std::fmt::Debug for Representation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Representation")
            .field("kind", &self.kind)
            .field("dim", &self.dim)
            .field("index_ratio", &self.index_ratio)
            .finish()
    }
}

impl Representation {
    pub fn sc(&self) -> &Arc<StructureConstants> {
        &self.sc
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    /// Dimension of the representation space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index_ratio(&self) -> f64 {
        self.index_ratio
    }

    pub fn form(&self) -> Option<&DMatrix<C64>> {
        self.form.as_ref()
    }

    pub fn intertwiner(&self) -> Option<&DMatrix<C64>> {
        self.intertwiner.as_ref()
    }

    pub fn image_basis(&self, idx: usize) -> &DMatrix<C64> {
        &self.images[idx]
    }

    /// Matrix image of an algebra element.
    pub fn image(&self, x: &AlgebraElement) -> Result<DMatrix<C64>> {
        if x.coeffs.len() != self.sc.dim() {
            return Err(Error::BasisMismatch(format!(
                "element has {} coefficients, basis has {}",
                x.coeffs.len(),
                self.sc.dim()
            )));
        }
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (i, &c) in x.coeffs.iter().enumerate() {
            if c != ZERO {
                m += self.images[i].scale_complex(c);
            }
        }
        Ok(m)
    }

    /// Image of a Cartan element.
    pub fn image_cartan(&self, h: &CartanElement) -> DMatrix<C64> {
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (i, &c) in h.coords.iter().enumerate() {
            if c != ZERO {
                m += self.images[i].scale_complex(c);
            }
        }
        m
    }

    /// Re-expand a matrix over the Chevalley basis by least squares,
    /// rejecting matrices outside the represented algebra's span.
    pub fn expand(&self, m: &DMatrix<C64>) -> Result<AlgebraElement> {
        self.expand_with_tol(m, 1e-10)
    }

    pub fn expand_with_tol(&self, m: &DMatrix<C64>, tol: f64) -> Result<AlgebraElement> {
        let b = DMatrix::<C64>::from_column_slice(self.dim * self.dim, 1, m.as_slice());
        let x = self
            .expand_svd
            .solve(&b, 1e-14)
            .map_err(|e| Error::Consistency(format!("expansion solve failed: {e}")))?;
        let resid = (&self.expand_stack * &x - &b).norm();
        let scale = b.norm().max(1.0);
        if resid > tol * scale {
            return Err(Error::Consistency(format!(
                "matrix lies outside the represented algebra's span \
                 (relative residual {:.3e})",
                resid / scale
            )));
        }
        Ok(AlgebraElement {
            coeffs: x.as_slice().to_vec(),
        })
    }

    /// The adjoint representation, with exact integer matrix entries.
    pub fn adjoint(sc: Arc<StructureConstants>) -> Self {
        let dim = sc.dim();
        let images: Vec<DMatrix<C64>> = (0..dim)
            .map(|i| ad(&sc, &AlgebraElement::basis(&sc, i)).expect("basis element"))
            .collect();
        Self::finish(sc, RepKind::Adjoint, dim, images, None, None)
    }

    /// The adjoint representation in a frame orthonormal for the positive
    /// definite hermitian form `-B(x, theta(y))`.
    pub fn adjoint_orthonormal(sc: Arc<StructureConstants>) -> Self {
        let dim = sc.dim();
        let n = sc.rank();
        let rs = sc.rs().clone();
        // Gram of the Chevalley basis under -B(., theta(.)): block diagonal
        // with the coroot Gram on h and 2/<a,a> per root vector.
        let gram_h = DMatrix::<f64>::from_fn(n, n, |i, j| sc.killing_gram(i, j) as f64);
        let chol = nalgebra::linalg::Cholesky::new(gram_h).expect("coroot Gram is PD");
        let l = chol.l();
        let l_inv_t = l
            .clone()
            .try_inverse()
            .expect("Cholesky factor invertible")
            .transpose();
        let mut c = DMatrix::<f64>::zeros(dim, dim);
        let mut c_inv = DMatrix::<f64>::zeros(dim, dim);
        c.view_mut((0, 0), (n, n)).copy_from(&l_inv_t);
        c_inv
            .view_mut((0, 0), (n, n))
            .copy_from(&l.transpose());
        for r in 0..rs.roots().len() {
            let idx = sc.e_index(r);
            let norm = rs.norm(r).to_f64().expect("rational fits f64");
            c[(idx, idx)] = (norm / 2.0).sqrt();
            c_inv[(idx, idx)] = (2.0 / norm).sqrt();
        }
        let cc = c.map(|x| C64::new(x, 0.0));
        let cc_inv = c_inv.map(|x| C64::new(x, 0.0));
        let images: Vec<DMatrix<C64>> = (0..dim)
            .map(|i| {
                let a = ad(&sc, &AlgebraElement::basis(&sc, i)).expect("basis element");
                &cc_inv * a * &cc
            })
            .collect();
        Self::finish(sc, RepKind::AdjointOrthonormal, dim, images, None, None)
    }

    /// The defining representation of a classical family, built from
    /// standard simple-root generator matrices and the extraspecial
    /// decomposition of the remaining roots.
    pub fn defining(sc: Arc<StructureConstants>) -> Result<Self> {
        let label = sc.rs().label();
        let nd = label.defining_dim().ok_or_else(|| {
            Error::Unsupported(format!(
                "no defining representation for {label}; use the adjoint"
            ))
        })?;
        let n = label.rank;
        let e = |i: usize, j: usize| -> DMatrix<C64> {
            let mut m = DMatrix::<C64>::zeros(nd, nd);
            m[(i, j)] = ONE;
            m
        };
        let sqrt2 = C64::new(std::f64::consts::SQRT_2, 0.0);
        let simple: Vec<DMatrix<C64>> = match label.family {
            Family::A => (0..n).map(|i| e(i, i + 1)).collect(),
            Family::B => (0..n)
                .map(|i| {
                    if i < n - 1 {
                        e(i, i + 1) - e(2 * n - i - 1, 2 * n - i)
                    } else {
                        (e(n - 1, n) - e(n, n + 1)).scale_complex(sqrt2)
                    }
                })
                .collect(),
            Family::C => (0..n)
                .map(|i| {
                    if i < n - 1 {
                        e(i, i + 1) - e(2 * n - i - 2, 2 * n - i - 1)
                    } else {
                        e(n - 1, n)
                    }
                })
                .collect(),
            Family::D => (0..n)
                .map(|i| {
                    if i < n - 1 {
                        e(i, i + 1) - e(2 * n - i - 2, 2 * n - i - 1)
                    } else {
                        e(n - 2, n) - e(n - 1, n + 1)
                    }
                })
                .collect(),
            _ => unreachable!(),
        };

        let rs = sc.rs().clone();
        let nroots = rs.roots().len();
        let mut pos_img: Vec<Option<DMatrix<C64>>> = vec![None; rs.num_positive()];
        let mut neg_img: Vec<Option<DMatrix<C64>>> = vec![None; rs.num_positive()];
        let mut h_img: Vec<Option<DMatrix<C64>>> = vec![None; n];
        for i in 0..n {
            let mut coords = vec![0i64; n];
            coords[i] = 1;
            let r = rs.root_index(&coords).expect("simple root present");
            let ei = simple[i].clone();
            let fi = ei.transpose();
            let hi = &ei * &fi - &fi * &ei;
            pos_img[r] = Some(ei);
            neg_img[r] = Some(fi);
            h_img[i] = Some(hi);
        }
        // Non-simple roots through their extraspecial decomposition.
        for g in 0..rs.num_positive() {
            if rs.roots()[g].height < 2 {
                continue;
            }
            let (a, b, nab) = sc
                .extraspecial_pair(g)
                .ok_or_else(|| Error::Consistency(format!("missing decomposition for {g}")))?;
            let scale = C64::new(1.0 / nab as f64, 0.0);
            let (ea, eb) = (pos_img[a].clone().unwrap(), pos_img[b].clone().unwrap());
            pos_img[g] = Some((&ea * &eb - &eb * &ea).scale_complex(scale));
            let (fa, fb) = (neg_img[a].clone().unwrap(), neg_img[b].clone().unwrap());
            neg_img[g] = Some((&fb * &fa - &fa * &fb).scale_complex(scale));
        }
        let mut images = Vec::with_capacity(sc.dim());
        images.extend(h_img.into_iter().map(Option::unwrap));
        for r in 0..nroots {
            let p = r.min(rs.neg_index(r));
            if rs.roots()[r].positive {
                images.push(pos_img[p].clone().unwrap());
            } else {
                images.push(neg_img[p].clone().unwrap());
            }
        }

        // Invariant bilinear form and the sampler frame change.
        let (form, intertwiner) = match label.family {
            Family::A => (None, None),
            Family::B | Family::D => {
                let s = DMatrix::<C64>::from_fn(nd, nd, |i, j| {
                    if i + j == nd - 1 {
                        ONE
                    } else {
                        ZERO
                    }
                });
                // Unitary W with W^T S W = I: maps real orthogonal matrices
                // to the compact group of this realization.
                let phase = C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_PI_4);
                let w = (DMatrix::<C64>::identity(nd, nd) + s.scale_complex(C64::new(0.0, 1.0)))
                    .scale_complex(phase);
                (Some(s), Some(w))
            }
            Family::C => {
                let mut j = DMatrix::<C64>::zeros(nd, nd);
                for p in 0..nd {
                    j[(p, nd - 1 - p)] = if p < n { ONE } else { -ONE };
                }
                // Permutation from the interleaved quaternionic frame.
                let mut p = DMatrix::<C64>::zeros(nd, nd);
                for k in 0..n {
                    p[(k, 2 * k)] = ONE;
                    p[(2 * n - 1 - k, 2 * k + 1)] = ONE;
                }
                (Some(j), Some(p))
            }
            _ => unreachable!(),
        };

        let rep = Self::finish(sc, RepKind::Defining, nd, images, form, intertwiner);
        rep.verify_bracket_compatibility(1e-12)?;
        rep.verify_form()?;
        Ok(rep)
    }

    fn finish(
        sc: Arc<StructureConstants>,
        kind: RepKind,
        dim: usize,
        images: Vec<DMatrix<C64>>,
        form: Option<DMatrix<C64>>,
        intertwiner: Option<DMatrix<C64>>,
    ) -> Self {
        let basis_dim = sc.dim();
        let mut stack = DMatrix::<C64>::zeros(dim * dim, basis_dim);
        for (i, img) in images.iter().enumerate() {
            stack
                .view_mut((0, i), (dim * dim, 1))
                .copy_from_slice(img.as_slice());
        }
        let svd = nalgebra::linalg::SVD::new(stack.clone(), true, true);
        let mut rep = Representation {
            sc,
            kind,
            dim,
            images,
            index_ratio: 1.0,
            form,
            intertwiner,
            expand_stack: stack,
            expand_svd: svd,
        };
        rep.index_ratio = rep.measure_index_ratio();
        rep
    }

    /// Least-squares fit of `B(X, Y) = c * tr(rho(X) rho(Y))` over a fixed
    /// set of pseudo-random pairs.
    fn measure_index_ratio(&self) -> f64 {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1de);
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        for _ in 0..20 {
            let x = AlgebraElement {
                coeffs: (0..self.sc.dim())
                    .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect(),
            };
            let y = AlgebraElement {
                coeffs: (0..self.sc.dim())
                    .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect(),
            };
            let b = killing(&self.sc, &x, &y).expect("same basis");
            let t = (self.image(&x).expect("same basis") * self.image(&y).expect("same basis"))
                .trace();
            num += b * t.conj();
            den += t.norm_sqr();
        }
        (num / C64::new(den, 0.0)).re
    }

    /// `[rho(b_i), rho(b_j)] = rho([b_i, b_j])` over all basis pairs.
    pub fn verify_bracket_compatibility(&self, tol: f64) -> Result<()> {
        let dim = self.sc.dim();
        for i in 0..dim {
            for j in 0..dim {
                let comm = &self.images[i] * &self.images[j] - &self.images[j] * &self.images[i];
                let mut expected = DMatrix::<C64>::zeros(self.dim, self.dim);
                for &(k, c) in self.sc.bracket_basis(i, j) {
                    expected += self.images[k].scale_complex(C64::new(c as f64, 0.0));
                }
                let resid = (comm - expected).norm();
                if resid > tol {
                    return Err(Error::Consistency(format!(
                        "bracket residual {resid:.3e} at basis pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every image must be skew for the stored bilinear form.
    fn verify_form(&self) -> Result<()> {
        let Some(s) = &self.form else { return Ok(()) };
        for (i, img) in self.images.iter().enumerate() {
            let resid = (img.transpose() * s + s * img).norm();
            if resid > 1e-12 {
                return Err(Error::Consistency(format!(
                    "image {i} not skew for the invariant form (residual {resid:.3e})"
                )));
            }
        }
        Ok(())
    }
}

/// Scale helper: nalgebra's `scale` only accepts real factors.
trait ScaleComplex {
    fn scale_complex(&self, c: C64) -> DMatrix<C64>;
}

impl ScaleComplex for DMatrix<C64> {
    fn scale_complex(&self, c: C64) -> DMatrix<C64> {
        self.map(|x| x * c)
    }
}

/// Plain-text grid of a complex matrix for debugging.
pub fn format_matrix(m: &DMatrix<C64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v.im.abs() < 1e-12 {
                out.push_str(&format!("{:>9.4} ", v.re));
            } else {
                out.push_str(&format!("{:>9.4}{:+.4}i ", v.re, v.im));
            }
        }
        out.push('\n');
    }
    out
}

/// Ratio of the Killing form to the defining trace form: exact classical
/// values used as an oracle in tests.
pub fn classical_index_ratio(family: Family, rank: usize) -> Option<f64> {
    match family {
        Family::A => Some(2.0 * (rank as f64 + 1.0)),
        Family::B => Some(2.0 * rank as f64 - 1.0),
        Family::C => Some(2.0 * rank as f64 + 2.0),
        Family::D => Some(2.0 * rank as f64 - 2.0),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{cartan_involution, chevalley_constants, compact_basis};
    use crate::rootsys::root_system_from_name;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rep(name: &str) -> Representation {
        let sc = Arc::new(
            chevalley_constants(Arc::new(root_system_from_name(name).unwrap())).unwrap(),
        );
        Representation::defining(sc).unwrap()
    }

    #[test]
    fn a1_defining_matrices() {
        let r = rep("A1");
        assert_eq!(r.dim(), 2);
        let h = r.image_basis(0);
        assert_eq!(h[(0, 0)], ONE);
        assert_eq!(h[(1, 1)], -ONE);
        assert_relative_eq!(r.index_ratio(), 4.0, epsilon = 1e-10);
    }

    #[test]
    fn index_ratios_match_classical_values() {
        for name in ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D3", "D4"] {
            let r = rep(name);
            let label = r.sc().rs().label();
            let expected = classical_index_ratio(label.family, label.rank).unwrap();
            assert_relative_eq!(r.index_ratio(), expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn defining_rep_is_bracket_compatible() {
        // Construction verifies the 1e-12 residual; poke one anyway.
        for name in ["A2", "B2", "C3", "D4"] {
            rep(name).verify_bracket_compatibility(1e-12).unwrap();
        }
    }

    #[test]
    fn positive_root_images_are_strictly_upper_triangular() {
        for name in ["A3", "B2", "B3", "C2", "C3", "D3", "D4"] {
            let r = rep(name);
            let sc = r.sc();
            let rs = sc.rs();
            for p in 0..rs.num_positive() {
                let img = r.image_basis(sc.e_index(p));
                for i in 0..r.dim() {
                    for j in 0..=i {
                        assert_eq!(img[(i, j)], ZERO, "{name} root {p} entry ({i},{j})");
                    }
                }
            }
            for i in 0..rs.rank() {
                let img = r.image_basis(i);
                for a in 0..r.dim() {
                    for b in 0..r.dim() {
                        if a != b {
                            assert_eq!(img[(a, b)], ZERO, "{name} H_{i} off-diagonal");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn involution_maps_to_negative_adjoint_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for name in ["A2", "B2", "C2", "D3"] {
            let r = rep(name);
            let sc = r.sc();
            for _ in 0..5 {
                let x = AlgebraElement {
                    coeffs: (0..sc.dim())
                        .map(|_| {
                            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                        })
                        .collect(),
                };
                let lhs = r.image(&cartan_involution(sc, &x)).unwrap();
                let rhs = -r.image(&x).unwrap().adjoint();
                assert_relative_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn adjoint_rep_has_integer_entries_and_unit_index() {
        let sc = Arc::new(
            chevalley_constants(Arc::new(root_system_from_name("G2").unwrap())).unwrap(),
        );
        let r = Representation::adjoint(sc);
        assert_eq!(r.dim(), 14);
        for i in 0..r.sc().dim() {
            for v in r.image_basis(i).iter() {
                assert_eq!(v.re, v.re.round());
                assert_eq!(v.im, 0.0);
            }
        }
        assert_relative_eq!(r.index_ratio(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn orthonormal_adjoint_sends_compact_elements_to_antihermitian() {
        for name in ["A2", "G2"] {
            let sc = Arc::new(
                chevalley_constants(Arc::new(root_system_from_name(name).unwrap())).unwrap(),
            );
            let r = Representation::adjoint_orthonormal(sc.clone());
            for b in compact_basis(&sc) {
                let m = r.image(&b).unwrap();
                assert_relative_eq!((m.adjoint() + &m).norm(), 0.0, epsilon = 1e-9);
            }
            assert_relative_eq!(r.index_ratio(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn expand_round_trips_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for name in ["A2", "B2"] {
            let r = rep(name);
            let sc = r.sc();
            for _ in 0..10 {
                let x = AlgebraElement {
                    coeffs: (0..sc.dim())
                        .map(|_| {
                            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                        })
                        .collect(),
                };
                let m = r.image(&x).unwrap();
                let back = r.expand(&m).unwrap();
                let err: f64 = back
                    .coeffs
                    .iter()
                    .zip(&x.coeffs)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum();
                assert!(err < 1e-18, "{name} round trip error {err}");
            }
        }
    }

    #[test]
    fn expand_rejects_matrices_outside_the_span() {
        let r = rep("A1");
        // Identity is not traceless, hence not in sl2.
        let m = DMatrix::<C64>::identity(2, 2);
        assert!(r.expand(&m).is_err());
    }

    #[test]
    fn exceptional_defining_rejected() {
        let sc = Arc::new(
            chevalley_constants(Arc::new(root_system_from_name("G2").unwrap())).unwrap(),
        );
        let err = Representation::defining(sc).unwrap_err();
        assert!(err.to_string().contains("adjoint"));
    }
}
