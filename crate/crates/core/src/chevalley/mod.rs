//! Chevalley-basis structure constants, ad-matrices, the Killing form, the
//! Cartan involution, and the compact real form.
//!
//! The basis is ordered as the simple coroots `H_1..H_n` followed by the
//! root vectors `E_alpha` in root-list order. All structure constants are
//! integers; signs are fixed by the extraspecial-pair convention with
//! positive roots totally ordered by (height, lexicographic coordinates).

pub mod reps;

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rootsys::{CartanElement, RootSystem};
use crate::{Rat, C64};

pub use reps::{RepKind, Representation};

/// Sparse integer combination over the Chevalley basis.
pub type SparseVec = Vec<(usize, i64)>;

/// Integer bracket table over the Chevalley basis of a semisimple algebra.
#[derive(Debug)]
pub struct StructureConstants {
    rs: Arc<RootSystem>,
    dim: usize,
    table: Vec<Vec<SparseVec>>,
    killing_gram: Vec<Vec<i64>>,
    /// For each non-simple positive root index, its extraspecial pair and
    /// the constant `N_{a,b} = p+1` attached to it.
    extraspecial: HashMap<usize, (usize, usize, i64)>,
}

impl StructureConstants {
    pub fn rs(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    /// Dimension of the algebra: rank + number of roots.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// Basis index of the simple coroot `H_i`.
    pub fn h_index(&self, i: usize) -> usize {
        i
    }

    /// Basis index of the root vector of root `r`.
    pub fn e_index(&self, r: usize) -> usize {
        self.rs.rank() + r
    }

    /// Root index of a root-vector basis index, if it is one.
    pub fn root_of_index(&self, idx: usize) -> Option<usize> {
        (idx >= self.rs.rank()).then(|| idx - self.rs.rank())
    }

    /// `[b_i, b_j]` as a sparse integer combination.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.table[i][j]
    }

    /// Extraspecial decomposition of a non-simple positive root:
    /// `(a, b, N_{a,b})` with `roots[a] + roots[b] = roots[g]`.
    pub fn extraspecial_pair(&self, g: usize) -> Option<(usize, usize, i64)> {
        self.extraspecial.get(&g).copied()
    }

    /// Cached `tr(ad_i ad_j)` (exact integers).
    pub fn killing_gram(&self, i: usize, j: usize) -> i64 {
        self.killing_gram[i][j]
    }

    fn check_element(&self, x: &AlgebraElement) -> Result<()> {
        if x.coeffs.len() != self.dim {
            return Err(Error::BasisMismatch(format!(
                "element has {} coefficients, basis has {}",
                x.coeffs.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// `[X, Y]` for complex elements.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (i, &xi) in x.coeffs.iter().enumerate() {
            if xi == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, &yj) in y.coeffs.iter().enumerate() {
                if yj == C64::new(0.0, 0.0) {
                    continue;
                }
                for &(k, c) in &self.table[i][j] {
                    out[k] += xi * yj * C64::new(c as f64, 0.0);
                }
            }
        }
        Ok(AlgebraElement { coeffs: out })
    }
}

/// Complex element of the algebra over the Chevalley basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub coeffs: Vec<C64>,
}

impl AlgebraElement {
    pub fn zero(sc: &StructureConstants) -> Self {
        AlgebraElement {
            coeffs: vec![C64::new(0.0, 0.0); sc.dim()],
        }
    }

    pub fn basis(sc: &StructureConstants, idx: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); sc.dim()];
        coeffs[idx] = C64::new(1.0, 0.0);
        AlgebraElement { coeffs }
    }

    /// Embed a Cartan element (coefficients over the simple coroots).
    pub fn from_cartan(sc: &StructureConstants, h: &CartanElement) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); sc.dim()];
        coeffs[..h.coords.len()].copy_from_slice(&h.coords);
        AlgebraElement { coeffs }
    }

    /// The Cartan-part coordinates.
    pub fn h_part(&self, sc: &StructureConstants) -> CartanElement {
        CartanElement::new(self.coeffs[..sc.rank()].to_vec())
    }

    /// Coefficients over the positive root vectors.
    pub fn n_plus_part(&self, sc: &StructureConstants) -> Vec<C64> {
        let m = sc.rs().num_positive();
        (0..m).map(|p| self.coeffs[sc.e_index(p)]).collect()
    }

    /// Coefficients over the negative root vectors, in mirrored order.
    pub fn n_minus_part(&self, sc: &StructureConstants) -> Vec<C64> {
        let m = sc.rs().num_positive();
        (0..m)
            .map(|p| self.coeffs[sc.e_index(sc.rs().neg_index(p))])
            .collect()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: C64) -> AlgebraElement {
        AlgebraElement {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Builder state for the positive-pair constants.
struct NBuilder<'a> {
    rs: &'a RootSystem,
    /// `N_{a,b}` for positive root indices `a < b` with `a + b` a root.
    pos: HashMap<(usize, usize), i64>,
    extraspecial: HashMap<usize, (usize, usize, i64)>,
}

impl<'a> NBuilder<'a> {
    /// Largest `k >= 0` with `beta - k * alpha` a root.
    fn string_down(&self, alpha: usize, beta: usize) -> i64 {
        let a = &self.rs.roots()[alpha].coords;
        let b = &self.rs.roots()[beta].coords;
        let mut k = 1i64;
        loop {
            let probe: Vec<i64> = b
                .iter()
                .zip(a)
                .map(|(&bb, &aa)| bb - k * aa)
                .collect();
            if probe.iter().all(|&c| c == 0) || self.rs.root_index(&probe).is_none() {
                return k - 1;
            }
            k += 1;
        }
    }

    fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let sa = &self.rs.roots()[a].coords;
        let sb = &self.rs.roots()[b].coords;
        let sum: Vec<i64> = sa.iter().zip(sb).map(|(&x, &y)| x + y).collect();
        if sum.iter().all(|&c| c == 0) {
            None
        } else {
            self.rs.root_index(&sum)
        }
    }

    /// `N_{a,b}` for arbitrary root indices with `roots[a] + roots[b]` a
    /// root, reduced to the positive-pair table through the relation
    /// `N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b)` for `a + b + c = 0`.
    fn n_any(&self, a: usize, b: usize) -> Rat {
        let ra = &self.rs.roots()[a];
        let rb = &self.rs.roots()[b];
        match (ra.positive, rb.positive) {
            (true, true) => {
                let key = if a < b { (a, b) } else { (b, a) };
                let sign = if a < b { 1 } else { -1 };
                Rat::from_integer(sign * self.pos[&key])
            }
            (false, false) => -self.n_any(self.rs.neg_index(a), self.rs.neg_index(b)),
            (true, false) => {
                let m_abs = self.rs.neg_index(b);
                let sum = self.sum_index(a, b).expect("sum must be a root");
                if self.rs.roots()[sum].positive {
                    // N_{p,m} = (sum,sum)/(p,p) * (-N_{m',sum}), m' + sum = p.
                    let ratio = self.rs.norm(sum) / self.rs.norm(a);
                    -ratio * self.n_any(m_abs, sum)
                } else {
                    // N_{p,m} = (q,q)/(m,m) * N_{q,p} with q = -(sum), q + p = m'.
                    let q = self.rs.neg_index(sum);
                    let ratio = self.rs.norm(q) / self.rs.norm(b);
                    ratio * self.n_any(q, a)
                }
            }
            (false, true) => -self.n_any(b, a),
        }
    }

    /// Fill the positive-pair table in increasing height of the sum.
    fn build(&mut self) -> Result<()> {
        let m = self.rs.num_positive();
        for g in 0..m {
            if self.rs.roots()[g].height < 2 {
                continue;
            }
            // All decompositions g = a + b with a < b positive roots.
            let mut pairs = Vec::new();
            for a in 0..m {
                let diff: Vec<i64> = self.rs.roots()[g]
                    .coords
                    .iter()
                    .zip(&self.rs.roots()[a].coords)
                    .map(|(&gc, &ac)| gc - ac)
                    .collect();
                if let Some(b) = self.rs.root_index(&diff) {
                    if b < m && a < b {
                        pairs.push((a, b));
                    }
                }
            }
            if pairs.is_empty() {
                return Err(Error::Consistency(format!(
                    "no decomposition for positive root {g}"
                )));
            }
            let (a1, b1) = pairs[0];
            let n1 = self.string_down(a1, b1) + 1;
            self.pos.insert((a1, b1), n1);
            self.extraspecial.insert(g, (a1, b1, n1));
            for &(a, b) in &pairs[1..] {
                // Jacobi identity on (E_{a1}, E_{b1}, E_{-a}) combined with
                // the zero-sum triple rule eliminates everything but
                // constants of lower height:
                //   N_{a,b} = (g,g) / ((b,b) N_{a1,b1}) *
                //             [ N_{b1,-a} N_{b1-a,a1} + N_{-a,a1} N_{a1-a,b1} ]
                let mut acc = Rat::zero();
                if let Some(d) = self.sum_index(b1, self.rs.neg_index(a)) {
                    acc += self.n_any(b1, self.rs.neg_index(a)) * self.n_any(d, a1);
                }
                if let Some(d) = self.sum_index(a1, self.rs.neg_index(a)) {
                    acc += self.n_any(self.rs.neg_index(a), a1) * self.n_any(d, b1);
                }
                let val =
                    self.rs.norm(g) / (self.rs.norm(b) * Rat::from_integer(n1)) * acc;
                if !val.is_integer() {
                    return Err(Error::Consistency(format!(
                        "non-integer structure constant for pair ({a},{b})"
                    )));
                }
                let val = val.to_integer();
                let expected = self.string_down(a, b) + 1;
                if val.abs() != expected {
                    return Err(Error::Consistency(format!(
                        "structure constant magnitude {val} differs from p+1={expected} \
                         for pair ({a},{b})"
                    )));
                }
                self.pos.insert((a, b), val);
            }
        }
        Ok(())
    }
}

/// Build the integer Chevalley bracket table for a root system.
pub fn chevalley_constants(rs: Arc<RootSystem>) -> Result<StructureConstants> {
    let n = rs.rank();
    let nroots = rs.roots().len();
    let dim = n + nroots;

    let mut nb = NBuilder {
        rs: &rs,
        pos: HashMap::new(),
        extraspecial: HashMap::new(),
    };
    nb.build()?;

    let mut table: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); dim]; dim];
    // [H_i, E_r] = alpha_r(H_i) E_r.
    for i in 0..n {
        for r in 0..nroots {
            let v = rs.root_on_coroot(r, i);
            if v != 0 {
                table[i][n + r] = vec![(n + r, v)];
                table[n + r][i] = vec![(n + r, -v)];
            }
        }
    }
    // [E_r, E_s].
    for r in 0..nroots {
        for s in 0..nroots {
            if r == s {
                continue;
            }
            if s == rs.neg_index(r) {
                // [E_alpha, E_{-alpha}] = H_alpha.
                let cv = rs.coroot_coords(r);
                table[n + r][n + s] = cv
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i, c))
                    .collect();
                continue;
            }
            if let Some(t) = nb.sum_index(r, s) {
                let val = nb.n_any(r, s);
                debug_assert!(val.is_integer());
                table[n + r][n + s] = vec![(n + t, val.to_integer())];
            }
        }
    }

    let killing_gram = compute_killing_gram(&table, dim);
    let NBuilder { extraspecial, .. } = nb;
    let sc = StructureConstants {
        rs,
        dim,
        table,
        killing_gram,
        extraspecial,
    };
    validate(&sc)?;
    Ok(sc)
}

fn compute_killing_gram(table: &[Vec<SparseVec>], dim: usize) -> Vec<Vec<i64>> {
    // tr(ad_i ad_j) = sum_c <e_c, ad_i ad_j e_c>.
    let mut gram = vec![vec![0i64; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = 0i64;
            for c in 0..dim {
                for &(k, v) in &table[j][c] {
                    for &(l, w) in &table[i][k] {
                        if l == c {
                            acc += v * w;
                        }
                    }
                }
            }
            gram[i][j] = acc;
        }
    }
    gram
}

fn sparse_bracket(table: &[Vec<SparseVec>], x: &[(usize, i64)], y: &[(usize, i64)]) -> Vec<i64> {
    let dim = table.len();
    let mut out = vec![0i64; dim];
    for &(i, xi) in x {
        for &(j, yj) in y {
            for &(k, c) in &table[i][j] {
                out[k] += xi * yj * c;
            }
        }
    }
    out
}

/// Structural validation: antisymmetry, the defining sl2 relations for
/// every root, and the Jacobi identity (all triples for small algebras, a
/// deterministic stride sample for large ones).
fn validate(sc: &StructureConstants) -> Result<()> {
    let dim = sc.dim;
    let rs = sc.rs();
    for i in 0..dim {
        for j in 0..dim {
            let mut neg: Vec<(usize, i64)> =
                sc.table[j][i].iter().map(|&(k, c)| (k, -c)).collect();
            neg.sort_unstable();
            let mut fw = sc.table[i][j].clone();
            fw.sort_unstable();
            if fw != neg {
                return Err(Error::Consistency(format!(
                    "bracket not antisymmetric at ({i},{j})"
                )));
            }
        }
    }
    for r in 0..rs.roots().len() {
        // [H_alpha, E_alpha] = 2 E_alpha.
        let cv = rs.coroot_coords(r);
        let pairing: i64 = cv
            .iter()
            .enumerate()
            .map(|(i, &c)| c * rs.root_on_coroot(r, i))
            .sum();
        if pairing != 2 {
            return Err(Error::Consistency(format!(
                "alpha(H_alpha) = {pairing} != 2 for root {r}"
            )));
        }
    }
    let stride = if dim <= 64 { 1 } else { dim / 24 };
    let idxs: Vec<usize> = (0..dim).step_by(stride).collect();
    for &i in &idxs {
        for &j in &idxs {
            for &k in &idxs {
                let ei = [(i, 1i64)];
                let ej = [(j, 1i64)];
                let ek = [(k, 1i64)];
                let jk = dense_to_sparse(&sparse_bracket(&sc.table, &ej, &ek));
                let ki = dense_to_sparse(&sparse_bracket(&sc.table, &ek, &ei));
                let ij = dense_to_sparse(&sparse_bracket(&sc.table, &ei, &ej));
                let mut total = sparse_bracket(&sc.table, &ei, &jk);
                for (t, v) in sparse_bracket(&sc.table, &ej, &ki).into_iter().enumerate() {
                    total[t] += v;
                }
                for (t, v) in sparse_bracket(&sc.table, &ek, &ij).into_iter().enumerate() {
                    total[t] += v;
                }
                if total.iter().any(|&v| v != 0) {
                    return Err(Error::Consistency(format!(
                        "Jacobi identity fails on basis triple ({i},{j},{k})"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn dense_to_sparse(v: &[i64]) -> Vec<(usize, i64)> {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect()
}

/// Exact Jacobi check over all basis triples. Intended for tests; cost is
/// cubic in the dimension.
pub fn jacobi_exact_all_triples(sc: &StructureConstants) -> bool {
    let dim = sc.dim();
    for i in 0..dim {
        for j in 0..dim {
            let ij = dense_to_sparse(&sparse_bracket(&sc.table, &[(i, 1)], &[(j, 1)]));
            for k in 0..dim {
                let jk = dense_to_sparse(&sparse_bracket(&sc.table, &[(j, 1)], &[(k, 1)]));
                let ki = dense_to_sparse(&sparse_bracket(&sc.table, &[(k, 1)], &[(i, 1)]));
                let mut total = sparse_bracket(&sc.table, &[(i, 1)], &jk);
                for (t, v) in sparse_bracket(&sc.table, &[(j, 1)], &ki)
                    .into_iter()
                    .enumerate()
                {
                    total[t] += v;
                }
                for (t, v) in sparse_bracket(&sc.table, &[(k, 1)], &ij)
                    .into_iter()
                    .enumerate()
                {
                    total[t] += v;
                }
                if total.iter().any(|&v| v != 0) {
                    return false;
                }
            }
        }
    }
    true
}

/// ad-matrix of a complex element.
pub fn ad(sc: &StructureConstants, x: &AlgebraElement) -> Result<DMatrix<C64>> {
    sc.check_element(x)?;
    let dim = sc.dim();
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for (i, &xi) in x.coeffs.iter().enumerate() {
        if xi == C64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..dim {
            for &(k, c) in &sc.table[i][j] {
                m[(k, j)] += xi * C64::new(c as f64, 0.0);
            }
        }
    }
    Ok(m)
}

/// Killing form `B(X, Y) = tr(ad_X ad_Y)`, bilinear over the complex field,
/// evaluated through the exact integer Gram matrix of the basis.
pub fn killing(sc: &StructureConstants, x: &AlgebraElement, y: &AlgebraElement) -> Result<C64> {
    sc.check_element(x)?;
    sc.check_element(y)?;
    let mut acc = C64::new(0.0, 0.0);
    for (i, &xi) in x.coeffs.iter().enumerate() {
        if xi == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, &yj) in y.coeffs.iter().enumerate() {
            let g = sc.killing_gram[i][j];
            if g != 0 {
                acc += xi * yj * C64::new(g as f64, 0.0);
            }
        }
    }
    Ok(acc)
}

/// The Killing-induced inner product table on simple roots, re-verified
/// against the ad-matrix Killing form: `(alpha,alpha) * B(H_alpha,H_alpha)`
/// must equal 4 exactly for every root.
pub fn killing_dual_form(sc: &StructureConstants) -> Result<Vec<Vec<Rat>>> {
    let rs = sc.rs();
    let n = rs.rank();
    for r in 0..rs.roots().len() {
        let cv = rs.coroot_coords(r);
        let mut b = 0i64;
        for (i, &ci) in cv.iter().enumerate() {
            for (j, &cj) in cv.iter().enumerate() {
                b += ci * cj * sc.killing_gram[i][j];
            }
        }
        if rs.norm(r) * Rat::from_integer(b) != Rat::from_integer(4) {
            return Err(Error::Consistency(format!(
                "<a,a> B(H_a,H_a) != 4 for root {r}"
            )));
        }
    }
    Ok((0..n)
        .map(|k| (0..n).map(|l| rs.inner_simple(k, l)).collect())
        .collect())
}

/// The antilinear Cartan involution: `E_alpha -> -conj(c) E_{-alpha}`,
/// `H -> -conj(c) H`.
pub fn cartan_involution(sc: &StructureConstants, x: &AlgebraElement) -> AlgebraElement {
    let n = sc.rank();
    let mut out = vec![C64::new(0.0, 0.0); sc.dim()];
    for i in 0..n {
        out[i] = -x.coeffs[i].conj();
    }
    for r in 0..sc.rs().roots().len() {
        let img = sc.e_index(sc.rs().neg_index(r));
        out[img] = -x.coeffs[sc.e_index(r)].conj();
    }
    AlgebraElement { coeffs: out }
}

/// `X^dagger = -theta(X)`; coincides with the matrix adjoint in the
/// defining representations.
pub fn dagger(sc: &StructureConstants, x: &AlgebraElement) -> AlgebraElement {
    cartan_involution(sc, x).scale(C64::new(-1.0, 0.0))
}

/// Ordered real basis of the compact form: `i H_j`, then
/// `X_alpha = E_alpha - E_{-alpha}` and `Y_alpha = i(E_alpha + E_{-alpha})`
/// for each positive root.
pub fn compact_basis(sc: &StructureConstants) -> Vec<AlgebraElement> {
    let n = sc.rank();
    let m = sc.rs().num_positive();
    let i_unit = C64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(n + 2 * m);
    for j in 0..n {
        out.push(AlgebraElement::basis(sc, j).scale(i_unit));
    }
    for p in 0..m {
        let e_pos = AlgebraElement::basis(sc, sc.e_index(p));
        let e_neg = AlgebraElement::basis(sc, sc.e_index(sc.rs().neg_index(p)));
        out.push(e_pos.add(&e_neg.scale(C64::new(-1.0, 0.0))));
        out.push(e_pos.add(&e_neg).scale(i_unit));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::root_system_from_name;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn sc(name: &str) -> StructureConstants {
        chevalley_constants(Arc::new(root_system_from_name(name).unwrap())).unwrap()
    }

    fn random_element(sc: &StructureConstants, rng: &mut ChaCha8Rng) -> AlgebraElement {
        AlgebraElement {
            coeffs: (0..sc.dim())
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        }
    }

    #[test]
    fn a1_defining_relations() {
        let s = sc("A1");
        // Basis: H, E_alpha, E_{-alpha}.
        assert_eq!(s.dim(), 3);
        // [E, F] = H.
        assert_eq!(s.bracket_basis(1, 2), &[(0, 1)]);
        // [H, E] = 2E, [H, F] = -2F.
        assert_eq!(s.bracket_basis(0, 1), &[(1, 2)]);
        assert_eq!(s.bracket_basis(0, 2), &[(2, -2)]);
    }

    #[test]
    fn a2_simple_root_bracket_has_unit_magnitude() {
        let s = sc("A2");
        let rs = s.rs();
        let e1 = rs.root_index(&[1, 0]).unwrap();
        let e2 = rs.root_index(&[0, 1]).unwrap();
        let e12 = rs.root_index(&[1, 1]).unwrap();
        let br = s.bracket_basis(s.e_index(e1), s.e_index(e2));
        assert_eq!(br.len(), 1);
        assert_eq!(br[0].0, s.e_index(e12));
        assert_eq!(br[0].1.abs(), 1);
    }

    #[test]
    fn jacobi_exact_for_all_small_labels() {
        for name in [
            "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D3", "D4", "F4", "G2",
        ] {
            assert!(jacobi_exact_all_triples(&sc(name)), "{name} Jacobi");
        }
    }

    #[test]
    fn ad_examples() {
        let s = sc("A1");
        // ad(0) = 0.
        let zero = ad(&s, &AlgebraElement::zero(&s)).unwrap();
        assert_eq!(zero.iter().map(|c| c.norm_sqr()).sum::<f64>(), 0.0);
        // ad(H_alpha) has diagonal {0, 2, -2}.
        let adh = ad(&s, &AlgebraElement::basis(&s, 0)).unwrap();
        assert_eq!(adh[(0, 0)], C64::new(0.0, 0.0));
        assert_eq!(adh[(1, 1)], C64::new(2.0, 0.0));
        assert_eq!(adh[(2, 2)], C64::new(-2.0, 0.0));
    }

    #[test]
    fn ad_is_a_homomorphism_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in ["A2", "B2", "G2"] {
            let s = sc(name);
            let x = random_element(&s, &mut rng);
            let y = random_element(&s, &mut rng);
            let lhs = ad(&s, &s.bracket(&x, &y).unwrap()).unwrap();
            let ax = ad(&s, &x).unwrap();
            let ay = ad(&s, &y).unwrap();
            let rhs = &ax * &ay - &ay * &ax;
            assert_relative_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn killing_values_on_a1() {
        let s = sc("A1");
        let h = AlgebraElement::basis(&s, 0);
        let e = AlgebraElement::basis(&s, 1);
        let f = AlgebraElement::basis(&s, 2);
        assert_eq!(killing(&s, &h, &h).unwrap(), C64::new(8.0, 0.0));
        assert_eq!(killing(&s, &e, &f).unwrap(), C64::new(4.0, 0.0));
        assert_eq!(killing(&s, &e, &e).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn killing_is_symmetric_and_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let s = sc("B2");
        for _ in 0..10 {
            let x = random_element(&s, &mut rng);
            let y = random_element(&s, &mut rng);
            let z = random_element(&s, &mut rng);
            let bxy = killing(&s, &x, &y).unwrap();
            let byx = killing(&s, &y, &x).unwrap();
            assert_relative_eq!((bxy - byx).norm(), 0.0, epsilon = 1e-9);
            // B([Z,X],Y) + B(X,[Z,Y]) = 0.
            let t1 = killing(&s, &s.bracket(&z, &x).unwrap(), &y).unwrap();
            let t2 = killing(&s, &x, &s.bracket(&z, &y).unwrap()).unwrap();
            assert_relative_eq!((t1 + t2).norm(), 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn killing_gram_matches_ad_trace() {
        let s = sc("B2");
        for i in 0..s.dim() {
            let adi = ad(&s, &AlgebraElement::basis(&s, i)).unwrap();
            for j in 0..s.dim() {
                let adj = ad(&s, &AlgebraElement::basis(&s, j)).unwrap();
                let tr = (&adi * &adj).trace();
                assert_relative_eq!(tr.re, s.killing_gram(i, j) as f64, epsilon = 1e-9);
                assert_relative_eq!(tr.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn dual_form_values() {
        let a1 = sc("A1");
        let t = killing_dual_form(&a1).unwrap();
        assert_eq!(t[0][0], Rat::new(1, 2));
        let a2 = sc("A2");
        let t = killing_dual_form(&a2).unwrap();
        assert_eq!(t[0][0], Rat::new(1, 3));
        assert_eq!(t[1][1], Rat::new(1, 3));
    }

    #[test]
    fn simply_laced_roots_share_one_length() {
        for name in ["A3", "D4", "E6"] {
            let s = sc(name);
            let rs = s.rs();
            let norm0 = rs.norm(0);
            for r in 0..rs.roots().len() {
                assert_eq!(rs.norm(r), norm0, "{name}");
            }
        }
    }

    #[test]
    fn pairing_identity_exact_for_all_roots() {
        // B(E_alpha, E_{-alpha}) * <alpha,alpha> = 2, exactly.
        for name in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "F4", "G2"] {
            let s = sc(name);
            let rs = s.rs();
            for r in 0..rs.roots().len() {
                let b = s.killing_gram(s.e_index(r), s.e_index(rs.neg_index(r)));
                assert_eq!(
                    Rat::from_integer(b) * rs.norm(r),
                    Rat::from_integer(2),
                    "{name} root {r}"
                );
                // Root grading: B(E_alpha, E_beta) = 0 unless beta = -alpha.
                for t in 0..rs.roots().len() {
                    if t != rs.neg_index(r) {
                        assert_eq!(s.killing_gram(s.e_index(r), s.e_index(t)), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn involution_properties() {
        let s = sc("A2");
        let rs = s.rs();
        let e1 = s.e_index(rs.root_index(&[1, 0]).unwrap());
        let f1 = s.e_index(rs.neg_index(rs.root_index(&[1, 0]).unwrap()));
        // theta(E) = -F.
        let img = cartan_involution(&s, &AlgebraElement::basis(&s, e1));
        assert_eq!(img.coeffs[f1], C64::new(-1.0, 0.0));
        // theta(iH) = iH.
        let ih = AlgebraElement::basis(&s, 0).scale(C64::new(0.0, 1.0));
        assert_eq!(cartan_involution(&s, &ih), ih);
        // dagger(E) = F.
        let dg = dagger(&s, &AlgebraElement::basis(&s, e1));
        assert_eq!(dg.coeffs[f1], C64::new(1.0, 0.0));
        // Involutive and antilinear.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = random_element(&s, &mut rng);
            let twice = cartan_involution(&s, &cartan_involution(&s, &x));
            assert_relative_eq!(
                twice.add(&x.scale(C64::new(-1.0, 0.0))).norm_sq(),
                0.0,
                epsilon = 1e-20
            );
            let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let lhs = cartan_involution(&s, &x.scale(c));
            let rhs = cartan_involution(&s, &x).scale(c.conj());
            assert_relative_eq!(
                lhs.add(&rhs.scale(C64::new(-1.0, 0.0))).norm_sq(),
                0.0,
                epsilon = 1e-20
            );
        }
    }

    #[test]
    fn theta_is_an_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = sc("B2");
        for _ in 0..10 {
            let x = random_element(&s, &mut rng);
            let y = random_element(&s, &mut rng);
            let lhs = cartan_involution(&s, &s.bracket(&x, &y).unwrap());
            let rhs = s
                .bracket(&cartan_involution(&s, &x), &cartan_involution(&s, &y))
                .unwrap();
            assert_relative_eq!(
                lhs.add(&rhs.scale(C64::new(-1.0, 0.0))).norm_sq(),
                0.0,
                epsilon = 1e-18
            );
        }
    }

    #[test]
    fn compact_basis_properties() {
        let s = sc("A1");
        let basis = compact_basis(&s);
        assert_eq!(basis.len(), 3);
        for name in ["A2", "B2", "G2"] {
            let s = sc(name);
            let basis = compact_basis(&s);
            assert_eq!(basis.len(), s.dim());
            for b in &basis {
                // theta-fixed.
                let diff = cartan_involution(&s, b).add(&b.scale(C64::new(-1.0, 0.0)));
                assert_relative_eq!(diff.norm_sq(), 0.0, epsilon = 1e-20);
                // B(b, dagger(b)) >= 0.
                let v = killing(&s, b, &dagger(&s, b)).unwrap();
                assert!(v.re >= 0.0 && v.im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn killing_definiteness_on_g_and_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = sc("B2");
        let basis = compact_basis(&s);
        for _ in 0..100 {
            // B(M, theta(M)) <= 0 on g.
            let m = random_element(&s, &mut rng);
            let v = killing(&s, &m, &cartan_involution(&s, &m)).unwrap();
            assert!(v.re <= 1e-12, "negative semidefinite violated: {v}");
            assert!(v.im.abs() < 1e-9);
            // B(X, dagger(X)) >= 0 on k (real combinations of compact basis).
            let mut x = AlgebraElement::zero(&s);
            for b in &basis {
                x = x.add(&b.scale(C64::new(rng.random_range(-1.0..1.0), 0.0)));
            }
            let v = killing(&s, &x, &dagger(&s, &x)).unwrap();
            assert!(v.re >= -1e-12);
        }
    }

    #[test]
    fn bracket_rejects_mismatched_bases() {
        let s1 = sc("A1");
        let s2 = sc("A2");
        let x = AlgebraElement::zero(&s1);
        let y = AlgebraElement::zero(&s2);
        assert!(s1.bracket(&x, &y).is_err());
        assert!(killing(&s1, &y, &y).is_err());
        assert!(ad(&s1, &y).is_err());
    }
}
