//! Root systems: generation from Cartan matrices, Weyl group enumeration,
//! exponents, and the alternating polynomial `Delta`.
//!
//! Roots are stored as exact integer coordinate vectors over the simple
//! roots; inner products induced by the Killing form are exact rationals.
//! Everything downstream of the root system can therefore stay exact until
//! a coupling constant enters.

use std::collections::{HashMap, VecDeque};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::label::{catalog_entries, AlgebraLabel};
use crate::{Rat, C64};

/// Default cap on Weyl group enumeration (covers F4 and E6 comfortably).
pub const DEFAULT_WEYL_CAP: usize = 1_000_000;

/// Integer Cartan matrix with the convention `entry(i, j) = alpha_j(H_i)`:
/// row `i` lists the values of every simple root on the `i`-th simple coroot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    label: AlgebraLabel,
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Catalog matrix for a label.
    pub fn from_label(label: AlgebraLabel) -> Self {
        CartanMatrix {
            label,
            entries: catalog_entries(label),
        }
    }

    /// Validate explicit entries against the general Cartan-matrix
    /// invariants and the catalog for `label`.
    pub fn new(label: AlgebraLabel, entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = label.rank;
        let fail = |property: &str| Error::InvalidCartan {
            label: label.to_string(),
            property: property.to_string(),
        };
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(fail(&format!("shape must be {n}x{n}")));
        }
        for i in 0..n {
            if entries[i][i] != 2 {
                return Err(fail(&format!("diagonal entry ({i},{i}) must equal 2")));
            }
            for j in 0..n {
                if i != j {
                    let e = entries[i][j];
                    if !(-3..=0).contains(&e) {
                        return Err(fail(&format!(
                            "off-diagonal entry ({i},{j})={e} outside {{0,-1,-2,-3}}"
                        )));
                    }
                    if (e == 0) != (entries[j][i] == 0) {
                        return Err(fail(&format!("zero pattern not symmetric at ({i},{j})")));
                    }
                }
            }
        }
        let catalog = catalog_entries(label);
        if entries != catalog {
            return Err(fail("entries do not match the standard catalog for the label"));
        }
        Ok(CartanMatrix { label, entries })
    }

    pub fn label(&self) -> AlgebraLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// `alpha_j(H_i)`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }
}

/// A root, stored as integer coefficients over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vec<i64>,
    pub height: i64,
    pub positive: bool,
}

impl Root {
    fn from_coords(coords: Vec<i64>) -> Self {
        let height: i64 = coords.iter().sum();
        let positive = coords.iter().all(|&c| c >= 0) && coords.iter().any(|&c| c != 0);
        Root {
            coords,
            height,
            positive,
        }
    }
}

/// Complex element of the Cartan subalgebra, as coefficients over the
/// simple coroots `H_{alpha_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanElement {
    pub coords: Vec<C64>,
}

impl CartanElement {
    pub fn new(coords: Vec<C64>) -> Self {
        CartanElement { coords }
    }

    pub fn zero(rank: usize) -> Self {
        CartanElement {
            coords: vec![C64::new(0.0, 0.0); rank],
        }
    }

    /// The `i`-th simple coroot.
    pub fn coroot(rank: usize, i: usize) -> Self {
        let mut coords = vec![C64::new(0.0, 0.0); rank];
        coords[i] = C64::new(1.0, 0.0);
        CartanElement { coords }
    }

    pub fn from_real(coords: &[f64]) -> Self {
        CartanElement {
            coords: coords.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        CartanElement {
            coords: self.coords.iter().map(|&x| x * c).collect(),
        }
    }

    /// Complex conjugate of the coordinates (the antilinear conjugation of
    /// the Cartan subalgebra fixing the real span of the coroots).
    pub fn conj(&self) -> Self {
        CartanElement {
            coords: self.coords.iter().map(|x| x.conj()).collect(),
        }
    }
}

/// Root system generated from a Cartan matrix, with Killing-induced inner
/// products on the dual space cached as exact rationals.
///
/// Root ordering: positive roots ascending by (height, lexicographic
/// coordinates), followed by their negatives in the same order, so
/// `roots[num_positive + p] = -roots[p]`.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: CartanMatrix,
    roots: Vec<Root>,
    num_positive: usize,
    index: HashMap<Vec<i64>, usize>,
    /// Killing-induced `<alpha_k, alpha_l>` on simple roots.
    inner_simple: Vec<Vec<Rat>>,
    /// `<alpha, alpha>` per root index.
    norms: Vec<Rat>,
    /// Permutation of the root list induced by each simple reflection.
    refl_perms: Vec<Vec<usize>>,
    /// Killing form restricted to the coroots: `B(H_i, H_j)`.
    coroot_gram: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn label(&self) -> AlgebraLabel {
        self.cartan.label()
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn num_positive(&self) -> usize {
        self.num_positive
    }

    pub fn pos_roots(&self) -> &[Root] {
        &self.roots[..self.num_positive]
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Index of `-roots[r]`.
    pub fn neg_index(&self, r: usize) -> usize {
        (r + self.num_positive) % (2 * self.num_positive)
    }

    /// Killing-induced inner product of two simple roots.
    pub fn inner_simple(&self, k: usize, l: usize) -> Rat {
        self.inner_simple[k][l]
    }

    /// Killing-induced inner product of two roots.
    pub fn inner(&self, r1: usize, r2: usize) -> Rat {
        let a = &self.roots[r1].coords;
        let b = &self.roots[r2].coords;
        let mut acc = Rat::zero();
        for (k, &ak) in a.iter().enumerate() {
            if ak == 0 {
                continue;
            }
            for (l, &bl) in b.iter().enumerate() {
                if bl != 0 {
                    acc += self.inner_simple[k][l] * Rat::from_integer(ak * bl);
                }
            }
        }
        acc
    }

    /// `<alpha, alpha>` of root `r`.
    pub fn norm(&self, r: usize) -> Rat {
        self.norms[r]
    }

    /// `B(H_i, H_j)` on simple coroots (exact integers).
    pub fn coroot_gram(&self, i: usize, j: usize) -> i64 {
        self.coroot_gram[i][j]
    }

    /// Value of root `r` on the simple coroot `H_i`, an integer.
    pub fn root_on_coroot(&self, r: usize, i: usize) -> i64 {
        self.roots[r]
            .coords
            .iter()
            .enumerate()
            .map(|(j, &c)| c * self.cartan.entry(i, j))
            .sum()
    }

    /// Value of root `r` on a Cartan element.
    pub fn root_value(&self, r: usize, h: &CartanElement) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (i, &hi) in h.coords.iter().enumerate() {
            acc += hi * C64::new(self.root_on_coroot(r, i) as f64, 0.0);
        }
        acc
    }

    /// Same as [`RootSystem::root_value`] with exact rational coordinates.
    pub fn root_value_rational(&self, r: usize, h: &[Rat]) -> Rat {
        h.iter()
            .enumerate()
            .map(|(i, hi)| *hi * Rat::from_integer(self.root_on_coroot(r, i)))
            .sum()
    }

    /// Coefficients of the coroot `H_alpha` of root `r` over the simple
    /// coroots. These are always integers.
    pub fn coroot_coords(&self, r: usize) -> Vec<i64> {
        let norm = self.norms[r];
        self.roots[r]
            .coords
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let v = self.inner_simple[i][i] / norm * Rat::from_integer(c);
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect()
    }

    /// Killing form `B(H, J)` of two Cartan elements (exact Gram matrix
    /// contracted with complex coordinates).
    pub fn killing_h(&self, h: &CartanElement, j: &CartanElement) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (a, &ha) in h.coords.iter().enumerate() {
            for (b, &jb) in j.coords.iter().enumerate() {
                acc += ha * jb * C64::new(self.coroot_gram[a][b] as f64, 0.0);
            }
        }
        acc
    }
}

/// Pick positive rationals `d_i` with `d_i * c_ij = d_j * c_ji`, normalized
/// so the smallest is 1; `2 d_i` is the provisional `(alpha_i, alpha_i)`.
fn symmetrizer(cartan: &CartanMatrix) -> Result<Vec<Rat>> {
    let n = cartan.rank();
    let mut d: Vec<Option<Rat>> = vec![None; n];
    d[0] = Some(Rat::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && cartan.entry(i, j) != 0 && d[j].is_none() {
                let dj = d[i].unwrap() * Rat::new(cartan.entry(i, j), cartan.entry(j, i));
                d[j] = Some(dj);
                queue.push_back(j);
            }
        }
    }
    if d.iter().any(Option::is_none) {
        return Err(Error::InvalidCartan {
            label: cartan.label().to_string(),
            property: "Dynkin diagram is not connected".to_string(),
        });
    }
    let mut d: Vec<Rat> = d.into_iter().map(Option::unwrap).collect();
    let min = *d.iter().min().unwrap();
    for v in &mut d {
        *v /= min;
    }
    Ok(d)
}

/// Construct the full root system: closure of the simple roots under simple
/// reflections `s_i(beta) = beta - beta(H_i) alpha_i`, then exact
/// Killing-induced inner products via the coroot Gram matrix.
pub fn build_root_system(cartan: CartanMatrix) -> Result<RootSystem> {
    let n = cartan.rank();
    let sym = symmetrizer(&cartan)?;

    // Reflection closure on coordinate vectors.
    let mut seen = HashMap::<Vec<i64>, ()>::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone(), ());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = beta
                .iter()
                .enumerate()
                .map(|(j, &c)| c * cartan.entry(i, j))
                .sum();
            let mut img = beta.clone();
            img[i] -= pairing;
            if !seen.contains_key(&img) {
                seen.insert(img.clone(), ());
                queue.push_back(img);
            }
        }
    }

    let mut pos: Vec<Root> = seen
        .keys()
        .map(|c| Root::from_coords(c.clone()))
        .filter(|r| r.positive)
        .collect();
    pos.sort_by(|a, b| (a.height, &a.coords).cmp(&(b.height, &b.coords)));
    let num_positive = pos.len();
    if seen.len() != 2 * num_positive {
        return Err(Error::Consistency(format!(
            "root closure produced {} elements, expected twice the {} positive",
            seen.len(),
            num_positive
        )));
    }
    let mut roots = pos;
    for p in 0..num_positive {
        let neg: Vec<i64> = roots[p].coords.iter().map(|&c| -c).collect();
        roots.push(Root::from_coords(neg));
    }
    let index: HashMap<Vec<i64>, usize> = roots
        .iter()
        .enumerate()
        .map(|(i, r)| (r.coords.clone(), i))
        .collect();

    // Killing form restricted to the coroots: B(H_i, H_j) = sum over all
    // roots of alpha(H_i) alpha(H_j).
    let value_on = |r: &Root, i: usize| -> i64 {
        r.coords
            .iter()
            .enumerate()
            .map(|(j, &c)| c * cartan.entry(i, j))
            .sum()
    };
    let mut gram = vec![vec![0i64; n]; n];
    for r in &roots {
        for i in 0..n {
            let vi = value_on(r, i);
            if vi == 0 {
                continue;
            }
            for j in 0..n {
                gram[i][j] += vi * value_on(r, j);
            }
        }
    }

    // Dual inner products: t_k solves G t_k = (alpha_k(H_j))_j, and then
    // <alpha_k, alpha_l> = sum_j t_k[j] alpha_l(H_j). Solved exactly.
    let big = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| big(gram[i][j]))
                .chain((0..n).map(|k| big(cartan.entry(i, k))))
                .collect()
        })
        .collect();
    // Gauss-Jordan on [G | C].
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::Consistency("singular coroot Gram matrix".to_string()))?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for x in &mut aug[col] {
            *x /= p.clone();
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..2 * n {
                    let sub = f.clone() * aug[col][c].clone();
                    aug[r][c] -= sub;
                }
            }
        }
    }
    let mut inner_simple = vec![vec![Rat::zero(); n]; n];
    for k in 0..n {
        for l in 0..n {
            // t_k[j] = aug[j][n + k]; contract with alpha_l(H_j).
            let mut acc = BigRational::zero();
            for (j, row) in aug.iter().enumerate() {
                acc += row[n + k].clone() * big(cartan.entry(j, l));
            }
            inner_simple[k][l] = big_to_rat(&acc)?;
        }
    }

    // Provisional symmetrized form must be proportional to the Killing-
    // induced one; this pins down conventions and catches solve errors.
    {
        let scale = inner_simple[0][0] / (Rat::from_integer(2) * sym[0]);
        for k in 0..n {
            for l in 0..n {
                let prov = if k == l {
                    Rat::from_integer(2) * sym[k]
                } else {
                    sym[k] * Rat::from_integer(cartan.entry(k, l))
                };
                if inner_simple[k][l] != prov * scale {
                    return Err(Error::Consistency(format!(
                        "dual form not proportional to symmetrized Cartan at ({k},{l})"
                    )));
                }
            }
        }
    }

    let norms: Vec<Rat> = roots
        .iter()
        .map(|r| {
            let mut acc = Rat::zero();
            for (k, &ak) in r.coords.iter().enumerate() {
                for (l, &al) in r.coords.iter().enumerate() {
                    if ak != 0 && al != 0 {
                        acc += inner_simple[k][l] * Rat::from_integer(ak * al);
                    }
                }
            }
            acc
        })
        .collect();
    if norms.iter().any(|v| !v.is_positive()) {
        return Err(Error::Consistency(
            "non-positive root norm in dual form".to_string(),
        ));
    }

    // Simple reflection permutations of the full root list.
    let mut refl_perms = Vec::with_capacity(n);
    for i in 0..n {
        let mut perm = vec![0usize; roots.len()];
        for (r, root) in roots.iter().enumerate() {
            let pairing = value_on(root, i);
            let mut img = root.coords.clone();
            img[i] -= pairing;
            perm[r] = *index.get(&img).ok_or_else(|| {
                Error::Consistency(format!("root set not closed under reflection s_{i}"))
            })?;
        }
        refl_perms.push(perm);
    }

    Ok(RootSystem {
        cartan,
        roots,
        num_positive,
        index,
        inner_simple,
        norms,
        refl_perms,
        coroot_gram: gram,
    })
}

fn big_to_rat(x: &BigRational) -> Result<Rat> {
    let n = x.numer().to_i64();
    let d = x.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) => Ok(Rat::new(n, d)),
        _ => Err(Error::Consistency(
            "rational overflow in dual form".to_string(),
        )),
    }
}

/// Convenience: root system straight from a label string.
pub fn root_system_from_name(name: &str) -> Result<RootSystem> {
    let label = AlgebraLabel::from_str(name)?;
    build_root_system(CartanMatrix::from_label(label))
}

/// One Weyl group element: a reduced word in simple reflections together
/// with the permutation it induces on the root list. Equality is by
/// permutation; words are carried for signs and debugging.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub perm: Vec<usize>,
    pub sign: i64,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.perm == other.perm
    }
}
impl Eq for WeylElement {}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        WeylElement {
            word: Vec::new(),
            perm: (0..rs.roots().len()).collect(),
            sign: 1,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Enumerate the full Weyl group by breadth-first closure of the simple
/// reflections acting on the root list, with the default element cap.
pub fn weyl_group(rs: &RootSystem) -> Result<Vec<WeylElement>> {
    weyl_group_with_cap(rs, DEFAULT_WEYL_CAP)
}

/// Enumeration with an explicit cap; exceeding it reports the number of
/// elements found so far as a lower bound on `|W|`.
pub fn weyl_group_with_cap(rs: &RootSystem, cap: usize) -> Result<Vec<WeylElement>> {
    let id = WeylElement::identity(rs);
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    seen.insert(id.perm.clone(), ());
    let mut out = vec![id];
    let mut frontier = 0usize;
    while frontier < out.len() {
        let end = out.len();
        for w_idx in frontier..end {
            for (i, refl) in rs.refl_perms.iter().enumerate() {
                let w = &out[w_idx];
                let perm: Vec<usize> = w.perm.iter().map(|&p| refl[p]).collect();
                if !seen.contains_key(&perm) {
                    if out.len() >= cap {
                        return Err(Error::WeylGroupTooLarge {
                            found: out.len() + 1,
                            cap,
                        });
                    }
                    let mut word = Vec::with_capacity(w.word.len() + 1);
                    word.push(i);
                    word.extend_from_slice(&w.word);
                    seen.insert(perm.clone(), ());
                    out.push(WeylElement {
                        sign: if word.len() % 2 == 0 { 1 } else { -1 },
                        word,
                        perm,
                    });
                }
            }
        }
        frontier = end;
    }
    Ok(out)
}

/// Apply a Weyl element to a Cartan element: the linear action generated by
/// `s_i(H) = H - alpha_i(H) H_i`, composed along the reduced word.
pub fn weyl_act(rs: &RootSystem, w: &WeylElement, h: &CartanElement) -> Result<CartanElement> {
    if h.coords.len() != rs.rank() {
        return Err(Error::DimensionMismatch {
            expected: rs.rank(),
            got: h.coords.len(),
        });
    }
    if w.perm.len() != rs.roots().len() {
        return Err(Error::BasisMismatch(
            "Weyl element belongs to a different root system".to_string(),
        ));
    }
    let mut coords = h.coords.clone();
    for &i in w.word.iter().rev() {
        let alpha_i_of_h: C64 = coords
            .iter()
            .enumerate()
            .map(|(k, &hk)| hk * C64::new(rs.cartan.entry(k, i) as f64, 0.0))
            .sum();
        coords[i] -= alpha_i_of_h;
    }
    Ok(CartanElement { coords })
}

/// Exact-rational variant of [`weyl_act`].
pub fn weyl_act_rational(rs: &RootSystem, w: &WeylElement, h: &[Rat]) -> Result<Vec<Rat>> {
    if h.len() != rs.rank() {
        return Err(Error::DimensionMismatch {
            expected: rs.rank(),
            got: h.len(),
        });
    }
    let mut coords = h.to_vec();
    for &i in w.word.iter().rev() {
        let alpha_i_of_h: Rat = coords
            .iter()
            .enumerate()
            .map(|(k, hk)| *hk * Rat::from_integer(rs.cartan.entry(k, i)))
            .sum();
        coords[i] -= alpha_i_of_h;
    }
    Ok(coords)
}

/// Weyl group exponents via the dual partition of the positive-root height
/// counts, ascending.
pub fn exponents(rs: &RootSystem) -> Vec<usize> {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for r in rs.pos_roots() {
        *counts.entry(r.height).or_insert(0) += 1;
    }
    let max_count = counts.values().copied().max().unwrap_or(0);
    let mut exps: Vec<usize> = (1..=max_count)
        .map(|j| counts.values().filter(|&&c| c >= j).count())
        .collect();
    exps.sort_unstable();
    exps
}

/// `Delta(H)`: product of all positive roots evaluated at `H`.
pub fn delta(rs: &RootSystem, h: &CartanElement) -> C64 {
    (0..rs.num_positive())
        .map(|r| rs.root_value(r, h))
        .product()
}

/// Exact-rational variant of [`delta`].
pub fn delta_rational(rs: &RootSystem, h: &[Rat]) -> Rat {
    (0..rs.num_positive())
        .map(|r| rs.root_value_rational(r, h))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Family;
    use num_traits::One;

    fn rs(name: &str) -> RootSystem {
        root_system_from_name(name).unwrap()
    }

    #[test]
    fn root_counts_match_closure_oracle() {
        // (label, number of roots, number of positive roots)
        for (name, total, pos) in [
            ("A1", 2, 1),
            ("A2", 6, 3),
            ("A3", 12, 6),
            ("B2", 8, 4),
            ("B3", 18, 9),
            ("C3", 18, 9),
            ("D4", 24, 12),
            ("G2", 12, 6),
            ("F4", 48, 24),
            ("E6", 72, 36),
        ] {
            let r = rs(name);
            assert_eq!(r.roots().len(), total, "{name} root count");
            assert_eq!(r.num_positive(), pos, "{name} positive count");
        }
    }

    #[test]
    fn roots_closed_under_negation_and_reflection() {
        for name in ["A2", "B2", "C3", "G2", "F4"] {
            let r = rs(name);
            for (idx, root) in r.roots().iter().enumerate() {
                let neg: Vec<i64> = root.coords.iter().map(|&c| -c).collect();
                let nidx = r.root_index(&neg).expect("negation closed");
                assert_eq!(nidx, r.neg_index(idx), "{name} negation index layout");
                for i in 0..r.rank() {
                    let pairing = r.root_on_coroot(idx, i);
                    let mut img = root.coords.clone();
                    img[i] -= pairing;
                    assert!(r.root_index(&img).is_some(), "{name} reflection closed");
                }
            }
        }
    }

    #[test]
    fn simple_roots_have_height_one_and_positive_norms() {
        for name in ["A2", "B3", "G2"] {
            let r = rs(name);
            for i in 0..r.rank() {
                let mut e = vec![0i64; r.rank()];
                e[i] = 1;
                let idx = r.root_index(&e).unwrap();
                assert_eq!(r.roots()[idx].height, 1);
                assert!(r.roots()[idx].positive);
            }
            for idx in 0..r.roots().len() {
                assert!(r.norm(idx) > Rat::zero());
            }
        }
    }

    #[test]
    fn invalid_cartan_matrices_name_the_property() {
        let a2: AlgebraLabel = "A2".parse().unwrap();
        let err = CartanMatrix::new(a2, vec![vec![1, -1], vec![-1, 2]]).unwrap_err();
        assert!(err.to_string().contains("diagonal"));
        let err = CartanMatrix::new(a2, vec![vec![2, -4], vec![-1, 2]]).unwrap_err();
        assert!(err.to_string().contains("off-diagonal"));
        let err = CartanMatrix::new(a2, vec![vec![2, 0], vec![-1, 2]]).unwrap_err();
        assert!(err.to_string().contains("zero pattern"));
        let err = CartanMatrix::new(a2, vec![vec![2, -2], vec![-1, 2]]).unwrap_err();
        assert!(err.to_string().contains("catalog"));
    }

    #[test]
    fn weyl_orders() {
        for (name, order) in [
            ("A1", 2),
            ("A2", 6),
            ("A3", 24),
            ("B2", 8),
            ("B3", 48),
            ("C3", 48),
            ("D4", 192),
            ("G2", 12),
            ("F4", 1152),
        ] {
            let r = rs(name);
            let w = weyl_group(&r).unwrap();
            assert_eq!(w.len(), order, "{name} Weyl order");
            // Reduced-word parity matches the stored sign.
            for el in &w {
                assert_eq!(el.sign, if el.word.len() % 2 == 0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn weyl_cap_is_enforced() {
        let r = rs("A3");
        let err = weyl_group_with_cap(&r, 10).unwrap_err();
        match err {
            Error::WeylGroupTooLarge { found, cap } => {
                assert_eq!(cap, 10);
                assert!(found > 10);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn weyl_signs_sum_to_zero() {
        for name in ["A2", "B2", "G2"] {
            let r = rs(name);
            let w = weyl_group(&r).unwrap();
            let total: i64 = w.iter().map(|e| e.sign).sum();
            assert_eq!(total, 0, "{name} signs balance");
        }
    }

    #[test]
    fn weyl_act_examples() {
        // Identity fixes everything.
        let r = rs("B2");
        let id = WeylElement::identity(&r);
        let h = CartanElement::new(vec![C64::new(1.0, 0.5), C64::new(-2.0, 0.25)]);
        assert_eq!(weyl_act(&r, &id, &h).unwrap(), h);

        // A1: the reflection negates the coroot.
        let r = rs("A1");
        let w = weyl_group(&r).unwrap();
        let s = w.iter().find(|e| !e.is_identity()).unwrap();
        let h = CartanElement::coroot(1, 0);
        let img = weyl_act(&r, s, &h).unwrap();
        assert_eq!(img.coords[0], C64::new(-1.0, 0.0));

        // A2: s_1 H_2 = H_1 + H_2.
        let r = rs("A2");
        let w = weyl_group(&r).unwrap();
        let s1 = w.iter().find(|e| e.word == vec![0]).unwrap();
        let img = weyl_act_rational(&r, s1, &[Rat::zero(), Rat::one()]).unwrap();
        assert_eq!(img, vec![Rat::one(), Rat::one()]);
    }

    #[test]
    fn weyl_act_rejects_dimension_mismatch() {
        let r = rs("A2");
        let id = WeylElement::identity(&r);
        let h = CartanElement::zero(3);
        assert!(weyl_act(&r, &id, &h).is_err());
    }

    #[test]
    fn exponents_match_tables() {
        for (name, expected) in [
            ("A1", vec![1]),
            ("A2", vec![1, 2]),
            ("A3", vec![1, 2, 3]),
            ("A4", vec![1, 2, 3, 4]),
            ("B2", vec![1, 3]),
            ("B3", vec![1, 3, 5]),
            ("B4", vec![1, 3, 5, 7]),
            ("C3", vec![1, 3, 5]),
            ("C4", vec![1, 3, 5, 7]),
            ("D3", vec![1, 2, 3]),
            ("D4", vec![1, 3, 3, 5]),
            ("G2", vec![1, 5]),
            ("F4", vec![1, 5, 7, 11]),
            ("E6", vec![1, 4, 5, 7, 8, 11]),
        ] {
            assert_eq!(exponents(&rs(name)), expected, "{name} exponents");
        }
    }

    #[test]
    fn exponents_sum_and_product_identities() {
        for name in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
            let r = rs(name);
            let exps = exponents(&r);
            assert_eq!(exps.len(), r.rank(), "{name} count");
            let sum: usize = exps.iter().sum();
            assert_eq!(sum, r.num_positive(), "{name} sum rule");
            let prod: usize = exps.iter().map(|m| m + 1).product();
            assert_eq!(prod, weyl_group(&r).unwrap().len(), "{name} product rule");
        }
    }

    /// Independent oracle: exponents are the phases of the eigenvalues of a
    /// Coxeter element, in units of 2*pi/h with h the Coxeter number.
    fn coxeter_exponents(r: &RootSystem) -> Vec<usize> {
        use nalgebra::DMatrix;
        let n = r.rank();
        let mut cox = DMatrix::<f64>::identity(n, n);
        for i in 0..n {
            let mut s = DMatrix::<f64>::identity(n, n);
            for j in 0..n {
                s[(i, j)] -= r.cartan().entry(i, j) as f64;
            }
            cox = s * cox;
        }
        let h = r.roots().len() / n;
        let eig = cox.complex_eigenvalues();
        let mut exps: Vec<usize> = eig
            .iter()
            .map(|l| {
                let mut phase = l.im.atan2(l.re);
                if phase < 1e-9 {
                    phase += std::f64::consts::TAU;
                }
                (phase * h as f64 / std::f64::consts::TAU).round() as usize
            })
            .collect();
        exps.sort_unstable();
        exps
    }

    #[test]
    fn exponents_match_coxeter_eigenvalue_oracle() {
        for name in [
            "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D3", "D4", "G2", "F4",
        ] {
            let r = rs(name);
            assert_eq!(exponents(&r), coxeter_exponents(&r), "{name}");
        }
    }

    #[test]
    fn delta_examples() {
        // A1: Delta(H_alpha) = alpha(H_alpha) = 2.
        let r = rs("A1");
        let h = CartanElement::coroot(1, 0);
        assert_eq!(delta(&r, &h), C64::new(2.0, 0.0));
        // Any system: Delta(0) = 0.
        let r2 = rs("B2");
        assert_eq!(delta(&r2, &CartanElement::zero(2)), C64::new(0.0, 0.0));
        // A2 at H_1: values are 2, -1, 1.
        let r3 = rs("A2");
        assert_eq!(
            delta_rational(&r3, &[Rat::one(), Rat::zero()]),
            Rat::from_integer(-2)
        );
    }

    #[test]
    fn delta_antiinvariance_exact_over_full_weyl_group() {
        for name in ["A2", "B2", "G2"] {
            let r = rs(name);
            let w = weyl_group(&r).unwrap();
            let h: Vec<Rat> = (0..r.rank())
                .map(|i| if i == 0 { Rat::new(1, 5) } else { Rat::one() })
                .collect();
            let d = delta_rational(&r, &h);
            assert!(d != Rat::zero());
            for el in &w {
                let hw = weyl_act_rational(&r, el, &h).unwrap();
                let dw = delta_rational(&r, &hw);
                assert_eq!(dw, Rat::from_integer(el.sign) * d, "{name}");
            }
        }
    }

    #[test]
    fn weyl_perm_composition_matches_word_action() {
        // The stored permutation and the word-generated action must be two
        // pictures of the same element: applying the word to a root's
        // coordinates lands on the permuted root, for all of W(B2).
        let r = rs("B2");
        let w = weyl_group(&r).unwrap();
        for el in &w {
            for (ri, root) in r.roots().iter().enumerate() {
                let mut coords = root.coords.clone();
                for &i in el.word.iter().rev() {
                    let pairing: i64 = coords
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| c * r.cartan().entry(i, j))
                        .sum();
                    coords[i] -= pairing;
                }
                assert_eq!(r.root_index(&coords), Some(el.perm[ri]));
            }
        }
    }

    #[test]
    fn defining_dims() {
        assert_eq!(
            AlgebraLabel::new(Family::A, 3).unwrap().defining_dim(),
            Some(4)
        );
        assert_eq!(
            AlgebraLabel::new(Family::B, 2).unwrap().defining_dim(),
            Some(5)
        );
        assert_eq!(AlgebraLabel::new(Family::G, 2).unwrap().defining_dim(), None);
    }
}
