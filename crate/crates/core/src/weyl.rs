//! Words in the simple reflections of W_n, the embedding iota of E_8 into W_9, translation
//! isometries, the elliptic/parabolic/hyperbolic trichotomy and Noether reduction of roots.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::integer_kernel;
use crate::lattice::{
    canonical_unchecked, check_n, is_root, pairing, simple_roots_unchecked, LatticeIsometry, LatticeVector,
};
use crate::poly::{bisect_root, charpoly, split_cyclotomic, IntPoly};

/// A word s_{l_1} s_{l_2} ... s_{l_t}; as a map it applies the last letter first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylWord {
    pub letters: Vec<usize>,
}

impl WeylWord {
    pub fn new(letters: Vec<usize>) -> Self {
        WeylWord { letters }
    }

    pub fn empty() -> Self {
        WeylWord::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        check_n(n)?;
        match self.letters.iter().find(|&&l| l >= n) {
            Some(&letter) => Err(Error::InvalidLetter { letter, n }),
            None => Ok(()),
        }
    }

    /// The inverse word (letters reversed, since every generator is an involution).
    pub fn inverse(&self) -> WeylWord {
        WeylWord {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// Concatenation `self * other` (so `other` acts first).
    pub fn then_apply_after(&self, other: &WeylWord) -> WeylWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        WeylWord { letters }
    }

    /// Apply the word to a vector of Z^{1,n}.
    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        self.validate(v.n())?;
        let mut out = v.clone();
        for &l in self.letters.iter().rev() {
            apply_simple_in_place(l, &mut out);
        }
        Ok(out)
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// Apply the simple reflection s_l. s_0 adds (v.alpha_0) alpha_0, s_i swaps e_i and e_{i+1}.
pub(crate) fn apply_simple_in_place(l: usize, v: &mut LatticeVector) {
    if l == 0 {
        let c = v.coord(0) + v.coord(1) + v.coord(2) + v.coord(3);
        if c.is_zero() {
            return;
        }
        let a0 = simple_roots_unchecked(v.n()).swap_remove(0);
        *v = v.add_scaled(&c, &a0);
    } else {
        v.swap(l, l + 1);
    }
}

/// s_alpha(v) = v + (v.alpha) alpha for a vector of square -2.
pub fn reflect(alpha: &LatticeVector, v: &LatticeVector) -> Result<LatticeVector> {
    if alpha.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: alpha.dim(),
            right: v.dim(),
        });
    }
    if alpha.square() != BigInt::from(-2) {
        return Err(Error::NotARoot(format!("{alpha} has square {}", alpha.square())));
    }
    Ok(v.add_scaled(&pairing(v, alpha), alpha))
}

/// Matrix of the reflection in a norm -2 vector.
pub fn reflection_matrix(alpha: &LatticeVector) -> Result<LatticeIsometry> {
    let n = alpha.n();
    let cols: Result<Vec<_>> = (0..=n)
        .map(|i| reflect(alpha, &crate::lattice::basis_vector(n, i)))
        .collect();
    LatticeIsometry::from_columns(&cols?)
}

/// Matrix product of the simple reflections named by the word.
pub fn word_to_isometry(word: &WeylWord, n: usize) -> Result<LatticeIsometry> {
    word.validate(n)?;
    // columns are images of basis vectors; apply letters right to left
    let cols: Vec<LatticeVector> = (0..=n)
        .map(|i| {
            let mut v = crate::lattice::basis_vector(n, i);
            for &l in word.letters.iter().rev() {
                apply_simple_in_place(l, &mut v);
            }
            v
        })
        .collect();
    LatticeIsometry::from_columns(&cols)
}

/// Basis alpha_0, ..., alpha_7 of the E_8 summand of k_9^perp used by [`iota`].
pub fn e8_summand_basis() -> Vec<LatticeVector> {
    let mut roots = simple_roots_unchecked(9);
    roots.truncate(8);
    roots
}

/// Representative of w modulo Z k_9 inside span(alpha_0, ..., alpha_7).
pub fn e8_section(w: &LatticeVector) -> Result<LatticeVector> {
    if w.n() != 9 {
        return Err(Error::invalid(format!("iota lives on Z^{{1,9}}, got n = {}", w.n())));
    }
    let mut c = crate::lattice::to_root_coordinates(w)?;
    let k = canonical_unchecked(9);
    let ck = crate::lattice::to_root_coordinates(&k)?;
    // k_9 has alpha_8-coordinate -1 or 1; kill the alpha_8 component
    let t = &c[8] / &ck[8];
    for (ci, ki) in c.iter_mut().zip(&ck) {
        *ci -= &t * ki;
    }
    crate::lattice::from_root_coordinates(9, &c)
}

fn check_iota_input(w: &LatticeVector) -> Result<LatticeVector> {
    if w.n() != 9 {
        return Err(Error::invalid(format!("iota lives on Z^{{1,9}}, got n = {}", w.n())));
    }
    let k = canonical_unchecked(9);
    if !pairing(w, &k).is_zero() {
        return Err(Error::NotOrthogonal);
    }
    Ok(k)
}

/// iota(w)(v) = v + (v.k)w - ((w.v) + (v.k)(w.w)/2) k with k = k_9.
pub fn iota(w: &LatticeVector, v: &LatticeVector) -> Result<LatticeVector> {
    let k = check_iota_input(w)?;
    if v.dim() != 10 {
        return Err(Error::DimensionMismatch { left: 10, right: v.dim() });
    }
    Ok(iota_unchecked(w, v, &k))
}

fn iota_unchecked(w: &LatticeVector, v: &LatticeVector, k: &LatticeVector) -> LatticeVector {
    let vk = pairing(v, k);
    let ww = pairing(w, w);
    // w.w is even on k_9^perp
    let coeff = pairing(w, v) + &vk * (&ww / BigInt::from(2));
    v.add_scaled(&vk, w).add_scaled(&-coeff, k)
}

pub fn iota_isometry(w: &LatticeVector) -> Result<LatticeIsometry> {
    let k = check_iota_input(w)?;
    let cols: Vec<LatticeVector> = (0..=9)
        .map(|i| iota_unchecked(w, &crate::lattice::basis_vector(9, i), &k))
        .collect();
    LatticeIsometry::from_columns(&cols)
}

/// t(D) = D - m(D.K)A + [m(D.A) - (m^2/2)(D.K)A^2] K with K = k_9.
pub fn translation_isometry(a: &LatticeVector, m: i64, n: usize) -> Result<LatticeIsometry> {
    if n != 9 || a.n() != 9 {
        return Err(Error::invalid("translations are defined for n = 9"));
    }
    if m <= 0 {
        return Err(Error::invalid(format!("m must be positive, got {m}")));
    }
    let k = canonical_unchecked(9);
    if !pairing(a, &k).is_zero() {
        return Err(Error::NotOrthogonal);
    }
    let m = BigInt::from(m);
    let aa = pairing(a, a);
    let half_m2_aa = &m * &m * (&aa / BigInt::from(2));
    let cols: Vec<LatticeVector> = (0..=9)
        .map(|i| {
            let d = crate::lattice::basis_vector(9, i);
            let dk = pairing(&d, &k);
            let da = pairing(&d, a);
            let kc = &m * &da - &half_m2_aa * &dk;
            d.add_scaled(&(-&m * &dk), a).add_scaled(&kc, &k)
        })
        .collect();
    LatticeIsometry::from_columns(&cols)
}

/// Result of [`classify_isometry`].
#[derive(Debug, Clone, PartialEq)]
pub enum IsometryClass {
    /// Finite order; `invariant` is a fixed class of positive square.
    Elliptic { order: u128, invariant: LatticeVector },
    /// Infinite order with a fixed primitive isotropic class (positive e_0-coefficient).
    Parabolic { witness: LatticeVector },
    /// Spectral radius > 1.
    Hyperbolic { spectral_radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsometryKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl IsometryClass {
    pub fn kind(&self) -> IsometryKind {
        match self {
            IsometryClass::Elliptic { .. } => IsometryKind::Elliptic,
            IsometryClass::Parabolic { .. } => IsometryKind::Parabolic,
            IsometryClass::Hyperbolic { .. } => IsometryKind::Hyperbolic,
        }
    }
}

/// Direct order test before falling back to the characteristic polynomial.
const DIRECT_ORDER_BOUND: u32 = 60;

/// Decide the type of a form-preserving matrix.
///
/// Finite order is tested directly for small exponents; otherwise the characteristic
/// polynomial is split into its cyclotomic part and the rest. A non-cyclotomic rest means
/// some eigenvalue lies off the unit circle (Kronecker), hence hyperbolic. A purely cyclotomic
/// polynomial gives a candidate order L; g^L = 1 means elliptic, otherwise g^L is unipotent and
/// its isotropic fixed line is the parabolic witness.
pub fn classify_isometry(g: &LatticeIsometry) -> Result<IsometryClass> {
    if !g.preserves_form() {
        return Err(Error::NotAnIsometry);
    }
    let mut p = g.clone();
    for t in 1..=DIRECT_ORDER_BOUND {
        if p.is_identity() {
            return Ok(elliptic(g, t as u128));
        }
        p = p.compose(g);
    }
    let cp = charpoly(g.rows());
    let (factors, rest) = split_cyclotomic(&cp);
    if rest.degree() > 0 {
        return Ok(IsometryClass::Hyperbolic {
            spectral_radius: spectral_radius(g, &rest),
        });
    }
    let mut l: u128 = 1;
    for &(k, _) in &factors {
        l = num_integer::lcm(l, k as u128);
    }
    let gl = g.pow(l);
    if gl.is_identity() {
        return Ok(elliptic(g, exact_order(g, l)));
    }
    Ok(IsometryClass::Parabolic {
        witness: isotropic_fixed_class(&gl)?,
    })
}

fn exact_order(g: &LatticeIsometry, l: u128) -> u128 {
    let mut order = l;
    let mut q = 2u128;
    let mut rem = l;
    while q * q <= rem || rem > 1 {
        if q * q > rem {
            q = rem;
        }
        if rem % q == 0 {
            while rem % q == 0 {
                rem /= q;
            }
            while order % q == 0 && g.pow(order / q).is_identity() {
                order /= q;
            }
        }
        q += 1;
    }
    order
}

fn elliptic(g: &LatticeIsometry, order: u128) -> IsometryClass {
    // average of the orbit of e_0 is fixed and has positive square
    let n = g.n();
    let mut v = crate::lattice::basis_vector(n, 0);
    let mut acc = v.clone();
    for _ in 1..order.min(1 << 20) {
        v = g.apply(&v);
        acc = &acc + &v;
    }
    IsometryClass::Elliptic {
        order,
        invariant: acc.primitive(),
    }
}

fn isotropic_fixed_class(u: &LatticeIsometry) -> Result<LatticeVector> {
    let d = u.dim();
    let mut a = u.rows().to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= BigInt::one();
    }
    let fixed: Vec<LatticeVector> = integer_kernel(&a, d).into_iter().map(LatticeVector::new).collect();
    // radical of the form restricted to the fixed lattice
    let gram: Vec<Vec<BigInt>> = fixed
        .iter()
        .map(|x| fixed.iter().map(|y| pairing(x, y)).collect())
        .collect();
    let rad = integer_kernel(&gram, fixed.len());
    if rad.len() != 1 {
        return Err(Error::domain(format!(
            "expected a unique isotropic fixed line, found a radical of rank {}",
            rad.len()
        )));
    }
    let mut h = LatticeVector::zero(d - 1);
    for (c, x) in rad[0].iter().zip(&fixed) {
        h = h.add_scaled(c, x);
    }
    let h = h.primitive();
    Ok(if h.coord(0).is_negative() { -h } else { h })
}

/// Dominant eigenvalue of a hyperbolic isometry, with `rest` the non-cyclotomic factor of
/// its characteristic polynomial. A power-iteration estimate is confirmed by an exact sign
/// change of `rest`, and replaced by exact bisection when the confirmation fails.
fn spectral_radius(g: &LatticeIsometry, rest: &IntPoly) -> f64 {
    let est = power_iteration(g);
    if est.is_finite() && est > 1.0 {
        let lo = est * (1.0 - 1e-9);
        let hi = est * (1.0 + 1e-9);
        if let Some(r) = bisect_root(rest, lo.max(1.0), hi, 64) {
            return r;
        }
    }
    // Cauchy bound for the roots of `rest`
    let lead = rest.leading().abs().to_f64().unwrap_or(1.0);
    let maxc = rest
        .coeffs()
        .iter()
        .map(|c| c.abs().to_f64().unwrap_or(f64::MAX))
        .fold(0.0, f64::max);
    let bound = 1.0 + maxc / lead;
    // rest has no root at 1 (the factor x - 1 was split off)
    bisect_root(rest, 1.0, bound, 64).unwrap_or(est)
}

fn power_iteration(g: &LatticeIsometry) -> f64 {
    let a = g.to_f64();
    let d = a.len();
    // start inside the positive cone
    let mut x = vec![0.0; d];
    x[0] = 1.0;
    for (i, xi) in x.iter_mut().enumerate().skip(1) {
        *xi = 0.01 * (i as f64);
    }
    let mut lambda = 0.0;
    for _ in 0..4000 {
        let mut y = vec![0.0; d];
        for i in 0..d {
            for j in 0..d {
                y[i] += a[i][j] * x[j];
            }
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return f64::NAN;
        }
        let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let new_lambda = norm / xn;
        for v in y.iter_mut() {
            *v /= norm;
        }
        x = y;
        if (new_lambda - lambda).abs() < 1e-15 * new_lambda {
            return new_lambda;
        }
        lambda = new_lambda;
    }
    lambda
}

/// One step of a Noether reduction trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub letter: usize,
    pub vector: LatticeVector,
}

/// Output of [`noether_reduce`]: `word` applied to `terminal` gives back the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoetherReduction {
    pub terminal: LatticeVector,
    pub word: WeylWord,
    pub steps: Vec<ReductionStep>,
}

impl NoetherReduction {
    pub fn trace_lines(&self) -> Vec<String> {
        self.steps
            .iter()
            .enumerate()
            .map(|(k, s)| format!("step {}: apply s_{}, vector = {}", k + 1, s.letter, s.vector))
            .collect()
    }

    /// Number of s_0 steps taken.
    pub fn quadratic_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.letter == 0).count()
    }
}

/// True when v is plus or minus one of alpha_0, ..., alpha_{n-1}.
pub fn is_simple_root_up_to_sign(v: &LatticeVector) -> bool {
    let n = v.n();
    if n < 3 {
        return false;
    }
    simple_roots_unchecked(n).iter().any(|a| a == v || &-a == v)
}

/// Reduce a root by sorting multiplicities and applying s_0 while a_0 < a_1 + a_2 + a_3.
///
/// Sorting is a stable bubble sort into descending order, each swap recorded as a letter
/// in 1..n-1. When no s_0 step applies, a last stable sort by descending |a_i| brings a
/// terminal of the form +-(e_i - e_j) or +-(e_0 - e_i - e_j - e_k) onto a simple root.
pub fn noether_reduce(r: &LatticeVector, n: usize) -> Result<NoetherReduction> {
    noether_reduce_with(r, n, &|| false)
}

/// As [`noether_reduce`], polling `cancel` between steps.
pub fn noether_reduce_with(r: &LatticeVector, n: usize, cancel: &dyn Fn() -> bool) -> Result<NoetherReduction> {
    check_n(n)?;
    if r.n() != n {
        return Err(Error::DimensionMismatch { left: n + 1, right: r.dim() });
    }
    if !is_root(r) {
        return Err(Error::NotARoot(format!("{r} is not a root orthogonal to k_{n}")));
    }
    if r.coord(0).is_negative() {
        return Err(Error::invalid("the e_0-coefficient must be nonnegative"));
    }
    let mut v = r.clone();
    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut record = |l: usize, v: &mut LatticeVector, steps: &mut Vec<ReductionStep>| {
        apply_simple_in_place(l, v);
        steps.push(ReductionStep { letter: l, vector: v.clone() });
    };
    loop {
        if cancel() {
            return Err(Error::Inconclusive("reduction cancelled".into()));
        }
        if is_simple_root_up_to_sign(&v) {
            break;
        }
        // multiplicities a_i = -coord(i); descending a means ascending coordinates
        sort_by_key_recording(&mut v, &mut steps, &mut record, |c| c.clone());
        if is_simple_root_up_to_sign(&v) {
            break;
        }
        let a0 = v.coord(0).clone();
        let s = -(v.coord(1) + v.coord(2) + v.coord(3));
        if a0.is_positive() && a0 < s {
            record(0, &mut v, &mut steps);
        } else {
            break;
        }
    }
    if !is_simple_root_up_to_sign(&v) {
        sort_by_key_recording(&mut v, &mut steps, &mut record, |c| -c.abs());
    }
    let word = WeylWord::new(steps.iter().map(|s| s.letter).collect());
    Ok(NoetherReduction {
        terminal: v,
        word,
        steps,
    })
}

/// Stable bubble sort of coordinates 1..n ascending by `key`, recording adjacent swaps.
fn sort_by_key_recording<F, R>(v: &mut LatticeVector, steps: &mut Vec<ReductionStep>, record: &mut R, key: F)
where
    F: Fn(&BigInt) -> BigInt,
    R: FnMut(usize, &mut LatticeVector, &mut Vec<ReductionStep>),
{
    let n = v.n();
    loop {
        let mut swapped = false;
        for i in 1..n {
            if key(v.coord(i)) > key(v.coord(i + 1)) {
                record(i, v, steps);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{basis_vector, canonical_vector, inner, simple_roots};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    #[test]
    fn reflect_examples() {
        let r = simple_roots(10).unwrap();
        assert_eq!(reflect(&r[1], &basis_vector(10, 1)).unwrap(), basis_vector(10, 2));
        assert_eq!(
            reflect(&r[0], &basis_vector(10, 0)).unwrap(),
            v(&[2, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0])
        );
        assert!(reflect(&basis_vector(10, 0), &basis_vector(10, 1)).is_err());
    }

    #[test]
    fn word_examples() {
        assert!(word_to_isometry(&WeylWord::empty(), 10).unwrap().is_identity());
        let g = word_to_isometry(&WeylWord::new(vec![1]), 10).unwrap();
        assert_eq!(g.apply(&basis_vector(10, 1)), basis_vector(10, 2));
        // braid relation along the edge 0 - 3
        let a = word_to_isometry(&WeylWord::new(vec![0, 3, 0]), 10).unwrap();
        let b = word_to_isometry(&WeylWord::new(vec![3, 0, 3]), 10).unwrap();
        assert_eq!(a, b);
        // alpha_0 and alpha_1 commute
        let a = word_to_isometry(&WeylWord::new(vec![0, 1]), 10).unwrap();
        let b = word_to_isometry(&WeylWord::new(vec![1, 0]), 10).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            word_to_isometry(&WeylWord::new(vec![10]), 10),
            Err(Error::InvalidLetter { letter: 10, n: 10 })
        ));
    }

    #[test]
    fn braid_relation_zero_one_zero() {
        // 0 and 1 are not joined, so s_0 s_1 s_0 = s_1 s_0 s_1 fails but (s_0 s_1)^2 = 1
        let a = word_to_isometry(&WeylWord::new(vec![0, 1, 0]), 10).unwrap();
        let b = word_to_isometry(&WeylWord::new(vec![1, 0, 1]), 10).unwrap();
        assert_ne!(a, b);
        assert!(word_to_isometry(&WeylWord::new(vec![0, 1, 0, 1]), 10).unwrap().is_identity());
    }

    #[test]
    fn words_preserve_form_and_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [9usize, 10, 11] {
            let k = canonical_vector(n).unwrap();
            for _ in 0..20 {
                let len = rng.gen_range(0..30);
                let w = WeylWord::new((0..len).map(|_| rng.gen_range(0..n)).collect());
                let g = word_to_isometry(&w, n).unwrap();
                assert!(g.preserves_form());
                assert!(g.fixes(&k));
                let x = v(&(0..=n).map(|_| rng.gen_range(-5..5)).collect::<Vec<_>>());
                assert_eq!(g.apply(&x), w.apply(&x).unwrap());
            }
        }
    }

    #[test]
    fn iota_basics() {
        let k = canonical_vector(9).unwrap();
        let zero = LatticeVector::zero(9);
        let x = v(&[4, -1, 2, 0, 0, 3, 1, 1, -2, 5]);
        assert_eq!(iota(&zero, &x).unwrap(), x);
        let a = &simple_roots(9).unwrap()[2];
        assert_eq!(iota(a, &k).unwrap(), k);
        assert!(iota(&basis_vector(9, 1), &x).is_err());
        let g = iota_isometry(a).unwrap();
        assert!(g.preserves_form());
    }

    #[test]
    fn e8_section_kills_alpha8() {
        let k = canonical_vector(9).unwrap();
        let a8 = &simple_roots(9).unwrap()[8];
        let s = e8_section(a8).unwrap();
        let c = crate::lattice::to_root_coordinates(&s).unwrap();
        assert!(c[8].is_zero());
        // s differs from alpha_8 by a multiple of k_9
        let d = &s - a8;
        assert!(inner(&d, &d).unwrap().is_zero());
        assert!(inner(&d, &k).unwrap().is_zero());
        assert!(iota_isometry(&s).unwrap() == iota_isometry(a8).unwrap());
    }

    #[test]
    fn translation_examples() {
        let zero = LatticeVector::zero(9);
        assert!(translation_isometry(&zero, 3, 9).unwrap().is_identity());
        let a1 = simple_roots(9).unwrap()[1].clone();
        let t = translation_isometry(&a1, 1, 9).unwrap();
        assert!(t.preserves_form());
        let k = canonical_vector(9).unwrap();
        assert!(t.fixes(&k));
        // D in k^perp moves by m (D.A) K
        let d = simple_roots(9).unwrap()[2].clone();
        let expected = d.add_scaled(&inner(&d, &a1).unwrap(), &k);
        assert_eq!(t.apply(&d), expected);
        // e_0: D.K = -3, D.A = 0, A^2 = -2 -> e_0 + 3A + (0 - (1/2)(-3)(-2)) K
        let e0 = basis_vector(9, 0);
        let img = t.apply(&e0);
        assert_eq!(img, e0.add_scaled(&BigInt::from(3), &a1).add_scaled(&BigInt::from(-3), &k));
        assert_eq!(img.square(), BigInt::one());
        assert_eq!(inner(&img, &k).unwrap(), BigInt::from(-3));
        assert!(translation_isometry(&a1, 0, 9).is_err());
        assert!(translation_isometry(&basis_vector(9, 0), 1, 9).is_err());
    }

    #[test]
    fn translation_is_iota_of_minus_m_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let basis = e8_summand_basis();
        for _ in 0..20 {
            let mut a = LatticeVector::zero(9);
            for b in &basis {
                a = a.add_scaled(&BigInt::from(rng.gen_range(-3i64..=3)), b);
            }
            let m = rng.gen_range(1i64..=3);
            let t = translation_isometry(&a, m, 9).unwrap();
            assert_eq!(t, iota_isometry(&a.scale_i64(-m)).unwrap());
        }
    }

    #[test]
    fn classify_examples() {
        let s1 = word_to_isometry(&WeylWord::new(vec![1]), 10).unwrap();
        assert!(matches!(classify_isometry(&s1).unwrap(), IsometryClass::Elliptic { order: 2, .. }));
        let a1 = simple_roots(9).unwrap()[1].clone();
        match classify_isometry(&iota_isometry(&a1).unwrap()).unwrap() {
            IsometryClass::Parabolic { witness } => {
                assert_eq!(witness, -canonical_vector(9).unwrap());
            }
            other => panic!("expected parabolic, got {other:?}"),
        }
        let cox = word_to_isometry(&WeylWord::new((0..10).collect()), 10).unwrap();
        match classify_isometry(&cox).unwrap() {
            IsometryClass::Hyperbolic { spectral_radius } => {
                assert!((spectral_radius - 1.176_280_818_259_917_5).abs() < 1e-9);
            }
            other => panic!("expected hyperbolic, got {other:?}"),
        }
        let not_iso = LatticeIsometry::from_rows_unchecked(vec![
            vec![BigInt::from(2), BigInt::zero()],
            vec![BigInt::zero(), BigInt::one()],
        ])
        .unwrap();
        assert_eq!(classify_isometry(&not_iso), Err(Error::NotAnIsometry));
    }

    #[test]
    fn classify_finite_coxeter_elements() {
        // W_8 is finite: its Coxeter element s_0...s_7 has order 30 (the E_8 Coxeter number)
        let cox = word_to_isometry(&WeylWord::new((0..8).collect()), 8).unwrap();
        match classify_isometry(&cox).unwrap() {
            IsometryClass::Elliptic { order, invariant } => {
                assert_eq!(order, 30);
                assert!(cox.fixes(&invariant));
                assert!(invariant.square().is_positive());
            }
            other => panic!("expected elliptic, got {other:?}"),
        }
        // affine E_8: Coxeter element of W_9 is parabolic
        let cox9 = word_to_isometry(&WeylWord::new((0..9).collect()), 9).unwrap();
        assert_eq!(classify_isometry(&cox9).unwrap().kind(), IsometryKind::Parabolic);
    }

    #[test]
    fn conjugation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cases = [
            WeylWord::new(vec![1]),
            WeylWord::new((0..10).collect()),
            WeylWord::new(vec![0, 1, 2, 3]),
        ];
        for w in &cases {
            let g = word_to_isometry(w, 10).unwrap();
            let kind = classify_isometry(&g).unwrap().kind();
            for _ in 0..5 {
                let h = WeylWord::new((0..rng.gen_range(1..12)).map(|_| rng.gen_range(0..10)).collect());
                let hm = word_to_isometry(&h, 10).unwrap();
                let conj = hm.compose(&g).compose(&hm.inverse());
                assert_eq!(classify_isometry(&conj).unwrap().kind(), kind);
            }
        }
    }

    #[test]
    fn noether_trivial_case() {
        let r = v(&[0, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let red = noether_reduce(&r, 10).unwrap();
        assert_eq!(red.terminal, r);
        assert!(red.word.is_empty());
    }

    #[test]
    fn noether_conic_class() {
        let r = v(&[2, -1, -1, -1, -1, -1, -1, 0, 0, 0, 0]);
        let red = noether_reduce(&r, 10).unwrap();
        assert_eq!(red.terminal, simple_roots(10).unwrap()[0]);
        assert_eq!(red.quadratic_steps(), 1);
        assert_eq!(red.word.apply(&red.terminal).unwrap(), r);
        let lines = red.trace_lines();
        assert!(lines[0].starts_with("step 1: apply s_0, vector = [1, 0, 0, 0, -1, -1, -1"));
    }

    #[test]
    fn noether_rejects_non_roots() {
        assert!(noether_reduce(&basis_vector(10, 0), 10).is_err());
        let neg = v(&[-1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(noether_reduce(&neg, 10).is_err());
    }

    #[test]
    fn noether_random_real_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a1 = simple_roots(10).unwrap()[1].clone();
        for _ in 0..200 {
            let w = WeylWord::new((0..rng.gen_range(0..=40)).map(|_| rng.gen_range(0..10)).collect());
            let mut r = w.apply(&a1).unwrap();
            if r.coord(0).is_negative() {
                r = -r;
            }
            let red = noether_reduce(&r, 10).unwrap();
            assert!(is_simple_root_up_to_sign(&red.terminal), "{r} -> {}", red.terminal);
            assert_eq!(red.word.apply(&red.terminal).unwrap(), r);
        }
    }
}
