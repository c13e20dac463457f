//! Dense integer polynomials, just enough for characteristic polynomials of lattice
//! isometries and their cyclotomic parts. Coefficients are stored lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn one() -> Self {
        IntPoly::from_i64s(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Division by a monic polynomial; returns (quotient, remainder).
    pub fn div_rem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(d.leading().is_one(), "divisor must be monic");
        let dd = d.degree();
        if self.degree() < dd {
            return (IntPoly::new(vec![]), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        r.truncate(dd.max(1));
        (IntPoly::new(q), IntPoly::new(r))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return IntPoly::new(vec![]);
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// Sign of the value at num / 2^shift, computed exactly.
    pub fn sign_at_dyadic(&self, num: &BigInt, shift: u32) -> i32 {
        // sum c_i num^i 2^{shift (d - i)}
        let d = self.degree();
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = c * num.pow(i as u32) * (BigInt::one() << (shift as usize * (d - i)));
            acc += term;
        }
        if acc.is_positive() {
            1
        } else if acc.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// The k-th cyclotomic polynomial.
pub fn cyclotomic(k: usize) -> IntPoly {
    assert!(k >= 1);
    // x^k - 1 divided by Phi_d for every proper divisor d
    let mut c = vec![BigInt::zero(); k + 1];
    c[0] = -BigInt::one();
    c[k] = BigInt::one();
    let mut p = IntPoly::new(c);
    for d in 1..k {
        if k % d == 0 {
            let (q, r) = p.div_rem_monic(&cyclotomic(d));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p
}

pub fn euler_phi(mut k: usize) -> usize {
    let mut result = k;
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            while k % p == 0 {
                k /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if k > 1 {
        result -= result / k;
    }
    result
}

/// Splits a monic polynomial as (cyclotomic part, rest). The cyclotomic part is returned as
/// a list of (k, multiplicity) with Phi_k dividing the input.
pub fn split_cyclotomic(p: &IntPoly) -> (Vec<(usize, usize)>, IntPoly) {
    let mut rest = p.clone();
    let mut factors = Vec::new();
    let deg = p.degree();
    // phi(k) <= deg forces k <= 2 deg^2 comfortably; the exact bound is much smaller
    let kmax = (2 * deg * deg).max(2);
    for k in 1..=kmax {
        if euler_phi(k) > rest.degree() {
            continue;
        }
        let phi = cyclotomic(k);
        let mut mult = 0;
        loop {
            if rest.degree() < phi.degree() {
                break;
            }
            let (q, r) = rest.div_rem_monic(&phi);
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((k, mult));
        }
        if rest.degree() == 0 {
            break;
        }
    }
    (factors, rest)
}

/// Characteristic polynomial det(xI - A) by the Faddeev-LeVerrier recursion; all divisions
/// are exact over Z.
pub fn charpoly(a: &[Vec<BigInt>]) -> IntPoly {
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let (q, r) = (-tr).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = q;
    }
    IntPoly::new(coeffs)
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Isolates the unique root of `p` in (lo, hi) to within 2^-bits by exact dyadic bisection.
/// Requires a sign change between the endpoints, given as dyadic numerators over 2^shift.
pub fn bisect_root(p: &IntPoly, lo: f64, hi: f64, bits: u32) -> Option<f64> {
    let shift = bits;
    let scale = 2f64.powi(shift as i32);
    let mut a = BigInt::from((lo * scale).floor() as i128);
    let mut b = BigInt::from((hi * scale).ceil() as i128);
    let sa = p.sign_at_dyadic(&a, shift);
    let sb = p.sign_at_dyadic(&b, shift);
    if sa == 0 {
        return a.to_f64().map(|x| x / scale);
    }
    if sb == 0 {
        return b.to_f64().map(|x| x / scale);
    }
    if sa == sb {
        return None;
    }
    while &b - &a > BigInt::one() {
        let mid: BigInt = (&a + &b) >> 1usize;
        let sm = p.sign_at_dyadic(&mid, shift);
        if sm == 0 {
            return mid.to_f64().map(|x| x / scale);
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    let m: BigInt = (&a + &b) >> 1usize;
    m.to_f64().map(|x| x / scale)
}
