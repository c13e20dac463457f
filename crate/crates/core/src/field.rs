//! Exact fields: F_p, F_{p^e} (e <= 12) and Q, with dense linear algebra over them.
//!
//! A [`Field`] is a cheap handle; elements ([`Fe`]) carry no field pointer, so every
//! operation goes through the field. F_{p^e} is realized as F_p[x]/(f) where f is the
//! lexicographically first monic irreducible polynomial of degree e, which fixes the
//! element encoding for every (p, e).

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_EXTENSION_DEGREE: u32 = 12;

#[derive(Debug, PartialEq, Eq)]
enum Kind {
    Prime { p: u64 },
    Ext { p: u64, e: u32, modulus: Vec<u64> },
    Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    kind: Arc<Kind>,
}

/// Field element. `P` lives in F_p, `E` holds the e coefficients of a residue polynomial
/// (lowest degree first), `Q` is a rational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fe {
    P(u64),
    E(Vec<u64>),
    Q(BigRational),
}

/// Serialized field descriptor; p = 0 denotes Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub e: u32,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> Option<u64> {
    let g = Integer::extended_gcd(&(a as i128), &(p as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(p as i128) as u64)
}

// ---- polynomials over F_p, lowest degree first, no trailing zeros ----

fn ptrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    ptrim(out)
}

fn prem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = ptrim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = invmod(m[dm], p).expect("nonzero leading coefficient");
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        for (j, &mj) in m.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mulmod(c, mj, p)) % p;
        }
        r = ptrim(r);
    }
    r
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = ptrim(a.to_vec());
    let mut b = ptrim(b.to_vec());
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn ppowmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = prem(base, m, p);
    for i in 0..e.bits() {
        if e.bit(i) {
            r = prem(&pmul(&r, &b, p), m, p);
        }
        b = prem(&pmul(&b, &b, p), m, p);
    }
    r
}

fn psub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    ptrim(out)
}

/// Rabin's test for a monic polynomial of degree e over F_p.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    let x = vec![0u64, 1];
    let pb = BigUint::from(p);
    if psub(&ppowmod(&x, &pb.pow(e as u32), f, p), &x, p).iter().any(|&c| c != 0) {
        return false;
    }
    let mut r = 2;
    let mut rest = e;
    while rest > 1 {
        if rest % r == 0 {
            while rest % r == 0 {
                rest /= r;
            }
            let h = psub(&ppowmod(&x, &pb.pow((e / r) as u32), f, p), &x, p);
            if pgcd(f, &h, p).len() != 1 {
                return false;
            }
        }
        r += 1;
    }
    true
}

/// Lexicographically first monic irreducible of degree e: candidates ordered by the
/// integer sum c_i p^i over the non-leading coefficients.
pub fn default_modulus(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let mut c = vec![0u64; e];
    loop {
        let mut f = c.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

impl Field {
    pub fn new(p: u64, e: u32) -> Result<Field> {
        if p == 0 {
            if e != 1 {
                return Err(Error::invalid("Q has no extensions here (use e = 1)"));
            }
            return Ok(Field::rationals());
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if p >= 1 << 62 {
            return Err(Error::invalid("characteristic too large"));
        }
        match e {
            0 => Err(Error::invalid("extension degree must be at least 1")),
            1 => Ok(Field::prime(p)),
            e if e > MAX_EXTENSION_DEGREE => Err(Error::invalid(format!(
                "extension degree {e} exceeds {MAX_EXTENSION_DEGREE}"
            ))),
            e => Ok(Field {
                kind: Arc::new(Kind::Ext {
                    p,
                    e,
                    modulus: default_modulus(p, e),
                }),
            }),
        }
    }

    fn prime(p: u64) -> Field {
        Field {
            kind: Arc::new(Kind::Prime { p }),
        }
    }

    pub fn rationals() -> Field {
        Field {
            kind: Arc::new(Kind::Rational),
        }
    }

    pub fn from_descriptor(d: FieldDescriptor) -> Result<Field> {
        Field::new(d.p, d.e)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.characteristic(),
            e: self.degree(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self.kind {
            Kind::Prime { p } | Kind::Ext { p, .. } => p,
            Kind::Rational => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        match *self.kind {
            Kind::Ext { e, .. } => e,
            _ => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(*self.kind, Kind::Rational)
    }

    /// Number of elements, None for Q.
    pub fn order(&self) -> Option<BigUint> {
        match *self.kind {
            Kind::Prime { p } => Some(BigUint::from(p)),
            Kind::Ext { p, e, .. } => Some(BigUint::from(p).pow(e)),
            Kind::Rational => None,
        }
    }

    /// Number of elements if it fits in a u64.
    pub fn small_order(&self) -> Option<u64> {
        self.order().and_then(|q| q.to_u64())
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.kind {
            Kind::Ext { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn zero(&self) -> Fe {
        match &*self.kind {
            Kind::Prime { .. } => Fe::P(0),
            Kind::Ext { e, .. } => Fe::E(vec![0; *e as usize]),
            Kind::Rational => Fe::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Fe {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        match &*self.kind {
            Kind::Prime { p } => Fe::P(v.rem_euclid(*p as i64) as u64),
            Kind::Ext { p, e, .. } => {
                let mut c = vec![0; *e as usize];
                c[0] = v.rem_euclid(*p as i64) as u64;
                Fe::E(c)
            }
            Kind::Rational => Fe::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Fe {
        match &*self.kind {
            Kind::Rational => Fe::Q(BigRational::from_integer(v.clone())),
            _ => {
                let p = BigInt::from(self.characteristic());
                let r = v.mod_floor(&p).to_i64().unwrap();
                self.from_i64(r)
            }
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Fe> {
        match &*self.kind {
            Kind::Rational => Ok(Fe::Q(q.clone())),
            _ => {
                let n = self.from_bigint(q.numer());
                let d = self.from_bigint(q.denom());
                self.div(&n, &d)
            }
        }
    }

    /// Element with the given coefficient vector over F_p (length e, lowest first).
    pub fn from_coeffs(&self, c: &[u64]) -> Result<Fe> {
        match &*self.kind {
            Kind::Prime { p } if c.len() == 1 => Ok(Fe::P(c[0] % p)),
            Kind::Ext { p, e, .. } if c.len() == *e as usize => Ok(Fe::E(c.iter().map(|x| x % p).collect())),
            _ => Err(Error::invalid(format!(
                "expected {} coefficients for {}",
                self.degree(),
                self
            ))),
        }
    }

    /// Coordinates over the prime field; Q has none.
    pub fn coeffs(&self, a: &Fe) -> Option<Vec<u64>> {
        match a {
            Fe::P(x) => Some(vec![*x]),
            Fe::E(c) => Some(c.clone()),
            Fe::Q(_) => None,
        }
    }

    pub fn is_zero(&self, a: &Fe) -> bool {
        match a {
            Fe::P(x) => *x == 0,
            Fe::E(c) => c.iter().all(|&x| x == 0),
            Fe::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Fe) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        match (a, b) {
            (Fe::P(x), Fe::P(y)) => {
                let p = self.characteristic();
                Fe::P((x + y) % p)
            }
            (Fe::E(x), Fe::E(y)) => {
                let p = self.characteristic();
                Fe::E(x.iter().zip(y).map(|(u, v)| (u + v) % p).collect())
            }
            (Fe::Q(x), Fe::Q(y)) => Fe::Q(x + y),
            _ => panic!("field element mismatch"),
        }
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        match a {
            Fe::P(x) => {
                let p = self.characteristic();
                Fe::P((p - x) % p)
            }
            Fe::E(c) => {
                let p = self.characteristic();
                Fe::E(c.iter().map(|x| (p - x) % p).collect())
            }
            Fe::Q(q) => Fe::Q(-q),
        }
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        match (a, b, &*self.kind) {
            (Fe::P(x), Fe::P(y), Kind::Prime { p }) => Fe::P(mulmod(*x, *y, *p)),
            (Fe::E(x), Fe::E(y), Kind::Ext { p, e, modulus }) => {
                let mut r = prem(&pmul(&ptrim(x.clone()), &ptrim(y.clone()), *p), modulus, *p);
                r.resize(*e as usize, 0);
                Fe::E(r)
            }
            (Fe::Q(x), Fe::Q(y), Kind::Rational) => Fe::Q(x * y),
            _ => panic!("field element mismatch"),
        }
    }

    pub fn square(&self, a: &Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn mul_i64(&self, a: &Fe, k: i64) -> Fe {
        self.mul(a, &self.from_i64(k))
    }

    pub fn pow(&self, a: &Fe, e: &BigUint) -> Fe {
        let mut r = self.one();
        let mut b = a.clone();
        for i in 0..e.bits() {
            if e.bit(i) {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
        }
        r
    }

    pub fn pow_u64(&self, a: &Fe, e: u64) -> Fe {
        self.pow(a, &BigUint::from(e))
    }

    pub fn inv(&self, a: &Fe) -> Result<Fe> {
        if self.is_zero(a) {
            return Err(Error::domain("division by zero"));
        }
        Ok(match (a, &*self.kind) {
            (Fe::P(x), Kind::Prime { p }) => Fe::P(invmod(*x, *p).unwrap()),
            (Fe::Q(q), _) => Fe::Q(q.recip()),
            _ => {
                let q = self.order().unwrap();
                self.pow(a, &(q - 2u32))
            }
        })
    }

    pub fn div(&self, a: &Fe, b: &Fe) -> Result<Fe> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// A square root if one exists in the field.
    pub fn sqrt(&self, a: &Fe) -> Option<Fe> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        match a {
            Fe::Q(q) => {
                if q.is_negative() {
                    return None;
                }
                let n = q.numer().sqrt();
                let d = q.denom().sqrt();
                (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Fe::Q(BigRational::new(n, d)))
            }
            _ => {
                let q = self.order().unwrap();
                if self.characteristic() == 2 {
                    // Frobenius is bijective: a^(q/2) squares to a
                    return Some(self.pow(a, &(q / 2u32)));
                }
                self.tonelli_shanks(a, &q)
            }
        }
    }

    fn tonelli_shanks(&self, a: &Fe, q: &BigUint) -> Option<Fe> {
        let one = self.one();
        let qm1: BigUint = q - 1u32;
        if self.pow(a, &(&qm1 / 2u32)) != one {
            return None;
        }
        let mut s = 0u64;
        let mut t = qm1.clone();
        while !t.bit(0) {
            t >>= 1;
            s += 1;
        }
        // deterministic non-residue search
        let mut z = self.from_i64(2);
        let mut k = 2i64;
        while self.pow(&z, &(&qm1 / 2u32)) == one {
            k += 1;
            z = self.small_element(k as u64);
        }
        let mut m = s;
        let mut c = self.pow(&z, &t);
        let mut tt = self.pow(a, &t);
        let mut r = self.pow(a, &((&t + 1u32) / 2u32));
        while tt != one {
            let mut i = 0;
            let mut x = tt.clone();
            while x != one {
                x = self.square(&x);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.square(&b);
            }
            m = i;
            c = self.square(&b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    /// Cube root in characteristic 3 (Frobenius inverse).
    pub fn cube_root_char3(&self, a: &Fe) -> Option<Fe> {
        if self.characteristic() != 3 {
            return None;
        }
        let q = self.order().unwrap();
        Some(self.pow(a, &(q / 3u32)))
    }

    /// The k-th element in the base-p enumeration of a finite field.
    pub fn small_element(&self, k: u64) -> Fe {
        match &*self.kind {
            Kind::Prime { p } => Fe::P(k % p),
            Kind::Ext { p, e, .. } => {
                let mut c = vec![0; *e as usize];
                let mut r = k;
                for ci in c.iter_mut() {
                    *ci = r % p;
                    r /= p;
                }
                Fe::E(c)
            }
            Kind::Rational => self.from_i64(k as i64),
        }
    }

    /// All elements of a finite field with at most `cap` elements.
    pub fn elements(&self, cap: u64) -> Option<Vec<Fe>> {
        let q = self.small_order()?;
        (q <= cap).then(|| (0..q).map(|k| self.small_element(k)).collect())
    }

    /// Uniform random element (Q: small random integers).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        match &*self.kind {
            Kind::Prime { p } => Fe::P(rng.gen_range(0..*p)),
            Kind::Ext { p, e, .. } => Fe::E((0..*e).map(|_| rng.gen_range(0..*p)).collect()),
            Kind::Rational => self.from_i64(rng.gen_range(-20..=20)),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    pub fn format(&self, a: &Fe) -> String {
        match a {
            Fe::P(x) => x.to_string(),
            Fe::E(c) => format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            Fe::Q(q) => q.to_string(),
        }
    }

    /// JSON encoding: decimal string for F_p and Q, coefficient array for extensions.
    pub fn to_json(&self, a: &Fe) -> serde_json::Value {
        match a {
            Fe::P(x) => serde_json::Value::String(x.to_string()),
            Fe::E(c) => serde_json::Value::Array(c.iter().map(|x| serde_json::Value::String(x.to_string())).collect()),
            Fe::Q(q) => serde_json::Value::String(q.to_string()),
        }
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<Fe> {
        use serde_json::Value;
        match v {
            Value::Array(items) => {
                let c: Result<Vec<u64>> = items.iter().map(json_u64).collect();
                let c = c?;
                if self.degree() == 1 && c.len() == 1 {
                    return Ok(self.from_bigint(&BigInt::from(c[0])));
                }
                self.from_coeffs(&c)
            }
            Value::String(s) => self.parse(s),
            Value::Number(n) => self.parse(&n.to_string()),
            _ => Err(Error::Parse(format!("cannot read a field element from {v}"))),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Fe> {
        let q: BigRational = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field element '{s}'")))?;
        self.from_rational(&q)
    }
}

fn json_u64(v: &serde_json::Value) -> Result<u64> {
    match v {
        serde_json::Value::Number(n) => n.as_u64().ok_or_else(|| Error::Parse(format!("bad coefficient {n}"))),
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {s}"))),
        _ => Err(Error::Parse(format!("bad coefficient {v}"))),
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self.kind {
            Kind::Prime { p } => write!(f, "F_{p}"),
            Kind::Ext { p, e, .. } => write!(f, "F_{p}^{e}"),
            Kind::Rational => write!(f, "Q"),
        }
    }
}

// ---- dense linear algebra ----

/// Reduced row echelon form in place, pivoting only in the first `cols` columns (extra
/// columns are carried along); returns pivot columns.
pub fn row_reduce(f: &Field, m: &mut [Vec<Fe>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let k = m[i][c].clone();
                for j in c..m[r].len() {
                    let t = f.mul(&k, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &Field, m: &[Vec<Fe>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut a = m.to_vec();
    row_reduce(f, &mut a, cols).len()
}

/// Basis of {x : M x = 0}.
pub fn nullspace(f: &Field, m: &[Vec<Fe>], cols: usize) -> Vec<Vec<Fe>> {
    let mut a = m.to_vec();
    let pivots = row_reduce(f, &mut a, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![f.zero(); cols];
        x[free] = f.one();
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = f.neg(&a[i][free]);
        }
        basis.push(x);
    }
    basis
}

pub fn mat_vec(f: &Field, m: &[Vec<Fe>], v: &[Fe]) -> Vec<Fe> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
        .collect()
}

pub fn mat_mul(f: &Field, a: &[Vec<Fe>], b: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(f.zero(), |acc, (x, brow)| f.add(&acc, &f.mul(x, &brow[j]))))
                .collect()
        })
        .collect()
}

pub fn det3(f: &Field, m: &[Vec<Fe>]) -> Fe {
    let t = |a: &Fe, b: &Fe, c: &Fe| f.mul(a, &f.mul(b, c));
    let plus = f.add(
        &f.add(&t(&m[0][0], &m[1][1], &m[2][2]), &t(&m[0][1], &m[1][2], &m[2][0])),
        &t(&m[0][2], &m[1][0], &m[2][1]),
    );
    let minus = f.add(
        &f.add(&t(&m[0][2], &m[1][1], &m[2][0]), &t(&m[0][0], &m[1][2], &m[2][1])),
        &t(&m[0][1], &m[1][0], &m[2][2]),
    );
    f.sub(&plus, &minus)
}

/// Inverse of a square matrix, None if singular.
pub fn invert(f: &Field, m: &[Vec<Fe>]) -> Option<Vec<Vec<Fe>>> {
    let n = m.len();
    let mut a: Vec<Vec<Fe>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(f, &mut a, n);
    if pivots.len() < n {
        return None;
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn cross(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let c = |i: usize, j: usize| f.sub(&f.mul(&a[i], &b[j]), &f.mul(&a[j], &b[i]));
    vec![c(1, 2), c(2, 0), c(0, 1)]
}

pub fn dot(f: &Field, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::new(7, 1).unwrap();
        let a = f.from_i64(3);
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        assert_eq!(f.from_i64(-1), Fe::P(6));
        assert!(f.inv(&f.zero()).is_err());
        assert!(Field::new(9, 1).is_err());
    }

    #[test]
    fn extension_modulus_is_irreducible() {
        let f = Field::new(5, 12).unwrap();
        let m = f.modulus().unwrap();
        assert_eq!(m.len(), 13);
        assert!(is_irreducible(m, 5));
        // x^2 + 1 is reducible over F_5, x^2 + 2 is the first irreducible
        assert_eq!(default_modulus(5, 2), vec![2, 0, 1]);
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
    }

    #[test]
    fn extension_field_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, e) in [(2u64, 8u32), (3, 5), (5, 12)] {
            let f = Field::new(p, e).unwrap();
            for _ in 0..20 {
                let a = f.random_nonzero(&mut rng);
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
            // multiplicative group order
            let a = f.random_nonzero(&mut rng);
            let q = f.order().unwrap();
            assert_eq!(f.pow(&a, &(q - 1u32)), f.one());
        }
    }

    #[test]
    fn square_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (p, e) in [(101u64, 1u32), (2, 5), (5, 3), (17, 1), (3, 4)] {
            let f = Field::new(p, e).unwrap();
            for _ in 0..20 {
                let a = f.random(&mut rng);
                let s = f.square(&a);
                let r = f.sqrt(&s).unwrap();
                assert_eq!(f.square(&r), s);
            }
        }
        let f = Field::new(5, 1).unwrap();
        assert!(f.sqrt(&f.from_i64(2)).is_none());
        let q = Field::rationals();
        assert_eq!(q.sqrt(&q.parse("9/4").unwrap()), Some(q.parse("3/2").unwrap()));
        assert!(q.sqrt(&q.from_i64(2)).is_none());
    }

    #[test]
    fn cube_roots_in_char_3() {
        let f = Field::new(3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = f.random(&mut rng);
        let c = f.cube_root_char3(&a).unwrap();
        assert_eq!(f.mul(&c, &f.square(&c)), a);
    }

    #[test]
    fn rank_and_nullspace() {
        let f = Field::new(7, 1).unwrap();
        let m: Vec<Vec<Fe>> = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect();
        assert_eq!(rank(&f, &m), 2);
        let ns = nullspace(&f, &m, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&f, &m, &ns[0]).iter().all(|x| f.is_zero(x)));
        assert!(invert(&f, &m).is_none());
        assert!(f.is_zero(&det3(&f, &m)));
    }

    #[test]
    fn json_round_trip() {
        let f = Field::new(5, 3).unwrap();
        let a = f.from_coeffs(&[1, 2, 3]).unwrap();
        assert_eq!(f.from_json(&f.to_json(&a)).unwrap(), a);
        let q = Field::rationals();
        let x = q.parse("-7/3").unwrap();
        assert_eq!(q.from_json(&q.to_json(&x)).unwrap(), x);
    }
}
