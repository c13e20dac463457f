//! The odd unimodular lattice Z^{1,n} with basis e_0, ..., e_n, its canonical vector
//! k_n = -3e_0 + e_1 + ... + e_n and the root sublattice E_n = k_n^perp.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Smallest n for which the simple roots of E_n make sense.
pub const MIN_N: usize = 3;

/// The lattice Z^{1,n}. Only the number of blown-up points is stored; the form is always
/// diag(1, -1, ..., -1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lattice {
    n: usize,
}

impl Lattice {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Lattice { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn basis_vector(&self, i: usize) -> LatticeVector {
        basis_vector(self.n, i)
    }

    pub fn canonical_vector(&self) -> LatticeVector {
        canonical_unchecked(self.n)
    }

    pub fn simple_roots(&self) -> Vec<LatticeVector> {
        simple_roots_unchecked(self.n)
    }

    pub fn zero(&self) -> LatticeVector {
        LatticeVector::zero(self.n)
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n < MIN_N {
        return Err(Error::RankTooSmall { n, min: MIN_N });
    }
    Ok(())
}

/// A class in Z^{1,n}, stored as its coefficients on e_0, ..., e_n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticeVector {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector {
            coords: vec![BigInt::zero(); n + 1],
        }
    }

    /// Degree d and multiplicities m_i of the class d e_0 - sum m_i e_i.
    pub fn from_degree_and_multiplicities(d: i64, mults: &[i64]) -> Self {
        let mut coords = Vec::with_capacity(mults.len() + 1);
        coords.push(BigInt::from(d));
        coords.extend(mults.iter().map(|&m| BigInt::from(-m)));
        LatticeVector { coords }
    }

    /// Number of blown-up points, i.e. dimension minus one.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn coord(&self, i: usize) -> &BigInt {
        &self.coords[i]
    }

    pub fn degree(&self) -> &BigInt {
        &self.coords[0]
    }

    /// Multiplicities m_i = -(coefficient of e_i), i = 1..n.
    pub fn multiplicities(&self) -> Vec<BigInt> {
        self.coords[1..].iter().map(|c| -c).collect()
    }

    /// Coordinates as i64, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coords.iter().map(|c| c.to_i64()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    pub fn scale_i64(&self, k: i64) -> LatticeVector {
        self.scale(&BigInt::from(k))
    }

    /// self + k * other, without the intermediate allocation.
    pub fn add_scaled(&self, k: &BigInt, other: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.dim(), other.dim());
        LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + k * b)
                .collect(),
        }
    }

    /// Self-intersection.
    pub fn square(&self) -> BigInt {
        pairing(self, self)
    }

    /// Divide by the gcd of the coordinates. The zero vector is returned unchanged.
    pub fn primitive(&self) -> LatticeVector {
        use num_integer::Integer;
        let g = self
            .coords
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LatticeVector {
            coords: self.coords.iter().map(|c| c / &g).collect(),
        }
    }

    /// Sign normalization used for root catalogs: e_0-coefficient positive, or if it is
    /// zero, the first nonzero coefficient positive.
    pub fn sign_normalized(&self) -> LatticeVector {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        self.coords.swap(i, j);
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a LatticeVector> for &'a LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        LatticeVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a LatticeVector> for &'a LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        LatticeVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        &self + &rhs
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        &self - &rhs
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        -&self
    }
}

impl Mul<&LatticeVector> for &BigInt {
    type Output = LatticeVector;
    fn mul(self, rhs: &LatticeVector) -> LatticeVector {
        rhs.scale(self)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_seq(CoordsVisitor)
    }
}

struct CoordsVisitor;

impl<'de> Visitor<'de> for CoordsVisitor {
    type Value = LatticeVector;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an array of decimal integer strings")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<LatticeVector, A::Error> {
        let mut coords = Vec::new();
        while let Some(v) = seq.next_element::<serde_json::Value>()? {
            let c = match &v {
                serde_json::Value::String(s) => s.trim().parse::<BigInt>().map_err(de::Error::custom)?,
                serde_json::Value::Number(n) => n
                    .to_string()
                    .parse::<BigInt>()
                    .map_err(|_| de::Error::custom(format!("not an integer: {n}")))?,
                other => return Err(de::Error::custom(format!("not an integer: {other}"))),
            };
            coords.push(c);
        }
        if coords.is_empty() {
            return Err(de::Error::custom("empty coordinate array"));
        }
        Ok(LatticeVector { coords })
    }
}

/// Pairing without dimension check.
pub(crate) fn pairing(u: &LatticeVector, v: &LatticeVector) -> BigInt {
    let mut acc = &u.coords[0] * &v.coords[0];
    for (a, b) in u.coords[1..].iter().zip(&v.coords[1..]) {
        acc -= a * b;
    }
    acc
}

/// Intersection pairing on Z^{1,n}: u_0 v_0 - sum_{i>=1} u_i v_i.
pub fn inner(u: &LatticeVector, v: &LatticeVector) -> Result<BigInt> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(pairing(u, v))
}

pub fn basis_vector(n: usize, i: usize) -> LatticeVector {
    assert!(i <= n, "basis index {i} out of range for n = {n}");
    let mut v = LatticeVector::zero(n);
    v.coords[i] = BigInt::one();
    v
}

/// k_n = (-3, 1, ..., 1).
pub fn canonical_vector(n: usize) -> Result<LatticeVector> {
    check_n(n)?;
    Ok(canonical_unchecked(n))
}

pub(crate) fn canonical_unchecked(n: usize) -> LatticeVector {
    let mut coords = vec![BigInt::one(); n + 1];
    coords[0] = BigInt::from(-3);
    LatticeVector { coords }
}

/// alpha_0 = e_0 - e_1 - e_2 - e_3 and alpha_i = e_i - e_{i+1} for 1 <= i < n.
pub fn simple_roots(n: usize) -> Result<Vec<LatticeVector>> {
    check_n(n)?;
    Ok(simple_roots_unchecked(n))
}

pub(crate) fn simple_roots_unchecked(n: usize) -> Vec<LatticeVector> {
    let mut roots = Vec::with_capacity(n);
    roots.push(LatticeVector::from_i64s(
        &(0..=n)
            .map(|i| match i {
                0 => 1,
                1..=3 => -1,
                _ => 0,
            })
            .collect::<Vec<_>>(),
    ));
    for i in 1..n {
        let mut v = LatticeVector::zero(n);
        v.coords[i] = BigInt::one();
        v.coords[i + 1] = -BigInt::one();
        roots.push(v);
    }
    roots
}

/// Gram matrix (v_i . v_j) of a list of vectors.
pub fn gram_matrix(vs: &[LatticeVector]) -> Result<Vec<Vec<BigInt>>> {
    let mut g = Vec::with_capacity(vs.len());
    for u in vs {
        let mut row = Vec::with_capacity(vs.len());
        for v in vs {
            row.push(inner(u, v)?);
        }
        g.push(row);
    }
    Ok(g)
}

/// Incidence matrix of the T_{2,3,n-3} diagram with nodes labelled by the simple roots:
/// the chain 1 - 2 - ... - (n-1) plus the edge 0 - 3.
pub fn diagram_incidence(n: usize) -> Result<Vec<Vec<i64>>> {
    check_n(n)?;
    let mut g = vec![vec![0i64; n]; n];
    for i in 1..n - 1 {
        g[i][i + 1] = 1;
        g[i + 1][i] = 1;
    }
    if n > 3 {
        g[0][3] = 1;
        g[3][0] = 1;
    }
    Ok(g)
}

/// Coordinates of v in the basis alpha_0, ..., alpha_{n-1} of E_n. Fails unless v.k_n = 0.
pub fn to_root_coordinates(v: &LatticeVector) -> Result<Vec<BigInt>> {
    let n = v.n();
    check_n(n)?;
    let w = &v.coords;
    let mut c = vec![BigInt::zero(); n];
    c[0] = w[0].clone();
    c[1] = &w[1] + &c[0];
    c[2] = &w[2] + &c[0] + &c[1];
    if n > 3 {
        c[3] = &w[3] + &c[0] + &c[2];
    }
    for j in 4..n {
        c[j] = &w[j] + &c[j - 1];
    }
    // the last coordinate is a consistency condition, equivalent to v.k_n = 0
    let last_ok = if n > 3 {
        (&w[n] + &c[n - 1]).is_zero()
    } else {
        (&w[3] + &c[0] + &c[2]).is_zero()
    };
    if !last_ok {
        return Err(Error::NotOrthogonal);
    }
    Ok(c)
}

/// Inverse of [`to_root_coordinates`].
pub fn from_root_coordinates(n: usize, c: &[BigInt]) -> Result<LatticeVector> {
    check_n(n)?;
    if c.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: c.len() });
    }
    let roots = simple_roots_unchecked(n);
    let mut v = LatticeVector::zero(n);
    for (ci, a) in c.iter().zip(&roots) {
        if !ci.is_zero() {
            v = v.add_scaled(ci, a);
        }
    }
    Ok(v)
}

/// True when v.v = -2 and v.k_n = 0.
pub fn is_root(v: &LatticeVector) -> bool {
    if v.n() < MIN_N {
        return false;
    }
    let k = canonical_unchecked(v.n());
    v.square() == BigInt::from(-2) && pairing(v, &k).is_zero()
}

/// An integer (n+1)x(n+1) matrix acting on coordinate columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeIsometry {
    rows: Vec<Vec<BigInt>>,
}

impl fmt::Debug for LatticeIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LatticeIsometry(")?;
        for r in &self.rows {
            let s: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", s.join(", "))?;
        }
        write!(f, ")")
    }
}

impl LatticeIsometry {
    pub fn identity(n: usize) -> Self {
        let d = n + 1;
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        LatticeIsometry { rows }
    }

    /// Wraps a matrix after checking that it preserves diag(1, -1, ..., -1).
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let g = Self::from_rows_unchecked(rows)?;
        if !g.preserves_form() {
            return Err(Error::NotAnIsometry);
        }
        Ok(g)
    }

    /// Wraps a square matrix without the form check.
    pub fn from_rows_unchecked(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let d = rows.len();
        if d < 2 {
            return Err(Error::invalid("matrix must be at least 2x2"));
        }
        for r in &rows {
            if r.len() != d {
                return Err(Error::DimensionMismatch { left: d, right: r.len() });
            }
        }
        Ok(LatticeIsometry { rows })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the images of e_0, ..., e_n.
    pub fn from_columns(cols: &[LatticeVector]) -> Result<Self> {
        let d = cols.len();
        let rows = (0..d)
            .map(|i| cols.iter().map(|c| c.coords[i].clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), v.dim(), "dimension mismatch");
        LatticeVector {
            coords: self
                .rows
                .iter()
                .map(|r| r.iter().zip(&v.coords).map(|(a, b)| a * b).sum())
                .collect(),
        }
    }

    /// Matrix product self * other, i.e. apply `other` first.
    pub fn compose(&self, other: &LatticeIsometry) -> LatticeIsometry {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let d = self.dim();
        let mut rows = vec![vec![BigInt::zero(); d]; d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    rows[i][j] += a * &other.rows[k][j];
                }
            }
        }
        LatticeIsometry { rows }
    }

    /// Inverse of an isometry: J G^t J.
    pub fn inverse(&self) -> LatticeIsometry {
        let d = self.dim();
        let sign = |i: usize| if i == 0 { 1 } else { -1 };
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let s = sign(i) * sign(j);
                        let x = self.rows[j][i].clone();
                        if s < 0 {
                            -x
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        LatticeIsometry { rows }
    }

    pub fn pow(&self, mut e: u128) -> LatticeIsometry {
        let mut base = self.clone();
        let mut acc = LatticeIsometry::identity(self.n());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            r.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    /// G^t J G = J.
    pub fn preserves_form(&self) -> bool {
        let d = self.dim();
        let sign = |i: usize| if i == 0 { BigInt::one() } else { -BigInt::one() };
        for a in 0..d {
            for b in a..d {
                let mut s = BigInt::zero();
                for i in 0..d {
                    s += sign(i) * &self.rows[i][a] * &self.rows[i][b];
                }
                let expected = if a == b { sign(a) } else { BigInt::zero() };
                if s != expected {
                    return false;
                }
            }
        }
        true
    }

    pub fn fixes(&self, v: &LatticeVector) -> bool {
        &self.apply(v) == v
    }

    /// Images of the basis vectors.
    pub fn columns(&self) -> Vec<LatticeVector> {
        let d = self.dim();
        (0..d)
            .map(|j| LatticeVector {
                coords: (0..d).map(|i| self.rows[i][j].clone()).collect(),
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}
