//! Plane cubics over exact fields: classification, the chord-tangent group law on the smooth
//! locus, the restriction homomorphism E_n -> Pic^0 and the torsion, Halphen and Harbourne
//! tests built on it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::catalog::enumerate_roots;
use crate::config::{normalize_point, same_point, Point};
use crate::error::{Error, Result};
use crate::field::{cross, dot, invert, mat_vec, rank, Fe, Field};
use crate::lattice::{canonical_unchecked, pairing, LatticeVector};
use crate::orbit::{search_root_residues, RootResidues};

/// Exponents (x, y, z) of the ten cubic monomials, in storage order.
pub const MONOMIALS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

fn mono_index(e: [u32; 3]) -> usize {
    MONOMIALS.iter().position(|m| *m == e).expect("cubic monomial")
}

/// Fields small enough to enumerate P^2(F_q).
const BRUTE_FORCE_Q: u64 = 512;
const ORDER_CAP: u64 = 1_000_000;
/// Largest torsion order of a point on a cubic over Q (Mazur; the singular groups are smaller).
const RATIONAL_TORSION_BOUND: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryCubic {
    field: Field,
    coeffs: Vec<Fe>,
}

impl TernaryCubic {
    pub fn new(field: Field, coeffs: Vec<Fe>) -> Result<Self> {
        if coeffs.len() != 10 {
            return Err(Error::invalid("a ternary cubic has 10 coefficients"));
        }
        if coeffs.iter().all(|c| field.is_zero(c)) {
            return Err(Error::invalid("the zero polynomial is not a curve"));
        }
        Ok(TernaryCubic { field, coeffs })
    }

    /// Build from (exponent, coefficient) pairs; missing monomials are zero.
    pub fn from_terms(field: Field, terms: &[([u32; 3], i64)]) -> Result<Self> {
        let mut c = vec![field.zero(); 10];
        for &(e, v) in terms {
            if e.iter().sum::<u32>() != 3 {
                return Err(Error::invalid(format!("{e:?} is not a cubic monomial")));
            }
            let i = mono_index(e);
            c[i] = field.add(&c[i], &field.from_i64(v));
        }
        TernaryCubic::new(field, c)
    }

    /// y^2 z + a1 xyz + a3 yz^2 = x^3 + a2 x^2 z + a4 xz^2 + a6 z^3.
    pub fn weierstrass(field: Field, a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        TernaryCubic::from_terms(
            field,
            &[
                ([0, 2, 1], 1),
                ([1, 1, 1], a1),
                ([0, 1, 2], a3),
                ([3, 0, 0], -1),
                ([2, 0, 1], -a2),
                ([1, 0, 2], -a4),
                ([0, 0, 3], -a6),
            ],
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeff(&self, e: [u32; 3]) -> &Fe {
        &self.coeffs[mono_index(e)]
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn eval(&self, p: &[Fe]) -> Fe {
        let f = &self.field;
        MONOMIALS.iter().zip(&self.coeffs).fold(f.zero(), |acc, (e, c)| {
            if f.is_zero(c) {
                return acc;
            }
            let mut t = c.clone();
            for (k, &ek) in e.iter().enumerate() {
                t = f.mul(&t, &f.pow_u64(&p[k], ek as u64));
            }
            f.add(&acc, &t)
        })
    }

    pub fn grad(&self, p: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        (0..3)
            .map(|v| {
                MONOMIALS.iter().zip(&self.coeffs).fold(f.zero(), |acc, (e, c)| {
                    if e[v] == 0 || f.is_zero(c) {
                        return acc;
                    }
                    let mut t = f.mul_i64(c, e[v] as i64);
                    for (k, &ek) in e.iter().enumerate() {
                        let pw = if k == v { ek - 1 } else { ek };
                        t = f.mul(&t, &f.pow_u64(&p[k], pw as u64));
                    }
                    f.add(&acc, &t)
                })
            })
            .collect()
    }

    /// G(y) = F(M y).
    pub fn substitute(&self, m: &[Vec<Fe>]) -> TernaryCubic {
        let f = &self.field;
        let mut out: BTreeMap<[u32; 3], Fe> = BTreeMap::new();
        for (e, c) in MONOMIALS.iter().zip(&self.coeffs) {
            if f.is_zero(c) {
                continue;
            }
            let mut poly: BTreeMap<[u32; 3], Fe> = BTreeMap::from([([0, 0, 0], c.clone())]);
            for (var, &power) in e.iter().enumerate() {
                for _ in 0..power {
                    let mut next: BTreeMap<[u32; 3], Fe> = BTreeMap::new();
                    for (pe, pc) in &poly {
                        for (j, mj) in m[var].iter().enumerate() {
                            if f.is_zero(mj) {
                                continue;
                            }
                            let mut ne = *pe;
                            ne[j] += 1;
                            let t = f.mul(pc, mj);
                            let slot = next.entry(ne).or_insert_with(|| f.zero());
                            *slot = f.add(slot, &t);
                        }
                    }
                    poly = next;
                }
            }
            for (pe, pc) in poly {
                let slot = out.entry(pe).or_insert_with(|| f.zero());
                *slot = f.add(slot, &pc);
            }
        }
        let coeffs = MONOMIALS
            .iter()
            .map(|e| out.get(e).cloned().unwrap_or_else(|| f.zero()))
            .collect();
        TernaryCubic {
            field: f.clone(),
            coeffs,
        }
    }

    fn scaled(&self, s: &Fe) -> TernaryCubic {
        TernaryCubic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| self.field.mul(c, s)).collect(),
        }
    }

    /// Coefficient map keyed by exponent strings such as "210".
    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (e, c) in MONOMIALS.iter().zip(&self.coeffs) {
            if !self.field.is_zero(c) {
                map.insert(format!("{}{}{}", e[0], e[1], e[2]), self.field.to_json(c));
            }
        }
        Value::Object(map)
    }

    pub fn from_json(field: Field, v: &Value) -> Result<Self> {
        let map = v
            .as_object()
            .ok_or_else(|| Error::Parse("a cubic is an object keyed by exponents".into()))?;
        let mut c = vec![field.zero(); 10];
        for (k, val) in map {
            let digits: Vec<u32> = k.chars().filter_map(|ch| ch.to_digit(10)).collect();
            if digits.len() != 3 || k.len() != 3 || digits.iter().sum::<u32>() != 3 {
                return Err(Error::Parse(format!("'{k}' is not a cubic exponent key")));
            }
            c[mono_index([digits[0], digits[1], digits[2]])] = field.from_json(val)?;
        }
        TernaryCubic::new(field, c)
    }

    fn weierstrass_coeffs(&self) -> Option<[Fe; 5]> {
        let f = &self.field;
        let a = self.coeff([0, 2, 1]);
        if f.is_zero(a)
            || [[0, 3, 0], [1, 2, 0], [2, 1, 0]].iter().any(|&e| !f.is_zero(self.coeff(e)))
            || *self.coeff([3, 0, 0]) != f.neg(a)
        {
            return None;
        }
        let ai = f.inv(a).ok()?;
        let c = |e: [u32; 3], sign: i64| f.mul_i64(&f.mul(self.coeff(e), &ai), sign);
        Some([c([1, 1, 1], 1), c([2, 0, 1], -1), c([0, 1, 2], 1), c([1, 0, 2], -1), c([0, 0, 3], -1)])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityType {
    Smooth,
    Nodal,
    Cuspidal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupStructure {
    Elliptic,
    Multiplicative,
    Additive,
}

/// Coordinates (X, Y, Z) = N (x, y, z) in which the curve reads Y^2 Z = X^3 (additive, t = X/Y)
/// or (Y - r1 X)(Y - r2 X) Z = X^3 (multiplicative, u = (Y - r1 X)/(Y - r2 X)).
#[derive(Debug, Clone, PartialEq)]
pub enum Chart {
    Additive { frame: Vec<Vec<Fe>> },
    Multiplicative { frame: Vec<Vec<Fe>>, r1: Fe, r2: Fe },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubicCurveModel {
    cubic: TernaryCubic,
    pub singularity: SingularityType,
    pub group: GroupStructure,
    pub singular_point: Option<Point>,
    pub origin: Point,
    /// False only for smooth cubics over small fields without a rational inflection point;
    /// then the origin is the first smooth rational point.
    pub origin_is_flex: bool,
    pub chart: Option<Chart>,
    /// (a1, a2, a3, a4, a6) of a Weierstrass model, when one was found.
    pub weierstrass: Option<[Fe; 5]>,
}

/// Square 3x3 identity.
fn identity3(f: &Field) -> Vec<Vec<Fe>> {
    (0..3)
        .map(|i| (0..3).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

/// Row vector times matrix.
fn row_times(f: &Field, row: &[Fe], m: &[Vec<Fe>]) -> Vec<Fe> {
    (0..3)
        .map(|j| (0..3).fold(f.zero(), |acc, i| f.add(&acc, &f.mul(&row[i], &m[i][j]))))
        .collect()
}

/// Roots of a univariate polynomial given lowest degree first, restricted to what the
/// classification needs: gcd of g and g'.
fn poly_trim(f: &Field, mut a: Vec<Fe>) -> Vec<Fe> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

fn poly_rem(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut r = poly_trim(f, a.to_vec());
    let db = b.len() - 1;
    let li = f.inv(&b[db]).expect("trimmed divisor");
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = f.mul(r.last().unwrap(), &li);
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
        }
        r = poly_trim(f, r);
    }
    r
}

fn poly_gcd(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut a = poly_trim(f, a.to_vec());
    let mut b = poly_trim(f, b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        let li = f.inv(&l).unwrap();
        a = a.iter().map(|c| f.mul(c, &li)).collect();
    }
    a
}

/// Solve w^2 + w = c in characteristic 2 by F_2-linear algebra on coordinates.
fn artin_schreier(f: &Field, c: &Fe) -> Option<Fe> {
    let e = f.degree() as usize;
    let f2 = Field::new(2, 1).ok()?;
    let basis: Vec<Fe> = (0..e)
        .map(|i| {
            let mut v = vec![0u64; e];
            v[i] = 1;
            f.from_coeffs(&v).unwrap()
        })
        .collect();
    let images: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| f.coeffs(&f.add(&f.square(b), b)).unwrap())
        .collect();
    let target = f.coeffs(c)?;
    // augmented system: columns are images, unknown is the coordinate vector of w
    let rows: Vec<Vec<Fe>> = (0..e)
        .map(|r| {
            let mut row: Vec<Fe> = (0..e).map(|col| f2.from_i64(images[col][r] as i64)).collect();
            row.push(f2.from_i64(target[r] as i64));
            row
        })
        .collect();
    let mut a = rows;
    let piv = crate::field::row_reduce(&f2, &mut a, e + 1);
    if piv.contains(&e) {
        return None;
    }
    let mut w = vec![0u64; e];
    for (i, &pc) in piv.iter().enumerate() {
        w[pc] = f2.coeffs(&a[i][e]).unwrap()[0];
    }
    f.from_coeffs(&w).ok()
}

struct WeierstrassAnalysis {
    singularity: SingularityType,
    singular: Option<Vec<Fe>>,
    chart: Option<Chart>,
}

fn analyze_weierstrass(f: &Field, a: &[Fe; 5]) -> Result<WeierstrassAnalysis> {
    let [a1, a2, a3, a4, a6] = a;
    let i = |k: i64| f.from_i64(k);
    let m = |x: &Fe, y: &Fe| f.mul(x, y);
    let b2 = f.add(&m(a1, a1), &m(&i(4), a2));
    let b4 = f.add(&m(&i(2), a4), &m(a1, a3));
    let b6 = f.add(&m(a3, a3), &m(&i(4), a6));
    let b8 = {
        let t1 = m(&m(a1, a1), a6);
        let t2 = m(&m(&i(4), a2), a6);
        let t3 = m(&m(a1, a3), a4);
        let t4 = m(a2, &m(a3, a3));
        let t5 = m(a4, a4);
        f.sub(&f.add(&f.sub(&f.add(&t1, &t2), &t3), &t4), &t5)
    };
    let disc = {
        let t1 = m(&m(&b2, &b2), &b8);
        let t2 = m(&i(8), &m(&b4, &m(&b4, &b4)));
        let t3 = m(&i(27), &m(&b6, &b6));
        let t4 = m(&i(9), &m(&b2, &m(&b4, &b6)));
        f.add(&f.neg(&f.add(&f.add(&t1, &t2), &t3)), &t4)
    };
    let frame_from = |x0: &Fe, y0: &Fe| -> Vec<Vec<Fe>> {
        // X = x - x0 z, Y = y - y0 z, Z = z
        vec![
            vec![f.one(), f.zero(), f.neg(x0)],
            vec![f.zero(), f.one(), f.neg(y0)],
            vec![f.zero(), f.zero(), f.one()],
        ]
    };
    if !f.is_zero(&disc) {
        return Ok(WeierstrassAnalysis {
            singularity: SingularityType::Smooth,
            singular: None,
            chart: None,
        });
    }
    let (x0, y0) = if f.characteristic() == 2 {
        if !f.is_zero(a1) {
            let x0 = f.div(a3, a1)?;
            let y0 = f.div(&f.add(&m(&x0, &x0), a4), a1)?;
            (x0, y0)
        } else {
            let x0 = f.sqrt(a4).ok_or_else(|| Error::domain("no square root for the singular point"))?;
            let rhs = f.add(&f.add(&m(&x0, &m(&x0, &x0)), &m(a2, &m(&x0, &x0))), &f.add(&m(a4, &x0), a6));
            let y0 = f.sqrt(&rhs).ok_or_else(|| Error::domain("no square root for the singular point"))?;
            (x0, y0)
        }
    } else {
        // singular x is a multiple root of g = 4x^3 + b2 x^2 + 2 b4 x + b6
        let g = vec![b6.clone(), m(&i(2), &b4), b2.clone(), i(4)];
        let dg = vec![m(&i(2), &b4), m(&i(2), &b2), i(12)];
        let h = poly_gcd(f, &g, &dg);
        let x0 = match h.len() {
            2 => f.neg(&h[0]),
            3 => f.div(&f.neg(&h[1]), &i(2))?,
            4 => {
                // g' = 0: characteristic 3 with g = x^3 + b6
                let c = f.neg(&f.div(&h[0], &h[3])?);
                f.cube_root_char3(&c).ok_or_else(|| Error::domain("no cube root for the singular point"))?
            }
            _ => return Err(Error::domain("discriminant vanishes but no multiple root found")),
        };
        let y0 = f.div(&f.neg(&f.add(&m(a1, &x0), a3)), &i(2))?;
        (x0, y0)
    };
    let sing = vec![x0.clone(), y0.clone(), f.one()];
    let w = TernaryCubic::weierstrass_from_fe(f, a);
    if !f.is_zero(&w.eval(&sing)) || w.grad(&sing).iter().any(|g| !f.is_zero(g)) {
        return Err(Error::domain("singular point computation failed"));
    }
    // tangent cone Y^2 + a1 XY - A X^2 at the singular point
    let big_a = f.add(a2, &m(&i(3), &x0));
    let cone_disc = f.add(&m(a1, a1), &m(&i(4), &big_a));
    let base = frame_from(&x0, &y0);
    if f.is_zero(&cone_disc) {
        let beta = if f.characteristic() == 2 {
            f.sqrt(&big_a).ok_or_else(|| Error::domain("no square root for the cusp direction"))?
        } else {
            f.div(a1, &i(2))?
        };
        // Y' = Y + beta X
        let mut frame = base.clone();
        frame[1] = (0..3).map(|j| f.add(&base[1][j], &m(&beta, &base[0][j]))).collect();
        return Ok(WeierstrassAnalysis {
            singularity: SingularityType::Cuspidal,
            singular: Some(sing),
            chart: Some(Chart::Additive { frame }),
        });
    }
    // r^2 + a1 r - A = 0
    let roots = if f.characteristic() == 2 {
        // r = a1 w with w^2 + w = A / a1^2
        let c = f.div(&big_a, &m(a1, a1))?;
        artin_schreier(f, &c).map(|w| {
            let r1 = m(a1, &w);
            let r2 = f.add(&r1, a1);
            (r1, r2)
        })
    } else {
        f.sqrt(&cone_disc).map(|s| {
            let half = f.inv(&i(2)).unwrap();
            let r1 = m(&f.sub(&s, a1), &half);
            let r2 = m(&f.sub(&f.neg(&s), a1), &half);
            (r1, r2)
        })
    };
    Ok(WeierstrassAnalysis {
        singularity: SingularityType::Nodal,
        singular: Some(sing),
        chart: roots.map(|(r1, r2)| Chart::Multiplicative { frame: base, r1, r2 }),
    })
}

impl TernaryCubic {
    fn weierstrass_from_fe(f: &Field, a: &[Fe; 5]) -> TernaryCubic {
        let mut c = vec![f.zero(); 10];
        c[mono_index([0, 2, 1])] = f.one();
        c[mono_index([1, 1, 1])] = a[0].clone();
        c[mono_index([0, 1, 2])] = a[2].clone();
        c[mono_index([3, 0, 0])] = f.from_i64(-1);
        c[mono_index([2, 0, 1])] = f.neg(&a[1]);
        c[mono_index([1, 0, 2])] = f.neg(&a[3]);
        c[mono_index([0, 0, 3])] = f.neg(&a[4]);
        TernaryCubic {
            field: f.clone(),
            coeffs: c,
        }
    }

    /// All rational points of P^2 on the curve (small finite fields only).
    pub fn rational_points(&self) -> Result<Vec<Point>> {
        let f = &self.field;
        let elems = f
            .elements(BRUTE_FORCE_Q)
            .ok_or_else(|| Error::invalid(format!("point enumeration needs a finite field with at most {BRUTE_FORCE_Q} elements")))?;
        let mut pts = Vec::new();
        let mut consider = |p: Vec<Fe>| {
            if f.is_zero(&self.eval(&p)) {
                pts.push([p[0].clone(), p[1].clone(), p[2].clone()]);
            }
        };
        for x in &elems {
            for y in &elems {
                consider(vec![x.clone(), y.clone(), f.one()]);
            }
        }
        for x in &elems {
            consider(vec![x.clone(), f.one(), f.zero()]);
        }
        consider(vec![f.one(), f.zero(), f.zero()]);
        Ok(pts)
    }
}

/// Third intersection of the cubic with the line through P and Q (tangent if P = Q).
fn third_point(c: &TernaryCubic, p: &[Fe], q: &[Fe]) -> Result<Point> {
    let f = &c.field;
    if same_point(f, p, q) {
        let g = c.grad(p);
        let d = (0..3)
            .map(|i| {
                let mut e = vec![f.zero(); 3];
                e[i] = f.one();
                cross(f, &g, &e)
            })
            .find(|d| d.iter().any(|x| !f.is_zero(x)) && !same_point(f, d, p))
            .ok_or_else(|| Error::domain("no tangent direction at a singular point"))?;
        let fd = c.eval(&d);
        let c12 = dot(f, &c.grad(&d), p);
        if f.is_zero(&fd) && f.is_zero(&c12) {
            return Err(Error::domain("the tangent line is a component of the cubic"));
        }
        let r: Vec<Fe> = (0..3).map(|i| f.sub(&f.mul(&fd, &p[i]), &f.mul(&c12, &d[i]))).collect();
        return normalize_point(f, &r);
    }
    let c21 = dot(f, &c.grad(p), q);
    let c12 = dot(f, &c.grad(q), p);
    if f.is_zero(&c21) && f.is_zero(&c12) {
        return Err(Error::domain("the chord is a component of the cubic"));
    }
    let r: Vec<Fe> = (0..3).map(|i| f.sub(&f.mul(&c12, &p[i]), &f.mul(&c21, &q[i]))).collect();
    normalize_point(f, &r)
}

/// Classify an irreducible cubic, choose an origin and a parameter chart when the smooth
/// locus is a torus or an additive group.
///
/// Cubics in Weierstrass shape are handled over every field. Other cubics need a finite
/// field with at most 512 elements; they are moved to Weierstrass shape through a rational
/// inflection point when one exists.
pub fn classify_cubic(cubic: &TernaryCubic) -> Result<CubicCurveModel> {
    let f = cubic.field.clone();
    if let Some(a) = cubic.weierstrass_coeffs() {
        return model_from_weierstrass(cubic, &identity3(&f), a);
    }
    if f.small_order().map_or(true, |q| q > BRUTE_FORCE_Q) {
        return Err(Error::invalid(
            "cubics outside Weierstrass shape are supported over finite fields with at most 512 elements",
        ));
    }
    let pts = cubic.rational_points()?;
    let is_sing = |p: &Point| cubic.grad(p).iter().all(|g| f.is_zero(g));
    let singular: Vec<&Point> = pts.iter().filter(|p| is_sing(p)).collect();
    if singular.len() >= 2 {
        return Err(Error::invalid("reducible or non-reduced cubic: several singular points"));
    }
    let smooth: Vec<&Point> = pts.iter().filter(|p| !is_sing(p)).collect();
    for p in &smooth {
        let t = third_point(cubic, &p[..], &p[..]).map_err(|_| Error::invalid("reducible cubic: contains a line"))?;
        if same_point(&f, &t, &p[..]) {
            return flex_to_weierstrass(cubic, p);
        }
    }
    if !singular.is_empty() {
        return Err(Error::invalid("reducible cubic: singular without a rational inflection point"));
    }
    // smooth check through the Hasse interval: reducible cubics without rational singular
    // points have 0 or 2q + 2 rational points
    let q = f.small_order().unwrap() as f64;
    let npts = pts.len() as f64;
    if (npts - (q + 1.0)).abs() > 2.0 * q.sqrt() {
        return Err(Error::invalid("reducible cubic: point count outside the Hasse interval"));
    }
    let origin = smooth
        .first()
        .map(|p| (*p).clone())
        .ok_or_else(|| Error::invalid("the cubic has no rational points"))?;
    Ok(CubicCurveModel {
        cubic: cubic.clone(),
        singularity: SingularityType::Smooth,
        group: GroupStructure::Elliptic,
        singular_point: None,
        origin,
        origin_is_flex: false,
        chart: None,
        weierstrass: None,
    })
}

fn flex_to_weierstrass(cubic: &TernaryCubic, o: &Point) -> Result<CubicCurveModel> {
    let f = &cubic.field;
    let g = cubic.grad(&o[..]);
    let unit = |i: usize| -> Vec<Fe> {
        let mut e = vec![f.zero(); 3];
        e[i] = f.one();
        e
    };
    let xf = (0..3)
        .map(|i| cross(f, &o[..], &unit(i)))
        .find(|l| l.iter().any(|x| !f.is_zero(x)) && !same_point(f, l, &g))
        .expect("a second line through the point");
    let yf = (0..3)
        .map(unit)
        .find(|l| {
            let m = vec![xf.clone(), l.clone(), g.clone()];
            invert(f, &m).is_some()
        })
        .expect("complete to a basis");
    let n = vec![xf, yf, g];
    let ninv = invert(f, &n).expect("frame");
    let h = cubic.substitute(&ninv);
    let c = h.coeff([3, 0, 0]).clone();
    let qyy = h.coeff([0, 2, 1]).clone();
    if f.is_zero(&c) || f.is_zero(&qyy) {
        return Err(Error::invalid("reducible cubic: degenerate inflection frame"));
    }
    let k = f.neg(&f.div(&c, &qyy)?);
    let ki = f.inv(&k)?;
    let scale = [ki.clone(), f.mul(&ki, &ki), f.one()];
    let n2: Vec<Vec<Fe>> = n
        .iter()
        .zip(&scale)
        .map(|(row, s)| row.iter().map(|x| f.mul(x, s)).collect())
        .collect();
    let n2inv = invert(f, &n2).expect("frame");
    let w = cubic.substitute(&n2inv);
    let w = w.scaled(&f.inv(w.coeff([0, 2, 1]))?);
    let a = w
        .weierstrass_coeffs()
        .ok_or_else(|| Error::invalid("reducible cubic: no Weierstrass model through the inflection point"))?;
    model_from_weierstrass(cubic, &n2, a)
}

/// `frame` maps original coordinates to Weierstrass coordinates.
fn model_from_weierstrass(cubic: &TernaryCubic, frame: &[Vec<Fe>], a: [Fe; 5]) -> Result<CubicCurveModel> {
    let f = &cubic.field;
    let an = analyze_weierstrass(f, &a)?;
    let back = invert(f, frame).expect("invertible frame");
    let to_orig = |p: &[Fe]| normalize_point(f, &mat_vec(f, &back, p));
    let origin = to_orig(&[f.zero(), f.one(), f.zero()])?;
    let singular_point = an.singular.as_ref().map(|s| to_orig(s)).transpose()?;
    let pull = |m: &[Vec<Fe>]| -> Vec<Vec<Fe>> { m.iter().map(|row| row_times(f, row, frame)).collect() };
    let chart = an.chart.map(|c| match c {
        Chart::Additive { frame: fr } => Chart::Additive { frame: pull(&fr) },
        Chart::Multiplicative { frame: fr, r1, r2 } => Chart::Multiplicative {
            frame: pull(&fr),
            r1,
            r2,
        },
    });
    let group = match an.singularity {
        SingularityType::Smooth => GroupStructure::Elliptic,
        SingularityType::Nodal => GroupStructure::Multiplicative,
        SingularityType::Cuspidal => GroupStructure::Additive,
    };
    Ok(CubicCurveModel {
        cubic: cubic.clone(),
        singularity: an.singularity,
        group,
        singular_point,
        origin,
        origin_is_flex: true,
        chart,
        weierstrass: Some(a),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointOrder {
    Finite(u64),
    Infinite,
    /// No return to the origin within the iteration cap (finite fields only).
    ExceedsCap,
}

/// Image of a class in Pic^0 of the smooth locus: a curve point under the group law, with
/// the chart parameter when a chart exists.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictionImage {
    pub point: Point,
    pub parameter: Option<Fe>,
}

impl CubicCurveModel {
    pub fn cubic(&self) -> &TernaryCubic {
        &self.cubic
    }

    pub fn field(&self) -> &Field {
        &self.cubic.field
    }

    pub fn contains(&self, p: &[Fe]) -> bool {
        self.field().is_zero(&self.cubic.eval(p))
    }

    pub fn is_smooth_point(&self, p: &[Fe]) -> bool {
        self.contains(p) && self.cubic.grad(p).iter().any(|g| !self.field().is_zero(g))
    }

    /// Normalized copy of a smooth point, or a domain error.
    pub fn smooth_point(&self, p: &[Fe]) -> Result<Point> {
        if !self.contains(p) {
            return Err(Error::domain("point is not on the cubic"));
        }
        if !self.is_smooth_point(p) {
            return Err(Error::domain("point is the singular point of the cubic"));
        }
        normalize_point(self.field(), p)
    }

    pub fn third(&self, p: &Point, q: &Point) -> Result<Point> {
        third_point(&self.cubic, p, q)
    }

    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        self.smooth_point(p)?;
        self.smooth_point(q)?;
        let r = self.third(p, q)?;
        self.third(&self.origin, &r)
    }

    pub fn neg(&self, p: &Point) -> Result<Point> {
        self.smooth_point(p)?;
        let oo = self.third(&self.origin, &self.origin)?;
        self.third(p, &oo)
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Result<Point> {
        self.add(p, &self.neg(q)?)
    }

    pub fn mul(&self, k: &BigInt, p: &Point) -> Result<Point> {
        let mut base = if k.is_negative() { self.neg(p)? } else { self.smooth_point(p)? };
        let mut e = k.abs();
        let mut acc = self.origin.clone();
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Class of a line section, h - 3o, as a point.
    pub fn line_class(&self) -> Result<Point> {
        self.third(&self.origin, &self.origin)
    }

    /// Chart parameter: t for the additive chart, u for the multiplicative one.
    pub fn parameter(&self, p: &[Fe]) -> Option<Fe> {
        let f = self.field();
        match self.chart.as_ref()? {
            Chart::Additive { frame } => {
                let v = mat_vec(f, frame, p);
                f.div(&v[0], &v[1]).ok()
            }
            Chart::Multiplicative { frame, r1, r2 } => {
                let v = mat_vec(f, frame, p);
                let l1 = f.sub(&v[1], &f.mul(r1, &v[0]));
                let l2 = f.sub(&v[1], &f.mul(r2, &v[0]));
                f.div(&l1, &l2).ok()
            }
        }
    }

    /// Inverse of [`Self::parameter`].
    pub fn point_from_parameter(&self, t: &Fe) -> Result<Point> {
        let f = self.field();
        let chart = self.chart.as_ref().ok_or_else(|| Error::invalid("this cubic has no parameter chart"))?;
        let (frame, v) = match chart {
            Chart::Additive { frame } => (frame, vec![t.clone(), f.one(), f.mul(t, &f.square(t))]),
            Chart::Multiplicative { frame, r1, r2 } => {
                if f.is_zero(t) {
                    return Err(Error::domain("the multiplicative parameter must be a unit"));
                }
                let x = f.div(&f.sub(t, &f.one()), &f.sub(r2, r1))?;
                let y = f.add(&f.one(), &f.mul(r2, &x));
                let z = f.div(&f.mul(&x, &f.square(&x)), t)?;
                (frame, vec![x, y, z])
            }
        };
        let back = invert(f, frame).expect("chart frame");
        normalize_point(f, &mat_vec(f, &back, &v))
    }

    /// All smooth rational points (small finite fields only).
    pub fn smooth_points(&self) -> Result<Vec<Point>> {
        Ok(self
            .cubic
            .rational_points()?
            .into_iter()
            .filter(|p| self.is_smooth_point(p))
            .collect())
    }

    pub fn order(&self, p: &Point) -> Result<PointOrder> {
        let p = self.smooth_point(p)?;
        let f = self.field();
        if p == self.origin {
            return Ok(PointOrder::Finite(1));
        }
        if !f.is_finite() {
            let mut acc = p.clone();
            for k in 2..=RATIONAL_TORSION_BOUND {
                acc = self.add(&acc, &p)?;
                if acc == self.origin {
                    return Ok(PointOrder::Finite(k));
                }
            }
            return Ok(PointOrder::Infinite);
        }
        if self.group == GroupStructure::Additive && self.chart.is_some() {
            return Ok(PointOrder::Finite(f.characteristic()));
        }
        if f.small_order().is_some_and(|q| q <= BRUTE_FORCE_Q) {
            let n = self.smooth_points()?.len() as u64;
            return Ok(PointOrder::Finite(self.order_dividing(&p, n)?));
        }
        let mut acc = p.clone();
        for k in 2..=ORDER_CAP {
            acc = self.add(&acc, &p)?;
            if acc == self.origin {
                return Ok(PointOrder::Finite(k));
            }
        }
        Ok(PointOrder::ExceedsCap)
    }

    fn order_dividing(&self, p: &Point, n: u64) -> Result<u64> {
        let mut order = n;
        let mut rest = n;
        let mut q = 2;
        while rest > 1 {
            if q * q > rest {
                q = rest;
            }
            if rest % q == 0 {
                while rest % q == 0 {
                    rest /= q;
                }
                while order % q == 0 && self.mul(&BigInt::from(order / q), p)? == self.origin {
                    order /= q;
                }
            }
            q += 1;
        }
        Ok(order)
    }

    fn image(&self, p: Point) -> RestrictionImage {
        RestrictionImage {
            parameter: self.parameter(&p),
            point: p,
        }
    }
}

fn check_points(c: &CubicCurveModel, pts: &[Point]) -> Result<Vec<Point>> {
    pts.iter().map(|p| c.smooth_point(p)).collect()
}

/// r(d e_0 - sum m_i e_i) = d [h] - sum m_i [p_i] in Pic^0 with origin o.
pub fn restriction_hom(c: &CubicCurveModel, pts: &[Point], cls: &LatticeVector) -> Result<RestrictionImage> {
    let n = pts.len();
    if cls.n() != n {
        return Err(Error::DimensionMismatch {
            left: n + 1,
            right: cls.dim(),
        });
    }
    if !pairing(cls, &canonical_unchecked(n)).is_zero() {
        return Err(Error::NotOrthogonal);
    }
    let pts = check_points(c, pts)?;
    Ok(c.image(restrict_unchecked(c, &pts, cls)?))
}

fn restrict_unchecked(c: &CubicCurveModel, pts: &[Point], cls: &LatticeVector) -> Result<Point> {
    let mut acc = c.mul(cls.degree(), &c.line_class()?)?;
    for (i, p) in pts.iter().enumerate() {
        let m = cls.coord(i + 1);
        if !m.is_zero() {
            // coefficient of e_i is -m_i, so this adds -m_i [p_i]
            acc = c.add(&acc, &c.mul(m, p)?)?;
        }
    }
    Ok(acc)
}

/// 3h - sum p_i has exact order m.
pub fn halphen_index_check(c: &CubicCurveModel, pts: &[Point], m: u64) -> Result<bool> {
    if pts.len() != 9 {
        return Err(Error::invalid(format!("need 9 points, got {}", pts.len())));
    }
    if m < 1 {
        return Err(Error::invalid("the index m must be at least 1"));
    }
    let minus_k = -canonical_unchecked(9);
    let rho = restriction_hom(c, pts, &minus_k)?;
    Ok(c.order(&rho.point)? == PointOrder::Finite(m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionReport {
    pub is_torsion: bool,
    /// Exponent of the image, when finite.
    pub m: Option<u64>,
    /// Orders of r(alpha_0), r(alpha_1), ...; stops at the first infinite one.
    pub generator_orders: Vec<PointOrder>,
}

fn generator_images(c: &CubicCurveModel, pts: &[Point]) -> Result<Vec<Point>> {
    let n = pts.len();
    crate::lattice::check_n(n)?;
    let roots = crate::lattice::simple_roots_unchecked(n);
    roots.iter().map(|r| restrict_unchecked(c, pts, r)).collect()
}

/// Whether r(E_n) is finite, and its exponent.
pub fn torsion_set_check(c: &CubicCurveModel, pts: &[Point]) -> Result<TorsionReport> {
    let pts = check_points(c, pts)?;
    let images = generator_images(c, &pts)?;
    let mut orders = Vec::with_capacity(images.len());
    let mut m: Option<u64> = Some(1);
    for im in &images {
        let o = c.order(im)?;
        match o {
            PointOrder::Finite(k) => m = m.map(|x| x.lcm(&k)),
            PointOrder::Infinite => {
                orders.push(o);
                m = None;
                break;
            }
            PointOrder::ExceedsCap => {
                return Err(Error::Inconclusive(format!(
                    "a generator image has order above the cap {ORDER_CAP}"
                )))
            }
        }
        orders.push(o);
    }
    Ok(TorsionReport {
        is_torsion: m.is_some(),
        m,
        generator_orders: orders,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelDescription {
    /// The kernel is p E_n.
    PKPerp,
    /// The kernel is larger; a root in it when one was found.
    Larger { root: Option<LatticeVector> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarbourneReport {
    pub is_harbourne: bool,
    /// F_p-rank of the generator images r(alpha_0), ..., r(alpha_{n-1}).
    pub rank: usize,
    pub n: usize,
    pub kernel: KernelDescription,
}

fn cusp_parameters(c: &CubicCurveModel, pts: &[Point]) -> Result<Vec<Fe>> {
    if c.singularity != SingularityType::Cuspidal {
        return Err(Error::invalid("a cuspidal cubic is required"));
    }
    if c.field().characteristic() == 0 {
        return Err(Error::invalid("positive characteristic is required"));
    }
    check_points(c, pts)?
        .iter()
        .map(|p| c.parameter(p).ok_or_else(|| Error::invalid("the cuspidal chart is unavailable")))
        .collect()
}

/// r(d e_0 - sum m_i e_i) = -sum m_i t_i on the cuspidal chart.
fn additive_image(f: &Field, ts: &[Fe], cls: &LatticeVector) -> Fe {
    ts.iter().enumerate().fold(f.zero(), |acc, (i, t)| {
        // e_i-coefficient is -m_i
        f.add(&acc, &f.mul(&f.from_bigint(cls.coord(i + 1)), t))
    })
}

/// S_r = p E_n exactly when the n generator images are F_p-independent in F_{p^e}.
pub fn harbourne_check(c: &CubicCurveModel, pts: &[Point]) -> Result<HarbourneReport> {
    let ts = cusp_parameters(c, pts)?;
    let n = ts.len();
    crate::lattice::check_n(n)?;
    let f = c.field();
    let fp = Field::new(f.characteristic(), 1)?;
    let roots = crate::lattice::simple_roots_unchecked(n);
    let rows: Vec<Vec<Fe>> = roots
        .iter()
        .map(|r| {
            f.coeffs(&additive_image(f, &ts, r))
                .unwrap()
                .iter()
                .map(|&x| Fe::P(x))
                .collect()
        })
        .collect();
    let rk = rank(&fp, &rows);
    if rk == n {
        return Ok(HarbourneReport {
            is_harbourne: true,
            rank: rk,
            n,
            kernel: KernelDescription::PKPerp,
        });
    }
    let root = kernel_root(n, f.characteristic(), &|cls: &LatticeVector| {
        Ok(f.is_zero(&additive_image(f, &ts, cls)))
    })?;
    Ok(HarbourneReport {
        is_harbourne: false,
        rank: rk,
        n,
        kernel: KernelDescription::Larger { root },
    })
}

const KERNEL_SEARCH_CAP: usize = 1 << 20;

/// A root in the kernel: catalog roots of low degree first, then the orbit of residues mod m.
/// Ok(None) means the orbit mod m was exhausted.
fn kernel_root(n: usize, m: u64, in_kernel: &dyn Fn(&LatticeVector) -> Result<bool>) -> Result<Option<LatticeVector>> {
    let max_degree = if n <= 10 { 4 } else { 3 };
    for r in enumerate_roots(n, max_degree)? {
        if in_kernel(&r)? {
            return Ok(Some(r));
        }
    }
    if m < 2 {
        return Ok(None);
    }
    let rr = RootResidues::new(n, m)?;
    let mut err = None;
    let hit = search_root_residues(
        &rr,
        None,
        KERNEL_SEARCH_CAP,
        &mut |x| match in_kernel(&rr.lift(x)) {
            Ok(b) => b,
            Err(e) => {
                err = Some(e);
                true
            }
        },
        &|| false,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(hit.map(|h| h.root(n)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnnodalCertificate {
    /// Kernel equals p E_n, which contains no vector of square -2.
    KernelIsPKPerp,
    /// Every root residue mod m in the orbit of the simple roots was tested.
    ExhaustedOrbit { modulus: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelVerdict {
    Unnodal(UnnodalCertificate),
    Nodal { witness: LatticeVector },
}

/// Look for a root whose restriction vanishes.
pub fn unnodal_by_kernel(c: &CubicCurveModel, pts: &[Point]) -> Result<KernelVerdict> {
    let pts = check_points(c, pts)?;
    let n = pts.len();
    let tor = torsion_set_check(c, &pts)?;
    let m = tor.m.ok_or_else(|| Error::invalid("the restriction image is infinite"))?;
    if c.singularity == SingularityType::Cuspidal && c.field().characteristic() > 0 && c.chart.is_some() {
        let h = harbourne_check(c, &pts)?;
        return Ok(match h.kernel {
            KernelDescription::PKPerp => KernelVerdict::Unnodal(UnnodalCertificate::KernelIsPKPerp),
            KernelDescription::Larger { root: Some(w) } => KernelVerdict::Nodal { witness: w },
            KernelDescription::Larger { root: None } => {
                KernelVerdict::Unnodal(UnnodalCertificate::ExhaustedOrbit { modulus: c.field().characteristic() })
            }
        });
    }
    let images = generator_images(c, &pts)?;
    let rr_coords = |cls: &LatticeVector| -> Result<bool> {
        let x = crate::lattice::to_root_coordinates(cls)?;
        let mut acc = c.origin.clone();
        for (xi, im) in x.iter().zip(&images) {
            let k = xi.mod_floor(&BigInt::from(m));
            if !k.is_zero() {
                acc = c.add(&acc, &c.mul(&k, im)?)?;
            }
        }
        Ok(acc == c.origin)
    };
    Ok(match kernel_root(n, m, &rr_coords)? {
        Some(w) => KernelVerdict::Nodal { witness: w },
        None => KernelVerdict::Unnodal(UnnodalCertificate::ExhaustedOrbit { modulus: m }),
    })
}

/// Integer value of a prime-field element, for reporting.
pub fn fe_to_u64(a: &Fe) -> Option<u64> {
    match a {
        Fe::P(x) => Some(*x),
        Fe::Q(q) if q.is_integer() => q.to_integer().to_u64(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Field {
        Field::new(p, 1).unwrap()
    }

    fn pt(f: &Field, c: [i64; 3]) -> Point {
        normalize_point(f, &[f.from_i64(c[0]), f.from_i64(c[1]), f.from_i64(c[2])]).unwrap()
    }

    #[test]
    fn classify_examples() {
        let q = Field::rationals();
        let cusp = classify_cubic(&TernaryCubic::weierstrass(q.clone(), [0, 0, 0, 0, 0]).unwrap()).unwrap();
        assert_eq!(cusp.singularity, SingularityType::Cuspidal);
        assert_eq!(cusp.singular_point, Some(pt(&q, [0, 0, 1])));
        let t = q.from_i64(5);
        let p = cusp.point_from_parameter(&t).unwrap();
        assert_eq!(p, pt(&q, [5, 1, 125]));
        assert_eq!(cusp.parameter(&p), Some(t));
        let node = classify_cubic(&TernaryCubic::weierstrass(q.clone(), [0, 1, 0, 0, 0]).unwrap()).unwrap();
        assert_eq!(node.singularity, SingularityType::Nodal);
        assert_eq!(node.group, GroupStructure::Multiplicative);
        assert!(node.chart.is_some());
        let ell = classify_cubic(&TernaryCubic::weierstrass(fp(7), [0, 0, 0, -1, 0]).unwrap()).unwrap();
        assert_eq!(ell.singularity, SingularityType::Smooth);
        assert_eq!(ell.origin, pt(&fp(7), [0, 1, 0]));
    }

    #[test]
    fn cuspidal_collinearity_is_additive() {
        let f = fp(101);
        let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [0, 0, 0, 0, 0]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let (a, b) = (f.random(&mut rng), f.random(&mut rng));
            let pa = c.point_from_parameter(&a).unwrap();
            let pb = c.point_from_parameter(&b).unwrap();
            let s = c.add(&pa, &pb).unwrap();
            assert_eq!(c.parameter(&s), Some(f.add(&a, &b)));
            // three points with t-sum 0 are collinear
            let r = c.point_from_parameter(&f.neg(&f.add(&a, &b))).unwrap();
            if pa != pb && pa != r && pb != r {
                assert!(crate::config::collinear(&f, &pa, &pb, &r));
            }
        }
    }

    #[test]
    fn nodal_collinearity_is_multiplicative() {
        let f = fp(101);
        let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [0, 1, 0, 0, 0]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let (a, b) = (f.random_nonzero(&mut rng), f.random_nonzero(&mut rng));
            let pa = c.point_from_parameter(&a).unwrap();
            let pb = c.point_from_parameter(&b).unwrap();
            assert!(c.contains(&pa));
            let s = c.add(&pa, &pb).unwrap();
            assert_eq!(c.parameter(&s), Some(f.mul(&a, &b)));
        }
    }

    #[test]
    fn group_axioms_on_smooth_cubic() {
        let f = fp(101);
        let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [1, 2, 3, 4, 5]).unwrap()).unwrap();
        assert_eq!(c.singularity, SingularityType::Smooth);
        let pts = c.smooth_points().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = &pts[rng.gen_range(0..pts.len())];
            let b = &pts[rng.gen_range(0..pts.len())];
            let d = &pts[rng.gen_range(0..pts.len())];
            let ab = c.add(a, b).unwrap();
            assert_eq!(ab, c.add(b, a).unwrap());
            assert_eq!(c.add(&ab, d).unwrap(), c.add(a, &c.add(b, d).unwrap()).unwrap());
            assert_eq!(c.add(&c.origin, a).unwrap(), *a);
            assert_eq!(c.add(a, &c.neg(a).unwrap()).unwrap(), c.origin);
        }
        let n = pts.len() as i64;
        for p in pts.iter().take(10) {
            assert_eq!(c.mul(&BigInt::from(n), p).unwrap(), c.origin);
        }
    }

    #[test]
    fn general_cubic_over_small_field() {
        // x^3 + y^3 + z^3 over F_7 moved by a projective change
        let f = fp(7);
        let fermat = TernaryCubic::from_terms(f.clone(), &[([3, 0, 0], 1), ([0, 3, 0], 1), ([0, 0, 3], 1)]).unwrap();
        let c = classify_cubic(&fermat).unwrap();
        assert_eq!(c.singularity, SingularityType::Smooth);
        assert!(c.origin_is_flex);
        let pts = c.smooth_points().unwrap();
        for a in &pts {
            for b in &pts {
                let s = c.add(a, b).unwrap();
                assert!(c.contains(&s));
                assert_eq!(s, c.add(b, a).unwrap());
            }
        }
        // a nodal cubic in general position: xyz = x^3 + y^3 over F_11
        let f = fp(11);
        let nod = TernaryCubic::from_terms(f, &[([1, 1, 1], 1), ([3, 0, 0], -1), ([0, 3, 0], -1)]).unwrap();
        let c = classify_cubic(&nod).unwrap();
        assert_eq!(c.singularity, SingularityType::Nodal);
        assert_eq!(c.singular_point, Some(pt(c.field(), [0, 0, 1])));
        // reducible: a line times a conic
        let f = fp(7);
        let red = TernaryCubic::from_terms(f, &[([1, 2, 0], 1), ([1, 0, 2], -1), ([3, 0, 0], 1)]).unwrap();
        assert!(classify_cubic(&red).is_err());
    }

    #[test]
    fn char_two_and_three_weierstrass() {
        let f = Field::new(2, 4).unwrap();
        let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [0, 0, 0, 1, 0]).unwrap()).unwrap();
        assert_eq!(c.singularity, SingularityType::Cuspidal);
        assert!(c.is_smooth_point(&c.point_from_parameter(&f.one()).unwrap()));
        let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [1, 0, 0, 0, 1]).unwrap()).unwrap();
        assert_eq!(c.singularity, SingularityType::Smooth);
        let f3 = Field::new(3, 2).unwrap();
        let c = classify_cubic(&TernaryCubic::weierstrass(f3.clone(), [0, 0, 0, 0, 1]).unwrap()).unwrap();
        assert_eq!(c.singularity, SingularityType::Cuspidal);
        let sp = c.singular_point.clone().unwrap();
        assert_eq!(sp, pt(&f3, [-1, 0, 1]));
    }

    #[test]
    fn restriction_examples() {
        let f = fp(101);
        let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [0, 0, 0, 0, 0]).unwrap()).unwrap();
        let ts: Vec<Fe> = (1..=10).map(|k| f.from_i64(k * k + 3)).collect();
        let pts: Vec<Point> = ts.iter().map(|t| c.point_from_parameter(t).unwrap()).collect();
        let e12 = LatticeVector::from_i64s(&[0, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let r = restriction_hom(&c, &pts, &e12).unwrap();
        assert_eq!(r.parameter, Some(f.sub(&ts[0], &ts[1])));
        let a0 = LatticeVector::from_i64s(&[1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0]);
        let r = restriction_hom(&c, &pts, &a0).unwrap();
        assert_eq!(r.parameter, Some(f.neg(&f.add(&f.add(&ts[0], &ts[1]), &ts[2]))));
        assert!(matches!(
            restriction_hom(&c, &pts, &LatticeVector::from_i64s(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0])),
            Err(Error::NotOrthogonal)
        ));
        // additivity
        let u = LatticeVector::from_i64s(&[3, -2, -1, -1, -1, -1, -1, -1, -1, 0, 0]);
        let sum = &u + &a0;
        let ru = restriction_hom(&c, &pts, &u).unwrap();
        let ra = restriction_hom(&c, &pts, &a0).unwrap();
        let rs = restriction_hom(&c, &pts, &sum).unwrap();
        assert_eq!(rs.point, c.add(&ru.point, &ra.point).unwrap());
    }

    #[test]
    fn halphen_index_on_smooth_cubic() {
        // y^2 = x^3 - x over F_101 has the 2-torsion point (0:0:1)
        let f = fp(101);
        let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [0, 0, 0, -1, 0]).unwrap()).unwrap();
        let t2 = pt(&f, [0, 0, 1]);
        assert_eq!(c.order(&t2).unwrap(), PointOrder::Finite(2));
        let all = c.smooth_points().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut pts: Vec<Point> = (0..8).map(|_| all[rng.gen_range(0..all.len())].clone()).collect();
        let mut s = c.origin.clone();
        for p in &pts {
            s = c.add(&s, p).unwrap();
        }
        pts.push(c.sub(&t2, &s).unwrap());
        assert!(halphen_index_check(&c, &pts, 2).unwrap());
        assert!(!halphen_index_check(&c, &pts, 1).unwrap());
    }

    #[test]
    fn cuspidal_over_rationals_is_torsion_free() {
        let q = Field::rationals();
        let c = classify_cubic(&TernaryCubic::weierstrass(q.clone(), [0, 0, 0, 0, 0]).unwrap()).unwrap();
        let p = c.point_from_parameter(&q.from_i64(2)).unwrap();
        assert_eq!(c.order(&p).unwrap(), PointOrder::Infinite);
        let f5 = fp(5);
        let c5 = classify_cubic(&TernaryCubic::weierstrass(f5.clone(), [0, 0, 0, 0, 0]).unwrap()).unwrap();
        let ts: Vec<Point> = (0..10).map(|k| c5.point_from_parameter(&f5.from_i64(k % 5 + 1)).unwrap()).collect();
        let rep = torsion_set_check(&c5, &ts).unwrap();
        assert!(rep.is_torsion);
        assert_eq!(rep.m, Some(5));
    }

    #[test]
    fn torsion_fails_for_generic_rational_points() {
        // y^2 = x^3 - 2 has the point (3, 5) of infinite order
        let q = Field::rationals();
        let c = classify_cubic(&TernaryCubic::weierstrass(q.clone(), [0, 0, 0, 0, -2]).unwrap()).unwrap();
        let p = pt(&q, [3, 5, 1]);
        assert_eq!(c.order(&p).unwrap(), PointOrder::Infinite);
        let minus = c.neg(&p).unwrap();
        let pts: Vec<Point> = (0..10).map(|i| if i % 3 == 0 { p.clone() } else { minus.clone() }).collect();
        let rep = torsion_set_check(&c, &pts).unwrap();
        assert!(!rep.is_torsion);
        assert!(unnodal_by_kernel(&c, &pts).is_err());
    }

    #[test]
    fn harbourne_over_f5_12() {
        let f = Field::new(5, 12).unwrap();
        let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [0, 0, 0, 0, 0]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ts: Vec<Fe> = (0..10).map(|_| f.random(&mut rng)).collect();
        let pts: Vec<Point> = ts.iter().map(|t| c.point_from_parameter(t).unwrap()).collect();
        let h = harbourne_check(&c, &pts).unwrap();
        assert_eq!(h.rank, 10);
        assert!(h.is_harbourne);
        assert_eq!(unnodal_by_kernel(&c, &pts).unwrap(), KernelVerdict::Unnodal(UnnodalCertificate::KernelIsPKPerp));
        let mut bad = pts.clone();
        bad[1] = bad[0].clone();
        bad[1] = c.point_from_parameter(&ts[0]).unwrap();
        let h = harbourne_check(&c, &bad).unwrap();
        assert!(!h.is_harbourne);
        assert_eq!(
            h.kernel,
            KernelDescription::Larger {
                root: Some(LatticeVector::from_i64s(&[0, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0]))
            }
        );
    }

    #[test]
    fn kernel_roots_on_smooth_cubic() {
        let f = fp(101);
        let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [0, 0, 0, -1, 0]).unwrap()).unwrap();
        let all = c.smooth_points().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut pts: Vec<Point> = Vec::new();
        while pts.len() < 10 {
            let p = all[rng.gen_range(0..all.len())].clone();
            if !pts.contains(&p) && p != c.origin {
                pts.push(p);
            }
        }
        // three collinear points on the cubic: p_3 = -(p_1 + p_2)
        let mut col = pts.clone();
        col[2] = c.neg(&c.add(&col[0], &col[1]).unwrap()).unwrap();
        match unnodal_by_kernel(&c, &col).unwrap() {
            KernelVerdict::Nodal { witness } => {
                assert!(f.is_zero(&f.zero()));
                let r = restriction_hom(&c, &col, &witness).unwrap();
                assert_eq!(r.point, c.origin);
            }
            other => panic!("expected a nodal verdict, got {other:?}"),
        }
    }
}
