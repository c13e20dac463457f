//! The quadratic module L_m = E_10 / m E_10: unit representation, reflections, Witt extension,
//! spinor norms and the search for a root whose residue lies in a given submodule.
//!
//! Residue vectors are coordinates on the simple roots alpha_0..alpha_9, reduced mod m.

use std::collections::HashMap;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::gram_i64;
use crate::error::{Error, Result};
use crate::intlin::smith_invariants;
use crate::lattice::{from_root_coordinates, simple_roots_unchecked, to_root_coordinates, LatticeVector};
use crate::orbit::{search_root_residues, RootResidues, DEFAULT_VISITED_CAP};
use crate::weyl::WeylWord;

pub const RANK: usize = 10;
/// Word-length budget for lifting a residue target to a root.
pub const DEFAULT_LIFT_LENGTH: usize = 24;
const CONNECTOR_TRIES: usize = 4096;
const BASE_TRIES: usize = 20_000;

pub fn factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

fn is_unit(a: u64, m: u64) -> bool {
    a.gcd(&m) == 1
}

/// (p, k) when m = p^k.
fn prime_power(m: u64) -> Option<(u64, u32)> {
    match factor(m).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueModule {
    m: u64,
    gram: Vec<Vec<i64>>,
}

impl ResidueModule {
    pub fn new(m: u64) -> Result<Self> {
        if !(2..=1 << 31).contains(&m) {
            return Err(Error::invalid(format!("modulus {m} is outside 2..=2^31")));
        }
        Ok(ResidueModule { m, gram: gram_i64(RANK) })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn rank(&self) -> usize {
        RANK
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<u64> {
        x.iter().map(|&c| (c as i128).rem_euclid(self.m as i128) as u64).collect()
    }

    pub fn b(&self, x: &[u64], y: &[u64]) -> u64 {
        let m = self.m as i128;
        let mut s: i128 = 0;
        for i in 0..RANK {
            if x[i] == 0 {
                continue;
            }
            let row: i128 = (0..RANK).map(|j| self.gram[i][j] as i128 * y[j] as i128).sum::<i128>() % m;
            s = (s + x[i] as i128 * row) % m;
        }
        s.rem_euclid(m) as u64
    }

    /// q(x) = (1/2) x^T G x, halved over Z before reduction.
    pub fn q(&self, x: &[u64]) -> u64 {
        let m = self.m as i128;
        let mut s: i128 = 0;
        for i in 0..RANK {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i128;
            s = (s + (self.gram[i][i] / 2) as i128 * xi % m * xi) % m;
            for j in i + 1..RANK {
                s = (s + self.gram[i][j] as i128 * xi % m * x[j] as i128) % m;
            }
        }
        s.rem_euclid(m) as u64
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| (a + b) % self.m).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| (a + self.m - b) % self.m).collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().map(|a| (self.m - a) % self.m).collect()
    }

    pub fn scale(&self, c: u64, x: &[u64]) -> Vec<u64> {
        x.iter().map(|a| ((c as u128 * *a as u128) % self.m as u128) as u64).collect()
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    pub fn of_vector(&self, v: &LatticeVector) -> Result<Vec<u64>> {
        if v.n() != RANK {
            return Err(Error::DimensionMismatch {
                left: RANK + 1,
                right: v.dim(),
            });
        }
        let m = num_bigint::BigInt::from(self.m);
        Ok(to_root_coordinates(v)?
            .iter()
            .map(|c| {
                use num_traits::ToPrimitive;
                c.mod_floor(&m).to_u64().unwrap()
            })
            .collect())
    }

    pub fn lift(&self, x: &[u64]) -> LatticeVector {
        let c: Vec<num_bigint::BigInt> = x.iter().map(|&v| v.into()).collect();
        from_root_coordinates(RANK, &c).expect("rank 10")
    }

    pub fn simple_root(&self, j: usize) -> Vec<u64> {
        let mut x = vec![0; RANK];
        x[j] = 1;
        x
    }

    /// The same module over a divisor of the modulus.
    pub fn over(&self, d: u64) -> Result<ResidueModule> {
        if self.m % d != 0 {
            return Err(Error::invalid(format!("{d} does not divide {}", self.m)));
        }
        ResidueModule::new(d)
    }

    fn check(&self, x: &[u64]) -> Result<()> {
        if x.len() != RANK {
            return Err(Error::DimensionMismatch {
                left: RANK,
                right: x.len(),
            });
        }
        if x.iter().any(|&a| a >= self.m) {
            return Err(Error::invalid(format!("residue entries must lie in 0..{}", self.m)));
        }
        Ok(())
    }
}

/// Row echelon form over Z/m with annihilator rows added (Howell form), for membership tests.
fn howell(m: u64, gens: &[Vec<u64>]) -> Vec<(usize, Vec<u64>)> {
    let mi = m as i128;
    let red = |r: Vec<i128>| -> Vec<i128> { r.into_iter().map(|x| x.rem_euclid(mi)).collect() };
    let mut rows: Vec<Vec<i128>> = gens.iter().map(|g| g.iter().map(|&x| x as i128).collect()).collect();
    let mut piv = Vec::new();
    for c in 0..RANK {
        let mut pivot: Option<Vec<i128>> = None;
        let mut rest = Vec::new();
        for r in rows.drain(..) {
            if r[c] == 0 {
                rest.push(r);
                continue;
            }
            pivot = Some(match pivot {
                None => r,
                Some(p) => {
                    let e = p[c].extended_gcd(&r[c]);
                    let g = e.gcd;
                    let np: Vec<i128> = (0..RANK).map(|j| e.x * p[j] + e.y * r[j]).collect();
                    let nr: Vec<i128> = (0..RANK).map(|j| (r[c] / g) * p[j] - (p[c] / g) * r[j]).collect();
                    rest.push(red(nr));
                    red(np)
                }
            });
        }
        if let Some(p) = pivot {
            let g = p[c].gcd(&mi);
            // unit u with u p[c] = g mod m
            let s = p[c].extended_gcd(&mi).x.rem_euclid(mi);
            let step = mi / g;
            let u = (0..)
                .map(|k| (s + k * step).rem_euclid(mi))
                .find(|u| u.gcd(&mi) == 1)
                .unwrap();
            let p = red(p.iter().map(|x| x * u).collect());
            if g != 1 {
                rest.push(red(p.iter().map(|x| x * step).collect()));
            }
            piv.push((c, p.iter().map(|&x| x as u64).collect()));
        }
        rows = rest.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    }
    piv
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSubmodule {
    module: ResidueModule,
    gens: Vec<Vec<u64>>,
    echelon: Vec<(usize, Vec<u64>)>,
}

impl ResidueSubmodule {
    pub fn new(module: ResidueModule, gens: Vec<Vec<u64>>) -> Result<Self> {
        for g in &gens {
            module.check(g)?;
        }
        let echelon = howell(module.m, &gens);
        Ok(ResidueSubmodule { module, gens, echelon })
    }

    pub fn full(module: ResidueModule) -> Self {
        let gens = (0..RANK).map(|j| module.simple_root(j)).collect();
        ResidueSubmodule::new(module, gens).expect("unit vectors")
    }

    /// Span of the residues of the given simple roots.
    pub fn simple_span(module: ResidueModule, idx: &[usize]) -> Result<Self> {
        if let Some(&j) = idx.iter().find(|&&j| j >= RANK) {
            return Err(Error::InvalidLetter { letter: j, n: RANK });
        }
        let gens = idx.iter().map(|&j| module.simple_root(j)).collect();
        ResidueSubmodule::new(module, gens)
    }

    /// Span of `count` uniformly random residue vectors.
    pub fn random<R: Rng + ?Sized>(module: ResidueModule, count: usize, rng: &mut R) -> Self {
        let gens = (0..count)
            .map(|_| (0..RANK).map(|_| rng.gen_range(0..module.m)).collect())
            .collect();
        ResidueSubmodule::new(module, gens).expect("reduced entries")
    }

    pub fn module(&self) -> &ResidueModule {
        &self.module
    }

    pub fn modulus(&self) -> u64 {
        self.module.m
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.gens
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        let m = self.module.m;
        let mut x: Vec<u64> = x.iter().map(|a| a % m).collect();
        let mut next = self.echelon.iter().peekable();
        for c in 0..RANK {
            match next.peek() {
                Some((pc, row)) if *pc == c => {
                    if x[c] % row[c] != 0 {
                        return false;
                    }
                    let t = x[c] / row[c];
                    for j in c..RANK {
                        x[j] = ((x[j] as u128 + (m - t) as u128 * row[j] as u128) % m as u128) as u64;
                    }
                    next.next();
                }
                _ => {
                    if x[c] != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Invariant factors of the preimage V + m Z^10 in Z^10.
    pub fn smith_invariants(&self) -> Vec<i128> {
        let m = self.module.m as i128;
        let mut rows: Vec<Vec<i128>> = self.gens.iter().map(|g| g.iter().map(|&x| x as i128).collect()).collect();
        for i in 0..RANK {
            let mut r = vec![0; RANK];
            r[i] = m;
            rows.push(r);
        }
        smith_invariants(&rows)
    }

    /// Largest r with (Z/m)^r embedded in V: the minimum over p | m of the number of
    /// invariant factors prime to p.
    pub fn free_rank(&self) -> usize {
        let d = self.smith_invariants();
        factor(self.module.m)
            .iter()
            .map(|&(p, _)| d.iter().filter(|&&x| x % p as i128 != 0).count())
            .min()
            .unwrap_or(RANK)
    }

    pub fn reduce_to(&self, d: u64) -> Result<ResidueSubmodule> {
        let module = self.module.over(d)?;
        let gens = self.gens.iter().map(|g| g.iter().map(|x| x % d).collect()).collect();
        ResidueSubmodule::new(module, gens)
    }

    /// Generators whose reductions mod p are independent; they span a free summand of
    /// maximal rank. Prime-power moduli only.
    pub fn free_basis(&self) -> Result<Vec<Vec<u64>>> {
        let (p, _) = prime_power(self.module.m)
            .ok_or_else(|| Error::invalid("a free basis needs a prime-power modulus"))?;
        let mut reduced: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut basis = Vec::new();
        for g in &self.gens {
            let mut v: Vec<u64> = g.iter().map(|x| x % p).collect();
            for (c, r) in &reduced {
                if v[*c] != 0 {
                    let t = v[*c];
                    for j in 0..RANK {
                        v[j] = (v[j] + (p - t) * r[j]) % p;
                    }
                }
            }
            if let Some(c) = v.iter().position(|&x| x != 0) {
                let inv = inv_mod(v[c], p).unwrap();
                let v: Vec<u64> = v.iter().map(|x| x * inv % p).collect();
                for (_, r) in reduced.iter_mut() {
                    if r[c] != 0 {
                        let t = r[c];
                        for j in 0..RANK {
                            r[j] = (r[j] + (p - t) * v[j]) % p;
                        }
                    }
                }
                reduced.push((c, v));
                basis.push(g.clone());
            }
        }
        Ok(basis)
    }
}

/// v in M with q(v) = a, for a unit a mod p^k: a base solution mod p, then Hensel steps
/// v + t p^j w along a companion w with b(v, w) a unit.
pub fn represent_unit(sub: &ResidueSubmodule, a: u64) -> Result<Vec<u64>> {
    represent_unit_seeded(sub, a, None)
}

/// With a seed, the base solution is drawn at random instead of preferring basis vectors.
fn represent_unit_seeded(sub: &ResidueSubmodule, a: u64, seed: Option<u64>) -> Result<Vec<u64>> {
    let l = &sub.module;
    let m = l.m;
    let (p, k) = prime_power(m).ok_or_else(|| Error::invalid("represent_unit needs a prime-power modulus"))?;
    let a = a % m;
    if !is_unit(a, p) {
        return Err(Error::invalid(format!("{a} is not a unit mod {m}")));
    }
    let basis = sub.free_basis()?;
    if basis.len() < 2 {
        return Err(Error::invalid(format!("free rank {} is too small to represent units", basis.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.map_or(a, |x| x.wrapping_mul(0x9e37_79b9) ^ a));
    let units = if seed.is_some() { 0 } else { basis.len() };
    let combine = |c: &[u64]| -> Vec<u64> {
        c.iter()
            .zip(&basis)
            .fold(vec![0; RANK], |acc, (&ci, bi)| l.add(&acc, &l.scale(ci, bi)))
    };
    let mut found = None;
    for attempt in 0..BASE_TRIES {
        // unit vectors first, then random combinations
        let c: Vec<u64> = if attempt < units {
            (0..basis.len()).map(|i| u64::from(i == attempt)).collect()
        } else {
            (0..basis.len()).map(|_| rng.gen_range(0..p)).collect()
        };
        let v = combine(&c);
        if l.q(&v) % p != a % p {
            continue;
        }
        if let Some(w) = basis.iter().find(|w| l.b(&v, w) % p != 0) {
            found = Some((v, w.clone()));
            break;
        }
    }
    let (mut v, w) = found.ok_or_else(|| Error::Inconclusive(format!("no base solution of q(v) = {a} mod {p}")))?;
    let beta_inv = inv_mod(l.b(&v, &w) % p, p).unwrap();
    let mut pj = 1u64;
    for _ in 1..k {
        pj *= p;
        let delta = (a + m - l.q(&v)) % m;
        debug_assert_eq!(delta % pj, 0);
        let t = (delta / pj) % p * beta_inv % p;
        v = l.add(&v, &l.scale(t * pj % m, &w));
    }
    debug_assert_eq!(l.q(&v), a);
    Ok(v)
}

/// s_h(x) = x - b(x, h) q(h)^{-1} h.
pub fn apply_reflection(l: &ResidueModule, h: &[u64], x: &[u64]) -> Result<Vec<u64>> {
    let qi = inv_mod(l.q(h), l.m).ok_or_else(|| Error::invalid("q(h) is not a unit"))?;
    let c = (l.b(x, h) as u128 * qi as u128 % l.m as u128) as u64;
    Ok(l.sub(x, &l.scale(c, h)))
}

/// Reflections applied in list order: the first vector's reflection acts first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionProduct {
    module: ResidueModule,
    hs: Vec<Vec<u64>>,
}

impl ReflectionProduct {
    pub fn new(module: ResidueModule) -> Self {
        ReflectionProduct { module, hs: Vec::new() }
    }

    pub fn from_vectors(module: ResidueModule, hs: Vec<Vec<u64>>) -> Result<Self> {
        let mut p = ReflectionProduct::new(module);
        for h in hs {
            p.push(h)?;
        }
        Ok(p)
    }

    pub fn module(&self) -> &ResidueModule {
        &self.module
    }

    pub fn vectors(&self) -> &[Vec<u64>] {
        &self.hs
    }

    pub fn len(&self) -> usize {
        self.hs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hs.is_empty()
    }

    /// Compose with s_h on the left.
    pub fn push(&mut self, h: Vec<u64>) -> Result<()> {
        self.module.check(&h)?;
        if !is_unit(self.module.q(&h), self.module.m) {
            return Err(Error::invalid("reflection vector with non-unit q(h)"));
        }
        self.hs.push(h);
        Ok(())
    }

    /// `other` after `self`.
    pub fn then(&self, other: &ReflectionProduct) -> ReflectionProduct {
        let mut hs = self.hs.clone();
        hs.extend(other.hs.iter().cloned());
        ReflectionProduct {
            module: self.module.clone(),
            hs,
        }
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.hs.iter().fold(x.to_vec(), |acc, h| {
            apply_reflection(&self.module, h, &acc).expect("unit norms checked on push")
        })
    }
}

/// Solutions z of b(g, z) = 0 for all given g; the g must be independent mod p.
fn orthogonal_complement(l: &ResidueModule, gs: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let m = l.m;
    let mut rows: Vec<Vec<u64>> = gs
        .iter()
        .map(|g| (0..RANK).map(|j| l.b(g, &l.simple_root(j))).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    for r in 0..rows.len() {
        let c = (0..RANK)
            .find(|&c| !pivots.contains(&c) && is_unit(rows[r][c], m))
            .ok_or_else(|| Error::invalid("the matched vectors are not independent mod p"))?;
        let inv = inv_mod(rows[r][c], m).unwrap();
        rows[r] = l.scale(inv, &rows[r]);
        for o in 0..rows.len() {
            if o != r && rows[o][c] != 0 {
                let t = rows[o][c];
                rows[o] = l.sub(&rows[o], &l.scale(t, &rows[r]));
            }
        }
        pivots.push(c);
    }
    Ok((0..RANK)
        .filter(|c| !pivots.contains(c))
        .map(|c| {
            let mut z = vec![0; RANK];
            z[c] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                z[pc] = (m - rows[r][c]) % m;
            }
            z
        })
        .collect())
}

/// A product of reflections carrying f_i to g_i for every i, built one pair at a time with
/// reflections in the orthogonal complement of the pairs already matched.
pub fn witt_extend(f_basis: &[Vec<u64>], g_basis: &[Vec<u64>], l: &ResidueModule) -> Result<ReflectionProduct> {
    let m = l.m;
    if prime_power(m).is_none() {
        return Err(Error::invalid("witt_extend needs a prime-power modulus"));
    }
    if f_basis.len() != g_basis.len() {
        return Err(Error::DimensionMismatch {
            left: f_basis.len(),
            right: g_basis.len(),
        });
    }
    for v in f_basis.iter().chain(g_basis) {
        l.check(v)?;
    }
    for i in 0..f_basis.len() {
        for j in i..f_basis.len() {
            if l.b(&f_basis[i], &f_basis[j]) != l.b(&g_basis[i], &g_basis[j]) || l.q(&f_basis[i]) != l.q(&g_basis[i]) {
                return Err(Error::invalid("the basis map is not an isometry"));
            }
        }
    }
    let mut prod = ReflectionProduct::new(l.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(m);
    for i in 0..f_basis.len() {
        let f = prod.apply(&f_basis[i]);
        let g = &g_basis[i];
        if &f == g {
            continue;
        }
        let diff = l.sub(&f, g);
        if is_unit(l.q(&diff), m) {
            prod.push(diff)?;
            continue;
        }
        let sum = l.add(&f, g);
        if is_unit(l.q(&sum), m) && is_unit(l.q(g), m) && g_basis[..i].iter().all(|e| l.b(e, g) == 0) {
            prod.push(sum)?;
            prod.push(g.clone())?;
            continue;
        }
        // connector: y = f + t u with q(y) = q(f), u orthogonal to the matched g_j
        let comp = orthogonal_complement(l, &g_basis[..i])?;
        let mut done = false;
        for _ in 0..CONNECTOR_TRIES {
            let u = comp
                .iter()
                .fold(vec![0; RANK], |acc, c| l.add(&acc, &l.scale(rng.gen_range(0..m), c)));
            let (qu, bu) = (l.q(&u), l.b(&f, &u));
            if !is_unit(qu, m) || !is_unit(bu, m) {
                continue;
            }
            let t = (m - (bu as u128 * inv_mod(qu, m).unwrap() as u128 % m as u128) as u64) % m;
            let y = l.add(&f, &l.scale(t, &u));
            let h2 = l.sub(&y, g);
            if l.q(&y) == l.q(&f) && is_unit(l.q(&h2), m) {
                prod.push(u)?;
                prod.push(h2)?;
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::domain(format!("no unit-norm connector found for pair {i}")));
        }
    }
    for (f, g) in f_basis.iter().zip(g_basis) {
        if &prod.apply(f) != g {
            return Err(Error::domain("Witt extension failed verification"));
        }
    }
    Ok(prod)
}

/// Square class of a unit mod p^k, by its canonical representative: 1 or the least
/// non-residue for odd p; the unit mod 8 (k >= 3), mod 4 (k = 2) or 1 (k = 1) for p = 2.
pub fn square_class(a: u64, p: u64, k: u32) -> u64 {
    if p == 2 {
        return match k {
            1 => 1,
            2 => a % 4,
            _ => a % 8,
        };
    }
    let legendre = |x: u64| {
        let mut r = 1u128;
        let mut b = (x % p) as u128;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u128;
            }
            b = b * b % p as u128;
            e >>= 1;
        }
        r == 1
    };
    if legendre(a) {
        1
    } else {
        (2..p).find(|&x| !legendre(x)).unwrap()
    }
}

/// Square classes of a unit mod m, one per prime power of m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpinorNorm {
    pub modulus: u64,
    /// (p, k, representative)
    pub classes: Vec<(u64, u32, u64)>,
}

impl SpinorNorm {
    pub fn of_unit(a: u64, m: u64) -> SpinorNorm {
        SpinorNorm {
            modulus: m,
            classes: factor(m)
                .into_iter()
                .map(|(p, k)| (p, k, square_class(a % p.pow(k), p, k)))
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.classes.iter().all(|c| c.2 == 1)
    }

    pub fn mul(&self, other: &SpinorNorm) -> SpinorNorm {
        SpinorNorm {
            modulus: self.modulus,
            classes: self
                .classes
                .iter()
                .zip(&other.classes)
                .map(|(&(p, k, a), &(_, _, b))| (p, k, square_class(a * b % p.pow(k), p, k)))
                .collect(),
        }
    }
}

pub fn spinor_norm(prod: &ReflectionProduct) -> SpinorNorm {
    let m = prod.module.m;
    let u = prod
        .hs
        .iter()
        .fold(1u128, |acc, h| acc * prod.module.q(h) as u128 % m as u128) as u64;
    SpinorNorm::of_unit(u % m, m)
}

/// Even length and trivial spinor norm.
pub fn is_spin(prod: &ReflectionProduct) -> bool {
    prod.len() % 2 == 0 && spinor_norm(prod).is_trivial()
}

/// Append one or two reflections in vectors of M0 so the product becomes spin.
pub fn adjust_to_spin(prod: &ReflectionProduct, m0: &ResidueSubmodule) -> Result<ReflectionProduct> {
    let m = prod.module.m;
    if m0.modulus() != m {
        return Err(Error::invalid("M0 and the product live over different moduli"));
    }
    let (p, k) = prime_power(m).ok_or_else(|| Error::invalid("adjust_to_spin needs a prime-power modulus"))?;
    let sn = spinor_norm(prod);
    let rep = sn.classes[0].2;
    let mut out = prod.clone();
    if prod.len() % 2 == 1 {
        out.push(represent_unit(m0, rep)?)?;
    } else if !sn.is_trivial() {
        out.push(represent_unit(m0, 1)?)?;
        out.push(represent_unit(m0, rep)?)?;
    }
    debug_assert!(is_spin(&out), "p = {p}, k = {k}");
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Theory,
    OrbitBfs,
}

impl SearchMethod {
    pub fn name(self) -> &'static str {
        match self {
            SearchMethod::Theory => "theory",
            SearchMethod::OrbitBfs => "bfs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Longest lifting word for the Theory method.
    pub max_length: usize,
    /// Depth bound for the orbit search; None runs to exhaustion.
    pub max_depth: Option<usize>,
    pub visited_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_length: DEFAULT_LIFT_LENGTH,
            max_depth: None,
            visited_cap: DEFAULT_VISITED_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootCertificate {
    pub method: String,
    /// root = word(alpha_1)
    pub word: WeylWord,
    pub root: LatticeVector,
    pub residue: Vec<u64>,
    pub modulus: u64,
}

impl RootCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    /// root^2 = -2, root . k_10 = 0, word(alpha_1) = root and residue membership in V.
    pub fn verify(&self, v: &ResidueSubmodule) -> bool {
        let l = v.module();
        let a1 = simple_roots_unchecked(RANK).swap_remove(1);
        crate::lattice::is_root(&self.root)
            && self.word.apply(&a1).map_or(false, |r| r == self.root || r == -self.root.clone())
            && l.of_vector(&self.root).map_or(false, |x| x == self.residue)
            && v.contains(&self.residue)
    }
}

/// A root of E_10 whose residue mod m lies in V.
pub fn find_root_in_submodule(v: &ResidueSubmodule, method: SearchMethod, budget: SearchBudget) -> Result<RootCertificate> {
    let rank = v.free_rank();
    if rank < 8 {
        return Err(Error::invalid(format!("the submodule has free rank {rank} < 8")));
    }
    let l = v.module();
    let m = l.m;
    let a1 = simple_roots_unchecked(RANK).swap_remove(1);
    let rr = RootResidues::new(RANK, m)?;
    let (word, root) = match method {
        SearchMethod::OrbitBfs => {
            let hit = search_root_residues(&rr, budget.max_depth, budget.visited_cap, &mut |x| v.contains(x), &|| false)?
                .ok_or_else(|| Error::Inconclusive("orbit exhausted without a residue in V".into()))?;
            let root = hit.root(RANK);
            (hit.word, root)
        }
        SearchMethod::Theory => {
            let s = l.simple_root(1);
            // (residue, reached by the negated root)
            let mut targets: Vec<(Vec<u64>, bool)> = Vec::new();
            for t in theory_targets(v, THEORY_TARGETS_PER_PRIME)? {
                for (x, neg) in [(l.neg(&t), true), (t, false)] {
                    if !targets.iter().any(|(y, _)| *y == x) {
                        targets.push((x, neg));
                    }
                }
            }
            let residues: Vec<Vec<u64>> = targets.iter().map(|t| t.0.clone()).collect();
            let (word, which) = bidirectional_search(&rr, &s, &residues, budget.max_length, budget.visited_cap)?;
            let root = word.apply(&a1)?;
            (word, if targets[which].1 { -root } else { root })
        }
    };
    let residue = l.of_vector(&root)?;
    if !v.contains(&residue) {
        return Err(Error::domain("search returned a residue outside V"));
    }
    Ok(RootCertificate {
        method: method.name().into(),
        word,
        root,
        residue,
        modulus: m,
    })
}

/// Targets per prime power tried by the Theory method; their CRT combinations all lie in V.
const THEORY_TARGETS_PER_PRIME: usize = 24;

/// Per prime power: a q = -1 vector of a free rank-8 M0 in V, reached from alpha_1 by a spin
/// product of reflections; combined by CRT.
pub fn theory_target(v: &ResidueSubmodule) -> Result<Vec<u64>> {
    Ok(theory_targets(v, 1)?.swap_remove(0))
}

/// Up to `per_prime` distinct targets for each prime power, combined in all ways by CRT.
pub fn theory_targets(v: &ResidueSubmodule, per_prime: usize) -> Result<Vec<Vec<u64>>> {
    let m = v.modulus();
    let mut acc: Vec<Vec<u64>> = vec![vec![0u64; RANK]];
    let mut acc_mod = 1u64;
    for (p, k) in factor(m) {
        let q = p.pow(k);
        let vq = v.reduce_to(q)?;
        let mut basis = vq.free_basis()?;
        if basis.len() < 8 {
            return Err(Error::invalid(format!("free rank {} < 8 mod {q}", basis.len())));
        }
        basis.truncate(8);
        let lq = vq.module().clone();
        let m0 = ResidueSubmodule::new(lq.clone(), basis)?;
        let s = lq.simple_root(1);
        let mut local: Vec<Vec<u64>> = Vec::new();
        for i in 0..per_prime {
            let target = represent_unit_seeded(&m0, q - 1, (i > 0).then_some(i as u64))?;
            let prod = witt_extend(&[s.clone()], &[target], &lq)?;
            let prod = adjust_to_spin(&prod, &m0)?;
            let t = prod.apply(&s);
            debug_assert!(m0.contains(&t));
            if !local.contains(&t) {
                local.push(t);
            }
        }
        // CRT: x = a mod acc_mod, x = t mod q
        let inv = inv_mod(acc_mod % q, q).unwrap_or(0);
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for a in &acc {
            for t in &local {
                let x: Vec<u64> = (0..RANK)
                    .map(|j| {
                        let diff = (t[j] + q - a[j] % q) % q;
                        let c = diff as u128 * inv as u128 % q as u128;
                        ((a[j] as u128 + c * acc_mod as u128) % (acc_mod as u128 * q as u128)) as u64
                    })
                    .collect();
                next.push(x);
            }
        }
        acc = next;
        acc_mod *= q;
    }
    Ok(acc)
}

/// Meet-in-the-middle search for a word w with w(src) in `targets` (residues mod m).
/// Returns the word in the convention of [`WeylWord`] and the index of the target reached.
fn bidirectional_search(
    rr: &RootResidues,
    src: &[u64],
    targets: &[Vec<u64>],
    max_len: usize,
    cap: usize,
) -> Result<(WeylWord, usize)> {
    const START: u8 = u8::MAX;
    let n = rr.n();
    let mut fwd: HashMap<u128, (u128, u8)> = HashMap::new();
    let mut bwd: HashMap<u128, (u128, u8, u16)> = HashMap::new();
    let sk = rr.pack(src);
    fwd.insert(sk, (sk, START));
    let mut ff = vec![sk];
    let mut bf = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        let k = rr.pack(t);
        bwd.entry(k).or_insert_with(|| {
            bf.push(k);
            (k, START, i as u16)
        });
    }
    let path = |meet: u128, fwd: &HashMap<u128, (u128, u8)>, bwd: &HashMap<u128, (u128, u8, u16)>| {
        let mut back = Vec::new();
        let mut k = meet;
        let target = loop {
            let (p, l, t) = bwd[&k];
            if l == START {
                break t as usize;
            }
            back.push(l as usize);
            k = p;
        };
        back.reverse();
        let mut k = meet;
        loop {
            let (p, l) = fwd[&k];
            if l == START {
                break;
            }
            back.push(l as usize);
            k = p;
        }
        (WeylWord::new(back), target)
    };
    if bwd.contains_key(&sk) {
        return Ok(path(sk, &fwd, &bwd));
    }
    let (mut df, mut db) = (0, 0);
    while df + db < max_len {
        if ff.is_empty() || bf.is_empty() {
            return Err(Error::Inconclusive("the target residue is not in the orbit".into()));
        }
        let forward = ff.len() <= bf.len();
        let frontier = if forward { std::mem::take(&mut ff) } else { std::mem::take(&mut bf) };
        let mut next = Vec::new();
        for &k in &frontier {
            let base = rr.unpack(k);
            for l in 0..n {
                let mut x = base.clone();
                rr.reflect(l, &mut x);
                let nk = rr.pack(&x);
                if forward {
                    if fwd.contains_key(&nk) {
                        continue;
                    }
                    fwd.insert(nk, (k, l as u8));
                } else {
                    if bwd.contains_key(&nk) {
                        continue;
                    }
                    let t = bwd[&k].2;
                    bwd.insert(nk, (k, l as u8, t));
                }
                if fwd.contains_key(&nk) && bwd.contains_key(&nk) {
                    return Ok(path(nk, &fwd, &bwd));
                }
                if fwd.len() + bwd.len() >= cap {
                    return Err(Error::Inconclusive(format!("visited-set cap {cap} reached while lifting")));
                }
                next.push(nk);
            }
        }
        if forward {
            ff = next;
            df += 1;
        } else {
            bf = next;
            db += 1;
        }
    }
    Err(Error::Inconclusive(format!("no lifting word of length <= {max_len}")))
}
