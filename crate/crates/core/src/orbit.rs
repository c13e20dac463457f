//! Breadth-first search over the W_n-orbit of the simple roots, reduced modulo m.
//!
//! Vectors of E_n are tracked by their coordinates on the simple roots, reduced mod m, so
//! the orbit is finite. Expansion is level-synchronous with letters in ascending order,
//! which makes results independent of hashing.

use std::collections::HashMap;

use crate::catalog::gram_i64;
use crate::error::{Error, Result};
use crate::lattice::{check_n, from_root_coordinates, LatticeVector};
use crate::weyl::WeylWord;

pub const DEFAULT_VISITED_CAP: usize = 1 << 24;

/// A residue reached by the search together with a word carrying alpha_1 onto a root with
/// that residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitHit {
    pub word: WeylWord,
    pub residue: Vec<u64>,
    pub depth: usize,
    pub visited: usize,
}

impl OrbitHit {
    /// The root word(alpha_1).
    pub fn root(&self, n: usize) -> LatticeVector {
        let a1 = crate::lattice::simple_roots_unchecked(n).swap_remove(1);
        self.word.apply(&a1).expect("letters are valid")
    }
}

/// Residue arithmetic for E_n / m E_n in simple-root coordinates.
#[derive(Debug, Clone)]
pub struct RootResidues {
    n: usize,
    m: u64,
    gram: Vec<Vec<i64>>,
    bits: u32,
}

impl RootResidues {
    pub fn new(n: usize, m: u64) -> Result<Self> {
        check_n(n)?;
        if m < 2 {
            return Err(Error::invalid("modulus must be at least 2"));
        }
        let bits = 64 - (m - 1).leading_zeros();
        if bits as usize * n > 128 {
            return Err(Error::invalid(format!("residues mod {m} of rank {n} do not fit a 128-bit key")));
        }
        Ok(RootResidues {
            n,
            m,
            gram: gram_i64(n),
            bits,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub(crate) fn pack(&self, x: &[u64]) -> u128 {
        x.iter().fold(0u128, |acc, &c| (acc << self.bits) | c as u128)
    }

    pub(crate) fn unpack(&self, mut k: u128) -> Vec<u64> {
        let mask = (1u128 << self.bits) - 1;
        let mut x = vec![0u64; self.n];
        for c in x.iter_mut().rev() {
            *c = (k & mask) as u64;
            k >>= self.bits;
        }
        x
    }

    /// s_j(x) = x + b(x, alpha_j) alpha_j.
    pub fn reflect(&self, j: usize, x: &mut [u64]) {
        let m = self.m as i128;
        let b: i128 = (0..self.n).map(|i| x[i] as i128 * self.gram[i][j] as i128).sum();
        x[j] = (x[j] as i128 + b).rem_euclid(m) as u64;
    }

    /// q(x) = (1/2) x^T G x mod m.
    pub fn q(&self, x: &[u64]) -> u64 {
        let m = self.m as i128;
        let mut s: i128 = 0;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i128;
            s += (self.gram[i][i] / 2) as i128 * xi * xi % m;
            for j in i + 1..self.n {
                s += self.gram[i][j] as i128 * xi * x[j] as i128 % m;
            }
        }
        s.rem_euclid(m) as u64
    }

    pub fn of_vector(&self, v: &LatticeVector) -> Result<Vec<u64>> {
        let c = crate::lattice::to_root_coordinates(v)?;
        let m = num_bigint::BigInt::from(self.m);
        Ok(c.iter()
            .map(|x| {
                use num_integer::Integer;
                use num_traits::ToPrimitive;
                x.mod_floor(&m).to_u64().unwrap()
            })
            .collect())
    }

    /// Smallest nonnegative lift of a residue.
    pub fn lift(&self, x: &[u64]) -> LatticeVector {
        let c: Vec<num_bigint::BigInt> = x.iter().map(|&v| num_bigint::BigInt::from(v)).collect();
        from_root_coordinates(self.n, &c).expect("length n")
    }

    pub fn simple_root(&self, j: usize) -> Vec<u64> {
        let mut x = vec![0u64; self.n];
        x[j] = 1;
        x
    }
}

/// Word w with w(alpha_1) = alpha_j, built along the diagram path from node 1 to node j
/// using alpha_b = s_a s_b alpha_a for adjacent a, b.
pub fn connector(n: usize, j: usize) -> WeylWord {
    let path: Vec<usize> = if j == 0 { vec![1, 2, 3, 0] } else { (1..=j).collect() };
    debug_assert!(j < n);
    let mut letters: Vec<usize> = Vec::new();
    for w in path.windows(2) {
        // new step acts after the previous ones, so it goes on the left
        let mut step = vec![w[0], w[1]];
        step.extend_from_slice(&letters);
        letters = step;
    }
    WeylWord::new(letters)
}

/// Multi-source BFS from the residues of alpha_0, ..., alpha_{n-1} (depth 0, index order).
/// Returns the first residue accepted by `accept`, Ok(None) if the whole orbit was exhausted,
/// and Inconclusive when `max_depth` or `cap` stops the search first.
pub fn search_root_residues(
    rr: &RootResidues,
    max_depth: Option<usize>,
    cap: usize,
    accept: &mut dyn FnMut(&[u64]) -> bool,
    cancel: &dyn Fn() -> bool,
) -> Result<Option<OrbitHit>> {
    let n = rr.n;
    // parent key, letter applied, source index
    let mut parent: HashMap<u128, (u128, u8, u8)> = HashMap::new();
    let mut frontier: Vec<u128> = Vec::new();
    const ROOT_MARK: u8 = u8::MAX;
    for j in 0..n {
        let x = rr.simple_root(j);
        let k = rr.pack(&x);
        if parent.contains_key(&k) {
            continue;
        }
        parent.insert(k, (k, ROOT_MARK, j as u8));
        if accept(&x) {
            return Ok(Some(finish(rr, &parent, k, 0)));
        }
        frontier.push(k);
    }
    let mut depth = 0;
    let mut steps = 0usize;
    while !frontier.is_empty() {
        if let Some(d) = max_depth {
            if depth >= d {
                return Err(Error::Inconclusive(format!(
                    "no accepted residue within depth {d} ({} residues visited)",
                    parent.len()
                )));
            }
        }
        depth += 1;
        let mut next = Vec::new();
        for &k in &frontier {
            let base = rr.unpack(k);
            for l in 0..n {
                steps += 1;
                if steps % 10_000 == 0 && cancel() {
                    return Err(Error::Inconclusive("search cancelled".into()));
                }
                let mut x = base.clone();
                rr.reflect(l, &mut x);
                let nk = rr.pack(&x);
                if parent.contains_key(&nk) {
                    continue;
                }
                let src = parent[&k].2;
                parent.insert(nk, (k, l as u8, src));
                if accept(&x) {
                    return Ok(Some(finish(rr, &parent, nk, depth)));
                }
                if parent.len() >= cap {
                    return Err(Error::Inconclusive(format!("visited-set cap {cap} reached at depth {depth}")));
                }
                next.push(nk);
            }
        }
        frontier = next;
    }
    Ok(None)
}

fn finish(rr: &RootResidues, parent: &HashMap<u128, (u128, u8, u8)>, key: u128, depth: usize) -> OrbitHit {
    let mut letters = Vec::new();
    let mut k = key;
    let src;
    loop {
        let (p, l, s) = parent[&k];
        if l == u8::MAX {
            src = s as usize;
            break;
        }
        letters.push(l as usize);
        k = p;
    }
    // root = s_{l_k} ... s_{l_1} alpha_src = word . connector . alpha_1
    letters.extend(connector(rr.n, src).letters);
    OrbitHit {
        word: WeylWord::new(letters),
        residue: rr.unpack(key),
        depth,
        visited: parent.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::simple_roots;

    #[test]
    fn connectors_reach_every_simple_root() {
        for n in [9usize, 10, 11] {
            let roots = simple_roots(n).unwrap();
            for j in 0..n {
                assert_eq!(connector(n, j).apply(&roots[1]).unwrap(), roots[j], "n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn residue_reflection_matches_lattice() {
        let rr = RootResidues::new(10, 6).unwrap();
        let roots = simple_roots(10).unwrap();
        let v = crate::weyl::WeylWord::new(vec![0, 3, 2, 0, 5, 9]).apply(&roots[1]).unwrap();
        for j in 0..10 {
            let mut x = rr.of_vector(&v).unwrap();
            rr.reflect(j, &mut x);
            let w = crate::weyl::reflect(&roots[j], &v).unwrap();
            assert_eq!(x, rr.of_vector(&w).unwrap());
        }
        assert_eq!(rr.q(&rr.of_vector(&v).unwrap()), 5);
    }

    #[test]
    fn orbit_mod_two_has_496_residues() {
        let rr = RootResidues::new(10, 2).unwrap();
        let mut seen = 0;
        let r = search_root_residues(&rr, None, DEFAULT_VISITED_CAP, &mut |_| {
            seen += 1;
            false
        }, &|| false)
        .unwrap();
        assert!(r.is_none());
        assert_eq!(seen, 496);
    }

    #[test]
    fn hits_carry_valid_words() {
        let rr = RootResidues::new(10, 3).unwrap();
        let target = rr.of_vector(&LatticeVector::from_i64s(&[2, -1, -1, -1, -1, -1, -1, 0, 0, 0, 0])).unwrap();
        let hit = search_root_residues(&rr, Some(20), DEFAULT_VISITED_CAP, &mut |x| x == target.as_slice(), &|| false)
            .unwrap()
            .unwrap();
        let root = hit.root(10);
        assert!(crate::lattice::is_root(&root));
        assert_eq!(rr.of_vector(&root).unwrap(), target);
    }
}
