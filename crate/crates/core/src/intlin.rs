//! Exact linear algebra over Z and Q for small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Basis of the rational kernel {x : A x = 0}, each vector scaled to a primitive integer vector.
pub fn integer_kernel(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut x = vec![BigRational::zero(); cols];
        x[f] = BigRational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = -m[i][f].clone();
        }
        basis.push(clear_denominators(&x));
    }
    basis
}

/// Scale a rational vector to a primitive integer vector with the same direction.
pub fn clear_denominators(x: &[BigRational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = x.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

/// Invariant factors of an integer matrix (Smith normal form diagonal), nonzero ones only.
pub fn smith_invariants(a: &[Vec<i128>]) -> Vec<i128> {
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut changed = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = Integer::div_floor(&m[i][t], &p);
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    if m[i][t] != 0 {
                        changed = true;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = Integer::div_floor(&m[t][j], &p);
                    for row in m.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                    if m[t][j] != 0 {
                        changed = true;
                    }
                }
            }
            if changed {
                // move the smallest nonzero entry of row/column t to the pivot and retry
                let mut bi = t;
                let mut bj = t;
                let mut bv = m[t][t].abs();
                for i in t..rows {
                    if m[i][t] != 0 && (bv == 0 || m[i][t].abs() < bv) {
                        bi = i;
                        bj = t;
                        bv = m[i][t].abs();
                    }
                }
                for j in t..cols {
                    if m[t][j] != 0 && (bv == 0 || m[t][j].abs() < bv) {
                        bi = t;
                        bj = j;
                        bv = m[t][j].abs();
                    }
                }
                m.swap(t, bi);
                for row in m.iter_mut() {
                    row.swap(t, bj);
                }
                continue;
            }
            // divisibility of the remaining block by the pivot
            let mut fix = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if m[i][j] % p != 0 {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in t..cols {
                        let v = m[i][j];
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}
