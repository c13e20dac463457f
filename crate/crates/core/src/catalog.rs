//! Root classes of bounded degree, the ten-point conditions grouped by residue mod 2E_10,
//! residue counts of q_2, and the classes that obstruct unnodal Halphen sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{check_n, gram_matrix, is_root, simple_roots_unchecked, to_root_coordinates, LatticeVector};

/// Shape of a root class d e_0 - sum m_i e_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionKind {
    /// e_i - e_j: p_j infinitely near p_i.
    InfinitelyNear,
    /// e_0 - e_i - e_j - e_k: three collinear points.
    Collinear3,
    /// 2e_0 - six points: six points on a conic.
    Conic6,
    /// 3e_0 - 2e_i - seven points: a cubic through eight points singular at one.
    Cubic8Singular,
    /// 4e_0 - 3e_i - the other nine: a quartic through ten points, triple at one.
    Quartic10Triple,
    Other,
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionKind::InfinitelyNear => "InfinitelyNear",
            ConditionKind::Collinear3 => "Collinear3",
            ConditionKind::Conic6 => "Conic6",
            ConditionKind::Cubic8Singular => "Cubic8Singular",
            ConditionKind::Quartic10Triple => "Quartic10Triple",
            ConditionKind::Other => "Other",
        };
        f.write_str(s)
    }
}

/// One condition: all integral classes sharing a residue mod 2E_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFamily {
    pub label: ConditionKind,
    pub representative: LatticeVector,
    pub members: Vec<LatticeVector>,
    /// 1-based indices of the points met by some member.
    pub index_set: Vec<usize>,
    /// Residue mod 2 in simple-root coordinates.
    pub residue: Vec<u8>,
}

/// Classify the shape of a root by degree and sorted multiplicities.
pub fn label_of(r: &LatticeVector) -> ConditionKind {
    let d = r.degree().to_i64().unwrap_or(-1);
    let mut m: Vec<i64> = r.multiplicities().iter().map(|x| x.to_i64().unwrap_or(i64::MIN)).collect();
    m.sort_unstable_by(|a, b| b.cmp(a));
    let count = |v: i64| m.iter().filter(|&&x| x == v).count();
    let n = m.len();
    match d {
        0 if count(1) == 1 && count(-1) == 1 => ConditionKind::InfinitelyNear,
        1 if count(1) == 3 && count(0) == n - 3 => ConditionKind::Collinear3,
        2 if count(1) == 6 && count(0) == n - 6 => ConditionKind::Conic6,
        3 if count(2) == 1 && count(1) == 7 && count(0) == n - 8 => ConditionKind::Cubic8Singular,
        4 if n == 10 && count(3) == 1 && count(1) == 9 => ConditionKind::Quartic10Triple,
        _ => ConditionKind::Other,
    }
}

/// Point indices (1-based) where the multiplicity is nonzero.
pub fn support(r: &LatticeVector) -> Vec<usize> {
    (1..=r.n()).filter(|&i| !r.coord(i).is_zero()).collect()
}

/// Roots d e_0 - sum m_i e_i with 0 <= d <= max_degree and |m_i| <= max(d, 1), sign-normalized
/// (d > 0, or d = 0 and first nonzero e_i-coefficient positive), sorted lexicographically.
pub fn enumerate_roots(n: usize, max_degree: u32) -> Result<Vec<LatticeVector>> {
    check_n(n)?;
    let mut out = BTreeSet::new();
    for d in 0..=max_degree as i64 {
        let bound = d.max(1);
        let mut prefix = Vec::with_capacity(n);
        let mut multisets = Vec::new();
        sorted_solutions(n, 3 * d, d * d + 2, bound, &mut prefix, &mut multisets);
        for ms in multisets {
            for perm in distinct_permutations(&ms) {
                let v = LatticeVector::from_degree_and_multiplicities(d, &perm);
                debug_assert!(is_root(&v));
                out.insert(SortKey(v.sign_normalized()));
            }
        }
    }
    Ok(out.into_iter().map(|k| k.0).collect())
}

#[derive(PartialEq, Eq)]
struct SortKey(LatticeVector);

impl PartialOrd for SortKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SortKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.coords().cmp(other.0.coords())
    }
}

/// Non-increasing sequences of length `slots` in [-bound, bound] with given sum and square sum.
fn sorted_solutions(slots: usize, sum: i64, sq: i64, bound: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let remaining = slots - prefix.len();
    if remaining == 0 {
        if sum == 0 && sq == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    // Cauchy-Schwarz: sum^2 <= remaining * sq
    if sq < 0 || sum * sum > remaining as i64 * sq {
        return;
    }
    let top = prefix.last().copied().unwrap_or(bound).min(bound);
    for v in (-bound..=top).rev() {
        if v * v > sq {
            continue;
        }
        // the rest are <= v, so sum <= v * remaining
        if sum > v * remaining as i64 {
            break;
        }
        prefix.push(v);
        sorted_solutions(slots, sum - v, sq - v * v, bound, prefix, out);
        prefix.pop();
    }
}

fn distinct_permutations(ms: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = ms.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Residue mod 2 of a vector of E_n in simple-root coordinates.
pub fn residue_mod2(r: &LatticeVector) -> Result<Vec<u8>> {
    Ok(to_root_coordinates(r)?
        .iter()
        .map(|c| u8::from(c.is_odd()))
        .collect())
}

/// The ten-point conditions, one family per residue mod 2E_10.
pub fn coble_conditions() -> Vec<ClassFamily> {
    let roots = enumerate_roots(10, 4).expect("n = 10 is valid");
    let mut groups: BTreeMap<(ConditionKind, Vec<u8>), Vec<LatticeVector>> = BTreeMap::new();
    for r in roots {
        let label = label_of(&r);
        if label == ConditionKind::Other {
            continue;
        }
        let res = residue_mod2(&r).expect("roots lie in E_10");
        groups.entry((label, res)).or_default().push(r);
    }
    let mut families: Vec<ClassFamily> = groups
        .into_iter()
        .map(|((label, residue), members)| {
            let idx: BTreeSet<usize> = members.iter().flat_map(support).collect();
            ClassFamily {
                label,
                representative: members[0].clone(),
                index_set: idx.into_iter().collect(),
                members,
                residue,
            }
        })
        .collect();
    families.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.representative.coords().cmp(b.representative.coords())));
    families
}

/// q_2(x) = (1/2) x^T G x mod 2 for x in simple-root coordinates.
pub fn q2(x: &[u8], gram: &[Vec<i64>]) -> u8 {
    let mut s: i64 = 0;
    for i in 0..x.len() {
        if x[i] == 0 {
            continue;
        }
        s += gram[i][i] / 2;
        for j in i + 1..x.len() {
            if x[j] != 0 {
                s += gram[i][j];
            }
        }
    }
    s.rem_euclid(2) as u8
}

pub(crate) fn gram_i64(n: usize) -> Vec<Vec<i64>> {
    gram_matrix(&simple_roots_unchecked(n))
        .expect("simple roots share a lattice")
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

/// Counts of q_2^{-1}(0) (including 0) and q_2^{-1}(1) on E_10/2E_10.
pub fn residue_counts_mod2() -> (usize, usize) {
    let g = gram_i64(10);
    let mut iso = 0;
    let mut one = 0;
    for mask in 0u32..1 << 10 {
        let x: Vec<u8> = (0..10).map(|i| ((mask >> i) & 1) as u8).collect();
        if q2(&x, &g) == 0 {
            iso += 1;
        } else {
            one += 1;
        }
    }
    (iso, one)
}

/// Classes whose effectivity rules out an unnodal Halphen surface of index m (n = 9):
/// -dK + e_i - e_j with 0 <= 2d <= m, and -dK +- (e_0 - e_i - e_j - e_k) with
/// 0 <= 2(3d +- 1) <= 3m.
pub fn halphen_prohibited_classes(m: u32) -> Result<Vec<LatticeVector>> {
    if m < 1 {
        return Err(Error::invalid("the index m must be at least 1"));
    }
    let n = 9;
    let m = m as i64;
    let minus_k = |d: i64| -> Vec<i64> {
        let mut v = vec![-d; n + 1];
        v[0] = 3 * d;
        v
    };
    let mut out = Vec::new();
    let mut d = 0;
    while 2 * d <= m {
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    let mut v = minus_k(d);
                    v[i] += 1;
                    v[j] -= 1;
                    out.push(LatticeVector::from_i64s(&v));
                }
            }
        }
        d += 1;
    }
    for sign in [1i64, -1] {
        let mut d = 0;
        loop {
            let deg = 3 * d + sign;
            if 2 * deg > 3 * m {
                break;
            }
            if deg >= 0 {
                for i in 1..=n {
                    for j in i + 1..=n {
                        for k in j + 1..=n {
                            let mut v = minus_k(d);
                            v[0] += sign;
                            for t in [i, j, k] {
                                v[t] -= sign;
                            }
                            out.push(LatticeVector::from_i64s(&v));
                        }
                    }
                }
            }
            d += 1;
        }
    }
    Ok(out)
}

/// CSV rows `label, degree, m_1..m_n, residue_mod2` (header first).
pub fn csv_rows(classes: &[LatticeVector]) -> Result<Vec<Vec<String>>> {
    let n = classes.first().map_or(0, |c| c.n());
    let mut rows = vec![{
        let mut h = vec!["label".to_string(), "degree".to_string()];
        h.extend((1..=n).map(|i| format!("m{i}")));
        h.push("residue_mod2".to_string());
        h
    }];
    for c in classes {
        if c.n() != n {
            return Err(Error::DimensionMismatch {
                left: n + 1,
                right: c.dim(),
            });
        }
        let mut row = vec![label_of(c).to_string(), c.degree().to_string()];
        row.extend(c.multiplicities().iter().map(|m| m.to_string()));
        let res = residue_mod2(c)?;
        row.push(res.iter().map(|b| b.to_string()).collect());
        rows.push(row);
    }
    Ok(rows)
}
