//! Ordered point sets in P^2 over an exact field: interpolation of linear systems with
//! assigned multiplicities, the Cremona action of W_n, Halphen and Coble checks.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::catalog::{coble_conditions, halphen_prohibited_classes, ConditionKind};
use crate::error::{Error, Result};
use crate::field::{cross, det3, invert, mat_vec, rank, Fe, Field, FieldDescriptor};
use crate::lattice::LatticeVector;
use crate::weyl::WeylWord;

pub type Point = [Fe; 3];

/// Scale so the last nonzero coordinate is 1.
pub fn normalize_point(f: &Field, p: &[Fe]) -> Result<Point> {
    let Some(last) = (0..3).rev().find(|&i| !f.is_zero(&p[i])) else {
        return Err(Error::invalid("the zero vector is not a projective point"));
    };
    let inv = f.inv(&p[last])?;
    Ok([f.mul(&p[0], &inv), f.mul(&p[1], &inv), f.mul(&p[2], &inv)])
}

pub fn same_point(f: &Field, a: &[Fe], b: &[Fe]) -> bool {
    cross(f, a, b).iter().all(|x| f.is_zero(x))
}

pub fn collinear(f: &Field, a: &[Fe], b: &[Fe], c: &[Fe]) -> bool {
    f.is_zero(&det3(f, &[a.to_vec(), b.to_vec(), c.to_vec()]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    field: Field,
    points: Vec<Point>,
}

impl PointConfiguration {
    /// Validates that points are nonzero and pairwise distinct; normalizes coordinates.
    pub fn new(field: Field, points: Vec<Vec<Fe>>) -> Result<Self> {
        let mut pts: Vec<Point> = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != 3 {
                return Err(Error::invalid(format!("point {} has {} coordinates", i + 1, p.len())));
            }
            let q = normalize_point(&field, p)?;
            if let Some(j) = pts.iter().position(|r| *r == q) {
                return Err(Error::invalid(format!("points {} and {} coincide", j + 1, i + 1)));
            }
            pts.push(q);
        }
        Ok(PointConfiguration { field, points: pts })
    }

    pub fn from_i64(field: Field, points: &[[i64; 3]]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        PointConfiguration::new(field, pts)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Swap the points with 0-based indices i and j.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut c = self.clone();
        c.points.swap(i, j);
        c
    }

    /// Image under a 3x3 matrix acting on column vectors.
    pub fn transformed(&self, t: &[Vec<Fe>]) -> Result<Self> {
        let pts = self.points.iter().map(|p| mat_vec(&self.field, t, p)).collect();
        PointConfiguration::new(self.field.clone(), pts)
    }

    pub fn to_json(&self) -> Value {
        let d = self.field.descriptor();
        json!({
            "field": {"p": d.p, "e": d.e},
            "points": self.points.iter().map(|p| p.iter().map(|x| self.field.to_json(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let desc: FieldDescriptor = serde_json::from_value(v.get("field").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("field descriptor: {e}")))?;
        let field = Field::from_descriptor(desc)?;
        let pts = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing 'points' array".into()))?;
        let mut points = Vec::with_capacity(pts.len());
        for p in pts {
            let coords = p
                .as_array()
                .ok_or_else(|| Error::Parse("each point must be an array".into()))?;
            points.push(coords.iter().map(|c| field.from_json(c)).collect::<Result<Vec<_>>>()?);
        }
        PointConfiguration::new(field, points)
    }
}

/// d e_0 - sum m_i e_i with nonnegative data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClassOnConfig {
    pub degree: i64,
    pub mults: Vec<i64>,
}

impl DivisorClassOnConfig {
    pub fn new(degree: i64, mults: Vec<i64>) -> Self {
        DivisorClassOnConfig { degree, mults }
    }

    pub fn from_vector(v: &LatticeVector) -> Result<Self> {
        let to = |x: &BigInt| x.to_i64().ok_or_else(|| Error::invalid("coefficient too large"));
        Ok(DivisorClassOnConfig {
            degree: to(v.degree())?,
            mults: v.multiplicities().iter().map(to).collect::<Result<_>>()?,
        })
    }

    pub fn to_vector(&self) -> LatticeVector {
        LatticeVector::from_degree_and_multiplicities(self.degree, &self.mults)
    }
}

/// Result of an interpolation: `dimension` is the projective dimension, -1 when empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Effectivity {
    pub effective: bool,
    pub dimension: i64,
}

fn monomials(d: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::from(0);
    }
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Rows of the conditions "vanish to order >= m at p" on degree-d forms, via Hasse
/// derivatives in the affine chart where the last nonzero coordinate of p is 1.
fn point_conditions(f: &Field, p: &Point, m: i64, monos: &[[i64; 3]]) -> Vec<Vec<Fe>> {
    let r = (0..3).rev().find(|&i| !f.is_zero(&p[i])).expect("normalized point");
    let (s, t) = match r {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut rows = Vec::new();
    for i in 0..m {
        for j in 0..m - i {
            let row = monos
                .iter()
                .map(|mono| {
                    let (a, b) = (mono[s], mono[t]);
                    if a < i || b < j {
                        return f.zero();
                    }
                    let c = f.from_bigint(&(binom(a, i) * binom(b, j)));
                    let us = f.pow_u64(&p[s], (a - i) as u64);
                    let vt = f.pow_u64(&p[t], (b - j) as u64);
                    f.mul(&c, &f.mul(&us, &vt))
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Interpolation matrix of degree-d curves with multiplicity >= m_i at p_i.
pub fn interpolation_matrix(cfg: &PointConfiguration, cls: &DivisorClassOnConfig) -> Result<Vec<Vec<Fe>>> {
    if cls.mults.len() != cfg.len() {
        return Err(Error::DimensionMismatch {
            left: cfg.len(),
            right: cls.mults.len(),
        });
    }
    if cls.degree < 0 || cls.mults.iter().any(|&m| m < 0) {
        return Err(Error::invalid("degree and multiplicities must be nonnegative"));
    }
    let monos = monomials(cls.degree);
    let mut rows = Vec::new();
    for (p, &m) in cfg.points.iter().zip(&cls.mults) {
        rows.extend(point_conditions(&cfg.field, p, m, &monos));
    }
    Ok(rows)
}

pub fn effectivity_test(cfg: &PointConfiguration, cls: &DivisorClassOnConfig) -> Result<Effectivity> {
    let rows = interpolation_matrix(cfg, cls)?;
    let n = (cls.degree + 1) * (cls.degree + 2) / 2;
    let r = rank(&cfg.field, &rows) as i64;
    let dimension = n - r - 1;
    Ok(Effectivity {
        effective: dimension >= 0,
        dimension,
    })
}

/// Effectivity of an arbitrary class: negative multiplicities are peeled off as fixed
/// exceptional components, negative degree is never effective (except the zero class).
pub fn effectivity_of_class(cfg: &PointConfiguration, v: &LatticeVector) -> Result<Effectivity> {
    if v.n() != cfg.len() {
        return Err(Error::DimensionMismatch {
            left: cfg.len() + 1,
            right: v.dim(),
        });
    }
    if v.degree().is_negative() {
        return Ok(Effectivity {
            effective: false,
            dimension: -1,
        });
    }
    let mut cls = DivisorClassOnConfig::from_vector(v)?;
    for m in cls.mults.iter_mut() {
        *m = (*m).max(0);
    }
    effectivity_test(cfg, &cls)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalphenVerdict {
    pub unnodal: bool,
    pub witness: Option<LatticeVector>,
    pub classes_checked: usize,
}

/// No class of [`halphen_prohibited_classes`] is effective. Classes are tested in order of
/// increasing degree, so the reported witness has minimal degree.
pub fn is_unnodal_halphen(cfg: &PointConfiguration, m: u32) -> Result<HalphenVerdict> {
    if cfg.len() != 9 {
        return Err(Error::invalid(format!("a Halphen set has 9 points, got {}", cfg.len())));
    }
    let mut classes = halphen_prohibited_classes(m)?;
    classes.sort_by(|a, b| a.degree().cmp(b.degree()));
    for (i, c) in classes.iter().enumerate() {
        if effectivity_of_class(cfg, c)?.effective {
            return Ok(HalphenVerdict {
                unnodal: false,
                witness: Some(c.clone()),
                classes_checked: i + 1,
            });
        }
    }
    Ok(HalphenVerdict {
        unnodal: true,
        witness: None,
        classes_checked: classes.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CobleReport {
    pub is_coble: bool,
    /// Projective dimension of sextics with ten double points.
    pub sextic_dimension: i64,
    pub violated: Option<(ConditionKind, LatticeVector)>,
}

/// Nodes of a unique sextic, and none of the ten-point conditions effective.
pub fn is_coble_set(cfg: &PointConfiguration) -> Result<CobleReport> {
    if cfg.len() != 10 {
        return Err(Error::invalid(format!("a Coble set has 10 points, got {}", cfg.len())));
    }
    let sextic = effectivity_test(cfg, &DivisorClassOnConfig::new(6, vec![2; 10]))?;
    if sextic.dimension != 0 {
        return Ok(CobleReport {
            is_coble: false,
            sextic_dimension: sextic.dimension,
            violated: None,
        });
    }
    for fam in coble_conditions() {
        for c in &fam.members {
            if effectivity_of_class(cfg, c)?.effective {
                return Ok(CobleReport {
                    is_coble: false,
                    sextic_dimension: 0,
                    violated: Some((fam.label, c.clone())),
                });
            }
        }
    }
    Ok(CobleReport {
        is_coble: true,
        sextic_dimension: 0,
        violated: None,
    })
}

/// The quadratic transformation based at points i, j, k (0-based). The base points become
/// the coordinate points in the new frame and every other point q maps to sigma(T q) with
/// sigma(x:y:z) = (yz:xz:xy).
pub fn cremona_quadratic(cfg: &PointConfiguration, i: usize, j: usize, k: usize) -> Result<PointConfiguration> {
    let n = cfg.len();
    if i >= n || j >= n || k >= n || i == j || j == k || i == k {
        return Err(Error::invalid(format!("base indices ({i}, {j}, {k}) are not three distinct points of {n}")));
    }
    let f = &cfg.field;
    let m: Vec<Vec<Fe>> = (0..3)
        .map(|r| vec![cfg.points[i][r].clone(), cfg.points[j][r].clone(), cfg.points[k][r].clone()])
        .collect();
    let t = invert(f, &m).ok_or_else(|| Error::domain("the three base points are collinear"))?;
    let mut out = Vec::with_capacity(n);
    for (idx, p) in cfg.points.iter().enumerate() {
        let img = if idx == i {
            vec![f.one(), f.zero(), f.zero()]
        } else if idx == j {
            vec![f.zero(), f.one(), f.zero()]
        } else if idx == k {
            vec![f.zero(), f.zero(), f.one()]
        } else {
            let q = mat_vec(f, &t, p);
            if q.iter().any(|x| f.is_zero(x)) {
                return Err(Error::domain(format!(
                    "point {} lies on a line through two base points",
                    idx + 1
                )));
            }
            vec![f.mul(&q[1], &q[2]), f.mul(&q[0], &q[2]), f.mul(&q[0], &q[1])]
        };
        out.push(img);
    }
    PointConfiguration::new(f.clone(), out)
}

/// Act by a word, first letter first: s_0 is the quadratic map based at points 1, 2, 3 and
/// s_i swaps points i and i+1. Curves of class D on the result correspond to curves of class
/// word_to_isometry(word) D on the input.
pub fn act_by_word(cfg: &PointConfiguration, word: &WeylWord) -> Result<PointConfiguration> {
    word.validate(cfg.len())?;
    let mut cur = cfg.clone();
    for (step, &l) in word.letters.iter().enumerate() {
        cur = if l == 0 {
            cremona_quadratic(&cur, 0, 1, 2).map_err(|e| e.at_step(step + 1))?
        } else {
            cur.swapped(l - 1, l)
        };
    }
    Ok(cur)
}

/// First four indices (lexicographically) of points in general position.
pub fn general_frame(cfg: &PointConfiguration) -> Option<[usize; 4]> {
    let f = &cfg.field;
    let p = &cfg.points;
    let n = p.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if collinear(f, &p[a], &p[b], &p[c]) {
                    continue;
                }
                for d in c + 1..n {
                    if !collinear(f, &p[a], &p[b], &p[d])
                        && !collinear(f, &p[a], &p[c], &p[d])
                        && !collinear(f, &p[b], &p[c], &p[d])
                    {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Matrix sending e_1, e_2, e_3, (1,1,1) to the four given points.
fn frame_matrix(f: &Field, pts: [&Point; 4]) -> Option<Vec<Vec<Fe>>> {
    let m: Vec<Vec<Fe>> = (0..3).map(|r| (0..3).map(|c| pts[c][r].clone()).collect()).collect();
    let inv = invert(f, &m)?;
    let lam = mat_vec(f, &inv, pts[3]);
    if lam.iter().any(|x| f.is_zero(x)) {
        return None;
    }
    Some(
        m.iter()
            .map(|row| row.iter().zip(&lam).map(|(x, l)| f.mul(x, l)).collect())
            .collect(),
    )
}

/// Ordered projective equivalence: Some(T) with T a_i ~ b_i for every i, None otherwise.
pub fn projectively_equivalent(a: &PointConfiguration, b: &PointConfiguration) -> Result<Option<Vec<Vec<Fe>>>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.field != b.field {
        return Err(Error::invalid("configurations live over different fields"));
    }
    if a.len() < 4 {
        return Err(Error::invalid("need at least four points"));
    }
    let f = &a.field;
    let idx = general_frame(a).ok_or_else(|| Error::domain("no four points of the first configuration are in general position"))?;
    let fa = frame_matrix(f, idx.map(|i| &a.points[i])).expect("general position");
    let Some(fb) = frame_matrix(f, idx.map(|i| &b.points[i])) else {
        return Ok(None);
    };
    let t = crate::field::mat_mul(f, &fb, &invert(f, &fa).expect("frame is invertible"));
    let ok = a
        .points
        .iter()
        .zip(&b.points)
        .all(|(p, q)| same_point(f, &mat_vec(f, &t, p), q));
    Ok(ok.then_some(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::word_to_isometry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f7() -> Field {
        Field::new(7, 1).unwrap()
    }

    fn random_config(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> PointConfiguration {
        loop {
            let pts = (0..n).map(|_| (0..3).map(|_| f.random(rng)).collect()).collect();
            if let Ok(c) = PointConfiguration::new(f.clone(), pts) {
                return c;
            }
        }
    }

    #[test]
    fn rejects_bad_points() {
        assert!(PointConfiguration::from_i64(f7(), &[[0, 0, 0]]).is_err());
        assert!(PointConfiguration::from_i64(f7(), &[[1, 2, 3], [2, 4, 6]]).is_err());
        let c = PointConfiguration::from_i64(f7(), &[[2, 4, 2]]).unwrap();
        assert_eq!(c.points()[0], [Fe::P(1), Fe::P(2), Fe::P(1)]);
    }

    #[test]
    fn effectivity_examples() {
        let line = PointConfiguration::from_i64(f7(), &[[1, 0, 1], [2, 0, 1], [3, 0, 1]]).unwrap();
        let e = effectivity_test(&line, &DivisorClassOnConfig::new(1, vec![1, 1, 1])).unwrap();
        assert_eq!(e, Effectivity { effective: true, dimension: 0 });
        let generic = PointConfiguration::from_i64(f7(), &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert!(!effectivity_test(&generic, &DivisorClassOnConfig::new(1, vec![1, 1, 1])).unwrap().effective);
        let e = effectivity_test(&generic, &DivisorClassOnConfig::new(0, vec![0, 0, 0])).unwrap();
        assert_eq!(e, Effectivity { effective: true, dimension: 0 });
        assert!(effectivity_test(&generic, &DivisorClassOnConfig::new(-1, vec![0, 0, 0])).is_err());
    }

    #[test]
    fn hasse_conditions_in_small_characteristic() {
        // conics singular at a point over F_2: pairs of lines through it, dimension 2
        let f = Field::new(2, 1).unwrap();
        let c = PointConfiguration::from_i64(f, &[[0, 0, 1]]).unwrap();
        let e = effectivity_test(&c, &DivisorClassOnConfig::new(2, vec![2])).unwrap();
        assert_eq!(e.dimension, 2);
        // cubics with a triple point over F_3
        let f = Field::new(3, 1).unwrap();
        let c = PointConfiguration::from_i64(f, &[[1, 1, 1]]).unwrap();
        let e = effectivity_test(&c, &DivisorClassOnConfig::new(3, vec![3])).unwrap();
        assert_eq!(e.dimension, 3);
    }

    #[test]
    fn cremona_examples() {
        let base = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let c = PointConfiguration::from_i64(f7(), &[base[0], base[1], base[2], [1, 1, 1]]).unwrap();
        let img = cremona_quadratic(&c, 0, 1, 2).unwrap();
        assert_eq!(img, c);
        let c = PointConfiguration::from_i64(f7(), &[base[0], base[1], base[2], [1, 2, 3]]).unwrap();
        let img = cremona_quadratic(&c, 0, 1, 2).unwrap();
        let expected = normalize_point(&f7(), &[Fe::P(6), Fe::P(3), Fe::P(2)]).unwrap();
        assert_eq!(img.points()[3], expected);
        let bad = PointConfiguration::from_i64(f7(), &[[1, 0, 1], [2, 0, 1], [3, 0, 1], [1, 1, 1]]).unwrap();
        assert!(matches!(cremona_quadratic(&bad, 0, 1, 2), Err(Error::Domain { .. })));
        let on_line = PointConfiguration::from_i64(f7(), &[base[0], base[1], base[2], [1, 1, 0]]).unwrap();
        assert!(matches!(cremona_quadratic(&on_line, 0, 1, 2), Err(Error::Domain { .. })));
    }

    #[test]
    fn cremona_is_an_involution_up_to_equivalence() {
        let f = Field::new(101, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut done = 0;
        while done < 10 {
            let c = random_config(&f, 7, &mut rng);
            let Ok(once) = cremona_quadratic(&c, 0, 1, 2) else { continue };
            let twice = cremona_quadratic(&once, 0, 1, 2).unwrap();
            assert!(projectively_equivalent(&c, &twice).unwrap().is_some());
            done += 1;
        }
    }

    #[test]
    fn act_by_word_examples() {
        let f = Field::new(101, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = random_config(&f, 6, &mut rng);
        let s3 = act_by_word(&c, &WeylWord::new(vec![3])).unwrap();
        assert_eq!(s3.points()[2], c.points()[3]);
        assert_eq!(s3.points()[3], c.points()[2]);
        let back = act_by_word(&c, &WeylWord::new(vec![0, 0])).unwrap();
        assert!(projectively_equivalent(&c, &back).unwrap().is_some());
        let line = PointConfiguration::from_i64(f, &[[1, 0, 1], [2, 0, 1], [3, 0, 1], [1, 1, 1]]).unwrap();
        match act_by_word(&line, &WeylWord::new(vec![1, 0])) {
            Err(Error::Domain { step: Some(2), .. }) => {}
            other => panic!("expected a domain error at step 2, got {other:?}"),
        }
    }

    #[test]
    fn basis_change_matches_isometry() {
        let f = Field::new(101, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let panel: Vec<LatticeVector> = vec![
            LatticeVector::from_i64s(&[1, -1, -1, 0, 0, 0, 0]),
            LatticeVector::from_i64s(&[1, -1, 0, 0, 0, 0, 0]),
            LatticeVector::from_i64s(&[2, -1, -1, -1, -1, -1, 0]),
            LatticeVector::from_i64s(&[2, -1, -1, -1, -1, 0, 0]),
            LatticeVector::from_i64s(&[3, -2, -1, -1, -1, -1, -1]),
            LatticeVector::from_i64s(&[3, -1, -1, -1, -1, -1, -1]),
            LatticeVector::from_i64s(&[4, -2, -2, -1, -1, -1, -1]),
        ];
        let mut tested = 0;
        while tested < 5 {
            let c = random_config(&f, 6, &mut rng);
            let w = WeylWord::new((0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..6)).collect());
            let Ok(img) = act_by_word(&c, &w) else { continue };
            let g = word_to_isometry(&w, 6).unwrap();
            for d in &panel {
                let lhs = effectivity_of_class(&img, d).unwrap().dimension;
                let rhs = effectivity_of_class(&c, &g.apply(d)).unwrap().dimension;
                assert_eq!(lhs, rhs, "word {w}, class {d}");
            }
            tested += 1;
        }
    }

    #[test]
    fn equivalence_examples() {
        let f = Field::new(101, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_config(&f, 8, &mut rng);
        let t = projectively_equivalent(&c, &c).unwrap().unwrap();
        let id = projectively_equivalent(&c, &c.transformed(&t).unwrap()).unwrap();
        assert!(id.is_some());
        let m: Vec<Vec<Fe>> = [[1, 2, 0], [0, 1, 5], [3, 0, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect();
        let moved = c.transformed(&m).unwrap();
        assert!(projectively_equivalent(&c, &moved).unwrap().is_some());
        let mut pts: Vec<Vec<Fe>> = moved.points().iter().map(|p| p.to_vec()).collect();
        pts[7][0] = f.add(&pts[7][0], &f.one());
        let perturbed = PointConfiguration::new(f.clone(), pts).unwrap();
        assert!(projectively_equivalent(&c, &perturbed).unwrap().is_none());
    }

    #[test]
    fn dimension_is_projectively_invariant() {
        let f = Field::new(101, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let c = random_config(&f, 7, &mut rng);
        let m: Vec<Vec<Fe>> = [[2, 1, 0], [0, 1, 1], [1, 0, 3]]
            .iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect();
        let moved = c.transformed(&m).unwrap();
        for cls in [
            DivisorClassOnConfig::new(3, vec![2, 1, 1, 1, 1, 1, 0]),
            DivisorClassOnConfig::new(4, vec![2, 2, 1, 1, 1, 1, 1]),
            DivisorClassOnConfig::new(2, vec![1, 1, 1, 1, 0, 0, 0]),
        ] {
            assert_eq!(effectivity_test(&c, &cls).unwrap(), effectivity_test(&moved, &cls).unwrap());
        }
    }

    #[test]
    fn halphen_rejects_collinear_triples() {
        let f = Field::new(101, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut c = random_config(&f, 9, &mut rng);
        let (p, q) = (c.points[3].clone(), c.points[5].clone());
        c.points[7] = normalize_point(&f, &[f.add(&p[0], &q[0]), f.add(&p[1], &q[1]), f.add(&p[2], &q[2])]).unwrap();
        let v = is_unnodal_halphen(&c, 1).unwrap();
        assert!(!v.unnodal);
        let w = v.witness.unwrap();
        assert_eq!(crate::catalog::label_of(&w), ConditionKind::Collinear3);
        assert!(is_unnodal_halphen(&random_config(&f, 8, &mut rng), 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = PointConfiguration::from_i64(Field::new(101, 1).unwrap(), &[[1, 2, 3], [4, 5, 1]]).unwrap();
        assert_eq!(PointConfiguration::from_json(&c.to_json()).unwrap(), c);
        let f = Field::new(5, 2).unwrap();
        let pts = vec![vec![f.from_coeffs(&[1, 2]).unwrap(), f.one(), f.zero()]];
        let c = PointConfiguration::new(f, pts).unwrap();
        assert_eq!(PointConfiguration::from_json(&c.to_json()).unwrap(), c);
    }
}
