use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cremona_core::catalog::{enumerate_roots, residue_counts_mod2};
use cremona_core::config::{effectivity_of_class, is_unnodal_halphen, PointConfiguration, Point};
use cremona_core::cubic::{classify_cubic, restriction_hom, CubicCurveModel, TernaryCubic};
use cremona_core::field::{det3, Fe, Field};
use cremona_core::lattice::{canonical_vector, inner, simple_roots, LatticeVector};
use cremona_core::orbit::RootResidues;
use cremona_core::residue::{
    apply_reflection, find_root_in_submodule, represent_unit, spinor_norm, witt_extend, ReflectionProduct,
    ResidueModule, ResidueSubmodule, SearchBudget, SearchMethod, RANK,
};
use cremona_core::weyl::{classify_isometry, iota_isometry, noether_reduce, word_to_isometry, WeylWord};

fn word(n: usize, max_len: usize) -> impl Strategy<Value = WeylWord> {
    prop::collection::vec(0..n, 0..=max_len).prop_map(WeylWord::new)
}

fn e8_element() -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-5i64..=5, 8).prop_map(|c| {
        simple_roots(9).unwrap()[..8]
            .iter()
            .zip(c)
            .fold(LatticeVector::zero(9), |acc, (a, k)| acc.add_scaled(&BigInt::from(k), a))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_isometries_preserve_form_and_canonical(n in 4usize..=12, w in word(12, 30)) {
        let w = WeylWord::new(w.letters.iter().map(|&i| i % n).collect());
        let g = word_to_isometry(&w, n).unwrap();
        prop_assert!(g.preserves_form());
        prop_assert!(g.fixes(&canonical_vector(n).unwrap()));
    }

    #[test]
    fn iota_is_additive(a in e8_element(), b in e8_element()) {
        let sum = &a + &b;
        prop_assert_eq!(
            iota_isometry(&sum).unwrap(),
            iota_isometry(&a).unwrap().compose(&iota_isometry(&b).unwrap())
        );
    }

    #[test]
    fn noether_word_reproduces_input(w in word(10, 40), start in 0usize..10) {
        let mut r = w.apply(&simple_roots(10).unwrap()[start]).unwrap();
        if r.degree().sign() == num_bigint::Sign::Minus {
            r = -r;
        }
        let red = noether_reduce(&r, 10).unwrap();
        prop_assert_eq!(red.word.apply(&red.terminal).unwrap(), r);
    }

    #[test]
    fn classification_is_conjugation_invariant(g in word(10, 12), h in word(10, 8)) {
        let g = word_to_isometry(&g, 10).unwrap();
        let h = word_to_isometry(&h, 10).unwrap();
        let conj = h.compose(&g).compose(&h.inverse());
        let (a, b) = (classify_isometry(&g).unwrap(), classify_isometry(&conj).unwrap());
        prop_assert_eq!(a.kind(), b.kind());
    }
}

#[test]
fn enumerated_roots_are_roots() {
    for n in [9, 10] {
        let k = canonical_vector(n).unwrap();
        for r in enumerate_roots(n, 3).unwrap() {
            assert_eq!(r.square(), BigInt::from(-2));
            assert_eq!(inner(&r, &k).unwrap(), BigInt::from(0));
        }
    }
}

struct Curves {
    field: Field,
    models: Vec<(CubicCurveModel, Vec<Point>)>,
}

/// Smooth, nodal and cuspidal Weierstrass cubics over F_101 with their smooth points.
fn curves() -> &'static Curves {
    static C: OnceLock<Curves> = OnceLock::new();
    C.get_or_init(|| {
        let field = Field::new(101, 1).unwrap();
        let models = [[0, 0, 0, -1, 0], [0, 1, 0, 0, 0], [0, 0, 0, 0, 0]]
            .into_iter()
            .map(|a| {
                let c = classify_cubic(&TernaryCubic::weierstrass(field.clone(), a).unwrap()).unwrap();
                let pts = c.smooth_points().unwrap();
                (c, pts)
            })
            .collect();
        Curves { field, models }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn group_law_axioms(kind in 0usize..3, i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let (c, pts) = &curves().models[kind];
        let (p, q, r) = (&pts[i % pts.len()], &pts[j % pts.len()], &pts[k % pts.len()]);
        prop_assert_eq!(c.add(p, q).unwrap(), c.add(q, p).unwrap());
        let left = c.add(&c.add(p, q).unwrap(), r).unwrap();
        let right = c.add(p, &c.add(q, r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(c.add(p, &c.origin).unwrap(), p.clone());
    }

    #[test]
    fn charts_are_homomorphisms(kind in 1usize..3, i in 0usize..1000, j in 0usize..1000) {
        let f = &curves().field;
        let (c, pts) = &curves().models[kind];
        let (p, q) = (&pts[i % pts.len()], &pts[j % pts.len()]);
        let (tp, tq) = (c.parameter(p).unwrap(), c.parameter(q).unwrap());
        let ts = c.parameter(&c.add(p, q).unwrap()).unwrap();
        // nodal: multiplicative; cuspidal: additive
        let want = if kind == 1 { f.mul(&tp, &tq) } else { f.add(&tp, &tq) };
        prop_assert_eq!(ts, want);
    }

    #[test]
    fn restriction_is_additive(
        kind in 0usize..3,
        idx in prop::collection::vec(0usize..1000, 9),
        u in prop::collection::vec(-3i64..=3, 9),
        v in prop::collection::vec(-3i64..=3, 9),
    ) {
        let (c, all) = &curves().models[kind];
        let pts: Vec<Point> = idx.iter().map(|i| all[i % all.len()].clone()).collect();
        let roots = simple_roots(9).unwrap();
        let comb = |cs: &[i64]| {
            roots.iter().zip(cs).fold(LatticeVector::zero(9), |acc, (a, k)| acc.add_scaled(&BigInt::from(*k), a))
        };
        let (a, b) = (comb(&u), comb(&v));
        let lhs = restriction_hom(c, &pts, &(&a + &b)).unwrap().point;
        let ra = restriction_hom(c, &pts, &a).unwrap().point;
        let rb = restriction_hom(c, &pts, &b).unwrap().point;
        prop_assert_eq!(lhs, c.add(&ra, &rb).unwrap());
    }
}

fn random_points(f: &Field, n: usize, seed: u64) -> Vec<Vec<Fe>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..3).map(|_| f.random(&mut rng)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn effectivity_is_projectively_invariant(
        seed in any::<u64>(),
        t in prop::collection::vec(0i64..101, 9),
        d in 1i64..=4,
        m in prop::collection::vec(0i64..=2, 6),
    ) {
        let f = f_101();
        let t: Vec<Vec<Fe>> = t.chunks(3).map(|r| r.iter().map(|x| f.from_i64(*x)).collect()).collect();
        prop_assume!(!f.is_zero(&det3(&f, &t)));
        let Ok(cfg) = PointConfiguration::new(f.clone(), random_points(&f, 6, seed)) else { return Ok(()) };
        let moved = cfg.transformed(&t).unwrap();
        let cls = LatticeVector::from_degree_and_multiplicities(d, &m);
        prop_assert_eq!(effectivity_of_class(&cfg, &cls).unwrap(), effectivity_of_class(&moved, &cls).unwrap());
    }

    #[test]
    fn halphen_verdict_ignores_point_order(seed in any::<u64>(), i in 0usize..9, j in 0usize..9) {
        let f = f_101();
        let Ok(cfg) = PointConfiguration::new(f.clone(), random_points(&f, 9, seed)) else { return Ok(()) };
        let a = is_unnodal_halphen(&cfg, 1).unwrap();
        let b = is_unnodal_halphen(&cfg.swapped(i, j), 1).unwrap();
        prop_assert_eq!(a.unnodal, b.unnodal);
    }
}

fn f_101() -> Field {
    Field::new(101, 1).unwrap()
}

fn prime_power() -> impl Strategy<Value = (u64, u64)> {
    prop::sample::select(vec![(2u64, 2u64), (2, 4), (2, 8), (3, 3), (3, 9), (3, 27), (5, 5), (5, 25), (7, 7)])
}

fn residue(m: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..m, RANK)
}

fn unit(p: u64, m: u64) -> impl Strategy<Value = u64> {
    (1..m).prop_filter("unit", move |a| a % p != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflections_preserve_q(((_p, m), x, a) in prime_power().prop_flat_map(|(p, m)| (Just((p, m)), residue(m), unit(p, m)))) {
        let l = ResidueModule::new(m).unwrap();
        let full = ResidueSubmodule::full(l.clone());
        let h = represent_unit(&full, a).unwrap();
        prop_assert_eq!(l.q(&h), a);
        let y = apply_reflection(&l, &h, &x).unwrap();
        prop_assert_eq!(l.q(&y), l.q(&x));
        prop_assert_eq!(apply_reflection(&l, &h, &y).unwrap(), x);
    }

    #[test]
    fn represent_unit_on_random_submodules(((_p, m), a, seed) in prime_power().prop_flat_map(|(p, m)| (Just((p, m)), unit(p, m), any::<u64>()))) {
        let l = ResidueModule::new(m).unwrap();
        let sub = ResidueSubmodule::random(l.clone(), 8, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assume!(sub.free_rank() == 8);
        let v = represent_unit(&sub, a).unwrap();
        prop_assert_eq!(l.q(&v), a);
        prop_assert!(sub.contains(&v));
    }

    #[test]
    fn witt_extension_maps_f_to_g(((_p, m), w) in prime_power().prop_flat_map(|pm| (Just(pm), prop::collection::vec(0..RANK, 0..30)))) {
        let l = ResidueModule::new(m).unwrap();
        let rr = RootResidues::new(RANK, m).unwrap();
        let f = vec![l.simple_root(1), l.simple_root(6)];
        let g: Vec<Vec<u64>> = f
            .iter()
            .map(|x| {
                let mut y = x.clone();
                for &j in &w {
                    rr.reflect(j, &mut y);
                }
                y
            })
            .collect();
        let prod = witt_extend(&f, &g, &l).unwrap();
        for (a, b) in f.iter().zip(&g) {
            prop_assert_eq!(&prod.apply(a), b);
        }
    }

    #[test]
    fn spinor_norm_is_multiplicative(
        ((_p, m), us, vs) in prime_power().prop_flat_map(|(p, m)| (
            Just((p, m)),
            prop::collection::vec(unit(p, m), 0..5),
            prop::collection::vec(unit(p, m), 0..5),
        ))
    ) {
        let l = ResidueModule::new(m).unwrap();
        let full = ResidueSubmodule::full(l.clone());
        let prod = |us: &[u64]| {
            ReflectionProduct::from_vectors(l.clone(), us.iter().map(|a| represent_unit(&full, *a).unwrap()).collect()).unwrap()
        };
        let (a, b) = (prod(&us), prod(&vs));
        prop_assert_eq!(spinor_norm(&a.then(&b)), spinor_norm(&a).mul(&spinor_norm(&b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn search_methods_agree(m in 2u64..=6, seed in any::<u64>()) {
        let l = ResidueModule::new(m).unwrap();
        let sub = ResidueSubmodule::random(l, 8, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assume!(sub.free_rank() == 8);
        let budget = SearchBudget { max_length: 256, ..Default::default() };
        let theory = find_root_in_submodule(&sub, SearchMethod::Theory, budget).unwrap();
        let bfs = find_root_in_submodule(&sub, SearchMethod::OrbitBfs, SearchBudget::default()).unwrap();
        prop_assert!(theory.verify(&sub));
        prop_assert!(bfs.verify(&sub));
        prop_assert!(sub.contains(&theory.residue) && sub.contains(&bfs.residue));
    }
}

#[test]
fn mod_two_root_orbit_matches_catalog() {
    let rr = RootResidues::new(RANK, 2).unwrap();
    let start = rr.simple_root(1);
    let mut seen: HashSet<Vec<u64>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for j in 0..RANK {
            let mut y = x.clone();
            rr.reflect(j, &mut y);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    assert_eq!(seen.len(), residue_counts_mod2().1);
}
