use std::time::Instant;

use kummerian::fixtures;
use kummerian::format::parse;
use kummerian::kummer::{is_kummerian, kg_annihilation_check, search_orientations, solve_cocycle};
use kummerian::padic::Padic;
use kummerian::words::Word;
use kummerian::OrientedPresentation;
use kummerian_testkit::{random_oriented, rng};
use rand::Rng;

fn classes(text: &str, precision: u32) -> Vec<Vec<u64>> {
    let op = parse(text).unwrap();
    let s = search_orientations(op.presentation(), precision, 10_000_000).unwrap();
    s.classes.iter().map(|c| c.iter().map(Padic::value).collect()).collect()
}

#[test]
fn amalgam_forces_one_minus_p() {
    let start = Instant::now();
    let found = classes(&fixtures::amalgam(3, 2, 2, None, 4), 4);
    assert!(start.elapsed().as_secs() < 10);
    // θ(x) = 1 - p = -2 ≡ 25 mod 27.
    assert_eq!(found, vec![vec![25, 1, 1, 1, 1, 1, 1]]);
    for (d1, d2) in [(0, 2), (2, 0)] {
        let found = classes(&fixtures::amalgam(3, d1, d2, None, 4), 4);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0][0], 25);
        assert!(found[0][1..].iter().all(|&v| v == 1));
    }
}

#[test]
fn raag_forces_one_plus_q() {
    assert_eq!(classes(&fixtures::raag(3, "p", None, 4), 4), vec![vec![4, 1, 1]]);
}

#[test]
fn iterated_commutator_orientations() {
    assert!(classes(&fixtures::iterated_commutator(3, 3, 2, "p", 3), 3).is_empty());
    let found = classes(&fixtures::iterated_commutator(3, 3, 2, "0", 3), 3);
    assert_eq!(found, vec![vec![1, 1, 1], vec![4, 1, 1], vec![7, 1, 1]]);
}

#[test]
fn commutator_pair_only_trivial() {
    let found = classes(&fixtures::commutator_pair(3, 2, 2, 4), 4);
    assert_eq!(found, vec![vec![1; 7]]);
}

#[test]
fn finite_cyclic_groups_fail_one_level_up() {
    for k in 1..=2u32 {
        let v = is_kummerian(&parse(&fixtures::cyclic(3, k, 4)).unwrap()).unwrap();
        assert_eq!(v.failing_level(), Some(k + 1));
        assert!(v.levels[..k as usize].iter().all(|l| l.passes));
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

fn check_inheritance(op: &OrientedPresentation) -> usize {
    let trivial: Vec<usize> = (0..op.ngens()).filter(|&g| op.orientation().value(g).is_one()).collect();
    let mut count = 0;
    for s in subsets(trivial.len()) {
        let kill: Vec<usize> = s.iter().map(|&i| trivial[i]).collect();
        let q = op.quotient_by_generators(&kill).unwrap();
        assert!(q.validate().unwrap().is_valid());
        assert!(is_kummerian(&q).unwrap().holds(), "killing {kill:?} in {op}");
        count += 1;
    }
    count
}

#[test]
fn kummerian_quotients_by_generators_stay_kummerian() {
    let mut total = 0;
    for text in [
        fixtures::amalgam(3, 2, 2, Some("1-p"), 4),
        fixtures::amalgam(3, 0, 2, Some("1-p"), 4),
        fixtures::raag(3, "p", Some("1+p"), 4),
        fixtures::commutator_pair(3, 2, 2, 4),
        fixtures::iterated_commutator(3, 3, 2, "0", 4),
        fixtures::free(3, 3, 4),
    ] {
        let op = parse(&text).unwrap();
        assert!(is_kummerian(&op).unwrap().holds());
        total += check_inheritance(&op);
    }
    assert!(total >= 200, "{total}");
}

#[test]
fn random_kummerian_minimal_quotients() {
    let mut r = rng(11);
    let mut seen = 0;
    while seen < 500 {
        let op = parse(&random_oriented(&mut r, 3, 4, 4, 2)).unwrap();
        if op.presentation().is_minimal() && is_kummerian(&op).unwrap().holds() {
            check_inheritance(&op);
            seen += 1;
        }
    }
}

fn random_word(r: &mut impl Rng, d: usize) -> Word {
    (0..r.gen_range(0..8)).fold(Word::identity(), |w, _| {
        let g = r.gen_range(0..d);
        if r.gen_bool(0.2) {
            w.mul(&Word::commutator(Word::gen(g), Word::gen(r.gen_range(0..d))))
        } else {
            w.mul(&Word::gen_pow(g, r.gen_range(-4..=4)))
        }
    })
}

#[test]
fn solved_cocycles_satisfy_the_cocycle_rule() {
    let mut r = rng(5);
    let op = parse(&fixtures::amalgam(3, 2, 2, Some("1-p"), 4)).unwrap();
    let d = op.ngens();
    for _ in 0..500 {
        let values: Vec<Padic> = (0..d).map(|_| Padic::new(3, r.gen_range(0..81), 4).unwrap()).collect();
        let c = solve_cocycle(&op, &values).unwrap();
        let (a, b) = (random_word(&mut r, d), random_word(&mut r, d));
        let theta_a = *op.orientation().eval(&a).unwrap().as_padic();
        assert_eq!(c.eval(&a.mul(&b)).unwrap(), c.eval(&a).unwrap() + theta_a * c.eval(&b).unwrap());
        for (i, rel) in op.presentation().relators().iter().enumerate() {
            assert!(c.eval(rel).unwrap().is_zero(), "relator {i}");
        }
    }
}

#[test]
fn cocycles_vanish_on_twisted_commutators() {
    // h^{-θ(g)} g h g^{-1} with θ(h) = 1 lies in K(G).
    let op = parse(&fixtures::amalgam(3, 2, 2, Some("1-p"), 4)).unwrap();
    let x = Word::gen(0);
    let y1 = Word::gen(2);
    let w = Word::gen_pow(2, 2).mul(&x).mul(&y1).mul(&x.inverse());
    assert!(kg_annihilation_check(&op, &w).unwrap());
    assert!(!kg_annihilation_check(&op, &y1).unwrap());
}
