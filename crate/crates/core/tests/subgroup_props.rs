use kummerian::fixtures;
use kummerian::format::parse;
use kummerian::subgroups::{
    abelianization_check, integer_invariants, kernel_presentation, restrict_orientation, substitute_words,
    FiniteQuotientMap, SubgroupError,
};
use kummerian::words::Word;
use kummerian::OrientedPresentation;
use kummerian_testkit::{fox_rewrite_matrix, random_oriented, rng};
use rand::Rng;

fn random_map(r: &mut impl Rng, op: &OrientedPresentation) -> Option<FiniteQuotientMap> {
    let p = op.prime();
    let orders = match r.gen_range(0..3) {
        0 => vec![p],
        1 => vec![p * p],
        _ => vec![p, p],
    };
    let images = (0..op.ngens()).map(|_| orders.iter().map(|&o| r.gen_range(0..o)).collect()).collect();
    FiniteQuotientMap::new(op.presentation(), orders, images).ok()
}

#[test]
fn schreier_properties_on_random_presentations() {
    let mut r = rng(99);
    let mut done = 0;
    while done < 500 {
        let op = parse(&random_oriented(&mut r, 3, 4, 3, 2)).unwrap();
        let Some(map) = random_map(&mut r, &op) else { continue };
        let pres = op.presentation();
        let sp = match kernel_presentation(pres, &map) {
            Ok(sp) => sp,
            Err(SubgroupError::NotSurjective) => continue,
            Err(e) => panic!("{e}"),
        };
        let index = map.index() as usize;
        assert_eq!(sp.generators.len(), index * (pres.ngens() - 1) + 1);
        assert_eq!(sp.presentation.relators().len(), index * pres.relators().len());

        for (k, w) in sp.presentation.relators().iter().enumerate() {
            let (ci, ri) = sp.relator_sources[k];
            let t = &sp.transversal[ci];
            let lifted = substitute_words(&w.expand_commutators(), &sp.embedding);
            let conj = t.mul(&pres.relators()[ri]).mul(&t.inverse()).expand_commutators().normalize();
            assert_eq!(lifted.expand_commutators().normalize(), conj);
        }

        let report = abelianization_check(&sp);
        let oracle = fox_rewrite_matrix(pres, &map, &sp);
        assert_eq!(report.matrix, oracle);

        let theta = restrict_orientation(&op, &sp).unwrap();
        let n = sp.generators.len();
        for _ in 0..4 {
            let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
            let prod = sp.embedding[a].mul(&sp.embedding[b]);
            let lhs = op.orientation().eval(&prod).unwrap();
            assert_eq!(lhs, theta.value(a).mul(theta.value(b)).unwrap());
        }
        done += 1;
    }
}

#[test]
fn free_group_kernels_have_no_relators() {
    for rank in 1..=3 {
        let op = parse(&fixtures::free(3, rank, 4)).unwrap();
        let map = FiniteQuotientMap::parse(op.presentation(), "x1:1", "p").unwrap();
        let sp = kernel_presentation(op.presentation(), &map).unwrap();
        let report = abelianization_check(&sp);
        assert!(report.matrix.is_empty());
        assert_eq!(report.free_rank, 3 * (rank - 1) + 1);
    }
}

#[test]
fn commutator_relator_kernel_abelianization() {
    // The index-3 kernel of Z^2 is again Z^2.
    let op = parse("prime 3\ngenerators x1 x2\nrelator [x1, x2]\n").unwrap();
    let map = FiniteQuotientMap::parse(op.presentation(), "x1:1", "p").unwrap();
    let sp = kernel_presentation(op.presentation(), &map).unwrap();
    let report = abelianization_check(&sp);
    assert_eq!(report.free_rank, 2);
    assert!(report.torsion.is_empty());
    let oracle = fox_rewrite_matrix(op.presentation(), &map, &sp);
    assert_eq!(integer_invariants(&oracle, sp.generators.len()).len(), 2);
}

#[test]
fn iterated_commutator_kernel_matches_oracle() {
    let op = parse(&fixtures::iterated_commutator(3, 3, 2, "0", 4)).unwrap();
    let map = FiniteQuotientMap::parse(op.presentation(), "x2:1", "p").unwrap();
    let sp = kernel_presentation(op.presentation(), &map).unwrap();
    assert_eq!(sp.presentation.relators().len(), 3);
    let report = abelianization_check(&sp);
    let oracle = fox_rewrite_matrix(op.presentation(), &map, &sp);
    let n = sp.generators.len();
    assert_eq!(integer_invariants(&report.matrix, n), integer_invariants(&oracle, n));
}

#[test]
fn amalgam_chase_generators() {
    let op = parse(&fixtures::amalgam(3, 2, 2, Some("1-p"), 4)).unwrap();
    let map = FiniteQuotientMap::parse(op.presentation(), "x:1,0; y0:0,1; z0:0,1", "p,p").unwrap();
    let sp = kernel_presentation(op.presentation(), &map).unwrap();
    let theta = restrict_orientation(&op, &sp).unwrap();
    let find = |w: &Word| sp.embedding.iter().position(|e| e == w || e.inverse() == *w);
    let x_p = Word::gen_pow(0, 3);
    let u = find(&x_p).expect("x^p is a Schreier generator");
    let expected = op.orientation().value(0).pow_int(3);
    assert_eq!(*theta.value(u), expected);
    // z0 y0^-1 is a Schreier generator; z0^-1 y0 is its conjugate by z0^-1.
    let s = find(&Word::gen(4).mul(&Word::gen_pow(1, -1))).expect("z0 y0^-1 is a Schreier generator");
    assert!(theta.value(s).is_one());
    let t = Word::gen_pow(4, -1).mul(&Word::gen(1));
    assert!(map.image_of(&t).iter().all(|&c| c == 0));
    assert!(op.orientation().eval(&t).unwrap().is_one());
}
