use kummerian::massey::{UniTri, UniTriTarget};
use kummerian::presentations::UnitsTarget;
use kummerian::words::{evaluate, magnus2, Atom, Word};
use kummerian::{Padic, UnitOneP};
use kummerian_testkit::magnus_oracle;
use proptest::prelude::*;

const D: usize = 3;
const P: u64 = 3;

fn word() -> impl Strategy<Value = Word> {
    let leaf = prop::collection::vec((0..D, -12i64..=12), 0..6)
        .prop_map(|v| Word::from_atoms(v.into_iter().map(|(gen, exp)| Atom::Gen { gen, exp }).collect()));
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop::collection::vec((inner.clone(), inner, any::<bool>()), 1..3).prop_map(|parts| {
            parts.into_iter().fold(Word::identity(), |acc, (a, b, comm)| {
                if comm {
                    acc.mul(&Word::commutator(a, b))
                } else {
                    acc.mul(&a).mul(&b.inverse())
                }
            })
        })
    })
}

fn unitri() -> impl Strategy<Value = UniTri> {
    prop::collection::vec(0..P, 6).prop_map(|v| {
        let mut m = UniTri::identity(4, P);
        let mut k = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                m.set(i, j, v[k]);
                k += 1;
            }
        }
        m
    })
}

fn units() -> impl Strategy<Value = Vec<UnitOneP>> {
    prop::collection::vec(0i128..729, D)
        .prop_map(|v| v.into_iter().map(|k| UnitOneP::new(Padic::new(P, 1 + 3 * k, 6).unwrap()).unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn evaluation_is_a_homomorphism(a in word(), b in word(), gens in prop::collection::vec(unitri(), D)) {
        let t = UniTriTarget { prime: P, size: 4 };
        let ab = evaluate(&a.mul(&b), &gens, &t).unwrap();
        prop_assert_eq!(ab, evaluate(&a, &gens, &t).unwrap().mul(&evaluate(&b, &gens, &t).unwrap()));
        prop_assert!(evaluate(&a.mul(&a.inverse()), &gens, &t).unwrap().is_identity());
    }

    #[test]
    fn structural_commutators_match_expansion(w in word(), gens in prop::collection::vec(unitri(), D), th in units()) {
        let t = UniTriTarget { prime: P, size: 4 };
        let flat = w.expand_commutators();
        prop_assert_eq!(evaluate(&w, &gens, &t).unwrap(), evaluate(&flat, &gens, &t).unwrap());
        let u = UnitsTarget { prime: P, precision: 6 };
        prop_assert_eq!(evaluate(&w, &th, &u).unwrap(), evaluate(&flat, &th, &u).unwrap());
    }

    #[test]
    fn magnus_matches_polynomial_oracle(w in word()) {
        let m = magnus2(&w, P, D).unwrap();
        let (linear, quad) = magnus_oracle(&w, P, D);
        prop_assert_eq!(&m.linear, &linear);
        prop_assert_eq!(&m.quad, &quad);
    }

    #[test]
    fn magnus_shuffle_rule(w in word()) {
        let m = magnus2(&w, P, D).unwrap();
        for i in 0..D {
            for j in 0..D {
                let lhs = m.linear[i] * m.linear[j] % P;
                let rhs = if i == j {
                    (2 * m.quad_at(i, i) + m.linear[i]) % P
                } else {
                    (m.quad_at(i, j) + m.quad_at(j, i)) % P
                };
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn exponent_sums_are_linear_part(w in word()) {
        let m = magnus2(&w, P, D).unwrap();
        let sums = w.exponent_sums(D);
        for g in 0..D {
            prop_assert_eq!(sums[g].rem_euclid(P as i64) as u64, m.linear[g]);
        }
    }
}
