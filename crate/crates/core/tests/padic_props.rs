use kummerian::padic::{Padic, UnitOneP};
use proptest::prelude::*;

const PRIMES: [u64; 4] = [3, 5, 7, 11];

fn padic() -> impl Strategy<Value = (u64, u32, i128, i128, i128)> {
    (0..PRIMES.len(), 1u32..8, any::<i64>(), any::<i64>(), any::<i64>())
        .prop_map(|(i, k, a, b, c)| (PRIMES[i], k, a as i128, b as i128, c as i128))
}

fn unit(p: u64, prec: u32, k: i128) -> UnitOneP {
    UnitOneP::new(Padic::new(p, 1 + p as i128 * k, prec).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn ring_axioms((p, k, a, b, c) in padic()) {
        let (x, y, z) = (Padic::new(p, a, k).unwrap(), Padic::new(p, b, k).unwrap(), Padic::new(p, c, k).unwrap());
        let zero = Padic::zero(p, k).unwrap();
        let one = Padic::one(p, k).unwrap();
        prop_assert_eq!(x + y, y + x);
        prop_assert_eq!(x * y, y * x);
        prop_assert_eq!((x + y) + z, x + (y + z));
        prop_assert_eq!((x * y) * z, x * (y * z));
        prop_assert_eq!(x * (y + z), x * y + x * z);
        prop_assert_eq!(x + zero, x);
        prop_assert_eq!(x * one, x);
        prop_assert_eq!(x + x.neg(), zero);
        prop_assert_eq!(x - y, x + y.neg());
        prop_assert_eq!(x + y, Padic::new(p, a + b, k).unwrap());
        let m = (p as i128).pow(k);
        prop_assert_eq!(x * y, Padic::new(p, (a % m) * (b % m), k).unwrap());
        if x.is_unit() {
            prop_assert_eq!(x * x.inv_unit().unwrap(), one);
        }
    }

    #[test]
    fn qint_cocycle((p, k, a, b, c) in padic()) {
        let u = unit(p, k, a);
        let (l, m) = (Padic::new(p, b, k).unwrap(), Padic::new(p, c, k).unwrap());
        let lhs = u.qint(&(l + m)).unwrap();
        let rhs = u.qint(&l).unwrap() + *u.pow_padic(&l).unwrap().as_padic() * u.qint(&m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn qint_is_geometric_sum((p, k, a, _b, _c) in padic(), n in 0i128..60) {
        let u = unit(p, k, a);
        let mut sum = Padic::zero(p, k).unwrap();
        let mut power = Padic::one(p, k).unwrap();
        for _ in 0..n {
            sum = sum + power;
            power = power * *u.as_padic();
        }
        prop_assert_eq!(u.qint(&Padic::new(p, n, k).unwrap()).unwrap(), sum);
    }

    #[test]
    fn log_is_additive((p, k, a, b, _c) in padic()) {
        let (u, v) = (unit(p, k, a), unit(p, k, b));
        let lhs = u.mul(&v).unwrap().log1p().unwrap();
        prop_assert_eq!(lhs, u.log1p().unwrap() + v.log1p().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dlog_round_trip((p, k, a, b, _c) in padic()) {
        prop_assume!(k >= 2);
        let base = unit(p, k, a * p as i128 + 1);
        prop_assume!(base.depth() == kummerian::padic::Valuation::Finite(1));
        let lambda = Padic::new(p, b, k).unwrap();
        let v = base.pow_padic(&lambda).unwrap();
        let back = v.dlog(&base).unwrap();
        prop_assert_eq!(base.pow_padic(&back).unwrap().reduce(back.prec()), v.reduce(back.prec()));
        prop_assert_eq!(back, lambda.reduce(back.prec()));
    }
}
