use num_rational::BigRational;
use paperlab_core::coefficients::{quadratic_roots, rat, FiniteField, Rationals, Scalars};
use proptest::prelude::*;

/// Every finite field order the crate accepts, up to 81.
fn orders() -> Vec<u64> {
    vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 25, 27, 49]
}

#[test]
fn multiplicative_group_has_order_q_minus_one() {
    for q in orders() {
        let f = FiniteField::of_order(q).unwrap();
        let els = f.elements().unwrap();
        assert_eq!(els.len() as u64, q);
        let mut generators = 0;
        for x in els.iter().filter(|x| !f.is_zero(x)) {
            assert!(f.is_one(&f.pow(x, q as i64 - 1)), "GF({q}): x^(q-1) != 1");
            // Element order by repeated multiplication.
            let mut y = *x;
            let mut k = 1;
            while !f.is_one(&y) {
                y = f.mul(&y, x);
                k += 1;
            }
            assert_eq!((q - 1) % k, 0);
            generators += usize::from(k == q - 1);
        }
        assert!(generators > 0, "GF({q}) multiplicative group is cyclic");
    }
}

#[test]
fn render_parse_round_trip() {
    for q in orders() {
        let f = FiniteField::of_order(q).unwrap();
        for x in f.elements().unwrap() {
            assert_eq!(f.parse(&f.render(&x)).unwrap(), x, "GF({q})");
        }
    }
}

#[test]
fn quadratic_roots_match_full_evaluation() {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let f = FiniteField::of_order(q).unwrap();
        let els = f.elements().unwrap();
        for a in &els {
            for b in &els {
                if f.is_zero(a) && f.is_zero(b) {
                    continue;
                }
                for c in &els {
                    let got = quadratic_roots(&f, a, b, c).unwrap();
                    let want: Vec<_> = els
                        .iter()
                        .filter(|x| {
                            let ax2 = f.mul(a, &f.mul(x, x));
                            f.is_zero(&f.add(&f.add(&ax2, &f.mul(b, x)), c))
                        })
                        .cloned()
                        .collect();
                    assert_eq!(got, want, "GF({q})");
                }
            }
        }
    }
}

#[test]
fn quoted_quadratics() {
    let f2 = FiniteField::prime(2).unwrap();
    assert!(quadratic_roots(&f2, &1, &1, &1).unwrap().is_empty());
    let f5 = FiniteField::prime(5).unwrap();
    assert_eq!(quadratic_roots(&f5, &1, &1, &4).unwrap(), vec![2]);
    assert_eq!(f5.inv(&2), Some(3));
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn finite_field_axioms(q in prop::sample::select(orders()), i in 0usize..81, j in 0usize..81, k in 0usize..81) {
        let f = FiniteField::of_order(q).unwrap();
        let els = f.elements().unwrap();
        let (a, b, c) = (&els[i % els.len()], &els[j % els.len()], &els[k % els.len()]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
        prop_assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
        prop_assert!(f.is_zero(&f.add(a, &f.neg(a))));
        if !f.is_zero(b) {
            prop_assert_eq!(f.mul(&f.div(a, b).unwrap(), b), *a);
            prop_assert_eq!(f.pow(b, -3), f.inv(&f.pow(b, 3)).unwrap());
        }
    }

    #[test]
    fn rational_quadratics_recover_their_roots(r1 in small_rational(), r2 in small_rational(), k in 1i64..5) {
        let f = Rationals;
        let k = f.from_i64(k);
        // k (X - r1)(X - r2)
        let b = f.neg(&f.mul(&k, &f.add(&r1, &r2)));
        let c = f.mul(&k, &f.mul(&r1, &r2));
        let mut got = quadratic_roots(&f, &k, &b, &c).unwrap();
        got.sort();
        let mut want = vec![r1.clone(), r2.clone()];
        want.sort();
        want.dedup();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn rational_roots_are_roots(a in small_rational(), b in small_rational(), c in small_rational()) {
        prop_assume!(!Rationals.is_zero(&a));
        let f = Rationals;
        for x in quadratic_roots(&f, &a, &b, &c).unwrap() {
            let v = f.add(&f.add(&f.mul(&a, &f.mul(&x, &x)), &f.mul(&b, &x)), &c);
            prop_assert!(f.is_zero(&v));
        }
    }
}
