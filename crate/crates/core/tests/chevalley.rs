use paperlab_core::chevalley::{ChevalleyGroup, Letter};
use paperlab_core::coefficients::{rat, FiniteField, Rationals, Scalars};
use paperlab_core::rootsys::{CartanType, CoweightVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const WORDS_PER_TYPE: usize = 1000;

fn all_types() -> Vec<CartanType> {
    let mut v: Vec<CartanType> = (1..=7).map(CartanType::A).collect();
    v.extend((4..=8).map(CartanType::D));
    v.extend([CartanType::E6, CartanType::E7, CartanType::E8, CartanType::F4]);
    v
}

fn random_word<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    rng: &mut ChaCha8Rng,
    scalar: &mut impl FnMut(&mut ChaCha8Rng) -> F::Elem,
) -> Vec<Letter<F::Elem>> {
    let rs = grp.root_system();
    let f = grp.field();
    let n = rng.gen_range(1..=8);
    (0..n)
        .map(|_| match rng.gen_range(0..10) {
            0 => {
                let lambda = CoweightVector((0..rs.rank()).map(|_| rng.gen_range(-2..=2)).collect());
                let mut t = scalar(rng);
                while f.is_zero(&t) {
                    t = scalar(rng);
                }
                Letter::T(grp.torus_coweight(&lambda, &t))
            }
            1 => Letter::S(rng.gen_range(0..rs.rank())),
            2 => Letter::SInv(rng.gen_range(0..rs.rank())),
            _ => Letter::X(rng.gen_range(0..rs.n_roots()), scalar(rng)),
        })
        .collect()
}

fn check_type<F: Scalars>(grp: &ChevalleyGroup<F>, seed: u64, mut scalar: impl FnMut(&mut ChaCha8Rng) -> F::Elem) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = grp.root_system().cartan_type();
    for i in 0..WORDS_PER_TYPE {
        let w = random_word(grp, &mut rng, &mut scalar);
        let g = grp.evaluate(&w).unwrap();
        assert!(grp.oracle_agrees(&g, &w), "{t} word {i}: {w:?}");
        assert_eq!(grp.renormalize(&g).unwrap(), g, "{t}: normal form not stable");
        let gi = grp.inverse(&g).unwrap();
        assert_eq!(grp.bruhat_cell(&gi), &grp.bruhat_cell(&g).inverse(), "{t}: cell of inverse");
        assert!(grp.is_identity(&grp.multiply(&g, &gi).unwrap()));
    }
}

#[test]
fn collection_matches_adjoint_oracle_gf5() {
    all_types().into_par_iter().for_each(|t| {
        let grp = ChevalleyGroup::new(t, FiniteField::prime(5).unwrap()).unwrap();
        check_type(&grp, 5, |r| r.gen_range(0..5u16));
    });
}

#[test]
fn collection_matches_adjoint_oracle_rationals() {
    all_types().into_par_iter().for_each(|t| {
        let grp = ChevalleyGroup::new(t, Rationals).unwrap();
        check_type(&grp, 7, |r| rat(r.gen_range(-6..=6), r.gen_range(1..=6)));
    });
}

#[test]
fn adjoint_matrix_is_multiplicative() {
    for t in [CartanType::D(4), CartanType::E8] {
        let grp = ChevalleyGroup::new(t, FiniteField::prime(5).unwrap()).unwrap();
        let f = grp.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut scalar = |r: &mut ChaCha8Rng| r.gen_range(0..5u16);
        for _ in 0..200 {
            let g1 = grp.evaluate(&random_word(&grp, &mut rng, &mut scalar)).unwrap();
            let g2 = grp.evaluate(&random_word(&grp, &mut rng, &mut scalar)).unwrap();
            let (m1, m2) = (grp.adjoint_matrix(&g1), grp.adjoint_matrix(&g2));
            let m12 = grp.adjoint_matrix(&grp.multiply(&g1, &g2).unwrap());
            // Matrices are stored as columns: m[j][i] is entry (i, j).
            let n = m1.len();
            for i in 0..n {
                for j in 0..n {
                    let mut s = f.zero();
                    for k in 0..n {
                        s = f.add(&s, &f.mul(&m1[k][i], &m2[j][k]));
                    }
                    assert_eq!(m12[j][i], s);
                }
            }
        }
    }
}
