//! Seeded random instances of the Steinberg relations, each checked by
//! collection and by the adjoint oracle.

use paperlab_core::chevalley::{ChevalleyError, ChevalleyGroup, Letter};
use paperlab_core::coefficients::Scalars;
use paperlab_core::rootsys::CoweightVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Outcome of one relation family.
#[derive(Debug, Clone, Serialize)]
pub struct RelationTally {
    pub relation: &'static str,
    pub trials: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub cartan_type: String,
    pub field: String,
    pub seed: u64,
    pub tallies: Vec<RelationTally>,
    pub oracle_pairs: u64,
    pub oracle_failures: u64,
}

impl RelationReport {
    pub fn failures(&self) -> u64 {
        self.tallies.iter().map(|t| t.failures).sum::<u64>() + self.oracle_failures
    }
}

pub const FAMILIES: [&str; 6] = [
    "torus-conjugation",
    "weyl-torus-conjugation",
    "root-group-additivity",
    "torus-commutativity",
    "torus-one-parameter",
    "commutator-formula",
];

/// Family index, left side, right side.
type Case<E> = (usize, Vec<Letter<E>>, Vec<Letter<E>>);

struct Sampler<'a, F: Scalars> {
    f: &'a F,
    elems: Option<Vec<F::Elem>>,
    rng: ChaCha8Rng,
}

impl<F: Scalars> Sampler<'_, F> {
    fn elem(&mut self) -> F::Elem {
        match &self.elems {
            Some(e) => e[self.rng.gen_range(0..e.len())].clone(),
            None => {
                let n = self.rng.gen_range(-9i64..=9);
                let d = self.rng.gen_range(1i64..=9);
                self.f.div(&self.f.from_i64(n), &self.f.from_i64(d)).unwrap()
            }
        }
    }

    fn unit(&mut self) -> F::Elem {
        loop {
            let x = self.elem();
            if !self.f.is_zero(&x) {
                return x;
            }
        }
    }

    fn coweight(&mut self, rank: usize) -> CoweightVector {
        CoweightVector((0..rank).map(|_| self.rng.gen_range(-2..=2)).collect())
    }
}

/// Runs `samples` instances of every family plus `pairs` oracle products.
pub fn relation_suite<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    seed: u64,
    samples: usize,
    pairs: usize,
) -> Result<RelationReport, ChevalleyError> {
    let rs = grp.root_system();
    let sc = grp.structure_constants();
    let f = grp.field();
    let mut s = Sampler { f, elems: f.elements(), rng: ChaCha8Rng::seed_from_u64(seed) };
    let mut tallies: Vec<RelationTally> =
        FAMILIES.iter().map(|&relation| RelationTally { relation, trials: 0, failures: 0, first_failure: None }).collect();
    let sum_pairs: Vec<(usize, usize)> = (0..rs.n_roots())
        .flat_map(|a| (0..rs.n_roots()).map(move |b| (a, b)))
        .filter(|&(a, b)| rs.sum(a, b).is_some())
        .collect();
    let rank = rs.rank();
    let inv_word = |l: &[Letter<F::Elem>]| -> Vec<Letter<F::Elem>> {
        l.iter().rev().map(|x| grp.invert_letter(x.clone())).collect()
    };

    for _ in 0..samples {
        let mut cases: Vec<Case<F::Elem>> = Vec::new();

        let lambda = s.coweight(rank);
        let alpha = s.rng.gen_range(0..rs.n_roots());
        let (a, t) = (s.elem(), s.unit());
        let pairing = rs.pairing(&lambda, alpha)?;
        let h = Letter::T(grp.torus_coweight(&lambda, &t));
        let h_inv = Letter::T(grp.torus_coweight(&lambda, &f.inv(&t).unwrap()));
        cases.push((
            0,
            vec![h.clone(), Letter::X(alpha, a.clone()), h_inv],
            vec![Letter::X(alpha, f.mul(&a, &f.pow(&t, pairing as i64)))],
        ));

        let beta = s.rng.gen_range(0..rs.n_roots());
        let sb = grp.s_letters(beta, &f.one())?;
        let coroot = rs.coroot_coweight(beta);
        let p = rs.pairing(&lambda, beta)?;
        let reflected = CoweightVector(lambda.0.iter().zip(&coroot.0).map(|(l, c)| l - p * c).collect());
        let mut lhs = sb.clone();
        lhs.push(h.clone());
        lhs.extend(inv_word(&sb));
        cases.push((1, lhs, vec![Letter::T(grp.torus_coweight(&reflected, &t))]));

        let b = s.elem();
        cases.push((
            2,
            vec![Letter::X(alpha, a.clone()), Letter::X(alpha, b.clone())],
            vec![Letter::X(alpha, f.add(&a, &b))],
        ));

        let mu = s.coweight(rank);
        let t2 = s.unit();
        let h2 = Letter::T(grp.torus_coweight(&mu, &t2));
        cases.push((3, vec![h.clone(), h2.clone()], vec![h2, h.clone()]));
        cases.push((
            4,
            vec![h, Letter::T(grp.torus_coweight(&lambda, &t2))],
            vec![Letter::T(grp.torus_coweight(&lambda, &f.mul(&t, &t2)))],
        ));

        // [x_b(u), x_a(t)] = x_b(-u) x_a(-t) x_b(u) x_a(t)
        let (ra, rb) = sum_pairs[s.rng.gen_range(0..sum_pairs.len())];
        let (ta, ub) = (s.elem(), s.elem());
        let lhs = vec![
            Letter::X(rb, f.neg(&ub)),
            Letter::X(ra, f.neg(&ta)),
            Letter::X(rb, ub.clone()),
            Letter::X(ra, ta.clone()),
        ];
        let mt = f.neg(&ta);
        let rhs = sc
            .commutator(ra, rb)
            .iter()
            .map(|term| {
                let c = f.mul(
                    &f.from_i64(term.coeff as i64),
                    &f.mul(&f.pow(&mt, term.i as i64), &f.pow(&ub, term.j as i64)),
                );
                Letter::X(term.root as usize, c)
            })
            .collect();
        cases.push((5, lhs, rhs));

        for (k, lhs, rhs) in cases {
            let l = grp.evaluate(&lhs)?;
            let r = grp.evaluate(&rhs)?;
            let ok = l == r && grp.oracle_agrees(&l, &lhs) && grp.oracle_agrees(&r, &rhs);
            let tally = &mut tallies[k];
            tally.trials += 1;
            if !ok {
                tally.failures += 1;
                tally.first_failure.get_or_insert_with(|| format!("{lhs:?} vs {rhs:?}"));
            }
        }
    }

    let mut oracle_failures = 0;
    for _ in 0..pairs {
        let w1 = random_word(grp, &mut s, 6);
        let w2 = random_word(grp, &mut s, 6);
        let g = grp.multiply(&grp.evaluate(&w1)?, &grp.evaluate(&w2)?)?;
        let mut both = w1;
        both.extend(w2);
        if !grp.oracle_agrees(&g, &both) {
            oracle_failures += 1;
        }
    }

    Ok(RelationReport {
        cartan_type: rs.cartan_type().to_string(),
        field: f.descriptor().to_string(),
        seed,
        tallies,
        oracle_pairs: pairs as u64,
        oracle_failures,
    })
}

fn random_word<F: Scalars>(grp: &ChevalleyGroup<F>, s: &mut Sampler<'_, F>, n: usize) -> Vec<Letter<F::Elem>> {
    let rs = grp.root_system();
    (0..n)
        .map(|_| match s.rng.gen_range(0..8) {
            0 => {
                let lambda = s.coweight(rs.rank());
                let t = s.unit();
                Letter::T(grp.torus_coweight(&lambda, &t))
            }
            1 => Letter::S(s.rng.gen_range(0..rs.rank())),
            _ => {
                let a = s.rng.gen_range(0..rs.n_roots());
                Letter::X(a, s.unit())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use paperlab_core::coefficients::{FiniteField, Rationals};
    use paperlab_core::rootsys::CartanType;

    #[test]
    fn small_suites_pass() {
        let grp = ChevalleyGroup::new(CartanType::A(3), FiniteField::prime(5).unwrap()).unwrap();
        let r = relation_suite(&grp, 0, 40, 20).unwrap();
        assert_eq!(r.failures(), 0, "{r:?}");
        assert!(r.tallies.iter().all(|t| t.trials == 40));
        let grp = ChevalleyGroup::new(CartanType::F4, Rationals).unwrap();
        assert_eq!(relation_suite(&grp, 1, 10, 5).unwrap().failures(), 0);
    }

    #[test]
    fn seed_is_reproducible() {
        let grp = ChevalleyGroup::new(CartanType::D(4), FiniteField::prime(7).unwrap()).unwrap();
        let a = serde_json::to_string(&relation_suite(&grp, 9, 10, 3).unwrap()).unwrap();
        let b = serde_json::to_string(&relation_suite(&grp, 9, 10, 3).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
