use std::collections::BTreeSet;

use paperlab_core::buildings::{
    cappedness_pairs, displacement_of, opposes_type, opposition_diagram, residue_image_collection,
    residue_image_formula, Building, ResiduePoint,
};
use paperlab_core::chevalley::expr::parse_letters;
use paperlab_core::chevalley::{ChevalleyGroup, Letter};
use paperlab_core::coefficients::{FiniteField, Scalars};
use paperlab_core::rootsys::{CartanType, RootSystem};
use paperlab_core::weyl::{conjugacy_class, for_each_element, w0, WeylElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn building(t: CartanType, q: u64) -> Building<FiniteField> {
    let grp = ChevalleyGroup::new(t, FiniteField::of_order(q).unwrap()).unwrap();
    Building::new(grp).unwrap()
}

fn letters(b: &Building<FiniteField>, expr: &str) -> Vec<Letter<u16>> {
    parse_letters(b.group(), expr).unwrap()
}

/// Degrees of the basic invariants.
fn degrees(t: CartanType) -> Vec<u32> {
    match t {
        CartanType::A(n) => (2..=n as u32 + 1).collect(),
        CartanType::D(n) => {
            let mut d: Vec<u32> = (1..n as u32).map(|k| 2 * k).collect();
            d.push(n as u32);
            d
        }
        CartanType::E6 => vec![2, 5, 6, 8, 9, 12],
        CartanType::F4 => vec![2, 6, 8, 12],
        _ => unreachable!(),
    }
}

#[test]
fn chamber_count_is_the_poincare_product() {
    let cases = [
        (CartanType::A(1), 7),
        (CartanType::A(2), 2),
        (CartanType::A(3), 4),
        (CartanType::A(5), 2),
        (CartanType::D(4), 2),
        (CartanType::D(4), 3),
        (CartanType::D(5), 5),
        (CartanType::E6, 2),
        (CartanType::F4, 3),
    ];
    for (t, q) in cases {
        let b = building(t, q);
        let q = q as u128;
        let product: u128 = degrees(t).iter().map(|&d| (q.pow(d) - 1) / (q - 1)).product();
        assert_eq!(b.chamber_count(), product, "{t} over GF({q})");
    }
    assert_eq!(building(CartanType::A(2), 2).chamber_count(), 21);
    assert_eq!(building(CartanType::D(4), 2).chamber_count(), 42_525);
}

#[test]
fn scan_visits_every_chamber_once() {
    let b = building(CartanType::A(2), 3);
    let all: Vec<_> = b.chambers().unwrap().collect();
    let distinct: BTreeSet<_> = all.iter().map(|c| (c.w.clone(), c.coords.clone())).collect();
    assert_eq!(all.len() as u128, b.chamber_count());
    assert_eq!(distinct.len(), all.len());
    // The w0 cell alone holds q^l(w0) chambers.
    let top = w0(b.root_system());
    assert_eq!(all.iter().filter(|c| c.w == top).count(), 27);
}

#[test]
fn displacement_is_delta_symmetric() {
    let b = building(CartanType::D(4), 3);
    let grp = b.group();
    let theta = letters(&b, "x[phi](1) x[-phi](1) x[a2](2)");
    let theta_inv: Vec<_> = theta.iter().rev().map(|l| grp.invert_letter(l.clone())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let cell = rng.gen_range(0..b.cells().len());
        let size = 3u64.pow(b.cells()[cell].roots.len() as u32);
        let ch = b.chamber(cell, rng.gen_range(0..size));
        let g = b.rep_letters(&ch);
        let d = displacement_of(grp, &theta, &g).unwrap();
        assert_eq!(d, b.displacement(&theta, &ch).unwrap());
        // delta(thetaC, C) computed as the displacement of theta^-1 at thetaC.
        let mut tg = theta.clone();
        tg.extend(g);
        let back = displacement_of(grp, &theta_inv, &tg).unwrap();
        assert_eq!(back, d.inverse());
    }
}

#[test]
fn borel_elements_fix_the_base_chamber() {
    let b = building(CartanType::D(4), 5);
    let rs = b.root_system();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let base = b.chamber(0, 0);
    assert!(base.w.is_identity());
    for _ in 0..100 {
        let mut theta = Vec::new();
        for _ in 0..5 {
            theta.push(Letter::X(rng.gen_range(0..rs.n_pos()), rng.gen_range(0..5u16)));
        }
        theta.push(Letter::T(b.group().torus_coroot(rs.simple(rng.gen_range(0..4)), &rng.gen_range(1..5u16))));
        assert!(b.displacement(&theta, &base).unwrap().is_identity());
    }
}

#[test]
fn quoted_displacements() {
    let a5 = building(CartanType::A(5), 2);
    let rs = a5.root_system();
    let theta = letters(&a5, "x[phi](1) x[-phi](1)");
    let d = a5.displacement(&theta, &a5.chamber(0, 0)).unwrap();
    assert_eq!(d, WeylElement::reflection(rs, rs.highest_root()));
    let id = a5.displacement_spectrum(&[]).unwrap();
    assert_eq!(id.counts.len(), 1);
    assert!(opposition_diagram(rs, id.support()).is_empty());
}

#[test]
fn a3_double_elation_is_not_domestic() {
    let b = building(CartanType::A(3), 2);
    let rep = b.displacement_spectrum(&letters(&b, "x[phi](1) x[-phi](1)")).unwrap();
    assert!(rep.contains(&w0(b.root_system())));
}

#[test]
fn d4_long_root_elation_is_uniclass() {
    let b = building(CartanType::D(4), 2);
    let rs = b.root_system();
    let rep = b.displacement_spectrum(&letters(&b, "x[phi](1)")).unwrap();
    let class: BTreeSet<_> = conjugacy_class(rs, &WeylElement::reflection(rs, rs.highest_root())).into_iter().collect();
    assert!(rep.support().all(|w| w.is_identity() || class.contains(w)));
    assert_eq!(rep.counts.values().sum::<u64>(), 42_525);
    assert_eq!(opposition_diagram(rs, rep.support()).encircled, vec![1]);
}

#[test]
fn diagram_is_monotone_in_the_spectrum() {
    let b = building(CartanType::A(4), 2);
    let rs = b.root_system();
    let rep = b.displacement_spectrum(&letters(&b, "x[phi](1) x[-phi](1)")).unwrap();
    let full: BTreeSet<usize> = opposition_diagram(rs, rep.support()).encircled.into_iter().collect();
    let support: Vec<&WeylElement> = rep.support().collect();
    for skip in 0..support.len() {
        let part = support.iter().enumerate().filter(|(i, _)| i % 3 != skip % 3).map(|(_, w)| *w);
        let sub: BTreeSet<usize> = opposition_diagram(rs, part).encircled.into_iter().collect();
        assert!(sub.is_subset(&full));
    }
}

#[test]
fn capped_when_q_exceeds_two() {
    for t in [CartanType::A(3), CartanType::A(4)] {
        let b = building(t, 3);
        let rs = b.root_system();
        let rep = b.displacement_spectrum(&letters(&b, "x[phi](1) x[-phi](1)")).unwrap();
        let diagram = opposition_diagram(rs, rep.support());
        assert!(diagram.encircled.len() >= 2, "{t}: {}", diagram.label());
        let pairs = cappedness_pairs(rs, &rep, &diagram);
        assert!(!pairs.is_empty());
        assert!(pairs.iter().all(|p| p.2), "{t}: {pairs:?}");
    }
}

/// Elements of the parabolic subgroup on `j`, by closure.
fn parabolic(rs: &RootSystem, j: &[usize]) -> Vec<WeylElement> {
    let mut seen = BTreeSet::from([WeylElement::identity(rs)]);
    let mut frontier = vec![WeylElement::identity(rs)];
    while let Some(w) = frontier.pop() {
        for &i in j {
            let v = w.right_mul_simple(rs, i);
            if seen.insert(v.clone()) {
                frontier.push(v);
            }
        }
    }
    seen.into_iter().collect()
}

#[test]
fn oppositeness_matches_brute_force_double_cosets() {
    for t in [CartanType::A(3), CartanType::D(4)] {
        let rs = RootSystem::build(t).unwrap();
        let top = w0(&rs);
        let n = rs.rank();
        let mut all = Vec::new();
        for_each_element(&rs, |w| all.push(w.clone())).unwrap();
        for j in 0..n {
            // Opposite of type j is type n-1-j in A, j itself in D4.
            let jj = if matches!(t, CartanType::A(_)) { n - 1 - j } else { j };
            let k: Vec<usize> = (0..n).filter(|&i| i != j && i != jj).collect();
            let wk = parabolic(&rs, &k);
            let top_coset: BTreeSet<WeylElement> =
                wk.iter().flat_map(|a| wk.iter().map(|b| a.multiply(&top).multiply(b))).collect();
            for d in &all {
                assert_eq!(opposes_type(&rs, d, j), top_coset.contains(d), "{t} type {j}");
            }
        }
    }
}

#[test]
fn residue_formula_matches_collection() {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let f = FiniteField::of_order(q).unwrap();
        let grp = ChevalleyGroup::new(CartanType::A(2), f.clone()).unwrap();
        let els = f.elements().unwrap();
        for a in &els {
            let mut pts = vec![ResiduePoint::Base];
            pts.extend(els.iter().cloned().map(ResiduePoint::At));
            for p in &pts {
                assert_eq!(residue_image_formula(&f, a, p), residue_image_collection(&grp, 1, a, p).unwrap(), "GF({q}) a={a}");
            }
        }
    }
}
