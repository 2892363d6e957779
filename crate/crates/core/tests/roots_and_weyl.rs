use paperlab_core::rootsys::{CartanType, RootSystem, RootSystemData, StructureConstants};
use paperlab_core::weyl::{
    complement, for_each_element, longest_element, min_double_coset_rep, w0, WeylElement, Word,
};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn all_types() -> Vec<CartanType> {
    let mut v: Vec<CartanType> = (1..=7).map(CartanType::A).collect();
    v.extend((4..=8).map(CartanType::D));
    v.extend([CartanType::E6, CartanType::E7, CartanType::E8, CartanType::F4]);
    v
}

fn classical_root_count(t: CartanType) -> usize {
    match t {
        CartanType::A(n) => n as usize * (n as usize + 1),
        CartanType::D(n) => 2 * n as usize * (n as usize - 1),
        CartanType::E6 => 72,
        CartanType::E7 => 126,
        CartanType::E8 => 240,
        CartanType::F4 => 48,
    }
}

#[test]
fn root_counts_are_classical() {
    for t in all_types() {
        assert_eq!(RootSystem::build(t).unwrap().n_roots(), classical_root_count(t), "{t}");
    }
}

#[test]
fn reflections_are_involutions() {
    for t in all_types() {
        let rs = RootSystem::build(t).unwrap();
        for a in 0..rs.n_roots() {
            for b in 0..rs.n_roots() {
                assert_eq!(rs.reflect(a, rs.reflect(a, b)), b);
            }
        }
    }
}

#[test]
fn e8_reflection_length_is_twice_height_minus_one() {
    let rs = RootSystem::build(CartanType::E8).unwrap();
    for a in 0..rs.n_pos() {
        let s = WeylElement::reflection(&rs, a);
        let inversions = (0..rs.n_pos()).filter(|&b| !rs.is_positive(s.act(b))).count();
        assert_eq!(s.length(), inversions);
        assert_eq!(s.length() as i32, 2 * rs.height(a) - 1, "{}", rs.render_root(a));
    }
}

#[test]
fn golden_root_system_data() {
    for (t, file) in [(CartanType::A(2), include_str!("golden/a2.json")), (CartanType::D(4), include_str!("golden/d4.json"))] {
        let rs = RootSystem::build(t).unwrap();
        let sc = StructureConstants::new(&rs).unwrap();
        let want: RootSystemData = serde_json::from_str(file).unwrap();
        assert_eq!(RootSystemData::new(&rs, &sc), want, "{t}");
    }
}

#[test]
fn longest_parabolic_complements_in_e8() {
    let rs = RootSystem::build(CartanType::E8).unwrap();
    let top = w0(&rs);
    for j in 0..8 {
        let wj = longest_element(&rs, &complement(&rs, &[j]));
        assert_eq!(wj.length() + wj.multiply(&top).length(), top.length());
    }
}

#[test]
fn magic_word_reducedness_is_its_inversion_count() {
    let rs = RootSystem::build(CartanType::E8).unwrap();
    let w = Word::parse("134265423456765423143546876542314354265431765876", 8).unwrap();
    let u = WeylElement::from_word(&rs, &w);
    let inversions = (0..rs.n_pos()).filter(|&b| !rs.is_positive(u.act(b))).count();
    assert_eq!(u.length(), inversions);
    let reduced = inversions == w.len();
    // Reducedness is not claimed anywhere; just keep both readings consistent.
    assert_eq!(reduced, u.reduced_word(&rs).len() == w.len());
    println!("48-letter word reduced: {reduced} (length {})", u.length());
}

/// All elements of the parabolic subgroup generated by `j`, by closure.
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
fn double_coset_reps_are_minimal_by_brute_force() {
    let rs = RootSystem::build(CartanType::D(4)).unwrap();
    let mut all = Vec::new();
    for_each_element(&rs, |w| all.push(w.clone())).unwrap();
    for (j, k) in [(vec![0], vec![1]), (vec![0, 2], vec![1, 3]), (vec![1, 2, 3], vec![0, 1])] {
        let wj = parabolic(&rs, &j);
        let wk = parabolic(&rs, &k);
        for w in all.iter().step_by(7) {
            let rep = min_double_coset_rep(&rs, w, &j, &k);
            let min = wj
                .iter()
                .flat_map(|a| wk.iter().map(move |b| a.multiply(w).multiply(b)))
                .min_by_key(|x| x.length())
                .unwrap();
            assert_eq!(rep.length(), min.length());
            assert_eq!(min_double_coset_rep(&rs, &rep, &j, &k), rep);
        }
    }
}

fn type_and_word() -> impl Strategy<Value = (CartanType, Vec<usize>)> {
    prop::sample::select(all_types())
        .prop_flat_map(|t| (Just(t), prop::collection::vec(0..t.rank(), 0..40)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn word_times_reverse_is_identity((t, letters) in type_and_word()) {
        let rs = RootSystem::build(t).unwrap();
        let w = Word(letters);
        let g = WeylElement::from_word(&rs, &w).multiply(&WeylElement::from_word(&rs, &w.reversed()));
        prop_assert!(g.is_identity());
    }

    #[test]
    fn length_is_subadditive((t, a) in type_and_word(), b in prop::collection::vec(0usize..8, 0..30)) {
        let rs = RootSystem::build(t).unwrap();
        let b: Vec<usize> = b.into_iter().map(|i| i % t.rank()).collect();
        let x = WeylElement::from_word(&rs, &Word(a));
        let y = WeylElement::from_word(&rs, &Word(b));
        let xy = x.multiply(&y);
        prop_assert!(xy.length() <= x.length() + y.length());
        let mut concat = x.reduced_word(&rs).0;
        concat.extend(y.reduced_word(&rs).0);
        let concat_reduced = WeylElement::from_word(&rs, &Word(concat.clone())).length() == concat.len();
        prop_assert_eq!(xy.length() == x.length() + y.length(), concat_reduced);
    }

    #[test]
    fn inverse_preserves_length((t, a) in type_and_word()) {
        let rs = RootSystem::build(t).unwrap();
        let x = WeylElement::from_word(&rs, &Word(a));
        prop_assert_eq!(x.inverse().length(), x.length());
        prop_assert!(x.multiply(&x.inverse()).is_identity());
    }

    #[test]
    fn min_double_coset_rep_is_idempotent(letters in prop::collection::vec(0usize..8, 0..60), jm in 0u8..=255, km in 0u8..=255) {
        let rs = RootSystem::build(CartanType::E8).unwrap();
        let j: Vec<usize> = (0..8).filter(|i| jm >> i & 1 == 1).collect();
        let k: Vec<usize> = (0..8).filter(|i| km >> i & 1 == 1).collect();
        let w = WeylElement::from_word(&rs, &Word(letters));
        let rep = min_double_coset_rep(&rs, &w, &j, &k);
        prop_assert!(rep.length() <= w.length());
        prop_assert_eq!(min_double_coset_rep(&rs, &rep, &j, &k), rep.clone());
        for &i in &j {
            prop_assert!(rep.left_mul_simple(&rs, i).length() > rep.length());
        }
        for &i in &k {
            prop_assert!(rep.right_mul_simple(&rs, i).length() > rep.length());
        }
    }
}
