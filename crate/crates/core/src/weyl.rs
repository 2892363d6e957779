//! Weyl group elements as permutations of root indices.
//!
//! Node indices are 0-based in the API; [`Word`] parses and prints the usual
//! 1-based digit strings such as `"134265"`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootsys::RootSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid word {0:?}")]
    BadWord(String),
    #[error("coset space has more than {0} elements")]
    CosetSpaceTooLarge(usize),
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },
}

/// Enumeration cap for whole-group scans.
pub const ENUMERATION_CAP: u64 = 3_000_000;
/// Coset-space cap for double coset scans.
pub const COSET_CAP: usize = 1_000_000;
/// Default node budget for plateau exploration of cyclic shifts.
pub const SHIFT_BUDGET: usize = 100_000;

/// A sequence of 0-based simple reflection indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    /// Parses a 1-based digit string, or comma/space separated labels for
    /// readability (`"1 3 4"`).
    pub fn parse(s: &str, rank: usize) -> Result<Word, WeylError> {
        let t = s.trim();
        let labels: Vec<usize> = if t.is_empty() || t == "e" {
            Vec::new()
        } else if t.contains(|c: char| c == ',' || c.is_whitespace()) {
            t.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| WeylError::BadWord(s.into()))?
        } else {
            t.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| WeylError::BadWord(s.into()))?
        };
        if labels.iter().any(|&l| l == 0 || l > rank) {
            return Err(WeylError::BadWord(s.into()));
        }
        Ok(Word(labels.into_iter().map(|l| l - 1).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let sep = if self.0.iter().any(|&i| i >= 9) { " " } else { "" };
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

/// A Weyl group element acting on root indices. Equality and hashing use the
/// permutation only.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    perm: Box<[u8]>,
    length: u16,
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement(len {})", self.length)
    }
}

fn inversion_count(perm: &[u8]) -> u16 {
    let n = perm.len() / 2;
    perm[..n].iter().filter(|&&x| x as usize >= n).count() as u16
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> WeylElement {
        WeylElement { perm: (0..rs.n_roots() as u8).collect(), length: 0 }
    }

    pub fn from_perm(perm: Vec<u8>) -> WeylElement {
        let length = inversion_count(&perm);
        WeylElement { perm: perm.into_boxed_slice(), length }
    }

    pub fn simple(rs: &RootSystem, i: usize) -> WeylElement {
        let perm: Vec<u8> = rs.simple_reflection_table(i).iter().map(|&x| x as u8).collect();
        WeylElement { perm: perm.into_boxed_slice(), length: 1 }
    }

    /// `s_{i1} s_{i2} ... s_{ik}`.
    pub fn from_word(rs: &RootSystem, word: &Word) -> WeylElement {
        let mut w = WeylElement::identity(rs);
        for &i in word.0.iter().rev() {
            w = w.left_mul_simple(rs, i);
        }
        w
    }

    /// The reflection in an arbitrary root.
    pub fn reflection(rs: &RootSystem, alpha: usize) -> WeylElement {
        WeylElement::from_perm((0..rs.n_roots()).map(|b| rs.reflect(alpha, b) as u8).collect())
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.length as usize
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    #[inline]
    pub fn act(&self, root: usize) -> usize {
        self.perm[root] as usize
    }

    fn n_pos(&self) -> usize {
        self.perm.len() / 2
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// `self · other`, acting as `other` first.
    pub fn multiply(&self, other: &WeylElement) -> WeylElement {
        WeylElement::from_perm(other.perm.iter().map(|&k| self.perm[k as usize]).collect())
    }

    pub fn inverse(&self) -> WeylElement {
        let mut inv = vec![0u8; self.perm.len()];
        for (k, &v) in self.perm.iter().enumerate() {
            inv[v as usize] = k as u8;
        }
        WeylElement { perm: inv.into_boxed_slice(), length: self.length }
    }

    /// `s_i · self`.
    pub fn left_mul_simple(&self, rs: &RootSystem, i: usize) -> WeylElement {
        let t = rs.simple_reflection_table(i);
        let perm: Box<[u8]> = self.perm.iter().map(|&k| t[k as usize] as u8).collect();
        let length = if self.is_left_descent(i) { self.length - 1 } else { self.length + 1 };
        WeylElement { perm, length }
    }

    /// `self · s_i`.
    pub fn right_mul_simple(&self, rs: &RootSystem, i: usize) -> WeylElement {
        let t = rs.simple_reflection_table(i);
        let perm: Box<[u8]> = t.iter().map(|&k| self.perm[k as usize]).collect();
        let length = if self.is_right_descent(i) { self.length - 1 } else { self.length + 1 };
        WeylElement { perm, length }
    }

    /// `l(s_i w) < l(w)`, i.e. `w^{-1}(α_i) < 0`.
    pub fn is_left_descent(&self, i: usize) -> bool {
        // w^{-1}(α_i) < 0 iff w maps some negative root to α_i, i.e. the
        // preimage of i is negative.
        let n = self.n_pos();
        let pre = self.perm.iter().position(|&v| v as usize == i).unwrap();
        pre >= n
    }

    /// `l(w s_i) < l(w)`, i.e. `w(α_i) < 0`.
    #[inline]
    pub fn is_right_descent(&self, i: usize) -> bool {
        self.perm[i] as usize >= self.n_pos()
    }

    /// Lexicographically least reduced word (greedy smallest left descent).
    pub fn reduced_word(&self, rs: &RootSystem) -> Word {
        let mut w = self.clone();
        let mut out = Vec::with_capacity(self.length());
        while !w.is_identity() {
            let i = (0..rs.rank()).find(|&i| w.is_left_descent(i)).unwrap();
            out.push(i);
            w = w.left_mul_simple(rs, i);
        }
        Word(out)
    }

    /// The inversion set `N(w) = {α > 0 : w(α) < 0}` as root indices.
    pub fn inversions(&self) -> Vec<usize> {
        let n = self.n_pos();
        (0..n).filter(|&k| self.perm[k] as usize >= n).collect()
    }

    /// Matrix of `w` on the root lattice: column `j` is `w(α_j)`.
    pub fn matrix(&self, rs: &RootSystem) -> Vec<Vec<i64>> {
        let r = rs.rank();
        let mut m = vec![vec![0i64; r]; r];
        for j in 0..r {
            let img = rs.coords(self.act(j));
            for i in 0..r {
                m[i][j] = img[i] as i64;
            }
        }
        m
    }
}

/// Longest element of the parabolic subgroup `W_J`.
pub fn longest_element(rs: &RootSystem, j: &[usize]) -> WeylElement {
    let mut w = WeylElement::identity(rs);
    while let Some(&i) = j.iter().find(|&&i| !w.is_left_descent(i)) {
        w = w.left_mul_simple(rs, i);
    }
    w
}

pub fn w0(rs: &RootSystem) -> WeylElement {
    longest_element(rs, &(0..rs.rank()).collect::<Vec<_>>())
}

/// The complement `S \ J` of a node set.
pub fn complement(rs: &RootSystem, j: &[usize]) -> Vec<usize> {
    (0..rs.rank()).filter(|i| !j.contains(i)).collect()
}

/// The diagram involution `σ0` defined by `w0(α_i) = -α_{σ0(i)}`.
pub fn opposition_involution(rs: &RootSystem) -> Vec<usize> {
    let w = w0(rs);
    (0..rs.rank()).map(|i| rs.neg(w.act(i))).collect()
}

/// Minimal length element of `W_J w W_K` by descent stripping.
pub fn min_double_coset_rep(rs: &RootSystem, w: &WeylElement, j: &[usize], k: &[usize]) -> WeylElement {
    let mut w = w.clone();
    loop {
        let mut changed = false;
        for &i in j {
            if w.is_left_descent(i) {
                w = w.left_mul_simple(rs, i);
                changed = true;
            }
        }
        for &i in k {
            if w.is_right_descent(i) {
                w = w.right_mul_simple(rs, i);
                changed = true;
            }
        }
        if !changed {
            return w;
        }
    }
}

/// Minimal left coset representatives `W^K` (no right descent in `K`),
/// ordered by length then lexicographic reduced word.
pub fn min_left_coset_reps(rs: &RootSystem, k: &[usize]) -> Result<Vec<WeylElement>, WeylError> {
    let e = WeylElement::identity(rs);
    let mut seen: HashSet<WeylElement> = HashSet::from([e.clone()]);
    let mut queue = VecDeque::from([e]);
    let mut out = Vec::new();
    while let Some(w) = queue.pop_front() {
        for i in 0..rs.rank() {
            if w.is_left_descent(i) {
                continue;
            }
            let v = w.left_mul_simple(rs, i);
            if k.iter().any(|&x| v.is_right_descent(x)) || seen.contains(&v) {
                continue;
            }
            seen.insert(v.clone());
            queue.push_back(v);
        }
        out.push(w);
        if out.len() > COSET_CAP {
            return Err(WeylError::CosetSpaceTooLarge(COSET_CAP));
        }
    }
    sort_by_length_then_word(rs, &mut out);
    Ok(out)
}

fn sort_by_length_then_word(rs: &RootSystem, v: &mut [WeylElement]) {
    v.sort_by_cached_key(|w| (w.length(), w.reduced_word(rs)));
}

/// All minimal `(W_J, W_K)` double coset representatives, by a scan over
/// `W^K`, in increasing length.
pub fn double_coset_reps(rs: &RootSystem, j: &[usize], k: &[usize]) -> Result<Vec<WeylElement>, WeylError> {
    let mut reps: Vec<WeylElement> = min_left_coset_reps(rs, k)?
        .into_iter()
        .filter(|w| j.iter().all(|&i| !w.is_left_descent(i)))
        .collect();
    sort_by_length_then_word(rs, &mut reps);
    Ok(reps)
}

/// Result of cyclic-shift exploration.
#[derive(Debug, Clone)]
pub struct ShiftResult {
    pub element: WeylElement,
    pub length: usize,
    /// False when the plateau budget ran out before exploration finished.
    pub complete: bool,
    pub explored: usize,
}

/// Cyclic-shift descent: replaces `w` by `s w s` whenever that is shorter,
/// exploring equal-length shifts breadth-first, up to `budget` states per
/// plateau.
pub fn cyclic_shift_min_length(rs: &RootSystem, w: &WeylElement, budget: usize) -> ShiftResult {
    let mut current = w.clone();
    let mut explored_total = 0;
    'outer: loop {
        let len = current.length();
        let mut seen: HashSet<WeylElement> = HashSet::from([current.clone()]);
        let mut queue = VecDeque::from([current.clone()]);
        while let Some(x) = queue.pop_front() {
            explored_total += 1;
            for i in 0..rs.rank() {
                let y = x.left_mul_simple(rs, i).right_mul_simple(rs, i);
                if y.length() < len {
                    current = y;
                    continue 'outer;
                }
                if y.length() == len && !seen.contains(&y) {
                    if seen.len() >= budget {
                        return ShiftResult { element: current, length: len, complete: false, explored: explored_total };
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        // Report the least element of the plateau for determinism.
        let best = seen.into_iter().min_by_key(|v| v.reduced_word(rs)).unwrap();
        return ShiftResult { element: best, length: len, complete: true, explored: explored_total };
    }
}

/// Conjugacy invariants of a Weyl element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassFingerprint {
    pub length_parity: u8,
    /// Characteristic polynomial coefficients, constant term first, monic.
    pub charpoly: Vec<i64>,
    pub fixed_dim: usize,
    pub min_shift_length: usize,
}

impl ClassFingerprint {
    pub fn charpoly_string(&self) -> String {
        poly_to_string(&self.charpoly)
    }
}

fn poly_to_string(c: &[i64]) -> String {
    let mut terms = Vec::new();
    for (k, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{k}"),
        };
        let coef = match (a, k) {
            (1, k) if k > 0 => String::new(),
            (-1, k) if k > 0 => "-".into(),
            _ => a.to_string(),
        };
        terms.push(format!("{coef}{mono}"));
    }
    terms.join(" + ").replace("+ -", "- ")
}

/// Characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier, exact in i128.
pub fn charpoly(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    let mm: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut c = vec![0i128; n + 1];
    c[n] = 1;
    // M_k = M (M_{k-1} + c_{n-k+1} I), c_{n-k} = -tr(M_k)/k.
    let mut mk = vec![vec![0i128; n]; n];
    let mut prev = vec![vec![0i128; n]; n];
    for k in 1..=n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for l in 0..n {
                    let p = prev[l][j] + if l == j { c[n - k + 1] } else { 0 };
                    s += mm[i][l] * p;
                }
                mk[i][j] = s;
            }
        }
        let tr: i128 = (0..n).map(|i| mk[i][i]).sum();
        assert!(tr % k as i128 == 0, "trace not divisible in Faddeev-LeVerrier");
        c[n - k] = -tr / k as i128;
        std::mem::swap(&mut prev, &mut mk);
    }
    c.into_iter().map(|x| x as i64).collect()
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn integer_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && a[r][col] != 0 {
                let (f, g) = (a[r][col], a[rank][col]);
                for c in 0..cols {
                    a[r][c] = a[r][c] * g - a[rank][c] * f;
                }
                let d = a[r].iter().fold(0i128, |acc, &x| gcd(acc, x));
                if d > 1 {
                    a[r].iter_mut().for_each(|x| *x /= d);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn class_fingerprint(rs: &RootSystem, w: &WeylElement) -> ClassFingerprint {
    let m = w.matrix(rs);
    let r = rs.rank();
    let mut shifted = m.clone();
    for (i, row) in shifted.iter_mut().enumerate().take(r) {
        row[i] -= 1;
    }
    let shift = cyclic_shift_min_length(rs, w, SHIFT_BUDGET);
    ClassFingerprint {
        length_parity: (w.length() % 2) as u8,
        charpoly: charpoly(&m),
        fixed_dim: r - integer_rank(&shifted),
        min_shift_length: shift.length,
    }
}

/// Visits every element of `W` once via the canonical tree whose parent of
/// `w` is `w s` for the largest right descent `s`.
pub fn for_each_element(rs: &RootSystem, mut f: impl FnMut(&WeylElement)) -> Result<u64, WeylError> {
    let order = rs.cartan_type().weyl_order();
    if order > ENUMERATION_CAP {
        return Err(WeylError::GroupTooLarge { order, cap: ENUMERATION_CAP });
    }
    let mut stack = vec![WeylElement::identity(rs)];
    let mut count = 0u64;
    while let Some(w) = stack.pop() {
        f(&w);
        count += 1;
        for i in 0..rs.rank() {
            if w.is_right_descent(i) {
                continue;
            }
            let v = w.right_mul_simple(rs, i);
            let largest = (0..rs.rank()).rev().find(|&k| v.is_right_descent(k)).unwrap();
            if largest == i {
                stack.push(v);
            }
        }
    }
    debug_assert_eq!(count, order);
    Ok(count)
}

/// `Σ_w q^{l(w)}` as a length histogram.
pub fn length_distribution(rs: &RootSystem) -> Result<Vec<u64>, WeylError> {
    let mut hist = vec![0u64; rs.n_pos() + 1];
    for_each_element(rs, |w| hist[w.length()] += 1)?;
    Ok(hist)
}

/// The full conjugacy class of `w`, closed under conjugation by simple
/// reflections.
pub fn conjugacy_class(rs: &RootSystem, w: &WeylElement) -> Vec<WeylElement> {
    let mut seen: HashSet<WeylElement> = HashSet::from([w.clone()]);
    let mut members = vec![w.clone()];
    let mut k = 0;
    while k < members.len() {
        for i in 0..rs.rank() {
            let y = members[k].left_mul_simple(rs, i).right_mul_simple(rs, i);
            if seen.insert(y.clone()) {
                members.push(y);
            }
        }
        k += 1;
    }
    members
}

/// One conjugacy class of involutions.
#[derive(Debug, Clone, Serialize)]
pub struct InvolutionClass {
    pub representative: Word,
    pub min_length: usize,
    pub max_length: usize,
    pub size: usize,
}

/// All conjugacy classes of involutions, sorted by (min length, representative).
pub fn involution_class_survey(rs: &RootSystem) -> Result<Vec<InvolutionClass>, WeylError> {
    let mut invs: Vec<WeylElement> = Vec::new();
    for_each_element(rs, |w| {
        if !w.is_identity() && w.multiply(w).is_identity() {
            invs.push(w.clone());
        }
    })?;
    let mut class_of: HashMap<WeylElement, usize> = HashMap::new();
    let mut classes = Vec::new();
    for start in &invs {
        if class_of.contains_key(start) {
            continue;
        }
        let id = classes.len();
        let members = conjugacy_class(rs, start);
        for m in &members {
            class_of.insert(m.clone(), id);
        }
        let min_len = members.iter().map(|w| w.length()).min().unwrap();
        let max_len = members.iter().map(|w| w.length()).max().unwrap();
        let rep = members
            .iter()
            .filter(|w| w.length() == min_len)
            .map(|w| w.reduced_word(rs))
            .min()
            .unwrap();
        classes.push(InvolutionClass { representative: rep, min_length: min_len, max_length: max_len, size: members.len() });
    }
    classes.sort_by(|a, b| (a.min_length, &a.representative).cmp(&(b.min_length, &b.representative)));
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanType;

    fn rs(t: CartanType) -> RootSystem {
        RootSystem::build(t).unwrap()
    }

    fn nodes(labels: &[usize]) -> Vec<usize> {
        labels.iter().map(|l| l - 1).collect()
    }

    #[test]
    fn braid_relation_a2() {
        let r = rs(CartanType::A(2));
        let a = WeylElement::from_word(&r, &Word::parse("121", 2).unwrap());
        let b = WeylElement::from_word(&r, &Word::parse("212", 2).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.length(), 3);
        assert!(WeylElement::from_word(&r, &Word(vec![])).is_identity());
    }

    #[test]
    fn e8_lengths() {
        let r = rs(CartanType::E8);
        assert_eq!(w0(&r).length(), 120);
        let wd4 = longest_element(&r, &nodes(&[2, 3, 4, 5]));
        assert_eq!(wd4.length(), 12);
        let j = nodes(&[1, 6, 7, 8]);
        let x = longest_element(&r, &complement(&r, &j)).multiply(&w0(&r));
        assert_eq!(x.length(), 108);
        let sphi = WeylElement::reflection(&r, r.highest_root());
        assert_eq!(sphi.length(), 57);
        let we7 = longest_element(&r, &nodes(&[1, 2, 3, 4, 5, 6, 7]));
        assert_eq!(sphi, we7.multiply(&w0(&r)));
        for i in 0..8 {
            let wj = longest_element(&r, &[i]);
            assert_eq!(wj.length() + wj.multiply(&w0(&r)).length(), 120);
        }
    }

    #[test]
    fn reflection_lengths_simply_laced() {
        let r = rs(CartanType::E8);
        for a in 0..r.n_pos() {
            let s = WeylElement::reflection(&r, a);
            assert_eq!(s.length() as i32, 2 * r.height(a) - 1);
        }
        assert_eq!(WeylElement::reflection(&r, 3), WeylElement::simple(&r, 3));
    }

    #[test]
    fn f4_reflection_polar() {
        let r = rs(CartanType::F4);
        let s = WeylElement::reflection(&r, r.highest_root());
        assert_eq!(s, longest_element(&r, &[1, 2, 3]).multiply(&w0(&r)));
        assert_eq!(w0(&r).length(), 24);
        assert!(w0(&r).multiply(&w0(&r)).is_identity());
    }

    #[test]
    fn a2_double_cosets() {
        let r = rs(CartanType::A(2));
        let reps = double_coset_reps(&r, &[0], &[0]).unwrap();
        assert_eq!(reps.len(), 2);
        let all = double_coset_reps(&r, &[], &[]).unwrap();
        assert_eq!(all.len(), 6);
        let full = double_coset_reps(&r, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(full.len(), 1);
    }

    #[test]
    fn e8_e7_double_cosets() {
        let r = rs(CartanType::E8);
        let e7 = nodes(&[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(min_left_coset_reps(&r, &e7).unwrap().len(), 240);
        let reps = double_coset_reps(&r, &e7, &e7).unwrap();
        let lens: Vec<usize> = reps.iter().map(|w| w.length()).collect();
        assert_eq!(reps.len(), 5);
        assert!(lens.windows(2).all(|p| p[0] < p[1]));
        assert!(reps[0].is_identity());
        assert_eq!(reps[1], WeylElement::simple(&r, 7));
        assert_eq!(reps[4], WeylElement::reflection(&r, r.highest_root()));
    }

    #[test]
    fn double_coset_oppositeness_oracle() {
        let r = rs(CartanType::E8);
        let j = nodes(&[2, 3, 4, 5]);
        let wd4 = longest_element(&r, &j);
        let a = min_double_coset_rep(&r, &w0(&r), &j, &j);
        let b = min_double_coset_rep(&r, &wd4.multiply(&w0(&r)), &j, &j);
        assert_eq!(a, b);
        assert!(min_double_coset_rep(&r, &wd4, &j, &j).is_identity());
    }

    #[test]
    fn fingerprints_separate_classes() {
        let r = rs(CartanType::E8);
        let s4 = WeylElement::simple(&r, 3);
        let s5 = WeylElement::simple(&r, 4);
        let w345 = longest_element(&r, &nodes(&[3, 4, 5]));
        let wd4 = longest_element(&r, &nodes(&[2, 3, 4, 5]));
        let f = [s4, w345, wd4].map(|w| class_fingerprint(&r, &w));
        assert_eq!(f[0].charpoly_string(), "x^8 - 6x^7 + 14x^6 - 14x^5 + 14x^3 - 14x^2 + 6x - 1");
        assert_ne!(f[0], f[1]);
        assert_ne!(f[1], f[2]);
        assert_ne!(f[0], f[2]);
        assert_eq!(f[2].min_shift_length, 12);
        assert_eq!(f[0], class_fingerprint(&r, &s5));
        let id = class_fingerprint(&r, &WeylElement::identity(&r));
        assert_eq!((id.length_parity, id.fixed_dim, id.min_shift_length), (0, 8, 0));
    }

    #[test]
    fn enumeration_counts() {
        let r = rs(CartanType::D(4));
        let hist = length_distribution(&r).unwrap();
        assert_eq!(hist.iter().sum::<u64>(), 192);
        let q = 2u64;
        let chambers: u64 = hist.iter().enumerate().map(|(l, c)| c * q.pow(l as u32)).sum();
        assert_eq!(chambers, 42_525);
        assert!(length_distribution(&rs(CartanType::E8)).is_err());
    }

    #[test]
    fn involution_surveys() {
        let r = rs(CartanType::A(2));
        let s = involution_class_survey(&r).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].min_length, s[0].max_length, s[0].size), (1, 3, 3));
        let f4 = rs(CartanType::F4);
        let classes = involution_class_survey(&f4).unwrap();
        let short: Vec<&InvolutionClass> = classes.iter().filter(|c| c.max_length <= 15).collect();
        assert_eq!(short.len(), 2);
        for (c, i) in short.iter().zip([0, 3]) {
            let rep = WeylElement::from_word(&f4, &c.representative);
            assert!(conjugacy_class(&f4, &rep).contains(&WeylElement::simple(&f4, i)));
        }
    }

    #[test]
    fn word_parse_and_display() {
        let w = Word::parse("134265423456765423143546876542314354265431765876", 8).unwrap();
        assert_eq!(w.len(), 48);
        assert_eq!(w.to_string(), "134265423456765423143546876542314354265431765876");
        assert!(Word::parse("19", 8).is_err());
        assert_eq!(Word::parse("1 3", 8).unwrap(), Word(vec![0, 2]));
    }
}
