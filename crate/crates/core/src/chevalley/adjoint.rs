//! The adjoint representation as an independent oracle for collection.
//!
//! `x_a(t)` acts as `exp(t ad e_a) = Σ t^k (ad e_a)^k / k!`, with the divided
//! powers tabulated once as integer sparse matrices on the Chevalley basis.
//! Nothing here uses the signs or rewrites of the collection code.

use crate::coefficients::Scalars;
use crate::rootsys::{LieAlgebra, RootSystem, StructureConstants};

use super::Letter;

/// One entry `coeff · e_target` of `(ad e_a)^k / k!` applied to a basis vector.
#[derive(Debug, Clone, Copy)]
struct Term {
    k: u8,
    target: u16,
    coeff: i64,
}

/// Integer divided-power tables for every root, plus root coordinates for
/// torus characters.
#[derive(Debug, Clone)]
pub struct AdjointRep {
    dim: usize,
    n_roots: usize,
    rank: usize,
    coords: Vec<Vec<i32>>,
    // tables[a][b]: terms of exp(ad e_a) on basis vector b, k >= 1.
    tables: Vec<Vec<Vec<Term>>>,
}

fn add_sparse(acc: &mut Vec<(usize, i64)>, extra: Vec<(usize, i64)>) {
    for (k, c) in extra {
        match acc.iter_mut().find(|e| e.0 == k) {
            Some(e) => e.1 += c,
            None => acc.push((k, c)),
        }
    }
    acc.retain(|e| e.1 != 0);
}

impl AdjointRep {
    pub fn new(rs: &RootSystem, sc: &StructureConstants) -> AdjointRep {
        let alg = LieAlgebra::new(rs, sc);
        let dim = alg.dim();
        let m = rs.n_roots();
        let mut tables = Vec::with_capacity(m);
        for a in 0..m {
            let mut per_basis = Vec::with_capacity(dim);
            for b in 0..dim {
                let mut terms = Vec::new();
                let mut v: Vec<(usize, i64)> = vec![(b, 1)];
                let mut k = 0u8;
                loop {
                    k += 1;
                    let mut next = Vec::new();
                    for &(x, c) in &v {
                        let img: Vec<(usize, i64)> =
                            alg.bracket_basis(a, x).into_iter().map(|(y, d)| (y, c * d)).collect();
                        add_sparse(&mut next, img);
                    }
                    if next.is_empty() {
                        break;
                    }
                    for e in next.iter_mut() {
                        assert!(e.1 % k as i64 == 0, "divided power not integral");
                        e.1 /= k as i64;
                    }
                    for &(y, c) in &next {
                        terms.push(Term { k, target: y as u16, coeff: c });
                    }
                    v = next;
                }
                per_basis.push(terms);
            }
            tables.push(per_basis);
        }
        let coords = (0..m).map(|k| rs.coords(k).iter().map(|&c| c as i32).collect()).collect();
        AdjointRep { dim, n_roots: m, rank: rs.rank(), coords, tables }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the basis vector `h_i`.
    pub fn coroot_index(&self, i: usize) -> usize {
        self.n_roots + i
    }

    /// `Ad(x_a(t)) v`.
    pub fn apply_x<F: Scalars>(&self, f: &F, a: usize, t: &F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = v.to_vec();
        if f.is_zero(t) {
            return out;
        }
        let pows = [f.one(), t.clone(), f.mul(t, t), f.mul(&f.mul(t, t), t), f.mul(&f.mul(t, t), &f.mul(t, t))];
        for (b, vb) in v.iter().enumerate() {
            if f.is_zero(vb) {
                continue;
            }
            for term in &self.tables[a][b] {
                let p = match pows.get(term.k as usize) {
                    Some(p) => p.clone(),
                    None => f.pow(t, term.k as i64),
                };
                let c = f.mul(&f.mul(&f.from_i64(term.coeff), &p), vb);
                let tgt = term.target as usize;
                out[tgt] = f.add(&out[tgt], &c);
            }
        }
        out
    }

    /// The torus character `χ_a(h)` for `h` given by its values on simple roots.
    pub fn character<F: Scalars>(&self, f: &F, h: &[F::Elem], a: usize) -> F::Elem {
        let mut acc = f.one();
        for (j, &c) in self.coords[a].iter().enumerate() {
            if c != 0 {
                acc = f.mul(&acc, &f.pow(&h[j], c as i64));
            }
        }
        acc
    }

    pub fn apply_torus<F: Scalars>(&self, f: &F, h: &[F::Elem], v: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = v.to_vec();
        for (a, x) in out.iter_mut().enumerate().take(self.n_roots) {
            if !f.is_zero(x) {
                *x = f.mul(x, &self.character(f, h, a));
            }
        }
        out
    }

    /// `Ad(L) v` for one generator letter.
    pub fn apply_letter<F: Scalars>(&self, f: &F, letter: &Letter<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
        let one = f.one();
        let m1 = f.neg(&one);
        match letter {
            Letter::X(a, t) => self.apply_x(f, *a, t, v),
            Letter::T(h) => self.apply_torus(f, h, v),
            Letter::S(i) | Letter::SInv(i) => {
                // s_i(±1) = x_i(±1) x_{-i}(∓1) x_i(±1)
                let (p, q) = if matches!(letter, Letter::S(_)) { (&one, &m1) } else { (&m1, &one) };
                let neg = i + self.n_roots / 2;
                let v = self.apply_x(f, *i, p, v);
                let v = self.apply_x(f, neg, q, &v);
                self.apply_x(f, *i, p, &v)
            }
        }
    }

    /// `Ad(L_1 ⋯ L_m) v`, applying the rightmost letter first.
    pub fn apply_letters<F: Scalars>(&self, f: &F, letters: &[Letter<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
        letters.iter().rev().fold(v.to_vec(), |acc, l| self.apply_letter(f, l, &acc))
    }

    pub fn basis_vector<F: Scalars>(&self, f: &F, k: usize) -> Vec<F::Elem> {
        let mut v = vec![f.zero(); self.dim];
        v[k] = f.one();
        v
    }

    /// Full matrix of `Ad(L_1 ⋯ L_m)`, as a list of columns.
    pub fn matrix<F: Scalars>(&self, f: &F, letters: &[Letter<F::Elem>]) -> Vec<Vec<F::Elem>> {
        (0..self.dim).map(|k| self.apply_letters(f, letters, &self.basis_vector(f, k))).collect()
    }

    /// Basis vectors whose images determine an automorphism: `e_{±α_i}`
    /// generate the algebra over any field when every `|N| = 1`; otherwise the
    /// whole basis is used.
    pub fn probe_vectors(&self, simply_laced: bool) -> Vec<usize> {
        if simply_laced {
            let np = self.n_roots / 2;
            (0..self.rank).flat_map(|i| [i, i + np]).collect()
        } else {
            (0..self.dim).collect()
        }
    }

    /// `Ad(s_i) e_a = η e_{s_i a}`; returns `η`, asserting the image is a
    /// signed basis vector.
    pub fn simple_sign(&self, rs: &RootSystem, i: usize, a: usize) -> i8 {
        let mut v: Vec<(usize, i64)> = vec![(a, 1)];
        let neg_i = rs.neg(i);
        for (root, t) in [(i, 1i64), (neg_i, -1), (i, 1)] {
            let mut out = v.clone();
            for &(b, c) in &v {
                if b >= self.dim {
                    continue;
                }
                for term in &self.tables[root][b] {
                    add_sparse(&mut out, vec![(term.target as usize, c * term.coeff * t.pow(term.k as u32))]);
                }
            }
            v = out;
        }
        let target = rs.simple_reflect(i, a);
        assert!(v.len() == 1 && v[0].0 == target && v[0].1.abs() == 1, "Ad(s_i) e_a is not a signed root vector");
        v[0].1 as i8
    }
}
