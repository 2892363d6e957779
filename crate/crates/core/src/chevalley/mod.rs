//! Adjoint Chevalley groups over exact fields, in Bruhat normal form.
//!
//! An element is stored as `u · h · ẇ · u'` where `u` is an ordered product of
//! positive root elements, `h` is a torus element recorded by its characters
//! `χ_{α_j}(h)` on the simple roots, `ẇ` is the product of `ṡ_i = s_{α_i}(1)`
//! along any reduced word of `w` (well defined by Tits' braid relations), and
//! `u'` is supported on `N(w) = {α > 0 : w(α) < 0}`. Products are formed by
//! left multiplication with single generators and collection in `U`.

pub mod adjoint;
pub mod expr;
pub mod rank_one;

use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::coefficients::{FieldError, Scalars};
use crate::rootsys::{CartanType, CoweightVector, RootSystem, RootSystemError, StructureConstants};
use crate::weyl::{WeylElement, Word};

use adjoint::AdjointRep;

/// Default cap on generator letters absorbed by one operation.
pub const DEFAULT_LETTER_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChevalleyError {
    #[error("collection budget of {0} letters exceeded")]
    Budget(usize),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("zero parameter: {0}")]
    ZeroParameter(String),
    #[error("cannot parse element: {0}")]
    Parse(String),
    #[error("element is not in the rank-one subgroup of the highest root")]
    NotInRankOne,
    #[error("reduction step failed: {0}")]
    Schedule(String),
}

/// A generator of the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter<E> {
    /// `x_a(t)` for any root index `a`.
    X(usize, E),
    /// A torus element by its values on the simple roots.
    T(Vec<E>),
    /// `ṡ_i = s_{α_i}(1)`.
    S(usize),
    /// `ṡ_i^{-1}`.
    SInv(usize),
}

/// A group element in Bruhat normal form. Equality ignores which reduced word
/// is cached for `w`.
#[derive(Debug, Clone)]
pub struct GroupElement<E> {
    u: Vec<E>,
    h: Vec<E>,
    w: WeylElement,
    word: Word,
    up: Vec<E>,
}

impl<E: PartialEq> PartialEq for GroupElement<E> {
    fn eq(&self, other: &Self) -> bool {
        self.w == other.w && self.u == other.u && self.h == other.h && self.up == other.up
    }
}

impl<E: Eq> Eq for GroupElement<E> {}

impl<E: Hash> Hash for GroupElement<E> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.u.hash(state);
        self.h.hash(state);
        self.w.hash(state);
        self.up.hash(state);
    }
}

impl<E> GroupElement<E> {
    /// Coefficients of `u` indexed by positive root.
    pub fn u(&self) -> &[E] {
        &self.u
    }

    /// Torus values `χ_{α_j}(h)`.
    pub fn torus(&self) -> &[E] {
        &self.h
    }

    pub fn weyl(&self) -> &WeylElement {
        &self.w
    }

    /// The reduced word used for `ẇ`.
    pub fn word(&self) -> &Word {
        &self.word
    }

    /// Coefficients of `u'` indexed by positive root.
    pub fn u_prime(&self) -> &[E] {
        &self.up
    }
}

/// How to reach `-β` from a simple root: `β = y(α_j)` with `y` the product
/// of `ṡ` along `word`, and `ẏ x_{-α_j}(t) ẏ^{-1} = x_{-β}(sign · t)`.
#[derive(Debug, Clone)]
struct NegRecipe {
    word: Vec<usize>,
    simple: usize,
    sign: i8,
}

struct Counter {
    used: usize,
    limit: usize,
}

impl Counter {
    fn tick(&mut self) -> Result<(), ChevalleyError> {
        self.used += 1;
        if self.used > self.limit {
            Err(ChevalleyError::Budget(self.limit))
        } else {
            Ok(())
        }
    }
}

/// A split adjoint Chevalley group over the coefficient domain `F`.
#[derive(Debug, Clone)]
pub struct ChevalleyGroup<F: Scalars> {
    rs: Arc<RootSystem>,
    sc: Arc<StructureConstants>,
    adjoint: Arc<AdjointRep>,
    field: F,
    // eta[i][a]: ṡ_i x_a(t) ṡ_i^{-1} = x_{s_i a}(eta t).
    eta: Vec<Vec<i8>>,
    neg: Vec<NegRecipe>,
    letter_budget: usize,
}

impl<F: Scalars> ChevalleyGroup<F> {
    pub fn new(t: CartanType, field: F) -> Result<Self, ChevalleyError> {
        let rs = Arc::new(RootSystem::build(t)?);
        let sc = Arc::new(StructureConstants::new(&rs)?);
        Ok(Self::with_data(rs, sc, field))
    }

    /// Builds the group from an existing root system and constant table.
    pub fn with_data(rs: Arc<RootSystem>, sc: Arc<StructureConstants>, field: F) -> Self {
        let adjoint = Arc::new(AdjointRep::new(&rs, &sc));
        let eta: Vec<Vec<i8>> =
            (0..rs.rank()).map(|i| (0..rs.n_roots()).map(|a| adjoint.simple_sign(&rs, i, a)).collect()).collect();
        let mut neg = Vec::with_capacity(rs.n_pos());
        for beta in 0..rs.n_pos() {
            let mut word = Vec::new();
            let mut g = beta;
            while rs.height(g) > 1 {
                let i = (0..rs.rank()).find(|&i| rs.cartan_pairing(i, g) > 0).expect("a lowering reflection");
                word.push(i);
                g = rs.simple_reflect(i, g);
            }
            // Walk -α_j back up through ṡ_{i_k}, ..., ṡ_{i_1}.
            let mut sign = 1i8;
            let mut gamma = rs.neg(g);
            for &i in word.iter().rev() {
                sign *= eta[i][gamma];
                gamma = rs.simple_reflect(i, gamma);
            }
            debug_assert_eq!(gamma, rs.neg(beta));
            neg.push(NegRecipe { word, simple: g, sign });
        }
        ChevalleyGroup { rs, sc, adjoint, field, eta, neg, letter_budget: DEFAULT_LETTER_BUDGET }
    }

    pub fn with_letter_budget(mut self, budget: usize) -> Self {
        self.letter_budget = budget;
        self
    }

    pub fn letter_budget(&self) -> usize {
        self.letter_budget
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn adjoint(&self) -> &AdjointRep {
        &self.adjoint
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// `ṡ_i x_a(t) ṡ_i^{-1} = x_{s_i a}(η t)`.
    pub fn simple_sign(&self, i: usize, a: usize) -> i8 {
        self.eta[i][a]
    }

    fn counter(&self) -> Counter {
        Counter { used: 0, limit: self.letter_budget }
    }

    fn sign(&self, s: i8, x: &F::Elem) -> F::Elem {
        if s < 0 {
            self.field.neg(x)
        } else {
            x.clone()
        }
    }

    // ---- torus helpers -------------------------------------------------

    /// `χ_a(h)` for any root `a`.
    pub fn character(&self, h: &[F::Elem], a: usize) -> F::Elem {
        self.adjoint.character(&self.field, h, a)
    }

    /// `h_λ(t)` for a coweight `λ`, as simple-root character values.
    pub fn torus_coweight(&self, lambda: &CoweightVector, t: &F::Elem) -> Vec<F::Elem> {
        lambda.0.iter().map(|&m| self.field.pow(t, m as i64)).collect()
    }

    /// `h_a(t)` for the coroot of a root `a`.
    pub fn torus_coroot(&self, a: usize, t: &F::Elem) -> Vec<F::Elem> {
        (0..self.rs.rank()).map(|j| self.field.pow(t, self.rs.cartan_pairing(a, j) as i64)).collect()
    }

    pub fn torus_one(&self) -> Vec<F::Elem> {
        vec![self.field.one(); self.rs.rank()]
    }

    fn torus_mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| self.field.mul(x, y)).collect()
    }

    // ---- constructors --------------------------------------------------

    pub fn identity(&self) -> GroupElement<F::Elem> {
        let np = self.rs.n_pos();
        GroupElement {
            u: vec![self.field.zero(); np],
            h: self.torus_one(),
            w: WeylElement::identity(&self.rs),
            word: Word(Vec::new()),
            up: vec![self.field.zero(); np],
        }
    }

    pub fn is_identity(&self, g: &GroupElement<F::Elem>) -> bool {
        *g == self.identity()
    }

    /// Normal form of a product of letters.
    pub fn evaluate(&self, letters: &[Letter<F::Elem>]) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        let mut g = self.identity();
        let mut ctr = self.counter();
        for l in letters.iter().rev() {
            self.lmul_letter(&mut g, l, &mut ctr)?;
        }
        Ok(g)
    }

    /// Normal form of `L_1 ⋯ L_m · g`.
    pub fn lmul_letters(
        &self,
        letters: &[Letter<F::Elem>],
        mut g: GroupElement<F::Elem>,
    ) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        let mut ctr = self.counter();
        for l in letters.iter().rev() {
            self.lmul_letter(&mut g, l, &mut ctr)?;
        }
        Ok(g)
    }

    pub fn x(&self, a: usize, t: F::Elem) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        self.evaluate(&[Letter::X(a, t)])
    }

    pub fn h(&self, chars: Vec<F::Elem>) -> GroupElement<F::Elem> {
        let mut g = self.identity();
        g.h = chars;
        g
    }

    /// `h_λ(t)`.
    pub fn h_coweight(&self, lambda: &CoweightVector, t: &F::Elem) -> GroupElement<F::Elem> {
        self.h(self.torus_coweight(lambda, t))
    }

    /// `h_a(t)` for a root `a`.
    pub fn h_coroot(&self, a: usize, t: &F::Elem) -> GroupElement<F::Elem> {
        self.h(self.torus_coroot(a, t))
    }

    /// Letters of `s_a(t) = x_a(t) x_{-a}(-t^{-1}) x_a(t)`.
    pub fn s_letters(&self, a: usize, t: &F::Elem) -> Result<Vec<Letter<F::Elem>>, ChevalleyError> {
        let ti = self.field.inv(t).ok_or_else(|| ChevalleyError::ZeroParameter("s_a(0)".into()))?;
        Ok(vec![
            Letter::X(a, t.clone()),
            Letter::X(self.rs.neg(a), self.field.neg(&ti)),
            Letter::X(a, t.clone()),
        ])
    }

    /// `s_a(t)`.
    pub fn s(&self, a: usize, t: &F::Elem) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        self.evaluate(&self.s_letters(a, t)?)
    }

    /// The lift `ẇ` of a Weyl element.
    pub fn weyl_lift(&self, w: &WeylElement) -> GroupElement<F::Elem> {
        let mut g = self.identity();
        g.word = w.reduced_word(&self.rs);
        g.w = w.clone();
        g
    }

    // ---- letter expansion ----------------------------------------------

    /// The normal form written as letters `u, h, ṡ_{i_1} ⋯ ṡ_{i_k}, u'`.
    pub fn letters(&self, g: &GroupElement<F::Elem>) -> Vec<Letter<F::Elem>> {
        let f = &self.field;
        let mut out = Vec::new();
        for (a, c) in g.u.iter().enumerate() {
            if !f.is_zero(c) {
                out.push(Letter::X(a, c.clone()));
            }
        }
        if g.h.iter().any(|t| !f.is_one(t)) {
            out.push(Letter::T(g.h.clone()));
        }
        out.extend(g.word.0.iter().map(|&i| Letter::S(i)));
        for (a, c) in g.up.iter().enumerate() {
            if !f.is_zero(c) {
                out.push(Letter::X(a, c.clone()));
            }
        }
        out
    }

    /// Letters of `g^{-1}`.
    pub fn inverse_letters(&self, g: &GroupElement<F::Elem>) -> Vec<Letter<F::Elem>> {
        self.letters(g).into_iter().rev().map(|l| self.invert_letter(l)).collect()
    }

    pub fn invert_letter(&self, l: Letter<F::Elem>) -> Letter<F::Elem> {
        let f = &self.field;
        match l {
            Letter::X(a, t) => Letter::X(a, f.neg(&t)),
            Letter::T(h) => Letter::T(h.iter().map(|t| f.inv(t).expect("torus entries are units")).collect()),
            Letter::S(i) => Letter::SInv(i),
            Letter::SInv(i) => Letter::S(i),
        }
    }

    // ---- group operations ----------------------------------------------

    pub fn multiply(
        &self,
        a: &GroupElement<F::Elem>,
        b: &GroupElement<F::Elem>,
    ) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        let mut g = b.clone();
        let mut ctr = self.counter();
        self.lmul_element(&mut g, a, &mut ctr)?;
        Ok(g)
    }

    /// Product of a sequence of elements.
    pub fn product(&self, items: &[&GroupElement<F::Elem>]) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        let mut g = self.identity();
        let mut ctr = self.counter();
        for item in items.iter().rev() {
            self.lmul_element(&mut g, item, &mut ctr)?;
        }
        Ok(g)
    }

    pub fn inverse(&self, g: &GroupElement<F::Elem>) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        self.evaluate(&self.inverse_letters(g))
    }

    /// `x g x^{-1}`.
    pub fn conjugate(
        &self,
        g: &GroupElement<F::Elem>,
        x: &GroupElement<F::Elem>,
    ) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        let xi = self.inverse(x)?;
        self.product(&[x, g, &xi])
    }

    pub fn bruhat_cell<'a>(&self, g: &'a GroupElement<F::Elem>) -> &'a WeylElement {
        &g.w
    }

    /// Recomputes the normal form from its own letters.
    pub fn renormalize(&self, g: &GroupElement<F::Elem>) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        self.evaluate(&self.letters(g))
    }

    /// Applies `Ad(g)` to a vector in the Chevalley basis.
    pub fn adjoint_action(&self, g: &GroupElement<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
        self.adjoint.apply_letters(&self.field, &self.letters(g), v)
    }

    /// The adjoint matrix of `g`, as columns.
    pub fn adjoint_matrix(&self, g: &GroupElement<F::Elem>) -> Vec<Vec<F::Elem>> {
        self.adjoint.matrix(&self.field, &self.letters(g))
    }

    /// Whether `Ad(g)` agrees with `Ad(L_1 ⋯ L_m)` on a generating set.
    pub fn oracle_agrees(&self, g: &GroupElement<F::Elem>, letters: &[Letter<F::Elem>]) -> bool {
        let nf = self.letters(g);
        let simply_laced = self.rs.cartan_type().is_simply_laced();
        self.adjoint.probe_vectors(simply_laced).into_iter().all(|k| {
            let v = self.adjoint.basis_vector(&self.field, k);
            self.adjoint.apply_letters(&self.field, &nf, &v) == self.adjoint.apply_letters(&self.field, letters, &v)
        })
    }

    // ---- collection in U -----------------------------------------------

    /// `u ← u · x_β(b)` for positive `β`, keeping `u` as an ordered product.
    fn rmul(&self, u: &mut [F::Elem], beta: usize, b: F::Elem) {
        let f = &self.field;
        if f.is_zero(&b) {
            return;
        }
        let mut tail = Vec::new();
        for (g, c) in u.iter_mut().enumerate().skip(beta + 1) {
            if !f.is_zero(c) {
                tail.push((g, std::mem::replace(c, f.zero())));
            }
        }
        u[beta] = f.add(&u[beta], &b);
        if tail.is_empty() {
            return;
        }
        let nb = f.neg(&b);
        // T x_β(b) = x_β(b) Π_k (L_k [L_k, x_β(b)]).
        for (g, c) in tail {
            self.rmul(u, g, c.clone());
            for term in self.sc.commutator(beta, g) {
                let val = f.mul(
                    &f.from_i64(term.coeff as i64),
                    &f.mul(&f.pow(&nb, term.i as i64), &f.pow(&c, term.j as i64)),
                );
                self.rmul(u, term.root as usize, val);
            }
        }
    }

    /// `x_a(c) · u` as a new ordered product.
    fn lcollect(&self, a: usize, c: F::Elem, u: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); u.len()];
        out[a] = c;
        for (r, d) in u.iter().enumerate() {
            if !f.is_zero(d) {
                self.rmul(&mut out, r, d.clone());
            }
        }
        out
    }

    /// Product of two ordered products.
    pub fn unipotent_product(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = a.to_vec();
        for (r, d) in b.iter().enumerate() {
            if !self.field.is_zero(d) {
                self.rmul(&mut out, r, d.clone());
            }
        }
        out
    }

    // ---- left multiplication by generators -----------------------------

    fn lmul_element(
        &self,
        g: &mut GroupElement<F::Elem>,
        a: &GroupElement<F::Elem>,
        ctr: &mut Counter,
    ) -> Result<(), ChevalleyError> {
        let f = &self.field;
        for (r, c) in a.up.iter().enumerate().rev() {
            if !f.is_zero(c) {
                ctr.tick()?;
                g.u = self.lcollect(r, c.clone(), &g.u);
            }
        }
        for &i in a.word.0.iter().rev() {
            ctr.tick()?;
            self.lmul_s(g, i);
        }
        ctr.tick()?;
        self.lmul_torus(g, &a.h);
        ctr.tick()?;
        g.u = self.unipotent_product(&a.u, &g.u);
        Ok(())
    }

    fn lmul_letter(
        &self,
        g: &mut GroupElement<F::Elem>,
        l: &Letter<F::Elem>,
        ctr: &mut Counter,
    ) -> Result<(), ChevalleyError> {
        match l {
            Letter::X(a, t) => {
                if self.field.is_zero(t) {
                    return Ok(());
                }
                if self.rs.is_positive(*a) {
                    ctr.tick()?;
                    g.u = self.lcollect(*a, t.clone(), &g.u);
                } else {
                    self.lmul_x_neg(g, self.rs.neg(*a), t, ctr)?;
                }
            }
            Letter::T(h) => {
                ctr.tick()?;
                self.lmul_torus(g, h);
            }
            Letter::S(i) => {
                ctr.tick()?;
                self.lmul_s(g, *i);
            }
            Letter::SInv(i) => {
                // ṡ_i^{-1} = h_{α_i}(-1) ṡ_i
                ctr.tick()?;
                self.lmul_s(g, *i);
                let m1 = self.field.neg(&self.field.one());
                self.lmul_torus(g, &self.torus_coroot(*i, &m1));
            }
        }
        Ok(())
    }

    fn lmul_torus(&self, g: &mut GroupElement<F::Elem>, h: &[F::Elem]) {
        let f = &self.field;
        for a in 0..g.u.len() {
            if !f.is_zero(&g.u[a]) {
                let chi = self.character(h, a);
                g.u[a] = f.mul(&g.u[a], &chi);
            }
        }
        g.h = self.torus_mul(h, &g.h);
    }

    /// `x_{-β}(a) = ẏ x_{-α_j}(±a) ẏ^{-1}` with
    /// `x_{-α}(b) = x_α(b^{-1}) h_α(-b^{-1}) ṡ_α x_α(b^{-1})`.
    fn lmul_x_neg(
        &self,
        g: &mut GroupElement<F::Elem>,
        beta: usize,
        a: &F::Elem,
        ctr: &mut Counter,
    ) -> Result<(), ChevalleyError> {
        let f = &self.field;
        let recipe = &self.neg[beta];
        let b = self.sign(recipe.sign, a);
        let bi = f.inv(&b).expect("nonzero parameter");
        let j = recipe.simple;
        for &i in &recipe.word {
            self.lmul_letter(g, &Letter::SInv(i), ctr)?;
        }
        ctr.tick()?;
        g.u = self.lcollect(j, bi.clone(), &g.u);
        ctr.tick()?;
        self.lmul_s(g, j);
        ctr.tick()?;
        self.lmul_torus(g, &self.torus_coroot(j, &f.neg(&bi)));
        ctr.tick()?;
        g.u = self.lcollect(j, bi, &g.u);
        for &i in recipe.word.iter().rev() {
            ctr.tick()?;
            self.lmul_s(g, i);
        }
        Ok(())
    }

    /// `ẇ x_β(t) ẇ^{-1} = x_{wβ}(η t)`, walking the reduced word.
    fn word_sign(&self, word: &Word, beta: usize) -> i8 {
        let mut sign = 1i8;
        let mut gamma = beta;
        for &i in word.0.iter().rev() {
            sign *= self.eta[i][gamma];
            gamma = self.rs.simple_reflect(i, gamma);
        }
        sign
    }

    /// `g ← ṡ_i g`.
    fn lmul_s(&self, g: &mut GroupElement<F::Elem>, i: usize) {
        let f = &self.field;
        let rs = &*self.rs;
        // u = v x_{α_i}(c) with v free of α_i, then conjugate v by ṡ_i.
        let c = g.u[i].clone();
        let mut v = std::mem::take(&mut g.u);
        if !f.is_zero(&c) {
            self.rmul(&mut v, i, f.neg(&c));
        }
        let mut v3 = vec![f.zero(); v.len()];
        for (r, d) in v.iter().enumerate() {
            if !f.is_zero(d) {
                debug_assert_ne!(r, i);
                self.rmul(&mut v3, rs.simple_reflect(i, r), self.sign(self.eta[i][r], d));
            }
        }
        // ṡ_i h = h' ṡ_i and x_{α_i}(c) h = h x_{α_i}(c / χ_i(h)).
        let ti = g.h[i].clone();
        let h1: Vec<F::Elem> = (0..rs.rank())
            .map(|j| f.mul(&g.h[j], &f.pow(&ti, -(rs.cartan()[i][j] as i64))))
            .collect();
        let c2 = f.div(&c, &ti).expect("torus entries are units");

        if !g.w.is_left_descent(i) {
            if !f.is_zero(&c2) {
                let beta = g.w.inverse().act(i);
                let s = self.word_sign(&g.word, beta);
                g.up = self.lcollect(beta, self.sign(s, &c2), &g.up);
            }
            g.w = g.w.left_mul_simple(rs, i);
            g.word.0.insert(0, i);
            g.u = v3;
            g.h = h1;
            return;
        }

        let w2 = g.w.left_mul_simple(rs, i);
        let word2 = if g.word.0.first() == Some(&i) {
            Word(g.word.0[1..].to_vec())
        } else {
            w2.reduced_word(rs)
        };
        let beta = w2.inverse().act(i);
        let s = self.word_sign(&word2, beta);
        let m1 = f.neg(&f.one());
        if f.is_zero(&c2) {
            // ṡ_i ẇ = h_{α_i}(-1) ẇ'' and u' = x_β(d) r.
            let d = g.up[beta].clone();
            let r = if f.is_zero(&d) { std::mem::take(&mut g.up) } else { self.lcollect(beta, f.neg(&d), &g.up) };
            debug_assert!(f.is_zero(&r[beta]));
            let h2 = self.torus_mul(&h1, &self.torus_coroot(i, &m1));
            let coef = f.mul(&h2[i], &self.sign(s, &d));
            self.rmul(&mut v3, i, coef);
            g.u = v3;
            g.h = h2;
            g.w = w2;
            g.word = word2;
            g.up = r;
        } else {
            // ṡ_i x_{α_i}(c'') ṡ_i^{-1} = x_{-α_i}(e), then the rank-one rewrite.
            let e = self.sign(self.eta[i][i], &c2);
            let ei = f.inv(&e).unwrap();
            g.up = self.lcollect(beta, self.sign(s, &ei), &g.up);
            self.rmul(&mut v3, i, f.mul(&h1[i], &ei));
            g.u = v3;
            g.h = self.torus_mul(&h1, &self.torus_coroot(i, &ei));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{FiniteField, Rationals};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_letters<F: Scalars>(
        grp: &ChevalleyGroup<F>,
        elems: &[F::Elem],
        rng: &mut ChaCha8Rng,
        n: usize,
    ) -> Vec<Letter<F::Elem>> {
        let rs = grp.root_system();
        let f = grp.field();
        let units: Vec<&F::Elem> = elems.iter().filter(|e| !f.is_zero(e)).collect();
        (0..n)
            .map(|_| match rng.gen_range(0..10) {
                0 => Letter::T((0..rs.rank()).map(|_| units[rng.gen_range(0..units.len())].clone()).collect()),
                1 => Letter::S(rng.gen_range(0..rs.rank())),
                2 => Letter::SInv(rng.gen_range(0..rs.rank())),
                _ => Letter::X(rng.gen_range(0..rs.n_roots()), units[rng.gen_range(0..units.len())].clone()),
            })
            .collect()
    }

    fn oracle_check<F: Scalars>(grp: &ChevalleyGroup<F>, elems: &[F::Elem], trials: usize, len: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..trials {
            let letters = random_letters(grp, elems, &mut rng, len);
            let g = grp.evaluate(&letters).unwrap();
            assert!(grp.oracle_agrees(&g, &letters), "oracle mismatch for {letters:?}");
            let nf = grp.renormalize(&g).unwrap();
            assert_eq!(nf, g);
            for (a, c) in g.u_prime().iter().enumerate() {
                if !grp.field().is_zero(c) {
                    assert!(g.weyl().act(a) >= grp.root_system().n_pos(), "u' outside N(w)");
                }
            }
        }
    }

    #[test]
    fn rank_one_and_a2_oracle() {
        for t in [CartanType::A(1), CartanType::A(2), CartanType::A(3)] {
            let grp = ChevalleyGroup::new(t, FiniteField::prime(5).unwrap()).unwrap();
            oracle_check(&grp, &(0..5).collect::<Vec<u16>>(), 200, 8);
        }
    }

    #[test]
    fn d4_f4_oracle() {
        let grp = ChevalleyGroup::new(CartanType::D(4), FiniteField::prime(7).unwrap()).unwrap();
        oracle_check(&grp, &(0..7).collect::<Vec<u16>>(), 100, 10);
        let grp = ChevalleyGroup::new(CartanType::F4, FiniteField::prime(5).unwrap()).unwrap();
        oracle_check(&grp, &(0..5).collect::<Vec<u16>>(), 60, 10);
    }

    #[test]
    fn e8_oracle_small() {
        let grp = ChevalleyGroup::new(CartanType::E8, FiniteField::prime(3).unwrap()).unwrap();
        oracle_check(&grp, &[0, 1, 2], 10, 8);
    }

    #[test]
    fn rational_oracle() {
        let grp = ChevalleyGroup::new(CartanType::D(4), Rationals).unwrap();
        let elems: Vec<BigRational> = [1, -1, 2, -3].iter().map(|&n| BigRational::from_integer(n.into())).collect();
        oracle_check(&grp, &elems, 30, 8);
    }

    #[test]
    fn inverse_and_products() {
        let grp = ChevalleyGroup::new(CartanType::D(4), FiniteField::prime(5).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let elems: Vec<u16> = (0..5).collect();
        for _ in 0..30 {
            let a = grp.evaluate(&random_letters(&grp, &elems, &mut rng, 8)).unwrap();
            let b = grp.evaluate(&random_letters(&grp, &elems, &mut rng, 8)).unwrap();
            let ai = grp.inverse(&a).unwrap();
            assert!(grp.is_identity(&grp.multiply(&a, &ai).unwrap()));
            assert_eq!(*ai.weyl(), a.weyl().inverse());
            let ab = grp.multiply(&a, &b).unwrap();
            let mut letters = grp.letters(&a);
            letters.extend(grp.letters(&b));
            assert!(grp.oracle_agrees(&ab, &letters));
        }
    }

    #[test]
    fn x_additivity_gf2() {
        let grp = ChevalleyGroup::new(CartanType::E8, FiniteField::prime(2).unwrap()).unwrap();
        let x = grp.x(7, 1).unwrap();
        assert!(grp.is_identity(&grp.multiply(&x, &x).unwrap()));
        assert!(grp.is_identity(&grp.x(3, 0).unwrap()));
        let y = grp.x(grp.root_system().neg(7), 1).unwrap();
        assert_eq!(*y.weyl(), WeylElement::simple(grp.root_system(), 7));
    }

    #[test]
    fn budget_is_enforced() {
        let grp = ChevalleyGroup::new(CartanType::A(2), FiniteField::prime(3).unwrap()).unwrap().with_letter_budget(3);
        let letters: Vec<Letter<u16>> = (0..5).map(|k| Letter::X(k % 3, 1)).collect();
        assert_eq!(grp.evaluate(&letters), Err(ChevalleyError::Budget(3)));
    }
}
