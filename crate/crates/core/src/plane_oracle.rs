//! Exhaustive checks of five existence claims about projectivities between
//! finite projective planes.
//!
//! Setup: lines `L`, `L'` and points `p ∉ L`, `p' ∉ L'`, a projectivity
//! `θ` with `θ(p) = p'` and `M' = θ(L) ≠ L'`, and a projectivity
//! `φ: L' → L`. For `q ∉ L ∪ θ⁻¹(L')` the map `φ_q: L → L` sends `z` to
//! `φ(L' ∩ θ(qz))`. Each case gives a hypothesis on `φ_p` and asks for a
//! `q` whose `φ_q` has a prescribed fixed-point behaviour.
//!
//! Points and lines are canonical 3-vectors (first nonzero coordinate 1).
//! Every line carries a fixed basis, so projectivities between lines become
//! permutations of `P¹` indices: `(1:t)` has the index of `t`, `(0:1)` is last.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coefficients::Scalars;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("projective planes need a finite field")]
    InfiniteField,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("case {case} has no witness over {field}")]
    NoWitness { case: String, field: String },
    #[error("field of order {0} is outside the supported range 3..=5")]
    UnsupportedOrder(usize),
}

type Vec3<E> = [E; 3];

/// `PG(2, q)` with incidence tables.
pub struct ProjectivePlane<F: Scalars> {
    f: F,
    elems: Vec<F::Elem>,
    points: Vec<Vec3<F::Elem>>,
    lines: Vec<Vec3<F::Elem>>,
    point_index: HashMap<Vec3<F::Elem>, usize>,
    line_index: HashMap<Vec3<F::Elem>, usize>,
    // points of each line in P¹-parameter order of the line's basis
    param: Vec<Vec<usize>>,
    // param_of[line][point] = P¹ index, or usize::MAX off the line
    param_of: Vec<Vec<usize>>,
    basis: Vec<(Vec3<F::Elem>, Vec3<F::Elem>)>,
    join: Vec<usize>,
    meet: Vec<usize>,
}

fn dot<F: Scalars>(f: &F, a: &Vec3<F::Elem>, b: &Vec3<F::Elem>) -> F::Elem {
    let mut s = f.zero();
    for k in 0..3 {
        s = f.add(&s, &f.mul(&a[k], &b[k]));
    }
    s
}

fn cross<F: Scalars>(f: &F, a: &Vec3<F::Elem>, b: &Vec3<F::Elem>) -> Vec3<F::Elem> {
    let c = |i: usize, j: usize| f.sub(&f.mul(&a[i], &b[j]), &f.mul(&a[j], &b[i]));
    [c(1, 2), c(2, 0), c(0, 1)]
}

fn normalize<F: Scalars>(f: &F, v: &Vec3<F::Elem>) -> Option<Vec3<F::Elem>> {
    let lead = v.iter().find(|x| !f.is_zero(x))?;
    let inv = f.inv(lead).expect("nonzero");
    Some([f.mul(&v[0], &inv), f.mul(&v[1], &inv), f.mul(&v[2], &inv)])
}

impl<F: Scalars> ProjectivePlane<F> {
    pub fn new(f: F) -> Result<Self, PlaneError> {
        let elems = f.elements().ok_or(PlaneError::InfiniteField)?;
        let (zero, one) = (f.zero(), f.one());
        let mut points = Vec::new();
        for y in &elems {
            for z in &elems {
                points.push([one.clone(), y.clone(), z.clone()]);
            }
        }
        for z in &elems {
            points.push([zero.clone(), one.clone(), z.clone()]);
        }
        points.push([zero.clone(), zero.clone(), one.clone()]);
        let lines = points.clone();
        let point_index: HashMap<_, _> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let line_index = point_index.clone();
        let n = points.len();
        let mut join = vec![usize::MAX; n * n];
        let mut meet = vec![usize::MAX; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    join[i * n + j] = line_index[&normalize(&f, &cross(&f, &points[i], &points[j])).unwrap()];
                    meet[i * n + j] = point_index[&normalize(&f, &cross(&f, &lines[i], &lines[j])).unwrap()];
                }
            }
        }
        let mut plane = ProjectivePlane {
            f,
            elems,
            points,
            lines,
            point_index,
            line_index,
            param: Vec::new(),
            param_of: Vec::new(),
            basis: Vec::new(),
            join,
            meet,
        };
        for l in 0..n {
            let on: Vec<usize> = (0..n).filter(|&p| plane.incident(p, l)).collect();
            let (a, b) = (plane.points[on[0]].clone(), plane.points[on[1]].clone());
            let mut param = Vec::with_capacity(on.len());
            for t in &plane.elems {
                let v = [0, 1, 2].map(|k| plane.f.add(&a[k], &plane.f.mul(t, &b[k])));
                param.push(plane.point_index[&normalize(&plane.f, &v).unwrap()]);
            }
            param.push(on[1]);
            let mut param_of = vec![usize::MAX; n];
            for (k, &p) in param.iter().enumerate() {
                param_of[p] = k;
            }
            plane.param.push(param);
            plane.param_of.push(param_of);
            plane.basis.push((a, b));
        }
        Ok(plane)
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> &Vec3<F::Elem> {
        &self.points[i]
    }

    pub fn line(&self, i: usize) -> &Vec3<F::Elem> {
        &self.lines[i]
    }

    pub fn point_of(&self, v: &Vec3<F::Elem>) -> Option<usize> {
        self.point_index.get(&normalize(&self.f, v)?).copied()
    }

    pub fn line_of(&self, v: &Vec3<F::Elem>) -> Option<usize> {
        self.line_index.get(&normalize(&self.f, v)?).copied()
    }

    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.f.is_zero(&dot(&self.f, &self.points[p], &self.lines[l]))
    }

    /// The line through two distinct points.
    pub fn join(&self, p: usize, q: usize) -> usize {
        self.join[p * self.n_points() + q]
    }

    /// The point on two distinct lines.
    pub fn meet(&self, l: usize, m: usize) -> usize {
        self.meet[l * self.n_points() + m]
    }

    /// Points of `l` in parameter order.
    pub fn points_on(&self, l: usize) -> &[usize] {
        &self.param[l]
    }

    fn render(&self, v: &Vec3<F::Elem>) -> String {
        format!("({}:{}:{})", self.f.render(&v[0]), self.f.render(&v[1]), self.f.render(&v[2]))
    }

    fn render_line(&self, v: &Vec3<F::Elem>) -> String {
        format!("[{}:{}:{}]", self.f.render(&v[0]), self.f.render(&v[1]), self.f.render(&v[2]))
    }

    /// All 3×3 invertible matrices modulo scalars, optionally only those
    /// fixing the point `(0:0:1)`.
    fn projectivities(&self, fixing_origin: bool) -> Vec<Projectivity<F::Elem>> {
        let f = &self.f;
        let q = self.elems.len();
        let mut out = Vec::new();
        if fixing_origin {
            let (zero, one) = (f.zero(), f.one());
            for code in 0..q.pow(6) {
                let mut x = code;
                let mut d = [0usize; 6];
                for v in d.iter_mut() {
                    *v = x % q;
                    x /= q;
                }
                let e = |k: usize| self.elems[d[k]].clone();
                let m = [[e(0), e(1), zero.clone()], [e(2), e(3), zero.clone()], [e(4), e(5), one.clone()]];
                if !f.is_zero(&det3(f, &m)) {
                    out.push(Projectivity { m });
                }
            }
        } else {
            for code in 0..q.pow(9) {
                let mut x = code;
                let mut d = [0usize; 9];
                for v in d.iter_mut() {
                    *v = x % q;
                    x /= q;
                }
                let lead = d.iter().position(|&k| !f.is_zero(&self.elems[k]));
                if lead.map(|i| !f.is_one(&self.elems[d[i]])).unwrap_or(true) {
                    continue;
                }
                let m = [0, 1, 2].map(|r| [0, 1, 2].map(|c| self.elems[d[3 * r + c]].clone()));
                if !f.is_zero(&det3(f, &m)) {
                    out.push(Projectivity { m });
                }
            }
        }
        out
    }

    fn point_perm(&self, t: &Projectivity<F::Elem>) -> Vec<usize> {
        self.points
            .iter()
            .map(|v| {
                let w = [0, 1, 2].map(|r| dot(&self.f, &t.m[r], v));
                self.point_of(&w).expect("invertible")
            })
            .collect()
    }

    /// `PGL₂` as permutations of `P¹` indices, with canonical matrices.
    fn pgl2(&self) -> Vec<(Vec<usize>, [[F::Elem; 2]; 2])> {
        let f = &self.f;
        let q = self.elems.len();
        let mut out = Vec::new();
        for code in 0..q.pow(4) {
            let d = [code % q, code / q % q, code / q / q % q, code / q / q / q];
            let lead = d.iter().position(|&k| !f.is_zero(&self.elems[k]));
            if lead.map(|i| !f.is_one(&self.elems[d[i]])).unwrap_or(true) {
                continue;
            }
            let m = [[self.elems[d[0]].clone(), self.elems[d[1]].clone()], [self.elems[d[2]].clone(), self.elems[d[3]].clone()]];
            let det = f.sub(&f.mul(&m[0][0], &m[1][1]), &f.mul(&m[0][1], &m[1][0]));
            if f.is_zero(&det) {
                continue;
            }
            out.push((self.p1_perm(&m), m));
        }
        out
    }

    fn p1_index(&self, v: &[F::Elem; 2]) -> usize {
        let f = &self.f;
        if f.is_zero(&v[0]) {
            return self.elems.len();
        }
        let t = f.div(&v[1], &v[0]).unwrap();
        self.elems.iter().position(|e| *e == t).unwrap()
    }

    fn p1_vec(&self, k: usize) -> [F::Elem; 2] {
        if k == self.elems.len() {
            [self.f.zero(), self.f.one()]
        } else {
            [self.f.one(), self.elems[k].clone()]
        }
    }

    fn p1_perm(&self, m: &[[F::Elem; 2]; 2]) -> Vec<usize> {
        let f = &self.f;
        (0..=self.elems.len())
            .map(|k| {
                let v = self.p1_vec(k);
                let w = [0, 1].map(|r| f.add(&f.mul(&m[r][0], &v[0]), &f.mul(&m[r][1], &v[1])));
                self.p1_index(&w)
            })
            .collect()
    }
}

fn det3<F: Scalars>(f: &F, m: &[[F::Elem; 3]; 3]) -> F::Elem {
    let c = cross(f, &m[1], &m[2]);
    dot(f, &m[0], &c)
}

/// An invertible 3×3 matrix acting on column vectors, up to scalars.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Projectivity<E> {
    pub m: [[E; 3]; 3],
}

/// Fixed-point behaviour of a map `L → L` induced by a 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MapClass {
    pub fixed: usize,
    pub identity: bool,
}

/// The five cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LemmaCase {
    I,
    II,
    III,
    IV,
    V,
}

impl LemmaCase {
    pub const ALL: [LemmaCase; 5] = [LemmaCase::I, LemmaCase::II, LemmaCase::III, LemmaCase::IV, LemmaCase::V];

    pub fn label(self) -> &'static str {
        match self {
            LemmaCase::I => "i",
            LemmaCase::II => "ii",
            LemmaCase::III => "iii",
            LemmaCase::IV => "iv",
            LemmaCase::V => "v",
        }
    }

    /// Whether `φ_p` satisfies the hypothesis; `x_fixed` says whether
    /// `φ_p` fixes `x = φ(L' ∩ M')`.
    pub fn hypothesis(self, phi_p: MapClass, x_fixed: bool) -> bool {
        match self {
            LemmaCase::I | LemmaCase::II => phi_p.identity,
            LemmaCase::III => phi_p.fixed == 0,
            LemmaCase::IV => phi_p.fixed == 1 && x_fixed,
            LemmaCase::V => phi_p.fixed == 2 && x_fixed,
        }
    }

    /// Whether `φ_q` is what the case asks for.
    pub fn goal(self, phi_q: MapClass) -> bool {
        match self {
            LemmaCase::I | LemmaCase::IV => phi_q.fixed == 2,
            LemmaCase::II | LemmaCase::V => phi_q.fixed == 1,
            LemmaCase::III => !phi_q.identity && phi_q.fixed >= 1,
        }
    }
}

/// A configuration satisfying a case's hypothesis, with its `q`.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub theta: Vec<Vec<String>>,
    pub l: String,
    pub l_prime: String,
    pub p: String,
    pub p_prime: String,
    /// Bases `(a, b)` of `L'` and `L` in which `φ` is the matrix below,
    /// acting on coordinates `(λ, μ)` of `λa + μb`.
    pub phi_source_basis: [String; 2],
    pub phi_target_basis: [String; 2],
    pub phi: Vec<Vec<String>>,
    pub q: String,
    pub phi_p: MapClass,
    pub phi_q: MapClass,
}

/// Per-case tallies over a configuration space.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CaseTally {
    pub hypothesis: u64,
    pub witnessed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub case: LemmaCase,
    pub tally: CaseTally,
    pub pass: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub field: String,
    pub framed: bool,
    pub configurations: u64,
    pub cases: Vec<CaseReport>,
    /// Case (ii) configurations in which every `q` on `px ∖ {p, x}` is
    /// admissible and gives a `φ_q` with exactly one fixed point.
    pub line_px_construction: u64,
    pub pass: bool,
}

/// Counts fixed points of `φ_q` for `φ: L' → L` given as a `P¹` permutation
/// between the lines' parameterizations. `θ` is a point permutation.
pub fn line_map_class<F: Scalars>(
    plane: &ProjectivePlane<F>,
    theta: &[usize],
    phi: &[usize],
    q: usize,
    l: usize,
    l_prime: usize,
) -> Result<MapClass, PlaneError> {
    if plane.incident(q, l) || plane.incident(theta[q], l_prime) {
        return Err(PlaneError::Degenerate("q lies on L or on θ⁻¹(L')".into()));
    }
    let tq = theta[q];
    let mut fixed = 0;
    for (k, &z) in plane.points_on(l).iter().enumerate() {
        let tz = theta[z];
        let hit = plane.meet(plane.join(tq, tz), l_prime);
        if phi[plane.param_of[l_prime][hit]] == k {
            fixed += 1;
        }
    }
    let n = plane.order() + 1;
    let class = MapClass { fixed, identity: fixed == n };
    assert!(matches!(fixed, 0..=2) || fixed == n, "fixed-point count {fixed} impossible for a line projectivity");
    Ok(class)
}

/// Public form of [`line_map_class`] taking matrices: `θ` as a 3×3 matrix and
/// `φ` as a 2×2 matrix in the bases of `L'` and `L`.
pub fn line_map_fixed_points<F: Scalars>(
    plane: &ProjectivePlane<F>,
    theta: &Projectivity<F::Elem>,
    phi: &[[F::Elem; 2]; 2],
    q: usize,
    l: usize,
    l_prime: usize,
) -> Result<usize, PlaneError> {
    let perm = plane.point_perm(theta);
    let m_prime = image_line(plane, &perm, l);
    if m_prime == l_prime {
        return Err(PlaneError::Degenerate("θ(L) = L'".into()));
    }
    Ok(line_map_class(plane, &perm, &plane.p1_perm(phi), q, l, l_prime)?.fixed)
}

fn image_line<F: Scalars>(plane: &ProjectivePlane<F>, perm: &[usize], l: usize) -> usize {
    let on = plane.points_on(l);
    plane.join(perm[on[0]], perm[on[1]])
}

struct Context<'a, F: Scalars> {
    plane: &'a ProjectivePlane<F>,
    pgl2: Vec<(Vec<usize>, [[F::Elem; 2]; 2])>,
}

#[derive(Default, Clone)]
struct Acc {
    tallies: [CaseTally; 5],
    configs: u64,
    construction: u64,
    // first witness per case: (theta index, l, l', phi index, p, q)
    first: [Option<(usize, usize, usize, usize, usize, usize)>; 5],
}

impl Acc {
    fn merge(mut self, o: Acc) -> Acc {
        self.configs += o.configs;
        self.construction += o.construction;
        for k in 0..5 {
            self.tallies[k].hypothesis += o.tallies[k].hypothesis;
            self.tallies[k].witnessed += o.tallies[k].witnessed;
            self.first[k] = match (self.first[k], o.first[k]) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        self
    }
}

impl<F: Scalars> Context<'_, F> {
    /// All configurations for one `θ`, one pair of lines and every `φ`,
    /// with `p` ranging over `points` (restricted to valid ones).
    fn scan(&self, ti: usize, theta: &[usize], l: usize, lp: usize, points: Option<&[usize]>, acc: &mut Acc) {
        let plane = self.plane;
        let mp = image_line(plane, theta, l);
        if mp == lp {
            return;
        }
        let xp = plane.meet(lp, mp);
        let valid: Vec<usize> =
            (0..plane.n_points()).filter(|&q| !plane.incident(q, l) && !plane.incident(theta[q], lp)).collect();
        let ps: Vec<usize> = match points {
            Some(ps) => ps.iter().copied().filter(|p| valid.contains(p)).collect(),
            None => valid.clone(),
        };
        if ps.is_empty() {
            return;
        }
        for (fi, (phi, _)) in self.pgl2.iter().enumerate() {
            let x_param = phi[plane.param_of[lp][xp]];
            let x = plane.param[l][x_param];
            let classes: Vec<(usize, MapClass, bool)> = valid
                .iter()
                .map(|&q| {
                    let c = line_map_class(plane, theta, phi, q, l, lp).expect("valid q");
                    let tq = theta[q];
                    let hit = plane.meet(plane.join(tq, theta[x]), lp);
                    let x_fixed = phi[plane.param_of[lp][hit]] == x_param;
                    (q, c, x_fixed)
                })
                .collect();
            let mut class_at = vec![None; plane.n_points()];
            for &(q, c, _) in &classes {
                class_at[q] = Some(c);
            }
            let goal_q: [Option<usize>; 5] =
                LemmaCase::ALL.map(|case| classes.iter().find(|(_, c, _)| case.goal(*c)).map(|(q, _, _)| *q));
            for &p in &ps {
                acc.configs += 1;
                let &(_, cp, x_fixed) = classes.iter().find(|(q, _, _)| *q == p).unwrap();
                let mut on_px = None;
                if LemmaCase::II.hypothesis(cp, x_fixed) {
                    let px = plane.join(p, x);
                    let mut qs = plane.points_on(px).iter().copied().filter(|&q| q != p && q != x).peekable();
                    let first = qs.peek().copied();
                    if qs.all(|q| matches!(class_at[q], Some(MapClass { fixed: 1, .. }))) {
                        acc.construction += 1;
                        on_px = first;
                    }
                }
                for (k, case) in LemmaCase::ALL.iter().enumerate() {
                    if case.hypothesis(cp, x_fixed) {
                        acc.tallies[k].hypothesis += 1;
                        let q = if *case == LemmaCase::II { on_px.or(goal_q[k]) } else { goal_q[k] };
                        if let Some(q) = q {
                            acc.tallies[k].witnessed += 1;
                            let cand = (ti, l, lp, fi, p, q);
                            acc.first[k] = Some(acc.first[k].map_or(cand, |c| c.min(cand)));
                        }
                    }
                }
            }
        }
    }
}

fn witness_record<F: Scalars>(
    plane: &ProjectivePlane<F>,
    thetas: &[Projectivity<F::Elem>],
    pgl2: &[(Vec<usize>, [[F::Elem; 2]; 2])],
    w: (usize, usize, usize, usize, usize, usize),
) -> Witness {
    let (ti, l, lp, fi, p, q) = w;
    let f = &plane.f;
    let perm = plane.point_perm(&thetas[ti]);
    let (phi, m) = &pgl2[fi];
    let cp = line_map_class(plane, &perm, phi, p, l, lp).unwrap();
    let cq = line_map_class(plane, &perm, phi, q, l, lp).unwrap();
    let mat = |rows: Vec<Vec<F::Elem>>| rows.iter().map(|r| r.iter().map(|x| f.render(x)).collect()).collect();
    Witness {
        theta: mat(thetas[ti].m.iter().map(|r| r.to_vec()).collect()),
        l: plane.render_line(plane.line(l)),
        l_prime: plane.render_line(plane.line(lp)),
        p: plane.render(plane.point(p)),
        p_prime: plane.render(plane.point(perm[p])),
        phi_source_basis: [plane.render(&plane.basis[lp].0), plane.render(&plane.basis[lp].1)],
        phi_target_basis: [plane.render(&plane.basis[l].0), plane.render(&plane.basis[l].1)],
        // the P¹ convention (1:t) ↔ a + t b means columns act on (λ, μ)
        phi: mat(m.iter().map(|r| r.to_vec()).collect()),
        q: plane.render(plane.point(q)),
        phi_p: cp,
        phi_q: cq,
    }
}

fn finish<F: Scalars>(
    plane: &ProjectivePlane<F>,
    thetas: &[Projectivity<F::Elem>],
    pgl2: &[(Vec<usize>, [[F::Elem; 2]; 2])],
    acc: Acc,
    framed: bool,
) -> LemmaReport {
    let cases: Vec<CaseReport> = LemmaCase::ALL
        .iter()
        .enumerate()
        .map(|(k, &case)| {
            let t = acc.tallies[k].clone();
            CaseReport {
                case,
                pass: t.hypothesis > 0 && t.hypothesis == t.witnessed,
                witness: acc.first[k].map(|w| witness_record(plane, thetas, pgl2, w)),
                tally: t,
            }
        })
        .collect();
    LemmaReport {
        field: plane.f.descriptor().to_string(),
        framed,
        configurations: acc.configs,
        line_px_construction: acc.construction,
        pass: cases.iter().all(|c| c.pass),
        cases,
    }
}

/// Framed search: `L = L' = {z = 0}`, `p = p' = (0:0:1)`, every `θ` fixing
/// `p` with `θ(L) ≠ L`, and every `φ ∈ PGL₂`.
pub fn verify_lemma_framed<F: Scalars>(plane: &ProjectivePlane<F>) -> LemmaReport {
    let f = &plane.f;
    let l0 = plane.line_of(&[f.zero(), f.zero(), f.one()]).unwrap();
    let p0 = plane.point_of(&[f.zero(), f.zero(), f.one()]).unwrap();
    let thetas = plane.projectivities(true);
    let ctx = Context { plane, pgl2: plane.pgl2() };
    let acc = thetas
        .par_iter()
        .enumerate()
        .map(|(ti, t)| {
            let mut acc = Acc::default();
            ctx.scan(ti, &plane.point_perm(t), l0, l0, Some(&[p0]), &mut acc);
            acc
        })
        .reduce(Acc::default, Acc::merge);
    finish(plane, &thetas, &ctx.pgl2, acc, true)
}

/// Search without any normalization: every `θ ∈ PGL₃`, every pair of lines,
/// every `φ` and every admissible `p`.
pub fn verify_lemma_unreduced<F: Scalars>(plane: &ProjectivePlane<F>) -> LemmaReport {
    let n = plane.n_points();
    let thetas = plane.projectivities(false);
    let ctx = Context { plane, pgl2: plane.pgl2() };
    let acc = thetas
        .par_iter()
        .enumerate()
        .map(|(ti, t)| {
            let perm = plane.point_perm(t);
            let mut acc = Acc::default();
            for l in 0..n {
                for lp in 0..n {
                    ctx.scan(ti, &perm, l, lp, None, &mut acc);
                }
            }
            acc
        })
        .reduce(Acc::default, Acc::merge);
    finish(plane, &thetas, &ctx.pgl2, acc, false)
}

/// Number of antiflags `(L, p)` with `p ∉ L`: `(q²+q+1) q²`.
pub fn antiflag_count(q: u64) -> u64 {
    (q * q + q + 1) * q * q
}

/// Framed verification over a field of order 3, 4 or 5, failing if a case
/// lacks a witness.
pub fn verify_lemma<F: Scalars>(f: F) -> Result<LemmaReport, PlaneError> {
    let q = f.elements().ok_or(PlaneError::InfiniteField)?.len();
    if !(3..=5).contains(&q) {
        return Err(PlaneError::UnsupportedOrder(q));
    }
    let plane = ProjectivePlane::new(f)?;
    let report = verify_lemma_framed(&plane);
    if let Some(c) = report.cases.iter().find(|c| !c.pass) {
        return Err(PlaneError::NoWitness { case: c.case.label().into(), field: report.field.clone() });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::FiniteField;

    #[test]
    fn incidence_counts() {
        for q in [2u64, 3, 4, 5] {
            let plane = ProjectivePlane::new(FiniteField::of_order(q).unwrap()).unwrap();
            let n = plane.n_points();
            assert_eq!(n as u64, q * q + q + 1);
            for l in 0..n {
                assert_eq!((0..n).filter(|&p| plane.incident(p, l)).count() as u64, q + 1);
                assert_eq!((0..n).filter(|&m| plane.incident(l, m)).count() as u64, q + 1);
            }
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        let l = plane.join(a, b);
                        assert!(plane.incident(a, l) && plane.incident(b, l));
                    }
                }
            }
        }
    }

    #[test]
    fn group_orders() {
        let plane = ProjectivePlane::new(FiniteField::of_order(3).unwrap()).unwrap();
        assert_eq!(plane.projectivities(false).len(), 5616);
        assert_eq!(plane.projectivities(true).len(), 48 * 9);
        assert_eq!(plane.pgl2().len(), 24);
    }

    #[test]
    fn shear_through_the_centre_gives_identity() {
        // θ(x:y:z) = (x:y:z + x) fixes p = (0:0:1); lines through p are
        // preserved, so with L = L' = {z = 0} and φ = id, φ_p = id.
        let f = FiniteField::of_order(5).unwrap();
        let plane = ProjectivePlane::new(f).unwrap();
        let (z, o) = (0u16, 1u16);
        let theta = Projectivity { m: [[o, z, z], [z, o, z], [o, z, o]] };
        let l = plane.line_of(&[z, z, o]).unwrap();
        let p = plane.point_of(&[z, z, o]).unwrap();
        let id = [[o, z], [z, o]];
        assert_eq!(line_map_fixed_points(&plane, &theta, &id, p, l, l).unwrap(), 6);
        let other = plane.point_of(&[o, z, o]).unwrap();
        let n = line_map_fixed_points(&plane, &theta, &id, other, l, l).unwrap();
        assert!(n <= 2);
    }
}
