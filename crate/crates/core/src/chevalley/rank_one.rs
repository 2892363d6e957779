//! The rank-one subgroup `G_φ = ⟨U_φ, U_{-φ}⟩` and the conjugation schedule
//! that brings each of its elements to one of
//!
//! `g1(t) = h_φ(t)`, `g2 = x_φ(1)`, `g3 = x_φ(1) h_φ(-1)`, `g4(a) = x_φ(a) x_{-φ}(1)`.
//!
//! Conjugators come from `⟨G_φ, h_{α_p}(K^×)⟩` with `α_p` the polar node.
//! Every step is carried out by group multiplication and compared against the
//! closed form it is supposed to produce.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::coefficients::Scalars;
use crate::weyl::WeylElement;

use super::expr::render_element;
use super::{ChevalleyError, ChevalleyGroup, GroupElement, Letter};

/// The reached form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOneForm<E> {
    G1(E),
    G2,
    G3,
    G4(E),
}

impl<E> RankOneForm<E> {
    pub fn label(&self) -> &'static str {
        match self {
            RankOneForm::G1(_) => "g1",
            RankOneForm::G2 => "g2",
            RankOneForm::G3 => "g3",
            RankOneForm::G4(_) => "g4",
        }
    }
}

/// One conjugation `g ← y g y^{-1}`, checked against its predicted result.
#[derive(Debug, Clone, Serialize)]
pub struct ScheduleStep {
    pub description: String,
    pub conjugator: String,
    pub result: String,
}

#[derive(Debug, Clone)]
pub struct ScheduleResult<E> {
    pub form: RankOneForm<E>,
    pub steps: Vec<ScheduleStep>,
    /// Whether the final `h_{α_p}(-1)` adjustment after the `s_φ h_{α_p}(b^{-1})`
    /// conjugation was needed to land exactly on `x_φ(a) x_{-φ}(1)`.
    pub sign_adjusted: bool,
}

struct Ctx<'a, F: Scalars> {
    grp: &'a ChevalleyGroup<F>,
    phi: usize,
    polar: usize,
    steps: Vec<ScheduleStep>,
}

impl<F: Scalars> Ctx<'_, F> {
    fn x_phi(&self, t: F::Elem) -> Letter<F::Elem> {
        Letter::X(self.phi, t)
    }

    fn x_mphi(&self, t: F::Elem) -> Letter<F::Elem> {
        Letter::X(self.grp.root_system().neg(self.phi), t)
    }

    fn h_phi(&self, t: &F::Elem) -> Letter<F::Elem> {
        Letter::T(self.grp.torus_coroot(self.phi, t))
    }

    fn h_polar(&self, t: &F::Elem) -> Letter<F::Elem> {
        Letter::T(self.grp.torus_coroot(self.polar, t))
    }

    fn eval(&self, letters: &[Letter<F::Elem>]) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        self.grp.evaluate(letters)
    }

    /// Conjugates by `y`, checks the result equals `expected`, and records it.
    fn step(
        &mut self,
        g: &GroupElement<F::Elem>,
        y: &[Letter<F::Elem>],
        expected: &[Letter<F::Elem>],
        description: String,
    ) -> Result<GroupElement<F::Elem>, ChevalleyError> {
        let y = self.eval(y)?;
        let got = self.grp.conjugate(g, &y)?;
        let want = self.eval(expected)?;
        if got != want {
            return Err(ChevalleyError::Schedule(format!(
                "{description}: got {}",
                render_element(self.grp, &got)
            )));
        }
        self.steps.push(ScheduleStep {
            description,
            conjugator: render_element(self.grp, &y),
            result: render_element(self.grp, &got),
        });
        Ok(got)
    }
}

/// The highest root and the unique node `p` with `⟨φ^∨, α_p⟩ = ⟨α_p^∨, φ⟩ = 1`.
pub fn polar_data<F: Scalars>(grp: &ChevalleyGroup<F>) -> Result<(usize, usize), ChevalleyError> {
    let rs = grp.root_system();
    let phi = rs.highest_root();
    let polar: Vec<usize> =
        (0..rs.rank()).filter(|&j| rs.cartan_pairing(phi, j) == 1 && rs.cartan_pairing(j, phi) == 1).collect();
    match polar.as_slice() {
        [p] => Ok((phi, *p)),
        _ => Err(ChevalleyError::Schedule(format!("type {} has no unique polar node", rs.cartan_type()))),
    }
}

/// Reads `g = x_φ(a) h_φ(t) [s_φ] x_φ(c)` off a normal form; `None` if `g` is
/// not of that shape.
fn split<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    phi: usize,
    polar: usize,
    g: &GroupElement<F::Elem>,
) -> Option<(F::Elem, F::Elem, bool, F::Elem)> {
    let f = grp.field();
    let rs = grp.root_system();
    let sphi = WeylElement::reflection(rs, phi);
    let long = if g.weyl().is_identity() {
        false
    } else if *g.weyl() == sphi {
        true
    } else {
        return None;
    };
    let supported = |v: &[F::Elem]| v.iter().enumerate().all(|(k, c)| k == phi || f.is_zero(c));
    if !supported(g.u()) || !supported(g.u_prime()) {
        return None;
    }
    let mut h = g.torus().to_vec();
    if long {
        // s_φ(1) = h0 ẇ, so h ẇ = (h h0^{-1}) s_φ(1).
        let s = grp.s(phi, &f.one()).ok()?;
        for (x, y) in h.iter_mut().zip(s.torus()) {
            *x = f.div(x, y)?;
        }
    }
    let t = h[polar].clone();
    if h != grp.torus_coroot(phi, &t) {
        return None;
    }
    Some((g.u()[phi].clone(), t, long, g.u_prime()[phi].clone()))
}

/// Runs the reduction schedule on an element of `G_φ`.
pub fn rank_one_normal_form<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    g: &GroupElement<F::Elem>,
) -> Result<ScheduleResult<F::Elem>, ChevalleyError> {
    let (phi, polar) = polar_data(grp)?;
    let f = grp.field().clone();
    let one = f.one();
    let m1 = f.neg(&one);
    let mut cx = Ctx { grp, phi, polar, steps: Vec::new() };
    let (mut a, t, long, c) = split(grp, phi, polar, g).ok_or(ChevalleyError::NotInRankOne)?;
    let mut g = g.clone();
    let sphi = grp.s_letters(phi, &one)?;

    if !f.is_zero(&c) {
        let mut expected = vec![cx.x_phi(f.add(&a, &c)), cx.h_phi(&t)];
        if long {
            expected.extend(sphi.iter().cloned());
        }
        g = cx.step(&g, &[cx.x_phi(c.clone())], &expected, "absorb the right unipotent factor".into())?;
        a = f.add(&a, &c);
    }

    if !long {
        if f.is_zero(&a) {
            return Ok(ScheduleResult { form: RankOneForm::G1(t), steps: cx.steps, sign_adjusted: false });
        }
        let ai = f.inv(&a).unwrap();
        let y = [cx.h_polar(&ai)];
        let expected = [cx.x_phi(one.clone()), cx.h_phi(&t)];
        cx.step(&g, &y, &expected, "h_p(a)^-1 g h_p(a) = x_phi(1) h_phi(t)".into())?;
        if f.is_one(&t) {
            return Ok(ScheduleResult { form: RankOneForm::G2, steps: cx.steps, sign_adjusted: false });
        }
        if t == m1 {
            return Ok(ScheduleResult { form: RankOneForm::G3, steps: cx.steps, sign_adjusted: false });
        }
        let ti = f.inv(&t).unwrap();
        let s = f.div(&ti, &f.sub(&t, &ti)).unwrap();
        let gp = cx.eval(&[cx.x_phi(one.clone()), cx.h_phi(&t)])?;
        cx.step(&gp, &[cx.x_phi(s)], &[cx.h_phi(&t)], "x_phi(t^-1/(t-t^-1)) g' x_phi(..)^-1 = h_phi(t)".into())?;
        return Ok(ScheduleResult { form: RankOneForm::G1(t), steps: cx.steps, sign_adjusted: false });
    }

    // g = x_φ(a) h_φ(t) s_φ
    let ti = f.inv(&t).unwrap();
    let a1 = f.mul(&a, &ti);
    let mut expected = vec![cx.x_phi(a1.clone())];
    expected.extend(sphi.iter().cloned());
    g = cx.step(&g, &[cx.h_polar(&ti)], &expected, "h_p(t)^-1 g h_p(t) = x_phi(a t^-1) s_phi".into())?;
    // s_φ = x_φ(1) x_{-φ}(-1) x_φ(1), so conjugating by x_φ(a t^-1 + 1)^{-1}
    // gives x_{-φ}(-1) x_φ(b).
    let b = f.add(&a1, &f.from_i64(2));
    let y = [cx.x_phi(f.neg(&f.add(&a1, &one)))];
    g = cx.step(&g, &y, &[cx.x_mphi(m1.clone()), cx.x_phi(b.clone())], "conjugate to x_-phi(-1) x_phi(b)".into())?;
    if f.is_zero(&b) {
        let y = sphi.clone();
        cx.step(&g, &y, &[cx.x_phi(one.clone())], "s_phi x_-phi(-1) s_phi^-1 = x_phi(1)".into())?;
        return Ok(ScheduleResult { form: RankOneForm::G2, steps: cx.steps, sign_adjusted: false });
    }
    let bi = f.inv(&b).unwrap();
    let mut y = sphi.clone();
    y.push(cx.h_polar(&bi));
    let mphi = grp.root_system().neg(phi);
    let target = |x: F::Elem| [Letter::X(phi, x), Letter::X(mphi, one.clone())];
    let conj = grp.conjugate(&g, &cx.eval(&y)?)?;
    if conj == cx.eval(&target(b.clone()))? {
        cx.step(&g, &y, &target(b.clone()), "conjugate by s_phi h_p(b^-1) to g4".into())?;
        return Ok(ScheduleResult { form: RankOneForm::G4(b), steps: cx.steps, sign_adjusted: false });
    }
    g = cx.step(&g, &y, &[cx.x_phi(b.clone()), cx.x_mphi(m1.clone())], "conjugate by s_phi h_p(b^-1)".into())?;
    let nb = f.neg(&b);
    cx.step(&g, &[cx.h_polar(&m1)], &target(nb.clone()), "conjugate by h_p(-1) to g4".into())?;
    Ok(ScheduleResult { form: RankOneForm::G4(nb), steps: cx.steps, sign_adjusted: true })
}

/// All elements of `G_φ` over a finite field, by breadth-first closure under
/// `x_{±φ}(c)`.
pub fn enumerate_rank_one_subgroup<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    cap: usize,
) -> Result<Vec<GroupElement<F::Elem>>, ChevalleyError> {
    let f = grp.field();
    let elems = f.elements().ok_or_else(|| ChevalleyError::Schedule("field is not finite".into()))?;
    let (phi, _) = polar_data(grp)?;
    let rs = grp.root_system();
    let mut gens = Vec::new();
    for c in elems.iter().filter(|c| !f.is_zero(c)) {
        gens.push(grp.x(phi, c.clone())?);
        gens.push(grp.x(rs.neg(phi), c.clone())?);
    }
    let id = grp.identity();
    let mut seen: HashSet<GroupElement<F::Elem>> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = grp.multiply(s, &g)?;
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(ChevalleyError::Budget(cap));
                }
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{FiniteField, Rationals};
    use crate::rootsys::CartanType;
    use num_rational::BigRational;

    #[test]
    fn quoted_forms_e8() {
        let grp = ChevalleyGroup::new(CartanType::E8, FiniteField::prime(7).unwrap()).unwrap();
        let (phi, polar) = polar_data(&grp).unwrap();
        assert_eq!(polar, 7);
        let x1 = grp.x(phi, 1).unwrap();
        assert_eq!(rank_one_normal_form(&grp, &x1).unwrap().form, RankOneForm::G2);
        // x_φ(c) h_φ(t) with t ≠ ±1 reaches g1(t).
        let g = grp.evaluate(&[Letter::X(phi, 3), Letter::T(grp.torus_coroot(phi, &2))]).unwrap();
        assert_eq!(rank_one_normal_form(&grp, &g).unwrap().form, RankOneForm::G1(2));
        // x_φ(a) h_φ(t) s_φ reaches g4(b) with b ≠ 0 or g2.
        for a in 1..7u16 {
            for t in 1..7u16 {
                let mut l = vec![Letter::X(phi, a), Letter::T(grp.torus_coroot(phi, &t))];
                l.extend(grp.s_letters(phi, &1).unwrap());
                let r = rank_one_normal_form(&grp, &grp.evaluate(&l).unwrap()).unwrap();
                match r.form {
                    RankOneForm::G4(b) => assert_ne!(b, 0),
                    RankOneForm::G2 => {}
                    other => panic!("unexpected {other:?}"),
                }
            }
        }
    }

    #[test]
    fn rational_conjugation_identity() {
        let grp = ChevalleyGroup::new(CartanType::E8, Rationals).unwrap();
        let (phi, _) = polar_data(&grp).unwrap();
        let two = BigRational::from_integer(2.into());
        let g = grp.evaluate(&[Letter::X(phi, BigRational::from_integer(1.into())), Letter::T(grp.torus_coroot(phi, &two))]).unwrap();
        let r = rank_one_normal_form(&grp, &g).unwrap();
        assert_eq!(r.form, RankOneForm::G1(two));
        assert_eq!(r.steps.len(), 2);
    }

    #[test]
    fn subgroup_order_gf3() {
        let grp = ChevalleyGroup::new(CartanType::E8, FiniteField::prime(3).unwrap()).unwrap();
        let all = enumerate_rank_one_subgroup(&grp, 10_000).unwrap();
        assert_eq!(all.len(), 24);
        for g in &all {
            rank_one_normal_form(&grp, g).unwrap();
        }
    }
}
