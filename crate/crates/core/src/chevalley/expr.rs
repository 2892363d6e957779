//! Text syntax for group elements.
//!
//! Terms are separated by whitespace or `*`:
//!
//! * `x[ROOT](t)` is a root element,
//! * `h[COWEIGHT](t)` is a torus element,
//! * `s[ROOT]` or `s[ROOT](t)` is `s_α(t)`, with `t = 1` by default,
//! * any term may carry a trailing `^-1`.
//!
//! `ROOT` is `phi`, `a3`, a digit string such as `22343210`, or a comma list,
//! each optionally negated with `-`. `COWEIGHT` is `w3` for a fundamental
//! coweight or a root, which stands for its coroot. `e` is the identity.

use crate::coefficients::Scalars;
use crate::rootsys::{CoweightVector, RootSystem};

use super::{ChevalleyError, ChevalleyGroup, GroupElement, Letter};

fn perr(msg: impl Into<String>) -> ChevalleyError {
    ChevalleyError::Parse(msg.into())
}

/// Resolves a root token to a root index.
pub fn parse_root_token(rs: &RootSystem, tok: &str) -> Result<usize, ChevalleyError> {
    let t = tok.trim();
    let (negate, body) = match t.strip_prefix('-') {
        Some(b) if b == "phi" || b.starts_with('a') => (true, b),
        _ => (false, t),
    };
    let idx = if body == "phi" {
        rs.highest_root()
    } else if let Some(k) = body.strip_prefix('a') {
        let k: usize = k.parse().map_err(|_| perr(format!("bad simple root {tok:?}")))?;
        if k == 0 || k > rs.rank() {
            return Err(perr(format!("simple root {tok:?} out of range")));
        }
        rs.simple(k - 1)
    } else {
        rs.parse_root(body).map_err(|e| perr(format!("{tok:?}: {e}")))?
    };
    Ok(if negate { rs.neg(idx) } else { idx })
}

fn parse_coweight(rs: &RootSystem, tok: &str) -> Result<CoweightVector, ChevalleyError> {
    if let Some(k) = tok.trim().strip_prefix('w') {
        let k: usize = k.parse().map_err(|_| perr(format!("bad coweight {tok:?}")))?;
        if k == 0 || k > rs.rank() {
            return Err(perr(format!("coweight {tok:?} out of range")));
        }
        return Ok(CoweightVector::fundamental(rs.rank(), k - 1));
    }
    Ok(rs.coroot_coweight(parse_root_token(rs, tok)?))
}

/// Splits an expression into terms, respecting brackets and parentheses.
fn split_terms(s: &str) -> Result<Vec<String>, ChevalleyError> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(perr("unbalanced brackets"));
        }
        if depth == 0 && (ch.is_whitespace() || ch == '*' || ch == '·') {
            if !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(perr("unbalanced brackets"));
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    Ok(terms)
}

/// Parses an expression into generator letters.
pub fn parse_letters<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    s: &str,
) -> Result<Vec<Letter<F::Elem>>, ChevalleyError> {
    let rs = grp.root_system();
    let f = grp.field();
    let mut out = Vec::new();
    for term in split_terms(s)? {
        if term == "e" || term == "1" {
            continue;
        }
        let (body, inverse) = match term.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (term.as_str(), false),
        };
        let kind = body.chars().next().ok_or_else(|| perr("empty term"))?;
        let open = body.find('[').ok_or_else(|| perr(format!("missing '[' in {term:?}")))?;
        let close = body.find(']').ok_or_else(|| perr(format!("missing ']' in {term:?}")))?;
        if open != 1 || close < open {
            return Err(perr(format!("malformed term {term:?}")));
        }
        let arg = &body[open + 1..close];
        let rest = &body[close + 1..];
        let value = if rest.is_empty() {
            None
        } else {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| perr(format!("malformed parameter in {term:?}")))?;
            Some(f.parse(inner)?)
        };
        let mut letters = match kind {
            'x' => {
                let a = parse_root_token(rs, arg)?;
                let t = value.ok_or_else(|| perr(format!("x needs a parameter: {term:?}")))?;
                vec![Letter::X(a, t)]
            }
            'h' => {
                let lambda = parse_coweight(rs, arg)?;
                let t = value.ok_or_else(|| perr(format!("h needs a parameter: {term:?}")))?;
                if f.is_zero(&t) {
                    return Err(ChevalleyError::ZeroParameter(term.clone()));
                }
                vec![Letter::T(grp.torus_coweight(&lambda, &t))]
            }
            's' => {
                let a = parse_root_token(rs, arg)?;
                let t = value.unwrap_or_else(|| f.one());
                if a < rs.rank() && f.is_one(&t) {
                    vec![Letter::S(a)]
                } else {
                    grp.s_letters(a, &t)?
                }
            }
            _ => return Err(perr(format!("unknown generator {term:?}"))),
        };
        if inverse {
            letters = letters.into_iter().rev().map(|l| grp.invert_letter(l)).collect();
        }
        out.extend(letters);
    }
    Ok(out)
}

/// Parses and evaluates an expression to normal form.
pub fn parse_element<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    s: &str,
) -> Result<GroupElement<F::Elem>, ChevalleyError> {
    grp.evaluate(&parse_letters(grp, s)?)
}

/// Renders a normal form in the syntax accepted by [`parse_element`].
pub fn render_element<F: Scalars>(grp: &ChevalleyGroup<F>, g: &GroupElement<F::Elem>) -> String {
    let rs = grp.root_system();
    let f = grp.field();
    let mut terms = Vec::new();
    let xs = |coeffs: &[F::Elem], terms: &mut Vec<String>| {
        for (a, c) in coeffs.iter().enumerate() {
            if !f.is_zero(c) {
                terms.push(format!("x[{}]({})", rs.render_root(a), f.render(c)));
            }
        }
    };
    xs(g.u(), &mut terms);
    for (j, t) in g.torus().iter().enumerate() {
        if !f.is_one(t) {
            terms.push(format!("h[w{}]({})", j + 1, f.render(t)));
        }
    }
    for &i in &g.word().0 {
        terms.push(format!("s[a{}]", i + 1));
    }
    xs(g.u_prime(), &mut terms);
    if terms.is_empty() {
        "e".into()
    } else {
        terms.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{FiniteField, Rationals};
    use crate::rootsys::CartanType;

    #[test]
    fn round_trip_e8() {
        let grp = ChevalleyGroup::new(CartanType::E8, FiniteField::prime(5).unwrap()).unwrap();
        let g = parse_element(&grp, "x[phi](2) x[-a8](3) h[w8](2) s[a3]^-1 x[-1,-1,-1,-1,-1,-1,-1,0](4)").unwrap();
        let text = render_element(&grp, &g);
        assert_eq!(parse_element(&grp, &text).unwrap(), g);
        assert!(grp.is_identity(&parse_element(&grp, "e").unwrap()));
        let s = parse_element(&grp, "s[phi] s[phi]^-1").unwrap();
        assert!(grp.is_identity(&s));
    }

    #[test]
    fn rationals_and_errors() {
        let grp = ChevalleyGroup::new(CartanType::A(2), Rationals).unwrap();
        let g = parse_element(&grp, "x[a1](1/2) * x[a1](-1/2)").unwrap();
        assert!(grp.is_identity(&g));
        assert!(parse_element(&grp, "x[a3](1)").is_err());
        assert!(parse_element(&grp, "x[a1]").is_err());
        assert!(parse_element(&grp, "h[w1](0)").is_err());
        assert!(parse_element(&grp, "y[a1](1)").is_err());
        assert!(parse_element(&grp, "x[a1(1)").is_err());
    }

    #[test]
    fn simple_s_matches_defining_product() {
        let grp = ChevalleyGroup::new(CartanType::D(4), FiniteField::prime(7).unwrap()).unwrap();
        let a = parse_element(&grp, "s[a2]").unwrap();
        let b = parse_element(&grp, "x[a2](1) x[-a2](-1) x[a2](1)").unwrap();
        assert_eq!(a, b);
    }
}
