//! Points of zero-dimensional systems with coordinates in the coefficient
//! field, by successive elimination and univariate root finding.

use crate::coeff::FieldCoeff;
use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::poly::{Polynomial, VarStyle};
use crate::staircase::{buchberger, eliminate};
use crate::univariate::UPoly;

/// Univariate root finder over the coefficient field.
pub type RootFinder<'a, C> = &'a dyn Fn(&UPoly<C>) -> Vec<C>;

/// Substitute `x_{n-1} = v` and drop that variable.
fn fix_last<C: FieldCoeff>(f: &Polynomial<C>, v: &C) -> Polynomial<C> {
    let n = f.arity();
    let mut vals = vec![None; n];
    vals[n - 1] = Some(v.clone());
    Polynomial::from_terms(
        n - 1,
        f.style(),
        f.partial_eval(&vals)
            .terms()
            .map(|(e, c)| (e.remove(n - 1), c.clone())),
    )
}

/// All solutions of a zero-dimensional affine system with coordinates in
/// the field; errors on a positive-dimensional system.
pub fn affine_solutions<C: FieldCoeff>(gens: &[Polynomial<C>], roots: RootFinder<C>) -> Result<Vec<Vec<C>>> {
    let gens: Vec<Polynomial<C>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let Some(first) = gens.first() else {
        return Err(Error::Invalid("system is positive-dimensional".into()));
    };
    let n = first.arity();
    if gens.iter().any(|g| g.total_degree() == Some(0)) {
        return Ok(Vec::new());
    }
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    let gb = buchberger(&gens, MonomialOrder::GradedRevLex)?;
    match gb.affine_dimension() {
        None => return Ok(Vec::new()),
        Some(0) => {}
        Some(_) => return Err(Error::Invalid("system is positive-dimensional".into())),
    }
    let drop: Vec<usize> = (0..n - 1).collect();
    let uni = eliminate(gb.generators(), &drop)?;
    let mut g: UPoly<C> = UPoly::zero();
    for u in &uni {
        g = g.gcd(&UPoly::new(u.univariate_coeffs(0)));
    }
    if g.is_zero() {
        return Err(Error::Invalid("missing eliminant".into()));
    }
    let mut out = Vec::new();
    for r in roots(&g) {
        let sub: Vec<Polynomial<C>> = gb.generators().iter().map(|f| fix_last(f, &r)).collect();
        for mut s in affine_solutions_or_empty(&sub, roots)? {
            s.push(r.clone());
            out.push(s);
        }
    }
    Ok(out)
}

fn affine_solutions_or_empty<C: FieldCoeff>(gens: &[Polynomial<C>], roots: RootFinder<C>) -> Result<Vec<Vec<C>>> {
    if gens.iter().all(|g| g.is_zero()) {
        if gens.first().is_some_and(|g| g.arity() == 0) {
            return Ok(vec![Vec::new()]);
        }
        return Err(Error::Invalid("system is positive-dimensional".into()));
    }
    affine_solutions(gens, roots)
}

/// Projective solutions of homogeneous forms, normalized so the first
/// nonzero coordinate is one.
pub fn projective_solutions<C: FieldCoeff>(forms: &[Polynomial<C>], roots: RootFinder<C>) -> Result<Vec<Vec<C>>> {
    let forms: Vec<Polynomial<C>> = forms.iter().filter(|g| !g.is_zero()).cloned().collect();
    let Some(first) = forms.first() else {
        return Err(Error::Invalid("system is positive-dimensional".into()));
    };
    let n = first.arity();
    let zero = first.sample_coeff().unwrap().zero_like();
    let one = zero.one_like();
    let mut out = Vec::new();
    // Chart i: x_0 = .. = x_{i-1} = 0, x_i = 1.
    for i in 0..n {
        let rest = n - i - 1;
        let mut vals: Vec<Option<C>> = vec![None; n];
        for v in vals.iter_mut().take(i) {
            *v = Some(zero.clone());
        }
        vals[i] = Some(one.clone());
        let sys: Vec<Polynomial<C>> = forms
            .iter()
            .map(|f| {
                Polynomial::from_terms(
                    rest,
                    VarStyle::Affine,
                    f.partial_eval(&vals)
                        .terms()
                        .map(|(e, c)| (crate::monomial::ExponentVec::new(e.exps()[i + 1..].to_vec()), c.clone())),
                )
            })
            .collect();
        let sols = if rest == 0 {
            if sys.iter().all(|g| g.is_zero()) {
                vec![Vec::new()]
            } else {
                Vec::new()
            }
        } else {
            affine_solutions_or_empty(&sys, roots)?
        };
        for s in sols {
            let mut pt = vec![zero.clone(); i];
            pt.push(one.clone());
            pt.extend(s);
            out.push(pt);
        }
    }
    Ok(out)
}
