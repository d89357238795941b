//! Factorization of ternary forms over finite fields, and absolute
//! factorization of forms defined over a prime field.
//!
//! A form is moved to coordinates where it is monic in the last variable,
//! dehomogenized to `f(x, z)`, split into squarefree parts by Yun's method,
//! and each part is factored by Hensel lifting a univariate factorization
//! of `f(a, z)` followed by exhaustive recombination.

use std::sync::Arc;

use crate::coeff::{Coeff, FieldCoeff, FiniteField, Fp, Fq, FqField};
use crate::error::{Error, Result};
use crate::monomial::ExponentVec;
use crate::poly::{Polynomial, VarStyle};
use crate::univariate::{factor_finite, UPoly};

type Biv<C> = Polynomial<C>;

fn deg_z<C: Coeff>(f: &Biv<C>) -> usize {
    f.degree_in(1).unwrap_or(0) as usize
}

fn deg_x<C: Coeff>(f: &Biv<C>) -> usize {
    f.degree_in(0).unwrap_or(0) as usize
}

/// Coefficient of `z^j` as a polynomial in `x`.
fn coeff_z<C: FieldCoeff>(f: &Biv<C>, j: usize, zero: &C) -> UPoly<C> {
    let d = deg_x(f);
    let mut c = vec![zero.clone(); d + 1];
    for (e, v) in f.terms() {
        if e.get(1) as usize == j {
            c[e.get(0) as usize] = v.clone();
        }
    }
    UPoly::new(c)
}

/// Coefficient of `x^i` as a polynomial in `z`.
fn coeff_x<C: FieldCoeff>(f: &Biv<C>, i: usize, zero: &C) -> UPoly<C> {
    let d = deg_z(f);
    let mut c = vec![zero.clone(); d + 1];
    for (e, v) in f.terms() {
        if e.get(0) as usize == i {
            c[e.get(1) as usize] = v.clone();
        }
    }
    UPoly::new(c)
}

fn from_x_poly<C: FieldCoeff>(u: &UPoly<C>, zpow: u32) -> Biv<C> {
    Polynomial::from_terms(
        2,
        VarStyle::Affine,
        u.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (ExponentVec::new(vec![i as u32, zpow]), c.clone())),
    )
}

fn from_z_poly<C: FieldCoeff>(u: &UPoly<C>, xpow: u32) -> Biv<C> {
    Polynomial::from_terms(
        2,
        VarStyle::Affine,
        u.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| (ExponentVec::new(vec![xpow, j as u32]), c.clone())),
    )
}

fn truncate_x<C: Coeff>(f: &Biv<C>, n: usize) -> Biv<C> {
    Polynomial::from_terms(
        2,
        VarStyle::Affine,
        f.terms()
            .filter(|(e, _)| (e.get(0) as usize) < n)
            .map(|(e, c)| (e.clone(), c.clone())),
    )
}

/// Exact quotient by a divisor whose leading `z`-coefficient is a constant.
fn div_exact_z<C: FieldCoeff>(f: &Biv<C>, g: &Biv<C>, zero: &C) -> Option<Biv<C>> {
    let dg = deg_z(g);
    let lc = coeff_z(g, dg, zero);
    if lc.degree() != Some(0) {
        return None;
    }
    let inv = lc.coeffs()[0].inv()?;
    let mut r = f.clone();
    let mut q = Biv::zero(2, VarStyle::Affine);
    while !r.is_zero() && deg_z(&r) >= dg {
        let dr = deg_z(&r);
        let lr = coeff_z(&r, dr, zero).scale(&inv);
        let t = from_x_poly(&lr, (dr - dg) as u32);
        q = q.add(&t);
        r = r.sub(&t.mul(g));
    }
    r.is_zero().then_some(q)
}

/// Pseudo-remainder in `z` over `F[x]`.
fn prem<C: FieldCoeff>(a: &Biv<C>, b: &Biv<C>, zero: &C) -> Biv<C> {
    let db = deg_z(b);
    let lb = from_x_poly(&coeff_z(b, db, zero), 0);
    let mut r = a.clone();
    while !r.is_zero() && deg_z(&r) >= db {
        let dr = deg_z(&r);
        let lr = coeff_z(&r, dr, zero);
        let shift = Polynomial::monomial(
            ExponentVec::new(vec![0, (dr - db) as u32]),
            zero.one_like(),
            VarStyle::Affine,
        );
        r = r.mul(&lb).sub(&from_x_poly(&lr, 0).mul(&shift).mul(b));
    }
    r
}

/// Content in `F[x]` removed, leading `z`-coefficient made monic in `x`.
fn primitive_z<C: FieldCoeff>(f: &Biv<C>, zero: &C) -> Biv<C> {
    if f.is_zero() {
        return f.clone();
    }
    let mut g = UPoly::zero();
    for j in 0..=deg_z(f) {
        g = g.gcd(&coeff_z(f, j, zero));
    }
    let mut out = Biv::zero(2, VarStyle::Affine);
    for j in 0..=deg_z(f) {
        let (q, _) = coeff_z(f, j, zero).divrem(&g);
        out = out.add(&from_x_poly(&q, j as u32));
    }
    let lc = coeff_z(&out, deg_z(&out), zero);
    let inv = lc.lc().unwrap().inv().unwrap();
    out.scale(&inv)
}

/// Gcd of polynomials monic in `z` (the result is monic in `z`).
fn gcd_z<C: FieldCoeff>(a: &Biv<C>, b: &Biv<C>, zero: &C) -> Biv<C> {
    let (mut a, mut b) = (primitive_z(a, zero), primitive_z(b, zero));
    if deg_z(&a) < deg_z(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = prem(&a, &b, zero);
        a = b;
        b = primitive_z(&r, zero);
        if !b.is_zero() && deg_z(&b) == 0 {
            return Polynomial::constant(zero.one_like(), 2, VarStyle::Affine);
        }
    }
    primitive_z(&a, zero)
}

/// Yun's squarefree decomposition of `f` monic in `z` with `deg_z f < p`.
fn squarefree_z<C: FieldCoeff>(f: &Biv<C>, zero: &C) -> Vec<(Biv<C>, u32)> {
    let mut out = Vec::new();
    let fz = f.derivative(1);
    let a0 = gcd_z(f, &fz, zero);
    let mut b = div_exact_z(f, &a0, zero).expect("gcd divides");
    let c = div_exact_z(&fz, &a0, zero).expect("gcd divides");
    let mut d = c.sub(&b.derivative(1));
    let mut i = 1;
    while deg_z(&b) > 0 {
        let a = gcd_z(&b, &d, zero);
        if deg_z(&a) > 0 {
            out.push((a.clone(), i));
        }
        let nb = div_exact_z(&b, &a, zero).expect("gcd divides");
        let c = div_exact_z(&d, &a, zero).expect("gcd divides");
        d = c.sub(&nb.derivative(1));
        b = nb;
        i += 1;
    }
    out
}

fn x_shift<C: FieldCoeff>(f: &Biv<C>, a: &C) -> Biv<C> {
    f.translate(&[a.clone(), a.zero_like()])
}

/// Lift `f = g0 h0 mod x` to `mod x^n`, `g0` monic and coprime to `h0`.
fn lift_pair<C: FieldCoeff>(f: &Biv<C>, g0: &UPoly<C>, h0: &UPoly<C>, n: usize, zero: &C) -> (Biv<C>, Biv<C>) {
    let (_, s, t) = g0.ext_gcd(h0);
    debug_assert!(s.mul(g0).add(&t.mul(h0)).degree() == Some(0));
    let mut g = from_z_poly(g0, 0);
    let mut h = from_z_poly(h0, 0);
    for k in 1..n {
        let err = truncate_x(&f.sub(&g.mul(&h)), k + 1);
        let e = coeff_x(&err, k, zero);
        if e.is_zero() {
            continue;
        }
        let dg = t.mul(&e).rem(g0);
        let (dh, rem) = e.sub(&dg.mul(h0)).divrem(g0);
        debug_assert!(rem.is_zero());
        g = g.add(&from_z_poly(&dg, k as u32));
        h = h.add(&from_z_poly(&dh, k as u32));
    }
    (g, h)
}

fn lift_all<C: FieldCoeff>(f: &Biv<C>, us: &[UPoly<C>], n: usize, zero: &C) -> Vec<Biv<C>> {
    if us.len() == 1 {
        return vec![truncate_x(f, n)];
    }
    let one = zero.one_like();
    let rest = us[1..].iter().fold(UPoly::constant(one), |a, u| a.mul(u));
    let (g, h) = lift_pair(f, &us[0], &rest, n, zero);
    let mut out = vec![g];
    out.extend(lift_all(&h, &us[1..], n, zero));
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors of a squarefree `f` monic in `z`.
fn factor_squarefree_z<C: FiniteField>(f: &Biv<C>, zero: &C) -> Result<Vec<Biv<C>>> {
    let m = deg_z(f);
    if m <= 1 {
        return Ok(vec![f.clone()]);
    }
    let q = zero.order();
    let alpha = (0..q.min(1 << 20)).map(|i| zero.element_at(i)).find(|a| {
        let u = coeff_x(&x_shift(f, a), 0, zero);
        u.degree() == Some(m) && u.gcd(&u.derivative()).degree() == Some(0)
    });
    let Some(alpha) = alpha else {
        return Err(Error::Inconclusive(format!(
            "no separable specialization over a field of {q} elements"
        )));
    };
    let fs = x_shift(f, &alpha);
    let us: Vec<UPoly<C>> = factor_finite(&coeff_x(&fs, 0, zero))
        .into_iter()
        .map(|(u, _)| u)
        .collect();
    if us.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    let n = deg_x(&fs) + 1;
    let mut lifted = lift_all(&fs, &us, n, zero);
    let mut rem = fs;
    let mut found = Vec::new();
    let mut k = 1;
    while 2 * k <= lifted.len() {
        let mut hit = None;
        for s in subsets(lifted.len(), k) {
            let one = Polynomial::constant(zero.one_like(), 2, VarStyle::Affine);
            let cand = s.iter().fold(one, |a, &i| truncate_x(&a.mul(&lifted[i]), n));
            if let Some(q) = div_exact_z(&rem, &cand, zero) {
                hit = Some((s, cand, q));
                break;
            }
        }
        match hit {
            Some((s, cand, q)) => {
                found.push(cand);
                rem = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !s.contains(i))
                    .map(|(_, l)| l)
                    .collect();
            }
            None => k += 1,
        }
    }
    found.push(rem);
    let back = alpha.neg();
    Ok(found.iter().map(|g| x_shift(g, &back)).collect())
}

/// A ternary form moved so that it is monic in the last variable:
/// `form(v) = moved(M^{-1} v)`.
struct Frame<C> {
    fwd: Vec<Polynomial<C>>,
    back: Vec<Polynomial<C>>,
}

fn frame_for<C: FiniteField>(h: &Polynomial<C>, zero: &C) -> Result<Frame<C>> {
    let q = zero.order();
    let one = zero.one_like();
    let mut w = None;
    'search: for i in 0..q.min(4096) {
        for j in 0..q.min(4096) {
            let cand = [zero.element_at(i), zero.element_at(j), one.clone()];
            if !h.evaluate(&cand)?.is_zero_elem() {
                w = Some(cand);
                break 'search;
            }
        }
    }
    let w = w.ok_or_else(|| Error::Inconclusive("form vanishes on the whole plane chart".into()))?;
    let var = |i: usize| Polynomial::var(i, 3, VarStyle::Projective, &one);
    let cst = |c: &C| Polynomial::constant(c.clone(), 3, VarStyle::Projective);
    // v0 = x + z w0, v1 = y + z w1, v2 = z.
    let fwd = vec![
        var(0).add(&var(2).mul(&cst(&w[0]))),
        var(1).add(&var(2).mul(&cst(&w[1]))),
        var(2),
    ];
    let back = vec![
        var(0).sub(&var(2).mul(&cst(&w[0]))),
        var(1).sub(&var(2).mul(&cst(&w[1]))),
        var(2),
    ];
    Ok(Frame { fwd, back })
}

/// Factorization into irreducibles over the coefficient field, with
/// multiplicities. Requires `deg h < p`.
pub fn factor_ternary<C: FiniteField>(h: &Polynomial<C>) -> Result<Vec<(Polynomial<C>, u32)>> {
    if h.arity() != 3 || !h.is_homogeneous() {
        return Err(Error::Invalid("expected a ternary form".into()));
    }
    let zero = h.sample_coeff().ok_or(Error::ZeroPolynomial)?.zero_like();
    let d = h.total_degree().unwrap();
    if d as u64 >= zero.characteristic() {
        return Err(Error::Precondition(format!(
            "degree {d} must be below the characteristic {}",
            zero.characteristic()
        )));
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let frame = frame_for(h, &zero)?;
    let moved = h.substitute(&frame.fwd);
    // Dehomogenize at the middle variable: f(x, z) = moved(x, 1, z).
    let f: Biv<C> = Polynomial::from_terms(
        2,
        VarStyle::Affine,
        moved
            .terms()
            .map(|(e, c)| (ExponentVec::new(vec![e.get(0), e.get(2)]), c.clone())),
    );
    let lc = coeff_z(&f, deg_z(&f), &zero);
    let f = f.scale(&lc.coeffs()[0].inv().unwrap());
    let mut out = Vec::new();
    for (part, mult) in squarefree_z(&f, &zero) {
        for g in factor_squarefree_z(&part, &zero)? {
            let t = deg_z(&g) as u32;
            let homog = Polynomial::from_terms(
                3,
                VarStyle::Projective,
                g.terms().map(|(e, c)| {
                    (ExponentVec::new(vec![e.get(0), t - e.get(0) - e.get(1), e.get(1)]), c.clone())
                }),
            );
            let orig = homog.substitute(&frame.back);
            out.push((normalize(&orig), mult));
        }
    }
    Ok(out)
}

/// Scaled so the first nonzero coefficient in canonical order is one.
fn normalize<C: FieldCoeff>(f: &Polynomial<C>) -> Polynomial<C> {
    match f.terms().next() {
        Some((_, c)) => f.scale(&c.inv().unwrap()),
        None => f.clone(),
    }
}

/// An absolutely irreducible component of a ternary form over `F_p`.
#[derive(Clone, Debug)]
pub struct AbsFactor {
    /// Defined over `F_{p^e}` with `e = field.degree()`.
    pub field: Arc<FqField>,
    pub form: Polynomial<Fq>,
    pub degree: u32,
    pub multiplicity: u32,
}

fn lift_to(f: &Polynomial<Fp>, field: &Arc<FqField>) -> Polynomial<Fq> {
    f.map_coeffs(|c| field.from_i64(c.value() as i64))
}

/// Factorization over the algebraic closure: each irreducible factor of
/// degree `m` over `F_p` is refactored over `F_{p^m}`, where all of its
/// conjugate components are defined.
pub fn absolute_factors(h: &Polynomial<Fp>) -> Result<Vec<AbsFactor>> {
    let p = h
        .sample_coeff()
        .ok_or(Error::ZeroPolynomial)?
        .modulus();
    let base = FqField::get(p, 1);
    let over_p: Vec<(Polynomial<Fp>, u32)> = factor_ternary(&lift_to(h, &base))?
        .into_iter()
        .map(|(g, m)| (g.map_coeffs(|c| Fp::from_u64(c.coords()[0], p)), m))
        .collect();
    let mut out = Vec::new();
    for (g, mult) in over_p {
        let m = g.total_degree().unwrap();
        if m == 1 {
            out.push(AbsFactor {
                field: base.clone(),
                form: lift_to(&g, &base),
                degree: 1,
                multiplicity: mult,
            });
            continue;
        }
        let ext = FqField::get(p, m);
        for (c, k) in factor_ternary(&lift_to(&g, &ext))? {
            debug_assert_eq!(k, 1);
            out.push(AbsFactor {
                field: ext.clone(),
                degree: c.total_degree().unwrap(),
                form: c,
                multiplicity: mult,
            });
        }
    }
    Ok(out)
}

/// Embed an `F_p`-point into the factor's field.
pub fn embed_point(field: &Arc<FqField>, pt: &[Fp]) -> Vec<Fq> {
    pt.iter().map(|c| field.from_i64(c.value() as i64)).collect()
}
