//! Pointwise geometric conditions on surfaces in P^3: nonsingularity,
//! tangent sections, lines through a point, finiteness of lines, the
//! plane-cubic condition, and the good-point filter built from them.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bivariate::{absolute_factors, AbsFactor};
use crate::coeff::{Coeff, FieldCoeff, Fp};
use crate::error::{Error, Result};
use crate::linalg::{rank, rref};
use crate::monomial::MonomialOrder;
use crate::poly::{Polynomial, VarStyle, ZPoly};
use crate::roots::rational_roots;
use crate::solve::{projective_solutions, RootFinder};
use crate::staircase::buchberger;
use crate::univariate::{roots_finite, UPoly};
use crate::zmodel::{multiplicity, reduce_mod_p, FpPoint, IntegralModel};

/// Root finder over `F_p`.
pub fn fp_root_finder(u: &UPoly<Fp>) -> Vec<Fp> {
    roots_finite(u)
}

/// Root finder over `Q`.
pub fn q_root_finder(u: &UPoly<BigRational>) -> Vec<BigRational> {
    rational_roots(u.coeffs()).unwrap_or_default()
}

fn require_on<C: FieldCoeff>(f: &Polynomial<C>, pt: &[C]) -> Result<()> {
    if !f.evaluate(pt)?.is_zero_elem() {
        return Err(Error::Precondition("point is not on the surface".into()));
    }
    Ok(())
}

pub fn gradient<C: FieldCoeff>(f: &Polynomial<C>, pt: &[C]) -> Result<Vec<C>> {
    (0..f.arity()).map(|i| f.derivative(i).evaluate(pt)).collect()
}

/// True iff some partial derivative is nonzero at the point.
pub fn jacobian_nonsingular<C: FieldCoeff>(f: &Polynomial<C>, pt: &[C]) -> Result<bool> {
    require_on(f, pt)?;
    Ok(gradient(f, pt)?.iter().any(|c| !c.is_zero_elem()))
}

/// The point together with two vectors spanning its tangent plane.
#[derive(Clone, Debug)]
pub struct TangentFrame<C> {
    pub point: Vec<C>,
    pub u: Vec<C>,
    pub v: Vec<C>,
}

pub fn tangent_frame<C: FieldCoeff>(f: &Polynomial<C>, pt: &[C]) -> Result<TangentFrame<C>> {
    if !jacobian_nonsingular(f, pt)? {
        return Err(Error::Precondition("point is singular".into()));
    }
    let grad = gradient(f, pt)?;
    let one = pt.iter().find(|c| !c.is_zero_elem()).unwrap().one_like();
    let n = pt.len();
    let kernel = rref(vec![grad], n).kernel_basis(&one);
    for i in 0..kernel.len() {
        for j in i + 1..kernel.len() {
            let m = vec![pt.to_vec(), kernel[i].clone(), kernel[j].clone()];
            if rank(m, n) == 3 {
                return Ok(TangentFrame {
                    point: pt.to_vec(),
                    u: kernel[i].clone(),
                    v: kernel[j].clone(),
                });
            }
        }
    }
    Err(Error::Invalid("tangent plane has no complementary frame".into()))
}

/// `F(s P + a u + b v)` as a form in `(s, a, b)`; the point sits at `(1:0:0)`.
pub fn tangent_section<C: FieldCoeff>(f: &Polynomial<C>, frame: &TangentFrame<C>) -> Polynomial<C> {
    let one = frame.point.iter().find(|c| !c.is_zero_elem()).unwrap().one_like();
    let var = |i: usize| Polynomial::var(i, 3, VarStyle::Projective, &one);
    let subs: Vec<Polynomial<C>> = (0..f.arity())
        .map(|k| {
            var(0)
                .scale(&frame.point[k])
                .add(&var(1).scale(&frame.u[k]))
                .add(&var(2).scale(&frame.v[k]))
        })
        .collect();
    f.substitute(&subs)
}

/// Order at the point of the tangent-plane section; `None` when the plane
/// lies on the surface.
pub fn tangent_section_order<C: FieldCoeff>(f: &Polynomial<C>, pt: &[C]) -> Result<Option<u32>> {
    let frame = tangent_frame(f, pt)?;
    Ok(tangent_section(f, &frame).dehomogenize_at(0).min_degree())
}

/// A line through `point` in direction `direction`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineOnSurface<C> {
    pub point: Vec<C>,
    pub direction: Vec<C>,
}

impl<C: FieldCoeff> LineOnSurface<C> {
    /// `F(s P + t V)` vanishes identically.
    pub fn lies_on(&self, f: &Polynomial<C>) -> bool {
        let one = self.point.iter().find(|c| !c.is_zero_elem()).unwrap().one_like();
        let var = |i: usize| Polynomial::var(i, 2, VarStyle::Projective, &one);
        let subs: Vec<Polynomial<C>> = (0..f.arity())
            .map(|k| var(0).scale(&self.point[k]).add(&var(1).scale(&self.direction[k])))
            .collect();
        f.substitute(&subs).is_zero()
    }
}

/// Lines through a point over the algebraic closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineLocus {
    Empty,
    /// Finitely many; the exact number when it was determined.
    Finite(Option<usize>),
    Infinite,
}

#[derive(Clone, Debug)]
pub struct LinesThroughPoint<C> {
    /// Lines defined over the coefficient field.
    pub lines: Vec<LineOnSurface<C>>,
    pub locus: LineLocus,
}

fn char_exceeds<C: Coeff>(one: &C, d: u32) -> bool {
    (1..=d as i64).all(|k| !one.mul_int(k).is_zero_elem())
}

/// Pieces of `G(s, a, b)` by the power of `s`: entry `j` is the binary
/// form of degree `j` in `(a, b)` (as a polynomial in three variables).
fn split_by_s<C: FieldCoeff>(g: &Polynomial<C>, d: u32) -> Vec<Polynomial<C>> {
    (0..=d)
        .map(|j| {
            Polynomial::from_terms(
                g.arity(),
                g.style(),
                g.terms()
                    .filter(|(e, _)| e.get(0) == d - j)
                    .map(|(e, c)| (e.clone(), c.clone())),
            )
        })
        .collect()
}

pub fn lines_through_point<C: FieldCoeff>(
    f: &Polynomial<C>,
    pt: &[C],
    roots: RootFinder<C>,
) -> Result<LinesThroughPoint<C>> {
    require_on(f, pt)?;
    let d = f.total_degree().ok_or(Error::ZeroPolynomial)?;
    let one = pt.iter().find(|c| !c.is_zero_elem()).ok_or(Error::Invalid("zero point".into()))?.one_like();
    let zero = one.zero_like();
    if !char_exceeds(&one, d) {
        return Err(Error::Precondition("characteristic must exceed the degree".into()));
    }
    if jacobian_nonsingular(f, pt)? {
        // Lines through a nonsingular point lie in the tangent plane: they
        // are the common zeros of the binary forms G_j(a, b).
        let frame = tangent_frame(f, pt)?;
        let parts = split_by_s(&tangent_section(f, &frame), d);
        if parts.iter().all(|g| g.is_zero()) {
            return Ok(LinesThroughPoint {
                lines: Vec::new(),
                locus: LineLocus::Infinite,
            });
        }
        let mut h: UPoly<C> = UPoly::zero();
        let mut at_infinity = true;
        for (j, g) in parts.iter().enumerate().skip(1) {
            let mut c = vec![zero.clone(); j + 1];
            for (e, v) in g.terms() {
                c[e.get(1) as usize] = v.clone();
            }
            if !c[j].is_zero_elem() {
                at_infinity = false;
            }
            h = h.gcd(&UPoly::new(c));
        }
        let mut lines = Vec::new();
        let mut count = 0;
        let combo = |a: &C, b: &C| -> Vec<C> {
            frame.u.iter().zip(&frame.v).map(|(x, y)| x.mul(a).add(&y.mul(b))).collect()
        };
        if !h.is_zero() && h.degree() > Some(0) {
            let sf = h.divrem(&h.gcd(&h.derivative())).0;
            count += sf.degree().unwrap();
            for r in roots(&h) {
                lines.push(LineOnSurface {
                    point: pt.to_vec(),
                    direction: combo(&r, &one),
                });
            }
        }
        if at_infinity {
            count += 1;
            lines.push(LineOnSurface {
                point: pt.to_vec(),
                direction: frame.u.clone(),
            });
        }
        let locus = if count == 0 {
            LineLocus::Empty
        } else {
            LineLocus::Finite(Some(count))
        };
        return Ok(LinesThroughPoint { lines, locus });
    }
    // Singular point: directions complementary to the point's chart.
    let n = pt.len();
    let chart = pt.iter().position(|c| !c.is_zero_elem()).unwrap();
    let others: Vec<usize> = (0..n).filter(|&i| i != chart).collect();
    let var = |i: usize| Polynomial::var(i, n, VarStyle::Projective, &one);
    let subs: Vec<Polynomial<C>> = (0..n)
        .map(|k| {
            let mut e = var(0).scale(&pt[k]);
            if let Some(pos) = others.iter().position(|&o| o == k) {
                e = e.add(&var(pos + 1));
            }
            e
        })
        .collect();
    let g = f.substitute(&subs);
    let forms: Vec<Polynomial<C>> = split_by_s(&g, d)
        .into_iter()
        .skip(1)
        .filter(|h| !h.is_zero())
        .map(|h| {
            Polynomial::from_terms(
                n - 1,
                VarStyle::Projective,
                h.terms().map(|(e, c)| (e.remove(0), c.clone())),
            )
        })
        .collect();
    let hd = buchberger(&forms, MonomialOrder::GradedRevLex)?.hilbert_fit()?;
    let locus = match hd.dim {
        None => LineLocus::Empty,
        Some(0) => LineLocus::Finite(None),
        Some(_) => LineLocus::Infinite,
    };
    let mut lines = Vec::new();
    if locus == LineLocus::Finite(None) {
        for dir in projective_solutions(&forms, roots)? {
            let mut v = vec![zero.clone(); n];
            for (pos, &o) in others.iter().enumerate() {
                v[o] = dir[pos].clone();
            }
            lines.push(LineOnSurface {
                point: pt.to_vec(),
                direction: v,
            });
        }
    }
    Ok(LinesThroughPoint { lines, locus })
}

/// Order at `(1:0:0)` of a component of the tangent section.
fn order_at_origin(f: &AbsFactor) -> u32 {
    f.form.dehomogenize_at(0).min_degree().unwrap_or(0)
}

/// A degree-3 part of the tangent section singular at the point, as
/// `(component index, multiplicity)` pairs.
pub type CubicWitness = Vec<(usize, u32)>;

/// Checks that the point is nonsingular on every cubic curve contained in
/// the tangent section over the algebraic closure. Returns the components
/// and an offending sub-divisor if any.
pub fn cubic_condition(f: &Polynomial<Fp>, pt: &[Fp]) -> Result<(bool, Vec<AbsFactor>, Option<CubicWitness>)> {
    let frame = tangent_frame(f, pt)?;
    let section = tangent_section(f, &frame);
    if section.is_zero() {
        return Ok((false, Vec::new(), None));
    }
    let comps = absolute_factors(&section)?;
    let ords: Vec<u32> = comps.iter().map(order_at_origin).collect();
    // Enumerate multiplicity vectors with total degree three.
    let mut pick = vec![0u32; comps.len()];
    let witness = search_cubic(&comps, &ords, 0, 3, &mut pick);
    Ok((witness.is_none(), comps, witness))
}

fn search_cubic(comps: &[AbsFactor], ords: &[u32], i: usize, left: u32, pick: &mut Vec<u32>) -> Option<CubicWitness> {
    if left == 0 {
        let ord: u32 = pick.iter().zip(ords).map(|(k, o)| k * o).sum();
        if ord >= 2 {
            return Some(
                pick.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (i, k))
                    .collect(),
            );
        }
        return None;
    }
    if i == comps.len() {
        return None;
    }
    let deg = comps[i].degree;
    for k in 0..=comps[i].multiplicity {
        if k * deg > left {
            break;
        }
        pick[i] = k;
        if let Some(w) = search_cubic(comps, ords, i + 1, left - k * deg, pick) {
            pick[i] = 0;
            return Some(w);
        }
    }
    pick[i] = 0;
    None
}

/// Outcome of the four pointwise checks at an `F_p`-point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub point: FpPoint,
    /// (a) nonsingular on the reduction.
    pub nonsingular: bool,
    /// Order of the tangent section at the point, when defined.
    pub tangent_order: Option<u32>,
    /// (b) tangent section has multiplicity two at the point.
    pub section_ok: bool,
    /// (c) no line through the point over the closure.
    pub no_lines: bool,
    /// (d) nonsingular on every cubic in the tangent section; `None` when
    /// the check could not be decided.
    pub cubic_ok: Option<bool>,
    pub witnesses: Vec<String>,
    pub good: bool,
}

/// Runs (a) to (d) in order, stopping at the first failure.
pub fn condition_report(f: &Polynomial<Fp>, pt: &FpPoint) -> Result<ConditionReport> {
    let x = pt.fp_coords();
    let mut r = ConditionReport {
        point: pt.clone(),
        nonsingular: false,
        tangent_order: None,
        section_ok: false,
        no_lines: false,
        cubic_ok: None,
        witnesses: Vec::new(),
        good: false,
    };
    r.nonsingular = jacobian_nonsingular(f, &x)?;
    if !r.nonsingular {
        r.witnesses.push("all partial derivatives vanish".into());
        return Ok(r);
    }
    r.tangent_order = tangent_section_order(f, &x)?;
    r.section_ok = r.tangent_order == Some(2);
    if !r.section_ok {
        r.witnesses.push(format!("tangent section order {:?}", r.tangent_order));
        return Ok(r);
    }
    let lines = lines_through_point(f, &x, &fp_root_finder)?;
    r.no_lines = lines.locus == LineLocus::Empty;
    if !r.no_lines {
        r.witnesses.push(match lines.lines.first() {
            Some(l) => format!("line with direction {:?}", l.direction),
            None => format!("lines over an extension: {:?}", lines.locus),
        });
        return Ok(r);
    }
    match cubic_condition(f, &x) {
        Ok((ok, comps, w)) => {
            r.cubic_ok = Some(ok);
            if let Some(w) = w {
                let parts: Vec<String> = w
                    .iter()
                    .map(|&(i, k)| format!("({})^{k} over F_{}^{}", comps[i].form, f_char(pt), comps[i].field.degree()))
                    .collect();
                r.witnesses.push(format!("singular on cubic {}", parts.join(" * ")));
            }
        }
        Err(Error::Inconclusive(msg)) | Err(Error::Precondition(msg)) => {
            r.witnesses.push(format!("cubic check undecided: {msg}"));
        }
        Err(e) => return Err(e),
    }
    r.good = r.cubic_ok == Some(true);
    Ok(r)
}

fn f_char(pt: &FpPoint) -> u64 {
    pt.p
}

/// Reports for `F_p`-points of a surface, split into good and bad.
pub fn good_point_filter(
    model: &IntegralModel,
    p: u64,
    pts: &[FpPoint],
) -> Result<(Vec<ConditionReport>, Vec<ConditionReport>)> {
    if !model.is_hypersurface() || model.arity() != 4 {
        return Err(Error::Invalid("expected a surface in P^3".into()));
    }
    let f = reduce_mod_p(model, p)?.remove(0);
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for pt in pts {
        let r = condition_report(&f, pt)?;
        if r.good {
            good.push(r);
        } else {
            bad.push(r);
        }
    }
    Ok((good, bad))
}

/// Multiplicity at a good point of a curve on the surface, checked against
/// `mu <= e/2` for a curve of degree `e`.
pub fn mult_bound_check(surface: &IntegralModel, p: u64, pt: &FpPoint, curve: &IntegralModel) -> Result<u32> {
    if curve.dim() != 1 {
        return Err(Error::HypothesisViolation("curve must be one-dimensional".into()));
    }
    let f = surface.rational_generators().remove(0);
    let gb = buchberger(&curve.rational_generators(), MonomialOrder::GradedRevLex)?;
    if !gb.contains(&f)? {
        return Err(Error::HypothesisViolation("curve does not lie on the surface".into()));
    }
    let fp = reduce_mod_p(surface, p)?.remove(0);
    if !condition_report(&fp, pt)?.good {
        return Err(Error::HypothesisViolation(format!("{pt} is not a good point")));
    }
    let gens = reduce_mod_p(curve, p)?;
    let x = pt.fp_coords();
    if gens.iter().any(|g| !g.evaluate(&x).map(|v| v.is_zero_elem()).unwrap_or(false)) {
        return Ok(0);
    }
    let mu = multiplicity(curve, p, pt)?;
    if 2 * mu as u64 > curve.degree() {
        return Err(Error::Invalid(format!(
            "multiplicity {mu} exceeds half the degree {} at {pt}",
            curve.degree()
        )));
    }
    Ok(mu)
}

/// Prime used for the finiteness test of the line scheme.
pub const LINE_PRIME: u64 = 1_000_003;

/// The six Schubert cells of lines in P^3: rows `e_i + sum a_k e_k` and
/// `e_j + sum b_k e_k` in reduced echelon form with pivots `i < j`.
fn cells() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            v.push((i, j));
        }
    }
    v
}

fn cell_params(i: usize, j: usize) -> (Vec<usize>, Vec<usize>) {
    let a: Vec<usize> = (i + 1..4).filter(|&k| k != j).collect();
    let b: Vec<usize> = (j + 1..4).collect();
    (a, b)
}

/// Coefficients of `F(row1 + t row2)` in `t`, as polynomials in the cell
/// parameters.
fn cell_equations<C: FieldCoeff>(f: &Polynomial<C>, i: usize, j: usize, one: &C) -> Vec<Polynomial<C>> {
    let (a, b) = cell_params(i, j);
    let m = a.len() + b.len();
    let var = |k: usize| Polynomial::var(k, m + 1, VarStyle::Affine, one);
    let cst = |c: C| Polynomial::constant(c, m + 1, VarStyle::Affine);
    let t = var(m);
    let subs: Vec<Polynomial<C>> = (0..4)
        .map(|k| {
            let r1 = if k == i {
                cst(one.clone())
            } else if let Some(pos) = a.iter().position(|&x| x == k) {
                var(pos)
            } else {
                cst(one.zero_like())
            };
            let r2 = if k == j {
                cst(one.clone())
            } else if let Some(pos) = b.iter().position(|&x| x == k) {
                var(a.len() + pos)
            } else {
                cst(one.zero_like())
            };
            r1.add(&r2.mul(&t))
        })
        .collect();
    let g = f.substitute(&subs);
    let d = g.degree_in(m).unwrap_or(0);
    (0..=d)
        .map(|k| {
            Polynomial::from_terms(
                m,
                VarStyle::Affine,
                g.terms()
                    .filter(|(e, _)| e.get(m) == k)
                    .map(|(e, c)| (e.remove(m), c.clone())),
            )
        })
        .filter(|h| !h.is_zero())
        .collect()
}

/// Finiteness of the lines on a surface, decided by the dimension of the
/// incidence ideal in each cell modulo a large prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineFiniteness {
    pub finite: bool,
    pub prime: u64,
    /// Affine dimension per cell; `None` when the cell holds no line.
    pub cell_dims: Vec<Option<usize>>,
}

pub fn lines_on_surface_finite(f: &ZPoly) -> Result<LineFiniteness> {
    lines_on_surface_finite_mod(f, LINE_PRIME)
}

pub fn lines_on_surface_finite_mod(f: &ZPoly, p: u64) -> Result<LineFiniteness> {
    if f.arity() != 4 || !f.is_homogeneous() {
        return Err(Error::Invalid("expected a form in four variables".into()));
    }
    let fp = f.reduce_mod(p);
    if fp.total_degree() != f.total_degree() {
        return Err(Error::BadPrime {
            p,
            reason: "degree drops".into(),
        });
    }
    let one = Fp::new(1, p);
    let mut dims = Vec::new();
    for (i, j) in cells() {
        let eqs = cell_equations(&fp, i, j, &one);
        let dim = if eqs.is_empty() {
            Some(cell_params(i, j).0.len() + cell_params(i, j).1.len())
        } else if eqs[0].arity() == 0 {
            None
        } else {
            buchberger(&eqs, MonomialOrder::GradedRevLex)?.affine_dimension()
        };
        dims.push(dim);
    }
    Ok(LineFiniteness {
        finite: dims.iter().all(|d| d.is_none_or(|v| v == 0)),
        prime: p,
        cell_dims: dims,
    })
}

/// Lines on the reduction defined over `F_p`, by exhaustive scan of the
/// cells.
pub fn count_lines_mod_p(f: &ZPoly, p: u64, cap: u128) -> Result<usize> {
    if (p as u128).pow(4) > cap {
        return Err(Error::CapExceeded {
            what: "line scan".into(),
            cap,
        });
    }
    let fp = f.reduce_mod(p);
    let one = Fp::new(1, p);
    let mut count = 0;
    for (i, j) in cells() {
        let eqs = cell_equations(&fp, i, j, &one);
        let m = cell_params(i, j).0.len() + cell_params(i, j).1.len();
        let evs: Vec<crate::zmodel::FpEval> = eqs.iter().map(|e| crate::zmodel::FpEval::new(e, p)).collect();
        let mut x = vec![0u64; m];
        loop {
            if evs.iter().all(|e| e.eval(&x) == 0) {
                count += 1;
            }
            let mut k = 0;
            while k < m {
                x[k] += 1;
                if x[k] < p {
                    break;
                }
                x[k] = 0;
                k += 1;
            }
            if k == m {
                break;
            }
        }
    }
    Ok(count)
}

/// Outcome of the absolute-irreducibility probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Irreducibility {
    /// Absolutely irreducible modulo this prime, hence over Q-bar.
    Certified { prime: u64 },
    /// Absolutely reducible at every tested prime.
    Refuted { primes: Vec<u64> },
    Inconclusive,
}

/// Ternary section of a form through a seeded random plane, or the form
/// itself when it already has three variables.
fn plane_section(f: &Polynomial<Fp>, rng: &mut ChaCha8Rng) -> Polynomial<Fp> {
    let n = f.arity();
    if n == 3 {
        return f.clone();
    }
    let p = f.sample_coeff().unwrap().modulus();
    let one = Fp::new(1, p);
    let var = |i: usize| Polynomial::var(i, 3, VarStyle::Projective, &one);
    let subs: Vec<Polynomial<Fp>> = (0..n)
        .map(|_| {
            (0..3).fold(Polynomial::zero(3, VarStyle::Projective), |acc, i| {
                acc.add(&var(i).scale(&Fp::from_u64(rng.gen_range(0..p), p)))
            })
        })
        .collect();
    f.substitute(&subs)
}

/// Reduces the homogenization of `f` modulo several primes above its
/// degree and factors plane sections over the closure.
pub fn abs_irreducibility_probe(f: &ZPoly, trials: usize, seed: u64) -> Result<Irreducibility> {
    let d = f.total_degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::Precondition("constant polynomial".into()));
    }
    let form = if f.is_homogeneous() && f.style() == VarStyle::Projective {
        f.clone()
    } else {
        f.homogenize(d)?
    };
    if form.arity() < 3 {
        // Binary forms split over the closure unless linear.
        return Ok(if d == 1 {
            Irreducibility::Certified { prime: 0 }
        } else {
            Irreducibility::Refuted { primes: Vec::new() }
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = crate::coeff::next_prime((d as u64 + 1).max(11));
    let mut tested = Vec::new();
    while tested.len() < trials {
        let fp = form.reduce_mod(p);
        if fp.total_degree() == Some(d) {
            let mut reducible = true;
            for _ in 0..3 {
                let sec = plane_section(&fp, &mut rng);
                if sec.total_degree() != Some(d) {
                    continue;
                }
                match absolute_factors(&sec) {
                    Ok(fs) if fs.len() == 1 && fs[0].multiplicity == 1 => {
                        return Ok(Irreducibility::Certified { prime: p });
                    }
                    Ok(_) => {}
                    Err(Error::Inconclusive(_)) => reducible = false,
                    Err(e) => return Err(e),
                }
                if fp.arity() == 3 {
                    break;
                }
            }
            if reducible {
                tested.push(p);
            } else {
                return Ok(Irreducibility::Inconclusive);
            }
        }
        p = crate::coeff::next_prime(p + 1);
    }
    Ok(Irreducibility::Refuted { primes: tested })
}

/// Dehomogenized integer polynomial at `x_0 = 1` mapped to its
/// homogeneous form in one more variable.
pub fn projective_closure(f: &ZPoly) -> Result<ZPoly> {
    let d = f.total_degree().ok_or(Error::ZeroPolynomial)?;
    f.homogenize(d)
}
