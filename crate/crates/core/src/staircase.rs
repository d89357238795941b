//! Gröbner bases, Hilbert functions and staircase statistics.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::FieldCoeff;
use crate::error::{Error, Result};
use crate::monomial::{monomials_of_degree, ExponentVec, MonomialOrder, TermOrder};
use crate::poly::{Polynomial, VarStyle};

type Key = Vec<i32>;
type IPoly<C> = BTreeMap<Key, C>;

/// Maps exponent vectors to integer keys whose lexicographic order is the
/// term order. Keys are additive in the exponents.
struct Keyer<'a> {
    order: &'a TermOrder,
    arity: usize,
}

impl Keyer<'_> {
    fn key(&self, e: &ExponentVec) -> Key {
        let ex = e.exps().iter().map(|&x| x as i32);
        let deg = e.total_degree() as i32;
        match self.order {
            TermOrder::Graded(MonomialOrder::GradedLex) => std::iter::once(deg).chain(ex).collect(),
            TermOrder::Graded(MonomialOrder::GradedRevLex) => {
                std::iter::once(deg).chain(ex.map(|x| -x)).collect()
            }
            TermOrder::Elimination { eliminated } => {
                let blk: i32 = e
                    .exps()
                    .iter()
                    .zip(eliminated)
                    .filter(|(_, &b)| b)
                    .map(|(&x, _)| x as i32)
                    .sum();
                [blk, deg].into_iter().chain(ex.map(|x| -x)).collect()
            }
            TermOrder::Lex => ex.collect(),
        }
    }

    fn exp(&self, k: &[i32]) -> ExponentVec {
        let tail = &k[k.len() - self.arity..];
        let v = match self.order {
            TermOrder::Graded(MonomialOrder::GradedLex) | TermOrder::Lex => {
                tail.iter().map(|&x| x as u32).collect()
            }
            _ => tail.iter().map(|&x| (-x) as u32).collect(),
        };
        ExponentVec::new(v)
    }
}

fn add_key(a: &[i32], b: &[i32]) -> Key {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn to_ipoly<C: FieldCoeff>(f: &Polynomial<C>, kx: &Keyer) -> IPoly<C> {
    f.terms().map(|(e, c)| (kx.key(e), c.clone())).collect()
}

fn from_ipoly<C: FieldCoeff>(f: &IPoly<C>, kx: &Keyer, style: VarStyle) -> Polynomial<C> {
    Polynomial::from_terms(
        kx.arity,
        style,
        f.iter().map(|(k, c)| (kx.exp(k), c.clone())),
    )
}

fn make_monic<C: FieldCoeff>(f: &mut IPoly<C>) {
    if let Some((_, lc)) = f.last_key_value() {
        let inv = lc.inv().expect("nonzero leading coefficient");
        for c in f.values_mut() {
            *c = c.mul(&inv);
        }
    }
}

/// `f -= c * x^shift * g`.
fn sub_shifted<C: FieldCoeff>(f: &mut IPoly<C>, g: &IPoly<C>, c: &C, shift: &[i32], skip_lead: bool) {
    let n = g.len();
    for (idx, (gk, gc)) in g.iter().enumerate() {
        if skip_lead && idx + 1 == n {
            continue;
        }
        let k = add_key(gk, shift);
        let t = gc.mul(c);
        match f.get_mut(&k) {
            Some(old) => {
                let v = old.sub(&t);
                if v.is_zero_elem() {
                    f.remove(&k);
                } else {
                    *old = v;
                }
            }
            None => {
                f.insert(k, t.neg());
            }
        }
    }
}

struct Elem<C> {
    poly: IPoly<C>,
    lead: ExponentVec,
}

/// Full reduction of `f` modulo monic `basis`.
fn reduce<C: FieldCoeff>(mut f: IPoly<C>, basis: &[&Elem<C>], kx: &Keyer) -> IPoly<C> {
    let mut r = IPoly::new();
    while let Some((k, c)) = f.pop_last() {
        let e = kx.exp(&k);
        match basis.iter().find(|g| g.lead.divides(&e)) {
            Some(g) => {
                let m = g.lead.quotient_of(&e);
                sub_shifted(&mut f, &g.poly, &c, &kx.key(&m), true);
            }
            None => {
                r.insert(k, c);
            }
        }
    }
    r
}

/// A reduced Gröbner basis over a field.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<C: FieldCoeff> {
    generators: Vec<Polynomial<C>>,
    leads: Vec<ExponentVec>,
    order: TermOrder,
    arity: usize,
    style: VarStyle,
}

/// Buchberger's algorithm with the normal selection strategy and both
/// classical pair criteria. Output is reduced, monic and sorted by leading
/// monomial.
pub fn buchberger<C: FieldCoeff>(
    gens: &[Polynomial<C>],
    order: impl Into<TermOrder>,
) -> Result<GroebnerBasis<C>> {
    let order = order.into();
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let arity = first.arity();
    let style = first.style();
    if let Some(g) = gens.iter().find(|g| g.arity() != arity) {
        return Err(Error::ArityMismatch {
            expected: arity,
            got: g.arity(),
        });
    }
    let kx = Keyer {
        order: &order,
        arity,
    };
    let mut basis: Vec<Elem<C>> = Vec::new();
    let mut queue: BTreeSet<(Key, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let insert = |h: IPoly<C>,
                      basis: &mut Vec<Elem<C>>,
                      queue: &mut BTreeSet<(Key, usize, usize)>,
                      pending: &mut HashSet<(usize, usize)>| {
        let lead = kx.exp(h.last_key_value().unwrap().0);
        let t = basis.len();
        for i in 0..t {
            let l = basis[i].lead.lcm(&lead);
            queue.insert((kx.key(&l), i, t));
            pending.insert((i, t));
        }
        basis.push(Elem { poly: h, lead });
    };

    for g in gens {
        let refs: Vec<&Elem<C>> = basis.iter().collect();
        let mut h = reduce(to_ipoly(g, &kx), &refs, &kx);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        insert(h, &mut basis, &mut queue, &mut pending);
    }

    while let Some((lk, i, j)) = queue.pop_first() {
        pending.remove(&(i, j));
        let (li, lj) = (&basis[i].lead, &basis[j].lead);
        if li.is_coprime(lj) {
            continue;
        }
        let l = kx.exp(&lk);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lead.divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let mut s = IPoly::new();
        let mi = li.quotient_of(&l);
        let mj = lj.quotient_of(&l);
        let one = basis[i].poly.last_key_value().unwrap().1.one_like();
        sub_shifted(&mut s, &basis[i].poly, &one.neg(), &kx.key(&mi), true);
        sub_shifted(&mut s, &basis[j].poly, &one, &kx.key(&mj), true);
        let refs: Vec<&Elem<C>> = basis.iter().collect();
        let mut h = reduce(s, &refs, &kx);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        insert(h, &mut basis, &mut queue, &mut pending);
    }

    // Minimalize, then inter-reduce.
    let n = basis.len();
    let keep: Vec<usize> = (0..n)
        .filter(|&i| {
            !(0..n).any(|j| {
                j != i
                    && basis[j].lead.divides(&basis[i].lead)
                    && (basis[j].lead != basis[i].lead || j < i)
            })
        })
        .collect();
    let mut reduced: Vec<Elem<C>> = Vec::new();
    for &i in &keep {
        let others: Vec<&Elem<C>> = keep
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| &basis[j])
            .collect();
        let mut p = basis[i].poly.clone();
        let (lk, lc) = p.pop_last().unwrap();
        let mut tail = reduce(p, &others, &kx);
        tail.insert(lk, lc);
        reduced.push(Elem {
            lead: basis[i].lead.clone(),
            poly: tail,
        });
    }
    reduced.sort_by(|a, b| order.cmp(&a.lead, &b.lead));
    Ok(GroebnerBasis {
        generators: reduced
            .iter()
            .map(|e| from_ipoly(&e.poly, &kx, style))
            .collect(),
        leads: reduced.iter().map(|e| e.lead.clone()).collect(),
        order,
        arity,
        style,
    })
}

impl<C: FieldCoeff> GroebnerBasis<C> {
    pub fn generators(&self) -> &[Polynomial<C>] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> &[ExponentVec] {
        &self.leads
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn style(&self) -> VarStyle {
        self.style
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.leads.iter().any(|l| l.total_degree() == 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.is_homogeneous())
    }

    pub fn normal_form(&self, f: &Polynomial<C>) -> Result<Polynomial<C>> {
        if f.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: f.arity(),
            });
        }
        let kx = Keyer {
            order: &self.order,
            arity: self.arity,
        };
        let elems: Vec<Elem<C>> = self
            .generators
            .iter()
            .zip(&self.leads)
            .map(|(g, l)| Elem {
                poly: to_ipoly(g, &kx),
                lead: l.clone(),
            })
            .collect();
        let refs: Vec<&Elem<C>> = elems.iter().collect();
        Ok(from_ipoly(&reduce(to_ipoly(f, &kx), &refs, &kx), &kx, f.style()))
    }

    pub fn contains(&self, f: &Polynomial<C>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    fn is_standard(&self, e: &ExponentVec) -> bool {
        !self.leads.iter().any(|l| l.divides(e))
    }

    fn require_homogeneous(&self) -> Result<()> {
        if self.is_homogeneous() {
            Ok(())
        } else {
            Err(Error::NonHomogeneous)
        }
    }

    /// Degree-`k` monomials outside the leading-monomial ideal, in
    /// decreasing graded-lex order.
    pub fn standard_monomials(&self, k: u32) -> Result<Vec<ExponentVec>> {
        self.require_homogeneous()?;
        Ok(monomials_of_degree(self.arity, k)
            .into_iter()
            .filter(|e| self.is_standard(e))
            .collect())
    }

    pub fn hilbert_function(&self, k: u32) -> Result<u64> {
        Ok(self.standard_monomials(k)?.len() as u64)
    }

    /// Coordinate sums of exponents over the degree-`k` standard monomials.
    pub fn sigma(&self, k: u32) -> Result<Vec<u64>> {
        let mut s = vec![0u64; self.arity];
        for e in self.standard_monomials(k)? {
            for (m, &a) in e.exps().iter().enumerate() {
                s[m] += a as u64;
            }
        }
        Ok(s)
    }

    /// Default stabilization search cap: `3D + n + 5`, `D` the largest
    /// leading-monomial degree.
    pub fn default_cap(&self) -> u32 {
        let d = self.leads.iter().map(|l| l.total_degree()).max().unwrap_or(1);
        3 * d.max(1) + (self.arity as u32).saturating_sub(1) + 5
    }

    pub fn hilbert_fit(&self) -> Result<HilbertData> {
        self.hilbert_fit_with_cap(self.default_cap())
    }

    pub fn hilbert_fit_with_cap(&self, cap: u32) -> Result<HilbertData> {
        let values: Vec<u64> = (0..=cap)
            .map(|k| self.hilbert_function(k))
            .collect::<Result<_>>()?;
        let ys: Vec<BigRational> = values
            .iter()
            .map(|&v| BigRational::from_integer(v.into()))
            .collect();
        let (k_stab, poly) = fit_eventual_polynomial(&ys, self.arity, "hilbert function", cap)?;
        let (dim, degree) = dim_degree(&poly);
        Ok(HilbertData {
            values,
            k_stab,
            polynomial: poly,
            dim,
            degree,
        })
    }

    /// Abundance estimates from the staircase up to degree `k_max`.
    pub fn abundances(&self, k_max: u32) -> Result<Abundances> {
        if k_max < 3 {
            return Err(Error::Invalid("k_max must be at least 3".into()));
        }
        let n = self.arity;
        let mut sig: Vec<Vec<u64>> = Vec::new();
        let mut h: Vec<u64> = Vec::new();
        for k in 0..=k_max {
            let st = self.standard_monomials(k)?;
            let mut s = vec![0u64; n];
            for e in &st {
                for (m, &a) in e.exps().iter().enumerate() {
                    s[m] += a as u64;
                }
            }
            sig.push(s);
            h.push(st.len() as u64);
        }
        let ratio = |k: usize, m: usize| -> Option<BigRational> {
            let den = k as u64 * h[k];
            (den > 0).then(|| BigRational::new(sig[k][m].into(), den.into()))
        };
        let kk = k_max as usize;
        let estimates: Vec<BigRational> = (0..n)
            .map(|m| ratio(kk, m).unwrap_or_else(BigRational::zero))
            .collect();
        let mut radius = BigRational::zero();
        for k in kk - 2..kk {
            for (m, est) in estimates.iter().enumerate() {
                if let Some(r) = ratio(k, m) {
                    let d = (r - est).abs();
                    if d > radius {
                        radius = d;
                    }
                }
            }
        }
        // Exact limits from leading coefficients of the eventual polynomials.
        let kh: Vec<BigRational> = (0..=kk)
            .map(|k| BigRational::from_integer((k as u64 * h[k]).into()))
            .collect();
        let exact = fit_eventual_polynomial(&kh, n + 1, "k*h(k)", k_max)
            .ok()
            .and_then(|(_, pk)| {
                let lead_deg = pk.len().checked_sub(1)?;
                let lc = pk.last()?.clone();
                if lc.is_zero() {
                    return None;
                }
                (0..n)
                    .map(|m| {
                        let ys: Vec<BigRational> = (0..=kk)
                            .map(|k| BigRational::from_integer(sig[k][m].into()))
                            .collect();
                        let (_, ps) = fit_eventual_polynomial(&ys, n + 1, "sigma", k_max).ok()?;
                        let c = ps.get(lead_deg).cloned().unwrap_or_else(BigRational::zero);
                        if ps.len() > lead_deg + 1 {
                            return None;
                        }
                        Some(c / &lc)
                    })
                    .collect::<Option<Vec<_>>>()
            });
        Ok(Abundances {
            k_max,
            estimates,
            radius,
            exact,
        })
    }

    /// Affine dimension of the ideal (dimension of its leading-monomial
    /// ideal); `None` for the unit ideal. Requires a degree-compatible order.
    pub fn affine_dimension(&self) -> Option<usize> {
        if self.is_unit_ideal() {
            return None;
        }
        let n = self.arity;
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let ok = self.leads.iter().all(|l| {
                l.exps()
                    .iter()
                    .enumerate()
                    .any(|(i, &a)| a > 0 && mask & (1 << i) == 0)
            });
            if ok {
                best = size;
            }
        }
        Some(best)
    }
}

/// Hilbert polynomial data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilbertData {
    /// `h(0..=cap)`.
    pub values: Vec<u64>,
    pub k_stab: u32,
    /// Coefficients, lowest degree first; empty for the zero polynomial.
    pub polynomial: Vec<BigRational>,
    /// Degree of the Hilbert polynomial; `None` when it vanishes.
    pub dim: Option<u32>,
    /// Leading coefficient times `dim!`.
    pub degree: u64,
}

impl HilbertData {
    /// `h(k)`, extrapolating past the computed range with the polynomial.
    pub fn h(&self, k: u32) -> u64 {
        match self.values.get(k as usize) {
            Some(&v) => v,
            None => {
                let v = eval_poly(&self.polynomial, k as i64);
                u64::try_from(v.to_integer()).unwrap_or(0)
            }
        }
    }
}

/// Staircase abundance estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Abundances {
    pub k_max: u32,
    /// `sigma_m(k_max) / (k_max h(k_max))`.
    pub estimates: Vec<BigRational>,
    /// Max deviation of the ratio over the last three degrees.
    pub radius: BigRational,
    /// Limits from the eventual polynomials, when they could be fitted.
    pub exact: Option<Vec<BigRational>>,
}

/// Closed form for a principal ideal whose generator has leading monomial
/// `lead`: `(d - lead_m) / (n d)`.
pub fn principal_abundances(lead: &ExponentVec) -> Vec<BigRational> {
    let d = lead.total_degree() as i64;
    let n = lead.arity() as i64 - 1;
    lead.exps()
        .iter()
        .map(|&a| BigRational::new((d - a as i64).into(), (n * d).into()))
        .collect()
}

pub(crate) fn eval_poly(coeffs: &[BigRational], x: i64) -> BigRational {
    let xb = BigRational::from_integer(x.into());
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * &xb + c)
}

/// Coefficients (low to high) of the polynomial through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[i64], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for i in 0..n {
        // Lagrange basis polynomial for node i.
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let xj = BigRational::from_integer(xs[j].into());
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (t, b) in basis.iter().enumerate() {
                next[t + 1] += b;
                next[t] -= b * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer((xs[i] - xs[j]).into());
        }
        let scale = &ys[i] / denom;
        for (t, b) in basis.iter().enumerate() {
            coeffs[t] += b * &scale;
        }
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

/// Finds the smallest `k0` and lowest degree `r <= max_deg` such that one
/// polynomial matches `ys[k]` for all `k0 <= k <= cap`, with at least three
/// checks beyond the interpolation nodes.
fn fit_eventual_polynomial(
    ys: &[BigRational],
    max_deg: usize,
    what: &str,
    cap: u32,
) -> Result<(u32, Vec<BigRational>)> {
    let last = ys.len() - 1;
    for k0 in 0..=last {
        for r in 0..=max_deg {
            if k0 + r + 3 > last {
                break;
            }
            let xs: Vec<i64> = (k0..=k0 + r).map(|k| k as i64).collect();
            let poly = interpolate(&xs, &ys[k0..=k0 + r]);
            if (k0..=last).all(|k| eval_poly(&poly, k as i64) == ys[k]) {
                // Walk back to the first degree of agreement.
                let mut start = k0;
                while start > 0 && eval_poly(&poly, start as i64 - 1) == ys[start - 1] {
                    start -= 1;
                }
                return Ok((start as u32, poly));
            }
        }
    }
    Err(Error::NotStabilized {
        what: what.to_string(),
        cap,
    })
}

fn dim_degree(poly: &[BigRational]) -> (Option<u32>, u64) {
    match poly.len() {
        0 => (None, 0),
        len => {
            let r = len - 1;
            let fact: BigInt = (1..=r as u64).map(BigInt::from).product();
            let d = poly[r].clone() * BigRational::from_integer(fact);
            (Some(r as u32), u64::try_from(d.to_integer()).unwrap_or(0))
        }
    }
}

/// Generators of the elimination ideal `I ∩ K[remaining variables]`,
/// expressed in the remaining variables (dropped ones removed).
pub fn eliminate<C: FieldCoeff>(gens: &[Polynomial<C>], drop_vars: &[usize]) -> Result<Vec<Polynomial<C>>> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let arity = first.arity();
    if let Some(&v) = drop_vars.iter().find(|&&v| v >= arity) {
        return Err(Error::VariableOutOfRange { index: v, arity });
    }
    let mut eliminated = vec![false; arity];
    for &v in drop_vars {
        eliminated[v] = true;
    }
    if drop_vars.is_empty() {
        return Ok(buchberger(gens, MonomialOrder::GradedRevLex)?.generators);
    }
    let gb = buchberger(gens, TermOrder::Elimination { eliminated: eliminated.clone() })?;
    let mut keep_idx: Vec<usize> = (0..arity).filter(|&i| !eliminated[i]).collect();
    keep_idx.sort();
    let style = first.style();
    Ok(gb
        .generators
        .iter()
        .filter(|g| g.terms().all(|(e, _)| drop_vars.iter().all(|&v| e.get(v) == 0)))
        .map(|g| {
            Polynomial::from_terms(
                keep_idx.len(),
                style,
                g.terms().map(|(e, c)| {
                    (
                        ExponentVec::new(keep_idx.iter().map(|&i| e.get(i)).collect()),
                        c.clone(),
                    )
                }),
            )
        })
        .collect())
}

/// Hilbert function of a homogeneous ideal by rank of the degree-`k`
/// Macaulay matrix; an independent check on the staircase count.
pub fn hilbert_by_rank<C: FieldCoeff>(gens: &[Polynomial<C>], k: u32) -> u64 {
    let arity = gens[0].arity();
    let cols = monomials_of_degree(arity, k);
    let idx: BTreeMap<&ExponentVec, usize> = cols.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let one = gens
        .iter()
        .find_map(|g| g.sample_coeff())
        .map(|c| c.one_like());
    let Some(one) = one else {
        return cols.len() as u64;
    };
    let mut rows = Vec::new();
    for g in gens {
        let Some(dg) = g.total_degree() else { continue };
        if dg > k {
            continue;
        }
        for m in monomials_of_degree(arity, k - dg) {
            let mut row = vec![one.zero_like(); cols.len()];
            for (e, c) in g.terms() {
                row[idx[&e.mul(&m)]] = c.clone();
            }
            rows.push(row);
        }
    }
    let r = crate::linalg::rank(rows, cols.len());
    (cols.len() - r) as u64
}
