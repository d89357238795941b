//! Sparse multivariate polynomials over an exact coefficient domain.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, Fp};
use crate::error::{Error, Result};
use crate::monomial::{ExponentVec, MonomialOrder};

/// Naming convention of the variables: `x0..xn` or `y1..yn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarStyle {
    Projective,
    Affine,
}

impl VarStyle {
    pub fn name(&self, i: usize) -> String {
        match self {
            VarStyle::Projective => format!("x{i}"),
            VarStyle::Affine => format!("y{}", i + 1),
        }
    }
}

/// A polynomial: map from exponent vectors to nonzero coefficients.
///
/// Terms are stored in graded-lex order; no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    arity: usize,
    style: VarStyle,
    terms: BTreeMap<ExponentVec, C>,
}

pub type QPoly = Polynomial<BigRational>;
pub type ZPoly = Polynomial<BigInt>;

impl<C: Coeff> Polynomial<C> {
    pub fn zero(arity: usize, style: VarStyle) -> Self {
        Polynomial {
            arity,
            style,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(arity: usize, style: VarStyle, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVec, C)>,
    {
        let mut p = Self::zero(arity, style);
        for (e, c) in terms {
            assert_eq!(e.arity(), arity, "exponent arity mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn monomial(exp: ExponentVec, c: C, style: VarStyle) -> Self {
        let arity = exp.arity();
        Self::from_terms(arity, style, [(exp, c)])
    }

    pub fn constant(c: C, arity: usize, style: VarStyle) -> Self {
        Self::monomial(ExponentVec::zero(arity), c, style)
    }

    /// The variable `x_i`, with `one` supplying the coefficient domain.
    pub fn var(i: usize, arity: usize, style: VarStyle, one: &C) -> Self {
        Self::monomial(ExponentVec::var(arity, i), one.one_like(), style)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn style(&self) -> VarStyle {
        self.style
    }

    pub fn with_style(mut self, style: VarStyle) -> Self {
        self.style = style;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVec, &C)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, e: &ExponentVec) -> Option<&C> {
        self.terms.get(e)
    }

    /// Any coefficient, used to derive zero/one in the same domain.
    pub fn sample_coeff(&self) -> Option<&C> {
        self.terms.values().next()
    }

    fn add_term(&mut self, e: ExponentVec, c: C) {
        if c.is_zero_elem() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero_elem() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.total_degree()).max()
    }

    /// Lowest total degree of a term (order at the origin), `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.total_degree()).min()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.get(i)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| e.total_degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            arity: self.arity,
            style: self.style,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = Self::zero(self.arity, self.style);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(
            self.arity,
            self.style,
            self.terms.iter().map(|(e, x)| (e.clone(), x.mul(c))),
        )
    }

    pub fn mul_monomial(&self, m: &ExponentVec, c: &C) -> Self {
        Self::from_terms(
            self.arity,
            self.style,
            self.terms.iter().map(|(e, x)| (e.mul(m), x.mul(c))),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = match self.sample_coeff() {
            Some(c) => Self::constant(c.one_like(), self.arity, self.style),
            None => return if k == 0 { panic!("0^0") } else { self.clone() },
        };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(self.arity, other.arity, "polynomial arity mismatch");
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&ExponentVec, &C)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Result<ExponentVec> {
        self.leading_term(order)
            .map(|(e, _)| e.clone())
            .ok_or(Error::ZeroPolynomial)
    }

    /// Exact value at a point of matching arity.
    pub fn evaluate(&self, point: &[C]) -> Result<C> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        let zero = match (point.first(), self.sample_coeff()) {
            (_, Some(c)) => c.zero_like(),
            (Some(x), None) => x.zero_like(),
            (None, None) => return Err(Error::ZeroPolynomial),
        };
        // Cache powers per variable.
        let mut powers: Vec<Vec<C>> = point.iter().map(|x| vec![x.one_like()]).collect();
        let mut acc = zero;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.exps().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= k as usize {
                    let next = pw.last().unwrap().mul(&point[i]);
                    pw.push(next);
                }
                t = t.mul(&pw[k as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(
            self.arity,
            self.style,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))),
        )
    }

    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.arity,
            self.style,
            self.terms.iter().filter(|(e, _)| e.get(i) > 0).map(|(e, c)| {
                let k = e.get(i);
                let mut ex = e.exps().to_vec();
                ex[i] -= 1;
                (ExponentVec::new(ex), c.mul_int(k as i64))
            }),
        )
    }

    /// Compose: replace variable `i` by `subs[i]` (all of a common arity).
    pub fn substitute(&self, subs: &[Polynomial<C>]) -> Polynomial<C> {
        assert_eq!(subs.len(), self.arity, "substitution arity");
        let (arity, style) = match subs.first() {
            Some(s) => (s.arity, s.style),
            None => (0, self.style),
        };
        let mut out = Polynomial::zero(arity, style);
        let mut powers: Vec<Vec<Polynomial<C>>> = Vec::new();
        for (e, c) in &self.terms {
            if powers.is_empty() {
                powers = subs
                    .iter()
                    .map(|_| vec![Polynomial::constant(c.one_like(), arity, style)])
                    .collect();
            }
            let mut t = Polynomial::constant(c.clone(), arity, style);
            for (i, &k) in e.exps().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][k as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Substitute constants for some variables, keeping the others.
    /// `values[i] = Some(c)` fixes `x_i = c`; the result keeps the arity.
    pub fn partial_eval(&self, values: &[Option<C>]) -> Polynomial<C> {
        assert_eq!(values.len(), self.arity);
        let mut out = Polynomial::zero(self.arity, self.style);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            let mut ex = e.exps().to_vec();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if ex[i] > 0 {
                        t = t.mul(&v.pow(ex[i] as u64));
                        ex[i] = 0;
                    }
                }
            }
            out.add_term(ExponentVec::new(ex), t);
        }
        out
    }

    /// Coefficients (low to high) of a polynomial that only involves `x_i`.
    pub fn univariate_coeffs(&self, i: usize) -> Vec<C> {
        let deg = self.degree_in(i).unwrap_or(0) as usize;
        let zero = match self.sample_coeff() {
            Some(c) => c.zero_like(),
            None => return Vec::new(),
        };
        let mut out = vec![zero; deg + 1];
        for (e, c) in &self.terms {
            debug_assert!(e.total_degree() == e.get(i), "not univariate in x{i}");
            out[e.get(i) as usize] = c.clone();
        }
        out
    }

    /// `f(x + shift)`.
    pub fn translate(&self, shift: &[C]) -> Polynomial<C> {
        let one = match self.sample_coeff() {
            Some(c) => c.one_like(),
            None => return self.clone(),
        };
        let subs: Vec<Polynomial<C>> = (0..self.arity)
            .map(|i| {
                Polynomial::var(i, self.arity, self.style, &one)
                    .add(&Polynomial::constant(shift[i].clone(), self.arity, self.style))
            })
            .collect();
        self.substitute(&subs)
    }

    /// Order of vanishing at `point`: lowest degree of the Taylor expansion there.
    pub fn order_of_vanishing(&self, point: &[C]) -> Result<u32> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        self.translate(point).min_degree().ok_or(Error::ZeroPolynomial)
    }

    /// `x_0^d f(x_1/x_0, ..., x_n/x_0)` in one more variable.
    pub fn homogenize(&self, d: u32) -> Result<Polynomial<C>> {
        let deg = self.total_degree().unwrap_or(0);
        if d < deg {
            return Err(Error::DegreeTooSmall {
                target: d,
                degree: deg,
            });
        }
        Ok(Polynomial::from_terms(
            self.arity + 1,
            VarStyle::Projective,
            self.terms
                .iter()
                .map(|(e, c)| (e.insert(0, d - e.total_degree()), c.clone())),
        ))
    }

    /// Set `x_i = 1`, dropping the variable.
    pub fn dehomogenize_at(&self, i: usize) -> Polynomial<C> {
        Polynomial::from_terms(
            self.arity - 1,
            VarStyle::Affine,
            self.terms.iter().map(|(e, c)| (e.remove(i), c.clone())),
        )
    }

    pub fn dehomogenize(&self) -> Polynomial<C> {
        self.dehomogenize_at(0)
    }

    /// Monic rescaling (field coefficients).
    pub fn make_monic(&self, order: MonomialOrder) -> Polynomial<C> {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("leading coefficient invertible");
                self.scale(&inv)
            }
        }
    }
}

// --- integer / rational specific helpers ---

impl Polynomial<BigRational> {
    /// Clears denominators and content: returns `(primitive, content)` with
    /// `content * primitive == self`, the primitive part having coprime integer
    /// coefficients and a positive leading coefficient (graded-lex).
    pub fn primitive_part(&self) -> Result<(ZPoly, BigRational)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<(ExponentVec, BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), (c * BigRational::from_integer(den.clone())).to_integer()))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
        let lead_negative = self.terms.iter().next_back().unwrap().1.is_negative();
        if lead_negative {
            g = -g;
        }
        let prim = ZPoly::from_terms(
            self.arity,
            self.style,
            ints.into_iter().map(|(e, c)| (e, c / &g)),
        );
        Ok((prim, BigRational::new(g, den)))
    }

    /// Projective height of the coefficient vector.
    pub fn height_of_form(&self) -> Result<BigInt> {
        let (prim, _) = self.primitive_part()?;
        Ok(prim.max_abs_coeff())
    }

    pub fn to_integer(&self) -> Result<ZPoly> {
        let mut out = ZPoly::zero(self.arity, self.style);
        for (e, c) in &self.terms {
            if !c.is_integer() {
                return Err(Error::CoefficientNotInDomain(c.to_string()));
            }
            out.add_term(e.clone(), c.to_integer());
        }
        Ok(out)
    }
}

impl Polynomial<BigInt> {
    pub fn to_rational(&self) -> QPoly {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        One::is_one(&self.content())
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Divides out the content, making the leading (graded-lex) coefficient positive.
    pub fn primitive(&self) -> ZPoly {
        self.to_rational()
            .primitive_part()
            .map(|(p, _)| p)
            .unwrap_or_else(|_| self.clone())
    }

    pub fn reduce_mod(&self, p: u64) -> Polynomial<Fp> {
        self.map_coeffs(|c| Fp::from_bigint(c, p))
    }

    /// Evaluation at an integer point, exact.
    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        self.evaluate(point).unwrap_or_else(|_| BigInt::zero())
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.style.name(i)
                    } else {
                        format!("{}^{}", self.style.name(i), k)
                    }
                })
                .collect();
            let unit = mag == "1";
            match (vars.is_empty(), unit) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{}*{}", mag, vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Shorthand for small integer polynomials in tests and fixtures.
pub fn zpoly(text: &str, arity: usize) -> ZPoly {
    crate::parse::parse_integer(text, arity).expect("valid integer polynomial")
}

/// Shorthand for rational polynomials.
pub fn qpoly(text: &str, arity: usize) -> QPoly {
    crate::parse::parse_rational(text, arity).expect("valid rational polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MonomialOrder::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn homogenize_examples() {
        let f = qpoly("y1^2 + y2", 2);
        assert_eq!(f.homogenize(2).unwrap(), qpoly("x1^2 + x0*x2", 3));
        let one = qpoly("1", 2);
        assert_eq!(one.homogenize(3).unwrap().to_string(), "x0^3");
        assert!(matches!(
            f.homogenize(1),
            Err(Error::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn primitive_part_examples() {
        let (p, c) = qpoly("2*x0 + 4*x1", 2).primitive_part().unwrap();
        assert_eq!(p.to_string(), "x0 + 2*x1");
        assert_eq!(c, q(2, 1));
        let (p, c) = qpoly("1/2*x0 + 1/3*x1", 2).primitive_part().unwrap();
        assert_eq!(p.to_string(), "3*x0 + 2*x1");
        assert_eq!(c, q(1, 6));
        let f = qpoly("3*x0 - 5*x1 + x2", 3);
        let (p, c) = f.primitive_part().unwrap();
        assert_eq!(p.to_rational(), f);
        assert_eq!(c, q(1, 1));
        assert!(matches!(
            QPoly::zero(2, VarStyle::Projective).primitive_part(),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn height_examples() {
        assert_eq!(qpoly("3*x0 - 5*x1 + x2", 3).height_of_form().unwrap(), 5.into());
        assert_eq!(qpoly("2*x0 + 4*x1", 2).height_of_form().unwrap(), 2.into());
        let f = qpoly("7*x0 - 3/4*x1", 2);
        assert_eq!(
            f.height_of_form().unwrap(),
            f.scale(&q(-5, 9)).height_of_form().unwrap()
        );
    }

    #[test]
    fn evaluate_and_leading() {
        let f = zpoly("x0^2 + x1^2", 2);
        assert_eq!(f.evaluate(&[3.into(), 4.into()]).unwrap(), 25.into());
        assert!(matches!(
            f.evaluate(&[3.into()]),
            Err(Error::ArityMismatch { .. })
        ));
        let g = zpoly("x0*x1 + x2^2", 3);
        assert_eq!(g.leading_monomial(GradedLex).unwrap().exps(), &[1, 1, 0]);
        assert_eq!(g.leading_monomial(GradedRevLex).unwrap().exps(), &[0, 0, 2]);
        let m = zpoly("x1^3*x2", 3);
        assert_eq!(m.leading_monomial(GradedRevLex).unwrap().exps(), &[0, 3, 1]);
    }

    #[test]
    fn order_of_vanishing_examples() {
        let node = qpoly("y1^2 - y2^2*y2 - y2^2", 2);
        let origin = [q(0, 1), q(0, 1)];
        assert_eq!(node.order_of_vanishing(&origin).unwrap(), 2);
        let smooth = qpoly("y2 - y1^2", 2);
        assert_eq!(smooth.order_of_vanishing(&origin).unwrap(), 1);
        assert_eq!(smooth.order_of_vanishing(&[q(0, 1), q(1, 1)]).unwrap(), 0);
    }

    fn small_poly(arity: usize, max_deg: u32) -> impl Strategy<Value = ZPoly> {
        prop::collection::vec(
            (prop::collection::vec(0u32..=max_deg, arity), -9i64..=9),
            1..8,
        )
        .prop_map(move |terms| {
            ZPoly::from_terms(
                arity,
                VarStyle::Affine,
                terms
                    .into_iter()
                    .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg)
                    .map(|(e, c)| (ExponentVec::new(e), BigInt::from(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn homogenize_roundtrip(f in small_poly(3, 3)) {
            let d = f.total_degree().unwrap_or(0);
            let h = f.homogenize(d).unwrap();
            prop_assert!(h.is_homogeneous());
            prop_assert_eq!(h.dehomogenize(), f);
        }

        #[test]
        fn ring_laws(a in small_poly(2, 3), b in small_poly(2, 3), c in small_poly(2, 3)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            let (ap, bp) = (a.reduce_mod(7), b.reduce_mod(7));
            prop_assert_eq!(ap.mul(&bp), a.mul(&b).reduce_mod(7));
        }

        #[test]
        fn evaluation_commutes_with_reduction(f in small_poly(3, 4), pt in prop::collection::vec(-20i64..20, 3)) {
            let big: Vec<BigInt> = pt.iter().map(|&v| v.into()).collect();
            let small: Vec<Fp> = pt.iter().map(|&v| Fp::new(v, 11)).collect();
            let lhs = f.reduce_mod(11).evaluate(&small).unwrap();
            prop_assert_eq!(lhs, Fp::from_bigint(&f.eval_int(&big), 11));
        }

        #[test]
        fn homogeneous_scaling(f in small_poly(3, 4), pt in prop::collection::vec(-5i64..5, 4)) {
            let d = f.total_degree().unwrap_or(0);
            let h = f.homogenize(d).unwrap();
            let x: Vec<BigInt> = pt.iter().map(|&v| v.into()).collect();
            let x2: Vec<BigInt> = pt.iter().map(|&v| (2 * v).into()).collect();
            prop_assert_eq!(h.eval_int(&x2), h.eval_int(&x) * BigInt::from(2).pow(d));
        }

        #[test]
        fn height_scaling_invariance(f in small_poly(3, 3), n in 1i64..50, d in 1i64..50, neg in any::<bool>()) {
            prop_assume!(!f.is_zero());
            let s = BigRational::new((if neg { -n } else { n }).into(), d.into());
            let fq = f.to_rational();
            prop_assert_eq!(fq.height_of_form().unwrap(), fq.scale(&s).height_of_form().unwrap());
        }
    }
}
