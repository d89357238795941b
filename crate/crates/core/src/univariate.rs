//! Dense univariate polynomials over a field, coefficients low to high,
//! plus equal-degree factorization over finite fields.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{FieldCoeff, FiniteField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly<C> {
    c: Vec<C>,
}

impl<C: FieldCoeff> UPoly<C> {
    pub fn new(mut c: Vec<C>) -> Self {
        while c.last().is_some_and(|x| x.is_zero_elem()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(v: C) -> Self {
        Self::new(vec![v])
    }

    /// `x` in the domain of `one`.
    pub fn x(one: &C) -> Self {
        UPoly {
            c: vec![one.zero_like(), one.clone()],
        }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&C> {
        self.c.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&C> {
        self.c.get(i)
    }

    fn zero_elem(&self, other: &Self) -> Option<C> {
        self.c
            .first()
            .or(other.c.first())
            .map(|x| x.zero_like())
    }

    pub fn add(&self, o: &Self) -> Self {
        let Some(z) = self.zero_elem(o) else {
            return Self::zero();
        };
        let n = self.c.len().max(o.c.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).unwrap_or(&z);
                    let b = o.c.get(i).unwrap_or(&z);
                    a.add(b)
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        UPoly {
            c: self.c.iter().map(|x| x.neg()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let z = self.c[0].zero_like();
        let mut out = vec![z; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::new(self.c.iter().map(|x| x.mul(s)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let Some(sd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if sd < dd {
            return (Self::zero(), self.clone());
        }
        let inv = d.lc().unwrap().inv().unwrap();
        let mut r = self.c.clone();
        let z = r[0].zero_like();
        let mut q = vec![z; sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let t = r[k + dd].mul(&inv);
            if t.is_zero_elem() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] = r[k + j].sub(&t.mul(dj));
            }
            q[k] = t;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let one = self
            .c
            .first()
            .or(o.c.first())
            .expect("ext_gcd of zeros")
            .one_like();
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::constant(one.clone()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(one));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.lc().unwrap().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x.mul_int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &C) -> C {
        match self.c.last() {
            None => x.zero_like(),
            Some(_) => self
                .c
                .iter()
                .rev()
                .fold(x.zero_like(), |acc, a| acc.mul(x).add(a)),
        }
    }

    pub fn mulmod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    /// `self^e mod m` for arbitrary-size exponents.
    pub fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let one = m.lc().unwrap().one_like();
        let mut acc = Self::constant(one).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(i) {
                acc = acc.mulmod(&base, m);
            }
        }
        acc
    }
}

/// Distinct roots of a nonzero polynomial over a finite field, by exhaustive
/// evaluation (small fields) or by splitting `gcd(f, x^q - x)`.
pub fn roots_finite<C: FiniteField>(f: &UPoly<C>) -> Vec<C> {
    let Some(lc) = f.lc() else { return Vec::new() };
    let q = lc.order();
    if q <= 4096 {
        return (0..q)
            .map(|i| lc.element_at(i))
            .filter(|x| f.eval(x).is_zero_elem())
            .collect();
    }
    let one = lc.one_like();
    let x = UPoly::x(&one);
    let xq = x.powmod(&BigUint::from(q), f);
    let g = f.gcd(&xq.sub(&x));
    let mut out: Vec<C> = factor_equal_degree(&g, 1)
        .into_iter()
        .map(|l| l.c[0].neg())
        .collect();
    out.sort_by_key(|r| format!("{r}"));
    out
}

/// Squarefree factorization over a finite field: returns `(factor, multiplicity)`.
pub fn squarefree_finite<C: FiniteField>(f: &UPoly<C>) -> Vec<(UPoly<C>, u32)> {
    let mut out = Vec::new();
    let Some(lc) = f.lc() else { return out };
    let p = lc.characteristic();
    let q = lc.order();
    sff_rec(&f.monic(), 1, p, q, &mut out);
    out
}

fn sff_rec<C: FiniteField>(f: &UPoly<C>, mult: u32, p: u64, q: u128, out: &mut Vec<(UPoly<C>, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.divrem(&c).0;
    let mut i = 1u32;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let fac = w.divrem(&y).0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac, i * mult));
        }
        w = y;
        c = c.divrem(&w).0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        // c is a p-th power: take the p-th root coefficientwise.
        let root = pth_root(&c, p, q);
        sff_rec(&root, mult * p as u32, p, q, out);
    }
}

fn pth_root<C: FiniteField>(f: &UPoly<C>, p: u64, q: u128) -> UPoly<C> {
    // a^(q/p) is the p-th root in F_q.
    let e = (q / p as u128) as u64;
    let n = f.c.len();
    UPoly::new(
        (0..n)
            .step_by(p as usize)
            .map(|i| f.c[i].pow(e))
            .collect(),
    )
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree<C: FiniteField>(f: &UPoly<C>) -> Vec<(UPoly<C>, usize)> {
    let mut out = Vec::new();
    let Some(lc) = f.lc() else { return out };
    let q = BigUint::from(lc.order());
    let one = lc.one_like();
    let x = UPoly::x(&one);
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.powmod(&q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(dr) = rest.degree() {
        if dr > 0 {
            out.push((rest, dr));
        }
    }
    out
}

/// Cantor-Zassenhaus splitting of a monic squarefree product of degree-`d`
/// irreducibles. Deterministic (seeded).
pub fn factor_equal_degree<C: FiniteField>(f: &UPoly<C>, d: usize) -> Vec<UPoly<C>> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.monic()];
    }
    let lc = f.lc().unwrap().clone();
    let q = lc.order();
    let p = lc.characteristic();
    let one = lc.one_like();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) ^ ((d as u64) << 16));
    loop {
        let a = UPoly::new(
            (0..n)
                .map(|_| lc.element_at(rng.gen_range(0..q)))
                .collect(),
        );
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // Trace map a + a^2 + ... + a^(2^(kd-1)), q = 2^k.
            let k = lc.extension_degree() as usize;
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..k * d {
                t = t.mulmod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1;
            a.powmod(&e, f).sub(&UPoly::constant(one.clone()))
        };
        let g = f.gcd(&b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = factor_equal_degree(&g, d);
            out.extend(factor_equal_degree(&f.divrem(&g).0, d));
            out.sort_by_key(|u| u.c.iter().map(|c| format!("{c}")).collect::<Vec<_>>());
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities.
pub fn factor_finite<C: FiniteField>(f: &UPoly<C>) -> Vec<(UPoly<C>, u32)> {
    let mut out = Vec::new();
    for (sf, m) in squarefree_finite(f) {
        for (g, d) in distinct_degree(&sf) {
            for h in factor_equal_degree(&g, d) {
                out.push((h, m));
            }
        }
    }
    out
}
