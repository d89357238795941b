//! Exact integer and rational roots of univariate polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeff::{is_prime, next_prime, Coeff, Fp};
use crate::error::{Error, Result};
use crate::univariate::{roots_finite, UPoly};

/// Horner evaluation over the integers (coefficients low to high).
pub fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

/// Cauchy bound: every complex root has absolute value below `1 + max|a_i/a_n|`.
fn cauchy_bound(c: &[BigInt]) -> BigInt {
    let lc = c.last().unwrap().abs();
    let m = c[..c.len() - 1].iter().map(|a| a.abs()).max().unwrap_or_default();
    BigInt::one() + m.div_ceil(&lc)
}

fn residue_roots(c: &[BigInt], q: u64) -> Option<Vec<u64>> {
    let qb = BigInt::from(q);
    let red: Vec<u64> = c.iter().map(|a| a.mod_floor(&qb).to_u64().unwrap()).collect();
    if red.iter().all(|&v| v == 0) {
        return None;
    }
    Some(
        (0..q)
            .filter(|&x| red.iter().rev().fold(0u64, |acc, &a| (acc * x + a) % q) == 0)
            .collect(),
    )
}

/// All integer roots in `[lo, hi]`, sorted. Residues modulo two primes whose
/// product covers the interval are combined by CRT and verified exactly.
pub fn integer_roots_in_range(coeffs: &[BigInt], lo: &BigInt, hi: &BigInt) -> Result<Vec<BigInt>> {
    let mut c = trim(coeffs.to_vec());
    if c.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    if c[0].is_zero() {
        if lo <= &BigInt::zero() && &BigInt::zero() <= hi {
            out.push(BigInt::zero());
        }
        let k = c.iter().position(|a| !a.is_zero()).unwrap();
        c.drain(..k);
    }
    if c.len() <= 1 || lo > hi {
        return Ok(out);
    }
    let bound = cauchy_bound(&c);
    let lo = lo.clone().max(-&bound);
    let hi = hi.clone().min(bound);
    if lo > hi {
        return Ok(out);
    }
    let width: BigInt = &hi - &lo + 1;
    if width <= BigInt::from(256) {
        let mut x = lo.clone();
        while x <= hi {
            if eval_int(&c, &x).is_zero() {
                out.push(x.clone());
            }
            x += 1;
        }
        out.sort();
        return Ok(out);
    }
    // Two primes with product >= width, each polynomial nonzero mod it.
    let root: BigInt = width.sqrt() + 1;
    let mut q1 = next_prime(root.to_u64().unwrap_or(u64::MAX / 4).max(3));
    let r1 = loop {
        if let Some(r) = residue_roots(&c, q1) {
            break r;
        }
        q1 = next_prime(q1 + 1);
    };
    let mut q2 = next_prime(q1 + 1);
    let r2 = loop {
        if let Some(r) = residue_roots(&c, q2) {
            break r;
        }
        q2 = next_prime(q2 + 1);
    };
    let big_q = BigInt::from(q1) * BigInt::from(q2);
    let (_, u, _) = crate::coeff::ext_gcd(q1 as i64, q2 as i64);
    // x = a + q1 * ((b - a) * u mod q2)
    for &a in &r1 {
        for &b in &r2 {
            let t = ((b as i128 - a as i128) * u as i128).rem_euclid(q2 as i128);
            let x = BigInt::from(a) + BigInt::from(q1) * BigInt::from(t);
            // Smallest representative >= lo.
            let mut cand = &lo + (&x - &lo).mod_floor(&big_q);
            while cand <= hi {
                if eval_int(&c, &cand).is_zero() {
                    out.push(cand.clone());
                }
                cand += &big_q;
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn to_q(c: &[BigInt]) -> UPoly<BigRational> {
    UPoly::new(c.iter().map(|a| BigRational::from_integer(a.clone())).collect())
}

fn primitive_int(u: &UPoly<BigRational>) -> Vec<BigInt> {
    let den = u
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = u
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Distinct rational roots, sorted.
pub fn rational_roots(coeffs: &[BigRational]) -> Result<Vec<BigRational>> {
    let u = UPoly::new(coeffs.to_vec());
    if u.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = primitive_int(&u);
    let mut out = Vec::new();
    if c[0].is_zero() {
        out.push(BigRational::zero());
        let k = c.iter().position(|a| !a.is_zero()).unwrap();
        c.drain(..k);
    }
    if c.len() <= 1 {
        return Ok(out);
    }
    // Squarefree part over Q.
    let uq = to_q(&c);
    let g = uq.gcd(&uq.derivative());
    let sf = if g.degree().unwrap_or(0) > 0 {
        primitive_int(&uq.divrem(&g).0)
    } else {
        c
    };
    if sf.len() == 2 {
        out.push(BigRational::new(-sf[0].clone(), sf[1].clone()));
        out.sort();
        return Ok(out);
    }
    let lc = sf.last().unwrap().clone();
    let a0 = sf[0].abs();
    // A prime where sf stays squarefree of full degree.
    let mut p = 10_007u64;
    let modp = loop {
        let pb = BigInt::from(p);
        if !(lc.mod_floor(&pb)).is_zero() {
            let f = UPoly::new(sf.iter().map(|a| Fp::from_bigint(a, p)).collect());
            if f.gcd(&f.derivative()).degree() == Some(0) {
                break f;
            }
        }
        p = next_prime(p + 1);
    };
    debug_assert!(is_prime(p));
    let need = BigInt::from(2) * lc.abs() * &a0 + 1;
    let pb = BigInt::from(p);
    let d_sf: Vec<BigInt> = sf
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a * BigInt::from(i))
        .collect();
    for r in roots_finite(&modp) {
        // Newton lifting modulo p^(2^k).
        let mut x = BigInt::from(r.value());
        let mut m = pb.clone();
        while m < need {
            m = &m * &m;
            let fx = eval_int(&sf, &x).mod_floor(&m);
            let dfx = eval_int(&d_sf, &x).mod_floor(&m);
            let inv = mod_inverse(&dfx, &m).expect("simple root stays simple");
            x = (&x - fx * inv).mod_floor(&m);
        }
        let mut z = (&lc * &x).mod_floor(&m);
        if &z * 2 > m {
            z -= &m;
        }
        let cand = BigRational::new(z, lc.clone());
        let val = u.eval(&cand);
        if val.is_zero_elem() {
            out.push(cand);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Distinct integer roots (no range restriction).
pub fn integer_roots(coeffs: &[BigInt]) -> Result<Vec<BigInt>> {
    let q: Vec<BigRational> = coeffs
        .iter()
        .map(|a| BigRational::from_integer(a.clone()))
        .collect();
    Ok(rational_roots(&q)?
        .into_iter()
        .filter(|r| r.is_integer())
        .map(|r| r.to_integer())
        .collect())
}
