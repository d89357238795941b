//! Coefficient domains: rationals, integers, prime fields and extension fields.
//!
//! Elements carry whatever context they need (the modulus for `Fp`, a shared
//! field descriptor for `Fq`), so polynomial code never has to thread a ring
//! object around. A fresh zero or one is always derived from an existing
//! element via [`Coeff::zero_like`] / [`Coeff::one_like`].

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use crate::ext::{Fq, FqField};

/// Arithmetic needed by the polynomial and linear-algebra layers.
pub trait Coeff: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn is_one_elem(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero or for non-units of a ring.
    fn inv(&self) -> Option<Self>;
    /// Image of an integer in the same domain as `self`.
    fn from_int_like(&self, v: &BigInt) -> Self;

    fn mul_int(&self, k: i64) -> Self {
        self.mul(&self.from_int_like(&BigInt::from(k)))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Coefficient domains that are fields.
pub trait FieldCoeff: Coeff {
    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv().expect("division by zero"))
    }
}

/// Finite fields: exposes characteristic, size and enumeration of elements.
pub trait FiniteField: FieldCoeff {
    fn characteristic(&self) -> u64;
    fn extension_degree(&self) -> u32;
    /// Number of field elements `p^e`.
    fn order(&self) -> u128 {
        (self.characteristic() as u128).pow(self.extension_degree())
    }
    /// The `i`-th element in a fixed enumeration, `0 <= i < order()`; index 0 is zero.
    fn element_at(&self, i: u128) -> Self;
}

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one_elem(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_int_like(&self, v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

impl FieldCoeff for BigRational {}

impl Coeff for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one_elem(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if One::is_one(&self.abs()) {
            Some(self.clone())
        } else {
            None
        }
    }
    fn from_int_like(&self, v: &BigInt) -> Self {
        v.clone()
    }
}

/// Element of the prime field `F_p`, `p < 2^32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        debug_assert!((2..(1 << 32)).contains(&p));
        Fp { v: v.rem_euclid(p as i64) as u64, p }
    }

    pub fn from_u64(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn from_bigint(v: &BigInt, p: u64) -> Self {
        let r = v.mod_floor(&BigInt::from(p));
        Fp {
            v: r.try_into().expect("residue fits in u64"),
            p,
        }
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Symmetric lift into `(-p/2, p/2]`.
    pub fn centered(&self) -> i64 {
        if self.v > self.p / 2 {
            self.v as i64 - self.p as i64
        } else {
            self.v as i64
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Coeff for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1, p: self.p }
    }
    fn is_zero_elem(&self) -> bool {
        self.v == 0
    }
    fn is_one_elem(&self) -> bool {
        self.v == 1
    }
    fn add(&self, other: &Self) -> Self {
        let s = self.v + other.v;
        Fp {
            v: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
    fn sub(&self, other: &Self) -> Self {
        Fp {
            v: if self.v >= other.v {
                self.v - other.v
            } else {
                self.v + self.p - other.v
            },
            p: self.p,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        Fp {
            v: (self.v * other.v) % self.p,
            p: self.p,
        }
    }
    fn neg(&self) -> Self {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        let (g, x, _) = ext_gcd(self.v as i64, self.p as i64);
        debug_assert_eq!(g, 1);
        Some(Fp::new(x, self.p))
    }
    fn from_int_like(&self, v: &BigInt) -> Self {
        Fp::from_bigint(v, self.p)
    }
    fn mul_int(&self, k: i64) -> Self {
        self.mul(&Fp::new(k, self.p))
    }
}

impl FieldCoeff for Fp {}

impl FiniteField for Fp {
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn extension_degree(&self) -> u32 {
        1
    }
    fn element_at(&self, i: u128) -> Self {
        Fp::from_u64(i as u64, self.p)
    }
}

/// Extended Euclid on machine integers: returns `(g, x, y)` with `ax + by = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Deterministic primality test for 64-bit integers (Miller-Rabin with a fixed base set).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(v: &BigInt, p: u64) -> u32 {
    assert!(!Zero::is_zero(v), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = v.clone();
    let mut k = 0;
    loop {
        let (q, r) = v.div_rem(&p);
        if !Zero::is_zero(&r) {
            return k;
        }
        v = q;
        k += 1;
    }
}
