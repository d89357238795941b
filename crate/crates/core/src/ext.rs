//! Extension fields `F_{p^e}` as `F_p[t]/(m(t))`.
//!
//! The modulus for each `(p, e)` is found by a deterministic search seeded from
//! `(p, e)`, so every run (and every thread) uses the same representation.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Coeff, FieldCoeff, FiniteField};

/// Descriptor of `F_{p^e}`: prime, degree and the monic irreducible modulus.
#[derive(Debug, PartialEq, Eq)]
pub struct FqField {
    p: u64,
    e: u32,
    /// Low-to-high coefficients of the monic modulus, length `e + 1`.
    modulus: Vec<u64>,
}

static FIELDS: OnceLock<Mutex<HashMap<(u64, u32), Arc<FqField>>>> = OnceLock::new();

impl FqField {
    /// Shared descriptor for `F_{p^e}`. Panics if `p^e` does not fit comfortably in 62 bits.
    pub fn get(p: u64, e: u32) -> Arc<FqField> {
        assert!(e >= 1);
        assert!(
            (p as f64).powi(e as i32) < 4.0e18,
            "field F_{p}^{e} too large for the scan-based algorithms"
        );
        let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = map.lock().expect("field cache poisoned");
        guard
            .entry((p, e))
            .or_insert_with(|| {
                Arc::new(FqField {
                    p,
                    e,
                    modulus: find_irreducible(p, e),
                })
            })
            .clone()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn zero(self: &Arc<Self>) -> Fq {
        Fq {
            c: vec![0; self.e as usize],
            field: self.clone(),
        }
    }

    pub fn one(self: &Arc<Self>) -> Fq {
        let mut z = self.zero();
        z.c[0] = 1;
        z
    }

    pub fn from_i64(self: &Arc<Self>, v: i64) -> Fq {
        let mut z = self.zero();
        z.c[0] = v.rem_euclid(self.p as i64) as u64;
        z
    }

    /// The class of `t`, a generator of the extension over `F_p`.
    pub fn generator(self: &Arc<Self>) -> Fq {
        let mut z = self.zero();
        if self.e == 1 {
            // t = -m_0 when the modulus is linear.
            z.c[0] = (self.p - self.modulus[0]) % self.p;
        } else {
            z.c[1] = 1;
        }
        z
    }

    pub fn element(self: &Arc<Self>, mut i: u64) -> Fq {
        let mut z = self.zero();
        for slot in z.c.iter_mut() {
            *slot = i % self.p;
            i /= self.p;
        }
        z
    }
}

/// Element of `F_{p^e}`.
#[derive(Clone)]
pub struct Fq {
    c: Vec<u64>,
    field: Arc<FqField>,
}

impl Fq {
    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.c
    }

    /// Index of this element in the enumeration used by [`FqField::element`].
    pub fn index(&self) -> u64 {
        self.c.iter().rev().fold(0u64, |acc, &d| acc * self.field.p + d)
    }

    /// True if the element lies in the prime subfield.
    pub fn in_prime_field(&self) -> bool {
        self.c[1..].iter().all(|&d| d == 0)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field.p == other.field.p && self.field.e == other.field.e
    }
}

impl Eq for Fq {}

impl Hash for Fq {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.c.hash(state);
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.e == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| match i {
                0 => format!("{d}"),
                1 => format!("{d}t"),
                _ => format!("{d}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "[{}]", terms.join("+"))
        }
    }
}

impl Coeff for Fq {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero_elem(&self) -> bool {
        self.c.iter().all(|&d| d == 0)
    }
    fn is_one_elem(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&d| d == 0)
    }
    fn add(&self, other: &Self) -> Self {
        let p = self.field.p;
        Fq {
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| (a + b) % p)
                .collect(),
            field: self.field.clone(),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        let p = self.field.p;
        Fq {
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| (a + p - b) % p)
                .collect(),
            field: self.field.clone(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let p = self.field.p;
        let e = self.field.e as usize;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        let m = &self.field.modulus;
        for k in (e..prod.len()).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..e {
                prod[k - e + i] = (prod[k - e + i] + (p - lead) * m[i]) % p;
            }
        }
        prod.truncate(e);
        Fq {
            c: prod,
            field: self.field.clone(),
        }
    }
    fn neg(&self) -> Self {
        let p = self.field.p;
        Fq {
            c: self.c.iter().map(|&a| (p - a) % p).collect(),
            field: self.field.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero_elem() {
            return None;
        }
        Some(self.pow(self.field.size() - 2))
    }
    fn from_int_like(&self, v: &BigInt) -> Self {
        let r: u64 = v
            .mod_floor(&BigInt::from(self.field.p))
            .try_into()
            .expect("residue fits");
        let mut z = self.field.zero();
        z.c[0] = r;
        z
    }
}

impl FieldCoeff for Fq {}

impl FiniteField for Fq {
    fn characteristic(&self) -> u64 {
        self.field.p
    }
    fn extension_degree(&self) -> u32 {
        self.field.e
    }
    fn element_at(&self, i: u128) -> Self {
        self.field.element(i as u64)
    }
}

// --- dense polynomials over F_p used only for the modulus search ---

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (_, x, _) = crate::coeff::ext_gcd(a as i64, p as i64);
    x.rem_euclid(p as i64) as u64
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        if c != 0 {
            for i in 0..=dm {
                r[k - dm + i] = (r[k - dm + i] + (p - c) * m[i] % p) % p;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    trim(&mut r);
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m`.
fn frobenius_power(m: &[u64], p: u64, k: u32) -> Vec<u64> {
    let mut x = vec![0, 1];
    for _ in 0..k {
        // raise to the p-th power by square-and-multiply
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        x = acc;
    }
    x
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree `e` over `F_p`.
pub(crate) fn is_irreducible_mod_p(m: &[u64], p: u64) -> bool {
    let e = (m.len() - 1) as u32;
    if e == 1 {
        return true;
    }
    let sub_x = |mut v: Vec<u64>| {
        v.resize(v.len().max(2), 0);
        v[1] = (v[1] + p - 1) % p;
        trim(&mut v);
        v
    };
    let full = sub_x(frobenius_power(m, p, e));
    if !(full.len() == 1 && full[0] == 0) {
        return false;
    }
    for q in prime_divisors(e) {
        let h = sub_x(frobenius_power(m, p, e / q));
        let g = poly_gcd(m, &h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn find_irreducible(p: u64, e: u32) -> Vec<u64> {
    if e == 1 {
        return vec![0, 1];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ e as u64);
    loop {
        let mut m: Vec<u64> = (0..e).map(|_| rng.gen_range(0..p)).collect();
        m.push(1);
        if m[0] != 0 && is_irreducible_mod_p(&m, p) {
            return m;
        }
    }
}
