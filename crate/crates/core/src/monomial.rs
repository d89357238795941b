//! Exponent vectors and graded monomial orderings.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent tuple `(a_0, ..., a_n)` of a monomial.
///
/// The derived `Ord` is *not* a monomial order; the canonical ordering used by
/// polynomial storage is graded-lex, see the `Ord` impl below.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVec {
    exps: Vec<u32>,
    degree: u32,
}

impl ExponentVec {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        ExponentVec { exps, degree }
    }

    pub fn zero(arity: usize) -> Self {
        ExponentVec {
            exps: vec![0; arity],
            degree: 0,
        }
    }

    /// `x_i` as an exponent vector.
    pub fn var(arity: usize, i: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[i] = 1;
        ExponentVec { exps, degree: 1 }
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn get(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn mul(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &ExponentVec) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self | other`.
    pub fn quotient_of(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            degree: other.degree - self.degree,
        }
    }

    pub fn lcm(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &ExponentVec) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Drops coordinate `i` (used when dehomogenizing).
    pub fn remove(&self, i: usize) -> ExponentVec {
        let mut exps = self.exps.clone();
        let removed = exps.remove(i);
        ExponentVec {
            exps,
            degree: self.degree - removed,
        }
    }

    /// Inserts a coordinate with value `v` at position `i`.
    pub fn insert(&self, i: usize, v: u32) -> ExponentVec {
        let mut exps = self.exps.clone();
        exps.insert(i, v);
        ExponentVec {
            exps,
            degree: self.degree + v,
        }
    }
}

impl fmt::Debug for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// Canonical storage order: graded-lex.
impl Ord for ExponentVec {
    fn cmp(&self, other: &Self) -> Ordering {
        MonomialOrder::GradedLex.cmp(self, other)
    }
}

impl PartialOrd for ExponentVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree `k` in `arity` variables,
/// in decreasing graded-lex order.
pub fn monomials_of_degree(arity: usize, k: u32) -> Vec<ExponentVec> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; arity];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentVec>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(ExponentVec::new(cur.clone()));
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
    }
    if arity == 0 {
        if k == 0 {
            out.push(ExponentVec::new(vec![]));
        }
        return out;
    }
    rec(0, k, &mut cur, &mut out);
    out
}

/// All exponent vectors of total degree `<= k`, increasing degree.
pub fn monomials_up_to_degree(arity: usize, k: u32) -> Vec<ExponentVec> {
    (0..=k)
        .flat_map(|j| {
            let mut v = monomials_of_degree(arity, j);
            v.reverse();
            v
        })
        .collect()
}

/// Graded monomial orderings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    /// Higher degree is larger; ties broken by the left-most entry of `a - b`:
    /// negative means `a < b`. `x_0` is the largest variable.
    GradedLex,
    /// Higher degree is larger; ties: left-most nonzero entry of `a - b`
    /// positive means `a < b`. Monomials rich in `x_0` are small.
    GradedRevLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &ExponentVec, b: &ExponentVec) -> Ordering {
        match a.degree.cmp(&b.degree) {
            Ordering::Equal => {}
            o => return o,
        }
        for (x, y) in a.exps.iter().zip(&b.exps) {
            if x != y {
                return match self {
                    MonomialOrder::GradedLex => x.cmp(y),
                    MonomialOrder::GradedRevLex => y.cmp(x),
                };
            }
        }
        Ordering::Equal
    }
}

/// Term orders accepted by the Gröbner engine: the two graded orders plus
/// a block order that eliminates a set of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermOrder {
    Graded(MonomialOrder),
    /// Compare total degree in the `eliminated` variables first, then
    /// graded-revlex on the full vector.
    Elimination { eliminated: Vec<bool> },
    /// Pure lexicographic with `x_0` largest.
    Lex,
}

impl From<MonomialOrder> for TermOrder {
    fn from(o: MonomialOrder) -> Self {
        TermOrder::Graded(o)
    }
}

impl TermOrder {
    pub fn cmp(&self, a: &ExponentVec, b: &ExponentVec) -> Ordering {
        match self {
            TermOrder::Graded(o) => o.cmp(a, b),
            TermOrder::Elimination { eliminated } => {
                let block = |v: &ExponentVec| -> u32 {
                    v.exps
                        .iter()
                        .zip(eliminated)
                        .filter(|(_, &e)| e)
                        .map(|(x, _)| *x)
                        .sum()
                };
                block(a)
                    .cmp(&block(b))
                    .then_with(|| MonomialOrder::GradedRevLex.cmp(a, b))
            }
            TermOrder::Lex => a.exps.cmp(&b.exps),
        }
    }

    /// True when the order compares total degree first.
    pub fn is_graded(&self) -> bool {
        matches!(self, TermOrder::Graded(_))
    }
}
