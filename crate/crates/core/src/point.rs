//! Integral points.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer tuple, either an affine point or a projective representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntPoint {
    coords: Vec<BigInt>,
    primitive: bool,
}

impl IntPoint {
    /// Affine point; no primitivity requirement.
    pub fn affine(coords: Vec<BigInt>) -> Self {
        IntPoint {
            coords,
            primitive: false,
        }
    }

    /// Projective representative: must be primitive. The sign is normalized so
    /// the first nonzero coordinate is positive.
    pub fn projective(coords: Vec<BigInt>) -> Result<Self> {
        if gcd_all(&coords) != BigInt::from(1) {
            return Err(Error::Precondition(format!(
                "point {:?} is not primitive",
                coords.iter().map(|c| c.to_string()).collect::<Vec<_>>()
            )));
        }
        Ok(IntPoint {
            coords: sign_normalize(coords),
            primitive: true,
        })
    }

    /// Divides out the gcd and normalizes the sign; `None` for the zero tuple.
    pub fn primitive_from(coords: Vec<BigInt>) -> Option<Self> {
        let g = gcd_all(&coords);
        if g.is_zero() {
            return None;
        }
        let coords = coords.into_iter().map(|c| c / &g).collect();
        Some(IntPoint {
            coords: sign_normalize(coords),
            primitive: true,
        })
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self::affine(v.iter().map(|&x| x.into()).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Max absolute coordinate.
    pub fn height(&self) -> BigInt {
        self.coords
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn sign_normalize(mut coords: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = coords.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in coords.iter_mut() {
                *c = -&*c;
            }
        }
    }
    coords
}

impl fmt::Display for IntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        let sep = if self.primitive { ":" } else { "," };
        write!(f, "({})", parts.join(sep))
    }
}

impl fmt::Debug for IntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
