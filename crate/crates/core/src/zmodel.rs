//! Integral models, reduction mod p, and local multiplicities of F_p-points.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, Fp, Fq, FqField};
use crate::error::{Error, Result};
use crate::linalg::echelon_pivots_mod_p;
use crate::monomial::{monomials_up_to_degree, ExponentVec, MonomialOrder};
use crate::point::IntPoint;
use crate::poly::{Polynomial, QPoly, VarStyle, ZPoly};
use crate::staircase::{buchberger, HilbertData};

/// Primitive integer generators of a projective variety, with the
/// dimension and degree read off its Hilbert polynomial over Q.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralModel {
    generators: Vec<ZPoly>,
    arity: usize,
    dim: u32,
    degree: u64,
}

impl IntegralModel {
    pub fn new(gens: &[QPoly]) -> Result<Self> {
        let first = gens.first().ok_or(Error::EmptyGenerators)?;
        let arity = first.arity();
        let mut prims = Vec::new();
        for g in gens {
            if g.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    got: g.arity(),
                });
            }
            if !g.is_homogeneous() {
                return Err(Error::NonHomogeneous);
            }
            if g.is_zero() {
                continue;
            }
            prims.push(g.primitive_part()?.0.with_style(VarStyle::Projective));
        }
        if prims.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let hd = hilbert_over_q(&prims)?;
        let dim = hd
            .dim
            .ok_or_else(|| Error::Precondition("generators define the empty set".into()))?;
        Ok(IntegralModel {
            generators: prims,
            arity,
            dim,
            degree: hd.degree,
        })
    }

    pub fn hypersurface(f: &ZPoly) -> Result<Self> {
        Self::new(&[f.to_rational()])
    }

    pub fn generators(&self) -> &[ZPoly] {
        &self.generators
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Projective dimension `r`.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_hypersurface(&self) -> bool {
        self.generators.len() == 1
    }

    pub fn rational_generators(&self) -> Vec<QPoly> {
        self.generators.iter().map(|g| g.to_rational()).collect()
    }

    /// True when the integer point lies on every generator.
    pub fn contains(&self, pt: &IntPoint) -> bool {
        self.generators
            .iter()
            .all(|g| g.eval_int(pt.coords()).is_zero())
    }

    /// Stable short hash of the canonical generator text.
    pub fn hash_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for g in &self.generators {
            h.update(g.to_string().as_bytes());
            h.update(b";");
        }
        hex::encode(&h.finalize()[..8])
    }
}

pub fn hilbert_over_q(gens: &[ZPoly]) -> Result<HilbertData> {
    let q: Vec<QPoly> = gens.iter().map(|g| g.to_rational()).collect();
    buchberger(&q, MonomialOrder::GradedRevLex)?.hilbert_fit()
}

/// Coefficientwise reduction of the generators.
pub fn reduce_mod_p(model: &IntegralModel, p: u64) -> Result<Vec<Polynomial<Fp>>> {
    model
        .generators
        .iter()
        .map(|g| {
            let r = g.reduce_mod(p);
            if r.is_zero() {
                Err(Error::BadPrime {
                    p,
                    reason: format!("generator {g} vanishes mod {p}"),
                })
            } else {
                Ok(r)
            }
        })
        .collect()
}

/// A projective point over `F_{p^e}`, first nonzero coordinate equal to one.
/// Coordinates are stored as element indices (`FqField::element`); for
/// `e = 1` the index is the residue itself.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpPoint {
    pub p: u64,
    pub e: u32,
    pub coords: Vec<u64>,
}

impl FpPoint {
    pub fn from_residues(p: u64, v: &[i64]) -> Result<Self> {
        let mut c: Vec<u64> = v.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
        normalize(&mut c, p).ok_or_else(|| Error::Precondition("zero tuple".into()))?;
        Ok(FpPoint { p, e: 1, coords: c })
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn fp_coords(&self) -> Vec<Fp> {
        assert_eq!(self.e, 1);
        self.coords.iter().map(|&c| Fp::from_u64(c, self.p)).collect()
    }

    pub fn fq_coords(&self) -> Vec<Fq> {
        let f = FqField::get(self.p, self.e);
        self.coords.iter().map(|&c| f.element(c)).collect()
    }

    /// Index of the first nonzero coordinate.
    pub fn chart(&self) -> usize {
        self.coords.iter().position(|&c| c != 0).unwrap()
    }
}

impl fmt::Display for FpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({}) mod {}", parts.join(":"), self.p)?;
        if self.e > 1 {
            write!(f, "^{}", self.e)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn normalize(c: &mut [u64], p: u64) -> Option<()> {
    let lead = *c.iter().find(|&&x| x != 0)?;
    let inv = Fp::from_u64(lead, p).inv().unwrap().value();
    for x in c.iter_mut() {
        *x = *x * inv % p;
    }
    Some(())
}

/// Reduction of a primitive integer point.
pub fn specialize(pt: &IntPoint, p: u64) -> Result<FpPoint> {
    let pb = BigInt::from(p);
    let mut c: Vec<u64> = pt
        .coords()
        .iter()
        .map(|x| u64::try_from(x.mod_floor(&pb)).unwrap())
        .collect();
    normalize(&mut c, p).ok_or_else(|| {
        Error::Precondition(format!("point {pt} reduces to zero mod {p}; not primitive"))
    })?;
    Ok(FpPoint { p, e: 1, coords: c })
}

/// Compiled polynomial for fast evaluation over `F_p` with machine words.
#[derive(Clone, Debug)]
pub struct FpEval {
    terms: Vec<(Vec<u32>, u64)>,
    p: u64,
}

impl FpEval {
    pub fn new(f: &Polynomial<Fp>, p: u64) -> Self {
        FpEval {
            terms: f
                .terms()
                .map(|(e, c)| (e.exps().to_vec(), c.value()))
                .collect(),
            p,
        }
    }

    pub fn from_int(f: &ZPoly, p: u64) -> Self {
        Self::new(&f.reduce_mod(p), p)
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t * x[i] % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

/// All points of the reduction over `F_{p^e}`.
pub fn fp_points(
    model: &IntegralModel,
    p: u64,
    require_x0_nonzero: bool,
    e: u32,
    cap: u128,
) -> Result<Vec<FpPoint>> {
    let gens = reduce_mod_p(model, p)?;
    let n = model.arity;
    let q = (p as u128).pow(e);
    let total: u128 = if require_x0_nonzero {
        q.pow(n as u32 - 1)
    } else {
        (0..n as u32).map(|j| q.pow(j)).sum()
    };
    if total > cap {
        return Err(Error::CapExceeded {
            what: format!("projective space over F_{p}^{e}"),
            cap,
        });
    }
    let mut out = Vec::new();
    if e == 1 {
        let ev: Vec<FpEval> = gens.iter().map(|g| FpEval::new(g, p)).collect();
        scan_normalized(n, p, require_x0_nonzero, |c| {
            if ev.iter().all(|g| g.eval(c) == 0) {
                out.push(FpPoint {
                    p,
                    e,
                    coords: c.to_vec(),
                });
            }
        });
    } else {
        let field = FqField::get(p, e);
        let ext: Vec<Polynomial<Fq>> = gens
            .iter()
            .map(|g| g.map_coeffs(|c| field.from_i64(c.value() as i64)))
            .collect();
        scan_normalized(n, q as u64, require_x0_nonzero, |c| {
            let pt: Vec<Fq> = c.iter().map(|&i| field.element(i)).collect();
            if ext.iter().all(|g| g.evaluate(&pt).unwrap().is_zero_elem()) {
                out.push(FpPoint {
                    p,
                    e,
                    coords: c.to_vec(),
                });
            }
        });
    }
    Ok(out)
}

/// Visits every normalized tuple over a set of `q` symbols, symbol 1
/// standing for the unit.
fn scan_normalized(n: usize, q: u64, x0_nonzero: bool, mut visit: impl FnMut(&[u64])) {
    let lead_range = if x0_nonzero { 0..1 } else { 0..n };
    for lead in lead_range {
        let mut c = vec![0u64; n];
        c[lead] = 1;
        let free = n - lead - 1;
        let mut idx = vec![0u64; free];
        loop {
            for (j, &v) in idx.iter().enumerate() {
                c[lead + 1 + j] = v;
            }
            visit(&c);
            let mut pos = 0;
            loop {
                if pos == free {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < q {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == free {
                break;
            }
        }
    }
}

/// Values of `g(k) = dim m^k/m^{k+1}` of the local ring at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalGFunction {
    pub values: Vec<u64>,
    /// Multiplicity read off the eventual pattern, when it stabilized.
    pub mu: Option<u32>,
    pub dim: u32,
}

impl LocalGFunction {
    /// `sum_{k <= K} g(k)`.
    pub fn colength(&self) -> u64 {
        self.values.iter().sum()
    }
}

/// Generators moved to the affine chart of `pt` with `pt` at the origin.
pub fn local_generators(gens: &[Polynomial<Fp>], pt: &FpPoint) -> Vec<Polynomial<Fp>> {
    let chart = pt.chart();
    let shift: Vec<Fp> = pt
        .fp_coords()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| *i != chart)
        .map(|(_, c)| c)
        .collect();
    gens.iter()
        .map(|g| g.dehomogenize_at(chart).translate(&shift))
        .collect()
}

/// Hilbert-Samuel data of the local ring at the origin of an affine ideal:
/// `H(k) = dim R/(m^{k+1} + J)` for `k = 0..=big_k`.
pub fn local_hilbert_samuel(local: &[Polynomial<Fp>], p: u64, big_k: u32) -> Vec<u64> {
    let n = local[0].arity();
    let cols = monomials_up_to_degree(n, big_k);
    let col_idx: HashMap<&ExponentVec, usize> =
        cols.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for g in local {
        let Some(ord) = g.min_degree() else { continue };
        if ord > big_k {
            continue;
        }
        for m in monomials_up_to_degree(n, big_k - ord) {
            let mut row = vec![0u64; cols.len()];
            for (e, c) in g.terms() {
                let t = e.mul(&m);
                if t.total_degree() <= big_k {
                    row[col_idx[&t]] = c.value();
                }
            }
            rows.push(row);
        }
    }
    let pivots = echelon_pivots_mod_p(rows, cols.len(), p);
    let mut out = Vec::new();
    let mut piv_iter = pivots.iter().peekable();
    let mut npiv = 0u64;
    let mut ncols = 0u64;
    for k in 0..=big_k {
        let width = crate::monomial::monomials_of_degree(n, k).len() as u64;
        ncols += width;
        while let Some(&&c) = piv_iter.peek() {
            if (c as u64) < ncols {
                npiv += 1;
                piv_iter.next();
            } else {
                break;
            }
        }
        out.push(ncols - npiv);
    }
    out
}

/// `g(0..=K)` at an `F_p`-point of the reduction, with the multiplicity fit.
pub fn local_g_function(model: &IntegralModel, p: u64, pt: &FpPoint, big_k: u32) -> Result<LocalGFunction> {
    if pt.e != 1 || pt.p != p {
        return Err(Error::Precondition(format!("{pt} is not an F_{p}-point")));
    }
    let gens = reduce_mod_p(model, p)?;
    let fp = pt.fp_coords();
    if let Some(g) = gens.iter().find(|g| !g.evaluate(&fp).unwrap().is_zero_elem()) {
        return Err(Error::Precondition(format!("{pt} is not on {g}")));
    }
    let local = local_generators(&gens, pt);
    let h = local_hilbert_samuel(&local, p, big_k);
    let values: Vec<u64> = (0..h.len())
        .map(|k| if k == 0 { h[0] } else { h[k] - h[k - 1] })
        .collect();
    let mu = fit_multiplicity(&values, model.dim);
    Ok(LocalGFunction {
        values,
        mu,
        dim: model.dim,
    })
}

/// Eventual leading behaviour of `g`: for `r >= 1` the `(r-1)`-th
/// difference must be constant on the last `max(3, r+1)` degrees; for
/// `r = 0`, `g` must vanish there and the multiplicity is the colength.
pub fn fit_multiplicity(g: &[u64], r: u32) -> Option<u32> {
    let need = 3.max(r as usize + 1);
    if r == 0 {
        let tail = g.get(g.len().checked_sub(need)?..)?;
        return tail.iter().all(|&v| v == 0).then(|| g.iter().sum::<u64>() as u32);
    }
    let mut d: Vec<i64> = g.iter().map(|&v| v as i64).collect();
    for _ in 1..r {
        d = d.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let tail = d.get(d.len().checked_sub(need)?..)?;
    let v = tail[0];
    (v > 0 && tail.iter().all(|&x| x == v)).then_some(v as u32)
}

/// Multiplicity with `K = 2d + 4`; hypersurfaces are cross-checked against
/// the order of vanishing of the dehomogenized form.
pub fn multiplicity(model: &IntegralModel, p: u64, pt: &FpPoint) -> Result<u32> {
    let big_k = 2 * max_generator_degree(model) + 4;
    multiplicity_with_cap(model, p, pt, big_k)
}

pub fn max_generator_degree(model: &IntegralModel) -> u32 {
    model
        .generators
        .iter()
        .filter_map(|g| g.total_degree())
        .max()
        .unwrap_or(1)
}

pub fn multiplicity_with_cap(model: &IntegralModel, p: u64, pt: &FpPoint, big_k: u32) -> Result<u32> {
    let g = local_g_function(model, p, pt, big_k)?;
    let mu = g.mu.ok_or_else(|| Error::NotStabilized {
        what: format!("local g-function at {pt}"),
        cap: big_k,
    })?;
    if model.is_hypersurface() {
        let ord = hypersurface_order(model, p, pt)?;
        if ord != mu {
            return Err(Error::Invalid(format!(
                "multiplicity mismatch at {pt}: g-function gives {mu}, order of vanishing {ord}"
            )));
        }
    }
    Ok(mu)
}

/// Order of vanishing of a hypersurface's reduced form at an `F_p`-point.
pub fn hypersurface_order(model: &IntegralModel, p: u64, pt: &FpPoint) -> Result<u32> {
    let gens = reduce_mod_p(model, p)?;
    let local = local_generators(&gens, pt);
    local[0].min_degree().ok_or(Error::ZeroPolynomial)
}

/// One prime with its chosen point and multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub p: u64,
    pub point: FpPoint,
    pub mu: u32,
}

/// Points specializing to prescribed `F_p`-points at distinct primes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceClass {
    pub entries: Vec<ClassEntry>,
}

impl CongruenceClass {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a class, computing each multiplicity and checking the point
    /// lies on the reduction.
    pub fn build(model: &IntegralModel, pts: &[FpPoint]) -> Result<Self> {
        let mut entries = Vec::new();
        for pt in pts {
            if entries.iter().any(|e: &ClassEntry| e.p == pt.p) {
                return Err(Error::Invalid(format!("prime {} repeated in class", pt.p)));
            }
            let mu = multiplicity(model, pt.p, pt)?;
            entries.push(ClassEntry {
                p: pt.p,
                point: pt.clone(),
                mu,
            });
        }
        Ok(CongruenceClass { entries })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when the primitive point specializes to every class point.
    pub fn admits(&self, pt: &IntPoint) -> bool {
        self.entries
            .iter()
            .all(|e| specialize(pt, e.p).is_ok_and(|s| s == e.point))
    }
}

/// Exact rational evaluation helper.
pub fn rational_point(pt: &IntPoint) -> Vec<BigRational> {
    pt.coords()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}
