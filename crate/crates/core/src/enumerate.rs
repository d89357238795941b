//! Brute-force point enumeration: affine boxes, projective boxes with
//! congruence filters, and curve counts by slicing.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::IntPoint;
use crate::poly::ZPoly;
use crate::roots::integer_roots_in_range;
use crate::zmodel::{reduce_mod_p, CongruenceClass, FpEval, IntegralModel};

pub const DEFAULT_WORK_CAP: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    pub work_cap: u128,
    pub parallel: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            work_cap: DEFAULT_WORK_CAP,
            parallel: true,
        }
    }
}

/// Per-coordinate height bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxBounds {
    pub bounds: Vec<i64>,
}

impl BoxBounds {
    pub fn new(bounds: Vec<i64>) -> Result<Self> {
        if bounds.iter().any(|&b| b < 1) {
            return Err(Error::Invalid("box bounds must be at least 1".into()));
        }
        Ok(BoxBounds { bounds })
    }

    pub fn uniform(arity: usize, b: i64) -> Self {
        BoxBounds {
            bounds: vec![b.max(1); arity],
        }
    }
}

/// Compiled integer polynomial: checked `i128` evaluation with a `BigInt`
/// fallback on overflow.
#[derive(Clone, Debug)]
pub struct IntEval {
    terms: Vec<(Vec<u32>, BigInt, Option<i128>)>,
}

impl IntEval {
    pub fn new(f: &ZPoly) -> Self {
        IntEval {
            terms: f
                .terms()
                .map(|(e, c)| (e.exps().to_vec(), c.clone(), c.to_i128()))
                .collect(),
        }
    }

    fn eval_small(&self, x: &[i64]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (e, _, c) in &self.terms {
            let mut t = (*c)?;
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.checked_mul(x[i] as i128)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    pub fn eval(&self, x: &[i64]) -> BigInt {
        match self.eval_small(x) {
            Some(v) => BigInt::from(v),
            None => {
                let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
                self.terms
                    .iter()
                    .map(|(e, c, _)| {
                        e.iter()
                            .enumerate()
                            .fold(c.clone(), |acc, (i, &k)| acc * xb[i].pow(k))
                    })
                    .sum()
            }
        }
    }

    pub fn is_zero_at(&self, x: &[i64]) -> bool {
        match self.eval_small(x) {
            Some(v) => v == 0,
            None => self.eval(x).is_zero(),
        }
    }
}

/// A polynomial split by powers of its last variable, each coefficient
/// compiled over the preceding variables.
struct LastVarSplit {
    coeffs: Vec<IntEval>,
}

impl LastVarSplit {
    fn new(f: &ZPoly) -> Self {
        let n = f.arity();
        let deg = f.degree_in(n - 1).unwrap_or(0) as usize;
        let coeffs = (0..=deg)
            .map(|k| {
                let part = ZPoly::from_terms(
                    n,
                    f.style(),
                    f.terms()
                        .filter(|(e, _)| e.get(n - 1) as usize == k)
                        .map(|(e, c)| (e.remove(n - 1).insert(n - 1, 0), c.clone())),
                );
                IntEval::new(&part)
            })
            .collect();
        LastVarSplit { coeffs }
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Values of the last coordinate in `[lo, hi]` solving `f = 0` given the
    /// prefix (the last slot of `x` is ignored). `None` means every value works.
    fn solve(&self, x: &mut [i64], lo: i64, hi: i64) -> Option<Vec<i64>> {
        let n = x.len();
        x[n - 1] = 0;
        let c: Vec<BigInt> = self.coeffs.iter().map(|e| e.eval(x)).collect();
        let deg = c.iter().rposition(|v| !v.is_zero())?;
        let mut out = Vec::new();
        match deg {
            0 => {}
            1 => {
                let (q, r) = (-&c[0]).div_rem(&c[1]);
                if r.is_zero() {
                    if let Some(v) = q.to_i64() {
                        if lo <= v && v <= hi {
                            out.push(v);
                        }
                    }
                }
            }
            2 => {
                let disc = &c[1] * &c[1] - BigInt::from(4) * &c[0] * &c[2];
                if !disc.is_negative() {
                    let s = disc.sqrt();
                    if &s * &s == disc {
                        for num in [-&c[1] + &s, -&c[1] - &s] {
                            let den = BigInt::from(2) * &c[2];
                            let (q, r) = num.div_rem(&den);
                            if r.is_zero() {
                                if let Some(v) = q.to_i64() {
                                    if lo <= v && v <= hi && !out.contains(&v) {
                                        out.push(v);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            _ => {
                for v in lo..=hi {
                    let xv = BigInt::from(v);
                    let val = c.iter().rev().fold(BigInt::zero(), |acc, a| acc * &xv + a);
                    if val.is_zero() {
                        out.push(v);
                    }
                }
            }
        }
        out.sort();
        Some(out)
    }
}

/// Result of an affine box count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCount {
    pub count: u64,
    pub points: Option<Vec<IntPoint>>,
}

/// Number of integer tuples in `[-B, B]^n` on `f = 0`.
pub fn affine_count(f: &ZPoly, b: i64, keep_points: bool, opts: EnumOptions) -> Result<AffineCount> {
    if b < 1 {
        return Err(Error::Invalid("B must be at least 1".into()));
    }
    let n = f.arity();
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let side = (2 * b + 1) as u128;
    if n == 0 {
        return Ok(AffineCount {
            count: 0,
            points: keep_points.then(Vec::new),
        });
    }
    let split = LastVarSplit::new(f);
    let solving = split.degree() <= 2;
    let work = side.pow(n as u32 - 1) * if solving { 1 } else { side };
    if work > opts.work_cap {
        return Err(Error::WorkCap {
            needed: work,
            cap: opts.work_cap,
        });
    }
    let shard = |first: i64| -> (u64, Vec<IntPoint>) {
        let mut count = 0u64;
        let mut pts = Vec::new();
        let mut x = vec![0i64; n];
        if n == 1 {
            // Single variable: the prefix is empty.
            if first != -b {
                return (0, pts);
            }
        } else {
            x[0] = first;
        }
        let free = n.saturating_sub(2);
        let mut idx = vec![-b; free];
        loop {
            for (j, &v) in idx.iter().enumerate() {
                x[1 + j] = v;
            }
            match split.solve(&mut x, -b, b) {
                None => {
                    count += side as u64;
                    if keep_points {
                        for v in -b..=b {
                            x[n - 1] = v;
                            pts.push(IntPoint::from_i64(&x));
                        }
                    }
                }
                Some(vals) => {
                    count += vals.len() as u64;
                    if keep_points {
                        for v in vals {
                            x[n - 1] = v;
                            pts.push(IntPoint::from_i64(&x));
                        }
                    }
                }
            }
            if !advance(&mut idx, -b, b) {
                break;
            }
        }
        (count, pts)
    };
    let firsts: Vec<i64> = (-b..=b).collect();
    let results: Vec<(u64, Vec<IntPoint>)> = if opts.parallel {
        firsts.par_iter().map(|&a| shard(a)).collect()
    } else {
        firsts.iter().map(|&a| shard(a)).collect()
    };
    let count = results.iter().map(|r| r.0).sum();
    let points = keep_points.then(|| {
        let mut all: Vec<IntPoint> = results.into_iter().flat_map(|r| r.1).collect();
        all.sort();
        all
    });
    Ok(AffineCount { count, points })
}

/// Odometer over `idx` in `[lo, hi]^k`; false when exhausted.
fn advance(idx: &mut [i64], lo: i64, hi: i64) -> bool {
    for v in idx.iter_mut().rev() {
        if *v < hi {
            *v += 1;
            return true;
        }
        *v = lo;
    }
    false
}

/// Query describing a projective enumeration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumQuery {
    pub bounds: BoxBounds,
    pub class: CongruenceClass,
    pub chart1: bool,
}

/// Primitive points, one per sign pair, sorted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<IntPoint>,
    pub query: EnumQuery,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            let row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn summary_json(&self, wall_time_s: f64) -> serde_json::Value {
        serde_json::json!({
            "query": self.query,
            "count": self.points.len(),
            "wall_time": wall_time_s,
        })
    }
}

/// All primitive points of the model in the box, normalized so the first
/// nonzero coordinate is positive, filtered by the congruence class.
/// With `chart1`, only representatives with `x_0 = 1`.
pub fn projective_enum(
    model: &IntegralModel,
    bounds: &BoxBounds,
    class: Option<&CongruenceClass>,
    chart1: bool,
    opts: EnumOptions,
) -> Result<PointSet> {
    let n = model.arity();
    if bounds.bounds.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: bounds.bounds.len(),
        });
    }
    let class = class.cloned().unwrap_or_default();
    for e in &class.entries {
        let gens = reduce_mod_p(model, e.p)?;
        let on = gens
            .iter()
            .all(|g| FpEval::new(g, e.p).eval(&e.point.coords) == 0);
        if !on {
            return Err(Error::Precondition(format!(
                "class point {} is not on the model",
                e.point
            )));
        }
    }
    let bs = &bounds.bounds;
    let split = LastVarSplit::new(&model.generators()[0]);
    let solving = split.degree() <= 2;
    let mut work: u128 = 1;
    for (i, &b) in bs.iter().enumerate() {
        let side = if i == 0 {
            if chart1 {
                1
            } else {
                b as u128 + 1
            }
        } else {
            2 * b as u128 + 1
        };
        if !(solving && i == n - 1) {
            work = work.saturating_mul(side);
        }
    }
    if work > opts.work_cap {
        return Err(Error::WorkCap {
            needed: work,
            cap: opts.work_cap,
        });
    }
    let others: Vec<IntEval> = model.generators()[1..].iter().map(IntEval::new).collect();
    let shard = |x0: i64| -> Vec<IntPoint> {
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        x[0] = x0;
        if n == 1 {
            if x0 == 1 && split.coeffs[0].is_zero_at(&x) {
                out.push(IntPoint::from_i64(&x));
            }
            return out;
        }
        let mid = n - 2;
        let mut idx: Vec<i64> = (1..=mid).map(|i| -bs[i]).collect();
        loop {
            for (j, &v) in idx.iter().enumerate() {
                x[1 + j] = v;
            }
            let prefix_zero = x[..n - 1].iter().all(|&v| v == 0);
            let prefix_sign_ok = match x[..n - 1].iter().find(|&&v| v != 0) {
                Some(&v) => v > 0,
                None => true,
            };
            if prefix_sign_ok {
                let last_b = bs[n - 1];
                let lo = if prefix_zero { 1 } else { -last_b };
                let cands: Vec<i64> = match split.solve(&mut x, lo, last_b) {
                    None => (lo..=last_b).collect(),
                    Some(v) => v,
                };
                for v in cands {
                    x[n - 1] = v;
                    if gcd_i64(&x) != 1 {
                        continue;
                    }
                    if !others.iter().all(|g| g.is_zero_at(&x)) {
                        continue;
                    }
                    let pt = IntPoint::from_i64(&x);
                    if class.admits(&projective(&pt)) {
                        out.push(projective(&pt));
                    }
                }
            }
            if !advance_mixed(&mut idx, &bs[1..=mid]) {
                break;
            }
        }
        out
    };
    let firsts: Vec<i64> = if chart1 { vec![1] } else { (0..=bs[0]).collect() };
    let mut points: Vec<IntPoint> = if opts.parallel {
        firsts.par_iter().flat_map(|&a| shard(a)).collect()
    } else {
        firsts.iter().flat_map(|&a| shard(a)).collect()
    };
    points.sort();
    Ok(PointSet {
        points,
        query: EnumQuery {
            bounds: bounds.clone(),
            class,
            chart1,
        },
    })
}

fn projective(pt: &IntPoint) -> IntPoint {
    IntPoint::projective(pt.coords().to_vec()).expect("primitive by construction")
}

fn advance_mixed(idx: &mut [i64], bounds: &[i64]) -> bool {
    for (v, &b) in idx.iter_mut().zip(bounds).rev() {
        if *v < b {
            *v += 1;
            return true;
        }
        *v = -b;
    }
    false
}

fn gcd_i64(x: &[i64]) -> i64 {
    x.iter().fold(0i64, |a, &b| a.gcd(&b))
}

/// Result of a sliced curve count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationCount {
    pub count: u64,
    /// Slices `(a, b)` along which the curve contains the whole line.
    pub positive_dim_slices: Vec<(i64, i64)>,
}

/// Restricts residues of the slice parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceFilter {
    pub p: u64,
    /// Residues of `(y1, y2, y3)` in the chart `x0 = 1`.
    pub residues: [u64; 3],
}

/// Points `(1, y1, y2, y3)` with `|y_i| <= B` on a curve in P^3, counted by
/// slicing `y3 = a`, then `y2 = b`, and solving for `y1`.
pub fn fibration_count(
    model: &IntegralModel,
    b: i64,
    exceptional_cap: usize,
    filters: &[SliceFilter],
    opts: EnumOptions,
) -> Result<FibrationCount> {
    Ok(fibration_count_where(model, b, exceptional_cap, filters, None, opts)?.0)
}

/// Classifies affine points: `None` rejects, `Some(mark)` keeps.
pub type PointPredicate<'a> = &'a (dyn Fn(&[i64]) -> Option<bool> + Sync);

/// Points seen, kept by a predicate, and kept with a mark.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointTally {
    pub raw: u64,
    pub kept: u64,
    pub marked: u64,
}

impl PointTally {
    pub fn record(&mut self, pred: Option<PointPredicate>, y: &[i64]) {
        self.raw += 1;
        match pred.map_or(Some(true), |f| f(y)) {
            Some(true) => {
                self.kept += 1;
                self.marked += 1;
            }
            Some(false) => self.kept += 1,
            None => {}
        }
    }

    pub fn merge(&mut self, o: &PointTally) {
        self.raw += o.raw;
        self.kept += o.kept;
        self.marked += o.marked;
    }
}

/// As [`fibration_count`], also tallying the points on `(y1, y2, y3)`
/// against a predicate.
pub fn fibration_count_where(
    model: &IntegralModel,
    b: i64,
    exceptional_cap: usize,
    filters: &[SliceFilter],
    pred: Option<PointPredicate>,
    opts: EnumOptions,
) -> Result<(FibrationCount, PointTally)> {
    if model.arity() != 4 {
        return Err(Error::Invalid("fibration count expects a model in P^3".into()));
    }
    if model.dim() > 1 {
        return Err(Error::Precondition("fibration count needs a curve".into()));
    }
    let side = (2 * b + 1) as u128;
    if side * side > opts.work_cap {
        return Err(Error::WorkCap {
            needed: side * side,
            cap: opts.work_cap,
        });
    }
    // Each generator as a polynomial in y1 with coefficients in (y2, y3).
    let splits: Vec<Vec<IntEval>> = model
        .generators()
        .iter()
        .map(|g| {
            let deg = g.degree_in(1).unwrap_or(0);
            (0..=deg)
                .map(|k| {
                    let part = ZPoly::from_terms(
                        4,
                        g.style(),
                        g.terms()
                            .filter(|(e, _)| e.get(1) == k)
                            .map(|(e, c)| {
                                (crate::monomial::ExponentVec::new(vec![0, 0, e.get(2), e.get(3)]), c.clone())
                            }),
                    );
                    IntEval::new(&part)
                })
                .collect()
        })
        .collect();
    let admits = |v: i64, slot: usize| {
        filters
            .iter()
            .all(|f| v.rem_euclid(f.p as i64) as u64 == f.residues[slot])
    };
    let exceptional = AtomicU64::new(0);
    let lo = BigInt::from(-b);
    let hi = BigInt::from(b);
    let row = |a: i64| -> Result<(PointTally, Vec<(i64, i64)>)> {
        let mut tally = PointTally::default();
        let mut bad = Vec::new();
        if !admits(a, 2) {
            return Ok((tally, bad));
        }
        for bb in -b..=b {
            if !admits(bb, 1) {
                continue;
            }
            let x = [1i64, 0, bb, a];
            let polys: Vec<Vec<BigInt>> = splits
                .iter()
                .map(|s| s.iter().map(|e| e.eval(&x)).collect())
                .collect();
            let nonzero: Vec<&Vec<BigInt>> = polys.iter().filter(|c| c.iter().any(|v| !v.is_zero())).collect();
            let ys: Vec<i64> = match nonzero.first() {
                None => {
                    bad.push((bb, a));
                    let k = exceptional.fetch_add(1, Ordering::Relaxed) as usize + 1;
                    if k > exceptional_cap {
                        return Err(Error::CapExceeded {
                            what: "positive-dimensional slices".into(),
                            cap: exceptional_cap as u128,
                        });
                    }
                    (-b..=b).collect()
                }
                Some(first) => integer_roots_in_range(first, &lo, &hi)?
                    .into_iter()
                    .map(|r| r.to_i64().unwrap())
                    .filter(|&y| {
                        let yb = BigInt::from(y);
                        nonzero[1..]
                            .iter()
                            .all(|c| crate::roots::eval_int(c, &yb).is_zero())
                    })
                    .collect(),
            };
            for y in ys.into_iter().filter(|&y| admits(y, 0)) {
                tally.record(pred, &[y, bb, a]);
            }
        }
        Ok((tally, bad))
    };
    let avals: Vec<i64> = (-b..=b).collect();
    let rows: Vec<Result<(PointTally, Vec<(i64, i64)>)>> = if opts.parallel {
        avals.par_iter().map(|&a| row(a)).collect()
    } else {
        avals.iter().map(|&a| row(a)).collect()
    };
    let mut tally = PointTally::default();
    let mut slices = Vec::new();
    for r in rows {
        let (t, s) = r?;
        tally.merge(&t);
        slices.extend(s);
    }
    slices.sort();
    Ok((
        FibrationCount {
            count: tally.raw,
            positive_dim_slices: slices,
        },
        tally,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_integer, parse_rational};
    use crate::poly::QPoly;
    use crate::zmodel::{fp_points, ClassEntry, FpPoint};

    fn model(s: &[&str], n: usize) -> IntegralModel {
        let gens: Vec<QPoly> = s.iter().map(|t| parse_rational(t, n).unwrap()).collect();
        IntegralModel::new(&gens).unwrap()
    }

    fn serial() -> EnumOptions {
        EnumOptions {
            parallel: false,
            ..Default::default()
        }
    }

    /// Oracle: plain nested loops, no solving.
    fn brute_affine(f: &ZPoly, b: i64) -> u64 {
        let n = f.arity();
        let ev = IntEval::new(f);
        let mut idx = vec![-b; n];
        let mut c = 0;
        loop {
            if ev.is_zero_at(&idx) {
                c += 1;
            }
            if !advance(&mut idx, -b, b) {
                break;
            }
        }
        c
    }

    #[test]
    fn affine_examples() {
        let f = parse_integer("y1 + y2 + y3", 3).unwrap();
        assert_eq!(affine_count(&f, 1, false, serial()).unwrap().count, 7);
        let g = parse_integer("y1^2 + y2^2 + 1", 2).unwrap();
        assert_eq!(affine_count(&g, 20, false, serial()).unwrap().count, 0);
        let h = parse_integer("y1*y2 - 1", 2).unwrap();
        let r = affine_count(&h, 10, true, serial()).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.count, brute_affine(&h, 10));
        let big = parse_integer("y1 + y2 + y3 + y4 + y5", 5).unwrap();
        let capped = EnumOptions {
            work_cap: 1000,
            parallel: false,
        };
        assert!(matches!(affine_count(&big, 10, false, capped), Err(Error::WorkCap { .. })));
    }

    #[test]
    fn affine_matches_brute_force() {
        for (s, n, b) in [
            ("y1^2 - y2^3 + y3", 3, 6),
            ("y1^3 + y2^3 + y3^3 - 3*y1*y2*y3", 3, 5),
            ("y1*y2*y3 - y3^2", 3, 4),
            ("y1^4 - y2^4 + y3^2", 3, 4),
        ] {
            let f = parse_integer(s, n).unwrap();
            assert_eq!(affine_count(&f, b, false, serial()).unwrap().count, brute_affine(&f, b), "{s}");
            assert_eq!(
                affine_count(&f, b, false, EnumOptions::default()).unwrap().count,
                brute_affine(&f, b)
            );
        }
    }

    #[test]
    fn projective_line_points() {
        // P^1 embedded as the line x2 = 0 in P^2.
        let m = model(&["x2"], 3);
        let ps = projective_enum(&m, &BoxBounds::uniform(3, 1), None, false, serial()).unwrap();
        let got: Vec<Vec<i64>> = ps
            .points
            .iter()
            .map(|p| p.coords()[..2].iter().map(|c| c.to_i64().unwrap()).collect())
            .collect();
        assert_eq!(got, vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn class_point_must_lie_on_model() {
        let line = model(&["x0 + x1 + x2"], 3);
        let bad = CongruenceClass {
            entries: vec![ClassEntry {
                p: 5,
                point: FpPoint::from_residues(5, &[1, 1, 1]).unwrap(),
                mu: 1,
            }],
        };
        assert!(matches!(
            projective_enum(&line, &BoxBounds::uniform(3, 2), Some(&bad), false, serial()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn conic_class_filter_and_partition() {
        let conic = model(&["x0*x2 - x1^2"], 3);
        let all = projective_enum(&conic, &BoxBounds::uniform(3, 3), None, false, serial()).unwrap();
        // 8 signed tuples, 4 points.
        assert_eq!(all.len(), 4);
        let p = 5;
        let mut total = 0;
        for pt in fp_points(&conic, p, false, 1, 1 << 20).unwrap() {
            let cls = CongruenceClass {
                entries: vec![ClassEntry { p, point: pt.clone(), mu: 1 }],
            };
            let sub = projective_enum(&conic, &BoxBounds::uniform(3, 3), Some(&cls), false, serial()).unwrap();
            for q in &sub.points {
                assert!(all.points.contains(q));
            }
            if pt.coords == vec![1, 1, 1] {
                let expected: Vec<&IntPoint> = all
                    .points
                    .iter()
                    .filter(|q| crate::zmodel::specialize(q, p).unwrap().coords == vec![1, 1, 1])
                    .collect();
                assert_eq!(sub.points.iter().collect::<Vec<_>>(), expected);
            }
            total += sub.len();
        }
        assert_eq!(total, all.len());
    }

    #[test]
    fn parallel_matches_serial_and_height_filter() {
        let f = model(&["x0^2*x3 - x1^3 + x1*x2^2 - x0*x2*x3"], 4);
        let b = BoxBounds::uniform(4, 6);
        let s = projective_enum(&f, &b, None, false, serial()).unwrap();
        let par = projective_enum(&f, &b, None, false, EnumOptions::default()).unwrap();
        assert_eq!(s.points, par.points);
        let small = projective_enum(&f, &BoxBounds::uniform(4, 3), None, false, serial()).unwrap();
        let filtered: Vec<IntPoint> = s
            .points
            .into_iter()
            .filter(|p| p.height() <= BigInt::from(3))
            .collect();
        assert_eq!(filtered, small.points);
    }

    fn chart_count(m: &IntegralModel, b: i64) -> u64 {
        projective_enum(m, &BoxBounds::uniform(4, b), None, true, serial())
            .unwrap()
            .len() as u64
    }

    #[test]
    fn fibration_examples() {
        let line = model(&["x2", "x3"], 4);
        let r = fibration_count(&line, 7, 10, &[], serial()).unwrap();
        assert_eq!(r.count, 15);
        assert_eq!(r.positive_dim_slices, vec![(0, 0)]);
        let tc = model(&["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"], 4);
        let r = fibration_count(&tc, 5, 10, &[], serial()).unwrap();
        assert_eq!(r.count, chart_count(&tc, 5));
        let conic = model(&["x3", "x0^2 + x1^2 - x2^2"], 4);
        let r = fibration_count(&conic, 10, 10, &[], EnumOptions::default()).unwrap();
        assert_eq!(r.count, chart_count(&conic, 10));
    }

    #[test]
    fn fibration_congruence_filter() {
        let tc = model(&["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"], 4);
        let p = 3;
        let b = 9;
        let all = projective_enum(&tc, &BoxBounds::uniform(4, b), None, true, serial()).unwrap();
        let mut total = 0;
        for r1 in 0..p {
            let f = SliceFilter {
                p,
                residues: [r1, (r1 * r1) % p, (r1 * r1 * r1) % p],
            };
            let c = fibration_count(&tc, b, 10, &[f], serial()).unwrap().count;
            let expected = all
                .points
                .iter()
                .filter(|q| q.coords()[1].mod_floor(&BigInt::from(p)) == BigInt::from(r1))
                .count() as u64;
            assert_eq!(c, expected);
            total += c;
        }
        assert_eq!(total, all.len() as u64);
    }
}
