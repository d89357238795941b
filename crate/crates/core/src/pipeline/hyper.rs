use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::report::{CountReport, Mode, Query, Tally, TraceStep};
use super::surface::surface_tally;
use super::PipelineOptions;
use crate::enumerate::{affine_count, PointPredicate};
use crate::error::{Error, Result};
use crate::geometry::{abs_irreducibility_probe, Irreducibility};
use crate::poly::{Polynomial, QPoly, VarStyle, ZPoly};

/// Seeded primitive direction with entries in `{-1, 0, 1}`, last entry
/// nonzero and at least two nonzero entries when `n >= 2`.
pub fn slice_direction(n: usize, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut a: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        if a[n - 1] == 0 {
            a[n - 1] = 1;
        }
        if n < 2 || a.iter().filter(|&&v| v != 0).count() >= 2 {
            return a;
        }
    }
}

/// `a_n^d f(y_1, .., y_{n-1}, (b - sum_{i<n} a_i y_i) / a_n)`.
pub fn slice_polynomial(f: &ZPoly, a: &[i64], b: i64) -> Result<ZPoly> {
    let n = f.arity();
    if a.len() != n || a[n - 1] == 0 {
        return Err(Error::Invalid("direction must match the arity and end in a nonzero entry".into()));
    }
    let d = f.total_degree().ok_or(Error::ZeroPolynomial)?;
    let m = n - 1;
    let one = BigRational::one();
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let an = q(a[n - 1]);
    let mut subs: Vec<QPoly> = (0..m).map(|i| Polynomial::var(i, m, VarStyle::Affine, &one)).collect();
    let mut last = Polynomial::constant(q(b) / &an, m, VarStyle::Affine);
    for (i, &ai) in a[..m].iter().enumerate() {
        if ai != 0 {
            last = last.sub(&Polynomial::var(i, m, VarStyle::Affine, &one).scale(&(q(ai) / &an)));
        }
    }
    subs.push(last);
    let g = f.to_rational().substitute(&subs).scale(&an.pow(d as i32));
    let mut out = ZPoly::zero(m, VarStyle::Affine);
    for (e, c) in g.terms() {
        if !c.is_integer() {
            return Err(Error::Invalid("slice polynomial is not integral".into()));
        }
        out = out.add(&ZPoly::monomial(e.clone(), c.to_integer(), VarStyle::Affine));
    }
    Ok(out)
}

/// Integer zeros of an affine polynomial in `n >= 4` variables with
/// `|y_i| <= B`, summed over hyperplane slices.
pub fn count_hypersurface(f: &ZPoly, b: i64, opts: &PipelineOptions) -> Result<CountReport> {
    let started = Instant::now();
    if f.arity() < 4 {
        return Err(Error::Invalid("expected at least four variables".into()));
    }
    let query = Query {
        poly: f.to_string(),
        b,
        mode: Mode::Affine,
    };
    if !opts.assert_planes_finite {
        return Err(Error::HypothesisViolation(
            "finiteness of codimension-one linear subspaces must be asserted".into(),
        ));
    }
    let mut warnings = vec!["linear subspace finiteness accepted on assertion".to_string()];
    match abs_irreducibility_probe(f, 3, opts.seed)? {
        Irreducibility::Refuted { .. } => {
            return Err(Error::HypothesisViolation("not absolutely irreducible".into()));
        }
        Irreducibility::Inconclusive => warnings.push("absolute irreducibility not certified".into()),
        Irreducibility::Certified { .. } => {}
    }
    let mut tally = hypersurface_tally(f, b, None, opts)?;
    tally.warnings.splice(0..0, warnings);
    let slice_sum = tally.points.raw;
    let mut report = tally.into_report(query, opts.seed, started);
    report.bounds.push(("sum of slice counts".into(), slice_sum));
    if opts.oracle_check {
        let oracle = affine_count(f, b, false, opts.enumerate)?.count;
        report.cross_check(oracle)?;
    }
    report.wall_time_s = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Outcome of one slice.
struct SliceResult {
    b: i64,
    tally: Tally,
    bad: Option<String>,
}

pub(crate) fn hypersurface_tally(
    f: &ZPoly,
    b: i64,
    pred: Option<PointPredicate>,
    opts: &PipelineOptions,
) -> Result<Tally> {
    let n = f.arity();
    if n == 3 {
        return surface_tally(f, b, pred, opts, true);
    }
    if n < 3 {
        return Err(Error::Invalid("expected at least three variables".into()));
    }
    let a = slice_direction(n, opts.seed);
    let c: i64 = a.iter().map(|v| v.abs()).sum();
    let an = a[n - 1];
    let run = |bv: i64| -> Result<SliceResult> {
        let fb = slice_polynomial(f, &a, bv)?;
        let valid = |y: &[i64]| -> Option<bool> {
            let num = bv - y.iter().zip(&a).map(|(yi, ai)| yi * ai).sum::<i64>();
            if num % an != 0 {
                return None;
            }
            let yn = num / an;
            if yn.abs() > b {
                return None;
            }
            match pred {
                None => Some(true),
                Some(p) => {
                    let mut full = y.to_vec();
                    full.push(yn);
                    p(&full)
                }
            }
        };
        slice_count(&fb, b, &valid, opts).map(|(tally, bad)| SliceResult { b: bv, tally, bad })
    };
    let bs: Vec<i64> = (-c * b..=c * b).collect();
    let results: Vec<Result<SliceResult>> = if opts.enumerate.parallel {
        bs.par_iter().map(|&v| run(v)).collect()
    } else {
        bs.iter().map(|&v| run(v)).collect()
    };
    let mut out = Tally::default();
    let mut bad = Vec::new();
    for r in results {
        let r = r?;
        if let Some(reason) = r.bad {
            bad.push(json!({"b": r.b, "reason": reason, "count": r.tally.points.kept}));
        }
        out.absorb(r.tally);
    }
    if bad.len() > opts.bad_slice_warn {
        out.warnings.push(format!("{} bad slices exceed the threshold {}", bad.len(), opts.bad_slice_warn));
    }
    out.trace.insert(
        0,
        TraceStep::new(
            "slices",
            json!({"arity": n, "direction": a, "c": c, "slices": bs.len(), "bad_slices": bad}),
        ),
    );
    Ok(out)
}

/// Counts one slice by recursion, or exhaustively when it fails the
/// slice-level hypotheses.
fn slice_count(
    fb: &ZPoly,
    b: i64,
    valid: PointPredicate,
    opts: &PipelineOptions,
) -> Result<(Tally, Option<String>)> {
    if fb.is_zero() {
        return Err(Error::Invalid("hyperplane lies on the hypersurface".into()));
    }
    if fb.total_degree() == Some(0) {
        return Ok((Tally::default(), None));
    }
    let inner = if fb.arity() == 3 {
        surface_tally(fb, b, Some(valid), opts, true)
    } else {
        match abs_irreducibility_probe(fb, 3, opts.seed)? {
            Irreducibility::Refuted { .. } => Err(Error::HypothesisViolation("slice reducible".into())),
            _ => hypersurface_tally(fb, b, Some(valid), opts),
        }
    };
    match inner {
        Ok(t) => Ok((t, None)),
        Err(e @ (Error::HypothesisViolation(_) | Error::Precondition(_) | Error::Inconclusive(_) | Error::BadPrime { .. })) => {
            let pts = affine_count(fb, b, true, opts.enumerate)?.points.unwrap_or_default();
            let mut t = Tally::default();
            for p in &pts {
                let y: Vec<i64> = p.coords().iter().map(|v| i64::try_from(v).unwrap()).collect();
                t.points.record(Some(valid), &y);
            }
            Ok((t, Some(e.to_string())))
        }
        Err(e) => Err(e),
    }
}
