use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use super::curve::curve_tally;
use super::report::{CountReport, Mode, Query, Tally, TraceStep};
use super::{PipelineOptions, EXCEPTIONAL_CAP, SCAN_CAP};
use crate::detmethod::{aux_form_for_points, kernel_form_coeffs, prime_window, window_threshold, EvalMatrix};
use crate::enumerate::{affine_count, fibration_count_where, projective_enum, BoxBounds, PointPredicate};
use crate::error::{Error, Result};
use crate::geometry::{abs_irreducibility_probe, good_point_filter, lines_on_surface_finite, Irreducibility};
use crate::monomial::MonomialOrder;
use crate::point::IntPoint;
use crate::poly::{QPoly, VarStyle, ZPoly};
use crate::staircase::buchberger;
use crate::zmodel::{fp_points, multiplicity, specialize, ClassEntry, CongruenceClass, FpPoint, IntegralModel};

/// Integer zeros of an affine polynomial in three variables with
/// `|y_i| <= B`.
pub fn count_surface(f: &ZPoly, b: i64, opts: &PipelineOptions) -> Result<CountReport> {
    let started = Instant::now();
    let query = Query {
        poly: f.to_string(),
        b,
        mode: Mode::Affine,
    };
    let tally = surface_tally(f, b, None, opts, true)?;
    let mut report = tally.into_report(query, opts.seed, started);
    if opts.oracle_check {
        let oracle = affine_count(f, b, false, opts.enumerate)?.count;
        report.cross_check(oracle)?;
    }
    report.wall_time_s = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Hypothesis gate for an affine surface: absolute irreducibility is not
/// refuted and the projective closure holds finitely many lines.
pub(crate) fn surface_gate(f: &ZPoly, seed: u64) -> Result<Vec<String>> {
    let d = f.total_degree().ok_or(Error::ZeroPolynomial)?;
    let mut warnings = Vec::new();
    match abs_irreducibility_probe(f, 3, seed)? {
        Irreducibility::Refuted { primes } => {
            return Err(Error::HypothesisViolation(format!(
                "not absolutely irreducible (reducible modulo {primes:?})"
            )))
        }
        Irreducibility::Inconclusive => warnings.push("absolute irreducibility not certified".into()),
        Irreducibility::Certified { .. } => {}
    }
    let closure = f.homogenize(d)?;
    if !lines_on_surface_finite(&closure)?.finite {
        return Err(Error::HypothesisViolation("surface contains infinitely many lines".into()));
    }
    Ok(warnings)
}

fn to_y(p: &IntPoint) -> Vec<i64> {
    p.coords()[1..].iter().map(|v| i64::try_from(v).unwrap()).collect()
}

fn tally_points(points: &[IntPoint], pred: Option<PointPredicate>) -> Tally {
    let mut t = Tally::default();
    for p in points {
        t.points.record(pred, &to_y(p));
    }
    t
}

pub(crate) fn surface_tally(
    f: &ZPoly,
    b: i64,
    pred: Option<PointPredicate>,
    opts: &PipelineOptions,
    gate: bool,
) -> Result<Tally> {
    if f.arity() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            got: f.arity(),
        });
    }
    if b < 1 {
        return Err(Error::Invalid("B must be at least 1".into()));
    }
    let d = f.total_degree().ok_or(Error::ZeroPolynomial)?;
    if d < 4 {
        return Err(Error::Precondition(format!("degree {d} is below 4")));
    }
    let mut out = Tally::default();
    if gate {
        out.warnings.extend(surface_gate(f, opts.seed)?);
    }
    let big_f = f.homogenize(d)?.with_style(VarStyle::Projective);
    let x = IntegralModel::hypersurface(&big_f)?;
    let bounds = BoxBounds::uniform(4, b);
    let s = projective_enum(&x, &bounds, None, true, opts.enumerate)?;

    // A second form of degree d through every point puts them on a curve.
    let gb = buchberger(&[big_f.to_rational()], MonomialOrder::GradedRevLex)?;
    let mons = gb.standard_monomials(d)?;
    let m = EvalMatrix::new(&s.points, &mons)?;
    let (rank, kernel) = kernel_form_coeffs(&m.entries, mons.len());
    if let Some(c) = kernel {
        let g = ZPoly::from_terms(
            4,
            VarStyle::Projective,
            mons.iter().zip(&c).filter(|(_, v)| !num_traits::Zero::is_zero(*v)).map(|(e, v)| (e.clone(), v.clone())),
        );
        let w = IntegralModel::new(&[big_f.to_rational(), g.to_rational()])?;
        let (_, points) = fibration_count_where(&w, b, EXCEPTIONAL_CAP, &[], pred, opts.enumerate)?;
        if points.raw != s.len() as u64 {
            return Err(Error::Invalid(format!(
                "curve count {} differs from surface points {}",
                points.raw,
                s.len()
            )));
        }
        out.points.merge(&points);
        out.trace.push(TraceStep::new(
            "second form",
            json!({"degree": d, "form": g.to_string(), "points": s.len(), "rank": rank, "curve_degree": w.degree()}),
        ));
        return Ok(out);
    }

    // Congruence classes modulo a prime from the window.
    let threshold = window_threshold(b as f64, d as u64, opts.eps);
    let window = prime_window(threshold.max(d as f64 + 1.0), opts.window)?;
    let q = window
        .iter()
        .copied()
        .find(|&q| crate::zmodel::reduce_mod_p(&x, q).is_ok())
        .ok_or_else(|| Error::Inconclusive("no usable prime in window".into()))?;
    let mut parts: BTreeMap<FpPoint, Vec<IntPoint>> = BTreeMap::new();
    for pt in &s.points {
        parts.entry(specialize(pt, q)?).or_default().push(pt.clone());
    }
    let qpts = fp_points(&x, q, true, 1, SCAN_CAP)?;
    let (good, bad) = good_point_filter(&x, q, &qpts)?;
    let empty_good = good.iter().filter(|r| !parts.contains_key(&r.point)).count();
    let mut bad_points = 0u64;
    for r in &bad {
        if let Some(sq) = parts.get(&r.point) {
            bad_points += sq.len() as u64;
            out.absorb(tally_points(sq, pred));
        }
    }
    let work: Vec<(&FpPoint, &Vec<IntPoint>)> = good
        .iter()
        .filter_map(|r| parts.get(&r.point).map(|sq| (&r.point, sq)))
        .collect();
    let run = |(qp, sq): (&FpPoint, &Vec<IntPoint>)| good_class(&x, &big_f, b, q, qp, sq, pred, opts);
    let results: Vec<Result<Tally>> = if opts.enumerate.parallel {
        work.par_iter().map(|&w| run(w)).collect()
    } else {
        work.iter().map(|&w| run(w)).collect()
    };
    for r in results {
        out.absorb(r?);
    }
    out.trace.insert(
        0,
        TraceStep::new(
            "congruence classes",
            json!({
                "points": s.len(),
                "second_form_rank": rank,
                "threshold": threshold,
                "window": window,
                "q": q,
                "good": good.len(),
                "good_nonempty": good.len() - empty_good,
                "bad": bad.len(),
                "bad_points": bad_points,
            }),
        ),
    );
    Ok(out)
}

/// A good class: an auxiliary form cuts out a curve through the class,
/// whose multiplicity at the class point obeys `2 mu <= deg`, and the
/// class is counted on that curve.
#[allow(clippy::too_many_arguments)]
fn good_class(
    x: &IntegralModel,
    big_f: &ZPoly,
    b: i64,
    q: u64,
    qp: &FpPoint,
    sq: &[IntPoint],
    pred: Option<PointPredicate>,
    opts: &PipelineOptions,
) -> Result<Tally> {
    let bounds = BoxBounds::uniform(4, b);
    let cls = CongruenceClass::build(x, std::slice::from_ref(qp))?;
    let cert = match aux_form_for_points(x, &bounds, &cls, sq, opts.k_cap, opts.eps) {
        Ok(c) => c,
        Err(Error::CapExceeded { .. }) => {
            let mut t = tally_points(sq, pred);
            t.trace.push(TraceStep::new("class fallback", json!({"point": qp.to_string()})));
            return Ok(t);
        }
        Err(e) => return Err(e),
    };
    let gens: Vec<QPoly> = vec![big_f.to_rational(), cert.form.to_rational()];
    let w = IntegralModel::new(&gens)?;
    let mu = multiplicity(&w, q, qp)?;
    let entry = ClassEntry {
        p: q,
        point: qp.clone(),
        mu,
    };
    let mut t = curve_tally(&w, b, Some(&entry), pred, opts)?;
    if t.points.raw != sq.len() as u64 {
        return Err(Error::Invalid(format!(
            "class {qp}: curve count {} differs from class size {}",
            t.points.raw,
            sq.len()
        )));
    }
    let bound_ok = 2 * mu as u64 <= w.degree();
    if !bound_ok {
        t.warnings.push(format!("multiplicity {mu} above half the degree {} at {qp}", w.degree()));
    }
    let mut j = cert.to_json();
    j["curve_degree"] = json!(w.degree());
    j["curve_multiplicity"] = json!(mu);
    j["multiplicity_bound_ok"] = json!(bound_ok);
    t.certificates.push(j);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_integer;

    fn checked() -> PipelineOptions {
        PipelineOptions {
            oracle_check: true,
            ..Default::default()
        }
    }

    #[test]
    fn fermat_type_quartic_matches_enumeration() {
        let f = parse_integer("y1^4 + y2^4 - y3^4 - 1", 3).unwrap();
        let r = count_surface(&f, 100, &checked()).unwrap();
        assert_eq!(r.oracle_agrees(), Some(true), "{:?}", r.trace);
    }

    #[test]
    fn small_box_takes_second_form_branch() {
        let f = parse_integer("y1^4 + 2*y2^4 + 3*y3^4 - 6", 3).unwrap();
        let r = count_surface(&f, 3, &checked()).unwrap();
        assert_eq!(r.count, 8);
        assert_eq!(r.trace[0].branch, "second form");
    }

    #[test]
    fn reducible_input_is_rejected() {
        let g = parse_integer("y1^3 + y2^3 + y3^3 + 1", 3).unwrap();
        let l = parse_integer("y1 + y2", 3).unwrap();
        let f = l.mul(&g);
        let e = count_surface(&f, 10, &checked()).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolation(_)), "{e}");
    }
}
