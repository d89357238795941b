use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::json;

use super::projection::project_to_hypersurface;
use super::report::{CountReport, Mode, Query, Tally, TraceStep};
use super::{PipelineOptions, EXCEPTIONAL_CAP, SCAN_CAP};
use crate::detmethod::{aux_form_for_points, prime_window};
use crate::enumerate::{fibration_count_where, projective_enum, BoxBounds, PointPredicate, SliceFilter};
use crate::error::{Error, Result};
use crate::geometry::{abs_irreducibility_probe, Irreducibility};
use crate::point::IntPoint;
use crate::poly::QPoly;
use crate::zmodel::{fp_points, reduce_mod_p, specialize, ClassEntry, CongruenceClass, FpPoint, IntegralModel};

/// Integral over the algebraic closure: a generic plane projection is an
/// absolutely irreducible curve of the same degree.
pub fn curve_is_integral(c: &IntegralModel, seed: u64) -> Result<bool> {
    if c.dim() != 1 {
        return Err(Error::Precondition("expected a curve".into()));
    }
    if c.degree() == 1 {
        return Ok(true);
    }
    let proj = project_to_hypersurface(c, seed, 0)?;
    if !proj.degree_ok {
        return Ok(false);
    }
    Ok(matches!(
        abs_irreducibility_probe(&proj.image, 3, seed)?,
        Irreducibility::Certified { .. }
    ))
}

/// Residue filter for an `F_p`-point in the chart `x0 != 0`; `None` when
/// the point lies at infinity.
pub(crate) fn chart_filter(pt: &FpPoint) -> Option<SliceFilter> {
    if pt.e != 1 || pt.coords[0] != 1 {
        return None;
    }
    Some(SliceFilter {
        p: pt.p,
        residues: [pt.coords[1], pt.coords[2], pt.coords[3]],
    })
}

/// Points `(1, y)` with `|y_i| <= B` on a curve in P^3, optionally in a
/// congruence class.
pub fn count_curve(c: &IntegralModel, b: i64, class: Option<&ClassEntry>, opts: &PipelineOptions) -> Result<CountReport> {
    let started = Instant::now();
    let query = Query {
        poly: c.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>().join("; "),
        b,
        mode: Mode::Affine,
    };
    let tally = curve_tally(c, b, class, None, opts)?;
    let mut report = tally.into_report(query, opts.seed, started);
    if opts.oracle_check {
        let cls = CongruenceClass {
            entries: class.cloned().into_iter().collect(),
        };
        let oracle = projective_enum(c, &BoxBounds::uniform(4, b), Some(&cls), true, opts.enumerate)?.len();
        report.cross_check(oracle as u64)?;
    }
    report.wall_time_s = started.elapsed().as_secs_f64();
    Ok(report)
}

fn tally_points(points: &[IntPoint], pred: Option<PointPredicate>) -> Tally {
    let mut t = Tally::default();
    for p in points {
        let y: Vec<i64> = p.coords()[1..].iter().map(|v| i64::try_from(v).unwrap()).collect();
        t.points.record(pred, &y);
    }
    t
}

fn fibration_tally(
    c: &IntegralModel,
    b: i64,
    filters: &[SliceFilter],
    pred: Option<PointPredicate>,
    opts: &PipelineOptions,
) -> Result<Tally> {
    let (_, points) = fibration_count_where(c, b, EXCEPTIONAL_CAP, filters, pred, opts.enumerate)?;
    Ok(Tally {
        points,
        ..Default::default()
    })
}

pub(crate) fn curve_tally(
    c: &IntegralModel,
    b: i64,
    class: Option<&ClassEntry>,
    pred: Option<PointPredicate>,
    opts: &PipelineOptions,
) -> Result<Tally> {
    if c.arity() != 4 || c.dim() != 1 {
        return Err(Error::Precondition("expected a curve in P^3".into()));
    }
    if b < 1 {
        return Err(Error::Invalid("B must be at least 1".into()));
    }
    let mut filters = Vec::new();
    if let Some(e) = class {
        match chart_filter(&e.point) {
            Some(f) => filters.push(f),
            None => {
                let mut t = Tally::default();
                t.trace.push(TraceStep::new("class at infinity", json!({"p": e.p})));
                return Ok(t);
            }
        }
    }
    let integral = match curve_is_integral(c, opts.seed) {
        Ok(v) => v,
        Err(Error::Inconclusive(_)) | Err(Error::BadPrime { .. }) => false,
        Err(e) => return Err(e),
    };
    if !integral {
        let mut t = fibration_tally(c, b, &filters, pred, opts)?;
        t.trace.push(TraceStep::new("curve fibration", json!({"reason": "not certified integral"})));
        return Ok(t);
    }
    let e = c.degree();
    let (p, mu) = class.map_or((1.0, 1.0), |x| (x.p as f64, x.mu as f64));
    let threshold = (b as f64).powf((1.0 + opts.eps) / e as f64) / p.powf(1.0 / mu);
    let window = prime_window(threshold.max(2.0), opts.window + 1)?;
    let q = window
        .iter()
        .copied()
        .find(|&q| class.is_none_or(|x| x.p != q) && reduce_mod_p(c, q).is_ok())
        .ok_or_else(|| Error::Inconclusive("no usable prime in window".into()))?;
    let base = CongruenceClass {
        entries: class.cloned().into_iter().collect(),
    };
    let bounds = BoxBounds::uniform(4, b);
    let s = projective_enum(c, &bounds, Some(&base), true, opts.enumerate)?;
    let mut parts: BTreeMap<FpPoint, Vec<IntPoint>> = BTreeMap::new();
    for x in &s.points {
        parts.entry(specialize(x, q)?).or_default().push(x.clone());
    }
    let qpts = fp_points(c, q, true, 1, SCAN_CAP)?;
    if parts.keys().any(|k| !qpts.contains(k)) {
        return Err(Error::Invalid("point specializes off the reduction".into()));
    }
    let mut total = Tally::default();
    let (mut empty, mut singular, mut fallback, mut certified) = (0, 0, 0, 0);
    for qp in &qpts {
        let Some(sq) = parts.get(qp) else {
            empty += 1;
            continue;
        };
        let mut pts = base.entries.clone();
        let mu_q = crate::zmodel::multiplicity(c, q, qp)?;
        pts.push(ClassEntry {
            p: q,
            point: qp.clone(),
            mu: mu_q,
        });
        let cls = CongruenceClass { entries: pts };
        if mu_q > 1 {
            singular += 1;
            total.absorb(tally_points(sq, pred));
            continue;
        }
        let mut f2 = filters.clone();
        f2.extend(chart_filter(qp));
        let cert = match aux_form_for_points(c, &bounds, &cls, sq, opts.k_cap, opts.eps) {
            Ok(cert) => cert,
            Err(Error::CapExceeded { .. }) | Err(Error::Inconclusive(_)) => {
                fallback += 1;
                total.absorb(fibration_tally(c, b, &f2, pred, opts)?);
                continue;
            }
            Err(err) => return Err(err),
        };
        let mut gens: Vec<QPoly> = c.rational_generators();
        gens.push(cert.form.to_rational());
        let z = IntegralModel::new(&gens)?;
        let t = fibration_tally(&z, b, &f2, pred, opts)?;
        let deg_g = cert.form.total_degree().unwrap_or(0) as u64;
        let bezout_ok = z.dim() > 0 || t.points.raw <= e * deg_g;
        if !bezout_ok {
            total.warnings.push(format!("Bezout bound violated at {qp}"));
        }
        if t.points.raw != sq.len() as u64 {
            return Err(Error::Invalid(format!(
                "class {qp}: intersection count {} differs from class size {}",
                t.points.raw,
                sq.len()
            )));
        }
        certified += 1;
        let mut j = cert.to_json();
        j["intersection_points"] = json!(t.points.raw);
        j["bezout_bound"] = json!(e * deg_g);
        j["bezout_ok"] = json!(bezout_ok);
        total.certificates.push(j);
        total.absorb(t);
    }
    total.trace.insert(
        0,
        TraceStep::new(
            "curve aux forms",
            json!({
                "degree": e,
                "threshold": threshold,
                "window": window,
                "q": q,
                "classes": qpts.len(),
                "empty": empty,
                "singular": singular,
                "fallback": fallback,
                "certified": certified,
            }),
        ),
    );
    Ok(total)
}
