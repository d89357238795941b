use std::collections::BTreeMap;

use detcount::detmethod::{abundance_values, aux_form_for_points, condition_check, AuxFormCertificate};
use detcount::enumerate::{projective_enum, BoxBounds, EnumOptions, IntEval};
use detcount::parse::{parse_integer, parse_rational};
use detcount::pipeline::PipelineOptions;
use detcount::staircase::buchberger;
use detcount::zmodel::{fp_points, specialize, CongruenceClass, FpPoint, IntegralModel};
use detcount::{IntPoint, MonomialOrder, QPoly, VarStyle};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::Outcome;

const GRID: [i64; 3] = [256, 512, 1024];

fn rational_quartic() -> IntegralModel {
    let gens: Vec<QPoly> = ["x0*x3 - x1*x2", "x1^3 - x0^2*x2", "x2^3 - x1*x3^2", "x0*x2^2 - x1^2*x3"]
        .iter()
        .map(|s| parse_rational(s, 4).unwrap())
        .collect();
    IntegralModel::new(&gens).unwrap()
}

/// Points of the rational quartic with height at most `b`: images of
/// primitive `(s, t)` with `max(|s|, |t|)^4 <= b`.
fn quartic_points(b: i64) -> Vec<IntPoint> {
    let r = (1..).take_while(|&v: &i64| v.pow(4) <= b).last().unwrap_or(0);
    let mut out = Vec::new();
    for s in -r..=r {
        for t in -r..=r {
            if s.gcd(&t) != 1 {
                continue;
            }
            let c = [s.pow(4), s.pow(3) * t, s * t.pow(3), t.pow(4)];
            let pt = IntPoint::primitive_from(c.iter().map(|&v| BigInt::from(v)).collect()).unwrap();
            if !out.contains(&pt) {
                out.push(pt);
            }
        }
    }
    out
}

fn surface_form() -> detcount::ZPoly {
    parse_integer("x0^2*x2^2 + x0^2*x3^2 - x1^4 - x0^4", 4).unwrap().with_style(VarStyle::Projective)
}

/// Least prime meeting the corrected condition for a smooth class.
fn least_prime(x: &IntegralModel, bounds: &BoxBounds, eps: f64) -> u64 {
    let gb = buchberger(&x.rational_generators(), MonomialOrder::GradedRevLex).unwrap();
    let ab = abundance_values(&gb, 8).unwrap();
    let b: Vec<f64> = bounds.bounds.iter().map(|&v| v as f64).collect();
    (2u64..)
        .filter(|&p| (2..p).take_while(|q| q * q <= p).all(|q| p % q != 0))
        .find(|&p| condition_check(&[(p, 1)], &b, &ab, x.dim(), x.degree(), eps).unwrap().holds)
        .unwrap()
}

/// Vanishing at every point and a nonzero normal form, recomputed.
fn reverify(x: &IntegralModel, cert: &AuxFormCertificate, points: &[IntPoint]) -> bool {
    let ev = IntEval::new(&cert.form);
    let vanish = points
        .iter()
        .all(|pt| ev.eval(&pt.coords().iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>()).is_zero());
    let gb = buchberger(&x.rational_generators(), MonomialOrder::GradedRevLex).unwrap();
    let nf = gb.normal_form(&cert.form.to_rational()).unwrap();
    vanish && !nf.is_zero() && cert.normal_form_nonzero
}

pub struct Instance {
    pub label: String,
    pub b: i64,
    pub deg_g: u32,
    pub s: usize,
    pub ok: bool,
    /// Curve instances: points of the whole box on `V(G)` and the bound.
    pub bezout: (u64, u64),
}

fn partition(points: &[IntPoint], p: u64) -> BTreeMap<FpPoint, Vec<IntPoint>> {
    let mut parts: BTreeMap<FpPoint, Vec<IntPoint>> = BTreeMap::new();
    for pt in points {
        parts.entry(specialize(pt, p).unwrap()).or_default().push(pt.clone());
    }
    parts
}

fn run_family(
    name: &str,
    x: &IntegralModel,
    points_for: &dyn Fn(i64) -> (BoxBounds, Vec<IntPoint>),
    curve: bool,
    out: &mut Vec<Instance>,
) -> Result<(), String> {
    let eps = PipelineOptions::default().eps;
    for b in GRID {
        let (bounds, all) = points_for(b);
        let p = least_prime(x, &bounds, eps);
        let parts = partition(&all, p);
        let mut classes: Vec<FpPoint> = parts.keys().cloned().collect();
        if curve {
            classes = fp_points(x, p, true, 1, u128::MAX).map_err(|e| e.to_string())?;
        }
        for qp in classes {
            let cls = CongruenceClass::build(x, std::slice::from_ref(&qp)).map_err(|e| e.to_string())?;
            if cls.entries[0].mu != 1 {
                continue;
            }
            let sq = parts.get(&qp).cloned().unwrap_or_default();
            let cert = aux_form_for_points(x, &bounds, &cls, &sq, 12, eps).map_err(|e| format!("{name} B={b} {qp}: {e}"))?;
            let holds = cert.condition.as_ref().is_some_and(|c| c.holds);
            let ok = holds && reverify(x, &cert, &sq);
            let deg_g = cert.k;
            let bezout = if curve {
                let ev = IntEval::new(&cert.form);
                let on = all
                    .iter()
                    .filter(|pt| ev.eval(&pt.coords().iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>()).is_zero())
                    .count() as u64;
                (on, x.degree() * deg_g as u64)
            } else {
                let mut gens = x.rational_generators();
                gens.push(cert.form.to_rational());
                let w = IntegralModel::new(&gens).map_err(|e| e.to_string())?;
                if w.dim() != 1 {
                    return Err(format!("{name} B={b} {qp}: intersection has dimension {}", w.dim()));
                }
                (w.degree(), x.degree() * deg_g as u64)
            };
            out.push(Instance {
                label: format!("{name} B={b} p={p} {qp} s={}", sq.len()),
                b,
                deg_g,
                s: sq.len(),
                ok,
                bezout,
            });
        }
    }
    Ok(())
}

/// All instances for the fixed curve and surface over the height grid.
pub fn instances() -> Result<(Vec<Instance>, Vec<Instance>), String> {
    let c = rational_quartic();
    if (c.dim(), c.degree()) != (1, 4) {
        return Err("curve is not a quartic curve".into());
    }
    // The parametrization is the enumeration; check it against brute force.
    let small = projective_enum(&c, &BoxBounds::uniform(4, 81), None, false, EnumOptions::default())
        .map_err(|e| e.to_string())?;
    let mut a = small.points.clone();
    let mut b = quartic_points(81);
    a.sort();
    b.sort();
    if a != b {
        return Err("parametrization disagrees with enumeration".into());
    }
    let mut curves = Vec::new();
    run_family("curve", &c, &|b| (BoxBounds::uniform(4, b), quartic_points(b)), true, &mut curves)?;
    let s = IntegralModel::hypersurface(&surface_form()).map_err(|e| e.to_string())?;
    let mut surfaces = Vec::new();
    run_family(
        "surface",
        &s,
        &|b| {
            let bounds = BoxBounds::new(vec![1, b, b, b]).unwrap();
            let pts = projective_enum(&s, &bounds, None, true, EnumOptions::default()).unwrap().points;
            (bounds, pts)
        },
        false,
        &mut surfaces,
    )?;
    Ok((curves, surfaces))
}

fn max_degrees(v: &[Instance]) -> Vec<u32> {
    GRID.iter()
        .map(|&b| v.iter().filter(|i| i.b == b).map(|i| i.deg_g).max().unwrap_or(0))
        .collect()
}

/// Criteria 5 and 6 share the instances.
pub fn aux_and_bezout() -> (Outcome, Outcome) {
    let (curves, surfaces) = match instances() {
        Ok(v) => v,
        Err(e) => return (Outcome::new(false, e.clone()), Outcome::new(false, e)),
    };
    let all: Vec<&Instance> = curves.iter().chain(&surfaces).collect();
    let bad: Vec<&str> = all.iter().filter(|i| !i.ok).map(|i| i.label.as_str()).collect();
    let (dc, ds) = (max_degrees(&curves), max_degrees(&surfaces));
    let same = dc.iter().all(|&v| v == dc[0]) && ds.iter().all(|&v| v == ds[0]);
    let c5 = Outcome::new(
        bad.is_empty() && same,
        format!(
            "{} curve and {} surface classes (largest {} points); max deg G over B {:?}: curve {dc:?}, surface {ds:?}; failed re-verification: {bad:?}",
            curves.len(),
            surfaces.len(),
            all.iter().map(|i| i.s).max().unwrap_or(0),
            GRID
        ),
    );
    let viol: Vec<String> = all
        .iter()
        .filter(|i| i.bezout.0 > i.bezout.1)
        .map(|i| format!("{} ({} > {})", i.label, i.bezout.0, i.bezout.1))
        .collect();
    let worst = curves.iter().map(|i| i.bezout.0).max().unwrap_or(0);
    let c6 = Outcome::new(
        viol.is_empty(),
        format!(
            "{} instances; most curve points on one V(G): {worst}; surface sections within deg X deg G; violations: {viol:?}",
            all.len()
        ),
    );
    (c5, c6)
}
