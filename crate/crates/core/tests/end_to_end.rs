use detcount::detmethod::{aux_form, DEFAULT_EPS};
use detcount::enumerate::{affine_count, projective_enum, BoxBounds, EnumOptions};
use detcount::parse::{parse_integer, parse_rational};
use detcount::pipeline::{count_curve, count_projective, count_surface, CountReport, PipelineOptions};
use detcount::zmodel::{specialize, CongruenceClass, IntegralModel};
use detcount::{QPoly, VarStyle};

fn model(gens: &[&str], arity: usize) -> IntegralModel {
    let q: Vec<QPoly> = gens.iter().map(|s| parse_rational(s, arity).unwrap()).collect();
    IntegralModel::new(&q).unwrap()
}

#[test]
fn surface_report_round_trips() {
    let f = parse_integer("y1^4 + 2*y2^4 + 3*y3^4 - 6", 3).unwrap();
    let r = count_surface(&f, 4, &PipelineOptions::default()).unwrap();
    let back: CountReport = serde_json::from_value(serde_json::to_value(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    assert_eq!(r.count, affine_count(&f, 4, false, EnumOptions::default()).unwrap().count);
}

#[test]
fn affine_and_projective_views_agree() {
    // Integer points of the affine surface are the chart x0 = 1 of its
    // closure.
    let f = parse_integer("y1^4 + y2^3 - y3^2 - 1", 3).unwrap();
    let closure = f.homogenize(4).unwrap().with_style(VarStyle::Projective);
    let x = IntegralModel::hypersurface(&closure).unwrap();
    let chart = projective_enum(&x, &BoxBounds::uniform(4, 30), None, true, EnumOptions::default()).unwrap();
    let direct = affine_count(&f, 30, false, EnumOptions::default()).unwrap().count;
    assert_eq!(chart.len() as u64, direct);
}

#[test]
fn class_counts_partition_the_curve() {
    let c = model(&["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"], 4);
    let opts = PipelineOptions::default();
    let all = count_curve(&c, 200, None, &opts).unwrap().count;
    let pts = projective_enum(&c, &BoxBounds::uniform(4, 200), None, true, EnumOptions::default()).unwrap();
    let mut total = 0;
    let mut seen = Vec::new();
    for pt in &pts.points {
        let q = specialize(pt, 7).unwrap();
        if seen.contains(&q) {
            continue;
        }
        let class = CongruenceClass::build(&c, std::slice::from_ref(&q)).unwrap();
        total += count_curve(&c, 200, Some(&class.entries[0]), &opts).unwrap().count;
        seen.push(q);
    }
    assert_eq!(total, all);
}

#[test]
fn aux_form_vanishes_on_the_class() {
    let c = model(&["x1^2 + x2^2 - x0^2", "x3"], 4);
    let q = detcount::zmodel::FpPoint::from_residues(5, &[1, 0, 1, 0]).unwrap();
    let class = CongruenceClass::build(&c, &[q]).unwrap();
    let bounds = BoxBounds::uniform(4, 60);
    let cert = aux_form(&c, &bounds, &class, 8, DEFAULT_EPS, EnumOptions::default()).unwrap();
    assert!(cert.normal_form_nonzero);
    let pts = projective_enum(&c, &bounds, Some(&class), false, EnumOptions::default()).unwrap();
    assert_eq!(cert.s, pts.len());
    for p in &pts.points {
        assert!(cert.form.eval_int(p.coords()).eq(&0.into()));
    }
}

#[test]
fn projective_quartic_matches_enumeration() {
    let x = model(&["x0^4 + x1^4 - x2^4 - x3^4"], 4);
    let r = count_projective(&x, 6, &PipelineOptions::default()).unwrap();
    let want = projective_enum(&x, &BoxBounds::uniform(4, 6), None, false, EnumOptions::default()).unwrap().len();
    assert_eq!(r.count, want as u64);
}
