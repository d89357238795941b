use detcount::enumerate::{affine_count, projective_enum, BoxBounds, EnumOptions};
use detcount::parse::{parse_integer, parse_rational};
use detcount::pipeline::{
    count_hypersurface, count_projective, count_surface, exponent_fit, geometric_grid, project_to_hypersurface,
    PipelineOptions,
};
use detcount::zmodel::IntegralModel;
use detcount::QPoly;
use serde_json::Value;

use crate::Outcome;

const SURFACES: [&str; 5] = [
    "y1^4 + y2^4 - y3^4 - 1",
    "y2^2 + y3^2 - y1^4 - 1",
    "y1^4 - y2^3*y3 + y3^4 + y1*y2 - 7",
    "y1*y2 + y3^2 - y1^4 + y2^3 - 2",
    "y1^4 + y2^3 - y3^2 - 1",
];

const HYPERSURFACES: [&str; 2] = ["y1^4 + y2^4 + y3^4 + y4^4 - 2", "y1^4 + y2^4 - y3^4 - y4^4 + y1*y2 - 1"];

const PROJECTIVE: [&str; 2] = [
    "x0^4 + x1^4 - x2^4 - x3^4",
    "x0^3*x1 + x1^3*x2 + x2^3*x3 + x3^3*x0 - x0^2*x2^2",
];

fn model(gens: &[&str], arity: usize) -> IntegralModel {
    let q: Vec<QPoly> = gens.iter().map(|s| parse_rational(s, arity).unwrap()).collect();
    IntegralModel::new(&q).unwrap()
}

/// Pipeline counts equal brute-force counts exactly.
pub fn oracle_equality() -> Outcome {
    let opts = PipelineOptions::default();
    let mut rows = Vec::new();
    let mut fails = Vec::new();
    let mut check = |label: String, got: Result<u64, String>, want: u64| match got {
        Ok(v) if v == want => rows.push(format!("{label}={v}")),
        Ok(v) => fails.push(format!("{label}: pipeline {v}, oracle {want}")),
        Err(e) => fails.push(format!("{label}: {e}")),
    };
    for (i, text) in SURFACES.iter().enumerate() {
        let f = parse_integer(text, 3).unwrap();
        for b in [50, 100, 200] {
            let want = affine_count(&f, b, false, EnumOptions::default()).unwrap().count;
            let got = count_surface(&f, b, &opts).map(|r| r.count).map_err(|e| e.to_string());
            check(format!("S{}@{b}", i + 1), got, want);
        }
    }
    let hopts = PipelineOptions {
        assert_planes_finite: true,
        ..PipelineOptions::default()
    };
    for (i, text) in HYPERSURFACES.iter().enumerate() {
        let f = parse_integer(text, 4).unwrap();
        for b in [8, 16] {
            let want = affine_count(&f, b, false, EnumOptions::default()).unwrap().count;
            let got = count_hypersurface(&f, b, &hopts).map(|r| r.count).map_err(|e| e.to_string());
            check(format!("H{}@{b}", i + 1), got, want);
        }
    }
    for (i, text) in PROJECTIVE.iter().enumerate() {
        let x = model(&[text], 4);
        for b in [10, 20] {
            let want = projective_enum(&x, &BoxBounds::uniform(4, b), None, false, EnumOptions::default())
                .unwrap()
                .len() as u64;
            let got = count_projective(&x, b, &opts).map(|r| r.count).map_err(|e| e.to_string());
            check(format!("P{}@{b}", i + 1), got, want);
        }
    }
    let pass = fails.is_empty();
    Outcome::new(
        pass,
        if pass {
            format!("{} runs equal: {}", rows.len(), rows.join(" "))
        } else {
            format!("mismatches: {}", fails.join("; "))
        },
    )
}

/// Seeded projections: image degree equals the degree and sampled fibers
/// hold at most `d` points.
pub fn projection_checks() -> Outcome {
    let cases: Vec<(&str, IntegralModel)> = vec![
        (
            "normal quartic curve",
            model(
                &["x0*x2 - x1^2", "x0*x3 - x1*x2", "x0*x4 - x2^2", "x1*x3 - x2^2", "x1*x4 - x2*x3", "x2*x4 - x3^2"],
                5,
            ),
        ),
        ("quartic del Pezzo surface", model(&["x0^2 + x1^2 - x2^2 - x3*x4", "x0*x1 - x2*x4 + x3^2"], 5)),
        ("twisted cubic", model(&["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"], 4)),
        ("quartic space curve", model(&["x0^2 - x1*x2", "x1^2 - x2*x3 + x0*x3"], 4)),
        ("normal quartic curve", model(
            &["x0*x2 - x1^2", "x0*x3 - x1*x2", "x0*x4 - x2^2", "x1*x3 - x2^2", "x1*x4 - x2*x3", "x2*x4 - x3^2"],
            5,
        )),
    ];
    let mut rows = Vec::new();
    for (seed, (name, x)) in cases.iter().enumerate() {
        let d = x.degree();
        let pd = match project_to_hypersurface(x, 1000 + seed as u64, 100) {
            Ok(v) => v,
            Err(e) => return Outcome::new(false, format!("{name}: {e}")),
        };
        let ok = pd.degree == d && pd.degree_ok && pd.fibers_sampled == 100 && pd.fiber_max <= d && pd.fibers_ok;
        rows.push(format!("{name} (seed {}): degree {}/{d}, {} fibers, max {}", 1000 + seed, pd.degree, pd.fibers_sampled, pd.fiber_max));
        if !ok {
            return Outcome::new(false, rows.join("; "));
        }
    }
    Outcome::new(true, rows.join("; "))
}

/// Slope of `log n(Y; B)` against `log B` on a doubling grid, with the
/// counts and calibration pinned in the fixture.
pub fn exponent_trend() -> Outcome {
    let fixture: Value = serde_json::from_str(include_str!("../fixtures/exponent_trend.json")).unwrap();
    let text = fixture["surface"].as_str().unwrap();
    let threshold = fixture["slope_threshold"].as_f64().unwrap();
    let pinned: Vec<u64> = fixture["oracle_counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    let f = parse_integer(text, 3).unwrap();
    let closure = f.homogenize(4).unwrap();
    match detcount::geometry::lines_on_surface_finite(&closure) {
        Ok(l) if l.finite => {}
        _ => return Outcome::new(false, "surface is not certified to hold finitely many lines"),
    }
    let grid = geometric_grid(32, 1024, 6).unwrap();
    let opts = PipelineOptions::default();
    let mut counts = Vec::new();
    for &b in &grid {
        match count_surface(&f, b, &opts) {
            Ok(r) => counts.push(r.count),
            Err(e) => return Outcome::new(false, format!("B = {b}: {e}")),
        }
    }
    if counts != pinned {
        return Outcome::new(false, format!("counts {counts:?} differ from oracle counts {pinned:?}"));
    }
    if counts.contains(&0) {
        return Outcome::new(false, "zero count on the grid");
    }
    let fit = exponent_fit(&grid, &counts).unwrap();
    let Some(slope) = fit.slope else {
        return Outcome::new(false, "no slope");
    };
    Outcome::new(
        slope <= threshold,
        format!("counts {counts:?} on {grid:?}; slope {slope:.3} (threshold {threshold}, oracle slope {})", fixture["oracle_slope"]),
    )
}
