use detcount::geometry::{gradient, good_point_filter};
use detcount::parse::parse_integer;
use detcount::zmodel::{fp_points, multiplicity, reduce_mod_p, FpPoint, IntegralModel};
use detcount::{ExponentVec, QPoly, VarStyle, ZPoly};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::Outcome;

const P: u64 = 13;

pub const SURFACES: [&str; 3] = [
    "y1*y2 + y3^2 - y1^4 + y2^3 - 2",
    "y1^4 - y2^3*y3 + y3^4 + y1*y2 - 7",
    "y1^2 + y2^2 - y3^2 - y1^4 + y3^4 - 3",
];

fn linear(c: [i64; 4]) -> ZPoly {
    ZPoly::from_terms(
        4,
        VarStyle::Projective,
        (0..4).map(|i| {
            let mut e = vec![0u32; 4];
            e[i] = 1;
            (ExponentVec::new(e), BigInt::from(c[i]))
        }),
    )
}

/// A random linear form vanishing at `pt` modulo `P`.
fn plane_through(rng: &mut ChaCha8Rng, pt: &FpPoint) -> ZPoly {
    let c0 = pt.chart();
    loop {
        let mut c = [0i64; 4];
        for (i, v) in c.iter_mut().enumerate() {
            if i != c0 {
                *v = rng.gen_range(0..P as i64);
            }
        }
        let s: i64 = (0..4).map(|i| c[i] * pt.coords[i] as i64).sum();
        c[c0] = (-s).rem_euclid(P as i64);
        if c.iter().any(|&v| v != 0) {
            return linear(c);
        }
    }
}

fn random_plane(rng: &mut ChaCha8Rng) -> ZPoly {
    linear([0; 4].map(|_: i64| rng.gen_range(1..P as i64)))
}

/// Curves `X . V(G)` with `G` a plane or quadric through the point, with
/// their degrees `e = 4 deg G`.
fn curves_through(f: &ZPoly, pt: &FpPoint, seed: u64) -> Vec<(&'static str, ZPoly)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grad = gradient(&f.reduce_mod(P), &pt.fp_coords()).unwrap();
    let t = linear([0, 1, 2, 3].map(|i| grad[i].value() as i64));
    let l = |rng: &mut ChaCha8Rng| plane_through(rng, pt);
    let (l1, l2, l3, l4) = (l(&mut rng), l(&mut rng), l(&mut rng), l(&mut rng));
    let (m1, m2) = (random_plane(&mut rng), random_plane(&mut rng));
    vec![
        ("tangent plane", t.clone()),
        ("plane", l1.clone()),
        ("plane", l2.clone()),
        ("quadric", l1.mul(&m1).add(&l2.mul(&m2))),
        ("tangent plane times plane", t.mul(&l3)),
        ("quadric tangent along T", t.mul(&m1).add(&l3.mul(&l4))),
        ("two planes", l3.mul(&l4)),
    ]
}

/// At good points, every curve of degree `e <= 8` on the surface has
/// multiplicity at most `e/2`.
pub fn multiplicity_bound() -> Outcome {
    let mut checked = 0usize;
    let mut tight = 0usize;
    let mut goods = Vec::new();
    for (si, text) in SURFACES.iter().enumerate() {
        let f = parse_integer(text, 3).unwrap();
        let big_f = f.homogenize(4).unwrap().with_style(VarStyle::Projective);
        let x = IntegralModel::hypersurface(&big_f).unwrap();
        if reduce_mod_p(&x, P).is_err() {
            return Outcome::new(false, format!("{text}: bad reduction at {P}"));
        }
        let pts = fp_points(&x, P, false, 1, u128::MAX).unwrap();
        let (good, _) = good_point_filter(&x, P, &pts).unwrap();
        goods.push(good.len());
        let results: Vec<Result<Vec<(u32, u64)>, String>> = good
            .par_iter()
            .enumerate()
            .map(|(j, r)| {
                let mut out = Vec::new();
                for (kind, g) in curves_through(&big_f, &r.point, (si * 100_000 + j) as u64) {
                    let gens: Vec<QPoly> = vec![big_f.to_rational(), g.to_rational()];
                    let w = IntegralModel::new(&gens).map_err(|e| e.to_string())?;
                    if w.dim() != 1 {
                        return Err(format!("{text} {}: {kind} section is not a curve", r.point));
                    }
                    let mu = multiplicity(&w, P, &r.point).map_err(|e| format!("{text} {} {kind}: {e}", r.point))?;
                    if 2 * mu as u64 > w.degree() {
                        return Err(format!("{text} {}: {kind} of degree {} has multiplicity {mu}", r.point, w.degree()));
                    }
                    out.push((mu, w.degree()));
                }
                Ok(out)
            })
            .collect();
        for r in results {
            match r {
                Ok(v) => {
                    checked += v.len();
                    tight += v.iter().filter(|(mu, e)| 2 * *mu as u64 == *e).count();
                }
                Err(e) => return Outcome::new(false, e),
            }
        }
    }
    Outcome::new(
        checked > 0,
        format!("good points per surface {goods:?}; {checked} curves, {tight} on the boundary 2 mu = e, no violation"),
    )
}
