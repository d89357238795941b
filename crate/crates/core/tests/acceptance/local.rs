use detcount::detmethod::verify_divisibility;
use detcount::parse::{parse_integer, parse_rational};
use detcount::staircase::buchberger;
use detcount::zmodel::{local_g_function, specialize, FpPoint, IntegralModel};
use detcount::{Fp, IntPoint, MonomialOrder, Polynomial, QPoly, VarStyle, ZPoly};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Outcome;

type Param = fn(&mut ChaCha8Rng, i64) -> Vec<i64>;

/// A family with integer points crowding into one residue class.
struct Family {
    name: &'static str,
    gens: &'static [&'static str],
    arity: usize,
    mu: u32,
    /// Hilbert function of the tangent cone at the class point.
    tangent_cone: fn(u64) -> u64,
    /// Point in the class for the given prime.
    point: Param,
}

fn binom2(k: u64) -> u64 {
    (k + 2) * (k + 1) / 2
}

fn cone_over_plane_curve(m: u64) -> impl Fn(u64) -> u64 {
    move |k| binom2(k) - if k >= m { binom2(k - m) } else { 0 }
}

/// A random multiple of `p` in `[-r p, r p]`.
fn multiple(rng: &mut ChaCha8Rng, p: i64, r: i64) -> i64 {
    p * rng.gen_range(-r..=r)
}

fn families() -> Vec<Family> {
    vec![
        Family {
            name: "plane line",
            gens: &["x0 + x1 - x2"],
            arity: 3,
            mu: 1,
            tangent_cone: |_| 1,
            point: |rng, p| {
                let t = 2 + multiple(rng, p, 40);
                vec![1, t, 1 + t]
            },
        },
        Family {
            name: "plane conic",
            gens: &["x1^2 + x2^2 - x0^2"],
            arity: 3,
            mu: 1,
            tangent_cone: |_| 1,
            point: |rng, p| {
                let u = 3 + multiple(rng, p, 40);
                vec![1 + u * u, 1 - u * u, 2 * u]
            },
        },
        Family {
            name: "node",
            gens: &["x0*x2^2 - x1^3 - x0*x1^2"],
            arity: 3,
            mu: 2,
            tangent_cone: |k| (k + 1).min(2),
            point: |rng, p| {
                let t = 1 + multiple(rng, p, 40);
                vec![1, t * t - 1, t * (t * t - 1)]
            },
        },
        Family {
            name: "cusp",
            gens: &["x0*x2^2 - x1^3"],
            arity: 3,
            mu: 2,
            tangent_cone: |k| (k + 1).min(2),
            point: |rng, p| {
                let t = multiple(rng, p, 40);
                vec![1, t * t, t * t * t]
            },
        },
        Family {
            name: "triple point",
            gens: &["x1^4 + 2*x1^2*x2^2 + x2^4 - x0*x1^3 + 3*x0*x1*x2^2"],
            arity: 3,
            mu: 3,
            tangent_cone: |k| (k + 1).min(3),
            point: |rng, p| {
                let (a, b) = (1 + multiple(rng, p, 40), multiple(rng, p, 40));
                let s = a * a + b * b;
                vec![s * s, b * b * (b * b - 3 * a * a), a * b * (b * b - 3 * a * a)]
            },
        },
        Family {
            name: "twisted cubic",
            gens: &["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"],
            arity: 4,
            mu: 1,
            tangent_cone: |_| 1,
            point: |rng, p| {
                let t = 2 + multiple(rng, p, 10);
                vec![1, t, t * t, t * t * t]
            },
        },
        Family {
            name: "space node",
            gens: &["x0*x2^2 - x1^3 - x0*x1^2", "x3"],
            arity: 4,
            mu: 2,
            tangent_cone: |k| (k + 1).min(2),
            point: |rng, p| {
                let t = 1 + multiple(rng, p, 40);
                vec![1, t * t - 1, t * (t * t - 1), 0]
            },
        },
        Family {
            name: "smooth quadric",
            gens: &["x0*x3 - x1*x2"],
            arity: 4,
            mu: 1,
            tangent_cone: |k| k + 1,
            point: |rng, p| {
                let (u, v) = (1 + multiple(rng, p, 20), 2 + multiple(rng, p, 20));
                vec![1, u, v, u * v]
            },
        },
        Family {
            name: "quadric cone vertex",
            gens: &["x0*x2 - x1^2"],
            arity: 4,
            mu: 2,
            tangent_cone: |k| 2 * k + 1,
            point: |rng, p| {
                let (s, t) = (multiple(rng, p, 20), multiple(rng, p, 20));
                let w = 1 + p * rng.gen_range(0..40);
                vec![s * s, s * t, t * t, w]
            },
        },
        Family {
            name: "nodal cubic cone vertex",
            gens: &["x0*x2^2 - x1^3 - x0*x1^2"],
            arity: 4,
            mu: 3,
            tangent_cone: |k| if k == 0 { 1 } else { 3 * k },
            point: |rng, p| {
                let t = rng.gen_range(-6..=6);
                let l = multiple(rng, p, 10);
                let w = 1 + p * rng.gen_range(0..40);
                vec![l, l * (t * t - 1), l * t * (t * t - 1), w]
            },
        },
    ]
}

fn model(gens: &[&str], arity: usize) -> IntegralModel {
    let q: Vec<QPoly> = gens.iter().map(|s| parse_rational(s, arity).unwrap()).collect();
    IntegralModel::new(&q).unwrap()
}

/// Independent lower bound: the first `s` entries of the sequence in which
/// `k` occurs `tangent_cone(k)` times.
fn expected_lambda(tangent_cone: &dyn Fn(u64) -> u64, s: usize) -> u64 {
    let mut total = 0;
    let mut left = s as u64;
    let mut k = 0;
    while left > 0 {
        let take = tangent_cone(k).min(left);
        total += take * k;
        left -= take;
        k += 1;
    }
    total
}

/// `v_p(det) >= Lambda(s)` on 50 seeded configurations.
pub fn divisibility() -> Outcome {
    let fams = families();
    // Sanity of the closed-form oracle itself.
    assert_eq!(cone_over_plane_curve(2)(3), 7);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let primes = [5u64, 7, 11, 13];
    let (mut nonzero, mut vandermonde, mut node4) = (0, 0, false);
    for i in 0..50 {
        // Pin the node at s = 4 as the first configuration.
        let (fi, p, s) = if i == 0 {
            (2, 5, 4)
        } else {
            (rng.gen_range(0..fams.len()), *primes.choose(&mut rng).unwrap(), rng.gen_range(2..=12))
        };
        let fam = &fams[fi];
        let x = model(fam.gens, fam.arity);
        let mut pts: Vec<IntPoint> = Vec::new();
        let mut tries = 0;
        while pts.len() < s {
            tries += 1;
            if tries > 10_000 {
                return Outcome::new(false, format!("{}: could not sample {s} points", fam.name));
            }
            let raw = (fam.point)(&mut rng, p as i64);
            let Some(pt) = IntPoint::primitive_from(raw.into_iter().map(BigInt::from).collect()) else {
                continue;
            };
            if !x.contains(&pt) || pts.contains(&pt) {
                continue;
            }
            if let Some(first) = pts.first() {
                if specialize(&pt, p).unwrap() != specialize(first, p).unwrap() {
                    continue;
                }
            }
            pts.push(pt);
        }
        let class = specialize(&pts[0], p).unwrap();
        let gb = buchberger(&x.rational_generators(), MonomialOrder::GradedRevLex).unwrap();
        let mut k = 0;
        let mons = loop {
            let m = gb.standard_monomials(k).unwrap();
            if m.len() >= s {
                break m;
            }
            k += 1;
        };
        let mut mons = mons;
        mons.shuffle(&mut rng);
        mons.truncate(s);
        let cert = match verify_divisibility(&x, p, &class, &pts, &mons) {
            Ok(c) => c,
            Err(e) => return Outcome::new(false, format!("config {i} ({}, p = {p}, s = {s}): {e}", fam.name)),
        };
        let oracle = expected_lambda(&fam.tangent_cone, s);
        if cert.lambda != oracle || cert.mu != Some(fam.mu) {
            return Outcome::new(
                false,
                format!("config {i} ({}): lambda {} mu {:?}, expected {oracle} and {}", fam.name, cert.lambda, cert.mu, fam.mu),
            );
        }
        if fam.mu == 1 && x.dim() == 1 {
            if cert.lambda != (s * (s - 1) / 2) as u64 {
                return Outcome::new(false, format!("config {i}: not the Vandermonde bound"));
            }
            vandermonde += 1;
        }
        if fi == 2 && s == 4 {
            node4 |= cert.lambda == 4;
        }
        nonzero += usize::from(cert.valuation.is_some());
    }
    Outcome::new(
        node4 && nonzero >= 25,
        format!("50 configurations hold; {nonzero} nonzero determinants, {vandermonde} Vandermonde cases, node Lambda(4) = 4: {node4}"),
    )
}

/// A germ with a prescribed lowest-order part, plus random higher terms.
fn germ(rng: &mut ChaCha8Rng, vars: usize, kind: usize) -> (ZPoly, u32) {
    let (text, m) = match (vars, kind) {
        (2, 0) => ("y1 + y2^2", 1),
        (2, 1) => ("y1^2 - y2^2", 2),
        (2, 2) => ("y1^2 - y2^3", 2),
        (2, _) => ("y1^3 - y2^3 + y1*y2^3", 3),
        (_, 0) => ("y3 + y1^2 - y2^2", 1),
        (_, 1) => ("y1^2 + y2^2 - y3^2", 2),
        (_, 2) => ("y1^2 + y2^3 + y3^3", 2),
        (_, _) => ("y1^3 + y2^3 + y3^3", 3),
    };
    let mut f = parse_integer(text, vars).unwrap();
    for _ in 0..3 {
        let mut e = vec![0u32; vars];
        for _ in 0..rng.gen_range(m + 1..=4) {
            e[rng.gen_range(0..vars)] += 1;
        }
        let c = BigInt::from(rng.gen_range(-3i64..=3));
        f = f.add(&ZPoly::monomial(detcount::ExponentVec::new(e), c, VarStyle::Affine));
    }
    (f, m)
}

/// Truncated Hilbert-Samuel multiplicity equals the order of vanishing on
/// 30 seeded hypersurface singularities, moved to random points.
pub fn multiplicity_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = [0usize; 4];
    for i in 0..30 {
        let vars = if i % 2 == 0 { 2 } else { 3 };
        let kind = (i / 2) % 4;
        let p = [5u64, 7, 11, 13][i % 4];
        let (g, m) = germ(&mut rng, vars, kind);
        // Move the singular point to a random integer point.
        let shift: Vec<i64> = (0..vars).map(|_| rng.gen_range(-5..=5)).collect();
        let subs: Vec<ZPoly> = (0..vars)
            .map(|j| {
                let v = ZPoly::var(j, vars, VarStyle::Affine, &BigInt::from(1));
                v.sub(&ZPoly::constant(BigInt::from(shift[j]), vars, VarStyle::Affine))
            })
            .collect();
        let f = g.substitute(&subs);
        let d = f.total_degree().unwrap();
        let big_f = f.homogenize(d).unwrap().with_style(VarStyle::Projective);
        let x = IntegralModel::hypersurface(&big_f).unwrap();
        let mut coords = vec![1i64];
        coords.extend(&shift);
        let pt = FpPoint::from_residues(p, &coords).unwrap();
        let g_fn = match local_g_function(&x, p, &pt, 2 * d + 4) {
            Ok(v) => v,
            Err(e) => return Outcome::new(false, format!("case {i}: {e}")),
        };
        let fp_shift: Vec<Fp> = shift.iter().map(|&v| Fp::new(v, p)).collect();
        let reduced: Polynomial<Fp> = f.reduce_mod(p);
        let ord = reduced.order_of_vanishing(&fp_shift).unwrap();
        if g_fn.mu != Some(ord) || ord != m {
            return Outcome::new(false, format!("case {i} ({f} mod {p}): truncation {:?}, order {ord}, expected {m}", g_fn.mu));
        }
        seen[kind] += 1;
    }
    Outcome::new(true, format!("30 cases agree (smooth {}, node {}, cusp {}, triple {})", seen[0], seen[1], seen[2], seen[3]))
}
