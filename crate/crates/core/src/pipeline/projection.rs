use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::hyper::hypersurface_tally;
use super::report::{CountReport, Mode, Query, Tally, TraceStep};
use super::PipelineOptions;
use crate::coeff::{Coeff, Fp};
use crate::enumerate::{projective_enum, BoxBounds, EnumOptions};
use crate::error::{Error, Result};
use crate::geometry::{abs_irreducibility_probe, lines_on_surface_finite, q_root_finder, Irreducibility};
use crate::linalg::{rank, rref};
use crate::monomial::MonomialOrder;
use crate::point::IntPoint;
use crate::poly::{Polynomial, QPoly, VarStyle, ZPoly};
use crate::solve::affine_solutions;
use crate::staircase::{buchberger, eliminate};
use crate::univariate::{roots_finite, UPoly};
use crate::zmodel::{hilbert_over_q, IntegralModel};

/// Prime used to sample fibers of the projection.
const FIBER_PRIME: u64 = 10_007;
const MAX_DRAWS: u32 = 24;
const MAX_MINORS: usize = 200;

/// A linear projection of a projective variety onto a hypersurface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionData {
    /// No center needed: the variety is already a hypersurface.
    pub identity: bool,
    /// Rows of the linear forms whose common zero set is the center.
    pub forms: Vec<Vec<i64>>,
    /// Rows completing `forms` to an invertible matrix.
    pub complement: Vec<Vec<i64>>,
    /// Defining form of the image, in `forms.len()` variables.
    #[serde(with = "poly_text")]
    pub image: ZPoly,
    pub degree: u64,
    pub degree_ok: bool,
    /// Largest row sum of absolute coefficients: `H(image point) <= c H(P)`.
    pub height_constant: u64,
    pub fibers_sampled: usize,
    pub fiber_max: u64,
    pub fibers_ok: bool,
    pub height_ratio_max: Option<f64>,
    /// Generators of the locus where the projection ramifies on the variety.
    #[serde(with = "poly_list_text")]
    pub exceptional: Vec<ZPoly>,
    pub exceptional_truncated: bool,
    pub draws: u32,
    pub seed: u64,
}

mod poly_text {
    use crate::poly::ZPoly;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &ZPoly, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(_d: D) -> Result<ZPoly, D::Error> {
        Err(serde::de::Error::custom("projection data is write-only"))
    }
}

mod poly_list_text {
    use crate::poly::ZPoly;
    use serde::ser::SerializeSeq;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ps: &[ZPoly], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(ps.len()))?;
        for p in ps {
            seq.serialize_element(&p.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(_d: D) -> Result<Vec<ZPoly>, D::Error> {
        Err(serde::de::Error::custom("projection data is write-only"))
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn matrix(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
}

fn inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    let aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|&v| q(v)).collect();
            row.extend((0..n).map(|j| if i == j { q(1) } else { q(0) }));
            row
        })
        .collect();
    let e = rref(aug, 2 * n);
    if e.pivots != (0..n).collect::<Vec<_>>() {
        return Err(Error::Invalid("projection matrix is singular".into()));
    }
    Ok(e.rows.iter().take(n).map(|r| r[n..].to_vec()).collect())
}

/// `g(x)` rewritten in coordinates `x' = M x`, given `M^{-1}`.
fn in_new_coords(g: &QPoly, m_inv: &[Vec<BigRational>]) -> QPoly {
    let n = m_inv.len();
    let one = q(1);
    let subs: Vec<QPoly> = m_inv
        .iter()
        .map(|row| {
            (0..n).fold(Polynomial::zero(n, VarStyle::Projective), |acc, j| {
                acc.add(&Polynomial::var(j, n, VarStyle::Projective, &one).scale(&row[j]))
            })
        })
        .collect();
    g.substitute(&subs)
}

/// `g(x')` pulled back along `x' = M x`.
fn in_old_coords(g: &QPoly, m: &[Vec<i64>]) -> QPoly {
    in_new_coords(g, &matrix(m))
}

fn to_z(g: &QPoly) -> Result<ZPoly> {
    Ok(g.primitive_part()?.0.with_style(VarStyle::Projective))
}

fn linear_form(row: &[i64]) -> ZPoly {
    let n = row.len();
    let one = BigInt::one();
    (0..n).fold(Polynomial::zero(n, VarStyle::Projective), |acc, j| {
        acc.add(&Polynomial::var(j, n, VarStyle::Projective, &one).scale(&BigInt::from(row[j])))
    })
}

/// Determinant of a small square matrix of polynomials by expansion.
fn poly_det(m: &[Vec<QPoly>]) -> QPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let arity = m[0][0].arity();
    let mut acc = Polynomial::zero(arity, VarStyle::Projective);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<QPoly>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let t = m[0][j].mul(&poly_det(&minor));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

impl ProjectionData {
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.forms.iter().chain(&self.complement).cloned().collect()
    }

    /// Primitive image of a point of the variety.
    pub fn apply(&self, pt: &IntPoint) -> Option<IntPoint> {
        let v: Vec<BigInt> = self
            .forms
            .iter()
            .map(|r| r.iter().zip(pt.coords()).map(|(&a, x)| BigInt::from(a) * x).sum())
            .collect();
        IntPoint::primitive_from(v)
    }

    /// Points of the variety over `Q` mapping to `z`.
    pub fn fiber(&self, model: &IntegralModel, z: &IntPoint) -> Result<Vec<IntPoint>> {
        let n = model.arity();
        let k = self.forms.len();
        let m = self.matrix();
        let m_inv = inverse(&m)?;
        let free = n - k;
        let one = q(1);
        // x' = (z, w) with w free, then x = M^{-1} x'.
        let xprime: Vec<QPoly> = (0..n)
            .map(|i| {
                if i < k {
                    Polynomial::constant(BigRational::from_integer(z.coords()[i].clone()), free, VarStyle::Affine)
                } else {
                    Polynomial::var(i - k, free, VarStyle::Affine, &one)
                }
            })
            .collect();
        let x: Vec<QPoly> = m_inv
            .iter()
            .map(|row| {
                (0..n).fold(Polynomial::zero(free, VarStyle::Affine), |acc, j| {
                    acc.add(&xprime[j].scale(&row[j]))
                })
            })
            .collect();
        let lift = |w: &[BigRational]| -> Option<IntPoint> {
            let vals: Vec<BigRational> = x.iter().map(|p| p.evaluate(w).unwrap()).collect();
            let den = vals.iter().fold(BigInt::one(), |a, v| a.lcm(v.denom()));
            IntPoint::primitive_from(vals.iter().map(|v| (v * BigRational::from_integer(den.clone())).to_integer()).collect())
        };
        if free == 0 {
            let pt = lift(&[]).ok_or_else(|| Error::Invalid("zero fiber point".into()))?;
            return Ok(if model.contains(&pt) { vec![pt] } else { Vec::new() });
        }
        let eqs: Vec<QPoly> = model.rational_generators().iter().map(|g| g.substitute(&x)).collect();
        let sols = affine_solutions(&eqs, &q_root_finder)?;
        Ok(sols.iter().filter_map(|w| lift(w)).collect())
    }
}

/// Projects a variety of dimension `r` in `P^n` from a seeded random
/// center onto a hypersurface in `P^{r+1}`.
pub fn project_to_hypersurface(model: &IntegralModel, seed: u64, fiber_samples: usize) -> Result<ProjectionData> {
    let n = model.arity();
    let r = model.dim() as usize;
    let d = model.degree();
    if d < 2 {
        return Err(Error::Precondition("degree must be at least 2".into()));
    }
    let k = r + 2;
    if k > n {
        return Err(Error::Invalid("variety is not a proper subvariety".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = 0;
    let (forms, complement) = loop {
        if draws == MAX_DRAWS {
            return Err(Error::Inconclusive("no admissible projection center found".into()));
        }
        draws += 1;
        let forms: Vec<Vec<i64>> = if k == n {
            (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
        } else {
            (0..k).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect()
        };
        if rank(matrix(&forms), n) < k {
            continue;
        }
        let mut complement = Vec::new();
        for j in 0..n {
            if forms.len() + complement.len() == n {
                break;
            }
            let mut trial: Vec<Vec<i64>> = forms.iter().chain(&complement).cloned().collect();
            trial.push((0..n).map(|i| (i == j) as i64).collect());
            if rank(matrix(&trial), n) == trial.len() {
                complement.push(trial.pop().unwrap());
            }
        }
        if k < n {
            let mut gens: Vec<ZPoly> = model.generators().to_vec();
            gens.extend(forms.iter().map(|f| linear_form(f)));
            if hilbert_over_q(&gens)?.dim.is_some() {
                continue;
            }
        }
        break (forms, complement);
    };
    let m: Vec<Vec<i64>> = forms.iter().chain(&complement).cloned().collect();
    let m_inv = inverse(&m)?;
    let moved: Vec<QPoly> = model.rational_generators().iter().map(|g| in_new_coords(g, &m_inv)).collect();
    let drop: Vec<usize> = (k..n).collect();
    let elim = if drop.is_empty() {
        buchberger(&moved, MonomialOrder::GradedRevLex)?.generators().to_vec()
    } else {
        eliminate(&moved, &drop)?
    };
    let image_q = elim
        .iter()
        .filter(|g| !g.is_zero())
        .min_by_key(|g| g.total_degree())
        .ok_or_else(|| Error::Invalid("projection image is the whole space".into()))?;
    let image = to_z(image_q)?;
    let degree = image.total_degree().unwrap_or(0) as u64;
    let height_constant = forms.iter().map(|r| r.iter().map(|v| v.unsigned_abs()).sum()).max().unwrap_or(1);
    let (fibers_sampled, fiber_max) = sample_fibers(&moved, &image, k, fiber_samples, &mut rng)?;
    let (exceptional, exceptional_truncated) = ramification_locus(&moved, k, &m)?;
    let mut data = ProjectionData {
        identity: k == n,
        forms,
        complement,
        image,
        degree,
        degree_ok: degree == d,
        height_constant,
        fibers_sampled,
        fiber_max,
        fibers_ok: fiber_max <= d,
        height_ratio_max: None,
        exceptional,
        exceptional_truncated,
        draws,
        seed,
    };
    data.height_ratio_max = height_ratios(model, &data);
    Ok(data)
}

/// Degrees of fibers over random `F_p`-points of the image.
fn sample_fibers(moved: &[QPoly], image: &ZPoly, k: usize, samples: usize, rng: &mut ChaCha8Rng) -> Result<(usize, u64)> {
    let p = FIBER_PRIME;
    let n = moved[0].arity();
    let img = image.reduce_mod(p);
    if img.total_degree() != image.total_degree() {
        return Err(Error::BadPrime {
            p,
            reason: "image degree drops".into(),
        });
    }
    let gens: Vec<Polynomial<Fp>> = moved.iter().map(|g| Ok(to_z(g)?.reduce_mod(p))).collect::<Result<_>>()?;
    let one = Fp::new(1, p);
    let mut seen = 0;
    let mut worst = 0;
    let mut tries = 0;
    while seen < samples && tries < 20 * samples.max(1) {
        tries += 1;
        let head: Vec<Fp> = (0..k - 1).map(|_| Fp::from_u64(rng.gen_range(0..p), p)).collect();
        if head.iter().all(|c| c.is_zero_elem()) {
            continue;
        }
        let mut vals: Vec<Option<Fp>> = head.iter().cloned().map(Some).collect();
        vals.push(None);
        let uni = img.partial_eval(&vals).univariate_coeffs(k - 1);
        let roots = roots_finite(&UPoly::new(uni));
        for t in roots {
            if seen == samples {
                break;
            }
            let mut z = head.clone();
            z.push(t);
            // The fiber is cut out by z_i x'_j - z_j x'_i.
            let mut eqs = gens.clone();
            let var = |i: usize| Polynomial::var(i, n, VarStyle::Projective, &one);
            for i in 0..k {
                for j in i + 1..k {
                    let e = var(j).scale(&z[i]).sub(&var(i).scale(&z[j]));
                    if !e.is_zero() {
                        eqs.push(e);
                    }
                }
            }
            let hd = buchberger(&eqs, MonomialOrder::GradedRevLex)?.hilbert_fit()?;
            match hd.dim {
                Some(0) => worst = worst.max(hd.degree),
                Some(_) => worst = u64::MAX,
                None => {}
            }
            seen += 1;
        }
    }
    Ok((seen, worst))
}

/// The variety together with the maximal minors of its Jacobian in the
/// eliminated coordinates, pulled back to the original coordinates.
fn ramification_locus(moved: &[QPoly], k: usize, m: &[Vec<i64>]) -> Result<(Vec<ZPoly>, bool)> {
    let n = moved[0].arity();
    let cols: Vec<usize> = (k..n).collect();
    if cols.is_empty() {
        return Ok((Vec::new(), false));
    }
    let jac: Vec<Vec<QPoly>> = moved.iter().map(|g| cols.iter().map(|&c| g.derivative(c)).collect()).collect();
    let mut out = Vec::new();
    let mut truncated = false;
    for rows in combinations(jac.len(), cols.len()) {
        if out.len() == MAX_MINORS {
            truncated = true;
            break;
        }
        let sub: Vec<Vec<QPoly>> = rows.iter().map(|&i| jac[i].clone()).collect();
        let det = poly_det(&sub);
        if !det.is_zero() {
            out.push(to_z(&in_old_coords(&det, m))?);
        }
    }
    let mut all: Vec<ZPoly> = moved.iter().map(|g| to_z(&in_old_coords(g, m))).collect::<Result<_>>()?;
    all.extend(out);
    Ok((all, truncated))
}

/// Largest `H(image) / H(P)` over small points of the variety.
fn height_ratios(model: &IntegralModel, data: &ProjectionData) -> Option<f64> {
    if model.arity() > 6 {
        return None;
    }
    let opts = EnumOptions {
        work_cap: 2_000_000,
        parallel: false,
    };
    let pts = projective_enum(model, &BoxBounds::uniform(model.arity(), 2), None, false, opts).ok()?;
    pts.points
        .iter()
        .filter_map(|p| {
            let img = data.apply(p)?;
            Some(img.height().to_f64()? / p.height().to_f64()?)
        })
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
}

/// Primitive points up to sign with height at most `B`.
pub fn count_projective(model: &IntegralModel, b: i64, opts: &PipelineOptions) -> Result<CountReport> {
    let started = Instant::now();
    let n = model.arity();
    let query = Query {
        poly: model.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>().join("; "),
        b,
        mode: Mode::Projective,
    };
    if b < 1 {
        return Err(Error::Invalid("B must be at least 1".into()));
    }
    let mut report = if model.is_hypersurface() && model.dim() as usize + 2 == n && n >= 4 {
        cone_route(model, b, opts)?.into_report(query.clone(), opts.seed, started)
    } else if model.dim() as usize + 2 == n || model.dim() == 0 {
        let pts = projective_enum(model, &BoxBounds::uniform(n, b), None, false, opts.enumerate)?;
        let mut r = CountReport::new(query.clone(), opts.seed);
        r.count = pts.len() as u64;
        r.trace.push(TraceStep::new(
            "enumeration",
            json!({"reason": "low-dimensional hypersurface or finite set"}),
        ));
        r
    } else {
        projection_route(model, b, opts)?
    };
    report.query = query;
    if opts.oracle_check {
        let oracle = projective_enum(model, &BoxBounds::uniform(n, b), None, false, opts.enumerate)?.len() as u64;
        report.cross_check(oracle)?;
    }
    report.wall_time_s = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Cone over a hypersurface: `N(X;B)` is half the number of primitive
/// integer zeros of the defining form in the box.
fn cone_route(model: &IntegralModel, b: i64, opts: &PipelineOptions) -> Result<Tally> {
    let f = model.generators()[0].clone();
    let n = f.arity();
    if n == 4 {
        if !lines_on_surface_finite(&f)?.finite {
            return Err(Error::HypothesisViolation("surface contains infinitely many lines".into()));
        }
    } else if !opts.assert_planes_finite {
        return Err(Error::HypothesisViolation(
            "finiteness of codimension-one linear subspaces must be asserted".into(),
        ));
    }
    let mut warnings = Vec::new();
    match abs_irreducibility_probe(&f, 3, opts.seed)? {
        Irreducibility::Refuted { .. } => {
            return Err(Error::HypothesisViolation("form is not absolutely irreducible".into()))
        }
        Irreducibility::Inconclusive => warnings.push("absolute irreducibility not certified".into()),
        Irreducibility::Certified { .. } => {}
    }
    let cone = f.clone().with_style(VarStyle::Affine);
    let primitive = |y: &[i64]| Some(y.iter().fold(0i64, |g, &v| g.gcd(&v)) == 1);
    let mut t = hypersurface_tally(&cone, b, Some(&primitive), opts)?;
    let n_cone = t.points.kept;
    let prim = t.points.marked;
    if prim % 2 != 0 {
        return Err(Error::Invalid("primitive cone points do not pair up".into()));
    }
    t.trace.insert(
        0,
        TraceStep::new(
            "cone",
            json!({"cone_count": n_cone, "primitive": prim, "nonprimitive_including_origin": n_cone - prim}),
        ),
    );
    t.points.kept = prim / 2;
    t.warnings.extend(warnings);
    Ok(t)
}

/// Projection to a hypersurface, enumeration of its points of height at
/// most `cB`, and exact lifting of the fibers.
fn projection_route(model: &IntegralModel, b: i64, opts: &PipelineOptions) -> Result<CountReport> {
    let n = model.arity();
    let data = project_to_hypersurface(model, opts.seed, 20)?;
    let z = IntegralModel::hypersurface(&data.image)?;
    let cb = b * data.height_constant as i64;
    let zpts = projective_enum(&z, &BoxBounds::uniform(z.arity(), cb), None, false, opts.enumerate)?;
    let mut found = BTreeSet::new();
    for zp in &zpts.points {
        for x in data.fiber(model, zp)? {
            if x.height() <= BigInt::from(b) {
                found.insert(x);
            }
        }
    }
    let mut r = CountReport::new(
        Query {
            poly: String::new(),
            b,
            mode: Mode::Projective,
        },
        opts.seed,
    );
    r.count = found.len() as u64;
    r.bounds.push(("d * N(Z; cB)".into(), model.degree() * zpts.len() as u64));
    r.trace.push(TraceStep::new(
        "projection",
        json!({
            "image": data.image.to_string(),
            "image_degree": data.degree,
            "degree_ok": data.degree_ok,
            "fibers_ok": data.fibers_ok,
            "c": data.height_constant,
            "image_points": zpts.len(),
            "arity": n,
        }),
    ));
    if !data.degree_ok || !data.fibers_ok {
        r.warnings.push("projection checks failed; lifting remains exact".into());
    }
    r.certificates.push(serde_json::to_value(&data).unwrap_or_default());
    Ok(r)
}
