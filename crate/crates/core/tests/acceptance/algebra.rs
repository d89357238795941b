use detcount::staircase::{buchberger, hilbert_by_rank, principal_abundances};
use detcount::{ExponentVec, Fp, MonomialOrder, Polynomial, QPoly, VarStyle};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Outcome;

const FIELD: u64 = 32003;

fn random_exponent(rng: &mut ChaCha8Rng, arity: usize, d: u32) -> ExponentVec {
    let mut e = vec![0u32; arity];
    for _ in 0..d {
        e[rng.gen_range(0..arity)] += 1;
    }
    ExponentVec::new(e)
}

fn random_form_fp(rng: &mut ChaCha8Rng, arity: usize, d: u32, terms: usize) -> Polynomial<Fp> {
    Polynomial::from_terms(
        arity,
        VarStyle::Projective,
        (0..terms).map(|_| (random_exponent(rng, arity, d), Fp::from_u64(rng.gen_range(1..FIELD), FIELD))),
    )
}

fn random_form_q(rng: &mut ChaCha8Rng, arity: usize, d: u32, terms: usize) -> QPoly {
    QPoly::from_terms(
        arity,
        VarStyle::Projective,
        (0..terms).map(|_| {
            let c: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
            (random_exponent(rng, arity, d), BigRational::from_integer(BigInt::from(c)))
        }),
    )
}

/// Sum of sigma equals k h(k) for every degree up to 2d + 6, and h agrees
/// with the Macaulay-matrix rank where that matrix is small.
pub fn staircase_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = 0;
    let mut rank_checks = 0;
    for i in 0..20 {
        let arity = rng.gen_range(2..=5);
        let d = rng.gen_range(1..=5);
        let ngens = rng.gen_range(1..=3);
        let mut gens: Vec<Polynomial<Fp>> = (0..ngens)
            .map(|_| {
                let t = rng.gen_range(2..=5);
                let deg = rng.gen_range(1..=d);
                random_form_fp(&mut rng, arity, deg, t)
            })
            .filter(|g| !g.is_zero())
            .collect();
        if gens.is_empty() {
            gens.push(random_form_fp(&mut rng, arity, d, 1));
        }
        let gb = match buchberger(&gens, MonomialOrder::GradedRevLex) {
            Ok(gb) => gb,
            Err(e) => return Outcome::new(false, format!("ideal {i}: {e}")),
        };
        for k in 0..=2 * d + 6 {
            let h = gb.hilbert_function(k).unwrap();
            let s: u64 = gb.sigma(k).unwrap().iter().sum();
            if s != k as u64 * h {
                return Outcome::new(false, format!("ideal {i}, k = {k}: sigma sum {s}, k h = {}", k as u64 * h));
            }
            checks += 1;
            if k <= 4 && h <= 200 && hilbert_by_rank(&gens, k) != h {
                return Outcome::new(false, format!("ideal {i}, k = {k}: rank oracle disagrees"));
            }
            rank_checks += usize::from(k <= 4 && h <= 200);
        }
    }
    Outcome::new(true, format!("20 ideals, {checks} degrees exact, {rank_checks} rank cross-checks"))
}

/// Exact abundance limits of principal ideals equal `(d - lead_m)/(n d)`
/// under both orders.
pub fn principal_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases = 0;
    for i in 0..10 {
        let arity = rng.gen_range(3..=4);
        let d = rng.gen_range(2..=4);
        let t = rng.gen_range(2..=5);
        let f = random_form_q(&mut rng, arity, d, t);
        if f.is_zero() {
            continue;
        }
        for order in [MonomialOrder::GradedLex, MonomialOrder::GradedRevLex] {
            let gb = buchberger(std::slice::from_ref(&f), order).unwrap();
            let lead = gb.leading_monomials()[0].clone();
            let closed = principal_abundances(&lead);
            let k_max = 2 * lead.total_degree() + arity as u32 + 6;
            let ab = gb.abundances(k_max).unwrap();
            let Some(exact) = ab.exact.as_ref() else {
                return Outcome::new(false, format!("ideal {i} ({order:?}): no exact limit"));
            };
            if exact != &closed {
                return Outcome::new(false, format!("ideal {i} ({order:?}): {exact:?} vs {closed:?}"));
            }
            let total: BigRational = ab.estimates.iter().sum();
            if total != BigRational::from_integer(1.into()) {
                return Outcome::new(false, format!("ideal {i} ({order:?}): estimates sum to {total}"));
            }
            cases += 1;
        }
    }
    Outcome::new(cases == 20, format!("{cases} ideal/order pairs exact"))
}

fn revlex_cases() -> Vec<(Vec<QPoly>, &'static str)> {
    let q = |s: &str, n: usize| detcount::parse::parse_rational(s, n).unwrap();
    vec![
        (vec![q("x0^2 + x1^2 + x2^2", 3)], "conic"),
        (vec![q("x0*x2 - x1^2", 3)], "parabola closure"),
        (vec![q("x1^3 + x2^3 + x3^3 + x0^3", 4)], "cubic surface"),
        (vec![q("x0^4 + x1^4 - x2^4 - x3^4", 4)], "quartic surface"),
        (vec![q("x1^4 - x2^3*x3 + x3^4 + x0^2*x1*x2 - 7*x0^4", 4)], "affine quartic closure"),
        (vec![q("x0*x2 - x1^2", 4), q("x0*x3 - x1*x2", 4), q("x1*x3 - x2^2", 4)], "twisted cubic"),
        (vec![q("x1^2 + x2^2 - x0^2", 4), q("x3", 4)], "plane conic in P^3"),
        (vec![q("x0^2 - x1*x2", 4), q("x1^2 - x2*x3 + x0*x3", 4)], "quartic space curve"),
        (vec![q("x1^4 + x2^4 + x3^4 + x4^4 - x0^4", 5)], "quartic threefold"),
        (vec![q("x1*x2 - x0*x3", 4), q("x2^2 - x0*x1 + x3^2", 4), q("x1 + x2 + x3", 4)], "four points"),
    ]
}

/// Under graded-revlex, `a_1 + .. + a_n <= r/(r+1)` when `x0 = 0` meets the
/// variety properly.
pub fn revlex_bound() -> Outcome {
    let mut lines = Vec::new();
    for (gens, name) in revlex_cases() {
        let gb = buchberger(&gens, MonomialOrder::GradedRevLex).unwrap();
        let hd = gb.hilbert_fit().unwrap();
        let Some(r) = hd.dim else {
            return Outcome::new(false, format!("{name}: empty"));
        };
        let mut cut = gens.clone();
        cut.push(QPoly::var(0, gens[0].arity(), VarStyle::Projective, &BigRational::from_integer(1.into())));
        let cut_dim = buchberger(&cut, MonomialOrder::GradedRevLex).unwrap().hilbert_fit().unwrap().dim;
        let proper = if r == 0 { cut_dim.is_none() } else { cut_dim == Some(r - 1) };
        if !proper {
            return Outcome::new(false, format!("{name}: x0 = 0 is not proper"));
        }
        let d = gens.iter().filter_map(|g| g.total_degree()).max().unwrap();
        let k = 2 * d + 6;
        let ab = gb.abundances(k).unwrap();
        let bound = r as f64 / (r as f64 + 1.0) + 1e-6;
        let est: f64 = ab.estimates[1..].iter().map(|v| v.to_f64().unwrap()).sum();
        let limit: Option<f64> = ab
            .exact
            .as_ref()
            .map(|v| v[1..].iter().map(|x| x.to_f64().unwrap()).sum());
        let value = limit.unwrap_or(est);
        if value > bound || limit.is_none() && !ab.radius.is_zero() && est > bound {
            return Outcome::new(false, format!("{name}: sum {value:.6} above {bound:.6} (estimate {est:.6})"));
        }
        lines.push(format!("{name}: r={r} est={est:.4} limit={}", limit.map_or("-".into(), |v| format!("{v:.4}"))));
    }
    Outcome::new(true, format!("10 ideals; {}", lines.join("; ")))
}
