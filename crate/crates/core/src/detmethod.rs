//! Evaluation determinants, their p-adic valuations against the local lower
//! bound, auxiliary forms through point sets, and prime windows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::coeff::next_prime;
use crate::enumerate::{projective_enum, BoxBounds, EnumOptions};
use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, echelon_pivots_mod_p, integer_kernel_basis, least_kernel_vector};
use crate::monomial::{ExponentVec, MonomialOrder};
use crate::point::IntPoint;
use crate::poly::{QPoly, ZPoly};
use crate::staircase::{buchberger, GroebnerBasis, HilbertData};
use crate::zmodel::{local_g_function, max_generator_degree, specialize, CongruenceClass, FpPoint, IntegralModel, LocalGFunction};

/// Default exponent slack.
pub const DEFAULT_EPS: f64 = 0.1;

/// Prime used to pick independent rows before exact kernel work.
const ROW_PRIME: u64 = 2_147_483_647;

/// Smallest `k >= 1` with `h(k) >= s`.
pub fn select_degree(h: &HilbertData, s: u64) -> Result<u32> {
    if s == 0 {
        return Err(Error::Precondition("s must be at least 1".into()));
    }
    if h.dim.is_none() {
        return Err(Error::Precondition("empty projective scheme".into()));
    }
    let mut k = 1;
    while h.h(k) < s {
        k += 1;
        if k > 1 << 16 {
            return Err(Error::CapExceeded {
                what: "degree selection".into(),
                cap: 1 << 16,
            });
        }
    }
    Ok(k)
}

/// Value of a monomial at an integer point.
pub fn eval_monomial(e: &ExponentVec, x: &[BigInt]) -> BigInt {
    e.exps()
        .iter()
        .zip(x)
        .fold(BigInt::one(), |acc, (&k, v)| acc * v.pow(k))
}

/// Rows indexed by points, columns by monomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalMatrix {
    pub points: Vec<IntPoint>,
    pub monomials: Vec<ExponentVec>,
    pub entries: Vec<Vec<BigInt>>,
}

impl EvalMatrix {
    pub fn new(points: &[IntPoint], monomials: &[ExponentVec]) -> Result<Self> {
        let k = monomials.first().map(|m| m.total_degree());
        if monomials.iter().any(|m| Some(m.total_degree()) != k) {
            return Err(Error::Invalid("monomials must share one degree".into()));
        }
        let entries = points
            .iter()
            .map(|p| monomials.iter().map(|m| eval_monomial(m, p.coords())).collect())
            .collect();
        Ok(EvalMatrix {
            points: points.to_vec(),
            monomials: monomials.to_vec(),
            entries,
        })
    }

    pub fn is_square(&self) -> bool {
        self.points.len() == self.monomials.len()
    }
}

/// `p`-adic valuation; `None` for zero.
pub fn valuation(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

/// Exact determinant and its `p`-adic valuation (`None` means infinite).
pub fn det_valuation(m: &EvalMatrix, p: u64) -> Result<(BigInt, Option<u64>)> {
    if !m.is_square() {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    let det = det_bareiss(&m.entries);
    let v = valuation(&det, p);
    Ok((det, v))
}

/// Nondecreasing sequence where `k` occurs `g(k)` times, its first `s`
/// entries, and their sum.
pub fn lambda_bound(g: &[u64], s: usize) -> Result<(u64, Vec<u64>)> {
    let mut seq = Vec::with_capacity(s);
    'outer: for (k, &c) in g.iter().enumerate() {
        for _ in 0..c {
            if seq.len() == s {
                break 'outer;
            }
            seq.push(k as u64);
        }
    }
    if seq.len() < s {
        return Err(Error::Invalid(format!(
            "local data covers {} entries, {s} needed",
            seq.len()
        )));
    }
    Ok((seq.iter().sum(), seq))
}

/// Local g-function long enough to place `s` entries.
pub fn g_covering(model: &IntegralModel, p: u64, pt: &FpPoint, s: usize) -> Result<LocalGFunction> {
    let mut big_k = 2 * max_generator_degree(model) + 4;
    loop {
        let g = local_g_function(model, p, pt, big_k)?;
        if g.colength() >= s as u64 {
            return Ok(g);
        }
        if model.dim() == 0 && g.mu.is_some() {
            return Err(Error::Invalid(format!(
                "local ring has length {}, {s} points requested",
                g.colength()
            )));
        }
        big_k += 4;
        if big_k > 400 {
            return Err(Error::NotStabilized {
                what: "local g-function".into(),
                cap: 400,
            });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisibilityCertificate {
    pub model_hash: String,
    pub p: u64,
    pub point: FpPoint,
    pub mu: Option<u32>,
    pub g: Vec<u64>,
    pub n_sequence: Vec<u64>,
    pub lambda: u64,
    pub det: BigInt,
    /// `None` when the determinant vanishes.
    pub valuation: Option<u64>,
    pub s: usize,
    pub k: u32,
    /// `(r!/mu)^{1/r} (r/(r+1)) s^{1+1/r}`, reported only.
    pub predictor: Option<f64>,
}

impl DivisibilityCertificate {
    pub fn holds(&self) -> bool {
        self.valuation.is_none_or(|v| v >= self.lambda)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "type": "divisibility",
            "model_hash": self.model_hash,
            "prime": self.p,
            "class_point": self.point.to_string(),
            "mu": self.mu,
            "k": self.k,
            "s": self.s,
            "det": self.det.to_string(),
            "valuation": self.valuation,
            "lambda": self.lambda,
            "g": self.g,
            "n_sequence": self.n_sequence,
            "predictor": self.predictor,
        })
    }
}

fn factorial(r: u32) -> f64 {
    (1..=r).map(f64::from).product()
}

/// Checks `v_p(det) >= Lambda(s)` for points all specializing to `pt`.
pub fn verify_divisibility(
    model: &IntegralModel,
    p: u64,
    pt: &FpPoint,
    points: &[IntPoint],
    monomials: &[ExponentVec],
) -> Result<DivisibilityCertificate> {
    for x in points {
        if &specialize(x, p)? != pt {
            return Err(Error::Precondition(format!("{x} does not specialize to {pt}")));
        }
    }
    let m = EvalMatrix::new(points, monomials)?;
    let (det, v) = det_valuation(&m, p)?;
    let s = points.len();
    let g = g_covering(model, p, pt, s)?;
    let (lambda, seq) = lambda_bound(&g.values, s)?;
    let r = model.dim();
    let predictor = g.mu.filter(|_| r > 0).map(|mu| {
        let rf = r as f64;
        (factorial(r) / mu as f64).powf(1.0 / rf) * (rf / (rf + 1.0)) * (s as f64).powf(1.0 + 1.0 / rf)
    });
    let cert = DivisibilityCertificate {
        model_hash: model.hash_hex(),
        p,
        point: pt.clone(),
        mu: g.mu,
        g: g.values,
        n_sequence: seq,
        lambda,
        det,
        valuation: v,
        s,
        k: monomials.first().map_or(0, |e| e.total_degree()),
        predictor,
    };
    if !cert.holds() {
        return Err(Error::Invalid(format!(
            "valuation {:?} below local bound {lambda}",
            cert.valuation
        )));
    }
    Ok(cert)
}

/// Both sides of the prime-product condition, in natural logs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub holds: bool,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub margin: f64,
}

/// `prod p_i^{(d/mu_i)^{1/r}} >= (prod B_m^{a_m})^{(r+1)/r} (prod B_m)^eps`.
pub fn condition_check(
    class: &[(u64, u32)],
    bounds: &[f64],
    abundances: &[f64],
    r: u32,
    d: u64,
    eps: f64,
) -> Result<ConditionRecord> {
    if r == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    if bounds.len() != abundances.len() {
        return Err(Error::ArityMismatch {
            expected: bounds.len(),
            got: abundances.len(),
        });
    }
    let rf = r as f64;
    let lhs: f64 = class
        .iter()
        .map(|&(p, mu)| (d as f64 / mu as f64).powf(1.0 / rf) * (p as f64).ln())
        .sum();
    let logs: Vec<f64> = bounds.iter().map(|b| b.ln()).collect();
    let weighted: f64 = logs.iter().zip(abundances).map(|(l, a)| l * a).sum();
    let rhs = weighted * (rf + 1.0) / rf + eps * logs.iter().sum::<f64>();
    let margin = lhs - rhs;
    Ok(ConditionRecord {
        holds: margin >= -1e-9 * (1.0 + rhs.abs()),
        lhs_log: lhs,
        rhs_log: rhs,
        margin,
    })
}

/// The `count` smallest primes `>= threshold`.
pub fn prime_window(threshold: f64, count: usize) -> Result<Vec<u64>> {
    if !(threshold >= 2.0) || count == 0 {
        return Err(Error::Precondition("threshold >= 2 and count >= 1 required".into()));
    }
    let mut out = Vec::with_capacity(count);
    let mut q = next_prime(threshold.ceil() as u64);
    while out.len() < count {
        out.push(q);
        q = next_prime(q + 1);
    }
    Ok(out)
}

/// `B^{(1+eps)/sqrt(d)}`.
pub fn window_threshold(b: f64, d: u64, eps: f64) -> f64 {
    b.powf((1.0 + eps) / (d as f64).sqrt())
}

/// Abundances as floats: exact limits when fitted, estimates otherwise.
pub fn abundance_values(gb: &GroebnerBasis<BigRational>, k_max: u32) -> Result<Vec<f64>> {
    let a = gb.abundances(k_max.max(3))?;
    Ok(a.exact
        .unwrap_or(a.estimates)
        .iter()
        .map(|x| x.to_f64().unwrap_or(0.0))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuxFormCertificate {
    pub model_hash: String,
    pub bounds: BoxBounds,
    pub class: CongruenceClass,
    pub eps: f64,
    /// Set when the point set was empty and `form` vanishes vacuously.
    pub empty: bool,
    pub form: ZPoly,
    pub k: u32,
    pub s: usize,
    pub rank: usize,
    pub h_k: u64,
    pub points: Vec<IntPoint>,
    pub normal_form_nonzero: bool,
    pub condition: Option<ConditionRecord>,
}

impl AuxFormCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .form
            .terms()
            .map(|(e, c)| json!([e.exps(), c.to_string()]))
            .collect();
        json!({
            "type": "aux_form",
            "model_hash": self.model_hash,
            "primes": self.class.entries.iter().map(|e| e.p).collect::<Vec<_>>(),
            "class_points": self.class.entries.iter().map(|e| e.point.to_string()).collect::<Vec<_>>(),
            "mu": self.class.entries.iter().map(|e| e.mu).collect::<Vec<_>>(),
            "k": self.k,
            "s": self.s,
            "rank": self.rank,
            "h_k": self.h_k,
            "empty": self.empty,
            "G": self.form.to_string(),
            "G_coefficients": coeffs,
            "valuation": serde_json::Value::Null,
            "lambda": serde_json::Value::Null,
            "condition_margin": self.condition.as_ref().map(|c| c.margin),
            "condition_exponent": "(d/mu)^(1/r)",
        })
    }
}

fn form_from(monomials: &[ExponentVec], coeffs: &[BigInt], arity: usize) -> ZPoly {
    ZPoly::from_terms(
        arity,
        crate::poly::VarStyle::Projective,
        monomials
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Lexicographically least primitive kernel vector of the evaluation
/// matrix, or `None` when it has full column rank. Also returns the rank.
pub fn kernel_form_coeffs(rows: &[Vec<BigInt>], ncols: usize) -> (usize, Option<Vec<BigInt>>) {
    if rows.is_empty() {
        let mut v = vec![BigInt::zero(); ncols];
        if let Some(last) = v.last_mut() {
            *last = BigInt::one();
        }
        let basis = integer_kernel_basis(Vec::new(), ncols);
        return (0, basis.into_iter().min().or(Some(v)));
    }
    // Rows independent modulo a large prime, found on the transpose.
    let pb = BigInt::from(ROW_PRIME);
    let transposed: Vec<Vec<u64>> = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].mod_floor(&pb).to_u64().unwrap()).collect())
        .collect();
    let picks = echelon_pivots_mod_p(transposed, rows.len(), ROW_PRIME);
    if picks.len() == ncols {
        return (ncols, None);
    }
    let sub: Vec<Vec<BigInt>> = picks.iter().map(|&i| rows[i].clone()).collect();
    if let Some(v) = least_kernel_vector(sub, ncols) {
        let ok = rows
            .iter()
            .all(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum::<BigInt>().is_zero());
        if ok {
            return (picks.len(), Some(v));
        }
    }
    // Unlucky prime: fall back to the full matrix.
    let basis = integer_kernel_basis(rows.to_vec(), ncols);
    let rank = ncols - basis.len();
    (rank, basis.into_iter().min())
}

/// A primitive form of minimal degree vanishing on every point of the
/// model in the box and class, and not in the ideal.
pub fn aux_form(
    model: &IntegralModel,
    bounds: &BoxBounds,
    class: &CongruenceClass,
    k_cap: u32,
    eps: f64,
    opts: EnumOptions,
) -> Result<AuxFormCertificate> {
    let pts = projective_enum(model, bounds, Some(class), false, opts)?;
    aux_form_for_points(model, bounds, class, &pts.points, k_cap, eps)
}

/// As [`aux_form`] for an already enumerated point set.
pub fn aux_form_for_points(
    model: &IntegralModel,
    bounds: &BoxBounds,
    class: &CongruenceClass,
    points: &[IntPoint],
    k_cap: u32,
    eps: f64,
) -> Result<AuxFormCertificate> {
    let gens: Vec<QPoly> = model.rational_generators();
    let gb = buchberger(&gens, MonomialOrder::GradedRevLex)?;
    let n = model.arity();
    let condition = if class.is_empty() || model.dim() == 0 {
        None
    } else {
        let ab = abundance_values(&gb, 8)?;
        let b: Vec<f64> = bounds.bounds.iter().map(|&v| v as f64).collect();
        let cls: Vec<(u64, u32)> = class.entries.iter().map(|e| (e.p, e.mu)).collect();
        Some(condition_check(&cls, &b, &ab, model.dim(), model.degree(), eps)?)
    };
    let mut k = 1;
    loop {
        if k > k_cap {
            return Err(Error::CapExceeded {
                what: "auxiliary form degree".into(),
                cap: k_cap as u128,
            });
        }
        let mons = gb.standard_monomials(k)?;
        if mons.is_empty() {
            return Err(Error::Precondition("no standard monomials; empty scheme".into()));
        }
        let m = EvalMatrix::new(points, &mons)?;
        let (rank, kernel) = kernel_form_coeffs(&m.entries, mons.len());
        if let Some(c) = kernel {
            let form = form_from(&mons, &c, n);
            let nf = gb.normal_form(&form.to_rational())?;
            for x in points {
                if !crate::enumerate::IntEval::new(&form).eval(&to_i64(x)?).is_zero() {
                    return Err(Error::Invalid(format!("form does not vanish at {x}")));
                }
            }
            return Ok(AuxFormCertificate {
                model_hash: model.hash_hex(),
                bounds: bounds.clone(),
                class: class.clone(),
                eps,
                empty: points.is_empty(),
                form,
                k,
                s: points.len(),
                rank,
                h_k: mons.len() as u64,
                points: points.to_vec(),
                normal_form_nonzero: !nf.is_zero(),
                condition,
            });
        }
        k += 1;
    }
}

fn to_i64(x: &IntPoint) -> Result<Vec<i64>> {
    x.coords()
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| Error::Invalid("coordinate exceeds 64 bits".into())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational;
    use crate::staircase::buchberger;
    use proptest::prelude::*;

    fn model(s: &[&str], n: usize) -> IntegralModel {
        let gens: Vec<QPoly> = s.iter().map(|t| parse_rational(t, n).unwrap()).collect();
        IntegralModel::new(&gens).unwrap()
    }

    fn hilbert(m: &IntegralModel) -> HilbertData {
        buchberger(&m.rational_generators(), MonomialOrder::GradedRevLex)
            .unwrap()
            .hilbert_fit()
            .unwrap()
    }

    fn pts(v: &[&[i64]]) -> Vec<IntPoint> {
        v.iter().map(|c| IntPoint::from_i64(c)).collect()
    }

    fn standard(m: &IntegralModel, k: u32) -> Vec<ExponentVec> {
        buchberger(&m.rational_generators(), MonomialOrder::GradedRevLex)
            .unwrap()
            .standard_monomials(k)
            .unwrap()
    }

    #[test]
    fn degree_selection() {
        let conic = model(&["x0*x2 - x1^2"], 3);
        let h = hilbert(&conic);
        assert_eq!(select_degree(&h, 1).unwrap(), 1);
        assert_eq!(select_degree(&h, 4).unwrap(), 2);
        let quartic = model(&["x0^4 + x1^4 + x2^4 + x3^4"], 4);
        let h = hilbert(&quartic);
        assert_eq!(select_degree(&h, 34).unwrap(), 4);
        assert_eq!(select_degree(&h, 35).unwrap(), 5);
        for s in 1..200u64 {
            let k = select_degree(&h, s).unwrap();
            assert!(h.h(k) >= s);
            assert!(k == 1 || h.h(k - 1) < s);
        }
    }

    #[test]
    fn valuations() {
        let id = EvalMatrix::new(
            &pts(&[&[1, 0], &[0, 1]]),
            &[ExponentVec::new(vec![1, 0]), ExponentVec::new(vec![0, 1])],
        )
        .unwrap();
        assert_eq!(det_valuation(&id, 7).unwrap(), (BigInt::one(), Some(0)));
        // Vandermonde at y = 3, 3 + 7, 3 + 14, 3 + 21.
        let ys = [3i64, 10, 17, 24];
        let points: Vec<IntPoint> = ys.iter().map(|&y| IntPoint::from_i64(&[1, y])).collect();
        let mons: Vec<ExponentVec> = (0..4).map(|j| ExponentVec::new(vec![3 - j, j])).collect();
        let m = EvalMatrix::new(&points, &mons).unwrap();
        let (_, v) = det_valuation(&m, 7).unwrap();
        assert!(v.unwrap() >= 6);
        let rep = EvalMatrix::new(&pts(&[&[1, 2], &[1, 2]]), &mons[..2]).unwrap();
        assert_eq!(det_valuation(&rep, 7).unwrap(), (BigInt::zero(), None));
    }

    #[test]
    fn lambda_examples() {
        let ones = vec![1u64; 10];
        let (l, seq) = lambda_bound(&ones, 5).unwrap();
        assert_eq!(seq, vec![0, 1, 2, 3, 4]);
        assert_eq!(l, 10);
        let node = [1u64, 2, 2, 2, 2, 2];
        let (_, seq) = lambda_bound(&node, 7).unwrap();
        assert_eq!(seq, vec![0, 1, 1, 2, 2, 3, 3]);
        assert_eq!(lambda_bound(&node, 4).unwrap().0, 4);
        let smooth_surface = [1u64, 2, 3, 4];
        assert_eq!(lambda_bound(&smooth_surface, 6).unwrap().0, 8);
        assert!(lambda_bound(&[1, 1], 3).is_err());
    }

    #[test]
    fn divisibility_examples() {
        let line = model(&["x2"], 3);
        let pt = FpPoint::from_residues(7, &[1, 0, 0]).unwrap();
        let points = pts(&[&[1, 0, 0], &[1, 7, 0], &[1, 14, 0]]);
        let mons = standard(&line, 2);
        assert_eq!(mons.len(), 3);
        let c = verify_divisibility(&line, 7, &pt, &points, &mons).unwrap();
        assert_eq!(c.lambda, 3);
        assert_eq!(c.valuation, Some(3));

        let node = model(&["x0*x2^2 - x1^3 - x0*x1^2"], 3);
        let pt = FpPoint::from_residues(5, &[1, 0, 0]).unwrap();
        let points = pts(&[&[1, 0, 0], &[1, 15, 60], &[1, 15, -60], &[1, 35, 210]]);
        let mons = standard(&node, 2)[..4].to_vec();
        let c = verify_divisibility(&node, 5, &pt, &points, &mons).unwrap();
        assert_eq!(c.mu, Some(2));
        assert_eq!(c.lambda, 4);
        assert!(c.holds());

        let single = verify_divisibility(&line, 7, &pt_line(), &pts(&[&[1, 3, 0]]), &standard(&line, 1)[..1]).unwrap();
        assert_eq!(single.lambda, 0);

        let off = pts(&[&[1, 1, 0]]);
        assert!(matches!(
            verify_divisibility(&line, 7, &FpPoint::from_residues(7, &[1, 0, 0]).unwrap(), &off, &standard(&line, 1)[..1]),
            Err(Error::Precondition(_))
        ));
    }

    fn pt_line() -> FpPoint {
        FpPoint::from_residues(7, &[1, 3, 0]).unwrap()
    }

    #[test]
    fn condition_examples() {
        let triv = condition_check(&[], &[1.0; 4], &[0.25; 4], 1, 4, 0.1).unwrap();
        assert!(triv.holds);
        assert_eq!(triv.margin, 0.0);
        let b = 1e4;
        let bounds = [1.0, b, b, b];
        let ab = [0.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        let p = window_threshold(b, 1, 0.1).powf(0.5).ceil() as u64 + 1;
        let p = next_prime(p);
        let ok = condition_check(&[(p, 1)], &bounds, &ab, 1, 4, 0.1).unwrap();
        assert!(ok.holds, "{ok:?}");
        let bad = condition_check(&[(2, 1)], &[1.0, 1e6, 1e6, 1e6], &ab, 1, 4, 0.1).unwrap();
        assert!(!bad.holds && bad.margin < 0.0);
    }

    #[test]
    fn prime_windows() {
        assert_eq!(prime_window(10.0, 3).unwrap(), vec![11, 13, 17]);
        assert_eq!(prime_window(2.0, 3).unwrap(), vec![2, 3, 5]);
        let t = window_threshold(1000.0, 4, 0.1);
        assert!((t - 44.668).abs() < 1e-2);
        assert_eq!(prime_window(t, 1).unwrap(), vec![47]);
        assert!(prime_window(1.0, 1).is_err());
    }

    #[test]
    fn aux_form_conic() {
        let conic = model(&["x0*x2 - x1^2"], 3);
        let c = aux_form(&conic, &BoxBounds::uniform(3, 10), &CongruenceClass::empty(), 10, DEFAULT_EPS, EnumOptions::default()).unwrap();
        assert!(c.s > 4);
        assert!(c.normal_form_nonzero);
        assert!((c.rank as u64) < c.h_k);
        for x in &c.points {
            assert!(c.form.eval_int(x.coords()).is_zero());
        }
        // Minimality: one degree lower has full column rank.
        if c.k > 1 {
            let mons = standard(&conic, c.k - 1);
            let m = EvalMatrix::new(&c.points, &mons).unwrap();
            assert_eq!(kernel_form_coeffs(&m.entries, mons.len()).1, None);
        }
        let one = aux_form_for_points(&conic, &BoxBounds::uniform(3, 1), &CongruenceClass::empty(), &pts(&[&[1, 1, 1]]), 5, 0.1).unwrap();
        assert_eq!(one.k, 1);
        assert_eq!(one.form.total_degree(), Some(1));
        assert!(one.form.eval_int(&[1.into(), 1.into(), 1.into()]).is_zero());
        let empty = aux_form_for_points(&conic, &BoxBounds::uniform(3, 1), &CongruenceClass::empty(), &[], 5, 0.1).unwrap();
        assert!(empty.empty && empty.normal_form_nonzero);
    }

    fn curve_points(kind: u8, p: i64, ts: &[i64]) -> (IntegralModel, FpPoint, Vec<IntPoint>) {
        let (m, f): (IntegralModel, Box<dyn Fn(i64) -> [i64; 3]>) = match kind {
            0 => (model(&["x2"], 3), Box::new(move |t| [1, t * p, 0])),
            1 => (
                model(&["x0*x2^2 - x1^3 - x0*x1^2"], 3),
                Box::new(move |t| {
                    let u = 1 + t * p;
                    [1, u * u - 1, u * (u * u - 1)]
                }),
            ),
            _ => (
                model(&["x0*x2^3 - x1^4"], 3),
                Box::new(move |t| {
                    let u = t * p;
                    [1, u * u * u, u * u * u * u]
                }),
            ),
        };
        let mut seen = Vec::new();
        for &t in ts {
            let x = IntPoint::from_i64(&f(t));
            if !seen.contains(&x) {
                seen.push(x);
            }
        }
        (m, FpPoint::from_residues(p as u64, &[1, 0, 0]).unwrap(), seen)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn valuation_at_least_lambda(kind in 0u8..3, pi in 0usize..3, ts in prop::collection::vec(-6i64..6, 1..12)) {
            let p = [3i64, 5, 7][pi];
            let (m, pt, points) = curve_points(kind, p, &ts);
            let h = hilbert(&m);
            let s = points.len();
            let k = select_degree(&h, s as u64).unwrap();
            let mons = standard(&m, k)[..s].to_vec();
            let c = verify_divisibility(&m, p as u64, &pt, &points, &mons).unwrap();
            prop_assert!(c.holds());
            prop_assert_eq!(c.mu, Some([1, 2, 3][kind as usize]));
        }
    }
}
