use std::path::Path;

use detcount::parse::{parse_integer, parse_rational};
use detcount::zmodel::{FpPoint, IntegralModel};
use detcount::{Error, QPoly, Result, ZPoly};

/// Generators read from a file path or taken literally, separated by `;` or
/// newlines.
pub fn read_generators(arg: &str) -> Result<Vec<String>> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Error::Invalid(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    let gens: Vec<String> = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty() && !s.starts_with('#'))
        .map(String::from)
        .collect();
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    Ok(gens)
}

/// Variable style and arity implied by the highest variable index:
/// `x0..xn` gives `n + 1` projective variables, `y1..yn` gives `n` affine
/// ones.
pub fn infer_arity(gens: &[String]) -> Result<(usize, bool)> {
    let (mut max_x, mut max_y): (Option<usize>, Option<usize>) = (None, None);
    for g in gens {
        let b = g.as_bytes();
        let mut i = 0;
        while i < b.len() {
            let c = b[i];
            if (c == b'x' || c == b'y') && i + 1 < b.len() && b[i + 1].is_ascii_digit() {
                let start = i + 1;
                let mut j = start;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                let idx: usize = g[start..j].parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "bad variable index".into(),
                })?;
                let slot = if c == b'x' { &mut max_x } else { &mut max_y };
                *slot = Some(slot.map_or(idx, |m| m.max(idx)));
                i = j;
            } else {
                i += 1;
            }
        }
    }
    match (max_x, max_y) {
        (Some(_), Some(_)) => Err(Error::Invalid("mixed x and y variables".into())),
        (Some(m), None) => Ok((m + 1, true)),
        (None, Some(m)) => Ok((m, false)),
        (None, None) => Err(Error::Invalid("no variables found".into())),
    }
}

pub struct Input {
    pub gens: Vec<String>,
    pub arity: usize,
    pub projective: bool,
}

impl Input {
    pub fn new(arg: &str, arity: Option<usize>) -> Result<Self> {
        let gens = read_generators(arg)?;
        let (inferred, projective) = infer_arity(&gens)?;
        Ok(Input {
            gens,
            arity: arity.unwrap_or(inferred),
            projective,
        })
    }

    pub fn rational(&self) -> Result<Vec<QPoly>> {
        self.gens.iter().map(|g| parse_rational(g, self.arity)).collect()
    }

    pub fn single_integer(&self) -> Result<ZPoly> {
        if self.gens.len() != 1 {
            return Err(Error::Invalid("expected a single polynomial".into()));
        }
        parse_integer(&self.gens[0], self.arity)
    }

    /// Projective model; affine input is closed up by homogenizing each
    /// generator.
    pub fn model(&self) -> Result<IntegralModel> {
        let gens = self.rational()?;
        let gens = if self.projective {
            gens
        } else {
            gens.iter()
                .map(|g| {
                    let d = g.total_degree().ok_or(Error::ZeroPolynomial)?;
                    Ok(g.homogenize(d)?.with_style(detcount::VarStyle::Projective))
                })
                .collect::<Result<_>>()?
        };
        IntegralModel::new(&gens)
    }

    /// A single affine form in three variables, dehomogenized when given
    /// projectively.
    pub fn affine_form(&self) -> Result<ZPoly> {
        let f = self.single_integer()?;
        Ok(if self.projective { f.dehomogenize() } else { f })
    }
}

pub fn parse_point(text: &str, p: u64) -> Result<FpPoint> {
    let v: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|e| Error::Invalid(format!("point entry {s:?}: {e}"))))
        .collect::<Result<_>>()?;
    FpPoint::from_residues(p, &v)
}

/// `a/b` or a decimal.
pub fn parse_eps(text: &str) -> Result<f64> {
    let bad = || Error::Invalid(format!("bad eps {text:?}"));
    let v = match text.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().map_err(|_| bad())? / b.trim().parse::<f64>().map_err(|_| bad())?,
        None => text.trim().parse::<f64>().map_err(|_| bad())?,
    };
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// `a:b:steps`.
pub fn parse_grid(text: &str) -> Result<(i64, i64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Invalid(format!("bad grid {text:?}; expected a:b:steps"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
        parts[2].parse().map_err(|_| bad())?,
    ))
}
