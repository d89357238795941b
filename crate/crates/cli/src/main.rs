//! Command line front end: exact staircases, local data, certificates and
//! point counts.

mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use detcount::detmethod::{aux_form, verify_divisibility, DEFAULT_EPS};
use detcount::enumerate::{affine_count, projective_enum, BoxBounds, EnumOptions};
use detcount::geometry::{condition_report, count_lines_mod_p, good_point_filter, lines_on_surface_finite};
use detcount::pipeline::{
    count_curve, count_hypersurface, count_projective, count_surface, exponent_fit, geometric_grid,
    project_to_hypersurface, CountReport, PipelineOptions,
};
use detcount::staircase::buchberger;
use detcount::zmodel::{fp_points, local_g_function, max_generator_degree, reduce_mod_p, CongruenceClass};
use detcount::{Error, MonomialOrder, Result};
use serde_json::{json, Value};

use input::{parse_eps, parse_grid, parse_point, Input};

#[derive(Parser)]
#[command(name = "detcount", version, about = "Exact point counting with the p-adic determinant method")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Polynomial, `;`-separated generators, or a file holding them.
    #[arg(long, global = true)]
    poly: Option<String>,
    /// Override the variable count implied by the highest variable index.
    #[arg(long, global = true)]
    arity: Option<usize>,
    /// Height bound.
    #[arg(long = "B", global = true)]
    b: Option<i64>,
    /// Height grid `a:b:steps`.
    #[arg(long = "Bgrid", global = true)]
    bgrid: Option<String>,
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Residues `c0,c1,...` of an F_p-point.
    #[arg(long, global = true)]
    point: Option<String>,
    /// Exponent slack, `a/b` or decimal.
    #[arg(long, global = true)]
    eps: Option<String>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cross-check counts against brute-force enumeration.
    #[arg(long = "oracle-check", global = true)]
    oracle_check: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function and polynomial of a homogeneous ideal.
    Hilbert,
    /// Coordinate sums over the standard monomials of degree `k`.
    Sigma {
        #[arg(long)]
        k: u32,
    },
    /// Abundance estimates and limits.
    Abundance {
        #[arg(long)]
        k: Option<u32>,
    },
    /// Brute-force points in the box, optionally in one residue class.
    Enumerate,
    /// Local g-function and multiplicity at an F_p-point.
    Multiplicity,
    /// Divisibility certificate for `s` points of one residue class.
    Divcert {
        #[arg(long, default_value_t = 6)]
        s: usize,
    },
    /// Auxiliary form for the points of the box and class.
    Auxform {
        #[arg(long, default_value_t = 12)]
        k_cap: u32,
    },
    /// Local conditions at one F_p-point of a surface, or at all of them.
    Conditions,
    /// Whether a surface holds finitely many lines.
    Lines,
    CountCurve,
    CountSurface,
    CountHypersurface {
        /// Accept finiteness of codimension-one linear subspaces.
        #[arg(long)]
        assert_planes_finite: bool,
    },
    CountProjective {
        #[arg(long)]
        assert_planes_finite: bool,
    },
    /// Generic projection to a hypersurface.
    Project {
        #[arg(long, default_value_t = 100)]
        fibers: usize,
    },
    /// Counts on a height grid and the fitted exponent.
    Fit {
        /// Brute-force counts instead of the pipeline.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        assert_planes_finite: bool,
    },
}

impl Common {
    fn input(&self) -> Result<Input> {
        let poly = self.poly.as_deref().ok_or_else(|| Error::Invalid("--poly is required".into()))?;
        Input::new(poly, self.arity)
    }

    fn b(&self) -> Result<i64> {
        self.b.ok_or_else(|| Error::Invalid("--B is required".into()))
    }

    fn prime(&self) -> Result<u64> {
        self.prime.ok_or_else(|| Error::Invalid("--prime is required".into()))
    }

    fn eps(&self) -> Result<f64> {
        self.eps.as_deref().map_or(Ok(DEFAULT_EPS), parse_eps)
    }

    fn options(&self, assert_planes_finite: bool) -> Result<PipelineOptions> {
        Ok(PipelineOptions {
            eps: self.eps()?,
            seed: self.seed,
            oracle_check: self.oracle_check,
            assert_planes_finite,
            ..PipelineOptions::default()
        })
    }

    /// Class from `--prime` and `--point`, when both are given.
    fn class(&self, model: &detcount::zmodel::IntegralModel) -> Result<Option<CongruenceClass>> {
        match (&self.prime, &self.point) {
            (Some(p), Some(pt)) => Ok(Some(CongruenceClass::build(model, &[parse_point(pt, *p)?])?)),
            (None, Some(_)) => Err(Error::Invalid("--point needs --prime".into())),
            _ => Ok(None),
        }
    }
}

enum Output {
    Json(Value),
    Csv(String),
}

fn report(r: CountReport, format: Format) -> Output {
    match format {
        Format::Json => Output::Json(r.to_json()),
        Format::Csv => Output::Csv(format!("B,count\n{},{}\n", r.query.b, r.count)),
    }
}

fn json_only(v: Value, format: Format) -> Result<Output> {
    match format {
        Format::Json => Ok(Output::Json(v)),
        Format::Csv => Err(Error::Invalid("this command only writes JSON".into())),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cmd: &Command, c: &Common) -> Result<Output> {
    let started = std::time::Instant::now();
    match cmd {
        Command::Hilbert => {
            let gb = buchberger(&c.input()?.rational()?, MonomialOrder::GradedRevLex)?;
            json_only(to_value(&gb.hilbert_fit()?), c.format)
        }
        Command::Sigma { k } => {
            let gb = buchberger(&c.input()?.rational()?, MonomialOrder::GradedRevLex)?;
            let sigma = gb.sigma(*k)?;
            let h = gb.hilbert_function(*k)?;
            let sum: u64 = sigma.iter().sum();
            json_only(
                json!({"k": k, "h": h, "sigma": sigma, "identity_holds": sum == *k as u64 * h}),
                c.format,
            )
        }
        Command::Abundance { k } => {
            let gb = buchberger(&c.input()?.rational()?, MonomialOrder::GradedRevLex)?;
            let k = k.unwrap_or_else(|| 2 * gb.default_cap());
            json_only(to_value(&gb.abundances(k)?), c.format)
        }
        Command::Enumerate => {
            let input = c.input()?;
            let b = c.b()?;
            let opts = EnumOptions::default();
            if input.projective {
                let x = input.model()?;
                let class = c.class(&x)?;
                let set = projective_enum(&x, &BoxBounds::uniform(x.arity(), b), class.as_ref(), false, opts)?;
                Ok(match c.format {
                    Format::Json => Output::Json(set.summary_json(started.elapsed().as_secs_f64())),
                    Format::Csv => Output::Csv(set.to_csv()),
                })
            } else {
                let f = input.single_integer()?;
                let keep = c.format == Format::Csv;
                let r = affine_count(&f, b, keep, opts)?;
                Ok(match c.format {
                    Format::Json => Output::Json(json!({"count": r.count, "B": b, "poly": f.to_string()})),
                    Format::Csv => Output::Csv(
                        r.points
                            .unwrap_or_default()
                            .iter()
                            .map(|p| p.coords().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",") + "\n")
                            .collect(),
                    ),
                })
            }
        }
        Command::Multiplicity => {
            let x = c.input()?.model()?;
            let p = c.prime()?;
            let pt = parse_point(c.point.as_deref().ok_or_else(|| Error::Invalid("--point is required".into()))?, p)?;
            let g = local_g_function(&x, p, &pt, 2 * max_generator_degree(&x) + 4)?;
            json_only(json!({"point": pt.to_string(), "g": g.values, "multiplicity": g.mu, "dim": g.dim}), c.format)
        }
        Command::Divcert { s } => {
            let x = c.input()?.model()?;
            let class = c.class(&x)?.ok_or_else(|| Error::Invalid("--prime and --point are required".into()))?;
            let e = &class.entries[0];
            let pts = projective_enum(&x, &BoxBounds::uniform(x.arity(), c.b()?), Some(&class), false, EnumOptions::default())?;
            if pts.len() < *s {
                return Err(Error::Precondition(format!("class holds {} points, {s} requested", pts.len())));
            }
            let gb = buchberger(&x.rational_generators(), MonomialOrder::GradedRevLex)?;
            let mut k = 0;
            let mons = loop {
                let m = gb.standard_monomials(k)?;
                if m.len() >= *s {
                    break m;
                }
                k += 1;
                if k > 64 {
                    return Err(Error::Precondition("too few standard monomials".into()));
                }
            };
            let cert = verify_divisibility(&x, e.p, &e.point, &pts.points[..*s], &mons[..*s])?;
            json_only(cert.to_json(), c.format)
        }
        Command::Auxform { k_cap } => {
            let x = c.input()?.model()?;
            let class = c.class(&x)?.unwrap_or_default();
            let cert = aux_form(&x, &BoxBounds::uniform(x.arity(), c.b()?), &class, *k_cap, c.eps()?, EnumOptions::default())?;
            json_only(cert.to_json(), c.format)
        }
        Command::Conditions => {
            let x = c.input()?.model()?;
            let p = c.prime()?;
            let f = reduce_mod_p(&x, p)?.remove(0);
            if let Some(pt) = &c.point {
                return json_only(to_value(&condition_report(&f, &parse_point(pt, p)?)?), c.format);
            }
            let pts = fp_points(&x, p, false, 1, u128::MAX)?;
            let (good, bad) = good_point_filter(&x, p, &pts)?;
            json_only(
                json!({"prime": p, "points": pts.len(), "good": good.len(), "bad": to_value(&bad)}),
                c.format,
            )
        }
        Command::Lines => {
            let x = c.input()?.model()?;
            let f = &x.generators()[0];
            let mut v = to_value(&lines_on_surface_finite(f)?);
            if let Some(p) = c.prime {
                v["lines_mod_p"] = json!(count_lines_mod_p(f, p, 1 << 32)?);
            }
            json_only(v, c.format)
        }
        Command::CountCurve => {
            let x = c.input()?.model()?;
            let class = c.class(&x)?;
            let entry = class.as_ref().map(|cl| &cl.entries[0]);
            Ok(report(count_curve(&x, c.b()?, entry, &c.options(false)?)?, c.format))
        }
        Command::CountSurface => {
            let f = c.input()?.affine_form()?;
            Ok(report(count_surface(&f, c.b()?, &c.options(false)?)?, c.format))
        }
        Command::CountHypersurface { assert_planes_finite } => {
            let f = c.input()?.affine_form()?;
            Ok(report(count_hypersurface(&f, c.b()?, &c.options(*assert_planes_finite)?)?, c.format))
        }
        Command::CountProjective { assert_planes_finite } => {
            let x = c.input()?.model()?;
            Ok(report(count_projective(&x, c.b()?, &c.options(*assert_planes_finite)?)?, c.format))
        }
        Command::Project { fibers } => {
            let x = c.input()?.model()?;
            json_only(to_value(&project_to_hypersurface(&x, c.seed, *fibers)?), c.format)
        }
        Command::Fit { oracle, assert_planes_finite } => {
            let (a, b, steps) = parse_grid(c.bgrid.as_deref().ok_or_else(|| Error::Invalid("--Bgrid is required".into()))?)?;
            let grid = geometric_grid(a, b, steps)?;
            let input = c.input()?;
            let opts = c.options(*assert_planes_finite)?;
            let mut counts = Vec::new();
            for &bv in &grid {
                let n = if input.projective {
                    count_projective(&input.model()?, bv, &opts)?.count
                } else {
                    let f = input.single_integer()?;
                    if *oracle {
                        affine_count(&f, bv, false, opts.enumerate)?.count
                    } else if f.arity() == 3 {
                        count_surface(&f, bv, &opts)?.count
                    } else {
                        count_hypersurface(&f, bv, &opts)?.count
                    }
                };
                counts.push(n);
            }
            let fit = exponent_fit(&grid, &counts)?;
            Ok(match c.format {
                Format::Json => Output::Json(to_value(&fit)),
                Format::Csv => Output::Csv(
                    std::iter::once("B,count\n".to_string())
                        .chain(grid.iter().zip(&counts).map(|(b, n)| format!("{b},{n}\n")))
                        .collect(),
                ),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli.command, &cli.common) {
        Ok(out) => {
            let text = match out {
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("json") + "\n",
                Output::Csv(s) => s,
            };
            match &cli.common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: {path}: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
