use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hypergeo::analysis::{self, Extended};
use hypergeo::arith::{self, Rational};
use hypergeo::classify::{self, WitnessBounds};
use hypergeo::modp::{self, HypergeometricOperator};
use hypergeo::{
    Context, Error, Exec, HypergeometricFunction, HypergeometricParameters, PAdicNumber,
    ScaledMonomialHyper,
};

#[derive(Parser)]
#[command(
    name = "hypergeo",
    version,
    about = "Hypergeometric series over Q, F_p and Q_p"
)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Params {
    /// Top parameters, e.g. 1/9,4/9,5/9
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    top: String,
    /// Bottom parameters, without the implicit 1
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    bottom: String,
}

impl Params {
    fn parse(&self) -> Result<HypergeometricParameters, Failure> {
        Ok(HypergeometricParameters::parse(&self.top, &self.bottom)?)
    }
}

#[derive(Args, Clone, Copy)]
struct Prime {
    #[arg(long)]
    p: u64,
}

#[derive(Args, Clone, Copy)]
struct Bound {
    /// Primes up to this bound are scanned individually.
    #[arg(long, env = "HYPERGEO_PRIME_BOUND")]
    prime_bound: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Over {
    Q,
    Fp,
    Qp,
}

#[derive(Subcommand)]
enum Command {
    /// Shape of the parameters and the differential operator.
    Props {
        #[command(flatten)]
        params: Params,
    },
    /// Leading coefficients over Q, F_p or Q_p.
    Series {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "q")]
        over: Over,
        #[arg(long)]
        p: Option<u64>,
        /// Relative p-adic precision.
        #[arg(long, env = "HYPERGEO_PREC", default_value_t = 20)]
        prec: u32,
        #[arg(long, default_value_t = 10)]
        max_terms: usize,
    },
    /// Global boundedness and algebraicity.
    Classify {
        #[command(flatten)]
        params: Params,
        /// Degree bounds in y and x for the witness search, e.g. 8,16
        #[arg(long, value_parser = parse_degrees)]
        witness_degree: Option<(usize, usize)>,
    },
    /// Primes of good reduction.
    Primes {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        bound: Bound,
    },
    /// Primes sorted by the corank of the p-curvature.
    Coranks {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        bound: Bound,
    },
    /// Computations modulo p.
    Modp {
        #[command(subcommand)]
        op: ModpOp,
    },
    /// p-adic analysis.
    Padic {
        #[command(subcommand)]
        op: PadicOp,
    },
}

#[derive(Subcommand)]
enum ModpOp {
    /// Section operators; all residues unless --r is given.
    Section {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        prime: Prime,
        #[arg(long)]
        r: Option<u64>,
    },
    /// Dwork relation F = Σ A_G · G^p.
    Dwork {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        prime: Prime,
    },
    /// Ore polynomial in Frobenius killing F mod p.
    Annihilator {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        prime: Prime,
        #[arg(long, default_value_t = modp::CLOSURE_LIMIT)]
        closure_limit: usize,
    },
    /// p-curvature matrix and its corank.
    Pcurvature {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        prime: Prime,
    },
    /// Decides whether two series agree mod p.
    Equal {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        prime: Prime,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        other_top: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        other_bottom: String,
        #[arg(long, default_value_t = modp::EQUALITY_BUDGET)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum PadicOp {
    /// Base-p log of the radius of convergence.
    Radius {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        prime: Prime,
    },
    /// min_k (val_p(c_k) - ν k).
    Valuation {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        prime: Prime,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        nu: String,
        /// Also print the least index attaining the minimum.
        #[arg(long)]
        position: bool,
    },
    /// Value at a point of the disk of convergence.
    Eval {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        prime: Prime,
        /// A rational, or a p-adic number such as "2*3^-1 + O(3^4)"
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, env = "HYPERGEO_PREC", default_value_t = 20)]
        prec: u32,
    },
    /// Newton polygon, truncated at slope ν.
    Newton {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        prime: Prime,
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<String>,
        /// Write an SVG drawing of the polygon here.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

/// Exit status 2 for bad input, 1 for mathematical failures.
enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameters { .. }
            | Error::Parse(_)
            | Error::NotPrime(_)
            | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn parse_degrees(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected DY,DX, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((num(a)?, num(b)?))
}

fn rational(s: &str) -> Result<Rational, Failure> {
    Ok(arith::parse_rational(s)?)
}

struct Output {
    text: String,
    json: Value,
}

fn out(text: impl Into<String>, json: Value) -> Result<Output, Failure> {
    Ok(Output {
        text: text.into(),
        json,
    })
}

fn params_json(h: &HypergeometricParameters) -> Value {
    json!(h.to_json())
}

fn props(h: &HypergeometricParameters) -> Result<Output, Failure> {
    let op = HypergeometricOperator::new(h);
    let text = format!(
        "{}\n{}\nn = {}, m = {}, d = {}, order = {}\nterminating degree: {}\noperator: {}",
        h,
        h.render_call(),
        h.n(),
        h.m(),
        h.d(),
        h.order(),
        h.terminating_degree()
            .map_or("none".to_string(), |t| t.to_string()),
        op
    );
    out(
        text,
        json!({
            "params": params_json(h),
            "key": h.canonical_key(),
            "n": h.n(),
            "m": h.m(),
            "d": h.d(),
            "order": h.order(),
            "terminating_degree": h.terminating_degree(),
            "operator": op.to_string(),
        }),
    )
}

fn series(
    h: HypergeometricParameters,
    over: Over,
    p: Option<u64>,
    prec: u32,
    terms: usize,
) -> Result<Output, Failure> {
    let need_p = || p.ok_or_else(|| Failure::Usage("--p is required for this ring".into()));
    let context = match over {
        Over::Q => Context::Rational,
        Over::Fp => Context::PrimeField(need_p()?),
        Over::Qp => Context::PAdic { p: need_p()?, prec },
    };
    let f = HypergeometricFunction::new(h, context)?;
    let coeffs = f.power_series(terms)?.coefficient_strings();
    let mut parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(k, c)| match k {
            0 if c.contains(' ') => format!("({c})"),
            0 => c.clone(),
            1 => format!("({c})*x"),
            _ => format!("({c})*x^{k}"),
        })
        .collect();
    parts.push(format!("O(x^{terms})"));
    out(
        format!("{}\nover {}\n{}", f, context, parts.join(" + ")),
        json!({
            "params": params_json(f.params()),
            "context": context.to_string(),
            "coefficients": coeffs,
        }),
    )
}

fn classify_cmd(
    h: &HypergeometricParameters,
    degrees: Option<(usize, usize)>,
) -> Result<Output, Failure> {
    let bounds = degrees.map_or_else(WitnessBounds::default, |(y, x)| WitnessBounds {
        max_y_degree: y,
        max_x_degree: x,
    });
    let gb = classify::is_globally_bounded(h);
    let alg = classify::is_algebraic(h, bounds);
    let mut text = format!(
        "globally bounded: {gb}\nalgebraic: {} ({:?}, layer {}: {})",
        alg.algebraic, alg.kind, alg.layer, alg.reason
    );
    if let Some(w) = &alg.witness {
        text.push_str(&format!("\nwitness: {w}"));
    }
    out(
        text,
        json!({
            "params": params_json(h),
            "globally_bounded": gb,
            "algebraic": alg.to_json(),
        }),
    )
}

fn section_cmd(h: &HypergeometricParameters, p: u64, r: Option<u64>) -> Result<Output, Failure> {
    let picked: Vec<(u64, ScaledMonomialHyper)> = match r {
        Some(r) if r >= p => {
            return Err(Failure::Usage(format!("residue {r} is not below p = {p}")))
        }
        Some(r) => vec![(r, modp::section(h, p, r)?)],
        None => (0..p).zip(modp::sections(h, p, Exec::default())?).collect(),
    };
    let text = match r {
        Some(_) => picked[0].1.to_string(),
        None => picked
            .iter()
            .map(|(r, s)| format!("{r}: {s}"))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    let j: Vec<Value> = picked
        .iter()
        .map(|(r, s)| {
            let mut v = json!(s.to_json());
            v["r"] = json!(r);
            v
        })
        .collect();
    out(
        text,
        json!({"params": params_json(h), "p": p, "sections": j}),
    )
}

fn annihilator_cmd(h: &HypergeometricParameters, p: u64, limit: usize) -> Result<Output, Failure> {
    let ore = modp::annihilating_ore_polynomial_with(h, p, limit, Exec::default())?;
    let coeffs: Vec<Vec<u64>> = ore.coeffs().iter().map(|c| c.coeffs().to_vec()).collect();
    out(
        ore.to_string(),
        json!({
            "params": params_json(h),
            "p": p,
            "frob_degree": ore.frob_degree(),
            "coefficients": coeffs,
        }),
    )
}

fn pcurvature_cmd(h: &HypergeometricParameters, p: u64) -> Result<Output, Failure> {
    let a = modp::p_curvature(h, p)?;
    let corank = modp::corank(h, p)?;
    let rows: Vec<Vec<String>> = a
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect())
        .collect();
    out(
        format!("{a}\ncorank: {corank}"),
        json!({"params": params_json(h), "p": p, "matrix": rows, "corank": corank}),
    )
}

fn valuation_cmd(
    h: &HypergeometricParameters,
    p: u64,
    nu: &str,
    position: bool,
) -> Result<Output, Failure> {
    let dv = analysis::drifted_valuation(h, p, &rational(nu)?)?;
    out(dv.render(position), json!(dv.to_json()))
}

fn eval_cmd(h: &HypergeometricParameters, p: u64, at: &str, prec: u32) -> Result<Output, Failure> {
    let v = if at.contains("O(") {
        let a = PAdicNumber::parse(at)?;
        if a.prime() != p {
            return Err(Error::PrimeMismatch(a.prime(), p).into());
        }
        analysis::evaluate(h, &a, prec)?
    } else {
        analysis::evaluate_rational(h, p, &rational(at)?, prec)?
    };
    out(v.render(), json!(v.to_json()))
}

fn newton_cmd(
    h: &HypergeometricParameters,
    p: u64,
    nu: Option<&str>,
    plot: Option<&PathBuf>,
) -> Result<Output, Failure> {
    let nu = nu.map(rational).transpose()?;
    let np = analysis::newton_polygon(h, p, nu.as_ref())?;
    if let Some(path) = plot {
        std::fs::write(path, np.to_svg())
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    out(np.to_string(), json!(np.to_json()))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Props { params } => props(&params.parse()?),
        Command::Series {
            params,
            over,
            p,
            prec,
            max_terms,
        } => series(params.parse()?, *over, *p, *prec, *max_terms),
        Command::Classify {
            params,
            witness_degree,
        } => classify_cmd(&params.parse()?, *witness_degree),
        Command::Primes { params, bound } => {
            let h = params.parse()?;
            let s = classify::good_reduction_primes(&h, bound.prime_bound)?;
            out(s.to_string(), json!(s))
        }
        Command::Coranks { params, bound } => {
            let h = params.parse()?;
            let s = classify::p_curvature_coranks(&h, bound.prime_bound)?;
            let sets: serde_json::Map<String, Value> = s
                .sets
                .iter()
                .map(|(c, set)| (c.to_string(), json!(set)))
                .collect();
            out(
                s.to_string(),
                json!({"order": s.order, "coranks": sets, "bad": s.bad}),
            )
        }
        Command::Modp { op } => match op {
            ModpOp::Section { params, prime, r } => section_cmd(&params.parse()?, prime.p, *r),
            ModpOp::Dwork { params, prime } => {
                let rel = modp::dwork_relation(&params.parse()?, prime.p)?;
                out(rel.to_string(), json!(rel.to_json()))
            }
            ModpOp::Annihilator {
                params,
                prime,
                closure_limit,
            } => annihilator_cmd(&params.parse()?, prime.p, *closure_limit),
            ModpOp::Pcurvature { params, prime } => pcurvature_cmd(&params.parse()?, prime.p),
            ModpOp::Equal {
                params,
                prime,
                other_top,
                other_bottom,
                budget,
            } => {
                let f = params.parse()?;
                let g = HypergeometricParameters::parse(other_top, other_bottom)?;
                let c = modp::is_equal_as_series_with(&f, &g, prime.p, *budget)?;
                let text = match &c.differing_index {
                    None => "true".to_string(),
                    Some(k) => format!("false (coefficient {k} differs)"),
                };
                out(text, json!(c))
            }
        },
        Command::Padic { op } => match op {
            PadicOp::Radius { params, prime } => {
                let r = analysis::log_radius(&params.parse()?, prime.p);
                let j = match &r {
                    Extended::Finite(q) => json!({"p": prime.p, "log_radius": q.to_string()}),
                    e => json!({"p": prime.p, "log_radius": e.to_string()}),
                };
                out(r.to_string(), j)
            }
            PadicOp::Valuation {
                params,
                prime,
                nu,
                position,
            } => valuation_cmd(&params.parse()?, prime.p, nu, *position),
            PadicOp::Eval {
                params,
                prime,
                at,
                prec,
            } => eval_cmd(&params.parse()?, prime.p, at, *prec),
            PadicOp::Newton {
                params,
                prime,
                nu,
                plot,
            } => newton_cmd(&params.parse()?, prime.p, nu.as_deref(), plot.as_ref()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&o.json).unwrap()
            } else {
                o.text
            };
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout(), "{body}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
