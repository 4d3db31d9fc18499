use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sprime_core::combinat::{canonicalize, psi0, PartSize, WeightedShape};
use sprime_core::contractlab::verify_contract;
use sprime_core::generators::{full_gens, verify_gens};
use sprime_core::groebner::Budget;
use sprime_core::poly::{QPoly, Rational};
use sprime_core::spectrum::{d3_stabilize, make_radical, theta_slice, D3Family, D3_CAP};
use sprime_core::sprime::{member, SPrimeData};
use sprime_core::theta::{contains, theta};
use sprime_core::witness::{build_h, certify, find_rational_point};
use sprime_core::Error;

#[derive(Parser)]
#[command(name = "sprime", version, about = "Containment, witnesses and generators for S-prime ideals")]
struct Cli {
    /// Cap on polynomial reductions per Gröbner basis computation.
    #[arg(long, global = true, default_value_t = Budget::default().max_reductions)]
    max_reductions: u64,
    /// Cap on the degree of new basis elements.
    #[arg(long, global = true, default_value_t = Budget::default().max_degree)]
    max_degree: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ShapeArgs {
    /// Parts, e.g. `inf,1`.
    #[arg(long)]
    lambda: String,
    /// Weights, e.g. `3,1`.
    #[arg(long)]
    e: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide P ⊆ Q.
    Contain { p: PathBuf, q: PathBuf },
    /// The Θ ideal of P at a target shape.
    Theta {
        p: PathBuf,
        #[command(flatten)]
        target: ShapeArgs,
    },
    /// Membership of a polynomial (read from stdin when omitted or `-`).
    Member { p: PathBuf, poly: Option<String> },
    /// Generators of P up to S-radical.
    Gens {
        p: PathBuf,
        /// Also check membership of every generator.
        #[arg(long)]
        verify: bool,
    },
    /// The minimal shapes not dominated by a shape.
    Psi0(ShapeArgs),
    /// A polynomial in P but not in Q.
    Witness {
        p: PathBuf,
        q: PathBuf,
        /// Point of Q's configuration set, e.g. `0,1/2`; searched for when omitted.
        #[arg(long)]
        y: Option<String>,
    },
    /// Compare a brute-force contraction with the predicted generators.
    ContractVerify {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'q')]
        q: String,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
    /// Reduce a list of S-primes to the antichain of their intersection.
    Radical {
        #[arg(required = true)]
        primes: Vec<PathBuf>,
    },
    /// Θ-closure slices of P at target shapes (`LAMBDA/E`, e.g. `inf,1/3,1`).
    SpectrumSlice {
        p: PathBuf,
        #[arg(long = "target")]
        targets: Vec<String>,
        /// A family `LAMBDA/E` whose part at `--d3-slot` grows; report where slices stabilize.
        #[arg(long)]
        d3_template: Option<String>,
        #[arg(long, default_value_t = 0)]
        d3_slot: usize,
    },
}

/// Failures outside the library error type.
enum CliError {
    Input(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Res<T> = std::result::Result<T, CliError>;

fn read_text(path: &Path) -> Res<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Res<SPrimeData> {
    Ok(SPrimeData::from_json(&read_text(path)?)?)
}

fn csv<T: std::str::FromStr>(s: &str, what: &str) -> Res<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|e| CliError::Input(format!("bad {what} `{x}`: {e}"))))
        .collect()
}

fn shape(lambda: &str, e: &str) -> Res<WeightedShape> {
    let parts: Vec<PartSize> = csv(lambda, "part")?;
    let weights: Vec<u32> = csv(e, "weight")?;
    Ok(canonicalize(&parts, &weights)?.0)
}

fn slash_parts(s: &str) -> Res<(Vec<PartSize>, Vec<u32>)> {
    let (l, e) = s.split_once('/').ok_or_else(|| CliError::Input(format!("shape `{s}` must be LAMBDA/E")))?;
    Ok((csv(l, "part")?, csv(e, "weight")?))
}

fn slash_shape(s: &str) -> Res<WeightedShape> {
    let (parts, weights) = slash_parts(s)?;
    Ok(canonicalize(&parts, &weights)?.0)
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn run(cli: &Cli) -> Res<Value> {
    Ok(match &cli.command {
        Command::Contain { p, q } => {
            let (p, q) = (load(p)?, load(q)?);
            let c = contains(&p, &q)?;
            json!({
                "contains": c.contains,
                "vacuous": c.vacuous,
                "separator": c.separator.map(|s| s.to_string()),
                "theta": strings(c.theta.ideal.gens()),
            })
        }
        Command::Theta { p, target } => {
            let p = load(p)?;
            let t = shape(&target.lambda, &target.e)?;
            let th = theta(&p, &t)?;
            let comps: Vec<Value> = th
                .components
                .iter()
                .map(|(gp, c)| json!({"pair": gp.to_string(), "ideal": strings(c.gens())}))
                .collect();
            json!({
                "target": t.to_string(),
                "empty": th.is_empty_set()?,
                "ideal": strings(th.ideal.gens()),
                "components": comps,
            })
        }
        Command::Member { p, poly } => {
            let p = load(p)?;
            let text = match poly.as_deref() {
                None | Some("-") => read_text(Path::new("-"))?,
                Some(s) => s.to_string(),
            };
            let f = QPoly::parse(text.trim())?;
            json!({"poly": f.to_string(), "member": member(&f, &p)?})
        }
        Command::Gens { p, verify } => {
            let p = load(p)?;
            let mut entries: Vec<Value> = if *verify {
                verify_gens(&p)?
                    .entries
                    .into_iter()
                    .map(|(g, ok)| {
                        json!({"poly": g.poly().to_string(), "factored": g.h.to_text(), "origin": g.origin.to_string(), "member": ok})
                    })
                    .collect()
            } else {
                full_gens(&p)?
                    .into_iter()
                    .map(|g| json!({"poly": g.poly().to_string(), "factored": g.h.to_text(), "origin": g.origin.to_string()}))
                    .collect()
            };
            entries.sort_by(|a, b| a["poly"].as_str().cmp(&b["poly"].as_str()));
            json!({"generators": entries})
        }
        Command::Psi0(s) => {
            let base = shape(&s.lambda, &s.e)?;
            json!({"shape": base.to_string(), "psi0": strings(&psi0(&base)?)})
        }
        Command::Witness { p, q, y } => {
            let (p, q) = (load(p)?, load(q)?);
            let point: Option<Vec<Rational>> = match y {
                Some(s) => Some(
                    csv::<coord::R>(s, "coordinate")?.into_iter().map(|r| r.0).collect(),
                ),
                None => {
                    let th = theta(&p, q.shape())?;
                    find_rational_point(&q, &th.ideal)
                }
            };
            let w = build_h(&p, q.shape(), point.as_deref())?;
            let (in_p, in_q) = certify(&w.h, &p, &q)?;
            json!({
                "y": point.map(|v| strings(&v)),
                "h": w.h.to_text(),
                "layout": w.layout,
                "in_p": in_p,
                "in_q": in_q,
            })
        }
        Command::ContractVerify { n, q, characteristic } => {
            let qs: Vec<u32> = csv(q, "weight")?;
            serde_json::to_value(verify_contract(*n, &qs, *characteristic)?).expect("report serializes")
        }
        Command::Radical { primes } => {
            let ps = primes.iter().map(|p| load(p)).collect::<Res<Vec<_>>>()?;
            let r = make_radical(ps)?;
            json!({"primes": r.primes().iter().map(SPrimeData::to_json).collect::<Vec<_>>()})
        }
        Command::SpectrumSlice { p, targets, d3_template, d3_slot } => {
            let p = load(p)?;
            let ts = targets.iter().map(|t| slash_shape(t)).collect::<Res<Vec<_>>>()?;
            let slices: serde_json::Map<String, Value> =
                theta_slice(&p, &ts)?.into_iter().map(|(k, v)| (k, json!(strings(v.gens())))).collect();
            let mut out = json!({"slices": slices});
            if let Some(t) = d3_template {
                // Part order is kept so that `--d3-slot` indexes the template as written.
                let (parts, weights) = slash_parts(t)?;
                let fam = D3Family::new(WeightedShape::new(parts, weights)?, *d3_slot)?;
                out["d3_stable_at"] = json!(d3_stabilize(&p, &fam, D3_CAP)?);
            }
            out
        }
    })
}

mod coord {
    use sprime_core::poly::Rational;

    /// `n` or `n/d` parsed as an exact rational.
    pub struct R(pub Rational);

    impl std::str::FromStr for R {
        type Err = String;
        fn from_str(s: &str) -> Result<Self, String> {
            let (n, d) = s.split_once('/').unwrap_or((s, "1"));
            let n: i64 = n.trim().parse().map_err(|e| format!("{e}"))?;
            let d: i64 = d.trim().parse().map_err(|e| format!("{e}"))?;
            if d == 0 {
                return Err("zero denominator".into());
            }
            Ok(R(Rational::new(n, d)))
        }
    }
}

fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Input(_) => 2,
        CliError::Core(e) if e.is_budget() => 3,
        CliError::Core(
            Error::Parse { .. }
            | Error::UnknownFamily { .. }
            | Error::InvalidShape(_)
            | Error::InvalidInput(_)
            | Error::EmptyIndexSet,
        ) => 2,
        CliError::Core(_) => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let budget = Budget { max_reductions: cli.max_reductions, max_degree: cli.max_degree };
    budget.set_global();
    let header = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "budget": {"max_reductions": budget.max_reductions, "max_degree": budget.max_degree},
    });
    let (mut report, code) = match run(&cli) {
        Ok(v) => (v, 0),
        Err(e) => {
            let msg = match &e {
                CliError::Input(m) => m.clone(),
                CliError::Core(c) => c.to_string(),
            };
            log::error!("{msg}");
            (json!({"error": msg}), exit_code(&e))
        }
    };
    let mut out = header;
    if let (Some(o), Some(r)) = (out.as_object_mut(), report.as_object_mut()) {
        o.append(r);
    }
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    ExitCode::from(code)
}
