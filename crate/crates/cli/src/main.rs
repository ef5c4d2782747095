use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use taukappa::boundary::{delta_integral, pushforward_integral, Decoration, DualGraph};
use taukappa::dfiz::{kappa_table, w_integral, x_class_integral, ValenceProfile};
use taukappa::engine::infer_genus;
use taukappa::kappa::{mixed_integral, KappaMonomial};
use taukappa::rational::parse_rational;
use taukappa::ribbon::{count_w04_by_type, enumerate, enumerate_profile, enumerate_unlabelled, full_counts};
use taukappa::verify::{run_suite, Suite};
use taukappa::{Error, IntersectionEngine, Rational};

// Comma-separated lists parse as one value; clap would read a bare `Vec` as repeats.
type Ints = Vec<u32>;
type Rats = Vec<Rational>;

#[derive(Parser, Debug)]
#[command(name = "taukappa", version, about = "Exact psi/kappa intersection numbers on moduli of pointed curves")]
struct Cli {
    /// Print a JSON envelope instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Memo file loaded before and saved after the command.
    #[arg(long, global = true, env = "TAUKAPPA_CACHE")]
    cache: Option<PathBuf>,

    /// Report wall time on stderr.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// <tau_d1 ... tau_dn>_g; the genus is inferred when omitted.
    Tau {
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long, value_parser = parse_list)]
        d: Ints,
    },
    /// Integral of prod psi_i^(d_i) times a product of kappa classes.
    Kappa {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_parser = parse_list)]
        psi: Ints,
        #[arg(long, value_parser = parse_list)]
        kappa: Ints,
    },
    /// Integral of delta times prod psi_i^(d_i).
    Delta {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_parser = parse_list)]
        d: Ints,
    },
    /// Integral of the combinatorial cycle for a valence profile, by coefficient extraction.
    W(ProfileArgs),
    /// The same integral through the candidate class built from kappa and boundary strata.
    X {
        #[command(flatten)]
        args: ProfileArgs,
        #[arg(long)]
        genus: Option<u32>,
    },
    /// Kappa parts of every tabulated profile.
    Xtable {
        #[arg(long)]
        codim: Option<u32>,
    },
    /// Pushforward of a decorated boundary stratum against psi classes.
    Graph {
        #[arg(long)]
        genus: u32,
        /// e.g. `v:(0,{1,2});(0,{3,4})|e:(0,1)`
        #[arg(long)]
        graph: String,
        /// e.g. `psi=0,0,1 kappa=;psi=0,0,0 kappa=`; trivial when omitted.
        #[arg(long)]
        decoration: Option<String>,
        #[arg(long, value_parser = parse_list)]
        d: Ints,
    },
    #[command(subcommand)]
    Ribbon(RibbonCommand),
    /// Run named check suites; exits 1 when any check fails.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// `index:multiplicity` pairs over indices >= 2, e.g. `2:1,3:1`.
    #[arg(long, value_parser = parse_profile)]
    profile: ValenceProfile,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_parser = parse_list)]
    d: Ints,
}

#[derive(Subcommand, Debug)]
enum RibbonCommand {
    /// Points of the zero-dimensional cycle on M_0,4 over spaced perimeters.
    Count {
        #[arg(long, value_parser = parse_rationals)]
        perimeters: Rats,
    },
    /// Ribbon graphs of a profile with given genus and boundary count.
    Enumerate {
        #[arg(long, value_parser = parse_profile)]
        profile: ValenceProfile,
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        n: usize,
        /// List one graph per labelled class rather than per unlabelled type.
        #[arg(long)]
        labelled: bool,
    },
}

/// The JSON form of every result; `meta` is omitted when empty.
#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct Envelope {
    op: String,
    input: BTreeMap<String, Value>,
    value: Value,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    meta: BTreeMap<String, Value>,
}

struct Output {
    envelope: Envelope,
    text: String,
    ok: bool,
}

enum CliError {
    Usage(String),
    Compute(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| format!("expected non-negative integers, got {x:?}")))
        .collect()
}

fn parse_rationals(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(|x| parse_rational(x.trim()).map_err(|e| e.to_string())).collect()
}

fn parse_profile(s: &str) -> Result<ValenceProfile, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn rat(v: &Rational) -> Value {
    Value::String(v.to_string())
}

fn list(d: &[u32]) -> Value {
    json!(d)
}

fn check_n(n: Option<usize>, d: &[u32]) -> Result<usize, CliError> {
    match n {
        Some(n) if n != d.len() => Err(CliError::Usage(format!("--n {n} does not match the {} entries of --d", d.len()))),
        _ => Ok(d.len()),
    }
}

fn scalar(op: &str, input: BTreeMap<String, Value>, value: Rational) -> Output {
    Output {
        text: value.to_string(),
        envelope: Envelope { op: op.into(), input, value: rat(&value), meta: BTreeMap::new() },
        ok: true,
    }
}

fn input<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn run(cmd: &Command, engine: &IntersectionEngine) -> Result<Output, CliError> {
    match cmd {
        Command::Tau { genus, d } => {
            if d.is_empty() {
                return Err(CliError::Usage("--d needs at least one insertion".into()));
            }
            let g = match genus {
                Some(g) => *g,
                None => infer_genus(d).ok_or_else(|| {
                    let sum = d.iter().map(|&x| x as u64).sum();
                    Error::InadmissibleDegree { sum, n: d.len(), codim: 0 }
                })?,
            };
            let mut out = scalar("tau", input([("genus", json!(genus)), ("d", list(d))]), engine.tau(g, d));
            out.envelope.meta.insert("genus".into(), json!(g));
            Ok(out)
        }
        Command::Kappa { genus, psi, kappa } => {
            if kappa.contains(&0) {
                return Err(CliError::Usage("kappa indices must be at least 1".into()));
            }
            let v = mixed_integral(engine, *genus, psi, &KappaMonomial::new(kappa));
            Ok(scalar("kappa", input([("genus", json!(genus)), ("psi", list(psi)), ("kappa", list(kappa))]), v))
        }
        Command::Delta { genus, n, d } => {
            let n = check_n(*n, d)?;
            let v = delta_integral(engine, *genus, n, d)?;
            Ok(scalar("delta", input([("genus", json!(genus)), ("n", json!(n)), ("d", list(d))]), v))
        }
        Command::W(args) => {
            let n = check_n(args.n, &args.d)?;
            let w = w_integral(engine, &args.profile, &args.d)?;
            let mut out =
                scalar("w", input([("profile", json!(args.profile.to_string())), ("n", json!(n)), ("d", list(&args.d))]), w.value);
            out.envelope.meta.insert("genus".into(), json!(w.genus));
            out.envelope.meta.insert("m1".into(), json!(w.m1));
            Ok(out)
        }
        Command::X { args, genus } => {
            let n = check_n(args.n, &args.d)?;
            let g = match genus {
                Some(g) => *g,
                None => args.profile.genus_for(&args.d)?,
            };
            let v = x_class_integral(engine, &args.profile, g, &args.d)?;
            Ok(scalar(
                "x",
                input([("profile", json!(args.profile.to_string())), ("genus", json!(g)), ("n", json!(n)), ("d", list(&args.d))]),
                v,
            ))
        }
        Command::Xtable { codim } => {
            let rows: Vec<_> = kappa_table().into_iter().filter(|(p, _)| codim.is_none_or(|k| p.codimension() == k)).collect();
            let text = rows.iter().map(|(p, k)| format!("{}\t{}\t{}", p.codimension(), p, k)).collect::<Vec<_>>().join("\n");
            let value = rows
                .iter()
                .map(|(p, k)| json!({"codim": p.codimension(), "profile": p.to_string(), "kappa": k.to_string()}))
                .collect();
            Ok(Output {
                text,
                envelope: Envelope { op: "xtable".into(), input: input([("codim", json!(codim))]), value, meta: BTreeMap::new() },
                ok: true,
            })
        }
        Command::Graph { genus, graph, decoration, d } => {
            let gr: DualGraph = graph.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
            let dec = match decoration {
                Some(s) => s.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?,
                None => Decoration::trivial(&gr),
            };
            let v = pushforward_integral(engine, *genus, d.len(), &gr, &dec, d)?;
            let mut out = scalar(
                "graph",
                input([
                    ("genus", json!(genus)),
                    ("graph", json!(gr.to_string())),
                    ("decoration", json!(dec.to_string())),
                    ("d", list(d)),
                ]),
                v,
            );
            out.envelope.meta.insert("automorphisms".into(), json!(gr.automorphism_count()));
            Ok(out)
        }
        Command::Ribbon(RibbonCommand::Count { perimeters }) => {
            let p: &[Rational; 4] = perimeters
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage(format!("--perimeters needs 4 values, got {}", perimeters.len())))?;
            let split = count_w04_by_type(p)?;
            let total: usize = split.iter().map(|(_, c)| c).sum();
            let mut out = scalar(
                "ribbon-count",
                input([("perimeters", json!(perimeters.iter().map(|x| x.to_string()).collect::<Vec<_>>()))]),
                Rational::from_integer(total.into()),
            );
            let types: Vec<Value> = split.iter().map(|(g, c)| json!({"graph": g.to_string(), "points": c})).collect();
            out.envelope.meta.insert("types".into(), Value::Array(types));
            Ok(out)
        }
        Command::Ribbon(RibbonCommand::Enumerate { profile, genus, n, labelled }) => {
            let graphs = if *labelled {
                enumerate_profile(profile, *genus, *n)?
            } else {
                match full_counts(profile, *genus, *n) {
                    Some(m) if profile.vertex_count(*genus, *n) > 0 => {
                        enumerate_unlabelled(&m, *n)?.into_iter().filter(|g| g.euler_data().g == *genus).collect()
                    }
                    _ => Vec::new(),
                }
            };
            let labelled_total = match full_counts(profile, *genus, *n) {
                Some(m) if profile.vertex_count(*genus, *n) > 0 => {
                    enumerate(&m, *n)?.into_iter().filter(|g| g.euler_data().g == *genus).count()
                }
                _ => 0,
            };
            let lines: Vec<String> = graphs.iter().map(|g| g.to_string()).collect();
            let text = std::iter::once(graphs.len().to_string()).chain(lines.iter().cloned()).collect::<Vec<_>>().join("\n");
            let mut meta = BTreeMap::new();
            meta.insert("labelled".to_string(), json!(labelled_total));
            Ok(Output {
                text,
                envelope: Envelope {
                    op: "ribbon-enumerate".into(),
                    input: input([
                        ("profile", json!(profile.to_string())),
                        ("genus", json!(genus)),
                        ("n", json!(n)),
                        ("labelled", json!(labelled)),
                    ]),
                    value: json!(lines),
                    meta,
                },
                ok: true,
            })
        }
        Command::Verify { suite } => {
            let checks = run_suite(engine, *suite);
            let ok = checks.iter().all(|c| c.passed);
            let text = checks
                .iter()
                .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                .collect::<Vec<_>>()
                .join("\n");
            let value = checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect();
            let suite_name = format!("{suite:?}").to_lowercase();
            Ok(Output {
                text,
                envelope: Envelope { op: "verify".into(), input: input([("suite", json!(suite_name))]), value, meta: BTreeMap::new() },
                ok,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let engine = IntersectionEngine::new();

    if let Some(path) = &cli.cache {
        if path.exists() {
            if let Err(e) = engine.load_cache(path) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    }

    let result = run(&cli.command, &engine);

    if let Some(path) = &cli.cache {
        if let Err(e) = engine.save_cache(path) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if cli.timing {
        eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    }

    match result {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string(&out.envelope).expect("envelope serialises"));
            } else if !out.text.is_empty() {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("1, 2,3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_list("").unwrap(), Vec::<u32>::new());
        assert!(parse_list("1,-2").is_err());
    }

    #[test]
    fn envelope_round_trip() {
        let e = IntersectionEngine::new();
        let out = run(&Command::Tau { genus: Some(1), d: vec![1] }, &e).ok().unwrap();
        let s = serde_json::to_string(&out.envelope).unwrap();
        assert!(s.starts_with(r#"{"op":"tau","input":"#));
        let back: Envelope = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
