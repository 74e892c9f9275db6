//! Command-line driver: parse gamma-specifications, dispatch computations,
//! emit deterministic tables or JSON.
//!
//! Exit codes: 0 success, 1 computation failure (including a germs --check
//! mismatch), 2 argument or input parse failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shalika_core::combinat::Partition;
use shalika_core::germs::{
    self, delta_invariant, germ_tables, master_symfun, newton_to_cabling, newton_to_puiseux,
    puiseux_to_newton, waldspurger_master, BranchSpec, GammaSpec, NewtonPairs, Step,
};
use shalika_core::orbital;
use shalika_core::qtdeform::{superpolynomial, torus_msf_qt};
use shalika_core::symfunc::{convert, Basis};
use shalika_core::{set_degree_cap, set_qt_degree_cap};

#[derive(Parser)]
#[command(
    name = "shalika",
    about = "Exact germs, orbital integrals and superpolynomials from Newton-Puiseux data",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SpecArgs {
    /// Inline branches: semicolon-separated "p,q" pairs innermost first,
    /// "u:f,a" for unramified steps, "+" between branches.
    #[arg(long)]
    newton: Option<String>,
    /// Inline Puiseux exponents per branch, e.g. "7/4,3/2"; "+" between
    /// branches.
    #[arg(long)]
    puiseux: Option<String>,
    /// JSON file holding the full specification.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Degree cap for symmetric-function computations (the environment
    /// variable SHALIKA_DEGREE_CAP takes precedence).
    #[arg(long, global = true)]
    cap: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GermKind {
    Shalika,
    Steinberg,
    Dyck,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConvertTarget {
    Newton,
    Puiseux,
    Cabling,
}

#[derive(Subcommand)]
enum Cmd {
    /// The master symmetric function in the elementary basis.
    Msf {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Shalika, Steinberg and Dyck germ tables.
    Germs {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Print a single germ family.
        #[arg(long, value_enum)]
        kind: Option<GermKind>,
        /// Recompute through the transition-matrix route and fail on any
        /// mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Orbital integrals / weight polynomials of affine Springer fibers.
    Orbital {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Partition of the standard parahoric, e.g. "4" or "2,1,1".
        #[arg(long)]
        parahoric: Option<String>,
        /// Every parahoric, plus dimension, components and Frobenius data.
        #[arg(long)]
        all: bool,
    },
    /// Point count of the compactified Jacobian.
    Jacobian {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Number of irreducible components of the Iwahori fiber.
    Components {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The q,t superpolynomial of a torus knot (single Newton pair).
    Superpoly {
        /// The torus knot as a Newton pair "p,q".
        #[arg(long)]
        newton: String,
        /// Also print the modified-Macdonald coefficient table.
        #[arg(long)]
        qt: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Convert between Newton pairs, Puiseux exponents and cabling pairs.
    Convert {
        /// Newton pairs "p,q;p,q" (single branch).
        #[arg(long)]
        newton: Option<String>,
        /// Puiseux exponents "7/4,3/2" (single branch).
        #[arg(long)]
        puiseux: Option<String>,
        #[arg(long, value_enum)]
        to: ConvertTarget,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The delta invariant of a totally ramified branch.
    Delta {
        #[arg(long)]
        newton: Option<String>,
        #[arg(long)]
        puiseux: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

enum CliError {
    Parse(String),
    Compute(String),
}

impl From<shalika_core::Error> for CliError {
    fn from(e: shalika_core::Error) -> Self {
        match e {
            shalika_core::Error::Parse(_) | shalika_core::Error::Invalid(_) => {
                CliError::Parse(e.to_string())
            }
            other => CliError::Compute(other.to_string()),
        }
    }
}

fn parse_step(s: &str) -> Result<Step, CliError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("u:") {
        let (f, a) = rest
            .split_once(',')
            .ok_or_else(|| CliError::Parse(format!("unramified step {s:?}: expected u:f,a")))?;
        let f: usize = f
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("unramified step {s:?}: bad f")))?;
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("unramified step {s:?}: bad a")))?;
        return Ok(Step::Unramified { f, a });
    }
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| CliError::Parse(format!("newton step {s:?}: expected p,q")))?;
    let p: usize = p
        .trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("newton step {s:?}: bad p")))?;
    let q: usize = q
        .trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("newton step {s:?}: bad q")))?;
    Ok(Step::Ramified { p, q })
}

fn parse_newton_branches(s: &str) -> Result<Vec<BranchSpec>, CliError> {
    s.split('+')
        .map(|branch| {
            let steps = branch
                .split(';')
                .filter(|t| !t.trim().is_empty())
                .map(parse_step)
                .collect::<Result<Vec<_>, _>>()?;
            BranchSpec::new(steps).map_err(CliError::from)
        })
        .collect()
}

fn parse_puiseux_branches(s: &str) -> Result<Vec<BranchSpec>, CliError> {
    s.split('+')
        .map(|branch| {
            let exps = branch
                .split(',')
                .map(|t| germs::parse_exponent(t.trim()).map_err(CliError::from))
                .collect::<Result<Vec<_>, _>>()?;
            let np = puiseux_to_newton(&exps)?;
            Ok(BranchSpec::from_newton(&np))
        })
        .collect()
}

fn load_spec(args: &SpecArgs) -> Result<GammaSpec, CliError> {
    let sources =
        args.newton.is_some() as u8 + args.puiseux.is_some() as u8 + args.file.is_some() as u8;
    if sources != 1 {
        return Err(CliError::Parse(
            "exactly one of --newton, --puiseux, --file is required".into(),
        ));
    }
    if let Some(s) = &args.newton {
        let branches = parse_newton_branches(s)?;
        return GammaSpec::new(branches, BTreeMap::new(), None).map_err(CliError::from);
    }
    if let Some(s) = &args.puiseux {
        let branches = parse_puiseux_branches(s)?;
        return GammaSpec::new(branches, BTreeMap::new(), None).map_err(CliError::from);
    }
    let path = args.file.as_ref().unwrap();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("--file {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("--file {}: {e}", path.display())))?;
    GammaSpec::from_json(&v).map_err(CliError::from)
}

fn single_newton(
    newton: &Option<String>,
    puiseux: &Option<String>,
) -> Result<NewtonPairs, CliError> {
    let pairs = match (newton, puiseux) {
        (Some(s), None) => {
            let branches = parse_newton_branches(s)?;
            if branches.len() != 1 {
                return Err(CliError::Parse("expected a single branch".into()));
            }
            branches[0].newton_pairs().ok_or_else(|| {
                CliError::Parse("expected a totally ramified branch (no u: steps)".into())
            })?
        }
        (None, Some(s)) => {
            let exps = s
                .split(',')
                .map(|t| germs::parse_exponent(t.trim()).map_err(CliError::from))
                .collect::<Result<Vec<_>, _>>()?;
            puiseux_to_newton(&exps)?
        }
        _ => {
            return Err(CliError::Parse(
                "exactly one of --newton, --puiseux is required".into(),
            ))
        }
    };
    Ok(pairs)
}

fn parse_partition(s: &str) -> Result<Partition, CliError> {
    let mut parts = Vec::new();
    for t in s.split(',') {
        let p: usize = t
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("--parahoric: bad part {t:?}")))?;
        if p == 0 {
            return Err(CliError::Parse("--parahoric: zero part".into()));
        }
        parts.push(p);
    }
    Ok(Partition::new(parts))
}

fn apply_caps(common: &CommonArgs) -> Result<(), CliError> {
    let cap = match std::env::var("SHALIKA_DEGREE_CAP") {
        Ok(v) => Some(v.parse::<usize>().map_err(|_| {
            CliError::Parse("SHALIKA_DEGREE_CAP: expected a positive integer".into())
        })?),
        Err(_) => common.cap,
    };
    if let Some(c) = cap {
        if c < 1 {
            return Err(CliError::Parse("cap must be at least 1".into()));
        }
        set_degree_cap(c);
        set_qt_degree_cap(c.min(8));
    }
    Ok(())
}

fn emit_warnings<E: Write>(spec: &GammaSpec, err: &mut E) {
    for w in spec.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn germ_table_lines(
    out: &mut String,
    degree: usize,
    name: &str,
    table: &BTreeMap<Partition, shalika_core::RatFun>,
    with_header: bool,
) {
    if with_header {
        out.push_str(name);
        out.push_str(" germs:\n");
    }
    for p in shalika_core::combinat::partitions(degree) {
        if let Some(v) = table.get(&p) {
            if with_header {
                out.push_str("  ");
            }
            out.push_str(&format!("{p}: {v}\n"));
        }
    }
}

fn dispatch<W: Write, E: Write>(cli: Cli, out: &mut W, err: &mut E) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Msf { spec, common } => {
            apply_caps(&common)?;
            let spec = load_spec(&spec)?;
            emit_warnings(&spec, err);
            let f = master_symfun(&spec)?;
            if common.json {
                writeln!(out, "{}", f.to_json()).unwrap();
            } else {
                writeln!(out, "{f}").unwrap();
            }
        }
        Cmd::Germs { spec, common, kind, check } => {
            apply_caps(&common)?;
            let spec = load_spec(&spec)?;
            emit_warnings(&spec, err);
            let f = master_symfun(&spec)?;
            if check {
                let via_matrix = waldspurger_master(&spec)?;
                let direct = convert(&f, Basis::Th)?;
                if direct != via_matrix {
                    return Err(CliError::Compute(
                        "germ check failed: transition-matrix route disagrees".into(),
                    ));
                }
                writeln!(out, "check: ok").unwrap();
            }
            let tables = germ_tables(&f)?;
            if common.json {
                writeln!(out, "{}", tables.to_json(f.degree())).unwrap();
            } else {
                let mut s = String::new();
                match kind {
                    Some(GermKind::Shalika) => {
                        germ_table_lines(&mut s, f.degree(), "shalika", &tables.shalika, false)
                    }
                    Some(GermKind::Steinberg) => {
                        germ_table_lines(&mut s, f.degree(), "steinberg", &tables.steinberg, false)
                    }
                    Some(GermKind::Dyck) => {
                        germ_table_lines(&mut s, f.degree(), "dyck", &tables.dyck, false)
                    }
                    None => {
                        germ_table_lines(&mut s, f.degree(), "shalika", &tables.shalika, true);
                        germ_table_lines(&mut s, f.degree(), "steinberg", &tables.steinberg, true);
                        germ_table_lines(&mut s, f.degree(), "dyck", &tables.dyck, true);
                    }
                }
                write!(out, "{s}").unwrap();
            }
        }
        Cmd::Orbital { spec, common, parahoric, all } => {
            apply_caps(&common)?;
            let spec = load_spec(&spec)?;
            emit_warnings(&spec, err);
            if let Some(p) = parahoric {
                if all {
                    return Err(CliError::Parse(
                        "--parahoric and --all are mutually exclusive".into(),
                    ));
                }
                let lambda = parse_partition(&p)?;
                let poly = orbital::orbital_integral(&spec, &lambda)?;
                if common.json {
                    writeln!(out, "{}", json!({ "parahoric": lambda.to_json(), "value": poly.to_json() }))
                        .unwrap();
                } else {
                    writeln!(out, "{}", poly.render("q", true)).unwrap();
                }
            } else {
                let report = orbital::report(&spec)?;
                if common.json {
                    writeln!(out, "{}", report.to_json()).unwrap();
                } else {
                    writeln!(out, "dim: {}", report.dim_sp).unwrap();
                    for p in shalika_core::combinat::partitions(spec.degree()) {
                        writeln!(out, "{p}: {}", report.by_parahoric[&p].render("q", true))
                            .unwrap();
                    }
                    writeln!(out, "components: {}", report.components).unwrap();
                    writeln!(out, "top frobenius: h{}", report.top_frobenius).unwrap();
                }
            }
        }
        Cmd::Jacobian { spec, common } => {
            apply_caps(&common)?;
            let spec = load_spec(&spec)?;
            emit_warnings(&spec, err);
            let poly = orbital::jacobian_count(&spec)?;
            if common.json {
                writeln!(out, "{}", poly.to_json()).unwrap();
            } else {
                writeln!(out, "{}", poly.render("q", true)).unwrap();
            }
        }
        Cmd::Components { spec, common } => {
            apply_caps(&common)?;
            let spec = load_spec(&spec)?;
            emit_warnings(&spec, err);
            let c = orbital::component_count(&spec)?;
            if common.json {
                writeln!(out, "{}", json!({ "components": c.to_string() })).unwrap();
            } else {
                writeln!(out, "{c}").unwrap();
            }
        }
        Cmd::Superpoly { newton, qt, common } => {
            apply_caps(&common)?;
            let step = parse_step(&newton)?;
            let (p, q) = match step {
                Step::Ramified { p, q } => (p, q),
                Step::Unramified { .. } => {
                    return Err(CliError::Parse(
                        "superpoly expects a torus knot given by one newton pair".into(),
                    ))
                }
            };
            // The (p, q) torus knot has slope q/p.
            let map = torus_msf_qt(q, p)?;
            let sp = superpolynomial(q, p)?;
            if common.json {
                let coeffs = map.to_json();
                let spj: Vec<Value> = sp
                    .iter()
                    .enumerate()
                    .map(|(k, v)| json!([k, v.to_json()]))
                    .collect();
                writeln!(out, "{}", json!({ "coeffs": coeffs, "superpolynomial": spj })).unwrap();
            } else {
                if qt {
                    for lambda in shalika_core::combinat::partitions(p) {
                        if let Some(c) = map.coeffs.get(&lambda) {
                            writeln!(out, "H{lambda}: {c}").unwrap();
                        }
                    }
                }
                for (k, v) in sp.iter().enumerate() {
                    writeln!(out, "a^{k}: {v}").unwrap();
                }
            }
        }
        Cmd::Convert { newton, puiseux, to, common } => {
            let pairs = single_newton(&newton, &puiseux)?;
            for w in pairs.warnings() {
                let _ = writeln!(err, "warning: {w}");
            }
            let value = match to {
                ConvertTarget::Newton => Value::Array(
                    pairs
                        .pairs()
                        .iter()
                        .map(|&(p, q)| json!([p, q]))
                        .collect(),
                ),
                ConvertTarget::Cabling => Value::Array(
                    newton_to_cabling(&pairs)
                        .iter()
                        .map(|&(p, a)| json!([p, a]))
                        .collect(),
                ),
                ConvertTarget::Puiseux => Value::Array(
                    newton_to_puiseux(&pairs)
                        .iter()
                        .map(|e| Value::from(e.to_string()))
                        .collect(),
                ),
            };
            let _ = common;
            writeln!(out, "{value}").unwrap();
        }
        Cmd::Delta { newton, puiseux, common } => {
            let pairs = single_newton(&newton, &puiseux)?;
            let d = delta_invariant(&pairs);
            if common.json {
                writeln!(out, "{}", json!({ "delta": d })).unwrap();
            } else {
                writeln!(out, "{d}").unwrap();
            }
        }
    }
    Ok(())
}

/// Parse and run; returns the process exit code. Output is deterministic and
/// byte-identical for identical inputs.
pub fn run<W: Write, E: Write>(args: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests print to stdout and exit cleanly.
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(CliError::Parse(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
