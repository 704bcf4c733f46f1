//! `jetcalc`: jet-scheme dimensions and singularity invariants from the
//! command line.
//!
//! Every subcommand prints one JSON object on standard output that echoes
//! the resolved configuration and the SHA-256 of each input file. Exit
//! codes: 0 on success, 1 on internal errors and `--verify` mismatches, 2 on
//! input errors, 3 when the pair budget ran out (the partial report is still
//! printed, with `"partial": true`).

mod cache;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jetcalc_core::groebner::DEFAULT_BUDGET;
use jetcalc_core::invariants::{
    alpha_pq, beta_m, beta_monomial, beta_monomial_limit, contact_codim, contact_codim_bruteforce,
    gamma_estimate, homog_fiber_dims, jet_dimension, lci_jet_check, lct_diagonal, lct_estimate,
    lct_from_resolution, lct_monomial, mld_estimate, mld_from_resolution, prop54_check,
    InvariantError, ResolutionData,
};
use jetcalc_core::jetgen::generate_jet_equations;
use jetcalc_core::polyring::{format_rational, parse_rational};
use jetcalc_core::{Context, FieldSpec, IdealPresentation, LocalAlgebra, OrderKind};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};

use cache::{sha256_hex, FileCache};

#[derive(Parser, Debug)]
#[command(
    name = "jetcalc",
    version,
    about = "Jet-scheme dimensions and singularity invariants"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Global {
    /// Override the characteristic of every input ideal (0 or a prime).
    #[arg(long = "char", global = true)]
    #[serde(rename = "char")]
    characteristic: Option<u64>,
    #[arg(long, global = true, default_value = "degrevlex")]
    order: OrderKind,
    /// Maximum number of S-pair reductions per Gröbner basis.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Cache directory; defaults to $JETCALC_CACHE, then the user cache dir.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Recompute cached results and fail if any differs.
    #[arg(long, global = true)]
    verify: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Krull dimension of V(I), or of J_A(V(I)) with --algebra or --m.
    Dim {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, conflicts_with = "m")]
        algebra: Option<PathBuf>,
        /// Use the truncation k[t]/(t^{m+1}).
        #[arg(long)]
        m: Option<u32>,
    },
    /// The defining equations of J_A(V(I)), in the ideal text format.
    JetEqs {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
    },
    LctEstimate {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        mmax: u32,
    },
    LctMonomial {
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
    },
    LctDiagonal {
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
    },
    LctResolution {
        #[arg(long)]
        data: PathBuf,
    },
    ContactCodim {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        bruteforce: bool,
    },
    MldResolution {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_parser = parse_q)]
        #[serde(serialize_with = "ser_q")]
        q: BigRational,
    },
    MldEstimate {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        center: PathBuf,
        #[arg(long, value_parser = parse_q)]
        #[serde(serialize_with = "ser_q")]
        q: BigRational,
        #[arg(long)]
        mmax: u32,
    },
    /// dim J_A(X) for A = k[s,t]/(s^p, t^q).
    Alpha {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// dim J_A(X) for A = k[s,t]/(s,t)^m.
    Beta {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        m: u32,
    },
    BetaMonomial {
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
        #[arg(long)]
        m: u32,
    },
    /// Jet dimensions of a general homogeneous hypersurface of degree d in A^n.
    Homog {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        mmax: u32,
    },
    LciCheck {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        algebra: PathBuf,
    },
    Prop54 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        jmax: u32,
    },
    /// Normalized jet dimensions over the given algebras (at most two
    /// generators each).
    Gamma {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long = "algebra", required = true)]
        algebras: Vec<PathBuf>,
    },
}

fn parse_q(s: &str) -> Result<BigRational, String> {
    parse_rational(s.trim()).ok_or_else(|| format!("`{s}` is not a rational number"))
}

fn ser_q<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

/// Sorts an invariant error into input problems, budget exhaustion (which
/// still produces a report) and everything else.
enum Outcome {
    Done(Value),
    Partial(Value),
}

fn classify(e: InvariantError) -> Result<Outcome, Failure> {
    match e {
        e if e.is_budget_exhausted() => Ok(Outcome::Partial(json!({ "error": e.to_string() }))),
        e @ (InvariantError::Internal(_) | InvariantError::SandwichViolation { .. }) => {
            Err(Failure::Internal(e.to_string()))
        }
        e => Err(Failure::Input(e.to_string())),
    }
}

#[derive(Serialize)]
struct InputFile {
    path: String,
    sha256: String,
}

struct Session<'a> {
    global: &'a Global,
    ctx: Context,
    inputs: BTreeMap<String, InputFile>,
    field: Option<FieldSpec>,
}

impl Session<'_> {
    fn read(&mut self, role: &str, path: &Path) -> Result<String, Failure> {
        let bytes = fs::read(path)
            .map_err(|e| Failure::Input(format!("{}: cannot read: {e}", path.display())))?;
        self.inputs.insert(
            role.to_string(),
            InputFile {
                path: path.display().to_string(),
                sha256: sha256_hex(&bytes),
            },
        );
        String::from_utf8(bytes)
            .map_err(|_| Failure::Input(format!("{}: not valid UTF-8", path.display())))
    }

    fn ideal(&mut self, role: &str, path: &Path) -> Result<IdealPresentation, Failure> {
        let text = self.read(role, path)?;
        let at = |e: jetcalc_core::polyring::TextFormatError| {
            Failure::Input(format!("{}:{}: {}", path.display(), e.line, e.message))
        };
        let mut ideal = IdealPresentation::parse_text(&text).map_err(at)?;
        if let Some(p) = self.global.characteristic {
            let field =
                FieldSpec::new(p).map_err(|e| Failure::Input(format!("--char {p}: {e}")))?;
            if field != ideal.field() {
                let moved: String = ideal
                    .to_text()
                    .lines()
                    .map(|l| {
                        if l.starts_with("char:") {
                            format!("char: {p}\n")
                        } else {
                            format!("{l}\n")
                        }
                    })
                    .collect();
                ideal = IdealPresentation::parse_text(&moved).map_err(at)?;
            }
        }
        if let Some(f) = self.field {
            if f != ideal.field() {
                return Err(Failure::Input(format!(
                    "{}: field {} differs from the other inputs ({f})",
                    path.display(),
                    ideal.field()
                )));
            }
        }
        self.field = Some(ideal.field());
        Ok(ideal)
    }

    fn algebra(&mut self, role: &str, path: &Path) -> Result<LocalAlgebra, Failure> {
        let text = self.read(role, path)?;
        LocalAlgebra::parse_text(&text)
            .map_err(|e| Failure::Input(format!("{}:{}: {}", path.display(), e.line, e.message)))
    }

    fn resolution(&mut self, path: &Path) -> Result<ResolutionData, Failure> {
        let text = self.read("data", path)?;
        ResolutionData::from_json(&text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn rational(n: i64, d: i64) -> String {
    format_rational(&BigRational::new(n.into(), d.into()))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn lift<T>(
    r: jetcalc_core::invariants::Result<T>,
    f: impl FnOnce(T) -> Value,
) -> Result<Outcome, Failure> {
    match r {
        Ok(x) => Ok(Outcome::Done(f(x))),
        Err(e) => classify(e),
    }
}

fn execute(command: &Command, s: &mut Session) -> Result<Outcome, Failure> {
    let input = |e: &dyn fmt::Display| Failure::Input(e.to_string());
    match command {
        Command::Dim { ideal, algebra, m } => {
            let i = s.ideal("ideal", ideal)?;
            let algebra = match (algebra, m) {
                (Some(path), _) => Some(s.algebra("algebra", path)?),
                (None, Some(m)) => Some(LocalAlgebra::truncation(*m)),
                (None, None) => None,
            };
            match algebra {
                Some(a) => lift(
                    jet_dimension(&s.ctx, &i, &a),
                    |d| json!({ "dimension": d, "algebra": a.to_string(), "algebra_dim": a.dim() }),
                ),
                None => lift(s.ctx.ideal_dimension(&i).map_err(Into::into), |r| {
                    to_value(&r)
                }),
            }
        }
        Command::JetEqs { ideal, algebra } => {
            let i = s.ideal("ideal", ideal)?;
            let a = s.algebra("algebra", algebra)?;
            let jets = generate_jet_equations(&i, &a).map_err(|e| input(&e))?;
            Ok(Outcome::Done(json!({
                "vars": jets.ring().vars(),
                "weights": jets.weights(),
                "equations": jets.equations().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "text": jets.to_ideal().to_text(),
            })))
        }
        Command::LctEstimate { ideal, mmax } => {
            let i = s.ideal("ideal", ideal)?;
            match lct_estimate(&s.ctx, &i, *mmax) {
                Ok(e) => {
                    let partial = e.partial;
                    let mut v = to_value(&e);
                    v["sequence"] = to_value(&e.sequence.entries);
                    if let Some(f) = &e.failure {
                        v["error"] = json!(f.to_string());
                    }
                    Ok(if partial {
                        Outcome::Partial(v)
                    } else {
                        Outcome::Done(v)
                    })
                }
                Err(e) => classify(e),
            }
        }
        Command::LctMonomial { exponents } => lift(
            lct_monomial(exponents),
            |q| json!({ "lct": format_rational(&q) }),
        ),
        Command::LctDiagonal { exponents } => lift(
            lct_diagonal(exponents),
            |q| json!({ "lct": format_rational(&q) }),
        ),
        Command::LctResolution { data } => {
            let d = s.resolution(data)?;
            let q = lct_from_resolution(&d).map_err(|e| input(&e))?;
            Ok(Outcome::Done(json!({ "lct": format_rational(&q) })))
        }
        Command::ContactCodim {
            data,
            m,
            bruteforce,
        } => {
            let d = s.resolution(data)?;
            let codim = if *bruteforce {
                contact_codim_bruteforce(&d, *m)
            } else {
                contact_codim(&d, *m)
            }
            .map_err(|e| input(&e))?;
            Ok(Outcome::Done(json!({
                "m": m,
                "codim": codim,
                "method": if *bruteforce { "bruteforce" } else { "covering" },
            })))
        }
        Command::MldResolution { data, q } => {
            let d = s.resolution(data)?;
            let mld = mld_from_resolution(&d, q).map_err(|e| input(&e))?;
            Ok(Outcome::Done(json!({ "mld": mld.to_string() })))
        }
        Command::MldEstimate {
            ideal,
            center,
            q,
            mmax,
        } => {
            let w = s.ideal("ideal", ideal)?;
            let z = s.ideal("center", center)?;
            if w.ring() != z.ring() {
                return Err(Failure::Input(format!(
                    "{}: the center lives in a different ring than {}",
                    center.display(),
                    ideal.display()
                )));
            }
            match mld_estimate(&s.ctx, &w, &z, q, *mmax) {
                Ok(e) => {
                    let mut v = to_value(&e);
                    if let Some(f) = &e.failure {
                        v["error"] = json!(f.to_string());
                    }
                    Ok(if e.partial {
                        Outcome::Partial(v)
                    } else {
                        Outcome::Done(v)
                    })
                }
                Err(e) => classify(e),
            }
        }
        Command::Alpha { ideal, p, q } => {
            let i = s.ideal("ideal", ideal)?;
            let (p, q) = (*p, *q);
            lift(
                alpha_pq(&s.ctx, &i, p, q),
                |d| json!({ "p": p, "q": q, "alpha": d, "normalized": rational(d, (p * q) as i64) }),
            )
        }
        Command::Beta { ideal, m } => {
            let i = s.ideal("ideal", ideal)?;
            let m = *m;
            lift(
                beta_m(&s.ctx, &i, m),
                |d| json!({ "m": m, "beta": d, "normalized": rational(d, (m * (m + 1) / 2) as i64) }),
            )
        }
        Command::BetaMonomial { exponents, m } => {
            let limit = beta_monomial_limit(exponents);
            lift(
                beta_monomial(exponents, *m).and_then(|b| Ok((b, limit?))),
                |(b, l)| json!({ "m": m, "beta": b, "limit": format_rational(&l) }),
            )
        }
        Command::Homog { n, d, mmax } => lift(homog_fiber_dims(*n, *d, *mmax), |h| to_value(&h)),
        Command::LciCheck {
            ideal,
            dim,
            algebra,
        } => {
            let i = s.ideal("ideal", ideal)?;
            let a = s.algebra("algebra", algebra)?;
            lift(lci_jet_check(&s.ctx, &i, *dim, &a), |v| {
                let mut v = to_value(&v);
                v["level"] = json!("dimension");
                v
            })
        }
        Command::Prop54 { n, d, r, jmax } => {
            lift(prop54_check(*n, *d, *r, *jmax), |p| to_value(&p))
        }
        Command::Gamma { ideal, algebras } => {
            let i = s.ideal("ideal", ideal)?;
            let algebras = algebras
                .iter()
                .enumerate()
                .map(|(k, p)| s.algebra(&format!("algebra{}", k + 1), p))
                .collect::<Result<Vec<_>, _>>()?;
            lift(gamma_estimate(&s.ctx, &i, &algebras), |g| to_value(&g))
        }
    }
}

fn cache_dir(global: &Global) -> Option<PathBuf> {
    if let Some(d) = &global.cache_dir {
        return Some(d.clone());
    }
    if let Some(d) = std::env::var_os("JETCALC_CACHE").filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d).join("jetcalc"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("jetcalc"))
}

fn config(cli: &Cli, cache: Option<&Path>) -> Value {
    let mut v = to_value(&cli.global);
    let Value::Object(ref mut map) = v else {
        unreachable!()
    };
    map.insert(
        "cache_dir".into(),
        json!(cache.map(|p| p.display().to_string())),
    );
    map.insert("args".into(), to_value(&cli.command));
    v
}

fn render_text(report: &Map<String, Value>) -> String {
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            Value::Null => "-".into(),
            other => other.to_string(),
        }
    }
    fn flat(
        prefix: &str,
        v: &Value,
        out: &mut Vec<(String, String)>,
        tables: &mut Vec<(String, Vec<Map<String, Value>>)>,
    ) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    flat(&key, x, out, tables);
                }
            }
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                let rows = items
                    .iter()
                    .filter_map(|x| x.as_object().cloned())
                    .collect();
                tables.push((prefix.to_string(), rows));
            }
            Value::Array(items) => out.push((
                prefix.to_string(),
                items.iter().map(scalar).collect::<Vec<_>>().join(", "),
            )),
            other => out.push((prefix.to_string(), scalar(other))),
        }
    }
    let (mut lines, mut tables) = (Vec::new(), Vec::new());
    for (k, v) in report {
        if k != "config" && k != "inputs" {
            flat(k, v, &mut lines, &mut tables);
        }
    }
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in &lines {
        s.push_str(&format!("{k:width$}  {v}\n"));
    }
    for (name, rows) in tables {
        let cols: Vec<String> = rows[0].keys().cloned().collect();
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                cols.iter()
                    .map(|c| r.get(c).map(scalar).unwrap_or_default())
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = (0..cols.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([cols[i].len()])
                    .max()
                    .unwrap()
            })
            .collect();
        let row = |r: &[String]| {
            r.iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        s.push_str(&format!("\n{name}\n{}\n", row(&cols)));
        for r in &cells {
            s.push_str(&row(r));
            s.push('\n');
        }
    }
    s
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let dir = if cli.global.no_cache {
        None
    } else {
        cache_dir(&cli.global)
    };
    let file_cache = dir
        .as_deref()
        .map(|d| Arc::new(FileCache::open(d, cli.global.verify)));
    let mut ctx = Context::new(cli.global.order, cli.global.budget);
    if let Some(c) = &file_cache {
        ctx = ctx.with_cache(c.clone());
    }
    let mut session = Session {
        global: &cli.global,
        ctx,
        inputs: BTreeMap::new(),
        field: None,
    };
    let outcome = execute(&cli.command, &mut session)?;

    if let Some(c) = &file_cache {
        let bad = c.mismatches();
        if !bad.is_empty() {
            let list: Vec<String> = bad
                .iter()
                .map(|m| {
                    format!(
                        "{}: cached dimension {} (basis {}), recomputed {} (basis {})",
                        m.hash,
                        m.stored.dimension,
                        m.stored.basis_size,
                        m.computed.dimension,
                        m.computed.basis_size
                    )
                })
                .collect();
            return Err(Failure::Internal(format!(
                "cache verification failed:\n  {}",
                list.join("\n  ")
            )));
        }
        if c.hits() > 0 {
            eprintln!("note: {} dimension(s) answered from the cache", c.hits());
        }
    }

    let (body, code) = match outcome {
        Outcome::Done(v) => (v, 0),
        Outcome::Partial(v) => (v, 3),
    };
    let Value::Object(mut report) = body else {
        return Err(Failure::Internal("report is not an object".into()));
    };
    report.insert("partial".into(), json!(code == 3));
    report.insert("config".into(), config(cli, dir.as_deref()));
    report.insert("inputs".into(), to_value(&session.inputs));
    if let Some(f) = session.field {
        if f.is_rational() {
            report.insert("field".into(), json!("QQ"));
        } else {
            report.insert("field".into(), json!(format!("GF({})", f.characteristic())));
            report.insert("heuristic".into(), json!(true));
        }
    }

    let is_jet_eqs = matches!(cli.command, Command::JetEqs { .. });
    let text = match (cli.global.format, is_jet_eqs) {
        (Some(Format::Json), _) | (None, false) => {
            let mut s =
                serde_json::to_string_pretty(&Value::Object(report)).expect("reports serialize");
            s.push('\n');
            s
        }
        (_, true) => {
            let mut s = String::from("# jetcalc jet-eqs\n");
            for (role, f) in &session.inputs {
                s.push_str(&format!("# {role}: {} sha256 {}\n", f.path, f.sha256));
            }
            s.push_str(report["text"].as_str().unwrap_or_default());
            s
        }
        (Some(Format::Text), false) => render_text(&report),
    };
    Ok((text, code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
