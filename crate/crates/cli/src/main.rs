use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use relquiv_core::ext::{arrow_multiset, ExtEngine};
use relquiv_core::extension::{build_extension, ExtensionMode};
use relquiv_core::modules::Interval;
use relquiv_core::oracle::Oracle;
use relquiv_core::resolution::{
    coresolve_projective, coresolve_uniserial, resolve_injective, resolve_uniserial,
};
use relquiv_core::selftest::{run_selftest, SelftestConfig, DEFAULT_SEED};
use relquiv_core::{StringPresentation, Vertex};

/// Quivers of higher relation extensions of string tree algebras.
#[derive(Debug, Parser)]
#[command(name = "relquiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the admissibility, string and gentle axioms.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Minimal resolution of a uniserial, injective or projective module.
    Resolve {
        file: PathBuf,
        /// Uniserial module `M[a,b]`, written `a:b`.
        #[arg(long, conflicts_with_all = ["injective", "projective"])]
        interval: Option<String>,
        /// Projective resolution of the injective `I(c)`.
        #[arg(long, value_name = "C")]
        injective: Option<String>,
        /// Injective coresolution of the projective `P(z)`.
        #[arg(long, value_name = "Z")]
        projective: Option<String>,
        /// With `--interval`: coresolve instead of resolve.
        #[arg(long)]
        co: bool,
        #[arg(long, value_enum, default_value_t = ResolveFormat::Ascii)]
        format: ResolveFormat,
    },
    /// Witnesses of `Ext^i(I(c), P(z))`.
    Ext {
        file: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        z: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
        /// Exit with status 3 when the witnesses disagree with the oracle.
        #[arg(long)]
        strict: bool,
    },
    /// New arrows of the extended quiver, with provenance, as JSON.
    Arrows {
        file: PathBuf,
        #[arg(long)]
        strict: bool,
    },
    /// Extended quiver with relations.
    Extend {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Tensor)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = ExtendFormat::Json)]
        format: ExtendFormat,
    },
    /// Dimensions of the top of the higher relation bimodule in one degree.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Differential test of the combinatorics against the oracle on random trees.
    Selftest {
        #[arg(long, env = "RELQUIV_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
        #[arg(long, default_value_t = 0.6)]
        density: f64,
        /// Generate gentle trees only.
        #[arg(long)]
        gentle: bool,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ResolveFormat {
    Ascii,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExtendFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Tensor,
    Trivial,
}

impl From<Mode> for ExtensionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Tensor => ExtensionMode::Tensor,
            Mode::Trivial => ExtensionMode::Trivial,
        }
    }
}

const USAGE: u8 = 1;
const INVALID: u8 = 2;
const MISMATCH: u8 = 3;

/// Error carrying its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: USAGE, error }
    }
}

impl From<relquiv_core::Error> for Failure {
    fn from(e: relquiv_core::Error) -> Self {
        let code = match e {
            relquiv_core::Error::NotStringTree(_) | relquiv_core::Error::NotGentle(_) => INVALID,
            _ => USAGE,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn load(path: &PathBuf) -> Result<StringPresentation, Failure> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (p, warnings) = StringPresentation::parse_with_warnings(&text)
        .map_err(|e| anyhow::Error::new(e).context(format!("parsing {}", path.display())))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(p)
}

/// Load and require a string tree.
fn load_tree(path: &PathBuf) -> Result<StringPresentation, Failure> {
    let p = load(path)?;
    let r = p.validate();
    if !(r.is_string_tree() && r.admissible.holds) {
        return Err(Failure {
            code: INVALID,
            error: anyhow::anyhow!(
                "{} is not a string tree (string={} tree={} admissible={})",
                path.display(),
                r.is_string,
                r.is_tree,
                r.admissible.holds
            ),
        });
    }
    Ok(p)
}

fn vertex(p: &StringPresentation, name: &str) -> Result<Vertex, Failure> {
    p.vertex_by_name(name)
        .ok_or_else(|| anyhow::anyhow!("unknown vertex `{name}`").into())
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn validate(file: &PathBuf, format: TextFormat) -> Outcome {
    let p = load(file)?;
    let r = p.validate();
    match format {
        TextFormat::Json => print_json(&serde_json::to_value(&r).expect("report")),
        TextFormat::Text => {
            println!(
                "string={} gentle={} tree={} admissible={}",
                r.is_string, r.is_gentle, r.is_tree, r.admissible.holds
            );
            for (name, check) in [
                ("admissible", &r.admissible),
                ("S1", &r.s1),
                ("S2", &r.s2),
                ("S3", &r.s3),
                ("G1", &r.g1),
                ("G2", &r.g2),
            ] {
                for v in &check.violations {
                    println!("{name}: {}", serde_json::to_string(v).expect("violation"));
                }
            }
        }
    }
    Ok(if r.is_string_tree() && r.admissible.holds {
        0
    } else {
        INVALID
    })
}

fn resolve(
    file: &PathBuf,
    interval: Option<String>,
    injective: Option<String>,
    projective: Option<String>,
    co: bool,
    format: ResolveFormat,
) -> Outcome {
    let p = load_tree(file)?;
    let res = match (interval, injective, projective) {
        (Some(iv), None, None) => {
            let (a, b) = iv
                .split_once(':')
                .ok_or_else(|| anyhow::anyhow!("interval must be written a:b, got `{iv}`"))?;
            let iv = Interval::by_names(&p, a, b)?;
            if co {
                coresolve_uniserial(&p, &iv)?
            } else {
                resolve_uniserial(&p, &iv)?
            }
        }
        (None, Some(c), None) => resolve_injective(&p, vertex(&p, &c)?),
        (None, None, Some(z)) => coresolve_projective(&p, vertex(&p, &z)?),
        _ => {
            return Err(anyhow::anyhow!(
                "give exactly one of --interval, --injective, --projective"
            )
            .into());
        }
    };
    match format {
        ResolveFormat::Ascii => {
            println!("{}", res.sequence(&p));
            println!();
            print!("{}", res.ascii_tree(&p));
        }
        ResolveFormat::Json => print_json(&res.to_json(&p)),
    }
    Ok(0)
}

fn ext(
    file: &PathBuf,
    c: &str,
    z: &str,
    degree: usize,
    format: TextFormat,
    strict: bool,
) -> Outcome {
    let p = load_tree(file)?;
    let (c, z) = (vertex(&p, c)?, vertex(&p, z)?);
    let engine = ExtEngine::new(&p);
    let witnesses = if degree >= 2 {
        engine.ext_witnesses(c, z, degree)
    } else {
        Vec::new()
    };
    let dim = Oracle::new(&p).ext_dim(c, z, degree);
    let agrees = degree < 2 || witnesses.len() == dim;
    match format {
        TextFormat::Json => print_json(&json!({
            "c": p.vertex_name(c),
            "z": p.vertex_name(z),
            "degree": degree,
            "witnesses": witnesses.iter().map(|w| w.to_json(&p)).collect::<Vec<_>>(),
            "oracle_dim": dim,
            "oracle_agrees": agrees,
        })),
        TextFormat::Text => {
            println!(
                "Ext^{degree}(I({}), P({})): {} witness(es), oracle dim {dim}",
                p.vertex_name(c),
                p.vertex_name(z),
                witnesses.len()
            );
            for w in &witnesses {
                println!("  {}", w.describe(&p));
            }
            if degree < 2 {
                println!("  witnesses are only defined in degrees >= 2");
            }
        }
    }
    if !agrees {
        eprintln!(
            "discrepancy: {} witnesses but oracle dimension {dim}",
            witnesses.len()
        );
        if strict {
            return Ok(MISMATCH);
        }
    }
    Ok(0)
}

fn arrow_label(p: &StringPresentation, (z, c, i): &(Vertex, Vertex, usize)) -> String {
    format!("{}->{}@{i}", p.vertex_name(*z), p.vertex_name(*c))
}

fn arrows(file: &PathBuf, strict: bool) -> Outcome {
    let p = load_tree(file)?;
    let e = build_extension(&p, ExtensionMode::Tensor)?;
    let doc = e.to_document();
    let engine = arrow_multiset(&e.new_arrows);
    let oracle = Oracle::new(&p).new_arrow_multiset();
    let missing: Vec<String> = oracle
        .iter()
        .filter(|k| !engine.contains(k))
        .map(|k| arrow_label(&p, k))
        .collect();
    let extra: Vec<String> = engine
        .iter()
        .filter(|k| !oracle.contains(k))
        .map(|k| arrow_label(&p, k))
        .collect();
    let agrees = engine == oracle;
    let new: Vec<_> = doc
        .arrows
        .iter()
        .filter(|a| a.kind == relquiv_core::extension::ArrowKind::New)
        .collect();
    print_json(&json!({
        "arrows": new,
        "oracle": { "agrees": agrees, "missing": missing, "extra": extra },
    }));
    if !agrees {
        eprintln!("discrepancy: oracle-only {missing:?}, engine-only {extra:?}");
        if strict {
            return Ok(MISMATCH);
        }
    }
    Ok(0)
}

fn extend(file: &PathBuf, mode: Mode, format: ExtendFormat) -> Outcome {
    let p = load_tree(file)?;
    let e = build_extension(&p, mode.into())?;
    if e.relations.is_none() {
        eprintln!("note: input is not gentle; relations of the extension are not specified");
    }
    match format {
        ExtendFormat::Json => println!("{}", e.to_json()),
        ExtendFormat::Dot => print!("{}", e.to_dot()),
    }
    Ok(0)
}

fn oracle(file: &PathBuf, degree: usize, format: TableFormat) -> Outcome {
    let p = load_tree(file)?;
    let top = Oracle::new(&p).bimodule_top_dims(degree);
    match format {
        TableFormat::Json => print_json(&json!({
            "degree": degree,
            "vertices": p.vertex_names(),
            "rows": "z",
            "columns": "c",
            "entries": top.entries,
        })),
        TableFormat::Csv => {
            let mut header = vec!["z\\c".to_string()];
            header.extend(p.vertex_names().iter().cloned());
            println!("{}", header.join(","));
            for (z, row) in top.entries.iter().enumerate() {
                let mut line = vec![p.vertex_name(Vertex(z)).to_string()];
                line.extend(row.iter().map(usize::to_string));
                println!("{}", line.join(","));
            }
        }
    }
    Ok(0)
}

fn selftest(cfg: SelftestConfig, format: TextFormat, strict: bool) -> Outcome {
    let report = run_selftest(&cfg);
    match format {
        TextFormat::Json => print_json(&serde_json::to_value(&report).expect("report")),
        TextFormat::Text => {
            println!(
                "selftest seed={} instances={} checks={} failures={}",
                cfg.seed,
                report.instances,
                report.checks,
                report.failures.len()
            );
            for f in &report.failures {
                println!(
                    "FAIL {:?} seed={} vertices={}: {}  (reproduce: relquiv selftest --seed {} --iterations 1 --max-vertices {}{})",
                    f.check,
                    f.seed,
                    f.vertices,
                    f.detail,
                    f.seed,
                    f.vertices,
                    if cfg.gentle { " --gentle" } else { "" }
                );
            }
        }
    }
    Ok(if strict && !report.passed() {
        MISMATCH
    } else {
        0
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file, format } => validate(&file, format),
        Command::Resolve {
            file,
            interval,
            injective,
            projective,
            co,
            format,
        } => resolve(&file, interval, injective, projective, co, format),
        Command::Ext {
            file,
            c,
            z,
            degree,
            format,
            strict,
        } => ext(&file, &c, &z, degree, format, strict),
        Command::Arrows { file, strict } => arrows(&file, strict),
        Command::Extend { file, mode, format } => extend(&file, mode, format),
        Command::Oracle {
            file,
            degree,
            format,
        } => oracle(&file, degree, format),
        Command::Selftest {
            seed,
            iterations,
            max_vertices,
            density,
            gentle,
            format,
            strict,
        } => selftest(
            SelftestConfig {
                seed,
                iterations,
                max_vertices,
                relation_density: density,
                gentle,
            },
            format,
            strict,
        ),
    }
}

fn main() -> ExitCode {
    // Die quietly when piped into `head` and friends.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
