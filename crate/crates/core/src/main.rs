use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use curvclass::corpus::{corpus_manifest, CORPUS_NAMES};
use curvclass::curvature::DerivedKind;
use curvclass::detect::{CheckStatus, NamedCheck, Verdict};
use curvclass::manifest::{parse_point, Manifest};
use curvclass::numeric;
use curvclass::report::{self, AnalyzeOptions, ReportDocument, Selection, TensorName};
use curvclass::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

/// Exact curvature analysis and recurrent-like structure detection for
/// metrics given by rational component expressions.
#[derive(Parser)]
#[command(name = "curvclass", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    R,
    C,
    P,
    W,
    K,
}

impl Target {
    fn derived(self) -> Option<DerivedKind> {
        match self {
            Target::R => None,
            Target::C => Some(DerivedKind::Conformal),
            Target::P => Some(DerivedKind::Projective),
            Target::W => Some(DerivedKind::Concircular),
            Target::K => Some(DerivedKind::Conharmonic),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute curvature and run the structure detectors.
    Analyze {
        /// Manifest file or corpus entry name.
        manifest: String,
        /// Comma separated subset of k,gk,hgk,wgk,sgk,qgk,roter,einstein,semisym,theorems.
        #[arg(long)]
        structures: Option<String>,
        /// Tensor subjected to the rank-four structure conditions.
        #[arg(long, value_enum, default_value = "r")]
        tensor: Target,
        /// Write the JSON report to this file (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the verification battery; exits with status 2 on any failure.
    Verify {
        manifest: String,
        #[arg(long, hide = true)]
        flip_riemann_sign: bool,
    },
    /// Compare exact values with a finite-difference computation.
    Crosscheck {
        manifest: String,
        /// Number of random points; the manifest's sample points are used when omitted.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, default_value_t = numeric::DEFAULT_STEP)]
        step: f64,
        #[arg(long, default_value_t = numeric::DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print exact component values at a rational point.
    Eval {
        manifest: String,
        #[arg(long)]
        tensor: String,
        /// Comma separated coordinates, e.g. `1,1/2,3,1`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Built-in example manifests.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Show { name: String },
}

enum Failure {
    Error(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::DegenerateMetric(_) | Error::Pole(_) | Error::DivisionByZero => EXIT_DEGENERATE,
        _ => EXIT_USAGE,
    }
}

fn load(arg: &str) -> Result<Manifest, Error> {
    let path = Path::new(arg);
    if path.exists() {
        Manifest::load(path)
    } else if CORPUS_NAMES.contains(&arg) {
        corpus_manifest(arg)
    } else {
        Err(Error::InvalidArgument(format!(
            "'{arg}' is neither a readable file nor a corpus entry"
        )))
    }
}

fn print_checks(checks: &[NamedCheck]) {
    for c in checks {
        match &c.detail {
            Some(d) => println!("{:<16} {}  ({d})", c.status.to_string(), c.name),
            None => println!("{:<16} {}", c.status.to_string(), c.name),
        }
    }
}

fn print_report(doc: &ReportDocument) {
    let s = &doc.structures;
    println!("target: {}", s.target);
    for (name, entry) in &s.recurrent_like {
        let params: usize = entry.family.directions.iter().map(|d| d.null_basis.len()).sum();
        let extra = if entry.verdict == Verdict::Holds && params > 0 {
            format!(" ({params} free parameters)")
        } else {
            String::new()
        };
        println!("{name:<30} {}{extra}", entry.verdict);
    }
    for (name, why) in &s.skipped {
        println!("{name:<30} skipped: {why}");
    }
    if let Some(r) = &s.roter {
        let v = if !r.status_is_consistent() {
            "fails"
        } else if r.proper {
            "holds (proper)"
        } else {
            "holds (not proper)"
        };
        println!("{:<30} {v}", "roter");
    }
    if let Some(e) = &s.einstein {
        println!("{:<30} {}", "einstein", e.einstein);
        println!("{:<30} {}", "ein2", e.ein2.holds);
        println!("{:<30} {}", "quasi-einstein", e.quasi_einstein.is_some());
    }
    if let Some(m) = &s.semisymmetry {
        println!("{:<30} {}", "semisymmetric", m.semisymmetric);
        println!("{:<30} {}", "pseudosymmetric", m.pseudosymmetric);
    }
    if !doc.theorems.is_empty() {
        println!();
        print_checks(&doc.theorems);
    }
    if !doc.excluded_loci.is_empty() {
        println!();
        println!("excluded loci:");
        for l in &doc.excluded_loci {
            println!("  {l} = 0");
        }
    }
    if let Some(n) = &doc.numeric_checks {
        println!();
        println!(
            "numeric crosscheck: {} points, max relative error {:.3e} ({})",
            n.points,
            n.max_relative_error,
            if n.passed { "pass" } else { "fail" }
        );
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            manifest,
            structures,
            tensor,
            json,
        } => {
            let m = load(&manifest)?;
            let selection = match structures {
                Some(list) => Selection::parse_list(&list)?,
                None => Selection::all(),
            };
            let opts = AnalyzeOptions {
                selection,
                target: tensor.derived(),
                ..AnalyzeOptions::default()
            };
            let doc = report::analyze(&m, &opts)?;
            match json {
                Some(path) if path.as_os_str() == "-" => println!("{}", doc.to_json()),
                Some(path) => {
                    std::fs::write(&path, doc.to_json() + "\n").map_err(Error::from)?;
                    print_report(&doc);
                }
                None => print_report(&doc),
            }
            let numeric_failed = doc.numeric_checks.as_ref().is_some_and(|n| !n.passed);
            if numeric_failed || !doc.failed_checks().is_empty() {
                return Err(Failure::Verification);
            }
        }
        Command::Verify {
            manifest,
            flip_riemann_sign,
        } => {
            let m = load(&manifest)?;
            let checks = report::verify_suite(&m, flip_riemann_sign)?;
            print_checks(&checks);
            if checks.iter().any(|c| c.status == CheckStatus::Fail) {
                return Err(Failure::Verification);
            }
        }
        Command::Crosscheck {
            manifest,
            points,
            step,
            tol,
            seed,
        } => {
            let m = load(&manifest)?;
            let b = report::build_bundle(&m, false)?;
            let pts = match points {
                Some(count) => numeric::random_points(&b, &m.positive_indices(), count, seed)?,
                None => m.sample_points()?,
            };
            if pts.is_empty() {
                return Err(Error::InvalidArgument("no sample points; pass --points".into()).into());
            }
            let s = numeric::numeric_crosscheck(&b, &pts, step, tol)?;
            println!("points: {}", s.points);
            println!("step: {:e}", s.step);
            println!("tolerance: {:e}", s.tolerance);
            println!("max relative error: {:.3e}", s.max_relative_error);
            if let Some(w) = &s.worst {
                println!("worst: {w}");
            }
            println!("{}", if s.passed { "pass" } else { "fail" });
            if !s.passed {
                return Err(Failure::Verification);
            }
        }
        Command::Eval {
            manifest,
            tensor,
            point,
        } => {
            let m = load(&manifest)?;
            let name: TensorName = tensor.parse()?;
            let point = parse_point(&point)?;
            let b = report::build_bundle(&m, false)?;
            let values = report::eval_point(&b, name, &point)?;
            let mut printed = false;
            for (label, v) in &values {
                if name == TensorName::Scalar {
                    println!("{} = {v}", name.symbol());
                    printed = true;
                } else if !num_traits::Zero::is_zero(v) {
                    println!("{}_{label} = {v}", name.symbol());
                    printed = true;
                }
            }
            if !printed {
                println!("all components of {name} vanish");
            }
        }
        Command::Corpus { action } => match action {
            CorpusAction::List => {
                for name in CORPUS_NAMES {
                    println!("{name}");
                }
            }
            CorpusAction::Show { name } => print!("{}", corpus_manifest(&name)?.to_text()),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFICATION),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
