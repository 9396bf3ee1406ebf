//! Batch front end for the finite-category toolkit: validate and analyze
//! JSON documents, factor functors through their twisted-coreflection /
//! lens decomposition, fill squares, compose and enumerate structures,
//! and run the self-test battery.
//!
//! Exit codes: `0` when the requested operation succeeds (and any checked
//! property holds), `1` when a law or property fails (a witness is
//! printed), `2` for usage, parse, and budget errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use catlift::corpus::active_guard;
use catlift::docs::{
    document_to_string, load_document, save_document, DocError, LoadedDocument,
};
use catlift::suites;
use catlift_core::awfs::{factorize, lift, LiftError, LiftStrategy};
use catlift_core::coreflections::{
    compose_coreflections, is_twisted, SplitCoreflection, TwistedCoreflection, TwistedOutcome,
};
use catlift_core::fincat::{FinFunctor, FunctorClass};
use catlift_core::lenses::{
    compose_lenses, enumerate_generated_structures, enumerate_lens_structures, tabulator,
    DeltaLens, GeneratedVariant,
};

#[derive(Parser)]
#[command(
    name = "catlift",
    version,
    about = "Finite-category toolkit for delta lenses and twisted coreflections",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a document and check the laws of the structure it encodes.
    Validate {
        /// Path to a category, functor, lens, coreflection, or square document.
        doc: PathBuf,
    },
    /// Classify a functor document.
    Analyze {
        /// Path to a functor document.
        functor: PathBuf,
    },
    /// Factor a functor into a twisted coreflection followed by a lens.
    Factorize {
        /// Path to a functor document.
        functor: PathBuf,
        /// Directory that receives ef.json, lf.json, rf.json, lens.json,
        /// and coreflection.json.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Fill a commuting square from a twisted coreflection to a lens.
    Lift {
        /// Coreflection document for the left edge.
        #[arg(long)]
        coref: PathBuf,
        /// Lens document for the right edge.
        #[arg(long)]
        lens: PathBuf,
        /// Functor document for the top edge.
        #[arg(long)]
        top: PathBuf,
        /// Functor document for the bottom edge.
        #[arg(long)]
        bottom: PathBuf,
        /// How to build the diagonal.
        #[arg(long, value_enum, default_value_t = StrategyArg::Both)]
        strategy: StrategyArg,
        /// Write the diagonal as a functor document here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a property of a document, exiting 1 with a witness if it fails.
    Check {
        /// Which property to check.
        #[arg(value_enum)]
        property: CheckProperty,
        /// Path to the document (a coreflection for `twisted`, a lens for
        /// `lens`, a coreflection for `coref`).
        doc: PathBuf,
    },
    /// Carve the chosen lifts of a lens out as a wide subcategory.
    Tabulate {
        /// Path to a lens document.
        lens: PathBuf,
        /// Directory that receives lambda.json, pi_a.json, and pi_b.json.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Compose two lens documents or two coreflection documents.
    Compose {
        /// Which structures the documents carry.
        #[arg(value_enum)]
        kind: ComposeKind,
        /// The first factor (applied first).
        first: PathBuf,
        /// The second factor.
        second: PathBuf,
        /// Write the composite document here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate structures on a functor within the active search budget.
    Enumerate {
        /// `lenses` for direct lens-structure search, or
        /// `generated:lens`, `generated:dopf`, `generated:sopf` for the
        /// generated searches.
        what: String,
        /// Path to a functor document.
        functor: PathBuf,
    },
    /// Run the self-test battery over the built-in corpus.
    Selftest {
        /// Run a single suite, by name or number.
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Formula,
    Universal,
    Both,
}

impl From<StrategyArg> for LiftStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Formula => LiftStrategy::Formula,
            StrategyArg::Universal => LiftStrategy::Universal,
            StrategyArg::Both => LiftStrategy::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckProperty {
    /// The coreflection admits unique sections for all crossings.
    Twisted,
    /// The document is a lawful delta lens.
    Lens,
    /// The document is a lawful split coreflection.
    Coref,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComposeKind {
    Lens,
    Coref,
}

/// A failed run: law failures exit 1, usage errors exit 2.
enum Failure {
    Law(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Law(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Law(m) | Failure::Usage(m) => m,
        }
    }
}

fn from_doc_error(e: DocError) -> Failure {
    if e.is_law_failure() {
        Failure::Law(e.to_string())
    } else {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { doc } => validate(&doc),
        Command::Analyze { functor } => analyze(&functor),
        Command::Factorize { functor, out } => run_factorize(&functor, &out),
        Command::Lift {
            coref,
            lens,
            top,
            bottom,
            strategy,
            out,
        } => run_lift(&coref, &lens, &top, &bottom, strategy, out.as_deref()),
        Command::Check { property, doc } => check(property, &doc),
        Command::Tabulate { lens, out } => run_tabulate(&lens, &out),
        Command::Compose {
            kind,
            first,
            second,
            out,
        } => run_compose(kind, &first, &second, out.as_deref()),
        Command::Enumerate { what, functor } => run_enumerate(&what, &functor),
        Command::Selftest { suite } => run_selftest(suite.as_deref()),
    }
}

// ---------------------------------------------------------------------------
// Document plumbing
// ---------------------------------------------------------------------------

fn load(path: &Path) -> Result<LoadedDocument, Failure> {
    load_document(path).map_err(from_doc_error)
}

fn save(doc: &LoadedDocument, path: &Path) -> Result<(), Failure> {
    save_document(doc, path).map_err(from_doc_error)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn emit(doc: &LoadedDocument, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => save(doc, path),
        None => {
            print!("{}", document_to_string(doc));
            Ok(())
        }
    }
}

fn expect_functor(path: &Path) -> Result<FinFunctor, Failure> {
    match load(path)? {
        LoadedDocument::Functor(f) => Ok(f),
        other => Err(Failure::Usage(format!(
            "{}: expected a functor document, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn expect_lens(path: &Path) -> Result<DeltaLens, Failure> {
    match load(path)? {
        LoadedDocument::Lens(l) => Ok(l),
        other => Err(Failure::Usage(format!(
            "{}: expected a lens document, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn expect_coref(path: &Path) -> Result<SplitCoreflection, Failure> {
    match load(path)? {
        LoadedDocument::Coreflection(c) => Ok(c),
        other => Err(Failure::Usage(format!(
            "{}: expected a coreflection document, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn validate(path: &Path) -> Result<(), Failure> {
    let doc = load(path)?;
    let detail = match &doc {
        LoadedDocument::Category(c) => format!(
            "{} objects, {} morphisms",
            c.objects().len(),
            c.morphisms().count()
        ),
        LoadedDocument::Functor(f) => format!(
            "{} objects mapped, {} morphisms mapped",
            f.obj_map().len(),
            f.mor_map().len()
        ),
        LoadedDocument::Lens(l) => format!("{} lift entries", l.lifts().len()),
        LoadedDocument::Coreflection(s) => {
            format!("{} counit components", s.counit().components().len())
        }
        LoadedDocument::Square(_) => "frame commutes".to_string(),
    };
    println!("ok: {} document ({detail})", doc.kind());
    Ok(())
}

fn analyze(path: &Path) -> Result<(), Failure> {
    let f = expect_functor(path)?;
    let class: FunctorClass = f.classify();
    let flag = |b: bool| if b { "yes" } else { "no" };
    println!("fully faithful:       {}", flag(class.fully_faithful));
    println!("bijective on objects: {}", flag(class.bijective_on_objects));
    println!("identity on objects:  {}", flag(class.identity_on_objects));
    println!("initial:              {}", flag(class.initial));
    println!("discrete opfibration: {}", flag(class.discrete_opfibration));
    println!("isomorphism:          {}", flag(class.isomorphism));
    Ok(())
}

fn run_factorize(functor: &Path, out: &Path) -> Result<(), Failure> {
    let f = expect_functor(functor)?;
    let ff = factorize(&f);
    std::fs::create_dir_all(out)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", out.display())))?;
    save(&LoadedDocument::Category(ff.ef().clone()), &out.join("ef.json"))?;
    save(&LoadedDocument::Functor(ff.lf().clone()), &out.join("lf.json"))?;
    save(&LoadedDocument::Functor(ff.rf().clone()), &out.join("rf.json"))?;
    save(&LoadedDocument::Lens(ff.lens().clone()), &out.join("lens.json"))?;
    save(
        &LoadedDocument::Coreflection(ff.coref().coref().clone()),
        &out.join("coreflection.json"),
    )?;
    Ok(())
}

fn run_lift(
    coref: &Path,
    lens: &Path,
    top: &Path,
    bottom: &Path,
    strategy: StrategyArg,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let coref = expect_coref(coref)?;
    let lens = expect_lens(lens)?;
    let top = expect_functor(top)?;
    let bottom = expect_functor(bottom)?;
    let twisted = TwistedCoreflection::try_new(coref).map_err(|fail| {
        Failure::Law(format!(
            "the coreflection is not twisted: {} admits {} sections instead of exactly one",
            fail.u, fail.candidates
        ))
    })?;
    let result = lift(&twisted, &lens, &top, &bottom, strategy.into()).map_err(|e| match e {
        LiftError::ShapeMismatch => Failure::Usage(e.to_string()),
        LiftError::SquareDoesNotCommute => Failure::Law(e.to_string()),
    })?;
    emit(&LoadedDocument::Functor(result.j), out)
}

fn check(property: CheckProperty, doc: &Path) -> Result<(), Failure> {
    match property {
        CheckProperty::Twisted => {
            let coref = expect_coref(doc)?;
            match is_twisted(&coref) {
                TwistedOutcome::Twisted(_) => {
                    println!("twisted: every crossing has exactly one section");
                    Ok(())
                }
                TwistedOutcome::NotTwisted(fail) => Err(Failure::Law(format!(
                    "not twisted: {} admits {} sections instead of exactly one",
                    fail.u, fail.candidates
                ))),
            }
        }
        CheckProperty::Lens => {
            // Loading a lens document already runs the lift laws.
            let lens = expect_lens(doc)?;
            println!("lens laws hold ({} lift entries)", lens.lifts().len());
            Ok(())
        }
        CheckProperty::Coref => {
            let coref = expect_coref(doc)?;
            println!(
                "coreflection laws hold ({} counit components)",
                coref.counit().components().len()
            );
            Ok(())
        }
    }
}

fn run_tabulate(lens: &Path, out: &Path) -> Result<(), Failure> {
    let lens = expect_lens(lens)?;
    let tab = tabulator(&lens);
    std::fs::create_dir_all(out)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", out.display())))?;
    save(
        &LoadedDocument::Category(tab.lambda.clone()),
        &out.join("lambda.json"),
    )?;
    save(&LoadedDocument::Functor(tab.pi_a), &out.join("pi_a.json"))?;
    save(&LoadedDocument::Functor(tab.pi_b), &out.join("pi_b.json"))?;
    Ok(())
}

fn run_compose(
    kind: ComposeKind,
    first: &Path,
    second: &Path,
    out: Option<&Path>,
) -> Result<(), Failure> {
    match kind {
        ComposeKind::Lens => {
            let a = expect_lens(first)?;
            let b = expect_lens(second)?;
            let composite = compose_lenses(&a, &b).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&LoadedDocument::Lens(composite), out)
        }
        ComposeKind::Coref => {
            let a = expect_coref(first)?;
            let b = expect_coref(second)?;
            let composite =
                compose_coreflections(&a, &b).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&LoadedDocument::Coreflection(composite), out)
        }
    }
}

fn run_enumerate(what: &str, functor: &Path) -> Result<(), Failure> {
    let f = expect_functor(functor)?;
    let guard = active_guard().map_err(|e| Failure::Usage(e.to_string()))?;
    let result = match what {
        "lenses" => enumerate_lens_structures(&f, &guard),
        other => {
            let variant = match other.strip_prefix("generated:") {
                Some("lens") => GeneratedVariant::Lens,
                Some("dopf") => GeneratedVariant::Dopf,
                Some("sopf") => GeneratedVariant::Sopf,
                _ => {
                    return Err(Failure::Usage(format!(
                        "unknown enumeration `{what}`; expected `lenses`, `generated:lens`, \
                         `generated:dopf`, or `generated:sopf`"
                    )))
                }
            };
            enumerate_generated_structures(&f, variant, &guard)
        }
    };
    let count = result.map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{} structures", count.count);
    let cod = count.functor.cod().clone();
    for (i, structure) in count.structures.iter().flatten().enumerate() {
        let table = structure
            .lifts()
            .iter()
            .filter(|((_, u), _)| !cod.is_identity(u))
            .map(|((a, u), w)| format!("({a}, {u}) -> {w}"))
            .collect::<Vec<_>>()
            .join("; ");
        println!("structure {i}: {table}");
    }
    Ok(())
}

fn run_selftest(suite: Option<&str>) -> Result<(), Failure> {
    let reports = match suite {
        Some(name) => vec![suites::run_named(name).map_err(Failure::Usage)?],
        None => suites::run_all().map_err(Failure::Usage)?,
    };
    for report in &reports {
        println!("{}", report.summary_line());
        for failure in report.failures.iter().take(10) {
            println!("    {failure}");
        }
        if report.failures.len() > 10 {
            println!("    ... and {} more", report.failures.len() - 10);
        }
    }
    let failing = reports.iter().filter(|r| !r.passed()).count();
    if failing == 0 {
        println!("selftest: PASS ({} suites)", reports.len());
        Ok(())
    } else {
        println!("selftest: FAIL ({failing} of {} suites)", reports.len());
        Err(Failure::Law(format!(
            "{failing} suite(s) reported failing laws"
        )))
    }
}
