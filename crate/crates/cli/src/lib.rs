//! The `twzeta` command line. Every command prints one schema-versioned JSON
//! document on stdout (or CSV for spectrum tables); timings go to stderr.
//!
//! Exit codes: 0 success, 1 a verification or computation failed, 2 the
//! input was invalid.

pub mod config;
pub mod suite;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use twzeta_core::predictions::{
    self, adjoint_dims, consistency_audit, generic_prediction, tau_jordan_dims, trivial_rep_dims, TorsionValue,
};
use twzeta_core::presentation::unit_tangent_presentation;
use twzeta_core::representation::{
    adjoint_rep, classify, sl2_lift_rep, trivial_rep, unitary_generic_rep, RepFile,
};
use twzeta_core::spectrum_io;
use twzeta_core::zeta::{verify_identities, Identity};
use twzeta_core::{
    cohomology_dims, enumerate_spectrum, ArithmeticMode, Complex64, Error, GroupSpec, HolonomyAssignment,
    LengthSpectrum, PreparedSpectrum, PresentationKind, Representation, ZetaKind,
};

pub use config::RunConfig;

pub const OUTPUT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "twzeta", version, about = "Twisted zeta functions and resonance predictions for hyperbolic surfaces")]
pub struct Cli {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for enumeration and zeta sums.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Spectrum cache directory (default: config, then $TWZETA_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Write the primary artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the closed geodesics up to a length.
    Spectrum(SpectrumArgs),
    /// Build, validate or classify representations.
    #[command(subcommand)]
    Rep(RepCommand),
    /// Twisted cohomology dimensions through Fox calculus.
    Cohomology(CohomologyArgs),
    /// Evaluate zeta functions or check their product identities.
    #[command(subcommand)]
    Zeta(ZetaCommand),
    /// Predicted resonance dimensions and vanishing order.
    Predict(PredictArgs),
    /// Torsion `det(Id - rho(c))^(2G-2)`.
    Torsion(TorsionArgs),
    /// Run a verification suite.
    VerifyPaper(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// `bolza` or `polygon:G`.
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub max_length: f64,
    /// Exact Q(sqrt 2) arithmetic (Bolza only).
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub conj_radius: Option<usize>,
    #[arg(long)]
    pub node_budget: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum RepCommand {
    /// Check the relators.
    Validate { file: PathBuf },
    /// Factoring, irreducibility and generic-set membership.
    Classify { file: PathBuf },
    /// Write a representation file.
    #[command(subcommand)]
    Make(MakeCommand),
}

#[derive(Debug, Subcommand)]
pub enum MakeCommand {
    /// Unitary clock-and-shift representation with `rho(c) = e^{2 pi i j / r}`.
    UnitaryGeneric {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        j: usize,
    },
    /// Trivial representation of the unit tangent group.
    Trivial {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// SL2 lift of the Fuchsian generators, `tau(c) = -Id`.
    Sl2Lift {
        #[arg(long)]
        group: String,
    },
    /// Adjoint representation of the Fuchsian group.
    Adjoint {
        #[arg(long)]
        group: String,
    },
}

#[derive(Debug, Args)]
pub struct CohomologyArgs {
    /// `unit-tangent:G` or `surface:G`.
    #[arg(long)]
    pub presentation: String,
    #[arg(long)]
    pub rep: PathBuf,
    /// Relative rank tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HolonomyKind {
    Factoring,
    Sl2Lift,
}

#[derive(Debug, Args)]
pub struct ZetaCommon {
    /// Spectrum file written by `spectrum --out`.
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long)]
    pub rep: PathBuf,
    #[arg(long, value_enum, default_value = "factoring")]
    pub holonomy: HolonomyKind,
    /// Factoring part tensored with the SL2 lift.
    #[arg(long)]
    pub factoring: Option<PathBuf>,
    #[arg(long)]
    pub j_max: Option<usize>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub k_tail_target: Option<f64>,
    #[arg(long)]
    pub required_margin: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum ZetaCommand {
    /// Evaluate one product at one point.
    Eval {
        #[command(flatten)]
        common: ZetaCommon,
        /// `RE` or `RE,IM`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// ruelle, selberg, det0, det1 or det2.
        #[arg(long, default_value = "ruelle")]
        kind: String,
    },
    /// Check the product identities at a list of real points.
    Verify {
        #[command(flatten)]
        common: ZetaCommon,
        /// Comma separated real parts.
        #[arg(long, default_value = "2,2.5,3")]
        points: String,
        /// Comma separated subset of: ruelle-selberg-quotient,
        /// det0-selberg-product, adjoint-selberg, det-factorization.
        #[arg(long, default_value = "ruelle-selberg-quotient,det0-selberg-product,det-factorization")]
        identities: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Generic,
    Trivial,
    Adjoint,
    Sl2Lift,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Representation for the generic family.
    #[arg(long)]
    pub rep: Option<PathBuf>,
    #[arg(long)]
    pub genus: usize,
    #[arg(long, value_enum, default_value = "generic")]
    pub family: Family,
    /// `dim ker(Laplacian - 1/4)` for the SL2 lift.
    #[arg(long)]
    pub n_quarter: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TorsionArgs {
    #[arg(long)]
    pub rep: PathBuf,
    #[arg(long)]
    pub genus: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "core")]
    pub suite: String,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_)
            | Error::Parse(_)
            | Error::Io(_)
            | Error::RelatorViolated(_)
            | Error::NotApplicable(_)
            | Error::OutsideConvergence { .. } => 2,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

/// What a successful command produced: the text for stdout (or `--out`)
/// and whether its verification passed.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub pass: bool,
    /// The command already wrote its artifact to `--out`; `output` is a
    /// summary for stdout.
    pub wrote_out: bool,
}

fn envelope(command: &str, result: impl Serialize) -> Result<String, CliError> {
    let v = json!({ "schema_version": OUTPUT_SCHEMA_VERSION, "command": command, "result": result });
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError { code: 1, message: e.to_string() })?;
    s.push('\n');
    Ok(s)
}

fn ok(command: &str, result: impl Serialize) -> Result<Outcome, CliError> {
    Ok(Outcome { output: envelope(command, result)?, pass: true, wrote_out: false })
}

fn read_rep(path: &Path) -> Result<Representation, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("--rep {}: {e}", path.display())))?;
    Representation::from_json(&text).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn group_spec(s: &str) -> Result<GroupSpec, CliError> {
    s.parse().map_err(|e: Error| CliError::input(format!("--group: {e}")))
}

fn float_group(s: &str) -> Result<twzeta_core::SurfaceGroup, CliError> {
    let spec = group_spec(s)?;
    let mode = if spec == GroupSpec::Bolza { ArithmeticMode::Exact } else { ArithmeticMode::Float };
    Ok(spec.build(mode)?)
}

fn check_genus(genus: usize) -> Result<(), CliError> {
    if genus < 2 {
        return Err(CliError::input(format!("--genus: genus must satisfy G >= 2, got G = {genus}")));
    }
    Ok(())
}

fn genus_matches(rep: &Representation, genus: usize) -> Result<(), CliError> {
    if rep.genus() != genus {
        return Err(CliError::input(format!("--genus {genus} does not match the representation (G = {})", rep.genus())));
    }
    Ok(())
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::input(format!("--s: expected RE or RE,IM, got {s:?}"));
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn parse_identity(s: &str) -> Result<Identity, CliError> {
    Identity::ALL
        .into_iter()
        .find(|id| id.name() == s.trim())
        .ok_or_else(|| CliError::input(format!("--identities: unknown identity {s:?}")))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = config::merged(cli)?;
    match &cli.command {
        Command::Spectrum(a) => spectrum(a, &cfg, cli.out.as_deref()),
        Command::Rep(c) => rep(c),
        Command::Cohomology(a) => cohomology(a, &cfg),
        Command::Zeta(c) => zeta(c, &cfg),
        Command::Predict(a) => predict(a),
        Command::Torsion(a) => torsion(a),
        Command::VerifyPaper(a) => verify(a),
    }
}

fn spectrum(a: &SpectrumArgs, cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome, CliError> {
    let spec = group_spec(&a.group)?;
    if !(a.max_length > 0.0 && a.max_length.is_finite()) {
        return Err(CliError::input(format!("--max-length must be positive and finite, got {}", a.max_length)));
    }
    let mode = if a.exact { ArithmeticMode::Exact } else { ArithmeticMode::Float };
    let opts = cfg.enum_options(a.max_depth, a.conj_radius, a.node_budget);
    let (sp, cache) = match &cfg.cache_dir {
        Some(dir) => {
            let (sp, hit, path) = spectrum_io::cached_spectrum(dir, spec, mode, a.max_length, &opts)?;
            (sp, Some(json!({ "hit": hit, "path": path })))
        }
        None => (enumerate_spectrum(&spec.build(mode)?, a.max_length, &opts)?, None),
    };
    let format = a.format.or(cfg.format).unwrap_or(Format::Json);
    if format == Format::Csv {
        let mut buf = Vec::new();
        spectrum_io::write_csv(&sp, &mut buf)?;
        return Ok(Outcome { output: String::from_utf8_lossy(&buf).into_owned(), pass: true, wrote_out: false });
    }
    if let Some(path) = out {
        spectrum_io::save(&sp, path)?;
        let summary = json!({ "header": spectrum_io::header(&sp), "systole": sp.systole(), "file": path, "cache": cache });
        return Ok(Outcome { output: envelope("spectrum", summary)?, pass: true, wrote_out: true });
    }
    ok("spectrum", spectrum_summary(&sp, cache))
}

fn spectrum_summary(sp: &LengthSpectrum, cache: Option<Value>) -> Value {
    let classes: Vec<Value> = sp
        .classes
        .iter()
        .map(|c| json!({ "word": c.word.to_string(), "length": c.length, "trace": c.trace, "primitive": c.primitive, "power_index": c.power_index, "multiplicity": c.multiplicity }))
        .collect();
    json!({ "header": spectrum_io::header(sp), "systole": sp.systole(), "cache": cache, "classes": classes })
}

fn rep(c: &RepCommand) -> Result<Outcome, CliError> {
    match c {
        RepCommand::Validate { file } => {
            let text = fs::read_to_string(file).map_err(|e| CliError::input(format!("{}: {e}", file.display())))?;
            let parsed: RepFile = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", file.display())))?;
            match parsed.to_rep() {
                Ok(rep) => {
                    let (residual, scale) = rep.relator_check();
                    ok("rep validate", json!({ "pass": true, "relator_residual": residual, "scale": scale, "tol": rep.tol }))
                }
                Err(Error::RelatorViolated(msg)) => Ok(Outcome {
                    output: envelope("rep validate", json!({ "pass": false, "detail": msg, "tol": parsed.tol }))?,
                    pass: false,
                    wrote_out: false,
                }),
                Err(e) => Err(e.into()),
            }
        }
        RepCommand::Classify { file } => ok("rep classify", classify(&read_rep(file)?)?),
        RepCommand::Make(m) => {
            let rep = match m {
                MakeCommand::UnitaryGeneric { genus, dim, j } => {
                    check_genus(*genus)?;
                    unitary_generic_rep(*genus, *dim, *j)?
                }
                MakeCommand::Trivial { genus, dim } => {
                    check_genus(*genus)?;
                    trivial_rep(PresentationKind::UnitTangent(*genus), *dim)?
                }
                MakeCommand::Sl2Lift { group } => sl2_lift_rep(&float_group(group)?, None)?,
                MakeCommand::Adjoint { group } => adjoint_rep(&float_group(group)?)?,
            };
            let mut s = rep.to_json()?;
            s.push('\n');
            Ok(Outcome { output: s, pass: true, wrote_out: false })
        }
    }
}

fn cohomology(a: &CohomologyArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let kind: PresentationKind = a.presentation.parse().map_err(|e: Error| CliError::input(format!("--presentation: {e}")))?;
    let mut rep = read_rep(&a.rep)?;
    if rep.genus() != kind.genus() {
        return Err(CliError::input(format!("--presentation {kind} does not match the representation (G = {})", rep.genus())));
    }
    if matches!(kind, PresentationKind::UnitTangent(_)) && matches!(rep.target, PresentationKind::Surface(_)) {
        rep = rep.pull_back_to_unit_tangent()?;
    }
    if rep.target != kind {
        return Err(CliError::input(format!("--presentation {kind}: representation is defined on {}", rep.target)));
    }
    let tol = a.tol.or(cfg.rank_tol).unwrap_or(twzeta_core::linalg::RANK_TOL);
    if !(tol > 0.0) {
        return Err(CliError::input(format!("--tol must be positive, got {tol}")));
    }
    let d = cohomology_dims(&twzeta_core::Presentation::for_kind(kind)?, &rep, tol)?;
    let m = (d.manifold_dim == 3).then(|| d.h1 as i64 - 2 * d.h0 as i64);
    ok(
        "cohomology",
        json!({
            "h0": d.h0, "h1": d.h1, "h2": d.h2, "h3": d.h3,
            "m": m,
            "source": { "m": predictions::source::COHOMOLOGY_ORDER, "h0": predictions::source::INVARIANTS },
            "method": d.method,
            "gap_report": d.gap_report,
        }),
    )
}

fn holonomy(c: &ZetaCommon) -> Result<HolonomyAssignment, CliError> {
    let rep = read_rep(&c.rep)?;
    Ok(match c.holonomy {
        HolonomyKind::Factoring => {
            if c.factoring.is_some() {
                return Err(CliError::input("--factoring only applies to --holonomy sl2-lift"));
            }
            HolonomyAssignment::factoring(rep)?
        }
        HolonomyKind::Sl2Lift => {
            let f = c.factoring.as_deref().map(read_rep).transpose()?;
            HolonomyAssignment::sl2_lift(rep, f)?
        }
    })
}

fn load_spectrum(path: &Path, h: &HolonomyAssignment) -> Result<LengthSpectrum, CliError> {
    let sp = spectrum_io::load(path).map_err(|e| CliError::input(format!("--spectrum {}: {e}", path.display())))?;
    let g = match h {
        HolonomyAssignment::Factoring(r) => r.genus(),
        HolonomyAssignment::Sl2LiftTensor { tau, .. } => tau.genus(),
    };
    if sp.genus != g {
        return Err(CliError::input(format!("--spectrum has genus {}, the representation genus {g}", sp.genus)));
    }
    Ok(sp)
}

fn zeta(c: &ZetaCommand, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match c {
        ZetaCommand::Eval { common, s, kind } => {
            let s = parse_complex(s)?;
            let kind: ZetaKind = kind.parse().map_err(|e: Error| CliError::input(format!("--kind: {e}")))?;
            let opts = cfg.zeta_options(common)?;
            let h = holonomy(common)?;
            let sp = load_spectrum(&common.spectrum, &h)?;
            let v = PreparedSpectrum::new(&sp, &h)?.evaluate(kind, s, &opts)?;
            ok("zeta eval", json!({ "holonomy": h.label(), "options": opts, "value": v }))
        }
        ZetaCommand::Verify { common, points, identities } => {
            let pts = points
                .split(',')
                .map(|p| p.trim().parse::<f64>().map(|x| Complex64::new(x, 0.0)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::input(format!("--points: expected comma separated reals, got {points:?}")))?;
            let ids = identities.split(',').map(parse_identity).collect::<Result<Vec<_>, _>>()?;
            let opts = cfg.zeta_options(common)?;
            let h = holonomy(common)?;
            let sp = load_spectrum(&common.spectrum, &h)?;
            let report = verify_identities(&sp, &h, &pts, &ids, &opts)?;
            let pass = report.pass;
            Ok(Outcome { output: envelope("zeta verify", json!({ "options": opts, "report": report }))?, pass, wrote_out: false })
        }
    }
}

fn predict(a: &PredictArgs) -> Result<Outcome, CliError> {
    check_genus(a.genus)?;
    if a.n_quarter.is_some() && a.family != Family::Sl2Lift {
        return Err(CliError::input("--n-quarter only applies to --family sl2-lift"));
    }
    if a.rep.is_some() != (a.family == Family::Generic) {
        return Err(CliError::input("--rep is required for --family generic and not accepted otherwise"));
    }
    let report = match a.family {
        Family::Trivial => trivial_rep_dims(a.genus)?,
        Family::Adjoint => adjoint_dims(a.genus)?,
        Family::Sl2Lift => tau_jordan_dims(a.genus, a.n_quarter.unwrap_or(0))?,
        Family::Generic => {
            let rep = read_rep(a.rep.as_deref().unwrap_or(Path::new("")))?;
            genus_matches(&rep, a.genus)?;
            let cls = classify(&rep)?;
            let report = generic_prediction(&cls, a.genus)?;
            let audit = match rep.target {
                PresentationKind::UnitTangent(g) => {
                    let dims = cohomology_dims(&unit_tangent_presentation(g)?, &rep, twzeta_core::linalg::RANK_TOL)?;
                    Some(consistency_audit(&cls, a.genus, &dims)?)
                }
                PresentationKind::Surface(_) => None,
            };
            let pass = report.pass() && audit.as_ref().is_none_or(|x| x.pass);
            return Ok(Outcome { output: envelope("predict", json!({ "prediction": report, "audit": audit }))?, pass, wrote_out: false });
        }
    };
    let pass = report.pass();
    Ok(Outcome { output: envelope("predict", json!({ "prediction": report, "audit": Value::Null }))?, pass, wrote_out: false })
}

fn torsion(a: &TorsionArgs) -> Result<Outcome, CliError> {
    check_genus(a.genus)?;
    let rep = read_rep(&a.rep)?;
    genus_matches(&rep, a.genus)?;
    let value = match predictions::torsion(&rep, a.genus) {
        Ok(t) => TorsionValue::Value { re: t.re, im: t.im },
        Err(Error::NotAcyclic) => TorsionValue::NotAcyclic,
        Err(e) => return Err(e.into()),
    };
    ok("torsion", json!({ "genus": a.genus, "torsion": value, "source": predictions::source::TORSION }))
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    if a.suite != "core" {
        return Err(CliError::input(format!("--suite: unknown suite {:?}; available: core", a.suite)));
    }
    let report = suite::run_core();
    let pass = report.pass;
    Ok(Outcome { output: envelope("verify-paper", report)?, pass, wrote_out: false })
}

/// Parses arguments, runs the command and writes its output; returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let start = Instant::now();
    let result = config::install_threads(&cli).and_then(|_| run(&cli));
    match result {
        Ok(o) => {
            let written = match &cli.out {
                Some(path) if !o.wrote_out => {
                    fs::write(path, &o.output).map_err(|e| format!("--out {}: {e}", path.display()))
                }
                _ => {
                    print!("{}", o.output);
                    Ok(())
                }
            };
            eprintln!("elapsed {:.3} s", start.elapsed().as_secs_f64());
            match written {
                Err(msg) => {
                    eprintln!("error: {msg}");
                    2
                }
                Ok(()) if o.pass => 0,
                Ok(()) => {
                    eprintln!("verification failed");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
