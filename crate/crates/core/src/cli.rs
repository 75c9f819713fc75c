//! Command-line front end: argument parsing, validation and dispatch.
//!
//! Exit status: 0 on success, 2 on invalid input (bad flags, violated
//! preconditions, a sweep too short to certify), 3 when `verify` or
//! `report` has a failing check, 1 for anything else.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::acceptance::{self, AcceptanceOptions};
use crate::classifier::{self, ANCHOR_IDENTITY_NULLITY};
use crate::error::Error;
use crate::oracle::{self, GeometryCase, OracleError, VerifyOptions};
use crate::rational::{parse_rational, Rational};
use crate::report::{
    self, AcceptanceDocument, ClassifyDocument, Format, IdentityNullity, QuadformDocument, SpectrumDocument,
};
use crate::spectra::ManifoldFamily;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Default output directory when `--out-dir` is not given.
pub const OUTPUT_DIR_ENV: &str = "BIHARM_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "biharm", version, about = "Index and nullity of biharmonic maps into spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Tgi,
    Veronese,
    VeroneseProjective,
    Clifford,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Circle,
    Torus,
    Sphere,
    Veronese,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Domain dimension (tgi, veronese, veronese-projective).
    #[arg(long)]
    pub m: Option<u32>,
    /// Target dimension (tgi) or sphere dimension (identity).
    #[arg(long)]
    pub n: Option<u32>,
    /// Factor dimension of the Clifford torus S^l × S^l.
    #[arg(long)]
    pub l: Option<u32>,
}

#[derive(Debug, clap::Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
    /// Write the document into this directory instead of stdout.
    #[arg(long, env = OUTPUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distinct eigenvalues with multiplicities up to --lambda-max.
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        /// Upper end of the listing, as "p/q" or an integer.
        #[arg(long, value_parser = rational_arg)]
        lambda_max: Rational,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact normal, tangent and vertical forms per eigenvalue.
    Quadform {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = rational_arg)]
        lambda_max: Rational,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Index and nullity report.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
        /// Defaults to the smallest value that certifies the tail.
        #[arg(long, value_parser = rational_arg)]
        lambda_max: Option<Rational>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numerical checks of the exact forms on an explicit geometry.
    Verify {
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Target dimension for the circle and sphere inclusions.
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Grid points per axis (circle, torus) or longitude nodes (sphere cases).
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replaces every check's tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Random fields for the identity and symmetry checks.
        #[arg(long, default_value_t = 100)]
        fields: usize,
        /// Skip the doubled-grid refinement checks.
        #[arg(long)]
        no_refine: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs the full acceptance suite.
    Report {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Overflow(_) => EXIT_OTHER,
            _ => EXIT_VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::Resolution(_) | OracleError::Aliasing { .. } | OracleError::Unsupported(_) => EXIT_VALIDATION,
            OracleError::Exact(ref inner) => Failure::from(inner.clone()).code,
            OracleError::Constraint { .. } => EXIT_OTHER,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(msg: String) -> Failure {
    Failure { code: EXIT_VALIDATION, message: msg }
}

impl FamilyArgs {
    pub fn family(&self) -> Result<ManifoldFamily, Failure> {
        let need = |v: Option<u32>, flag: &str| {
            v.ok_or_else(|| invalid(format!("--family {} requires --{flag}", self.family_name())))
        };
        let forbid = |v: Option<u32>, flag: &str| match v {
            Some(_) => Err(invalid(format!("--family {} does not take --{flag}", self.family_name()))),
            None => Ok(()),
        };
        let f = match self.family {
            FamilyArg::Tgi => {
                forbid(self.l, "l")?;
                ManifoldFamily::TotallyGeodesicInclusion { m: need(self.m, "m")?, n: need(self.n, "n")? }
            }
            FamilyArg::Veronese | FamilyArg::VeroneseProjective => {
                forbid(self.n, "n")?;
                forbid(self.l, "l")?;
                let m = need(self.m, "m")?;
                if self.family == FamilyArg::Veronese {
                    ManifoldFamily::Veronese { m }
                } else {
                    ManifoldFamily::VeroneseProjective { m }
                }
            }
            FamilyArg::Clifford => {
                forbid(self.m, "m")?;
                forbid(self.n, "n")?;
                ManifoldFamily::CliffordTorus { l: need(self.l, "l")? }
            }
            FamilyArg::Identity => {
                forbid(self.m, "m")?;
                forbid(self.l, "l")?;
                ManifoldFamily::IdentityMap { n: need(self.n, "n")? }
            }
        };
        f.validate()?;
        Ok(f)
    }

    fn family_name(&self) -> &'static str {
        match self.family {
            FamilyArg::Tgi => "tgi",
            FamilyArg::Veronese => "veronese",
            FamilyArg::VeroneseProjective => "veronese-projective",
            FamilyArg::Clifford => "clifford",
            FamilyArg::Identity => "identity",
        }
    }
}

fn family_slug(f: &ManifoldFamily) -> String {
    match *f {
        ManifoldFamily::TotallyGeodesicInclusion { m, n } => format!("tgi-m{m}-n{n}"),
        ManifoldFamily::Veronese { m } => format!("veronese-m{m}"),
        ManifoldFamily::VeroneseProjective { m } => format!("veronese-projective-m{m}"),
        ManifoldFamily::CliffordTorus { l } => format!("clifford-l{l}"),
        ManifoldFamily::IdentityMap { n } => format!("identity-n{n}"),
    }
}

/// Rendered document, the file stem used with `--out-dir`, and whether a
/// check failed.
struct Output {
    body: String,
    stem: String,
    failed: bool,
}

pub fn classify_document(family: &ManifoldFamily, lambda_max: Option<Rational>) -> Result<ClassifyDocument, Error> {
    if let ManifoldFamily::IdentityMap { n } = *family {
        return Ok(ClassifyDocument {
            schema_version: report::SCHEMA_VERSION,
            report: None,
            identity: Some(IdentityNullity {
                n,
                nullity_exact: classifier::identity_nullity(n)?,
                anchor: ANCHOR_IDENTITY_NULLITY.into(),
            }),
        });
    }
    let lambda_max = match lambda_max {
        Some(l) => l,
        None => classifier::default_lambda_max(family)?,
    };
    Ok(ClassifyDocument {
        schema_version: report::SCHEMA_VERSION,
        report: Some(classifier::classify(family, &lambda_max)?),
        identity: None,
    })
}

fn execute(command: &Command) -> Result<(Output, &OutputArgs), Failure> {
    match command {
        Command::Spectrum { family, lambda_max, output } => {
            let f = family.family()?;
            let doc = SpectrumDocument::build(&f, lambda_max)?;
            let body = report::render_spectrum(&doc, output.format.into());
            Ok((Output { body, stem: format!("spectrum-{}", family_slug(&f)), failed: false }, output))
        }
        Command::Quadform { family, lambda_max, output } => {
            let f = family.family()?;
            let doc = QuadformDocument::build(&f, lambda_max)?;
            let body = report::render_quadform(&doc, output.format.into());
            Ok((Output { body, stem: format!("quadform-{}", family_slug(&f)), failed: false }, output))
        }
        Command::Classify { family, lambda_max, output } => {
            let f = family.family()?;
            let doc = classify_document(&f, *lambda_max)?;
            let body = report::render_classify(&doc, output.format.into())?;
            Ok((Output { body, stem: format!("classify-{}", family_slug(&f)), failed: false }, output))
        }
        Command::Verify { case, n, grid, seed, tolerance, fields, no_refine, output } => {
            if let Some(t) = tolerance {
                if !(t.is_finite() && *t >= 0.0) {
                    return Err(invalid(format!("--tolerance must be a finite number >= 0, got {t}")));
                }
            }
            let case = match case {
                CaseArg::Circle => GeometryCase::CircleInclusion { n: *n },
                CaseArg::Torus => GeometryCase::TorusClifford,
                CaseArg::Sphere => GeometryCase::SphereInclusion { n: *n },
                CaseArg::Veronese => GeometryCase::VeroneseSurface,
            };
            let opts =
                VerifyOptions { grid: *grid, seed: *seed, tolerance: *tolerance, random_fields: *fields, refine: !no_refine };
            let doc = oracle::verify(case, &opts)?;
            let body = report::render_verify(&doc, output.format.into());
            Ok((Output { body, stem: format!("verify-{}-grid{grid}-seed{seed}", case.slug()), failed: !doc.pass }, output))
        }
        Command::Report { seed, output } => {
            let options = AcceptanceOptions { seed: *seed, ..AcceptanceOptions::default() };
            let criteria = acceptance::run_all(&options);
            let pass = criteria.iter().all(|c| c.pass);
            let doc = AcceptanceDocument { schema_version: report::SCHEMA_VERSION, options, criteria, pass };
            let body = report::render_acceptance(&doc, output.format.into());
            Ok((Output { body, stem: format!("report-seed{seed}"), failed: !pass }, output))
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing the
/// document to `out` (or the output directory) and diagnostics to `err`.
/// Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_VALIDATION;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let (output, args) = match execute(&cli.command) {
        Ok(r) => r,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    if let Some(dir) = &args.out_dir {
        let path = dir.join(format!("{}.{}", output.stem, Format::from(args.format).extension()));
        let written = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, &output.body));
        if let Err(e) = written {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_OTHER;
        }
        let _ = writeln!(err, "wrote {}", path.display());
    } else if out.write_all(output.body.as_bytes()).is_err() {
        return EXIT_OTHER;
    }
    if output.failed {
        let _ = writeln!(err, "error: one or more checks failed");
        return EXIT_CHECK_FAILED;
    }
    EXIT_OK
}
