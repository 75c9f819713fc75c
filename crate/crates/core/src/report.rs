//! Versioned documents emitted by the command-line front end, and their
//! text, JSON and CSV renderings.
//!
//! CSV columns:
//!
//! | document | columns |
//! |----------|---------|
//! | spectrum | `value_num,value_den,level,multiplicity` |
//! | quadform | `value_num,value_den,multiplicity,normal_num,normal_den,tangent_num,tangent_den,tangent_kind,vertical_num,vertical_den,cross_num,cross_den,block` |
//! | verify   | `name,anchor,computed,expected,error,metric,tolerance,pass` |
//! | report   | `id,title,pass,detail` |
//!
//! Empty cells mean "no formula at this eigenvalue".

use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::acceptance::{AcceptanceOptions, CriterionOutcome};
use crate::classifier::IndexReport;
use crate::error::{Error, Result};
use crate::oracle::VerificationReport;
use crate::quadforms::{self, BlockClass, FormKind, FormValue};
use crate::rational::{format_rational, serde_exact, Rational};
use crate::spectra::{self, Eigenvalue, ManifoldFamily};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub schema_version: u32,
    pub family: ManifoldFamily,
    #[serde(with = "serde_exact")]
    pub lambda_max: Rational,
    pub eigenvalues: Vec<Eigenvalue>,
}

impl SpectrumDocument {
    pub fn build(family: &ManifoldFamily, lambda_max: &Rational) -> Result<Self> {
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            family: *family,
            lambda_max: *lambda_max,
            eigenvalues: spectra::family_spectrum(family, lambda_max)?,
        })
    }
}

/// All closed-form values available at one eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadformRow {
    #[serde(with = "serde_exact")]
    pub value: Rational,
    pub multiplicity: u128,
    pub normal: FormValue,
    pub tangent: Option<FormValue>,
    pub vertical: Option<FormValue>,
    #[serde(with = "crate::rational::serde_exact_opt")]
    pub cross: Option<Rational>,
    pub block: Option<BlockClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadformDocument {
    pub schema_version: u32,
    pub family: ManifoldFamily,
    #[serde(with = "serde_exact")]
    pub lambda_max: Rational,
    pub rows: Vec<QuadformRow>,
}

impl QuadformDocument {
    /// Forms at every eigenvalue up to `lambda_max`. The Clifford tangent
    /// form is refined at `λ₁`.
    pub fn build(family: &ManifoldFamily, lambda_max: &Rational) -> Result<Self> {
        let spectrum = spectra::family_spectrum(family, lambda_max)?;
        let m = family.domain_dim();
        let lambda1 = spectra::first_nonzero_eigenvalue(family)?.value;
        let mut rows = Vec::new();
        for e in spectrum {
            let normal = quadforms::normal_form(m, &e.value)?;
            let refine = matches!(family, ManifoldFamily::CliffordTorus { .. }) && e.value == lambda1;
            let vertical = supported(quadforms::vertical_form(family, &e.value))?;
            // grad of a constant vanishes: no tangent direction at λ = 0
            let (tangent, cross) = if e.value.is_zero() {
                (None, None)
            } else {
                (
                    supported(quadforms::tangent_form(family, &e.value, refine))?,
                    supported(quadforms::cross_term(family, &e.value))?,
                )
            };
            let block = match (&tangent, &cross) {
                (Some(t), Some(c)) if t.kind == FormKind::Exact => {
                    Some(quadforms::block_definiteness(&normal.value, &t.value, c))
                }
                _ => None,
            };
            rows.push(QuadformRow { value: e.value, multiplicity: e.multiplicity, normal, tangent, vertical, cross, block });
        }
        Ok(Self { schema_version: SCHEMA_VERSION, family: *family, lambda_max: *lambda_max, rows })
    }
}

fn supported<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Unsupported(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityNullity {
    pub n: u32,
    pub nullity_exact: u64,
    pub anchor: String,
}

/// Output of `classify`: an index report, or the closed-form nullity for
/// the identity map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyDocument {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<IndexReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<IdentityNullity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceDocument {
    pub schema_version: u32,
    pub options: AcceptanceOptions,
    pub criteria: Vec<CriterionOutcome>,
    pub pass: bool,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn num_den(q: Option<&Rational>) -> [String; 2] {
    match q {
        Some(q) => [q.numer().to_string(), q.denom().to_string()],
        None => [String::new(), String::new()],
    }
}

fn kind_str(k: FormKind) -> &'static str {
    match k {
        FormKind::Exact => "exact",
        FormKind::LowerBound => "lower_bound",
    }
}

fn block_str(b: &BlockClass) -> String {
    match b {
        BlockClass::PositiveDefinite => "positive_definite".into(),
        BlockClass::PositiveSemidefiniteWithKernel { direction: (a, b) } => format!("positive_semidefinite kernel ({a},{b})"),
        BlockClass::NegativeDefinite => "negative_definite".into(),
        BlockClass::NegativeSemidefiniteWithKernel { direction: (a, b) } => format!("negative_semidefinite kernel ({a},{b})"),
        BlockClass::Indefinite => "indefinite".into(),
        BlockClass::Zero => "zero".into(),
    }
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut l = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                l.push_str(c);
            } else {
                let _ = write!(l, "{c}{}  ", " ".repeat(w - c.chars().count()));
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for r in rows {
        line(r.iter().map(|s| s.as_str()).collect());
    }
    out
}

pub fn render_spectrum(doc: &SpectrumDocument, format: Format) -> String {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut rows = vec![vec!["value_num".into(), "value_den".into(), "level".into(), "multiplicity".into()]];
            for e in &doc.eigenvalues {
                let [n, d] = num_den(Some(&e.value));
                rows.push(vec![n, d, e.level.to_string(), e.multiplicity.to_string()]);
            }
            csv_string(rows)
        }
        Format::Text => {
            let rows: Vec<Vec<String>> = doc
                .eigenvalues
                .iter()
                .map(|e| vec![format_rational(&e.value), e.level.to_string(), e.multiplicity.to_string()])
                .collect();
            format!(
                "spectrum of {} up to λ = {}\n{}",
                doc.family,
                format_rational(&doc.lambda_max),
                table(&["value", "level", "multiplicity"], &rows)
            )
        }
    }
}

pub fn render_quadform(doc: &QuadformDocument, format: Format) -> String {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let header = "value_num,value_den,multiplicity,normal_num,normal_den,tangent_num,tangent_den,tangent_kind,\
                          vertical_num,vertical_den,cross_num,cross_den,block";
            let mut rows = vec![header.split(',').map(String::from).collect::<Vec<_>>()];
            for r in &doc.rows {
                let mut row = Vec::new();
                row.extend(num_den(Some(&r.value)));
                row.push(r.multiplicity.to_string());
                row.extend(num_den(Some(&r.normal.value)));
                row.extend(num_den(r.tangent.as_ref().map(|t| &t.value)));
                row.push(r.tangent.as_ref().map(|t| kind_str(t.kind).to_string()).unwrap_or_default());
                row.extend(num_den(r.vertical.as_ref().map(|v| &v.value)));
                row.extend(num_den(r.cross.as_ref()));
                row.push(r.block.as_ref().map(block_str).unwrap_or_default());
                rows.push(row);
            }
            csv_string(rows)
        }
        Format::Text => {
            let opt = |q: Option<&Rational>| q.map(format_rational).unwrap_or_else(|| "-".into());
            let rows: Vec<Vec<String>> = doc
                .rows
                .iter()
                .map(|r| {
                    vec![
                        format_rational(&r.value),
                        r.multiplicity.to_string(),
                        format_rational(&r.normal.value),
                        match &r.tangent {
                            Some(t) if t.kind == FormKind::LowerBound => format!("≥ {}", format_rational(&t.value)),
                            t => opt(t.as_ref().map(|t| &t.value)),
                        },
                        opt(r.vertical.as_ref().map(|v| &v.value)),
                        opt(r.cross.as_ref()),
                        r.block.as_ref().map(block_str).unwrap_or_else(|| "-".into()),
                    ]
                })
                .collect();
            format!(
                "quadratic forms of {} per unit ∫f², up to λ = {}\n{}",
                doc.family,
                format_rational(&doc.lambda_max),
                table(&["λ", "mult", "normal", "tangent", "vertical", "cross", "block"], &rows)
            )
        }
    }
}

fn classify_text(r: &IndexReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "family: {} (m = {})", r.family, r.domain_dim);
    let _ = writeln!(
        s,
        "λ₁ = {}, lambda_max = {}, swept to {}",
        format_rational(&r.lambda1),
        format_rational(&r.lambda_max),
        format_rational(&r.sweep_limit)
    );
    let exact = |v: Option<u128>| v.map(|x| x.to_string()).unwrap_or_else(|| "unknown".into());
    let _ = writeln!(s, "index: exact {}, lower bound {} [{}]", exact(r.index_exact), r.index_lower_bound, r.index_anchor);
    let _ = writeln!(
        s,
        "nullity: exact {}, lower bound {} [{}]",
        exact(r.nullity_exact),
        r.nullity_lower_bound,
        r.nullity_anchor
    );
    if let Some(t) = &r.nullity_split {
        let _ = writeln!(
            s,
            "nullity split: {} gradient blocks + {} divergence-free + {} vertical",
            t.s1_gradient_blocks, t.s2_divergence_free, t.s3_vertical
        );
    }
    let rows: Vec<Vec<String>> = r
        .contributions
        .iter()
        .map(|c| {
            vec![
                format!("{:?}", c.subbundle).to_lowercase(),
                c.negative_count.to_string(),
                c.null_count.to_string(),
                c.certified.to_string(),
            ]
        })
        .collect();
    s.push_str(&table(&["sub-bundle", "negative", "null", "certified"], &rows));
    for b in &r.cross_block_notes {
        let _ = writeln!(
            s,
            "block at λ = {} (×{}): [[{}, {}], [{}, {}]] {}",
            format_rational(&b.value),
            b.multiplicity,
            format_rational(&b.q_normal),
            format_rational(&b.cross),
            format_rational(&b.cross),
            format_rational(&b.q_tangent),
            block_str(&b.class)
        );
    }
    if let Some(g) = &r.gates {
        let _ = writeln!(
            s,
            "gates: lichnerowicz {}, einstein {}, lambda1 {}, identity stable {}",
            g.lichnerowicz_pass, g.einstein_pass, g.lambda1_pass, g.identity_stable
        );
    }
    if let Some(c) = &r.conjecture {
        let _ = writeln!(s, "conjecture: {c}");
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {} [{}]", n.text, n.anchor);
    }
    s
}

pub fn render_classify(doc: &ClassifyDocument, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(doc)),
        Format::Csv => Err(Error::InvalidArgument("classify has no CSV form; use text or json".into())),
        Format::Text => {
            let mut s = String::new();
            if let Some(r) = &doc.report {
                s.push_str(&classify_text(r));
            }
            if let Some(i) = &doc.identity {
                let _ = writeln!(s, "identity of S^{}: nullity {} [{}]", i.n, i.nullity_exact, i.anchor);
            }
            Ok(s)
        }
    }
}

pub fn render_verify(doc: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut rows = vec!["name,anchor,computed,expected,error,metric,tolerance,pass"
                .split(',')
                .map(String::from)
                .collect::<Vec<_>>()];
            for c in &doc.checks {
                rows.push(vec![
                    c.name.clone(),
                    c.anchor.clone(),
                    format!("{:e}", c.computed),
                    format!("{:e}", c.expected),
                    format!("{:e}", c.error),
                    c.metric.clone(),
                    format!("{:e}", c.tolerance),
                    c.pass.to_string(),
                ]);
            }
            csv_string(rows)
        }
        Format::Text => {
            let mut s = format!("verify {} on a {} grid, seed {}\n", doc.case.slug(), doc.grid, doc.seed);
            for c in &doc.checks {
                let _ = writeln!(
                    s,
                    "{} {}: computed {:.12e}, expected {:.12e}, {} error {:.2e} (tol {:.0e})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.computed,
                    c.expected,
                    c.metric,
                    c.error,
                    c.tolerance
                );
            }
            let failed = doc.failures().count();
            let _ = writeln!(s, "{} of {} checks pass", doc.checks.len() - failed, doc.checks.len());
            s
        }
    }
}

pub fn render_acceptance(doc: &AcceptanceDocument, format: Format) -> String {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut rows = vec![vec!["id".into(), "title".into(), "pass".into(), "detail".into()]];
            for c in &doc.criteria {
                rows.push(vec![c.id.to_string(), c.title.clone(), c.pass.to_string(), c.detail.clone()]);
            }
            csv_string(rows)
        }
        Format::Text => {
            let mut s: String = doc.criteria.iter().map(|c| c.line() + "\n").collect();
            let passed = doc.criteria.iter().filter(|c| c.pass).count();
            let _ = writeln!(s, "{passed} of {} criteria pass", doc.criteria.len());
            s
        }
    }
}
