//! Index and nullity reports assembled from the spectra and the exact forms.
//!
//! Per eigenvalue, the normal direction `fη` and the tangent direction
//! `dφ(grad f)` form a 2×2 block. When the cross term between them is known
//! and both diagonal entries are exact, the block is classified exactly and
//! its negative/null dimensions are what count. Otherwise only diagonal
//! entries with exact sign are counted. Lower-bound tangent values that are
//! negative are listed as uncertified and never counted.
//!
//! The sweep is extended past `lambda_max` until every polynomial governing
//! a sign (normal, tangent, vertical, block determinant) is certified
//! positive on the rest of the spectrum, so certified counts do not depend on
//! `lambda_max` once it clears the two thresholds.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadforms::{
    self, BlockClass, Certification, FormKind, GateReport, SubBundle,
};
use crate::rational::{self, int, serde_exact, Rational};
use crate::spectra::{self, Eigenvalue, ManifoldFamily};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenAttribution {
    #[serde(with = "serde_exact")]
    pub value: Rational,
    /// Number of independent sections at this eigenvalue (eigenspace
    /// multiplicity times the number of bundle directions).
    pub multiplicity: u128,
    #[serde(with = "serde_exact")]
    pub form: Rational,
    pub kind: FormKind,
    pub sign: Certification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubBundleContribution {
    pub subbundle: SubBundle,
    /// Sections with exact negative form, with multiplicity.
    pub negative_count: u128,
    /// Certified kernel directions of `I` inside this sub-bundle alone.
    pub null_count: u128,
    /// All listed forms are exact.
    pub certified: bool,
    pub eigen_attribution: Vec<EigenAttribution>,
    pub anchor: String,
}

/// One normal/tangent block at an eigenvalue, applied to each eigenfunction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockNote {
    #[serde(with = "serde_exact")]
    pub value: Rational,
    pub multiplicity: u128,
    #[serde(with = "serde_exact")]
    pub q_normal: Rational,
    #[serde(with = "serde_exact")]
    pub q_tangent: Rational,
    #[serde(with = "serde_exact")]
    pub cross: Rational,
    pub class: BlockClass,
    /// Block negative dimension minus the diagonal negative count, per
    /// eigenfunction.
    pub negative_adjustment: i32,
    /// Kernel dimension of the block, per eigenfunction.
    pub null_dim: u32,
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Note {
    pub anchor: String,
    pub text: String,
}

/// Split of the inclusion's nullity over its three invariant subspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TgiNullity {
    pub total: u64,
    /// Kernel of the normal/tangent gradient blocks: `2fη + dφ(grad f)` at `λ₁`.
    pub s1_gradient_blocks: u64,
    /// Killing fields.
    pub s2_divergence_free: u64,
    /// Constants and first eigenfunctions in each vertical direction.
    pub s3_vertical: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub family: ManifoldFamily,
    pub domain_dim: u32,
    #[serde(with = "serde_exact")]
    pub lambda_max: Rational,
    /// Where the sweep actually stopped (`≥ lambda_max`).
    #[serde(with = "serde_exact")]
    pub sweep_limit: Rational,
    #[serde(with = "serde_exact")]
    pub lambda1: Rational,
    pub index_exact: Option<u128>,
    pub index_lower_bound: u128,
    pub index_anchor: String,
    pub nullity_exact: Option<u128>,
    pub nullity_lower_bound: u128,
    pub nullity_anchor: String,
    pub nullity_split: Option<TgiNullity>,
    pub contributions: Vec<SubBundleContribution>,
    pub cross_block_notes: Vec<BlockNote>,
    pub gates: Option<GateReport>,
    pub conjecture: Option<String>,
    pub notes: Vec<Note>,
}

impl IndexReport {
    pub fn contribution(&self, b: SubBundle) -> &SubBundleContribution {
        self.contributions.iter().find(|c| c.subbundle == b).expect("all three sub-bundles present")
    }
}

pub const ANCHOR_NORMAL: &str = "normal form (λ²+4λ−4m²)∫f², negative iff λ < 2(√(m²+1)−1)";
pub const ANCHOR_TANGENT: &str =
    "tangent form λ·P_E(λ)∫f², P_E(λ) = λ²+2(m+2−2κ)λ+4κ²−4κm, exact where ∇dψ-term is known";
pub const ANCHOR_VERTICAL: &str = "vertical form: λ(λ−2m) per e_{m+i} (inclusion), λ²+4(l+2)λ on fξ (Clifford)";
pub const ANCHOR_BLOCK: &str = "span{fη, dφ(grad f)} block with cross term (I(fη), dφ(grad f))";
pub const ANCHOR_KILLING: &str = "Killing fields X give I(dφ(X)) = 0; nullity ≥ dim Isom(M)";
pub const ANCHOR_INSTABILITY: &str = "η is always a negative direction: every such map is unstable";
pub const ANCHOR_TGI_INDEX: &str = "inclusion S^m(1/√2) → S^{n+1} has index 1";
pub const ANCHOR_TGI_NULLITY: &str = "inclusion nullity (m+1)(m+2)/2 + (m+2)(n−m)";
pub const ANCHOR_VERONESE_INDEX: &str = "Veronese index ≥ 2m+3 from η, fη, dφ(grad f) at λ₁";
pub const ANCHOR_CLIFFORD_CONJECTURE: &str = "Clifford torus biharmonic map conjectured to have index 1";
pub const ANCHOR_IDENTITY_NULLITY: &str = "identity of S^n: nullity 6 if n = 2, n(n+1)/2 if n ≥ 3";

/// Closed-form nullity of the inclusion with its three-part split.
pub fn tgi_nullity(m: u32, n: u32) -> Result<TgiNullity> {
    if m < 1 || m > n {
        return Err(Error::InvalidArgument(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    let (m, n) = (u64::from(m), u64::from(n));
    let s1 = m + 1;
    let s2 = m * (m + 1) / 2;
    let s3 = (m + 2) * (n - m);
    Ok(TgiNullity { total: s1 + s2 + s3, s1_gradient_blocks: s1, s2_divergence_free: s2, s3_vertical: s3 })
}

/// Nullity of the identity map of the unit `S^n` as a biharmonic map.
pub fn identity_nullity(n: u32) -> Result<u64> {
    match n {
        0 | 1 => Err(Error::InvalidArgument(format!("identity nullity needs n >= 2, got {n}"))),
        2 => Ok(6),
        _ => Ok(u64::from(n) * (u64::from(n) + 1) / 2),
    }
}

/// Normal, tangent, vertical and block-determinant polynomials in `λ`, for
/// the tail certificate. Tangent and determinant only where they are exact
/// for all large `λ` or serve as lower bounds.
fn sign_polynomials(family: &ManifoldFamily) -> Result<Vec<Poly>> {
    let m = family.domain_dim();
    let mi = int(i128::from(m));
    let x = Poly::x();
    let normal = Poly::new(vec![int(-4) * mi * mi, int(4), int(1)]);
    let kappa = spectra::einstein_constant(family)?.kappa;
    let tangent = x.mul(&quadforms::tangent_polynomial(m, &kappa));
    let mut out = vec![normal.clone(), quadforms::tangent_polynomial(m, &kappa)];
    match *family {
        ManifoldFamily::TotallyGeodesicInclusion { m, n } => {
            // cross = −4λ(λ + 2 − 2m)
            let cross = x.mul(&Poly::new(vec![int(2) - int(2 * i128::from(m)), int(1)])).scale(&int(-4));
            out.push(normal.mul(&tangent).sub(&cross.mul(&cross)));
            if m < n {
                out.push(Poly::new(vec![int(-2 * i128::from(m)), int(1)]));
            }
        }
        ManifoldFamily::CliffordTorus { l } => {
            out.push(Poly::new(vec![int(4 * (i128::from(l) + 2)), int(1)]));
        }
        _ => {}
    }
    Ok(out)
}

fn vertical_directions(family: &ManifoldFamily) -> Option<u128> {
    match *family {
        ManifoldFamily::TotallyGeodesicInclusion { m, n } if m < n => Some(u128::from(n - m)),
        ManifoldFamily::CliffordTorus { .. } => Some(1),
        _ => None,
    }
}

fn attribution(e: &Eigenvalue, dirs: u128, f: &quadforms::FormValue) -> EigenAttribution {
    EigenAttribution {
        value: e.value,
        multiplicity: e.multiplicity * dirs,
        form: f.value,
        kind: f.kind,
        sign: f.certification(),
    }
}

fn contribution(subbundle: SubBundle, attr: Vec<EigenAttribution>, null_count: u128, anchor: &str) -> SubBundleContribution {
    SubBundleContribution {
        subbundle,
        negative_count: attr
            .iter()
            .filter(|a| a.sign == Certification::Negative)
            .map(|a| a.multiplicity)
            .sum(),
        null_count,
        certified: attr.iter().all(|a| a.kind == FormKind::Exact),
        eigen_attribution: attr,
        anchor: anchor.to_string(),
    }
}

/// Index/nullity report for one family.
pub fn classify(family: &ManifoldFamily, lambda_max: &Rational) -> Result<IndexReport> {
    family.validate()?;
    if let ManifoldFamily::IdentityMap { .. } = family {
        return Err(Error::Unsupported(
            "the identity map is harmonic; use identity_nullity for its closed-form nullity".into(),
        ));
    }
    if lambda_max.is_negative() {
        return Err(Error::InvalidArgument("lambda_max must be >= 0".into()));
    }
    let m = family.domain_dim();
    let requested = spectra::family_spectrum(family, lambda_max)?;
    if requested.len() < 3 {
        return Err(Error::TailNotCertified(format!(
            "lambda_max = {} covers {} distinct eigenvalue(s); at least 3 are needed",
            rational::format_rational(lambda_max),
            requested.len()
        )));
    }
    let threshold = quadforms::normal_threshold(m);
    if !threshold.le_rational(lambda_max) {
        return Err(Error::TailNotCertified(format!(
            "lambda_max = {} is below the normal threshold {threshold}",
            rational::format_rational(lambda_max)
        )));
    }
    let kappa = spectra::einstein_constant(family)?.kappa;
    if let Some((_, x2)) = quadforms::tangent_roots(m, &kappa) {
        if !x2.le_rational(lambda_max) {
            return Err(Error::TailNotCertified(format!(
                "lambda_max = {} is below the tangent root x₂ = {x2}",
                rational::format_rational(lambda_max)
            )));
        }
    }

    let mut sweep_limit = *lambda_max;
    for p in sign_polynomials(family)? {
        let b = p.positive_beyond().ok_or(Error::Overflow("tail certificate"))?;
        if b > sweep_limit {
            sweep_limit = b;
        }
    }
    let spectrum = spectra::family_spectrum(family, &sweep_limit)?;
    let lambda1 = spectra::first_nonzero_eigenvalue(family)?.value;
    let vdirs = vertical_directions(family);
    let is_tgi = matches!(family, ManifoldFamily::TotallyGeodesicInclusion { .. });

    let mut normal_attr = Vec::new();
    let mut tangent_attr = Vec::new();
    let mut vertical_attr = Vec::new();
    let mut blocks = Vec::new();
    let mut vertical_null: u128 = 0;
    let mut notes = Vec::new();

    for e in &spectrum {
        let qn = quadforms::normal_form(m, &e.value)?;
        normal_attr.push(attribution(e, 1, &qn));

        if let Some(dirs) = vdirs {
            let qv = quadforms::vertical_form(family, &e.value)?;
            if qv.certification() == Certification::Null && is_tgi {
                // the vertical sub-bundle is invariant for the inclusion
                vertical_null += e.multiplicity * dirs;
            }
            vertical_attr.push(attribution(e, dirs, &qv));
        }

        if e.value.is_zero() {
            // grad of a constant vanishes
            continue;
        }
        let refine = matches!(family, ManifoldFamily::CliffordTorus { .. }) && e.value == lambda1;
        let qt = quadforms::tangent_form(family, &e.value, refine)?;
        tangent_attr.push(attribution(e, 1, &qt));
        if qt.certification() == Certification::Uncertified {
            notes.push(Note {
                anchor: ANCHOR_TANGENT.into(),
                text: format!(
                    "tangent lower bound {} at λ = {} is negative; {} direction(s) left uncertified",
                    rational::format_rational(&qt.value),
                    rational::format_rational(&e.value),
                    e.multiplicity
                ),
            });
        }

        if qt.kind == FormKind::Exact {
            if let Ok(cross) = quadforms::cross_term(family, &e.value) {
                let class = quadforms::block_definiteness(&qn.value, &qt.value, &cross);
                let diag_neg = [qn.certification(), qt.certification()]
                    .iter()
                    .filter(|c| **c == Certification::Negative)
                    .count() as i32;
                blocks.push(BlockNote {
                    value: e.value,
                    multiplicity: e.multiplicity,
                    q_normal: qn.value,
                    q_tangent: qt.value,
                    cross,
                    negative_adjustment: class.negative_dim() as i32 - diag_neg,
                    null_dim: class.null_dim(),
                    class,
                    anchor: ANCHOR_BLOCK.into(),
                });
            }
        }
    }

    let killing = u128::from(spectra::isometry_group_dim(family)?);
    let normal = contribution(SubBundle::Normal, normal_attr, 0, ANCHOR_NORMAL);
    let tangent = contribution(SubBundle::Tangent, tangent_attr, killing, ANCHOR_TANGENT);
    let vertical = contribution(SubBundle::Vertical, vertical_attr, vertical_null, ANCHOR_VERTICAL);

    let diag: u128 = normal.negative_count + tangent.negative_count + vertical.negative_count;
    let adjust: i128 = blocks.iter().map(|b| i128::from(b.negative_adjustment) * b.multiplicity as i128).sum();
    let index = u128::try_from(diag as i128 + adjust).map_err(|_| Error::Overflow("index"))?;
    let block_null: u128 = blocks.iter().map(|b| u128::from(b.null_dim) * b.multiplicity).sum();
    let nullity = normal.null_count + tangent.null_count + vertical.null_count + block_null;

    let mut conjecture = None;
    let mut index_anchor = ANCHOR_INSTABILITY.to_string();
    let mut nullity_anchor = ANCHOR_KILLING.to_string();
    let mut nullity_split = None;
    let (index_exact, nullity_exact) = match *family {
        ManifoldFamily::TotallyGeodesicInclusion { .. } => {
            index_anchor = ANCHOR_TGI_INDEX.into();
            nullity_anchor = ANCHOR_TGI_NULLITY.into();
            nullity_split = Some(TgiNullity {
                total: nullity as u64,
                s1_gradient_blocks: block_null as u64,
                s2_divergence_free: killing as u64,
                s3_vertical: vertical_null as u64,
            });
            (Some(index), Some(nullity))
        }
        ManifoldFamily::Veronese { m } => {
            index_anchor = ANCHOR_VERONESE_INDEX.into();
            if m <= 4 {
                notes.push(Note {
                    anchor: ANCHOR_VERONESE_INDEX.into(),
                    text: format!(
                        "warning: for m = {m} the first-eigenvalue tangent form is non-negative \
                         (λ₁ ≥ x₂), so the λ₁ block is indefinite and the computed bound is m+2 = {}, \
                         not the unconditional 2m+3 = {}",
                        m + 2,
                        2 * m + 3
                    ),
                });
            }
            (None, None)
        }
        ManifoldFamily::CliffordTorus { .. } => {
            conjecture = Some("index 1".to_string());
            notes.push(Note {
                anchor: ANCHOR_CLIFFORD_CONJECTURE.into(),
                text: "only gradient tangent fields and fξ vertical fields are analysed; the bound is not asserted to be sharp".into(),
            });
            (None, None)
        }
        _ => (None, None),
    };

    let gates = if m >= 2 { Some(quadforms::gates(m, &kappa, &lambda1)?) } else { None };

    Ok(IndexReport {
        family: *family,
        domain_dim: m,
        lambda_max: *lambda_max,
        sweep_limit,
        lambda1,
        index_exact,
        index_lower_bound: index,
        index_anchor,
        nullity_exact,
        nullity_lower_bound: nullity,
        nullity_anchor,
        nullity_split,
        contributions: vec![normal, tangent, vertical],
        cross_block_notes: blocks,
        gates,
        conjecture,
        notes,
    })
}

/// A `lambda_max` that clears both thresholds and three eigenvalues.
pub fn default_lambda_max(family: &ManifoldFamily) -> Result<Rational> {
    family.validate()?;
    let m = family.domain_dim();
    let kappa = spectra::einstein_constant(family)?.kappa;
    let mut target = int(0);
    let t = quadforms::normal_threshold(m);
    let roots = quadforms::tangent_roots(m, &kappa);
    let mut k = int(1);
    loop {
        let spec = spectra::family_spectrum(family, &target)?;
        let ok = spec.len() >= 3
            && t.le_rational(&target)
            && roots.as_ref().is_none_or(|(_, x2)| x2.le_rational(&target));
        if ok {
            return Ok(target);
        }
        target += k;
        k *= int(2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use ManifoldFamily::*;

    fn report(f: ManifoldFamily) -> IndexReport {
        classify(&f, &default_lambda_max(&f).unwrap()).unwrap()
    }

    #[test]
    fn tgi_example() {
        let r = report(TotallyGeodesicInclusion { m: 2, n: 3 });
        assert_eq!(r.index_exact, Some(1));
        assert_eq!(r.nullity_exact, Some(10));
        let s = r.nullity_split.unwrap();
        assert_eq!((s.s1_gradient_blocks, s.s2_divergence_free, s.s3_vertical), (3, 3, 4));
    }

    #[test]
    fn veronese_examples() {
        assert_eq!(report(Veronese { m: 5 }).index_lower_bound, 13);
        for m in 2..=4 {
            let r = report(Veronese { m });
            assert_eq!(r.index_lower_bound, u128::from(m) + 2);
            assert!(r.notes.iter().any(|n| n.text.starts_with("warning")));
        }
        assert_eq!(report(Veronese { m: 5 }).nullity_lower_bound, 15);
    }

    #[test]
    fn projective_and_clifford() {
        assert_eq!(report(VeroneseProjective { m: 3 }).index_lower_bound, 1);
        let r = report(CliffordTorus { l: 3 });
        assert_eq!(r.index_lower_bound, 1);
        assert_eq!(r.conjecture.as_deref(), Some("index 1"));
        assert_eq!(r.nullity_lower_bound, 12);
        assert_eq!(r.index_exact, None);
    }

    #[test]
    fn rejects_short_sweeps() {
        let f = Veronese { m: 5 };
        assert!(matches!(classify(&f, &frac(25, 6)), Err(Error::TailNotCertified(_))));
        assert!(classify(&IdentityMap { n: 3 }, &int(100)).is_err());
        // three eigenvalues but below 2(√(m²+1) − 1) ≈ 58.02 for m = 30
        let f = CliffordTorus { l: 15 };
        assert!(matches!(classify(&f, &int(58)), Err(Error::TailNotCertified(_))));
    }

    #[test]
    fn tgi_nullity_examples() {
        let s = tgi_nullity(2, 3).unwrap();
        assert_eq!((s.total, s.s1_gradient_blocks, s.s2_divergence_free, s.s3_vertical), (10, 3, 3, 4));
        let s = tgi_nullity(4, 4).unwrap();
        assert_eq!((s.total, s.s3_vertical), (15, 0));
        let s = tgi_nullity(3, 7).unwrap();
        assert_eq!((s.s1_gradient_blocks, s.s2_divergence_free, s.s3_vertical, s.total), (4, 6, 20, 30));
        assert!(tgi_nullity(3, 2).is_err());
    }

    #[test]
    fn identity_nullity_examples() {
        assert_eq!(identity_nullity(2).unwrap(), 6);
        assert_eq!(identity_nullity(3).unwrap(), 6);
        assert_eq!(identity_nullity(5).unwrap(), 15);
        assert!(identity_nullity(1).is_err());
    }

    #[test]
    fn sweep_is_monotone_in_lambda_max() {
        for f in [
            TotallyGeodesicInclusion { m: 3, n: 5 },
            Veronese { m: 6 },
            VeroneseProjective { m: 4 },
            CliffordTorus { l: 5 },
        ] {
            let base = default_lambda_max(&f).unwrap();
            let a = classify(&f, &base).unwrap();
            let b = classify(&f, &(base * int(3) + int(17))).unwrap();
            assert_eq!(a.index_lower_bound, b.index_lower_bound);
            assert_eq!(a.index_exact, b.index_exact);
            assert_eq!(a.nullity_lower_bound, b.nullity_lower_bound);
            for s in [SubBundle::Normal, SubBundle::Tangent, SubBundle::Vertical] {
                assert_eq!(a.contribution(s).negative_count, b.contribution(s).negative_count);
                assert_eq!(a.contribution(s).null_count, b.contribution(s).null_count);
            }
        }
    }
}
