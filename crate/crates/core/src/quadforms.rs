//! Closed-form values of the second-variation quadratic form on the three
//! sub-bundles of `φ⁻¹TS^{n+1}`, the normal/tangent cross term, exact 2×2
//! block classification, and the curvature/eigenvalue gates.
//!
//! Every value is normalised per unit `∫f²`, where `f` is the eigenfunction
//! generating the section (`fη`, `dφ(grad f)`, `fξ` or `f·e_{m+i}`). Tangent
//! values therefore carry the factor `λ` coming from `∫|grad f|² = λ∫f²`.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{frac, int, serde_exact, Rational};
use crate::spectra::{self, ManifoldFamily};
use crate::surd::QuadraticSurd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubBundle {
    Normal,
    Tangent,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    Exact,
    /// The non-negative term `4|tr ∇dψ(∇.X, .)|²` was dropped.
    LowerBound,
}

/// What a form value certifies about a direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    Negative,
    /// Exactly zero: a candidate kernel direction.
    Null,
    Positive,
    /// Lower bound equal to zero.
    NonNegative,
    /// Negative lower bound; says nothing.
    Uncertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormValue {
    #[serde(with = "serde_exact")]
    pub value: Rational,
    pub kind: FormKind,
    pub subbundle: SubBundle,
}

impl FormValue {
    fn exact(value: Rational, subbundle: SubBundle) -> Self {
        Self { value, kind: FormKind::Exact, subbundle }
    }

    pub fn certification(&self) -> Certification {
        match (self.kind, self.value.cmp(&Rational::zero())) {
            (FormKind::Exact, Ordering::Less) => Certification::Negative,
            (FormKind::Exact, Ordering::Equal) => Certification::Null,
            (_, Ordering::Greater) => Certification::Positive,
            (FormKind::LowerBound, Ordering::Equal) => Certification::NonNegative,
            (FormKind::LowerBound, Ordering::Less) => Certification::Uncertified,
        }
    }
}

fn check_lambda(lambda: &Rational) -> Result<()> {
    if lambda.is_negative() {
        return Err(Error::InvalidArgument("eigenvalue must be >= 0".into()));
    }
    Ok(())
}

fn check_m(m: u32) -> Result<i128> {
    if m < 1 {
        return Err(Error::InvalidArgument("domain dimension must be >= 1".into()));
    }
    Ok(i128::from(m))
}

/// `λ² + 4λ − 4m²`: the form on `fη` with `Δf = λf`.
pub fn normal_form(m: u32, lambda: &Rational) -> Result<FormValue> {
    let m = check_m(m)?;
    check_lambda(lambda)?;
    let l = *lambda;
    Ok(FormValue::exact(l * l + int(4) * l - int(4 * m * m), SubBundle::Normal))
}

/// `(λ+2)² < 4(m²+1)`, i.e. `λ ∈ [0, 2(√(m²+1) − 1))`.
pub fn normal_negative(m: u32, lambda: &Rational) -> Result<bool> {
    let m = check_m(m)?;
    check_lambda(lambda)?;
    let s = lambda + int(2);
    Ok(s * s < int(4 * (m * m + 1)))
}

/// `2(√(m²+1) − 1)`, the end of the negative window of the normal form.
pub fn normal_threshold(m: u32) -> QuadraticSurd {
    let m = i128::from(m);
    QuadraticSurd { a: int(-2), b: int(2), d: int(m * m + 1) }
}

/// `P_E(λ) = λ² + 2(m+2−2κ)λ + 4κ² − 4κm` for an Einstein domain `Ric = κg`.
pub fn tangent_polynomial(m: u32, kappa: &Rational) -> Poly {
    let m = int(i128::from(m));
    let k = *kappa;
    Poly::new(vec![int(4) * k * k - int(4) * k * m, int(2) * (m + int(2) - int(2) * k), Rational::one()])
}

/// Roots of `P_E` as surds, smaller first; `None` when they are complex
/// (exactly when `κ > (m+2)²/8`).
pub fn tangent_roots(m: u32, kappa: &Rational) -> Option<(QuadraticSurd, QuadraticSurd)> {
    let mm = int(i128::from(m));
    let disc = (mm + int(2)) * (mm + int(2)) - int(8) * kappa;
    if disc.is_negative() {
        return None;
    }
    let a = -(mm + int(2) - int(2) * kappa);
    Some((
        QuadraticSurd { a, b: int(-1), d: disc },
        QuadraticSurd { a, b: int(1), d: disc },
    ))
}

/// `(x₁, x₂) = (m²−5m−2)/(m+1) ∓ √((m³−3m²+16m+4)/(m+1))`, the roots of the
/// Veronese tangent polynomial.
pub fn veronese_tangent_roots(m: u32) -> Result<(QuadraticSurd, QuadraticSurd)> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("Veronese needs m >= 2, got {m}")));
    }
    let m = i128::from(m);
    let a = frac(m * m - 5 * m - 2, m + 1);
    let d = frac(m * m * m - 3 * m * m + 16 * m + 4, m + 1);
    Ok((QuadraticSurd::new(a, int(-1), d)?, QuadraticSurd::new(a, int(1), d)?))
}

/// Tangent form on `dφ(grad f)`, `Δf = λf`: `λ·P_E(λ)`, exact where the
/// dropped Hessian term is known.
///
/// Exact cases: the inclusion (`∇dψ = 0`), Veronese at `λ₁` (first
/// eigenfunctions have `∇ grad f = −(m/(m+1)) f Id`, and harmonicity of `ψ`
/// kills the trace), the Clifford torus at `λ₁` when `refine_lambda1` is set
/// (the dropped term equals `32m²f²`), and `λ = 0` where the field vanishes.
pub fn tangent_form(family: &ManifoldFamily, lambda: &Rational, refine_lambda1: bool) -> Result<FormValue> {
    if let ManifoldFamily::IdentityMap { .. } = family {
        return Err(Error::Unsupported("tangent form of the identity map".into()));
    }
    check_lambda(lambda)?;
    spectra::require_eigenvalue(family, lambda)?;
    let lambda1 = spectra::first_nonzero_eigenvalue(family)?.value;
    if refine_lambda1 && *lambda != lambda1 {
        return Err(Error::InvalidArgument(format!(
            "refinement only applies at the first eigenvalue {lambda1}, got {lambda}"
        )));
    }
    let m = family.domain_dim();
    let kappa = spectra::einstein_constant(family)?.kappa;
    let bound = lambda * tangent_polynomial(m, &kappa).eval(lambda);
    let at_first = *lambda == lambda1;
    let mk = |value, kind| FormValue { value, kind, subbundle: SubBundle::Tangent };
    Ok(match family {
        _ if lambda.is_zero() => mk(bound, FormKind::Exact),
        ManifoldFamily::TotallyGeodesicInclusion { .. } => mk(bound, FormKind::Exact),
        ManifoldFamily::Veronese { .. } if at_first => mk(bound, FormKind::Exact),
        ManifoldFamily::CliffordTorus { .. } if at_first && refine_lambda1 => {
            let m = int(i128::from(m));
            mk(int(2) * m * (int(-8) * m + int(64)) + int(32) * m * m, FormKind::Exact)
        }
        _ => mk(bound, FormKind::LowerBound),
    })
}

/// Vertical form: `λ(λ−2m)` per direction `e_{m+i}` for the inclusion,
/// `λ² + 4(l+2)λ` on `fξ` for the Clifford torus.
pub fn vertical_form(family: &ManifoldFamily, lambda: &Rational) -> Result<FormValue> {
    check_lambda(lambda)?;
    let l = *lambda;
    let value = match *family {
        ManifoldFamily::TotallyGeodesicInclusion { m, n } => {
            if m == n {
                return Err(Error::Unsupported("inclusion with m = n has no vertical bundle".into()));
            }
            spectra::require_eigenvalue(family, lambda)?;
            l * (l - int(2 * i128::from(m)))
        }
        ManifoldFamily::CliffordTorus { l: ll } => {
            spectra::require_eigenvalue(family, lambda)?;
            l * l + int(4 * (i128::from(ll) + 2)) * l
        }
        _ => return Err(Error::Unsupported(format!("no vertical analysis for {family}"))),
    };
    Ok(FormValue::exact(value, SubBundle::Vertical))
}

/// How the two generating eigenfunctions of a cross term relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// `V = fη`, `W = dφ(grad f)`.
    SameEigenfunction,
    /// `V = fη`, `W = dφ(grad g)` with `∫fg = 0`.
    Orthogonal,
}

/// `(I(fη), dφ(grad f))` per unit `∫f²`.
pub fn cross_term(family: &ManifoldFamily, lambda: &Rational) -> Result<Rational> {
    cross_term_paired(family, lambda, Pairing::SameEigenfunction)
}

pub fn cross_term_paired(family: &ManifoldFamily, lambda: &Rational, pairing: Pairing) -> Result<Rational> {
    check_lambda(lambda)?;
    match *family {
        ManifoldFamily::TotallyGeodesicInclusion { .. } | ManifoldFamily::Veronese { .. } => {}
        _ => return Err(Error::Unsupported(format!("no cross-term formula for {family}"))),
    }
    spectra::require_eigenvalue(family, lambda)?;
    if pairing == Pairing::Orthogonal {
        return Ok(Rational::zero());
    }
    let l = *lambda;
    match *family {
        ManifoldFamily::TotallyGeodesicInclusion { m, .. } => {
            let m = int(i128::from(m));
            Ok(int(-4) * l * (l + int(2) - int(2) * m))
        }
        ManifoldFamily::Veronese { m } => {
            let lambda1 = spectra::first_nonzero_eigenvalue(family)?.value;
            if l != lambda1 {
                return Err(Error::Unsupported(format!(
                    "Veronese cross term is only known at the first eigenvalue {lambda1}"
                )));
            }
            let m = i128::from(m);
            Ok(frac(-4 * m * m * m, (m + 1) * (m + 1)))
        }
        _ => unreachable!(),
    }
}

/// Exact classification of the symmetric matrix `[[q_n, c], [c, q_t]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BlockClassRepr", into = "BlockClassRepr")]
pub enum BlockClass {
    PositiveDefinite,
    PositiveSemidefiniteWithKernel { direction: (i128, i128) },
    NegativeDefinite,
    NegativeSemidefiniteWithKernel { direction: (i128, i128) },
    Indefinite,
    /// The zero matrix.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BlockKind {
    PositiveDefinite,
    PositiveSemidefiniteWithKernel,
    NegativeDefinite,
    NegativeSemidefiniteWithKernel,
    Indefinite,
    Zero,
}

/// Wire form `{"class": ..., "direction": [a, b]}`. A plain struct, because
/// serde cannot buffer the `i128` entries of an internally tagged enum.
#[derive(Serialize, Deserialize)]
struct BlockClassRepr {
    class: BlockKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    direction: Option<(i128, i128)>,
}

impl From<BlockClass> for BlockClassRepr {
    fn from(b: BlockClass) -> Self {
        let (class, direction) = match b {
            BlockClass::PositiveDefinite => (BlockKind::PositiveDefinite, None),
            BlockClass::PositiveSemidefiniteWithKernel { direction } => {
                (BlockKind::PositiveSemidefiniteWithKernel, Some(direction))
            }
            BlockClass::NegativeDefinite => (BlockKind::NegativeDefinite, None),
            BlockClass::NegativeSemidefiniteWithKernel { direction } => {
                (BlockKind::NegativeSemidefiniteWithKernel, Some(direction))
            }
            BlockClass::Indefinite => (BlockKind::Indefinite, None),
            BlockClass::Zero => (BlockKind::Zero, None),
        };
        BlockClassRepr { class, direction }
    }
}

impl TryFrom<BlockClassRepr> for BlockClass {
    type Error = String;

    fn try_from(r: BlockClassRepr) -> std::result::Result<Self, String> {
        let need = |d: Option<(i128, i128)>| d.ok_or_else(|| format!("{:?} needs a kernel direction", r.class));
        Ok(match r.class {
            BlockKind::PositiveDefinite => BlockClass::PositiveDefinite,
            BlockKind::PositiveSemidefiniteWithKernel => {
                BlockClass::PositiveSemidefiniteWithKernel { direction: need(r.direction)? }
            }
            BlockKind::NegativeDefinite => BlockClass::NegativeDefinite,
            BlockKind::NegativeSemidefiniteWithKernel => {
                BlockClass::NegativeSemidefiniteWithKernel { direction: need(r.direction)? }
            }
            BlockKind::Indefinite => BlockClass::Indefinite,
            BlockKind::Zero => BlockClass::Zero,
        })
    }
}

impl BlockClass {
    pub fn negative_dim(&self) -> u32 {
        match self {
            Self::NegativeDefinite => 2,
            Self::Indefinite | Self::NegativeSemidefiniteWithKernel { .. } => 1,
            _ => 0,
        }
    }

    pub fn null_dim(&self) -> u32 {
        match self {
            Self::PositiveSemidefiniteWithKernel { .. } | Self::NegativeSemidefiniteWithKernel { .. } => 1,
            Self::Zero => 2,
            _ => 0,
        }
    }
}

/// Scales a rational vector to coprime integers with a positive leading
/// non-zero entry.
fn primitive_direction(x: Rational, y: Rational) -> (i128, i128) {
    let den = x.denom().lcm(y.denom());
    let (mut a, mut b) = ((x * int(den)).to_integer(), (y * int(den)).to_integer());
    let g = a.gcd(&b);
    if g != 0 {
        a /= g;
        b /= g;
    }
    if a < 0 || (a == 0 && b < 0) {
        (a, b) = (-a, -b);
    }
    (a, b)
}

pub fn block_definiteness(q_normal: &Rational, q_tangent: &Rational, cross: &Rational) -> BlockClass {
    let det = q_normal * q_tangent - cross * cross;
    let trace = q_normal + q_tangent;
    match det.cmp(&Rational::zero()) {
        Ordering::Greater => {
            if q_normal.is_positive() {
                BlockClass::PositiveDefinite
            } else {
                BlockClass::NegativeDefinite
            }
        }
        Ordering::Less => BlockClass::Indefinite,
        Ordering::Equal => {
            if trace.is_zero() {
                // det = 0 and trace = 0 force a symmetric matrix to vanish
                return BlockClass::Zero;
            }
            let direction = if !q_normal.is_zero() {
                primitive_direction(-*cross, *q_normal)
            } else {
                primitive_direction(Rational::one(), Rational::zero())
            };
            if trace.is_positive() {
                BlockClass::PositiveSemidefiniteWithKernel { direction }
            } else {
                BlockClass::NegativeSemidefiniteWithKernel { direction }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateReport {
    /// `κ ≥ κ(m)`: only `η` contributes among normal fields.
    pub lichnerowicz_pass: bool,
    /// `κ ≥ (m+2)²/8`: gradient tangent fields are non-negative.
    pub einstein_pass: bool,
    /// `λ₁ ≥ m²/4`: gradient tangent fields are non-negative.
    pub lambda1_pass: bool,
    /// `2κ ≤ λ₁`: the identity of an Einstein domain is a stable harmonic map.
    pub identity_stable: bool,
    pub kappa_threshold: QuadraticSurd,
}

/// `κ(m) = (2(m−1)/m)(√(m²+1) − 1)`.
pub fn lichnerowicz_threshold(m: u32) -> QuadraticSurd {
    let m = i128::from(m);
    let c = frac(2 * (m - 1), m);
    QuadraticSurd { a: -c, b: c, d: int(m * m + 1) }
}

pub fn gates(m: u32, kappa: &Rational, lambda1: &Rational) -> Result<GateReport> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("gates need m >= 2, got {m}")));
    }
    if kappa.is_negative() {
        return Err(Error::InvalidArgument("kappa must be >= 0".into()));
    }
    if !lambda1.is_positive() {
        return Err(Error::InvalidArgument("lambda1 must be > 0".into()));
    }
    let mm = i128::from(m);
    let kappa_threshold = lichnerowicz_threshold(m);
    Ok(GateReport {
        lichnerowicz_pass: kappa_threshold.le_rational(kappa),
        einstein_pass: *kappa >= frac((mm + 2) * (mm + 2), 8),
        lambda1_pass: *lambda1 >= frac(mm * mm, 4),
        identity_stable: int(2) * kappa <= *lambda1,
        kappa_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::family_spectrum;
    use proptest::prelude::*;
    use ManifoldFamily::*;

    #[test]
    fn normal_form_examples() {
        assert_eq!(normal_form(2, &int(0)).unwrap().value, int(-16));
        assert_eq!(normal_form(2, &frac(4, 3)).unwrap().value, frac(-80, 9));
        assert_eq!(normal_form(2, &int(4)).unwrap().value, int(16));
        assert!(normal_form(0, &int(1)).is_err());
        assert!(normal_form(2, &int(-1)).is_err());
    }

    #[test]
    fn normal_negative_examples() {
        for l in 1..=40u32 {
            let m = 2 * l;
            assert!(!normal_negative(m, &int(2 * i128::from(m))).unwrap());
        }
        assert!(normal_negative(5, &int(0)).unwrap());
        assert!(normal_negative(2, &frac(4, 3)).unwrap());
        assert_eq!(normal_threshold(2).cmp_rational(&frac(4, 3)), Ordering::Greater);
    }

    #[test]
    fn tangent_form_examples() {
        let f = tangent_form(&TotallyGeodesicInclusion { m: 2, n: 3 }, &int(4), false).unwrap();
        assert_eq!((f.value, f.kind), (int(64), FormKind::Exact));

        let f = tangent_form(&CliffordTorus { l: 4 }, &int(16), false).unwrap();
        assert_eq!((f.value, f.kind), (int(0), FormKind::LowerBound));
        assert_eq!(f.certification(), Certification::NonNegative);

        let f = tangent_form(&CliffordTorus { l: 5 }, &int(20), true).unwrap();
        assert_eq!((f.value, f.kind), (int(2880), FormKind::Exact));
    }

    #[test]
    fn tangent_form_errors() {
        assert!(tangent_form(&IdentityMap { n: 3 }, &int(3), false).is_err());
        // refine away from λ₁
        assert!(tangent_form(&CliffordTorus { l: 1 }, &int(8), true).is_err());
        // not an eigenvalue
        assert!(matches!(
            tangent_form(&CliffordTorus { l: 1 }, &int(5), false),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn clifford_refinement_is_lower_bound_plus_hessian_term() {
        for l in 1..=25u32 {
            let fam = CliffordTorus { l };
            let m = i128::from(2 * l);
            let lam = int(2 * m);
            let bound = tangent_form(&fam, &lam, false).unwrap();
            let exact = tangent_form(&fam, &lam, true).unwrap();
            assert_eq!(exact.value, bound.value + int(32 * m * m));
            assert_eq!(exact.value, int(16 * m * (m + 8)));
        }
    }

    #[test]
    fn veronese_root_examples() {
        let (x1, x2) = veronese_tangent_roots(5).unwrap();
        assert_eq!(x2.a, frac(-1, 3));
        assert_eq!(x2.d, frac(67, 3));
        assert!(x2.cmp_rational(&frac(25, 6)) == Ordering::Greater);
        assert!(x1.cmp_rational(&frac(25, 6)) == Ordering::Less);

        let (_, x2) = veronese_tangent_roots(4).unwrap();
        assert!(x2.le_rational(&frac(16, 5)));

        let (_, x2) = veronese_tangent_roots(2).unwrap();
        assert!(x2.le_rational(&int(4)));
        assert!(veronese_tangent_roots(1).is_err());
    }

    #[test]
    fn veronese_roots_agree_with_generic_roots() {
        for m in 2..=60u32 {
            let kappa = spectra::einstein_constant(&Veronese { m }).unwrap().kappa;
            let (g1, g2) = tangent_roots(m, &kappa).unwrap();
            let (v1, v2) = veronese_tangent_roots(m).unwrap();
            assert_eq!(g1.cmp_same_radicand(&v1), Some(Ordering::Equal), "m={m}");
            assert_eq!(g2.cmp_same_radicand(&v2), Some(Ordering::Equal), "m={m}");
        }
    }

    #[test]
    fn vertical_form_examples() {
        assert_eq!(vertical_form(&TotallyGeodesicInclusion { m: 2, n: 3 }, &int(4)).unwrap().value, int(0));
        assert_eq!(vertical_form(&CliffordTorus { l: 1 }, &int(0)).unwrap().value, int(0));
        assert_eq!(vertical_form(&CliffordTorus { l: 1 }, &int(4)).unwrap().value, int(64));
        assert!(vertical_form(&TotallyGeodesicInclusion { m: 2, n: 2 }, &int(4)).is_err());
        assert!(vertical_form(&Veronese { m: 2 }, &frac(4, 3)).is_err());
        assert!(vertical_form(&VeroneseProjective { m: 2 }, &int(0)).is_err());
    }

    #[test]
    fn cross_term_examples() {
        assert_eq!(cross_term(&TotallyGeodesicInclusion { m: 2, n: 2 }, &int(0)).unwrap(), int(0));
        assert_eq!(cross_term(&TotallyGeodesicInclusion { m: 2, n: 2 }, &int(4)).unwrap(), int(-32));
        assert_eq!(cross_term(&Veronese { m: 2 }, &frac(4, 3)).unwrap(), frac(-32, 9));
        assert!(cross_term(&Veronese { m: 2 }, &int(4)).is_err());
        assert_eq!(
            cross_term_paired(&Veronese { m: 2 }, &int(4), Pairing::Orthogonal).unwrap(),
            int(0)
        );
        assert!(cross_term(&CliffordTorus { l: 1 }, &int(4)).is_err());
    }

    #[test]
    fn block_examples() {
        for m in 1..=10i128 {
            assert_eq!(
                block_definiteness(&int(8 * m), &int(32 * m), &int(-16 * m)),
                BlockClass::PositiveSemidefiniteWithKernel { direction: (2, 1) }
            );
        }
        assert_eq!(block_definiteness(&int(176), &int(1728), &int(-480)), BlockClass::PositiveDefinite);
        // Veronese m = 2 at λ₁: tangent diagonal is positive, block indefinite
        let qt = tangent_form(&Veronese { m: 2 }, &frac(4, 3), false).unwrap();
        assert_eq!(qt.value, frac(64, 9));
        assert_eq!(
            block_definiteness(&frac(-80, 9), &qt.value, &frac(-32, 9)),
            BlockClass::Indefinite
        );
        assert_eq!(block_definiteness(&int(0), &int(0), &int(0)), BlockClass::Zero);
        assert_eq!(
            block_definiteness(&int(0), &int(-3), &int(0)),
            BlockClass::NegativeSemidefiniteWithKernel { direction: (1, 0) }
        );
        assert_eq!(block_definiteness(&int(-2), &int(-3), &int(1)), BlockClass::NegativeDefinite);
    }

    #[test]
    fn gate_examples() {
        let g = gates(2, &int(2), &int(4)).unwrap();
        assert!(g.lichnerowicz_pass);
        let g = gates(4, &int(4), &int(8)).unwrap();
        assert!(g.identity_stable);
        let g = gates(6, &int(8), &int(12)).unwrap();
        assert!(!g.identity_stable);
        assert!(gates(1, &int(0), &int(2)).is_err());
        assert!(gates(2, &int(-1), &int(2)).is_err());
        assert!(gates(2, &int(1), &int(0)).is_err());
    }

    #[test]
    fn polynomial_coherence() {
        for m in 1..=100u32 {
            let mi = i128::from(m);
            let tgi = tangent_polynomial(m, &int(2 * (mi - 1)));
            assert_eq!(tgi, Poly::new(vec![int(8 * (mi - 1) * (mi - 2)), int(6 * (2 - mi)), int(1)]));
            let cl = tangent_polynomial(m, &int(2 * mi - 4));
            assert_eq!(cl, Poly::new(vec![int(8 * mi * mi - 48 * mi + 64), int(2 * (10 - 3 * mi)), int(1)]));
        }
    }

    #[test]
    fn veronese_tangent_exact_negative_iff_m_ge_5() {
        for m in 2..=60u32 {
            let fam = Veronese { m };
            let l1 = spectra::first_nonzero_eigenvalue(&fam).unwrap().value;
            let f = tangent_form(&fam, &l1, false).unwrap();
            assert_eq!(f.kind, FormKind::Exact);
            assert_eq!(f.value.is_negative(), m >= 5, "m={m}");
            let (_, x2) = veronese_tangent_roots(m).unwrap();
            assert_eq!(x2.cmp_rational(&l1) == Ordering::Greater, m >= 5);
        }
    }

    #[test]
    fn einstein_gate_matches_complex_roots() {
        for m in 2..=40u32 {
            for kn in 0..200i128 {
                let kappa = frac(kn, 4);
                let gate = gates(m, &kappa, &int(1)).unwrap().einstein_pass;
                let complex_or_double = match tangent_roots(m, &kappa) {
                    None => true,
                    Some((r1, _)) => r1.b.is_zero() || r1.d.is_zero(),
                };
                assert_eq!(gate, complex_or_double, "m={m} kappa={kappa}");
            }
        }
    }

    #[test]
    fn tgi_tangent_is_positive_on_spectrum() {
        for m in 1..=30u32 {
            let fam = TotallyGeodesicInclusion { m, n: m };
            for e in family_spectrum(&fam, &int(4000)).unwrap().iter().skip(1) {
                assert!(tangent_form(&fam, &e.value, false).unwrap().value.is_positive(), "m={m}");
            }
        }
    }

    proptest! {
        #[test]
        fn normal_sign_matches_negativity(m in 1u32..80, num in 0i128..100_000, den in 1i128..500) {
            let lam = frac(num, den);
            let v = normal_form(m, &lam).unwrap().value;
            prop_assert_eq!(v.is_negative(), normal_negative(m, &lam).unwrap());
            prop_assert_eq!(v.is_negative(), normal_threshold(m).cmp_rational(&lam) == Ordering::Greater);
        }

        #[test]
        fn lichnerowicz_gate_matches_float(m in 2u32..60, num in 0i128..4000, den in 1i128..40) {
            let kappa = frac(num, den);
            let t = lichnerowicz_threshold(m).to_f64();
            let k = crate::rational::to_f64(&kappa);
            prop_assume!((k - t).abs() > 1e-9);
            prop_assert_eq!(gates(m, &kappa, &int(1)).unwrap().lichnerowicz_pass, k > t);
        }
    }
}
