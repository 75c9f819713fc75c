//! Laplace–Beltrami spectra, Einstein constants and isometry-group
//! dimensions of the model domains.
//!
//! Conventions: a sphere of radius `r` is `(S^m, r²·g_can)`, so its level-`k`
//! eigenvalue is `k(m+k−1)/r²`. The domains are
//!
//! | family                       | domain                      | scale `r²`   |
//! |------------------------------|-----------------------------|--------------|
//! | totally geodesic inclusion   | `S^m(1/√2)`                 | `1/2`        |
//! | Veronese                     | `S^m(√((m+1)/m))`           | `(m+1)/m`    |
//! | Veronese, projective         | `RP^m` with the same metric | even levels  |
//! | Clifford torus (`m = 2l`)    | `S^l(1/2) × S^l(1/2)`       | `1/4` each   |
//! | identity map                 | unit `S^n`                  | `1`          |

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, int, serde_exact, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldFamily {
    /// `S^m(1/√2) → S^n(1/√2)` in the equator, then the tropic of `S^{n+1}`.
    TotallyGeodesicInclusion { m: u32, n: u32 },
    Veronese { m: u32 },
    VeroneseProjective { m: u32 },
    /// Generalised Clifford torus `S^l(1/2) × S^l(1/2)`, domain dimension `2l`.
    CliffordTorus { l: u32 },
    /// Identity of the unit sphere `S^n`, a harmonic (hence biharmonic) map.
    IdentityMap { n: u32 },
}

impl ManifoldFamily {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFamily(msg));
        match *self {
            Self::TotallyGeodesicInclusion { m, n } => {
                if m < 1 {
                    return bad(format!("inclusion needs m >= 1, got m = {m}"));
                }
                if m > n {
                    return bad(format!("inclusion needs m <= n, got m = {m}, n = {n}"));
                }
            }
            Self::Veronese { m } | Self::VeroneseProjective { m } => {
                if m < 2 {
                    return bad(format!("Veronese maps need m >= 2, got m = {m}"));
                }
            }
            Self::CliffordTorus { l } => {
                if l < 1 {
                    return bad(format!("Clifford torus needs l >= 1, got l = {l}"));
                }
            }
            Self::IdentityMap { n } => {
                if n < 2 {
                    return bad(format!("identity map needs n >= 2, got n = {n}"));
                }
            }
        }
        Ok(())
    }

    /// Dimension `m` of the domain.
    pub fn domain_dim(&self) -> u32 {
        match *self {
            Self::TotallyGeodesicInclusion { m, .. }
            | Self::Veronese { m }
            | Self::VeroneseProjective { m } => m,
            Self::CliffordTorus { l } => 2 * l,
            Self::IdentityMap { n } => n,
        }
    }

    /// Dimension of the unit target sphere of the biharmonic map.
    pub fn target_sphere_dim(&self) -> u32 {
        match *self {
            Self::TotallyGeodesicInclusion { n, .. } => n + 1,
            Self::Veronese { m } | Self::VeroneseProjective { m } => m + veronese_codim(m) + 1,
            Self::CliffordTorus { l } => 2 * l + 2,
            Self::IdentityMap { n } => n,
        }
    }

    pub fn slug(&self) -> &'static str {
        match self {
            Self::TotallyGeodesicInclusion { .. } => "tgi",
            Self::Veronese { .. } => "veronese",
            Self::VeroneseProjective { .. } => "veronese-projective",
            Self::CliffordTorus { .. } => "clifford",
            Self::IdentityMap { .. } => "identity",
        }
    }
}

impl fmt::Display for ManifoldFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::TotallyGeodesicInclusion { m, n } => write!(f, "tgi(m={m},n={n})"),
            Self::Veronese { m } => write!(f, "veronese(m={m})"),
            Self::VeroneseProjective { m } => write!(f, "veronese-projective(m={m})"),
            Self::CliffordTorus { l } => write!(f, "clifford(l={l})"),
            Self::IdentityMap { n } => write!(f, "identity(n={n})"),
        }
    }
}

/// Codimension `p = (m−1)(m+2)/2` of the generalised Veronese immersion.
pub fn veronese_codim(m: u32) -> u32 {
    (m - 1) * (m + 2) / 2
}

/// Where an eigenvalue comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Level {
    /// Degree-`k` spherical harmonics.
    Sphere { k: u32 },
    /// Projective level `k`, i.e. the even sphere level `2k`.
    Projective { k: u32 },
    /// All `(p, q)` factor levels of a product with this value.
    Product { pairs: Vec<(u32, u32)> },
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Sphere { k } => write!(f, "k={k}"),
            Level::Projective { k } => write!(f, "k={k}"),
            Level::Product { pairs } => {
                let parts: Vec<String> = pairs.iter().map(|(p, q)| format!("({p},{q})")).collect();
                write!(f, "{}", parts.join(";"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenvalue {
    #[serde(with = "serde_exact")]
    pub value: Rational,
    pub level: Level,
    pub multiplicity: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EinsteinData {
    #[serde(with = "serde_exact")]
    pub kappa: Rational,
    pub is_einstein: bool,
}

/// Exact binomial coefficient; `None` on overflow.
pub(crate) fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        // r * (n - i) is divisible by (i + 1) at every step
        r = r.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(r)
}

/// Multiplicity of level `k` on `S^m`: `(2k+m−1)(k+m−2)! / (k!(m−1)!)`,
/// with the circle special-cased (1, 2, 2, …).
pub fn sphere_multiplicity(m: u32, k: u32) -> Result<u128> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("sphere dimension must be >= 1, got {m}")));
    }
    if m == 1 {
        return Ok(if k == 0 { 1 } else { 2 });
    }
    let (m, k) = (u64::from(m), u64::from(k));
    // (k+m−2)!/(k!(m−2)!) · (2k+m−1)/(m−1)
    let c = binomial(k + m - 2, k).ok_or(Error::Overflow("sphere multiplicity"))?;
    let num = c.checked_mul(u128::from(2 * k + m - 1)).ok_or(Error::Overflow("sphere multiplicity"))?;
    Ok(num / u128::from(m - 1))
}

fn sphere_value(m: u32, scale: &Rational, k: u32) -> Rational {
    let (m, k) = (i128::from(m), i128::from(k));
    int(k * (m + k - 1)) / scale
}

/// Level `k` of `(S^m, scale·g_can)`.
pub fn sphere_level(m: i64, scale: Rational, k: i64) -> Result<Eigenvalue> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("sphere dimension must be >= 1, got {m}")));
    }
    if k < 0 {
        return Err(Error::InvalidArgument(format!("level must be >= 0, got {k}")));
    }
    if !scale.is_positive() {
        return Err(Error::InvalidArgument("metric scale must be > 0".into()));
    }
    let (m, k) = (
        u32::try_from(m).map_err(|_| Error::InvalidArgument("dimension too large".into()))?,
        u32::try_from(k).map_err(|_| Error::InvalidArgument("level too large".into()))?,
    );
    Ok(Eigenvalue {
        value: sphere_value(m, &scale, k),
        level: Level::Sphere { k },
        multiplicity: sphere_multiplicity(m, k)?,
    })
}

/// Metric scale of the sphere(s) making up the domain.
fn domain_scale(family: &ManifoldFamily) -> Rational {
    match *family {
        ManifoldFamily::TotallyGeodesicInclusion { .. } => frac(1, 2),
        ManifoldFamily::Veronese { m } | ManifoldFamily::VeroneseProjective { m } => {
            frac(i128::from(m) + 1, i128::from(m))
        }
        ManifoldFamily::CliffordTorus { .. } => frac(1, 4),
        ManifoldFamily::IdentityMap { .. } => Rational::one(),
    }
}

/// All distinct eigenvalues `≤ lambda_max`, ascending, multiplicities merged.
pub fn family_spectrum(family: &ManifoldFamily, lambda_max: &Rational) -> Result<Vec<Eigenvalue>> {
    family.validate()?;
    if lambda_max.is_negative() {
        return Err(Error::InvalidArgument("lambda_max must be >= 0".into()));
    }
    let scale = domain_scale(family);
    let mut out = Vec::new();
    match *family {
        ManifoldFamily::TotallyGeodesicInclusion { m, .. }
        | ManifoldFamily::Veronese { m }
        | ManifoldFamily::IdentityMap { n: m } => {
            for k in 0.. {
                let v = sphere_value(m, &scale, k);
                if v > *lambda_max {
                    break;
                }
                out.push(Eigenvalue {
                    value: v,
                    level: Level::Sphere { k },
                    multiplicity: sphere_multiplicity(m, k)?,
                });
            }
        }
        ManifoldFamily::VeroneseProjective { m } => {
            for k in 0.. {
                let v = sphere_value(m, &scale, 2 * k);
                if v > *lambda_max {
                    break;
                }
                out.push(Eigenvalue {
                    value: v,
                    level: Level::Projective { k },
                    multiplicity: sphere_multiplicity(m, 2 * k)?,
                });
            }
        }
        ManifoldFamily::CliffordTorus { l } => {
            let mut factor = Vec::new();
            for k in 0.. {
                let v = sphere_value(l, &scale, k);
                if v > *lambda_max {
                    break;
                }
                factor.push((k, v, sphere_multiplicity(l, k)?));
            }
            let mut merged: BTreeMap<Rational, (u128, Vec<(u32, u32)>)> = BTreeMap::new();
            for (p, vp, mp) in &factor {
                for (q, vq, mq) in &factor {
                    let v = vp + vq;
                    if v > *lambda_max {
                        continue;
                    }
                    let mult = mp.checked_mul(*mq).ok_or(Error::Overflow("product multiplicity"))?;
                    let e = merged.entry(v).or_default();
                    e.0 = e.0.checked_add(mult).ok_or(Error::Overflow("product multiplicity"))?;
                    e.1.push((*p, *q));
                }
            }
            out.extend(merged.into_iter().map(|(value, (multiplicity, mut pairs))| {
                pairs.sort_unstable();
                Eigenvalue { value, level: Level::Product { pairs }, multiplicity }
            }));
        }
    }
    Ok(out)
}

/// First non-zero eigenvalue with its full eigenspace multiplicity.
pub fn first_nonzero_eigenvalue(family: &ManifoldFamily) -> Result<Eigenvalue> {
    family.validate()?;
    let scale = domain_scale(family);
    Ok(match *family {
        ManifoldFamily::TotallyGeodesicInclusion { m, .. }
        | ManifoldFamily::Veronese { m }
        | ManifoldFamily::IdentityMap { n: m } => Eigenvalue {
            value: sphere_value(m, &scale, 1),
            level: Level::Sphere { k: 1 },
            multiplicity: sphere_multiplicity(m, 1)?,
        },
        ManifoldFamily::VeroneseProjective { m } => Eigenvalue {
            value: sphere_value(m, &scale, 2),
            level: Level::Projective { k: 1 },
            multiplicity: sphere_multiplicity(m, 2)?,
        },
        ManifoldFamily::CliffordTorus { l } => Eigenvalue {
            value: sphere_value(l, &scale, 1),
            level: Level::Product { pairs: vec![(0, 1), (1, 0)] },
            multiplicity: 2 * sphere_multiplicity(l, 1)?,
        },
    })
}

pub fn einstein_constant(family: &ManifoldFamily) -> Result<EinsteinData> {
    family.validate()?;
    let kappa = match *family {
        ManifoldFamily::TotallyGeodesicInclusion { m, .. } => int(2 * (i128::from(m) - 1)),
        ManifoldFamily::Veronese { m } | ManifoldFamily::VeroneseProjective { m } => {
            let m = i128::from(m);
            frac(m * (m - 1), m + 1)
        }
        ManifoldFamily::CliffordTorus { l } => int(4 * (i128::from(l) - 1)),
        ManifoldFamily::IdentityMap { n } => int(i128::from(n) - 1),
    };
    Ok(EinsteinData { kappa, is_einstein: true })
}

/// Dimension of the isometry group of the domain (the span of its Killing
/// fields).
pub fn isometry_group_dim(family: &ManifoldFamily) -> Result<u64> {
    family.validate()?;
    Ok(match *family {
        ManifoldFamily::TotallyGeodesicInclusion { m, .. }
        | ManifoldFamily::Veronese { m }
        | ManifoldFamily::VeroneseProjective { m }
        | ManifoldFamily::IdentityMap { n: m } => u64::from(m) * (u64::from(m) + 1) / 2,
        // SO(l+1) × SO(l+1)
        ManifoldFamily::CliffordTorus { l } => u64::from(l) * (u64::from(l) + 1),
    })
}

/// Whether `value` is a Laplace eigenvalue of the family's domain.
pub fn is_eigenvalue(family: &ManifoldFamily, value: &Rational) -> Result<bool> {
    if value.is_negative() {
        return Ok(false);
    }
    let spec = family_spectrum(family, value)?;
    Ok(spec.last().is_some_and(|e| e.value == *value))
}

pub(crate) fn require_eigenvalue(family: &ManifoldFamily, value: &Rational) -> Result<()> {
    if is_eigenvalue(family, value)? {
        Ok(())
    } else {
        Err(Error::NotAnEigenvalue { family: family.to_string(), value: *value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ManifoldFamily::*;

    /// Harmonic polynomials of degree `k` in `m+1` variables, counted as
    /// (#monomials of degree k) − (#monomials of degree k−2) by enumeration.
    fn harmonic_dimension_by_enumeration(m: u32, k: u32) -> u128 {
        fn count(vars: u32, deg: u32) -> u128 {
            if vars == 1 {
                return 1;
            }
            (0..=deg).map(|d| count(vars - 1, deg - d)).sum()
        }
        let all = count(m + 1, k);
        let lower = if k >= 2 { count(m + 1, k - 2) } else { 0 };
        all - lower
    }

    #[test]
    fn sphere_level_examples() {
        let e = sphere_level(2, frac(3, 2), 1).unwrap();
        assert_eq!((e.value, e.multiplicity), (frac(4, 3), 3));
        let e = sphere_level(2, frac(1, 2), 0).unwrap();
        assert_eq!((e.value, e.multiplicity), (int(0), 1));
        let e = sphere_level(3, frac(1, 2), 2).unwrap();
        assert_eq!((e.value, e.multiplicity), (int(16), 9));
        assert_eq!(harmonic_dimension_by_enumeration(3, 2), 9);
    }

    #[test]
    fn sphere_level_rejects_bad_input() {
        assert!(sphere_level(0, int(1), 1).is_err());
        assert!(sphere_level(2, int(1), -1).is_err());
        assert!(sphere_level(2, int(0), 1).is_err());
        assert!(sphere_level(2, frac(-1, 2), 1).is_err());
    }

    #[test]
    fn circle_multiplicities() {
        assert_eq!(sphere_multiplicity(1, 0).unwrap(), 1);
        for k in 1..10 {
            assert_eq!(sphere_multiplicity(1, k).unwrap(), 2);
        }
    }

    #[test]
    fn multiplicity_matches_harmonic_polynomial_count() {
        for m in 1..=6 {
            for k in 0..=6 {
                assert_eq!(
                    sphere_multiplicity(m, k).unwrap(),
                    harmonic_dimension_by_enumeration(m, k),
                    "m={m} k={k}"
                );
            }
        }
    }

    #[test]
    fn clifford_small_spectrum() {
        let s = family_spectrum(&CliffordTorus { l: 1 }, &int(8)).unwrap();
        let got: Vec<_> = s.iter().map(|e| (e.value, e.multiplicity)).collect();
        assert_eq!(got, vec![(int(0), 1), (int(4), 4), (int(8), 4)]);
        assert_eq!(s[1].level, Level::Product { pairs: vec![(0, 1), (1, 0)] });
    }

    #[test]
    fn tgi_spectrum_example() {
        let s = family_spectrum(&TotallyGeodesicInclusion { m: 2, n: 3 }, &int(12)).unwrap();
        let got: Vec<_> = s.iter().map(|e| (e.value, e.multiplicity)).collect();
        assert_eq!(got, vec![(int(0), 1), (int(4), 3), (int(12), 5)]);
    }

    #[test]
    fn veronese_zero_cutoff() {
        let s = family_spectrum(&Veronese { m: 2 }, &int(0)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].value, s[0].multiplicity), (int(0), 1));
        assert!(family_spectrum(&Veronese { m: 2 }, &int(-1)).is_err());
    }

    #[test]
    fn projective_multiplicity_is_even_sphere_level() {
        let s = family_spectrum(&VeroneseProjective { m: 2 }, &int(40)).unwrap();
        // m = 2: even levels 0, 2, 4 of S^2 have 1, 5, 9 harmonics
        let got: Vec<_> = s.iter().map(|e| e.multiplicity).collect();
        assert_eq!(&got[..3], &[1, 5, 9]);
        for (k, e) in s.iter().enumerate() {
            assert_eq!(e.multiplicity, harmonic_dimension_by_enumeration(2, 2 * k as u32));
        }
    }

    #[test]
    fn first_eigenvalue_examples() {
        assert_eq!(first_nonzero_eigenvalue(&Veronese { m: 5 }).unwrap().value, frac(25, 6));
        assert_eq!(first_nonzero_eigenvalue(&CliffordTorus { l: 3 }).unwrap().value, int(12));
        assert_eq!(
            first_nonzero_eigenvalue(&TotallyGeodesicInclusion { m: 1, n: 1 }).unwrap().value,
            int(2)
        );
    }

    #[test]
    fn einstein_examples() {
        assert_eq!(einstein_constant(&TotallyGeodesicInclusion { m: 2, n: 3 }).unwrap().kappa, int(2));
        assert_eq!(einstein_constant(&CliffordTorus { l: 1 }).unwrap().kappa, int(0));
        assert_eq!(einstein_constant(&Veronese { m: 5 }).unwrap().kappa, frac(10, 3));
    }

    #[test]
    fn isometry_examples() {
        assert_eq!(isometry_group_dim(&TotallyGeodesicInclusion { m: 3, n: 5 }).unwrap(), 6);
        assert_eq!(isometry_group_dim(&CliffordTorus { l: 1 }).unwrap(), 2);
        assert_eq!(isometry_group_dim(&TotallyGeodesicInclusion { m: 1, n: 1 }).unwrap(), 1);
    }

    #[test]
    fn invalid_families_rejected() {
        assert!(TotallyGeodesicInclusion { m: 3, n: 2 }.validate().is_err());
        assert!(TotallyGeodesicInclusion { m: 0, n: 2 }.validate().is_err());
        assert!(Veronese { m: 1 }.validate().is_err());
        assert!(CliffordTorus { l: 0 }.validate().is_err());
        assert!(IdentityMap { n: 1 }.validate().is_err());
    }

    #[test]
    fn target_dimensions() {
        assert_eq!(TotallyGeodesicInclusion { m: 2, n: 3 }.target_sphere_dim(), 4);
        // classical Veronese surface: p = 2, S^2 -> S^4 -> S^5
        assert_eq!(Veronese { m: 2 }.target_sphere_dim(), 5);
        assert_eq!(CliffordTorus { l: 1 }.target_sphere_dim(), 4);
        assert_eq!(CliffordTorus { l: 3 }.domain_dim(), 6);
    }

    #[test]
    fn eigenvalue_membership() {
        let f = CliffordTorus { l: 1 };
        assert!(is_eigenvalue(&f, &int(8)).unwrap());
        assert!(!is_eigenvalue(&f, &int(12)).unwrap());
        assert!(is_eigenvalue(&f, &int(16)).unwrap());
        assert!(!is_eigenvalue(&Veronese { m: 2 }, &int(1)).unwrap());
    }
}
