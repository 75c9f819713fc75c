use biharm::classifier::{classify, default_lambda_max, tgi_nullity};
use biharm::quadforms::{self, block_definiteness, BlockClass, SubBundle};
use biharm::rational::{frac, int, Rational};
use biharm::report::{self, ClassifyDocument, QuadformDocument, SpectrumDocument};
use biharm::spectra::{self, ManifoldFamily};
use num_traits::Zero;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = ManifoldFamily> {
    prop_oneof![
        (1u32..=12, 0u32..=6).prop_map(|(m, d)| ManifoldFamily::TotallyGeodesicInclusion { m, n: m + d }),
        (2u32..=12).prop_map(|m| ManifoldFamily::Veronese { m }),
        (2u32..=12).prop_map(|m| ManifoldFamily::VeroneseProjective { m }),
        (1u32..=8).prop_map(|l| ManifoldFamily::CliffordTorus { l }),
    ]
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-60i128..=60, 1i128..=12).prop_map(|(p, q)| frac(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Certified counts do not depend on how far past the thresholds the
    /// sweep was asked to go.
    #[test]
    fn classification_is_independent_of_lambda_max(f in family(), extra in 0i128..40) {
        let base = default_lambda_max(&f).unwrap();
        let a = classify(&f, &base).unwrap();
        let b = classify(&f, &(base + int(extra))).unwrap();
        prop_assert_eq!(a.index_lower_bound, b.index_lower_bound);
        prop_assert_eq!(a.nullity_lower_bound, b.nullity_lower_bound);
        prop_assert_eq!(a.index_exact, b.index_exact);
    }

    /// η is always negative, and the normal count is the multiplicity below
    /// the threshold 2(√(m²+1) − 1).
    #[test]
    fn normal_count_matches_threshold(f in family()) {
        let r = classify(&f, &default_lambda_max(&f).unwrap()).unwrap();
        prop_assert!(r.index_lower_bound >= 1);
        let t = quadforms::normal_threshold(f.domain_dim());
        let expected: u128 = spectra::family_spectrum(&f, &r.sweep_limit)
            .unwrap()
            .iter()
            .filter(|e| t.cmp_rational(&e.value) == std::cmp::Ordering::Greater)
            .map(|e| e.multiplicity)
            .sum();
        prop_assert_eq!(r.contribution(SubBundle::Normal).negative_count, expected);
    }

    #[test]
    fn tgi_index_and_nullity(m in 1u32..=30, d in 0u32..=30) {
        let f = ManifoldFamily::TotallyGeodesicInclusion { m, n: m + d };
        let r = classify(&f, &default_lambda_max(&f).unwrap()).unwrap();
        let split = tgi_nullity(m, m + d).unwrap();
        prop_assert_eq!(r.index_exact, Some(1));
        prop_assert_eq!(r.nullity_exact, Some(u128::from(split.total)));
        prop_assert_eq!(r.nullity_split, Some(split));
        prop_assert_eq!(split.s1_gradient_blocks + split.s2_divergence_free + split.s3_vertical, split.total);
    }

    /// Exact block classes agree with the signs of the eigenvalues of the
    /// symmetric 2×2 matrix, computed in floating point.
    #[test]
    fn block_class_matches_eigenvalue_signs(a in small_rational(), b in small_rational(), c in small_rational()) {
        let class = block_definiteness(&a, &b, &c);
        let (af, bf, cf) = (to_f(&a), to_f(&b), to_f(&c));
        let mean = 0.5 * (af + bf);
        let rad = (0.25 * (af - bf).powi(2) + cf * cf).sqrt();
        let eig = [mean - rad, mean + rad];
        let eps = 1e-9 * (1.0 + af.abs() + bf.abs() + cf.abs());
        let neg = eig.iter().filter(|e| **e < -eps).count() as u32;
        let zero = eig.iter().filter(|e| e.abs() <= eps).count() as u32;
        prop_assert_eq!(class.negative_dim(), neg);
        prop_assert_eq!(class.null_dim(), zero);
        if let BlockClass::PositiveSemidefiniteWithKernel { direction: (x, y) }
        | BlockClass::NegativeSemidefiniteWithKernel { direction: (x, y) } = class
        {
            let (x, y) = (int(x), int(y));
            prop_assert!((a * x + c * y).is_zero() && (c * x + b * y).is_zero());
        }
    }

    /// Documents survive a JSON round trip byte for byte.
    #[test]
    fn documents_round_trip(f in family()) {
        let lambda_max = default_lambda_max(&f).unwrap();
        let doc = ClassifyDocument { schema_version: report::SCHEMA_VERSION, report: Some(classify(&f, &lambda_max).unwrap()), identity: None };
        let json = report::to_json(&doc);
        let back: ClassifyDocument = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(report::to_json(&back), json);

        let q = QuadformDocument::build(&f, &lambda_max).unwrap();
        let json = report::to_json(&q);
        prop_assert_eq!(report::to_json(&serde_json::from_str::<QuadformDocument>(&json).unwrap()), json);

        let s = SpectrumDocument::build(&f, &lambda_max).unwrap();
        let json = report::to_json(&s);
        prop_assert_eq!(report::to_json(&serde_json::from_str::<SpectrumDocument>(&json).unwrap()), json);
    }

    /// The tangent lower bound never exceeds a refined exact value.
    #[test]
    fn clifford_refinement_dominates_bound(l in 1u32..=40) {
        let f = ManifoldFamily::CliffordTorus { l };
        let lambda1 = spectra::first_nonzero_eigenvalue(&f).unwrap().value;
        let bound = quadforms::tangent_form(&f, &lambda1, false).unwrap().value;
        let exact = quadforms::tangent_form(&f, &lambda1, true).unwrap().value;
        let m = int(i128::from(2 * l));
        prop_assert_eq!(exact - bound, int(32) * m * m);
    }
}

fn to_f(q: &Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

#[test]
fn exact_fields_are_integer_pairs() {
    let f = ManifoldFamily::Veronese { m: 5 };
    let doc = ClassifyDocument {
        schema_version: report::SCHEMA_VERSION,
        report: Some(classify(&f, &default_lambda_max(&f).unwrap()).unwrap()),
        identity: None,
    };
    let v: serde_json::Value = serde_json::from_str(&report::to_json(&doc)).unwrap();
    let lambda1 = &v["report"]["lambda1"];
    assert_eq!(lambda1["num"], 25);
    assert_eq!(lambda1["den"], 6);
    let form = &v["report"]["contributions"][0]["eigen_attribution"][1]["form"];
    assert!(form["num"].is_i64() && form["den"].is_u64());
}
