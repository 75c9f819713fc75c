use std::f64::consts::{FRAC_1_SQRT_2, PI};

use biharm::oracle::flat::{add_sections, Vector};
use biharm::oracle::identities::random_field;
use biharm::oracle::sphere::Poly3;
use biharm::oracle::trig::TrigPoly;
use biharm::oracle::{
    verify, BundleTag, FlatCase, FlatGeometry, GeometryCase, OracleError, SphereCase, SphereGeometry, VerifyOptions,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn norm_f(g: &FlatGeometry, f: &TrigPoly) -> f64 {
    let s = g.sample(f).unwrap();
    g.integrate(&s.mul(&s))
}

#[test]
fn circle_normal_form_at_lambda_8() {
    let g = FlatGeometry::build(FlatCase::CircleInclusion { n: 1 }, 64).unwrap();
    let f = TrigPoly::cos(2, 0);
    let v = g.normal_section(&f).unwrap();
    let q = g.quadform(&v).unwrap();
    assert!(close(norm_f(&g, &f), PI * FRAC_1_SQRT_2, 1e-14));
    assert!(close(q, 92.0 * PI * FRAC_1_SQRT_2, 1e-10), "{q}");
}

#[test]
fn torus_vertical_form_at_lambda_4() {
    let g = FlatGeometry::build(FlatCase::TorusClifford, 32).unwrap();
    let f = TrigPoly::cos(1, 0);
    let v = g.vertical_section(&f, 0).unwrap();
    assert!(close(norm_f(&g, &f), PI * PI / 2.0, 1e-14));
    assert!(close(g.quadform(&v).unwrap(), 64.0 * PI * PI / 2.0, 1e-10));
    assert!(close(g.bilinear(&v, &v).unwrap(), 64.0 * PI * PI / 2.0, 1e-10));
}

#[test]
fn zero_section_has_zero_form() {
    let g = FlatGeometry::build(FlatCase::TorusClifford, 16).unwrap();
    let v = g.section(Vector::zeros(g.ambient, g.len()), BundleTag::Normal).unwrap();
    assert_eq!(g.quadform(&v).unwrap(), 0.0);
    assert_eq!(g.bilinear(&v, &v).unwrap(), 0.0);
}

#[test]
fn circle_cross_term_and_kernel_at_lambda_1() {
    let g = FlatGeometry::build(FlatCase::CircleInclusion { n: 1 }, 32).unwrap();
    let f = TrigPoly::cos(1, 0);
    let v = g.normal_section(&f).unwrap();
    let w = g.gradient_section(&f).unwrap();
    let cross = g.bilinear(&v, &w).unwrap() / norm_f(&g, &f);
    assert!(close(cross, -16.0, 1e-10), "{cross}");

    let kernel = add_sections(&v, 2.0, &w, 1.0);
    let iv = g.second_variation(&kernel.values).unwrap();
    assert!(g.l2_norm(&iv) <= 1e-9 * g.l2_norm(&kernel.values).max(1.0));
}

#[test]
fn torus_killing_field_is_in_the_kernel() {
    let g = FlatGeometry::build(FlatCase::TorusClifford, 32).unwrap();
    for x in [[TrigPoly::constant(1.0), TrigPoly::default()], [TrigPoly::default(), TrigPoly::constant(1.0)]] {
        let v = g.tangent_section(&x).unwrap();
        let iv = g.second_variation(&v.values).unwrap();
        assert!(g.l2_norm(&iv) <= 1e-9);
    }
    assert_eq!(g.killing_dimension(2).unwrap(), 2);
}

#[test]
fn identities_on_seeded_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in [FlatCase::CircleInclusion { n: 2 }, FlatCase::TorusClifford] {
        let g = FlatGeometry::build(case, 32).unwrap();
        for _ in 0..5 {
            let x = g.sample_field(&random_field(&mut rng, &g, 3)).unwrap();
            let r = g.identity_residuals(&x).unwrap();
            assert!(r.yano <= 1e-10 && r.bochner <= 1e-10 && r.jacobi <= 1e-10, "{r:?}");
            assert!(r.jacobi_decomposition <= 1e-8 && r.lie_derivative_bound <= 1e-12, "{r:?}");
        }
    }
    let g = FlatGeometry::build(FlatCase::TorusClifford, 32).unwrap();
    let x = g.sample_field(&g.gradient(&TrigPoly::cos(1, 0))).unwrap();
    assert!(g.identity_residuals(&x).unwrap().bochner <= 1e-10);
    assert!(g.second_fundamental_trace_residual(&TrigPoly::cos(1, 0)).unwrap() <= 1e-10);
}

#[test]
fn biharmonicity_holds_on_both_flat_cases() {
    for case in [FlatCase::CircleInclusion { n: 1 }, FlatCase::TorusClifford] {
        let g = FlatGeometry::build(case, 32).unwrap();
        let (psi, phi) = g.radius_residuals();
        assert!(psi <= 1e-14 && phi <= 1e-14);
        let r = g.biharmonicity_residuals().unwrap();
        assert!(r.bitension <= 1e-10, "{r:?}");
    }
}

#[test]
fn bad_grids_and_wide_bands_are_rejected() {
    assert!(matches!(FlatGeometry::build(FlatCase::TorusClifford, 30), Err(OracleError::Resolution(_))));
    assert!(matches!(FlatGeometry::build(FlatCase::TorusClifford, 8), Err(OracleError::Resolution(_))));
    let g = FlatGeometry::build(FlatCase::CircleInclusion { n: 1 }, 16).unwrap();
    assert!(matches!(g.normal_section(&TrigPoly::cos(20, 0)), Err(OracleError::Aliasing { .. })));
    // samples fine, but the fourth-order operator needs more band than the grid has
    let v = g.normal_section(&TrigPoly::cos(5, 0)).unwrap();
    assert!(matches!(g.bilinear(&v, &v), Err(OracleError::Aliasing { .. })));
}

#[test]
fn mislabelled_sections_are_rejected() {
    let g = FlatGeometry::build(FlatCase::TorusClifford, 16).unwrap();
    let w = g.gradient_section(&TrigPoly::cos(1, 0)).unwrap();
    assert!(matches!(g.section(w.values.clone(), BundleTag::Normal), Err(OracleError::Constraint { .. })));
    assert!(matches!(g.section(g.phi.clone(), BundleTag::Mixed), Err(OracleError::Constraint { .. })));
}

#[test]
fn sphere_inclusion_forms() {
    let g = SphereGeometry::build(SphereCase::SphereInclusion { n: 3 }, 32).unwrap();
    let f = Poly3::sectoral_harmonic(1);
    let f2 = g.integrate_square(&f);
    // λ₁ = 4 on S²(1/√2): normal 16, tangent 64, vertical 0
    assert!(close(g.quadform(&g.normal_section(&f).unwrap()).unwrap() / f2, 16.0, 1e-10));
    assert!(close(g.quadform(&g.gradient_section(&f).unwrap()).unwrap() / f2, 64.0, 1e-10));
    assert!(g.quadform(&g.vertical_section(&f, 0).unwrap()).unwrap().abs() <= 1e-10);
}

#[test]
fn veronese_surface_is_biharmonic() {
    let g = SphereGeometry::build(SphereCase::VeroneseSurface, 32).unwrap();
    let r = g.residuals();
    assert!(r.psi_radius <= 1e-12 && r.phi_radius <= 1e-12 && r.energy_density <= 1e-12, "{r:?}");
    assert!(r.tension <= 1e-10 && r.bitension <= 1e-10, "{r:?}");
}

#[test]
fn verify_is_deterministic_and_tolerance_can_be_forced() {
    let coarse = VerifyOptions { grid: 16, random_fields: 3, refine: false, ..Default::default() };
    assert!(matches!(verify(GeometryCase::TorusClifford, &coarse), Err(OracleError::Aliasing { .. })));

    let opts = VerifyOptions { grid: 32, ..coarse };
    let a = verify(GeometryCase::TorusClifford, &opts).unwrap();
    let b = verify(GeometryCase::TorusClifford, &opts).unwrap();
    assert!(a.pass);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

    let strict = VerifyOptions { tolerance: Some(1e-20), ..opts };
    let r = verify(GeometryCase::TorusClifford, &strict).unwrap();
    assert!(!r.pass);
    assert!(r.checks.iter().all(|c| c.tolerance == 1e-20));
}

#[test]
fn verify_sphere_cases_pass() {
    for case in [GeometryCase::SphereInclusion { n: 3 }, GeometryCase::VeroneseSurface] {
        let r = verify(case, &VerifyOptions { grid: 32, ..Default::default() }).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
    }
}
