//! Named pass/fail checks comparing the oracle against the exact layer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::flat::{add_sections, FlatCase, FlatGeometry};
use super::identities::random_field;
use super::sphere::{Poly3, SphereCase, SphereGeometry};
use super::trig::TrigPoly;
use super::{GeometryCase, OracleError};
use crate::quadforms;
use crate::rational::{self, int, Rational};
use crate::spectra::{self, ManifoldFamily};

pub const SCHEMA_VERSION: u32 = 1;

pub const ANCHOR_NORMAL: &str = "normal form ∫|Δ^φV − mV|² − 4m²|V|² = (λ²+4λ−4m²)∫f²";
pub const ANCHOR_TANGENT: &str = "tangent form ∫|Δ^φV + (1−m)V|² − m²|V|² for V = dφ(grad f)";
pub const ANCHOR_VERTICAL: &str = "vertical form ∫|Δ^φV|² − 2m⟨Δ^φV, V⟩";
pub const ANCHOR_FULL: &str = "full fourth-order second variation operator I(V) of the bienergy";
pub const ANCHOR_CROSS: &str = "cross term (I(fη), dφ(grad f)) = −4λ(λ+2−2m)∫f²";
pub const ANCHOR_KERNEL: &str = "I(2fη + dφ(grad f)) = 0 at λ₁ = 2m";
pub const ANCHOR_KILLING: &str = "Killing fields X give I(dφ(X)) = 0";
pub const ANCHOR_KILLING_DIM: &str = "dimension of the isometry group of the domain";
pub const ANCHOR_SYMMETRY: &str = "I is self-adjoint: (I(V),W) = (I(W),V)";
pub const ANCHOR_ENERGY: &str = "energy density e(ψ) = m/2 is constant";
pub const ANCHOR_TENSION: &str = "τ(φ) = −2e(ψ)η = −mη";
pub const ANCHOR_BITENSION: &str = "τ²(φ) = 0: φ = i∘ψ is biharmonic";
pub const ANCHOR_RADIUS: &str = "|ψ| = 1/√2 and |φ| = 1";
pub const ANCHOR_GRADIENT: &str = "first variation of the energy is −∫⟨τ(φ), V⟩";
pub const ANCHOR_REFINEMENT: &str = "trigonometric data is differentiated exactly: doubling the grid changes nothing";
pub const ANCHOR_QUADRATURE: &str = "polynomial integrands are integrated exactly: doubling the rule changes nothing";
pub const ANCHOR_YANO: &str = "Yano: ∫(div X)² − ⟨tr ∇²X + Ric X, X⟩ = ½∫|L_X g|²";
pub const ANCHOR_BOCHNER: &str = "Δ^φV = Δ^ψV + 2(div X)η + V for V = dφ(X)";
pub const ANCHOR_JACOBI: &str = "J^ψ(V) = Δ^ψV + 2(1−m)V on the tangent sub-bundle";
pub const ANCHOR_JACOBI_SPLIT: &str = "(I(V),V) = ∫|J^ψ(V)|² + 4(div X)² + 2m⟨J^ψ(V), V⟩";
pub const ANCHOR_LIE: &str = "|L_X g|² ≥ (4/m)(div X)²";
pub const ANCHOR_TRACE: &str = "Clifford torus at λ₁: 4|tr ∇dψ(∇.X, .)|² = 32m²f²";
pub const ANCHOR_LOWER_BOUND: &str = "tangent lower bound λ·P_E(λ) drops 4|tr ∇dψ(∇.X, .)|² ≥ 0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub computed: f64,
    pub expected: f64,
    /// The quantity compared against `tolerance` (relative or absolute as
    /// stated by `metric`).
    pub error: f64,
    pub metric: String,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub case: GeometryCase,
    pub grid: usize,
    pub seed: u64,
    pub random_fields: usize,
    pub tolerance_override: Option<f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub grid: usize,
    pub seed: u64,
    /// Replaces every check's tolerance.
    pub tolerance: Option<f64>,
    /// Number of seeded random fields for the identity and symmetry checks.
    pub random_fields: usize,
    /// Recompute a few values on a doubled grid.
    pub refine: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { grid: 64, seed: 0, tolerance: None, random_fields: 100, refine: true }
    }
}

struct Sink {
    checks: Vec<Check>,
    tolerance: Option<f64>,
}

impl Sink {
    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, name: String, anchor: &str, computed: f64, expected: f64, error: f64, metric: &str, tol: f64) {
        let tolerance = self.tolerance.unwrap_or(tol);
        self.checks.push(Check {
            name,
            anchor: anchor.to_string(),
            computed,
            expected,
            error,
            metric: metric.to_string(),
            tolerance,
            pass: error.is_finite() && error <= tolerance,
        });
    }

    /// `|computed/expected − 1|`, or `|computed|` when `expected = 0`.
    fn relative(&mut self, name: String, anchor: &str, computed: f64, expected: f64, tol: f64) {
        if expected == 0.0 {
            self.push(name, anchor, computed, expected, computed.abs(), "absolute", tol);
        } else {
            self.push(name, anchor, computed, expected, (computed / expected - 1.0).abs(), "relative", tol);
        }
    }

    /// `|computed − expected| / max(|expected|, scale)`.
    fn scaled(&mut self, name: String, anchor: &str, computed: f64, expected: f64, scale: f64, tol: f64) {
        let error = (computed - expected).abs() / expected.abs().max(scale);
        self.push(name, anchor, computed, expected, error, "relative", tol);
    }

    fn absolute(&mut self, name: String, anchor: &str, computed: f64, expected: f64, tol: f64) {
        self.push(name, anchor, computed, expected, (computed - expected).abs(), "absolute", tol);
    }

    /// A residual already normalized by the caller.
    fn residual(&mut self, name: String, anchor: &str, computed: f64, tol: f64) {
        self.push(name, anchor, computed, 0.0, computed.abs(), "residual", tol);
    }

    /// `computed ≥ bound`, with slack `tol·max(1, |bound|)`.
    fn at_least(&mut self, name: String, anchor: &str, computed: f64, bound: f64, tol: f64) {
        let shortfall = (bound - computed).max(0.0) / bound.abs().max(1.0);
        self.push(name, anchor, computed, bound, shortfall, "shortfall", tol);
    }
}

fn to_f64(q: &Rational) -> f64 {
    rational::to_f64(q)
}

fn lambda_label(q: &Rational) -> String {
    format!("λ={}", rational::format_rational(q))
}

/// Runs every check available for `case`.
pub fn verify(case: GeometryCase, opts: &VerifyOptions) -> Result<VerificationReport, OracleError> {
    let mut sink = Sink { checks: Vec::new(), tolerance: opts.tolerance };
    match case {
        GeometryCase::CircleInclusion { n } => {
            let g = FlatGeometry::build(FlatCase::CircleInclusion { n }, opts.grid)?;
            flat_agreement(&g, opts, &mut sink)?;
            flat_identities(&g, opts, &mut sink)?;
        }
        GeometryCase::TorusClifford => {
            let g = FlatGeometry::build(FlatCase::TorusClifford, opts.grid)?;
            flat_agreement(&g, opts, &mut sink)?;
            flat_identities(&g, opts, &mut sink)?;
        }
        GeometryCase::SphereInclusion { n } => {
            sphere_agreement(SphereCase::SphereInclusion { n }, opts, &mut sink)?;
        }
        GeometryCase::VeroneseSurface => {
            sphere_agreement(SphereCase::VeroneseSurface, opts, &mut sink)?;
        }
    }
    let pass = sink.checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        case,
        grid: opts.grid,
        seed: opts.seed,
        random_fields: opts.random_fields,
        tolerance_override: opts.tolerance,
        checks: sink.checks,
        pass,
    })
}

/// Eigenfunction, its exact eigenvalue and `(p, q)` for the flat cases, up
/// to `λ ≤ 20`.
fn flat_modes(g: &FlatGeometry) -> Vec<(TrigPoly, Rational, (i32, i32))> {
    match g.case {
        FlatCase::CircleInclusion { .. } => (0..=3)
            .map(|k| (TrigPoly::cos(k, 0), int(2 * i128::from(k) * i128::from(k)), (k, 0)))
            .collect(),
        FlatCase::TorusClifford => [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2)]
            .iter()
            .map(|&(p, q)| (TrigPoly::cos_cos(p, q), int(4 * i128::from(p * p + q * q)), (p, q)))
            .collect(),
    }
}

fn flat_family(g: &FlatGeometry) -> ManifoldFamily {
    match g.case {
        FlatCase::CircleInclusion { n } => ManifoldFamily::TotallyGeodesicInclusion { m: 1, n },
        FlatCase::TorusClifford => ManifoldFamily::CliffordTorus { l: 1 },
    }
}

/// Exact tangent value on the torus for `f` with `f_uu = −p²f`, `f_vv = −q²f`:
/// `λ·P_E(λ) + 4|tr ∇dψ(∇.X,.)|²/f²` with the trace term `128(p² − q²)²`.
fn torus_tangent_exact(lambda: &Rational, p: i32, q: i32) -> Rational {
    let kappa = int(0);
    let pe = quadforms::tangent_polynomial(2, &kappa).eval(lambda);
    let d = i128::from(p * p - q * q);
    lambda * pe + int(128 * d * d)
}

fn flat_agreement(g: &FlatGeometry, opts: &VerifyOptions, sink: &mut Sink) -> Result<(), OracleError> {
    let family = flat_family(g);
    let m = g.m as u32;
    let lambda1 = spectra::first_nonzero_eigenvalue(&family)?.value;

    let (psi_r, phi_r) = g.radius_residuals();
    sink.residual("radius |ψ| − 1/√2".into(), ANCHOR_RADIUS, psi_r, 1e-12);
    sink.residual("radius |φ| − 1".into(), ANCHOR_RADIUS, phi_r, 1e-12);
    let r = g.biharmonicity_residuals()?;
    sink.residual("energy density e(ψ) − m/2".into(), ANCHOR_ENERGY, r.energy_density, 1e-8);
    sink.residual("tension τ(φ) + mη".into(), ANCHOR_TENSION, r.tension, 1e-8);
    sink.residual("bitension τ²(φ)".into(), ANCHOR_BITENSION, r.bitension, 1e-8);

    for (f, lambda, (p, q)) in flat_modes(g) {
        let label = lambda_label(&lambda);
        let fs = g.sample(&f)?;
        let f2 = g.integrate(&fs.mul(&fs));

        let v = g.normal_section(&f)?;
        let numeric = g.quadform(&v)?;
        let exact = to_f64(&quadforms::normal_form(m, &lambda)?.value);
        sink.relative(format!("normal form {label} (p,q)=({p},{q})"), ANCHOR_NORMAL, numeric / f2, exact, 1e-8);
        let full = g.bilinear(&v, &v)?;
        sink.scaled(format!("full operator vs normal form {label} (p,q)=({p},{q})"), ANCHOR_FULL, full, numeric, g.norm_sq(&v), 1e-8);

        if lambda != int(0) {
            let w = g.gradient_section(&f)?;
            let numeric_t = g.quadform(&w)?;
            let exact_t = match g.case {
                FlatCase::CircleInclusion { .. } => quadforms::tangent_form(&family, &lambda, false)?.value,
                FlatCase::TorusClifford => torus_tangent_exact(&lambda, p, q),
            };
            sink.relative(format!("tangent form {label} (p,q)=({p},{q})"), ANCHOR_TANGENT, numeric_t / f2, to_f64(&exact_t), 1e-8);
            let bound = quadforms::tangent_form(&family, &lambda, false)?;
            if bound.kind == quadforms::FormKind::LowerBound {
                sink.at_least(format!("tangent lower bound {label} (p,q)=({p},{q})"), ANCHOR_LOWER_BOUND, numeric_t / f2, to_f64(&bound.value), 1e-8);
            }
            if g.is_torus() && lambda == lambda1 {
                let refined = quadforms::tangent_form(&family, &lambda, true)?;
                sink.relative(format!("Clifford λ₁ refinement 2m(−8m+64)+32m² (p,q)=({p},{q})"), ANCHOR_TRACE, numeric_t / f2, to_f64(&refined.value), 1e-8);
            }
            let full_t = g.bilinear(&w, &w)?;
            sink.scaled(format!("full operator vs tangent form {label} (p,q)=({p},{q})"), ANCHOR_FULL, full_t, numeric_t, g.norm_sq(&w), 1e-8);

            if let FlatCase::CircleInclusion { .. } = g.case {
                let cross = quadforms::cross_term(&family, &lambda)?;
                let vw = g.bilinear(&v, &w)?;
                let wv = g.bilinear(&w, &v)?;
                sink.relative(format!("cross term {label}"), ANCHOR_CROSS, vw / f2, to_f64(&cross), 1e-8);
                sink.relative(format!("cross term transposed {label}"), ANCHOR_SYMMETRY, wv / f2, to_f64(&cross), 1e-8);
                if lambda == lambda1 {
                    let k = add_sections(&v, 2.0, &w, 1.0);
                    let ik = g.second_variation(&k.values)?;
                    sink.residual(format!("‖I(2fη + dφ(grad f))‖ {label}"), ANCHOR_KERNEL, g.l2_norm(&ik), 1e-9);
                }
            }
        }

        for dir in 0..g.vertical_dims() {
            let s = g.vertical_section(&f, dir)?;
            let numeric_v = g.quadform(&s)?;
            let exact_v = to_f64(&quadforms::vertical_form(&family, &lambda)?.value);
            sink.relative(format!("vertical form {label} (p,q)=({p},{q}) direction {dir}"), ANCHOR_VERTICAL, numeric_v / f2, exact_v, 1e-8);
            let full_v = g.bilinear(&s, &s)?;
            sink.scaled(format!("full operator vs vertical form {label} (p,q)=({p},{q}) direction {dir}"), ANCHOR_FULL, full_v, numeric_v, g.norm_sq(&s), 1e-8);
        }
    }

    for axis in 0..g.m {
        let mut x = vec![TrigPoly::default(); g.m];
        x[axis] = TrigPoly::constant(1.0);
        let k = g.tangent_section(&x)?;
        let ik = g.second_variation(&k.values)?;
        sink.residual(format!("‖I(dφ(∂_{axis}))‖ for the Killing field ∂_{axis}"), ANCHOR_KILLING, g.l2_norm(&ik), 1e-9);
    }
    let kd = g.killing_dimension(2)?;
    let iso = spectra::isometry_group_dim(&family)?;
    sink.absolute("Killing fields with modes ≤ 2".into(), ANCHOR_KILLING_DIM, kd as f64, iso as f64, 0.0);

    if opts.refine {
        let fine = FlatGeometry::build(g.case, 2 * g.grid())?;
        let f = flat_modes(g)[1].0.clone();
        for (name, coarse_s, fine_s) in [
            ("normal", g.normal_section(&f)?, fine.normal_section(&f)?),
            ("tangent", g.gradient_section(&f)?, fine.gradient_section(&f)?),
        ] {
            let a = g.bilinear(&coarse_s, &coarse_s)?;
            let b = fine.bilinear(&fine_s, &fine_s)?;
            sink.relative(format!("grid {} vs {} ({name}, λ₁)", g.grid(), fine.grid()), ANCHOR_REFINEMENT, a, b, 1e-10);
        }
    }
    Ok(())
}

fn flat_identities(g: &FlatGeometry, opts: &VerifyOptions, sink: &mut Sink) -> Result<(), OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = [0.0f64; 5];
    let mut worst_trace = 0.0f64;
    let mut worst_sym = 0.0f64;
    let mut worst_grad = 0.0f64;
    for _ in 0..opts.random_fields {
        let x = random_field(&mut rng, g, 3);
        let r = g.identity_residuals(&g.sample_field(&x)?)?;
        for (w, v) in worst.iter_mut().zip([r.yano, r.bochner, r.jacobi, r.jacobi_decomposition, r.lie_derivative_bound]) {
            *w = w.max(v);
        }
        if g.is_torus() {
            use rand::Rng;
            let (a, b): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let f = if rng.gen_bool(0.5) {
                TrigPoly::cos(1, 0).scale(a).add(&TrigPoly::sin(1, 0).scale(b))
            } else {
                TrigPoly::cos(0, 1).scale(a).add(&TrigPoly::sin(0, 1).scale(b))
            };
            worst_trace = worst_trace.max(g.second_fundamental_trace_residual(&f)?);
        }
    }
    let n = opts.random_fields;
    let names = [
        (ANCHOR_YANO, "Yano formula"),
        (ANCHOR_BOCHNER, "Bochner formula for Δ^φ dφ(X)"),
        (ANCHOR_JACOBI, "Jacobi operator curvature term"),
        (ANCHOR_JACOBI_SPLIT, "Jacobi decomposition of (I(V),V)"),
        (ANCHOR_LIE, "|L_X g|² ≥ (4/m)(div X)²"),
    ];
    for ((anchor, name), w) in names.iter().zip(worst) {
        sink.residual(format!("{name}, worst of {n} random fields"), anchor, w, 1e-9);
    }
    if g.is_torus() {
        sink.residual(format!("4|tr ∇dψ(∇.X,.)|² = 32m²f², worst of {n} first eigenfunctions"), ANCHOR_TRACE, worst_trace, 1e-9);
    }

    let pairs = n.clamp(1, 10);
    for _ in 0..pairs {
        let v = g.random_section(&mut rng, 2)?;
        let w = g.random_section(&mut rng, 2)?;
        let a = g.bilinear(&v, &w)?;
        let b = g.bilinear(&w, &v)?;
        worst_sym = worst_sym.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
        let (fd, exact) = g.first_variation_check(&v.values, 1e-4)?;
        worst_grad = worst_grad.max((fd - exact).abs() / exact.abs().max(1.0));
    }
    sink.residual(format!("(I(V),W) − (I(W),V), worst of {pairs} random pairs"), ANCHOR_SYMMETRY, worst_sym, 1e-9);
    sink.residual(format!("energy first variation vs τ(φ), worst of {pairs} random variations"), ANCHOR_GRADIENT, worst_grad, 1e-4);
    Ok(())
}

fn sphere_agreement(case: SphereCase, opts: &VerifyOptions, sink: &mut Sink) -> Result<(), OracleError> {
    let g = SphereGeometry::build(case, opts.grid)?;
    let (family, inv_r2) = match case {
        SphereCase::SphereInclusion { n } => (ManifoldFamily::TotallyGeodesicInclusion { m: 2, n }, int(2)),
        SphereCase::VeroneseSurface => (ManifoldFamily::Veronese { m: 2 }, rational::frac(2, 3)),
    };
    let r = g.residuals();
    sink.residual("radius |ψ| − 1/√2".into(), ANCHOR_RADIUS, r.psi_radius, 1e-12);
    sink.residual("radius |φ| − 1".into(), ANCHOR_RADIUS, r.phi_radius, 1e-12);
    sink.residual("energy density e(ψ) − m/2".into(), ANCHOR_ENERGY, r.energy_density, 1e-10);
    sink.residual("tension τ(φ) + mη".into(), ANCHOR_TENSION, r.tension, 1e-6);
    sink.residual("bitension τ²(φ)".into(), ANCHOR_BITENSION, r.bitension, 1e-6);

    let twenty = int(20);
    let mut k = 0u32;
    loop {
        let lambda = int(i128::from(k) * i128::from(k + 1)) * inv_r2;
        if lambda > twenty {
            break;
        }
        let label = lambda_label(&lambda);
        let f = Poly3::sectoral_harmonic(k);
        let f2 = g.integrate_square(&f);
        let numeric = g.quadform(&g.normal_section(&f)?)?;
        let exact = to_f64(&quadforms::normal_form(2, &lambda)?.value);
        sink.relative(format!("normal form {label} k={k}"), ANCHOR_NORMAL, numeric / f2, exact, 1e-5);
        if k > 0 {
            let t = quadforms::tangent_form(&family, &lambda, false)?;
            let numeric_t = g.quadform(&g.gradient_section(&f)?)? / f2;
            match t.kind {
                quadforms::FormKind::Exact => {
                    sink.relative(format!("tangent form {label} k={k}"), ANCHOR_TANGENT, numeric_t, to_f64(&t.value), 1e-5)
                }
                quadforms::FormKind::LowerBound => sink.at_least(
                    format!("tangent lower bound {label} k={k}"),
                    ANCHOR_LOWER_BOUND,
                    numeric_t,
                    to_f64(&t.value),
                    1e-5,
                ),
            }
        }
        for dir in 0..g.vertical_dims() {
            let numeric_v = g.quadform(&g.vertical_section(&f, dir)?)?;
            let exact_v = to_f64(&quadforms::vertical_form(&family, &lambda)?.value);
            sink.relative(format!("vertical form {label} k={k} direction {dir}"), ANCHOR_VERTICAL, numeric_v / f2, exact_v, 1e-5);
        }
        k += 1;
    }

    if opts.refine {
        let fine = SphereGeometry::build(case, 2 * opts.grid)?;
        let f = Poly3::sectoral_harmonic(1);
        let a = g.quadform(&g.gradient_section(&f)?)?;
        let b = fine.quadform(&fine.gradient_section(&f)?)?;
        sink.relative(format!("quadrature {} vs {} (tangent, λ₁)", g.n_lon, fine.n_lon), ANCHOR_QUADRATURE, a, b, 1e-10);
    }
    Ok(())
}
