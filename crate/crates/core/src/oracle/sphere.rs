//! The 2-sphere inclusion and the Veronese surface.
//!
//! Maps, eigenfunctions and sections are polynomials in the coordinates
//! `y ∈ S² ⊂ R³`; derivatives are taken symbolically and integrals use a
//! Gauss–Legendre rule in `cos θ` times the trapezoid rule in longitude,
//! which is exact on polynomials of low enough degree.
//!
//! The domain is `(S², R²·g_can)` and all intrinsic operators are the unit
//! sphere ones divided by `R²`. For a polynomial `F`, on `|y| = 1`,
//! `Δ_{S²} F = −(ΔF − yᵀ(∇²F)y − 2 y·∇F)` (non-negative convention).

use std::collections::BTreeMap;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use super::fourier::pairwise_sum;
use super::{BundleTag, OracleError};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Real polynomial in three variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly3 {
    terms: BTreeMap<[u32; 3], f64>,
}

impl Poly3 {
    pub fn zero() -> Poly3 {
        Poly3::default()
    }

    pub fn constant(c: f64) -> Poly3 {
        Poly3::monomial(c, [0, 0, 0])
    }

    pub fn var(i: usize) -> Poly3 {
        let mut e = [0; 3];
        e[i] = 1;
        Poly3::monomial(1.0, e)
    }

    pub fn monomial(c: f64, e: [u32; 3]) -> Poly3 {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(e, c);
        }
        Poly3 { terms }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn push(&mut self, e: [u32; 3], c: f64) {
        let slot = self.terms.entry(e).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Poly3) -> Poly3 {
        self.lin(1.0, o, 1.0)
    }

    pub fn sub(&self, o: &Poly3) -> Poly3 {
        self.lin(1.0, o, -1.0)
    }

    pub fn lin(&self, a: f64, o: &Poly3, b: f64) -> Poly3 {
        let mut out = self.scale(a);
        for (e, c) in &o.terms {
            out.push(*e, b * c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Poly3 {
        if s == 0.0 {
            return Poly3::zero();
        }
        Poly3 { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    pub fn mul(&self, o: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                out.push([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }

    pub fn diff(&self, i: usize) -> Poly3 {
        let mut out = Poly3::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.push(f, c * f64::from(e[i]));
            }
        }
        out
    }

    pub fn eval(&self, y: [f64; 3]) -> f64 {
        self.terms.iter().map(|(e, c)| c * y[0].powi(e[0] as i32) * y[1].powi(e[1] as i32) * y[2].powi(e[2] as i32)).sum()
    }

    /// Non-negative Laplacian of the unit sphere, valid on `|y| = 1`.
    pub fn sphere_laplacian(&self) -> Poly3 {
        let mut flat = Poly3::zero();
        let mut radial = Poly3::zero();
        let mut hess = Poly3::zero();
        for i in 0..3 {
            let di = self.diff(i);
            flat = flat.add(&di.diff(i));
            radial = radial.add(&Poly3::var(i).mul(&di));
            for j in 0..3 {
                hess = hess.add(&Poly3::var(i).mul(&Poly3::var(j)).mul(&di.diff(j)));
            }
        }
        flat.sub(&hess).lin(-1.0, &radial, 2.0)
    }

    /// `Re (y₁ + i y₂)^k`, a degree-`k` spherical harmonic.
    pub fn sectoral_harmonic(k: u32) -> Poly3 {
        let mut out = Poly3::zero();
        let mut binom = 1.0;
        for j in 0..=k {
            if j % 2 == 0 {
                let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
                out.push([k - j, j, 0], sign * binom);
            }
            binom = binom * f64::from(k - j) / f64::from(j + 1);
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SphereCase {
    /// `S²(1/√2) → S^n(1/√2) → S^{n+1}`, totally geodesic.
    SphereInclusion { n: u32 },
    /// `S²(√(3/2)) → S⁴(1/√2) → S⁵` by the quadratic harmonics.
    VeroneseSurface,
}

/// Section given by polynomial ambient components, with a checked tag.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySection {
    pub comps: Vec<Poly3>,
    pub tag: BundleTag,
}

#[derive(Debug, Clone)]
pub struct SphereGeometry {
    pub case: SphereCase,
    /// Squared radius of the domain sphere.
    pub r2: f64,
    pub n_lat: usize,
    pub n_lon: usize,
    pub ambient: usize,
    pub psi: Vec<Poly3>,
    pub phi: Vec<Poly3>,
    pub eta: Vec<Poly3>,
    /// `∂φ_a/∂y_k`.
    pub jac: Vec<[Poly3; 3]>,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereResiduals {
    pub psi_radius: f64,
    pub phi_radius: f64,
    pub energy_density: f64,
    pub tension: f64,
    pub bitension: f64,
}

impl SphereGeometry {
    /// `n_lon` longitudes and `n_lon / 2` Gauss–Legendre latitudes.
    pub fn build(case: SphereCase, n_lon: usize) -> Result<SphereGeometry, OracleError> {
        if n_lon < 16 {
            return Err(OracleError::Resolution(format!("need at least 16 longitudes, got {n_lon}")));
        }
        let y = |i| Poly3::var(i);
        let (r2, psi) = match case {
            SphereCase::SphereInclusion { n } => {
                if n < 2 {
                    return Err(OracleError::Unsupported("sphere inclusion needs n >= 2".into()));
                }
                let mut psi: Vec<Poly3> = (0..3).map(|i| y(i).scale(FRAC_1_SQRT_2)).collect();
                psi.extend((3..=n).map(|_| Poly3::zero()));
                (0.5, psi)
            }
            SphereCase::VeroneseSurface => {
                let s3 = 3f64.sqrt();
                let c = FRAC_1_SQRT_2;
                let sq = |i: usize| y(i).mul(&y(i));
                let psi = vec![
                    y(0).mul(&y(1)).scale(s3 * c),
                    y(0).mul(&y(2)).scale(s3 * c),
                    y(1).mul(&y(2)).scale(s3 * c),
                    sq(0).sub(&sq(1)).scale(0.5 * s3 * c),
                    sq(2).scale(2.0).sub(&sq(0)).sub(&sq(1)).scale(0.5 * c),
                ];
                (1.5, psi)
            }
        };
        let ambient = psi.len() + 1;
        let mut phi = psi.clone();
        phi.push(Poly3::constant(FRAC_1_SQRT_2));
        let mut eta = psi.clone();
        eta.push(Poly3::constant(-FRAC_1_SQRT_2));
        let jac = phi.iter().map(|p| [p.diff(0), p.diff(1), p.diff(2)]).collect();

        let n_lat = n_lon / 2;
        let rule = GaussLegendre::new(NonZeroUsize::new(n_lat).expect("n_lat > 0"));
        let h = 2.0 * std::f64::consts::PI / n_lon as f64;
        let mut nodes = Vec::with_capacity(n_lat * n_lon);
        let mut weights = Vec::with_capacity(n_lat * n_lon);
        for &(x, w) in rule.as_node_weight_pairs() {
            let s = (1.0 - x * x).sqrt();
            for k in 0..n_lon {
                let lon = h * k as f64;
                nodes.push([s * lon.cos(), s * lon.sin(), x]);
                weights.push(w * h * r2);
            }
        }
        Ok(SphereGeometry { case, r2, n_lat, n_lon, ambient, psi, phi, eta, jac, nodes, weights })
    }

    pub fn m(&self) -> f64 {
        2.0
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        let w: Vec<f64> = values.iter().zip(&self.weights).map(|(v, w)| v * w).collect();
        pairwise_sum(&w)
    }

    fn eval_vec(p: &[Poly3], y: [f64; 3]) -> Vec<f64> {
        p.iter().map(|c| c.eval(y)).collect()
    }

    /// `dφ(w)` for `w ∈ T_yS²` in Euclidean coordinates.
    fn push(&self, y: [f64; 3], w: [f64; 3]) -> Vec<f64> {
        self.jac.iter().map(|row| (0..3).map(|k| row[k].eval(y) * w[k]).sum()).collect()
    }

    /// `tr ⟨V, dφ·⟩ dφ· = R⁻² J Π Jᵀ V` at `y`.
    fn tangential(&self, y: [f64; 3], v: &[f64]) -> Vec<f64> {
        let jt: Vec<f64> =
            (0..3).map(|k| self.jac.iter().zip(v).map(|(row, va)| row[k].eval(y) * va).sum()).collect();
        let r: f64 = (0..3).map(|k| y[k] * jt[k]).sum();
        let w = [jt[0] - r * y[0], jt[1] - r * y[1], jt[2] - r * y[2]];
        self.push(y, w).iter().map(|x| x / self.r2).collect()
    }

    fn laplacian(&self, comps: &[Poly3]) -> Vec<Poly3> {
        comps.iter().map(|c| c.sphere_laplacian().scale(1.0 / self.r2)).collect()
    }

    /// `Δ^φ V = P(Δ V) − V^T` evaluated at every node.
    fn rough_laplacian_values(&self, comps: &[Poly3]) -> Vec<Vec<f64>> {
        let lap = self.laplacian(comps);
        self.nodes
            .iter()
            .map(|&y| {
                let phi = Self::eval_vec(&self.phi, y);
                let l = Self::eval_vec(&lap, y);
                let v = Self::eval_vec(comps, y);
                let s = dot(&l, &phi);
                let vt = self.tangential(y, &v);
                l.iter().zip(&phi).zip(&vt).map(|((a, p), t)| a - s * p - t).collect()
            })
            .collect()
    }

    pub fn normal_section(&self, f: &Poly3) -> Result<PolySection, OracleError> {
        self.section(self.eta.iter().map(|e| e.mul(f)).collect(), BundleTag::Normal)
    }

    pub fn gradient_section(&self, f: &Poly3) -> Result<PolySection, OracleError> {
        let g: Vec<Poly3> = (0..3).map(|k| f.diff(k)).collect();
        let radial = (0..3).fold(Poly3::zero(), |a, k| a.add(&Poly3::var(k).mul(&g[k])));
        let tangent: Vec<Poly3> = (0..3).map(|k| g[k].sub(&Poly3::var(k).mul(&radial))).collect();
        let comps = self
            .jac
            .iter()
            .map(|row| (0..3).fold(Poly3::zero(), |a, k| a.add(&row[k].mul(&tangent[k]))).scale(1.0 / self.r2))
            .collect();
        self.section(comps, BundleTag::Tangent)
    }

    pub fn vertical_dims(&self) -> usize {
        match self.case {
            SphereCase::SphereInclusion { n } => n as usize - 2,
            SphereCase::VeroneseSurface => 0,
        }
    }

    /// `f·e_{3+dir}` on the inclusion; the Veronese normal bundle has no
    /// parallel frame.
    pub fn vertical_section(&self, f: &Poly3, dir: usize) -> Result<PolySection, OracleError> {
        if dir >= self.vertical_dims() {
            return Err(OracleError::Unsupported(format!("no vertical direction {dir} for {:?}", self.case)));
        }
        let mut comps = vec![Poly3::zero(); self.ambient];
        comps[3 + dir] = f.clone();
        self.section(comps, BundleTag::Vertical)
    }

    pub fn section(&self, comps: Vec<Poly3>, tag: BundleTag) -> Result<PolySection, OracleError> {
        let values: Vec<Vec<f64>> = self.nodes.iter().map(|&y| Self::eval_vec(&comps, y)).collect();
        let scale = values.iter().map(|v| dot(v, v).sqrt()).fold(1.0, f64::max);
        let tol = 1e-10 * scale;
        for (i, (&y, v)) in self.nodes.iter().zip(&values).enumerate() {
            let phi = Self::eval_vec(&self.phi, y);
            let eta = Self::eval_vec(&self.eta, y);
            let fail = |what: &str, residual: f64| OracleError::Constraint { what: what.into(), residual, node: i };
            let radial = dot(v, &phi).abs();
            if radial > tol {
                return Err(fail("component along φ", radial));
            }
            let e = dot(v, &eta);
            let vt = self.tangential(y, v);
            let norm = |w: Vec<f64>| dot(&w, &w).sqrt();
            match tag {
                BundleTag::Normal => {
                    let r = norm(v.iter().zip(&eta).map(|(a, b)| a - e * b).collect());
                    if r > tol {
                        return Err(fail("component orthogonal to η", r));
                    }
                }
                BundleTag::Tangent => {
                    let r = norm(v.iter().zip(&vt).map(|(a, b)| a - b).collect());
                    if r > tol {
                        return Err(fail("component orthogonal to dφ(TM)", r));
                    }
                }
                BundleTag::Vertical => {
                    if e.abs() > tol {
                        return Err(fail("component along η", e.abs()));
                    }
                    let r = norm(vt);
                    if r > tol {
                        return Err(fail("component along dφ(TM)", r));
                    }
                }
                BundleTag::Mixed => {}
            }
        }
        Ok(PolySection { comps, tag })
    }

    pub fn integrate_square(&self, f: &Poly3) -> f64 {
        let v: Vec<f64> = self.nodes.iter().map(|&y| f.eval(y).powi(2)).collect();
        self.integrate(&v)
    }

    /// `(I(V), V)` from the integrated second-order form of the section's
    /// sub-bundle.
    pub fn quadform(&self, s: &PolySection) -> Result<f64, OracleError> {
        let m = self.m();
        let lap = self.rough_laplacian_values(&s.comps);
        let values: Vec<f64> = self
            .nodes
            .iter()
            .zip(&lap)
            .map(|(&y, l)| {
                let v = Self::eval_vec(&s.comps, y);
                let vv = dot(&v, &v);
                match s.tag {
                    BundleTag::Normal => {
                        let w: Vec<f64> = l.iter().zip(&v).map(|(a, b)| a - m * b).collect();
                        Ok(dot(&w, &w) - 4.0 * m * m * vv)
                    }
                    BundleTag::Tangent => {
                        let w: Vec<f64> = l.iter().zip(&v).map(|(a, b)| a + (1.0 - m) * b).collect();
                        Ok(dot(&w, &w) - m * m * vv)
                    }
                    BundleTag::Vertical => Ok(dot(l, l) - 2.0 * m * dot(l, &v)),
                    BundleTag::Mixed => {
                        Err(OracleError::Unsupported("integrated forms need a pure sub-bundle section".into()))
                    }
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(self.integrate(&values))
    }

    pub fn residuals(&self) -> SphereResiduals {
        let m = self.m();
        // τ(φ) = P(−Δφ), a polynomial because |φ| = 1 on the sphere
        let lap_phi = self.laplacian(&self.phi);
        let radial = lap_phi.iter().zip(&self.phi).fold(Poly3::zero(), |a, (l, p)| a.add(&l.mul(p)));
        let tau: Vec<Poly3> = lap_phi.iter().zip(&self.phi).map(|(l, p)| l.scale(-1.0).add(&radial.mul(p))).collect();
        let lap_tau = self.rough_laplacian_values(&tau);
        let mut out = SphereResiduals { psi_radius: 0.0, phi_radius: 0.0, energy_density: 0.0, tension: 0.0, bitension: 0.0 };
        for (&y, lt) in self.nodes.iter().zip(&lap_tau) {
            let psi = Self::eval_vec(&self.psi, y);
            let phi = Self::eval_vec(&self.phi, y);
            let eta = Self::eval_vec(&self.eta, y);
            let t = Self::eval_vec(&tau, y);
            out.psi_radius = out.psi_radius.max((dot(&psi, &psi).sqrt() - FRAC_1_SQRT_2).abs());
            out.phi_radius = out.phi_radius.max((dot(&phi, &phi).sqrt() - 1.0).abs());
            // |dψ|² = R⁻² Σ_i |J e_i|² over an orthonormal basis of T_yS²
            let (e1, e2) = tangent_frame(y);
            let d1 = self.push(y, e1);
            let d2 = self.push(y, e2);
            let e = 0.5 * (dot(&d1, &d1) + dot(&d2, &d2)) / self.r2;
            out.energy_density = out.energy_density.max((e - 0.5 * m).abs());
            let tr: Vec<f64> = t.iter().zip(&eta).map(|(a, b)| a + m * b).collect();
            out.tension = out.tension.max(dot(&tr, &tr).sqrt());
            let tt = self.tangential(y, &t);
            let b: Vec<f64> = (0..t.len()).map(|a| -lt[a] - (tt[a] - 2.0 * e * t[a])).collect();
            out.bitension = out.bitension.max(dot(&b, &b).sqrt());
        }
        out
    }
}

/// Orthonormal basis of `T_yS²`.
fn tangent_frame(y: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let a = if y[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let d = a[0] * y[0] + a[1] * y[1] + a[2] * y[2];
    let mut e1 = [a[0] - d * y[0], a[1] - d * y[1], a[2] - d * y[2]];
    let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1.iter_mut().for_each(|x| *x /= n);
    let e2 = [y[1] * e1[2] - y[2] * e1[1], y[2] * e1[0] - y[0] * e1[2], y[0] * e1[1] - y[1] * e1[0]];
    (e1, e2)
}
