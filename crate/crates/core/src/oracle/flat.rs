//! The circle and Clifford-torus maps on uniform periodic grids.
//!
//! Both domains are flat with constant diagonal metric `g = Σ c_i dx_i²`, so
//! coordinate vector fields are parallel and every covariant derivative along
//! `φ` is an ambient derivative followed by projection onto `T S^{N-1}`.

use serde::{Deserialize, Serialize};

use super::fourier::{band_max, band_sum, pairwise_sum, Band, Spectral};
use super::trig::TrigPoly;
use super::{BundleTag, OracleError};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlatCase {
    /// `S¹(1/√2) → S^n(1/√2) → S^{n+1}`, a great circle of the tropic.
    CircleInclusion { n: u32 },
    /// `S¹(1/2) × S¹(1/2) → S³(1/√2) → S⁴`.
    TorusClifford,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scalar {
    pub v: Vec<f64>,
    pub band: Band,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    pub c: Vec<Vec<f64>>,
    pub band: Band,
}

/// Sampled section of `φ⁻¹T S^{N-1}` with a checked bundle tag.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedSection {
    pub values: Vector,
    pub tag: BundleTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiharmonicityResiduals {
    pub energy_density: f64,
    pub tension: f64,
    pub bitension: f64,
}

#[derive(Debug, Clone)]
pub struct FlatGeometry {
    pub case: FlatCase,
    pub sp: Spectral,
    /// Metric coefficients `c_i` (only the first `m` are used).
    pub metric: [f64; 2],
    pub m: usize,
    pub ambient: usize,
    pub psi: Vector,
    pub phi: Vector,
    pub eta: Vector,
    pub dphi: Vec<Vector>,
    pub tau: Vector,
    /// `∇_i τ` for each parameter direction.
    pub dtau: Vec<Vector>,
    /// Unit normal of the torus inside the tropic.
    pub xi: Option<Vector>,
}

impl Scalar {
    pub fn constant(len: usize, c: f64) -> Scalar {
        Scalar { v: vec![c; len], band: [0, 0] }
    }

    pub fn max_abs(&self) -> f64 {
        self.v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        Scalar { v: self.v.iter().zip(&o.v).map(|(a, b)| a * b).collect(), band: band_sum(self.band, o.band) }
    }

    pub fn lin(&self, a: f64, o: &Scalar, b: f64) -> Scalar {
        Scalar { v: self.v.iter().zip(&o.v).map(|(x, y)| a * x + b * y).collect(), band: band_max(self.band, o.band) }
    }
}

impl Vector {
    pub fn zeros(dim: usize, len: usize) -> Vector {
        Vector { c: vec![vec![0.0; len]; dim], band: [0, 0] }
    }

    pub fn len(&self) -> usize {
        self.c[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.c[0].is_empty()
    }

    pub fn at(&self, i: usize) -> Vec<f64> {
        self.c.iter().map(|c| c[i]).collect()
    }

    pub fn scaled(&self, s: f64) -> Vector {
        Vector { c: self.c.iter().map(|c| c.iter().map(|x| s * x).collect()).collect(), band: self.band }
    }

    /// Pointwise maximum of the Euclidean norm.
    pub fn max_norm(&self) -> f64 {
        (0..self.len()).map(|i| self.c.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt()).fold(0.0, f64::max)
    }
}

/// `Σ a_k V_k`.
pub fn combo(terms: &[(f64, &Vector)]) -> Vector {
    let (dim, len) = (terms[0].1.c.len(), terms[0].1.len());
    let mut out = Vector::zeros(dim, len);
    for (a, v) in terms {
        for (o, c) in out.c.iter_mut().zip(&v.c) {
            for (x, y) in o.iter_mut().zip(c) {
                *x += a * y;
            }
        }
        out.band = band_max(out.band, v.band);
    }
    out
}

pub fn dot(a: &Vector, b: &Vector) -> Scalar {
    let mut v = vec![0.0; a.len()];
    for (x, y) in a.c.iter().zip(&b.c) {
        for i in 0..v.len() {
            v[i] += x[i] * y[i];
        }
    }
    Scalar { v, band: band_sum(a.band, b.band) }
}

pub fn scale(s: &Scalar, v: &Vector) -> Vector {
    Vector {
        c: v.c.iter().map(|c| c.iter().zip(&s.v).map(|(x, f)| x * f).collect()).collect(),
        band: band_sum(s.band, v.band),
    }
}

impl FlatGeometry {
    pub fn build(case: FlatCase, grid: usize) -> Result<FlatGeometry, OracleError> {
        let (dims, metric) = match case {
            FlatCase::CircleInclusion { n } => {
                if n < 1 {
                    return Err(OracleError::Unsupported("circle inclusion needs n >= 1".into()));
                }
                (1, [0.5, 0.0])
            }
            FlatCase::TorusClifford => (2, [0.25, 0.25]),
        };
        let sp = Spectral::new(grid, dims)?;
        let len = sp.len();
        let (ambient, psi_rows): (usize, Vec<TrigPoly>) = match case {
            FlatCase::CircleInclusion { n } => {
                let mut rows = vec![TrigPoly::cos(1, 0).scale(FRAC_1_SQRT_2), TrigPoly::sin(1, 0).scale(FRAC_1_SQRT_2)];
                rows.extend((2..=n).map(|_| TrigPoly::default()));
                (n as usize + 2, rows)
            }
            FlatCase::TorusClifford => (
                5,
                vec![
                    TrigPoly::cos(1, 0).scale(0.5),
                    TrigPoly::sin(1, 0).scale(0.5),
                    TrigPoly::cos(0, 1).scale(0.5),
                    TrigPoly::sin(0, 1).scale(0.5),
                ],
            ),
        };
        let sample = |f: &TrigPoly| -> Vec<f64> {
            (0..len)
                .map(|i| {
                    let [u, v] = sp.coords(i);
                    f.eval(u, v)
                })
                .collect()
        };
        let band = if dims == 1 { [1, 0] } else { [1, 1] };
        let mut psi = Vector { c: psi_rows.iter().map(sample).collect(), band };
        psi.c.push(vec![0.0; len]);
        let mut phi = psi.clone();
        phi.c[ambient - 1] = vec![FRAC_1_SQRT_2; len];
        let mut eta = psi.clone();
        eta.c[ambient - 1] = vec![-FRAC_1_SQRT_2; len];
        let xi = match case {
            FlatCase::TorusClifford => {
                let s = std::f64::consts::SQRT_2;
                let mut c = psi.c.clone();
                for (k, row) in c.iter_mut().enumerate() {
                    let sign = if k < 2 { s } else { -s };
                    row.iter_mut().for_each(|x| *x *= sign);
                }
                c[ambient - 1] = vec![0.0; len];
                Some(Vector { c, band })
            }
            FlatCase::CircleInclusion { .. } => None,
        };
        let mut g = FlatGeometry {
            case,
            sp,
            metric,
            m: dims,
            ambient,
            psi,
            phi,
            eta,
            dphi: Vec::new(),
            tau: Vector::zeros(ambient, len),
            dtau: Vec::new(),
            xi,
        };
        g.dphi = (0..dims).map(|i| g.partial(&g.phi, i)).collect::<Result<_, _>>()?;
        let mut tau = Vector::zeros(ambient, len);
        for i in 0..dims {
            let second = g.cov(&g.dphi[i], i)?;
            tau = combo(&[(1.0, &tau), (1.0 / metric[i], &second)]);
        }
        g.dtau = (0..dims).map(|i| g.cov(&tau, i)).collect::<Result<_, _>>()?;
        g.tau = tau;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.sp.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn grid(&self) -> usize {
        self.sp.n()
    }

    pub fn sample(&self, f: &TrigPoly) -> Result<Scalar, OracleError> {
        let band = f.band();
        self.sp.check_band(band)?;
        if self.m == 1 && band[1] != 0 {
            return Err(OracleError::Unsupported("second-parameter modes on the circle".into()));
        }
        let v = (0..self.len())
            .map(|i| {
                let [u, w] = self.sp.coords(i);
                f.eval(u, w)
            })
            .collect();
        Ok(Scalar { v, band })
    }

    /// `∫_M s v_g` by the trapezoid rule, exact for band `< N`.
    pub fn integrate(&self, s: &Scalar) -> f64 {
        let h = 2.0 * std::f64::consts::PI / self.grid() as f64;
        let w: f64 = (0..self.m).map(|i| h * self.metric[i].sqrt()).product();
        pairwise_sum(&s.v) * w
    }

    pub fn partial(&self, v: &Vector, axis: usize) -> Result<Vector, OracleError> {
        let c = v.c.iter().map(|c| self.sp.diff(c, axis, 1, v.band)).collect::<Result<_, _>>()?;
        Ok(Vector { c, band: v.band })
    }

    pub fn partial_scalar(&self, s: &Scalar, axis: usize) -> Result<Scalar, OracleError> {
        Ok(Scalar { v: self.sp.diff(&s.v, axis, 1, s.band)?, band: s.band })
    }

    /// Orthogonal projection onto `T_φ S^{N-1}`.
    pub fn project(&self, v: &Vector) -> Vector {
        let s = dot(v, &self.phi);
        combo(&[(1.0, v), (-1.0, &scale(&s, &self.phi))])
    }

    /// Projection onto the tangent space of the tropic `S^n(1/√2)` at `ψ`.
    pub fn project_psi(&self, v: &Vector) -> Vector {
        let s = dot(v, &self.psi);
        combo(&[(1.0, v), (-2.0, &scale(&s, &self.psi))])
    }

    /// `∇^φ_{∂_i} V`.
    pub fn cov(&self, v: &Vector, axis: usize) -> Result<Vector, OracleError> {
        Ok(self.project(&self.partial(v, axis)?))
    }

    /// Rough Laplacian `Δ^φ V = −Σ c_i⁻¹ ∇_i ∇_i V` (non-negative convention).
    pub fn lap(&self, v: &Vector) -> Result<Vector, OracleError> {
        let mut out = Vector::zeros(self.ambient, self.len());
        for i in 0..self.m {
            let d2 = self.cov(&self.cov(v, i)?, i)?;
            out = combo(&[(1.0, &out), (-1.0 / self.metric[i], &d2)]);
        }
        Ok(out)
    }

    /// Rough Laplacian of `ψ⁻¹T S^n(1/√2)`.
    pub fn lap_psi(&self, v: &Vector) -> Result<Vector, OracleError> {
        let mut out = Vector::zeros(self.ambient, self.len());
        for i in 0..self.m {
            let d1 = self.project_psi(&self.partial(v, i)?);
            let d2 = self.project_psi(&self.partial(&d1, i)?);
            out = combo(&[(1.0, &out), (-1.0 / self.metric[i], &d2)]);
        }
        Ok(out)
    }

    /// `tr ⟨V, dφ·⟩ dφ·`, the part of `V` tangent to the image.
    pub fn tangential(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.ambient, self.len());
        for i in 0..self.m {
            let t = scale(&dot(v, &self.dphi[i]), &self.dphi[i]);
            out = combo(&[(1.0, &out), (1.0 / self.metric[i], &t)]);
        }
        out
    }

    /// `Σ c_i⁻¹ ⟨A_i, B_i⟩`.
    fn trace_pair(&self, a: &[Vector], b: &[Vector]) -> Scalar {
        let mut out = Scalar::constant(self.len(), 0.0);
        for i in 0..self.m {
            out = out.lin(1.0, &dot(&a[i], &b[i]), 1.0 / self.metric[i]);
        }
        out
    }

    /// `Σ c_i⁻¹ ⟨U, A_i⟩ dφ(∂_i)`.
    fn trace_along(&self, u: &Vector, a: &[Vector]) -> Vector {
        let mut out = Vector::zeros(self.ambient, self.len());
        for i in 0..self.m {
            let t = scale(&dot(u, &a[i]), &self.dphi[i]);
            out = combo(&[(1.0, &out), (1.0 / self.metric[i], &t)]);
        }
        out
    }

    pub fn energy_density_phi(&self) -> Scalar {
        self.trace_pair(&self.dphi, &self.dphi)
    }

    /// The second variation operator of the bienergy into the unit sphere,
    /// every term evaluated as written.
    pub fn second_variation(&self, v: &Vector) -> Result<Vector, OracleError> {
        let dphi2 = self.energy_density_phi();
        let tau = &self.tau;
        let lap_v = self.lap(v)?;
        let dv: Vec<Vector> = (0..self.m).map(|i| self.cov(v, i)).collect::<Result<_, _>>()?;
        let vt = self.tangential(v);

        let t1 = self.lap(&lap_v)?;
        let t2 = self.lap(&combo(&[(1.0, &vt), (-1.0, &scale(&dphi2, v))]))?;
        let dtau_dphi = self.trace_pair(&self.dtau, &self.dphi);
        let t3 = scale(&dtau_dphi.lin(2.0, &dot(tau, tau), 1.0), v);
        let t4 = self.trace_along(v, &self.dtau);
        let mut t5 = Vector::zeros(self.ambient, self.len());
        for i in 0..self.m {
            let t = scale(&dot(tau, &dv[i]), &self.dphi[i]);
            t5 = combo(&[(1.0, &t5), (1.0 / self.metric[i], &t)]);
        }
        let t6 = scale(&dot(tau, v), tau);
        let t7 = self.tangential(&lap_v);
        let t8 = self.tangential(&vt);
        let t9 = scale(&dphi2, &vt);
        let dv_dphi = self.trace_pair(&dv, &self.dphi);
        let t10 = scale(&dv_dphi, tau);
        let t11 = scale(&dphi2, &lap_v);
        let t12 = scale(&dphi2.mul(&dphi2), v);
        Ok(combo(&[
            (1.0, &t1),
            (1.0, &t2),
            (1.0, &t3),
            (-2.0, &t4),
            (-2.0, &t5),
            (-1.0, &t6),
            (1.0, &t7),
            (1.0, &t8),
            (-2.0, &t9),
            (2.0, &t10),
            (-1.0, &t11),
            (1.0, &t12),
        ]))
    }

    /// `(I(V), W) = ∫ ⟨I(V), W⟩ v_g`.
    pub fn bilinear(&self, v: &DiscretizedSection, w: &DiscretizedSection) -> Result<f64, OracleError> {
        let iv = self.second_variation(&v.values)?;
        Ok(self.integrate(&dot(&iv, &w.values)))
    }

    /// `∫ |V|² v_g`.
    pub fn norm_sq(&self, s: &DiscretizedSection) -> f64 {
        self.integrate(&dot(&s.values, &s.values))
    }

    /// `sqrt(∫ |U|² v_g)`.
    pub fn l2_norm(&self, u: &Vector) -> f64 {
        self.integrate(&dot(u, u)).max(0.0).sqrt()
    }

    /// `(I(V), V)` from the integrated second-order form of its sub-bundle.
    pub fn quadform(&self, s: &DiscretizedSection) -> Result<f64, OracleError> {
        let v = &s.values;
        let lap_v = self.lap(v)?;
        let m = self.m as f64;
        let integrand = match s.tag {
            BundleTag::Normal => {
                let w = combo(&[(1.0, &lap_v), (-m, v)]);
                dot(&w, &w).lin(1.0, &dot(v, v), -4.0 * m * m)
            }
            BundleTag::Tangent => {
                let w = combo(&[(1.0, &lap_v), (1.0 - m, v)]);
                dot(&w, &w).lin(1.0, &dot(v, v), -m * m)
            }
            BundleTag::Vertical => dot(&lap_v, &lap_v).lin(1.0, &dot(&lap_v, v), -2.0 * m),
            BundleTag::Mixed => {
                return Err(OracleError::Unsupported("integrated forms need a pure sub-bundle section".into()))
            }
        };
        Ok(self.integrate(&integrand))
    }

    pub fn biharmonicity_residuals(&self) -> Result<BiharmonicityResiduals, OracleError> {
        let m = self.m as f64;
        let dpsi: Vec<Vector> = (0..self.m).map(|i| self.partial(&self.psi, i)).collect::<Result<_, _>>()?;
        let e = self.trace_pair(&dpsi, &dpsi);
        let energy_density = e.v.iter().fold(0.0f64, |a, x| a.max((0.5 * x - 0.5 * m).abs()));
        let tension = combo(&[(1.0, &self.tau), (m, &self.eta)]).max_norm();
        // τ₂ = −Δτ − tr R(dφ, τ)dφ with R(X,Y)Z = ⟨Y,Z⟩X − ⟨X,Z⟩Y
        let lap_tau = self.lap(&self.tau)?;
        let curv = combo(&[(1.0, &self.tangential(&self.tau)), (-1.0, &scale(&self.energy_density_phi(), &self.tau))]);
        let bitension = combo(&[(-1.0, &lap_tau), (-1.0, &curv)]).max_norm();
        Ok(BiharmonicityResiduals { energy_density, tension, bitension })
    }

    /// `(max ||ψ| − 1/√2|, max ||φ| − 1|)`.
    pub fn radius_residuals(&self) -> (f64, f64) {
        let r = |v: &Vector, target: f64| dot(v, v).v.iter().fold(0.0f64, |a, x| a.max((x.sqrt() - target).abs()));
        (r(&self.psi, FRAC_1_SQRT_2), r(&self.phi, 1.0))
    }

    // Sections.

    pub fn normal_section(&self, f: &TrigPoly) -> Result<DiscretizedSection, OracleError> {
        let fs = self.sample(f)?;
        self.section(scale(&fs, &self.eta), BundleTag::Normal)
    }

    /// Coordinate components of `grad f`.
    pub fn gradient(&self, f: &TrigPoly) -> Vec<TrigPoly> {
        (0..self.m).map(|i| f.diff(i).scale(1.0 / self.metric[i])).collect()
    }

    /// `dφ(X)` for `X = Σ X^i ∂_i`.
    pub fn push_forward(&self, x: &[Scalar]) -> Vector {
        let mut out = Vector::zeros(self.ambient, self.len());
        for (i, xi) in x.iter().enumerate() {
            out = combo(&[(1.0, &out), (1.0, &scale(xi, &self.dphi[i]))]);
        }
        out
    }

    pub fn tangent_section(&self, x: &[TrigPoly]) -> Result<DiscretizedSection, OracleError> {
        let xs: Vec<Scalar> = x.iter().map(|f| self.sample(f)).collect::<Result<_, _>>()?;
        self.section(self.push_forward(&xs), BundleTag::Tangent)
    }

    pub fn gradient_section(&self, f: &TrigPoly) -> Result<DiscretizedSection, OracleError> {
        self.tangent_section(&self.gradient(f))
    }

    /// `f·e` for the `dir`-th parallel vertical direction: `e_{2+dir}` on the
    /// circle, `ξ` on the torus.
    pub fn vertical_section(&self, f: &TrigPoly, dir: usize) -> Result<DiscretizedSection, OracleError> {
        let fs = self.sample(f)?;
        let e = match (&self.case, &self.xi) {
            (FlatCase::TorusClifford, Some(xi)) if dir == 0 => xi.clone(),
            (FlatCase::CircleInclusion { n }, _) if 2 + dir <= *n as usize => {
                let mut e = Vector::zeros(self.ambient, self.len());
                e.c[2 + dir] = vec![1.0; self.len()];
                e
            }
            _ => return Err(OracleError::Unsupported(format!("no vertical direction {dir} for {:?}", self.case))),
        };
        self.section(scale(&fs, &e), BundleTag::Vertical)
    }

    pub fn vertical_dims(&self) -> usize {
        match self.case {
            FlatCase::CircleInclusion { n } => n as usize - 1,
            FlatCase::TorusClifford => 1,
        }
    }

    /// Projection of a random ambient trigonometric field, tagged mixed.
    pub fn random_section<R: rand::Rng>(&self, rng: &mut R, degree: i32) -> Result<DiscretizedSection, OracleError> {
        let mut raw = Vector::zeros(self.ambient, self.len());
        for k in 0..self.ambient {
            let s = self.sample(&TrigPoly::random(rng, degree, self.m))?;
            raw.c[k] = s.v;
            raw.band = band_max(raw.band, s.band);
        }
        self.section(self.project(&raw), BundleTag::Mixed)
    }

    /// Validates tangency to the sphere and the bundle tag at every node.
    pub fn section(&self, values: Vector, tag: BundleTag) -> Result<DiscretizedSection, OracleError> {
        let tol = 1e-10 * values.max_norm().max(1.0);
        let check = |what: &str, s: &Vector| -> Result<(), OracleError> {
            for i in 0..s.len() {
                let r = s.c.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt();
                if r > tol {
                    return Err(OracleError::Constraint { what: what.to_string(), residual: r, node: i });
                }
            }
            Ok(())
        };
        let radial = scale(&dot(&values, &self.phi), &self.phi);
        check("component along φ", &radial)?;
        let along_eta = scale(&dot(&values, &self.eta), &self.eta);
        let tangential = self.tangential(&values);
        match tag {
            BundleTag::Normal => check("component orthogonal to η", &combo(&[(1.0, &values), (-1.0, &along_eta)]))?,
            BundleTag::Tangent => check("component orthogonal to dφ(TM)", &combo(&[(1.0, &values), (-1.0, &tangential)]))?,
            BundleTag::Vertical => {
                check("component along η", &along_eta)?;
                check("component along dφ(TM)", &tangential)?;
            }
            BundleTag::Mixed => {}
        }
        Ok(DiscretizedSection { values, tag })
    }
}

pub fn add_sections(a: &DiscretizedSection, sa: f64, b: &DiscretizedSection, sb: f64) -> DiscretizedSection {
    let tag = if a.tag == b.tag { a.tag } else { BundleTag::Mixed };
    DiscretizedSection { values: combo(&[(sa, &a.values), (sb, &b.values)]), tag }
}
