//! Pointwise and integrated identities for tangent fields on the flat cases.
//!
//! Fields `X = Σ X^i ∂_i` are given by coordinate components. Both domains
//! are flat, so `Ric = 0`, coordinate fields are parallel and
//! `tr ∇²X = Σ c_i⁻¹ ∂_i∂_i X`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::flat::{combo, dot, scale, FlatCase, FlatGeometry, Scalar, Vector};
use super::fourier::band_max;
use super::trig::TrigPoly;
use super::OracleError;

/// Residuals of the identities for one tangent field, each normalized by
/// the size of the quantities compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// `∫(div X)² − ⟨tr ∇²X + Ric X, X⟩ = ½∫|L_X g|²`.
    pub yano: f64,
    /// `Δ^φ V = Δ^ψ V + 2(div X)η + V` for `V = dφ(X)`, pointwise.
    pub bochner: f64,
    /// `J^ψ(V)` from the curvature of `S^n(1/√2)` equals `Δ^ψ V + 2(1−m)V`.
    pub jacobi: f64,
    /// `(I(V),V) = ∫|J^ψ V|² + 4(div X)² + 2m⟨J^ψ V, V⟩`, with the left side
    /// from the full fourth-order operator.
    pub jacobi_decomposition: f64,
    /// `min (|L_X g|² − (4/m)(div X)²)`, negative part only.
    pub lie_derivative_bound: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

impl FlatGeometry {
    pub fn sample_field(&self, x: &[TrigPoly]) -> Result<Vec<Scalar>, OracleError> {
        x.iter().map(|f| self.sample(f)).collect()
    }

    pub fn divergence(&self, x: &[Scalar]) -> Result<Scalar, OracleError> {
        let mut out = Scalar::constant(self.len(), 0.0);
        for (i, xi) in x.iter().enumerate() {
            out = out.lin(1.0, &self.partial_scalar(xi, i)?, 1.0);
        }
        Ok(out)
    }

    /// `|L_X g|²` and `(div X)²` at every node.
    pub fn lie_derivative_norms(&self, x: &[Scalar]) -> Result<(Scalar, Scalar), OracleError> {
        let m = self.m;
        let c = self.metric;
        let d: Vec<Vec<Scalar>> =
            (0..m).map(|i| (0..m).map(|j| self.partial_scalar(&x[j], i)).collect()).collect::<Result<_, _>>()?;
        let mut norm = Scalar::constant(self.len(), 0.0);
        for i in 0..m {
            for j in 0..m {
                // (L_X g)_{ij} = c_j ∂_i X^j + c_i ∂_j X^i
                let l = d[i][j].lin(c[j], &d[j][i], c[i]);
                norm = norm.lin(1.0, &l.mul(&l), 1.0 / (c[i] * c[j]));
            }
        }
        let div = self.divergence(x)?;
        Ok((norm, div.mul(&div)))
    }

    pub fn identity_residuals(&self, x: &[Scalar]) -> Result<IdentityResiduals, OracleError> {
        let m = self.m as f64;
        let c = self.metric;
        let div = self.divergence(x)?;
        let (lie, div2) = self.lie_derivative_norms(x)?;

        let mut inner = Scalar::constant(self.len(), 0.0);
        for k in 0..self.m {
            let mut trace = Scalar::constant(self.len(), 0.0);
            for i in 0..self.m {
                let d2 = self.partial_scalar(&self.partial_scalar(&x[k], i)?, i)?;
                trace = trace.lin(1.0, &d2, 1.0 / c[i]);
            }
            inner = inner.lin(1.0, &trace.mul(&x[k]), c[k]);
        }
        let lhs = self.integrate(&div2) - self.integrate(&inner);
        let rhs = 0.5 * self.integrate(&lie);
        let yano = rel(lhs, rhs);

        let v = self.push_forward(x);
        let lap_phi = self.lap(&v)?;
        let lap_psi = self.lap_psi(&v)?;
        let bochner_rhs = combo(&[(1.0, &lap_psi), (2.0, &scale(&div, &self.eta)), (1.0, &v)]);
        let bochner = combo(&[(1.0, &lap_phi), (-1.0, &bochner_rhs)]).max_norm() / lap_phi.max_norm().max(1.0);

        // tr R(dψ, V)dψ with R(X,Y)Z = 2(⟨Y,Z⟩X − ⟨X,Z⟩Y) on the radius 1/√2 sphere
        let dpsi: Vec<Vector> = (0..self.m).map(|i| self.partial(&self.psi, i)).collect::<Result<_, _>>()?;
        let mut curvature = Vector::zeros(self.ambient, self.len());
        for i in 0..self.m {
            let t = combo(&[(1.0, &scale(&dot(&v, &dpsi[i]), &dpsi[i])), (-1.0, &scale(&dot(&dpsi[i], &dpsi[i]), &v))]);
            curvature = combo(&[(1.0, &curvature), (2.0 / c[i], &t)]);
        }
        let jac = combo(&[(1.0, &lap_psi), (1.0, &curvature)]);
        let jac_closed = combo(&[(1.0, &lap_psi), (2.0 * (1.0 - m), &v)]);
        let jacobi = combo(&[(1.0, &jac), (-1.0, &jac_closed)]).max_norm() / jac.max_norm().max(1.0);

        let iv = self.second_variation(&v)?;
        let full = self.integrate(&dot(&iv, &v));
        let split = self.integrate(&dot(&jac, &jac)) + 4.0 * self.integrate(&div2) + 2.0 * m * self.integrate(&dot(&jac, &v));
        let jacobi_decomposition = rel(full, split);

        let margin = lie.lin(1.0, &div2, -4.0 / m);
        let worst = margin.v.iter().cloned().fold(f64::INFINITY, f64::min);
        let lie_derivative_bound = (-worst).max(0.0) / lie.max_abs().max(1.0);

        Ok(IdentityResiduals { yano, bochner, jacobi, jacobi_decomposition, lie_derivative_bound })
    }

    /// `max |4|tr ∇dψ(∇.X, .)|² − 32m² f²| / max(32m² f²)` for `X = grad f`.
    pub fn second_fundamental_trace_residual(&self, f: &TrigPoly) -> Result<f64, OracleError> {
        let m = self.m as f64;
        let c = self.metric;
        let x = self.sample_field(&self.gradient(f))?;
        let dpsi: Vec<Vector> = (0..self.m).map(|i| self.partial(&self.psi, i)).collect::<Result<_, _>>()?;
        // ∇dψ(∂_i, ∂_j) = P_ψ(∂_i ∂_j ψ), coordinate fields being parallel
        let mut hess = Vec::new();
        for i in 0..self.m {
            let row: Vec<Vector> =
                (0..self.m).map(|j| Ok(self.project_psi(&self.partial(&dpsi[j], i)?))).collect::<Result<_, OracleError>>()?;
            hess.push(row);
        }
        let mut t = Vector::zeros(self.ambient, self.len());
        for i in 0..self.m {
            for j in 0..self.m {
                let dxj = self.partial_scalar(&x[j], i)?;
                t = combo(&[(1.0, &t), (1.0 / c[i], &scale(&dxj, &hess[j][i]))]);
            }
        }
        let lhs = dot(&t, &t);
        let fs = self.sample(f)?;
        let rhs = fs.mul(&fs);
        let k = 32.0 * m * m;
        let worst = lhs.v.iter().zip(&rhs.v).map(|(a, b)| (4.0 * a - k * b).abs()).fold(0.0, f64::max);
        Ok(worst / (k * rhs.max_abs()).max(1.0))
    }

    /// Dimension of the space of trigonometric Killing fields with modes up to
    /// `max_mode`, found as the null space of `X ↦ L_X g` on the grid.
    pub fn killing_dimension(&self, max_mode: i32) -> Result<usize, OracleError> {
        let mut basis: Vec<Vec<TrigPoly>> = Vec::new();
        let qmax = if self.m == 1 { 0 } else { max_mode };
        for p in 0..=max_mode {
            for q in -qmax..=qmax {
                if p == 0 && q < 0 {
                    continue;
                }
                let waves = if p == 0 && q == 0 { vec![TrigPoly::constant(1.0)] } else { vec![TrigPoly::cos(p, q), TrigPoly::sin(p, q)] };
                for w in waves {
                    for comp in 0..self.m {
                        let mut x = vec![TrigPoly::default(); self.m];
                        x[comp] = w.clone();
                        basis.push(x);
                    }
                }
            }
        }
        let c = self.metric;
        let mut columns = Vec::new();
        for x in &basis {
            let xs = self.sample_field(x)?;
            let mut col = Vec::new();
            for i in 0..self.m {
                for j in i..self.m {
                    let l = self.partial_scalar(&xs[j], i)?.lin(c[j], &self.partial_scalar(&xs[i], j)?, c[i]);
                    col.extend(l.v);
                }
            }
            columns.push(col);
        }
        let rows = columns[0].len();
        let a = DMatrix::from_fn(rows, columns.len(), |r, k| columns[k][r]);
        let sv = a.singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        let rank = sv.iter().filter(|s| **s > 1e-9 * top).count();
        Ok(basis.len() - rank)
    }

    /// Energy `½∫|dφ_s|²` of an arbitrary sampled map (smooth, not
    /// band-limited, differentiated with the full grid band).
    fn energy_of(&self, map: &Vector) -> Result<f64, OracleError> {
        let cap = self.sp.capacity();
        let full = Vector { c: map.c.clone(), band: [cap, if self.m == 2 { cap } else { 0 }] };
        let mut e = Scalar::constant(self.len(), 0.0);
        for i in 0..self.m {
            let d = self.partial(&full, i)?;
            e = e.lin(1.0, &dot(&d, &d), 0.5 / self.metric[i]);
        }
        Ok(self.integrate(&e))
    }

    /// Central-difference derivative of the energy along `φ_s = (φ+sV)/|φ+sV|`
    /// against `−∫⟨τ(φ), V⟩`; returns `(finite_difference, from_tension)`.
    pub fn first_variation_check(&self, v: &Vector, step: f64) -> Result<(f64, f64), OracleError> {
        let moved = |s: f64| -> Vector {
            let raw = combo(&[(1.0, &self.phi), (s, v)]);
            let n = dot(&raw, &raw);
            let inv = Scalar { v: n.v.iter().map(|x| 1.0 / x.sqrt()).collect(), band: band_max(n.band, n.band) };
            scale(&inv, &raw)
        };
        let fd = (self.energy_of(&moved(step))? - self.energy_of(&moved(-step))?) / (2.0 * step);
        let exact = -self.integrate(&dot(&self.tau, v));
        Ok((fd, exact))
    }

    pub fn is_torus(&self) -> bool {
        self.case == FlatCase::TorusClifford
    }
}

/// Random tangent field with trigonometric components of degree `≤ degree`.
pub fn random_field<R: rand::Rng>(rng: &mut R, g: &FlatGeometry, degree: i32) -> Vec<TrigPoly> {
    (0..g.m).map(|_| TrigPoly::random(rng, degree, g.m)).collect()
}
