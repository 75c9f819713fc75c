//! Trigonometric polynomials `Σ a·cos(p·u + q·v + φ)` on the one- or two-torus.

use rand::Rng;

use super::fourier::Band;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm {
    pub amp: f64,
    pub p: i32,
    pub q: i32,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly {
    pub terms: Vec<TrigTerm>,
}

impl TrigPoly {
    pub fn constant(c: f64) -> Self {
        TrigPoly { terms: vec![TrigTerm { amp: c, p: 0, q: 0, phase: 0.0 }] }
    }

    /// `amp·cos(p·u + q·v + phase)`.
    pub fn wave(amp: f64, p: i32, q: i32, phase: f64) -> Self {
        TrigPoly { terms: vec![TrigTerm { amp, p, q, phase }] }
    }

    pub fn cos(p: i32, q: i32) -> Self {
        Self::wave(1.0, p, q, 0.0)
    }

    pub fn sin(p: i32, q: i32) -> Self {
        Self::wave(1.0, p, q, -std::f64::consts::FRAC_PI_2)
    }

    /// `cos(p·u)·cos(q·v)`, an eigenfunction whose Hessian is diagonal.
    pub fn cos_cos(p: i32, q: i32) -> Self {
        if q == 0 || p == 0 {
            return Self::cos(p, q);
        }
        TrigPoly {
            terms: vec![
                TrigTerm { amp: 0.5, p, q, phase: 0.0 },
                TrigTerm { amp: 0.5, p, q: -q, phase: 0.0 },
            ],
        }
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        TrigPoly { terms }
    }

    pub fn scale(&self, s: f64) -> TrigPoly {
        TrigPoly { terms: self.terms.iter().map(|t| TrigTerm { amp: t.amp * s, ..*t }).collect() }
    }

    pub fn band(&self) -> Band {
        self.terms.iter().fold([0, 0], |b, t| {
            [b[0].max(t.p.unsigned_abs() as usize), b[1].max(t.q.unsigned_abs() as usize)]
        })
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.amp * (f64::from(t.p) * u + f64::from(t.q) * v + t.phase).cos())
            .sum()
    }

    /// Partial derivative along parameter `axis`.
    pub fn diff(&self, axis: usize) -> TrigPoly {
        TrigPoly {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let k = if axis == 0 { t.p } else { t.q };
                    TrigTerm { amp: t.amp * f64::from(k), phase: t.phase + std::f64::consts::FRAC_PI_2, ..*t }
                })
                .collect(),
        }
    }

    /// Random coefficients on every mode with `|p|, |q| ≤ degree` (`q = 0`
    /// when `dims = 1`), amplitudes uniform in `[-1, 1]`.
    pub fn random<R: Rng>(rng: &mut R, degree: i32, dims: usize) -> TrigPoly {
        let qmax = if dims == 1 { 0 } else { degree };
        let mut terms = Vec::new();
        for p in 0..=degree {
            for q in -qmax..=qmax {
                if p == 0 && q < 0 {
                    continue;
                }
                let a: f64 = rng.gen_range(-1.0..1.0);
                let b: f64 = rng.gen_range(-1.0..1.0);
                terms.push(TrigTerm { amp: a, p, q, phase: 0.0 });
                if p != 0 || q != 0 {
                    terms.push(TrigTerm { amp: b, p, q, phase: -std::f64::consts::FRAC_PI_2 });
                }
            }
        }
        TrigPoly { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_matches_finite_difference() {
        let f = TrigPoly::cos_cos(2, 3).add(&TrigPoly::sin(1, -1).scale(0.3));
        let (u, v, h) = (0.7, -1.3, 1e-6);
        let fd = (f.eval(u + h, v) - f.eval(u - h, v)) / (2.0 * h);
        assert!((f.diff(0).eval(u, v) - fd).abs() < 1e-8);
        assert!((f.eval(u, v) - ((2.0 * u).cos() * (3.0 * v).cos() + 0.3 * (u - v).sin())).abs() < 1e-14);
        assert_eq!(f.band(), [2, 3]);
    }
}
