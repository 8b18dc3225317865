//! Dense complex polynomials, kept only as far as singularity analysis needs
//! them: products, sums and roots.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Coefficients in ascending order, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Poly(Vec<Complex64>);

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Poly(coeffs)
    }

    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    pub fn identity() -> Self {
        Poly(vec![ZERO, ONE])
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.0[self.0.len() - 1]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Poly::new(self.0.iter().map(|&a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        let lead = self.leading();
        Poly(self.0.iter().map(|&a| a / lead).collect())
    }

    pub fn add(&self, other: &Poly) -> Self {
        let n = self.0.len().max(other.0.len());
        let coeffs = (0..n)
            .map(|k| self.0.get(k).copied().unwrap_or(ZERO) + other.0.get(k).copied().unwrap_or(ZERO))
            .collect();
        Poly::new(coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Self {
        let mut out = vec![ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::constant(ONE), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    fn derivative(&self) -> Poly {
        if self.0.len() == 1 {
            return Poly::constant(ZERO);
        }
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    /// Coefficient-wise comparison of two monic polynomials.
    pub fn approx_eq(&self, other: &Poly, tol: f64) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| (a - b).norm() <= tol * (1.0 + a.norm()))
    }

    /// All complex roots, repeated according to numerical multiplicity.
    pub fn roots(&self) -> Vec<Complex64> {
        match self.degree() {
            0 => Vec::new(),
            1 => vec![-self.0[0] / self.0[1]],
            2 => {
                let (c, b, a) = (self.0[0], self.0[1], self.0[2]);
                let disc = (b * b - a * c * 4.0).sqrt();
                // pick the sign that avoids cancellation
                let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) * 0.5 } else { -(b - disc) * 0.5 };
                if q == ZERO {
                    vec![ZERO, ZERO]
                } else {
                    vec![q / a, c / q]
                }
            }
            _ => self.aberth(),
        }
    }

    /// Aberth-Ehrlich simultaneous iteration followed by Newton polishing.
    fn aberth(&self) -> Vec<Complex64> {
        let p = self.monic();
        let dp = p.derivative();
        let n = p.degree();
        // Cauchy bound for the initial circle
        let bound = 1.0 + p.0[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(0.5 * bound, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
            .collect();
        for _ in 0..500 {
            let mut moved: f64 = 0.0;
            for i in 0..n {
                let pv = p.eval(z[i]);
                if pv == ZERO {
                    continue;
                }
                let ratio = pv / dp.eval(z[i]);
                let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
                let step = ratio / (ONE - ratio * repulsion);
                if step.re.is_finite() && step.im.is_finite() {
                    z[i] -= step;
                    moved = moved.max(step.norm() / (1.0 + z[i].norm()));
                }
            }
            if moved < 1e-15 {
                break;
            }
        }
        for root in z.iter_mut() {
            for _ in 0..3 {
                let d = dp.eval(*root);
                if d == ZERO {
                    break;
                }
                let step = p.eval(*root) / d;
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                *root -= step;
            }
        }
        z
    }
}
