//! Truncated power-series algebra on the disc.
//!
//! Symbols that expand in monomials route matrix assembly through this
//! module instead of quadrature: products, quotients and real powers of
//! analytic functions become coefficient recurrences, and mixed symbols in
//! z and z̄ are carried as sums of sesquianalytic terms A(z)·conj(B(z)).

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("series operation requires a nonzero constant term")]
    ZeroConstantTerm,
    #[error("operation is not representable as a monomial series: {0}")]
    NotRepresentable(String),
}

/// A truncated Taylor series Σ_{k≤K} c_k z^k.
#[derive(Debug, Clone, PartialEq)]
pub struct Taylor {
    pub coeff: Vec<Complex64>,
}

impl Taylor {
    pub fn zero(len: usize) -> Self {
        Taylor {
            coeff: vec![Complex64::new(0.0, 0.0); len.max(1)],
        }
    }

    pub fn constant(c: Complex64, len: usize) -> Self {
        let mut t = Taylor::zero(len);
        t.coeff[0] = c;
        t
    }

    pub fn variable(len: usize) -> Self {
        let mut t = Taylor::zero(len.max(2));
        t.coeff[1] = Complex64::new(1.0, 0.0);
        t
    }

    pub fn from_coeffs(coeff: Vec<Complex64>) -> Self {
        assert!(!coeff.is_empty());
        Taylor { coeff }
    }

    pub fn len(&self) -> usize {
        self.coeff.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeff.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn add(&self, other: &Taylor) -> Taylor {
        let len = self.len().max(other.len());
        let mut out = Taylor::zero(len);
        for (k, slot) in out.coeff.iter_mut().enumerate() {
            if k < self.len() {
                *slot += self.coeff[k];
            }
            if k < other.len() {
                *slot += other.coeff[k];
            }
        }
        out
    }

    pub fn neg(&self) -> Taylor {
        Taylor {
            coeff: self.coeff.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Taylor {
        Taylor {
            coeff: self.coeff.iter().map(|c| c * s).collect(),
        }
    }

    /// Product truncated at max(len) coefficients.
    pub fn mul(&self, other: &Taylor) -> Taylor {
        let len = self.len().max(other.len());
        let mut out = Taylor::zero(len);
        for (i, a) in self.coeff.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in other.coeff.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out.coeff[i + j] += a * b;
            }
        }
        out
    }

    /// Reciprocal series; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Taylor, SeriesError> {
        self.powf(-1.0)
    }

    /// Real power g = f^s via the J.C.P. Miller recurrence
    ///   g_k = (k f_0)^{-1} Σ_{i=1..k} (i s − (k − i)) f_i g_{k−i},
    /// principal branch at the constant term.
    pub fn powf(&self, s: f64) -> Result<Taylor, SeriesError> {
        let f0 = self.coeff[0];
        if f0.norm() < 1e-300 {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let len = self.len();
        let mut g = Taylor::zero(len);
        g.coeff[0] = f0.powf(s);
        for k in 1..len {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 1..=k {
                let fi = if i < self.len() {
                    self.coeff[i]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                acc += fi * g.coeff[k - i] * (s * i as f64 - (k - i) as f64);
            }
            g.coeff[k] = acc / (f0 * k as f64);
        }
        Ok(g)
    }

    /// Integer power by repeated squaring over truncated products.
    pub fn powi(&self, n: usize) -> Taylor {
        let mut result = Taylor::constant(Complex64::new(1.0, 0.0), self.len());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        result
    }

    /// Composition h = f ∘ g by Horner over series arithmetic; requires
    /// g(0) small enough that the truncation is meaningful (|g(0)| < 1).
    pub fn compose(&self, inner: &Taylor) -> Taylor {
        let len = self.len().max(inner.len());
        let mut acc = Taylor::zero(len);
        for c in self.coeff.iter().rev() {
            acc = acc.mul(inner);
            acc.coeff[0] += c;
        }
        acc
    }

    /// Magnitude of the largest of the last `tail` coefficients, as a crude
    /// truncation-quality indicator.
    pub fn tail_magnitude(&self, tail: usize) -> f64 {
        let start = self.len().saturating_sub(tail);
        self.coeff[start..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// The generalized binomial series (1 − c z)^{−γ} = Σ_k (γ)_k/k! c^k z^k.
pub fn binomial_series(c: Complex64, gamma: f64, len: usize) -> Taylor {
    let mut t = Taylor::zero(len);
    let mut term = Complex64::new(1.0, 0.0);
    t.coeff[0] = term;
    for k in 0..len - 1 {
        term = term * c * ((gamma + k as f64) / (k as f64 + 1.0));
        t.coeff[k + 1] = term;
    }
    t
}

/// A finite sum Σ_i A_i(z) · conj(B_i(z)) of sesquianalytic terms.
#[derive(Debug, Clone)]
pub struct Sesqui {
    pub terms: Vec<(Taylor, Taylor)>,
    pub len: usize,
}

impl Sesqui {
    pub fn analytic(a: Taylor) -> Self {
        let len = a.len();
        Sesqui {
            terms: vec![(a, Taylor::constant(Complex64::new(1.0, 0.0), 1))],
            len,
        }
    }

    pub fn constant(c: Complex64, len: usize) -> Self {
        Sesqui::analytic(Taylor::constant(c, len))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(a, b)| a.eval(z) * b.eval(z).conj())
            .sum()
    }

    pub fn add(&self, other: &Sesqui) -> Sesqui {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Sesqui {
            terms,
            len: self.len.max(other.len),
        }
        .compressed()
    }

    /// Merges all purely analytic terms into one and all purely
    /// anti-analytic terms into one, keeping genuinely mixed terms as-is.
    fn compressed(self) -> Sesqui {
        let is_const = |t: &Taylor| t.coeff.iter().skip(1).all(|c| c.norm() == 0.0);
        let mut analytic: Option<Taylor> = None;
        let mut anti: Option<Taylor> = None;
        let mut rest = Vec::new();
        for (a, b) in self.terms {
            if is_const(&b) {
                let folded = a.scale(b.coeff[0].conj());
                analytic = Some(match analytic {
                    Some(acc) => acc.add(&folded),
                    None => folded,
                });
            } else if is_const(&a) {
                let folded = b.scale(a.coeff[0].conj());
                anti = Some(match anti {
                    Some(acc) => acc.add(&folded),
                    None => folded,
                });
            } else {
                rest.push((a, b));
            }
        }
        let mut terms = Vec::with_capacity(rest.len() + 2);
        if let Some(a) = analytic {
            terms.push((a, Taylor::constant(Complex64::new(1.0, 0.0), 1)));
        }
        if let Some(b) = anti {
            terms.push((Taylor::constant(Complex64::new(1.0, 0.0), 1), b));
        }
        terms.extend(rest);
        if terms.is_empty() {
            terms.push((Taylor::zero(1), Taylor::constant(Complex64::new(1.0, 0.0), 1)));
        }
        Sesqui {
            terms,
            len: self.len,
        }
    }

    pub fn neg(&self) -> Sesqui {
        Sesqui {
            terms: self
                .terms
                .iter()
                .map(|(a, b)| (a.neg(), b.clone()))
                .collect(),
            len: self.len,
        }
    }

    pub fn mul(&self, other: &Sesqui) -> Sesqui {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a1, b1) in &self.terms {
            for (a2, b2) in &other.terms {
                terms.push((a1.mul(a2), b1.mul(b2)));
            }
        }
        Sesqui {
            terms,
            len: self.len.max(other.len),
        }
        .compressed()
    }

    /// conj(Σ A·conj(B)) = Σ B·conj(A).
    pub fn conj(&self) -> Sesqui {
        Sesqui {
            terms: self
                .terms
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
            len: self.len,
        }
    }

    /// Anti-analytic collapse: Some(B) when the symbol is conj(B(z)).
    fn to_anti_analytic(&self) -> Option<Taylor> {
        self.conj().to_analytic()
    }

    /// Reciprocal. Analytic (or anti-analytic) sums collapse to a single
    /// series first; otherwise a single sesquianalytic term inverts
    /// factorwise: (A·conj(B))^{-1} = A^{-1}·conj(B^{-1}).
    pub fn inverse(&self) -> Result<Sesqui, SeriesError> {
        if let Some(a) = self.to_analytic() {
            return Ok(Sesqui::analytic(a.inverse()?));
        }
        if let Some(b) = self.to_anti_analytic() {
            return Ok(Sesqui::analytic(b.inverse()?).conj());
        }
        if self.terms.len() != 1 {
            return Err(SeriesError::NotRepresentable(
                "reciprocal of a multi-term mixed symbol".into(),
            ));
        }
        let (a, b) = &self.terms[0];
        Ok(Sesqui {
            terms: vec![(a.inverse()?, b.inverse()?)],
            len: self.len,
        })
    }

    /// Real power; defined for purely analytic or purely anti-analytic
    /// single-term symbols (the constant factor is folded into the series
    /// before the power, and conj(X)^s = conj(X^s) on the principal branch
    /// away from the cut).
    pub fn powf(&self, s: f64) -> Result<Sesqui, SeriesError> {
        if let Some(a) = self.to_analytic() {
            return Ok(Sesqui::analytic(a.powf(s)?));
        }
        if let Some(b) = self.to_anti_analytic() {
            return Ok(Sesqui::analytic(b.powf(s)?).conj());
        }
        Err(SeriesError::NotRepresentable(
            "real power of a genuinely mixed symbol".into(),
        ))
    }

    /// True when every term's anti-analytic factor is constant.
    pub fn is_analytic(&self) -> bool {
        self.terms
            .iter()
            .all(|(_, b)| b.coeff.iter().skip(1).all(|c| c.norm() == 0.0))
    }

    /// Collapses an analytic sesqui symbol to a single Taylor series.
    pub fn to_analytic(&self) -> Option<Taylor> {
        if !self.is_analytic() {
            return None;
        }
        let mut acc = Taylor::zero(self.len);
        for (a, b) in &self.terms {
            acc = acc.add(&a.scale(b.coeff[0].conj()));
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_of_two_plus_z() {
        // 1/(2+z) = Σ (−1)^k z^k / 2^{k+1}.
        let f = Taylor::from_coeffs(vec![c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let inv = f.inverse().unwrap();
        for k in 0..4 {
            let expected = (-1f64).powi(k as i32) / 2f64.powi(k as i32 + 1);
            assert_abs_diff_eq!(inv.coeff[k].re, expected, epsilon = 1e-15);
            assert_abs_diff_eq!(inv.coeff[k].im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn miller_power_matches_binomial() {
        // (1 − cz)^{-γ} two ways.
        let len = 24;
        let cc = c(0.3, -0.2);
        let gamma = 2.7;
        let base = Taylor::from_coeffs({
            let mut v = vec![c(0.0, 0.0); len];
            v[0] = c(1.0, 0.0);
            v[1] = -cc;
            v
        });
        let via_miller = base.powf(-gamma).unwrap();
        let via_series = binomial_series(cc, gamma, len);
        for k in 0..len {
            assert!((via_miller.coeff[k] - via_series.coeff[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn powf_agrees_with_pointwise_eval() {
        let len = 48;
        let f = Taylor::from_coeffs({
            let mut v = vec![c(0.0, 0.0); len];
            v[0] = c(2.0, 0.0);
            v[1] = c(1.0, 0.0);
            v[2] = c(0.0, 0.5);
            v
        });
        let g = f.powf(0.125).unwrap();
        let z = c(0.2, 0.1);
        let direct = f.eval(z).powf(0.125);
        assert!((g.eval(z) - direct).norm() < 1e-12);
    }

    #[test]
    fn sesqui_mixed_symbol_evaluates() {
        // (2 + z̄)/(2 + z) as Sesqui: analytic(1/(2+z)) * conj(analytic(2+z)).
        let len = 60;
        let two_plus = Taylor::from_coeffs({
            let mut v = vec![c(0.0, 0.0); len];
            v[0] = c(2.0, 0.0);
            v[1] = c(1.0, 0.0);
            v
        });
        let s = Sesqui::analytic(two_plus.inverse().unwrap())
            .mul(&Sesqui::analytic(two_plus.clone()).conj());
        let z = c(0.3, -0.4);
        let expected = (c(2.0, 0.0) + z.conj()) / (c(2.0, 0.0) + z);
        assert!((s.eval(z) - expected).norm() < 1e-12);

        // And its reciprocal flips numerator and denominator.
        let inv = s.inverse().unwrap();
        assert!((inv.eval(z) - 1.0 / expected).norm() < 1e-12);
    }

    #[test]
    fn compose_with_mobius_series() {
        // (h ∘ φ)(z) for h = z², φ = (a−z)/(1−āz), via series composition.
        let len = 64;
        let a = c(0.4, 0.1);
        let numer = Taylor::from_coeffs({
            let mut v = vec![c(0.0, 0.0); len];
            v[0] = a;
            v[1] = c(-1.0, 0.0);
            v
        });
        let denom_inv = binomial_series(a.conj(), 1.0, len);
        let phi = numer.mul(&denom_inv);
        let h = Taylor::from_coeffs(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let composed = h.compose(&phi);
        let z = c(0.25, -0.3);
        let phi_z = (a - z) / (c(1.0, 0.0) - a.conj() * z);
        assert!((composed.eval(z) - phi_z * phi_z).norm() < 1e-10);
    }
}
