//! Reproducing kernels of A²_α, their exact normalizations, weighted kernel
//! p-norms, and the pointwise kernel estimates built on them.
//!
//! Kernels: K_w(z) = (1 − z w̄)^{−(2+α)} on 𝔻 and (z − w̄)^{−(2+α)} on ℋ,
//! with products per axis on 𝔻ⁿ/ℋⁿ. Both bases stay in the right
//! half-plane on the respective domains, so the principal branch is the
//! unique continuous choice agreeing with integer powers.
//!
//! Normalization is always the exact one:
//! ‖K_w‖²_{2,α} = (1−|w|²)^{−(2+α)} on the disc (reproducing property under
//! the normalized measure), and on the half-plane the Beta-integral closed
//! form ‖K_w‖²_{2,α} = C(α)·v^{−(2+α)} with
//! C(α) = √π·Γ(α+3/2)Γ(α+1)/Γ(2α+3), computed once per α. The conventional
//! factor v^{1+α/2} alone is *not* unit-norm; the constant C(α)^{1/2} it
//! misses is recorded on [`NormalizedKernel`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::domains::{
    disc_nodes_adapted, halfplane_nodes_adapted, DomainError, DomainSpec, QuadratureRule,
};
use crate::point::DomainPoint;
use crate::quad::pairwise_sum;
use crate::symbols::Symbol;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("pole must be interior to the domain")]
    PoleOutsideDomain,
    #[error("truncated integral failed to stabilize (relative change {rel_change:.3e})")]
    Divergent { rel_change: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;

/// A reproducing kernel K_w^α, determined by the domain and the pole w.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub domain: DomainSpec,
    pub pole: DomainPoint,
}

impl KernelSpec {
    pub fn new(domain: DomainSpec, pole: DomainPoint) -> Result<Self> {
        if !domain.contains(&pole) {
            return Err(KernelError::PoleOutsideDomain);
        }
        Ok(KernelSpec { domain, pole })
    }
}

/// One axis of the kernel product.
fn kernel_axis(disc_like: bool, alpha: f64, w: Complex64, z: Complex64) -> Complex64 {
    if disc_like {
        (Complex64::new(1.0, 0.0) - z * w.conj()).powf(-(2.0 + alpha))
    } else {
        (z - w.conj()).powf(-(2.0 + alpha))
    }
}

/// Exact evaluation of K_w^α(z).
pub fn kernel_eval(spec: &KernelSpec, z: &[Complex64]) -> Complex64 {
    let disc_like = spec.domain.kind().is_disc_like();
    let mut acc = Complex64::new(1.0, 0.0);
    for (k, alpha) in spec.domain.alpha().iter().enumerate() {
        acc *= kernel_axis(disc_like, *alpha, spec.pole.coords[k], z[k]);
    }
    acc
}

/// ‖K_w‖²_{2,α} for one half-plane axis equals `halfplane_norm_constant(α)`
/// times v^{−(2+α)}.
pub fn halfplane_norm_constant(alpha: f64) -> f64 {
    (0.5 * std::f64::consts::PI.ln() + ln_gamma(alpha + 1.5) + ln_gamma(alpha + 1.0)
        - ln_gamma(2.0 * alpha + 3.0))
    .exp()
}

/// ‖K_w‖²_{2,α} from the closed forms (product over axes).
pub fn kernel_norm_sq(spec: &KernelSpec) -> f64 {
    let disc_like = spec.domain.kind().is_disc_like();
    let mut acc = 1.0;
    for (k, alpha) in spec.domain.alpha().iter().enumerate() {
        let w = spec.pole.coords[k];
        if disc_like {
            acc *= (1.0 - w.norm_sqr()).powf(-(2.0 + alpha));
        } else {
            acc *= halfplane_norm_constant(*alpha) * w.im.powf(-(2.0 + alpha));
        }
    }
    acc
}

/// The unit-norm kernel k_w^α = K_w^α / ‖K_w^α‖_{2,α}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedKernel {
    pub base: KernelSpec,
    /// The exact constant ‖K_w‖^{-1}_{2,α}.
    pub constant: f64,
}

impl NormalizedKernel {
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        kernel_eval(&self.base, z) * self.constant
    }

    pub fn eval1(&self, z: Complex64) -> Complex64 {
        self.eval(std::slice::from_ref(&z))
    }
}

/// Builds k_w^α with the exact normalizing constant.
pub fn normalize(spec: &KernelSpec) -> NormalizedKernel {
    let constant = kernel_norm_sq(spec).sqrt().recip();
    NormalizedKernel {
        base: spec.clone(),
        constant,
    }
}

/// The growth exponent of Lemma-type kernel p-norm asymptotics on ℋ:
/// ‖k_{x+iy}‖_{p,α} ≍ y^{((2+α)/2)(2/p−1)}.
pub fn kernel_pnorm_exponent(p: f64, alpha: f64) -> f64 {
    ((2.0 + alpha) / 2.0) * (2.0 / p - 1.0)
}

/// Quadrature node set adapted to the pole of a one-axis kernel: on ℋ the
/// rule's window is rescaled around w (an exact affine substitution), on 𝔻
/// the angular and radial resolution grow as the pole approaches the
/// boundary.
pub fn adapted_axis_nodes(
    disc_like: bool,
    alpha: f64,
    w: Complex64,
    rule: &QuadratureRule,
) -> crate::quad::NodeSet {
    if disc_like {
        disc_nodes_adapted(rule, alpha, w.norm())
    } else {
        halfplane_nodes_adapted(rule, alpha, w)
    }
}

/// ‖f · k_w^α‖_{p,α} by quadrature on a pole-adapted node set. `f` is any
/// pointwise evaluator; the normalized kernel is evaluated exactly.
/// Returns the norm and the minimum of |f| over the nodes (used for
/// zero-symbol detection by callers).
pub fn weighted_kernel_norm<F>(
    f: F,
    kernel: &NormalizedKernel,
    p: f64,
    rule: &QuadratureRule,
) -> Result<(f64, f64)>
where
    F: Fn(&[Complex64]) -> Complex64,
{
    let spec = &kernel.base;
    let disc_like = spec.domain.kind().is_disc_like();
    let n = spec.domain.dim();
    let axes: Vec<crate::quad::NodeSet> = (0..n)
        .map(|k| {
            let mut set = adapted_axis_nodes(
                disc_like,
                spec.domain.alpha()[k],
                spec.pole.coords[k],
                rule,
            );
            if n > 1 {
                // Trim the per-axis budget so the tensor product stays flat.
                let stride = (set.len() / 2500).max(1);
                if stride > 1 {
                    let nodes: Vec<_> = set.nodes.iter().copied().step_by(stride).collect();
                    let weights: Vec<_> =
                        set.weights.iter().map(|w| w * stride as f64).step_by(stride).collect();
                    set = crate::quad::NodeSet { nodes, weights };
                }
            }
            set
        })
        .collect();

    let mut min_abs_f = f64::INFINITY;
    let mut coords = vec![Complex64::new(0.0, 0.0); n];
    let mut terms: Vec<f64> = Vec::new();
    fn recurse<F: Fn(&[Complex64]) -> Complex64>(
        f: &F,
        kernel: &NormalizedKernel,
        p: f64,
        axes: &[crate::quad::NodeSet],
        k: usize,
        coords: &mut Vec<Complex64>,
        acc_w: f64,
        terms: &mut Vec<f64>,
        min_abs_f: &mut f64,
    ) -> Result<()> {
        if k == axes.len() {
            let fv = f(coords);
            if !fv.re.is_finite() || !fv.im.is_finite() {
                return Err(KernelError::Domain(DomainError::NonFiniteIntegrand {
                    node: coords[0],
                }));
            }
            let m = fv.norm();
            if m < *min_abs_f {
                *min_abs_f = m;
            }
            let kv = kernel.eval(coords).norm();
            terms.push((m * kv).powf(p) * acc_w);
            return Ok(());
        }
        let set = &axes[k];
        for (&z, &w) in set.nodes.iter().zip(&set.weights) {
            coords[k] = z;
            recurse(f, kernel, p, axes, k + 1, coords, acc_w * w, terms, min_abs_f)?;
        }
        Ok(())
    }
    recurse(
        &f,
        kernel,
        p,
        &axes,
        0,
        &mut coords,
        1.0,
        &mut terms,
        &mut min_abs_f,
    )?;
    Ok((pairwise_sum(&terms).max(0.0).powf(1.0 / p), min_abs_f))
}

/// ‖k_w^α‖_{p,α} by quadrature (pole-adapted node set), with a
/// window-stability check: the value must move by less than 5% when the
/// truncation window is enlarged, else a divergence flag is raised.
pub fn kernel_pnorm(spec: &KernelSpec, p: f64, rule: &QuadratureRule) -> Result<f64> {
    assert!(p > 1.0, "kernel p-norms require p > 1");
    let kernel = normalize(spec);
    let one = |_: &[Complex64]| Complex64::new(1.0, 0.0);
    let (base, _) = weighted_kernel_norm(one, &kernel, p, rule)?;
    let (wide, _) = weighted_kernel_norm(one, &kernel, p, &rule.widen())?;
    let rel_change = ((wide - base) / wide.max(1e-300)).abs();
    if rel_change > 0.05 {
        return Err(KernelError::Divergent { rel_change });
    }
    Ok(wide)
}

/// Both sides of the pointwise kernel estimate
/// |f(z)|^p ≤ C ‖k_z‖^{−p}_{p,α} ‖f k_z‖^p_{p,α}, together with their ratio.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PointwiseBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

pub fn pointwise_bound_check(
    f: &Symbol,
    p: f64,
    domain: &DomainSpec,
    z: &DomainPoint,
    rule: &QuadratureRule,
) -> Result<PointwiseBound> {
    let spec = KernelSpec::new(domain.clone(), z.clone())?;
    let kernel = normalize(&spec);
    let (norm_fk, _) = weighted_kernel_norm(|w| f.eval(w), &kernel, p, rule)?;
    let (norm_k, _) = weighted_kernel_norm(|_| Complex64::new(1.0, 0.0), &kernel, p, rule)?;
    let lhs = f.eval(&z.coords).norm().powf(p);
    let rhs = norm_k.powf(-p) * norm_fk.powf(p);
    Ok(PointwiseBound {
        lhs,
        rhs,
        ratio: if rhs > 0.0 { lhs / rhs } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::DomainKind;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn halfplane_kernel(alpha: f64, w: Complex64) -> KernelSpec {
        KernelSpec::new(
            DomainSpec::halfplane(alpha).unwrap(),
            DomainPoint::halfplane(w).unwrap(),
        )
        .unwrap()
    }

    fn disc_kernel(alpha: f64, w: Complex64) -> KernelSpec {
        KernelSpec::new(
            DomainSpec::disc(alpha).unwrap(),
            DomainPoint::disc(w).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn kernel_eval_base_cases() {
        // Disc, w = 0: K ≡ 1.
        let spec = disc_kernel(0.0, c(0.0, 0.0));
        assert_eq!(kernel_eval(&spec, &[c(0.3, 0.2)]), c(1.0, 0.0));

        // Half-plane, α = 0, w = z = i: (2i)^{-2} = −1/4.
        let spec = halfplane_kernel(0.0, c(0.0, 1.0));
        let v = kernel_eval(&spec, &[c(0.0, 1.0)]);
        assert!((v - c(-0.25, 0.0)).norm() < 1e-14);

        // Polydisc at the origin: product of ones.
        let spec = KernelSpec::new(
            DomainSpec::polydisc(vec![0.0, 0.0]).unwrap(),
            DomainPoint::new(DomainKind::Polydisc(2), vec![c(0.0, 0.0); 2]).unwrap(),
        )
        .unwrap();
        assert_eq!(kernel_eval(&spec, &[c(0.1, 0.0), c(0.0, 0.2)]), c(1.0, 0.0));
    }

    #[test]
    fn hermitian_symmetry() {
        let d = DomainSpec::polydisc(vec![0.0, 1.5]).unwrap();
        let w = vec![c(0.3, -0.1), c(-0.2, 0.4)];
        let z = vec![c(0.1, 0.2), c(0.5, -0.3)];
        let kw = KernelSpec::new(d.clone(), DomainPoint::new(d.kind(), w.clone()).unwrap()).unwrap();
        let kz = KernelSpec::new(d.clone(), DomainPoint::new(d.kind(), z.clone()).unwrap()).unwrap();
        let a = kernel_eval(&kw, &z);
        let b = kernel_eval(&kz, &w);
        assert!((a - b.conj()).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn disc_normalization_closed_form_vs_quadrature() {
        // ‖k_w‖_{2,α} = 1 within quadrature tolerance.
        for (alpha, w) in [(0.0, c(0.0, 0.0)), (1.0, c(0.5, 0.0)), (0.5, c(-0.3, 0.55))] {
            let spec = disc_kernel(alpha, w);
            let k = normalize(&spec);
            let (norm, _) =
                weighted_kernel_norm(|_| c(1.0, 0.0), &k, 2.0, &QuadratureRule::default()).unwrap();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn halfplane_normalization_beta_integral_vs_quadrature() {
        // The closed-form constant at α = 0 is π/4; quadrature on the
        // norm-grade window must reproduce unit norm to 1e−6.
        assert_abs_diff_eq!(
            halfplane_norm_constant(0.0),
            std::f64::consts::PI / 4.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            halfplane_norm_constant(1.0),
            std::f64::consts::PI / 32.0,
            epsilon = 1e-14
        );
        for (alpha, w) in [(0.0, c(0.0, 1.0)), (1.0, c(2.0, 0.5))] {
            let spec = halfplane_kernel(alpha, w);
            let k = normalize(&spec);
            let (norm, _) =
                weighted_kernel_norm(|_| c(1.0, 0.0), &k, 2.0, &QuadratureRule::norm_grade())
                    .unwrap();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn pnorm_exponent_formula() {
        assert_abs_diff_eq!(kernel_pnorm_exponent(2.0, 0.7), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(kernel_pnorm_exponent(4.0, 0.0), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            kernel_pnorm_exponent(4.0 / 3.0, 1.0),
            0.75,
            epsilon = 1e-15
        );
    }

    #[test]
    fn loglog_slope_matches_exponent() {
        // Regress log ‖k_{iv}‖_p against log v over geometric heights.
        for (p, alpha) in [(4.0 / 3.0, 0.0), (2.0, 1.0), (4.0, 1.0)] {
            let rule = QuadratureRule::default();
            let heights: Vec<f64> = (0..8).map(|k| 1e-2 * 10f64.powf(k as f64 * 4.0 / 7.0)).collect();
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for v in heights {
                let spec = halfplane_kernel(alpha, c(0.0, v));
                let norm = kernel_pnorm(&spec, p, &rule).unwrap();
                xs.push(v.ln());
                ys.push(norm.ln());
            }
            let n = xs.len() as f64;
            let xm = xs.iter().sum::<f64>() / n;
            let ym = ys.iter().sum::<f64>() / n;
            let slope: f64 = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| (x - xm) * (y - ym))
                .sum::<f64>()
                / xs.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
            assert_abs_diff_eq!(slope, kernel_pnorm_exponent(p, alpha), epsilon = 1e-2);
        }
    }

    #[test]
    fn conjugate_pnorm_product_is_height_stable() {
        // ‖k_w‖_p⁻¹‖k_w‖_q⁻¹-type products stay within a two-sided constant
        // of 1 across heights (the exponents cancel).
        let alpha = 0.0;
        let (p, q) = (4.0, 4.0 / 3.0);
        let rule = QuadratureRule::default();
        let mut values = Vec::new();
        for v in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let spec = halfplane_kernel(alpha, c(0.0, v));
            let np = kernel_pnorm(&spec, p, &rule).unwrap();
            let nq = kernel_pnorm(&spec, q, &rule).unwrap();
            values.push(np * nq);
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo < 1.05, "product varied: [{lo}, {hi}]");
    }

    #[test]
    fn reproducing_identity_on_disc() {
        // ⟨f, K_w⟩_α = f(w) for a polynomial f, by quadrature.
        use crate::domains::integrate;
        let d = DomainSpec::disc(1.0).unwrap();
        let w = c(0.4, -0.25);
        let spec = disc_kernel(1.0, w);
        let f = |z: Complex64| c(0.7, 0.3) + z * c(-1.0, 0.5) + z * z * c(0.2, 0.1);
        let v = integrate(
            |z| f(z[0]) * kernel_eval(&spec, z).conj(),
            &d,
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!((v - f(w)).norm() < 1e-8);
    }

    #[test]
    fn pointwise_bound_for_constants_and_kernels() {
        let d = DomainSpec::halfplane(0.0).unwrap();
        let rule = QuadratureRule::default();
        // f constant: lhs ≍ rhs with the same ratio at any height.
        let f = Symbol::parse("3", 1).unwrap();
        let mut ratios = Vec::new();
        for v in [0.01, 1.0, 100.0] {
            let z = DomainPoint::halfplane(c(0.0, v)).unwrap();
            let b = pointwise_bound_check(&f, 2.0, &d, &z, &rule).unwrap();
            ratios.push(b.ratio);
            assert!(b.lhs <= b.rhs * 1.5);
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo < 1.1);

        // f(ζ) = (ζ+i)^{-2}: finite ratio at z = i.
        let f = Symbol::parse("(z+i)^-2", 1).unwrap();
        let z = DomainPoint::halfplane(c(0.0, 1.0)).unwrap();
        let b = pointwise_bound_check(&f, 2.0, &d, &z, &rule).unwrap();
        assert!(b.ratio.is_finite() && b.ratio > 0.0 && b.ratio < 10.0);
    }
}
