//! Weighted measures, quadrature, and sampling grids for 𝔻, ℋ, 𝔻ⁿ and ℋⁿ.
//!
//! Conventions follow the measures the rest of the crate is built on:
//! the disc carries the normalized measure dν_α = (α+1)(1−|z|²)^α dν with
//! ν(𝔻) = 1 (and products thereof on 𝔻ⁿ), while the half-plane carries the
//! unnormalized dV_α = y^α dx dy (and products on ℋⁿ).
//!
//! Half-plane integrals are truncated to [−X, X] × (ε, Y] with both axes
//! geometrically graded (x toward 0, y toward 0) because kernel integrands
//! concentrate there and y^α is singular-ish for α ∈ (−1, 0). Disc
//! integrals use polar tensor Gauss–Legendre with radial grading toward
//! |z| = 1, where (1−|z|²)^α concentrates mass; the final boundary sliver is
//! integrated exactly in the variable u = (1−r)^{1+α} so every α > −1 is
//! handled uniformly.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::CarlesonBox;
use crate::point::{DomainKind, DomainPoint};
use crate::quad::{
    gauss_legendre_on, graded_breakpoints, pairwise_sum, pairwise_sum_complex, panel_rule, NodeSet,
};
use crate::symbols::Symbol;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("integrand returned a non-finite value near ({re}, {im})", re = .node.re, im = .node.im)]
    NonFiniteIntegrand { node: Complex64 },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid domain spec: {0}")]
    InvalidSpec(String),
    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),
}

pub type Result<T, E = DomainError> = std::result::Result<T, E>;

/// A domain together with its weight-parameter vector α (one entry per axis,
/// each > −1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    kind: DomainKind,
    alpha: Vec<f64>,
}

impl DomainSpec {
    pub fn new(kind: DomainKind, alpha: Vec<f64>) -> Result<Self> {
        let n = kind.dim();
        if n == 0 {
            return Err(DomainError::InvalidSpec("dimension must be >= 1".into()));
        }
        if alpha.len() != n {
            return Err(DomainError::InvalidSpec(format!(
                "alpha has {} entries for a {}-dimensional domain",
                alpha.len(),
                n
            )));
        }
        if alpha.iter().any(|a| !(*a > -1.0) || !a.is_finite()) {
            return Err(DomainError::InvalidSpec(
                "every alpha component must be finite and > -1".into(),
            ));
        }
        Ok(DomainSpec { kind, alpha })
    }

    pub fn disc(alpha: f64) -> Result<Self> {
        Self::new(DomainKind::Disc, vec![alpha])
    }

    pub fn halfplane(alpha: f64) -> Result<Self> {
        Self::new(DomainKind::Halfplane, vec![alpha])
    }

    pub fn polydisc(alpha: Vec<f64>) -> Result<Self> {
        let n = alpha.len();
        Self::new(DomainKind::Polydisc(n), alpha)
    }

    pub fn tube(alpha: Vec<f64>) -> Result<Self> {
        let n = alpha.len();
        Self::new(DomainKind::Tube(n), alpha)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// α for one-dimensional domains.
    pub fn alpha1(&self) -> f64 {
        self.alpha[0]
    }

    /// The one-dimensional spec of a single axis of a product domain.
    pub fn axis(&self, k: usize) -> DomainSpec {
        let kind = if self.kind.is_disc_like() {
            DomainKind::Disc
        } else {
            DomainKind::Halfplane
        };
        DomainSpec {
            kind,
            alpha: vec![self.alpha[k]],
        }
    }

    pub fn contains(&self, point: &DomainPoint) -> bool {
        point.kind == self.kind && self.kind.contains(&point.coords)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    /// Plain tensor Gauss–Legendre on uniform panels.
    TensorGauss,
    /// Tensor Gauss–Legendre on panels geometrically graded toward the
    /// distinguished boundary (y = 0, |z| = 1).
    GradedBoundary,
}

/// Discretization parameters for the weighted integrals.
///
/// `half_width`/`floor_height`/`ceiling_height` are the half-plane
/// truncation (X, ε, Y); `grading_ratio` controls the geometric panel decay
/// toward the boundary, and doubles as the radial grading of the disc rule
/// (where `floor_height` is the boundary-distance floor).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes_per_axis: usize,
    pub half_width: f64,
    pub floor_height: f64,
    pub ceiling_height: f64,
    pub grading_ratio: f64,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule {
            kind: RuleKind::GradedBoundary,
            nodes_per_axis: 6,
            half_width: 50.0,
            floor_height: 1e-4,
            ceiling_height: 50.0,
            grading_ratio: 0.5,
        }
    }
}

impl QuadratureRule {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < 4 {
            return Err(DomainError::InvalidRule("nodes_per_axis must be >= 4".into()));
        }
        if !(self.floor_height > 0.0 && self.floor_height < self.ceiling_height) {
            return Err(DomainError::InvalidRule("need 0 < eps < Y".into()));
        }
        if !(self.half_width > 0.0) {
            return Err(DomainError::InvalidRule("need X > 0".into()));
        }
        if !(self.grading_ratio > 0.0 && self.grading_ratio < 1.0) {
            return Err(DomainError::InvalidRule(
                "grading ratio must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }

    /// Same window, doubled node count per panel.
    pub fn refine(&self) -> Self {
        QuadratureRule {
            nodes_per_axis: self.nodes_per_axis * 2,
            ..*self
        }
    }

    /// Same node counts on an enlarged window (doubled X and Y, halved ε).
    pub fn widen(&self) -> Self {
        QuadratureRule {
            half_width: self.half_width * 2.0,
            floor_height: self.floor_height * 0.5,
            ceiling_height: self.ceiling_height * 2.0,
            ..*self
        }
    }

    /// A rule wide and fine enough for 2-norm normalization checks against
    /// closed forms: both truncation tails are O(X⁻²) for kernel-type
    /// integrands, so X and Y are pushed to 4·10³ (tail ≈ 10⁻⁷).
    pub fn norm_grade() -> Self {
        QuadratureRule {
            kind: RuleKind::GradedBoundary,
            nodes_per_axis: 8,
            half_width: 4000.0,
            floor_height: 1e-8,
            ceiling_height: 4000.0,
            grading_ratio: 0.5,
        }
    }
}

// ---------------------------------------------------------------------------
// Node-set builders
// ---------------------------------------------------------------------------

/// y-panel rule on (0, top], graded toward 0, with the final sliver
/// [0, floor] integrated exactly against y^α via u = y^{1+α}. Weights
/// include the y^α factor.
fn y_axis_with_sliver(
    alpha: f64,
    floor: f64,
    top: f64,
    ratio: f64,
    nodes: usize,
) -> (Vec<f64>, Vec<f64>) {
    let breaks = graded_breakpoints(floor, top, ratio);
    let (ys, ws) = panel_rule(&breaks, nodes);
    let mut y_nodes: Vec<f64> = Vec::with_capacity(ys.len() + nodes);
    let mut y_weights: Vec<f64> = Vec::with_capacity(ys.len() + nodes);
    for (y, w) in ys.iter().zip(&ws) {
        y_nodes.push(*y);
        y_weights.push(w * y.powf(alpha));
    }
    // ∫_0^floor y^α f(y) dy = (1+α)^{-1} ∫_0^{floor^{1+α}} f(u^{1/(1+α)}) du.
    let s = 1.0 + alpha;
    let (us, wu) = gauss_legendre_on(nodes, 0.0, floor.powf(s));
    for (u, w) in us.iter().zip(&wu) {
        y_nodes.push(u.powf(1.0 / s));
        y_weights.push(w / s);
    }
    (y_nodes, y_weights)
}

/// Truncated-window y-axis (no sliver below ε): the documented half-plane
/// truncation.
fn y_axis_truncated(
    alpha: f64,
    floor: f64,
    top: f64,
    ratio: f64,
    nodes: usize,
    graded: bool,
) -> (Vec<f64>, Vec<f64>) {
    let breaks = if graded {
        graded_breakpoints(floor, top, ratio)
    } else {
        let panels = graded_breakpoints(floor, top, ratio).len();
        (0..=panels)
            .map(|i| floor + (top - floor) * i as f64 / panels as f64)
            .collect()
    };
    let (ys, ws) = panel_rule(&breaks, nodes);
    let weights = ys
        .iter()
        .zip(&ws)
        .map(|(y, w)| w * y.powf(alpha))
        .collect();
    (ys, weights)
}

/// x-axis on [−X, X], graded toward 0 from both sides (plus a center panel).
fn x_axis(half_width: f64, floor: f64, ratio: f64, nodes: usize, graded: bool) -> (Vec<f64>, Vec<f64>) {
    if !graded {
        let panels = 2 * graded_breakpoints(floor, half_width, ratio).len();
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| -half_width + 2.0 * half_width * i as f64 / panels as f64)
            .collect();
        return panel_rule(&breaks, nodes);
    }
    let pos = graded_breakpoints(floor, half_width, ratio);
    let mut breaks: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
    breaks.extend(pos.iter());
    panel_rule(&breaks, nodes)
}

/// Half-plane node set on the rule's truncation window; weights include y^α.
pub fn halfplane_nodes(rule: &QuadratureRule, alpha: f64) -> NodeSet {
    let graded = matches!(rule.kind, RuleKind::GradedBoundary);
    let (xs, wx) = x_axis(
        rule.half_width,
        rule.floor_height,
        rule.grading_ratio,
        rule.nodes_per_axis,
        graded,
    );
    let (ys, wy) = y_axis_truncated(
        alpha,
        rule.floor_height,
        rule.ceiling_height,
        rule.grading_ratio,
        rule.nodes_per_axis,
        graded,
    );
    let mut nodes = Vec::with_capacity(xs.len() * ys.len());
    let mut weights = Vec::with_capacity(xs.len() * ys.len());
    for (y, wyv) in ys.iter().zip(&wy) {
        for (x, wxv) in xs.iter().zip(&wx) {
            nodes.push(Complex64::new(*x, *y));
            weights.push(wxv * wyv);
        }
    }
    NodeSet { nodes, weights }
}

/// Half-plane node set recentered at the pole w = u + iv: the affine
/// substitution z = u + vζ maps the rule's window around i to a window
/// around w, with the measure factor v^{2+α} carried into the weights. The
/// substitution is exact, so this is still plain quadrature of the original
/// integral, on a node set adapted to the scale of w.
pub fn halfplane_nodes_adapted(rule: &QuadratureRule, alpha: f64, w: Complex64) -> NodeSet {
    let base = halfplane_nodes(rule, alpha);
    let v = w.im;
    let scale = v.powf(2.0 + alpha);
    NodeSet {
        nodes: base
            .nodes
            .iter()
            .map(|z| Complex64::new(w.re + v * z.re, v * z.im))
            .collect(),
        weights: base.weights.iter().map(|wt| wt * scale).collect(),
    }
}

/// Radial nodes/weights on [0, 1) with the factor (α+1)(1−r²)^α r / π folded
/// in; the boundary sliver [1−floor, 1] is handled by the exact substitution
/// u = (1−r)^{1+α}.
fn disc_radial(alpha: f64, floor: f64, ratio: f64, nodes: usize, graded: bool) -> (Vec<f64>, Vec<f64>) {
    let c = (alpha + 1.0) / std::f64::consts::PI;
    let mut r_nodes = Vec::new();
    let mut r_weights = Vec::new();
    let dists = if graded {
        graded_breakpoints(floor, 1.0, ratio)
    } else {
        let panels = graded_breakpoints(floor, 1.0, ratio).len();
        (0..=panels)
            .map(|i| floor + (1.0 - floor) * i as f64 / panels as f64)
            .collect()
    };
    // Panels [1−d_{k+1}, 1−d_k] in r, i.e. boundary distances [d_k, d_{k+1}].
    for pair in dists.windows(2) {
        let (rs, ws) = gauss_legendre_on(nodes, 1.0 - pair[1], 1.0 - pair[0]);
        for (r, w) in rs.iter().zip(&ws) {
            r_nodes.push(*r);
            r_weights.push(c * w * (1.0 - r * r).powf(alpha) * r);
        }
    }
    // Sliver r ∈ [1−floor, 1]: (1−r²)^α = (1−r)^α (1+r)^α, u = (1−r)^{1+α}.
    let s = 1.0 + alpha;
    let (us, wu) = gauss_legendre_on(nodes, 0.0, floor.powf(s));
    for (u, w) in us.iter().zip(&wu) {
        let r = 1.0 - u.powf(1.0 / s);
        r_nodes.push(r);
        r_weights.push(c * w / s * (1.0 + r).powf(alpha) * r);
    }
    (r_nodes, r_weights)
}

/// Disc node set in polar form; weights include the full normalized measure
/// dν_α. `theta_nodes` overrides the angular resolution when given.
pub fn disc_nodes_with(
    rule: &QuadratureRule,
    alpha: f64,
    theta_nodes: Option<usize>,
    radial_floor: Option<f64>,
) -> NodeSet {
    let graded = matches!(rule.kind, RuleKind::GradedBoundary);
    let floor = radial_floor.unwrap_or(rule.floor_height);
    let (rs, wr) = disc_radial(alpha, floor, rule.grading_ratio, rule.nodes_per_axis, graded);
    let m = theta_nodes.unwrap_or(24 * rule.nodes_per_axis);
    let dtheta = 2.0 * std::f64::consts::PI / m as f64;
    let mut nodes = Vec::with_capacity(rs.len() * m);
    let mut weights = Vec::with_capacity(rs.len() * m);
    for (r, wrv) in rs.iter().zip(&wr) {
        for k in 0..m {
            let theta = dtheta * (k as f64 + 0.5);
            nodes.push(Complex64::from_polar(*r, theta));
            weights.push(wrv * dtheta);
        }
    }
    NodeSet { nodes, weights }
}

pub fn disc_nodes(rule: &QuadratureRule, alpha: f64) -> NodeSet {
    disc_nodes_with(rule, alpha, None, None)
}

/// Disc node set with angular/radial resolution adapted to a pole at |w|:
/// kernel-type integrands concentrate at angular scale 1 − |w|.
pub fn disc_nodes_adapted(rule: &QuadratureRule, alpha: f64, pole_modulus: f64) -> NodeSet {
    let base_theta = 24 * rule.nodes_per_axis;
    let needed = (16.0 / (1.0 - pole_modulus)).ceil() as usize;
    let theta = base_theta.max(needed).min(8192);
    let floor = rule.floor_height.min((1.0 - pole_modulus) * 1e-3).max(1e-14);
    disc_nodes_with(rule, alpha, Some(theta), Some(floor))
}

/// Node set for ∫_Q · dV_α over a half-plane Carleson box, graded toward
/// y = 0 with the exact y^α sliver at the bottom.
pub fn box_nodes_halfplane(interval: (f64, f64), alpha: f64, nodes: usize, depth_ratio: f64) -> NodeSet {
    let (left, len) = interval;
    let floor = len * depth_ratio;
    let (ys, wy) = y_axis_with_sliver(alpha, floor, len, 0.5, nodes);
    let x_panels = 4;
    let breaks: Vec<f64> = (0..=x_panels)
        .map(|i| left + len * i as f64 / x_panels as f64)
        .collect();
    let (xs, wx) = panel_rule(&breaks, nodes);
    let mut out_nodes = Vec::with_capacity(xs.len() * ys.len());
    let mut out_weights = Vec::with_capacity(xs.len() * ys.len());
    for (y, wyv) in ys.iter().zip(&wy) {
        for (x, wxv) in xs.iter().zip(&wx) {
            out_nodes.push(Complex64::new(*x, *y));
            out_weights.push(wxv * wyv);
        }
    }
    NodeSet {
        nodes: out_nodes,
        weights: out_weights,
    }
}

/// Node set for ∫_Q · dν_α over a disc Carleson box (an annular sector),
/// radially graded toward |z| = 1.
pub fn box_nodes_disc(center_angle: f64, arc_length: f64, alpha: f64, nodes: usize) -> NodeSet {
    let c = (alpha + 1.0) / std::f64::consts::PI;
    // Boundary distances from arc_length down to a relative floor, then the
    // exact sliver.
    let floor = arc_length * 2f64.powi(-36);
    let dists = graded_breakpoints(floor, arc_length, 0.5);
    let mut rs = Vec::new();
    let mut wr = Vec::new();
    for pair in dists.windows(2) {
        let (r, w) = gauss_legendre_on(nodes, 1.0 - pair[1], 1.0 - pair[0]);
        for (rv, wv) in r.iter().zip(&w) {
            rs.push(*rv);
            wr.push(c * wv * (1.0 - rv * rv).powf(alpha) * rv);
        }
    }
    let s = 1.0 + alpha;
    let (us, wu) = gauss_legendre_on(nodes, 0.0, floor.powf(s));
    for (u, w) in us.iter().zip(&wu) {
        let r = 1.0 - u.powf(1.0 / s);
        rs.push(r);
        wr.push(c * w / s * (1.0 + r).powf(alpha) * r);
    }
    let theta_panels = 4;
    let lo = center_angle - 0.5 * arc_length;
    let breaks: Vec<f64> = (0..=theta_panels)
        .map(|i| lo + arc_length * i as f64 / theta_panels as f64)
        .collect();
    let (ts, wt) = panel_rule(&breaks, nodes);
    let mut out_nodes = Vec::with_capacity(rs.len() * ts.len());
    let mut out_weights = Vec::with_capacity(rs.len() * ts.len());
    for (r, wrv) in rs.iter().zip(&wr) {
        for (t, wtv) in ts.iter().zip(&wt) {
            out_nodes.push(Complex64::from_polar(*r, *t));
            out_weights.push(wrv * wtv);
        }
    }
    NodeSet {
        nodes: out_nodes,
        weights: out_weights,
    }
}

/// Node set over a Carleson box at a given refinement depth (doubling `nodes`).
pub fn box_nodes(q: &CarlesonBox, alpha: f64, nodes: usize) -> NodeSet {
    match q {
        CarlesonBox::Halfplane { interval } => {
            box_nodes_halfplane((interval.left, interval.length), alpha, nodes, 2f64.powi(-36))
        }
        CarlesonBox::Disc {
            center_angle,
            arc_length,
        } => box_nodes_disc(*center_angle, *arc_length, alpha, nodes),
    }
}

/// Per-axis node sets for a product domain, with a reduced budget so tensor
/// products stay affordable.
pub fn product_axis_nodes(d: &DomainSpec, rule: &QuadratureRule) -> Vec<NodeSet> {
    let reduced = QuadratureRule {
        nodes_per_axis: rule.nodes_per_axis.max(4).min(5),
        half_width: rule.half_width.min(20.0),
        floor_height: rule.floor_height.max(1e-3),
        ceiling_height: rule.ceiling_height.min(20.0),
        grading_ratio: 0.4,
        kind: rule.kind,
    };
    (0..d.dim())
        .map(|k| {
            if d.kind().is_disc_like() {
                disc_nodes_with(&reduced, d.alpha()[k], Some(12 * reduced.nodes_per_axis), None)
            } else {
                halfplane_nodes(&reduced, d.alpha()[k])
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Integration operations
// ---------------------------------------------------------------------------

fn check_finite(v: Complex64, node: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(DomainError::NonFiniteIntegrand { node })
    }
}

/// Quadrature approximation of ∫ f dν_α (disc, normalized) or ∫ f dV_α
/// (half-plane, unnormalized); products on 𝔻ⁿ/ℋⁿ.
pub fn integrate<F>(mut f: F, d: &DomainSpec, rule: &QuadratureRule) -> Result<Complex64>
where
    F: FnMut(&[Complex64]) -> Complex64,
{
    rule.validate()?;
    match d.kind() {
        DomainKind::Disc | DomainKind::Halfplane => {
            let set = if d.kind() == DomainKind::Disc {
                disc_nodes(rule, d.alpha1())
            } else {
                halfplane_nodes(rule, d.alpha1())
            };
            let mut terms = Vec::with_capacity(set.len());
            for (&z, &w) in set.nodes.iter().zip(&set.weights) {
                let v = check_finite(f(std::slice::from_ref(&z)), z)?;
                terms.push(v * w);
            }
            Ok(pairwise_sum_complex(&terms))
        }
        DomainKind::Polydisc(_) | DomainKind::Tube(_) => {
            let axes = product_axis_nodes(d, rule);
            integrate_product(&mut f, &axes)
        }
    }
}

fn integrate_product<F>(f: &mut F, axes: &[NodeSet]) -> Result<Complex64>
where
    F: FnMut(&[Complex64]) -> Complex64,
{
    let n = axes.len();
    let mut coords = vec![Complex64::new(0.0, 0.0); n];
    fn recurse<F>(
        f: &mut F,
        axes: &[NodeSet],
        k: usize,
        coords: &mut [Complex64],
        acc_weight: f64,
    ) -> Result<Complex64>
    where
        F: FnMut(&[Complex64]) -> Complex64,
    {
        if k == axes.len() {
            let v = f(coords);
            return check_finite(v * acc_weight, coords[0]);
        }
        let set = &axes[k];
        let mut terms = Vec::with_capacity(set.len());
        for (&z, &w) in set.nodes.iter().zip(&set.weights) {
            coords[k] = z;
            terms.push(recurse(f, axes, k + 1, coords, acc_weight * w)?);
        }
        Ok(pairwise_sum_complex(&terms))
    }
    recurse(f, axes, 0, &mut coords, 1.0)
}

/// `integrate` with a dimension check against the symbol's arity.
pub fn integrate_symbol(f: &Symbol, d: &DomainSpec, rule: &QuadratureRule) -> Result<Complex64> {
    if f.arity() != d.dim() {
        return Err(DomainError::DomainMismatch(format!(
            "symbol has {} axes, domain has {}",
            f.arity(),
            d.dim()
        )));
    }
    integrate(|z| f.eval(z), d, rule)
}

/// Richardson-style self-consistency estimate: the value at doubled node
/// count together with the change from the base rule.
pub fn integrate_with_estimate<F>(
    mut f: F,
    d: &DomainSpec,
    rule: &QuadratureRule,
) -> Result<(Complex64, f64)>
where
    F: FnMut(&[Complex64]) -> Complex64,
{
    let coarse = integrate(&mut f, d, rule)?;
    let fine = integrate(&mut f, d, &rule.refine())?;
    Ok((fine, (fine - coarse).norm()))
}

/// ∫_Q f dV_α (or dν_α for disc boxes) with graded refinement near the
/// distinguished boundary. `nodes` controls the per-panel Gauss order.
pub fn integrate_box<F>(mut f: F, q: &CarlesonBox, alpha: f64, nodes: usize) -> Result<f64>
where
    F: FnMut(Complex64) -> f64,
{
    let set = box_nodes(q, alpha, nodes);
    let mut terms = Vec::with_capacity(set.len());
    for (&z, &w) in set.nodes.iter().zip(&set.weights) {
        let v = f(z);
        if !v.is_finite() {
            return Err(DomainError::NonFiniteIntegrand { node: z });
        }
        terms.push(v * w);
    }
    Ok(pairwise_sum(&terms))
}

/// (∫ |f|^p dμ_α)^{1/p} over the rule's window.
pub fn lp_norm<F>(mut f: F, p: f64, d: &DomainSpec, rule: &QuadratureRule) -> Result<f64>
where
    F: FnMut(&[Complex64]) -> Complex64,
{
    assert!(p >= 1.0, "lp_norm requires p >= 1");
    let v = integrate(
        |z| Complex64::new(f(z).norm().powf(p), 0.0),
        d,
        rule,
    )?;
    Ok(v.re.max(0.0).powf(1.0 / p))
}

/// `lp_norm` with the symbol arity check.
pub fn lp_norm_symbol(f: &Symbol, p: f64, d: &DomainSpec, rule: &QuadratureRule) -> Result<f64> {
    if f.arity() != d.dim() {
        return Err(DomainError::DomainMismatch(format!(
            "symbol has {} axes, domain has {}",
            f.arity(),
            d.dim()
        )));
    }
    lp_norm(|z| f.eval(z), p, d, rule)
}

// ---------------------------------------------------------------------------
// Sample grids
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleStrategy {
    /// Heights geometric between 1e−2 and 1e2 on the imaginary axis; probes
    /// sup_w quantities across scales on ℋ.
    LogHeight,
    /// Möbius-orbit points on the disc: seeded angles with radii marching
    /// geometrically toward the boundary.
    MobiusOrbit,
    Uniform,
}

/// A deterministic sampling grid hosting suprema/infima sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub points: Vec<DomainPoint>,
    pub strategy: SampleStrategy,
    pub seed: u64,
}

impl SampleGrid {
    /// A strict superset of this grid (same strategy and seed, more points),
    /// so sup-type quantities are monotone under refinement.
    pub fn refine(&self, d: &DomainSpec) -> SampleGrid {
        let count = match self.strategy {
            SampleStrategy::LogHeight => 2 * self.points.len().max(2) - 1,
            _ => 2 * self.points.len(),
        };
        let refined = sample_grid(d, self.strategy, count, self.seed);
        debug_assert!(self
            .points
            .iter()
            .all(|p| refined.points.iter().any(|q| q == p)));
        refined
    }
}

const LOG_HEIGHT_MIN: f64 = 1e-2;
const LOG_HEIGHT_MAX: f64 = 1e2;

/// Deterministic sample grid for sup/inf sweeps. Identical (strategy, seed,
/// count) always produce the identical grid.
pub fn sample_grid(d: &DomainSpec, strategy: SampleStrategy, count: usize, seed: u64) -> SampleGrid {
    assert!(count >= 1);
    let n = d.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    match strategy {
        SampleStrategy::LogHeight => {
            assert!(
                !d.kind().is_disc_like(),
                "log-height sampling applies to half-plane domains"
            );
            for i in 0..count {
                let t = if count == 1 {
                    0.0
                } else {
                    i as f64 / (count - 1) as f64
                };
                let h = LOG_HEIGHT_MIN * (LOG_HEIGHT_MAX / LOG_HEIGHT_MIN).powf(t);
                let coords = vec![Complex64::new(0.0, h); n];
                points.push(DomainPoint { kind: d.kind(), coords });
            }
        }
        SampleStrategy::MobiusOrbit => {
            assert!(
                d.kind().is_disc_like(),
                "mobius-orbit sampling applies to disc domains"
            );
            for i in 0..count {
                let coords = (0..n)
                    .map(|_| {
                        let r = 1.0 - 2f64.powf(-1.0 - i as f64 / 4.0);
                        let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                        Complex64::from_polar(r, theta)
                    })
                    .collect();
                points.push(DomainPoint { kind: d.kind(), coords });
            }
        }
        SampleStrategy::Uniform => {
            for _ in 0..count {
                let coords = (0..n)
                    .map(|_| {
                        if d.kind().is_disc_like() {
                            let r = rng.gen::<f64>().sqrt() * 0.999;
                            let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                            Complex64::from_polar(r, theta)
                        } else {
                            let x = rng.gen::<f64>() * 10.0 - 5.0;
                            let y = 0.05 + rng.gen::<f64>() * 5.0;
                            Complex64::new(x, y)
                        }
                    })
                    .collect();
                points.push(DomainPoint { kind: d.kind(), coords });
            }
        }
    }
    SampleGrid {
        points,
        strategy,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::dyadic::Interval;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spec_validation() {
        assert!(DomainSpec::disc(0.0).is_ok());
        assert!(DomainSpec::disc(-1.0).is_err());
        assert!(DomainSpec::polydisc(vec![0.0, -0.5]).is_ok());
        assert!(DomainSpec::polydisc(vec![0.0, -1.5]).is_err());
        assert!(DomainSpec::new(DomainKind::Disc, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn disc_measure_is_normalized() {
        // ∫ 1 dν_α = 1 for several α.
        for alpha in [0.0, 1.0, -0.5, 2.5] {
            let d = DomainSpec::disc(alpha).unwrap();
            let v = integrate(|_| c(1.0, 0.0), &d, &QuadratureRule::default()).unwrap();
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-8);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_integrand_gives_zero() {
        for d in [
            DomainSpec::disc(0.5).unwrap(),
            DomainSpec::halfplane(0.0).unwrap(),
            DomainSpec::polydisc(vec![0.0, 1.0]).unwrap(),
        ] {
            let v = integrate(|_| c(0.0, 0.0), &d, &QuadratureRule::default()).unwrap();
            assert_eq!(v, c(0.0, 0.0));
        }
    }

    #[test]
    fn disc_second_moment() {
        // Beta-integral oracle: ∫ |z|² dν_0 = 2∫_0^1 r³ dr = 1/2.
        let d = DomainSpec::disc(0.0).unwrap();
        let v = integrate(|z| c(z[0].norm_sqr(), 0.0), &d, &QuadratureRule::default()).unwrap();
        assert_abs_diff_eq!(v.re, 0.5, epsilon = 1e-10);
    }

    #[test]
    fn integrate_is_linear() {
        let d = DomainSpec::disc(0.5).unwrap();
        let rule = QuadratureRule::default();
        let f = |z: &[Complex64]| z[0] * z[0] + c(0.3, 0.1);
        let g = |z: &[Complex64]| (z[0] * c(0.0, 1.0)).exp();
        let (a, b) = (c(2.0, -1.0), c(0.5, 3.0));
        let lhs = integrate(|z| a * f(z) + b * g(z), &d, &rule).unwrap();
        let rhs = a * integrate(f, &d, &rule).unwrap() + b * integrate(g, &d, &rule).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn richardson_estimate_bounds_refinement_change() {
        let d = DomainSpec::disc(0.0).unwrap();
        let rule = QuadratureRule::default();
        let f = |z: &[Complex64]| (z[0] * 2.0).cos();
        let (fine, est) = integrate_with_estimate(f, &d, &rule).unwrap();
        let finer = integrate(f, &d, &rule.refine().refine()).unwrap();
        assert!((finer - fine).norm() <= est + 1e-14);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let d = DomainSpec::halfplane(0.0).unwrap();
        let err = integrate(|z| c(1.0 / (z[0].im - z[0].im), 0.0), &d, &QuadratureRule::default());
        assert!(matches!(err, Err(DomainError::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn box_integrals_match_closed_forms() {
        // ∫_Q 1 dV_α = |I|^{2+α}/(1+α) for Q over an interval of length |I|.
        for (len, alpha) in [(1.0, 0.0), (0.5, 1.0), (2.0, -0.5), (3.0, 0.7)] {
            let q = CarlesonBox::over_interval(Interval::new(0.25, len));
            let v = integrate_box(|_| 1.0, &q, alpha, 8).unwrap();
            let exact = len.powf(2.0 + alpha) / (1.0 + alpha);
            assert_abs_diff_eq!(v / exact, 1.0, epsilon = 1e-10);
        }
        // f(x+iy) = y over the unit box at α = 0: ∫ = 1/2.
        let q = CarlesonBox::over_interval(Interval::new(0.0, 1.0));
        let v = integrate_box(|z| z.im, &q, 0.0, 8).unwrap();
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn disc_box_integral_closed_form() {
        // |Q|_α for an arc of length ℓ: ℓ · (2ℓ − ℓ²)^{α+1} / (2π).
        for (len, alpha) in [(1.0, 0.0), (0.5, 1.0), (0.25, -0.5)] {
            let q = CarlesonBox::over_arc(0.3, len);
            let v = integrate_box(|_| 1.0, &q, alpha, 8).unwrap();
            let exact = len * (2.0 * len - len * len).powf(alpha + 1.0)
                / (2.0 * std::f64::consts::PI);
            assert_abs_diff_eq!(v / exact, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn monomial_orthogonality_on_disc() {
        // ‖Σ c_k z^k‖²_{2,α} = Σ |c_k|² ‖z^k‖²_{2,α}, with the Beta-integral
        // closed form ‖z^k‖² = k!Γ(α+2)/Γ(k+α+2).
        use statrs::function::gamma::ln_gamma;
        for alpha in [0.0, 1.0, 0.5] {
            let d = DomainSpec::disc(alpha).unwrap();
            let coeff = [c(1.0, 0.5), c(-0.3, 0.2), c(0.0, -1.1), c(0.7, 0.0)];
            let norm = lp_norm(
                |z| {
                    let mut acc = c(0.0, 0.0);
                    let mut zp = c(1.0, 0.0);
                    for ck in coeff {
                        acc += ck * zp;
                        zp *= z[0];
                    }
                    acc
                },
                2.0,
                &d,
                &QuadratureRule::default(),
            )
            .unwrap();
            let mut sum = 0.0;
            for (k, ck) in coeff.iter().enumerate() {
                let h = (ln_gamma(k as f64 + 1.0) + ln_gamma(alpha + 2.0)
                    - ln_gamma(k as f64 + alpha + 2.0))
                .exp();
                sum += ck.norm_sqr() * h;
            }
            assert_abs_diff_eq!(norm, sum.sqrt(), epsilon = 1e-8);
        }
    }

    #[test]
    fn lp_norm_monotone_under_window_growth() {
        let d = DomainSpec::halfplane(0.0).unwrap();
        let rule = QuadratureRule::default();
        let f = |z: &[Complex64]| (z[0] + c(0.0, 1.0)).powi(-2);
        let base = lp_norm(f, 2.0, &d, &rule).unwrap();
        let wide = lp_norm(f, 2.0, &d, &rule.widen()).unwrap();
        assert!(wide >= base - 1e-13);
    }

    #[test]
    fn log_height_grid_spans_scales() {
        let d = DomainSpec::halfplane(0.0).unwrap();
        let g = sample_grid(&d, SampleStrategy::LogHeight, 3, 7);
        let hs: Vec<f64> = g.points.iter().map(|p| p.scalar().im).collect();
        assert_abs_diff_eq!(hs[0], 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(hs[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hs[2], 100.0, epsilon = 1e-10);
    }

    #[test]
    fn grids_are_deterministic_and_refine_to_supersets() {
        let d = DomainSpec::polydisc(vec![0.0, 0.0]).unwrap();
        let a = sample_grid(&d, SampleStrategy::MobiusOrbit, 9, 42);
        let b = sample_grid(&d, SampleStrategy::MobiusOrbit, 9, 42);
        assert_eq!(a, b);
        assert!(a
            .points
            .iter()
            .all(|p| p.coords.iter().all(|z| z.norm() < 1.0)));
        let refined = a.refine(&d);
        assert_eq!(refined.points.len(), 18);
        for p in &a.points {
            assert!(refined.points.contains(p));
        }

        let d1 = DomainSpec::disc(0.0).unwrap();
        let u = sample_grid(&d1, SampleStrategy::Uniform, 1, 5);
        let v = sample_grid(&d1, SampleStrategy::Uniform, 1, 5);
        assert_eq!(u, v);
    }
}
