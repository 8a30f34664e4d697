//! Weight machinery: the averaged weight A(x) of the fractional Hardy
//! theorem, the V(x) and A(x) of the Hardy-Sobolev theorem, and the
//! admissibility functional
//! `D₁ = sup_{x≠a} [∫_{X∖B} g]^{1/q} [∫_B h^{1−p'}]^{1/p'}`
//! computed either in closed form (homogeneous groups, unit weights) or
//! numerically by a log-spaced scan plus golden-section refinement.
//!
//! The sup over x ≠ 0 in the source material is read as sup over x ≠ a
//! (0 is the group identity / pole).

use std::sync::Arc;

use serde::Serialize;

use crate::error::{HardyError, Result};
use crate::quadrature::{adaptive_gk, ball_average, sample_ball, CumulativeRadial, QuadratureConfig};
use crate::spaces::{SpaceDescriptor, SpacePoint};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Built-in radial weight families (config names: "unit", "const(c)",
/// "exp_decay(k)", "power(γ)", "radial_table(file)").
#[derive(Clone)]
pub enum RadialWeight {
    Unit,
    Const(f64),
    /// e^{−rate·r}; a negative rate gives exponential growth.
    ExpDecay { rate: f64 },
    /// r^{exponent}
    Power { exponent: f64 },
    /// piecewise-linear interpolation of (r, value) samples, constant
    /// beyond the ends
    Table(Arc<TableWeight>),
    Custom {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        label: String,
    },
}

#[derive(Debug, Clone)]
pub struct TableWeight {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl TableWeight {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.is_empty() {
            return Err(HardyError::InvalidInput(
                "radial table needs matching non-empty radii/values".into(),
            ));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HardyError::InvalidInput(
                "radial table radii must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !(*v > 0.0)) {
            return Err(HardyError::InvalidInput("weights must be positive".into()));
        }
        Ok(TableWeight { radii, values })
    }

    fn eval(&self, r: f64) -> f64 {
        let n = self.radii.len();
        if r <= self.radii[0] {
            return self.values[0];
        }
        if r >= self.radii[n - 1] {
            return self.values[n - 1];
        }
        let i = self.radii.partition_point(|&x| x <= r) - 1;
        let t = (r - self.radii[i]) / (self.radii[i + 1] - self.radii[i]);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }
}

impl std::fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RadialWeight::Unit => write!(f, "unit"),
            RadialWeight::Const(c) => write!(f, "const({c})"),
            RadialWeight::ExpDecay { rate } => write!(f, "exp_decay({rate})"),
            RadialWeight::Power { exponent } => write!(f, "power({exponent})"),
            RadialWeight::Table(_) => write!(f, "radial_table"),
            RadialWeight::Custom { label, .. } => write!(f, "custom({label})"),
        }
    }
}

impl RadialWeight {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialWeight::Unit => 1.0,
            RadialWeight::Const(c) => *c,
            RadialWeight::ExpDecay { rate } => (-rate * r).exp(),
            RadialWeight::Power { exponent } => r.powf(*exponent),
            RadialWeight::Table(t) => t.eval(r),
            RadialWeight::Custom { f, .. } => f(r),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, RadialWeight::Unit)
    }

    /// Parses a config-file family name.
    pub fn from_family(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "unit" {
            return Ok(RadialWeight::Unit);
        }
        let (name, arg) = match s.split_once('(') {
            Some((n, rest)) if rest.ends_with(')') => (n.trim(), rest[..rest.len() - 1].trim()),
            _ => {
                return Err(HardyError::InvalidInput(format!(
                    "weight family '{s}': expected name(arg)"
                )))
            }
        };
        let num = || -> Result<f64> {
            arg.parse()
                .map_err(|_| HardyError::InvalidInput(format!("weight family '{s}': bad argument")))
        };
        match name {
            "const" => Ok(RadialWeight::Const(num()?)),
            "exp_decay" => Ok(RadialWeight::ExpDecay { rate: num()? }),
            "power" => Ok(RadialWeight::Power { exponent: num()? }),
            "radial_table" => {
                let text = std::fs::read_to_string(arg).map_err(|e| {
                    HardyError::InvalidInput(format!("radial_table '{arg}': {e}"))
                })?;
                let mut radii = Vec::new();
                let mut values = Vec::new();
                for (ln, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let mut it = line.split_whitespace();
                    let (r, v) = (it.next(), it.next());
                    match (r.and_then(|x| x.parse().ok()), v.and_then(|x| x.parse().ok())) {
                        (Some(r), Some(v)) => {
                            radii.push(r);
                            values.push(v);
                        }
                        _ => {
                            return Err(HardyError::InvalidInput(format!(
                                "radial_table '{arg}' line {}: expected 'r value'",
                                ln + 1
                            )))
                        }
                    }
                }
                Ok(RadialWeight::Table(Arc::new(TableWeight::new(radii, values)?)))
            }
            _ => Err(HardyError::InvalidInput(format!(
                "unknown weight family '{s}'"
            ))),
        }
    }
}

/// The pair weight v(x, y) of the fractional Hardy theorem.
#[derive(Clone)]
pub enum PairWeight {
    /// v(x, y) = w(|y|_a): radial in the integrated variable.
    OfY(RadialWeight),
    Custom {
        f: Arc<dyn Fn(&SpacePoint, &SpacePoint) -> f64 + Send + Sync>,
        label: String,
    },
}

impl PairWeight {
    pub fn is_unit(&self) -> bool {
        matches!(self, PairWeight::OfY(w) if w.is_unit())
    }
}

impl std::fmt::Debug for PairWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PairWeight::OfY(w) => write!(f, "{w:?}"),
            PairWeight::Custom { label, .. } => write!(f, "custom({label})"),
        }
    }
}

/// A point weight, radial or general (general weights only get the
/// sampled D₁ lower bound).
#[derive(Clone)]
pub enum PointWeight {
    Radial(RadialWeight),
    General {
        f: Arc<dyn Fn(&SpaceDescriptor, &SpacePoint) -> f64 + Send + Sync>,
        label: String,
    },
}

impl PointWeight {
    pub fn is_radial(&self) -> bool {
        matches!(self, PointWeight::Radial(_))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, PointWeight::Radial(w) if w.is_unit())
    }

    pub fn eval(&self, space: &SpaceDescriptor, x: &SpacePoint) -> Result<f64> {
        match self {
            PointWeight::Radial(w) => Ok(w.eval(space.norm(x)?)),
            PointWeight::General { f, .. } => Ok(f(space, x)),
        }
    }

    fn radial(&self) -> Result<&RadialWeight> {
        match self {
            PointWeight::Radial(w) => Ok(w),
            PointWeight::General { label, .. } => Err(HardyError::InvalidInput(format!(
                "weight '{label}' is not radial; only the sampled D₁ lower bound applies"
            ))),
        }
    }

    pub fn as_radial(&self) -> Option<&RadialWeight> {
        match self {
            PointWeight::Radial(w) => Some(w),
            PointWeight::General { .. } => None,
        }
    }
}

impl std::fmt::Debug for PointWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointWeight::Radial(w) => write!(f, "{w:?}"),
            PointWeight::General { label, .. } => write!(f, "general({label})"),
        }
    }
}

/// The weights of one verification case: v(x,y) for the fractional
/// Hardy kernel, v(y) and z(x) for the Hardy-Sobolev forms.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    pub v_pair: PairWeight,
    pub v: PointWeight,
    pub z: PointWeight,
}

impl WeightSpec {
    pub fn unit() -> Self {
        WeightSpec {
            v_pair: PairWeight::OfY(RadialWeight::Unit),
            v: PointWeight::Radial(RadialWeight::Unit),
            z: PointWeight::Radial(RadialWeight::Unit),
        }
    }

    pub fn all_unit(&self) -> bool {
        self.v_pair.is_unit() && self.v.is_unit() && self.z.is_unit()
    }

    /// Single-family shorthand: v(x,y), v(y), z(x) all drawn from one
    /// radial family.
    pub fn from_family(family: &str) -> Result<Self> {
        let w = RadialWeight::from_family(family)?;
        Ok(WeightSpec {
            v_pair: PairWeight::OfY(w.clone()),
            v: PointWeight::Radial(w.clone()),
            z: PointWeight::Radial(w),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum D1Method {
    ClosedForm,
    NumericRadial,
    NumericGeneral,
}

/// D₁ with its smallness value `(p')^{1/p'} p^{1/q} D₁` and the
/// admissibility verdict (strict, after widening numeric values by
/// three error estimates).
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub d1: f64,
    pub smallness: f64,
    pub admissible: bool,
    pub method: D1Method,
    pub error_estimate: f64,
    /// Radius attaining the sup (numeric methods).
    pub sup_radius: Option<f64>,
    pub warning: Option<String>,
}

fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// Closed-form D₁ on a homogeneous group with unit weights:
/// `D₁ = Q (p−1)^{1/p'} / (sp + Qp − Q)`, smallness
/// `(p')^{1/p'} p^{1/p} D₁ = Qp/(sp + Qp − Q)`, admissible iff Q < sp.
pub fn closed_form_d1_homogeneous(q_dim: f64, s: f64, p: f64) -> Result<AdmissibilityReport> {
    if !(q_dim > 0.0 && s > 0.0 && p > 1.0) {
        return Err(HardyError::InvalidInput(
            "need Q > 0, s > 0 and p > 1".into(),
        ));
    }
    let pp = conjugate(p);
    let denom = s * p + q_dim * p - q_dim;
    let d1 = q_dim * (p - 1.0).powf(1.0 / pp) / denom;
    let smallness = q_dim * p / denom;
    // the simplification relies on (p')^{1/p'} p^{1/p} (p-1)^{1/p'} = p
    debug_assert!(
        (pp.powf(1.0 / pp) * p.powf(1.0 / p) * (p - 1.0).powf(1.0 / pp) - p).abs()
            <= 1e-12 * p
    );
    Ok(AdmissibilityReport {
        d1,
        smallness,
        admissible: q_dim < s * p,
        method: D1Method::ClosedForm,
        error_estimate: 0.0,
        sup_radius: None,
        warning: None,
    })
}

/// Numeric D₁ for radial g, h on a 1-D grid: suffix integrals of g·λ
/// (plus an analytic power-law tail beyond R), prefix integrals of
/// h^{1−p'}·λ, a log-spaced coarse scan and golden-section refinement.
///
/// `g_tail_exponent` is the power k with g(r) ≈ c·r^k at infinity; when
/// k + Q ≥ 0 the outer integral diverges and the report carries D₁ = ∞.
pub fn compute_d1_numeric(
    space: &SpaceDescriptor,
    p: f64,
    q: f64,
    g: &dyn Fn(f64) -> f64,
    h_conj: &dyn Fn(f64) -> f64,
    g_tail_exponent: f64,
    cfg: &QuadratureConfig,
) -> Result<AdmissibilityReport> {
    cfg.validate()?;
    if !(p > 1.0 && q > 0.0) {
        return Err(HardyError::InvalidInput("need p > 1, q > 0".into()));
    }
    let pp = conjugate(p);
    let r_max = cfg.truncation_radius;
    let sphere = space.sphere_measure();

    let divergent_report = |warning: String| AdmissibilityReport {
        d1: f64::INFINITY,
        smallness: f64::INFINITY,
        admissible: false,
        method: D1Method::NumericRadial,
        error_estimate: 0.0,
        sup_radius: None,
        warning: Some(warning),
    };

    // tail of the outer integral beyond R: power model for g against the
    // space's actual λ
    let tail = match crate::quadrature::power_model_tail(space, g(r_max), g_tail_exponent, r_max)
    {
        Some(t) => t,
        None => {
            return Ok(divergent_report(format!(
                "outer integrand g ~ r^{g_tail_exponent:.3} against λ: ∫ g dy diverges beyond R"
            )))
        }
    };

    // graded node grid, log-spaced below R/100 and uniform above
    let mut nodes: Vec<f64> = Vec::new();
    let mut t = r_max * 1e-6;
    while t < r_max * 0.01 {
        nodes.push(t);
        t *= 1.35;
    }
    let uniform = cfg.radial_nodes.max(256);
    for i in 0..=uniform {
        nodes.push(r_max * 0.01 + (r_max - r_max * 0.01) * i as f64 / uniform as f64);
    }

    let g_density = |r: f64| sphere * g(r) * space.polar_weight(r).unwrap_or(0.0);
    let h_density = |r: f64| sphere * h_conj(r) * space.polar_weight(r).unwrap_or(0.0);

    // prefix of h^{1-p'}·λ needs integrability at 0
    let inner_head = match crate::quadrature::CumulativeRadial::build_prefix_head(
        &h_density, nodes[0],
    ) {
        Ok(v) => v,
        Err(HardyError::Divergent(_)) => {
            return Ok(divergent_report(
                "h^{1-p'} is not locally integrable at the pole".into(),
            ))
        }
        Err(e) => return Err(e),
    };

    let n = nodes.len();
    let mut g_cells = vec![0.0; n - 1];
    let mut h_cells = vec![0.0; n - 1];
    let mut g_errs = vec![0.0; n - 1];
    let mut h_errs = vec![0.0; n - 1];
    for i in 0..n - 1 {
        let (gv, ge, _) = adaptive_gk(&g_density, nodes[i], nodes[i + 1], 1e-11, 1e-300, 8);
        let (hv, he, _) = adaptive_gk(&h_density, nodes[i], nodes[i + 1], 1e-11, 1e-300, 8);
        g_cells[i] = gv;
        h_cells[i] = hv;
        g_errs[i] = ge;
        h_errs[i] = he;
    }
    // outer(r_i) = ∫_{r_i}^{R} + tail; inner(r_i) = head + ∫_{r_0}^{r_i};
    // errors accumulate over the same cells each side actually uses
    let mut outer = vec![0.0; n];
    let mut outer_err = vec![tail * 1e-9; n];
    for i in (0..n - 1).rev() {
        outer[i] = outer[i + 1] + g_cells[i];
        outer_err[i] = outer_err[i + 1] + g_errs[i];
    }
    for o in outer.iter_mut() {
        *o += tail;
    }
    let mut inner = vec![inner_head.0; n];
    let mut inner_err = vec![inner_head.1; n];
    for i in 1..n {
        inner[i] = inner[i - 1] + h_cells[i - 1];
        inner_err[i] = inner_err[i - 1] + h_errs[i - 1];
    }

    let d1_at = |o: f64, i: f64| -> f64 {
        if o <= 0.0 || i <= 0.0 {
            0.0
        } else {
            o.powf(1.0 / q) * i.powf(1.0 / pp)
        }
    };

    // coarse scan restricted to the documented bracket [1e-4 R, R]
    let scan_lo = r_max * 1e-4;
    let mut best = (0usize, 0.0f64);
    for i in 0..n {
        if nodes[i] < scan_lo {
            continue;
        }
        let v = d1_at(outer[i], inner[i]);
        if v > best.1 {
            best = (i, v);
        }
    }
    let (bi, mut d1) = best;
    let mut sup_radius = nodes[bi.min(n - 1)];

    // golden-section refinement inside the neighbouring cells
    {
        let lo_i = bi.saturating_sub(1);
        let hi_i = (bi + 1).min(n - 1);
        let eval = |r: f64| -> f64 {
            // exact partials from the nearest node
            let j = nodes.partition_point(|&x| x <= r) - 1;
            let (go, _, _) = adaptive_gk(&g_density, nodes[j], r, 1e-11, 1e-300, 6);
            let (ho, _, _) = adaptive_gk(&h_density, nodes[j], r, 1e-11, 1e-300, 6);
            let o = outer[j] - go;
            let i_ = inner[j] + ho;
            d1_at(o, i_)
        };
        let (mut a, mut b) = (nodes[lo_i], nodes[hi_i]);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - phi * (b - a);
        let mut x2 = a + phi * (b - a);
        let mut f1 = eval(x1);
        let mut f2 = eval(x2);
        for _ in 0..60 {
            if (b - a).abs() < 1e-12 * r_max {
                break;
            }
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = eval(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = eval(x1);
            }
        }
        let refined = f1.max(f2).max(d1);
        if refined > d1 {
            d1 = refined;
            sup_radius = 0.5 * (a + b);
        }
    }

    let mut warning = None;
    let eps = d1 * 1e-9;
    if bi + 1 >= n && d1 > eps {
        warning = Some("sup attained at the outer scan boundary; enlarge R".into());
    } else if nodes[bi] <= scan_lo * 1.35 && d1_at(outer[bi], inner[bi]) > d1 - eps {
        // boundary only matters when the value is still climbing there
        let interior_max = (bi + 1..n.min(bi + 10))
            .map(|i| d1_at(outer[i], inner[i]))
            .fold(0.0f64, f64::max);
        if interior_max < d1 - eps {
            warning = Some("sup attained at the inner scan boundary".into());
        }
    }

    // quadrature error of each side at the sup, pushed through the product
    let (o_star, i_star) = (outer[bi], inner[bi]);
    let error_estimate = if o_star > 0.0 && i_star > 0.0 {
        d1 * (outer_err[bi] / o_star / q + inner_err[bi] / i_star / pp)
    } else {
        0.0
    };

    let smallness = pp.powf(1.0 / pp) * p.powf(1.0 / q) * d1;
    let smallness_err = pp.powf(1.0 / pp) * p.powf(1.0 / q) * error_estimate;
    Ok(AdmissibilityReport {
        d1,
        smallness,
        admissible: smallness + 3.0 * smallness_err < 1.0,
        method: D1Method::NumericRadial,
        error_estimate,
        sup_radius: Some(sup_radius),
        warning,
    })
}

/// Sampled lower bound on D₁ for non-radial weights. Reported with a
/// warning; never treated as the true sup.
pub fn compute_d1_sampled(
    space: &SpaceDescriptor,
    p: f64,
    q: f64,
    g: &PointWeight,
    h: &PointWeight,
    cfg: &QuadratureConfig,
) -> Result<AdmissibilityReport> {
    cfg.validate()?;
    let pp = conjugate(p);
    let r_max = cfg.truncation_radius;
    let ball_total = space.ball_volume(r_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xD15A);
    let n_pts = cfg.mc_samples.max(1000);
    let mut pts = Vec::with_capacity(n_pts);
    for _ in 0..n_pts {
        let x = sample_ball(space, r_max, &mut rng)?;
        let r = space.norm(&x)?;
        let gv = g.eval(space, &x)?;
        let hv = h.eval(space, &x)?;
        if !(gv > 0.0 && hv > 0.0) {
            return Err(HardyError::InvalidInput(
                "weights must be positive at sampled points".into(),
            ));
        }
        pts.push((r, gv, hv.powf(1.0 - pp)));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let w = ball_total / n_pts as f64;
    // suffix of g, prefix of h^{1-p'} over the sampled radii
    let mut best = 0.0f64;
    let mut best_r = 0.0;
    let mut inner = 0.0f64;
    let mut outer: f64 = pts.iter().map(|p| p.1 * w).sum();
    for (r, gv, hc) in &pts {
        let v = if outer > 0.0 && inner > 0.0 {
            outer.powf(1.0 / q) * inner.powf(1.0 / pp)
        } else {
            0.0
        };
        if v > best {
            best = v;
            best_r = *r;
        }
        outer -= gv * w;
        inner += hc * w;
    }
    let smallness = pp.powf(1.0 / pp) * p.powf(1.0 / q) * best;
    Ok(AdmissibilityReport {
        d1: best,
        smallness,
        admissible: false, // a lower bound cannot certify smallness
        method: D1Method::NumericGeneral,
        error_estimate: best / (n_pts as f64).sqrt(),
        sup_radius: Some(best_r),
        warning: Some(
            "non-radial weights: sampled lower bound on D₁ (not a certified sup)".into(),
        ),
    })
}

/// A(x) of the fractional Hardy theorem,
/// `A(x) = ((1/|B(a,|x|)|) ∫_B v^{1−p'}(x,y) dy)^{1−p}`, cached over the
/// radius for radial pair weights.
pub struct HardyA {
    kind: HardyAKind,
    p: f64,
}

enum HardyAKind {
    Const(f64),
    Radial {
        cum: CumulativeRadial,
        space: SpaceDescriptor,
    },
    General {
        v: Arc<dyn Fn(&SpacePoint, &SpacePoint) -> f64 + Send + Sync>,
        cfg: QuadratureConfig,
    },
}

impl HardyA {
    pub fn build(
        space: &SpaceDescriptor,
        v_pair: &PairWeight,
        p: f64,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        if !(p > 1.0) {
            return Err(HardyError::InvalidInput("need p > 1".into()));
        }
        let pp = conjugate(p);
        let kind = match v_pair {
            PairWeight::OfY(RadialWeight::Unit) => HardyAKind::Const(1.0),
            PairWeight::OfY(RadialWeight::Const(c)) => {
                // (c^{1-p'})^{1-p} = c since (1-p')(1-p) = 1
                HardyAKind::Const(*c)
            }
            PairWeight::OfY(w) => {
                let w = w.clone();
                let cum = CumulativeRadial::build(space, cfg.truncation_radius, move |r| {
                    w.eval(r).powf(1.0 - pp)
                })?;
                HardyAKind::Radial {
                    cum,
                    space: space.clone(),
                }
            }
            PairWeight::Custom { f, .. } => HardyAKind::General {
                v: f.clone(),
                cfg: cfg.clone(),
            },
        };
        Ok(HardyA { kind, p })
    }

    /// A at radius r (radial kinds only; r > 0).
    pub fn eval_radial(&self, r: f64) -> Result<f64> {
        match &self.kind {
            HardyAKind::Const(c) => Ok(*c),
            HardyAKind::Radial { cum, space } => {
                if !(r > 0.0) {
                    return Err(HardyError::InvalidInput(
                        "A(x) needs x ≠ a (the ball at the pole is empty)".into(),
                    ));
                }
                let avg = cum.value(r) / space.ball_volume(r)?;
                Ok(avg.powf(1.0 - self.p))
            }
            HardyAKind::General { .. } => Err(HardyError::InvalidInput(
                "pair weight is not radial in y; evaluate at a point".into(),
            )),
        }
    }

    pub fn eval(&self, space: &SpaceDescriptor, x: &SpacePoint) -> Result<f64> {
        match &self.kind {
            HardyAKind::General { v, cfg, .. } => {
                let r = space.norm(x)?;
                if !(r > 0.0) {
                    return Err(HardyError::InvalidInput(
                        "A(x) needs x ≠ a (the ball at the pole is empty)".into(),
                    ));
                }
                let pp = conjugate(self.p);
                let v = v.clone();
                let x = x.clone();
                let (avg, _) =
                    ball_average(space, cfg, r, &move |y| v(&x, y).powf(1.0 - pp))?;
                Ok(avg.powf(1.0 - self.p))
            }
            _ => self.eval_radial(space.norm(x)?),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.kind, HardyAKind::Const(c) if c == 1.0)
    }
}

/// V and A of the Hardy-Sobolev theorem:
/// `V(x) = ∫_B v`,
/// `A(x) = |B|^{−q/p} (∫_B (v^p/z)^{1/(p−1)})^{−q/p'} V^q(x) v(x)`.
pub struct HsWeights {
    v: RadialWeight,
    v_cum: CumulativeRadial,
    m_cum: CumulativeRadial,
    space: SpaceDescriptor,
    pub p: f64,
    pub q: f64,
}

impl HsWeights {
    pub fn build(
        space: &SpaceDescriptor,
        w: &WeightSpec,
        p: f64,
        q: f64,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        if !(p > 1.0 && q > 1.0) {
            return Err(HardyError::InvalidInput("need p, q > 1".into()));
        }
        let v = w.v.radial()?.clone();
        let z = w.z.radial()?.clone();
        let vv = v.clone();
        let v_cum = CumulativeRadial::build(space, cfg.truncation_radius, move |r| vv.eval(r))?;
        let vv = v.clone();
        let m_cum = CumulativeRadial::build(space, cfg.truncation_radius, move |r| {
            (vv.eval(r).powf(p) / z.eval(r)).powf(1.0 / (p - 1.0))
        })?;
        Ok(HsWeights {
            v,
            v_cum,
            m_cum,
            space: space.clone(),
            p,
            q,
        })
    }

    pub fn v_at(&self, r: f64) -> f64 {
        self.v.eval(r)
    }

    pub fn big_v(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(HardyError::InvalidInput("V(x) needs x ≠ a".into()));
        }
        Ok(self.v_cum.value(r))
    }

    pub fn a_hs(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(HardyError::InvalidInput("A(x) needs x ≠ a".into()));
        }
        let pp = conjugate(self.p);
        let ball = self.space.ball_volume(r)?;
        let m = self.m_cum.value(r);
        let v_big = self.v_cum.value(r);
        Ok(ball.powf(-self.q / self.p)
            * m.powf(-self.q / pp)
            * v_big.powf(self.q)
            * self.v.eval(r))
    }
}

/// Eq.-level wrapper: A(x) for the fractional Hardy theorem.
pub fn compute_a_hardy(
    space: &SpaceDescriptor,
    w: &WeightSpec,
    p: f64,
    x: &SpacePoint,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let r = space.norm(x)?;
    if !(r > 0.0) {
        return Err(HardyError::InvalidInput(
            "x = a: the ball B(a, |x|_a) is empty".into(),
        ));
    }
    HardyA::build(space, &w.v_pair, p, cfg)?.eval(space, x)
}

/// V(x) = ∫_{B(a,|x|)} v(y) dy.
pub fn compute_v(
    space: &SpaceDescriptor,
    w: &WeightSpec,
    x: &SpacePoint,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let r = space.norm(x)?;
    if !(r > 0.0) {
        return Err(HardyError::InvalidInput("x = a: empty ball".into()));
    }
    match &w.v {
        PointWeight::Radial(v) => {
            let v = v.clone();
            let cum = CumulativeRadial::build(space, cfg.truncation_radius, move |t| v.eval(t))?;
            Ok(cum.value(r))
        }
        PointWeight::General { f, .. } => {
            let f = f.clone();
            let space_inner = space.clone();
            let (avg, _) = ball_average(space, cfg, r, &move |y| f(&space_inner, y))?;
            Ok(avg * space.ball_volume(r)?)
        }
    }
}

/// A(x) of the Hardy-Sobolev theorem (radial weights).
pub fn compute_a_hs(
    space: &SpaceDescriptor,
    w: &WeightSpec,
    p: f64,
    q: f64,
    x: &SpacePoint,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let r = space.norm(x)?;
    if !(r > 0.0) {
        return Err(HardyError::InvalidInput("x = a: empty ball".into()));
    }
    HsWeights::build(space, w, p, q, cfg)?.a_hs(r)
}

/// Assembles the fractional-Hardy D₁ (the g, h pair built from A, s, p)
/// and evaluates it: closed form for unit weights on closed-form-ball
/// spaces, numeric radial otherwise.
pub fn d1_fractional_hardy(
    space: &SpaceDescriptor,
    w: &WeightSpec,
    s: f64,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<AdmissibilityReport> {
    let q_dim = space.homogeneous_dimension();
    if w.v_pair.is_unit() && space_has_closed_ball(space) {
        return closed_form_d1_homogeneous(q_dim, s, p);
    }
    let a = HardyA::build(space, &w.v_pair, p, cfg)?;
    let pp = conjugate(p);
    let space_c = space.clone();
    let g = move |r: f64| {
        let a_r = a.eval_radial(r).unwrap_or(f64::NAN);
        a_r / (r.powf(s * p) * space_c.ball_volume(r).unwrap_or(f64::NAN).powf(p))
    };
    let a2 = HardyA::build(space, &w.v_pair, p, cfg)?;
    let h_conj = move |r: f64| (a2.eval_radial(r).unwrap_or(f64::NAN) / r.powf(s * p)).powf(1.0 - pp);
    let tail_exp = estimate_tail_exponent(&g, cfg.truncation_radius);
    compute_d1_numeric(space, p, p, &g, &h_conj, tail_exp, cfg)
}

/// Assembles the Hardy-Sobolev D₁ (Theorem 2.1 applied with exponents
/// (q, q) to g = A/(|y|^{sq} V^q), h = A v^{-q}/|y|^{sq}).
pub fn d1_hardy_sobolev(
    space: &SpaceDescriptor,
    w: &WeightSpec,
    s: f64,
    p: f64,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<AdmissibilityReport> {
    let q_dim = space.homogeneous_dimension();
    if w.all_unit() && space_has_closed_ball(space) {
        // with v ≡ z ≡ 1 the assembled pair reduces to the Hardy pair in
        // exponent q
        return closed_form_d1_homogeneous(q_dim, s, q);
    }
    let hs = HsWeights::build(space, w, p, q, cfg)?;
    let qq = conjugate(q);
    let hs2 = HsWeights::build(space, w, p, q, cfg)?;
    let g = move |r: f64| {
        let a = hs.a_hs(r).unwrap_or(f64::NAN);
        let v_big = hs.big_v(r).unwrap_or(f64::NAN);
        a / (r.powf(s * q) * v_big.powf(q))
    };
    let h_conj = move |r: f64| {
        let a = hs2.a_hs(r).unwrap_or(f64::NAN);
        (a * hs2.v_at(r).powf(-q) / r.powf(s * q)).powf(1.0 - qq)
    };
    let tail_exp = estimate_tail_exponent(&g, cfg.truncation_radius);
    compute_d1_numeric(space, q, q, &g, &h_conj, tail_exp, cfg)
}

fn space_has_closed_ball(space: &SpaceDescriptor) -> bool {
    matches!(
        space.ball_model(),
        crate::spaces::BallVolumeModel::ClosedForm { .. }
    )
}

/// Log-log slope of g between R/2 and R, used as the power-law tail
/// exponent for the built-in families (exact for pure powers).
fn estimate_tail_exponent(g: &dyn Fn(f64) -> f64, r: f64) -> f64 {
    let (a, b) = (g(0.5 * r), g(r));
    if a > 0.0 && b > 0.0 {
        (b / a).ln() / 2f64.ln()
    } else {
        f64::NEG_INFINITY // compactly supported: no tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn a_hardy_unit_and_const() {
        let space = SpaceDescriptor::euclidean(1).unwrap();
        let x = SpacePoint::new(vec![0.7]).unwrap();
        let w = WeightSpec::unit();
        assert_eq!(compute_a_hardy(&space, &w, 2.0, &x, &cfg()).unwrap(), 1.0);

        let mut w = WeightSpec::unit();
        w.v_pair = PairWeight::OfY(RadialWeight::Const(3.5));
        for p in [1.5, 2.0, 3.0] {
            assert_relative_eq!(
                compute_a_hardy(&space, &w, p, &x, &cfg()).unwrap(),
                3.5,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn a_hardy_exponential_weight_closed_form() {
        // ℝ, v(x,y) = e^{|y|}, p = 2, |x| = 1 → A = (1 − e^{-1})^{-1}
        let space = SpaceDescriptor::euclidean(1).unwrap();
        let x = SpacePoint::new(vec![1.0]).unwrap();
        let mut w = WeightSpec::unit();
        w.v_pair = PairWeight::OfY(RadialWeight::ExpDecay { rate: -1.0 });
        let a = compute_a_hardy(&space, &w, 2.0, &x, &cfg()).unwrap();
        assert_relative_eq!(a, 1.0 / (1.0 - (-1f64).exp()), max_relative = 1e-8);
        assert_relative_eq!(a, 1.58197670686932642, max_relative = 1e-8);
    }

    #[test]
    fn a_hardy_general_pair_weight_sampled_path() {
        // a custom pair weight that happens to be radial in y must agree
        // with the cached radial path within Monte-Carlo error
        let space = SpaceDescriptor::euclidean(1).unwrap();
        let x = SpacePoint::new(vec![1.0]).unwrap();
        let mut w = WeightSpec::unit();
        w.v_pair = PairWeight::Custom {
            f: Arc::new(|_x: &SpacePoint, y: &SpacePoint| (y.coords()[0].abs()).exp()),
            label: "exp growth in |y|".into(),
        };
        let mut cfgv = cfg();
        cfgv.mc_samples = 60_000;
        let a = compute_a_hardy(&space, &w, 2.0, &x, &cfgv).unwrap();
        assert_relative_eq!(a, 1.0 / (1.0 - (-1f64).exp()), max_relative = 2e-2);
    }

    #[test]
    fn a_hardy_rejects_the_pole() {
        let space = SpaceDescriptor::euclidean(1).unwrap();
        let x = SpacePoint::new(vec![0.0]).unwrap();
        assert!(compute_a_hardy(&space, &WeightSpec::unit(), 2.0, &x, &cfg()).is_err());
    }

    #[test]
    fn v_of_exponential_weight() {
        // ℝ, v(y) = e^{-|y|}, |x| = 1 → V = 2(1 - e^{-1})
        let space = SpaceDescriptor::euclidean(1).unwrap();
        let x = SpacePoint::new(vec![1.0]).unwrap();
        let mut w = WeightSpec::unit();
        w.v = PointWeight::Radial(RadialWeight::ExpDecay { rate: 1.0 });
        let v = compute_v(&space, &w, &x, &cfg()).unwrap();
        assert_relative_eq!(v, 2.0 * (1.0 - (-1f64).exp()), max_relative = 1e-9);
        assert_relative_eq!(v, 1.26424111765711536, max_relative = 1e-9);

        // unit weight: V = |B|
        let v = compute_v(&space, &WeightSpec::unit(), &x, &cfg()).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn a_hs_unit_weights_collapse_to_one() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for space in [
            SpaceDescriptor::euclidean(2).unwrap(),
            SpaceDescriptor::homogeneous(vec![1.0, 1.0, 2.0]).unwrap(),
            SpaceDescriptor::heisenberg(1).unwrap(),
            SpaceDescriptor::hyperbolic(2).unwrap(),
        ] {
            let hs = HsWeights::build(&space, &WeightSpec::unit(), 2.0, 3.0, &cfg()).unwrap();
            for _ in 0..100 {
                let r = rng.gen_range(0.05..10.0);
                assert!(
                    (hs.a_hs(r).unwrap() - 1.0).abs() < 1e-6,
                    "{:?} r = {r}: A = {}",
                    space.kind(),
                    hs.a_hs(r).unwrap()
                );
            }
        }
    }

    #[test]
    fn closed_form_d1_values() {
        // Q=4, s=1.5, p=3 → D₁ = 4·2^{2/3}/12.5, smallness = 12/12.5
        let rep = closed_form_d1_homogeneous(4.0, 1.5, 3.0).unwrap();
        assert_relative_eq!(rep.d1, 0.50796833662982383, max_relative = 1e-13);
        assert_relative_eq!(rep.smallness, 0.96, max_relative = 1e-13);
        assert!(rep.admissible);

        // boundary sp = Q: smallness exactly 1
        let rep = closed_form_d1_homogeneous(4.0, 1.0, 4.0).unwrap();
        assert_relative_eq!(rep.smallness, 1.0, max_relative = 1e-14);
        assert!(!rep.admissible);

        // Q=1, s=0.8, p=2
        let rep = closed_form_d1_homogeneous(1.0, 0.8, 2.0).unwrap();
        assert_relative_eq!(rep.d1, 1.0 / 2.6, max_relative = 1e-13);
        assert_relative_eq!(rep.smallness, 2.0 / 2.6, max_relative = 1e-13);
    }

    #[test]
    fn conjugate_identity_on_grid() {
        // (p')^{1/p'} p^{1/p} (p-1)^{1/p'} = p
        let mut p = 1.05;
        while p <= 10.0 {
            let pp = conjugate(p);
            let lhs = pp.powf(1.0 / pp) * p.powf(1.0 / p) * (p - 1.0).powf(1.0 / pp);
            assert!((lhs - p).abs() <= 1e-12 * p, "p = {p}: {lhs}");
            p += 0.05;
        }
    }

    #[test]
    fn smallness_below_one_iff_q_below_sp() {
        for q_dim in 1..=6 {
            for s_num in 1..10 {
                let s = s_num as f64 / 10.0;
                for p_step in 0..20 {
                    let p = 1.1 + p_step as f64 * 0.45;
                    let rep = closed_form_d1_homogeneous(q_dim as f64, s, p).unwrap();
                    assert_eq!(rep.smallness < 1.0, (q_dim as f64) < s * p);
                    assert_eq!(rep.admissible, (q_dim as f64) < s * p);
                }
            }
        }
    }

    #[test]
    fn numeric_d1_matches_closed_form_on_group() {
        let cfgv = QuadratureConfig::default().with_radius(40.0);
        for (q_dim, s, p) in [(4.0, 1.5, 3.0), (1.0, 0.8, 2.0), (2.0, 0.9, 4.0)] {
            let space = SpaceDescriptor::homogeneous_q(q_dim).unwrap();
            let pp = conjugate(p);
            let sphere_q = space.sphere_measure() / q_dim;
            let g = move |r: f64| r.powf(-s * p) * (sphere_q * r.powf(q_dim)).powf(-p);
            let h_conj = move |r: f64| r.powf(-s * p * (1.0 - pp));
            let rep = compute_d1_numeric(
                &space,
                p,
                p,
                &g,
                &h_conj,
                -s * p - q_dim * p,
                &cfgv,
            )
            .unwrap();
            let exact = closed_form_d1_homogeneous(q_dim, s, p).unwrap();
            assert!(
                (rep.d1 - exact.d1).abs() / exact.d1 < 0.01,
                "Q={q_dim} s={s} p={p}: numeric {} vs exact {}",
                rep.d1,
                exact.d1
            );
        }
    }

    #[test]
    fn d1_sup_location_and_boundary_warning() {
        let space = SpaceDescriptor::euclidean(1).unwrap();
        let cfgv = QuadratureConfig::default().with_radius(10.0);
        // compactly supported g: the sup sits strictly inside the bracket
        let rep = compute_d1_numeric(
            &space,
            2.0,
            2.0,
            &|r| if r < 1.0 { 1.0 } else { 1e-280 },
            &|_| 1.0,
            -80.0,
            &cfgv,
        )
        .unwrap();
        assert!(rep.d1.is_finite() && rep.d1 > 0.0);
        assert!(rep.warning.is_none(), "{:?}", rep.warning);
        assert!(rep.sup_radius.unwrap() <= 1.05);

        // nearly scale-free g with slowly growing product: the max keeps
        // climbing to the outer end of the bracket and must be flagged
        let rep = compute_d1_numeric(
            &space,
            2.0,
            2.0,
            &|r| r.powf(-1.05),
            &|_| 1.0,
            -1.05,
            &cfgv,
        )
        .unwrap();
        assert!(
            matches!(&rep.warning, Some(w) if w.contains("boundary")),
            "expected a boundary warning, got {:?}",
            rep.warning
        );
    }

    #[test]
    fn d1_divergent_outer_reported_not_errored() {
        // g with fat tail: g·λ ~ r^{-0.5} at infinity
        let space = SpaceDescriptor::euclidean(1).unwrap();
        let rep = compute_d1_numeric(
            &space,
            2.0,
            2.0,
            &|r| (1.0 + r).powf(-0.5),
            &|_| 1.0,
            -0.5,
            &cfg(),
        )
        .unwrap();
        assert!(rep.d1.is_infinite());
        assert!(!rep.admissible);
    }

    #[test]
    fn d1_assembled_unit_weights_use_closed_form() {
        let space = SpaceDescriptor::homogeneous_q(4.0).unwrap();
        let rep = d1_fractional_hardy(&space, &WeightSpec::unit(), 1.5, 3.0, &cfg()).unwrap();
        assert_eq!(rep.method, D1Method::ClosedForm);
        assert_relative_eq!(rep.smallness, 0.96, max_relative = 1e-13);
    }

    #[test]
    fn sampled_d1_is_lower_bound_with_warning() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let g = PointWeight::General {
            f: Arc::new(|space: &SpaceDescriptor, x: &SpacePoint| {
                let r = space.norm(x).unwrap();
                (1.0 + 0.2 * x.coords()[0] / (1.0 + r)) * (-(r * r)).exp()
            }),
            label: "tilted gaussian".into(),
        };
        let h = PointWeight::Radial(RadialWeight::Unit);
        let rep = compute_d1_sampled(&space, 2.0, 2.0, &g, &h, &cfg()).unwrap();
        assert!(rep.warning.is_some());
        assert_eq!(rep.method, D1Method::NumericGeneral);
        assert!(rep.d1 > 0.0 && rep.d1.is_finite());
    }

    #[test]
    fn weight_family_parsing() {
        assert!(RadialWeight::from_family("unit").unwrap().is_unit());
        let w = RadialWeight::from_family("exp_decay(0.5)").unwrap();
        assert_relative_eq!(w.eval(2.0), (-1.0f64).exp());
        let w = RadialWeight::from_family("power(0.3)").unwrap();
        assert_relative_eq!(w.eval(2.0), 2f64.powf(0.3));
        assert!(RadialWeight::from_family("bogus(1)").is_err());
    }
}
