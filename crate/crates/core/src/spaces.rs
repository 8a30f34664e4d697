//! Concrete models of polarisable metric measure spaces.
//!
//! Every space here carries a pole `a`, a distance, a polar weight
//! `λ(r)` with `∫ f dx = ∫_0^∞ ∫_{Σ_r} f λ(r) dω dr`, the measure of the
//! unit sphere `|𝔖|`, and a ball-volume model. Implemented families:
//! Euclidean `ℝⁿ` (λ = r^{n−1}), homogeneous groups (λ = r^{Q−1}),
//! the Heisenberg group with the Korányi–Folland gauge, hyperbolic space
//! (λ = sinh^{n−1} r, polar coordinates around the pole) and generic
//! radial spaces with a user-supplied λ.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

use crate::error::{HardyError, Result};
use crate::quadrature::{adaptive_gk, QuadratureConfig};

/// A point of a space; the coordinate layout is fixed by the owning
/// [`SpaceDescriptor`] kind.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacePoint {
    coords: Vec<f64>,
}

impl SpacePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(HardyError::InvalidInput(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(SpacePoint { coords })
    }

    pub fn origin(dim: usize) -> Self {
        SpacePoint {
            coords: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Which model of polarisable space a descriptor represents.
#[derive(Clone)]
pub enum SpaceKind {
    Euclidean {
        dim: usize,
    },
    /// Abelian group `ℝⁿ` with anisotropic dilations `D_λ x = (λ^{ν_i} x_i)`
    /// and the quasi-norm `|x| = max_i |x_i|^{1/ν_i}`. All ν_i ≥ 1, so the
    /// triangle inequality holds with constant 1 and the quasi-ball is the
    /// coordinate box `∏ (−r^{ν_i}, r^{ν_i})`.
    HomogeneousGroup {
        dilation_weights: Vec<f64>,
    },
    /// Heisenberg group ℍⁿ, points (x, y, t) ∈ ℝⁿ×ℝⁿ×ℝ with the
    /// Korányi–Folland gauge ((|x|²+|y|²)² + t²)^{1/4}.
    Heisenberg {
        n: usize,
    },
    /// Hyperbolic space in polar coordinates around the pole: a point is
    /// (r, ω) with ω on the Euclidean unit sphere S^{n−1}.
    Hyperbolic {
        dim: usize,
    },
    /// Half-line [0, ∞) with measure λ(r) dr per unit sphere mass.
    RadialCustom {
        lambda: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        label: String,
    },
}

impl fmt::Debug for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Euclidean { dim } => write!(f, "Euclidean({dim})"),
            SpaceKind::HomogeneousGroup { dilation_weights } => {
                write!(f, "HomogeneousGroup({dilation_weights:?})")
            }
            SpaceKind::Heisenberg { n } => write!(f, "Heisenberg({n})"),
            SpaceKind::Hyperbolic { dim } => write!(f, "Hyperbolic({dim})"),
            SpaceKind::RadialCustom { label, .. } => write!(f, "RadialCustom({label})"),
        }
    }
}

/// Ball-volume model: `|B(a, r)| = c·r^e` where a closed form exists,
/// otherwise a cached cumulative table of `|𝔖|·∫_0^r λ(t) dt`.
#[derive(Debug, Clone)]
pub enum BallVolumeModel {
    ClosedForm { coefficient: f64, exponent: f64 },
    Numeric(RadialVolumeTable),
}

/// Cumulative table of the radial measure on a uniform grid, with the
/// summed quadrature error of its construction.
#[derive(Clone)]
pub struct RadialVolumeTable {
    step: f64,
    prefix: Vec<f64>,
    error: f64,
    density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for RadialVolumeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialVolumeTable")
            .field("step", &self.step)
            .field("nodes", &self.prefix.len())
            .field("error", &self.error)
            .finish()
    }
}

impl fmt::Debug for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpaceDescriptor")
            .field("kind", &self.kind)
            .field("q", &self.q)
            .field("sphere_measure", &self.sphere_measure)
            .field("beta", &self.beta)
            .finish()
    }
}

impl RadialVolumeTable {
    fn build(density: Arc<dyn Fn(f64) -> f64 + Send + Sync>, r_max: f64, nodes: usize) -> Self {
        let step = r_max / nodes as f64;
        let mut prefix = Vec::with_capacity(nodes + 1);
        prefix.push(0.0);
        let mut total = 0.0;
        let mut error = 0.0;
        for i in 0..nodes {
            let (v, e, _) = adaptive_gk(
                &|r| density(r),
                i as f64 * step,
                (i + 1) as f64 * step,
                1e-13,
                1e-300,
                8,
            );
            total += v;
            error += e;
            prefix.push(total);
        }
        RadialVolumeTable {
            step,
            prefix,
            error,
            density,
        }
    }

    fn value(&self, r: f64) -> f64 {
        let r_max = self.step * (self.prefix.len() - 1) as f64;
        if r >= r_max {
            let (tail, _, _) = adaptive_gk(&|t| (self.density)(t), r_max, r, 1e-12, 1e-300, 40);
            return self.prefix[self.prefix.len() - 1] + tail;
        }
        let i = (r / self.step).floor() as usize;
        let lo = i as f64 * self.step;
        let (part, _, _) = adaptive_gk(&|t| (self.density)(t), lo, r, 1e-13, 1e-300, 6);
        self.prefix[i] + part
    }
}

/// A polarisable metric measure space with its pole, homogeneous
/// dimension, sphere measure and quasi-triangle constant.
#[derive(Clone)]
pub struct SpaceDescriptor {
    kind: SpaceKind,
    base: SpacePoint,
    q: f64,
    sphere_measure: f64,
    beta: f64,
    ball: BallVolumeModel,
}

/// Surface measure of the Euclidean unit sphere S^{n−1} in ℝⁿ.
fn euclidean_sphere_measure(n: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

/// Lebesgue volume of the unit Korányi ball in ℍⁿ:
/// ω_n = πⁿ · B(n/2, 3/2) / Γ(n)  (for n = 1 this is π²/2).
pub fn koranyi_unit_ball_volume(n: usize) -> f64 {
    let nh = n as f64 / 2.0;
    let b = gamma(nh) * gamma(1.5) / gamma(nh + 1.5);
    std::f64::consts::PI.powi(n as i32) * b / gamma(n as f64)
}

impl SpaceDescriptor {
    pub fn euclidean(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HardyError::InvalidInput("dimension must be >= 1".into()));
        }
        let s = euclidean_sphere_measure(n);
        Ok(SpaceDescriptor {
            kind: SpaceKind::Euclidean { dim: n },
            base: SpacePoint::origin(n),
            q: n as f64,
            sphere_measure: s,
            beta: 1.0,
            ball: BallVolumeModel::ClosedForm {
                coefficient: s / n as f64,
                exponent: n as f64,
            },
        })
    }

    /// Homogeneous group on ℝⁿ with the given dilation weights.
    /// Weights must satisfy ν_i ≥ 1 (normalize so the smallest is 1);
    /// this makes `max_i |x_i|^{1/ν_i}` a genuine quasi-norm with
    /// triangle constant 1.
    pub fn homogeneous(dilation_weights: Vec<f64>) -> Result<Self> {
        if dilation_weights.is_empty() {
            return Err(HardyError::InvalidInput(
                "need at least one dilation weight".into(),
            ));
        }
        if dilation_weights.iter().any(|&v| !(v >= 1.0) || !v.is_finite()) {
            return Err(HardyError::InvalidInput(
                "dilation weights must be finite and >= 1 (normalize the smallest to 1)".into(),
            ));
        }
        let n = dilation_weights.len();
        let q: f64 = dilation_weights.iter().sum();
        let unit_ball = 2f64.powi(n as i32);
        Ok(SpaceDescriptor {
            kind: SpaceKind::HomogeneousGroup { dilation_weights },
            base: SpacePoint::origin(n),
            q,
            sphere_measure: q * unit_ball,
            beta: 1.0,
            ball: BallVolumeModel::ClosedForm {
                coefficient: unit_ball,
                exponent: q,
            },
        })
    }

    /// Shorthand for a group carrying only its homogeneous dimension:
    /// the one-coordinate group with ν₁ = Q.
    pub fn homogeneous_q(q: f64) -> Result<Self> {
        Self::homogeneous(vec![q])
    }

    pub fn heisenberg(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HardyError::InvalidInput("need n >= 1".into()));
        }
        let q = (2 * n + 2) as f64;
        let omega = koranyi_unit_ball_volume(n);
        Ok(SpaceDescriptor {
            kind: SpaceKind::Heisenberg { n },
            base: SpacePoint::origin(2 * n + 1),
            q,
            sphere_measure: q * omega,
            beta: 1.0,
            ball: BallVolumeModel::ClosedForm {
                coefficient: omega,
                exponent: q,
            },
        })
    }

    pub fn hyperbolic(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(HardyError::InvalidInput(
                "hyperbolic model needs dimension >= 2".into(),
            ));
        }
        let s = euclidean_sphere_measure(n);
        let m = (n - 1) as i32;
        let density = Arc::new(move |r: f64| s * r.sinh().powi(m));
        Ok(SpaceDescriptor {
            kind: SpaceKind::Hyperbolic { dim: n },
            base: SpacePoint::origin(n + 1), // (r, ω) with r = 0
            q: n as f64,
            sphere_measure: s,
            beta: 1.0,
            ball: BallVolumeModel::Numeric(RadialVolumeTable::build(density, 64.0, 2048)),
        })
    }

    /// Radial space on the half-line with user-supplied λ. `q` is the
    /// local scaling dimension (λ(r) ~ r^{q−1} near 0) used by the
    /// admissibility brackets.
    pub fn radial_custom(
        lambda: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        q: f64,
        sphere_measure: f64,
        label: &str,
    ) -> Result<Self> {
        if !(q > 0.0) || !(sphere_measure > 0.0) {
            return Err(HardyError::InvalidInput(
                "q and sphere_measure must be positive".into(),
            ));
        }
        let lam = lambda.clone();
        let density = Arc::new(move |r: f64| sphere_measure * lam(r));
        Ok(SpaceDescriptor {
            kind: SpaceKind::RadialCustom {
                lambda,
                label: label.to_string(),
            },
            base: SpacePoint::origin(1),
            q,
            sphere_measure,
            beta: 1.0,
            ball: BallVolumeModel::Numeric(RadialVolumeTable::build(density, 64.0, 2048)),
        })
    }

    /// Override the quasi-triangle constant (Heisenberg reports name the
    /// value in use).
    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if !(beta >= 1.0) {
            return Err(HardyError::InvalidInput("beta must be >= 1".into()));
        }
        self.beta = beta;
        Ok(self)
    }

    /// Move the pole. Only meaningful for translation-invariant kinds.
    pub fn with_base_point(mut self, base: SpacePoint) -> Result<Self> {
        match self.kind {
            SpaceKind::Euclidean { .. }
            | SpaceKind::HomogeneousGroup { .. }
            | SpaceKind::Heisenberg { .. } => {
                self.check_point(&base)?;
                self.base = base;
                Ok(self)
            }
            _ => Err(HardyError::UnsupportedSpace(
                "polar-only models keep the pole at r = 0".into(),
            )),
        }
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn base_point(&self) -> &SpacePoint {
        &self.base
    }

    /// Homogeneous dimension Q (Q = n for Euclidean and hyperbolic).
    pub fn homogeneous_dimension(&self) -> f64 {
        self.q
    }

    pub fn sphere_measure(&self) -> f64 {
        self.sphere_measure
    }

    /// |B(a, 1)| = |𝔖|/Q for the closed-form models.
    pub fn unit_ball_volume(&self) -> f64 {
        self.ball_volume(1.0).expect("r = 1 is valid")
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ball_model(&self) -> &BallVolumeModel {
        &self.ball
    }

    /// Ambient coordinate count of points.
    pub fn dim(&self) -> usize {
        match &self.kind {
            SpaceKind::Euclidean { dim } => *dim,
            SpaceKind::HomogeneousGroup { dilation_weights } => dilation_weights.len(),
            SpaceKind::Heisenberg { n } => 2 * n + 1,
            SpaceKind::Hyperbolic { dim } => dim + 1,
            SpaceKind::RadialCustom { .. } => 1,
        }
    }

    /// Group-like spaces support compose/dilate/inverse and off-pole
    /// ball sampling.
    pub fn is_translation_invariant(&self) -> bool {
        matches!(
            self.kind,
            SpaceKind::Euclidean { .. }
                | SpaceKind::HomogeneousGroup { .. }
                | SpaceKind::Heisenberg { .. }
        )
    }

    pub fn check_point(&self, x: &SpacePoint) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(HardyError::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        match &self.kind {
            SpaceKind::Hyperbolic { dim } => {
                let r = x.coords()[0];
                if r < 0.0 {
                    return Err(HardyError::InvalidInput("radial coordinate < 0".into()));
                }
                let norm2: f64 = x.coords()[1..=*dim].iter().map(|c| c * c).sum();
                if r > 0.0 && (norm2.sqrt() - 1.0).abs() > 1e-9 {
                    return Err(HardyError::InvalidInput(
                        "direction part must lie on the unit sphere".into(),
                    ));
                }
                Ok(())
            }
            SpaceKind::RadialCustom { .. } => {
                if x.coords()[0] < 0.0 {
                    Err(HardyError::InvalidInput("radial coordinate < 0".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Point at distance `r` from the pole in the given Euclidean
    /// direction (polar models and the first-layer directions of groups).
    pub fn polar_point(&self, r: f64, direction: &[f64]) -> Result<SpacePoint> {
        if r < 0.0 {
            return Err(HardyError::InvalidInput("radius must be >= 0".into()));
        }
        match &self.kind {
            SpaceKind::Hyperbolic { dim } => {
                if direction.len() != *dim {
                    return Err(HardyError::DimensionMismatch {
                        expected: *dim,
                        got: direction.len(),
                    });
                }
                let norm: f64 = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(HardyError::InvalidInput("zero direction".into()));
                }
                let mut coords = vec![r];
                coords.extend(direction.iter().map(|c| c / norm));
                SpacePoint::new(coords)
            }
            SpaceKind::RadialCustom { .. } => SpacePoint::new(vec![r]),
            SpaceKind::Euclidean { dim } => {
                if direction.len() != *dim {
                    return Err(HardyError::DimensionMismatch {
                        expected: *dim,
                        got: direction.len(),
                    });
                }
                let norm: f64 = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(HardyError::InvalidInput("zero direction".into()));
                }
                SpacePoint::new(direction.iter().map(|c| c / norm * r).collect())
            }
            SpaceKind::HomogeneousGroup { .. } | SpaceKind::Heisenberg { .. } => {
                // unit point along the first coordinate, dilated to radius r
                let mut e1 = vec![0.0; self.dim()];
                if direction.len() != self.dim() || direction.iter().all(|&c| c == 0.0) {
                    e1[0] = 1.0;
                } else {
                    // project onto the first layer; keep it simple: first coord sign
                    e1[0] = if direction[0] < 0.0 { -1.0 } else { 1.0 };
                }
                let unit = SpacePoint::new(e1)?;
                self.dilate(r, &unit)
            }
        }
    }

    /// Quasi-norm of the group difference, `|x|_a = d(a, x)` relative to
    /// the pole for polar models.
    pub fn norm(&self, x: &SpacePoint) -> Result<f64> {
        self.distance(&self.base.clone(), x)
    }

    pub fn distance(&self, x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        match &self.kind {
            SpaceKind::Euclidean { .. } => Ok(x
                .coords()
                .iter()
                .zip(y.coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()),
            SpaceKind::HomogeneousGroup { dilation_weights } => {
                let mut norm: f64 = 0.0;
                for (i, nu) in dilation_weights.iter().enumerate() {
                    let d = (y.coords()[i] - x.coords()[i]).abs();
                    norm = norm.max(d.powf(1.0 / nu));
                }
                Ok(norm)
            }
            SpaceKind::Heisenberg { n } => {
                let diff = heisenberg_compose(&heisenberg_inverse(x), y, *n)?;
                Ok(koranyi_norm(&diff, *n))
            }
            SpaceKind::Hyperbolic { dim } => {
                let (r1, r2) = (x.coords()[0], y.coords()[0]);
                if r1 == 0.0 || r2 == 0.0 {
                    return Ok((r1 - r2).abs());
                }
                let cos_theta: f64 = x.coords()[1..=*dim]
                    .iter()
                    .zip(&y.coords()[1..=*dim])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    .clamp(-1.0, 1.0);
                // cosh d = cosh(r1-r2) + sinh r1 sinh r2 (1 - cos θ):
                // exact at coincident points, stable for near ones
                let arg = (r1 - r2).cosh() + r1.sinh() * r2.sinh() * (1.0 - cos_theta);
                Ok(arg.max(1.0).acosh())
            }
            SpaceKind::RadialCustom { .. } => Ok((x.coords()[0] - y.coords()[0]).abs()),
        }
    }

    /// λ(r, ω); independent of ω for every implemented model.
    pub fn polar_weight(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(HardyError::InvalidInput(
                "polar weight needs r > 0".into(),
            ));
        }
        Ok(match &self.kind {
            SpaceKind::Euclidean { dim } => r.powi(*dim as i32 - 1),
            SpaceKind::HomogeneousGroup { .. } | SpaceKind::Heisenberg { .. } => {
                r.powf(self.q - 1.0)
            }
            SpaceKind::Hyperbolic { dim } => r.sinh().powi(*dim as i32 - 1),
            SpaceKind::RadialCustom { lambda, .. } => lambda(r),
        })
    }

    pub fn ball_volume(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(HardyError::InvalidInput("radius must be >= 0".into()));
        }
        if r == 0.0 {
            return Ok(0.0);
        }
        Ok(match &self.ball {
            BallVolumeModel::ClosedForm {
                coefficient,
                exponent,
            } => coefficient * r.powf(*exponent),
            BallVolumeModel::Numeric(table) => table.value(r),
        })
    }

    /// Quadrature error bound of the ball-volume model (0 when closed form).
    pub fn ball_volume_error(&self) -> f64 {
        match &self.ball {
            BallVolumeModel::ClosedForm { .. } => 0.0,
            BallVolumeModel::Numeric(table) => table.error,
        }
    }

    /// Group product where one exists.
    pub fn compose(&self, x: &SpacePoint, y: &SpacePoint) -> Result<SpacePoint> {
        self.check_point(x)?;
        self.check_point(y)?;
        match &self.kind {
            SpaceKind::Euclidean { .. } | SpaceKind::HomogeneousGroup { .. } => SpacePoint::new(
                x.coords()
                    .iter()
                    .zip(y.coords())
                    .map(|(a, b)| a + b)
                    .collect(),
            ),
            SpaceKind::Heisenberg { n } => heisenberg_compose(x, y, *n),
            _ => Err(HardyError::UnsupportedSpace(
                "no group structure on polar-only models".into(),
            )),
        }
    }

    pub fn inverse(&self, x: &SpacePoint) -> Result<SpacePoint> {
        self.check_point(x)?;
        if !self.is_translation_invariant() {
            return Err(HardyError::UnsupportedSpace(
                "no group structure on polar-only models".into(),
            ));
        }
        SpacePoint::new(x.coords().iter().map(|c| -c).collect())
    }

    /// Anisotropic dilation `D_λ`.
    pub fn dilate(&self, lambda: f64, x: &SpacePoint) -> Result<SpacePoint> {
        self.check_point(x)?;
        if !(lambda > 0.0) {
            return Err(HardyError::InvalidInput("dilation factor must be > 0".into()));
        }
        match &self.kind {
            SpaceKind::Euclidean { .. } => {
                SpacePoint::new(x.coords().iter().map(|c| lambda * c).collect())
            }
            SpaceKind::HomogeneousGroup { dilation_weights } => SpacePoint::new(
                x.coords()
                    .iter()
                    .zip(dilation_weights)
                    .map(|(c, nu)| lambda.powf(*nu) * c)
                    .collect(),
            ),
            SpaceKind::Heisenberg { n } => {
                let mut coords = Vec::with_capacity(2 * n + 1);
                coords.extend(x.coords()[..2 * n].iter().map(|c| lambda * c));
                coords.push(lambda * lambda * x.coords()[2 * n]);
                SpacePoint::new(coords)
            }
            _ => Err(HardyError::UnsupportedSpace(
                "no dilations on polar-only models".into(),
            )),
        }
    }

    /// Rejection-sampling estimate of |B(a, 1)| with its standard error.
    /// Closed-form models are estimated too, so the result can be checked
    /// against the cached value.
    pub fn estimate_unit_ball_volume(&self, samples: usize, seed: u64) -> Result<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0B01_u64);
        let (box_volume, dim) = match &self.kind {
            SpaceKind::Euclidean { dim } => (2f64.powi(*dim as i32), *dim),
            SpaceKind::HomogeneousGroup { dilation_weights } => {
                (2f64.powi(dilation_weights.len() as i32), dilation_weights.len())
            }
            SpaceKind::Heisenberg { n } => (2f64.powi((2 * n + 1) as i32), 2 * n + 1),
            _ => {
                return Err(HardyError::UnsupportedSpace(
                    "rejection sampling needs coordinate balls".into(),
                ))
            }
        };
        let mut hits = 0usize;
        let mut coords = vec![0.0; dim];
        for _ in 0..samples {
            for c in coords.iter_mut() {
                *c = rng.gen_range(-1.0..1.0);
            }
            let p = SpacePoint::new(coords.clone())?;
            if self.norm(&p)? < 1.0 {
                hits += 1;
            }
        }
        let p = hits as f64 / samples as f64;
        let est = box_volume * p;
        let se = box_volume * (p * (1.0 - p) / samples as f64).sqrt();
        Ok((est, se))
    }

    /// Serializes the descriptor to the toolkit config string.
    pub fn config_str(&self) -> String {
        match &self.kind {
            SpaceKind::Euclidean { dim } => format!("euclidean:{dim}"),
            SpaceKind::HomogeneousGroup { dilation_weights } => {
                if dilation_weights.len() == 1 {
                    format!("group:Q={}", dilation_weights[0])
                } else {
                    let nu: Vec<String> =
                        dilation_weights.iter().map(|v| v.to_string()).collect();
                    format!("group:nu={}", nu.join(","))
                }
            }
            SpaceKind::Heisenberg { n } => format!("heisenberg:{n}"),
            SpaceKind::Hyperbolic { dim } => format!("hyperbolic:{dim}"),
            SpaceKind::RadialCustom { label, .. } => format!("radial:{label}"),
        }
    }

    /// Parses `euclidean:N`, `group:Q=...`, `group:nu=a,b,...`,
    /// `heisenberg:N`, `hyperbolic:N`.
    pub fn from_config_str(s: &str) -> Result<Self> {
        let (family, arg) = s
            .split_once(':')
            .ok_or_else(|| HardyError::InvalidInput(format!("space '{s}': expected family:arg")))?;
        let bad = |m: &str| HardyError::InvalidInput(format!("space '{s}': {m}"));
        match family {
            "euclidean" => {
                let n: usize = arg.parse().map_err(|_| bad("bad dimension"))?;
                Self::euclidean(n)
            }
            "heisenberg" => {
                let n: usize = arg.parse().map_err(|_| bad("bad n"))?;
                Self::heisenberg(n)
            }
            "hyperbolic" => {
                let n: usize = arg.parse().map_err(|_| bad("bad dimension"))?;
                Self::hyperbolic(n)
            }
            "group" => {
                if let Some(q) = arg.strip_prefix("Q=") {
                    let q: f64 = q.parse().map_err(|_| bad("bad Q"))?;
                    Self::homogeneous_q(q)
                } else if let Some(nu) = arg.strip_prefix("nu=") {
                    let weights: std::result::Result<Vec<f64>, _> =
                        nu.split(',').map(|w| w.trim().parse()).collect();
                    Self::homogeneous(weights.map_err(|_| bad("bad dilation weights"))?)
                } else {
                    Err(bad("expected Q=<value> or nu=<a,b,...>"))
                }
            }
            _ => Err(bad("unknown family")),
        }
    }
}

/// Korányi–Folland gauge of ξ = (x, y, t).
fn koranyi_norm(xi: &SpacePoint, n: usize) -> f64 {
    let c = xi.coords();
    let horizontal: f64 = c[..2 * n].iter().map(|v| v * v).sum();
    let t = c[2 * n];
    (horizontal * horizontal + t * t).powf(0.25)
}

/// Heisenberg composition
/// `ξ∘ξ' = (x+x', y+y', t+t'+½(x·y' − x'·y))`.
pub fn heisenberg_compose(xi: &SpacePoint, xi2: &SpacePoint, n: usize) -> Result<SpacePoint> {
    let dim = 2 * n + 1;
    for p in [xi, xi2] {
        if p.dim() != dim {
            return Err(HardyError::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }
    let (a, b) = (xi.coords(), xi2.coords());
    let mut coords = Vec::with_capacity(dim);
    for i in 0..2 * n {
        coords.push(a[i] + b[i]);
    }
    let mut bracket = 0.0;
    for i in 0..n {
        bracket += a[i] * b[n + i] - b[i] * a[n + i];
    }
    coords.push(a[2 * n] + b[2 * n] + 0.5 * bracket);
    SpacePoint::new(coords)
}

/// ξ⁻¹ = −ξ.
pub fn heisenberg_inverse(xi: &SpacePoint) -> SpacePoint {
    SpacePoint {
        coords: xi.coords().iter().map(|c| -c).collect(),
    }
}

/// Estimate of the quasi-triangle constant.
#[derive(Debug, Clone)]
pub struct BetaEstimate {
    pub beta_hat: f64,
    /// Largest observed (d(ξ∘ξ') − d(ξ'))/d(ξ) before clamping at 1.
    pub max_ratio: f64,
    pub samples_used: u64,
    pub note: String,
}

/// Random + locally refined search for the smallest β with
/// `d(ξ∘ξ') ≤ β d(ξ) + d(ξ')` on the Heisenberg group. Deterministic
/// given `cfg.seed`; degenerate pairs with d(ξ) ≈ 0 are skipped and the
/// pair ξ' = 0 (ratio exactly 1) is always included.
pub fn estimate_beta(space: &SpaceDescriptor, cfg: &QuadratureConfig) -> Result<BetaEstimate> {
    let n = match space.kind() {
        SpaceKind::Heisenberg { n } => *n,
        _ => {
            return Err(HardyError::UnsupportedSpace(
                "beta estimation is defined on the Heisenberg group".into(),
            ))
        }
    };
    let dim = 2 * n + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xBE7A_E571);
    let gauss = |rng: &mut ChaCha8Rng| {
        // Box-Muller
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    let scales = [0.05, 0.3, 1.0, 3.0, 20.0];

    let ratio = |a: &SpacePoint, b: &SpacePoint| -> Result<f64> {
        let da = koranyi_norm(a, n);
        if da < 1e-12 {
            return Ok(f64::NEG_INFINITY);
        }
        let composed = heisenberg_compose(a, b, n)?;
        Ok((koranyi_norm(&composed, n) - koranyi_norm(b, n)) / da)
    };

    // ξ' = 0 contributes exactly 1
    let mut best_ratio = 1.0_f64;
    let mut best_pair = (
        {
            let mut c = vec![0.0; dim];
            c[0] = 1.0;
            SpacePoint::new(c)?
        },
        SpacePoint::origin(dim),
    );
    let mut used = 1u64;

    let samples = cfg.mc_samples.max(1);
    let mut coords_a = vec![0.0; dim];
    let mut coords_b = vec![0.0; dim];
    for i in 0..samples {
        let sa = scales[i % scales.len()];
        let sb = scales[(i / scales.len()) % scales.len()];
        for c in coords_a.iter_mut() {
            *c = sa * gauss(&mut rng);
        }
        for c in coords_b.iter_mut() {
            *c = sb * gauss(&mut rng);
        }
        let a = SpacePoint::new(coords_a.clone())?;
        let b = SpacePoint::new(coords_b.clone())?;
        let r = ratio(&a, &b)?;
        used += 1;
        if r > best_ratio {
            best_ratio = r;
            best_pair = (a, b);
        }
    }

    // local refinement around the best pair with shrinking step
    let refine_iters = 4000usize;
    for k in 0..refine_iters {
        let sigma = 0.5_f64.powf(k as f64 / 400.0);
        let perturb = |p: &SpacePoint, rng: &mut ChaCha8Rng| {
            SpacePoint::new(p.coords().iter().map(|c| c + sigma * gauss(rng)).collect())
        };
        let a = perturb(&best_pair.0, &mut rng)?;
        let b = perturb(&best_pair.1, &mut rng)?;
        let r = ratio(&a, &b)?;
        used += 1;
        if r > best_ratio {
            best_ratio = r;
            best_pair = (a, b);
        }
    }

    Ok(BetaEstimate {
        beta_hat: best_ratio.max(1.0),
        max_ratio: best_ratio,
        samples_used: used,
        note: format!(
            "max of (d(xi o xi') - d(xi'))/d(xi) over {used} sampled/refined pairs, clamped below at 1"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(coords: &[f64]) -> SpacePoint {
        SpacePoint::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_distance_pythagoras() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let d = space.distance(&pt(&[0.0, 0.0]), &pt(&[3.0, 4.0])).unwrap();
        assert_relative_eq!(d, 5.0, max_relative = 1e-15);
    }

    #[test]
    fn heisenberg_distances_from_origin() {
        let space = SpaceDescriptor::heisenberg(1).unwrap();
        let o = SpacePoint::origin(3);
        assert_relative_eq!(space.distance(&o, &pt(&[1.0, 0.0, 0.0])).unwrap(), 1.0);
        assert_relative_eq!(space.distance(&o, &pt(&[0.0, 0.0, 1.0])).unwrap(), 1.0);
    }

    #[test]
    fn heisenberg_composition_law() {
        let c = heisenberg_compose(&pt(&[1.0, 0.0, 0.0]), &pt(&[0.0, 1.0, 0.0]), 1).unwrap();
        assert_eq!(c.coords(), &[1.0, 1.0, 0.5]);

        // center is abelian
        let c = heisenberg_compose(&pt(&[0.0, 0.0, 2.5]), &pt(&[0.0, 0.0, -1.0]), 1).unwrap();
        assert_eq!(c.coords(), &[0.0, 0.0, 1.5]);
    }

    #[test]
    fn heisenberg_inverse_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let xi = pt(&[
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            ]);
            let e = heisenberg_compose(&xi, &heisenberg_inverse(&xi), 1).unwrap();
            for c in e.coords() {
                assert!(c.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn heisenberg_associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let rand_pt = |rng: &mut ChaCha8Rng| {
                pt(&[
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                ])
            };
            let (a, b, c) = (rand_pt(&mut rng), rand_pt(&mut rng), rand_pt(&mut rng));
            let left =
                heisenberg_compose(&heisenberg_compose(&a, &b, 1).unwrap(), &c, 1).unwrap();
            let right =
                heisenberg_compose(&a, &heisenberg_compose(&b, &c, 1).unwrap(), 1).unwrap();
            for (l, r) in left.coords().iter().zip(right.coords()) {
                assert!((l - r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quasi_norm_homogeneity() {
        let space = SpaceDescriptor::homogeneous(vec![1.0, 1.0, 2.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..1000 {
            let x = pt(&[
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
            ]);
            let lambda = rng.gen_range(0.01..20.0);
            let dilated = space.dilate(lambda, &x).unwrap();
            let lhs = space.norm(&dilated).unwrap();
            let rhs = lambda * space.norm(&x).unwrap();
            if rhs > 0.0 {
                assert!(
                    (lhs - rhs).abs() / rhs < 1e-12,
                    "homogeneity violated: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn heisenberg_norm_homogeneity_and_symmetry() {
        let space = SpaceDescriptor::heisenberg(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..1000 {
            let x = pt(&[
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
            ]);
            let lambda: f64 = rng.gen_range(0.01..20.0);
            let lhs = space.norm(&space.dilate(lambda, &x).unwrap()).unwrap();
            let rhs = lambda * space.norm(&x).unwrap();
            if rhs > 0.0 {
                assert!((lhs - rhs).abs() / rhs < 1e-12);
            }
            // |x| = |x^{-1}|
            let inv_norm = space.norm(&heisenberg_inverse(&x)).unwrap();
            assert!((space.norm(&x).unwrap() - inv_norm).abs() < 1e-13);
        }
    }

    #[test]
    fn polar_weights_match_models() {
        let e3 = SpaceDescriptor::euclidean(3).unwrap();
        assert_relative_eq!(e3.polar_weight(2.0).unwrap(), 4.0);

        let g = SpaceDescriptor::homogeneous_q(4.0).unwrap();
        assert_relative_eq!(g.polar_weight(2.0).unwrap(), 8.0);

        let h2 = SpaceDescriptor::hyperbolic(2).unwrap();
        assert_relative_eq!(h2.polar_weight(1.0).unwrap(), 1.0f64.sinh());

        assert!(e3.polar_weight(0.0).is_err());
        assert!(e3.polar_weight(-1.0).is_err());
    }

    #[test]
    fn ball_volumes() {
        let e2 = SpaceDescriptor::euclidean(2).unwrap();
        assert_relative_eq!(
            e2.ball_volume(1.0).unwrap(),
            std::f64::consts::PI,
            max_relative = 1e-14
        );
        assert_eq!(e2.ball_volume(0.0).unwrap(), 0.0);
        assert!(e2.ball_volume(-1.0).is_err());

        // |B(0,1)| on the Heisenberg group H^1 is pi^2/2
        let h = SpaceDescriptor::heisenberg(1).unwrap();
        assert_relative_eq!(
            h.ball_volume(1.0).unwrap(),
            std::f64::consts::PI.powi(2) / 2.0,
            max_relative = 1e-12
        );
        // group ball-volume model has c = |S|/Q, e = Q
        match h.ball_model() {
            BallVolumeModel::ClosedForm {
                coefficient,
                exponent,
            } => {
                assert_relative_eq!(
                    *coefficient,
                    h.sphere_measure() / h.homogeneous_dimension(),
                    max_relative = 1e-14
                );
                assert_relative_eq!(*exponent, 4.0);
            }
            _ => panic!("expected closed form"),
        }
    }

    #[test]
    fn heisenberg_unit_ball_monte_carlo() {
        // validates the closed-form ω_n = πⁿ B(n/2, 3/2) / Γ(n) against
        // rejection sampling for n = 1 (π²/2 exactly) and n = 2
        let h = SpaceDescriptor::heisenberg(1).unwrap();
        let (est, se) = h.estimate_unit_ball_volume(400_000, 99).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 2.0;
        assert_relative_eq!(koranyi_unit_ball_volume(1), exact, max_relative = 1e-13);
        assert!(
            (est - exact).abs() < 4.0 * se + 1e-9,
            "MC {est} vs exact {exact} (se {se})"
        );

        let h2 = SpaceDescriptor::heisenberg(2).unwrap();
        let (est, se) = h2.estimate_unit_ball_volume(400_000, 99).unwrap();
        let exact = koranyi_unit_ball_volume(2);
        assert_relative_eq!(exact, 6.57973626739291, max_relative = 1e-12);
        assert!(
            (est - exact).abs() < 4.0 * se + 1e-9,
            "MC {est} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn ball_volume_consistent_with_radial_integral_of_lambda() {
        // numeric integral of |S| lambda over (0, r) matches the model
        for space in [
            SpaceDescriptor::euclidean(3).unwrap(),
            SpaceDescriptor::homogeneous(vec![1.0, 2.0]).unwrap(),
            SpaceDescriptor::heisenberg(1).unwrap(),
            SpaceDescriptor::hyperbolic(3).unwrap(),
        ] {
            for r in [0.5, 1.0, 2.0] {
                let (num, err, _) = adaptive_gk(
                    &|t| space.sphere_measure() * space.polar_weight(t).unwrap(),
                    1e-12,
                    r,
                    1e-12,
                    1e-300,
                    60,
                );
                let model = space.ball_volume(r).unwrap();
                assert!(
                    (num - model).abs() <= 1e-8 * model + err + 1e-12,
                    "{:?} r={r}: {num} vs {model}",
                    space.kind()
                );
            }
        }
    }

    #[test]
    fn hyperbolic_distance_properties() {
        let h = SpaceDescriptor::hyperbolic(2).unwrap();
        let x = h.polar_point(1.5, &[1.0, 0.0]).unwrap();
        let y = h.polar_point(0.7, &[0.0, 1.0]).unwrap();
        let dxy = h.distance(&x, &y).unwrap();
        let dyx = h.distance(&y, &x).unwrap();
        assert_relative_eq!(dxy, dyx, max_relative = 1e-14);
        assert_relative_eq!(h.distance(&x, &x).unwrap(), 0.0, epsilon = 1e-12);
        // radial distance to the pole is the radius
        assert_relative_eq!(h.norm(&x).unwrap(), 1.5, max_relative = 1e-14);
        // collinear points: distance is the radius difference
        let z = h.polar_point(0.5, &[1.0, 0.0]).unwrap();
        assert_relative_eq!(h.distance(&x, &z).unwrap(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn beta_estimate_basics() {
        let h = SpaceDescriptor::heisenberg(1).unwrap();
        let cfg = QuadratureConfig::default().with_samples(20_000);
        let est = estimate_beta(&h, &cfg).unwrap();
        assert!(est.beta_hat >= 1.0);
        assert!(est.beta_hat <= 1.05, "beta_hat = {}", est.beta_hat);

        // central pair contributes (2^{1/2} - 1)/1
        let a = pt(&[0.0, 0.0, 1.0]);
        let c = heisenberg_compose(&a, &a, 1).unwrap();
        let r = (koranyi_norm(&c, 1) - koranyi_norm(&a, 1)) / koranyi_norm(&a, 1);
        assert_relative_eq!(r, 2f64.sqrt() - 1.0, max_relative = 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let space = SpaceDescriptor::euclidean(2).unwrap();
        let err = space.distance(&pt(&[0.0, 0.0]), &pt(&[1.0, 2.0, 3.0]));
        assert!(matches!(
            err,
            Err(HardyError::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn config_round_trip() {
        for s in ["euclidean:2", "group:Q=4", "heisenberg:1", "hyperbolic:3"] {
            let space = SpaceDescriptor::from_config_str(s).unwrap();
            assert_eq!(space.config_str(), s);
        }
        let g = SpaceDescriptor::from_config_str("group:nu=1,1,2").unwrap();
        assert_relative_eq!(g.homogeneous_dimension(), 4.0);
        assert!(SpaceDescriptor::from_config_str("torus:2").is_err());
        assert!(SpaceDescriptor::from_config_str("group:nu=0.5,1").is_err());
    }
}
