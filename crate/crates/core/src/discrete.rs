//! Exact finite-measure-space oracle: brute-force D₁, the integral
//! Hardy inequality with exact sums, and a direct search for the best
//! constant inside the bracket `D₁ ≤ C_H ≤ (p')^{1/p'} p^{1/q} D₁`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{HardyError, Result};
use crate::weights::{AdmissibilityReport, D1Method};

/// A finite measure space: point masses, a symmetric distance matrix
/// with zero diagonal and a base point. The triangle inequality is not
/// required; only the nested balls B(a, |x|_a) enter the theorems.
/// Balls are strict: B(a, r) = {x : d(a, x) < r}.
#[derive(Debug, Clone)]
pub struct DiscreteSpace {
    masses: Vec<f64>,
    dist: Vec<Vec<f64>>,
    base: usize,
}

impl DiscreteSpace {
    pub fn new(masses: Vec<f64>, dist: Vec<Vec<f64>>, base: usize) -> Result<Self> {
        let n = masses.len();
        if n == 0 {
            return Err(HardyError::InvalidInput("empty space".into()));
        }
        if base >= n {
            return Err(HardyError::InvalidInput("base point out of range".into()));
        }
        if masses.iter().any(|&m| !(m > 0.0)) {
            return Err(HardyError::InvalidInput("masses must be positive".into()));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(HardyError::InvalidInput(
                "distance matrix must be square and match the point count".into(),
            ));
        }
        for i in 0..n {
            if dist[i][i] != 0.0 {
                return Err(HardyError::InvalidInput("distance diagonal must be zero".into()));
            }
            for j in 0..n {
                if !(dist[i][j] >= 0.0) {
                    return Err(HardyError::InvalidInput("distances must be >= 0".into()));
                }
                if (dist[i][j] - dist[j][i]).abs() > 1e-12 * (1.0 + dist[i][j].abs()) {
                    return Err(HardyError::InvalidInput("distance matrix must be symmetric".into()));
                }
            }
        }
        Ok(DiscreteSpace { masses, dist, base })
    }

    /// Parses the plain-text matrix format: first line N, then N masses,
    /// then N×N distance rows, whitespace-separated.
    pub fn from_matrix_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| HardyError::InvalidInput("empty matrix file".into()))?
            .parse()
            .map_err(|_| HardyError::InvalidInput("first token must be the point count".into()))?;
        let mut need = |what: &str| -> Result<f64> {
            tokens
                .next()
                .ok_or_else(|| HardyError::InvalidInput(format!("matrix file ended early: {what}")))?
                .parse()
                .map_err(|_| HardyError::InvalidInput(format!("bad number in {what}")))
        };
        let masses: Result<Vec<f64>> = (0..n).map(|i| need(&format!("mass {i}"))).collect();
        let masses = masses?;
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                dist[i][j] = need(&format!("distance row {i}"))?;
            }
        }
        DiscreteSpace::new(masses, dist, 0)
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// d(a, x) for every point.
    pub fn radii(&self) -> &[f64] {
        &self.dist[self.base]
    }

    pub fn scale_masses(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(HardyError::InvalidInput("scale must be positive".into()));
        }
        DiscreteSpace::new(
            self.masses.iter().map(|m| m * c).collect(),
            self.dist.clone(),
            self.base,
        )
    }

    /// Seeded random space with n points; point 0 is the base.
    pub fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..2.0)).collect();
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let d = rng.gen_range(0.01..3.0);
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        DiscreteSpace { masses, dist, base: 0 }
    }
}

/// Exact D₁ by maximizing over the finitely many ball radii |x|_a, x ≠ a.
pub fn brute_force_d1(
    space: &DiscreteSpace,
    g: &[f64],
    h: &[f64],
    p: f64,
    q: f64,
) -> Result<AdmissibilityReport> {
    check_weights(space, g, h, p, q)?;
    let pp = p / (p - 1.0);
    let radii = space.radii();
    let mut d1 = 0.0f64;
    let mut sup_radius = None;
    for (x, &r) in radii.iter().enumerate() {
        if x == space.base {
            continue;
        }
        let mut outer = 0.0;
        let mut inner = 0.0;
        for i in 0..space.len() {
            if radii[i] >= r {
                outer += space.masses[i] * g[i];
            } else {
                inner += space.masses[i] * h[i].powf(1.0 - pp);
            }
        }
        let v = outer.powf(1.0 / q) * inner.powf(1.0 / pp);
        if v > d1 {
            d1 = v;
            sup_radius = Some(r);
        }
    }
    let smallness = pp.powf(1.0 / pp) * p.powf(1.0 / q) * d1;
    Ok(AdmissibilityReport {
        d1,
        smallness,
        admissible: smallness < 1.0,
        method: D1Method::ClosedForm, // exact finite max
        error_estimate: 0.0,
        sup_radius,
        warning: None,
    })
}

/// Exact both sides of the integral Hardy inequality for a given f:
/// LHS = (Σ_x m_x g_x (Σ_{y ∈ B(a,|x|_a)} m_y |f_y|)^q)^{1/q},
/// RHS = (Σ_x m_x h_x |f_x|^p)^{1/p}.
pub fn integral_hardy_sides(
    space: &DiscreteSpace,
    f: &[f64],
    g: &[f64],
    h: &[f64],
    p: f64,
    q: f64,
) -> Result<(f64, f64)> {
    check_weights(space, g, h, p, q)?;
    if f.len() != space.len() {
        return Err(HardyError::DimensionMismatch {
            expected: space.len(),
            got: f.len(),
        });
    }
    let radii = space.radii();
    let mut lhs_q = 0.0;
    for x in 0..space.len() {
        let r = radii[x];
        let mut ball = 0.0;
        for y in 0..space.len() {
            if radii[y] < r {
                ball += space.masses[y] * f[y].abs();
            }
        }
        lhs_q += space.masses[x] * g[x] * ball.powf(q);
    }
    let rhs_p: f64 = (0..space.len())
        .map(|x| space.masses[x] * h[x] * f[x].abs().powf(p))
        .sum();
    Ok((lhs_q.powf(1.0 / q), rhs_p.powf(1.0 / p)))
}

/// Result of the direct best-constant search.
#[derive(Debug, Clone)]
pub struct BestConstant {
    /// Lower bound Ĉ on C_H found by the search.
    pub c_hat: f64,
    pub d1: f64,
    /// The proven upper bound (p')^{1/p'} p^{1/q} D₁.
    pub upper: f64,
    pub f_best: Vec<f64>,
}

/// Searches for f maximizing LHS/RHS: per-radius Hölder-sharp seeds
/// (f = h^{1−p'} inside the ball, which attains the D₁ value at that
/// radius), random candidates, then multiplicative coordinate ascent.
/// Deterministic given the seed.
pub fn best_constant_search(
    space: &DiscreteSpace,
    g: &[f64],
    h: &[f64],
    p: f64,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<BestConstant> {
    let d1_report = brute_force_d1(space, g, h, p, q)?;
    if !d1_report.d1.is_finite() {
        return Err(HardyError::InvalidInput("D₁ must be finite".into()));
    }
    let pp = p / (p - 1.0);
    let upper = pp.powf(1.0 / pp) * p.powf(1.0 / q) * d1_report.d1;
    let n = space.len();
    let radii = space.radii();

    let ratio = |f: &[f64]| -> f64 {
        let (lhs, rhs) = integral_hardy_sides(space, f, g, h, p, q).expect("validated");
        if rhs > 0.0 {
            lhs / rhs
        } else {
            0.0
        }
    };

    let mut best_f = vec![0.0; n];
    let mut best = 0.0f64;

    // Hölder-sharp candidates, one per distinct radius
    for &r in radii.iter() {
        if r <= 0.0 {
            continue;
        }
        let f: Vec<f64> = (0..n)
            .map(|i| if radii[i] < r { h[i].powf(1.0 - pp) } else { 0.0 })
            .collect();
        let v = ratio(&f);
        if v > best {
            best = v;
            best_f = f;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let f: Vec<f64> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.8) {
                    rng.gen_range(0.0..2.0)
                } else {
                    0.0
                }
            })
            .collect();
        let v = ratio(&f);
        if v > best {
            best = v;
            best_f = f;
        }
    }

    // multiplicative coordinate ascent: f_i ← f_i (1 ± η), η halves on a
    // full sweep without improvement, at most 200 sweeps
    let mut eta = 0.5;
    for _ in 0..200 {
        let mut improved = false;
        for i in 0..n {
            if best_f[i] == 0.0 {
                // allow re-activation from a small positive seed
                let mut f = best_f.clone();
                f[i] = eta;
                let v = ratio(&f);
                if v > best {
                    best = v;
                    best_f = f;
                    improved = true;
                }
                continue;
            }
            for dir in [1.0 + eta, 1.0 / (1.0 + eta)] {
                let mut f = best_f.clone();
                f[i] *= dir;
                let v = ratio(&f);
                if v > best {
                    best = v;
                    best_f = f;
                    improved = true;
                }
            }
        }
        if !improved {
            eta *= 0.5;
            if eta < 1e-9 {
                break;
            }
        }
    }

    Ok(BestConstant {
        c_hat: best,
        d1: d1_report.d1,
        upper,
        f_best: best_f,
    })
}

fn check_weights(space: &DiscreteSpace, g: &[f64], h: &[f64], p: f64, q: f64) -> Result<()> {
    if !(1.0 < p && p <= q) {
        return Err(HardyError::InvalidInput("need 1 < p <= q".into()));
    }
    if g.len() != space.len() || h.len() != space.len() {
        return Err(HardyError::DimensionMismatch {
            expected: space.len(),
            got: g.len().min(h.len()),
        });
    }
    if g.iter().chain(h).any(|&w| !(w > 0.0)) {
        return Err(HardyError::InvalidInput("weights must be positive".into()));
    }
    Ok(())
}
