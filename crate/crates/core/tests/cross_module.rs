//! Cross-module consistency: the exact discrete oracle against the
//! numeric radial machinery.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hardy_verify::discrete::{brute_force_d1, DiscreteSpace};
use hardy_verify::weights::compute_d1_numeric;
use hardy_verify::{QuadratureConfig, SpaceDescriptor};

/// Embeds a finite space with radii r_i and masses m_i as narrow bumps
/// on the half-line and checks that the numeric D₁ converges to the
/// exact discrete maximum.
#[test]
fn discrete_space_embedded_as_atoms_matches_numeric_d1() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for trial in 0..5 {
        let n = rng.gen_range(3..7);
        // distinct, well-separated radii keep the bump smearing harmless
        let mut radii: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..4.0)).collect();
        radii.sort_by(f64::total_cmp);
        let mut ok = true;
        for w in radii.windows(2) {
            if w[1] - w[0] < 0.3 {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
        let (p, q) = (2.0, 2.0);

        // exact discrete D₁ with unit g, h. The half-line continuum has
        // sup candidates at every radius; with strict balls the radius
        // just above an atom puts the atom inside the ball, so the
        // embedded space needs a (massless) witness point there to expose
        // the same candidate to the finite max.
        let mut all_masses = vec![1e-15]; // massless base point
        all_masses.extend(&masses);
        let mut all_radii = vec![0.0];
        all_radii.extend(&radii);
        for r in &radii {
            all_masses.push(1e-15);
            all_radii.push(r + 0.05); // witness just above each atom
        }
        let m = all_masses.len();
        let mut dist = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    dist[i][j] = (all_radii[i] - all_radii[j]).abs().max(1e-3);
                }
            }
        }
        let space = DiscreteSpace::new(all_masses, dist, 0).unwrap();
        let g = vec![1.0; m];
        let h = vec![1.0; m];
        let exact_atomic = brute_force_d1(&space, &g, &h, p, q).unwrap();

        // the half-line sup additionally sees radii cutting *through* a
        // (smeared) atom, splitting its mass β/(1−β) between ball and
        // complement; the optimal split has a closed form
        let pp = p / (p - 1.0);
        let mut exact_continuum = exact_atomic.d1;
        for i in 0..n {
            let m_i = masses[i];
            let inner_below: f64 = (0..i).map(|j| masses[j]).sum();
            let outer_above: f64 = (i + 1..n).map(|j| masses[j]).sum();
            let beta = ((q * (outer_above + m_i) - pp * inner_below) / (m_i * (q + pp)))
                .clamp(0.0, 1.0);
            let cand = (outer_above + (1.0 - beta) * m_i).powf(1.0 / q)
                * (inner_below + beta * m_i).powf(1.0 / pp);
            exact_continuum = exact_continuum.max(cand);
        }

        // the same atoms as narrow normalized bumps in a custom radial
        // space: λ(r) = Σ m_i φ_ε(r − r_i)
        let eps = 0.004;
        let lam_masses = masses.clone();
        let lam_radii = radii.clone();
        let lambda = Arc::new(move |r: f64| {
            let mut v = 1e-300; // keep λ positive
            for (m_i, r_i) in lam_masses.iter().zip(&lam_radii) {
                let t = (r - r_i) / eps;
                if t.abs() < 1.0 {
                    // normalized smooth bump: ∫_{-1}^{1} e^{1-1/(1-t²)} dt
                    v += m_i / eps * (1.0 - 1.0 / (1.0 - t * t)).exp() / 1.206_900_322_437_876;
                }
            }
            v
        });
        let radial = SpaceDescriptor::radial_custom(lambda, 1.0, 1.0, "atoms").unwrap();
        let cfg = QuadratureConfig::default()
            .with_radius(5.0)
            .with_seed(7 + trial as u64);
        let mut cfg = cfg;
        cfg.radial_nodes = 4096; // the scan has to land between the spikes
        let numeric = compute_d1_numeric(
            &radial,
            p,
            q,
            &|_| 1.0,
            &|_| 1.0,
            // beyond the last atom the density is (numerically) zero;
            // a steep decaying power stands in for "no tail"
            -60.0,
            &cfg,
        )
        .unwrap();
        let rel = (numeric.d1 - exact_continuum).abs() / exact_continuum;
        assert!(
            rel < 0.02,
            "trial {trial}: numeric {} vs exact continuum {} (rel {rel})",
            numeric.d1,
            exact_continuum
        );
        assert!(
            numeric.d1 >= exact_atomic.d1 * (1.0 - 0.02),
            "trial {trial}: numeric {} fell below the atomic max {}",
            numeric.d1,
            exact_atomic.d1
        );
    }
}
