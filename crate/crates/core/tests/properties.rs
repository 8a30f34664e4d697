//! Property-based invariants over randomly generated inputs.

use proptest::prelude::*;

use hardy_verify::discrete::{brute_force_d1, integral_hardy_sides, DiscreteSpace};
use hardy_verify::inequalities::{verify_log_holder, LogHolderMeasure, Theorem};
use hardy_verify::spaces::SpaceDescriptor;
use hardy_verify::QuadratureConfig;

fn discrete_space_strategy() -> impl Strategy<Value = (DiscreteSpace, Vec<f64>, Vec<f64>)> {
    (2usize..10).prop_flat_map(|n| {
        (
            prop::collection::vec(0.05f64..2.0, n),
            prop::collection::vec(0.01f64..3.0, n * n),
            prop::collection::vec(0.05f64..2.0, n),
            prop::collection::vec(0.05f64..2.0, n),
        )
            .prop_map(move |(masses, raw_dist, g, h)| {
                let mut dist = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in i + 1..n {
                        dist[i][j] = raw_dist[i * n + j];
                        dist[j][i] = raw_dist[i * n + j];
                    }
                }
                (DiscreteSpace::new(masses, dist, 0).unwrap(), g, h)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The bracket constant (p')^{1/p'} p^{1/q} D₁ dominates LHS/RHS for
    /// every f on every finite space.
    #[test]
    fn discrete_bracket_never_violated(
        (space, g, h) in discrete_space_strategy(),
        p in 1.05f64..4.0,
        q_gap in 0.0f64..2.0,
        f_seed in prop::collection::vec(0.0f64..2.0, 16),
    ) {
        let q = p + q_gap;
        let pp = p / (p - 1.0);
        let d1 = brute_force_d1(&space, &g, &h, p, q).unwrap().d1;
        let ch = pp.powf(1.0 / pp) * p.powf(1.0 / q) * d1;
        let f: Vec<f64> = (0..space.len()).map(|i| f_seed[i % f_seed.len()]).collect();
        let (lhs, rhs) = integral_hardy_sides(&space, &f, &g, &h, p, q).unwrap();
        prop_assert!(lhs <= ch * rhs * (1.0 + 1e-12));
    }

    /// Entropy never exceeds the log-Hölder right side on finite spaces.
    #[test]
    fn discrete_log_holder_never_violated(
        masses in prop::collection::vec(0.01f64..3.0, 2..12),
        values_seed in prop::collection::vec(0.0f64..4.0, 12),
        p in 1.05f64..3.0,
        q_gap in 0.05f64..2.0,
    ) {
        let values: Vec<f64> = (0..masses.len())
            .map(|i| values_seed[i % values_seed.len()])
            .collect();
        prop_assume!(values.iter().any(|&v| v > 0.0));
        let rep = verify_log_holder(
            &LogHolderMeasure::Discrete { masses: &masses, values: &values },
            p,
            p + q_gap,
            &QuadratureConfig::default(),
        ).unwrap();
        let slack = 1e-12 * (1.0 + rep.lhs.value.abs().max(rep.rhs.value.abs()));
        prop_assert!(rep.lhs.value <= rep.rhs.value + slack);
    }

    /// Quasi-norm homogeneity |D_λ x| = λ|x| on arbitrary homogeneous
    /// groups.
    #[test]
    fn quasi_norm_homogeneity(
        weights in prop::collection::vec(1.0f64..4.0, 1..5),
        coords_seed in prop::collection::vec(-5.0f64..5.0, 5),
        lambda in 0.01f64..20.0,
    ) {
        let space = SpaceDescriptor::homogeneous(weights.clone()).unwrap();
        let coords: Vec<f64> = (0..weights.len())
            .map(|i| coords_seed[i % coords_seed.len()])
            .collect();
        let x = hardy_verify::SpacePoint::new(coords).unwrap();
        let lhs = space.norm(&space.dilate(lambda, &x).unwrap()).unwrap();
        let rhs = lambda * space.norm(&x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    /// Group and Heisenberg Hardy–Sobolev constants collapse to the
    /// Hardy constants at q = p.
    #[test]
    fn hs_constant_coincides_with_hardy_at_q_equals_p(
        q_dim_idx in 0usize..3,
        s in 0.3f64..1.5,
        p in 1.2f64..6.0,
    ) {
        let q_dim = [1.0, 2.0, 4.0][q_dim_idx];
        prop_assume!(q_dim < s * p);
        let space = SpaceDescriptor::homogeneous_q(q_dim).unwrap();
        let hardy = hardy_verify::inequalities::closed_form_constant(
            Theorem::GroupHardy, &space, s, p, None).unwrap();
        let hs = hardy_verify::inequalities::closed_form_constant(
            Theorem::GroupHardySobolev, &space, s, p, Some(p)).unwrap();
        prop_assert!((hardy - hs).abs() <= 1e-12 * hardy);
    }
}
