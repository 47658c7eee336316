use fidmet_core::analysis::{linear_fit, FidelityFamily};
use fidmet_core::eight_vertex::{EightVertexSpectrum, VertexWeights};
use fidmet_core::smf::SmfSpectrum;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smf_fidelity_symmetric_and_bounded(b1 in 0.0..2.0f64, b2 in 0.0..2.0f64, l in 2usize..=3) {
        let s = SmfSpectrum::cached(l).unwrap();
        let f12 = s.fidelity(b1, b2);
        let f21 = s.fidelity(b2, b1);
        prop_assert!((f12 - f21).abs() <= 1e-14);
        prop_assert!((0.0..=1.0).contains(&f12));
        prop_assert_eq!(s.fidelity(b1, b1), 1.0);
    }

    #[test]
    fn smf_metric_nonnegative_and_slope_consistent(beta in 0.0..3.0f64) {
        let s = SmfSpectrum::cached(3).unwrap();
        let g = s.metric(beta);
        prop_assert!(g >= 0.0);
        // dm/dβ = -4 g / (number of bonds)
        let slope = s.magnetization_slope(beta);
        prop_assert!((slope + 4.0 * g / 18.0).abs() <= 1e-12 * (1.0 + g));
    }

    #[test]
    fn eight_vertex_fidelity_symmetric(u1 in 0.05..4.0f64, v1 in 0.05..4.0f64, u2 in 0.05..4.0f64, v2 in 0.05..4.0f64) {
        let s = EightVertexSpectrum::cached(2).unwrap();
        let a = s.fidelity((u1, v1), (u2, v2));
        let b = s.fidelity((u2, v2), (u1, v1));
        prop_assert!((a - b).abs() <= 1e-14);
        prop_assert!((0.0..=1.0).contains(&a));
        // the trait view agrees with the inherent one
        let t = FidelityFamily::fidelity(s, &[u1, v1], &[u2, v2]).unwrap();
        prop_assert!((t - a).abs() <= 1e-15);
    }

    #[test]
    fn eight_vertex_z_symmetric_in_c_and_d(c in 0.0..3.0f64, d in 0.0..3.0f64) {
        let s = EightVertexSpectrum::cached(3).unwrap();
        let a = s.z(VertexWeights::new(c, d).unwrap());
        let b = s.z(VertexWeights::new(d, c).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn eight_vertex_metric_psd(u in 0.05..5.0f64, v in 0.05..5.0f64) {
        let g = EightVertexSpectrum::cached(3).unwrap().metric(u, v);
        prop_assert!(g.min_eigenvalue() >= -1e-12);
        prop_assert!(g.satisfies_cauchy_schwarz());
    }

    #[test]
    fn linear_fit_ignores_sample_order(
        pts in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..20),
        seed in any::<u64>(),
    ) {
        prop_assume!(pts.iter().any(|p| p.0 != pts[0].0));
        let mut shuffled = pts.clone();
        // deterministic permutation from the seed
        let n = shuffled.len();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = linear_fit(&pts).unwrap();
        let b = linear_fit(&shuffled).unwrap();
        prop_assert_eq!(a, b);
    }
}
