use proptest::prelude::*;
use rgglab::geometry::NormSpec;
use rgglab::graphkit::{
    chromatic_bounds, chromatic_number_exact, clique_number, fractional_chromatic, grid_lp_colouring, Graph,
};
use rgglab::lab::covering_multiple;
use rgglab::limits::{RadialLevels, Ring};
use rgglab::rgg::build_graph;
use rgglab::scan::{ball_count, radial_sum, scan_ball, scan_radial};
use rgglab::PointCloud;

fn cloud_strategy(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..max)
}

fn cloud(points: &[(f64, f64)]) -> PointCloud {
    let pts: Vec<Vec<f64>> = points.iter().map(|&(x, y)| vec![x, y]).collect();
    PointCloud::from_points(2, &pts, 1.0).unwrap()
}

fn euclid() -> NormSpec {
    NormSpec::euclidean(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_a_norm(a in prop::collection::vec(-5.0..5.0f64, 3), b in prop::collection::vec(-5.0..5.0f64, 3),
                      p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, f64::INFINITY]), lambda in -4.0..4.0f64) {
        let norm = NormSpec::new(p, 3).unwrap();
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let scaled: Vec<f64> = a.iter().map(|x| lambda * x).collect();
        let (na, nb) = (norm.eval(&a).unwrap(), norm.eval(&b).unwrap());
        prop_assert!(norm.eval(&sum).unwrap() <= na + nb + 1e-12);
        prop_assert!((norm.eval(&scaled).unwrap() - lambda.abs() * na).abs() <= 1e-12 * (1.0 + na));
    }

    #[test]
    fn scan_is_translation_and_rotation_invariant(points in cloud_strategy(40), rho in 0.02..0.3f64,
                                                  shift in (-3.0..3.0f64, -3.0..3.0f64), angle in 0.0..6.3f64) {
        let base = scan_ball(&cloud(&points), rho, &euclid()).unwrap();
        let (s, c) = angle.sin_cos();
        let moved: Vec<(f64, f64)> =
            points.iter().map(|&(x, y)| (c * x - s * y + shift.0, s * x + c * y + shift.1)).collect();
        let other = scan_ball(&cloud(&moved), rho, &euclid()).unwrap();
        prop_assert!(base.exact && other.exact);
        prop_assert_eq!(base.value, other.value);
    }

    #[test]
    fn scan_is_monotone_in_radius(points in cloud_strategy(40), rho in 0.01..0.3f64, grow in 1.0..2.0f64) {
        let c = cloud(&points);
        let small = scan_ball(&c, rho, &euclid()).unwrap().value;
        let large = scan_ball(&c, rho * grow, &euclid()).unwrap().value;
        prop_assert!(small <= large);
    }

    #[test]
    fn witnesses_reproduce_values(points in cloud_strategy(30), rho in 0.02..0.3f64,
                                  p in prop::sample::select(vec![1.0, 2.0, f64::INFINITY])) {
        let c = cloud(&points);
        let norm = NormSpec::new(p, 2).unwrap();
        let res = scan_ball(&c, rho, &norm).unwrap();
        prop_assert_eq!(ball_count(&c, rho, &norm, &res.centre).unwrap() as f64, res.value);
        prop_assert!(res.exact || res.gap >= 0.0);
        let phi = RadialLevels::two_level(norm, 0.4).unwrap();
        let res = scan_radial(&c, &phi, 2.0 * rho).unwrap();
        prop_assert_eq!(radial_sum(&c, &phi, 2.0 * rho, &res.centre).unwrap(), res.value);
    }

    #[test]
    fn one_ring_radial_scan_is_ball_scan(points in cloud_strategy(40), rho in 0.02..0.3f64) {
        let c = cloud(&points);
        let phi = RadialLevels::new(euclid(), vec![Ring { radius: 1.0, value: 1.0 }]).unwrap();
        prop_assert_eq!(scan_radial(&c, &phi, rho).unwrap().value, scan_ball(&c, rho, &euclid()).unwrap().value);
    }

    #[test]
    fn sandwich_and_covering_bound(points in cloud_strategy(45), r in 0.05..0.5f64,
                                   p in prop::sample::select(vec![1.0, 2.0, f64::INFINITY])) {
        let norm = NormSpec::new(p, 2).unwrap();
        let gg = build_graph(&cloud(&points), r, &norm).unwrap();
        let g = gg.graph();
        let omega = clique_number(g).size;
        let frac = fractional_chromatic(g, 1e-9).unwrap();
        prop_assert!((frac.value - frac.dual_value).abs() <= 2e-9 * frac.value.max(1.0));
        frac.verify(g, 1e-9).unwrap();
        let exact = chromatic_number_exact(g, u64::MAX).unwrap();
        exact.verify(g).unwrap();
        let used: std::collections::BTreeSet<usize> = exact.colours.iter().copied().collect();
        prop_assert_eq!(used.len(), exact.palette);
        let bounds = chromatic_bounds(g, &[gg.grid_order()], None);
        bounds.colouring.verify(g).unwrap();
        let chain = [
            omega as f64,
            (frac.value - 1e-6).ceil(),
            exact.palette as f64,
            bounds.upper as f64,
            g.max_degree() as f64 + 1.0,
        ];
        prop_assert!(chain.windows(2).all(|w| w[0] <= w[1]), "{:?}", chain);
        prop_assert!(bounds.lower <= exact.palette);
        prop_assert!(exact.palette as u64 <= covering_multiple(&norm) * omega as u64);
    }

    #[test]
    fn grid_lp_colouring_is_proper(points in cloud_strategy(80), r in 0.05..0.3f64) {
        let c = cloud(&points);
        let report = grid_lp_colouring(&c, r, &euclid(), 1.0, 1).unwrap();
        let gg = build_graph(&c, r, &euclid()).unwrap();
        report.colouring.verify(gg.graph()).unwrap();
        prop_assert!(report.colouring.palette as f64 <= report.guarantee);
    }

    #[test]
    fn files_round_trip(points in cloud_strategy(30), r in 0.05..0.5f64) {
        let c = cloud(&points);
        let mut buf = Vec::new();
        c.write_to(&mut buf).unwrap();
        let back = PointCloud::read_from(buf.as_slice()).unwrap();
        prop_assert_eq!(back.coords(), c.coords());
        let g = build_graph(&c, r, &euclid()).unwrap().graph().clone();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let back = Graph::read_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }
}
