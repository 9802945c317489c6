mod common;

use common::*;
use geolab_core::domains::DomainDescriptor;
use geolab_core::geodesic::boundary_data_from_h;
use geolab_core::hclass::{Constrained, HParams};
use geolab_core::semitube::{
    alpha_from_b, b_from_alpha, cconvexity_scan, hyperplane_from_b, lift_iota, line_section,
    project_pi, topology, ComplexLine, RasterConfig, ScanConfig, SemitubeBase,
};
use geolab_core::{Mixed, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coord() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

fn complex() -> impl Strategy<Value = C64> {
    (coord(), coord()).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #[test]
    fn pi_after_iota_is_identity(x in prop::collection::vec(coord(), 3..=5).prop_filter("odd", |x| x.len() % 2 == 1)) {
        prop_assert_eq!(project_pi(&lift_iota(&x)), x);
    }

    #[test]
    fn iota_after_pi_only_drops_the_last_imaginary_part(z in prop::collection::vec(complex(), 2..=3)) {
        let back = lift_iota(&project_pi(&z));
        let n = z.len();
        prop_assert_eq!(&back[..n - 1], &z[..n - 1]);
        prop_assert_eq!(back[n - 1], c(z[n - 1].re, 0.0));
    }

    #[test]
    fn b_alpha_round_trip(b in prop::collection::vec(coord(), 2..=4).prop_filter("even", |b| b.len() % 2 == 0), codim in 1u8..=2) {
        prop_assume!(codim == 1 || b.iter().any(|&x| x != 0.0));
        prop_assert_eq!(b_from_alpha(&alpha_from_b(&b, codim).unwrap()).unwrap(), b);
    }

    #[test]
    fn codim_one_lines_project_into_h(a in prop::collection::vec(coord(), 3), b in prop::collection::vec(coord(), 2), z1 in complex()) {
        let h = hyperplane_from_b(&a, &b, 1).unwrap();
        let alpha = alpha_from_b(&b, 1).unwrap();
        let ia = lift_iota(&a);
        let z2 = ia[1] - alpha[0] * (z1 - ia[0]);
        prop_assert!(h.residual(&project_pi(&[z1, z2])) <= 1e-12 * (1.0 + z2.norm()));
    }

    #[test]
    fn support_points_are_cone_invariant_and_support(
        name in prop::sample::select(DOMAINS.to_vec()),
        seed in 0u64..5,
        head in prop::collection::vec(complex(), 2),
        tail in prop::collection::vec(coord(), 2),
        t in 0.01..100.0f64,
    ) {
        let dom = DomainDescriptor::builtin(name).unwrap();
        let v = Mixed::new(head[..dom.n() - dom.d()].to_vec(), tail[..dom.d()].to_vec());
        prop_assume!(!v.is_zero() && dom.in_wd(&v));
        prop_assert!(dom.in_wd(&v.scale(t)));
        let Some(p) = dom.support_point(&v).unwrap() else { return Ok(()) };
        let q = dom.support_point(&v.scale(t)).unwrap().unwrap();
        prop_assert!(p.point.distance(&q.point) <= 1e-12 * p.point.norm().max(1.0));
        let top = v.re_dot(&p.point.to_complex());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for z in dom.sample_interior(&mut rng, 100) {
            prop_assert!(v.re_dot(&z) < top + 1e-12 * top.abs().max(1.0));
        }
    }

    #[test]
    fn support_data_is_scale_invariant(coeffs in prop::collection::vec(complex(), 1..4), a in complex(), b in coord(), t in 0.01..100.0f64) {
        let h = HParams::new(vec![coeffs], vec![Constrained::pair(a, b)]).unwrap();
        let dom = DomainDescriptor::builtin("semiball").unwrap();
        let Ok(s) = boundary_data_from_h(&dom, &h, grid(), &[]) else { return Ok(()) };
        let st = boundary_data_from_h(&dom, &h.scaled(t), grid(), &[]).unwrap();
        for j in 0..2 {
            for (x, y) in s.component(j).iter().zip(st.component(j)) {
                prop_assert!((x - y).norm() <= 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn section_topology_is_translation_equivariant(
        which in 0usize..2,
        w in prop::collection::vec(-3.0..3.0f64, 3),
        anchor in prop::collection::vec(-1.5..1.5f64, 3),
        dir in prop::collection::vec(complex(), 2),
    ) {
        prop_assume!(dir.iter().any(|d| d.norm() > 1e-3));
        let base = if which == 0 { SemitubeBase::ball() } else { SemitubeBase::dumbbell() };
        let line = ComplexLine::new(lift_iota(&anchor), dir).unwrap();
        let cfg = RasterConfig::new(4.0, 64).unwrap();
        let before = topology(&line_section(&base, &line, &cfg).unwrap());
        let moved = line.translated(&lift_iota(&w));
        let after = topology(&line_section(&base.translated(&w), &moved, &cfg).unwrap());
        prop_assert_eq!(before.components, after.components);
        prop_assert_eq!(before.holes, after.holes);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn convex_bases_scan_clean(seed in any::<u64>()) {
        let report = cconvexity_scan(&SemitubeBase::ball(), &ScanConfig { count: 64, seed, ..ScanConfig::default() }).unwrap();
        prop_assert!(report.violation.is_none());
    }
}
