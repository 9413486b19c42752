mod common;

use std::collections::BTreeMap;

use common::Stream;
use logsync_core::models::{
    finite_difference_jacobian, make_model, sample_domain, BiochemicalParams, GoodwinParams, Interval,
    SampleStrategy, Signal, TimeGrid, VectorFieldModel,
};
use logsync_core::Error;
use proptest::prelude::*;

fn goodwin() -> VectorFieldModel {
    VectorFieldModel::goodwin(GoodwinParams::default()).unwrap()
}

fn biochemical() -> VectorFieldModel {
    VectorFieldModel::biochemical(BiochemicalParams::default(), Signal::default()).unwrap()
}

fn assert_jacobian_matches(model: &VectorFieldModel, x: &[f64], t: f64) {
    let exact = model.jacobian_at(x, t).unwrap();
    let fd = finite_difference_jacobian(model, x, t, 1e-6);
    let scale = 1.0 + exact.max_abs();
    assert!(exact.max_abs_diff(&fd) <= 1e-6 * scale, "at {x:?}: {exact:?} vs {fd:?}");
}

#[test]
fn goodwin_jacobian_against_finite_differences() {
    let m = goodwin();
    let mut s = Stream::new(1);
    for _ in 0..50 {
        let x = [s.uniform(0.0, 800.0), s.uniform(0.0, 800.0), s.uniform(0.0, 50.0)];
        assert_jacobian_matches(&m, &x, 0.0);
    }
}

#[test]
fn biochemical_jacobian_against_finite_differences() {
    let m = biochemical();
    let mut s = Stream::new(2);
    for _ in 0..50 {
        let x = [s.uniform(0.0, 20.0), s.uniform(0.0, 0.1)];
        assert_jacobian_matches(&m, &x, s.uniform(0.0, 5.0));
    }
}

#[test]
fn goodwin_jacobian_entries() {
    let p = GoodwinParams::default();
    let j = goodwin().jacobian_at(&[3.0, 4.0, 2.0], 0.0).unwrap();
    assert_eq!(j[(0, 0)], -p.b);
    assert_eq!(j[(0, 2)], -p.a / 9.0);
    assert_eq!(j[(1, 0)], p.alpha);
    assert_eq!(j[(1, 1)], -p.beta);
    assert_eq!(j[(2, 1)], p.gamma);
    assert_eq!(j[(2, 2)], -p.delta * p.k_m / 9.0);
    for (r, c) in [(0, 1), (1, 2), (2, 0)] {
        assert_eq!(j[(r, c)], 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn biochemical_faces_point_inward(x in 0.0f64..100.0, y in 0.0f64..0.1, t in 0.0f64..10.0) {
        let m = biochemical();
        let s_y = BiochemicalParams::default().s_y;
        prop_assert!(m.rhs(&[x, 0.0], t)[1] >= 0.0);
        prop_assert!(m.rhs(&[x, s_y], t)[1] <= 0.0);
        prop_assert!(m.rhs(&[0.0, y], t)[0] >= 0.0);
    }

    #[test]
    fn goodwin_faces_point_inward(x in 0.0f64..1000.0, y in 0.0f64..1000.0, z in 0.0f64..1000.0) {
        let m = goodwin();
        prop_assert!(m.rhs(&[0.0, y, z], 0.0)[0] > 0.0);
        prop_assert!(m.rhs(&[x, 0.0, z], 0.0)[1] >= 0.0);
        prop_assert!(m.rhs(&[x, y, 0.0], 0.0)[2] >= 0.0);
    }

    #[test]
    fn goodwin_is_a_cyclic_negative_feedback(x in 0.0f64..1000.0, y in 0.0f64..1000.0, z in 0.0f64..1000.0) {
        let j = goodwin().jacobian_at(&[x, y, z], 0.0).unwrap();
        prop_assert!(j[(0, 2)] < 0.0);
        prop_assert!(j[(1, 0)] > 0.0);
        prop_assert!(j[(2, 1)] > 0.0);
        for i in 0..3 {
            prop_assert!(j[(i, i)] < 0.0);
        }
    }
}

#[test]
fn domain_is_enforced() {
    let m = biochemical();
    assert!(matches!(m.jacobian_at(&[1.0, 0.2], 0.0), Err(Error::DomainViolation(_))));
    assert!(matches!(goodwin().jacobian_at(&[-1.0, 0.0, 0.0], 0.0), Err(Error::DomainViolation(_))));
}

#[test]
fn factory_validates_names_and_keys() {
    let mut p = BTreeMap::new();
    assert!(matches!(make_model("goodwinn", &p, None), Err(Error::Unsupported(_))));
    p.insert("delta".to_string(), 12.0);
    assert_eq!(make_model("goodwin", &p, None).unwrap().params().iter().find(|(k, _)| *k == "delta").unwrap().1, 12.0);
    p.insert("zeta".to_string(), 1.0);
    assert!(matches!(make_model("goodwin", &p, None), Err(Error::InvalidArgument(_))));
    assert!(make_model("linear_tv", &BTreeMap::new(), None).is_err());
}

#[test]
fn signal_defaults() {
    let z = Signal::default();
    assert_eq!(z.at(0.0), 20.0);
    assert!((z.at(std::f64::consts::PI / 20.0) - 40.0).abs() < 1e-12);
    assert!(z.is_nonnegative());
}

#[test]
fn sampling_needs_a_finite_box() {
    let m = goodwin();
    let grid = SampleStrategy::Grid { per_axis: 3 };
    assert!(matches!(sample_domain(&m, grid, None, TimeGrid::single(0.0)), Err(Error::InvalidArgument(_))));
    let bx = [Interval::new(0.0, 1.0), Interval::new(0.0, 1.0), Interval::new(0.0, 1.0)];
    assert_eq!(sample_domain(&m, grid, Some(&bx), TimeGrid::single(0.0)).unwrap().len(), 27);
    let bad = [Interval::new(-1.0, 1.0), Interval::new(0.0, 1.0), Interval::new(0.0, 1.0)];
    assert!(matches!(sample_domain(&m, grid, Some(&bad), TimeGrid::single(0.0)), Err(Error::DomainViolation(_))));
}

#[test]
fn random_sampling_is_seeded_and_includes_corners() {
    let m = biochemical();
    let bx = [Interval::new(0.0, 20.0), Interval::new(0.0, 0.1)];
    let st = SampleStrategy::UniformRandom { count: 30, seed: 9 };
    let a = sample_domain(&m, st, Some(&bx), TimeGrid::single(0.0)).unwrap();
    let b = sample_domain(&m, st, Some(&bx), TimeGrid::single(0.0)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 34);
    assert!(a.iter().any(|s| s.state == vec![20.0, 0.1]));
    assert!(a.iter().all(|s| m.contains(&s.state)));
}
