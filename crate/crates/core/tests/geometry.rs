use std::sync::Arc;

use num_rational::Ratio;
use pdfill_core::filling::{
    isoperimetric_sweep, minimal_filling, CayleyBallComplex, CycleStatus, FillingOptions, SweepConfig,
};
use pdfill_core::folner::{cube_words, folner_boundary, folner_sweep, verify_support_bound, Family, Verdict};
use pdfill_core::groups::{make_group, Group, GroupSpec};
use pdfill_core::hyperbolicity::{slimness_sweep, SlimnessConfig, TriangleSample};
use pdfill_core::ring::RingDescriptor;
use pdfill_core::word::Word;

fn group(spec: &str) -> Arc<Group> {
    make_group(&spec.parse::<GroupSpec>().unwrap()).unwrap()
}

fn sweep_config(radius: usize, cap: usize) -> SweepConfig {
    SweepConfig {
        radius,
        word_length_cap: cap,
        coeff_bound: 1,
        ring: RingDescriptor::Integers,
        max_elements: 1_000_000,
        filling: FillingOptions::default(),
    }
}

#[test]
fn optimal_fillers_respect_the_face_count_bound() {
    let z2 = group("Z^2");
    // [a,b]^2 needs a coefficient of 2
    let config = SweepConfig {
        coeff_bound: 2,
        ..sweep_config(4, 10)
    };
    let report = isoperimetric_sweep(&z2, &config).unwrap();
    for c in &report.per_cycle {
        assert_eq!(c.status, CycleStatus::Filled, "{}", c.word);
        // each square face covers at most 4 boundary edges
        assert!(c.filler_norm.unwrap() * 4 >= c.cycle_norm, "{}", c.word);
        assert!(c.optimal);
    }
}

#[test]
fn fillers_have_the_requested_boundary() {
    let g = group("Klein");
    let x = CayleyBallComplex::build(&g, 4, RingDescriptor::Integers, 100_000).unwrap();
    // the relator times a conjugate of it
    let cycle = x.word_cycle(&Word::parse("abab^-1a^2bab^-1a^-1", 2).unwrap()).unwrap();
    let r = minimal_filling(&x, &cycle, 1, &FillingOptions::default()).unwrap();
    assert_eq!(x.boundary_of_faces(&r.filler).unwrap(), r.cycle);
}

#[test]
fn folner_boundary_is_a_subset() {
    let g = group("Sigma2");
    let ball = g.ball(2, 10_000).unwrap();
    let f: Vec<Word> = ball.elements().iter().step_by(3).cloned().collect();
    let b = folner_boundary(&g, &f);
    assert!(b.iter().all(|x| f.iter().any(|y| g.equal(x, y))));
    assert_eq!(folner_boundary(&g, &[Word::identity()]), vec![Word::identity()]);
}

#[test]
fn z3_cubes() {
    let z3 = group("Z^3");
    for n in 2..=5 {
        // three faces of the cube meeting at the origin
        let expected = n * n * n - (n - 1) * (n - 1) * (n - 1);
        assert_eq!(folner_boundary(&z3, &cube_words(3, n)).len(), expected);
    }
}

#[test]
fn klein_balls_shrink() {
    let r = folner_sweep(&group("Klein"), Family::Balls(6), Ratio::new(1, 5), 100_000).unwrap();
    assert!(r.series.windows(2).all(|w| w[1].ratio < w[0].ratio));
    assert_eq!(r.best_ratio, Ratio::new(19, 85));
    assert_eq!(r.verdict, Verdict::Inconclusive);
    let r = folner_sweep(&group("Klein"), Family::Balls(10), Ratio::new(1, 5), 100_000).unwrap();
    assert_eq!(r.verdict, Verdict::RatioVanishing);
}

#[test]
fn support_bound_holds_with_the_swept_epsilon() {
    let g = group("F2");
    let eps = folner_sweep(&g, Family::Connected(8), Ratio::new(1, 5), 100_000)
        .unwrap()
        .epsilon_hat;
    let r = verify_support_bound(&g, RingDescriptor::Integers, 200, 1, eps, None, 11).unwrap();
    assert_eq!(r.inclusion_failures, 0);
    assert_eq!(r.inequality_violations, 0);
}

#[test]
fn slimness_is_bounded_by_the_window() {
    for (spec, radius) in [("Klein", 4), ("T11b:2", 4), ("Sigma2", 3)] {
        let config = SlimnessConfig {
            radius,
            sample: TriangleSample::default(),
            exhaustive: false,
            max_elements: 1_000_000,
        };
        let r = slimness_sweep(&group(spec), &config).unwrap();
        assert!(r.delta_hat <= 2 * radius);
        assert_eq!(r.witness.unwrap().delta, r.delta_hat);
    }
}
