use spinj::spin_core::{expectation_and_variance, random_state};
use spinj::{Direction, HalfInt};

#[test]
fn haar_dispersion_matches_trace_average() {
    // E⟨J_z²⟩ = Tr J_z² / (2j+1) = j(j+1)/3, and ⟨J_z⟩ averages to zero
    let j = HalfInt::from_int(100);
    let samples: Vec<(f64, f64)> = (0..400u64).map(|s| expectation_and_variance(&random_state(j, s), Direction::Z).unwrap()).collect();
    let n = samples.len() as f64;
    let second: Vec<f64> = samples.iter().map(|(m, v)| v + m * m).collect();
    let mean2 = second.iter().sum::<f64>() / n;
    let sd = (second.iter().map(|x| (x - mean2).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() / n.sqrt();
    let want = 100.0 * 101.0 / 3.0;
    assert!((mean2 - want).abs() < 4.0 * sd, "{mean2} vs {want} ± {sd}");
    let mean1 = samples.iter().map(|(m, _)| m).sum::<f64>() / n;
    assert!(mean1.abs() < 4.0 * (want / n).sqrt());
}

#[test]
fn seeds_are_reproducible_and_distinct() {
    let j = HalfInt::from_twice(31);
    assert_eq!(random_state(j, 9).amplitudes(), random_state(j, 9).amplitudes());
    assert!(random_state(j, 9).fidelity(&random_state(j, 10)).unwrap() < 0.5);
}

#[test]
fn large_random_states_are_never_classical() {
    // along the quantization axis at j = 1000, and along a tilted axis where
    // the dense rotation is still available
    for (j, axis) in [(1000u32, Direction::Z), (500, Direction::new(1.0, 0.3))] {
        for seed in 0..if j > 500 { 20u64 } else { 4 } {
            let (_, var) = expectation_and_variance(&random_state(HalfInt::from_int(j), seed), axis).unwrap();
            let r = var.sqrt() / j as f64;
            assert!(r > 0.4 && r < 0.75, "j={j} seed {seed}: {r}");
        }
    }
}

#[test]
fn unstructured_states_beyond_the_dense_limit_are_refused_off_axis() {
    let s = random_state(HalfInt::from_int(1000), 1);
    assert!(matches!(expectation_and_variance(&s, Direction::X), Err(spinj::SpinError::Capacity { .. })));
}
