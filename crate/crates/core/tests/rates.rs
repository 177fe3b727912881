use bpmr_channel::bounds::{conditional_entropy, error_probability, l0_iud, l1_iud, l1_iud_argument, l1_m1_argument, u0_iud, u1_iud_dual_argument, u1_m1_argument};
use bpmr_channel::channel::{simulate, write_block};
use bpmr_channel::estimator::{estimate_rate, log_likelihood, mean_and_std_err};
use bpmr_channel::exact::{conditional_prob_oracle, exact_rate, output_entropy, ConditioningPattern};
use bpmr_channel::seed::rng_from_seed;
use bpmr_channel::{BinarySequence, ChannelParams, InputProcess, Probability};
use proptest::prelude::*;

fn cp(p: f64, a: f64) -> ChannelParams {
    ChannelParams::new(p, a).unwrap()
}

fn grid(points: usize) -> impl Iterator<Item = f64> + Clone {
    (0..points).map(move |i| i as f64 / (points - 1) as f64)
}

proptest! {
    #[test]
    fn complementing_noise_complements_output(
        bits in proptest::collection::vec((0u8..2, 0u8..2, 0u8..2), 1..64),
        boundary in 0u8..2,
    ) {
        let x = BinarySequence::new(boundary, bits.iter().map(|t| t.0).collect()).unwrap();
        let z: Vec<u8> = bits.iter().map(|t| t.1).collect();
        let w: Vec<u8> = bits.iter().map(|t| t.2).collect();
        let flipped: Vec<u8> = w.iter().map(|b| b ^ 1).collect();
        let y = write_block(&x, &z, &w).unwrap();
        let y_flipped = write_block(&x, &z, &flipped).unwrap();
        prop_assert!(y.iter().zip(&y_flipped).all(|(a, b)| a ^ b == 1));
    }

    #[test]
    fn exact_rate_is_a_rate(p in 0.0f64..=1.0, a in 0.0f64..=1.0, b in 0.0f64..=1.0, n in 1usize..9) {
        for process in [InputProcess::Iud, InputProcess::markov1(b).unwrap()] {
            let r = exact_rate(&cp(p, a), &process, n).unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&r), "{r}");
        }
    }
}

#[test]
fn single_symbol_rate_is_the_bsc_bound() {
    for p in grid(21) {
        for a in grid(21) {
            let params = cp(p, a);
            let r = exact_rate(&params, &InputProcess::Iud, 1).unwrap();
            assert!((r - l0_iud(&params)).abs() < 1e-12, "p={p} alpha={a}");
        }
    }
}

#[test]
fn finite_block_rates_respect_bounds() {
    for &(p, a) in &[(0.2, 0.1), (0.05, 0.05), (0.3, 0.2), (0.45, 0.0)] {
        let params = cp(p, a);
        for n in [2, 5, 8, 10, 12] {
            let r = exact_rate(&params, &InputProcess::Iud, n).unwrap();
            assert!(r <= u0_iud(&params) + 1e-9, "n={n}");
            if n >= 8 {
                assert!(r >= l1_iud(&params) - 2.0 / n as f64, "n={n}");
            }
        }
    }
}

#[test]
fn output_entropy_is_reproducible() {
    // Two block lengths either side of the partition width exercise both
    // the split and the unsplit path.
    let params = cp(0.2, 0.1);
    for n in [7, 12] {
        let h = output_entropy(&params, &InputProcess::Iud, n).unwrap();
        let again = output_entropy(&params, &InputProcess::Iud, n).unwrap();
        assert_eq!(h.to_bits(), again.to_bits());
    }
}

#[test]
fn oracle_reproduces_closed_form_probabilities() {
    for p in grid(31) {
        for a in grid(31) {
            let params = cp(p, a);
            let iud = InputProcess::Iud;
            let q = |process: &InputProcess, pattern: &str| {
                conditional_prob_oracle(&params, process, pattern.parse::<ConditioningPattern>().unwrap()).unwrap()
            };
            assert!((q(&iud, "y=0|xprev=0") - l1_iud_argument(&params)).abs() < 1e-12);
            assert!((q(&iud, "y=1|yprev=1") - u1_iud_dual_argument(&params)).abs() < 1e-12);
            assert!((q(&iud, "y=0") - 0.5).abs() < 1e-12);
            for b in grid(11) {
                let beta = Probability::new(b).unwrap();
                let m1 = InputProcess::Markov1 { beta };
                assert!((q(&m1, "y=1|xprev=0") - l1_m1_argument(&params, beta)).abs() < 1e-12);
                assert!((q(&m1, "y=0|yprev=0") - u1_m1_argument(&params, beta)).abs() < 1e-12);
                assert!((q(&m1, "y=0") - 0.5).abs() < 1e-12);
                assert!((q(&m1, "x=0|x2=0") - ((1.0 - b).powi(2) + b * b)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn simulated_error_rate_matches_bsc_crossover() {
    let params = cp(0.2, 0.1);
    let n = 1_000_000;
    let (x, y) = simulate(&params, &InputProcess::Iud, n, &mut rng_from_seed(4)).unwrap();
    let errors = x.bits().iter().zip(&y).filter(|(a, b)| a != b).count();
    let q = error_probability(&params);
    assert!((q - 0.18).abs() < 1e-15);
    let sigma = (q * (1.0 - q) / n as f64).sqrt();
    assert!((errors as f64 / n as f64 - q).abs() < 3.0 * sigma);
}

#[test]
fn simulated_conditional_entropy_matches_closed_form() {
    // Per-symbol empirical H(Y_i | X_{i-1}, X_i) from one long Markov-1 run.
    let params = cp(0.2, 0.1);
    let process = InputProcess::markov1(0.3).unwrap();
    let (x, y) = simulate(&params, &process, 400_000, &mut rng_from_seed(8)).unwrap();
    let mut counts = [[0usize; 2]; 4];
    for ((prev, &cur), &out) in x.previous().zip(x.bits()).zip(&y) {
        counts[(prev * 2 + cur) as usize][out as usize] += 1;
    }
    let total = y.len() as f64;
    let h: f64 = counts
        .iter()
        .map(|c| {
            let m = (c[0] + c[1]) as f64;
            let q = c[1] as f64 / m;
            let hq = if q == 0.0 || q == 1.0 { 0.0 } else { -q * q.log2() - (1.0 - q) * (1.0 - q).log2() };
            m / total * hq
        })
        .sum();
    assert!((h - conditional_entropy(&params, &process)).abs() < 5e-3);
}

#[test]
fn monte_carlo_entropy_matches_enumeration_at_short_blocks() {
    for &(p, a) in &[(0.1, 0.05), (0.2, 0.1), (0.3, 0.2)] {
        let params = cp(p, a);
        let process = InputProcess::Iud;
        let est = estimate_rate(&params, &process, 10, 10_000, 21).unwrap();
        let exact = output_entropy(&params, &process, 10).unwrap() / 10.0;
        assert!((est.entropy_rate - exact).abs() <= 3.0 * est.std_err, "{est:?} vs {exact}");
    }
}

#[test]
fn standard_error_scales_with_replicates() {
    let params = cp(0.2, 0.1);
    let few = estimate_rate(&params, &InputProcess::Iud, 20, 2_000, 5).unwrap();
    let many = estimate_rate(&params, &InputProcess::Iud, 20, 8_000, 5).unwrap();
    let ratio = few.std_err / many.std_err;
    assert!((ratio - 2.0).abs() <= 0.6, "ratio {ratio}");
}

#[test]
fn long_block_likelihood_stays_finite() {
    let params = cp(0.3, 0.1);
    let (_, y) = simulate(&params, &InputProcess::Iud, 200_000, &mut rng_from_seed(1)).unwrap();
    let ll = log_likelihood(&params, &InputProcess::Iud, &y).unwrap();
    assert!(ll.is_finite() && ll < 0.0);
    let (_, se) = mean_and_std_err(&[ll, ll]);
    assert_eq!(se, 0.0);
}
