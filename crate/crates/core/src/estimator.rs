//! Simulation-based information rate.
//!
//! For a long sampled output block, `-(1/n) log2 P(Y_1^n)` converges to the
//! output entropy rate; subtracting the exact conditional entropy rate gives
//! the information rate of the chosen input process.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::channel::{check_bits, simulate, ChannelParams, InputProcess};
use crate::error::{Error, Result};
use crate::exact::{conditional_entropy_rate, CompensatedSum, ForwardMessage, StepKernel};
use crate::seed::{point_seed, rng_from_seed};

pub const DEFAULT_BLOCK_LEN: usize = 100_000;
pub const DEFAULT_REPLICATES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    /// Information rate in bits per symbol.
    pub rate: f64,
    pub std_err: f64,
    /// Mean of `-(1/n) log2 P(Y_1^n)` over replicates.
    pub entropy_rate: f64,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
}

impl RateEstimate {
    pub fn is_plausible(&self) -> bool {
        self.std_err >= 0.0
            && self.rate >= -6.0 * self.std_err
            && self.rate <= 1.0 + 6.0 * self.std_err
    }
}

/// `log2 P(Y_1^n = y)`, computed with a normalized forward recursion so it
/// stays finite for any block length. Impossible outputs give `-inf`.
pub fn log_likelihood(params: &ChannelParams, process: &InputProcess, y: &[u8]) -> Result<f64> {
    if y.is_empty() {
        return Err(Error::EmptyBlock);
    }
    check_bits(y)?;
    let kernel = StepKernel::new(params, process);
    Ok(normalized_log_likelihood(&kernel, y))
}

fn normalized_log_likelihood(kernel: &StepKernel, y: &[u8]) -> f64 {
    let mut msg = ForwardMessage::initial();
    let mut log_prob = CompensatedSum::default();
    for &bit in y {
        msg = msg.step(kernel, bit);
        let scale = msg.total();
        if scale <= 0.0 {
            return f64::NEG_INFINITY;
        }
        log_prob.add(scale.log2());
        msg.weights[0] /= scale;
        msg.weights[1] /= scale;
    }
    log_prob.value()
}

fn replicate_entropy(params: &ChannelParams, process: &InputProcess, kernel: &StepKernel, n: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let (_, y) = simulate(params, process, n, &mut rng).expect("block length checked by caller");
    -normalized_log_likelihood(kernel, &y) / n as f64
}

/// Estimates the information rate from `replicates` independent blocks of
/// length `n`. Replicate `r` is seeded from `(master_seed, p, alpha, beta, r)`,
/// so the result is independent of scheduling.
pub fn estimate_rate(
    params: &ChannelParams,
    process: &InputProcess,
    n: usize,
    replicates: usize,
    master_seed: u64,
) -> Result<RateEstimate> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    if replicates < 2 {
        return Err(Error::TooFewReplicates {
            min: 2,
            got: replicates,
        });
    }
    let kernel = StepKernel::new(params, process);
    let seed_of = |r: usize| point_seed(master_seed, params.p(), params.alpha(), process.beta(), r as u64);
    let run = |r: usize| replicate_entropy(params, process, &kernel, n, seed_of(r));

    #[cfg(feature = "parallel")]
    let samples: Vec<f64> = (0..replicates).into_par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let samples: Vec<f64> = (0..replicates).map(run).collect();

    let (mean, std_err) = mean_and_std_err(&samples);
    Ok(RateEstimate {
        rate: mean - conditional_entropy_rate(params, process),
        std_err,
        entropy_rate: mean,
        n,
        replicates,
        seed: master_seed,
    })
}

/// Sample mean and standard error of the mean.
pub fn mean_and_std_err(samples: &[f64]) -> (f64, f64) {
    let count = samples.len() as f64;
    let mut sum = CompensatedSum::default();
    samples.iter().for_each(|&x| sum.add(x));
    let mean = sum.value() / count;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let mut sq = CompensatedSum::default();
    samples.iter().for_each(|&x| sq.add((x - mean) * (x - mean)));
    let variance = sq.value() / (count - 1.0);
    (mean, (variance / count).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::h2;
    use crate::exact::output_prob;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cp(p: f64, a: f64) -> ChannelParams {
        ChannelParams::new(p, a).unwrap()
    }

    #[test]
    fn log_likelihood_examples() {
        let y = [0, 1, 1, 0, 1, 0, 0, 1];
        assert!((log_likelihood(&cp(0.0, 0.0), &InputProcess::Iud, &y).unwrap() + 8.0).abs() < 1e-12);
        let long: Vec<u8> = (0..5000).map(|i| (i % 3 == 0) as u8).collect();
        let ll = log_likelihood(&cp(0.3, 0.5), &InputProcess::markov1(0.2).unwrap(), &long).unwrap();
        assert!((ll + 5000.0).abs() < 1e-8);
        assert!(log_likelihood(&cp(0.1, 0.1), &InputProcess::Iud, &[]).is_err());
    }

    #[test]
    fn log_likelihood_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let params = cp(0.2, 0.1);
        for process in [InputProcess::Iud, InputProcess::markov1(0.35).unwrap()] {
            for _ in 0..20 {
                let y: Vec<u8> = (0..12).map(|_| rng.gen_bool(0.5) as u8).collect();
                let exact = output_prob(&params, &process, &y).unwrap().log2();
                let ll = log_likelihood(&params, &process, &y).unwrap();
                assert!((exact - ll).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn impossible_output_is_negative_infinity() {
        // With p = 1 and no noise, Y_2 must equal X_1, and Markov beta = 0
        // freezes the input, so all outputs are constant.
        let ll = log_likelihood(&cp(1.0, 0.0), &InputProcess::markov1(0.0).unwrap(), &[0, 1]).unwrap();
        assert_eq!(ll, f64::NEG_INFINITY);
    }

    #[test]
    fn noiseless_rate_is_one() {
        let est = estimate_rate(&cp(0.0, 0.0), &InputProcess::Iud, 10_000, 10, 1).unwrap();
        assert!((est.rate - 1.0).abs() < 1e-3);
        assert!(est.is_plausible());
    }

    #[test]
    fn bsc_rate() {
        let est = estimate_rate(&cp(0.0, 0.1), &InputProcess::Iud, 100_000, 10, 2).unwrap();
        let truth = 1.0 - h2(0.1);
        assert!((est.rate - truth).abs() <= 3.0 * est.std_err.max(1e-4), "{est:?}");
    }

    #[test]
    fn estimates_are_seed_deterministic() {
        let params = cp(0.2, 0.1);
        let process = InputProcess::markov1(0.3).unwrap();
        let a = estimate_rate(&params, &process, 2_000, 8, 99).unwrap();
        let b = estimate_rate(&params, &process, 2_000, 8, 99).unwrap();
        assert_eq!(a, b);
        let c = estimate_rate(&params, &process, 2_000, 8, 100).unwrap();
        assert_ne!(a.rate, c.rate);
    }

    #[test]
    fn argument_validation() {
        let params = cp(0.2, 0.1);
        assert_eq!(estimate_rate(&params, &InputProcess::Iud, 0, 10, 0), Err(Error::EmptyBlock));
        assert_eq!(
            estimate_rate(&params, &InputProcess::Iud, 100, 1, 0),
            Err(Error::TooFewReplicates { min: 2, got: 1 })
        );
    }

    #[test]
    fn std_err_helper() {
        let (mean, se) = mean_and_std_err(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(mean, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
