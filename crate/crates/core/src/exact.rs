//! Exact finite-block information rates by enumeration of every output
//! sequence, and exact conditional probabilities over a short window.
//!
//! The output is a hidden Markov process whose hidden state is the current
//! input bit: `Y_i` depends only on `(X_{i-1}, X_i)`. A two-entry forward
//! message therefore scores any output block in linear time.

use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::bounds::{conditional_entropy, h2};
use crate::channel::{check_bits, output_likelihood, ChannelParams, InputProcess};
use crate::error::{Error, Result};

/// Largest block length accepted by the enumerating operations.
pub const ENUMERATION_LIMIT: usize = 22;

/// Output prefixes fixed before splitting the enumeration into independent
/// subtrees.
const PARTITION_BITS: usize = 8;

/// `weight[y][prev][cur] = P(X_i = cur | X_{i-1} = prev) P(Y_i = y | prev, cur)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepKernel {
    weight: [[[f64; 2]; 2]; 2],
}

impl StepKernel {
    pub fn new(params: &ChannelParams, process: &InputProcess) -> Self {
        let mut weight = [[[0.0; 2]; 2]; 2];
        for y in 0..2u8 {
            for prev in 0..2u8 {
                for cur in 0..2u8 {
                    weight[y as usize][prev as usize][cur as usize] =
                        process.transition(prev, cur) * output_likelihood(params, prev, cur, y);
                }
            }
        }
        StepKernel { weight }
    }
}

/// Joint probability of the observed output prefix and the current input bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardMessage {
    pub weights: [f64; 2],
}

impl ForwardMessage {
    /// Law of the boundary bit `X_0`.
    pub fn initial() -> Self {
        ForwardMessage { weights: [0.5, 0.5] }
    }

    #[inline]
    pub fn step(&self, kernel: &StepKernel, y: u8) -> Self {
        let k = &kernel.weight[y as usize];
        let [m0, m1] = self.weights;
        ForwardMessage {
            weights: [m0 * k[0][0] + m1 * k[1][0], m0 * k[0][1] + m1 * k[1][1]],
        }
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.weights[0] + self.weights[1]
    }
}

fn check_block_len(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyBlock)
    } else if n > ENUMERATION_LIMIT {
        Err(Error::EnumerationLimit {
            n,
            limit: ENUMERATION_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// `P(Y_1^n = y)` with the boundary input bit marginalized out.
pub fn output_prob(params: &ChannelParams, process: &InputProcess, y: &[u8]) -> Result<f64> {
    check_block_len(y.len())?;
    check_bits(y)?;
    let kernel = StepKernel::new(params, process);
    Ok(y
        .iter()
        .fold(ForwardMessage::initial(), |msg, &bit| msg.step(&kernel, bit))
        .total())
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

fn entropy_below(kernel: &StepKernel, msg: ForwardMessage, remaining: usize, acc: &mut CompensatedSum) {
    if remaining == 0 {
        let p = msg.total();
        if p > 0.0 {
            acc.add(-p * p.log2());
        }
        return;
    }
    for bit in 0..2u8 {
        entropy_below(kernel, msg.step(kernel, bit), remaining - 1, acc);
    }
}

/// `H(Y_1^n)` in bits, summed over all `2^n` output blocks.
///
/// The sum is split into `2^min(n, 8)` prefix subtrees combined in a fixed
/// order, so the result does not depend on how the subtrees are scheduled.
pub fn output_entropy(params: &ChannelParams, process: &InputProcess, n: usize) -> Result<f64> {
    check_block_len(n)?;
    let kernel = StepKernel::new(params, process);
    let prefix_len = n.min(PARTITION_BITS);
    let subtree = |prefix: u32| {
        let mut msg = ForwardMessage::initial();
        for i in (0..prefix_len).rev() {
            msg = msg.step(&kernel, ((prefix >> i) & 1) as u8);
        }
        let mut acc = CompensatedSum::default();
        entropy_below(&kernel, msg, n - prefix_len, &mut acc);
        acc.value()
    };

    #[cfg(feature = "parallel")]
    let partials: Vec<f64> = (0..1u32 << prefix_len).into_par_iter().map(subtree).collect();
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<f64> = (0..1u32 << prefix_len).map(subtree).collect();

    let mut total = CompensatedSum::default();
    partials.into_iter().for_each(|x| total.add(x));
    Ok(total.value())
}

/// `H(Y_i | X_{i-1}, X_i)`, the same for every `i >= 2`.
pub fn conditional_entropy_rate(params: &ChannelParams, process: &InputProcess) -> f64 {
    conditional_entropy(params, process)
}

/// `P(Y_1 != X_1)`, where the unobserved boundary bit `X_0` enters through
/// the state.
pub fn boundary_error_probability(params: &ChannelParams, process: &InputProcess) -> f64 {
    let flip = process.flip_probability();
    let (a, ab) = (params.alpha(), params.alpha_bar());
    params.p_bar() * a + params.p() * (flip * ab + (1.0 - flip) * a)
}

/// `H(Y_1^n | X_1^n) = H(Y_1 | X_1) + (n - 1) H(Y_i | X_{i-1}, X_i)`.
pub fn block_conditional_entropy(params: &ChannelParams, process: &InputProcess, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    Ok(h2(boundary_error_probability(params, process))
        + (n - 1) as f64 * conditional_entropy_rate(params, process))
}

/// `(1/n) I(X_1^n; Y_1^n)` in bits per symbol.
pub fn exact_rate(params: &ChannelParams, process: &InputProcess, n: usize) -> Result<f64> {
    let joint = output_entropy(params, process, n)?;
    Ok((joint - block_conditional_entropy(params, process, n)?) / n as f64)
}

/// Events whose exact probability [`conditional_prob_oracle`] computes; all
/// refer to a generic position `i` of the stationary channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditioningPattern {
    /// `P(Y_i = y | X_{i-1} = x_prev)`
    OutputGivenPreviousInput { y: u8, x_prev: u8 },
    /// `P(Y_i = y | Y_{i-1} = y_prev)`
    OutputGivenPreviousOutput { y: u8, y_prev: u8 },
    /// `P(Y_i = y)`
    OutputMarginal { y: u8 },
    /// `P(X_i = x | X_{i-2} = x_two_back)`
    InputGivenInputTwoBack { x: u8, x_two_back: u8 },
}

impl FromStr for ConditioningPattern {
    type Err = Error;

    /// Accepts `y=B|xprev=B`, `y=B|yprev=B`, `y=B` and `x=B|x2=B`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let unknown = || Error::UnknownPattern(s.to_string());
        let bit = |v: &str| match v {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            _ => Err(unknown()),
        };
        let assignment = |part: &str| -> Result<(String, u8)> {
            let (k, v) = part.split_once('=').ok_or_else(unknown)?;
            Ok((k.to_ascii_lowercase(), bit(v)?))
        };
        let (event, given) = match compact.split_once('|') {
            Some((e, g)) => (assignment(e)?, Some(assignment(g)?)),
            None => (assignment(&compact)?, None),
        };
        match (event.0.as_str(), given.as_ref().map(|(k, v)| (k.as_str(), *v))) {
            ("y", Some(("xprev", v))) => Ok(Self::OutputGivenPreviousInput { y: event.1, x_prev: v }),
            ("y", Some(("yprev", v))) => Ok(Self::OutputGivenPreviousOutput { y: event.1, y_prev: v }),
            ("y", None) => Ok(Self::OutputMarginal { y: event.1 }),
            ("x", Some(("x2", v))) => Ok(Self::InputGivenInputTwoBack { x: event.1, x_two_back: v }),
            _ => Err(unknown()),
        }
    }
}

/// One assignment of the variables that influence `(Y_{i-1}, Y_i)`.
#[derive(Debug, Clone, Copy)]
struct Window {
    x_two_back: u8,
    x_prev: u8,
    x: u8,
    y_prev: u8,
    y: u8,
}

fn bernoulli(q: f64, bit: u8) -> f64 {
    if bit == 1 {
        q
    } else {
        1.0 - q
    }
}

/// Enumerates all `2^7` assignments of `(X_{i-2}, X_{i-1}, X_i, Z_{i-1}, Z_i,
/// W_{i-1}, W_i)` with their probabilities.
fn windows(params: &ChannelParams, process: &InputProcess) -> impl Iterator<Item = (Window, f64)> {
    let params = *params;
    let process = *process;
    (0..128u8).map(move |code| {
        let bit = |k: u8| (code >> k) & 1;
        let (x2, x1, x0) = (bit(0), bit(1), bit(2));
        let (z1, z0, w1, w0) = (bit(3), bit(4), bit(5), bit(6));
        let weight = 0.5
            * process.transition(x2, x1)
            * process.transition(x1, x0)
            * bernoulli(params.p(), z1)
            * bernoulli(params.p(), z0)
            * bernoulli(params.alpha(), w1)
            * bernoulli(params.alpha(), w0);
        let window = Window {
            x_two_back: x2,
            x_prev: x1,
            x: x0,
            y_prev: (if z1 == 1 { x2 } else { x1 }) ^ w1,
            y: (if z0 == 1 { x1 } else { x0 }) ^ w0,
        };
        (window, weight)
    })
}

/// Exact probability of `pattern` by exhaustive enumeration of the window.
pub fn conditional_prob_oracle(
    params: &ChannelParams,
    process: &InputProcess,
    pattern: ConditioningPattern,
) -> Result<f64> {
    type Pred = Box<dyn Fn(&Window) -> bool>;
    let (event, given): (Pred, Pred) = match pattern {
        ConditioningPattern::OutputGivenPreviousInput { y, x_prev } => {
            check_bits(&[y, x_prev])?;
            (Box::new(move |w| w.y == y), Box::new(move |w| w.x_prev == x_prev))
        }
        ConditioningPattern::OutputGivenPreviousOutput { y, y_prev } => {
            check_bits(&[y, y_prev])?;
            (Box::new(move |w| w.y == y), Box::new(move |w| w.y_prev == y_prev))
        }
        ConditioningPattern::OutputMarginal { y } => {
            check_bits(&[y])?;
            (Box::new(move |w| w.y == y), Box::new(|_| true))
        }
        ConditioningPattern::InputGivenInputTwoBack { x, x_two_back } => {
            check_bits(&[x, x_two_back])?;
            (Box::new(move |w| w.x == x), Box::new(move |w| w.x_two_back == x_two_back))
        }
    };
    let (mut joint, mut marginal) = (CompensatedSum::default(), CompensatedSum::default());
    for (w, weight) in windows(params, process) {
        if given(&w) {
            marginal.add(weight);
            if event(&w) {
                joint.add(weight);
            }
        }
    }
    Ok(joint.value() / marginal.value())
}
