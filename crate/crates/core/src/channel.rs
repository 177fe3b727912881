//! Input processes, channel parameters and the rule of writing.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const HALF: Probability = Probability(0.5);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        Self::named("probability", value)
    }

    /// Like [`Probability::new`], but the error names the offending parameter.
    pub fn named(name: &'static str, value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::OutOfRange { name, value })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// State parameter `p = P(Z_i = 1)` and noise parameter `alpha = P(W_i = 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    p: Probability,
    alpha: Probability,
}

impl ChannelParams {
    pub fn new(p: f64, alpha: f64) -> Result<Self> {
        Ok(ChannelParams {
            p: Probability::named("p", p)?,
            alpha: Probability::named("alpha", alpha)?,
        })
    }

    pub fn from_probabilities(p: Probability, alpha: Probability) -> Self {
        ChannelParams { p, alpha }
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p.value()
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha.value()
    }

    #[inline]
    pub fn p_bar(&self) -> f64 {
        self.p.complement()
    }

    #[inline]
    pub fn alpha_bar(&self) -> f64 {
        self.alpha.complement()
    }

    /// Same parameters with the write noise switched off.
    pub fn noiseless(&self) -> Self {
        ChannelParams {
            p: self.p,
            alpha: Probability::ZERO,
        }
    }

    /// `P(Y_i != X_i | X_{i-1} != X_i) = p + alpha - 2 alpha p`.
    #[inline]
    pub fn mismatch_flip(&self) -> f64 {
        let (p, a) = (self.p(), self.alpha());
        p + a - 2.0 * a * p
    }

    /// `P(Y_i != X_i | X_{i-1} == X_i) = alpha`.
    #[inline]
    pub fn match_flip(&self) -> f64 {
        self.alpha()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputKind {
    Iud,
    Markov1,
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputKind::Iud => "iud",
            InputKind::Markov1 => "markov1",
        })
    }
}

impl FromStr for InputKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "iud" => Ok(InputKind::Iud),
            "markov1" | "m1" => Ok(InputKind::Markov1),
            other => Err(format!("unknown input process {other:?} (expected iud or markov1)")),
        }
    }
}

/// Law of the channel input.
///
/// `Markov1` is the symmetric first-order chain that flips with probability
/// `beta`; its stationary law is uniform, so `Markov1 { beta: 0.5 }` and `Iud`
/// are the same process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputProcess {
    Iud,
    Markov1 { beta: Probability },
}

impl InputProcess {
    pub fn markov1(beta: f64) -> Result<Self> {
        Ok(InputProcess::Markov1 {
            beta: Probability::named("beta", beta)?,
        })
    }

    pub fn kind(&self) -> InputKind {
        match self {
            InputProcess::Iud => InputKind::Iud,
            InputProcess::Markov1 { .. } => InputKind::Markov1,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self {
            InputProcess::Iud => None,
            InputProcess::Markov1 { beta } => Some(beta.value()),
        }
    }

    /// Probability that consecutive inputs differ.
    #[inline]
    pub fn flip_probability(&self) -> f64 {
        match self {
            InputProcess::Iud => 0.5,
            InputProcess::Markov1 { beta } => beta.value(),
        }
    }

    /// `P(X_i = cur | X_{i-1} = prev)`.
    #[inline]
    pub fn transition(&self, prev: u8, cur: u8) -> f64 {
        let flip = self.flip_probability();
        if prev == cur {
            1.0 - flip
        } else {
            flip
        }
    }
}

impl fmt::Display for InputProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputProcess::Iud => f.write_str("iud"),
            InputProcess::Markov1 { beta } => write!(f, "markov1(beta={beta})"),
        }
    }
}

/// An input block `X_1..X_n` together with the boundary bit `X_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinarySequence {
    boundary: u8,
    bits: Vec<u8>,
}

impl BinarySequence {
    pub fn new(boundary: u8, bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyBlock);
        }
        check_bits(std::slice::from_ref(&boundary))?;
        check_bits(&bits)?;
        Ok(BinarySequence { boundary, bits })
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(boundary: u8, bits: &str) -> Result<Self> {
        Self::new(boundary, parse_bits(bits)?)
    }

    #[inline]
    pub fn boundary(&self) -> u8 {
        self.boundary
    }

    #[inline]
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `X_{i-1}` for `i = 1..=n`, i.e. the block shifted right by one with the
    /// boundary bit in front.
    pub fn previous(&self) -> impl Iterator<Item = u8> + '_ {
        std::iter::once(self.boundary).chain(self.bits[..self.bits.len() - 1].iter().copied())
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|", self.boundary)?;
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.bytes()
        .map(|c| match c {
            b'0' => Ok(0),
            b'1' => Ok(1),
            other => Err(Error::InvalidBit(other)),
        })
        .collect()
}

pub(crate) fn check_bits(bits: &[u8]) -> Result<()> {
    match bits.iter().find(|&&b| b > 1) {
        Some(&b) => Err(Error::InvalidBit(b)),
        None => Ok(()),
    }
}

/// Draws `X_0..X_n`. The boundary bit is uniform (the stationary law of both
/// processes) and, for `Markov1`, `X_1` transitions from it.
pub fn sample_input<R: Rng + ?Sized>(
    process: &InputProcess,
    n: usize,
    rng: &mut R,
) -> Result<BinarySequence> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    let boundary = rng.gen_bool(0.5) as u8;
    let mut bits = Vec::with_capacity(n);
    match process {
        InputProcess::Iud => bits.extend((0..n).map(|_| rng.gen_bool(0.5) as u8)),
        InputProcess::Markov1 { beta } => {
            let beta = beta.value();
            let mut prev = boundary;
            for _ in 0..n {
                prev ^= rng.gen_bool(beta) as u8;
                bits.push(prev);
            }
        }
    }
    Ok(BinarySequence { boundary, bits })
}

/// `n` i.i.d. Bernoulli(`q`) bits.
pub fn sample_bernoulli<R: Rng + ?Sized>(q: Probability, n: usize, rng: &mut R) -> Vec<u8> {
    let q = q.value();
    (0..n).map(|_| rng.gen_bool(q) as u8).collect()
}

/// `P(Y_i = 1 | X_{i-1} = x_prev, X_i = x_cur)`, with state and noise
/// marginalized out.
#[inline]
pub fn channel_law(params: &ChannelParams, x_prev: u8, x_cur: u8) -> f64 {
    let flip = if x_prev == x_cur {
        params.match_flip()
    } else {
        params.mismatch_flip()
    };
    if x_cur == 1 {
        1.0 - flip
    } else {
        flip
    }
}

/// `P(Y_i = y | X_{i-1} = x_prev, X_i = x_cur)`.
#[inline]
pub fn output_likelihood(params: &ChannelParams, x_prev: u8, x_cur: u8, y: u8) -> f64 {
    let one = channel_law(params, x_prev, x_cur);
    if y == 1 {
        one
    } else {
        1.0 - one
    }
}

/// Applies `y_i = x_{i - z_i} ^ w_i`, with `x_0` the boundary bit of `x`.
pub fn write_block(x: &BinarySequence, z: &[u8], w: &[u8]) -> Result<Vec<u8>> {
    let n = x.len();
    for (name, seq) in [("z", z), ("w", w)] {
        if seq.len() != n {
            return Err(Error::LengthMismatch {
                left: "x",
                left_len: n,
                right: name,
                right_len: seq.len(),
            });
        }
        check_bits(seq)?;
    }
    Ok(x
        .previous()
        .zip(x.bits())
        .zip(z.iter().zip(w))
        .map(|((prev, &cur), (&zi, &wi))| if zi == 1 { prev ^ wi } else { cur ^ wi })
        .collect())
}

/// One full draw of input, state, noise and output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub x: BinarySequence,
    pub z: Vec<u8>,
    pub w: Vec<u8>,
    pub y: Vec<u8>,
}

pub fn simulate_realization<R: Rng + ?Sized>(
    params: &ChannelParams,
    process: &InputProcess,
    n: usize,
    rng: &mut R,
) -> Result<Realization> {
    let x = sample_input(process, n, rng)?;
    let z = sample_bernoulli(params.p, n, rng);
    let w = sample_bernoulli(params.alpha, n, rng);
    let y = write_block(&x, &z, &w)?;
    Ok(Realization { x, z, w, y })
}

/// Jointly samples an input block and the recorded output.
pub fn simulate<R: Rng + ?Sized>(
    params: &ChannelParams,
    process: &InputProcess,
    n: usize,
    rng: &mut R,
) -> Result<(BinarySequence, Vec<u8>)> {
    let Realization { x, y, .. } = simulate_realization(params, process, n, rng)?;
    Ok((x, y))
}
