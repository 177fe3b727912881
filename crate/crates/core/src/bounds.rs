//! Closed-form bounds on the symmetric information rate (i.u.d. input) and
//! the Markov-1 rate of the write channel.
//!
//! Every bound has the shape `H(Y-term) - H(Y | X)`: the conditional part is
//! exact, `(1 - P(flip)) h2(alpha) + P(flip) h2(p + alpha - 2 alpha p)` with
//! `P(flip) = 1/2` for i.u.d. input and `beta` for the Markov-1 input, and the
//! bounds differ only in how the output entropy term is estimated.

use crate::channel::{ChannelParams, InputKind, InputProcess, Probability};
use crate::error::Result;

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    Probability::named("x", x).map(|x| h2(x.value()))
}

/// Binary entropy for arguments already known to lie in `[0, 1]`; rounding
/// overshoot is clamped.
#[inline]
pub(crate) fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// `P(Y_i != X_i) = p/2 + (1 - p) alpha` under i.u.d. input.
pub fn error_probability(params: &ChannelParams) -> f64 {
    params.p() / 2.0 + params.p_bar() * params.alpha()
}

/// `H(Y_i | X_{i-1}, X_i)` in bits per symbol.
pub fn conditional_entropy(params: &ChannelParams, process: &InputProcess) -> f64 {
    let flip = process.flip_probability();
    (1.0 - flip) * h2(params.match_flip()) + flip * h2(params.mismatch_flip())
}

/// Treats the channel as a BSC with crossover [`error_probability`].
pub fn l0_iud(params: &ChannelParams) -> f64 {
    1.0 - h2(error_probability(params))
}

/// `P(Y_i = 0 | X_{i-1} = 0)` under i.u.d. input.
pub fn l1_iud_argument(params: &ChannelParams) -> f64 {
    (1.0 + params.p() - 2.0 * params.alpha() * params.p()) / 2.0
}

pub fn l1_iud(params: &ChannelParams) -> f64 {
    let arg = (1.0 - params.p() + 2.0 * params.alpha() * params.p()) / 2.0;
    debug_assert!((arg + l1_iud_argument(params) - 1.0).abs() < 1e-12);
    h2(arg) - conditional_entropy(params, &InputProcess::Iud)
}

pub fn u0_iud(params: &ChannelParams) -> f64 {
    1.0 - conditional_entropy(params, &InputProcess::Iud)
}

/// The `h2` argument of the tighter i.u.d. upper bound.
pub fn u1_iud_argument(params: &ChannelParams) -> f64 {
    let pq = params.p() * params.p_bar();
    let a = params.alpha();
    ((1.0 - pq) * (1.0 + 2.0 * a * (a - 1.0)) + (1.0 + pq) * (2.0 * a * (1.0 - a))) / 2.0
}

/// `P(Y_i = 1 | Y_{i-1} = 1)` under i.u.d. input; equals `1 - u1_iud_argument`.
pub fn u1_iud_dual_argument(params: &ChannelParams) -> f64 {
    let pq = params.p() * params.p_bar();
    let a = params.alpha();
    ((1.0 + pq) * (1.0 + 2.0 * a * (a - 1.0)) + (1.0 - pq) * (2.0 * a * (1.0 - a))) / 2.0
}

pub fn u1_iud(params: &ChannelParams) -> f64 {
    let arg = u1_iud_argument(params);
    debug_assert!((arg + u1_iud_dual_argument(params) - 1.0).abs() < 1e-12);
    h2(arg) - conditional_entropy(params, &InputProcess::Iud)
}

/// `P(Y_i = 1 | X_{i-1} = 0)` under Markov-1 input.
pub fn l1_m1_argument(params: &ChannelParams, beta: Probability) -> f64 {
    let (a, ab) = (params.alpha(), params.alpha_bar());
    let (b, bb) = (beta.value(), beta.complement());
    params.p_bar() * (ab * b + a * bb) + a * params.p()
}

pub fn l1_m1(params: &ChannelParams, beta: Probability) -> f64 {
    h2(l1_m1_argument(params, beta)) - conditional_entropy(params, &InputProcess::Markov1 { beta })
}

pub fn u0_m1(params: &ChannelParams, beta: Probability) -> f64 {
    1.0 - conditional_entropy(params, &InputProcess::Markov1 { beta })
}

/// `P(Y_i = 0 | Y_{i-1} = 0)` under Markov-1 input.
pub fn u1_m1_argument(params: &ChannelParams, beta: Probability) -> f64 {
    let (p, pb) = (params.p(), params.p_bar());
    let (a, ab) = (params.alpha(), params.alpha_bar());
    let (b, bb) = (beta.value(), beta.complement());
    (bb + 2.0 * b * b * p * pb) * (ab * ab + a * a)
        + 2.0 * a * ab * b * (p * p + pb * pb + 2.0 * bb * p * pb)
}

pub fn u1_m1(params: &ChannelParams, beta: Probability) -> f64 {
    h2(u1_m1_argument(params, beta)) - conditional_entropy(params, &InputProcess::Markov1 { beta })
}

/// `u1_iud - l1_iud`.
pub fn gap_new(params: &ChannelParams) -> f64 {
    u1_iud(params) - l1_iud(params)
}

/// Gap of the noiseless (`alpha = 0`) model.
pub fn gap_old(p: Probability) -> f64 {
    let (p, pb) = (p.value(), p.complement());
    h2((1.0 - p * pb) / 2.0) - h2((1.0 - p) / 2.0)
}

/// All bounds at one parameter point for one input process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    pub l0: f64,
    pub l1: f64,
    pub u0: f64,
    pub u1: f64,
    /// `u1 - l1`.
    pub gap: f64,
    pub input_kind: InputKind,
    /// Set when no BSC-style `l0` exists for the input process and `l0`
    /// repeats `l1` (Markov-1 input).
    pub l0_from_l1: bool,
}

impl BoundSet {
    pub fn compute(params: &ChannelParams, process: &InputProcess) -> Self {
        match *process {
            InputProcess::Iud => {
                let (l1, u1) = (l1_iud(params), u1_iud(params));
                BoundSet {
                    l0: l0_iud(params),
                    l1,
                    u0: u0_iud(params),
                    u1,
                    gap: u1 - l1,
                    input_kind: InputKind::Iud,
                    l0_from_l1: false,
                }
            }
            InputProcess::Markov1 { beta } => {
                let (l1, u1) = (l1_m1(params, beta), u1_m1(params, beta));
                BoundSet {
                    l0: l1,
                    l1,
                    u0: u0_m1(params, beta),
                    u1,
                    gap: u1 - l1,
                    input_kind: InputKind::Markov1,
                    l0_from_l1: true,
                }
            }
        }
    }

    /// The bound set evaluated from raw parameter values.
    pub fn evaluate(p: f64, alpha: f64, beta: Option<f64>) -> Result<Self> {
        let params = ChannelParams::new(p, alpha)?;
        let process = match beta {
            Some(b) => InputProcess::markov1(b)?,
            None => InputProcess::Iud,
        };
        Ok(Self::compute(&params, &process))
    }

    pub fn is_ordered(&self) -> bool {
        self.l0 <= self.l1 && self.l1 <= self.u1 && self.u1 <= self.u0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(p: f64, a: f64) -> ChannelParams {
        ChannelParams::new(p, a).unwrap()
    }

    fn beta(b: f64) -> Probability {
        Probability::new(b).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // 2 - (3/4) log2 3
        assert!(close(binary_entropy(0.25).unwrap(), 0.811_278_124_459_132_9, 1e-15));
        assert!(binary_entropy(1.01).is_err());
        assert!(binary_entropy(-1e-9).is_err());
    }

    #[test]
    fn error_probability_examples() {
        assert!(close(error_probability(&cp(0.0, 0.1)), 0.1, 1e-15));
        assert!(close(error_probability(&cp(0.2, 0.0)), 0.1, 1e-15));
        assert!(close(error_probability(&cp(0.2, 0.1)), 0.18, 1e-15));
    }

    #[test]
    fn l0_examples() {
        assert_eq!(l0_iud(&cp(0.0, 0.0)), 1.0);
        for p in [0.0, 0.3, 1.0] {
            assert!(close(l0_iud(&cp(p, 0.5)), 0.0, 1e-15));
        }
        assert!(close(l0_iud(&cp(0.2, 0.0)), 0.531_004_406_410_718_8, 1e-12));
    }

    #[test]
    fn l1_examples() {
        for a in [0.0, 0.05, 0.3] {
            assert!(close(l1_iud(&cp(0.0, a)), 1.0 - h2(a), 1e-15));
        }
        let v = l1_iud(&cp(0.2, 0.0));
        assert!(close(v, h2(0.4) - h2(0.2) / 2.0, 1e-15));
        assert!(close(v, 0.609_986_547_010_987_5, 1e-12));
        for p in [0.0, 0.4, 1.0] {
            assert!(close(l1_iud(&cp(p, 0.5)), 0.0, 1e-15));
        }
    }

    #[test]
    fn u0_u1_examples() {
        assert_eq!(u0_iud(&cp(0.0, 0.0)), 1.0);
        assert!(close(u0_iud(&cp(0.3, 0.0)), 1.0 - h2(0.3) / 2.0, 1e-15));
        assert!(close(u0_iud(&cp(0.2, 0.1)), 0.352_129_016_959_050_4, 1e-12));

        for a in [0.0, 0.1, 0.4] {
            assert!(close(u1_iud(&cp(0.0, a)), 1.0 - h2(a), 1e-15));
        }
        let v = u1_iud(&cp(0.2, 0.0));
        assert!(close(v, h2(0.42) - h2(0.2) / 2.0, 1e-15));
        assert!(close(v, 0.620_489_847_589_972_4, 1e-12));
        for p in [0.0, 0.6, 1.0] {
            assert!(close(u1_iud(&cp(p, 0.5)), 0.0, 1e-15));
        }
    }

    #[test]
    fn markov_examples() {
        let params = cp(0.3, 0.0);
        assert!(close(l1_m1(&params, beta(0.2)), h2(0.7 * 0.2) - 0.2 * h2(0.3), 1e-15));
        assert!(close(u0_m1(&params, beta(0.2)), 1.0 - 0.2 * h2(0.3), 1e-15));
        let b0 = 0.8 + 2.0 * 0.04 * 0.21;
        assert!(close(u1_m1(&params, beta(0.2)), h2(b0) - 0.2 * h2(0.3), 1e-15));

        let params = cp(0.0, 0.15);
        let v = l1_m1(&params, beta(0.3));
        assert!(close(v, h2(0.3 + 0.15 - 2.0 * 0.15 * 0.3) - h2(0.15), 1e-15));
        assert_eq!(u0_m1(&cp(0.0, 0.0), beta(0.7)), 1.0);

        for &(p, a) in &[(0.2, 0.1), (0.45, 0.3), (0.0, 0.0), (1.0, 0.05)] {
            let params = cp(p, a);
            assert!(close(l1_m1(&params, Probability::HALF), l1_iud(&params), 1e-14));
            assert!(close(u0_m1(&params, Probability::HALF), u0_iud(&params), 1e-14));
            assert!(close(u1_m1(&params, Probability::HALF), u1_iud(&params), 1e-14));
        }
    }

    #[test]
    fn gap_examples() {
        for a in [0.0, 0.2, 0.5] {
            assert!(close(gap_new(&cp(0.0, a)), 0.0, 1e-15));
        }
        let old = gap_old(beta(0.2));
        assert!(close(old, h2(0.42) - h2(0.4), 1e-15));
        assert!(close(old, 0.010_503_300_578_984_91, 1e-12));
        assert!(close(gap_new(&cp(0.2, 0.0)), old, 1e-15));
        assert_eq!(gap_old(Probability::ZERO), 0.0);
        assert_eq!(gap_old(Probability::ONE), 1.0);
        assert!(gap_new(&cp(0.3, 0.1)) < gap_old(beta(0.3)));
    }

    #[test]
    fn bound_set_aggregation() {
        let set = BoundSet::evaluate(0.0, 0.0, None).unwrap();
        assert_eq!((set.l0, set.l1, set.u0, set.u1, set.gap), (1.0, 1.0, 1.0, 1.0, 0.0));

        let set = BoundSet::evaluate(0.2, 0.1, None).unwrap();
        assert!(set.is_ordered(), "{set:?}");
        assert_eq!(set.gap, set.u1 - set.l1);

        let set = BoundSet::evaluate(0.2, 0.0, Some(0.3)).unwrap();
        assert!(set.l0_from_l1);
        assert!(close(set.l1, h2(0.8 * 0.3) - 0.3 * h2(0.2), 1e-15));
        assert!(close(set.u1, h2(0.7 + 2.0 * 0.09 * 0.16) - 0.3 * h2(0.2), 1e-15));

        assert!(BoundSet::evaluate(0.2, 0.1, Some(2.0)).is_err());
    }
}
