//! Self-check suite behind `bpmr verify`.

use std::time::Instant;

use bpmr_channel::bounds::{
    binary_entropy, error_probability, gap_new, gap_old, l0_iud, l1_iud, l1_iud_argument, l1_m1, l1_m1_argument,
    u0_iud, u0_m1, u1_iud, u1_iud_dual_argument, u1_m1, u1_m1_argument,
};
use bpmr_channel::channel::simulate;
use bpmr_channel::estimator::estimate_rate;
use bpmr_channel::exact::{conditional_prob_oracle, exact_rate, output_entropy, ConditioningPattern};
use bpmr_channel::seed::rng_from_seed;
use bpmr_channel::{BoundSet, ChannelParams, InputProcess, Probability};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(quick: bool) -> Result<String, String>;

fn grid(points: usize, hi: f64) -> Vec<f64> {
    (0..points).map(|i| hi * i as f64 / (points - 1) as f64).collect()
}

fn cp(p: f64, a: f64) -> ChannelParams {
    ChannelParams::new(p, a).expect("grid values are probabilities")
}

fn prob(x: f64) -> Probability {
    Probability::new(x).expect("grid values are probabilities")
}

fn h(x: f64) -> f64 {
    binary_entropy(x).expect("argument is a probability")
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn noiseless_reductions(quick: bool) -> Result<String, String> {
    let g = grid(if quick { 11 } else { 51 }, 1.0);
    let mut worst: f64 = 0.0;
    for &p in &g {
        let params = cp(p, 0.0);
        let pb = 1.0 - p;
        worst = worst
            .max((l1_iud(&params) - (h((1.0 - p) / 2.0) - h(p) / 2.0)).abs())
            .max((u1_iud(&params) - (h((1.0 - p * pb) / 2.0) - h(p) / 2.0)).abs());
        for &b in &g {
            worst = worst
                .max((l1_m1(&params, prob(b)) - (h(pb * b) - b * h(p))).abs())
                .max((u0_m1(&params, prob(b)) - (1.0 - b * h(p))).abs())
                .max((u1_m1(&params, prob(b)) - (h(1.0 - b + 2.0 * b * b * p * pb) - b * h(p))).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn oracle_agreement(quick: bool) -> Result<String, String> {
    let g = grid(if quick { 7 } else { 31 }, 1.0);
    let betas = grid(if quick { 3 } else { 11 }, 1.0);
    let mut worst: f64 = 0.0;
    for &p in &g {
        for &a in &g {
            let params = cp(p, a);
            let q = |process: &InputProcess, pattern: ConditioningPattern| {
                conditional_prob_oracle(&params, process, pattern).expect("valid pattern")
            };
            let iud = InputProcess::Iud;
            worst = worst
                .max((q(&iud, ConditioningPattern::OutputGivenPreviousInput { y: 0, x_prev: 0 }) - l1_iud_argument(&params)).abs())
                .max((q(&iud, ConditioningPattern::OutputGivenPreviousOutput { y: 1, y_prev: 1 }) - u1_iud_dual_argument(&params)).abs());
            for &b in &betas {
                let beta = prob(b);
                let m1 = InputProcess::Markov1 { beta };
                worst = worst
                    .max((q(&m1, ConditioningPattern::OutputGivenPreviousInput { y: 1, x_prev: 0 }) - l1_m1_argument(&params, beta)).abs())
                    .max((q(&m1, ConditioningPattern::OutputGivenPreviousOutput { y: 0, y_prev: 0 }) - u1_m1_argument(&params, beta)).abs())
                    .max((q(&m1, ConditioningPattern::OutputMarginal { y: 0 }) - 0.5).abs())
                    .max((q(&m1, ConditioningPattern::InputGivenInputTwoBack { x: 0, x_two_back: 0 }) - ((1.0 - b).powi(2) + b * b)).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn pinch_and_annihilation(_quick: bool) -> Result<String, String> {
    for a in grid(101, 1.0) {
        let params = cp(0.0, a);
        let bsc = 1.0 - h(a);
        ensure((l1_iud(&params) - bsc).abs() <= 1e-12 && (u1_iud(&params) - bsc).abs() <= 1e-12, || {
            format!("p=0 alpha={a}")
        })?;
    }
    for p in grid(101, 1.0) {
        let params = cp(p, 0.5);
        ensure(
            l0_iud(&params).abs() <= 1e-12 && l1_iud(&params).abs() <= 1e-12 && u1_iud(&params).abs() <= 1e-12,
            || format!("alpha=0.5 p={p}"),
        )?;
    }
    Ok("p=0 and alpha=0.5 edges".into())
}

fn single_symbol_collapse(_quick: bool) -> Result<String, String> {
    for p in grid(21, 1.0) {
        for a in grid(21, 1.0) {
            let params = cp(p, a);
            let r = exact_rate(&params, &InputProcess::Iud, 1).map_err(|e| e.to_string())?;
            ensure((r - l0_iud(&params)).abs() <= 1e-12, || format!("p={p} alpha={a}: {r} vs {}", l0_iud(&params)))?;
        }
    }
    Ok("21x21 grid".into())
}

fn bound_ordering(_quick: bool) -> Result<String, String> {
    for p in grid(51, 0.5) {
        for a in grid(51, 0.5) {
            let set = BoundSet::compute(&cp(p, a), &InputProcess::Iud);
            ensure(set.is_ordered(), || format!("p={p} alpha={a}: {set:?}"))?;
        }
    }
    Ok("l0 <= l1 <= u1 <= u0 on 51x51".into())
}

fn upper_bound_monotone(_quick: bool) -> Result<String, String> {
    for p in [0.1, 0.2, 0.3, 0.4] {
        let mut prev = f64::INFINITY;
        for k in 0..=25 {
            let v = u1_iud(&cp(p, k as f64 * 0.01));
            ensure(v <= prev, || format!("p={p} alpha={}", k as f64 * 0.01))?;
            prev = v;
        }
    }
    Ok("u1 non-increasing in alpha".into())
}

fn gap_comparison(_quick: bool) -> Result<String, String> {
    let mut offending = Vec::new();
    for a in [0.05, 0.1, 0.15, 0.2] {
        for p in grid(51, 0.5) {
            let (new, old) = (gap_new(&cp(p, a)), gap_old(prob(p)));
            if new > old {
                offending.push(format!("(p={p:.2}, alpha={a}: {new:.2e} > {old:.2e})"));
            }
        }
    }
    ensure(offending.is_empty(), || {
        format!("{} points, first {}", offending.len(), offending.iter().take(3).cloned().collect::<Vec<_>>().join(" "))
    })?;
    Ok("gap_new <= gap_old".into())
}

fn finite_block_rates(quick: bool) -> Result<String, String> {
    let params = cp(0.2, 0.1);
    let sizes: &[usize] = if quick { &[8] } else { &[8, 10, 12] };
    for &n in sizes {
        let r = exact_rate(&params, &InputProcess::Iud, n).map_err(|e| e.to_string())?;
        ensure(r <= u0_iud(&params) + 1e-9 && r >= l1_iud(&params) - 2.0 / n as f64, || format!("n={n}: {r}"))?;
    }
    Ok("l1 - 2/n <= rate <= u0".into())
}

fn short_block_monte_carlo(quick: bool) -> Result<String, String> {
    let samples = if quick { 2_000 } else { 10_000 };
    for &(p, a) in &[(0.1, 0.05), (0.2, 0.1), (0.3, 0.2)] {
        let params = cp(p, a);
        let est = estimate_rate(&params, &InputProcess::Iud, 10, samples, 1).map_err(|e| e.to_string())?;
        let exact = output_entropy(&params, &InputProcess::Iud, 10).map_err(|e| e.to_string())? / 10.0;
        ensure((est.entropy_rate - exact).abs() <= 3.0 * est.std_err, || {
            format!("p={p} alpha={a}: {} vs {exact}", est.entropy_rate)
        })?;
    }
    Ok(format!("n=10, {samples} samples"))
}

fn sandwich(quick: bool) -> Result<String, String> {
    let (n, reps) = if quick { (10_000, 10) } else { (100_000, 30) };
    let params = cp(0.2, 0.1);
    let est = estimate_rate(&params, &InputProcess::Iud, n, reps, 1).map_err(|e| e.to_string())?;
    let slack = 3.0 * est.std_err + 0.005;
    ensure(est.rate >= l1_iud(&params) - slack && est.rate <= u1_iud(&params) + slack, || {
        format!("{:.5} outside [{:.5}, {:.5}]", est.rate, l1_iud(&params), u1_iud(&params))
    })?;
    Ok(format!("rate {:.5} +- {:.5}", est.rate, est.std_err))
}

fn error_rate(quick: bool) -> Result<String, String> {
    let n = if quick { 100_000 } else { 1_000_000 };
    let params = cp(0.2, 0.1);
    let (x, y) = simulate(&params, &InputProcess::Iud, n, &mut rng_from_seed(1)).map_err(|e| e.to_string())?;
    let freq = x.bits().iter().zip(&y).filter(|(a, b)| a != b).count() as f64 / n as f64;
    let q = error_probability(&params);
    let sigma = (q * (1.0 - q) / n as f64).sqrt();
    ensure((freq - q).abs() <= 3.0 * sigma, || format!("{freq} vs {q}"))?;
    Ok(format!("P(Y != X) = {freq:.5}, expected {q:.5}"))
}

const CHECKS: [(&str, Check); 11] = [
    ("noiseless reductions", noiseless_reductions),
    ("oracle agreement", oracle_agreement),
    ("pinch and annihilation", pinch_and_annihilation),
    ("single-symbol collapse", single_symbol_collapse),
    ("bound ordering", bound_ordering),
    ("u1 decreasing in alpha", upper_bound_monotone),
    ("gap comparison", gap_comparison),
    ("finite-block rates", finite_block_rates),
    ("short-block Monte Carlo", short_block_monte_carlo),
    ("sandwich at scale", sandwich),
    ("error probability", error_rate),
];

pub fn run_checks(quick: bool) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let start = Instant::now();
            let (passed, detail) = match check(quick) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome {
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

pub fn format_table(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{}  {:width$}  {:>7.2}s  {}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.seconds,
            o.detail
        ));
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", outcomes.len()));
    out
}
