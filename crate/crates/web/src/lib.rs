//! WebAssembly bindings behind `www/index.html`.
//!
//! Three operations: bound curves against `p`, one simulated write of a short
//! block, and a Monte Carlo rate estimate next to the exact short-block rate.

use bpmr_channel::channel::simulate_realization;
use bpmr_channel::estimator::estimate_rate;
use bpmr_channel::exact::{exact_rate, ENUMERATION_LIMIT};
use bpmr_channel::seed::rng_from_seed;
use bpmr_channel::{BoundSet, ChannelParams, InputProcess};
use wasm_bindgen::prelude::*;

/// Longest block the page will simulate or estimate on; the browser runs
/// single-threaded.
pub const MAX_BLOCK: usize = 200_000;

fn process(beta: Option<f64>) -> Result<InputProcess, String> {
    match beta {
        Some(b) => InputProcess::markov1(b).map_err(|e| e.to_string()),
        None => Ok(InputProcess::Iud),
    }
}

fn params(p: f64, alpha: f64) -> Result<ChannelParams, String> {
    ChannelParams::new(p, alpha).map_err(|e| e.to_string())
}

/// Bounds sampled on an even grid of `p` over `[0, p_max]`.
#[wasm_bindgen]
#[derive(Debug, Clone, Default)]
pub struct Curves {
    p: Vec<f64>,
    l0: Vec<f64>,
    l1: Vec<f64>,
    u0: Vec<f64>,
    u1: Vec<f64>,
    gap: Vec<f64>,
}

#[wasm_bindgen]
impl Curves {
    #[wasm_bindgen(getter)]
    pub fn p(&self) -> Vec<f64> {
        self.p.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn l0(&self) -> Vec<f64> {
        self.l0.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn l1(&self) -> Vec<f64> {
        self.l1.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn u0(&self) -> Vec<f64> {
        self.u0.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn u1(&self) -> Vec<f64> {
        self.u1.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn gap(&self) -> Vec<f64> {
        self.gap.clone()
    }
}

pub fn curves(alpha: f64, beta: Option<f64>, p_max: f64, points: usize) -> Result<Curves, String> {
    if points < 2 {
        return Err("need at least two points".into());
    }
    let process = process(beta)?;
    params(p_max, alpha)?;
    let mut out = Curves::default();
    for k in 0..points {
        let p = p_max * k as f64 / (points - 1) as f64;
        let set = BoundSet::compute(&params(p, alpha)?, &process);
        out.p.push(p);
        out.l0.push(set.l0);
        out.l1.push(set.l1);
        out.u0.push(set.u0);
        out.u1.push(set.u1);
        out.gap.push(set.gap);
    }
    Ok(out)
}

/// One written block. `x` includes the boundary symbol at index 0, so
/// `x[i]` is the cell written before `y[i]`.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Block {
    x: Vec<u8>,
    z: Vec<u8>,
    w: Vec<u8>,
    y: Vec<u8>,
}

#[wasm_bindgen]
impl Block {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<u8> {
        self.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn z(&self) -> Vec<u8> {
        self.z.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn w(&self) -> Vec<u8> {
        self.w.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<u8> {
        self.y.clone()
    }
    /// Positions where the recorded bit differs from the intended one.
    pub fn errors(&self) -> usize {
        self.y.iter().zip(&self.x[1..]).filter(|(a, b)| a != b).count()
    }
}

pub fn write(p: f64, alpha: f64, beta: Option<f64>, n: usize, seed: u32) -> Result<Block, String> {
    if n == 0 || n > MAX_BLOCK {
        return Err(format!("block length must be between 1 and {MAX_BLOCK}"));
    }
    let r = simulate_realization(&params(p, alpha)?, &process(beta)?, n, &mut rng_from_seed(seed.into()))
        .map_err(|e| e.to_string())?;
    let mut x = vec![r.x.boundary()];
    x.extend_from_slice(r.x.bits());
    Ok(Block { x, z: r.z, w: r.w, y: r.y })
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub rate: f64,
    pub std_err: f64,
    /// Exact rate of a short block, for comparison.
    pub exact: f64,
    pub exact_n: usize,
    pub l1: f64,
    pub u1: f64,
}

pub fn estimate(
    p: f64,
    alpha: f64,
    beta: Option<f64>,
    n: usize,
    replicates: usize,
    exact_n: usize,
    seed: u32,
) -> Result<Estimate, String> {
    if n > MAX_BLOCK {
        return Err(format!("block length must be at most {MAX_BLOCK}"));
    }
    if exact_n > ENUMERATION_LIMIT {
        return Err(format!("exact block length must be at most {ENUMERATION_LIMIT}"));
    }
    let (params, process) = (params(p, alpha)?, process(beta)?);
    let est = estimate_rate(&params, &process, n, replicates, seed.into()).map_err(|e| e.to_string())?;
    let exact = exact_rate(&params, &process, exact_n).map_err(|e| e.to_string())?;
    let set = BoundSet::compute(&params, &process);
    Ok(Estimate {
        rate: est.rate,
        std_err: est.std_err,
        exact,
        exact_n,
        l1: set.l1,
        u1: set.u1,
    })
}

#[wasm_bindgen(js_name = boundCurves)]
pub fn bound_curves(alpha: f64, beta: Option<f64>, p_max: f64, points: usize) -> Result<Curves, JsError> {
    curves(alpha, beta, p_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = writeBlock)]
pub fn write_block(p: f64, alpha: f64, beta: Option<f64>, n: usize, seed: u32) -> Result<Block, JsError> {
    write(p, alpha, beta, n, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = estimateRate)]
pub fn estimate_info_rate(
    p: f64,
    alpha: f64,
    beta: Option<f64>,
    n: usize,
    replicates: usize,
    exact_n: usize,
    seed: u32,
) -> Result<Estimate, JsError> {
    estimate(p, alpha, beta, n, replicates, exact_n, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_are_ordered_and_pinched_at_zero() {
        let c = curves(0.1, None, 0.5, 26).unwrap();
        assert_eq!(c.p.len(), 26);
        assert!((c.l1[0] - c.u1[0]).abs() < 1e-12);
        for k in 0..26 {
            assert!(c.l0[k] <= c.l1[k] + 1e-12 && c.l1[k] <= c.u1[k] + 1e-12 && c.u1[k] <= c.u0[k] + 1e-12);
        }
    }

    #[test]
    fn markov_curves_accept_beta() {
        let c = curves(0.05, Some(0.3), 0.5, 5).unwrap();
        assert_eq!(c.l0, c.l1);
        assert!(curves(0.05, Some(1.3), 0.5, 5).is_err());
        assert!(curves(0.05, None, 0.5, 1).is_err());
    }

    #[test]
    fn written_block_follows_the_rule() {
        let b = write(0.3, 0.1, None, 500, 4).unwrap();
        assert_eq!(b.x.len(), 501);
        for i in 0..500 {
            let source = if b.z[i] == 1 { b.x[i] } else { b.x[i + 1] };
            assert_eq!(b.y[i], source ^ b.w[i]);
        }
        assert_eq!(b.errors(), b.y.iter().zip(&b.x[1..]).filter(|(a, c)| a != c).count());
        assert_eq!(write(0.3, 0.1, None, 500, 4).unwrap().y, b.y);
    }

    #[test]
    fn noiseless_block_without_shifts_is_exact() {
        let b = write(0.0, 0.0, None, 100, 1).unwrap();
        assert_eq!(b.errors(), 0);
        assert!(write(0.1, 0.1, None, 0, 1).is_err());
        assert!(write(0.1, 0.1, None, MAX_BLOCK + 1, 1).is_err());
    }

    #[test]
    fn estimate_lands_between_bounds() {
        let e = estimate(0.2, 0.1, None, 20_000, 8, 10, 3).unwrap();
        assert!(e.rate > e.l1 - 0.01 && e.rate < e.u1 + 0.01, "{e:?}");
        assert!(e.exact > 0.0 && e.exact < 1.0);
        assert!(estimate(0.2, 0.1, None, 100, 8, 30, 3).is_err());
    }
}
