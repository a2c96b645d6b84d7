//! Total variation, stability and incremental-form checks, error norms.

use crate::error::{Error, Result};
use crate::grid::{ghost, Field, SupportWindow};
use crate::problems::SingularPointSet;

/// Relative slack used when comparing quantities that are equal in exact arithmetic.
pub const ROUNDING_TOL: f64 = 1e-12;

/// `Σ |v_j − v_{j+1}|` over the whole field.
pub fn total_variation(field: &Field) -> f64 {
    total_variation_of(field.values())
}

/// Total variation restricted to an index window.
pub fn total_variation_window(field: &Field, window: SupportWindow) -> f64 {
    total_variation_of(&field.values()[window.range()])
}

pub fn total_variation_of(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Total variation along a run against the envelope `TV(w⁰) + n·(b−a)·δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TVSeries {
    pub tv: Vec<f64>,
    pub bound: Vec<f64>,
    /// Steps `n ≥ 1` with `TV(w^n) > TV(w^{n−1}) + (b−a)·δ`.
    pub violations: Vec<usize>,
}

impl TVSeries {
    /// Whether the total variation never increases beyond rounding.
    pub fn is_nonincreasing(&self) -> bool {
        self.tv.windows(2).all(|w| w[1] <= w[0] + ROUNDING_TOL * (1.0 + w[0]))
    }
}

/// Checks the per-step bound `TV(w^{n+1}) ≤ TV(w^n) + width·δ`.
pub fn tv_monitor(tv: &[f64], width: f64, delta: f64) -> TVSeries {
    let growth = width * delta;
    let bound = (0..tv.len()).map(|n| tv[0] + n as f64 * growth).collect();
    let violations = (1..tv.len())
        .filter(|&n| tv[n] > tv[n - 1] + growth + ROUNDING_TOL * (1.0 + tv[n - 1]))
        .collect();
    TVSeries { tv: tv.to_vec(), bound, violations }
}

/// Which one-sided difference a step is written against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Upwind {
    /// `ν ≥ 0`: `u^{n+1}_j = u_j − C_{j−1/2}(u_j − u_{j−1})`.
    Left,
    /// `ν < 0`: `u^{n+1}_j = u_j + D_{j+1/2}(u_{j+1} − u_j)`.
    Right,
}

/// Harten coefficients recovered from one step.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementalCoefficients {
    /// `C_{j−1/2}` per index; `None` where the difference vanishes.
    pub c: Vec<Option<f64>>,
    /// `D_{j+1/2}` per index; `None` where the difference vanishes.
    pub d: Vec<Option<f64>>,
    pub residual: f64,
    /// Residual within rounding and every coefficient in `[0, 1]`.
    pub representable: bool,
}

/// Solves the one-sided incremental form of `step` applied to `field`.
///
/// A step that moves a value across a flat interface cannot be written in
/// this form; that is reported through `representable`, not as an error.
pub fn extract_incremental<S>(step: S, field: &Field, upwind: Upwind) -> Result<IncrementalCoefficients>
where
    S: Fn(&Field) -> Result<Field>,
{
    let out = step(field)?;
    let (u, v) = (field.values(), out.values());
    let scale = field.max_abs().max(1.0);
    let mut c = vec![None; u.len()];
    let mut d = vec![None; u.len()];
    let mut residual: f64 = 0.0;
    for j in 0..u.len() {
        let jj = j as isize;
        let (delta, slot, sign) = match upwind {
            Upwind::Left => (u[j] - ghost(u, jj - 1), &mut c[j], -1.0),
            Upwind::Right => (ghost(u, jj + 1) - u[j], &mut d[j], 1.0),
        };
        if delta == 0.0 {
            residual = residual.max((v[j] - u[j]).abs());
        } else {
            let coef = sign * (v[j] - u[j]) / delta;
            residual = residual.max((u[j] + sign * coef * delta - v[j]).abs());
            *slot = Some(coef);
        }
    }
    let tol = ROUNDING_TOL * scale;
    let in_range = |x: &Option<f64>| x.is_none_or(|x| (-tol..=1.0 + tol).contains(&x));
    let representable = residual <= tol && c.iter().all(in_range) && d.iter().all(in_range);
    Ok(IncrementalCoefficients { c, d, residual, representable })
}

/// A node whose new value leaves its input neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityViolation {
    pub j: usize,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// First index where `output[j]` leaves `[min, max]` of its upwind pair
/// (`j−1, j` for `ν_j ≥ 0`, `j, j+1` otherwise).
pub fn stability_witness(input: &[f64], output: &[f64], nus: &[f64]) -> Option<StabilityViolation> {
    stability_witness_with(output, |j| {
        let jj = j as isize;
        let other = if nus[j] >= 0.0 { ghost(input, jj - 1) } else { ghost(input, jj + 1) };
        (input[j].min(other), input[j].max(other))
    })
}

/// Same check with a caller-supplied neighbourhood `j ↦ (lo, hi)`.
pub fn stability_witness_with<N>(output: &[f64], neighborhood: N) -> Option<StabilityViolation>
where
    N: Fn(usize) -> (f64, f64),
{
    output.iter().enumerate().find_map(|(j, &value)| {
        let (lo, hi) = neighborhood(j);
        let tol = ROUNDING_TOL * (1.0 + lo.abs().max(hi.abs()));
        (value < lo - tol || value > hi + tol).then_some(StabilityViolation { j, value, lo, hi })
    })
}

/// Discrete error norms of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    /// Max error outside the balls around singular points.
    pub linf_reg: f64,
    pub dx: f64,
    pub dt: f64,
}

impl ErrorReport {
    /// Grid-weighted norms of `numeric − exact` sampled at `points`.
    pub fn from_samples(
        points: &[f64],
        numeric: &[f64],
        exact: &[f64],
        dx: f64,
        dt: f64,
        sing: &SingularPointSet,
    ) -> Result<Self> {
        if numeric.len() != points.len() || exact.len() != points.len() {
            return Err(Error::LengthMismatch { expected: points.len(), got: numeric.len().min(exact.len()) });
        }
        let (mut l1, mut l2, mut linf, mut linf_reg) = (0.0, 0.0, 0.0f64, 0.0f64);
        for ((&x, &u), &e) in points.iter().zip(numeric).zip(exact) {
            if !e.is_finite() {
                return Err(Error::OracleUndefined { x });
            }
            let err = (u - e).abs();
            l1 += err;
            l2 += err * err;
            linf = linf.max(err);
            if !sing.excludes(x) {
                linf_reg = linf_reg.max(err);
            }
        }
        Ok(Self { l1: dx * l1, l2: (dx * l2).sqrt(), linf, linf_reg, dx, dt })
    }
}

/// Errors of `numeric` against `oracle(x, t)` at the field's own points.
pub fn error_norms<O>(numeric: &Field, oracle: O, t: f64, dt: f64, sing: &SingularPointSet) -> Result<ErrorReport>
where
    O: Fn(f64, f64) -> f64,
{
    let points = numeric.points();
    let exact: Vec<f64> = points.iter().map(|&x| oracle(x, t)).collect();
    ErrorReport::from_samples(&points, numeric.values(), &exact, numeric.grid().dx(), dt, sing)
}

/// Pairwise observed orders `ln(e_k/e_{k+1}) / ln(dx_k/dx_{k+1})`.
pub fn observed_orders(dx: &[f64], errors: &[f64]) -> Vec<f64> {
    dx.windows(2)
        .zip(errors.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}

/// Least-squares slope of `ln e` against `ln dx`.
pub fn fitted_order(dx: &[f64], errors: &[f64]) -> f64 {
    let n = dx.len() as f64;
    let xs: Vec<f64> = dx.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
