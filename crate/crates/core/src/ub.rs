//! Ultra-Bee finite-volume updates on cell averages.
//!
//! The interface flux is the downwind value clamped into the interval that
//! keeps the updated average between its two upwind neighbours. This is what
//! makes the scheme transport interface-aligned steps without smearing.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{ghost, Alignment, Field, Grid1D};

/// Courant numbers at or below this magnitude take the zero-velocity branch.
pub const NU_EPS: f64 = 1e-14;

pub type Velocity = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Minimal and maximal velocity `f_m(x) ≤ f_M(x)`.
///
/// Advection uses `f_m = f_M = c`; `|c·u_x|` uses `f_m = −c`, `f_M = c`.
#[derive(Clone)]
pub struct VelocityPair {
    f_min: Velocity,
    f_max: Velocity,
}

impl VelocityPair {
    pub fn new(f_min: Velocity, f_max: Velocity) -> Self {
        Self { f_min, f_max }
    }

    pub fn constant(c: f64) -> Self {
        let f: Velocity = Arc::new(move |_x| c);
        Self { f_min: f.clone(), f_max: f }
    }

    pub fn symmetric(c: f64) -> Self {
        Self { f_min: Arc::new(move |_x| -c.abs()), f_max: Arc::new(move |_x| c.abs()) }
    }

    pub fn single(f: Velocity) -> Self {
        Self { f_min: f.clone(), f_max: f }
    }

    pub fn at(&self, x: f64) -> (f64, f64) {
        ((self.f_min)(x), (self.f_max)(x))
    }
}

impl fmt::Debug for VelocityPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VelocityPair(..)")
    }
}

/// Courant numbers `ν^m_j = f_m·dt/dx`, `ν^M_j = f_M·dt/dx` at nodes or cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct CourantNumbers {
    alignment: Alignment,
    nu_min: Vec<f64>,
    nu_max: Vec<f64>,
}

impl CourantNumbers {
    /// Constant Courant numbers over `len` points.
    pub fn uniform(alignment: Alignment, len: usize, nu_min: f64, nu_max: f64) -> Result<Self> {
        for nu in [nu_min, nu_max] {
            if !(nu.abs() <= 1.0) {
                return Err(Error::Cfl { x: f64::NAN, nu });
            }
        }
        if nu_min > nu_max {
            return Err(Error::InvalidParameter(format!("nu_min {nu_min} exceeds nu_max {nu_max}")));
        }
        Ok(Self { alignment, nu_min: vec![nu_min; len], nu_max: vec![nu_max; len] })
    }

    pub fn alignment(&self) -> Alignment {
        self.alignment
    }

    pub fn nu_min(&self) -> &[f64] {
        &self.nu_min
    }

    pub fn nu_max(&self) -> &[f64] {
        &self.nu_max
    }

    pub fn is_single(&self) -> bool {
        self.nu_min == self.nu_max
    }
}

fn courant_at(pair: &VelocityPair, grid: &Grid1D, dt: f64, alignment: Alignment) -> Result<CourantNumbers> {
    let scale = dt / grid.dx();
    let points = grid.points(alignment);
    let mut nu_min = Vec::with_capacity(points.len());
    let mut nu_max = Vec::with_capacity(points.len());
    for x in points {
        let (lo, hi) = pair.at(x);
        if lo > hi {
            return Err(Error::InvalidParameter(format!("f_m({x}) = {lo} exceeds f_M({x}) = {hi}")));
        }
        let (lo, hi) = (lo * scale, hi * scale);
        for nu in [lo, hi] {
            if !(nu.abs() <= 1.0 + 1e-12) {
                return Err(Error::Cfl { x, nu: nu.abs() });
            }
        }
        nu_min.push(lo.clamp(-1.0, 1.0));
        nu_max.push(hi.clamp(-1.0, 1.0));
    }
    Ok(CourantNumbers { alignment, nu_min, nu_max })
}

/// Node Courant numbers; fails on the first node where `|ν| > 1`.
pub fn cfl_check(pair: &VelocityPair, grid: &Grid1D, dt: f64) -> Result<CourantNumbers> {
    courant_at(pair, grid, dt, Alignment::NodeCentered)
}

/// Courant numbers at cell centers, the points the UB update uses.
pub fn cfl_check_cells(pair: &VelocityPair, grid: &Grid1D, dt: f64) -> Result<CourantNumbers> {
    courant_at(pair, grid, dt, Alignment::CellCentered)
}

/// Clamp interval `[lower, upper]` for the downwind value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Bounds `b⁺, B⁺` for the right interface of a cell when `ν > 0`.
pub fn flux_bounds(u_prev: f64, u_cur: f64, nu: f64) -> FluxBounds {
    let hi = u_cur.max(u_prev);
    let lo = u_cur.min(u_prev);
    FluxBounds { lower: hi + (u_cur - hi) / nu, upper: lo + (u_cur - lo) / nu }
}

/// Flux through the right interface of the middle cell, `ν ∈ [0, 1]`.
pub fn ub_flux_left(u_prev: f64, u_cur: f64, u_next: f64, nu: f64) -> f64 {
    if nu <= NU_EPS {
        return if u_cur != u_prev { u_next } else { u_cur };
    }
    let FluxBounds { lower, upper } = flux_bounds(u_prev, u_cur, nu);
    u_next.max(lower).min(upper)
}

/// Flux through the left interface of the middle cell, `ν ∈ [−1, 0]`.
///
/// `u_prev` is the downwind neighbour on the left. Mirror image of
/// [`ub_flux_left`].
pub fn ub_flux_right(u_prev: f64, u_cur: f64, u_next: f64, nu: f64) -> f64 {
    ub_flux_left(u_next, u_cur, u_prev, -nu)
}

/// Updated average of cell `j` for Courant number `nu`.
pub(crate) fn ub_cell_value(u: &[f64], j: usize, nu: f64) -> f64 {
    let j = j as isize;
    let g = |k: isize| ghost(u, k);
    let (f_right, f_left) = if nu >= 0.0 {
        (ub_flux_left(g(j - 1), g(j), g(j + 1), nu), ub_flux_left(g(j - 2), g(j - 1), g(j), nu))
    } else {
        (ub_flux_right(g(j), g(j + 1), g(j + 2), nu), ub_flux_right(g(j - 1), g(j), g(j + 1), nu))
    };
    g(j) - nu * (f_right - f_left)
}

fn require_cells(field: &Field, len: usize) -> Result<()> {
    if field.alignment() != Alignment::CellCentered {
        return Err(Error::InvalidParameter("Ultra-Bee updates act on cell averages".into()));
    }
    if len != field.len() {
        return Err(Error::LengthMismatch { expected: field.len(), got: len });
    }
    Ok(())
}

/// One conservative step with per-cell Courant numbers.
pub fn ub_step_single(field: &Field, nus: &[f64]) -> Result<Field> {
    require_cells(field, nus.len())?;
    if let Some(&nu) = nus.iter().find(|nu| !(nu.abs() <= 1.0)) {
        return Err(Error::Cfl { x: f64::NAN, nu });
    }
    let u = field.values();
    field.with_values((0..u.len()).map(|j| ub_cell_value(u, j, nus[j])).collect())
}

/// Two-velocity step: pointwise min of the single-velocity updates.
pub fn ub_step(field: &Field, cn: &CourantNumbers) -> Result<Field> {
    let lo = ub_step_single(field, cn.nu_min())?;
    if cn.is_single() {
        return Ok(lo);
    }
    let hi = ub_step_single(field, cn.nu_max())?;
    field.with_values(lo.values().iter().zip(hi.values()).map(|(a, b)| a.min(*b)).collect())
}

/// Slope ratio and limiter value of the limiter form of the flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterState {
    /// `(ū_j − ū_{j−1}) / (ū_{j+1} − ū_j)`, absent when the denominator is zero.
    pub r: Option<f64>,
    pub phi: f64,
}

/// Limiter form `ū_j + ((1−ν)φ/2)(ū_{j+1} − ū_j)` of the right-interface flux.
///
/// It coincides with [`ub_flux_left`] and exists for cross-checking only.
pub fn ub_flux_limited(field: &Field, j: usize, nu: f64) -> Result<(f64, LimiterState)> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::InvalidParameter(format!("limiter form needs 0 < nu < 1, got {nu}")));
    }
    if j >= field.len() {
        return Err(Error::InvalidParameter(format!("cell {j} out of range")));
    }
    let j = j as isize;
    let (prev, cur, next) = (field.ghost(j - 1), field.ghost(j), field.ghost(j + 1));
    let up = next - cur;
    let state = if up != 0.0 {
        let r = (cur - prev) / up;
        LimiterState { r: Some(r), phi: (2.0 * r / nu).min(2.0 / (1.0 - nu)).max(0.0) }
    } else {
        LimiterState { r: None, phi: 0.0 }
    };
    Ok((cur + 0.5 * (1.0 - nu) * state.phi * up, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    fn cells(v: Vec<f64>) -> Field {
        let m = v.len();
        Field::cells(build_grid(0.0, m as f64, m).unwrap(), v).unwrap()
    }

    #[test]
    fn flux_examples() {
        let b = flux_bounds(0.0, 1.0, 0.5);
        assert_eq!((b.lower, b.upper), (1.0, 2.0));
        assert_eq!(ub_flux_left(0.0, 1.0, 1.0, 0.5), 1.0);
        assert_eq!(ub_flux_left(0.0, 0.0, 1.0, 0.5), 0.0);
        for nu in [0.1, 0.5, 1.0] {
            assert_eq!(ub_flux_left(0.3, 0.3, 0.3, nu), 0.3);
            assert_eq!(ub_flux_right(0.3, 0.3, 0.3, -nu), 0.3);
        }
        assert_eq!(ub_flux_right(1.0, 0.0, 0.0, -0.5), 0.0);
        // mirror of (0, 1, 1): reflected data (1, 1, 0)
        assert_eq!(ub_flux_right(1.0, 1.0, 0.0, -0.5), 1.0);
    }

    #[test]
    fn zero_velocity_branch() {
        assert_eq!(ub_flux_left(0.0, 1.0, 2.0, 0.0), 2.0);
        assert_eq!(ub_flux_left(1.0, 1.0, 2.0, 0.0), 1.0);
        assert_eq!(ub_flux_left(0.0, 1.0, 2.0, 1e-16), 2.0);
        let f = cells(vec![0.0, 0.0, 1.0, 1.0, 0.0]);
        let out = ub_step_single(&f, &[0.0; 5]).unwrap();
        assert_eq!(out.values(), f.values());
    }

    #[test]
    fn flux_escapes_the_literal_upwind_pair() {
        // The clamp keeps the flux between the two cells adjacent to the
        // interface, not between ū_{j−1} and ū_j.
        let f = ub_flux_left(0.0, 1.0, 5.0, 0.5);
        assert_eq!(f, 2.0);
        assert!(f > 1.0 && f <= 5.0);
    }

    #[test]
    fn step_moves_by_half_a_cell() {
        let f = cells(vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        let out = ub_step_single(&f, &[0.5; 8]).unwrap();
        assert_eq!(out.values(), &[0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 0.5, 0.0]);
    }

    #[test]
    fn unit_courant_is_a_shift() {
        let f = cells(vec![0.0, 0.2, 0.9, 0.4, 0.4, 1.0, 0.0, 0.0]);
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15);
        let right = ub_step_single(&f, &[1.0; 8]).unwrap();
        assert!(close(right.values(), &[0.0, 0.0, 0.2, 0.9, 0.4, 0.4, 1.0, 0.0]));
        let left = ub_step_single(&f, &[-1.0; 8]).unwrap();
        assert!(close(left.values(), &[0.2, 0.9, 0.4, 0.4, 1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn constant_field_is_fixed() {
        let f = cells(vec![0.25; 6]);
        let cn = CourantNumbers::uniform(Alignment::CellCentered, 6, -0.7, 0.7).unwrap();
        assert_eq!(ub_step(&f, &cn).unwrap().values(), f.values());
    }

    #[test]
    fn two_velocity_min() {
        let f = cells(vec![0.0, 0.0, 0.5, 1.0, 0.5, 0.0, 0.0]);
        let cn = CourantNumbers::uniform(Alignment::CellCentered, 7, -0.6, 0.6).unwrap();
        let both = ub_step(&f, &cn).unwrap();
        let lo = ub_step_single(&f, cn.nu_min()).unwrap();
        let hi = ub_step_single(&f, cn.nu_max()).unwrap();
        for j in 0..7 {
            assert!(both.values()[j] <= lo.values()[j] && both.values()[j] <= hi.values()[j]);
        }
        assert!(both.values()[3] < 1.0);
        let single = CourantNumbers::uniform(Alignment::CellCentered, 7, 0.6, 0.6).unwrap();
        assert_eq!(ub_step(&f, &single).unwrap(), hi);
    }

    #[test]
    fn cfl_guard() {
        let g = build_grid(0.0, 1.0, 10).unwrap();
        let cn = cfl_check(&VelocityPair::symmetric(1.0), &g, 0.09).unwrap();
        assert!(cn.nu_max().iter().all(|&nu| (nu - 0.9).abs() < 1e-12));
        assert!(cn.nu_min().iter().all(|&nu| (nu + 0.9).abs() < 1e-12));
        let zero = cfl_check(&VelocityPair::constant(0.0), &g, 0.1).unwrap();
        assert!(zero.nu_max().iter().all(|&nu| nu == 0.0));
        let err = cfl_check(&VelocityPair::constant(1.0), &g, 0.12).unwrap_err();
        assert!(matches!(err, Error::Cfl { x, .. } if x == 0.0));
        assert_eq!(cfl_check_cells(&VelocityPair::constant(1.0), &g, 0.05).unwrap().nu_max().len(), 10);
    }

    #[test]
    fn limiter_form_matches_clamped_flux() {
        let f = cells(vec![0.0, 1.0, 2.0]);
        let (flux, state) = ub_flux_limited(&f, 1, 0.5).unwrap();
        assert_eq!(state.r, Some(1.0));
        assert_eq!(state.phi, 4.0);
        assert_eq!(flux, ub_flux_left(0.0, 1.0, 2.0, 0.5));
        let flat = cells(vec![0.3, 0.3, 0.3]);
        assert_eq!(ub_flux_limited(&flat, 1, 0.5).unwrap().0, 0.3);
        assert!(ub_flux_limited(&f, 1, 1.0).is_err());
    }
}
