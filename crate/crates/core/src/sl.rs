//! Semi-Lagrangian updates on node values.
//!
//! Every update here is a P1 interpolation of the previous node values at the
//! foot of a characteristic, optionally minimized over a set of controls
//! (the Hopf-Lax form for convex Hamiltonians).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{ghost, Alignment, Field, Grid1D};

/// Convex Hamiltonian `H(p)`.
#[derive(Clone)]
pub enum Hamiltonian {
    /// `H(p) = |c·p|`.
    AbsValue(f64),
    /// `H(p) = c·p`, advection written as a Hamilton-Jacobi equation.
    Linear(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Hamiltonian {
    pub fn eval(&self, p: f64) -> f64 {
        match self {
            Hamiltonian::AbsValue(c) => (c * p).abs(),
            Hamiltonian::Linear(c) => c * p,
            Hamiltonian::Custom(h) => h(p),
        }
    }
}

impl fmt::Debug for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hamiltonian::AbsValue(c) => write!(f, "AbsValue({c})"),
            Hamiltonian::Linear(c) => write!(f, "Linear({c})"),
            Hamiltonian::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Uniformly spaced controls on `[a_min, a_max]`, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSet {
    a_min: f64,
    a_max: f64,
    n: usize,
}

/// Control count used when none is given.
pub const DEFAULT_CONTROLS: usize = 201;

impl ControlSet {
    pub fn new(a_min: f64, a_max: f64, n: usize) -> Result<Self> {
        if !(a_min < a_max) || n < 3 {
            return Err(Error::InvalidParameter(format!(
                "control set needs a_min < a_max and n >= 3, got [{a_min}, {a_max}] with n = {n}"
            )));
        }
        Ok(Self { a_min, a_max, n })
    }

    /// `[-a_max, a_max]` with [`DEFAULT_CONTROLS`] entries.
    pub fn symmetric(a_max: f64) -> Result<Self> {
        Self::new(-a_max, a_max, DEFAULT_CONTROLS)
    }

    /// The degenerate set `{a}`.
    pub fn single(a: f64) -> Self {
        Self { a_min: a, a_max: a, n: 1 }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn controls(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.a_min];
        }
        let span = self.a_max - self.a_min;
        let last = (self.n - 1) as f64;
        (0..self.n).map(|k| self.a_min + span * (k as f64 / last)).collect()
    }
}

/// Sampling window `[-half_width, half_width]` for the sup over `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PSearch {
    pub half_width: f64,
    pub samples: usize,
}

impl Default for PSearch {
    fn default() -> Self {
        Self { half_width: 10.0, samples: 2001 }
    }
}

/// `H*(a)` per control; `f64::INFINITY` marks controls outside the effective domain.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreTable {
    controls: Vec<f64>,
    values: Vec<f64>,
}

impl LegendreTable {
    /// Builds a table from known values, e.g. an analytic transform.
    pub fn from_values(controls: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if controls.len() != values.len() {
            return Err(Error::LengthMismatch { expected: controls.len(), got: values.len() });
        }
        Ok(Self { controls, values })
    }

    pub fn controls(&self) -> &[f64] {
        &self.controls
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Controls with finite `H*`, paired with their values.
    pub fn finite(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.controls
            .iter()
            .zip(&self.values)
            .filter(|(_, h)| h.is_finite())
            .map(|(&a, &h)| (a, h))
    }

    pub fn max_abs_control(&self) -> f64 {
        self.finite().fold(0.0, |acc, (a, _)| acc.max(a.abs()))
    }
}

/// Slope of `a·p − H(p)` at the edge of the search window above which the
/// sup is declared unbounded.
const UNBOUNDED_SLOPE: f64 = 1e-9;

/// Numerical Legendre transform `H*(a) = sup_p (a·p − H(p))` by sampling.
pub fn legendre_transform(h: &Hamiltonian, controls: &ControlSet, search: PSearch) -> Result<LegendreTable> {
    if !(search.half_width > 0.0) || search.samples < 3 {
        return Err(Error::InvalidParameter("p search needs a positive width and at least 3 samples".into()));
    }
    let n = search.samples;
    let dp = 2.0 * search.half_width / (n - 1) as f64;
    let ps: Vec<f64> = (0..n)
        .map(|k| if 2 * k + 1 == n { 0.0 } else { -search.half_width + k as f64 * dp })
        .collect();
    let hs: Vec<f64> = ps.iter().map(|&p| h.eval(p)).collect();
    let controls = controls.controls();
    let values = controls
        .iter()
        .map(|&a| {
            let g: Vec<f64> = ps.iter().zip(&hs).map(|(&p, &hp)| a * p - hp).collect();
            let grows_right = (g[n - 1] - g[n - 2]) / dp > UNBOUNDED_SLOPE;
            let grows_left = (g[0] - g[1]) / dp > UNBOUNDED_SLOPE;
            if grows_right || grows_left {
                f64::INFINITY
            } else {
                g.into_iter().fold(f64::NEG_INFINITY, f64::max)
            }
        })
        .collect();
    Ok(LegendreTable { controls, values })
}

/// P1 interpolation of node values at `x`; constant continuation outside the grid.
pub fn p1_interpolate(field: &Field, x: f64) -> f64 {
    interpolate(field.values(), field.grid(), x)
}

pub(crate) fn interpolate(values: &[f64], grid: &Grid1D, x: f64) -> f64 {
    let m = grid.cells();
    let mut q = ((x - grid.a()) / grid.dx()).clamp(0.0, m as f64);
    let nearest = q.round();
    if (q - nearest).abs() < 1e-10 {
        q = nearest;
    }
    let i = (q.floor() as usize).min(m - 1);
    let t = q - i as f64;
    if t == 1.0 {
        values[i + 1]
    } else {
        values[i] + t * (values[i + 1] - values[i])
    }
}

/// A semi-Lagrangian node update, shared by the pure and the coupled scheme.
#[derive(Debug, Clone)]
pub enum SlUpdate {
    /// Constant velocity with Courant number `nu`, `|nu| ≤ 1`.
    Courant(f64),
    /// Variable velocity: precomputed characteristic foot of every node.
    Feet(Vec<f64>),
    /// Hopf-Lax minimization over controls: each entry is
    /// `(shift a·dt, cost dt·H*(a))`.
    HopfLax(Vec<(f64, f64)>),
}

impl SlUpdate {
    pub fn courant(nu: f64) -> Result<Self> {
        if !(nu.abs() <= 1.0) {
            return Err(Error::Cfl { x: f64::NAN, nu });
        }
        Ok(SlUpdate::Courant(nu))
    }

    /// Feet `x_j − c(x_j)·dt`, rejecting Courant numbers above one.
    pub fn characteristics(grid: &Grid1D, c: &dyn Fn(f64) -> f64, dt: f64) -> Result<Self> {
        let mut feet = Vec::with_capacity(grid.node_count());
        for x in grid.nodes() {
            let v = c(x);
            let nu = v * dt / grid.dx();
            if !(nu.abs() <= 1.0 + 1e-12) {
                return Err(Error::Cfl { x, nu: nu.abs() });
            }
            feet.push(x - v * dt);
        }
        Ok(SlUpdate::Feet(feet))
    }

    pub fn hopf_lax(table: &LegendreTable, dt: f64) -> Result<Self> {
        let entries: Vec<(f64, f64)> = table.finite().map(|(a, h)| (a * dt, dt * h)).collect();
        if entries.is_empty() {
            return Err(Error::NoFiniteControl);
        }
        Ok(SlUpdate::HopfLax(entries))
    }

    /// New value at node `j` from the node values `values`.
    pub fn node_value(&self, values: &[f64], grid: &Grid1D, j: usize) -> f64 {
        match self {
            SlUpdate::Courant(nu) => {
                let upwind = if *nu >= 0.0 { ghost(values, j as isize - 1) } else { ghost(values, j as isize + 1) };
                let nu = nu.abs();
                if nu == 1.0 {
                    upwind
                } else {
                    values[j] + nu * (upwind - values[j])
                }
            }
            SlUpdate::Feet(feet) => interpolate(values, grid, feet[j]),
            SlUpdate::HopfLax(entries) => {
                let x = grid.node(j);
                entries
                    .iter()
                    .map(|&(shift, cost)| interpolate(values, grid, x - shift) + cost)
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn apply(&self, field: &Field) -> Result<Field> {
        require_nodes(field)?;
        let values = field.values();
        let out = (0..values.len()).map(|j| self.node_value(values, field.grid(), j)).collect();
        field.with_values(out)
    }
}

fn require_nodes(field: &Field) -> Result<()> {
    if field.alignment() != Alignment::NodeCentered {
        return Err(Error::InvalidParameter("semi-Lagrangian updates act on node values".into()));
    }
    Ok(())
}

/// One step of `u_t + c u_x = 0` with signed Courant number `nu = c·dt/dx`.
pub fn sl_advection_step(field: &Field, nu: f64) -> Result<Field> {
    SlUpdate::courant(nu)?.apply(field)
}

/// One step of `u_t + c(x) u_x = 0` by first-order characteristic feet.
pub fn sl_advection_step_var(field: &Field, c: &dyn Fn(f64) -> f64, dt: f64) -> Result<Field> {
    SlUpdate::characteristics(field.grid(), c, dt)?.apply(field)
}

/// One Hopf-Lax step `min_a { u(x_j − a·dt) + dt·H*(a) }`.
pub fn sl_hj_step(field: &Field, table: &LegendreTable, dt: f64) -> Result<Field> {
    SlUpdate::hopf_lax(table, dt)?.apply(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    fn nodes(a: f64, b: f64, v: Vec<f64>) -> Field {
        let g = build_grid(a, b, v.len() - 1).unwrap();
        Field::nodes(g, v).unwrap()
    }

    #[test]
    fn interpolation_examples() {
        let f = nodes(0.0, 3.0, vec![0.0, 2.0, 0.0, 0.0]);
        assert_eq!(p1_interpolate(&f, 1.25), 1.5);
        assert_eq!(p1_interpolate(&f, 0.5), 1.0);
        assert_eq!(p1_interpolate(&f, -4.0), 0.0);
        let g = nodes(-2.0, 2.0, (0..80).map(|k| (k as f64 * 0.37).sin()).collect());
        for (k, x) in g.grid().nodes().into_iter().enumerate() {
            assert_eq!(p1_interpolate(&g, x), g.values()[k]);
        }
    }

    #[test]
    fn advection_examples() {
        let f = nodes(0.0, 3.0, vec![0.0, 1.0, 0.0, 0.0]);
        let out = sl_advection_step(&f, 0.5).unwrap();
        assert_eq!(out.values(), &[0.0, 0.5, 0.5, 0.0]);
        let shifted = sl_advection_step(&f, 1.0).unwrap();
        assert_eq!(shifted.values(), &[0.0, 0.0, 1.0, 0.0]);
        let back = sl_advection_step(&f, -1.0).unwrap();
        assert_eq!(back.values(), &[1.0, 0.0, 0.0, 0.0]);
        let c = nodes(0.0, 3.0, vec![0.7; 4]);
        assert_eq!(sl_advection_step(&c, 0.3).unwrap().values(), c.values());
        assert!(sl_advection_step(&f, 1.2).is_err());
    }

    #[test]
    fn variable_velocity() {
        let g = build_grid(0.0, 1.0, 20).unwrap();
        let f = Field::nodes(g, g.nodes().iter().map(|x| x * x).collect()).unwrap();
        let still = sl_advection_step_var(&f, &|_x| 0.0, 0.01).unwrap();
        assert_eq!(still.values(), f.values());
        let dt = 0.03;
        let var = sl_advection_step_var(&f, &|_x| 1.0, dt).unwrap();
        let cst = sl_advection_step(&f, dt / g.dx()).unwrap();
        for (a, b) in var.values().iter().zip(cst.values()) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(sl_advection_step_var(&f, &|_x| 10.0, dt).is_err());
    }

    #[test]
    fn variable_velocity_foot() {
        let g = build_grid(0.0, 1.0, 20).unwrap();
        let f = Field::nodes(g, g.nodes().iter().map(|x| x.sin()).collect()).unwrap();
        let dt = 0.015385;
        let out = sl_advection_step_var(&f, &|x| -(x - 1.1), dt).unwrap();
        // c(0.25) = 0.85 > 0, so the foot lies upstream on the left
        let foot = 0.25 - 0.85 * dt;
        assert!((foot - 0.236_922_75).abs() < 1e-12);
        let expected = ((0.25 - foot) * 0.2f64.sin() + (foot - 0.2) * 0.25f64.sin()) / 0.05;
        assert!((out.values()[5] - expected).abs() < 1e-14, "{} vs {expected}", out.values()[5]);
    }

    #[test]
    fn legendre_of_abs_value() {
        let h = Hamiltonian::AbsValue(1.0);
        let set = ControlSet::new(-2.0, 2.0, 9).unwrap();
        let t = legendre_transform(&h, &set, PSearch::default()).unwrap();
        for (a, v) in t.controls().iter().zip(t.values()) {
            if a.abs() <= 1.0 {
                assert_eq!(*v, 0.0, "a = {a}");
            } else {
                assert!(v.is_infinite(), "a = {a}");
            }
        }
    }

    #[test]
    fn legendre_of_linear() {
        let h = Hamiltonian::Linear(0.5);
        let set = ControlSet::new(-1.0, 1.0, 5).unwrap();
        let t = legendre_transform(&h, &set, PSearch::default()).unwrap();
        let finite: Vec<_> = t.finite().collect();
        assert_eq!(finite, vec![(0.5, 0.0)]);
    }

    #[test]
    fn legendre_of_quadratic_is_finite() {
        let h = Hamiltonian::Custom(Arc::new(|p| 0.5 * p * p));
        let set = ControlSet::new(-1.0, 1.0, 5).unwrap();
        let t = legendre_transform(&h, &set, PSearch::default()).unwrap();
        for (a, v) in t.finite() {
            assert!((v - 0.5 * a * a).abs() < 1e-4);
        }
        assert_eq!(t.finite().count(), 5);
    }

    #[test]
    fn hopf_lax_examples() {
        let f = nodes(0.0, 6.0, vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let set = ControlSet::symmetric(1.0).unwrap();
        let t = legendre_transform(&Hamiltonian::AbsValue(1.0), &set, PSearch::default()).unwrap();
        let out = sl_hj_step(&f, &t, 1.0).unwrap();
        assert_eq!(out.values()[3], 0.0);
        let c = nodes(0.0, 6.0, vec![0.4; 7]);
        assert_eq!(sl_hj_step(&c, &t, 0.5).unwrap().values(), c.values());
    }

    #[test]
    fn hopf_lax_with_one_control_is_advection() {
        let g = build_grid(-1.0, 1.0, 40).unwrap();
        let f = Field::nodes(g, g.nodes().iter().map(|x| (3.0 * x).cos()).collect()).unwrap();
        let c = 0.8;
        let dt = 0.03;
        let set = ControlSet::single(c);
        let t = legendre_transform(&Hamiltonian::Linear(c), &set, PSearch::default()).unwrap();
        let hj = sl_hj_step(&f, &t, dt).unwrap();
        let adv = sl_advection_step(&f, c * dt / g.dx()).unwrap();
        for (a, b) in hj.values().iter().zip(adv.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn no_finite_control_is_an_error() {
        let t = LegendreTable::from_values(vec![2.0], vec![f64::INFINITY]).unwrap();
        let f = nodes(0.0, 3.0, vec![0.0; 4]);
        assert_eq!(sl_hj_step(&f, &t, 0.1).unwrap_err(), Error::NoFiniteControl);
    }

    #[test]
    fn rejects_cell_fields() {
        let g = build_grid(0.0, 1.0, 3).unwrap();
        let f = Field::cells(g, vec![0.0; 3]).unwrap();
        assert!(sl_advection_step(&f, 0.5).is_err());
    }
}
