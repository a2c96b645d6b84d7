//! Uniform 1D grids, node- and cell-aligned fields, and initialization.
//!
//! A grid with `m` cells on `[a, b]` carries two staggered point sets: the
//! `m + 1` nodes `x_j = a + j·dx` used by the semi-Lagrangian scheme and the
//! `m` cell centers `x_j + dx/2` used by the Ultra-Bee scheme. Cell `j`
//! spans `[x_j, x_{j+1}]`.
//!
//! Outside the index range, fields are continued by their nearest value.

use crate::error::{Error, Result};

/// Uniform grid on `[a, b]` with `m` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    m: usize,
    dx: f64,
}

/// Smallest number of cells any scheme stencil here needs.
pub const MIN_CELLS: usize = 3;

impl Grid1D {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidGrid(format!("need a < b, got a = {a}, b = {b}")));
        }
        if m < MIN_CELLS {
            return Err(Error::InvalidGrid(format!("need m >= {MIN_CELLS} cells, got {m}")));
        }
        Ok(Self { a, b, m, dx: (b - a) / m as f64 })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Number of cells.
    pub fn cells(&self) -> usize {
        self.m
    }

    /// Number of nodes, `cells() + 1`.
    pub fn node_count(&self) -> usize {
        self.m + 1
    }

    pub fn node(&self, j: usize) -> f64 {
        self.a + j as f64 * self.dx
    }

    pub fn center(&self, j: usize) -> f64 {
        self.node(j) + 0.5 * self.dx
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.node_count()).map(|j| self.node(j)).collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.m).map(|j| self.center(j)).collect()
    }

    pub fn len(&self, alignment: Alignment) -> usize {
        match alignment {
            Alignment::NodeCentered => self.node_count(),
            Alignment::CellCentered => self.m,
        }
    }

    pub fn point(&self, alignment: Alignment, j: usize) -> f64 {
        match alignment {
            Alignment::NodeCentered => self.node(j),
            Alignment::CellCentered => self.center(j),
        }
    }

    pub fn points(&self, alignment: Alignment) -> Vec<f64> {
        match alignment {
            Alignment::NodeCentered => self.nodes(),
            Alignment::CellCentered => self.centers(),
        }
    }
}

/// Alias for [`Grid1D::new`].
pub fn build_grid(a: f64, b: f64, m: usize) -> Result<Grid1D> {
    Grid1D::new(a, b, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alignment {
    /// One value per node: point values.
    NodeCentered,
    /// One value per cell: cell averages.
    CellCentered,
}

/// Values attached to the nodes or the cells of a grid. Always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid1D,
    alignment: Alignment,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid1D, alignment: Alignment, values: Vec<f64>) -> Result<Self> {
        let expected = grid.len(alignment);
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, got: values.len() });
        }
        check_finite(&values)?;
        Ok(Self { grid, alignment, values })
    }

    pub fn nodes(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, Alignment::NodeCentered, values)
    }

    pub fn cells(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, Alignment::CellCentered, values)
    }

    pub fn constant(grid: Grid1D, alignment: Alignment, value: f64) -> Result<Self> {
        Self::new(grid, alignment, vec![value; grid.len(alignment)])
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn alignment(&self) -> Alignment {
        self.alignment
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn points(&self) -> Vec<f64> {
        self.grid.points(self.alignment)
    }

    /// Value at a possibly out-of-range index, continued by the nearest value.
    pub fn ghost(&self, j: isize) -> f64 {
        ghost(&self.values, j)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    /// Same grid and alignment, new values. Rejects non-finite output.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(values.len(), self.values.len());
        check_finite(&values)?;
        Ok(Self { grid: self.grid, alignment: self.alignment, values })
    }
}

/// `values[j]` with constant continuation outside `0..len`.
pub(crate) fn ghost(values: &[f64], j: isize) -> f64 {
    let last = values.len() as isize - 1;
    values[j.clamp(0, last) as usize]
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index, value: values[index] }),
        None => Ok(()),
    }
}

/// Closed index range `[j_min, j_max]` of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportWindow {
    j_min: usize,
    j_max: usize,
}

impl SupportWindow {
    pub fn new(j_min: usize, j_max: usize, len: usize) -> Result<Self> {
        if j_min > j_max || j_max >= len {
            return Err(Error::InvalidParameter(format!(
                "window [{j_min}, {j_max}] not inside 0..{len}"
            )));
        }
        Ok(Self { j_min, j_max })
    }

    /// Whole index range of a field.
    pub fn full(field: &Field) -> Self {
        Self { j_min: 0, j_max: field.len() - 1 }
    }

    pub fn j_min(&self) -> usize {
        self.j_min
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn range(&self) -> std::ops::RangeInclusive<usize> {
        self.j_min..=self.j_max
    }

    pub fn contains(&self, j: usize) -> bool {
        self.range().contains(&j)
    }
}

/// Constant time step `dt` with `n_steps` steps reaching `t_final`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSpec {
    dt: f64,
    t_final: f64,
    n_steps: usize,
}

impl TimeSpec {
    /// `n_steps = round(T / dt)`.
    pub fn new(dt: f64, t_final: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite() && t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidTime(format!("need dt > 0 and T > 0, got dt = {dt}, T = {t_final}")));
        }
        let n_steps = (t_final / dt).round() as usize;
        Ok(Self { dt, t_final, n_steps })
    }

    /// Largest step with Courant number at most `nu` that divides `T` evenly.
    ///
    /// `speed` is the maximal velocity magnitude. A zero speed gives a single step.
    pub fn from_courant(t_final: f64, nu: f64, dx: f64, speed: f64) -> Result<Self> {
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(Error::InvalidParameter(format!("Courant target must lie in (0, 1], got {nu}")));
        }
        if !(t_final > 0.0 && t_final.is_finite() && dx > 0.0 && speed >= 0.0) {
            return Err(Error::InvalidTime("need T > 0, dx > 0, speed >= 0".to_string()));
        }
        let n_steps = if speed == 0.0 {
            1
        } else {
            ((t_final / (nu * dx / speed)) - 1e-9).ceil().max(1.0) as usize
        };
        Ok(Self { dt: t_final / n_steps as f64, t_final, n_steps })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }
}

/// A real function of one variable that can also report where it is not smooth.
///
/// Breakpoints let the cell-average quadrature split cells so piecewise
/// polynomial data is integrated exactly; `exact_mean` overrides quadrature
/// entirely (used for step data so that averages are bit-clean).
pub trait Profile: Send + Sync {
    fn value(&self, x: f64) -> f64;

    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn exact_mean(&self, _lo: f64, _hi: f64) -> Option<f64> {
        None
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> Profile for F {
    fn value(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Point values `ic(x_j)` on the nodes.
pub fn init_point_values<P: Profile + ?Sized>(grid: Grid1D, ic: &P) -> Result<Field> {
    Field::nodes(grid, grid.nodes().into_iter().map(|x| ic.value(x)).collect())
}

/// Cell averages `(1/dx)∫ ic` over every cell.
pub fn init_cell_averages<P: Profile + ?Sized>(grid: Grid1D, ic: &P) -> Result<Field> {
    let values = (0..grid.cells())
        .map(|j| mean_over(ic, grid.node(j), grid.node(j + 1)))
        .collect();
    Field::cells(grid, values)
}

const GAUSS_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Mean of `ic` over `[lo, hi]`: exact when the profile provides it, else
/// 5-point Gauss-Legendre on each smooth piece.
pub fn mean_over<P: Profile + ?Sized>(ic: &P, lo: f64, hi: f64) -> f64 {
    if let Some(mean) = ic.exact_mean(lo, hi) {
        return mean;
    }
    let mut cuts = vec![lo];
    let mut inner: Vec<f64> = ic.breakpoints().into_iter().filter(|&p| p > lo && p < hi).collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(hi);
    let integral: f64 = cuts.windows(2).map(|w| gauss_legendre(ic, w[0], w[1])).sum();
    integral / (hi - lo)
}

fn gauss_legendre<P: Profile + ?Sized>(ic: &P, lo: f64, hi: f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    half * GAUSS_NODES
        .iter()
        .zip(GAUSS_WEIGHTS)
        .map(|(t, w)| w * ic.value(mid + half * t))
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_layout() {
        let g = build_grid(-2.0, 2.0, 4).unwrap();
        assert_eq!(g.nodes(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(g.centers(), vec![-1.5, -0.5, 0.5, 1.5]);
        assert_eq!(g.dx(), 1.0);
    }

    #[test]
    fn unit_grid_spacing() {
        let g = build_grid(0.0, 1.0, 10).unwrap();
        assert!((g.dx() - 0.1).abs() < 1e-16);
        assert!((g.node(3) - 0.3).abs() < 1e-15);
        let g = build_grid(-4.5, 4.5, 100).unwrap();
        assert!((g.dx() - 0.09).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(build_grid(1.0, 1.0, 10).is_err());
        assert!(build_grid(2.0, 1.0, 10).is_err());
        assert!(build_grid(0.0, 1.0, 2).is_err());
    }

    #[test]
    fn field_checks_length_and_finiteness() {
        let g = build_grid(0.0, 1.0, 4).unwrap();
        assert!(Field::nodes(g, vec![0.0; 4]).is_err());
        assert!(Field::cells(g, vec![0.0; 4]).is_ok());
        let err = Field::cells(g, vec![0.0, f64::NAN, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 1, .. }));
    }

    #[test]
    fn ghost_values_continue_the_ends() {
        let g = build_grid(0.0, 1.0, 3).unwrap();
        let f = Field::cells(g, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(f.ghost(-2), 1.0);
        assert_eq!(f.ghost(1), 2.0);
        assert_eq!(f.ghost(7), 3.0);
    }

    #[test]
    fn point_values() {
        let g = build_grid(-1.0, 1.0, 4).unwrap();
        let f = init_point_values(g, &|x: f64| (1.0 - x * x).powi(4)).unwrap();
        assert_eq!(f.values()[2], 1.0);
        assert_eq!(f.values()[3], 0.316_406_25);
        let ones = init_point_values(g, &|_x: f64| 1.0).unwrap();
        assert!(ones.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn averages_of_polynomials() {
        let g = build_grid(0.0, 1.0, 3).unwrap();
        let c = init_cell_averages(g, &|_x: f64| 2.5).unwrap();
        assert!(c.values().iter().all(|&v| (v - 2.5).abs() < 1e-15));
        let unit = build_grid(0.0, 3.0, 3).unwrap();
        let id = init_cell_averages(unit, &|x: f64| x).unwrap();
        assert!((id.values()[0] - 0.5).abs() < 1e-12);
        // degree 8 is integrated exactly
        let p = init_cell_averages(build_grid(-1.0, 1.0, 3).unwrap(), &|x: f64| x.powi(8)).unwrap();
        let exact = |lo: f64, hi: f64| (hi.powi(9) - lo.powi(9)) / 9.0 / (hi - lo);
        assert!((p.values()[0] - exact(-1.0, -1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn breakpoints_split_cells() {
        struct Kink;
        impl Profile for Kink {
            fn value(&self, x: f64) -> f64 {
                x.abs()
            }
            fn breakpoints(&self) -> Vec<f64> {
                vec![0.0]
            }
        }
        // cell [-0.2, 0.2] straddles the kink
        let g = build_grid(-0.2, 1.0, 3).unwrap();
        let f = init_cell_averages(g, &Kink).unwrap();
        assert!((f.values()[0] - 0.1).abs() < 1e-15);
        let mixed = mean_over(&Kink, -0.1, 0.3);
        assert!((mixed - (0.005 + 0.045) / 0.4).abs() < 1e-15);
    }

    #[test]
    fn time_spec_hits_final_time() {
        let t = TimeSpec::from_courant(2.0, 0.9, 4.0 / 79.0, 1.0).unwrap();
        assert_eq!(t.n_steps(), 44);
        assert!((t.dt() - 0.045_454_545).abs() < 1e-8);
        let t = TimeSpec::from_courant(0.5, 0.6, 4.0 / 19.0, 1.0).unwrap();
        assert!((t.dt() - 0.125).abs() < 1e-12);
        let t = TimeSpec::new(0.1, 1.0).unwrap();
        assert_eq!(t.n_steps(), 10);
        assert!(TimeSpec::new(0.0, 1.0).is_err());
        assert!(TimeSpec::from_courant(1.0, 1.5, 0.1, 1.0).is_err());
    }

    #[test]
    fn support_window_bounds() {
        assert!(SupportWindow::new(2, 1, 5).is_err());
        assert!(SupportWindow::new(0, 5, 5).is_err());
        let w = SupportWindow::new(1, 3, 5).unwrap();
        assert!(w.contains(3) && !w.contains(4));
    }
}
