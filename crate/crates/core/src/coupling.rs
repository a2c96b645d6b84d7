//! The coupled scheme: semi-Lagrangian on regular nodes, Ultra-Bee on cells
//! next to detected singularities.
//!
//! The state carries both representations. Node values `w` are authoritative
//! and complete after every step; cell values `w̄` are meaningful only on
//! cells flagged fresh, i.e. updated by Ultra-Bee in the previous step.
//!
//! One step:
//! 1. σ^n is the classification of `w^n` (stored in the state).
//! 2. Regular nodes (σ = 1) take the semi-Lagrangian update. Point values a
//!    switched node needs from former Ultra-Bee nodes are projected from the
//!    fresh cells.
//! 3. The cells `j−1` and `j` of every singular node take the Ultra-Bee
//!    update. Stale cells in its stencil are synthesized from point values.
//! 4. Singular nodes are refilled from their two adjacent cells.
//! 5. σ^{n+1} is computed from the filled `w^{n+1}`.

use crate::diagnostics::total_variation_of;
use crate::error::{Error, Result};
use crate::grid::{ghost, init_cell_averages, init_point_values, Alignment, Field, Grid1D, TimeSpec};
use crate::problems::ProblemSpec;
use crate::sl::SlUpdate;
use crate::ub::{ub_cell_value, CourantNumbers};

/// Margin added to the slope bound when none is given.
pub const DEFAULT_EPSILON: f64 = 0.5;
/// Default `flat_tol` as a fraction of the slope bound.
pub const FLAT_FRACTION: f64 = 0.75;

/// Thresholds of the regularity test.
///
/// A node is regular when its backward difference is below `delta` and it
/// has the same sign as both neighbouring differences. Two differences that
/// are both at most `flat_tol` in magnitude are compatible whatever their
/// signs, so flat regions and smooth extrema stay regular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityParams {
    pub delta: f64,
    pub epsilon: f64,
    pub flat_tol: f64,
}

impl RegularityParams {
    pub fn new(delta: f64, epsilon: f64, flat_tol: f64) -> Result<Self> {
        if !(delta >= 0.0) || !(epsilon >= 0.0) || !(flat_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "regularity thresholds must be nonnegative: delta = {delta}, epsilon = {epsilon}, flat_tol = {flat_tol}"
            )));
        }
        Ok(Self { delta, epsilon, flat_tol })
    }

    /// `delta = L + epsilon`, `flat_tol = FLAT_FRACTION·L` for a slope bound `L`
    /// of the smooth part of the solution.
    pub fn from_slope_bound(slope: f64, epsilon: f64) -> Result<Self> {
        Self::new(slope + epsilon, epsilon, FLAT_FRACTION * slope)
    }

    /// Defaults for a problem run up to `t_final`.
    pub fn for_problem(problem: &ProblemSpec, t_final: f64) -> Result<Self> {
        Self::from_slope_bound(problem.slope_bound_until(t_final), DEFAULT_EPSILON)
    }

    /// Fallback when nothing is known about the data: the largest discrete
    /// slope of `w0` plays the role of the bound.
    pub fn from_initial(w0: &Field, epsilon: f64) -> Result<Self> {
        let slope = (0..w0.len()).map(|j| backward_diff(w0, j as isize).abs()).fold(0.0, f64::max);
        Self::from_slope_bound(slope, epsilon)
    }

    /// Every node regular: the coupled scheme is the semi-Lagrangian scheme.
    pub fn always_regular() -> Self {
        Self { delta: f64::INFINITY, epsilon: 0.0, flat_tol: f64::INFINITY }
    }

    /// Every node singular: the coupled scheme is the Ultra-Bee scheme.
    pub fn always_singular() -> Self {
        Self { delta: 0.0, epsilon: 0.0, flat_tol: 0.0 }
    }
}

/// Per-node regularity flags: 1 regular, 0 singular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaField {
    values: Vec<u8>,
}

impl SigmaField {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if values.iter().any(|&s| s > 1) {
            return Err(Error::InvalidParameter("sigma values must be 0 or 1".into()));
        }
        Ok(Self { values })
    }

    pub fn filled(len: usize, value: bool) -> Self {
        Self { values: vec![value as u8; len] }
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_regular(&self, j: usize) -> bool {
        self.values[j] == 1
    }

    pub fn singular_count(&self) -> usize {
        self.values.iter().filter(|&&s| s == 0).count()
    }
}

/// Singular cells and the node split induced by a σ field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPartition {
    pub singular_cells: Vec<usize>,
    pub regular_nodes: Vec<usize>,
    pub singular_nodes: Vec<usize>,
}

impl RegionPartition {
    pub fn from_sigma(sigma: &SigmaField) -> Self {
        let (regular_nodes, singular_nodes): (Vec<usize>, Vec<usize>) =
            (0..sigma.len()).partition(|&j| sigma.is_regular(j));
        let cells = ub_cells(sigma);
        let singular_cells = (0..cells.len()).filter(|&k| cells[k]).collect();
        Self { singular_cells, regular_nodes, singular_nodes }
    }
}

/// Cells `j−1, j` of every singular node `j`.
fn ub_cells(sigma: &SigmaField) -> Vec<bool> {
    let m = sigma.len() - 1;
    let mut cells = vec![false; m];
    for j in (0..=m).filter(|&j| !sigma.is_regular(j)) {
        if j > 0 {
            cells[j - 1] = true;
        }
        if j < m {
            cells[j] = true;
        }
    }
    cells
}

/// `(w_j − w_{j−1}) / dx`, with constant continuation outside the grid.
pub fn backward_diff(field: &Field, j: isize) -> f64 {
    diff(field.values(), j, field.grid().dx())
}

fn diff(w: &[f64], j: isize, dx: f64) -> f64 {
    (ghost(w, j) - ghost(w, j - 1)) / dx
}

fn compatible(a: f64, b: f64, flat_tol: f64) -> bool {
    a * b > 0.0 || a.abs().max(b.abs()) <= flat_tol
}

fn classify_at(w: &[f64], dx: f64, j: isize, params: &RegularityParams) -> u8 {
    let d = |k| diff(w, k, dx);
    let (left, mid, right) = (d(j - 1), d(j), d(j + 1));
    let regular = mid.abs() < params.delta
        && compatible(left, mid, params.flat_tol)
        && compatible(mid, right, params.flat_tol);
    regular as u8
}

/// σ at node `j`: 1 when the node is regular.
pub fn classify_node(field: &Field, j: usize, params: &RegularityParams) -> u8 {
    classify_at(field.values(), field.grid().dx(), j as isize, params)
}

/// σ at every node.
pub fn classify(field: &Field, params: &RegularityParams) -> SigmaField {
    let dx = field.grid().dx();
    let values = (0..field.len()).map(|j| classify_at(field.values(), dx, j as isize, params)).collect();
    SigmaField { values }
}

/// Point value between two cells: their mean.
pub fn project_sl(u_bar_left: f64, u_bar_right: f64) -> f64 {
    0.5 * (u_bar_left + u_bar_right)
}

/// Cell value between two nodes: their mean.
pub fn project_ub(u_left: f64, u_right: f64) -> f64 {
    0.5 * (u_left + u_right)
}

/// Both representations of the solution plus the switching bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    pub w: Field,
    pub w_bar: Field,
    /// σ^n, computed from `w`.
    pub sigma: SigmaField,
    pub sigma_prev: SigmaField,
    /// Cells whose `w_bar` value was produced by the last Ultra-Bee update.
    pub fresh: Vec<bool>,
    pub step_index: usize,
    /// Cells synthesized from point values during the last step.
    pub synthesized: usize,
}

impl CoupledState {
    /// Initial state; all cell values are trusted and `σ_prev = σ⁰`.
    pub fn new(w: Field, w_bar: Field, params: &RegularityParams) -> Result<Self> {
        let sigma = classify(&w, params);
        let fresh = vec![true; w_bar.len()];
        Self::from_parts(w, w_bar, sigma.clone(), sigma, fresh)
    }

    /// Point values and exact cell averages of a problem's initial data.
    pub fn initial(problem: &ProblemSpec, grid: Grid1D, params: &RegularityParams) -> Result<Self> {
        let w = init_point_values(grid, &problem.ic)?;
        let w_bar = init_cell_averages(grid, &problem.ic)?;
        Self::new(w, w_bar, params)
    }

    /// Arbitrary state, for driving the step with chosen σ patterns.
    pub fn from_parts(
        w: Field,
        w_bar: Field,
        sigma: SigmaField,
        sigma_prev: SigmaField,
        fresh: Vec<bool>,
    ) -> Result<Self> {
        if w.alignment() != Alignment::NodeCentered || w_bar.alignment() != Alignment::CellCentered {
            return Err(Error::InvalidParameter("w must be node values and w_bar cell values".into()));
        }
        if w.grid() != w_bar.grid() {
            return Err(Error::InvalidParameter("w and w_bar live on different grids".into()));
        }
        for len in [sigma.len(), sigma_prev.len()] {
            if len != w.len() {
                return Err(Error::LengthMismatch { expected: w.len(), got: len });
            }
        }
        if fresh.len() != w_bar.len() {
            return Err(Error::LengthMismatch { expected: w_bar.len(), got: fresh.len() });
        }
        Ok(Self { w, w_bar, sigma, sigma_prev, fresh, step_index: 0, synthesized: 0 })
    }
}

/// Refill singular nodes from adjacent cells; stale cells are synthesized
/// from point values. Returns the number of synthesized cells.
fn fill(w: &mut [f64], w_bar: &[f64], fresh: &[bool], sigma: &SigmaField) -> usize {
    let m = w_bar.len();
    let before = w.to_vec();
    let mut synthesized = 0;
    let mut cell = |k: usize| {
        if fresh[k] {
            w_bar[k]
        } else {
            synthesized += 1;
            project_ub(before[k], before[k + 1])
        }
    };
    for j in (0..=m).filter(|&j| !sigma.is_regular(j)) {
        let left = cell(j.saturating_sub(1));
        let right = cell(j.min(m - 1));
        w[j] = project_sl(left, right);
    }
    synthesized
}

/// Filling the holes: every singular node takes the mean of its two cells.
pub fn fill_holes(state: &CoupledState) -> CoupledState {
    let mut next = state.clone();
    let mut w = state.w.values().to_vec();
    next.synthesized = fill(&mut w, state.w_bar.values(), &state.fresh, &state.sigma);
    next.w = state.w.with_values(w).expect("means of finite values are finite");
    next
}

/// The two building-block updates plus the regularity thresholds.
#[derive(Debug, Clone)]
pub struct CoupledScheme {
    pub sl: SlUpdate,
    /// Courant numbers at cell centers.
    pub ub: CourantNumbers,
    pub params: RegularityParams,
}

impl CoupledScheme {
    pub fn new(sl: SlUpdate, ub: CourantNumbers, params: RegularityParams) -> Result<Self> {
        if ub.alignment() != Alignment::CellCentered {
            return Err(Error::InvalidParameter("Ultra-Bee Courant numbers must be given at cell centers".into()));
        }
        Ok(Self { sl, ub, params })
    }

    pub fn for_problem(problem: &ProblemSpec, grid: &Grid1D, dt: f64, params: RegularityParams) -> Result<Self> {
        Self::new(problem.sl_update(grid, dt)?, problem.ub_courant(grid, dt)?, params)
    }

    /// One step of the coupled scheme.
    pub fn step(&self, state: &CoupledState) -> Result<CoupledState> {
        self.step_traced(state).map(|(next, _)| next)
    }

    /// One step, also returning the cell values the Ultra-Bee update read.
    pub fn step_traced(&self, state: &CoupledState) -> Result<(CoupledState, Vec<f64>)> {
        let grid = *state.w.grid();
        let m = grid.cells();
        if self.ub.nu_min().len() != m {
            return Err(Error::LengthMismatch { expected: m, got: self.ub.nu_min().len() });
        }
        let w = state.w.values();
        let w_bar = state.w_bar.values();
        let sigma = &state.sigma;

        // point values seen by the semi-Lagrangian stencil
        let mut points = w.to_vec();
        for j in (0..=m).filter(|&j| sigma.is_regular(j) && !state.sigma_prev.is_regular(j)) {
            for k in j.saturating_sub(1)..=(j + 1).min(m) {
                let left = k.saturating_sub(1);
                let right = k.min(m - 1);
                if !state.sigma_prev.is_regular(k) && state.fresh[left] && state.fresh[right] {
                    points[k] = project_sl(w_bar[left], w_bar[right]);
                }
            }
        }
        let mut next_w = w.to_vec();
        for j in (0..=m).filter(|&j| sigma.is_regular(j)) {
            next_w[j] = self.sl.node_value(&points, &grid, j);
        }

        // cell values seen by the Ultra-Bee stencil
        let cells: Vec<f64> = (0..m)
            .map(|k| if state.fresh[k] { w_bar[k] } else { project_ub(w[k], w[k + 1]) })
            .collect();
        let targets = ub_cells(sigma);
        let mut next_bar = w_bar.to_vec();
        let mut synthesized = 0;
        for k in (0..m).filter(|&k| targets[k]) {
            let lo = ub_cell_value(&cells, k, self.ub.nu_min()[k]);
            let hi = ub_cell_value(&cells, k, self.ub.nu_max()[k]);
            next_bar[k] = lo.min(hi);
            synthesized += (k.saturating_sub(2)..=(k + 2).min(m - 1)).filter(|&i| !state.fresh[i]).count();
        }
        fill(&mut next_w, &next_bar, &targets, sigma);

        let next_w = state.w.with_values(next_w)?;
        let next_sigma = classify(&next_w, &self.params);
        let next = CoupledState {
            w: next_w,
            w_bar: state.w_bar.with_values(next_bar)?,
            sigma: next_sigma,
            sigma_prev: sigma.clone(),
            fresh: targets,
            step_index: state.step_index + 1,
            synthesized,
        };
        Ok((next, cells))
    }
}

/// Alias for [`CoupledScheme::step`].
pub fn coupled_step(state: &CoupledState, scheme: &CoupledScheme) -> Result<CoupledState> {
    scheme.step(state)
}

/// Node values and σ at one retained step.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledSnapshot {
    pub step: usize,
    pub time: f64,
    pub w: Field,
    pub sigma: SigmaField,
}

#[derive(Debug, Clone)]
pub struct CoupledTrajectory {
    /// Requested steps, in increasing order.
    pub snapshots: Vec<CoupledSnapshot>,
    /// Total variation of `w^n` for `n = 0..=n_steps`.
    pub tv: Vec<f64>,
    /// Singular node count of σ^n for `n = 0..=n_steps`.
    pub singular_counts: Vec<usize>,
    pub final_state: CoupledState,
}

impl CoupledTrajectory {
    pub fn snapshot(&self, step: usize) -> Option<&CoupledSnapshot> {
        self.snapshots.iter().find(|s| s.step == step)
    }
}

/// Runs the coupled scheme from the problem's initial data, keeping
/// snapshots at the listed steps.
pub fn run_coupled(
    problem: &ProblemSpec,
    grid: Grid1D,
    time: TimeSpec,
    params: RegularityParams,
    snapshot_steps: &[usize],
) -> Result<CoupledTrajectory> {
    let scheme = CoupledScheme::for_problem(problem, &grid, time.dt(), params)?;
    let state = CoupledState::initial(problem, grid, &params)?;
    run_scheme(&scheme, state, time, snapshot_steps)
}

/// Runs an already assembled scheme from `state`.
pub fn run_scheme(
    scheme: &CoupledScheme,
    mut state: CoupledState,
    time: TimeSpec,
    snapshot_steps: &[usize],
) -> Result<CoupledTrajectory> {
    let mut snapshots = Vec::new();
    let mut tv = vec![total_variation_of(state.w.values())];
    let mut singular_counts = vec![state.sigma.singular_count()];
    let keep = |state: &CoupledState, snapshots: &mut Vec<CoupledSnapshot>| {
        if snapshot_steps.contains(&state.step_index) {
            snapshots.push(CoupledSnapshot {
                step: state.step_index,
                time: time.time(state.step_index),
                w: state.w.clone(),
                sigma: state.sigma.clone(),
            });
        }
    };
    keep(&state, &mut snapshots);
    for _ in 0..time.n_steps() {
        state = scheme.step(&state)?;
        tv.push(total_variation_of(state.w.values()));
        singular_counts.push(state.sigma.singular_count());
        keep(&state, &mut snapshots);
    }
    Ok(CoupledTrajectory { snapshots, tv, singular_counts, final_state: state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::problems::ProblemSpec;
    use crate::ub::{ub_step, CourantNumbers};

    fn nodes(dx: f64, v: Vec<f64>) -> Field {
        let m = v.len() - 1;
        Field::nodes(build_grid(0.0, dx * m as f64, m).unwrap(), v).unwrap()
    }

    #[test]
    fn backward_differences() {
        let f = nodes(0.5, vec![0.2; 5]);
        assert_eq!(backward_diff(&f, 2), 0.0);
        let g = build_grid(0.0, 1.0, 4).unwrap();
        let id = Field::nodes(g, g.nodes()).unwrap();
        assert_eq!(backward_diff(&id, 2), 1.0);
        assert_eq!(backward_diff(&id, 0), 0.0);
        let step = nodes(0.05, vec![0.0, 0.0, 1.0, 1.0]);
        assert!((backward_diff(&step, 2) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn classification_examples() {
        let params = RegularityParams::new(1.0, 0.0, 0.0).unwrap();
        let g = build_grid(0.0, 2.0, 8).unwrap();
        let ramp = Field::nodes(g, g.nodes().iter().map(|x| 0.5 * x).collect()).unwrap();
        assert_eq!(classify_node(&ramp, 4, &params), 1);
        let jump = nodes(0.05, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let params = RegularityParams::new(8.0, 0.0, 0.0).unwrap();
        assert_eq!(classify_node(&jump, 3, &params), 0);
        // neighbours of the jump see an incompatible zero slope
        assert_eq!(classify_node(&jump, 2, &params), 0);
        let zero = nodes(0.1, vec![0.0; 6]);
        assert!(classify(&zero, &params).values().iter().all(|&s| s == 1));
    }

    #[test]
    fn smooth_extremum_needs_flat_tolerance() {
        let g = build_grid(-1.0, 1.0, 40).unwrap();
        let bump = Field::nodes(g, g.nodes().iter().map(|x| 1.0 - x * x).collect()).unwrap();
        let interior_singular = |params: &RegularityParams| {
            let sigma = classify(&bump, params);
            (5..36).filter(|&j| !sigma.is_regular(j)).count()
        };
        let strict = RegularityParams::new(3.0, 0.0, 0.0).unwrap();
        assert_eq!(interior_singular(&strict), 2);
        let tolerant = RegularityParams::from_slope_bound(2.0, 0.5).unwrap();
        assert_eq!(interior_singular(&tolerant), 0);
    }

    #[test]
    fn projections() {
        assert_eq!(project_sl(0.4, 0.6), 0.5);
        assert_eq!(project_sl(0.3, 0.3), 0.3);
        assert_eq!(project_ub(0.0, 1.0), 0.5);
        let (a, b, c) = (0.1, 0.9, 0.4);
        let round_trip = project_sl(project_ub(a, b), project_ub(b, c));
        assert!((round_trip - (a + 2.0 * b + c) / 4.0).abs() < 1e-15);
        assert!(round_trip >= a.min(b).min(c) && round_trip <= a.max(b).max(c));
    }

    #[test]
    fn fill_uses_adjacent_cells() {
        let g = build_grid(0.0, 4.0, 4).unwrap();
        let w = Field::nodes(g, vec![0.0, 0.0, 9.0, 0.0, 0.0]).unwrap();
        let w_bar = Field::cells(g, vec![0.0, 0.2, 0.8, 0.0]).unwrap();
        let sigma = SigmaField::new(vec![1, 1, 0, 1, 1]).unwrap();
        let state = CoupledState::from_parts(w.clone(), w_bar.clone(), sigma.clone(), sigma, vec![true; 4]).unwrap();
        let filled = fill_holes(&state);
        assert_eq!(filled.w.values(), &[0.0, 0.0, 0.5, 0.0, 0.0]);
        assert_eq!(filled.synthesized, 0);
        let regular = SigmaField::filled(5, true);
        let state = CoupledState::from_parts(w, w_bar, regular.clone(), regular, vec![true; 4]).unwrap();
        assert_eq!(fill_holes(&state).w, state.w);
    }

    #[test]
    fn fill_synthesizes_stale_cells() {
        let g = build_grid(0.0, 4.0, 4).unwrap();
        let w = Field::nodes(g, vec![0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let w_bar = Field::cells(g, vec![0.0, 7.0, 7.0, 1.0]).unwrap();
        let sigma = SigmaField::new(vec![1, 1, 0, 1, 1]).unwrap();
        let state =
            CoupledState::from_parts(w, w_bar, sigma.clone(), sigma, vec![true, false, false, true]).unwrap();
        let filled = fill_holes(&state);
        assert_eq!(filled.synthesized, 2);
        assert_eq!(filled.w.values()[2], 0.75);
    }

    fn scheme(m: usize, nu: f64, params: RegularityParams) -> CoupledScheme {
        let cn = CourantNumbers::uniform(Alignment::CellCentered, m, nu, nu).unwrap();
        CoupledScheme::new(SlUpdate::Courant(nu), cn, params).unwrap()
    }

    #[test]
    fn regular_everywhere_is_semi_lagrangian() {
        let g = build_grid(-1.0, 1.0, 30).unwrap();
        let w = Field::nodes(g, g.nodes().iter().map(|x| (1.0 - x * x).powi(2)).collect()).unwrap();
        let w_bar = init_cell_averages(g, &|x: f64| (1.0 - x * x).powi(2)).unwrap();
        let params = RegularityParams::always_regular();
        let state = CoupledState::new(w.clone(), w_bar, &params).unwrap();
        let next = scheme(30, 0.7, params).step(&state).unwrap();
        assert_eq!(next.w, crate::sl::sl_advection_step(&w, 0.7).unwrap());
    }

    #[test]
    fn singular_everywhere_is_ultra_bee() {
        let g = build_grid(-1.0, 1.0, 30).unwrap();
        let ic = |x: f64| if x.abs() < 0.4 { 1.0 } else { 0.0 };
        let w = init_point_values(g, &ic).unwrap();
        let w_bar = init_cell_averages(g, &ic).unwrap();
        let params = RegularityParams::always_singular();
        let mut state = CoupledState::new(w, w_bar.clone(), &params).unwrap();
        let s = scheme(30, 0.35, params);
        let cn = CourantNumbers::uniform(Alignment::CellCentered, 30, 0.35, 0.35).unwrap();
        let mut u = w_bar;
        for _ in 0..10 {
            state = s.step(&state).unwrap();
            u = ub_step(&u, &cn).unwrap();
        }
        assert_eq!(state.w_bar, u);
    }

    #[test]
    fn constant_data_stays_constant() {
        let g = build_grid(0.0, 1.0, 12).unwrap();
        let params = RegularityParams::new(0.5, 0.0, 0.0).unwrap();
        let w = Field::constant(g, Alignment::NodeCentered, 0.3).unwrap();
        let w_bar = Field::constant(g, Alignment::CellCentered, 0.3).unwrap();
        // force a mixed σ pattern to exercise switching and filling
        let sigma = SigmaField::new((0..13).map(|j| (j % 3 != 0) as u8).collect()).unwrap();
        let prev = SigmaField::new((0..13).map(|j| (j % 2) as u8).collect()).unwrap();
        let state = CoupledState::from_parts(w, w_bar, sigma, prev, vec![false; 12]).unwrap();
        let next = scheme(12, -0.6, params).step(&state).unwrap();
        assert!(next.w.values().iter().all(|&v| v == 0.3));
        assert_eq!(next.sigma.singular_count(), 0);
    }

    #[test]
    fn mixed_data_uses_both_schemes() {
        let problem = ProblemSpec::named("adv-mix").unwrap();
        let grid = problem.grid(100).unwrap();
        let params = RegularityParams::for_problem(&problem, problem.t_final).unwrap();
        let state = CoupledState::initial(&problem, grid, &params).unwrap();
        let part = RegionPartition::from_sigma(&state.sigma);
        assert!(!part.singular_nodes.is_empty() && !part.regular_nodes.is_empty());
        // the smooth bump on (−1, 1) is regular, the plateau edges are not
        for j in part.singular_nodes.iter().copied() {
            let x = grid.node(j);
            assert!(x < -1.0 || x > 1.0, "singular node at {x}");
        }
        assert!(part.singular_nodes.iter().any(|&j| (grid.node(j) - 2.0).abs() < 0.1));
    }
}
