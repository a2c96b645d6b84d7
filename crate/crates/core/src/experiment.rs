//! Running a problem with one of the three schemes and measuring the error.

use std::fmt;
use std::str::FromStr;

use crate::coupling::{run_scheme, CoupledScheme, CoupledState, RegularityParams, SigmaField, FLAT_FRACTION};
use crate::diagnostics::{fitted_order, observed_orders, total_variation_of, tv_monitor, ErrorReport, TVSeries};
use crate::error::{Error, Result};
use crate::grid::{init_cell_averages, init_point_values, Alignment, Field, Grid1D, TimeSpec};
use crate::problems::{singular_points, ProblemSpec};
use crate::ub::ub_step;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Sl,
    Ub,
    Coupled,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Sl, SchemeKind::Ub, SchemeKind::Coupled];

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeKind::Sl => "sl",
            SchemeKind::Ub => "ub",
            SchemeKind::Coupled => "coupled",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sl" => Ok(SchemeKind::Sl),
            "ub" => Ok(SchemeKind::Ub),
            "coupled" => Ok(SchemeKind::Coupled),
            other => Err(Error::InvalidParameter(format!("unknown scheme `{other}` (expected sl, ub or coupled)"))),
        }
    }
}

/// Optional replacements for the default regularity thresholds.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RegularityOverrides {
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
}

impl RegularityOverrides {
    /// Thresholds for `problem` run up to `t_final`.
    pub fn resolve(&self, problem: &ProblemSpec, t_final: f64) -> Result<RegularityParams> {
        let slope = problem.slope_bound_until(t_final);
        let epsilon = self.epsilon.unwrap_or(crate::coupling::DEFAULT_EPSILON);
        let delta = self.delta.unwrap_or(slope + epsilon);
        RegularityParams::new(delta, epsilon, FLAT_FRACTION * slope)
    }
}

/// One experiment: problem, scheme and resolution.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub problem: ProblemSpec,
    pub scheme: SchemeKind,
    pub m: usize,
    pub nu: f64,
    pub t_final: f64,
    pub params: RegularityParams,
    pub snapshots: Vec<usize>,
}

impl Experiment {
    /// Problem defaults for everything but the scheme and the cell count.
    pub fn new(problem: ProblemSpec, scheme: SchemeKind, m: usize) -> Result<Self> {
        let params = RegularityOverrides::default().resolve(&problem, problem.t_final)?;
        Ok(Self { nu: problem.nu, t_final: problem.t_final, problem, scheme, m, params, snapshots: Vec::new() })
    }

    pub fn grid(&self) -> Result<Grid1D> {
        self.problem.grid(self.m)
    }

    pub fn time(&self) -> Result<TimeSpec> {
        let grid = self.grid()?;
        TimeSpec::from_courant(self.t_final, self.nu, grid.dx(), self.problem.reference_speed)
    }

    pub fn run(&self) -> Result<RunOutput> {
        let grid = self.grid()?;
        let time = self.time()?;
        let dt = time.dt();
        let problem = &self.problem;
        let mut snapshots = Vec::new();
        let wanted = |n: usize| self.snapshots.contains(&n);
        let (field, tv) = match self.scheme {
            SchemeKind::Sl => {
                let update = problem.sl_update(&grid, dt)?;
                let mut w = init_point_values(grid, &problem.ic)?;
                let mut tv = vec![total_variation_of(w.values())];
                if wanted(0) {
                    snapshots.push(Snapshot { step: 0, field: w.clone(), sigma: None });
                }
                for n in 1..=time.n_steps() {
                    w = update.apply(&w)?;
                    tv.push(total_variation_of(w.values()));
                    if wanted(n) {
                        snapshots.push(Snapshot { step: n, field: w.clone(), sigma: None });
                    }
                }
                (w, tv)
            }
            SchemeKind::Ub => {
                let cn = problem.ub_courant(&grid, dt)?;
                let mut u = init_cell_averages(grid, &problem.ic)?;
                let mut tv = vec![total_variation_of(u.values())];
                if wanted(0) {
                    snapshots.push(Snapshot { step: 0, field: u.clone(), sigma: None });
                }
                for n in 1..=time.n_steps() {
                    u = ub_step(&u, &cn)?;
                    tv.push(total_variation_of(u.values()));
                    if wanted(n) {
                        snapshots.push(Snapshot { step: n, field: u.clone(), sigma: None });
                    }
                }
                (u, tv)
            }
            SchemeKind::Coupled => {
                let scheme = CoupledScheme::for_problem(problem, &grid, dt, self.params)?;
                let state = CoupledState::initial(problem, grid, &self.params)?;
                let traj = run_scheme(&scheme, state, time, &self.snapshots)?;
                snapshots = traj
                    .snapshots
                    .into_iter()
                    .map(|s| Snapshot { step: s.step, field: s.w, sigma: Some(s.sigma) })
                    .collect();
                (traj.final_state.w, traj.tv)
            }
        };
        let errors = errors_at_final_time(problem, &field, self.t_final, dt)?;
        let tv = tv_monitor(&tv, grid.b() - grid.a(), self.params.delta);
        Ok(RunOutput { grid, time, field, snapshots, tv, errors })
    }
}

/// Errors against point values (node fields) or exact cell averages (cell fields).
pub fn errors_at_final_time(problem: &ProblemSpec, field: &Field, t: f64, dt: f64) -> Result<ErrorReport> {
    let grid = field.grid();
    let points = field.points();
    let exact: Vec<f64> = match field.alignment() {
        Alignment::NodeCentered => points.iter().map(|&x| problem.exact(x, t)).collect(),
        Alignment::CellCentered => {
            (0..grid.cells()).map(|j| problem.exact_mean(grid.node(j), grid.node(j + 1), t)).collect()
        }
    };
    let sing = singular_points(problem, t, grid.dx());
    ErrorReport::from_samples(&points, field.values(), &exact, grid.dx(), dt, &sing)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub field: Field,
    /// Present for the coupled scheme.
    pub sigma: Option<SigmaField>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub grid: Grid1D,
    pub time: TimeSpec,
    /// Final node values (SL, coupled) or cell averages (UB).
    pub field: Field,
    pub snapshots: Vec<Snapshot>,
    pub tv: TVSeries,
    pub errors: ErrorReport,
}

/// One row per resolution, ordered by decreasing `dt`.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub problem: String,
    pub scheme: SchemeKind,
    pub m: Vec<usize>,
    pub rows: Vec<ErrorReport>,
}

impl ConvergenceTable {
    pub fn dx(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.dx).collect()
    }

    pub fn l1(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.l1).collect()
    }

    /// Pairwise orders of a norm selected by `norm`.
    pub fn orders(&self, norm: impl Fn(&ErrorReport) -> f64) -> Vec<f64> {
        let e: Vec<f64> = self.rows.iter().map(norm).collect();
        observed_orders(&self.dx(), &e)
    }

    /// Least-squares L1 order over the last `k` rows.
    pub fn l1_order_finest(&self, k: usize) -> f64 {
        let n = self.rows.len();
        let k = k.min(n);
        fitted_order(&self.dx()[n - k..], &self.l1()[n - k..])
    }

    /// Row with `dx` closest to `dx`.
    pub fn row_near(&self, dx: f64) -> &ErrorReport {
        self.rows
            .iter()
            .min_by(|a, b| (a.dx - dx).abs().total_cmp(&(b.dx - dx).abs()))
            .expect("table has rows")
    }
}

/// Runs `base` once per cell count in `ladder`.
pub fn convergence_table(base: &Experiment, ladder: &[usize]) -> Result<ConvergenceTable> {
    if ladder.is_empty() {
        return Err(Error::InvalidParameter("empty refinement ladder".into()));
    }
    let mut runs = Vec::with_capacity(ladder.len());
    for &m in ladder {
        let exp = Experiment { m, snapshots: Vec::new(), ..base.clone() };
        runs.push((m, exp.run()?.errors));
    }
    runs.sort_by(|a, b| b.1.dt.total_cmp(&a.1.dt));
    Ok(ConvergenceTable {
        problem: base.problem.name.clone(),
        scheme: base.scheme,
        m: runs.iter().map(|r| r.0).collect(),
        rows: runs.into_iter().map(|r| r.1).collect(),
    })
}

/// Named ladders: `ex1`..`ex4` map to the default ladders of the matching problems.
pub fn ladder_preset(name: &str) -> Option<Vec<usize>> {
    let problem = match name {
        "ex1" => "adv-smooth",
        "ex2" => "adv-mix",
        "ex3" => "adv-var",
        "ex4" => "hj-abs",
        _ => return None,
    };
    ProblemSpec::named(problem).ok().map(|p| p.ladder)
}
