//! Built-in test problems, initial data and exact solutions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{mean_over, Grid1D, Profile};
use crate::sl::{legendre_transform, ControlSet, Hamiltonian, PSearch, SlUpdate};
use crate::ub::{cfl_check_cells, CourantNumbers, Velocity, VelocityPair};

/// `(1 − x²)^4` on `|x| ≤ 1`, else 0.
pub fn ic_smooth(x: f64) -> f64 {
    if x.abs() <= 1.0 {
        (1.0 - x * x).powi(4)
    } else {
        0.0
    }
}

/// Indicator of `[−1, 1]`.
pub fn ic_jump(x: f64) -> f64 {
    if x.abs() <= 1.0 {
        1.0
    } else {
        0.0
    }
}

/// A hat on `(−4, −2)`, the smooth bump on `(−1, 1)` and a plateau on `(2, 3)`.
pub fn ic_mix(x: f64) -> f64 {
    if x > -4.0 && x < -2.0 {
        1.0 - (x + 3.0).abs()
    } else if x > -1.0 && x < 1.0 {
        (1.0 - x * x).powi(4)
    } else if x > 2.0 && x < 3.0 {
        1.0
    } else {
        0.0
    }
}

/// `max(0, 1 − 16(x − 1/4)²)²`.
pub fn ic_smooth_var(x: f64) -> f64 {
    let s = x - 0.25;
    (1.0 - 16.0 * s * s).max(0.0).powi(2)
}

/// Built-in initial profiles with their breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialData {
    Smooth,
    Jump,
    Mix,
    SmoothVar,
}

impl Profile for InitialData {
    fn value(&self, x: f64) -> f64 {
        match self {
            InitialData::Smooth => ic_smooth(x),
            InitialData::Jump => ic_jump(x),
            InitialData::Mix => ic_mix(x),
            InitialData::SmoothVar => ic_smooth_var(x),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            InitialData::Smooth | InitialData::Jump => vec![-1.0, 1.0],
            InitialData::Mix => vec![-4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0],
            InitialData::SmoothVar => vec![0.0, 0.5],
        }
    }

    fn exact_mean(&self, lo: f64, hi: f64) -> Option<f64> {
        match self {
            InitialData::Jump => Some(overlap(lo, hi, -1.0, 1.0) / (hi - lo)),
            _ => None,
        }
    }
}

fn overlap(lo: f64, hi: f64, a: f64, b: f64) -> f64 {
    if lo >= a && hi <= b {
        return hi - lo;
    }
    (hi.min(b) - lo.max(a)).max(0.0)
}

/// `ic(x − c·t)`.
pub fn exact_advection_const<P: Profile + ?Sized>(ic: &P, c: f64, x: f64, t: f64) -> f64 {
    ic.value(x - c * t)
}

/// Exact solution of `u_t − (x − x̄) u_x = 0`: `ic(x̄ + (x − x̄)·e^t)`.
pub fn exact_advection_linear_velocity<P: Profile + ?Sized>(ic: &P, x_bar: f64, x: f64, t: f64) -> f64 {
    ic.value(x_bar + (x - x_bar) * t.exp())
}

/// Samples used by [`hopf_lax_oracle`] when none is given.
pub const HOPF_LAX_SAMPLES: usize = 2001;

/// `min ic(y)` over `|y − x| ≤ c·t`: the solution of `v_t + |c·v_x| = 0`.
///
/// Dense sampling followed by a ternary search around the best sample.
pub fn hopf_lax_oracle<P: Profile + ?Sized>(ic: &P, c: f64, x: f64, t: f64, n_samples: usize) -> f64 {
    let radius = c.abs() * t;
    if radius == 0.0 {
        return ic.value(x);
    }
    let n = n_samples.max(101);
    let (lo, hi) = (x - radius, x + radius);
    let h = (hi - lo) / (n - 1) as f64;
    let sample = |k: usize| if k == n - 1 { hi } else { lo + k as f64 * h };
    let (k_best, mut best) = (0..n)
        .map(|k| (k, ic.value(sample(k))))
        .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
    let (mut a, mut b) = (sample(k_best.saturating_sub(1)), sample((k_best + 1).min(n - 1)));
    for _ in 0..100 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if ic.value(m1) < ic.value(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    best = best.min(ic.value(0.5 * (a + b)));
    best
}

/// Radius of the excluded balls, in cells, when none is given.
pub const DEFAULT_REG_RADIUS_CELLS: f64 = 3.0;

/// Points where the exact solution or its derivative jumps, with the radius
/// of the balls excluded from the regular-region norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPointSet {
    pub points: Vec<f64>,
    pub radius: f64,
}

impl SingularPointSet {
    pub fn empty() -> Self {
        Self { points: Vec::new(), radius: 0.0 }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether `x` lies in one of the closed excluded balls.
    pub fn excludes(&self, x: f64) -> bool {
        self.points.iter().any(|p| (x - p).abs() <= self.radius)
    }
}

#[derive(Clone)]
pub enum EquationKind {
    /// `u_t + c u_x = 0`.
    AdvectionConst(f64),
    /// `u_t + c(x) u_x = 0`; `x_bar` set when `c(x) = −(x − x̄)`.
    AdvectionVar { velocity: Velocity, max_speed: f64, x_bar: Option<f64> },
    /// `v_t + |c v_x| = 0`, i.e. velocities `−c` and `c`.
    HamiltonJacobi(f64),
}

impl fmt::Debug for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquationKind::AdvectionConst(c) => write!(f, "AdvectionConst({c})"),
            EquationKind::AdvectionVar { max_speed, x_bar, .. } => {
                write!(f, "AdvectionVar {{ max_speed: {max_speed}, x_bar: {x_bar:?} }}")
            }
            EquationKind::HamiltonJacobi(c) => write!(f, "HamiltonJacobi({c})"),
        }
    }
}

/// Names accepted by [`ProblemSpec::named`].
pub const PROBLEM_NAMES: [&str; 5] = ["adv-smooth", "adv-jump", "adv-mix", "adv-var", "hj-abs"];

/// A complete test case: equation, data, domain and default experiment settings.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub summary: String,
    pub kind: EquationKind,
    pub ic: InitialData,
    pub domain: (f64, f64),
    pub t_final: f64,
    pub nu: f64,
    /// Speed used to turn the Courant target into a time step.
    pub reference_speed: f64,
    /// Default refinement ladder (cell counts).
    pub ladder: Vec<usize>,
    /// Lipschitz bound of the smooth part of the initial data.
    pub slope_bound: f64,
    /// Growth rate `r` of that bound along the flow: `L(t) = L·e^{r·t}`.
    pub slope_growth: f64,
}

const LADDER_1: [usize; 6] = [19, 39, 79, 159, 319, 639];
const LADDER_2: [usize; 5] = [100, 200, 400, 800, 1600];
/// Max of `|d/dx (1 − x²)^4|`, attained at `x = 1/√7`.
const SMOOTH_SLOPE: f64 = 1.904_147_549_154_357;
/// Max of `|d/dx ic_smooth_var|`, attained at `x − 1/4 = 1/√48`.
const SMOOTH_VAR_SLOPE: f64 = 6.158_402_871_356_008;

impl ProblemSpec {
    pub fn named(name: &str) -> Result<Self> {
        let base = |name: &str, summary: &str, kind, ic, slope_bound| Self {
            name: name.to_string(),
            summary: summary.to_string(),
            kind,
            ic,
            domain: (-2.0, 2.0),
            t_final: 2.0,
            nu: 0.9,
            reference_speed: 1.0,
            ladder: LADDER_1.to_vec(),
            slope_bound,
            slope_growth: 0.0,
        };
        let spec = match name {
            "adv-smooth" => base(
                name,
                "u_t + u_x = 0 with the C3 bump (1-x^2)^4",
                EquationKind::AdvectionConst(1.0),
                InitialData::Smooth,
                SMOOTH_SLOPE,
            ),
            "adv-jump" => base(
                name,
                "u_t + u_x = 0 with the indicator of [-1,1]",
                EquationKind::AdvectionConst(1.0),
                InitialData::Jump,
                0.0,
            ),
            "adv-mix" => Self {
                domain: (-4.5, 4.5),
                t_final: 6.0,
                nu: 1.0 / 12.0,
                reference_speed: 0.1,
                ladder: LADDER_2.to_vec(),
                ..base(
                    name,
                    "u_t + 0.1 u_x = 0 with a hat, the smooth bump and a plateau",
                    EquationKind::AdvectionConst(0.1),
                    InitialData::Mix,
                    SMOOTH_SLOPE,
                )
            },
            "adv-var" => {
                let x_bar = 1.1;
                Self {
                    domain: (0.0, 1.0),
                    t_final: 1.0,
                    nu: 0.6,
                    slope_growth: 1.0,
                    ..base(
                        name,
                        "u_t - (x - 1.1) u_x = 0 with a narrow smooth bump",
                        EquationKind::AdvectionVar {
                            velocity: Arc::new(move |x| -(x - x_bar)),
                            max_speed: x_bar,
                            x_bar: Some(x_bar),
                        },
                        InitialData::SmoothVar,
                        SMOOTH_VAR_SLOPE,
                    )
                }
            }
            "hj-abs" => Self {
                t_final: 0.5,
                nu: 0.6,
                ..base(
                    name,
                    "v_t + |v_x| = 0 with the smooth bump; a kink forms at x = 0",
                    EquationKind::HamiltonJacobi(1.0),
                    InitialData::Smooth,
                    SMOOTH_SLOPE,
                )
            },
            other => return Err(Error::UnknownProblem(other.to_string())),
        };
        Ok(spec)
    }

    pub fn all() -> Vec<Self> {
        PROBLEM_NAMES.iter().map(|n| Self::named(n).expect("registered")).collect()
    }

    pub fn grid(&self, m: usize) -> Result<Grid1D> {
        Grid1D::new(self.domain.0, self.domain.1, m)
    }

    /// Largest velocity magnitude on the domain.
    pub fn max_speed(&self) -> f64 {
        match &self.kind {
            EquationKind::AdvectionConst(c) | EquationKind::HamiltonJacobi(c) => c.abs(),
            EquationKind::AdvectionVar { max_speed, .. } => *max_speed,
        }
    }

    /// Slope bound of the exact solution's smooth part over `[0, t]`.
    pub fn slope_bound_until(&self, t: f64) -> f64 {
        self.slope_bound * (self.slope_growth * t).exp()
    }

    pub fn velocity_pair(&self) -> VelocityPair {
        match &self.kind {
            EquationKind::AdvectionConst(c) => VelocityPair::constant(*c),
            EquationKind::AdvectionVar { velocity, .. } => VelocityPair::single(velocity.clone()),
            EquationKind::HamiltonJacobi(c) => VelocityPair::symmetric(*c),
        }
    }

    /// The semi-Lagrangian node update for step `dt`.
    pub fn sl_update(&self, grid: &Grid1D, dt: f64) -> Result<SlUpdate> {
        match &self.kind {
            EquationKind::AdvectionConst(c) => {
                let nu = c * dt / grid.dx();
                if !(nu.abs() <= 1.0 + 1e-12) {
                    return Err(Error::Cfl { x: grid.a(), nu: nu.abs() });
                }
                SlUpdate::courant(nu.clamp(-1.0, 1.0))
            }
            EquationKind::AdvectionVar { velocity, .. } => SlUpdate::characteristics(grid, velocity.as_ref(), dt),
            EquationKind::HamiltonJacobi(c) => {
                let controls = ControlSet::symmetric(c.abs())?;
                let table = legendre_transform(&Hamiltonian::AbsValue(*c), &controls, PSearch::default())?;
                SlUpdate::hopf_lax(&table, dt)
            }
        }
    }

    /// Cell-center Courant numbers for the Ultra-Bee update.
    pub fn ub_courant(&self, grid: &Grid1D, dt: f64) -> Result<CourantNumbers> {
        cfl_check_cells(&self.velocity_pair(), grid, dt)
    }

    /// Exact solution at `(x, t)`.
    pub fn exact(&self, x: f64, t: f64) -> f64 {
        match &self.kind {
            EquationKind::AdvectionConst(c) => exact_advection_const(&self.ic, *c, x, t),
            EquationKind::AdvectionVar { x_bar: Some(x_bar), .. } => {
                exact_advection_linear_velocity(&self.ic, *x_bar, x, t)
            }
            EquationKind::AdvectionVar { velocity, .. } => {
                self.ic.value(trace_back(velocity.as_ref(), x, t))
            }
            EquationKind::HamiltonJacobi(c) => hopf_lax_oracle(&self.ic, *c, x, t, HOPF_LAX_SAMPLES),
        }
    }

    /// Points where the exact solution at time `t` is not smooth.
    fn breakpoints_at(&self, t: f64) -> Vec<f64> {
        let initial = self.ic.breakpoints();
        match &self.kind {
            EquationKind::AdvectionConst(c) => initial.iter().map(|p| p + c * t).collect(),
            EquationKind::AdvectionVar { x_bar: Some(x_bar), .. } => {
                initial.iter().map(|p| x_bar + (p - x_bar) * (-t).exp()).collect()
            }
            EquationKind::AdvectionVar { .. } => Vec::new(),
            EquationKind::HamiltonJacobi(c) => {
                let r = (1.0 - c.abs() * t).max(0.0);
                vec![-r, 0.0, r]
            }
        }
    }

    /// Exact mean of the solution at time `t` over `[lo, hi]`.
    pub fn exact_mean(&self, lo: f64, hi: f64, t: f64) -> f64 {
        mean_over(&AtTime { problem: self, t }, lo, hi)
    }

    /// Singular points at time `t` with exclusion radius `radius`.
    ///
    /// Transported breakpoints are kept even once they leave the domain.
    pub fn singular_points(&self, t: f64, radius: f64) -> SingularPointSet {
        let points = match (&self.kind, self.ic) {
            (EquationKind::AdvectionConst(c), InitialData::Jump) => vec![-1.0 + c * t, 1.0 + c * t],
            (EquationKind::AdvectionConst(c), InitialData::Mix) => {
                [-4.0, -3.0, -2.0, 2.0, 3.0].iter().map(|p| p + c * t).collect()
            }
            (EquationKind::HamiltonJacobi(_), _) if t > 0.0 => vec![0.0],
            _ => Vec::new(),
        };
        SingularPointSet { points, radius }
    }
}

/// Alias for [`ProblemSpec::singular_points`] with the default radius of three cells.
pub fn singular_points(problem: &ProblemSpec, t: f64, dx: f64) -> SingularPointSet {
    problem.singular_points(t, DEFAULT_REG_RADIUS_CELLS * dx)
}

struct AtTime<'a> {
    problem: &'a ProblemSpec,
    t: f64,
}

impl Profile for AtTime<'_> {
    fn value(&self, x: f64) -> f64 {
        self.problem.exact(x, self.t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.problem.breakpoints_at(self.t)
    }

    fn exact_mean(&self, lo: f64, hi: f64) -> Option<f64> {
        match self.problem.kind {
            EquationKind::AdvectionConst(c) => {
                let s = c * self.t;
                self.problem.ic.exact_mean(lo - s, hi - s)
            }
            _ => None,
        }
    }
}

/// Backward characteristic foot of `x` after time `t` (RK4, 200 substeps).
fn trace_back(c: &(dyn Fn(f64) -> f64 + Send + Sync), x: f64, t: f64) -> f64 {
    let n = 200;
    let h = -t / n as f64;
    (0..n).fold(x, |y, _| {
        let k1 = c(y);
        let k2 = c(y + 0.5 * h * k1);
        let k3 = c(y + 0.5 * h * k2);
        let k4 = c(y + h * k3);
        y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    })
}
