//! Coupled semi-Lagrangian / Ultra-Bee schemes for one-dimensional advection
//! and Hamilton-Jacobi equations.
//!
//! The semi-Lagrangian scheme works on node values and is accurate where the
//! solution is smooth. The Ultra-Bee scheme works on cell averages and
//! transports discontinuities without smearing them. The coupled scheme
//! classifies every node at every step and uses whichever fits.
//!
//! ```
//! use hjcouple::experiment::{Experiment, SchemeKind};
//! use hjcouple::problems::ProblemSpec;
//!
//! let problem = ProblemSpec::named("adv-jump").unwrap();
//! let run = Experiment::new(problem, SchemeKind::Coupled, 79).unwrap().run().unwrap();
//! assert!(run.errors.l1 < 0.05);
//! ```

pub mod coupling;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod problems;
pub mod sl;
pub mod ub;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/grids.md")]
mod book_grids {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/semi_lagrangian.md")]
mod book_semi_lagrangian {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/ultra_bee.md")]
mod book_ultra_bee {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/coupling.md")]
mod book_coupling {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/problems.md")]
mod book_problems {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/diagnostics.md")]
mod book_diagnostics {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
