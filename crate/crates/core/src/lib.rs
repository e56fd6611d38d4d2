//! Resource estimation for a trapped-ion fault-tolerant quantum computer.
//!
//! The forward chain runs species constants -> optics -> trap chip -> logical
//! budget. [`explorer`] adds inverse solvers, sweeps, optimisation and
//! scenario variations; [`report`] renders the result.

pub mod atomdata;
pub mod budget;
pub mod design;
pub mod error;
pub mod explorer;
pub mod optics;
pub mod pipeline;
pub mod report;
pub mod trapchip;

pub use design::{DesignConfig, DesignFile};
pub use error::{Error, Result};
pub use pipeline::{derive, DerivedDesign};
pub use report::{render_report, Report};
