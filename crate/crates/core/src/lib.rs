//! Winding-number fields of sampled planar Brownian loops.
//!
//! A Brownian path on `[0, 1]` is closed by the chord back to its start and
//! the integer winding number of the resulting loop is evaluated on a grid.
//! The set `D_N` of points wound around at least `N` times, weighted by
//! `2πN`, approaches the occupation measure of the path as `N` grows; the
//! modules here compute every object in that statement and the tools needed
//! to check it numerically.
//!
//! * [`sampling`]: dyadic Brownian paths, subpaths, Hölder norm.
//! * [`winding`]: loops, grids, point and scanline winding numbers.
//! * [`measures`]: threshold-set areas, test-function integrals, occupation measure.
//! * [`verify`]: the statement-level checks.
//! * [`montecarlo`]: replicated studies with deterministic streams.
//! * [`io`]: configuration, tables, PGM export and run manifests.

pub mod error;
pub mod geometry;
pub mod io;
pub mod measures;
pub mod montecarlo;
pub mod rng;
pub mod sampling;
pub mod stats;
pub mod verify;
pub mod winding;

pub use error::{Error, Result};
pub use geometry::Point;
pub use measures::{Banded, OccupationHistogram, TestFunction, ThresholdSet};
pub use sampling::{sample_bm, PlanarPath, SubpathView};
pub use verify::{EtaVariant, ParamSet, Schedule};
pub use winding::{ClosedLoop, GridSpec, WindingField};
