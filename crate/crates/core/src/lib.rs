//! Two-part splitting symplectic integrators and the disordered quartic
//! Klein-Gordon chain they are benchmarked on.
//!
//! - [`scheme`]: schemes as coefficient sequences, the catalog, composition.
//! - [`lattice`]: Hamiltonian, exact partial flows, site energies.
//! - [`evolve`]: stepping loop with work accounting and observation hooks.
//! - [`observables`]: second moment, participation number, energy error.
//! - [`harness`]: protocol runs, calibration, order fits, benchmark tables.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coefficients;
pub mod error;
pub mod evolve;
pub mod format;
pub mod harness;
pub mod lattice;
pub mod observables;
pub mod scheme;

pub use error::{Error, Result};
pub use evolve::{evolve, step, EvolveOutcome, Integrator, Observation, SamplingPlan, WorkCounter};
pub use harness::{
    bench_suite, calibrate_tau, epsilon_scaling_probe, measure_order, run_experiment, BenchRow,
    Calibration, CalibrationOptions, ObservationRecord, OrderFit, RunConfig, RunOutput, SuiteReport,
};
pub use lattice::{flow_a, make_lattice, Lattice, State};
pub use observables::{diagnostics, Diagnostics};
pub use scheme::{catalog, catalog_scheme, validate, yoshida_compose, OrderTag, Scheme, SchemeName, Stage, StageKind};
