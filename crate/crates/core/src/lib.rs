//! Hybrid feedback for navigating around a single spherical obstacle in `Rⁿ`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: cones, half-spaces, reflectors and planes.
//! * [`world`]: the obstacle, shadow regions and scenario parameters.
//! * [`controller`]: virtual destinations, the continuous baseline law and the
//!   three-mode hybrid controller.
//! * [`sim`]: hybrid-time integration of the closed loop.
//! * [`analysis`]: path length, shortest-path reference, trajectory checks.
//! * [`cli`]: scenario files and the command-line verbs.

pub mod analysis;
pub mod cli;
pub mod controller;
pub mod error;
pub mod geometry;
pub mod sim;
pub mod world;

pub use controller::{
    baseline_control, design_phi, select_virtual_destinations, HybridController, HybridState, Mode, VirtualDestinations,
};
pub use error::{Error, Result};
pub use geometry::{vector, VectorN};
pub use sim::{simulate, simulate_baseline, simulate_with, RunStatus, SimConfig, Trajectory};
pub use world::{Obstacle, Scenario, Shadow};
