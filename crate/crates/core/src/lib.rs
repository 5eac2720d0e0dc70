//! Equal-area solutions of one-dimensional scalar conservation laws
//! u_t + f(u)_x = 0.
//!
//! The solution at any fixed time is built directly, without time stepping:
//! the graph of the initial condition (with vertical segments joining
//! discontinuities) is carried by the area-preserving shear
//! (x, y) -> (x + f'(y) t, y) to a generally multivalued curve, and every
//! fold is replaced by a vertical jump positioned so that the two cut-off
//! lobes have equal area. Conservation of the area under the graph is
//! therefore built into the construction, jumps obey the Rankine-Hugoniot
//! speed, and rarefaction fans appear on their own where the sheared
//! vertical segments open up.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature for embedded use. Alongside the solver it ships a
//! first-order Godunov finite-volume reference ([`godunov`]), executable
//! solution checks ([`validation`]), and shock-path extraction over a time
//! ladder ([`shock_path`]).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod flux;
pub mod geometry;
pub mod godunov;
pub mod profile;
pub mod shear;
pub mod shock_path;
pub mod solver;
pub mod validation;

pub use error::{Error, Result};
pub use flux::{rankine_hugoniot_speed, Convexity, Flux};
pub use geometry::{
    area_under_graph, chord_closed_area, lobe_area, polygon_area, triangle_signed_area, Point,
    Polyline,
};
pub use godunov::{godunov_solve, Grid1D};
pub use profile::{sample_gamma0, JumpPoint, PiecewiseProfile, Segment};
pub use shear::{apply_shear, count_x_extrema, shear_polyline, ShearedCurve};
pub use shock_path::{link_slices, sweep, MergeEvent, ShockPath, ShockPathSet};
pub use solver::{
    area_balance, epsilon_estimate, equal_area_cut, find_fold, shock_displacement_estimate,
    solve_at_time, CutOutcome, FoldBracket, Shock, SolutionCurve, SolveParams,
};
pub use validation::{l1_distance, shock_speed_fd, validate, Sampled1D, ValidationReport};
