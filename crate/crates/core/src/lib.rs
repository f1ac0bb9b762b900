//! Numerical core: hydrogen eigenstate quadratures, nonlinear amplitude
//! transfer between atoms, advanced/retarded handshake fields, phasor path
//! sums and coincidence-experiment models.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod fields;
pub mod io;
pub mod ode;
pub mod paths;
pub mod quadrature;
pub mod states;

pub use constants::PhysicalConstants;
pub use dynamics::{CascadeScenario, CompetitionScenario, Trajectory, TwoAtomScenario};
pub use error::{Error, Result};
pub use experiments::{EmitterStream, HbtGeometry, PolarimeterPair};
pub use fields::{FieldGrid, GridSpec, HandshakeFieldConfig};
pub use paths::{PathEnsemble, PhasorResultant};
pub use states::{EigenState, QuadratureSpec, StateLabel, SuperpositionState};
