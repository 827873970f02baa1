//! Simulation and design exploration for phonon-blocked
//! semiconductor–superconductor tunnel-junction cooler stages.
//!
//! The crate is organised bottom-up:
//!
//! * [`constants`], [`material`]: physical constants and superconductor presets.
//! * [`junction`]: electronic cooling power of one junction.
//! * [`phonon`]: power-law phonon heat-leak channels.
//! * [`bte`]: gray phonon Boltzmann transport in a nanowire constriction.
//! * [`stage`]: single-stage heat balance and cascades.
//! * [`sweep`], [`config`], [`output`]: design-map sweeps and their files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bte;
pub mod config;
pub mod constants;
pub mod error;
pub mod junction;
pub mod material;
pub mod output;
pub mod phonon;
pub mod quadrature;
pub mod stage;
pub mod sweep;
mod warning;

pub use error::{Error, Result};
pub use junction::{CoolingOperatingPoint, JunctionParams};
pub use material::SuperconductorMaterial;
pub use phonon::{ChannelKind, CompositeChannel, PowerLawChannel};
pub use stage::{CascadeConfig, StageConfig, StageSolution};
pub use warning::Warning;
