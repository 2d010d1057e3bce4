//! An exact engine for comparing infinite worlds.
//!
//! Worlds are sequences of lives presented in closed form; the engine
//! derives utility streams over three kinds of locations (points in
//! time, specific people, and birth slots read de dicto), runs a
//! catalogue of betterness criteria on them with exact rational
//! arithmetic, and reports every verdict, conflict, and disagreement.

pub mod corpus;
pub mod criteria;
pub mod error;
pub mod oracle;
pub mod rat;
pub mod schedule;
pub mod stream;
pub mod world;
pub mod worldspec;

pub use error::{Error, Result};
pub use rat::{ExtRat, Rat};
pub use stream::{ExpPeriodicStream, SignProfile, SumClass, SumPart};
pub use world::{LocationView, World};
