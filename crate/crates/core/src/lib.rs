//! XP stabilizer codes and Quantum Lego constructions.
//!
//! The crate is layered bottom-up: [`ring_linalg`] (exact linear algebra over
//! residue rings), [`xp`] (the XP group law), [`code`] (canonical forms and
//! code structure), [`lego`] (tensor contraction by operator matching),
//! [`dense`] (state-vector oracle), [`enumerator`] (weight enumerators),
//! [`decoder`] (syndrome extraction and maximum-likelihood decoding),
//! [`registry`] / [`io`] for named codes and file formats, and [`verify`]
//! for the invariant suites.

pub mod code;
pub mod decoder;
pub mod dense;
pub mod enumerator;
pub mod error;
pub mod io;
pub mod lego;
pub mod registry;
pub mod ring_linalg;
pub mod verify;
pub mod xp;

pub use code::{LegRole, XpGroup};
pub use error::{Error, Result};
pub use lego::Lego;
pub use xp::XpOperator;
