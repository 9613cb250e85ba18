//! Self-similar N-actions on finite directed graphs and their Toeplitz
//! representations.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] and [`action`] hold the combinatorics (paths, the action
//!   `n·μ`, the restriction `n|_μ`, orbits, intertwiners).
//! * [`zappa_szep`] multiplies pairs `(μ, p)` in the Zappa–Szép product.
//! * [`atomic`] is the exact engine: representations where every generator
//!   sends a basis label to zero or to a phase times another label.
//! * [`matrix`] is the dense floating-point engine, generic over the real
//!   scalar (`f32` or `f64`).
//! * [`wold`] splits a representation into its four Wold components.
//! * [`dilation`] builds the unitary dilations and checks whether they are
//!   trivial.

pub mod action;
pub mod atomic;
pub mod dilation;
pub mod error;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod phase;
pub mod scalar;
pub mod wold;
pub mod word;
pub mod zappa_szep;

pub use action::SelfSimilarAction;
pub use atomic::AtomicRep;
pub use error::{Error, Result};
pub use graph::{Edge, Graph, Path, Vertex};
pub use phase::Phase;
pub use scalar::Real;

/// Dense representation in double precision.
pub type MatrixRep64 = matrix::MatrixRep<f64>;
/// Dense representation in single precision.
pub type MatrixRep32 = matrix::MatrixRep<f32>;
/// Complex scalar in double precision.
pub type C64 = num_complex::Complex<f64>;
/// Complex scalar in single precision.
pub type C32 = num_complex::Complex<f32>;
/// Dilation in double precision.
pub type Dilation64 = dilation::Dilation<f64>;
/// Dilation in single precision.
pub type Dilation32 = dilation::Dilation<f32>;
