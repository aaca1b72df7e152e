//! Quantum states over the manifold of Galilean reference frames.
//!
//! The crate treats a frame change as parallel transport: exact group
//! unitaries act on spectral grid states, the flat connection of the
//! constant-section gauge is evaluated both numerically (U dU⁻¹) and in
//! closed form, and curves of frames (linear acceleration, uniform rotation)
//! produce effective Hamiltonians whose pseudo-force structure is checked by
//! split-operator wavepacket propagation.
//!
//! Modules:
//!
//! * [`grid`] — discretized position/momentum Hilbert spaces (ħ = c = 1);
//! * [`operators`] — generator actions X, P, H, K, J;
//! * [`galilei`] — group unitaries, transport words, frame coordinates;
//! * [`forms`] — operator-valued forms on finite-dimensional fibers
//!   (exterior derivative, curvature, gauge transformation, Bianchi);
//! * [`connection`] — the flat connection along group coordinates on states;
//! * [`noninertial`] — frame curves and effective Hamiltonians;
//! * [`propagate`] — Strang-split evolution and the uniform-acceleration
//!   equivalence cross-check.

pub mod cmat;
pub mod connection;
pub mod error;
mod fft;
pub mod forms;
pub mod galilei;
pub mod grid;
pub mod noninertial;
pub mod operators;
pub mod propagate;

pub use error::{Error, Result};
pub use grid::{GridSpace, Rep, StateVector};
pub use operators::Op;
