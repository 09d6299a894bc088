//! Photon-added state preparation by zero-click conditional measurement on a
//! lossless beam splitter.
//!
//! A signal mode prepared in `|Φ⟩` is mixed with a Fock state `|n₀⟩`. When no
//! photons are recorded in the second output port, the first output port is
//! left in the photon-added state `(â†)^{n₀} T^{n̂} |Φ⟩` (normalized). This
//! crate provides
//!
//! * closed forms for the conditional state and its probability ([`conditional`]),
//!   including the photon-added coherent ([`added_coherent`]) and squeezed-vacuum
//!   ([`added_squeezed`]) families and binomial ancilla mixtures ([`mixtures`]);
//! * an exact two-mode Fock-space oracle (per total-photon-number block
//!   exponentiation) used to validate every closed form;
//! * generic phase-space routines (quadrature distributions, Wigner and Husimi
//!   functions) computed from Fock coefficients ([`phasespace`]).
//!
//! Conventions: quadratures are `x̂ = (â + â†)/√2`, so the vacuum has variance
//! 1/2, and the Husimi function is `|⟨α|ψ⟩|²/(2π)` with `α = (x + i p)/√2`.

pub mod added_coherent;
pub mod added_squeezed;
pub mod conditional;
mod error;
pub mod fock;
pub mod io;
pub mod mixtures;
pub mod phasespace;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use conditional::{BeamSplitter, ConditionalResult, TwoModeState};
pub use error::{Error, Result};
pub use fock::{FockVector, MixtureSpec};
pub use num_complex::Complex64;
