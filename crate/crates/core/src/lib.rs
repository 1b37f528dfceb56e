//! Numerical toolkit for nonorthogonality in open quantum and wave systems.
//!
//! The crate is organized around a small dense complex linear-algebra core
//! ([`linalg`]) and four physics layers built on top of it:
//!
//! * [`hamiltonian`] — construction of effective non-Hermitian Hamiltonians
//!   `H = H_herm - (i/2) Γ` (random ensembles, tight-binding chains,
//!   single-channel decay, PT-symmetric dimers, matrices loaded from JSON).
//! * [`bounds`] — overlap matrices of energy eigenstates, the
//!   Lee-Wolfenstein bound, its normalized form `ξ`, ensemble statistics of
//!   `⟨ξ⟩` versus the rank of the decay matrix, and the biorthogonal
//!   reformulation of the bound.
//! * [`quasibound`] — 1D quasibound states of piecewise-constant complex
//!   potentials (Schrödinger) and permittivity profiles (Helmholtz) with
//!   outgoing-wave conditions, volume scalar products, surface/absorption
//!   Hermitian forms, probability currents, backflow scans, and the
//!   wavenumber-form (modified) bound.
//! * [`geometry`] — Hilbert-Schmidt distance between states and
//!   (pseudo-)hyperbolic distances between complex energies on the lower
//!   half-plane, plus the distance-form and polygon-course inequalities.
//!
//! Units: `ħ = 2m = 1` for Schrödinger systems (so `E = k²` and the current
//! of a plane wave `e^{ikx}` is `2k`) and `c = 1` for Helmholtz systems (so
//! `ω = k`). All quantities are dimensionless.

pub mod bounds;
pub mod geometry;
pub mod hamiltonian;
pub mod linalg;
pub mod quasibound;
