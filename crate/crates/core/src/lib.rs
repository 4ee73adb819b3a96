//! Discrete-time quantum walk engine for arbitrary undirected simple graphs.
//!
//! The crate implements two standard formulations of the discrete-time walk
//! and the exact unitary bridge between them:
//!
//! * the **coin picture** ([`coin::CoinWalkOperator`]): amplitudes live on
//!   (node, port) pairs and one step applies a per-node unitary "coin"
//!   followed by a shift permutation along the edges;
//! * the **scattering picture** ([`scattering::ScatteringWalkOperator`]):
//!   amplitudes live on directed edge states "incoming to a node along a
//!   port" and one step scatters each of them into all outgoing directions
//!   of that node through a per-node unitary matrix.
//!
//! Both pictures share the same basis bookkeeping, provided by
//! [`graph::PortedGraph`]: each node `j` numbers its incident edges with
//! ports `1..=degree(j)`, and the directed state space is the set of all
//! (node, port) pairs. The [`equivalence`] module builds the basis
//! permutation intertwining the two evolutions, converts coefficient
//! families between the pictures, and verifies the conjugation identity
//! numerically. The [`measure`] module turns states into node or edge
//! probability distributions, natively or across pictures.
//!
//! All numerics are generic over the floating-point scalar through
//! [`scalar::WalkFloat`] (implemented for `f32` and `f64`); concrete
//! aliases for the common `f64` instantiation are re-exported at the crate
//! root. Evolution is applied sparsely in `O(Σ degree²)` per step; dense
//! matrices are materialized only on demand and are capped by
//! [`DEFAULT_DENSE_CAP`] unless a caller overrides the cap.
//!
//! # Example
//!
//! Ten steps of the balanced-coin walk on a 64-cycle, read out as node
//! probabilities:
//!
//! ```
//! use qwalk::coin::CoinWalkOperator;
//! use qwalk::fixtures::cycle_graph;
//! use qwalk::graph::ShiftPermutation;
//! use qwalk::measure::node_distribution;
//! use qwalk::state::WalkState;
//! use qwalk::unitary::{BuiltinUnitary, LocalUnitaryFamily, WalkModel};
//!
//! fn main() -> qwalk::Result<()> {
//!     let graph = cycle_graph(64);
//!     let shift = ShiftPermutation::flip_flop(&graph);
//!     let coins = LocalUnitaryFamily::<f64>::uniform(
//!         &graph, WalkModel::Coin, BuiltinUnitary::Hadamard)?;
//!     let walk = CoinWalkOperator::new(graph.clone(), shift, coins)?;
//!
//!     let mut psi = WalkState::basis_state(graph.dim(), graph.basis_index(0, 1)?)?;
//!     for _ in 0..10 {
//!         psi = walk.step(&psi)?;
//!     }
//!     for &(label, p) in node_distribution(&psi, &graph)?.entries() {
//!         if p > 1e-12 {
//!             println!("{label}: {p:.6}");
//!         }
//!     }
//!     Ok(())
//! }
//! ```

pub mod coin;
pub mod dense;
pub mod equivalence;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod measure;
pub mod scalar;
pub mod scattering;
pub mod state;
pub mod unitary;

pub use error::{Error, Result};
pub use scalar::WalkFloat;

/// Largest Hilbert-space dimension for which dense matrices are
/// materialized by default; larger operators must be handled sparsely or
/// with an explicit cap override.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Double-precision complex amplitude.
pub type Amplitude64 = num_complex::Complex<f64>;
/// Single-precision complex amplitude.
pub type Amplitude32 = num_complex::Complex<f32>;
/// Double-precision walk state.
pub type StateF64 = state::WalkState<f64>;
/// Single-precision walk state.
pub type StateF32 = state::WalkState<f32>;
/// Double-precision per-node unitary family.
pub type UnitaryFamilyF64 = unitary::LocalUnitaryFamily<f64>;
/// Single-precision per-node unitary family.
pub type UnitaryFamilyF32 = unitary::LocalUnitaryFamily<f32>;
/// Double-precision coin-picture evolution operator.
pub type CoinWalkF64 = coin::CoinWalkOperator<f64>;
/// Single-precision coin-picture evolution operator.
pub type CoinWalkF32 = coin::CoinWalkOperator<f32>;
/// Double-precision scattering-picture evolution operator.
pub type ScatteringWalkF64 = scattering::ScatteringWalkOperator<f64>;
/// Single-precision scattering-picture evolution operator.
pub type ScatteringWalkF32 = scattering::ScatteringWalkOperator<f32>;
/// Double-precision dense complex matrix.
pub type MatrixF64 = dense::CMatrix<f64>;
/// Single-precision dense complex matrix.
pub type MatrixF32 = dense::CMatrix<f32>;
