//! Scattering-picture evolution: each amplitude incoming to a node is
//! redistributed over that node's outgoing directions by its unitary
//! scattering block (diagonal entries reflect, off-diagonal entries
//! transmit).

use std::sync::Arc;

use num_complex::Complex;

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::graph::{same_graph, PortedGraph};
use crate::scalar::WalkFloat;
use crate::state::WalkState;
use crate::unitary::{LocalUnitaryFamily, WalkModel};
use crate::DEFAULT_DENSE_CAP;

/// One-step scattering-picture evolution operator. Basis index `(j, σ)` is
/// read as "incoming to node `j` along its port `σ`"; one step maps it to
/// the superposition over `α` of `Γ^(j)[α, σ]` times the state incoming to
/// `neighbor(j, α)` along the reciprocal port.
#[derive(Debug, Clone)]
pub struct ScatteringWalkOperator<T: WalkFloat> {
    graph: Arc<PortedGraph>,
    gammas: LocalUnitaryFamily<T>,
}

impl<T: WalkFloat> ScatteringWalkOperator<T> {
    pub fn new(graph: Arc<PortedGraph>, gammas: LocalUnitaryFamily<T>) -> Result<Self> {
        if gammas.model() != WalkModel::Scattering {
            return Err(Error::RoleMismatch {
                expected: WalkModel::Scattering.name(),
                found: gammas.model().name(),
            });
        }
        if !same_graph(&graph, gammas.graph()) {
            return Err(Error::GraphMismatch {
                context: "scattering family belongs to a different graph",
            });
        }
        Ok(Self { graph, gammas })
    }

    pub fn graph(&self) -> &Arc<PortedGraph> {
        &self.graph
    }

    pub fn gammas(&self) -> &LocalUnitaryFamily<T> {
        &self.gammas
    }

    /// One step of the scattering evolution.
    pub fn step(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        let amps = self.checked_amplitudes(state)?;
        let mut out = vec![Complex::new(T::zero(), T::zero()); amps.len()];
        for ix in 0..self.graph.node_count() {
            let node = self.graph.node_id(ix);
            let n = self.graph.degree(node).expect("node exists");
            let off = self
                .graph
                .basis_index(node, 1)
                .expect("every node has port 1");
            let block = self.gammas.block(ix);
            for alpha in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for sigma in 0..n {
                    acc += block[alpha * n + sigma] * amps[off + sigma];
                }
                // Each directed state has a unique reversal, so every
                // output slot is written exactly once across all nodes.
                out[self.graph.twin(off + alpha)] = acc;
            }
        }
        Ok(WalkState::from_raw(out))
    }

    /// One step of the adjoint evolution.
    pub fn step_adjoint(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        let amps = self.checked_amplitudes(state)?;
        let mut out = vec![Complex::new(T::zero(), T::zero()); amps.len()];
        for ix in 0..self.graph.node_count() {
            let node = self.graph.node_id(ix);
            let n = self.graph.degree(node).expect("node exists");
            let off = self
                .graph
                .basis_index(node, 1)
                .expect("every node has port 1");
            let block = self.gammas.block(ix);
            for sigma in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for alpha in 0..n {
                    acc += block[alpha * n + sigma].conj()
                        * amps[self.graph.twin(off + alpha)];
                }
                out[off + sigma] = acc;
            }
        }
        Ok(WalkState::from_raw(out))
    }

    /// Dense matrix of one step, capped at [`DEFAULT_DENSE_CAP`].
    pub fn dense(&self) -> Result<CMatrix<T>> {
        self.dense_with_cap(DEFAULT_DENSE_CAP)
    }

    /// Dense matrix of one step: column `d` is the step applied to basis
    /// state `d`.
    pub fn dense_with_cap(&self, cap: usize) -> Result<CMatrix<T>> {
        let dim = self.graph.dim();
        if dim > cap {
            return Err(Error::DenseCapExceeded { dim, cap });
        }
        let mut m = CMatrix::zeros(dim);
        for d in 0..dim {
            let column = self.step(&WalkState::basis_state(dim, d)?)?;
            for (r, &a) in column.amplitudes().iter().enumerate() {
                m.set(r, d, a);
            }
        }
        Ok(m)
    }

    fn checked_amplitudes<'a>(
        &self,
        state: &'a WalkState<T>,
    ) -> Result<&'a [Complex<T>]> {
        if state.dim() != self.graph.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.graph.dim(),
                found: state.dim(),
            });
        }
        Ok(state.amplitudes())
    }
}
