//! Coin-picture evolution: a per-node unitary mix of each node's port
//! amplitudes followed by the shift permutation along the edges.

use std::sync::Arc;

use num_complex::Complex;

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::graph::{same_graph, PortedGraph, ShiftPermutation};
use crate::scalar::WalkFloat;
use crate::state::WalkState;
use crate::unitary::{LocalUnitaryFamily, WalkModel};
use crate::DEFAULT_DENSE_CAP;

/// One-step coin-picture evolution operator `U = S · C`, where `C` is the
/// block-diagonal family of per-node coins and `S` the shift permutation.
#[derive(Debug, Clone)]
pub struct CoinWalkOperator<T: WalkFloat> {
    graph: Arc<PortedGraph>,
    shift: ShiftPermutation,
    coins: LocalUnitaryFamily<T>,
}

impl<T: WalkFloat> CoinWalkOperator<T> {
    pub fn new(
        graph: Arc<PortedGraph>,
        shift: ShiftPermutation,
        coins: LocalUnitaryFamily<T>,
    ) -> Result<Self> {
        if coins.model() != WalkModel::Coin {
            return Err(Error::RoleMismatch {
                expected: WalkModel::Coin.name(),
                found: coins.model().name(),
            });
        }
        if !same_graph(&graph, shift.graph()) {
            return Err(Error::GraphMismatch {
                context: "shift permutation belongs to a different graph",
            });
        }
        if !same_graph(&graph, coins.graph()) {
            return Err(Error::GraphMismatch {
                context: "coin family belongs to a different graph",
            });
        }
        Ok(Self {
            graph,
            shift,
            coins,
        })
    }

    pub fn graph(&self) -> &Arc<PortedGraph> {
        &self.graph
    }

    pub fn shift(&self) -> &ShiftPermutation {
        &self.shift
    }

    pub fn coins(&self) -> &LocalUnitaryFamily<T> {
        &self.coins
    }

    /// One step: coin blocks, then the shift.
    pub fn step(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        self.shift.apply(&self.coins.apply(state)?)
    }

    /// One inverse step: inverse shift, then adjoint coin blocks.
    pub fn step_adjoint(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        self.coins.apply_adjoint(&self.shift.apply_adjoint(state)?)
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
}

/// Outcome of the regular-graph factorization comparison.
#[derive(Debug, Clone)]
pub struct FactorizationReport<T> {
    pub dim: usize,
    pub max_deviation: T,
}

/// On a regular graph with one common coin block, the evolution splits
/// into (coin space) ⊗ (node space): reindexing the basis as
/// `port * node_count + node` must turn the dense step into
/// `S' · (C ⊗ I)`, where `S'` is the reindexed shift. Builds both sides
/// and reports the largest entrywise deviation.
///
/// Fails with [`Error::NotRegular`] on graphs with mixed degrees and
/// [`Error::NonUniformBlocks`] when nodes carry different coins.
pub fn tensor_factorization_check<T: WalkFloat>(
    op: &CoinWalkOperator<T>,
) -> Result<FactorizationReport<T>> {
    let graph = op.graph();
    let n = graph.node_count();
    let degrees: Vec<usize> = (0..n)
        .map(|ix| graph.degree(graph.node_id(ix)).expect("node exists"))
        .collect();
    let (min_degree, max_degree) = (
        degrees.iter().copied().min().expect("graphs are nonempty"),
        degrees.iter().copied().max().expect("graphs are nonempty"),
    );
    if min_degree != max_degree {
        return Err(Error::NotRegular {
            min_degree,
            max_degree,
        });
    }
    let deg = min_degree;
    for ix in 1..n {
        if op.coins().block(ix) != op.coins().block(0) {
            return Err(Error::NonUniformBlocks {
                node: graph.node_id(ix),
            });
        }
    }

    // Basis reindexing: factorized index (port-1) * n + node_index maps to
    // the engine index node_index * deg + (port-1).
    let dim = graph.dim();
    let map: Vec<usize> = (0..dim).map(|f| (f % n) * deg + f / n).collect();

    let stepped = op.dense()?.conjugate_by_index_map(&map)?;

    let mut shift_dense = CMatrix::zeros(dim);
    for d in 0..dim {
        shift_dense.set(
            op.shift().forward_index(d),
            d,
            Complex::new(T::one(), T::zero()),
        );
    }
    let shift_factorized = shift_dense.conjugate_by_index_map(&map)?;

    let mut coin_block = CMatrix::zeros(deg);
    for r in 0..deg {
        for c in 0..deg {
            coin_block.set(r, c, op.coins().block(0)[r * deg + c]);
        }
    }
    let expected = shift_factorized.mul(&coin_block.kron(&CMatrix::identity(n)))?;

    Ok(FactorizationReport {
        dim,
        max_deviation: stepped.max_abs_diff(&expected)?,
    })
}
