//! The exact unitary bridge between the two walk pictures.
//!
//! The two pictures may label the ports of the same underlying graph
//! differently. An [`EdgeLabelBijection`] records, per node, which coin
//! port names the same physical edge as each scattering port (for a simple
//! graph this alignment is unique, and derivable from the two labelings).
//!
//! On top of the alignment, the shift permutation of the coin picture
//! induces a *retagging* of each node's ports: the scattering state
//! incoming to node `j` corresponds to the coin state at `j` that the
//! shift produces when that edge's amplitude arrives. Concretely, for a
//! scattering port `σ` of node `j` aligned with coin port `φ(σ)`, the
//! retagged coin port is
//!
//! ```text
//! retag(σ; j) = target_port(w, back)   where w    = neighbor(j, φ(σ))
//!                                            back = reciprocal(j, φ(σ))
//! ```
//!
//! (all tables in coin labels). The induced basis bijection
//! `(j, σ)_scattering ↦ (j, retag(σ))_coin` is the [`EquivalenceMap`] `E`,
//! and the two evolutions are conjugate: `U_scattering = E† · U_coin · E`
//! — exactly, entry by entry — provided the coefficient families are
//! related by [`scattering_from_coin`] (which moves entries, never
//! recomputes them). [`verify_equivalence`] checks the conjugation
//! numerically, densely below a dimension cap and through randomized
//! state probes otherwise.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coin::CoinWalkOperator;
use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::graph::{same_graph, NodeId, Port, PortedGraph, ShiftPermutation};
use crate::scalar::WalkFloat;
use crate::scattering::ScatteringWalkOperator;
use crate::state::WalkState;
use crate::unitary::{LocalUnitaryFamily, WalkModel};
use crate::DEFAULT_DENSE_CAP;

/// Per-node port bijection pairing each scattering-labeling port with the
/// coin-labeling port of the same physical edge.
#[derive(Debug, Clone)]
pub struct EdgeLabelBijection {
    coin: Arc<PortedGraph>,
    scat: Arc<PortedGraph>,
    /// Per scattering basis index: the aligned coin port.
    fwd_ports: Vec<Port>,
    /// Per coin basis index: the aligned scattering port.
    inv_ports: Vec<Port>,
}

impl EdgeLabelBijection {
    /// Both pictures use the same labeling; every port aligns with itself.
    pub fn identity(graph: &Arc<PortedGraph>) -> Self {
        let ports: Vec<Port> = (0..graph.dim()).map(|d| graph.basis_label(d).1).collect();
        Self {
            coin: graph.clone(),
            scat: graph.clone(),
            fwd_ports: ports.clone(),
            inv_ports: ports,
        }
    }

    /// Derives the unique alignment between two labelings of the same
    /// simple graph: scattering port `σ` of node `j` aligns with the coin
    /// port reaching the same neighbor.
    pub fn aligned(coin: &Arc<PortedGraph>, scat: &Arc<PortedGraph>) -> Result<Self> {
        let mut tables = BTreeMap::new();
        for ix in 0..scat.node_count() {
            let j = scat.node_id(ix);
            let degree = scat.degree(j).expect("node exists");
            let coin_degree = coin.degree(j).map_err(|_| Error::EdgeSetMismatch { node: j })?;
            if coin_degree != degree {
                return Err(Error::EdgeSetMismatch { node: j });
            }
            let mut by_neighbor = BTreeMap::new();
            for port in 1..=degree {
                by_neighbor.insert(coin.neighbor(j, port).expect("port in range"), port);
            }
            let mut table = BTreeMap::new();
            for port in 1..=degree {
                let w = scat.neighbor(j, port).expect("port in range");
                let coin_port = *by_neighbor
                    .get(&w)
                    .ok_or(Error::EdgeSetMismatch { node: j })?;
                table.insert(port, coin_port);
            }
            tables.insert(j, table);
        }
        if coin.node_count() != scat.node_count() {
            let node = (0..coin.node_count())
                .map(|ix| coin.node_id(ix))
                .find(|&id| scat.node_index(id).is_err())
                .unwrap_or_default();
            return Err(Error::EdgeSetMismatch { node });
        }
        Self::with_tables(coin, scat, &tables)
    }

    /// Builds an alignment from explicit per-node tables mapping
    /// scattering ports to coin ports (unlisted ports default to
    /// themselves). Every pair must name the same physical edge and each
    /// node's table must be a bijection.
    pub fn with_tables(
        coin: &Arc<PortedGraph>,
        scat: &Arc<PortedGraph>,
        tables: &BTreeMap<NodeId, BTreeMap<Port, Port>>,
    ) -> Result<Self> {
        for &node in tables.keys() {
            scat.node_index(node)?;
        }
        let dim = scat.dim();
        let mut fwd_ports = vec![0; dim];
        let mut inv_ports = vec![0; coin.dim()];
        for ix in 0..scat.node_count() {
            let j = scat.node_id(ix);
            let degree = scat.degree(j).expect("node exists");
            if coin.degree(j).map_err(|_| Error::EdgeSetMismatch { node: j })? != degree {
                return Err(Error::EdgeSetMismatch { node: j });
            }
            let node_table = tables.get(&j);
            let mut seen = vec![false; degree];
            for port in 1..=degree {
                let coin_port = node_table
                    .and_then(|t| t.get(&port))
                    .copied()
                    .unwrap_or(port);
                if coin_port == 0 || coin_port > degree {
                    return Err(Error::PortOutOfRange {
                        node: j,
                        port: coin_port,
                        degree,
                    });
                }
                if scat.neighbor(j, port).expect("port in range")
                    != coin.neighbor(j, coin_port).expect("range checked")
                {
                    return Err(Error::NotSameEdge { node: j, port });
                }
                if seen[coin_port - 1] {
                    return Err(Error::NotBijective { node: j });
                }
                seen[coin_port - 1] = true;
                fwd_ports[scat.basis_index(j, port).expect("port in range")] = coin_port;
                inv_ports[coin.basis_index(j, coin_port).expect("range checked")] = port;
            }
        }
        Ok(Self {
            coin: coin.clone(),
            scat: scat.clone(),
            fwd_ports,
            inv_ports,
        })
    }

    pub fn coin_graph(&self) -> &Arc<PortedGraph> {
        &self.coin
    }

    pub fn scattering_graph(&self) -> &Arc<PortedGraph> {
        &self.scat
    }

    /// Coin port aligned with scattering port `port` of `node`.
    pub fn map_port(&self, node: NodeId, port: Port) -> Result<Port> {
        Ok(self.fwd_ports[self.scat.basis_index(node, port)?])
    }

    /// Scattering port aligned with coin port `port` of `node`.
    pub fn inverse_port(&self, node: NodeId, port: Port) -> Result<Port> {
        Ok(self.inv_ports[self.coin.basis_index(node, port)?])
    }
}

/// Builds a second labeling of a graph's edges from explicit per-node port
/// permutations: new port `σ` of node `j` names the edge that `base` port
/// `table[j][σ]` names (unlisted ports name their own edge). The returned
/// graph has the same edge set, and [`EdgeLabelBijection::aligned`]
/// recovers exactly the supplied permutations.
pub fn relabeled_graph(
    base: &Arc<PortedGraph>,
    tables: &BTreeMap<NodeId, BTreeMap<Port, Port>>,
) -> Result<Arc<PortedGraph>> {
    for &node in tables.keys() {
        base.node_index(node)?;
    }
    let mut ports = BTreeMap::new();
    for ix in 0..base.node_count() {
        let j = base.node_id(ix);
        let degree = base.degree(j).expect("node exists");
        let node_table = tables.get(&j);
        let mut seen = vec![false; degree];
        let mut order = Vec::with_capacity(degree);
        for port in 1..=degree {
            let base_port = node_table
                .and_then(|t| t.get(&port))
                .copied()
                .unwrap_or(port);
            if base_port == 0 || base_port > degree {
                return Err(Error::PortOutOfRange {
                    node: j,
                    port: base_port,
                    degree,
                });
            }
            if seen[base_port - 1] {
                return Err(Error::NotBijective { node: j });
            }
            seen[base_port - 1] = true;
            order.push(base.neighbor(j, base_port).expect("range checked"));
        }
        ports.insert(j, order);
    }
    PortedGraph::from_edges_with_ports(&base.edges(), &ports)
}

/// The basis bijection `E` with `E |j, σ⟩_scattering = |j, retag(σ)⟩_coin`.
#[derive(Debug, Clone)]
pub struct EquivalenceMap {
    alignment: EdgeLabelBijection,
    shift: ShiftPermutation,
    fwd: Vec<usize>,
    inv: Vec<usize>,
}

impl EquivalenceMap {
    /// Both pictures share one labeling; only the shift's retagging acts.
    pub fn identical_labelings(shift: &ShiftPermutation) -> Self {
        Self::with_alignment(shift, EdgeLabelBijection::identity(shift.graph()))
            .expect("identity alignment always matches the shift's graph")
    }

    /// Convenience over [`EdgeLabelBijection::aligned`] for a distinct
    /// scattering labeling.
    pub fn between(shift: &ShiftPermutation, scat: &Arc<PortedGraph>) -> Result<Self> {
        Self::with_alignment(shift, EdgeLabelBijection::aligned(shift.graph(), scat)?)
    }

    /// Builds `E` for a coin-picture shift and a port alignment. The shift
    /// must live on the alignment's coin graph.
    pub fn with_alignment(
        shift: &ShiftPermutation,
        alignment: EdgeLabelBijection,
    ) -> Result<Self> {
        if !same_graph(shift.graph(), alignment.coin_graph()) {
            return Err(Error::GraphMismatch {
                context: "shift and alignment use different coin graphs",
            });
        }
        let coin = alignment.coin_graph().clone();
        let scat = alignment.scattering_graph().clone();
        let dim = scat.dim();
        let mut fwd = vec![0; dim];
        let mut inv = vec![0; dim];
        let mut hit = vec![false; dim];
        #[allow(clippy::needless_range_loop)]
        for d in 0..dim {
            let (j, sigma) = scat.basis_label(d);
            let coin_port = alignment.map_port(j, sigma).expect("basis label in range");
            let w = coin.neighbor(j, coin_port).expect("aligned port in range");
            let back = coin.reciprocal(j, coin_port).expect("aligned port in range");
            let retagged = shift.target_port(w, back).expect("reciprocal in range");
            let t = coin
                .basis_index(j, retagged)
                .expect("shift targets stay within the node's range");
            if hit[t] {
                return Err(Error::NotBijective { node: j });
            }
            hit[t] = true;
            fwd[d] = t;
            inv[t] = d;
        }
        Ok(Self {
            alignment,
            shift: shift.clone(),
            fwd,
            inv,
        })
    }

    pub fn coin_graph(&self) -> &Arc<PortedGraph> {
        self.alignment.coin_graph()
    }

    pub fn scattering_graph(&self) -> &Arc<PortedGraph> {
        self.alignment.scattering_graph()
    }

    pub fn alignment(&self) -> &EdgeLabelBijection {
        &self.alignment
    }

    pub fn shift(&self) -> &ShiftPermutation {
        &self.shift
    }

    pub fn dim(&self) -> usize {
        self.fwd.len()
    }

    /// Coin basis index of scattering basis index `d`.
    pub fn forward_index(&self, d: usize) -> usize {
        self.fwd[d]
    }

    /// Scattering basis index of coin basis index `d`.
    pub fn inverse_index(&self, d: usize) -> usize {
        self.inv[d]
    }

    /// The retagged coin port for scattering state `(node, port)`.
    pub fn retagged_port(&self, node: NodeId, port: Port) -> Result<Port> {
        let d = self.scattering_graph().basis_index(node, port)?;
        Ok(self.coin_graph().basis_label(self.fwd[d]).1)
    }

    /// Applies `E`: reinterprets a scattering state as a coin state.
    pub fn apply<T: WalkFloat>(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        let amps = state.amplitudes();
        let mut out = vec![Complex::new(T::zero(), T::zero()); amps.len()];
        for (d, &a) in amps.iter().enumerate() {
            out[self.fwd[d]] = a;
        }
        Ok(WalkState::from_raw(out))
    }

    /// Applies `E†`: reinterprets a coin state as a scattering state.
    pub fn apply_adjoint<T: WalkFloat>(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        let amps = state.amplitudes();
        let mut out = vec![Complex::new(T::zero(), T::zero()); amps.len()];
        for (d, &a) in amps.iter().enumerate() {
            out[self.inv[d]] = a;
        }
        Ok(WalkState::from_raw(out))
    }

    /// Dense 0/1 permutation matrix of `E`.
    pub fn dense<T: WalkFloat>(&self) -> CMatrix<T> {
        let mut e = CMatrix::zeros(self.dim());
        for (d, &t) in self.fwd.iter().enumerate() {
            e.set(t, d, Complex::new(T::one(), T::zero()));
        }
        e
    }
}

/// Converts a coin family into the scattering family that makes the two
/// evolutions exactly conjugate under the map's `E`: the scattering block
/// entry at (row `α`, column `σ`) is the coin block entry at (row
/// `align(α)`, column `retag(σ)`). Entries are moved, never recomputed, so
/// unitary inputs yield bitwise-unitary outputs.
pub fn scattering_from_coin<T: WalkFloat>(
    coins: &LocalUnitaryFamily<T>,
    map: &EquivalenceMap,
) -> Result<LocalUnitaryFamily<T>> {
    if coins.model() != WalkModel::Coin {
        return Err(Error::RoleMismatch {
            expected: WalkModel::Coin.name(),
            found: coins.model().name(),
        });
    }
    if !same_graph(coins.graph(), map.coin_graph()) {
        return Err(Error::GraphMismatch {
            context: "coin family belongs to a different graph than the map",
        });
    }
    let scat = map.scattering_graph();
    let mut blocks = Vec::with_capacity(scat.node_count());
    for ix in 0..scat.node_count() {
        let j = scat.node_id(ix);
        let n = scat.degree(j).expect("node exists");
        let coin_block = coins.block(map.coin_graph().node_index(j)?);
        let mut block = vec![Complex::new(T::zero(), T::zero()); n * n];
        for alpha in 1..=n {
            let row = map.alignment().map_port(j, alpha)?;
            for sigma in 1..=n {
                let col = map.retagged_port(j, sigma)?;
                block[(alpha - 1) * n + (sigma - 1)] = coin_block[(row - 1) * n + (col - 1)];
            }
        }
        blocks.push(block);
    }
    LocalUnitaryFamily::from_blocks_unchecked(scat, WalkModel::Scattering, blocks)
}

/// Inverse of [`scattering_from_coin`]: recovers the coin family by moving
/// every entry back. The two conversions compose to the identity with
/// bitwise equality.
pub fn coin_from_scattering<T: WalkFloat>(
    gammas: &LocalUnitaryFamily<T>,
    map: &EquivalenceMap,
) -> Result<LocalUnitaryFamily<T>> {
    if gammas.model() != WalkModel::Scattering {
        return Err(Error::RoleMismatch {
            expected: WalkModel::Scattering.name(),
            found: gammas.model().name(),
        });
    }
    if !same_graph(gammas.graph(), map.scattering_graph()) {
        return Err(Error::GraphMismatch {
            context: "scattering family belongs to a different graph than the map",
        });
    }
    let coin = map.coin_graph();
    let scat = map.scattering_graph();
    let mut blocks = Vec::with_capacity(coin.node_count());
    for ix in 0..coin.node_count() {
        let j = coin.node_id(ix);
        let n = coin.degree(j).expect("node exists");
        let gamma_block = gammas.block(scat.node_index(j)?);
        let mut block = vec![Complex::new(T::zero(), T::zero()); n * n];
        for row in 1..=n {
            let alpha = map.alignment().inverse_port(j, row)?;
            for col in 1..=n {
                let sigma = scat
                    .basis_label(map.inverse_index(coin.basis_index(j, col)?))
                    .1;
                block[(row - 1) * n + (col - 1)] = gamma_block[(alpha - 1) * n + (sigma - 1)];
            }
        }
        blocks.push(block);
    }
    LocalUnitaryFamily::from_blocks_unchecked(coin, WalkModel::Coin, blocks)
}

/// Controls for [`verify_equivalence`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Acceptance threshold for both deviation measures.
    pub tolerance: f64,
    /// Largest dimension at which the dense comparison runs.
    pub dense_cap: usize,
    /// Number of randomized state probes.
    pub trials: usize,
    /// Seed for the state probes.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            dense_cap: DEFAULT_DENSE_CAP,
            trials: 200,
            seed: 7,
        }
    }
}

/// Outcome of the conjugation audit.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub dim: usize,
    /// Largest entrywise modulus of `U_scattering − E†·U_coin·E`; absent
    /// when the dimension exceeds the dense cap.
    pub dense_max_deviation: Option<f64>,
    /// Largest 2-norm of `(U_scattering − E†·U_coin·E) ψ` over the random
    /// probes ψ.
    pub sparse_max_deviation: f64,
    pub trials: usize,
    pub tolerance: f64,
    /// Largest block unitarity deviation of the coin family.
    pub coin_unitarity_deviation: f64,
    /// Largest block unitarity deviation of the scattering family.
    pub scattering_unitarity_deviation: f64,
    pub passed: bool,
}

/// Numerically audits `U_scattering = E† · U_coin · E`: densely (entrywise)
/// when the dimension fits under the cap, and with randomized state probes
/// in any case. Passes when every computed deviation is below the
/// tolerance.
pub fn verify_equivalence<T: WalkFloat>(
    coin_op: &CoinWalkOperator<T>,
    scat_op: &ScatteringWalkOperator<T>,
    map: &EquivalenceMap,
    opts: &VerifyOptions,
) -> Result<EquivalenceReport> {
    if !same_graph(coin_op.graph(), map.coin_graph()) {
        return Err(Error::GraphMismatch {
            context: "coin operator and map use different graphs",
        });
    }
    if !same_graph(scat_op.graph(), map.scattering_graph()) {
        return Err(Error::GraphMismatch {
            context: "scattering operator and map use different graphs",
        });
    }
    let dim = map.dim();

    let dense_max_deviation = if dim <= opts.dense_cap {
        let conjugated = coin_op
            .dense_with_cap(opts.dense_cap)?
            .conjugate_by_index_map(&(0..dim).map(|d| map.forward_index(d)).collect::<Vec<_>>())?;
        let us = scat_op.dense_with_cap(opts.dense_cap)?;
        Some(us.max_abs_diff(&conjugated)?.to_f64())
    } else {
        None
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sparse_max_deviation = 0.0f64;
    for _ in 0..opts.trials {
        let psi = crate::fixtures::sample_state::<T>(dim, &mut rng);
        let lhs = scat_op.step(&psi)?;
        let rhs = map.apply_adjoint(&coin_op.step(&map.apply(&psi)?)?)?;
        sparse_max_deviation = sparse_max_deviation.max(lhs.distance(&rhs)?.to_f64());
    }

    let passed = dense_max_deviation.is_none_or(|d| d < opts.tolerance)
        && sparse_max_deviation < opts.tolerance;
    Ok(EquivalenceReport {
        dim,
        dense_max_deviation,
        sparse_max_deviation,
        trials: opts.trials,
        tolerance: opts.tolerance,
        coin_unitarity_deviation: coin_op.coins().unitarity_deviation().to_f64(),
        scattering_unitarity_deviation: scat_op.gammas().unitarity_deviation().to_f64(),
        passed,
    })
}
