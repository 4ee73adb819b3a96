//! Ported graphs and shift permutations.
//!
//! An undirected simple graph is stored with a *port labeling*: each node
//! `j` numbers its incident edges `1..=degree(j)`, and every directed state
//! of the walk is a (node, port) pair. Two locally-defined tables encode
//! the topology: `neighbor(j, σ)` is the node reached through port `σ`,
//! and `reciprocal(j, σ)` is the port under which that neighbor sees the
//! same edge. The reciprocal table is an involution:
//! `reciprocal(neighbor(j,σ), reciprocal(j,σ)) == σ`.
//!
//! A [`ShiftPermutation`] augments the topology with a *target port*
//! assignment `target_port(j, σ)`, a port of the neighbor reached through
//! `(j, σ)`. Moving every amplitude from `(j, σ)` to
//! `(neighbor(j,σ), target_port(j,σ))` must be a bijection of the directed
//! basis; equivalently, for every node the ports assigned to the states
//! arriving at it must cover its full port range exactly once. The default
//! assignment `target_port = reciprocal` (the "flip-flop" shift, which
//! reverses each directed edge) always satisfies this. The inverse motion
//! is exposed through [`ShiftPermutation::source_node`] and
//! [`ShiftPermutation::source_port`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::WalkFloat;
use crate::state::WalkState;

/// External node identifier; arbitrary integers are accepted and preserved
/// in all I/O, with a dense internal index used for storage.
pub type NodeId = i64;

/// Port label, `1..=degree` at each node.
pub type Port = usize;

/// Partial override table for a shift assignment: for the listed
/// (node, port) pairs, the port of the neighbor that the shift moves the
/// amplitude onto. Pairs not listed keep the flip-flop default.
pub type MuTable = BTreeMap<NodeId, BTreeMap<Port, Port>>;

/// Undirected simple graph with per-node port labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortedGraph {
    node_ids: Vec<NodeId>,
    index_of: BTreeMap<NodeId, usize>,
    /// Per node index: neighbor node index through each port (0-based slot
    /// `σ - 1`).
    neighbors: Vec<Vec<usize>>,
    /// Per node index: reciprocal port at the neighbor through each port.
    reciprocals: Vec<Vec<Port>>,
    /// Basis offset of each node's port block; strictly increasing.
    offsets: Vec<usize>,
    /// Per directed basis index: the basis index of the reversed state on
    /// the same edge.
    twins: Vec<usize>,
    dim: usize,
    edge_count: usize,
}

impl PortedGraph {
    /// Builds a graph from an unordered edge list, assigning ports at each
    /// node in ascending order of neighbor id. The same edge multiset in
    /// any order yields identical tables.
    pub fn from_edges(edges: &[(NodeId, NodeId)]) -> Result<Arc<Self>> {
        let adjacency = Self::adjacency_from_edges(edges)?;
        Ok(Arc::new(Self::assemble(adjacency, edges.len())))
    }

    /// Builds a graph from an edge list with explicit port orders for some
    /// nodes: `ports[node]` lists that node's neighbors in port order and
    /// must be a permutation of its neighbor set. Nodes without an entry
    /// keep the ascending-neighbor-id convention.
    pub fn from_edges_with_ports(
        edges: &[(NodeId, NodeId)],
        ports: &BTreeMap<NodeId, Vec<NodeId>>,
    ) -> Result<Arc<Self>> {
        let mut adjacency = Self::adjacency_from_edges(edges)?;
        let index_of: BTreeMap<NodeId, usize> = adjacency
            .iter()
            .enumerate()
            .map(|(ix, (id, _))| (*id, ix))
            .collect();
        for (&node, order) in ports {
            let &ix = index_of
                .get(&node)
                .ok_or(Error::UnknownNode { node })?;
            let current = &adjacency[ix].1;
            let mut sorted_claim: Vec<NodeId> = order.clone();
            sorted_claim.sort_unstable();
            let sorted_current: Vec<NodeId> =
                current.iter().map(|&w| adjacency[w].0).collect();
            if sorted_claim != sorted_current {
                return Err(Error::PortListInvalid { node });
            }
            let reordered: Vec<usize> = order.iter().map(|id| index_of[id]).collect();
            adjacency[ix].1 = reordered;
        }
        Ok(Arc::new(Self::assemble(adjacency, edges.len())))
    }

    /// Validates the edge list and returns, per node in ascending id order,
    /// its sorted neighbor index list.
    fn adjacency_from_edges(edges: &[(NodeId, NodeId)]) -> Result<Vec<(NodeId, Vec<usize>)>> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut seen = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge { a: key.0, b: key.1 });
            }
            ids.insert(u);
            ids.insert(v);
        }
        let node_ids: Vec<NodeId> = ids.into_iter().collect();
        let index_of: BTreeMap<NodeId, usize> = node_ids
            .iter()
            .enumerate()
            .map(|(ix, &id)| (id, ix))
            .collect();
        let mut neighbor_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); node_ids.len()];
        for &(u, v) in edges {
            let (ui, vi) = (index_of[&u], index_of[&v]);
            neighbor_sets[ui].insert(vi);
            neighbor_sets[vi].insert(ui);
        }
        Ok(node_ids
            .into_iter()
            .zip(neighbor_sets)
            .map(|(id, set)| (id, set.into_iter().collect()))
            .collect())
    }

    /// Derives the reciprocal tables, basis offsets and twin indices from a
    /// fixed adjacency-with-port-order.
    fn assemble(adjacency: Vec<(NodeId, Vec<usize>)>, edge_count: usize) -> Self {
        let node_ids: Vec<NodeId> = adjacency.iter().map(|(id, _)| *id).collect();
        let index_of: BTreeMap<NodeId, usize> = node_ids
            .iter()
            .enumerate()
            .map(|(ix, &id)| (id, ix))
            .collect();
        let neighbors: Vec<Vec<usize>> =
            adjacency.into_iter().map(|(_, list)| list).collect();

        let mut reciprocals = vec![Vec::new(); neighbors.len()];
        for (ix, list) in neighbors.iter().enumerate() {
            reciprocals[ix] = list
                .iter()
                .map(|&w| {
                    let back = neighbors[w]
                        .iter()
                        .position(|&x| x == ix)
                        .expect("edges are symmetric by construction");
                    back + 1
                })
                .collect();
        }

        let mut offsets = Vec::with_capacity(neighbors.len());
        let mut dim = 0;
        for list in &neighbors {
            offsets.push(dim);
            dim += list.len();
        }

        let mut twins = vec![0; dim];
        for (ix, list) in neighbors.iter().enumerate() {
            for (slot, &w) in list.iter().enumerate() {
                twins[offsets[ix] + slot] = offsets[w] + (reciprocals[ix][slot] - 1);
            }
        }

        Self {
            node_ids,
            index_of,
            neighbors,
            reciprocals,
            offsets,
            twins,
            dim,
            edge_count,
        }
    }

    /// Number of nodes (only nodes incident to at least one edge exist).
    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Dimension of the directed state space, `Σ degree(j)`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Node id at internal index `ix` (ids are stored in ascending order).
    pub fn node_id(&self, ix: usize) -> NodeId {
        self.node_ids[ix]
    }

    /// Internal index of a node id.
    pub fn node_index(&self, node: NodeId) -> Result<usize> {
        self.index_of
            .get(&node)
            .copied()
            .ok_or(Error::UnknownNode { node })
    }

    /// Degree of a node.
    pub fn degree(&self, node: NodeId) -> Result<usize> {
        Ok(self.neighbors[self.node_index(node)?].len())
    }

    fn checked_slot(&self, node: NodeId, port: Port) -> Result<(usize, usize)> {
        let ix = self.node_index(node)?;
        let degree = self.neighbors[ix].len();
        if port == 0 || port > degree {
            return Err(Error::PortOutOfRange { node, port, degree });
        }
        Ok((ix, port - 1))
    }

    /// Node reached through port `port` of `node`.
    pub fn neighbor(&self, node: NodeId, port: Port) -> Result<NodeId> {
        let (ix, slot) = self.checked_slot(node, port)?;
        Ok(self.node_ids[self.neighbors[ix][slot]])
    }

    /// Port under which the neighbor reached through `(node, port)` sees
    /// the same edge.
    pub fn reciprocal(&self, node: NodeId, port: Port) -> Result<Port> {
        let (ix, slot) = self.checked_slot(node, port)?;
        Ok(self.reciprocals[ix][slot])
    }

    /// Basis index of the directed state `(node, port)`.
    pub fn basis_index(&self, node: NodeId, port: Port) -> Result<usize> {
        let (ix, slot) = self.checked_slot(node, port)?;
        Ok(self.offsets[ix] + slot)
    }

    /// Directed state `(node, port)` at basis index `d`.
    pub fn basis_label(&self, d: usize) -> (NodeId, Port) {
        assert!(d < self.dim, "basis index {d} out of range {}", self.dim);
        let ix = match self.offsets.binary_search(&d) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (self.node_ids[ix], d - self.offsets[ix] + 1)
    }

    /// Basis index of the reversed directed state on the same edge.
    pub fn twin(&self, d: usize) -> usize {
        assert!(d < self.dim, "basis index {d} out of range {}", self.dim);
        self.twins[d]
    }

    /// One directed representative per physical edge, namely the endpoint
    /// with the smaller node id and its port, in ascending basis order.
    pub fn canonical_edges(&self) -> Vec<(NodeId, Port)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for d in 0..self.dim {
            let (j, sigma) = self.basis_label(d);
            if d < self.twins[d] {
                out.push((j, sigma));
            }
        }
        out
    }

    /// Undirected edge list in canonical order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.canonical_edges()
            .into_iter()
            .map(|(j, sigma)| {
                let w = self
                    .neighbor(j, sigma)
                    .expect("canonical edges index valid ports");
                (j, w)
            })
            .collect()
    }

    /// Re-checks every structural invariant from scratch and reports all
    /// violations found. Graphs built by the constructors always validate
    /// cleanly; the report exists to audit externally assembled or
    /// deserialized data.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let degrees: Vec<usize> = self.neighbors.iter().map(Vec::len).collect();
        if degrees.iter().sum::<usize>() != 2 * self.edge_count {
            failures.push(format!(
                "degree sum {} does not equal twice the edge count {}",
                degrees.iter().sum::<usize>(),
                self.edge_count
            ));
        }
        for ix in 0..self.node_count() {
            let j = self.node_ids[ix];
            let mut distinct = BTreeSet::new();
            for slot in 0..self.neighbors[ix].len() {
                let sigma = slot + 1;
                let w = self.neighbors[ix][slot];
                if w == ix {
                    failures.push(format!("self-loop at node {j} port {sigma}"));
                    continue;
                }
                if !distinct.insert(w) {
                    failures.push(format!(
                        "node {j} reaches the same neighbor through two ports (port {sigma})"
                    ));
                }
                let back = self.reciprocals[ix][slot];
                if back == 0 || back > self.neighbors[w].len() {
                    failures.push(format!(
                        "reciprocal port out of range at node {j} port {sigma}"
                    ));
                    continue;
                }
                if self.neighbors[w][back - 1] != ix {
                    failures.push(format!(
                        "reciprocal edge mismatch at node {j} port {sigma}"
                    ));
                } else if self.reciprocals[w][back - 1] != sigma {
                    failures.push(format!(
                        "reciprocal involution broken at node {j} port {sigma}"
                    ));
                }
            }
        }
        let involution_ok = failures.is_empty();
        ValidationReport {
            nodes: self.node_count(),
            edges: self.edge_count,
            dim: self.dim,
            min_degree: degrees.iter().copied().min().unwrap_or(0),
            max_degree: degrees.iter().copied().max().unwrap_or(0),
            involution_ok,
            failures,
        }
    }
}

/// Structural audit of a [`PortedGraph`].
#[derive(Debug, Clone, serde::Serialize)]
pub struct ValidationReport {
    pub nodes: usize,
    pub edges: usize,
    pub dim: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub involution_ok: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

pub(crate) fn same_graph(a: &Arc<PortedGraph>, b: &Arc<PortedGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A bijective reassignment of directed states: the amplitude at `(j, σ)`
/// moves to `(neighbor(j,σ), target_port(j,σ))`.
#[derive(Debug, Clone)]
pub struct ShiftPermutation {
    graph: Arc<PortedGraph>,
    targets: Vec<Port>,
    fwd: Vec<usize>,
    inv: Vec<usize>,
}

impl ShiftPermutation {
    /// The flip-flop shift: every directed edge state is reversed
    /// (`target_port = reciprocal`), which is bijective on any graph.
    pub fn flip_flop(graph: &Arc<PortedGraph>) -> Self {
        let targets: Vec<Port> = (0..graph.dim())
            .map(|d| {
                let (j, sigma) = graph.basis_label(d);
                graph
                    .reciprocal(j, sigma)
                    .expect("basis labels index valid ports")
            })
            .collect();
        let fwd: Vec<usize> = (0..graph.dim()).map(|d| graph.twin(d)).collect();
        let inv = fwd.clone();
        Self {
            graph: graph.clone(),
            targets,
            fwd,
            inv,
        }
    }

    /// A shift with explicit target ports for some directed states (the
    /// rest keep the flip-flop default). Rejects assignments whose targets
    /// fall outside the neighbor's port range and assignments that are not
    /// bijective, naming the node whose incoming ports fail to cover its
    /// range.
    pub fn custom(graph: &Arc<PortedGraph>, overrides: &MuTable) -> Result<Self> {
        let mut shift = Self::flip_flop(graph);
        for (&node, per_port) in overrides {
            for (&port, &target) in per_port {
                let d = graph.basis_index(node, port)?;
                let w = graph
                    .neighbor(node, port)
                    .expect("basis index validated the port");
                let neighbor_degree = graph
                    .degree(w)
                    .expect("neighbor exists by construction");
                if target == 0 || target > neighbor_degree {
                    return Err(Error::ShiftRangeViolated {
                        node,
                        port,
                        target,
                        neighbor_degree,
                    });
                }
                shift.targets[d] = target;
                shift.fwd[d] = graph
                    .basis_index(w, target)
                    .expect("target range checked above");
            }
        }
        // Bijectivity check, node by node: the states arriving at a node
        // must land on all of its ports exactly once.
        let mut hit = vec![false; graph.dim()];
        for ix in 0..graph.node_count() {
            let j = graph.node_id(ix);
            let degree = graph
                .degree(j)
                .expect("node ids enumerate existing nodes");
            for sigma in 1..=degree {
                let incoming = graph.twin(
                    graph
                        .basis_index(j, sigma)
                        .expect("ports enumerate the degree"),
                );
                let t = shift.fwd[incoming];
                if hit[t] {
                    return Err(Error::ShiftRestrictionViolated { node: j });
                }
                hit[t] = true;
            }
        }
        debug_assert!(hit.iter().all(|&h| h));
        for (d, &t) in shift.fwd.iter().enumerate() {
            shift.inv[t] = d;
        }
        debug_assert!(shift.inversion_identities_hold());
        Ok(shift)
    }

    /// The four mutual-inverse identities between the forward motion
    /// (neighbor, target port) and the backward motion (source node,
    /// source port), checked exactly.
    fn inversion_identities_hold(&self) -> bool {
        (0..self.graph.dim()).all(|d| {
            let (j, sigma) = self.graph.basis_label(d);
            let e = self.graph.neighbor(j, sigma).unwrap();
            let m = self.target_port(j, sigma).unwrap();
            let a = self.source_node(j, sigma).unwrap();
            let nu = self.source_port(j, sigma).unwrap();
            self.source_node(e, m).unwrap() == j
                && self.source_port(e, m).unwrap() == sigma
                && self.graph.neighbor(a, nu).unwrap() == j
                && self.target_port(a, nu).unwrap() == sigma
        })
    }

    pub fn graph(&self) -> &Arc<PortedGraph> {
        &self.graph
    }

    /// Port of the neighbor onto which the amplitude at `(node, port)`
    /// moves.
    pub fn target_port(&self, node: NodeId, port: Port) -> Result<Port> {
        Ok(self.targets[self.graph.basis_index(node, port)?])
    }

    /// Node whose amplitude the shift moves onto `(node, port)`.
    pub fn source_node(&self, node: NodeId, port: Port) -> Result<NodeId> {
        let d = self.graph.basis_index(node, port)?;
        Ok(self.graph.basis_label(self.inv[d]).0)
    }

    /// Port at [`Self::source_node`] whose amplitude the shift moves onto
    /// `(node, port)`.
    pub fn source_port(&self, node: NodeId, port: Port) -> Result<Port> {
        let d = self.graph.basis_index(node, port)?;
        Ok(self.graph.basis_label(self.inv[d]).1)
    }

    /// Basis index the state at `d` moves to.
    pub fn forward_index(&self, d: usize) -> usize {
        self.fwd[d]
    }

    /// Basis index of the state that moves onto `d`.
    pub fn inverse_index(&self, d: usize) -> usize {
        self.inv[d]
    }

    /// Applies the shift to a state: a pure permutation of amplitudes, so
    /// the norm is preserved exactly.
    pub fn apply<T: WalkFloat>(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        let amps = self.checked_amplitudes(state)?;
        let mut out = vec![num_complex::Complex::new(T::zero(), T::zero()); amps.len()];
        for (d, &a) in amps.iter().enumerate() {
            out[self.fwd[d]] = a;
        }
        Ok(WalkState::from_raw(out))
    }

    /// Applies the inverse shift.
    pub fn apply_adjoint<T: WalkFloat>(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        let amps = self.checked_amplitudes(state)?;
        let mut out = vec![num_complex::Complex::new(T::zero(), T::zero()); amps.len()];
        for (d, &a) in amps.iter().enumerate() {
            out[self.inv[d]] = a;
        }
        Ok(WalkState::from_raw(out))
    }

    fn checked_amplitudes<'a, T: WalkFloat>(
        &self,
        state: &'a WalkState<T>,
    ) -> Result<&'a [num_complex::Complex<T>]> {
        if state.dim() != self.graph.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.graph.dim(),
                found: state.dim(),
            });
        }
        Ok(state.amplitudes())
    }
}
