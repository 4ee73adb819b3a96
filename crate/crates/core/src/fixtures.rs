//! Deterministic graphs, coefficient families, port assignments and
//! states used throughout the test suites and examples. Everything random
//! is seeded, so any value built here is reproducible bit for bit.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{MuTable, NodeId, Port, PortedGraph};
use crate::scalar::WalkFloat;
use crate::state::WalkState;
use crate::unitary::{LocalUnitaryFamily, WalkModel};

/// Path on nodes `0..n`, so the two endpoints have degree one.
pub fn path_graph(n: usize) -> Arc<PortedGraph> {
    assert!(n >= 2, "a path needs at least two nodes");
    let edges: Vec<(NodeId, NodeId)> = (0..n - 1)
        .map(|i| (i as NodeId, i as NodeId + 1))
        .collect();
    PortedGraph::from_edges(&edges).expect("path edges are simple")
}

/// Cycle on nodes `0..n`; `n ≥ 3` keeps the graph simple.
pub fn cycle_graph(n: usize) -> Arc<PortedGraph> {
    assert!(n >= 3, "a simple cycle needs at least three nodes");
    let edges: Vec<(NodeId, NodeId)> = (0..n)
        .map(|i| (i as NodeId, ((i + 1) % n) as NodeId))
        .collect();
    PortedGraph::from_edges(&edges).expect("cycle edges are simple")
}

/// Complete graph on nodes `0..n`.
pub fn complete_graph(n: usize) -> Arc<PortedGraph> {
    assert!(n >= 2, "a complete graph needs at least two nodes");
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i as NodeId, j as NodeId));
        }
    }
    PortedGraph::from_edges(&edges).expect("complete edges are simple")
}

/// Hub node `0` joined to leaves `1..=leaves`.
pub fn star_graph(leaves: usize) -> Arc<PortedGraph> {
    assert!(leaves >= 1, "a star needs at least one leaf");
    let edges: Vec<(NodeId, NodeId)> = (1..=leaves).map(|l| (0, l as NodeId)).collect();
    PortedGraph::from_edges(&edges).expect("star edges are simple")
}

/// The three-node complete graph.
pub fn triangle_graph() -> Arc<PortedGraph> {
    PortedGraph::from_edges(&[(0, 1), (0, 2), (1, 2)]).expect("triangle edges are simple")
}

/// Seeded random simple graph: each pair `i < j` below `n` becomes an
/// edge with probability `p`. Nodes that end up with no edge are absent;
/// a single edge `(0, 1)` is substituted if the draw produces none.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Arc<PortedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i as NodeId, j as NodeId));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    PortedGraph::from_edges(&edges).expect("sampled edges are simple")
}

/// A second labeling of the same graph with every node's ports randomly
/// permuted.
pub fn shuffled_ports(graph: &Arc<PortedGraph>, seed: u64) -> Arc<PortedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ports = BTreeMap::new();
    for ix in 0..graph.node_count() {
        let j = graph.node_id(ix);
        let degree = graph.degree(j).expect("node exists");
        let mut order: Vec<NodeId> = (1..=degree)
            .map(|port| graph.neighbor(j, port).expect("port in range"))
            .collect();
        order.shuffle(&mut rng);
        ports.insert(j, order);
    }
    PortedGraph::from_edges_with_ports(&graph.edges(), &ports)
        .expect("permuting ports keeps the labeling valid")
}

/// Seeded family of Haar-like random unitary blocks, one per node:
/// uniform complex entries orthonormalized column by column (two
/// stabilizing passes). Blocks are generated in double precision and then
/// rounded to `T`, so they satisfy `T`'s strict tolerance.
pub fn random_unitary_family<T: WalkFloat>(
    graph: &Arc<PortedGraph>,
    model: WalkModel,
    seed: u64,
) -> LocalUnitaryFamily<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = (0..graph.node_count())
        .map(|ix| {
            let degree = graph
                .degree(graph.node_id(ix))
                .expect("node exists");
            random_unitary_block::<T>(degree, &mut rng)
        })
        .collect();
    LocalUnitaryFamily::from_blocks(graph, model, blocks)
        .expect("orthonormalized blocks pass the unitarity gate")
}

fn random_unitary_block<T: WalkFloat>(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex<T>> {
    let mut m: Vec<Complex<f64>> = (0..n * n)
        .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    for c in 0..n {
        for _pass in 0..2 {
            for p in 0..c {
                let mut dot = Complex::new(0.0, 0.0);
                for r in 0..n {
                    dot += m[r * n + p].conj() * m[r * n + c];
                }
                for r in 0..n {
                    let sub = dot * m[r * n + p];
                    m[r * n + c] -= sub;
                }
            }
        }
        let norm: f64 = (0..n).map(|r| m[r * n + c].norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "random block column degenerated");
        for r in 0..n {
            m[r * n + c] /= norm;
        }
    }
    m.into_iter()
        .map(|z| Complex::new(T::lit(z.re), T::lit(z.im)))
        .collect()
}

/// Seeded admissible port assignment: at every node the incoming states
/// are routed onto a random permutation of its ports, which is exactly
/// the restriction a valid assignment must satisfy.
pub fn random_admissible_mu(graph: &Arc<PortedGraph>, seed: u64) -> MuTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mu = MuTable::new();
    for ix in 0..graph.node_count() {
        let t = graph.node_id(ix);
        let degree = graph.degree(t).expect("node exists");
        let mut perm: Vec<Port> = (1..=degree).collect();
        perm.shuffle(&mut rng);
        for sigma in 1..=degree {
            let a = graph.neighbor(t, sigma).expect("port in range");
            let nu = graph.reciprocal(t, sigma).expect("port in range");
            mu.entry(a).or_default().insert(nu, perm[sigma - 1]);
        }
    }
    mu
}

/// Port assignment on a 2-regular graph that keeps the walker moving in
/// the direction it arrived from: a state entering a node exits through
/// the port that does not point back.
pub fn cycle_transport_mu(graph: &Arc<PortedGraph>) -> MuTable {
    let mut mu = MuTable::new();
    for ix in 0..graph.node_count() {
        let a = graph.node_id(ix);
        let degree = graph.degree(a).expect("node exists");
        assert_eq!(degree, 2, "the transport assignment needs a 2-regular graph");
        for nu in 1..=2 {
            let back = graph.reciprocal(a, nu).expect("port in range");
            mu.entry(a).or_default().insert(nu, 3 - back);
        }
    }
    mu
}

/// Draws a normalized random state from the supplied generator: uniform
/// complex amplitudes, normalized in double precision, rounded to `T`.
pub fn sample_state<T: WalkFloat>(dim: usize, rng: &mut ChaCha8Rng) -> WalkState<T> {
    let raw: Vec<Complex<f64>> = (0..dim)
        .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    assert!(norm > 1e-12, "random draw degenerated to the zero vector");
    let amps: Vec<Complex<T>> = raw
        .into_iter()
        .map(|z| Complex::new(T::lit(z.re / norm), T::lit(z.im / norm)))
        .collect();
    WalkState::new(amps).expect("normalized amplitudes pass the norm gate")
}

/// Seeded normalized random state.
pub fn random_state<T: WalkFloat>(dim: usize, seed: u64) -> WalkState<T> {
    sample_state(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}
