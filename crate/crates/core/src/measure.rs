//! Projective position measurements in both pictures.
//!
//! Coin-picture positions are nodes: the projector for node `j` spans the
//! directed states leaving `j`. Scattering-picture positions are edges:
//! the projector for edge `{u, w}` spans its two directed states. The
//! cross constructions conjugate a projector from one picture into the
//! other with the equivalence map, so a walk run in either picture can be
//! measured in both position bases.

use std::sync::Arc;

use crate::equivalence::EquivalenceMap;
use crate::error::{Error, Result};
use crate::graph::{NodeId, Port, PortedGraph};
use crate::scalar::WalkFloat;
use crate::state::WalkState;
use crate::unitary::WalkModel;

/// Names one measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjectorLabel {
    /// The walker sits at this node.
    Node(NodeId),
    /// The walker sits on the edge named by the port of its
    /// smaller-id endpoint.
    Edge { node: NodeId, port: Port },
}

impl std::fmt::Display for ProjectorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Node(node) => write!(f, "n{node}"),
            Self::Edge { node, port } => write!(f, "e{node}:{port}"),
        }
    }
}

/// An orthogonal projector onto a set of basis directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projector {
    label: ProjectorLabel,
    dim: usize,
    indices: Vec<usize>,
}

impl Projector {
    pub fn label(&self) -> ProjectorLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis indices the projector keeps, ascending.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// Coin-picture node projector: all directed states leaving `node`.
pub fn projector_coin(graph: &PortedGraph, node: NodeId) -> Result<Projector> {
    let degree = graph.degree(node)?;
    let first = graph.basis_index(node, 1)?;
    Ok(Projector {
        label: ProjectorLabel::Node(node),
        dim: graph.dim(),
        indices: (first..first + degree).collect(),
    })
}

/// Scattering-picture edge projector: both directed states of the edge
/// that `port` of `node` lies on. The label always names the edge through
/// its smaller-id endpoint, whichever endpoint is passed in.
pub fn projector_scattering(graph: &PortedGraph, node: NodeId, port: Port) -> Result<Projector> {
    let d = graph.basis_index(node, port)?;
    let t = graph.twin(d);
    let (canonical, _) = graph.basis_label(d.min(t));
    let (_, canonical_port) = graph.basis_label(d.min(t));
    Ok(Projector {
        label: ProjectorLabel::Edge {
            node: canonical,
            port: canonical_port,
        },
        dim: graph.dim(),
        indices: vec![d.min(t), d.max(t)],
    })
}

/// Node projector conjugated into the scattering picture: applies to
/// scattering states and reports the coin-picture node probability.
pub fn cross_node_projector(map: &EquivalenceMap, node: NodeId) -> Result<Projector> {
    let native = projector_coin(map.coin_graph(), node)?;
    let mut indices: Vec<usize> = native
        .indices()
        .iter()
        .map(|&d| map.inverse_index(d))
        .collect();
    indices.sort_unstable();
    Ok(Projector {
        label: native.label,
        dim: map.dim(),
        indices,
    })
}

/// Edge projector conjugated into the coin picture: applies to coin
/// states and reports the scattering-picture edge probability. `node` and
/// `port` use the scattering labeling.
pub fn cross_edge_projector(map: &EquivalenceMap, node: NodeId, port: Port) -> Result<Projector> {
    let native = projector_scattering(map.scattering_graph(), node, port)?;
    let mut indices: Vec<usize> = native
        .indices()
        .iter()
        .map(|&d| map.forward_index(d))
        .collect();
    indices.sort_unstable();
    Ok(Projector {
        label: native.label,
        dim: map.dim(),
        indices,
    })
}

/// Probability of the projector's outcome on the state.
pub fn probability<T: WalkFloat>(state: &WalkState<T>, projector: &Projector) -> Result<T> {
    if state.dim() != projector.dim() {
        return Err(Error::DimensionMismatch {
            expected: projector.dim(),
            found: state.dim(),
        });
    }
    let amps = state.amplitudes();
    Ok(projector
        .indices()
        .iter()
        .map(|&d| amps[d].norm_sqr())
        .sum())
}

/// A full set of outcome probabilities, in a fixed deterministic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    entries: Vec<(ProjectorLabel, T)>,
}

impl<T: WalkFloat> Distribution<T> {
    pub fn entries(&self) -> &[(ProjectorLabel, T)] {
        &self.entries
    }

    /// Sum over all outcomes; 1 up to numerical error for a complete set.
    pub fn total(&self) -> T {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    pub fn probability_of(&self, label: ProjectorLabel) -> Option<T> {
        self.entries
            .iter()
            .find(|&&(l, _)| l == label)
            .map(|&(_, p)| p)
    }
}

fn collect<T: WalkFloat>(
    state: &WalkState<T>,
    projectors: impl Iterator<Item = Result<Projector>>,
) -> Result<Distribution<T>> {
    let mut entries = Vec::new();
    for projector in projectors {
        let projector = projector?;
        entries.push((projector.label(), probability(state, &projector)?));
    }
    Ok(Distribution { entries })
}

/// Node probabilities of a coin-picture state, nodes ascending.
pub fn node_distribution<T: WalkFloat>(
    state: &WalkState<T>,
    graph: &PortedGraph,
) -> Result<Distribution<T>> {
    collect(
        state,
        (0..graph.node_count()).map(|ix| projector_coin(graph, graph.node_id(ix))),
    )
}

/// Edge probabilities of a scattering-picture state, edges ordered by
/// their smaller-id endpoint and its port.
pub fn edge_distribution<T: WalkFloat>(
    state: &WalkState<T>,
    graph: &PortedGraph,
) -> Result<Distribution<T>> {
    collect(
        state,
        graph
            .canonical_edges()
            .into_iter()
            .map(|(node, port)| projector_scattering(graph, node, port)),
    )
}

/// Node probabilities read out of a scattering-picture state.
pub fn cross_node_distribution<T: WalkFloat>(
    state: &WalkState<T>,
    map: &EquivalenceMap,
) -> Result<Distribution<T>> {
    let graph = map.coin_graph().clone();
    collect(
        state,
        (0..graph.node_count()).map(|ix| cross_node_projector(map, graph.node_id(ix))),
    )
}

/// Edge probabilities read out of a coin-picture state.
pub fn cross_edge_distribution<T: WalkFloat>(
    state: &WalkState<T>,
    map: &EquivalenceMap,
) -> Result<Distribution<T>> {
    let graph = map.scattering_graph().clone();
    collect(
        state,
        graph
            .canonical_edges()
            .into_iter()
            .map(|(node, port)| cross_edge_projector(map, node, port)),
    )
}

/// Which position basis a distribution request asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionMode {
    /// Node probabilities of a coin-picture state.
    CoinNodes,
    /// Edge probabilities of a scattering-picture state.
    ScatteringEdges,
    /// The other picture's position basis, conjugated onto this state.
    Cross,
}

impl DistributionMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::CoinNodes => "coin-nodes",
            Self::ScatteringEdges => "scattering-edges",
            Self::Cross => "cross",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "coin-nodes" => Ok(Self::CoinNodes),
            "scattering-edges" => Ok(Self::ScatteringEdges),
            "cross" => Ok(Self::Cross),
            other => Err(Error::Parse {
                message: format!(
                    "unknown distribution mode `{other}` (expected coin-nodes, scattering-edges, or cross)"
                ),
            }),
        }
    }
}

impl std::fmt::Display for DistributionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Routes a state produced by `model` to the distribution `mode` asks
/// for. Native modes require the matching model; `Cross` reads the other
/// picture's positions and needs the equivalence map.
pub fn distribution<T: WalkFloat>(
    state: &WalkState<T>,
    model: WalkModel,
    mode: DistributionMode,
    graph: &Arc<PortedGraph>,
    map: Option<&EquivalenceMap>,
) -> Result<Distribution<T>> {
    match (mode, model) {
        (DistributionMode::CoinNodes, WalkModel::Coin) => node_distribution(state, graph),
        (DistributionMode::ScatteringEdges, WalkModel::Scattering) => {
            edge_distribution(state, graph)
        }
        (DistributionMode::Cross, model) => {
            let map = map.ok_or(Error::GraphMismatch {
                context: "cross distributions require an equivalence map",
            })?;
            match model {
                WalkModel::Coin => cross_edge_distribution(state, map),
                WalkModel::Scattering => cross_node_distribution(state, map),
            }
        }
        (mode, model) => Err(Error::ModeMismatch {
            mode: mode.name(),
            model: model.name(),
        }),
    }
}
