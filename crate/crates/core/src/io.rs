//! JSON input formats and deterministic output writers.
//!
//! Inputs
//! - Graph file: `{"edges": [[u, v], ...]}` plus optional `"ports"`
//!   (explicit neighbor order per node), `"scattering_ports"` (a second
//!   labeling of the same edges) and `"mu"` (port assignment overrides).
//! - Unitary file: one section named after the model — `"coin"` or
//!   `"gamma"` — holding an optional `"default"` built-in name and
//!   per-node `"overrides"` given as row-major nested `[re, im]` pairs.
//! - State file: a JSON array of `{"node": j, "port": σ, "amp": [re, im]}`
//!   entries.
//!
//! Outputs
//! - CSV: `step,label,probability` rows in distribution order.
//! - JSON: an array with one `{label: probability}` object per step, keys
//!   sorted.
//!
//! Both writers are deterministic down to the byte: fixed orders, and
//! floats printed in the shortest form that round-trips.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{MuTable, NodeId, Port, PortedGraph};
use crate::measure::Distribution;
use crate::state::WalkState;
use crate::unitary::{BuiltinUnitary, LocalUnitaryFamily, WalkModel};

/// Everything a graph file can describe.
#[derive(Debug, Clone)]
pub struct GraphSpec {
    /// The graph under the primary (coin) labeling.
    pub coin: Arc<PortedGraph>,
    /// The same edges under the separate scattering labeling, when given.
    pub scattering: Option<Arc<PortedGraph>>,
    /// Port assignment overrides, when given.
    pub mu: Option<MuTable>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    edges: Vec<(NodeId, NodeId)>,
    #[serde(default)]
    ports: Option<BTreeMap<String, Vec<NodeId>>>,
    #[serde(default)]
    scattering_ports: Option<BTreeMap<String, Vec<NodeId>>>,
    #[serde(default)]
    mu: Option<BTreeMap<String, BTreeMap<String, Port>>>,
}

fn parse_node_key(key: &str) -> Result<NodeId> {
    key.trim().parse().map_err(|_| Error::Parse {
        message: format!("invalid node id `{key}`"),
    })
}

fn parse_port_key(key: &str) -> Result<Port> {
    key.trim().parse().map_err(|_| Error::Parse {
        message: format!("invalid port number `{key}`"),
    })
}

fn node_keyed<V: Clone>(table: &BTreeMap<String, V>) -> Result<BTreeMap<NodeId, V>> {
    table
        .iter()
        .map(|(k, v)| Ok((parse_node_key(k)?, v.clone())))
        .collect()
}

/// Parses per-node port tables keyed by strings, the shape shared by the
/// `mu` section and standalone port-table files.
pub fn parse_port_tables(text: &str) -> Result<BTreeMap<NodeId, BTreeMap<Port, Port>>> {
    let raw: BTreeMap<String, BTreeMap<String, Port>> = serde_json::from_str(text)?;
    convert_port_tables(&raw)
}

fn convert_port_tables(
    raw: &BTreeMap<String, BTreeMap<String, Port>>,
) -> Result<BTreeMap<NodeId, BTreeMap<Port, Port>>> {
    let mut out = BTreeMap::new();
    for (node_key, per_port) in raw {
        let node = parse_node_key(node_key)?;
        let mut ports = BTreeMap::new();
        for (port_key, &target) in per_port {
            ports.insert(parse_port_key(port_key)?, target);
        }
        out.insert(node, ports);
    }
    Ok(out)
}

/// Parses a graph file.
pub fn parse_graph(text: &str) -> Result<GraphSpec> {
    let file: GraphFile = serde_json::from_str(text)?;
    let coin = match &file.ports {
        Some(ports) => PortedGraph::from_edges_with_ports(&file.edges, &node_keyed(ports)?)?,
        None => PortedGraph::from_edges(&file.edges)?,
    };
    let scattering = match &file.scattering_ports {
        Some(ports) => Some(PortedGraph::from_edges_with_ports(
            &file.edges,
            &node_keyed(ports)?,
        )?),
        None => None,
    };
    let mu = match &file.mu {
        Some(raw) => Some(convert_port_tables(raw)?),
        None => None,
    };
    Ok(GraphSpec {
        coin,
        scattering,
        mu,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitaryFile {
    #[serde(default)]
    coin: Option<UnitarySection>,
    #[serde(default)]
    gamma: Option<UnitarySection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitarySection {
    #[serde(default)]
    default: Option<String>,
    #[serde(default)]
    overrides: BTreeMap<String, Vec<Vec<(f64, f64)>>>,
}

/// Parses a unitary file for the given model: the file must carry the
/// matching section (`coin` or `gamma`) and nothing else. With `checked`
/// every block passes the unitarity gate; without, only shapes are
/// enforced, so deliberately corrupted coefficients can be loaded for
/// auditing.
pub fn parse_unitaries(
    text: &str,
    model: WalkModel,
    graph: &Arc<PortedGraph>,
    checked: bool,
) -> Result<LocalUnitaryFamily<f64>> {
    let file: UnitaryFile = serde_json::from_str(text)?;
    let section = match model {
        WalkModel::Coin => {
            if file.gamma.is_some() {
                return Err(Error::Parse {
                    message: "the coin model takes a `coin` section, not `gamma`".into(),
                });
            }
            file.coin.ok_or_else(|| Error::Parse {
                message: "missing `coin` section".into(),
            })?
        }
        WalkModel::Scattering => {
            if file.coin.is_some() {
                return Err(Error::Parse {
                    message: "the scattering model takes a `gamma` section, not `coin`".into(),
                });
            }
            file.gamma.ok_or_else(|| Error::Parse {
                message: "missing `gamma` section".into(),
            })?
        }
    };

    let default = match &section.default {
        Some(name) => Some(BuiltinUnitary::from_name(name).ok_or_else(|| Error::Parse {
            message: format!(
                "unknown built-in unitary `{name}` (expected identity, hadamard, grover, or dft)"
            ),
        })?),
        None => None,
    };

    let mut overrides: BTreeMap<NodeId, Vec<Complex<f64>>> = BTreeMap::new();
    for (key, rows) in &section.overrides {
        let node = parse_node_key(key)?;
        graph.node_index(node)?;
        let block = rows
            .iter()
            .flatten()
            .map(|&(re, im)| Complex::new(re, im))
            .collect();
        overrides.insert(node, block);
    }

    let mut blocks = Vec::with_capacity(graph.node_count());
    for ix in 0..graph.node_count() {
        let node = graph.node_id(ix);
        let block = match overrides.remove(&node) {
            Some(block) => block,
            None => match default {
                Some(builtin) => builtin.matrix(graph.degree(node).expect("node exists"))?,
                None => {
                    return Err(Error::Parse {
                        message: format!(
                            "node {node} has no block: no default and no override given"
                        ),
                    })
                }
            },
        };
        blocks.push(block);
    }
    if checked {
        LocalUnitaryFamily::from_blocks(graph, model, blocks)
    } else {
        LocalUnitaryFamily::from_blocks_unchecked(graph, model, blocks)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AmplitudeEntry {
    node: NodeId,
    port: Port,
    amp: (f64, f64),
}

/// Parses an initial state file onto the graph's directed basis. Unlisted
/// directions hold amplitude zero; the squared norm must come out close
/// enough to one to pass the norm gate.
pub fn parse_initial_state(text: &str, graph: &Arc<PortedGraph>) -> Result<WalkState<f64>> {
    let entries: Vec<AmplitudeEntry> = serde_json::from_str(text)?;
    let mut amps = vec![Complex::new(0.0, 0.0); graph.dim()];
    let mut seen = vec![false; graph.dim()];
    for entry in &entries {
        let d = graph.basis_index(entry.node, entry.port)?;
        if seen[d] {
            return Err(Error::Parse {
                message: format!(
                    "duplicate amplitude for node {} port {}",
                    entry.node, entry.port
                ),
            });
        }
        seen[d] = true;
        amps[d] = Complex::new(entry.amp.0, entry.amp.1);
    }
    WalkState::new(amps)
}

/// Writes `step,label,probability` rows for steps `0..series.len()`.
pub fn write_csv(out: &mut impl Write, series: &[Distribution<f64>]) -> Result<()> {
    writeln!(out, "step,label,probability")?;
    for (step, dist) in series.iter().enumerate() {
        for (label, p) in dist.entries() {
            writeln!(out, "{step},{label},{p}")?;
        }
    }
    Ok(())
}

/// Writes a JSON array holding one sorted `{label: probability}` object
/// per step.
pub fn write_json(out: &mut impl Write, series: &[Distribution<f64>]) -> Result<()> {
    let rows: Vec<BTreeMap<String, f64>> = series
        .iter()
        .map(|dist| {
            dist.entries()
                .iter()
                .map(|(label, p)| (label.to_string(), *p))
                .collect()
        })
        .collect();
    serde_json::to_writer(&mut *out, &rows)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::triangle_graph;
    use crate::measure::node_distribution;

    #[test]
    fn graph_files_carry_both_labelings_and_assignments() {
        let text = r#"{
            "edges": [[0, 1], [0, 2], [1, 2]],
            "ports": {"0": [2, 1]},
            "scattering_ports": {"1": [2, 0]},
            "mu": {"0": {"1": 2}}
        }"#;
        let spec = parse_graph(text).unwrap();
        assert_eq!(spec.coin.neighbor(0, 1).unwrap(), 2);
        assert_eq!(spec.coin.neighbor(1, 1).unwrap(), 0);
        let scat = spec.scattering.unwrap();
        assert_eq!(scat.neighbor(1, 1).unwrap(), 2);
        assert_eq!(spec.mu.unwrap()[&0][&1], 2);
    }

    #[test]
    fn graph_files_reject_typos_and_bad_keys() {
        assert!(matches!(
            parse_graph(r#"{"edgez": [[0, 1]]}"#),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_graph(r#"{"edges": [[0, 1]], "ports": {"x": [1]}}"#),
            Err(Error::Parse { .. })
        ));
        // Structural problems fall through to the graph constructor.
        assert!(matches!(
            parse_graph(r#"{"edges": [[0, 0]]}"#),
            Err(Error::SelfLoop { node: 0 })
        ));
    }

    #[test]
    fn unitary_files_mix_defaults_and_overrides() {
        let g = triangle_graph();
        let text = r#"{
            "coin": {
                "default": "grover",
                "overrides": {"2": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]}
            }
        }"#;
        let fam = parse_unitaries(text, WalkModel::Coin, &g, true).unwrap();
        // Degree-2 blocks: the default produces the 2×2 swap-like matrix,
        // and the override is honored verbatim.
        assert_eq!(fam.block(2)[1], Complex::new(1.0, 0.0));
        assert_eq!(fam.block(2)[0], Complex::new(0.0, 0.0));
        assert!(fam.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn unitary_files_enforce_the_model_section() {
        let g = triangle_graph();
        let coin_text = r#"{"coin": {"default": "grover"}}"#;
        assert!(parse_unitaries(coin_text, WalkModel::Coin, &g, true).is_ok());
        assert!(matches!(
            parse_unitaries(coin_text, WalkModel::Scattering, &g, true),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_unitaries(r#"{"gamma": {}}"#, WalkModel::Coin, &g, true),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_unitaries(r#"{"coin": {"default": "fourier"}}"#, WalkModel::Coin, &g, true),
            Err(Error::Parse { .. })
        ));
        // No default and a missing node block is a configuration error.
        assert!(matches!(
            parse_unitaries(r#"{"coin": {}}"#, WalkModel::Coin, &g, true),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn unitarity_gate_applies_only_when_checked() {
        let g = triangle_graph();
        let text = r#"{
            "coin": {
                "default": "grover",
                "overrides": {"0": [[[1.0, 0.0], [0.001, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}
            }
        }"#;
        assert!(matches!(
            parse_unitaries(text, WalkModel::Coin, &g, true),
            Err(Error::UnitarityViolation { .. })
        ));
        let fam = parse_unitaries(text, WalkModel::Coin, &g, false).unwrap();
        assert!(fam.unitarity_deviation() > 1e-4);
    }

    #[test]
    fn state_files_respect_duplicates_ranges_and_the_norm_gate() {
        let g = triangle_graph();
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(
            r#"[{{"node": 0, "port": 1, "amp": [{half}, 0.0]}},
                {{"node": 1, "port": 1, "amp": [0.0, {half}]}}]"#
        );
        let psi = parse_initial_state(&text, &g).unwrap();
        assert!((psi.norm_sq() - 1.0).abs() < 1e-12);

        let dup = r#"[{"node": 0, "port": 1, "amp": [1.0, 0.0]},
                      {"node": 0, "port": 1, "amp": [0.0, 0.0]}]"#;
        assert!(matches!(
            parse_initial_state(dup, &g),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_initial_state(r#"[{"node": 0, "port": 9, "amp": [1.0, 0.0]}]"#, &g),
            Err(Error::PortOutOfRange { .. })
        ));
        assert!(matches!(
            parse_initial_state(r#"[{"node": 0, "port": 1, "amp": [2.0, 0.0]}]"#, &g),
            Err(Error::NormViolation { .. })
        ));
    }

    #[test]
    fn writers_emit_exact_deterministic_bytes() {
        let g = triangle_graph();
        let psi = WalkState::<f64>::basis_state(g.dim(), 0).unwrap();
        let series = vec![node_distribution(&psi, &g).unwrap()];

        let mut csv = Vec::new();
        write_csv(&mut csv, &series).unwrap();
        assert_eq!(
            String::from_utf8(csv.clone()).unwrap(),
            "step,label,probability\n0,n0,1\n0,n1,0\n0,n2,0\n"
        );

        let mut json = Vec::new();
        write_json(&mut json, &series).unwrap();
        assert_eq!(
            String::from_utf8(json.clone()).unwrap(),
            "[{\"n0\":1.0,\"n1\":0.0,\"n2\":0.0}]\n"
        );

        // Byte-identical on a rerun.
        let mut csv2 = Vec::new();
        write_csv(&mut csv2, &series).unwrap();
        assert_eq!(csv, csv2);
        let mut json2 = Vec::new();
        write_json(&mut json2, &series).unwrap();
        assert_eq!(json, json2);
    }
}
