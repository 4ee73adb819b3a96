//! Per-node local unitary families.
//!
//! Both walk pictures are parameterized by one `N_j × N_j` unitary matrix
//! per node `j` of degree `N_j`: the coin picture mixes the ports of a node
//! before the shift, the scattering picture distributes each incoming
//! amplitude over the node's outgoing directions (diagonal entries act as
//! reflection coefficients, off-diagonal entries as transmissions). The
//! [`LocalUnitaryFamily`] container carries the matrices together with a
//! role tag naming the picture they belong to, so operators can refuse a
//! family built for the other picture.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::graph::{NodeId, PortedGraph};
use crate::scalar::WalkFloat;
use crate::state::WalkState;

/// Which picture a coefficient family parameterizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkModel {
    Coin,
    Scattering,
}

impl WalkModel {
    pub fn name(self) -> &'static str {
        match self {
            WalkModel::Coin => "coin",
            WalkModel::Scattering => "scattering",
        }
    }
}

impl std::fmt::Display for WalkModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Library of standard local unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinUnitary {
    /// Identity block (pure reflection in the scattering reading).
    Identity,
    /// `[[1, 1], [1, -1]] / √2`; defined for degree 2 only.
    Hadamard,
    /// `(2/N) J − I`, the reflection about the uniform vector; any degree.
    Grover,
    /// Discrete Fourier block `F[σ', σ] = e^{2πi σ'σ / N} / √N` with the
    /// 1-based port labels in the exponent; any degree.
    Dft,
}

impl BuiltinUnitary {
    pub fn name(self) -> &'static str {
        match self {
            BuiltinUnitary::Identity => "identity",
            BuiltinUnitary::Hadamard => "hadamard",
            BuiltinUnitary::Grover => "grover",
            BuiltinUnitary::Dft => "dft",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(BuiltinUnitary::Identity),
            "hadamard" => Some(BuiltinUnitary::Hadamard),
            "grover" => Some(BuiltinUnitary::Grover),
            "dft" => Some(BuiltinUnitary::Dft),
            _ => None,
        }
    }

    /// Row-major `n × n` matrix of this unitary.
    pub fn matrix<T: WalkFloat>(self, n: usize) -> Result<Vec<Complex<T>>> {
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        match self {
            BuiltinUnitary::Identity => {
                let mut m = vec![zero; n * n];
                for i in 0..n {
                    m[i * n + i] = one;
                }
                Ok(m)
            }
            BuiltinUnitary::Hadamard => {
                if n != 2 {
                    return Err(Error::UnsupportedDegree {
                        unitary: "hadamard",
                        degree: n,
                    });
                }
                let h = Complex::new(T::one() / T::lit(2.0).sqrt(), T::zero());
                Ok(vec![h, h, h, -h])
            }
            BuiltinUnitary::Grover => {
                let off = T::lit(2.0) / T::lit(n as f64);
                let mut m = vec![Complex::new(off, T::zero()); n * n];
                for i in 0..n {
                    m[i * n + i] = Complex::new(off - T::one(), T::zero());
                }
                Ok(m)
            }
            BuiltinUnitary::Dft => {
                let scale = T::one() / T::lit(n as f64).sqrt();
                let mut m = vec![zero; n * n];
                for r in 0..n {
                    for c in 0..n {
                        let k = ((r + 1) * (c + 1)) % n;
                        let theta =
                            T::lit(2.0) * T::PI() * T::lit(k as f64) / T::lit(n as f64);
                        m[r * n + c] =
                            Complex::new(theta.cos() * scale, theta.sin() * scale);
                    }
                }
                Ok(m)
            }
        }
    }
}

/// One `N_j × N_j` complex matrix per node, row-major, tagged with the
/// picture it parameterizes.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitaryFamily<T: WalkFloat> {
    graph: Arc<PortedGraph>,
    model: WalkModel,
    blocks: Vec<Vec<Complex<T>>>,
}

impl<T: WalkFloat> LocalUnitaryFamily<T> {
    /// The same builtin at every node, sized by the node's degree.
    pub fn uniform(
        graph: &Arc<PortedGraph>,
        model: WalkModel,
        builtin: BuiltinUnitary,
    ) -> Result<Self> {
        let blocks = (0..graph.node_count())
            .map(|ix| {
                let degree = graph
                    .degree(graph.node_id(ix))
                    .expect("node ids enumerate existing nodes");
                builtin.matrix(degree)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            graph: graph.clone(),
            model,
            blocks,
        })
    }

    /// Builds a family from one block per node (in node-index order),
    /// enforcing block sizes and unitarity to the scalar's strict
    /// tolerance.
    pub fn from_blocks(
        graph: &Arc<PortedGraph>,
        model: WalkModel,
        blocks: Vec<Vec<Complex<T>>>,
    ) -> Result<Self> {
        let family = Self::from_blocks_unchecked(graph, model, blocks)?;
        family.require_unitary()?;
        Ok(family)
    }

    /// Builds a family checking block sizes only. Non-unitary blocks are
    /// accepted so diagnostic flows can quantify how far a supplied family
    /// deviates instead of refusing it outright; evolution with such a
    /// family does not preserve norms.
    pub fn from_blocks_unchecked(
        graph: &Arc<PortedGraph>,
        model: WalkModel,
        blocks: Vec<Vec<Complex<T>>>,
    ) -> Result<Self> {
        if blocks.len() != graph.node_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.node_count(),
                found: blocks.len(),
            });
        }
        for (ix, block) in blocks.iter().enumerate() {
            let node = graph.node_id(ix);
            let degree = graph.degree(node).expect("node exists");
            if block.len() != degree * degree {
                return Err(Error::BlockDimensionMismatch {
                    node,
                    expected: degree,
                    found: block.len(),
                });
            }
        }
        Ok(Self {
            graph: graph.clone(),
            model,
            blocks,
        })
    }

    /// Replaces the block at `node`, enforcing size and unitarity; the
    /// family is left untouched when the replacement is rejected.
    pub fn set_block(&mut self, node: NodeId, block: Vec<Complex<T>>) -> Result<()> {
        let ix = self.graph.node_index(node)?;
        let degree = self.graph.degree(node).expect("node exists");
        if block.len() != degree * degree {
            return Err(Error::BlockDimensionMismatch {
                node,
                expected: degree,
                found: block.len(),
            });
        }
        let deviation = block_unitarity_deviation(&block);
        if deviation > T::strict_tol() {
            return Err(Error::UnitarityViolation {
                context: format!("node {node}"),
                deviation: deviation.to_f64(),
            });
        }
        self.blocks[ix] = block;
        Ok(())
    }

    /// Replaces the block at `node`, enforcing size only.
    pub fn set_block_unchecked(&mut self, node: NodeId, block: Vec<Complex<T>>) -> Result<()> {
        let ix = self.graph.node_index(node)?;
        let degree = self.graph.degree(node).expect("node exists");
        if block.len() != degree * degree {
            return Err(Error::BlockDimensionMismatch {
                node,
                expected: degree,
                found: block.len(),
            });
        }
        self.blocks[ix] = block;
        Ok(())
    }

    fn require_unitary(&self) -> Result<()> {
        for (ix, block) in self.blocks.iter().enumerate() {
            let deviation = block_unitarity_deviation(block);
            if deviation > T::strict_tol() {
                return Err(Error::UnitarityViolation {
                    context: format!("node {}", self.graph.node_id(ix)),
                    deviation: deviation.to_f64(),
                });
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &Arc<PortedGraph> {
        &self.graph
    }

    pub fn model(&self) -> WalkModel {
        self.model
    }

    /// Row-major block of the node at internal index `ix`.
    pub fn block(&self, ix: usize) -> &[Complex<T>] {
        &self.blocks[ix]
    }

    /// Largest unitarity deviation over all blocks.
    pub fn unitarity_deviation(&self) -> T {
        self.blocks
            .iter()
            .map(|b| block_unitarity_deviation(b))
            .fold(T::zero(), T::max)
    }

    /// Block-diagonal action on a state: each node's amplitudes are mixed
    /// by its own matrix.
    pub fn apply(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        self.apply_impl(state, false)
    }

    /// Block-diagonal action of the adjoint family.
    pub fn apply_adjoint(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        self.apply_impl(state, true)
    }

    fn apply_impl(&self, state: &WalkState<T>, adjoint: bool) -> Result<WalkState<T>> {
        if state.dim() != self.graph.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.graph.dim(),
                found: state.dim(),
            });
        }
        let amps = state.amplitudes();
        let mut out = vec![Complex::new(T::zero(), T::zero()); amps.len()];
        for ix in 0..self.graph.node_count() {
            let node = self.graph.node_id(ix);
            let n = self.graph.degree(node).expect("node exists");
            let off = self
                .graph
                .basis_index(node, 1)
                .expect("every node has port 1");
            let block = &self.blocks[ix];
            for r in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for c in 0..n {
                    let entry = if adjoint {
                        block[c * n + r].conj()
                    } else {
                        block[r * n + c]
                    };
                    acc += entry * amps[off + c];
                }
                out[off + r] = acc;
            }
        }
        Ok(WalkState::from_raw(out))
    }
}

/// Largest entrywise modulus of `B†B − I` for a row-major square block.
pub(crate) fn block_unitarity_deviation<T: WalkFloat>(block: &[Complex<T>]) -> T {
    let n = (block.len() as f64).sqrt() as usize;
    debug_assert_eq!(n * n, block.len());
    let mut worst = T::zero();
    for r in 0..n {
        for c in 0..n {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..n {
                acc += block[k * n + r].conj() * block[k * n + c];
            }
            if r == c {
                acc -= Complex::new(T::one(), T::zero());
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}
