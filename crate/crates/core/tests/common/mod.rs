//! Self-contained dense-matrix oracle used by the integration suites.
//!
//! Everything here is brute force on purpose: evolution matrices are
//! assembled entry-by-entry from the defining actions of the operators and
//! combined with plain O(n³) matrix products, touching none of the engine's
//! sparse application or dense-export code paths. Agreement between this
//! oracle and the engine is what the suites assert.

#![allow(dead_code)]
// Explicit basis-index loops are the point of an oracle; keep them even
// where an iterator adapter would satisfy the lint.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex;
use qwalk::equivalence::EquivalenceMap;
use qwalk::graph::{PortedGraph, ShiftPermutation};
use qwalk::unitary::LocalUnitaryFamily;

pub type C64 = Complex<f64>;
/// Dense row-major complex matrix.
pub type Mat = Vec<Vec<C64>>;

pub fn zeros(n: usize) -> Mat {
    vec![vec![C64::new(0.0, 0.0); n]; n]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik != C64::new(0.0, 0.0) {
                for (j, &bkj) in b[k].iter().enumerate() {
                    out[i][j] += aik * bkj;
                }
            }
        }
    }
    out
}

pub fn adjoint(a: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

pub fn matvec(a: &Mat, v: &[C64]) -> Vec<C64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    let mut worst = 0.0f64;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            worst = worst.max((x - y).norm());
        }
    }
    worst
}

/// Max-entry deviation of A†A from the identity.
pub fn unitarity_deviation(a: &Mat) -> f64 {
    max_abs_diff(&matmul(&adjoint(a), a), &identity(a.len()))
}

/// Conjugation by a basis permutation, (P† A P)[r][c] = A[fwd(r)][fwd(c)],
/// where `fwd` maps a source basis index to its image index.
pub fn permutation_conjugate(a: &Mat, fwd: &[usize]) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for r in 0..n {
        for c in 0..n {
            out[r][c] = a[fwd[r]][fwd[c]];
        }
    }
    out
}

/// Dense shift matrix assembled from the topology tables alone: the column
/// for source state (j,σ) has a single 1 at row (neighbor(j,σ), μ(j,σ)).
pub fn oracle_shift_matrix(graph: &PortedGraph, shift: &ShiftPermutation) -> Mat {
    let dim = graph.dim();
    let mut s = zeros(dim);
    for d in 0..dim {
        let (j, sigma) = graph.basis_label(d);
        let target_node = graph.neighbor(j, sigma).unwrap();
        let target_port = shift.target_port(j, sigma).unwrap();
        let t = graph.basis_index(target_node, target_port).unwrap();
        s[t][d] = C64::new(1.0, 0.0);
    }
    s
}

/// Dense block-diagonal matrix of a local-unitary family in the walk basis.
pub fn oracle_block_diagonal(graph: &PortedGraph, family: &LocalUnitaryFamily<f64>) -> Mat {
    let dim = graph.dim();
    let mut m = zeros(dim);
    for ix in 0..graph.node_count() {
        let j = graph.node_id(ix);
        let deg = graph.degree(j).unwrap();
        let block = family.block(ix);
        for r in 0..deg {
            let row = graph.basis_index(j, r + 1).unwrap();
            for c in 0..deg {
                let col = graph.basis_index(j, c + 1).unwrap();
                m[row][col] = block[r * deg + c];
            }
        }
    }
    m
}

/// One coin-walk step as an explicit product: shift matrix times the
/// block-diagonal coin matrix.
pub fn oracle_coin_matrix(
    graph: &PortedGraph,
    shift: &ShiftPermutation,
    coins: &LocalUnitaryFamily<f64>,
) -> Mat {
    matmul(
        &oracle_shift_matrix(graph, shift),
        &oracle_block_diagonal(graph, coins),
    )
}

/// One scattering-walk step assembled entry-by-entry: the column for the
/// state incoming to node j along port σ carries Γ^(j)[α,σ] at the row of
/// the state incoming to neighbor(j,α) along the reciprocal port, for every
/// port α of j.
pub fn oracle_scattering_matrix(graph: &PortedGraph, gammas: &LocalUnitaryFamily<f64>) -> Mat {
    let dim = graph.dim();
    let mut m = zeros(dim);
    for d in 0..dim {
        let (j, sigma) = graph.basis_label(d);
        let ix = graph.node_index(j).unwrap();
        let deg = graph.degree(j).unwrap();
        let block = gammas.block(ix);
        for alpha in 1..=deg {
            let out_node = graph.neighbor(j, alpha).unwrap();
            let out_port = graph.reciprocal(j, alpha).unwrap();
            let t = graph.basis_index(out_node, out_port).unwrap();
            m[t][d] += block[(alpha - 1) * deg + (sigma - 1)];
        }
    }
    m
}

/// The intertwiner as a dense 0/1 matrix built from its index table.
pub fn oracle_equivalence_matrix(map: &EquivalenceMap) -> Mat {
    let dim = map.dim();
    let mut e = zeros(dim);
    for d in 0..dim {
        e[map.forward_index(d)][d] = C64::new(1.0, 0.0);
    }
    e
}

/// Node-probability masses of an amplitude vector, keyed by node id.
pub fn node_probabilities(graph: &PortedGraph, amps: &[C64]) -> Vec<(i64, f64)> {
    let mut out = Vec::with_capacity(graph.node_count());
    for ix in 0..graph.node_count() {
        let j = graph.node_id(ix);
        let deg = graph.degree(j).unwrap();
        let mut p = 0.0;
        for sigma in 1..=deg {
            p += amps[graph.basis_index(j, sigma).unwrap()].norm_sqr();
        }
        out.push((j, p));
    }
    out
}

/// Convert an engine-side dense matrix into the oracle representation.
pub fn from_engine(m: &qwalk::dense::CMatrix<f64>) -> Mat {
    let n = m.dim();
    let mut out = zeros(n);
    for r in 0..n {
        for c in 0..n {
            out[r][c] = m.get(r, c);
        }
    }
    out
}
