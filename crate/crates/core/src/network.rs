//! Node data, coupling topology and assembly of the compact networked system
//!
//! ```text
//! ẋᵢ = Aᵢxᵢ + Σⱼ βᵢⱼ Hᵢ Cⱼ xⱼ + δᵢ Bᵢ uᵢ + fᵢ(t, xᵢ)
//! ```
//!
//! into `Ẋ = 𝒜X + ΨU + F(t, X)` with `𝒜 = blockdiag{Aᵢ} + [βᵢⱼ Hᵢ Cⱼ]` and
//! `Ψ = blockdiag{δᵢ Bᵢ}`.
//!
//! Shapes follow the conformable convention: `Aᵢ` is `nᵢ×nᵢ`, `Bᵢ` is `nᵢ×pᵢ`,
//! `Cᵢ` is `m×nᵢ` and `Hᵢ` is `nᵢ×m`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Dynamics `(Aᵢ, Bᵢ, Cᵢ, Hᵢ)` of a single node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeDynamics {
    /// One-based position of the node in the network.
    pub index: usize,
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub c: DenseMatrix,
    pub h: DenseMatrix,
}

impl NodeDynamics {
    pub fn new(index: usize, a: DenseMatrix, b: DenseMatrix, c: DenseMatrix, h: DenseMatrix) -> Self {
        Self { index, a, b, c, h }
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Input dimension.
    pub fn p(&self) -> usize {
        self.b.cols()
    }

    /// Coupling dimension.
    pub fn m(&self) -> usize {
        self.c.rows()
    }
}

/// Coupling weights `βᵢⱼ` (row `i` receives from column `j`) and input flags `δᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology {
    pub beta: DenseMatrix,
    pub delta: Vec<u32>,
    pub m: usize,
}

impl NetworkTopology {
    pub fn new(beta: DenseMatrix, delta: Vec<u32>, m: usize) -> Self {
        Self { beta, delta, m }
    }

    pub fn node_count(&self) -> usize {
        self.delta.len()
    }
}

/// One validation finding. `node` is one-based; `None` refers to the topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub node: Option<usize>,
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn node(index: usize, field: &str, message: impl Into<String>) -> Self {
        Self {
            node: Some(index),
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn topology(field: &str, message: impl Into<String>) -> Self {
        Self {
            node: None,
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(i) => write!(f, "node {i}, field {}: {}", self.field, self.message),
            None => write!(f, "topology, field {}: {}", self.field, self.message),
        }
    }
}

fn expect_shape(
    diags: &mut Vec<Diagnostic>,
    index: usize,
    field: &str,
    m: &DenseMatrix,
    want: (usize, usize),
) {
    if m.shape() != want {
        diags.push(Diagnostic::node(
            index,
            field,
            format!(
                "shape {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                want.0,
                want.1
            ),
        ));
    } else if !m.is_finite() {
        diags.push(Diagnostic::node(index, field, "non-finite entry"));
    }
}

/// Checks every shape, finiteness and flag-domain invariant. An empty result
/// means [`assemble`] will succeed.
pub fn validate(nodes: &[NodeDynamics], topology: &NetworkTopology) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let m = topology.m;

    if nodes.is_empty() {
        diags.push(Diagnostic::topology("nodes", "network has no nodes"));
    }
    for (pos, node) in nodes.iter().enumerate() {
        let i = pos + 1;
        if node.index != i {
            diags.push(Diagnostic::node(
                i,
                "index",
                format!("index {} does not match position {i}", node.index),
            ));
        }
        let n = node.n();
        if n == 0 {
            diags.push(Diagnostic::node(i, "A", "state dimension is zero"));
        }
        expect_shape(&mut diags, i, "A", &node.a, (n, n));
        expect_shape(&mut diags, i, "B", &node.b, (n, node.p()));
        expect_shape(&mut diags, i, "C", &node.c, (m, n));
        expect_shape(&mut diags, i, "H", &node.h, (n, m));
    }

    let count = nodes.len();
    if topology.beta.shape() != (count, count) {
        diags.push(Diagnostic::topology(
            "beta",
            format!(
                "shape {}x{}, expected {count}x{count}",
                topology.beta.rows(),
                topology.beta.cols()
            ),
        ));
    } else if !topology.beta.is_finite() {
        diags.push(Diagnostic::topology("beta", "non-finite entry"));
    }
    if topology.delta.len() != count {
        diags.push(Diagnostic::topology(
            "delta",
            format!("{} entries, expected {count}", topology.delta.len()),
        ));
    }
    for (pos, &d) in topology.delta.iter().enumerate() {
        if d > 1 {
            diags.push(Diagnostic::topology(
                "delta",
                format!("entry {} is {d}, not in {{0,1}}", pos + 1),
            ));
        }
    }
    diags
}

/// Offsets of one node's block inside the stacked state and input vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockOffset {
    pub state: usize,
    pub input: usize,
    pub n: usize,
    pub p: usize,
}

/// The compact linear part `(𝒜, Ψ)` of the networked system.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkedSystem {
    a: DenseMatrix,
    psi: DenseMatrix,
    blocks: Vec<BlockOffset>,
}

impl NetworkedSystem {
    /// Wraps a plain LTI pair as a single-block system.
    pub fn from_matrices(a: DenseMatrix, psi: DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if psi.rows() != a.rows() {
            return Err(Error::DimensionMismatch {
                what: "input matrix rows".into(),
                expected: a.rows(),
                found: psi.rows(),
            });
        }
        let blocks = vec![BlockOffset {
            state: 0,
            input: 0,
            n: a.rows(),
            p: psi.cols(),
        }];
        Ok(Self { a, psi, blocks })
    }

    /// Total state dimension `Σnᵢ`.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Total input dimension `Σpᵢ`.
    pub fn p(&self) -> usize {
        self.psi.cols()
    }

    /// The coupled state matrix `𝒜`.
    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    /// The effective input matrix `Ψ`.
    pub fn psi(&self) -> &DenseMatrix {
        &self.psi
    }

    pub fn blocks(&self) -> &[BlockOffset] {
        &self.blocks
    }
}

/// Builds `(𝒜, Ψ)` from validated node data.
pub fn assemble(nodes: &[NodeDynamics], topology: &NetworkTopology) -> Result<NetworkedSystem> {
    let diags = validate(nodes, topology);
    if !diags.is_empty() {
        return Err(Error::InvalidNetwork(diags));
    }

    let mut blocks = Vec::with_capacity(nodes.len());
    let (mut so, mut io) = (0, 0);
    for node in nodes {
        blocks.push(BlockOffset {
            state: so,
            input: io,
            n: node.n(),
            p: node.p(),
        });
        so += node.n();
        io += node.p();
    }

    let mut a = DenseMatrix::zeros(so, so);
    let mut psi = DenseMatrix::zeros(so, io);
    for (i, (node, bi)) in nodes.iter().zip(&blocks).enumerate() {
        a.add_block(bi.state, bi.state, &node.a);
        for (j, (other, bj)) in nodes.iter().zip(&blocks).enumerate() {
            let w = topology.beta[(i, j)];
            if w != 0.0 {
                let coupling = (&node.h * &other.c).scale(w);
                a.add_block(bi.state, bj.state, &coupling);
            }
        }
        if topology.delta[i] == 1 {
            psi.add_block(bi.state, bi.input, &node.b);
        }
    }
    Ok(NetworkedSystem { a, psi, blocks })
}
