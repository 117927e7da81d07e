use std::sync::Arc;

use ndarray::Array1;

use super::dense::{pinv, pinv_with_norm, CVector, ComplexMatrix, C64};
use super::index::IndexSet;
use crate::error::{Error, Result};

/// `B(H)`-valued matrix `[A_{k,l}]_{k,l in X}` with `n x n` blocks, stored densely
/// in row-major block order.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    index_set: Arc<IndexSet>,
    n: usize,
    blocks: Vec<ComplexMatrix>,
}

fn same_index_set(a: &Arc<IndexSet>, b: &Arc<IndexSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn check_index_sets(a: &Arc<IndexSet>, b: &Arc<IndexSet>) -> Result<()> {
    if same_index_set(a, b) {
        Ok(())
    } else {
        Err(Error::Dimension("operands are indexed by different index sets".into()))
    }
}

impl BlockMatrix {
    /// Builds a block matrix from a block generator `(k, l) -> A_{k,l}`.
    pub fn from_fn(
        index_set: Arc<IndexSet>,
        n: usize,
        mut f: impl FnMut(usize, usize) -> ComplexMatrix,
    ) -> Result<Self> {
        let len = index_set.len();
        let mut blocks = Vec::with_capacity(len * len);
        for k in 0..len {
            for l in 0..len {
                let b = f(k, l);
                if b.shape() != (n, n) {
                    return Err(Error::Dimension(format!(
                        "block ({k}, {l}) has shape {:?}, expected {n}x{n}",
                        b.shape()
                    )));
                }
                blocks.push(b);
            }
        }
        Ok(Self { index_set, n, blocks })
    }

    /// Sparse construction: listed blocks are set, all others are zero.
    pub fn from_sparse(
        index_set: Arc<IndexSet>,
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, ComplexMatrix)>,
    ) -> Result<Self> {
        let mut a = Self::zeros(index_set, n);
        for (k, l, b) in entries {
            a.set_block(k, l, b)?;
        }
        Ok(a)
    }

    pub fn zeros(index_set: Arc<IndexSet>, n: usize) -> Self {
        let len = index_set.len();
        Self { index_set, n, blocks: vec![ComplexMatrix::zeros(n, n); len * len] }
    }

    pub fn identity(index_set: Arc<IndexSet>, n: usize) -> Self {
        let mut a = Self::zeros(index_set, n);
        let len = a.len();
        for k in 0..len {
            a.blocks[k * len + k] = ComplexMatrix::identity(n);
        }
        a
    }

    /// Block-diagonal matrix with the given diagonal blocks.
    pub fn block_diagonal(index_set: Arc<IndexSet>, diag: Vec<ComplexMatrix>) -> Result<Self> {
        if diag.len() != index_set.len() {
            return Err(Error::Dimension(format!(
                "{} diagonal blocks for {} index points",
                diag.len(),
                index_set.len()
            )));
        }
        let n = diag.first().map_or(0, |b| b.rows());
        Self::from_sparse(index_set, n, diag.into_iter().enumerate().map(|(k, b)| (k, k, b)))
    }

    /// Number of index points.
    pub fn len(&self) -> usize {
        self.index_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Ambient dimension `n` of each block.
    pub fn block_dim(&self) -> usize {
        self.n
    }

    pub fn index_set(&self) -> &Arc<IndexSet> {
        &self.index_set
    }

    pub fn block(&self, k: usize, l: usize) -> &ComplexMatrix {
        &self.blocks[k * self.len() + l]
    }

    pub fn set_block(&mut self, k: usize, l: usize, b: ComplexMatrix) -> Result<()> {
        let len = self.len();
        if k >= len || l >= len {
            return Err(Error::Dimension(format!("block ({k}, {l}) outside a {len}-point index set")));
        }
        if b.shape() != (self.n, self.n) {
            return Err(Error::Dimension(format!(
                "block has shape {:?}, expected {}x{}",
                b.shape(),
                self.n,
                self.n
            )));
        }
        self.blocks[k * len + l] = b;
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        check_index_sets(&self.index_set, &other.index_set)?;
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "block dimensions {} and {} differ",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// `[AB]_{k,l} = sum_m A_{k,m} B_{m,l}`, summed in increasing `m`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let len = self.len();
        Self::from_fn(self.index_set.clone(), self.n, |k, l| {
            let mut acc = ComplexMatrix::zeros(self.n, self.n);
            for m in 0..len {
                acc = &acc + &(self.block(k, m) * other.block(m, l));
            }
            acc
        })
    }

    /// Involution `(A^*)_{k,l} = (A_{l,k})^*`.
    pub fn adjoint(&self) -> Self {
        let len = self.len();
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for k in 0..len {
            for l in 0..len {
                blocks.push(self.block(l, k).adjoint());
            }
        }
        Self { index_set: self.index_set.clone(), n: self.n, blocks }
    }

    /// `(Av)_k = sum_l A_{k,l} v_l`.
    pub fn apply(&self, v: &BlockVector) -> Result<BlockVector> {
        check_index_sets(&self.index_set, &v.index_set)?;
        if v.n != self.n {
            return Err(Error::Dimension(format!(
                "vector components have dimension {}, blocks {}",
                v.n, self.n
            )));
        }
        let len = self.len();
        let components = (0..len)
            .map(|k| {
                let mut acc = CVector::zeros(self.n);
                for l in 0..len {
                    acc = acc + self.block(k, l).as_array().dot(&v.components[l]);
                }
                acc
            })
            .collect();
        Ok(BlockVector { index_set: self.index_set.clone(), n: self.n, components })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(Self { index_set: self.index_set.clone(), n: self.n, blocks })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect();
        Ok(Self { index_set: self.index_set.clone(), n: self.n, blocks })
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            index_set: self.index_set.clone(),
            n: self.n,
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }

    /// Applies `f` to every block, keeping the layout.
    pub fn map_blocks(&self, mut f: impl FnMut(usize, usize, &ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        Self::from_fn(self.index_set.clone(), self.n, |k, l| f(k, l, self.block(k, l)))
    }

    /// The `|X| n x |X| n` matrix acting on `C^{|X| n} = l^2(X; H)`.
    pub fn flatten(&self) -> ComplexMatrix {
        let len = self.len();
        let n = self.n;
        let mut m = ComplexMatrix::zeros(len * n, len * n);
        for k in 0..len {
            for l in 0..len {
                m.write_block(k * n, l * n, self.block(k, l));
            }
        }
        m
    }

    /// Inverse of [`flatten`](Self::flatten).
    pub fn unflatten(m: &ComplexMatrix, index_set: Arc<IndexSet>, n: usize) -> Result<Self> {
        let size = index_set.len() * n;
        if m.shape() != (size, size) {
            return Err(Error::Dimension(format!(
                "matrix of shape {:?} cannot be split into {}x{} blocks of size {n}",
                m.shape(),
                index_set.len(),
                index_set.len()
            )));
        }
        Self::from_fn(index_set, n, |k, l| m.submatrix(k * n, l * n, n, n))
    }

    /// Block pseudo-inverse `unflatten(pinv(flatten(A)))`.
    pub fn pinv(&self, rtol: Option<f64>) -> Result<Self> {
        let p = pinv(&self.flatten(), rtol)?;
        Self::unflatten(&p, self.index_set.clone(), self.n)
    }

    /// [`BlockMatrix::pinv`] together with the operator norm of the result.
    pub(crate) fn pinv_with_norm(&self, rtol: Option<f64>) -> Result<(Self, f64)> {
        let (p, norm) = pinv_with_norm(&self.flatten(), rtol)?;
        Ok((Self::unflatten(&p, self.index_set.clone(), self.n)?, norm))
    }
}

/// `H`-valued sequence `(f_k)_{k in X}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockVector {
    index_set: Arc<IndexSet>,
    n: usize,
    components: Vec<CVector>,
}

impl BlockVector {
    pub fn new(index_set: Arc<IndexSet>, components: Vec<CVector>) -> Result<Self> {
        if components.len() != index_set.len() {
            return Err(Error::Dimension(format!(
                "{} components for {} index points",
                components.len(),
                index_set.len()
            )));
        }
        let n = components.first().map_or(0, |c| c.len());
        if components.iter().any(|c| c.len() != n) {
            return Err(Error::Dimension("components of unequal dimension".into()));
        }
        Ok(Self { index_set, n, components })
    }

    pub fn zeros(index_set: Arc<IndexSet>, n: usize) -> Self {
        let len = index_set.len();
        Self { index_set, n, components: vec![CVector::zeros(n); len] }
    }

    pub fn index_set(&self) -> &Arc<IndexSet> {
        &self.index_set
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_dim(&self) -> usize {
        self.n
    }

    pub fn component(&self, k: usize) -> &CVector {
        &self.components[k]
    }

    pub fn components(&self) -> &[CVector] {
        &self.components
    }

    pub fn component_norms(&self) -> Vec<f64> {
        self.components.iter().map(vector_norm).collect()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            index_set: self.index_set.clone(),
            n: self.n,
            components: self.components.iter().map(|v| v.mapv(|z| z * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_index_sets(&self.index_set, &other.index_set)?;
        if self.n != other.n {
            return Err(Error::Dimension("component dimensions differ".into()));
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect();
        Ok(Self { index_set: self.index_set.clone(), n: self.n, components })
    }

    /// `<u, v>_{l^2(X; H)}`, linear in the first argument.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        check_index_sets(&self.index_set, &other.index_set)?;
        if self.n != other.n {
            return Err(Error::Dimension("component dimensions differ".into()));
        }
        Ok(self.components.iter().zip(&other.components).map(|(a, b)| inner(a, b)).sum())
    }

    /// Concatenation of the components into `C^{|X| n}`.
    pub fn flatten(&self) -> CVector {
        let mut out = Array1::zeros(self.len() * self.n);
        for (k, c) in self.components.iter().enumerate() {
            out.slice_mut(ndarray::s![k * self.n..(k + 1) * self.n]).assign(c);
        }
        out
    }

    pub fn unflatten(v: &CVector, index_set: Arc<IndexSet>, n: usize) -> Result<Self> {
        if v.len() != index_set.len() * n {
            return Err(Error::Dimension(format!(
                "vector of length {} cannot be split into {} components of size {n}",
                v.len(),
                index_set.len()
            )));
        }
        let components = (0..index_set.len())
            .map(|k| v.slice(ndarray::s![k * n..(k + 1) * n]).to_owned())
            .collect();
        Ok(Self { index_set, n, components })
    }
}

/// `<a, b> = sum_i a_i conj(b_i)`.
pub(crate) fn inner(a: &CVector, b: &CVector) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub(crate) fn vector_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
