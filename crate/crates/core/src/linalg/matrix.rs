use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ring::Ring;
use crate::error::{contract, Result};

/// Sparse matrix with exact entries, stored by column with row indices sorted.
/// No stored entry is zero in the matrix's ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    ring: Ring,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize, ring: Ring) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            ring,
            data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize, ring: Ring) -> Self {
        let data = (0..n).map(|i| vec![(i, BigInt::one())]).collect();
        SparseIntMatrix {
            rows: n,
            cols: n,
            ring,
            data,
        }
    }

    /// Builds a matrix from (row, col, value) triplets. Duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, ring: Ring, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return contract(format!("entry ({r},{c}) outside a {rows}x{cols} matrix"));
            }
            data[c].push((r, v));
        }
        Ok(Self::normalize(rows, cols, ring, data))
    }

    fn normalize(
        rows: usize,
        cols: usize,
        ring: Ring,
        mut data: Vec<Vec<(usize, BigInt)>>,
    ) -> Self {
        for col in data.iter_mut() {
            col.sort_by_key(|e| e.0);
            let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match out.last_mut() {
                    Some(last) if last.0 == r => last.1 += v,
                    _ => out.push((r, v)),
                }
            }
            *col = out
                .into_iter()
                .map(|(r, v)| (r, ring.reduce(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect();
        }
        SparseIntMatrix {
            rows,
            cols,
            ring,
            data,
        }
    }

    /// Row-major dense constructor, mostly for tests and small examples.
    pub fn from_dense(ring: Ring, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return contract(format!(
                "{} entries given for a {rows}x{cols} matrix",
                entries.len()
            ));
        }
        let trip = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .zip(entries.iter())
            .map(|((r, c), v)| (r, c, BigInt::from(*v)));
        Self::from_triplets(rows, cols, ring, trip)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.data[c]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.data[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.data[c][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Column-major iteration over stored entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    /// Row-major list of sparse rows.
    pub(crate) fn to_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            out[r].push((c, v.clone()));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            data[r].push((c, v.clone()));
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            ring: self.ring,
            data,
        }
    }

    /// Reinterprets the entries in another ring (reducing mod p if needed).
    pub fn with_ring(&self, ring: Ring) -> Self {
        if ring == self.ring {
            return self.clone();
        }
        Self::normalize(self.rows, self.cols, ring, self.data.clone())
    }

    pub fn neg(&self) -> Self {
        let ring = self.ring;
        let data = self
            .data
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, ring.neg(v))).collect())
            .collect();
        SparseIntMatrix {
            rows: self.rows,
            cols: self.cols,
            ring,
            data,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let data = self
            .data
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, v * k)).collect())
            .collect();
        Self::normalize(self.rows, self.cols, self.ring, data)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return contract(format!("ring mismatch: {} vs {}", self.ring, other.ring));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return contract(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.iter().chain(b.iter()).cloned().collect())
            .collect();
        Ok(Self::normalize(self.rows, self.cols, self.ring, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return contract(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); self.rows];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.rows];
        let mut data = Vec::with_capacity(other.cols);
        for col in &other.data {
            for (k, b) in col {
                for (r, a) in &self.data[*k] {
                    if !mark[*r] {
                        mark[*r] = true;
                        touched.push(*r);
                    }
                    acc[*r] += a * b;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for r in touched.drain(..) {
                mark[r] = false;
                let v = std::mem::take(&mut acc[r]);
                let v = self.ring.reduce(v);
                if !v.is_zero() {
                    out.push((r, v));
                }
            }
            data.push(out);
        }
        Ok(SparseIntMatrix {
            rows: self.rows,
            cols: other.cols,
            ring: self.ring,
            data,
        })
    }

    /// Assembles a block matrix. `blocks` lists (block-row, block-col, matrix);
    /// missing blocks are zero.
    pub fn block(
        ring: Ring,
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[(usize, usize, &SparseIntMatrix)],
    ) -> Result<Self> {
        let row_off: Vec<usize> = offsets(row_sizes);
        let col_off: Vec<usize> = offsets(col_sizes);
        let rows = row_off[row_sizes.len()];
        let cols = col_off[col_sizes.len()];
        let mut data = vec![Vec::new(); cols];
        for (bi, bj, m) in blocks {
            if *bi >= row_sizes.len() || *bj >= col_sizes.len() {
                return contract("block index out of range");
            }
            if m.rows != row_sizes[*bi] || m.cols != col_sizes[*bj] {
                return contract(format!(
                    "block ({bi},{bj}) is {}x{}, expected {}x{}",
                    m.rows, m.cols, row_sizes[*bi], col_sizes[*bj]
                ));
            }
            if m.ring != ring {
                return contract("block ring mismatch");
            }
            for (r, c, v) in m.entries() {
                data[col_off[*bj] + c].push((row_off[*bi] + r, v.clone()));
            }
        }
        Ok(Self::normalize(rows, cols, ring, data))
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn submatrix(&self, row_sel: &[usize], col_sel: &[usize]) -> Self {
        let mut row_map = vec![usize::MAX; self.rows];
        for (k, r) in row_sel.iter().enumerate() {
            row_map[*r] = k;
        }
        let data = col_sel
            .iter()
            .map(|c| {
                let mut col: Vec<(usize, BigInt)> = self.data[*c]
                    .iter()
                    .filter(|(r, _)| row_map[*r] != usize::MAX)
                    .map(|(r, v)| (row_map[*r], v.clone()))
                    .collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        SparseIntMatrix {
            rows: row_sel.len(),
            cols: col_sel.len(),
            ring: self.ring,
            data,
        }
    }

    /// Kronecker product; the left factor indexes the most significant digit.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut trip = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, a) in self.entries() {
            for (r2, c2, b) in other.entries() {
                trip.push((r1 * other.rows + r2, c1 * other.cols + c2, a * b));
            }
        }
        Self::from_triplets(
            self.rows * other.rows,
            self.cols * other.cols,
            self.ring,
            trip,
        )
    }

    /// Largest absolute value of a stored entry (0 for the zero matrix).
    pub fn max_abs(&self) -> BigInt {
        self.entries()
            .map(|(_, _, v)| v.abs())
            .max()
            .unwrap_or_default()
    }
}

pub(crate) fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}
