//! Edge spreading: spreading matrices, b-vector encoding, convolutional
//! exponent matrices and their terminations, and the search-space and
//! equivalence bookkeeping around them.
//!
//! A spreading matrix B assigns every entry of an exponent matrix P to one
//! of m_s+1 memory slices P_0..P_{m_s}; stacking the slices down a
//! block-diagonal band gives the convolutional exponent matrix, and taking
//! its first (L+m_s)m block rows and Ln block columns gives the exponent
//! matrix of the terminated spatially coupled code.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::qc::ExponentMatrix;

/// An m x n grid over [0, m_s]: entry (i,j) names the slice that receives
/// p_{i,j}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpreadingMatrix {
    rows: usize,
    cols: usize,
    memory: u32,
    entries: Vec<u32>,
}

impl SpreadingMatrix {
    pub fn new(rows: usize, cols: usize, memory: u32, entries: Vec<u32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if let Some(&e) = entries.iter().find(|&&e| e > memory) {
            return Err(Error::SpreadingOutOfRange {
                value: e,
                memory,
            });
        }
        Ok(Self {
            rows,
            cols,
            memory,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize, memory: u32) -> Self {
        Self::new(rows, cols, memory, vec![0; rows * cols]).expect("zero matrix is valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn memory(&self) -> u32 {
        self.memory
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) -> Result<()> {
        if value > self.memory {
            return Err(Error::SpreadingOutOfRange {
                value,
                memory: self.memory,
            });
        }
        self.entries[i * self.cols + j] = value;
        Ok(())
    }

    /// Number of non-zero entries; the tier of this matrix in the search tree.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    /// Column-wise base-(m_s+1) encoding, row 0 most significant.
    pub fn b_encode(&self) -> BVector {
        let base = u64::from(self.memory) + 1;
        let values = (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(0u64, |acc, i| acc * base + u64::from(self.get(i, j)))
            })
            .collect();
        BVector {
            rows: self.rows,
            memory: self.memory,
            values,
        }
    }
}

/// Length-n base-(m_s+1) encoding of a spreading matrix, one value per
/// column with row 0 as the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BVector {
    rows: usize,
    memory: u32,
    values: Vec<u64>,
}

impl BVector {
    pub fn new(rows: usize, memory: u32, values: Vec<u64>) -> Result<Self> {
        let base = u64::from(memory) + 1;
        let limit = base.checked_pow(rows as u32).unwrap_or(u64::MAX);
        if let Some(&v) = values.iter().find(|&&v| v >= limit) {
            return Err(Error::BVectorOutOfRange {
                value: v,
                rows,
                base,
            });
        }
        Ok(Self {
            rows,
            memory,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn memory(&self) -> u32 {
        self.memory
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn b_decode(&self) -> SpreadingMatrix {
        let base = u64::from(self.memory) + 1;
        let cols = self.values.len();
        let mut entries = vec![0u32; self.rows * cols];
        for (j, &v) in self.values.iter().enumerate() {
            let mut rest = v;
            for i in (0..self.rows).rev() {
                entries[i * cols + j] = (rest % base) as u32;
                rest /= base;
            }
        }
        SpreadingMatrix::new(self.rows, cols, self.memory, entries)
            .expect("decoded digits are below the base")
    }
}

/// The memory slices P_0..P_{m_s} of an edge spreading: each non-void
/// entry of P appears in exactly the slice named by B, void elsewhere.
#[derive(Debug, Clone)]
pub struct ConvolutionalBlocks {
    blocks: Vec<ExponentMatrix>,
}

impl ConvolutionalBlocks {
    pub fn blocks(&self) -> &[ExponentMatrix] {
        &self.blocks
    }

    pub fn memory(&self) -> u32 {
        (self.blocks.len() - 1) as u32
    }

    pub fn rows(&self) -> usize {
        self.blocks[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.blocks[0].cols()
    }

    pub fn lifting(&self) -> u32 {
        self.blocks[0].lifting()
    }

    /// Terminated convolutional exponent matrix with `sections` coupled
    /// periods: block-column t holds P_0..P_{m_s} at block-rows t..t+m_s.
    pub fn terminate(&self, sections: usize) -> TerminatedCode {
        let sections = sections.max(1);
        let m = self.rows();
        let n = self.cols();
        let ms = self.blocks.len() - 1;
        let rows = (sections + ms) * m;
        let cols = sections * n;
        let mut entries = vec![None; rows * cols];
        for t in 0..sections {
            for (k, block) in self.blocks.iter().enumerate() {
                for i in 0..m {
                    for j in 0..n {
                        if let Some(p) = block.get(i, j) {
                            let r = (t + k) * m + i;
                            let c = t * n + j;
                            entries[r * cols + c] = Some(p);
                        }
                    }
                }
            }
        }
        let matrix = ExponentMatrix::new(rows, cols, self.lifting(), entries)
            .expect("terminated matrix entries are in range");
        TerminatedCode {
            sections,
            base: self.clone(),
            matrix,
        }
    }
}

/// A terminated spatially coupled code: L coupled periods of the
/// convolutional exponent matrix.
#[derive(Debug, Clone)]
pub struct TerminatedCode {
    sections: usize,
    base: ConvolutionalBlocks,
    matrix: ExponentMatrix,
}

impl TerminatedCode {
    pub fn sections(&self) -> usize {
        self.sections
    }

    pub fn base(&self) -> &ConvolutionalBlocks {
        &self.base
    }

    pub fn matrix(&self) -> &ExponentMatrix {
        &self.matrix
    }
}

/// Partitions P's entries among the slices named by B.
pub fn edge_spread(p: &ExponentMatrix, b: &SpreadingMatrix) -> Result<ConvolutionalBlocks> {
    if b.rows() != p.rows() || b.cols() != p.cols() {
        return Err(Error::ShapeMismatch {
            brows: b.rows(),
            bcols: b.cols(),
            prows: p.rows(),
            pcols: p.cols(),
        });
    }
    let blocks = (0..=b.memory())
        .map(|k| {
            let entries = (0..p.rows())
                .flat_map(|i| {
                    (0..p.cols()).map(move |j| {
                        p.get(i, j).filter(|_| b.get(i, j) == k)
                    })
                })
                .collect();
            ExponentMatrix::new(p.rows(), p.cols(), p.lifting(), entries)
                .expect("slice entries come from a valid exponent matrix")
        })
        .collect();
    Ok(ConvolutionalBlocks { blocks })
}

/// Number of spreading matrices with at least one zero per column:
/// ((m_s+1)^m - m_s^m)^n, exactly.
pub fn search_space_size(m: usize, n: usize, memory: u32) -> BigUint {
    let base = BigUint::from(memory + 1);
    let inner = base.pow(m as u32) - BigUint::from(memory).pow(m as u32);
    let mut out = BigUint::one();
    for _ in 0..n {
        out *= &inner;
    }
    out
}

/// Default termination length for spectrum work on cycles of length
/// `lambda`: the maximal section span floor(lambda/4)*m_s + 1.
pub fn max_span(lambda: usize, memory: u32) -> usize {
    (lambda / 4) * memory as usize + 1
}

/// Equivalent exponent matrix with at least one zero in each column:
/// subtracts each column's topmost non-void entry mod N.
pub fn canonicalize(p: &ExponentMatrix) -> Result<ExponentMatrix> {
    let n = i64::from(p.lifting());
    let mut entries = Vec::with_capacity(p.rows() * p.cols());
    let mut offsets = Vec::with_capacity(p.cols());
    for j in 0..p.cols() {
        let top = (0..p.rows())
            .find_map(|i| p.get(i, j))
            .ok_or(Error::FullyVoidColumn(j))?;
        offsets.push(i64::from(top));
    }
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            entries.push(
                p.get(i, j)
                    .map(|e| (i64::from(e) - offsets[j]).rem_euclid(n) as u32),
            );
        }
    }
    ExponentMatrix::new(p.rows(), p.cols(), p.lifting(), entries)
}

/// Adds `delta` (mod N) to every non-void entry of row `i`; a Lemma-style
/// code-equivalence transformation.
pub fn add_to_row(p: &ExponentMatrix, i: usize, delta: i64) -> ExponentMatrix {
    transform(p, |r, _c, e| if r == i { shift(e, delta, p.lifting()) } else { e })
}

/// Adds `delta` (mod N) to every non-void entry of column `j`.
pub fn add_to_col(p: &ExponentMatrix, j: usize, delta: i64) -> ExponentMatrix {
    transform(p, |_r, c, e| if c == j { shift(e, delta, p.lifting()) } else { e })
}

/// Reorders rows by `perm` (new row i takes old row perm[i]).
pub fn permute_rows(p: &ExponentMatrix, perm: &[usize]) -> ExponentMatrix {
    let entries = perm
        .iter()
        .flat_map(|&src| (0..p.cols()).map(move |j| (src, j)))
        .map(|(i, j)| p.get(i, j))
        .collect();
    ExponentMatrix::new(p.rows(), p.cols(), p.lifting(), entries).expect("permutation preserves validity")
}

/// Reorders columns by `perm` (new column j takes old column perm[j]).
pub fn permute_cols(p: &ExponentMatrix, perm: &[usize]) -> ExponentMatrix {
    let entries = (0..p.rows())
        .flat_map(|i| perm.iter().map(move |&src| (i, src)))
        .map(|(i, j)| p.get(i, j))
        .collect();
    ExponentMatrix::new(p.rows(), p.cols(), p.lifting(), entries).expect("permutation preserves validity")
}

fn shift(e: Option<u32>, delta: i64, lifting: u32) -> Option<u32> {
    e.map(|v| (i64::from(v) + delta).rem_euclid(i64::from(lifting)) as u32)
}

fn transform(
    p: &ExponentMatrix,
    f: impl Fn(usize, usize, Option<u32>) -> Option<u32>,
) -> ExponentMatrix {
    let entries = (0..p.rows())
        .flat_map(|i| (0..p.cols()).map(move |j| (i, j)))
        .map(|(i, j)| f(i, j, p.get(i, j)))
        .collect();
    ExponentMatrix::new(p.rows(), p.cols(), p.lifting(), entries)
        .expect("entry-wise mod-N transform preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn array_3x5() -> ExponentMatrix {
        ExponentMatrix::array_code(3, 5).unwrap()
    }

    /// The worked spreading matrix for the 3x5 array code, memory 2.
    pub(crate) fn example_b() -> SpreadingMatrix {
        SpreadingMatrix::new(
            3,
            5,
            2,
            vec![0, 0, 0, 2, 1, 0, 1, 2, 1, 0, 1, 0, 0, 0, 1],
        )
        .unwrap()
    }

    #[test]
    fn b_vector_of_example_matrix() {
        let b = example_b();
        assert_eq!(b.b_encode().values(), &[1, 3, 6, 21, 10]);
        assert_eq!(b.b_encode().b_decode(), b);
    }

    #[test]
    fn all_zero_round_trip() {
        let b = SpreadingMatrix::zero(3, 5, 2);
        assert_eq!(b.b_encode().values(), &[0; 5]);
        assert_eq!(b.b_encode().b_decode(), b);
    }

    #[test]
    fn b3_digits() {
        let bv = BVector::new(3, 3, vec![35, 12, 50, 50, 15]).unwrap();
        let b = bv.b_decode();
        assert_eq!((b.get(0, 0), b.get(1, 0), b.get(2, 0)), (2, 0, 3));
        assert_eq!(b.b_encode(), bv);
    }

    #[test]
    fn b_vector_rejects_overflow() {
        // 3 base-2 digits top out at 7.
        assert!(BVector::new(3, 1, vec![8]).is_err());
        assert!(BVector::new(3, 1, vec![7]).is_ok());
    }

    #[test]
    fn edge_spread_matches_worked_example() {
        let cb = edge_spread(&array_3x5(), &example_b()).unwrap();
        let v = |x: i64| Some(x as u32);
        let p0 = ExponentMatrix::new(
            3,
            5,
            5,
            vec![
                v(0), v(0), v(0), None, None,
                v(0), None, None, None, v(4),
                None, v(2), v(4), v(1), None,
            ],
        )
        .unwrap();
        let p1 = ExponentMatrix::new(
            3,
            5,
            5,
            vec![
                None, None, None, None, v(0),
                None, v(1), None, v(3), None,
                v(0), None, None, None, v(3),
            ],
        )
        .unwrap();
        let p2 = ExponentMatrix::new(
            3,
            5,
            5,
            vec![
                None, None, None, v(0), None,
                None, None, v(2), None, None,
                None, None, None, None, None,
            ],
        )
        .unwrap();
        assert_eq!(cb.blocks(), &[p0, p1, p2]);
    }

    #[test]
    fn zero_spreading_is_block_code() {
        let p = array_3x5();
        let cb = edge_spread(&p, &SpreadingMatrix::zero(3, 5, 2)).unwrap();
        assert_eq!(cb.blocks()[0], p);
        assert!(cb.blocks()[1].support().is_empty());
        assert!(cb.blocks()[2].support().is_empty());
    }

    #[test]
    fn full_memory_spreading() {
        let p = array_3x5();
        let b = SpreadingMatrix::new(3, 5, 2, vec![2; 15]).unwrap();
        let cb = edge_spread(&p, &b).unwrap();
        assert!(cb.blocks()[0].support().is_empty());
        assert!(cb.blocks()[1].support().is_empty());
        assert_eq!(cb.blocks()[2], p);
    }

    #[test]
    fn termination_dimensions() {
        let cb = edge_spread(&array_3x5(), &example_b()).unwrap();
        let tc = cb.terminate(3);
        assert_eq!(tc.matrix().rows(), (3 + 2) * 3);
        assert_eq!(tc.matrix().cols(), 3 * 5);
    }

    #[test]
    fn single_section_stacks_slices() {
        let p = array_3x5();
        let cb = edge_spread(&p, &example_b()).unwrap();
        let tc = cb.terminate(1);
        for k in 0..3usize {
            for i in 0..3 {
                for j in 0..5 {
                    assert_eq!(tc.matrix().get(k * 3 + i, j), cb.blocks()[k].get(i, j));
                }
            }
        }
    }

    #[test]
    fn zero_spreading_terminates_block_diagonally() {
        let p = array_3x5();
        let cb = edge_spread(&p, &SpreadingMatrix::zero(3, 5, 0)).unwrap();
        let tc = cb.terminate(3);
        for t in 0..3usize {
            for i in 0..3 {
                for j in 0..5 {
                    assert_eq!(tc.matrix().get(t * 3 + i, t * 5 + j), p.get(i, j));
                }
            }
        }
        // Off-diagonal blocks are void.
        assert_eq!(tc.matrix().support().len(), 3 * p.support().len());
    }

    #[test]
    fn terminated_column_weight_preserved() {
        let p = array_3x5();
        let cb = edge_spread(&p, &example_b()).unwrap();
        let tc = cb.terminate(4);
        for t in 0..4usize {
            for j in 0..5 {
                let col_support: Vec<_> = (0..tc.matrix().rows())
                    .filter(|&r| !tc.matrix().is_void(r, t * 5 + j))
                    .collect();
                assert_eq!(col_support.len(), 3);
            }
        }
    }

    #[test]
    fn search_space_sizes() {
        assert_eq!(search_space_size(3, 5, 3).to_string(), "69343957");
        assert_eq!(search_space_size(3, 5, 0).to_string(), "1");
        assert_eq!(search_space_size(3, 5, 1), BigUint::from(7u32).pow(5));
    }

    #[test]
    fn canonicalize_array_code_is_identity() {
        let p = array_3x5();
        assert_eq!(canonicalize(&p).unwrap(), p);
    }

    #[test]
    fn canonicalize_shifts_columns() {
        let p = ExponentMatrix::new(3, 1, 5, vec![Some(2), Some(3), Some(4)]).unwrap();
        let q = canonicalize(&p).unwrap();
        assert_eq!(
            (q.get(0, 0), q.get(1, 0), q.get(2, 0)),
            (Some(0), Some(1), Some(2))
        );
        let p = ExponentMatrix::new(3, 1, 5, vec![None, Some(4), None]).unwrap();
        let q = canonicalize(&p).unwrap();
        assert_eq!((q.get(0, 0), q.get(1, 0), q.get(2, 0)), (None, Some(0), None));
    }

    #[test]
    fn canonicalize_rejects_void_column() {
        let p = ExponentMatrix::new(2, 2, 5, vec![Some(1), None, Some(2), None]).unwrap();
        assert!(matches!(canonicalize(&p), Err(Error::FullyVoidColumn(1))));
    }

    #[test]
    fn superposition_reconstructs_support() {
        let p = array_3x5();
        let cb = edge_spread(&p, &example_b()).unwrap();
        let mut union: Vec<(usize, usize)> = cb
            .blocks()
            .iter()
            .flat_map(|b| b.support())
            .collect();
        union.sort_unstable();
        assert_eq!(union, p.support());
        for (i, j) in p.support() {
            let holders: Vec<_> = cb
                .blocks()
                .iter()
                .filter(|b| !b.is_void(i, j))
                .collect();
            assert_eq!(holders.len(), 1);
            assert_eq!(holders[0].get(i, j), p.get(i, j));
        }
    }
}
