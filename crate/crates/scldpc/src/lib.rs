//! Construction and optimization of quasi-cyclic spatially coupled LDPC
//! codes.
//!
//! The pipeline: start from a QC-LDPC block code given by its exponent
//! matrix, enumerate its short block-cycles, spread the edges over m_s+1
//! memory slices according to a spreading matrix, and greedily search the
//! space of spreading matrices for one that eliminates as many harmful
//! objects (short cycles, absorbing sets) as possible. A sliding-window
//! belief-propagation decoder over BPSK/AWGN validates the resulting codes
//! by Monte Carlo simulation.

pub mod cycles;
pub mod decoder;
pub mod error;
pub mod io;
pub mod mihao;
pub mod persistence;
pub mod qc;
pub mod spectrum;
pub mod spreading;

pub use cycles::{enumerate_block_cycles, BlockCycle, CycleList};
pub use error::{Error, Result};
pub use mihao::{mihao_search, Objective, SearchConfig, SearchOutcome};
pub use qc::{BinaryParityCheck, ExponentMatrix, Girth, TannerGraph};
pub use spectrum::{average_per_node, AverageSpectrum};
pub use spreading::{edge_spread, BVector, SpreadingMatrix, TerminatedCode};

/// The rate-2/5 (3,5)-regular Tanner code: N = 31, girth 8.
pub fn tanner_code_2_5() -> ExponentMatrix {
    let rows = [
        [1u32, 2, 4, 8, 16],
        [5, 10, 20, 9, 18],
        [25, 19, 7, 14, 28],
    ];
    ExponentMatrix::new(
        3,
        5,
        31,
        rows.iter().flatten().map(|&v| Some(v)).collect(),
    )
    .expect("known-good exponent matrix")
}

/// The rate-4/7 (3,7)-regular Tanner code: N = 43, girth 8.
pub fn tanner_code_4_7() -> ExponentMatrix {
    let rows = [
        [1u32, 4, 16, 21, 41, 35, 11],
        [6, 24, 10, 40, 31, 38, 23],
        [36, 15, 17, 25, 14, 13, 9],
    ];
    ExponentMatrix::new(
        3,
        7,
        43,
        rows.iter().flatten().map(|&v| Some(v)).collect(),
    )
    .expect("known-good exponent matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_codes_are_regular_with_girth_eight() {
        for (p, cols) in [(tanner_code_2_5(), 5), (tanner_code_4_7(), 7)] {
            assert_eq!(p.rows(), 3);
            assert_eq!(p.cols(), cols);
            let g = p.expand().tanner_graph();
            assert_eq!(g.girth(), Girth::Finite(8));
        }
    }
}
