//! Property tests: encoding round-trips, invariance of cycle structure
//! under shift-equivalence transforms, and survival invariance under
//! constant row/column offsets of the spreading matrix.

use proptest::prelude::*;

use scldpc::cycles::{check_condition, count_binary_cycles_dfs, Modulus};
use scldpc::persistence::{survives, survives_values};
use scldpc::qc::Girth;
use scldpc::spreading::{
    add_to_col, add_to_row, max_span, permute_cols, permute_rows, search_space_size,
};
use scldpc::{enumerate_block_cycles, BVector, ExponentMatrix, SpreadingMatrix};

fn spreading(rows: usize, cols: usize, memory: u32) -> impl Strategy<Value = SpreadingMatrix> {
    prop::collection::vec(0..=memory, rows * cols)
        .prop_map(move |e| SpreadingMatrix::new(rows, cols, memory, e).unwrap())
}

fn exponent(rows: usize, cols: usize, lifting: u32) -> impl Strategy<Value = ExponentMatrix> {
    prop::collection::vec(0..lifting, rows * cols).prop_map(move |e| {
        ExponentMatrix::new(rows, cols, lifting, e.into_iter().map(Some).collect()).unwrap()
    })
}

fn permutation(len: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..len).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn b_vector_encoding_round_trips(
        (rows, memory) in (2usize..=4, 1u32..=3),
        cols in 1usize..=6,
        seed in any::<u64>(),
    ) {
        let b = {
            let mut entries = Vec::with_capacity(rows * cols);
            let mut state = seed;
            for _ in 0..rows * cols {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                entries.push((state >> 33) as u32 % (memory + 1));
            }
            SpreadingMatrix::new(rows, cols, memory, entries).unwrap()
        };
        let bv = b.b_encode();
        prop_assert_eq!(bv.b_decode(), b);
    }

    #[test]
    fn b_vector_values_round_trip(
        (rows, memory) in (2usize..=4, 1u32..=3),
        values in prop::collection::vec(0u64..81, 1..=6),
    ) {
        let base = (memory + 1) as u64;
        let cap = base.pow(3 as u32); // rows <= 4 handled below
        let values: Vec<u64> = values
            .into_iter()
            .map(|v| v % cap.min(base.pow(rows as u32)))
            .collect();
        let bv = BVector::new(rows, memory, values.clone()).unwrap();
        let round = bv.b_decode().b_encode();
        prop_assert_eq!(round.values(), &values[..]);
    }

    #[test]
    fn girth_is_invariant_under_shift_equivalence(
        p in (4u32..=11).prop_flat_map(|n| exponent(3, 4, n)),
        row in 0usize..3,
        col in 0usize..4,
        delta in 1i64..=10,
        rperm in permutation(3),
        cperm in permutation(4),
    ) {
        let girth_of = |m: &ExponentMatrix| m.expand().tanner_graph().girth();
        let g = girth_of(&p);
        prop_assert_eq!(girth_of(&add_to_row(&p, row, delta)), g);
        prop_assert_eq!(girth_of(&add_to_col(&p, col, delta)), g);
        prop_assert_eq!(girth_of(&permute_rows(&p, &rperm)), g);
        prop_assert_eq!(girth_of(&permute_cols(&p, &cperm)), g);
    }

    #[test]
    fn cycle_condition_is_invariant_under_row_and_col_offsets(
        p in (4u32..=11).prop_flat_map(|n| exponent(3, 4, n)),
        row in 0usize..3,
        col in 0usize..4,
        delta in 1i64..=10,
    ) {
        let list = enumerate_block_cycles(&p, 8).unwrap();
        let pr = add_to_row(&p, row, delta);
        let pc = add_to_col(&p, col, delta);
        for c in list.cycles() {
            let m = Modulus::Lifting(p.lifting());
            let base = check_condition(&p, c, m).unwrap();
            prop_assert_eq!(check_condition(&pr, c, m).unwrap(), base);
            prop_assert_eq!(check_condition(&pc, c, m).unwrap(), base);
        }
    }

    #[test]
    fn survival_is_invariant_under_spreading_offsets(
        p in (4u32..=9).prop_flat_map(|n| exponent(3, 4, n)),
        b in spreading(3, 4, 2),
        row in 0usize..3,
        col in 0usize..4,
        delta in 1i64..=3,
    ) {
        // Adding a constant to a full row or column of B telescopes away
        // along any closed path, so verdicts are unchanged.
        let list = enumerate_block_cycles(&p, 8).unwrap();
        for c in list.cycles() {
            let base = survives(c, &b).unwrap();
            let with_row = survives_values(c, |i, j| {
                b.get(i, j) as i64 + if i == row { delta } else { 0 }
            })
            .unwrap();
            let with_col = survives_values(c, |i, j| {
                b.get(i, j) as i64 + if j == col { delta } else { 0 }
            })
            .unwrap();
            prop_assert_eq!(with_row, base);
            prop_assert_eq!(with_col, base);
        }
    }

    #[test]
    fn binary_cycle_counts_are_invariant_under_shift_equivalence(
        p in (4u32..=7).prop_flat_map(|n| exponent(3, 3, n)),
        row in 0usize..3,
        delta in 1i64..=6,
    ) {
        let g1 = p.expand().tanner_graph();
        let g2 = add_to_row(&p, row, delta).expand().tanner_graph();
        for len in [4usize, 6, 8] {
            prop_assert_eq!(
                count_binary_cycles_dfs(&g1, len).unwrap(),
                count_binary_cycles_dfs(&g2, len).unwrap()
            );
        }
    }

    #[test]
    fn search_space_size_matches_brute_force_column_count(
        m in 2usize..=3,
        memory in 1u32..=2,
    ) {
        // Columns of B range over {0..m_s}^m with at least one zero entry.
        let base = memory as u64 + 1;
        let mut valid = 0u64;
        for code in 0..base.pow(m as u32) {
            let mut c = code;
            let mut has_zero = false;
            for _ in 0..m {
                if c % base == 0 {
                    has_zero = true;
                }
                c /= base;
            }
            if has_zero {
                valid += 1;
            }
        }
        for n in 1usize..=3 {
            prop_assert_eq!(
                search_space_size(m, n, memory),
                num_bigint::BigUint::from(valid.pow(n as u32))
            );
        }
    }
}

#[test]
fn max_span_matches_definition() {
    for (lambda, memory, want) in [(4, 1, 2), (6, 1, 2), (8, 1, 3), (12, 1, 4), (12, 3, 10)] {
        assert_eq!(max_span(lambda, memory), want);
    }
}

#[test]
fn girth_of_shift_equivalent_canonical_form_is_preserved() {
    let p = scldpc::tanner_code_2_5();
    let canon = scldpc::spreading::canonicalize(&p).unwrap();
    assert_eq!(
        canon.expand().tanner_graph().girth(),
        Girth::Finite(8)
    );
    // Dense matrix: each column's topmost entry is in row 0, so the
    // canonical form has an all-zero first row.
    for j in 0..canon.cols() {
        assert_eq!(canon.get(0, j), Some(0));
    }
}
