//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line
//! with measured values. Tolerances are pinned as constants here.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scldpc::cycles::count_binary_cycles_dfs;
use scldpc::decoder::{estimate_ber, WindowDecoder, WindowDecoderConfig};
use scldpc::mihao::{mihao_search, Objective, SearchConfig};
use scldpc::persistence::{count_eliminated, survives};
use scldpc::spectrum::{average_as_per_node, average_per_node};
use scldpc::spreading::{edge_spread, max_span, search_space_size};
use scldpc::{
    enumerate_block_cycles, tanner_code_2_5, tanner_code_4_7, BVector, BlockCycle,
    ExponentMatrix, SpreadingMatrix,
};

/// Tolerance against rounded published averages.
const SPECTRUM_TOL: f64 = 0.01;

fn b_vec(memory: u32, values: &[u64]) -> SpreadingMatrix {
    BVector::new(3, memory, values.to_vec()).unwrap().b_decode()
}

#[test]
fn criterion_1_block_cycle_census() {
    let start = Instant::now();
    let p = ExponentMatrix::array_code(3, 5).unwrap();
    let list = enumerate_block_cycles(&p, 6).unwrap();
    let six = list.count_of_length(6);
    let four = list.count_of_length(4);
    let elapsed = start.elapsed();
    let pass = six == 20 && four == 0 && elapsed.as_secs_f64() < 1.0;
    println!(
        "[criterion 1] {}: 3x5 array code census: {six} length-6 (want 20), {four} length-4 \
         (want 0) in {elapsed:.2?} (budget 1 s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn criterion_2_persistence_verdicts() {
    // The three length-6 block-cycles of the worked example, as anchor
    // paths, against the spreading matrix with b-vector 1 3 6 21 10.
    let b = b_vec(2, &[1, 3, 6, 21, 10]);
    let cycles = [
        (BlockCycle::new(vec![(0, 0), (2, 1), (1, 2)]).unwrap(), false),
        (BlockCycle::new(vec![(0, 1), (1, 2), (2, 0)]).unwrap(), false),
        (BlockCycle::new(vec![(0, 1), (2, 2), (1, 3)]).unwrap(), true),
    ];
    let mut got = Vec::new();
    for (c, _) in &cycles {
        got.push(survives(c, &b).unwrap());
    }
    let want: Vec<bool> = cycles.iter().map(|&(_, w)| w).collect();
    let pass = got == want;
    println!(
        "[criterion 2] {}: survival verdicts {got:?} (want {want:?}: eliminated, eliminated, \
         survives)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn criterion_3_published_spectra() {
    let start = Instant::now();
    let cases: [(&str, ExponentMatrix, u32, &[u64], [f64; 5]); 6] = [
        ("b1", tanner_code_2_5(), 1, &[2, 2, 1, 1, 4], [0.0, 0.0, 0.0, 3.8, 18.4]),
        ("b2", tanner_code_2_5(), 1, &[2, 1, 6, 1, 5], [0.0, 0.0, 0.0, 1.8, 15.0]),
        ("b3", tanner_code_2_5(), 3, &[35, 12, 50, 50, 15], [0.0, 0.0, 0.0, 0.0, 9.4]),
        ("b4", tanner_code_2_5(), 1, &[6, 1, 3, 2, 4], [0.0, 0.0, 0.6, 3.2, 14.2]),
        ("b5", tanner_code_4_7(), 1, &[3, 4, 2, 4, 1, 6, 6], [0.0, 0.0, 1.86, 17.57, 71.14]),
        ("b6", tanner_code_4_7(), 1, &[5, 3, 1, 4, 6, 2, 4], [0.0, 0.0, 1.29, 15.14, 64.0]),
    ];
    let mut mismatches = Vec::new();
    for (name, host, memory, values, want) in &cases {
        let b = b_vec(*memory, values);
        let got = average_per_node(host, &b, 12).unwrap().decimals();
        for (i, (&g, &w)) in got.iter().zip(want.iter()).enumerate() {
            let lambda = 2 * i + 4;
            if (g - w).abs() > SPECTRUM_TOL {
                mismatches.push(format!("{name} lambda={lambda}: got {g:.4}, want {w}"));
            }
        }
        println!("  {name}: got {got:?}, want {want:?}");
    }
    let elapsed = start.elapsed();
    let in_budget = elapsed.as_secs_f64() < 300.0;
    let pass = mismatches.is_empty() && in_budget;
    println!(
        "[criterion 3] {}: six published spectra within {SPECTRUM_TOL} in {elapsed:.2?} \
         (budget 300 s); mismatches: {mismatches:?}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "spectrum mismatches: {mismatches:?}");
}

fn optimized_as_average(p: u32, seed: u64) -> f64 {
    let host = ExponentMatrix::array_code(3, p).unwrap();
    let cfg = SearchConfig {
        seed,
        max_backtracks: Some(60),
        ..Default::default()
    };
    let objective = Objective::AbsorbingSets { a: 3, b: 3 };
    let out = mihao_search(
        &host,
        objective,
        SpreadingMatrix::zero(3, p as usize, 1),
        &cfg,
    )
    .unwrap();
    let e = average_as_per_node(&host, &out.best, 3, 3).unwrap();
    *e.numer() as f64 / *e.denom() as f64
}

#[test]
fn criterion_4_optimized_absorbing_set_averages() {
    let mut mismatches = Vec::new();
    for (p, want) in [(7u32, 0.43), (11, 1.00), (13, 1.08)] {
        let got = optimized_as_average(p, 1);
        println!("  p={p}: E(3,3) = {got:.4}, want {want}");
        if (got - want).abs() > SPECTRUM_TOL {
            mismatches.push(format!("p={p}: got {got:.4}, want {want}"));
        }
    }
    if std::env::var_os("SCLDPC_STRETCH").is_some() {
        for (p, bound) in [(17u32, 1.88), (19, 2.26), (23, 3.26)] {
            let got = optimized_as_average(p, 1);
            println!("  stretch p={p}: E(3,3) = {got:.4}, bound {bound}");
            if got > bound + SPECTRUM_TOL {
                mismatches.push(format!("stretch p={p}: got {got:.4} > bound {bound}"));
            }
        }
    }
    let pass = mismatches.is_empty();
    println!(
        "[criterion 4] {}: optimized (3,3) absorbing-set averages; mismatches: {mismatches:?}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "absorbing-set average mismatches: {mismatches:?}");
}

#[test]
fn criterion_5_search_space_arithmetic() {
    let want = num_bigint::BigUint::from(69_343_957u64);
    let got = search_space_size(3, 5, 3);
    let mut pass = got == want;
    for n in 1usize..=8 {
        pass &= search_space_size(3, n, 1) == num_bigint::BigUint::from(7u64).pow(n as u32);
    }
    println!(
        "[criterion 5] {}: search_space_size(3,5,3) = {got} (want {want}); \
         search_space_size(3,n,1) = 7^n for n <= 8",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn criterion_6_search_eliminates_short_cycles() {
    let p = tanner_code_2_5();
    let cfg = SearchConfig {
        seed: 1,
        max_evaluations: Some(100_000),
        ..Default::default()
    };
    let out = mihao_search(
        &p,
        Objective::CyclesUpTo(8),
        SpreadingMatrix::zero(3, 5, 1),
        &cfg,
    )
    .unwrap();
    let pass = out.best_score == 0 && out.evaluations <= 100_000;
    println!(
        "[criterion 6] {}: cycles-up-to-8 search on the rate-2/5 code reached score \
         {} in {} evaluations (budget 100000)",
        if pass { "PASS" } else { "FAIL" },
        out.best_score,
        out.evaluations
    );
    assert!(pass);
}

/// Section-span decomposition: peel per-section counts into per-span
/// multiplicities and return their sum (the per-period total).
fn k_total(d: &[i64]) -> i64 {
    let mut k = vec![0i64; d.len()];
    for i in 0..d.len() {
        let translated: i64 = (0..i).map(|j| (i as i64 + 1 - j as i64) * k[j]).sum();
        k[i] = d[i] - translated;
        assert!(k[i] >= 0, "negative span count in oracle decomposition");
    }
    k.iter().sum()
}

#[test]
fn criterion_7_oracle_equivalence_on_random_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0usize;
    while checked < 50 {
        let m = 3usize;
        let n = rng.gen_range(3..=5usize);
        // Prime lifting keeps cycle orbits full-size: a cycle of length
        // below 2N cannot be invariant under any nontrivial rotation.
        let lifting = [5u32, 7, 11][rng.gen_range(0..3usize)];
        let entries: Vec<Option<u32>> = (0..m * n)
            .map(|idx| {
                // Keep row 0 dense so no column is fully void.
                if idx >= n && rng.gen_bool(0.15) {
                    None
                } else {
                    Some(rng.gen_range(0..lifting))
                }
            })
            .collect();
        let p = ExponentMatrix::new(m, n, lifting, entries).unwrap();
        let memory = rng.gen_range(1..=2u32);
        let b = SpreadingMatrix::new(
            m,
            n,
            memory,
            (0..m * n).map(|_| rng.gen_range(0..=memory)).collect(),
        )
        .unwrap();
        let girth = p
            .expand()
            .tanner_graph()
            .girth()
            .finite()
            .unwrap_or(8)
            .min(8);
        // The oracle identity (survivors = N^-1 x binary count) is a theorem
        // only below 2*girth and 2N: a coupled cycle of length >= 2*girth can
        // project onto two base cycles sharing a check node with cancelling
        // section displacements (no base block-cycle preimage), and length
        // >= 2N admits wrap-around cycles whose rotation orbits degenerate.
        let max_len = (girth + 4)
            .min(2 * girth - 2)
            .min(2 * lifting as usize - 2);
        let list = enumerate_block_cycles(&p, max_len).unwrap();
        let report = count_eliminated(&list, &b).unwrap();
        let cb = edge_spread(&p, &b).unwrap();
        for len in (4..=max_len).step_by(2) {
            let span = max_span(len, memory);
            let d: Vec<i64> = (1..=span)
                .map(|l| {
                    let g = cb.terminate(l).matrix().expand().tanner_graph();
                    let binary = count_binary_cycles_dfs(&g, len).unwrap();
                    assert_eq!(binary % lifting as u64, 0, "orbit size must divide counts");
                    (binary / lifting as u64) as i64
                })
                .collect();
            let oracle = k_total(&d);
            let survivors = report.surviving_of_length(len) as i64;
            assert_eq!(
                survivors, oracle,
                "persistence vs binary oracle disagree: len {len}, matrix {p}, spreading {b:?}"
            );
        }
        checked += 1;
    }
    println!(
        "[criterion 7] PASS: persistence counts equal N^-1 x binary DFS totals on {checked} \
         random codes"
    );
}

#[test]
fn criterion_8_decoder_sanity() {
    // (a) noiseless decoding is error-free.
    let p = tanner_code_2_5();
    let b1 = b_vec(1, &[2, 2, 1, 1, 4]);
    let tc = edge_spread(&p, &b1).unwrap().terminate(10);
    let decoder = WindowDecoder::new(&tc, WindowDecoderConfig::defaults_for_memory(1)).unwrap();
    let clean = vec![20.0; decoder.frame_bits()];
    let decisions = decoder.decode_frame(&clean);
    let noiseless_ok = decisions.iter().all(|&d| !d);
    println!("  noiseless frame decodes to all-zero: {noiseless_ok}");

    // (b) BER is monotone non-increasing in SNR (within 2 half-widths).
    let b0 = SpreadingMatrix::zero(3, 5, 0);
    let block = edge_spread(&p, &b0).unwrap().terminate(1);
    let cfg = WindowDecoderConfig {
        iterations: 50,
        ..WindowDecoderConfig::defaults_for_memory(0)
    };
    let sweep = estimate_ber(&block, &[1.0, 2.0, 3.0], 4000, cfg.clone(), 1).unwrap();
    let mut monotone = true;
    for w in sweep.windows(2) {
        let slack = 2.0 * (w[0].confidence_half_width() + w[1].confidence_half_width());
        if w[1].ber() > w[0].ber() + slack {
            monotone = false;
        }
    }
    println!(
        "  block-code BER sweep at 1/2/3 dB: {:?} monotone: {monotone}",
        sweep.iter().map(|r| r.ber()).collect::<Vec<_>>()
    );

    // (c) the coupled code beats the uncoupled block code at moderate SNR.
    let frames = 10_000u64;
    let block_res = estimate_ber(&block, &[3.0], frames, cfg, 1).unwrap();
    let sc_cfg = WindowDecoderConfig {
        iterations: 30,
        ..WindowDecoderConfig::defaults_for_memory(1)
    };
    let sc_res = estimate_ber(&tc, &[3.0], frames, sc_cfg, 1).unwrap();
    let comparative = sc_res[0].ber() < block_res[0].ber();
    println!(
        "  3 dB, {frames} frames: coupled BER {:.3e} vs block BER {:.3e}",
        sc_res[0].ber(),
        block_res[0].ber()
    );

    let pass = noiseless_ok && monotone && comparative;
    println!(
        "[criterion 8] {}: decoder sanity (noiseless, monotone sweep, coupling gain)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn criterion_9_byte_identical_artifacts() {
    use std::process::Command;
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("p.txt");
    let spreading = dir.path().join("b.txt");
    std::fs::write(&matrix, tanner_code_2_5().to_string()).unwrap();
    std::fs::write(&spreading, "3 1\n2 2 1 1 4\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_scldpc");

    let mut outputs = Vec::new();
    for run in 0..2 {
        let opt = dir.path().join(format!("opt{run}.json"));
        let trace = dir.path().join(format!("trace{run}.json"));
        let sim = dir.path().join(format!("sim{run}.csv"));
        let s1 = Command::new(bin)
            .args(["optimize", matrix.to_str().unwrap()])
            .args(["--memory", "1", "--objective", "cycles-upto:8"])
            .args(["--seed", "7", "--max-backtracks", "50"])
            .args(["--trace", trace.to_str().unwrap()])
            .args(["--format", "json", "--output", opt.to_str().unwrap()])
            .status()
            .unwrap();
        let s2 = Command::new(bin)
            .args(["simulate", matrix.to_str().unwrap(), spreading.to_str().unwrap()])
            .args(["--snr", "2.0", "--frames", "200", "--sections", "4"])
            .args(["--iters", "20", "--seed", "9"])
            .args(["--output", sim.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(s1.success() && s2.success());
        outputs.push((
            std::fs::read(&opt).unwrap(),
            std::fs::read(&trace).unwrap(),
            std::fs::read(&sim).unwrap(),
        ));
    }
    let pass = outputs[0] == outputs[1];
    println!(
        "[criterion 9] {}: optimize and simulate artifacts are byte-identical across reruns",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}
