//! Monte Carlo BER estimation: BPSK over AWGN with a sliding-window
//! sum-product decoder for terminated spatially coupled codes.
//!
//! The all-zero codeword is transmitted (channel and decoder are
//! symmetric, so no encoder is needed). The window decoder runs flooding
//! belief propagation over W consecutive periods of the terminated
//! parity-check matrix, commits the first period's bits as target bits,
//! and slides forward one period. Previously committed periods contribute
//! saturated LLRs to the checks they still touch.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qc::BinaryParityCheck;
use crate::spreading::TerminatedCode;

/// AWGN channel at a given Eb/N0 for unit-energy BPSK.
#[derive(Debug, Clone, Copy)]
pub struct ChannelConfig {
    pub snr_db: f64,
    pub rate: f64,
    pub seed: u64,
}

impl ChannelConfig {
    /// Noise variance 1 / (2 R 10^(snr/10)).
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.rate * 10f64.powf(self.snr_db / 10.0))
    }
}

/// Sliding-window decoder parameters.
#[derive(Debug, Clone, Copy)]
pub struct WindowDecoderConfig {
    /// Window size in periods; must be at least m_s + 1.
    pub window: usize,
    pub iterations: usize,
    pub llr_clip: f64,
}

impl WindowDecoderConfig {
    /// The defaults used in the experiments: W = 5(m_s+1), 100 iterations.
    pub fn defaults_for_memory(memory: u32) -> Self {
        Self {
            window: 5 * (memory as usize + 1),
            iterations: 100,
            llr_clip: 50.0,
        }
    }
}

/// Accumulated Monte Carlo counts at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerResult {
    pub snr_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
}

impl BerResult {
    pub fn ber(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits as f64
        }
    }

    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.frame_errors as f64 / self.frames as f64
        }
    }

    /// 95% normal-approximation half-width of the BER estimate.
    pub fn confidence_half_width(&self) -> f64 {
        if self.bits == 0 {
            return 0.0;
        }
        let p = self.ber();
        1.96 * (p * (1.0 - p) / self.bits as f64).sqrt()
    }
}

/// Channel LLRs 2y/sigma^2 for the all-zero codeword, y = +1 + noise.
pub fn simulate_channel(cfg: &ChannelConfig, length: usize, rng: &mut impl Rng) -> Vec<f64> {
    let sigma2 = cfg.noise_variance();
    let normal = Normal::new(0.0, sigma2.sqrt()).expect("positive noise variance");
    (0..length)
        .map(|_| 2.0 * (1.0 + normal.sample(rng)) / sigma2)
        .collect()
}

/// Sliding-window sum-product decoder bound to one terminated code.
pub struct WindowDecoder {
    h: BinaryParityCheck,
    sections: usize,
    memory: usize,
    period_vars: usize,
    period_checks: usize,
    cfg: WindowDecoderConfig,
}

impl WindowDecoder {
    pub fn new(tc: &TerminatedCode, cfg: WindowDecoderConfig) -> Result<Self> {
        let memory = tc.base().memory() as usize;
        if cfg.window < memory + 1 {
            return Err(Error::BudgetExceeded(format!(
                "window of {} periods is smaller than memory + 1 = {}",
                cfg.window,
                memory + 1
            )));
        }
        let n = tc.base().lifting() as usize;
        Ok(Self {
            h: tc.matrix().expand(),
            sections: tc.sections(),
            memory,
            period_vars: tc.base().cols() * n,
            period_checks: tc.base().rows() * n,
            cfg,
        })
    }

    pub fn frame_bits(&self) -> usize {
        self.sections * self.period_vars
    }

    /// Decodes one frame of channel LLRs, returning hard decisions for all
    /// target bits (true = 1).
    pub fn decode_frame(&self, llrs: &[f64]) -> Vec<bool> {
        assert_eq!(llrs.len(), self.frame_bits());
        let mut decisions = vec![false; self.frame_bits()];
        for t in 0..self.sections {
            self.decode_window(t, llrs, &mut decisions);
        }
        decisions
    }

    /// Runs belief propagation on the window starting at period `t` and
    /// commits that period's decisions.
    fn decode_window(&self, t: usize, llrs: &[f64], decisions: &mut [bool]) {
        let var_lo = t * self.period_vars;
        let var_hi = (t + self.cfg.window).min(self.sections) * self.period_vars;
        let check_lo = t * self.period_checks;
        let check_hi =
            ((t + self.cfg.window).min(self.sections + self.memory)) * self.period_checks;

        // Window edges; committed earlier periods fold into per-check signs.
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut check_sign = vec![1.0f64; check_hi - check_lo];
        let mut active_checks: Vec<usize> = Vec::new();
        for c in check_lo..check_hi {
            let mut any = false;
            for &v in self.h.row(c) {
                if v >= var_lo && v < var_hi {
                    edges.push((c - check_lo, v - var_lo));
                    any = true;
                } else if v < var_lo && decisions[v] {
                    check_sign[c - check_lo] = -check_sign[c - check_lo];
                }
            }
            if any {
                active_checks.push(c - check_lo);
            }
        }
        let nv = var_hi - var_lo;
        let mut var_edges: Vec<Vec<usize>> = vec![Vec::new(); nv];
        let mut check_edges: Vec<Vec<usize>> = vec![Vec::new(); check_hi - check_lo];
        for (e, &(c, v)) in edges.iter().enumerate() {
            var_edges[v].push(e);
            check_edges[c].push(e);
        }

        let clip = self.cfg.llr_clip;
        let clamp = |x: f64| x.clamp(-clip, clip);
        let mut var_to_check: Vec<f64> = edges
            .iter()
            .map(|&(_, v)| clamp(llrs[var_lo + v]))
            .collect();
        let mut check_to_var = vec![0.0f64; edges.len()];
        let mut posterior = vec![0.0f64; nv];

        for _ in 0..self.cfg.iterations {
            // Check update: product of tanh(m/2) over the other neighbors.
            for &c in &active_checks {
                let sign = check_sign[c];
                let tanhs: Vec<f64> = check_edges[c]
                    .iter()
                    .map(|&e| (var_to_check[e] / 2.0).tanh())
                    .collect();
                let product: f64 = tanhs.iter().product::<f64>() * sign;
                for (idx, &e) in check_edges[c].iter().enumerate() {
                    let others = if tanhs[idx].abs() > 1e-12 {
                        product / tanhs[idx]
                    } else {
                        check_edges[c]
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != idx)
                            .map(|(i, _)| tanhs[i])
                            .product::<f64>()
                            * sign
                    };
                    let others = others.clamp(-0.999_999_999_999, 0.999_999_999_999);
                    check_to_var[e] = clamp(2.0 * others.atanh());
                }
            }
            // Variable update and posterior.
            for v in 0..nv {
                let total: f64 = llrs[var_lo + v] + var_edges[v].iter().map(|&e| check_to_var[e]).sum::<f64>();
                posterior[v] = total;
                for &e in &var_edges[v] {
                    var_to_check[e] = clamp(total - check_to_var[e]);
                }
            }
            // Early stop on zero window syndrome.
            let ok = active_checks.iter().all(|&c| {
                let mut parity = check_sign[c] < 0.0;
                for &e in &check_edges[c] {
                    if posterior[edges[e].1] < 0.0 {
                        parity = !parity;
                    }
                }
                !parity
            });
            if ok {
                break;
            }
        }

        // Commit the first (target) period of the window.
        let commit = self.period_vars.min(nv);
        for v in 0..commit {
            decisions[var_lo + v] = posterior[v] < 0.0;
        }
    }

    /// Syndrome of a full frame of decisions over all checks.
    pub fn syndrome_weight(&self, decisions: &[bool]) -> usize {
        (0..self.h.row_count())
            .filter(|&c| {
                self.h
                    .row(c)
                    .iter()
                    .filter(|&&v| decisions[v])
                    .count()
                    % 2
                    == 1
            })
            .count()
    }
}

/// Code rate of a terminated code from its dimensions, assuming full rank.
pub fn terminated_rate(tc: &TerminatedCode) -> f64 {
    let cols = tc.matrix().cols() as f64;
    let rows = tc.matrix().rows() as f64;
    (cols - rows) / cols
}

/// Runs `frames` Monte Carlo frames at each SNR point and accumulates
/// BER/FER over target bits. Frames are independent and seeded from
/// (master seed, snr index, frame index), so results do not depend on
/// scheduling.
pub fn estimate_ber(
    tc: &TerminatedCode,
    snrs_db: &[f64],
    frames: u64,
    cfg: WindowDecoderConfig,
    seed: u64,
) -> Result<Vec<BerResult>> {
    let decoder = WindowDecoder::new(tc, cfg)?;
    let rate = terminated_rate(tc);
    if rate <= 0.0 {
        return Err(Error::BudgetExceeded(format!(
            "terminated code has non-positive design rate {rate}"
        )));
    }
    let bits_per_frame = decoder.frame_bits() as u64;
    let mut out = Vec::with_capacity(snrs_db.len());
    for (si, &snr_db) in snrs_db.iter().enumerate() {
        let channel = ChannelConfig {
            snr_db,
            rate,
            seed,
        };
        let (bit_errors, frame_errors) = (0..frames)
            .into_par_iter()
            .map(|f| {
                let frame_seed = seed
                    ^ (si as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
                    ^ f.wrapping_mul(0xD1B5_4A32_D192_ED03);
                let mut rng = ChaCha8Rng::seed_from_u64(frame_seed);
                let llrs = simulate_channel(&channel, bits_per_frame as usize, &mut rng);
                let decisions = decoder.decode_frame(&llrs);
                let errs = decisions.iter().filter(|&&d| d).count() as u64;
                (errs, u64::from(errs > 0))
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        out.push(BerResult {
            snr_db,
            frames,
            bits: frames * bits_per_frame,
            bit_errors,
            frame_errors,
        });
    }
    Ok(out)
}
