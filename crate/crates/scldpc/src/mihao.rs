//! The MIHAO greedy tree search over spreading matrices.
//!
//! The root of the tree is the all-zero spreading matrix (the block code);
//! a child differs from its parent in exactly one entry, changed from
//! zero. At each node every such move is scored by how many of the block
//! code's harmful objects it eliminates, the maximum-eliminating moves
//! form the candidate set, and candidates are tried in seeded random
//! order. The search descends only on strict improvement of the full
//! per-period score of the spread code and backtracks when a node's
//! candidates are exhausted. After an accepted descent returns, the node's
//! remaining candidates are applied on top of the accepted child's matrix;
//! a rejected candidate resets back to the node's own matrix.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cycles::{enumerate_block_cycles, CycleList};
use crate::error::Result;
use crate::persistence::survives;
use crate::qc::ExponentMatrix;
use crate::spectrum::{average_per_node, spanning_counts};
use crate::spreading::{edge_spread, max_span, SpreadingMatrix};

/// What the search minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Block-cycles of exactly this length, per period.
    Cycles(usize),
    /// Block-cycles of every length up to this bound, per period.
    CyclesUpTo(usize),
    /// (a,b) absorbing sets, per period.
    AbsorbingSets { a: usize, b: usize },
}

impl Objective {
    /// Lengths of the block-cycles that underlie the target objects.
    pub fn target_lengths(&self) -> Vec<usize> {
        match *self {
            Objective::Cycles(l) => vec![l],
            Objective::CyclesUpTo(l) => (4..=l).step_by(2).collect(),
            Objective::AbsorbingSets { a, .. } => vec![2 * a],
        }
    }

    pub fn max_target_length(&self) -> usize {
        *self.target_lengths().last().expect("at least one length")
    }
}

/// Stopping criteria and reproducibility knobs.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub seed: u64,
    pub max_backtracks: Option<u64>,
    pub max_tiers: Option<usize>,
    pub max_evaluations: Option<u64>,
    /// Return the raw recursion result instead of the tracked global best.
    pub strict: bool,
    pub record_trace: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_backtracks: None,
            max_tiers: None,
            max_evaluations: None,
            strict: false,
            record_trace: false,
        }
    }
}

/// One accepted or evaluated node, for reproducibility audits. `tier` is
/// the recursion depth at which the node was evaluated (accumulated
/// candidates can carry more set entries than their tier).
#[derive(Debug, Clone, Serialize)]
pub struct TraceEvent {
    pub tier: usize,
    pub b_vector: Vec<u64>,
    pub score: u64,
    pub accepted: bool,
}

/// Search result with statistics.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: SpreadingMatrix,
    pub best_score: u64,
    pub evaluations: u64,
    pub visits: u64,
    pub backtracks: u64,
    pub deepest_tier: usize,
    pub stopped_early: bool,
    pub trace: Vec<TraceEvent>,
}

/// Full per-period score of the spread code: the number of surviving
/// target objects, summed over the objective's lengths.
pub fn score(p: &ExponentMatrix, b: &SpreadingMatrix, objective: Objective) -> Result<u64> {
    match objective {
        Objective::Cycles(_) | Objective::CyclesUpTo(_) => {
            let mut total = 0u64;
            for lambda in objective.target_lengths() {
                let k = spanning_counts(p, b, lambda)?;
                total += k.iter().sum::<i64>() as u64;
            }
            Ok(total)
        }
        Objective::AbsorbingSets { a, b: b_size } => {
            let cb = edge_spread(p, b)?;
            let span = max_span(2 * a, b.memory());
            let d = (1..=span)
                .map(|i| {
                    crate::spectrum::count_as_seeded(&cb.terminate(i), a, b_size)
                        .map(|c| c as i64)
                })
                .collect::<Result<Vec<_>>>()?;
            let k = crate::spectrum::k_sum(&d)?;
            Ok(k as u64)
        }
    }
}

/// The move table at one node: for every zero entry (i,j) of `b` and every
/// k in [1, m_s], how many of the listed cycles the move eliminates.
#[derive(Debug, Clone)]
pub struct MoveTable {
    pub moves: Vec<(usize, usize, u32, u64)>,
    pub max_eliminated: u64,
}

impl MoveTable {
    /// Moves attaining the maximum, in row-major-then-k order.
    pub fn candidates(&self) -> Vec<(usize, usize, u32)> {
        self.moves
            .iter()
            .filter(|&&(_, _, _, e)| e == self.max_eliminated)
            .map(|&(i, j, k, _)| (i, j, k))
            .collect()
    }
}

/// Scores every single-entry move from `b` by eliminated cycles from
/// `cycles` (k = 0 is skipped: it is the current value of a zero entry).
pub fn candidate_moves(
    b: &SpreadingMatrix,
    cycles: &CycleList,
    target_lengths: &BTreeSet<usize>,
) -> Result<MoveTable> {
    let relevant: Vec<_> = cycles
        .cycles()
        .iter()
        .filter(|c| target_lengths.contains(&c.len()))
        .collect();
    let mut moves = Vec::new();
    let mut scratch = b.clone();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            if b.get(i, j) != 0 {
                continue;
            }
            for k in 1..=b.memory() {
                scratch.set(i, j, k)?;
                let mut eliminated = 0u64;
                for c in &relevant {
                    if !survives(c, &scratch)? {
                        eliminated += 1;
                    }
                }
                moves.push((i, j, k, eliminated));
                scratch.set(i, j, 0)?;
            }
        }
    }
    let max_eliminated = moves.iter().map(|&(_, _, _, e)| e).max().unwrap_or(0);
    Ok(MoveTable {
        moves,
        max_eliminated,
    })
}

/// Scores every single-entry move from `b` by the drop in the full
/// objective score. Used for absorbing-set objectives, where a surviving
/// cycle may or may not form an absorbing set depending on the rest of the
/// spreading, so eliminated-cycle counts are not a faithful move metric.
pub fn candidate_moves_differential(
    p: &ExponentMatrix,
    b: &SpreadingMatrix,
    objective: Objective,
    c_old: u64,
) -> Result<(MoveTable, u64)> {
    let mut moves = Vec::new();
    let mut scratch = b.clone();
    let mut evaluations = 0u64;
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            if b.get(i, j) != 0 {
                continue;
            }
            for k in 1..=b.memory() {
                scratch.set(i, j, k)?;
                evaluations += 1;
                let c_new = score(p, &scratch, objective)?;
                moves.push((i, j, k, c_old.saturating_sub(c_new)));
                scratch.set(i, j, 0)?;
            }
        }
    }
    let max_eliminated = moves.iter().map(|&(_, _, _, e)| e).max().unwrap_or(0);
    Ok((
        MoveTable {
            moves,
            max_eliminated,
        },
        evaluations,
    ))
}

struct SearchState<'a> {
    p: &'a ExponentMatrix,
    objective: Objective,
    target_lengths: BTreeSet<usize>,
    cycles: CycleList,
    cfg: &'a SearchConfig,
    rng: ChaCha8Rng,
    best: SpreadingMatrix,
    best_score: u64,
    best_tie: Option<Vec<Ratio<i64>>>,
    evaluations: u64,
    visits: u64,
    backtracks: u64,
    deepest_tier: usize,
    stopped: bool,
    trace: Vec<TraceEvent>,
}

impl SearchState<'_> {
    fn check_stop(&mut self) -> bool {
        if self.stopped {
            return true;
        }
        let hit = self
            .cfg
            .max_backtracks
            .is_some_and(|m| self.backtracks >= m)
            || self
                .cfg
                .max_evaluations
                .is_some_and(|m| self.evaluations >= m);
        if hit {
            self.stopped = true;
        }
        hit
    }

    fn tie_key(&mut self, b: &SpreadingMatrix) -> Result<Vec<Ratio<i64>>> {
        // Rank equal scores by the average spectrum just past the target.
        let spectrum = average_per_node(self.p, b, self.objective.max_target_length() + 2)?;
        Ok(spectrum.values().to_vec())
    }

    fn offer_best(&mut self, b: &SpreadingMatrix, score: u64) -> Result<()> {
        if score > self.best_score {
            return Ok(());
        }
        if score < self.best_score {
            self.best = b.clone();
            self.best_score = score;
            self.best_tie = None;
            return Ok(());
        }
        let cand_tie = self.tie_key(b)?;
        if self.best_tie.is_none() {
            let best = self.best.clone();
            self.best_tie = Some(self.tie_key(&best)?);
        }
        if Some(&cand_tie) < self.best_tie.as_ref() {
            self.best = b.clone();
            self.best_tie = Some(cand_tie);
        }
        Ok(())
    }

    fn record(&mut self, b: &SpreadingMatrix, score: u64, accepted: bool, tier: usize) {
        if self.cfg.record_trace {
            self.trace.push(TraceEvent {
                tier,
                b_vector: b.b_encode().values().to_vec(),
                score,
                accepted,
            });
        }
    }

    fn recurse(&mut self, b: &SpreadingMatrix, c_old: u64, tier: usize) -> Result<()> {
        self.visits += 1;
        self.deepest_tier = self.deepest_tier.max(tier);
        if c_old == 0 {
            // Nothing left to eliminate below this node.
            return Ok(());
        }
        if self.cfg.max_tiers.is_some_and(|m| tier >= m) {
            return Ok(());
        }
        let table = match self.objective {
            Objective::Cycles(_) | Objective::CyclesUpTo(_) => {
                candidate_moves(b, &self.cycles, &self.target_lengths)?
            }
            Objective::AbsorbingSets { .. } => {
                let (table, evals) =
                    candidate_moves_differential(self.p, b, self.objective, c_old)?;
                self.evaluations += evals;
                table
            }
        };
        let mut candidates = table.candidates();
        // Candidates accumulate on top of the last accepted child and fall
        // back to this node's matrix after a rejected one.
        let mut current = b.clone();
        while !candidates.is_empty() {
            if self.check_stop() {
                return Ok(());
            }
            let pick = self.rng.gen_range(0..candidates.len());
            let (i, j, k) = candidates.swap_remove(pick);
            let mut b_new = current.clone();
            b_new.set(i, j, k)?;
            self.evaluations += 1;
            let c_new = score(self.p, &b_new, self.objective)?;
            self.offer_best(&b_new, c_new)?;
            let accepted = c_new < c_old;
            self.record(&b_new, c_new, accepted, tier + 1);
            if accepted {
                self.recurse(&b_new, c_new, tier + 1)?;
                current = b_new;
            } else {
                current = b.clone();
            }
        }
        if tier > 0 {
            self.backtracks += 1;
        }
        Ok(())
    }
}

/// Runs the greedy tree search from `b0` (normally all-zero) and returns
/// the best spreading matrix visited, with statistics.
pub fn mihao_search(
    p: &ExponentMatrix,
    objective: Objective,
    b0: SpreadingMatrix,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    let target_lengths: BTreeSet<usize> = objective.target_lengths().into_iter().collect();
    let cycles = enumerate_block_cycles(p, objective.max_target_length())?;
    let c0 = score(p, &b0, objective)?;
    let mut state = SearchState {
        p,
        objective,
        target_lengths,
        cycles,
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        best: b0.clone(),
        best_score: c0,
        best_tie: None,
        evaluations: 0,
        visits: 0,
        backtracks: 0,
        deepest_tier: b0.weight(),
        stopped: false,
        trace: Vec::new(),
    };
    state.record(&b0, c0, true, b0.weight());
    state.recurse(&b0, c0, b0.weight())?;
    let stopped_early = state.stopped;
    Ok(SearchOutcome {
        best: if cfg.strict { b0 } else { state.best },
        best_score: if cfg.strict { c0 } else { state.best_score },
        evaluations: state.evaluations,
        visits: state.visits,
        backtracks: state.backtracks,
        deepest_tier: state.deepest_tier,
        stopped_early,
        trace: state.trace,
    })
}
