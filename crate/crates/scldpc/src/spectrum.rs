//! Block-cycle spectra of terminated codes and absorbing-set averages.
//!
//! The multiplicity of block-cycles in a terminated code grows linearly
//! with the number of coupled sections: a cycle class spanning exactly j
//! sections appears L - j + 1 times in an L-section termination. Counting
//! at L = 1, 2, ... and peeling with that relation gives the number K_i of
//! classes spanning exactly i sections, hence the exact per-node average
//! E = sum(K_i) / n of the one-sided infinite code. The same decomposition
//! is applied to absorbing-set counts.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::Ratio;
use serde::Serialize;

use crate::cycles::{enumerate_block_cycles, BlockCycle};
use crate::error::{Error, Result};
use crate::qc::{ExponentMatrix, TannerGraph};
use crate::spreading::{edge_spread, max_span, SpreadingMatrix, TerminatedCode};

/// Block-cycle counts of one terminated code: entry i holds the number of
/// block-cycles of length 2i+4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    sections: usize,
    max_len: usize,
    counts: Vec<u64>,
}

impl Distribution {
    pub fn sections(&self) -> usize {
        self.sections
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Count of block-cycles of length `len`.
    pub fn of_length(&self, len: usize) -> u64 {
        if len < 4 || len % 2 != 0 || len > self.max_len {
            return 0;
        }
        self.counts[(len - 4) / 2]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

/// Exact block-cycle counts of a terminated code up to `max_len`.
pub fn distribution(tc: &TerminatedCode, max_len: usize) -> Result<Distribution> {
    let list = enumerate_block_cycles(tc.matrix(), max_len)?;
    let counts = (4..=max_len)
        .step_by(2)
        .map(|l| list.count_of_length(l) as u64)
        .collect();
    Ok(Distribution {
        sections: tc.sections(),
        max_len,
        counts,
    })
}

/// Peels per-section counts d[i-1] (the count at L = i sections) into the
/// number of classes spanning exactly i sections.
fn k_decomposition(d: &[i64]) -> Result<Vec<i64>> {
    let mut k = Vec::with_capacity(d.len());
    for i in 1..=d.len() {
        let repeated: i64 = (1..i).map(|j| (i + 1 - j) as i64 * k[j - 1]).sum();
        let ki = d[i - 1] - repeated;
        if ki < 0 {
            return Err(Error::NegativeSpanningCount {
                i,
                value: ki,
            });
        }
        k.push(ki);
    }
    Ok(k)
}

/// Sum of the spanning counts peeled from per-section totals.
pub(crate) fn k_sum(d: &[i64]) -> Result<i64> {
    Ok(k_decomposition(d)?.iter().sum())
}

/// K_1..K_{floor(lambda/4)*m_s+1}: block-cycle classes of length `lambda`
/// spanning exactly i sections.
pub fn spanning_counts(
    p: &ExponentMatrix,
    b: &SpreadingMatrix,
    lambda: usize,
) -> Result<Vec<i64>> {
    let cb = edge_spread(p, b)?;
    let span = max_span(lambda, b.memory());
    let d = (1..=span)
        .map(|i| {
            let tc = cb.terminate(i);
            distribution(&tc, lambda).map(|dist| dist.of_length(lambda) as i64)
        })
        .collect::<Result<Vec<_>>>()?;
    k_decomposition(&d)
}

/// Exact per-node averages, one rational per length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AverageSpectrum {
    max_len: usize,
    values: Vec<Ratio<i64>>,
}

impl AverageSpectrum {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// E_lambda for lambda in {4, 6, ..., max_len}, in order.
    pub fn values(&self) -> &[Ratio<i64>] {
        &self.values
    }

    pub fn of_length(&self, len: usize) -> Ratio<i64> {
        self.values[(len - 4) / 2]
    }

    pub fn decimals(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect()
    }

    /// Lexicographic comparison by increasing length, the tie metric for
    /// ranking spreadings.
    pub fn lex_key(&self) -> &[Ratio<i64>] {
        &self.values
    }
}

/// Average number of block-cycles per node, E_lambda = sum(K_i)/n, for each
/// lambda up to `max_len`.
pub fn average_per_node(
    p: &ExponentMatrix,
    b: &SpreadingMatrix,
    max_len: usize,
) -> Result<AverageSpectrum> {
    let values = (4..=max_len)
        .step_by(2)
        .map(|lambda| {
            let total: i64 = spanning_counts(p, b, lambda)?.iter().sum();
            Ok(Ratio::new(total, p.cols() as i64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AverageSpectrum {
        max_len,
        values,
    })
}

/// An (a,b) absorbing set: `variables` of size a, odd-degree neighboring
/// checks of size b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbsorbingSet {
    pub variables: Vec<usize>,
    pub odd_checks: Vec<usize>,
    pub fully: bool,
}

/// Classifies a variable subset: returns the odd check set and the fully
/// flag when the subset is an absorbing set.
pub fn classify_subset(g: &TannerGraph, variables: &[usize]) -> Option<(Vec<usize>, bool)> {
    if variables.is_empty() {
        return None;
    }
    let mut induced: HashMap<usize, usize> = HashMap::new();
    for &v in variables {
        for &c in g.matrix().col(v) {
            *induced.entry(c).or_insert(0) += 1;
        }
    }
    let odd: HashSet<usize> = induced
        .iter()
        .filter(|(_, &d)| d % 2 == 1)
        .map(|(&c, _)| c)
        .collect();
    for &v in variables {
        let in_odd = g.matrix().col(v).iter().filter(|c| odd.contains(c)).count();
        let deg = g.variable_degree(v);
        if !(in_odd < deg - in_odd) {
            return None;
        }
    }
    let in_d: HashSet<usize> = variables.iter().copied().collect();
    let mut fully = true;
    'outer: for v in 0..g.variable_count() {
        if in_d.contains(&v) {
            continue;
        }
        let in_odd = g.matrix().col(v).iter().filter(|c| odd.contains(c)).count();
        let deg = g.variable_degree(v);
        if !(in_odd < deg - in_odd) {
            fully = false;
            break 'outer;
        }
    }
    let mut odd: Vec<usize> = odd.into_iter().collect();
    odd.sort_unstable();
    Some((odd, fully))
}

/// Exhaustive bounded search for all (a,b) absorbing sets with a <= a_max
/// and |O(D)| <= b_max. When `fully` is set only fully absorbing sets are
/// returned. Errors out on graphs above `node_budget` variables.
pub fn find_absorbing_sets(
    g: &TannerGraph,
    a_max: usize,
    b_max: usize,
    fully: bool,
    node_budget: usize,
) -> Result<Vec<AbsorbingSet>> {
    if g.variable_count() > node_budget {
        return Err(Error::BudgetExceeded(format!(
            "{} variable nodes exceed the exhaustive-search budget of {}",
            g.variable_count(),
            node_budget
        )));
    }
    let mut out = Vec::new();
    let mut subset = Vec::new();
    fn recurse(
        g: &TannerGraph,
        start: usize,
        a_max: usize,
        b_max: usize,
        fully: bool,
        subset: &mut Vec<usize>,
        out: &mut Vec<AbsorbingSet>,
    ) {
        if !subset.is_empty() {
            if let Some((odd, is_fully)) = classify_subset(g, subset) {
                if odd.len() <= b_max && (!fully || is_fully) {
                    out.push(AbsorbingSet {
                        variables: subset.clone(),
                        odd_checks: odd,
                        fully: is_fully,
                    });
                }
            }
        }
        if subset.len() == a_max {
            return;
        }
        for v in start..g.variable_count() {
            subset.push(v);
            recurse(g, v + 1, a_max, b_max, fully, subset, out);
            subset.pop();
        }
    }
    recurse(g, 0, a_max, b_max, fully, &mut subset, &mut out);
    out.sort_by(|x, y| x.variables.cmp(&y.variables));
    Ok(out)
}

/// The variable-node sets of the N binary cycles a block-cycle of a host
/// exponent matrix expands to.
pub fn expand_cycle_variable_sets(
    host: &ExponentMatrix,
    cycle: &BlockCycle,
) -> Vec<BTreeSet<usize>> {
    let n = host.lifting() as usize;
    let entries = cycle.entries();
    let shifts: Vec<usize> = entries
        .iter()
        .map(|&(i, j)| host.get(i, j).expect("cycle entries are non-void") as usize)
        .collect();
    (0..n)
        .map(|start| {
            let mut vars = BTreeSet::new();
            // Walk the entry sequence carrying the check offset: a row move
            // keeps it, a column move converts via the two shifts.
            let mut check_off = start;
            let k2 = entries.len();
            for t in 0..k2 {
                if t % 2 == 1 {
                    // e_t and e_{t+1} share a variable node.
                    let var_off = (check_off + shifts[t]) % n;
                    vars.insert(entries[t].1 * n + var_off);
                    let next = (t + 1) % k2;
                    check_off = (var_off + n - shifts[next] % n) % n;
                }
            }
            vars
        })
        .collect()
}

/// Counts the distinct (a,b) absorbing sets of a terminated code whose
/// variable sets arise from block-cycles of length 2a, checking each
/// candidate against the definition on the expanded binary graph.
///
/// For (3,3) sets in column-weight-3 codes this is exhaustive: every such
/// set contains a 6-cycle.
pub fn count_as_seeded(tc: &TerminatedCode, a: usize, b: usize) -> Result<u64> {
    let matrix = tc.matrix();
    let g = matrix.expand().tanner_graph();
    let list = enumerate_block_cycles(matrix, 2 * a)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut count = 0u64;
    for cycle in list.of_length(2 * a) {
        for vars in expand_cycle_variable_sets(matrix, cycle) {
            if vars.len() != a {
                continue;
            }
            let vars: Vec<usize> = vars.into_iter().collect();
            if seen.contains(&vars) {
                continue;
            }
            if let Some((odd, _)) = classify_subset(&g, &vars) {
                if odd.len() == b {
                    count += 1;
                }
            }
            seen.insert(vars);
        }
    }
    Ok(count)
}

/// Per-node average number of (a,b) absorbing sets, via the section-span
/// decomposition applied to absorbing-set counts.
///
/// Absorbing sets are counted on the expanded binary graph, so the per-node
/// denominator is the nN binary variable nodes of one period (cycle spectra
/// count per-lifting classes and divide by n only; the two conventions agree
/// per binary node).
pub fn average_as_per_node(
    p: &ExponentMatrix,
    b: &SpreadingMatrix,
    a: usize,
    b_size: usize,
) -> Result<Ratio<i64>> {
    let cb = edge_spread(p, b)?;
    let span = max_span(2 * a, b.memory());
    let d = (1..=span)
        .map(|i| {
            let tc = cb.terminate(i);
            count_as_seeded(&tc, a, b_size).map(|c| c as i64)
        })
        .collect::<Result<Vec<_>>>()?;
    let k = k_decomposition(&d)?;
    Ok(Ratio::new(
        k.iter().sum(),
        p.cols() as i64 * p.lifting() as i64,
    ))
}

/// Fully absorbing (4,2) sets seeded from pairs of 6-cycles sharing two
/// variable nodes; the general detector remains the authority.
pub fn find_fas_4_2_seeded(tc: &TerminatedCode) -> Result<Vec<AbsorbingSet>> {
    let matrix = tc.matrix();
    let g = matrix.expand().tanner_graph();
    let list = enumerate_block_cycles(matrix, 6)?;
    let mut sets: Vec<BTreeSet<usize>> = Vec::new();
    for cycle in list.of_length(6) {
        sets.extend(expand_cycle_variable_sets(matrix, cycle));
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for (i, s1) in sets.iter().enumerate() {
        for s2 in sets.iter().skip(i + 1) {
            if s1.intersection(s2).count() != 2 {
                continue;
            }
            let union: Vec<usize> = s1.union(s2).copied().collect();
            if union.len() != 4 || !seen.insert(union.clone()) {
                continue;
            }
            if let Some((odd, fully)) = classify_subset(&g, &union) {
                if odd.len() == 2 && fully {
                    out.push(AbsorbingSet {
                        variables: union,
                        odd_checks: odd,
                        fully,
                    });
                }
            }
        }
    }
    out.sort_by(|x, y| x.variables.cmp(&y.variables));
    Ok(out)
}
