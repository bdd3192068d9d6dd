//! Group-local erasure repair.
//!
//! Within a group every codeword restricts to a polynomial of degree `< r`
//! evaluated at the nodes `B`, so any `r` surviving symbols of the group
//! determine the rest. Repair uses the received symbols and the layout only.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::construction::{encode, CodeInstance};
use crate::linalg::solve_interpolation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepairError {
    #[error("position {0} is not erased")]
    NotErased(usize),
    #[error("group {group} has {erased} erasures, at most {limit} are repairable")]
    TooManyErasuresInGroup {
        group: usize,
        erased: usize,
        limit: usize,
    },
    #[error("received word has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("position {0} is out of range")]
    OutOfRange(usize),
    #[error("invalid simulation settings: {0}")]
    InvalidSettings(String),
}

pub type Result<T, E = RepairError> = std::result::Result<T, E>;

/// A received word; `None` marks an erasure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    received: Vec<Option<u32>>,
}

impl ErasurePattern {
    pub fn new(received: Vec<Option<u32>>) -> Self {
        Self { received }
    }

    pub fn from_codeword(codeword: &[u32], erased: &[usize]) -> Self {
        let mut received: Vec<Option<u32>> = codeword.iter().copied().map(Some).collect();
        for &p in erased {
            received[p] = None;
        }
        Self { received }
    }

    pub fn received(&self) -> &[Option<u32>] {
        &self.received
    }

    pub fn len(&self) -> usize {
        self.received.len()
    }

    pub fn is_empty(&self) -> bool {
        self.received.is_empty()
    }

    pub fn is_erased(&self, position: usize) -> bool {
        self.received[position].is_none()
    }

    pub fn erased(&self) -> Vec<usize> {
        (0..self.received.len())
            .filter(|&p| self.is_erased(p))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairTrace {
    pub repaired: Vec<usize>,
    /// Absolute positions read.
    pub reads: Vec<usize>,
    /// The same reads as slot indices within the group.
    pub read_slots: Vec<usize>,
    pub symbols_read: usize,
}

fn check_len(instance: &CodeInstance, pattern: &ErasurePattern) -> Result<()> {
    if pattern.len() != instance.n() {
        return Err(RepairError::LengthMismatch {
            expected: instance.n(),
            got: pattern.len(),
        });
    }
    Ok(())
}

/// Local polynomial of `group` through its `r` lowest surviving slots.
fn local_polynomial(
    instance: &CodeInstance,
    pattern: &ErasurePattern,
    group: usize,
) -> Result<(Vec<u32>, Vec<usize>)> {
    let layout = &instance.layout;
    let r = instance.params.r;
    let positions = layout.group_positions(group);
    let survivors: Vec<usize> = positions
        .clone()
        .filter(|&p| !pattern.is_erased(p))
        .collect();
    if survivors.len() < r {
        return Err(RepairError::TooManyErasuresInGroup {
            group,
            erased: layout.group_size() - survivors.len(),
            limit: layout.group_size() - r,
        });
    }
    let reads = survivors[..r].to_vec();
    let nodes: Vec<u32> = reads
        .iter()
        .map(|&p| layout.b[layout.locate(p).1])
        .collect();
    let values: Vec<u32> = reads
        .iter()
        .map(|&p| pattern.received[p].unwrap())
        .collect();
    let poly = solve_interpolation(&instance.field, &nodes, &values)
        .expect("group nodes are distinct and counts match");
    Ok((poly, reads))
}

fn trace(instance: &CodeInstance, repaired: Vec<usize>, reads: Vec<usize>) -> RepairTrace {
    let read_slots = reads.iter().map(|&p| instance.layout.locate(p).1).collect();
    RepairTrace {
        repaired,
        symbols_read: reads.len(),
        reads,
        read_slots,
    }
}

/// Recovers one erased symbol from exactly `r` symbols of its group.
pub fn repair_position(
    instance: &CodeInstance,
    pattern: &ErasurePattern,
    position: usize,
) -> Result<(u32, RepairTrace)> {
    check_len(instance, pattern)?;
    if position >= instance.n() {
        return Err(RepairError::OutOfRange(position));
    }
    if !pattern.is_erased(position) {
        return Err(RepairError::NotErased(position));
    }
    let (group, slot) = instance.layout.locate(position);
    let (poly, reads) = local_polynomial(instance, pattern, group)?;
    let value = instance.field.eval_poly(&poly, instance.layout.b[slot]);
    Ok((value, trace(instance, vec![position], reads)))
}

/// Recovers every erased symbol of a group holding at most `mu - 1` erasures.
pub fn repair_group(
    instance: &CodeInstance,
    pattern: &ErasurePattern,
    group: usize,
) -> Result<(Vec<u32>, RepairTrace)> {
    check_len(instance, pattern)?;
    if group >= instance.layout.groups() {
        return Err(RepairError::OutOfRange(group));
    }
    let erased: Vec<usize> = instance
        .layout
        .group_positions(group)
        .filter(|&p| pattern.is_erased(p))
        .collect();
    let limit = instance.params.mu - 1;
    if erased.len() > limit {
        return Err(RepairError::TooManyErasuresInGroup {
            group,
            erased: erased.len(),
            limit,
        });
    }
    if erased.is_empty() {
        return Ok((Vec::new(), trace(instance, Vec::new(), Vec::new())));
    }
    let (poly, reads) = local_polynomial(instance, pattern, group)?;
    let values = erased
        .iter()
        .map(|&p| {
            let slot = instance.layout.locate(p).1;
            instance.field.eval_poly(&poly, instance.layout.b[slot])
        })
        .collect();
    Ok((values, trace(instance, erased, reads)))
}

/// Repairs every group of the pattern; fails on the first group over budget.
pub fn repair_all(
    instance: &CodeInstance,
    pattern: &ErasurePattern,
) -> Result<(Vec<u32>, Vec<RepairTrace>)> {
    check_len(instance, pattern)?;
    let mut word: Vec<u32> = pattern.received.iter().map(|x| x.unwrap_or(0)).collect();
    let mut traces = Vec::new();
    for group in 0..instance.layout.groups() {
        let (values, tr) = repair_group(instance, pattern, group)?;
        for (&p, v) in tr.repaired.iter().zip(values) {
            word[p] = v;
        }
        if !tr.repaired.is_empty() {
            traces.push(tr);
        }
    }
    Ok((word, traces))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationStats {
    pub trials: usize,
    pub failures: usize,
    pub fully_repaired_trials: usize,
    pub repaired_fraction: f64,
    pub repaired_symbols: u64,
    pub symbols_read: u64,
    pub mean_reads_per_symbol: f64,
    /// `histogram[c]`: number of (trial, group) pairs with `c` erasures.
    pub erasures_per_group: Vec<u64>,
    /// Repairs that disagreed with the encoded word; always zero for a correct code.
    pub mismatches: u64,
}

/// Erases `failures` uniformly random positions of a random codeword per trial
/// and repairs each erased symbol whose group is within its erasure budget.
pub fn simulate_failures(
    instance: &CodeInstance,
    failures: usize,
    trials: usize,
    seed: u64,
) -> Result<SimulationStats> {
    let n = instance.n();
    if failures < 1 || failures > n {
        return Err(RepairError::InvalidSettings(format!(
            "failures must be in 1..={n} (got {failures})"
        )));
    }
    if trials < 1 {
        return Err(RepairError::InvalidSettings("trials must be >= 1".into()));
    }
    let groups = instance.layout.groups();
    let budget = instance.params.mu - 1;
    let mut histogram = vec![0u64; failures.min(instance.layout.group_size()) + 1];
    let mut fully = 0;
    let mut repaired_symbols = 0u64;
    let mut symbols_read = 0u64;
    let mut mismatches = 0u64;

    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let msg: Vec<u32> = (0..instance.k())
            .map(|_| rng.gen_range(0..instance.field.q()))
            .collect();
        let word = encode(instance, &msg).expect("message has length k");
        let erased = sample(&mut rng, n, failures).into_vec();
        let pattern = ErasurePattern::from_codeword(&word, &erased);

        let mut per_group = vec![0usize; groups];
        for &p in &erased {
            per_group[instance.layout.locate(p).0] += 1;
        }
        for &c in &per_group {
            histogram[c] += 1;
        }
        if per_group.iter().all(|&c| c <= budget) {
            fully += 1;
        }
        for &p in &erased {
            if per_group[instance.layout.locate(p).0] > budget {
                continue;
            }
            let (v, tr) = repair_position(instance, &pattern, p)?;
            repaired_symbols += 1;
            symbols_read += tr.symbols_read as u64;
            if v != word[p] {
                mismatches += 1;
            }
        }
    }

    Ok(SimulationStats {
        trials,
        failures,
        fully_repaired_trials: fully,
        repaired_fraction: fully as f64 / trials as f64,
        repaired_symbols,
        symbols_read,
        mean_reads_per_symbol: if repaired_symbols == 0 {
            0.0
        } else {
            symbols_read as f64 / repaired_symbols as f64
        },
        erasures_per_group: histogram,
        mismatches,
    })
}
