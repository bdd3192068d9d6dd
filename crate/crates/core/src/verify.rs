//! Independent checks on a constructed code: exact minimum distance by
//! exhaustive enumeration, `H(U)` by enumeration, distance bounds, a locality
//! audit, and the Singleton-like bound with its defect.
//!
//! Enumeration walks the message space as the GF(p)-span of the `k·m` vectors
//! `α^j G_i` in modular p-ary Gray order, so every step adds exactly one
//! generator to the running codeword.

use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::construction::{CodeInstance, LrcParams, Strategy};
use crate::gf::Field;
use crate::linalg::{left_null_space, rref, Matrix};

/// Default limit on the number of nonzero messages enumerated.
pub const DEFAULT_EXACT_CAP: u64 = 1 << 24;

/// Subset rank checks allowed per group in the single-group witness search.
const WITNESS_SUBSET_BUDGET: usize = 20_000;
/// Pair combinations of reduced generator rows tried for the upper bound.
const PAIR_BUDGET: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("message space of size {q}^{k} exceeds the enumeration cap {cap}")]
    CapExceeded { q: u32, k: usize, cap: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T, E = VerifyError> = std::result::Result<T, E>;

/// `q^k - 1 <= cap`.
pub fn within_cap(q: u32, k: usize, cap: u64) -> bool {
    let mut total: u128 = 1;
    for _ in 0..k {
        total = total.saturating_mul(q as u128);
        if total > cap as u128 + 1 {
            return false;
        }
    }
    total - 1 <= cap as u128
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

trait Tracker: Clone + Send + Sync {
    fn load(&mut self, field: &Field, v: &[u32]);
    fn add(&mut self, field: &Field, gen: &[u32]);
    fn score(&self) -> usize;
}

#[derive(Clone)]
struct WeightTracker {
    state: Vec<u32>,
    weight: usize,
}

impl Tracker for WeightTracker {
    fn load(&mut self, _: &Field, v: &[u32]) {
        self.state.copy_from_slice(v);
        self.weight = v.iter().filter(|&&x| x != 0).count();
    }

    #[inline]
    fn add(&mut self, field: &Field, gen: &[u32]) {
        for (s, &g) in self.state.iter_mut().zip(gen) {
            if g == 0 {
                continue;
            }
            let old = *s;
            let new = field.add(old, g);
            *s = new;
            self.weight = self.weight + (new != 0) as usize - (old != 0) as usize;
        }
    }

    fn score(&self) -> usize {
        self.weight
    }
}

/// Tracks how many blocks of `block` consecutive coordinates are entirely zero.
#[derive(Clone)]
struct ZeroBlockTracker {
    state: Vec<u32>,
    block: usize,
    nonzero: Vec<usize>,
    zero_blocks: usize,
}

impl Tracker for ZeroBlockTracker {
    fn load(&mut self, _: &Field, v: &[u32]) {
        self.state.copy_from_slice(v);
        for (b, chunk) in v.chunks(self.block).enumerate() {
            self.nonzero[b] = chunk.iter().filter(|&&x| x != 0).count();
        }
        self.zero_blocks = self.nonzero.iter().filter(|&&c| c == 0).count();
    }

    #[inline]
    fn add(&mut self, field: &Field, gen: &[u32]) {
        for (c, (s, &g)) in self.state.iter_mut().zip(gen).enumerate() {
            if g == 0 {
                continue;
            }
            let old = *s;
            let new = field.add(old, g);
            *s = new;
            if (old == 0) != (new == 0) {
                let b = c / self.block;
                if new == 0 {
                    self.nonzero[b] -= 1;
                    if self.nonzero[b] == 0 {
                        self.zero_blocks += 1;
                    }
                } else {
                    if self.nonzero[b] == 0 {
                        self.zero_blocks -= 1;
                    }
                    self.nonzero[b] += 1;
                }
            }
        }
    }

    fn score(&self) -> usize {
        self.zero_blocks
    }
}

#[derive(Clone, Copy)]
enum Goal {
    Min,
    Max,
}

impl Goal {
    fn pick(self, a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(match self {
                Goal::Min => x.min(y),
                Goal::Max => x.max(y),
            }),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

/// GF(p)-generators `α^j · row_i` of the span of `rows`.
fn prime_generators(field: &Field, rows: &Matrix) -> Vec<Vec<u32>> {
    let mut gens = Vec::with_capacity(rows.rows() * field.m() as usize);
    for row in rows.row_iter() {
        for j in 0..field.m() {
            let a = field.alpha_power(j);
            gens.push(row.iter().map(|&x| field.mul(a, x)).collect());
        }
    }
    gens
}

fn walk_chunk<T: Tracker>(
    field: &Field,
    gens: &[Vec<u32>],
    start: u64,
    end: u64,
    tracker: &mut T,
    goal: Goal,
) -> Option<usize> {
    let p = field.p();
    let len = gens.len();
    let mut counter = Vec::with_capacity(len + 1);
    let mut rest = start;
    for _ in 0..len {
        counter.push((rest % p as u64) as u32);
        rest /= p as u64;
    }
    counter.push(0);

    let dim = gens.first().map_or(0, Vec::len);
    let mut v = vec![0u32; dim];
    for i in 0..len {
        let gray = (counter[i] + p - counter[i + 1]) % p;
        if gray != 0 {
            for (x, &g) in v.iter_mut().zip(&gens[i]) {
                *x = field.add(*x, field.mul(gray, g));
            }
        }
    }
    tracker.load(field, &v);

    let mut best = None;
    let mut idx = start;
    loop {
        if idx != 0 {
            best = goal.pick(best, Some(tracker.score()));
        }
        idx += 1;
        if idx >= end {
            break;
        }
        let mut j = 0;
        while counter[j] == p - 1 {
            counter[j] = 0;
            j += 1;
        }
        counter[j] += 1;
        tracker.add(field, &gens[j]);
    }
    best
}

fn walk<T: Tracker>(
    field: &Field,
    gens: &[Vec<u32>],
    workers: usize,
    proto: &T,
    goal: Goal,
) -> (Option<usize>, u64) {
    let total = (field.p() as u64).pow(gens.len() as u32);
    let chunks = if workers <= 1 || total < 1 << 12 {
        1
    } else {
        (workers as u64 * 4).min(total)
    };
    let bounds: Vec<(u64, u64)> = (0..chunks)
        .map(|c| (total * c / chunks, total * (c + 1) / chunks))
        .collect();
    let run = |&(s, e): &(u64, u64)| walk_chunk(field, gens, s, e, &mut proto.clone(), goal);
    let results: Vec<Option<usize>> = if chunks == 1 {
        bounds.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| bounds.par_iter().map(run).collect())
    };
    let best = results.into_iter().fold(None, |a, b| goal.pick(a, b));
    (best, total - 1)
}

/// Result of an exhaustive walk over all nonzero messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub value: usize,
    pub messages: u64,
}

/// Exact minimum distance of the code generated by `g` (over nonzero messages).
pub fn exact_distance(g: &Matrix, cap: u64, workers: usize) -> Result<DistanceEnumeration> {
    let field = g.field();
    if !within_cap(field.q(), g.rows(), cap) {
        return Err(VerifyError::CapExceeded {
            q: field.q(),
            k: g.rows(),
            cap,
        });
    }
    let gens = prime_generators(field, g);
    let proto = WeightTracker {
        state: vec![0; g.cols()],
        weight: 0,
    };
    let (best, messages) = walk(field, &gens, workers, &proto, Goal::Min);
    Ok(DistanceEnumeration {
        distance: best.unwrap_or(0),
        messages,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistanceEnumeration {
    pub distance: usize,
    pub messages: u64,
}

pub fn min_distance_exact(instance: &CodeInstance, cap: u64) -> Result<usize> {
    Ok(exact_distance(&instance.generator, cap, default_workers())?.distance)
}

/// `H(U)`: the largest number of common roots in `B` over nonzero grids in `U`.
pub fn subspace_h_with(instance: &CodeInstance, cap: u64, workers: usize) -> Result<Enumeration> {
    let field = &instance.field;
    let basis = &instance.subspace.basis;
    let (r, t) = (instance.params.r, instance.params.t);
    if !within_cap(field.q(), basis.rows(), cap) {
        return Err(VerifyError::CapExceeded {
            q: field.q(),
            k: basis.rows(),
            cap,
        });
    }
    let nodes = &instance.layout.b;
    // column evaluations: entry j*t + s is Σ_h a[h][s] b_j^h
    let mut evals = Matrix::zeros(field, basis.rows(), nodes.len() * t);
    for (i, row) in basis.row_iter().enumerate() {
        for (j, &b) in nodes.iter().enumerate() {
            for s in 0..t {
                let col: Vec<u32> = (0..r).map(|h| row[h * t + s]).collect();
                evals.set(i, j * t + s, field.eval_poly(&col, b));
            }
        }
    }
    let gens = prime_generators(field, &evals);
    let proto = ZeroBlockTracker {
        state: vec![0; nodes.len() * t],
        block: t,
        nonzero: vec![0; nodes.len()],
        zero_blocks: 0,
    };
    let (best, messages) = walk(field, &gens, workers, &proto, Goal::Max);
    Ok(Enumeration {
        value: best.unwrap_or(0),
        messages,
    })
}

pub fn subspace_h(instance: &CodeInstance, cap: u64) -> Result<usize> {
    Ok(subspace_h_with(instance, cap, default_workers())?.value)
}

/// An upper bound on `H(U)` that holds by construction, without enumeration.
pub fn proven_h(instance: &CodeInstance) -> usize {
    let p = &instance.params;
    match p.strategy {
        // every nonzero column also vanishes on E \ B
        Strategy::Colwise => {
            let outside = instance
                .layout
                .e
                .iter()
                .filter(|e| !instance.layout.b.contains(e))
                .count();
            p.r - 1 - outside
        }
        _ => p.r - 1,
    }
}

/// `n - (r+mu-1)(t-1) - H(l-t+1)`; may be nonpositive.
pub fn locality_lower_bound(params: &LrcParams, h: usize) -> i64 {
    params.n as i64
        - (params.group_size() as i64) * (params.t as i64 - 1)
        - (h as i64) * (params.l as i64 - params.t as i64 + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceBounds {
    pub lower: usize,
    pub upper: usize,
    pub lower_method: String,
    pub upper_method: String,
    pub candidates: u64,
}

/// Bounds using the strategy-proven `H(U)`.
pub fn min_distance_bounds(instance: &CodeInstance, trials: usize, seed: u64) -> DistanceBounds {
    min_distance_bounds_with_h(instance, None, trials, seed)
}

/// Bounds using a measured `H(U)` when given. The upper bound is the lightest
/// nonzero codeword found among single-group witnesses, reduced generator rows
/// and their pairwise combinations, and random messages.
pub fn min_distance_bounds_with_h(
    instance: &CodeInstance,
    measured_h: Option<usize>,
    trials: usize,
    seed: u64,
) -> DistanceBounds {
    let (h, h_tag) = match measured_h {
        Some(h) => (h, "enumerated"),
        None => (proven_h(instance), "proven"),
    };
    let formula = locality_lower_bound(&instance.params, h);
    let lower = formula.max(1) as usize;
    let lower_method = format!("locality bound with H(U)={h} ({h_tag}): {formula}");

    let g = &instance.generator;
    let field = &instance.field;
    let mut best: Option<(usize, &'static str)> = None;
    let mut candidates = 0u64;
    let consider = |cw: &[u32], tag: &'static str, best: &mut Option<(usize, &'static str)>| {
        let w = cw.iter().filter(|&&x| x != 0).count();
        if w > 0 && best.is_none_or(|(bw, _)| w < bw) {
            *best = Some((w, tag));
        }
    };

    for cw in single_group_witnesses(instance) {
        candidates += 1;
        consider(&cw, "single-group witness", &mut best);
    }

    let reduced = rref(g);
    let rows: Vec<&[u32]> = reduced.matrix.row_iter().take(reduced.rank).collect();
    for row in &rows {
        candidates += 1;
        consider(row, "reduced generator row", &mut best);
    }
    let mut pairs = 0;
    'pairs: for (i, j) in (0..rows.len()).tuple_combinations() {
        for c in 1..field.q() {
            if pairs >= PAIR_BUDGET {
                break 'pairs;
            }
            pairs += 1;
            let cw: Vec<u32> = rows[i]
                .iter()
                .zip(rows[j])
                .map(|(&a, &b)| field.add(a, field.mul(c, b)))
                .collect();
            candidates += 1;
            consider(&cw, "pair combination", &mut best);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let msg: Vec<u32> = (0..g.rows()).map(|_| rng.gen_range(0..field.q())).collect();
        if msg.iter().all(|&x| x == 0) {
            continue;
        }
        candidates += 1;
        consider(&g.left_mul_vec(&msg), "random message", &mut best);
    }

    let (upper, upper_method) = best.unwrap_or((instance.n(), "trivial"));
    DistanceBounds {
        lower,
        upper,
        lower_method,
        upper_method: upper_method.to_string(),
        candidates,
    }
}

/// For each group, the lightest codeword supported on that group alone,
/// found by forcing as many in-group coordinates to zero as the subcode allows.
fn single_group_witnesses(instance: &CodeInstance) -> Vec<Vec<u32>> {
    let g = &instance.generator;
    let layout = &instance.layout;
    let mut out = Vec::new();
    for group in 0..layout.groups() {
        let inside: Vec<usize> = layout.group_positions(group).collect();
        let outside: Vec<usize> = (0..g.cols()).filter(|p| !inside.contains(p)).collect();
        let kernel = left_null_space(&g.select_cols(&outside));
        let dk = kernel.rows();
        if dk == 0 {
            continue;
        }
        let local = kernel.mul(&g.select_cols(&inside));
        let size = inside.len();
        let mut checks = 0;
        let mut found = None;
        'levels: for z in (dk - 1..size).rev() {
            for zeros in (0..size).combinations(z) {
                if checks >= WITNESS_SUBSET_BUDGET && z > dk - 1 {
                    continue 'levels;
                }
                checks += 1;
                let sub = local.select_cols(&zeros);
                let y = left_null_space(&sub);
                if y.rows() > 0 {
                    found = Some(y.row(0).to_vec());
                    break 'levels;
                }
            }
        }
        if let Some(y) = found {
            let msg = kernel.transpose().mul_vec(&y);
            out.push(g.left_mul_vec(&msg));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupAudit {
    pub group: usize,
    pub local_rank: usize,
    pub subsets_checked: usize,
    /// Column subsets whose removal dropped the local rank.
    pub failures: Vec<Vec<usize>>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalityAudit {
    pub pass: bool,
    pub groups: Vec<GroupAudit>,
}

/// Checks one local code: rank at most `r`, and removing any `mu-1` columns
/// keeps the rank (so the local distance is at least `mu`).
pub fn audit_local_code(local: &Matrix, r: usize, mu: usize, group: usize) -> GroupAudit {
    let local_rank = local.rank();
    let cols = local.cols();
    let mut failures = Vec::new();
    let mut subsets_checked = 0;
    for removed in (0..cols).combinations(mu - 1) {
        subsets_checked += 1;
        let kept: Vec<usize> = (0..cols).filter(|c| !removed.contains(c)).collect();
        if local.select_cols(&kept).rank() < local_rank {
            failures.push(removed);
        }
    }
    GroupAudit {
        group,
        local_rank,
        subsets_checked,
        pass: local_rank <= r && failures.is_empty(),
        failures,
    }
}

pub fn locality_audit(instance: &CodeInstance) -> LocalityAudit {
    let groups: Vec<GroupAudit> = (0..instance.layout.groups())
        .map(|grp| {
            let cols: Vec<usize> = instance.layout.group_positions(grp).collect();
            audit_local_code(
                &instance.generator.select_cols(&cols),
                instance.params.r,
                instance.params.mu,
                grp,
            )
        })
        .collect();
    LocalityAudit {
        pass: groups.iter().all(|g| g.pass),
        groups,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub bound: i64,
    pub defect: i64,
    pub optimal: bool,
}

/// Singleton-like bound: `n-k+2-⌈k/r⌉` for `mu = 2`,
/// `n-k+1-(⌈k/r⌉-1)(mu-1)` otherwise; defect is `bound - d`.
pub fn singleton_bound(n: usize, k: usize, r: usize, mu: usize) -> Result<i64> {
    if k < 1 || r < 1 || mu < 2 {
        return Err(VerifyError::InvalidParams(format!(
            "need k >= 1, r >= 1, mu >= 2 (k={k}, r={r}, mu={mu})"
        )));
    }
    let (n, k, r, mu) = (n as i64, k as i64, r as i64, mu as i64);
    let ceil = (k + r - 1) / r;
    Ok(if mu == 2 {
        n - k + 2 - ceil
    } else {
        n - k + 1 - (ceil - 1) * (mu - 1)
    })
}

pub fn bound_and_defect(n: usize, k: usize, d: usize, r: usize, mu: usize) -> Result<BoundCheck> {
    let bound = singleton_bound(n, k, r, mu)?;
    let defect = bound - d as i64;
    Ok(BoundCheck {
        bound,
        defect,
        optimal: defect == 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClaimStatus {
    Verified,
    Failed,
    Unverified,
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimStatus::Verified => "VERIFIED",
            ClaimStatus::Failed => "FAILED",
            ClaimStatus::Unverified => "UNVERIFIED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub expected: i64,
    pub measured: Option<i64>,
    pub status: ClaimStatus,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub exact: Option<usize>,
    pub lower: usize,
    pub upper: usize,
    pub lower_method: String,
    pub upper_method: String,
}

/// Deterministic work counters (no wall-clock values, so reports are reproducible).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RuntimeStats {
    pub distance_messages: u64,
    pub h_messages: u64,
    pub witness_candidates: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub q: u32,
    pub n: usize,
    /// Measured rank of the generator.
    pub k: usize,
    pub expected_k: usize,
    pub r: usize,
    pub mu: usize,
    pub w: usize,
    pub l: usize,
    pub t: usize,
    pub strategy: Strategy,
    pub seed: Option<u64>,
    pub distance: DistanceReport,
    pub h_u: Option<usize>,
    pub bound: i64,
    /// Exact defect when the distance is exact.
    pub defect: Option<i64>,
    /// `[bound - upper, bound - lower]`.
    pub defect_range: (i64, i64),
    pub optimal: bool,
    pub claims: Vec<ClaimCheck>,
    pub locality: LocalityAudit,
    pub invariants: Vec<InvariantCheck>,
    pub notes: Vec<String>,
    pub stats: RuntimeStats,
}

impl VerificationReport {
    pub fn invariants_hold(&self) -> bool {
        self.invariants.iter().all(|c| c.pass)
    }

    pub fn any_claim_failed(&self) -> bool {
        self.claims.iter().any(|c| c.status == ClaimStatus::Failed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub exact_cap: u64,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            exact_cap: DEFAULT_EXACT_CAP,
            trials: 200,
            seed: 0,
            workers: default_workers(),
        }
    }
}

pub fn full_report(instance: &CodeInstance, opts: &ReportOptions) -> VerificationReport {
    let p = &instance.params;
    let k = instance.generator.rank();
    let locality = locality_audit(instance);

    let h = subspace_h_with(instance, opts.exact_cap, opts.workers).ok();
    let exact = exact_distance(&instance.generator, opts.exact_cap, opts.workers).ok();
    let bounds = min_distance_bounds_with_h(instance, h.map(|e| e.value), opts.trials, opts.seed);

    let bound = singleton_bound(p.n, k.max(1), p.r, p.mu).expect("validated parameters");
    let d_exact = exact.map(|e| e.distance);
    let defect = d_exact.map(|d| bound - d as i64);
    let defect_range = (bound - bounds.upper as i64, bound - bounds.lower as i64);
    let optimal = defect == Some(0);

    let mut claims = Vec::new();
    let mut notes = Vec::new();
    let evidence = match d_exact {
        Some(d) => format!("exhaustive enumeration: d={d}"),
        None => format!(
            "exact distance out of cap; bounds [{}, {}]",
            bounds.lower, bounds.upper
        ),
    };
    let judge = |expected: i64, measured: Option<i64>| match measured {
        Some(m) if m == expected => ClaimStatus::Verified,
        Some(_) => ClaimStatus::Failed,
        None => ClaimStatus::Unverified,
    };
    if p.t == p.l {
        let target = (p.w + p.mu) as i64;
        claims.push(ClaimCheck {
            claim: "d = w + mu".into(),
            expected: target,
            measured: d_exact.map(|d| d as i64),
            status: judge(target, d_exact.map(|d| d as i64)),
            evidence: evidence.clone(),
        });
        if p.strategy == Strategy::Colwise {
            if p.w > 0 {
                notes.push(format!(
                    "COLWISE dimension k=(r-w)t={} differs from rl-w={}; no optimality claim",
                    p.k,
                    p.r * p.l - p.w
                ));
            }
        } else {
            claims.push(ClaimCheck {
                claim: "defect = 0".into(),
                expected: 0,
                measured: defect,
                status: judge(0, defect),
                evidence: evidence.clone(),
            });
        }
    } else {
        notes.push("t < l: no distance claim applies; measured values only".into());
    }
    if p.shared_nodes {
        notes.push("E shares nodes with B (r+mu-1+w > q)".into());
    }
    if d_exact.is_none() && bounds.upper < (p.w + p.mu) {
        notes.push(format!(
            "a codeword of weight {} was found ({}), below the claimed distance {}",
            bounds.upper,
            bounds.upper_method,
            p.w + p.mu
        ));
    }

    let mut invariants = vec![
        InvariantCheck {
            name: format!("rank(G) = k = {}", p.k),
            pass: k == p.k,
        },
        InvariantCheck {
            name: "locality audit".into(),
            pass: locality.pass,
        },
        InvariantCheck {
            name: "lower bound <= upper bound".into(),
            pass: bounds.lower <= bounds.upper,
        },
    ];
    if let Some(d) = d_exact {
        invariants.push(InvariantCheck {
            name: "lower <= exact <= upper".into(),
            pass: bounds.lower <= d && d <= bounds.upper,
        });
        invariants.push(InvariantCheck {
            name: "exact d <= Singleton-like bound".into(),
            pass: d as i64 <= bound,
        });
    }

    VerificationReport {
        q: p.q,
        n: p.n,
        k,
        expected_k: p.k,
        r: p.r,
        mu: p.mu,
        w: p.w,
        l: p.l,
        t: p.t,
        strategy: p.strategy,
        seed: instance.subspace.seed,
        distance: DistanceReport {
            exact: d_exact,
            lower: bounds.lower,
            upper: bounds.upper,
            lower_method: bounds.lower_method,
            upper_method: bounds.upper_method,
        },
        h_u: h.map(|e| e.value),
        bound,
        defect,
        defect_range,
        optimal,
        claims,
        locality,
        invariants,
        notes,
        stats: RuntimeStats {
            distance_messages: exact.map_or(0, |e| e.messages),
            h_messages: h.map_or(0, |e| e.messages),
            witness_candidates: bounds.candidates,
        },
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "code: [n={}, k={}] over GF({}), r={} mu={} w={} l={} t={} strategy={}{}",
            self.n,
            self.k,
            self.q,
            self.r,
            self.mu,
            self.w,
            self.l,
            self.t,
            self.strategy,
            self.seed.map(|s| format!(" seed={s}")).unwrap_or_default()
        )?;
        let checks: usize = self.locality.groups.iter().map(|g| g.subsets_checked).sum();
        writeln!(
            f,
            "locality: {} ({} groups, {} erasure-rank checks)",
            if self.locality.pass { "PASS" } else { "FAIL" },
            self.locality.groups.len(),
            checks
        )?;
        match self.h_u {
            Some(h) => writeln!(f, "H(U): {h} ({} grids enumerated)", self.stats.h_messages)?,
            None => writeln!(f, "H(U): not enumerated (out of cap)")?,
        }
        match self.distance.exact {
            Some(d) => writeln!(
                f,
                "distance: exact {d} ({} messages enumerated)",
                self.stats.distance_messages
            )?,
            None => writeln!(f, "distance: out of cap")?,
        }
        writeln!(
            f,
            "bounds: [{}, {}] (lower: {}; upper: {}, {} candidates)",
            self.distance.lower,
            self.distance.upper,
            self.distance.lower_method,
            self.distance.upper_method,
            self.stats.witness_candidates
        )?;
        writeln!(f, "singleton-like bound: {}", self.bound)?;
        match (self.distance.exact, self.defect) {
            (Some(d), Some(s)) => writeln!(
                f,
                "d={d} defect={s} {}",
                if self.optimal {
                    "OPTIMAL"
                } else {
                    "NOT OPTIMAL"
                }
            )?,
            _ => writeln!(
                f,
                "d=[{},{}] defect=[{},{}] UNVERIFIED",
                self.distance.lower, self.distance.upper, self.defect_range.0, self.defect_range.1
            )?,
        }
        for c in &self.claims {
            writeln!(
                f,
                "claim \"{}\": expected {} measured {} {} ({})",
                c.claim,
                c.expected,
                c.measured.map_or("-".to_string(), |m| m.to_string()),
                c.status,
                c.evidence
            )?;
        }
        for inv in &self.invariants {
            writeln!(
                f,
                "check {}: {}",
                inv.name,
                if inv.pass { "ok" } else { "VIOLATED" }
            )?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}
