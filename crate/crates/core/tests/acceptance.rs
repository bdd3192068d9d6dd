//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p lrc-core --test acceptance`.

mod common;

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use common::{instance, naive_distance, naive_encode, poly_field, subsets};
use lrc_core::repair::{repair_all, repair_group, repair_position, RepairError};
use lrc_core::verify::{default_workers, locality_lower_bound, within_cap};
use lrc_core::{
    encode, full_report, plan_params, simulate_failures, spec_file, table1_preset, ClaimStatus,
    CodeInstance, ErasurePattern, Field, ReportOptions, Strategy, VerificationReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<Run, String>;

/// `digest` is everything the criterion produced; it must not depend on the worker count.
struct Run {
    detail: String,
    digest: String,
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn opts(workers: usize) -> ReportOptions {
    ReportOptions {
        workers,
        ..ReportOptions::default()
    }
}

fn digest(inst: &CodeInstance, report: &VerificationReport) -> String {
    format!("{}{report}{report:?}", spec_file::serialize(inst))
}

fn claims_are(report: &VerificationReport, status: ClaimStatus) -> bool {
    !report.claims.is_empty() && report.claims.iter().all(|c| c.status == status)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut triples = 0u64;
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 64] {
        let f = Field::new(q).unwrap();
        let oracle = poly_field(&f);
        let q = f.q();
        for a in 0..q {
            ensure!(
                f.add(a, 0) == a && f.mul(a, 1) == a && f.mul(a, 0) == 0,
                "identities fail in GF({q}) at {a}"
            );
            ensure!(
                f.add(a, f.neg(a)) == 0,
                "additive inverse fails in GF({q}) at {a}"
            );
            if a != 0 {
                ensure!(
                    f.mul(a, f.inv(a).unwrap()) == 1,
                    "inverse fails in GF({q}) at {a}"
                );
                ensure!(
                    f.pow(a, q as u64 - 1) == 1,
                    "a^(q-1) != 1 in GF({q}) at {a}"
                );
            }
            for b in 0..q {
                ensure!(
                    f.add(a, b) == f.add(b, a) && f.mul(a, b) == f.mul(b, a),
                    "commutativity fails in GF({q})"
                );
                ensure!(
                    f.add(a, b) == oracle.add(a, b) && f.mul(a, b) == oracle.mul(a, b),
                    "GF({q}) disagrees with polynomial arithmetic at ({a}, {b})"
                );
                ensure!(f.sub(f.add(a, b), b) == a, "subtraction fails in GF({q})");
                if b != 0 {
                    ensure!(
                        f.mul(f.div(a, b).unwrap(), b) == a,
                        "division fails in GF({q})"
                    );
                    ensure!(a == 0 || f.mul(a, b) != 0, "zero divisor in GF({q})");
                }
            }
        }
        let mut triple = |a: u32, b: u32, c: u32| -> Result<(), String> {
            triples += 1;
            ensure!(
                f.add(f.add(a, b), c) == f.add(a, f.add(b, c)),
                "additive associativity fails in GF({q})"
            );
            ensure!(
                f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)),
                "multiplicative associativity fails in GF({q})"
            );
            ensure!(
                f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)),
                "distributivity fails in GF({q})"
            );
            Ok(())
        };
        if q <= 16 {
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        triple(a, b, c)?;
                    }
                }
            }
        } else {
            for _ in 0..100_000 {
                triple(
                    rng.gen_range(0..q),
                    rng.gen_range(0..q),
                    rng.gen_range(0..q),
                )?;
            }
        }
    }
    Ok(Run {
        detail: format!("12 fields, {triples} triples"),
        digest: String::new(),
    })
}

fn criterion_2(workers: usize) -> Outcome {
    let inst = instance(4, 2, 2, 0, 3, Strategy::Full);
    let report = full_report(&inst, &opts(workers));
    let d = naive_distance(&inst.generator);
    ensure!(d == 2, "oracle distance {d}");
    ensure!(
        (report.n, report.k, report.distance.exact) == (9, 6, Some(2)),
        "measured [{}, {}, {:?}]",
        report.n,
        report.k,
        report.distance.exact
    );
    ensure!(
        report.defect == Some(0) && report.optimal,
        "defect {:?}",
        report.defect
    );
    ensure!(
        report.to_string().contains("d=2 defect=0 OPTIMAL"),
        "summary line missing"
    );
    ensure!(
        claims_are(&report, ClaimStatus::Verified) && report.invariants_hold(),
        "claims or invariants fail"
    );
    Ok(Run {
        detail: "[9,6,2] defect 0 OPTIMAL".into(),
        digest: digest(&inst, &report),
    })
}

fn criterion_3(workers: usize) -> Outcome {
    let inst = instance(7, 3, 2, 1, 3, Strategy::Colwise);
    let report = full_report(&inst, &opts(workers));
    let d = naive_distance(&inst.generator);
    ensure!(
        inst.generator.rank() == 6 && report.k == 6,
        "rank {}",
        inst.generator.rank()
    );
    ensure!(report.h_u == Some(1), "H(U) = {:?}", report.h_u);
    ensure!(
        d == 3 && report.distance.exact == Some(3),
        "d oracle {d}, reported {:?}",
        report.distance.exact
    );
    let lower = locality_lower_bound(&inst.params, 1);
    ensure!(
        lower == 3 && report.distance.lower == 3,
        "lower bound {lower} / {}",
        report.distance.lower
    );
    ensure!(
        report.invariants_hold() && !report.any_claim_failed(),
        "report checks fail"
    );
    Ok(Run {
        detail: "rank 6, H(U)=1, d=3 = lower bound".into(),
        digest: digest(&inst, &report),
    })
}

fn criterion_4(workers: usize) -> Outcome {
    let inst = instance(5, 3, 2, 1, 3, Strategy::Global);
    let report = full_report(&inst, &opts(workers));
    let d = naive_distance(&inst.generator);
    ensure!(
        inst.generator.rank() == 8 && report.k == 8,
        "rank {}",
        inst.generator.rank()
    );
    ensure!(
        report.distance.exact == Some(d),
        "report {:?} vs oracle {d}",
        report.distance.exact
    );
    ensure!(d <= 3 && report.bound == 3, "d={d} bound={}", report.bound);
    let want = if d == 3 {
        ClaimStatus::Verified
    } else {
        ClaimStatus::Failed
    };
    ensure!(claims_are(&report, want), "claims not recorded as {want:?}");
    ensure!(report.invariants_hold(), "invariants fail");
    Ok(Run {
        detail: format!("rank 8, oracle d={d}, claim \"d = w + mu\" recorded {want:?}"),
        digest: digest(&inst, &report),
    })
}

fn criterion_5(workers: usize) -> Outcome {
    let inst = instance(5, 2, 3, 0, 3, Strategy::Full);
    let report = full_report(&inst, &opts(workers));
    let d = naive_distance(&inst.generator);
    ensure!(
        (report.n, report.k, d) == (12, 6, 3) && report.distance.exact == Some(3),
        "measured [{}, {}, {d}]",
        report.n,
        report.k
    );
    ensure!(
        report.bound == 3 && report.defect == Some(0) && report.optimal,
        "bound {} defect {:?}",
        report.bound,
        report.defect
    );
    ensure!(report.locality.pass, "locality audit fails");
    ensure!(
        report.locality.groups.len() == 3
            && report
                .locality
                .groups
                .iter()
                .all(|g| g.subsets_checked == 6 && g.pass),
        "expected 6 erasure-rank checks per group"
    );
    ensure!(
        claims_are(&report, ClaimStatus::Verified) && report.invariants_hold(),
        "claims or invariants fail"
    );
    Ok(Run {
        detail: "[12,6,3] bound 3 OPTIMAL, 3x6 audits".into(),
        digest: digest(&inst, &report),
    })
}

fn criterion_6(workers: usize) -> Outcome {
    let inst = instance(7, 3, 3, 1, 2, Strategy::Colwise);
    let report = full_report(&inst, &opts(workers));
    let d = naive_distance(&inst.generator);
    ensure!(
        (report.n, report.k, d) == (10, 4, 4) && report.distance.exact == Some(4),
        "measured [{}, {}, {d}]",
        report.n,
        report.k
    );
    ensure!(
        claims_are(&report, ClaimStatus::Verified) && report.invariants_hold(),
        "claims or invariants fail"
    );
    Ok(Run {
        detail: "[10,4,4], d = w + mu".into(),
        digest: digest(&inst, &report),
    })
}

fn codewords(inst: &CodeInstance) -> Vec<Vec<u32>> {
    let (q, k) = (inst.field.q(), inst.k());
    if within_cap(q, k, (1 << 16) - 1) {
        let mut all = vec![vec![0; inst.n()]];
        common::for_each_message(q, k, |m| all.push(naive_encode(&inst.generator, m)));
        all
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        (0..1000)
            .map(|_| {
                let msg: Vec<u32> = (0..k).map(|_| rng.gen_range(0..q)).collect();
                encode(inst, &msg).unwrap()
            })
            .collect()
    }
}

fn criterion_7() -> Outcome {
    let cases = [
        (4, 2, 2, 0, 3, Strategy::Full),
        (7, 3, 2, 1, 3, Strategy::Colwise),
        (5, 3, 2, 1, 3, Strategy::Global),
        (5, 2, 3, 0, 3, Strategy::Full),
        (7, 3, 3, 1, 2, Strategy::Colwise),
    ];
    let (mut singles, mut multi, mut rejected) = (0u64, 0u64, 0u64);
    let mut digest = String::new();
    for (q, r, mu, w, l, s) in cases {
        let inst = instance(q, r, mu, w, l, s);
        let words = codewords(&inst);
        let groups = inst.layout.groups();
        let group_sets: Vec<Vec<usize>> = (0..groups)
            .map(|g| inst.layout.group_positions(g).collect())
            .collect();
        for word in &words {
            for p in 0..inst.n() {
                let (v, tr) = repair_position(&inst, &ErasurePattern::from_codeword(word, &[p]), p)
                    .map_err(|e| format!("q={q} {s}: {e}"))?;
                ensure!(v == word[p], "q={q} {s}: wrong symbol at {p}");
                let group = inst.layout.locate(p).0;
                ensure!(
                    tr.symbols_read == r
                        && tr
                            .reads
                            .iter()
                            .all(|&x| x != p && inst.layout.locate(x).0 == group),
                    "q={q} {s}: repair of {p} read {:?}",
                    tr.reads
                );
                singles += 1;
            }
            for (g, members) in group_sets.iter().enumerate() {
                for erased in subsets(members, mu - 1) {
                    let pattern = ErasurePattern::from_codeword(word, &erased);
                    let (filled, _) =
                        repair_all(&inst, &pattern).map_err(|e| format!("q={q} {s}: {e}"))?;
                    ensure!(
                        &filled == word,
                        "q={q} {s}: pattern {erased:?} restored wrongly"
                    );
                    multi += 1;
                }
                for erased in subsets(members, mu) {
                    let pattern = ErasurePattern::from_codeword(word, &erased);
                    let too_many =
                        |e: &RepairError| matches!(e, RepairError::TooManyErasuresInGroup { .. });
                    ensure!(
                        repair_group(&inst, &pattern, g)
                            .as_ref()
                            .err()
                            .is_some_and(too_many)
                            && repair_all(&inst, &pattern)
                                .as_ref()
                                .err()
                                .is_some_and(too_many),
                        "q={q} {s}: pattern {erased:?} was not rejected"
                    );
                    rejected += 1;
                }
            }
        }
        let _ = writeln!(digest, "q={q} {s}: {} codewords", words.len());
    }
    Ok(Run {
        detail: format!(
            "{singles} single repairs, {multi} (mu-1)-patterns, {rejected} mu-patterns rejected"
        ),
        digest,
    })
}

fn criterion_8(workers: usize) -> Outcome {
    let params = table1_preset(1, 8).map_err(|e| e.to_string())?;
    ensure!(
        (params.r, params.w, params.l) == (5, 4, 8),
        "preset r={} w={} l={}",
        params.r,
        params.w,
        params.l
    );
    let inst = CodeInstance::build(params, None).map_err(|e| e.to_string())?;
    ensure!(
        inst.n() == 48 && inst.k() == 36 && inst.generator.rank() == 36,
        "n={} k={}",
        inst.n(),
        inst.k()
    );
    let report = full_report(&inst, &opts(workers));
    ensure!(report.locality.pass, "locality audit fails");
    ensure!(
        report.distance.exact.is_none(),
        "exact distance should be out of cap"
    );
    ensure!(
        claims_are(&report, ClaimStatus::Unverified),
        "claims must be UNVERIFIED"
    );
    ensure!(
        report.distance.upper >= report.distance.lower,
        "upper < lower"
    );
    ensure!(report.invariants_hold(), "invariants fail");
    Ok(Run {
        detail: format!(
            "[48,36] audit ok, d in [{}, {}], claims UNVERIFIED",
            report.distance.lower, report.distance.upper
        ),
        digest: digest(&inst, &report),
    })
}

const SWEEP_CAP: u64 = 1 << 20;

fn criterion_9(workers: usize) -> Outcome {
    let mut digest = String::new();
    let mut checked = 0;
    for q in [2u64, 3, 4, 5, 7] {
        for r in 1..=4 {
            for mu in 2..=3 {
                for w in 0..r {
                    for l in 1..=q as usize {
                        for s in Strategy::ALL {
                            let Ok(params) = plan_params(q, r, mu, w, l, None, s) else {
                                continue;
                            };
                            if !within_cap(params.q, params.k, SWEEP_CAP) {
                                continue;
                            }
                            let inst = CodeInstance::build(params.clone(), Some(1))
                                .map_err(|e| e.to_string())?;
                            let report = full_report(
                                &inst,
                                &ReportOptions {
                                    exact_cap: SWEEP_CAP,
                                    ..opts(workers)
                                },
                            );
                            let tag = format!("q={q} r={r} mu={mu} w={w} l={l} {s}");
                            let dist = &report.distance;
                            let d = dist
                                .exact
                                .ok_or_else(|| format!("{tag}: no exact distance"))?;
                            let h = report.h_u.ok_or_else(|| format!("{tag}: no H(U)"))?;
                            ensure!(
                                dist.lower <= d && d <= dist.upper,
                                "{tag}: {} <= {d} <= {} fails",
                                dist.lower,
                                dist.upper
                            );
                            ensure!(
                                d as i64 >= locality_lower_bound(&params, h),
                                "{tag}: d={d} below the locality bound"
                            );
                            ensure!(
                                d as i64 <= report.bound,
                                "{tag}: d={d} above bound {}",
                                report.bound
                            );
                            ensure!(
                                inst.generator.rank() == params.k,
                                "{tag}: rank {}",
                                inst.generator.rank()
                            );
                            ensure!(report.invariants_hold(), "{tag}: report invariant violated");
                            if s == Strategy::Colwise {
                                ensure!(d == w + mu, "{tag}: COLWISE d={d}");
                            }
                            let _ = writeln!(
                                digest,
                                "{tag} k={} d={d} h={h} [{}, {}]",
                                params.k, dist.lower, dist.upper
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(Run {
        detail: format!("{checked} instances, 0 violations"),
        digest,
    })
}

fn criterion_10(first: &[(usize, String)]) -> Outcome {
    let many = default_workers().max(4);
    for (label, workers) in [("second run", many), ("1 worker", 1)] {
        for (n, previous) in first {
            let again = deterministic(*n, workers)?.digest;
            ensure!(
                &again == previous,
                "criterion {n} output differs on the {label}"
            );
        }
    }
    let inst = instance(7, 3, 2, 1, 3, Strategy::Colwise);
    ensure!(
        simulate_failures(&inst, 3, 500, 9).unwrap()
            == simulate_failures(&inst, 3, 500, 9).unwrap(),
        "simulation differs between runs"
    );
    Ok(Run {
        detail: format!("criteria 2-9 identical across runs and 1 vs {many} workers"),
        digest: String::new(),
    })
}

fn deterministic(n: usize, workers: usize) -> Outcome {
    match n {
        2 => criterion_2(workers),
        3 => criterion_3(workers),
        4 => criterion_4(workers),
        5 => criterion_5(workers),
        6 => criterion_6(workers),
        7 => criterion_7(),
        8 => criterion_8(workers),
        9 => criterion_9(workers),
        _ => unreachable!(),
    }
}

fn main() -> ExitCode {
    let workers = default_workers().max(4);
    let mut failed = 0;
    let mut digests = Vec::new();
    let mut report = |n: usize, started: Instant, outcome: Outcome| -> Option<String> {
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(run) => {
                println!("criterion {n:>2}: PASS ({secs:.1}s) {}", run.detail);
                Some(run.digest)
            }
            Err(msg) => {
                println!("criterion {n:>2}: FAIL ({secs:.1}s) {msg}");
                failed += 1;
                None
            }
        }
    };

    let started = Instant::now();
    report(1, started, criterion_1());
    for n in 2..=9 {
        let started = Instant::now();
        if let Some(d) = report(n, started, deterministic(n, workers)) {
            digests.push((n, d));
        }
    }
    let started = Instant::now();
    let outcome = if digests.len() == 8 {
        criterion_10(&digests)
    } else {
        Err("an earlier criterion failed, outputs not comparable".into())
    };
    report(10, started, outcome);

    if failed == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
