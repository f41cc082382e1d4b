//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reppair::search::{enumerate_p2, Solution};
use reppair::verify::theorem_progression;
use reppair::{
    build_prefix, decompose_fully, in_difference, lemma_step, rep_profile, rep_profile_naive,
    verify_pair, IntSet, Schedule, SearchOptions,
};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

const BIG: usize = 1 << 17;

/// A ∪ B ⊇ [0, N], R_A = R_B on [0, N], and A ∩ B ∩ [0, N] = {r + km}.
fn theorem_prefix(l: u32, bound: usize) -> Result<Duration, String> {
    let started = Instant::now();
    let build = build_prefix(Schedule::theorem(l).map_err(|e| e.to_string())?, bound)
        .map_err(|e| e.to_string())?;
    let report = verify_pair(&build.a, &build.b, bound, &[]);
    let elapsed = started.elapsed();
    let (r, m) = theorem_progression(l).map_err(|e| e.to_string())?;
    check(report.rep_equal, || format!("l={l}: profiles diverge at {:?}", report.first_divergence))?;
    check(report.union_is_interval == Some(bound), || format!("l={l}: union misses part of [0,{bound}]"))?;
    let expected: IntSet = (r..=bound).step_by(m).collect();
    let actual = build.a.intersection(&build.b).truncate(bound);
    check(actual == expected, || format!("l={l}: intersection is not {{{r}+{m}k}}"))?;
    check(report.intersection_matches(r, m), || format!("l={l}: detector disagrees"))?;
    Ok(elapsed)
}

fn criterion_1() -> Outcome {
    let elapsed = theorem_prefix(1, BIG)?;
    check(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}, limit 5 s"))?;
    Ok(format!("l=1, N=2^17, AP (3,7), {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let t2 = theorem_prefix(2, BIG)?;
    let t3 = theorem_prefix(3, BIG)?;
    Ok(format!("l=2 AP (15,31) {t2:.2?}; l=3 AP (63,127) {t3:.2?}"))
}

fn criterion_3() -> Outcome {
    let build = build_prefix(Schedule::Dombi, BIG).map_err(|e| e.to_string())?;
    let report = verify_pair(&build.a, &build.b, BIG, &[]);
    check(report.rep_equal, || format!("profiles diverge at {:?}", report.first_divergence))?;
    check(report.union_is_interval == Some(BIG), || "union misses part of [0,N]".into())?;
    check(build.a.is_disjoint(&build.b), || "A and B intersect".into())?;
    let evil: IntSet = (0..=BIG).filter(|n| n.count_ones() % 2 == 0).collect();
    check(build.a == evil, || "A differs from the even-digit-sum set".into())?;
    Ok(format!("N=2^17, |A|={}, |B|={}", build.a.len(), build.b.len()))
}

fn criterion_4() -> Outcome {
    let bound = 1 << 15;
    let s = Schedule::general(1, 5, 9).map_err(|e| e.to_string())?;
    let build = build_prefix(s, bound).map_err(|e| e.to_string())?;
    let report = verify_pair(&build.a, &build.b, bound, &[]);
    check(report.rep_equal, || format!("profiles diverge at {:?}", report.first_divergence))?;
    let expected: IntSet = (5..=bound).step_by(9).collect();
    check(build.a.intersection(&build.b) == expected, || "intersection is not {5+9k}".into())?;
    check(report.intersection_matches(5, 9), || "detector disagrees".into())?;
    check(report.union_is_interval.is_none(), || "union unexpectedly covers [0,N]".into())?;
    Ok(format!("N=2^15, {} intersection points, union has gaps", expected.len()))
}

fn btree(set: &IntSet) -> BTreeSet<usize> {
    set.iter().collect()
}

fn shifted(set: &BTreeSet<usize>, m: usize) -> BTreeSet<usize> {
    set.iter().map(|x| x + m).collect()
}

/// Claims of one step, recomputed with `BTreeSet`s.
fn check_step(a0: &IntSet, b0: &IntSet, m: usize) -> Result<(IntSet, IntSet), String> {
    let step = lemma_step(a0, b0, m).map_err(|e| e.to_string())?;
    let (a0s, b0s, a1s, b1s) = (btree(a0), btree(b0), btree(&step.a), btree(&step.b));
    let top = 2 * step.a.union(&step.b).max().unwrap_or(0);
    check(rep_profile_naive(&step.a, top) == rep_profile_naive(&step.b, top), || {
        format!("R differs after m={m} on {a0:?} / {b0:?}")
    })?;
    let base_union: BTreeSet<usize> = a0s.union(&b0s).copied().collect();
    let base_inter: BTreeSet<usize> = a0s.intersection(&b0s).copied().collect();
    let out_union: BTreeSet<usize> = a1s.union(&b1s).copied().collect();
    let out_inter: BTreeSet<usize> = a1s.intersection(&b1s).copied().collect();
    let claimed_union: BTreeSet<usize> = base_union.union(&shifted(&base_union, m)).copied().collect();
    check(out_union == claimed_union, || format!("claim i) fails for m={m}"))?;
    let shifted_inter = shifted(&base_inter, m);
    let claimed_inter: BTreeSet<usize> = base_inter.union(&shifted_inter).copied().collect();
    check(
        claimed_inter.is_subset(&out_inter) && base_inter.is_disjoint(&shifted_inter),
        || format!("claim ii) fails for m={m}"),
    )?;
    let moreover = !a0s.iter().any(|x| a0s.contains(&(x + m))) && !b0s.iter().any(|x| b0s.contains(&(x + m)));
    check(moreover == step.cert.moreover_ok, || "certificate misreports the moreover condition".into())?;
    if moreover {
        check(base_union.is_disjoint(&shifted(&base_union, m)), || format!("i) union not disjoint, m={m}"))?;
        check(out_inter == claimed_inter, || format!("ii) inclusion strict, m={m}"))?;
    }
    check(step.cert.claims_hold(), || format!("certificate reports a failed claim, m={m}"))?;
    Ok((step.a, step.b))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a);
    let mut steps = 0;
    let mut moreover = 0;
    for _ in 0..500 {
        let (mut a, mut b) = (IntSet::from([0]), IntSet::from([1]));
        let len = rng.gen_range(1..=4);
        for _ in 0..len {
            let top = a.union(&b).max().unwrap();
            let valid: Vec<usize> = (0..=200 - top).filter(|&m| !in_difference(&a, &b, m)).collect();
            if valid.is_empty() {
                break;
            }
            let m = valid[rng.gen_range(0..valid.len())];
            moreover += usize::from(lemma_step(&a, &b, m).unwrap().cert.moreover_ok);
            (a, b) = check_step(&a, &b, m)?;
            steps += 1;
        }
    }
    Ok(format!("500 chains, {steps} steps ({moreover} with the moreover condition)"))
}

fn criterion_6() -> Outcome {
    for mask in 0u32..1 << 11 {
        let set: IntSet = (0..11).filter(|i| mask >> i & 1 == 1).collect();
        for bound in [0, 5, 10, 20, 25] {
            check(rep_profile(&set, bound) == rep_profile_naive(&set, bound), || {
                format!("mismatch on {set:?} bound {bound}")
            })?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10_000 {
        let max = rng.gen_range(0..=1024);
        let density: f64 = rng.gen_range(0.0..1.0);
        let set: IntSet = (0..=max).filter(|_| rng.gen_bool(density)).collect();
        let bound = rng.gen_range(0..=2048);
        check(rep_profile(&set, bound) == rep_profile_naive(&set, bound), || {
            format!("mismatch on a random set of size {} bound {bound}", set.len())
        })?;
    }
    Ok("2048 exhaustive subsets of [0,10] and 10000 random sets".into())
}

fn criterion_7() -> Outcome {
    let started = Instant::now();
    let mut counts = Vec::new();
    for m in 2..=20 {
        let opts = |threads, prune| SearchOptions { threads, prune, ..Default::default() };
        let single = enumerate_p2(m, &opts(1, true), None).map_err(|e| e.to_string())?;
        let eight = enumerate_p2(m, &opts(8, true), None).map_err(|e| e.to_string())?;
        check(single.solutions == eight.solutions, || {
            format!("m={m}: 1 and 8 workers disagree")
        })?;
        check(single.configurations_scanned == eight.configurations_scanned, || {
            format!("m={m}: scanned counts differ across worker counts")
        })?;
        if m <= 12 {
            let brute = enumerate_p2(m, &opts(8, false), None).map_err(|e| e.to_string())?;
            check(brute.solutions == single.solutions, || format!("m={m}: pruning lost or added solutions"))?;
        }
        if m == 7 {
            let pair = Solution { a: IntSet::from([0, 3, 4, 5]), b: IntSet::from([1, 2, 3, 6]), r: 3 };
            check(single.solutions.contains(&pair), || "m=7 report lacks ({0,3,4,5},{1,2,3,6})".into())?;
        }
        if !single.solutions.is_empty() {
            let rs: Vec<usize> = single.solutions.iter().map(|s| s.r).collect();
            counts.push(format!("m={m}: {} (r={rs:?})", single.solutions.len()));
        }
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}, limit 10 min"))?;
    Ok(format!("m=2..20 in {elapsed:.2?}; solutions {}", counts.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut schedules = vec![Schedule::Dombi];
    for l in 1..=3u32 {
        schedules.push(Schedule::theorem(l).map_err(|e| e.to_string())?);
        let (r, m) = theorem_progression(l).map_err(|e| e.to_string())?;
        schedules.push(Schedule::general(l, r, m).map_err(|e| e.to_string())?);
        schedules.push(Schedule::general(l, r + 2, m + 3).map_err(|e| e.to_string())?);
    }
    let mut checked = 0;
    for s in schedules {
        for bound in 1..=1usize << 12 {
            let build = build_prefix(s, bound).map_err(|e| e.to_string())?;
            // only bounds where the chain of steps changes need a full check
            if bound > 1 && build.steps.len() == build_prefix(s, bound - 1).unwrap().steps.len() {
                continue;
            }
            let (a, b) = build.final_state();
            let chain = decompose_fully(a, b);
            let expected: Vec<usize> = build.steps.iter().rev().map(|st| st.m).collect();
            check(chain.chain == expected, || format!("{s}, N={bound}: chain {:?} != {expected:?}", chain.chain))?;
            check(chain.core_a == IntSet::from([0]) && chain.core_b == IntSet::from([1]), || {
                format!("{s}, N={bound}: core is not ({{0}},{{1}})")
            })?;
            check(chain.replay().map_err(|e| e.to_string())? == (a.clone(), b.clone()), || {
                format!("{s}, N={bound}: replay differs")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} distinct builds inverted across 10 schedules"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("1 theorem l=1 to 2^17", criterion_1),
        ("2 theorem l=2,3 to 2^17", criterion_2),
        ("3 dombi partition to 2^17", criterion_3),
        ("4 general variant l=1 r=5 m=9", criterion_4),
        ("5 lemma property suite", criterion_5),
        ("6 fast/naive profile equivalence", criterion_6),
        ("7 interval search m<=20", criterion_7),
        ("8 decomposition round trip", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
