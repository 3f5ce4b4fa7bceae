//! One PASS/FAIL line per acceptance criterion. All comparisons are exact.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jlparity::division::Case;
use jlparity::harness::{
    beta_independence, csd_equivalence, dieudonne_suite, framework_suite, gl_checks, run_sweep, InstanceRecord,
    RunConfig,
};
use jlparity::parity::framework::builtin;

struct Line {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn sweep(case: Case) -> Vec<InstanceRecord> {
    let cfg = RunConfig { cases: vec![case], ..Default::default() };
    let out = run_sweep(&cfg).expect("sweep runs");
    out.records
}

fn sign_n(n: u32) -> i8 {
    if n % 2 == 0 {
        -1
    } else {
        1
    }
}

/// `+1` iff `chi` is trivial; csd forces `chi^2 = 1`.
fn trivial_oracle(r: &InstanceRecord) -> i8 {
    if r.chi_exp == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^(n-1) chi(eps) c` with `eps = g^k`, `k (q'-1) = (q-1)/2 mod (q-1)`, by
/// adding exponents over a common denominator.
fn unramified_oracle(r: &InstanceRecord) -> Option<i8> {
    let qp = r.qprime?;
    let q1 = r.q - 1;
    let target = if r.q % 2 == 0 { 0 } else { q1 / 2 };
    let k = (0..q1).find(|k| (k * (qp - 1)) % q1 == target)?;
    let l = num_integer::lcm(q1, r.c_order);
    let v = (r.chi_exp * k * (l / q1) + r.c_exp * (l / r.c_order)) % l;
    let s = match v {
        0 => 1,
        v if 2 * v == l => -1,
        _ => return None,
    };
    Some(sign_n(r.n) * s)
}

fn table_check(records: &[InstanceRecord], oracle: impl Fn(&InstanceRecord) -> Option<i8>) -> (bool, String) {
    let bad: Vec<_> = records.iter().filter(|r| r.c_jl_brute.is_none() || r.c_jl_brute != oracle(r)).collect();
    let ok = !records.is_empty() && bad.is_empty();
    let mut detail = format!("{} instances, {} mismatches", records.len(), bad.len());
    if let Some(r) = bad.first() {
        detail +=
            &format!("; first: q={} n={} zeta={} chi={} c={}/{}", r.q, r.n, r.zeta_dlog, r.chi_exp, r.c_exp, r.c_order);
    }
    (ok, detail)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let min = |m: u64| Duration::from_secs(60 * m);
    let seed = 42;

    let (split, t1) = timed(|| sweep(Case::Split));
    let (ok, detail) = table_check(&split, |r| Some(trivial_oracle(r)));
    lines.push(Line {
        id: 1,
        title: "split parity: +1 iff chi trivial",
        passed: ok,
        detail,
        elapsed: t1,
        budget: min(2),
    });

    let (ram, t2) = timed(|| sweep(Case::Ramified));
    let (ok, detail) = table_check(&ram, |r| Some(trivial_oracle(r)));
    lines.push(Line {
        id: 2,
        title: "ramified parity: chi(nonsquare)",
        passed: ok,
        detail,
        elapsed: t2,
        budget: min(2),
    });

    let (unr, t3) = timed(|| sweep(Case::Unramified));
    let (ok, detail) = table_check(&unr, unramified_oracle);
    lines.push(Line {
        id: 3,
        title: "unramified parity: (-1)^(n-1) chi(eps) c",
        passed: ok,
        detail,
        elapsed: t3,
        budget: min(5),
    });

    let all: Vec<&InstanceRecord> = split.iter().chain(&ram).chain(&unr).collect();
    let bad = all
        .iter()
        .filter(|r| r.c_jl_brute.is_none() || r.c_rec_predicted != r.c_jl_brute.map(|b| sign_n(r.n) * b))
        .count();
    lines.push(Line {
        id: 4,
        title: "predicted C_rec = (-1)^(n-1) C_JL",
        passed: bad == 0 && !all.is_empty(),
        detail: format!("{} instances, {bad} mismatches", all.len()),
        elapsed: Duration::ZERO,
        budget: min(1),
    });

    let bad_closed = all.iter().filter(|r| r.c_jl_closed.is_none() || r.c_jl_closed != r.c_jl_brute).count();
    let bad_z = all.iter().filter(|r| !r.witness.as_ref().is_some_and(|w| w.z_in_h)).count();
    lines.push(Line {
        id: 5,
        title: "closed form = brute force, z in H",
        passed: bad_closed == 0 && bad_z == 0 && !all.is_empty(),
        detail: format!("{} instances, {bad_closed} parity mismatches, {bad_z} witnesses outside H", all.len()),
        elapsed: Duration::ZERO,
        budget: min(1),
    });

    let (r6, t6) = timed(|| csd_equivalence(5, 4, 6, seed).expect("criterion grid runs"));
    let failed: Vec<_> = r6.failures().map(|c| c.name.clone()).collect();
    let solver = r6.checks.iter().find(|c| c.name.starts_with("at least 50")).and_then(|c| c.detail.clone());
    lines.push(Line {
        id: 6,
        title: "criterion <=> tau = dual <=> solver finds pairing",
        passed: r6.passed(),
        detail: format!(
            "{} checks, {} non-csd solver runs, failures: {failed:?}",
            r6.len(),
            solver.unwrap_or_default()
        ),
        elapsed: t6,
        budget: min(5),
    });

    let (r7, t7) = timed(|| beta_independence(3, 3).expect("beta suite runs"));
    lines.push(Line {
        id: 7,
        title: "all 26 beta give identical parity and tau behaviour",
        passed: r7.passed(),
        detail: format!("{} checks, {} failed", r7.len(), r7.failures().count()),
        elapsed: t7,
        budget: min(1),
    });

    let (r8, t8) = timed(|| gl_checks(5, 4, 3, 1000, seed).expect("GL checks run"));
    lines.push(Line {
        id: 8,
        title: "GL intertwiner and Lambda identities",
        passed: r8.passed(),
        detail: format!("{} checks, {} failed", r8.len(), r8.failures().count()),
        elapsed: t8,
        budget: min(5),
    });

    let (r9, t9) = timed(|| dieudonne_suite(6, 9).expect("Dieudonne suite runs"));
    lines.push(Line {
        id: 9,
        title: "Dieudonne and formal-module identities n<=6 q<=9",
        passed: r9.passed(),
        detail: format!("{} checks, {} failed", r9.len(), r9.failures().count()),
        elapsed: t9,
        budget: min(1),
    });

    let (r10, t10) = timed(|| framework_suite().expect("framework suite runs"));
    let groups = builtin::all().map(|v| v.len()).unwrap_or(0);
    lines.push(Line {
        id: 10,
        title: "finite-group framework properties",
        passed: r10.passed() && groups >= 3,
        detail: format!("{groups} groups, {} checks, {} failed", r10.len(), r10.failures().count()),
        elapsed: t10,
        budget: min(1),
    });

    let mut all_ok = true;
    for l in &lines {
        let in_time = l.elapsed <= l.budget;
        let ok = l.passed && in_time;
        all_ok &= ok;
        println!(
            "criterion {:>2}: {} {} [tolerance: exact] ({}; {:.1}s of {}s budget)",
            l.id,
            if ok { "PASS" } else { "FAIL" },
            l.title,
            l.detail,
            l.elapsed.as_secs_f64(),
            l.budget.as_secs()
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
