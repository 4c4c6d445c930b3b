//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Every criterion is exact: the numeric
//! tolerance is zero, only the runtime budgets below are bounds.

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use kneser_core::cayleycheck::{
    search_regular_subgroup, verify_involutions, Check, Mode, SearchBudget, SearchOutcome,
};
use kneser_core::kneser::{validate, KneserParams};
use kneser_core::linegraph::{edge_pairs, lift, line_adjacent, line_order_odd, EdgePair};
use kneser_core::numth::{binom_exact, is_multiple_of_4, lucas_residue, odd_graph_order_parity};
use kneser_core::perm::{all_permutations, involution_count};
use kneser_core::{BigNat, Parity};
use num_traits::ToPrimitive;

const LUCAS_BUDGET: Duration = Duration::from_secs(10);
const FIXED_VERTEX_BUDGET: Duration = Duration::from_secs(60);
const PETERSEN_SEARCH_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mod_small(x: &BigNat, m: u64) -> u64 {
    (x % m).to_u64().unwrap()
}

fn big(x: u64) -> BigNat {
    BigNat::from(x)
}

fn lucas_equivalence() -> Outcome {
    let start = Instant::now();
    let primes = [2u64, 3, 5, 7, 11];
    let mut checked = 0u64;
    for m in 0..=500u64 {
        for n in 0..=m {
            let exact = binom_exact(m, n);
            for &p in &primes {
                let lucas = lucas_residue(m, n, p).map_err(|e| e.to_string())?;
                ensure(lucas == mod_small(&exact, p), || {
                    format!("C({m},{n}) mod {p}: Lucas {lucas}, exact {}", mod_small(&exact, p))
                })?;
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < LUCAS_BUDGET, || format!("took {elapsed:?}, budget {LUCAS_BUDGET:?}"))?;
    Ok(format!("{checked} residues agree, {elapsed:.2?}"))
}

fn odd_graph_parity() -> Outcome {
    let expected: BTreeSet<u64> = [1, 3, 7, 15, 31, 63].into();
    let mut odd = BTreeSet::new();
    for k in 1..=64u64 {
        let cert = odd_graph_order_parity(k).map_err(|e| e.to_string())?;
        ensure(cert.is_consistent(), || format!("inconsistent certificate at k = {k}"))?;
        let exact = Parity::of_residue(mod_small(&binom_exact(2 * k + 1, k), 2));
        ensure(cert.verdict == exact, || format!("k = {k}: {:?} vs exact {exact:?}", cert.verdict))?;
        if cert.verdict == Parity::Odd {
            odd.insert(k);
        }
    }
    ensure(odd == expected, || format!("odd at {odd:?}, expected {expected:?}"))?;
    ensure(binom_exact(5, 2) == big(10), || "C(5,2) != 10".into())?;
    ensure(binom_exact(7, 3) == big(35), || "C(7,3) != 35".into())?;
    let at = |k| odd_graph_order_parity(k).unwrap().verdict;
    ensure(at(2) == Parity::Even && at(3) == Parity::Odd, || "anchor verdicts wrong".into())?;
    Ok(format!("odd exactly at k in {odd:?}; C(5,2)=10 even, C(7,3)=35 odd"))
}

fn mod_four_criterion() -> Outcome {
    let mut checked = 0;
    for k in (6..=64u64).step_by(2) {
        let zero = mod_small(&binom_exact(2 * k + 1, k), 4) == 0;
        ensure(zero == !k.is_power_of_two(), || format!("k = {k}: C(2k+1,k) mod 4 = 0 is {zero}"))?;
        let reduced = is_multiple_of_4(k).map_err(|e| e.to_string())?;
        ensure(reduced == zero, || format!("k = {k}: reduction says {reduced}"))?;
        checked += 1;
    }
    ensure(binom_exact(13, 6) == big(4 * 429), || "C(13,6) != 1716".into())?;
    let c17 = binom_exact(17, 8);
    ensure(c17 == big(24310) && mod_small(&c17, 4) == 2, || format!("C(17,8) = {c17}"))?;
    Ok(format!("{checked} even k agree; C(13,6)=1716=4*429, C(17,8)=24310≡2 mod 4"))
}

fn exhaustive_sweep(cases: &[(usize, usize)], check: Check) -> Result<(u64, Duration), String> {
    let start = Instant::now();
    let mut total = 0;
    for &(n, k) in cases {
        let params = validate(n, k).map_err(|e| e.to_string())?;
        let r = verify_involutions(params, check, Mode::Exhaustive, 12).map_err(|e| e.to_string())?;
        let closed = involution_count(n).to_u64().unwrap();
        ensure(r.involutions_checked == closed, || {
            format!("K({n},{k}): checked {} of {closed}", r.involutions_checked)
        })?;
        ensure(r.failures.is_empty(), || format!("K({n},{k}): {:?}", r.failures.first()))?;
        total += r.involutions_checked;
    }
    Ok((total, start.elapsed()))
}

fn fixed_vertex_soundness() -> Outcome {
    for (n, count) in [(5, 25u64), (7, 231), (8, 763)] {
        let closed = involution_count(n);
        ensure(closed == big(count), || format!("closed form gives {closed} involutions for n = {n}"))?;
    }
    let cases = [(5, 2), (7, 2), (7, 3), (8, 2), (9, 2), (9, 3), (9, 4), (11, 2), (12, 2)];
    let (total, elapsed) = exhaustive_sweep(&cases, Check::FixedVertex)?;
    ensure(elapsed < FIXED_VERTEX_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} graphs, {total} involutions, 0 failures, {elapsed:.2?}", cases.len()))
}

fn pair_soundness() -> Outcome {
    let cases = [(5, 2), (7, 2), (8, 2), (9, 2), (9, 4), (12, 4)];
    let (total, elapsed) = exhaustive_sweep(&cases, Check::DisjointPair)?;
    Ok(format!("{} graphs, {total} involutions, 0 failures, {elapsed:.2?}", cases.len()))
}

fn petersen_search() -> Outcome {
    let start = Instant::now();
    let r = search_regular_subgroup(validate(5, 2).unwrap(), SearchBudget::default())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.outcome == SearchOutcome::NoRegularSubgroup, || format!("outcome {:?}", r.outcome))?;
    ensure(elapsed < PETERSEN_SEARCH_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "NoRegularSubgroup of order 10 in Sym(5), {} subgroups examined, {elapsed:.2?}",
        r.subgroups_examined
    ))
}

fn line_graph_structure() -> Outcome {
    // (k+1)/2 · C(2k+1,k) evaluates to 15, 70, 315 for k = 2, 3, 4.
    let expected = [(2u64, 15u64), (3, 70), (4, 315)];
    let mut sizes = Vec::new();
    for (k, value) in expected {
        let enumerated = edge_pairs(KneserParams::odd(k as usize).unwrap()).count() as u64;
        let formula = line_order_odd(k);
        ensure(big(enumerated) == formula && formula == big(value), || {
            format!("k = {k}: enumerated {enumerated}, formula {formula}, expected {value}")
        })?;
        sizes.push(enumerated);
    }
    let edges: Vec<EdgePair> = edge_pairs(validate(5, 2).unwrap()).collect();
    let mut maps = HashSet::new();
    let mut perms = 0;
    for theta in all_permutations(5) {
        let image: Vec<EdgePair> =
            edges.iter().map(|e| lift(&theta, e)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                let before = line_adjacent(&edges[i], &edges[j]).unwrap();
                let after = line_adjacent(&image[i], &image[j]).map_err(|e| e.to_string())?;
                ensure(before == after, || format!("{theta} breaks {} ~ {}", edges[i], edges[j]))?;
            }
        }
        maps.insert(image);
        perms += 1;
    }
    ensure(perms == 120 && maps.len() == 120, || format!("{} distinct maps from {perms}", maps.len()))?;
    Ok(format!("orders {sizes:?} match the formula; 120 lifts preserve adjacency and are distinct"))
}

fn kneser() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kneser"))
}

/// Runs the binary and returns its TSV rows keyed by header name.
fn tsv_rows(args: &[&str]) -> Result<Vec<Vec<(String, String)>>, String> {
    let out = kneser().args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or("empty output")?.split('\t').collect();
    Ok(lines
        .map(|l| header.iter().map(|h| h.to_string()).zip(l.split('\t').map(str::to_string)).collect())
        .collect())
}

fn field<'a>(row: &'a [(String, String)], name: &str) -> &'a str {
    &row.iter().find(|(h, _)| h == name).unwrap().1
}

fn ks_with_verdict(args: &[&str], verdict: &str) -> Result<BTreeSet<u64>, String> {
    Ok(tsv_rows(args)?
        .iter()
        .filter(|r| field(r, "verdict") == verdict)
        .map(|r| field(r, "k").parse().unwrap())
        .collect())
}

/// The JSON rendering must carry the same values as the TSV one.
fn json_matches_tsv(args: &[&str]) -> Result<(), String> {
    let rows = tsv_rows(args)?;
    let out = kneser().arg("--format").arg("json").args(args).output().map_err(|e| e.to_string())?;
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let items = json.as_array().ok_or("expected a JSON array")?;
    ensure(items.len() == rows.len(), || format!("{} JSON rows vs {} TSV rows", items.len(), rows.len()))?;
    for (item, row) in items.iter().zip(&rows) {
        for (name, value) in row {
            let j = match &item[name] {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            ensure(&j == value, || format!("{name}: JSON {j} vs TSV {value}"))?;
        }
    }
    Ok(())
}

fn classification_tables() -> Outcome {
    let odd = ks_with_verdict(&["classify", "odd", "--k-range", "2..20"], "Unresolved")?;
    let want: BTreeSet<u64> = [3, 7, 15].into();
    ensure(odd == want, || format!("odd graphs unresolved at {odd:?}"))?;

    let line = ks_with_verdict(&["classify", "line-odd", "--k-range", "5..20"], "NonCayley")?;
    let want: BTreeSet<u64> = [6, 10, 12, 14, 18, 20].into();
    ensure(line == want, || format!("line graphs NonCayley at {line:?}"))?;

    let rows = tsv_rows(&["classify", "kneser", "--n-range", "5..14"])?;
    let mut seen = BTreeSet::new();
    for row in &rows {
        let n: u64 = field(row, "n").parse().unwrap();
        let k: u64 = field(row, "k").parse().unwrap();
        let exact = binom_exact(n, k);
        ensure(field(row, "order") == exact.to_string(), || format!("K({n},{k}) order"))?;
        let even = mod_small(&exact, 2) == 0;
        let non_cayley = even && (n % 2 == 1 || k.is_multiple_of(2));
        let expected = if non_cayley { "NonCayley" } else { "Unresolved" };
        ensure(field(row, "verdict") == expected, || format!("K({n},{k}) is {}", field(row, "verdict")))?;
        seen.insert((n, k));
    }
    let all: BTreeSet<(u64, u64)> =
        (5..=14u64).flat_map(|n| (2..=(n - 1) / 2).map(move |k| (n, k))).collect();
    ensure(seen == all, || format!("covered {} of {} graphs", seen.len(), all.len()))?;

    json_matches_tsv(&["classify", "odd", "--k-range", "2..20"])?;
    json_matches_tsv(&["classify", "line-odd", "--k-range", "5..20"])?;
    json_matches_tsv(&["classify", "kneser", "--n-range", "5..14"])?;
    Ok(format!(
        "odd unresolved {{3,7,15}}, line-odd NonCayley {{6,10,12,14,18,20}}, {} Kneser graphs agree; JSON = TSV",
        rows.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("Lucas residues equal exact binomials mod p", lucas_equivalence),
        ("odd-graph order parity", odd_graph_parity),
        ("mod-4 criterion for even k", mod_four_criterion),
        ("fixed-vertex soundness, exhaustive", fixed_vertex_soundness),
        ("disjoint fixed pair soundness, exhaustive", pair_soundness),
        ("Petersen graph has no regular subgroup", petersen_search),
        ("line-graph orders and lifted automorphisms", line_graph_structure),
        ("classification tables via the CLI", classification_tables),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
