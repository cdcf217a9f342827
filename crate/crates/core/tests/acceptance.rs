//! Acceptance checks. Each criterion prints one PASS or FAIL line; the run
//! fails if any criterion fails.
//!
//! Expected values are printed listings or come from oracles written here:
//! naive recurrences, schoolbook trial division and an Eratosthenes sieve.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use starseq::analysis::{divergence_report, mertens_estimate, recip_check, tail_bound};
use starseq::cli;
use starseq::embedding::{verify_numeric, verify_pfd, Embedder, Eta, Mode};
use starseq::factoring::{factor, FactorBudget, PrimePower};
use starseq::mother::Mother;
use starseq::oeis::{oeis_check, Known};
use starseq::star_core::{gross_prefix, gross_via_product, DEFAULT_MAX_DIGITS};
use starseq::star_stream::{odoni_residue_check, star_prefix, verify_witness};
use starseq::Nat;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn nat(n: u64) -> Nat {
    Nat::from(n)
}

/// `x, x(x+1), ...` plus one, by the defining recurrence.
fn oracle_gross(x: u64, count: usize) -> Vec<Nat> {
    let mut s = nat(x);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(&s + 1u32);
        s = &s * (&s + 1u32);
    }
    out
}

fn cli_out(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("starseq").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c01_gross() -> Check {
    let cases = [
        ("1", "6", "2 3 7 43 1807 3263443"),
        ("2", "5", "3 7 43 1807 3263443"),
        ("3", "5", "4 13 157 24493 599882557"),
    ];
    for (x, k, printed) in cases {
        let (code, out) = cli_out(&["gross", x, "--terms", k]);
        ensure(code == 0 && out.trim_end() == printed, || {
            format!("gross {x}: got `{}` (exit {code}), printed `{printed}`", out.trim_end())
        })?;
    }
    Ok(())
}

fn c02_star() -> Check {
    let printed: [(u64, &[&str]); 3] = [
        (1, &["2", "3", "7", "43", "13", "139", "3263443"]),
        (2, &["3", "7", "43", "13", "139", "3263443"]),
        (3, &["2^2", "13", "157", "24493", "67", "277", "32323"]),
    ];
    let mut errors = Vec::new();
    for (x, want) in printed {
        let got = star_prefix(&nat(x), want.len(), &FactorBudget::default()).map_err(|e| e.to_string())?;
        let got: Vec<String> = got.terms.iter().map(|t| t.pp.to_string()).collect();
        if got != want {
            errors.push(format!(
                "{x}^*: computed {} but printed {}",
                got.join(","),
                want.join(",")
            ));
        }
    }
    ensure(errors.is_empty(), || errors.join("; "))
}

fn c03_product_recursion() -> Check {
    for x in 1..=50 {
        let a = gross_prefix(&nat(x), 9, DEFAULT_MAX_DIGITS).map_err(|e| e.to_string())?;
        let b = gross_via_product(&nat(x), 9, DEFAULT_MAX_DIGITS).map_err(|e| e.to_string())?;
        let oracle = oracle_gross(x, 9);
        ensure(a == b && a == oracle, || format!("x = {x}: recursions disagree"))?;
    }
    Ok(())
}

fn c04_coprime() -> Check {
    for x in 1..=50 {
        let terms = gross_prefix(&nat(x), 9, DEFAULT_MAX_DIGITS).map_err(|e| e.to_string())?;
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                ensure(terms[i].gcd(&terms[j]).is_one(), || {
                    format!("x = {x}: terms {i}, {j} share a factor")
                })?;
            }
        }
    }
    Ok(())
}

fn c05_recip() -> Check {
    for x in 1..=50u64 {
        let mut previous: Option<Ratio<Nat>> = None;
        let oracle = oracle_gross(x, 9);
        for n in 1..=8 {
            let r = recip_check(&nat(x), n).map_err(|e| e.to_string())?;
            ensure(r.equal && r.lhs == r.rhs, || format!("x = {x}, n = {n}: sides differ"))?;
            let one_over_x = Ratio::new(Nat::one(), nat(x));
            ensure(r.lhs == one_over_x, || format!("x = {x}: lhs is not 1/x"))?;
            let partial = oracle[..n]
                .iter()
                .fold(Ratio::<Nat>::zero(), |acc, t| acc + Ratio::new(Nat::one(), t.clone()));
            let tail = tail_bound(&nat(x), n).map_err(|e| e.to_string())?;
            ensure(one_over_x - partial == tail, || {
                format!("x = {x}, n = {n}: tail does not telescope")
            })?;
            ensure(previous.as_ref().is_none_or(|p| tail < *p), || {
                format!("x = {x}, n = {n}: tail did not shrink")
            })?;
            previous = Some(tail);
        }
    }
    Ok(())
}

/// Mother terms by factoring 2, 3, 4, ... with schoolbook trial division.
fn oracle_mother(count: usize) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut n = 2u64;
    while out.len() < count {
        let mut m = n;
        let mut p = 2;
        while p * p <= m {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if m > 1 {
            out.push((m, 1));
        }
        n += 1;
    }
    out.truncate(count);
    out
}

fn c06_mother() -> Check {
    let printed = "2 3 2^2 5 2 3 7 2^3 3^2 2 5 11 2^2 3 13 2 7 3 5 2^4 17 2 3^2 19 2^2 5 3 7 2 11 23 2^3 3 5^2 2 13";
    let (code, out) = cli_out(&["mother", "--count", "36"]);
    ensure(code == 0 && out.trim_end() == printed, || {
        format!("mother --count 36 printed `{}`", out.trim_end())
    })?;
    let mut m = Mother::default();
    let two: PrimePower = "2".parse().unwrap();
    let five: PrimePower = "5".parse().unwrap();
    let occ2 = m.occurrences(&two, 5).map_err(|e| e.to_string())?;
    let occ5 = m.occurrences(&five, 3).map_err(|e| e.to_string())?;
    ensure(occ2 == [0, 4, 9, 15, 21] && occ5 == [3, 10, 18], || {
        format!("occurrences {occ2:?} {occ5:?}")
    })?;
    let oracle = oracle_mother(20_000);
    let got = m.prefix(20_000).map_err(|e| e.to_string())?;
    for (i, (t, (p, e))) in got.iter().zip(&oracle).enumerate() {
        ensure(t.value.prime() == &nat(*p) && t.value.exponent() == *e, || {
            format!("term {i}: {} but trial division gives {p}^{e}", t.value)
        })?;
    }
    Ok(())
}

fn printed_one_star() -> Eta {
    Eta::Finite(
        ["2", "3", "7", "43", "13", "139", "3263443"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect(),
    )
}

fn c07_embed() -> Check {
    let mut mother = Mother::default();
    let mut logs = Vec::new();
    for mode in [Mode::Literal, Mode::Monotone, Mode::Literal, Mode::Monotone] {
        let mut e = Embedder::new(printed_one_star(), mode, &mut mother);
        for step in 0..200 {
            let advanced = e.step().map_err(|err| err.to_string())?;
            ensure(advanced, || {
                format!("{mode}: stopped at step {step}: {:?}", e.state().truncated)
            })?;
            ensure(verify_pfd(e.state()) && verify_numeric(e.state()), || {
                format!("{mode}: invariant broken after step {step}")
            })?;
        }
        let state = e.into_state();
        for c in &state.log {
            let t = mother.term(c.captured_index).map_err(|err| err.to_string())?;
            ensure(t.value == c.value, || {
                format!("{mode}: step {} captured the wrong value", c.step)
            })?;
        }
        logs.push((mode, state));
    }
    let first: Vec<u64> = logs[0].1.log.iter().take(6).map(|c| c.captured_index).collect();
    ensure(first == [0, 1, 4, 6, 5, 9], || {
        format!("literal first six indices {first:?}")
    })?;
    ensure(logs[0].1 == logs[2].1 && logs[1].1 == logs[3].1, || {
        "runs are not reproducible".into()
    })
}

fn c08_witness() -> Check {
    for x in 1..=50 {
        let w = verify_witness(&nat(x), 8).map_err(|e| e.to_string())?;
        ensure(w.holds(), || {
            format!("x = {x}: witness {} divides term {:?}", w.witness, w.divides_at)
        })?;
        let p: Nat = w.witness.parse().unwrap();
        ensure(oracle_gross(x, 9).iter().all(|t| !(t % &p).is_zero()), || {
            format!("x = {x}: oracle finds {p} dividing a term")
        })?;
        if x == 1 {
            ensure(w.witness == "11", || format!("x = 1: witness {}", w.witness))?;
        }
    }
    Ok(())
}

fn c09_odoni() -> Check {
    let r = odoni_residue_check(6, &FactorBudget::default()).map_err(|e| e.to_string())?;
    ensure(r.stalled.is_empty(), || {
        format!("unfinished gross terms {:?}", r.stalled)
    })?;
    ensure(r.passed(), || format!("{} violations", r.violations().count()))?;
    let oracle = oracle_gross(1, 7);
    for e in &r.entries {
        let p: Nat = e.prime.parse().unwrap();
        ensure((&oracle[e.gross_index] % &p).is_zero(), || {
            format!("{p} does not divide term {}", e.gross_index)
        })?;
        if p > nat(3) {
            ensure((&p % 6u32) == nat(1), || format!("{p} is not 1 mod 6"))?;
        }
    }
    Ok(())
}

fn c10_oeis() -> Check {
    let mut errors = Vec::new();
    for id in [Known::A000058, Known::A082732] {
        let r = oeis_check(id, &id.fixture(), "fixture", DEFAULT_MAX_DIGITS).map_err(|e| e.to_string())?;
        if !r.terms_match() {
            errors.push(format!("{id}: mismatch {:?}", r.first_mismatch.map(|m| m.index)));
        }
        if let Some(s) = &r.suffix {
            if !s.holds() {
                let shown: Vec<String> = s.suffixes.iter().take(6).map(|d| format!("{d:02}")).collect();
                errors.push(format!(
                    "{id}: terms {}..{} end in {}, ... not 57/93 (broken at term {:?})",
                    s.from_term,
                    s.from_term + s.checked - 1,
                    shown.join(","),
                    s.first_break
                ));
            }
        }
    }
    ensure(errors.is_empty(), || errors.join("; "))
}

fn c11_shifted_start() -> Check {
    let b = FactorBudget::default();
    let one = star_prefix(&nat(1), 7, &b).map_err(|e| e.to_string())?;
    for n in 1..=6 {
        let two = star_prefix(&nat(2), n, &b).map_err(|e| e.to_string())?;
        let two: Vec<&PrimePower> = two.terms.iter().map(|t| &t.pp).collect();
        let shifted: Vec<&PrimePower> = one.terms[1..=n].iter().map(|t| &t.pp).collect();
        ensure(two == shifted, || {
            format!("n = {n}: 2^* prefix differs from shifted 1^*")
        })?;
        ensure(two.iter().all(|pp| pp.value().is_odd()), || {
            format!("n = {n}: 2 divides a term")
        })?;
    }
    Ok(())
}

fn c12_factoring() -> Check {
    let b = FactorBudget::default();
    for n in 2..=1_000_000u64 {
        let f = factor(&nat(n), &b).map_err(|e| e.to_string())?;
        ensure(f.is_complete() && f.recompose() == nat(n), || format!("{n}: {f}"))?;
        let mut m = n;
        let mut d = 2;
        let mut naive = Vec::new();
        while d * d <= m {
            let mut e = 0u32;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            if e > 0 {
                naive.push((d, e));
            }
            d += 1;
        }
        if m > 1 {
            naive.push((m, 1));
        }
        let got: Vec<(u64, u32)> = f
            .parts()
            .iter()
            .map(|pp| (pp.prime().to_u64().unwrap(), pp.exponent()))
            .collect();
        ensure(got == naive, || format!("{n}: {f} vs {naive:?}"))?;
    }
    Ok(())
}

fn c13_divergence() -> Check {
    let r = divergence_report(&nat(1), 6, &FactorBudget::default()).map_err(|e| e.to_string())?;
    ensure(r.stalled_at.is_none(), || format!("stalled at {:?}", r.stalled_at))?;
    ensure(
        r.rows
            .windows(2)
            .all(|w| w[0].sum_terms < w[1].sum_terms && w[0].sum_primes < w[1].sum_primes),
        || "running sums do not strictly increase".into(),
    )?;
    ensure(r.rows.iter().all(|row| row.sum_terms <= row.sum_primes), || {
        "sum 1/x_j exceeds sum 1/p_j".into()
    })?;
    let primes: BTreeSet<&String> = r.rows.iter().map(|row| &row.prime).collect();
    ensure(primes.len() == r.rows.len(), || "a prime repeats across T(1)".into())?;

    // Eratosthenes, independent of the library sieve.
    let limit = 1_000_000usize;
    let mut composite = vec![false; limit + 1];
    let mut sum = 0.0f64;
    for i in 2..=limit {
        if !composite[i] {
            sum += 1.0 / i as f64;
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    let estimate = mertens_estimate(&nat(1_000_000)).map_err(|e| e.to_string())?;
    let direct = (1e6f64).ln().ln() + 0.261_497_21;
    ensure((estimate - direct).abs() < 1e-12, || {
        format!("estimate {estimate} vs {direct}")
    })?;
    ensure((sum - estimate).abs() < 0.01, || {
        format!("sum 1/p = {sum:.5}, log log n + M = {estimate:.5}")
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("gross sequences of 1, 2, 3", c01_gross),
        ("star sequences of 1, 2, 3", c02_star),
        ("product recursion equals star recursion", c03_product_recursion),
        ("gross terms pairwise coprime", c04_coprime),
        ("reciprocal identity and telescoping tail", c05_recip),
        ("mother sequence prefix and occurrences", c06_mother),
        ("parallel embedding of the 1-star prefix", c07_embed),
        ("witness primes", c08_witness),
        ("residues of prime factors mod 6", c09_odoni),
        ("OEIS fixtures and 57/93 suffixes", c10_oeis),
        ("2-star is 1-star without its first term", c11_shifted_start),
        ("factoring agrees with trial division", c12_factoring),
        ("divergence diagnostics", c13_divergence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:2} PASS {name} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:2} FAIL {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
