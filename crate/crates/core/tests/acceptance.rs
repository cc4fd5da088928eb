//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use pgcode_core::bounds::{a_q, bounds, Branch};
use pgcode_core::code::Codeword;
use pgcode_core::construct::{bagchi_codeword, generalized_odd, random_small_weight, OddParams, Recipe};
use pgcode_core::decompose::{decompose, verify_decomposition, DecomposeError};
use pgcode_core::field::prime_power;
use pgcode_core::verify::{exhaustive_spectrum, lemma_suite, verify_appendix, SpectrumConfig, VerificationReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, detail: String::new() }
    }

    fn fail(&mut self, why: impl Into<String>) {
        if self.pass {
            self.detail = why.into();
        }
        self.pass = false;
    }

    fn within(&mut self, spent: Duration, limit: Duration) {
        if spent > limit {
            self.fail(format!("took {spent:.1?}, limit {limit:?}"));
        }
    }
}

/// Tallies shared with the final criterion.
#[derive(Default)]
struct Ledger {
    falsified: Vec<String>,
    decomposition_failures: Vec<String>,
}

impl Ledger {
    fn reports(&mut self, rs: &[VerificationReport]) {
        self.falsified.extend(rs.iter().filter(|r| r.is_falsified()).map(|r| r.to_string()));
    }
}

fn theta(m: u32, q: u64) -> u64 {
    (0..=m).map(|i| q.pow(i)).sum()
}

fn spectra(ledger: &mut Ledger) -> (Outcome, Outcome) {
    let mut one = Outcome::new();
    let mut two = Outcome::new();
    let start = Instant::now();
    let cases = [(2usize, 2u32, 3usize), (2, 3, 4), (3, 2, 7), (3, 3, 13)];
    let mut notes = Vec::new();
    for (n, q, min) in cases {
        let sp = match exhaustive_spectrum(n, q, &SpectrumConfig::default()) {
            Ok(sp) => sp,
            Err(e) => {
                one.fail(format!("({n},{q}): {e}"));
                two.fail(format!("({n},{q}): {e}"));
                continue;
            }
        };
        let rs = sp.reports();
        ledger.reports(&rs);
        let status = |id: &str| rs.iter().find(|r| r.claim_id == id).unwrap();
        if sp.min_weight() != Some(min) || !status("minimum-weight").is_verified() {
            one.fail(format!("({n},{q}): minimum weight {:?}, expected {min}", sp.min_weight()));
        }
        // every weight-theta word passed the single-hyperplane check, and
        // there are exactly (p-1) theta_n of them
        let p = u64::from(prime_power(u64::from(q)).unwrap().0);
        let expect = (p - 1) * theta(n as u32, u64::from(q));
        if sp.histogram.get(&min) != Some(&expect) || sp.hyperplane_words != expect {
            one.fail(format!("({n},{q}): {} words of weight {min}, {} hyperplane multiples, expected {expect}", sp.histogram.get(&min).copied().unwrap_or(0), sp.hyperplane_words));
        }
        let second = 2 * (q as usize).pow(n as u32 - 1);
        let at_second = sp.histogram.get(&second).copied().unwrap_or(0);
        if !sp.gap_weights().is_empty() {
            two.fail(format!("({n},{q}): weights {:?} inside the gap", sp.gap_weights()));
        }
        if at_second == 0 || sp.difference_words != at_second || status("second-weight").is_falsified() {
            two.fail(format!("({n},{q}): {} of {at_second} weight-{second} words are differences", sp.difference_words));
        }
        if (n, q) == (2, 2) {
            let want = [(0usize, 1u64), (3, 7), (4, 7), (7, 1)];
            if sp.histogram.iter().map(|(&w, &k)| (w, k)).collect::<Vec<_>>() != want {
                one.fail(format!("(2,2) histogram {:?}", sp.histogram));
            }
        }
        notes.push(format!("({n},{q}): {} words", sp.words));
    }
    let spent = start.elapsed();
    one.within(spent, Duration::from_secs(60));
    two.within(spent, Duration::from_secs(60));
    if one.pass {
        one.detail = notes.join(", ");
    }
    if two.pass {
        two.detail = "no weights in the gap; all second-weight words are a(H1 - H2)".into();
    }
    (one, two)
}

fn bagchi() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xba9c41);
    let mut draws = 0;
    for p in [5u32, 7, 11, 13] {
        let c = bagchi_codeword(p).unwrap();
        if c.weight() != 3 * p as usize - 3 || !c.is_dual_codeword() || !c.is_codeword() {
            out.fail(format!("p={p}: weight {}, dual {}, code {}", c.weight(), c.is_dual_codeword(), c.is_codeword()));
        }
        for _ in 0..100 {
            let params = OddParams::random(p, &mut rng).unwrap();
            let d = generalized_odd(&params).unwrap();
            // the common point of the three lines picks up the sum of the
            // line coefficients, all other points keep their support status
            let sum = params.lambdas.iter().map(|l| u32::from(l.0)).sum::<u32>() % p;
            let want = 3 * p as usize - 3 + usize::from(sum != 0);
            if d.weight() != want || !d.is_codeword() {
                out.fail(format!("p={p}: {params:?} has weight {}, expected {want}", d.weight()));
            }
            draws += 1;
        }
    }
    if out.pass {
        out.detail = format!("4 Bagchi words, {draws} generalized draws");
    }
    out
}

// Largest w with 2w <= num - sqrt(rad), by bisection on exact squares.
fn oracle_floor(num: &BigInt, rad: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let ok = |w: &BigInt| {
        let slack = num - &two * w;
        slack >= BigInt::zero() && &slack * &slack >= *rad
    };
    let mut lo: BigInt = -(num.abs() + BigInt::from(1));
    let mut hi = num / &two + 1;
    assert!(ok(&lo) && !ok(&hi));
    while &hi - &lo > BigInt::from(1) {
        let mid = (&lo + &hi) / &two;
        if ok(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn bound_table() -> Outcome {
    let mut out = Outcome::new();
    let spot = [(3usize, 5u64, 50i64), (3, 7, 98)];
    for (n, q, want) in spot {
        let t = bounds(n, q).unwrap();
        if t.floor_b != BigInt::from(want) {
            out.fail(format!("floor B_({n},{q}) = {}, expected {want}", t.floor_b));
        }
    }
    if a_q(19) != Some(59) {
        out.fail(format!("A_19 = {:?}", a_q(19)));
    }
    // oracle over a grid: (N - sqrt(M))/2 written from the piecewise definition
    let mut checked = 0;
    for q in (2u64..=128).filter(|&q| prime_power(q).is_ok()) {
        for n in 2usize..=6 {
            let qn2 = BigInt::from(q).pow(n as u32 - 2);
            let qb = BigInt::from(q);
            let (num, rad) = match Branch::of(q) {
                Branch::TwoQ => (BigInt::from(4) * qb.pow(n as u32 - 1), BigInt::zero()),
                Branch::Small => ((BigInt::from(6) * &qb - 1) * &qn2, BigInt::from(24) * &qb * &qn2 * &qn2),
                Branch::Medium => ((BigInt::from(6) * &qb + 9) * &qn2, BigInt::from(24) * &qb * &qn2 * &qn2),
                Branch::FourRootQ => ((BigInt::from(8) * &qb - 25) * &qn2, BigInt::from(64) * &qb * &qn2 * &qn2),
                Branch::General => ((BigInt::from(8) * &qb - 33) * &qn2, BigInt::from(32) * &qb * &qn2 * &qn2),
            };
            let want = oracle_floor(&num, &rad);
            let got = bounds(n, q).unwrap().floor_b;
            if got != want {
                out.fail(format!("floor B_({n},{q}) = {got}, oracle {want}"));
            }
            // cross-check with floating point well away from integers
            let approx = (num.to_f64().unwrap() - rad.to_f64().unwrap().sqrt()) / 2.0;
            if (approx - approx.round()).abs() > 1e-6 && approx.floor() as i64 != got.to_i64().unwrap() {
                out.fail(format!("floor B_({n},{q}) = {got}, float {approx}"));
            }
            checked += 1;
        }
    }
    if out.pass {
        out.detail = format!("B_(3,5) = 50, floor B_(3,7) = 98, A_19 = 59, {checked} table entries match the oracle");
    }
    out
}

struct Instance {
    n: usize,
    q: u32,
    codeword: Codeword,
    recipe: Recipe,
}

fn instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in [3usize, 4] {
        for q in [7u32, 8, 9, 11, 13] {
            for seed in 0..100u64 {
                let (codeword, recipe) = random_small_weight(n, q, seed).expect("sampling succeeds");
                out.push(Instance { n, q, codeword, recipe });
            }
        }
    }
    out
}

fn round_trip(all: &[Instance], ledger: &mut Ledger) -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for inst in all {
        let tag = format!("({},{}) seed {}", inst.n, inst.q, inst.recipe.seed);
        match decompose(&inst.codeword) {
            Ok(d) => {
                if !verify_decomposition(&inst.codeword, &d) {
                    out.fail(format!("{tag}: decomposition does not reconstruct"));
                }
                if d.vertex != inst.recipe.decomposition.vertex {
                    out.fail(format!("{tag}: vertex differs from the recipe"));
                }
            }
            Err(e) => {
                if matches!(e, DecomposeError::DecompositionFailed(_)) {
                    ledger.decomposition_failures.push(format!("{tag}: {e}"));
                }
                out.fail(format!("{tag}: {e}"));
            }
        }
    }
    out.within(start.elapsed(), Duration::from_secs(600));
    if out.pass {
        out.detail = format!("{} instances over (n,q) in {{3,4}} x {{7,8,9,11,13}}", all.len());
    }
    out
}

fn appendix(ledger: &mut Ledger) -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let mut runs = 0;
    for q in (23u64..=128).filter(|&q| prime_power(q).is_ok() && a_q(q).is_some()) {
        for n in 3..=6 {
            match verify_appendix(q, n) {
                Ok(r) => {
                    ledger.reports(std::slice::from_ref(&r));
                    if !r.is_verified() {
                        out.fail(format!("{r}"));
                    }
                }
                Err(e) => out.fail(format!("q={q} n={n}: {e}")),
            }
            runs += 1;
        }
    }
    out.within(start.elapsed(), Duration::from_secs(60));
    if out.pass {
        out.detail = format!("{runs} (q,n) pairs closed");
    }
    out
}

fn lemmas(all: &[Instance], ledger: &mut Ledger) -> Outcome {
    let mut out = Outcome::new();
    let mut reports = 0;
    let mut verified = 0;
    for inst in all {
        match lemma_suite(&inst.codeword) {
            Ok(rs) => {
                reports += rs.len();
                verified += rs.iter().filter(|r| r.is_verified()).count();
                ledger.reports(&rs);
                if let Some(r) = rs.iter().find(|r| r.is_falsified()) {
                    out.fail(format!("seed {}: {r}", inst.recipe.seed));
                }
            }
            Err(e) => out.fail(format!("({},{}) seed {}: {e}", inst.n, inst.q, inst.recipe.seed)),
        }
    }
    if out.pass {
        out.detail = format!("{reports} reports, {verified} verified, {} skipped, none falsified", reports - verified);
    }
    out
}

fn main() -> ExitCode {
    let mut ledger = Ledger::default();
    let mut lines: Vec<(u32, &str, Outcome, Duration)> = Vec::new();
    let run = |k: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome, lines: &mut Vec<_>| {
        let start = Instant::now();
        let o = f();
        let line = (k, name, o, start.elapsed());
        print_line(&line);
        lines.push(line);
    };

    let start = Instant::now();
    let (one, two) = spectra(&mut ledger);
    let spent = start.elapsed();
    for (k, name, o) in [(1, "minimum weight", one), (2, "gap and second weight", two)] {
        let line = (k, name, o, spent);
        print_line(&line);
        lines.push(line);
    }
    run(3, "odd-type family", &mut bagchi, &mut lines);
    run(5, "bound table", &mut bound_table, &mut lines);
    let all = instances();
    run(4, "decomposition round trip", &mut || round_trip(&all, &mut ledger), &mut lines);
    run(6, "appendix replay", &mut || appendix(&mut ledger), &mut lines);
    run(7, "lemma suites", &mut || lemmas(&all, &mut ledger), &mut lines);

    let mut eight = Outcome::new();
    if let Some(f) = ledger.decomposition_failures.first() {
        eight.fail(format!("{} decomposition failures, first: {f}", ledger.decomposition_failures.len()));
    } else if let Some(f) = ledger.falsified.first() {
        eight.fail(format!("{} falsified reports, first: {f}", ledger.falsified.len()));
    } else if let Some((k, _, _, _)) = lines.iter().find(|l| !l.2.pass) {
        eight.fail(format!("criterion {k} failed"));
    } else {
        eight.detail = "no decomposition failures or falsified reports".into();
    }
    let line = (8, "no failures within hypothesis ranges", eight, Duration::ZERO);
    print_line(&line);
    lines.push(line);

    if lines.iter().all(|l| l.2.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn print_line((k, name, o, spent): &(u32, &str, Outcome, Duration)) {
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    println!("criterion {k} ({name}): {verdict} [{spent:.1?}] {}", o.detail);
}
