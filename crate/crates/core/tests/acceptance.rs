//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion before asserting, so `cargo test --test acceptance -- --nocapture`
//! gives a readable summary. All checks are exact.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::{BigRational, Ratio};
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qratio_core::identities::{
    check_b_poly, check_borwein_positive, check_chu_vandermonde, check_e_main, check_q_binomial_theorem,
    check_r_positive, check_r_trivial, check_super_catalan, IdentityOutcome,
};
use qratio_core::qfactor::primes_up_to;
use qratio_core::{
    canonicalize, classical_ratio, d_n_sweep, d_polynomial, d_polynomial_naive, enumerate_tuples, landau_check,
    par, positivity_report, q_binomial, ratio_exponents, EnumerateOptions, IntPoly, QError, TupleSpec,
};

fn verdict(id: u32, title: &str, ok: bool, detail: &str, elapsed: Duration, budget: Duration) {
    let within = elapsed <= budget;
    let status = if ok && within { "PASS" } else { "FAIL" };
    println!("[{status}] criterion {id:>2}: {title} ({detail}; {elapsed:.2?} of {budget:.0?} budget)");
    assert!(ok, "criterion {id} failed: {detail}");
    assert!(within, "criterion {id} exceeded its runtime budget: {elapsed:?} > {budget:?}");
}

fn multisets(max_entry: u32, len: usize) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(max_entry, len - 1) {
        let floor = rest.first().copied().unwrap_or(1);
        for x in floor..=max_entry {
            let mut v = vec![x];
            v.extend(&rest);
            out.push(v);
        }
    }
    out
}

/// All tuples with `|a| <= max_r`, `|b| <= max_s`, entries in `1..=max_entry`,
/// both sides sorted descending.
fn all_tuples(max_entry: u32, max_r: usize, max_s: usize) -> Vec<TupleSpec> {
    let sides = |k: usize| -> Vec<Vec<u32>> { (1..=k).flat_map(|len| multisets(max_entry, len)).collect() };
    let (aa, bb) = (sides(max_r), sides(max_s));
    let mut out = Vec::new();
    for a in &aa {
        for b in &bb {
            out.push(TupleSpec::new(a.clone(), b.clone()).unwrap());
        }
    }
    out
}

fn random_landau_tuples(count: usize, seed: u64) -> Vec<TupleSpec> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let r = rng.gen_range(1..=3);
        let s = rng.gen_range(r + 1..=r + 2);
        let a: Vec<u32> = (0..r).map(|_| rng.gen_range(1..=30)).collect();
        let total: u32 = a.iter().sum();
        if total < s as u32 {
            continue;
        }
        // random composition of sum(a) into s positive parts
        let mut cuts: Vec<u32> = (0..s - 1).map(|_| rng.gen_range(1..total)).collect();
        cuts.sort_unstable();
        cuts.dedup();
        if cuts.len() != s - 1 {
            continue;
        }
        let mut b = Vec::new();
        let mut prev = 0;
        for c in cuts.into_iter().chain([total]) {
            b.push(c - prev);
            prev = c;
        }
        let t = TupleSpec::new(a, b).unwrap();
        if t.max_entry() > 12 && landau_check(&t).holds {
            out.push(t);
        }
    }
    out
}

fn integer(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

#[test]
fn criterion_01_gaussian_ground_truth() {
    let start = Instant::now();
    let exact = q_binomial(4, 2) == IntPoly::from_i64s(&[1, 1, 2, 1, 1]);
    let mut mismatches = 0;
    for n in 0..=30u32 {
        for m in 0..=n {
            let expected = binomial(BigInt::from(n), BigInt::from(m));
            if q_binomial(n, m as i64).eval_at_one() != expected {
                mismatches += 1;
            }
        }
    }
    verdict(
        1,
        "[4,2]_q = 1+q+2q^2+q^3+q^4 and [n,m]_1 = binom(n,m) for n <= 30",
        exact && mismatches == 0,
        &format!("exact form {exact}, {mismatches} mismatches"),
        start.elapsed(),
        Duration::from_secs(1),
    );
}

/// Runs both ratio routes on one tuple; returns the polynomial when both
/// succeed and agree, `None` when both report a non-polynomial, and an error
/// description on disagreement.
fn compare_routes(t: &TupleSpec) -> Result<Option<IntPoly>, String> {
    match (d_polynomial(t), d_polynomial_naive(t)) {
        (Ok(x), Ok(y)) if x == y => Ok(Some(x)),
        (Err(QError::NotPolynomial { .. }), Err(QError::NotPolynomial { .. })) => Ok(None),
        (x, y) => Err(format!("{t}: {x:?} vs {y:?}")),
    }
}

fn criterion_2_tuples() -> Vec<TupleSpec> {
    let mut tuples: Vec<TupleSpec> = all_tuples(12, 2, 3)
        .into_iter()
        .filter(|t| canonicalize(t).is_ok_and(|c| c.tuple == *t))
        .collect();
    tuples.extend(random_landau_tuples(200, 0x5eed));
    tuples
}

#[test]
fn criterion_02_03_route_equivalence_and_q1_degeneration() {
    let start = Instant::now();
    let tuples = criterion_2_tuples();
    let results = par::map(tuples.clone(), |t| compare_routes(&t));
    let disagreements: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let polys = results.iter().filter(|r| matches!(r, Ok(Some(_)))).count();
    verdict(
        2,
        "cyclotomic route = naive division route (canonical r<=2, s<=3, entries <= 12, plus 200 random)",
        disagreements.is_empty(),
        &format!("{} tuples, {polys} polynomials, {} disagreements {:?}", tuples.len(), disagreements.len(), disagreements.first()),
        start.elapsed(),
        Duration::from_secs(60),
    );

    let start = Instant::now();
    let checks: Vec<(TupleSpec, IntPoly)> = tuples
        .into_iter()
        .zip(results)
        .filter_map(|(t, r)| r.ok().flatten().map(|p| (t, p)))
        .collect();
    let failures = par::map(checks, |(t, p)| {
        (integer(p.eval_at_one()) != classical_ratio(&t)).then(|| t.to_string())
    })
    .into_iter()
    .flatten()
    .collect::<Vec<_>>();
    verdict(
        3,
        "D(a,b;1) equals the prime-valuation factorial ratio",
        failures.is_empty(),
        &format!("{polys} polynomials, {} failures {:?}", failures.len(), failures.first()),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

fn outcome_detail(o: &IdentityOutcome) -> String {
    format!("{} cases, {} failures {:?}", o.cases, o.failures.len(), o.failures.first())
}

#[test]
fn criterion_04_super_catalan_three_way() {
    let start = Instant::now();
    let o = check_super_catalan(12);
    verdict(
        4,
        "A_{n,m}(q): direct = recurrence = q-von Szily, all positive, n,m <= 12",
        o.passed() && o.cases == 169,
        &outcome_detail(&o),
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_05_b_polynomials() {
    let start = Instant::now();
    let o = check_b_poly(15);
    let ones = (0..=15).all(|n| qratio_core::identities::b_poly_direct(n, n).unwrap().is_one());
    verdict(
        5,
        "B_{n,m}(q): direct = recurrence, B_{n,n} = 1, all positive, m <= n <= 15",
        o.passed() && ones && o.cases == 136,
        &outcome_detail(&o),
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_06_identity_sweeps() {
    let start = Instant::now();
    let outcomes = [check_chu_vandermonde(8), check_e_main(6), check_q_binomial_theorem(12)];
    let ok = outcomes.iter().all(IdentityOutcome::passed);
    let detail = outcomes
        .iter()
        .map(|o| format!("{}: {}", o.name, outcome_detail(o)))
        .collect::<Vec<_>>()
        .join("; ");
    verdict(
        6,
        "q-Chu-Vandermonde a,b,c <= 8; double expansion n,p <= 6; q-binomial theorem with subsets n <= 12",
        ok,
        &detail,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_07_r_factorization() {
    let start = Instant::now();
    let trivial = check_r_trivial(10);
    let positive = check_r_positive(6, 3);
    verdict(
        7,
        "R_{n,m;1,1} = q^{nm} (n,m <= 10); R_{n,m;r,s} exact and positive (n,m <= 6, r,s <= 3)",
        trivial.passed() && positive.passed(),
        &format!("{}; {}", outcome_detail(&trivial), outcome_detail(&positive)),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_08_borwein_positive() {
    let start = Instant::now();
    let o = check_borwein_positive(15);
    verdict(
        8,
        "Borwein-type alternating sums positive, n <= 15",
        o.passed(),
        &outcome_detail(&o),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_09_positivity_experiment() {
    let start = Instant::now();
    let mut tuples = enumerate_tuples(&EnumerateOptions::new(1, 2, 16, true));
    tuples.extend(enumerate_tuples(&EnumerateOptions::new(2, 3, 16, true)));
    let mut polynomials = 0usize;
    let mut negatives = Vec::new();
    let mut errors = Vec::new();
    for t in &tuples {
        for (i, res) in d_n_sweep(t, 20).into_iter().enumerate() {
            let n = i as u32 + 1;
            match res {
                Ok(p) => {
                    polynomials += 1;
                    if !positivity_report(&p).is_positive {
                        negatives.push(format!("{t} n={n}"));
                    }
                    if integer(p.eval_at_one()) != classical_ratio(&t.scaled(n).unwrap()) {
                        errors.push(format!("{t} n={n}: q=1 value mismatch"));
                    }
                }
                Err(e) => errors.push(format!("{t} n={n}: {e}")),
            }
        }
    }
    verdict(
        9,
        "every balanced primitive Landau tuple (s = r+1, r <= 2, sum a <= 16) gives positive D_n for n <= 20",
        negatives.is_empty() && errors.is_empty() && !tuples.is_empty(),
        &format!(
            "{} tuples, {polynomials} polynomials, {} negative {:?}, {} errors {:?}",
            tuples.len(),
            negatives.len(),
            negatives.first(),
            errors.len(),
            errors.first()
        ),
        start.elapsed(),
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_10_landau_correctness() {
    let start = Instant::now();
    let tuples = all_tuples(8, 2, 3);
    let mismatches: Vec<String> = par::map(tuples.clone(), |t| {
        let by_exponents = (1..=10).all(|n| ratio_exponents(&t.scaled(n).unwrap()).is_polynomial());
        (landau_check(&t).holds != by_exponents).then(|| t.to_string())
    })
    .into_iter()
    .flatten()
    .collect();
    let known = landau_check(&TupleSpec::new(vec![1, 1], vec![2]).unwrap());
    let known_ok = !known.holds && known.witness == Some(Ratio::new(1, 2)) && known.min_value == -1;
    verdict(
        10,
        "Landau verdict = nonnegative cyclotomic exponents of (an, bn) for n <= 10, entries <= 8; (1,1)/(2) fails at 1/2 with -1",
        mismatches.is_empty() && known_ok,
        &format!("{} tuples, {} mismatches {:?}, known case {known_ok}", tuples.len(), mismatches.len(), mismatches.first()),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn prime_valuation_sanity() {
    // the classical route is only as good as its sieve
    assert_eq!(primes_up_to(12), vec![2, 3, 5, 7, 11]);
    let t = TupleSpec::new(vec![12], vec![1]).unwrap();
    assert_eq!(classical_ratio(&t), integer(BigInt::from(479001600u64)));
    assert!(classical_ratio(&TupleSpec::new(vec![3], vec![4]).unwrap()) < integer(BigInt::one()));
}
