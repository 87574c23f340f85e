//! q-super Catalan numbers `A_{n,m}(q)`, the polynomials `B_{n,m}(q)`, and
//! the alternating sums and recurrences that relate them to Gaussian
//! polynomials.
//!
//! Every alternating sum over `k` is clamped to the range where its
//! Gaussian factors are nonzero. `binom(k, 2)` is `k(k-1)/2` for all integer
//! `k`, so `binom(-1, 2) = 1`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{QError, Result};
use crate::par;
use crate::poly::IntPoly;
use crate::qfactor::{q_binomial, ratio_polynomial};
use crate::report::positivity_report;

fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

fn sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn qbin(n: u32, m: i64) -> IntPoly {
    q_binomial(n, m)
}

/// `A_{n,m}(q) = [2n]![2m]! / ([n]![n+m]![m]!)` via the cyclotomic route.
pub fn super_catalan_q_direct(n: u32, m: u32) -> IntPoly {
    let num: Vec<u32> = [2 * n, 2 * m].into_iter().filter(|&x| x > 0).collect();
    let den: Vec<u32> = [n, n + m, m].into_iter().filter(|&x| x > 0).collect();
    ratio_polynomial(&num, &den).expect("super Catalan ratios are polynomials")
}

type Memo = RwLock<HashMap<(u32, u32), IntPoly>>;

fn super_catalan_memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn b_memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `sum_{j=k}^{p-k} q^{k(n+k) + j(n+j)} [p - 2k, j - k]`, shared by both
/// recurrences.
fn inner_sum(n: u32, p: u32, k: u32) -> IntPoly {
    let (n, p, k) = (n as i64, p as i64, k as i64);
    let mut acc = IntPoly::zero();
    for j in k..=p - k {
        let e = k * (n + k) + j * (n + j);
        acc.add_scaled_shifted(&qbin((p - 2 * k) as u32, j - k), &BigInt::one(), e as usize);
    }
    acc
}

/// `A_{n,m}(q)` by the recurrence
/// `A_{n,n+p} = sum_{k=0}^{floor(p/2)} A_{n,k} sum_{j=k}^{p-k} q^{k(n+k)+j(n+j)} [p, 2k] [p-2k, j-k]`
/// with `A_{n,n} = A_{n,0} = [2n, n]` and the symmetry `A_{n,m} = A_{m,n}`.
pub fn super_catalan_q_recurrence(n: u32, m: u32) -> IntPoly {
    let (lo, hi) = (n.min(m), n.max(m));
    if lo == 0 || lo == hi {
        return qbin(2 * hi, hi as i64);
    }
    if let Some(v) = super_catalan_memo().read().unwrap().get(&(lo, hi)) {
        return v.clone();
    }
    let p = hi - lo;
    let mut acc = IntPoly::zero();
    for k in 0..=p / 2 {
        let weight = qbin(p, 2 * k as i64).mul(&inner_sum(lo, p, k));
        acc.add_assign_ref(&super_catalan_q_recurrence(lo, k).mul(&weight));
    }
    super_catalan_memo()
        .write()
        .unwrap()
        .entry((lo, hi))
        .or_insert(acc)
        .clone()
}

/// `sum_k (-1)^k q^{binom(k,2)} [2n, n+k]^r [2m, m+k]^s` over
/// `|k| <= min(n, m)`.
fn alternating_power_sum(n: u32, m: u32, r: u32, s: u32) -> IntPoly {
    let bound = n.min(m) as i64;
    let mut acc = IntPoly::zero();
    for k in -bound..=bound {
        let term = qbin(2 * n, n as i64 + k)
            .pow(r)
            .mul(&qbin(2 * m, m as i64 + k).pow(s));
        acc.add_scaled_shifted(&term, &sign(k), binom2(k) as usize);
    }
    acc
}

/// `A_{n,m}(q) = q^{-nm} sum_k (-1)^k q^{binom(k,2)} [2n, n+k] [2m, m+k]`.
///
/// Fails with `IdentityViolation` if the low-order terms of the sum do not
/// cancel below `q^{nm}`.
pub fn von_szily_q(n: u32, m: u32) -> Result<IntPoly> {
    let sum = alternating_power_sum(n, m, 1, 1);
    let shift = n as i64 * m as i64;
    sum.shift(-shift).map_err(|e| {
        QError::IdentityViolation(format!("q-von Szily sum for A_{{{n},{m}}}: {e}"))
    })
}

/// `A_{n,m} = sum_k (-1)^k binom(2n, n+k) binom(2m, m+k)`.
pub fn von_szily_classical(n: u32, m: u32) -> BigInt {
    let binom = |top: u32, bottom: i64| -> BigInt {
        if bottom < 0 || bottom > top as i64 {
            BigInt::zero()
        } else {
            num_integer::binomial(BigInt::from(top), BigInt::from(bottom))
        }
    };
    let bound = n.min(m) as i64;
    (-bound..=bound)
        .map(|k| sign(k) * binom(2 * n, n as i64 + k) * binom(2 * m, m as i64 + k))
        .sum()
}

/// `B_{n,m}(q) = [2n]![m]! / ([n]![2m]![n-m]!)` via the cyclotomic route.
pub fn b_poly_direct(n: u32, m: u32) -> Result<IntPoly> {
    if m > n {
        return Err(QError::InvalidArgument(format!("B_{{{n},{m}}} needs n >= m")));
    }
    let num: Vec<u32> = [2 * n, m].into_iter().filter(|&x| x > 0).collect();
    let den: Vec<u32> = [n, 2 * m, n - m].into_iter().filter(|&x| x > 0).collect();
    ratio_polynomial(&num, &den)
}

/// `B_{n,m}(q)` by the recurrence in `p = n - m` with base `m`:
/// `B_{m+p,m} = sum_{k=0}^{floor(p/2)} B_{m+k,m} sum_{j=k}^{p-k} q^{k(m+k)+j(m+j)} [2m+p, 2m+2k] [p-2k, j-k]`,
/// starting from `B_{m,m} = 1`.
pub fn b_poly_recurrence(n: u32, m: u32) -> Result<IntPoly> {
    if m > n {
        return Err(QError::InvalidArgument(format!("B_{{{n},{m}}} needs n >= m")));
    }
    Ok(b_recurrence(m, n - m))
}

fn b_recurrence(base: u32, p: u32) -> IntPoly {
    if p == 0 {
        return IntPoly::one();
    }
    if let Some(v) = b_memo().read().unwrap().get(&(base, p)) {
        return v.clone();
    }
    let mut acc = IntPoly::zero();
    for k in 0..=p / 2 {
        let weight = qbin(2 * base + p, (2 * base + 2 * k) as i64).mul(&inner_sum(base, p, k));
        acc.add_assign_ref(&b_recurrence(base, k).mul(&weight));
    }
    b_memo()
        .write()
        .unwrap()
        .entry((base, p))
        .or_insert(acc)
        .clone()
}

/// `[a+b, c] = sum_k q^{k(b-c+k)} [a, k] [b, c-k]`.
pub fn chu_vandermonde_check(a: u32, b: u32, c: u32) -> bool {
    let lhs = qbin(a + b, c as i64);
    let mut rhs = IntPoly::zero();
    for k in 0..=c as i64 {
        let term = qbin(a, k).mul(&qbin(b, c as i64 - k));
        if term.is_zero() {
            continue;
        }
        let e = k * (b as i64 - c as i64 + k);
        match term.shift(e) {
            Ok(t) => rhs.add_assign_ref(&t),
            Err(_) => return false,
        }
    }
    lhs == rhs
}

/// Both equalities of the double q-Chu–Vandermonde expansion of `[2n+2p, p]`:
/// the single sum `sum_j q^{j(n+j)} [n+p, j] [n+p, p-j]`, and the same sum
/// with `[n+p, p-j]` expanded once more.
pub fn e_main_check(n: u32, p: u32) -> bool {
    let lhs = qbin(2 * n + 2 * p, p as i64);
    let np = n + p;
    let mut single = IntPoly::zero();
    let mut double = IntPoly::zero();
    for j in 0..=p {
        let outer_shift = (j * (n + j)) as usize;
        let left = qbin(np, j as i64);
        single.add_scaled_shifted(&left.mul(&qbin(np, (p - j) as i64)), &BigInt::one(), outer_shift);
        let mut inner = IntPoly::zero();
        for k in 0..=p - j {
            let t = qbin(j, k as i64).mul(&qbin(np - j, (p - j - k) as i64));
            inner.add_scaled_shifted(&t, &BigInt::one(), (k * (n + k)) as usize);
        }
        double.add_scaled_shifted(&left.mul(&inner), &BigInt::one(), outer_shift);
    }
    lhs == single && lhs == double
}

/// Coefficients of `t^m`, `m = 0..=n`, in `prod_{i=0}^{n-1} (1 + t q^i)`.
pub fn q_binomial_theorem_expansion(n: u32) -> Vec<IntPoly> {
    let mut by_t = vec![IntPoly::one()];
    for i in 0..n as usize {
        let mut next = by_t.clone();
        next.push(IntPoly::zero());
        for (m, prev) in by_t.iter().enumerate() {
            next[m + 1].add_scaled_shifted(prev, &BigInt::one(), i);
        }
        by_t = next;
    }
    by_t
}

/// `sum_{I subset {0..n-1}, |I| = m} q^{sum I}` for each `m`, by walking all
/// subsets.
pub fn subset_sum_generating(n: u32) -> Vec<IntPoly> {
    let n = n as usize;
    let max_sum = n * n.saturating_sub(1) / 2;
    let mut counts = vec![vec![0u64; max_sum + 1]; n + 1];
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        let total: usize = (0..n).filter(|i| mask >> i & 1 == 1).sum();
        counts[size][total] += 1;
    }
    counts
        .into_iter()
        .map(|row| IntPoly::from_coeffs(row.into_iter().map(BigInt::from).collect()))
        .collect()
}

/// Checks `prod (1 + t q^i) = sum_m q^{binom(m,2)} [n, m] t^m`, and for
/// `n <= 12` also against the subset-sum enumeration.
pub fn q_binomial_theorem_check(n: u32) -> bool {
    let expansion = q_binomial_theorem_expansion(n);
    let closed_form: Vec<IntPoly> = (0..=n as i64)
        .map(|m| qbin(n, m).shift_up(binom2(m) as usize))
        .collect();
    if expansion != closed_form {
        return false;
    }
    n > 12 || subset_sum_generating(n) == closed_form
}

/// `R_{n,m;r,s}(q)`, the quotient of
/// `sum_k (-1)^k q^{binom(k,2)} [2n, n+k]^r [2m, m+k]^s` by `A_{n,m}(q)`.
pub fn r_poly(n: u32, m: u32, r: u32, s: u32) -> Result<IntPoly> {
    if r == 0 || s == 0 {
        return Err(QError::InvalidArgument("r and s must be positive".into()));
    }
    let sum = alternating_power_sum(n, m, r, s);
    sum.div_exact(&super_catalan_q_direct(n, m)).map_err(|_| {
        QError::IdentityViolation(format!(
            "A_{{{n},{m}}}(q) does not divide the alternating sum with r={r}, s={s}"
        ))
    })
}

/// `sum_k (-1)^k q^{binom(k,2) + 4k^2} [2n, n+3k]` over `|k| <= floor(n/3)`.
pub fn borwein_sum(n: u32) -> IntPoly {
    let bound = (n / 3) as i64;
    let mut acc = IntPoly::zero();
    for k in -bound..=bound {
        let e = binom2(k) + 4 * k * k;
        acc.add_scaled_shifted(&qbin(2 * n, n as i64 + 3 * k), &sign(k), e as usize);
    }
    acc
}

/// Result of checking one identity over a parameter range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn outcome<T: Send>(
    name: &'static str,
    cases: Vec<T>,
    check: impl Fn(&T) -> Option<String> + Sync + Send,
) -> IdentityOutcome {
    let n = cases.len();
    let failures = par::map(cases, |c| check(&c)).into_iter().flatten().collect();
    IdentityOutcome {
        name,
        cases: n,
        failures,
    }
}

fn pairs(max: u32) -> Vec<(u32, u32)> {
    (0..=max).flat_map(|n| (0..=max).map(move |m| (n, m))).collect()
}

/// `A` by direct ratio, by recurrence and by the q-von Szily sum agree, and
/// the common value is positive, for `0 <= n, m <= max`.
pub fn check_super_catalan(max: u32) -> IdentityOutcome {
    outcome("super_catalan_three_way", pairs(max), |&(n, m)| {
        let direct = super_catalan_q_direct(n, m);
        let rec = super_catalan_q_recurrence(n, m);
        let szily = von_szily_q(n, m);
        if rec != direct {
            return Some(format!("A_{{{n},{m}}}: recurrence != direct"));
        }
        match szily {
            Ok(v) if v == direct => {}
            Ok(_) => return Some(format!("A_{{{n},{m}}}: q-von Szily != direct")),
            Err(e) => return Some(e.to_string()),
        }
        if !positivity_report(&direct).is_positive {
            return Some(format!("A_{{{n},{m}}} has a negative coefficient"));
        }
        None
    })
}

pub fn check_super_catalan_symmetry(max: u32) -> IdentityOutcome {
    outcome("super_catalan_symmetry", pairs(max), |&(n, m)| {
        (super_catalan_q_direct(n, m) != super_catalan_q_direct(m, n))
            .then(|| format!("A_{{{n},{m}}} != A_{{{m},{n}}}"))
    })
}

/// `A_{n,m}(1)` against the classical alternating binomial sum.
pub fn check_von_szily_classical(max: u32) -> IdentityOutcome {
    outcome("von_szily_classical", pairs(max), |&(n, m)| {
        (super_catalan_q_direct(n, m).eval_at_one() != von_szily_classical(n, m))
            .then(|| format!("A_{{{n},{m}}}(1) != classical sum"))
    })
}

/// Direct and recurrence `B_{n,m}` agree and are positive; `B_{n,n} = 1`.
pub fn check_b_poly(max: u32) -> IdentityOutcome {
    let cases: Vec<(u32, u32)> = (0..=max).flat_map(|n| (0..=n).map(move |m| (n, m))).collect();
    outcome("b_poly_two_way", cases, |&(n, m)| {
        let direct = b_poly_direct(n, m).ok()?;
        let rec = b_poly_recurrence(n, m).ok()?;
        if direct != rec {
            return Some(format!("B_{{{n},{m}}}: recurrence != direct"));
        }
        if n == m && !direct.is_one() {
            return Some(format!("B_{{{n},{n}}} != 1"));
        }
        (!positivity_report(&direct).is_positive)
            .then(|| format!("B_{{{n},{m}}} has a negative coefficient"))
    })
}

pub fn check_chu_vandermonde(max: u32) -> IdentityOutcome {
    let cases: Vec<(u32, u32, u32)> = (0..=max)
        .flat_map(|a| (0..=max).flat_map(move |b| (0..=max).map(move |c| (a, b, c))))
        .collect();
    outcome("q_chu_vandermonde", cases, |&(a, b, c)| {
        (!chu_vandermonde_check(a, b, c)).then(|| format!("(a,b,c) = ({a},{b},{c})"))
    })
}

pub fn check_e_main(max: u32) -> IdentityOutcome {
    outcome("double_chu_vandermonde", pairs(max), |&(n, p)| {
        (!e_main_check(n, p)).then(|| format!("(n,p) = ({n},{p})"))
    })
}

pub fn check_q_binomial_theorem(max: u32) -> IdentityOutcome {
    outcome("q_binomial_theorem", (0..=max).collect(), |&n| {
        (!q_binomial_theorem_check(n)).then(|| format!("n = {n}"))
    })
}

/// `R_{n,m;1,1}(q) = q^{nm}`.
pub fn check_r_trivial(max: u32) -> IdentityOutcome {
    outcome("r_poly_r1_s1", pairs(max), |&(n, m)| match r_poly(n, m, 1, 1) {
        Ok(r) if r == IntPoly::monomial(1, (n * m) as usize) => None,
        Ok(_) => Some(format!("R_{{{n},{m};1,1}} != q^{}", n * m)),
        Err(e) => Some(e.to_string()),
    })
}

/// `R_{n,m;r,s}` exists and is positive for `n, m <= max`, `r, s <= max_rs`.
pub fn check_r_positive(max: u32, max_rs: u32) -> IdentityOutcome {
    let cases: Vec<(u32, u32, u32, u32)> = pairs(max)
        .into_iter()
        .flat_map(|(n, m)| {
            (1..=max_rs).flat_map(move |r| (1..=max_rs).map(move |s| (n, m, r, s)))
        })
        .collect();
    outcome("r_poly_positive", cases, |&(n, m, r, s)| match r_poly(n, m, r, s) {
        Ok(p) if positivity_report(&p).is_positive => None,
        Ok(_) => Some(format!("R_{{{n},{m};{r},{s}}} has a negative coefficient")),
        Err(e) => Some(e.to_string()),
    })
}

pub fn check_borwein_positive(max: u32) -> IdentityOutcome {
    outcome("borwein_positive", (0..=max).collect(), |&n| {
        (!positivity_report(&borwein_sum(n)).is_positive)
            .then(|| format!("n = {n} has a negative coefficient"))
    })
}

/// Every identity check with parameters scaled to `max_n`. Subset
/// enumeration in the q-binomial theorem is capped at `n = 12` and the
/// `R` positivity check at `n, m <= min(max_n, 6)`, `r, s <= 3`.
pub fn run_all(max_n: u32) -> Vec<IdentityOutcome> {
    vec![
        check_super_catalan(max_n),
        check_super_catalan_symmetry(max_n),
        check_von_szily_classical(max_n),
        check_b_poly(max_n),
        check_chu_vandermonde(max_n),
        check_e_main(max_n),
        check_q_binomial_theorem(max_n),
        check_r_trivial(max_n),
        check_r_positive(max_n.min(6), 3),
        check_borwein_positive(max_n),
    ]
}
