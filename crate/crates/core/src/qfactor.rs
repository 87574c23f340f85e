//! q-integers, q-factorials, Gaussian polynomials and factorial ratios
//! `D(a, b; q) = [a_1]!...[a_r]! / [b_1]!...[b_s]!`.
//!
//! Ratios are computed along two independent routes: [`d_polynomial`]
//! assembles the product of cyclotomic factors from their exponents, while
//! [`d_polynomial_naive`] multiplies the numerator q-factorials out and
//! long-divides by each denominator. The classical value at `q = 1` comes
//! from prime valuations in [`classical_ratio`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::cyclotomic::{cyclotomic, divisors, mobius};
use crate::error::{QError, Result};
use crate::par;
use crate::poly::IntPoly;

/// A pair of positive-integer tuples naming the ratio `prod [a_i]! / prod [b_j]!`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TupleSpec {
    a: Vec<u32>,
    b: Vec<u32>,
}

impl TupleSpec {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(QError::InvalidTuple("both sides need at least one entry".into()));
        }
        if a.iter().chain(&b).any(|&x| x == 0) {
            return Err(QError::InvalidTuple("entries must be positive".into()));
        }
        Ok(TupleSpec { a, b })
    }

    /// Parses two comma-separated lists such as `"30,1"` and `"15,10,6"`.
    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Self::new(parse_list(a)?, parse_list(b)?)
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    /// `(a * n, b * n)`.
    pub fn scaled(&self, n: u32) -> Result<Self> {
        let scale = |v: &[u32]| -> Result<Vec<u32>> {
            v.iter()
                .map(|&x| {
                    x.checked_mul(n)
                        .ok_or_else(|| QError::InvalidArgument(format!("{x} * {n} overflows")))
                })
                .collect()
        };
        Self::new(scale(&self.a)?, scale(&self.b)?)
    }

    pub fn sum_a(&self) -> u64 {
        self.a.iter().map(|&x| x as u64).sum()
    }

    pub fn sum_b(&self) -> u64 {
        self.b.iter().map(|&x| x as u64).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.a.iter().chain(&self.b).copied().max().unwrap_or(1)
    }

    /// Degree `(sum a_i(a_i - 1) - sum b_j(b_j - 1)) / 2` that the ratio has
    /// whenever it is a polynomial.
    pub fn expected_degree(&self) -> i64 {
        ratio_degree(&self.a, &self.b)
    }
}

impl fmt::Display for TupleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", join(&self.a), join(&self.b))
    }
}

pub(crate) fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            u32::from_str(t.trim())
                .map_err(|e| QError::InvalidTuple(format!("bad entry {t:?}: {e}")))
        })
        .collect()
}

fn ratio_degree(num: &[u32], den: &[u32]) -> i64 {
    let tri = |v: &[u32]| -> i64 { v.iter().map(|&x| x as i64 * (x as i64 - 1) / 2).sum() };
    tri(num) - tri(den)
}

/// Exponents `e_ell = sum floor(a_i / ell) - sum floor(b_j / ell)` of the
/// cyclotomic factors `Phi_ell`, `ell = 2..=max_ell`, of a factorial ratio.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycloExponents {
    exponents: BTreeMap<u32, i64>,
    max_ell: u32,
}

impl CycloExponents {
    pub fn get(&self, ell: u32) -> i64 {
        self.exponents.get(&ell).copied().unwrap_or(0)
    }

    pub fn max_ell(&self) -> u32 {
        self.max_ell
    }

    /// Every stored `(ell, e_ell)`, including zeros.
    pub fn iter(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.exponents.iter().map(|(&l, &e)| (l, e))
    }

    pub fn nonzero(&self) -> BTreeMap<u32, i64> {
        self.iter().filter(|&(_, e)| e != 0).collect()
    }

    /// Smallest `ell` with a negative exponent.
    pub fn first_negative(&self) -> Option<(u32, i64)> {
        self.iter().find(|&(_, e)| e < 0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.first_negative().is_none()
    }
}

fn exponents_of(num: &[u32], den: &[u32]) -> CycloExponents {
    let max_ell = num.iter().chain(den).copied().max().unwrap_or(0);
    let exponents = (2..=max_ell)
        .map(|ell| {
            let floor_sum = |v: &[u32]| -> i64 { v.iter().map(|&x| (x / ell) as i64).sum() };
            (ell, floor_sum(num) - floor_sum(den))
        })
        .collect();
    CycloExponents { exponents, max_ell }
}

pub fn ratio_exponents(t: &TupleSpec) -> CycloExponents {
    exponents_of(&t.a, &t.b)
}

/// `[n] = 1 + q + ... + q^(n-1)`.
pub fn q_integer(n: u32) -> Result<IntPoly> {
    if n == 0 {
        return Err(QError::InvalidArgument("[0] is not a q-integer".into()));
    }
    Ok(IntPoly::from_coeffs(vec![BigInt::one(); n as usize]))
}

/// `[n]! = [1][2]...[n]`, by repeated schoolbook multiplication.
pub fn q_factorial(n: u32) -> IntPoly {
    (2..=n).fold(IntPoly::one(), |acc, i| {
        acc.mul(&q_integer(i).expect("i >= 2"))
    })
}

// Rows of the q-Pascal triangle kept in memory. Row n holds about n^3/6
// coefficients, so larger rows are streamed instead of stored.
const PASCAL_MEMO_ROWS: usize = 72;

type PascalRow = Arc<Vec<IntPoly>>;

fn pascal_memo() -> &'static RwLock<Vec<PascalRow>> {
    static MEMO: OnceLock<RwLock<Vec<PascalRow>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(vec![Arc::new(vec![IntPoly::one()])]))
}

/// Next q-Pascal row, `[n, m] = [n-1, m-1] + q^m [n-1, m]`, keeping entries
/// `0..=width` only.
fn next_pascal_row(prev: &[IntPoly], n: usize, width: usize) -> Vec<IntPoly> {
    let upto = width.min(n);
    (0..=upto)
        .map(|m| {
            if m == 0 || m == n {
                return IntPoly::one();
            }
            let mut entry = prev[m - 1].clone();
            if let Some(right) = prev.get(m) {
                entry.add_scaled_shifted(right, &BigInt::one(), m);
            }
            entry
        })
        .collect()
}

fn pascal_row(n: usize) -> PascalRow {
    if let Some(row) = pascal_memo().read().unwrap().get(n) {
        return Arc::clone(row);
    }
    let mut rows = pascal_memo().write().unwrap();
    while rows.len() <= n {
        let k = rows.len();
        let row = next_pascal_row(&rows[k - 1], k, k);
        rows.push(Arc::new(row));
    }
    Arc::clone(&rows[n])
}

/// The Gaussian polynomial `[n over m]_q`, zero when `m < 0` or `m > n`.
///
/// Computed with the q-Pascal recurrence; rows up to a fixed size are memoized.
pub fn q_binomial(n: u32, m: i64) -> IntPoly {
    if m < 0 || m > n as i64 {
        return IntPoly::zero();
    }
    let n = n as usize;
    let m = (m as usize).min(n - m as usize);
    if n < PASCAL_MEMO_ROWS {
        return pascal_row(n)[m].clone();
    }
    let mut row = pascal_row(PASCAL_MEMO_ROWS - 1)[..=m].to_vec();
    for k in PASCAL_MEMO_ROWS..=n {
        row = next_pascal_row(&row, k, m);
    }
    row.swap_remove(m)
}

/// Product of `Phi_ell^(e_ell)` in increasing `ell`, by schoolbook
/// multiplication of the cyclotomic polynomials themselves.
pub fn cyclotomic_product(exps: &CycloExponents) -> Result<IntPoly> {
    if let Some(f) = exps.first_negative() {
        return Err(QError::NotPolynomial { factor: Some(f) });
    }
    Ok(exps.iter().fold(IntPoly::one(), |acc, (ell, e)| {
        if e == 0 {
            acc
        } else {
            acc.mul(&cyclotomic(ell).pow(e as u32))
        }
    }))
}

/// Assembles `prod Phi_ell^(e_ell)` of the given degree.
///
/// For `ell >= 2`, `Phi_ell = prod_{d | ell} (1 - q^d)^mu(ell/d)`, so the
/// product is `prod_d (1 - q^d)^c_d`. Each factor is applied to a power
/// series truncated after `q^degree` in linear time, which is exact because
/// the result is a polynomial of that degree.
fn assemble_from_exponents(exps: &CycloExponents, degree: usize) -> IntPoly {
    let max = exps.max_ell() as usize;
    let mut binomial_exps = vec![0i64; max + 1];
    for (ell, e) in exps.iter() {
        if e == 0 {
            continue;
        }
        for d in divisors(ell) {
            binomial_exps[d as usize] += mobius(ell / d) as i64 * e;
        }
    }
    let mut coeffs = vec![BigInt::from(0); degree + 1];
    coeffs[0] = BigInt::one();
    // Alternate divisions and multiplications so intermediate coefficients
    // stay close to the size of the final ones.
    let mut ups: Vec<usize> = Vec::new();
    let mut downs: Vec<usize> = Vec::new();
    for (d, &c) in binomial_exps.iter().enumerate().skip(1) {
        let list = if c > 0 { &mut ups } else { &mut downs };
        list.extend(std::iter::repeat_n(d, c.unsigned_abs() as usize));
    }
    let (mut u, mut v) = (ups.into_iter(), downs.into_iter());
    loop {
        let (x, y) = (v.next(), u.next());
        if x.is_none() && y.is_none() {
            break;
        }
        if let Some(d) = x.filter(|&d| d <= degree) {
            IntPoly::div_one_minus_truncated(&mut coeffs, d);
        }
        if let Some(d) = y.filter(|&d| d <= degree) {
            IntPoly::mul_one_minus_truncated(&mut coeffs, d);
        }
    }
    IntPoly::from_coeffs(coeffs)
}

/// Ratio of q-factorials for arbitrary (possibly empty, possibly zero-entry)
/// sides; `[0]! = 1`.
pub(crate) fn ratio_polynomial(num: &[u32], den: &[u32]) -> Result<IntPoly> {
    let exps = exponents_of(num, den);
    if let Some(f) = exps.first_negative() {
        return Err(QError::NotPolynomial { factor: Some(f) });
    }
    let degree = ratio_degree(num, den);
    debug_assert!(degree >= 0, "nonnegative exponents imply nonnegative degree");
    Ok(assemble_from_exponents(&exps, degree as usize))
}

/// `D(a, b; q)` as `prod Phi_ell^(e_ell)`. Fails with `NotPolynomial`
/// (naming the smallest offending `ell`) if any exponent is negative.
pub fn d_polynomial(t: &TupleSpec) -> Result<IntPoly> {
    ratio_polynomial(&t.a, &t.b)
}

/// `D(a, b; q)` by multiplying out the numerator q-factorials and exactly
/// dividing by each denominator q-factorial in turn.
pub fn d_polynomial_naive(t: &TupleSpec) -> Result<IntPoly> {
    let num = t
        .a
        .iter()
        .fold(IntPoly::one(), |acc, &x| acc.mul(&q_factorial(x)));
    t.b.iter().try_fold(num, |acc, &x| {
        acc.div_exact(&q_factorial(x))
            .map_err(|_| QError::NotPolynomial { factor: None })
    })
}

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u32) -> Vec<u32> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u32);
        for j in (i * i..=n).step_by(i) {
            composite[j] = true;
        }
    }
    primes
}

/// `ord_p n! = floor(n/p) + floor(n/p^2) + ...`.
pub fn factorial_valuation(n: u32, p: u32) -> u64 {
    let mut total = 0u64;
    let mut pk = p as u64;
    while pk <= n as u64 {
        total += n as u64 / pk;
        pk *= p as u64;
    }
    total
}

/// `prod a_i! / prod b_j!` as a reduced rational, assembled from the
/// valuation of every prime up to the largest entry.
pub fn classical_ratio(t: &TupleSpec) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for p in primes_up_to(t.max_entry()) {
        let side = |v: &[u32]| -> i64 { v.iter().map(|&x| factorial_valuation(x, p) as i64).sum() };
        let v = side(&t.a) - side(&t.b);
        let pp = BigInt::from(p);
        if v > 0 {
            num *= Pow::pow(&pp, v as u64);
        } else if v < 0 {
            den *= Pow::pow(&pp, v.unsigned_abs());
        }
    }
    BigRational::new(num, den)
}

/// `D_n(a, b; q)` for `n = 1..=n_max`, in order. Runs the values of `n` in
/// parallel when the `parallel` feature is on.
pub fn d_n_sweep(t: &TupleSpec, n_max: u32) -> Vec<Result<IntPoly>> {
    // Largest n first so the expensive jobs start early.
    let ns: Vec<u32> = (1..=n_max).rev().collect();
    let mut out = par::map(ns, |n| t.scaled(n).and_then(|s| d_polynomial(&s)));
    out.reverse();
    out
}

/// Sequential [`d_n_sweep`].
pub fn d_n_sweep_seq(t: &TupleSpec, n_max: u32) -> Vec<Result<IntPoly>> {
    par::map_seq((1..=n_max).collect(), |n| {
        t.scaled(n).and_then(|s| d_polynomial(&s))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn t(a: &[u32], b: &[u32]) -> TupleSpec {
        TupleSpec::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn int(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn q_integers() {
        assert_eq!(q_integer(1).unwrap(), IntPoly::one());
        assert_eq!(q_integer(3).unwrap(), p(&[1, 1, 1]));
        assert_eq!(q_integer(4).unwrap().eval_at_one(), BigInt::from(4));
        assert!(matches!(q_integer(0), Err(QError::InvalidArgument(_))));
    }

    #[test]
    fn q_factorials() {
        assert_eq!(q_factorial(0), IntPoly::one());
        assert_eq!(q_factorial(3), p(&[1, 2, 2, 1]));
        assert_eq!(q_factorial(5).eval_at_one(), BigInt::from(120));
        for n in 0..12u32 {
            assert_eq!(q_factorial(n).degree(), Some((n * n.saturating_sub(1) / 2) as usize));
        }
    }

    #[test]
    fn gaussian_polynomials() {
        assert_eq!(q_binomial(4, 2), p(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial(5, 0), IntPoly::one());
        assert_eq!(q_binomial(3, 5), IntPoly::zero());
        assert_eq!(q_binomial(3, -1), IntPoly::zero());
        assert_eq!(q_binomial(0, 0), IntPoly::one());
    }

    #[test]
    fn gaussian_beyond_memo_rows() {
        let n = PASCAL_MEMO_ROWS as u32 + 6;
        for m in [1i64, 2, 7] {
            let expected = d_polynomial(&t(&[n], &[n - m as u32, m as u32])).unwrap();
            assert_eq!(q_binomial(n, m), expected);
            assert_eq!(q_binomial(n, n as i64 - m), expected);
        }
    }

    #[test]
    fn gaussian_symmetry_and_third_route() {
        for n in 0..=30u32 {
            for m in 0..=n as i64 {
                let g = q_binomial(n, m);
                assert_eq!(g, q_binomial(n, n as i64 - m));
                assert_eq!(g.degree(), Some((m * (n as i64 - m)) as usize));
                if n >= 1 && m >= 1 && m < n as i64 {
                    assert_eq!(g, d_polynomial(&t(&[n], &[n - m as u32, m as u32])).unwrap());
                }
            }
        }
    }

    #[test]
    fn exponent_examples() {
        let e = ratio_exponents(&t(&[4], &[2, 2]));
        assert_eq!(e.nonzero(), BTreeMap::from([(3, 1), (4, 1)]));
        assert_eq!(e.get(2), 0);
        assert_eq!(e.max_ell(), 4);
        assert!(ratio_exponents(&t(&[7], &[7])).nonzero().is_empty());
        let bad = ratio_exponents(&t(&[1, 1], &[2]));
        assert_eq!(bad.first_negative(), Some((2, -1)));
    }

    #[test]
    fn d_polynomial_examples() {
        assert_eq!(d_polynomial(&t(&[2, 2], &[1, 2, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(d_polynomial(&t(&[9], &[9])).unwrap(), IntPoly::one());
        assert_eq!(d_polynomial(&t(&[4, 2], &[2, 3, 1])).unwrap(), p(&[1, 1, 1, 1]));
        assert_eq!(
            d_polynomial(&t(&[1, 1], &[2])),
            Err(QError::NotPolynomial { factor: Some((2, -1)) })
        );
    }

    #[test]
    fn naive_examples() {
        assert_eq!(d_polynomial_naive(&t(&[4], &[2, 2])).unwrap(), p(&[1, 1, 2, 1, 1]));
        assert_eq!(d_polynomial_naive(&t(&[1], &[1])).unwrap(), IntPoly::one());
        assert!(matches!(
            d_polynomial_naive(&t(&[1, 1], &[2])),
            Err(QError::NotPolynomial { .. })
        ));
    }

    #[test]
    fn cyclotomic_product_matches_fast_assembly() {
        for (a, b) in [
            (vec![4], vec![2, 2]),
            (vec![6, 4], vec![5, 3, 2]),
            (vec![6, 2], vec![4, 3, 1]),
            (vec![12], vec![6, 4, 2]),
            (vec![30, 1], vec![15, 10, 6]),
        ] {
            let spec = t(&a, &b);
            let exps = ratio_exponents(&spec);
            assert_eq!(cyclotomic_product(&exps).unwrap(), d_polynomial(&spec).unwrap(), "{spec}");
        }
    }

    #[test]
    fn chebyshev_tuple_degree_270() {
        let d = d_polynomial(&t(&[30, 1], &[15, 10, 6])).unwrap();
        assert_eq!(d.degree(), Some(270));
        assert!(!d.has_negative_coeff());
        assert_eq!(
            BigRational::from_integer(d.eval_at_one()),
            classical_ratio(&t(&[30, 1], &[15, 10, 6]))
        );
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_ratio(&t(&[2, 2], &[1, 2, 1])), int(2));
        assert_eq!(classical_ratio(&t(&[4, 2], &[2, 3, 1])), int(4));
        assert_eq!(
            classical_ratio(&t(&[1, 1], &[2])),
            BigRational::new(BigInt::one(), BigInt::from(2))
        );
        assert_eq!(classical_ratio(&t(&[20], &[10, 10])), int(184756));
    }

    #[test]
    fn sieve_and_valuations() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(factorial_valuation(100, 5), 24);
        assert_eq!(factorial_valuation(10, 2), 8);
    }

    #[test]
    fn sweep_examples() {
        let sweep = d_n_sweep(&t(&[2, 1], &[1, 1, 1]), 2);
        assert_eq!(sweep, vec![Ok(p(&[1, 1])), Ok(p(&[1, 1, 2, 1, 1]))]);
        assert!(d_n_sweep(&t(&[1], &[1]), 6).into_iter().all(|r| r.unwrap().is_one()));
        assert_eq!(d_n_sweep(&t(&[3, 2], &[2, 2, 1]), 4), d_n_sweep_seq(&t(&[3, 2], &[2, 2, 1]), 4));
        // not a polynomial at any n
        let bad = d_n_sweep(&t(&[1, 1], &[2]), 3);
        assert!(bad.iter().all(|r| matches!(r, Err(QError::NotPolynomial { .. }))));
    }

    #[test]
    fn tuple_parsing() {
        assert_eq!(TupleSpec::parse("30,1", " 15, 10,6").unwrap(), t(&[30, 1], &[15, 10, 6]));
        assert!(TupleSpec::parse("", "1").is_err());
        assert!(TupleSpec::parse("1,0", "1").is_err());
        assert!(TupleSpec::parse("x", "1").is_err());
        assert!(TupleSpec::new(vec![1], vec![]).is_err());
        assert_eq!(t(&[30, 1], &[15, 10, 6]).to_string(), "(30,1)/(15,10,6)");
        assert_eq!(t(&[30, 1], &[15, 10, 6]).expected_degree(), 270);
    }

    #[test]
    fn q_equals_one_degeneration_small() {
        for a in 1..=8u32 {
            for b1 in 1..=a {
                let spec = t(&[a], &[b1, a - b1 + 1]);
                let exact = classical_ratio(&spec);
                match d_polynomial(&spec) {
                    Ok(poly) => assert_eq!(BigRational::from_integer(poly.eval_at_one()), exact),
                    Err(_) => assert!(!ratio_exponents(&spec).is_polynomial()),
                }
            }
        }
    }
}
