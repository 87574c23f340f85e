//! Cyclotomic polynomials by recursive exact division, memoized per process.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::IntPoly;

fn memo() -> &'static RwLock<HashMap<u32, Arc<IntPoly>>> {
    static MEMO: OnceLock<RwLock<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Möbius function.
pub fn mobius(mut n: u32) -> i32 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut sign = 1;
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= n as u64 {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `Phi_ell(q)`, computed as `q^ell - 1` divided by `Phi_d` for every proper
/// divisor `d` of `ell`.
///
/// # Panics
/// If `ell == 0`.
pub fn cyclotomic(ell: u32) -> Arc<IntPoly> {
    assert!(ell >= 1, "cyclotomic polynomials are indexed from 1");
    if let Some(p) = memo().read().unwrap().get(&ell) {
        return Arc::clone(p);
    }
    let mut acc = IntPoly::monomial(1, ell as usize).sub(&IntPoly::one());
    for d in divisors(ell) {
        if d == ell {
            break;
        }
        acc = acc
            .div_exact(&cyclotomic(d))
            .expect("q^n - 1 is divisible by Phi_d for d | n");
    }
    let acc = Arc::new(acc);
    // Concurrent computations of the same ell produce equal values, so the
    // first insert wins and the rest are dropped.
    Arc::clone(memo().write().unwrap().entry(ell).or_insert(acc))
}

/// `Phi_ell(1)`: `p` when `ell` is a power of the prime `p`, else `1` (and
/// `0` for `ell = 1`).
pub fn cyclotomic_at_one(ell: u32) -> BigInt {
    cyclotomic(ell).eval(&BigInt::one())
}
