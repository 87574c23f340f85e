//! Landau's criterion `f(x) = sum floor(a_i x) - sum floor(b_j x) >= 0` for
//! all `x >= 0`, tuple canonicalization, and enumeration of tuples that
//! satisfy the criterion.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{QError, Result};
use crate::par;
use crate::qfactor::TupleSpec;

/// Outcome of [`landau_check`]. `min_value` is the minimum of `f` over
/// `[0, 1]`; `witness` is the smallest point attaining it when it is negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LandauVerdict {
    pub holds: bool,
    #[serde(serialize_with = "ser_witness")]
    pub witness: Option<Ratio<u64>>,
    pub min_value: i64,
}

fn ser_witness<S: serde::Serializer>(w: &Option<Ratio<u64>>, s: S) -> Result<S::Ok, S::Error> {
    match w {
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

/// `f(k/d)` evaluated exactly in integers.
pub fn floor_sum_at(t: &TupleSpec, k: u64, d: u64) -> i64 {
    let side = |v: &[u32]| -> i64 { v.iter().map(|&x| (x as u64 * k / d) as i64).sum() };
    side(t.a()) - side(t.b())
}

/// Decides Landau's criterion exactly.
///
/// `f(x + 1) = f(x) + (sum a - sum b)`, so when `sum a >= sum b` the minimum
/// over `x >= 0` is the minimum over `[0, 1)`. There `f` is right-continuous
/// and piecewise constant with jumps only at `k/d` for `d` an entry, so the
/// minimum is attained at one of those breakpoints. When `sum a < sum b`,
/// `f(1) < 0` already.
pub fn landau_check(t: &TupleSpec) -> LandauVerdict {
    let mut points: BTreeSet<Ratio<u64>> = BTreeSet::new();
    let denominators: BTreeSet<u64> = t.a().iter().chain(t.b()).map(|&x| x as u64).collect();
    for &d in &denominators {
        for k in 0..d {
            points.insert(Ratio::new(k, d));
        }
    }
    points.insert(Ratio::from_integer(1));

    let mut best: Option<(i64, Ratio<u64>)> = None;
    for x in points {
        let v = floor_sum_at(t, *x.numer(), *x.denom());
        if best.as_ref().is_none_or(|(m, _)| v < *m) {
            best = Some((v, x));
        }
    }
    let (min_value, at) = best.expect("0 is always a breakpoint");
    let holds = min_value >= 0;
    LandauVerdict {
        holds,
        witness: (!holds).then_some(at),
        min_value,
    }
}

/// A tuple after cancelling entries common to both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Canonical {
    pub tuple: TupleSpec,
    /// gcd of all remaining entries is 1.
    pub primitive: bool,
}

/// Cancels entries common to `a` and `b` (as multisets) and sorts both sides
/// in descending order.
///
/// Cancellation never empties just one side: a common value whose removal
/// would leave one side empty while the other is not is kept, since an
/// empty side has no tuple representation and padding it with `1` would
/// change the floor-sum. If both sides cancel completely the ratio is
/// identically 1 and `Degenerate` is returned; [`Canonical::trivial`] is its
/// canonical form.
pub fn canonicalize(t: &TupleSpec) -> Result<Canonical> {
    let mut a = t.a().to_vec();
    let mut b = t.b().to_vec();
    a.sort_unstable_by(|x, y| y.cmp(x));
    b.sort_unstable_by(|x, y| y.cmp(x));

    let mut common = Vec::new();
    let (mut ra, mut rb) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                common.push(a[i]);
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Greater => {
                ra.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Less => {
                rb.push(b[j]);
                j += 1;
            }
        }
    }
    ra.extend_from_slice(&a[i..]);
    rb.extend_from_slice(&b[j..]);

    match (ra.is_empty(), rb.is_empty()) {
        (true, true) => return Err(QError::Degenerate),
        (true, false) | (false, true) => {
            // keep the smallest common value on both sides
            let keep = *common.last().expect("an emptied side had common entries");
            ra.push(keep);
            rb.push(keep);
            ra.sort_unstable_by(|x, y| y.cmp(x));
            rb.sort_unstable_by(|x, y| y.cmp(x));
        }
        (false, false) => {}
    }
    let g = ra.iter().chain(&rb).fold(0u32, |g, &x| g.gcd(&x));
    Ok(Canonical {
        tuple: TupleSpec::new(ra, rb)?,
        primitive: g == 1,
    })
}

impl Canonical {
    /// The ratio `[1]!/[1]! = 1`.
    pub fn trivial() -> Self {
        Canonical {
            tuple: TupleSpec::new(vec![1], vec![1]).expect("valid"),
            primitive: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub r: usize,
    pub s: usize,
    pub sum_bound: u32,
    pub balanced_only: bool,
    pub primitive_only: bool,
}

impl EnumerateOptions {
    pub fn new(r: usize, s: usize, sum_bound: u32, balanced_only: bool) -> Self {
        EnumerateOptions {
            r,
            s,
            sum_bound,
            balanced_only,
            primitive_only: true,
        }
    }
}

/// Non-increasing sequences of `len` positive integers summing to `total`,
/// in lexicographic order, each entry at most `cap`.
fn partitions_into(total: u32, len: usize, cap: u32, out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>) {
    if len == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let rest = (len - 1) as u32;
    if total < len as u32 {
        return;
    }
    let lo = total.div_ceil(len as u32);
    let hi = cap.min(total - rest);
    for x in lo..=hi {
        prefix.push(x);
        partitions_into(total - x, len - 1, x, out, prefix);
        prefix.pop();
    }
}

fn partitions(total: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    partitions_into(total, len, total, &mut out, &mut Vec::new());
    out
}

/// All canonical tuples with `|a| = r`, `|b| = s`, `sum a <= sum_bound`, no
/// entries common to both sides, satisfying Landau's criterion, in
/// lexicographic order of `(a, b)` with entries descending within a side.
///
/// `sum b <= sum a` is always imposed since otherwise the criterion fails.
pub fn enumerate_tuples(opts: &EnumerateOptions) -> Vec<TupleSpec> {
    if opts.r == 0 || opts.s == 0 {
        return Vec::new();
    }
    let mut candidates = Vec::new();
    for sum_a in 1..=opts.sum_bound {
        for a in partitions(sum_a, opts.r) {
            let sums_b: Vec<u32> = if opts.balanced_only {
                vec![sum_a]
            } else {
                (1..=sum_a).collect()
            };
            for sum_b in sums_b {
                for b in partitions(sum_b, opts.s) {
                    if b.iter().any(|x| a.contains(x)) {
                        continue;
                    }
                    candidates.push((a.clone(), b));
                }
            }
        }
    }
    let checked = par::map(candidates, |(a, b)| {
        let t = TupleSpec::new(a, b).expect("partitions have positive entries");
        let canon = canonicalize(&t).ok()?;
        let keep = canon.tuple == t
            && (!opts.primitive_only || canon.primitive)
            && landau_check(&t).holds;
        keep.then_some(t)
    });
    let set: BTreeSet<TupleSpec> = checked.into_iter().flatten().collect();
    set.into_iter().collect()
}
