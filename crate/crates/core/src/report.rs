use num_traits::Signed;
use serde::Serialize;

use crate::poly::IntPoly;

/// Coefficient-level summary of a polynomial. `degree` is `None` for zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub degree: Option<usize>,
    pub negative_positions: Vec<usize>,
    pub is_positive: bool,
    pub is_symmetric: bool,
    pub is_unimodal: bool,
}

pub fn positivity_report(p: &IntPoly) -> PositivityReport {
    let c = p.coeffs();
    let negative_positions: Vec<usize> = c
        .iter()
        .enumerate()
        .filter_map(|(i, x)| x.is_negative().then_some(i))
        .collect();
    let is_symmetric = c.iter().eq(c.iter().rev());
    // weakly up to a peak, then weakly down
    let peak = c
        .windows(2)
        .position(|w| w[1] < w[0])
        .unwrap_or(c.len().saturating_sub(1));
    let is_unimodal = c[peak..].windows(2).all(|w| w[1] <= w[0]);
    PositivityReport {
        degree: p.degree(),
        is_positive: negative_positions.is_empty(),
        negative_positions,
        is_symmetric,
        is_unimodal,
    }
}
