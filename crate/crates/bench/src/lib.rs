//! Shared fixtures for the criterion benches.

use mcharlier::CharlierParams;

/// Parameters used across benches, indexed by the number of directions.
pub fn params(r: usize) -> CharlierParams {
    let sigma: &[(i64, i64)] = match r {
        1 => &[(1, 2)],
        2 => &[(1, 2), (3, 2)],
        3 => &[(1, 3), (1, 1), (5, 2)],
        _ => panic!("no bench fixture for r = {r}"),
    };
    CharlierParams::from_fractions(sigma).expect("fixture parameters are valid")
}
