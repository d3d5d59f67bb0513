//! Fixtures shared by the benchmarks.

use fibrepos::chowring::{AmbientData, CompleteIntersectionSpec};

/// `r = 4, d = 6`, factors `(2, 1), (2, 0)`.
pub fn worked() -> (CompleteIntersectionSpec, AmbientData) {
    let spec = CompleteIntersectionSpec::from_pairs(&[(2, 1), (2, 0)]).expect("valid factors");
    (spec, AmbientData::new(4, 6).expect("valid ambient"))
}

/// A larger instance: five factors in a rank-8 bundle.
pub fn wide() -> (CompleteIntersectionSpec, AmbientData) {
    let spec = CompleteIntersectionSpec::from_pairs(&[(3, 1), (3, 8), (5, 7), (2, -4), (5, 6)]).expect("valid factors");
    (spec, AmbientData::new(8, 6).expect("valid ambient"))
}
