#![allow(dead_code)]

use bisym_core::{
    make_weighted_affine, BinaryMap, Builtin, Interval, MonotoneBijection, WeightedAffineSpec,
};

pub fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

/// Every catalog entry on its default domain.
pub fn catalog() -> Vec<(String, BinaryMap)> {
    Builtin::catalog()
        .into_iter()
        .map(|b| (b.to_string(), b.into_map(b.default_domain()).unwrap()))
        .collect()
}

/// The quasi-arithmetic part of the catalog on `[1, 2]`.
pub fn quasi_arithmetic_on_1_2() -> Vec<(String, BinaryMap)> {
    Builtin::catalog()
        .into_iter()
        .filter(Builtin::is_quasi_arithmetic)
        .map(|b| (b.to_string(), b.into_map(iv(1.0, 2.0)).unwrap()))
        .collect()
}

/// `a x + b y` on `[0, 1]`; reflexive when `a + b = 1`.
pub fn weighted(a: f64, b: f64) -> BinaryMap {
    make_weighted_affine(
        WeightedAffineSpec::new(MonotoneBijection::identity(), a, b, 0.0),
        Interval::UNIT,
    )
    .unwrap()
}

pub fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}
