//! Numerical laboratory for two-variable bisymmetric operations.
//!
//! The crate samples the classical axioms of binary maps on an interval
//! (reflexivity, partial strict increase, symmetry, bisymmetry,
//! cancellativity, mean bounds), extracts the generator of a
//! quasi-arithmetic mean from the dyadic midpoint recursion, and
//! classifies maps as symmetric everywhere, nowhere symmetric, or in
//! violation of the hypotheses under which those are the only options.
//!
//! Every verdict is sample based: "holds on sample" never means "holds".

// `!(a < b)` is used on purpose so that NaN counts as a violation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod dichotomy;
pub mod dsl;
pub mod dyadic;
pub mod expr;
pub mod maps;

pub use axioms::{
    check_bisymmetry, check_cancellative, check_codomain, check_mean_bounds,
    check_partial_strict_increasing, check_reflexive, check_symmetric_at, check_symmetry, Property,
    PropertyReport, SampleGrid, Verdict, Witness,
};
pub use dichotomy::{
    dichotomy_verdict, partition_by_symmetry, symmetry_propagation_check, verify_class_structure,
    DichotomyVerdict, Hypothesis, SymPartition, VerdictKind,
};
pub use dyadic::{
    build_dyadic_table, check_table_monotone, density_report, invert_table, reconstruct_map,
    roundtrip_residual, DyadicTable, ReconstructionReport,
};
pub use expr::{enumerate_exprs, evaluate_value_set, ExprTree, ValueLength, ValueSet};
pub use maps::{
    builtin, make_quasi_arithmetic, make_weighted_affine, BinaryMap, Builtin, GeneratorSpec,
    Interval, MapError, MapKind, MonotoneBijection, WeightedAffineSpec,
};
