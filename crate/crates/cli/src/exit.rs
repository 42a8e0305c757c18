//! Process exit codes.
//!
//! Outcomes that matter to the theory get their own code so scripts can
//! tell "a property fails" from "the hypotheses are broken" from "the
//! sample contradicts the dichotomy".

/// Every requested check holds on the sample, or a clean dichotomy verdict.
pub const OK: u8 = 0;
/// A checked property fails, a table is not monotone, or the map cannot be
/// evaluated somewhere it has to be.
pub const FAILURE: u8 = 1;
/// Mixed symmetry explained by a failing hypothesis.
pub const HYPOTHESIS_VIOLATED: u8 = 2;
/// Mixed symmetry although every hypothesis holds on the sample.
pub const INCONCLUSIVE: u8 = 3;
/// Bad flags or values.
pub const USAGE: u8 = 64;
/// The map file does not parse.
pub const PARSE: u8 = 65;
