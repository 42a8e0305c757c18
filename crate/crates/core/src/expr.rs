//! Expressions built from two seeds `u`, `v` by nested applications of `F`.
//!
//! `(u, v, F)_n` is taken to be every binary tree with leaves in `{u, v}`
//! and at most `n` nested applications. The number of such trees obeys
//! `c(0) = 2`, `c(n) = 2 + c(n - 1)^2`, so materialized tree lists stop at
//! [`TREE_DEPTH_CAP`]. Value sets only depend on the values of subtrees and
//! are computed level by level up to [`VALUE_DEPTH_CAP`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::maps::{BinaryMap, MapError};

/// Deepest tree list [`enumerate_exprs`] will materialize (2 090 918 trees).
pub const TREE_DEPTH_CAP: usize = 4;
/// Deepest value set [`evaluate_value_set`] will compute.
pub const VALUE_DEPTH_CAP: usize = 6;
/// Upper bound on `|S|^2` evaluations for one level of a value set.
pub const MAX_LEVEL_EVALUATIONS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("depth {requested} exceeds the cap of {cap}")]
    DepthCap { requested: usize, cap: usize },
    #[error("seeds must differ, got u = v = {0}")]
    EqualSeeds(f64),
    #[error("level {depth} would need {evaluations} evaluations (limit {MAX_LEVEL_EVALUATIONS})")]
    TooManyValues { depth: usize, evaluations: usize },
    #[error("cannot parse expression `{0}`")]
    Parse(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExprTree {
    U,
    V,
    Apply {
        left: Arc<ExprTree>,
        right: Arc<ExprTree>,
        depth: usize,
    },
}

impl ExprTree {
    pub fn apply(left: Arc<ExprTree>, right: Arc<ExprTree>) -> Arc<ExprTree> {
        let depth = 1 + left.depth().max(right.depth());
        Arc::new(ExprTree::Apply { left, right, depth })
    }

    /// Maximum nesting of applications; 0 for a leaf.
    pub fn depth(&self) -> usize {
        match self {
            ExprTree::U | ExprTree::V => 0,
            ExprTree::Apply { depth, .. } => *depth,
        }
    }

    pub fn evaluate(&self, map: &BinaryMap, u: f64, v: f64) -> Result<f64, MapError> {
        match self {
            ExprTree::U => Ok(u),
            ExprTree::V => Ok(v),
            ExprTree::Apply { left, right, .. } => {
                map.eval(left.evaluate(map, u, v)?, right.evaluate(map, u, v)?)
            }
        }
    }
}

impl fmt::Display for ExprTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprTree::U => f.write_str("u"),
            ExprTree::V => f.write_str("v"),
            ExprTree::Apply { left, right, .. } => write!(f, "F({left},{right})"),
        }
    }
}

impl FromStr for ExprTree {
    type Err = ExprError;

    /// Parses the `F(a,b)` notation; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn parse(s: &[u8], pos: &mut usize) -> Option<Arc<ExprTree>> {
            let c = *s.get(*pos)?;
            *pos += 1;
            match c {
                b'u' => Some(Arc::new(ExprTree::U)),
                b'v' => Some(Arc::new(ExprTree::V)),
                b'F' => {
                    if s.get(*pos) != Some(&b'(') {
                        return None;
                    }
                    *pos += 1;
                    let left = parse(s, pos)?;
                    if s.get(*pos) != Some(&b',') {
                        return None;
                    }
                    *pos += 1;
                    let right = parse(s, pos)?;
                    if s.get(*pos) != Some(&b')') {
                        return None;
                    }
                    *pos += 1;
                    Some(ExprTree::apply(left, right))
                }
                _ => None,
            }
        }
        let compact: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        match parse(&compact, &mut pos) {
            Some(tree) if pos == compact.len() => Ok(Arc::unwrap_or_clone(tree)),
            _ => Err(ExprError::Parse(s.to_string())),
        }
    }
}

/// Number of trees of depth at most `depth`; `None` on overflow.
pub fn tree_count(depth: usize) -> Option<u128> {
    let mut count: u128 = 2;
    for _ in 0..depth {
        count = count.checked_mul(count)?.checked_add(2)?;
    }
    Some(count)
}

/// All trees of depth at most `depth`.
///
/// Order: `u`, `v`, then the trees of depth exactly 1, 2, ... in turn;
/// within a depth, lexicographic by (index of left, index of right) in the
/// list built so far.
pub fn enumerate_exprs(depth: usize) -> Result<Vec<Arc<ExprTree>>, ExprError> {
    if depth > TREE_DEPTH_CAP {
        return Err(ExprError::DepthCap {
            requested: depth,
            cap: TREE_DEPTH_CAP,
        });
    }
    let mut all = vec![Arc::new(ExprTree::U), Arc::new(ExprTree::V)];
    for d in 1..=depth {
        let previous = all.len();
        for l in 0..previous {
            for r in 0..previous {
                if all[l].depth().max(all[r].depth()) == d - 1 {
                    all.push(ExprTree::apply(all[l].clone(), all[r].clone()));
                }
            }
        }
    }
    Ok(all)
}

/// A value reachable from the seeds and the least depth reaching it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValueLength {
    pub value: f64,
    pub length: usize,
}

/// Evaluated `(u, v, F)_depth`, sorted by value, deduplicated within the
/// map's tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueSet {
    pub depth: usize,
    pub values: Vec<ValueLength>,
    #[serde(skip)]
    tolerance: f64,
}

impl ValueSet {
    pub fn values(&self) -> &[ValueLength] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn find(&self, x: f64) -> Option<&ValueLength> {
        let idx = self
            .values
            .partition_point(|v| v.value < x - self.tolerance);
        self.values
            .get(idx)
            .filter(|v| (v.value - x).abs() <= self.tolerance)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.find(x).is_some()
    }

    /// Length of the value within tolerance of `x`, if reached.
    pub fn length_of(&self, x: f64) -> Option<usize> {
        self.find(x).map(|v| v.length)
    }
}

/// Computes the values of all trees of depth at most `depth` at the seeds
/// `u`, `v`, each tagged with its length (least depth reaching it).
///
/// Level `k` is `{u, v}` together with `F(a, b)` for `a, b` in level
/// `k - 1`; this is exactly the set of values of depth-`k` trees.
pub fn evaluate_value_set(
    map: &BinaryMap,
    u: f64,
    v: f64,
    depth: usize,
) -> Result<ValueSet, ExprError> {
    if depth > VALUE_DEPTH_CAP {
        return Err(ExprError::DepthCap {
            requested: depth,
            cap: VALUE_DEPTH_CAP,
        });
    }
    if u == v {
        return Err(ExprError::EqualSeeds(u));
    }
    let tol = map.tolerance();
    // seeds go through the domain check too
    map.eval(u, v)?;
    let mut current = cluster(
        vec![
            ValueLength {
                value: u,
                length: 0,
            },
            ValueLength {
                value: v,
                length: 0,
            },
        ],
        tol,
    );
    for k in 1..=depth {
        let n = current.len();
        if n.saturating_mul(n) > MAX_LEVEL_EVALUATIONS {
            return Err(ExprError::TooManyValues {
                depth: k,
                evaluations: n.saturating_mul(n),
            });
        }
        let fresh: Vec<Vec<ValueLength>> = current
            .par_iter()
            .map(|a| {
                current
                    .iter()
                    .map(|b| {
                        map.eval(a.value, b.value)
                            .map(|value| ValueLength { value, length: k })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let mut candidates = current.clone();
        candidates.extend(fresh.into_iter().flatten());
        current = cluster(candidates, tol);
    }
    Ok(ValueSet {
        depth,
        values: current,
        tolerance: tol,
    })
}

/// Sorts by value and merges runs within `tol` of the run's first value;
/// a merged run keeps its least length and that member's value.
fn cluster(mut candidates: Vec<ValueLength>, tol: f64) -> Vec<ValueLength> {
    candidates.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.length.cmp(&b.length)));
    let mut out: Vec<ValueLength> = Vec::new();
    let mut anchor = f64::NAN;
    for c in candidates {
        match out.last_mut() {
            Some(last) if c.value - anchor <= tol => {
                if c.length < last.length {
                    *last = c;
                }
            }
            _ => {
                anchor = c.value;
                out.push(c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{builtin, Interval};

    #[test]
    fn counts_follow_recurrence() {
        assert_eq!(tree_count(0), Some(2));
        assert_eq!(tree_count(1), Some(6));
        assert_eq!(tree_count(2), Some(38));
        assert_eq!(tree_count(3), Some(1446));
        assert_eq!(tree_count(4), Some(2_090_918));
        assert!(tree_count(6).is_some());
        assert!(tree_count(7).is_none());
        for d in 0..=3 {
            assert_eq!(
                enumerate_exprs(d).unwrap().len() as u128,
                tree_count(d).unwrap()
            );
        }
    }

    #[test]
    fn depth_one_listing() {
        let trees = enumerate_exprs(1).unwrap();
        let names: Vec<String> = trees.iter().map(|t| t.to_string()).collect();
        assert_eq!(names, ["u", "v", "F(u,u)", "F(u,v)", "F(v,u)", "F(v,v)"]);
        assert!(trees[2..].iter().all(|t| t.depth() == 1));
    }

    #[test]
    fn depth_cap_is_enforced() {
        assert!(matches!(
            enumerate_exprs(TREE_DEPTH_CAP + 1),
            Err(ExprError::DepthCap { .. })
        ));
        let m = builtin("arithmetic", Interval::UNIT).unwrap();
        assert!(matches!(
            evaluate_value_set(&m, 0.0, 1.0, VALUE_DEPTH_CAP + 1),
            Err(ExprError::DepthCap { .. })
        ));
        assert!(matches!(
            evaluate_value_set(&m, 0.5, 0.5, 1),
            Err(ExprError::EqualSeeds(_))
        ));
    }

    #[test]
    fn tree_notation_round_trips() {
        for t in enumerate_exprs(2).unwrap() {
            let back: ExprTree = t.to_string().parse().unwrap();
            assert_eq!(&back, t.as_ref());
        }
        assert!("F(u,)".parse::<ExprTree>().is_err());
        assert!("F(u,v) x".parse::<ExprTree>().is_err());
        assert_eq!(" F( u , v ) ".parse::<ExprTree>().unwrap().depth(), 1);
    }

    #[test]
    fn arithmetic_value_set_depth_three() {
        let m = builtin("arithmetic", Interval::UNIT).unwrap();
        let set = evaluate_value_set(&m, 0.0, 1.0, 3).unwrap();
        let values: Vec<f64> = set.values().iter().map(|v| v.value).collect();
        let expected: Vec<f64> = (0..=8).map(|k| k as f64 / 8.0).collect();
        assert_eq!(values, expected);
        assert_eq!(set.length_of(0.375), Some(3));
        assert_eq!(set.length_of(0.5), Some(1));
        assert_eq!(set.length_of(0.0), Some(0));
        assert_eq!(set.length_of(0.3), None);
    }

    #[test]
    fn reflexivity_collapses_length() {
        let m = builtin("geometric", Interval::new(1.0, 4.0).unwrap()).unwrap();
        let set = evaluate_value_set(&m, 1.0, 4.0, 3).unwrap();
        let t: ExprTree = "F(F(u,u),v)".parse().unwrap();
        assert_eq!(t.depth(), 2);
        let x = t.evaluate(&m, 1.0, 4.0).unwrap();
        assert_eq!(set.length_of(x), Some(1));
    }

    #[test]
    fn seeds_outside_domain_are_rejected() {
        let m = builtin("arithmetic", Interval::UNIT).unwrap();
        assert!(matches!(
            evaluate_value_set(&m, 0.0, 2.0, 1),
            Err(ExprError::Map(MapError::DomainViolation { .. }))
        ));
    }

    #[test]
    fn clustering_keeps_least_length() {
        let c = cluster(
            vec![
                ValueLength {
                    value: 0.5 + 1e-12,
                    length: 3,
                },
                ValueLength {
                    value: 0.5,
                    length: 1,
                },
                ValueLength {
                    value: 0.7,
                    length: 2,
                },
            ],
            1e-9,
        );
        assert_eq!(c.len(), 2);
        assert_eq!(
            c[0],
            ValueLength {
                value: 0.5,
                length: 1
            }
        );
    }
}
