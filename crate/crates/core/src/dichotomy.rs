//! Symmetry classes and the symmetric-everywhere / nowhere-symmetric
//! dichotomy.
//!
//! Sample points are related by `a ~ b` iff `F(a, b) = F(b, a)` within
//! tolerance. For a reflexive, partially strictly increasing, bisymmetric
//! map this relation is an equivalence whose classes are ordered closed
//! intervals, and either one class covers everything or every class is a
//! point. A mixed sample therefore means one of those hypotheses fails;
//! [`dichotomy_verdict`] finds which, and reports `inconclusive` when none
//! does.

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::axioms::{
    check_bisymmetry, check_partial_strict_increasing, check_reflexive, check_symmetric_at,
    tabulate, Property, PropertyReport, SampleGrid, Witness, WitnessSink, WITNESS_LIMIT,
};
use crate::expr::{evaluate_value_set, ExprError};
use crate::maps::{BinaryMap, MapError};

/// Points per axis of the bisymmetry sweep run inside a dichotomy verdict.
pub const HYPOTHESIS_QUAD_GRID: usize = 17;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DichotomyError {
    #[error("F({u}, {v}) = {lhs} but F({v}, {u}) = {rhs}: seeds are not a symmetric pair")]
    AsymmetricSeeds { u: f64, v: f64, lhs: f64, rhs: f64 },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairDefect {
    pub a: f64,
    pub b: f64,
    /// `F(a, b) - F(b, a)`
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymClass {
    pub members: Vec<f64>,
    /// `[min, max]` of the members.
    pub hull: [f64; 2],
}

/// Connected components of the sampled symmetric-pair graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymPartition {
    pub points: Vec<f64>,
    /// Sorted by smallest member.
    pub classes: Vec<SymClass>,
    pub tolerance: f64,
    pub symmetric_pairs: u64,
    pub asymmetric_pairs: u64,
    /// Pairs with `tol < |defect| <= 10 tol`, truncated.
    pub near_threshold_pairs: Vec<PairDefect>,
    pub near_threshold_count: u64,
    /// Asymmetric pairs inside one class, i.e. failures of transitivity.
    pub clique_violations: Vec<PairDefect>,
    pub clique_violation_count: u64,
    /// Row-major `n x n` symmetric-pair flags.
    #[serde(skip)]
    relation: Vec<bool>,
    #[serde(skip)]
    class_of: Vec<usize>,
}

impl SymPartition {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_symmetric_pair(&self, i: usize, j: usize) -> bool {
        self.relation[i * self.points.len() + j]
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Whether the symmetric-pair graph is a disjoint union of cliques.
    pub fn is_clique_consistent(&self) -> bool {
        self.clique_violation_count == 0
    }

    /// A partition given directly by its classes, with the relation "same
    /// class". Points must appear in exactly one class.
    pub fn from_classes(classes: Vec<Vec<f64>>) -> Result<Self, MapError> {
        let mut points: Vec<f64> = classes.iter().flatten().copied().collect();
        points.sort_by(f64::total_cmp);
        if points.windows(2).any(|w| w[0] == w[1]) || points.iter().any(|p| !p.is_finite()) {
            return Err(MapError::InvalidParameter(
                "classes must hold distinct finite points".into(),
            ));
        }
        let n = points.len();
        let index = |x: f64| points.iter().position(|&p| p == x).unwrap();
        let mut class_of = vec![0; n];
        for (c, class) in classes.iter().enumerate() {
            for &x in class {
                class_of[index(x)] = c;
            }
        }
        let mut relation = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                relation[i * n + j] = class_of[i] == class_of[j];
            }
        }
        Ok(assemble(points, relation, 0.0, Vec::new(), 0))
    }
}

/// Groups points by union-find over the symmetric pairs and records
/// transitivity failures.
fn assemble(
    points: Vec<f64>,
    relation: Vec<bool>,
    tolerance: f64,
    near_threshold_pairs: Vec<PairDefect>,
    near_threshold_count: u64,
) -> SymPartition {
    let n = points.len();
    let mut uf = UnionFind::<usize>::new(n);
    let (mut symmetric_pairs, mut asymmetric_pairs) = (0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            if relation[i * n + j] {
                symmetric_pairs += 1;
                uf.union(i, j);
            } else {
                asymmetric_pairs += 1;
            }
        }
    }
    // number classes in order of their first (smallest) point
    let mut label = vec![usize::MAX; n];
    let mut class_of = vec![0; n];
    let mut classes: Vec<SymClass> = Vec::new();
    for i in 0..n {
        let root = uf.find(i);
        if label[root] == usize::MAX {
            label[root] = classes.len();
            classes.push(SymClass {
                members: Vec::new(),
                hull: [points[i], points[i]],
            });
        }
        let c = label[root];
        class_of[i] = c;
        classes[c].members.push(points[i]);
        classes[c].hull[1] = points[i];
    }
    let mut clique_violations = Vec::new();
    let mut clique_violation_count = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if class_of[i] == class_of[j] && !relation[i * n + j] {
                clique_violation_count += 1;
                if clique_violations.len() < WITNESS_LIMIT {
                    clique_violations.push(PairDefect {
                        a: points[i],
                        b: points[j],
                        defect: f64::NAN,
                    });
                }
            }
        }
    }
    SymPartition {
        points,
        classes,
        tolerance,
        symmetric_pairs,
        asymmetric_pairs,
        near_threshold_pairs,
        near_threshold_count,
        clique_violations,
        clique_violation_count,
        relation,
        class_of,
    }
}

/// Evaluates all pairs of grid points and partitions them into the
/// connected components of the symmetric-pair graph.
pub fn partition_by_symmetry(map: &BinaryMap, grid: &SampleGrid) -> Result<SymPartition, MapError> {
    let tol = map.tolerance();
    let table = tabulate(map, grid.points())?;
    let points = grid.points().to_vec();
    let n = points.len();
    let mut relation = vec![true; n * n];
    let mut near = Vec::new();
    let mut near_count = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            let defect = table.get(i, j) - table.get(j, i);
            let symmetric = defect.abs() <= tol;
            relation[i * n + j] = symmetric;
            relation[j * n + i] = symmetric;
            if !symmetric && defect.abs() <= 10.0 * tol {
                near_count += 1;
                if near.len() < WITNESS_LIMIT {
                    near.push(PairDefect {
                        a: points[i],
                        b: points[j],
                        defect,
                    });
                }
            }
        }
    }
    let mut partition = assemble(points, relation, tol, near, near_count);
    for pair in &mut partition.clique_violations {
        pair.defect = map.eval(pair.a, pair.b)? - map.eval(pair.b, pair.a)?;
    }
    Ok(partition)
}

/// Structural checks on the classes of `partition`:
///
/// * the symmetric-pair graph is a union of cliques (transitivity);
/// * class hulls do not interleave;
/// * for classes `I1 < I2`, `I1 < F(I1, I2) < I2` and `I1 < F(I2, I1) < I2`
///   on class representatives (smallest and largest member);
/// * for adjacent classes `I1 < I2` and every class `I3`,
///   `F(I1, I3) < F(I2, I3)` and `F(I3, I1) < F(I3, I2)` on representatives.
///
/// Witness layout: transitivity `[a, b]` with `F(a, b)`, `F(b, a)`;
/// interleaving `[hull_lo, point, hull_hi]` with the point and the nearer
/// hull end; betweenness `[x1, x2]` with `F` and the violated class bound;
/// ordering `[x1, x2, y]` with the two compared values.
pub fn verify_class_structure(
    map: &BinaryMap,
    partition: &SymPartition,
) -> Result<PropertyReport, MapError> {
    let mut sink = WitnessSink::default();
    let mut checked = 0u64;

    for pair in &partition.clique_violations {
        let lhs = map.eval(pair.a, pair.b)?;
        let rhs = map.eval(pair.b, pair.a)?;
        sink.push(Witness::new(vec![pair.a, pair.b], lhs, rhs));
    }
    // the retained list is truncated; account for the rest
    sink.total += partition
        .clique_violation_count
        .saturating_sub(partition.clique_violations.len() as u64);
    checked += partition.symmetric_pairs;

    let classes = &partition.classes;
    let mut interleaved = false;
    for (c, class) in classes.iter().enumerate() {
        for (d, other) in classes.iter().enumerate() {
            if c == d {
                continue;
            }
            for &x in &other.members {
                checked += 1;
                if class.hull[0] < x && x < class.hull[1] {
                    interleaved = true;
                    let near = if x - class.hull[0] <= class.hull[1] - x {
                        class.hull[0]
                    } else {
                        class.hull[1]
                    };
                    sink.push(Witness::new(vec![class.hull[0], x, class.hull[1]], x, near));
                }
            }
        }
    }

    if !interleaved && classes.len() > 1 {
        let reps = |c: &SymClass| -> Vec<f64> {
            let mut r = vec![c.hull[0]];
            if c.hull[1] != c.hull[0] {
                r.push(c.hull[1]);
            }
            r
        };
        let reps: Vec<Vec<f64>> = classes.iter().map(reps).collect();
        // betweenness for every ordered pair of classes
        for a in 0..classes.len() {
            for b in a + 1..classes.len() {
                let (upper_of_a, lower_of_b) = (classes[a].hull[1], classes[b].hull[0]);
                for &x1 in &reps[a] {
                    for &x2 in &reps[b] {
                        for value in [map.eval(x1, x2)?, map.eval(x2, x1)?] {
                            checked += 1;
                            if !(upper_of_a < value) {
                                sink.push(Witness::new(vec![x1, x2], value, upper_of_a));
                            } else if !(value < lower_of_b) {
                                sink.push(Witness::new(vec![x1, x2], value, lower_of_b));
                            }
                        }
                    }
                }
            }
        }
        // ordering of images for adjacent classes against every class
        for a in 0..classes.len() - 1 {
            let b = a + 1;
            for r3 in &reps {
                let mut left = (f64::NEG_INFINITY, f64::INFINITY);
                let mut right = (f64::NEG_INFINITY, f64::INFINITY);
                for &y in r3 {
                    for &x1 in &reps[a] {
                        left.0 = left.0.max(map.eval(x1, y)?);
                        right.0 = right.0.max(map.eval(y, x1)?);
                    }
                    for &x2 in &reps[b] {
                        left.1 = left.1.min(map.eval(x2, y)?);
                        right.1 = right.1.min(map.eval(y, x2)?);
                    }
                }
                checked += 2;
                let (x1, x2, y) = (classes[a].hull[1], classes[b].hull[0], r3[0]);
                if !(left.0 < left.1) {
                    sink.push(Witness::new(vec![x1, x2, y], left.0, left.1));
                }
                if !(right.0 < right.1) {
                    sink.push(Witness::new(vec![x1, x2, y], right.0, right.1));
                }
            }
        }
    }

    Ok(PropertyReport::from_sink(
        Property::ClassStructure,
        partition.tolerance,
        checked,
        sink,
    ))
}

/// Given a symmetric seed pair, checks `F(s, t) = F(t, s)` for all values
/// `s, t` generated from the seeds up to `depth` nested applications.
///
/// For bisymmetric reflexive maps symmetry propagates to the whole
/// generated set; a witness here also certifies a bisymmetry defect.
pub fn symmetry_propagation_check(
    map: &BinaryMap,
    u: f64,
    v: f64,
    depth: usize,
) -> Result<PropertyReport, DichotomyError> {
    let seed = check_symmetric_at(map, u, v)?;
    if !seed.symmetric {
        return Err(DichotomyError::AsymmetricSeeds {
            u,
            v,
            lhs: seed.witness.lhs,
            rhs: seed.witness.rhs,
        });
    }
    let set = evaluate_value_set(map, u, v, depth)?;
    let values: Vec<f64> = set.values().iter().map(|v| v.value).collect();
    let tol = map.tolerance();
    let mut sink = WitnessSink::default();
    let mut checked = 0u64;
    for (i, &s) in values.iter().enumerate() {
        for &t in &values[i + 1..] {
            checked += 1;
            let (lhs, rhs) = (map.eval(s, t)?, map.eval(t, s)?);
            if (lhs - rhs).abs() > tol {
                sink.push(Witness::new(vec![s, t], lhs, rhs));
            }
        }
    }
    Ok(PropertyReport::from_sink(
        Property::SymmetryPropagation,
        tol,
        checked,
        sink,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    SymmetricEverywhere,
    NowhereSymmetric,
    HypothesisViolated,
    /// Mixed symmetry although every hypothesis holds on the sample.
    Inconclusive,
}

impl VerdictKind {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictKind::SymmetricEverywhere => "symmetric-everywhere",
            VerdictKind::NowhereSymmetric => "nowhere-symmetric",
            VerdictKind::HypothesisViolated => "hypothesis-violated",
            VerdictKind::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    Reflexive,
    PartiallyStrictlyIncreasing,
    Bisymmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub partition: SymPartition,
    /// Hypothesis checks and the class-structure check; empty for clean
    /// verdicts.
    pub reports: Vec<PropertyReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyVerdict {
    pub verdict: VerdictKind,
    pub failed_hypotheses: Vec<Hypothesis>,
    pub evidence: Evidence,
}

impl DichotomyVerdict {
    pub fn report(&self, property: Property) -> Option<&PropertyReport> {
        self.evidence
            .reports
            .iter()
            .find(|r| r.property == property)
    }
}

/// Classifies the map on `grid`.
///
/// All off-diagonal pairs symmetric gives `symmetric-everywhere`, none
/// gives `nowhere-symmetric`. A mixed sample runs the reflexivity and
/// strict-increase checks on `grid` and the bisymmetry sweep on a
/// [`HYPOTHESIS_QUAD_GRID`]-point subsample of it.
pub fn dichotomy_verdict(map: &BinaryMap, grid: &SampleGrid) -> Result<DichotomyVerdict, MapError> {
    let partition = partition_by_symmetry(map, grid)?;
    let clean = if partition.asymmetric_pairs == 0 {
        Some(VerdictKind::SymmetricEverywhere)
    } else if partition.symmetric_pairs == 0 {
        Some(VerdictKind::NowhereSymmetric)
    } else {
        None
    };
    if let Some(verdict) = clean {
        return Ok(DichotomyVerdict {
            verdict,
            failed_hypotheses: Vec::new(),
            evidence: Evidence {
                partition,
                reports: Vec::new(),
            },
        });
    }

    let reflexive = check_reflexive(map, grid)?;
    let increasing = check_partial_strict_increasing(map, grid)?;
    let bisymmetric = check_bisymmetry(map, &grid.subsample(HYPOTHESIS_QUAD_GRID))?;
    let structure = verify_class_structure(map, &partition)?;

    let failed_hypotheses: Vec<Hypothesis> = [
        (Hypothesis::Reflexive, &reflexive),
        (Hypothesis::PartiallyStrictlyIncreasing, &increasing),
        (Hypothesis::Bisymmetric, &bisymmetric),
    ]
    .into_iter()
    .filter(|(_, r)| !r.holds())
    .map(|(h, _)| h)
    .collect();
    let verdict = if failed_hypotheses.is_empty() {
        VerdictKind::Inconclusive
    } else {
        VerdictKind::HypothesisViolated
    };
    Ok(DichotomyVerdict {
        verdict,
        failed_hypotheses,
        evidence: Evidence {
            partition,
            reports: vec![reflexive, increasing, bisymmetric, structure],
        },
    })
}
