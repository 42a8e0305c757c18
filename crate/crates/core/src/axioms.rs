//! Sampled checks of the axioms of binary maps, with witness extraction.
//!
//! Each checker is a pure function of a map and a [`SampleGrid`] and
//! returns a [`PropertyReport`]. Reports keep at most [`WITNESS_LIMIT`]
//! witnesses, in lexicographic order of their inputs, and count the rest.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::maps::{BinaryMap, Interval, MapError};

pub const WITNESS_LIMIT: usize = 32;
/// Default points per axis for pairwise and triple sweeps.
pub const DEFAULT_PAIR_GRID: usize = 101;
/// Default points per axis for the quadruple (bisymmetry) sweep.
pub const DEFAULT_QUAD_GRID: usize = 33;

/// Sorted sample points of an interval, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleGrid {
    interval: Interval,
    points: Vec<f64>,
    seed: u64,
}

impl SampleGrid {
    /// `n` equally spaced points.
    pub fn uniform(interval: Interval, n: usize) -> Result<Self, MapError> {
        Self::new(interval, n, 0)
    }

    /// Seed 0 gives the uniform grid; any other seed jitters each interior
    /// point by less than 0.4 of a cell, deterministically.
    pub fn new(interval: Interval, n: usize, seed: u64) -> Result<Self, MapError> {
        if n < 2 {
            return Err(MapError::InvalidParameter(format!(
                "a grid needs at least 2 points, got {n}"
            )));
        }
        let (lo, hi, w) = (interval.lo(), interval.hi(), interval.width());
        let last = (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| lo + w * (i as f64 / last)).collect();
        points[n - 1] = hi;
        if seed != 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cell = w / last;
            for p in &mut points[1..n - 1] {
                *p += rng.gen_range(-0.4..0.4) * cell;
            }
        }
        if points.windows(2).any(|p| p[1] <= p[0]) {
            return Err(MapError::InvalidParameter(format!(
                "{n} points do not fit strictly increasing in {interval}"
            )));
        }
        Ok(SampleGrid {
            interval,
            points,
            seed,
        })
    }

    /// A grid over explicit points; the interval is their hull.
    pub fn from_points(points: Vec<f64>) -> Result<Self, MapError> {
        if points.len() < 2 || points.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(MapError::InvalidParameter(
                "grid points must be at least two, finite and strictly increasing".into(),
            ));
        }
        let interval = Interval::new(points[0], points[points.len() - 1])?;
        Ok(SampleGrid {
            interval,
            points,
            seed: 0,
        })
    }

    /// `m` points of this grid at evenly spread indices, endpoints kept.
    pub fn subsample(&self, m: usize) -> SampleGrid {
        let n = self.points.len();
        if m >= n || m < 2 {
            return self.clone();
        }
        let mut points: Vec<f64> = (0..m)
            .map(|i| self.points[(i * (n - 1) + (m - 1) / 2) / (m - 1)])
            .collect();
        points.dedup();
        SampleGrid {
            interval: self.interval,
            points,
            seed: self.seed,
        }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Reflexive,
    PartiallyStrictlyIncreasing,
    Symmetric,
    Bisymmetric,
    Cancellative,
    Mean,
    StrictMean,
    Codomain,
    TableMonotone,
    DyadicMidpoint,
    ClassStructure,
    SymmetryPropagation,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::Reflexive => "reflexive",
            Property::PartiallyStrictlyIncreasing => "partially-strictly-increasing",
            Property::Symmetric => "symmetric",
            Property::Bisymmetric => "bisymmetric",
            Property::Cancellative => "cancellative",
            Property::Mean => "mean",
            Property::StrictMean => "strict-mean",
            Property::Codomain => "codomain",
            Property::TableMonotone => "table-monotone",
            Property::DyadicMidpoint => "dyadic-midpoint",
            Property::ClassStructure => "class-structure",
            Property::SymmetryPropagation => "symmetry-propagation",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnSample,
    Fails,
}

/// Inputs of a violation with both evaluated sides; `diff = rhs - lhs`.
///
/// The meaning of `inputs` depends on the property:
/// reflexive `[x]`; symmetric and mean `[x, y]`; bisymmetric
/// `[x, y, u, v]`; increasing and cancellative compare `F(x1, y1)` (lhs)
/// with `F(x2, y2)` (rhs) and carry `[x1, y1, x2, y2]`; the dyadic
/// midpoint identity carries `[d1, d2, f(d1), f(d2)]` with the table value
/// at `(d1 + d2) / 2` as lhs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

impl Witness {
    pub fn new(inputs: Vec<f64>, lhs: f64, rhs: f64) -> Self {
        Witness {
            inputs,
            lhs,
            rhs,
            diff: rhs - lhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub symmetric: u64,
    pub asymmetric: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub samples_checked: u64,
    pub witnesses: Vec<Witness>,
    /// Violations found beyond the retained witnesses.
    pub truncated_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_observed_slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain_violations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_counts: Option<PairCounts>,
}

impl PropertyReport {
    pub(crate) fn from_sink(
        property: Property,
        tolerance: f64,
        samples_checked: u64,
        sink: WitnessSink,
    ) -> Self {
        let verdict = if sink.total == 0 {
            Verdict::HoldsOnSample
        } else {
            Verdict::Fails
        };
        PropertyReport {
            property,
            verdict,
            tolerance,
            samples_checked,
            truncated_count: sink.total - sink.kept.len() as u64,
            witnesses: sink.kept,
            min_observed_slope: None,
            codomain_violations: None,
            pair_counts: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnSample
    }

    pub fn violation_count(&self) -> u64 {
        self.witnesses.len() as u64 + self.truncated_count
    }

    /// Re-evaluates every witness against `map` and returns the ones that
    /// no longer violate the property. Structural properties
    /// (class structure, table monotonicity) cannot be replayed from the
    /// map alone and always pass.
    pub fn unconfirmed_witnesses(&self, map: &BinaryMap) -> Result<Vec<Witness>, MapError> {
        let mut bad = Vec::new();
        for w in &self.witnesses {
            if !confirms(map, self.property, self.tolerance, w)? {
                bad.push(w.clone());
            }
        }
        Ok(bad)
    }
}

fn confirms(map: &BinaryMap, property: Property, tol: f64, w: &Witness) -> Result<bool, MapError> {
    let f = |x, y| map.eval(x, y);
    let i = &w.inputs;
    let ok = match property {
        Property::Reflexive => (f(i[0], i[0])? - i[0]).abs() > tol,
        Property::Symmetric | Property::SymmetryPropagation => {
            (f(i[0], i[1])? - f(i[1], i[0])?).abs() > tol
        }
        Property::Bisymmetric => {
            let lhs = f(f(i[0], i[1])?, f(i[2], i[3])?)?;
            let rhs = f(f(i[0], i[2])?, f(i[1], i[3])?)?;
            (lhs - rhs).abs() > tol
        }
        Property::PartiallyStrictlyIncreasing => {
            let ordered = (i[0] == i[2] && i[1] < i[3]) || (i[1] == i[3] && i[0] < i[2]);
            ordered && f(i[2], i[3])? <= f(i[0], i[1])?
        }
        Property::Cancellative => {
            let moved = (i[0] - i[2]).abs().max((i[1] - i[3]).abs());
            moved > tol && (f(i[0], i[1])? - f(i[2], i[3])?).abs() <= tol
        }
        Property::Mean | Property::StrictMean => {
            let (lo, hi) = (i[0].min(i[1]), i[0].max(i[1]));
            let v = f(i[0], i[1])?;
            let loose = v < lo - tol || v > hi + tol;
            let strict = property == Property::StrictMean && i[0] != i[1] && !(lo < v && v < hi);
            loose || strict
        }
        Property::Codomain => !map.domain().contains_within(f(i[0], i[1])?, tol),
        Property::DyadicMidpoint => (f(i[2], i[3])? - w.lhs).abs() > tol,
        Property::TableMonotone | Property::ClassStructure => true,
    };
    Ok(ok)
}

/// Bounded witness collector. Witnesses must be pushed in input order.
#[derive(Debug, Default)]
pub(crate) struct WitnessSink {
    pub(crate) kept: Vec<Witness>,
    pub(crate) total: u64,
}

impl WitnessSink {
    pub(crate) fn push(&mut self, w: Witness) {
        self.total += 1;
        if self.kept.len() < WITNESS_LIMIT {
            self.kept.push(w);
        }
    }

    /// Appends `other`, which covers inputs after everything in `self`.
    pub(crate) fn merge(mut self, other: WitnessSink) -> WitnessSink {
        self.total += other.total;
        let room = WITNESS_LIMIT.saturating_sub(self.kept.len());
        self.kept.extend(other.kept.into_iter().take(room));
        self
    }
}

/// `F(p_i, p_j)` for every ordered pair of grid points.
#[derive(Debug, Clone)]
pub struct ValueTable {
    points: Vec<f64>,
    values: Vec<f64>,
}

impl ValueTable {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.points.len() + j]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn tabulate(map: &BinaryMap, points: &[f64]) -> Result<ValueTable, MapError> {
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&x| points.iter().map(|&y| map.eval(x, y)).collect())
        .collect::<Result<_, _>>()?;
    Ok(ValueTable {
        points: points.to_vec(),
        values: rows.concat(),
    })
}

/// `|F(x, x) - x| <= tol` at every grid point.
pub fn check_reflexive(map: &BinaryMap, grid: &SampleGrid) -> Result<PropertyReport, MapError> {
    let tol = map.tolerance();
    let mut sink = WitnessSink::default();
    for &x in grid.points() {
        let v = map.eval(x, x)?;
        if (v - x).abs() > tol {
            sink.push(Witness::new(vec![x], v, x));
        }
    }
    Ok(PropertyReport::from_sink(
        Property::Reflexive,
        tol,
        grid.len() as u64,
        sink,
    ))
}

/// Outcome of a single symmetry test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryAt {
    pub symmetric: bool,
    /// `inputs = [a, b]`, `lhs = F(a, b)`, `rhs = F(b, a)`.
    pub witness: Witness,
}

pub fn check_symmetric_at(map: &BinaryMap, a: f64, b: f64) -> Result<SymmetryAt, MapError> {
    let lhs = map.eval(a, b)?;
    let rhs = map.eval(b, a)?;
    Ok(SymmetryAt {
        symmetric: (lhs - rhs).abs() <= map.tolerance(),
        witness: Witness::new(vec![a, b], lhs, rhs),
    })
}

/// Classifies every unordered off-diagonal pair as symmetric or not.
pub fn check_symmetry(map: &BinaryMap, grid: &SampleGrid) -> Result<PropertyReport, MapError> {
    let tol = map.tolerance();
    let table = tabulate(map, grid.points())?;
    let p = grid.points();
    let mut sink = WitnessSink::default();
    let mut counts = PairCounts {
        symmetric: 0,
        asymmetric: 0,
    };
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let (lhs, rhs) = (table.get(i, j), table.get(j, i));
            if (lhs - rhs).abs() <= tol {
                counts.symmetric += 1;
            } else {
                counts.asymmetric += 1;
                sink.push(Witness::new(vec![p[i], p[j]], lhs, rhs));
            }
        }
    }
    let mut report = PropertyReport::from_sink(
        Property::Symmetric,
        tol,
        counts.symmetric + counts.asymmetric,
        sink,
    );
    report.pair_counts = Some(counts);
    Ok(report)
}

/// Brute-force sweep of `F(F(x,y),F(u,v)) = F(F(x,u),F(y,v))` over all
/// grid quadruples.
///
/// Quadruples whose inner values leave the domain are counted in
/// `codomain_violations` and not treated as bisymmetry witnesses.
pub fn check_bisymmetry(map: &BinaryMap, grid: &SampleGrid) -> Result<PropertyReport, MapError> {
    let tol = map.tolerance();
    let domain = map.domain();
    let table = tabulate(map, grid.points())?;
    let p = grid.points();
    let n = p.len();
    let inside = |v: f64| domain.contains_within(v, tol);

    let per_x: Vec<(WitnessSink, u64)> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<(WitnessSink, u64), MapError> {
            let mut sink = WitnessSink::default();
            let mut skipped = 0u64;
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let (a, b) = (table.get(i, j), table.get(k, l));
                        let (c, d) = (table.get(i, k), table.get(j, l));
                        if !(inside(a) && inside(b) && inside(c) && inside(d)) {
                            skipped += 1;
                            continue;
                        }
                        let lhs = map.eval(a, b)?;
                        let rhs = map.eval(c, d)?;
                        if (lhs - rhs).abs() > tol {
                            sink.push(Witness::new(vec![p[i], p[j], p[k], p[l]], lhs, rhs));
                        }
                    }
                }
            }
            Ok((sink, skipped))
        })
        .collect::<Result<_, _>>()?;

    let mut sink = WitnessSink::default();
    let mut skipped = 0;
    for (s, k) in per_x {
        sink = sink.merge(s);
        skipped += k;
    }
    let mut report = PropertyReport::from_sink(Property::Bisymmetric, tol, (n as u64).pow(4), sink);
    report.codomain_violations = Some(skipped);
    Ok(report)
}

/// Both sections `x -> F(x, y0)` and `y -> F(x0, y)` must increase
/// strictly between consecutive grid points. The comparison is exact;
/// `min_observed_slope` exposes near-flat sections.
pub fn check_partial_strict_increasing(
    map: &BinaryMap,
    grid: &SampleGrid,
) -> Result<PropertyReport, MapError> {
    let table = tabulate(map, grid.points())?;
    let p = grid.points();
    let n = p.len();
    let mut sink = WitnessSink::default();
    let mut min_slope = f64::INFINITY;
    let mut steps = 0u64;
    // x-sections, fixed y ascending
    for j in 0..n {
        for i in 0..n - 1 {
            let (lhs, rhs) = (table.get(i, j), table.get(i + 1, j));
            min_slope = min_slope.min((rhs - lhs) / (p[i + 1] - p[i]));
            steps += 1;
            if !(rhs > lhs) {
                sink.push(Witness::new(vec![p[i], p[j], p[i + 1], p[j]], lhs, rhs));
            }
        }
    }
    // y-sections, fixed x ascending
    for i in 0..n {
        for j in 0..n - 1 {
            let (lhs, rhs) = (table.get(i, j), table.get(i, j + 1));
            min_slope = min_slope.min((rhs - lhs) / (p[j + 1] - p[j]));
            steps += 1;
            if !(rhs > lhs) {
                sink.push(Witness::new(vec![p[i], p[j], p[i], p[j + 1]], lhs, rhs));
            }
        }
    }
    let mut report =
        PropertyReport::from_sink(Property::PartiallyStrictlyIncreasing, 0.0, steps, sink);
    report.min_observed_slope = Some(min_slope);
    Ok(report)
}

/// `F(x, a) = F(y, a)` or `F(a, x) = F(a, y)` within tolerance, with
/// `|x - y| > tol`, is a witness against cancellativity.
pub fn check_cancellative(map: &BinaryMap, grid: &SampleGrid) -> Result<PropertyReport, MapError> {
    let tol = map.tolerance();
    let table = tabulate(map, grid.points())?;
    let p = grid.points();
    let n = p.len();
    let mut sink = WitnessSink::default();
    let mut checked = 0u64;
    // left cancellation: F(x, a) = F(y, a)
    for i in 0..n {
        for k in i + 1..n {
            if (p[k] - p[i]).abs() <= tol {
                continue;
            }
            for a in 0..n {
                checked += 1;
                let (lhs, rhs) = (table.get(i, a), table.get(k, a));
                if (lhs - rhs).abs() <= tol {
                    sink.push(Witness::new(vec![p[i], p[a], p[k], p[a]], lhs, rhs));
                }
            }
        }
    }
    // right cancellation: F(a, x) = F(a, y)
    for a in 0..n {
        for i in 0..n {
            for k in i + 1..n {
                if (p[k] - p[i]).abs() <= tol {
                    continue;
                }
                checked += 1;
                let (lhs, rhs) = (table.get(a, i), table.get(a, k));
                if (lhs - rhs).abs() <= tol {
                    sink.push(Witness::new(vec![p[a], p[i], p[a], p[k]], lhs, rhs));
                }
            }
        }
    }
    Ok(PropertyReport::from_sink(
        Property::Cancellative,
        tol,
        checked,
        sink,
    ))
}

/// `min(x, y) <= F(x, y) <= max(x, y)` within tolerance; with `strict`,
/// additionally `min < F < max` exactly whenever `x != y`.
pub fn check_mean_bounds(
    map: &BinaryMap,
    grid: &SampleGrid,
    strict: bool,
) -> Result<PropertyReport, MapError> {
    let tol = map.tolerance();
    let table = tabulate(map, grid.points())?;
    let p = grid.points();
    let mut sink = WitnessSink::default();
    for i in 0..p.len() {
        for j in 0..p.len() {
            let v = table.get(i, j);
            let (lo, hi) = (p[i].min(p[j]), p[i].max(p[j]));
            let loose = v < lo - tol || v > hi + tol;
            let strict_fail = strict && i != j && !(lo < v && v < hi);
            if loose || strict_fail {
                let bound = if v <= lo { lo } else { hi };
                sink.push(Witness::new(vec![p[i], p[j]], v, bound));
            }
        }
    }
    let property = if strict {
        Property::StrictMean
    } else {
        Property::Mean
    };
    Ok(PropertyReport::from_sink(
        property,
        tol,
        (p.len() * p.len()) as u64,
        sink,
    ))
}

/// `F(x, y)` stays in the domain (within tolerance) on the grid.
pub fn check_codomain(map: &BinaryMap, grid: &SampleGrid) -> Result<PropertyReport, MapError> {
    let tol = map.tolerance();
    let domain = map.domain();
    let table = tabulate(map, grid.points())?;
    let p = grid.points();
    let mut sink = WitnessSink::default();
    for i in 0..p.len() {
        for j in 0..p.len() {
            let v = table.get(i, j);
            if !domain.contains_within(v, tol) {
                let bound = v.clamp(domain.lo(), domain.hi());
                sink.push(Witness::new(vec![p[i], p[j]], v, bound));
            }
        }
    }
    Ok(PropertyReport::from_sink(
        Property::Codomain,
        tol,
        (p.len() * p.len()) as u64,
        sink,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{builtin, make_weighted_affine, MonotoneBijection, WeightedAffineSpec};

    fn unit_grid(n: usize) -> SampleGrid {
        SampleGrid::uniform(Interval::UNIT, n).unwrap()
    }

    fn weighted(a: f64, b: f64, c: f64) -> BinaryMap {
        make_weighted_affine(
            WeightedAffineSpec::new(MonotoneBijection::identity(), a, b, c),
            Interval::UNIT,
        )
        .unwrap()
    }

    #[test]
    fn grid_invariants() {
        let g = SampleGrid::new(Interval::new(1.0, 3.0).unwrap(), 17, 42).unwrap();
        assert_eq!(g.points()[0], 1.0);
        assert_eq!(g.points()[16], 3.0);
        assert!(g.points().windows(2).all(|w| w[1] > w[0]));
        let again = SampleGrid::new(Interval::new(1.0, 3.0).unwrap(), 17, 42).unwrap();
        assert_eq!(g, again);
        assert!(SampleGrid::uniform(Interval::UNIT, 1).is_err());
        assert!(SampleGrid::from_points(vec![0.3, 0.2]).is_err());
    }

    #[test]
    fn uniform_grids_nest() {
        let coarse = unit_grid(9);
        let fine = unit_grid(17);
        for (i, x) in coarse.points().iter().enumerate() {
            assert_eq!(*x, fine.points()[2 * i]);
        }
    }

    #[test]
    fn subsample_keeps_endpoints_and_grid_points() {
        let g = unit_grid(101);
        let s = g.subsample(17);
        assert_eq!(s.len(), 17);
        assert_eq!(s.points()[0], 0.0);
        assert_eq!(s.points()[16], 1.0);
        assert!(s.points().iter().all(|x| g.points().contains(x)));
    }

    #[test]
    fn reflexive_examples() {
        let r = check_reflexive(
            &builtin("arithmetic", Interval::UNIT).unwrap(),
            &unit_grid(101),
        )
        .unwrap();
        assert!(r.holds());
        assert_eq!(r.samples_checked, 101);

        let r = check_reflexive(&weighted(0.5, 0.5, 0.1), &unit_grid(11)).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witnesses.iter().find(|w| w.inputs == vec![0.2]).unwrap();
        assert!((w.lhs - 0.3).abs() < 1e-15);

        let r = check_reflexive(
            &builtin("paper-example-2", Interval::UNIT).unwrap(),
            &unit_grid(101),
        )
        .unwrap();
        assert!(r.holds());
    }

    #[test]
    fn symmetric_at_examples() {
        let e1 = builtin("paper-example-1", Interval::UNIT).unwrap();
        let s = check_symmetric_at(&e1, 0.6, 0.7).unwrap();
        assert!(s.symmetric);
        assert!((s.witness.lhs - 0.65).abs() < 1e-15);
        let s = check_symmetric_at(&e1, 0.2, 0.6).unwrap();
        assert!(!s.symmetric);
        assert!((s.witness.lhs - 0.346410).abs() < 1e-6);
        assert!((s.witness.rhs - 0.3).abs() < 1e-12);
        for b in crate::maps::Builtin::catalog() {
            let m = b.into_map(b.default_domain()).unwrap();
            let x = m.domain().lo() + 0.3 * m.domain().width();
            assert!(check_symmetric_at(&m, x, x).unwrap().symmetric);
        }
    }

    #[test]
    fn symmetry_classification() {
        let g = builtin("geometric", Interval::new(1.0, 4.0).unwrap()).unwrap();
        let r = check_symmetry(&g, &SampleGrid::uniform(g.domain(), 41).unwrap()).unwrap();
        assert_eq!(r.pair_counts.unwrap().asymmetric, 0);
        assert!(r.holds());

        let r = check_symmetry(&weighted(0.3, 0.7, 0.0), &unit_grid(41)).unwrap();
        assert_eq!(r.pair_counts.unwrap().symmetric, 0);
        assert_eq!(r.pair_counts.unwrap().asymmetric, 41 * 40 / 2);
        assert_eq!(r.witnesses.len(), WITNESS_LIMIT);
        assert_eq!(r.truncated_count, 41 * 40 / 2 - WITNESS_LIMIT as u64);

        let e2 = builtin("paper-example-2", Interval::UNIT).unwrap();
        let c = check_symmetry(&e2, &unit_grid(21))
            .unwrap()
            .pair_counts
            .unwrap();
        assert!(c.symmetric > 0 && c.asymmetric > 0);
    }

    #[test]
    fn bisymmetry_examples() {
        let a = builtin("arithmetic", Interval::UNIT).unwrap();
        assert!(check_bisymmetry(&a, &unit_grid(9)).unwrap().holds());

        let e1 = builtin("paper-example-1", Interval::UNIT).unwrap();
        let r = check_bisymmetry(&e1, &unit_grid(9)).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(!r.witnesses.is_empty());
        assert!(r.unconfirmed_witnesses(&e1).unwrap().is_empty());

        let e2 = builtin("paper-example-2", Interval::UNIT).unwrap();
        assert!(check_bisymmetry(&e2, &unit_grid(9)).unwrap().holds());
    }

    #[test]
    fn bisymmetry_separates_codomain_escapes() {
        // c = 0.1 pushes F(1, 1) = 1.1 out of [0, 1].
        let m = weighted(0.5, 0.5, 0.1);
        let r = check_bisymmetry(&m, &unit_grid(5)).unwrap();
        assert!(r.codomain_violations.unwrap() > 0);
        assert!(r.unconfirmed_witnesses(&m).unwrap().is_empty());
    }

    #[test]
    fn strict_increase_examples() {
        let p3 = builtin("power(3)", Interval::new(1.0, 2.0).unwrap()).unwrap();
        let r =
            check_partial_strict_increasing(&p3, &SampleGrid::uniform(p3.domain(), 101).unwrap())
                .unwrap();
        assert!(r.holds());
        assert!(r.min_observed_slope.unwrap() > 0.0);

        let e2 = builtin("paper-example-2", Interval::UNIT).unwrap();
        let r = check_partial_strict_increasing(&e2, &unit_grid(11)).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        // the section y0 = 0.8 is flat at 0.8 for x in [1/2, 1]
        let all = check_partial_strict_increasing(
            &e2.clone(),
            &SampleGrid::from_points(vec![0.5, 0.6, 0.7, 0.8]).unwrap(),
        )
        .unwrap();
        assert!(all
            .witnesses
            .iter()
            .any(|w| w.inputs[1] == 0.8 && w.inputs[3] == 0.8 && w.lhs == 0.8 && w.rhs == 0.8));

        let min = builtin("min", Interval::UNIT).unwrap();
        assert!(!check_partial_strict_increasing(&min, &unit_grid(11))
            .unwrap()
            .holds());
    }

    #[test]
    fn cancellative_examples() {
        let a = builtin("arithmetic", Interval::UNIT).unwrap();
        assert!(check_cancellative(&a, &unit_grid(41)).unwrap().holds());

        let e2 = builtin("paper-example-2", Interval::UNIT).unwrap();
        let grid = SampleGrid::from_points(vec![0.6, 0.7, 0.8]).unwrap();
        let r = check_cancellative(&e2, &grid).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r
            .witnesses
            .iter()
            .any(|w| w.inputs == vec![0.6, 0.8, 0.7, 0.8] && w.lhs == 0.8 && w.rhs == 0.8));
        assert!(r.unconfirmed_witnesses(&e2).unwrap().is_empty());
    }

    #[test]
    fn mean_bound_examples() {
        let d = Interval::new(1.0, 2.0).unwrap();
        let h = builtin("harmonic", d).unwrap();
        assert!(
            check_mean_bounds(&h, &SampleGrid::uniform(d, 101).unwrap(), true)
                .unwrap()
                .holds()
        );

        let pl = builtin("projection-left", Interval::UNIT).unwrap();
        assert!(check_mean_bounds(&pl, &unit_grid(21), false)
            .unwrap()
            .holds());
        let strict = check_mean_bounds(&pl, &unit_grid(21), true).unwrap();
        assert_eq!(strict.property, Property::StrictMean);
        assert!(!strict.holds());
        assert!(strict.unconfirmed_witnesses(&pl).unwrap().is_empty());

        assert!(
            check_mean_bounds(&weighted(0.3, 0.7, 0.0), &unit_grid(101), true)
                .unwrap()
                .holds()
        );
    }

    #[test]
    fn codomain_check_flags_escape() {
        let m = weighted(0.5, 0.5, 0.1);
        let r = check_codomain(&m, &unit_grid(11)).unwrap();
        assert!(!r.holds());
        assert!(r.unconfirmed_witnesses(&m).unwrap().is_empty());
        let a = builtin("arithmetic", Interval::UNIT).unwrap();
        assert!(check_codomain(&a, &unit_grid(11)).unwrap().holds());
    }

    #[test]
    fn witness_sink_merge_keeps_order_and_totals() {
        let mut a = WitnessSink::default();
        for i in 0..30 {
            a.push(Witness::new(vec![i as f64], 0.0, 1.0));
        }
        let mut b = WitnessSink::default();
        for i in 30..40 {
            b.push(Witness::new(vec![i as f64], 0.0, 1.0));
        }
        let m = a.merge(b);
        assert_eq!(m.total, 40);
        assert_eq!(m.kept.len(), WITNESS_LIMIT);
        assert_eq!(m.kept[31].inputs, vec![31.0]);
    }

    #[test]
    fn report_json_shape() {
        let r = check_reflexive(&weighted(0.5, 0.5, 0.1), &unit_grid(3)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "property",
            "verdict",
            "tolerance",
            "samples_checked",
            "witnesses",
            "truncated_count",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["property"], "reflexive");
        assert_eq!(v["verdict"], "fails");
        let w = &v["witnesses"][0];
        for key in ["inputs", "lhs", "rhs", "diff"] {
            assert!(w.get(key).is_some(), "missing witness {key}");
        }
    }
}
