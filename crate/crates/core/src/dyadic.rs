//! Generator extraction on the dyadic rationals.
//!
//! Starting from `f(0) = u`, `f(1) = v`, every refinement level fills the
//! new midpoints with `f((d1 + d2) / 2) = F(f(d1), f(d2))` for adjacent
//! dyadics `d1 < d2`. If the map is a quasi-arithmetic mean the resulting
//! table samples its generator (normalized to `[u, v]`), and the map can
//! be rebuilt from a piecewise-linear interpolant of the table.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::axioms::{Property, PropertyReport, SampleGrid, Witness, WitnessSink};
use crate::maps::{make_quasi_arithmetic, BinaryMap, GeneratorSpec, Interval, MapError};

pub const DEPTH_CAP: u32 = 20;
pub const DEFAULT_DEPTH: u32 = 12;
const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DyadicError {
    #[error("depth {0} exceeds the cap of {DEPTH_CAP}")]
    DepthCap(u32),
    #[error("seeds must satisfy u < v inside the domain, got u = {u}, v = {v}")]
    InvalidSeeds { u: f64, v: f64 },
    #[error("F = {value} at dyadic {dyadic} escapes [{u}, {v}]; the map does not behave like a mean here")]
    DomainEscape {
        dyadic: f64,
        value: f64,
        u: f64,
        v: f64,
    },
    #[error("table is not strictly increasing at cell {index} ({left} -> {right})")]
    NonMonotone { index: usize, left: f64, right: f64 },
    #[error("level {level} is not available in a depth-{depth} table")]
    InvalidLevel { level: u32, depth: u32 },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Values `f(k / 2^depth)` for `k = 0..=2^depth`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicTable {
    pub u: f64,
    pub v: f64,
    pub depth: u32,
    pub values: Vec<f64>,
}

impl DyadicTable {
    pub fn cells(&self) -> usize {
        1usize << self.depth
    }

    pub fn dyadic(&self, k: usize) -> f64 {
        k as f64 / self.cells() as f64
    }

    /// The coarser table at `depth`: every `2^(self.depth - depth)`-th value.
    pub fn restrict(&self, depth: u32) -> Result<DyadicTable, DyadicError> {
        if depth > self.depth {
            return Err(DyadicError::InvalidLevel {
                level: depth,
                depth: self.depth,
            });
        }
        let stride = 1usize << (self.depth - depth);
        Ok(DyadicTable {
            u: self.u,
            v: self.v,
            depth,
            values: self.values.iter().step_by(stride).copied().collect(),
        })
    }

    fn first_non_increasing(&self) -> Option<usize> {
        self.values.windows(2).position(|w| !(w[1] > w[0]))
    }

    fn require_monotone(&self) -> Result<(), DyadicError> {
        match self.first_non_increasing() {
            None => Ok(()),
            Some(index) => Err(DyadicError::NonMonotone {
                index,
                left: self.values[index],
                right: self.values[index + 1],
            }),
        }
    }
}

/// Builds the depth-`depth` table of the generator through `u` and `v`.
pub fn build_dyadic_table(
    map: &BinaryMap,
    u: f64,
    v: f64,
    depth: u32,
) -> Result<DyadicTable, DyadicError> {
    if depth > DEPTH_CAP {
        return Err(DyadicError::DepthCap(depth));
    }
    let domain = map.domain();
    if !(u < v && domain.contains(u) && domain.contains(v)) {
        return Err(DyadicError::InvalidSeeds { u, v });
    }
    let tol = map.tolerance();
    let mut values = vec![u, v];
    for level in 1..=depth {
        let cells = 1usize << level;
        let mids: Vec<f64> = values
            .par_windows(2)
            .map(|w| map.eval(w[0], w[1]))
            .collect::<Result<_, _>>()?;
        if let Some(k) = mids.iter().position(|m| !(u - tol <= *m && *m <= v + tol)) {
            return Err(DyadicError::DomainEscape {
                dyadic: (2 * k + 1) as f64 / cells as f64,
                value: mids[k],
                u,
                v,
            });
        }
        let mut next = Vec::with_capacity(cells + 1);
        for (k, m) in mids.into_iter().enumerate() {
            next.push(values[k]);
            next.push(m);
        }
        next.push(v);
        values = next;
    }
    Ok(DyadicTable {
        u,
        v,
        depth,
        values,
    })
}

/// Strict increase of the table, compared exactly.
pub fn check_table_monotone(table: &DyadicTable) -> PropertyReport {
    let mut sink = WitnessSink::default();
    for (k, w) in table.values.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            sink.push(Witness::new(
                vec![table.dyadic(k), table.dyadic(k + 1)],
                w[0],
                w[1],
            ));
        }
    }
    PropertyReport::from_sink(Property::TableMonotone, 0.0, table.cells() as u64, sink)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Finite stand-in for density of `f(D)` in `[u, v]`: the cell gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub max_gap: f64,
    /// Index `k` of the widest cell `[f(k / 2^n), f((k + 1) / 2^n)]`.
    pub argmax: usize,
    pub min_gap: f64,
    pub gap_histogram: Vec<GapBin>,
}

pub fn density_report(table: &DyadicTable) -> Result<DensityReport, DyadicError> {
    table.require_monotone()?;
    let gaps: Vec<f64> = table.values.windows(2).map(|w| w[1] - w[0]).collect();
    let (mut argmax, mut max_gap, mut min_gap) = (0, f64::NEG_INFINITY, f64::INFINITY);
    for (k, &g) in gaps.iter().enumerate() {
        if g > max_gap {
            max_gap = g;
            argmax = k;
        }
        min_gap = min_gap.min(g);
    }
    let width = (max_gap - min_gap) / HISTOGRAM_BINS as f64;
    let mut gap_histogram: Vec<GapBin> = (0..HISTOGRAM_BINS)
        .map(|b| GapBin {
            lo: min_gap + width * b as f64,
            hi: if b + 1 == HISTOGRAM_BINS {
                max_gap
            } else {
                min_gap + width * (b + 1) as f64
            },
            count: 0,
        })
        .collect();
    for g in gaps {
        let bin = if width > 0.0 {
            (((g - min_gap) / width) as usize).min(HISTOGRAM_BINS - 1)
        } else {
            0
        };
        gap_histogram[bin].count += 1;
    }
    Ok(DensityReport {
        max_gap,
        argmax,
        min_gap,
        gap_histogram,
    })
}

/// Piecewise-linear interpolant through `(k / 2^n, values[k])`.
#[derive(Debug, Clone)]
pub struct TableInterpolant {
    values: Arc<Vec<f64>>,
    cells: usize,
}

impl TableInterpolant {
    /// `f(t)` for `t` in `[0, 1]` (clamped); exact at dyadic cells.
    pub fn eval(&self, t: f64) -> f64 {
        let s = t.clamp(0.0, 1.0) * self.cells as f64;
        let k = (s.floor() as usize).min(self.cells - 1);
        let frac = s - k as f64;
        if frac == 0.0 {
            return self.values[k];
        }
        self.values[k] + frac * (self.values[k + 1] - self.values[k])
    }
}

/// Piecewise-linear inverse of a strictly increasing table.
#[derive(Debug, Clone)]
pub struct TableInverse {
    values: Arc<Vec<f64>>,
    cells: usize,
}

impl TableInverse {
    /// `f^-1(x)` for `x` in `[u, v]` (clamped); exact at table values.
    pub fn eval(&self, x: f64) -> f64 {
        let values = &self.values;
        let x = x.clamp(values[0], values[self.cells]);
        let k = values
            .partition_point(|&w| w <= x)
            .saturating_sub(1)
            .min(self.cells - 1);
        let frac = (x - values[k]) / (values[k + 1] - values[k]);
        (k as f64 + frac) / self.cells as f64
    }
}

pub fn interpolate_table(table: &DyadicTable) -> Result<TableInterpolant, DyadicError> {
    table.require_monotone()?;
    Ok(TableInterpolant {
        values: Arc::new(table.values.clone()),
        cells: table.cells(),
    })
}

pub fn invert_table(table: &DyadicTable) -> Result<TableInverse, DyadicError> {
    table.require_monotone()?;
    Ok(TableInverse {
        values: Arc::new(table.values.clone()),
        cells: table.cells(),
    })
}

/// The quasi-arithmetic map generated by the interpolated table, on `[u, v]`.
pub fn reconstruct_map(table: &DyadicTable) -> Result<BinaryMap, DyadicError> {
    let forward = interpolate_table(table)?;
    let inverse = invert_table(table)?;
    let generator = GeneratorSpec::new(
        format!("dyadic-table(depth={})", table.depth),
        move |t| forward.eval(t),
        move |x| inverse.eval(x),
    )?;
    Ok(make_quasi_arithmetic(generator))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionReport {
    pub grid_size: usize,
    pub interval: Interval,
    pub max_abs_residual: f64,
    pub argmax: (f64, f64),
    /// `max |F(x, y) - F(y, x)|` of the source map on the same grid.
    pub symmetric_defect: f64,
}

/// Builds the table, rebuilds the map and compares it with the source on
/// every pair of `grid`, which must lie in `[u, v]`.
pub fn roundtrip_residual(
    map: &BinaryMap,
    u: f64,
    v: f64,
    depth: u32,
    grid: &SampleGrid,
) -> Result<ReconstructionReport, DyadicError> {
    let table = build_dyadic_table(map, u, v, depth)?;
    residual_against(map, &table, grid)
}

/// Residual of the map rebuilt from an existing table.
pub fn residual_against(
    map: &BinaryMap,
    table: &DyadicTable,
    grid: &SampleGrid,
) -> Result<ReconstructionReport, DyadicError> {
    let rebuilt = reconstruct_map(table)?;
    let p = grid.points();
    let rows: Vec<(f64, (f64, f64), f64)> = p
        .par_iter()
        .map(|&x| -> Result<_, DyadicError> {
            let mut best = (0.0f64, (x, p[0]));
            let mut defect = 0.0f64;
            for &y in p {
                let source = map.eval(x, y)?;
                let r = (source - rebuilt.eval(x, y)?).abs();
                if r > best.0 {
                    best = (r, (x, y));
                }
                defect = defect.max((source - map.eval(y, x)?).abs());
            }
            Ok((best.0, best.1, defect))
        })
        .collect::<Result<_, _>>()?;
    let mut max_abs_residual = 0.0;
    let mut argmax = (p[0], p[0]);
    let mut symmetric_defect = 0.0f64;
    for (r, at, d) in rows {
        if r > max_abs_residual {
            max_abs_residual = r;
            argmax = at;
        }
        symmetric_defect = symmetric_defect.max(d);
    }
    Ok(ReconstructionReport {
        grid_size: p.len(),
        interval: grid.interval(),
        max_abs_residual,
        argmax,
        symmetric_defect,
    })
}

/// Checks `f((d1 + d2) / 2) = F(f(d1), f(d2))` for all pairs of dyadics
/// at `level` whose midpoint is again a table cell, adjacent or not.
///
/// The table only enforces the identity for adjacent cells; for maps that
/// are symmetric and bisymmetric the rest follows, otherwise it generally
/// fails.
pub fn check_midpoint_identity(
    map: &BinaryMap,
    table: &DyadicTable,
    level: u32,
) -> Result<PropertyReport, DyadicError> {
    let coarse = table.restrict(level)?;
    let tol = map.tolerance();
    let mut sink = WitnessSink::default();
    let mut checked = 0u64;
    let n = coarse.values.len();
    for i in 0..n {
        // same parity keeps the midpoint on the grid
        for j in (i..n).step_by(2) {
            checked += 1;
            let (a, b) = (coarse.values[i], coarse.values[j]);
            let expected = coarse.values[(i + j) / 2];
            let got = map.eval(a, b)?;
            if (expected - got).abs() > tol {
                sink.push(Witness::new(
                    vec![coarse.dyadic(i), coarse.dyadic(j), a, b],
                    expected,
                    got,
                ));
            }
        }
    }
    Ok(PropertyReport::from_sink(
        Property::DyadicMidpoint,
        tol,
        checked,
        sink,
    ))
}
