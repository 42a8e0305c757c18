//! Intervals, binary maps and the built-in catalog.
//!
//! A [`BinaryMap`] is an immutable, thread-safe handle to a rule
//! `(x, y) -> F(x, y)` on a square `I x I`. Maps come from four sources:
//! the named built-ins, a quasi-arithmetic generator, the weighted-affine
//! form `k^-1(a k(x) + b k(y) + c)`, or a compiled DSL program.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative factor of the equality tolerance, see [`Interval::eps_eq`].
pub const EPS_FACTOR: f64 = 1e-9;

/// Points used when a constructor validates a generator by sampling.
const VALIDATION_SAMPLES: usize = 257;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("invalid interval [{lo}, {hi}]: endpoints must be finite with lo < hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("{coord} = {value} lies outside the domain {domain}")]
    DomainViolation {
        coord: Coord,
        value: f64,
        domain: Interval,
    },
    #[error("evaluation at ({x}, {y}) failed: {reason}")]
    Evaluation { x: f64, y: f64, reason: String },
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("affine combination {value} at ({x}, {y}) leaves the range of k")]
    RangeViolation { x: f64, y: f64, value: f64 },
    #[error("unknown built-in map `{0}`")]
    UnknownBuiltin(String),
    #[error("built-in `{name}` is not defined on {domain}: {reason}")]
    IncompatibleDomain {
        name: String,
        domain: Interval,
        reason: &'static str,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Which argument of a map an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    X,
    Y,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coord::X => "x",
            Coord::Y => "y",
        })
    }
}

/// A proper, closed, finite interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self, MapError> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(MapError::InvalidInterval { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_within(&self, x: f64, tol: f64) -> bool {
        self.lo - tol <= x && x <= self.hi + tol
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Absolute equality tolerance shared by every checker:
    /// `1e-9 * max(1, hi - lo)`.
    pub fn eps_eq(&self) -> f64 {
        EPS_FACTOR * self.width().max(1.0)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Rule = Arc<dyn Fn(f64, f64) -> Result<f64, MapError> + Send + Sync>;

/// Where a map came from. Serialized into reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum MapKind {
    Builtin { name: String },
    GeneratorBased { generator: String },
    WeightedAffine { k: String, a: f64, b: f64, c: f64 },
    DslCompiled,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::Builtin { name } => f.write_str(name),
            MapKind::GeneratorBased { generator } => write!(f, "quasi-arithmetic({generator})"),
            MapKind::WeightedAffine { k, a, b, c } => {
                write!(f, "weighted-affine(k={k}, a={a}, b={b}, c={c})")
            }
            MapKind::DslCompiled => f.write_str("dsl"),
        }
    }
}

/// An evaluable binary map with a declared domain.
#[derive(Clone)]
pub struct BinaryMap {
    domain: Interval,
    kind: MapKind,
    tolerance: f64,
    rule: Rule,
}

impl fmt::Debug for BinaryMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryMap")
            .field("domain", &self.domain)
            .field("kind", &self.kind)
            .field("tolerance", &self.tolerance)
            .finish_non_exhaustive()
    }
}

impl BinaryMap {
    /// Wraps a raw rule. The rule only ever sees arguments inside `domain`.
    pub fn from_rule(domain: Interval, kind: MapKind, rule: Rule) -> Self {
        BinaryMap {
            domain,
            kind,
            tolerance: domain.eps_eq(),
            rule,
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    /// Equality tolerance used by every checker run against this map.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Evaluates `F(x, y)`.
    ///
    /// Arguments within `tolerance` of the domain are clamped onto it, so
    /// that rounding in composed expressions such as `F(F(x, y), z)` does
    /// not register as a domain violation. The result must be finite.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64, MapError> {
        let x = self.admit(Coord::X, x)?;
        let y = self.admit(Coord::Y, y)?;
        let value = (self.rule)(x, y)?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(MapError::Evaluation {
                x,
                y,
                reason: format!("non-finite value {value}"),
            })
        }
    }

    fn admit(&self, coord: Coord, value: f64) -> Result<f64, MapError> {
        if self.domain.contains_within(value, self.tolerance) {
            Ok(value.clamp(self.domain.lo, self.domain.hi))
        } else {
            Err(MapError::DomainViolation {
                coord,
                value,
                domain: self.domain,
            })
        }
    }
}

/// A strictly monotone continuous `f : [0, 1] -> target` with its inverse.
#[derive(Clone)]
pub struct GeneratorSpec {
    forward: RealFn,
    inverse: RealFn,
    target: Interval,
    label: String,
}

impl fmt::Debug for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorSpec")
            .field("label", &self.label)
            .field("target", &self.target)
            .finish_non_exhaustive()
    }
}

impl GeneratorSpec {
    /// Builds a generator from a forward map on `[0, 1]` and its inverse.
    ///
    /// The target interval is the image of the forward map. Monotonicity
    /// and the round trip `f(f^-1(x)) = x` are checked on a sample.
    pub fn new<F, G>(label: impl Into<String>, forward: F, inverse: G) -> Result<Self, MapError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (f0, f1) = (forward(0.0), forward(1.0));
        let target = Interval::new(f0.min(f1), f0.max(f1)).map_err(|_| {
            MapError::InvalidGenerator(format!(
                "forward(0) = {f0} and forward(1) = {f1} do not span a proper interval"
            ))
        })?;
        let spec = GeneratorSpec {
            forward: Arc::new(forward),
            inverse: Arc::new(inverse),
            target,
            label: label.into(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `f(t) = lo + t (hi - lo)`: generates the arithmetic mean.
    pub fn affine(target: Interval) -> Self {
        let (lo, w) = (target.lo, target.width());
        GeneratorSpec {
            forward: Arc::new(move |t| lo + t * w),
            inverse: Arc::new(move |x| (x - lo) / w),
            target,
            label: "affine".into(),
        }
    }

    /// Generator of the power mean of order `p` on `target`; `p = 0` gives
    /// the geometric mean.
    pub fn power(p: f64, target: Interval) -> Result<Self, MapError> {
        if !p.is_finite() {
            return Err(MapError::InvalidParameter(format!("power exponent {p}")));
        }
        let (lo, hi) = (target.lo, target.hi);
        if lo < 0.0 || (p <= 0.0 && lo <= 0.0) {
            return Err(MapError::InvalidGenerator(format!(
                "power({p}) generator needs a positive target, got {target}"
            )));
        }
        if p == 0.0 {
            let (llo, lhi) = (lo.ln(), hi.ln());
            GeneratorSpec::new(
                "power(0)",
                move |t| (llo + t * (lhi - llo)).exp(),
                move |x| (x.ln() - llo) / (lhi - llo),
            )?
            .snap_target(target)
        } else {
            let (plo, phi) = (lo.powf(p), hi.powf(p));
            GeneratorSpec::new(
                format!("power({p})"),
                move |t| (plo + t * (phi - plo)).powf(1.0 / p),
                move |x| (x.powf(p) - plo) / (phi - plo),
            )?
            .snap_target(target)
        }
    }

    /// `f(t) = lo + (hi - lo) (e^(lambda t) - 1) / (e^lambda - 1)`.
    pub fn exponential(lambda: f64, target: Interval) -> Result<Self, MapError> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(MapError::InvalidParameter(format!(
                "exponential rate must be finite and nonzero, got {lambda}"
            )));
        }
        let (lo, w) = (target.lo, target.width());
        let scale = lambda.exp_m1();
        GeneratorSpec::new(
            format!("exponential({lambda})"),
            move |t| lo + w * (lambda * t).exp_m1() / scale,
            move |x| ((x - lo) / w * scale).ln_1p() / lambda,
        )?
        .snap_target(target)
    }

    /// Replaces the computed image by the intended `target` when the two
    /// differ by rounding only, so that the endpoints stay in the domain.
    fn snap_target(mut self, target: Interval) -> Result<Self, MapError> {
        let tol = target.eps_eq();
        if (self.target.lo - target.lo).abs() > tol || (self.target.hi - target.hi).abs() > tol {
            return Err(MapError::InvalidGenerator(format!(
                "{} maps onto {}, not {target}",
                self.label, self.target
            )));
        }
        self.target = target;
        Ok(self)
    }

    pub fn forward(&self, t: f64) -> f64 {
        (self.forward)(t)
    }

    pub fn inverse(&self, x: f64) -> f64 {
        (self.inverse)(x)
    }

    pub fn target(&self) -> Interval {
        self.target
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn validate(&self) -> Result<(), MapError> {
        let n = VALIDATION_SAMPLES - 1;
        let tol = self.target.eps_eq();
        let values: Vec<f64> = (0..=n).map(|i| self.forward(i as f64 / n as f64)).collect();
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(MapError::InvalidGenerator(format!(
                "forward produced {bad}"
            )));
        }
        let increasing = values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = values.windows(2).all(|w| w[1] < w[0]);
        if !increasing && !decreasing {
            return Err(MapError::InvalidGenerator(format!(
                "{} is not strictly monotone on [0, 1]",
                self.label
            )));
        }
        for i in 0..=n {
            let x = self.target.lo + self.target.width() * i as f64 / n as f64;
            let back = self.forward(self.inverse(x));
            if !((back - x).abs() <= tol) {
                return Err(MapError::InvalidGenerator(format!(
                    "round trip f(f^-1({x})) = {back} misses by more than {tol}"
                )));
            }
        }
        Ok(())
    }
}

/// Builds `F(x, y) = f((f^-1(x) + f^-1(y)) / 2)` on the generator's target.
pub fn make_quasi_arithmetic(generator: GeneratorSpec) -> BinaryMap {
    let kind = MapKind::GeneratorBased {
        generator: generator.label.clone(),
    };
    let domain = generator.target;
    let g = generator;
    BinaryMap::from_rule(
        domain,
        kind,
        Arc::new(move |x, y| Ok(g.forward((g.inverse(x) + g.inverse(y)) / 2.0))),
    )
}

/// A strictly monotone bijection `k` onto `range`, used by the
/// weighted-affine form.
#[derive(Clone)]
pub struct MonotoneBijection {
    apply: RealFn,
    invert: RealFn,
    range: (f64, f64),
    label: String,
}

impl fmt::Debug for MonotoneBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneBijection")
            .field("label", &self.label)
            .field("range", &self.range)
            .finish_non_exhaustive()
    }
}

impl MonotoneBijection {
    /// `range` is the closed image of `apply`; either end may be infinite.
    pub fn new<F, G>(label: impl Into<String>, apply: F, invert: G, range: (f64, f64)) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        MonotoneBijection {
            apply: Arc::new(apply),
            invert: Arc::new(invert),
            range,
            label: label.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new("id", |x| x, |x| x, (f64::NEG_INFINITY, f64::INFINITY))
    }

    pub fn exp() -> Self {
        Self::new("exp", f64::exp, f64::ln, (0.0, f64::INFINITY))
    }

    pub fn apply(&self, x: f64) -> f64 {
        (self.apply)(x)
    }

    pub fn invert(&self, x: f64) -> f64 {
        (self.invert)(x)
    }

    pub fn in_range(&self, x: f64) -> bool {
        self.range.0 <= x && x <= self.range.1
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Parameters of `F(x, y) = k^-1(a k(x) + b k(y) + c)`.
#[derive(Debug, Clone)]
pub struct WeightedAffineSpec {
    pub k: MonotoneBijection,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl WeightedAffineSpec {
    pub fn new(k: MonotoneBijection, a: f64, b: f64, c: f64) -> Self {
        WeightedAffineSpec { k, a, b, c }
    }

    /// The form is reflexive exactly when `c = 0` and `a + b = 1`.
    pub fn is_reflexive_form(&self) -> bool {
        self.c == 0.0 && (self.a + self.b - 1.0).abs() <= EPS_FACTOR
    }
}

/// Builds the weighted-affine map on `domain`.
///
/// `a b != 0` is required and the image of `a k(x) + b k(y) + c` must stay
/// in the range of `k`; the latter is checked on a 33 x 33 sample here and
/// again on every evaluation.
pub fn make_weighted_affine(
    spec: WeightedAffineSpec,
    domain: Interval,
) -> Result<BinaryMap, MapError> {
    let WeightedAffineSpec { k, a, b, c } = spec;
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(MapError::InvalidParameter(format!(
            "weights must be finite, got a={a}, b={b}, c={c}"
        )));
    }
    if a * b == 0.0 {
        return Err(MapError::InvalidParameter(format!(
            "weighted-affine form needs a*b != 0, got a={a}, b={b}"
        )));
    }
    let n = 32;
    let samples: Vec<f64> = (0..=n)
        .map(|i| domain.lo + domain.width() * i as f64 / n as f64)
        .collect();
    let images: Vec<f64> = samples.iter().map(|&x| k.apply(x)).collect();
    let increasing = images.windows(2).all(|w| w[1] > w[0]);
    let decreasing = images.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) || images.iter().any(|v| !v.is_finite()) {
        return Err(MapError::InvalidGenerator(format!(
            "k = {} is not strictly monotone on {domain}",
            k.label
        )));
    }
    for (i, &kx) in images.iter().enumerate() {
        for (j, &ky) in images.iter().enumerate() {
            let value = a * kx + b * ky + c;
            if !k.in_range(value) {
                return Err(MapError::RangeViolation {
                    x: samples[i],
                    y: samples[j],
                    value,
                });
            }
        }
    }
    let kind = MapKind::WeightedAffine {
        k: k.label.clone(),
        a,
        b,
        c,
    };
    Ok(BinaryMap::from_rule(
        domain,
        kind,
        Arc::new(move |x, y| {
            let value = a * k.apply(x) + b * k.apply(y) + c;
            if k.in_range(value) {
                Ok(k.invert(value))
            } else {
                Err(MapError::RangeViolation { x, y, value })
            }
        }),
    ))
}

/// The named maps accepted by `--map` and by [`builtin`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    Arithmetic,
    Geometric,
    Harmonic,
    Power(f64),
    Exponential(f64),
    Min,
    Max,
    ProjectionLeft,
    ProjectionRight,
    /// Harmonic / geometric / arithmetic patchwork on `[0, 1]`; reflexive
    /// and increasing but not bisymmetric.
    PaperExample1,
    /// `y` on `[1/2, 1]^2`, `min` elsewhere; bisymmetric but not strictly
    /// increasing.
    PaperExample2,
}

impl Builtin {
    /// Every built-in with the parameters used by the catalog sweeps.
    pub fn catalog() -> Vec<Builtin> {
        vec![
            Builtin::Arithmetic,
            Builtin::Geometric,
            Builtin::Harmonic,
            Builtin::Power(-2.0),
            Builtin::Power(0.5),
            Builtin::Power(2.0),
            Builtin::Power(3.0),
            Builtin::Exponential(1.0),
            Builtin::Min,
            Builtin::Max,
            Builtin::ProjectionLeft,
            Builtin::ProjectionRight,
            Builtin::PaperExample1,
            Builtin::PaperExample2,
        ]
    }

    /// Members of the catalog of the form `f((f^-1(x) + f^-1(y)) / 2)`.
    pub fn is_quasi_arithmetic(&self) -> bool {
        matches!(
            self,
            Builtin::Arithmetic
                | Builtin::Geometric
                | Builtin::Harmonic
                | Builtin::Power(_)
                | Builtin::Exponential(_)
        )
    }

    /// Whether the map is known to satisfy the bisymmetry identity.
    pub fn is_bisymmetric(&self) -> bool {
        !matches!(self, Builtin::PaperExample1)
    }

    pub fn default_domain(&self) -> Interval {
        match self {
            Builtin::Geometric | Builtin::Harmonic => Interval { lo: 1.0, hi: 2.0 },
            Builtin::Power(p) if *p <= 0.0 => Interval { lo: 1.0, hi: 2.0 },
            _ => Interval::UNIT,
        }
    }

    pub fn check_domain(&self, domain: Interval) -> Result<(), MapError> {
        let fail = |reason| {
            Err(MapError::IncompatibleDomain {
                name: self.to_string(),
                domain,
                reason,
            })
        };
        match *self {
            Builtin::Geometric | Builtin::Harmonic if domain.lo <= 0.0 => fail("requires lo > 0"),
            Builtin::Power(p) if !p.is_finite() => Err(MapError::InvalidParameter(format!(
                "power exponent must be finite, got {p}"
            ))),
            Builtin::Power(p) if p <= 0.0 && domain.lo <= 0.0 => fail("requires lo > 0"),
            Builtin::Power(_) if domain.lo < 0.0 => fail("requires lo >= 0"),
            Builtin::Exponential(l) if l == 0.0 || !l.is_finite() => {
                Err(MapError::InvalidParameter(format!(
                    "exponential rate must be finite and nonzero, got {l}"
                )))
            }
            Builtin::PaperExample1 | Builtin::PaperExample2
                if !domain.is_subset_of(&Interval::UNIT) =>
            {
                fail("defined on [0, 1] only")
            }
            _ => Ok(()),
        }
    }

    /// Raw evaluation rule on `domain`; arguments are assumed to lie in it.
    pub fn rule(&self, domain: Interval) -> Result<Rule, MapError> {
        self.check_domain(domain)?;
        let rule: Rule = match *self {
            Builtin::Arithmetic => Arc::new(|x, y| Ok((x + y) / 2.0)),
            Builtin::Geometric => Arc::new(|x, y| Ok((x * y).sqrt())),
            Builtin::Power(0.0) => Arc::new(|x, y| Ok((x * y).sqrt())),
            Builtin::Harmonic => Arc::new(|x, y| Ok(2.0 * x * y / (x + y))),
            Builtin::Power(p) => {
                Arc::new(move |x, y| Ok(((x.powf(p) + y.powf(p)) / 2.0).powf(1.0 / p)))
            }
            Builtin::Exponential(lambda) => {
                let g = GeneratorSpec::exponential(lambda, domain)?;
                Arc::new(move |x, y| Ok(g.forward((g.inverse(x) + g.inverse(y)) / 2.0)))
            }
            Builtin::Min => Arc::new(|x: f64, y: f64| Ok(x.min(y))),
            Builtin::Max => Arc::new(|x: f64, y: f64| Ok(x.max(y))),
            Builtin::ProjectionLeft => Arc::new(|x, _| Ok(x)),
            Builtin::ProjectionRight => Arc::new(|_, y| Ok(y)),
            Builtin::PaperExample1 => Arc::new(|x, y| Ok(paper_example_1(x, y))),
            Builtin::PaperExample2 => Arc::new(|x, y| Ok(paper_example_2(x, y))),
        };
        Ok(rule)
    }

    pub fn into_map(self, domain: Interval) -> Result<BinaryMap, MapError> {
        let rule = self.rule(domain)?;
        let kind = MapKind::Builtin {
            name: self.to_string(),
        };
        Ok(BinaryMap::from_rule(domain, kind, rule))
    }

    /// The generator of a quasi-arithmetic built-in, normalized to
    /// `f(0) = lo`, `f(1) = hi`.
    pub fn generator(&self, domain: Interval) -> Option<Result<GeneratorSpec, MapError>> {
        match *self {
            Builtin::Arithmetic => Some(Ok(GeneratorSpec::affine(domain))),
            Builtin::Geometric => Some(GeneratorSpec::power(0.0, domain)),
            Builtin::Harmonic => Some(GeneratorSpec::power(-1.0, domain)),
            Builtin::Power(p) => Some(GeneratorSpec::power(p, domain)),
            Builtin::Exponential(l) => Some(GeneratorSpec::exponential(l, domain)),
            _ => None,
        }
    }
}

/// First branch wins; `[0, 1/2[` is half open as in the case definition.
fn paper_example_1(x: f64, y: f64) -> f64 {
    if (0.0..=1.0).contains(&x) && (0.0..0.5).contains(&y) {
        // 0/0 at the origin: patched to the harmonic-mean limit.
        if x + y == 0.0 {
            0.0
        } else {
            2.0 * x * y / (x + y)
        }
    } else if (0.0..=0.5).contains(&x) && (0.5..=1.0).contains(&y) {
        (x * y).sqrt()
    } else {
        (x + y) / 2.0
    }
}

fn paper_example_2(x: f64, y: f64) -> f64 {
    if (0.5..=1.0).contains(&x) && (0.5..=1.0).contains(&y) {
        y
    } else {
        x.min(y)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Arithmetic => f.write_str("arithmetic"),
            Builtin::Geometric => f.write_str("geometric"),
            Builtin::Harmonic => f.write_str("harmonic"),
            Builtin::Power(p) => write!(f, "power({p})"),
            Builtin::Exponential(l) => write!(f, "exponential({l})"),
            Builtin::Min => f.write_str("min"),
            Builtin::Max => f.write_str("max"),
            Builtin::ProjectionLeft => f.write_str("projection-left"),
            Builtin::ProjectionRight => f.write_str("projection-right"),
            Builtin::PaperExample1 => f.write_str("paper-example-1"),
            Builtin::PaperExample2 => f.write_str("paper-example-2"),
        }
    }
}

impl FromStr for Builtin {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let name = s.trim();
        let unknown = || MapError::UnknownBuiltin(name.to_string());
        let param = |prefix: &str| -> Option<Result<f64, MapError>> {
            let inner = name.strip_prefix(prefix)?.trim_start().strip_prefix('(')?;
            let inner = inner.strip_suffix(')')?.trim();
            Some(inner.parse::<f64>().map_err(|_| {
                MapError::InvalidParameter(format!("cannot parse `{inner}` in `{name}`"))
            }))
        };
        let builtin = match name {
            "arithmetic" => Builtin::Arithmetic,
            "geometric" => Builtin::Geometric,
            "harmonic" => Builtin::Harmonic,
            "min" => Builtin::Min,
            "max" => Builtin::Max,
            "projection-left" => Builtin::ProjectionLeft,
            "projection-right" => Builtin::ProjectionRight,
            "paper-example-1" => Builtin::PaperExample1,
            "paper-example-2" => Builtin::PaperExample2,
            _ => {
                if let Some(p) = param("power") {
                    match p? {
                        0.0 => Builtin::Geometric,
                        p if p.is_finite() => Builtin::Power(p),
                        p => {
                            return Err(MapError::InvalidParameter(format!(
                                "power exponent must be finite, got {p}"
                            )))
                        }
                    }
                } else if let Some(l) = param("exponential") {
                    match l? {
                        l if l == 0.0 || !l.is_finite() => {
                            return Err(MapError::InvalidParameter(format!(
                                "exponential rate must be finite and nonzero, got {l}"
                            )))
                        }
                        l => Builtin::Exponential(l),
                    }
                } else {
                    return Err(unknown());
                }
            }
        };
        Ok(builtin)
    }
}

/// Looks up a built-in by name and instantiates it on `domain`.
pub fn builtin(name: &str, domain: Interval) -> Result<BinaryMap, MapError> {
    name.parse::<Builtin>()?.into_map(domain)
}
