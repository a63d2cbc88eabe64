//! C*-algebra-valued metrics on the real line.
//!
//! Every built-in metric knows the closed form of `‖d(x, y)‖` as a
//! [`NormProfile`]. The profile is used twice: as a cross-check against the
//! operator norm of the assembled element, and to bound `‖d(x, c)‖` over
//! whole intervals of points, which is what lets the convergence analyzers
//! certify behavior beyond a finite window.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{AlgebraDescriptor, AlgebraElement, Scalars, ToleranceProfile};
use crate::error::{Error, Result};
use crate::normed::CstarNorm;

/// Default grid for function-algebra metrics.
pub const DEFAULT_GRID: usize = 16;

/// A set of reals given by its hull, with open/closed ends. Used as a
/// superset of the points a sequence can take.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Span {
    pub fn point(x: f64) -> Self {
        Span {
            lo: x,
            hi: x,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Span {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn new(lo: f64, lo_open: bool, hi: f64, hi_open: bool) -> Self {
        debug_assert!(lo <= hi);
        Span {
            lo,
            hi,
            lo_open,
            hi_open,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open {
            x > self.lo
        } else {
            x >= self.lo
        };
        let below = if self.hi_open {
            x < self.hi
        } else {
            x <= self.hi
        };
        above && below
    }

    /// Whether some point may lie in both spans.
    fn may_share_point(&self, other: &Span) -> bool {
        let (lo, lo_open) = if self.lo > other.lo {
            (self.lo, self.lo_open)
        } else if other.lo > self.lo {
            (other.lo, other.lo_open)
        } else {
            (self.lo, self.lo_open || other.lo_open)
        };
        let (hi, hi_open) = if self.hi < other.hi {
            (self.hi, self.hi_open)
        } else if other.hi < self.hi {
            (other.hi, other.hi_open)
        } else {
            (self.hi, self.hi_open || other.hi_open)
        };
        lo < hi || (lo == hi && !lo_open && !hi_open)
    }

    /// Smallest distance between the closures, and whether a pair of actual
    /// points realizes it.
    fn min_distance(&self, other: &Span) -> (f64, bool) {
        if self.hi < other.lo {
            (other.lo - self.hi, !self.hi_open && !other.lo_open)
        } else if other.hi < self.lo {
            (self.lo - other.hi, !other.hi_open && !self.lo_open)
        } else {
            (0.0, self.may_share_point(other))
        }
    }

    /// Largest distance between points, and whether it is realized.
    fn max_distance(&self, other: &Span) -> (f64, bool) {
        let a = (self.hi - other.lo, !self.hi_open && !other.lo_open);
        let b = (other.hi - self.lo, !other.hi_open && !self.lo_open);
        let (d, attained) = if a.0 > b.0 {
            a
        } else if b.0 > a.0 {
            b
        } else {
            (a.0, a.1 || b.1)
        };
        (d.abs(), attained)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { "(" } else { "[" },
            self.lo,
            self.hi,
            if self.hi_open { ")" } else { "]" }
        )
    }
}

/// Bounds of `‖d(x, c)‖` over a family of pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBounds {
    pub inf: f64,
    pub sup: f64,
    /// False when no pair reaches `sup`.
    pub sup_attained: bool,
}

impl NormBounds {
    /// Every value is `< eps`.
    pub fn all_below(&self, eps: f64) -> bool {
        self.sup < eps || (self.sup == eps && !self.sup_attained)
    }

    /// Every value is `≥ eps`.
    pub fn all_at_least(&self, eps: f64) -> bool {
        self.inf >= eps
    }
}

/// Closed form of `‖d(x, y)‖` as a function of the gap `|x − y|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", content = "constant", rename_all = "snake_case")]
pub enum NormProfile {
    /// `K·|x − y|`.
    Linear(f64),
    /// `K / |x − y|` for `x ≠ y`, zero on the diagonal.
    Reciprocal(f64),
    /// `1` for `x ≠ y`, zero on the diagonal.
    Discrete,
    /// No closed form known.
    Opaque,
}

impl NormProfile {
    pub fn value(&self, x: f64, y: f64) -> Option<f64> {
        let gap = (x - y).abs();
        match *self {
            NormProfile::Linear(k) => Some(k * gap),
            NormProfile::Reciprocal(k) => Some(if x == y { 0.0 } else { k / gap }),
            NormProfile::Discrete => Some(if x == y { 0.0 } else { 1.0 }),
            NormProfile::Opaque => None,
        }
    }

    /// Bounds of `‖d(x, c)‖` over `x ∈ xs`, `c ∈ cs`.
    pub fn bounds(&self, xs: &Span, cs: &Span) -> Option<NormBounds> {
        let (dmin, dmin_hit) = xs.min_distance(cs);
        let (dmax, dmax_hit) = xs.max_distance(cs);
        let share = xs.may_share_point(cs);
        let same_point = xs.is_point() && cs.is_point() && xs.lo == cs.lo;
        match *self {
            NormProfile::Linear(k) => Some(NormBounds {
                inf: k * dmin,
                sup: k * dmax,
                sup_attained: dmax_hit,
            }),
            NormProfile::Reciprocal(k) => {
                if same_point {
                    return Some(NormBounds {
                        inf: 0.0,
                        sup: 0.0,
                        sup_attained: true,
                    });
                }
                let inf = if share { 0.0 } else { k / dmax };
                if dmin > 0.0 {
                    Some(NormBounds {
                        inf,
                        sup: k / dmin,
                        sup_attained: dmin_hit,
                    })
                } else {
                    Some(NormBounds {
                        inf,
                        sup: f64::INFINITY,
                        sup_attained: false,
                    })
                }
            }
            NormProfile::Discrete => Some(if same_point {
                NormBounds {
                    inf: 0.0,
                    sup: 0.0,
                    sup_attained: true,
                }
            } else {
                NormBounds {
                    inf: if share { 0.0 } else { 1.0 },
                    sup: 1.0,
                    sup_attained: true,
                }
            }),
            NormProfile::Opaque => None,
        }
    }

    /// Supremum of `‖d(x, y)‖` over all pairs drawn from the union of
    /// `spans`, with attainment.
    pub fn pair_sup(&self, spans: &[Span]) -> Option<NormBounds> {
        if spans.is_empty() {
            return Some(NormBounds {
                inf: 0.0,
                sup: 0.0,
                sup_attained: false,
            });
        }
        match *self {
            NormProfile::Linear(k) => {
                let lo = spans
                    .iter()
                    .min_by(|a, b| a.lo.total_cmp(&b.lo).then(a.lo_open.cmp(&b.lo_open)))
                    .unwrap();
                let hi = spans
                    .iter()
                    .max_by(|a, b| a.hi.total_cmp(&b.hi).then(b.hi_open.cmp(&a.hi_open)))
                    .unwrap();
                Some(NormBounds {
                    inf: 0.0,
                    sup: k * (hi.hi - lo.lo),
                    sup_attained: !hi.hi_open && !lo.lo_open,
                })
            }
            NormProfile::Reciprocal(k) => {
                if spans.iter().any(|s| !s.is_point()) {
                    return Some(NormBounds {
                        inf: 0.0,
                        sup: f64::INFINITY,
                        sup_attained: false,
                    });
                }
                let mut pts: Vec<f64> = spans.iter().map(|s| s.lo).collect();
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                let gap = pts
                    .windows(2)
                    .map(|w| w[1] - w[0])
                    .fold(f64::INFINITY, f64::min);
                Some(NormBounds {
                    inf: 0.0,
                    sup: if gap.is_finite() { k / gap } else { 0.0 },
                    sup_attained: true,
                })
            }
            NormProfile::Discrete => {
                let first = spans[0].lo;
                let several = spans.iter().any(|s| !s.is_point() || s.lo != first);
                Some(NormBounds {
                    inf: 0.0,
                    sup: if several { 1.0 } else { 0.0 },
                    sup_attained: true,
                })
            }
            NormProfile::Opaque => None,
        }
    }

    /// Lower bound of `‖d(x, y)‖` over distinct `x ≠ y` in `span`.
    pub fn separation(&self, span: &Span) -> f64 {
        match *self {
            NormProfile::Linear(_) | NormProfile::Opaque => 0.0,
            NormProfile::Reciprocal(k) => {
                if span.is_point() {
                    f64::INFINITY
                } else {
                    k / span.width()
                }
            }
            NormProfile::Discrete => 1.0,
        }
    }
}

pub type MetricFn = Arc<dyn Fn(f64, f64) -> AlgebraElement + Send + Sync>;

#[derive(Clone)]
pub enum MetricKind {
    /// `diag(|x − y|, α|x − y|)` in `M₂(ℝ)`.
    Diag { alpha: f64 },
    /// `f / |x − y|` off the diagonal.
    Reciprocal { f: AlgebraElement },
    /// `|x − y|·f`.
    Scaled { f: AlgebraElement },
    /// Identity off the diagonal, in `M₂(ℝ)`.
    Discrete,
    /// `D(x, y) = ‖x − y‖_A`.
    Induced(CstarNorm),
    /// Arbitrary map, no closed form.
    Custom(MetricFn),
}

impl fmt::Debug for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Diag { alpha } => write!(f, "Diag {{ alpha: {alpha} }}"),
            MetricKind::Reciprocal { f: g } => write!(f, "Reciprocal {{ f: {g} }}"),
            MetricKind::Scaled { f: g } => write!(f, "Scaled {{ f: {g} }}"),
            MetricKind::Discrete => write!(f, "Discrete"),
            MetricKind::Induced(n) => write!(f, "Induced({})", n.name()),
            MetricKind::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// A map `ℝ × ℝ → A`.
#[derive(Clone, Debug)]
pub struct CstarMetric {
    name: String,
    algebra: AlgebraDescriptor,
    kind: MetricKind,
    tol: ToleranceProfile,
}

fn m2() -> AlgebraDescriptor {
    AlgebraDescriptor::Matrix {
        dim: 2,
        scalars: Scalars::Real,
    }
}

pub fn make_diag_metric(alpha: f64) -> Result<CstarMetric> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Domain(format!(
            "alpha must be finite and >= 0, got {alpha}"
        )));
    }
    Ok(CstarMetric {
        name: format!("diag(alpha={alpha})"),
        algebra: m2(),
        kind: MetricKind::Diag { alpha },
        tol: ToleranceProfile::default(),
    })
}

fn check_function_weight(f: &AlgebraElement, what: &str, tol: &ToleranceProfile) -> Result<f64> {
    if !matches!(f.descriptor(), AlgebraDescriptor::Function { .. }) {
        return Err(Error::Structural(format!(
            "{what} needs a function-algebra element, got {}",
            f.descriptor()
        )));
    }
    let norm = f.op_norm()?;
    if norm <= 1.0 {
        return Err(Error::Precondition(format!(
            "{what} requires ‖f‖ > 1, got {norm}"
        )));
    }
    if !f.is_positive(tol)? {
        return Err(Error::Precondition(format!(
            "{what} requires nonnegative real samples"
        )));
    }
    Ok(norm)
}

pub fn make_reciprocal_function_metric(
    f: AlgebraElement,
    tol: ToleranceProfile,
) -> Result<CstarMetric> {
    let norm = check_function_weight(&f, "reciprocal metric", &tol)?;
    Ok(CstarMetric {
        name: format!("reciprocal(‖f‖={norm})"),
        algebra: f.descriptor(),
        kind: MetricKind::Reciprocal { f },
        tol,
    })
}

pub fn make_scaled_function_metric(f: AlgebraElement) -> Result<CstarMetric> {
    let tol = ToleranceProfile::default();
    let norm = check_function_weight(&f, "scaled metric", &tol)?;
    Ok(CstarMetric {
        name: format!("scaled(‖f‖={norm})"),
        algebra: f.descriptor(),
        kind: MetricKind::Scaled { f },
        tol,
    })
}

pub fn make_discrete_metric() -> CstarMetric {
    CstarMetric {
        name: "discrete".into(),
        algebra: m2(),
        kind: MetricKind::Discrete,
        tol: ToleranceProfile::default(),
    }
}

/// `f ≡ 2` on the default grid.
pub fn default_weight() -> AlgebraElement {
    AlgebraElement::constant_function(DEFAULT_GRID, 2.0).expect("valid grid")
}

impl CstarMetric {
    pub fn induced(norm: CstarNorm) -> Self {
        CstarMetric {
            name: format!("induced:{}", norm.name()),
            algebra: norm.algebra(),
            kind: MetricKind::Induced(norm),
            tol: ToleranceProfile::default(),
        }
    }

    /// A metric with no closed-form norm; useful for probing the verifier.
    pub fn custom(name: impl Into<String>, algebra: AlgebraDescriptor, eval: MetricFn) -> Self {
        CstarMetric {
            name: name.into(),
            algebra,
            kind: MetricKind::Custom(eval),
            tol: ToleranceProfile::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> AlgebraDescriptor {
        self.algebra
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn tolerance(&self) -> ToleranceProfile {
        self.tol
    }

    pub fn eval(&self, x: f64, y: f64) -> AlgebraElement {
        let gap = (x - y).abs();
        match &self.kind {
            MetricKind::Diag { alpha } => {
                AlgebraElement::real_diag(&[gap, alpha * gap]).expect("2x2 diagonal")
            }
            MetricKind::Reciprocal { f } => {
                if x == y {
                    self.algebra.zero()
                } else {
                    f.scale(1.0 / gap)
                }
            }
            MetricKind::Scaled { f } => f.scale(gap),
            MetricKind::Discrete => {
                if x == y {
                    self.algebra.zero()
                } else {
                    self.algebra.identity()
                }
            }
            MetricKind::Induced(norm) => norm.eval(x - y),
            MetricKind::Custom(eval) => eval(x, y),
        }
    }

    pub fn profile(&self) -> NormProfile {
        match &self.kind {
            MetricKind::Diag { alpha } => NormProfile::Linear(alpha.max(1.0)),
            MetricKind::Reciprocal { f } => {
                NormProfile::Reciprocal(f.op_norm().expect("finite weight"))
            }
            MetricKind::Scaled { f } => NormProfile::Linear(f.op_norm().expect("finite weight")),
            MetricKind::Discrete => NormProfile::Discrete,
            MetricKind::Induced(norm) => norm.profile(),
            MetricKind::Custom(_) => NormProfile::Opaque,
        }
    }

    /// Closed-form `‖d(x, y)‖`, when known.
    pub fn norm_formula(&self, x: f64, y: f64) -> Option<f64> {
        self.profile().value(x, y)
    }

    /// Closed form when available, operator norm otherwise. Used for bulk
    /// window scans; [`distance_norm`] is the checked path.
    pub fn fast_norm(&self, x: f64, y: f64) -> f64 {
        match self.norm_formula(x, y) {
            Some(v) => v,
            None => self.eval(x, y).op_norm().unwrap_or(f64::NAN),
        }
    }
}

impl fmt::Display for CstarMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// `‖d(x, y)‖` from the operator norm, checked against the closed form.
pub fn distance_norm(m: &CstarMetric, x: f64, y: f64) -> Result<f64> {
    let value = m.eval(x, y).op_norm()?;
    if let Some(formula) = m.norm_formula(x, y) {
        if (formula - value).abs() > m.tol.norm_tol * (1.0 + value.abs()) {
            return Err(Error::Consistency(format!(
                "{}: closed form {formula} vs operator norm {value} at ({x}, {y})",
                m.name
            )));
        }
    }
    Ok(value)
}

/// One failed check of the metric axioms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomWitness {
    pub axiom: &'static str,
    pub x: f64,
    pub y: f64,
    pub z: Option<f64>,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricAxiomReport {
    pub metric: String,
    pub axiom_i_pass: bool,
    pub axiom_ii_pass: bool,
    pub axiom_iii_pass: bool,
    /// Largest relative violation seen; definiteness failures count as 1.
    pub worst_violation: f64,
    pub tolerance: f64,
    pub witnesses: Vec<AxiomWitness>,
}

impl MetricAxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axiom_i_pass && self.axiom_ii_pass && self.axiom_iii_pass
    }
}

const MAX_WITNESSES: usize = 16;

/// Relative amount by which `e` fails to be positive (0 when positive).
pub(crate) fn positivity_violation(e: &AlgebraElement, tol: &ToleranceProfile) -> Result<f64> {
    let norm = e.op_norm()?;
    let scale = 1.0 + norm;
    let defect = e.self_adjoint_defect()? / scale;
    let min = e.hermitian_part().spectrum(tol)?.min_real();
    Ok(defect.max(-min / scale).max(0.0))
}

/// Checks the three metric axioms over every pair and triple of `samples`.
pub fn verify_axioms(
    m: &CstarMetric,
    samples: &[f64],
    tol: &ToleranceProfile,
) -> Result<MetricAxiomReport> {
    let mut pts: Vec<f64> = samples.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Err(Error::Precondition(
            "verify_axioms needs at least two distinct samples".into(),
        ));
    }
    let limit = tol.positivity_tol;
    let mut report = MetricAxiomReport {
        metric: m.name.clone(),
        axiom_i_pass: true,
        axiom_ii_pass: true,
        axiom_iii_pass: true,
        worst_violation: 0.0,
        tolerance: limit,
        witnesses: Vec::new(),
    };
    let record = |report: &mut MetricAxiomReport, w: AxiomWitness| {
        report.worst_violation = report.worst_violation.max(w.violation);
        match w.axiom {
            "I" => report.axiom_i_pass = false,
            "II" => report.axiom_ii_pass = false,
            _ => report.axiom_iii_pass = false,
        }
        if report.witnesses.len() < MAX_WITNESSES {
            report.witnesses.push(w);
        }
    };

    let n = pts.len();
    let mut d = vec![Vec::with_capacity(n); n];
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts {
            d[i].push(m.eval(x, y));
        }
    }

    for i in 0..n {
        for j in 0..n {
            let (x, y) = (pts[i], pts[j]);
            let e = &d[i][j];
            if e.descriptor() != m.algebra {
                return Err(Error::Structural(format!(
                    "{} returned an element of {} instead of {}",
                    m.name,
                    e.descriptor(),
                    m.algebra
                )));
            }
            let v = positivity_violation(e, tol)?;
            report.worst_violation = report.worst_violation.max(v);
            if v > limit {
                record(
                    &mut report,
                    AxiomWitness {
                        axiom: "I",
                        x,
                        y,
                        z: None,
                        violation: v,
                    },
                );
            }
            let norm = e.op_norm()?;
            let definite = if i == j { norm <= limit } else { norm > limit };
            if !definite {
                record(
                    &mut report,
                    AxiomWitness {
                        axiom: "I",
                        x,
                        y,
                        z: None,
                        violation: 1.0,
                    },
                );
            }
            if j > i {
                let other = &d[j][i];
                let diff =
                    e.max_abs_diff(other)? / (1.0 + e.max_abs_entry().max(other.max_abs_entry()));
                report.worst_violation = report.worst_violation.max(diff);
                if diff > limit {
                    record(
                        &mut report,
                        AxiomWitness {
                            axiom: "II",
                            x,
                            y,
                            z: None,
                            violation: diff,
                        },
                    );
                }
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let rhs = d[i][k].add(&d[k][j])?;
                let gap = rhs.sub(&d[i][j])?;
                let v = positivity_violation(&gap, tol)?;
                report.worst_violation = report.worst_violation.max(v);
                if v > limit {
                    record(
                        &mut report,
                        AxiomWitness {
                            axiom: "III",
                            x: pts[i],
                            y: pts[j],
                            z: Some(pts[k]),
                            violation: v,
                        },
                    );
                }
            }
        }
    }
    Ok(report)
}

/// `(x − y)·1_A` in `M₂(ℝ)`: fails positivity whenever `x < y`.
pub fn signed_fake_metric() -> CstarMetric {
    let algebra = m2();
    CstarMetric::custom(
        "signed-fake",
        algebra,
        Arc::new(move |x, y| algebra.identity().scale(x - y)),
    )
}

/// Complex helper for tests and config parsing.
pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
