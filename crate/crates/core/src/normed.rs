//! C*-algebra-valued norms on the real line and their induced metrics.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AlgebraDescriptor, AlgebraElement, Scalars, ToleranceProfile};
use crate::convergence::{a_epsilon_set, Center, Question, VerdictBundle};
use crate::error::{Error, Result};
use crate::ideal::{membership, Decision, IdealDescriptor};
use crate::metric::{positivity_violation, CstarMetric, NormProfile};
use crate::scenario::SequenceScenario;

pub type NormFn = Arc<dyn Fn(f64) -> AlgebraElement + Send + Sync>;

#[derive(Clone)]
pub enum NormKind {
    /// `diag(a|x|, b|x|)` in `M₂(ℝ)`.
    ScaledDiag {
        a: f64,
        b: f64,
    },
    /// `|x|` in `M₁(ℝ)`.
    RealAbs,
    Custom(NormFn),
}

/// A map `ℝ → A`.
#[derive(Clone)]
pub struct CstarNorm {
    name: String,
    algebra: AlgebraDescriptor,
    kind: NormKind,
}

impl fmt::Debug for CstarNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CstarNorm({})", self.name)
    }
}

pub fn make_scaled_diag_norm(a: f64, b: f64) -> Result<CstarNorm> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "scaled-diag needs finite a, b > 0, got ({a}, {b})"
        )));
    }
    Ok(CstarNorm {
        name: format!("scaled-diag({a},{b})"),
        algebra: AlgebraDescriptor::Matrix {
            dim: 2,
            scalars: Scalars::Real,
        },
        kind: NormKind::ScaledDiag { a, b },
    })
}

pub fn make_real_abs_norm() -> CstarNorm {
    CstarNorm {
        name: "real-abs".into(),
        algebra: AlgebraDescriptor::Matrix {
            dim: 1,
            scalars: Scalars::Real,
        },
        kind: NormKind::RealAbs,
    }
}

impl CstarNorm {
    pub fn custom(name: impl Into<String>, algebra: AlgebraDescriptor, eval: NormFn) -> Self {
        CstarNorm {
            name: name.into(),
            algebra,
            kind: NormKind::Custom(eval),
        }
    }

    /// `scaled-diag(a,b)` or `real-abs`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        if name == "real-abs" {
            return Ok(make_real_abs_norm());
        }
        let args = name
            .strip_prefix("scaled-diag(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Domain(format!("unknown norm `{name}`")))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let [a, b] = parts[..] else {
            return Err(Error::Domain(format!(
                "scaled-diag takes two arguments: `{name}`"
            )));
        };
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad number `{s}` in `{name}`")))
        };
        make_scaled_diag_norm(parse(a)?, parse(b)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> AlgebraDescriptor {
        self.algebra
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn eval(&self, x: f64) -> AlgebraElement {
        match &self.kind {
            NormKind::ScaledDiag { a, b } => {
                AlgebraElement::real_diag(&[a * x.abs(), b * x.abs()]).expect("2x2 diagonal")
            }
            NormKind::RealAbs => AlgebraElement::real_diag(&[x.abs()]).expect("1x1"),
            NormKind::Custom(f) => f(x),
        }
    }

    /// Closed form of `‖‖x − y‖_A‖` for the induced metric.
    pub fn profile(&self) -> NormProfile {
        match &self.kind {
            NormKind::ScaledDiag { a, b } => NormProfile::Linear(a.max(*b)),
            NormKind::RealAbs => NormProfile::Linear(1.0),
            NormKind::Custom(_) => NormProfile::Opaque,
        }
    }
}

impl fmt::Display for CstarNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormAxiomReport {
    pub norm: String,
    pub positivity_pass: bool,
    pub definiteness_pass: bool,
    pub homogeneity_pass: bool,
    pub triangle_pass: bool,
    pub worst_violation: f64,
    pub tolerance: f64,
    pub witnesses: Vec<String>,
}

impl NormAxiomReport {
    pub fn all_pass(&self) -> bool {
        self.positivity_pass
            && self.definiteness_pass
            && self.homogeneity_pass
            && self.triangle_pass
    }
}

/// Positivity, definiteness, `‖λx‖ = |λ|‖x‖` and the order triangle
/// inequality on the given samples and scalars.
pub fn verify_norm_axioms(
    n: &CstarNorm,
    samples: &[f64],
    scalars: &[f64],
    tol: &ToleranceProfile,
) -> Result<NormAxiomReport> {
    let limit = tol.positivity_tol;
    let mut r = NormAxiomReport {
        norm: n.name.clone(),
        positivity_pass: true,
        definiteness_pass: true,
        homogeneity_pass: true,
        triangle_pass: true,
        worst_violation: 0.0,
        tolerance: limit,
        witnesses: Vec::new(),
    };
    let fail = |r: &mut NormAxiomReport, what: String, v: f64| {
        r.worst_violation = r.worst_violation.max(v);
        if r.witnesses.len() < 16 {
            r.witnesses.push(what);
        }
    };
    for &x in samples {
        let e = n.eval(x);
        let v = positivity_violation(&e, tol)?;
        r.worst_violation = r.worst_violation.max(v);
        if v > limit {
            r.positivity_pass = false;
            fail(&mut r, format!("positivity at {x}"), v);
        }
        let norm = e.op_norm()?;
        if (x == 0.0) != (norm <= limit) {
            r.definiteness_pass = false;
            fail(&mut r, format!("definiteness at {x}"), 1.0);
        }
        for &l in scalars {
            let lhs = n.eval(l * x);
            let rhs = e.scale(l.abs());
            let d = lhs.max_abs_diff(&rhs)? / (1.0 + rhs.max_abs_entry());
            r.worst_violation = r.worst_violation.max(d);
            if d > limit {
                r.homogeneity_pass = false;
                fail(&mut r, format!("homogeneity at x={x}, λ={l}"), d);
            }
        }
        for &y in samples {
            let gap = e.add(&n.eval(y))?.sub(&n.eval(x + y))?;
            let v = positivity_violation(&gap, tol)?;
            r.worst_violation = r.worst_violation.max(v);
            if v > limit {
                r.triangle_pass = false;
                fail(&mut r, format!("triangle at ({x}, {y})"), v);
            }
        }
    }
    Ok(r)
}

/// Probe points used before inducing a metric.
const PROBE_POINTS: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
const PROBE_SCALARS: [f64; 5] = [-2.0, -0.5, 0.0, 1.0, 3.0];

/// `D(x, y) = ‖x − y‖_A`, after checking the norm axioms on a probe set.
pub fn induce_metric(n: &CstarNorm) -> Result<CstarMetric> {
    let r = verify_norm_axioms(
        n,
        &PROBE_POINTS,
        &PROBE_SCALARS,
        &ToleranceProfile::default(),
    )?;
    if !r.all_pass() {
        return Err(Error::Precondition(format!(
            "{} fails the norm axioms: {}",
            n.name,
            r.witnesses.join("; ")
        )));
    }
    Ok(CstarMetric::induced(n.clone()))
}

/// A failed invariance identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceWitness {
    pub identity: &'static str,
    pub x: f64,
    pub y: f64,
    /// Shift `a` or scalar `α`.
    pub parameter: f64,
    pub lhs: AlgebraElement,
    pub rhs: AlgebraElement,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub metric: String,
    pub translation_pass: bool,
    pub homogeneity_pass: bool,
    pub worst_violation: f64,
    pub tolerance: f64,
    pub witnesses: Vec<InvarianceWitness>,
}

/// Checks `d(x + a, y + a) = d(x, y)` and `d(αx, αy) = |α| d(x, y)`
/// entrywise on every combination of samples and scalars.
pub fn invariance_audit(
    m: &CstarMetric,
    samples: &[f64],
    scalars: &[f64],
    tol: &ToleranceProfile,
) -> Result<InvarianceReport> {
    let limit = tol.norm_tol;
    let mut r = InvarianceReport {
        metric: m.name().to_string(),
        translation_pass: true,
        homogeneity_pass: true,
        worst_violation: 0.0,
        tolerance: limit,
        witnesses: Vec::new(),
    };
    let check = |r: &mut InvarianceReport,
                 identity: &'static str,
                 x: f64,
                 y: f64,
                 p: f64,
                 lhs: AlgebraElement,
                 rhs: AlgebraElement|
     -> Result<()> {
        let deviation = lhs.max_abs_diff(&rhs)?;
        r.worst_violation = r.worst_violation.max(deviation);
        if deviation > limit * (1.0 + rhs.max_abs_entry()) {
            if identity == "translation" {
                r.translation_pass = false;
            } else {
                r.homogeneity_pass = false;
            }
            if r.witnesses.len() < 16 {
                r.witnesses.push(InvarianceWitness {
                    identity,
                    x,
                    y,
                    parameter: p,
                    lhs,
                    rhs,
                    deviation,
                });
            }
        }
        Ok(())
    };
    for &x in samples {
        for &y in samples {
            let base = m.eval(x, y);
            for &a in samples {
                check(
                    &mut r,
                    "translation",
                    x,
                    y,
                    a,
                    m.eval(x + a, y + a),
                    base.clone(),
                )?;
            }
            for &l in scalars {
                check(
                    &mut r,
                    "homogeneity",
                    x,
                    y,
                    l,
                    m.eval(l * x, l * y),
                    base.scale(l.abs()),
                )?;
            }
        }
    }
    Ok(r)
}

/// Norm convergence `x_n → x`: `I`-convergence for the finite-set ideal
/// under the induced metric.
pub fn norm_convergence_verdict(
    s: &SequenceScenario,
    n: &CstarNorm,
    limit: f64,
    eps: f64,
    window: usize,
) -> Result<VerdictBundle> {
    let m = induce_metric(n)?;
    let a = a_epsilon_set(s, &m, Center::Point(limit), eps, window)?;
    let fin = IdealDescriptor::fin();
    let verdict = membership(&fin, &a);
    let mut bundle = VerdictBundle::new(Question::NormConv, eps, verdict);
    let mut trace = vec![format!("A(ε) = {a}")];
    if bundle.verdict.decision == Decision::In {
        let n0 = a.window.max().map_or(1, |m| m + 1);
        trace.push(format!("‖x_n − {limit}‖ < ε for all n ≥ {n0}"));
        bundle.witness_index = Some(n0);
    }
    bundle.witness = Some(a);
    bundle.trace = trace;
    Ok(bundle)
}
