//! The canonical reproduction run: every worked example and implication,
//! one PASS/FAIL claim each.

use cstar_ideal::{
    a_epsilon_set, candidate_centers, cauchy_criteria_cross_check, counterexample_audit,
    default_probes, default_weight, i_cauchy_def_verdict, i_cauchy_pair_verdict, implication_audit,
    induce_metric, invariance_audit, istar_witness_from_ap, make_diag_metric, make_discrete_metric,
    make_real_abs_norm, make_reciprocal_function_metric, make_scaled_diag_norm,
    make_scaled_function_metric, verify_axioms, verify_norm_axioms, BlockSet, CstarMetric,
    Decision, Error, GridCell, IdealDescriptor, Result, SequenceScenario, SetDescription,
    TailCertificate, ToleranceProfile,
};
use serde_json::{json, Value};

use crate::report::to_value;

pub const GRID_EPS: [f64; 3] = [1.0, 0.1, 0.01];
/// Window of the counterexample gap audit.
pub const GAP_WINDOW: usize = 8192;

#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

impl Claim {
    fn new(name: &str, pass: bool, detail: Value) -> Self {
        Claim {
            name: name.into(),
            pass,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!("{} {}", if self.pass { "PASS" } else { "FAIL" }, self.name)
    }
}

pub struct PaperAudit {
    pub window: usize,
    pub claims: Vec<Claim>,
}

impl PaperAudit {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn lines(&self) -> Vec<String> {
        self.claims.iter().map(Claim::line).collect()
    }

    pub fn to_json(&self) -> Value {
        let passed = self.claims.iter().filter(|c| c.pass).count();
        json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "window": self.window,
            "claims": self.claims.iter().map(|c| json!({
                "claim": c.name,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "summary": {
                "claims": self.claims.len(),
                "passed": passed,
                "failed": self.claims.len() - passed,
            },
        })
    }
}

pub fn const_two_scaled() -> CstarMetric {
    make_scaled_function_metric(default_weight()).expect("positive weight")
}

/// Metrics of the consistency grid.
pub fn grid_metrics() -> Vec<CstarMetric> {
    vec![
        make_diag_metric(0.5).expect("valid alpha"),
        make_diag_metric(2.0).expect("valid alpha"),
        const_two_scaled(),
        make_discrete_metric(),
    ]
}

/// `{harmonic, block-harmonic, constant} × {fin, block} × metrics`.
pub fn grid(metrics: &[CstarMetric]) -> Vec<GridCell> {
    let scenarios = [
        SequenceScenario::harmonic(),
        SequenceScenario::block_harmonic(),
        SequenceScenario::constant(0.5),
    ];
    let mut cells = Vec::new();
    for s in &scenarios {
        for ideal in [IdealDescriptor::fin(), IdealDescriptor::block()] {
            for m in metrics {
                cells.push(GridCell {
                    scenario: s.clone(),
                    metric: m.clone(),
                    ideal,
                });
            }
        }
    }
    cells
}

/// Runs a claim, turning a library error into a failed claim.
fn claim(name: &str, f: impl FnOnce() -> Result<(bool, Value)>) -> Claim {
    match f() {
        Ok((pass, detail)) => Claim::new(name, pass, detail),
        Err(e) => Claim::new(name, false, json!({ "error": e.to_string() })),
    }
}

fn window_members(s: &SetDescription) -> Vec<u64> {
    s.window.iter().collect()
}

pub fn audit_paper(window: usize) -> PaperAudit {
    let fin = IdealDescriptor::fin();
    let block = IdealDescriptor::block();
    let harmonic = SequenceScenario::harmonic();
    let bh = SequenceScenario::block_harmonic();
    let mut claims = Vec::new();

    claims.push(claim("harmonic is I-Cauchy under fin for diag metrics, alpha in {0.5, 2}", || {
        let mut pass = true;
        let mut rows = Vec::new();
        for alpha in [0.5, 2.0] {
            let m = make_diag_metric(alpha)?;
            for eps in [0.1, 0.01] {
                let b = i_cauchy_def_verdict(&harmonic, &m, &fin, eps, window)?;
                pass &= b.decision() == Decision::In;
                rows.push(json!({ "alpha": alpha, "epsilon": eps, "decision": b.decision(), "n0": b.witness_index }));
            }
        }
        let m = make_diag_metric(0.5)?;
        let b = i_cauchy_def_verdict(&harmonic, &m, &fin, 0.1, window)?;
        let a = b.witness.as_ref().map(window_members).unwrap_or_default();
        pass &= b.witness_index == Some(11) && a == vec![1, 2, 3, 4, 5];
        Ok((pass, json!({ "rows": rows, "n0": b.witness_index, "a_window": a })))
    }));

    claims.push(claim(
        "harmonic is not I-Cauchy under fin for the reciprocal metric with f = 2",
        || {
            let m = make_reciprocal_function_metric(default_weight(), ToleranceProfile::default())?;
            let mut pass = true;
            let mut rows = Vec::new();
            for eps in [0.1, 0.5, 1.0] {
                let b = i_cauchy_def_verdict(&harmonic, &m, &fin, eps, window)?;
                let mut tails = Vec::new();
                for c in candidate_centers(&harmonic, &m, eps, window) {
                    let a = a_epsilon_set(&harmonic, &m, c, eps, window)?;
                    pass &= a.tail == TailCertificate::Cofinite;
                    tails.push(json!({ "center": c.to_string(), "tail": a.tail.tag() }));
                }
                pass &= b.decision() == Decision::NotIn;
                rows.push(json!({ "epsilon": eps, "decision": b.decision(), "centers": tails }));
            }
            Ok((pass, json!(rows)))
        },
    ));

    claims.push(claim(
        "block-harmonic is I-Cauchy under the block ideal with D = blocks 1..21 at eps = 0.2",
        || {
            let b = i_cauchy_pair_verdict(&bh, &const_two_scaled(), &block, 0.2, window)?;
            let expected = SetDescription::block_union(window, &(1..=21).collect::<BlockSet>());
            let pass = b.decision() == Decision::In && b.witness.as_ref() == Some(&expected);
            Ok((pass, to_value(&b)))
        },
    ));

    claims.push(claim(
        "block-harmonic is not I*-Cauchy under the block ideal: gaps for l = 1..10",
        || {
            let r = counterexample_audit(10, GAP_WINDOW, &default_weight())?;
            Ok((r.pass, to_value(&r)))
        },
    ));

    claims.push(claim(
        "the block ideal lacks the additive property: the AP construction is refused",
        || {
            let r = istar_witness_from_ap(
                &bh,
                &const_two_scaled(),
                &block,
                &default_probes(10),
                window,
            );
            let pass = matches!(r, Err(Error::Unsupported(_)));
            let detail = match r {
                Err(e) => json!({ "error": e.to_string() }),
                Ok(r) => to_value(&r),
            };
            Ok((pass, detail))
        },
    ));

    claims.push(claim("harmonic under fin: the AP construction yields an I*-Cauchy witness for eps = 1/k, k = 1..10", || {
        let m = make_diag_metric(0.5)?;
        let r = istar_witness_from_ap(&harmonic, &m, &fin, &default_probes(10), window)?;
        Ok((r.all_in(), to_value(&r)))
    }));

    let metrics = grid_metrics();
    claims.push(claim(
        "the three I-Cauchy criteria never conflict on the grid",
        || grid_consistency(&metrics, window),
    ));
    claims.push(claim(
        "I-convergence, I*-Cauchy and I*-convergence imply I-Cauchy on the grid",
        || grid_implications(&metrics, window),
    ));

    claims.push(claim("scaled-diag(1,2) satisfies the norm axioms", || {
        let n = make_scaled_diag_norm(1.0, 2.0)?;
        let r = verify_norm_axioms(
            &n,
            &norm_samples(),
            &norm_scalars(),
            &ToleranceProfile::default(),
        )?;
        Ok((r.all_pass(), to_value(&r)))
    }));

    claims.push(claim(
        "the induced metric of scaled-diag(1,2) is a metric, translation invariant and homogeneous",
        || {
            let m = induce_metric(&make_scaled_diag_norm(1.0, 2.0)?)?;
            let tol = ToleranceProfile::uniform(1e-12)?;
            let axioms = verify_axioms(&m, &norm_samples(), &tol)?;
            let inv = invariance_audit(&m, &norm_samples(), &norm_scalars(), &tol)?;
            let pass = axioms.all_pass() && inv.translation_pass && inv.homogeneity_pass;
            Ok((
                pass,
                json!({ "axioms": to_value(&axioms), "invariance": to_value(&inv) }),
            ))
        },
    ));

    claims.push(claim(
        "homogeneity fails for the discrete metric: d(2,0) = 1 but 2 d(1,0) = 2",
        discrete_homogeneity,
    ));

    let induced = induced_metrics();
    claims.push(claim(
        "the grid checks pass unchanged over induced metrics",
        || {
            let metrics = induced?;
            let (a, da) = grid_consistency(&metrics, window)?;
            let (b, db) = grid_implications(&metrics, window)?;
            Ok((a && b, json!({ "consistency": da, "implications": db })))
        },
    ));

    PaperAudit { window, claims }
}

pub fn induced_metrics() -> Result<Vec<CstarMetric>> {
    Ok(vec![
        induce_metric(&make_scaled_diag_norm(1.0, 2.0)?)?,
        induce_metric(&make_real_abs_norm())?,
    ])
}

pub fn norm_samples() -> Vec<f64> {
    vec![-3.0, -1.0, -0.25, 0.0, 0.5, 1.0, 2.0, 7.5]
}

pub fn norm_scalars() -> Vec<f64> {
    vec![-2.0, -0.5, 0.0, 1.0, 3.0]
}

/// Zero conflicts between the three criteria on every grid cell.
pub fn grid_consistency(metrics: &[CstarMetric], window: usize) -> Result<(bool, Value)> {
    let mut conflicts = 0;
    let mut rows = Vec::new();
    for cell in grid(metrics) {
        let r = cauchy_criteria_cross_check(
            &cell.scenario,
            &cell.metric,
            &cell.ideal,
            &GRID_EPS,
            window,
        )?;
        conflicts += r.conflicts;
        rows.push(json!({
            "scenario": cell.scenario.name(),
            "metric": cell.metric.name(),
            "ideal": cell.ideal.name(),
            "rows": to_value(&r.rows),
        }));
    }
    Ok((
        conflicts == 0,
        json!({ "conflicts": conflicts, "cells": rows }),
    ))
}

/// Zero violations of the implication checks on every grid cell.
pub fn grid_implications(metrics: &[CstarMetric], window: usize) -> Result<(bool, Value)> {
    let r = implication_audit(&grid(metrics), &GRID_EPS, window)?;
    Ok((
        r.violations.is_empty(),
        json!({ "checks": r.checks, "violations": r.violations }),
    ))
}

fn discrete_homogeneity() -> Result<(bool, Value)> {
    let m = make_discrete_metric();
    let r = invariance_audit(&m, &[0.0, 1.0], &[2.0], &ToleranceProfile::default())?;
    let unit = m.eval(1.0, 0.0);
    let twice = unit.scale(2.0);
    let exact = r.witnesses.iter().any(|w| {
        w.identity == "homogeneity"
            && w.x == 1.0
            && w.y == 0.0
            && w.parameter == 2.0
            && w.lhs == unit
            && w.rhs == twice
    });
    let pass = r.translation_pass && !r.homogeneity_pass && exact;
    Ok((pass, to_value(&r)))
}
