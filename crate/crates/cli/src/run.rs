//! Executes the audits of a [`RunConfig`] in fixed order and assembles the
//! report.

use cstar_ideal::{
    cauchy_criteria_cross_check, counterexample_audit, default_weight, filter_candidates,
    i_cauchy_def_verdict, i_cauchy_ek_verdict, i_cauchy_pair_verdict, i_convergence_verdict,
    i_star_cauchy_verdict, i_star_convergence_verdict, implication_audit, induce_metric,
    invariance_audit, istar_witness_from_ap, norm_convergence_verdict, verify_axioms,
    verify_norm_axioms, Decision, GridCell, SequenceScenario, ToleranceProfile, VerdictBundle,
};
use serde_json::{json, Map, Value};

use crate::config::{Audit, RunConfig};
use crate::report::{format_float, to_value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

/// Largest `l` in the counterexample audit.
pub const COUNTEREXAMPLE_L_MAX: u32 = 10;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tally {
    pub in_count: usize,
    pub not_in: usize,
    pub unknown: usize,
    pub violations: Vec<String>,
    /// `(audit, question, ε, decision)` for the plain-text table.
    pub rows: Vec<(String, String, f64, Decision)>,
}

impl Tally {
    fn decision(&mut self, audit: &str, question: &str, eps: f64, d: Decision) {
        match d {
            Decision::In => self.in_count += 1,
            Decision::NotIn => self.not_in += 1,
            Decision::Unknown => self.unknown += 1,
        }
        self.rows.push((audit.into(), question.into(), eps, d));
    }

    fn bundle(&mut self, audit: &str, b: &VerdictBundle) {
        self.decision(audit, b.question.label(), b.epsilon, b.decision());
    }

    fn violation(&mut self, audit: &str, message: impl Into<String>) {
        self.violations.push(format!("{audit}: {}", message.into()));
    }

    fn to_json(&self) -> Value {
        json!({
            "verdicts": self.in_count + self.not_in + self.unknown,
            "in": self.in_count,
            "not_in": self.not_in,
            "unknown": self.unknown,
            "violations": self.violations.len(),
        })
    }
}

pub struct RunOutcome {
    pub report: Value,
    pub tally: Tally,
    pub exit_code: i32,
}

impl RunOutcome {
    /// Plain-text summary, one line per verdict.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<14} {:<14} {:>24}  {}\n",
            "audit", "question", "epsilon", "decision"
        );
        for (audit, q, eps, d) in &self.tally.rows {
            out.push_str(&format!(
                "{audit:<14} {q:<14} {:>24}  {d}\n",
                format_float(*eps)
            ));
        }
        for v in &self.tally.violations {
            out.push_str(&format!("VIOLATION {v}\n"));
        }
        out.push_str(&format!(
            "in={} not_in={} unknown={} violations={} exit={}\n",
            self.tally.in_count,
            self.tally.not_in,
            self.tally.unknown,
            self.tally.violations.len(),
            self.exit_code
        ));
        out
    }
}

pub fn exit_code(tally: &Tally, strict: bool) -> i32 {
    if !tally.violations.is_empty() {
        EXIT_VIOLATION
    } else if strict && tally.unknown > 0 {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    }
}

/// Distinct sample points for axiom checks: the first terms, the limit and 0.
fn samples(s: &SequenceScenario) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=8).map(|n| s.at(n)).collect();
    v.extend(s.limit());
    v.push(0.0);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

const SCALARS: [f64; 5] = [-2.0, -0.5, 0.0, 1.0, 3.0];

fn error_node(e: impl std::fmt::Display) -> Value {
    json!({ "error": e.to_string() })
}

pub fn run(config: &RunConfig) -> RunOutcome {
    let mut tally = Tally::default();
    let mut audits = Map::new();
    for &audit in &config.audits {
        let name = audit.name();
        let node = match run_audit(config, audit, &mut tally) {
            Ok(v) => v,
            Err(e) => {
                tally.violation(name, format!("audit aborted: {e}"));
                error_node(e)
            }
        };
        audits.insert(name.to_string(), node);
    }
    let exit_code = exit_code(&tally, config.strict);
    let mut summary = tally.to_json();
    summary["exit_code"] = json!(exit_code);
    let report = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": config.echo(),
        "audits": Value::Object(audits),
        "summary": summary,
        "violations": tally.violations,
    });
    RunOutcome {
        report,
        tally,
        exit_code,
    }
}

fn run_audit(c: &RunConfig, audit: Audit, tally: &mut Tally) -> cstar_ideal::Result<Value> {
    let (s, m, ideal, n) = (&c.scenario, &c.metric.metric, &c.ideal, c.window);
    let name = audit.name();
    Ok(match audit {
        Audit::Axioms => {
            let r = verify_axioms(m, &samples(s), &m.tolerance())?;
            if !r.all_pass() {
                tally.violation(
                    name,
                    format!(
                        "{} fails the metric axioms (worst {})",
                        m.name(),
                        r.worst_violation
                    ),
                );
            }
            to_value(&r)
        }
        Audit::IConv => match s.limit() {
            Some(limit) => {
                let mut out = Vec::new();
                for &eps in &c.eps_list {
                    let b = i_convergence_verdict(s, m, limit, ideal, eps, n)?;
                    tally.bundle(name, &b);
                    out.push(to_value(&b));
                }
                json!({ "limit": limit, "bundles": out })
            }
            None => json!({ "skipped": format!("{s} has no limit") }),
        },
        Audit::ICauchy => {
            let mut out = Vec::new();
            for &eps in &c.eps_list {
                for b in [
                    i_cauchy_def_verdict(s, m, ideal, eps, n)?,
                    i_cauchy_pair_verdict(s, m, ideal, eps, n)?,
                    i_cauchy_ek_verdict(s, m, ideal, eps, n)?,
                ] {
                    tally.bundle(name, &b);
                    out.push(to_value(&b));
                }
            }
            Value::Array(out)
        }
        Audit::IStar => istar(c, tally)?,
        Audit::CrossCheck => {
            let r = cauchy_criteria_cross_check(s, m, ideal, &c.eps_list, n)?;
            for row in r.rows.iter().filter(|r| r.conflict) {
                tally.violation(
                    name,
                    format!(
                        "criteria disagree at ε={}: def {}, pair {}, E_k {}",
                        row.epsilon, row.def, row.pair, row.ek
                    ),
                );
            }
            to_value(&r)
        }
        Audit::Implications => {
            let cell = GridCell {
                scenario: s.clone(),
                metric: m.clone(),
                ideal: *ideal,
            };
            let r = implication_audit(&[cell], &c.eps_list, n)?;
            for v in &r.violations {
                tally.violation(name, v.clone());
            }
            to_value(&r)
        }
        Audit::Counterexample => {
            let f = c.metric.weight.clone().unwrap_or_else(default_weight);
            // the pairs for l = l_max need indices up to 2^(l_max+2)
            let n = n.max(1 << (COUNTEREXAMPLE_L_MAX + 2));
            let r = counterexample_audit(COUNTEREXAMPLE_L_MAX, n, &f)?;
            for row in r.rows.iter().filter(|r| !r.pass) {
                tally.violation(name, format!("gap check failed for l={}", row.l));
            }
            to_value(&r)
        }
        Audit::Norms => norms(c, tally)?,
    })
}

/// `I*` verdicts along each candidate filter set, plus the construction
/// from the additive property where the ideal has it.
fn istar(c: &RunConfig, tally: &mut Tally) -> cstar_ideal::Result<Value> {
    let (s, m, ideal, n) = (&c.scenario, &c.metric.metric, &c.ideal, c.window);
    let candidates = filter_candidates(s, n);
    let mut per_eps = Vec::new();
    for &eps in &c.eps_list {
        let mut cauchy = Vec::new();
        for cand in &candidates {
            cauchy.push(i_star_cauchy_verdict(s, m, ideal, cand, eps, n)?);
        }
        // one M that works settles the question; no M found leaves it open
        let found = cauchy.iter().any(|b| b.decision() == Decision::In);
        tally.decision(
            "istar",
            "i_star_cauchy",
            eps,
            if found {
                Decision::In
            } else {
                Decision::Unknown
            },
        );
        let mut node = json!({ "epsilon": eps, "i_star_cauchy": to_value(&cauchy) });
        if let Some(limit) = s.limit() {
            let mut conv = Vec::new();
            for cand in &candidates {
                conv.push(i_star_convergence_verdict(
                    s, m, limit, ideal, cand, eps, n,
                )?);
            }
            let found = conv.iter().any(|b| b.decision() == Decision::In);
            tally.decision(
                "istar",
                "i_star_conv",
                eps,
                if found {
                    Decision::In
                } else {
                    Decision::Unknown
                },
            );
            node["i_star_conv"] = to_value(&conv);
        }
        per_eps.push(node);
    }
    let ap = match istar_witness_from_ap(s, m, ideal, &c.eps_list, n) {
        Ok(r) => to_value(&r),
        Err(e) => error_node(e),
    };
    Ok(json!({ "per_epsilon": per_eps, "from_ap": ap }))
}

fn norms(c: &RunConfig, tally: &mut Tally) -> cstar_ideal::Result<Value> {
    let norm = c.norm.as_ref().expect("validated: norms audit has a norm");
    let s = &c.scenario;
    let tol = ToleranceProfile::default();
    let pts = samples(s);
    let axioms = verify_norm_axioms(norm, &pts, &SCALARS, &tol)?;
    if !axioms.all_pass() {
        tally.violation("norms", format!("{norm} fails the norm axioms"));
    }
    let induced = induce_metric(norm)?;
    let metric_axioms = verify_axioms(&induced, &pts, &tol)?;
    if !metric_axioms.all_pass() {
        tally.violation(
            "norms",
            format!("{} fails the metric axioms", induced.name()),
        );
    }
    let invariance = invariance_audit(&induced, &pts, &SCALARS, &tol)?;
    if !(invariance.translation_pass && invariance.homogeneity_pass) {
        tally.violation(
            "norms",
            format!(
                "{} is not translation invariant and homogeneous",
                induced.name()
            ),
        );
    }
    let mut conv = Vec::new();
    if let Some(limit) = s.limit() {
        for &eps in &c.eps_list {
            let b = norm_convergence_verdict(s, norm, limit, eps, c.window)?;
            tally.bundle("norms", &b);
            conv.push(to_value(&b));
        }
    }
    Ok(json!({
        "norm_axioms": to_value(&axioms),
        "induced_metric_axioms": to_value(&metric_axioms),
        "invariance": to_value(&invariance),
        "norm_convergence": conv,
    }))
}
