//! Run configuration: a JSON object parsed field by field so that every
//! error names the offending field.

use std::path::{Path, PathBuf};

use cstar_ideal::{
    default_weight, induce_metric, make_diag_metric, make_discrete_metric,
    make_reciprocal_function_metric, make_scaled_function_metric, AlgebraElement, CstarMetric,
    CstarNorm, IdealDescriptor, SequenceScenario, ToleranceProfile,
};
use serde_json::{json, Map, Value};
use thiserror::Error;

pub const DEFAULT_WINDOW: usize = 10_000;
pub const MIN_WINDOW: usize = 64;
pub const WINDOW_ENV: &str = "CSTAR_SEQ_WINDOW";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config field `{field}`: {message}")]
    Field {
        field: &'static str,
        message: String,
    },
    #[error("cannot read config {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("config is not valid JSON: {0}")]
    Json(String),
}

fn field_err(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Audit {
    Axioms,
    IConv,
    ICauchy,
    IStar,
    CrossCheck,
    Implications,
    Counterexample,
    Norms,
}

impl Audit {
    pub const ALL: [Audit; 8] = [
        Audit::Axioms,
        Audit::IConv,
        Audit::ICauchy,
        Audit::IStar,
        Audit::CrossCheck,
        Audit::Implications,
        Audit::Counterexample,
        Audit::Norms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Audit::Axioms => "axioms",
            Audit::IConv => "iconv",
            Audit::ICauchy => "icauchy",
            Audit::IStar => "istar",
            Audit::CrossCheck => "crosscheck",
            Audit::Implications => "implications",
            Audit::Counterexample => "counterexample",
            Audit::Norms => "norms",
        }
    }

    pub fn from_name(name: &str) -> Option<Audit> {
        Audit::ALL.into_iter().find(|a| a.name() == name)
    }
}

/// A metric as named in a config, kept alongside the built metric so the
/// report can echo it.
#[derive(Clone)]
pub struct MetricChoice {
    pub label: String,
    pub metric: CstarMetric,
    /// The weight `f` for function-weighted metrics.
    pub weight: Option<AlgebraElement>,
}

#[derive(Clone)]
pub struct RunConfig {
    pub scenario: SequenceScenario,
    pub metric: MetricChoice,
    pub norm: Option<CstarNorm>,
    pub ideal: IdealDescriptor,
    pub eps_list: Vec<f64>,
    pub window: usize,
    pub audits: Vec<Audit>,
    pub output_path: Option<PathBuf>,
    pub strict: bool,
}

const KNOWN_FIELDS: [&str; 9] = [
    "scenario",
    "metric",
    "norm",
    "ideal",
    "eps_list",
    "window",
    "audits",
    "output_path",
    "strict",
];

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
        let env = std::env::var(WINDOW_ENV).ok();
        Self::from_value(&value, env.as_deref())
    }

    /// `env_window` is the raw value of the window override variable.
    pub fn from_value(value: &Value, env_window: Option<&str>) -> Result<Self, ConfigError> {
        let Value::Object(obj) = value else {
            return Err(ConfigError::Json("top level must be an object".into()));
        };
        for key in obj.keys() {
            if !KNOWN_FIELDS.contains(&key.as_str()) {
                return Err(ConfigError::Field {
                    field: "config",
                    message: format!("unknown field `{key}`"),
                });
            }
        }
        let scenario = parse_scenario(obj)?;
        let metric = parse_metric(
            obj.get("metric")
                .ok_or_else(|| field_err("metric", "missing"))?,
        )?;
        let norm = match obj.get("norm") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => {
                Some(CstarNorm::from_name(s).map_err(|e| field_err("norm", e.to_string()))?)
            }
            Some(_) => {
                return Err(field_err(
                    "norm",
                    "expected a string such as \"scaled-diag(1,2)\"",
                ))
            }
        };
        let ideal = match obj.get("ideal") {
            Some(Value::String(s)) => IdealDescriptor::from_name(s).ok_or_else(|| {
                field_err(
                    "ideal",
                    format!("unknown ideal `{s}` (fin, density0, block)"),
                )
            })?,
            Some(_) => return Err(field_err("ideal", "expected a string")),
            None => return Err(field_err("ideal", "missing")),
        };
        let eps_list = parse_eps_list(obj.get("eps_list"))?;
        let window = parse_window(obj.get("window"), env_window)?;
        let audits = parse_audits(obj.get("audits"), norm.is_some())?;
        let output_path = match obj.get("output_path") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(_) => return Err(field_err("output_path", "expected a string")),
        };
        let strict = match obj.get("strict") {
            None | Some(Value::Null) => false,
            Some(Value::Bool(b)) => *b,
            Some(_) => return Err(field_err("strict", "expected a boolean")),
        };
        Ok(RunConfig {
            scenario,
            metric,
            norm,
            ideal,
            eps_list,
            window,
            audits,
            output_path,
            strict,
        })
    }

    /// The effective configuration, as echoed in reports.
    pub fn echo(&self) -> Value {
        json!({
            "scenario": self.scenario.name(),
            "metric": self.metric.label,
            "norm": self.norm.as_ref().map(|n| n.name().to_string()),
            "ideal": self.ideal.name(),
            "eps_list": self.eps_list,
            "window": self.window,
            "audits": self.audits.iter().map(|a| a.name()).collect::<Vec<_>>(),
            "strict": self.strict,
        })
    }
}

fn parse_scenario(obj: &Map<String, Value>) -> Result<SequenceScenario, ConfigError> {
    match obj.get("scenario") {
        Some(Value::String(s)) => {
            SequenceScenario::from_name(s).map_err(|e| field_err("scenario", e.to_string()))
        }
        Some(_) => Err(field_err(
            "scenario",
            "expected a string such as \"harmonic\" or \"constant:0.5\"",
        )),
        None => Err(field_err("scenario", "missing")),
    }
}

/// `f` given as an array of samples or as `"const:<v>"` on the default grid.
pub fn parse_weight(v: &Value) -> Result<AlgebraElement, ConfigError> {
    let bad = |m: String| field_err("metric", m);
    match v {
        Value::String(s) => {
            let c = s
                .strip_prefix("const:")
                .ok_or_else(|| bad(format!("weight `{s}` must be an array or \"const:<v>\"")))?;
            let c: f64 = c
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad constant in `{s}`")))?;
            let grid = default_weight().descriptor().len();
            AlgebraElement::constant_function(grid, c).map_err(|e| bad(e.to_string()))
        }
        Value::Array(xs) => {
            let samples = xs
                .iter()
                .map(|x| {
                    x.as_f64()
                        .ok_or_else(|| bad("weight samples must be numbers".into()))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            AlgebraElement::real_function(&samples).map_err(|e| bad(e.to_string()))
        }
        _ => Err(bad("weight must be an array or \"const:<v>\"".into())),
    }
}

fn weight_label(f: &AlgebraElement, raw: Option<&Value>) -> String {
    match raw {
        Some(Value::String(s)) => s.clone(),
        Some(_) => format!("{} samples", f.descriptor().len()),
        None => "const:2".into(),
    }
}

/// Metric names: `diag`, `reciprocal`, `scaled`, `discrete`, `induced:<norm>`.
/// A bare string uses default parameters; an object carries `name` plus
/// `alpha`, `f` or `norm`.
pub fn parse_metric(v: &Value) -> Result<MetricChoice, ConfigError> {
    let bad = |m: String| field_err("metric", m);
    let (name, params) = match v {
        Value::String(s) => (s.as_str(), Map::new()),
        Value::Object(o) => {
            let name = o
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("object form needs a string `name`".into()))?;
            (name, o.clone())
        }
        _ => return Err(bad("expected a string or an object".into())),
    };
    for key in params.keys() {
        if !["name", "alpha", "f", "norm"].contains(&key.as_str()) {
            return Err(bad(format!("unknown parameter `{key}`")));
        }
    }
    let (name, inline_norm) = match name.split_once(':') {
        Some(("induced", n)) => ("induced", Some(n.to_string())),
        _ => (name, None),
    };
    let choice = match name {
        "diag" => {
            let alpha = params
                .get("alpha")
                .and_then(Value::as_f64)
                .ok_or_else(|| bad("diag needs a numeric `alpha`".into()))?;
            let metric = make_diag_metric(alpha).map_err(|e| bad(e.to_string()))?;
            MetricChoice {
                label: format!("diag(alpha={alpha})"),
                metric,
                weight: None,
            }
        }
        "scaled" | "reciprocal" => {
            let raw = params.get("f");
            let f = match raw {
                Some(v) => parse_weight(v)?,
                None => default_weight(),
            };
            let metric = if name == "scaled" {
                make_scaled_function_metric(f.clone())
            } else {
                make_reciprocal_function_metric(f.clone(), ToleranceProfile::default())
            }
            .map_err(|e| bad(e.to_string()))?;
            MetricChoice {
                label: format!("{name}(f={})", weight_label(&f, raw)),
                metric,
                weight: Some(f),
            }
        }
        "discrete" => MetricChoice {
            label: "discrete".into(),
            metric: make_discrete_metric(),
            weight: None,
        },
        "induced" => {
            let norm_name = match (inline_norm, params.get("norm")) {
                (Some(n), _) => n,
                (None, Some(Value::String(n))) => n.clone(),
                _ => {
                    return Err(bad(
                        "induced needs a norm, as \"induced:<norm>\" or `norm`".into()
                    ))
                }
            };
            let norm = CstarNorm::from_name(&norm_name).map_err(|e| bad(e.to_string()))?;
            let metric = induce_metric(&norm).map_err(|e| bad(e.to_string()))?;
            MetricChoice {
                label: format!("induced:{}", norm.name()),
                metric,
                weight: None,
            }
        }
        other => {
            return Err(bad(format!(
                "unknown metric `{other}` (diag, reciprocal, scaled, discrete, induced:<norm>)"
            )))
        }
    };
    Ok(choice)
}

fn parse_eps_list(v: Option<&Value>) -> Result<Vec<f64>, ConfigError> {
    let Some(Value::Array(xs)) = v else {
        return Err(field_err(
            "eps_list",
            "expected a nonempty array of positive numbers",
        ));
    };
    if xs.is_empty() {
        return Err(field_err("eps_list", "must not be empty"));
    }
    xs.iter()
        .map(|x| match x.as_f64() {
            Some(e) if e > 0.0 && e.is_finite() => Ok(e),
            _ => Err(field_err(
                "eps_list",
                format!("entries must be finite and > 0, got {x}"),
            )),
        })
        .collect()
}

fn parse_window(v: Option<&Value>, env_window: Option<&str>) -> Result<usize, ConfigError> {
    let n = match v {
        Some(Value::Number(n)) => n
            .as_u64()
            .ok_or_else(|| field_err("window", format!("expected a positive integer, got {n}")))?
            as usize,
        Some(Value::Null) | None => match env_window {
            Some(s) => s.trim().parse::<usize>().map_err(|_| {
                field_err(
                    "window",
                    format!("{WINDOW_ENV}=`{s}` is not a positive integer"),
                )
            })?,
            None => DEFAULT_WINDOW,
        },
        Some(_) => return Err(field_err("window", "expected a positive integer")),
    };
    if n < MIN_WINDOW {
        return Err(field_err(
            "window",
            format!("must be at least {MIN_WINDOW}, got {n}"),
        ));
    }
    Ok(n)
}

fn parse_audits(v: Option<&Value>, has_norm: bool) -> Result<Vec<Audit>, ConfigError> {
    let mut audits = match v {
        None | Some(Value::Null) => {
            let mut d = vec![
                Audit::Axioms,
                Audit::IConv,
                Audit::ICauchy,
                Audit::IStar,
                Audit::CrossCheck,
                Audit::Implications,
            ];
            if has_norm {
                d.push(Audit::Norms);
            }
            d
        }
        Some(Value::Array(xs)) => xs
            .iter()
            .map(|x| {
                x.as_str()
                    .and_then(Audit::from_name)
                    .ok_or_else(|| field_err("audits", format!("unknown audit {x}")))
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(field_err("audits", "expected an array of audit names")),
    };
    if audits.contains(&Audit::Norms) && !has_norm {
        return Err(field_err("norm", "the norms audit needs a norm"));
    }
    // fixed execution order
    audits.sort();
    audits.dedup();
    Ok(audits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Value {
        json!({
            "scenario": "harmonic",
            "metric": {"name": "diag", "alpha": 0.5},
            "ideal": "fin",
            "eps_list": [0.1],
        })
    }

    fn field_of(v: Value) -> &'static str {
        match RunConfig::from_value(&v, None) {
            Err(ConfigError::Field { field, .. }) => field,
            Err(e) => panic!("unexpected error {e}"),
            Ok(_) => panic!("config accepted"),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::from_value(&base(), None).unwrap();
        assert_eq!(c.window, DEFAULT_WINDOW);
        assert!(!c.strict);
        assert_eq!(c.metric.label, "diag(alpha=0.5)");
        assert!(!c.audits.contains(&Audit::Norms));
    }

    #[test]
    fn env_window_applies_only_without_explicit_window() {
        assert_eq!(
            RunConfig::from_value(&base(), Some("256")).unwrap().window,
            256
        );
        let mut v = base();
        v["window"] = json!(128);
        assert_eq!(RunConfig::from_value(&v, Some("256")).unwrap().window, 128);
        assert_eq!(field_of(base_with("window", json!(10))), "window");
        assert!(RunConfig::from_value(&base(), Some("abc")).is_err());
    }

    fn base_with(key: &str, value: Value) -> Value {
        let mut v = base();
        v[key] = value;
        v
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(field_of(base_with("eps_list", json!([]))), "eps_list");
        assert_eq!(
            field_of(base_with("eps_list", json!([0.1, -1.0]))),
            "eps_list"
        );
        assert_eq!(
            field_of(base_with("scenario", json!("geometric"))),
            "scenario"
        );
        assert_eq!(field_of(base_with("metric", json!("euclid"))), "metric");
        assert_eq!(field_of(base_with("ideal", json!("statistical"))), "ideal");
        assert_eq!(field_of(base_with("audits", json!(["plots"]))), "audits");
        assert_eq!(field_of(base_with("audits", json!(["norms"]))), "norm");
        assert_eq!(field_of(base_with("strict", json!("yes"))), "strict");
        assert_eq!(field_of(base_with("colour", json!(1))), "config");
    }

    #[test]
    fn metric_forms() {
        for (v, label) in [
            (json!("discrete"), "discrete"),
            (json!("scaled"), "scaled(f=const:2)"),
            (
                json!({"name": "reciprocal", "f": "const:3"}),
                "reciprocal(f=const:3)",
            ),
            (
                json!({"name": "scaled", "f": [1.0, 2.0]}),
                "scaled(f=2 samples)",
            ),
            (
                json!("induced:scaled-diag(1,2)"),
                "induced:scaled-diag(1,2)",
            ),
            (
                json!({"name": "induced", "norm": "real-abs"}),
                "induced:real-abs",
            ),
        ] {
            assert_eq!(parse_metric(&v).unwrap().label, label);
        }
        assert!(parse_metric(&json!({"name": "diag"})).is_err());
        assert!(parse_metric(&json!({"name": "scaled", "f": "linear"})).is_err());
    }

    #[test]
    fn audits_run_in_fixed_order() {
        let v = base_with("audits", json!(["crosscheck", "axioms", "crosscheck"]));
        let c = RunConfig::from_value(&v, None).unwrap();
        assert_eq!(c.audits, vec![Audit::Axioms, Audit::CrossCheck]);
    }
}
