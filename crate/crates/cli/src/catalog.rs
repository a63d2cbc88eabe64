//! The `list-scenarios` table.

use cstar_ideal::SequenceScenario;

const METRICS: [(&str, &str); 5] = [
    (
        "diag",
        "alpha: real >= 0; d(x,y) = |x-y| diag(1, alpha) in M2",
    ),
    (
        "scaled",
        "f: samples array or \"const:<v>\" (default const:2); d(x,y) = |x-y| f",
    ),
    (
        "reciprocal",
        "f: as for scaled; d(x,y) = f / |x-y| off the diagonal",
    ),
    ("discrete", "none; d(x,y) = 1_A for x != y"),
    (
        "induced:<norm>",
        "norm: a norm name below; d(x,y) = ||x - y||_A",
    ),
];

const NORMS: [(&str, &str); 2] = [
    ("scaled-diag(a,b)", "a, b: real > 0; ||x|| = |x| diag(a, b)"),
    ("real-abs", "none; ||x|| = |x| in M1"),
];

const IDEALS: [(&str, &str); 3] = [
    ("fin", "finite sets; has the additive property"),
    (
        "density0",
        "sets of natural density zero; has the additive property",
    ),
    (
        "block",
        "sets meeting finitely many dyadic blocks; lacks the additive property",
    ),
];

fn scenario_doc(name: &str) -> &'static str {
    match name {
        "harmonic" => "x_n = 1/n",
        "block-harmonic" => "x_n = 1/j for n in block j = {2^(j-1)(2s-1)}",
        "alternating" => "x_n = -1 on block 1, 1 elsewhere",
        _ => "v: real; x_n = v",
    }
}

fn section(out: &mut String, title: &str, rows: &[(&str, &str)]) {
    out.push_str(title);
    out.push('\n');
    for (name, doc) in rows {
        out.push_str(&format!("  {name:<18} {doc}\n"));
    }
}

pub fn list_scenarios() -> String {
    let scenarios: Vec<(&str, &str)> = SequenceScenario::builtin_names()
        .iter()
        .map(|&n| (n, scenario_doc(n)))
        .collect();
    let mut out = String::new();
    section(&mut out, "scenarios", &scenarios);
    section(&mut out, "metrics", &METRICS);
    section(&mut out, "norms", &NORMS);
    section(&mut out, "ideals", &IDEALS);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_the_built_ins() {
        let t = list_scenarios();
        for name in [
            "harmonic",
            "block-harmonic",
            "discrete",
            "constant:<v>",
            "density0",
        ] {
            assert!(t.contains(name), "{name}");
        }
    }
}
