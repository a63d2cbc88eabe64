//! Ideal convergence and ideal Cauchy criteria for scenario sequences.
//!
//! Every verdict is three-valued. `In` and `NotIn` always come with a
//! certificate built from exact window scans plus interval bounds on the
//! sequence tail; anything else is reported as `Unknown`.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::ideal::{
    ap_lemma_witness, block_elements, block_min_at_least, filter_membership, membership, BlockSet,
    Decision, IdealDescriptor, SetDescription, TailCertificate, Verdict,
};
use crate::metric::{distance_norm, make_scaled_function_metric, CstarMetric, NormProfile, Span};
use crate::scenario::{ClassMap, SequenceScenario};
use crate::window::Window;

/// Largest explicit block count tried when certifying block tails.
const MAX_EXPLICIT_BLOCKS: u64 = 4096;
/// Largest index searched for a center near the limit.
const MAX_CENTER_INDEX: u64 = 1 << 20;
/// Blocks searched for refuting pairs.
const PAIR_SEARCH_BLOCKS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    Point(f64),
    /// The term `x_n`.
    Index(u64),
    /// The common value of class `k`, for centers whose index is too large
    /// to scan.
    Class(u64),
}

impl std::fmt::Display for Center {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Center::Point(x) => write!(f, "{x}"),
            Center::Index(n) => write!(f, "x_{n}"),
            Center::Class(k) => write!(f, "class {k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Question {
    IConv,
    ICauchyDef,
    ICauchyPair,
    ICauchyEk,
    IStarCauchy,
    IStarConv,
    NormConv,
}

impl Question {
    pub fn label(self) -> &'static str {
        match self {
            Question::IConv => "i_conv",
            Question::ICauchyDef => "i_cauchy_def",
            Question::ICauchyPair => "i_cauchy_pair",
            Question::ICauchyEk => "i_cauchy_ek",
            Question::IStarCauchy => "i_star_cauchy",
            Question::IStarConv => "i_star_conv",
            Question::NormConv => "norm_conv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictBundle {
    pub question: Question,
    pub epsilon: f64,
    pub verdict: Verdict,
    /// The set the verdict is about: `A_ε`, the exceptional set `D`, the
    /// set `K`, or the filter witness `M`.
    pub witness: Option<SetDescription>,
    /// Center `n₀` or cut `k`, depending on the question.
    pub witness_index: Option<u64>,
    /// Two classes whose terms are at least `ε` apart, for refutations.
    pub witness_pair: Option<(u64, u64)>,
    /// The norm bound or gap behind the decision.
    pub gap: Option<f64>,
    pub trace: Vec<String>,
}

impl VerdictBundle {
    pub fn new(question: Question, epsilon: f64, verdict: Verdict) -> Self {
        VerdictBundle {
            question,
            epsilon,
            verdict,
            witness: None,
            witness_index: None,
            witness_pair: None,
            gap: None,
            trace: Vec::new(),
        }
    }

    pub fn decision(&self) -> Decision {
        self.verdict.decision
    }
}

fn check_args(eps: f64, window: usize) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!(
            "epsilon must be finite and > 0, got {eps}"
        )));
    }
    if window == 0 {
        return Err(Error::Domain("window must be at least 1".into()));
    }
    Ok(())
}

fn center_value(s: &SequenceScenario, c: Center) -> Result<f64> {
    match c {
        Center::Point(x) if x.is_finite() => Ok(x),
        Center::Point(x) => Err(Error::Domain(format!("center must be finite, got {x}"))),
        Center::Index(0) => Err(Error::Domain("indices start at 1".into())),
        Center::Index(n) => Ok(s.at(n)),
        Center::Class(0) => Err(Error::Domain("classes start at 1".into())),
        Center::Class(k) => Ok(s.class_value(k)),
    }
}

/// Tail of `{n : ‖d(x_n, c)‖ ≥ ε}` beyond the window.
fn far_tail(
    s: &SequenceScenario,
    m: &CstarMetric,
    c: f64,
    eps: f64,
    window: usize,
) -> TailCertificate {
    let profile = m.profile();
    let point = Span::point(c);
    match s.class_map() {
        ClassMap::Index => match profile.bounds(&s.hull_beyond(window as u64), &point) {
            Some(b) if b.all_below(eps) => TailCertificate::Finite,
            Some(b) if b.all_at_least(eps) => TailCertificate::Cofinite,
            _ => TailCertificate::UnknownTail,
        },
        ClassMap::Block => {
            let mut b = 16;
            while b <= MAX_EXPLICIT_BLOCKS {
                let Some(bounds) = profile.bounds(&s.hull_beyond(b), &point) else {
                    return TailCertificate::UnknownTail;
                };
                let far = |j: u64| profile.value(s.class_value(j), c).is_some_and(|v| v >= eps);
                if bounds.all_below(eps) {
                    return TailCertificate::blocks(
                        (1..=b).filter(|&j| far(j)).map(|j| j as u32).collect(),
                    );
                }
                if bounds.all_at_least(eps) {
                    return TailCertificate::co_blocks(
                        (1..=b).filter(|&j| !far(j)).map(|j| j as u32).collect(),
                    );
                }
                b *= 2;
            }
            TailCertificate::UnknownTail
        }
    }
}

/// `A_ε(c) = {n : ‖d(x_n, c)‖ ≥ ε}`.
pub fn a_epsilon_set(
    s: &SequenceScenario,
    m: &CstarMetric,
    center: Center,
    eps: f64,
    window: usize,
) -> Result<SetDescription> {
    check_args(eps, window)?;
    let c = center_value(s, center)?;
    let w = Window::from_predicate(window, |n| m.fast_norm(s.at(n), c) >= eps);
    let stride = (window / 64).max(1);
    for n in (1..=window as u64).step_by(stride) {
        distance_norm(m, s.at(n), c)?;
    }
    Ok(SetDescription::new(w, far_tail(s, m, c, eps, window)))
}

/// Candidate centers: the first class within `ε` of the limit, then powers
/// of two. The first class may lie past the window; block classes whose
/// index does not fit in a `u64` are given as [`Center::Class`].
pub fn candidate_centers(
    s: &SequenceScenario,
    m: &CstarMetric,
    eps: f64,
    window: usize,
) -> Vec<Center> {
    let mut out = Vec::new();
    if let Some(limit) = s.limit() {
        let classes = match s.class_map() {
            ClassMap::Index => MAX_CENTER_INDEX.max(window as u64),
            ClassMap::Block => MAX_EXPLICIT_BLOCKS,
        };
        let profile = m.profile();
        let point = Span::point(limit);
        // stop once every later class is certified ε-far from the limit
        let hopeless = |k: u64| {
            k.is_power_of_two()
                && profile
                    .bounds(&s.hull_beyond(k), &point)
                    .is_some_and(|b| b.all_at_least(eps))
        };
        let mut first = None;
        for k in 1..=classes {
            if m.fast_norm(s.class_value(k), limit) < eps {
                first = Some(k);
                break;
            }
            if hopeless(k) {
                break;
            }
        }
        if let Some(k) = first {
            out.push(match s.checked_representative(k) {
                Some(n) => Center::Index(n),
                None => Center::Class(k),
            });
        }
    }
    let mut p = 1u64;
    while p as usize <= window {
        if !out.contains(&Center::Index(p)) {
            out.push(Center::Index(p));
        }
        p *= 2;
    }
    out
}

pub fn i_convergence_verdict(
    s: &SequenceScenario,
    m: &CstarMetric,
    limit: f64,
    ideal: &IdealDescriptor,
    eps: f64,
    window: usize,
) -> Result<VerdictBundle> {
    let a = a_epsilon_set(s, m, Center::Point(limit), eps, window)?;
    let verdict = membership(ideal, &a);
    let mut bundle = VerdictBundle::new(Question::IConv, eps, verdict);
    bundle.trace.push(format!("A_ε({limit}) = {a}"));
    bundle.witness = Some(a);
    Ok(bundle)
}

fn empty_with_tail(window: usize, tail: TailCertificate) -> SetDescription {
    SetDescription::new(Window::empty(window), tail)
}

fn co_block(window: usize, j: u32) -> SetDescription {
    SetDescription::block_union(window, &BlockSet::from([j])).complement()
}

fn block_outside(ideal: &IdealDescriptor, j: u64, window: usize) -> bool {
    block_elements(j as u32, window)
        .map(|b| membership(ideal, &b).decision == Decision::NotIn)
        .unwrap_or(false)
}

/// A reason why `A_ε(x_{n₀}) ∉ I` for every `n₀`, when one can be proved.
fn refute_all_centers(
    s: &SequenceScenario,
    m: &CstarMetric,
    ideal: &IdealDescriptor,
    eps: f64,
    window: usize,
) -> Option<String> {
    let profile = m.profile();
    if profile == NormProfile::Opaque {
        return None;
    }
    if s.is_injective() {
        let sep = profile.separation(&s.hull_beyond(0));
        if sep >= eps {
            match s.class_map() {
                ClassMap::Index => {
                    return Some(format!(
                        "distinct terms are at least {sep} apart, so each A_ε(x_n₀) contains ℕ ∖ {{n₀}}"
                    ))
                }
                ClassMap::Block => {
                    if membership(ideal, &co_block(window, 1)).decision == Decision::NotIn {
                        return Some(format!(
                            "terms of distinct blocks are at least {sep} apart, so each A_ε(x_n₀) contains a co-block outside {ideal}"
                        ));
                    }
                }
            }
        }
    }
    if s.class_map() != ClassMap::Block {
        return None;
    }
    let mut checked = 0u64;
    let mut bc = 1u64;
    while bc <= PAIR_SEARCH_BLOCKS {
        for j0 in (checked + 1)..=bc {
            let tail = far_tail(s, m, s.class_value(j0), eps, window);
            if membership(ideal, &empty_with_tail(window, tail)).decision != Decision::NotIn {
                return None;
            }
        }
        checked = bc;
        let hull = s.hull_beyond(bc);
        let far_block = (1..=bc).find(|&i| {
            profile
                .bounds(&Span::point(s.class_value(i)), &hull)
                .is_some_and(|b| b.all_at_least(eps))
                && block_outside(ideal, i, window)
        });
        if let Some(i) = far_block {
            return Some(format!(
                "centers in blocks ≤ {bc} fail individually; every later center is ≥ ε from all of Δ_{i} ∉ {ideal}"
            ));
        }
        bc *= 2;
    }
    None
}

/// Definition form: some `n₀` with `A_ε(x_{n₀}) ∈ I`.
pub fn i_cauchy_def_verdict(
    s: &SequenceScenario,
    m: &CstarMetric,
    ideal: &IdealDescriptor,
    eps: f64,
    window: usize,
) -> Result<VerdictBundle> {
    check_args(eps, window)?;
    let mut trace = Vec::new();
    for c in candidate_centers(s, m, eps, window) {
        let a = a_epsilon_set(s, m, c, eps, window)?;
        let v = membership(ideal, &a);
        trace.push(format!(
            "center {c}: tail {} → {}",
            a.tail.tag(),
            v.decision
        ));
        if v.decision == Decision::In {
            let verdict = Verdict::new(
                Decision::In,
                format!("A_ε({c}) ∈ {ideal} [{}]", v.certificate),
            );
            let mut bundle = VerdictBundle::new(Question::ICauchyDef, eps, verdict);
            bundle.witness = Some(a);
            bundle.witness_index = match c {
                Center::Index(n0) => Some(n0),
                _ => None,
            };
            if let Center::Class(k) = c {
                bundle.trace.push(format!("n₀ is any index of class {k}"));
            }
            trace.append(&mut bundle.trace);
            bundle.trace = trace;
            return Ok(bundle);
        }
    }
    let verdict = match refute_all_centers(s, m, ideal, eps, window) {
        Some(reason) => Verdict::new(Decision::NotIn, reason),
        None => Verdict::new(
            Decision::Unknown,
            "no scheduled center gave a set in the ideal",
        ),
    };
    let mut bundle = VerdictBundle::new(Question::ICauchyDef, eps, verdict);
    bundle.trace = trace;
    Ok(bundle)
}

/// Hulls covering every term `x_n` with `n ∉ d`.
fn values_off(s: &SequenceScenario, d: &SetDescription, window: usize) -> Vec<Span> {
    let mut pts: Vec<f64> = d.window.complement().iter().map(|n| s.at(n)).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out: Vec<Span> = pts.into_iter().map(Span::point).collect();
    let rest = d.tail.complement();
    match (s.class_map(), rest) {
        (_, TailCertificate::Finite) => {}
        (ClassMap::Index, _) => out.push(s.hull_beyond(window as u64)),
        (ClassMap::Block, TailCertificate::BlockBounded(j)) => {
            out.extend(j.iter().map(|&j| Span::point(s.class_value(j as u64))));
        }
        (ClassMap::Block, TailCertificate::CoBlockBounded(j)) => {
            let b = *j.iter().next_back().expect("nonempty") as u64;
            out.extend(
                (1..=b)
                    .filter(|k| !j.contains(&(*k as u32)))
                    .map(|k| Span::point(s.class_value(k))),
            );
            out.push(s.hull_beyond(b));
        }
        (ClassMap::Block, _) => out.push(s.hull_beyond(0)),
    }
    out
}

/// Two classes outside `I` whose terms are `ε` apart.
fn far_block_pair(
    s: &SequenceScenario,
    m: &CstarMetric,
    ideal: &IdealDescriptor,
    eps: f64,
    window: usize,
) -> Option<(u64, u64, f64)> {
    let outside: Vec<u64> = (1..=PAIR_SEARCH_BLOCKS)
        .filter(|&j| block_outside(ideal, j, window))
        .collect();
    for (b, &j) in outside.iter().enumerate() {
        for &i in &outside[..b] {
            let g = m.fast_norm(s.class_value(i), s.class_value(j));
            if g >= eps {
                return Some((i, j, g));
            }
        }
    }
    None
}

/// Exceptional-set form: some `D ∈ I` with `‖d(x_m, x_n)‖ < ε` off `D`.
pub fn i_cauchy_pair_verdict(
    s: &SequenceScenario,
    m: &CstarMetric,
    ideal: &IdealDescriptor,
    eps: f64,
    window: usize,
) -> Result<VerdictBundle> {
    check_args(eps, window)?;
    let profile = m.profile();
    let mut candidates: Vec<(String, SetDescription)> = Vec::new();
    if let (ClassMap::Block, Some(limit)) = (s.class_map(), s.limit()) {
        let point = Span::point(limit);
        let j = (1..=MAX_EXPLICIT_BLOCKS).find(|&j| {
            profile
                .bounds(&s.hull_beyond(j - 1), &point)
                .is_some_and(|b| b.all_below(eps / 2.0))
        });
        if let Some(j) = j {
            let blocks: BlockSet = (1..=j as u32).collect();
            candidates.push((
                format!("first {j} blocks"),
                SetDescription::block_union(window, &blocks),
            ));
        }
    }
    for c in candidate_centers(s, m, eps / 3.0, window) {
        candidates.push((
            format!("A_(ε/3)({c})"),
            a_epsilon_set(s, m, c, eps / 3.0, window)?,
        ));
    }
    candidates.push(("∅".into(), SetDescription::empty(window)));

    let mut trace = Vec::new();
    for (label, d) in candidates {
        let v = membership(ideal, &d);
        if v.decision != Decision::In {
            trace.push(format!("D = {label}: {} in {ideal}", v.decision));
            continue;
        }
        let Some(b) = profile.pair_sup(&values_off(s, &d, window)) else {
            trace.push(format!("D = {label}: no closed-form pair bound"));
            continue;
        };
        if b.all_below(eps) {
            let verdict = Verdict::new(
                Decision::In,
                format!(
                    "D = {label} ∈ {ideal} and pairs off D stay within {}",
                    b.sup
                ),
            );
            let mut bundle = VerdictBundle::new(Question::ICauchyPair, eps, verdict);
            trace.push(format!("D = {label}: pair sup {} < ε", b.sup));
            bundle.witness = Some(d);
            bundle.gap = Some(b.sup);
            bundle.trace = trace;
            return Ok(bundle);
        }
        trace.push(format!("D = {label}: pair sup {} ≥ ε", b.sup));
    }

    let mut bundle = VerdictBundle::new(
        Question::ICauchyPair,
        eps,
        Verdict::new(Decision::Unknown, "no candidate D certified"),
    );
    if profile != NormProfile::Opaque && s.is_injective() {
        let sep = profile.separation(&s.hull_beyond(0));
        let co_outside = match s.class_map() {
            ClassMap::Index => true,
            ClassMap::Block => membership(ideal, &co_block(window, 1)).decision == Decision::NotIn,
        };
        if sep >= eps && co_outside {
            bundle.verdict = Verdict::new(
                Decision::NotIn,
                format!("the complement of any D ∈ {ideal} holds two classes, and distinct classes are {sep} apart"),
            );
            bundle.gap = Some(sep);
        }
    }
    if bundle.decision() == Decision::Unknown && s.class_map() == ClassMap::Block {
        if let Some((i, j, g)) = far_block_pair(s, m, ideal, eps, window) {
            bundle.verdict = Verdict::new(
                Decision::NotIn,
                format!("Δ_{i}, Δ_{j} ∉ {ideal} are never inside D and their terms are {g} apart"),
            );
            bundle.witness_pair = Some((i, j));
            bundle.gap = Some(g);
        }
    }
    bundle.trace = trace;
    Ok(bundle)
}

/// Uniform decision for `E_c` with `c` ranging over `hull`, where blocks
/// `≤ b` are explicit.
fn uniform_block_decision(
    s: &SequenceScenario,
    m: &CstarMetric,
    ideal: &IdealDescriptor,
    eps: f64,
    window: usize,
    b: u64,
) -> Decision {
    let profile = m.profile();
    let hull = s.hull_beyond(b);
    let mut always = BlockSet::new();
    let mut never = BlockSet::new();
    let mut mixed = BlockSet::new();
    for i in 1..=b {
        let Some(bounds) = profile.bounds(&Span::point(s.class_value(i)), &hull) else {
            return Decision::Unknown;
        };
        if bounds.all_at_least(eps) {
            always.insert(i as u32);
        } else if bounds.all_below(eps) {
            never.insert(i as u32);
        } else {
            mixed.insert(i as u32);
        }
    }
    // E_c lies between the two extremes; both must agree
    let inner = profile.pair_sup(&[hull]);
    let (small, large) = if inner.is_some_and(|p| p.all_below(eps)) {
        let large: BlockSet = always.union(&mixed).copied().collect();
        (
            TailCertificate::blocks(always),
            TailCertificate::blocks(large),
        )
    } else if s.is_injective() && profile.separation(&hull) >= eps {
        // the center's own block is never far; any index past `b` stands in
        never.insert(b as u32 + 1);
        let small: BlockSet = never.union(&mixed).copied().collect();
        (
            TailCertificate::co_blocks(small),
            TailCertificate::co_blocks(never),
        )
    } else {
        return Decision::Unknown;
    };
    let lo = membership(ideal, &empty_with_tail(window, small)).decision;
    let hi = membership(ideal, &empty_with_tail(window, large)).decision;
    if lo == hi {
        lo
    } else {
        Decision::Unknown
    }
}

/// `E_k` form: `K = {k : E_k ∉ I} ∈ I`, with `E_k = {n : ‖d(x_n, x_k)‖ ≥ ε}`.
pub fn i_cauchy_ek_verdict(
    s: &SequenceScenario,
    m: &CstarMetric,
    ideal: &IdealDescriptor,
    eps: f64,
    window: usize,
) -> Result<VerdictBundle> {
    check_args(eps, window)?;
    let profile = m.profile();
    if profile == NormProfile::Opaque {
        return Ok(VerdictBundle::new(
            Question::ICauchyEk,
            eps,
            Verdict::new(Decision::Unknown, "metric has no closed-form bound"),
        ));
    }
    let mut cache: HashMap<u64, Decision> = HashMap::new();
    let mut decide = |class: u64| {
        *cache.entry(class).or_insert_with(|| {
            let tail = far_tail(s, m, s.class_value(class), eps, window);
            membership(ideal, &empty_with_tail(window, tail)).decision
        })
    };
    let decisions: Vec<Decision> = (1..=window as u64).map(|k| decide(s.class_of(k))).collect();
    let low_w = Window::from_predicate(window, |k| decisions[k as usize - 1] == Decision::NotIn);
    let high_w = Window::from_predicate(window, |k| decisions[k as usize - 1] != Decision::In);
    let undecided = decisions
        .iter()
        .filter(|d| **d == Decision::Unknown)
        .count();

    let (low_t, high_t, note) = match s.class_map() {
        ClassMap::Index => {
            let hull = s.hull_beyond(window as u64);
            if profile.pair_sup(&[hull]).is_some_and(|p| p.all_below(eps)) {
                (
                    TailCertificate::Finite,
                    TailCertificate::Finite,
                    "tail centers: every E_k finite beyond the window",
                )
            } else if s.is_injective() && profile.separation(&s.hull_beyond(0)) >= eps {
                (
                    TailCertificate::Cofinite,
                    TailCertificate::Cofinite,
                    "tail centers: every E_k cofinite",
                )
            } else {
                (
                    TailCertificate::UnknownTail,
                    TailCertificate::UnknownTail,
                    "tail centers undecided",
                )
            }
        }
        ClassMap::Block => {
            let mut found = None;
            let mut b = 16;
            while b <= MAX_EXPLICIT_BLOCKS && found.is_none() {
                let u = uniform_block_decision(s, m, ideal, eps, window, b);
                if u != Decision::Unknown {
                    found = Some((b, u));
                }
                b *= 2;
            }
            let b = found.map_or(16, |(b, _)| b);
            let uniform = found.map_or(Decision::Unknown, |(_, u)| u);
            let explicit: Vec<(u32, Decision)> = (1..=b).map(|j| (j as u32, decide(j))).collect();
            let pick = |f: &dyn Fn(Decision) -> bool| -> BlockSet {
                explicit
                    .iter()
                    .filter(|(_, d)| f(*d))
                    .map(|(j, _)| *j)
                    .collect()
            };
            let low = match uniform {
                Decision::NotIn => TailCertificate::co_blocks(pick(&|d| d != Decision::NotIn)),
                _ => TailCertificate::blocks(pick(&|d| d == Decision::NotIn)),
            };
            let high = match uniform {
                Decision::In => TailCertificate::blocks(pick(&|d| d != Decision::In)),
                _ => TailCertificate::co_blocks(pick(&|d| d == Decision::In)),
            };
            (low, high, "tail blocks decided uniformly")
        }
    };
    let low = SetDescription::new(low_w, low_t);
    let high = SetDescription::new(high_w, high_t);
    let v_low = membership(ideal, &low);
    let v_high = membership(ideal, &high);
    let mut trace = vec![
        format!("K ⊇ {low}"),
        format!("K ⊆ {high}"),
        format!("{undecided} window centers undecided; {note}"),
    ];
    let (verdict, witness) = if v_high.decision == Decision::In {
        (
            Verdict::new(
                Decision::In,
                format!("upper bound for K is in {ideal} [{}]", v_high.certificate),
            ),
            high,
        )
    } else if v_low.decision == Decision::NotIn {
        (
            Verdict::new(
                Decision::NotIn,
                format!(
                    "lower bound for K is outside {ideal} [{}]",
                    v_low.certificate
                ),
            ),
            low,
        )
    } else {
        trace.push(format!(
            "lower: {}, upper: {}",
            v_low.decision, v_high.decision
        ));
        (
            Verdict::new(Decision::Unknown, "K is sensitive to undecided E_k"),
            low,
        )
    };
    let mut bundle = VerdictBundle::new(Question::ICauchyEk, eps, verdict);
    bundle.witness = Some(witness);
    bundle.trace = trace;
    Ok(bundle)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckRow {
    pub epsilon: f64,
    pub def: Decision,
    pub pair: Decision,
    pub ek: Decision,
    pub conflict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub rows: Vec<CrossCheckRow>,
    pub conflicts: usize,
}

/// Runs the three `I`-Cauchy criteria and flags decided disagreements.
pub fn cauchy_criteria_cross_check(
    s: &SequenceScenario,
    m: &CstarMetric,
    ideal: &IdealDescriptor,
    eps_list: &[f64],
    window: usize,
) -> Result<CrossCheckReport> {
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let def = i_cauchy_def_verdict(s, m, ideal, eps, window)?.decision();
        let pair = i_cauchy_pair_verdict(s, m, ideal, eps, window)?.decision();
        let ek = i_cauchy_ek_verdict(s, m, ideal, eps, window)?.decision();
        let conflict =
            def.conflicts_with(pair) || def.conflicts_with(ek) || pair.conflicts_with(ek);
        rows.push(CrossCheckRow {
            epsilon: eps,
            def,
            pair,
            ek,
            conflict,
        });
    }
    let conflicts = rows.iter().filter(|r| r.conflict).count();
    Ok(CrossCheckReport { rows, conflicts })
}

/// Smallest `k ≤ window` with `ok(k)`, assuming `ok` is monotone.
fn minimal_cut(window: u64, ok: impl Fn(u64) -> bool) -> Option<u64> {
    if !ok(window) {
        return None;
    }
    let (mut lo, mut hi) = (0, window);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// Blocks met by `M` beyond the window: explicit ones, and the bound past
/// which every block is met (for co-type tails).
struct PresentBlocks {
    explicit: Vec<u64>,
    all_beyond: Option<u64>,
}

impl PresentBlocks {
    fn of(tail: &TailCertificate) -> Option<Self> {
        match tail {
            TailCertificate::BlockBounded(j) => Some(PresentBlocks {
                explicit: j.iter().map(|&j| j as u64).collect(),
                all_beyond: None,
            }),
            TailCertificate::CoBlockBounded(j) => {
                let b = *j.iter().next_back().expect("nonempty") as u64;
                Some(PresentBlocks {
                    explicit: (1..=b).filter(|k| !j.contains(&(*k as u32))).collect(),
                    all_beyond: Some(b),
                })
            }
            TailCertificate::Cofinite => Some(PresentBlocks {
                explicit: Vec::new(),
                all_beyond: Some(0),
            }),
            _ => None,
        }
    }

    fn spans(&self, s: &SequenceScenario) -> Vec<Span> {
        let mut out: Vec<Span> = self
            .explicit
            .iter()
            .map(|&j| Span::point(s.class_value(j)))
            .collect();
        if let Some(b) = self.all_beyond {
            out.push(s.hull_beyond(b));
        }
        out
    }

    /// Explicit blocks extended to at least `upto` for co-type tails.
    fn listed(&self, upto: u64) -> Vec<u64> {
        let mut out = self.explicit.clone();
        if let Some(b) = self.all_beyond {
            out.extend((b + 1)..=upto.max(b));
        }
        out
    }
}

fn filter_gate(ideal: &IdealDescriptor, witness: &SetDescription) -> Option<Verdict> {
    let fv = filter_membership(ideal, witness);
    match fv.decision {
        Decision::In => None,
        Decision::NotIn => Some(Verdict::new(
            Decision::NotIn,
            format!(
                "witness M is not in the filter of {ideal} [{}]",
                fv.certificate
            ),
        )),
        Decision::Unknown => Some(Verdict::new(
            Decision::Unknown,
            format!("filter membership of M undecided [{}]", fv.certificate),
        )),
    }
}

/// `I*`-Cauchy along a given filter set `M`: pairs of members past some
/// cut `k` stay within `ε`.
pub fn i_star_cauchy_verdict(
    s: &SequenceScenario,
    m: &CstarMetric,
    ideal: &IdealDescriptor,
    witness: &SetDescription,
    eps: f64,
    window: usize,
) -> Result<VerdictBundle> {
    check_args(eps, window)?;
    let mut bundle = VerdictBundle::new(
        Question::IStarCauchy,
        eps,
        Verdict::new(Decision::Unknown, "no cut certified"),
    );
    bundle.witness = Some(witness.clone());
    if let Some(v) = filter_gate(ideal, witness) {
        bundle.verdict = v;
        return Ok(bundle);
    }
    let profile = m.profile();
    if profile == NormProfile::Opaque {
        bundle.verdict = Verdict::new(Decision::Unknown, "metric has no closed-form bound");
        return Ok(bundle);
    }
    match s.class_map() {
        ClassMap::Index => {
            let sup = |k: u64| profile.pair_sup(&[s.hull_beyond(k)]).expect("closed form");
            if let Some(k) = minimal_cut(window as u64, |k| sup(k).all_below(eps)) {
                let g = sup(k).sup;
                bundle.verdict = Verdict::new(
                    Decision::In,
                    format!("members of M beyond {k} are pairwise within {g}"),
                );
                bundle.witness_index = Some(k);
                bundle.gap = Some(g);
            } else if s.is_injective() && profile.separation(&s.hull_beyond(0)) >= eps {
                bundle.verdict = Verdict::new(
                    Decision::NotIn,
                    "M is infinite and distinct terms are at least ε apart",
                );
            }
        }
        ClassMap::Block => {
            let Some(present) = PresentBlocks::of(&witness.tail) else {
                bundle.verdict =
                    Verdict::new(Decision::Unknown, "blocks met by M are not certified");
                return Ok(bundle);
            };
            let b = profile.pair_sup(&present.spans(s)).expect("closed form");
            if b.all_below(eps) {
                bundle.verdict = Verdict::new(
                    Decision::In,
                    format!("members of M beyond {window} are pairwise within {}", b.sup),
                );
                bundle.witness_index = Some(window as u64);
                bundle.gap = Some(b.sup);
                return Ok(bundle);
            }
            let listed = present.listed(PAIR_SEARCH_BLOCKS);
            for (idx, &j) in listed.iter().enumerate() {
                for &i in &listed[..idx] {
                    let g = m.fast_norm(s.class_value(i), s.class_value(j));
                    if g >= eps {
                        bundle.verdict = Verdict::new(
                            Decision::NotIn,
                            format!("Δ_{i} and Δ_{j} lie in M past every cut and their terms are {g} apart"),
                        );
                        bundle.witness_pair = Some((i, j));
                        bundle.gap = Some(g);
                        bundle.trace.push(format!(
                            "cut {window}: m = {}, n = {}",
                            block_min_at_least(i as u32, window as u64 + 1),
                            block_min_at_least(j as u32, window as u64 + 1)
                        ));
                        return Ok(bundle);
                    }
                }
            }
            if let Some(beyond) = present.all_beyond {
                if s.is_injective() && profile.separation(&s.hull_beyond(beyond)) >= eps {
                    bundle.verdict = Verdict::new(
                        Decision::NotIn,
                        "M meets infinitely many blocks whose terms are pairwise at least ε apart",
                    );
                }
            }
        }
    }
    Ok(bundle)
}

/// `I*`-convergence along a given filter set `M`.
pub fn i_star_convergence_verdict(
    s: &SequenceScenario,
    m: &CstarMetric,
    limit: f64,
    ideal: &IdealDescriptor,
    witness: &SetDescription,
    eps: f64,
    window: usize,
) -> Result<VerdictBundle> {
    check_args(eps, window)?;
    let mut bundle = VerdictBundle::new(
        Question::IStarConv,
        eps,
        Verdict::new(Decision::Unknown, "no cut certified"),
    );
    bundle.witness = Some(witness.clone());
    if let Some(v) = filter_gate(ideal, witness) {
        bundle.verdict = v;
        return Ok(bundle);
    }
    let profile = m.profile();
    let point = Span::point(limit);
    let bound = |span: &Span| profile.bounds(span, &point);
    if profile == NormProfile::Opaque {
        bundle.verdict = Verdict::new(Decision::Unknown, "metric has no closed-form bound");
        return Ok(bundle);
    }
    match s.class_map() {
        ClassMap::Index => {
            let ok = |k: u64| bound(&s.hull_beyond(k)).is_some_and(|b| b.all_below(eps));
            if let Some(k) = minimal_cut(window as u64, ok) {
                bundle.verdict = Verdict::new(
                    Decision::In,
                    format!("members of M beyond {k} are within ε of {limit}"),
                );
                bundle.witness_index = Some(k);
                bundle.gap = bound(&s.hull_beyond(k)).map(|b| b.sup);
            } else if bound(&s.hull_beyond(window as u64)).is_some_and(|b| b.all_at_least(eps)) {
                bundle.verdict = Verdict::new(
                    Decision::NotIn,
                    format!(
                        "every term past {window} is at least ε from {limit}, and M is infinite"
                    ),
                );
            }
        }
        ClassMap::Block => {
            let Some(present) = PresentBlocks::of(&witness.tail) else {
                bundle.verdict =
                    Verdict::new(Decision::Unknown, "blocks met by M are not certified");
                return Ok(bundle);
            };
            let spans = present.spans(s);
            if spans
                .iter()
                .all(|sp| bound(sp).is_some_and(|b| b.all_below(eps)))
            {
                let g = spans
                    .iter()
                    .filter_map(&bound)
                    .map(|b| b.sup)
                    .fold(0.0, f64::max);
                bundle.verdict = Verdict::new(
                    Decision::In,
                    format!("members of M beyond {window} are within {g} of {limit}"),
                );
                bundle.witness_index = Some(window as u64);
                bundle.gap = Some(g);
            } else if let Some(&j) = present
                .listed(PAIR_SEARCH_BLOCKS)
                .iter()
                .find(|&&j| m.fast_norm(s.class_value(j), limit) >= eps)
            {
                bundle.verdict = Verdict::new(
                    Decision::NotIn,
                    format!(
                        "Δ_{j} lies in M past every cut and its terms are at least ε from {limit}"
                    ),
                );
                bundle.gap = Some(m.fast_norm(s.class_value(j), limit));
            } else if let Some(b) = present.all_beyond {
                if bound(&s.hull_beyond(b)).is_some_and(|x| x.all_at_least(eps)) {
                    bundle.verdict = Verdict::new(
                        Decision::NotIn,
                        "all blocks met by M stay ε away from the limit",
                    );
                }
            }
        }
    }
    Ok(bundle)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApWitnessReport {
    /// The filter set built from the `A_ε` complements.
    pub witness: SetDescription,
    pub probes: Vec<f64>,
    pub bundles: Vec<VerdictBundle>,
}

impl ApWitnessReport {
    pub fn all_in(&self) -> bool {
        self.bundles.iter().all(|b| b.decision() == Decision::In)
    }
}

/// Builds an `I*`-Cauchy witness from `I`-Cauchy data using the additive
/// property: for each probe `ε`, take the complement of `A_(ε/2)(x_{n₀})`,
/// then combine them with [`ap_lemma_witness`].
pub fn istar_witness_from_ap(
    s: &SequenceScenario,
    m: &CstarMetric,
    ideal: &IdealDescriptor,
    probes: &[f64],
    window: usize,
) -> Result<ApWitnessReport> {
    if !ideal.has_ap() {
        return Err(Error::Unsupported(format!(
            "{ideal} lacks the additive property"
        )));
    }
    let mut p_sets = Vec::with_capacity(probes.len());
    for &eps in probes {
        let def = i_cauchy_def_verdict(s, m, ideal, eps / 2.0, window)?;
        let Some(a) = def.witness.filter(|_| def.verdict.decision == Decision::In) else {
            return Err(Error::Precondition(format!(
                "{s} is not certified I-Cauchy at ε = {} under {ideal}",
                eps / 2.0
            )));
        };
        p_sets.push(a.complement());
    }
    let witness = ap_lemma_witness(ideal, &p_sets)?;
    let bundles = probes
        .iter()
        .map(|&eps| i_star_cauchy_verdict(s, m, ideal, &witness, eps, window))
        .collect::<Result<Vec<_>>>()?;
    Ok(ApWitnessReport {
        witness,
        probes: probes.to_vec(),
        bundles,
    })
}

/// `1/k` for `k = 1..=count`.
pub fn default_probes(count: u32) -> Vec<f64> {
    (1..=count).map(|k| 1.0 / k as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleRow {
    pub l: u32,
    pub expected_gap: f64,
    pub epsilon0: f64,
    pub cuts_checked: usize,
    pub min_gap: f64,
    pub max_rel_err: f64,
    pub pairs_in_window: bool,
    pub filter: Decision,
    pub i_star_cauchy: Decision,
    pub i_star_pair: Option<(u64, u64)>,
    pub i_cauchy_pair: Decision,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub l_max: u32,
    pub window: usize,
    pub weight_norm: f64,
    pub rows: Vec<CounterexampleRow>,
    pub pass: bool,
}

/// Block-harmonic sequence under the scaled metric and the block ideal:
/// `I`-Cauchy, yet no `M = ℕ ∖ (Δ_1 ∪ … ∪ Δ_l)` makes it `I*`-Cauchy.
pub fn counterexample_audit(
    l_max: u32,
    window: usize,
    f: &AlgebraElement,
) -> Result<CounterexampleReport> {
    if l_max == 0 || l_max > 60 {
        return Err(Error::Domain(format!(
            "l_max must be in 1..=60, got {l_max}"
        )));
    }
    if (window as u64) < 1u64 << (l_max + 2) {
        return Err(Error::Domain(format!(
            "window {window} is below 2^(l_max+2) = {}",
            1u64 << (l_max + 2)
        )));
    }
    let m = make_scaled_function_metric(f.clone())?;
    let norm = f.op_norm()?;
    let s = SequenceScenario::block_harmonic();
    let ideal = IdealDescriptor::block();
    let mut rows = Vec::new();
    for l in 1..=l_max {
        let (a, b) = ((l + 1) as f64, (l + 2) as f64);
        let expected = norm / (a * b);
        let eps0 = norm / (3.0 * a * b);
        let witness = SetDescription::block_union(window, &(1..=l).collect()).complement();
        let mut cuts = 0;
        let mut min_gap = f64::INFINITY;
        let mut max_rel: f64 = 0.0;
        let mut in_window = true;
        let mut k = 1u64;
        while k <= window as u64 / 2 {
            let mi = block_min_at_least(l + 1, k);
            let ni = block_min_at_least(l + 2, k);
            if mi > window as u64 || ni > window as u64 {
                in_window = false;
            } else {
                let gap = distance_norm(&m, s.at(mi), s.at(ni))?;
                min_gap = min_gap.min(gap);
                max_rel = max_rel.max((gap - expected).abs() / expected);
                cuts += 1;
            }
            k *= 2;
        }
        let filter = filter_membership(&ideal, &witness).decision;
        let star = i_star_cauchy_verdict(&s, &m, &ideal, &witness, eps0, window)?;
        let pair = i_cauchy_pair_verdict(&s, &m, &ideal, eps0, window)?.decision();
        let pass = in_window
            && cuts > 0
            && max_rel <= 1e-12
            && min_gap > eps0
            && filter == Decision::In
            && star.decision() == Decision::NotIn
            && pair == Decision::In;
        rows.push(CounterexampleRow {
            l,
            expected_gap: expected,
            epsilon0: eps0,
            cuts_checked: cuts,
            min_gap,
            max_rel_err: max_rel,
            pairs_in_window: in_window,
            filter,
            i_star_cauchy: star.decision(),
            i_star_pair: star.witness_pair,
            i_cauchy_pair: pair,
            pass,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(CounterexampleReport {
        l_max,
        window,
        weight_norm: norm,
        rows,
        pass,
    })
}

/// One (scenario, metric, ideal) combination.
#[derive(Debug, Clone)]
pub struct GridCell {
    pub scenario: SequenceScenario,
    pub metric: CstarMetric,
    pub ideal: IdealDescriptor,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationRow {
    pub scenario: String,
    pub metric: String,
    pub ideal: String,
    pub epsilon: f64,
    pub i_conv: Option<Decision>,
    pub i_cauchy_def: Decision,
    pub i_cauchy_pair: Decision,
    pub i_cauchy_ek: Decision,
    pub i_star_cauchy: Decision,
    pub i_star_conv: Option<Decision>,
    pub checks: usize,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub rows: Vec<ImplicationRow>,
    pub checks: usize,
    pub violations: Vec<String>,
}

/// Filter sets tried as `I*` witnesses: ℕ, and for block scenarios ℕ minus
/// the first one to three blocks.
pub fn filter_candidates(s: &SequenceScenario, window: usize) -> Vec<SetDescription> {
    let mut out = vec![SetDescription::naturals(window)];
    if s.class_map() == ClassMap::Block {
        for l in 1..=3u32 {
            out.push(SetDescription::block_union(window, &(1..=l).collect()).complement());
        }
    }
    out
}

fn first_in(bundles: &[VerdictBundle]) -> Option<&VerdictBundle> {
    bundles.iter().find(|b| b.decision() == Decision::In)
}

/// Checks the implications `I-conv ⇒ I-Cauchy`, `I*-Cauchy ⇒ I-Cauchy`
/// and `I*-conv ⇒ I-Cauchy` on every cell, with the set inclusions behind
/// the first two.
pub fn implication_audit(
    cells: &[GridCell],
    eps_list: &[f64],
    window: usize,
) -> Result<ImplicationReport> {
    let mut rows = Vec::new();
    for cell in cells {
        let (s, m, ideal) = (&cell.scenario, &cell.metric, &cell.ideal);
        let triangle = matches!(m.profile(), NormProfile::Linear(_) | NormProfile::Discrete);
        let candidates = filter_candidates(s, window);
        for &eps in eps_list {
            let mut checks = 0;
            let mut violations = Vec::new();
            let label = format!("{s} / {m} / {ideal} / ε={eps}");
            let conv = match s.limit() {
                Some(l) => Some(i_convergence_verdict(s, m, l, ideal, eps, window)?),
                None => None,
            };
            let def = i_cauchy_def_verdict(s, m, ideal, eps, window)?.decision();
            let pair = i_cauchy_pair_verdict(s, m, ideal, eps, window)?.decision();
            let ek = i_cauchy_ek_verdict(s, m, ideal, eps, window)?.decision();
            let star: Vec<VerdictBundle> = candidates
                .iter()
                .map(|c| i_star_cauchy_verdict(s, m, ideal, c, eps, window))
                .collect::<Result<_>>()?;
            let star_conv: Option<Vec<VerdictBundle>> = match s.limit() {
                Some(l) => Some(
                    candidates
                        .iter()
                        .map(|c| i_star_convergence_verdict(s, m, l, ideal, c, eps, window))
                        .collect::<Result<_>>()?,
                ),
                None => None,
            };
            let star_in = first_in(&star);
            let star_conv_in = star_conv.as_deref().and_then(first_in);

            let premises = [
                (
                    "I-convergent",
                    conv.as_ref().is_some_and(|c| c.decision() == Decision::In),
                ),
                ("I*-Cauchy", star_in.is_some()),
                ("I*-convergent", star_conv_in.is_some()),
            ];
            for (name, holds) in premises {
                if !holds {
                    continue;
                }
                for (crit, d) in [("definition", def), ("pair", pair), ("E_k", ek)] {
                    checks += 1;
                    if d == Decision::NotIn {
                        violations.push(format!("{label}: {name} but {crit} criterion says NotIn"));
                    }
                }
            }

            if let (Some(c), true) = (&conv, triangle) {
                if c.decision() == Decision::In {
                    let a = c.witness.as_ref().expect("A_ε attached");
                    if let Some(n0) = a.window.complement().min() {
                        let b = a_epsilon_set(s, m, Center::Index(n0), 2.0 * eps, window)?;
                        checks += 1;
                        if !b.window.is_subset(&a.window) {
                            violations.push(format!("{label}: B_2ε(x_{n0}) ⊄ A_ε in the window"));
                        }
                    }
                }
            }

            if let Some(b) = star_in {
                let k = b.witness_index.expect("cut attached");
                let mset = b.witness.as_ref().expect("M attached");
                let n0 = mset.window.iter().find(|&n| n > k);
                if let Some(n0) = n0 {
                    let a = a_epsilon_set(s, m, Center::Index(n0), eps, window)?;
                    let beyond = Window::from_predicate(window, |n| n > k);
                    let clash = a.window.intersection(&mset.window).intersection(&beyond);
                    checks += 1;
                    if !clash.is_empty() {
                        violations.push(format!(
                            "{label}: A_ε(x_{n0}) meets M beyond the cut {k} at {:?}",
                            clash.min()
                        ));
                    }
                }
            }

            rows.push(ImplicationRow {
                scenario: s.name().to_string(),
                metric: m.name().to_string(),
                ideal: ideal.name().to_string(),
                epsilon: eps,
                i_conv: conv.as_ref().map(|c| c.decision()),
                i_cauchy_def: def,
                i_cauchy_pair: pair,
                i_cauchy_ek: ek,
                i_star_cauchy: if star_in.is_some() {
                    Decision::In
                } else {
                    Decision::Unknown
                },
                i_star_conv: star_conv.as_ref().map(|_| {
                    if star_conv_in.is_some() {
                        Decision::In
                    } else {
                        Decision::Unknown
                    }
                }),
                checks,
                violations,
            });
        }
    }
    let checks = rows.iter().map(|r| r.checks).sum();
    let violations = rows.iter().flat_map(|r| r.violations.clone()).collect();
    Ok(ImplicationReport {
        rows,
        checks,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ToleranceProfile;
    use crate::metric::{
        default_weight, make_diag_metric, make_discrete_metric, make_reciprocal_function_metric,
    };

    const N: usize = 10_000;

    fn harmonic() -> SequenceScenario {
        SequenceScenario::harmonic()
    }

    #[test]
    fn a_epsilon_harmonic_diag() {
        let m = make_diag_metric(0.5).unwrap();
        let a = a_epsilon_set(&harmonic(), &m, Center::Point(0.0), 0.1, N).unwrap();
        assert_eq!(
            a.window.iter().collect::<Vec<_>>(),
            (1..=10).collect::<Vec<_>>()
        );
        assert_eq!(a.tail, TailCertificate::Finite);
        assert_eq!(
            membership(&IdealDescriptor::fin(), &a).decision,
            Decision::In
        );
    }

    #[test]
    fn a_epsilon_rejects_bad_epsilon() {
        let m = make_diag_metric(0.5).unwrap();
        for eps in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                a_epsilon_set(&harmonic(), &m, Center::Point(0.0), eps, N),
                Err(Error::Domain(_))
            ));
        }
    }

    #[test]
    fn def_verdict_harmonic_diag_uses_index_eleven() {
        let m = make_diag_metric(0.5).unwrap();
        let b = i_cauchy_def_verdict(&harmonic(), &m, &IdealDescriptor::fin(), 0.1, N).unwrap();
        assert_eq!(b.decision(), Decision::In);
        assert_eq!(b.witness_index, Some(11));
        let a = b.witness.unwrap();
        assert_eq!(
            a.window.iter().collect::<Vec<_>>(),
            (1..=5).collect::<Vec<_>>()
        );
        assert_eq!(a.tail, TailCertificate::Finite);
    }

    #[test]
    fn reciprocal_metric_refutes_every_center() {
        let m =
            make_reciprocal_function_metric(default_weight(), ToleranceProfile::default()).unwrap();
        let a = a_epsilon_set(&harmonic(), &m, Center::Index(11), 0.1, N).unwrap();
        assert_eq!(a.window.count(), N - 1);
        assert!(!a.window.contains(11));
        assert_eq!(a.tail, TailCertificate::Cofinite);
        for ideal in [
            IdealDescriptor::fin(),
            IdealDescriptor::density_zero(),
            IdealDescriptor::block(),
        ] {
            let b = i_cauchy_def_verdict(&harmonic(), &m, &ideal, 0.1, N).unwrap();
            assert_eq!(b.decision(), Decision::NotIn, "{ideal}");
        }
    }

    #[test]
    fn block_harmonic_under_fin() {
        let m = make_diag_metric(1.0).unwrap();
        let s = SequenceScenario::block_harmonic();
        let fin = IdealDescriptor::fin();
        let b = i_convergence_verdict(&s, &m, 0.0, &fin, 0.1, N).unwrap();
        assert_eq!(b.decision(), Decision::NotIn);
        assert_eq!(
            b.witness.unwrap().tail,
            TailCertificate::BlockBounded((1..=10).collect())
        );
        let b = i_convergence_verdict(&s, &m, 0.0, &IdealDescriptor::block(), 0.1, N).unwrap();
        assert_eq!(b.decision(), Decision::In);
    }

    #[test]
    fn pair_verdict_constant_uses_empty_set() {
        let m = make_diag_metric(2.0).unwrap();
        let b = i_cauchy_pair_verdict(
            &SequenceScenario::constant(3.0),
            &m,
            &IdealDescriptor::fin(),
            0.01,
            N,
        )
        .unwrap();
        assert_eq!(b.decision(), Decision::In);
        let d = b.witness.unwrap();
        assert!(d.window.is_empty() && d.tail == TailCertificate::Finite);
    }

    #[test]
    fn pair_verdict_block_harmonic_uses_first_blocks() {
        let m = make_scaled_function_metric(default_weight()).unwrap();
        let s = SequenceScenario::block_harmonic();
        let b = i_cauchy_pair_verdict(&s, &m, &IdealDescriptor::block(), 0.2, N).unwrap();
        assert_eq!(b.decision(), Decision::In);
        assert_eq!(
            b.witness.unwrap().tail,
            TailCertificate::BlockBounded((1..=21).collect())
        );
    }

    #[test]
    fn ek_verdicts() {
        let m = make_diag_metric(0.5).unwrap();
        let fin = IdealDescriptor::fin();
        let b = i_cauchy_ek_verdict(&harmonic(), &m, &fin, 0.1, N).unwrap();
        assert_eq!(b.decision(), Decision::In);
        // E_k is cofinite exactly when 1/k ≥ 0.1 stays away from the tail; E_10 is not
        let w = b.witness.unwrap();
        assert_eq!(
            w.window.iter().collect::<Vec<_>>(),
            (1..=9).collect::<Vec<_>>()
        );
        assert_eq!(w.tail, TailCertificate::Finite);

        let s = SequenceScenario::block_harmonic();
        let m1 = make_diag_metric(1.0).unwrap();
        let b = i_cauchy_ek_verdict(&s, &m1, &fin, 0.1, N).unwrap();
        assert_eq!(b.decision(), Decision::NotIn);
        let b = i_cauchy_ek_verdict(&s, &m1, &IdealDescriptor::block(), 0.1, N).unwrap();
        assert_eq!(b.decision(), Decision::In);
    }

    #[test]
    fn discrete_metric_on_alternating() {
        let m = make_discrete_metric();
        let s = SequenceScenario::alternating();
        // the odd indices form Δ₁, which the block ideal can discard
        for (ideal, expect) in [
            (IdealDescriptor::fin(), Decision::NotIn),
            (IdealDescriptor::block(), Decision::In),
        ] {
            let r = cauchy_criteria_cross_check(&s, &m, &ideal, &[0.5, 1.0], N).unwrap();
            assert_eq!(r.conflicts, 0);
            for row in &r.rows {
                assert_eq!(
                    (row.def, row.pair, row.ek),
                    (expect, expect, expect),
                    "{ideal}"
                );
            }
        }
    }

    #[test]
    fn istar_counterexample_pair() {
        let m = make_scaled_function_metric(default_weight()).unwrap();
        let s = SequenceScenario::block_harmonic();
        let ideal = IdealDescriptor::block();
        let witness = SetDescription::block_union(N, &(1..=2).collect()).complement();
        let b = i_star_cauchy_verdict(&s, &m, &ideal, &witness, 2.0 / 36.0, N).unwrap();
        assert_eq!(b.decision(), Decision::NotIn);
        assert_eq!(b.witness_pair, Some((3, 4)));
        assert!((b.gap.unwrap() - 2.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn istar_rejects_witness_outside_filter() {
        let m = make_diag_metric(1.0).unwrap();
        let w = SetDescription::block_union(N, &BlockSet::from([1]));
        let b =
            i_star_cauchy_verdict(&harmonic(), &m, &IdealDescriptor::fin(), &w, 0.1, N).unwrap();
        assert_eq!(b.decision(), Decision::NotIn);
    }

    #[test]
    fn istar_harmonic_cut() {
        let m = make_diag_metric(1.0).unwrap();
        let b = i_star_cauchy_verdict(
            &harmonic(),
            &m,
            &IdealDescriptor::fin(),
            &SetDescription::naturals(N),
            0.1,
            N,
        )
        .unwrap();
        assert_eq!(b.decision(), Decision::In);
        // pairs beyond k lie in (0, 1/(k+1)] and never reach the full width
        assert_eq!(b.witness_index, Some(9));
        let b = i_star_convergence_verdict(
            &harmonic(),
            &m,
            0.0,
            &IdealDescriptor::fin(),
            &SetDescription::naturals(N),
            0.1,
            N,
        )
        .unwrap();
        assert_eq!(b.witness_index, Some(10));
    }

    #[test]
    fn ap_witness_for_harmonic() {
        let m = make_diag_metric(0.5).unwrap();
        for ideal in [IdealDescriptor::fin(), IdealDescriptor::density_zero()] {
            let r = istar_witness_from_ap(&harmonic(), &m, &ideal, &default_probes(10), N).unwrap();
            assert!(r.all_in(), "{ideal}: {:?}", r.bundles);
        }
        assert!(matches!(
            istar_witness_from_ap(
                &harmonic(),
                &m,
                &IdealDescriptor::block(),
                &default_probes(3),
                N
            ),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn counterexample_small() {
        let r = counterexample_audit(4, 1 << 8, &default_weight()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.rows[1].i_star_pair, Some((3, 4)));
        assert!(matches!(
            counterexample_audit(4, 32, &default_weight()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn minimal_cut_binary_search() {
        assert_eq!(minimal_cut(100, |k| k >= 37), Some(37));
        assert_eq!(minimal_cut(100, |_| true), Some(0));
        assert_eq!(minimal_cut(100, |_| false), None);
    }
}
