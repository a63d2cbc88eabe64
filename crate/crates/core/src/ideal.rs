//! Ideals on ℕ with three-valued, certificate-backed membership.
//!
//! A subset of ℕ is described by its exact trace on a finite window
//! `[1..N]` together with a [`TailCertificate`] describing what it does
//! beyond `N`. Every `In`/`NotIn` decision is backed by a named rule over
//! the certificate; anything the certificate cannot settle is `Unknown`.
//!
//! The block partition used throughout is the dyadic one,
//! `Δ_j = {2^(j−1)(2s − 1) : s ≥ 1}`, so `n ∈ Δ_j` iff `n` has exactly
//! `j − 1` trailing binary zeros.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::window::Window;

pub type BlockSet = BTreeSet<u32>;

/// Behavior of a described set beyond its window, i.e. of `S ∩ (N, ∞)`.
///
/// `BlockBounded` and `CoBlockBounded` are exact: the tail is precisely the
/// union (resp. the complement of the union) of the listed blocks. Since
/// every block is infinite, this pins down the tail completely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TailCertificate {
    /// No member exceeds `N`.
    Finite,
    /// Every index beyond `N` is a member.
    Cofinite,
    /// Tail equals `(∪_{j∈J} Δ_j) ∩ (N, ∞)` for a nonempty finite `J`.
    BlockBounded(BlockSet),
    /// Tail equals `(N, ∞) ∖ ∪_{j∈J} Δ_j` for a nonempty finite `J`.
    CoBlockBounded(BlockSet),
    /// The tail meets infinitely many blocks; nothing else is known.
    BlockUnbounded,
    UnknownTail,
}

impl TailCertificate {
    /// `BlockBounded(∅)` is `Finite`.
    pub fn blocks(blocks: BlockSet) -> Self {
        if blocks.is_empty() {
            TailCertificate::Finite
        } else {
            TailCertificate::BlockBounded(blocks)
        }
    }

    /// `CoBlockBounded(∅)` is `Cofinite`.
    pub fn co_blocks(blocks: BlockSet) -> Self {
        if blocks.is_empty() {
            TailCertificate::Cofinite
        } else {
            TailCertificate::CoBlockBounded(blocks)
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            TailCertificate::Finite => "finite",
            TailCertificate::Cofinite => "cofinite",
            TailCertificate::BlockBounded(_) => "block_bounded",
            TailCertificate::CoBlockBounded(_) => "co_block_bounded",
            TailCertificate::BlockUnbounded => "block_unbounded",
            TailCertificate::UnknownTail => "unknown",
        }
    }

    /// The exact tail as `(is_complement, blocks)`, when the certificate is
    /// exact.
    fn exact(&self) -> Option<(bool, BlockSet)> {
        match self {
            TailCertificate::Finite => Some((false, BlockSet::new())),
            TailCertificate::Cofinite => Some((true, BlockSet::new())),
            TailCertificate::BlockBounded(j) => Some((false, j.clone())),
            TailCertificate::CoBlockBounded(j) => Some((true, j.clone())),
            _ => None,
        }
    }

    fn from_exact(complement: bool, blocks: BlockSet) -> Self {
        if complement {
            TailCertificate::co_blocks(blocks)
        } else {
            TailCertificate::blocks(blocks)
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }

    /// Whether the tail meets infinitely many blocks, when known.
    fn meets_infinitely_many_blocks(&self) -> Option<bool> {
        match self {
            TailCertificate::Finite | TailCertificate::BlockBounded(_) => Some(false),
            TailCertificate::Cofinite
            | TailCertificate::CoBlockBounded(_)
            | TailCertificate::BlockUnbounded => Some(true),
            TailCertificate::UnknownTail => None,
        }
    }

    pub fn complement(&self) -> Self {
        match self.exact() {
            Some((co, j)) => TailCertificate::from_exact(!co, j),
            None => TailCertificate::UnknownTail,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        match (self.exact(), other.exact()) {
            (Some((false, a)), Some((false, b))) => {
                TailCertificate::blocks(a.union(&b).copied().collect())
            }
            (Some((false, a)), Some((true, b))) | (Some((true, b)), Some((false, a))) => {
                TailCertificate::co_blocks(b.difference(&a).copied().collect())
            }
            (Some((true, a)), Some((true, b))) => {
                TailCertificate::co_blocks(a.intersection(&b).copied().collect())
            }
            _ => {
                if *self == TailCertificate::Cofinite || *other == TailCertificate::Cofinite {
                    TailCertificate::Cofinite
                } else if self.meets_infinitely_many_blocks() == Some(true)
                    || other.meets_infinitely_many_blocks() == Some(true)
                {
                    TailCertificate::BlockUnbounded
                } else {
                    TailCertificate::UnknownTail
                }
            }
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        match (self.exact(), other.exact()) {
            (Some((false, a)), Some((false, b))) => {
                TailCertificate::blocks(a.intersection(&b).copied().collect())
            }
            (Some((false, a)), Some((true, b))) | (Some((true, b)), Some((false, a))) => {
                TailCertificate::blocks(a.difference(&b).copied().collect())
            }
            (Some((true, a)), Some((true, b))) => {
                TailCertificate::co_blocks(a.union(&b).copied().collect())
            }
            _ => {
                if *self == TailCertificate::Finite || *other == TailCertificate::Finite {
                    TailCertificate::Finite
                } else if *self == TailCertificate::Cofinite {
                    other.clone()
                } else if *other == TailCertificate::Cofinite {
                    self.clone()
                } else {
                    TailCertificate::UnknownTail
                }
            }
        }
    }

    /// Membership of an index `n > N` implied by an exact certificate.
    pub fn contains_beyond_window(&self, n: u64) -> Option<bool> {
        let (co, blocks) = self.exact()?;
        let j = block_index(n).ok()?;
        Some(blocks.contains(&j) != co)
    }
}

impl fmt::Display for TailCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailCertificate::BlockBounded(j) => write!(f, "BlockBounded({})", fmt_blocks(j)),
            TailCertificate::CoBlockBounded(j) => write!(f, "CoBlockBounded({})", fmt_blocks(j)),
            TailCertificate::Finite => write!(f, "Finite"),
            TailCertificate::Cofinite => write!(f, "Cofinite"),
            TailCertificate::BlockUnbounded => write!(f, "BlockUnbounded"),
            TailCertificate::UnknownTail => write!(f, "UnknownTail"),
        }
    }
}

pub(crate) fn fmt_blocks(blocks: &BlockSet) -> String {
    // compress runs: {1..21} instead of 21 numbers
    let mut parts = Vec::new();
    let mut iter = blocks.iter().copied().peekable();
    while let Some(start) = iter.next() {
        let mut end = start;
        while iter.peek() == Some(&(end + 1)) {
            end = iter.next().unwrap();
        }
        parts.push(if start == end {
            format!("{start}")
        } else {
            format!("{start}..{end}")
        });
    }
    format!("{{{}}}", parts.join(","))
}

/// A subset of ℕ: exact window trace plus tail certificate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetDescription {
    pub window: Window,
    pub tail: TailCertificate,
}

impl SetDescription {
    pub fn new(window: Window, tail: TailCertificate) -> Self {
        SetDescription { window, tail }
    }

    pub fn empty(window_size: usize) -> Self {
        SetDescription::new(Window::empty(window_size), TailCertificate::Finite)
    }

    /// All of ℕ.
    pub fn naturals(window_size: usize) -> Self {
        SetDescription::new(Window::full(window_size), TailCertificate::Cofinite)
    }

    /// A finite set; every member must lie inside the window.
    pub fn finite(window_size: usize, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut w = Window::empty(window_size);
        for n in members {
            if n == 0 || n as usize > window_size {
                return Err(Error::Domain(format!(
                    "finite member {n} outside window [1..{window_size}]"
                )));
            }
            w.insert(n);
        }
        Ok(SetDescription::new(w, TailCertificate::Finite))
    }

    /// `ℕ ∖ members`.
    pub fn cofinite(window_size: usize, excluded: impl IntoIterator<Item = u64>) -> Result<Self> {
        Ok(SetDescription::finite(window_size, excluded)?.complement())
    }

    /// `∪_{j∈J} Δ_j` with an exact block certificate.
    pub fn block_union(window_size: usize, blocks: &BlockSet) -> Self {
        let window = Window::from_predicate(window_size, |n| {
            blocks.contains(&block_index(n).expect("n >= 1"))
        });
        SetDescription::new(window, TailCertificate::blocks(blocks.clone()))
    }

    pub fn window_size(&self) -> usize {
        self.window.size()
    }

    fn check_size(&self, other: &SetDescription) -> Result<()> {
        if self.window_size() != other.window_size() {
            return Err(Error::Structural(format!(
                "window size mismatch: {} vs {}",
                self.window_size(),
                other.window_size()
            )));
        }
        Ok(())
    }

    pub fn complement(&self) -> Self {
        SetDescription::new(self.window.complement(), self.tail.complement())
    }

    pub fn union(&self, other: &SetDescription) -> Result<Self> {
        self.check_size(other)?;
        Ok(SetDescription::new(
            self.window.union(&other.window),
            self.tail.union(&other.tail),
        ))
    }

    pub fn intersection(&self, other: &SetDescription) -> Result<Self> {
        self.check_size(other)?;
        Ok(SetDescription::new(
            self.window.intersection(&other.window),
            self.tail.intersection(&other.tail),
        ))
    }

    pub fn difference(&self, other: &SetDescription) -> Result<Self> {
        self.intersection(&other.complement())
    }

    pub fn symmetric_difference(&self, other: &SetDescription) -> Result<Self> {
        self.difference(other)?.union(&other.difference(self)?)
    }

    /// Membership of any index: exact inside the window, from the
    /// certificate beyond it (`None` when the certificate is not exact).
    pub fn contains(&self, n: u64) -> Option<bool> {
        if n as usize <= self.window_size() {
            Some(self.window.contains(n))
        } else {
            self.tail.contains_beyond_window(n)
        }
    }

    /// Certified finite: the window holds every member.
    pub fn is_certified_finite(&self) -> bool {
        self.tail == TailCertificate::Finite
    }
}

impl fmt::Display for SetDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let runs = self.window.runs();
        let shown: Vec<String> = runs
            .iter()
            .take(8)
            .map(|&(a, b)| {
                if a == b {
                    format!("{a}")
                } else {
                    format!("{a}-{b}")
                }
            })
            .collect();
        let more = if runs.len() > 8 { ",..." } else { "" };
        write!(
            f,
            "{{{}{}}}/N={} tail={}",
            shown.join(","),
            more,
            self.window_size(),
            self.tail
        )
    }
}

impl Serialize for SetDescription {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Tail<'a> {
            tag: &'a str,
            blocks: Vec<u32>,
        }
        let blocks = match &self.tail {
            TailCertificate::BlockBounded(j) | TailCertificate::CoBlockBounded(j) => {
                j.iter().copied().collect()
            }
            _ => Vec::new(),
        };
        let runs: Vec<[u64; 2]> = self
            .window
            .runs()
            .into_iter()
            .map(|(a, b)| [a, b])
            .collect();
        let mut s = serializer.serialize_struct("SetDescription", 3)?;
        s.serialize_field("window", &runs)?;
        s.serialize_field("window_size", &self.window_size())?;
        s.serialize_field(
            "tail",
            &Tail {
                tag: self.tail.tag(),
                blocks,
            },
        )?;
        s.end()
    }
}

/// `j` with `n ∈ Δ_j`: trailing zero count of `n` plus one.
pub fn block_index(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::Domain("block_index is defined for n >= 1".into()));
    }
    Ok(n.trailing_zeros() + 1)
}

/// `Δ_j ∩ [1..N]` with certificate `BlockBounded({j})`.
pub fn block_elements(j: u32, window_size: usize) -> Result<SetDescription> {
    if j == 0 {
        return Err(Error::Domain("blocks are numbered from 1".into()));
    }
    if window_size == 0 {
        return Err(Error::Domain("window size must be positive".into()));
    }
    Ok(SetDescription::block_union(
        window_size,
        &BlockSet::from([j]),
    ))
}

/// Smallest element of `Δ_j` that is `≥ k`.
pub fn block_min_at_least(j: u32, k: u64) -> u64 {
    let step = 1u64 << (j - 1);
    // elements are step·(2s − 1); need 2s − 1 ≥ k / step
    let mut odd = k.div_ceil(step).max(1);
    if odd.is_multiple_of(2) {
        odd += 1;
    }
    step * odd
}

/// The canonical dyadic partition `Δ_j = {2^(j−1)(2s − 1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BlockPartition;

impl BlockPartition {
    pub fn block_index(&self, n: u64) -> Result<u32> {
        block_index(n)
    }

    pub fn block_elements(&self, j: u32, window_size: usize) -> Result<SetDescription> {
        block_elements(j, window_size)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApFlag {
    HasAP,
    LacksAP,
    UnknownAP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdealKind {
    /// Finite subsets of ℕ.
    Fin,
    /// Sets of natural density zero.
    DensityZero,
    /// Sets meeting only finitely many blocks of the partition.
    BlockIdeal(BlockPartition),
}

/// An admissible, nontrivial ideal on ℕ. Only the built-in kinds can be
/// constructed, so both properties hold by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IdealDescriptor {
    kind: IdealKind,
    ap_flag: ApFlag,
}

impl IdealDescriptor {
    pub fn fin() -> Self {
        IdealDescriptor {
            kind: IdealKind::Fin,
            ap_flag: ApFlag::HasAP,
        }
    }

    pub fn density_zero() -> Self {
        IdealDescriptor {
            kind: IdealKind::DensityZero,
            ap_flag: ApFlag::HasAP,
        }
    }

    pub fn block() -> Self {
        IdealDescriptor {
            kind: IdealKind::BlockIdeal(BlockPartition),
            ap_flag: ApFlag::LacksAP,
        }
    }

    /// Config names: `fin`, `density0`, `block`.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "fin" => Some(IdealDescriptor::fin()),
            "density0" => Some(IdealDescriptor::density_zero()),
            "block" => Some(IdealDescriptor::block()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            IdealKind::Fin => "fin",
            IdealKind::DensityZero => "density0",
            IdealKind::BlockIdeal(_) => "block",
        }
    }

    pub fn kind(&self) -> IdealKind {
        self.kind
    }

    pub fn ap_flag(&self) -> ApFlag {
        self.ap_flag
    }

    pub fn has_ap(&self) -> bool {
        self.ap_flag == ApFlag::HasAP
    }
}

impl fmt::Display for IdealDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Decision {
    In,
    NotIn,
    Unknown,
}

impl Decision {
    pub fn is_decided(self) -> bool {
        self != Decision::Unknown
    }

    /// True when one is `In` and the other `NotIn`.
    pub fn conflicts_with(self, other: Decision) -> bool {
        matches!(
            (self, other),
            (Decision::In, Decision::NotIn) | (Decision::NotIn, Decision::In)
        )
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::In => "In",
            Decision::NotIn => "NotIn",
            Decision::Unknown => "Unknown",
        })
    }
}

/// A decision plus the rule that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub decision: Decision,
    pub certificate: String,
}

impl Verdict {
    pub fn new(decision: Decision, certificate: impl Into<String>) -> Self {
        Verdict {
            decision,
            certificate: certificate.into(),
        }
    }

    pub fn is_in(&self) -> bool {
        self.decision == Decision::In
    }
}

/// Three-valued ideal membership from the rule table.
///
/// The decision depends only on the tail certificate: the window part of
/// any description is finite, and every built-in ideal is admissible.
pub fn membership(ideal: &IdealDescriptor, s: &SetDescription) -> Verdict {
    use Decision::*;
    use TailCertificate as T;
    let name = ideal.name();
    let (decision, rule) = match (ideal.kind, &s.tail) {
        (_, T::Finite) => (
            In,
            "finite sets belong to every admissible ideal".to_string(),
        ),
        (_, T::Cofinite) => (
            NotIn,
            "a cofinite member would force N into the ideal (nontriviality)".to_string(),
        ),
        (_, T::UnknownTail) => (Unknown, "tail behavior not certified".to_string()),

        (IdealKind::Fin, T::BlockBounded(j)) => (
            NotIn,
            format!(
                "contains the infinite blocks {} beyond the window",
                fmt_blocks(j)
            ),
        ),
        (IdealKind::Fin, T::CoBlockBounded(_) | T::BlockUnbounded) => (
            NotIn,
            "meets infinitely many blocks, hence infinite".to_string(),
        ),

        (IdealKind::BlockIdeal(_), T::BlockBounded(j)) => (
            In,
            format!("meets only the finitely many blocks {}", fmt_blocks(j)),
        ),
        (IdealKind::BlockIdeal(_), T::CoBlockBounded(_) | T::BlockUnbounded) => {
            (NotIn, "meets infinitely many blocks".to_string())
        }

        (IdealKind::DensityZero, T::BlockBounded(j)) => (
            Unknown,
            format!(
                "blocks {} met beyond the window; no density-zero certificate inside them",
                fmt_blocks(j)
            ),
        ),
        (IdealKind::DensityZero, T::CoBlockBounded(_) | T::BlockUnbounded) => (
            Unknown,
            "block-unbounded tail is outside the decidable density fragment".to_string(),
        ),
    };
    Verdict::new(decision, format!("{name}/{}: {rule}", s.tail.tag()))
}

/// Membership in the dual filter `F(I)`: `s ∈ F(I)` iff `ℕ ∖ s ∈ I`.
pub fn filter_membership(ideal: &IdealDescriptor, s: &SetDescription) -> Verdict {
    let complement = s.complement();
    if complement.tail == TailCertificate::UnknownTail && s.tail != TailCertificate::UnknownTail {
        return Verdict::new(
            Decision::Unknown,
            format!(
                "{}: complement tail underivable from {}",
                ideal.name(),
                s.tail.tag()
            ),
        );
    }
    let inner = membership(ideal, &complement);
    Verdict::new(
        inner.decision,
        format!("filter via complement [{}]", inner.certificate),
    )
}

/// Output of [`ap_decompose`].
#[derive(Debug, Clone)]
pub struct ApDecomposition {
    pub b_sets: Vec<SetDescription>,
    pub union: SetDescription,
    pub union_verdict: Verdict,
}

fn require_ap(ideal: &IdealDescriptor, what: &str) -> Result<()> {
    if ideal.has_ap() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{what} requires an ideal with (AP); {} is flagged {:?}",
            ideal.name(),
            ideal.ap_flag()
        )))
    }
}

/// For pairwise-disjoint members `A_j` of the ideal, produce `B_j` with
/// `A_j Δ B_j` finite and `∪ B_j` in the ideal.
pub fn ap_decompose(ideal: &IdealDescriptor, a_sets: &[SetDescription]) -> Result<ApDecomposition> {
    require_ap(ideal, "ap_decompose")?;
    let Some(first) = a_sets.first() else {
        return Err(Error::Precondition(
            "ap_decompose needs at least one set".into(),
        ));
    };
    let window_size = first.window_size();
    for (i, a) in a_sets.iter().enumerate() {
        if a.window_size() != window_size {
            return Err(Error::Structural("window size mismatch among A_j".into()));
        }
        let v = membership(ideal, a);
        if !v.is_in() {
            return Err(Error::Precondition(format!(
                "A_{} is not certified in the ideal ({})",
                i + 1,
                v.certificate
            )));
        }
        for (k, b) in a_sets.iter().enumerate().skip(i + 1) {
            let meet = a.intersection(b)?;
            if !meet.window.is_empty() || meet.tail != TailCertificate::Finite {
                return Err(Error::Precondition(format!(
                    "A_{} and A_{} are not disjoint",
                    i + 1,
                    k + 1
                )));
            }
        }
    }

    let b_sets: Vec<SetDescription> = match ideal.kind {
        IdealKind::Fin => a_sets
            .iter()
            .map(|_| SetDescription::empty(window_size))
            .collect(),
        IdealKind::DensityZero => {
            // increasing cuts; beyond its cut A_j contributes less than 2^-j
            // to the empirical density at every n in the window
            let mut cut = 0u64;
            let mut out = Vec::with_capacity(a_sets.len());
            for (idx, a) in a_sets.iter().enumerate() {
                let bound = 0.5f64.powi(idx as i32 + 1);
                cut = density_cut(&a.window, cut, bound);
                let kept = Window::from_predicate(window_size, |n| n > cut && a.window.contains(n));
                out.push(SetDescription::new(kept, a.tail.clone()));
            }
            out
        }
        IdealKind::BlockIdeal(_) => unreachable!("block ideal lacks AP"),
    };

    for (i, (a, b)) in a_sets.iter().zip(&b_sets).enumerate() {
        if !a.symmetric_difference(b)?.is_certified_finite() {
            return Err(Error::Consistency(format!(
                "A_{0} Δ B_{0} is not certified finite",
                i + 1
            )));
        }
    }
    let mut union = SetDescription::empty(window_size);
    for b in &b_sets {
        union = union.union(b)?;
    }
    let union_verdict = membership(ideal, &union);
    Ok(ApDecomposition {
        b_sets,
        union,
        union_verdict,
    })
}

/// Smallest `c ≥ floor` such that `|A ∩ (c, n]| / n < bound` for every
/// `n` in the window.
fn density_cut(a: &Window, floor: u64, bound: f64) -> u64 {
    let members: Vec<u64> = a.iter().collect();
    let size = a.size() as u64;
    let mut cut = floor;
    'search: while cut < size {
        let mut count = 0usize;
        for &m in members.iter().filter(|&&m| m > cut) {
            count += 1;
            if count as f64 / m as f64 >= bound {
                cut = m;
                continue 'search;
            }
        }
        return cut;
    }
    size
}

/// Given filter sets `P_i`, build `P ∈ F(I)` with every `P ∖ P_i` finite.
///
/// Complements are made disjoint (`A_i = (ℕ∖P_i) ∖ ∪_{k<i} A_k`), passed
/// through [`ap_decompose`], and `P = ℕ ∖ ∪ B_i`.
pub fn ap_lemma_witness(
    ideal: &IdealDescriptor,
    p_sets: &[SetDescription],
) -> Result<SetDescription> {
    require_ap(ideal, "ap_lemma_witness")?;
    let Some(first) = p_sets.first() else {
        return Err(Error::Precondition(
            "ap_lemma_witness needs at least one set".into(),
        ));
    };
    let window_size = first.window_size();
    for (i, p) in p_sets.iter().enumerate() {
        let v = filter_membership(ideal, p);
        if !v.is_in() {
            return Err(Error::Precondition(format!(
                "P_{} is not certified in the filter ({})",
                i + 1,
                v.certificate
            )));
        }
    }

    let mut covered = SetDescription::empty(window_size);
    let mut disjoint = Vec::with_capacity(p_sets.len());
    for p in p_sets {
        let a = p.complement().difference(&covered)?;
        covered = covered.union(&a)?;
        disjoint.push(a);
    }
    let decomposition = ap_decompose(ideal, &disjoint)?;
    let witness = decomposition.union.complement();

    let v = filter_membership(ideal, &witness);
    if !v.is_in() {
        return Err(Error::Consistency(format!(
            "lemma witness not certified in the filter ({})",
            v.certificate
        )));
    }
    for (i, p) in p_sets.iter().enumerate() {
        if !witness.difference(p)?.is_certified_finite() {
            return Err(Error::Consistency(format!(
                "P ∖ P_{} is not certified finite",
                i + 1
            )));
        }
    }
    Ok(witness)
}
