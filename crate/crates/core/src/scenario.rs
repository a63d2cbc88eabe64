//! Real sequences with enough structure to reason about their tails.
//!
//! A scenario assigns each index a class (the index itself, or its dyadic
//! block) and each class a value. Alongside the values it carries the hull
//! of all values of classes beyond a given one, which is what tail
//! certificates are built from.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::block_index;
use crate::metric::Span;

/// How indices are grouped into classes of equal value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassMap {
    /// Class of `n` is `n`.
    Index,
    /// Class of `n` is its block index `j` with `n ∈ Δ_j`.
    Block,
}

pub type ClassValue = Arc<dyn Fn(u64) -> f64 + Send + Sync>;
pub type ClassHull = Arc<dyn Fn(u64) -> Span + Send + Sync>;

#[derive(Clone)]
pub struct SequenceScenario {
    name: String,
    class_map: ClassMap,
    value: ClassValue,
    hull_beyond: ClassHull,
    limit: Option<f64>,
    injective: bool,
}

impl fmt::Debug for SequenceScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceScenario")
            .field("name", &self.name)
            .field("class_map", &self.class_map)
            .field("limit", &self.limit)
            .field("injective", &self.injective)
            .finish()
    }
}

impl SequenceScenario {
    /// `hull_beyond(b)` must contain every `value(k)` with `k > b`;
    /// `injective` asserts that distinct classes have distinct values.
    pub fn new(
        name: impl Into<String>,
        class_map: ClassMap,
        value: ClassValue,
        hull_beyond: ClassHull,
        limit: Option<f64>,
        injective: bool,
    ) -> Self {
        SequenceScenario {
            name: name.into(),
            class_map,
            value,
            hull_beyond,
            limit,
            injective,
        }
    }

    /// `x_n = 1/n`.
    pub fn harmonic() -> Self {
        SequenceScenario::new(
            "harmonic",
            ClassMap::Index,
            Arc::new(|k| 1.0 / k as f64),
            Arc::new(harmonic_hull),
            Some(0.0),
            true,
        )
    }

    /// `x_n = 1/j` for `n ∈ Δ_j`.
    pub fn block_harmonic() -> Self {
        SequenceScenario::new(
            "block-harmonic",
            ClassMap::Block,
            Arc::new(|j| 1.0 / j as f64),
            Arc::new(harmonic_hull),
            Some(0.0),
            true,
        )
    }

    /// `x_n = c`.
    pub fn constant(c: f64) -> Self {
        SequenceScenario::new(
            format!("constant:{c}"),
            ClassMap::Index,
            Arc::new(move |_| c),
            Arc::new(move |_| Span::point(c)),
            Some(c),
            false,
        )
    }

    /// `−1` on the odd indices, `1` on the even ones.
    pub fn alternating() -> Self {
        SequenceScenario::new(
            "alternating",
            ClassMap::Block,
            Arc::new(|j| if j == 1 { -1.0 } else { 1.0 }),
            Arc::new(|b| {
                if b == 0 {
                    Span::closed(-1.0, 1.0)
                } else {
                    Span::point(1.0)
                }
            }),
            None,
            false,
        )
    }

    /// `harmonic`, `block-harmonic`, `alternating`, or `constant:<v>`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "harmonic" => Ok(SequenceScenario::harmonic()),
            "block-harmonic" => Ok(SequenceScenario::block_harmonic()),
            "alternating" => Ok(SequenceScenario::alternating()),
            _ => {
                let Some(v) = name.strip_prefix("constant:") else {
                    return Err(Error::Domain(format!("unknown scenario `{name}`")));
                };
                let c: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad constant in `{name}`")))?;
                if !c.is_finite() {
                    return Err(Error::Domain(format!(
                        "constant must be finite in `{name}`"
                    )));
                }
                Ok(SequenceScenario::constant(c))
            }
        }
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["harmonic", "block-harmonic", "alternating", "constant:<v>"]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class_map(&self) -> ClassMap {
        self.class_map
    }

    pub fn limit(&self) -> Option<f64> {
        self.limit
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn class_of(&self, n: u64) -> u64 {
        match self.class_map {
            ClassMap::Index => n,
            ClassMap::Block => block_index(n).expect("indices start at 1") as u64,
        }
    }

    /// Smallest index of class `k`.
    pub fn representative(&self, k: u64) -> u64 {
        match self.class_map {
            ClassMap::Index => k,
            ClassMap::Block => 1u64 << (k - 1),
        }
    }

    /// First index of class `k`, if it fits in a `u64`.
    pub fn checked_representative(&self, k: u64) -> Option<u64> {
        match self.class_map {
            ClassMap::Index => Some(k),
            ClassMap::Block => u32::try_from(k - 1).ok().and_then(|e| 1u64.checked_shl(e)),
        }
    }

    pub fn class_value(&self, k: u64) -> f64 {
        (self.value)(k)
    }

    /// `x_n`.
    pub fn at(&self, n: u64) -> f64 {
        self.class_value(self.class_of(n))
    }

    /// Hull of the values of classes `k > b`.
    pub fn hull_beyond(&self, b: u64) -> Span {
        (self.hull_beyond)(b)
    }

    /// Hull of the values taken beyond index `n`, i.e. by classes of
    /// indices `> n`.
    pub fn tail_hull(&self, n: u64) -> Span {
        match self.class_map {
            ClassMap::Index => self.hull_beyond(n),
            ClassMap::Block => self.hull_beyond(0),
        }
    }

    /// Largest class that has a representative in `[1..window]`.
    pub fn classes_in_window(&self, window: usize) -> u64 {
        match self.class_map {
            ClassMap::Index => window as u64,
            ClassMap::Block => {
                if window == 0 {
                    0
                } else {
                    64 - (window as u64).leading_zeros() as u64
                }
            }
        }
    }

    /// Spot-checks the hull contract on `k ≤ upto`.
    pub fn check_hulls(&self, upto: u64) -> Result<()> {
        for b in [0, 1, 2, 5, 10, 50] {
            let hull = self.hull_beyond(b);
            for k in (b + 1)..=(b + upto) {
                let v = self.class_value(k);
                if !hull.contains(v) {
                    return Err(Error::Consistency(format!(
                        "{}: value {v} of class {k} outside hull {hull} beyond {b}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

fn harmonic_hull(b: u64) -> Span {
    Span::new(0.0, true, 1.0 / (b + 1) as f64, false)
}

impl fmt::Display for SequenceScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        let h = SequenceScenario::harmonic();
        assert_eq!(h.at(4), 0.25);
        let b = SequenceScenario::block_harmonic();
        assert_eq!(b.at(1), 1.0);
        assert_eq!(b.at(6), 0.5);
        assert_eq!(b.at(12), 1.0 / 3.0);
        let a = SequenceScenario::alternating();
        assert_eq!((a.at(1), a.at(2), a.at(7), a.at(8)), (-1.0, 1.0, -1.0, 1.0));
        assert_eq!(
            SequenceScenario::from_name("constant:2.5").unwrap().at(99),
            2.5
        );
        assert!(SequenceScenario::from_name("constant:x").is_err());
        assert!(SequenceScenario::from_name("nope").is_err());
    }

    #[test]
    fn hull_contracts() {
        for s in [
            SequenceScenario::harmonic(),
            SequenceScenario::block_harmonic(),
            SequenceScenario::alternating(),
            SequenceScenario::constant(-3.0),
        ] {
            s.check_hulls(200).unwrap();
        }
    }

    #[test]
    fn classes_in_window_for_blocks() {
        let b = SequenceScenario::block_harmonic();
        assert_eq!(b.classes_in_window(1), 1);
        assert_eq!(b.classes_in_window(7), 3);
        assert_eq!(b.classes_in_window(8), 4);
        assert_eq!(b.classes_in_window(10_000), 14);
        assert_eq!(b.representative(4), 8);
    }
}
