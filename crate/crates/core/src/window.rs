//! Fixed-size bitsets over the index window `[1..N]`.

use std::fmt;

/// Subset of `{1, ..., size}`. Bit `n − 1` stores index `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Window {
    size: usize,
    words: Vec<u64>,
}

impl Window {
    pub fn empty(size: usize) -> Self {
        Window {
            size,
            words: vec![0; size.div_ceil(64)],
        }
    }

    pub fn full(size: usize) -> Self {
        let mut w = Window {
            size,
            words: vec![u64::MAX; size.div_ceil(64)],
        };
        w.clear_excess();
        w
    }

    pub fn from_members(size: usize, members: impl IntoIterator<Item = u64>) -> Self {
        let mut w = Window::empty(size);
        for n in members {
            w.insert(n);
        }
        w
    }

    pub fn from_predicate(size: usize, mut pred: impl FnMut(u64) -> bool) -> Self {
        let mut w = Window::empty(size);
        for n in 1..=size as u64 {
            if pred(n) {
                w.insert(n);
            }
        }
        w
    }

    /// Builds from inclusive `[start, end]` runs.
    pub fn from_runs(size: usize, runs: &[(u64, u64)]) -> Self {
        let mut w = Window::empty(size);
        for &(a, b) in runs {
            for n in a..=b {
                w.insert(n);
            }
        }
        w
    }

    fn clear_excess(&mut self) {
        let rem = self.size % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Panics when `n` is outside `[1..size]`.
    pub fn insert(&mut self, n: u64) {
        assert!(
            n >= 1 && n as usize <= self.size,
            "index {n} outside window [1..{}]",
            self.size
        );
        let i = (n - 1) as usize;
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, n: u64) {
        if n >= 1 && n as usize <= self.size {
            let i = (n - 1) as usize;
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 || n as usize > self.size {
            return false;
        }
        let i = (n - 1) as usize;
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                Some(wi as u64 * 64 + tz + 1)
            })
        })
    }

    pub fn min(&self) -> Option<u64> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<u64> {
        for (wi, &word) in self.words.iter().enumerate().rev() {
            if word != 0 {
                return Some(wi as u64 * 64 + (63 - word.leading_zeros() as u64) + 1);
            }
        }
        None
    }

    fn check_size(&self, other: &Window) {
        assert_eq!(self.size, other.size, "window size mismatch");
    }

    pub fn union(&self, other: &Window) -> Window {
        self.check_size(other);
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Window) -> Window {
        self.check_size(other);
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Window) -> Window {
        self.check_size(other);
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Window {
        let mut w = Window {
            size: self.size,
            words: self.words.iter().map(|w| !w).collect(),
        };
        w.clear_excess();
        w
    }

    pub fn is_subset(&self, other: &Window) -> bool {
        self.check_size(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Window) -> bool {
        self.intersection(other).is_empty()
    }

    fn zip(&self, other: &Window, f: impl Fn(u64, u64) -> u64) -> Window {
        Window {
            size: self.size,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Members as maximal inclusive runs `[start, end]`.
    pub fn runs(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        for n in self.iter() {
            match out.last_mut() {
                Some((_, end)) if *end + 1 == n => *end = n,
                _ => out.push((n, n)),
            }
        }
        out
    }

    /// Number of members `≤ n`.
    pub fn rank(&self, n: u64) -> usize {
        self.iter().take_while(|&m| m <= n).count()
    }
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Window[1..{}]{{", self.size)?;
        for (i, (a, b)) in self.runs().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if a == b {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}-{b}")?;
            }
        }
        write!(f, "}}")
    }
}
