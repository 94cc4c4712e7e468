//! Finite binary words, lazily generated infinite words, borders and
//! occurrence search.
//!
//! Every public position is 1-based: `factor(i, j)` is the factor starting
//! at the `i`-th letter and ending at the `j`-th, inclusive.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default maximum prefix length any search may force (2^24 letters).
pub const DEFAULT_HORIZON: usize = 1 << 24;

/// A finite word over `{0, 1}`. Letters are stored as the bytes `0` and `1`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord(Vec<u8>);

impl FiniteWord {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidLetter(bad));
        }
        Ok(FiniteWord(letters))
    }

    pub fn from_slice(letters: &[u8]) -> Result<Self> {
        Self::new(letters.to_vec())
    }

    /// Caller guarantees every byte is 0 or 1.
    pub(crate) fn from_letters_unchecked(letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&b| b <= 1));
        FiniteWord(letters)
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }

    /// Exchanges the letters 0 and 1.
    pub fn swapped(&self) -> FiniteWord {
        FiniteWord(self.0.iter().map(|&b| 1 - b).collect())
    }

    /// True if `pattern` occurs somewhere in `self`.
    pub fn contains(&self, pattern: &FiniteWord) -> bool {
        if pattern.is_empty() {
            return true;
        }
        Matcher::new(pattern.letters())
            .find_first(&self.0, 0)
            .is_some()
    }

    /// Repeats `self` until `len` letters have been produced.
    pub fn cycle_to(&self, len: usize) -> FiniteWord {
        assert!(!self.is_empty() || len == 0);
        FiniteWord(self.0.iter().copied().cycle().take(len).collect())
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| (b'0' + b) as char).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteWord({self})")
    }
}

impl FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(col, ch)| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse {
                    position: col + 1,
                    reason: format!("expected '0' or '1', found {other:?}"),
                }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(FiniteWord)
    }
}

impl Serialize for FiniteWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FiniteWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Border array: entry `q` is the length of the longest proper border of
/// `w[..=q]`.
pub fn border_array(w: &[u8]) -> Vec<usize> {
    let mut border = vec![0usize; w.len()];
    let mut b = 0;
    for q in 1..w.len() {
        while b > 0 && w[q] != w[b] {
            b = border[b - 1];
        }
        if w[q] == w[b] {
            b += 1;
        }
        border[q] = b;
    }
    border
}

/// True iff no proper nonempty prefix of `w` is also a suffix of `w`.
pub fn is_unbordered(w: &FiniteWord) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::UndefinedInput(
            "borders of the empty word are undefined".into(),
        ));
    }
    Ok(border_array(w.letters())[w.len() - 1] == 0)
}

/// Knuth-Morris-Pratt matcher over 0-based byte slices.
pub(crate) struct Matcher<'p> {
    pattern: &'p [u8],
    border: Vec<usize>,
}

impl<'p> Matcher<'p> {
    pub(crate) fn new(pattern: &'p [u8]) -> Self {
        assert!(!pattern.is_empty());
        Matcher {
            pattern,
            border: border_array(pattern),
        }
    }

    fn scan(&self, text: &[u8], from: usize, mut on_match: impl FnMut(usize) -> bool) {
        let m = self.pattern.len();
        let mut q = 0;
        for (idx, &c) in text.iter().enumerate().skip(from) {
            while q > 0 && self.pattern[q] != c {
                q = self.border[q - 1];
            }
            if self.pattern[q] == c {
                q += 1;
            }
            if q == m {
                if !on_match(idx + 1 - m) {
                    return;
                }
                q = self.border[q - 1];
            }
        }
    }

    /// First 0-based start `>= from` of the pattern in `text`.
    pub(crate) fn find_first(&self, text: &[u8], from: usize) -> Option<usize> {
        let mut hit = None;
        self.scan(text, from, |p| {
            hit = Some(p);
            false
        });
        hit
    }

    /// All 0-based starts in `text`, ascending.
    pub(crate) fn find_all(&self, text: &[u8]) -> Vec<usize> {
        let mut hits = Vec::new();
        self.scan(text, 0, |p| {
            hits.push(p);
            true
        });
        hits
    }
}

/// Rule producing the next letter of an infinite word from the letters
/// already generated.
pub trait LetterRule: Send + Sync {
    fn next_letter(&self, prefix: &[u8]) -> u8;
}

/// Adapts a closure `position -> letter` (1-based) into a [`LetterRule`].
pub struct PositionalRule<F>(pub F);

impl<F> LetterRule for PositionalRule<F>
where
    F: Fn(usize) -> u8 + Send + Sync,
{
    fn next_letter(&self, prefix: &[u8]) -> u8 {
        (self.0)(prefix.len() + 1)
    }
}

/// A lazily extended prefix of an infinite binary word.
///
/// The cached prefix only grows. Extension needs `&mut self`; once a prefix
/// is cached, any number of readers may share `&self` and read it through
/// [`WordStream::cached`] or [`WordStream::slice`].
pub struct WordStream {
    rule: Box<dyn LetterRule>,
    cache: Vec<u8>,
    horizon_cap: usize,
}

impl fmt::Debug for WordStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordStream")
            .field("cached_len", &self.cache.len())
            .field("horizon_cap", &self.horizon_cap)
            .finish()
    }
}

impl WordStream {
    pub fn new(rule: impl LetterRule + 'static, horizon_cap: usize) -> Self {
        assert!(horizon_cap >= 1, "horizon cap must be positive");
        WordStream {
            rule: Box::new(rule),
            cache: Vec::new(),
            horizon_cap,
        }
    }

    /// Stream whose `i`-th letter is `f(i)`.
    pub fn from_fn<F>(f: F, horizon_cap: usize) -> Self
    where
        F: Fn(usize) -> u8 + Send + Sync + 'static,
    {
        Self::new(PositionalRule(f), horizon_cap)
    }

    /// The eventually periodic word `prefix · period · period · ...`.
    pub fn eventually_periodic(prefix: FiniteWord, period: FiniteWord, horizon_cap: usize) -> Self {
        assert!(!period.is_empty());
        let pre = prefix.into_letters();
        let per = period.into_letters();
        Self::from_fn(
            move |i| {
                if i <= pre.len() {
                    pre[i - 1]
                } else {
                    per[(i - 1 - pre.len()) % per.len()]
                }
            },
            horizon_cap,
        )
    }

    pub fn horizon_cap(&self) -> usize {
        self.horizon_cap
    }

    pub fn cached_len(&self) -> usize {
        self.cache.len()
    }

    /// The prefix generated so far.
    pub fn cached(&self) -> &[u8] {
        &self.cache
    }

    /// Extends the cached prefix to at least `n` letters.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        if n > self.horizon_cap {
            return Err(Error::horizon(n, self.horizon_cap, "prefix extension"));
        }
        if n > self.cache.len() {
            self.cache.reserve(n - self.cache.len());
            while self.cache.len() < n {
                let next = self.rule.next_letter(&self.cache);
                if next > 1 {
                    return Err(Error::InvalidLetter(next));
                }
                self.cache.push(next);
            }
        }
        Ok(())
    }

    pub fn letter(&mut self, i: usize) -> Result<u8> {
        if i == 0 {
            return Err(Error::InvalidArgument("positions are 1-based".into()));
        }
        self.ensure(i)?;
        Ok(self.cache[i - 1])
    }

    /// Letters `i..=j` of an already cached prefix, or `None` if they are not
    /// cached yet.
    pub fn slice(&self, i: usize, j: usize) -> Option<&[u8]> {
        if i == 0 || i > j || j > self.cache.len() {
            return None;
        }
        Some(&self.cache[i - 1..j])
    }

    /// Letters `i..=j` as a slice, extending the cache if necessary.
    pub fn factor_slice(&mut self, i: usize, j: usize) -> Result<&[u8]> {
        if i == 0 {
            return Err(Error::InvalidArgument("positions are 1-based".into()));
        }
        if j > self.horizon_cap {
            return Err(Error::horizon(
                j,
                self.horizon_cap,
                format!("factor [{i}, {j}]"),
            ));
        }
        if i > j {
            return Err(Error::EmptyRange { i, j });
        }
        self.ensure(j)?;
        Ok(&self.cache[i - 1..j])
    }

    /// The factor `[i, j]`.
    pub fn factor(&mut self, i: usize, j: usize) -> Result<FiniteWord> {
        self.factor_slice(i, j)
            .map(|s| FiniteWord::from_letters_unchecked(s.to_vec()))
    }

    pub fn prefix(&mut self, n: usize) -> Result<FiniteWord> {
        if n == 0 {
            return Ok(FiniteWord::empty());
        }
        self.factor(1, n)
    }

    /// All occurrences of `w` lying entirely within the first `scan_limit`
    /// letters.
    pub fn occurrences(&mut self, w: &FiniteWord, scan_limit: usize) -> Result<OccurrenceList> {
        if w.is_empty() {
            return Err(Error::UndefinedInput(
                "cannot search for the empty word".into(),
            ));
        }
        if scan_limit > self.horizon_cap {
            return Err(Error::horizon(
                scan_limit,
                self.horizon_cap,
                "occurrence scan",
            ));
        }
        self.ensure(scan_limit)?;
        let positions = Matcher::new(w.letters())
            .find_all(&self.cache[..scan_limit])
            .into_iter()
            .map(|p| p + 1)
            .collect();
        Ok(OccurrenceList {
            pattern: w.clone(),
            positions,
            scanned_up_to: scan_limit,
        })
    }

    /// First occurrence of `pattern` starting at a position `>= from`,
    /// extending the prefix as far as the horizon allows. `context` names the
    /// search in the horizon-exceeded error.
    pub fn find_from(&mut self, pattern: &[u8], from: usize, context: &str) -> Result<usize> {
        if pattern.is_empty() {
            return Err(Error::UndefinedInput(
                "cannot search for the empty word".into(),
            ));
        }
        let from = from.max(1);
        let m = pattern.len();
        let matcher = Matcher::new(pattern);
        let mut scan_from = from - 1;
        let mut target = self.cache.len().max(from - 1 + m).max(4 * m).max(1024);
        loop {
            target = target.min(self.horizon_cap);
            if from - 1 + m > target {
                return Err(Error::horizon(from - 1 + m, self.horizon_cap, context));
            }
            self.ensure(target)?;
            if let Some(p) = matcher.find_first(&self.cache[..target], scan_from) {
                return Ok(p + 1);
            }
            if target == self.horizon_cap {
                return Err(Error::horizon(target + 1, self.horizon_cap, context));
            }
            scan_from = scan_from.max(target + 1 - m);
            target = target.saturating_mul(2);
        }
    }
}

/// Start positions of a pattern within a scanned prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceList {
    pub pattern: FiniteWord,
    /// 1-based, strictly ascending.
    pub positions: Vec<usize>,
    pub scanned_up_to: usize,
}

/// A detected eventual period: the word from letter `preperiod + 1` onward
/// repeats with period `period`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Periodicity {
    pub preperiod: usize,
    pub period: usize,
}

/// Heuristic periodicity detector for finite prefixes.
///
/// Returns the smallest `(preperiod, period)` (ordered by preperiod, then
/// period) with `period <= max_period` such that `x[j] = x[j + period]` holds
/// for every `j > preperiod` and for at least `min_tail` consecutive
/// positions.
pub fn eventually_periodic_probe(
    prefix: &FiniteWord,
    max_period: usize,
    min_tail: usize,
) -> Result<Option<Periodicity>> {
    if max_period == 0 {
        return Err(Error::InvalidArgument("max_period must be positive".into()));
    }
    let need = min_tail + 2 * max_period;
    let x = prefix.letters();
    if x.len() < need {
        return Err(Error::InsufficientData {
            need,
            have: x.len(),
        });
    }
    let n = x.len();
    let mut best: Option<Periodicity> = None;
    for period in 1..=max_period {
        // 0-based index of the last mismatch, scanning backwards.
        let preperiod = (0..n - period)
            .rev()
            .find(|&j| x[j] != x[j + period])
            .map_or(0, |j| j + 1);
        if n - preperiod < min_tail + period {
            continue;
        }
        let cand = Periodicity { preperiod, period };
        if best.is_none_or(|b| (cand.preperiod, cand.period) < (b.preperiod, b.period)) {
            best = Some(cand);
        }
    }
    Ok(best)
}
