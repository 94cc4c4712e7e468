//! Constructive anti-power builders.
//!
//! Two constructions live here:
//!
//! * a 5-anti-power in any aperiodic recurrent word, anchored on four
//!   occurrences of an unbordered factor `w` that cannot reoccur within 100
//!   positions of itself;
//! * a `k`-anti-power with blocks of length `(c1 + 2)·r^α − 1 < C·k` at any
//!   position of a uniformly recurrent aperiodic fixed point of an
//!   `r`-uniform binary morphism, where `c1` is the recurrence constant of
//!   the marker `001` or `110`.
//!
//! Every search takes the earliest position satisfying its inequality, so
//! witnesses are reproducible.

use serde::Serialize;

use crate::antipower::{
    blocks_pairwise_distinct, verify_witness, AntiPowerWitness, ConstructionTag,
};
use crate::error::{Error, Result};
use crate::morphism::{FactorSet, UniformMorphism};
use crate::word::{border_array, FiniteWord, WordStream, DEFAULT_HORIZON};

/// Separation parameter `t` used by the five-block construction.
pub const SPACING: usize = 100;
/// Minimum gap `d1 - ℓ` between the first pair of anchors.
const PAIR_GAP: usize = 1000;
/// `d2 >= STRETCH · d1`.
const STRETCH: usize = 10;
/// Offset of the frame points `j1`, `j2` past the anchors.
const FRAME_OFFSET: usize = 500;
/// Number of candidate constructions, `c = 0..=10`.
pub const CANDIDATES: usize = 11;
const BLOCKS: usize = 5;

/// An unbordered factor longer than `t`. Two occurrences of it can never
/// start fewer than `ell` positions apart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpacedFactor {
    pub word: FiniteWord,
    pub ell: usize,
    pub t: usize,
    pub first_occurrence: usize,
}

/// Finds an unbordered factor of length `> t`.
///
/// The scan looks at a window of the prefix that doubles until something is
/// found: among all starts in the window it picks the shortest unbordered
/// factor longer than `t`, breaking ties by the earliest start.
pub fn find_spaced_factor(stream: &mut WordStream, t: usize) -> Result<SpacedFactor> {
    let cap = stream.horizon_cap();
    let mut window = (16 * (t + 1)).max(64).min(cap);
    let mut largest_seen = 0;
    loop {
        stream.ensure(window)?;
        let text = &stream.cached()[..window];
        let mut best: Option<(usize, usize)> = None; // (ell, 0-based start)
        for p in 0..window {
            let mut limit = window - p;
            if let Some((ell, _)) = best {
                limit = limit.min(ell - 1);
            }
            if limit <= t {
                break;
            }
            let border = border_array(&text[p..p + limit]);
            if let Some(q) = (0..limit).rev().find(|&q| border[q] == 0) {
                largest_seen = largest_seen.max(q + 1);
            }
            if let Some(q) = (t..limit).find(|&q| border[q] == 0) {
                best = Some((q + 1, p));
            }
        }
        if let Some((ell, p)) = best {
            let word = FiniteWord::from_letters_unchecked(text[p..p + ell].to_vec());
            let first_occurrence = stream.find_from(word.letters(), 1, "first occurrence")?;
            return Ok(SpacedFactor {
                word,
                ell,
                t,
                first_occurrence,
            });
        }
        if window == cap {
            return Err(Error::horizon(
                cap + 1,
                cap,
                format!(
                    "unbordered factor longer than {t} (largest unbordered length seen: {largest_seen})"
                ),
            ));
        }
        window = (window * 2).min(cap);
    }
}

/// Four anchor occurrences `i1 < i2 < i3 < i4` of the spaced factor with
/// `i2 - i1 = i4 - i3 = d1` and `i3 - i2 = d2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OccurrencePattern {
    pub i1: usize,
    pub i2: usize,
    pub i3: usize,
    pub i4: usize,
    pub d1: usize,
    pub d2: usize,
}

impl OccurrencePattern {
    pub fn anchors(&self) -> [usize; 4] {
        [self.i1, self.i2, self.i3, self.i4]
    }

    /// Every broken invariant, described; empty when the pattern is valid.
    pub fn violations(&self, stream: &mut WordStream, sf: &SpacedFactor) -> Result<Vec<String>> {
        let mut out = Vec::new();
        if self.i2 != self.i1 + self.d1 || self.i4 != self.i3 + self.d1 {
            out.push("i2 - i1 = i4 - i3 = d1 fails".to_string());
        }
        if self.i3 != self.i2 + self.d2 {
            out.push("i3 - i2 = d2 fails".to_string());
        }
        if self.d1 < sf.ell + PAIR_GAP {
            out.push(format!("d1 = {} < ell + {PAIR_GAP}", self.d1));
        }
        if self.d2 < STRETCH * self.d1 {
            out.push(format!("d2 = {} < {STRETCH}·d1", self.d2));
        }
        if self.i1 < self.d2 {
            out.push(format!("i1 = {} < d2 = {}", self.i1, self.d2));
        }
        for (n, &i) in self.anchors().iter().enumerate() {
            if stream.factor_slice(i, i + sf.ell - 1)? != sf.word.letters() {
                out.push(format!("w does not occur at i{} = {i}", n + 1));
            }
        }
        Ok(out)
    }
}

/// Locates the anchor pattern, stage by stage:
///
/// 1. `q`: first occurrence of `w` at or after `p + ℓ + 1000`, giving
///    `d1 = q - p`;
/// 2. `p'`: first occurrence of the pair `[p, p + d1 + ℓ - 1]` at or after
///    `p + d1 + 10·d1`, giving `d2 = p' - (p + d1)`, the gap between the
///    second anchor of the first pair and the first anchor of the copy;
/// 3. `i1`: first occurrence of `[p, p' + d1 + ℓ - 1]` at or after `d2 + 1`.
pub fn find_occurrence_pattern(
    stream: &mut WordStream,
    sf: &SpacedFactor,
) -> Result<OccurrencePattern> {
    let p = sf.first_occurrence;
    let ell = sf.ell;
    let q = stream.find_from(
        sf.word.letters(),
        p + ell + PAIR_GAP,
        "stage 1: second occurrence of w",
    )?;
    let d1 = q - p;
    let pair = stream.factor(p, p + d1 + ell - 1)?;
    let p2 = stream.find_from(
        pair.letters(),
        p + d1 + STRETCH * d1,
        "stage 2: second copy of the anchor pair",
    )?;
    let d2 = p2 - p - d1;
    let quad = stream.factor(p, p2 + d1 + ell - 1)?;
    let i1 = stream.find_from(
        quad.letters(),
        d2 + 1,
        "stage 3: late copy of all four anchors",
    )?;
    Ok(OccurrencePattern {
        i1,
        i2: i1 + d1,
        i3: i1 + d1 + d2,
        i4: i1 + d1 + d2 + d1,
        d1,
        d2,
    })
}

/// Frame points of the five-block construction. `d` is the base block
/// length `(j2 - j1) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrameParameters {
    pub j0: usize,
    pub j1: usize,
    pub j2: usize,
    #[serde(rename = "D")]
    pub d: usize,
}

impl FrameParameters {
    /// `j1 = i1 + ℓ + 500`; `j2` is `i3 + ℓ + 500` or one more, whichever
    /// makes `j2 - j1` even. Returns `None` if `j0` would not be positive.
    pub fn from_pattern(pattern: &OccurrencePattern, ell: usize) -> Option<Self> {
        let j1 = pattern.i1 + ell + FRAME_OFFSET;
        let base = pattern.i3 + ell + FRAME_OFFSET;
        let j2 = if (base - j1).is_multiple_of(2) {
            base
        } else {
            base + 1
        };
        let d = (j2 - j1) / 2;
        let j0 = j1.checked_sub(d).filter(|&j0| j0 >= 1)?;
        Some(FrameParameters { j0, j1, j2, d })
    }

    /// First position of block `a` (1-based) of candidate `c`.
    pub fn block_start(&self, c: usize, a: usize) -> usize {
        self.j0 + (a - 1) * (self.d + c)
    }

    pub fn block_len(&self, c: usize) -> usize {
        self.d + c
    }

    /// Last position touched by any candidate.
    pub fn span_end(&self) -> usize {
        self.block_start(CANDIDATES - 1, BLOCKS + 1) - 1
    }
}

/// Result of the five-block construction with everything needed to replay
/// it.
#[derive(Debug, Clone)]
pub struct FiveAntiPower {
    pub spaced_factor: SpacedFactor,
    pub pattern: OccurrencePattern,
    pub frame: FrameParameters,
    /// For each candidate `c`, the block pairs `(a, b)`, `a < b`, that are
    /// equal.
    pub equal_pairs: Vec<Vec<(usize, usize)>>,
    pub witness: AntiPowerWitness,
}

#[derive(Serialize)]
struct FrameJson {
    i1: usize,
    i2: usize,
    i3: usize,
    i4: usize,
    d1: usize,
    d2: usize,
    j0: usize,
    j1: usize,
    j2: usize,
    #[serde(rename = "D")]
    d: usize,
    ell: usize,
}

#[derive(Serialize)]
struct FiveAntiPowerJson<'a> {
    #[serde(flatten)]
    witness: &'a AntiPowerWitness,
    frame: FrameJson,
}

impl FiveAntiPower {
    fn frame_json(&self) -> FrameJson {
        let p = &self.pattern;
        FrameJson {
            i1: p.i1,
            i2: p.i2,
            i3: p.i3,
            i4: p.i4,
            d1: p.d1,
            d2: p.d2,
            j0: self.frame.j0,
            j1: self.frame.j1,
            j2: self.frame.j2,
            d: self.frame.d,
            ell: self.spaced_factor.ell,
        }
    }

    /// Witness JSON with an additional `"frame"` object.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&FiveAntiPowerJson {
            witness: &self.witness,
            frame: self.frame_json(),
        })
        .expect("serializes")
    }

    /// Number of candidates `c` for which blocks `a` and `b` coincide.
    pub fn collision_count(&self, a: usize, b: usize) -> usize {
        self.equal_pairs
            .iter()
            .filter(|pairs| pairs.contains(&(a, b)))
            .count()
    }
}

fn frame_dump(
    stream: &WordStream,
    sf: &SpacedFactor,
    pattern: &OccurrencePattern,
    frame: Option<&FrameParameters>,
) -> String {
    let candidates: Vec<Vec<String>> = frame
        .map(|f| {
            (0..CANDIDATES)
                .map(|c| {
                    (1..=BLOCKS)
                        .map(|a| {
                            let s = f.block_start(c, a);
                            stream
                                .slice(s, s + f.block_len(c) - 1)
                                .map(|b| FiniteWord::from_letters_unchecked(b.to_vec()).to_string())
                                .unwrap_or_default()
                        })
                        .collect()
                })
                .collect()
        })
        .unwrap_or_default();
    serde_json::json!({
        "spaced_factor": sf,
        "pattern": pattern,
        "frame": frame,
        "candidates": candidates,
    })
    .to_string()
}

/// Builds a 5-anti-power in an aperiodic recurrent word.
///
/// Eleven candidates `c = 0..=10` share the start `j0`; block `a` of
/// candidate `c` is `[j0 + (a-1)(D+c), j0 + a(D+c) - 1]`. Each pair of
/// blocks can coincide for at most one `c`, so with ten pairs some candidate
/// is an anti-power; the first such `c` is returned. All frame invariants are
/// checked on every run and any failure is reported as a theorem violation
/// with a full dump.
pub fn build_five_anti_power(stream: &mut WordStream) -> Result<FiveAntiPower> {
    let sf = find_spaced_factor(stream, SPACING)?;
    let pattern = find_occurrence_pattern(stream, &sf)?;
    let violation = |stream: &WordStream, reason: String, frame: Option<&FrameParameters>| {
        Error::TheoremViolation {
            reason,
            dump: frame_dump(stream, &sf, &pattern, frame),
        }
    };

    let broken = pattern.violations(stream, &sf)?;
    if !broken.is_empty() {
        return Err(violation(stream, broken.join("; "), None));
    }
    let frame = FrameParameters::from_pattern(&pattern, sf.ell)
        .ok_or_else(|| violation(stream, "j0 is not positive".into(), None))?;
    if (frame.j2 - frame.j1) % 2 != 0 || frame.j1 != pattern.i1 + sf.ell + FRAME_OFFSET {
        return Err(violation(
            stream,
            "frame parity or offset".into(),
            Some(&frame),
        ));
    }
    stream.ensure(frame.span_end())?;

    // Blocks 1..4 each contain one anchor copy of w: more than 100 positions
    // from both block ends for c = 0, and at least 50 for every c.
    for c in 0..CANDIDATES {
        let min_margin = if c == 0 { SPACING + 1 } else { SPACING / 2 };
        for (a, &anchor) in pattern.anchors().iter().enumerate() {
            let start = frame.block_start(c, a + 1);
            let end = start + frame.block_len(c) - 1;
            let inside = anchor >= start + min_margin && anchor + sf.ell - 1 + min_margin <= end;
            if !inside {
                return Err(violation(
                    stream,
                    format!(
                        "anchor i{} is not well inside block {} of candidate {c}",
                        a + 1,
                        a + 1
                    ),
                    Some(&frame),
                ));
            }
        }
    }

    let text = stream.cached();
    let equal_pairs: Vec<Vec<(usize, usize)>> = (0..CANDIDATES)
        .map(|c| {
            let block = |a: usize| {
                let s = frame.block_start(c, a) - 1;
                &text[s..s + frame.block_len(c)]
            };
            let mut pairs = Vec::new();
            for a in 1..=BLOCKS {
                for b in a + 1..=BLOCKS {
                    if block(a) == block(b) {
                        pairs.push((a, b));
                    }
                }
            }
            pairs
        })
        .collect();

    for a in 1..=BLOCKS {
        for b in a + 1..=BLOCKS {
            let hits = equal_pairs.iter().filter(|p| p.contains(&(a, b))).count();
            if hits > 1 {
                return Err(violation(
                    stream,
                    format!("blocks {a} and {b} coincide for {hits} candidates"),
                    Some(&frame),
                ));
            }
        }
    }

    let Some(c) = equal_pairs.iter().position(Vec::is_empty) else {
        return Err(violation(
            stream,
            "none of the 11 candidates is a 5-anti-power".into(),
            Some(&frame),
        ));
    };
    let witness = AntiPowerWitness::extract(
        stream,
        frame.j0,
        BLOCKS,
        frame.block_len(c),
        ConstructionTag::Theorem2,
        Some(c),
    )?;
    if !verify_witness(stream, &witness)? {
        return Err(violation(
            stream,
            "witness failed replay".into(),
            Some(&frame),
        ));
    }
    Ok(FiveAntiPower {
        spaced_factor: sf,
        pattern,
        frame,
        equal_pairs,
        witness,
    })
}

/// Least `c1` such that every factor of length `c1` contains `marker`, and
/// the resulting block-length constant `C = (c1 + 2)·r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceConstant {
    pub c1: usize,
    pub marker: FiniteWord,
    #[serde(rename = "C")]
    pub big_c: usize,
    #[serde(skip)]
    pub r: usize,
}

fn require_well_behaved(mu: &UniformMorphism) -> Result<()> {
    let class = mu.classify()?;
    if class.is_well_behaved() {
        Ok(())
    } else {
        Err(Error::UnsupportedClass(format!(
            "{mu} is not aperiodic and uniformly recurrent ({:?})",
            class.reason
        )))
    }
}

/// Upper limit on the factor length tried when searching for `c1`.
const MAX_C1: usize = 1 << 12;

/// Computes `c1` from exact factor sets, choosing between the markers `001`
/// and `110` the one that occurs and gives the smaller constant.
pub fn recurrence_constant(mu: &UniformMorphism) -> Result<RecurrenceConstant> {
    require_well_behaved(mu)?;
    let markers: Vec<FiniteWord> = ["001", "110"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .collect();
    let triples = mu.factor_set(3)?;
    let present: Vec<&FiniteWord> = markers.iter().filter(|m| triples.contains(m)).collect();
    if present.is_empty() {
        return Err(Error::ClassificationInconsistency(format!(
            "{mu} is classified aperiodic but contains neither 001 nor 110"
        )));
    }

    let mut sets: Vec<FactorSet> = Vec::new();
    let mut best: Option<(usize, &FiniteWord)> = None;
    for marker in present {
        let mut len = 3;
        let c1 = loop {
            if len > MAX_C1 || best.is_some_and(|(b, _)| len >= b) {
                break None;
            }
            while sets.len() <= len - 3 {
                sets.push(mu.factor_set(sets.len() + 3)?);
            }
            if sets[len - 3].members.iter().all(|f| f.contains(marker)) {
                break Some(len);
            }
            len += 1;
        };
        if let Some(c1) = c1 {
            best = Some((c1, marker));
        }
    }
    let (c1, marker) = best.ok_or_else(|| {
        Error::ClassificationInconsistency(format!(
            "no marker is forced within factors of length {MAX_C1}"
        ))
    })?;
    Ok(RecurrenceConstant {
        c1,
        marker: marker.clone(),
        big_c: (c1 + 2) * mu.r(),
        r: mu.r(),
    })
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Block-length schedule of the linear construction for a given `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearSchedule {
    pub alpha: u32,
    pub r_alpha: usize,
    pub block_length: usize,
}

/// Builds `k`-anti-powers at arbitrary positions of a uniformly recurrent
/// aperiodic fixed point, reusing one prefix and one `c1` across calls.
#[derive(Debug)]
pub struct MorphicAntiPowerBuilder {
    morphism: UniformMorphism,
    constant: RecurrenceConstant,
    stream: WordStream,
}

impl MorphicAntiPowerBuilder {
    pub fn new(mu: &UniformMorphism) -> Result<Self> {
        Self::with_horizon(mu, DEFAULT_HORIZON)
    }

    pub fn with_horizon(mu: &UniformMorphism, horizon_cap: usize) -> Result<Self> {
        let constant = recurrence_constant(mu)?;
        Ok(MorphicAntiPowerBuilder {
            morphism: mu.clone(),
            constant,
            stream: mu.fixed_point_with_horizon(horizon_cap)?,
        })
    }

    pub fn morphism(&self) -> &UniformMorphism {
        &self.morphism
    }

    pub fn constant(&self) -> &RecurrenceConstant {
        &self.constant
    }

    pub fn stream_mut(&mut self) -> &mut WordStream {
        &mut self.stream
    }

    /// `α` with `r^(α-1) < k <= r^α` and block length `(c1 + 2)·r^α - 1`.
    pub fn schedule(&self, k: usize) -> Result<LinearSchedule> {
        if k < 2 {
            return Err(Error::InvalidArgument("schedule needs k >= 2".into()));
        }
        let r = self.morphism.r();
        let mut alpha = 1u32;
        let mut r_alpha = r;
        while r_alpha < k {
            r_alpha = r_alpha
                .checked_mul(r)
                .ok_or_else(|| Error::Overflow(format!("{r}^{} overflows", alpha + 1)))?;
            alpha += 1;
        }
        let block_length = (self.constant.c1 + 2)
            .checked_mul(r_alpha)
            .ok_or_else(|| Error::Overflow("block length overflows".into()))?
            - 1;
        Ok(LinearSchedule {
            alpha,
            r_alpha,
            block_length,
        })
    }

    /// A `k`-anti-power starting at position `i` with blocks shorter than
    /// `C·k`.
    pub fn build(&mut self, i: usize, k: usize) -> Result<AntiPowerWitness> {
        if i == 0 || k == 0 {
            return Err(Error::InvalidArgument("i and k must be positive".into()));
        }
        if k == 1 {
            return AntiPowerWitness::extract(
                &mut self.stream,
                i,
                1,
                1,
                ConstructionTag::Theorem4,
                None,
            );
        }
        let sched = self.schedule(k)?;
        let m = sched.block_length;
        let big_c = self.constant.big_c;
        let fail = |reason: String| Error::TheoremViolation {
            reason,
            dump: serde_json::json!({
                "morphism": self.morphism.to_string(),
                "c1": self.constant.c1,
                "marker": self.constant.marker,
                "i": i,
                "k": k,
                "alpha": sched.alpha,
                "block_length": m,
            })
            .to_string(),
        };
        if gcd(m, sched.r_alpha) != 1 {
            return Err(fail(format!("gcd({m}, {}) != 1", sched.r_alpha)));
        }
        if m >= big_c.saturating_mul(k) {
            return Err(fail(format!("block length {m} >= C·k = {}", big_c * k)));
        }
        // Equal blocks j < j' would force r^α | (j' - j)·m.
        if let Some(d) = (1..k).find(|d| (d * m) % sched.r_alpha == 0) {
            return Err(fail(format!("r^α divides {d}·m")));
        }
        let witness =
            AntiPowerWitness::extract(&mut self.stream, i, k, m, ConstructionTag::Theorem4, None)?;
        if !blocks_pairwise_distinct(witness.blocks.iter().map(FiniteWord::letters)) {
            return Err(fail("blocks are not pairwise distinct".into()));
        }
        Ok(witness)
    }
}

/// One-shot form of [`MorphicAntiPowerBuilder::build`].
pub fn build_morphic_anti_power(
    mu: &UniformMorphism,
    i: usize,
    k: usize,
) -> Result<AntiPowerWitness> {
    MorphicAntiPowerBuilder::new(mu)?.build(i, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::is_unbordered;

    fn m(s: &str) -> UniformMorphism {
        s.parse().unwrap()
    }

    fn tm() -> WordStream {
        UniformMorphism::thue_morse().fixed_point().unwrap()
    }

    #[test]
    fn spaced_factor_small_t_is_shortest_earliest() {
        let mut s = tm();
        let sf = find_spaced_factor(&mut s, 3).unwrap();
        // Brute force over a length-64 prefix: shortest unbordered factor of
        // length 4..=6, earliest start.
        let prefix = s.prefix(64).unwrap();
        let mut expected = None;
        'outer: for len in 4..=6 {
            for p in 0..=64 - len {
                let f = FiniteWord::from_slice(&prefix.letters()[p..p + len]).unwrap();
                if is_unbordered(&f).unwrap() {
                    expected = Some((f, p + 1));
                    break 'outer;
                }
            }
        }
        let (word, pos) = expected.unwrap();
        assert_eq!(sf.word, word);
        assert_eq!(sf.word.to_string(), "0011");
        assert_eq!(sf.first_occurrence, pos);
        assert_eq!(sf.ell, 4);
    }

    #[test]
    fn spaced_factor_t_zero_is_single_letter() {
        let mut s = tm();
        let sf = find_spaced_factor(&mut s, 0).unwrap();
        assert_eq!(sf.word.to_string(), "0");
        assert_eq!(sf.ell, 1);
        assert_eq!(sf.first_occurrence, 1);
    }

    #[test]
    fn spaced_factor_t_100_on_thue_morse() {
        let mut s = tm();
        let sf = find_spaced_factor(&mut s, 100).unwrap();
        assert!(sf.ell > 100 && sf.ell <= 160, "ell = {}", sf.ell);
        assert!(is_unbordered(&sf.word).unwrap());
        assert_eq!(
            s.factor(sf.first_occurrence, sf.first_occurrence + sf.ell - 1)
                .unwrap(),
            sf.word
        );
        // Regression value for the deterministic scan.
        assert_eq!(sf.ell, 101);
    }

    #[test]
    fn spaced_factor_fails_loudly_on_periodic_word() {
        let mut s =
            WordStream::eventually_periodic(FiniteWord::empty(), "01".parse().unwrap(), 4096);
        match find_spaced_factor(&mut s, 10) {
            Err(Error::HorizonExceeded { context, .. }) => {
                assert!(
                    context.contains("largest unbordered length seen: 2"),
                    "{context}"
                )
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbordered_occurrences_are_spaced() {
        let mut s = tm();
        for t in [3, 10, 40] {
            let sf = find_spaced_factor(&mut s, t).unwrap();
            let occ = s.occurrences(&sf.word, 1 << 16).unwrap();
            assert!(occ.positions.len() > 10);
            for pair in occ.positions.windows(2) {
                assert!(pair[1] - pair[0] >= sf.ell);
            }
        }
    }

    #[test]
    fn occurrence_pattern_on_thue_morse_and_period_doubling() {
        for mu in [
            UniformMorphism::thue_morse(),
            UniformMorphism::period_doubling(),
        ] {
            assert!(mu.classify().unwrap().is_well_behaved());
            let mut s = mu.fixed_point().unwrap();
            let sf = find_spaced_factor(&mut s, SPACING).unwrap();
            let pat = find_occurrence_pattern(&mut s, &sf).unwrap();
            assert!(pat.violations(&mut s, &sf).unwrap().is_empty(), "{mu}");
            assert_eq!(pat.i2 - pat.i1, pat.i4 - pat.i3);
        }
    }

    #[test]
    fn frame_parity_and_positivity() {
        let pat = OccurrencePattern {
            i1: 30_000,
            i2: 31_200,
            i3: 43_201,
            i4: 44_401,
            d1: 1200,
            d2: 12_001,
        };
        let f = FrameParameters::from_pattern(&pat, 101).unwrap();
        assert_eq!(f.j1, 30_601);
        assert_eq!((f.j2 - f.j1) % 2, 0);
        assert_eq!(f.j2, 43_803);
        assert_eq!(f.d, 6601);
        assert_eq!(f.j0, 24_000);
        assert_eq!(f.j0, f.j1 - f.d);
        assert_eq!(f.block_start(0, 2), f.j1);
        assert_eq!(f.block_start(0, 4), f.j2);

        let early = OccurrencePattern { i1: 1, ..pat };
        assert!(FrameParameters::from_pattern(&early, 101).is_none());
    }

    #[test]
    fn five_anti_power_on_thue_morse() {
        let mut s = tm();
        let res = build_five_anti_power(&mut s).unwrap();
        let wit = &res.witness;
        assert!(verify_witness(&mut s, wit).unwrap());
        let c = wit.candidate_c.unwrap();
        assert!(c < CANDIDATES);
        assert_eq!(wit.block_length, res.frame.d + c);
        assert_eq!((res.frame.j2 - res.frame.j1) % 2, 0);
        assert_eq!(wit.construction_tag, ConstructionTag::Theorem2);
        for a in 1..=5 {
            for b in a + 1..=5 {
                assert!(res.collision_count(a, b) <= 1);
            }
        }
        let v: serde_json::Value = serde_json::from_str(&res.to_json()).unwrap();
        assert_eq!(v["frame"]["ell"], res.spaced_factor.ell);
        assert_eq!(v["frame"]["D"], res.frame.d);
        assert_eq!(v["tag"], "theorem2");
        assert_eq!(v["c"], c);
    }

    #[test]
    fn recurrence_constant_thue_morse() {
        let rc = recurrence_constant(&UniformMorphism::thue_morse()).unwrap();
        assert_eq!(rc.big_c / rc.r - 2, rc.c1);
        assert_eq!(rc.r, 2);
        // Some factor of length c1 - 1 avoids the marker.
        let shorter = UniformMorphism::thue_morse().factor_set(rc.c1 - 1).unwrap();
        assert!(shorter.members.iter().any(|f| !f.contains(&rc.marker)));
        let json: serde_json::Value = serde_json::to_value(&rc).unwrap();
        assert_eq!(json["C"], rc.big_c);
    }

    #[test]
    fn recurrence_constant_rejects_exceptional_words() {
        assert!(matches!(
            recurrence_constant(&m("0:010,1:111")),
            Err(Error::UnsupportedClass(_))
        ));
        assert!(matches!(
            recurrence_constant(&m("0:01,1:01")),
            Err(Error::UnsupportedClass(_))
        ));
    }

    #[test]
    fn morphic_builder_examples() {
        let tm = UniformMorphism::thue_morse();
        let mut b = MorphicAntiPowerBuilder::new(&tm).unwrap();
        let c1 = b.constant().c1;

        let one = b.build(1, 1).unwrap();
        assert_eq!(one.block_length, 1);
        assert_eq!(one.blocks[0].to_string(), "0");

        let two = b.build(1, 2).unwrap();
        assert_eq!(two.block_length, (c1 + 2) * 2 - 1);
        assert!(verify_witness(b.stream_mut(), &two).unwrap());

        let r3 = m("0:010,1:011");
        assert!(r3.classify().unwrap().is_well_behaved());
        let mut b3 = MorphicAntiPowerBuilder::new(&r3).unwrap();
        let sched = b3.schedule(5).unwrap();
        assert_eq!((sched.alpha, sched.r_alpha), (2, 9));
        let wit = b3.build(7, 5).unwrap();
        assert_eq!(wit.block_length, (b3.constant().c1 + 2) * 9 - 1);
        assert!(verify_witness(b3.stream_mut(), &wit).unwrap());
    }

    #[test]
    fn morphic_builder_schedule_boundaries() {
        let b = MorphicAntiPowerBuilder::new(&UniformMorphism::thue_morse()).unwrap();
        for (k, alpha) in [(2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)] {
            assert_eq!(b.schedule(k).unwrap().alpha, alpha, "k={k}");
        }
    }

    #[test]
    fn morphic_builder_horizon_error() {
        let mut b =
            MorphicAntiPowerBuilder::with_horizon(&UniformMorphism::thue_morse(), 1000).unwrap();
        assert!(matches!(
            b.build(990, 4),
            Err(Error::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(17, 8), 1);
        assert_eq!(gcd(5, 0), 5);
    }
}
