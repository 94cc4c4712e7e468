//! Uniform binary morphisms, their fixed points, the aperiodicity and
//! uniform-recurrence classifier, and exact factor-set enumeration.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{FiniteWord, LetterRule, WordStream, DEFAULT_HORIZON};

/// Largest uniformity parameter `power` will produce.
pub const POWER_LIMIT: usize = 1 << 20;

/// An `r`-uniform morphism on `{0,1}`, given by `A = μ(0)` and `B = μ(1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniformMorphism {
    images: [FiniteWord; 2],
}

impl UniformMorphism {
    pub fn new(image_of_0: FiniteWord, image_of_1: FiniteWord) -> Result<Self> {
        if image_of_0.len() != image_of_1.len() {
            return Err(Error::InvalidMorphism(format!(
                "images have lengths {} and {}; a uniform morphism needs equal lengths",
                image_of_0.len(),
                image_of_1.len()
            )));
        }
        if image_of_0.len() < 2 {
            return Err(Error::InvalidMorphism(
                "image length must be at least 2".into(),
            ));
        }
        Ok(UniformMorphism {
            images: [image_of_0, image_of_1],
        })
    }

    /// 0 → 01, 1 → 10.
    pub fn thue_morse() -> Self {
        "0:01,1:10".parse().expect("valid literal")
    }

    /// 0 → 01, 1 → 00.
    pub fn period_doubling() -> Self {
        "0:01,1:00".parse().expect("valid literal")
    }

    pub fn r(&self) -> usize {
        self.images[0].len()
    }

    pub fn image(&self, letter: u8) -> &FiniteWord {
        &self.images[letter as usize]
    }

    pub fn image_of_0(&self) -> &FiniteWord {
        &self.images[0]
    }

    pub fn image_of_1(&self) -> &FiniteWord {
        &self.images[1]
    }

    /// `μ(0)` starts with 0.
    pub fn is_prolongable(&self) -> bool {
        self.images[0].letters()[0] == 0
    }

    /// Brings a morphism prolongable at 1 into the form prolongable at 0 by
    /// exchanging the roles of the letters. Returns the morphism and whether
    /// a swap happened.
    pub fn normalized(&self) -> Result<(Self, bool)> {
        if self.is_prolongable() {
            return Ok((self.clone(), false));
        }
        if self.images[1].letters()[0] == 1 {
            let swapped = UniformMorphism {
                images: [self.images[1].swapped(), self.images[0].swapped()],
            };
            return Ok((swapped, true));
        }
        Err(Error::InvalidGenerator(format!(
            "{self} is prolongable at neither letter"
        )))
    }

    fn require_prolongable(&self) -> Result<()> {
        if self.is_prolongable() {
            Ok(())
        } else {
            Err(Error::InvalidGenerator(format!(
                "{self}: image of 0 must start with 0"
            )))
        }
    }

    pub fn apply(&self, w: &FiniteWord) -> FiniteWord {
        let mut out = Vec::with_capacity(w.len() * self.r());
        self.apply_into(w.letters(), &mut out);
        FiniteWord::from_letters_unchecked(out)
    }

    pub(crate) fn apply_into(&self, w: &[u8], out: &mut Vec<u8>) {
        for &a in w {
            out.extend_from_slice(self.images[a as usize].letters());
        }
    }

    /// `μ^alpha`, an `r^alpha`-uniform morphism.
    pub fn power(&self, alpha: u32) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidArgument("exponent must be at least 1".into()));
        }
        let r_alpha = self
            .r()
            .checked_pow(alpha)
            .filter(|&v| v <= POWER_LIMIT)
            .ok_or_else(|| {
                Error::Overflow(format!(
                    "{}^{alpha} exceeds the power limit {POWER_LIMIT}",
                    self.r()
                ))
            })?;
        let mut images = self.images.clone();
        for _ in 1..alpha {
            images = [self.apply(&images[0]), self.apply(&images[1])];
        }
        debug_assert_eq!(images[0].len(), r_alpha);
        Ok(UniformMorphism { images })
    }

    /// The fixed point `μ^ω(0)` with the default horizon.
    pub fn fixed_point(&self) -> Result<WordStream> {
        self.fixed_point_with_horizon(DEFAULT_HORIZON)
    }

    pub fn fixed_point_with_horizon(&self, horizon_cap: usize) -> Result<WordStream> {
        self.require_prolongable()?;
        Ok(WordStream::new(
            FixedPointRule {
                images: [
                    self.images[0].letters().to_vec(),
                    self.images[1].letters().to_vec(),
                ],
            },
            horizon_cap,
        ))
    }

    /// The `i`-th letter of `μ^ω(0)` via base-`r` digit recursion, without
    /// materializing a prefix.
    pub fn letter_at(&self, i: usize) -> Result<u8> {
        self.require_prolongable()?;
        if i == 0 {
            return Err(Error::InvalidArgument("positions are 1-based".into()));
        }
        let r = self.r();
        let mut digits = Vec::new();
        let mut n = i - 1;
        while n > 0 {
            digits.push(n % r);
            n /= r;
        }
        Ok(digits
            .iter()
            .rev()
            .fold(0u8, |letter, &d| self.images[letter as usize].letters()[d]))
    }

    /// Decides aperiodicity and uniform recurrence of `μ^ω(0)`.
    pub fn classify(&self) -> Result<Classification> {
        self.require_prolongable()?;
        let r = self.r();
        let a = self.images[0].letters();
        let b = self.images[1].letters();
        let all = |x: &[u8], v: u8| x.iter().all(|&c| c == v);
        // Letter at 0-based position j of 0101...
        let alt = |j: usize| (j % 2) as u8;

        let zeros = all(a, 0);
        let zero_ones = a[1..].iter().all(|&c| c == 1) && all(b, 1);
        let alternating = (0..r).all(|j| a[j] == alt(j)) && (0..r).all(|j| b[j] == alt(r + j));

        let reason = if a == b {
            Reason::EqualImages
        } else if zeros {
            Reason::ExceptionalWord0000
        } else if zero_ones {
            Reason::ExceptionalWord0111
        } else if alternating {
            Reason::ExceptionalWord0101
        } else if all(b, 1) {
            Reason::AllOnesImage
        } else {
            Reason::None
        };
        let aperiodic = matches!(reason, Reason::AllOnesImage | Reason::None);
        let uniformly_recurrent = zeros || !all(b, 1);
        Ok(Classification {
            aperiodic,
            uniformly_recurrent,
            reason,
        })
    }

    /// Length-2 factors of `μ^ω(0)` by closure, with the number of rounds
    /// needed to reach the fixpoint.
    fn pair_closure(&self) -> (BTreeSet<[u8; 2]>, usize) {
        let mut pairs: BTreeSet<[u8; 2]> = self.images[0]
            .letters()
            .windows(2)
            .map(|p| [p[0], p[1]])
            .collect();
        let mut depth = 1;
        loop {
            let mut next = pairs.clone();
            let mut buf = Vec::with_capacity(2 * self.r());
            for p in &pairs {
                buf.clear();
                self.apply_into(p, &mut buf);
                next.extend(buf.windows(2).map(|q| [q[0], q[1]]));
            }
            if next.len() == pairs.len() {
                return (pairs, depth);
            }
            pairs = next;
            depth += 1;
        }
    }

    /// Length-`len` factors, exact for any prolongable uniform morphism.
    ///
    /// A window of length `len >= 2` of `W = μ(W)` touches at most
    /// `ceil((len-1)/r) + 1` consecutive letter images, so the length-`len`
    /// factors are exactly the windows of `μ(v)` for factors `v` of that
    /// shorter length. Length 2 is the closure base.
    fn enumerate_factors(&self, len: usize, pairs: &BTreeSet<[u8; 2]>) -> BTreeSet<Vec<u8>> {
        match len {
            1 => pairs
                .iter()
                .flat_map(|p| [vec![p[0]], vec![p[1]]])
                .collect(),
            2 => pairs.iter().map(|p| p.to_vec()).collect(),
            _ => {
                let shorter = (len - 1).div_ceil(self.r()) + 1;
                let mut out = BTreeSet::new();
                let mut buf = Vec::new();
                for v in self.enumerate_factors(shorter, pairs) {
                    buf.clear();
                    self.apply_into(&v, &mut buf);
                    out.extend(buf.windows(len).map(<[u8]>::to_vec));
                }
                out
            }
        }
    }

    /// All factors of length `len` of `μ^ω(0)`.
    ///
    /// Supported for uniformly recurrent fixed points only. Every enumerated
    /// member is confirmed to occur in a prefix before it is reported.
    pub fn factor_set(&self, len: usize) -> Result<FactorSet> {
        let class = self.classify()?;
        if !class.uniformly_recurrent {
            return Err(Error::UnsupportedClass(format!(
                "factor sets are only supported for uniformly recurrent fixed points; {self} is not"
            )));
        }
        if len == 0 {
            return Err(Error::InvalidArgument(
                "factor length must be positive".into(),
            ));
        }
        let (pairs, depth) = self.pair_closure();
        let members = self.enumerate_factors(len, &pairs);
        self.confirm_factors(&members, len, depth)?;
        Ok(FactorSet {
            length: len,
            members: members
                .into_iter()
                .map(FiniteWord::from_letters_unchecked)
                .collect(),
        })
    }

    fn confirm_factors(&self, members: &BTreeSet<Vec<u8>>, len: usize, depth: usize) -> Result<()> {
        let mut stream = self.fixed_point()?;
        let cap = stream.horizon_cap();
        let mut scan = (self.r() * depth * len).max(2 * len).min(cap);
        loop {
            stream.ensure(scan)?;
            let seen: HashSet<&[u8]> = stream.cached()[..scan].windows(len).collect();
            let missing = members.iter().find(|m| !seen.contains(m.as_slice()));
            match missing {
                None => return Ok(()),
                Some(m) if scan == cap => {
                    return Err(Error::UnconfirmedFactor {
                        factor: FiniteWord::from_letters_unchecked(m.clone()).to_string(),
                        scanned: scan,
                    })
                }
                Some(_) => scan = (scan * 2).min(cap),
            }
        }
    }
}

impl fmt::Display for UniformMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0:{},1:{}", self.images[0], self.images[1])
    }
}

impl fmt::Debug for UniformMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniformMorphism({self})")
    }
}

impl FromStr for UniformMorphism {
    type Err = Error;

    /// Parses `"0:A,1:B"`. Error positions are 1-based columns.
    fn from_str(s: &str) -> Result<Self> {
        let perr = |position: usize, reason: &str| Error::Parse {
            position,
            reason: reason.to_string(),
        };
        let rest = s
            .strip_prefix("0:")
            .ok_or_else(|| perr(1, "expected \"0:\""))?;
        let comma = rest
            .find(',')
            .ok_or_else(|| perr(s.len() + 1, "expected \",1:\" after the image of 0"))?;
        let a_text = &rest[..comma];
        let b_start = 2 + comma + 1;
        let b_text = s[b_start..]
            .strip_prefix("1:")
            .ok_or_else(|| perr(b_start + 1, "expected \"1:\""))?;
        let parse_image = |text: &str, offset: usize| -> Result<FiniteWord> {
            if text.is_empty() {
                return Err(perr(offset + 1, "image must be nonempty"));
            }
            text.parse::<FiniteWord>().map_err(|e| match e {
                Error::Parse { position, reason } => Error::Parse {
                    position: position + offset,
                    reason,
                },
                other => other,
            })
        };
        let a = parse_image(a_text, 2)?;
        let b = parse_image(b_text, b_start + 2)?;
        UniformMorphism::new(a, b).map_err(|e| perr(1, &e.to_string()))
    }
}

struct FixedPointRule {
    images: [Vec<u8>; 2],
}

impl LetterRule for FixedPointRule {
    fn next_letter(&self, prefix: &[u8]) -> u8 {
        let j = prefix.len();
        let r = self.images[0].len();
        if j == 0 {
            return self.images[0][0];
        }
        self.images[prefix[j / r] as usize][j % r]
    }
}

/// Why a fixed point falls outside the well-behaved class, if it does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reason {
    #[serde(rename = "equal-images")]
    EqualImages,
    #[serde(rename = "exceptional-word-0000")]
    ExceptionalWord0000,
    #[serde(rename = "exceptional-word-0111")]
    ExceptionalWord0111,
    #[serde(rename = "exceptional-word-0101")]
    ExceptionalWord0101,
    #[serde(rename = "all-ones-image")]
    AllOnesImage,
    #[serde(rename = "none")]
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub aperiodic: bool,
    pub uniformly_recurrent: bool,
    pub reason: Reason,
}

impl Classification {
    /// Aperiodic and uniformly recurrent: the class where linear-length
    /// anti-powers exist at every position.
    pub fn is_well_behaved(&self) -> bool {
        self.aperiodic && self.uniformly_recurrent
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    pub length: usize,
    pub members: BTreeSet<FiniteWord>,
}

impl FactorSet {
    pub fn contains(&self, w: &FiniteWord) -> bool {
        self.members.contains(w)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Every binary `r`-uniform morphism with `μ(0)` starting with 0, in a fixed
/// order.
pub fn all_prolongable_morphisms(r: usize) -> Vec<UniformMorphism> {
    assert!((2..=16).contains(&r));
    let word = |bits: usize| {
        FiniteWord::from_letters_unchecked((0..r).rev().map(|j| ((bits >> j) & 1) as u8).collect())
    };
    let mut out = Vec::with_capacity(1 << (2 * r - 1));
    for a in 0..(1usize << (r - 1)) {
        for b in 0..(1usize << r) {
            out.push(UniformMorphism::new(word(a), word(b)).expect("uniform by construction"));
        }
    }
    out
}
