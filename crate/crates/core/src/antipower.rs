//! Anti-power checks and the γ function.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{FiniteWord, WordStream};

/// Which procedure produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionTag {
    Definitional,
    Theorem2,
    Theorem4,
}

/// `k` consecutive pairwise-distinct blocks of length `block_length`
/// starting at `start`. Never trusted on its own: replay it with
/// [`verify_witness`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntiPowerWitness {
    pub start: usize,
    pub k: usize,
    pub block_length: usize,
    /// Candidate index for five-block constructions.
    #[serde(rename = "c")]
    pub candidate_c: Option<usize>,
    pub blocks: Vec<FiniteWord>,
    #[serde(rename = "tag")]
    pub construction_tag: ConstructionTag,
}

impl AntiPowerWitness {
    /// Reads the `k` blocks of length `block_length` at `start` from `stream`.
    pub fn extract(
        stream: &mut WordStream,
        start: usize,
        k: usize,
        block_length: usize,
        construction_tag: ConstructionTag,
        candidate_c: Option<usize>,
    ) -> Result<Self> {
        if start == 0 || k == 0 || block_length == 0 {
            return Err(Error::InvalidArgument(
                "start, k and block length must be positive".into(),
            ));
        }
        let end = start - 1 + k * block_length;
        let span = stream.factor_slice(start, end)?;
        let blocks = span
            .chunks_exact(block_length)
            .map(|b| FiniteWord::from_letters_unchecked(b.to_vec()))
            .collect();
        Ok(AntiPowerWitness {
            start,
            k,
            block_length,
            candidate_c,
            blocks,
            construction_tag,
        })
    }

    /// Last position covered by the blocks.
    pub fn end(&self) -> usize {
        self.start + self.k * self.block_length - 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }
}

/// True iff no two of the given blocks are equal. Blocks are hashed; equal
/// hashes are settled by exact comparison.
pub fn blocks_pairwise_distinct<'a, I>(blocks: I) -> bool
where
    I: IntoIterator<Item = &'a [u8]>,
{
    let mut seen = HashSet::new();
    blocks.into_iter().all(|b| seen.insert(b))
}

/// Is `w` a `k`-anti-power, i.e. are its `k` equal-length blocks pairwise
/// distinct?
pub fn is_k_anti_power(w: &FiniteWord, k: usize) -> Result<bool> {
    if k == 0 || !w.len().is_multiple_of(k) {
        return Err(Error::Shape { len: w.len(), k });
    }
    if w.is_empty() {
        // k blocks of length zero are all equal.
        return Ok(k == 1);
    }
    let m = w.len() / k;
    Ok(blocks_pairwise_distinct(w.letters().chunks_exact(m)))
}

/// Smallest `m <= m_cap` such that the length-`k·m` factor at `i` is a
/// `k`-anti-power, searched exhaustively from `m = 1`.
pub fn gamma(
    stream: &mut WordStream,
    i: usize,
    k: usize,
    m_cap: usize,
) -> Result<(usize, AntiPowerWitness)> {
    if i == 0 || k == 0 || m_cap == 0 {
        return Err(Error::InvalidArgument(
            "start, k and m_cap must be positive".into(),
        ));
    }
    for m in 1..=m_cap {
        let span = stream.factor_slice(i, i - 1 + k * m)?;
        if blocks_pairwise_distinct(span.chunks_exact(m)) {
            let witness =
                AntiPowerWitness::extract(stream, i, k, m, ConstructionTag::Definitional, None)?;
            return Ok((m, witness));
        }
    }
    Err(Error::CapExceeded {
        k,
        largest_tried: m_cap,
    })
}

/// Replays a witness against `stream`: shape, block contents and pairwise
/// distinctness.
pub fn verify_witness(stream: &mut WordStream, witness: &AntiPowerWitness) -> Result<bool> {
    let m = witness.block_length;
    if witness.start == 0 || witness.k == 0 || m == 0 || witness.blocks.len() != witness.k {
        return Ok(false);
    }
    if witness.blocks.iter().any(|b| b.len() != m) {
        return Ok(false);
    }
    let span = stream.factor_slice(witness.start, witness.end())?;
    let matches_source = span
        .chunks_exact(m)
        .zip(&witness.blocks)
        .all(|(src, b)| src == b.letters());
    Ok(matches_source && blocks_pairwise_distinct(witness.blocks.iter().map(FiniteWord::letters)))
}
