//! Property scanners that replay the structural lemmas on long prefixes,
//! and the γ-ratio table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::antipower::gamma;
use crate::construct::recurrence_constant;
use crate::error::{Error, Result};
use crate::morphism::{all_prolongable_morphisms, UniformMorphism};
use crate::word::{eventually_periodic_probe, Matcher, WordStream, DEFAULT_HORIZON};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Property {
    #[serde(rename = "lemma5")]
    Lemma5,
    #[serde(rename = "corollary7")]
    Corollary7,
    #[serde(rename = "prop3-agreement")]
    Prop3Agreement,
    #[serde(rename = "gamma-ratios")]
    GammaRatios,
}

/// One counterexample found by a scan.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub position: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub property: Property,
    #[serde(rename = "checked")]
    pub instances_checked: usize,
    pub violations: Vec<Violation>,
    #[serde(rename = "params")]
    pub parameters: BTreeMap<String, i64>,
    /// Informational notes that are not violations.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<String>,
}

impl ScanReport {
    fn new(property: Property) -> Self {
        ScanReport {
            property,
            instances_checked: 0,
            violations: Vec::new(),
            parameters: BTreeMap::new(),
            observations: Vec::new(),
        }
    }

    fn param(&mut self, name: &str, value: usize) {
        self.parameters.insert(name.to_string(), value as i64);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Merges reports of the same property produced over disjoint ranges.
    pub fn merge(mut self, other: ScanReport) -> ScanReport {
        assert_eq!(self.property, other.property);
        self.instances_checked += other.instances_checked;
        self.violations.extend(other.violations);
        self.violations.sort();
        self.observations.extend(other.observations);
        self
    }
}

fn require_aperiodic(mu: &UniformMorphism) -> Result<()> {
    if mu.classify()?.aperiodic {
        Ok(())
    } else {
        Err(Error::UnsupportedClass(format!("{mu} is not aperiodic")))
    }
}

fn require_well_behaved(mu: &UniformMorphism) -> Result<()> {
    if mu.classify()?.is_well_behaved() {
        Ok(())
    } else {
        Err(Error::UnsupportedClass(format!(
            "{mu} is not aperiodic and uniformly recurrent"
        )))
    }
}

fn prefix_of(mu: &UniformMorphism, len: usize) -> Result<WordStream> {
    let mut stream = mu.fixed_point_with_horizon(DEFAULT_HORIZON)?;
    stream.ensure(len)?;
    Ok(stream)
}

/// Marks every 0-based start where `block` occurs in `text`.
fn occurrence_mask(text: &[u8], block: &[u8]) -> Vec<bool> {
    let mut mask = vec![false; text.len()];
    for p in Matcher::new(block).find_all(text) {
        mask[p] = true;
    }
    mask
}

/// Windows equal to `AAB` or `BBA` in `text`, and those among them at a
/// start `γ` not divisible by `r`.
fn lemma5_scan(text: &[u8], a: &[u8], b: &[u8]) -> (usize, Vec<Violation>) {
    let r = a.len();
    let is_a = occurrence_mask(text, a);
    let is_b = occurrence_mask(text, b);
    let mut hits = 0;
    let mut violations = Vec::new();
    for g in 0..=text.len() - 3 * r {
        let aab = is_a[g] && is_a[g + r] && is_b[g + 2 * r];
        let bba = is_b[g] && is_b[g + r] && is_a[g + 2 * r];
        if aab || bba {
            hits += 1;
            if g % r != 0 {
                violations.push(Violation {
                    position: g,
                    other: None,
                    detail: if aab { "AAB" } else { "BBA" }.to_string(),
                });
            }
        }
    }
    (hits, violations)
}

/// Every window `[γ+1, γ+3r]` equal to `AAB` or `BBA` must have `r | γ`.
pub fn check_lemma5(mu: &UniformMorphism, prefix_len: usize) -> Result<ScanReport> {
    require_aperiodic(mu)?;
    let r = mu.r();
    if prefix_len < 3 * r {
        return Err(Error::InvalidArgument(format!(
            "prefix length {prefix_len} is shorter than 3r = {}",
            3 * r
        )));
    }
    let stream = prefix_of(mu, prefix_len)?;
    let (hits, violations) = lemma5_scan(
        &stream.cached()[..prefix_len],
        mu.image_of_0().letters(),
        mu.image_of_1().letters(),
    );
    let mut report = ScanReport::new(Property::Lemma5);
    report.violations = violations;
    report.instances_checked = prefix_len - 3 * r + 1;
    report.param("r", r);
    report.param("prefix_len", prefix_len);
    report.param("aab_or_bba_windows", hits);
    Ok(report)
}

/// Sampled start positions for the corollary scan: `1..=200` and the first
/// 200 multiples of `r^α`.
pub fn corollary7_samples(r_alpha: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (1..=200).chain((1..=200).map(|j| j * r_alpha)).collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Any factor of length at least `r^α·c1 + 2r^α - 2` occurring at `i1` and
/// `i2` must have `r^α | i2 - i1`.
pub fn check_corollary7(mu: &UniformMorphism, alpha: u32, prefix_len: usize) -> Result<ScanReport> {
    require_well_behaved(mu)?;
    if alpha == 0 {
        return Err(Error::InvalidArgument("alpha must be at least 1".into()));
    }
    let r_alpha = mu.power(alpha)?.r();
    let c1 = recurrence_constant(mu)?.c1;
    let len = r_alpha * c1 + 2 * r_alpha - 2;
    let stream = prefix_of(mu, prefix_len)?;
    let text = &stream.cached()[..prefix_len];

    let mut report = ScanReport::new(Property::Corollary7);
    let mut total_occurrences = 0;
    for s in corollary7_samples(r_alpha) {
        if s + len - 1 > prefix_len {
            continue;
        }
        let factor = &text[s - 1..s - 1 + len];
        let occ = Matcher::new(factor).find_all(text);
        total_occurrences += occ.len();
        report.instances_checked += 1;
        for p in occ.into_iter().map(|p| p + 1) {
            if p.abs_diff(s) % r_alpha != 0 {
                report.violations.push(Violation {
                    position: s,
                    other: Some(p),
                    detail: format!(
                        "occurrences differ by {} (not a multiple of {r_alpha})",
                        p.abs_diff(s)
                    ),
                });
            }
        }
    }
    report.param("alpha", alpha as usize);
    report.param("r_alpha", r_alpha);
    report.param("c1", c1);
    report.param("factor_len", len);
    report.param("prefix_len", prefix_len);
    report.param("occurrences", total_occurrences);
    Ok(report)
}

pub const PROP3_PREFIX: usize = 1 << 16;
pub const PROP3_MIN_TAIL: usize = 1 << 15;
pub const PROP3_APERIODIC_MAX_PERIOD: usize = 64;

/// Compares the classifier's aperiodicity verdict against the periodicity
/// probe on every `r`-uniform morphism prolongable at 0.
pub fn check_prop3_battery(r: usize) -> Result<ScanReport> {
    if !(2..=3).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "battery supports r in {{2, 3}}, got {r}"
        )));
    }
    let mut report = ScanReport::new(Property::Prop3Agreement);
    let mut aperiodic = 0;
    for (idx, mu) in all_prolongable_morphisms(r).into_iter().enumerate() {
        let class = mu.classify()?;
        let prefix = prefix_of(&mu, PROP3_PREFIX)?.prefix(PROP3_PREFIX)?;
        let agrees = if class.aperiodic {
            aperiodic += 1;
            eventually_periodic_probe(&prefix, PROP3_APERIODIC_MAX_PERIOD, PROP3_MIN_TAIL)?
                .is_none()
        } else {
            eventually_periodic_probe(&prefix, 2 * r, PROP3_MIN_TAIL)?.is_some()
        };
        report.instances_checked += 1;
        if !agrees {
            report.violations.push(Violation {
                position: idx,
                other: None,
                detail: format!("{mu}: classified {class:?}, probe disagrees"),
            });
        }
    }
    report.param("r", r);
    report.param("prefix_len", PROP3_PREFIX);
    report.param("min_tail", PROP3_MIN_TAIL);
    report.param("aperiodic", aperiodic);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaRow {
    pub k: usize,
    pub gamma: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct GammaTable {
    pub report: ScanReport,
    pub rows: Vec<GammaRow>,
}

impl GammaTable {
    /// A table computed outside the linear-bound search (caller-supplied cap).
    pub fn from_rows(rows: Vec<GammaRow>) -> Self {
        let mut report = ScanReport::new(Property::GammaRatios);
        report.instances_checked = rows.len();
        GammaTable { report, rows }
    }

    /// `k,gamma,ratio` with the ratio to six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,gamma,ratio\n");
        for row in &self.rows {
            writeln!(out, "{},{},{:.6}", row.k, row.gamma, row.ratio).expect("string write");
        }
        out
    }
}

/// Reference band for `γ(k)/k` on the Thue-Morse word (asymptotic, so only
/// reported).
pub const THUE_MORSE_BAND: (f64, f64) = (0.1, 1.5);

/// `γ_{i-1}(k)` for `k = 1..=k_max`, each searched up to the linear bound
/// `C·k`. Exceeding the bound is an error, never a silent truncation.
pub fn gamma_ratio_table(mu: &UniformMorphism, i: usize, k_max: usize) -> Result<GammaTable> {
    gamma_ratio_table_with_horizon(mu, i, k_max, DEFAULT_HORIZON)
}

pub fn gamma_ratio_table_with_horizon(
    mu: &UniformMorphism,
    i: usize,
    k_max: usize,
    horizon_cap: usize,
) -> Result<GammaTable> {
    require_well_behaved(mu)?;
    let rc = recurrence_constant(mu)?;
    let mut stream = mu.fixed_point_with_horizon(horizon_cap)?;
    let mut report = ScanReport::new(Property::GammaRatios);
    let is_thue_morse = *mu == UniformMorphism::thue_morse();
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let (g, _) = gamma(&mut stream, i, k, rc.big_c * k)?;
        let ratio = g as f64 / k as f64;
        if g > rc.big_c * k {
            report.violations.push(Violation {
                position: k,
                other: Some(g),
                detail: format!("gamma exceeds C·k = {}", rc.big_c * k),
            });
        }
        if is_thue_morse && k >= 10 && !(THUE_MORSE_BAND.0..=THUE_MORSE_BAND.1).contains(&ratio) {
            report
                .observations
                .push(format!("k={k}: ratio {ratio:.6} outside [0.1, 1.5]"));
        }
        rows.push(GammaRow { k, gamma: g, ratio });
        report.instances_checked += 1;
    }
    report.param("i", i);
    report.param("k_max", k_max);
    report.param("c1", rc.c1);
    report.param("C", rc.big_c);
    Ok(GammaTable { report, rows })
}
