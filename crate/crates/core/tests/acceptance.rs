//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use antipower::construct::{MorphicAntiPowerBuilder, CANDIDATES};
use antipower::morphism::all_prolongable_morphisms;
use antipower::verify::{check_corollary7, check_lemma5, check_prop3_battery, gamma_ratio_table};
use antipower::{
    build_five_anti_power, gamma, recurrence_constant, verify_witness, AntiPowerWitness,
    ConstructionTag, FiniteWord, UniformMorphism,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const TM: &str = "0:01,1:10";
const PD: &str = "0:01,1:00";
const R3: &str = "0:010,1:011";

fn mu(s: &str) -> UniformMorphism {
    s.parse().expect("morphism literal")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(v: &serde_json::Value, key: &str) -> Result<i64, String> {
    v[key]
        .as_i64()
        .ok_or_else(|| format!("missing integer field {key}"))
}

fn witness_from_json(v: &serde_json::Value) -> Result<AntiPowerWitness, String> {
    let blocks = v["blocks"]
        .as_array()
        .ok_or("missing blocks")?
        .iter()
        .map(|b| {
            b.as_str()
                .ok_or_else(|| "block is not a string".to_string())?
                .parse::<FiniteWord>()
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AntiPowerWitness {
        start: field(v, "start")? as usize,
        k: field(v, "k")? as usize,
        block_length: field(v, "block_length")? as usize,
        candidate_c: v["c"].as_u64().map(|c| c as usize),
        blocks,
        construction_tag: ConstructionTag::Theorem2,
    })
}

/// Runs `antipower ap5` and replays the witness and frame from its JSON.
fn ap5_via_cli(m: &str) -> Result<Duration, String> {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_antipower"))
        .args(["ap5", "--morphism", m])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(out.status.success(), || {
        format!(
            "{m}: exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("{m}: took {elapsed:?}")
    })?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(v["tag"] == "theorem2", || format!("{m}: tag {}", v["tag"]))?;
    let witness = witness_from_json(&v)?;
    let c = witness.candidate_c.ok_or("missing c")?;
    ensure(c < CANDIDATES, || format!("{m}: c = {c}"))?;
    let mut stream = mu(m).fixed_point().map_err(|e| e.to_string())?;
    ensure(
        witness.k == 5 && verify_witness(&mut stream, &witness).map_err(|e| e.to_string())?,
        || format!("{m}: witness does not replay"),
    )?;

    let f = &v["frame"];
    let g = |k: &str| field(f, k);
    let (i1, i2, i3, i4) = (g("i1")?, g("i2")?, g("i3")?, g("i4")?);
    let (d1, d2, ell) = (g("d1")?, g("d2")?, g("ell")?);
    let (j0, j1, j2, d) = (g("j0")?, g("j1")?, g("j2")?, g("D")?);
    let checks = [
        ("d1 >= ell + 1000", d1 >= ell + 1000),
        ("d2 >= 10 d1", d2 >= 10 * d1),
        ("i1 >= d2", i1 >= d2),
        ("i2 - i1 = d1", i2 - i1 == d1),
        ("i3 - i2 = d2", i3 - i2 == d2),
        ("i4 - i3 = d1", i4 - i3 == d1),
        ("j2 - j1 even", (j2 - j1) % 2 == 0),
        ("D = (j2 - j1) / 2", d == (j2 - j1) / 2),
        ("j0 = j1 - D", j0 == j1 - d),
        ("j0 >= 1", j0 >= 1),
        (
            "block length = D + c",
            witness.block_length as i64 == d + c as i64,
        ),
        ("start = j0", witness.start as i64 == j0),
    ];
    for (name, ok) in checks {
        ensure(ok, || format!("{m}: frame invariant {name} fails"))?;
    }
    Ok(elapsed)
}

fn criterion1() -> Outcome {
    let mut notes = Vec::new();
    for m in [TM, PD, R3] {
        let class = mu(m).classify().map_err(|e| e.to_string())?;
        ensure(class.is_well_behaved(), || format!("{m} not well behaved"))?;
        let t = ap5_via_cli(m)?;
        notes.push(format!("{m} {:.2}s", t.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn criterion2() -> Outcome {
    let mut worst = 0;
    for m in [TM, PD, R3] {
        let mut stream = mu(m).fixed_point().map_err(|e| e.to_string())?;
        let ap = build_five_anti_power(&mut stream).map_err(|e| e.to_string())?;
        ensure(ap.equal_pairs.len() == CANDIDATES, || {
            format!("{m}: {} candidate families recorded", ap.equal_pairs.len())
        })?;
        // Recompute the equal pairs from the stream, independently of the builder.
        for a in 1..=5 {
            for b in a + 1..=5 {
                let mut hits = 0;
                for c in 0..CANDIDATES {
                    let len = ap.frame.block_len(c);
                    let (sa, sb) = (ap.frame.block_start(c, a), ap.frame.block_start(c, b));
                    let x = stream.factor(sa, sa + len - 1).map_err(|e| e.to_string())?;
                    let y = stream.factor(sb, sb + len - 1).map_err(|e| e.to_string())?;
                    let equal = x == y;
                    ensure(equal == ap.equal_pairs[c].contains(&(a, b)), || {
                        format!("{m}: builder and replay disagree on ({a},{b}) at c={c}")
                    })?;
                    hits += equal as usize;
                }
                ensure(hits <= 1, || {
                    format!("{m}: pair ({a},{b}) equal for {hits} values of c")
                })?;
                worst = worst.max(hits);
            }
        }
    }
    Ok(format!("max collisions per pair = {worst}"))
}

fn criterion3() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for m in [TM, R3] {
        let morphism = mu(m);
        let r = morphism.r();
        let mut builder = MorphicAntiPowerBuilder::new(&morphism).map_err(|e| e.to_string())?;
        let c1 = builder.constant().c1;
        let mut check = builder
            .morphism()
            .fixed_point()
            .map_err(|e| e.to_string())?;
        for i in 1..=50 {
            for k in 1..=30 {
                let w = builder
                    .build(i, k)
                    .map_err(|e| format!("{m} i={i} k={k}: {e}"))?;
                ensure(
                    verify_witness(&mut check, &w).map_err(|e| e.to_string())?
                        && w.k == k
                        && w.start == i,
                    || format!("{m} i={i} k={k}: witness does not replay"),
                )?;
                let expected = if k == 1 {
                    1
                } else {
                    let mut ra = r;
                    while ra < k {
                        ra *= r;
                    }
                    (c1 + 2) * ra - 1
                };
                ensure(w.block_length == expected, || {
                    format!(
                        "{m} i={i} k={k}: m = {} expected {expected}",
                        w.block_length
                    )
                })?;
                ensure(w.block_length < (c1 + 2) * r * k, || {
                    format!("{m} i={i} k={k}: m = {} not below C·k", w.block_length)
                })?;
                count += 1;
            }
        }
    }
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{count} witnesses in {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion4() -> Outcome {
    let mut scanned = 0;
    let mut hits = 0;
    for r in [2, 3] {
        for m in all_prolongable_morphisms(r) {
            if !m.classify().map_err(|e| e.to_string())?.aperiodic {
                continue;
            }
            let report = check_lemma5(&m, 1_000_000).map_err(|e| format!("{m}: {e}"))?;
            ensure(report.passed(), || format!("{m}: {}", report.to_json()))?;
            scanned += 1;
            hits += report.instances_checked;
        }
    }
    Ok(format!("{scanned} morphisms, {hits} instances"))
}

fn criterion5() -> Outcome {
    let mut runs = 0;
    for m in [TM, PD, R3] {
        for alpha in [1, 2] {
            let report =
                check_corollary7(&mu(m), alpha, 100_000).map_err(|e| format!("{m}: {e}"))?;
            ensure(report.passed(), || {
                format!("{m} alpha={alpha}: {}", report.to_json())
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} scans"))
}

fn criterion6() -> Outcome {
    let mut total = 0;
    for r in [2, 3] {
        let report = check_prop3_battery(r).map_err(|e| e.to_string())?;
        ensure(report.passed(), || report.to_json())?;
        total += report.instances_checked;
    }
    ensure(total == 40, || {
        format!("{total} morphisms checked, expected 40")
    })?;
    Ok("40 morphisms, 0 disagreements".into())
}

fn oracle_gamma(w: &[u8], k: usize) -> usize {
    (1..)
        .find(|&m| {
            let blocks: Vec<&[u8]> = (0..k).map(|j| &w[j * m..(j + 1) * m]).collect();
            (0..k).all(|a| (a + 1..k).all(|b| blocks[a] != blocks[b]))
        })
        .unwrap()
}

fn criterion7() -> Outcome {
    // Thue-Morse by the parity-of-ones definition, independent of the morphism code.
    let w: Vec<u8> = (0u32..100_000)
        .map(|n| (n.count_ones() % 2) as u8)
        .collect();
    let oracle: Vec<usize> = (1..=20).map(|k| oracle_gamma(&w, k)).collect();
    ensure(oracle[1] == 1 && oracle[2] == 5, || {
        format!(
            "oracle gives gamma(2)={}, gamma(3)={}",
            oracle[1], oracle[2]
        )
    })?;
    let mut stream = mu(TM).fixed_point().map_err(|e| e.to_string())?;
    for k in 1..=20 {
        let (g, _) = gamma(&mut stream, 1, k, 10_000).map_err(|e| e.to_string())?;
        ensure(g == oracle[k - 1], || {
            format!("k={k}: gamma {g} oracle {}", oracle[k - 1])
        })?;
    }
    Ok(format!("gamma(1..=20) = {oracle:?}"))
}

fn criterion8() -> Outcome {
    let table = gamma_ratio_table(&mu(TM), 1, 100).map_err(|e| e.to_string())?;
    let c1 = recurrence_constant(&mu(TM)).map_err(|e| e.to_string())?.c1;
    for row in &table.rows {
        ensure(row.gamma <= (c1 + 2) * 2 * row.k, || {
            format!(
                "k={}: gamma {} > {}",
                row.k,
                row.gamma,
                (c1 + 2) * 2 * row.k
            )
        })?;
    }
    ensure(table.rows.len() == 100 && table.report.passed(), || {
        table.report.to_json()
    })?;
    let excursions = table.report.observations.len();
    for o in &table.report.observations {
        println!("  note: {o}");
    }
    Ok(format!(
        "bound (c1+2)·2·k = {}k holds; {excursions} band excursions (informational)",
        (c1 + 2) * 2
    ))
}

/// Longest factor of `prefix` avoiding `marker`, plus one.
fn prefix_c1(prefix: &[u8], marker: &[u8]) -> usize {
    let mut cut = vec![0usize];
    for s in 0..=prefix.len() - marker.len() {
        if &prefix[s..s + marker.len()] == marker {
            cut.push(s + 1);
        }
    }
    cut.push(prefix.len() + 1);
    // A marker-free window may begin right after one marker's first letter
    // and end just before the next marker's last letter.
    let longest = cut
        .windows(2)
        .map(|w| (w[1] - 1 + marker.len() - 1).min(prefix.len()) - w[0])
        .max()
        .unwrap();
    longest + 1
}

fn criterion9() -> Outcome {
    let mut notes = Vec::new();
    for m in [TM, R3] {
        let morphism = mu(m);
        let rc = recurrence_constant(&morphism).map_err(|e| e.to_string())?;
        let mut stream = morphism.fixed_point().map_err(|e| e.to_string())?;
        let prefix = stream.prefix(1 << 14).map_err(|e| e.to_string())?;
        let oracle = prefix_c1(prefix.letters(), rc.marker.letters());
        ensure(oracle == rc.c1, || {
            format!(
                "{m}: closure c1 = {} oracle = {oracle} (marker {})",
                rc.c1, rc.marker
            )
        })?;
        ensure(rc.big_c / morphism.r() - 2 == rc.c1, || {
            format!("{m}: C/r - 2 != c1")
        })?;
        notes.push(format!("{m} c1={} marker={}", rc.c1, rc.marker));
    }
    Ok(notes.join(", "))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("five-block construction via CLI", criterion1),
        ("at most one collision per block pair", criterion2),
        ("linear-length construction, i <= 50, k <= 30", criterion3),
        ("AAB/BBA scan on 10^6 letters", criterion4),
        ("residue scan, alpha in {1,2}", criterion5),
        ("classifier battery vs periodicity probe", criterion6),
        ("gamma vs brute-force oracle", criterion7),
        ("hard linear bound on gamma", criterion8),
        ("c1 closure vs prefix oracle", criterion9),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {}: {name} ({detail})", n + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {}: {name}: {e}", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
