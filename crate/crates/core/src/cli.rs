//! Command-line front end. All output is deterministic; errors map to
//! distinct exit codes (1 usage, 2 horizon, 3 cap exceeded,
//! 4 unsupported class, 5 theorem violation or failed verification).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::antipower::{gamma, verify_witness, AntiPowerWitness};
use crate::construct::{build_five_anti_power, recurrence_constant, MorphicAntiPowerBuilder};
use crate::error::{Error, Result};
use crate::morphism::UniformMorphism;
use crate::verify::{self, ScanReport};
use crate::word::DEFAULT_HORIZON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Lemma5,
    Corollary7,
    Prop3,
    GammaRatios,
}

#[derive(Debug, Parser)]
#[command(
    name = "antipower",
    version,
    about = "Anti-powers in binary uniform-morphic words"
)]
pub struct Cli {
    /// Maximum prefix length any search may generate.
    #[arg(long, global = true, default_value_t = DEFAULT_HORIZON)]
    pub horizon: usize,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a prefix of the fixed point.
    Prefix {
        #[arg(long)]
        morphism: UniformMorphism,
        #[arg(long)]
        length: usize,
    },
    /// Aperiodicity and uniform recurrence of the fixed point.
    Classify {
        #[arg(long)]
        morphism: UniformMorphism,
    },
    /// Table of gamma(k) for k = 1..=k-max at a start position.
    Gamma {
        #[arg(long)]
        morphism: UniformMorphism,
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
        /// Largest block length tried; defaults to C·k for well-behaved words.
        #[arg(long)]
        m_cap: Option<usize>,
    },
    /// Build a 5-anti-power from four anchored occurrences.
    Ap5 {
        #[arg(long)]
        morphism: UniformMorphism,
    },
    /// Build a k-anti-power at a position with blocks shorter than C·k.
    Apk {
        #[arg(long)]
        morphism: UniformMorphism,
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[arg(long)]
        k: usize,
    },
    /// The recurrence constant c1, its marker and C = (c1 + 2)·r.
    C1 {
        #[arg(long)]
        morphism: UniformMorphism,
    },
    /// Run a property scan; exits 0 iff it finds no violation.
    Verify {
        #[arg(value_enum)]
        property: PropertyArg,
        #[arg(long)]
        morphism: Option<UniformMorphism>,
        #[arg(long)]
        prefix_len: Option<usize>,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        /// Uniformity parameter for the exhaustive battery.
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[arg(long, default_value_t = 100)]
        k_max: usize,
    },
}

/// Morphism normalized to be prolongable at 0, remembering whether letters
/// were exchanged so output can be mapped back.
struct Input {
    morphism: UniformMorphism,
    swapped: bool,
}

impl Input {
    fn new(raw: &UniformMorphism) -> Result<Self> {
        let (morphism, swapped) = raw.normalized()?;
        Ok(Input { morphism, swapped })
    }

    fn restore(&self, mut witness: AntiPowerWitness) -> AntiPowerWitness {
        if self.swapped {
            witness.blocks = witness.blocks.iter().map(|b| b.swapped()).collect();
        }
        witness
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn witness_plain(w: &AntiPowerWitness) -> String {
    let mut s = format!(
        "{}-anti-power at position {} with block length {} ({:?}",
        w.k, w.start, w.block_length, w.construction_tag
    );
    if let Some(c) = w.candidate_c {
        write!(s, ", c = {c}").unwrap();
    }
    s.push_str(")\n");
    for (j, b) in w.blocks.iter().enumerate() {
        writeln!(s, "  block {}: {b}", j + 1).unwrap();
    }
    s
}

fn report_plain(r: &ScanReport) -> String {
    let mut s = format!(
        "{:?}: {} checked, {} violations\n",
        r.property,
        r.instances_checked,
        r.violations.len()
    );
    for (k, v) in &r.parameters {
        writeln!(s, "  {k} = {v}").unwrap();
    }
    for v in &r.violations {
        writeln!(s, "  violation at {}: {}", v.position, v.detail).unwrap();
    }
    for o in &r.observations {
        writeln!(s, "  note: {o}").unwrap();
    }
    s
}

/// Executes a parsed command, returning the text to print and the exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32)> {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Prefix { morphism, length } => {
            let input = Input::new(morphism)?;
            let mut stream = input.morphism.fixed_point_with_horizon(cli.horizon)?;
            let mut prefix = stream.prefix(*length)?;
            if input.swapped {
                prefix = prefix.swapped();
            }
            match fmt(Format::Plain) {
                Format::Plain => Ok((format!("{prefix}\n"), 0)),
                Format::Json => Ok((
                    json(&serde_json::json!({
                        "morphism": morphism.to_string(),
                        "length": length,
                        "prefix": prefix,
                    })),
                    0,
                )),
                Format::Csv => Err(usage("prefix has no csv output")),
            }
        }
        Command::Classify { morphism } => {
            let input = Input::new(morphism)?;
            let c = input.morphism.classify()?;
            match fmt(Format::Json) {
                Format::Json => Ok((json(&c), 0)),
                Format::Plain => Ok((
                    format!(
                        "aperiodic: {}\nuniformly_recurrent: {}\nreason: {}\n",
                        c.aperiodic,
                        c.uniformly_recurrent,
                        serde_json::to_value(c.reason).unwrap().as_str().unwrap()
                    ),
                    0,
                )),
                Format::Csv => Err(usage("classify has no csv output")),
            }
        }
        Command::Gamma {
            morphism,
            start,
            k_max,
            m_cap,
        } => {
            let input = Input::new(morphism)?;
            let mu = &input.morphism;
            let table = match m_cap {
                None => {
                    if !mu.classify()?.is_well_behaved() {
                        return Err(Error::UnsupportedClass(format!(
                            "{morphism}: no default block-length cap; pass --m-cap"
                        )));
                    }
                    verify::gamma_ratio_table_with_horizon(mu, *start, *k_max, cli.horizon)?
                }
                Some(cap) => {
                    let mut stream = mu.fixed_point_with_horizon(cli.horizon)?;
                    let rows = (1..=*k_max)
                        .map(|k| {
                            gamma(&mut stream, *start, k, *cap).map(|(g, _)| verify::GammaRow {
                                k,
                                gamma: g,
                                ratio: g as f64 / k as f64,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    verify::GammaTable::from_rows(rows)
                }
            };
            match fmt(Format::Csv) {
                Format::Csv | Format::Plain => Ok((table.to_csv(), 0)),
                Format::Json => Ok((
                    json(&serde_json::json!({ "rows": table.rows, "report": table.report })),
                    0,
                )),
            }
        }
        Command::Ap5 { morphism } => {
            let input = Input::new(morphism)?;
            if !input.morphism.classify()?.is_well_behaved() {
                return Err(Error::UnsupportedClass(format!(
                    "{morphism} is not aperiodic and uniformly recurrent"
                )));
            }
            let mut stream = input.morphism.fixed_point_with_horizon(cli.horizon)?;
            let mut res = build_five_anti_power(&mut stream)?;
            if !verify_witness(&mut stream, &res.witness)? {
                return Err(Error::TheoremViolation {
                    reason: "emitted witness failed replay".into(),
                    dump: res.to_json(),
                });
            }
            res.witness = input.restore(res.witness);
            match fmt(Format::Json) {
                Format::Json | Format::Csv => Ok((format!("{}\n", res.to_json()), 0)),
                Format::Plain => Ok((witness_plain(&res.witness), 0)),
            }
        }
        Command::Apk { morphism, start, k } => {
            let input = Input::new(morphism)?;
            let mut builder = MorphicAntiPowerBuilder::with_horizon(&input.morphism, cli.horizon)?;
            let witness = builder.build(*start, *k)?;
            if !verify_witness(builder.stream_mut(), &witness)? {
                return Err(Error::TheoremViolation {
                    reason: "emitted witness failed replay".into(),
                    dump: witness.to_json(),
                });
            }
            let witness = input.restore(witness);
            match fmt(Format::Json) {
                Format::Json | Format::Csv => Ok((format!("{}\n", witness.to_json()), 0)),
                Format::Plain => Ok((witness_plain(&witness), 0)),
            }
        }
        Command::C1 { morphism } => {
            let input = Input::new(morphism)?;
            let mut rc = recurrence_constant(&input.morphism)?;
            if input.swapped {
                rc.marker = rc.marker.swapped();
            }
            match fmt(Format::Json) {
                Format::Json | Format::Csv => Ok((json(&rc), 0)),
                Format::Plain => Ok((
                    format!("c1 = {} (marker {}), C = {}\n", rc.c1, rc.marker, rc.big_c),
                    0,
                )),
            }
        }
        Command::Verify {
            property,
            morphism,
            prefix_len,
            alpha,
            r,
            start,
            k_max,
        } => {
            let need_morphism = || -> Result<UniformMorphism> {
                let raw = morphism
                    .as_ref()
                    .ok_or_else(|| usage("this property needs --morphism"))?;
                Ok(Input::new(raw)?.morphism)
            };
            let report = match property {
                PropertyArg::Lemma5 => {
                    verify::check_lemma5(&need_morphism()?, prefix_len.unwrap_or(1_000_000))?
                }
                PropertyArg::Corollary7 => verify::check_corollary7(
                    &need_morphism()?,
                    *alpha,
                    prefix_len.unwrap_or(100_000),
                )?,
                PropertyArg::Prop3 => verify::check_prop3_battery(*r)?,
                PropertyArg::GammaRatios => {
                    verify::gamma_ratio_table_with_horizon(
                        &need_morphism()?,
                        *start,
                        *k_max,
                        cli.horizon,
                    )?
                    .report
                }
            };
            let code = if report.passed() { 0 } else { 5 };
            match fmt(Format::Json) {
                Format::Json | Format::Csv => Ok((format!("{}\n", report.to_json()), code)),
                Format::Plain => Ok((report_plain(&report), code)),
            }
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("antipower").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(
            run_str(&["prefix", "--morphism", "0:01,1:10", "--length", "8"]).1,
            "01101001\n"
        );
        assert_eq!(
            run_str(&["prefix", "--morphism", "0:00,1:11", "--length", "4"]).1,
            "0000\n"
        );
        assert_eq!(
            run_str(&["prefix", "--morphism", "0:01,1:11", "--length", "4"]).1,
            "0111\n"
        );
    }

    #[test]
    fn prefix_of_word_starting_with_one() {
        // 0 -> 11, 1 -> 10 is prolongable at 1 only.
        let (code, out, _) = run_str(&["prefix", "--morphism", "0:11,1:10", "--length", "8"]);
        assert_eq!((code, out.as_str()), (0, "10111010\n"));
        let (code, _, err) = run_str(&["prefix", "--morphism", "0:10,1:01", "--length", "8"]);
        assert_eq!(code, 1);
        assert!(err.contains("neither letter"), "{err}");
    }

    #[test]
    fn classify_examples() {
        let parse = |m: &str| -> serde_json::Value {
            let (code, out, _) = run_str(&["classify", "--morphism", m]);
            assert_eq!(code, 0);
            serde_json::from_str(&out).unwrap()
        };
        let v = parse("0:01,1:10");
        assert_eq!(
            (v["aperiodic"].as_bool(), v["uniformly_recurrent"].as_bool()),
            (Some(true), Some(true))
        );
        let v = parse("0:01,1:01");
        assert_eq!(v["aperiodic"], false);
        assert_eq!(v["reason"], "equal-images");
        let v = parse("0:011,1:111");
        assert_eq!(v["uniformly_recurrent"], false);
        // 0:011,1:111 generates 0111..., which is also not aperiodic.
        assert_eq!(v["reason"], "exceptional-word-0111");
        let v = parse("0:010,1:111");
        assert_eq!(v["reason"], "all-ones-image");
    }

    #[test]
    fn apk_k1() {
        let (code, out, _) =
            run_str(&["apk", "--morphism", "0:01,1:10", "--start", "1", "--k", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["k"], 1);
        assert_eq!(v["block_length"], 1);
        assert_eq!(v["blocks"], serde_json::json!(["0"]));
        assert_eq!(v["tag"], "theorem4");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run_str(&["prefix", "--morphism", "0:0x,1:10", "--length", "4"]).0,
            1
        );
        assert_eq!(run_str(&["bogus"]).0, 1);
        assert_eq!(run_str(&["--help"]).0, 0);
        assert_eq!(
            run_str(&[
                "prefix",
                "--morphism",
                "0:01,1:10",
                "--length",
                "100",
                "--horizon",
                "50"
            ])
            .0,
            2
        );
        assert_eq!(
            run_str(&[
                "gamma",
                "--morphism",
                "0:01,1:10",
                "--k-max",
                "3",
                "--m-cap",
                "4"
            ])
            .0,
            3
        );
        assert_eq!(
            run_str(&["apk", "--morphism", "0:010,1:111", "--k", "3"]).0,
            4
        );
        assert_eq!(run_str(&["c1", "--morphism", "0:01,1:01"]).0, 4);
        assert_eq!(run_str(&["verify", "lemma5"]).0, 1);
    }

    #[test]
    fn gamma_csv() {
        let (code, out, _) = run_str(&["gamma", "--morphism", "0:01,1:10", "--k-max", "3"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "k,gamma,ratio\n1,1,1.000000\n2,1,0.500000\n3,5,1.666667\n"
        );
    }

    #[test]
    fn c1_json() {
        let (code, out, _) = run_str(&["c1", "--morphism", "0:01,1:10"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let c1 = v["c1"].as_u64().unwrap();
        assert_eq!(v["C"].as_u64().unwrap(), (c1 + 2) * 2);
        assert!(v["marker"] == "001" || v["marker"] == "110");
    }

    #[test]
    fn verify_prop3_and_corollary7() {
        let (code, out, _) = run_str(&["verify", "prop3", "--r", "2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["property"], "prop3-agreement");
        assert_eq!(v["checked"], 8);

        let (code, _, _) = run_str(&[
            "verify",
            "corollary7",
            "--morphism",
            "0:01,1:10",
            "--alpha",
            "2",
            "--prefix-len",
            "20000",
        ]);
        assert_eq!(code, 0);
    }

    #[test]
    fn output_is_deterministic() {
        let args = [
            "apk",
            "--morphism",
            "0:010,1:011",
            "--start",
            "7",
            "--k",
            "5",
        ];
        let a = run_str(&args);
        let b = run_str(&args);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
    }
}
