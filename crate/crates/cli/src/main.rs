use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational, ToPrimitive};
use serde_json::{json, Value};
use tcamsplit::analysis::{l1_distance, parse_counts, run_experiment_with, trial_rng, CountColumn};
use tcamsplit::tcam::{evaluate_table, synthesize_lpm, table_to_sequence, RuleTable};
use tcamsplit::{
    bit_matcher, lambda, normalize_counts, play_game, rw, validate_sequence, BoundsReport, MatcherKind,
    Partition, Strategy, TransactionSequence, WorstCaseKind,
};

/// Compiles traffic-split partitions into longest-prefix-match TCAM rule
/// tables and reports bounds and statistics.
#[derive(Parser, Debug)]
#[command(name = "tcamsplit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the minimal prefix rule table for a partition.
    Compile {
        #[command(flatten)]
        part: PartArgs,
        /// Also print the transaction sequence the table was built from.
        #[arg(long)]
        emit_sequence: bool,
    },
    /// Print every size bound for a partition.
    Bounds {
        #[command(flatten)]
        part: PartArgs,
    },
    /// Count the addresses each target receives from a rule table.
    Verify {
        /// Rule file (text or JSON), or "-" for stdin.
        #[arg(long)]
        rules: String,
        #[arg(long)]
        width: Option<u32>,
        /// Fail unless the induced weights equal these.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Emit or check a transaction sequence.
    Sequence {
        /// Comma-separated weights; required unless --rules is given.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        width: Option<u32>,
        #[arg(long, default_value = "bit", value_parser = parse_matcher)]
        matcher: MatcherKind,
        /// Validate this sequence file against the weights instead.
        #[arg(long, conflicts_with = "rules")]
        check: Option<String>,
        /// With --check, allow negative intermediate weights.
        #[arg(long, requires = "check")]
        allow_negative: bool,
        /// Read a prefix rule table and emit its sequence.
        #[arg(long)]
        rules: Option<String>,
    },
    /// Monte Carlo statistics over uniformly sampled partitions.
    Sample {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        width: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value = "bit", value_parser = parse_matcher)]
        matcher: MatcherKind,
    },
    /// Emit an extremal partition and its table size.
    Worstcase {
        #[arg(long, value_parser = parse_kind)]
        kind: WorstCaseKind,
        #[arg(long)]
        width: u32,
        /// Number of parts; ignored by k2 and k3.
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Round real counts to the nearest partition of a power of two.
    Normalize {
        /// Count file, or "-" for stdin.
        #[arg(long)]
        counts: String,
        /// CSV column holding the counts, by index or header name.
        #[arg(long)]
        column: Option<String>,
        /// The width is the smallest multiple of this that fits.
        #[arg(long, default_value_t = 8)]
        multiple: u32,
    },
    /// Expected displacement of a lazy random walk.
    Rw {
        /// Step probability in each direction, as "a/b".
        #[arg(long, value_parser = parse_fraction)]
        p: BigRational,
        #[arg(long)]
        n: usize,
    },
    /// Play the zeroing-bits game.
    Game {
        #[arg(long, value_parser = parse_strategy)]
        strategy: Strategy,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        plays: usize,
    },
}

#[derive(clap::Args, Debug)]
struct PartArgs {
    /// Comma-separated weights.
    #[arg(long)]
    weights: String,
    /// Address width; inferred from the sum when omitted.
    #[arg(long)]
    width: Option<u32>,
}

impl PartArgs {
    fn partition(&self) -> Result<Partition> {
        Ok(Partition::parse(&self.weights, self.width)?)
    }
}

/// A bad flag combination detected after parsing; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn parse_matcher(s: &str) -> std::result::Result<MatcherKind, String> {
    s.parse().map_err(|e: tcamsplit::Error| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<WorstCaseKind, String> {
    s.parse().map_err(|e: tcamsplit::Error| e.to_string())
}

fn parse_strategy(s: &str) -> std::result::Result<Strategy, String> {
    s.parse().map_err(|e: tcamsplit::Error| e.to_string())
}

fn parse_fraction(s: &str) -> std::result::Result<BigRational, String> {
    let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| format!("expected a fraction a/b, got {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let b = int(b)?;
            if b == BigInt::from(0) {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(int(a)?, b))
        }
        None => Ok(BigRational::from_integer(int(s)?)),
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| usage(format!("{what} is randomized and requires --seed")))
}

fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn parse_table(text: &str, width: Option<u32>) -> Result<RuleTable> {
    if text.trim_start().starts_with('{') {
        let t = RuleTable::from_json(text)?;
        if let Some(w) = width {
            if w != t.width() {
                bail!("rule table has width {}, expected {w}", t.width());
            }
        }
        Ok(t)
    } else {
        Ok(RuleTable::parse_text(text, width)?)
    }
}

fn weights_json(p: &Partition) -> Value {
    serde_json::from_str::<Value>(&p.to_json()).expect("partition json")["weights"].clone()
}

fn csv_line(fields: &[String]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(fields)?;
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn compile(part: &PartArgs, emit_sequence: bool, format: Format) -> Result<String> {
    let p = part.partition()?;
    let table = synthesize_lpm(&p);
    let b = BoundsReport::new(&p);
    let seq = bit_matcher(&p);
    Ok(match format {
        Format::Table => {
            let mut out = table.to_text();
            writeln!(out, "# lambda={} lpm_lower={} lpm_upper={}", table.len(), b.lpm_lower, b.lpm_upper)?;
            if emit_sequence {
                for t in seq.iter() {
                    writeln!(out, "# {t}")?;
                }
            }
            out
        }
        Format::Json => {
            let mut v = json!({
                "width": p.width(),
                "weights": weights_json(&p),
                "rules": serde_json::from_str::<Value>(&table.to_json())?["rules"],
                "lambda": table.len(),
                "lpm_lower": b.lpm_lower,
                "lpm_upper": b.lpm_upper,
            });
            if emit_sequence {
                v["sequence"] = serde_json::from_str(&seq.to_json())?;
            }
            json_string(&v)
        }
        Format::Csv => {
            let mut out = String::from("pattern,target\n");
            for r in table.rules() {
                out += &csv_line(&[r.pattern.to_string(), r.target.to_string()])?;
            }
            out
        }
    })
}

fn bounds(part: &PartArgs, format: Format) -> Result<String> {
    let p = part.partition()?;
    let b = BoundsReport::new(&p);
    let rows: [(&str, String); 8] = [
        ("lambda", lambda(&p).to_string()),
        ("lpm_lower", b.lpm_lower.to_string()),
        ("lpm_upper", b.lpm_upper.to_string()),
        ("general_lower", b.general_lower.to_string()),
        ("trivial_lower", b.trivial_lower.to_string()),
        ("worstcase_cap", b.worstcase_cap.to_string()),
        ("phi_total", b.phi_total.to_string()),
        ("phi_max", b.phi_max.to_string()),
    ];
    Ok(match format {
        Format::Table => rows.iter().map(|(k, v)| format!("{k}={v}\n")).collect(),
        Format::Json => {
            let mut v = serde_json::to_value(b)?;
            v["lambda"] = json!(lambda(&p));
            json_string(&v)
        }
        Format::Csv => {
            let keys: Vec<String> = rows.iter().map(|(k, _)| k.to_string()).collect();
            let vals: Vec<String> = rows.iter().map(|(_, v)| v.clone()).collect();
            csv_line(&keys)? + &csv_line(&vals)?
        }
    })
}

fn verify(rules: &str, width: Option<u32>, expect: Option<&str>, format: Format) -> Result<String> {
    let table = parse_table(&read_input(rules)?, width)?;
    let counts = evaluate_table(&table)?;
    let induced: Vec<String> = counts[1..].iter().map(|c| c.to_string()).collect();
    if counts[0] != 0 {
        bail!("rule table leaves {} addresses unmatched", counts[0]);
    }
    if let Some(e) = expect {
        let want = Partition::parse(e, Some(table.width()))?;
        let got: Vec<String> = want.weights().iter().map(|w| w.to_string()).collect();
        if got != induced {
            bail!("induced weights {} differ from expected {}", induced.join(","), got.join(","));
        }
    }
    Ok(match format {
        Format::Table => induced.join(",") + "\n",
        Format::Json => json_string(&json!({ "width": table.width(), "counts": induced })),
        Format::Csv => {
            let mut out = String::from("target,count\n");
            for (i, c) in induced.iter().enumerate() {
                out += &csv_line(&[(i + 1).to_string(), c.clone()])?;
            }
            out
        }
    })
}

fn sequence_text(s: &TransactionSequence, format: Format) -> Result<String> {
    Ok(match format {
        Format::Table => s.to_text(),
        Format::Json => json_string(&serde_json::from_str(&s.to_json())?),
        Format::Csv => {
            let mut out = String::from("src,size,dst\n");
            for t in s.iter() {
                out += &csv_line(&[t.src.to_string(), t.size().to_string(), t.dst.to_string()])?;
            }
            out
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn sequence(
    weights: Option<&str>,
    width: Option<u32>,
    matcher: MatcherKind,
    check: Option<&str>,
    allow_negative: bool,
    rules: Option<&str>,
    seed: Option<u64>,
    format: Format,
) -> Result<String> {
    if let Some(rules) = rules {
        let table = parse_table(&read_input(rules)?, width)?;
        return sequence_text(&table_to_sequence(&table)?, format);
    }
    let weights = weights.ok_or_else(|| usage("sequence needs --weights or --rules"))?;
    let p = Partition::parse(weights, width)?;
    if let Some(path) = check {
        let text = read_input(path)?;
        let s = if text.trim_start().starts_with('[') {
            TransactionSequence::parse_json(&text, p.width(), p.k())?
        } else {
            TransactionSequence::parse_text(&text, p.width(), p.k())?
        };
        let r = validate_sequence(&p, &s, !allow_negative);
        let out = match format {
            Format::Json => json_string(&serde_json::to_value(&r)?),
            _ => format!(
                "length={} zeroes={} nonnegative={} monotone={} zero_only_terminal={} lpm_ready={}\n",
                r.length,
                r.zeroes,
                r.nonnegative,
                r.monotone,
                r.zero_only_terminal,
                r.lpm_ready()
            ),
        };
        if !r.passes() {
            bail!("{}sequence does not zero the partition", out);
        }
        return Ok(out);
    }
    let seed = if matcher.is_randomized() { require_seed(seed, "the random matcher")? } else { 0 };
    let s = matcher.run(&p, &mut trial_rng(seed, 0));
    sequence_text(&s, format)
}

fn sample(k: usize, width: u32, trials: usize, matcher: MatcherKind, seed: Option<u64>, format: Format) -> Result<String> {
    let seed = require_seed(seed, "sample")?;
    let s = run_experiment_with(matcher, k, width, trials, seed)?;
    Ok(match format {
        Format::Json => json_string(&serde_json::to_value(&s)?),
        _ => format!("{}\n{}\n", tcamsplit::ExperimentStats::CSV_HEADER, s.csv_row()),
    })
}

fn worstcase(kind: WorstCaseKind, width: u32, k: usize, format: Format) -> Result<String> {
    let p = kind.generate(k, width)?;
    let lam = lambda(&p);
    Ok(match format {
        Format::Table => format!("{p} lambda={lam}\n"),
        Format::Json => json_string(&json!({
            "kind": kind.name(),
            "width": p.width(),
            "k": p.k(),
            "weights": weights_json(&p),
            "lambda": lam,
        })),
        Format::Csv => {
            csv_line(&["kind", "k", "W", "weights", "lambda"].map(String::from))?
                + &csv_line(&[kind.name().into(), p.k().to_string(), p.width().to_string(), p.to_string(), lam.to_string()])?
        }
    })
}

fn normalize(counts: &str, column: Option<&str>, multiple: u32, format: Format) -> Result<String> {
    let column = column.map(CountColumn::parse);
    let raw = parse_counts(&read_input(counts)?, column.as_ref())?;
    let p = normalize_counts(&raw, multiple)?;
    let l1 = l1_distance(&p, &raw);
    Ok(match format {
        Format::Table => format!("{p} width={} l1={l1:.6}\n", p.width()),
        Format::Json => json_string(&json!({ "width": p.width(), "weights": weights_json(&p), "l1": l1 })),
        Format::Csv => {
            csv_line(&["W", "weights", "l1"].map(String::from))?
                + &csv_line(&[p.width().to_string(), p.to_string(), format!("{l1:.6}")])?
        }
    })
}

fn random_walk(p: &BigRational, n: usize, format: Format) -> Result<String> {
    let pf = p.to_f64().context("probability out of range")?;
    if !(0.0..=0.5).contains(&pf) || *p < BigRational::from_integer(0.into()) {
        bail!("probability {p} outside [0, 1/2]");
    }
    let v = rw(pf, n)?;
    Ok(match format {
        Format::Table => format!("{v}\n"),
        Format::Json => json_string(&json!({ "p": p.to_string(), "n": n, "rw": v })),
        Format::Csv => format!("p,n,rw\n{p},{n},{v}\n"),
    })
}

fn game(strategy: Strategy, m: u32, plays: usize, seed: Option<u64>, format: Format) -> Result<String> {
    let seed = require_seed(seed, "game")?;
    if plays == 0 {
        return Err(usage("--plays must be at least 1"));
    }
    let (mut turns, mut gain) = (0usize, 0u64);
    for i in 0..plays {
        let t = play_game(strategy, m, &mut trial_rng(seed, i));
        turns += t.turns;
        gain += t.total_gain();
    }
    let mean_turns = turns as f64 / plays as f64;
    let mean_gain = if turns == 0 { 0.0 } else { gain as f64 / turns as f64 };
    let per_m = mean_turns / f64::from(m.max(1));
    Ok(match format {
        Format::Table => format!(
            "strategy={strategy} m={m} plays={plays} mean_turns={mean_turns:.6} turns_per_m={per_m:.6} mean_gain={mean_gain:.6}\n"
        ),
        Format::Json => json_string(&json!({
            "strategy": strategy.name(),
            "m": m,
            "plays": plays,
            "seed": seed,
            "mean_turns": mean_turns,
            "turns_per_m": per_m,
            "mean_gain": mean_gain,
        })),
        Format::Csv => format!(
            "strategy,m,plays,mean_turns,turns_per_m,mean_gain\n{strategy},{m},{plays},{mean_turns:.6},{per_m:.6},{mean_gain:.6}\n"
        ),
    })
}

fn run(cli: &Cli) -> Result<String> {
    let f = cli.format;
    match &cli.command {
        Command::Compile { part, emit_sequence } => compile(part, *emit_sequence, f),
        Command::Bounds { part } => bounds(part, f),
        Command::Verify { rules, width, expect } => verify(rules, *width, expect.as_deref(), f),
        Command::Sequence { weights, width, matcher, check, allow_negative, rules } => sequence(
            weights.as_deref(),
            *width,
            *matcher,
            check.as_deref(),
            *allow_negative,
            rules.as_deref(),
            cli.seed,
            f,
        ),
        Command::Sample { k, width, trials, matcher } => sample(*k, *width, *trials, *matcher, cli.seed, f),
        Command::Worstcase { kind, width, k } => worstcase(*kind, *width, *k, f),
        Command::Normalize { counts, column, multiple } => normalize(counts, column.as_deref(), *multiple, f),
        Command::Rw { p, n } => random_walk(p, *n, f),
        Command::Game { strategy, m, plays } => game(*strategy, *m, *plays, cli.seed, f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, out).with_context(|| format!("writing {}", path.display())),
                None => io::stdout().write_all(out.as_bytes()).context("writing stdout"),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
