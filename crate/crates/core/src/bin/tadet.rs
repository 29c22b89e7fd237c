use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tadet::equiv::engine::{macro_included_with, Options};
use tadet::equiv::{bounded_discrepancy, parse_macro_spec};
use tadet::pipeline::{decide_membership, trace_word, Answer, ExploreOptions, Mode};
use tadet::regions::{enumerate_regions, region_count};
use tadet::ta::{parse_automaton, parse_word, to_nta, TimedAutomaton, TimedWord};
use tadet::workbench::compose::compose;
use tadet::workbench::diff::differential_test;
use tadet::workbench::lcm::{encode_lcm, inject_fault, lcm_bounded_reach, parse_lcm, parse_run, reversal_encoding, Fault};
use tadet::workbench::sample::{sample_runs, sample_words, TimeProfile};

#[derive(Parser)]
#[command(name = "tadet", version, about = "Deterministic membership for one-clock timed automata")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Kdta,
    Kmdta,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    ShiftControl,
    ShiftCounter,
    DropPartner,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count (and optionally list) the k,m-regions.
    Regions {
        #[arg(long)]
        clocks: usize,
        #[arg(long)]
        max_const: i64,
        #[arg(long)]
        list: bool,
    },
    /// Compare the languages of two macro-configurations of one automaton.
    Equiv {
        automaton: PathBuf,
        /// JSON macro-configuration, inline or a file path.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Also search for discrepancies up to this many letters.
        #[arg(long)]
        bounded: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Decide whether the language is recognised by a deterministic automaton with k clocks.
    Membership {
        automaton: PathBuf,
        #[arg(long)]
        clocks: usize,
        #[arg(long, value_enum, default_value = "kdta")]
        mode: ModeArg,
        /// Write a JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the deterministic witness here.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Replay the determinisation along one word.
    Trace {
        automaton: PathBuf,
        #[arg(long)]
        clocks: usize,
        #[arg(long)]
        word: String,
    },
    /// Build the automaton accepting the non-encodings of a counter machine's runs.
    GenLcm {
        machine: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Report the bounded reachability label with this counter cap.
        #[arg(long)]
        cap: Option<u64>,
        /// Run membership with this many clocks on the result (needs --slow).
        #[arg(long)]
        decide: Option<usize>,
        #[arg(long)]
        slow: bool,
    },
    /// Print the reversal encoding of a run, optionally with an injected fault.
    EncodeRun {
        machine: PathBuf,
        /// Steps `INSTR` or `INSTR=v1,v2,...`, separated by spaces.
        #[arg(long)]
        run: String,
        #[arg(long, value_enum)]
        fault: Option<FaultArg>,
    },
    /// Concatenate two automata through a fresh `$` letter.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print seeded random timed words, one per line.
    Sample {
        /// Sample along runs of this automaton (or over its alphabet with --uniform).
        #[arg(long, conflicts_with = "alphabet")]
        automaton: Option<PathBuf>,
        /// Comma-separated letters.
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(short = 'n', long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        collision: f64,
        #[arg(long)]
        uniform: bool,
    },
    /// Compare two automata on sampled words.
    Difftest {
        first: PathBuf,
        second: PathBuf,
        #[arg(short = 'n', long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        length: usize,
        /// Write one file per mismatching word here.
        #[arg(long)]
        replay_dir: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<TimedAutomaton> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_automaton(&text).with_context(|| format!("parsing {}", path.display()))
}

fn spec_text(s: &str) -> Result<String> {
    if s.trim_start().starts_with('{') {
        Ok(s.to_string())
    } else {
        fs::read_to_string(s).with_context(|| format!("reading {s}"))
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Report {
    verdict: String,
    clocks: usize,
    max_const: i64,
    orbit_count: usize,
    f_bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    refutation_prefix: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    timings: Timings,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Timings {
    normalise_ms: f64,
    explore_ms: f64,
    validate_ms: f64,
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Regions { clocks, max_const, list } => {
            println!("{}", region_count(clocks, max_const));
            if list {
                for r in enumerate_regions(clocks, max_const) {
                    println!("{r}");
                }
            }
        }
        Cmd::Equiv {
            automaton,
            left,
            right,
            bounded,
            budget,
        } => {
            let a = load(&automaton)?;
            let x1 = parse_macro_spec(&a, &spec_text(&left)?)?;
            let x2 = parse_macro_spec(&a, &spec_text(&right)?)?;
            let opts = Options { budget };
            let forward = macro_included_with(&a, &x1, &x2, &opts)?;
            let backward = macro_included_with(&a, &x2, &x1, &opts)?;
            match (&forward.counterexample, &backward.counterexample) {
                (None, None) => println!("EQUIVALENT"),
                (Some(w), _) => println!("DIFFERENT: left accepts, right rejects \"{w}\""),
                (None, Some(w)) => println!("DIFFERENT: right accepts, left rejects \"{w}\""),
            }
            if let Some(n) = bounded {
                match bounded_discrepancy(&a, &x1, &x2, n) {
                    None => println!("bounded({n}): no discrepancy"),
                    Some(w) => println!("bounded({n}): discrepancy \"{w}\""),
                }
            }
        }
        Cmd::Membership {
            automaton,
            clocks,
            mode,
            json,
            emit,
            max_nodes,
            budget,
        } => {
            let a = load(&automaton)?;
            let opts = ExploreOptions {
                equiv: Options { budget },
                max_nodes,
                ..Default::default()
            };
            let mode = match mode {
                ModeArg::Kdta => Mode::KDta,
                ModeArg::Kmdta => Mode::KmDta(None),
            };
            let v = decide_membership(&a, clocks, mode, &opts)?;
            println!("{}", v.answer);
            if let Some(r) = &v.reason {
                println!("reason: {r}");
            }
            if let Some(r) = &v.refutation {
                println!("overflow after \"{}\"", r.word);
            }
            println!("orbits {} (bound {})", v.orbit_count, v.f_bound);
            let mut witness_file = None;
            if let (Some(path), Some(b)) = (&emit, v.witness.as_ref().or(v.candidate.as_ref())) {
                fs::write(path, to_nta(b))?;
                witness_file = Some(path.display().to_string());
                println!("wrote {}", path.display());
            }
            if let Some(path) = json {
                let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
                let report = Report {
                    verdict: v.answer.to_string(),
                    clocks,
                    max_const: v.m,
                    orbit_count: v.orbit_count,
                    f_bound: v.f_bound.to_string(),
                    refutation_prefix: v.refutation.as_ref().map(|r| r.word.to_string()),
                    witness_file,
                    reason: v.reason.clone(),
                    timings: Timings {
                        normalise_ms: ms(v.timings.normalise),
                        explore_ms: ms(v.timings.explore),
                        validate_ms: ms(v.timings.validate),
                    },
                };
                fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")?;
            }
            return Ok(match v.answer {
                Answer::Yes | Answer::No => ExitCode::SUCCESS,
                Answer::Unknown => ExitCode::from(2),
            });
        }
        Cmd::Trace { automaton, clocks, word } => {
            let a = load(&automaton)?;
            let w = parse_word(&word)?;
            let (n, steps) = trace_word(&a, clocks, &w, &ExploreOptions::default())?;
            for s in &steps {
                println!("{}", s.render(&n));
            }
        }
        Cmd::GenLcm {
            machine,
            output,
            cap,
            decide,
            slow,
        } => {
            let m = parse_lcm(&fs::read_to_string(&machine)?)?;
            if m.counters.len() != 4 {
                eprintln!("note: {} counters; the undecidability argument uses exactly 4", m.counters.len());
            }
            let a = encode_lcm(&m);
            fs::write(&output, to_nta(&a))?;
            println!("wrote {} ({} locations, {} rules)", output.display(), a.location_count(), a.rules.len());
            if let Some(cap) = cap {
                let r = lcm_bounded_reach(&m, cap, 1_000_000);
                println!(
                    "reach: {} configurations, {}",
                    r.configs.len(),
                    match (r.complete, r.below_cap) {
                        (false, _) => "inconclusive (configuration limit)",
                        (true, true) => "bounded below the cap",
                        (true, false) => "reaches the cap",
                    }
                );
            }
            if let Some(k) = decide {
                if !slow {
                    bail!("membership on encoded machines explodes quickly; pass --slow to run it anyway");
                }
                let v = decide_membership(&a, k, Mode::KDta, &ExploreOptions::default())?;
                println!("{}{}", v.answer, v.reason.map(|r| format!(" ({r})")).unwrap_or_default());
            }
        }
        Cmd::EncodeRun { machine, run, fault } => {
            let m = parse_lcm(&fs::read_to_string(&machine)?)?;
            let r = parse_run(&m, &run)?;
            let enc = reversal_encoding(&m, &r)?;
            let w = match fault {
                None => enc.word,
                Some(f) => {
                    let f = match f {
                        FaultArg::ShiftControl => Fault::ShiftControl,
                        FaultArg::ShiftCounter => Fault::ShiftCounter,
                        FaultArg::DropPartner => Fault::DropPartner,
                    };
                    inject_fault(&m, &enc, f).context("this run has no persisting unit to disturb")?
                }
            };
            println!("{w}");
        }
        Cmd::Compose { first, second, output } => {
            let c = compose(&load(&first)?, &load(&second)?)?;
            fs::write(&output, to_nta(&c))?;
            println!("wrote {}", output.display());
        }
        Cmd::Sample {
            automaton,
            alphabet,
            count,
            length,
            seed,
            collision,
            uniform,
        } => {
            let profile = TimeProfile {
                collision,
                ..Default::default()
            };
            let words: Vec<TimedWord> = match (automaton, alphabet) {
                (Some(p), _) => {
                    let a = load(&p)?;
                    if uniform {
                        sample_words(&a.alphabet, count, length, &profile, seed)
                    } else {
                        sample_runs(&a, count, length, &profile, seed)
                    }
                }
                (None, Some(s)) => {
                    let letters: Vec<String> = s.split(',').map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect();
                    if letters.is_empty() {
                        bail!("empty alphabet");
                    }
                    sample_words(&letters, count, length, &profile, seed)
                }
                (None, None) => bail!("give --automaton or --alphabet"),
            };
            for w in words {
                println!("{w}");
            }
        }
        Cmd::Difftest {
            first,
            second,
            count,
            seed,
            length,
            replay_dir,
        } => {
            let (a, b) = (load(&first)?, load(&second)?);
            let profile = TimeProfile::default();
            let third = count / 3;
            let mut samples = sample_runs(&a, third, length, &profile, seed);
            samples.extend(sample_runs(&b, third, length, &profile, seed.wrapping_add(1)));
            samples.extend(sample_words(&a.alphabet, count - 2 * third, length, &profile, seed.wrapping_add(2)));
            let report = differential_test(&a, &b, &samples);
            println!(
                "{} samples, {} accepted by the first, {} mismatches",
                report.total,
                report.accepted_left,
                report.mismatches.len()
            );
            for m in report.mismatches.iter().take(10) {
                println!("  #{}: \"{}\" first={} second={}", m.index, m.word, m.left, m.right);
            }
            if let Some(dir) = replay_dir {
                let files = report.write_replays(&dir)?;
                println!("wrote {} replay files to {}", files.len(), dir.display());
            }
            if !report.agree() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
