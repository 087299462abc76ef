//! The `wqo` command line.
//!
//! Exit codes: 0 for wqo / true, 1 for not-wqo / false, 2 for usage,
//! input and budget errors (with a diagnostic on the error stream).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use wqo_core::automata::{closure, determinize_trim, ClosureKind};
use wqo_core::decision::{decide, decide_bounded, reduction_emptiness_to_prefix, reduction_prefix_to_infix};
use wqo_core::grammar::{cfg_bounded, cfg_is_empty, cfg_subword_closure, decide_cfg, parse_cfg};
use wqo_core::infinite::{
    empirical_ultimately_ur, has_cube, recurrence_profile, BlockWord, Sequence, ThueMorse, UrVerdict,
    DEFAULT_HORIZON, DEFAULT_K_MAX, DEFAULT_N0_CAP,
};
use wqo_core::words::{canonical_period, inf_period_chain, minimal_period, primitive_root};
use wqo_core::{Alphabet, Cfg, DecisionConfig, DecisionReport, Limits, Nfa, OrderRelation, Regex, Verdict, Word};

use crate::format::{parse_automatic, parse_automaton, write_dfa};
use crate::report::{report_json, report_text};

#[derive(Parser, Debug)]
#[command(name = "wqo", version, about = "Decide well-quasi-ordering of regular and context-free languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Regular expression; the alphabet is the set of symbols it uses.
    #[arg(long)]
    regex: Option<String>,
    /// Automaton file.
    #[arg(long)]
    automaton: Option<PathBuf>,
    /// Context-free grammar file.
    #[arg(long)]
    grammar: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Symbols {
    /// Alphabet of --regex (instead of the symbols it uses), or extra
    /// terminals for --grammar; e.g. `ab`.
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Args, Debug)]
struct Budget {
    /// States allowed in any constructed automaton.
    #[arg(long, default_value_t = Limits::default().max_states)]
    max_states: usize,
    /// Words allowed in any enumeration.
    #[arg(long, default_value_t = Limits::default().max_output)]
    max_output: usize,
    /// Words examined when mining antichains.
    #[arg(long, default_value_t = DecisionConfig::default().mining_budget)]
    mining_budget: usize,
    /// Periods allowed in the union bounding an infix-wqo language.
    #[arg(long, default_value_t = DecisionConfig::default().max_periods)]
    max_periods: usize,
}

impl Budget {
    fn limits(&self) -> Limits {
        Limits { max_states: self.max_states, max_output: self.max_output }
    }

    fn config(&self, antichain_size: usize) -> DecisionConfig {
        DecisionConfig {
            limits: self.limits(),
            antichain_size,
            mining_budget: self.mining_budget,
            max_periods: self.max_periods,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Order {
    Prefix,
    Suffix,
    Infix,
    Subword,
}

impl From<Order> for OrderRelation {
    fn from(o: Order) -> Self {
        match o {
            Order::Prefix => OrderRelation::Prefix,
            Order::Suffix => OrderRelation::Suffix,
            Order::Infix => OrderRelation::Infix,
            Order::Subword => OrderRelation::Subword,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Prefix,
    Suffix,
    Infix,
    Subword,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Reduction {
    Marker,
    FullImage,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Named {
    ThueMorse,
    Block,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Check {
    CubeFree,
    Recurrence,
    UltimatelyUr,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SequenceSource {
    /// A built-in sequence.
    #[arg(long, value_enum)]
    sequence: Option<Named>,
    /// An automatic sequence file.
    #[arg(long)]
    sequence_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the language is well-quasi-ordered.
    Decide {
        #[arg(long, value_enum)]
        order: Order,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        symbols: Symbols,
        /// Size of the antichain reported on negative verdicts.
        #[arg(long, default_value_t = DecisionConfig::default().antichain_size)]
        antichain_size: usize,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        json: bool,
    },
    /// Print an antichain of the given size, if the language has an infinite one.
    Witness {
        #[arg(long, value_enum, default_value = "infix")]
        order: Order,
        #[arg(long, default_value_t = DecisionConfig::default().antichain_size)]
        size: usize,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        symbols: Symbols,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the language is bounded, i.e. inside some w1*...wn*.
    Bounded {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        symbols: Symbols,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        json: bool,
    },
    /// Print the downward closure as an automaton.
    Closure {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        symbols: Symbols,
        #[command(flatten)]
        budget: Budget,
    },
    /// Periods of a finite word.
    Period {
        #[arg(long)]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// The chain decomposition of the factors of x^ω.
    Infchain {
        #[arg(long)]
        period: String,
        /// Words to locate in the decomposition.
        #[arg(long)]
        test: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Checks on infinite words.
    Infinite {
        #[command(flatten)]
        source: SequenceSource,
        #[arg(long, value_enum)]
        check: Check,
        /// Prefix length scanned by cube-free.
        #[arg(long, default_value_t = 4096)]
        length: usize,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        #[arg(long, default_value_t = DEFAULT_N0_CAP)]
        n0_cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Apply one of the hardness reductions and print the image.
    Reduce {
        #[arg(long, value_enum)]
        kind: Reduction,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        symbols: Symbols,
        #[command(flatten)]
        budget: Budget,
    },
}

type Outcome = Result<i32, String>;

enum Language {
    Regular(Nfa),
    Grammar(Cfg),
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn alphabet_of(symbols: &str) -> Result<Alphabet, String> {
    let mut cs: Vec<char> = symbols.chars().collect();
    cs.sort_unstable();
    cs.dedup();
    Alphabet::new(cs).map_err(|e| format!("--alphabet: {e}"))
}

fn load(src: &Source, symbols: &Symbols) -> Result<Language, String> {
    if let Some(text) = &src.regex {
        let r = match &symbols.alphabet {
            None => Regex::parse_inferring(text),
            Some(extra) => Regex::parse(text, &alphabet_of(extra)?),
        }
        .map_err(|e| format!("regex: {e}"))?;
        return Ok(Language::Regular(r.compile()));
    }
    if let Some(path) = &src.automaton {
        let nfa = parse_automaton(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(Language::Regular(nfa));
    }
    let path = src.grammar.as_ref().expect("clap enforces one source");
    let at = |e: wqo_core::Error| format!("{}: {e}", path.display());
    let mut g = parse_cfg(&read(path)?).map_err(at)?;
    if let Some(extra) = &symbols.alphabet {
        g = g.with_terminals(g.terminals().union(&alphabet_of(extra)?)).map_err(at)?;
    }
    Ok(Language::Grammar(g))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), String> {
    out.write_all(text.as_bytes()).map_err(err)
}

fn emit_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), String> {
    emit(out, &(serde_json::to_string_pretty(value).map_err(err)? + "\n"))
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Wqo => 0,
        Verdict::NotWqo => 1,
    }
}

fn plain(w: &Word) -> String {
    w.iter().collect()
}

fn decide_language(lang: &Language, rel: OrderRelation, config: &DecisionConfig) -> Result<DecisionReport, String> {
    match lang {
        Language::Regular(nfa) => decide(rel, nfa, config).map_err(err),
        Language::Grammar(g) => decide_cfg(g, rel, config).map_err(err),
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Decide { order, source, symbols, antichain_size, budget, json } => {
            let lang = load(&source, &symbols)?;
            let report = decide_language(&lang, order.into(), &budget.config(antichain_size))?;
            if json {
                emit(out, &(report_json(&report) + "\n"))?;
            } else {
                emit(out, &report_text(&report))?;
            }
            Ok(verdict_code(report.verdict))
        }
        Command::Witness { order, size, source, symbols, budget, json } => {
            let lang = load(&source, &symbols)?;
            let report = decide_language(&lang, order.into(), &budget.config(size))?;
            let words: Vec<String> = report.certificate.antichain().unwrap_or_default().iter().map(plain).collect();
            if json {
                emit_json(
                    out,
                    &json!({"relation": report.relation.name(), "verdict": report.verdict.name(), "antichain": words}),
                )?;
            } else if report.verdict == Verdict::Wqo {
                emit(out, &format!("no infinite antichain: the language is {}-wqo\n", report.relation.name()))?;
            } else {
                for w in &words {
                    emit(out, &format!("{w}\n"))?;
                }
            }
            Ok(verdict_code(report.verdict))
        }
        Command::Bounded { source, symbols, budget, json } => {
            let cert = match load(&source, &symbols)? {
                Language::Regular(nfa) => {
                    let dfa = determinize_trim(&nfa, budget.limits()).map_err(err)?;
                    decide_bounded(&dfa, budget.limits()).map_err(err)?
                }
                Language::Grammar(g) => cfg_bounded(&g, budget.limits()).map_err(err)?,
            };
            let words: Vec<String> = cert.words.iter().map(plain).collect();
            if json {
                let witness = cert
                    .witness
                    .as_ref()
                    .map(|(at, u, v)| json!({"location": at, "u": plain(u), "v": plain(v)}));
                emit_json(out, &json!({"bounded": cert.bounded, "words": words, "witness": witness}))?;
            } else if cert.bounded {
                emit(out, &format!("bounded: yes\nwords: {}\n", words.join(" ")))?;
            } else {
                let (at, u, v) = cert.witness.as_ref().expect("unbounded certificates carry a witness");
                emit(
                    out,
                    &format!("bounded: no\ncycles at {at}: {} and {} do not commute\n", u.display_eps(), v.display_eps()),
                )?;
            }
            Ok(if cert.bounded { 0 } else { 1 })
        }
        Command::Closure { kind, source, symbols, budget } => {
            let nfa = match (load(&source, &symbols)?, kind) {
                (Language::Regular(nfa), kind) => {
                    let kind = match kind {
                        Kind::Prefix => ClosureKind::Prefix,
                        Kind::Suffix => ClosureKind::Suffix,
                        Kind::Infix => ClosureKind::Infix,
                        Kind::Subword => ClosureKind::Subword,
                    };
                    closure(kind, &nfa)
                }
                (Language::Grammar(g), Kind::Subword) => cfg_subword_closure(&g, budget.limits()).map_err(err)?,
                (Language::Grammar(_), _) => {
                    return Err("grammars support only --kind subword (other closures need not be regular)".into())
                }
            };
            let dfa = determinize_trim(&nfa, budget.limits()).map_err(err)?;
            emit(out, &write_dfa(&dfa))?;
            Ok(0)
        }
        Command::Period { word, json } => {
            let w = Word::from(word.as_str());
            let p = minimal_period(&w).map_err(err)?;
            let root = primitive_root(&w);
            let canonical = canonical_period(&w).map_err(err)?;
            if json {
                emit_json(
                    out,
                    &json!({"word": word, "period": p, "primitive_root": plain(&root), "canonical_period": plain(&canonical)}),
                )?;
            } else {
                emit(
                    out,
                    &format!("period: {p}\nprimitive root: {}\ncanonical period: {}\n", plain(&root), plain(&canonical)),
                )?;
            }
            Ok(0)
        }
        Command::Infchain { period, test, json } => {
            let chain = inf_period_chain(&Word::from(period.as_str())).map_err(err)?;
            let located: Vec<(String, Option<String>)> = test
                .iter()
                .map(|t| {
                    let w = Word::from(t.as_str());
                    let place = match chain.component_of(&w) {
                        Some(i) => {
                            let (u, v) = &chain.components[i];
                            Some(format!("{} ({})* {}", u.display_eps(), plain(&chain.period), v.display_eps()))
                        }
                        None if chain.covers(&w) => Some("short factor".to_string()),
                        None => None,
                    };
                    (t.clone(), place)
                })
                .collect();
            if json {
                let tests: Vec<_> = located.iter().map(|(w, p)| json!({"word": w, "component": p})).collect();
                let components: Vec<_> = chain.components.iter().map(|(u, v)| json!([plain(u), plain(v)])).collect();
                emit_json(
                    out,
                    &json!({
                        "period": plain(&chain.period),
                        "components": components,
                        "short_factors": chain.short_factors.iter().map(plain).collect::<Vec<_>>(),
                        "tests": tests,
                    }),
                )?;
            } else {
                emit(out, &format!("period: {}\n", plain(&chain.period)))?;
                emit(out, &format!("components: {}\n", chain.components.len()))?;
                for (u, v) in &chain.components {
                    emit(out, &format!("  {} ({})* {}\n", u.display_eps(), plain(&chain.period), v.display_eps()))?;
                }
                let short: Vec<String> = chain.short_factors.iter().map(Word::display_eps).collect();
                emit(out, &format!("short factors: {}\n", short.join(" ")))?;
                for (w, place) in &located {
                    match place {
                        Some(p) => emit(out, &format!("{w}: {p}\n"))?,
                        None => emit(out, &format!("{w}: not a factor\n"))?,
                    }
                }
            }
            Ok(if located.iter().all(|(_, p)| p.is_some()) { 0 } else { 1 })
        }
        Command::Infinite { source, check, length, k_max, horizon, n0_cap, json } => {
            let automatic;
            let seq: &dyn Sequence = match (&source.sequence, &source.sequence_file) {
                (Some(Named::ThueMorse), _) => &ThueMorse,
                (Some(Named::Block), _) => &BlockWord,
                (None, Some(path)) => {
                    automatic = parse_automatic(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
                    &automatic
                }
                (None, None) => unreachable!("clap enforces one sequence source"),
            };
            infinite(out, seq, check, length, k_max, horizon, n0_cap, json)
        }
        Command::Reduce { kind, source, symbols, budget } => {
            match load(&source, &symbols)? {
                Language::Regular(nfa) => {
                    let image = match kind {
                        Reduction::Marker => reduction_prefix_to_infix(&nfa),
                        Reduction::FullImage => reduction_emptiness_to_prefix(&nfa),
                    }
                    .map_err(err)?;
                    emit(out, &write_dfa(&determinize_trim(&image, budget.limits()).map_err(err)?))?;
                }
                Language::Grammar(g) => match kind {
                    Reduction::Marker => emit(out, &format!("{}\n", g.with_marker('#').map_err(err)?))?,
                    Reduction::FullImage => {
                        let ab = Alphabet::new(['a', 'b']).map_err(err)?;
                        let image = if cfg_is_empty(&g).0 { Nfa::empty(ab) } else { Nfa::universal(ab) };
                        emit(out, &write_dfa(&determinize_trim(&image, budget.limits()).map_err(err)?))?;
                    }
                },
            }
            Ok(0)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn infinite(
    out: &mut dyn Write,
    seq: &dyn Sequence,
    check: Check,
    length: usize,
    k_max: usize,
    horizon: usize,
    n0_cap: usize,
    json: bool,
) -> Outcome {
    match check {
        Check::CubeFree => {
            let cube = has_cube(&seq.prefix(length));
            if json {
                let at = cube.as_ref().map(|(i, u)| json!({"position": i, "root": plain(u)}));
                emit_json(out, &json!({"sequence": seq.describe(), "length": length, "cube_free": cube.is_none(), "cube": at}))?;
            } else {
                match &cube {
                    None => emit(out, &format!("{}: prefix of length {length} is cube-free\n", seq.describe()))?,
                    Some((i, u)) => emit(out, &format!("{}: cube ({})^3 at position {i}\n", seq.describe(), plain(u)))?,
                }
            }
            Ok(if cube.is_none() { 0 } else { 1 })
        }
        Check::Recurrence => {
            let profile = recurrence_profile(seq, k_max, horizon).map_err(err)?;
            if json {
                let levels: Vec<_> = profile
                    .levels
                    .iter()
                    .map(|l| json!({"k": l.k, "factors": l.factors, "max_gap": l.max_gap, "window": l.window}))
                    .collect();
                emit_json(out, &json!({"sequence": seq.describe(), "horizon": horizon, "levels": levels}))?;
            } else {
                emit(out, &format!("{} (horizon {horizon})\n  k  factors  max_gap  window\n", seq.describe()))?;
                for l in &profile.levels {
                    let window = l.window.map_or("unbounded".to_string(), |w| w.to_string());
                    emit(out, &format!("{:>3}  {:>7}  {:>7}  {window}\n", l.k, l.factors, l.max_gap))?;
                }
            }
            Ok(if profile.all_bounded() { 0 } else { 1 })
        }
        Check::UltimatelyUr => {
            let verdict = empirical_ultimately_ur(seq, n0_cap, k_max, horizon);
            if json {
                let detail = match &verdict {
                    UrVerdict::Consistent { n0, profile } => json!({
                        "n0": n0,
                        "windows": profile.levels.iter().map(|l| l.window).collect::<Vec<_>>(),
                    }),
                    UrVerdict::Refuted { factor, antichain } => json!({
                        "factor": plain(factor),
                        "antichain": antichain.iter().map(plain).collect::<Vec<_>>(),
                    }),
                    UrVerdict::Inconclusive => serde_json::Value::Null,
                };
                emit_json(out, &json!({"sequence": seq.describe(), "verdict": verdict.name(), "detail": detail}))?;
            } else {
                emit(out, &format!("{}: {}\n", seq.describe(), verdict.name()))?;
                match &verdict {
                    UrVerdict::Consistent { n0, profile } => {
                        let windows: Vec<String> =
                            profile.levels.iter().map(|l| l.window.map_or("-".into(), |w| w.to_string())).collect();
                        emit(out, &format!("  from position {n0}, windows for k = 1..: {}\n", windows.join(" ")))?;
                    }
                    UrVerdict::Refuted { factor, antichain } => {
                        let words: Vec<String> = antichain.iter().map(plain).collect();
                        emit(out, &format!("  return words of {}: {}\n", plain(factor), words.join(" ")))?;
                    }
                    UrVerdict::Inconclusive => {}
                }
            }
            // Only positive evidence counts as success.
            Ok(if matches!(verdict, UrVerdict::Consistent { .. }) { 0 } else { 1 })
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, errs: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = errs.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(errs, "error: {message}");
            2
        }
    }
}
