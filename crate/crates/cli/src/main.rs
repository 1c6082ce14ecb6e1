//! `normcomb`: square classes, norm lattices, theorem replay, tables,
//! Demushkin invariants and the construction probe.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use normcomb::demushkin::{abelianization, square_class_rank, DemushkinPresentation};
use normcomb::dyadic::{
    classify_in_construction, hilbert_oracle_with, square_class_of, sum_rule_soundness, verify_construction,
    DEFAULT_PRECISION,
};
use normcomb::normlattice::{hilbert_from_lattice, sum_rule};
use normcomb::replay::{
    generate_table, render_case, render_markdown, render_summary, render_text, replay, replay_all, ReplayOptions,
};
use normcomb::{lattice, verify_lattice, Dyadic, LatticeScenario, NormLattice, Scenario};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "normcomb", version, about = "Norm-group combinatorics with a checked engine and a 2-adic oracle")]
struct Cli {
    /// Case A, or Case B with 3 ~ 1 or 3 ~ 2.
    #[arg(long, global = true, default_value = "case-a", value_parser = parse_scenario)]
    scenario: Scenario,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Bits of 2-adic precision.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Sampled instances for oracle checks.
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Case-split depth of the proof search.
    #[arg(long, global = true, default_value_t = 3)]
    depth: u32,
    /// Removes class B from N(A) in the scenario's lattice, given as `A:B`.
    #[arg(long = "drop-norm", global = true, value_name = "A:B", allow_hyphen_values = true)]
    drop_norm: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Markdown,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Square class of a rational in Q_2 and its place in the construction.
    Classify {
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Hilbert symbol: rationals in Case A, class labels in Case B.
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Norm groups and their consistency report.
    Lattice {
        /// case-a, case-b-k or case-b-K; defaults to the scenario's lattice.
        which: Option<String>,
    },
    /// Possible classes of p + q for p ~ a, q ~ b.
    SumRule {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Replays one theorem, or `all`.
    Replay { theorem: String },
    /// Regenerates table 1, 2 or 3 and compares it with the stored cells.
    Table { number: u8 },
    /// Samples Q_2 and checks the valuation-ring construction.
    Probe,
    /// Invariants of a Demushkin presentation.
    Demushkin {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Exponent s, or `inf`.
        #[arg(long, default_value = "1")]
        s: String,
    },
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|_| format!("expected one of case-a, case-b-3is1, case-b-3is2; got {s}"))
}

enum Failure {
    Usage(String),
}

struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn new(text: String, ok: bool) -> Self {
        Output { text, ok }
    }
}

fn json_text<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable report") + "\n"
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

impl Cli {
    fn lattice(&self, s: LatticeScenario) -> Result<NormLattice, Failure> {
        let mut l = lattice(s);
        let g = l.group();
        for entry in &self.drop_norm {
            let (a, b) = entry.split_once(':').ok_or_else(|| usage(format!("--drop-norm expects A:B, got {entry}")))?;
            let a = g.parse(a).map_err(usage)?;
            let b = g.parse(b).map_err(usage)?;
            l.drop_entry(a, b);
        }
        Ok(l)
    }

    fn replay_options(&self) -> Result<ReplayOptions, Failure> {
        let mutated = !self.drop_norm.is_empty();
        Ok(ReplayOptions {
            depth: self.depth,
            samples: self.samples,
            seed: self.seed,
            precision: self.precision,
            lattice: if mutated { Some(self.lattice(self.scenario.lattice_scenario())?) } else { None },
        })
    }

    fn run(&self) -> Result<Output, Failure> {
        let json = self.format == Format::Json;
        match &self.command {
            Command::Classify { value } => {
                let x = Dyadic::parse(value, self.precision).map_err(usage)?;
                let class = square_class_of(&x).map_err(usage)?;
                let kind = classify_in_construction(&x).map_err(usage)?;
                let text = if json {
                    json_text(&json!({
                        "value": value,
                        "class": class.label(),
                        "valuation": x.valuation(),
                        "construction": kind,
                    }))
                } else {
                    format!("{}\n", class.label())
                };
                Ok(Output::new(text, true))
            }
            Command::Hilbert { a, b } => {
                let l = self.lattice(self.scenario.lattice_scenario())?;
                let (symbol, ok, detail) = if self.scenario.is_case_b() {
                    let g = l.group();
                    let (ca, cb) = (g.parse(a).map_err(usage)?, g.parse(b).map_err(usage)?);
                    (hilbert_from_lattice(&l, ca, cb), true, None)
                } else {
                    let x = Dyadic::parse(a, self.precision).map_err(usage)?;
                    let y = Dyadic::parse(b, self.precision).map_err(usage)?;
                    match hilbert_oracle_with(&l, &x, &y, self.precision) {
                        Ok(h) => (h, true, None),
                        Err(normcomb::DyadicError::OracleMismatch { a, b }) => {
                            let (ca, cb) = (l.group().parse(&a).map_err(usage)?, l.group().parse(&b).map_err(usage)?);
                            let mine = hilbert_from_lattice(&l, ca, cb);
                            (mine, false, Some(format!("search and lattice disagree on ({a}, {b})")))
                        }
                        Err(e) => return Err(usage(e)),
                    }
                };
                let text = if json {
                    json_text(&json!({ "a": a, "b": b, "symbol": symbol, "consistent": ok, "detail": detail }))
                } else {
                    let mut t = format!("{symbol}\n");
                    if let Some(d) = detail {
                        t.push_str(&format!("mismatch: {d}\n"));
                    }
                    t
                };
                Ok(Output::new(text, ok))
            }
            Command::Lattice { which } => {
                let s = match which {
                    Some(w) => w.parse().map_err(|_| usage(format!("unknown lattice {w}")))?,
                    None => self.scenario.lattice_scenario(),
                };
                let l = self.lattice(s)?;
                let report = verify_lattice(&l);
                let text = if json {
                    json_text(&json!({ "lattice": l, "report": report }))
                } else {
                    let mut t = format!("lattice {}\n", s.name());
                    for a in l.group().elements().filter(|a| !a.is_identity()) {
                        t.push_str(&format!("  N({}) = {}\n", a.label(), l.norm_group(a)));
                    }
                    t.push_str(&format!(
                        "subgroups {}  reciprocity {}  index 2 {}  injective {}  demushkin {}\n",
                        report.all_subgroups,
                        report.reciprocity_holds,
                        report.all_index_2,
                        report.injective,
                        report.demushkin_consistent
                    ));
                    for f in &report.failures {
                        t.push_str(&format!("  {f}\n"));
                    }
                    t
                };
                Ok(Output::new(text, true))
            }
            Command::SumRule { a, b } => {
                let l = self.lattice(self.scenario.lattice_scenario())?;
                let g = l.group();
                let r = sum_rule(&l, g.parse(a).map_err(usage)?, g.parse(b).map_err(usage)?);
                let text = if json {
                    json_text(&r)
                } else if r.may_vanish {
                    format!("{} (the sum may vanish)\n", r.set)
                } else {
                    format!("{}\n", r.set)
                };
                Ok(Output::new(text, true))
            }
            Command::Replay { theorem } => {
                let opts = self.replay_options()?;
                if theorem == "all" {
                    let s = replay_all(&opts).map_err(usage)?;
                    let text = if json {
                        json_text(&s)
                    } else {
                        let mut t: String =
                            s.reports.iter().filter(|r| !r.ok()).map(render_case).collect::<Vec<_>>().join("");
                        t.push_str(&render_summary(&s));
                        t
                    };
                    Ok(Output::new(text, s.ok))
                } else {
                    let reports = replay(theorem, &opts).map_err(usage)?;
                    let ok = reports.iter().all(|r| r.ok());
                    let text = if json {
                        json_text(&reports)
                    } else {
                        reports.iter().map(render_case).collect::<Vec<_>>().join("")
                    };
                    Ok(Output::new(text, ok))
                }
            }
            Command::Table { number } => {
                let t = generate_table(*number, &ReplayOptions { samples: 0, ..self.replay_options()? }).map_err(usage)?;
                let text = match self.format {
                    Format::Json => json_text(&t),
                    Format::Markdown => render_markdown(&t),
                    Format::Text => render_text(&t),
                };
                Ok(Output::new(text, t.ok))
            }
            Command::Probe => {
                let r = verify_construction(self.samples, self.seed, self.precision);
                let sums = sum_rule_soundness(&self.lattice(LatticeScenario::CaseA)?, self.samples, self.seed, self.precision);
                let ok = r.ok() && sums.violations.is_empty();
                let text = if json {
                    json_text(&json!({ "construction": r, "sum_rule": sums }))
                } else {
                    let mut t = format!(
                        "construction: {} samples (seed {}, precision {}), {} skipped, value group index {}\n",
                        r.samples, r.seed, r.precision, r.skipped, r.value_group_index
                    );
                    for (k, n) in &r.counts {
                        t.push_str(&format!("  {k}: {n}\n"));
                    }
                    for v in r.violations.iter().chain(&sums.violations) {
                        t.push_str(&format!("  violation: {v}\n"));
                    }
                    t.push_str(&format!("sum rule: {} pairs, {} violations\n", sums.pairs, sums.violations.len()));
                    t.push_str(&format!("verdict: {}\n", if ok { "pass" } else { "fail" }));
                    t
                };
                Ok(Output::new(text, ok))
            }
            Command::Demushkin { p, n, s } => {
                let s = match s.as_str() {
                    "inf" | "infinity" | "∞" => None,
                    v => Some(v.parse::<u32>().map_err(|_| usage(format!("--s expects a positive integer or inf, got {v}")))?),
                };
                if *n == 0 || s == Some(0) || *p < 2 {
                    return Err(usage("need p >= 2, n >= 1 and s >= 1"));
                }
                let pres = DemushkinPresentation::new(*p, *n, s);
                let ab = abelianization(&pres);
                let value = json!({
                    "presentation": pres,
                    "generators": pres.generators(),
                    "relation_exponents": pres.relation_exponents(),
                    "abelianization": ab,
                    "square_class_rank": square_class_rank(*n, *p),
                });
                let text = if self.format == Format::Text {
                    format!(
                        "generators {}\nabelianization {}\nsquare-class rank {}\n",
                        pres.generators(),
                        ab,
                        square_class_rank(*n, *p)
                    )
                } else {
                    json_text(&value)
                };
                Ok(Output::new(text, true))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.run() {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
