use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ltlf_core::automaton::build_aa;
use ltlf_core::crosscheck::crosscheck;
use ltlf_core::derivatives::{descendant_bound, descendants, iterated, rho};
use ltlf_core::factors::{factor_records, lf};
use ltlf_core::gen::CorpusSpec;
use ltlf_core::semantics::{eval_lasso, parse_symbol, LassoWord};
use ltlf_core::syntax::{parse, to_pnf, Formula};
use ltlf_core::tableau::{build_optimized, build_original, eliminate, is_satisfiable};

/// Linear factors, partial derivatives, alternating automata and tableaux
/// for LTL.
#[derive(Debug, Parser)]
#[command(name = "ltlf", version)]
struct Cli {
    /// Print structured JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and pretty-print a formula.
    Parse { formula: String },
    /// Positive normal form.
    Pnf { formula: String },
    /// Linear factors.
    Lf { formula: String },
    /// Partial derivatives by one symbol.
    Deriv {
        formula: String,
        /// Symbol such as "{p,q}" or "{}".
        #[arg(long)]
        symbol: String,
    },
    /// All partial derivative descendants.
    Descendants { formula: String },
    /// The alternating automaton.
    Aa {
        formula: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The tableau, optimized by default.
    #[command(group(ArgGroup::new("variant").args(["original", "optimized"])))]
    Tableau {
        formula: String,
        #[arg(long)]
        original: bool,
        #[arg(long)]
        optimized: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Satisfiability; exit 0 when satisfiable, 1 when not.
    Sat { formula: String },
    /// Evaluate a formula on a lasso word "u ; v".
    Eval {
        formula: String,
        #[arg(long)]
        lasso: String,
    },
    /// Run every cross-module property on a random corpus.
    Crosscheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        max_size: u64,
    },
}

fn read_formula(arg: &str) -> Result<Formula> {
    let text = if arg == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading formula from stdin")?;
        buf
    } else {
        arg.to_string()
    };
    parse(text.trim()).map_err(|e| anyhow!("{e}"))
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize")
}

fn lines<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string() + "\n").collect()
}

/// Runs one command; returns the text to print and the exit code.
fn run(cli: Cli) -> Result<(String, u8)> {
    let json = cli.json;
    let out = match cli.command {
        Command::Parse { formula } => {
            let f = read_formula(&formula)?;
            if json {
                pretty(&json!({ "formula": f.to_string(), "size": f.size(), "atoms": f.atoms() }))
            } else {
                format!("{f}\n")
            }
        }
        Command::Pnf { formula } => {
            let f = to_pnf(&read_formula(&formula)?);
            if json {
                pretty(&json!({ "formula": f.to_string() }))
            } else {
                format!("{f}\n")
            }
        }
        Command::Lf { formula } => {
            let factors = lf(&to_pnf(&read_formula(&formula)?));
            if json {
                pretty(&json!(factor_records(&factors)))
            } else {
                lines(&factors)
            }
        }
        Command::Deriv { formula, symbol } => {
            let f = to_pnf(&read_formula(&formula)?);
            let x = parse_symbol(&symbol).map_err(|e| anyhow!("{e}"))?;
            let derivs = rho(&f, &x);
            if json {
                pretty(&json!(derivs.iter().map(|c| c.printed()).collect::<Vec<_>>()))
            } else {
                lines(&derivs)
            }
        }
        Command::Descendants { formula } => {
            let f = to_pnf(&read_formula(&formula)?).into_inner();
            let desc = descendants(&f);
            let bound = descendant_bound(&f);
            if json {
                pretty(&json!({
                    "descendants": desc.iter().map(|c| c.printed()).collect::<Vec<_>>(),
                    "count": desc.len(),
                    "iterated": iterated(&f).iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "bound": bound,
                }))
            } else {
                format!("{}count {} bound {bound}\n", lines(&desc), desc.len())
            }
        }
        Command::Aa { formula, format } => {
            let aa = build_aa(&to_pnf(&read_formula(&formula)?))?;
            match (json, format) {
                (true, _) | (_, Format::Json) => aa.export_json() + "\n",
                (_, Format::Dot) => aa.export_dot(),
                (_, Format::Text) => {
                    let mut out = String::new();
                    for q in aa.states() {
                        let mark = if aa.is_accepting_state(q) { " (accepting)" } else { "" };
                        out.push_str(&format!("state {q}{mark}\n"));
                        for factor in aa.guarded(q).into_iter().flatten() {
                            out.push_str(&format!("  {} -> {}\n", factor.monomial, factor.next));
                        }
                    }
                    let initial: Vec<String> = aa.initial().iter().map(ToString::to_string).collect();
                    out.push_str(&format!("initial {}\n", initial.join(" ; ")));
                    out
                }
            }
        }
        Command::Tableau { formula, original, optimized: _, format } => {
            let f = read_formula(&formula)?;
            let format = if json { Format::Json } else { format };
            if original {
                let t = build_original(&f);
                match format {
                    Format::Text => t.export_text(),
                    Format::Dot => t.export_dot(),
                    Format::Json => pretty(&json!(t.to_dump())) + "\n",
                }
            } else {
                let g = eliminate(build_optimized(&f));
                match format {
                    Format::Text => g.export_text(),
                    Format::Dot => g.export_dot(),
                    Format::Json => pretty(&json!(g.to_dump())) + "\n",
                }
            }
        }
        Command::Sat { formula } => {
            let f = read_formula(&formula)?;
            let verdict = is_satisfiable(&f)?;
            let code = if verdict.satisfiable { 0 } else { 1 };
            let text = if json {
                pretty(&json!({
                    "satisfiable": verdict.satisfiable,
                    "witness": verdict.witness.as_ref().map(ToString::to_string),
                }))
            } else {
                match &verdict.witness {
                    Some(w) => format!("SAT\nwitness {w}\n"),
                    None => "UNSAT\n".to_string(),
                }
            };
            return Ok((text, code));
        }
        Command::Eval { formula, lasso } => {
            let f = read_formula(&formula)?;
            let w = LassoWord::parse(&lasso).map_err(|e| anyhow!("{e}"))?;
            let value = eval_lasso(&f, &w);
            if json {
                pretty(&json!({ "formula": f.to_string(), "lasso": w.to_string(), "value": value }))
            } else {
                format!("{value}\n")
            }
        }
        Command::Crosscheck { seed, count, max_size } => {
            let spec = CorpusSpec {
                seed,
                count: usize::try_from(count)?,
                max_size: usize::try_from(max_size)?,
                aps: vec!["p".into(), "q".into(), "r".into()],
                lassos_per_formula: 20,
                max_prefix: 3,
                max_loop: 4,
            };
            let report = crosscheck(&spec);
            let text = if json { pretty(&json!(report)) } else { report.summary() };
            if !json {
                eprintln!("crosscheck finished in {:.2?}", report.elapsed);
            }
            return Ok((text, if report.ok() { 0 } else { 1 }));
        }
    };
    if out.is_empty() {
        bail!("nothing to print");
    }
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
