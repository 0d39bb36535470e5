//! Command-line front end: simulation, canonicalization, equivalence with
//! certificates, optimization, rendering, the rule catalog and trace replay.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use revrules::canon::{gray_path, DeltaGateSet};
use revrules::io::{parse_real, parse_trace, print_trace, render_with, RenderStyle};
use revrules::normalize::{Equivalence, NormalizeError, Normalizer};
use revrules::rules::optimize;
use revrules::sim::{SimError, Simulator};
use revrules::{parse_circuit, print_circuit, BitString, Circuit, RewriteTrace, RuleId};

#[derive(Parser)]
#[command(name = "revrules", version, about = "Rewrite, canonicalize and compare reversible circuits")]
struct Cli {
    /// Largest width simulated by truth table.
    #[arg(long, global = true, default_value_t = 16)]
    max_sim_width: usize,
    /// Largest width accepted for canonicalization.
    #[arg(long, global = true, default_value_t = 8)]
    max_canon_width: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathKind {
    Gray,
}

#[derive(Subcommand)]
enum Command {
    /// Print the permutation as an input/output table.
    Sim { file: PathBuf },
    /// Print the canonical form.
    Canon {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "gray")]
        path: PathKind,
        /// Write the rewrite trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Print the block serialization instead of the circuit.
        #[arg(long)]
        form: bool,
        /// Record gate decompositions as rule steps instead of one checked step each.
        #[arg(long)]
        rules_only: bool,
    },
    /// Exit 0 if the circuits are equivalent, 1 if not.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Write the certificate trace here instead of printing it.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "gray")]
        path: PathKind,
    },
    /// Reduce gate count with cancellation and merging rules.
    Opt {
        file: PathBuf,
        /// Maximum number of commutation moves.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Write the trace here instead of printing it after the circuit.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Draw the circuit.
    Render {
        file: PathBuf,
        /// Use plain ASCII glyphs.
        #[arg(long)]
        ascii: bool,
    },
    /// Rule catalog.
    Rules {
        #[command(subcommand)]
        action: RulesAction,
    },
    /// Verify a trace against a circuit and print the final circuit.
    Replay {
        file: PathBuf,
        trace: PathBuf,
        /// Also require the final circuit to equal this one.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RulesAction {
    List,
    Show { id: String },
}

/// A failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

const INEQUIVALENT: u8 = 1;
const USAGE: u8 = 2;
const PARSE: u8 = 3;
const WIDTH_CAP: u8 = 4;
const TRACE: u8 = 5;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| fail(USAGE, format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| fail(USAGE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(USAGE, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Circuit, Failure> {
    let text = read(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "real") { parse_real(&text) } else { parse_circuit(&text) };
    parsed.map_err(|e| fail(PARSE, format!("{}: {e}", path.display())))
}

fn sim_error(e: SimError) -> Failure {
    match e {
        SimError::WidthCap { .. } => fail(WIDTH_CAP, e.to_string()),
        other => fail(PARSE, other.to_string()),
    }
}

fn normalize_error(e: NormalizeError) -> Failure {
    match e {
        NormalizeError::WidthCap { .. } => fail(WIDTH_CAP, e.to_string()),
        NormalizeError::Sim(s) => sim_error(s),
        other => fail(TRACE, format!("rewriting failed: {other}")),
    }
}

struct App {
    sim: Simulator,
    normalizer: Normalizer,
}

impl App {
    fn check_canon_width(&self, c: &Circuit) -> Result<(), Failure> {
        if c.width() > self.normalizer.max_width {
            return Err(fail(
                WIDTH_CAP,
                format!("width {} exceeds --max-canon-width {}", c.width(), self.normalizer.max_width),
            ));
        }
        Ok(())
    }

    fn run(&self, command: Command) -> Result<String, Failure> {
        match command {
            Command::Sim { file } => {
                let c = load(&file)?;
                let p = self.sim.simulate(&c).map_err(sim_error)?;
                let mut out = String::from("# input output\n");
                for (x, &y) in p.images().iter().enumerate() {
                    let a = BitString::new(c.width(), x as u64).expect("index fits the width");
                    let b = BitString::new(c.width(), y).expect("image fits the width");
                    out.push_str(&format!("{a} {b}\n"));
                }
                Ok(out)
            }
            Command::Canon { file, path: PathKind::Gray, trace, form, rules_only } => {
                let c = load(&file)?;
                self.check_canon_width(&c)?;
                let h = gray_path(c.width()).map_err(|e| fail(WIDTH_CAP, e.to_string()))?;
                let normalizer = if rules_only {
                    self.normalizer.with_decomposition(revrules::normalize::Decomposition::Rules)
                } else {
                    self.normalizer
                };
                let (canonical, t) = normalizer.canonicalize(&c, &h).map_err(normalize_error)?;
                if let Some(out) = trace {
                    write(&out, &print_trace(&t))?;
                }
                if form {
                    Ok(format!("{canonical}\n"))
                } else {
                    let circuit = canonical.to_circuit(&DeltaGateSet::new(&h)).map_err(|e| fail(TRACE, e.to_string()))?;
                    Ok(print_circuit(&circuit))
                }
            }
            Command::Equiv { a, b, certificate, path: PathKind::Gray } => {
                let (ca, cb) = (load(&a)?, load(&b)?);
                if ca.width() != cb.width() {
                    return Err(fail(INEQUIVALENT, format!("widths differ: {} vs {}", ca.width(), cb.width())));
                }
                self.check_canon_width(&ca)?;
                let h = gray_path(ca.width()).map_err(|e| fail(WIDTH_CAP, e.to_string()))?;
                match self.normalizer.equivalent(&ca, &cb, &h).map_err(normalize_error)? {
                    Equivalence::Equivalent { form, certificate: cert } => {
                        let mut out = format!("equivalent\n{form}\n");
                        match certificate {
                            Some(p) => {
                                write(&p, &print_trace(&cert))?;
                                out.push_str(&format!("certificate: {} steps written to {}\n", cert.len(), p.display()));
                            }
                            None => out.push_str(&print_trace(&cert)),
                        }
                        Ok(out)
                    }
                    Equivalence::Inequivalent { witness, .. } => {
                        let ya = ca.apply(&witness).expect("witness fits the width");
                        let yb = cb.apply(&witness).expect("witness fits the width");
                        Err(fail(INEQUIVALENT, format!("inequivalent\nwitness {witness}: {ya} vs {yb}")))
                    }
                }
            }
            Command::Opt { file, budget, trace } => {
                let c = load(&file)?;
                let (out, t) = optimize(&c, budget);
                let mut text = print_circuit(&out);
                match trace {
                    Some(p) => write(&p, &print_trace(&t))?,
                    None => {
                        text.push('\n');
                        text.push_str(&print_trace(&t));
                    }
                }
                Ok(text)
            }
            Command::Render { file, ascii } => {
                let c = load(&file)?;
                Ok(render_with(&c, if ascii { RenderStyle::Ascii } else { RenderStyle::Unicode }))
            }
            Command::Rules { action: RulesAction::List } => Ok(RuleId::ALL
                .iter()
                .map(|r| format!("{:<4}{:<9}{}\n", r.to_string(), if r.is_basic() { "basic" } else { "derived" }, r.summary()))
                .collect()),
            Command::Rules { action: RulesAction::Show { id } } => {
                let r: RuleId = id.parse().map_err(|e: String| fail(USAGE, e))?;
                Ok(format!("{r}: {}\n{}\n", r.summary(), r.description()))
            }
            Command::Replay { file, trace, expect } => {
                let c = load(&file)?;
                let doc = parse_trace(&read(&trace)?).map_err(|e| fail(PARSE, format!("{}: {e}", trace.display())))?;
                let t: RewriteTrace = doc.into_trace(c).map_err(|e| fail(TRACE, e.to_string()))?;
                let end = t.replay().map_err(|e| fail(TRACE, e.to_string()))?;
                if let Some(p) = expect {
                    let want = load(&p)?;
                    if want != end {
                        return Err(fail(TRACE, format!("final circuit differs from {}", p.display())));
                    }
                }
                Ok(print_circuit(&end))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let app = App { sim: Simulator::new(cli.max_sim_width), normalizer: Normalizer::new(cli.max_canon_width) };
    match app.run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure { code, message }) => {
            if code == INEQUIVALENT {
                println!("{message}");
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}
