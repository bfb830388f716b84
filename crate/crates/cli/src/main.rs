//! `gtt`: typecheck, elaborate, simplify, run and test gradual CBPV programs.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gtt_core::decomplexify::{simp_comp, simp_value};
use gtt_core::dynamism::derive;
use gtt_core::dyninterp::InterpKind;
use gtt_core::elaborate::elab_term;
use gtt_core::harness::{run_law_suite, Harness, DEFAULT_DEPTH};
use gtt_core::machine::{eval_with, Config, RunResult, DEFAULT_FUEL};
use gtt_core::syntax::{parse_term, parse_type, pretty, Parsed, Tm, Type};
use gtt_core::typecheck::{check_program, infer, TypeEnv, TypeError};

#[derive(Parser)]
#[command(name = "gtt", version, about = "Gradual call-by-push-value toolchain")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum InterpArg {
    Natural,
    Scheme,
}

impl From<InterpArg> for InterpKind {
    fn from(a: InterpArg) -> InterpKind {
        match a {
            InterpArg::Natural => InterpKind::Natural,
            InterpArg::Scheme => InterpKind::Scheme,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    /// Elaborated term with complex values and stacks.
    Cbpvstar,
    /// Elaborated and de-complexified.
    Cbpv,
}

#[derive(Subcommand)]
enum Verb {
    /// Typecheck a program and print its type.
    Check { file: PathBuf },
    /// Print the dynamism derivation of `A ⊑ B`.
    Dyn { lhs: String, rhs: String },
    /// Elaborate casts into the target calculus.
    Elab {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "natural")]
        interp: InterpArg,
        #[arg(long, value_enum, default_value = "cbpvstar")]
        emit: Emit,
    },
    /// Elaborate and de-complexify.
    Simplify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "natural")]
        interp: InterpArg,
    },
    /// Run a closed program of type `F (1 + 1)`.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "natural")]
        interp: InterpArg,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Property suites.
    Test {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Check the cast and term laws over the type universe.
    Laws {
        #[arg(long, value_enum, default_value = "natural")]
        interp: InterpArg,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Only laws whose name starts with this.
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

/// A failed verb: the message goes to stdout, the code is the exit status.
struct Fail(u8, String);

fn usage(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

fn read(file: &PathBuf) -> Result<Parsed, Fail> {
    let src = std::fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    parse_term(&src).map_err(|e| Fail(1, format!("ERR {} PARSE {}", e.pos, e.msg)))
}

fn type_error(p: &Parsed, e: &TypeError) -> Fail {
    let pos = p.spans.get(&e.node).or_else(|| p.spans.get(&p.term)).unwrap_or_default();
    Fail(1, format!("ERR {pos} {} {}", e.code, e.msg))
}

fn typed(p: &Parsed) -> Result<(Tm, Type), Fail> {
    infer(&TypeEnv::new(), &p.term).map_err(|e| type_error(p, &e))
}

fn elaborate(file: &PathBuf, kind: InterpKind) -> Result<(Tm, Type), Fail> {
    let p = read(file)?;
    let (t, ty) = typed(&p)?;
    Ok((elab_term(&t, kind.interp()), ty))
}

fn simplify(t: &Tm, ty: &Type) -> Tm {
    match ty {
        Type::Val(_) => simp_value(t),
        Type::Comp(_) => simp_comp(t),
    }
}

fn run(verb: Verb) -> Result<String, Fail> {
    match verb {
        Verb::Check { file } => {
            let p = read(&file)?;
            let (_, ty) = typed(&p)?;
            Ok(format!("OK {ty}"))
        }
        Verb::Dyn { lhs, rhs } => {
            let parse = |s: &str| parse_type(s).map_err(|e| usage(format!("ERR {} PARSE {}", e.pos, e.msg)));
            let (a, b) = (parse(&lhs)?, parse(&rhs)?);
            match derive(&a, &b) {
                Some(d) => Ok(d.tree().trim_end().to_string()),
                None => Err(Fail(1, "NOT DERIVABLE".into())),
            }
        }
        Verb::Elab { file, interp, emit } => {
            let (t, ty) = elaborate(&file, interp.into())?;
            Ok(match emit {
                Emit::Cbpvstar => pretty(&t),
                Emit::Cbpv => pretty(&simplify(&t, &ty)),
            })
        }
        Verb::Simplify { file, interp } => {
            let (t, ty) = elaborate(&file, interp.into())?;
            Ok(pretty(&simplify(&t, &ty)))
        }
        Verb::Run { file, interp, fuel } => {
            let p = read(&file)?;
            let t = check_program(&p.term).map_err(|e| type_error(&p, &e))?;
            let op = simp_comp(&elab_term(&t, InterpKind::from(interp).interp()));
            let ev = eval_with(&op, Config { fuel, ..Config::default() })
                .map_err(|e| Fail(1, format!("ERR 0:0 STUCK {e}")))?;
            Ok(match ev.result {
                RunResult::Timeout => format!("RESULT: timeout({fuel})"),
                r => format!("RESULT: {r}"),
            })
        }
        Verb::Test { suite: Suite::Laws { interp, depth, law, json } } => {
            let report = run_law_suite(&Harness::new(interp.into(), depth), law.as_deref());
            if report.results.is_empty() {
                return Err(usage(format!("no law matches '{}'", law.unwrap_or_default())));
            }
            let text = if json {
                serde_json::to_string_pretty(&report).expect("report serializes")
            } else {
                let mut out = String::new();
                for r in &report.results {
                    let tag = if r.failures.is_empty() { "PASS" } else { "FAIL" };
                    out.push_str(&format!("{tag} {} {} ({} instances)\n", r.law, r.ty, r.instances));
                    for f in &r.failures {
                        out.push_str(&format!("  observer {}: {} vs {}\n", f.observer, f.lhs_result, f.rhs_result));
                    }
                }
                let bad = report.failures().count();
                out.push_str(&format!(
                    "{} rows, {bad} failing (interp {}, depth {})",
                    report.results.len(),
                    report.interp,
                    report.depth
                ));
                out
            };
            if report.passed() {
                Ok(text)
            } else {
                Err(Fail(1, text))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, text) = match run(cli.verb) {
        Ok(out) => (0, out),
        Err(Fail(code, msg)) => (code, msg),
    };
    // A closed pipe is not worth a panic.
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(code)
}
