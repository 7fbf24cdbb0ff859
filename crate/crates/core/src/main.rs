use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qform::corpus::{bounds_text, run_corpus};
use qform::expr::{parse_field, parse_form_expr, parse_pfister, print_form, ParsedForm};
use qform::pfister::is_neighbor;
use qform::properties::{run_all, seed_from_env};
use qform::report::{counts, emit_report, ReportFormat};
use qform::splitting::{i1_bounds, max_splitting_status, Hints};
use qform::{clifford_invariant, hasse_invariant, Error, QForm, Result};

#[derive(Parser)]
#[command(name = "qform", version, about = "Quadratic forms over Q, F_p and Laurent series towers")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct FormArg {
    /// Form expression, e.g. `pf(-1,-1) (*) <1,1,1,7>` or `<1,x> over Q[[x]]`.
    #[arg(allow_hyphen_values = true)]
    form: String,
    /// Field used when the expression has no `over` clause.
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Args)]
struct HintArgs {
    /// Candidate Pfister form for similarity.
    #[arg(long)]
    pfister: Option<String>,
    /// Candidate ambient Pfister form for a neighbour.
    #[arg(long)]
    neighbor: Option<String>,
    /// Pfister factor `pi` of a product `pi (x) q'`; needs `--factor`.
    #[arg(long, requires = "factor")]
    product: Option<String>,
    /// The form `q'` of a product.
    #[arg(long)]
    factor: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Elaborate an expression into a diagonal form.
    Eval(FormArg),
    /// Witt index and anisotropic part.
    Witt(FormArg),
    /// Determinant, Hasse and Clifford invariants.
    Invariants(FormArg),
    /// Decide isometry of two forms.
    Isometric {
        #[command(flatten)]
        a: FormArg,
        #[arg(allow_hyphen_values = true)]
        other: String,
    },
    /// Test whether a form is a neighbour of a Pfister form.
    Neighbor {
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        pfister: String,
    },
    /// Certified interval for the first Witt index.
    I1Bounds {
        #[command(flatten)]
        form: FormArg,
        #[command(flatten)]
        hints: HintArgs,
    },
    /// Maximal splitting status.
    Maxsplit {
        #[command(flatten)]
        form: FormArg,
        #[command(flatten)]
        hints: HintArgs,
    },
    /// Run a corpus or the randomized property suites.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Subcommand)]
enum Verify {
    /// Check every record of a corpus file.
    Corpus { path: PathBuf },
    /// Run the seeded randomized suites.
    Properties {
        /// Defaults to $QFORM_SEED, else a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Cases per suite; each suite has its own default.
        #[arg(long)]
        cases: Option<usize>,
    },
}

struct Out {
    format: Format,
    lines: Vec<(String, String)>,
}

impl Out {
    fn put(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            match self.format {
                Format::Text => s.push_str(&format!("{k}: {v}\n")),
                Format::Machine => {
                    let v = v.split_whitespace().collect::<Vec<_>>().join("_");
                    s.push_str(&format!("{k}={v}\n"));
                }
            }
        }
        s
    }
}

fn load(arg: &FormArg) -> Result<QForm> {
    load_parsed(arg).map(|(q, _)| q)
}

fn load_parsed(arg: &FormArg) -> Result<(QForm, ParsedForm)> {
    let default = parse_field(&arg.field)?;
    let parsed = parse_form_expr(&arg.form)?;
    Ok((parsed.elaborate(Some(&default))?, parsed))
}

/// Explicit hints; a written product `pf(..) (*) q'` supplies the product hint.
fn hints(h: &HintArgs, q: &QForm, parsed: &ParsedForm) -> Result<Hints> {
    let field = q.field();
    let pf = |s: &Option<String>| s.as_deref().map(|s| parse_pfister(s, field)).transpose();
    let product = match (pf(&h.product)?, &h.factor) {
        (Some(pi), Some(f)) => Some((pi, parse_form_expr(f)?.elaborate(Some(field))?)),
        _ => parsed.expr.product_factors(field)?,
    };
    Ok(Hints { pfister: pf(&h.pfister)?, neighbor: pf(&h.neighbor)?, product, neighbor_product: None })
}

fn run(cli: &Cli, out: &mut Out) -> Result<bool> {
    match &cli.command {
        Command::Eval(a) => {
            let q = load(a)?;
            out.put("form", print_form(&q));
            out.put("dim", q.dim());
        }
        Command::Witt(a) => {
            let q = load(a)?;
            let w = q.witt_decompose()?;
            out.put("witt_index", w.witt_index);
            out.put("anisotropic_part", print_form(&w.anisotropic_part));
        }
        Command::Invariants(a) => {
            let q = load(a)?;
            let f = q.field().clone();
            out.put("dim", q.dim());
            out.put("det", f.render(q.determinant()));
            out.put("signed_det", f.render(q.signed_det()));
            out.put("hasse", hasse_invariant(&q));
            let c = clifford_invariant(&q);
            out.put("clifford", &c);
            match c.schur_index() {
                Ok(i) => out.put("clifford_index", i),
                Err(Error::Unsupported(_)) => out.put("clifford_index", "unknown"),
                Err(e) => return Err(e),
            }
        }
        Command::Isometric { a, other } => {
            let q = load(a)?;
            let r = parse_form_expr(other)?.elaborate(Some(q.field()))?;
            out.put("isometric", q.isometric(&r)?);
        }
        Command::Neighbor { form, pfister } => {
            let q = load(form)?;
            let pi = parse_pfister(pfister, q.field())?;
            match is_neighbor(&q, &pi)? {
                Some(w) => {
                    out.put("neighbor", true);
                    out.put("scalar", q.field().render(w.scalar));
                    out.put("complement", print_form(&w.complementary));
                }
                None => out.put("neighbor", false),
            }
        }
        Command::I1Bounds { form, hints: h } => {
            let (q, parsed) = load_parsed(form)?;
            let b = i1_bounds(&q, &hints(h, &q, &parsed)?, None)?;
            out.put("i1", bounds_text(&b));
            out.put("divisor", b.divisor);
            for r in &b.rules {
                out.put("rule", r);
            }
        }
        Command::Maxsplit { form, hints: h } => {
            let (q, parsed) = load_parsed(form)?;
            let s = max_splitting_status(&q, &hints(h, &q, &parsed)?, None)?;
            out.put("maxsplit", s.status);
            out.put("target", s.target);
            out.put("i1", bounds_text(&s.bounds));
            for r in s.obstruction_trail() {
                out.put("obstruction", r);
            }
        }
        Command::Verify(v) => {
            let results = match v {
                Verify::Corpus { path } => run_corpus(path)?,
                Verify::Properties { seed, cases } => run_all(seed.unwrap_or_else(seed_from_env), *cases),
            };
            let format = match cli.format {
                Format::Text => ReportFormat::Text,
                Format::Machine => ReportFormat::Machine,
            };
            print!("{}", emit_report(&results, format));
            return Ok(counts(&results).1 == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out { format: cli.format, lines: Vec::new() };
    match run(&cli, &mut out) {
        Ok(ok) => {
            print!("{}", out.render());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Syntax { .. } | Error::UnknownVariable(_) | Error::InvalidField(_) | Error::Corpus { .. } => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}
