use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bvcheck::explain::LEDGER;
use bvcheck::report::SuiteReport;
use bvcheck::spec::{parse_spec, ModelSpec, Suite};
use bvcheck::suite::{exit_code, run_suite, EXIT_SPEC_ERROR};
use bvcheck_core::brackets::{akman_bracket, koszul_bracket};
use bvcheck_core::linfty::linfty_bracket;
use bvcheck_core::structures::{check_split, cohomology, Window};
use bvcheck_core::text::parse_element;
use bvcheck_core::{Budget, Element};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bvcheck",
    version,
    about = "Exact checks of higher brackets and BV structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    budget_degree: Option<u32>,
    #[arg(long)]
    budget_tuples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites and print a report.
    Check {
        #[command(flatten)]
        common: Common,
        /// Suites to run instead of the spec's SUITE lines.
        #[arg(long)]
        suite: Vec<Suite>,
    },
    /// Print F_D^k and l_k for the given arguments.
    Brackets {
        #[command(flatten)]
        common: Common,
        /// Operator name; defaults to the spec's D.
        #[arg(long)]
        operator: Option<String>,
        /// One argument element per flag, in order.
        #[arg(long = "arg", required = true)]
        args: Vec<String>,
    },
    /// Print the degree/order split of D.
    Split {
        #[command(flatten)]
        common: Common,
    },
    /// Print cohomology slice dimensions of d.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: Option<u32>,
    },
    /// Print the sign-convention ledger.
    Explain,
}

enum Failure {
    Spec(String),
    Check(String),
}

impl Common {
    fn load(&self) -> Result<ModelSpec, Failure> {
        let src = fs::read_to_string(&self.spec)
            .map_err(|e| Failure::Spec(format!("{}: {e}", self.spec.display())))?;
        parse_spec(&src).map_err(|e| Failure::Spec(format!("{}: {e}", self.spec.display())))
    }

    fn budget(&self, spec: &ModelSpec) -> Budget {
        Budget {
            max_degree: self.budget_degree.unwrap_or(spec.budget.max_degree),
            max_tuples: self.budget_tuples.unwrap_or(spec.budget.max_tuples),
            seed: self.seed.unwrap_or(spec.budget.seed),
        }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(p) => write_file(p, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn write_file(p: &Path, text: &str) -> Result<(), Failure> {
    fs::write(p, text).map_err(|e| Failure::Check(format!("{}: {e}", p.display())))
}

fn check(common: &Common, suites: &[Suite]) -> Result<i32, Failure> {
    let spec = common.load()?;
    let budget = common.budget(&spec);
    let suites = if suites.is_empty() {
        &spec.suites
    } else {
        suites
    };
    let report: SuiteReport =
        run_suite(&spec, suites, &budget).map_err(|e| Failure::Spec(e.to_string()))?;
    let text = match common.format {
        Format::Human => report.to_human(),
        Format::Json => report.to_json(),
    };
    common.emit(&text)?;
    Ok(exit_code(report.verdict()))
}

fn brackets(common: &Common, operator: Option<&str>, args: &[String]) -> Result<i32, Failure> {
    let spec = common.load()?;
    let name = operator.unwrap_or(&spec.big_d);
    let d = spec
        .operator(name)
        .ok_or_else(|| Failure::Spec(format!("unknown operator `{name}`")))?;
    let elems: Vec<Element> = args
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_element(&spec.table, s)
                .map_err(|e| Failure::Spec(format!("--arg {}: {e}", i + 1)))
        })
        .collect::<Result<_, _>>()?;
    let k = elems.len();
    let core = |e: bvcheck_core::Error| Failure::Check(e.to_string());
    let akman = akman_bracket(d, &elems).map_err(core)?;
    let koszul = koszul_bracket(d, &elems).map_err(core)?;
    let mut out = String::new();
    out.push_str(&format!("D = {d}\n"));
    out.push_str(&format!("F^{k} (recursive)     = {akman}\n"));
    out.push_str(&format!("F^{k} (product form)  = {koszul}\n"));
    match linfty_bracket(d, &elems) {
        Ok(l) => out.push_str(&format!("l_{k}                 = {l}\n")),
        Err(e) => out.push_str(&format!("l_{k}                 : {e}\n")),
    }
    let json = serde_json::json!({
        "operator": d.to_string(),
        "args": args,
        "recursive": akman.to_string(),
        "product": koszul.to_string(),
    });
    let text = match common.format {
        Format::Human => out,
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&json).expect("json")),
    };
    common.emit(&text)?;
    Ok(if akman == koszul { 0 } else { 1 })
}

fn split(common: &Common) -> Result<i32, Failure> {
    let spec = common.load()?;
    let budget = common.budget(&spec);
    let (split, report) =
        check_split(spec.big_d(), &budget).map_err(|e| Failure::Check(e.to_string()))?;
    let mut rows = Vec::new();
    for c in &split.components {
        rows.push(serde_json::json!({
            "n": c.n,
            "degree": c.degree().0,
            "order_bound_holds": c.certificate.bound_holds,
            "sharp": c.certificate.sharp,
            "tested": c.certificate.tested,
            "operator": c.operator.to_string(),
        }));
    }
    let residual: Vec<_> = split
        .residual
        .iter()
        .map(|(deg, op)| serde_json::json!({"degree": deg.0, "operator": op.to_string()}))
        .collect();
    let text = match common.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(
                &serde_json::json!({"components": rows, "residual": residual})
            )
            .expect("json")
        ),
        Format::Human => {
            let mut out = String::from("n  degree  order<=n  sharp  operator\n");
            for c in &split.components {
                out.push_str(&format!(
                    "{:<2} {:>6}  {:<8}  {:<5}  {}\n",
                    c.n,
                    c.degree().0,
                    if c.certificate.bound_holds {
                        "yes"
                    } else {
                        "no"
                    },
                    if c.certificate.sharp { "yes" } else { "no" },
                    c.operator
                ));
            }
            for (deg, op) in &split.residual {
                out.push_str(&format!("-- {:>6}  residual            {op}\n", deg.0));
            }
            for c in report
                .checks
                .iter()
                .filter(|c| c.name.starts_with("square-degree"))
            {
                out.push_str(&format!(
                    "{} {}: {}\n",
                    c.verdict,
                    c.name,
                    c.note.as_deref().unwrap_or("")
                ));
            }
            out
        }
    };
    common.emit(&text)?;
    Ok(exit_code(report.verdict()))
}

fn cohomology_table(common: &Common, window: Option<u32>) -> Result<i32, Failure> {
    let spec = common.load()?;
    let window = Window {
        max_weight: window.unwrap_or(spec.window.max_weight),
    };
    let h = cohomology(&spec.d(), spec.weights.clone(), window)
        .map_err(|e| Failure::Check(e.to_string()))?;
    let text = match common.format {
        Format::Json => {
            let slices: Vec<_> = h
                .slices
                .values()
                .map(|s| {
                    serde_json::json!({
                        "degree": s.degree.0,
                        "weight": s.weight,
                        "dimension": s.dimension(),
                        "truncated": s.truncated,
                        "representatives": s.representatives.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::json!({
                    "weights": h.weights.weights,
                    "window": window.max_weight,
                    "slices": slices,
                }))
                .expect("json")
            )
        }
        Format::Human => {
            let mut out = format!(
                "weights {:?}, window {}\n",
                h.weights.weights, window.max_weight
            );
            out.push_str("degree  weight  dim  representatives\n");
            for s in h
                .slices
                .values()
                .filter(|s| s.dimension() > 0 || s.truncated)
            {
                let reps: Vec<String> = s.representatives.iter().map(ToString::to_string).collect();
                out.push_str(&format!(
                    "{:>6}  {:>6}  {:>3}  {}{}\n",
                    s.degree.0,
                    s.weight,
                    s.dimension(),
                    reps.join(", "),
                    if s.truncated { "  (truncated)" } else { "" }
                ));
            }
            out
        }
    };
    common.emit(&text)?;
    Ok(if h.truncated().is_empty() { 0 } else { 3 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { common, suite } => check(common, suite),
        Command::Brackets {
            common,
            operator,
            args,
        } => brackets(common, operator.as_deref(), args),
        Command::Split { common } => split(common),
        Command::Cohomology { common, window } => cohomology_table(common, *window),
        Command::Explain => {
            print!("{LEDGER}");
            Ok(0)
        }
    };
    let code = match result {
        Ok(code) => code,
        Err(Failure::Spec(m)) => {
            eprintln!("error: {m}");
            EXIT_SPEC_ERROR
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            1
        }
    };
    ExitCode::from(code as u8)
}
