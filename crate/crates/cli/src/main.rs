use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use todaqc_core::laxdet::{conserved, LaxVariant};
use todaqc_core::parse::parse_expression;
use todaqc_core::quantumrel::{ev_q_normal_form, qs_family, qs_hat_family, RelationFamily};
use todaqc_core::todaflow::{integrate, FlowState};
use todaqc_core::vars::VarUniverse;
use todaqc_core::verify::{run_suites, Suite};

#[derive(Parser)]
#[command(name = "todaqc", version, about = "Quantum cohomology relations of flag manifolds and Toda lattice conserved quantities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Periodic,
    OpenHat,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    X,
    Y,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Open,
    Periodic,
}

impl From<VariantArg> for LaxVariant {
    fn from(v: VariantArg) -> LaxVariant {
        match v {
            VariantArg::Open => LaxVariant::Open,
            VariantArg::Periodic => LaxVariant::Periodic,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the quantum relations QS^0..QS^{n-1} (or the hat variant)
    Relations(RelationsArgs),
    /// Print the conserved quantities extracted from the Lax determinant
    Conserved(ConservedArgs),
    /// Run the verification suites for all admissible n up to --n-max
    Verify(VerifyArgs),
    /// Integrate a Toda flow and report conserved-quantity drift
    Flow(FlowArgs),
    /// Print the quantum normal form of an element of V
    Evalq(EvalqArgs),
}

#[derive(Args)]
struct RelationsArgs {
    #[arg(long)]
    n: u8,
    #[arg(long, value_enum)]
    variant: FamilyKind,
    #[arg(long, value_enum, default_value = "x")]
    basis: BasisArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ConservedArgs {
    #[arg(long)]
    n: u8,
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_name = "N")]
    n_max: u8,
    /// Suites to run (default: all): thm31, cor42, prop32-1, prop32-2,
    /// prop23, degeneration
    #[arg(long, value_delimiter = ',')]
    which: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(long)]
    n: usize,
    /// Comma-separated x values, e.g. "0.3,-0.1,-0.4,0.2"
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Comma-separated q values (n-1 entries open, n periodic), all negative
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, default_value_t = 1.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Write the drift report JSON to this path
    #[arg(long)]
    report: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct EvalqArgs {
    #[arg(long)]
    n: u8,
    /// Monomial expression in X and Q variables, e.g. "X1*X2*X3"
    expression: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn usage_err(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn cmd_relations(args: &RelationsArgs) -> ExitCode {
    let min_n = match args.variant {
        FamilyKind::Periodic => 3,
        FamilyKind::OpenHat => 2,
    };
    if args.n < min_n {
        return usage_err(format!(
            "--n must be at least {min_n} for this variant (got {})",
            args.n
        ));
    }
    let u = match VarUniverse::new(args.n) {
        Ok(u) => u,
        Err(e) => return usage_err(e),
    };
    let family = match args.variant {
        FamilyKind::Periodic => qs_family(u),
        FamilyKind::OpenHat => qs_hat_family(u),
    };
    let family = match family {
        Ok(f) => f,
        Err(e) => return usage_err(e),
    };
    let family: RelationFamily = match args.basis {
        BasisArg::X => family,
        BasisArg::Y => match family.into_y_basis() {
            Ok(f) => f,
            Err(e) => return usage_err(e),
        },
    };
    match args.format {
        Format::Json => println!("{}", family.to_json()),
        Format::Text => {
            for (k, p) in family.relations.iter().enumerate().take(args.n as usize) {
                println!("QS{k} = {p}");
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_conserved(args: &ConservedArgs) -> ExitCode {
    let u = match VarUniverse::new(args.n) {
        Ok(u) => u,
        Err(e) => return usage_err(e),
    };
    let set = match conserved(u, args.variant.into()) {
        Ok(s) => s,
        Err(e) => return usage_err(e),
    };
    match args.format {
        Format::Json => println!("{}", set.to_json()),
        Format::Text => {
            for (k, p) in set.coefficients.iter().enumerate() {
                println!("{}{k} = {p}", set.letter());
            }
            if let Some(a) = &set.a_term {
                println!("A = {a}");
            }
            if let Some(b) = &set.b_term {
                println!("B = {b}");
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    if args.n_max < 3 {
        return usage_err(format!("--n-max must be at least 3 (got {})", args.n_max));
    }
    let suites: Vec<Suite> = if args.which.is_empty() {
        Suite::ALL.to_vec()
    } else {
        let mut out = Vec::new();
        for name in &args.which {
            match Suite::parse(name) {
                Some(s) => out.push(s),
                None => return usage_err(format!("unknown suite '{name}'")),
            }
        }
        out
    };
    let report = match run_suites(&suites, args.n_max) {
        Ok(r) => r,
        Err(e) => return usage_err(e),
    };
    match args.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => {
            for row in &report.rows {
                println!("{row}");
            }
            let failed = report.rows.iter().filter(|r| !r.pass).count();
            println!(
                "{} checks, {} failed",
                report.rows.len(),
                failed
            );
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn parse_vec(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("bad number '{s}': {e}")))
        .collect()
}

fn cmd_flow(args: &FlowArgs) -> ExitCode {
    let x = match parse_vec(&args.x) {
        Ok(v) => v,
        Err(e) => return usage_err(e),
    };
    let q = match parse_vec(&args.q) {
        Ok(v) => v,
        Err(e) => return usage_err(e),
    };
    if x.len() != args.n {
        return usage_err(format!("--x must have {} entries, got {}", args.n, x.len()));
    }
    if args.dt <= 0.0 || args.t_end < 0.0 {
        return usage_err("--dt must be positive and --t-end nonnegative");
    }
    let variant: LaxVariant = args.variant.into();
    let state = match FlowState::new(variant, x, q) {
        Ok(s) => s,
        Err(e) => return usage_err(e),
    };
    let (_, report) = match integrate(&state, args.t_end, args.dt, variant) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VERIFY_FAILED);
        }
    };
    let json = report.to_json();
    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_VERIFY_FAILED);
        }
    }
    match args.format {
        Format::Json => println!("{json}"),
        Format::Text => {
            println!("variant={} n={} dt={} t_end={}", report.variant, report.n, report.dt, report.t_end);
            for (label, d) in &report.drift {
                println!("{label} drift = {d:e}");
            }
            println!("sumx_max = {:e}", report.sumx_max);
            if let Some(p) = report.prodq_drift {
                println!("prodq_drift = {p:e}");
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_evalq(args: &EvalqArgs) -> ExitCode {
    let u = match VarUniverse::new(args.n) {
        Ok(u) => u,
        Err(e) => return usage_err(e),
    };
    let p = match parse_expression(u, &args.expression) {
        Ok(p) => p,
        Err(e) => return usage_err(e),
    };
    let nf = match ev_q_normal_form(&p) {
        Ok(nf) => nf,
        Err(e) => return usage_err(e),
    };
    match args.format {
        Format::Json => println!("{}", nf.to_json()),
        Format::Text => println!("{nf}"),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Relations(args) => cmd_relations(args),
        Command::Conserved(args) => cmd_conserved(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Flow(args) => cmd_flow(args),
        Command::Evalq(args) => cmd_evalq(args),
    }
}
