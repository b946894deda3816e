mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use springer_rca::model::{build_graded_basis, enumerate_fixed_points};
use springer_rca::operators::{
    minuscule_monopole, operator_e, operator_f, operator_h, operator_x, operator_y,
    DressPolynomial, GradedOperator, MinusculeCoweight,
};
use springer_rca::rational::int;
use springer_rca::verify::{run_suite, Suite};
use springer_rca::{Error, GradedBasis, Params};

use config::{resolve, RunConfig, Task};
use output::{Emit, Envelope};

#[derive(Parser, Debug)]
#[command(
    name = "springer-rca",
    version,
    about = "Exact Cherednik algebra action on Hilbert schemes of x^n = t^k"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Truncation degree D [default: 10]
    #[arg(long = "max-degree", global = true)]
    max_degree: Option<usize>,
    #[arg(long, value_enum, global = true)]
    format: Option<config::Format>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML file with the same keys as the flags (flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List the torus fixed points of each degree
    FixedPoints,
    /// Print the matrix blocks of an operator
    Operator(OperatorArgs),
    /// Run verification suites
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    #[value(name = "X")]
    X,
    #[value(name = "Y")]
    Y,
    /// E_n[1]
    #[value(name = "E")]
    E,
    /// -F_n[1]
    #[value(name = "F")]
    F,
    /// ħ - φ_1 - φ_2 (n = 2)
    #[value(name = "H")]
    H,
    #[value(name = "Er")]
    Er,
    #[value(name = "Fr")]
    Fr,
    /// Minuscule monopole for --lambda
    #[value(name = "monopole")]
    Monopole,
    #[value(name = "commutator-XY")]
    CommutatorXY,
}

#[derive(Args, Debug, Clone)]
pub struct OperatorArgs {
    #[arg(long, value_enum)]
    op: Option<Op>,
    #[arg(long)]
    r: Option<usize>,
    /// Coweight such as 1,0,0 or 0,-1,-1
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// 1, eJ (all weights) or eJ-block (first r weights)
    #[arg(long)]
    dress: Option<String>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// weyl, sl2, singular, kernel-y, appendix-b, stabilizer, euler, oracle, boundary or all
    #[arg(long, value_parser = parse_suite)]
    suite: Option<Suite>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Io(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 1,
            Failure::Core(e) => match e {
                Error::Unsupported { .. } => 3,
                Error::UnderTruncation { .. } => 4,
                Error::InvalidArgument(_)
                | Error::Dimension { .. }
                | Error::BudgetExceeded { .. } => 2,
                _ => 1,
            },
        }
    }

    fn report(&self) {
        match self {
            Failure::Verification => {}
            Failure::Usage(msg) | Failure::Io(msg) => eprintln!("error: {msg}"),
            Failure::Core(Error::UnderTruncation { required, .. }) => {
                eprintln!("error: {}", self.message());
                eprintln!("minimal sufficient max degree: {required}");
            }
            Failure::Core(_) => eprintln!("error: {}", self.message()),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Verification => "verification failed".into(),
        }
    }
}

fn dressing(spec: &str, n: usize, r: usize) -> Result<DressPolynomial, Failure> {
    if spec == "1" {
        return Ok(DressPolynomial::one(n));
    }
    let bad = || Failure::Usage(format!("--dress expects 1, eJ or eJ-block, got `{spec}`"));
    let body = spec.strip_prefix('e').ok_or_else(bad)?;
    let (j, vars): (&str, Vec<usize>) = match body.strip_suffix("-block") {
        Some(j) => (j, (1..=r).collect()),
        None => (body, (1..=n).collect()),
    };
    let j: usize = j.parse().map_err(|_| bad())?;
    Ok(DressPolynomial::elementary(n, j, &vars))
}

fn build_operator(
    cfg: &RunConfig,
    basis: &Arc<GradedBasis>,
) -> Result<(String, GradedOperator), Failure> {
    let Task::Operator {
        op,
        r,
        lambda,
        dress,
    } = &cfg.task
    else {
        unreachable!("operator task");
    };
    let n = cfg.n;
    let needs_r = || {
        r.filter(|&r| (1..=n).contains(&r))
            .ok_or_else(|| Failure::Usage(format!("--r must be in 1..={n} for this operator")))
    };
    if !matches!(op, Op::Er | Op::Fr | Op::Monopole) && dress != "1" {
        return Err(Failure::Usage(
            "--dress only applies to Er, Fr and monopole".into(),
        ));
    }
    let one = DressPolynomial::one(n);
    Ok(match op {
        Op::X => ("X".into(), operator_x(basis)?),
        Op::Y => ("Y".into(), operator_y(basis)?),
        Op::E => ("E".into(), operator_e(n, &one, basis)?),
        Op::F => ("F".into(), operator_f(n, &one, basis)?.scale(&int(-1))),
        Op::H => ("H".into(), operator_h(basis)?),
        Op::Er => {
            let r = needs_r()?;
            (
                format!("E_{r}[{dress}]"),
                operator_e(r, &dressing(dress, n, r)?, basis)?,
            )
        }
        Op::Fr => {
            let r = needs_r()?;
            (
                format!("F_{r}[{dress}]"),
                operator_f(r, &dressing(dress, n, r)?, basis)?,
            )
        }
        Op::Monopole => {
            let lambda = lambda.as_ref().ok_or_else(|| {
                Failure::Usage("--lambda is required for the monopole operator".into())
            })?;
            if lambda.len() != n {
                return Err(Failure::Usage(format!(
                    "--lambda needs {n} entries, got {}",
                    lambda.len()
                )));
            }
            let w = MinusculeCoweight::from_vector(lambda).map_err(|e| {
                Failure::Core(Error::Unsupported {
                    n,
                    k: cfg.k,
                    reason: format!("only minuscule coweights are supported ({e})"),
                })
            })?;
            let name = format!("R_{:?}[{dress}]", w.vector());
            (
                name,
                minuscule_monopole(&w, &dressing(dress, n, w.r())?, basis)?,
            )
        }
        Op::CommutatorXY => (
            "[X,Y]".into(),
            operator_x(basis)?.commutator(&operator_y(basis)?)?,
        ),
    })
}

fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let p = Params::new(cfg.n, cfg.k)?;
    let d = cfg.max_degree;
    let envelope = |command: &str| Envelope::new(&p, d, command);
    let emit = match &cfg.task {
        Task::FixedPoints => {
            p.require_coprime()?;
            let strata = (0..=d)
                .map(|i| enumerate_fixed_points(&p, i))
                .collect::<Result<Vec<_>, _>>()?;
            Emit::fixed_points(envelope("fixed-points"), strata)
        }
        Task::Operator { .. } => {
            p.require_coprime()?;
            let basis = Arc::new(build_graded_basis(&p, d)?);
            let (name, op) = build_operator(cfg, &basis)?;
            Emit::operator(envelope("operator"), &name, &op)
        }
        Task::Verify { suite } => {
            let outcome = run_suite(*suite, &p, d)?;
            Emit::verify(envelope("verify"), *suite, outcome)
        }
    };
    let passed = emit.passed();
    let bytes = emit.render(cfg.format).map_err(Failure::Io)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| Failure::Io(format!("cannot write stdout: {e}")))?;
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = resolve(&cli.common, &cli.command).and_then(|cfg| {
        if let Some(t) = cfg.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(|e| Failure::Io(format!("cannot start thread pool: {e}")))?;
        }
        run(&cfg)
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            f.report();
            ExitCode::from(f.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use springer_rca::rational::frac;

    #[test]
    fn dressing_specs() {
        let phi = [int(1), int(2), int(4)];
        let eval = |s: &str, r| {
            dressing(s, 3, r)
                .unwrap()
                .evaluate(&phi, &frac(-4, 3), &int(1))
        };
        assert_eq!(eval("1", 1), int(1));
        assert_eq!(eval("e1", 1), int(7));
        assert_eq!(eval("e2", 1), int(14));
        assert_eq!(eval("e2-block", 2), int(2));
        assert!(dressing("e", 3, 1).is_err());
        assert!(dressing("x1", 3, 1).is_err());
    }
}
