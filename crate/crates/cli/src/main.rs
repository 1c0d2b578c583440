use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seminorm_core::axioms::{self, AxiomReport, AxiomSample, MajorizationReport};
use seminorm_core::demo::{self, DemoId};
use seminorm_core::grammar::{self, ParseError};
use seminorm_core::lp::{self, LpOutcome, LpProblem};
use seminorm_core::norms::PolyhedralNorm;
use seminorm_core::quotient::{self, Subspace};
use seminorm_core::rational::{self, display_with_approx, Rational};
use seminorm_core::report::{
    self, CertificateReport, Comparison, Format, Relation, ReportBundle, ReportRow, RowKey,
};
use seminorm_core::witnesses::{self, EquivalenceClaim, WitnessSpec};
use seminorm_core::{FunctionalSpec, SparseSeq};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXAMPLES_SHOWN: usize = 5;

#[derive(Parser)]
#[command(
    name = "seminorm-lab",
    version,
    about = "Exact checks of norms and seminorms on finitely supported rational sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// table, csv or json
    #[arg(long, global = true, default_value = "table")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a fixed scenario: thm4, thm5, ex1, ex2, ex3, ex4, incomplete.
    Demo {
        id: String,
        #[arg(long, default_value_t = demo::DEFAULT_N_MAX)]
        n_max: usize,
    },
    /// Run one checker on specs given in the spec grammar.
    #[command(subcommand)]
    Check(Check),
    /// Linear programs read from JSON.
    #[command(subcommand)]
    Lp(LpCommand),
}

#[derive(Subcommand)]
enum Check {
    /// Nonnegativity, homogeneity, subadditivity and reverse triangle on samples.
    Axioms {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// lower(x) <= upper(x) on samples.
    Majorize {
        #[arg(long)]
        lower: String,
        #[arg(long)]
        upper: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Distance from a point to span(basis) in l1, linf or weighted l1.
    Quotient {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        basis: String,
        #[arg(long)]
        point: String,
    },
    /// beta*n1 <= n2 <= gamma*n1 along a witness sequence.
    Equivalence {
        #[arg(long)]
        n1: String,
        #[arg(long)]
        n2: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        gamma: String,
        /// scaled-basis, canonical-basis, flat-block or geometric-tail
        #[arg(long)]
        witness: String,
        #[arg(long, default_value_t = demo::DEFAULT_N_MAX)]
        n_max: usize,
        /// Comma-separated betas; reports the first violating n of each.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Solve and verify the certificate of an LP read from JSON.
    Lp { file: PathBuf },
}

#[derive(Subcommand)]
enum LpCommand {
    /// Print the outcome of an LP read from JSON.
    Solve { file: PathBuf },
}

struct Usage(String);

impl Usage {
    fn parse(flag: &str, input: &str, e: ParseError) -> Self {
        Usage(format!("invalid {flag}: {e}\n{}", e.pointer(input)))
    }
}

fn spec_arg(flag: &str, text: &str) -> Result<FunctionalSpec, Usage> {
    grammar::parse_spec(text).map_err(|e| Usage::parse(flag, text, e))
}

fn seq_arg(flag: &str, text: &str) -> Result<SparseSeq, Usage> {
    grammar::parse_seq(text).map_err(|e| Usage::parse(flag, text, e))
}

fn rational_arg(flag: &str, text: &str) -> Result<Rational, Usage> {
    rational::parse_rational(text).map_err(|e| Usage(format!("invalid {flag}: {e}")))
}

fn read_problem(path: &PathBuf) -> Result<LpProblem, Usage> {
    let text = fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    let p: LpProblem = serde_json::from_str(&text)
        .map_err(|e| Usage(format!("invalid LP document {}: {e}", path.display())))?;
    p.validate().map_err(|e| Usage(e.to_string()))?;
    Ok(p)
}

enum Output {
    Bundle(ReportBundle),
    Raw { text: String, pass: bool },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Demo { id, n_max } => run_demo(&id, n_max),
        Command::Check(check) => run_check(check),
        Command::Lp(LpCommand::Solve { file }) => lp_solve(&file, cli.output.format),
    };
    let (text, pass) = match result {
        Ok(Output::Bundle(b)) => (b.render(cli.output.format), b.overall()),
        Ok(Output::Raw { text, pass }) => (text, pass),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match &cli.output.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => print!("{text}"),
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn run_demo(id: &str, n_max: usize) -> Result<Output, Usage> {
    let id: DemoId = id
        .parse()
        .map_err(|e: demo::DemoError| Usage(e.to_string()))?;
    demo::run_demo(id, n_max)
        .map(Output::Bundle)
        .map_err(|e| Usage(e.to_string()))
}

fn run_check(check: Check) -> Result<Output, Usage> {
    let bundle = match check {
        Check::Axioms {
            spec,
            samples,
            seed,
        } => {
            let s = spec_arg("--spec", &spec)?;
            let r = axioms::verify_axioms(&s, samples, seed);
            ReportBundle::new(
                format!("axioms of {s} (seed {seed})"),
                vec![axiom_section(&r)],
            )
        }
        Check::Majorize {
            lower,
            upper,
            samples,
            seed,
        } => {
            let lo = spec_arg("--lower", &lower)?;
            let hi = spec_arg("--upper", &upper)?;
            let r = axioms::sample_majorization(&lo, &hi, samples, seed);
            ReportBundle::new(
                format!("{lo} <= {hi} (seed {seed})"),
                vec![majorization_section(&r)],
            )
        }
        Check::Quotient { norm, basis, point } => quotient_check(&norm, &basis, &point)?,
        Check::Equivalence {
            n1,
            n2,
            beta,
            gamma,
            witness,
            n_max,
            sweep,
        } => {
            let n1 = spec_arg("--n1", &n1)?;
            let n2 = spec_arg("--n2", &n2)?;
            let beta = rational_arg("--beta", &beta)?;
            let gamma = rational_arg("--gamma", &gamma)?;
            let witness: WitnessSpec = witness.parse().map_err(Usage)?;
            if n_max < 1 {
                return Err(Usage("--n-max must be at least 1".into()));
            }
            let claim = EquivalenceClaim::new(n1.clone(), n2.clone(), beta, gamma)
                .map_err(|e| Usage(e.to_string()))?;
            let mut sections = vec![witnesses::check_equivalence(&claim, witness, n_max)];
            if let Some(list) = sweep {
                let betas = list
                    .split(',')
                    .map(|t| rational_arg("--sweep", t.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                let out = witnesses::sweep_lower_bounds(&n1, &n2, witness, &betas, n_max);
                sections.push(witnesses::sweep_report(
                    format!("first n with beta*{n1} > {n2} on {witness}, n <= {n_max}"),
                    "beta*N1(x_n) > N2(x_n)",
                    &out,
                ));
            }
            ReportBundle::new(format!("equivalence of {n1} and {n2}"), sections)
        }
        Check::Lp { file } => {
            let p = read_problem(&file)?;
            let outcome = lp::solve(&p).map_err(|e| Usage(e.to_string()))?;
            ReportBundle::new(
                format!("LP {}", file.display()),
                vec![lp_section(&p, &outcome)],
            )
        }
    };
    Ok(Output::Bundle(bundle))
}

fn axiom_section(r: &AxiomReport) -> CertificateReport {
    let lists: [(&str, &Vec<AxiomSample>); 4] = [
        ("nonnegativity violations", &r.nonnegativity_violations),
        ("homogeneity violations", &r.homogeneity_violations),
        ("subadditivity violations", &r.subadditivity_violations),
        (
            "reverse triangle violations",
            &r.reverse_triangle_violations,
        ),
    ];
    let mut rows = Vec::new();
    for (label, list) in lists {
        rows.push(ReportRow::new(
            RowKey::Named(format!("{} samples", r.samples_checked)),
            vec![Comparison::new(
                label,
                count(list.len()),
                Relation::Eq,
                count(0),
            )],
        ));
    }
    let mut section = CertificateReport::new("seminorm axioms", rows);
    for (label, list) in lists {
        for s in list.iter().take(EXAMPLES_SHOWN) {
            section = section.with_note(format!(
                "{label}: x = {}, y = {}, alpha = {}",
                s.x, s.y, s.alpha
            ));
        }
    }
    section
}

fn majorization_section(r: &MajorizationReport) -> CertificateReport {
    let mut rows = vec![ReportRow::new(
        RowKey::Named(format!("{} samples", r.samples_checked)),
        vec![Comparison::new(
            "violations",
            count(r.violations.len()),
            Relation::Eq,
            count(0),
        )],
    )];
    for v in r.violations.iter().take(EXAMPLES_SHOWN) {
        rows.push(ReportRow::new(
            RowKey::Named(format!("x = {}", v.x)),
            vec![Comparison::new(
                "lower(x) <= upper(x)",
                v.lower.clone(),
                Relation::Le,
                v.upper.clone(),
            )],
        ));
    }
    CertificateReport::new("majorization", rows)
}

fn quotient_check(norm: &str, basis: &str, point: &str) -> Result<ReportBundle, Usage> {
    let spec = spec_arg("--norm", norm)?;
    let ambient = PolyhedralNorm::try_from(&spec).map_err(|e| Usage(e.to_string()))?;
    let vs = grammar::parse_seq_list(basis).map_err(|e| Usage::parse("--basis", basis, e))?;
    let v = Subspace::new(vs).map_err(|e| Usage(e.to_string()))?;
    let u = seq_arg("--point", point)?;
    let d = quotient::polyhedral_distance(&ambient, &v, &u);
    let (lp_primal, lp_dual) = d.lp_objectives();
    let in_v = v.contains(&u);
    let rows = vec![ReportRow::new(
        RowKey::Named("dist".into()),
        vec![
            Comparison::new(
                "dist(u, V) <= N(u)",
                d.value.clone(),
                Relation::Le,
                ambient.evaluate(&u),
            ),
            Comparison::new(
                "N(u - v*) = dist(u, V)",
                ambient.evaluate(&(&u - &d.minimizer)),
                Relation::Eq,
                d.value.clone(),
            ),
            Comparison::with_condition(
                "dist(u, V) = 0 iff u in V",
                d.value.clone(),
                Relation::Ge,
                count(0),
                (d.value == count(0)) == in_v,
            ),
            Comparison::with_condition(
                "LP certificate: c^T x = b^T y",
                lp_primal.clone(),
                Relation::Eq,
                lp_dual.clone(),
                d.certificate_verifies(),
            ),
        ],
    )];
    let section = CertificateReport::new(format!("dist_{ambient}(u, V)"), rows)
        .with_note(format!("value = {}", display_with_approx(&d.value)))
        .with_note(format!("minimizer v* = {}", d.minimizer))
        .with_note(format!("u in V: {in_v}"));
    Ok(ReportBundle::new(
        format!("quotient: u = {u}, V = span[{}]", join(v.basis())),
        vec![section],
    ))
}

fn lp_section(p: &LpProblem, outcome: &LpOutcome) -> CertificateReport {
    let row = match outcome {
        LpOutcome::Optimal { value, dual, .. } => {
            let dual_value = p.dual_objective_at(dual);
            let ok = lp::verify_certificate(p, outcome).unwrap_or(false);
            Comparison::with_condition(
                "primal value = dual value",
                value.clone(),
                Relation::Eq,
                dual_value,
                ok,
            )
        }
        _ => Comparison::with_condition("optimal outcome", count(0), Relation::Eq, count(0), false),
    };
    CertificateReport::new(
        "strong duality certificate",
        vec![ReportRow::new(RowKey::Named("lp".into()), vec![row])],
    )
    .with_note(format!("status: {}", status(outcome)))
}

fn lp_solve(file: &PathBuf, format: Format) -> Result<Output, Usage> {
    let p = read_problem(file)?;
    let outcome = lp::solve(&p).map_err(|e| Usage(e.to_string()))?;
    let verifies = match outcome {
        LpOutcome::Optimal { .. } => Some(lp::verify_certificate(&p, &outcome).unwrap_or(false)),
        _ => None,
    };
    let text = match format {
        Format::Json => {
            let doc = serde_json::json!({
                "schema": report::SCHEMA,
                "outcome": outcome,
                "certificate_verifies": verifies,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("json values serialize")
            )
        }
        _ => {
            let mut s = format!("status: {}\n", status(&outcome));
            if let LpOutcome::Optimal {
                value,
                primal,
                dual,
            } = &outcome
            {
                s.push_str(&format!("value: {}\n", display_with_approx(value)));
                s.push_str(&format!("primal: [{}]\n", join(primal)));
                s.push_str(&format!("dual: [{}]\n", join(dual)));
                s.push_str(&format!(
                    "certificate: {}\n",
                    report::verdict(verifies == Some(true))
                ));
            }
            s
        }
    };
    Ok(Output::Raw {
        text,
        pass: verifies != Some(false),
    })
}

fn status(o: &LpOutcome) -> &'static str {
    match o {
        LpOutcome::Optimal { .. } => "optimal",
        LpOutcome::Infeasible => "infeasible",
        LpOutcome::Unbounded => "unbounded",
    }
}

fn count(n: usize) -> Rational {
    rational::int(n as i64)
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
