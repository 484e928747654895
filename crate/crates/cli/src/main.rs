use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use commtop::clutching::{
    build_alpha_cocycle, clutch, invert, validate, CircleArc, Clutching, Diagnostics, PatchCocycle,
};
use commtop::coset_poset::{abelian_subgroups, CosetPoset};
use commtop::group::catalog;
use commtop::group::FiniteGroup;
use commtop::group_ring::{coinvariants, moore_h2, pi2_e2_connected};
use commtop::lattice::{AbelianGroupInvariants, IntMatrix};
use commtop::simplicial::{reduced_homology, Model, SimplicialTruncation};
use commtop::spec::{parse_cocycle, parse_extension, parse_group, CocycleSpec};
use commtop::torus::{parse_rational, single_commutator_cover, LatticeSummary, TorusExtension};
use commtop::verify::{run_all, CriterionResult};
use commtop::{Budget, Error};

const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "commtop", version, about = "Finite models for spaces of commuting elements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Maximum number of tuples an enumeration may touch.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Machine,
}

#[derive(Args)]
struct GroupArg {
    /// Catalog name (e.g. Q8, D8, Z2xZ4) or path to a group spec.
    #[arg(long)]
    group: String,
}

#[derive(Args)]
struct ExtArg {
    /// Catalog extension name (e.g. O2, NT_SU2) or path to an extension spec.
    #[arg(long)]
    ext: String,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of the commuting-tuples model B(2,G).
    HomologyB2g {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Reduced homology of E(2,G).
    HomologyE2g {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Coinvariants of the augmentation ideal.
    Coinvariants {
        #[command(flatten)]
        group: GroupArg,
    },
    /// H2 of the Moore complex of Z[C(A)].
    MooreH2 {
        #[command(flatten)]
        group: GroupArg,
    },
    /// pi2 of E(2,G) from the invariant factors of pi1(G).
    Pi2E2 {
        /// Comma separated invariant factors, e.g. 2,2.
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<u64>,
    },
    /// psi lattices of a torus extension.
    TorusAnalyze {
        #[command(flatten)]
        ext: ExtArg,
    },
    /// Single commutator cover of the denominator-N points of the subtorus.
    SingleComm {
        #[command(flatten)]
        ext: ExtArg,
        #[arg(long, default_value_t = 12)]
        denominator: u64,
        /// Denominator of the searched elements (default N·|F|).
        #[arg(long)]
        search_denominator: Option<u64>,
    },
    /// Validates a patch cocycle and computes its clutching class.
    Clutch {
        #[command(flatten)]
        ext: ExtArg,
        /// Path to a cocycle spec.
        #[arg(long, conflicts_with = "alpha")]
        cocycle: Option<PathBuf>,
        /// Build the cocycle from finite elements P,Q instead.
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<String>>,
        /// Direction of the x circle (comma separated integers).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x_dir: Option<Vec<i64>>,
        /// Direction of the y circle.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y_dir: Option<Vec<i64>>,
        /// Arc endpoint in (0, 1], as p/q.
        #[arg(long, default_value = "1")]
        endpoint: String,
        /// Clutch the pointwise inverse as well.
        #[arg(long)]
        invert: bool,
    },
    /// Reduced homology of the coset poset of abelian subgroups.
    CosetPoset {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Runs the acceptance criteria.
    VerifyAll {
        /// Pin the detail lines to this file; written when absent.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

/// A command result: text lines plus a machine document.
struct Report {
    text: Vec<String>,
    results: Vec<Value>,
    failed: bool,
}

impl Report {
    fn new() -> Self {
        Report {
            text: Vec::new(),
            results: Vec::new(),
            failed: false,
        }
    }

    fn row(&mut self, provenance: &str, value: impl Serialize) {
        let mut v = serde_json::to_value(value).expect("serializable");
        if let Value::Object(m) = &mut v {
            m.insert("provenance".into(), json!(provenance));
        }
        self.results.push(v);
    }
}

fn load_group(arg: &str) -> Result<FiniteGroup, Error> {
    if Path::new(arg).is_file() {
        parse_group(Path::new(arg))
    } else {
        catalog::group(arg)
    }
}

fn load_ext(arg: &str) -> Result<TorusExtension, Error> {
    if Path::new(arg).is_file() {
        parse_extension(Path::new(arg))
    } else {
        commtop::torus::catalog::extension(arg)
    }
}

fn show_list(h: &[AbelianGroupInvariants]) -> Vec<String> {
    h.iter().enumerate().map(|(i, x)| format!("H{i}: {x}")).collect()
}

fn matrix_text(m: &IntMatrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("({})", rows.join("; "))
}

fn homology_rows(report: &mut Report, provenance: &str, reduced: bool, h: &[AbelianGroupInvariants]) {
    report.text.extend(show_list(h).into_iter().map(|l| if reduced { format!("~{l}") } else { l }));
    for (degree, x) in h.iter().enumerate() {
        report.row(provenance, json!({"degree": degree, "reduced": reduced, "homology": x}));
    }
}

fn run(command: &Command, budget: &Budget) -> Result<Report, Error> {
    let mut r = Report::new();
    match command {
        Command::HomologyB2g { group, max_dim } => {
            let g = load_group(&group.group)?;
            let s = SimplicialTruncation::build(&g, Model::Commuting, max_dim + 1, budget)?;
            let h = s.homology_through(*max_dim, true)?;
            homology_rows(&mut r, "commuting tuples model", false, &h);
        }
        Command::HomologyE2g { group, max_dim } => {
            let g = load_group(&group.group)?;
            let h = reduced_homology(&g, Model::Homogeneous, *max_dim, budget)?;
            homology_rows(&mut r, "homogeneous model of E(2,G)", true, &h);
        }
        Command::Coinvariants { group } => {
            let h = coinvariants(&load_group(&group.group)?)?;
            r.text.push(h.to_string());
            r.row("coinvariants of the augmentation ideal", json!({"coinvariants": h}));
        }
        Command::MooreH2 { group } => {
            let h = moore_h2(&load_group(&group.group)?)?;
            r.text.push(h.to_string());
            r.row("Moore complex H2", json!({"moore_h2": h}));
        }
        Command::Pi2E2 { factors } => {
            let h = pi2_e2_connected(factors)?;
            r.text.push(h.to_string());
            r.row("pi2 for connected compact groups", json!({"pi1_factors": factors, "pi2": h}));
        }
        Command::TorusAnalyze { ext } => torus_analyze(&mut r, &load_ext(&ext.ext)?)?,
        Command::SingleComm {
            ext,
            denominator,
            search_denominator,
        } => {
            let e = load_ext(&ext.ext)?;
            let c = single_commutator_cover(&e, *denominator, *search_denominator, budget)?;
            r.text.push(format!(
                "N = {}, search denominator {}: {} targets, covered = {}",
                c.denominator,
                c.search_denominator,
                c.targets,
                c.covered()
            ));
            let witnesses: Vec<Value> = c
                .witnesses
                .iter()
                .map(|w| {
                    let target: Vec<String> = w.target.iter().map(ToString::to_string).collect();
                    r.text.push(format!(
                        "  ({}) = [{}, {}]",
                        target.join(", "),
                        e.display(&w.x),
                        e.display(&w.y)
                    ));
                    json!({"target": target, "x": e.display(&w.x), "y": e.display(&w.y)})
                })
                .collect();
            let missing: Vec<Vec<String>> = c
                .missing
                .iter()
                .map(|t| t.iter().map(ToString::to_string).collect())
                .collect();
            r.row(
                "single commutators on the subtorus",
                json!({
                    "extension": e.name(),
                    "denominator": c.denominator,
                    "search_denominator": c.search_denominator,
                    "targets": c.targets,
                    "covered": c.covered(),
                    "witnesses": witnesses,
                    "missing": missing,
                }),
            );
        }
        Command::Clutch {
            ext,
            cocycle,
            alpha,
            x_dir,
            y_dir,
            endpoint,
            invert: also_inverse,
        } => {
            let e = load_ext(&ext.ext)?;
            let c = match (cocycle, alpha) {
                (Some(path), _) => parse_cocycle(&e, path)?,
                (None, Some(pq)) => {
                    if pq.len() != 2 {
                        return Err(Error::InvalidPath("--alpha takes two elements P,Q".into()));
                    }
                    let find = |s: &str| {
                        e.finite()
                            .element(s)
                            .ok_or_else(|| Error::InvalidExtension(format!("unknown element '{s}'")))
                    };
                    let zero = vec![0; e.rank()];
                    let circle = CircleArc {
                        x_direction: x_dir.clone().unwrap_or_else(|| zero.clone()),
                        y_direction: y_dir.clone().unwrap_or(zero),
                        endpoint: parse_rational(endpoint)?,
                    };
                    build_alpha_cocycle(&e, find(&pq[0])?, find(&pq[1])?, &circle)?
                }
                (None, None) => {
                    return Err(Error::InvalidPath("give --cocycle or --alpha".into()));
                }
            };
            clutch_rows(&mut r, &e, "cocycle", &c)?;
            if *also_inverse {
                let inv = invert(&e, &c)?;
                clutch_rows(&mut r, &e, "inverse", &inv)?;
            }
        }
        Command::CosetPoset { group, max_dim } => {
            let g = load_group(&group.group)?;
            let subgroups = abelian_subgroups(&g, budget)?;
            let poset = CosetPoset::build(&g, budget)?;
            let h = poset.reduced_homology(*max_dim, budget)?;
            r.text.push(format!(
                "{} abelian subgroups, {} cosets, {} relations",
                subgroups.len(),
                poset.len(),
                poset.relation().len()
            ));
            r.row(
                "coset poset of abelian subgroups",
                json!({
                    "abelian_subgroups": subgroups.len(),
                    "subgroup_orders": subgroups.iter().map(|s| s.order()).collect::<Vec<_>>(),
                    "cosets": poset.len(),
                    "relations": poset.relation().len(),
                }),
            );
            homology_rows(&mut r, "coset poset of abelian subgroups", true, &h);
        }
        Command::VerifyAll { fixtures } => verify_all(&mut r, budget, fixtures.as_deref())?,
    }
    Ok(r)
}

fn torus_analyze(r: &mut Report, e: &TorusExtension) -> Result<(), Error> {
    let f = e.finite();
    r.text.push(format!("{}: rank {}, |F| = {}", e.name(), e.rank(), f.order()));
    for q in 0..f.order() {
        let m = e.psi_star(q);
        r.text.push(format!("  psi_star({}) = {}", f.name(q), matrix_text(&m)));
        r.row(
            "psi on the torus",
            json!({"element": f.name(q), "psi_star": m.to_rows().iter()
                .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>()}),
        );
    }
    let l = e.commutator_lattices();
    let (_, complement) = e.pi1_split()?;
    r.text.push(format!("sum = {}", l.sum));
    r.text.push(format!("subtorus = {}", l.subtorus));
    r.text.push(format!("complement = {}", complement));
    r.row(
        "commutator subtorus lattice",
        json!({
            "sum": LatticeSummary::from(&l.sum),
            "subtorus": LatticeSummary::from(&l.subtorus),
            "complement": LatticeSummary::from(&complement),
        }),
    );
    Ok(())
}

fn clutch_rows(r: &mut Report, e: &TorusExtension, which: &str, c: &PatchCocycle) -> Result<(), Error> {
    let d: Diagnostics = validate(e, c)?;
    r.text.push(format!("{which}: validate {}", if d.passed() { "passed" } else { "FAILED" }));
    for f in d.failures() {
        r.text.push(format!("  {} at {}: {}", f.condition, f.location, f.detail));
    }
    let cl: Clutching = clutch(e, c)?;
    r.text.push(format!("{which}: winding {}", cl.winding));
    r.row(
        "commutative cocycles and clutching",
        json!({
            "which": which,
            "cocycle": CocycleSpec::of(e, c),
            "diagnostics": d,
            "winding": cl.winding.class().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()),
            "identity_component": cl.winding.class().is_some(),
        }),
    );
    Ok(())
}

fn verify_all(r: &mut Report, budget: &Budget, fixtures: Option<&Path>) -> Result<(), Error> {
    let results: Vec<CriterionResult> = run_all(budget);
    for c in &results {
        r.text.push(c.line());
        for d in c.details.iter().filter(|d| d.starts_with("FAILED")) {
            r.text.push(format!("    {d}"));
        }
        r.failed |= !c.passed;
        r.row(c.provenance, c);
    }
    let passed = results.iter().filter(|c| c.passed).count();
    r.text.push(format!("{passed}/{} criteria passed", results.len()));
    if let Some(path) = fixtures {
        let current = serde_json::to_value(&results).expect("serializable");
        if path.exists() {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse { location: path.display().to_string(), message: e.to_string() })?;
            let pinned: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse { location: path.display().to_string(), message: e.to_string() })?;
            if pinned == current {
                r.text.push(format!("fixtures match {}", path.display()));
            } else {
                r.text.push(format!("fixtures DIFFER from {}", path.display()));
                r.failed = true;
            }
        } else {
            let text = serde_json::to_string_pretty(&current).expect("serializable");
            std::fs::write(path, text + "\n")
                .map_err(|e| Error::Parse { location: path.display().to_string(), message: e.to_string() })?;
            r.text.push(format!("fixtures written to {}", path.display()));
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::HomologyB2g { .. } => "homology-b2g",
        Command::HomologyE2g { .. } => "homology-e2g",
        Command::Coinvariants { .. } => "coinvariants",
        Command::MooreH2 { .. } => "moore-h2",
        Command::Pi2E2 { .. } => "pi2-e2",
        Command::TorusAnalyze { .. } => "torus-analyze",
        Command::SingleComm { .. } => "single-comm",
        Command::Clutch { .. } => "clutch",
        Command::CosetPoset { .. } => "coset-poset",
        Command::VerifyAll { .. } => "verify-all",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget::new(cli.global.budget);
    let name = command_name(&cli.command);
    match run(&cli.command, &budget) {
        Ok(report) => {
            match cli.global.output {
                Output::Text => {
                    for line in &report.text {
                        println!("{line}");
                    }
                }
                Output::Machine => {
                    let doc = json!({
                        "version": FORMAT_VERSION,
                        "command": name,
                        "status": if report.failed { "failed" } else { "ok" },
                        "results": report.results,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
                }
            }
            if report.failed {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let code = if e.is_budget() {
                3
            } else if e.is_invariant_failure() {
                4
            } else {
                2
            };
            if cli.global.output == Output::Machine {
                let doc = json!({
                    "version": FORMAT_VERSION,
                    "command": name,
                    "status": "error",
                    "exit_code": code,
                    "error": e.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
