//! `gramcalc`: triangles, formal derivatives, closed-form series,
//! labelings, block decompositions, bijections onto increasing trees, and
//! the identity verification suite, from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gramcalc::bijection::{
    expected_transport, phi_inverse, phi_traced, transported_statistic,
    transported_statistic_name, MapKind,
};
use gramcalc::grammar::Grammar;
use gramcalc::identities::{registry_ids, verify_suite, CheckParams};
use gramcalc::labeling::{a_labeling, decompose, l_labeling, render_labeled, DecompKind};
use gramcalc::permstat::{
    lambda_triangle, stat, triangle, Permutation, StatKind, StatTriangle,
};
use gramcalc::poly::LaurentPoly;
use gramcalc::series::{closed_form, FormulaId};
use gramcalc::trees::IncreasingTree;

#[derive(Parser)]
#[command(
    name = "gramcalc",
    version,
    about = "Exact calculus for peak and run statistics of permutations",
    after_help = "Environment: GRAMCALC_BRUTE_MAX overrides the permutation \
                  enumeration bound (default 10); GRAMCALC_TREE_MAX the tree \
                  enumeration bound (default 8)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Recurrence,
}

#[derive(Subcommand)]
enum Command {
    /// Count a statistic over all permutations of [n]
    Triangle {
        /// Statistic: leftpeak | interiorpeak | exteriorpeak | updownrun | altrun
        #[arg(long)]
        stat: String,
        #[arg(long)]
        n: usize,
        /// brute enumerates S_n; recurrence covers up-down runs at any n
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Iterated formal derivatives of a polynomial under a grammar
    Derive {
        /// peak | run | h | uv | euler | andre | inline:<rules>
        #[arg(long)]
        grammar: String,
        /// Seed polynomial, e.g. "a" or "x^-1*y"
        #[arg(long)]
        seed: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// A named closed-form generating function, truncated
    Series {
        /// bg | genx | gen_xinv_y | geny | m_bivariate | stanley_num |
        /// stanley_den | gena_num | gena_den | cosh_rho | sinh_over_rho
        #[arg(long)]
        formula: String,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Grammatical labeling of a permutation
    Label {
        /// a (up-down runs) | l (left peaks)
        #[arg(long)]
        scheme: String,
        /// Comma-separated permutation, e.g. 3,7,5,8,6,1,4,9,2
        #[arg(long)]
        perm: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// LW- or AL-block decomposition of a permutation
    Decompose {
        /// lw | al
        #[arg(long)]
        kind: String,
        #[arg(long)]
        perm: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Map a permutation to an increasing tree, or invert a tree
    Biject {
        /// updown | leftpeak | exterior | unified
        #[arg(long)]
        map: String,
        #[arg(long, conflicts_with = "tree")]
        perm: Option<String>,
        /// Parent array as JSON {"n":..,"parent":[..]} or a bare list 0,1,0
        #[arg(long)]
        tree: Option<String>,
        /// Also print the insertion table
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run identity checks; exits 1 if any fail
    Verify {
        /// "all" or a comma-separated list of identity ids
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Triangle {
            stat,
            n,
            method,
            format,
        } => cmd_triangle(&stat, n, method, format),
        Command::Derive {
            grammar,
            seed,
            n,
            format,
        } => cmd_derive(&grammar, &seed, n, format),
        Command::Series {
            formula,
            order,
            format,
        } => cmd_series(&formula, order, format),
        Command::Label {
            scheme,
            perm,
            format,
        } => cmd_label(&scheme, &perm, format),
        Command::Decompose { kind, perm, format } => cmd_decompose(&kind, &perm, format),
        Command::Biject {
            map,
            perm,
            tree,
            trace,
            format,
        } => cmd_biject(&map, perm.as_deref(), tree.as_deref(), trace, format),
        Command::Verify {
            suite,
            nmax,
            order,
            format,
        } => cmd_verify(&suite, nmax, order, format),
    }
}

fn no_csv(format: Format) -> Result<(), String> {
    if format == Format::Csv {
        Err("csv output is available for `triangle` only".into())
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct TriangleRow {
    n: usize,
    k: usize,
    count: String,
}

#[derive(Serialize)]
struct TriangleOut {
    kind: String,
    n: usize,
    method: String,
    rows: Vec<TriangleRow>,
}

fn cmd_triangle(stat: &str, n: usize, method: Method, format: Format) -> Result<ExitCode, String> {
    let kind: StatKind = stat.parse().map_err(|e| format!("{e}"))?;
    let t: StatTriangle = match method {
        Method::Brute => triangle(kind, n).map_err(|e| format!("{e}"))?,
        Method::Recurrence => {
            if kind != StatKind::UpDownRun {
                return Err("the recurrence method covers up-down runs only".into());
            }
            lambda_triangle(n)
        }
    };
    let rows: Vec<TriangleRow> = t
        .rows()
        .into_iter()
        .map(|(k, count)| TriangleRow {
            n,
            k,
            count: count.to_string(),
        })
        .collect();
    match format {
        Format::Csv => {
            for r in &rows {
                println!("{},{},{}", r.n, r.k, r.count);
            }
        }
        Format::Table => {
            println!("{} triangle row n={n} (k: count)", kind.name());
            for r in &rows {
                println!("  {:>3}: {}", r.k, r.count);
            }
        }
        Format::Json => {
            let out = TriangleOut {
                kind: kind.name().into(),
                n,
                method: match method {
                    Method::Brute => "brute".into(),
                    Method::Recurrence => "recurrence".into(),
                },
                rows,
            };
            println!("{}", serde_json::to_string(&out).unwrap());
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DeriveRow {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct DeriveOut {
    grammar: String,
    seed: String,
    values: Vec<DeriveRow>,
}

fn parse_grammar(name: &str) -> Result<Grammar, String> {
    if let Some(rules) = name.strip_prefix("inline:") {
        Grammar::parse(rules).map_err(|e| format!("{e}"))
    } else {
        Grammar::preset(name).map_err(|e| format!("{e}"))
    }
}

fn cmd_derive(grammar: &str, seed: &str, n: usize, format: Format) -> Result<ExitCode, String> {
    no_csv(format)?;
    let g = parse_grammar(grammar)?;
    let f = LaurentPoly::parse(seed).map_err(|e| format!("{e}"))?;
    let mut values = Vec::with_capacity(n + 1);
    let mut cur = f.clone();
    for i in 0..=n {
        values.push(DeriveRow {
            n: i,
            value: cur.to_string(),
        });
        if i < n {
            cur = g.derive(&cur);
        }
    }
    match format {
        Format::Table => {
            for row in &values {
                println!("D^{}({seed}) = {}", row.n, row.value);
            }
        }
        Format::Json => {
            let out = DeriveOut {
                grammar: grammar.into(),
                seed: seed.into(),
                values,
            };
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Csv => unreachable!(),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SeriesRow {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct SeriesOut {
    formula: String,
    order: usize,
    rho_sq: String,
    coeffs: Vec<SeriesRow>,
}

fn cmd_series(formula: &str, order: usize, format: Format) -> Result<ExitCode, String> {
    no_csv(format)?;
    let id: FormulaId = formula.parse().map_err(|e| format!("{e}"))?;
    let s = closed_form(id, order);
    let coeffs: Vec<SeriesRow> = (0..=order)
        .map(|n| SeriesRow {
            n,
            value: s.coeff(n).to_string(),
        })
        .collect();
    match format {
        Format::Table => {
            println!("{} truncated at order {order} (rho^2 = {})", id.name(), s.rho_sq());
            for row in &coeffs {
                println!("t^{}: {}", row.n, row.value);
            }
        }
        Format::Json => {
            let out = SeriesOut {
                formula: id.name().into(),
                order,
                rho_sq: s.rho_sq().to_string(),
                coeffs,
            };
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Csv => unreachable!(),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct LabelOut {
    scheme: String,
    perm: Vec<u32>,
    labels: Vec<String>,
    rendered: String,
    weight: String,
}

fn cmd_label(scheme: &str, perm: &str, format: Format) -> Result<ExitCode, String> {
    no_csv(format)?;
    let sigma = Permutation::parse(perm).map_err(|e| format!("{e}"))?;
    if sigma.n() == 0 {
        return Err("labelings need n >= 1".into());
    }
    let ls = match scheme {
        "a" => a_labeling(&sigma),
        "l" => l_labeling(&sigma),
        other => return Err(format!("unknown scheme {other:?} (expected a or l)")),
    };
    let rendered = render_labeled(&sigma, &ls);
    let weight = ls.weight().to_string();
    match format {
        Format::Table => {
            println!("{rendered}");
            println!("weight: {weight}");
        }
        Format::Json => {
            let out = LabelOut {
                scheme: scheme.into(),
                perm: sigma.values().to_vec(),
                labels: ls.labels().iter().map(|l| l.to_string()).collect(),
                rendered,
                weight,
            };
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Csv => unreachable!(),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DecomposeOut {
    kind: String,
    perm: Vec<u32>,
    blocks: Vec<Vec<u32>>,
}

fn cmd_decompose(kind: &str, perm: &str, format: Format) -> Result<ExitCode, String> {
    no_csv(format)?;
    let k: DecompKind = kind.parse().map_err(|e| format!("{e}"))?;
    let sigma = Permutation::parse(perm).map_err(|e| format!("{e}"))?;
    let d = decompose(k, &sigma);
    match format {
        Format::Table => println!("{d}"),
        Format::Json => {
            let out = DecomposeOut {
                kind: kind.into(),
                perm: sigma.values().to_vec(),
                blocks: d.blocks().to_vec(),
            };
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Csv => unreachable!(),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TreeOut {
    n: usize,
    parent: Vec<u32>,
}

#[derive(Serialize)]
struct StatReport {
    name: String,
    value: usize,
}

#[derive(Serialize)]
struct BijectOut {
    map: String,
    perm: Vec<u32>,
    tree: TreeOut,
    perm_stat: StatReport,
    tree_stat: StatReport,
}

fn perm_side_stat(kind: MapKind) -> StatKind {
    match kind {
        MapKind::UpDown => StatKind::UpDownRun,
        MapKind::LeftPeak => StatKind::LeftPeak,
        MapKind::Exterior | MapKind::Unified => StatKind::ExteriorPeak,
    }
}

fn parse_tree_arg(s: &str) -> Result<IncreasingTree, String> {
    if s.trim_start().starts_with('{') {
        IncreasingTree::from_json(s).map_err(|e| format!("{e}"))
    } else {
        let parents = s
            .split(',')
            .map(|part| part.trim().parse::<u32>().map_err(|e| format!("{part:?}: {e}")))
            .collect::<Result<Vec<u32>, String>>()?;
        IncreasingTree::new(parents).map_err(|e| format!("{e}"))
    }
}

fn cmd_biject(
    map: &str,
    perm: Option<&str>,
    tree: Option<&str>,
    trace: bool,
    format: Format,
) -> Result<ExitCode, String> {
    no_csv(format)?;
    let kind: MapKind = map.parse().map_err(|e| format!("{e}"))?;
    let (sigma, t, trace_text) = match (perm, tree) {
        (Some(p), None) => {
            let sigma = Permutation::parse(p).map_err(|e| format!("{e}"))?;
            if sigma.n() == 0 {
                return Err("the bijections need n >= 1".into());
            }
            let (t, tr) = phi_traced(kind, &sigma);
            (sigma, t, trace.then(|| tr.to_string()))
        }
        (None, Some(spec)) => {
            let t = parse_tree_arg(spec)?;
            if t.n() == 0 {
                return Err("the bijections need n >= 1".into());
            }
            let sigma = phi_inverse(kind, &t);
            let tr = trace.then(|| phi_traced(kind, &sigma).1.to_string());
            (sigma, t, tr)
        }
        _ => return Err("pass exactly one of --perm or --tree".into()),
    };
    let pstat = perm_side_stat(kind);
    let out = BijectOut {
        map: kind.name().into(),
        perm: sigma.values().to_vec(),
        tree: TreeOut {
            n: t.n(),
            parent: t.parents().to_vec(),
        },
        perm_stat: StatReport {
            name: pstat.name().into(),
            value: stat(pstat, sigma.values()),
        },
        tree_stat: StatReport {
            name: transported_statistic_name(kind).into(),
            value: transported_statistic(kind, &t),
        },
    };
    debug_assert_eq!(
        transported_statistic(kind, &t),
        expected_transport(kind, &sigma)
    );
    match format {
        Format::Table => {
            if let Some(text) = &trace_text {
                print!("{text}");
            }
            println!("perm: {sigma}");
            println!("tree: {}", t.to_json());
            println!("{}(perm) = {}", out.perm_stat.name, out.perm_stat.value);
            println!("{}(tree) = {}", out.tree_stat.name, out.tree_stat.value);
        }
        Format::Json => {
            if let Some(text) = &trace_text {
                eprint!("{text}");
            }
            println!("{}", serde_json::to_string(&out).unwrap());
        }
        Format::Csv => unreachable!(),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: &str, nmax: usize, order: usize, format: Format) -> Result<ExitCode, String> {
    no_csv(format)?;
    let params = CheckParams {
        n_max: nmax,
        order,
    };
    let all = registry_ids();
    let ids: Vec<&str> = if suite == "all" {
        all
    } else {
        suite.split(',').map(str::trim).collect()
    };
    let reports = verify_suite(&ids, &params).map_err(|e| format!("{e}"))?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    match format {
        Format::Table => {
            for r in &reports {
                if r.pass {
                    println!("{:<22} pass", r.id);
                } else {
                    println!(
                        "{:<22} FAIL  {}",
                        r.id,
                        r.witness.clone().unwrap_or_default()
                    );
                }
            }
            println!(
                "{} checks, {} failed (nmax={nmax}, order={order})",
                reports.len(),
                failed
            );
        }
        Format::Json => println!("{}", serde_json::to_string(&reports).unwrap()),
        Format::Csv => unreachable!(),
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
