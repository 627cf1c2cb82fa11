//! Command-line front end. Every subcommand builds a JSON report; the text
//! format is a readable rendering of the same data.
//!
//! Formula arguments follow the grammar of [`crate::formula::parse`]. An
//! argument of the form `@path` is read from that file.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::rat::{self, Q};
use crate::cad::decompose::decompose;
use crate::cad::lift::CadOptions;
use crate::cad::qe::{dimension, qe};
use crate::dlwitness::{lift_jet, verify_residual};
use crate::error::{Error, Result};
use crate::formula::ast::to_algebraic;
use crate::formula::parse::{parse, parse_algebraic, parse_poly, parse_poly_list};
use crate::formula::render::{formula_to_string, poly_to_string};
use crate::formula::{star_translate, to_dnf};
use crate::localgroup::{check_local_group, mutate, GroupSpec};
use crate::starmap::{t_dim, uf_bound};
use crate::triangulate::{qe_exists_diff, triangulate_with, TriOptions};

#[derive(Parser, Debug)]
#[command(name = "codfkit", version, about = "Exact tooling for closed ordered differential fields")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Most variables a decomposition may involve
    #[arg(long, default_value_t = 4, global = true)]
    pub max_vars: usize,
    /// Highest polynomial degree a decomposition accepts
    #[arg(long, default_value_t = 6, global = true)]
    pub max_degree: u32,
    /// Most branches a triangulation may produce
    #[arg(long, default_value_t = crate::triangulate::branch::DEFAULT_MAX_BRANCHES, global = true)]
    pub max_branches: usize,
    /// Truncation order for dl-lift (default 8); jet order for carve-group and check-group (default: from the file)
    #[arg(long = "order", global = true)]
    pub order: Option<u32>,
    /// Seed for the random sampling that precedes exact searches
    #[arg(long, default_value_t = 7, global = true)]
    pub seed: u64,
    /// Variable order, comma separated (default: sorted free variables)
    #[arg(long, value_delimiter = ',', global = true)]
    pub var_order: Option<Vec<String>>,
    /// Worker threads; the decision procedures run on one thread and accept any positive value
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Disjunctive normal form of a quantifier-free formula
    Normalize { formula: String },
    /// Jet translation of a quantifier-free differential formula
    Star { formula: String },
    /// Regular branches of a system of equations in one variable
    Triangulate {
        /// Comma-separated polynomials
        polys: String,
        /// Variable to triangulate in
        #[arg(long = "var")]
        var: String,
    },
    /// Sign-invariant cylindrical decomposition of polynomials
    Cells {
        /// Comma-separated polynomials
        polys: String,
    },
    /// Dimension of a semialgebraic set
    Dim { formula: String },
    /// Topological dimension of the jet set of a differential formula
    Tdim { formula: String },
    /// Real quantifier elimination
    Qe { formula: String },
    /// Elimination of one differential existential quantifier
    QeDiff { formula: String },
    /// Bound on the size of finite fibers
    UfBound {
        formula: String,
        /// Object variable; the other free variables are parameters
        #[arg(long = "var")]
        var: String,
    },
    /// Power-series solution of f = 0 through an initial jet
    DlLift {
        /// Differential polynomial in one indeterminate
        #[arg(long = "f")]
        f: String,
        /// Initial jet, comma separated
        #[arg(long, value_delimiter = ',')]
        jet: Vec<String>,
    },
    /// Carve a local group from a group description file
    CarveGroup { file: String },
    /// Check the local group axioms, including any mutations in the file
    CheckGroup { file: String },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let format = cli.flags.format;
    match execute(&cli) {
        Ok((j, text)) => {
            let stdout = match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&j).expect("json renders")),
                Format::Text => format!("{text}\n"),
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => {
            let stderr = match format {
                Format::Json => format!("{}\n", json!({"error": e.to_string(), "exit_code": e.exit_code()})),
                Format::Text => format!("error: {e}\n"),
            };
            Outcome { code: e.exit_code(), stdout: String::new(), stderr }
        }
    }
}

fn input(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::user(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn cad_options(f: &Flags) -> CadOptions {
    CadOptions { max_vars: f.max_vars, max_degree: f.max_degree, seed: f.seed, ..Default::default() }
}

fn variables(flags: &Flags, free: impl IntoIterator<Item = String>) -> Result<Vec<String>> {
    let free: Vec<String> = free.into_iter().collect();
    match &flags.var_order {
        None => Ok(free),
        Some(order) => {
            if let Some(v) = free.iter().find(|v| !order.contains(v)) {
                return Err(Error::user(format!("variable {v} is missing from --var-order")));
            }
            Ok(order.clone())
        }
    }
}

fn pretty(j: &Value) -> String {
    serde_json::to_string_pretty(j).expect("json renders")
}

fn execute(cli: &Cli) -> Result<(Value, String)> {
    let flags = &cli.flags;
    let opts = cad_options(flags);
    match &cli.command {
        Command::Normalize { formula } => {
            let phi = parse(&input(formula)?)?;
            if !phi.is_quantifier_free() {
                return Err(Error::user("normalize needs a quantifier-free formula"));
            }
            let d = formula_to_string(&to_dnf(&phi)?);
            Ok((json!({"formula": d}), d))
        }
        Command::Star { formula } => {
            let phi = parse(&input(formula)?)?;
            let (s, ctx) = star_translate(&phi)?;
            let text = formula_to_string(&s);
            let n = ctx.dimension();
            let j = json!({"formula": text, "N": n, "coords": ctx.coords()});
            Ok((j, format!("{text}\nN = {n}")))
        }
        Command::Triangulate { polys, var } => {
            let ps = parse_poly_list(&input(polys)?)?
                .into_iter()
                .map(|p| {
                    if p.vars().iter().any(|v| v.order > 0) {
                        return Err(Error::user("triangulate takes polynomials without derivatives"));
                    }
                    Ok(p.map_vars(|v| v.name.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            let t = triangulate_with(&ps, var, &TriOptions { max_branches: flags.max_branches, ..Default::default() })?;
            let text = t.branches.iter().map(|b| formula_to_string(&b.to_formula())).collect::<Vec<_>>().join("\n");
            let j = json!({"branches": t.branches.iter().map(|b| b.to_json()).collect::<Vec<_>>()});
            Ok((j, text))
        }
        Command::Cells { polys } => {
            let ps = parse_poly_list(&input(polys)?)?
                .into_iter()
                .map(|p| {
                    if p.vars().iter().any(|v| v.order > 0) {
                        return Err(Error::user("cells takes polynomials without derivatives"));
                    }
                    Ok(p.map_vars(|v| v.name.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut free: Vec<String> = ps.iter().flat_map(|p| p.vars()).collect();
            free.sort();
            free.dedup();
            let vars = variables(flags, free)?;
            let d = decompose(&ps, &vars, &opts)?;
            let text = d
                .cells
                .iter()
                .map(|c| format!("{:?} dim {}: {}", c.index, c.dim, formula_to_string(&c.description)))
                .collect::<Vec<_>>()
                .join("\n");
            let mut j = d.to_json();
            j["vars"] = json!(vars);
            Ok((j, format!("{} cells\n{text}", d.cells.len())))
        }
        Command::Dim { formula } => {
            let phi = parse_algebraic(&input(formula)?)?;
            let vars = variables(flags, phi.free_vars())?;
            let d = dimension(&phi, &vars, &opts)?;
            Ok((json!({"dim": d, "vars": vars}), d.to_string()))
        }
        Command::Tdim { formula } => {
            let phi = parse(&input(formula)?)?;
            let vars = variables(flags, phi.free_vars())?;
            let d = t_dim(&phi, &vars, &opts)?;
            Ok((json!({"t_dim": d, "vars": vars}), d.to_string()))
        }
        Command::Qe { formula } => {
            let phi = parse_algebraic(&input(formula)?)?;
            let r = formula_to_string(&qe(&phi, &opts)?);
            Ok((json!({"formula": r}), r))
        }
        Command::QeDiff { formula } => {
            let phi = parse(&input(formula)?)?;
            let r = qe_exists_diff(&phi, &opts)?;
            let text = formula_to_string(&r);
            Ok((json!({"formula": text, "algebraic": to_algebraic(&r).is_some()}), text))
        }
        Command::UfBound { formula, var } => {
            let phi = parse(&input(formula)?)?;
            let free = phi.free_vars().into_iter().filter(|v| v != var);
            let params = variables(flags, free)?.into_iter().filter(|v| v != var).collect::<Vec<_>>();
            let b = uf_bound(&phi, var, &params, &opts)?;
            Ok((json!({"bound": b, "var": var, "params": params}), b.to_string()))
        }
        Command::DlLift { f, jet } => {
            let f = parse_poly(&input(f)?)?;
            let alpha = jet
                .iter()
                .map(|s| rat::parse(s.trim()).ok_or_else(|| Error::user(format!("not a rational number: {s}"))))
                .collect::<Result<Vec<Q>>>()?;
            let k = flags.order.unwrap_or(8) as usize;
            let z = lift_jet(&f, &alpha, k)?;
            let residual = verify_residual(&f, &z);
            let mut j = z.to_json();
            j["f"] = json!(poly_to_string(&f));
            j["order"] = json!(k);
            j["derivatives"] = json!(z.derivatives().iter().map(rat::render).collect::<Vec<_>>());
            j["verified_residual"] = residual.map(|r| json!(r)).unwrap_or(json!("inf"));
            let text = z.coefficients.iter().enumerate().map(|(i, c)| format!("t^{i}: {}", rat::render(c))).collect::<Vec<_>>().join("\n");
            Ok((j, text))
        }
        Command::CarveGroup { file } => {
            let spec = group_spec(file, flags)?;
            let d = spec.carve(&opts)?;
            Ok((d.to_json(), pretty(&d.to_json())))
        }
        Command::CheckGroup { file } => {
            let spec = group_spec(file, flags)?;
            let d = spec.carve(&opts)?;
            let base = check_local_group(&d, &opts);
            let mut text = vec![format!("carved:\n{}", base.to_text())];
            let mut muts = Vec::new();
            for m in &spec.mutations {
                let r = check_local_group(&mutate(&d, m)?, &opts);
                let failing: Vec<&str> = r.failing();
                let flips = m.intended.iter().all(|n| failing.contains(&n.as_str()))
                    && failing.iter().filter(|n| n.starts_with("lg")).all(|n| m.intended.iter().any(|i| i == n));
                text.push(format!("{} (intended {}):\n{}", m.name, m.intended.join(", "), r.to_text()));
                muts.push(json!({"name": m.name, "intended": m.intended, "as_intended": flips, "report": r.to_json()}));
            }
            let j = json!({"report": base.to_json(), "all_pass": base.all_pass(), "mutations": muts});
            Ok((j, text.join("\n")))
        }
    }
}

fn group_spec(file: &str, flags: &Flags) -> Result<GroupSpec> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::user(format!("cannot read {file}: {e}")))?;
    let mut spec = GroupSpec::from_json(&text)?;
    if let Some(o) = flags.order {
        spec.order = o;
    }
    Ok(spec)
}
