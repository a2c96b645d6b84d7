//! `hjcouple` command-line driver.

mod config;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hjcouple::experiment::{convergence_table, errors_at_final_time, Experiment, SchemeKind};
use hjcouple::problems::{singular_points, ProblemSpec};

use config::{parse_ladder, parse_list, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "hjcouple", version, about = "Coupled semi-Lagrangian / Ultra-Bee experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scheme and write snapshots, TV trace, errors and a manifest.
    Run(RunArgs),
    /// Error table over a refinement ladder.
    Convergence(ConvergenceArgs),
    /// Several schemes at one resolution, side by side.
    Compare(CompareArgs),
    /// Registered problems and their defaults.
    ListProblems,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Domain override `a,b`.
    #[arg(long)]
    domain: Option<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "coupled")]
    scheme: SchemeKind,
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated step indices.
    #[arg(long)]
    snapshots: Option<String>,
    /// Replay the configuration stored in a manifest written by an earlier run.
    #[arg(long, conflicts_with = "problem")]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "coupled")]
    scheme: SchemeKind,
    /// Preset (`ex1`..`ex4`) or comma-separated cell counts; defaults to the problem ladder.
    #[arg(long)]
    ladder: Option<String>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated schemes; a scheme may be repeated.
    #[arg(long, default_value = "sl,ub,coupled")]
    scheme: String,
    #[arg(long)]
    m: Option<usize>,
}

type AnyResult<T> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Convergence(a) => cmd_convergence(a),
        Command::Compare(a) => cmd_compare(a),
        Command::ListProblems => cmd_list(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn overrides(c: &Common, m: Option<usize>, snapshots: Option<&str>) -> AnyResult<Overrides> {
    let domain = match &c.domain {
        None => None,
        Some(s) => {
            let (a, b) = s.split_once(',').ok_or("--domain expects `a,b`")?;
            Some((a.trim().parse()?, b.trim().parse()?))
        }
    };
    Ok(Overrides {
        domain,
        m,
        nu: c.nu,
        t_final: c.t_final,
        delta: c.delta,
        epsilon: c.epsilon,
        snapshots: snapshots.map(parse_list).transpose()?,
    })
}

impl Common {
    fn problem(&self) -> AnyResult<&str> {
        self.problem.as_deref().ok_or_else(|| "--problem is required".into())
    }
}

fn out_dir(p: &Path) -> AnyResult<()> {
    fs::create_dir_all(p).map_err(|e| format!("cannot create {}: {e}", p.display()).into())
}

fn cmd_run(a: RunArgs) -> AnyResult<()> {
    let cfg = match &a.manifest {
        Some(path) => {
            let cfg = RunConfig::from_manifest(&fs::read_to_string(path)?)?;
            cfg.validate()?;
            cfg
        }
        None => {
            let o = overrides(&a.common, a.m, a.snapshots.as_deref())?;
            RunConfig::resolve(a.common.problem()?, a.scheme, &o, a.common.out.clone())?
        }
    };
    let run = cfg.experiment()?.run()?;
    out_dir(&cfg.out)?;
    for s in &run.snapshots {
        output::write(&cfg.out, &format!("sol_{}_step{}.csv", cfg.scheme, s.step), &output::solution_csv(&s.field))?;
        if let Some(sigma) = &s.sigma {
            output::write(&cfg.out, &format!("sigma_step{}.csv", s.step), &output::sigma_csv(&s.field, sigma.values()))?;
        }
    }
    let tv = run.tv.tv.iter().zip(&run.tv.bound).enumerate();
    let tv = output::columns(&["step", "tv", "bound"], tv.map(|(n, (t, b))| vec![n.to_string(), output::num(*t), output::num(*b)]));
    output::write(&cfg.out, "tv.csv", &tv)?;
    let errors = output::columns(&output::ERROR_HEADER, [output::error_fields(&run.errors)]);
    output::write(&cfg.out, "errors.csv", &errors)?;
    output::write(&cfg.out, "manifest.txt", &cfg.to_manifest())?;
    println!(
        "{} / {}: m={} dt={} steps={} l1={} linf={} tv violations={}",
        cfg.problem,
        cfg.scheme,
        cfg.m,
        output::short(run.time.dt()),
        run.time.n_steps(),
        output::short(run.errors.l1),
        output::short(run.errors.linf),
        run.tv.violations.len()
    );
    Ok(())
}

fn cmd_convergence(a: ConvergenceArgs) -> AnyResult<()> {
    let spec = ProblemSpec::named(a.common.problem()?)?;
    let ladder = match &a.ladder {
        Some(s) => parse_ladder(s)?,
        None => spec.ladder.clone(),
    };
    let o = overrides(&a.common, Some(ladder[0]), Some(""))?;
    let cfg = RunConfig::resolve(a.common.problem()?, a.scheme, &o, a.common.out.clone())?;
    let base = cfg.experiment()?;
    let table = convergence_table(&base, &ladder)?;
    let with_reg = !singular_points(&base.problem, cfg.t_final, 1.0).is_empty();
    let (text, csv) = output::convergence(&table, with_reg);
    out_dir(&cfg.out)?;
    let stem = format!("convergence_{}_{}", cfg.problem, cfg.scheme);
    output::write(&cfg.out, &format!("{stem}.txt"), &text)?;
    output::write(&cfg.out, &format!("{stem}.csv"), &csv)?;
    print!("{text}");
    Ok(())
}

fn cmd_compare(a: CompareArgs) -> AnyResult<()> {
    let schemes: Vec<SchemeKind> = a.scheme.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
    if schemes.is_empty() {
        return Err("no scheme given".into());
    }
    let o = overrides(&a.common, a.m, Some(""))?;
    let mut errors = Vec::new();
    let mut columns = Vec::new();
    let mut base: Option<Experiment> = None;
    for &scheme in &schemes {
        let cfg = RunConfig::resolve(a.common.problem()?, scheme, &o, a.common.out.clone())?;
        let exp = cfg.experiment()?;
        let run = exp.run()?;
        let e = errors_at_final_time(&exp.problem, &run.field, cfg.t_final, run.time.dt())?;
        let mut row = vec![scheme.to_string()];
        row.extend(output::error_fields(&e));
        errors.push(row);
        columns.push(output::at_nodes(&run.field));
        base.get_or_insert(exp);
    }
    let exp = base.expect("at least one scheme");
    let grid = exp.grid()?;
    out_dir(&a.common.out)?;
    let mut header = vec!["scheme"];
    header.extend(output::ERROR_HEADER);
    output::write(&a.common.out, "compare_errors.csv", &output::columns(&header, errors))?;

    let names: Vec<String> = schemes.iter().map(|s| s.to_string()).collect();
    let mut header = vec!["x", "exact"];
    header.extend(names.iter().map(String::as_str));
    let rows = grid.nodes().into_iter().enumerate().map(|(j, x)| {
        let mut r = vec![output::num(x), output::num(exp.problem.exact(x, exp.t_final))];
        r.extend(columns.iter().map(|c| output::num(c[j])));
        r
    });
    output::write(&a.common.out, "compare_solution.csv", &output::columns(&header, rows))?;
    print!("{}", fs::read_to_string(a.common.out.join("compare_errors.csv"))?);
    Ok(())
}

fn cmd_list() -> AnyResult<()> {
    for p in ProblemSpec::all() {
        let ladder: Vec<String> = p.ladder.iter().map(usize::to_string).collect();
        println!(
            "{:<11} domain=({}, {}) T={} nu={} ladder={}  {}",
            p.name,
            p.domain.0,
            p.domain.1,
            p.t_final,
            p.nu,
            ladder.join(","),
            p.summary
        );
    }
    Ok(())
}
