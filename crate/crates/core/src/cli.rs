//! Command-line front end.
//!
//! Exit codes: 0 = all checks pass, 1 = input error, 2 = invariant or
//! verification failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::extension::{
    area_lipschitz_constant, assemble_z, build_dyadic_area, check_family_condition,
    dyadic_times, integrate_family, AreaSeed, ParametricFamily,
};
use crate::flow::{
    lipschitz_in_tau_worst, lipschitz_probe, probe_pairs, residual, solve_global, solve_local,
    EulerOptions, FlowSolution, VectorField, YoungCrossField, ZeroField,
};
use crate::io;
use crate::roughpath::{
    dist_level_exponent, dist_p, dist_q, q_bound_constant, GridRoughPath, Phi,
};

#[derive(Parser)]
#[command(
    name = "roughflow",
    about = "p-rough path numerics: lifts, metrics, dyadic extensions, flow equations",
    version
)]
pub struct Cli {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true)]
    p: Option<f64>,

    #[arg(long, global = true)]
    q: Option<f64>,

    /// Dyadic depth N.
    #[arg(long, global = true)]
    depth: Option<usize>,

    /// Area seed constant C0.
    #[arg(long, global = true)]
    c0: Option<f64>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    chen_tol: Option<f64>,

    #[arg(long, global = true)]
    equiv_tol: Option<f64>,

    #[arg(long, global = true)]
    cauchy_tol: Option<f64>,

    /// Decreasing ε schedule, comma separated.
    #[arg(long, global = true)]
    schedule: Option<String>,

    /// Ball radius for local solves.
    #[arg(long, global = true)]
    r: Option<f64>,

    /// Flow horizon (also the cap on degenerate interval lengths).
    #[arg(long, global = true)]
    horizon: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonically lift a CSV path (header t,x1,...,xd) to a rough path.
    Lift {
        /// Input CSV.
        input: PathBuf,
        /// Output rough-path JSON.
        #[arg(long)]
        output: PathBuf,
    },
    /// p-variation of a stored rough path, both tensor levels.
    Pvar {
        input: PathBuf,
    },
    /// d_p, d_q and the q-vs-p bound constant for two stored rough paths.
    Dist {
        left: PathBuf,
        right: PathBuf,
    },
    /// Verify Chen's identity at every grid triple.
    ChenCheck {
        input: PathBuf,
    },
    /// Build the dyadic area for a parametric family and verify the
    /// parameter-Lipschitz estimates.
    Extend {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 0.75)]
        delta: f64,
        /// Output area JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Integrate a family against a discrete measure.
    Integrate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Measure atoms as eps:weight pairs, e.g. "0.25:0.5,0.75:0.5".
        #[arg(long)]
        measure: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the Euler flow solver (ε-schedule, optionally global chaining).
    Flow {
        /// Initial state (rough-path JSON).
        input: PathBuf,
        /// zero | young:<h.csv>
        #[arg(long, default_value = "zero")]
        field: String,
        /// Chain local solves with r_i = e^i until the horizon is covered.
        #[arg(long)]
        global: bool,
    },
    /// Empirical Lipschitz ratios of a field near a base state.
    ProbeLipschitz {
        /// Base state (rough-path JSON).
        input: PathBuf,
        #[arg(long, default_value = "zero")]
        field: String,
        /// Number of probe pairs.
        #[arg(long, default_value_t = 10)]
        pairs: usize,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// colinear | scaled-lift | file:<dir>
    #[arg(long)]
    family: String,
    /// Direction vector for the colinear family, comma separated.
    #[arg(long, default_value = "1,-0.5")]
    direction: String,
    /// Base path CSV for the scaled-lift family.
    #[arg(long)]
    base: Option<PathBuf>,
}

fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = cli.p {
        config.p = p;
    }
    if let Some(q) = cli.q {
        config.q = q;
    }
    if let Some(depth) = cli.depth {
        config.depth = depth;
    }
    if let Some(c0) = cli.c0 {
        config.c0 = c0;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if cli.output_dir.is_some() {
        config.output_dir = cli.output_dir.clone();
    }
    if let Some(tol) = cli.chen_tol {
        config.chen_tol = tol;
    }
    if let Some(tol) = cli.equiv_tol {
        config.equiv_tol = tol;
    }
    if let Some(tol) = cli.cauchy_tol {
        config.cauchy_tol = tol;
    }
    if let Some(r) = cli.r {
        config.r = r;
    }
    if let Some(horizon) = cli.horizon {
        config.horizon = horizon;
    }
    if let Some(schedule) = &cli.schedule {
        config.schedule = schedule
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad schedule entry '{s}'")))
            })
            .collect::<Result<_>>()?;
    }
    config.validate()?;
    Ok(config)
}

fn build_family(args: &FamilyArgs, config: &RunConfig) -> Result<ParametricFamily> {
    if args.family == "colinear" {
        let direction: Vec<f64> = args
            .direction
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad direction component '{s}'")))
            })
            .collect::<Result<_>>()?;
        return ParametricFamily::colinear(direction, dyadic_times(config.depth));
    }
    if args.family == "scaled-lift" {
        let base_csv = args
            .base
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("scaled-lift needs --base <csv>".into()))?;
        let (times, points) = io::read_path_csv(base_csv)?;
        let base = GridRoughPath::canonical_lift(&times, &points)?;
        return ParametricFamily::scaled_lift(&base, config.p, config.depth);
    }
    if let Some(dir) = args.family.strip_prefix("file:") {
        let mut members = Vec::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Error::InvalidInput("unreadable family file name".into()))?;
            let eps: f64 = stem.parse().map_err(|_| {
                Error::InvalidInput(format!("family file '{stem}.json' is not named by its ε"))
            })?;
            members.push((eps, io::read_roughpath(&path)?));
        }
        members.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite ε"));
        return ParametricFamily::from_members(members, config.p, None);
    }
    Err(Error::InvalidInput(format!(
        "unknown family '{}': expected colinear | scaled-lift | file:<dir>",
        args.family
    )))
}

fn build_field(spec: &str, state: &GridRoughPath) -> Result<Box<dyn VectorField>> {
    if spec == "zero" {
        return Ok(Box::new(ZeroField));
    }
    if let Some(csv) = spec.strip_prefix("young:") {
        let (times, points) = io::read_path_csv(Path::new(csv))?;
        if times != state.times() {
            return Err(Error::GridMismatch(Some(
                "direction path must share the state grid".into(),
            )));
        }
        let running: Vec<Vec<f64>> = points
            .iter()
            .map(|pt| pt.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
            .collect();
        let phi0 = Phi::zero(state.dim(), times.len());
        return Ok(Box::new(YoungCrossField::new(times, running, phi0)?));
    }
    Err(Error::InvalidInput(format!(
        "unknown field '{spec}': expected zero | young:<h.csv>"
    )))
}

fn out_path(config: &RunConfig, name: &str) -> PathBuf {
    match &config.output_dir {
        Some(dir) => dir.join(name),
        None => PathBuf::from(name),
    }
}

fn euler_options(config: &RunConfig) -> EulerOptions {
    EulerOptions { alpha_cap: config.horizon, ..EulerOptions::default() }
}

fn cmd_lift(config: &RunConfig, input: &Path, output: &Path) -> Result<()> {
    let (times, points) = io::read_path_csv(input)?;
    let x = GridRoughPath::canonical_lift(&times, &points)?;
    io::write_roughpath(output, &x)?;
    let residual = x.chen_residual();
    println!("lifted {} points (dim {})", times.len(), x.dim());
    println!("chen residual: {residual:.3e}");
    println!("p-variation (p = {}):", config.p);
    println!("  level 1: {:.6}", x.p_variation(config.p, 1)?);
    println!("  level 2: {:.6}", x.p_variation(config.p, 2)?);
    println!("wrote {}", output.display());
    if residual > config.chen_tol {
        return Err(Error::Verification(format!(
            "chen residual {residual:.3e} exceeds tolerance {:.3e}",
            config.chen_tol
        )));
    }
    Ok(())
}

fn cmd_pvar(config: &RunConfig, input: &Path) -> Result<()> {
    let x = io::read_roughpath(input)?;
    println!("dim {}, {} grid points", x.dim(), x.times().len());
    println!("p = {}", config.p);
    println!("level 1 p-variation: {:.9}", x.p_variation(config.p, 1)?);
    println!("level 2 p-variation: {:.9}", x.p_variation(config.p, 2)?);
    Ok(())
}

fn cmd_dist(config: &RunConfig, left: &Path, right: &Path) -> Result<()> {
    let x = io::read_roughpath(left)?;
    let y = io::read_roughpath(right)?;
    let dp = dist_p(&x, &y, config.p)?;
    let dq = dist_q(&x, &y, config.p, config.q)?;
    let c = q_bound_constant(&x, &y, config.p, config.q)?;
    let rhs = c * dp.powf(config.p / config.q);
    println!("d_p (p = {}): {dp:.9}", config.p);
    println!("d_q (q = {}): {dq:.9}", config.q);
    println!("bound constant C: {c:.9}");
    println!("C d_p^(p/q): {rhs:.9}");
    let pass = dq <= rhs + 1e-12;
    println!("q-bound verdict: {}", if pass { "PASS" } else { "FAIL" });
    if !pass {
        return Err(Error::Verification("d_q exceeds C d_p^(p/q)".into()));
    }
    Ok(())
}

fn cmd_chen_check(config: &RunConfig, input: &Path) -> Result<()> {
    let x = io::read_roughpath(input)?;
    let residual = x.chen_residual();
    println!("chen residual over all grid triples: {residual:.3e}");
    if residual > config.chen_tol {
        return Err(Error::Verification(format!(
            "residual exceeds tolerance {:.3e}",
            config.chen_tol
        )));
    }
    println!("PASS (tolerance {:.3e})", config.chen_tol);
    Ok(())
}

fn cmd_extend(
    config: &RunConfig,
    family_args: &FamilyArgs,
    eps: f64,
    delta: f64,
    output: Option<&Path>,
) -> Result<()> {
    let fam = build_family(family_args, config)?;
    let eps_samples: Vec<f64> = (0..=4).map(|k| k as f64 / 4.0).collect();
    let report = check_family_condition(&fam, config.p, &eps_samples, 2000)?;
    println!(
        "family condition: holder worst {:.4}, lipschitz worst {:.4}, superadditivity worst {:.4}",
        report.holder_worst, report.lipschitz_worst, report.superadditivity_worst
    );
    if !report.pass() {
        for v in report.violations.iter().take(5) {
            println!("  violation: {v}");
        }
        return Err(Error::Verification("family condition violated".into()));
    }
    let seed = AreaSeed::Scalar(config.c0);
    let area = build_dyadic_area(&fam, eps, delta, config.depth, &seed)?;
    println!("built dyadic area to depth {}", config.depth);
    println!("arealem residual: {:.3e}", area.arealem_residual());
    println!("antisymmetry residual: {:.3e}", area.antisymmetry_residual());

    // Lipschitz-in-(ε, δ) estimate over a small parameter grid
    let c_hat = area_lipschitz_constant(fam.holder_constant(), fam.control_total(), config.p);
    let params: Vec<f64> = (0..=2).map(|k| k as f64 / 2.0).collect();
    let mut worst_ratio = 0.0f64;
    for &e1 in &params {
        for &d1 in &params {
            let a1 = build_dyadic_area(&fam, e1, d1, config.depth, &seed)?;
            for &e2 in &params {
                for &d2 in &params {
                    let gap = (e1 - e2).abs() + (d1 - d2).abs();
                    if gap == 0.0 {
                        continue;
                    }
                    let a2 = build_dyadic_area(&fam, e2, d2, config.depth, &seed)?;
                    for n in 1..=config.depth {
                        let bound = 4.0 * c_hat * gap * 2f64.powf(-2.0 * n as f64 / config.p);
                        for k in 0..(1usize << n) {
                            let b1 = a1.cross_block(n, k)?;
                            let b2 = a2.cross_block(n, k)?;
                            let diff = b1
                                .iter()
                                .zip(&b2)
                                .map(|(x, y)| (x - y).abs())
                                .fold(0.0, f64::max);
                            worst_ratio = worst_ratio.max(diff / bound);
                        }
                    }
                }
            }
        }
    }
    println!("area Lipschitz estimate worst ratio: {worst_ratio:.4} (must stay <= 1)");
    if let Some(path) = output {
        std::fs::write(path, io::area_to_json(&area)?)?;
        println!("wrote {}", path.display());
    }
    let z = assemble_z(&fam, eps, delta, config.depth, &seed)?;
    let chen = z.as_path().chen_residual();
    println!("assembled Z(ε, δ) chen residual: {chen:.3e}");
    if worst_ratio > 1.0 + 1e-9 || chen > config.chen_tol {
        return Err(Error::Verification("area estimates violated".into()));
    }
    Ok(())
}

fn parse_measure(text: &str) -> Result<Vec<(f64, f64)>> {
    text.split(',')
        .map(|atom| {
            let (e, w) = atom
                .split_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("bad measure atom '{atom}'")))?;
            let eps = e.trim().parse::<f64>();
            let weight = w.trim().parse::<f64>();
            match (eps, weight) {
                (Ok(eps), Ok(weight)) => Ok((eps, weight)),
                _ => Err(Error::InvalidInput(format!("bad measure atom '{atom}'"))),
            }
        })
        .collect()
}

fn cmd_integrate(
    config: &RunConfig,
    family_args: &FamilyArgs,
    measure: &str,
    output: Option<&Path>,
) -> Result<()> {
    let fam = build_family(family_args, config)?;
    let mu = parse_measure(measure)?;
    if mu.iter().any(|(_, w)| *w < 0.0) {
        println!("note: measure carries negative weights");
    }
    let x = integrate_family(&fam, &mu, config.depth, &AreaSeed::Scalar(config.c0))?;
    let residual = x.chen_residual();
    println!("X^mu on {} grid points; chen residual {residual:.3e}", x.times().len());
    if let Some(path) = output {
        io::write_roughpath(path, &x)?;
        println!("wrote {}", path.display());
    }
    if residual > config.chen_tol {
        return Err(Error::Verification("X^mu violates Chen beyond tolerance".into()));
    }
    Ok(())
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut text = String::with_capacity(rows.len() * 32 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    Ok(std::fs::write(path, text)?)
}

fn dump_solution(
    config: &RunConfig,
    field: &dyn VectorField,
    sol: &FlowSolution,
    x0: &GridRoughPath,
    stem: &str,
) -> Result<()> {
    let mut rows = Vec::new();
    let dt = if sol.tau.len() > 1 { sol.tau[1] - sol.tau[0] } else { 0.0 };
    for (k, state) in sol.states.iter().enumerate() {
        let res = if k + 1 < sol.states.len() && dt > 0.0 {
            residual(field, sol, sol.tau[k], dt / 8.0, config.p, config.q)?
        } else {
            0.0
        };
        for level in [1u8, 2u8] {
            let d = dist_level_exponent(state, x0, config.p, level)?;
            rows.push(format!("{},{},{},{}", sol.tau[k], level, d, res));
        }
    }
    let nodes = out_path(config, &format!("{stem}_nodes.csv"));
    write_csv(&nodes, "tau,level,dist_to_init,residual", &rows)?;
    println!("wrote {}", nodes.display());
    let terminal = out_path(config, &format!("{stem}_terminal.json"));
    io::write_roughpath(&terminal, sol.terminal())?;
    println!("wrote {}", terminal.display());
    Ok(())
}

fn cmd_flow(config: &RunConfig, input: &Path, field_spec: &str, global: bool) -> Result<()> {
    let x0 = io::read_roughpath(input)?;
    let field = build_field(field_spec, &x0)?;
    let opts = euler_options(config);
    if global {
        let run = solve_global(
            field.as_ref(),
            &x0,
            config.horizon,
            *config.schedule.last().expect("validated nonempty"),
            config.p,
            config.q,
            &opts,
        )?;
        println!(
            "global run: {} chunks, covered τ = {:.6}, chunk floor {:.6}",
            run.chunks.len(),
            run.solution.tau.last().unwrap(),
            run.chunk_lower_bound
        );
        let rows: Vec<String> = run
            .chunks
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{},{},{},{}", i + 1, c.radius, c.alpha, c.m_bound))
            .collect();
        let chunk_csv = out_path(config, "flow_chunks.csv");
        write_csv(&chunk_csv, "chunk,radius,alpha,M", &rows)?;
        println!("wrote {}", chunk_csv.display());
        dump_solution(config, field.as_ref(), &run.solution, &x0, "flow_global")?;
        let short = run
            .chunks
            .iter()
            .any(|c| c.alpha_uncapped < run.chunk_lower_bound);
        if short {
            return Err(Error::Verification(
                "a chunk fell below the guaranteed length floor".into(),
            ));
        }
        return Ok(());
    }
    let run = solve_local(
        field.as_ref(),
        &x0,
        config.r,
        &config.schedule,
        config.p,
        config.q,
        config.cauchy_tol,
        &opts,
    )?;
    let rows: Vec<String> = run
        .table
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{}",
                r.epsilon,
                r.gap_to_next.map(|g| g.to_string()).unwrap_or_default(),
                r.alpha,
                r.m_bound
            )
        })
        .collect();
    let table_csv = out_path(config, "flow_convergence.csv");
    write_csv(&table_csv, "epsilon,sup_dq_gap_to_next,alpha,M", &rows)?;
    println!("wrote {}", table_csv.display());
    let worst_lip = lipschitz_in_tau_worst(&run.solution, config.p)?;
    println!("lipschitz-in-τ worst ratio: {worst_lip:.4} (must stay <= 1)");
    let excess = crate::flow::ball_excess(&run.solution, &x0, config.p)?;
    println!("ball excess over 2Mτ: {excess:.3e} (must stay <= 0)");
    dump_solution(config, field.as_ref(), &run.solution, &x0, "flow_local")?;
    if worst_lip > 1.0 + 1e-9 {
        return Err(Error::Verification("ε-solution Lipschitz bound violated".into()));
    }
    if excess > 1e-9 {
        return Err(Error::Verification("a state escaped the ball B_r(X₀)".into()));
    }
    Ok(())
}

fn cmd_probe(config: &RunConfig, input: &Path, field_spec: &str, count: usize) -> Result<()> {
    let x0 = io::read_roughpath(input)?;
    let field = build_field(field_spec, &x0)?;
    let pairs = probe_pairs(&x0, count, config.seed)?;
    let report = lipschitz_probe(field.as_ref(), &pairs, config.p, config.q)?;
    println!("probed {} pairs", report.samples.len());
    println!(
        "worst d̃_p ratio: {:.6} (declared {:?})",
        report.worst_p, report.declared_p
    );
    println!(
        "worst d̃_q ratio: {:.6} (declared {:?})",
        report.worst_q, report.declared_q
    );
    println!(
        "field-part ratios: p {:.6}, q {:.6}",
        report.worst_field_p, report.worst_field_q
    );
    if report.flagged() {
        return Err(Error::Verification("field exceeds its declared constants".into()));
    }
    Ok(())
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Verification(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    if let Ok(threads) = std::env::var("ROUGHFLOW_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| Error::InvalidInput("ROUGHFLOW_THREADS must be an integer".into()))?;
        // ignore failure when a pool already exists (repeat invocations in-process)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let config = effective_config(cli)?;
    if let Some(dir) = &config.output_dir {
        std::fs::create_dir_all(dir)?;
    }
    match &cli.command {
        Command::Lift { input, output } => cmd_lift(&config, input, output),
        Command::Pvar { input } => cmd_pvar(&config, input),
        Command::Dist { left, right } => cmd_dist(&config, left, right),
        Command::ChenCheck { input } => cmd_chen_check(&config, input),
        Command::Extend { family, eps, delta, output } => {
            cmd_extend(&config, family, *eps, *delta, output.as_deref())
        }
        Command::Integrate { family, measure, output } => {
            cmd_integrate(&config, family, measure, output.as_deref())
        }
        Command::Flow { input, field, global } => cmd_flow(&config, input, field, *global),
        Command::ProbeLipschitz { input, field, pairs } => {
            cmd_probe(&config, input, field, *pairs)
        }
    }
}
