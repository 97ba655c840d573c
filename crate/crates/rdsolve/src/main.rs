//! Command-line driver: single runs with file artifacts, error-table sweeps,
//! and a quick property-verification suite.

use std::collections::HashMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use rdsolve::cases::{
    case_gas, reference_profile, run_case, CaseConfig, CaseId, CustomCase,
    GODUNOV_REFERENCE_CELLS,
};
use rdsolve::error::{Error, Result};
use rdsolve::euler::Prim;
use rdsolve::norms::rate_of_convergence;
use rdsolve::operators;
use rdsolve::output::{
    fmt_float, write_key_values, write_point_csv, write_profile_csv, write_structured_vtk,
};
use rdsolve::sensor::SchemePolicy;
use rdsolve::solver::{check_admissible_field, integrate_field, node_positions, solve};
use rdsolve::timestepping::StepController;

#[derive(Parser)]
#[command(
    name = "rdsolve",
    about = "High-order shock-capturing Euler solver on staggered/flux-reconstruction elements"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one case and write its artifacts to a directory.
    Run(RunArgs),
    /// Run a (order × resolution) error sweep and print the error tables.
    Sweep(SweepArgs),
    /// Run the operator/conservation/positivity property suite.
    Verify,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Case name: sod, shu_osher, vortex, ffs, rmi.
    #[arg(long)]
    case: Option<String>,
    /// Polynomial order p.
    #[arg(long)]
    order: Option<usize>,
    /// Resolution: degrees of freedom (1D), elements per side (vortex), or
    /// cells per unit length (ffs, rmi).
    #[arg(long, visible_alias = "resolution")]
    dof: Option<usize>,
    /// Scheme: rd, fr, rd-fr (sensor blend), or fv-p0 (first-order baseline).
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    /// Modal-sensor threshold coefficient.
    #[arg(long)]
    sensor_epsilon: Option<f64>,
    /// Admissibility guard: on or off.
    #[arg(long)]
    guard: Option<String>,
    /// Key-value config file; explicit flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output directory (default: out-<case>).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Orders to sweep: inclusive range `0..7` or comma list `0,1,3`.
    #[arg(long)]
    orders: Option<String>,
    /// Resolutions to sweep, comma-separated.
    #[arg(long, visible_alias = "resolutions")]
    dofs: Option<String>,
    /// Report format: table or csv.
    #[arg(long)]
    report: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Run(args) => cmd_run(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Verify => return cmd_verify(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// `key = value` file with `#` comments; keys are normalized so `t-end`
/// and `t_end` are the same entry.
struct FileConfig(HashMap<String, String>);

fn normalize_key(k: &str) -> String {
    k.trim().to_ascii_lowercase().replace('-', "_")
}

impl FileConfig {
    fn empty() -> Self {
        FileConfig(HashMap::new())
    }

    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut map = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "{}:{}: expected `key = value`, got `{line}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            map.insert(normalize_key(k), v.trim().to_string());
        }
        Ok(FileConfig(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| {
                Error::InvalidConfig(format!("config key `{key}`: cannot parse `{raw}`: {e}"))
            }),
        }
    }
}

/// A flag wins over the config file; the file wins over nothing.
fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SchemeArg {
    Rd,
    Fr,
    RdFr,
    FvP0,
}

impl FromStr for SchemeArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<SchemeArg> {
        match normalize_key(s).as_str() {
            "rd" => Ok(SchemeArg::Rd),
            "fr" => Ok(SchemeArg::Fr),
            "rd_fr" | "rdfr" | "blend" => Ok(SchemeArg::RdFr),
            "fv_p0" | "fvp0" | "p0" => Ok(SchemeArg::FvP0),
            other => Err(Error::InvalidConfig(format!(
                "unknown scheme `{other}` (expected rd, fr, rd-fr, fv-p0)"
            ))),
        }
    }
}

impl SchemeArg {
    fn policy(self) -> SchemePolicy {
        match self {
            SchemeArg::Rd | SchemeArg::FvP0 => SchemePolicy::ForceRd,
            SchemeArg::Fr => SchemePolicy::ForceFr,
            SchemeArg::RdFr => SchemePolicy::Blend,
        }
    }

    fn name(self) -> &'static str {
        match self {
            SchemeArg::Rd => "rd",
            SchemeArg::Fr => "fr",
            SchemeArg::RdFr => "rd-fr",
            SchemeArg::FvP0 => "fv-p0",
        }
    }
}

fn parse_guard(s: &str) -> Result<bool> {
    match normalize_key(s).as_str() {
        "on" | "true" | "1" => Ok(true),
        "off" | "false" | "0" => Ok(false),
        other => Err(Error::InvalidConfig(format!(
            "guard must be on or off, got `{other}`"
        ))),
    }
}

/// Resolves flags + config file into a validated case setup.
fn resolve_case(common: &CommonArgs) -> Result<(CaseConfig, SchemeArg)> {
    let file = match &common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::empty(),
    };

    let case: CaseId = pick(common.case.clone(), file.get("case")?)
        .ok_or_else(|| Error::InvalidConfig("no case given (--case or config file)".into()))?
        .parse()?;
    let mut cfg = CaseConfig::new(case);

    let scheme: SchemeArg = pick(common.scheme.clone(), file.get("scheme")?)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(SchemeArg::RdFr);
    let order = pick(common.order, file.get("order")?);
    if scheme == SchemeArg::FvP0 {
        if order.is_some_and(|p| p != 0) {
            return Err(Error::InvalidConfig(
                "fv-p0 is the p = 0 limit; it cannot be combined with a nonzero --order".into(),
            ));
        }
        cfg.order = 0;
    } else if let Some(p) = order {
        cfg.order = p;
    }
    cfg.policy = scheme.policy();

    if let Some(r) = pick(common.dof, file.get("dof")?.or(file.get("resolution")?)) {
        cfg.resolution = r;
    }
    cfg.t_end = pick(common.t_end, file.get("t_end")?).or(cfg.t_end);
    if let Some(c) = pick(common.cfl, file.get("cfl")?) {
        cfg.cfl = c;
    }
    if let Some(e) = pick(common.sensor_epsilon, file.get("sensor_epsilon")?) {
        cfg.epsilon = e;
    }
    if let Some(g) = pick(common.guard.clone(), file.get("guard")?) {
        cfg.guard = Some(parse_guard(&g)?);
    }
    cfg.validate()?;
    Ok((cfg, scheme))
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let (cfg, scheme) = resolve_case(&args.common)?;
    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("out-{}", cfg.case)));

    println!(
        "running {} (p={}, resolution {}, scheme {}, t_end {})",
        cfg.case,
        cfg.order,
        cfg.resolution,
        scheme.name(),
        cfg.t_end_resolved()
    );
    let artifacts = run_case(&cfg)?;
    let run = &artifacts.run;
    let mesh = &artifacts.mesh;
    let gas = case_gas();
    let ops = operators::cached(cfg.order)?;

    // Field artifacts.
    if mesh.dim == 1 {
        write_profile_csv(&out.join("profile.csv"), gas, mesh, ops, &run.field)?;
        let xs: Vec<f64> = mesh
            .elements
            .iter()
            .flat_map(|el| node_positions(el, ops, 1).into_iter().map(|x| x[0]))
            .collect();
        if cfg.case == CaseId::ShuOsher {
            println!("writing reference profile ({GODUNOV_REFERENCE_CELLS}-cell first-order sweep)...");
        }
        match reference_profile(&cfg, run.t, &xs) {
            Ok(profile) => {
                let mut text = String::from("x,rho,u,p\n");
                for (x, q) in xs.iter().zip(&profile) {
                    text += &format!(
                        "{},{},{},{}\n",
                        fmt_float(*x),
                        fmt_float(q.rho),
                        fmt_float(q.vel[0]),
                        fmt_float(q.p)
                    );
                }
                fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
                let path = out.join("reference.csv");
                fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            }
            Err(Error::MissingReference { .. }) => {}
            Err(e) => return Err(e),
        }
    } else {
        write_point_csv(&out.join("field.csv"), gas, mesh, ops, &run.field)?;
        write_structured_vtk(
            &out.join("field.vtk"),
            &cfg.case.to_string(),
            gas,
            mesh,
            ops,
            &run.field,
        )?;
    }

    // Step history: one row per accepted step.
    let mut steps = String::from("step,t,dt,rd_elements,halvings\n");
    for (i, r) in run.records.iter().enumerate() {
        steps += &format!(
            "{},{},{},{},{}\n",
            i,
            fmt_float(r.t),
            fmt_float(r.dt),
            r.rd_elements,
            r.halvings
        );
    }
    let steps_path = out.join("steps.csv");
    fs::write(&steps_path, steps).map_err(|e| Error::io(&steps_path, e))?;

    // Flat metadata summary.
    let totals = integrate_field(mesh, ops, &run.field);
    let mut meta: Vec<(String, String)> = vec![
        ("case".into(), cfg.case.to_string()),
        ("order".into(), cfg.order.to_string()),
        ("resolution".into(), cfg.resolution.to_string()),
        ("scheme".into(), scheme.name().into()),
        ("cfl".into(), fmt_float(cfg.cfl)),
        ("sensor_epsilon".into(), fmt_float(cfg.epsilon)),
        ("guard".into(), if cfg.guard_resolved() { "on" } else { "off" }.into()),
        ("elements".into(), mesh.n_elements().to_string()),
        ("t_final".into(), fmt_float(run.t)),
        ("steps".into(), run.steps.to_string()),
        (
            "dt_min".into(),
            fmt_float(run.records.iter().map(|r| r.dt).fold(f64::INFINITY, f64::min)),
        ),
        (
            "dt_max".into(),
            fmt_float(run.records.iter().map(|r| r.dt).fold(0.0, f64::max)),
        ),
        (
            "halvings_total".into(),
            run.records.iter().map(|r| r.halvings).sum::<usize>().to_string(),
        ),
        (
            "rd_fraction_mean".into(),
            fmt_float(run.mean_rd_fraction(mesh.n_elements())),
        ),
        ("total_mass".into(), fmt_float(totals.rho)),
        ("total_energy".into(), fmt_float(totals.energy)),
    ];
    if let Some(r) = &artifacts.report {
        meta.push(("error_l1".into(), fmt_float(r.l1)));
        meta.push(("error_l2".into(), fmt_float(r.l2)));
        meta.push(("error_linf".into(), fmt_float(r.linf)));
    }
    write_key_values(&out.join("metadata.txt"), &meta)?;

    println!(
        "done: t = {:.6}, {} steps, mean staggered fraction {:.3}",
        run.t,
        run.steps,
        run.mean_rd_fraction(mesh.n_elements())
    );
    if let Some(r) = &artifacts.report {
        println!(
            "density error: L1 = {:.4e}, L2 = {:.4e}, Linf = {:.4e}",
            r.l1, r.l2, r.linf
        );
    }
    println!("artifacts in {}", out.display());
    Ok(())
}

fn parse_orders(spec: &str) -> Result<Vec<usize>> {
    let bad = |s: &str| Error::InvalidConfig(format!("cannot parse orders `{s}`"));
    if let Some((a, b)) = spec.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|_| bad(spec))?;
        let hi: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad(spec))?;
        if hi < lo {
            return Err(bad(spec));
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad(spec)))
        .collect()
}

fn parse_list(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("cannot parse resolutions `{spec}`")))
        })
        .collect()
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let file = match &args.common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::empty(),
    };
    let mut common = args.common;
    if common.case.is_none() {
        common.case = Some(file.get("case")?.unwrap_or_else(|| "sod".to_string()));
    }
    if common.scheme.is_none() {
        common.scheme = pick(None, file.get("scheme")?).or(Some("rd".into()));
    }
    let (base, scheme) = resolve_case(&common)?;

    let orders = parse_orders(
        &pick(args.orders, file.get("orders")?).unwrap_or_else(|| "0..7".into()),
    )?;
    let dofs = parse_list(
        &pick(args.dofs, file.get("dofs")?)
            .unwrap_or_else(|| "256,512,1024,2048,4096".into()),
    )?;
    let report = pick(args.report, file.get("report")?).unwrap_or_else(|| "table".into());
    if report != "table" && report != "csv" {
        return Err(Error::InvalidConfig(format!(
            "report must be table or csv, got `{report}`"
        )));
    }

    // errors[oi][di], NaN marking skipped combinations.
    let mut errs = vec![vec![[f64::NAN; 3]; dofs.len()]; orders.len()];
    for (oi, &p) in orders.iter().enumerate() {
        for (di, &dof) in dofs.iter().enumerate() {
            let mut cfg = base.clone();
            cfg.order = p;
            cfg.resolution = dof;
            if cfg.validate().is_err() {
                eprintln!("skipping p={p}, resolution {dof}: incompatible");
                continue;
            }
            let artifacts = run_case(&cfg)?;
            let r = artifacts.report.ok_or(Error::MissingReference {
                case: cfg.case.to_string(),
            })?;
            errs[oi][di] = [r.l1, r.l2, r.linf];
            eprintln!(
                "p={p} resolution {dof}: L1 {:.4e}  L2 {:.4e}  Linf {:.4e}",
                r.l1, r.l2, r.linf
            );
        }
    }

    for (ni, name) in ["L1", "L2", "Linf"].iter().enumerate() {
        if report == "csv" {
            println!("# {name} density error, case {}, scheme {}", base.case, scheme.name());
            print!("resolution");
            for &p in &orders {
                print!(",P{p}");
            }
            println!();
            for (di, &dof) in dofs.iter().enumerate() {
                print!("{dof}");
                for oi in 0..orders.len() {
                    let v = errs[oi][di][ni];
                    print!(",{}", if v.is_nan() { "".into() } else { fmt_float(v) });
                }
                println!();
            }
        } else {
            println!();
            println!(
                "{name} density error (case {}, scheme {})",
                base.case,
                scheme.name()
            );
            print!("{:>8}", "DoF");
            for &p in &orders {
                print!("{:>12}", format!("P{p}"));
            }
            println!();
            for (di, &dof) in dofs.iter().enumerate() {
                print!("{dof:>8}");
                for oi in 0..orders.len() {
                    let v = errs[oi][di][ni];
                    if v.is_nan() {
                        print!("{:>12}", "--");
                    } else {
                        print!("{:>12}", format!("{v:.3e}"));
                    }
                }
                println!();
            }
            print!("{:>8}", "RoC");
            for oi in 0..orders.len() {
                let pairs: (Vec<f64>, Vec<f64>) = dofs
                    .iter()
                    .zip(&errs[oi])
                    .filter(|(_, e)| !e[ni].is_nan())
                    .map(|(&dof, e)| (1.0 / dof as f64, e[ni]))
                    .unzip();
                match rate_of_convergence(&pairs.0, &pairs.1) {
                    Ok(rate) => print!("{:>12}", format!("{rate:.4}")),
                    Err(_) => print!("{:>12}", "--"),
                }
            }
            println!();
        }
    }
    Ok(())
}

fn cmd_verify() -> ExitCode {
    let mut failures = 0usize;
    let mut report = |name: &str, outcome: std::result::Result<(), String>| match outcome {
        Ok(()) => println!("VERIFY {name}: PASS"),
        Err(why) => {
            failures += 1;
            println!("VERIFY {name}: FAIL ({why})");
        }
    };

    report("summation-by-parts identity (p <= 12)", (|| {
        for p in 0..=12 {
            let ops = operators::cached(p).map_err(|e| e.to_string())?;
            let r = operators::sbp_residual(ops);
            if r > 1e-11 {
                return Err(format!("p = {p}: residual {r:.3e} > 1e-11"));
            }
        }
        Ok(())
    })());

    report("difference-operator row sums (p <= 12)", (|| {
        for p in 0..=12 {
            let ops = operators::cached(p).map_err(|e| e.to_string())?;
            for i in 0..=p {
                let sum: f64 = (0..p + 2).map(|j| ops.c_matrix[(i, j)]).sum();
                if sum.abs() > 1e-12 {
                    return Err(format!("p = {p}, row {i}: sum {sum:.3e}"));
                }
            }
        }
        Ok(())
    })());

    report("periodic conservation (p = 1, 3)", (|| {
        for p in [1usize, 3] {
            let mut cfg = CaseConfig::new(CaseId::Custom);
            cfg.order = p;
            cfg.resolution = 24 * (p + 1);
            cfg.cfl = 0.05;
            cfg.custom = Some(CustomCase {
                domain: [0.0, 1.0],
                segments: vec![
                    (0.3, Prim::new_1d(1.0, 0.3, 1.0)),
                    (0.7, Prim::new_1d(0.6, 0.3, 0.8)),
                    (1.0, Prim::new_1d(1.0, 0.3, 1.0)),
                ],
                periodic: true,
            });
            let (mesh, field) = rdsolve::cases::init_case(&cfg).map_err(|e| e.to_string())?;
            let ops = operators::cached(p).map_err(|e| e.to_string())?;
            let before = integrate_field(&mesh, ops, &field);
            let mut scfg = rdsolve::cases::solver_config(&cfg);
            scfg.controller = StepController {
                cfl: cfg.cfl,
                t_end: 0.002,
                guard: false,
            };
            let run = solve(&scfg, &mesh, field).map_err(|e| e.to_string())?;
            let after = integrate_field(&mesh, ops, &run.field);
            let drift = (after - before).max_abs() / before.max_abs();
            let budget = 1e-12 * run.steps.max(1) as f64;
            if drift > budget {
                return Err(format!(
                    "p = {p}: relative drift {drift:.3e} over {} steps",
                    run.steps
                ));
            }
        }
        Ok(())
    })());

    report("guarded shock tube stays admissible", (|| {
        let mut cfg = CaseConfig::new(CaseId::Sod);
        cfg.order = 3;
        cfg.resolution = 128;
        cfg.t_end = Some(0.05);
        let artifacts = run_case(&cfg).map_err(|e| e.to_string())?;
        check_admissible_field(case_gas(), &artifacts.run.field).map_err(|e| e.to_string())?;
        let stalls: usize = artifacts.run.records.iter().map(|r| r.halvings).sum();
        if stalls > 0 {
            // Halvings are recoveries, not failures; surface them anyway.
            eprintln!("note: guard intervened {stalls} times");
        }
        Ok(())
    })());

    report("uniform vortex freestream is preserved", (|| {
        let mut cfg = CaseConfig::new(CaseId::Vortex);
        cfg.order = 2;
        cfg.resolution = 4;
        cfg.vortex.strength = 0.0;
        cfg.t_end = Some(0.5);
        let artifacts = run_case(&cfg).map_err(|e| e.to_string())?;
        let (mesh, ops) = (&artifacts.mesh, operators::cached(2).map_err(|e| e.to_string())?);
        let exact = cfg.vortex.state([0.0, 0.0]).rho;
        let r = rdsolve::norms::density_error_norms(mesh, ops, &artifacts.run.field, |_| exact);
        if r.linf > 1e-12 {
            return Err(format!("freestream drift {:.3e}", r.linf));
        }
        Ok(())
    })());

    if failures == 0 {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("{failures} check(s) failed");
        ExitCode::FAILURE
    }
}
