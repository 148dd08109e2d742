//! Command-line driver: exponent gates, kernel scans, Poisson solves, estimate
//! probes and the coupled-system experiments, plus `repro` for each
//! acceptance criterion.

pub mod repro;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use fracsys::exponents::{
    check_existence, check_existence_pq1, check_nonexistence_data, check_nonexistence_thresholds, feasible_region, parse_rational, ConditionReport,
    ExponentError, ExponentProfile, ExtRational, Rational, SetId, Var,
};
use fracsys::geometry::{build_grid, Domain, GridFunction};
use fracsys::kernel::{ratio_scan, Estimate, GreenKernel, ScanOptions, DEFAULT_SEED};
use fracsys::norms::{datum_family, probe_thm31, probe_thm32, NormsError, ProbeParams, ProbeSetup};
use fracsys::poisson::{parse_targets, DatumSpec, QuadOptions, Solver};
use fracsys::system::threshold::{default_lambdas, singular_norm_ladder};
use fracsys::system::{
    nonexistence_probe, threshold_bisect, verify_weak_solution, SystemConfig, SystemError, SystemRun, TestFunction, VerifyOptions,
};

/// Exit status of a command.
#[derive(Debug)]
pub enum Failure {
    /// A precondition of the requested computation does not hold.
    Refused(String),
    Error(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Refused(_) => 2,
            Failure::Error(_) => 1,
        }
    }
}

fn err(e: impl std::fmt::Display) -> Failure {
    Failure::Error(e.to_string())
}

impl From<NormsError> for Failure {
    fn from(e: NormsError) -> Self {
        match e {
            NormsError::Refused(m) => Failure::Refused(m),
            other => err(other),
        }
    }
}

impl From<SystemError> for Failure {
    fn from(e: SystemError) -> Self {
        match e {
            SystemError::Budget(_) => Failure::Refused(e.to_string()),
            other => err(other),
        }
    }
}

impl From<ExponentError> for Failure {
    fn from(e: ExponentError) -> Self {
        err(e)
    }
}

type Result<T> = std::result::Result<T, Failure>;

#[derive(Parser, Debug)]
#[command(name = "fracsys", version, about = "Fractional elliptic systems with gradient sources: gates, solvers and probes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide the exponent condition sets exactly.
    Gate(GateArgs),
    /// Sample a Green's-function estimate ratio over interior pairs.
    KernelScan(KernelScanArgs),
    /// Solve the fractional Poisson problem by Green's-function quadrature.
    Poisson(PoissonArgs),
    /// Probe a weighted regularity estimate over the datum family.
    Probe(ProbeArgs),
    /// Run the damped Picard iteration for the coupled system.
    SolveSystem(SystemArgs),
    /// Bisect the empirical blow-up threshold in lambda.
    BisectLambda(BisectArgs),
    /// Small-data nonexistence sweep over lambda.
    NonexistProbe(NonexistArgs),
    /// Replay an acceptance criterion (1-10, or `all`).
    Repro(ReproArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ProfileArgs {
    #[arg(long)]
    pub s1: String,
    #[arg(long)]
    pub s2: String,
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub q: String,
    #[arg(long = "N", default_value_t = 2)]
    pub n: u32,
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub sigma: String,
}

impl ProfileArgs {
    pub fn profile(&self) -> Result<ExponentProfile> {
        let r = |s: &str| parse_rational(s);
        Ok(ExponentProfile::new(r(&self.s1)?, r(&self.s2)?, r(&self.p)?, r(&self.q)?, self.n, ExtRational::parse(&self.m)?, ExtRational::parse(&self.sigma)?)?)
    }
}

#[derive(Args, Debug)]
pub struct GateArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// existence, pq1, thresholds or data.
    #[arg(long, default_value = "existence")]
    pub sets: String,
    /// Emit the exact region of `p` or `q` instead of the clause report.
    #[arg(long)]
    pub sweep: Option<String>,
    /// CSV instead of aligned text.
    #[arg(long)]
    pub csv: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[arg(long = "N", default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 32)]
    pub n_radial: usize,
    #[arg(long, default_value_t = 64)]
    pub n_angular: usize,
    #[arg(long, default_value_t = 2.0)]
    pub grading: f64,
}

#[derive(Args, Debug)]
pub struct KernelScanArgs {
    #[arg(long)]
    pub s: String,
    #[arg(long, default_value = "2.2")]
    pub estimate: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    #[arg(long = "N", default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PoissonArgs {
    #[arg(long)]
    pub s: String,
    #[arg(long, default_value = "const:1")]
    pub datum: String,
    #[arg(long, default_value = "radial:32")]
    pub targets: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    /// 3.1 or 3.2 (3.2 with s1 = s2 is the single-order estimate 2.2).
    #[arg(long)]
    pub theorem: String,
    #[arg(long)]
    pub s1: String,
    #[arg(long)]
    pub s2: String,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub m: String,
    /// Omit to take an admissible default inside the window.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Use the 24-member refinement of the datum family.
    #[arg(long)]
    pub doubled: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SystemArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Also report weak-form residuals of the final iterate.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BisectArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    pub lo: f64,
    #[arg(long, default_value_t = 10.0)]
    pub hi: f64,
    /// Relative bracket width at which to stop.
    #[arg(long, default_value_t = 0.05)]
    pub width: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct NonexistArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Replaces `f` from the config.
    #[arg(long)]
    pub datum: Option<String>,
    /// Comma-separated; default 1e-1,...,1e-6.
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReproArgs {
    pub criterion: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse `argv` and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Refused(m) => eprintln!("refused: {m}"),
                Failure::Error(m) => eprintln!("error: {m}"),
            }
            f.code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gate(a) => gate(a),
        Command::KernelScan(a) => kernel_scan(a),
        Command::Poisson(a) => poisson(a),
        Command::Probe(a) => probe(a),
        Command::SolveSystem(a) => solve_system(a),
        Command::BisectLambda(a) => bisect(a),
        Command::NonexistProbe(a) => nonexist(a),
        Command::Repro(a) => repro_cmd(a),
    }
}

/// Write through a temporary file and rename, so readers never see a
/// partial file.
pub fn write_atomic(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(err)?;
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, content).map_err(err)?;
    fs::rename(&tmp, &path).map_err(err)?;
    Ok(path)
}

fn emit(out: &Option<PathBuf>, name: &str, content: &str) -> Result<()> {
    match out {
        Some(dir) => {
            write_atomic(dir, name, content)?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn real(text: &str) -> Result<f64> {
    match parse_rational(text) {
        Ok(r) => Ok(fracsys::exponents::rational::to_f64(&r)),
        Err(_) => text.trim().parse::<f64>().map_err(|_| err(format!("`{text}` is not a number"))),
    }
}

pub fn gate_report(profile: &ExponentProfile, sets: &str) -> Result<ConditionReport> {
    match sets {
        "existence" => Ok(check_existence(profile)),
        "pq1" => Ok(check_existence_pq1(profile)?),
        "thresholds" => Ok(check_nonexistence_thresholds(profile)),
        "data" => Ok(check_nonexistence_data(profile)),
        other => Err(err(format!("unknown set family `{other}` (existence, pq1, thresholds, data)"))),
    }
}

fn gate(a: GateArgs) -> Result<()> {
    let profile = a.profile.profile()?;
    if let Some(var) = &a.sweep {
        let free = match Var::parse(var) {
            Some(v @ (Var::P | Var::Q)) => v,
            _ => return Err(err(format!("--sweep takes p or q, got `{var}`"))),
        };
        let region = feasible_region(&profile, free)?;
        let mut csv = String::from("var,lo,lo_closed,hi,hi_closed,sets\n");
        for i in &region.intervals {
            let sets: Vec<&str> = i.sets.iter().map(|s| s.label()).collect();
            csv.push_str(&format!("{},{},{},{},{},{}\n", free.name(), i.lo, i.lo_closed, i.hi, i.hi_closed, sets.join(";")));
        }
        if a.csv || a.out.is_some() {
            emit(&a.out, "gate_sweep.csv", &csv)?;
        } else {
            println!("{region}");
        }
        return if region.is_empty() { Err(Failure::Refused(format!("no feasible {}", free.name()))) } else { Ok(()) };
    }
    let report = gate_report(&profile, &a.sets)?;
    if a.csv || a.out.is_some() {
        emit(&a.out, "gate.csv", &report.csv())?;
    } else {
        print!("{}", report.text());
    }
    if report.feasible {
        Ok(())
    } else {
        Err(Failure::Refused(format!("no {} set passes for {}", a.sets, profile)))
    }
}

fn kernel_scan(a: KernelScanArgs) -> Result<()> {
    let s = real(&a.s)?;
    let estimate: Estimate = a.estimate.parse().map_err(err)?;
    let kernel = GreenKernel::new(s, Domain::new(a.n).map_err(err)?).map_err(err)?;
    let opts = ScanOptions { samples: a.samples, eta: a.eta, seed: a.seed, ..ScanOptions::default() };
    let rep = ratio_scan(&kernel, estimate, &opts).map_err(err)?;
    let csv = format!("{}\n{}\n", fracsys::kernel::EstimateRatioReport::CSV_HEADER, rep.csv_row(&a.s));
    emit(&a.out, "kernel_scan.csv", &csv)
}

fn grid_of(g: &GridArgs) -> Result<Arc<fracsys::geometry::QuadratureGrid>> {
    Ok(Arc::new(build_grid(Domain::new(g.n).map_err(err)?, g.n_radial, g.n_angular, g.grading).map_err(err)?))
}

fn poisson(a: PoissonArgs) -> Result<()> {
    let s = real(&a.s)?;
    let grid = grid_of(&a.grid)?;
    let datum: DatumSpec = a.datum.parse().map_err(err)?;
    let h: GridFunction = datum.realize(&grid).map_err(err)?;
    let targets = parse_targets(&a.targets, &grid).map_err(err)?;
    let solver = Solver::new(s, grid).map_err(err)?;
    let sol = solver.solve_with_gradient(&h, &targets).map_err(err)?;
    emit(&a.out, "poisson.csv", &sol.to_csv())
}

fn probe(a: ProbeArgs) -> Result<()> {
    let gamma = a.gamma.as_deref().map(ExtRational::parse).transpose()?;
    let params = ProbeParams {
        s1: parse_rational(&a.s1)?,
        s2: parse_rational(&a.s2)?,
        a: parse_rational(&a.a)?,
        m: parse_rational(&a.m)?,
        gamma,
        dim: a.grid.n,
    };
    let grid = grid_of(&a.grid)?;
    let family = datum_family(a.doubled);
    let s2 = fracsys::exponents::rational::to_f64(&params.s2);
    let report = match a.theorem.as_str() {
        "3.1" => probe_thm31(&ProbeSetup::new(grid, s2, false, QuadOptions::default())?, &params, &family)?,
        "3.2" | "2.2" => probe_thm32(&mut ProbeSetup::new(grid, s2, true, QuadOptions::default())?, &params, &family)?,
        other => return Err(err(format!("unknown estimate `{other}` (3.1 or 3.2)"))),
    };
    emit(&a.out, "probe.csv", &report.to_csv())
}

fn load_config(path: &Path) -> Result<SystemConfig> {
    let text = fs::read_to_string(path).map_err(|e| err(format!("{}: {e}", path.display())))?;
    SystemConfig::parse(&text).map_err(|e| err(format!("{}: {e}", path.display())))
}

fn solve_system(a: SystemArgs) -> Result<()> {
    let cfg = load_config(&a.config)?;
    let run = SystemRun::new(cfg)?;
    let pr = run.problem(run.config.lambda, run.config.mu);
    let res = run.solver.picard(&pr);
    write_atomic(&a.out, "trace.csv", &res.trace_csv())?;
    write_atomic(&a.out, "solution.csv", &res.solution_csv(run.solver.grid()))?;
    let mut summary = String::from("key,value\n");
    summary.push_str(&format!("outcome,{}\n", res.outcome));
    summary.push_str(&format!("settled,{}\n", res.settled));
    summary.push_str(&format!("h_invariant,{}\n", res.h_invariant()));
    summary.push_str(&format!("r,{}\n", res.r));
    summary.push_str(&format!("blowup_cap,{:e}\n", res.cap));
    summary.push_str(&format!("trimmed_measure,{:e}\n", res.trimmed_measure));
    if let Some(b) = run.budget {
        summary.push_str(&format!(
            "c_tilde,{:e}\nell,{:e}\nlambda_star,{:e}\nA,{:e}\nin_pi,{}\n",
            b.c_tilde,
            b.ell,
            b.lambda_star,
            b.a,
            run.in_pi(pr.lambda, pr.mu).unwrap_or(false)
        ));
    }
    if a.verify {
        let rep = verify_weak_solution(&run.solver, &res, &pr, &TestFunction::family(), &VerifyOptions::default())?;
        write_atomic(&a.out, "residuals.csv", &rep.to_csv())?;
        summary.push_str(&format!("max_residual,{:e}\n", rep.max_relative()));
    }
    write_atomic(&a.out, "summary.csv", &summary)?;
    println!("{}", res.outcome);
    Ok(())
}

fn require_thresholds(profile: &ExponentProfile) -> Result<()> {
    let one = Rational::from_integer(1.into());
    if profile.p > one && profile.q > one {
        Ok(())
    } else {
        Err(Failure::Refused("blow-up thresholds need p > 1 and q > 1".into()))
    }
}

fn bisect(a: BisectArgs) -> Result<()> {
    let cfg = load_config(&a.config)?;
    require_thresholds(&cfg.profile)?;
    let run = SystemRun::new(cfg)?;
    let b = threshold_bisect(&run, a.lo, a.hi, a.width)?;
    let mut probes = String::from("lambda,outcome\n");
    for (l, o) in &b.probes {
        probes.push_str(&format!("{l:e},{o}\n"));
    }
    write_atomic(&a.out, "probes.csv", &probes)?;
    let summary = format!(
        "lambda_hat,bracket_lo,bracket_hi,relative_width\n{:e},{:e},{:e},{:e}\n",
        b.lambda_hat,
        b.bracket.0,
        b.bracket.1,
        b.relative_width()
    );
    write_atomic(&a.out, "summary.csv", &summary)?;
    print!("{summary}");
    Ok(())
}

fn nonexist(a: NonexistArgs) -> Result<()> {
    let mut cfg = load_config(&a.config)?;
    if let Some(d) = &a.datum {
        cfg.f = d.parse().map_err(err)?;
    }
    let thresholds = check_nonexistence_thresholds(&cfg.profile).passes(SetId::Thm45B);
    let data = check_nonexistence_data(&cfg.profile).passes(SetId::N424);
    if !(thresholds || data) {
        return Err(Failure::Refused(format!("{} passes neither nonexistence gate", cfg.profile)));
    }
    let dim = cfg.profile.n as usize;
    let norm_check = match cfg.f {
        DatumSpec::Singular { m, eps } => Some(singular_norm_ladder(dim, m, eps, &[cfg.n_radial, 4 * cfg.n_radial, 256.max(cfg.n_radial)], 8, cfg.grading)?),
        _ => None,
    };
    let run = SystemRun::new(cfg)?;
    let lambdas = a.lambdas.unwrap_or_else(default_lambdas);
    let rep = nonexistence_probe(&run, &lambdas);
    write_atomic(&a.out, "summary.csv", &rep.to_csv())?;
    if let Some(rows) = norm_check {
        let mut csv = String::from("n_radial,grid_norm,exact_norm,relative_error\n");
        for (n, got, exact, rel) in rows {
            csv.push_str(&format!("{n},{got:.10e},{exact:.10e},{rel:.3e}\n"));
        }
        write_atomic(&a.out, "datum_norm.csv", &csv)?;
    }
    println!("{} ({}; gates: thresholds={thresholds}, data={data})", if rep.all_diverged() { "all diverged" } else { "not all diverged" }, rep.label);
    Ok(())
}

fn repro_cmd(a: ReproArgs) -> Result<()> {
    let ids: Vec<u8> = if a.criterion == "all" {
        (1..=10).collect()
    } else {
        vec![a.criterion.parse().ok().filter(|n| (1..=10).contains(n)).ok_or_else(|| err(format!("criterion must be 1-10 or all, got `{}`", a.criterion)))?]
    };
    let mut lines = String::new();
    for id in ids {
        let v = repro::criterion(id);
        println!("{}", v.line());
        for d in &v.details {
            println!("    {d}");
        }
        lines.push_str(&v.line());
        lines.push('\n');
    }
    if let Some(dir) = &a.out {
        write_atomic(dir, "repro.txt", &lines)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROFILE: [&str; 14] = ["--s1", "3/4", "--s2", "9/10", "--N", "2", "--m", "2", "--sigma", "2", "--p", "1", "--q", "3/2"];

    fn call(args: &[&str]) -> i32 {
        run(std::iter::once("fracsys").chain(args.iter().copied()))
    }

    fn out_dir() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn gate_example_passes_set_42() {
        let dir = out_dir();
        let mut args = vec!["gate"];
        args.extend(PROFILE);
        args.extend(["--out", dir.path().to_str().unwrap()]);
        assert_eq!(call(&args), 0);
        let csv = fs::read_to_string(dir.path().join("gate.csv")).unwrap();
        assert!(csv.starts_with("set_id,clause_id,lhs,rhs,relation,pass\n"));
        assert!(csv.lines().any(|l| l == "4.2,4.2.1,5/7,3/4,<,pass"));
        // rationals only, never decimals
        assert!(csv.lines().skip(1).all(|l| l.split(',').skip(2).take(2).all(|v| !v.contains('.'))));
    }

    #[test]
    fn gate_sweep_gives_exact_endpoint() {
        let dir = out_dir();
        let mut args = vec!["gate", "--sweep", "p"];
        args.extend(PROFILE);
        args.extend(["--out", dir.path().to_str().unwrap()]);
        assert_eq!(call(&args), 0);
        let csv = fs::read_to_string(dir.path().join("gate_sweep.csv")).unwrap();
        // 20/(5q+11) at q = 3/2
        assert!(csv.contains("p,1,true,40/37,false"), "{csv}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["gate", "--bogus"]), 1);
        assert_eq!(call(&["--help"]), 0);
        let mut args = vec!["gate"];
        args.extend(PROFILE);
        let p = args.iter().position(|a| *a == "--p").unwrap();
        args[p + 1] = "3";
        args[p + 3] = "3";
        assert_eq!(call(&args), 2);
        // estimate window violated
        let refused = ["probe", "--theorem", "3.2", "--s1", "3/4", "--s2", "9/10", "--a", "0", "--m", "2", "--n-radial", "4", "--n-angular", "8"];
        assert_eq!(call(&refused), 2);
        assert_eq!(call(&["solve-system", "--config", "/nonexistent/golden.cfg"]), 1);
    }

    #[test]
    fn threshold_commands_refuse_outside_their_gates() {
        let dir = out_dir();
        let cfg = dir.path().join("p1.cfg");
        fs::write(&cfg, repro::GOLDEN.replace("p = 21/20", "p = 1")).unwrap();
        assert!(fs::read_to_string(&cfg).unwrap().contains("p = 1\n"));
        assert_eq!(call(&["bisect-lambda", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]), 2);
        let golden = dir.path().join("golden.cfg");
        fs::write(&golden, repro::GOLDEN).unwrap();
        assert_eq!(call(&["nonexist-probe", "--config", golden.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]), 2);
    }

    #[test]
    fn config_errors_carry_positions() {
        let dir = out_dir();
        let cfg = dir.path().join("bad.cfg");
        fs::write(&cfg, "s1 = 3/4\ns2 = 9/1x\n").unwrap();
        let e = load_config(&cfg).unwrap_err();
        assert!(matches!(&e, Failure::Error(m) if m.contains("line 2, column 6")), "{e:?}");
    }

    #[test]
    fn poisson_writes_torsion_table() {
        let dir = out_dir();
        let d = dir.path().to_str().unwrap();
        let args = ["poisson", "--s", "3/4", "--datum", "const:1", "--targets", "radial:8", "--n-radial", "16", "--n-angular", "32", "--out", d];
        assert_eq!(call(&args), 0);
        let csv = fs::read_to_string(dir.path().join("poisson.csv")).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x1,x2,delta,w,grad_norm,w_over_delta_s"));
        for l in lines {
            let v: Vec<f64> = l.split(',').map(|t| t.parse().unwrap_or(f64::NAN)).collect();
            let exact = fracsys::kernel::torsion(2, 0.75, &[v[0], v[1], 0.0]);
            assert!((v[3] - exact).abs() < 1e-3 * exact, "{l}");
        }
    }

    #[test]
    fn kernel_scan_is_byte_identical_across_runs() {
        let (a, b) = (out_dir(), out_dir());
        for d in [&a, &b] {
            let args = ["kernel-scan", "--s", "3/4", "--estimate", "2.2", "--samples", "500", "--out", d.path().to_str().unwrap()];
            assert_eq!(call(&args), 0);
        }
        let read = |d: &tempfile::TempDir| fs::read(d.path().join("kernel_scan.csv")).unwrap();
        assert_eq!(read(&a), read(&b));
        assert!(String::from_utf8(read(&a)).unwrap().starts_with("estimate,s,min_ratio,max_ratio,samples\n2.2-upper,3/4,"));
    }

    #[test]
    fn atomic_write_leaves_no_temporaries() {
        let dir = out_dir();
        write_atomic(dir.path(), "x.csv", "a\n1\n").unwrap();
        write_atomic(dir.path(), "x.csv", "a\n2\n").unwrap();
        let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names, vec![std::ffi::OsString::from("x.csv")]);
        assert_eq!(fs::read_to_string(dir.path().join("x.csv")).unwrap(), "a\n2\n");
    }
}
