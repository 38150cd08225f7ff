use rand::Rng;
use serde_json::{json, Value};

use rwde::flows::{construct_theta_n, min_cut_truncated_lattice, Certification, ConstructionOptions};
use rwde::lattice::{sample_environment, EdgeField, Environment, LatticeCapacities, TorusGraph};
use rwde::rng::{domain, stream, DEFAULT_SEED};
use rwde::stationary::{
    density_from, moment_estimate, reversal_identity_with, reversal_law_test, sample_densities,
    stationary_distribution, stationary_residual, time_reverse, MomentEstimate, SolverOptions,
};
use rwde::walk::{
    annealed_path_probability, enumerate_paths, regime_experiment, reinforcement_path_probability, simulate_replica,
    trap_tail_experiment, WalkMode,
};
use rwde::{Error, Weights};

use crate::config::{EnvFormat, ExperimentConfig, ModeName};
use crate::output::Outputs;

/// Failure of a command, mapped to the exit status.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Run(Error),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 2,
            Failure::Run(e) => match e.kind() {
                rwde::ErrorKind::Input => 2,
                rwde::ErrorKind::Numerical => 3,
                rwde::ErrorKind::Invariant => 4,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Run(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

pub type CommandResult = Result<Value, Failure>;

pub struct Context<'a> {
    pub cfg: &'a ExperimentConfig,
    pub out: &'a mut Outputs,
}

impl Context<'_> {
    fn weights(&self) -> Weights {
        self.cfg
            .weights
            .clone()
            .unwrap_or_else(|| Weights::uniform(3, 1.0).expect("uniform weights"))
    }

    fn seed(&self) -> u64 {
        self.cfg.seed.unwrap_or(DEFAULT_SEED)
    }

    fn side(&self, default: usize) -> usize {
        self.cfg.side.unwrap_or(default)
    }

    fn replicas(&self, default: usize) -> usize {
        self.cfg.replicas.unwrap_or(default)
    }

    fn solver(&self) -> SolverOptions {
        let mut o = SolverOptions::default();
        if let Some(t) = self.cfg.tolerance {
            o.tol = t;
        }
        if let Some(m) = self.cfg.max_iterations {
            o.max_iterations = m;
        }
        o
    }

    fn capacities(&self, w: &Weights) -> Result<LatticeCapacities, Failure> {
        Ok(match self.cfg.boost {
            Some(dir) => w.boosted(dir)?,
            None => LatticeCapacities::from_weights(w),
        })
    }

    fn sample_env(&self, w: &Weights, side: usize) -> Result<Environment, Failure> {
        let graph = TorusGraph::new(w.dim(), side)?;
        Ok(sample_environment(
            w,
            &graph,
            &mut stream(self.seed(), &[domain::ENVIRONMENT, side as u64]),
        )?)
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn kappa(ctx: &mut Context) -> CommandResult {
    let w = ctx.weights();
    let drift = w.mean_drift();
    let regime = w.predicted_regime();
    println!("kappa = {}", w.kappa());
    println!("drift = {drift:?}");
    println!("trap direction = {}", w.trap_direction());
    println!("regime = {}", regime.label());
    Ok(json!({
        "weights": w,
        "kappa": w.kappa(),
        "drift": drift,
        "trap_direction": w.trap_direction(),
        "regime": regime,
    }))
}

pub fn sample_env(ctx: &mut Context) -> CommandResult {
    let w = ctx.weights();
    let side = ctx.side(8);
    let env = ctx.sample_env(&w, side)?;
    let mut bytes = Vec::new();
    let name = match ctx.cfg.format.unwrap_or(EnvFormat::Csv) {
        EnvFormat::Csv => {
            env.write_csv(&mut bytes)?;
            "environment.csv"
        }
        EnvFormat::Binary => {
            env.write_binary(&mut bytes)?;
            "environment.bin"
        }
    };
    ctx.out.write(name, &bytes)?;
    let min = env.probs().iter().copied().fold(f64::INFINITY, f64::min);
    Ok(json!({ "weights": w, "side": side, "edges": env.probs().len(), "min_probability": min }))
}

fn load_env(ctx: &Context, w: &Weights) -> Result<Environment, Failure> {
    let Some(path) = &ctx.cfg.environment else {
        return ctx.sample_env(w, ctx.side(8));
    };
    let file = std::fs::File::open(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let reader = std::io::BufReader::new(file);
    let env = match ctx.cfg.format.unwrap_or(EnvFormat::Csv) {
        EnvFormat::Csv => Environment::read_csv(TorusGraph::new(w.dim(), ctx.side(8))?, reader)?,
        EnvFormat::Binary => Environment::read_binary(reader)?,
    };
    Ok(env)
}

pub fn stationary(ctx: &mut Context) -> CommandResult {
    let w = ctx.weights();
    let env = load_env(ctx, &w)?;
    let sol = stationary_distribution(&env, &ctx.solver())?;
    let mut csv = String::from("vertex,probability\n");
    for (v, p) in sol.pi.values().iter().enumerate() {
        csv.push_str(&format!("{v},{p:e}\n"));
    }
    ctx.out.write("stationary.csv", csv.as_bytes())?;
    Ok(json!({
        "side": env.graph().side(),
        "dimension": env.graph().dim(),
        "f_n": density_from(&sol),
        "residual": sol.residual,
        "iterations": sol.iterations,
        "method": sol.method,
        "min_mass": sol.min_mass,
    }))
}

pub fn reverse_check(ctx: &mut Context) -> CommandResult {
    let w = ctx.weights();
    let side = ctx.side(4);
    let replicas = ctx.replicas(1000);
    let seed = ctx.seed();
    let opts = ctx.solver();
    let graph = TorusGraph::new(w.dim(), side)?;
    let mut worst_identity = 0.0f64;
    let mut worst_stationarity = 0.0f64;
    for r in 0..replicas.min(20) {
        let mut rng = stream(seed, &[domain::IDENTITY, side as u64, r as u64]);
        let env = sample_environment(&w, &graph, &mut rng)?;
        let sol = stationary_distribution(&env, &opts)?;
        let values = (0..graph.edge_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let theta = EdgeField::from_values(graph, values)?;
        worst_identity = worst_identity.max(reversal_identity_with(&env, &sol, &theta)?.relative_error());
        let rev = time_reverse(&env, &sol.pi)?;
        worst_stationarity = worst_stationarity.max(stationary_residual(&rev, sol.pi.values()));
    }
    let law = if replicas >= 100 {
        Some(reversal_law_test(&w, side, replicas, seed, &opts)?)
    } else {
        None
    };
    if worst_identity > 1e-8 {
        return Err(Error::DivergenceCondition {
            max_error: worst_identity,
        }
        .into());
    }
    Ok(json!({
        "side": side,
        "identity_max_relative_error": worst_identity,
        "reversed_stationarity_residual": worst_stationarity,
        "law": law,
    }))
}

pub fn moments(ctx: &mut Context) -> CommandResult {
    let w = ctx.weights();
    let sides = ctx.cfg.sides.clone().unwrap_or_else(|| vec![4, 6, 8]);
    let ps = ctx.cfg.p.clone().unwrap_or_else(|| vec![1.0, 2.0]);
    let replicas = ctx.replicas(1000);
    let seed = ctx.seed();
    let mut csv = String::from("seed,N,p,f_N,residual\n");
    let mut estimates: Vec<MomentEstimate> = Vec::new();
    for &side in &sides {
        let (rows, failed) = sample_densities(&w, side, replicas, seed, &ctx.solver())?;
        for &p in &ps {
            estimates.push(moment_estimate(&rows, p, seed, failed.len())?);
            for r in &rows {
                csv.push_str(&format!("{},{},{},{:e},{:e}\n", r.seed, r.side, p, r.f_n, r.residual));
            }
        }
    }
    ctx.out.write("densities.csv", csv.as_bytes())?;
    for e in &estimates {
        println!(
            "N={:<3} p={:<4} E[f^p] = {:.4} [{:.4}, {:.4}]",
            e.side, e.p, e.mean, e.ci_low, e.ci_high
        );
    }
    Ok(json!({ "weights": w, "kappa": w.kappa(), "estimates": estimates }))
}

pub fn flow(ctx: &mut Context) -> CommandResult {
    let w = ctx.weights();
    let p = ctx.cfg.p.as_ref().and_then(|v| v.first().copied()).unwrap_or(1.5);
    let side = ctx.side(8);
    let boost = ctx.cfg.boost.unwrap_or(0);
    let caps = w.boosted(boost)?.scaled(p / w.kappa());
    let mut opts = ConstructionOptions {
        seed: ctx.seed(),
        certification: ctx.cfg.certification.unwrap_or(Certification::Adaptive),
        ..Default::default()
    };
    if let Some(s) = ctx.cfg.samples {
        opts.samples = s;
    }
    let trace = construct_theta_n(&caps, p, side, &opts)?;
    if !trace.summary.dominated {
        return Err(Error::Infeasible {
            cut_capacity: f64::NAN,
            demand: p,
            vertices: Vec::new(),
        }
        .into());
    }
    let mut csv = String::from("edge,theta,theta_tilde\n");
    for e in 0..trace.theta.len() {
        csv.push_str(&format!("{e},{:e},{:e}\n", trace.theta[e], trace.theta_tilde[e]));
    }
    ctx.out.write("theta.csv", csv.as_bytes())?;
    let cut = min_cut_truncated_lattice(&caps, 3)?;
    Ok(json!({
        "weights": w,
        "strength": p,
        "boost": boost,
        "construction": trace.summary,
        "truncated_min_cut_r3": cut,
    }))
}

pub fn mincut(ctx: &mut Context) -> CommandResult {
    let w = ctx.weights();
    let caps = ctx.capacities(&w)?;
    let radii = ctx.cfg.radii.clone().unwrap_or_else(|| vec![2, 3]);
    let mut values = Vec::new();
    for &r in &radii {
        let v = min_cut_truncated_lattice(&caps, r)?;
        println!("R = {r}: {v}");
        values.push(json!({ "radius": r, "value": v }));
    }
    Ok(json!({ "weights": w, "boost": ctx.cfg.boost, "kappa": w.kappa(), "cuts": values }))
}

pub fn walk(ctx: &mut Context) -> CommandResult {
    let w = ctx.weights();
    let steps = ctx.cfg.steps.unwrap_or(100_000);
    let mut checkpoints = ctx.cfg.checkpoints.clone().unwrap_or_default();
    checkpoints.push(steps);
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let mode = match ctx.cfg.mode.unwrap_or(ModeName::Annealed) {
        ModeName::Annealed => WalkMode::Annealed,
        ModeName::Quenched => WalkMode::Quenched { side: ctx.side(64) },
    };
    let seed = ctx.seed();
    let report = regime_experiment(&w, &checkpoints, ctx.replicas(100), seed, mode)?;
    let first = simulate_replica(&w, steps, seed, 0, mode)?;
    let mut csv = Vec::new();
    first.write_csv(&mut csv)?;
    ctx.out.write("trajectory_0.csv", &csv)?;
    for c in &report.checkpoints {
        let v = &c.velocity[0];
        println!(
            "n={:<8} v.e1 = {:.5} [{:.5}, {:.5}]  R_n/n = {:.4}",
            c.steps, v.mean, v.ci_low, v.ci_high, c.range_fraction.mean
        );
    }
    Ok(to_json(&report))
}

pub fn trap_tail(ctx: &mut Context) -> CommandResult {
    let w = ctx.weights();
    let rep = trap_tail_experiment(&w, ctx.replicas(1_000_000), ctx.seed(), ctx.cfg.hill_k)?;
    println!(
        "kappa = {}  hill = {:.4} [{:.4}, {:.4}]{}",
        rep.kappa,
        rep.tail.estimate,
        rep.tail.ci_low,
        rep.tail.ci_high,
        if rep.out_of_regime { "  (out of regime)" } else { "" }
    );
    Ok(to_json(&rep))
}

pub fn annealed_check(ctx: &mut Context) -> CommandResult {
    let len = ctx.cfg.path_length.unwrap_or(4);
    let weights = match &ctx.cfg.weights {
        Some(w) => vec![w.clone()],
        None => vec![
            Weights::uniform(3, 1.0)?,
            Weights::new(3, vec![2.0, 1.0, 1.0, 1.0, 1.0, 1.0])?,
        ],
    };
    let mut rows = Vec::new();
    let mut ok = true;
    for w in &weights {
        let mut worst = 0.0f64;
        let mut worst_sum = 0.0f64;
        let mut count = 0usize;
        for l in 0..=len {
            let mut total = 0.0;
            for path in enumerate_paths(w.dim(), l) {
                let a = annealed_path_probability(w, &path)?;
                let b = reinforcement_path_probability(w, &path)?;
                worst = worst.max((a - b).abs() / b);
                total += a;
                count += 1;
            }
            worst_sum = worst_sum.max((total - 1.0).abs());
        }
        ok &= worst <= 1e-12 && worst_sum <= 1e-10;
        println!(
            "{:?}: {count} paths, max relative gap {worst:.2e}, max |sum - 1| {worst_sum:.2e}",
            w.alpha()
        );
        rows.push(json!({ "weights": w, "paths": count, "max_relative_error": worst, "max_sum_error": worst_sum }));
    }
    if !ok {
        return Err(Error::DivergenceCondition { max_error: f64::NAN }.into());
    }
    Ok(json!({ "path_length": len, "checks": rows }))
}
