use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use captl_core::captl::{parse_query, parse_requirement, Requirement};
use captl_core::casestudy::{gen_meda, gen_robot, parse_size, CaseStudy, MedaParams, ParamError, RobotParams};
use captl_core::mdp::{parse_model, Cardinality, Mdp, StateSet};
use captl_core::oracle::{accepting_bsccs, default_horizon, simulate as run_simulation};
use captl_core::pctl::{check_query, Dtmc, SolveOptions};
use captl_core::synthesis::{
    compose_protocol, induced_to_dot, partition_states, product_to_dot, synth_pctl, synth_persistence, InducedChain, PctlOutcome,
    PersistenceOutcome, Protocol,
};

use crate::error::CliError;
use crate::stats::{write_csv, RunStats};
use crate::{AlgorithmArg, CaseArg, ExportDotArgs, GenArgs, PartitionArgs, Problem, SimulateArgs, StatsArgs, SynthArgs, VerifyArgs};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes to `path`, or to standard output without one.
fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Internal(e.to_string())),
    }
}

fn warn_deadlocks(m: &Mdp) {
    let dead = m.deadlocks();
    if dead.is_empty() {
        return;
    }
    let shown: Vec<String> = dead.iter().take(5).map(|&s| m.display_name(s)).collect();
    let more = if dead.len() > shown.len() { ", ..." } else { "" };
    eprintln!("warning: {} deadlock state(s) treated as absorbing: {}{more}", dead.len(), shown.join(", "));
}

fn load_model(path: &Path) -> Result<(Mdp, Duration), CliError> {
    let t = Instant::now();
    let m = parse_model(&read(path)?)?;
    let took = t.elapsed();
    warn_deadlocks(&m);
    Ok((m, took))
}

fn load_requirement(path: &Path) -> Result<Requirement, CliError> {
    Ok(parse_requirement(&read(path)?)?)
}

enum Outcome {
    Pctl { out: PctlOutcome, induced: InducedChain, synthesis: Duration, compose: Duration },
    Persistence(PersistenceOutcome),
}

impl Outcome {
    fn protocol(&self) -> &Protocol {
        match self {
            Outcome::Pctl { out, .. } => &out.protocol,
            Outcome::Persistence(out) => &out.protocol,
        }
    }

    fn warnings(&self) -> &[String] {
        match self {
            Outcome::Pctl { out, .. } => &out.warnings,
            Outcome::Persistence(out) => &out.warnings,
        }
    }

    fn dot(&self, m: &Mdp, req: &Requirement) -> String {
        match self {
            Outcome::Pctl { induced, .. } => induced_to_dot(m, req, induced),
            Outcome::Persistence(out) => product_to_dot(m, req, &out.product),
        }
    }

    /// Chain the protocol is verified on, and the states a run must reach.
    fn acceptance(&self) -> Result<(Dtmc, StateSet), CliError> {
        match self {
            Outcome::Pctl { out, induced, .. } => {
                let accept = induced.states_where(|q, s| out.sure[q].contains(s));
                Ok((induced.chain.clone(), accept))
            }
            Outcome::Persistence(out) => {
                let chain = out.product.to_dtmc()?;
                let accept = accepting_bsccs(&chain, |v| {
                    let st = &out.product.states[v];
                    let blocks = out.partition.get(st.objective)?;
                    blocks.solved.formula_states.contains(st.state).then_some(st.objective)
                });
                Ok((chain, accept))
            }
        }
    }

    fn stats(&self, case: String, m: &Mdp, construction: Duration) -> RunStats {
        let (product, synthesis, product_time, verification) = match self {
            Outcome::Pctl { induced, synthesis, compose, .. } => {
                let chain = &induced.chain;
                let size = Cardinality {
                    states: chain.num_states(),
                    transitions: chain.rows.iter().map(Vec::len).sum(),
                    choices: chain.rows.iter().filter(|r| !r.is_empty()).count(),
                };
                (size, *synthesis, *compose, Duration::ZERO)
            }
            Outcome::Persistence(out) => {
                let p = &out.product;
                let size = Cardinality { states: p.num_states(), transitions: p.num_transitions(), choices: p.num_choices() };
                (size, out.times.partition, out.times.product, out.times.verification)
            }
        };
        RunStats { case, model: m.cardinality(), product, construction, synthesis, product_time, verification, c: self.protocol().c }
    }
}

fn run(m: &Mdp, req: &Requirement, algorithm: AlgorithmArg, opts: &SolveOptions) -> Result<Outcome, CliError> {
    match algorithm {
        AlgorithmArg::Pctl => {
            let t = Instant::now();
            let out = synth_pctl(m, req, opts)?;
            let synthesis = t.elapsed();
            let t = Instant::now();
            let induced = compose_protocol(m, req, &out.protocol)?;
            Ok(Outcome::Pctl { out, induced, synthesis, compose: t.elapsed() })
        }
        AlgorithmArg::Persistence => Ok(Outcome::Persistence(synth_persistence(m, req, opts)?)),
    }
}

fn load_and_run(p: &Problem) -> Result<(Mdp, Requirement, Outcome, Duration), CliError> {
    let opts = p.numeric.options()?;
    let (m, construction) = load_model(&p.model)?;
    let req = load_requirement(&p.req)?;
    let out = run(&m, &req, p.algorithm, &opts)?;
    for w in out.warnings() {
        eprintln!("warning: {w}");
    }
    Ok((m, req, out, construction))
}

pub fn synth(a: &SynthArgs) -> Result<(), CliError> {
    let (m, req, out, construction) = load_and_run(&a.problem)?;
    if let Some(path) = &a.out {
        write(path, &out.protocol().to_json())?;
    }
    if let Some(path) = &a.dot {
        write(path, &out.dot(&m, &req))?;
    }
    if let Some(path) = &a.stats {
        let row = out.stats(a.problem.model.display().to_string(), &m, construction);
        let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        write_csv(file, &[row]).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    println!("c={:.6}", out.protocol().c);
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let opts = a.numeric.options()?;
    let (m, _) = load_model(&a.model)?;
    let query = parse_query(&a.query)?;
    let r = check_query(&m, &query, &opts)?;
    println!("{:.6}", r.value);
    if let Some(sat) = r.sat {
        println!("{}", if sat { "SAT" } else { "UNSAT" });
    }
    Ok(())
}

pub fn partition(a: &PartitionArgs) -> Result<(), CliError> {
    let opts = a.numeric.options()?;
    let (m, _) = load_model(&a.model)?;
    let req = load_requirement(&a.req)?;
    let part = partition_states(&m, &req, &opts)?;
    for w in &part.warnings {
        eprintln!("warning: {w}");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(["state", "objective", "block", "x_value"]).map_err(csv_err)?;
    for blocks in &part.explored {
        let q = &req.objectives[blocks.objective].id;
        for s in part.reach.iter() {
            let block = blocks.block_of(s).expect("blocks cover the reachable states");
            let x = format!("{:.6}", blocks.solved.values().at(s));
            w.write_record([s.to_string().as_str(), q, &req.objectives[block].id, &x]).map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    emit(a.out.as_deref(), &String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn export_dot(a: &ExportDotArgs) -> Result<(), CliError> {
    let (m, req, out, _) = load_and_run(&a.problem)?;
    emit(a.dot.as_deref(), &out.dot(&m, &req))
}

pub fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    if a.runs == 0 {
        return Err(CliError::Input("--runs must be positive".into()));
    }
    let (_, _, out, _) = load_and_run(&a.problem)?;
    let (chain, accept) = out.acceptance()?;
    let horizon = a.horizon.unwrap_or_else(|| default_horizon(&chain));
    let stats = run_simulation(&chain, &accept, a.runs, horizon, a.seed);
    let c = out.protocol().c;
    println!("c={c:.6}");
    println!("runs={} hits={} horizon={} seed={}", stats.runs, stats.hits, stats.horizon, a.seed);
    println!("estimate={:.6}", stats.mean);
    println!("std_error={:.6}", stats.std_error);
    println!("within_3sigma={}", (stats.mean - c).abs() <= stats.half_width(3.0).max(1e-12));
    Ok(())
}

fn generate(case: CaseArg, size: Option<&str>) -> Result<(CaseStudy, String), CliError> {
    let (name, default) = match case {
        CaseArg::Robot => ("robot", "3x3"),
        CaseArg::Meda => ("meda", "8x5"),
    };
    let text = size.unwrap_or(default);
    let (w, h) = parse_size(text)?;
    let fit = |v: usize| u32::try_from(v).map_err(|_| ParamError(format!("size {text} is too large")));
    let (w, h) = (fit(w)?, fit(h)?);
    let cs = match case {
        CaseArg::Robot => gen_robot(&RobotParams::grid(w, h))?,
        CaseArg::Meda => gen_meda(&MedaParams::segment(w, h))?,
    };
    Ok((cs, format!("{name}_{w}x{h}")))
}

pub fn stats(a: &StatsArgs) -> Result<(), CliError> {
    let opts = a.numeric.options()?;
    let mut rows = Vec::new();
    match (&a.model, &a.req, a.case) {
        (Some(model), Some(req), _) => {
            let (m, construction) = load_model(model)?;
            let req = load_requirement(req)?;
            let out = run(&m, &req, a.algorithm, &opts)?;
            rows.push(out.stats(model.display().to_string(), &m, construction));
        }
        (_, _, Some(case)) => {
            for size in &a.size {
                let t = Instant::now();
                let (cs, name) = generate(case, Some(size))?;
                let construction = t.elapsed();
                warn_deadlocks(&cs.model);
                let req = parse_requirement(&cs.requirement)?;
                let out = run(&cs.model, &req, a.algorithm, &opts)?;
                rows.push(out.stats(name, &cs.model, construction));
            }
        }
        _ => return Err(CliError::Input("stats needs --model and --req, or --case with --size".into())),
    }
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).map_err(|e| CliError::Internal(e.to_string()))?;
    emit(a.out.as_deref(), &String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn gen(a: &GenArgs) -> Result<(), CliError> {
    let (cs, name) = generate(a.case, a.size.as_deref())?;
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let model: PathBuf = a.out.join(format!("{name}.json"));
    let req: PathBuf = a.out.join(format!("{name}.captl"));
    write(&model, &cs.model_json())?;
    write(&req, &cs.requirement)?;
    println!("{}", model.display());
    println!("{}", req.display());
    eprintln!("{} states, {} choices", cs.model.num_states(), cs.model.cardinality().choices);
    Ok(())
}
