//! Batch front door for the verification toolkit: config-driven runs,
//! single verifications, parameter sweeps, admissibility reports,
//! closed-form constants, the quasi-triangle estimator and the discrete
//! oracle suite.

mod config;
mod output;
mod runner;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hardy_verify::discrete::{best_constant_search, brute_force_d1, integral_hardy_sides, DiscreteSpace};
use hardy_verify::inequalities::Theorem;
use hardy_verify::spaces::estimate_beta;
use hardy_verify::weights::{d1_fractional_hardy, d1_hardy_sobolev, WeightSpec};
use hardy_verify::{QuadratureConfig, SpaceDescriptor};

use config::{expand, parse_config, CaseInstance, CaseSpec, GridValue};
use output::{print_summary_line, sig12, summarize, write_outputs};

#[derive(Parser)]
#[command(
    name = "hardy-verify",
    about = "Numerically checks fractional Hardy-type inequalities on polarisable metric measure spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct QuadOpts {
    /// Truncation radius R for infinite domains
    #[arg(long)]
    radius: Option<f64>,
    /// Per-stratum sample budget
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Emit a JSON report to stdout instead of the text summary
    #[arg(long)]
    json: bool,
}

impl QuadOpts {
    fn apply(&self, mut cfg: QuadratureConfig) -> QuadratureConfig {
        if let Some(r) = self.radius {
            cfg = cfg.with_radius(r);
        }
        if let Some(n) = self.samples {
            cfg.mc_samples = n;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg
    }
}

#[derive(Args, Clone)]
struct CaseOpts {
    /// Space model: euclidean:N, group:Q=..., group:nu=a,b,..., heisenberg:N, hyperbolic:N
    #[arg(long)]
    space: String,
    /// Theorem id (e.g. fractional_hardy, group_hardy, heisenberg_hardy,
    /// fractional_hardy_sobolev, log_holder, log_hardy_sobolev, nash,
    /// integral_hardy)
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: Option<f64>,
    /// Test function id, e.g. power_gaussian(1,1)
    #[arg(long, default_value = "power_gaussian(1,1)")]
    u: String,
    /// Weight family for v(x,y), v(y), z(x): unit, const(c), exp_decay(k),
    /// power(g), radial_table(file)
    #[arg(long, default_value = "unit")]
    weights: String,
    /// g weight for integral_hardy
    #[arg(long)]
    weight_g: Option<String>,
    /// h weight for integral_hardy
    #[arg(long)]
    weight_h: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every case of a config file and write the reports
    Run {
        /// Path to the config file
        config: std::path::PathBuf,
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Verify a single case given on the command line
    Verify {
        #[command(flatten)]
        case: CaseOpts,
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Sweep s (and optionally p, q) over lo:hi:step grids, emitting CSV
    Sweep {
        #[arg(long)]
        space: String,
        #[arg(long)]
        theorem: String,
        /// Value or grid lo:hi:step
        #[arg(long)]
        s: String,
        /// Value or grid lo:hi:step
        #[arg(long)]
        p: String,
        /// Value or grid lo:hi:step
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value = "power_gaussian(1,1)")]
        u: String,
        #[arg(long, default_value = "unit")]
        weights: String,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        csv: Option<String>,
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Admissibility report: D1 and the smallness value
    D1 {
        #[arg(long)]
        space: String,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        /// Compute the Hardy-Sobolev D1 (needs q) instead of the Hardy one
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value = "unit")]
        weights: String,
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Closed-form constants of the group / Heisenberg theorems
    Constants {
        #[arg(long)]
        space: String,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: Option<f64>,
        /// Override the quasi-triangle constant (Heisenberg)
        #[arg(long)]
        beta: Option<f64>,
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Estimate the Heisenberg quasi-triangle constant
    Beta {
        /// Heisenberg index n (points live in R^{2n+1})
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Discrete oracle suite: exact bracket checks on random finite spaces
    Oracle {
        /// Load one space from a matrix file instead of random trials
        #[arg(long)]
        file: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[command(flatten)]
        quad: QuadOpts,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run { config, quad } => {
            let text = std::fs::read_to_string(&config)
                .context(format!("reading config {}", config.display()))?;
            let parsed = parse_config(&text)?;
            let cfg = quad.apply(parsed.quadrature.clone());
            let instances = expand(&parsed.cases)?;
            let results = runner::run_all(&instances, &cfg)?;
            if quad.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&output::json_document(&results))?
                );
            } else {
                for r in &results {
                    print_summary_line(r);
                }
            }
            write_outputs(
                &results,
                parsed.output.json.as_deref(),
                parsed.output.csv.as_deref(),
            )?;
            let (pass, fail, vacuous, hv) = summarize(&results);
            eprintln!(
                "summary: {pass} pass, {fail} fail, {vacuous} vacuous, {hv} hypothesis-violated"
            );
            Ok(if fail > 0 { 2 } else { 0 })
        }
        Command::Verify { case, quad } => {
            let cfg = quad.apply(QuadratureConfig::default());
            let spec = case_spec_from_cli(&case)?;
            let inst = CaseInstance {
                id: spec.id.clone(),
                s: case.s,
                p: case.p,
                q: case.q,
                spec,
            };
            let result = runner::run_case(&inst, &cfg)?;
            if quad.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&output::json_document(&[result]))?
                );
                return Ok(0);
            }
            print_summary_line(&result);
            if let runner::Outcome::Report(rep) = &result.outcome {
                for note in &rep.notes {
                    println!("  note: {note}");
                }
                Ok(if rep.pass == Some(false) { 2 } else { 0 })
            } else {
                Ok(0)
            }
        }
        Command::Sweep {
            space,
            theorem,
            s,
            p,
            q,
            u,
            weights,
            csv,
            quad,
        } => {
            let cfg = quad.apply(QuadratureConfig::default());
            let spec = CaseSpec {
                id: "sweep".into(),
                theorem: Theorem::parse(&theorem).map_err(|e| anyhow!("{e}"))?,
                space,
                s: GridValue::parse_cli(&s, "s")?,
                p: GridValue::parse_cli(&p, "p")?,
                q: q.map(|g| GridValue::parse_cli(&g, "q")).transpose()?,
                function: u,
                weights,
                weight_g: None,
                weight_h: None,
            };
            let instances = expand(std::slice::from_ref(&spec))?;
            let results = runner::run_all(&instances, &cfg)?;
            let table = output::csv_rows(&results);
            match csv {
                Some(path) => {
                    std::fs::write(&path, &table).context(format!("writing {path}"))?;
                    eprintln!("wrote {} rows to {path}", results.len());
                }
                None => print!("{table}"),
            }
            let (_, fail, _, _) = summarize(&results);
            Ok(if fail > 0 { 2 } else { 0 })
        }
        Command::D1 {
            space,
            s,
            p,
            q,
            weights,
            quad,
        } => {
            let cfg = quad.apply(QuadratureConfig::default());
            let space = SpaceDescriptor::from_config_str(&space).map_err(|e| anyhow!("{e}"))?;
            let w = WeightSpec::from_family(&weights).map_err(|e| anyhow!("{e}"))?;
            let rep = match q {
                Some(q) => d1_hardy_sobolev(&space, &w, s, p, q, &cfg),
                None => d1_fractional_hardy(&space, &w, s, p, &cfg),
            }
            .map_err(|e| anyhow!("{e}"))?;
            if quad.json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                println!(
                    "D1 = {} ± {}  smallness = {}  admissible = {}  method = {:?}",
                    sig12(rep.d1),
                    sig12(rep.error_estimate),
                    sig12(rep.smallness),
                    rep.admissible,
                    rep.method
                );
                if let Some(r) = rep.sup_radius {
                    println!("sup attained near r = {}", sig12(r));
                }
                if let Some(w) = &rep.warning {
                    println!("warning: {w}");
                }
            }
            Ok(0)
        }
        Command::Constants {
            space,
            s,
            p,
            q,
            beta,
            quad,
        } => {
            let mut space = SpaceDescriptor::from_config_str(&space).map_err(|e| anyhow!("{e}"))?;
            if let Some(b) = beta {
                space = space.with_beta(b).map_err(|e| anyhow!("{e}"))?;
            }
            let hardy_theorem = match space.kind() {
                hardy_verify::spaces::SpaceKind::Heisenberg { .. } => Theorem::HeisenbergHardy,
                _ => Theorem::GroupHardy,
            };
            let hs_theorem = match space.kind() {
                hardy_verify::spaces::SpaceKind::Heisenberg { .. } => {
                    Theorem::HeisenbergHardySobolev
                }
                _ => Theorem::GroupHardySobolev,
            };
            let mut doc = serde_json::Map::new();
            let hardy =
                hardy_verify::inequalities::closed_form_constant(hardy_theorem, &space, s, p, None);
            match hardy {
                Ok(c) => {
                    if !quad.json {
                        println!(
                            "{}: C = {}  (closed form, |S| = {}, Q = {}, beta = {})",
                            hardy_theorem.as_str(),
                            sig12(c),
                            sig12(space.sphere_measure()),
                            sig12(space.homogeneous_dimension()),
                            sig12(space.beta()),
                        );
                    }
                    doc.insert(hardy_theorem.as_str().into(), serde_json::json!(sig12(c)));
                }
                Err(e) => {
                    if !quad.json {
                        println!("{}: {e}", hardy_theorem.as_str());
                    }
                    doc.insert(hardy_theorem.as_str().into(), serde_json::json!(e.to_string()));
                }
            }
            if let Some(q) = q {
                let hs = hardy_verify::inequalities::closed_form_constant(
                    hs_theorem,
                    &space,
                    s,
                    p,
                    Some(q),
                );
                match hs {
                    Ok(c) => {
                        if !quad.json {
                            println!("{}: C = {}", hs_theorem.as_str(), sig12(c));
                        }
                        doc.insert(hs_theorem.as_str().into(), serde_json::json!(sig12(c)));
                    }
                    Err(e) => {
                        if !quad.json {
                            println!("{}: {e}", hs_theorem.as_str());
                        }
                        doc.insert(hs_theorem.as_str().into(), serde_json::json!(e.to_string()));
                    }
                }
            }
            if quad.json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            }
            Ok(0)
        }
        Command::Beta { n, quad } => {
            let cfg = quad.apply(QuadratureConfig::default().with_samples(1_000_000));
            let space = SpaceDescriptor::heisenberg(n).map_err(|e| anyhow!("{e}"))?;
            let est = estimate_beta(&space, &cfg).map_err(|e| anyhow!("{e}"))?;
            if quad.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "beta_hat": sig12(est.beta_hat),
                        "max_ratio": sig12(est.max_ratio),
                        "samples_used": est.samples_used,
                        "note": est.note,
                    })
                );
            } else {
                println!(
                    "beta_hat = {}  (max ratio {}, {} samples)",
                    sig12(est.beta_hat),
                    sig12(est.max_ratio),
                    est.samples_used
                );
                println!("{}", est.note);
            }
            Ok(0)
        }
        Command::Oracle { file, trials, quad } => oracle_suite(file, trials, &quad),
    }
}

fn case_spec_from_cli(case: &CaseOpts) -> Result<CaseSpec> {
    SpaceDescriptor::from_config_str(&case.space).map_err(|e| anyhow!("{e}"))?;
    hardy_verify::corpus::builtin(&case.u).map_err(|e| anyhow!("{e}"))?;
    WeightSpec::from_family(&case.weights).map_err(|e| anyhow!("{e}"))?;
    Ok(CaseSpec {
        id: format!("{}-{}", case.theorem, case.u),
        theorem: Theorem::parse(&case.theorem).map_err(|e| anyhow!("{e}"))?,
        space: case.space.clone(),
        s: GridValue::parse_cli(&case.s.to_string(), "s")?,
        p: GridValue::parse_cli(&case.p.to_string(), "p")?,
        q: case.q.map(|q| GridValue::parse_cli(&q.to_string(), "q")).transpose()?,
        function: case.u.clone(),
        weights: case.weights.clone(),
        weight_g: case.weight_g.clone(),
        weight_h: case.weight_h.clone(),
    })
}

fn oracle_suite(file: Option<std::path::PathBuf>, trials: usize, quad: &QuadOpts) -> Result<i32> {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let seed = quad.seed.unwrap_or(7);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::new();

    let spaces: Vec<DiscreteSpace> = match file {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .context(format!("reading {}", path.display()))?;
            vec![DiscreteSpace::from_matrix_text(&text).map_err(|e| anyhow!("{e}"))?]
        }
        None => (0..trials)
            .map(|_| {
                let n = rng.gen_range(3..13);
                DiscreteSpace::random(n, &mut rng)
            })
            .collect(),
    };

    let mut all_ok = true;
    for (k, space) in spaces.iter().enumerate() {
        let n = space.len();
        let g: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..2.0)).collect();
        let h: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..2.0)).collect();
        let p = rng.gen_range(1.05..4.0);
        let q = rng.gen_range(p..4.2);
        let pp = p / (p - 1.0);
        let d1 = brute_force_d1(space, &g, &h, p, q).map_err(|e| anyhow!("{e}"))?;
        let ch = pp.powf(1.0 / pp) * p.powf(1.0 / q) * d1.d1;
        let mut bracket_ok = true;
        for _ in 0..200 {
            let f: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
            let (lhs, rhs) =
                integral_hardy_sides(space, &f, &g, &h, p, q).map_err(|e| anyhow!("{e}"))?;
            if lhs > ch * rhs * (1.0 + 1e-12) {
                bracket_ok = false;
            }
        }
        let search =
            best_constant_search(space, &g, &h, p, q, 50, seed + k as u64).map_err(|e| anyhow!("{e}"))?;
        let search_ok = search.c_hat <= search.upper + 1e-9 && search.c_hat >= search.d1 * (1.0 - 1e-9);
        let ok = bracket_ok && search_ok;
        all_ok &= ok;
        outcomes.push(serde_json::json!({
            "trial": k,
            "points": n,
            "p": sig12(p),
            "q": sig12(q),
            "d1": sig12(search.d1),
            "c_hat": sig12(search.c_hat),
            "upper": sig12(search.upper),
            "bracket_ok": bracket_ok,
            "search_in_bracket": search_ok,
        }));
        if !quad.json {
            println!(
                "trial {k:>3}: {}  d1 = {}  c_hat = {}  upper = {}",
                if ok { "OK " } else { "FAIL" },
                sig12(search.d1),
                sig12(search.c_hat),
                sig12(search.upper)
            );
        }
    }
    if quad.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "seed": seed,
                "trials": outcomes,
                "all_ok": all_ok,
            }))?
        );
    } else {
        let okc = outcomes
            .iter()
            .filter(|o| o["bracket_ok"] == true && o["search_in_bracket"] == true)
            .count();
        println!("{okc}/{} bracket checks pass", outcomes.len());
    }
    if all_ok {
        Ok(0)
    } else {
        bail!("discrete oracle found a bracket violation (this signals a bug)")
    }
}
