use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mpd_core::functional::{
    check_family, lambda_interval, minkowski_with_witness, order_witness, separate_transformers, Functional,
    GeneratorFunctional, HealthSuite, Selectors, TransformerSeparation,
};
use mpd_core::hull::HullSide;
use mpd_core::io::{
    ext_json, interval_json, interval_predicate_json, rat_json, to_canonical_string, transformer_json,
    valuation_json, values_json, Loader,
};
use mpd_core::lang::{check_duality, denote, duality_posts, fuel_from, parse_program, wp_interval, Program, StateSpace};
use mpd_core::laws::{
    expect_all, power_suite, randomset_witnesses, run_suite, valuation_suite, PowerModel, ValuationModel,
};
use mpd_core::{FinitePoset, Flavor, RangeMode};

const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Parser)]
#[command(name = "mpd", version, about = "Exact checks for mixed probabilistic/nondeterministic powerdomains")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every sampled test case.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Number of samples (laws, random posts, random health predicates).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Largest poset accepted from input files.
    #[arg(long, global = true, default_value_t = 16)]
    cap_elements: usize,
    /// Largest number of program variables.
    #[arg(long, global = true, default_value_t = mpd_core::lang::DEFAULT_VAR_CAP)]
    cap_vars: usize,
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    #[arg(long, global = true, value_parser = parse_flavor)]
    flavor: Option<Flavor>,
    /// Loop unrolling depth.
    #[arg(long, global = true, allow_negative_numbers = true)]
    fuel: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Unit,
    Extended,
}

impl From<Mode> for RangeMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Unit => RangeMode::Unit,
            Mode::Extended => RangeMode::Extended,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LawModel {
    Valuation,
    Powerdomain,
    Randomset,
}

fn parse_flavor(s: &str) -> Result<Flavor, String> {
    s.parse().map_err(|e: mpd_core::Error| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Run the law suite of a model.
    CheckLaws {
        #[arg(long, value_enum)]
        model: LawModel,
        /// Poset file for the valuation and powerdomain models.
        #[arg(long)]
        poset: Option<PathBuf>,
        /// Ground set size for the random-set model.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Witnesses about distributions over nonempty finite sets.
    Randomset {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Print the state transformer denoted by a program.
    Run { program: PathBuf },
    /// Print the weakest preexpectation of a post.
    Wp {
        #[arg(long)]
        post: PathBuf,
        program: PathBuf,
    },
    /// Compare wp with the functional of the denotation.
    Duality { program: PathBuf },
    /// Compare two power elements.
    Order { left: PathBuf, right: PathBuf },
    /// Evaluate the functional of a power element on a predicate.
    Lambda { element: PathBuf, predicate: PathBuf },
    /// Check the healthiness laws of a state transformer's predicate transformer.
    Healthiness { transformer: PathBuf },
    /// Minkowski functional of the lower hull of a power element's generators.
    Minkowski { element: PathBuf, valuation: PathBuf },
    /// Find a predicate telling two state transformers apart.
    Separate { left: PathBuf, right: PathBuf },
}

struct Outcome {
    json: Value,
    ok: bool,
}

impl Outcome {
    fn report(json: Value, ok: bool) -> Self {
        Outcome { json, ok }
    }

    fn info(json: Value) -> Self {
        Outcome { json, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{}", to_canonical_string(&out.json));
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    let loader = Loader::new(c.cap_elements);
    let mode: Option<RangeMode> = c.mode.map(Into::into);
    match &cli.command {
        Command::CheckLaws { model, poset, n } => check_laws(c, &loader, *model, poset.as_deref(), *n),
        Command::Randomset { n } => {
            let r = randomset_witnesses(*n, c.samples.unwrap_or(200), c.seed).context("randomset")?;
            Ok(Outcome::report(serde_json::to_value(&r)?, r.passed))
        }
        Command::Run { program } => {
            let (prog, space) = load_program(program, c.cap_vars)?;
            let s = denote(&prog, &space, need_flavor(c)?, need_fuel(c)?)?;
            Ok(Outcome::info(transformer_json(&s)))
        }
        Command::Wp { post, program } => {
            let (prog, space) = load_program(program, c.cap_vars)?;
            let g = loader
                .interval_predicate(post, mode, Some(space.poset()))
                .with_context(|| format!("reading post {}", post.display()))?;
            let pre = wp_interval(&prog, &space, need_flavor(c)?, &g, need_fuel(c)?)?;
            Ok(Outcome::info(interval_predicate_json(&pre)))
        }
        Command::Duality { program } => {
            let (prog, space) = load_program(program, c.cap_vars)?;
            let flavors = c.flavor.map_or(Flavor::ALL.to_vec(), |f| vec![f]);
            let fuels = match c.fuel {
                Some(k) => vec![fuel_from(k)?],
                None => (0..=3).collect(),
            };
            let posts = duality_posts(space.poset(), mode.unwrap_or_default(), c.samples.unwrap_or(20), c.seed)?;
            let mut reports = Vec::new();
            for &f in &flavors {
                for &k in &fuels {
                    reports.push(check_duality(&prog, &space, f, k, &posts)?);
                }
            }
            let ok = reports.iter().all(|r| r.passed);
            Ok(Outcome::report(json!({ "passed": ok, "reports": reports }), ok))
        }
        Command::Order { left, right } => {
            let x = loader.power_element(left).with_context(|| input(left))?;
            let y = loader.power_element(right).with_context(|| input(right))?;
            let (leq, geq) = (x.po_leq(&y)?, y.po_leq(&x)?);
            let mut out = json!({ "leq": leq, "geq": geq, "equal": leq && geq });
            if let Some(w) = order_witness(&x, &y)? {
                out["witness"] = json!({
                    "side": side_name(w.side),
                    "predicate": values_json(&w.predicate),
                    "left": interval_json(&w.left),
                    "right": interval_json(&w.right),
                });
            }
            Ok(Outcome::info(out))
        }
        Command::Lambda { element, predicate } => {
            let x = loader.power_element(element).with_context(|| input(element))?;
            let g = loader
                .interval_predicate(predicate, mode, Some(x.poset()))
                .with_context(|| input(predicate))?;
            let v = lambda_interval(&x, &g)?;
            Ok(Outcome::info(json!({ "flavor": x.flavor().as_str(), "value": interval_json(&v) })))
        }
        Command::Healthiness { transformer } => {
            let t = loader.generator_table(transformer).with_context(|| input(transformer))?;
            let suite = HealthSuite::generate(&t.target, mode.unwrap_or_default(), c.samples.unwrap_or(8), c.seed)?;
            let selectors = Selectors::for_flavor(t.flavor);
            let fs = t
                .rows
                .iter()
                .map(|gens| GeneratorFunctional::raw(&t.target, gens.clone(), selectors))
                .collect::<mpd_core::Result<Vec<_>>>()?;
            let family: Vec<(String, &dyn Functional)> = fs
                .iter()
                .enumerate()
                .map(|(i, f)| (t.source.name(i).to_string(), f as &dyn Functional))
                .collect();
            let report = check_family(t.flavor, &family, &suite)?;
            Ok(Outcome::report(serde_json::to_value(&report)?, report.passed))
        }
        Command::Minkowski { element, valuation } => {
            let x = loader.power_element(element).with_context(|| input(element))?;
            let a = loader.valuation(valuation).with_context(|| input(valuation))?;
            let v = minkowski_with_witness(x.generators(), &a)?;
            let mut out = json!({ "value": ext_json(&v.value) });
            if let Some(w) = v.witness {
                out["witness"] = json!({
                    "member": valuation_json(&w.member),
                    "weights": w.weights.iter().map(rat_json).collect::<Vec<_>>(),
                });
            }
            Ok(Outcome::info(out))
        }
        Command::Separate { left, right } => {
            let s1 = loader.transformer(left).with_context(|| input(left))?;
            let s2 = loader.transformer(right).with_context(|| input(right))?;
            let out = match separate_transformers(&s1, &s2)? {
                TransformerSeparation::Equal => json!({ "result": "equal" }),
                TransformerSeparation::Witness {
                    state,
                    predicate,
                    left,
                    right,
                } => json!({
                    "result": "witness",
                    "state": state,
                    "predicate": values_json(&predicate),
                    "left": interval_json(&left),
                    "right": interval_json(&right),
                }),
            };
            Ok(Outcome::info(out))
        }
    }
}

fn check_laws(c: &Common, loader: &Loader, model: LawModel, poset: Option<&Path>, n: usize) -> Result<Outcome> {
    let samples = c.samples.unwrap_or(200);
    let poset = match poset {
        Some(p) => loader.poset(p).with_context(|| input(p))?,
        None => FinitePoset::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")], c.cap_elements)?,
    };
    let reports = match model {
        LawModel::Valuation => {
            let m = ValuationModel { poset, den: 4 };
            vec![run_suite(&m, &expect_all(valuation_suite()), samples, c.seed)?]
        }
        LawModel::Powerdomain => {
            let flavors = c.flavor.map_or(Flavor::ALL.to_vec(), |f| vec![f]);
            let suite = expect_all(power_suite());
            flavors
                .into_iter()
                .map(|flavor| {
                    let m = PowerModel {
                        flavor,
                        poset: poset.clone(),
                        max_gens: 3,
                        den: 4,
                    };
                    run_suite(&m, &suite, samples, c.seed)
                })
                .collect::<mpd_core::Result<Vec<_>>>()?
        }
        LawModel::Randomset => vec![randomset_witnesses(n, samples, c.seed)?.laws],
    };
    let ok = reports.iter().all(|r| r.passed);
    Ok(Outcome::report(json!({ "passed": ok, "reports": reports }), ok))
}

fn load_program(path: &Path, cap_vars: usize) -> Result<(Program, StateSpace)> {
    let text = std::fs::read_to_string(path).with_context(|| input(path))?;
    let prog = parse_program(&text).with_context(|| input(path))?;
    let space = StateSpace::of(&prog, cap_vars).with_context(|| input(path))?;
    Ok((prog, space))
}

fn need_flavor(c: &Common) -> Result<Flavor> {
    match c.flavor {
        Some(f) => Ok(f),
        None => bail!("--flavor is required"),
    }
}

fn need_fuel(c: &Common) -> Result<u32> {
    match c.fuel {
        Some(k) => Ok(fuel_from(k)?),
        None => bail!("--fuel is required"),
    }
}

fn input(path: &Path) -> String {
    format!("in {}", path.display())
}

fn side_name(side: HullSide) -> &'static str {
    match side {
        HullSide::Lower => "lower",
        HullSide::Upper => "upper",
    }
}
