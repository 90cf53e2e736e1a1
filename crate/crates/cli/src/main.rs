//! `rbg`: command-line access to the rbgroups library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 budget exceeded.

use std::io::{self, Write};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rbgroups::cohomology::{all_actions, h2_rbe, z1_rbe, RbModule, DEFAULT_BUDGET};
use rbgroups::extensions::{build_abelian_extension, build_split_extension, classify_abelian, Extension};
use rbgroups::group::{endomorphisms, CayleyTable};
use rbgroups::operators::{enumerate_rb_operators_with, rb_violation, EnumerationOptions, OperatorRecord, DEFAULT_ENUMERATION_BOUND};
use rbgroups::wells::check_wells_exactness;
use rbgroups::{make_group, Error, FiniteGroup, GroupMap, RotaBaxterOperator};

#[derive(Parser)]
#[command(name = "rbg", version, about = "Rota-Baxter operators on finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cap on brute-force candidate counts.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Largest group order accepted by enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_BOUND)]
    bound: usize,
    /// Report elapsed time (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List every RB operator on a group, one per line, then the count.
    Enumerate {
        #[arg(long)]
        group: String,
    },
    /// Check that an operator file satisfies the RB law.
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        operator: String,
    },
    /// Dump the skew brace induced by an operator.
    Brace {
        #[arg(long)]
        group: String,
        #[arg(long)]
        operator: String,
    },
    /// Orders of Z², B², H² and Z¹ for a module.
    Cohomology(ModuleArgs),
    /// Build an extension for every 2-cocycle and count equivalence classes.
    Classify(ModuleArgs),
    /// Build the split extension for a module and a map g.
    Split {
        #[command(flatten)]
        module: ModuleArgs,
        /// Images g(h) for h = 1..|H|-1, comma separated.
        #[arg(long, default_value = "")]
        g: String,
    },
    /// Wells sequence report for the extension of a given H² class.
    Wells {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 0)]
        class: usize,
    },
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long = "H")]
    h: String,
    #[arg(long = "I")]
    i: String,
    /// `trivial` or an index into the list of actions.
    #[arg(long, default_value = "trivial")]
    action: String,
    /// `zero`, `inversion`, an enumeration index, or an operator file.
    #[arg(long = "RH", default_value = "zero")]
    rh: String,
    /// `zero`, `id`, an endomorphism index, or an operator file.
    #[arg(long = "RI", default_value = "zero")]
    ri: String,
}

enum Failure {
    Usage(String),
    Verification(Value),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::BoundExceeded { .. } => Failure::Budget(e.to_string()),
            Error::NotRotaBaxter { x, y } => Failure::Verification(json!({ "error": e.to_string(), "witness": [x, y] })),
            Error::SplitCondition { x, y } => Failure::Verification(json!({ "error": e.to_string(), "witness": [x, y] })),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx {
    format: Format,
    budget: u128,
    workers: Option<usize>,
    bound: usize,
    timing: bool,
    out: io::StdoutLock<'static>,
}

impl Ctx {
    fn emit(&mut self, v: &Value) {
        let text = match self.format {
            Format::Json => v.to_string(),
            Format::Text => render_text(v),
        };
        // a closed pipe is not worth a panic
        let _ = writeln!(self.out, "{text}");
    }

    fn group(&self, desc: &str) -> std::result::Result<Arc<FiniteGroup>, Failure> {
        let g = if desc.ends_with(".json") { CayleyTable::load(desc)? } else { make_group(desc)? };
        Ok(Arc::new(g))
    }
}

fn render_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn labels(g: &FiniteGroup, images: &[usize]) -> Value {
    json!(images.iter().map(|&x| g.label(x)).collect::<Vec<_>>())
}

fn load_operator(g: &Arc<FiniteGroup>, path: &str) -> std::result::Result<Vec<usize>, Failure> {
    Ok(OperatorRecord::load(path)?.resolve(g)?)
}

fn parse_index(s: &str, what: &str, len: usize) -> std::result::Result<usize, Failure> {
    let k: usize = s.parse().map_err(|_| Failure::Usage(format!("cannot read {what} `{s}`")))?;
    if k >= len {
        return Err(Failure::Usage(format!("{what} index {k} out of range (0..{len})")));
    }
    Ok(k)
}

fn module_from(ctx: &Ctx, a: &ModuleArgs) -> std::result::Result<RbModule, Failure> {
    let (h, i) = (ctx.group(&a.h)?, ctx.group(&a.i)?);
    let rh = match a.rh.as_str() {
        "zero" => RotaBaxterOperator::zero(Arc::clone(&h)),
        "inversion" => RotaBaxterOperator::inversion(Arc::clone(&h)),
        s if s.ends_with(".json") => RotaBaxterOperator::new(Arc::clone(&h), load_operator(&h, s)?)?,
        s => {
            let opts = EnumerationOptions { bound: ctx.bound, workers: ctx.workers };
            let mut ops = enumerate_rb_operators_with(&h, &opts)?;
            let k = parse_index(s, "RH", ops.len())?;
            ops.swap_remove(k)
        }
    };
    let n = i.order();
    let ri = match a.ri.as_str() {
        "zero" => GroupMap::constant_identity(n),
        "id" => GroupMap::identity(n),
        s if s.ends_with(".json") => GroupMap::new(load_operator(&i, s)?),
        s => {
            let mut endos = endomorphisms(&i)?;
            let k = parse_index(s, "RI", endos.len())?;
            endos.swap_remove(k)
        }
    };
    let mu = match a.action.as_str() {
        "trivial" => RbModule::trivial_action(h.order(), n),
        s => {
            let mut acts = all_actions(&h, &i)?;
            let k = parse_index(s, "action", acts.len())?;
            acts.swap_remove(k)
        }
    };
    Ok(RbModule::new_checked(rh, i, ri, mu)?)
}

fn extension_json(e: &Extension) -> Value {
    json!({
        "order": e.group().order(),
        "labels": e.group().labels(),
        "table": e.group().rows(),
        "operator": e.e().images(),
        "section": e.section().images(),
        "has_homomorphic_section": e.homomorphic_section().is_some(),
    })
}

fn run(cli: Cli, ctx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    match cli.command {
        Command::Enumerate { group } => {
            let g = ctx.group(&group)?;
            let opts = EnumerationOptions { bound: ctx.bound, workers: ctx.workers };
            let ops = enumerate_rb_operators_with(&g, &opts)?;
            for r in &ops {
                let line = match ctx.format {
                    Format::Json => json!({ "images": r.images() }),
                    Format::Text => Value::String(
                        g.elements().map(|x| format!("{} -> {}", g.label(x), g.label(r.apply(x)))).collect::<Vec<_>>().join(", "),
                    ),
                };
                ctx.emit(&line);
            }
            let mut summary = json!({ "count": ops.len() });
            if ctx.timing {
                summary["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            ctx.emit(&summary);
        }
        Command::Verify { group, operator } => {
            let g = ctx.group(&group)?;
            let images = load_operator(&g, &operator)?;
            if images.len() != g.order() || images.iter().any(|&x| x >= g.order()) {
                return Err(Failure::Usage("operator table does not fit the group".into()));
            }
            if let Some((x, y)) = rb_violation(&g, &images) {
                return Err(Failure::Verification(json!({
                    "rota_baxter": false,
                    "witness": [g.label(x), g.label(y)],
                })));
            }
            ctx.emit(&json!({ "rota_baxter": true, "images": labels(&g, &images) }));
        }
        Command::Brace { group, operator } => {
            let g = ctx.group(&group)?;
            let r = RotaBaxterOperator::new(Arc::clone(&g), load_operator(&g, &operator)?)?;
            let brace = r.induced_skew_brace();
            let check = brace.check();
            let mut v = serde_json::to_value(&brace).map_err(|e| Failure::Usage(e.to_string()))?;
            v["is_skew_brace"] = json!(check.is_ok());
            if let Err(w) = check {
                v["violation"] = json!(w.to_string());
                return Err(Failure::Verification(v));
            }
            ctx.emit(&v);
        }
        Command::Cohomology(a) => {
            let m = module_from(ctx, &a)?;
            let h2 = h2_rbe(&m, ctx.budget)?;
            let mut v = serde_json::to_value(h2.report()).map_err(|e| Failure::Usage(e.to_string()))?;
            v["order_Z1"] = json!(z1_rbe(&m, ctx.budget)?.len());
            ctx.emit(&v);
        }
        Command::Classify(a) => {
            let m = module_from(ctx, &a)?;
            let (report, _) = classify_abelian(&m, ctx.budget)?;
            let v = serde_json::to_value(&report).map_err(|e| Failure::Usage(e.to_string()))?;
            if !report.matches {
                return Err(Failure::Verification(v));
            }
            ctx.emit(&v);
        }
        Command::Split { module, g } => {
            let m = module_from(ctx, &module)?;
            let mut values = vec![0];
            for part in g.split(',').filter(|s| !s.trim().is_empty()) {
                values.push(part.trim().parse().map_err(|_| Failure::Usage(format!("cannot read g value `{part}`")))?);
            }
            if values.len() == 1 {
                values.resize(m.h_order(), 0);
            }
            let ri = RotaBaxterOperator::new(Arc::clone(m.i_arc()), m.r_i_map().images().to_vec())?;
            let e = build_split_extension(m.h_op(), &ri, m.action(), &values)?;
            ctx.emit(&extension_json(&e));
        }
        Command::Wells { module, class } => {
            let m = module_from(ctx, &module)?;
            let h2 = h2_rbe(&m, ctx.budget)?;
            let k = parse_index(&class.to_string(), "class", h2.order())?;
            let ae = build_abelian_extension(&m, &h2.representatives()[k])?;
            let report = check_wells_exactness(&ae, ctx.budget)?;
            let v = serde_json::to_value(&report).map_err(|e| Failure::Usage(e.to_string()))?;
            if !report.passed() {
                return Err(Failure::Verification(v));
            }
            ctx.emit(&v);
        }
    }
    if ctx.timing {
        eprintln!("elapsed {:?}", start.elapsed());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut ctx = Ctx {
        format: cli.format,
        budget: cli.budget,
        workers: cli.workers,
        bound: cli.bound,
        timing: cli.timing,
        out: io::stdout().lock(),
    };
    if ctx.budget == 0 {
        eprintln!("error: --budget must be positive");
        return ExitCode::from(2);
    }
    match run(cli, &mut ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(v)) => {
            ctx.emit(&v);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
