mod load;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qk_core::algebras::{central_quotient, hochschild_homology_with, kaehler_differentials, Bimodule, HochschildOptions};
use qk_core::comparison::{self as cmp, BatteryConfig, ComparisonReport, QuillenInstance};
use qk_core::groups::{
    abelianize_group, augmentation_ideal, coinvariants, group_cohomology_with, group_homology_with, split_extension_fixtures,
    BarOptions, FinGroup, ZGRep,
};
use qk_core::{Exec, FGAbelianGroup, Limits, QkError, Result};
use serde_json::{json, Value};

use output::{ErrorInfo, Format, Record, Sink};

#[derive(Parser)]
#[command(name = "qk", version, about = "Exact Quillen and abelian (co)homology checks")]
struct Cli {
    /// Highest degree computed or compared.
    #[arg(long, global = true, default_value_t = 3)]
    max_degree: usize,
    /// Cap on the entry count of any single matrix (accepts `4e6`).
    #[arg(long, global = true, env = "QK_ENTRY_CAP", default_value = "4e6", value_parser = parse_count)]
    entry_cap: usize,
    /// Write records here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit the version banner line.
    #[arg(long, global = true)]
    no_banner: bool,
    /// Lift the group-order and degree guards (the entry cap still applies).
    #[arg(long, global = true)]
    allow_large: bool,
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an invariant of one object.
    Compute {
        #[arg(value_enum)]
        what: ComputeWhat,
        #[command(flatten)]
        objects: Objects,
    },
    /// Run one comparison check.
    Verify {
        #[arg(value_enum)]
        what: VerifyWhat,
        #[command(flatten)]
        objects: Objects,
    },
    /// Run the default battery.
    Battery {
        /// Extra group (JSON file) added to the coinvariants-shift checks.
        #[arg(long = "group-fixture")]
        group_fixture: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ComputeWhat {
    GroupHomology,
    GroupCohomology,
    Abelianization,
    Coinvariants,
    HochschildHomology,
    CentralQuotient,
    KaehlerDifferentials,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyWhat {
    CoinvariantsShift,
    HochschildShift,
    ComparisonMap,
    Commutativization,
    SquareZero,
    TorsionfreeBeck,
    QuillenPair,
    FactorEpiMono,
    ModuleAdjunction,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeffs {
    Trivial,
    Regular,
    Augmentation,
}

#[derive(Args)]
struct Objects {
    /// `builtin:NAME` or a group JSON file.
    #[arg(long)]
    group: Option<String>,
    /// `builtin:NAME` or an algebra / commutative-ring JSON file.
    #[arg(long)]
    algebra: Option<String>,
    #[arg(long, value_enum, default_value_t = Coeffs::Trivial)]
    coeffs: Coeffs,
    /// Use the normalized Hochschild complex.
    #[arg(long)]
    normalized: bool,
    #[arg(long, value_enum)]
    instance: Option<QuillenArg>,
    #[arg(long)]
    max_rank: Option<usize>,
    #[arg(long)]
    free_rank: Option<usize>,
    /// A finitely generated abelian group such as `Z + Z/3`.
    #[arg(long)]
    module: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuillenArg {
    GpAb,
    AlgCom,
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    let n = s
        .parse::<usize>()
        .ok()
        .or_else(|| s.parse::<f64>().ok().filter(|x| x.fract() == 0.0 && *x >= 0.0 && *x < 1e18).map(|x| x as usize))
        .ok_or_else(|| format!("`{s}` is not a count"))?;
    if n == 0 {
        return Err("entry_cap must be at least 1".into());
    }
    Ok(n)
}

/// Exit code bookkeeping: 2 input error, 3 size cap, 1 failed check.
#[derive(Default)]
struct Status {
    input_error: bool,
    size_cap: bool,
    failed: bool,
}

impl Status {
    fn code(&self) -> u8 {
        if self.input_error {
            2
        } else if self.size_cap {
            3
        } else if self.failed {
            1
        } else {
            0
        }
    }
}

struct Ctx {
    limits: Limits,
    exec: Exec,
    max_degree: usize,
    sink: Sink,
    status: Status,
}

impl Ctx {
    fn bar(&self) -> BarOptions {
        BarOptions::default().with_limits(self.limits).with_exec(self.exec)
    }

    fn hochschild(&self, normalized: bool) -> HochschildOptions {
        HochschildOptions {
            normalized,
            ..HochschildOptions::default().with_limits(self.limits).with_exec(self.exec)
        }
    }

    fn emit(&mut self, record: &Record) -> io::Result<()> {
        self.sink.write(record)
    }

    fn report(&mut self, r: ComparisonReport) -> io::Result<()> {
        if !r.passed() {
            self.status.failed = true;
            let witness = serde_json::to_string(&r.witness).expect("witness");
            eprintln!("qk: {} not verified; witness: {witness}", r.name);
        }
        self.emit(&Record::Report(r))
    }

    fn error(&mut self, name: &str, inputs: Value, e: &QkError) -> io::Result<()> {
        if e.is_size_cap() {
            self.status.size_cap = true;
        } else {
            self.status.input_error = true;
        }
        eprintln!("qk: {name}: {e}");
        self.emit(&Record::Error {
            name: name.to_string(),
            inputs,
            error: ErrorInfo::new(e),
        })
    }

    fn outcome(&mut self, name: &str, inputs: Value, r: Result<ComparisonReport>) -> io::Result<()> {
        match r {
            Ok(r) => self.report(r),
            Err(e) => self.error(name, inputs, &e),
        }
    }
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| QkError::Parse(format!("missing required flag --{flag}")))
}

fn coefficient_module(g: &Arc<FinGroup>, c: Coeffs) -> ZGRep {
    match c {
        Coeffs::Trivial => ZGRep::trivial(g.clone(), 1),
        Coeffs::Regular => ZGRep::regular(g.clone()),
        Coeffs::Augmentation => augmentation_ideal(g.clone()),
    }
}

fn coeffs_name(c: Coeffs) -> &'static str {
    match c {
        Coeffs::Trivial => "trivial",
        Coeffs::Regular => "regular",
        Coeffs::Augmentation => "augmentation",
    }
}

fn group_values(gs: Vec<FGAbelianGroup>) -> Vec<Value> {
    gs.into_iter().map(|g| json!(g)).collect()
}

fn compute(ctx: &Ctx, what: ComputeWhat, o: &Objects) -> Result<(String, Value, Vec<Value>)> {
    let n = ctx.max_degree;
    let name = ComputeWhat::to_possible_value(&what).expect("named").get_name().to_string();
    let group_input = |o: &Objects| -> Result<(Arc<FinGroup>, Value)> {
        let r = required(&o.group, "group")?;
        let g = Arc::new(load::group(r)?);
        ctx.limits.check_group_order(g.order())?;
        Ok((g, json!({ "group": r, "coeffs": coeffs_name(o.coeffs), "max_degree": n })))
    };
    let (inputs, values) = match what {
        ComputeWhat::GroupHomology | ComputeWhat::GroupCohomology => {
            let (g, inputs) = group_input(o)?;
            let m = coefficient_module(&g, o.coeffs);
            let values = if matches!(what, ComputeWhat::GroupHomology) {
                group_homology_with(&g, &m, n, &ctx.bar())?
            } else {
                group_cohomology_with(&g, &m, n, &ctx.bar())?
            };
            (inputs, group_values(values))
        }
        ComputeWhat::Abelianization => {
            let r = required(&o.group, "group")?;
            let g = load::group(r)?;
            (json!({ "group": r }), group_values(vec![abelianize_group(&g)]))
        }
        ComputeWhat::Coinvariants => {
            let (g, inputs) = group_input(o)?;
            (inputs, group_values(vec![coinvariants(&coefficient_module(&g, o.coeffs))]))
        }
        ComputeWhat::HochschildHomology => {
            let r = required(&o.algebra, "algebra")?;
            let a = load::algebra(r)?.algebra()?;
            let dims = hochschild_homology_with(&a, &Bimodule::regular(&a), n, &ctx.hochschild(o.normalized))?;
            (
                json!({ "algebra": r, "max_degree": n, "normalized": o.normalized }),
                dims.into_iter().map(|d| json!(d)).collect(),
            )
        }
        ComputeWhat::CentralQuotient => {
            let r = required(&o.algebra, "algebra")?;
            let a = load::algebra(r)?.algebra()?;
            (json!({ "algebra": r }), vec![json!(central_quotient(&Bimodule::regular(&a)).dim)])
        }
        ComputeWhat::KaehlerDifferentials => {
            let r = required(&o.algebra, "algebra")?;
            let loaded = load::algebra(r)?;
            let pres = loaded
                .presentation()
                .ok_or_else(|| QkError::Parse(format!("--algebra `{r}` has no commutative presentation")))?;
            let k = kaehler_differentials(pres)?;
            (json!({ "algebra": r }), vec![json!(k.k_dim)])
        }
    };
    Ok((name, inputs, values))
}

fn verify(ctx: &mut Ctx, what: VerifyWhat, o: &Objects) -> io::Result<()> {
    let n = ctx.max_degree;
    match what {
        VerifyWhat::CoinvariantsShift => {
            let r = (|| {
                let g = Arc::new(load::group(required(&o.group, "group")?)?);
                cmp::verify_coinvariants_shift(&g, n, &ctx.bar())
            })()
            .map(|r| r.with_inputs(json!({ "group": o.group })));
            ctx.outcome("coinvariants-shift", json!({ "group": o.group, "max_degree": n }), r)
        }
        VerifyWhat::HochschildShift => {
            let r = (|| {
                let a = load::algebra(required(&o.algebra, "algebra")?)?.algebra()?;
                cmp::verify_hochschild_shift(&a, n, &ctx.hochschild(o.normalized))
            })()
            .map(|r| r.with_inputs(json!({ "algebra": o.algebra })));
            ctx.outcome("hochschild-shift", json!({ "algebra": o.algebra, "max_degree": n }), r)
        }
        VerifyWhat::ComparisonMap => match &o.algebra {
            Some(reference) => {
                let r = (|| {
                    let loaded = load::algebra(reference)?;
                    let pres = loaded.presentation().ok_or_else(|| {
                        QkError::Parse(format!("--algebra `{reference}` has no commutative presentation"))
                    })?;
                    cmp::comparison_map_degree0(pres, &ctx.hochschild(false))
                })()
                .map(|r| r.with_inputs(json!({ "algebra": reference })));
                ctx.outcome("comparison-map-degree0", json!({ "algebra": reference }), r)
            }
            None => fixture_set(ctx, "comparison-map-degree0", cmp::commutative_fixtures(), |ctx, r| {
                cmp::comparison_map_degree0(r, &ctx.hochschild(false))
            }),
        },
        VerifyWhat::Commutativization => {
            for (label, e) in split_extension_fixtures() {
                ctx.report(cmp::verify_commutativization(&e).with_inputs(json!({ "label": label })))?;
            }
            Ok(())
        }
        VerifyWhat::SquareZero => fixture_set(ctx, "square-zero-nilradical", cmp::square_zero_fixtures(), |_, m| {
            cmp::verify_square_zero_nilradical(m)
        }),
        VerifyWhat::TorsionfreeBeck => match &o.module {
            Some(m) => {
                let r = m
                    .parse::<FGAbelianGroup>()
                    .map(|g| cmp::verify_torsionfree_beck(o.free_rank.unwrap_or(0), &g));
                ctx.outcome("torsionfree-beck", json!({ "module": m }), r)
            }
            None => {
                for (label, r, m) in cmp::torsionfree_fixtures() {
                    ctx.report(cmp::verify_torsionfree_beck(r, &m).with_inputs(json!({ "label": label })))?;
                }
                Ok(())
            }
        },
        VerifyWhat::QuillenPair => {
            let instances = match o.instance {
                Some(QuillenArg::GpAb) => vec![QuillenInstance::GpAb],
                Some(QuillenArg::AlgCom) => vec![QuillenInstance::AlgCom],
                None => vec![QuillenInstance::GpAb, QuillenInstance::AlgCom],
            };
            for i in instances {
                let rank = o.max_rank.unwrap_or(match i {
                    QuillenInstance::GpAb => 4,
                    QuillenInstance::AlgCom => 2,
                });
                ctx.outcome("quillen-pair-criterion", json!({ "instance": i }), cmp::verify_quillen_pair_criterion(i, rank))?;
            }
            Ok(())
        }
        VerifyWhat::FactorEpiMono => fixture_set(ctx, "factor-epi-mono", cmp::factorization_fixtures(), |_, f| {
            cmp::verify_factorization(f)
        }),
        VerifyWhat::ModuleAdjunction => {
            if o.group.is_some() || o.module.is_some() {
                let r = (|| {
                    let g = Arc::new(load::group(required(&o.group, "group")?)?);
                    let target: FGAbelianGroup = required(&o.module, "module")?.parse()?;
                    let m = coefficient_module(&g, o.coeffs);
                    cmp::verify_module_adjunction_group(&m, &target, &cmp::sample_equivariant_maps(&m)?)
                })()
                .map(|r| r.with_inputs(json!({ "group": o.group, "coeffs": coeffs_name(o.coeffs) })));
                return ctx.outcome("module-adjunction", json!({ "group": o.group, "module": o.module }), r);
            }
            fixture_set(ctx, "module-adjunction", cmp::group_adjunction_fixtures(), |_, (m, a)| {
                cmp::verify_module_adjunction_group(m, a, &cmp::sample_equivariant_maps(m)?)
            })?;
            fixture_set(ctx, "module-adjunction", cmp::bimodule_adjunction_fixtures(), |_, (m, a)| {
                cmp::verify_module_adjunction_bimodule(m, a, &cmp::sample_bimodule_maps(m)?)
            })
        }
    }
}

/// Labelled fixtures `(label, x)` or `(label, x, y)` run one by one.
trait Fixture {
    type Data;
    fn split(&self) -> (&str, Self::Data);
}

impl<T: Clone> Fixture for (String, T) {
    type Data = T;
    fn split(&self) -> (&str, T) {
        (&self.0, self.1.clone())
    }
}

impl<T: Clone, U: Clone> Fixture for (String, T, U) {
    type Data = (T, U);
    fn split(&self) -> (&str, (T, U)) {
        (&self.0, (self.1.clone(), self.2.clone()))
    }
}

fn fixture_set<F: Fixture>(
    ctx: &mut Ctx,
    name: &str,
    fixtures: Result<Vec<F>>,
    run: impl Fn(&Ctx, &F::Data) -> Result<ComparisonReport>,
) -> io::Result<()> {
    let fixtures = match fixtures {
        Ok(f) => f,
        Err(e) => return ctx.error(name, json!({}), &e),
    };
    for f in &fixtures {
        let (label, data) = f.split();
        let r = run(ctx, &data).map(|r| r.with_inputs(json!({ "label": label })));
        ctx.outcome(name, json!({ "label": label }), r)?;
    }
    Ok(())
}

fn battery(ctx: &mut Ctx, fixtures: &[String]) -> io::Result<()> {
    let mut extra = Vec::new();
    for path in fixtures {
        match load::group(path) {
            Ok(g) => extra.push((path.clone(), g)),
            Err(e) => return ctx.error("battery", json!({ "group_fixture": path }), &e),
        }
    }
    let cfg = BatteryConfig {
        max_degree: ctx.max_degree,
        limits: ctx.limits,
        exec: ctx.exec,
        extra_groups: extra,
    };
    let outcomes = match cmp::run_battery(&cfg) {
        Ok(o) => o,
        Err(e) => return ctx.error("battery", json!({}), &e),
    };
    let (mut passed, mut failed, mut size_cap, mut errors) = (0, 0, 0, 0);
    for o in outcomes {
        match o.result {
            Ok(r) => {
                if r.passed() {
                    passed += 1;
                } else {
                    failed += 1;
                }
                ctx.report(r)?;
            }
            Err(e) => {
                if e.is_size_cap() {
                    size_cap += 1;
                } else {
                    errors += 1;
                }
                ctx.error(&o.label, json!({ "label": o.label, "criterion": o.criterion }), &e)?;
            }
        }
    }
    ctx.emit(&Record::Summary {
        name: "battery-summary",
        total: passed + failed + size_cap + errors,
        passed,
        failed,
        size_cap,
        errors,
    })
}

fn run(cli: Cli) -> io::Result<u8> {
    let out: Box<dyn Write> = match &cli.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let mut limits = Limits::with_entry_cap(cli.entry_cap);
    if cli.allow_large {
        limits = limits.unguarded();
    }
    let mut ctx = Ctx {
        limits,
        exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel },
        max_degree: cli.max_degree,
        sink: Sink::new(cli.format, out)?,
        status: Status::default(),
    };
    if !cli.no_banner {
        ctx.emit(&output::banner())?;
    }
    match &cli.command {
        Command::Compute { what, objects } => match compute(&ctx, *what, objects) {
            Ok((name, inputs, values)) => ctx.emit(&Record::Computation { name, inputs, values })?,
            Err(e) => {
                let name = what.to_possible_value().expect("named").get_name().to_string();
                ctx.error(&name, json!({}), &e)?
            }
        },
        Command::Verify { what, objects } => verify(&mut ctx, *what, objects)?,
        Command::Battery { group_fixture } => battery(&mut ctx, group_fixture)?,
    }
    ctx.sink.flush()?;
    Ok(ctx.status.code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qk: {e}");
            ExitCode::from(2)
        }
    }
}
