use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ztop::calculus::{decorate, CalculusError, FormSpec, MultTable};
use ztop::exact::{fmt_rat, parse_rat, Rat};
use ztop::explore::{eigenvalue_coverage, remark_from, sweep, ExploreError, SearchBox};
use ztop::family::{
    build_gpq_qgraph, compare, compare_grid, gpq_derived_closed_form, gpq_full_resolution,
    gpq_printed_closed_form, FamilyError, GpqParams, PrintedStatus,
};
use ztop::fixtures::{self, FixtureKind};
use ztop::graph::{GraphError, ResGraph};
use ztop::monodromy::{char_poly, is_eigenvalue, milnor, monodromy_zeta, MonodromyError};
use ztop::resolve::{
    resolve, CenterOrder, CurveInput, ResolveError, ResolveOptions, DEFAULT_BUDGET,
};
use ztop::verify::{self, Catalog};
use ztop::zeta::{zeta_ordinary, zeta_q, ZetaError};

#[derive(Parser)]
#[command(
    name = "ztop",
    version,
    about = "Topological zeta functions of plane curve singularities"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Maximum number of blowups.
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    budget: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Q-engine when the graph has quotient data, ordinary otherwise.
    Auto,
    Ordinary,
    Q,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Q,
    Full,
    Printed,
    Derived,
}

#[derive(clap::Args, Clone, Copy)]
struct GpqArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    a: Option<u64>,
}

impl GpqArgs {
    fn params(&self) -> Result<GpqParams, Failure> {
        match (self.p, self.q, self.a) {
            (Some(p), Some(q), Some(a)) => GpqParams::new(p, q, a).map_err(Failure::input),
            _ => Err(Failure::input(anyhow!("gpq_fig5 needs --p, --q and --a"))),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Zeta function and pole table of a resolution graph.
    Zeta {
        /// Graph file or fixture id.
        graph: String,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
        #[command(flatten)]
        gpq: GpqArgs,
    },
    /// Embedded resolution of a germ given by its branches.
    Resolve {
        /// Curve file or fixture id.
        curves: Option<String>,
        /// Branch as `id=poly`, repeatable.
        #[arg(long)]
        branch: Vec<String>,
        /// Auxiliary curve as `id=poly`, repeatable.
        #[arg(long)]
        aux: Vec<String>,
        /// Process centers in a seeded random order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Numerical data of a form on a standard resolution graph.
    Decorate {
        graph: String,
        /// Exponents as `curve=exp,...`, or `dxdy`.
        #[arg(long)]
        form: FormSpec,
        /// Multiplicity table file or fixture id.
        #[arg(long)]
        table: Option<String>,
    },
    /// Characteristic polynomial, monodromy zeta function and Milnor number.
    Monodromy {
        graph: String,
        /// Pole values to test as eigenvalues.
        #[arg(long, allow_hyphen_values = true)]
        eigen: Vec<String>,
    },
    /// Compare the engines and closed forms for (y^p+x^q)(y^q+x^p).
    Gpq {
        #[command(flatten)]
        params: GpqArgs,
        /// Print a single route instead of the comparison.
        #[arg(long, value_enum, conflicts_with_all = ["compare", "grid"])]
        engine: Option<Route>,
        /// Compare all four routes (the default).
        #[arg(long)]
        compare: bool,
        /// Run the default grid (2,3),(2,5),(3,4),(3,5) with a = 1..5.
        #[arg(long)]
        grid: bool,
    },
    /// Sweep a box of forms for double-pole combinations.
    Explore {
        #[arg(long, default_value = "fab_fig1")]
        graph: String,
        #[arg(long)]
        multtable: Option<String>,
        /// Exponent bounds `curve=max,...`; defaults to every curve up to 6.
        #[arg(long)]
        bounds: Option<String>,
        /// Double poles to look for, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        /// Vertex whose double poles are tracked separately.
        #[arg(long)]
        root: Option<String>,
        /// Report the itemised double-pole claims instead of the histogram.
        #[arg(long)]
        remark: bool,
    },
    /// Replay the reference computations.
    Verify {
        /// Criteria by number or name (zeta, monodromy, resolve, gpq, explore, properties).
        #[arg(long)]
        only: Option<String>,
        /// Replace a fixture by a file, as `id=path`.
        #[arg(long = "override")]
        overrides: Vec<String>,
    },
    /// Embedded reference data.
    Fixtures {
        #[command(subcommand)]
        cmd: FixturesCmd,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    List,
    Dump { id: String },
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn compute(e: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 1,
            err: e.into(),
        }
    }
    fn input(e: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 2,
            err: e.into(),
        }
    }
    fn internal(e: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 3,
            err: e.into(),
        }
    }
}

impl fmt::Debug for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.err)
    }
}

impl From<ZetaError> for Failure {
    fn from(e: ZetaError) -> Self {
        Failure::input(e)
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::input(e)
    }
}

impl From<MonodromyError> for Failure {
    fn from(e: MonodromyError) -> Self {
        match e {
            MonodromyError::Inconsistent { .. } | MonodromyError::NegativeMultiplicity { .. } => {
                Failure::internal(e)
            }
            _ => Failure::input(e),
        }
    }
}

impl From<ResolveError> for Failure {
    fn from(e: ResolveError) -> Self {
        match e {
            ResolveError::NonRationalCenter { .. } | ResolveError::BudgetExceeded(_) => {
                Failure::compute(e)
            }
            _ => Failure::input(e),
        }
    }
}

impl From<CalculusError> for Failure {
    fn from(e: CalculusError) -> Self {
        match e {
            CalculusError::Singular | CalculusError::NonInteger { .. } => Failure::compute(e),
            _ => Failure::input(e),
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::BadParams { .. } => Failure::input(e),
            FamilyError::Resolve(r) => r.into(),
            FamilyError::Calculus(c) => c.into(),
            FamilyError::Zeta(z) => z.into(),
            e => Failure::compute(e),
        }
    }
}

impl From<ExploreError> for Failure {
    fn from(e: ExploreError) -> Self {
        match e {
            ExploreError::Calculus(c) => c.into(),
            ExploreError::Zeta(z) => z.into(),
            ExploreError::Monodromy(m) => m.into(),
            e => Failure::input(e),
        }
    }
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("reading {path}"))
        .map_err(Failure::input)
}

/// File contents, or the text of a fixture of the given kind.
fn source(arg: &str, kind: FixtureKind) -> Result<String, Failure> {
    if Path::new(arg).exists() {
        return read(arg);
    }
    match fixtures::find(arg) {
        Some(f) if f.kind == kind => Ok(f.text.to_string()),
        Some(_) => Err(Failure::input(anyhow!(
            "fixture {arg} is not a {kind:?} fixture"
        ))),
        None => Err(Failure::input(anyhow!(
            "{arg} is neither a file nor a fixture id"
        ))),
    }
}

fn load_graph(arg: &str, gpq: &GpqArgs) -> Result<ResGraph, Failure> {
    if arg == "gpq_fig5" && !Path::new(arg).exists() {
        return Ok(build_gpq_qgraph(gpq.params()?));
    }
    Ok(ResGraph::parse(&source(arg, FixtureKind::Graph)?)?)
}

fn load_table(arg: Option<&str>, graph: &str) -> Result<MultTable, Failure> {
    let arg = match arg {
        Some(a) => a,
        None if graph == "fab_fig1" => "fab_fig1_mult",
        None => {
            return Err(Failure::input(anyhow!(
                "--table is required for graph {graph}"
            )))
        }
    };
    MultTable::parse(&source(arg, FixtureKind::MultTable)?)
        .with_context(|| format!("multiplicity table {arg}"))
        .map_err(Failure::input)
}

fn pair(s: &str) -> Result<(&str, &str), Failure> {
    s.split_once('=')
        .ok_or_else(|| Failure::input(anyhow!("expected id=value, got {s:?}")))
}

fn rat_list(s: &str) -> Result<Vec<Rat>, Failure> {
    s.split(',')
        .map(|x| {
            parse_rat(x.trim())
                .ok_or_else(|| Failure::input(anyhow!("not a rational number: {x:?}")))
        })
        .collect()
}

/// Rendered output and whether the command succeeded.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output {
            text,
            json,
            code: 0,
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let opts = |seed: Option<u64>| ResolveOptions {
        budget: cli.budget,
        order: seed.map_or(CenterOrder::Fifo, CenterOrder::Shuffled),
    };
    match &cli.cmd {
        Cmd::Zeta { graph, engine, gpq } => {
            let g = load_graph(graph, gpq)?;
            let q = match engine {
                Engine::Auto => !g.is_ordinary(),
                Engine::Ordinary => false,
                Engine::Q => true,
            };
            let r = if q { zeta_q(&g)? } else { zeta_ordinary(&g)? };
            let mut j = r.to_json();
            j["engine"] = json!(if q { "q" } else { "ordinary" });
            Ok(Output::ok(r.to_text(), j))
        }
        Cmd::Resolve {
            curves,
            branch,
            aux,
            seed,
        } => {
            let mut input = match curves {
                Some(c) => CurveInput::parse(&source(c, FixtureKind::Curves)?)?,
                None => CurveInput::branches(&[]),
            };
            for b in branch {
                let (id, p) = pair(b)?;
                input.branches.push(ztop::resolve::CurveSpec {
                    id: id.into(),
                    poly: p.into(),
                });
            }
            for a in aux {
                let (id, p) = pair(a)?;
                input = input.with_aux(id, p);
            }
            let r = resolve(&input, opts(*seed))?;
            let mu = r.milnor_from_multiplicities();
            let text = format!(
                "{}blowups: {}\nMilnor number: {mu}\n",
                r.graph,
                r.history.len()
            );
            let graph: Value =
                serde_json::from_str(&r.graph.to_json()).map_err(Failure::internal)?;
            let table: Value =
                serde_json::from_str(&r.table.to_json()).map_err(Failure::internal)?;
            Ok(Output::ok(
                text,
                json!({ "graph": graph, "table": table, "blowups": r.history.len(), "milnor": mu }),
            ))
        }
        Cmd::Decorate { graph, form, table } => {
            let g = load_graph(
                graph,
                &GpqArgs {
                    p: None,
                    q: None,
                    a: None,
                },
            )?;
            let t = load_table(table.as_deref(), graph)?;
            let d = decorate(&g, &t, form)?;
            let j: Value = serde_json::from_str(&d.to_json()).map_err(Failure::internal)?;
            Ok(Output::ok(d.to_string(), j))
        }
        Cmd::Monodromy { graph, eigen } => {
            let g = load_graph(
                graph,
                &GpqArgs {
                    p: None,
                    q: None,
                    a: None,
                },
            )?;
            let cp = char_poly(&g)?;
            let mu = milnor(&g)?;
            let z = monodromy_zeta(&g)?;
            let mut text = format!("Delta(t) = {cp}\nzeta(t) = {z}\nMilnor number: {mu}\n");
            let mut ev = Vec::new();
            for s in eigen {
                let s0 = parse_rat(s)
                    .ok_or_else(|| Failure::input(anyhow!("not a rational number: {s:?}")))?;
                let (is, m) = is_eigenvalue(&g, &s0)?;
                text.push_str(&format!(
                    "exp(2 pi i {}) eigenvalue: {is} (multiplicity {m})\n",
                    fmt_rat(&s0)
                ));
                ev.push(json!({ "s0": fmt_rat(&s0), "eigenvalue": is, "multiplicity": m }));
            }
            Ok(Output::ok(
                text,
                json!({
                    "char_poly": cp.factors.iter().map(|(m, e)| (m.to_string(), json!(e))).collect::<serde_json::Map<_, _>>(),
                    "char_poly_text": cp.to_string(),
                    "zeta": z.to_string(),
                    "milnor": mu,
                    "eigenvalues": ev,
                }),
            ))
        }
        Cmd::Gpq {
            params,
            engine: Some(route),
            ..
        } => {
            let pr = params.params()?;
            let value = match route {
                Route::Q => zeta_q(&build_gpq_qgraph(pr))?.value,
                Route::Full => gpq_full_resolution(pr, opts(None))?.value,
                Route::Printed => gpq_printed_closed_form(pr)?,
                Route::Derived => gpq_derived_closed_form(pr),
            };
            let poles: Vec<Value> = value
                .poles()
                .iter()
                .map(|(s, k)| json!({ "s0": fmt_rat(s), "order": k }))
                .collect();
            Ok(Output::ok(
                format!("{pr}\nZ(s) = {value}\n"),
                json!({ "p": pr.p, "q": pr.q, "a": pr.a, "value": value.to_string(), "poles": poles }),
            ))
        }
        Cmd::Gpq { params, grid, .. } => {
            let rows = if *grid {
                compare_grid(
                    &[(2, 3), (2, 5), (3, 4), (3, 5)],
                    &[1, 2, 3, 4, 5],
                    opts(None),
                )?
            } else {
                vec![compare(params.params()?, opts(None))?]
            };
            let mismatch = rows
                .iter()
                .any(|c| c.printed_status == PrintedStatus::Mismatch || !c.engines_agree);
            let text: String = rows.iter().map(|c| c.to_text()).collect();
            let j = json!(rows.iter().map(|c| c.to_json()).collect::<Vec<_>>());
            let code = if mismatch {
                3
            } else if rows.iter().all(|c| c.ok()) {
                0
            } else {
                1
            };
            Ok(Output {
                text,
                json: j,
                code,
            })
        }
        Cmd::Explore {
            graph,
            multtable,
            bounds,
            target,
            root,
            remark,
        } => {
            let g = load_graph(
                graph,
                &GpqArgs {
                    p: None,
                    q: None,
                    a: None,
                },
            )?;
            let t = load_table(multtable.as_deref(), graph)?;
            let mut b = match bounds {
                Some(s) => SearchBox::parse_bounds(s)?,
                None => SearchBox::default_for(&t),
            };
            if let Some(tg) = target {
                b = b.with_target(rat_list(tg)?);
            }
            let root = root
                .clone()
                .or_else(|| (graph == "fab_fig1").then(|| "E0".to_string()));
            eprintln!("searching {} forms", b.size());
            let r = sweep(&g, &t, &b, root.as_deref())?;
            let code = if r.reverify_failures.is_empty() { 0 } else { 3 };
            if *remark {
                let rep = remark_from(&r);
                let code = if code != 0 {
                    code
                } else if rep.holds() {
                    0
                } else {
                    1
                };
                return Ok(Output {
                    text: rep.to_text(),
                    json: rep.to_json(),
                    code,
                });
            }
            let cov = eigenvalue_coverage(&g, &r)?;
            let text = format!(
                "{}eigenvalue orders covered: {:?}\nuncovered: {:?}\n",
                r.to_text(),
                cov.covered,
                cov.uncovered
            );
            let mut j = r.to_json();
            j["coverage"] = cov.to_json();
            Ok(Output {
                text,
                json: j,
                code,
            })
        }
        Cmd::Verify { only, overrides } => {
            let ids = match only {
                Some(s) => verify::select(s).map_err(|e| Failure::input(anyhow!(e)))?,
                None => (1..=9).collect(),
            };
            let mut cat = Catalog::builtin();
            for o in overrides {
                let (id, path) = pair(o)?;
                cat = cat.with_override(id, read(path)?);
            }
            let r = verify::run(&cat, &ids);
            let code = if r.passed() { 0 } else { 1 };
            Ok(Output {
                text: r.to_text(),
                json: r.to_json(),
                code,
            })
        }
        Cmd::Fixtures { cmd } => match cmd {
            FixturesCmd::List => {
                let text = fixtures::CATALOG
                    .iter()
                    .map(|f| {
                        format!(
                            "{:<14} {:<10} {}\n",
                            f.id,
                            format!("{:?}", f.kind),
                            f.description
                        )
                    })
                    .collect();
                let j = json!(fixtures::CATALOG
                    .iter()
                    .map(|f| json!({ "id": f.id, "kind": format!("{:?}", f.kind), "description": f.description }))
                    .collect::<Vec<_>>());
                Ok(Output::ok(text, j))
            }
            FixturesCmd::Dump { id } => {
                let f = fixtures::find(id)
                    .ok_or_else(|| Failure::input(anyhow!("unknown fixture {id}")))?;
                if f.kind == FixtureKind::Template {
                    return Err(Failure::input(anyhow!(
                        "{id} is built from parameters; use `zeta {id} --p P --q Q --a A`"
                    )));
                }
                let j: Value = serde_json::from_str(f.text).map_err(Failure::internal)?;
                Ok(Output::ok(f.text.to_string(), j))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&out.json).expect("json"))
                }
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            match cli.format {
                Format::Text => eprintln!("error: {:#}", f.err),
                Format::Json => println!(
                    "{}",
                    json!({ "error": format!("{:#}", f.err), "exit": f.code })
                ),
            }
            ExitCode::from(f.code)
        }
    }
}
