//! Command-line front end: build graphs, compute circuit series, run
//! identity verifications, and emit machine-readable JSON (schema 1).
//!
//! Exit codes: 0 success / all checks pass, 1 failed check or internal
//! consistency error, 2 invalid input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use walkseries::catalog;
use walkseries::cogrowth;
use walkseries::enumerate::{bivariate_to_csv, path_census};
use walkseries::graph::{self, Graph, MarkedGraph};
use walkseries::products;
use walkseries::series::{rat_int, PowerSeries};
use walkseries::transfer::{self, LabelAssignment};
use walkseries::zeta;

#[derive(Parser)]
#[command(name = "walkseries", version, about = "circuit series, graph zeta functions and cogrowth")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the circuit/path series of a graph
    Series(SeriesArgs),
    /// Run a named identity verification and report PASS/FAIL
    Verify(VerifyArgs),
    /// Series of free/direct products and loop additions
    Product(ProductArgs),
    /// The generalized zeta function, three ways
    Zeta(ZetaArgs),
    /// Cogrowth / spectral radius numerics
    Cogrowth(CogrowthArgs),
    /// Closed-form series for the built-in graph families
    Catalog(CatalogArgs),
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// JSON graph description (explicit half-edges or family shorthand)
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Family name: complete, cycle, tree_ball, loop_tree, ladder, z12, z_segment
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    v: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    e: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    len: Option<usize>,
}

#[derive(Args)]
struct SeriesArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    order: usize,
    /// Start vertex (default: the graph's mark, or 0)
    #[arg(long)]
    birth: Option<usize>,
    /// End vertex (default: same as birth, i.e. circuits)
    #[arg(long)]
    death: Option<usize>,
    /// Also compute the bump-enriched bivariate series
    #[arg(long)]
    enriched: bool,
    /// json or csv (csv implies --enriched layout: n,m,numerator,denominator)
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: eqb, bass, free, oracle, labelled, recurrence
    check: String,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    order: Option<usize>,
    /// Seed for the deterministic pseudo-random weights of `labelled`
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration budget override for oracle checks
    #[arg(long)]
    budget: Option<f64>,
}

#[derive(Args)]
struct ProductArgs {
    /// One of: free, first, second, loops, radius
    op: String,
    /// Series spec: tree:D, cycle:K, complete:V, loop_tree:D:E, ladder, z12, psl2, one
    #[arg(long)]
    lhs: String,
    #[arg(long)]
    rhs: Option<String>,
    #[arg(long)]
    order: usize,
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// det, factored, cycles, or all
    #[arg(long, default_value = "all")]
    mode: String,
    /// Expansion order for the cycle-product comparison
    #[arg(long, default_value_t = 10)]
    order: usize,
}

#[derive(Args)]
struct CogrowthArgs {
    #[command(subcommand)]
    cmd: CogrowthCmd,
}

#[derive(Subcommand)]
enum CogrowthCmd {
    /// Spectral radius from cogrowth on a d-regular graph
    Nu {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        d: usize,
    },
    /// The map phi with 1/(d nu) = phi(1/alpha)
    Phi {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        d: usize,
    },
    /// PSL2(Z) quotient: nu from alpha
    Psl2Nu {
        #[arg(long)]
        alpha: f64,
    },
    /// PSL2(Z) quotient: the map phi
    Psl2Phi {
        #[arg(long)]
        t: f64,
    },
    /// Root-test cogrowth estimate from an enumeration census
    Estimate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        budget: Option<f64>,
    },
}

#[derive(Args)]
struct CatalogArgs {
    /// complete, cycle, tree, tree_distance, loop_tree, ladder, z12, psl2
    name: String,
    #[arg(long)]
    v: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    e: Option<usize>,
    #[arg(long)]
    order: usize,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
    fn internal(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
}

macro_rules! invalid_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::invalid(e.to_string())
            }
        }
    )*};
}
invalid_from!(
    walkseries::graph::GraphError,
    walkseries::series::SeriesError,
    walkseries::enumerate::EnumError,
    walkseries::transfer::TransferError,
    walkseries::products::ProductError,
    walkseries::catalog::CatalogError,
    walkseries::cogrowth::CogrowthError
);

impl From<zeta::ZetaError> for CliError {
    fn from(e: zeta::ZetaError) -> Self {
        match e {
            zeta::ZetaError::Inconsistent(_) => CliError::internal(e.to_string()),
            other => CliError::invalid(other.to_string()),
        }
    }
}

struct Output {
    value: Value,
    /// Plain-text payload (CSV) that bypasses JSON rendering
    text: Option<String>,
    failed: bool,
}

impl Output {
    fn json(value: Value) -> Self {
        Output { value, text: None, failed: false }
    }
}

impl GraphArgs {
    fn build(&self) -> Result<MarkedGraph, CliError> {
        if let Some(path) = &self.spec {
            let raw = fs::read_to_string(path)
                .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&raw)
                .map_err(|e| CliError::invalid(format!("bad JSON in {}: {e}", path.display())))?;
            return Ok(graph::graph_from_json(&v)?);
        }
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| CliError::invalid("need either --spec or --family"))?;
        let need = |p: Option<usize>, name: &str| {
            p.ok_or_else(|| CliError::invalid(format!("family {family} needs --{name}")))
        };
        let g: Graph = match family {
            "complete" => graph::complete(need(self.v, "v")?)?,
            "cycle" => graph::cycle(need(self.k, "k")?)?,
            "tree_ball" => graph::tree_ball(need(self.d, "d")?, need(self.r, "r")?)?,
            "loop_tree" => {
                graph::loop_tree(need(self.d, "d")?, need(self.e, "e")?, need(self.r, "r")?)?
            }
            "ladder" => graph::ladder(need(self.len, "len")?)?,
            "z12" => graph::z12(need(self.len, "len")?)?,
            "z_segment" => graph::z_segment(need(self.len, "len")?)?,
            other => return Err(CliError::invalid(format!("unknown family {other:?}"))),
        };
        let base = match family {
            "ladder" => graph::ladder_base(self.len.unwrap()),
            "z12" => graph::z12_base(self.len.unwrap()),
            _ => 0,
        };
        Ok(MarkedGraph::circuit(g, base)?)
    }
}

fn graph_summary(mg: &MarkedGraph) -> Value {
    json!({
        "vertices": mg.graph.vertex_count(),
        "half_edges": mg.graph.half_edge_count(),
        "birth": mg.birth,
        "death": mg.death,
        "horizon": mg.graph.horizon(),
    })
}

fn cmd_series(a: &SeriesArgs) -> Result<Output, CliError> {
    let base = a.graph.build()?;
    let birth = a.birth.unwrap_or(base.birth);
    let death = a.death.unwrap_or(birth);
    let mg = MarkedGraph::new(base.graph.clone(), birth, death)?;
    let g = transfer::green_series(&mg, a.order, None)?;
    let f = if a.enriched || a.format == "csv" {
        Some(transfer::enriched_series(&mg, a.order, None)?)
    } else {
        None
    };
    match a.format.as_str() {
        "csv" => Ok(Output {
            value: Value::Null,
            text: Some(bivariate_to_csv(f.as_ref().unwrap())),
            failed: false,
        }),
        "json" => {
            let mut out = json!({
                "schema": 1,
                "command": "series",
                "graph": graph_summary(&mg),
                "order": a.order,
                "g": g.to_json(),
            });
            if let Some(f) = f {
                out["f"] = f.to_json();
            }
            Ok(Output::json(out))
        }
        other => Err(CliError::invalid(format!("unknown format {other:?}"))),
    }
}

fn regular_degree(g: &Graph) -> Result<usize, CliError> {
    let d = g.degree(0);
    if (0..g.vertex_count()).any(|v| g.degree(v) != d) {
        return Err(CliError::invalid("check requires a regular graph"));
    }
    Ok(d)
}

/// Deterministic small positive weights from a linear congruential
/// generator, for the labelled-transform check.
fn seeded_labels(g: &Graph, seed: u64) -> LabelAssignment {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) % 5 + 1
    };
    LabelAssignment {
        weights: (0..g.half_edge_count()).map(|_| rat_int(next() as i64)).collect(),
    }
}

fn verdict(check: &str, pass: bool, detail: Value) -> Output {
    Output {
        value: json!({
            "schema": 1,
            "command": "verify",
            "check": check,
            "result": if pass { "PASS" } else { "FAIL" },
            "detail": detail,
        }),
        text: None,
        failed: !pass,
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<Output, CliError> {
    match a.check.as_str() {
        // the bump-variable substitution tying F(u,t) to G(t) on a
        // regular graph
        "eqb" => {
            let mg = a.graph.build()?.as_finite();
            let n = a.order.unwrap_or(16);
            let d = regular_degree(&mg.graph)?;
            let g = transfer::green_series(&mg, n, None)?;
            let f = transfer::enriched_series(&mg, n, None)?;
            let via_g = transfer::f_from_g(&g, d, n)?;
            let pass = via_g == f;
            Ok(verdict("eqb", pass, json!({ "order": n, "d": d })))
        }
        // determinant = factored determinant, and both expand to the
        // cycle product
        "bass" => {
            let mg = a.graph.build()?;
            let g = mg.graph.as_finite();
            let det = zeta::zeta_inverse_det(&g)?;
            let fac = zeta::zeta_inverse_factored(&g)?;
            let order = a.order.unwrap_or(10);
            let from_det = zeta::zeta_series_from_poly(&det, order)?;
            let from_cycles = zeta::zeta_from_cycles(&g, order, a.budget)?;
            let pass = det == fac && from_det == from_cycles;
            Ok(verdict(
                "bass",
                pass,
                json!({
                    "det": det.to_json(),
                    "factored": fac.to_json(),
                    "cycle_order": order,
                    "det_equals_factored": det == fac,
                    "series_equals_cycle_product": from_det == from_cycles,
                }),
            ))
        }
        // free product of regular trees adds the degrees
        "free" => {
            let d = a.graph.d.ok_or_else(|| CliError::invalid("free needs --d"))?;
            let e = a.graph.e.ok_or_else(|| CliError::invalid("free needs --e"))?;
            let n = a.order.unwrap_or(16);
            let prod = products::free_product_series(
                &catalog::tree_g(d, n)?,
                &catalog::tree_g(e, n)?,
                n,
            )?;
            let pass = prod == catalog::tree_g(d + e, n)?;
            Ok(verdict("free", pass, json!({ "d": d, "e": e, "order": n })))
        }
        // brute-force census against the transfer computation
        "oracle" => {
            let mg = a.graph.build()?.as_finite();
            let n = a.order.unwrap_or(8);
            let census = path_census(&mg, n, a.budget)?.series();
            let via_transfer = transfer::enriched_series(&mg, n, None)?;
            let pass = census == via_transfer;
            let detail = if pass {
                json!({ "order": n })
            } else {
                let first = (0..=n).find(|&i| census.coeff(i) != via_transfer.coeff(i));
                json!({ "order": n, "first_mismatch_order": first })
            };
            Ok(verdict("oracle", pass, detail))
        }
        // edge-label transform identity under random weights
        "labelled" => {
            let mg = a.graph.build()?.as_finite();
            let n = a.order.unwrap_or(10);
            let labels = seeded_labels(&mg.graph, a.seed);
            let report = transfer::labelled_transform(&mg, &labels, n)?;
            let pass = report.agree();
            Ok(verdict("labelled", pass, json!({ "order": n, "seed": a.seed, "report": report.to_json() })))
        }
        // coefficients satisfy the characteristic-polynomial recurrence
        "recurrence" => {
            let mg = a.graph.build()?.as_finite();
            let n = a.order.unwrap_or(24);
            let report = transfer::linear_recurrence_check(&mg, n)?;
            let pass = report.ok();
            Ok(verdict("recurrence", pass, report.to_json()))
        }
        other => Err(CliError::invalid(format!("unknown check {other:?}"))),
    }
}

fn parse_series_spec(s: &str, order: usize) -> Result<PowerSeries, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let arg = |i: usize| -> Result<usize, CliError> {
        parts
            .get(i)
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| CliError::invalid(format!("series spec {s:?}: missing numeric part {i}")))
    };
    Ok(match parts[0] {
        "tree" => catalog::tree_g(arg(1)?, order)?,
        "cycle" => catalog::cycle_series(arg(1)?, order)?.g,
        "complete" => catalog::complete_series(arg(1)?, order)?.eval_u(&rat_int(1)),
        "loop_tree" => catalog::loop_tree_series(arg(1)?, arg(2)?, order)?.g,
        "ladder" => catalog::ladder_series(order)?,
        "z12" => catalog::z12_series(order)?,
        "psl2" => catalog::psl2_series(order)?,
        "one" => PowerSeries::one(order),
        other => return Err(CliError::invalid(format!("unknown series spec {other:?}"))),
    })
}

fn cmd_product(a: &ProductArgs) -> Result<Output, CliError> {
    let lhs = parse_series_spec(&a.lhs, a.order)?;
    let rhs = || -> Result<PowerSeries, CliError> {
        parse_series_spec(
            a.rhs.as_deref().ok_or_else(|| CliError::invalid("this operation needs --rhs"))?,
            a.order,
        )
    };
    let payload = match a.op.as_str() {
        "free" => json!({ "g": products::free_product_series(&lhs, &rhs()?, a.order)?.to_json() }),
        "first" => json!({ "g": products::direct_first_series(&lhs, &rhs()?, a.order).to_json() }),
        "second" => json!({ "g": products::direct_second_series(&lhs, &rhs()?, a.order).to_json() }),
        "loops" => json!({ "g": products::loops_series(&lhs, a.order)?.to_json() }),
        "radius" => products::radius_additivity_report(&lhs, &rhs()?, a.order)?.to_json(),
        other => return Err(CliError::invalid(format!("unknown product op {other:?}"))),
    };
    let mut out = json!({ "schema": 1, "command": "product", "op": a.op, "order": a.order });
    out["result"] = payload;
    Ok(Output::json(out))
}

fn cmd_zeta(a: &ZetaArgs) -> Result<Output, CliError> {
    let mg = a.graph.build()?;
    let g = mg.graph.as_finite();
    let mut out = json!({ "schema": 1, "command": "zeta", "mode": a.mode, "graph": graph_summary(&mg) });
    match a.mode.as_str() {
        "det" => out["det"] = zeta::zeta_inverse_det(&g)?.to_json(),
        "factored" => out["factored"] = zeta::zeta_inverse_factored(&g)?.to_json(),
        "cycles" => out["zeta_series"] = zeta::zeta_from_cycles(&g, a.order, None)?.to_json(),
        "all" => {
            let det = zeta::zeta_inverse_det(&g)?;
            let fac = zeta::zeta_inverse_factored(&g)?;
            let from_det = zeta::zeta_series_from_poly(&det, a.order)?;
            let from_cycles = zeta::zeta_from_cycles(&g, a.order, None)?;
            if det != fac {
                return Err(CliError::internal("determinant and factored form disagree"));
            }
            if from_det != from_cycles {
                return Err(CliError::internal("determinant expansion and cycle product disagree"));
            }
            out["det"] = det.to_json();
            out["factored"] = fac.to_json();
            out["zeta_series"] = from_cycles.to_json();
            out["consistent"] = json!(true);
        }
        other => return Err(CliError::invalid(format!("unknown zeta mode {other:?}"))),
    }
    Ok(Output::json(out))
}

fn cmd_cogrowth(a: &CogrowthArgs) -> Result<Output, CliError> {
    let payload = match &a.cmd {
        CogrowthCmd::Nu { alpha, d } => cogrowth::grigorchuk_nu(*alpha, *d)?.to_json(),
        CogrowthCmd::Phi { t, d } => {
            let (at, val) = cogrowth::phi_max(*d);
            json!({ "phi": cogrowth::phi(*t, *d), "max_location": at, "max_value": val })
        }
        CogrowthCmd::Psl2Nu { alpha } => {
            let (lo, hi) = cogrowth::psl2_alpha_range();
            json!({ "nu": cogrowth::psl2_nu(*alpha)?, "alpha": alpha, "valid_range": [lo, hi] })
        }
        CogrowthCmd::Psl2Phi { t } => json!({ "phi": cogrowth::psl2_phi(*t) }),
        CogrowthCmd::Estimate { graph, order, budget } => {
            let mg = graph.build()?.as_finite();
            let census = path_census(&mg, *order, *budget)?;
            json!({
                "alpha": cogrowth::estimate_cogrowth(&census)?,
                "order": order,
                "proper_counts": census.proper_counts(),
            })
        }
    };
    let mut out = json!({ "schema": 1, "command": "cogrowth" });
    out["result"] = payload;
    Ok(Output::json(out))
}

fn cmd_catalog(a: &CatalogArgs) -> Result<Output, CliError> {
    let n = a.order;
    let need = |p: Option<usize>, name: &str| {
        p.ok_or_else(|| CliError::invalid(format!("catalog {} needs --{name}", a.name)))
    };
    let payload = match a.name.as_str() {
        "complete" => {
            let f = catalog::complete_series(need(a.v, "v")?, n)?;
            json!({ "f": f.to_json(), "g": f.eval_u(&rat_int(1)).to_json() })
        }
        "cycle" => {
            let c = catalog::cycle_series(need(a.k, "k")?, n)?;
            json!({ "g": c.g.to_json(), "f0": c.f0.to_json() })
        }
        "tree" => {
            let d = need(a.d, "d")?;
            if d == 1 {
                json!({ "g": catalog::tree_g(1, n)?.to_json() })
            } else {
                let t = catalog::tree_series(d, n)?;
                json!({
                    "f": t.f_flip.flip_u().to_json(),
                    "g": t.g.to_json(),
                    "fprime_flip": t.fprime_flip.to_json(),
                })
            }
        }
        "tree_distance" => {
            let checks = catalog::tree_distance_series(need(a.d, "d")?, n)?;
            if !(checks.closed_form_ok && checks.growth_ok && checks.all_walks_ok && checks.enriched_ok) {
                return Err(CliError::internal("distance-marked tree checks disagree"));
            }
            json!({
                "h": checks.h.to_json(),
                "closed_form_ok": checks.closed_form_ok,
                "growth_ok": checks.growth_ok,
                "all_walks_ok": checks.all_walks_ok,
                "enriched_ok": checks.enriched_ok,
            })
        }
        "loop_tree" => {
            let lt = catalog::loop_tree_series(need(a.d, "d")?, need(a.e, "e")?, n)?;
            json!({ "g": lt.g.to_json(), "radius": lt.radius })
        }
        "ladder" => json!({ "g": catalog::ladder_series(n)?.to_json() }),
        "z12" => json!({ "g": catalog::z12_series(n)?.to_json() }),
        "psl2" => json!({ "g": catalog::psl2_series(n)?.to_json() }),
        other => return Err(CliError::invalid(format!("unknown catalog entry {other:?}"))),
    };
    let mut out = json!({ "schema": 1, "command": "catalog", "name": a.name, "order": n });
    out["result"] = payload;
    Ok(Output::json(out))
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.cmd {
        Cmd::Series(a) => cmd_series(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Product(a) => cmd_product(a),
        Cmd::Zeta(a) => cmd_zeta(a),
        Cmd::Cogrowth(a) => cmd_cogrowth(a),
        Cmd::Catalog(a) => cmd_catalog(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Some(text) = out.text {
                print!("{text}");
            } else {
                println!("{}", serde_json::to_string_pretty(&out.value).expect("serializable"));
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({ "schema": 1, "error": e.message }))
                    .expect("serializable")
            );
            ExitCode::from(e.code)
        }
    }
}
