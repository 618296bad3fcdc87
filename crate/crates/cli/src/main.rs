use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use singtree::branch_ultrametrics::{u_matrix, verify_theorem_d};
use singtree::export::{newick, xtree_dot, xtree_newick};
use singtree::graph::{brick_vertex_tree, decompose, EdgeKind};
use singtree::mumford::{
    angular_metric, arrow_angular_metric, is_negative_definite, mumford_intersection, rho, total_transform,
    Definiteness,
};
use singtree::puiseux::{intersection_number, ploski_check, ploski_quotients, two_smallest_equal, u_metric};
use singtree::rational::{fmt_float, fmt_q, parse_q, Q};
use singtree::schema::{
    detect, matrix_to_json, metric_to_json, parse_branches, parse_graph, parse_metric, parse_resolution, DocKind,
};
use singtree::ultrametric::{
    balls_hierarchy, check_ultrametric, tree_hull, ultrametric_to_depth_tree, FiniteMetric, Verdict,
};
use singtree::Error;

#[derive(Parser)]
#[command(
    name = "singtree",
    version,
    about = "Intersection ultrametrics on branches of surface singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// JSON input file.
    input: PathBuf,
    /// Emit Graphviz DOT instead of JSON.
    #[arg(long, conflicts_with = "newick")]
    dot: bool,
    /// Emit Newick instead of JSON.
    #[arg(long)]
    newick: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Structural diagnostics without computing results.
    Validate(Input),
    /// Cut-vertices, bridges, blocks and bricks of a graph.
    Decompose(Input),
    /// Brick-vertex tree of a graph.
    Bvtree(Input),
    /// Leading minors of the intersection matrix.
    Negdef(Input),
    /// The matrix -M^-1 of a resolution graph.
    Brackets(Input),
    /// Angular ratios q = exp(-rho) between components, or between arrows.
    Rho {
        #[command(flatten)]
        input: Input,
        /// Comma-separated arrow ids; uses their components.
        #[arg(long, value_delimiter = ',')]
        arrows: Option<Vec<String>>,
    },
    /// Total transform of a divisor supported on arrows.
    TotalTransform {
        #[command(flatten)]
        input: Input,
        /// Divisor as `A=1,B=2/3`; defaults to the sum of all arrows.
        #[arg(long, value_delimiter = ',')]
        divisor: Option<Vec<String>>,
    },
    /// Intersection number of two branches.
    Intersect {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
        pair: Vec<String>,
    },
    /// Ultrametric check, ball hierarchy and depth tree.
    Ultrametric {
        #[command(flatten)]
        input: Input,
        /// Reference arrow for u_L on a resolution graph.
        #[arg(long)]
        root: Option<String>,
    },
    /// Tree realizing a metric satisfying the four-point condition; on a
    /// resolution, the angular metric of its arrows.
    TreeHull(Input),
    /// Eggers-Wall tree of plane branches.
    Ewtree(Input),
    /// Ultrametric of u_L against the brick-vertex tree hull.
    VerifyThmD {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        root: String,
    },
    /// u_L on plane branches against their Eggers-Wall tree.
    PloskiCheck(Input),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Newick,
}

impl Input {
    fn format(&self) -> Format {
        if self.dot {
            Format::Dot
        } else if self.newick {
            Format::Newick
        } else {
            Format::Json
        }
    }
}

/// A failure with its exit code and error object.
struct Failure {
    code: u8,
    body: Value,
}

impl Failure {
    fn usage(location: &str, message: String) -> Self {
        Failure {
            code: 2,
            body: json!({"kind": "usage", "location": location, "message": message, "witness": null}),
        }
    }

    fn domain(location: &str, e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::MissingSelfIntersection(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            body: json!({"kind": e.kind(), "location": location, "message": e.to_string(), "witness": e.witness()}),
        }
    }
}

type Out = Result<String, Failure>;

struct Ctx {
    location: String,
    text: String,
    format: Format,
    command: &'static str,
}

impl Ctx {
    fn load(input: &Input, command: &'static str) -> Result<Ctx, Failure> {
        let location = input.input.display().to_string();
        let text = std::fs::read_to_string(&input.input)
            .map_err(|e| Failure::usage(&location, format!("cannot read input: {e}")))?;
        Ok(Ctx {
            location,
            text,
            format: input.format(),
            command,
        })
    }

    fn lift<T>(&self, r: singtree::Result<T>) -> Result<T, Failure> {
        r.map_err(|e| Failure::domain(&self.location, e))
    }

    fn formats(&self, allowed: &[Format]) -> Result<(), Failure> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(Failure::usage(
                &self.location,
                format!("output format not supported by {}", self.command),
            ))
        }
    }

    fn kind(&self) -> Result<DocKind, Failure> {
        self.lift(detect(&self.text))
    }

    fn expect(&self, kinds: &[DocKind]) -> Result<DocKind, Failure> {
        let k = self.kind()?;
        if kinds.contains(&k) {
            Ok(k)
        } else {
            Err(Failure::usage(
                &self.location,
                format!("{} does not accept a {:?} document", self.command, k),
            ))
        }
    }
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

fn float(x: f64) -> Value {
    fmt_float(x)
        .parse::<f64>()
        .ok()
        .and_then(|f| serde_json::Number::from_f64(f).map(Value::Number))
        .unwrap_or(Value::Null)
}

fn verdict3(v: &Verdict<(String, String, String)>) -> Value {
    match v.witness() {
        None => Value::Null,
        Some((a, b, c)) => json!([a, b, c]),
    }
}

fn validate(ctx: &Ctx) -> Out {
    let mut diagnostics: Vec<String> = Vec::new();
    let kind = match detect(&ctx.text) {
        Ok(k) => Some(k),
        Err(e) => {
            diagnostics.push(e.to_string());
            None
        }
    };
    match kind {
        Some(DocKind::Metric) => match parse_metric(&ctx.text) {
            Ok(m) => {
                if let Err(e) = m.check_triangle() {
                    diagnostics.push(e.to_string());
                }
            }
            Err(e) => diagnostics.push(e.to_string()),
        },
        Some(DocKind::Graph) => match parse_graph(&ctx.text) {
            Ok(g) => {
                if let Err(e) = g.check_connected() {
                    diagnostics.push(e.to_string());
                }
            }
            Err(e) => diagnostics.push(e.to_string()),
        },
        Some(DocKind::Resolution) => match parse_resolution(&ctx.text) {
            Ok(rg) => {
                if let Definiteness::FailsAt(k) = is_negative_definite(&rg.intersection_matrix()) {
                    diagnostics.push(Error::NotNegativeDefinite(k).to_string());
                }
            }
            Err(e) => diagnostics.push(e.to_string()),
        },
        Some(DocKind::Branches) => match parse_branches(&ctx.text) {
            Ok(bs) => {
                let mut ids: Vec<&str> = bs.iter().map(|b| b.id()).collect();
                ids.sort_unstable();
                for w in ids.windows(2).filter(|w| w[0] == w[1]) {
                    diagnostics.push(Error::DuplicateId(w[0].to_string()).to_string());
                }
            }
            Err(e) => diagnostics.push(e.to_string()),
        },
        None => {}
    }
    let kind = kind.map(|k| format!("{k:?}").to_lowercase());
    Ok(pretty(json!({"document": kind, "diagnostics": diagnostics})))
}

fn decompose_cmd(ctx: &Ctx) -> Out {
    ctx.formats(&[Format::Json, Format::Dot])?;
    let g = ctx.lift(parse_graph(&ctx.text))?;
    if ctx.format == Format::Dot {
        return Ok(g.to_dot());
    }
    let d = ctx.lift(decompose(&g))?;
    let name = |v: usize| g.vertices()[v].clone();
    let edge = |e: usize| {
        let (a, b, _) = g.edges()[e];
        json!([name(a), name(b)])
    };
    let blocks: Vec<Value> = d
        .blocks
        .iter()
        .map(|b| {
            json!({
                "vertices": b.vertices.iter().map(|&v| name(v)).collect::<Vec<_>>(),
                "edges": b.edges.iter().map(|&e| edge(e)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(pretty(json!({
        "cut_vertices": d.cut_vertices.iter().map(|&v| name(v)).collect::<Vec<_>>(),
        "bridges": d.bridges.iter().map(|&e| edge(e)).collect::<Vec<_>>(),
        "blocks": blocks,
        "bricks": d.bricks,
    })))
}

fn bvtree_cmd(ctx: &Ctx) -> Out {
    ctx.formats(&[Format::Json, Format::Dot])?;
    let g = ctx.lift(parse_graph(&ctx.text))?;
    let bv = ctx.lift(brick_vertex_tree(&g))?;
    if ctx.format == Format::Dot {
        return Ok(bv.to_dot());
    }
    let nodes: Vec<Value> = (0..bv.tree().len())
        .map(|i| json!({"name": bv.name(i), "brick": bv.is_brick_node(i)}))
        .collect();
    let edges: Vec<Value> = bv
        .edge_kinds()
        .iter()
        .map(|&(a, b, k)| {
            let kind = match k {
                EdgeKind::Bridge => "bridge",
                EdgeKind::BrickStar => "brick_star",
            };
            json!([bv.name(a), bv.name(b), kind])
        })
        .collect();
    let valencies: Vec<Value> = bv
        .brick_valencies()
        .iter()
        .enumerate()
        .map(|(k, v)| json!([bv.name(bv.brick_node(k)), v]))
        .collect();
    Ok(pretty(
        json!({"nodes": nodes, "edges": edges, "brick_valencies": valencies}),
    ))
}

fn negdef_cmd(ctx: &Ctx) -> Out {
    ctx.formats(&[Format::Json])?;
    let rg = ctx.lift(parse_resolution(&ctx.text))?;
    let m = rg.intersection_matrix();
    let body = match is_negative_definite(&m) {
        Definiteness::Negative(minors) => json!({
            "negative_definite": true,
            "minors": minors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "fails_at": null,
        }),
        Definiteness::FailsAt(k) => json!({"negative_definite": false, "minors": null, "fails_at": k}),
    };
    Ok(pretty(body))
}

fn brackets_cmd(ctx: &Ctx) -> Out {
    ctx.formats(&[Format::Json])?;
    let rg = ctx.lift(parse_resolution(&ctx.text))?;
    let br = ctx.lift(rg.brackets())?;
    Ok(pretty(json!({"bracket": matrix_to_json(&br.values)})))
}

fn rho_cmd(ctx: &Ctx, arrows: Option<&[String]>) -> Out {
    ctx.formats(&[Format::Json])?;
    let rg = ctx.lift(parse_resolution(&ctx.text))?;
    let m = match arrows {
        Some(ids) => ctx.lift(arrow_angular_metric(
            &rg,
            &ids.iter().map(String::as_str).collect::<Vec<_>>(),
        ))?,
        None => ctx.lift(angular_metric(&rg))?,
    };
    let n = m.len();
    let rho_rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| float(rho(m.value(i, j)))).collect()))
        .collect();
    Ok(pretty(
        json!({"points": m.points(), "q": matrix_to_json(m.values()), "rho": rho_rows}),
    ))
}

fn total_transform_cmd(ctx: &Ctx, divisor: Option<&[String]>) -> Out {
    ctx.formats(&[Format::Json])?;
    let rg = ctx.lift(parse_resolution(&ctx.text))?;
    let d: Vec<(String, Q)> = match divisor {
        None => rg
            .arrows()
            .iter()
            .map(|a| (a.id.clone(), Q::from_integer(1.into())))
            .collect(),
        Some(terms) => terms
            .iter()
            .map(|t| {
                let (id, c) = t.split_once('=').unwrap_or((t.as_str(), "1"));
                Ok((id.to_string(), ctx.lift(parse_q(c))?))
            })
            .collect::<Result<_, Failure>>()?,
    };
    let t = ctx.lift(total_transform(&rg, &d))?;
    let exceptional: Vec<Value> = rg
        .components()
        .iter()
        .zip(&t.exceptional)
        .map(|(id, c)| json!([id, fmt_q(c)]))
        .collect();
    let strict: Vec<Value> = t.strict.iter().map(|(id, c)| json!([id, fmt_q(c)])).collect();
    Ok(pretty(json!({"exceptional": exceptional, "strict": strict})))
}

fn intersect_cmd(ctx: &Ctx, pair: &[String]) -> Out {
    ctx.formats(&[Format::Json])?;
    let [a, b] = pair else {
        return Err(Failure::usage(&ctx.location, "--pair takes exactly two ids".into()));
    };
    let value = match ctx.expect(&[DocKind::Resolution, DocKind::Branches])? {
        DocKind::Resolution => ctx.lift(mumford_intersection(&ctx.lift(parse_resolution(&ctx.text))?, a, b))?,
        _ => {
            let bs = ctx.lift(parse_branches(&ctx.text))?;
            let find = |id: &str| {
                bs.iter()
                    .find(|x| x.id() == id)
                    .ok_or_else(|| Failure::domain(&ctx.location, Error::UnknownBranch(id.into())))
            };
            if a == b {
                return Err(Failure::domain(&ctx.location, Error::SameBranch(a.clone(), b.clone())));
            }
            ctx.lift(intersection_number(find(a)?, find(b)?))?
        }
    };
    Ok(pretty(json!({"value": fmt_q(&value)})))
}

fn ultrametric_input(ctx: &Ctx, root: Option<&str>) -> Result<FiniteMetric, Failure> {
    match ctx.expect(&[DocKind::Metric, DocKind::Branches, DocKind::Resolution])? {
        DocKind::Metric => ctx.lift(parse_metric(&ctx.text)),
        DocKind::Branches => ctx.lift(u_metric(&ctx.lift(parse_branches(&ctx.text))?)),
        _ => {
            let root =
                root.ok_or_else(|| Failure::usage(&ctx.location, "--root is required for a resolution".into()))?;
            ctx.lift(u_matrix(&ctx.lift(parse_resolution(&ctx.text))?, root))
        }
    }
}

fn ultrametric_cmd(ctx: &Ctx, root: Option<&str>) -> Out {
    ctx.formats(&[Format::Json, Format::Newick])?;
    let m = ultrametric_input(ctx, root)?;
    if let Verdict::Witness((a, b, c)) = check_ultrametric(&m) {
        return Err(Failure::domain(&ctx.location, Error::NotUltrametric(a, b, c)));
    }
    let t = ctx.lift(ultrametric_to_depth_tree(&m))?;
    if ctx.format == Format::Newick {
        return Ok(newick(&t) + "\n");
    }
    let h = ctx.lift(balls_hierarchy(&m))?;
    let balls: Vec<Value> = h
        .listing()
        .into_iter()
        .map(|(members, d)| json!({"members": members, "diameter": d.map(|d| d.to_string())}))
        .collect();
    Ok(pretty(
        json!({"metric": metric_to_json(&m), "ultrametric": true, "balls": balls, "newick": newick(&t)}),
    ))
}

fn tree_hull_cmd(ctx: &Ctx) -> Out {
    let m = match ctx.expect(&[DocKind::Metric, DocKind::Resolution])? {
        DocKind::Metric => ctx.lift(parse_metric(&ctx.text))?,
        _ => {
            let rg = ctx.lift(parse_resolution(&ctx.text))?;
            let ids: Vec<&str> = rg.arrows().iter().map(|a| a.id.as_str()).collect();
            ctx.lift(arrow_angular_metric(&rg, &ids))?
        }
    };
    let x = ctx.lift(tree_hull(&m))?;
    match ctx.format {
        Format::Dot => Ok(xtree_dot(&x)),
        Format::Newick => Ok(xtree_newick(&x) + "\n"),
        Format::Json => {
            let nodes: Vec<Value> = (0..x.tree().len())
                .map(|v| json!({"name": x.node_name(v), "marked": x.tree().label(v).is_some(), "valency": x.tree().valency(v)}))
                .collect();
            let edges: Vec<Value> = x
                .edges()
                .iter()
                .map(|(a, b, l)| json!({"a": x.node_name(*a), "b": x.node_name(*b), "doubled_length": fmt_q(l), "length": float(x.display_length(*a, *b))}))
                .collect();
            Ok(pretty(json!({"law": x.law(), "nodes": nodes, "edges": edges})))
        }
    }
}

fn ewtree_cmd(ctx: &Ctx) -> Out {
    ctx.formats(&[Format::Json, Format::Newick])?;
    let bs = ctx.lift(parse_branches(&ctx.text))?;
    let ew = ctx.lift(singtree::puiseux::eggers_wall_tree(&bs))?;
    let t = ew.tree();
    if ctx.format == Format::Newick {
        return Ok(newick(t) + "\n");
    }
    let nodes: Vec<Value> = (0..t.len())
        .map(|v| {
            json!({
                "name": t.node_name(v),
                "parent": t.node(v).parent.map(|p| t.node_name(p)),
                "exponent": ew.exponent(v).map(fmt_q),
                "index": ew.index(v),
            })
        })
        .collect();
    Ok(pretty(json!({
        "nodes": nodes,
        "node_exponents": ew.node_exponents().iter().map(fmt_q).collect::<Vec<_>>(),
        "leaf_indices": ew.leaf_indices(),
    })))
}

fn verify_cmd(ctx: &Ctx, root: &str) -> Out {
    ctx.formats(&[Format::Json, Format::Newick])?;
    let rg = ctx.lift(parse_resolution(&ctx.text))?;
    let r = ctx.lift(verify_theorem_d(&rg, root))?;
    if ctx.format == Format::Newick {
        return Ok(newick(&r.hull_tree) + "\n");
    }
    Ok(pretty(json!({
        "root": r.root,
        "hypothesis_ok": r.hypothesis_ok(),
        "hypothesis_witness": r.hypothesis.witness(),
        "hull_brick_valencies": r.hull_brick_valencies,
        "ultrametric_ok": r.ultrametric_ok(),
        "ultrametric_witness": verdict3(&r.ultrametric),
        "iso_ok": r.iso_ok,
        "unreduced_coincide": r.unreduced_coincide,
        "u": metric_to_json(&r.metric),
        "ultrametric_tree": r.ultrametric_tree.as_ref().map(newick),
        "hull_tree": newick(&r.hull_tree),
    })))
}

fn ploski_cmd(ctx: &Ctx) -> Out {
    ctx.formats(&[Format::Json])?;
    let bs = ctx.lift(parse_branches(&ctx.text))?;
    let r = ctx.lift(ploski_check(&bs))?;
    let quotients = if let [a, b, c] = bs.as_slice() {
        let q = ctx.lift(ploski_quotients(a, b, c))?;
        json!({
            "pairs": [[b.id(), c.id()], [c.id(), a.id()], [a.id(), b.id()]],
            "values": q.iter().map(fmt_q).collect::<Vec<_>>(),
            "two_smallest_equal": two_smallest_equal(&q),
        })
    } else {
        Value::Null
    };
    Ok(pretty(json!({
        "ok": r.ok(),
        "ultrametric_ok": r.ultrametric.is_ok(),
        "ultrametric_witness": verdict3(&r.ultrametric),
        "iso_ok": r.iso_ok,
        "multiplicities": bs.iter().map(|b| json!([b.id(), b.multiplicity()])).collect::<Vec<_>>(),
        "u": metric_to_json(&r.metric),
        "quotients": quotients,
        "ultrametric_tree": r.ultrametric_tree.as_ref().map(newick),
    })))
}

fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Validate(i) => validate(&Ctx::load(i, "validate")?),
        Command::Decompose(i) => decompose_cmd(&Ctx::load(i, "decompose")?),
        Command::Bvtree(i) => bvtree_cmd(&Ctx::load(i, "bvtree")?),
        Command::Negdef(i) => negdef_cmd(&Ctx::load(i, "negdef")?),
        Command::Brackets(i) => brackets_cmd(&Ctx::load(i, "brackets")?),
        Command::Rho { input, arrows } => rho_cmd(&Ctx::load(input, "rho")?, arrows.as_deref()),
        Command::TotalTransform { input, divisor } => {
            total_transform_cmd(&Ctx::load(input, "total-transform")?, divisor.as_deref())
        }
        Command::Intersect { input, pair } => intersect_cmd(&Ctx::load(input, "intersect")?, pair),
        Command::Ultrametric { input, root } => ultrametric_cmd(&Ctx::load(input, "ultrametric")?, root.as_deref()),
        Command::TreeHull(i) => tree_hull_cmd(&Ctx::load(i, "tree-hull")?),
        Command::Ewtree(i) => ewtree_cmd(&Ctx::load(i, "ewtree")?),
        Command::VerifyThmD { input, root } => verify_cmd(&Ctx::load(input, "verify-thm-d")?, root),
        Command::PloskiCheck(i) => ploski_cmd(&Ctx::load(i, "ploski-check")?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprint!("{}", pretty(f.body));
            ExitCode::from(f.code)
        }
    }
}
