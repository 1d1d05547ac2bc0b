use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubecx::actions::{
    acyl_profile, coarse_stabilizer, displacement_check, essentiality_report, linkage_check,
    skewer_detect, wpd_certificate, Action, ActionJson, AutomorphismJson, Group, PartialAutomorphism,
};
use cubecx::analyze::{analyze, AnalyzeOptions};
use cubecx::complex::{validate_median, Caps, CubeComplex, Side};
use cubecx::contact::{contact_graph, delta_chain, four_point_delta, hagen_check, qi_check};
use cubecx::convexity::{convex_hull, is_convex, project_set, ConvexSet};
use cubecx::duality::{dual_complex, irreducible_decompose, restriction_quotient, walls_of, Wallspace, DEFAULT_WALL_CAP};
use cubecx::graph::{CubeGraph, GraphJson};
use cubecx::separation::{relation, separation_scan, thinness_constant, well_separation_degree};
use cubecx::suite::{self, SuiteConfig};
use cubecx::{dot, generate, Error};

#[derive(Parser)]
#[command(name = "cubecx", version, about = "Finite CAT(0) cube complexes from median graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Seed for generators and sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 50_000)]
    cap_vertices: usize,
    #[arg(long, global = true, default_value_t = 5_000)]
    cap_hyperplanes: usize,
    /// Largest group enumerated from generators.
    #[arg(long, global = true, default_value_t = cubecx::actions::DEFAULT_GROUP_CAP)]
    cap_group: usize,
    /// Largest contact graph for the four-point scan.
    #[arg(long, global = true, default_value_t = cubecx::contact::DEFAULT_DELTA_CAP)]
    cap_contact: usize,
    /// Ignore the vertex and hyperplane caps.
    #[arg(long, global = true)]
    allow_oversize: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Cube,
    Path,
    Grid,
    Star,
    RandomTree,
    RandomWallspace,
    CosetTree,
}

/// Graph files are `{"vertices": n, "edges": [[u, v], ...]}`; `-` reads stdin.
#[derive(Subcommand)]
enum Cmd {
    /// Decide whether a graph is median; exit 1 with a witness triple if not.
    Validate { graph: PathBuf },
    /// List hyperplanes with their edges, halfspaces and carriers.
    Hyperplanes { graph: PathBuf },
    /// ℓ¹ and ℓ∞ distance between two vertices.
    Dist {
        graph: PathBuf,
        x: u32,
        y: u32,
        /// Also report the median of x, y and this vertex.
        #[arg(long)]
        median: Option<u32>,
        /// Also list the interval between x and y.
        #[arg(long)]
        interval: bool,
    },
    /// Gate projection onto a convex set.
    Project {
        graph: PathBuf,
        /// Vertices of the target set (must be convex unless --hull).
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["halfspace", "carrier"])]
        onto: Vec<u32>,
        /// Use the convex hull of --onto.
        #[arg(long)]
        hull: bool,
        /// Target halfspace, e.g. `3:a`.
        #[arg(long)]
        halfspace: Option<String>,
        /// Target carrier of a hyperplane.
        #[arg(long)]
        carrier: Option<u32>,
        /// Vertices to project; all by default.
        #[arg(long, value_delimiter = ',')]
        from: Vec<u32>,
    },
    /// Well-separation scan over all hyperplane pairs, or one pair.
    Separation {
        graph: PathBuf,
        pair: Vec<u32>,
        /// Thinness constant of this geodesic instead.
        #[arg(long, value_delimiter = ',')]
        thinness: Vec<u32>,
    },
    /// Contact graph, optionally with a Δ chain or the four-point δ.
    Contact {
        graph: PathBuf,
        #[arg(long, num_args = 2)]
        chain: Vec<u32>,
        #[arg(long)]
        delta: bool,
    },
    /// Quasi-isometry and geodesic/separator checks on the contact graph.
    Qi { graph: PathBuf },
    /// Dual cube complex of a wallspace `{"ground": n, "walls": [[A, B], ...]}`.
    Dual {
        wallspace: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WALL_CAP)]
        cap_walls: usize,
    },
    /// Product decomposition, or the restriction quotient keeping --keep.
    Decompose {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        keep: Option<Vec<u32>>,
        /// Print the halfspace walls instead.
        #[arg(long)]
        walls: bool,
    },
    /// Group action reports. The action file holds `{"map": [...]}`,
    /// `{"generators": [{"map": [...]}, ...]}` or a partial automorphism
    /// `{"domain": [...], "map": [...]}`.
    Action {
        graph: PathBuf,
        action: PathBuf,
        /// Generators of the symmetry group for WPD stabilizers.
        #[arg(long)]
        symmetry: Option<PathBuf>,
        /// Endpoints for the displacement check and coarse stabilizer.
        #[arg(long, num_args = 2)]
        points: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        radius: u32,
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, default_value_t = 2)]
        r_max: u32,
    },
    /// Generate a complex (or a wallspace) from a named family.
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        params: Vec<u32>,
        /// For random-wallspace: emit the dual graph instead.
        #[arg(long)]
        dual: bool,
    },
    /// DOT export of the skeleton or the contact graph.
    Dot {
        graph: PathBuf,
        #[arg(long)]
        contact: bool,
        /// Draw only these vertices; `--select` alone draws nothing.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        select: Option<Vec<u32>>,
    },
    /// Run the acceptance battery.
    Suite {
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u32>,
        #[arg(long, default_value_t = 200)]
        wallspaces: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Full pipeline in one report.
    Analyze {
        graph: PathBuf,
        #[arg(long)]
        action: Option<PathBuf>,
        #[arg(long)]
        symmetry: Option<PathBuf>,
    },
}

/// What a command produced, before formatting.
enum Output {
    Json(Value),
    Dot(String),
    /// JSON plus a text rendering.
    Both(Value, String),
}

struct Failure {
    output: Output,
}

type CmdResult = Result<Output, Failure>;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut v = json!({ "error": e.kind(), "message": e.to_string() });
        if let Some(w) = e.witness() {
            v["witness"] = w;
        }
        Failure { output: Output::Json(v) }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure {
        output: Output::Json(json!({ "error": "io", "message": format!("{}: {e}", path.display()) })),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut s = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut s).map_err(|e| io_failure(path, e))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    }
    Ok(s)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Error::from(e).into())
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

struct Ctx {
    caps: Caps,
    cap_group: usize,
    cap_contact: usize,
    seed: u64,
}

impl Ctx {
    fn graph(&self, path: &Path) -> Result<CubeGraph, Failure> {
        let j: GraphJson = read_json(path)?;
        let g = CubeGraph::from_json(&j)?;
        if !self.caps.allow_oversize && g.vertex_count() > self.caps.max_vertices {
            return Err(Error::CapExceeded {
                what: "vertex",
                actual: g.vertex_count(),
                cap: self.caps.max_vertices,
            }
            .into());
        }
        Ok(g)
    }

    /// Validated complex; a non-median input fails with the full report.
    fn complex(&self, path: &Path) -> Result<CubeComplex, Failure> {
        let g = self.graph(path)?;
        let report = validate_median(&g)?;
        if !report.is_median {
            return Err(Failure {
                output: Output::Json(json!({ "error": "not_median", "validation": to_value(&report) })),
            });
        }
        Ok(CubeComplex::with_caps(g, &self.caps)?)
    }

    fn generators(&self, cx: &CubeComplex, path: &Path) -> Result<Group, Failure> {
        let j: ActionJson = read_json(path)?;
        match Action::from_json(cx, &j, self.cap_group)? {
            Action::Group { group, .. } => Ok(group),
            Action::Partial(_) => Err(Error::InvalidArgument("symmetry group needs total automorphisms".into()).into()),
        }
    }
}

fn parse_halfspace(s: &str) -> Result<(u32, Side), Failure> {
    let bad = || Failure::from(Error::InvalidArgument(format!("halfspace `{s}`: expected J:a or J:b")));
    let (j, side) = s.split_once(':').ok_or_else(bad)?;
    let j = j.parse().map_err(|_| bad())?;
    let side = match side {
        "a" | "A" => Side::A,
        "b" | "B" => Side::B,
        _ => return Err(bad()),
    };
    Ok((j, side))
}

fn graph_text(g: &CubeGraph) -> String {
    let mut s = format!("{} vertices, {} edges\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

fn run(cli: &Cli) -> CmdResult {
    let ctx = Ctx {
        caps: Caps {
            max_vertices: cli.cap_vertices,
            max_hyperplanes: cli.cap_hyperplanes,
            allow_oversize: cli.allow_oversize,
        },
        cap_group: cli.cap_group,
        cap_contact: cli.cap_contact,
        seed: cli.seed,
    };
    match &cli.cmd {
        Cmd::Validate { graph } => {
            let g = ctx.graph(graph)?;
            let r = validate_median(&g)?;
            let text = if r.is_median {
                format!(
                    "median: {} vertices, {} edges, {} hyperplanes, dimension {}\n",
                    r.vertex_count,
                    r.edge_count,
                    r.hyperplane_count.unwrap_or(0),
                    r.dimension.unwrap_or(0)
                )
            } else {
                let w = r.witness.as_ref().expect("failures carry a witness");
                format!("not median: triple {:?} has medians {:?}\n", w.triple, w.medians)
            };
            if r.is_median {
                if cli.format == Format::Dot {
                    return Ok(Output::Dot(dot::complex_dot(&CubeComplex::with_caps(g, &ctx.caps)?, None)));
                }
                Ok(Output::Both(to_value(&r), text))
            } else {
                Err(Failure {
                    output: Output::Both(to_value(&r), text),
                })
            }
        }
        Cmd::Hyperplanes { graph } => {
            let cx = ctx.complex(graph)?;
            if cli.format == Format::Dot {
                return Ok(Output::Dot(dot::complex_dot(&cx, None)));
            }
            Ok(Output::Json(to_value(&cx.hyperplanes())))
        }
        Cmd::Dist {
            graph,
            x,
            y,
            median,
            interval,
        } => {
            let cx = ctx.complex(graph)?;
            let l1 = cx.dist_l1(*x, *y)?;
            let linf = cx.dist_linf_checked(*x, *y)?;
            let mut v = json!({ "x": x, "y": y, "l1": to_value(&l1), "linf": linf });
            let mut text = format!("d1 = {}, dinf = {linf}\n", l1.distance);
            if let Some(z) = median {
                let m = cx.median(*x, *y, *z)?;
                v["median"] = json!({ "z": z, "median": m });
                text.push_str(&format!("median({x}, {y}, {z}) = {m}\n"));
            }
            if *interval {
                v["interval"] = to_value(&cx.interval(*x, *y)?);
            }
            Ok(Output::Both(v, text))
        }
        Cmd::Project {
            graph,
            onto,
            hull,
            halfspace,
            carrier,
            from,
        } => {
            let cx = ctx.complex(graph)?;
            let target = match (halfspace, carrier) {
                (Some(h), _) => {
                    let (j, s) = parse_halfspace(h)?;
                    ConvexSet::halfspace(&cx, j, s)?
                }
                (None, Some(j)) => ConvexSet::carrier(&cx, *j)?,
                (None, None) if *hull => convex_hull(&cx, onto)?,
                (None, None) => {
                    let r = is_convex(&cx, onto)?;
                    if !r.convex {
                        return Err(Failure {
                            output: Output::Json(json!({ "error": "not_convex", "report": to_value(&r) })),
                        });
                    }
                    ConvexSet::new(&cx, onto)?
                }
            };
            let src: Vec<u32> = if from.is_empty() {
                (0..cx.vertex_count() as u32).collect()
            } else {
                from.clone()
            };
            let p = project_set(&cx, &src, &target)?;
            Ok(Output::Json(json!({ "target": to_value(&target), "projection": to_value(&p) })))
        }
        Cmd::Separation { graph, pair, thinness } => {
            let cx = ctx.complex(graph)?;
            if !thinness.is_empty() {
                return Ok(Output::Json(to_value(&thinness_constant(&cx, thinness)?)));
            }
            match pair.as_slice() {
                [] => Ok(Output::Json(to_value(&separation_scan(&cx)?))),
                &[j, h] => Ok(Output::Json(json!({
                    "relation": to_value(&relation(&cx, j, h)?),
                    "report": to_value(&well_separation_degree(&cx, j, h)?),
                }))),
                _ => Err(Error::InvalidArgument("give zero or two hyperplanes".into()).into()),
            }
        }
        Cmd::Contact { graph, chain, delta } => {
            let cx = ctx.complex(graph)?;
            let cg = contact_graph(&cx);
            if cli.format == Format::Dot {
                return Ok(Output::Dot(dot::contact_dot(&cx, &cg)));
            }
            let mut v = json!({ "contact": to_value(&cg.report()) });
            if let &[j, h] = chain.as_slice() {
                v["chain"] = to_value(&delta_chain(&cx, j, h)?);
            }
            if *delta {
                v["four_point_delta"] = to_value(&four_point_delta(&cg, ctx.cap_contact)?);
            }
            Ok(Output::Json(v))
        }
        Cmd::Qi { graph } => {
            let cx = ctx.complex(graph)?;
            let cg = contact_graph(&cx);
            let qi = qi_check(&cx, &cg)?;
            let hagen = hagen_check(&cx, &cg);
            let ok = qi.clean && hagen.part_i_failures.is_empty() && hagen.part_ii_failures.is_empty();
            let v = json!({ "qi": to_value(&qi), "hagen": to_value(&hagen) });
            if ok {
                Ok(Output::Json(v))
            } else {
                Err(Failure { output: Output::Json(v) })
            }
        }
        Cmd::Dual { wallspace, cap_walls } => {
            let w: Wallspace = read_json(wallspace)?;
            let d = dual_complex(&w, *cap_walls)?;
            if cli.format == Format::Dot {
                return Ok(Output::Dot(dot::graph_dot(&d.graph)));
            }
            Ok(Output::Json(to_value(&d.report())))
        }
        Cmd::Decompose { graph, keep, walls } => {
            let cx = ctx.complex(graph)?;
            if *walls {
                return Ok(Output::Json(to_value(&walls_of(&cx))));
            }
            match keep {
                Some(k) => Ok(Output::Json(to_value(&restriction_quotient(&cx, k)?))),
                None => Ok(Output::Json(to_value(&irreducible_decompose(&cx)?))),
            }
        }
        Cmd::Action {
            graph,
            action,
            symmetry,
            points,
            radius,
            depth,
            r_max,
        } => {
            let cx = ctx.complex(graph)?;
            let j: ActionJson = read_json(action)?;
            match Action::from_json(&cx, &j, ctx.cap_group)? {
                Action::Group { generators, group } => {
                    let mut v = json!({
                        "group_order": group.order(),
                        "truncated": group.truncated(),
                        "profile": to_value(&acyl_profile(&cx, &group)),
                        "essentiality": to_value(&essentiality_report(&cx, &group, *depth)),
                        "linkage": to_value(&linkage_check(&cx, &group, *r_max)?),
                    });
                    if let (&[x, y], Some(g)) = (points.as_slice(), generators.first()) {
                        let p = PartialAutomorphism::from_total(g);
                        v["displacement"] = to_value(&displacement_check(&cx, &p, x, y, None)?);
                        v["coarse_stabilizer"] = to_value(&coarse_stabilizer(&cx, &group, x, y, *radius)?);
                    }
                    Ok(Output::Json(v))
                }
                Action::Partial(g) => {
                    let sym = match symmetry {
                        Some(p) => ctx.generators(&cx, p)?,
                        None => Group::trivial(&cx),
                    };
                    let mut v = json!({
                        "skewers": to_value(&skewer_detect(&cx, &g)),
                        "wpd": to_value(&wpd_certificate(&cx, &g, &sym)?),
                        "window": to_value(g.window()),
                    });
                    if let &[x, y] = points.as_slice() {
                        v["displacement"] = to_value(&displacement_check(&cx, &g, x, y, None)?);
                    }
                    Ok(Output::Json(v))
                }
            }
        }
        Cmd::Generate { kind, params, dual } => generate_cmd(&ctx, cli.format, *kind, params, *dual),
        Cmd::Dot { graph, contact, select } => {
            let cx = ctx.complex(graph)?;
            if *contact {
                Ok(Output::Dot(dot::contact_dot(&cx, &contact_graph(&cx))))
            } else {
                Ok(Output::Dot(dot::complex_dot(&cx, select.as_deref())))
            }
        }
        Cmd::Suite {
            criteria,
            wallspaces,
            samples,
        } => {
            let cfg = SuiteConfig {
                seed: ctx.seed,
                wallspaces: *wallspaces,
                samples: *samples,
                max_vertices: 500,
            };
            let r = suite::run(&cfg, criteria)?;
            let mut text = String::new();
            for c in &r.criteria {
                text.push_str(&format!(
                    "criterion {:>2} {} {}: {}\n",
                    c.id,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            let out = Output::Both(to_value(&r), text);
            if r.all_passed {
                Ok(out)
            } else {
                Err(Failure { output: out })
            }
        }
        Cmd::Analyze {
            graph,
            action,
            symmetry,
        } => {
            let cx = ctx.complex(graph)?;
            let action = match action {
                Some(p) => Some(Action::from_json(&cx, &read_json::<ActionJson>(p)?, ctx.cap_group)?),
                None => None,
            };
            let sym = match symmetry {
                Some(p) => Some(ctx.generators(&cx, p)?),
                None => None,
            };
            let r = analyze(&cx, action.as_ref(), sym.as_ref(), &AnalyzeOptions::default())?;
            Ok(Output::Json(to_value(&r)))
        }
    }
}

fn param(params: &[u32], i: usize, name: &str) -> Result<u32, Failure> {
    params
        .get(i)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("missing parameter `{name}`")).into())
}

fn in_range(name: &str, v: u32, lo: u32, hi: u32) -> Result<u32, Failure> {
    if v < lo || v > hi {
        return Err(Error::InvalidArgument(format!("{name} = {v} is outside {lo}..={hi}")).into());
    }
    Ok(v)
}

fn generate_cmd(ctx: &Ctx, format: Format, kind: Kind, params: &[u32], dual: bool) -> CmdResult {
    let cap = ctx.caps.max_vertices as u64;
    let size_ok = |n: u64| -> Result<(), Failure> {
        if !ctx.caps.allow_oversize && n > cap {
            return Err(Error::CapExceeded {
                what: "vertex",
                actual: n as usize,
                cap: cap as usize,
            }
            .into());
        }
        Ok(())
    };
    let mut extra = None;
    let g = match kind {
        Kind::Cube => {
            let n = in_range("n", param(params, 0, "n")?, 0, generate::MAX_CUBE_DIM)?;
            size_ok(1 << n)?;
            generate::cube(n)
        }
        Kind::Path => {
            let n = in_range("n", param(params, 0, "n")?, 1, u32::MAX)?;
            size_ok(n as u64)?;
            generate::path(n)
        }
        Kind::Grid => {
            let a = in_range("a", param(params, 0, "a")?, 1, u32::MAX)?;
            let b = in_range("b", param(params, 1, "b")?, 1, u32::MAX)?;
            size_ok(a as u64 * b as u64)?;
            generate::grid(a, b)
        }
        Kind::Star => {
            let k = param(params, 0, "k")?;
            size_ok(k as u64 + 1)?;
            generate::star(k)
        }
        Kind::RandomTree => {
            let n = in_range("n", param(params, 0, "n")?, 1, u32::MAX)?;
            size_ok(n as u64)?;
            generate::random_tree(n, ctx.seed)
        }
        Kind::CosetTree => {
            let depth = param(params, 0, "depth")?;
            let t = generate::coset_tree(depth)?;
            size_ok(t.graph.vertex_count() as u64)?;
            let gens: Vec<AutomorphismJson> = t.generators.iter().map(|m| AutomorphismJson { map: m.clone() }).collect();
            extra = Some(to_value(&gens));
            t.graph
        }
        Kind::RandomWallspace => {
            let k = param(params, 0, "k")?;
            let m = param(params, 1, "m")?;
            let w = generate::random_wallspace(k, m, ctx.seed)?;
            if !dual {
                return Ok(Output::Json(to_value(&w)));
            }
            dual_complex(&w, DEFAULT_WALL_CAP)?.graph
        }
    };
    if format == Format::Dot {
        return Ok(Output::Dot(dot::graph_dot(&g)));
    }
    let mut v = to_value(&g.to_json());
    if let Some(gens) = extra {
        // The same file then doubles as an action file.
        v["generators"] = gens;
    }
    Ok(Output::Both(v, graph_text(&g)))
}

fn render(output: &Output, format: Format) -> Result<String, String> {
    match (output, format) {
        (Output::Dot(s), Format::Dot) => Ok(s.clone()),
        (Output::Dot(s), _) => Ok(s.clone()),
        (Output::Both(_, t), Format::Text) => Ok(t.clone()),
        (Output::Json(v) | Output::Both(v, _), Format::Json | Format::Text) => {
            Ok(serde_json::to_string_pretty(v).expect("values print") + "\n")
        }
        (Output::Json(_) | Output::Both(..), Format::Dot) => Err("this command has no DOT output".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Configured from flags only: no environment variable changes behaviour.
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn })
        .target(env_logger::Target::Stderr)
        .init();
    let (output, code) = match run(&cli) {
        Ok(o) => (o, ExitCode::SUCCESS),
        // Failures are always reported as JSON so callers can parse them.
        Err(f) => (
            match f.output {
                Output::Both(v, _) => Output::Json(v),
                o => o,
            },
            ExitCode::from(1),
        ),
    };
    let format = if code == ExitCode::SUCCESS { cli.format } else { Format::Json };
    let text = match render(&output, format) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.output {
        Some(p) => std::fs::write(p, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    code
}
