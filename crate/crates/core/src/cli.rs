use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::coloring::{EdgeColor, EdgeColoring, PartialColoring};
use crate::kempe::{self, Moves};
use crate::planar::{self, EdgeId, GraphDoc, PlaneGraph};
use crate::scenario::{self, Scenario, ScenarioDoc, StepStatus, Transcript};
use crate::suite::{self, restrict};
use crate::tiling::{self, TilingMode};
use crate::{dot, server};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Boundary triples every TD55 border must fall into, up to synonym.
pub const ATLAS_55_TRIPLES: [[usize; 3]; 3] = [[0, 0, 6], [0, 2, 4], [2, 2, 2]];

#[derive(Parser, Debug)]
#[command(
    name = "rgbt",
    version,
    about = "RGB-tilings, canal rings and Kempe moves on planar triangulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a graph or scenario document
    Validate { file: String },
    /// Enumerate tilings
    Tilings {
        #[arg(long)]
        mode: TilingMode,
        /// Pin an edge, e.g. --fix 0-1=r
        #[arg(long = "fix", value_name = "EDGE=COLOR")]
        fix: Vec<String>,
        file: String,
    },
    /// Decide whether an R-tiling is grand
    Grand { file: String, tiling: String },
    /// Classify the diamond of a removed edge
    Classify {
        #[arg(long, value_name = "U,V")]
        edge: String,
        file: String,
        tiling: String,
    },
    /// List closed canal rings of one color, optionally applying one
    Canal {
        #[arg(long)]
        color: EdgeColor,
        #[arg(long, value_name = "RINGID")]
        apply: Option<usize>,
        file: String,
        tiling: String,
    },
    /// Group the RGB-tilings of a graph into ECS/VCS classes
    Congruence { file: String },
    /// Enumerate border patterns around a topic of discussion
    Atlas {
        #[arg(long)]
        td: String,
        #[arg(long)]
        json: bool,
    },
    /// Scenario scripts
    Scenario {
        #[command(subcommand)]
        command: ScenarioCommand,
    },
    /// Run a verification suite
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long)]
        corpus: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print a graph as DOT
    Export {
        #[arg(long, value_name = "FILE")]
        dot: String,
        tiling: Option<String>,
    },
    /// Serve the session API
    Serve {
        #[arg(long)]
        port: u16,
    },
}

#[derive(Subcommand, Debug)]
pub enum ScenarioCommand {
    /// Run a builtin scenario or a scenario file and print its transcript
    Run {
        target: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Check(String),
    #[error("output closed")]
    Closed,
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn read(path: &str) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| usage(format!("{path}: {e}")))
}

/// A graph from a JSON document, a planar_code file (first graph) or a builtin name.
pub fn load_graph(arg: &str) -> Result<PlaneGraph, CliError> {
    if !Path::new(arg).exists() {
        return planar::builtin::by_name(arg).ok_or_else(|| usage(format!("{arg}: no such file or builtin graph")));
    }
    let bytes = read(arg)?;
    if bytes.starts_with(b">>planar_code") {
        let gs = planar::parse_planar_code(&bytes).map_err(|e| usage(format!("{arg}: {e}")))?;
        return gs
            .into_iter()
            .next()
            .ok_or_else(|| usage(format!("{arg}: empty planar_code file")));
    }
    let doc: GraphDoc = serde_json::from_slice(&bytes).map_err(|e| usage(format!("{arg}: {e}")))?;
    PlaneGraph::from_doc(&doc).map_err(|e| CliError::Check(format!("{arg}: {e}")))
}

/// A builtin scenario name or a scenario JSON file.
pub fn load_scenario(arg: &str) -> Result<Scenario, CliError> {
    let doc: ScenarioDoc = if Path::new(arg).exists() {
        serde_json::from_slice(&read(arg)?).map_err(|e| usage(format!("{arg}: {e}")))?
    } else {
        scenario::builtin_doc(arg).map_err(usage)?
    };
    scenario::load_scenario(&doc).map_err(|e| CliError::Check(format!("{arg}: {e}")))
}

fn is_scenario_file(arg: &str) -> bool {
    if !Path::new(arg).exists() {
        return scenario::BUILTINS.iter().any(|(n, _)| *n == arg);
    }
    std::fs::read(arg)
        .ok()
        .and_then(|b| serde_json::from_slice::<serde_json::Value>(&b).ok())
        .is_some_and(|v| v.get("omega").is_some())
}

/// A tiling as a coloring document file or as letters in edge order.
pub fn load_tiling(host: &PlaneGraph, arg: &str) -> Result<EdgeColoring, CliError> {
    if Path::new(arg).exists() {
        let doc = serde_json::from_slice(&read(arg)?).map_err(|e| usage(format!("{arg}: {e}")))?;
        return EdgeColoring::from_doc(host, &doc).map_err(usage);
    }
    let colors: Option<Vec<EdgeColor>> = arg.chars().map(EdgeColor::from_letter).collect();
    match colors {
        Some(c) if c.len() == host.edge_count() => Ok(EdgeColoring(c)),
        Some(c) => Err(usage(format!(
            "tiling has {} letters for {} edges",
            c.len(),
            host.edge_count()
        ))),
        None => Err(usage(format!("{arg}: not a file or a string over r g b k Y"))),
    }
}

fn parse_edge(s: &str) -> Result<EdgeId, CliError> {
    let (u, v) = s
        .split_once([',', '-'])
        .ok_or_else(|| usage(format!("edge '{s}' should look like U,V")))?;
    let u = u.trim().parse().map_err(|_| usage(format!("bad vertex '{u}'")))?;
    let v = v.trim().parse().map_err(|_| usage(format!("bad vertex '{v}'")))?;
    if u == v {
        return Err(usage(format!("edge '{s}' is a loop")));
    }
    Ok(EdgeId::new(u, v))
}

pub fn render_transcript(t: &Transcript) -> String {
    let mut s = format!("scenario {}\n{}\n", t.scenario, t.header);
    for r in &t.steps {
        let status = match r.status {
            StepStatus::Done => "done",
            StepStatus::Pass => "PASS",
            StepStatus::Fail => "FAIL",
        };
        let label = r.label.as_deref().map(|l| format!(" [{l}]")).unwrap_or_default();
        s += &format!(
            "{:>3} {:<26}{label} {status:<4} border {}  {}\n",
            r.index, r.step, r.border, r.detail
        );
    }
    s += if t.pass { "PASS\n" } else { "FAIL\n" };
    s
}

fn out_json(out: &mut dyn Write, v: &impl serde::Serialize) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: std::io::Error| match e.kind() {
        std::io::ErrorKind::BrokenPipe => CliError::Closed,
        _ => usage(e),
    };
    match cmd {
        Command::Validate { file } => {
            if is_scenario_file(&file) {
                let sc = load_scenario(&file)?;
                let v = sc.check_state(&sc.initial_state());
                writeln!(
                    out,
                    "scenario {}: {} vertices, {} edges, border of {}",
                    sc.name,
                    sc.sigma.n(),
                    sc.sigma.edge_count(),
                    sc.omega.len()
                )
                .map_err(io)?;
                for r in &v.reasons {
                    writeln!(out, "  {r}").map_err(io)?;
                }
                writeln!(out, "{}", if v.valid { "valid" } else { "invalid" }).map_err(io)?;
                return Ok(if v.valid { EXIT_OK } else { EXIT_CHECK });
            }
            let g = load_graph(&file)?;
            let kind = if g.is_mpg() {
                "maximal planar".to_string()
            } else {
                format!("{} outer facet(s)", g.outer_facets().len())
            };
            writeln!(
                out,
                "{} vertices, {} edges, {} triangles, {kind}",
                g.n(),
                g.edge_count(),
                g.triangles().len()
            )
            .map_err(io)?;
            writeln!(out, "valid").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Tilings { mode, fix, file } => {
            let g = load_graph(&file)?;
            let mut fixed = PartialColoring::empty(&g);
            for f in &fix {
                let (e, c) = f
                    .split_once('=')
                    .ok_or_else(|| usage(format!("--fix {f}: expected EDGE=COLOR")))?;
                let e = parse_edge(e)?;
                let i = g.edge_index(e).ok_or_else(|| usage(format!("no edge {e}")))?;
                fixed.0[i] = Some(c.parse().map_err(usage)?);
            }
            let all = tiling::enumerate_tilings(&g, mode, &fixed).map_err(|e| CliError::Check(e.to_string()))?;
            writeln!(out, "{} tilings", all.len()).map_err(io)?;
            writeln!(
                out,
                "edges {}",
                g.edges().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
            )
            .map_err(io)?;
            for t in &all {
                writeln!(out, "{}", t.letters()).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Grand { file, tiling: arg } => {
            let g = load_graph(&file)?;
            let t = load_tiling(&g, &arg)?;
            let v = tiling::check_tiling(&g, &t, TilingMode::Mono(EdgeColor::Red));
            if !v.valid {
                writeln!(out, "not an R-tiling: {} bad triangles", v.triangles.len()).map_err(io)?;
                return Ok(EXIT_CHECK);
            }
            match tiling::is_grand(&g, &t) {
                Ok(w) => {
                    writeln!(out, "grand\nV13 {:?}\nV24 {:?}", w.v13, w.v24).map_err(io)?;
                    Ok(EXIT_OK)
                }
                Err(bad) => {
                    writeln!(
                        out,
                        "not grand: {} edge {} contradicts the parity of the others",
                        bad.color, bad.clash
                    )
                    .map_err(io)?;
                    Ok(EXIT_CHECK)
                }
            }
        }
        Command::Classify {
            edge,
            file,
            tiling: arg,
        } => {
            let g = load_graph(&file)?;
            let e = parse_edge(&edge)?;
            let (q, t) = if g.edge_index(e).is_some() {
                let q = planar::remove_edge(&g, e).map_err(|err| CliError::Check(err.to_string()))?;
                let t = match load_tiling(&q, &arg) {
                    Ok(t) => t,
                    Err(_) => restrict(&g, &load_tiling(&g, &arg)?, &q),
                };
                (q, t)
            } else {
                let t = load_tiling(&g, &arg)?;
                (g, t)
            };
            let v = tiling::classify_diamond(&q, &t, e).map_err(|err| CliError::Check(err.to_string()))?;
            writeln!(out, "type {:?}", v.kind).map_err(io)?;
            writeln!(
                out,
                "surround {}",
                v.surround.iter().map(|c| c.letter()).collect::<String>()
            )
            .map_err(io)?;
            writeln!(
                out,
                "candidates {}",
                v.candidates.iter().map(|c| c.letter()).collect::<String>()
            )
            .map_err(io)?;
            for c in &v.chains {
                writeln!(out, "chain {} {:?}", c.color, c.path).map_err(io)?;
            }
            if let (Some(c), Some(x)) = (v.extension_color, &v.extension) {
                writeln!(out, "extension {c}: {}", x.letters()).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Canal {
            color,
            apply,
            file,
            tiling: arg,
        } => {
            let g = load_graph(&file)?;
            let t = load_tiling(&g, &arg)?;
            let rings: Vec<_> = kempe::closed_rings(&g, &t)
                .into_iter()
                .filter(|r| r.color == color)
                .collect();
            match apply {
                None => {
                    writeln!(out, "{} {color} rings", rings.len()).map_err(io)?;
                    for (i, r) in rings.iter().enumerate() {
                        let es: Vec<String> = r.crossings.iter().map(|c| g.edge(c.edge).to_string()).collect();
                        writeln!(out, "{i}: {}", es.join(" ")).map_err(io)?;
                    }
                    Ok(EXIT_OK)
                }
                Some(id) => {
                    let r = rings
                        .get(id)
                        .ok_or_else(|| usage(format!("no ring {id}; there are {}", rings.len())))?;
                    let next = kempe::apply_ecs(&g, &t, r).map_err(|e| CliError::Check(e.to_string()))?;
                    writeln!(out, "{}", next.letters()).map_err(io)?;
                    Ok(EXIT_OK)
                }
            }
        }
        Command::Congruence { file } => {
            let g = load_graph(&file)?;
            let all = tiling::all_tilings(&g, TilingMode::Rgb).map_err(|e| CliError::Check(e.to_string()))?;
            let rep = kempe::congruence_classes(&g, &all, Moves::ALL, kempe::CONGRUENCE_CAP)
                .map_err(|e| CliError::Check(e.to_string()))?;
            writeln!(
                out,
                "{} RGB-tilings, {} congruence classes",
                all.len(),
                rep.classes.len()
            )
            .map_err(io)?;
            for (i, c) in rep.classes.iter().enumerate() {
                writeln!(out, "class {i}: {} tilings, e.g. {}", c.len(), all[c[0]].letters()).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Atlas { td, json } => {
            if td != "55" {
                return Err(usage(format!("no atlas for TD '{td}'; available: 55")));
            }
            let sc = scenario::builtin("atlas_55").map_err(|e| CliError::Check(e.to_string()))?;
            let rep = sc.atlas().map_err(|e| CliError::Check(e.to_string()))?;
            let triples_ok = rep.triples == ATLAS_55_TRIPLES;
            if json {
                out_json(out, &rep).map_err(io)?;
            } else {
                writeln!(out, "TD55 border patterns up to synonym and symmetry").map_err(io)?;
                for b in &rep.boundaries {
                    writeln!(
                        out,
                        "  {} {:?} orbit {:>2}  rgb {}  ergb {}{}",
                        b.pattern,
                        b.triple,
                        b.orbit,
                        b.rgb_completions,
                        b.ergb_completions,
                        if !b.four_colorable && b.ergb_completions > 0 {
                            "  forcing"
                        } else {
                            ""
                        }
                    )
                    .map_err(io)?;
                }
                writeln!(
                    out,
                    "triples {:?}{}",
                    rep.triples,
                    if triples_ok { "" } else { "  MISMATCH" }
                )
                .map_err(io)?;
                writeln!(out, "patterns {}  forcing {}", rep.patterns, rep.forcing).map_err(io)?;
                for d in &rep.discrepancies {
                    writeln!(out, "DISCREPANCY: {d}").map_err(io)?;
                }
            }
            Ok(if triples_ok { EXIT_OK } else { EXIT_CHECK })
        }
        Command::Scenario {
            command: ScenarioCommand::Run { target, json },
        } => {
            let sc = load_scenario(&target)?;
            let t = sc.run_script().map_err(|e| CliError::Check(e.to_string()))?;
            if json {
                out_json(out, &t).map_err(io)?;
            } else {
                write!(out, "{}", render_transcript(&t)).map_err(io)?;
            }
            Ok(if t.pass { EXIT_OK } else { EXIT_CHECK })
        }
        Command::Verify {
            suite: name,
            max_n,
            corpus,
            json,
        } => {
            let rep = suite::run_suite(&name, max_n, &corpus).map_err(usage)?;
            if json {
                out_json(out, &rep).map_err(io)?;
            } else {
                write!(out, "{}", rep.render()).map_err(io)?;
            }
            Ok(if rep.pass { EXIT_OK } else { EXIT_CHECK })
        }
        Command::Export { dot: file, tiling: arg } => {
            let text = if is_scenario_file(&file) {
                let sc = load_scenario(&file)?;
                let colors = match arg {
                    Some(s) => load_tiling(&sc.sigma, &s)?.0.into_iter().map(Some).collect(),
                    None => sc.initial_state().colors.0,
                };
                dot::export_dot_with(&sc.sigma, &colors, Some(&sc.labels))
            } else {
                let g = load_graph(&file)?;
                let t = arg.map(|s| load_tiling(&g, &s)).transpose()?;
                dot::export_dot(&g, t.as_ref())
            };
            write!(out, "{text}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().map_err(io)?;
            writeln!(out, "listening on 127.0.0.1:{port}").map_err(io)?;
            out.flush().map_err(io)?;
            rt.block_on(server::serve(port))
                .map_err(|e| CliError::Check(format!("port {port}: {e}")))?;
            Ok(EXIT_OK)
        }
    }
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Check(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_CHECK
        }
        Err(CliError::Closed) => EXIT_OK,
    }
}
