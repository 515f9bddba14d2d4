use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sculpt::error::Error;
use sculpt::formula::{Formula, Placement};
use sculpt::generators::{gen_counterexample_pentagon, gen_random, gen_zigzag, RandomKind};
use sculpt::guards::{natural_guard, GuardSet};
use sculpt::io::{
    parse_point, point_to_file, read_json, to_json, PlacementFile, PolygonFile, VerifyReport, WitnessFile,
};
use sculpt::placement::{
    general_place, is_convex_ring, place_approx2, place_concise, place_convex, place_orthogonal, place_pseudo_triangle,
};
use sculpt::polygon::Polygon;
use sculpt::svg::render_svg;
use sculpt::verify::{arrangement_line_count, exact_equivalence, witness_finder};

const DEFAULT_MAX_LINES: usize = 512;

#[derive(Parser)]
#[command(name = "sculpt", version, about = "Angle-guard placements with exact verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a placement with one of the strategies.
    Place {
        #[arg(long, short = 's')]
        strategy: String,
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Piece size for the concise strategy.
        #[arg(long = "c", default_value_t = 4)]
        c: usize,
        /// Base strategy for concise: convex or general (default: convex when possible).
        #[arg(long)]
        base: Option<String>,
    },
    /// Check a placement against a polygon exactly.
    Verify {
        #[arg(short = 'p', long = "polygon")]
        polygon: PathBuf,
        #[arg(short = 'g', long = "guards")]
        guards: PathBuf,
    },
    /// Print the guards certifying that a point is inside.
    Certify {
        #[arg(short = 'p', long = "polygon")]
        polygon: PathBuf,
        #[arg(short = 'g', long = "guards")]
        guards: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Look for an inside and an outside point no guard tells apart.
    Witness {
        #[arg(short = 'p', long = "polygon")]
        polygon: PathBuf,
        #[arg(short = 'g', long = "guards")]
        guards: PathBuf,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Draw a polygon and optionally its guards as SVG.
    Render {
        #[arg(short = 'p', long = "polygon")]
        polygon: PathBuf,
        #[arg(short = 'g', long = "guards")]
        guards: Option<PathBuf>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    Zigzag {
        #[arg(long)]
        k: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[arg(long)]
        placement: Option<PathBuf>,
    },
    Counterexample {
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Natural guards on all five vertices.
        #[arg(long)]
        placement: Option<PathBuf>,
    },
    Random {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Io(_) | Error::UnknownLabel(_) | Error::InvalidPolygon(_) => 3,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail(3, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_polygon(path: &Path) -> Result<Polygon, Fail> {
    Ok(read_json::<PolygonFile>(path)?.to_polygon()?)
}

fn load_placement(path: &Path) -> Result<Placement, Fail> {
    Ok(read_json::<PlacementFile>(path)?.to_placement()?)
}

fn max_lines() -> Result<usize, Fail> {
    match std::env::var("SCULPT_MAX_LINES") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Fail(3, format!("SCULPT_MAX_LINES is not a number: `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_LINES),
    }
}

fn check_size(p: &Polygon, g: &GuardSet) -> Result<usize, Fail> {
    let lines = arrangement_line_count(p, g);
    let cap = max_lines()?;
    if lines > cap {
        return Err(Fail(
            2,
            format!("arrangement has {lines} lines, above SCULPT_MAX_LINES = {cap}"),
        ));
    }
    Ok(lines)
}

fn place(strategy: &str, p: &Polygon, c: usize, base: Option<&str>) -> Result<Placement, Fail> {
    Ok(match strategy {
        "general" => general_place(p)?,
        "convex" => place_convex(p)?,
        "pseudo" => place_pseudo_triangle(p)?,
        "orthogonal" => place_orthogonal(p)?,
        "approx2" => place_approx2(p)?,
        "concise" => {
            let base = base.unwrap_or(if is_convex_ring(p) { "convex" } else { "general" });
            place_concise(p, c, base)?
        }
        _ => return Err(Fail(3, format!("unknown strategy `{strategy}`"))),
    })
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.command {
        Command::Place {
            strategy,
            input,
            output,
            c,
            base,
        } => {
            let p = load_polygon(&input)?;
            let pl = place(&strategy, &p, c, base.as_deref())?;
            emit(output.as_deref(), &to_json(&PlacementFile::from_placement(&pl)))?;
            Ok(0)
        }
        Command::Verify { polygon, guards } => {
            let p = load_polygon(&polygon)?;
            let pl = load_placement(&guards)?;
            let lines = check_size(&p, &pl.guards)?;
            let eq = exact_equivalence(&p, &pl)?;
            let report = VerifyReport::new(&eq, lines, &pl);
            emit(None, &to_json(&report))?;
            Ok(if report.status == "ok" { 0 } else { 1 })
        }
        Command::Certify { polygon, guards, point } => {
            let _ = load_polygon(&polygon)?;
            let pl = load_placement(&guards)?;
            let q = parse_point(&point)?;
            match pl.certificate(&q)? {
                Some(labels) => emit(None, &to_json(&labels))?,
                None => emit(None, "\"outside\"\n")?,
            }
            Ok(0)
        }
        Command::Witness { polygon, guards } => {
            let p = load_polygon(&polygon)?;
            let pl = load_placement(&guards)?;
            check_size(&p, &pl.guards)?;
            match witness_finder(&p, &pl.guards) {
                Some(w) => emit(None, &to_json(&WitnessFile::new(&w)))?,
                None => emit(None, "null\n")?,
            }
            Ok(0)
        }
        Command::Gen { what } => {
            match what {
                GenCommand::Zigzag { k, output, placement } => {
                    let (p, pl) = gen_zigzag(k)?;
                    emit(output.as_deref(), &to_json(&PolygonFile::from_polygon(&p)))?;
                    if let Some(path) = placement {
                        emit(Some(&path), &to_json(&PlacementFile::from_placement(&pl)))?;
                    }
                }
                GenCommand::Counterexample { output, placement } => {
                    let (p, a, b) = gen_counterexample_pentagon();
                    emit(output.as_deref(), &to_json(&PolygonFile::from_polygon(&p)))?;
                    if let Some(path) = placement {
                        let mut g = GuardSet::new();
                        let labels: Vec<String> = (0..5).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
                        for (i, l) in labels.iter().enumerate() {
                            g.push(l.clone(), natural_guard(&p, i)?)?;
                        }
                        let pl = Placement::new("natural", g, Formula::and_labels(&labels), None)?;
                        emit(Some(&path), &to_json(&PlacementFile::from_placement(&pl)))?;
                    }
                    eprintln!("p_in = {:?}, q_out = {:?}", point_to_file(&a), point_to_file(&b));
                }
                GenCommand::Random { kind, n, seed, output } => {
                    let kind: RandomKind = kind.parse()?;
                    let p = gen_random(kind, n, seed)?;
                    emit(output.as_deref(), &to_json(&PolygonFile::from_polygon(&p)))?;
                }
            }
            Ok(0)
        }
        Command::Render {
            polygon,
            guards,
            output,
        } => {
            let p = load_polygon(&polygon)?;
            let pl = guards.as_deref().map(load_placement).transpose()?;
            emit(output.as_deref(), &render_svg(&p, pl.as_ref()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
