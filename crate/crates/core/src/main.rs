use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use ellrook::biject::{file_to_cycles, file_to_forest, rooks_to_partition, rooks_to_tubes, AbelShape};
use ellrook::boards::{Cell, Placement, PlacementKind, SkylineBoard};
use ellrook::harness::{run_check, BoardSpec, CheckRequest, FamilyKind, Identity};
use ellrook::special::SpecialFamily;
use ellrook::table::{emit_table, TableFormat};
use ellrook::{Error, Result};

#[derive(Parser)]
#[command(name = "ellrook", version, about = "Elliptic rook and file numbers: identity checks, tables, bijections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an identity at random parameter points (or exactly).
    Check {
        identity: String,
        /// Column heights ("0,2,3,5,5") or parameters ("n=5,r=2").
        #[arg(long)]
        board: Option<String>,
        #[arg(long, default_value = "elliptic")]
        family: String,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed z as "re,im".
        #[arg(long)]
        z: Option<String>,
        #[arg(long = "J")]
        j: Option<usize>,
        #[arg(long = "I")]
        i: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// double or double-double
        #[arg(long, default_value = "double-double")]
        precision: String,
        #[arg(long)]
        json: bool,
    },
    /// Write a table of a special number family.
    Table {
        /// stirling2, stirling2-r, lah, lah-r, stirling1, stirling1-r, abel, abel-r, abel-gen, abel-gen-r
        name: String,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[arg(long, default_value = "trivial")]
        family: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Run a bijection on a placement, e.g. --input "n=8,r=3:(4,1),(5,2)".
    Demo {
        /// partition, cycles, forest, tubes
        bijection: String,
        #[arg(long)]
        input: String,
    },
}

fn parse_z(s: &str) -> Result<Complex64> {
    let bad = || Error::InvalidParameter(format!("bad --z {s:?}, expected re,im"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?))
}

/// `"n=8,r=3:(4,1),(5,2)"` into parameters and `(column, row)` cells.
fn parse_demo_input(s: &str) -> Result<(BoardSpec, Vec<Cell>)> {
    let (head, body) = s.split_once(':').unwrap_or((s, ""));
    let spec = BoardSpec::parse(head)?;
    let mut cells = Vec::new();
    let body: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    for chunk in body.split(')').filter(|c| !c.is_empty()) {
        let pair = chunk.trim_start_matches(',').trim_start_matches('(');
        let (c, r) = pair.split_once(',').ok_or_else(|| Error::InvalidPlacement(format!("bad cell {chunk:?}")))?;
        let c = c.parse::<usize>().map_err(|_| Error::InvalidPlacement(format!("bad column in {chunk:?}")))?;
        let r = r.parse::<i64>().map_err(|_| Error::InvalidPlacement(format!("bad row in {chunk:?}")))?;
        cells.push(Cell::new(c, r));
    }
    Ok((spec, cells))
}

fn demo(bijection: &str, input: &str) -> Result<String> {
    let (spec, cells) = parse_demo_input(input)?;
    let n = spec.get("n").ok_or_else(|| Error::BadBoardSpec("demo input needs n=".into()))?;
    let r = spec.get_or("r", 1);
    Ok(match bijection {
        "partition" => {
            let p = Placement::from_cells(PlacementKind::NonattackingRook, SkylineBoard::staircase(n).extended(0), &cells)?;
            rooks_to_partition(&p)?.to_string()
        }
        "cycles" => {
            let p = Placement::from_cells(PlacementKind::File, SkylineBoard::staircase_r(n, r).extended(0), &cells)?;
            file_to_cycles(&p, r)?.to_string()
        }
        "forest" => {
            let shape = AbelShape::new(spec.get_or("m", n), n, r)?;
            let p = Placement::from_cells(PlacementKind::File, shape.board().extended(0), &cells)?;
            file_to_forest(&p, &shape)?.to_string()
        }
        "tubes" => {
            let p = Placement::from_cells(PlacementKind::NonattackingRook, SkylineBoard::lah_r(n, r).extended(0), &cells)?;
            let (t, choices) = rooks_to_tubes(&p, n, r)?;
            let choices = choices.iter().map(|(s, slots)| format!("{s}/{slots}")).collect::<Vec<_>>().join(" ");
            format!("{t}\nchoices: {choices}")
        }
        other => return Err(Error::InvalidParameter(format!("unknown bijection {other:?}"))),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Check { identity, board, family, trials, tol, seed, z, j, i, r, precision, json } => {
            let identity: Identity = identity.parse()?;
            let mut req = CheckRequest::new(identity, board.as_deref(), family.parse()?, trials, seed);
            req.tol = tol;
            req.z = z.as_deref().map(parse_z).transpose()?;
            (req.i, req.j, req.r) = (i, j, r);
            req.precision = precision.parse()?;
            let report = run_check(&req)?;
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!("{report}");
            }
            Ok(report.passed)
        }
        Command::Table { name, nmax, family, out, format, seed, r, m } => {
            let fam = SpecialFamily::parse(&name, r, m)?;
            let kind: FamilyKind = family.parse()?;
            let format: TableFormat = format.parse()?;
            match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    emit_table(fam, nmax, kind, seed, format, &mut w)?;
                    w.flush()?;
                }
                None => {
                    let stdout = io::stdout();
                    let mut lock = stdout.lock();
                    emit_table(fam, nmax, kind, seed, format, &mut lock)?;
                    writeln!(lock)?;
                }
            }
            Ok(true)
        }
        Command::Demo { bijection, input } => {
            println!("{}", demo(&bijection, &input)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
