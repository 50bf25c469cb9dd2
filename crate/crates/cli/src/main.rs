use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use psdual_core::chart::{render_a2_portrait, render_panels, ChartStyle, Format, Panel};
use psdual_core::manifold::{newton_polynomial, LevelStatus, ObstructionReport, Structure};
use psdual_core::module::{IsoOptions, DEFAULT_BUDGET};
use psdual_core::spaces::{data_dir, Space, SpaceSpec, TABLE1_SPACES};
use psdual_core::{verify, Error, Prime, SubalgebraSpec};

#[derive(Parser)]
#[command(name = "psdual", version, about = "Poincare self-duality over subalgebras of the Steenrod algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure verdicts for one space, e.g. `rp:11`, `cp:11`, `hp:7`, `op2`, `file:<path>`.
    Analyze {
        space: String,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u32>>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Obstruction table for the projective spaces and F_4/Spin(9).
    Table1 {
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Chart of a space, one column per prime.
    Render {
        space: String,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u32>>,
        /// Subalgebra level; defaults to the largest one with chart styles.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value = "svg")]
        format: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Chart of A(2) at p = 2 as a module over itself.
    A2 {
        #[arg(long, default_value = "svg")]
        format: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Newton polynomial N_k in the Pontryagin classes.
    Newton {
        #[arg(long)]
        k: Option<usize>,
        /// Reduce mod this prime; `k` defaults to (p-1)/2.
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Run the invariant suite; exits with 1 on any failure.
    Verify {
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Input(String),
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn primes(list: &Option<Vec<u32>>, default: &[u32]) -> Result<Vec<Prime>, Error> {
    list.as_deref().unwrap_or(default).iter().map(|&p| Prime::new(p)).collect()
}

fn options(budget: Option<u64>) -> IsoOptions {
    IsoOptions { budget: budget.unwrap_or(DEFAULT_BUDGET), ..IsoOptions::default() }
}

fn emit(text: &str, output: &Option<PathBuf>) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build(space: &str, list: &Option<Vec<u32>>) -> Result<Space, Error> {
    let spec: SpaceSpec = space.parse()?;
    let ps = primes(list, &[2, 3, 5])?;
    if list.is_some() {
        if let Some(p) = ps.iter().find(|p| !spec.supports(**p)) {
            return Err(Error::UnsupportedPrime { family: spec.to_string(), prime: p.value() });
        }
    }
    spec.build(&ps)
}

fn analyze(space: &str, list: &Option<Vec<u32>>, budget: Option<u64>, json: bool, output: &Option<PathBuf>) -> Outcome {
    let sp = build(space, list)?;
    let report = sp.report(&options(budget))?;
    let text = if json {
        serde_json::to_string_pretty(&report).map_err(|e| Failure::Input(e.to_string()))? + "\n"
    } else {
        report.render_text()
    };
    emit(&text, output)
}

fn status_cell(r: &ObstructionReport, s: Structure) -> String {
    let v = r.verdict(s);
    match v.status {
        LevelStatus::Yes => "yes".to_string(),
        LevelStatus::No => "no".to_string(),
        LevelStatus::NoObstructionFound => "no obstruction".to_string(),
        LevelStatus::NotEvaluated => "-".to_string(),
    }
}

const OPTIONAL_ROWS: [(&str, &str); 4] = [
    ("G_2/SO(4)", "g2_so4.mod"),
    ("G_2/U(2)", "g2_u2.mod"),
    ("G_2/T", "g2_t.mod"),
    ("F_4/G_2", "f4_g2.mod"),
];

fn table1(budget: Option<u64>, json: bool, output: &Option<PathBuf>) -> Outcome {
    let opts = options(budget);
    let ps = [Prime::TWO, Prime::THREE, Prime::FIVE];
    let mut reports = Vec::new();
    for s in TABLE1_SPACES {
        let spec: SpaceSpec = s.parse()?;
        let sp = spec.build(&ps)?;
        reports.push((sp.name.clone(), Some(sp.report(&opts)?)));
    }
    for (name, file) in OPTIONAL_ROWS {
        let path = data_dir().join(file);
        if path.exists() {
            reports.push((name.to_string(), Some(Space::from_file(&path)?.report(&opts)?)));
        } else {
            reports.push((name.to_string(), None));
        }
    }
    if json {
        let rows: Vec<serde_json::Value> = reports
            .iter()
            .map(|(name, r)| match r {
                Some(r) => serde_json::json!({ "space": name, "obstruction": r.obstruction(), "report": r }),
                None => serde_json::json!({ "space": name, "obstruction": null, "report": "data unavailable" }),
            })
            .collect();
        let text = serde_json::to_string_pretty(&rows).map_err(|e| Failure::Input(e.to_string()))? + "\n";
        return emit(&text, output);
    }
    let header = ["space", "orientable", "spin", "string", "5-brane", "obstruction"];
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for (name, r) in &reports {
        match r {
            Some(r) => {
                let mut row = vec![name.clone()];
                row.extend(Structure::ALL.iter().map(|&s| status_cell(r, s)));
                row.push(r.obstruction().unwrap_or_else(|| "none found".to_string()));
                rows.push(row);
            }
            None => rows.push(vec![name.clone(), "data unavailable".to_string()]),
        }
    }
    let widths: Vec<usize> =
        (0..header.len()).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.len()).max().unwrap_or(0)).collect();
    let mut text = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        writeln!(text, "{}", cells.join("  ").trim_end()).unwrap();
    }
    emit(&text, output)
}

fn render(space: &str, list: &Option<Vec<u32>>, k: Option<u32>, format: &str, output: &Option<PathBuf>) -> Outcome {
    let format: Format = format.parse()?;
    let style = ChartStyle::default();
    let sp = build(space, list)?;
    let mut panels = Vec::new();
    for r in sp.rings.values() {
        let level = k.unwrap_or_else(|| style.max_level(r.prime()));
        let spec = SubalgebraSpec::new(r.prime(), level);
        panels.push(Panel::new(format!("{} (p = {})", r.name(), r.prime()), r.module(spec)?));
    }
    if let Some(m) = &sp.module {
        panels.push(Panel::new(sp.name.clone(), m.clone()));
    }
    emit(&render_panels(&panels, &style, format)?, output)
}

fn newton(k: Option<usize>, prime: Option<u32>) -> Outcome {
    let p = prime.map(Prime::new).transpose()?;
    let k = match (k, p) {
        (Some(k), _) => k,
        (None, Some(p)) if !p.is_two() => (p.value() as usize - 1) / 2,
        _ => return Err(Failure::Input("give --k, or an odd --prime".to_string())),
    };
    if k == 0 {
        return Err(Failure::Input("k must be positive".to_string()));
    }
    println!("{}", newton_polynomial(k, p));
    Ok(())
}

fn run_verify(budget: Option<u64>, json: bool) -> Outcome {
    let outcomes = verify::run_all(&options(budget));
    if json {
        println!("{}", serde_json::to_string_pretty(&outcomes).map_err(|e| Failure::Input(e.to_string()))?);
    } else {
        for o in &outcomes {
            let mark = if o.passed { "PASS" } else { "FAIL" };
            if o.detail.is_empty() || o.passed {
                println!("{mark} {}", o.name);
            } else {
                println!("{mark} {}: {}", o.name, o.detail);
            }
        }
    }
    if outcomes.iter().all(|o| o.passed) {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { space, primes, budget, json, output } => analyze(space, primes, *budget, *json, output),
        Command::Table1 { budget, json, output } => table1(*budget, *json, output),
        Command::Render { space, primes, k, format, output } => render(space, primes, *k, format, output),
        Command::A2 { format, output } => format
            .parse::<Format>()
            .and_then(render_a2_portrait)
            .map_err(Failure::from)
            .and_then(|text| emit(&text, output)),
        Command::Newton { k, prime } => newton(*k, *prime),
        Command::Verify { budget, json } => run_verify(*budget, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suite) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
