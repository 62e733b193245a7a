use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hitomezashi_cli::render::{render, RenderSpec, Target};
use hitomezashi_cli::report::{exit_code, report_text, summary_table};
use hitomezashi_core::excursion::HarvestRecord;
use hitomezashi_core::height::loop_height2;
use hitomezashi_core::linklike::{swap_first_strands, LinkLikeGraph};
use hitomezashi_core::verify::{self, StringFilter, SweepSpec, TheoremReport, CEILING_ENV};
use hitomezashi_core::{decompose, Error, SignString, ToroidalPattern};

#[derive(Parser)]
#[command(
    name = "hitomezashi",
    version,
    about = "Loops and link-like graphs of toroidal Hitomezashi patterns"
)]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace every loop and print counts and per-loop records.
    Loops(PatternArgs),
    /// Draw the pattern as SVG or ASCII.
    Render {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        /// Cell size in pixels (SVG only).
        #[arg(long, default_value_t = 40)]
        cell: u32,
        #[arg(long)]
        no_outline: bool,
        #[arg(long)]
        no_diagonal: bool,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run theorem sweeps and write a report.
    Verify(VerifyArgs),
    /// Build the annulus graph G'(x) or read a dumped map.
    Linklike {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "map")]
        x: Option<String>,
        /// A map previously written by `dump`.
        #[arg(long, conflicts_with = "x")]
        map: Option<PathBuf>,
        #[command(subcommand)]
        action: LinkAction,
    },
}

#[derive(Args)]
struct PatternArgs {
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "symmetric"
    )]
    y: Option<String>,
    /// Use y = x.
    #[arg(long, conflicts_with = "y")]
    symmetric: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Ascii,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Homology,
    Length,
    Counts,
    Moves,
    Excursions,
    Seifert,
    Oracle,
    Invariants,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Theorem::All)]
    theorem: Theorem,
    /// Sweep Cloth(x, x) only.
    #[arg(long)]
    symmetric: bool,
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 3)]
    m_min: usize,
    /// Defaults to --n-max.
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long, conflicts_with_all = ["two_block", "sample"])]
    balanced: bool,
    #[arg(long, conflicts_with = "sample")]
    two_block: bool,
    /// Draw this many random patterns instead of enumerating.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the size ceilings on exhaustive sweeps.
    #[arg(long)]
    force: bool,
    /// Report file; printed to stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write every harvested excursion, one per line.
    #[arg(long)]
    harvest: Option<PathBuf>,
    /// Leave out timing lines so reports compare byte for byte.
    #[arg(long)]
    no_time: bool,
}

#[derive(Subcommand)]
enum LinkAction {
    /// Print the map in the line format read by --map.
    Dump,
    /// Count Seifert circles.
    Seifert,
    /// Pass strand 0 across strand 1 by triple point moves.
    Swap {
        /// Swap bits t and t+1 of x instead of 0 and 1.
        #[arg(long, default_value_t = 0)]
        at: usize,
        /// Print every move.
        #[arg(long)]
        log: bool,
        /// Write the resulting map here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Schedule(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MoveScheduleFailure(w) => Failure::Schedule(w),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

impl PatternArgs {
    fn build(&self) -> Result<ToroidalPattern, Error> {
        let x: SignString = self.x.parse()?;
        let y: SignString = match &self.y {
            Some(y) => y.parse()?,
            None => x.clone(),
        };
        let m = self.m.unwrap_or(y.len());
        let n = self.n.unwrap_or(x.len());
        ToroidalPattern::new(m, n, x, y)
    }
}

fn cmd_loops(args: &PatternArgs) -> Result<u8, Failure> {
    let mut out = String::new();
    let p = args.build()?;
    let d = decompose(&p);
    let s = d.summary();
    let _ = writeln!(out, "pattern {}", p.id());
    let _ = writeln!(out, "k {} {}", p.kx(), p.ky());
    let _ = writeln!(
        out,
        "total {} trivial {} nontrivial {} cw {} ccw {}",
        s.total, s.trivial, s.nontrivial, s.cw_trivial, s.ccw_trivial
    );
    for ((l, m), c) in &s.class_multiset {
        let _ = writeln!(out, "class ({l},{m}) {c}");
    }
    let balanced = p.kx() == 0 && p.ky() == 0;
    for (k, l) in d.loops.iter().enumerate() {
        let (lambda, mu) = l.class();
        let height = if balanced {
            loop_height2(&p, l).map_or("-".into(), |h| format!("{h}/2"))
        } else {
            "-".into()
        };
        let _ = writeln!(
            out,
            "loop {k} start {} length {} class ({lambda},{mu}) turning {} height {height}",
            l.start(),
            l.len(),
            l.turning()
        );
    }
    emit(&out);
    Ok(0)
}

/// Stdout that tolerates a closed pipe, as in `hitomezashi loops ... | head`.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            emit(text);
            Ok(())
        }
    }
}

fn sweep_spec(a: &VerifyArgs, mode: verify::SweepMode) -> SweepSpec {
    let filter = if let Some(count) = a.sample {
        StringFilter::Sample {
            count,
            seed: a.seed,
        }
    } else if a.balanced {
        StringFilter::Balanced
    } else if a.two_block {
        StringFilter::TwoBlock
    } else {
        StringFilter::All
    };
    SweepSpec {
        mode,
        n_min: a.n_min,
        n_max: a.n_max,
        m_min: a.m_min,
        m_max: a.m_max.unwrap_or(a.n_max),
        filter,
    }
}

fn ceiling_override() -> bool {
    std::env::var(CEILING_ENV).is_ok_and(|v| !v.is_empty() && v != "0")
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, Failure> {
    use verify::SweepMode;
    let pattern_mode = if a.symmetric {
        SweepMode::Symmetric
    } else {
        SweepMode::General
    };
    let force = a.force || ceiling_override();
    let wanted = |t: Theorem| a.theorem == t || a.theorem == Theorem::All;

    let mut jobs: Vec<(Theorem, SweepSpec)> = Vec::new();
    for t in [
        Theorem::Homology,
        Theorem::Length,
        Theorem::Counts,
        Theorem::Excursions,
        Theorem::Invariants,
    ] {
        if wanted(t) {
            jobs.push((t, sweep_spec(a, pattern_mode)));
        }
    }
    for t in [Theorem::Seifert, Theorem::Moves] {
        if wanted(t) {
            jobs.push((t, sweep_spec(a, SweepMode::LinkLike)));
        }
    }
    if wanted(Theorem::Oracle) {
        // Always sampled; defaults to the acceptance size.
        let mut s = sweep_spec(a, SweepMode::General);
        if a.sample.is_none() {
            s.filter = StringFilter::Sample {
                count: 1000,
                seed: a.seed,
            };
        }
        if s.m_max * s.n_max > 400 {
            return Err(Failure::Usage("the brute oracle needs M * N <= 400".into()));
        }
        jobs.push((Theorem::Oracle, s));
    }
    for (_, spec) in &jobs {
        spec.check_ceilings(force)?;
    }

    let mut reports: Vec<TheoremReport> = Vec::new();
    let mut harvested: Vec<HarvestRecord> = Vec::new();
    for (t, spec) in &jobs {
        let r = match t {
            Theorem::Homology => verify::verify_homology(spec),
            Theorem::Length => verify::verify_length(spec),
            Theorem::Counts => verify::verify_counts(spec),
            Theorem::Excursions => {
                let (r, recs) = verify::verify_excursions(spec);
                harvested = recs;
                r
            }
            Theorem::Invariants => verify::verify_invariants(spec),
            Theorem::Seifert => verify::verify_seifert(spec),
            Theorem::Moves => verify::verify_moves(spec),
            Theorem::Oracle => verify::verify_oracle(spec),
            Theorem::All => unreachable!(),
        };
        reports.push(r);
    }

    let text = report_text(&reports, !a.no_time);
    match &a.output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| io_err(path, e))?;
            emit(&summary_table(&reports));
        }
        None => {
            emit(&text);
            eprint!("{}", summary_table(&reports));
        }
    }
    if let Some(path) = &a.harvest {
        let mut out = String::from(HarvestRecord::HEADER);
        out.push('\n');
        for r in &harvested {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        fs::write(path, out).map_err(|e| io_err(path, e))?;
    }
    Ok(exit_code(&reports))
}

fn cmd_linklike(
    x: Option<&str>,
    map: Option<&PathBuf>,
    action: &LinkAction,
) -> Result<u8, Failure> {
    let mut out = String::new();
    let x: Option<SignString> = x.map(str::parse).transpose()?;
    let g = match (&x, map) {
        (_, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            LinkLikeGraph::parse(&text)?
        }
        (Some(x), None) => LinkLikeGraph::from_symmetric_pattern(x)?,
        (None, None) => return Err(Failure::Usage("one of --x or --map is required".into())),
    };
    let loops_of = |s: &SignString| -> Result<usize, Error> {
        Ok(decompose(&ToroidalPattern::symmetric(s.clone())?)
            .loops
            .len())
    };
    match action {
        LinkAction::Dump => out.push_str(&g.dump()),
        LinkAction::Seifert => {
            let circles = g.seifert_circles()?;
            let _ = writeln!(
                out,
                "crossings {} faces {}",
                g.num_crossings(),
                g.faces().len()
            );
            let _ = writeln!(out, "circles {}", circles.len());
            if let Some(x) = &x {
                let _ = writeln!(out, "loops {}", loops_of(x)?);
            }
            for (k, c) in circles.iter().enumerate() {
                let cs: Vec<String> = c.crossings().map(|c| c.to_string()).collect();
                let _ = writeln!(
                    out,
                    "circle {k} length {} crossings {}",
                    cs.len(),
                    cs.join(",")
                );
            }
        }
        LinkAction::Swap { at, log, output } => {
            let (g, swapped) = match &x {
                Some(x) => {
                    if *at >= x.len() {
                        return Err(Failure::Usage(format!(
                            "--at {at} out of range for N = {}",
                            x.len()
                        )));
                    }
                    let r = x.rotated(*at);
                    (
                        LinkLikeGraph::from_symmetric_pattern(&r)?,
                        Some(x.swapped(*at, (*at + 1) % x.len())),
                    )
                }
                None if *at == 0 => (g, None),
                None => return Err(Failure::Usage("--at needs --x".into())),
            };
            let before = g.seifert_count()?;
            let swap = swap_first_strands(&g)?;
            if *log {
                for (k, m) in swap.moves.iter().enumerate() {
                    let config = m
                        .configuration
                        .map_or("-".to_string(), |c| format!("{c:?}"));
                    let _ = writeln!(
                        out,
                        "move {k} corners {:?} {:?} config {config} circles {} -> {} ({:+})",
                        m.corners,
                        m.orientation,
                        m.before,
                        m.after,
                        m.delta()
                    );
                }
            }
            let after = swap.graph.seifert_count()?;
            let _ = writeln!(out, "moves {}", swap.moves.len());
            let _ = writeln!(out, "circles {before} -> {after}");
            if let Some(s) = swapped {
                let want = loops_of(&s)?;
                let _ = writeln!(out, "transposed {s} loops {want}");
                if want != after {
                    let _ = writeln!(out, "mismatch");
                    emit(&out);
                    return Ok(1);
                }
            }
            if let Some(path) = output {
                fs::write(path, swap.graph.dump()).map_err(|e| io_err(path, e))?;
            }
        }
    }
    emit(&out);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let result = match &cli.command {
        Command::Loops(p) => cmd_loops(p),
        Command::Render {
            pattern,
            format,
            cell,
            no_outline,
            no_diagonal,
            output,
        } => pattern.build().map_err(Failure::from).and_then(|p| {
            let spec = RenderSpec {
                target: match format {
                    Format::Svg => Target::Svg,
                    Format::Ascii => Target::Ascii,
                },
                cell: *cell,
                outline: !no_outline,
                diagonal: !no_diagonal,
            };
            write_or_print(output.as_ref(), &render(&p, &spec)).map(|_| 0)
        }),
        Command::Verify(a) => cmd_verify(a),
        Command::Linklike { x, map, action } => cmd_linklike(x.as_deref(), map.as_ref(), action),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Schedule(msg)) => {
            eprintln!("schedule failure: {msg}");
            ExitCode::from(3)
        }
    }
}
