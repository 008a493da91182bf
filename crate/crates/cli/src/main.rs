mod vertenum;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ddmolp::bench::{
    artificial_vertex_table, generate_instance, run_benchmark, sample_instances, select_instances,
    summarize, write_records, write_summary, BackendKind, BenchOptions, BenchRecord, GenSpec,
};
use ddmolp::benson::{default_epsilon, solve_molp, Backend, BensonError, SolveOptions, DEFAULT_M};
use ddmolp::format::{
    parse_cone, parse_instance, parse_polyhedron, write_instance, write_polyhedron, write_vrep,
};
use ddmolp::polyhedron::{standard_cone_dd, ConeDD};

use vertenum::{enumerate, Mode, Outcome};

#[derive(Parser)]
#[command(
    name = "ddmolp",
    version,
    about = "Vertex enumeration and outer approximation for linear multiobjective programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Cone,
    Box,
    Offline,
}

#[derive(Subcommand)]
enum Command {
    /// Print the vertices and extreme directions of a polyhedron given by `f` lines.
    Vertenum {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "online-cone")]
        mode: Mode,
        /// Size of the truncating simplex for online-box.
        #[arg(long = "M", default_value_t = DEFAULT_M)]
        m: f64,
        /// Recession cone file (`z` and `f` lines); defaults to the nonnegative orthant.
        #[arg(long)]
        cone: Option<PathBuf>,
    },
    /// Compute an outer approximation of the upper image of an instance.
    Solve {
        instance: PathBuf,
        /// Defaults to 0.005 for two objectives and 0.05 otherwise.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, value_enum, default_value = "cone")]
        backend: BackendArg,
        #[arg(long = "M", default_value_t = DEFAULT_M)]
        m: f64,
        /// Ordering cone file; requires --apex unless it is the nonnegative orthant.
        #[arg(long)]
        cone: Option<PathBuf>,
        /// Apex of the initial outer approximation, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        apex: Option<Vec<f64>>,
        /// Writes `<out>.poly` and `<out>.csv`; without it the polyhedron goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timing: bool,
    },
    /// Print a random accepted instance.
    Generate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Time all backends on random instances.
    Bench {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "M", default_value_t = DEFAULT_M)]
        m: f64,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "offline,box,cone"
        )]
        backends: Vec<BackendArg>,
        /// Average over the instances with the most iterations only.
        #[arg(long)]
        select: Option<usize>,
        /// Output directory for records.csv, summary.csv and artificial.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timing: bool,
        /// Repetitions per timed call; the median is kept.
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, env = "DDMOLP_THREADS")]
        threads: Option<usize>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_cone(path: Option<&PathBuf>, dim: usize) -> Result<ConeDD> {
    match path {
        Some(p) => Ok(parse_cone(&read(p)?).with_context(|| p.display().to_string())?),
        None => Ok(standard_cone_dd(dim)?),
    }
}

fn backend_kind(b: BackendArg) -> BackendKind {
    match b {
        BackendArg::Cone => BackendKind::Cone,
        BackendArg::Box => BackendKind::Box,
        BackendArg::Offline => BackendKind::Offline,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Vertenum {
            file,
            mode,
            m,
            cone,
        } => {
            let pf = parse_polyhedron(&read(&file)?).with_context(|| file.display().to_string())?;
            if !pf.vertices.is_empty() || !pf.directions.is_empty() {
                bail!(
                    "{}: expected an H-representation ('f' lines only)",
                    file.display()
                );
            }
            let cone = load_cone(cone.as_ref(), pf.dim)?;
            match enumerate(pf.dim, &pf.halfspaces, mode, m, &cone)? {
                Outcome::Empty => {
                    eprintln!("empty");
                    return Ok(ExitCode::from(2));
                }
                Outcome::Found {
                    vertices,
                    directions,
                } => write!(out, "{}", write_vrep(pf.dim, &vertices, &directions))?,
            }
        }
        Command::Solve {
            instance,
            eps,
            backend,
            m,
            cone,
            apex,
            out: prefix,
            no_timing,
        } => {
            let mut inst = parse_instance(&read(&instance)?)
                .with_context(|| instance.display().to_string())?;
            if let Some(c) = cone.as_ref() {
                let k = inst.direction().to_vec();
                let cone = load_cone(Some(c), inst.dim())?;
                inst = inst.with_cone(cone)?;
                if inst.cone().contains_interior(&k) {
                    inst = inst.with_direction(k)?;
                }
            }
            let kind = backend_kind(backend);
            let backend = match backend {
                BackendArg::Cone => Backend::Cone,
                BackendArg::Box => Backend::Box { m },
                BackendArg::Offline => Backend::Offline,
            };
            let mut opts =
                SolveOptions::new(eps.unwrap_or_else(|| default_epsilon(inst.dim())), backend);
            opts.initial_point = apex;
            let report = match solve_molp(&inst, &opts) {
                Ok(r) => r,
                Err(BensonError::Infeasible) => bail!("infeasible"),
                Err(e) => return Err(e.into()),
            };
            let poly = write_polyhedron(&report.outer);
            match prefix {
                None => write!(out, "{poly}")?,
                Some(prefix) => {
                    let poly_path = prefix.with_extension("poly");
                    fs::write(&poly_path, poly).with_context(|| poly_path.display().to_string())?;
                    let csv_path = prefix.with_extension("csv");
                    let records: Vec<BenchRecord> = report
                        .iterations
                        .iter()
                        .map(|r| BenchRecord {
                            instance: 0,
                            iteration: r.iteration,
                            backend: kind,
                            ve_time_s: r.ve_time.as_secs_f64(),
                            actual: r.actual,
                            artificial: matches!(backend, Backend::Box { .. })
                                .then_some(r.artificial),
                            alpha: r.alpha,
                        })
                        .collect();
                    let f = fs::File::create(&csv_path)
                        .with_context(|| csv_path.display().to_string())?;
                    write_records(f, &records, !no_timing)?;
                    writeln!(out, "cuts {}", report.num_cuts())?;
                    writeln!(out, "vertices {}", report.vertices.len())?;
                    writeln!(out, "solutions {}", report.efficient_set.len())?;
                }
            }
        }
        Command::Generate { d, n, seed } => {
            let found = (0..100_000u64).map(|i| seed.wrapping_add(i)).find_map(|s| {
                generate_instance(&GenSpec::new(d, n, s))
                    .ok()
                    .map(|inst| (s, inst))
            });
            let Some((s, inst)) = found else {
                bail!("no accepted instance within 100000 seeds");
            };
            writeln!(out, "# d={d} n={n} seed={s}")?;
            write!(out, "{}", write_instance(&inst))?;
        }
        Command::Bench {
            d,
            n,
            samples,
            seed,
            eps,
            m,
            backends,
            select,
            out: dir,
            no_timing,
            reps,
            threads,
        } => {
            let instances =
                sample_instances(d, n, samples, seed, samples.saturating_mul(10_000).max(1));
            if instances.len() < samples {
                eprintln!("only {} accepted instances found", instances.len());
            }
            let mut kinds: Vec<BackendKind> = backends.into_iter().map(backend_kind).collect();
            kinds.sort();
            kinds.dedup();
            let opts = BenchOptions {
                epsilon: eps,
                m,
                backends: kinds.clone(),
                reps,
                threads,
                ..BenchOptions::default()
            };
            let result = run_benchmark(&instances, &opts);
            for (id, msg) in &result.excluded {
                eprintln!("instance {id} excluded: {msg}");
            }
            let timing = !no_timing;
            match dir {
                None => write_records(&mut out, &result.records, timing)?,
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| dir.display().to_string())?;
                    write_records(
                        fs::File::create(dir.join("records.csv"))?,
                        &result.records,
                        timing,
                    )?;
                    let summary = summarize(&result.records, select);
                    write_summary(fs::File::create(dir.join("summary.csv"))?, &summary, timing)?;
                    if kinds.contains(&BackendKind::Box) {
                        let chosen: Vec<u64> = select_instances(&result.records, select)
                            .iter()
                            .map(|c| c.0)
                            .collect();
                        let recs: Vec<BenchRecord> = result
                            .records
                            .iter()
                            .filter(|r| chosen.contains(&r.instance))
                            .cloned()
                            .collect();
                        let last = recs.iter().map(|r| r.iteration).max().unwrap_or(0);
                        let its: Vec<usize> = (0..=last).collect();
                        let mut w = csv_writer(dir.join("artificial.csv"))?;
                        writeln!(
                            w,
                            "iteration,samples,avg_actual,avg_artificial,pct_artificial"
                        )?;
                        for r in artificial_vertex_table(&recs, &its) {
                            writeln!(
                                w,
                                "{},{},{},{},{}",
                                r.iteration,
                                r.samples,
                                r.avg_actual,
                                r.avg_artificial,
                                r.pct_artificial
                            )?;
                        }
                    }
                    writeln!(
                        out,
                        "instances {} excluded {} records {}",
                        instances.len(),
                        result.excluded.len(),
                        result.records.len()
                    )?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn csv_writer(path: PathBuf) -> Result<io::BufWriter<fs::File>> {
    let f = fs::File::create(&path).with_context(|| path.display().to_string())?;
    Ok(io::BufWriter::new(f))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
