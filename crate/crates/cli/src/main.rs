use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cfpart::dets2::{eval_dets2, indicator, EdgeVectorFamily};
use cfpart::enumerate::{count, enumerate};
use cfpart::orbit::{
    checkpoint_file, involution_path, orbit_bfs, orbit_bfs_checkpointed, resume, verify_transitive, weak_classes,
    GeneratorSet, Limits, OrbitReport, SignTable,
};
use cfpart::reduction::{
    reduce_d4, reduce_i8_to_targets, reduce_t16, reduce_t20, reduce_to_path, reduce_to_t19, symmetry_to_involutions,
    type_sequence, verify_twinstar_exhaustive, verify_twinstar_t19, ReductionTrace, DEFAULT_BUDGET,
};
use cfpart::{
    act, build_e, classify_tree, involution, Error, FixedAssignment, Partition, Perm, SymmetryElement, Triple,
};

#[derive(Parser)]
#[command(name = "cfpart", version, about = "Cycle-free partitions of complete graphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generators {
    Involutions,
    Symmetry,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Full,
    Targets,
    T16,
    T20,
    T19,
}

#[derive(Subcommand)]
enum Command {
    /// List or count the cycle-free partitions.
    Enumerate {
        #[arg(long)]
        d: usize,
        /// Pre-assigned edges, e.g. "1-2:1 3-4:2".
        #[arg(long)]
        fixed: Option<String>,
        #[arg(long)]
        count_only: bool,
        /// Stop after this many partitions.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Breadth-first orbit of a partition.
    Orbit {
        /// Start from E_d.
        #[arg(long, conflicts_with = "input")]
        d: Option<usize>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Generators::Involutions)]
        generators: Generators,
        #[arg(long)]
        max_states: Option<u64>,
        #[arg(long)]
        max_depth: Option<u32>,
        /// Write checkpoints into this directory.
        #[arg(long, env = "CFPART_CHECKPOINT_DIR")]
        checkpoint_dir: Option<PathBuf>,
        /// Layers between checkpoints.
        #[arg(long)]
        checkpoint_interval: Option<u32>,
        /// Continue from a checkpoint file.
        #[arg(long, conflicts_with_all = ["d", "input"])]
        resume: Option<PathBuf>,
        #[arg(long)]
        allow_long: bool,
    },
    /// Compare the involution orbit of E_d with the partition count.
    VerifyTransitive {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        allow_long: bool,
    },
    /// Classes under vertex and color relabeling.
    WeakClasses {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        allow_long: bool,
    },
    /// Sign of a partition (E_d has sign +1).
    Sign {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        allow_long: bool,
    },
    /// Apply the involution of a triple.
    Involve {
        #[arg(long = "in")]
        input: PathBuf,
        /// "x,y,z"
        #[arg(long)]
        triple: Triple,
    },
    /// Apply a vertex and color relabeling.
    Act {
        #[arg(long = "in")]
        input: PathBuf,
        /// Vertex images, e.g. "2,1,3,4".
        #[arg(long)]
        sigma: Option<String>,
        /// Color images, e.g. "2,1".
        #[arg(long)]
        tau: Option<String>,
    },
    /// Shortest involution word between two partitions.
    Path {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        max_states: Option<u64>,
    },
    /// Turn one class into a path by involutions.
    ReducePath {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        class: u8,
    },
    /// Drive class 4 of a 4-partition to tree type 19.
    ReduceD4 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Stage::Full)]
        stage: Stage,
    },
    /// Search for twin-star classes from type-19 starts.
    VerifyTwinstar {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Append one JSON record per instance here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Every completion of the type-19 class instead of random ones.
        #[arg(long, requires = "out")]
        exhaustive: bool,
        #[arg(long, default_value_t = 1000)]
        batch: usize,
        #[arg(long)]
        allow_long: bool,
    },
    /// Exact value of the signed expansion.
    EvalDets2 {
        /// Edge vector family as JSON.
        #[arg(long, conflicts_with = "indicator")]
        family: Option<PathBuf>,
        /// Use the indicator family of this partition.
        #[arg(long)]
        indicator: Option<PathBuf>,
        #[arg(long)]
        allow_long: bool,
    },
    /// Isomorphism certificate of a tree.
    ClassifyTree {
        /// Edges, e.g. "1-2,2-3,3-4".
        #[arg(long, conflicts_with = "input")]
        edges: Option<String>,
        /// Vertex count (default: largest vertex in --edges).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, requires = "input")]
        class: Option<u8>,
    },
    /// Involution word realizing a relabeling of E_d.
    NormalizeSymmetry {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        tau: Option<String>,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    /// Exit 1.
    Verification(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolated(_) | Error::LimitExceeded(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

/// Reads a partition in JSON or text form.
fn read_partition(path: &Path) -> Result<Partition, Failure> {
    let text = read_input(path)?;
    let p = if text.trim_start().starts_with('{') {
        Partition::from_json(&text)?
    } else {
        Partition::from_text(&text)?
    };
    Ok(p)
}

fn parse_perm(spec: Option<&str>, len: usize) -> Result<Perm, Failure> {
    let Some(spec) = spec else {
        return Ok(Perm::identity(len));
    };
    let images: Vec<u8> = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad permutation {spec:?}")))
        })
        .collect::<Result<_, _>>()?;
    if images.len() != len {
        return Err(Failure::Usage(format!("permutation {spec:?} needs {len} images")));
    }
    Ok(Perm::from_images(&images)?)
}

fn parse_edges(spec: &str) -> Result<Vec<(u8, u8)>, Failure> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|e| {
            let (a, b) = e
                .split_once('-')
                .ok_or_else(|| Failure::Usage(format!("edge {e:?} is not \"i-j\"")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u8>()
                    .map_err(|_| Failure::Usage(format!("bad edge {e:?}")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

struct Out {
    format: Format,
    stdout: std::io::StdoutLock<'static>,
}

impl Out {
    fn line(&mut self, s: impl std::fmt::Display) -> Outcome {
        writeln!(self.stdout, "{s}")?;
        Ok(())
    }

    fn partition(&mut self, p: &Partition) -> Outcome {
        match self.format {
            Format::Json => self.line(p.to_json()),
            Format::Text => self.line(p.to_text().trim_end()),
        }
    }

    fn value(&mut self, v: &serde_json::Value) -> Outcome {
        self.line(serde_json::to_string(v).expect("json value serializes"))
    }

    fn trace(&mut self, t: &ReductionTrace, extra: serde_json::Value) -> Outcome {
        match self.format {
            Format::Json => {
                let mut v = serde_json::to_value(t).expect("trace serializes");
                if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
                    obj.extend(more);
                }
                self.value(&v)
            }
            Format::Text => {
                for (i, s) in t.steps.iter().enumerate() {
                    let action = match &s.action {
                        cfpart::reduction::Action::Inv(t) => format!("inv {t:?}"),
                        cfpart::reduction::Action::Sym(g) => {
                            format!("sym sigma={:?} tau={:?}", g.sigma.images(), g.tau.images())
                        }
                    };
                    self.line(format!("{:>4}  {action}  class {} -> {}", i + 1, t.class, s.cert.canon))?;
                }
                if let serde_json::Value::Object(more) = extra {
                    for (k, v) in more {
                        self.line(format!("{k}: {v}"))?;
                    }
                }
                self.line(format!("final\n{}", t.final_partition.to_text().trim_end()))
            }
        }
    }

    fn orbit(&mut self, r: &OrbitReport) -> Outcome {
        match self.format {
            Format::Json => self.line(serde_json::to_string(r).expect("report serializes")),
            Format::Text => {
                self.line(format!("size {}", r.size))?;
                if let Some(ok) = r.parity_consistent {
                    self.line(format!("parity consistent {ok}"))?;
                }
                self.line(format!("depth {}", r.diameter_reached))?;
                self.line(format!("complete {}", r.complete))?;
                if let Some(c) = &r.checkpoint_ref {
                    self.line(format!("checkpoint {c}"))?;
                }
                self.line(format!("elapsed {:.3}s", r.elapsed_secs))
            }
        }
    }
}

fn check_d(d: usize) -> Result<usize, Failure> {
    if (1..=cfpart::MAX_D).contains(&d) {
        Ok(d)
    } else {
        Err(Failure::Usage(format!("d = {d} outside 1..={}", cfpart::MAX_D)))
    }
}

fn default_seed() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0)
}

fn run(cli: Cli) -> Outcome {
    let mut out = Out {
        format: cli.format,
        stdout: std::io::stdout().lock(),
    };
    match cli.command {
        Command::Enumerate {
            d,
            fixed,
            count_only,
            limit,
        } => {
            let fixed = fixed.map(|s| FixedAssignment::parse(d, &s)).transpose()?;
            if count_only {
                let n = match limit {
                    Some(l) => enumerate(d, fixed.as_ref())?.take(l as usize).count() as u64,
                    None => count(d, fixed.as_ref())?,
                };
                return out.line(n);
            }
            for (i, p) in enumerate(d, fixed.as_ref())?.enumerate() {
                if limit.is_some_and(|l| i as u64 >= l) {
                    break;
                }
                if out.format == Format::Text && i > 0 {
                    out.line("")?;
                }
                out.partition(&p)?;
            }
            Ok(())
        }
        Command::Orbit {
            d,
            input,
            generators,
            max_states,
            max_depth,
            checkpoint_dir,
            checkpoint_interval,
            resume: resume_from,
            allow_long,
        } => {
            let limits = Limits {
                max_states,
                max_depth,
                checkpoint_interval,
            };
            let report = if let Some(path) = resume_from {
                eprintln!("orbit: resuming {}", path.display());
                resume(&path, &limits)?
            } else {
                let start = match (d, input) {
                    (Some(d), None) => build_e(check_d(d)?),
                    (None, Some(path)) => read_partition(&path)?,
                    _ => return Err(Failure::Usage("give --d, --in or --resume".into())),
                };
                if start.d() >= 4 && !allow_long && max_states.is_none() && max_depth.is_none() {
                    return Err(Failure::Usage(
                        "an unbounded orbit at d >= 4 is a long run; pass --allow-long or a limit".into(),
                    ));
                }
                let gens = match generators {
                    Generators::Involutions => GeneratorSet::InvolutionsOnly,
                    Generators::Symmetry => GeneratorSet::InvolutionsPlusSymmetry,
                };
                eprintln!("orbit: exploring from a d = {} partition", start.d());
                match checkpoint_dir {
                    Some(dir) => {
                        std::fs::create_dir_all(&dir)?;
                        let file = checkpoint_file(&dir, &start, gens);
                        eprintln!("orbit: checkpoints go to {}", file.display());
                        orbit_bfs_checkpointed(&start, gens, &limits, &file)?
                    }
                    None => orbit_bfs(&start, gens, &limits)?,
                }
            };
            eprintln!("orbit: {} states in {:.2}s", report.size, report.elapsed_secs);
            out.orbit(&report)?;
            if report.parity_consistent == Some(false) {
                return Err(Failure::Verification("parity conflict in the orbit".into()));
            }
            Ok(())
        }
        Command::VerifyTransitive { d, allow_long } => {
            check_d(d)?;
            eprintln!("verify-transitive: d = {d}");
            let t = verify_transitive(d, allow_long)?;
            match out.format {
                Format::Json => out.value(&json!({"size": t.size, "total": t.total, "transitive": t.transitive}))?,
                Format::Text => out.line(format!("size {} total {} transitive {}", t.size, t.total, t.transitive))?,
            }
            if !t.transitive {
                return Err(Failure::Verification("the orbit of E_d misses partitions".into()));
            }
            Ok(())
        }
        Command::WeakClasses { d, allow_long } => {
            let w = weak_classes(d, allow_long)?;
            match out.format {
                Format::Json => out.line(serde_json::to_string(&w).expect("classes serialize")),
                Format::Text => {
                    out.line(format!("classes {}", w.count))?;
                    for (i, (p, n)) in w.representatives.iter().zip(&w.sizes).enumerate() {
                        out.line(format!("{:>3}  size {n:>6}  {p:?}", i + 1))?;
                    }
                    Ok(())
                }
            }
        }
        Command::Sign { input, allow_long } => {
            let p = read_partition(&input)?;
            let table = SignTable::build(p.d(), allow_long)?;
            if !table.parity_consistent() {
                return Err(Failure::Verification(
                    "the sign is not well defined on this orbit".into(),
                ));
            }
            let s = table.sign(&p)?;
            match out.format {
                Format::Json => out.value(&json!({ "sign": s })),
                Format::Text => out.line(s),
            }
        }
        Command::Involve { input, triple } => {
            let p = read_partition(&input)?;
            out.partition(&involution(&p, triple)?)
        }
        Command::Act { input, sigma, tau } => {
            let p = read_partition(&input)?;
            let g = SymmetryElement::new(parse_perm(sigma.as_deref(), p.n())?, parse_perm(tau.as_deref(), p.d())?)?;
            out.partition(&act(&p, &g)?)
        }
        Command::Path { input, to, max_states } => {
            let p = read_partition(&input)?;
            let q = read_partition(&to)?;
            let w = involution_path(&p, &q, max_states)?;
            match out.format {
                Format::Json => out.value(&json!({"length": w.len(), "word": w})),
                Format::Text => out.line(
                    w.steps
                        .iter()
                        .map(|t| format!("{},{},{}", t.x(), t.y(), t.z()))
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
            }
        }
        Command::ReducePath { input, class } => {
            let p = read_partition(&input)?;
            let t = reduce_to_path(&p, class)?;
            out.trace(&t, json!({"involutions": t.involution_count()}))
        }
        Command::ReduceD4 { input, stage } => {
            let p = read_partition(&input)?;
            let t = match stage {
                Stage::Full => reduce_d4(&p)?,
                Stage::Targets => reduce_i8_to_targets(&p)?,
                Stage::T16 => reduce_t16(&p)?,
                Stage::T20 => reduce_t20(&p)?,
                Stage::T19 => reduce_to_t19(&p)?,
            };
            let types = type_sequence(&t)?;
            out.trace(&t, json!({"types": types}))
        }
        Command::VerifyTwinstar {
            count,
            seed,
            budget,
            out: out_path,
            exhaustive,
            batch,
            allow_long,
        } => {
            let report = if exhaustive {
                if !allow_long {
                    return Err(Failure::Usage(
                        "the exhaustive twin-star run takes days; pass --allow-long".into(),
                    ));
                }
                let path = out_path.expect("clap requires --out");
                verify_twinstar_exhaustive(budget, &path, batch, |done| {
                    eprintln!("verify-twinstar: {done} instances finished");
                })?
            } else {
                let seed = seed.unwrap_or_else(default_seed);
                eprintln!("verify-twinstar: seed {seed}, {count} instances, budget {budget}");
                let (report, records) = verify_twinstar_t19(count, seed, budget)?;
                if let Some(path) = out_path {
                    let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
                    for r in &records {
                        serde_json::to_writer(&mut f, r).map_err(Error::from)?;
                        f.write_all(b"\n")?;
                    }
                    f.flush()?;
                }
                report
            };
            match out.format {
                Format::Json => out.line(serde_json::to_string(&report).expect("report serializes"))?,
                Format::Text => {
                    if let Some(s) = report.seed {
                        out.line(format!("seed {s}"))?;
                    }
                    out.line(format!(
                        "instances {} successes {} unresolved {} max expanded {} max depth {}",
                        report.instances, report.successes, report.unresolved, report.max_expanded, report.max_depth
                    ))?;
                }
            }
            if report.unresolved > 0 {
                return Err(Failure::Verification(format!(
                    "{} instances unresolved",
                    report.unresolved
                )));
            }
            Ok(())
        }
        Command::EvalDets2 {
            family,
            indicator: ind,
            allow_long,
        } => {
            let family = match (family, ind) {
                (Some(path), None) => EdgeVectorFamily::from_json(&read_input(&path)?)?,
                (None, Some(path)) => indicator(&read_partition(&path)?),
                _ => return Err(Failure::Usage("give --family or --indicator".into())),
            };
            let d = family.d();
            if d > 3 {
                return Err(Failure::Usage(format!("evaluation is supported for d <= 3, got {d}")));
            }
            if d == 3 && !allow_long {
                return Err(Error::Guard("evaluation at d = 3 sums 66240 terms".into()).into());
            }
            let table = SignTable::build(d, allow_long)?;
            let v = eval_dets2(&family, &table, allow_long)?;
            let s = format!("{}/{}", v.numer(), v.denom());
            match out.format {
                Format::Json => out.value(&json!({ "value": s })),
                Format::Text => out.line(s),
            }
        }
        Command::ClassifyTree { edges, n, input, class } => {
            let (edges, n) = match (edges, input) {
                (Some(spec), None) => {
                    let e = parse_edges(&spec)?;
                    let max = e.iter().map(|&(a, b)| a.max(b) as usize).max().unwrap_or(1);
                    (e, n.unwrap_or(max))
                }
                (None, Some(path)) => {
                    let p = read_partition(&path)?;
                    let k = class.ok_or_else(|| Failure::Usage("--in needs --class".into()))?;
                    if k == 0 || k as usize > p.d() {
                        return Err(Failure::Usage(format!("class {k} outside 1..={}", p.d())));
                    }
                    (p.class_edges(k), p.n())
                }
                _ => return Err(Failure::Usage("give --edges or --in with --class".into())),
            };
            let cert = classify_tree(&edges, n)?;
            match out.format {
                Format::Json => out.line(serde_json::to_string(&cert).expect("certificate serializes")),
                Format::Text => {
                    out.line(&cert.canon)?;
                    if let Some(l) = cert.t_label {
                        out.line(format!("type {l}"))?;
                    }
                    Ok(())
                }
            }
        }
        Command::NormalizeSymmetry { d, sigma, tau } => {
            check_d(d)?;
            let g = SymmetryElement::new(parse_perm(sigma.as_deref(), 2 * d)?, parse_perm(tau.as_deref(), d)?)?;
            let w = symmetry_to_involutions(d, &g)?;
            match out.format {
                Format::Json => out.value(&json!({"length": w.len(), "word": w, "verified": true})),
                Format::Text => out.line(
                    w.steps
                        .iter()
                        .map(|t| format!("{},{},{}", t.x(), t.y(), t.z()))
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cfpart: {e}");
            return ExitCode::from(2);
        }
        #[cfg(not(feature = "parallel"))]
        let _ = n;
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("cfpart: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("cfpart: {msg}");
            ExitCode::from(2)
        }
    }
}
