use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use maniplex::generators::{self, CellKind, STANDARD_BASIS};
use maniplex::graph::are_isomorphic;
use maniplex::io::{graph_to_dot, poset_to_dot, read_mpx, write_json, write_mpx, MpxDocument};
use maniplex::mix::{find_covering, mix};
use maniplex::poset::{InducedPoset, PosetReport};
use maniplex::polytopality::{is_polytopal, PolytopalityError, PolytopalityReport};
use maniplex::Maniplex;

// Output goes through these so that a closed pipe is not a panic.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

const EXIT_NO: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 66;

#[derive(Parser)]
#[command(name = "maniplex", version, about = "Polytopality checks for maniplexes")]
struct Cli {
    /// Worker threads for the component computations.
    #[arg(long, global = true, env = "MANIPLEX_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full polytopality report; exits 0 if polytopal, 1 if not.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated maniplex.
    Gen(GenArgs),
    /// Induced poset and its polytope axioms.
    Poset {
        file: PathBuf,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Flag graph in DOT.
    Dot { file: PathBuf },
    /// Component of the product containing the two base flags.
    Mix {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 0)]
        base_a: usize,
        #[arg(long, default_value_t = 0)]
        base_b: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exits 0 with a witness if the two maniplexes are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Exits 0 with the map if the first maniplex covers the second.
    Cover { a: PathBuf, b: PathBuf },
}

#[derive(Args)]
struct GenArgs {
    /// polygon, cube, torus44, klein44, rect3torus or random
    name: String,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
    /// Three rows such as `0,2,0;1,0,0;1,0,2`.
    #[arg(long, allow_hyphen_values = true)]
    basis: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Io(String),
    Data(String),
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check { file, json } => check(&file, json),
        Command::Gen(args) => gen(args),
        Command::Poset { file, dot, json } => poset(&file, dot, json),
        Command::Dot { file } => {
            out!("{}", graph_to_dot(load(&file)?.graph()));
            Ok(0)
        }
        Command::Mix { a, b, base_a, base_b, output } => {
            let (m, n) = (load(&a)?, load(&b)?);
            let x = mix(&m, &n, base_a, base_b).map_err(|e| Failure::Data(e.to_string()))?;
            let doc = MpxDocument::new(x.maniplex.into_graph())
                .with_provenance(format!("mix {} {} --base-a {base_a} --base-b {base_b}", a.display(), b.display()));
            emit(&write_mpx(&doc), output.as_deref())?;
            Ok(0)
        }
        Command::Iso { a, b } => {
            let (m, n) = (load(&a)?, load(&b)?);
            match are_isomorphic(m.graph(), n.graph()).map_err(|e| Failure::Data(e.to_string()))? {
                Some(phi) => {
                    outln!("isomorphic");
                    outln!("map: {}", join(&phi));
                    Ok(0)
                }
                None => {
                    outln!("not isomorphic");
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Cover { a, b } => {
            let (m, n) = (load(&a)?, load(&b)?);
            match find_covering(&m, &n).map_err(|e| Failure::Data(e.to_string()))? {
                Some(cover) => {
                    outln!("covering, {}-to-1", m.flag_count() / n.flag_count());
                    outln!("map: {}", join(cover.map()));
                    Ok(0)
                }
                None => {
                    outln!("no covering");
                    Ok(EXIT_NO)
                }
            }
        }
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn read_doc(path: &Path) -> Result<MpxDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    read_mpx(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Maniplex, Failure> {
    let doc = read_doc(path)?;
    Maniplex::new(doc.graph).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn check(path: &Path, json: bool) -> Outcome {
    let doc = read_doc(path)?;
    let m = Maniplex::new(doc.graph.clone()).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let report = match is_polytopal(&m) {
        Ok(r) => r,
        Err(PolytopalityError::InconsistentVerdicts(r)) => {
            eprintln!("error: graph-side and poset-side verdicts disagree");
            out!("{}", write_json(&r));
            return Ok(EXIT_DATA);
        }
        Err(e) => return Err(Failure::Data(e.to_string())),
    };
    if json {
        #[derive(Serialize)]
        struct CheckJson<'a> {
            name: Option<&'a str>,
            report: &'a PolytopalityReport,
        }
        out!("{}", write_json(&CheckJson { name: doc.name.as_deref(), report: &report }));
    } else {
        out!("{}", describe(doc.name.as_deref(), &report));
    }
    Ok(if report.polytopal { 0 } else { EXIT_NO })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn describe(name: Option<&str>, r: &PolytopalityReport) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        let _ = writeln!(out, "{name}");
    }
    let _ = writeln!(out, "rank {}, {} flags, faces per rank {}", r.rank, r.flag_count, join(&r.f_vector));
    match &r.cip.witness {
        None => {
            let _ = writeln!(out, "polytopal");
        }
        Some(w) => {
            let _ = writeln!(
                out,
                "non-polytopal; CIP fails at S={} (flags {} and {})",
                w.colours, w.flags.0, w.flags.1
            );
        }
    }
    if let Some(w) = &r.wpip.witness {
        let _ = writeln!(out, "WPIP fails at (i,j)=({},{}) (flags {} and {})", w.i, w.j, w.flags.0, w.flags.1);
    }
    if let Some(w) = &r.spip.witness {
        let _ = writeln!(out, "SPIP fails at A={} B={} (flags {} and {})", w.a, w.b, w.flags.0, w.flags.1);
    }
    out.push_str(&describe_poset(&r.poset));
    if let Some(phi) = &r.isomorphism {
        let _ = writeln!(out, "isomorphic to the flag graph of its poset: {}", join(phi));
    }
    out
}

fn describe_poset(p: &PosetReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "maximal chains: {}", p.chain_count);
    match &p.diamond.witness {
        None => {
            let _ = writeln!(out, "diamond condition: yes");
        }
        Some(w) => {
            let _ = writeln!(
                out,
                "diamond condition: no; {} elements of rank {} between {} and {}",
                w.count, w.rank, w.lower, w.upper
            );
        }
    }
    let _ = writeln!(out, "strongly flag-connected: {}", yes(p.strong_flag_connected.holds));
    if let Some(f) = &p.faithful {
        match &f.witness {
            None => {
                let _ = writeln!(out, "faithful: yes");
            }
            Some(w) => {
                let chain: Vec<String> = w.chain.proper().iter().map(|e| e.to_string()).collect();
                let _ = writeln!(out, "faithful: no; chain {} holds flags {}", chain.join(" < "), join(&w.flags));
            }
        }
    }
    let _ = writeln!(out, "abstract polytope: {}", yes(p.is_polytope));
    out
}

fn poset(path: &Path, dot: bool, json: bool) -> Outcome {
    let m = load(path)?;
    let induced = InducedPoset::new(&m);
    let report = induced.report();
    if dot {
        out!("{}", poset_to_dot(induced.poset()));
    } else if json {
        #[derive(Serialize)]
        struct PosetJson<'a> {
            sizes: Vec<usize>,
            covers: Vec<Vec<(usize, usize)>>,
            report: &'a PosetReport,
        }
        let p = induced.poset();
        out!("{}", write_json(&PosetJson { sizes: p.sizes(), covers: p.covers(), report: &report }));
    } else {
        outln!("elements per rank -1..{}: {}", m.rank(), join(&induced.poset().sizes()));
        out!("{}", describe_poset(&report));
    }
    Ok(0)
}

fn need<T>(value: Option<T>, flag: &str, name: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("gen {name} needs --{flag}")))
}

fn parse_basis(text: &str) -> Result<[[i64; 3]; 3], Failure> {
    let bad = || Failure::Usage(format!("bad basis `{text}`, expected three rows like 0,2,0;1,0,0;1,0,2"));
    let rows: Vec<Vec<i64>> = text
        .split(';')
        .map(|row| row.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
        return Err(bad());
    }
    Ok([
        [rows[0][0], rows[0][1], rows[0][2]],
        [rows[1][0], rows[1][1], rows[1][2]],
        [rows[2][0], rows[2][1], rows[2][2]],
    ])
}

fn gen(args: GenArgs) -> Outcome {
    let name = args.name.as_str();
    let (m, label, params) = match name {
        "polygon" => {
            let p = need(args.p, "p", name)?;
            (generators::polygon(p), format!("polygon({p})"), format!("--p {p}"))
        }
        "cube" => {
            let d = args.d.unwrap_or(3);
            (generators::hypercube(d), format!("hypercube({d})"), format!("--d {d}"))
        }
        "torus44" => {
            let b = need(args.b, "b", name)?;
            let c = need(args.c, "c", name)?;
            (generators::torus_44(b, c), format!("torus44({b},{c})"), format!("--b {b} --c {c}"))
        }
        "klein44" => (generators::klein_44(), "klein44".to_string(), String::new()),
        "rect3torus" => {
            let basis = match &args.basis {
                Some(text) => parse_basis(text)?,
                None => STANDARD_BASIS,
            };
            let rows: Vec<String> =
                basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
            let rows = rows.join(";");
            (generators::rectified_cubic_3torus(basis), format!("rect3torus({rows})"), format!("--basis {rows}"))
        }
        "random" => {
            let rank = need(args.rank, "rank", name)?;
            let seed = need(args.seed, "seed", name)?;
            let budget = args.budget.unwrap_or(64);
            (
                generators::random_maniplex(rank, seed, budget),
                format!("random(rank {rank}, seed {seed}, budget {budget})"),
                format!("--rank {rank} --seed {seed} --budget {budget}"),
            )
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown generator `{other}`; expected polygon, cube, torus44, klein44, rect3torus or random"
            )))
        }
    };
    let m = m.map_err(|e| match e {
        generators::GeneratorError::BadParam(msg) => Failure::Usage(msg),
        other => Failure::Data(other.to_string()),
    })?;
    let provenance = format!("maniplex gen {name} {params}");
    if name == "rect3torus" {
        let kinds: Vec<Option<CellKind>> = m.faces(3).iter().map(|f| CellKind::from_flag_count(f.len())).collect();
        let co = kinds.iter().filter(|&&k| k == Some(CellKind::Cuboctahedron)).count();
        let oc = kinds.iter().filter(|&&k| k == Some(CellKind::Octahedron)).count();
        eprintln!("{co} cuboctahedra, {oc} octahedra");
    }
    let doc = MpxDocument::new(m.into_graph()).named(label).with_provenance(provenance.trim_end());
    emit(&write_mpx(&doc), args.output.as_deref())?;
    Ok(0)
}
