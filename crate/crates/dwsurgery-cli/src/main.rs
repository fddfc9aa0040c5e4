use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use dwsurgery::bar::{h3_generators, is_cocycle, is_strongly_normalized, strongly_normalize, Cochain3};
use dwsurgery::engine::DEFAULT_FZ_RANGE;
use dwsurgery::io::{CocycleFile, ErrorReport, Report};
use dwsurgery::torus::parse_surgery;
use dwsurgery::{
    parse_diagram, DwOptions, Engine, Error, FiniteGroup, GroupSpec, MorseDiagram, Result, SurgeryPresentation,
};
use serde::Serialize;

/// Environment variable holding the number of worker threads.
const THREADS_ENV: &str = "DWSURGERY_THREADS";

#[derive(Parser)]
#[command(name = "dwsurgery", version, about = "Dijkgraaf-Witten invariants of surgery 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute F(M, rho) for every representation and the Dijkgraaf-Witten sum.
    Invariant(InvariantArgs),
    /// Cocycle utilities.
    Cocycle {
        #[command(subcommand)]
        command: CocycleCommand,
    },
    /// Diagram utilities.
    Diagram {
        #[command(subcommand)]
        command: DiagramCommand,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// Group name (Z5, D5, S3, Q8, Z2xZ2, ...) or a path to a JSON group spec.
    #[arg(long)]
    group: String,
    /// Largest group order accepted.
    #[arg(long, default_value_t = dwsurgery::algebra::DEFAULT_ORDER_CAP)]
    order_cap: usize,
}

#[derive(Args)]
struct InvariantArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Cocycle file, or one of `zero`, `std:K`, `gen:I`, `gen:I*K`.
    #[arg(long, default_value = "zero")]
    cocycle: String,
    /// Diagram file.
    #[arg(long)]
    diagram: PathBuf,
    /// Surgery coefficients `p1/q1,p2/q2,...`, one per component.
    #[arg(long)]
    surgery: String,
    /// Include every representation in the report.
    #[arg(long)]
    per_rep: bool,
    /// Evaluate one representation per conjugacy orbit, weighted by orbit size.
    #[arg(long)]
    dedup_conj: bool,
    /// Minimum grid range for the solid-torus tables.
    #[arg(long, default_value_t = DEFAULT_FZ_RANGE)]
    range: i64,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CocycleCommand {
    /// Generators of H^3(G; (1/m)Z/Z) and which classes have strongly normalized representatives.
    Find(FindArgs),
}

#[derive(Args)]
struct FindArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Coefficient modulus; defaults to the group order.
    #[arg(long)]
    m: Option<u64>,
    /// Directory for the generator cocycle files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the survey as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DiagramCommand {
    /// Parse a diagram and print its components, crossings and Wirtinger data.
    Check {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))
}

fn load_group(args: &GroupArgs) -> Result<Arc<FiniteGroup>> {
    let path = Path::new(&args.group);
    let spec: GroupSpec = if path.is_file() { read(path)?.parse()? } else { args.group.parse()? };
    Ok(Arc::new(FiniteGroup::with_cap(&spec, args.order_cap)?))
}

fn load_cocycle(arg: &str, group: &Arc<FiniteGroup>) -> Result<Cochain3> {
    let path = Path::new(arg);
    let file = if path.is_file() {
        serde_json::from_str::<CocycleFile>(&read(path)?).map_err(|e| Error::Parse(format!("cocycle file: {e}")))?
    } else {
        CocycleFile::from_request(arg, group.order())?
    };
    file.load(group)
}

fn load_diagram(path: &Path) -> Result<MorseDiagram> {
    parse_diagram(&read(path)?)
}

fn run_invariant(args: &InvariantArgs) -> Result<()> {
    let group = load_group(&args.group)?;
    let diagram = load_diagram(&args.diagram)?;
    let surgery = SurgeryPresentation::new(diagram, parse_surgery(&args.surgery)?)?;
    let input = load_cocycle(&args.cocycle, &group)?;
    if !is_cocycle(&input) {
        return Err(Error::InvalidCochain("the given cochain is not a cocycle".into()));
    }
    let (alpha, normalized) =
        if is_strongly_normalized(&input) { (input, false) } else { (strongly_normalize(&input)?.0, true) };
    let engine = Engine::with_range(alpha.clone(), args.range)?;
    let opts = DwOptions { dedup_conjugacy: args.dedup_conj, per_rep: args.per_rep };
    let result = engine.dw_invariant(&surgery, opts)?;
    let report = Report::new(&surgery, &alpha, normalized, result);
    println!("group: {} (order {})", report.group.name, report.group.order);
    println!("representations: {}", report.counts.representations);
    for v in &report.values {
        println!("  F = {} x {}", v.value, v.multiplicity);
    }
    println!("dw = {} + {}i", report.dw.re, report.dw.im);
    println!("dw (exact) = {}", report.dw.exact);
    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SurveyRow {
    /// Coefficients of the class in the generator basis.
    class: Vec<u64>,
    order: u64,
    strongly_normalizable: bool,
}

#[derive(Serialize)]
struct Survey {
    group: String,
    m: u64,
    generator_orders: Vec<u64>,
    classes: Vec<SurveyRow>,
}

/// Classes are listed exhaustively when there are at most this many.
const SURVEY_CLASS_CAP: u64 = 512;

fn run_find(args: &FindArgs) -> Result<()> {
    let group = load_group(&args.group)?;
    let m = args.m.unwrap_or(group.order() as u64);
    let gens = h3_generators(&group, m)?;
    let orders: Vec<u64> = gens.iter().map(|g| g.order).collect();
    let total: u64 = orders.iter().product();
    let mut classes: Vec<Vec<u64>> = Vec::new();
    if total <= SURVEY_CLASS_CAP {
        let mut c = vec![0u64; gens.len()];
        'outer: loop {
            let mut i = 0;
            loop {
                if i == c.len() {
                    break 'outer;
                }
                c[i] += 1;
                if c[i] < orders[i] {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
            classes.push(c.clone());
        }
        classes.sort();
    } else {
        for (i, &o) in orders.iter().enumerate() {
            for k in 1..o {
                let mut c = vec![0; gens.len()];
                c[i] = k;
                classes.push(c);
            }
        }
    }
    let mut rows = Vec::new();
    println!("H^3({}; (1/{m})Z/Z): generator orders {:?}", group.name(), orders);
    println!("{:<24} {:>6}  strongly normalizable", "class", "order");
    for c in classes {
        let mut alpha = Cochain3::zero(group.clone());
        let mut order = 1u64;
        for (k, g) in c.iter().zip(&gens) {
            alpha = alpha.add(&g.cocycle.scale(*k as i64));
            let o = g.order / num_gcd(*k, g.order);
            order = order / num_gcd(order, o) * o;
        }
        let ok = match strongly_normalize(&alpha) {
            Ok(_) => true,
            Err(Error::NoSolution(_)) => false,
            Err(e) => return Err(e),
        };
        println!("{:<24} {:>6}  {}", format!("{c:?}"), order, if ok { "yes" } else { "no" });
        rows.push(SurveyRow { class: c, order, strongly_normalizable: ok });
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| Error::Validation(format!("cannot create {}: {e}", dir.display())))?;
        for (i, g) in gens.iter().enumerate() {
            write_json(&dir.join(format!("gen{i}.json")), &CocycleFile::from_table(&g.cocycle))?;
            if let Ok((sn, _)) = strongly_normalize(&g.cocycle) {
                write_json(&dir.join(format!("gen{i}_sn.json")), &CocycleFile::from_table(&sn))?;
            }
        }
    }
    if let Some(path) = &args.json {
        write_json(path, &Survey { group: group.name().to_string(), m, generator_orders: orders, classes: rows })?;
    }
    Ok(())
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[derive(Serialize)]
struct DiagramSummary {
    events: usize,
    components: usize,
    arcs: usize,
    crossings: Vec<dwsurgery::diagram::Crossing>,
    writhes: Vec<i64>,
    linking: Vec<Vec<i64>>,
    presentation: dwsurgery::WirtingerPresentation,
}

fn run_check(path: &Path, json: Option<&Path>) -> Result<()> {
    let d = load_diagram(path)?;
    let pres = d.wirtinger();
    let n = d.num_components();
    let linking: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 0 } else { d.linking_number(i, j) }).collect()).collect();
    println!("events: {}", d.events().len());
    println!("components: {n}");
    println!("arcs: {}", d.num_arcs());
    println!("crossings: {}", d.crossings().len());
    for c in 0..n {
        let word: Vec<String> = pres.longitude_words[c].iter().map(|(a, e)| format!("x{a}^{e}")).collect();
        println!(
            "component {c}: meridian x{}, writhe {}, longitude {}",
            pres.meridians[c],
            pres.writhes[c],
            if word.is_empty() { "1".to_string() } else { word.join(" ") }
        );
    }
    if n > 1 {
        println!("linking matrix: {linking:?}");
    }
    if let Some(p) = json {
        let summary = DiagramSummary {
            events: d.events().len(),
            components: n,
            arcs: d.num_arcs(),
            crossings: d.crossings().to_vec(),
            writhes: pres.writhes.clone(),
            linking,
            presentation: pres,
        };
        write_json(p, &summary)?;
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoSolution(_) | Error::TooLarge(_) => 3,
        Error::InvalidGroup(_)
        | Error::ZeroDenominator
        | Error::Parse(_)
        | Error::Topology(_)
        | Error::InvalidCochain(_)
        | Error::NotCoprime { .. }
        | Error::LabelMismatch(_)
        | Error::Validation(_) => 2,
        Error::NoTrivialization(_) | Error::CharacterizationFailure(_) | Error::Internal(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // the pool can only be configured once per process; a failure leaves the default
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match &cli.command {
        Command::Invariant(args) => run_invariant(args),
        Command::Cocycle { command: CocycleCommand::Find(args) } => run_find(args),
        Command::Diagram { command: DiagramCommand::Check { diagram, json } } => run_check(diagram, json.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = serde_json::to_string(&ErrorReport::from(&e)).expect("error report serializes");
            eprintln!("{payload}");
            ExitCode::from(exit_code(&e))
        }
    }
}
