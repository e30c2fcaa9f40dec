//! Command-line front end. Summary lines go to stdout; the JSON report goes to
//! `--output` (or to stdout with `--json`).

use crate::coxcat::{
    admissible, build_theta_cox, check_full_strong_exceptional, endomorphism_algebra, transform_line_bundle,
    uniform_vanishing_batch, verify_theta_transform, AssignedElement,
};
use crate::error::{Error, Result};
use crate::exactlin::{Dim, Int, Rat};
use crate::gkz::{secondary_fan, SecondaryFan};
use crate::io::{jclass, parse_complex, parse_model};
use crate::model::ToricModel;
use crate::monads::{degree_zero_strand, restrict_to_face, validate_complex, vanishing_report};
use crate::plot;
use crate::report::{self, fmt_class};
use crate::theta::{
    denominator_bound, enumerate_theta, frobenius_oracle, interior_walls, order_theta, sharpened_reduction,
    ThetaElement, Variant,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "coxcat", version, about = "Exact Cox-category computations for toric varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Input document (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the report.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print the report on stdout instead of the summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate Θ with witnesses, chamber assignments and an order.
    Theta {
        #[command(flatten)]
        io: Io,
        /// Use the variant with the closed-open interval flipped.
        #[arg(long)]
        star: bool,
        /// Compare with the Frobenius pushforward oracle at this level.
        #[arg(long, value_name = "L")]
        frobenius: Option<u64>,
        /// Seed for tie-breaking in the order.
        #[arg(long, value_name = "SEED")]
        order: Option<u64>,
    },
    /// Secondary fan: chambers, faces, walls.
    Gkz {
        #[command(flatten)]
        io: Io,
    },
    /// Hom dimensions and monomial bases between Θ elements.
    Homs {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_name = "SEED")]
        order: Option<u64>,
    },
    /// Full strong exceptional check (tilting check when no order exists).
    CheckExceptional {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_name = "SEED")]
        order: Option<u64>,
    },
    /// Birational transforms between chambers.
    Transform {
        #[command(flatten)]
        io: Io,
        /// Source chamber (default: the first one admissible for --class)
        #[arg(long)]
        source: Option<usize>,
        /// Target chamber (default: the first other chamber)
        #[arg(long)]
        target: Option<usize>,
        /// A class, comma separated; any class is accepted (diagnostic mode outside Θ).
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        /// Nef classes tried in each vanishing check
        #[arg(long, default_value_t = 6, value_name = "N")]
        nef_battery: usize,
        /// Also run the experimental uniform-vanishing probes.
        #[arg(long)]
        uniform: bool,
    },
    /// Θ-graded complexes.
    Monad {
        #[command(subcommand)]
        command: MonadCommand,
    },
    /// Sharpened generation at the interior walls of chamber 0.
    Sharpen {
        #[command(flatten)]
        io: Io,
    },
    /// SVG pictures (rank 2).
    Plot {
        #[command(flatten)]
        io: Io,
        #[arg(value_enum)]
        target: PlotTarget,
    },
}

#[derive(Subcommand, Debug)]
pub enum MonadCommand {
    Validate {
        #[command(flatten)]
        io: Io,
    },
    Restrict {
        #[command(flatten)]
        io: Io,
        /// Only this GKZ face.
        #[arg(long)]
        face: Option<usize>,
    },
    Strand {
        #[command(flatten)]
        io: Io,
        #[arg(long = "char", default_value_t = 0, value_name = "P")]
        characteristic: u64,
    },
    Vanishing {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotTarget {
    SecondaryFan,
    Zonotope,
    Theta,
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub summary: Vec<String>,
    /// JSON report, or SVG text for `plot`.
    pub document: String,
    pub exit_code: i32,
}

fn read(path: &PathBuf) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

fn text(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|_| Error::Schema("input is not UTF-8".into()))
}

fn parse_class(s: &str) -> Result<Vec<Int>> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Schema(format!("--class: {x:?} is not an integer"))))
        .collect()
}

fn finish(
    command: &str,
    input: &[u8],
    flags: Value,
    result: Value,
    certificates: Value,
    summary: Vec<String>,
) -> Outcome {
    let doc = report::envelope(command, input, flags, result, certificates);
    Outcome { summary, document: report::to_text(&doc), exit_code: 0 }
}

struct Loaded {
    model: ToricModel,
    gkz: SecondaryFan,
    theta: Vec<ThetaElement>,
    elems: Vec<AssignedElement>,
}

fn load(model: ToricModel) -> Result<Loaded> {
    let gkz = secondary_fan(&model)?;
    let theta = enumerate_theta(&model.betas(), &model.cl, Variant::Standard);
    let elems = build_theta_cox(&model, &gkz, &theta)?;
    Ok(Loaded { model, gkz, theta, elems })
}

/// The order, or the enumeration order with `false` when the effective cone is not pointed.
fn order_or_identity(l: &Loaded, seed: Option<u64>) -> Result<(Vec<usize>, bool)> {
    match order_theta(&l.model.cl, &l.theta, seed) {
        Ok(o) => Ok((o, true)),
        Err(Error::Precondition(_)) => Ok(((0..l.theta.len()).collect(), false)),
        Err(e) => Err(e),
    }
}

fn seed_value(seed: Option<u64>) -> Value {
    seed.map_or(Value::Null, |s| Value::String(s.to_string()))
}

fn cmd_theta(io: &Io, star: bool, frobenius: Option<u64>, seed: Option<u64>) -> Result<Outcome> {
    let input = read(&io.input)?;
    let model = parse_model(text(&input)?)?;
    let betas = model.betas();
    let flags = json!({ "star": star, "frobenius": frobenius.map(|l| l.to_string()), "order": seed_value(seed) });
    let mut summary = Vec::new();
    let mut result = serde_json::Map::new();
    let theta: Vec<ThetaElement>;
    if star {
        theta = enumerate_theta(&betas, &model.cl, Variant::Star);
        result.insert("elements".into(), Value::Array(theta.iter().map(report::theta_element).collect()));
        summary.push(format!("theta*: {} elements", theta.len()));
        for e in &theta {
            summary.push(format!("  {}", fmt_class(&e.class)));
        }
    } else {
        let l = load(model.clone())?;
        result.insert("elements".into(), Value::Array(l.elems.iter().map(report::assigned).collect()));
        summary.push(format!("theta: {} elements", l.elems.len()));
        for e in &l.elems {
            summary.push(format!("  {} chamber {}", fmt_class(&e.element.class), e.chamber));
        }
        let (order, ordered) = order_or_identity(&l, seed)?;
        if ordered {
            result.insert("order".into(), json!(order));
            summary.push(format!(
                "order: {}",
                order.iter().map(|&i| fmt_class(&l.theta[i].class)).collect::<Vec<_>>().join(" ")
            ));
        } else {
            result.insert("order".into(), Value::Null);
            summary.push("order: none (effective cone not pointed)".into());
        }
        theta = l.theta;
    }
    result.insert("denominator_bound".into(), report::int_value(&denominator_bound(&theta)));
    if let Some(level) = frobenius {
        let oracle = frobenius_oracle(&betas, &model.cl, level)?;
        let mine: BTreeSet<Vec<Int>> = theta.iter().map(|e| e.class.clone()).collect();
        let agree = oracle == mine;
        result.insert(
            "frobenius".into(),
            json!({ "level": level.to_string(), "oracle": oracle.iter().map(jclass).collect::<Vec<_>>(), "agreement": agree }),
        );
        summary.push(format!("oracle agreement: {agree}"));
    }
    let certs: Vec<Value> = theta
        .iter()
        .map(|e| json!({ "class": jclass(&e.class), "witness_verified": e.check(&betas, &model.cl) }))
        .collect();
    Ok(finish("theta", &input, flags, Value::Object(result), Value::Array(certs), summary))
}

fn cmd_gkz(io: &Io) -> Result<Outcome> {
    let input = read(&io.input)?;
    let model = parse_model(text(&input)?)?;
    let gkz = secondary_fan(&model)?;
    let summary = vec![
        format!("chambers: {}", gkz.chambers.len()),
        format!("faces: {}", gkz.faces.len()),
        format!("walls: {}", gkz.walls.len()),
    ];
    Ok(finish("gkz", &input, json!({}), report::secondary_fan(&gkz), json!([]), summary))
}

fn dim_text(d: &Dim) -> String {
    match d {
        Dim::Finite(n) => n.to_string(),
        Dim::Infinite => "inf".into(),
    }
}

fn cmd_homs(io: &Io, seed: Option<u64>) -> Result<Outcome> {
    let input = read(&io.input)?;
    let l = load(parse_model(text(&input)?)?)?;
    let (order, ordered) = order_or_identity(&l, seed)?;
    let alg = endomorphism_algebra(&l.model, &l.elems, &order)?;
    let mut summary = vec![format!("homs: {} elements{}", alg.len(), if ordered { "" } else { " (unordered)" })];
    for (i, row) in alg.homs.iter().enumerate() {
        let dims: Vec<String> = row.iter().map(|h| dim_text(&h.dim)).collect();
        summary.push(format!("  {} -> {}", fmt_class(&alg.classes[i]), dims.join(" ")));
    }
    let closed = alg.composition_closed();
    summary.push(format!("composition closed: {closed}"));
    let mut result = report::algebra(&alg);
    result["ordered"] = json!(ordered);
    Ok(finish(
        "homs",
        &input,
        json!({ "order": seed_value(seed) }),
        result,
        json!({ "composition_closed": closed }),
        summary,
    ))
}

fn cmd_check(io: &Io, seed: Option<u64>) -> Result<Outcome> {
    let input = read(&io.input)?;
    let l = load(parse_model(text(&input)?)?)?;
    let (order, ordered) = order_or_identity(&l, seed)?;
    let alg = endomorphism_algebra(&l.model, &l.elems, &order)?;
    let v = check_full_strong_exceptional(&l.model, &l.gkz, &l.elems, &alg, ordered)?;
    let word = if v.pass { "pass" } else { "fail" };
    let kind = if ordered { "" } else { ", tilting form" };
    let mut summary = vec![format!("verdict: {word} ({} pairs{kind})", v.pairs_checked)];
    summary.extend(v.violations.iter().map(|x| format!("  {x}")));
    let result = json!({ "order": order, "verdict": report::verdict(&v) });
    Ok(finish("check-exceptional", &input, json!({ "order": seed_value(seed) }), result, json!([]), summary))
}

fn probe_lines(probes: &[(Vec<Int>, Vec<Dim>)], top: usize) -> Vec<String> {
    (1..=top)
        .map(|i| {
            let nz = probes.iter().any(|(_, d)| d.get(i).is_some_and(|x| !x.is_zero()));
            format!("H{i} probe: {}", if nz { "nonzero" } else { "zero" })
        })
        .collect()
}

fn cmd_transform(
    io: &Io,
    source: Option<usize>,
    target: Option<usize>,
    class: Option<&str>,
    battery: usize,
    uniform: bool,
) -> Result<Outcome> {
    let input = read(&io.input)?;
    let l = load(parse_model(text(&input)?)?)?;
    let nc = l.gkz.chambers.len();
    let check = |c: usize| {
        if c >= nc {
            Err(Error::Precondition(format!("chamber {c} does not exist ({nc} chambers)")))
        } else {
            Ok(c)
        }
    };
    let flags = json!({
        "source": source.map(|s| s.to_string()),
        "target": target.map(|s| s.to_string()),
        "class": class,
        "nef_battery": battery.to_string(),
        "uniform": uniform,
    });
    let mut summary = Vec::new();
    let mut result = serde_json::Map::new();
    if let Some(cs) = class {
        let c = l.model.cl.reduce(&parse_class(cs)?);
        if c.len() != l.model.cl.rank() + l.model.cl.torsion.len() {
            return Err(Error::Schema(format!("--class: expected {} entries", l.model.cl.rank())));
        }
        // default source: the first chamber whose closure holds d; default target: the next other chamber
        let home = (0..nc).find(|&i| admissible(&l.gkz, i, &c)).unwrap_or(0);
        let i = check(source.unwrap_or(home))?;
        let j = check(target.unwrap_or_else(|| (0..nc).find(|&j| j != i).unwrap_or(i)))?;
        let elem = l.theta.iter().find(|e| e.class == c);
        match elem {
            Some(e) if admissible(&l.gkz, i, &c) => {
                let r = verify_theta_transform(&l.model, &l.gkz, i, j, e, battery)?;
                summary.push(format!(
                    "transform {} {i} -> {j}: {}",
                    fmt_class(&c),
                    if r.pass { "pass" } else { "fail" }
                ));
                summary
                    .push(format!("R0 charts: {}", if r.charts.iter().all(|x| x.pass) { "equal" } else { "differ" }));
                if let Some(s) = &r.star {
                    summary.push(format!("star certificate: {}", if s.pass { "pass" } else { "fail" }));
                }
                result.insert("transform".into(), report::transform(&r));
            }
            _ => {
                let d = transform_line_bundle(&l.model, &l.gkz, i, j, &c, battery)?;
                summary.push(format!(
                    "diagnostic {} {i} -> {j}: {}",
                    fmt_class(&c),
                    if d.pass { "pass" } else { "fail" }
                ));
                summary.push(format!("R0 semigroup: {}", if d.smaller_semigroup { "smaller" } else { "equal" }));
                summary.extend(probe_lines(&d.probes, l.model.dim));
                result.insert("diagnostic".into(), report::diagnostic(&d));
            }
        }
    } else {
        let sources: Vec<usize> = match source {
            Some(s) => vec![check(s)?],
            None => (0..nc).collect(),
        };
        let targets: Vec<usize> = match target {
            Some(t) => vec![check(t)?],
            None => (0..nc).collect(),
        };
        let mut runs = Vec::new();
        for e in &l.theta {
            for &i in &sources {
                if !admissible(&l.gkz, i, &e.class) {
                    continue;
                }
                for &j in &targets {
                    runs.push(verify_theta_transform(&l.model, &l.gkz, i, j, e, battery)?);
                }
            }
        }
        let passed = runs.iter().filter(|r| r.pass).count();
        summary.push(format!("transforms: {} checked, {passed} pass", runs.len()));
        for r in runs.iter().filter(|r| !r.pass) {
            summary.push(format!("  fail {} {} -> {}", fmt_class(&r.class), r.source, r.target));
        }
        result.insert("transforms".into(), Value::Array(runs.iter().map(report::transform).collect()));
    }
    if uniform {
        let probes = uniform_vanishing_batch(&l.model, &l.gkz, &l.elems, battery)?;
        let vanish = probes.iter().filter(|p| p.higher_vanish).count();
        summary.push(format!("uniform probes (experimental): {} run, {vanish} with higher vanishing", probes.len()));
        result.insert(
            "uniform_probes".into(),
            Value::Array(
                probes
                    .iter()
                    .map(|p| {
                        json!({
                            "class": jclass(&l.elems[p.element].element.class),
                            "source": p.source, "target": p.target,
                            "higher_vanish": p.higher_vanish, "r0_matches": p.r0_matches,
                        })
                    })
                    .collect(),
            ),
        );
    }
    Ok(finish("transform", &input, flags, Value::Object(result), json!([]), summary))
}

fn cmd_monad(cmd: &MonadCommand) -> Result<Outcome> {
    let io = match cmd {
        MonadCommand::Validate { io } | MonadCommand::Restrict { io, .. } => io,
        MonadCommand::Strand { io, .. } | MonadCommand::Vanishing { io } => io,
    };
    let input = read(&io.input)?;
    let (model, c) = parse_complex(text(&input)?)?;
    let names = c.variables.clone();
    let base = json!({ "terms": report::complex_terms(&c), "acyclicity": "not checked" });
    match cmd {
        MonadCommand::Validate { .. } => {
            let v = validate_complex(&c, &model);
            let mut summary = vec![if v.valid {
                format!("complex: valid ({} composites checked)", v.composites_checked.len())
            } else {
                format!("complex: invalid ({} violations)", v.violations.len())
            }];
            summary.extend(v.violations.iter().map(|x| format!("  {x}")));
            let mut result = base;
            result["verdict"] = report::complex_verdict(&v);
            let mut out = finish("monad validate", &input, json!({}), result, json!([]), summary);
            if !v.valid {
                out.exit_code = 4;
            }
            Ok(out)
        }
        MonadCommand::Restrict { face, .. } => {
            let gkz = secondary_fan(&model)?;
            let faces: Vec<usize> = match face {
                Some(f) if *f < gkz.faces.len() => vec![*f],
                Some(f) => return Err(Error::Precondition(format!("face {f} does not exist"))),
                None => (0..gkz.faces.len()).collect(),
            };
            let mut summary = Vec::new();
            let mut list = Vec::new();
            for f in faces {
                let r = restrict_to_face(&model, &c, &gkz.faces[f])?;
                let what = match gkz.faces[f].chamber {
                    Some(ch) => format!("chamber {ch}"),
                    None => format!("face {f}"),
                };
                summary.push(format!("{what} (dim {}): {}", r.space.dim, report::restricted_shape(&r)));
                list.push(report::restricted(&r, &names));
            }
            let mut result = base;
            result["restrictions"] = Value::Array(list);
            Ok(finish(
                "monad restrict",
                &input,
                json!({ "face": face.map(|f| f.to_string()) }),
                result,
                json!([]),
                summary,
            ))
        }
        MonadCommand::Strand { characteristic, .. } => {
            let s = degree_zero_strand(&model, &c, *characteristic)?;
            let summary: Vec<String> = s.cohomology.iter().map(|(k, v)| format!("H^{k}: {v}")).collect();
            let mut result = base;
            result["strand"] = report::strand(&s);
            Ok(finish(
                "monad strand",
                &input,
                json!({ "char": characteristic.to_string() }),
                result,
                json!([]),
                summary,
            ))
        }
        MonadCommand::Vanishing { .. } => {
            let gkz = secondary_fan(&model)?;
            let v = vanishing_report(&model, &gkz, &c)?;
            let mut summary =
                vec![format!("vanishing: {} ({} faces)", if v.pass { "pass" } else { "fail" }, v.faces.len())];
            if !v.offending.is_empty() {
                summary.push(format!("  offending degrees: {:?}", v.offending));
            }
            let mut result = base;
            result["vanishing"] = report::vanishing(&v);
            Ok(finish("monad vanishing", &input, json!({}), result, json!([]), summary))
        }
    }
}

fn cmd_sharpen(io: &Io) -> Result<Outcome> {
    let input = read(&io.input)?;
    let l = load(parse_model(text(&input)?)?)?;
    let ch = &l.gkz.chambers[0];
    let nef: Vec<Vec<Rat>> = ch.rays.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
    let walls = interior_walls(&l.model.cl, &ch.fan, &nef)?;
    let mut summary = vec![format!("interior walls: {}", walls.len())];
    let mut list = Vec::new();
    let mut certs = Vec::new();
    for w in &walls {
        let s = sharpened_reduction(&l.model.betas(), &l.model.cl, w, &l.theta)?;
        summary.push(format!(
            "wall {:?}: circuit {}, removable {}",
            w.rays,
            fmt_class(&w.circuit),
            s.removable.iter().map(|c| fmt_class(c)).collect::<Vec<_>>().join(" ")
        ));
        let ok = s.certificates.iter().all(|c| c.all_in_theta && c.descending);
        summary.push(format!("  koszul certificates: {}", if ok { "pass" } else { "fail" }));
        certs.push(json!({ "collection": w.rays, "pass": ok }));
        list.push(report::sharpened(&s));
    }
    Ok(finish("sharpen", &input, json!({}), json!({ "walls": list }), Value::Array(certs), summary))
}

fn cmd_plot(io: &Io, target: PlotTarget) -> Result<Outcome> {
    let input = read(&io.input)?;
    let model = parse_model(text(&input)?)?;
    let svg = match target {
        PlotTarget::SecondaryFan => plot::secondary_fan(&model, &secondary_fan(&model)?)?,
        PlotTarget::Zonotope => plot::zonotope(&model)?,
        PlotTarget::Theta => plot::theta(&model)?,
    };
    Ok(Outcome { summary: vec![format!("plot: {} bytes", svg.len())], document: svg, exit_code: 0 })
}

fn io_of(cmd: &Command) -> &Io {
    match cmd {
        Command::Theta { io, .. }
        | Command::Gkz { io }
        | Command::Homs { io, .. }
        | Command::CheckExceptional { io, .. }
        | Command::Transform { io, .. }
        | Command::Sharpen { io }
        | Command::Plot { io, .. } => io,
        Command::Monad { command } => match command {
            MonadCommand::Validate { io } | MonadCommand::Restrict { io, .. } => io,
            MonadCommand::Strand { io, .. } | MonadCommand::Vanishing { io } => io,
        },
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Theta { io, star, frobenius, order } => cmd_theta(io, *star, *frobenius, *order),
        Command::Gkz { io } => cmd_gkz(io),
        Command::Homs { io, order } => cmd_homs(io, *order),
        Command::CheckExceptional { io, order } => cmd_check(io, *order),
        Command::Transform { io, source, target, class, nef_battery, uniform } => {
            cmd_transform(io, *source, *target, class.as_deref(), *nef_battery, *uniform)
        }
        Command::Monad { command } => cmd_monad(command),
        Command::Sharpen { io } => cmd_sharpen(io),
        Command::Plot { io, target } => cmd_plot(io, *target),
    }
}

/// Argument vector (program name first) to a command; usage errors are schema errors.
pub fn parse<I, T>(args: I) -> Result<Cli>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args).map_err(|e| Error::Schema(e.to_string().trim_end().to_string()))
}

/// Parses arguments, runs, prints; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let io = io_of(&cli.command).clone();
    match execute(&cli) {
        Ok(out) => {
            if let Some(path) = &io.output {
                if let Err(e) = std::fs::write(path, &out.document) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error of the computation
            let _ = if io.json {
                stdout.write_all(out.document.as_bytes())
            } else {
                out.summary.iter().try_for_each(|line| writeln!(stdout, "{line}"))
            };
            out.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
