//! Command-line front end.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::activity::{alpha_profile, classify_activity, nontrivial_state_graph_with};
use crate::bratteli::{BratteliDiagram, Extreme, OrderedBratteliDiagram};
use crate::caps::Caps;
use crate::engine::{apply_word_with, section_of_with};
use crate::error::{Error, Result};
use crate::machine::MachineDef;
use crate::ray::RaySpec;
use crate::recurrence::{capacity_profile_with, nash_williams_certify, pir_overlap_report, dirichlet_solve, Network};
use crate::schreier::{cofinality_folner_sets_with, level_graph_with, orbit_ball_with, to_csv, to_dot, SchreierGraph};
use crate::text::{parse_machine, to_document, to_json};
use crate::triviality::{equals_exact_with, is_trivial_to_depth_with};
use crate::word::GroupWord;
use crate::zoo::{zoo_build, zoo_names, ZooEntry};

#[derive(Parser, Debug)]
#[command(name = "sslab", about = "Groups acting on rooted trees and path spaces", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply an element to a finite word.
    Eval {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        word: String,
        #[arg(long)]
        input: String,
        /// Also print the section at the input.
        #[arg(long)]
        section: bool,
    },
    /// Compare two elements.
    Equal {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        /// Depth used when exact comparison is unavailable.
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Activity classes and level counts.
    Activity {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
        #[arg(long, default_value_t = 8)]
        upto: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Schreier graphs of levels or orbit balls.
    Schreier {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
        #[arg(long, conflicts_with_all = ["ray", "radius"])]
        level: Option<usize>,
        #[arg(long, requires = "radius")]
        ray: Option<String>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Conductance profile, and Nash-Williams sums when `--folner` is given.
    Recurrence {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
        #[arg(long)]
        ray: String,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
        radii: Vec<usize>,
        /// Depth of the cofinality chain.
        #[arg(long)]
        folner: Option<usize>,
        /// Report product-vector overlaps at the largest radius.
        #[arg(long)]
        pir: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Adic successor on an ordered Bratteli diagram.
    Adic {
        /// Diagram file; the binary odometer when omitted.
        #[arg(long)]
        diagram: Option<PathBuf>,
        #[arg(long)]
        depth: usize,
        /// Path whose successor is printed; otherwise the orbit of the
        /// minimal path.
        #[arg(long)]
        path: Option<String>,
    },
    /// The catalog of examples.
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
    /// Parse and validate a machine document.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum ZooAction {
    List,
    Show {
        name: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Evaluate the entry's claims.
    Check {
        name: String,
        #[arg(long, default_value = "")]
        params: String,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Zoo entry name.
    #[arg(long, conflicts_with = "file")]
    group: Option<String>,
    /// Machine document.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value = "")]
    params: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Table,
    Csv,
    Dot,
    Json,
}

struct Loaded {
    machine: MachineDef,
    entry: Option<ZooEntry>,
    label: String,
}

impl Source {
    fn load(&self) -> Result<Loaded> {
        match (&self.group, &self.file) {
            (Some(name), None) => {
                let e = zoo_build(name, &self.params)?;
                Ok(Loaded {
                    machine: e.machine.clone(),
                    label: format!("zoo {name}{}", params_suffix(&self.params)),
                    entry: Some(e),
                })
            }
            (None, Some(path)) => Ok(Loaded {
                machine: read_machine(path)?,
                entry: None,
                label: format!("file {}", path.display()),
            }),
            _ => Err(Error::Usage("give exactly one of --group or --file".into())),
        }
    }
}

fn params_suffix(p: &str) -> String {
    if p.is_empty() {
        String::new()
    } else {
        format!(" ({p})")
    }
}

fn read_machine(path: &PathBuf) -> Result<MachineDef> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_machine(&text)
}

fn gens_or_default(l: &Loaded, names: &[String]) -> Result<Vec<GroupWord>> {
    if names.is_empty() {
        return Ok(l
            .entry
            .as_ref()
            .map(|e| e.generator_words())
            .unwrap_or_else(|| l.machine.root_generators().into_iter().map(GroupWord::gen).collect()));
    }
    names.iter().map(|n| word(l, n)).collect()
}

/// Generator words, with zoo aliases (`B`) resolved.
fn word(l: &Loaded, text: &str) -> Result<GroupWord> {
    let mut expanded = Vec::new();
    for tok in text.split_whitespace() {
        let (base, inv) = match tok.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (tok, false),
        };
        let alias = l
            .entry
            .as_ref()
            .and_then(|e| e.aliases.iter().find(|(_, conv)| conv == base).map(|(ascii, _)| ascii.clone()));
        match alias {
            Some(a) if l.machine.gen_id(base).is_none() => {
                let w = l.machine.word(&a)?;
                expanded.push(if inv { w.inverse() } else { w });
            }
            _ => expanded.push(l.machine.word(tok)?),
        }
    }
    Ok(expanded.iter().fold(GroupWord::identity(), |acc, w| acc.mul(w)))
}

struct Out<'a> {
    w: &'a mut dyn Write,
}

impl Out<'_> {
    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.w, "{s}").map_err(|e| Error::Io(e.to_string()))
    }

    fn text(&mut self, s: &str) -> Result<()> {
        write!(self.w, "{s}").map_err(|e| Error::Io(e.to_string()))
    }

    fn header(&mut self, items: &[(&str, String)]) -> Result<()> {
        for (k, v) in items {
            self.line(&format!("# {k}: {v}"))?;
        }
        Ok(())
    }
}

/// Runs one invocation; returns the process exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    let mut o = Out { w: out };
    match execute(cli.command, &mut o) {
        Ok(()) => 0,
        Err(e) => {
            let _ = o.line(&format!("error: {e}"));
            e.exit_code()
        }
    }
}

fn execute(cmd: Command, o: &mut Out) -> Result<()> {
    let caps = Caps::from_env()?;
    match cmd {
        Command::Eval {
            src,
            word: w,
            input,
            section,
        } => {
            let l = src.load()?;
            let m = &l.machine;
            let g = word(&l, &w)?;
            let v = m.symbols(&input)?;
            o.header(&[
                ("command", "eval".into()),
                ("source", l.label.clone()),
                ("word", m.format_word(&g)),
                ("input", m.format_symbols(&v)),
                ("caps", caps.describe()),
            ])?;
            o.line(&m.format_symbols(&apply_word_with(m, &g, &v, &caps)?))?;
            if section {
                o.line(&format!("section: {}", m.format_word(&section_of_with(m, &g, &v, &caps)?)))?;
            }
        }
        Command::Equal { src, left, right, depth } => {
            let l = src.load()?;
            let m = &l.machine;
            let (a, b) = (word(&l, &left)?, word(&l, &right)?);
            o.header(&[
                ("command", "equal".into()),
                ("source", l.label.clone()),
                ("left", m.format_word(&a)),
                ("right", m.format_word(&b)),
                ("caps", caps.describe()),
            ])?;
            match equals_exact_with(m, &a, &b, &caps) {
                Ok(true) => o.line("equal (exact)")?,
                Ok(false) => o.line("different (exact)")?,
                Err(Error::NonUniform) => {
                    let q = a.inverse().mul(&b);
                    if is_trivial_to_depth_with(m, &q, depth, &caps)? {
                        o.line(&format!("equal to depth {depth}"))?
                    } else {
                        o.line(&format!("different (level {depth} or above)"))?
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Command::Activity { src, gens, upto, format } => {
            let l = src.load()?;
            let m = &l.machine;
            let words = gens_or_default(&l, &gens)?;
            o.header(&[
                ("command", "activity".into()),
                ("source", l.label.clone()),
                ("upto", upto.to_string()),
                ("caps", caps.describe()),
            ])?;
            let cols: Vec<String> = (1..=upto).map(|n| format!("alpha_{n}")).collect();
            let sep = if format == Format::Csv { "," } else { "\t" };
            o.line(&format!("element{sep}class{sep}degree{sep}{}", cols.join(sep)))?;
            for g in &words {
                let sg = nontrivial_state_graph_with(m, g, &caps)?;
                let class = classify_activity(&sg);
                let prof = alpha_profile(&sg, upto)?;
                let deg = class.degree().map_or("-".to_string(), |d| d.to_string());
                let vals: Vec<String> = prof[1..].iter().map(u128::to_string).collect();
                o.line(&format!("{}{sep}{class}{sep}{deg}{sep}{}", m.format_word(g), vals.join(sep)))?;
            }
        }
        Command::Schreier {
            src,
            gens,
            level,
            ray,
            radius,
            format,
        } => {
            let l = src.load()?;
            let m = &l.machine;
            let words = gens_or_default(&l, &gens)?;
            let (g, what) = match (level, ray, radius) {
                (Some(n), None, None) => (level_graph_with(m, &words, n, &caps)?, format!("level {n}")),
                (None, Some(r), Some(rad)) => {
                    let p = RaySpec::parse(m, &r)?;
                    (orbit_ball_with(m, &words, &p, rad, &caps)?, format!("ray {r} radius {rad}"))
                }
                _ => return Err(Error::Usage("give --level n or --ray p:q --radius r".into())),
            };
            o.header(&[
                ("command", "schreier".into()),
                ("source", l.label.clone()),
                ("graph", what),
                ("gens", words.iter().map(|w| m.format_word(w)).collect::<Vec<_>>().join(",")),
                ("caps", caps.describe()),
            ])?;
            match format {
                Format::Dot => o.text(&to_dot(&g))?,
                Format::Csv => o.text(&to_csv(&g))?,
                Format::Table | Format::Json => schreier_table(&g, o)?,
            }
        }
        Command::Recurrence {
            src,
            gens,
            ray,
            radii,
            folner,
            pir,
            format,
        } => {
            let l = src.load()?;
            let m = &l.machine;
            let words = gens_or_default(&l, &gens)?;
            let p = RaySpec::parse(m, &ray)?;
            o.header(&[
                ("command", "recurrence".into()),
                ("source", l.label.clone()),
                ("gens", words.iter().map(|w| m.format_word(w)).collect::<Vec<_>>().join(",")),
                ("ray", p.format(m)),
                ("radii", radii.iter().map(usize::to_string).collect::<Vec<_>>().join(",")),
                ("tolerance", format!("{:e}", crate::recurrence::TOLERANCE)),
                ("floor", format!("{:e}", crate::recurrence::CONDUCTANCE_FLOOR)),
                ("caps", caps.describe()),
            ])?;
            let prof = capacity_profile_with(m, &words, &p, &radii, &caps)?;
            if format == Format::Csv {
                o.text(&prof.to_csv())?;
            } else {
                o.line("radius\tenergy\tconductance\tresidual")?;
                for i in 0..prof.radii.len() {
                    o.line(&format!(
                        "{}\t{:.10}\t{:.10}\t{:.2e}",
                        prof.radii[i], prof.energies[i], prof.conductances[i], prof.residuals[i]
                    ))?;
                }
            }
            o.line(&format!("# verdict: {} (evidence)", prof.verdict))?;
            if pir {
                let r = *prof.radii.last().expect("radii");
                let g = orbit_ball_with(m, &words, &p, r, &caps)?;
                let net = Network::from_schreier(&g);
                let sphere = net.sphere(r);
                if !sphere.is_empty() {
                    let pot = dirichlet_solve(&net, &sphere)?;
                    let rep = pir_overlap_report(&g, &pot.values)?;
                    o.line("generator\toverlap\tedge_bound\tbound")?;
                    for i in 0..rep.labels.len() {
                        o.line(&format!(
                            "{}\t{:.12}\t{:.12}\t{:.12}",
                            rep.labels[i], rep.overlaps[i], rep.edge_bounds[i], rep.bound
                        ))?;
                    }
                }
            }
            if let Some(depth) = folner {
                let chain = cofinality_folner_sets_with(m, &words, &p, depth, &caps)?;
                let rep = nash_williams_certify(&chain)?;
                if format == Format::Csv {
                    o.text(&rep.to_csv())?;
                } else {
                    o.line("n\tboundary\tpartial_sum")?;
                    for i in 0..rep.levels.len() {
                        o.line(&format!("{}\t{}\t{:.6}", rep.levels[i], rep.boundary[i], rep.partial_sums[i]))?;
                    }
                }
                o.line(&format!("# nash-williams: {} (envelope {})", rep.verdict, rep.envelope))?;
            }
        }
        Command::Adic { diagram, depth, path } => {
            let (od, label) = match &diagram {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                    (OrderedBratteliDiagram::new(BratteliDiagram::parse(&text)?), format!("file {}", p.display()))
                }
                None => (OrderedBratteliDiagram::odometer(2), "odometer".to_string()),
            };
            let od = od.extended(depth)?.with_wrap();
            let d = &od.diagram;
            o.header(&[
                ("command", "adic".into()),
                ("diagram", label),
                ("depth", depth.to_string()),
            ])?;
            match path {
                Some(p) => {
                    let p = d.parse_path(&p)?;
                    o.line(&d.format_path(&od.adic_successor(&p)?))?;
                }
                None => {
                    let start = od.extreme_path(depth, 0, Extreme::Min)?;
                    let mut p = start.clone();
                    let mut period = 0usize;
                    let cap = caps.vertices;
                    loop {
                        o.line(&d.format_path(&p))?;
                        p = od.adic_successor(&p)?;
                        period += 1;
                        if p == start {
                            break;
                        }
                        if period >= cap {
                            return Err(Error::CapExceeded { what: "adic orbit", cap });
                        }
                    }
                    o.line(&format!("# period: {period}"))?;
                }
            }
        }
        Command::Zoo { action } => match action {
            ZooAction::List => {
                for name in zoo_names() {
                    let e = zoo_build(name, "")?;
                    o.line(&format!("{name}\t{}", e.description))?;
                }
            }
            ZooAction::Show { name, params, format } => {
                let e = zoo_build(&name, &params)?;
                o.header(&[("zoo", format!("{name}{}", params_suffix(&params)))])?;
                for (k, v) in &e.params {
                    o.line(&format!("# param {k} = {v}"))?;
                }
                for (ascii, conv) in &e.aliases {
                    o.line(&format!("# alias {conv} = {ascii}"))?;
                }
                if e.externally_sourced {
                    o.line("# rules from the standard literature")?;
                }
                if format == Format::Json {
                    o.line(&to_json(&e.machine))?;
                } else {
                    o.text(&to_document(&e.machine))?;
                }
                if let Some(d) = &e.diagram {
                    for line in d.diagram.to_text().lines() {
                        o.line(&format!("# {line}"))?;
                    }
                }
            }
            ZooAction::Check { name, params } => {
                let e = zoo_build(&name, &params)?;
                o.header(&[("zoo", format!("{name}{}", params_suffix(&params))), ("caps", caps.describe())])?;
                let mut failed = 0;
                for (claim, res) in e.check_claims()? {
                    match res {
                        Ok(()) => o.line(&format!("PASS {claim:?}"))?,
                        Err(why) => {
                            failed += 1;
                            o.line(&format!("FAIL {claim:?}: {why}"))?
                        }
                    }
                }
                if failed > 0 {
                    return Err(Error::Validation(format!("{failed} claim(s) failed")));
                }
            }
        },
        Command::Validate { file, format } => {
            let m = read_machine(&file)?;
            o.header(&[("command", "validate".into()), ("file", file.display().to_string())])?;
            o.line("# valid")?;
            if format == Format::Json {
                o.line(&to_json(&m))?;
            } else {
                o.text(&to_document(&m))?;
            }
        }
    }
    Ok(())
}

fn schreier_table(g: &SchreierGraph, o: &mut Out) -> Result<()> {
    o.line(&format!("vertices\t{}", g.len()))?;
    let parts = g.orbit_partition();
    o.line(&format!("orbits\t{}", parts.len()))?;
    let mut edges = BTreeSet::new();
    for (v, k, d) in g.positive_edges() {
        edges.insert((g.names[v].clone(), g.labels[k].clone(), g.names[d].clone()));
    }
    for (a, l, b) in edges {
        o.line(&format!("{a}\t{l}\t{b}"))?;
    }
    Ok(())
}
