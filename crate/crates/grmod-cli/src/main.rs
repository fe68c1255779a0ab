//! Command-line front end: validation, the Grothendieck construction, the
//! module equivalence, generators, and the classification toolkit, over
//! JSON files. Deterministic output; exit code 0 on pass, 1 on axiom or
//! parse failures, 2 on refusals (enumeration limits).

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use grmod::classify::{center, idempotents, torsion_split, TorsionDatum};
use grmod::dgcat::{check_dg_category, DgCategory};
use grmod::dgmod::{check_dg_module, compare_dg_modules, DgModule};
use grmod::error::Error;
use grmod::gens::{check_generates, generator, p_window};
use grmod::gr::{grothendieck, GrBuild};
use grmod::graded::check_complex;
use grmod::json::*;
use grmod::preadd::{
    check_linear_topology, check_preadditive, ideal_generated, ideal_product, is_idempotent,
    PreadditiveCategory,
};
use grmod::rep::{check_representation, DgRepresentation};
use grmod::report::Report;
use grmod::ring::Ring;
use grmod::rmod::{check_r_module, compare_r_modules, phi, psi};

#[derive(Parser)]
#[command(
    name = "grmod",
    version,
    about = "Exact-arithmetic workbench for dg-categories glued along a finite base, their modules, and torsion classification data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit reports as JSON instead of line-oriented text.
    #[arg(long, global = true)]
    json_report: bool,
    /// Require all inputs to be declared over this ring ("Z", "Q", or "Z/n").
    #[arg(long, global = true)]
    ring: Option<String>,
}

#[derive(Args)]
struct OutputOpt {
    /// Write the result to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus file (kind is sniffed; modules need --rep or --cat).
    Validate {
        file: PathBuf,
        /// Representation context for (r-)modules over Gr(R).
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Category context for dg-modules, samples, and topologies.
        #[arg(long)]
        cat: Option<PathBuf>,
    },
    /// Build the linear Grothendieck construction of a representation.
    Groth {
        rep: PathBuf,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Check a module file against its representation or category.
    CheckModule {
        module: PathBuf,
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long)]
        cat: Option<PathBuf>,
    },
    /// Repackage an R-module as a dg-module over Gr(R).
    Phi {
        module: PathBuf,
        #[arg(long)]
        rep: PathBuf,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Recover an R-module from a dg-module over Gr(R).
    Psi {
        module: PathBuf,
        #[arg(long)]
        rep: PathBuf,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Verify both equivalence round trips on a module file.
    Roundtrip { rep: PathBuf, module: PathBuf },
    /// Emit the projective generator G_{ix,n} as a dg-module over Gr(R).
    Generator {
        #[arg(long)]
        rep: PathBuf,
        /// Gr(R) object, written base:fiber.
        #[arg(long)]
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Check that generators reach every basis element of a module inside
    /// a degree window.
    Generates {
        module: PathBuf,
        #[arg(long)]
        rep: PathBuf,
        /// Degree window LO:HI.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Materialize a finite window of the generator category.
    PWindow {
        #[arg(long)]
        rep: PathBuf,
        /// Comma-separated pairs object@degree, e.g. "0:w@0,1:w@0".
        #[arg(long)]
        pairs: String,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Compute the center of a preadditive category.
    Center {
        category: PathBuf,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Enumerate the idempotents of the center.
    Idempotents { category: PathBuf },
    /// Compute the two-sided ideal generated by basis morphisms.
    Ideal {
        category: PathBuf,
        /// Comma-separated generators src->tgt@label.
        #[arg(long)]
        gens: String,
        /// Also print whether I·I equals I.
        #[arg(long)]
        square: bool,
    },
    /// Check the linear Grothendieck topology axioms.
    TopologyCheck {
        category: PathBuf,
        topology: PathBuf,
    },
    /// Check torsion decompositions induced by central idempotents (or an
    /// ideal) on sample modules.
    TtfCheck {
        category: PathBuf,
        /// Sample module files (dg-modules over the category).
        #[arg(long, required = true, num_args = 1..)]
        samples: Vec<PathBuf>,
        /// Generators of an idempotent ideal, src->tgt@label, comma-separated.
        #[arg(long)]
        ideal_gens: Option<String>,
    },
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_value(path: &Path) -> Result<serde_json::Value> {
    value_from_str(&read_file(path)?).map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn load_rep(path: &Path, ring: &Option<String>) -> Result<DgRepresentation> {
    let v = load_value(path)?;
    check_ring(&v, ring, path)?;
    parse_representation(&v).map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn load_cat(path: &Path, ring: &Option<String>) -> Result<Arc<DgCategory>> {
    let v = load_value(path)?;
    check_ring(&v, ring, path)?;
    parse_dg_category(&v).map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn load_preadd(path: &Path, ring: &Option<String>) -> Result<PreadditiveCategory> {
    let v = load_value(path)?;
    check_ring(&v, ring, path)?;
    parse_preadditive(&v).map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn check_ring(v: &serde_json::Value, expected: &Option<String>, path: &Path) -> Result<()> {
    let Some(expected) = expected else {
        return Ok(());
    };
    let want = parse_ring_flag(expected)?;
    let got = parse_ring(v).map_err(|e| anyhow!("{}: {}", path.display(), e))?;
    if got != want {
        return Err(anyhow!(
            "{}: declared ring {} does not match --ring {}",
            path.display(),
            got,
            want
        ));
    }
    Ok(())
}

fn parse_ring_flag(s: &str) -> Result<Ring> {
    match s {
        "Z" => Ok(Ring::Int),
        "Q" => Ok(Ring::Rat),
        _ => {
            let rest = s
                .strip_prefix("Z/")
                .ok_or_else(|| anyhow!("--ring must be Z, Q, or Z/n"))?;
            let n: u64 = rest.parse().context("--ring modulus")?;
            Ring::new_mod(n).map_err(|e| anyhow!("{}", e))
        }
    }
}

fn emit(out: &OutputOpt, v: &serde_json::Value) -> Result<()> {
    let text = to_pretty_string(v);
    match &out.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{}", text),
    }
    Ok(())
}

struct Printer {
    json: bool,
}

impl Printer {
    fn report(&self, r: &Report) -> bool {
        if self.json {
            println!("{}", serde_json::to_string(r).expect("serializable"));
        } else {
            print!("{}", r);
        }
        r.passed()
    }

    fn line(&self, key: &str, value: impl std::fmt::Display) {
        if self.json {
            println!(
                "{}",
                serde_json::json!({ "key": key, "value": value.to_string() })
            );
        } else {
            println!("{}: {}", key, value);
        }
    }
}

fn build_gr(rep: DgRepresentation) -> Result<GrBuild> {
    grothendieck(rep).map_err(|e| anyhow!("{}", e))
}

fn gr_object(gr: &GrBuild, name: &str) -> Result<usize> {
    gr.object_by_name(name)
        .ok_or_else(|| anyhow!("unknown Gr(R) object {:?} (expected base:fiber)", name))
}

fn parse_window(s: &str) -> Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("--window must be LO:HI"))?;
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}

fn parse_gens(
    a: &PreadditiveCategory,
    s: &str,
) -> Result<Vec<(usize, usize, Vec<grmod::ring::Scalar>)>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        let (key, label) = item
            .rsplit_once('@')
            .ok_or_else(|| anyhow!("generator {:?} must be src->tgt@label", item))?;
        let (src_name, tgt_name) = key
            .split_once("->")
            .ok_or_else(|| anyhow!("generator {:?} must be src->tgt@label", item))?;
        let src = a
            .objects()
            .iter()
            .position(|o| o == src_name)
            .ok_or_else(|| anyhow!("unknown object {:?}", src_name))?;
        let tgt = a
            .objects()
            .iter()
            .position(|o| o == tgt_name)
            .ok_or_else(|| anyhow!("unknown object {:?}", tgt_name))?;
        let hom = a
            .cat()
            .hom(src, tgt)
            .ok_or_else(|| anyhow!("hom {:?} is zero", key))?;
        let index = hom
            .grading()
            .labels(0)
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| anyhow!("label {:?} not found in {:?}", label, key))?;
        out.push((src, tgt, a.basis_vec(src, tgt, index)));
    }
    Ok(out)
}

/// Exit status: 0 pass, 1 failure, 2 refusal.
fn run(cli: Cli) -> Result<u8> {
    let printer = Printer {
        json: cli.json_report,
    };
    let ring_flag = cli.ring.clone();
    match cli.command {
        Command::Validate { file, rep, cat } => {
            let v = load_value(&file)?;
            check_ring(&v, &ring_flag, &file)?;
            let kind = v
                .get("kind")
                .and_then(|k| k.as_str())
                .map(|s| s.to_string())
                .unwrap_or_else(|| {
                    if v.get("base").is_some() {
                        "representation".into()
                    } else if v.get("J").is_some() {
                        "topology".into()
                    } else if v.get("values").is_some() {
                        "dg-module".into()
                    } else if v.get("modules").is_some() {
                        "r-module".into()
                    } else if v.get("degrees").is_some() {
                        "complex".into()
                    } else {
                        "dg-category".into()
                    }
                });
            let report = match kind.as_str() {
                "representation" => {
                    let r = parse_representation(&v).map_err(|e| anyhow!("{}", e))?;
                    check_representation(&r).map_err(|e| anyhow!("{}", e))?
                }
                "complex" => {
                    let ring = parse_ring(&v).map_err(|e| anyhow!("{}", e))?;
                    let c = parse_complex(ring, &v, "complex").map_err(|e| anyhow!("{}", e))?;
                    check_complex(&c).map_err(|e| anyhow!("{}", e))?
                }
                "preadditive" => {
                    let a = parse_preadditive(&v).map_err(|e| anyhow!("{}", e))?;
                    check_preadditive(&a).map_err(|e| anyhow!("{}", e))?
                }
                "dg-category" => {
                    let c = parse_dg_category(&v).map_err(|e| anyhow!("{}", e))?;
                    check_dg_category(&c).map_err(|e| anyhow!("{}", e))?
                }
                "dg-module" => {
                    let context = match (&rep, &cat) {
                        (_, Some(c)) => load_cat(c, &ring_flag)?,
                        (Some(r), _) => build_gr(load_rep(r, &ring_flag)?)?.category().clone(),
                        _ => return Err(anyhow!("dg-module validation needs --cat or --rep")),
                    };
                    let m = parse_dg_module(&v, &context).map_err(|e| anyhow!("{}", e))?;
                    check_dg_module(&m).map_err(|e| anyhow!("{}", e))?
                }
                "r-module" => {
                    let Some(r) = &rep else {
                        return Err(anyhow!("r-module validation needs --rep"));
                    };
                    let rep = load_rep(r, &ring_flag)?;
                    let m = parse_r_module(&v, &rep).map_err(|e| anyhow!("{}", e))?;
                    check_r_module(&m, &rep).map_err(|e| anyhow!("{}", e))?
                }
                "topology" => {
                    let Some(c) = &cat else {
                        return Err(anyhow!("topology validation needs --cat"));
                    };
                    let a = load_preadd(c, &ring_flag)?;
                    let t = parse_topology(&v, &a).map_err(|e| anyhow!("{}", e))?;
                    check_linear_topology(&a, &t).map_err(map_refusal)?
                }
                other => return Err(anyhow!("unknown kind {:?}", other)),
            };
            Ok(if printer.report(&report) { 0 } else { 1 })
        }
        Command::Groth { rep, out } => {
            let gr = build_gr(load_rep(&rep, &ring_flag)?)?;
            emit(&out, &dg_category_to_json(gr.category()))?;
            Ok(0)
        }
        Command::CheckModule { module, rep, cat } => {
            let v = load_value(&module)?;
            check_ring(&v, &ring_flag, &module)?;
            let is_r_module = v.get("modules").is_some()
                || v.get("kind").and_then(|k| k.as_str()) == Some("r-module");
            let report = if is_r_module {
                let Some(r) = rep else {
                    return Err(anyhow!("r-module checking needs --rep"));
                };
                let rep = load_rep(&r, &ring_flag)?;
                let m = parse_r_module(&v, &rep).map_err(|e| anyhow!("{}", e))?;
                check_r_module(&m, &rep).map_err(|e| anyhow!("{}", e))?
            } else {
                let context = match (&rep, &cat) {
                    (_, Some(c)) => load_cat(c, &ring_flag)?,
                    (Some(r), _) => build_gr(load_rep(r, &ring_flag)?)?.category().clone(),
                    _ => return Err(anyhow!("dg-module checking needs --cat or --rep")),
                };
                let m = parse_dg_module(&v, &context).map_err(|e| anyhow!("{}", e))?;
                check_dg_module(&m).map_err(|e| anyhow!("{}", e))?
            };
            Ok(if printer.report(&report) { 0 } else { 1 })
        }
        Command::Phi { module, rep, out } => {
            let rep = load_rep(&rep, &ring_flag)?;
            let gr = build_gr(rep.clone())?;
            let v = load_value(&module)?;
            let m = parse_r_module(&v, &rep).map_err(|e| anyhow!("{}", e))?;
            let f = phi(&m, &gr).map_err(|e| anyhow!("{}", e))?;
            emit(&out, &dg_module_to_json(&f))?;
            Ok(0)
        }
        Command::Psi { module, rep, out } => {
            let rep = load_rep(&rep, &ring_flag)?;
            let gr = build_gr(rep.clone())?;
            let v = load_value(&module)?;
            let f = parse_dg_module(&v, gr.category()).map_err(|e| anyhow!("{}", e))?;
            let m = psi(&f, &gr).map_err(|e| anyhow!("{}", e))?;
            emit(&out, &r_module_to_json(&m, &rep))?;
            Ok(0)
        }
        Command::Roundtrip { rep, module } => {
            let rep = load_rep(&rep, &ring_flag)?;
            let gr = build_gr(rep.clone())?;
            let v = load_value(&module)?;
            let is_r_module = v.get("modules").is_some()
                || v.get("kind").and_then(|k| k.as_str()) == Some("r-module");
            let (m, f) = if is_r_module {
                let m = parse_r_module(&v, &rep).map_err(|e| anyhow!("{}", e))?;
                let f = phi(&m, &gr).map_err(|e| anyhow!("{}", e))?;
                (m, f)
            } else {
                let f = parse_dg_module(&v, gr.category()).map_err(|e| anyhow!("{}", e))?;
                let m = psi(&f, &gr).map_err(|e| anyhow!("{}", e))?;
                (m, f)
            };
            let back = psi(&f, &gr).map_err(|e| anyhow!("{}", e))?;
            let v1 = compare_r_modules(&back, &m, &rep).map_err(|e| anyhow!("{}", e))?;
            printer.line("psi(phi(M)) vs M", v1.label());
            let fwd = phi(&back, &gr).map_err(|e| anyhow!("{}", e))?;
            let v2 = compare_dg_modules(&fwd, &f).map_err(|e| anyhow!("{}", e))?;
            printer.line("phi(psi(F)) vs F", v2.label());
            Ok(if v1.is_equivalence() && v2.is_equivalence() {
                0
            } else {
                1
            })
        }
        Command::Generator {
            rep,
            object,
            degree,
            out,
        } => {
            if degree.abs() > 1 << 20 {
                return Err(anyhow!("--degree out of range"));
            }
            let gr = build_gr(load_rep(&rep, &ring_flag)?)?;
            let at = gr_object(&gr, &object)?;
            let g = generator(gr.category().clone(), at, degree);
            emit(&out, &dg_module_to_json(&g))?;
            Ok(0)
        }
        Command::Generates {
            module,
            rep,
            window,
        } => {
            let rep = load_rep(&rep, &ring_flag)?;
            let gr = build_gr(rep.clone())?;
            let v = load_value(&module)?;
            let is_r_module = v.get("modules").is_some()
                || v.get("kind").and_then(|k| k.as_str()) == Some("r-module");
            let f = if is_r_module {
                let m = parse_r_module(&v, &rep).map_err(|e| anyhow!("{}", e))?;
                phi(&m, &gr).map_err(|e| anyhow!("{}", e))?
            } else {
                parse_dg_module(&v, gr.category()).map_err(|e| anyhow!("{}", e))?
            };
            let report =
                check_generates(gr.category(), &f, parse_window(&window)?).map_err(map_refusal)?;
            Ok(if printer.report(&report) { 0 } else { 1 })
        }
        Command::PWindow { rep, pairs, out } => {
            let gr = build_gr(load_rep(&rep, &ring_flag)?)?;
            let mut parsed = Vec::new();
            for item in pairs.split(',') {
                let item = item.trim();
                let (name, deg) = item
                    .rsplit_once('@')
                    .ok_or_else(|| anyhow!("pair {:?} must be object@degree", item))?;
                let at = gr_object(&gr, name)?;
                let n: i64 = deg.parse().context("pair degree")?;
                if n.abs() > 1 << 20 {
                    return Err(anyhow!("pair degree out of range"));
                }
                parsed.push((at, n));
            }
            let w = p_window(gr.category(), &parsed).map_err(map_refusal)?;
            emit(&out, &preadditive_to_json(&w.category))?;
            Ok(0)
        }
        Command::Center { category, out } => {
            let a = load_preadd(&category, &ring_flag)?;
            let z = center(&a).map_err(|e| anyhow!("{}", e))?;
            emit(&out, &center_to_json(&a, &z))?;
            Ok(0)
        }
        Command::Idempotents { category } => {
            let a = load_preadd(&category, &ring_flag)?;
            let z = center(&a).map_err(|e| anyhow!("{}", e))?;
            let idems = idempotents(&z).map_err(map_refusal)?;
            printer.line("center rank", z.rank());
            if let Some(card) = z.cardinality() {
                printer.line("center cardinality", card);
            }
            printer.line("idempotents", idems.len());
            for (i, e) in idems.iter().enumerate() {
                let fam: Vec<String> = (0..a.objects().len())
                    .map(|x| {
                        let comp = z.component(e, x);
                        let body: Vec<String> = comp.iter().map(|s| s.to_string()).collect();
                        format!("{}: [{}]", a.objects()[x], body.join(", "))
                    })
                    .collect();
                printer.line(&format!("e{}", i), fam.join("; "));
            }
            Ok(0)
        }
        Command::Ideal {
            category,
            gens,
            square,
        } => {
            let a = load_preadd(&category, &ring_flag)?;
            let gens = parse_gens(&a, &gens)?;
            let ideal = ideal_generated(&a, &gens);
            for (&(x, y), m) in &ideal.components {
                printer.line(
                    &format!("component {}->{}", a.objects()[x], a.objects()[y]),
                    format!("{} generator(s)", m.rows()),
                );
            }
            if square {
                let sq = ideal_product(&a, &ideal, &ideal);
                printer.line("I·I equals I", sq == ideal);
            }
            printer.line("idempotent", is_idempotent(&a, &ideal));
            Ok(0)
        }
        Command::TopologyCheck { category, topology } => {
            let a = load_preadd(&category, &ring_flag)?;
            let t = topology_from_str(&read_file(&topology)?, &a).map_err(|e| anyhow!("{}", e))?;
            let report = check_linear_topology(&a, &t).map_err(map_refusal)?;
            Ok(if printer.report(&report) { 0 } else { 1 })
        }
        Command::TtfCheck {
            category,
            samples,
            ideal_gens,
        } => {
            let a = load_preadd(&category, &ring_flag)?;
            let mut sample_modules = Vec::new();
            for path in &samples {
                let v = load_value(path)?;
                sample_modules.push(parse_dg_module(&v, a.cat()).map_err(|e| anyhow!("{}", e))?);
            }
            let refs: Vec<&DgModule> = sample_modules.iter().collect();
            let mut all_pass = true;
            match ideal_gens {
                Some(gens) => {
                    let ideal = ideal_generated(&a, &parse_gens(&a, &gens)?);
                    let datum = TorsionDatum::IdempotentIdeal(&ideal);
                    let report = torsion_split(&a, &datum, &refs).map_err(map_refusal)?;
                    all_pass &= printer.report(&report);
                }
                None => {
                    let z = center(&a).map_err(|e| anyhow!("{}", e))?;
                    let idems = idempotents(&z).map_err(map_refusal)?;
                    printer.line("idempotents", idems.len());
                    for (i, coords) in idems.iter().enumerate() {
                        let datum = TorsionDatum::CentralIdempotent {
                            center: &z,
                            coords: coords.clone(),
                        };
                        let mut report = torsion_split(&a, &datum, &refs).map_err(map_refusal)?;
                        report.subject = format!("torsion split (idempotent e{})", i);
                        all_pass &= printer.report(&report);
                    }
                }
            }
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

/// A refusal sentinel threaded through anyhow so main can map it to exit 2.
#[derive(Debug)]
struct Refused(String);

impl std::fmt::Display for Refused {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "refused: {}", self.0)
    }
}

impl std::error::Error for Refused {}

fn map_refusal(e: Error) -> anyhow::Error {
    match e {
        Error::Refusal(msg) => anyhow::Error::new(Refused(msg)),
        other => anyhow!("{}", other),
    }
}

fn main() -> ExitCode {
    // Die quietly on closed pipes, like other line-oriented unix tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems are ordinary failures (exit 1); 2 is reserved
            // for refusals. Help and version print normally.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{}", e);
                return ExitCode::from(0);
            }
            eprint!("{}", e);
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if e.downcast_ref::<Refused>().is_some() {
                eprintln!("{}", e);
                ExitCode::from(2)
            } else {
                eprintln!("error: {:#}", e);
                ExitCode::from(1)
            }
        }
    }
}
