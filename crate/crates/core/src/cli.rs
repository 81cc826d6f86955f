//! The `sft` command line.
//!
//! Exit codes: 0 when the command ran and its check passed (or a verdict
//! was computed), 1 when a check failed, 2 on usage and input errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{Element, Flavor, TruncationPolicy, Var};
use crate::corpus::{self, LayeredSizes};
use crate::differential::{apply_d, check_d_squared, validate_structure, verify_chain_map, DifferentialSpec, SpecStatus};
use crate::error::{Error, Result};
use crate::index::{enumerate_admissible_profiles, moduli_dimension, profile_monomial, PunctureRole};
use crate::io::{self, report, InputFile, Report};
use crate::theorem::{self, classify, find_unit_primitive, lift_primitive, project_primitive, SearchBounds};

#[derive(Parser, Debug)]
#[command(name = "sft", version, about = "Differential algebras of symplectic field theory")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to this path instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Treat every coefficient in differential files as a raw count.
    #[arg(long, global = true)]
    raw_counts: bool,
    /// Search bounds: word=N,action=R,radius=N,weight=N,gens=q:a;p:b
    #[arg(long, global = true)]
    bounds: Option<String>,
    /// Truncation policy: p=N,hbar=N,t=N,word=N,action=R
    #[arg(long, global = true)]
    policy: Option<String>,
    /// Seed for generated corpus entries.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Role {
    Positive,
    Negative,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the structural rules of a differential.
    Validate {
        differential: PathBuf,
        /// Also require positive energy of every term.
        #[arg(long)]
        action: bool,
    },
    /// Check that the differential squares to zero.
    D2 { differential: PathBuf },
    /// Apply the differential to an element.
    Apply {
        differential: PathBuf,
        #[arg(long)]
        element: String,
    },
    /// Search for a primitive of the unit within the bounds.
    FindPrimitive { differential: PathBuf },
    /// Lift a primitive to a larger algebra through a formal inverse.
    Lift {
        /// Differential the primitive is checked against.
        source: PathBuf,
        /// Differential of the larger algebra.
        target: PathBuf,
        #[arg(long, conflicts_with = "cert", required_unless_present = "cert")]
        element: Option<String>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Project a primitive to a smaller algebra.
    Project {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, conflicts_with = "cert", required_unless_present = "cert")]
        element: Option<String>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Decide exactness of the unit for a family of differentials.
    Classify {
        #[arg(required = true)]
        differentials: Vec<PathBuf>,
    },
    /// List the index-zero puncture profiles at an orbit.
    Enumerate {
        contact_data: PathBuf,
        #[arg(long)]
        orbit: String,
        #[arg(long, value_enum, default_value_t = Role::Positive)]
        role: Role,
    },
    /// List or write the built-in corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    List,
    /// Write the files of an entry (`layered` uses --seed).
    Emit {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Result of a command: report plus whether its check passed.
struct Outcome {
    report: Report,
    passed: bool,
}

/// Parses `key=value` lists.
fn key_values(text: &str) -> Result<Vec<(String, String)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Parse(format!("expected key=value, found `{kv}`")))
        })
        .collect()
}

fn number(key: &str, v: &str) -> Result<u32> {
    v.parse().map_err(|_| Error::Parse(format!("{key}: expected a nonnegative integer, found `{v}`")))
}

pub fn parse_policy(text: Option<&str>) -> Result<TruncationPolicy> {
    let mut policy = TruncationPolicy::default();
    for (k, v) in key_values(text.unwrap_or(""))? {
        match k.as_str() {
            "p" => policy.max_p_weight = number(&k, &v)?,
            "hbar" => policy.max_hbar_weight = number(&k, &v)?,
            "t" => policy.max_t_weight = number(&k, &v)?,
            "word" => policy.max_word_length = Some(number(&k, &v)?),
            "action" => policy.max_action = Some(io::parse_rational(&v)?),
            "all" => {
                let w = number(&k, &v)?;
                policy.max_p_weight = w;
                policy.max_hbar_weight = w;
                policy.max_t_weight = w;
            }
            _ => return Err(Error::Parse(format!("unknown policy key `{k}`"))),
        }
    }
    Ok(policy)
}

/// Search bounds; generator names are resolved against `sig` when given.
pub fn parse_bounds(text: Option<&str>, sig: Option<&crate::index::AlgebraSignature>) -> Result<SearchBounds> {
    let mut bounds = SearchBounds::default();
    for (k, v) in key_values(text.unwrap_or(""))? {
        match k.as_str() {
            "word" => bounds.max_word_length = number(&k, &v)?,
            "action" => bounds.max_action = Some(io::parse_rational(&v)?),
            "radius" => bounds.group_radius = number(&k, &v)?,
            "weight" => bounds.weight = number(&k, &v)?,
            "gens" => {
                let sig = sig.ok_or_else(|| Error::Parse("gens needs contact data".into()))?;
                let vars = v.split(';').map(|g| sig.parse_var(g.trim())).collect::<Result<Vec<Var>>>()?;
                bounds.generator_subset = Some(vars);
            }
            _ => return Err(Error::Parse(format!("unknown bounds key `{k}`"))),
        }
    }
    Ok(bounds)
}

fn element_or_cert(
    spec: &DifferentialSpec,
    element: &Option<String>,
    cert: &Option<PathBuf>,
    policy: &TruncationPolicy,
    inputs: &mut Vec<InputFile>,
) -> Result<theorem::PrimitiveCertificate> {
    match (element, cert) {
        (Some(text), _) => {
            let e = Element::parse(spec.flavor(), spec.sig(), text)?;
            checked(e, spec, policy)
        }
        (None, Some(path)) => io::read_certificate(path, spec, inputs),
        (None, None) => Err(Error::Parse("give --element or --cert".into())),
    }
}

fn failed(command: &str, inputs: &[InputFile], e: Error) -> Outcome {
    let mut report = Report::new(command, inputs);
    report.set("verdict", format!("failed check: the input is not a primitive: {e}"));
    Outcome { report, passed: false }
}

fn checked(e: Element, spec: &DifferentialSpec, policy: &TruncationPolicy) -> Result<theorem::PrimitiveCertificate> {
    theorem::PrimitiveCertificate::checked(e, spec, Some(policy))
}

impl Cli {
    fn run(&self) -> Result<Outcome> {
        let mut inputs = Vec::new();
        let policy = parse_policy(self.policy.as_deref())?;
        match &self.command {
            Command::Validate { differential, action } => {
                let spec = io::read_differential(differential, self.raw_counts, &mut inputs)?;
                let structure = validate_structure(&spec, *action);
                let mut r = Report::new("validate", &inputs);
                r.set("flavor", spec.flavor());
                r.set("structure", report::structure(&structure));
                r.set("verdict", structure.status.to_string());
                Ok(Outcome { report: r, passed: structure.status == SpecStatus::Valid })
            }
            Command::D2 { differential } => {
                let spec = io::read_differential(differential, self.raw_counts, &mut inputs)?;
                let d2 = check_d_squared(&spec)?;
                let mut r = Report::new("d2", &inputs);
                r.set("flavor", spec.flavor());
                r.set("dSquared", report::d_squared(&d2, spec.sig()));
                r.set("verdict", if d2.passed() { "d^2 = 0" } else { "failed check: d^2 != 0" });
                Ok(Outcome { report: r, passed: d2.passed() })
            }
            Command::Apply { differential, element } => {
                let spec = io::read_differential(differential, self.raw_counts, &mut inputs)?;
                let e = Element::parse(spec.flavor(), spec.sig(), element)?;
                let d = apply_d(&spec, &e)?;
                let mut r = Report::new("apply", &inputs);
                r.set("flavor", spec.flavor());
                r.set("element", report::element(&e, spec.sig()));
                r.set("result", report::element(&d, spec.sig()));
                Ok(Outcome { report: r, passed: true })
            }
            Command::FindPrimitive { differential } => {
                let spec = io::read_differential(differential, self.raw_counts, &mut inputs)?;
                let bounds = parse_bounds(self.bounds.as_deref(), Some(spec.sig()))?;
                let outcome = find_unit_primitive(&spec, &bounds)?;
                let mut r = Report::new("find-primitive", &inputs);
                r.set("flavor", spec.flavor());
                r.set("bounds", bounds_json(&bounds, &spec));
                r.set("search", report::search(&outcome));
                r.set(
                    "verdict",
                    if outcome.certificate().is_some() { "primitive found" } else { "no primitive found within bounds" },
                );
                Ok(Outcome { report: r, passed: true })
            }
            Command::Lift { source, target, element, cert } => {
                let src = io::read_differential(source, self.raw_counts, &mut inputs)?;
                let tgt = io::read_differential(target, self.raw_counts, &mut inputs)?;
                let f0 = match element_or_cert(&src, element, cert, &policy, &mut inputs) {
                    Ok(c) => c,
                    Err(e @ Error::Verification(_)) => return Ok(failed("lift", &inputs, e)),
                    Err(e) => return Err(e),
                };
                let mut r = Report::new("lift", &inputs);
                r.set("policy", &policy);
                let passed = match lift_primitive(&f0, &tgt, &policy) {
                    Ok(f) => {
                        r.set("certificate", report::certificate(&f));
                        r.set("verdict", format!("lifted to {}", f.flavor));
                        true
                    }
                    Err(e @ (Error::Verification(_) | Error::ZeroWeightTerm(_))) => {
                        r.set("verdict", format!("failed check: {e}"));
                        false
                    }
                    Err(e) => return Err(e),
                };
                Ok(Outcome { report: r, passed })
            }
            Command::Project { source, target, element, cert } => {
                let src = io::read_differential(source, self.raw_counts, &mut inputs)?;
                let tgt = io::read_differential(target, self.raw_counts, &mut inputs)?;
                let f = match element_or_cert(&src, element, cert, &policy, &mut inputs) {
                    Ok(c) => c,
                    Err(e @ Error::Verification(_)) => return Ok(failed("project", &inputs, e)),
                    Err(e) => return Err(e),
                };
                let chain = verify_chain_map(&src, &tgt, std::slice::from_ref(&f.element))?;
                let mut r = Report::new("project", &inputs);
                r.set("chainMap", report::chain_map(&chain, src.sig()));
                let passed = match project_primitive(&f, &tgt) {
                    Ok(g) => {
                        r.set("certificate", report::certificate(&g));
                        r.set("verdict", format!("projected to {}", g.flavor));
                        true
                    }
                    Err(e @ Error::Verification(_)) => {
                        r.set("verdict", format!("failed check: {e}"));
                        false
                    }
                    Err(e) => return Err(e),
                };
                Ok(Outcome { report: r, passed })
            }
            Command::Classify { differentials } => {
                let mut specs = BTreeMap::new();
                for path in differentials {
                    let spec = io::read_differential(path, self.raw_counts, &mut inputs)?;
                    if specs.insert(spec.flavor(), spec).is_some() {
                        return Err(Error::IncompatibleFamily(format!("two {} differentials given", path.display())));
                    }
                }
                let sig = specs.values().next().expect("at least one").sig().clone();
                let bounds = parse_bounds(self.bounds.as_deref(), Some(&sig))?;
                let result = classify(&specs, &bounds, &policy)?;
                let mut r = Report::new("classify", &inputs);
                r.set("bounds", bounds_json(&bounds, specs.values().next().expect("at least one")));
                r.set("policy", &policy);
                r.set("classification", report::classification(&result));
                r.set("verdict", result.verdict.to_string());
                Ok(Outcome { report: r, passed: true })
            }
            Command::Enumerate { contact_data, orbit, role } => {
                let sig = io::read_signature(contact_data, &mut inputs)?;
                let gamma = sig.orbit_id(orbit)?;
                let role = match role {
                    Role::Positive => PunctureRole::Positive,
                    Role::Negative => PunctureRole::Negative,
                };
                let bounds = parse_bounds(self.bounds.as_deref(), Some(&sig))?;
                let mut enum_policy = policy.clone();
                if enum_policy.max_word_length.is_none() && enum_policy.max_action.is_none() {
                    enum_policy.max_word_length = Some(bounds.max_word_length);
                }
                let profiles = enumerate_admissible_profiles(gamma, role, &sig, &enum_policy, bounds.group_radius)?;
                let list: Vec<_> = profiles
                    .iter()
                    .map(|p| {
                        let m = profile_monomial(p, &sig);
                        json!({
                            "monomial": Element::from_terms(Flavor::SftStar, &sig, [(m, <crate::Rational as num_traits::One>::one())])
                                .map(|e| e.display(&sig).to_string())
                                .unwrap_or_else(|_| "0".into()),
                            "markedPoints": p.marked_points,
                            "dimension": moduli_dimension(p, &sig),
                        })
                    })
                    .collect();
                let mut r = Report::new("enumerate", &inputs);
                r.set("orbit", orbit);
                r.set("role", format!("{role:?}").to_lowercase());
                r.set("policy", &enum_policy);
                r.set("groupRadius", bounds.group_radius);
                r.set("profiles", list);
                r.set("verdict", format!("{} index-zero profiles", profiles.len()));
                Ok(Outcome { report: r, passed: true })
            }
            Command::Corpus { action } => match action {
                CorpusAction::List => {
                    let mut r = Report::new("corpus", &inputs);
                    let entries: Vec<_> = corpus::builtin()
                        .iter()
                        .map(|e| json!({"name": e.name, "notes": e.notes, "expected": e.expected.map(|x| format!("{x:?}"))}))
                        .collect();
                    r.set("entries", entries);
                    Ok(Outcome { report: r, passed: true })
                }
                CorpusAction::Emit { name, out } => {
                    let entry = if name == "layered" {
                        corpus::random_layered_spec(self.seed, LayeredSizes::default())
                    } else {
                        corpus::by_name(name).ok_or_else(|| Error::Parse(format!("unknown corpus entry `{name}`")))?
                    };
                    let mut written = Vec::new();
                    std::fs::create_dir_all(out).map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?;
                    for (file, contents) in io::corpus_files(&entry) {
                        let path = out.join(&file);
                        std::fs::write(&path, &contents).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                        written.push(json!({"path": path.display().to_string(), "sha256": io::sha256_hex(contents.as_bytes())}));
                    }
                    let mut r = Report::new("corpus", &inputs);
                    r.set("entry", &entry.name);
                    r.set("written", written);
                    Ok(Outcome { report: r, passed: true })
                }
            },
        }
    }
}

fn bounds_json(bounds: &SearchBounds, spec: &DifferentialSpec) -> serde_json::Value {
    json!({
        "maxWordLength": bounds.max_word_length,
        "maxAction": bounds.max_action.as_ref().map(|a| a.to_string()),
        "groupRadius": bounds.group_radius,
        "weight": bounds.weight,
        "generators": bounds.generator_subset.as_ref().map(|g| g.iter().map(|&v| spec.sig().var_name(v)).collect::<Vec<_>>()),
    })
}

fn emit(report: &Report, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, report.to_json()),
        None => {
            print!("{}", report.to_json());
            Ok(())
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.run() {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.report, cli.report.as_deref()) {
                eprintln!("error: {e}");
                return 2;
            }
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
