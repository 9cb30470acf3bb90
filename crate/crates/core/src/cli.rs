//! The `lemodule` command line.
//!
//! Exit codes: 0 success, 1 an axiom or property fails, 2 usage, format or
//! parse error, 3 a capacity cap was exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::decomposition::{
    associated_primes, enumerate_reduced_decompositions, find_reduced_decomposition,
    minimal_prime_divisors, s_component, verify_first_uniqueness, verify_second_uniqueness,
    PrimaryDecomposition,
};
use crate::error::{Error, Result, Violation};
use crate::io::{parse_structure, serialize_structure, GeneratorDirective, StructureFile};
use crate::laws::{self, Tally};
use crate::module::{LeModule, SubmoduleElement};
use crate::primary::classify_all;
use crate::ring::{Ideal, MultClosedSet};

#[derive(Parser, Debug)]
#[command(
    name = "lemodule",
    version,
    about = "Finite le-modules: axioms, classification, primary decomposition"
)]
pub struct Cli {
    /// Machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the ring and le-module axioms.
    Validate { file: PathBuf },
    /// Primary and prime flags and radicals of every submodule element.
    Classify { file: PathBuf },
    /// Reduced primary decomposition(s) of one element.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        element: String,
        /// Enumerate every reduced decomposition.
        #[arg(long)]
        all: bool,
    },
    /// Run the full property suite.
    Verify {
        file: PathBuf,
        /// Restrict the suite to one submodule element.
        #[arg(long)]
        element: Option<String>,
    },
    /// Compute n_S for a multiplicatively closed set S.
    SComponent {
        file: PathBuf,
        #[arg(long)]
        element: String,
        /// Comma-separated ring element indices.
        #[arg(long)]
        set: String,
    },
    /// Write a structure file.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_ring: Option<usize>,
        #[arg(long)]
        max_module: Option<usize>,
        /// Output path; stdout when omitted.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    SubmoduleLattice,
    Random,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Violations(_) | Error::Counterexample(_) => EXIT_VIOLATION,
        Error::Format(_) | Error::Parse { .. } | Error::Usage(_) | Error::Io(_) => EXIT_USAGE,
        Error::Capacity { .. } => EXIT_CAPACITY,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Format(_) => "format",
        Error::Parse { .. } => "parse",
        Error::Violations(_) => "violation",
        Error::Usage(_) => "usage",
        Error::Counterexample(_) => "counterexample",
        Error::Capacity { .. } => "capacity",
        Error::Io(_) => "io",
    }
}

/// JSON report types. Each deserializes with unknown fields denied, so a
/// parse of the output is a schema check.
pub mod report {
    use super::*;

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct ErrorReport {
        pub error: String,
        pub message: String,
        pub exit_code: i32,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct ViolationEntry {
        pub axiom: String,
        pub witness: Vec<usize>,
        pub message: String,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct ValidateReport {
        pub ring_size: usize,
        pub module_size: usize,
        pub ring_violations: Vec<ViolationEntry>,
        /// Empty when the ring already failed.
        pub module_violations: Vec<ViolationEntry>,
        pub valid: bool,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Witness {
        pub a: usize,
        pub x: String,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct ClassifyRow {
        pub element: String,
        pub index: usize,
        pub primary: bool,
        pub prime: bool,
        pub radical: Vec<usize>,
        pub primary_witness: Option<Witness>,
        pub prime_witness: Option<Witness>,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct ClassifyReport {
        pub elements: Vec<ClassifyRow>,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct DecompositionEntry {
        pub components: Vec<String>,
        pub radicals: Vec<Vec<usize>>,
        pub reduced: bool,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Verdicts {
        pub first_uniqueness: bool,
        pub second_uniqueness: bool,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct DecomposeReport {
        pub target: String,
        pub decomposable: bool,
        pub decompositions: Vec<DecompositionEntry>,
        pub associated_primes: Vec<Vec<usize>>,
        pub isolated_primes: Vec<Vec<usize>>,
        pub minimal_primes: Vec<Vec<usize>>,
        /// Present with `--all`.
        pub verdicts: Option<Verdicts>,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct VerifyOutput {
        pub element: Option<String>,
        pub axiom_violations: Vec<ViolationEntry>,
        pub properties: Vec<Tally>,
        pub notes: Vec<String>,
        pub checked: u64,
        pub failed_properties: usize,
        pub holds: bool,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct SComponentReport {
        pub element: String,
        pub set: Vec<usize>,
        pub s_component: String,
        pub s_component_index: usize,
    }

    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct GenerateReport {
        pub path: Option<String>,
        pub ring_size: usize,
        pub module_size: usize,
    }
}

use report::*;

/// Parse `args` (including the program name), run, and return the exit
/// code. Reports go to `out`, errors and warnings to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let json = cli.json;
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {e}");
            if let Error::Violations(vs) = &e {
                for v in vs {
                    let _ = writeln!(err, "  {v}");
                }
            }
            if json {
                let rep = ErrorReport {
                    error: error_kind(&e).into(),
                    message: e.to_string(),
                    exit_code: code,
                };
                let _ = emit_json(out, &rep);
            }
            code
        }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn load(path: &Path) -> Result<StructureFile> {
    let text = std::fs::read_to_string(path)?;
    parse_structure(&text)
}

fn element<'m>(m: &'m LeModule, key: &str, err: &mut dyn Write) -> Result<SubmoduleElement<'m>> {
    let (x, conflict) = m.resolve(key)?;
    if conflict {
        let _ = writeln!(
            err,
            "warning: `{key}` is both a name and an index; using the element named `{key}`"
        );
    }
    m.submodule(x)
}

fn violation_entries(vs: &[Violation]) -> Vec<ViolationEntry> {
    vs.iter()
        .map(|v| ViolationEntry {
            axiom: v.axiom.name().into(),
            witness: v.witness.clone(),
            message: v.to_string(),
        })
        .collect()
}

/// Ideals in display order: by principal generator, non-principal last.
fn display_sorted<'r>(mut ideals: Vec<Ideal<'r>>) -> Vec<Ideal<'r>> {
    ideals.sort_by_key(|p| (p.principal_generator().unwrap_or(usize::MAX), p.members()));
    ideals
}

fn ideal_list(ideals: &[Ideal<'_>]) -> String {
    let parts: Vec<String> = ideals.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn members(ideals: &[Ideal<'_>]) -> Vec<Vec<usize>> {
    ideals
        .iter()
        .map(|p| p.members().iter().collect())
        .collect()
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let json = cli.json;
    match cli.command {
        Command::Validate { file } => validate(&load(&file)?, json, out),
        Command::Classify { file } => {
            let m = load(&file)?.expand()?;
            classify(&m, json, out)
        }
        Command::Decompose {
            file,
            element: key,
            all,
        } => {
            let m = load(&file)?.expand()?;
            let n = element(&m, &key, err)?;
            decompose(n, all, json, out)
        }
        Command::Verify { file, element: key } => {
            verify(&load(&file)?, key.as_deref(), json, out, err)
        }
        Command::SComponent {
            file,
            element: key,
            set,
        } => {
            let m = load(&file)?.expand()?;
            let n = element(&m, &key, err)?;
            let indices = set
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::usage(format!("bad ring index {s:?}")))
                })
                .collect::<Result<Vec<usize>>>()?;
            if let Some(&bad) = indices.iter().find(|&&i| i >= m.ring().size()) {
                return Err(Error::usage(format!(
                    "ring index {bad} out of range 0..{}",
                    m.ring().size()
                )));
            }
            let s = MultClosedSet::new(m.ring(), indices.iter().copied().collect())?;
            let ns = s_component(n, &s)?;
            if json {
                emit_json(
                    out,
                    &SComponentReport {
                        element: n.to_string(),
                        set: s.members().iter().collect(),
                        s_component: ns.to_string(),
                        s_component_index: ns.index(),
                    },
                )?;
            } else {
                writeln!(out, "n_S = {ns} (n = {n}, S = {:?})", s.members())?;
            }
            Ok(EXIT_OK)
        }
        Command::Generate {
            kind,
            n,
            seed,
            max_ring,
            max_module,
            output,
        } => {
            let need = |v: Option<usize>, flag: &str| {
                v.ok_or_else(|| Error::usage(format!("--{flag} is required")))
            };
            let directive = match kind {
                Kind::SubmoduleLattice => GeneratorDirective::SubmoduleLattice { n: need(n, "n")? },
                Kind::Random => GeneratorDirective::Random {
                    seed: seed.ok_or_else(|| Error::usage("--seed is required"))?,
                    max_ring: need(max_ring, "max-ring")?,
                    max_module: need(max_module, "max-module")?,
                },
            };
            let m = directive.generate()?;
            let text = serialize_structure(&StructureFile::from_module(&m));
            match &output {
                Some(path) => std::fs::write(path, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
            if let Some(path) = &output {
                if json {
                    emit_json(
                        out,
                        &GenerateReport {
                            path: Some(path.display().to_string()),
                            ring_size: m.ring().size(),
                            module_size: m.size(),
                        },
                    )?;
                } else {
                    writeln!(
                        out,
                        "wrote {}: ring of {} elements, module of {} elements",
                        path.display(),
                        m.ring().size(),
                        m.size()
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Ring and module axiom violations; the module is only checked over a
/// valid ring.
fn check_axioms(file: &StructureFile) -> Result<(usize, usize, Vec<Violation>, Vec<Violation>)> {
    let raw_ring = file.ring.to_raw();
    let raw_module = file.module_raw()?;
    let ring_violations = raw_ring.violations();
    let module_violations = if ring_violations.is_empty() {
        raw_module.violations(&crate::FiniteRing::new(&raw_ring)?)
    } else {
        Vec::new()
    };
    Ok((
        raw_ring.size,
        raw_module.size,
        ring_violations,
        module_violations,
    ))
}

fn validate(file: &StructureFile, json: bool, out: &mut dyn Write) -> Result<i32> {
    let (ring_size, module_size, rv, mv) = check_axioms(file)?;
    let valid = rv.is_empty() && mv.is_empty();
    if json {
        emit_json(
            out,
            &ValidateReport {
                ring_size,
                module_size,
                ring_violations: violation_entries(&rv),
                module_violations: violation_entries(&mv),
                valid,
            },
        )?;
    } else if valid {
        writeln!(
            out,
            "all axioms hold (ring of {ring_size} elements, module of {module_size} elements)"
        )?;
    } else {
        for v in rv.iter().chain(&mv) {
            writeln!(out, "{v}")?;
        }
        writeln!(out, "{} axiom violation(s)", rv.len() + mv.len())?;
    }
    Ok(if valid { EXIT_OK } else { EXIT_VIOLATION })
}

fn classify(m: &LeModule, json: bool, out: &mut dyn Write) -> Result<i32> {
    let rows = classify_all(m);
    let witness = |w: Option<(usize, usize)>| w.map(|(a, x)| Witness { a, x: m.name(x) });
    if json {
        let elements = rows
            .iter()
            .map(|c| ClassifyRow {
                element: c.element.to_string(),
                index: c.element.index(),
                primary: c.is_primary,
                prime: c.is_prime_submodule,
                radical: c.radical.members().iter().collect(),
                primary_witness: witness(c.primary_witness),
                prime_witness: witness(c.prime_witness),
            })
            .collect();
        emit_json(out, &ClassifyReport { elements })?;
        return Ok(EXIT_OK);
    }
    let width = rows
        .iter()
        .map(|c| c.element.to_string().chars().count())
        .max()
        .unwrap_or(0)
        .max(7);
    let yes = |b: bool| if b { "yes" } else { "no" };
    writeln!(out, "{:<width$}  index  primary  prime  radical", "element")?;
    for c in &rows {
        let name = c.element.to_string();
        let pad = width - name.chars().count();
        writeln!(
            out,
            "{name}{}  {:<5}  {:<7}  {:<5}  {}",
            " ".repeat(pad),
            c.element.index(),
            yes(c.is_primary),
            yes(c.is_prime_submodule),
            c.radical
        )?;
    }
    Ok(EXIT_OK)
}

fn describe(d: &PrimaryDecomposition<'_>) -> String {
    let mut pairs: Vec<(SubmoduleElement<'_>, Ideal<'_>)> = d
        .components
        .iter()
        .copied()
        .zip(d.radicals.iter().copied())
        .collect();
    pairs.sort_by_key(|(_, p)| (p.principal_generator().unwrap_or(usize::MAX), p.members()));
    let parts: Vec<String> = pairs.iter().map(|(q, _)| q.to_string()).collect();
    format!("{} = {}", d.target, parts.join(" ∧ "))
}

fn decompose(n: SubmoduleElement<'_>, all: bool, json: bool, out: &mut dyn Write) -> Result<i32> {
    let decompositions = if all {
        enumerate_reduced_decompositions(n)?
    } else {
        find_reduced_decomposition(n)?.into_iter().collect()
    };
    let minimal = display_sorted(minimal_prime_divisors(n)?);
    let Some(first) = decompositions.first() else {
        if json {
            emit_json(
                out,
                &DecomposeReport {
                    target: n.to_string(),
                    decomposable: false,
                    decompositions: Vec::new(),
                    associated_primes: Vec::new(),
                    isolated_primes: Vec::new(),
                    minimal_primes: members(&minimal),
                    verdicts: None,
                },
            )?;
        } else {
            writeln!(out, "{n} has no primary decomposition")?;
            writeln!(out, "minimal primes {}", ideal_list(&minimal))?;
        }
        return Ok(EXIT_OK);
    };
    let assoc = associated_primes(first)?;
    let primes = display_sorted(assoc.primes.clone());
    let isolated = display_sorted(assoc.isolated_primes());
    let verdicts = if all {
        let first_ok = verify_first_uniqueness(n)?.holds;
        let mut second_ok = true;
        let iso = assoc.isolated_primes();
        for mask in 0u32..1 << iso.len() {
            let set: Vec<Ideal<'_>> = (0..iso.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| iso[i])
                .collect();
            second_ok &= verify_second_uniqueness(n, &set)?.holds;
        }
        Some(Verdicts {
            first_uniqueness: first_ok,
            second_uniqueness: second_ok,
        })
    } else {
        None
    };
    let holds = verdicts
        .as_ref()
        .is_none_or(|v| v.first_uniqueness && v.second_uniqueness);
    if json {
        let entries = decompositions
            .iter()
            .map(|d| DecompositionEntry {
                components: d.components.iter().map(|q| q.to_string()).collect(),
                radicals: members(&d.radicals),
                reduced: d.reduced,
            })
            .collect();
        emit_json(
            out,
            &DecomposeReport {
                target: n.to_string(),
                decomposable: true,
                decompositions: entries,
                associated_primes: members(&primes),
                isolated_primes: members(&isolated),
                minimal_primes: members(&minimal),
                verdicts,
            },
        )?;
    } else {
        let status = match (primes.len(), isolated.len()) {
            (1, 1) => "isolated".to_string(),
            (2, 2) => "both isolated".to_string(),
            (k, i) if k == i => "all isolated".to_string(),
            _ => format!("isolated {}", ideal_list(&isolated)),
        };
        writeln!(
            out,
            "{}; associated primes {}, {status}",
            describe(first),
            ideal_list(&primes)
        )?;
        for d in &decompositions[1..] {
            writeln!(out, "{}", describe(d))?;
        }
        writeln!(out, "minimal primes {}", ideal_list(&minimal))?;
        if let Some(v) = &verdicts {
            let word = |b: bool| if b { "holds" } else { "FAILS" };
            writeln!(out, "{} reduced decomposition(s)", decompositions.len())?;
            writeln!(
                out,
                "first uniqueness {}; second uniqueness {}",
                word(v.first_uniqueness),
                word(v.second_uniqueness)
            )?;
        }
    }
    Ok(if holds { EXIT_OK } else { EXIT_VIOLATION })
}

fn verify(
    file: &StructureFile,
    key: Option<&str>,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let (_, _, rv, mv) = check_axioms(file)?;
    if !rv.is_empty() || !mv.is_empty() {
        let vs: Vec<Violation> = rv.into_iter().chain(mv).collect();
        if json {
            emit_json(
                out,
                &VerifyOutput {
                    element: key.map(str::to_string),
                    axiom_violations: violation_entries(&vs),
                    properties: Vec::new(),
                    notes: Vec::new(),
                    checked: 0,
                    failed_properties: 0,
                    holds: false,
                },
            )?;
        } else {
            writeln!(out, "axiom violated: {}", vs[0])?;
            writeln!(
                out,
                "{} axiom violation(s); property suite not run",
                vs.len()
            )?;
        }
        return Ok(EXIT_VIOLATION);
    }
    let m = file.expand()?;
    let focus = key.map(|k| element(&m, k, err)).transpose()?;
    let report = laws::verify(&m, focus.map(|n| n.index()))?;
    let checked = report.properties.iter().map(|t| t.checked).sum();
    let failed = report.failed().count();
    if json {
        emit_json(
            out,
            &VerifyOutput {
                element: focus.map(|n| n.to_string()),
                axiom_violations: Vec::new(),
                properties: report.properties.clone(),
                notes: report.notes.clone(),
                checked,
                failed_properties: failed,
                holds: report.holds(),
            },
        )?;
    } else {
        writeln!(out, "all axioms hold")?;
        for t in &report.properties {
            match &t.first_failure {
                None => writeln!(out, "PASS {} ({} checked)", t.property, t.checked)?,
                Some(f) => writeln!(
                    out,
                    "FAIL {} ({} of {} failed); first: {f}",
                    t.property, t.failed, t.checked
                )?,
            }
        }
        for note in &report.notes {
            writeln!(out, "note: {note}")?;
        }
        writeln!(
            out,
            "{} properties, {checked} instances, {failed} failed",
            report.properties.len()
        )?;
    }
    Ok(if report.holds() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}
