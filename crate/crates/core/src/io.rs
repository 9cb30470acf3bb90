//! The JSON structure format.
//!
//! ```json
//! { "ring": {"kind": "Zn", "n": 12},
//!   "module": {"generate": {"kind": "submodule-lattice", "n": 12}} }
//! ```
//!
//! `ring` is `{"kind":"Zn","n":k}` or `{"kind":"table","size":k,"add":..,
//! "mul":..,"zero":z,"one":o}`. `module` is either explicit tables
//! (`size`, optional `names`, `leq`, `add`, `zero`, `top`, `action`) or a
//! `generate` directive. Parsing checks shapes and index bounds and reports
//! the JSON path of the first problem; axioms are checked later, when the
//! structure is expanded.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::bits::WIDTH;
use crate::error::{Error, Result};
use crate::models;
use crate::module::{LeModule, RawModule};
use crate::ring::{FiniteRing, RawRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFile {
    pub ring: RingSpec,
    pub module: ModuleSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Zn(usize),
    Table(RawRing),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleSpec {
    Tables(RawModule),
    Generate(GeneratorDirective),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorDirective {
    SubmoduleLattice {
        n: usize,
    },
    Random {
        seed: u64,
        max_ring: usize,
        max_module: usize,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ZnParams {
    n: usize,
}

impl RingSpec {
    pub fn size(&self) -> usize {
        match self {
            RingSpec::Zn(n) => *n,
            RingSpec::Table(raw) => raw.size,
        }
    }

    pub fn to_raw(&self) -> RawRing {
        match self {
            RingSpec::Zn(n) => RawRing::zn(*n),
            RingSpec::Table(raw) => raw.clone(),
        }
    }

    /// `Zn` when the tables are exactly those of `Z/nZ`.
    pub fn from_raw(raw: RawRing) -> RingSpec {
        if raw.size >= 1 && raw == RawRing::zn(raw.size) {
            RingSpec::Zn(raw.size)
        } else {
            RingSpec::Table(raw)
        }
    }

    pub fn build(&self) -> Result<FiniteRing> {
        FiniteRing::new(&self.to_raw())
    }
}

impl StructureFile {
    /// Full tables for an existing module.
    pub fn from_module(module: &LeModule) -> StructureFile {
        StructureFile {
            ring: RingSpec::from_raw(module.ring().to_raw()),
            module: ModuleSpec::Tables(module.to_raw()),
        }
    }

    /// Module tables, running the generator for a directive. The generated
    /// ring must equal the declared one.
    pub fn module_raw(&self) -> Result<RawModule> {
        match &self.module {
            ModuleSpec::Tables(raw) => Ok(raw.clone()),
            ModuleSpec::Generate(directive) => {
                let generated = directive.generate()?;
                let declared = self.ring.to_raw();
                let got = generated.ring().to_raw();
                if got != declared {
                    let shown = match RingSpec::from_raw(got) {
                        RingSpec::Zn(n) => format!("Z{n}"),
                        RingSpec::Table(raw) => format!("a {}-element table ring", raw.size),
                    };
                    return Err(Error::usage(format!(
                        "the directive generates a module over {shown}, which differs from the declared ring"
                    )));
                }
                Ok(generated.to_raw())
            }
        }
    }

    /// Validate everything and build the module.
    pub fn expand(&self) -> Result<LeModule> {
        let ring = self.ring.build()?;
        let raw = self.module_raw()?;
        LeModule::new(ring, &raw)
    }

    /// The same structure with any directive replaced by its tables.
    pub fn expanded(&self) -> Result<StructureFile> {
        Ok(StructureFile {
            ring: self.ring.clone(),
            module: ModuleSpec::Tables(self.module_raw()?),
        })
    }
}

impl GeneratorDirective {
    pub fn generate(&self) -> Result<LeModule> {
        match *self {
            GeneratorDirective::SubmoduleLattice { n } => models::submodule_lattice(n),
            GeneratorDirective::Random {
                seed,
                max_ring,
                max_module,
            } => models::generate_random(seed, max_ring, max_module),
        }
    }
}

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: if path.is_empty() {
            "$".into()
        } else {
            path.into()
        },
        message: message.into(),
    }
}

fn join_path(prefix: &str, inner: &str) -> String {
    match (prefix.is_empty(), inner.is_empty() || inner == ".") {
        (true, _) => inner.to_string(),
        (false, true) => prefix.to_string(),
        (false, false) if inner.starts_with('[') => format!("{prefix}{inner}"),
        (false, false) => format!("{prefix}.{inner}"),
    }
}

fn from_value<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = join_path(prefix, &e.path().to_string());
        parse_err(&path, e.into_inner().to_string())
    })
}

fn take_object(value: Value, path: &str) -> Result<Map<String, Value>> {
    match value {
        Value::Object(map) => Ok(map),
        other => Err(parse_err(
            path,
            format!("expected an object, found {}", kind_of(&other)),
        )),
    }
}

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

pub fn parse_structure(text: &str) -> Result<StructureFile> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        parse_err(
            "$",
            format!(
                "invalid JSON at line {} column {}: {e}",
                e.line(),
                e.column()
            ),
        )
    })?;
    let mut top = take_object(value, "$")?;
    if let Some(key) = top.keys().find(|k| *k != "ring" && *k != "module") {
        return Err(parse_err(
            key,
            format!("unknown field `{key}`, expected `ring` or `module`"),
        ));
    }
    let ring_value = top
        .remove("ring")
        .ok_or_else(|| parse_err("$", "missing field `ring`"))?;
    let module_value = top
        .remove("module")
        .ok_or_else(|| parse_err("$", "missing field `module`"))?;
    let ring = parse_ring(ring_value)?;
    let module = parse_module(module_value, ring.size())?;
    Ok(StructureFile { ring, module })
}

fn parse_ring(value: Value) -> Result<RingSpec> {
    let mut map = take_object(value, "ring")?;
    let kind = match map.remove("kind") {
        Some(Value::String(s)) => s,
        Some(other) => {
            return Err(parse_err(
                "ring.kind",
                format!("expected a string, found {}", kind_of(&other)),
            ))
        }
        None => return Err(parse_err("ring", "missing field `kind`")),
    };
    let spec = match kind.as_str() {
        "Zn" => RingSpec::Zn(from_value::<ZnParams>(Value::Object(map), "ring")?.n),
        "table" => RingSpec::Table(from_value::<RawRing>(Value::Object(map), "ring")?),
        other => {
            return Err(parse_err(
                "ring.kind",
                format!("unknown ring kind `{other}`, expected `Zn` or `table`"),
            ))
        }
    };
    check_ring_bounds(&spec)?;
    Ok(spec)
}

fn check_size(path: &str, size: usize, min: usize) -> Result<()> {
    if size < min {
        return Err(parse_err(path, format!("must be at least {min}")));
    }
    if size > WIDTH {
        return Err(Error::Capacity {
            what: "structure size",
            got: size,
            cap: WIDTH,
        });
    }
    Ok(())
}

fn check_table(
    path: &str,
    table: &[Vec<usize>],
    rows: usize,
    cols: usize,
    bound: usize,
) -> Result<()> {
    if table.len() != rows {
        return Err(parse_err(
            path,
            format!("has {} rows, expected {rows}", table.len()),
        ));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != cols {
            return Err(parse_err(
                &format!("{path}[{i}]"),
                format!("has {} entries, expected {cols}", row.len()),
            ));
        }
        if let Some(j) = row.iter().position(|&v| v >= bound) {
            return Err(parse_err(
                &format!("{path}[{i}][{j}]"),
                format!("index {} out of range 0..{bound}", row[j]),
            ));
        }
    }
    Ok(())
}

fn check_index(path: &str, v: usize, bound: usize) -> Result<()> {
    if v >= bound {
        return Err(parse_err(
            path,
            format!("index {v} out of range 0..{bound}"),
        ));
    }
    Ok(())
}

fn check_ring_bounds(spec: &RingSpec) -> Result<()> {
    match spec {
        RingSpec::Zn(n) => check_size("ring.n", *n, 1),
        RingSpec::Table(raw) => {
            let k = raw.size;
            check_size("ring.size", k, 1)?;
            check_table("ring.add", &raw.add, k, k, k)?;
            check_table("ring.mul", &raw.mul, k, k, k)?;
            check_index("ring.zero", raw.zero, k)?;
            check_index("ring.one", raw.one, k)
        }
    }
}

fn parse_module(value: Value, ring_size: usize) -> Result<ModuleSpec> {
    let mut map = take_object(value, "module")?;
    if map.contains_key("generate") {
        if let Some(key) = map.keys().find(|k| *k != "generate") {
            return Err(parse_err(
                &format!("module.{key}"),
                "a generate directive cannot be mixed with module tables",
            ));
        }
        let directive = map.remove("generate").expect("checked above");
        return Ok(ModuleSpec::Generate(from_value(
            directive,
            "module.generate",
        )?));
    }
    let raw: RawModule = from_value(Value::Object(map), "module")?;
    let m = raw.size;
    check_size("module.size", m, 1)?;
    if let Some(names) = &raw.names {
        if names.len() != m {
            return Err(parse_err(
                "module.names",
                format!("has {} entries, expected {m}", names.len()),
            ));
        }
    }
    if raw.leq.len() != m {
        return Err(parse_err(
            "module.leq",
            format!("has {} rows, expected {m}", raw.leq.len()),
        ));
    }
    if let Some(i) = raw.leq.iter().position(|row| row.len() != m) {
        return Err(parse_err(
            &format!("module.leq[{i}]"),
            format!("has {} entries, expected {m}", raw.leq[i].len()),
        ));
    }
    check_table("module.add", &raw.add, m, m, m)?;
    check_index("module.zero", raw.zero, m)?;
    check_index("module.top", raw.top, m)?;
    check_table("module.action", &raw.action, ring_size, m, m)?;
    Ok(ModuleSpec::Tables(raw))
}

fn to_value(file: &StructureFile) -> Value {
    let ring = match &file.ring {
        RingSpec::Zn(n) => serde_json::json!({"kind": "Zn", "n": n}),
        RingSpec::Table(raw) => {
            let mut map = Map::new();
            map.insert("kind".into(), "table".into());
            if let Value::Object(fields) = serde_json::to_value(raw).expect("ring tables serialize")
            {
                map.extend(fields);
            }
            Value::Object(map)
        }
    };
    let module = match &file.module {
        ModuleSpec::Tables(raw) => serde_json::to_value(raw).expect("module tables serialize"),
        ModuleSpec::Generate(d) => serde_json::json!({ "generate": d }),
    };
    serde_json::json!({ "ring": ring, "module": module })
}

/// Pretty JSON with arrays of scalars kept on one line, so tables read as
/// grids.
pub fn serialize_structure(file: &StructureFile) -> String {
    let mut out = String::new();
    write_value(&mut out, &to_value(file), 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, val)) in map.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), Value::String(k.clone()));
                write_value(out, val, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", pad(indent));
        }
        Value::Array(items) if !items.is_empty() && !items.iter().all(is_scalar) => {
            out.push_str("[\n");
            for (i, val) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, val, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", pad(indent));
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            let _ = write!(out, "[{}]", parts.join(", "));
        }
        other => out.push_str(&other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z12_tables() -> StructureFile {
        StructureFile::from_module(&models::submodule_lattice(12).unwrap())
    }

    #[test]
    fn round_trip_tables() {
        let file = z12_tables();
        assert_eq!(file.ring, RingSpec::Zn(12));
        let text = serialize_structure(&file);
        assert_eq!(parse_structure(&text).unwrap(), file);
        assert!(text.contains("\"add\": [\n"));
        assert!(text.contains("[true, false"));
    }

    #[test]
    fn directive_expands_to_z12() {
        let text = r#"{"ring":{"kind":"Zn","n":12},"module":{"generate":{"kind":"submodule-lattice","n":12}}}"#;
        let file = parse_structure(text).unwrap();
        assert_eq!(
            file.module,
            ModuleSpec::Generate(GeneratorDirective::SubmoduleLattice { n: 12 })
        );
        assert_eq!(parse_structure(&serialize_structure(&file)).unwrap(), file);
        let m = file.expand().unwrap();
        assert_eq!(m.to_raw(), models::submodule_lattice(12).unwrap().to_raw());
        assert_eq!(file.expanded().unwrap(), z12_tables());
    }

    #[test]
    fn directive_ring_must_match() {
        let text = r#"{"ring":{"kind":"Zn","n":6},"module":{"generate":{"kind":"submodule-lattice","n":12}}}"#;
        let err = parse_structure(text).unwrap().expand().unwrap_err();
        assert!(
            matches!(err, Error::Usage(ref s) if s.contains("Z12")),
            "{err}"
        );
    }

    #[test]
    fn zero_out_of_range_names_path() {
        let mut file = z12_tables();
        if let ModuleSpec::Tables(raw) = &mut file.module {
            raw.zero = 9;
        }
        let err = parse_structure(&serialize_structure(&file)).unwrap_err();
        match err {
            Error::Parse { path, .. } => assert_eq!(path, "module.zero"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn parse_errors_carry_paths() {
        let cases = [
            (
                r#"{"ring":{"kind":"Zn","n":4},"module":{"generate":{"kind":"chain","n":3}}}"#,
                "module.generate.kind",
            ),
            (
                r#"{"ring":{"kind":"Zn","n":4,"x":1},"module":{"generate":{"kind":"submodule-lattice","n":4}}}"#,
                "ring.x",
            ),
            (r#"{"ring":{"kind":"Zq","n":4},"module":{}}"#, "ring.kind"),
            (
                r#"{"ring":{"kind":"Zn","n":2},"module":{"size":1,"leq":[[true]],"add":[[0]],"zero":0,"top":0,"action":[[0]]}}"#,
                "module.action",
            ),
            (
                r#"{"ring":{"kind":"Zn","n":1},"module":{"size":1,"leq":[[true]],"add":[[3]],"zero":0,"top":0,"action":[[0]]}}"#,
                "module.add[0][0]",
            ),
            (
                r#"{"ring":{"kind":"Zn","n":1},"module":{"size":1,"leq":[["yes"]],"add":[[0]],"zero":0,"top":0,"action":[[0]]}}"#,
                "module.leq[0][0]",
            ),
            (
                r#"{"ring":{"kind":"Zn","n":1},"module":{"size":1,"leq":[[true]],"add":[[0]],"zero":0,"top":0,"action":[[0]],"extra":1}}"#,
                "module.extra",
            ),
            (r#"{"ring":{"kind":"Zn","n":1}}"#, "$"),
            (
                r#"{"ring":{"kind":"Zn","n":1},"module":{},"more":1}"#,
                "more",
            ),
            ("[1,", "$"),
        ];
        for (text, want) in cases {
            match parse_structure(text) {
                Err(Error::Parse { path, .. }) => assert_eq!(path, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn oversized_ring_is_a_capacity_error() {
        let text = r#"{"ring":{"kind":"Zn","n":65},"module":{"generate":{"kind":"submodule-lattice","n":65}}}"#;
        assert!(matches!(parse_structure(text), Err(Error::Capacity { .. })));
    }

    #[test]
    fn table_ring_round_trip() {
        let raw = models::poly_quotient(2, &[1, 1]);
        let file = StructureFile {
            ring: RingSpec::from_raw(raw.clone()),
            module: ModuleSpec::Tables(RawModule::trivial(raw.size)),
        };
        assert!(matches!(file.ring, RingSpec::Table(_)));
        let text = serialize_structure(&file);
        assert!(text.contains("\"kind\": \"table\""));
        assert_eq!(parse_structure(&text).unwrap(), file);
        assert_eq!(file.expand().unwrap().size(), 1);
    }
}
