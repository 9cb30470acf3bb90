use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Tables of the wrong shape or with out-of-range entries.
    #[error("format error: {0}")]
    Format(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    /// The tables are well-formed but some axiom fails.
    #[error("{} axiom violation(s); first: {}", .0.len(), .0[0])]
    Violations(Vec<Violation>),

    /// An operation was called outside its precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// A property that holds in every le-module failed on this instance.
    #[error("property violated: {0}")]
    Counterexample(String),

    #[error("capacity exceeded: {what} is {got}, cap is {cap}")]
    Capacity {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Error {
        Error::Usage(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Error {
        Error::Format(msg.into())
    }
}

/// Named axiom instances checked by the ring and module validators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    // ring
    #[serde(rename = "ring-add-commutative")]
    RingAddCommutative,
    #[serde(rename = "ring-add-associative")]
    RingAddAssociative,
    #[serde(rename = "ring-add-identity")]
    RingAddIdentity,
    #[serde(rename = "ring-add-inverse")]
    RingAddInverse,
    #[serde(rename = "ring-mul-commutative")]
    RingMulCommutative,
    #[serde(rename = "ring-mul-associative")]
    RingMulAssociative,
    #[serde(rename = "ring-mul-identity")]
    RingMulIdentity,
    #[serde(rename = "ring-distributive")]
    RingDistributive,
    // lattice
    #[serde(rename = "leq-reflexive")]
    LeqReflexive,
    #[serde(rename = "leq-antisymmetric")]
    LeqAntisymmetric,
    #[serde(rename = "leq-transitive")]
    LeqTransitive,
    #[serde(rename = "top-greatest")]
    TopGreatest,
    #[serde(rename = "join-exists")]
    JoinExists,
    #[serde(rename = "meet-exists")]
    MeetExists,
    // monoid
    #[serde(rename = "add-commutative")]
    AddCommutative,
    #[serde(rename = "add-associative")]
    AddAssociative,
    #[serde(rename = "add-identity")]
    AddIdentity,
    // le-module
    #[serde(rename = "S")]
    S,
    #[serde(rename = "M1")]
    M1,
    #[serde(rename = "M2")]
    M2,
    #[serde(rename = "M3")]
    M3,
    #[serde(rename = "M4-one")]
    M4One,
    #[serde(rename = "M4-zero-ring")]
    M4ZeroRing,
    #[serde(rename = "M4-zero-module")]
    M4ZeroModule,
    #[serde(rename = "M5")]
    M5,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        use Axiom::*;
        match self {
            RingAddCommutative => "ring-add-commutative",
            RingAddAssociative => "ring-add-associative",
            RingAddIdentity => "ring-add-identity",
            RingAddInverse => "ring-add-inverse",
            RingMulCommutative => "ring-mul-commutative",
            RingMulAssociative => "ring-mul-associative",
            RingMulIdentity => "ring-mul-identity",
            RingDistributive => "ring-distributive",
            LeqReflexive => "leq-reflexive",
            LeqAntisymmetric => "leq-antisymmetric",
            LeqTransitive => "leq-transitive",
            TopGreatest => "top-greatest",
            JoinExists => "join-exists",
            MeetExists => "meet-exists",
            AddCommutative => "add-commutative",
            AddAssociative => "add-associative",
            AddIdentity => "add-identity",
            S => "S",
            M1 => "M1",
            M2 => "M2",
            M3 => "M3",
            M4One => "M4-one",
            M4ZeroRing => "M4-zero-ring",
            M4ZeroModule => "M4-zero-module",
            M5 => "M5",
        }
    }

    /// Variable names of the witness tuple, in order. `r*` range over the
    /// ring, everything else over the module.
    pub fn variables(self) -> &'static [&'static str] {
        use Axiom::*;
        match self {
            RingAddCommutative | RingMulCommutative => &["a", "b"],
            RingAddAssociative | RingMulAssociative | RingDistributive => &["a", "b", "c"],
            RingAddIdentity | RingAddInverse | RingMulIdentity => &["a"],
            LeqReflexive | TopGreatest => &["x"],
            LeqAntisymmetric | JoinExists | MeetExists | AddCommutative => &["x", "y"],
            LeqTransitive | AddAssociative => &["x", "y", "z"],
            AddIdentity => &["x"],
            S => &["x", "a", "b"],
            M1 => &["r", "x", "y"],
            M2 | M3 => &["r1", "r2", "x"],
            M4One | M4ZeroRing => &["x"],
            M4ZeroModule => &["r"],
            M5 => &["r", "a", "b"],
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failing axiom instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) fails at ", self.axiom)?;
        for (i, (name, v)) in self.axiom.variables().iter().zip(&self.witness).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={v}")?;
        }
        Ok(())
    }
}
