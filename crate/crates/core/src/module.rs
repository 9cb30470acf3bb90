//! The le-module structure: lattice, addition, ring action, and the
//! residual/transporter calculus on submodule elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{BitSet, WIDTH};
use crate::error::{Axiom, Error, Result, Violation};
use crate::ring::{first_failure, FiniteRing, Ideal};
use crate::Limits;

/// Unvalidated module tables as stored in a structure file.
///
/// `leq[x][y]` is `x ≤ y`; `action[r][x]` is `r·x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModule {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub leq: Vec<Vec<bool>>,
    pub add: Vec<Vec<usize>>,
    pub zero: usize,
    pub top: usize,
    pub action: Vec<Vec<usize>>,
}

const ORDER_AXIOMS: [Axiom; 6] = [
    Axiom::LeqReflexive,
    Axiom::LeqAntisymmetric,
    Axiom::LeqTransitive,
    Axiom::TopGreatest,
    Axiom::JoinExists,
    Axiom::MeetExists,
];

const MODULE_AXIOMS: [Axiom; 11] = [
    Axiom::AddCommutative,
    Axiom::AddAssociative,
    Axiom::AddIdentity,
    Axiom::S,
    Axiom::M1,
    Axiom::M2,
    Axiom::M3,
    Axiom::M4One,
    Axiom::M4ZeroRing,
    Axiom::M4ZeroModule,
    Axiom::M5,
];

impl RawModule {
    /// The one-element module `{0_M = e}` over a ring of `ring_size` elements.
    pub fn trivial(ring_size: usize) -> RawModule {
        RawModule {
            size: 1,
            names: None,
            leq: vec![vec![true]],
            add: vec![vec![0]],
            zero: 0,
            top: 0,
            action: vec![vec![0]; ring_size],
        }
    }

    fn check_shape(&self, ring_size: usize, limits: &Limits) -> Result<()> {
        let m = self.size;
        if m == 0 {
            return Err(Error::format("module size must be positive"));
        }
        let cap = limits.max_module.min(WIDTH);
        if m > cap {
            return Err(Error::Capacity {
                what: "module size",
                got: m,
                cap,
            });
        }
        let square = |name: &str, rows: usize, cols: usize, lens: Vec<usize>| -> Result<()> {
            if lens.len() != rows {
                return Err(Error::format(format!(
                    "module {name} has {} rows, expected {rows}",
                    lens.len()
                )));
            }
            if let Some(i) = lens.iter().position(|&l| l != cols) {
                return Err(Error::format(format!(
                    "module {name}[{i}] has {} entries, expected {cols}",
                    lens[i]
                )));
            }
            Ok(())
        };
        square("leq", m, m, self.leq.iter().map(Vec::len).collect())?;
        square("add", m, m, self.add.iter().map(Vec::len).collect())?;
        square(
            "action",
            ring_size,
            m,
            self.action.iter().map(Vec::len).collect(),
        )?;
        for (name, table) in [("add", &self.add), ("action", &self.action)] {
            for (i, row) in table.iter().enumerate() {
                if let Some(j) = row.iter().position(|&v| v >= m) {
                    return Err(Error::format(format!(
                        "module {name}[{i}][{j}] = {} is out of range 0..{m}",
                        row[j]
                    )));
                }
            }
        }
        if self.zero >= m || self.top >= m {
            return Err(Error::format("module zero/top index out of range"));
        }
        if let Some(names) = &self.names {
            if names.len() != m {
                return Err(Error::format(format!(
                    "module names has {} entries, expected {m}",
                    names.len()
                )));
            }
        }
        Ok(())
    }

    /// Whether one axiom instance holds. Shapes must already be valid.
    pub fn holds(&self, ring: &FiniteRing, axiom: Axiom, witness: &[usize]) -> bool {
        Tables::new(self).holds(ring, axiom, witness)
    }

    /// First failing instance of each axiom. Join-dependent axioms ((S), (M5))
    /// are only scanned once the order is a lattice with top `top`.
    pub fn violations(&self, ring: &FiniteRing) -> Vec<Violation> {
        let t = Tables::new(self);
        let mut out = Vec::new();
        let scan = |axiom: Axiom, out: &mut Vec<Violation>| {
            let bounds: Vec<usize> = axiom
                .variables()
                .iter()
                .map(|v| {
                    if v.starts_with('r') {
                        ring.size()
                    } else {
                        self.size
                    }
                })
                .collect();
            if let Some(witness) = first_failure(&bounds, |w| t.holds(ring, axiom, w)) {
                out.push(Violation { axiom, witness });
            }
        };
        for axiom in ORDER_AXIOMS {
            scan(axiom, &mut out);
        }
        let lattice_ok = out.is_empty();
        for axiom in MODULE_AXIOMS {
            if matches!(axiom, Axiom::S | Axiom::M5) && !lattice_ok {
                continue;
            }
            scan(axiom, &mut out);
        }
        out
    }
}

/// Precomputed up-sets and bound tables over a raw module.
struct Tables<'a> {
    raw: &'a RawModule,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

impl<'a> Tables<'a> {
    fn new(raw: &'a RawModule) -> Self {
        let m = raw.size;
        let up = (0..m)
            .map(|x| (0..m).filter(|&y| raw.leq[x][y]).collect())
            .collect();
        let down = (0..m)
            .map(|x| (0..m).filter(|&y| raw.leq[y][x]).collect())
            .collect();
        Tables { raw, up, down }
    }

    fn leq(&self, x: usize, y: usize) -> bool {
        self.raw.leq[x][y]
    }

    fn lub(&self, x: usize, y: usize) -> Option<usize> {
        let ub = self.up[x].intersection(self.up[y]);
        ub.iter().find(|&u| ub.is_subset(self.up[u]))
    }

    fn glb(&self, x: usize, y: usize) -> Option<usize> {
        let lb = self.down[x].intersection(self.down[y]);
        lb.iter().find(|&l| lb.is_subset(self.down[l]))
    }

    fn holds(&self, ring: &FiniteRing, axiom: Axiom, w: &[usize]) -> bool {
        let raw = self.raw;
        let add = |x: usize, y: usize| raw.add[x][y];
        let act = |r: usize, x: usize| raw.action[r][x];
        let join = |x: usize, y: usize| self.lub(x, y);
        match axiom {
            Axiom::LeqReflexive => self.leq(w[0], w[0]),
            Axiom::LeqAntisymmetric => {
                !(self.leq(w[0], w[1]) && self.leq(w[1], w[0])) || w[0] == w[1]
            }
            Axiom::LeqTransitive => {
                !(self.leq(w[0], w[1]) && self.leq(w[1], w[2])) || self.leq(w[0], w[2])
            }
            Axiom::TopGreatest => self.leq(w[0], raw.top),
            Axiom::JoinExists => self.lub(w[0], w[1]).is_some(),
            Axiom::MeetExists => self.glb(w[0], w[1]).is_some(),
            Axiom::AddCommutative => add(w[0], w[1]) == add(w[1], w[0]),
            Axiom::AddAssociative => add(add(w[0], w[1]), w[2]) == add(w[0], add(w[1], w[2])),
            Axiom::AddIdentity => add(raw.zero, w[0]) == w[0] && add(w[0], raw.zero) == w[0],
            Axiom::S => {
                let (x, a, b) = (w[0], w[1], w[2]);
                match (join(a, b), join(add(x, a), add(x, b))) {
                    (Some(ab), Some(rhs)) => add(x, ab) == rhs,
                    _ => false,
                }
            }
            Axiom::M1 => {
                let (r, x, y) = (w[0], w[1], w[2]);
                act(r, add(x, y)) == add(act(r, x), act(r, y))
            }
            Axiom::M2 => {
                let (r1, r2, x) = (w[0], w[1], w[2]);
                self.leq(act(ring.add(r1, r2), x), add(act(r1, x), act(r2, x)))
            }
            Axiom::M3 => {
                let (r1, r2, x) = (w[0], w[1], w[2]);
                act(ring.mul(r1, r2), x) == act(r1, act(r2, x))
            }
            Axiom::M4One => act(ring.one(), w[0]) == w[0],
            Axiom::M4ZeroRing => act(ring.zero(), w[0]) == raw.zero,
            Axiom::M4ZeroModule => act(w[0], raw.zero) == raw.zero,
            Axiom::M5 => {
                let (r, a, b) = (w[0], w[1], w[2]);
                match (join(a, b), join(act(r, a), act(r, b))) {
                    (Some(ab), Some(rhs)) => act(r, ab) == rhs,
                    _ => false,
                }
            }
            _ => panic!("{axiom} is not a module axiom"),
        }
    }
}

/// A validated finite le-module over its ring.
#[derive(Clone, Debug)]
pub struct LeModule {
    ring: FiniteRing,
    size: usize,
    names: Option<Vec<String>>,
    up: Vec<BitSet>,
    join: Vec<usize>,
    meet: Vec<usize>,
    add: Vec<usize>,
    action: Vec<usize>,
    zero: usize,
    top: usize,
    submodules: BitSet,
    limits: Limits,
}

impl LeModule {
    pub fn new(ring: FiniteRing, raw: &RawModule) -> Result<LeModule> {
        LeModule::with_limits(ring, raw, Limits::default())
    }

    pub fn with_limits(ring: FiniteRing, raw: &RawModule, limits: Limits) -> Result<LeModule> {
        raw.check_shape(ring.size(), &limits)?;
        let violations = raw.violations(&ring);
        if !violations.is_empty() {
            return Err(Error::Violations(violations));
        }
        let m = raw.size;
        let t = Tables::new(raw);
        let mut join = vec![0; m * m];
        let mut meet = vec![0; m * m];
        for x in 0..m {
            for y in 0..m {
                join[x * m + y] = t.lub(x, y).expect("lattice checked");
                meet[x * m + y] = t.glb(x, y).expect("lattice checked");
            }
        }
        let mut module = LeModule {
            size: m,
            names: raw.names.clone(),
            up: t.up.clone(),
            join,
            meet,
            add: raw.add.iter().flatten().copied().collect(),
            action: raw.action.iter().flatten().copied().collect(),
            zero: raw.zero,
            top: raw.top,
            submodules: BitSet::EMPTY,
            limits,
            ring,
        };
        module.submodules = (0..m)
            .filter(|&x| module.submodule_failure(x).is_none())
            .collect();
        Ok(module)
    }

    pub fn to_raw(&self) -> RawModule {
        let m = self.size;
        RawModule {
            size: m,
            names: self.names.clone(),
            leq: (0..m)
                .map(|x| (0..m).map(|y| self.leq(x, y)).collect())
                .collect(),
            add: self.add.chunks(m).map(<[usize]>::to_vec).collect(),
            zero: self.zero,
            top: self.top,
            action: self.action.chunks(m).map(<[usize]>::to_vec).collect(),
        }
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn set_limits(&mut self, limits: Limits) {
        self.limits = limits;
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// Index of `0_M`.
    pub fn zero(&self) -> usize {
        self.zero
    }

    /// Index of the greatest element `e`.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name, falling back to the index.
    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    /// Resolve a display name, `0_M`, `e`, or an index. Names win over
    /// indices; the flag reports that `key` was also a valid, different index.
    pub fn resolve(&self, key: &str) -> Result<(usize, bool)> {
        let as_index = key.parse::<usize>().ok().filter(|&i| i < self.size);
        if let Some(pos) = self.names.iter().flatten().position(|n| n == key) {
            return Ok((pos, as_index.is_some_and(|i| i != pos)));
        }
        match key {
            "0_M" => return Ok((self.zero, false)),
            "e" => return Ok((self.top, false)),
            _ => {}
        }
        as_index
            .map(|i| (i, false))
            .ok_or_else(|| Error::usage(format!("no element named or indexed {key:?}")))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// `{y : x ≤ y}`.
    pub fn up_set(&self, x: usize) -> BitSet {
        self.up[x]
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size + y]
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size + y]
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y]
    }

    /// `r·x`.
    #[inline]
    pub fn act(&self, r: usize, x: usize) -> usize {
        self.action[r * self.size + x]
    }

    /// Least upper bound of a nonempty set.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> Result<usize> {
        xs.into_iter()
            .reduce(|a, b| self.join(a, b))
            .ok_or_else(|| Error::usage("join of an empty set"))
    }

    /// Greatest lower bound of a nonempty set.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> Result<usize> {
        xs.into_iter()
            .reduce(|a, b| self.meet(a, b))
            .ok_or_else(|| Error::usage("meet of an empty set"))
    }

    /// Join over a candidate set known to contain `0_M`.
    pub(crate) fn join_set(&self, xs: BitSet) -> usize {
        self.join_all(xs).expect("candidate set contains 0_M")
    }

    pub fn is_submodule_element(&self, x: usize) -> bool {
        self.submodules.contains(x)
    }

    /// Why `x` is not a submodule element: `x+x ≰ x`, or `r·x ≰ x` for the
    /// first such `r`.
    pub fn submodule_failure(&self, x: usize) -> Option<SubmoduleFailure> {
        let xx = self.add(x, x);
        if !self.leq(xx, x) {
            return Some(SubmoduleFailure::NotIdempotent { sum: xx });
        }
        self.ring
            .elements()
            .find(|&r| !self.leq(self.act(r, x), x))
            .map(|r| SubmoduleFailure::NotAbsorbing {
                r,
                image: self.act(r, x),
            })
    }

    pub fn submodule_elements(&self) -> Vec<SubmoduleElement<'_>> {
        self.submodules
            .iter()
            .map(|index| SubmoduleElement {
                module: self,
                index,
            })
            .collect()
    }

    pub fn submodule_set(&self) -> BitSet {
        self.submodules
    }

    pub fn submodule(&self, x: usize) -> Result<SubmoduleElement<'_>> {
        if x >= self.size {
            return Err(Error::usage(format!("element index {x} out of range")));
        }
        match self.submodule_failure(x) {
            None => Ok(SubmoduleElement {
                module: self,
                index: x,
            }),
            Some(why) => Err(Error::usage(format!(
                "{} is not a submodule element: {why}",
                self.name(x)
            ))),
        }
    }

    /// The submodule element `e`.
    pub fn top_element(&self) -> SubmoduleElement<'_> {
        SubmoduleElement {
            module: self,
            index: self.top,
        }
    }

    /// The submodule element `0_M`.
    pub fn zero_element(&self) -> SubmoduleElement<'_> {
        SubmoduleElement {
            module: self,
            index: self.zero,
        }
    }

    fn check_ring(&self, ideal: &Ideal<'_>) -> Result<()> {
        if std::ptr::eq(ideal.ring(), &self.ring) || *ideal.ring() == self.ring {
            Ok(())
        } else {
            Err(Error::usage("ideal is over a different ring"))
        }
    }

    /// Additive closure of `{a·x : a ∈ A}` (sums of one or more terms).
    pub fn action_sums(&self, ideal: &Ideal<'_>, x: usize) -> BitSet {
        let seeds: BitSet = ideal.members().iter().map(|a| self.act(a, x)).collect();
        let mut set = seeds;
        let mut frontier: Vec<usize> = seeds.iter().collect();
        while let Some(s) = frontier.pop() {
            for t in seeds {
                let u = self.add(s, t);
                if !set.contains(u) {
                    set.insert(u);
                    frontier.push(u);
                }
            }
        }
        set
    }

    /// `A·x`: the join of all finite sums `a_1 x + ... + a_k x` with `a_i ∈ A`.
    pub fn ideal_action(&self, ideal: &Ideal<'_>, x: usize) -> Result<SubmoduleElement<'_>> {
        self.check_ring(ideal)?;
        let index = self.join_set(self.action_sums(ideal, x));
        debug_assert!(self.is_submodule_element(index));
        Ok(SubmoduleElement {
            module: self,
            index,
        })
    }

    /// Ring elements `r` with `r·x ≤ l`. An ideal whenever `l` is a
    /// submodule element.
    pub(crate) fn transporter_set(&self, l: usize, x: usize) -> BitSet {
        self.ring
            .elements()
            .filter(|&r| self.leq(self.act(r, x), l))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubmoduleFailure {
    NotIdempotent { sum: usize },
    NotAbsorbing { r: usize, image: usize },
}

impl fmt::Display for SubmoduleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubmoduleFailure::NotIdempotent { sum } => write!(f, "x+x = {sum} is not below x"),
            SubmoduleFailure::NotAbsorbing { r, image } => {
                write!(f, "{r}·x = {image} is not below x")
            }
        }
    }
}

/// An element `n` with `n + n ≤ n` and `r·n ≤ n` for every ring element `r`.
#[derive(Clone, Copy)]
pub struct SubmoduleElement<'m> {
    module: &'m LeModule,
    index: usize,
}

impl PartialEq for SubmoduleElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && std::ptr::eq(self.module, other.module)
    }
}

impl Eq for SubmoduleElement<'_> {}

impl PartialOrd for SubmoduleElement<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical (index) order, not the lattice order.
impl Ord for SubmoduleElement<'_> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index.cmp(&other.index)
    }
}

impl std::hash::Hash for SubmoduleElement<'_> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.index.hash(state);
    }
}

impl fmt::Debug for SubmoduleElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.module.name(self.index))
    }
}

impl fmt::Display for SubmoduleElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.module.name(self.index))
    }
}

impl<'m> SubmoduleElement<'m> {
    pub fn module(&self) -> &'m LeModule {
        self.module
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_proper(&self) -> bool {
        self.index != self.module.top
    }

    pub fn leq(&self, other: SubmoduleElement<'_>) -> bool {
        self.module.leq(self.index, other.index)
    }

    fn wrap(&self, index: usize) -> SubmoduleElement<'m> {
        debug_assert!(self.module.is_submodule_element(index));
        SubmoduleElement {
            module: self.module,
            index,
        }
    }

    pub fn meet(&self, other: SubmoduleElement<'_>) -> SubmoduleElement<'m> {
        self.wrap(self.module.meet(self.index, other.index))
    }

    /// `l + n`, again a submodule element.
    pub fn sum(&self, other: SubmoduleElement<'_>) -> SubmoduleElement<'m> {
        self.wrap(self.module.add(self.index, other.index))
    }

    /// `(n:r)`: the join of every `x` with `r·x ≤ n`.
    pub fn residual_by_element(&self, r: usize) -> SubmoduleElement<'m> {
        let m = self.module;
        let candidates = m
            .elements()
            .filter(|&x| m.leq(m.act(r, x), self.index))
            .collect();
        self.wrap(m.join_set(candidates))
    }

    /// `(n:A)`: the join of every `x` with `A·x ≤ n`, tested as `a·x ≤ n`
    /// for all `a ∈ A`.
    pub fn residual_by_ideal(&self, ideal: &Ideal<'_>) -> Result<SubmoduleElement<'m>> {
        let m = self.module;
        m.check_ring(ideal)?;
        let candidates = m
            .elements()
            .filter(|&x| {
                ideal
                    .members()
                    .iter()
                    .all(|a| m.leq(m.act(a, x), self.index))
            })
            .collect();
        Ok(self.wrap(m.join_set(candidates)))
    }

    /// `(n:x) = {r : r·x ≤ n}`.
    pub fn transporter(&self, x: usize) -> Ideal<'m> {
        let ring = self.module.ring();
        ring.ideal(self.module.transporter_set(self.index, x))
            .expect("transporter into a submodule element is an ideal")
    }

    /// `(n:e)`.
    pub fn colon_top(&self) -> Ideal<'m> {
        self.transporter(self.module.top)
    }

    /// `Rad(n) = Rad((n:e))`.
    pub fn radical(&self) -> Ideal<'m> {
        self.colon_top().radical()
    }
}
