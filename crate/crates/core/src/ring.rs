//! Finite commutative rings with 1, given by operation tables, and their ideals.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bits::{BitSet, WIDTH};
use crate::error::{Axiom, Error, Result, Violation};
use crate::Limits;

/// Unvalidated ring tables, exactly as they appear in a structure file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRing {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

impl RawRing {
    /// Tables of `Z/nZ`; element `i` is the residue `i`.
    pub fn zn(n: usize) -> RawRing {
        assert!(n >= 1, "Z_n needs n >= 1");
        let table = |f: fn(usize, usize) -> usize| {
            (0..n)
                .map(|a| (0..n).map(|b| f(a, b) % n).collect())
                .collect()
        };
        RawRing {
            size: n,
            add: table(|a, b| a + b),
            mul: table(|a, b| a * b),
            zero: 0,
            one: 1 % n,
        }
    }

    fn check_shape(&self, limits: &Limits) -> Result<()> {
        let k = self.size;
        if k == 0 {
            return Err(Error::format("ring size must be positive"));
        }
        if k > limits.max_ring.min(WIDTH) {
            return Err(Error::Capacity {
                what: "ring size",
                got: k,
                cap: limits.max_ring.min(WIDTH),
            });
        }
        for (name, table) in [("add", &self.add), ("mul", &self.mul)] {
            if table.len() != k {
                return Err(Error::format(format!(
                    "ring {name} table has {} rows, expected {k}",
                    table.len()
                )));
            }
            for (i, row) in table.iter().enumerate() {
                if row.len() != k {
                    return Err(Error::format(format!(
                        "ring {name}[{i}] has {} entries, expected {k}",
                        row.len()
                    )));
                }
                if let Some(j) = row.iter().position(|&v| v >= k) {
                    return Err(Error::format(format!(
                        "ring {name}[{i}][{j}] = {} is out of range 0..{k}",
                        row[j]
                    )));
                }
            }
        }
        if self.zero >= k || self.one >= k {
            return Err(Error::format("ring zero/one index out of range"));
        }
        Ok(())
    }

    /// Whether the axiom instance at `witness` holds. Shape must already be valid.
    pub fn holds(&self, axiom: Axiom, w: &[usize]) -> bool {
        let add = |a: usize, b: usize| self.add[a][b];
        let mul = |a: usize, b: usize| self.mul[a][b];
        match axiom {
            Axiom::RingAddCommutative => add(w[0], w[1]) == add(w[1], w[0]),
            Axiom::RingAddAssociative => add(add(w[0], w[1]), w[2]) == add(w[0], add(w[1], w[2])),
            Axiom::RingAddIdentity => add(self.zero, w[0]) == w[0] && add(w[0], self.zero) == w[0],
            Axiom::RingAddInverse => (0..self.size).any(|b| add(w[0], b) == self.zero),
            Axiom::RingMulCommutative => mul(w[0], w[1]) == mul(w[1], w[0]),
            Axiom::RingMulAssociative => mul(mul(w[0], w[1]), w[2]) == mul(w[0], mul(w[1], w[2])),
            Axiom::RingMulIdentity => mul(self.one, w[0]) == w[0] && mul(w[0], self.one) == w[0],
            Axiom::RingDistributive => {
                let (a, b, c) = (w[0], w[1], w[2]);
                mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
                    && mul(add(b, c), a) == add(mul(b, a), mul(c, a))
            }
            _ => panic!("{axiom} is not a ring axiom"),
        }
    }

    /// First failing instance of every ring axiom, in a fixed axiom order.
    pub fn violations(&self) -> Vec<Violation> {
        const AXIOMS: [Axiom; 8] = [
            Axiom::RingAddCommutative,
            Axiom::RingAddAssociative,
            Axiom::RingAddIdentity,
            Axiom::RingAddInverse,
            Axiom::RingMulCommutative,
            Axiom::RingMulAssociative,
            Axiom::RingMulIdentity,
            Axiom::RingDistributive,
        ];
        AXIOMS
            .iter()
            .filter_map(|&axiom| {
                let arity = axiom.variables().len();
                first_failure(&vec![self.size; arity], |w| self.holds(axiom, w))
                    .map(|witness| Violation { axiom, witness })
            })
            .collect()
    }
}

/// Lexicographically first tuple (with per-position bounds) where `ok` fails.
pub(crate) fn first_failure(
    bounds: &[usize],
    mut ok: impl FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    if bounds.contains(&0) {
        return None;
    }
    let mut t = vec![0; bounds.len()];
    loop {
        if !ok(&t) {
            return Some(t);
        }
        let mut i = t.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < bounds[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

/// A validated finite commutative ring with 1.
#[derive(Clone, Debug)]
pub struct FiniteRing {
    size: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
    ideals: OnceLock<Vec<BitSet>>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.zero == other.zero
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
    }
}

impl Eq for FiniteRing {}

impl FiniteRing {
    pub fn new(raw: &RawRing) -> Result<FiniteRing> {
        FiniteRing::with_limits(raw, &Limits::default())
    }

    pub fn with_limits(raw: &RawRing, limits: &Limits) -> Result<FiniteRing> {
        raw.check_shape(limits)?;
        let violations = raw.violations();
        if !violations.is_empty() {
            return Err(Error::Violations(violations));
        }
        let k = raw.size;
        let add: Vec<usize> = raw.add.iter().flatten().copied().collect();
        let mul: Vec<usize> = raw.mul.iter().flatten().copied().collect();
        let neg = (0..k)
            .map(|a| (0..k).find(|&b| add[a * k + b] == raw.zero).unwrap())
            .collect();
        Ok(FiniteRing {
            size: k,
            add,
            mul,
            neg,
            zero: raw.zero,
            one: raw.one,
            ideals: OnceLock::new(),
        })
    }

    pub fn zn(n: usize) -> Result<FiniteRing> {
        if n == 0 {
            return Err(Error::usage("Z_n needs n >= 1"));
        }
        let limits = Limits::default();
        if n > limits.max_ring {
            return Err(Error::Capacity {
                what: "ring size",
                got: n,
                cap: limits.max_ring,
            });
        }
        FiniteRing::new(&RawRing::zn(n))
    }

    pub fn to_raw(&self) -> RawRing {
        let k = self.size;
        let rows = |t: &[usize]| t.chunks(k).map(<[usize]>::to_vec).collect();
        RawRing {
            size: k,
            add: rows(&self.add),
            mul: rows(&self.mul),
            zero: self.zero,
            one: self.one,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `a^e` with `a^0 = 1`.
    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(self.one, |acc, _| self.mul(acc, a))
    }

    /// The distinct positive powers `a, a^2, ...` up to the first repeat.
    pub fn powers(&self, a: usize) -> BitSet {
        let mut seen = BitSet::EMPTY;
        let mut p = a;
        while !seen.contains(p) {
            seen.insert(p);
            p = self.mul(p, a);
        }
        seen
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.elements().any(|b| self.mul(a, b) == self.one)
    }

    pub fn all(&self) -> BitSet {
        BitSet::full(self.size)
    }

    /// Closure of `seed ∪ {0}` under addition. In a finite ring this is the
    /// additive subgroup generated by `seed`.
    pub fn additive_closure(&self, seed: BitSet) -> BitSet {
        let mut set = seed.with(self.zero);
        let mut frontier: Vec<usize> = set.iter().collect();
        while let Some(a) = frontier.pop() {
            for g in seed {
                let s = self.add(a, g);
                if !set.contains(s) {
                    set.insert(s);
                    frontier.push(s);
                }
            }
        }
        set
    }

    /// Smallest ideal containing `gens`.
    pub fn ideal_generated(&self, gens: BitSet) -> Ideal<'_> {
        let mut multiples = BitSet::EMPTY;
        for g in gens {
            for r in self.elements() {
                multiples.insert(self.mul(r, g));
            }
        }
        Ideal {
            ring: self,
            members: self.additive_closure(multiples),
        }
    }

    pub fn zero_ideal(&self) -> Ideal<'_> {
        Ideal {
            ring: self,
            members: BitSet::singleton(self.zero),
        }
    }

    pub fn unit_ideal(&self) -> Ideal<'_> {
        Ideal {
            ring: self,
            members: self.all(),
        }
    }

    /// Wrap a member set, checking the ideal invariants.
    pub fn ideal(&self, members: BitSet) -> Result<Ideal<'_>> {
        if !members.is_subset(self.all()) {
            return Err(Error::usage("ideal members out of ring range"));
        }
        let ideal = Ideal {
            ring: self,
            members,
        };
        if ideal.satisfies_invariants() {
            Ok(ideal)
        } else {
            Err(Error::usage(format!("{members:?} is not an ideal")))
        }
    }

    /// Every ideal, ascending by member bitset.
    pub fn ideals(&self) -> Vec<Ideal<'_>> {
        self.ideal_sets()
            .iter()
            .map(|&members| Ideal {
                ring: self,
                members,
            })
            .collect()
    }

    fn ideal_sets(&self) -> &[BitSet] {
        self.ideals.get_or_init(|| {
            let mut found: Vec<BitSet> = Vec::new();
            let push = |s: BitSet, found: &mut Vec<BitSet>| {
                if !found.contains(&s) {
                    found.push(s);
                }
            };
            for a in self.elements() {
                push(
                    self.ideal_generated(BitSet::singleton(a)).members,
                    &mut found,
                );
                for b in a + 1..self.size {
                    push(
                        self.ideal_generated(BitSet::from_indices([a, b])).members,
                        &mut found,
                    );
                }
            }
            // every ideal is a finite sum of principal ideals
            let mut i = 0;
            while i < found.len() {
                for j in 0..i {
                    let sum = self.additive_closure(found[i].union(found[j]));
                    push(sum, &mut found);
                }
                i += 1;
            }
            found.sort();
            found
        })
    }

    /// `R \ (P_1 ∪ ... ∪ P_k)`; every `P_i` must be prime.
    pub fn complement_of_prime_union(&self, primes: &[Ideal<'_>]) -> Result<MultClosedSet<'_>> {
        let mut union = BitSet::EMPTY;
        for p in primes {
            self.check_owns(p)?;
            if !p.is_prime() {
                return Err(Error::usage(format!("{p} is not a prime ideal")));
            }
            union = union.union(p.members);
        }
        Ok(MultClosedSet {
            ring: self,
            members: self.all().difference(union),
        })
    }

    fn check_owns(&self, ideal: &Ideal<'_>) -> Result<()> {
        if same_ring(self, ideal.ring) {
            Ok(())
        } else {
            Err(Error::usage("ideal belongs to a different ring"))
        }
    }
}

fn same_ring(a: &FiniteRing, b: &FiniteRing) -> bool {
    std::ptr::eq(a, b) || a == b
}

/// An ideal of a [`FiniteRing`], stored as a member bitset.
#[derive(Clone, Copy)]
pub struct Ideal<'r> {
    ring: &'r FiniteRing,
    members: BitSet,
}

impl PartialEq for Ideal<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && same_ring(self.ring, other.ring)
    }
}

impl Eq for Ideal<'_> {}

impl PartialOrd for Ideal<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ideal<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members.cmp(&other.members)
    }
}

impl Hash for Ideal<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl fmt::Debug for Ideal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{:?}", self.members)
    }
}

/// `(g)` for the smallest single generator when the ideal is principal,
/// otherwise the member list.
impl fmt::Display for Ideal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.principal_generator() {
            Some(g) => write!(f, "({g})"),
            None => {
                let items: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
                write!(f, "{{{}}}", items.join(","))
            }
        }
    }
}

impl<'r> Ideal<'r> {
    pub fn ring(&self) -> &'r FiniteRing {
        self.ring
    }

    pub fn members(&self) -> BitSet {
        self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_proper(&self) -> bool {
        !self.contains(self.ring.one)
    }

    pub fn is_subset(&self, other: &Ideal<'_>) -> bool {
        self.members.is_subset(other.members)
    }

    pub fn principal_generator(&self) -> Option<usize> {
        self.members
            .iter()
            .find(|&g| self.ring.ideal_generated(BitSet::singleton(g)).members == self.members)
    }

    pub fn satisfies_invariants(&self) -> bool {
        let r = self.ring;
        self.contains(r.zero)
            && self.members.iter().all(|a| {
                self.contains(r.neg(a))
                    && self.members.iter().all(|b| self.contains(r.add(a, b)))
                    && r.elements().all(|s| self.contains(r.mul(s, a)))
            })
    }

    fn same(&self, other: &Ideal<'_>) -> Result<()> {
        if same_ring(self.ring, other.ring) {
            Ok(())
        } else {
            Err(Error::usage("ideals belong to different rings"))
        }
    }

    /// `A + B = {a + b}`.
    pub fn sum(&self, other: &Ideal<'_>) -> Result<Ideal<'r>> {
        self.same(other)?;
        let r = self.ring;
        let mut members = BitSet::EMPTY;
        for a in self.members {
            for b in other.members {
                members.insert(r.add(a, b));
            }
        }
        Ok(Ideal { ring: r, members })
    }

    /// Ideal generated by the products `ab`.
    pub fn product(&self, other: &Ideal<'_>) -> Result<Ideal<'r>> {
        self.same(other)?;
        let r = self.ring;
        let mut products = BitSet::EMPTY;
        for a in self.members {
            for b in other.members {
                products.insert(r.mul(a, b));
            }
        }
        // products of ideal members already absorb ring multiples
        Ok(Ideal {
            ring: r,
            members: r.additive_closure(products),
        })
    }

    pub fn intersect(&self, other: &Ideal<'_>) -> Result<Ideal<'r>> {
        self.same(other)?;
        Ok(Ideal {
            ring: self.ring,
            members: self.members.intersection(other.members),
        })
    }

    /// `{a : a^m ∈ I for some m ≥ 1}`.
    pub fn radical(&self) -> Ideal<'r> {
        let members = self
            .ring
            .elements()
            .filter(|&a| self.contains_some_power(a))
            .collect();
        Ideal {
            ring: self.ring,
            members,
        }
    }

    /// Walks `a, a^2, ...` until it enters `I` or cycles.
    pub fn contains_some_power(&self, a: usize) -> bool {
        let r = self.ring;
        let mut seen = BitSet::EMPTY;
        let mut p = a;
        loop {
            if self.contains(p) {
                return true;
            }
            if seen.contains(p) {
                return false;
            }
            seen.insert(p);
            p = r.mul(p, a);
        }
    }

    pub fn is_prime(&self) -> bool {
        self.prime_witness().is_none() && self.is_proper()
    }

    /// First `(a, b)` with `ab ∈ P`, `a ∉ P`, `b ∉ P`.
    pub fn prime_witness(&self) -> Option<(usize, usize)> {
        let r = self.ring;
        r.elements()
            .flat_map(|a| r.elements().map(move |b| (a, b)))
            .find(|&(a, b)| self.contains(r.mul(a, b)) && !self.contains(a) && !self.contains(b))
    }

    pub fn is_primary(&self) -> bool {
        self.is_proper() && self.primary_witness().is_none()
    }

    /// First `(a, b)` with `ab ∈ I`, `b ∉ I` and no power of `a` in `I`.
    pub fn primary_witness(&self) -> Option<(usize, usize)> {
        let r = self.ring;
        let rad = self.radical();
        r.elements()
            .flat_map(|a| r.elements().map(move |b| (a, b)))
            .find(|&(a, b)| self.contains(r.mul(a, b)) && !self.contains(b) && !rad.contains(a))
    }

    pub fn is_maximal(&self) -> bool {
        self.is_proper()
            && !self
                .ring
                .ideal_sets()
                .iter()
                .any(|&j| j != self.members && j != self.ring.all() && self.members.is_subset(j))
    }

    /// Inclusion-minimal primes containing `I`, ascending.
    pub fn minimal_primes_over(&self) -> Result<Vec<Ideal<'r>>> {
        if !self.is_proper() {
            return Err(Error::usage("no prime ideal contains the unit ideal"));
        }
        let primes: Vec<Ideal<'r>> = self
            .ring
            .ideals()
            .into_iter()
            .filter(|p| self.is_subset(p) && p.is_prime())
            .collect();
        Ok(minimal_elements(&primes))
    }
}

/// Inclusion-minimal members of a list of ideals, in input order.
pub fn minimal_elements<'r>(ideals: &[Ideal<'r>]) -> Vec<Ideal<'r>> {
    ideals
        .iter()
        .filter(|p| {
            !ideals
                .iter()
                .any(|q| q.members != p.members && q.is_subset(p))
        })
        .copied()
        .collect()
}

/// A multiplicatively closed subset of a ring.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct MultClosedSet<'r> {
    ring: &'r FiniteRing,
    members: BitSet,
}

impl fmt::Debug for MultClosedSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultClosedSet{:?}", self.members)
    }
}

impl<'r> MultClosedSet<'r> {
    pub fn new(ring: &'r FiniteRing, members: BitSet) -> Result<MultClosedSet<'r>> {
        if !members.is_subset(ring.all()) {
            return Err(Error::usage("set members out of ring range"));
        }
        let set = MultClosedSet { ring, members };
        if !set.contains(ring.one) {
            return Err(Error::usage("multiplicatively closed set must contain 1"));
        }
        if let Some((s, t)) = set.closure_witness() {
            return Err(Error::usage(format!(
                "set is not multiplicatively closed: {s}*{t} = {} is missing",
                ring.mul(s, t)
            )));
        }
        Ok(set)
    }

    /// `{1, s, s^2, ...}`.
    pub fn powers_of(ring: &'r FiniteRing, s: usize) -> MultClosedSet<'r> {
        MultClosedSet {
            ring,
            members: ring.powers(s).with(ring.one),
        }
    }

    pub fn ring(&self) -> &'r FiniteRing {
        self.ring
    }

    pub fn members(&self) -> BitSet {
        self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn meets(&self, ideal: &Ideal<'_>) -> bool {
        !self.members.intersection(ideal.members).is_empty()
    }

    fn closure_witness(&self) -> Option<(usize, usize)> {
        self.members
            .iter()
            .flat_map(|s| self.members.iter().map(move |t| (s, t)))
            .find(|&(s, t)| !self.contains(self.ring.mul(s, t)))
    }

    pub fn satisfies_invariants(&self) -> bool {
        self.contains(self.ring.one) && self.closure_witness().is_none()
    }
}
