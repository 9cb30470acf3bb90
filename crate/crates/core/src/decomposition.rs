//! Primary decompositions `n = q_1 ∧ ... ∧ q_k` and the invariants attached
//! to them: associated and isolated primes, S-components, isolated
//! components, and both uniqueness checks.

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::module::{LeModule, SubmoduleElement};
use crate::primary::{is_primary_element, meet_primaries};
use crate::ring::{minimal_elements, Ideal, MultClosedSet};

/// A primary decomposition of `target`. Components are kept in ascending
/// element index, `radicals[i] = Rad(components[i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryDecomposition<'m> {
    pub target: SubmoduleElement<'m>,
    pub components: Vec<SubmoduleElement<'m>>,
    pub radicals: Vec<Ideal<'m>>,
    pub reduced: bool,
}

/// Meet of a list of elements, `e` for the empty list.
fn meet_or_top<'m>(
    module: &'m LeModule,
    xs: impl IntoIterator<Item = SubmoduleElement<'m>>,
) -> usize {
    xs.into_iter()
        .fold(module.top(), |acc, q| module.meet(acc, q.index()))
}

/// No component lies above the meet of the others, and radicals are
/// pairwise distinct.
pub fn is_reduced(components: &[SubmoduleElement<'_>], radicals: &[Ideal<'_>]) -> bool {
    let Some(first) = components.first() else {
        return false;
    };
    let m = first.module();
    let irredundant = (0..components.len()).all(|i| {
        let others = meet_or_top(
            m,
            components
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| *q),
        );
        !m.leq(others, components[i].index())
    });
    let distinct =
        (0..radicals.len()).all(|i| (i + 1..radicals.len()).all(|j| radicals[i] != radicals[j]));
    irredundant && distinct
}

impl<'m> PrimaryDecomposition<'m> {
    /// Check that `components` are primary and meet to `target`.
    pub fn new(
        target: SubmoduleElement<'m>,
        mut components: Vec<SubmoduleElement<'m>>,
    ) -> Result<PrimaryDecomposition<'m>> {
        if components.is_empty() {
            return Err(Error::usage("a decomposition needs at least one component"));
        }
        components.sort();
        components.dedup();
        if let Some(q) = components.iter().find(|q| !is_primary_element(**q)) {
            return Err(Error::usage(format!("component {q} is not primary")));
        }
        let m = target.module();
        if meet_or_top(m, components.iter().copied()) != target.index() {
            return Err(Error::usage(format!("components do not meet to {target}")));
        }
        let radicals: Vec<Ideal<'m>> = components.iter().map(|q| q.radical()).collect();
        let reduced = is_reduced(&components, &radicals);
        Ok(PrimaryDecomposition {
            target,
            components,
            radicals,
            reduced,
        })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Radicals in canonical ideal order.
    pub fn radical_set(&self) -> Vec<Ideal<'m>> {
        let mut rs = self.radicals.clone();
        rs.sort();
        rs
    }

    /// Meet of the components whose radical lies in `primes` (`e` if none).
    pub fn meet_over(&self, primes: &[Ideal<'_>]) -> SubmoduleElement<'m> {
        let m = self.target.module();
        let picked = self
            .components
            .iter()
            .zip(&self.radicals)
            .filter(|(_, p)| primes.iter().any(|q| q == *p))
            .map(|(c, _)| *c);
        m.submodule(meet_or_top(m, picked))
            .expect("meet of submodule elements")
    }

    /// The component whose radical is `p`.
    pub fn component_for(&self, p: &Ideal<'_>) -> Option<SubmoduleElement<'m>> {
        self.radicals
            .iter()
            .position(|r| r == p)
            .map(|i| self.components[i])
    }
}

/// Every primary element `q ≥ n`, ascending by index.
pub fn primary_elements_above<'m>(n: SubmoduleElement<'m>) -> Vec<SubmoduleElement<'m>> {
    n.module()
        .submodule_elements()
        .into_iter()
        .filter(|q| n.leq(*q) && is_primary_element(*q))
        .collect()
}

fn require_proper(n: SubmoduleElement<'_>) -> Result<()> {
    if n.is_proper() {
        Ok(())
    } else {
        Err(Error::usage(
            "e has no decomposition into proper primary elements",
        ))
    }
}

/// Drop redundant components greedily in index order, then merge
/// equal-radical groups by meet; repeat until nothing changes.
pub fn reduce<'m>(
    target: SubmoduleElement<'m>,
    components: Vec<SubmoduleElement<'m>>,
) -> Result<PrimaryDecomposition<'m>> {
    let m = target.module();
    let mut comps = components;
    comps.sort();
    comps.dedup();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < comps.len() {
            let others = meet_or_top(
                m,
                comps
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, q)| *q),
            );
            if comps.len() > 1 && m.leq(others, comps[i].index()) {
                comps.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
        let radicals: Vec<Ideal<'m>> = comps.iter().map(|q| q.radical()).collect();
        let mut merged: Vec<SubmoduleElement<'m>> = Vec::new();
        let mut done = vec![false; comps.len()];
        for i in 0..comps.len() {
            if done[i] {
                continue;
            }
            let group: Vec<SubmoduleElement<'m>> = (i..comps.len())
                .filter(|&j| radicals[j] == radicals[i])
                .inspect(|&j| done[j] = true)
                .map(|j| comps[j])
                .collect();
            if group.len() > 1 {
                changed = true;
            }
            merged.push(meet_primaries(&group)?);
        }
        merged.sort();
        comps = merged;
        if !changed {
            break;
        }
    }
    PrimaryDecomposition::new(target, comps)
}

/// A reduced primary decomposition of `n`, or `None` if `n` has none.
///
/// `n` is decomposable exactly when the meet of all primary elements above
/// it is `n`; that full pool is then reduced.
pub fn find_reduced_decomposition(
    n: SubmoduleElement<'_>,
) -> Result<Option<PrimaryDecomposition<'_>>> {
    require_proper(n)?;
    let pool = primary_elements_above(n);
    if pool.is_empty() || meet_or_top(n.module(), pool.iter().copied()) != n.index() {
        return Ok(None);
    }
    let d = reduce(n, pool)?;
    if !d.reduced {
        return Err(Error::Counterexample(format!(
            "reduction of {n} left a redundant component"
        )));
    }
    Ok(Some(d))
}

/// Every reduced decomposition of `n`, sorted by length then component
/// indices.
pub fn enumerate_reduced_decompositions(
    n: SubmoduleElement<'_>,
) -> Result<Vec<PrimaryDecomposition<'_>>> {
    require_proper(n)?;
    let m = n.module();
    let pool = primary_elements_above(n);
    let cap = m.limits().max_pool;
    if pool.len() > cap {
        return Err(Error::Capacity {
            what: "primary candidate pool",
            got: pool.len(),
            cap,
        });
    }
    let radicals: Vec<Ideal<'_>> = pool.iter().map(|q| q.radical()).collect();
    let mut search = Search {
        n,
        pool: &pool,
        radicals: &radicals,
        found: Vec::new(),
    };
    search.extend(0, &mut Vec::new(), m.top());
    let mut out = search
        .found
        .into_iter()
        .map(|chosen| {
            let comps = chosen.iter().map(|&i| pool[i]).collect();
            PrimaryDecomposition::new(n, comps)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.components.cmp(&b.components))
    });
    Ok(out)
}

struct Search<'a, 'm> {
    n: SubmoduleElement<'m>,
    pool: &'a [SubmoduleElement<'m>],
    radicals: &'a [Ideal<'m>],
    found: Vec<Vec<usize>>,
}

impl Search<'_, '_> {
    fn module(&self) -> &LeModule {
        self.n.module()
    }

    /// Some chosen component already lies above the meet of the others; it
    /// stays redundant in every extension.
    fn has_redundant(&self, chosen: &[usize]) -> bool {
        let m = self.module();
        chosen.len() > 1
            && chosen.iter().any(|&i| {
                let others = chosen
                    .iter()
                    .filter(|&&j| j != i)
                    .fold(m.top(), |acc, &j| m.meet(acc, self.pool[j].index()));
                m.leq(others, self.pool[i].index())
            })
    }

    fn extend(&mut self, start: usize, chosen: &mut Vec<usize>, meet: usize) {
        if meet == self.n.index() {
            // any further component would lie above n, hence be redundant
            self.found.push(chosen.clone());
            return;
        }
        for i in start..self.pool.len() {
            let q = self.pool[i].index();
            let m = self.module();
            if m.leq(meet, q) || chosen.iter().any(|&j| self.radicals[j] == self.radicals[i]) {
                continue;
            }
            chosen.push(i);
            if !self.has_redundant(chosen) {
                let next = m.meet(meet, q);
                self.extend(i + 1, chosen, next);
            }
            chosen.pop();
        }
    }
}

/// Result of the Laskerian check over proper submodule elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaskerianReport {
    pub laskerian: bool,
    /// First proper submodule element without a primary decomposition.
    pub counterexample: Option<usize>,
    pub checked: usize,
}

/// Whether every proper submodule element is a meet of primary elements.
/// `e` is excluded: a meet of proper elements is never `e`.
pub fn is_laskerian(module: &LeModule) -> LaskerianReport {
    let proper: Vec<SubmoduleElement<'_>> = module
        .submodule_elements()
        .into_iter()
        .filter(|n| n.is_proper())
        .collect();
    let counterexample = proper
        .iter()
        .find(|n| !matches!(find_reduced_decomposition(**n), Ok(Some(_))))
        .map(|n| n.index());
    LaskerianReport {
        laskerian: counterexample.is_none(),
        counterexample,
        checked: proper.len(),
    }
}

/// Associated primes of a decomposition; `isolated[i]` marks the
/// inclusion-minimal ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedPrimes<'m> {
    pub target: SubmoduleElement<'m>,
    pub primes: Vec<Ideal<'m>>,
    pub isolated: Vec<bool>,
}

impl<'m> AssociatedPrimes<'m> {
    pub fn isolated_primes(&self) -> Vec<Ideal<'m>> {
        self.primes
            .iter()
            .zip(&self.isolated)
            .filter(|(_, &iso)| iso)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn contains(&self, p: &Ideal<'_>) -> bool {
        self.primes.iter().any(|q| q == p)
    }
}

pub fn associated_primes<'m>(d: &PrimaryDecomposition<'m>) -> Result<AssociatedPrimes<'m>> {
    if !d.reduced {
        return Err(Error::usage(
            "associated primes need a reduced decomposition",
        ));
    }
    let primes = d.radical_set();
    let minimal = minimal_elements(&primes);
    let isolated = primes.iter().map(|p| minimal.contains(p)).collect();
    Ok(AssociatedPrimes {
        target: d.target,
        primes,
        isolated,
    })
}

/// Minimal primes over `(n:e)`.
pub fn minimal_prime_divisors(n: SubmoduleElement<'_>) -> Result<Vec<Ideal<'_>>> {
    require_proper(n)?;
    n.colon_top().minimal_primes_over()
}

fn check_ring(module: &LeModule, ring: &crate::FiniteRing) -> Result<()> {
    if std::ptr::eq(module.ring(), ring) || module.ring() == ring {
        Ok(())
    } else {
        Err(Error::usage("multiplicative set is over a different ring"))
    }
}

/// `n_S`: join of every `x` with `s·x ≤ n` for some `s ∈ S`.
pub fn s_component<'m>(
    n: SubmoduleElement<'m>,
    s: &MultClosedSet<'_>,
) -> Result<SubmoduleElement<'m>> {
    let m = n.module();
    check_ring(m, s.ring())?;
    let candidates: BitSet = m
        .elements()
        .filter(|&x| s.members().iter().any(|t| m.leq(m.act(t, x), n.index())))
        .collect();
    m.submodule(m.join_set(candidates))
}

/// `q' = ∨{x : (n:x) ⊄ P}` for a prime `P`.
pub fn isolated_component_formula<'m>(
    n: SubmoduleElement<'m>,
    p: &Ideal<'_>,
) -> Result<SubmoduleElement<'m>> {
    let m = n.module();
    check_ring(m, p.ring())?;
    if !p.is_prime() {
        return Err(Error::usage(format!("{p} is not a prime ideal")));
    }
    let candidates: BitSet = m
        .elements()
        .filter(|&x| !n.transporter(x).is_subset(p))
        .collect();
    m.submodule(m.join_set(candidates))
}

fn require_decomposable(n: SubmoduleElement<'_>) -> Result<Vec<PrimaryDecomposition<'_>>> {
    let all = enumerate_reduced_decompositions(n)?;
    if all.is_empty() {
        return Err(Error::usage(format!("{n} has no primary decomposition")));
    }
    Ok(all)
}

/// Report of the transporter characterisation of associated primes.
#[derive(Clone, Debug)]
pub struct FirstUniqueness<'m> {
    pub target: SubmoduleElement<'m>,
    /// Radical set of every enumerated reduced decomposition.
    pub decomposition_radical_sets: Vec<Vec<Ideal<'m>>>,
    /// Primes `P` with `(n:x)` `P`-primary for some `x ≰ n`, with the first
    /// such `x`; canonical order.
    pub transporter_primes: Vec<(Ideal<'m>, usize)>,
    pub holds: bool,
}

/// All reduced decompositions share one radical set, and it equals the set
/// of `P` for which some `(n:x)`, `x ≰ n`, is `P`-primary.
pub fn verify_first_uniqueness(n: SubmoduleElement<'_>) -> Result<FirstUniqueness<'_>> {
    let all = require_decomposable(n)?;
    let m = n.module();
    let mut transporter_primes: Vec<(Ideal<'_>, usize)> = Vec::new();
    for x in m.elements().filter(|&x| !m.leq(x, n.index())) {
        let colon = n.transporter(x);
        if colon.is_primary() {
            let p = colon.radical();
            if !transporter_primes.iter().any(|(q, _)| *q == p) {
                transporter_primes.push((p, x));
            }
        }
    }
    transporter_primes.sort();
    let decomposition_radical_sets: Vec<Vec<Ideal<'_>>> =
        all.iter().map(|d| d.radical_set()).collect();
    let characterised: Vec<Ideal<'_>> = transporter_primes.iter().map(|(p, _)| *p).collect();
    let holds = decomposition_radical_sets
        .iter()
        .all(|s| *s == characterised);
    Ok(FirstUniqueness {
        target: n,
        decomposition_radical_sets,
        transporter_primes,
        holds,
    })
}

#[derive(Clone, Debug)]
pub struct SecondUniqueness<'m> {
    pub target: SubmoduleElement<'m>,
    pub isolated_set: Vec<Ideal<'m>>,
    /// Meet of the components over `isolated_set`, per decomposition.
    pub meets: Vec<SubmoduleElement<'m>>,
    /// `n_S` for `S = R \ ∪ isolated_set`.
    pub s_component: SubmoduleElement<'m>,
    pub holds: bool,
}

/// For a set of isolated primes, the meet of the matching components is the
/// same in every reduced decomposition and equals `n_S`.
pub fn verify_second_uniqueness<'m>(
    n: SubmoduleElement<'m>,
    isolated_set: &[Ideal<'m>],
) -> Result<SecondUniqueness<'m>> {
    let all = require_decomposable(n)?;
    let assoc = associated_primes(&all[0])?;
    let isolated = assoc.isolated_primes();
    if let Some(p) = isolated_set.iter().find(|p| !isolated.contains(p)) {
        return Err(Error::usage(format!(
            "{p} is not an isolated prime divisor of {n}"
        )));
    }
    let meets: Vec<SubmoduleElement<'m>> = all.iter().map(|d| d.meet_over(isolated_set)).collect();
    let s = n.module().ring().complement_of_prime_union(isolated_set)?;
    let s_comp = s_component(n, &s)?;
    let holds = meets.iter().all(|q| *q == s_comp);
    let mut isolated_set = isolated_set.to_vec();
    isolated_set.sort();
    Ok(SecondUniqueness {
        target: n,
        isolated_set,
        meets,
        s_component: s_comp,
        holds,
    })
}

/// Whether `(n:r) = n`. Checked against "r lies in no associated prime";
/// a disagreement is reported as a counterexample.
pub fn saturation_fixpoint_check(n: SubmoduleElement<'_>, r: usize) -> Result<bool> {
    let d = find_reduced_decomposition(n)?
        .ok_or_else(|| Error::usage(format!("{n} has no primary decomposition")))?;
    if r >= n.module().ring().size() {
        return Err(Error::usage(format!("ring element {r} out of range")));
    }
    let fixed = n.residual_by_element(r) == n;
    let avoids = d.radicals.iter().all(|p| !p.contains(r));
    if fixed != avoids {
        return Err(Error::Counterexample(format!(
            "(n:{r}) = n is {fixed} but r avoids every associated prime is {avoids}"
        )));
    }
    Ok(fixed)
}
