//! The property suite run by `lemodule verify`.
//!
//! Properties run in a fixed order, grouped in three sections:
//!
//! 1. module laws: monotonicity of the action, submodule-element facts, the
//!    ideal-action, residual and transporter laws, and radicals of elements;
//! 2. classification: prime and primary submodule elements against the
//!    ideal theory of the ring;
//! 3. decomposition: reduction, enumeration, both uniqueness checks,
//!    isolated components, S-components and saturation.
//!
//! Each property is tallied over every applicable argument tuple and keeps
//! its first failure. Facts that are logged rather than asserted (converse
//! instances, embedded components, non-decomposable elements) go to
//! `notes`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::decomposition::{
    associated_primes, enumerate_reduced_decompositions, find_reduced_decomposition, is_laskerian,
    isolated_component_formula, minimal_prime_divisors, s_component, saturation_fixpoint_check,
    verify_first_uniqueness, verify_second_uniqueness,
};
use crate::error::{Error, Result};
use crate::module::{LeModule, SubmoduleElement};
use crate::primary::{
    is_primary_element, meet_primaries, primary_check, prime_check, witness_rechecks, ElementCheck,
};
use crate::ring::{Ideal, MultClosedSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tally {
    pub property: String,
    pub checked: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl Tally {
    fn new(property: &str) -> Tally {
        Tally {
            property: property.to_string(),
            checked: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn holds(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub properties: Vec<Tally>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn holds(&self) -> bool {
        self.properties.iter().all(Tally::holds)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Tally> {
        self.properties.iter().filter(|t| !t.holds())
    }

    pub fn get(&self, property: &str) -> Option<&Tally> {
        self.properties.iter().find(|t| t.property == property)
    }

    fn extend(&mut self, other: VerifyReport) {
        self.properties.extend(other.properties);
        self.notes.extend(other.notes);
    }
}

/// Precomputed tables shared by the sections.
struct Ctx<'m> {
    m: &'m LeModule,
    ideals: Vec<Ideal<'m>>,
    position: HashMap<BitSet, usize>,
    subs: Vec<SubmoduleElement<'m>>,
    /// Elements playing the role of `n`: all submodule elements, or the focus.
    targets: Vec<SubmoduleElement<'m>>,
    /// `act[A][x] = A·x` for submodule elements `x`.
    act: Vec<Vec<usize>>,
    /// `res[A][x] = (x:A)` for submodule elements `x`.
    res: Vec<Vec<usize>>,
}

impl<'m> Ctx<'m> {
    fn new(m: &'m LeModule, focus: Option<usize>) -> Result<Ctx<'m>> {
        let subs = m.submodule_elements();
        let targets = match focus {
            Some(x) => vec![m.submodule(x)?],
            None => subs.clone(),
        };
        let ideals = m.ring().ideals();
        let position = ideals
            .iter()
            .enumerate()
            .map(|(i, a)| (a.members(), i))
            .collect();
        let mut act = vec![vec![usize::MAX; m.size()]; ideals.len()];
        let mut res = vec![vec![usize::MAX; m.size()]; ideals.len()];
        for (i, a) in ideals.iter().enumerate() {
            for n in &subs {
                act[i][n.index()] = m.ideal_action(a, n.index())?.index();
                res[i][n.index()] = n.residual_by_ideal(a)?.index();
            }
        }
        Ok(Ctx {
            m,
            ideals,
            position,
            subs,
            targets,
            act,
            res,
        })
    }

    fn pos(&self, a: &Ideal<'_>) -> usize {
        self.position[&a.members()]
    }

    fn name(&self, x: usize) -> String {
        self.m.name(x)
    }

    fn ideal_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.ideals.len();
        (0..k).flat_map(move |a| (0..k).map(move |b| (a, b)))
    }

    fn proper_targets(&self) -> impl Iterator<Item = SubmoduleElement<'m>> + '_ {
        self.targets.iter().copied().filter(|n| n.is_proper())
    }
}

/// The whole suite, optionally restricted to one submodule element in the
/// role of `n`.
pub fn verify(module: &LeModule, focus: Option<usize>) -> Result<VerifyReport> {
    let ctx = Ctx::new(module, focus)?;
    let mut report = module_section(&ctx)?;
    report.extend(classification_section(&ctx)?);
    report.extend(decomposition_section(&ctx)?);
    Ok(report)
}

pub fn module_laws(module: &LeModule, focus: Option<usize>) -> Result<VerifyReport> {
    module_section(&Ctx::new(module, focus)?)
}

pub fn classification_laws(module: &LeModule, focus: Option<usize>) -> Result<VerifyReport> {
    classification_section(&Ctx::new(module, focus)?)
}

pub fn decomposition_laws(module: &LeModule, focus: Option<usize>) -> Result<VerifyReport> {
    decomposition_section(&Ctx::new(module, focus)?)
}

fn module_section(c: &Ctx<'_>) -> Result<VerifyReport> {
    let m = c.m;
    let r = m.ring();
    let mut out = VerifyReport::default();
    let ni = |n: &SubmoduleElement<'_>| n.index();

    let mut t = Tally::new("action-monotone");
    for x in m.elements() {
        for y in m.elements().filter(|&y| m.leq(x, y)) {
            for a in r.elements() {
                t.check(m.leq(m.act(a, x), m.act(a, y)), || {
                    format!("x={}, y={}, r={a}", c.name(x), c.name(y))
                });
            }
        }
    }
    out.properties.push(t);

    let neg_one = r.neg(r.one());
    let mut idem = Tally::new("submodule-idempotent");
    let mut neg = Tally::new("submodule-negation");
    let mut above = Tally::new("submodule-above-zero");
    for n in &c.targets {
        let n = ni(n);
        idem.check(m.add(n, n) == n, || format!("n={}", c.name(n)));
        neg.check(m.act(neg_one, n) == n, || format!("n={}", c.name(n)));
        above.check(m.leq(m.zero(), n), || format!("n={}", c.name(n)));
    }
    out.properties.extend([idem, neg, above]);

    let mut closed = Tally::new("operations-closed");
    for n in &c.targets {
        for l in &c.subs {
            for x in [m.add(l.index(), n.index()), m.meet(l.index(), n.index())] {
                closed.check(m.is_submodule_element(x), || {
                    format!("l={l}, n={n}, result {}", c.name(x))
                });
            }
        }
        for a in r.elements() {
            let x = n.residual_by_element(a).index();
            closed.check(m.is_submodule_element(x), || format!("(n:{a}) for n={n}"));
        }
        for i in 0..c.ideals.len() {
            for x in [c.act[i][ni(n)], c.res[i][ni(n)]] {
                closed.check(m.is_submodule_element(x), || {
                    format!("A={}, n={n}", c.ideals[i])
                });
            }
        }
    }
    out.properties.push(closed);

    // ideal action
    let mut assoc = Tally::new("action-associative");
    let mut below = Tally::new("action-below");
    let mut mono_ideal = Tally::new("action-monotone-ideal");
    let mut mono = Tally::new("action-monotone-both");
    let mut add_elem = Tally::new("action-additive-element");
    let mut add_ideal = Tally::new("action-additive-ideal");
    let mut meet = Tally::new("action-meet");
    let mut inter = Tally::new("action-intersection");
    for n in &c.targets {
        let n = ni(n);
        for a in 0..c.ideals.len() {
            below.check(m.leq(c.act[a][n], n), || {
                format!("A={}, n={}", c.ideals[a], c.name(n))
            });
            for l in &c.subs {
                let l = l.index();
                let lhs = c.act[a][m.add(l, n)];
                add_elem.check(lhs == m.add(c.act[a][l], c.act[a][n]), || {
                    format!("A={}, l={}, n={}", c.ideals[a], c.name(l), c.name(n))
                });
                meet.check(
                    m.leq(c.act[a][m.meet(l, n)], m.meet(c.act[a][l], c.act[a][n])),
                    || format!("A={}, l={}, n={}", c.ideals[a], c.name(l), c.name(n)),
                );
            }
        }
        for (a, b) in c.ideal_pairs() {
            let (ia, ib) = (&c.ideals[a], &c.ideals[b]);
            let desc = || format!("A={ia}, B={ib}, n={}", c.name(n));
            let ab = c.pos(&ia.product(ib)?);
            assoc.check(c.act[a][c.act[b][n]] == c.act[ab][n], desc);
            let sum = c.pos(&ia.sum(ib)?);
            add_ideal.check(c.act[sum][n] == m.add(c.act[a][n], c.act[b][n]), desc);
            let cap = c.pos(&ia.intersect(ib)?);
            inter.check(m.leq(c.act[cap][n], m.meet(c.act[a][n], c.act[b][n])), desc);
            if ia.is_subset(ib) {
                mono_ideal.check(m.leq(c.act[a][n], c.act[b][n]), desc);
                for l in c.subs.iter().filter(|l| m.leq(l.index(), n)) {
                    mono.check(m.leq(c.act[a][l.index()], c.act[b][n]), || {
                        format!("A={ia}, B={ib}, l={l}, n={}", c.name(n))
                    });
                }
            }
        }
    }
    out.properties.extend([
        assoc, below, mono_ideal, mono, add_elem, add_ideal, meet, inter,
    ]);

    // residuals
    let mut adjoint = Tally::new("residual-adjoint");
    let mut principal = Tally::new("residual-principal");
    let mut anti = Tally::new("residual-antitone-ideal");
    let mut mono = Tally::new("residual-monotone");
    let mut compose = Tally::new("residual-compose");
    let mut rmeet = Tally::new("residual-meet");
    let mut rsum = Tally::new("residual-ideal-sum");
    for n in &c.targets {
        let nn = ni(n);
        for a in 0..c.ideals.len() {
            for x in m.elements() {
                let kills = c.ideals[a].members().iter().all(|s| m.leq(m.act(s, x), nn));
                adjoint.check(m.leq(x, c.res[a][nn]) == kills, || {
                    format!("A={}, n={n}, x={}", c.ideals[a], c.name(x))
                });
            }
            for l in &c.subs {
                let l = l.index();
                if m.leq(l, nn) {
                    mono.check(m.leq(c.res[a][l], c.res[a][nn]), || {
                        format!("A={}, l={}, n={n}", c.ideals[a], c.name(l))
                    });
                }
                rmeet.check(
                    c.res[a][m.meet(l, nn)] == m.meet(c.res[a][l], c.res[a][nn]),
                    || format!("A={}, l={}, n={n}", c.ideals[a], c.name(l)),
                );
            }
        }
        for s in r.elements() {
            let p = c.pos(&r.ideal_generated(BitSet::singleton(s)));
            principal.check(n.residual_by_element(s).index() == c.res[p][nn], || {
                format!("r={s}, n={n}")
            });
        }
        for (a, b) in c.ideal_pairs() {
            let (ia, ib) = (&c.ideals[a], &c.ideals[b]);
            let desc = || format!("A={ia}, B={ib}, n={n}");
            if ia.is_subset(ib) {
                anti.check(m.leq(c.res[b][nn], c.res[a][nn]), desc);
            }
            let ab = c.pos(&ia.product(ib)?);
            compose.check(c.res[b][c.res[a][nn]] == c.res[ab][nn], desc);
            let sum = c.pos(&ia.sum(ib)?);
            rsum.check(
                m.leq(c.res[sum][nn], m.meet(c.res[a][nn], c.res[b][nn])),
                desc,
            );
        }
    }
    out.properties
        .extend([adjoint, principal, anti, mono, compose, rmeet, rsum]);

    // transporters
    let tr = |l: usize, x: usize| m.transporter_set(l, x);
    let mut is_ideal = Tally::new("transporter-ideal");
    let mut anti = Tally::new("transporter-antitone");
    let mut mono = Tally::new("transporter-monotone");
    let mut tmeet = Tally::new("transporter-meet");
    let mut tsum = Tally::new("transporter-sum");
    let mut tjoin = Tally::new("transporter-join");
    for n in &c.targets {
        let nn = ni(n);
        for x in m.elements() {
            is_ideal.check(r.ideal(tr(nn, x)).is_ok(), || {
                format!("n={n}, x={}", c.name(x))
            });
        }
        for l in &c.subs {
            let l = l.index();
            for k in &c.subs {
                let k = k.index();
                let desc = || format!("k={}, l={}, n={n}", c.name(k), c.name(l));
                if m.leq(l, nn) {
                    anti.check(tr(k, nn).is_subset(tr(k, l)), desc);
                    mono.check(tr(l, k).is_subset(tr(nn, k)), desc);
                }
                tmeet.check(
                    tr(m.meet(l, nn), k) == tr(l, k).intersection(tr(nn, k)),
                    desc,
                );
                let both = tr(k, l).intersection(tr(k, nn));
                tsum.check(tr(k, m.add(l, nn)) == both, desc);
                tjoin.check(tr(k, m.join(l, nn)) == both, desc);
            }
        }
    }
    out.properties
        .extend([is_ideal, anti, mono, tmeet, tsum, tjoin]);

    let mut all = Tally::new("transporter-meet-all");
    for family in meet_families(c) {
        let meet = family.iter().fold(m.top(), |acc, n| m.meet(acc, n.index()));
        let cap = family
            .iter()
            .fold(r.all(), |acc, n| acc.intersection(n.colon_top().members()));
        all.check(tr(meet, m.top()) == cap, || format!("family {family:?}"));
    }
    out.properties.push(all);

    // radicals
    let mut rtop = Tally::new("radical-top");
    rtop.check(m.top_element().radical() == r.unit_ideal(), || {
        "Rad(e) is proper".into()
    });
    let mut rmono = Tally::new("radical-monotone");
    let mut rmeet = Tally::new("radical-meet");
    for n in &c.targets {
        for l in &c.subs {
            if l.leq(*n) {
                rmono.check(l.radical().is_subset(&n.radical()), || {
                    format!("l={l}, n={n}")
                });
            }
            rmeet.check(
                l.meet(*n).radical() == l.radical().intersect(&n.radical())?,
                || format!("l={l}, n={n}"),
            );
        }
    }
    out.properties.extend([rtop, rmono, rmeet]);
    Ok(out)
}

/// Nonempty families of submodule elements for the meet-over-a-family law:
/// every subset when there are few, otherwise pairs plus the full set.
/// Families always contain the focus when there is one.
fn meet_families<'m>(c: &Ctx<'m>) -> Vec<Vec<SubmoduleElement<'m>>> {
    let subs = &c.subs;
    let must: Option<SubmoduleElement<'m>> = (c.targets.len() == 1).then(|| c.targets[0]);
    let keep = |f: &Vec<SubmoduleElement<'m>>| must.is_none_or(|x| f.contains(&x));
    if subs.len() <= 12 {
        (1u32..1 << subs.len())
            .map(|mask| {
                (0..subs.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| subs[i])
                    .collect()
            })
            .filter(keep)
            .collect()
    } else {
        let mut out: Vec<Vec<SubmoduleElement<'m>>> = Vec::new();
        for i in 0..subs.len() {
            for j in i..subs.len() {
                out.push(vec![subs[i], subs[j]]);
            }
        }
        out.push(subs.clone());
        out.into_iter().filter(keep).collect()
    }
}

fn classification_section(c: &Ctx<'_>) -> Result<VerifyReport> {
    let m = c.m;
    let r = m.ring();
    let mut out = VerifyReport::default();
    let mut rad_prime = Tally::new("primary-radical-prime");
    let mut max_primary = Tally::new("maximal-radical-primary");
    let mut q_trans = Tally::new("primary-transporter");
    let mut q_res = Tally::new("primary-residual-fixed");
    let mut p_primary = Tally::new("prime-implies-primary");
    let mut p_trans = Tally::new("prime-transporter");
    let mut p_top = Tally::new("prime-colon-top");
    let mut crit_primary = Tally::new("prime-criterion-primary");
    let mut crit_max = Tally::new("prime-criterion-maximal");
    let mut witness = Tally::new("witness-rechecks");
    let mut improper_transporters = 0usize;

    for q in c.proper_targets() {
        let primary = primary_check(q);
        let prime = prime_check(q);
        let rad = q.radical();
        let top = q.colon_top();
        for (check, is_primary) in [(primary, true), (prime, false)] {
            match check {
                ElementCheck::Witness { a, x } => witness
                    .check(witness_rechecks(q, a, x, is_primary), || {
                        format!("n={q}, a={a}, x={}", c.name(x))
                    }),
                ElementCheck::NotProper => {
                    witness.check(false, || format!("{q} reported improper"))
                }
                ElementCheck::Holds => {}
            }
        }
        if rad.is_maximal() {
            max_primary.check(primary.holds(), || format!("q={q}, Rad(q)={rad}"));
        }
        if top.is_prime() && primary.holds() {
            crit_primary.check(prime.holds(), || format!("p={q}, (p:e)={top}"));
        }
        if top.is_maximal() {
            crit_max.check(prime.holds(), || format!("p={q}, (p:e)={top}"));
        }
        if top.is_prime() && !prime.holds() {
            out.notes.push(format!(
                "converse instance: ({q}:e) = {top} is prime but {q} is not a prime submodule element"
            ));
        }
        if primary.holds() {
            rad_prime.check(rad.is_prime(), || format!("q={q}, Rad(q)={rad}"));
            for x in m.elements() {
                let colon = q.transporter(x);
                let ok = if m.leq(x, q.index()) {
                    colon == r.unit_ideal()
                } else {
                    colon.is_primary() && colon.radical() == rad
                };
                q_trans.check(ok, || format!("q={q}, x={}, (q:x)={colon}", c.name(x)));
            }
            for a in r.elements().filter(|&a| !rad.contains(a)) {
                q_res.check(q.residual_by_element(a) == q, || format!("q={q}, a={a}"));
            }
        }
        if prime.holds() {
            p_primary.check(primary.holds(), || format!("p={q}"));
            p_top.check(top.is_prime(), || format!("p={q}, (p:e)={top}"));
            for x in m.elements() {
                let colon = q.transporter(x);
                if colon.is_proper() {
                    p_trans.check(colon.is_prime(), || {
                        format!("p={q}, x={}, (p:x)={colon}", c.name(x))
                    });
                } else {
                    improper_transporters += 1;
                }
            }
        }
    }

    // meets of primaries sharing a radical
    let mut meets = Tally::new("primary-meet");
    let primaries: Vec<SubmoduleElement<'_>> = c
        .subs
        .iter()
        .copied()
        .filter(|q| is_primary_element(*q))
        .collect();
    let focus = (c.targets.len() == 1).then(|| c.targets[0]);
    for (i, q1) in primaries.iter().enumerate() {
        let p = q1.radical();
        let group: Vec<SubmoduleElement<'_>> = primaries
            .iter()
            .copied()
            .filter(|q| q.radical() == p)
            .collect();
        let mut families: Vec<Vec<SubmoduleElement<'_>>> = primaries[i..]
            .iter()
            .filter(|q2| q2.radical() == p)
            .map(|q2| vec![*q1, *q2])
            .collect();
        if group[0] == *q1 {
            families.push(group.clone());
        }
        for f in families
            .into_iter()
            .filter(|f| focus.is_none_or(|x| f.contains(&x)))
        {
            let ok = match meet_primaries(&f) {
                Ok(meet) => is_primary_element(meet) && meet.radical() == p,
                Err(_) => false,
            };
            meets.check(ok, || format!("components {f:?}, radical {p}"));
        }
    }

    out.properties.extend([
        rad_prime,
        max_primary,
        meets,
        q_trans,
        q_res,
        p_primary,
        p_trans,
        p_top,
        crit_primary,
        crit_max,
        witness,
    ]);
    if improper_transporters > 0 {
        out.notes.push(format!(
            "{improper_transporters} transporters (p:x) with x ≤ p equal R and were not tested for primality"
        ));
    }
    Ok(out)
}

/// Multiplicatively closed sets probed by the S-component checks: powers of
/// each ring element, and complements of each prime and of all primes.
fn mult_family<'m>(c: &Ctx<'m>) -> Result<Vec<MultClosedSet<'m>>> {
    let r = c.m.ring();
    let primes: Vec<Ideal<'_>> = c.ideals.iter().copied().filter(Ideal::is_prime).collect();
    let mut out: Vec<MultClosedSet<'_>> = r
        .elements()
        .map(|s| MultClosedSet::powers_of(r, s))
        .collect();
    for p in &primes {
        out.push(r.complement_of_prime_union(std::slice::from_ref(p))?);
    }
    if !primes.is_empty() {
        out.push(r.complement_of_prime_union(&primes)?);
    }
    out.sort_by_key(|s| s.members());
    out.dedup_by_key(|s| s.members());
    Ok(out)
}

fn subsets<T: Copy>(xs: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0u32..1 << xs.len()).map(move |mask| {
        (0..xs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| xs[i])
            .collect()
    })
}

fn decomposition_section(c: &Ctx<'_>) -> Result<VerifyReport> {
    let m = c.m;
    let r = m.ring();
    let mut out = VerifyReport::default();
    let family = mult_family(c)?;
    let primes: Vec<Ideal<'_>> = c.ideals.iter().copied().filter(Ideal::is_prime).collect();

    let lask = is_laskerian(m);
    if let Some(x) = lask.counterexample {
        out.notes.push(format!(
            "not Laskerian: {} has no primary decomposition",
            c.name(x)
        ));
    }

    let mut s_basic = Tally::new("s-component-basic");
    let mut sound = Tally::new("reduction-sound");
    let mut enumerated = Tally::new("enumeration-contains-reduction");
    let mut assoc_prime = Tally::new("associated-primes-prime");
    let mut first = Tally::new("first-uniqueness");
    let mut lengths = Tally::new("uniqueness-length");
    let mut second = Tally::new("second-uniqueness");
    let mut isolated_comp = Tally::new("isolated-component");
    let mut prime_iff = Tally::new("prime-components-iff-radical");
    let mut containment = Tally::new("prime-containment");
    let mut minimal = Tally::new("minimal-divisors-isolated");
    let mut rad_meet = Tally::new("radical-isolated-intersection");
    let mut single = Tally::new("single-isolated-iff-prime-radical");
    let mut s_meet = Tally::new("s-component-meet");
    let mut saturation = Tally::new("saturation");

    for n in c.proper_targets() {
        let top = n.colon_top();
        for s in &family {
            let ns = s_component(n, s)?;
            let meets_top = s.meets(&top);
            s_basic.check(n.leq(ns) && (!meets_top || !ns.is_proper()), || {
                format!("n={n}, S={s:?}, n_S={ns}")
            });
        }

        let Some(d) = find_reduced_decomposition(n)? else {
            continue;
        };
        sound.check(
            d.reduced && m.meet_all(d.components.iter().map(|q| q.index()))? == n.index(),
            || format!("n={n}, components {:?}", d.components),
        );
        let all = enumerate_reduced_decompositions(n)?;
        enumerated.check(
            all.iter().all(|e| e.reduced) && all.iter().any(|e| e.components == d.components),
            || format!("n={n}, reduction {:?} not enumerated", d.components),
        );
        if all.iter().any(|e| e.components != d.components) {
            let sets: Vec<String> = all.iter().map(|e| format!("{:?}", e.components)).collect();
            out.notes.push(format!(
                "{n} has distinct reduced decompositions: {}",
                sets.join(", ")
            ));
        }

        let assoc = associated_primes(&d)?;
        let isolated = assoc.isolated_primes();
        assoc_prime.check(assoc.primes.iter().all(Ideal::is_prime), || {
            format!("n={n}, primes {:?}", assoc.primes)
        });

        let fu = verify_first_uniqueness(n)?;
        first.check(fu.holds, || {
            format!(
                "n={n}: decompositions give {:?}, transporters give {:?}",
                fu.decomposition_radical_sets, fu.transporter_primes
            )
        });
        lengths.check(
            all.iter()
                .all(|e| e.len() == d.len() && e.radical_set() == assoc.primes),
            || format!("n={n}"),
        );

        for set in subsets(&isolated) {
            let su = verify_second_uniqueness(n, &set)?;
            second.check(su.holds, || {
                format!(
                    "n={n}, isolated {set:?}: meets {:?}, n_S={}",
                    su.meets, su.s_component
                )
            });
        }

        for e in &all {
            for (q, p) in e.components.iter().zip(&e.radicals) {
                let q_prime = isolated_component_formula(n, p)?;
                let ok = q_prime.leq(*q) && (!isolated.contains(p) || q_prime == *q);
                isolated_comp.check(ok, || format!("n={n}, P={p}, component {q}, q'={q_prime}"));
            }
            let all_prime = e.components.iter().all(|q| prime_check(*q).holds());
            prime_iff.check(all_prime == (n.radical() == top), || {
                format!(
                    "n={n}, components {:?} all prime: {all_prime}, Rad(n)={}, (n:e)={top}",
                    e.components,
                    n.radical()
                )
            });
            for s in &family {
                let outside = e
                    .components
                    .iter()
                    .zip(&e.radicals)
                    .filter(|(_, p)| !s.meets(p))
                    .map(|(q, _)| q.index());
                let expected = outside.fold(m.top(), |acc, q| m.meet(acc, q));
                let got = s_component(n, s)?;
                s_meet.check(got.index() == expected, || {
                    format!("n={n}, S={s:?}, n_S={got}, meet {}", c.name(expected))
                });
            }
        }
        for t in subsets(&assoc.primes) {
            let s = r.complement_of_prime_union(&t)?;
            for e in &all {
                let expected = e
                    .components
                    .iter()
                    .zip(&e.radicals)
                    .filter(|(_, p)| !s.meets(p))
                    .fold(m.top(), |acc, (q, _)| m.meet(acc, q.index()));
                let got = s_component(n, &s)?;
                s_meet.check(got.index() == expected, || {
                    format!(
                        "n={n}, S=R minus union {t:?}, n_S={got}, meet {}",
                        c.name(expected)
                    )
                });
            }
        }

        for p in &primes {
            let below = top.is_subset(p);
            let some = assoc.primes.iter().any(|q| q.is_subset(p));
            containment.check(below == some, || format!("n={n}, P={p}"));
        }
        let mut mins = minimal_prime_divisors(n)?;
        mins.sort();
        minimal.check(mins == isolated, || {
            format!("n={n}: minimal {mins:?}, isolated {isolated:?}")
        });
        let cap = isolated
            .iter()
            .fold(r.all(), |acc, p| acc.intersection(p.members()));
        rad_meet.check(n.radical().members() == cap, || format!("n={n}"));
        single.check(n.radical().is_prime() == (isolated.len() == 1), || {
            format!("n={n}")
        });
        for a in r.elements() {
            let verdict = saturation_fixpoint_check(n, a);
            let desc = || match &verdict {
                Err(e) => format!("n={n}, r={a}: {e}"),
                Ok(_) => String::new(),
            };
            match &verdict {
                Ok(_) => saturation.check(true, desc),
                Err(Error::Counterexample(_)) => saturation.check(false, desc),
                Err(e) => return Err(Error::usage(e.to_string())),
            }
        }
    }

    out.properties.extend([
        s_basic,
        sound,
        enumerated,
        assoc_prime,
        first,
        lengths,
        second,
        isolated_comp,
        prime_iff,
        containment,
        minimal,
        rad_meet,
        single,
        s_meet,
        saturation,
    ]);
    Ok(out)
}
