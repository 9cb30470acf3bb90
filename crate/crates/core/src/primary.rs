//! Primary and prime submodule elements.

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::module::SubmoduleElement;
use crate::ring::Ideal;

/// Outcome of the primary or prime test on one submodule element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementCheck {
    Holds,
    /// The element is `e`.
    NotProper,
    /// First `(a, x)` in index order with `a·x ≤ n`, `x ≰ n`, and `a` failing
    /// the ring-side condition.
    Witness {
        a: usize,
        x: usize,
    },
}

impl ElementCheck {
    pub fn holds(self) -> bool {
        self == ElementCheck::Holds
    }

    pub fn witness(self) -> Option<(usize, usize)> {
        match self {
            ElementCheck::Witness { a, x } => Some((a, x)),
            _ => None,
        }
    }
}

/// Whether `a^m·e ≤ n` for some `m ≥ 1`, walking powers until they cycle.
pub fn some_power_below(n: SubmoduleElement<'_>, a: usize) -> bool {
    let m = n.module();
    let ring = m.ring();
    let mut seen = BitSet::EMPTY;
    let mut p = a;
    while !seen.contains(p) {
        if m.leq(m.act(p, m.top()), n.index()) {
            return true;
        }
        seen.insert(p);
        p = ring.mul(p, a);
    }
    false
}

fn scan(n: SubmoduleElement<'_>, escapes: impl Fn(usize) -> bool) -> ElementCheck {
    if !n.is_proper() {
        return ElementCheck::NotProper;
    }
    let m = n.module();
    for a in m.ring().elements() {
        if escapes(a) {
            continue;
        }
        if let Some(x) = m
            .elements()
            .find(|&x| m.leq(m.act(a, x), n.index()) && !m.leq(x, n.index()))
        {
            return ElementCheck::Witness { a, x };
        }
    }
    ElementCheck::Holds
}

/// `n ≠ e` and `a·x ≤ n` forces `x ≤ n` or `a^m·e ≤ n` for some `m`.
pub fn primary_check(n: SubmoduleElement<'_>) -> ElementCheck {
    scan(n, |a| some_power_below(n, a))
}

pub fn is_primary_element(n: SubmoduleElement<'_>) -> bool {
    primary_check(n).holds()
}

/// `p ≠ e` and `r·x ≤ p` forces `r ∈ (p:e)` or `x ≤ p`.
pub fn prime_check(p: SubmoduleElement<'_>) -> ElementCheck {
    let colon = p.colon_top();
    scan(p, |r| colon.contains(r))
}

pub fn is_prime_submodule_element(p: SubmoduleElement<'_>) -> bool {
    prime_check(p).holds()
}

/// Re-verify a reported witness against the definition.
pub fn witness_rechecks(n: SubmoduleElement<'_>, a: usize, x: usize, primary: bool) -> bool {
    let m = n.module();
    let core = m.leq(m.act(a, x), n.index()) && !m.leq(x, n.index());
    if primary {
        core && !some_power_below(n, a)
    } else {
        core && !n.colon_top().contains(a)
    }
}

/// The prime `P` for which `q` is `P`-primary. Refuses non-primary input.
pub fn primary_radical<'m>(q: SubmoduleElement<'m>) -> Result<Ideal<'m>> {
    match primary_check(q) {
        ElementCheck::Holds => Ok(q.radical()),
        ElementCheck::NotProper => Err(Error::usage(format!("{q} is e, not primary"))),
        ElementCheck::Witness { a, x } => Err(Error::usage(format!(
            "{q} is not primary (a={a}, x={})",
            q.module().name(x)
        ))),
    }
}

/// Meet of `P`-primary elements sharing one radical; the result is checked
/// to be `P`-primary again.
pub fn meet_primaries<'m>(qs: &[SubmoduleElement<'m>]) -> Result<SubmoduleElement<'m>> {
    let (first, rest) = qs
        .split_first()
        .ok_or_else(|| Error::usage("meet of an empty list of primaries"))?;
    let radical = primary_radical(*first)?;
    for q in rest {
        if primary_radical(*q)? != radical {
            return Err(Error::usage(format!(
                "{q} and {first} have different radicals"
            )));
        }
    }
    let meet = rest.iter().fold(*first, |acc, q| acc.meet(*q));
    if !is_primary_element(meet) || meet.radical() != radical {
        return Err(Error::Counterexample(format!(
            "meet {meet} of {radical}-primary elements is not {radical}-primary"
        )));
    }
    Ok(meet)
}

#[derive(Clone, Debug)]
pub struct ElementClassification<'m> {
    pub element: SubmoduleElement<'m>,
    pub is_primary: bool,
    pub is_prime_submodule: bool,
    /// `Rad(n)`; prime whenever `is_primary`.
    pub radical: Ideal<'m>,
    pub primary_witness: Option<(usize, usize)>,
    pub prime_witness: Option<(usize, usize)>,
}

pub fn classify(n: SubmoduleElement<'_>) -> ElementClassification<'_> {
    let primary = primary_check(n);
    let prime = prime_check(n);
    ElementClassification {
        element: n,
        is_primary: primary.holds(),
        is_prime_submodule: prime.holds(),
        radical: n.radical(),
        primary_witness: primary.witness(),
        prime_witness: prime.witness(),
    }
}

/// Classification of every submodule element, in index order.
pub fn classify_all(module: &crate::LeModule) -> Vec<ElementClassification<'_>> {
    module
        .submodule_elements()
        .into_iter()
        .map(classify)
        .collect()
}
