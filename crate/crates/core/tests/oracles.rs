//! Worked examples on Z12 and its submodule lattice, each checked against
//! a classical model: `⟨d⟩` is the subgroup `dZ12`, so `⟨a⟩ ≤ ⟨b⟩` iff
//! `b | a`, joins are gcds, meets are lcms and `r⟨d⟩ = ⟨gcd(12, rd)⟩`.

mod common;

use common::*;
use lemodule::decomposition::{
    associated_primes, enumerate_reduced_decompositions, find_reduced_decomposition, is_laskerian,
    isolated_component_formula, minimal_prime_divisors, primary_elements_above, s_component,
    saturation_fixpoint_check, verify_first_uniqueness, verify_second_uniqueness,
};
use lemodule::io::{parse_structure, serialize_structure, StructureFile};
use lemodule::models::{generate_random, submodule_lattice, submodule_lattice_raw};
use lemodule::primary::{
    is_primary_element, is_prime_submodule_element, primary_check, primary_radical, prime_check,
};
use lemodule::{BitSet, FiniteRing, LeModule, MultClosedSet, RawRing};

const N: usize = 12;
const DIVISORS: [usize; 6] = [1, 2, 3, 4, 6, 12];

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Index of `⟨d⟩` in Z12SL.
fn at(d: usize) -> usize {
    lattice_index(N, gcd(d, N))
}

fn ideal(r: &FiniteRing, g: usize) -> lemodule::Ideal<'_> {
    r.ideal(BitSet(zn_ideal(N, g))).unwrap()
}

fn z12() -> LeModule {
    submodule_lattice(N).unwrap()
}

#[test]
fn z12_ring_tables() {
    let raw = RawRing::zn(N);
    for a in 0..N {
        for b in 0..N {
            assert_eq!(raw.add[a][b], (a + b) % N);
            assert_eq!(raw.mul[a][b], a * b % N);
        }
    }
    assert!(raw.violations().is_empty());
    let mut bad = raw.clone();
    bad.mul[2][3] = 7;
    let v = bad.violations();
    assert!(!v.is_empty());
    assert!(
        v.iter()
            .any(|v| v.axiom.name().contains("distrib") || v.axiom.name().contains("assoc")),
        "{v:?}"
    );
    assert!(v.iter().all(|v| ring_violation_is_genuine(&bad, v)));
}

#[test]
fn z12_ideals() {
    let r = FiniteRing::zn(N).unwrap();
    let got: Vec<u64> = r.ideals().iter().map(|a| a.members().0).collect();
    assert_eq!(got, brute_ideals(&r.to_raw()));
    let classical: Vec<u64> = [12, 6, 4, 3, 2, 1]
        .iter()
        .map(|&g| zn_ideal(N, g))
        .collect();
    assert_eq!(got, classical);
    let names: Vec<String> = r.ideals().iter().map(|a| a.to_string()).collect();
    assert_eq!(names, ["(0)", "(6)", "(4)", "(3)", "(2)", "(1)"]);

    let z4 = FiniteRing::zn(4).unwrap();
    let got: Vec<u64> = z4.ideals().iter().map(|a| a.members().0).collect();
    assert_eq!(got, brute_ideals(&z4.to_raw()));
    assert_eq!(got, [0b0001, 0b0101, 0b1111]);
}

#[test]
fn z12_ideal_operations() {
    let r = FiniteRing::zn(N).unwrap();
    let sum = ideal(&r, 4).sum(&ideal(&r, 3)).unwrap();
    assert_eq!(sum.members().0, zn_ideal(N, gcd(4, 3)));
    assert!(!sum.is_proper());
    let meet = ideal(&r, 2).intersect(&ideal(&r, 3)).unwrap();
    assert_eq!(meet.members().0, zn_ideal(N, lcm(2, 3)));
    assert_eq!(meet.members().0, zn_ideal(N, 6));

    assert_eq!(
        ideal(&r, 4).radical().members().0,
        brute_radical(&r.to_raw(), zn_ideal(N, 4))
    );
    assert_eq!(ideal(&r, 4).radical().members().0, zn_ideal(N, 2));
    let nil = ideal(&r, 0).radical().members().0;
    assert_eq!(nil, brute_radical(&r.to_raw(), 1));
    assert_eq!(nil, (1 << 0) | (1 << 6));
}

#[test]
fn z12_ideal_classification() {
    let r = FiniteRing::zn(N).unwrap();
    let (p2, i4, i6) = (ideal(&r, 2), ideal(&r, 4), ideal(&r, 6));
    assert!(p2.is_prime() && p2.is_maximal() && p2.is_primary());
    assert!(!i4.is_prime() && i4.is_primary());
    assert_eq!(i4.prime_witness(), Some((2, 2)));
    assert!(!i6.is_primary());
    let (a, b) = i6.primary_witness().unwrap();
    assert!(i6.contains(a * b % N) && !i6.contains(b) && !i6.contains_some_power(a));
    assert_eq!((a, b), (2, 3));

    let prime_bits = |g: usize| zn_ideal(N, g);
    let minimal = |g: usize| -> Vec<u64> {
        ideal(&r, g)
            .minimal_primes_over()
            .unwrap()
            .iter()
            .map(|p| p.members().0)
            .collect()
    };
    let mut want = vec![prime_bits(2), prime_bits(3)];
    want.sort();
    assert_eq!(minimal(0), want);
    assert_eq!(minimal(4), vec![prime_bits(2)]);

    let s = r.complement_of_prime_union(&[p2]).unwrap();
    assert_eq!(
        s.members(),
        BitSet::from_indices((0..N).filter(|a| gcd(*a, 2) == 1))
    );
    assert_eq!(s.members(), BitSet::from_indices([1, 3, 5, 7, 9, 11]));
    let s = r.complement_of_prime_union(&[p2, ideal(&r, 3)]).unwrap();
    assert_eq!(
        s.members(),
        BitSet::from_indices((0..N).filter(|a| gcd(*a, N) == 1))
    );
    assert!(s.satisfies_invariants());
}

#[test]
fn z12sl_tables_match_divisor_model() {
    let m = z12();
    assert_eq!(m.size(), DIVISORS.len());
    for (i, &a) in DIVISORS.iter().enumerate() {
        assert_eq!(at(a), i);
        assert!(m.is_submodule_element(i) && is_submodule_oracle(&m, i));
        for &b in &DIVISORS {
            assert_eq!(m.leq(at(a), at(b)), a % b == 0);
            assert_eq!(m.join(at(a), at(b)), at(gcd(a, b)));
            assert_eq!(m.add(at(a), at(b)), at(gcd(a, b)));
            assert_eq!(m.meet(at(a), at(b)), at(lcm(a, b)));
        }
        for r in 0..N {
            assert_eq!(m.act(r, at(a)), at(r * a));
        }
    }
    assert_eq!(m.join(at(4), at(6)), at(2));
    assert_eq!(m.meet(at(4), at(3)), m.zero());
    assert_eq!(m.name(m.zero()), "0_M");
    assert!(m.to_raw().violations(m.ring()).is_empty());
}

#[test]
fn z12sl_tampered_action_is_caught() {
    let (ring, mut module) = z12_raw();
    module.action[2][Z12_D2] = Z12_D3;
    let r = FiniteRing::new(&ring).unwrap();
    let v = module.violations(&r);
    assert!(
        v.iter().any(|v| matches!(v.axiom.name(), "M3" | "M5")),
        "{v:?}"
    );
    assert!(v
        .iter()
        .all(|v| module_violation_is_genuine(&ring, &module, v)));
    assert!(v.iter().all(|v| !module.holds(&r, v.axiom, &v.witness)));
}

#[test]
fn non_submodule_element_has_witness() {
    let mut found = false;
    for inst in random_corpus() {
        let m = &inst.module;
        for x in m.elements() {
            let oracle = is_submodule_oracle(m, x);
            assert_eq!(m.is_submodule_element(x), oracle, "{} {x}", inst.name);
            if let Some(failure) = m.submodule_failure(x) {
                assert!(!oracle);
                assert!(!failure.to_string().is_empty());
                found = true;
            }
        }
    }
    assert!(found, "no non-submodule element in the random corpus");
}

#[test]
fn z12sl_operations() {
    let m = z12();
    let r = m.ring();
    let el = |d: usize| m.submodule(at(d)).unwrap();
    let members = |g: usize| -> Vec<usize> { (0..N).filter(|a| a % gcd(g, N) == 0).collect() };

    let action = m.ideal_action(&ideal(r, 3), at(2)).unwrap();
    assert_eq!(action.index(), ideal_action_oracle(&m, &members(3), at(2)));
    assert_eq!(action.index(), at(6));

    let res = el(4).residual_by_element(2);
    let oracle = DIVISORS
        .iter()
        .filter(|&&x| (2 * x) % 4 == 0)
        .fold(N, |acc, &x| gcd(acc, x));
    assert_eq!(res.index(), at(oracle));
    assert_eq!(res.index(), at(2));

    let res = el(12).residual_by_ideal(&ideal(r, 2)).unwrap();
    let oracle = DIVISORS
        .iter()
        .filter(|&&x| (2 * x) % N == 0)
        .fold(N, |acc, &x| gcd(acc, x));
    assert_eq!(res.index(), at(oracle));
    assert_eq!(res.index(), at(6));

    let t = el(12).transporter(at(3));
    assert_eq!(
        t.members(),
        BitSet::from_indices((0..N).filter(|a| a * 3 % N == 0))
    );
    assert_eq!(t.members(), BitSet::from_indices([0, 4, 8]));

    assert_eq!(el(4).radical().members().0, radical_oracle(&m, at(4)));
    assert_eq!(el(4).radical().members().0, zn_ideal(N, 2));
    assert_eq!(el(12).radical().members().0, radical_oracle(&m, at(12)));
    assert_eq!(el(12).radical().members(), BitSet::from_indices([0, 6]));
}

#[test]
fn z12sl_classification() {
    let m = z12();
    let el = |d: usize| m.submodule(at(d)).unwrap();
    assert!(is_primary_element(el(4)) && is_primary_oracle(&m, at(4)));
    assert!(!is_primary_oracle(&m, at(6)));
    assert_eq!(primary_check(el(6)).witness(), Some((2, at(3))));
    assert_eq!(m.act(2, at(3)), at(6));
    for (d, g) in [(4, 2), (3, 3), (2, 2)] {
        let rad = primary_radical(el(d)).unwrap();
        assert_eq!(rad.members().0, radical_oracle(&m, at(d)));
        assert_eq!(rad.members().0, zn_ideal(N, g));
    }
    assert!(is_prime_submodule_element(el(2)) && is_prime_oracle(&m, at(2)));
    assert!(!is_prime_oracle(&m, at(4)));
    assert_eq!(prime_check(el(4)).witness(), Some((2, at(2))));
    let meet = el(2).meet(el(4));
    assert_eq!(meet.index(), at(4));
    assert_eq!(primary_radical(meet).unwrap().members().0, zn_ideal(N, 2));
}

/// Components of `⟨d⟩` by the prime-power factorisation of `d`.
fn classical_components(d: usize) -> Vec<usize> {
    let mut out: Vec<usize> = factorize(d).iter().map(|&(p, k)| at(p.pow(k))).collect();
    out.sort();
    out
}

#[test]
fn z12sl_decompositions() {
    let m = z12();
    let el = |d: usize| m.submodule(at(d)).unwrap();
    let above = |d: usize| -> Vec<usize> {
        primary_elements_above(el(d))
            .iter()
            .map(|q| q.index())
            .collect()
    };
    let oracle = |d: usize| -> Vec<usize> {
        m.elements()
            .filter(|&x| m.leq(at(d), x) && is_primary_oracle(&m, x))
            .collect()
    };
    assert_eq!(above(12), oracle(12));
    assert_eq!(above(12), [at(2), at(3), at(4)]);
    assert_eq!(above(4), oracle(4));
    assert_eq!(above(4), [at(2), at(4)]);

    for (d, want) in [
        (12, vec![at(3), at(4)]),
        (6, vec![at(2), at(3)]),
        (2, vec![at(2)]),
    ] {
        assert_eq!(classical_components(d), want);
        let found = find_reduced_decomposition(el(d)).unwrap().unwrap();
        let comps: Vec<usize> = found.components.iter().map(|q| q.index()).collect();
        assert_eq!(comps, want);
        let all = enumerate_reduced_decompositions(el(d)).unwrap();
        assert_eq!(unpruned_decompositions(&m, at(d)), vec![want.clone()]);
        assert_eq!(all.len(), 1);
    }
    // {⟨2⟩,⟨3⟩} meets too high; all three is unreduced
    assert_eq!(meet_of(&m, &[at(2), at(3)]), at(6));

    let report = is_laskerian(&m);
    assert!(report.laskerian && report.counterexample.is_none());
    assert_eq!(report.checked, 5);
}

#[test]
fn z12sl_primes_of_decompositions() {
    let m = z12();
    let r = m.ring();
    let el = |d: usize| m.submodule(at(d)).unwrap();
    let bits =
        |ps: &[lemodule::Ideal<'_>]| -> Vec<u64> { ps.iter().map(|p| p.members().0).collect() };
    let mut p23 = vec![zn_ideal(N, 2), zn_ideal(N, 3)];
    p23.sort();

    let d = find_reduced_decomposition(el(12)).unwrap().unwrap();
    let assoc = associated_primes(&d).unwrap();
    assert_eq!(bits(&assoc.primes), p23);
    assert_eq!(assoc.isolated, [true, true]);
    let d = find_reduced_decomposition(el(4)).unwrap().unwrap();
    let assoc = associated_primes(&d).unwrap();
    assert_eq!(bits(&assoc.primes), [zn_ideal(N, 2)]);
    assert_eq!(assoc.isolated, [true]);

    assert_eq!(bits(&minimal_prime_divisors(el(12)).unwrap()), p23);
    assert_eq!(
        bits(&minimal_prime_divisors(el(4)).unwrap()),
        [zn_ideal(N, 2)]
    );
    assert_eq!(bits(&ideal(r, 0).minimal_primes_over().unwrap()), p23);

    // n_S: the join of x with sx = 0 for some odd s
    let odds = MultClosedSet::new(r, BitSet::from_indices([1, 3, 5, 7, 9, 11])).unwrap();
    let oracle = DIVISORS
        .iter()
        .filter(|&&x| [1, 3, 5, 7, 9, 11].iter().any(|s| s * x % N == 0))
        .fold(N, |acc, &x| gcd(acc, x));
    assert_eq!(oracle, 4);
    assert_eq!(s_component(el(12), &odds).unwrap().index(), at(oracle));

    // q' = join of x with (0:x) ⊄ P
    for (p, want) in [(2, 4), (3, 3)] {
        let escaping = DIVISORS
            .iter()
            .filter(|&&x| (0..N).any(|a| a * x % N == 0 && a % p != 0))
            .fold(N, |acc, &x| gcd(acc, x));
        assert_eq!(escaping, want);
        assert_eq!(
            isolated_component_formula(el(12), &ideal(r, p))
                .unwrap()
                .index(),
            at(want)
        );
    }
}

#[test]
fn z12sl_uniqueness_theorems() {
    let m = z12();
    let r = m.ring();
    let el = |d: usize| m.submodule(at(d)).unwrap();
    let mut p23 = vec![zn_ideal(N, 2), zn_ideal(N, 3)];
    p23.sort();
    for d in [12, 6] {
        let f = verify_first_uniqueness(el(d)).unwrap();
        assert!(f.holds);
        let mut from_transporters: Vec<u64> = f
            .transporter_primes
            .iter()
            .map(|(p, _)| p.members().0)
            .collect();
        from_transporters.dedup();
        assert_eq!(from_transporters, p23);
    }
    let f = verify_first_uniqueness(el(12)).unwrap();
    let witness = |g: usize| {
        f.transporter_primes
            .iter()
            .find(|(p, _)| p.members().0 == zn_ideal(N, g))
            .unwrap()
            .1
    };
    let (x2, x3) = (witness(2), witness(3));
    assert!(
        el(12).transporter(x2).is_primary()
            && el(12).transporter(x2).radical().members().0 == zn_ideal(N, 2)
    );
    assert!(
        el(12).transporter(x3).is_primary()
            && el(12).transporter(x3).radical().members().0 == zn_ideal(N, 3)
    );
    assert_eq!(el(12).transporter(at(3)).members().0, zn_ideal(N, 4));

    let s = verify_second_uniqueness(el(12), &[ideal(r, 2)]).unwrap();
    assert!(s.holds);
    assert!(s.meets.iter().all(|q| q.index() == at(4)));
    assert_eq!(s.s_component.index(), at(4));
    let s = verify_second_uniqueness(el(6), &[ideal(r, 3)]).unwrap();
    assert!(s.holds);
    assert_eq!(s.s_component.index(), at(3));

    // (0:r) = 0 exactly for the units
    for a in 0..N {
        let unit = gcd(a, N) == 1;
        assert_eq!(el(12).residual_by_element(a).index() == at(12), unit);
        assert_eq!(saturation_fixpoint_check(el(12), a).unwrap(), unit);
    }
    assert!(saturation_fixpoint_check(el(12), 5).unwrap());
    assert!(!saturation_fixpoint_check(el(12), 2).unwrap());
}

#[test]
fn z8_chain() {
    let m = submodule_lattice(8).unwrap();
    assert_eq!(m.size(), 4);
    for x in 0..3 {
        assert!(m.leq(x + 1, x));
    }
    let q = m.submodule(lattice_index(8, 4)).unwrap();
    assert!(is_primary_element(q) && is_primary_oracle(&m, q.index()));
    assert_eq!(primary_radical(q).unwrap().members().0, zn_ideal(8, 2));
}

#[test]
fn generation_is_deterministic() {
    let a = generate_random(1, 8, 6).unwrap();
    let b = generate_random(1, 8, 6).unwrap();
    assert_eq!(a.to_raw(), b.to_raw());
    assert_eq!(a.ring().to_raw(), b.ring().to_raw());
    let c = generate_random(2, 8, 6).unwrap();
    for m in [&a, &c] {
        assert!(m.ring().to_raw().violations().is_empty());
        assert!(m.to_raw().violations(m.ring()).is_empty());
    }
}

#[test]
fn z12sl_round_trip_and_directive() {
    let m = z12();
    let file = StructureFile::from_module(&m);
    assert_eq!(parse_structure(&serialize_structure(&file)).unwrap(), file);
    let directive =
        parse_structure(r#"{"ring":{"kind":"Zn","n":12},"module":{"generate":{"kind":"submodule-lattice","n":12}}}"#)
            .unwrap();
    assert_eq!(directive.expand().unwrap().to_raw(), m.to_raw());
    assert_eq!(submodule_lattice_raw(12).unwrap().1, m.to_raw());
}
