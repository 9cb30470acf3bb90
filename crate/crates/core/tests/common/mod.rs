//! Shared corpus and brute-force oracles. The oracles work from raw tables
//! and definitions only and never call the operations they check.

#![allow(dead_code)]

use lemodule::models::{generate_random, submodule_lattice, submodule_lattice_raw};
use lemodule::{Axiom, LeModule, RawModule, RawRing, Violation};

pub const RANDOM_SEEDS: std::ops::Range<u64> = 0..64;
pub const RANDOM_MAX_RING: usize = 16;
pub const RANDOM_MAX_MODULE: usize = 8;

pub const Z12_TOP: usize = 0;
pub const Z12_D2: usize = 1;
pub const Z12_D3: usize = 2;
pub const Z12_D4: usize = 3;
pub const Z12_D6: usize = 4;
pub const Z12_ZERO: usize = 5;

pub struct Instance {
    pub name: String,
    pub module: LeModule,
}

/// Z12SL, the submodule lattices of `Z_n` for `2 ≤ n ≤ 36`, and the fixed
/// random seeds.
pub fn corpus() -> Vec<Instance> {
    let mut out = vec![Instance {
        name: "Z12SL".into(),
        module: submodule_lattice(12).unwrap(),
    }];
    for n in (2..=36).filter(|&n| n != 12) {
        out.push(Instance {
            name: format!("lattice Z{n}"),
            module: submodule_lattice(n).unwrap(),
        });
    }
    out.extend(random_corpus());
    out
}

pub fn random_corpus() -> Vec<Instance> {
    RANDOM_SEEDS
        .map(|seed| Instance {
            name: format!("random seed {seed}"),
            module: generate_random(seed, RANDOM_MAX_RING, RANDOM_MAX_MODULE).unwrap(),
        })
        .collect()
}

pub fn z12_raw() -> (RawRing, RawModule) {
    submodule_lattice_raw(12).unwrap()
}

/// Deliberately broken variants of known-good tables.
pub fn tampered() -> Vec<(String, RawRing, RawModule)> {
    let (ring, module) = z12_raw();
    let mut out = Vec::new();
    let mut push = |name: &str, r: RawRing, m: RawModule| out.push((name.to_string(), r, m));

    let mut r = ring.clone();
    r.mul[2][3] = 7;
    r.mul[3][2] = 7;
    push("Z12 mul[2][3] = 7", r, module.clone());

    let mut r = ring.clone();
    r.add[1][2] = 4;
    push("Z12 add not commutative", r, module.clone());

    let mut r = ring.clone();
    r.one = 5;
    push("Z12 one = 5", r, module.clone());

    let mut m = module.clone();
    m.action[2][Z12_D2] = Z12_D3;
    push("Z12SL action(2, <2>) = <3>", ring.clone(), m);

    let mut m = module.clone();
    m.action[1][Z12_D4] = Z12_D2;
    push("Z12SL action(1, <4>) = <2>", ring.clone(), m);

    let mut m = module.clone();
    m.action[0][Z12_D3] = Z12_D3;
    push("Z12SL action(0, <3>) = <3>", ring.clone(), m);

    let mut m = module.clone();
    m.add[Z12_D4][Z12_D3] = Z12_D2;
    push("Z12SL add not commutative", ring.clone(), m);

    let mut m = module.clone();
    m.add[Z12_D4][Z12_D3] = Z12_D6;
    m.add[Z12_D3][Z12_D4] = Z12_D6;
    push("Z12SL <4>+<3> = <6>", ring.clone(), m);

    let mut m = module.clone();
    m.top = Z12_D2;
    push("Z12SL top = <2>", ring.clone(), m);

    let mut m = module.clone();
    m.leq[Z12_D2][Z12_D4] = true;
    push("Z12SL <2> <= <4> added", ring.clone(), m);

    let mut m = module.clone();
    m.leq[Z12_D6][Z12_D3] = false;
    push("Z12SL <6> <= <3> removed", ring.clone(), m);

    let mut m = module.clone();
    m.zero = Z12_D6;
    push("Z12SL zero = <6>", ring.clone(), m);

    let (ring8, mut m8) = submodule_lattice_raw(8).unwrap();
    m8.action[2][1] = 1;
    push("Z8 chain action(2, <2>) = <2>", ring8, m8);
    out
}

// ---- axiom oracle --------------------------------------------------------

fn lub(leq: &[Vec<bool>], x: usize, y: usize) -> Option<usize> {
    let n = leq.len();
    let ups: Vec<usize> = (0..n).filter(|&c| leq[x][c] && leq[y][c]).collect();
    ups.iter()
        .copied()
        .find(|&c| ups.iter().all(|&d| leq[c][d]))
}

fn glb(leq: &[Vec<bool>], x: usize, y: usize) -> Option<usize> {
    let n = leq.len();
    let downs: Vec<usize> = (0..n).filter(|&c| leq[c][x] && leq[c][y]).collect();
    downs
        .iter()
        .copied()
        .find(|&c| downs.iter().all(|&d| leq[d][c]))
}

/// Whether a reported ring violation is a genuine failure of its axiom.
pub fn ring_violation_is_genuine(r: &RawRing, v: &Violation) -> bool {
    let w = &v.witness;
    let add = |a: usize, b: usize| r.add[a][b];
    let mul = |a: usize, b: usize| r.mul[a][b];
    match v.axiom {
        Axiom::RingAddCommutative => add(w[0], w[1]) != add(w[1], w[0]),
        Axiom::RingAddAssociative => add(add(w[0], w[1]), w[2]) != add(w[0], add(w[1], w[2])),
        Axiom::RingAddIdentity => add(r.zero, w[0]) != w[0] || add(w[0], r.zero) != w[0],
        Axiom::RingAddInverse => (0..r.size).all(|b| add(w[0], b) != r.zero),
        Axiom::RingMulCommutative => mul(w[0], w[1]) != mul(w[1], w[0]),
        Axiom::RingMulAssociative => mul(mul(w[0], w[1]), w[2]) != mul(w[0], mul(w[1], w[2])),
        Axiom::RingMulIdentity => mul(r.one, w[0]) != w[0] || mul(w[0], r.one) != w[0],
        Axiom::RingDistributive => {
            mul(w[0], add(w[1], w[2])) != add(mul(w[0], w[1]), mul(w[0], w[2]))
                || mul(add(w[1], w[2]), w[0]) != add(mul(w[1], w[0]), mul(w[2], w[0]))
        }
        _ => false,
    }
}

/// Whether a reported module violation is a genuine failure of its axiom.
pub fn module_violation_is_genuine(r: &RawRing, m: &RawModule, v: &Violation) -> bool {
    let w = &v.witness;
    let leq = |x: usize, y: usize| m.leq[x][y];
    let add = |x: usize, y: usize| m.add[x][y];
    let act = |a: usize, x: usize| m.action[a][x];
    let join = |x: usize, y: usize| lub(&m.leq, x, y);
    match v.axiom {
        Axiom::LeqReflexive => !leq(w[0], w[0]),
        Axiom::LeqAntisymmetric => w[0] != w[1] && leq(w[0], w[1]) && leq(w[1], w[0]),
        Axiom::LeqTransitive => leq(w[0], w[1]) && leq(w[1], w[2]) && !leq(w[0], w[2]),
        Axiom::TopGreatest => !leq(w[0], m.top),
        Axiom::JoinExists => join(w[0], w[1]).is_none(),
        Axiom::MeetExists => glb(&m.leq, w[0], w[1]).is_none(),
        Axiom::AddCommutative => add(w[0], w[1]) != add(w[1], w[0]),
        Axiom::AddAssociative => add(add(w[0], w[1]), w[2]) != add(w[0], add(w[1], w[2])),
        Axiom::AddIdentity => add(m.zero, w[0]) != w[0] || add(w[0], m.zero) != w[0],
        Axiom::S => {
            let (x, a, b) = (w[0], w[1], w[2]);
            let ab = join(a, b).unwrap();
            Some(add(x, ab)) != join(add(x, a), add(x, b))
        }
        Axiom::M1 => {
            let (a, x, y) = (w[0], w[1], w[2]);
            act(a, add(x, y)) != add(act(a, x), act(a, y))
        }
        Axiom::M2 => {
            let (a, b, x) = (w[0], w[1], w[2]);
            !leq(act(r.add[a][b], x), add(act(a, x), act(b, x)))
        }
        Axiom::M3 => {
            let (a, b, x) = (w[0], w[1], w[2]);
            act(r.mul[a][b], x) != act(a, act(b, x))
        }
        Axiom::M4One => act(r.one, w[0]) != w[0],
        Axiom::M4ZeroRing => act(r.zero, w[0]) != m.zero,
        Axiom::M4ZeroModule => act(w[0], m.zero) != m.zero,
        Axiom::M5 => {
            let (a, x, y) = (w[0], w[1], w[2]);
            Some(act(a, join(x, y).unwrap())) != join(act(a, x), act(a, y))
        }
        _ => false,
    }
}

// ---- ring oracles ----------------------------------------------------------

/// Every ideal, by testing all subsets of the ring (rings up to 16 elements).
pub fn brute_ideals(r: &RawRing) -> Vec<u64> {
    assert!(r.size <= 16);
    let k = r.size;
    (0u64..1 << k)
        .filter(|&s| {
            let has = |a: usize| s >> a & 1 == 1;
            has(r.zero)
                && (0..k).all(|a| {
                    !has(a)
                        || ((0..k).all(|b| !has(b) || has(r.add[a][b]))
                            && (0..k).all(|t| has(r.mul[t][a])))
                })
        })
        .collect()
}

pub fn brute_radical(r: &RawRing, ideal: u64) -> u64 {
    (0..r.size)
        .filter(|&a| {
            let mut p = a;
            (0..=r.size).any(|_| {
                let hit = ideal >> p & 1 == 1;
                p = r.mul[p][a];
                hit
            })
        })
        .fold(0, |acc, a| acc | 1 << a)
}

// ---- module oracles --------------------------------------------------------

pub fn meet_of(m: &LeModule, xs: &[usize]) -> usize {
    xs.iter().fold(m.top(), |acc, &x| m.meet(acc, x))
}

/// `A·n` from formal sums: level `j` holds every value of a sum of `j`
/// terms `a·n`. Since `0_R·n = 0_M` is a term, levels only grow, so they
/// stabilise within `|M|` steps; the join of the last level is `A·n`.
pub fn ideal_action_oracle(m: &LeModule, ideal: &[usize], n: usize) -> usize {
    let singles: Vec<usize> = ideal.iter().map(|&a| m.act(a, n)).collect();
    let mut level: Vec<bool> = vec![false; m.size()];
    for &s in &singles {
        level[s] = true;
    }
    for _ in 0..m.size() {
        let mut next = level.clone();
        for x in (0..m.size()).filter(|&x| level[x]) {
            for &s in &singles {
                next[m.add(x, s)] = true;
            }
        }
        level = next;
    }
    let values: Vec<usize> = (0..m.size()).filter(|&x| level[x]).collect();
    values[1..].iter().fold(values[0], |acc, &x| m.join(acc, x))
}

pub fn is_submodule_oracle(m: &LeModule, n: usize) -> bool {
    m.leq(m.add(n, n), n) && m.ring().elements().all(|r| m.leq(m.act(r, n), n))
}

/// `∃ k ≥ 1: a^k·e ≤ n`, walking `|R| + 1` powers.
fn power_below(m: &LeModule, a: usize, n: usize) -> bool {
    let r = m.ring();
    let mut p = a;
    for _ in 0..=r.size() {
        if m.leq(m.act(p, m.top()), n) {
            return true;
        }
        p = r.mul(p, a);
    }
    false
}

/// The defining condition of a primary element, checked literally.
pub fn is_primary_oracle(m: &LeModule, n: usize) -> bool {
    n != m.top()
        && is_submodule_oracle(m, n)
        && m.ring().elements().all(|a| {
            m.elements()
                .all(|x| !m.leq(m.act(a, x), n) || m.leq(x, n) || power_below(m, a, n))
        })
}

pub fn is_prime_oracle(m: &LeModule, p: usize) -> bool {
    p != m.top()
        && is_submodule_oracle(m, p)
        && m.ring().elements().all(|a| {
            let in_colon = m.leq(m.act(a, m.top()), p);
            m.elements()
                .all(|x| !m.leq(m.act(a, x), p) || in_colon || m.leq(x, p))
        })
}

/// Radical of `n` as a bitset over ring indices, from `(n:e)` by powers.
pub fn radical_oracle(m: &LeModule, n: usize) -> u64 {
    let r = m.ring();
    let colon: u64 = r
        .elements()
        .filter(|&a| m.leq(m.act(a, m.top()), n))
        .fold(0, |acc, a| acc | 1 << a);
    brute_radical(&r.to_raw(), colon)
}

/// Every reduced primary decomposition of `n` from all subsets of all
/// primary elements, without pruning. Components ascending by index.
pub fn unpruned_decompositions(m: &LeModule, n: usize) -> Vec<Vec<usize>> {
    let primaries: Vec<usize> = m.elements().filter(|&q| is_primary_oracle(m, q)).collect();
    assert!(primaries.len() <= 16, "oracle limited to small modules");
    let mut out = Vec::new();
    for mask in 1u32..1 << primaries.len() {
        let comps: Vec<usize> = (0..primaries.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| primaries[i])
            .collect();
        if meet_of(m, &comps) != n {
            continue;
        }
        let irredundant = (0..comps.len()).all(|i| {
            let others: Vec<usize> = comps
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &q)| q)
                .collect();
            !m.leq(meet_of(m, &others), comps[i])
        });
        let rads: Vec<u64> = comps.iter().map(|&q| radical_oracle(m, q)).collect();
        let distinct = (0..rads.len()).all(|i| (i + 1..rads.len()).all(|j| rads[i] != rads[j]));
        if irredundant && distinct {
            out.push(comps);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

// ---- classical facts about Z_n ---------------------------------------------

pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Index of `⟨d⟩` in the submodule lattice of `Z_n` (divisors ascending).
pub fn lattice_index(n: usize, d: usize) -> usize {
    divisors(n).iter().position(|&x| x == d).unwrap()
}

/// Ideal `(g)` of `Z_n` as a bitset.
pub fn zn_ideal(n: usize, g: usize) -> u64 {
    (0..n)
        .filter(|&a| a % gcd(g, n) == 0)
        .fold(0, |acc, a| acc | 1 << a)
}
