//! Model generators: submodule lattices of `Z_n` and seeded random instances.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{BitSet, WIDTH};
use crate::error::{Error, Result};
use crate::module::{LeModule, RawModule};
use crate::ring::{FiniteRing, RawRing};
use crate::Limits;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Raw tables of the submodule lattice of `Z_n` over `Z_n`.
///
/// Elements are `⟨d⟩` for the divisors `d` of `n` in ascending order, so `e =
/// ⟨1⟩` has index 0 and `0_M = ⟨n⟩` comes last (named `0_M`). Order is
/// reverse divisibility, `⟨a⟩ + ⟨b⟩ = ⟨gcd(a, b)⟩` and `r·⟨d⟩ = ⟨gcd(n, rd)⟩`.
pub fn submodule_lattice_raw(n: usize) -> Result<(RawRing, RawModule)> {
    if n < 2 {
        return Err(Error::usage(format!(
            "submodule lattice needs n >= 2, got {n}"
        )));
    }
    if n > WIDTH {
        return Err(Error::Capacity {
            what: "ring size",
            got: n,
            cap: WIDTH,
        });
    }
    let divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let index: HashMap<usize, usize> = divisors.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let idx = |d: usize| index[&d];
    let names = divisors
        .iter()
        .map(|&d| {
            if d == n {
                "0_M".to_string()
            } else {
                format!("⟨{d}⟩")
            }
        })
        .collect();
    let module = RawModule {
        size: divisors.len(),
        names: Some(names),
        leq: divisors
            .iter()
            .map(|&a| divisors.iter().map(|&b| a % b == 0).collect())
            .collect(),
        add: divisors
            .iter()
            .map(|&a| divisors.iter().map(|&b| idx(gcd(a, b))).collect())
            .collect(),
        zero: idx(n),
        top: idx(1),
        action: (0..n)
            .map(|r| divisors.iter().map(|&d| idx(gcd(n, r * d))).collect())
            .collect(),
    };
    Ok((RawRing::zn(n), module))
}

/// The validated submodule lattice of `Z_n`.
pub fn submodule_lattice(n: usize) -> Result<LeModule> {
    let (ring, module) = submodule_lattice_raw(n)?;
    LeModule::new(FiniteRing::new(&ring)?, &module)
}

/// `Z_q[x]/(f)` for monic `f = x^d + low[d-1] x^{d-1} + ... + low[0]`.
/// Element index is `Σ c_i q^i` for coefficient vector `c`.
pub fn poly_quotient(q: usize, low: &[usize]) -> RawRing {
    let d = low.len();
    let size = q.pow(d as u32);
    let decode = |mut i: usize| {
        let mut c = vec![0; d];
        for slot in c.iter_mut() {
            *slot = i % q;
            i /= q;
        }
        c
    };
    let encode = |c: &[usize]| c.iter().rev().fold(0, |acc, &v| acc * q + v);
    let mul = |a: &[usize], b: &[usize]| {
        let mut prod = vec![0; 2 * d];
        for i in 0..d {
            for j in 0..d {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % q;
            }
        }
        // x^d = -(low[0] + ... + low[d-1] x^{d-1})
        for k in (d..2 * d).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &l) in low.iter().enumerate() {
                prod[k - d + i] = (prod[k - d + i] + (q - l % q) * c) % q;
            }
        }
        prod.truncate(d);
        prod
    };
    let elems: Vec<Vec<usize>> = (0..size).map(decode).collect();
    RawRing {
        size,
        add: elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        encode(
                            &a.iter()
                                .zip(b)
                                .map(|(x, y)| (x + y) % q)
                                .collect::<Vec<_>>(),
                        )
                    })
                    .collect()
            })
            .collect(),
        mul: elems
            .iter()
            .map(|a| elems.iter().map(|b| encode(&mul(a, b))).collect())
            .collect(),
        zero: 0,
        one: encode(&decode(1)),
    }
}

/// Direct product `R × S`; element `(a, b)` has index `a·|S| + b`.
pub fn product_ring(r: &RawRing, s: &RawRing) -> RawRing {
    let (k, l) = (r.size, s.size);
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (0..l).map(move |b| (a, b))).collect();
    let table = |f: &dyn Fn((usize, usize), (usize, usize)) -> (usize, usize)| {
        pairs
            .iter()
            .map(|&x| {
                pairs
                    .iter()
                    .map(|&y| {
                        let (a, b) = f(x, y);
                        a * l + b
                    })
                    .collect()
            })
            .collect()
    };
    RawRing {
        size: k * l,
        add: table(&|(a, b), (c, d)| (r.add[a][c], s.add[b][d])),
        mul: table(&|(a, b), (c, d)| (r.mul[a][c], s.mul[b][d])),
        zero: r.zero * l + s.zero,
        one: r.one * l + s.one,
    }
}

/// Small rings beyond `Z_n` used by the random generator.
fn special_rings() -> Vec<RawRing> {
    vec![
        poly_quotient(2, &[1, 1]),    // F4
        poly_quotient(2, &[0, 0]),    // Z2[x]/(x^2)
        poly_quotient(2, &[0, 0, 0]), // Z2[x]/(x^3)
        poly_quotient(2, &[1, 1, 0]), // F8
        poly_quotient(3, &[0, 0]),    // Z3[x]/(x^2)
        poly_quotient(3, &[1, 0]),    // F9
        poly_quotient(2, &[0, 0, 0, 0]),
        poly_quotient(4, &[1, 1]), // Galois ring of order 16
        poly_quotient(4, &[0, 0]), // Z4[x]/(x^2)
    ]
}

fn sample_ring(rng: &mut ChaCha8Rng, max_ring: usize) -> RawRing {
    let mut bases: Vec<RawRing> = (2..=max_ring.min(WIDTH)).map(RawRing::zn).collect();
    bases.extend(special_rings().into_iter().filter(|r| r.size <= max_ring));
    if bases.is_empty() || rng.gen_bool(0.02) {
        return RawRing::zn(1);
    }
    let mut ring = bases.choose(rng).unwrap().clone();
    if rng.gen_bool(0.35) {
        let fits: Vec<&RawRing> = bases
            .iter()
            .filter(|b| b.size * ring.size <= max_ring)
            .collect();
        if let Some(other) = fits.choose(rng) {
            ring = product_ring(&ring, other);
        }
    }
    ring
}

/// All additive subgroups (or ideals, with `ideals`) containing `base`.
fn substructures_above(ring: &FiniteRing, base: BitSet, ideals: bool) -> Vec<BitSet> {
    let close = |s: BitSet| {
        if ideals {
            ring.ideal_generated(s).members()
        } else {
            ring.additive_closure(s)
        }
    };
    let mut found = vec![close(base)];
    for a in ring.elements() {
        let c = close(base.with(a));
        if !found.contains(&c) {
            found.push(c);
        }
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let c = close(found[i].union(found[j]));
            if !found.contains(&c) {
                found.push(c);
            }
        }
        i += 1;
    }
    found.sort();
    found
}

/// The lattice of subgroups (or ideals) `H ⊇ I` with `H + K`, `r·H = rH + I`.
fn quotient_lattice(ring: &FiniteRing, base: BitSet, ideals: bool) -> RawModule {
    let elems = substructures_above(ring, base, ideals);
    let index: HashMap<BitSet, usize> = elems.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let closure = |s: BitSet| index[&ring.additive_closure(s)];
    RawModule {
        size: elems.len(),
        names: None,
        leq: elems
            .iter()
            .map(|a| elems.iter().map(|b| a.is_subset(*b)).collect())
            .collect(),
        add: elems
            .iter()
            .map(|a| elems.iter().map(|b| closure(a.union(*b))).collect())
            .collect(),
        zero: index[&base],
        top: index[&ring.all()],
        action: ring
            .elements()
            .map(|r| {
                elems
                    .iter()
                    .map(|h| {
                        closure(
                            h.iter()
                                .map(|x| ring.mul(r, x))
                                .collect::<BitSet>()
                                .union(base),
                        )
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Chain `0 < 1 < ... < t`, addition truncated at `t` (or `max`), where ring
/// elements outside the prime `p` fix everything and those inside kill it.
fn prime_chain(ring: &FiniteRing, p: BitSet, t: usize, truncated_sum: bool) -> RawModule {
    let m = t + 1;
    RawModule {
        size: m,
        names: None,
        leq: (0..m).map(|x| (0..m).map(|y| x <= y).collect()).collect(),
        add: (0..m)
            .map(|x| {
                (0..m)
                    .map(|y| {
                        if truncated_sum {
                            (x + y).min(t)
                        } else {
                            x.max(y)
                        }
                    })
                    .collect()
            })
            .collect(),
        zero: 0,
        top: t,
        action: ring
            .elements()
            .map(|r| (0..m).map(|x| if p.contains(r) { 0 } else { x }).collect())
            .collect(),
    }
}

/// Componentwise product of two modules over the same ring.
fn product_module(a: &RawModule, b: &RawModule) -> RawModule {
    let l = b.size;
    let pairs: Vec<(usize, usize)> = (0..a.size)
        .flat_map(|x| (0..l).map(move |y| (x, y)))
        .collect();
    let enc = |(x, y): (usize, usize)| x * l + y;
    RawModule {
        size: a.size * l,
        names: None,
        leq: pairs
            .iter()
            .map(|&(x, y)| {
                pairs
                    .iter()
                    .map(|&(u, v)| a.leq[x][u] && b.leq[y][v])
                    .collect()
            })
            .collect(),
        add: pairs
            .iter()
            .map(|&(x, y)| {
                pairs
                    .iter()
                    .map(|&(u, v)| enc((a.add[x][u], b.add[y][v])))
                    .collect()
            })
            .collect(),
        zero: enc((a.zero, b.zero)),
        top: enc((a.top, b.top)),
        action: (0..a.action.len())
            .map(|r| {
                pairs
                    .iter()
                    .map(|&(x, y)| enc((a.action[r][x], b.action[r][y])))
                    .collect()
            })
            .collect(),
    }
}

/// Relabel elements: old index `x` becomes `perm[x]`.
fn permute(raw: &RawModule, perm: &[usize]) -> RawModule {
    let m = raw.size;
    let mut inv = vec![0; m];
    for (x, &p) in perm.iter().enumerate() {
        inv[p] = x;
    }
    RawModule {
        size: m,
        names: raw
            .names
            .as_ref()
            .map(|ns| (0..m).map(|p| ns[inv[p]].clone()).collect()),
        leq: (0..m)
            .map(|p| (0..m).map(|q| raw.leq[inv[p]][inv[q]]).collect())
            .collect(),
        add: (0..m)
            .map(|p| (0..m).map(|q| perm[raw.add[inv[p]][inv[q]]]).collect())
            .collect(),
        zero: perm[raw.zero],
        top: perm[raw.top],
        action: raw
            .action
            .iter()
            .map(|row| (0..m).map(|p| perm[row[inv[p]]]).collect())
            .collect(),
    }
}

fn sample_base_module(
    rng: &mut ChaCha8Rng,
    ring: &FiniteRing,
    max_module: usize,
) -> Option<RawModule> {
    let ideals = ring.ideals();
    let base = ideals.choose(rng)?.members();
    let arms = if max_module >= 4 { 4 } else { 3 };
    match rng.gen_range(0..arms) {
        0 => Some(quotient_lattice(ring, base, true)),
        1 => Some(quotient_lattice(ring, base, false)),
        2 => {
            let primes: Vec<BitSet> = ideals
                .iter()
                .filter(|i| i.is_prime())
                .map(|i| i.members())
                .collect();
            let p = *primes.choose(rng)?;
            let t = rng.gen_range(1..max_module.max(2));
            Some(prime_chain(ring, p, t, rng.gen_bool(0.6)))
        }
        _ => {
            let a = sample_base_module(rng, ring, max_module / 2)?;
            let b = sample_base_module(rng, ring, max_module / 2)?;
            (a.size * b.size <= max_module).then(|| product_module(&a, &b))
        }
    }
}

/// Try up to `tries` single-entry edits, keeping each that leaves the
/// structure valid.
fn perturb(rng: &mut ChaCha8Rng, ring: &FiniteRing, raw: &mut RawModule, tries: usize) {
    let m = raw.size;
    for _ in 0..tries {
        let mut candidate = raw.clone();
        if rng.gen_bool(0.7) {
            let r = rng.gen_range(0..ring.size());
            let x = rng.gen_range(0..m);
            candidate.action[r][x] = rng.gen_range(0..m);
        } else {
            let (x, y, z) = (
                rng.gen_range(0..m),
                rng.gen_range(0..m),
                rng.gen_range(0..m),
            );
            candidate.add[x][y] = z;
            candidate.add[y][x] = z;
        }
        if candidate != *raw && candidate.violations(ring).is_empty() {
            *raw = candidate;
        }
    }
}

const SAMPLING_BUDGET: usize = 500;

/// A valid random instance with ring size `≤ max_ring` and module size
/// `≤ max_module`, reproducible from `seed`.
///
/// Candidates come from known-valid constructions (ideal and subgroup
/// lattices of quotients `R/I`, prime-indexed chains, and products of
/// these), are relabelled by a random permutation, then perturbed by
/// single-entry edits that survive validation.
pub fn generate_random(seed: u64, max_ring: usize, max_module: usize) -> Result<LeModule> {
    if max_ring == 0 || max_module == 0 {
        return Err(Error::usage("random bounds must be positive"));
    }
    let limits = Limits::default();
    for (what, got, cap) in [
        ("ring size", max_ring, limits.max_ring),
        ("module size", max_module, limits.max_module),
    ] {
        if got > cap {
            return Err(Error::Capacity { what, got, cap });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLING_BUDGET {
        let ring = FiniteRing::new(&sample_ring(&mut rng, max_ring))?;
        if max_module == 1 || ring.size() == 1 {
            let trivial = RawModule::trivial(ring.size());
            return LeModule::new(ring, &trivial);
        }
        let Some(raw) = sample_base_module(&mut rng, &ring, max_module) else {
            continue;
        };
        if raw.size > max_module {
            continue;
        }
        let mut perm: Vec<usize> = (0..raw.size).collect();
        perm.shuffle(&mut rng);
        let mut raw = permute(&raw, &perm);
        let tries = rng.gen_range(0..=12);
        perturb(&mut rng, &ring, &mut raw, tries);
        return LeModule::new(ring, &raw);
    }
    Err(Error::Capacity {
        what: "random sampling attempts",
        got: SAMPLING_BUDGET,
        cap: SAMPLING_BUDGET,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z12_lattice_shape() {
        let m = submodule_lattice(12).unwrap();
        let names: Vec<String> = m.elements().map(|x| m.name(x)).collect();
        assert_eq!(names, ["⟨1⟩", "⟨2⟩", "⟨3⟩", "⟨4⟩", "⟨6⟩", "0_M"]);
        assert_eq!(m.submodule_elements().len(), 6);
    }

    #[test]
    fn small_submodule_lattices_are_chains_where_expected() {
        let m = submodule_lattice(2).unwrap();
        assert_eq!(m.size(), 2);
        assert!(m.leq(m.zero(), m.top()));
        let m = submodule_lattice(8).unwrap();
        assert_eq!(m.size(), 4);
        for x in m.elements() {
            for y in m.elements() {
                assert!(m.leq(x, y) || m.leq(y, x));
            }
        }
        assert!(matches!(submodule_lattice(1), Err(Error::Usage(_))));
    }

    #[test]
    fn catalogue_rings_validate() {
        for raw in special_rings() {
            FiniteRing::new(&raw).unwrap();
        }
        let p = product_ring(&RawRing::zn(2), &poly_quotient(2, &[1, 1]));
        assert_eq!(FiniteRing::new(&p).unwrap().size(), 8);
    }

    #[test]
    fn f4_has_only_trivial_ideals() {
        let f4 = FiniteRing::new(&poly_quotient(2, &[1, 1])).unwrap();
        assert_eq!(f4.ideals().len(), 2);
        assert!(f4.zero_ideal().is_maximal());
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let a = generate_random(1, 8, 6).unwrap();
        let b = generate_random(1, 8, 6).unwrap();
        assert_eq!(a.to_raw(), b.to_raw());
        assert_eq!(a.ring(), b.ring());
        for seed in (0..40).chain([191, 1053240]) {
            let m = generate_random(seed, 16, 8).unwrap();
            assert!(m.ring().size() <= 16 && m.size() <= 8);
        }
        let one = generate_random(3, 8, 1).unwrap();
        assert_eq!(one.size(), 1);
        assert!(matches!(generate_random(1, 0, 4), Err(Error::Usage(_))));
        assert!(matches!(
            generate_random(1, 65, 4),
            Err(Error::Capacity { .. })
        ));
    }
}
