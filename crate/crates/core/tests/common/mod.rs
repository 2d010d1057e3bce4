//! Shared fixtures and generators for the integration suites.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use locus::rat::Rat;
use locus::schedule::{ScheduleMap, ScheduleRule};
use locus::stream::{ExpPeriodicStream, Term};
use locus::world::{IdentityPolicy, World};
use locus::worldspec::load_world;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn fixture(name: &str) -> World {
    load_world(&corpus_dir().join(name)).expect("corpus fixture parses")
}

pub const ORACLE_BASES: [&str; 5] = ["1/3", "1/2", "1", "2", "4"];

/// Random stream from the oracle family: bases from a fixed menu,
/// period at most 4, prefix at most 3, small integer coefficients.
pub fn random_stream(rng: &mut impl Rng) -> ExpPeriodicStream {
    let period = rng.random_range(1..=4usize);
    let prefix: Vec<Rat> = (0..rng.random_range(0..=3))
        .map(|_| Rat::from_int(rng.random_range(-9..=9)))
        .collect();
    let mut bases: Vec<&str> = ORACLE_BASES.to_vec();
    bases.shuffle(rng);
    let n_terms = rng.random_range(0..=2usize);
    let terms: Vec<Term> = bases
        .into_iter()
        .take(n_terms)
        .map(|b| {
            let coeffs: Vec<Rat> = (0..period)
                .map(|_| Rat::from_int(rng.random_range(-9..=9)))
                .collect();
            Term::new(b.parse().unwrap(), coeffs)
        })
        .collect();
    ExpPeriodicStream::new(prefix, period, terms).unwrap()
}

/// Random plain periodic stream (base-1 tail only).
pub fn random_periodic_stream(rng: &mut impl Rng) -> ExpPeriodicStream {
    let period = rng.random_range(1..=4usize);
    let prefix: Vec<Rat> = (0..rng.random_range(0..=3))
        .map(|_| Rat::from_int(rng.random_range(-5..=5)))
        .collect();
    let coeffs: Vec<Rat> = (0..period)
        .map(|_| Rat::from_int(rng.random_range(-5..=5)))
        .collect();
    ExpPeriodicStream::new(prefix, period, vec![Term::new(Rat::one(), coeffs)]).unwrap()
}

/// Random verified bijection: a permutation of residue classes aligned
/// at their smallest representatives, optionally composed with one
/// explicit transposition.
pub fn random_bijection(rng: &mut impl Rng) -> ScheduleMap {
    let m = rng.random_range(1..=4u64);
    let mut targets: Vec<u64> = (0..m).collect();
    targets.shuffle(rng);
    let rules: Vec<ScheduleRule> = (0..m)
        .map(|r| {
            let sr = if r == 0 { m } else { r };
            let tr = if targets[r as usize] == 0 {
                m
            } else {
                targets[r as usize]
            };
            ScheduleRule {
                residue: r,
                modulus: m,
                alpha: Rat::one(),
                beta: Rat::from_int(tr as i64 - sr as i64),
            }
        })
        .collect();
    let base = ScheduleMap::new(rules.clone(), Vec::new());
    let mut exceptions = Vec::new();
    if rng.random_bool(0.5) {
        let a = rng.random_range(1..=6u64);
        let b = a + rng.random_range(1..=6u64);
        let ia = base.image(a).unwrap();
        let ib = base.image(b).unwrap();
        exceptions.push((a, ib));
        exceptions.push((b, ia));
    }
    let sched = ScheduleMap::new(rules, exceptions);
    sched.verify().expect("generated schedules are bijections");
    sched
}

/// Random world on the unit grid: one birth per period, unit lifespan,
/// a single segment stream.
pub fn random_world(rng: &mut impl Rng, name: &str, shared: bool) -> World {
    let segment = if rng.random_bool(0.7) {
        random_periodic_stream(rng)
    } else {
        random_stream(rng)
    };
    let identity = if shared {
        IdentityPolicy::SharedRegistry {
            registry: "pool".into(),
            schedule: random_bijection(rng),
        }
    } else {
        IdentityPolicy::DistinctAcrossWorlds
    };
    World::new(
        name,
        Rat::one(),
        Rat::zero(),
        Rat::one(),
        vec![segment],
        identity,
    )
    .unwrap()
}

/// Exhaustive window positivity table: `result[l-1]` is true iff every
/// window of length `l` with start in `1..=max_start` sums positive.
pub fn exhaustive_window_table(
    d: &ExpPeriodicStream,
    max_len: u64,
    max_start: u64,
) -> Vec<bool> {
    (1..=max_len)
        .map(|len| {
            (1..=max_start).all(|a| {
                let hi = d.partial_sum(a + len - 1);
                let w = if a > 1 { &hi - &d.partial_sum(a - 1) } else { hi };
                w.is_positive()
            })
        })
        .collect()
}
