//! Sliding-window dominance: does some length L make every window sum
//! `Σ_{t=a..a+ℓ-1} d(t)` strictly positive for all starts `a >= 1` and
//! lengths `ℓ >= L`?
//!
//! `better_witness` decides this for a difference stream `d` and returns
//! a valid witness L (the least one for single-signed profiles and for
//! plain periodic tails; a provably valid one in the remaining cases).
//! The decision splits on the sign profile and the dominant base:
//!
//! * every class eventually nonnegative — windows beyond the sign
//!   threshold are positive as soon as they reach a strictly positive
//!   class, and each early start is checked against its (monotone)
//!   window limit;
//! * plain periodic tail with mixed signs — window sums along a fixed
//!   length-residue form arithmetic progressions with step = the period
//!   sum, so the last non-positive window is computable exactly;
//! * growing dominant base — the latest dominant-class element in a
//!   window decides its sign far out, so all dominant coefficients must
//!   share the sign and a finite region remains to enumerate;
//! * decaying dominant base — same with the earliest element.

use std::cell::RefCell;

use crate::rat::Rat;
use crate::stream::ExpPeriodicStream;

/// Memoized prefix sums, so the scans below pay one evaluation per
/// index instead of one closed-form summation per window.
struct SumTable<'a> {
    d: &'a ExpPeriodicStream,
    sums: RefCell<Vec<Rat>>, // sums[n] = S(n), sums[0] = 0
}

impl<'a> SumTable<'a> {
    fn new(d: &'a ExpPeriodicStream) -> Self {
        SumTable {
            d,
            sums: RefCell::new(vec![Rat::zero()]),
        }
    }

    fn sum(&self, n: u64) -> Rat {
        let mut sums = self.sums.borrow_mut();
        while (sums.len() as u64) <= n {
            let t = sums.len() as u64;
            let next = sums.last().unwrap() + &self.d.evaluate(t);
            sums.push(next);
        }
        sums[n as usize].clone()
    }

    /// Window sum `Σ_{t=a}^{a+len-1} d(t)`, `a >= 1`, `len >= 1`.
    fn window(&self, a: u64, len: u64) -> Rat {
        &self.sum(a + len - 1) - &self.sum(a - 1)
    }
}

/// One-off window sum for tests.
#[cfg(test)]
fn window(d: &ExpPeriodicStream, a: u64, len: u64) -> Rat {
    SumTable::new(d).window(a, len)
}

/// Least L such that every window of length >= L sums strictly
/// positive, or None if no such L exists.
pub(crate) fn better_witness(d: &ExpPeriodicStream) -> Option<u64> {
    if d.is_zero() {
        return None;
    }
    let profile = d.eventual_sign_profile();
    if profile.all_nonnegative() {
        return nonnegative_witness(d, &profile);
    }
    if profile.all_nonpositive() {
        // windows far out can never be strictly positive
        return None;
    }
    let b_max = d.max_base().expect("mixed signs need tail terms").clone();
    if b_max == Rat::one() {
        periodic_dominant_witness(d)
    } else if b_max > Rat::one() {
        growing_dominant_witness(d, &b_max)
    } else {
        decaying_dominant_witness(d, &b_max)
    }
}

/// All classes eventually nonnegative: far windows are positive once
/// they contain a strictly positive class, and every start before the
/// sign threshold has monotone window sums with a computable limit.
fn nonnegative_witness(
    d: &ExpPeriodicStream,
    profile: &crate::stream::SignProfile,
) -> Option<u64> {
    use crate::stream::{ClassSign, SumClass};
    let m = profile.period as u64;
    let pos: Vec<bool> = profile
        .classes
        .iter()
        .map(|c| *c == ClassSign::EventuallyPositive)
        .collect();
    if !pos.iter().any(|p| *p) {
        // the tail is eventually identically zero
        return None;
    }
    // max distance from any class to the next strictly positive one
    let mut gap = 1u64;
    for r in 0..m {
        let mut k = 0;
        while !pos[((r + k) % m) as usize] {
            k += 1;
        }
        gap = gap.max(k + 1);
    }

    // starts before the threshold: window sums are nondecreasing once
    // past it, with limit (total sum) - S(a-1)
    let total = match d.classify_partial_sums() {
        SumClass::DivergesPlus => None, // +infinity: always eventually fine
        SumClass::ConvergesTo(c) => Some(c),
        _ => unreachable!("nonnegative tail gives monotone partial sums"),
    };
    let table = SumTable::new(d);
    let n = profile.threshold;
    let mut last_bad = 0u64;
    for a in 1..n {
        if let Some(c) = &total {
            if (c - &table.sum(a - 1)).sign() != std::cmp::Ordering::Greater {
                return None;
            }
        }
        let mut len = 1u64;
        loop {
            let w = table.window(a, len);
            let in_tail = a + len - 1 >= n;
            if w.is_positive() && in_tail {
                break;
            }
            if !w.is_positive() {
                last_bad = last_bad.max(len);
            }
            len += 1;
        }
    }
    Some(gap.max(last_bad + 1))
}

/// Mixed signs with a plain periodic tail (dominant base 1, possibly
/// with decaying terms below it). Dominance requires a positive period
/// sum; the least L is found by an exact scan below a provable bound.
fn periodic_dominant_witness(d: &ExpPeriodicStream) -> Option<u64> {
    let m = d.period() as u64;
    let p = d.prefix_len();
    let sigma: Rat = (0..d.period()).fold(Rat::zero(), |acc, r| acc + d.unit_coeff(r));
    if !sigma.is_positive() {
        // zero or negative period sum leaves arbitrarily long windows
        // at or below zero
        return None;
    }

    let pattern_abs: Rat = (0..d.period()).fold(Rat::zero(), |acc, r| acc + d.unit_coeff(r).abs());
    let prefix_abs: Rat = d.prefix().iter().fold(Rat::zero(), |acc, v| acc + v.abs());
    let decay_total = decay_abs_from(d, p + 1);

    // beyond this length every window holds enough full periods to
    // outweigh prefix, boundary, and decay distortions
    let slack = &(&prefix_abs + &(&pattern_abs + &pattern_abs)) + &decay_total;
    let q_star = floor_div(&slack, &sigma) + 1;
    let l_safe = p + m * (q_star + 3);

    let table = SumTable::new(d);
    // base-1 window sums per phase, extended incrementally with the length
    let mut bw: Vec<Rat> = vec![Rat::zero(); m as usize];
    let mut last_bad = 0u64;
    for len in 1..=l_safe {
        for (phase, acc) in bw.iter_mut().enumerate() {
            *acc += &d.unit_coeff(((phase as u64 + len - 1) % m) as usize);
        }
        if window_length_has_bad_start(d, &table, &bw, len, m, p) {
            last_bad = len;
        }
    }
    Some(last_bad + 1)
}

/// Is there any start `a` whose window of length `len` is non-positive?
/// Decided exactly: beyond the prefix the base-1 part of a window
/// depends only on the phase, the decaying part shrinks below any fixed
/// margin, and an exactly balanced base-1 window leaves the sign to the
/// slowest-decaying term with a nonzero windowed pattern sum.
fn window_length_has_bad_start(
    d: &ExpPeriodicStream,
    table: &SumTable,
    bw: &[Rat],
    len: u64,
    m: u64,
    p: u64,
) -> bool {
    // cutoff below which starts are checked one by one
    let mut a_hi = p + m;

    for phase in 0..m {
        let bw = &bw[phase as usize];
        match bw.sign() {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => {
                // decay can only flip the sign while its mass exceeds bw
                let mut a = p + 1;
                while &decay_abs_from(d, a) >= bw {
                    a += 1;
                }
                a_hi = a_hi.max(a + m);
            }
            std::cmp::Ordering::Equal => {
                // windowed pattern sums of the decaying terms, largest
                // base first
                let psi: Vec<(Rat, Rat)> = d
                    .terms()
                    .iter()
                    .filter(|t| *t.base() < Rat::one())
                    .map(|t| {
                        let mut s = Rat::zero();
                        for j in 0..len {
                            let c = &t.coeffs()[((phase + j) % m) as usize];
                            s += &(c * &t.base().pow(j as i64));
                        }
                        (t.base().clone(), s)
                    })
                    .collect();
                let dominant = psi
                    .iter()
                    .filter(|(_, s)| !s.is_zero())
                    .max_by(|(a, _), (b, _)| a.cmp(b));
                match dominant {
                    // every component vanishes: the window is exactly zero
                    None => return true,
                    Some((_, s)) if s.is_negative() => return true,
                    Some((b_star, s_star)) => {
                        // positive far out once b*^a·s* beats the rest
                        let mut a = p + 1;
                        loop {
                            let lead = s_star * &b_star.pow(a as i64);
                            let rest: Rat = psi
                                .iter()
                                .filter(|(b, _)| b != b_star)
                                .fold(Rat::zero(), |acc, (b, s)| {
                                    acc + &s.abs() * &b.pow(a as i64)
                                });
                            if lead > rest {
                                break;
                            }
                            a += 1;
                        }
                        a_hi = a_hi.max(a + m);
                    }
                }
            }
        }
    }

    (1..=a_hi).any(|a| !table.window(a, len).is_positive())
}

/// Mixed signs dominated by a growing base: every window far enough out
/// is decided by its latest dominant-class element, so those must all be
/// positive, and the remaining finite region is enumerated.
fn growing_dominant_witness(d: &ExpPeriodicStream, b_max: &Rat) -> Option<u64> {
    let m = d.period() as u64;
    let p = d.prefix_len();
    let dom = d
        .terms()
        .iter()
        .find(|t| t.base() == b_max)
        .expect("dominant term exists");
    let mut c_min: Option<Rat> = None;
    for c in dom.coeffs() {
        match c.sign() {
            std::cmp::Ordering::Less => return None,
            std::cmp::Ordering::Equal => {}
            std::cmp::Ordering::Greater => {
                c_min = Some(match c_min {
                    None => c.clone(),
                    Some(v) => v.min(c.clone()),
                })
            }
        }
    }
    let c_min = c_min?;

    // everything that is not the dominant term, bounded in absolute
    // value over 1..=T
    let prefix_abs: Rat = d.prefix().iter().fold(Rat::zero(), |acc, v| acc + v.abs());
    let others: Vec<(Rat, Rat)> = d
        .terms()
        .iter()
        .filter(|t| t.base() != b_max)
        .map(|t| {
            let c_abs = t
                .coeffs()
                .iter()
                .fold(Rat::zero(), |acc, c| acc + c.abs());
            (t.base().clone(), c_abs)
        })
        .collect();
    let other_bound = |t_hi: u64| -> Rat {
        let mut acc = prefix_abs.clone();
        for (b, c_abs) in &others {
            if *b == Rat::one() {
                acc += &(c_abs * &Rat::from_big(t_hi.into(), 1.into()));
            } else if *b < Rat::one() {
                acc += &(c_abs * &(&(b / &(&Rat::one() - b))));
            } else {
                // sum of b^t for t <= T
                let g = &(&b.pow(t_hi as i64 + 1) - b) / &(b - &Rat::one());
                acc += &(c_abs * &g);
            }
        }
        acc
    };

    // from t_lin on, T/b_max^T is nonincreasing; search the first T where
    // the guaranteed dominant element beats everything else
    let t_lin = ceil_recip_gap(b_max);
    let mut t0 = (p + m).max(t_lin).max(m);
    loop {
        let lead = &c_min * &b_max.pow((t0 - (m - 1)) as i64);
        if lead > other_bound(t0) {
            break;
        }
        t0 += 1;
    }

    // enumerate windows ending before t0
    let table = SumTable::new(d);
    let mut last_bad = m - 1; // lengths below one period are not certified
    for a in 1..=t0 {
        let mut len = m;
        while a + len - 1 <= t0 {
            if !table.window(a, len).is_positive() {
                last_bad = last_bad.max(len);
            }
            len += 1;
        }
    }
    Some(last_bad + 1)
}

/// Mixed signs with every base below 1: windows far out are decided by
/// their earliest dominant-class element; early starts converge to the
/// remaining total, which must be strictly positive.
fn decaying_dominant_witness(d: &ExpPeriodicStream, b_max: &Rat) -> Option<u64> {
    let m = d.period() as u64;
    let p = d.prefix_len();
    let dom = d
        .terms()
        .iter()
        .find(|t| t.base() == b_max)
        .expect("dominant term exists");
    let mut c_min: Option<Rat> = None;
    for c in dom.coeffs() {
        match c.sign() {
            std::cmp::Ordering::Less => return None,
            std::cmp::Ordering::Equal => {}
            std::cmp::Ordering::Greater => {
                c_min = Some(match c_min {
                    None => c.clone(),
                    Some(v) => v.min(c.clone()),
                })
            }
        }
    }
    let c_min = c_min?;

    // first start from which the leading dominant element beats the
    // absolute mass of every other term
    let mut a0 = p + 1;
    loop {
        let lead = &c_min * &b_max.pow((a0 + m - 1) as i64);
        if lead > other_decay_abs_from(d, a0, b_max) {
            break;
        }
        a0 += 1;
    }

    let total = d.total_sum().expect("decaying streams sum absolutely");
    let table = SumTable::new(d);
    let mut last_bad = m - 1;
    for a in 1..a0 {
        let remaining = &total - &table.sum(a - 1);
        if !remaining.is_positive() {
            return None;
        }
        let mut len = 1u64;
        loop {
            if decay_abs_from(d, a + len) < remaining {
                break;
            }
            if !table.window(a, len).is_positive() {
                last_bad = last_bad.max(len);
            }
            len += 1;
        }
    }
    Some(last_bad + 1)
}

/// `Σ_{t >= x} |tail terms with base < 1|`, prefix cells included while
/// `x` is inside the prefix.
fn decay_abs_from(d: &ExpPeriodicStream, x: u64) -> Rat {
    let m = d.period() as u64;
    let p = d.prefix_len();
    let mut acc = Rat::zero();
    let start = x.max(p + 1);
    for term in d.terms() {
        if *term.base() >= Rat::one() {
            continue;
        }
        let q = term.base().pow(m as i64);
        for (r, c) in term.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let first = start + ((r as i64 - (start as i64 - 1)).rem_euclid(m as i64)) as u64;
            acc += &(&c.abs() * &(&term.base().pow(first as i64) / &(&Rat::one() - &q)));
        }
    }
    acc
}

/// Absolute tail mass of every term except the dominant one, from `x`.
fn other_decay_abs_from(d: &ExpPeriodicStream, x: u64, b_max: &Rat) -> Rat {
    let m = d.period() as u64;
    let mut acc = Rat::zero();
    for term in d.terms() {
        if term.base() == b_max {
            continue;
        }
        let q = term.base().pow(m as i64);
        for (r, c) in term.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let first = x + ((r as i64 - (x as i64 - 1)).rem_euclid(m as i64)) as u64;
            acc += &(&c.abs() * &(&term.base().pow(first as i64) / &(&Rat::one() - &q)));
        }
    }
    acc
}

fn floor_div(num: &Rat, den: &Rat) -> u64 {
    use num_traits::{Euclid, ToPrimitive};
    let q = num / den;
    Euclid::div_euclid(q.numer(), q.denom()).to_u64().unwrap_or(0)
}

/// Least k with k·(b-1) >= 1.
fn ceil_recip_gap(b: &Rat) -> u64 {
    let inv = (b - &Rat::one()).recip();
    let f = floor_div(&inv, &Rat::one());
    if inv.is_integer() {
        f
    } else {
        f + 1
    }
}
