//! Exact finitely-presented infinite sequences of rationals.
//!
//! A stream holds an explicit finite prefix and an exponential-periodic
//! tail: beyond the prefix, `value(t) = Σ_terms coeffs[(t-1) mod m] · base^t`.
//! This class is closed under pointwise addition, subtraction, scaling,
//! and forward shifts, and every analysis question the engine asks
//! (signs, limits, partial sums, summability) is decidable on it.

mod analysis;
mod literal;

pub use analysis::{
    ClassSign, PartialSumAnalysis, SignProfile, SumClass, SumPart,
};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// One exponential term of a stream tail: `coeffs[(t-1) mod m] · base^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    base: Rat,
    coeffs: Vec<Rat>,
}

impl Term {
    pub fn new(base: Rat, coeffs: Vec<Rat>) -> Self {
        Term { base, coeffs }
    }

    pub fn base(&self) -> &Rat {
        &self.base
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }
}

/// An infinite sequence `value(1), value(2), ...` of exact rationals in
/// canonical form: explicit values for `t = 1..=prefix.len()`, then an
/// exponential-periodic tail.
///
/// Canonical form means: bases distinct, positive, sorted ascending; no
/// all-zero coefficient vectors; minimal period; minimal prefix. Two
/// presentations of the same sequence therefore compare equal with `==`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPeriodicStream {
    prefix: Vec<Rat>,
    period: usize,
    terms: Vec<Term>,
}

impl ExpPeriodicStream {
    /// Builds a stream from raw parts and canonicalizes it.
    pub fn new(prefix: Vec<Rat>, period: usize, terms: Vec<Term>) -> Result<Self> {
        if period == 0 {
            return Err(Error::BadStreamLiteral("period must be positive".into()));
        }
        for t in &terms {
            if t.base.is_negative() {
                return Err(Error::NegativeBase(t.base.to_string()));
            }
            if t.coeffs.len() != period {
                return Err(Error::PeriodMismatch {
                    period,
                    got: t.coeffs.len(),
                });
            }
        }
        let mut s = ExpPeriodicStream {
            prefix,
            period,
            terms,
        };
        s.canonicalize();
        Ok(s)
    }

    /// The identically-zero stream.
    pub fn zero() -> Self {
        ExpPeriodicStream {
            prefix: Vec::new(),
            period: 1,
            terms: Vec::new(),
        }
    }

    /// The constant stream `c, c, c, ...`.
    pub fn constant(c: Rat) -> Self {
        Self::periodic(vec![c])
    }

    /// Base-1 tail cycling through `pattern`, empty prefix.
    pub fn periodic(pattern: Vec<Rat>) -> Self {
        let period = pattern.len().max(1);
        let pattern = if pattern.is_empty() {
            vec![Rat::zero()]
        } else {
            pattern
        };
        Self::new(Vec::new(), period, vec![Term::new(Rat::one(), pattern)])
            .expect("base-1 periodic stream is always valid")
    }

    /// Pure geometric stream `coeff · base^t`.
    pub fn geometric(base: Rat, coeff: Rat) -> Result<Self> {
        Self::new(Vec::new(), 1, vec![Term::new(base, vec![coeff])])
    }

    pub fn prefix(&self) -> &[Rat] {
        &self.prefix
    }

    pub fn prefix_len(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.terms.is_empty()
    }

    /// Exact value at index `t >= 1`.
    pub fn evaluate(&self, t: u64) -> Rat {
        assert!(t >= 1, "stream indices start at 1");
        if t <= self.prefix.len() as u64 {
            return self.prefix[(t - 1) as usize].clone();
        }
        self.tail_value(t)
    }

    /// Tail formula at index `t`, ignoring the prefix override.
    fn tail_value(&self, t: u64) -> Rat {
        let r = ((t - 1) % self.period as u64) as usize;
        let mut acc = Rat::zero();
        for term in &self.terms {
            if term.coeffs[r].is_zero() {
                continue;
            }
            acc += &(&term.coeffs[r] * &term.base.pow(t as i64));
        }
        acc
    }

    /// First tail index `t > prefix_len` with `(t-1) ≡ r (mod period)`.
    pub(crate) fn first_tail_index(&self, r: usize) -> u64 {
        let p = self.prefix.len() as u64;
        let m = self.period as u64;
        let gap = (r as i64 - p as i64).rem_euclid(m as i64) as u64;
        p + gap + 1
    }

    /// Exact `Σ_{t=1..=n} value(t)` in closed form: prefix values are
    /// summed directly, each tail residue class as a geometric block.
    pub fn partial_sum(&self, n: u64) -> Rat {
        assert!(n >= 1, "partial sums need n >= 1");
        let p = self.prefix.len() as u64;
        let mut acc = Rat::zero();
        for v in self.prefix.iter().take(n.min(p) as usize) {
            acc += v;
        }
        if n <= p {
            return acc;
        }
        let m = self.period as u64;
        for term in &self.terms {
            let q = term.base.pow(m as i64);
            for (r, coeff) in term.coeffs.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let t0 = self.first_tail_index(r);
                if t0 > n {
                    continue;
                }
                let k = (n - t0) / m + 1;
                let block = &term.base.pow(t0 as i64) * &geometric_count(&q, k);
                acc += &(coeff * &block);
            }
        }
        acc
    }

    /// Pointwise sum. The result is canonical with period `lcm` of the
    /// operand periods and prefix the longer of the two.
    pub fn pointwise_add(&self, other: &Self) -> Self {
        let period = lcm_usize(self.period, other.period);
        let p = self.prefix.len().max(other.prefix.len());
        let mut prefix = Vec::with_capacity(p);
        for t in 1..=p as u64 {
            prefix.push(&self.evaluate(t) + &other.evaluate(t));
        }
        let mut terms: Vec<Term> = Vec::new();
        for term in self.terms.iter().chain(other.terms.iter()) {
            let expanded: Vec<Rat> = (0..period)
                .map(|i| term.coeffs[i % term.coeffs.len()].clone())
                .collect();
            match terms.iter_mut().find(|t| t.base == term.base) {
                Some(existing) => {
                    for (a, b) in existing.coeffs.iter_mut().zip(expanded) {
                        *a += &b;
                    }
                }
                None => terms.push(Term::new(term.base.clone(), expanded)),
            }
        }
        let mut s = ExpPeriodicStream {
            prefix,
            period,
            terms,
        };
        s.canonicalize();
        s
    }

    /// Pointwise difference `self - other`.
    pub fn subtract(&self, other: &Self) -> Self {
        self.pointwise_add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        self.scale(&Rat::from_int(-1))
    }

    /// Pointwise multiplication by a constant.
    pub fn scale(&self, c: &Rat) -> Self {
        let mut s = ExpPeriodicStream {
            prefix: self.prefix.iter().map(|v| v * c).collect(),
            period: self.period,
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.base.clone(), t.coeffs.iter().map(|x| x * c).collect()))
                .collect(),
        };
        s.canonicalize();
        s
    }

    /// Shifts the sequence `delta` places to the right, padding with
    /// zeros: result(t) = self(t - delta) for t > delta, else 0.
    pub fn shift_forward(&self, delta: u64) -> Self {
        if delta == 0 {
            return self.clone();
        }
        let m = self.period;
        let mut prefix = vec![Rat::zero(); delta as usize];
        prefix.extend(self.prefix.iter().cloned());
        let terms = self
            .terms
            .iter()
            .map(|term| {
                let damp = term.base.pow(-(delta as i64));
                let coeffs = (0..m)
                    .map(|r| {
                        let src = (r as i64 - delta as i64).rem_euclid(m as i64) as usize;
                        &term.coeffs[src] * &damp
                    })
                    .collect();
                Term::new(term.base.clone(), coeffs)
            })
            .collect();
        let mut s = ExpPeriodicStream {
            prefix,
            period: m,
            terms,
        };
        s.canonicalize();
        s
    }

    /// First `n` values, for tests and reports.
    pub fn take_values(&self, n: u64) -> Vec<Rat> {
        (1..=n).map(|t| self.evaluate(t)).collect()
    }

    /// Largest base appearing in the canonical tail, if any.
    pub(crate) fn max_base(&self) -> Option<&Rat> {
        self.terms.last().map(|t| &t.base)
    }

    /// Base-1 coefficient for residue class `r`, or zero.
    pub(crate) fn unit_coeff(&self, r: usize) -> Rat {
        self.terms
            .iter()
            .find(|t| t.base == Rat::one())
            .map(|t| t.coeffs[r].clone())
            .unwrap_or_else(Rat::zero)
    }

    /// True when every tail term has base exactly 1 (the tail is a
    /// plain periodic pattern).
    pub(crate) fn tail_is_periodic(&self) -> bool {
        self.terms.iter().all(|t| t.base == Rat::one())
    }

    fn canonicalize(&mut self) {
        // Merge duplicate bases, drop base-0 terms (zero at every t >= 1)
        // and all-zero coefficient vectors.
        let mut merged: Vec<Term> = Vec::new();
        for term in self.terms.drain(..) {
            if term.base.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|t| t.base == term.base) {
                Some(existing) => {
                    for (a, b) in existing.coeffs.iter_mut().zip(term.coeffs) {
                        *a += &b;
                    }
                }
                None => merged.push(term),
            }
        }
        merged.retain(|t| t.coeffs.iter().any(|c| !c.is_zero()));
        merged.sort_by(|a, b| a.base.cmp(&b.base));
        self.terms = merged;

        // Minimal period: smallest divisor d of m under which every
        // coefficient vector is rotation-invariant.
        if self.terms.is_empty() {
            self.period = 1;
        } else {
            let m = self.period;
            for d in 1..=m {
                if m % d != 0 {
                    continue;
                }
                let ok = self.terms.iter().all(|t| {
                    (0..m).all(|i| t.coeffs[i] == t.coeffs[(i + d) % m])
                });
                if ok {
                    if d < m {
                        for t in &mut self.terms {
                            t.coeffs.truncate(d);
                        }
                        self.period = d;
                    }
                    break;
                }
            }
        }

        // Minimal prefix: drop trailing entries the tail formula already
        // produces.
        while let Some(last) = self.prefix.last() {
            let t = self.prefix.len() as u64;
            if self.tail_value(t) == *last {
                self.prefix.pop();
            } else {
                break;
            }
        }
    }
}

/// `1 + q + ... + q^(k-1)` exactly.
fn geometric_count(q: &Rat, k: u64) -> Rat {
    if k == 0 {
        return Rat::zero();
    }
    if *q == Rat::one() {
        Rat::from_big(k.into(), 1.into())
    } else {
        &(&q.pow(k as i64) - &Rat::one()) / &(q - &Rat::one())
    }
}

fn lcm_usize(a: usize, b: usize) -> usize {
    a.lcm(&b)
}
