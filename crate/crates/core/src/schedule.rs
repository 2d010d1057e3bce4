//! Finitely presented bijections of the positive integers.
//!
//! A [`ScheduleMap`] sends index `i` to `alpha·i + beta`, with the affine
//! rule chosen by the residue class of `i` and finitely many explicit
//! exceptions overriding the rules. These present incubation orders:
//! which period each registered individual ends up occupying.
//!
//! Bijectivity is decided symbolically, not sampled: each rule's image is
//! an arithmetic progression, so the progressions must tile the residue
//! classes modulo the common step exactly once, and a finite window at
//! the bottom (where exceptions and progression starts live) is checked
//! by direct enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::stream::{ExpPeriodicStream, Term};

/// One affine branch: sources `i ≡ residue (mod modulus)` map to
/// `alpha·i + beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleRule {
    pub residue: u64,
    pub modulus: u64,
    pub alpha: Rat,
    pub beta: Rat,
}

impl ScheduleRule {
    fn raw_image(&self, e: u64) -> Rat {
        &(&self.alpha * &Rat::from_big(e.into(), 1.into())) + &self.beta
    }

    fn applies_to(&self, e: u64) -> bool {
        e % self.modulus == self.residue
    }

    /// Integer step between images of consecutive sources in the class.
    fn step(&self) -> Option<u64> {
        let d = &self.alpha * &Rat::from_big(self.modulus.into(), 1.into());
        if d.is_integer() && d.is_positive() {
            d.numer().to_u64()
        } else {
            None
        }
    }

    /// Smallest positive source in the class.
    fn first_source(&self) -> u64 {
        if self.residue == 0 {
            self.modulus
        } else {
            self.residue
        }
    }
}

/// A finitely presented map of the positive integers: residue-class
/// affine rules plus a finite exception list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleMap {
    rules: Vec<ScheduleRule>,
    exceptions: Vec<(u64, u64)>,
}

impl ScheduleMap {
    pub fn new(rules: Vec<ScheduleRule>, exceptions: Vec<(u64, u64)>) -> Self {
        ScheduleMap { rules, exceptions }
    }

    /// The identity permutation, `rules{ 0 mod 1 -> 1*i+0 }`.
    pub fn identity() -> Self {
        ScheduleMap {
            rules: vec![ScheduleRule {
                residue: 0,
                modulus: 1,
                alpha: Rat::one(),
                beta: Rat::zero(),
            }],
            exceptions: Vec::new(),
        }
    }

    pub fn rules(&self) -> &[ScheduleRule] {
        &self.rules
    }

    pub fn exceptions(&self) -> &[(u64, u64)] {
        &self.exceptions
    }

    /// Image of source `e`, if the map is defined and positive there.
    pub fn image(&self, e: u64) -> Option<u64> {
        if e == 0 {
            return None;
        }
        if let Some((_, j)) = self.exceptions.iter().find(|(i, _)| *i == e) {
            return Some(*j);
        }
        let rule = self.rules.iter().find(|r| r.applies_to(e))?;
        let img = rule.raw_image(e);
        if img.is_integer() && img.is_positive() {
            img.numer().to_u64()
        } else {
            None
        }
    }

    /// Source mapping to `t`, for verified schedules.
    pub fn preimage(&self, t: u64) -> Option<u64> {
        if let Some((i, _)) = self.exceptions.iter().find(|(_, j)| *j == t) {
            return Some(*i);
        }
        for rule in &self.rules {
            let e = &(&Rat::from_big(t.into(), 1.into()) - &rule.beta) / &rule.alpha;
            if !e.is_integer() || !e.is_positive() {
                continue;
            }
            let e = match e.numer().to_u64() {
                Some(v) => v,
                None => continue,
            };
            if rule.applies_to(e) && !self.exceptions.iter().any(|(i, _)| *i == e) {
                return Some(e);
            }
        }
        None
    }

    /// Decides whether the presented map is a bijection of the positive
    /// integers. On failure the error carries a concrete witness: an
    /// uncovered or doubly covered residue class, or a specific integer.
    pub fn verify(&self) -> Result<()> {
        let fail = |witness: String| Err(Error::NotBijective { witness });

        if self.rules.is_empty() {
            return fail("no rules".into());
        }
        for r in &self.rules {
            if r.modulus == 0 || r.residue >= r.modulus {
                return fail(format!(
                    "rule `{} mod {}` has an invalid residue class",
                    r.residue, r.modulus
                ));
            }
            if !r.alpha.is_positive() {
                return fail(format!(
                    "rule for {} mod {} has slope <= 0",
                    r.residue, r.modulus
                ));
            }
            if r.step().is_none() {
                return fail(format!(
                    "rule for {} mod {} has non-integer image step {}",
                    r.residue,
                    r.modulus,
                    &r.alpha * &Rat::from_big(r.modulus.into(), 1.into())
                ));
            }
            let probe = r.raw_image(r.first_source());
            if !probe.is_integer() {
                return fail(format!(
                    "rule for {} mod {} produces non-integer image {}",
                    r.residue, r.modulus, probe
                ));
            }
        }

        // Source classes must tile the positive integers exactly once.
        let src_mod = self.rules.iter().fold(1u64, |acc, r| acc.lcm(&r.modulus));
        for s in 0..src_mod {
            let hits = self
                .rules
                .iter()
                .filter(|r| s % r.modulus == r.residue)
                .count();
            if hits != 1 {
                return fail(format!(
                    "source class {s} mod {src_mod} is covered by {hits} rules"
                ));
            }
        }

        // Exceptions: distinct sources, positive distinct images.
        let mut seen_src = BTreeMap::new();
        let mut seen_img = BTreeMap::new();
        for (i, j) in &self.exceptions {
            if *i == 0 || *j == 0 {
                return fail(format!("exception {i}->{j} leaves the positive integers"));
            }
            if seen_src.insert(*i, *j).is_some() {
                return fail(format!("source {i} has two exceptions"));
            }
            if seen_img.insert(*j, *i).is_some() {
                return fail(format!("image {j} is assigned twice by exceptions"));
            }
        }

        // Each rule's regular image must be positive from its first
        // non-exception source on (images increase with the source).
        let mut firsts = Vec::new();
        for r in &self.rules {
            let mut e0 = r.first_source();
            while seen_src.contains_key(&e0) {
                e0 += r.modulus;
            }
            let img = r.raw_image(e0);
            if !img.is_positive() {
                return fail(format!(
                    "rule for {} mod {} maps {} to {}",
                    r.residue, r.modulus, e0, img
                ));
            }
            firsts.push((r, e0, img.numer().to_u64().unwrap()));
        }

        // Asymptotics: image progressions must tile the residue classes
        // modulo the common step exactly once.
        let common = self
            .rules
            .iter()
            .fold(1u64, |acc, r| acc.lcm(&r.step().unwrap()));
        let mut cover = vec![0u32; common as usize];
        for (r, _, o) in &firsts {
            let d = r.step().unwrap();
            let mut x = o % common;
            for _ in 0..(common / d) {
                cover[x as usize] += 1;
                x = (x + d) % common;
            }
        }
        for (x, c) in cover.iter().enumerate() {
            if *c != 1 {
                return fail(format!(
                    "image residue class {x} mod {common} is covered {c} times"
                ));
            }
        }

        // Finite window: everything below this bound is irregular
        // (exception images, punctured progression values, progression
        // starts); enumerate it exactly.
        let mut bound = common;
        for (_, _, o) in &firsts {
            bound = bound.max(*o);
        }
        for (i, j) in &self.exceptions {
            bound = bound.max(*j);
            if let Some(rule) = self.rules.iter().find(|r| r.applies_to(*i)) {
                let raw = rule.raw_image(*i);
                if raw.is_positive() && raw.is_integer() {
                    bound = bound.max(raw.numer().to_u64().unwrap());
                }
            }
        }
        bound += common;
        let mut hits = vec![0u32; (bound + 1) as usize];
        for (_, j) in &self.exceptions {
            if *j <= bound {
                hits[*j as usize] += 1;
            }
        }
        let big_bound = Rat::from_big(bound.into(), 1.into());
        for r in &self.rules {
            let mut e = r.first_source();
            while r.raw_image(e) <= big_bound {
                if !seen_src.contains_key(&e) {
                    let img = r.raw_image(e);
                    if img.is_positive() {
                        if let Some(v) = img.numer().to_u64() {
                            hits[v as usize] += 1;
                        }
                    }
                }
                e += r.modulus;
            }
        }
        for x in 1..=bound {
            match hits[x as usize] {
                1 => {}
                c => {
                    return fail(format!("integer {x} is covered {c} times"));
                }
            }
        }
        Ok(())
    }

    /// The stream `e ↦ state(image(e))`: per-identity utilities induced
    /// by incubating individual `e` in period `image(e)`.
    ///
    /// Representable whenever every rule slope is an integer, or the
    /// state stream's tail is a plain periodic pattern (base 1); a
    /// fractional slope composed with a genuine exponential would need
    /// an irrational base.
    pub fn compose_stream(&self, state: &ExpPeriodicStream) -> Result<ExpPeriodicStream> {
        let src_mod = self.rules.iter().fold(1u64, |acc, r| acc.lcm(&r.modulus));
        let m_st = state.period() as u64;
        let result_period = src_mod * m_st;

        // Prefix covers exceptions and every source whose image lands in
        // the state's prefix.
        let mut pfx = 0u64;
        for (i, _) in &self.exceptions {
            pfx = pfx.max(*i);
        }
        for r in &self.rules {
            // smallest e with alpha·e + beta > prefix_len, conservatively
            let lim = &(&Rat::from_big(state.prefix_len().into(), 1.into()) - &r.beta) / &r.alpha;
            if lim.is_positive() {
                let whole = lim.numer().to_u64().unwrap_or(0) / lim.denom().to_u64().unwrap_or(1);
                pfx = pfx.max(whole + 1);
            }
        }

        let mut prefix = Vec::with_capacity(pfx as usize);
        for e in 1..=pfx {
            let t = self.image(e).ok_or_else(|| Error::NotBijective {
                witness: format!("source {e} has no positive integer image"),
            })?;
            prefix.push(state.evaluate(t));
        }

        let mut terms: Vec<Term> = Vec::new();
        for st_term in state.terms() {
            if *st_term.base() == Rat::one() {
                // periodic pattern: just reindex coefficients
                let mut coeffs = vec![Rat::zero(); result_period as usize];
                for (r_idx, slot) in coeffs.iter_mut().enumerate() {
                    let e = representative(r_idx as u64, result_period, pfx);
                    let rule = self.rule_for(e)?;
                    let t = rule.raw_image(e).numer().to_u64().ok_or_else(|| {
                        Error::NotBijective {
                            witness: format!("source {e} has no positive image"),
                        }
                    })?;
                    *slot = st_term.coeffs()[((t - 1) % m_st) as usize].clone();
                }
                terms.push(Term::new(Rat::one(), coeffs));
            } else {
                // exponential: each rule contributes base^alpha with a
                // damped, reindexed coefficient pattern
                for rule in &self.rules {
                    if !rule.alpha.is_integer() {
                        return Err(Error::UnrepresentableComposition {
                            alpha: rule.alpha.to_string(),
                            base: st_term.base().to_string(),
                        });
                    }
                    let a = rule.alpha.to_integer().expect("checked integer slope");
                    let new_base = st_term.base().pow(a);
                    let damp = st_term
                        .base()
                        .pow(rule.beta.to_integer().expect("integer beta with integer slope"));
                    let mut coeffs = vec![Rat::zero(); result_period as usize];
                    let mut any = false;
                    for (r_idx, slot) in coeffs.iter_mut().enumerate() {
                        let e = representative(r_idx as u64, result_period, pfx);
                        if !rule.applies_to(e) {
                            continue;
                        }
                        let t = rule.raw_image(e).numer().to_u64().unwrap();
                        let c = &st_term.coeffs()[((t - 1) % m_st) as usize] * &damp;
                        if !c.is_zero() {
                            any = true;
                        }
                        *slot = c;
                    }
                    if any {
                        terms.push(Term::new(new_base, coeffs));
                    }
                }
            }
        }
        ExpPeriodicStream::new(prefix, result_period as usize, terms)
    }

    fn rule_for(&self, e: u64) -> Result<&ScheduleRule> {
        self.rules
            .iter()
            .find(|r| r.applies_to(e))
            .ok_or_else(|| Error::NotBijective {
                witness: format!("no rule covers source {e}"),
            })
    }
}

/// Smallest `e > pfx` with `(e - 1) ≡ r_idx (mod period)`.
fn representative(r_idx: u64, period: u64, pfx: u64) -> u64 {
    let gap = (r_idx as i64 - pfx as i64).rem_euclid(period as i64) as u64;
    pfx + gap + 1
}

impl fmt::Display for ScheduleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rules{{ ")?;
        for (idx, r) in self.rules.iter().enumerate() {
            if idx > 0 {
                write!(f, "; ")?;
            }
            let beta = if r.beta.is_negative() {
                format!("-{}", r.beta.abs())
            } else {
                format!("+{}", r.beta)
            };
            write!(f, "{} mod {} -> {}*i{}", r.residue, r.modulus, r.alpha, beta)?;
        }
        write!(f, " }}")?;
        if !self.exceptions.is_empty() {
            write!(f, " except{{ ")?;
            for (idx, (i, j)) in self.exceptions.iter().enumerate() {
                if idx > 0 {
                    write!(f, "; ")?;
                }
                write!(f, "{i}->{j}")?;
            }
            write!(f, " }}")?;
        }
        Ok(())
    }
}

impl FromStr for ScheduleMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::BadSchedule(format!("{msg} in `{s}`"));
        let s = s.trim();
        let rest = s.strip_prefix("rules{").ok_or_else(|| bad("expected `rules{`"))?;
        let close = rest.find('}').ok_or_else(|| bad("unterminated rules block"))?;
        let rules_body = &rest[..close];
        let tail = rest[close + 1..].trim();

        let mut rules = Vec::new();
        for item in rules_body.split(';') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (lhs, rhs) = item.split_once("->").ok_or_else(|| bad("rule missing `->`"))?;
            let lhs: Vec<&str> = lhs.split_whitespace().collect();
            let (residue, modulus) = match lhs.as_slice() {
                [s, "mod", m] => (
                    s.parse().map_err(|_| bad("bad residue"))?,
                    m.parse().map_err(|_| bad("bad modulus"))?,
                ),
                _ => return Err(bad("rule head must be `<s> mod <m>`")),
            };
            let rhs: String = rhs.chars().filter(|c| !c.is_whitespace()).collect();
            let (alpha_s, beta_s) = rhs
                .split_once("*i")
                .ok_or_else(|| bad("rule body must be `<alpha>*i+<beta>`"))?;
            let alpha: Rat = alpha_s.parse()?;
            let beta: Rat = if beta_s.is_empty() {
                Rat::zero()
            } else if let Some(b) = beta_s.strip_prefix('+') {
                b.parse()?
            } else if beta_s.starts_with('-') {
                beta_s.parse()?
            } else {
                return Err(bad("expected sign before beta"));
            };
            rules.push(ScheduleRule {
                residue,
                modulus,
                alpha,
                beta,
            });
        }

        let mut exceptions = Vec::new();
        if !tail.is_empty() {
            let body = tail
                .strip_prefix("except{")
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| bad("expected `except{ ... }`"))?;
            for item in body.split(';') {
                let item: String = item.chars().filter(|c| !c.is_whitespace()).collect();
                if item.is_empty() {
                    continue;
                }
                let (i, j) = item
                    .split_once("->")
                    .ok_or_else(|| bad("exception missing `->`"))?;
                exceptions.push((
                    i.parse().map_err(|_| bad("bad exception source"))?,
                    j.parse().map_err(|_| bad("bad exception image"))?,
                ));
            }
        }
        Ok(ScheduleMap::new(rules, exceptions))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(n: i64) -> Rat {
        Rat::from_int(n)
    }

    /// Odd indices move two steps earlier, even indices two steps later,
    /// index 1 relocated by exception.
    fn swap_schedule() -> ScheduleMap {
        "rules{ 1 mod 2 -> 1*i-2; 0 mod 2 -> 1*i+2 } except{ 1->2 }"
            .parse()
            .unwrap()
    }

    #[test]
    fn identity_round_trip() {
        let id = ScheduleMap::identity();
        assert_eq!(id.to_string(), "rules{ 0 mod 1 -> 1*i+0 }");
        assert_eq!(id, id.to_string().parse().unwrap());
        id.verify().unwrap();
        for e in 1..=20 {
            assert_eq!(id.image(e), Some(e));
            assert_eq!(id.preimage(e), Some(e));
        }
    }

    #[test]
    fn swap_schedule_is_bijective() {
        let s = swap_schedule();
        s.verify().unwrap();
        assert_eq!(s.image(1), Some(2));
        assert_eq!(s.image(2), Some(4));
        assert_eq!(s.image(3), Some(1));
        assert_eq!(s.image(5), Some(3));
        assert_eq!(s.image(6), Some(8));
        // first eight periods get occupants 3,1,5,2,7,4,9,6
        let got: Vec<u64> = (1..=8).map(|t| s.preimage(t).unwrap()).collect();
        assert_eq!(got, vec![3, 1, 5, 2, 7, 4, 9, 6]);
    }

    #[test]
    fn coverage_gap_detected() {
        // odds fixed, evens moved up: period 2 is never occupied
        let s: ScheduleMap = "rules{ 1 mod 2 -> 1*i+0; 0 mod 2 -> 1*i+2 }".parse().unwrap();
        let err = s.verify().unwrap_err();
        assert!(err.to_string().contains('2'), "witness should name the gap: {err}");
    }

    #[test]
    fn double_cover_detected() {
        let s: ScheduleMap = "rules{ 0 mod 1 -> 2*i+0 }".parse().unwrap();
        assert!(s.verify().is_err());
        let s: ScheduleMap = "rules{ 1 mod 2 -> 1*i+0; 0 mod 2 -> 1*i-1 }".parse().unwrap();
        assert!(s.verify().is_err());
    }

    #[test]
    fn fractional_slope_schedule_verifies() {
        // evens to multiples of 4 from 8 up, odds (except 1) enumerate
        // the non-multiples of 4, index 1 takes image 4
        let s: ScheduleMap =
            "rules{ 0 mod 2 -> 2*i+4; 3 mod 6 -> 2/3*i-1; 5 mod 6 -> 2/3*i-4/3; 1 mod 6 -> 2/3*i-5/3 } except{ 1->4 }"
                .parse()
                .unwrap();
        s.verify().unwrap();
        assert_eq!(s.image(1), Some(4));
        assert_eq!(s.image(2), Some(8));
        assert_eq!(s.image(3), Some(1));
        assert_eq!(s.image(5), Some(2));
        assert_eq!(s.image(7), Some(3));
        assert_eq!(s.image(9), Some(5));
        // images of odd sources are exactly the non-multiples of 4
        let mut odd_images: Vec<u64> = (3..=41).step_by(2).map(|e| s.image(e).unwrap()).collect();
        odd_images.sort();
        let expect: Vec<u64> = (1..=26).filter(|t| t % 4 != 0).collect();
        assert_eq!(odd_images, expect);
    }

    #[test]
    fn schedule_literal_round_trip() {
        for lit in [
            "rules{ 0 mod 1 -> 1*i+0 }",
            "rules{ 1 mod 2 -> 1*i-2; 0 mod 2 -> 1*i+2 } except{ 1->2 }",
            "rules{ 3 mod 6 -> 2/3*i-1 }",
        ] {
            let s: ScheduleMap = lit.parse().unwrap();
            assert_eq!(s.to_string(), lit);
        }
        assert!("rules{ 1 mod }".parse::<ScheduleMap>().is_err());
        assert!("rules{ 0 mod 1 -> i }".parse::<ScheduleMap>().is_err());
    }

    #[test]
    fn compose_identity_is_identity() {
        let a = ExpPeriodicStream::periodic(vec![i(1), i(2)]);
        let c = ScheduleMap::identity().compose_stream(&a).unwrap();
        assert_eq!(c, a);
    }

    #[test]
    fn compose_swap_on_alternating_state() {
        // state alternates 1,2; the swap preserves parity except at 1
        let a = ExpPeriodicStream::periodic(vec![i(1), i(2)]);
        let c = swap_schedule().compose_stream(&a).unwrap();
        assert_eq!(c.evaluate(1), i(2));
        for e in 2..=40u64 {
            assert_eq!(c.evaluate(e), a.evaluate(e), "identity elsewhere, e={e}");
        }
        assert_eq!(c, "prefix[2] period=2 term base=1 coeffs[1,2]".parse().unwrap());
    }

    #[test]
    fn compose_with_integer_slopes_on_exponentials() {
        let s = swap_schedule();
        let state: ExpPeriodicStream = "prefix[] period=1 term base=2 coeffs[1]".parse().unwrap();
        let c = s.compose_stream(&state).unwrap();
        for e in 1..=16u64 {
            let t = s.image(e).unwrap();
            assert_eq!(c.evaluate(e), state.evaluate(t), "e={e} -> t={t}");
        }
    }

    #[test]
    fn compose_rejects_fractional_slope_on_exponentials() {
        let s: ScheduleMap =
            "rules{ 0 mod 2 -> 2*i+4; 3 mod 6 -> 2/3*i-1; 5 mod 6 -> 2/3*i-4/3; 1 mod 6 -> 2/3*i-5/3 } except{ 1->4 }"
                .parse()
                .unwrap();
        let state: ExpPeriodicStream = "prefix[] period=1 term base=2 coeffs[1]".parse().unwrap();
        assert!(matches!(
            s.compose_stream(&state),
            Err(Error::UnrepresentableComposition { .. })
        ));
    }

    #[test]
    fn compose_fractional_slope_on_periodic_state() {
        let s: ScheduleMap =
            "rules{ 0 mod 2 -> 2*i+4; 3 mod 6 -> 2/3*i-1; 5 mod 6 -> 2/3*i-4/3; 1 mod 6 -> 2/3*i-5/3 } except{ 1->4 }"
                .parse()
                .unwrap();
        let state = ExpPeriodicStream::periodic(vec![i(1), i(1), i(1), i(2)]);
        let c = s.compose_stream(&state).unwrap();
        for e in 1..=60u64 {
            let t = s.image(e).unwrap();
            assert_eq!(c.evaluate(e), state.evaluate(t), "e={e} -> t={t}");
        }
    }

    #[test]
    fn compose_places_prefix_values() {
        // state with irregular head: schedule image must look it up
        let state: ExpPeriodicStream = "prefix[9] period=1 term base=1 coeffs[5]".parse().unwrap();
        let c = swap_schedule().compose_stream(&state).unwrap();
        // source 3 maps to period 1, which holds the irregular 9
        assert_eq!(c.evaluate(3), i(9));
        assert_eq!(c.evaluate(1), i(5));
        for e in 4..=30u64 {
            assert_eq!(c.evaluate(e), i(5));
        }
    }
}
