//! Decision procedures on streams: eventual signs, limit inferior and
//! superior, classification of partial sums, and signed-part summability.
//!
//! Everything here reduces to one primitive: a sequence of the shape
//! `f(k) = lam + lin·k + Σ_i gamma_i · q_i^k` with distinct positive
//! `q_i != 1`. Such a sequence has a computable extended limit and an
//! eventually constant sign with an explicit, provably correct threshold:
//! the dominant component (largest growing `q`, else the linear part,
//! else the constant, else the slowest-decaying `q`) wins as soon as it
//! exceeds the sum of absolute values of the rest, and the ratios of the
//! rest to the dominant component are monotonically shrinking from a
//! computable index on.

use std::cmp::Ordering;
use std::fmt;

use crate::rat::{ExtRat, Rat};

use super::ExpPeriodicStream;

/// `f(k) = lam + lin·k + Σ gamma·q^k`, the normal form of every
/// subsequence this module analyzes.
#[derive(Clone, Debug)]
pub(crate) struct ExpSeq {
    lam: Rat,
    lin: Rat,
    geo: Vec<(Rat, Rat)>, // (q, gamma) with q > 0, q != 1, gamma != 0
}

#[derive(Clone, Debug)]
pub(crate) struct Eventual {
    pub limit: ExtRat,
    /// Sign of `f(k)` for every `k >= threshold`. `Equal` means the
    /// sequence is identically zero from the threshold on.
    pub sign: Ordering,
    pub threshold: u64,
}

impl ExpSeq {
    pub(crate) fn new(lam: Rat, lin: Rat, geo: Vec<(Rat, Rat)>) -> Self {
        let geo = geo.into_iter().filter(|(_, g)| !g.is_zero()).collect();
        ExpSeq { lam, lin, geo }
    }

    pub(crate) fn shifted(&self, delta: &Rat) -> Self {
        ExpSeq {
            lam: &self.lam - delta,
            lin: self.lin.clone(),
            geo: self.geo.clone(),
        }
    }

    #[cfg(test)]
    pub(crate) fn eval(&self, k: u64) -> Rat {
        let mut acc = &self.lam + &(&self.lin * &Rat::from_big(k.into(), 1.into()));
        for (q, g) in &self.geo {
            acc += &(g * &q.pow(k as i64));
        }
        acc
    }

    fn rest_bound(&self, skip: Option<usize>, k: u64) -> Rat {
        let mut acc = self.lam.abs();
        if !self.lin.is_zero() {
            acc += &(&self.lin.abs() * &Rat::from_big(k.into(), 1.into()));
        }
        for (i, (q, g)) in self.geo.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            acc += &(&g.abs() * &q.pow(k as i64));
        }
        acc
    }

    /// Extended limit, eventual sign, and an explicit witness index from
    /// which the sign provably holds.
    pub(crate) fn eventual(&self) -> Eventual {
        let one = Rat::one();

        // Dominant growing component.
        let growing = self
            .geo
            .iter()
            .enumerate()
            .filter(|(_, (q, _))| *q > one)
            .max_by(|(_, (qa, _)), (_, (qb, _))| qa.cmp(qb));
        if let Some((idx, (q, g))) = growing {
            let sign = g.sign();
            // from k_lin on, k/q^k is non-increasing
            let inv_gap = (q - &one).recip();
            let k_lin = ceil_to_u64(&inv_gap);
            let mut k = k_lin;
            loop {
                let lhs = &g.abs() * &q.pow(k as i64);
                if lhs > self.rest_bound(Some(idx), k) {
                    break;
                }
                k += 1;
            }
            let limit = if sign == Ordering::Greater {
                ExtRat::PlusInfinity
            } else {
                ExtRat::MinusInfinity
            };
            return Eventual {
                limit,
                sign,
                threshold: k,
            };
        }

        // Linear drift beats the remaining (bounded) components.
        if !self.lin.is_zero() {
            let decay_total: Rat = self
                .geo
                .iter()
                .fold(Rat::zero(), |acc, (_, g)| acc + g.abs());
            let bound = &self.lam.abs() + &decay_total;
            let k = floor_to_u64(&(&bound / &self.lin.abs())) + 1;
            let sign = self.lin.sign();
            let limit = if sign == Ordering::Greater {
                ExtRat::PlusInfinity
            } else {
                ExtRat::MinusInfinity
            };
            return Eventual {
                limit,
                sign,
                threshold: k,
            };
        }

        // Constant dominates vanishing components.
        if !self.lam.is_zero() {
            let mut k = 0u64;
            loop {
                let rest: Rat = self
                    .geo
                    .iter()
                    .fold(Rat::zero(), |acc, (q, g)| acc + &g.abs() * &q.pow(k as i64));
                if rest < self.lam.abs() {
                    break;
                }
                k += 1;
            }
            return Eventual {
                limit: ExtRat::Finite(self.lam.clone()),
                sign: self.lam.sign(),
                threshold: k,
            };
        }

        // Pure decay: the slowest-decaying component decides the sign.
        if let Some((idx, (q, g))) = self
            .geo
            .iter()
            .enumerate()
            .max_by(|(_, (qa, _)), (_, (qb, _))| qa.cmp(qb))
        {
            let mut k = 0u64;
            loop {
                let lhs = &g.abs() * &q.pow(k as i64);
                if lhs > self.rest_bound(Some(idx), k) {
                    break;
                }
                k += 1;
            }
            return Eventual {
                limit: ExtRat::Finite(Rat::zero()),
                sign: g.sign(),
                threshold: k,
            };
        }

        Eventual {
            limit: ExtRat::Finite(Rat::zero()),
            sign: Ordering::Equal,
            threshold: 0,
        }
    }
}

fn floor_to_u64(r: &Rat) -> u64 {
    use num_traits::{Euclid, ToPrimitive};
    let f = Euclid::div_euclid(r.numer(), r.denom());
    f.to_u64().unwrap_or(0)
}

fn ceil_to_u64(r: &Rat) -> u64 {
    if r.is_negative() || r.is_zero() {
        return 0;
    }
    let f = floor_to_u64(r);
    if r.is_integer() {
        f
    } else {
        f + 1
    }
}

/// Eventual sign of one residue class of a stream tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassSign {
    EventuallyPositive,
    EventuallyNegative,
    EventuallyZero,
}

impl ClassSign {
    pub fn as_ordering(self) -> Ordering {
        match self {
            ClassSign::EventuallyPositive => Ordering::Greater,
            ClassSign::EventuallyNegative => Ordering::Less,
            ClassSign::EventuallyZero => Ordering::Equal,
        }
    }

    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Greater => ClassSign::EventuallyPositive,
            Ordering::Less => ClassSign::EventuallyNegative,
            Ordering::Equal => ClassSign::EventuallyZero,
        }
    }
}

impl fmt::Display for ClassSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSign::EventuallyPositive => write!(f, "pos"),
            ClassSign::EventuallyNegative => write!(f, "neg"),
            ClassSign::EventuallyZero => write!(f, "zero"),
        }
    }
}

/// Per-residue-class sign report: for every `t >= threshold`,
/// `sign(value(t)) = classes[(t-1) mod period].as_ordering()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignProfile {
    pub period: usize,
    pub classes: Vec<ClassSign>,
    pub threshold: u64,
}

impl SignProfile {
    /// True when the stream is identically zero.
    pub fn is_all_zero(&self) -> bool {
        self.threshold == 1
            && self
                .classes
                .iter()
                .all(|c| *c == ClassSign::EventuallyZero)
    }

    pub fn class_of(&self, t: u64) -> ClassSign {
        self.classes[((t - 1) % self.period as u64) as usize]
    }

    pub fn all_nonnegative(&self) -> bool {
        self.classes
            .iter()
            .all(|c| *c != ClassSign::EventuallyNegative)
    }

    pub fn all_nonpositive(&self) -> bool {
        self.classes
            .iter()
            .all(|c| *c != ClassSign::EventuallyPositive)
    }

    pub fn any_strict(&self) -> bool {
        self.classes
            .iter()
            .any(|c| *c != ClassSign::EventuallyZero)
    }
}

impl fmt::Display for SignProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_all_zero() {
            return write!(f, "AllZero");
        }
        let classes = self
            .classes
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "N={} classes[{}]", self.threshold, classes)
    }
}

/// Asymptotic behavior of the partial sums `S(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumClass {
    ConvergesTo(Rat),
    DivergesPlus,
    DivergesMinus,
    Oscillates { liminf: ExtRat, limsup: ExtRat },
}

impl fmt::Display for SumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SumClass::ConvergesTo(r) => write!(f, "ConvergesTo({})", r),
            SumClass::DivergesPlus => write!(f, "DivergesPlus"),
            SumClass::DivergesMinus => write!(f, "DivergesMinus"),
            SumClass::Oscillates { liminf, limsup } => {
                write!(f, "Oscillates({},{})", liminf, limsup)
            }
        }
    }
}

/// Classification of `Σ max(±value(t), 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumPart {
    FiniteSum(Rat),
    Infinite,
}

impl fmt::Display for SumPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SumPart::FiniteSum(r) => write!(f, "FiniteSum({})", r),
            SumPart::Infinite => write!(f, "Infinite"),
        }
    }
}

/// Behavior of one offset class of the partial sums: the subsequence
/// `S(n0), S(n0+m), S(n0+2m), ...`.
#[derive(Clone, Debug)]
pub struct OffsetState {
    pub n0: u64,
    pub limit: ExtRat,
    pub sign: Ordering,
    /// index threshold in `n` units: the sign holds for every member of
    /// this offset class at `n >= n_threshold`
    pub n_threshold: u64,
}

/// Exact decomposition of the partial sums along each residue class of
/// `n`: `S(n0 + k·m) = lam + lin·k + Σ gamma·(b^m)^k`.
#[derive(Clone, Debug)]
pub struct PartialSumAnalysis {
    period: u64,
    offsets: Vec<(u64, ExpSeq)>,
}

impl PartialSumAnalysis {
    pub fn period(&self) -> u64 {
        self.period
    }

    /// Extended limit of `S` along every offset class, shifted by `c`
    /// (i.e. the behavior of `S(n) - c`).
    pub fn offset_states(&self, shift: &Rat) -> Vec<OffsetState> {
        self.offsets
            .iter()
            .map(|(n0, seq)| {
                let ev = seq.shifted(shift).eventual();
                OffsetState {
                    n0: *n0,
                    limit: ev.limit,
                    sign: ev.sign,
                    n_threshold: n0 + ev.threshold * self.period,
                }
            })
            .collect()
    }

    pub fn sum_class(&self) -> SumClass {
        let limits: Vec<ExtRat> = self
            .offsets
            .iter()
            .map(|(_, seq)| seq.eventual().limit)
            .collect();
        let min = limits.iter().min().unwrap().clone();
        let max = limits.iter().max().unwrap().clone();
        if min == max {
            match min {
                ExtRat::Finite(l) => SumClass::ConvergesTo(l),
                ExtRat::PlusInfinity => SumClass::DivergesPlus,
                ExtRat::MinusInfinity => SumClass::DivergesMinus,
            }
        } else {
            SumClass::Oscillates {
                liminf: min,
                limsup: max,
            }
        }
    }

    /// Limit of `S(n)/n` in the extended rationals, `None` when the
    /// offset classes disagree (partial sums oscillate at a growing
    /// base), in which case the mean utility has no limit.
    pub fn density(&self) -> Option<ExtRat> {
        let m = Rat::from_big(self.period.into(), 1.into());
        let mut out: Option<ExtRat> = None;
        for (_, seq) in &self.offsets {
            let growing = seq
                .geo
                .iter()
                .filter(|(q, _)| *q > Rat::one())
                .max_by(|(qa, _), (qb, _)| qa.cmp(qb));
            let lim = match growing {
                Some((_, g)) => {
                    if g.is_positive() {
                        ExtRat::PlusInfinity
                    } else {
                        ExtRat::MinusInfinity
                    }
                }
                None => ExtRat::Finite(&seq.lin / &m),
            };
            match &out {
                None => out = Some(lim),
                Some(prev) if *prev == lim => {}
                Some(_) => return None,
            }
        }
        out
    }

    #[cfg(test)]
    pub(crate) fn check_decomposition(&self, stream: &ExpPeriodicStream) {
        for (n0, seq) in &self.offsets {
            for k in 0..5u64 {
                assert_eq!(
                    seq.eval(k),
                    stream.partial_sum(n0 + k * self.period),
                    "offset decomposition broken at n0={n0}, k={k}"
                );
            }
        }
    }
}

impl ExpPeriodicStream {
    /// Largest base with a nonzero coefficient in residue class `r`.
    fn dominant_base(&self, r: usize) -> Option<&Rat> {
        self.terms()
            .iter()
            .rev()
            .find(|t| !t.coeffs()[r].is_zero())
            .map(|t| t.base())
    }

    /// The tail of residue class `r` as a sequence in `k`:
    /// `value(t_r + k·m) = lam + Σ gamma·(b^m)^k`.
    fn class_seq(&self, r: usize) -> ExpSeq {
        let m = self.period() as i64;
        let t_r = self.first_tail_index(r);
        let mut lam = Rat::zero();
        let mut geo = Vec::new();
        for term in self.terms() {
            let c = &term.coeffs()[r];
            if c.is_zero() {
                continue;
            }
            if *term.base() == Rat::one() {
                lam = c.clone();
            } else {
                geo.push((term.base().pow(m), c * &term.base().pow(t_r as i64)));
            }
        }
        ExpSeq::new(lam, Rat::zero(), geo)
    }

    /// Per-residue-class eventual signs with an honest threshold: the
    /// reported sign equals `sign(value(t))` for every `t >= threshold`,
    /// and the threshold is the least index with that property along the
    /// sampled downward scan.
    pub fn eventual_sign_profile(&self) -> SignProfile {
        let m = self.period();
        let mut classes = Vec::with_capacity(m);
        let mut n_safe = self.prefix_len() + 1;
        for r in 0..m {
            let ev = self.class_seq(r).eventual();
            classes.push(ClassSign::from_ordering(ev.sign));
            let n_r = self.first_tail_index(r) + ev.threshold * m as u64;
            n_safe = n_safe.max(n_r);
        }
        let mut threshold = n_safe;
        while threshold > 1 {
            let t = threshold - 1;
            let class = classes[((t - 1) % m as u64) as usize];
            if self.evaluate(t).sign() == class.as_ordering() {
                threshold = t;
            } else {
                break;
            }
        }
        SignProfile {
            period: m,
            classes,
            threshold,
        }
    }

    /// Exact limit inferior and superior of the sequence. Prefix values
    /// are finitely many and do not affect either limit; each residue
    /// class converges (in the extended rationals) to the value dictated
    /// by its dominant base.
    pub fn liminf_limsup(&self) -> (ExtRat, ExtRat) {
        let mut lo: Option<ExtRat> = None;
        let mut hi: Option<ExtRat> = None;
        for r in 0..self.period() {
            let lim = match self.dominant_base(r) {
                None => ExtRat::Finite(Rat::zero()),
                Some(b) if *b > Rat::one() => {
                    let c = self
                        .terms()
                        .iter()
                        .rev()
                        .find(|t| !t.coeffs()[r].is_zero())
                        .map(|t| t.coeffs()[r].clone())
                        .unwrap();
                    if c.is_positive() {
                        ExtRat::PlusInfinity
                    } else {
                        ExtRat::MinusInfinity
                    }
                }
                Some(b) if *b == Rat::one() => ExtRat::Finite(self.unit_coeff(r)),
                Some(_) => ExtRat::Finite(Rat::zero()),
            };
            lo = Some(match lo {
                None => lim.clone(),
                Some(v) => v.min(lim.clone()),
            });
            hi = Some(match hi {
                None => lim,
                Some(v) => v.max(lim),
            });
        }
        (lo.unwrap(), hi.unwrap())
    }

    /// Decomposes the partial sums along each residue class of `n` into
    /// constant + linear + geometric components.
    pub fn partial_sum_analysis(&self) -> PartialSumAnalysis {
        let m = self.period() as u64;
        let p = self.prefix_len();
        let lin: Rat = (0..self.period())
            .fold(Rat::zero(), |acc, r| acc + self.unit_coeff(r));
        let mut offsets = Vec::with_capacity(m as usize);
        for n0 in (p + m)..(p + 2 * m) {
            let mut geo: Vec<(Rat, Rat)> = Vec::new();
            for term in self.terms() {
                if *term.base() == Rat::one() {
                    continue;
                }
                let q = term.base().pow(m as i64);
                let denom = &q - &Rat::one();
                let mut gamma = Rat::zero();
                for (r, c) in term.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let t_r = self.first_tail_index(r);
                    let k_r = (n0 - t_r) / m + 1;
                    gamma += &(&(c * &term.base().pow(t_r as i64)) * &q.pow(k_r as i64));
                }
                gamma = &gamma / &denom;
                if !gamma.is_zero() {
                    geo.push((q, gamma));
                }
            }
            let gamma_total = geo.iter().fold(Rat::zero(), |acc, (_, g)| acc + g.clone());
            let lam = &self.partial_sum(n0) - &gamma_total;
            offsets.push((n0, ExpSeq::new(lam, lin.clone(), geo)));
        }
        PartialSumAnalysis {
            period: m,
            offsets,
        }
    }

    /// Classifies the behavior of `S(n) = partial_sum(n)` as `n → ∞`.
    pub fn classify_partial_sums(&self) -> SumClass {
        self.partial_sum_analysis().sum_class()
    }

    /// Classifies `Σ max(value(t),0)` and `Σ max(-value(t),0)` exactly.
    /// A signed part is infinite precisely when some residue class is
    /// eventually of that sign with dominant base at least 1; otherwise
    /// the part is a finite prefix region plus convergent geometric
    /// tails, summed in closed form.
    pub fn signed_part_summability(&self) -> (SumPart, SumPart) {
        let profile = self.eventual_sign_profile();
        let pos = self.signed_part(&profile, Ordering::Greater);
        let neg = self.signed_part(&profile, Ordering::Less);
        (pos, neg)
    }

    fn signed_part(&self, profile: &SignProfile, want: Ordering) -> SumPart {
        let m = self.period() as u64;
        let n = profile.threshold;
        for (r, class) in profile.classes.iter().enumerate() {
            if class.as_ordering() != want {
                continue;
            }
            if let Some(b) = self.dominant_base(r) {
                if *b >= Rat::one() {
                    return SumPart::Infinite;
                }
            }
        }
        // Finite: exact front region plus geometric class tails. The
        // closed form only describes the tail, so the front region must
        // reach past the prefix even when the sign threshold is lower.
        let boundary = n.max(self.prefix_len() + 1);
        let mut acc = Rat::zero();
        for t in 1..boundary {
            let v = self.evaluate(t);
            if v.sign() == want {
                acc += &v;
            }
        }
        for (r, class) in profile.classes.iter().enumerate() {
            if class.as_ordering() != want {
                continue;
            }
            // first index >= boundary in this residue class
            let start = boundary
                + ((r as i64 - (boundary as i64 - 1)).rem_euclid(m as i64)) as u64;
            for term in self.terms() {
                let c = &term.coeffs()[r];
                if c.is_zero() {
                    continue;
                }
                let q = term.base().pow(m as i64);
                let tail = &(c * &term.base().pow(start as i64)) / &(&Rat::one() - &q);
                acc += &tail;
            }
        }
        if want == Ordering::Less {
            acc = -acc;
        }
        SumPart::FiniteSum(acc)
    }

    /// Exact total `Σ value(t)` when both signed parts are finite.
    pub fn total_sum(&self) -> Option<Rat> {
        match self.signed_part_summability() {
            (SumPart::FiniteSum(p), SumPart::FiniteSum(q)) => Some(&p - &q),
            _ => None,
        }
    }

    /// Limit of `S(n)/n` in the extended rationals, when it exists.
    pub fn density(&self) -> Option<ExtRat> {
        self.partial_sum_analysis().density()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::ExpPeriodicStream;

    fn i(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn parse(s: &str) -> ExpPeriodicStream {
        s.parse().unwrap()
    }

    #[test]
    fn profile_ordeal_realized() {
        let s = parse("prefix[-2] period=1 term base=4 coeffs[-1/4]");
        let p = s.eventual_sign_profile();
        assert_eq!(p.classes, vec![ClassSign::EventuallyNegative]);
        assert_eq!(p.threshold, 1);
        // the threshold is honest on a long sample
        for t in 1..=50u64 {
            assert!(s.evaluate(t).is_negative());
        }
    }

    #[test]
    fn profile_zero_stream() {
        let p = ExpPeriodicStream::zero().eventual_sign_profile();
        assert!(p.is_all_zero());
        assert_eq!(p.to_string(), "AllZero");
    }

    #[test]
    fn profile_cycles_difference() {
        let d = ExpPeriodicStream::periodic(vec![i(1), i(1), i(-1)]);
        let p = d.eventual_sign_profile();
        assert_eq!(
            p.classes,
            vec![
                ClassSign::EventuallyPositive,
                ClassSign::EventuallyPositive,
                ClassSign::EventuallyNegative
            ]
        );
        assert_eq!(p.threshold, 1);
    }

    #[test]
    fn profile_with_competing_bases() {
        // 4^t eventually beats -10·2^t even though early values are negative
        let s = parse("prefix[] period=1 term base=2 coeffs[-10] term base=4 coeffs[1]");
        let p = s.eventual_sign_profile();
        assert_eq!(p.classes, vec![ClassSign::EventuallyPositive]);
        for t in p.threshold..p.threshold + 10 {
            assert!(s.evaluate(t).is_positive(), "threshold dishonest at t={t}");
        }
        assert!(s.evaluate(p.threshold - 1).sign() != Ordering::Greater);
    }

    #[test]
    fn liminf_limsup_examples() {
        let wc = ExpPeriodicStream::constant(i(2));
        assert_eq!(
            wc.liminf_limsup(),
            (ExtRat::Finite(i(2)), ExtRat::Finite(i(2)))
        );
        let w1 = ExpPeriodicStream::periodic(vec![i(2), i(2), i(1)]);
        assert_eq!(
            w1.liminf_limsup(),
            (ExtRat::Finite(i(1)), ExtRat::Finite(i(2)))
        );
        let ordeal_life = parse("prefix[] period=1 term base=4 coeffs[1/2]");
        assert_eq!(
            ordeal_life.liminf_limsup(),
            (ExtRat::PlusInfinity, ExtRat::PlusInfinity)
        );
        // oracle: Table-style values 2, 8, 32, 128, 512 strictly increase
        let vals = ordeal_life.take_values(5);
        assert_eq!(vals, vec![i(2), i(8), i(32), i(128), i(512)]);
    }

    #[test]
    fn liminf_of_decaying_stream_is_zero() {
        let s = parse("prefix[9] period=2 term base=1/2 coeffs[1,-1]");
        assert_eq!(
            s.liminf_limsup(),
            (ExtRat::Finite(i(0)), ExtRat::Finite(i(0)))
        );
    }

    #[test]
    fn classify_examples() {
        let cycles_d = ExpPeriodicStream::periodic(vec![i(1), i(1), i(-1)]);
        assert_eq!(cycles_d.classify_partial_sums(), SumClass::DivergesPlus);

        let finite = parse("prefix[1] period=1");
        assert_eq!(finite.classify_partial_sums(), SumClass::ConvergesTo(i(1)));

        let osc = parse("prefix[] period=2 term base=2 coeffs[1,-1]");
        assert_eq!(
            osc.classify_partial_sums(),
            SumClass::Oscillates {
                liminf: ExtRat::MinusInfinity,
                limsup: ExtRat::PlusInfinity
            }
        );

        // bounded oscillation with finite limits 0 and 1
        let flip = ExpPeriodicStream::periodic(vec![i(1), i(-1)]);
        assert_eq!(
            flip.classify_partial_sums(),
            SumClass::Oscillates {
                liminf: ExtRat::Finite(i(0)),
                limsup: ExtRat::Finite(i(1))
            }
        );
    }

    #[test]
    fn offset_decomposition_matches_closed_form() {
        for lit in [
            "prefix[-2] period=1 term base=4 coeffs[-1/4]",
            "prefix[3,3] period=1 term base=1 coeffs[1]",
            "prefix[] period=2 term base=2 coeffs[1,-1]",
            "prefix[1/3] period=3 term base=1/2 coeffs[4,0,-2] term base=1 coeffs[1,1,-2]",
        ] {
            let s = parse(lit);
            s.partial_sum_analysis().check_decomposition(&s);
        }
    }

    #[test]
    fn signed_parts_examples() {
        // infinitely many +2, infinitely many -1, finitely many -3
        let s = parse("prefix[-3,-3] period=2 term base=1 coeffs[2,-1]");
        assert_eq!(
            s.signed_part_summability(),
            (SumPart::Infinite, SumPart::Infinite)
        );

        let z = ExpPeriodicStream::zero();
        assert_eq!(
            z.signed_part_summability(),
            (SumPart::FiniteSum(i(0)), SumPart::FiniteSum(i(0)))
        );

        let halves = parse("prefix[] period=1 term base=1/2 coeffs[1]");
        assert_eq!(
            halves.signed_part_summability(),
            (SumPart::FiniteSum(i(1)), SumPart::FiniteSum(i(0)))
        );
        // oracle: iterated summation approaches 1 within 2^-50
        let mut acc = Rat::zero();
        for t in 1..=60u64 {
            acc += &halves.evaluate(t);
        }
        assert!((&i(1) - &acc) < Rat::from_int(2).pow(-50));
        assert!(acc < i(1));
    }

    #[test]
    fn signed_parts_with_mixed_decay() {
        // positives decay (sum 1), negatives persist
        let s = parse("prefix[] period=2 term base=1/2 coeffs[2,0] term base=1 coeffs[0,-5]");
        let (pos, neg) = s.signed_part_summability();
        // Σ 2·(1/2)^t over odd t = 2 · (1/2)/(1 - 1/4) ... computed exactly
        assert_eq!(pos, SumPart::FiniteSum(Rat::new(4, 3)));
        assert_eq!(neg, SumPart::Infinite);
    }

    #[test]
    fn total_sum_consistency() {
        let s = parse("prefix[5] period=2 term base=1/2 coeffs[1,-1]");
        let total = s.total_sum().unwrap();
        assert_eq!(s.classify_partial_sums(), SumClass::ConvergesTo(total));
    }

    #[test]
    fn density_examples() {
        let w1 = ExpPeriodicStream::periodic(vec![i(2), i(2), i(1)]);
        assert_eq!(w1.density(), Some(ExtRat::Finite(Rat::new(5, 3))));
        let w2 = ExpPeriodicStream::periodic(vec![i(1), i(1), i(2)]);
        assert_eq!(w2.density(), Some(ExtRat::Finite(Rat::new(4, 3))));
        let wd = parse("prefix[3,3] period=1 term base=1 coeffs[1]");
        assert_eq!(wd.density(), Some(ExtRat::Finite(i(1))));
        let growing = parse("prefix[] period=1 term base=4 coeffs[1/2]");
        assert_eq!(growing.density(), Some(ExtRat::PlusInfinity));
        // oscillating at a growing base: no mean-utility limit
        let osc = parse("prefix[] period=2 term base=2 coeffs[1,-1]");
        assert_eq!(osc.density(), None);
    }
}
