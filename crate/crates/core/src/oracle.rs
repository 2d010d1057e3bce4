//! Brute-force cross-checks of the symbolic layer, and explicit
//! enumeration witnesses for the order-dependence of per-person sums.
//!
//! The symbolic analyses carry their own correctness arguments; the
//! oracle exists to catch implementation bugs. It verifies, by direct
//! iterated evaluation over a finite horizon, that closed-form partial
//! sums, sign profiles, limit bounds, sum classifications, and signed
//! parts all agree with what the numbers actually do.

use std::cmp::Ordering;
use std::path::Path;

use crate::corpus::{CheckResult, CorpusReport};
use crate::criteria::{common_universe, Universe};
use crate::error::{Error, Result};
use crate::rat::{ExtRat, Rat};
use crate::stream::{ExpPeriodicStream, SignProfile, SumClass, SumPart};
use crate::world::World;
use crate::worldspec::load_world;

/// Everything the symbolic layer asserts about one stream.
#[derive(Clone, Debug)]
pub struct StreamClaims {
    pub profile: SignProfile,
    pub liminf: ExtRat,
    pub limsup: ExtRat,
    pub sum_class: SumClass,
    pub parts: (SumPart, SumPart),
}

impl StreamClaims {
    pub fn derive(s: &ExpPeriodicStream) -> Self {
        let (liminf, limsup) = s.liminf_limsup();
        StreamClaims {
            profile: s.eventual_sign_profile(),
            liminf,
            limsup,
            sum_class: s.classify_partial_sums(),
            parts: s.signed_part_summability(),
        }
    }
}

fn discrepancy(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::Discrepancy(format!("{what}: {detail}"))
}

/// Full cross-check of a stream's symbolic analysis against direct
/// evaluation up to `horizon`. Any mismatch is a build-blocking defect.
pub fn check_stream_analysis(s: &ExpPeriodicStream, horizon: u64) -> Result<()> {
    let m = s.period() as u64;
    assert!(
        horizon >= s.prefix_len() + 10 * m,
        "oracle horizon must cover the prefix plus ten periods"
    );
    // closed-form partial sums must equal the iterated sums exactly:
    // every index through the first blocks, then sampled, then the end
    let mut acc = Rat::zero();
    for n in 1..=horizon {
        acc += &s.evaluate(n);
        if n <= s.prefix_len() + 12 * m || n % 7 == 0 || n == horizon {
            let closed = s.partial_sum(n);
            if closed != acc {
                return Err(discrepancy(
                    "partial_sum",
                    format!("closed form {closed} != iterated {acc} at n={n}"),
                ));
            }
        }
    }
    check_claims(s, &StreamClaims::derive(s), horizon)
}

/// Checks externally supplied claims against the stream itself, so a
/// corrupted stream or a wrong analysis both surface as discrepancies.
pub fn check_claims(s: &ExpPeriodicStream, claims: &StreamClaims, horizon: u64) -> Result<()> {
    let m = s.period() as u64;

    // sign profile honesty on a sampled tail
    let profile = &claims.profile;
    if profile.period != s.period() {
        return Err(discrepancy("profile", "period mismatch"));
    }
    for t in profile.threshold..=profile.threshold + 10 * m {
        let got = s.evaluate(t).sign();
        let want = profile.class_of(t).as_ordering();
        if got != want {
            return Err(discrepancy(
                "sign profile",
                format!("class promises {want:?} but value at t={t} is {:?}", got),
            ));
        }
    }

    // limit bounds
    if claims.liminf > claims.limsup {
        return Err(discrepancy("limits", "liminf above limsup"));
    }
    if s.tail_is_periodic() {
        // plain periodic tails attain their limits exactly
        let p = s.prefix_len();
        let vals: Vec<Rat> = (p + 1..=p + m).map(|t| s.evaluate(t)).collect();
        let lo = ExtRat::Finite(vals.iter().min().unwrap().clone());
        let hi = ExtRat::Finite(vals.iter().max().unwrap().clone());
        if lo != claims.liminf || hi != claims.limsup {
            return Err(discrepancy(
                "limits",
                format!(
                    "periodic tail ranges over [{lo},{hi}], claimed [{},{}]",
                    claims.liminf, claims.limsup
                ),
            ));
        }
    } else {
        // trend check: compare an early and a late sampling window
        let start = profile.threshold + 32 * m;
        if start + 8 * m <= horizon {
            let window = |from: u64| -> (Rat, Rat) {
                let vals: Vec<Rat> = (from..from + 4 * m).map(|t| s.evaluate(t)).collect();
                (
                    vals.iter().min().unwrap().clone(),
                    vals.iter().max().unwrap().clone(),
                )
            };
            let (min_early, max_early) = window(start);
            let (min_late, max_late) = window(horizon - 4 * m);
            match &claims.limsup {
                ExtRat::PlusInfinity => {
                    if max_late <= max_early {
                        return Err(discrepancy("limsup", "claimed +inf but maxima shrink"));
                    }
                }
                ExtRat::Finite(h) => {
                    if max_late > h.clone().max(max_early.clone()) {
                        return Err(discrepancy("limsup", "sampled maxima escape the claim"));
                    }
                }
                ExtRat::MinusInfinity => {
                    if max_late >= max_early {
                        return Err(discrepancy("limsup", "claimed -inf but maxima persist"));
                    }
                }
            }
            match &claims.liminf {
                ExtRat::MinusInfinity => {
                    if min_late >= min_early {
                        return Err(discrepancy("liminf", "claimed -inf but minima shrink"));
                    }
                }
                ExtRat::Finite(l) => {
                    if min_late < l.clone().min(min_early.clone()) {
                        return Err(discrepancy("liminf", "sampled minima escape the claim"));
                    }
                }
                ExtRat::PlusInfinity => {
                    if min_late <= min_early {
                        return Err(discrepancy("liminf", "claimed +inf but minima persist"));
                    }
                }
            }
        }
    }

    // sum classification trend on the sampled tail
    let states = s.partial_sum_analysis().offset_states(&Rat::zero());
    let settled = states.iter().map(|st| st.n_threshold).max().unwrap_or(1);
    match &claims.sum_class {
        SumClass::ConvergesTo(c) => {
            if settled + 8 * m <= horizon {
                let dev = |from: u64| -> Rat {
                    (from..from + 2 * m)
                        .map(|n| (&s.partial_sum(n) - c).abs())
                        .max()
                        .unwrap()
                };
                let early = dev(settled + 2 * m);
                let late = dev(horizon - 2 * m);
                if late > early {
                    return Err(discrepancy(
                        "sum class",
                        format!("claimed convergence to {c} but deviations grow"),
                    ));
                }
            }
        }
        SumClass::DivergesPlus | SumClass::DivergesMinus => {
            let want = if claims.sum_class == SumClass::DivergesPlus {
                Ordering::Greater
            } else {
                Ordering::Less
            };
            let from = settled.max(horizon.saturating_sub(6 * m)).max(1);
            if from + m <= horizon {
                for n in from..=horizon - m {
                    let step = &s.partial_sum(n + m) - &s.partial_sum(n);
                    if step.sign() != want {
                        return Err(discrepancy(
                            "sum class",
                            format!("claimed monotone divergence broken at n={n}"),
                        ));
                    }
                }
            }
        }
        SumClass::Oscillates { liminf, limsup } => {
            if liminf >= limsup {
                return Err(discrepancy("sum class", "oscillation needs liminf < limsup"));
            }
            if settled + 4 * m <= horizon {
                let vals: Vec<Rat> = (horizon - 2 * m..=horizon).map(|n| s.partial_sum(n)).collect();
                let lo = vals.iter().min().unwrap();
                let hi = vals.iter().max().unwrap();
                if let (ExtRat::Finite(li), ExtRat::Finite(ls)) = (liminf, limsup) {
                    let spread = &(hi - lo) * &Rat::from_int(2);
                    if spread < (ls - li) {
                        return Err(discrepancy(
                            "sum class",
                            "claimed oscillation but sums settle",
                        ));
                    }
                }
            }
        }
    }

    // signed parts against the sum classification
    match &claims.parts {
        (SumPart::FiniteSum(p), SumPart::FiniteSum(q)) => {
            let want = SumClass::ConvergesTo(p - q);
            if claims.sum_class != want {
                return Err(discrepancy(
                    "signed parts",
                    format!("finite parts demand {want}, classified {}", claims.sum_class),
                ));
            }
        }
        (SumPart::Infinite, SumPart::FiniteSum(_)) => {
            if claims.sum_class != SumClass::DivergesPlus {
                return Err(discrepancy("signed parts", "positive-only mass must diverge up"));
            }
        }
        (SumPart::FiniteSum(_), SumPart::Infinite) => {
            if claims.sum_class != SumClass::DivergesMinus {
                return Err(discrepancy("signed parts", "negative-only mass must diverge down"));
            }
        }
        (SumPart::Infinite, SumPart::Infinite) => {}
    }
    // and the finite classification itself against iterated sums
    if let SumClass::ConvergesTo(c) = &claims.sum_class {
        let tail = &s.partial_sum(horizon) - c;
        let earlier = &s.partial_sum(horizon / 2) - c;
        if tail.abs() > earlier.abs() && !earlier.is_zero() {
            return Err(discrepancy("sum class", "convergent sums drift away"));
        }
    }
    Ok(())
}

/// Which way an enumeration witness should push the running sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    FrontLoadNegatives,
    FrontLoadPositives,
}

/// One step of an explicit enumeration of the union population.
#[derive(Clone, Debug)]
pub struct EnumerationStep {
    pub position: u64,
    pub label: String,
    pub diff: Rat,
    pub running: Rat,
}

/// Positions reserved for the minority sign: a few early appearances,
/// then geometrically sparser ones, so the running sums escape
/// monotonically beyond position 30 while the enumeration still
/// exhausts both pools in the limit.
fn minority_position(k: u64) -> bool {
    if k == 10 || k == 20 || k == 30 {
        return true;
    }
    if k < 400 {
        return false;
    }
    let mut x = 400u64;
    while x < k {
        x = x.saturating_mul(2);
    }
    x == k
}

/// Builds a finite prefix of an enumeration of the union population of
/// the two worlds whose running difference sums escape in the requested
/// direction. Requires the corresponding signed part to be infinite;
/// the construction mirrors the argument that enumeration order decides
/// divergent per-person sums.
pub fn wpc_witness(
    w1: &World,
    w2: &World,
    kind: WitnessKind,
    len: usize,
) -> Result<Vec<EnumerationStep>> {
    // (label, diff) pool feeds, in slot order
    let entries: Vec<(String, Rat)> = match common_universe(w1, w2)? {
        Universe::Identical { d } => {
            let profile = d.eventual_sign_profile();
            let cap = profile.threshold + d.period() as u64 * (len as u64 + 16) + 64;
            (1..=cap)
                .map(|e| (format!("e{e}"), d.evaluate(e)))
                .collect()
        }
        Universe::ZeroPadded { u1, u2 } => {
            let p1 = u1.eventual_sign_profile();
            let p2 = u2.eventual_sign_profile();
            let period = (u1.period().max(u2.period())) as u64;
            let cap = p1.threshold.max(p2.threshold) + period * (len as u64 + 16) + 64;
            let mut v = Vec::new();
            for i in 1..=cap {
                v.push((format!("{}:slot{}", w1.name(), i), u1.evaluate(i)));
                v.push((format!("{}:slot{}", w2.name(), i), -&u2.evaluate(i)));
            }
            v
        }
    };

    let (pos_part, neg_part) = match common_universe(w1, w2)? {
        Universe::Identical { d } => d.signed_part_summability(),
        Universe::ZeroPadded { u1, u2 } => {
            let (p1, n1) = u1.signed_part_summability();
            let (p2, n2) = u2.signed_part_summability();
            let add = |a: SumPart, b: SumPart| match (a, b) {
                (SumPart::FiniteSum(x), SumPart::FiniteSum(y)) => SumPart::FiniteSum(&x + &y),
                _ => SumPart::Infinite,
            };
            (add(p1, n2), add(n1, p2))
        }
    };
    let requested_infinite = match kind {
        WitnessKind::FrontLoadNegatives => neg_part == SumPart::Infinite,
        WitnessKind::FrontLoadPositives => pos_part == SumPart::Infinite,
    };
    if !requested_infinite {
        return Err(Error::NotApplicable(format!(
            "{kind:?} needs an infinite signed part"
        )));
    }

    let mut majority: Vec<(String, Rat)> = Vec::new();
    let mut minority: Vec<(String, Rat)> = Vec::new();
    let majority_sign = match kind {
        WitnessKind::FrontLoadNegatives => Ordering::Less,
        WitnessKind::FrontLoadPositives => Ordering::Greater,
    };
    for (label, diff) in entries {
        match diff.sign() {
            Ordering::Equal => {}
            s if s == majority_sign => majority.push((label, diff)),
            _ => minority.push((label, diff)),
        }
    }
    majority.reverse(); // consume with pop() in slot order
    minority.reverse();

    let mut out = Vec::with_capacity(len);
    let mut running = Rat::zero();
    for k in 1..=len as u64 {
        let pick = if minority_position(k) && !minority.is_empty() {
            minority.pop()
        } else if let Some(e) = majority.pop() {
            Some(e)
        } else {
            minority.pop()
        };
        let (label, diff) = pick.ok_or_else(|| {
            Error::NotApplicable("pools exhausted before the requested length".into())
        })?;
        running += &diff;
        out.push(EnumerationStep {
            position: k,
            label,
            diff,
            running: running.clone(),
        });
    }
    Ok(out)
}

/// Renders witness steps in the shared report line format.
pub fn render_witness(steps: &[EnumerationStep]) -> String {
    let mut out = String::new();
    for s in steps {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            s.position, s.label, s.diff, s.running
        ));
    }
    out
}

/// Oracle pass over every stream the corpus worlds induce, reported in
/// the corpus format.
pub fn oracle_suite(dir: &Path) -> Result<CorpusReport> {
    let mut report = CorpusReport::default();
    let mut check = |name: String, stream: &ExpPeriodicStream| {
        let horizon = stream.prefix_len() + 10 * stream.period() as u64 + 40;
        let res = check_stream_analysis(stream, horizon);
        report.checks.push(CheckResult {
            case: "oracle".into(),
            what: name,
            passed: res.is_ok(),
            expected: "consistent".into(),
            got: match res {
                Ok(()) => "consistent".into(),
                Err(e) => e.to_string(),
            },
        });
    };

    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "ws"))
        .collect();
    files.sort();
    for path in files {
        let w = load_world(&path)?;
        check(format!("{} lifetime", w.name()), &w.lifetime_stream());
        if let Ok(r) = w.realized_time_stream() {
            check(format!("{} realized", w.name()), &r);
        }
        if let Ok(p) = w.person_stream() {
            check(format!("{} per-person", w.name()), &p);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::worldspec::parse_world;

    fn i(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn parse(s: &str) -> ExpPeriodicStream {
        s.parse().unwrap()
    }

    #[test]
    fn ordeal_realized_passes() {
        let s = parse("prefix[-2] period=1 term base=4 coeffs[-1/4]");
        check_stream_analysis(&s, 40).unwrap();
    }

    #[test]
    fn zero_stream_passes() {
        check_stream_analysis(&ExpPeriodicStream::zero(), 20).unwrap();
    }

    #[test]
    fn assorted_streams_pass() {
        for lit in [
            "prefix[3,3] period=1 term base=1 coeffs[1]",
            "prefix[] period=3 term base=1 coeffs[1,1,-1]",
            "prefix[] period=2 term base=2 coeffs[1,-1]",
            "prefix[1/3] period=3 term base=1/2 coeffs[4,0,-2] term base=1 coeffs[1,1,-2]",
            "prefix[-5] period=1 term base=1/2 coeffs[1]",
            "prefix[] period=2 term base=1/3 coeffs[1,-2] term base=4 coeffs[0,1/2]",
        ] {
            check_stream_analysis(&parse(lit), 120).unwrap_or_else(|e| {
                panic!("oracle rejected `{lit}`: {e}");
            });
        }
    }

    #[test]
    fn corrupted_stream_is_detected() {
        // derive claims, then flip a coefficient: the claims no longer
        // describe the stream
        let s = parse("prefix[] period=2 term base=1 coeffs[2,-1]");
        let claims = StreamClaims::derive(&s);
        let corrupted = parse("prefix[] period=2 term base=1 coeffs[-2,-1]");
        let err = check_claims(&corrupted, &claims, 80).unwrap_err();
        assert!(matches!(err, Error::Discrepancy(_)));
    }

    #[test]
    fn corrupted_limit_claim_is_detected() {
        let s = parse("prefix[] period=1 term base=1 coeffs[2]");
        let mut claims = StreamClaims::derive(&s);
        claims.limsup = ExtRat::Finite(i(1));
        assert!(check_claims(&s, &claims, 60).is_err());
    }

    fn depletion_pair() -> (World, World) {
        let wc = parse_world(
            "world conservation\nbirths start=1 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[] period=1 term base=1 coeffs[2]\n",
        )
        .unwrap();
        let wd = parse_world(
            "world depletion\nbirths start=1 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[3,3] period=1 term base=1 coeffs[1]\n",
        )
        .unwrap();
        (wc, wd)
    }

    #[test]
    fn witness_front_loads_negatives() {
        let (wc, wd) = depletion_pair();
        let steps = wpc_witness(&wc, &wd, WitnessKind::FrontLoadNegatives, 100).unwrap();
        assert_eq!(steps.len(), 100);
        // internally consistent running sums
        let mut acc = Rat::zero();
        for s in &steps {
            acc += &s.diff;
            assert_eq!(acc, s.running, "running sum broken at {}", s.position);
        }
        // strictly decreasing beyond position 30
        for w in steps.windows(2) {
            if w[0].position >= 30 {
                assert!(
                    w[1].running < w[0].running,
                    "running sums not strictly decreasing at {}",
                    w[1].position
                );
            }
        }
        // and decreasing without bound over the prefix as a whole
        assert!(steps.last().unwrap().running < i(-40));
    }

    #[test]
    fn witness_front_loads_positives() {
        let (wc, wd) = depletion_pair();
        let steps = wpc_witness(&wc, &wd, WitnessKind::FrontLoadPositives, 100).unwrap();
        for w in steps.windows(2) {
            if w[0].position >= 30 {
                assert!(w[1].running > w[0].running);
            }
        }
        assert!(steps.last().unwrap().running > i(40));
    }

    #[test]
    fn witness_not_applicable_for_finite_parts() {
        let (wc, _) = depletion_pair();
        // a world against itself has zero differences everywhere
        let err = wpc_witness(&wc, &wc, WitnessKind::FrontLoadNegatives, 50).unwrap_err();
        assert!(matches!(err, Error::NotApplicable(_)));
    }

    #[test]
    fn oracle_suite_over_corpus() {
        let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
        let report = oracle_suite(&dir).unwrap();
        assert!(report.all_passed(), "{}", report.render_text());
        assert!(report.checks.len() >= 20);
    }
}
