//! Text form of a stream:
//! `prefix[r1,r2,...] period=m term base=b coeffs[c1,...,cm] term ...`
//!
//! Rationals are `p` or `p/q`; bracket lists are comma-separated with no
//! internal whitespace. Display emits the canonical presentation, so
//! parse→display round-trips are stable.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rat::Rat;

use super::{ExpPeriodicStream, Term};

impl fmt::Display for ExpPeriodicStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "prefix[{}]", join(&self.prefix))?;
        write!(f, " period={}", self.period)?;
        for term in &self.terms {
            write!(f, " term base={} coeffs[{}]", term.base, join(&term.coeffs))?;
        }
        Ok(())
    }
}

fn join(vals: &[Rat]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_list(body: &str) -> Result<Vec<Rat>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',').map(|s| s.trim().parse()).collect()
}

impl FromStr for ExpPeriodicStream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::BadStreamLiteral(format!("{msg} in `{s}`"));
        let mut tokens = s.split_whitespace();

        let prefix_tok = tokens.next().ok_or_else(|| bad("empty literal"))?;
        let body = prefix_tok
            .strip_prefix("prefix[")
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(|| bad("expected `prefix[...]`"))?;
        let prefix = parse_list(body)?;

        let period_tok = tokens.next().ok_or_else(|| bad("missing `period=`"))?;
        let period: usize = period_tok
            .strip_prefix("period=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("expected `period=<positive integer>`"))?;

        let mut terms = Vec::new();
        while let Some(tok) = tokens.next() {
            if tok != "term" {
                return Err(bad("expected `term`"));
            }
            let base_tok = tokens.next().ok_or_else(|| bad("missing `base=`"))?;
            let base: Rat = base_tok
                .strip_prefix("base=")
                .ok_or_else(|| bad("expected `base=<rational>`"))?
                .parse()?;
            let coeffs_tok = tokens.next().ok_or_else(|| bad("missing `coeffs[...]`"))?;
            let coeffs = parse_list(
                coeffs_tok
                    .strip_prefix("coeffs[")
                    .and_then(|rest| rest.strip_suffix(']'))
                    .ok_or_else(|| bad("expected `coeffs[...]`"))?,
            )?;
            terms.push(Term::new(base, coeffs));
        }
        ExpPeriodicStream::new(prefix, period, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ordeal_literal() {
        let s: ExpPeriodicStream = "prefix[-2] period=1 term base=4 coeffs[-1/4]"
            .parse()
            .unwrap();
        assert_eq!(s.to_string(), "prefix[-2] period=1 term base=4 coeffs[-1/4]");
    }

    #[test]
    fn zero_stream_literal() {
        let s: ExpPeriodicStream = "prefix[] period=1".parse().unwrap();
        assert!(s.is_zero());
        assert_eq!(s.to_string(), "prefix[] period=1");
    }

    #[test]
    fn display_is_canonical() {
        let s: ExpPeriodicStream =
            "prefix[] period=2 term base=1 coeffs[3,3] term base=0 coeffs[9,9]"
                .parse()
                .unwrap();
        assert_eq!(s.to_string(), "prefix[] period=1 term base=1 coeffs[3]");
    }

    #[test]
    fn rejects_malformed_literals() {
        for lit in [
            "",
            "prefix[1 period=1",
            "prefix[1] period=0",
            "prefix[] period=2 term base=1 coeffs[1]",
            "prefix[] period=1 term base=x coeffs[1]",
            "prefix[] period=1 junk",
        ] {
            assert!(lit.parse::<ExpPeriodicStream>().is_err(), "accepted `{lit}`");
        }
    }

    proptest::proptest! {
        #[test]
        fn round_trip_random_streams(
            prefix in proptest::collection::vec(-9i64..=9, 0..=3),
            base_idx in 0usize..5,
            coeffs in proptest::collection::vec(-9i64..=9, 1..=4),
        ) {
            let bases = ["1/3", "1/2", "1", "2", "4"];
            let period = coeffs.len();
            let lit = format!(
                "prefix[{}] period={} term base={} coeffs[{}]",
                prefix.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                period,
                bases[base_idx],
                coeffs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
            );
            let s: ExpPeriodicStream = lit.parse().unwrap();
            let back: ExpPeriodicStream = s.to_string().parse().unwrap();
            proptest::prop_assert_eq!(&s, &back);
            // canonicalization preserved every value
            for t in 1..=40u64 {
                let direct: Rat = if t <= prefix.len() as u64 {
                    Rat::from_int(prefix[(t - 1) as usize])
                } else {
                    let b: Rat = bases[base_idx].parse().unwrap();
                    let c = Rat::from_int(coeffs[((t - 1) % period as u64) as usize]);
                    &c * &b.pow(t as i64)
                };
                proptest::prop_assert_eq!(s.evaluate(t), direct);
            }
        }
    }
}
