//! Line-oriented text format for worlds.
//!
//! ```text
//! world <name>
//! births start=<rat> step=<rat>
//! lifespan <rat>
//! identity distinct
//! identity shared registry=<name> schedule=<schedule-literal>
//! segment <stream-literal>        # one line per life segment
//! ```
//!
//! `start` is the first birth time, `step` the gap between births, so
//! slot `i` is born at `start + (i-1)·step`. Blank lines and `#`
//! comments are ignored.

use std::path::Path;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::world::{IdentityPolicy, World};

pub fn load_world(path: &Path) -> Result<World> {
    let text = std::fs::read_to_string(path)?;
    parse_world(&text)
}

pub fn parse_world(text: &str) -> Result<World> {
    let mut name: Option<String> = None;
    let mut births: Option<(Rat, Rat)> = None;
    let mut lifespan: Option<Rat> = None;
    let mut identity: Option<IdentityPolicy> = None;
    let mut segments = Vec::new();

    let err = |line: usize, msg: String| Error::Worldspec { line, msg };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "world" => {
                if rest.is_empty() {
                    return Err(err(line_no, "world needs a name".into()));
                }
                name = Some(rest.to_string());
            }
            "births" => {
                let mut start = None;
                let mut step = None;
                for tok in rest.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("start=") {
                        start = Some(v.parse::<Rat>().map_err(|e| err(line_no, e.to_string()))?);
                    } else if let Some(v) = tok.strip_prefix("step=") {
                        step = Some(v.parse::<Rat>().map_err(|e| err(line_no, e.to_string()))?);
                    } else {
                        return Err(err(line_no, format!("unexpected token `{tok}`")));
                    }
                }
                let start = start.ok_or_else(|| err(line_no, "births needs start=".into()))?;
                let step = step.ok_or_else(|| err(line_no, "births needs step=".into()))?;
                births = Some((start, step));
            }
            "lifespan" => {
                lifespan = Some(rest.parse().map_err(|e: Error| err(line_no, e.to_string()))?);
            }
            "identity" => {
                if rest == "distinct" {
                    identity = Some(IdentityPolicy::DistinctAcrossWorlds);
                } else if let Some(shared) = rest.strip_prefix("shared") {
                    let shared = shared.trim();
                    let reg_part = shared
                        .strip_prefix("registry=")
                        .ok_or_else(|| err(line_no, "expected `registry=<name>`".into()))?;
                    let (registry, sched_part) = reg_part
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| err(line_no, "expected `schedule=<literal>`".into()))?;
                    let schedule = sched_part
                        .trim()
                        .strip_prefix("schedule=")
                        .ok_or_else(|| err(line_no, "expected `schedule=<literal>`".into()))?
                        .parse()
                        .map_err(|e: Error| err(line_no, e.to_string()))?;
                    identity = Some(IdentityPolicy::SharedRegistry {
                        registry: registry.to_string(),
                        schedule,
                    });
                } else {
                    return Err(err(line_no, "identity must be `distinct` or `shared ...`".into()));
                }
            }
            "segment" => {
                segments.push(rest.parse().map_err(|e: Error| err(line_no, e.to_string()))?);
            }
            other => {
                return Err(err(line_no, format!("unknown directive `{other}`")));
            }
        }
    }

    let name = name.ok_or_else(|| err(0, "missing `world` line".into()))?;
    let (start, step) = births.ok_or_else(|| err(0, "missing `births` line".into()))?;
    let lifespan = lifespan.ok_or_else(|| err(0, "missing `lifespan` line".into()))?;
    let identity = identity.ok_or_else(|| err(0, "missing `identity` line".into()))?;
    // t_i = step·i + (start - step)
    let offset = &start - &step;
    World::new(name, step, offset, lifespan, segments, identity)
}

/// Serializes a world back into the line format.
pub fn world_to_text(w: &World) -> String {
    let start = &w.birth_time(1);
    let mut out = format!(
        "world {}\nbirths start={} step={}\nlifespan {}\n",
        w.name(),
        start,
        w.birth_step(),
        w.lifespan()
    );
    match w.identity() {
        IdentityPolicy::DistinctAcrossWorlds => out.push_str("identity distinct\n"),
        IdentityPolicy::SharedRegistry { registry, schedule } => {
            out.push_str(&format!(
                "identity shared registry={registry} schedule={schedule}\n"
            ));
        }
    }
    for seg in w.segments() {
        out.push_str(&format!("segment {seg}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDEAL: &str = "\
# two-segment lives, one birth per period
world ordeal
births start=1 step=1
lifespan 2
identity distinct
segment prefix[] period=1 term base=4 coeffs[-1/2]
segment prefix[] period=1 term base=4 coeffs[1]
";

    #[test]
    fn parses_ordeal() {
        let w = parse_world(ORDEAL).unwrap();
        assert_eq!(w.name(), "ordeal");
        assert_eq!(w.birth_time(1), Rat::one());
        assert_eq!(w.birth_time(5), Rat::from_int(5));
        assert_eq!(w.segments().len(), 2);
    }

    #[test]
    fn round_trips_through_text() {
        let w = parse_world(ORDEAL).unwrap();
        let again = parse_world(&world_to_text(&w)).unwrap();
        assert_eq!(w, again);
    }

    #[test]
    fn parses_shared_identity() {
        let text = "\
world w
births start=1 step=1
lifespan 1
identity shared registry=eggs schedule=rules{ 1 mod 2 -> 1*i-2; 0 mod 2 -> 1*i+2 } except{ 1->2 }
segment prefix[] period=2 term base=1 coeffs[1,2]
";
        let w = parse_world(text).unwrap();
        let again = parse_world(&world_to_text(&w)).unwrap();
        assert_eq!(w, again);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "world w\nbirths start=1 step=1\nlifespan 1\nidentity distinct\nsegment prefix[ oops\n";
        match parse_world(text) {
            Err(Error::Worldspec { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected worldspec error, got {other:?}"),
        }
        let text = "world w\nbirths start=1\n";
        match parse_world(text) {
            Err(Error::Worldspec { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected worldspec error, got {other:?}"),
        }
    }

    #[test]
    fn missing_sections_rejected() {
        assert!(parse_world("world w\n").is_err());
        assert!(parse_world("births start=1 step=1\nlifespan 1\nidentity distinct\nsegment prefix[] period=1\n").is_err());
    }
}
