//! The catalogue of betterness criteria and the comparison engine.
//!
//! Every criterion takes two worlds and produces a [`Verdict`], oriented
//! so that `StrictlyBetter` means the first world is better. Verdicts
//! come with a machine-readable witness: the strict location for the
//! dominance criteria, the separating constants for the threshold
//! criterion, partial-sum thresholds, window lengths, or densities.
//!
//! [`compare_all`] runs the catalogue across the requested location
//! views, collects the verdict matrix, and flags a CONFLICT whenever two
//! cells give opposite strict rankings and a DISAGREEMENT whenever one
//! cell says equal while another ranks strictly.

mod interval;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::rat::{ExtRat, Rat};
use crate::stream::{ExpPeriodicStream, SumPart};
use crate::world::{align_locations, Alignment, LocationView, World};

/// Outcome of one criterion on an ordered world pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    StrictlyBetter,
    StrictlyWorse,
    Equal,
    NoVerdict(NoVerdictReason),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoVerdictReason {
    /// The two worlds do not have the same locations under this view.
    NotSameLocations,
    /// The locations match but the criterion's condition holds in
    /// neither direction.
    Silent,
    /// The criterion needs ordered locations and the view has none.
    RequiresOrder,
}

impl Verdict {
    /// The verdict for the swapped argument order.
    pub fn mirrored(&self) -> Verdict {
        match self {
            Verdict::StrictlyBetter => Verdict::StrictlyWorse,
            Verdict::StrictlyWorse => Verdict::StrictlyBetter,
            other => other.clone(),
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Verdict::StrictlyBetter | Verdict::StrictlyWorse)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::StrictlyBetter => write!(f, "StrictlyBetter"),
            Verdict::StrictlyWorse => write!(f, "StrictlyWorse"),
            Verdict::Equal => write!(f, "Equal"),
            Verdict::NoVerdict(r) => write!(f, "NoVerdict({r})"),
        }
    }
}

impl fmt::Display for NoVerdictReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoVerdictReason::NotSameLocations => write!(f, "NotSameLocations"),
            NoVerdictReason::Silent => write!(f, "Silent"),
            NoVerdictReason::RequiresOrder => write!(f, "RequiresOrder"),
        }
    }
}

/// The criteria, with the location-relative ones instantiated per view.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionId {
    ParetoTimes,
    ParetoPersons,
    ParetoSlots,
    Sbi1Times,
    Sbi1Persons,
    Sbi1Slots,
    Wpc,
    Overtaking,
    IntervalDominance,
    ValueDensity,
}

/// Criterion families as they appear in report rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CriterionFamily {
    Pareto,
    Sbi1,
    Wpc,
    Overtaking,
    IntervalDominance,
    ValueDensity,
}

impl CriterionFamily {
    pub const ALL: [CriterionFamily; 6] = [
        CriterionFamily::Pareto,
        CriterionFamily::Sbi1,
        CriterionFamily::Wpc,
        CriterionFamily::Overtaking,
        CriterionFamily::IntervalDominance,
        CriterionFamily::ValueDensity,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CriterionFamily::Pareto => "pareto",
            CriterionFamily::Sbi1 => "sbi1",
            CriterionFamily::Wpc => "wpc",
            CriterionFamily::Overtaking => "overtaking",
            CriterionFamily::IntervalDominance => "interval_dominance",
            CriterionFamily::ValueDensity => "density(simplified)",
        }
    }

    pub fn id(&self, view: LocationView) -> CriterionId {
        match (self, view) {
            (CriterionFamily::Pareto, LocationView::Times) => CriterionId::ParetoTimes,
            (CriterionFamily::Pareto, LocationView::Persons) => CriterionId::ParetoPersons,
            (CriterionFamily::Pareto, LocationView::Slots) => CriterionId::ParetoSlots,
            (CriterionFamily::Sbi1, LocationView::Times) => CriterionId::Sbi1Times,
            (CriterionFamily::Sbi1, LocationView::Persons) => CriterionId::Sbi1Persons,
            (CriterionFamily::Sbi1, LocationView::Slots) => CriterionId::Sbi1Slots,
            (CriterionFamily::Wpc, _) => CriterionId::Wpc,
            (CriterionFamily::Overtaking, _) => CriterionId::Overtaking,
            (CriterionFamily::IntervalDominance, _) => CriterionId::IntervalDominance,
            (CriterionFamily::ValueDensity, _) => CriterionId::ValueDensity,
        }
    }
}

impl std::str::FromStr for CriterionFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pareto" => Ok(CriterionFamily::Pareto),
            "sbi1" => Ok(CriterionFamily::Sbi1),
            "wpc" => Ok(CriterionFamily::Wpc),
            "overtaking" => Ok(CriterionFamily::Overtaking),
            "interval_dominance" => Ok(CriterionFamily::IntervalDominance),
            "density" | "density(simplified)" => Ok(CriterionFamily::ValueDensity),
            other => Err(Error::Worldspec {
                line: 0,
                msg: format!("unknown criterion `{other}`"),
            }),
        }
    }
}

/// Machine-readable justification attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    None,
    /// First location with a strict utility difference.
    StrictAt(u64),
    /// Separating constants: winner's locations exceed `c1`, loser's
    /// fall below `c2`, with `c1 > c2`.
    Gap { c1: Rat, c2: Rat },
    /// Exact total of the per-person differences.
    Total(Rat),
    /// Signed-part classification of the per-person differences.
    Parts { pos: SumPart, neg: SumPart },
    /// Partial-sum threshold: the winner leads from this index on.
    Threshold(u64),
    /// Window length from which every interval sum favors the winner.
    WindowLen(u64),
    /// The two mean-utility limits.
    Densities(ExtRat, ExtRat),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::None => write!(f, "-"),
            Witness::StrictAt(t) => write!(f, "strict_at={t}"),
            Witness::Gap { c1, c2 } => write!(f, "c1={c1},c2={c2}"),
            Witness::Total(t) => write!(f, "total={t}"),
            Witness::Parts { pos, neg } => write!(f, "pos={pos},neg={neg}"),
            Witness::Threshold(n) => write!(f, "N={n}"),
            Witness::WindowLen(l) => write!(f, "L={l}"),
            Witness::Densities(a, b) => write!(f, "d1={a},d2={b}"),
        }
    }
}

/// Verdict plus witness, as returned by every criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub verdict: Verdict,
    pub witness: Witness,
}

impl CriterionOutcome {
    fn plain(verdict: Verdict) -> Self {
        CriterionOutcome {
            verdict,
            witness: Witness::None,
        }
    }

    fn not_same_locations() -> Self {
        Self::plain(Verdict::NoVerdict(NoVerdictReason::NotSameLocations))
    }

    fn silent() -> Self {
        Self::plain(Verdict::NoVerdict(NoVerdictReason::Silent))
    }
}

/// Pareto over the view's locations: better iff no location has less
/// utility and some location has strictly more. Signs are decided from
/// the eventual sign profile of the difference plus a finite check of
/// the region before its threshold.
pub fn pareto(view: LocationView, w1: &World, w2: &World) -> Result<CriterionOutcome> {
    let (s1, s2) = match align_locations(w1, w2, view)? {
        Alignment::NotSameLocations { .. } => return Ok(CriterionOutcome::not_same_locations()),
        Alignment::Aligned { s1, s2, .. } => (s1, s2),
    };
    let d = s1.subtract(&s2);
    if d.is_zero() {
        return Ok(CriterionOutcome::plain(Verdict::Equal));
    }
    let profile = d.eventual_sign_profile();
    let head_ok = |want: Ordering| (1..profile.threshold).all(|t| d.evaluate(t).sign() != want);
    if profile.all_nonnegative() && head_ok(Ordering::Less) {
        return Ok(CriterionOutcome {
            verdict: Verdict::StrictlyBetter,
            witness: Witness::StrictAt(first_strict(&d, &profile, Ordering::Greater)),
        });
    }
    if profile.all_nonpositive() && head_ok(Ordering::Greater) {
        return Ok(CriterionOutcome {
            verdict: Verdict::StrictlyWorse,
            witness: Witness::StrictAt(first_strict(&d, &profile, Ordering::Less)),
        });
    }
    Ok(CriterionOutcome::silent())
}

/// First index where the difference is strict in the given direction.
fn first_strict(
    d: &ExpPeriodicStream,
    profile: &crate::stream::SignProfile,
    want: Ordering,
) -> u64 {
    let mut t = 1u64;
    loop {
        if d.evaluate(t).sign() == want {
            return t;
        }
        t += 1;
        // d is nonzero and one-signed, so a strict index exists in the
        // head or in the first period past the threshold
        assert!(
            t <= profile.threshold + profile.period as u64,
            "no strict index found in a nonzero one-signed difference"
        );
    }
}

/// Threshold separation: better iff constants `c1 > c2` exist with all
/// but finitely many of the winner's locations above `c1` and the
/// loser's below `c2`. That is exactly `limsup(loser) < liminf(winner)`.
pub fn sbi1(view: LocationView, w1: &World, w2: &World) -> Result<CriterionOutcome> {
    let (s1, s2) = match align_locations(w1, w2, view)? {
        Alignment::NotSameLocations { .. } => return Ok(CriterionOutcome::not_same_locations()),
        Alignment::Aligned { s1, s2, .. } => (s1, s2),
    };
    let (li1, ls1) = s1.liminf_limsup();
    let (li2, ls2) = s2.liminf_limsup();
    if ls2 < li1 {
        let (c1, c2) = separating_gap(&li1, &ls2);
        return Ok(CriterionOutcome {
            verdict: Verdict::StrictlyBetter,
            witness: Witness::Gap { c1, c2 },
        });
    }
    if ls1 < li2 {
        let (c1, c2) = separating_gap(&li2, &ls1);
        return Ok(CriterionOutcome {
            verdict: Verdict::StrictlyWorse,
            witness: Witness::Gap { c1, c2 },
        });
    }
    Ok(CriterionOutcome::silent())
}

/// Rationals `c2 < c1` strictly between the loser's limsup and the
/// winner's liminf.
fn separating_gap(winner_liminf: &ExtRat, loser_limsup: &ExtRat) -> (Rat, Rat) {
    match (winner_liminf, loser_limsup) {
        (ExtRat::Finite(hi), ExtRat::Finite(lo)) => {
            let g = hi - lo;
            let third = &g / &Rat::from_int(3);
            (lo + &(&third + &third), lo + &third)
        }
        (ExtRat::PlusInfinity, ExtRat::Finite(lo)) => {
            (lo + &Rat::from_int(2), lo + &Rat::from_int(1))
        }
        (ExtRat::Finite(hi), ExtRat::MinusInfinity) => {
            (hi - &Rat::from_int(1), hi - &Rat::from_int(2))
        }
        (ExtRat::PlusInfinity, ExtRat::MinusInfinity) => (Rat::one(), Rat::zero()),
        _ => unreachable!("gap requires limsup < liminf"),
    }
}

/// How two populations can be merged for per-person accounting.
pub(crate) enum Universe {
    /// Same individuals in both worlds: a single difference stream.
    Identical { d: ExpPeriodicStream },
    /// Disjoint populations over one slot grid: non-existence counts as
    /// utility zero, so each world's own people carry their utilities
    /// with opposite signs.
    ZeroPadded {
        u1: ExpPeriodicStream,
        u2: ExpPeriodicStream,
    },
}

pub(crate) fn common_universe(w1: &World, w2: &World) -> Result<Universe> {
    if w1.same_population(w2) {
        let d = w1.person_stream()?.subtract(&w2.person_stream()?);
        Ok(Universe::Identical { d })
    } else if w1.births_match(w2) {
        Ok(Universe::ZeroPadded {
            u1: w1.lifetime_stream(),
            u2: w2.lifetime_stream(),
        })
    } else {
        Err(Error::NoCommonUniverse(format!(
            "worlds `{}` and `{}` share neither a registry nor a slot grid",
            w1.name(),
            w2.name()
        )))
    }
}

fn add_parts(a: SumPart, b: SumPart) -> SumPart {
    match (a, b) {
        (SumPart::FiniteSum(x), SumPart::FiniteSum(y)) => SumPart::FiniteSum(&x + &y),
        _ => SumPart::Infinite,
    }
}

/// The weak people criterion: better iff the summed per-person utility
/// differences tend to a positive value or plus infinity under every
/// enumeration of the union population. Equivalently: classify the
/// positive and negative parts of the differences; one-sided infinity
/// decides, two finite parts reduce to the exact total, and two infinite
/// parts are enumeration-dependent, hence silent.
pub fn wpc(w1: &World, w2: &World) -> Result<CriterionOutcome> {
    let (zero, pos, neg) = match common_universe(w1, w2)? {
        Universe::Identical { d } => {
            let (pos, neg) = d.signed_part_summability();
            (d.is_zero(), pos, neg)
        }
        Universe::ZeroPadded { u1, u2 } => {
            let (p1, n1) = u1.signed_part_summability();
            let (p2, n2) = u2.signed_part_summability();
            (
                u1.is_zero() && u2.is_zero(),
                add_parts(p1, n2),
                add_parts(n1, p2),
            )
        }
    };
    if zero {
        return Ok(CriterionOutcome::plain(Verdict::Equal));
    }
    let witness = Witness::Parts {
        pos: pos.clone(),
        neg: neg.clone(),
    };
    let outcome = match (pos, neg) {
        (SumPart::FiniteSum(p), SumPart::FiniteSum(n)) => {
            let total = &p - &n;
            let verdict = match total.sign() {
                Ordering::Greater => Verdict::StrictlyBetter,
                Ordering::Less => Verdict::StrictlyWorse,
                // differences cancel exactly but are not literally zero
                Ordering::Equal => Verdict::NoVerdict(NoVerdictReason::Silent),
            };
            CriterionOutcome {
                verdict,
                witness: Witness::Total(total),
            }
        }
        (SumPart::Infinite, SumPart::FiniteSum(_)) => CriterionOutcome {
            verdict: Verdict::StrictlyBetter,
            witness,
        },
        (SumPart::FiniteSum(_), SumPart::Infinite) => CriterionOutcome {
            verdict: Verdict::StrictlyWorse,
            witness,
        },
        (SumPart::Infinite, SumPart::Infinite) => CriterionOutcome {
            verdict: Verdict::NoVerdict(NoVerdictReason::Silent),
            witness,
        },
    };
    Ok(outcome)
}

/// Overtaking: better iff the partial-sum difference is eventually
/// strictly positive and does not converge to zero.
pub fn overtaking(view: LocationView, w1: &World, w2: &World) -> Result<CriterionOutcome> {
    if !view.is_ordered() {
        return Ok(CriterionOutcome::plain(Verdict::NoVerdict(
            NoVerdictReason::RequiresOrder,
        )));
    }
    let (s1, s2) = match align_locations(w1, w2, view)? {
        Alignment::NotSameLocations { .. } => return Ok(CriterionOutcome::not_same_locations()),
        Alignment::Aligned { s1, s2, .. } => (s1, s2),
    };
    let d = s1.subtract(&s2);
    if d.is_zero() {
        return Ok(CriterionOutcome::plain(Verdict::Equal));
    }
    let analysis = d.partial_sum_analysis();
    if analysis.sum_class() == crate::stream::SumClass::ConvergesTo(Rat::zero()) {
        return Ok(CriterionOutcome::silent());
    }
    let states = analysis.offset_states(&Rat::zero());
    for want in [Ordering::Greater, Ordering::Less] {
        if states.iter().all(|s| s.sign == want) {
            let mut n = states.iter().map(|s| s.n_threshold).max().unwrap().max(1);
            while n > 1 && d.partial_sum(n - 1).sign() == want {
                n -= 1;
            }
            let verdict = if want == Ordering::Greater {
                Verdict::StrictlyBetter
            } else {
                Verdict::StrictlyWorse
            };
            return Ok(CriterionOutcome {
                verdict,
                witness: Witness::Threshold(n),
            });
        }
    }
    Ok(CriterionOutcome::silent())
}

/// Interval dominance: better iff beyond some window length L, every
/// time interval holds strictly more utility in the first world.
pub fn interval_dominance(view: LocationView, w1: &World, w2: &World) -> Result<CriterionOutcome> {
    if !view.is_ordered() {
        return Ok(CriterionOutcome::plain(Verdict::NoVerdict(
            NoVerdictReason::RequiresOrder,
        )));
    }
    let (s1, s2) = match align_locations(w1, w2, view)? {
        Alignment::NotSameLocations { .. } => return Ok(CriterionOutcome::not_same_locations()),
        Alignment::Aligned { s1, s2, .. } => (s1, s2),
    };
    let d = s1.subtract(&s2);
    if let Some(l) = interval::better_witness(&d) {
        return Ok(CriterionOutcome {
            verdict: Verdict::StrictlyBetter,
            witness: Witness::WindowLen(l),
        });
    }
    if let Some(l) = interval::better_witness(&d.negate()) {
        return Ok(CriterionOutcome {
            verdict: Verdict::StrictlyWorse,
            witness: Witness::WindowLen(l),
        });
    }
    Ok(CriterionOutcome::silent())
}

/// Simplified value density: compare the limits of mean utility
/// `S(n)/n` when both exist. Ties are silent, never equal.
pub fn value_density(view: LocationView, w1: &World, w2: &World) -> Result<CriterionOutcome> {
    if !view.is_ordered() {
        return Ok(CriterionOutcome::plain(Verdict::NoVerdict(
            NoVerdictReason::RequiresOrder,
        )));
    }
    let (s1, s2) = match align_locations(w1, w2, view)? {
        Alignment::NotSameLocations { .. } => return Ok(CriterionOutcome::not_same_locations()),
        Alignment::Aligned { s1, s2, .. } => (s1, s2),
    };
    match (s1.density(), s2.density()) {
        (Some(d1), Some(d2)) => {
            let verdict = match d1.cmp(&d2) {
                Ordering::Greater => Verdict::StrictlyBetter,
                Ordering::Less => Verdict::StrictlyWorse,
                Ordering::Equal => Verdict::NoVerdict(NoVerdictReason::Silent),
            };
            Ok(CriterionOutcome {
                verdict,
                witness: Witness::Densities(d1, d2),
            })
        }
        _ => Ok(CriterionOutcome::silent()),
    }
}

/// Dispatches one criterion family under one view.
pub fn run_criterion(
    family: CriterionFamily,
    view: LocationView,
    w1: &World,
    w2: &World,
) -> Result<CriterionOutcome> {
    match family {
        CriterionFamily::Pareto => pareto(view, w1, w2),
        CriterionFamily::Sbi1 => sbi1(view, w1, w2),
        CriterionFamily::Wpc => match wpc(w1, w2) {
            Ok(outcome) => Ok(outcome),
            // populations that cannot be unified have no common
            // locations to compare
            Err(Error::NoCommonUniverse(_)) => Ok(CriterionOutcome::not_same_locations()),
            Err(e) => Err(e),
        },
        CriterionFamily::Overtaking => overtaking(view, w1, w2),
        CriterionFamily::IntervalDominance => interval_dominance(view, w1, w2),
        CriterionFamily::ValueDensity => value_density(view, w1, w2),
    }
}

/// One row of the verdict matrix.
#[derive(Clone, Debug)]
pub struct MatrixCell {
    pub id: CriterionId,
    pub family: CriterionFamily,
    pub view: LocationView,
    pub outcome: CriterionOutcome,
}

impl MatrixCell {
    pub fn label(&self) -> String {
        format!("{}:{}", self.family.label(), self.view)
    }

    /// Fourth report column: reason for a missing verdict, witness
    /// otherwise.
    pub fn detail(&self) -> String {
        match &self.outcome.verdict {
            Verdict::NoVerdict(reason) => reason.to_string(),
            _ => self.outcome.witness.to_string(),
        }
    }
}

/// Kinds of tension between two cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FlagKind {
    /// Opposite strict rankings.
    Conflict,
    /// Equal against a strict ranking.
    Disagreement,
}

/// The full comparison report for one ordered world pair.
#[derive(Clone, Debug)]
pub struct VerdictMatrix {
    pub world1: String,
    pub world2: String,
    pub cells: Vec<MatrixCell>,
}

impl VerdictMatrix {
    /// All flagged cell pairs, deterministically ordered.
    pub fn flags(&self) -> Vec<(FlagKind, String, String)> {
        let mut out = Vec::new();
        for (i, a) in self.cells.iter().enumerate() {
            for b in self.cells.iter().skip(i + 1) {
                let pair = (&a.outcome.verdict, &b.outcome.verdict);
                let kind = match pair {
                    (Verdict::StrictlyBetter, Verdict::StrictlyWorse)
                    | (Verdict::StrictlyWorse, Verdict::StrictlyBetter) => {
                        Some(FlagKind::Conflict)
                    }
                    (Verdict::Equal, v) | (v, Verdict::Equal) if v.is_strict() => {
                        Some(FlagKind::Disagreement)
                    }
                    _ => None,
                };
                if let Some(kind) = kind {
                    out.push((kind, a.label(), b.label()));
                }
            }
        }
        out.sort();
        out
    }

    pub fn cell(&self, family: CriterionFamily, view: LocationView) -> Option<&MatrixCell> {
        self.cells
            .iter()
            .find(|c| c.family == family && c.view == view)
    }

    /// Tab-separated line format, stable across runs.
    pub fn render_machine(&self) -> String {
        let mut out = format!("pair\t{}\t{}\n", self.world1, self.world2);
        for cell in &self.cells {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                cell.family.label(),
                cell.view,
                cell.outcome.verdict,
                cell.detail()
            ));
        }
        for (kind, a, b) in self.flags() {
            let tag = match kind {
                FlagKind::Conflict => "CONFLICT",
                FlagKind::Disagreement => "DISAGREEMENT",
            };
            out.push_str(&format!("{tag}\t{a}\t{b}\n"));
        }
        out
    }

    /// Column-aligned human format.
    pub fn render_text(&self) -> String {
        let mut out = format!("{} vs {}\n", self.world1, self.world2);
        let width = self
            .cells
            .iter()
            .map(|c| c.family.label().len())
            .max()
            .unwrap_or(0);
        for cell in &self.cells {
            out.push_str(&format!(
                "  {:width$}  {:8}  {:15}  {}\n",
                cell.family.label(),
                cell.view.to_string(),
                cell.outcome.verdict.to_string(),
                cell.detail(),
            ));
        }
        for (kind, a, b) in self.flags() {
            let tag = match kind {
                FlagKind::Conflict => "CONFLICT",
                FlagKind::Disagreement => "DISAGREEMENT",
            };
            out.push_str(&format!("  {tag}: {a} vs {b}\n"));
        }
        out
    }
}

/// Runs every applicable criterion for each requested view. The
/// per-person criterion runs under the persons view only. Rows are
/// emitted in a fixed criterion-major order, so the matrix is
/// deterministic regardless of the requested view order.
pub fn compare_all(w1: &World, w2: &World, views: &[LocationView]) -> Result<VerdictMatrix> {
    let selected: Vec<LocationView> = LocationView::ALL
        .iter()
        .copied()
        .filter(|v| views.contains(v))
        .collect();
    let mut cells = Vec::new();
    for family in CriterionFamily::ALL {
        for view in &selected {
            if family == CriterionFamily::Wpc && *view != LocationView::Persons {
                continue;
            }
            let outcome = run_criterion(family, *view, w1, w2)?;
            cells.push(MatrixCell {
                id: family.id(*view),
                family,
                view: *view,
                outcome,
            });
        }
    }
    Ok(VerdictMatrix {
        world1: w1.name().to_string(),
        world2: w2.name().to_string(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::ScheduleMap;
    use crate::worldspec::parse_world;

    fn i(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn ordeal() -> World {
        parse_world(
            "world ordeal\nbirths start=1 step=1\nlifespan 2\nidentity distinct\n\
             segment prefix[] period=1 term base=4 coeffs[-1/2]\n\
             segment prefix[] period=1 term base=4 coeffs[1]\n",
        )
        .unwrap()
    }

    fn zero_world() -> World {
        parse_world(
            "world zero\nbirths start=1 step=1\nlifespan 2\nidentity distinct\n\
             segment prefix[] period=1\nsegment prefix[] period=1\n",
        )
        .unwrap()
    }

    fn wc() -> World {
        parse_world(
            "world conservation\nbirths start=1 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[] period=1 term base=1 coeffs[2]\n",
        )
        .unwrap()
    }

    fn wd() -> World {
        parse_world(
            "world depletion\nbirths start=1 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[3,3] period=1 term base=1 coeffs[1]\n",
        )
        .unwrap()
    }

    fn cycles_w1() -> World {
        parse_world(
            "world cycles1\nbirths start=1 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[] period=3 term base=1 coeffs[2,2,1]\n",
        )
        .unwrap()
    }

    fn cycles_w2() -> World {
        parse_world(
            "world cycles2\nbirths start=1 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[] period=3 term base=1 coeffs[1,1,2]\n",
        )
        .unwrap()
    }

    fn state_a() -> ExpPeriodicStream {
        ExpPeriodicStream::periodic(vec![i(1), i(2)])
    }

    fn freezer_w() -> World {
        World::incubated("w", "eggs", state_a(), ScheduleMap::identity()).unwrap()
    }

    fn freezer_wss() -> World {
        let swap: ScheduleMap = "rules{ 1 mod 2 -> 1*i-2; 0 mod 2 -> 1*i+2 } except{ 1->2 }"
            .parse()
            .unwrap();
        World::incubated("wss", "eggs", state_a(), swap).unwrap()
    }

    #[test]
    fn pareto_ordeal_tables() {
        let (w, z) = (ordeal(), zero_world());
        let times = pareto(LocationView::Times, &w, &z).unwrap();
        assert_eq!(times.verdict, Verdict::StrictlyWorse);
        let slots = pareto(LocationView::Slots, &w, &z).unwrap();
        assert_eq!(slots.verdict, Verdict::StrictlyBetter);
        assert_eq!(slots.witness, Witness::StrictAt(1));
        let persons = pareto(LocationView::Persons, &w, &z).unwrap();
        assert_eq!(
            persons.verdict,
            Verdict::NoVerdict(NoVerdictReason::NotSameLocations)
        );
    }

    #[test]
    fn pareto_is_silent_on_mixed_differences() {
        let out = pareto(LocationView::Slots, &wc(), &wd()).unwrap();
        assert_eq!(out.verdict, Verdict::NoVerdict(NoVerdictReason::Silent));
    }

    #[test]
    fn sbi1_depletion() {
        let out = sbi1(LocationView::Slots, &wc(), &wd()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyBetter);
        match out.witness {
            Witness::Gap { c1, c2 } => {
                assert!(c2 < c1);
                assert!(i(1) < c2 && c1 < i(2), "gap must separate 1 from 2");
            }
            other => panic!("expected gap witness, got {other:?}"),
        }
        let persons = sbi1(LocationView::Persons, &wc(), &wd()).unwrap();
        assert_eq!(
            persons.verdict,
            Verdict::NoVerdict(NoVerdictReason::NotSameLocations)
        );
        // no separating gap when comparing a world with itself
        let self_cmp = sbi1(LocationView::Slots, &wc(), &wc()).unwrap();
        assert_eq!(self_cmp.verdict, Verdict::NoVerdict(NoVerdictReason::Silent));
    }

    #[test]
    fn wpc_examples() {
        // zero-padded depletion pair: both signed parts infinite
        let out = wpc(&wc(), &wd()).unwrap();
        assert_eq!(out.verdict, Verdict::NoVerdict(NoVerdictReason::Silent));
        assert_eq!(
            out.witness,
            Witness::Parts {
                pos: SumPart::Infinite,
                neg: SumPart::Infinite
            }
        );
        // reordering the freezer frees exactly one unit for e_1
        let out = wpc(&freezer_w(), &freezer_wss()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyWorse);
        assert_eq!(out.witness, Witness::Total(i(-1)));
        // self comparison is literally equal
        let out = wpc(&wc(), &wc()).unwrap();
        assert_eq!(out.verdict, Verdict::Equal);
        // ordeal against its zero companion: every enumeration diverges up
        let out = wpc(&ordeal(), &zero_world()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyBetter);
    }

    #[test]
    fn wpc_needs_a_common_universe() {
        let late = parse_world(
            "world late\nbirths start=2 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[] period=1 term base=1 coeffs[1]\n",
        )
        .unwrap();
        assert!(matches!(
            wpc(&wc(), &late),
            Err(Error::NoCommonUniverse(_))
        ));
    }

    #[test]
    fn overtaking_examples() {
        let out = overtaking(LocationView::Slots, &cycles_w1(), &cycles_w2()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyBetter);
        assert_eq!(out.witness, Witness::Threshold(1));

        let out = overtaking(LocationView::Slots, &wc(), &wd()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyBetter);
        assert_eq!(out.witness, Witness::Threshold(5));

        let out = overtaking(LocationView::Persons, &cycles_w1(), &cycles_w2()).unwrap();
        assert_eq!(
            out.verdict,
            Verdict::NoVerdict(NoVerdictReason::RequiresOrder)
        );

        let out = overtaking(LocationView::Slots, &wc(), &wc()).unwrap();
        assert_eq!(out.verdict, Verdict::Equal);
    }

    #[test]
    fn overtaking_ignores_vanishing_leads() {
        let base = parse_world(
            "world base\nbirths start=1 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[] period=1 term base=1 coeffs[1]\n",
        )
        .unwrap();
        // a lead whose sum difference vanishes: 2^-n from above, silent
        let fading = parse_world(
            "world fading\nbirths start=1 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[3/2] period=1 term base=1 coeffs[1] term base=1/2 coeffs[-1]\n",
        )
        .unwrap();
        let out = overtaking(LocationView::Slots, &fading, &base).unwrap();
        assert_eq!(out.verdict, Verdict::NoVerdict(NoVerdictReason::Silent));
        // a lead converging to a positive constant stands
        let ahead = parse_world(
            "world ahead\nbirths start=1 step=1\nlifespan 1\nidentity distinct\n\
             segment prefix[] period=1 term base=1 coeffs[1] term base=1/2 coeffs[1]\n",
        )
        .unwrap();
        let out = overtaking(LocationView::Slots, &ahead, &base).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyBetter);
        assert_eq!(out.witness, Witness::Threshold(1));
    }

    #[test]
    fn interval_dominance_examples() {
        let out = interval_dominance(LocationView::Slots, &cycles_w1(), &cycles_w2()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyBetter);
        assert_eq!(out.witness, Witness::WindowLen(5));

        let out = interval_dominance(LocationView::Slots, &wc(), &wd()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyBetter);
        assert_eq!(out.witness, Witness::WindowLen(5));

        let out = interval_dominance(LocationView::Slots, &wc(), &wc()).unwrap();
        assert_eq!(out.verdict, Verdict::NoVerdict(NoVerdictReason::Silent));

        let out = interval_dominance(LocationView::Slots, &wd(), &wc()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyWorse);
    }

    #[test]
    fn value_density_examples() {
        let out = value_density(LocationView::Slots, &cycles_w1(), &cycles_w2()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyBetter);
        assert_eq!(
            out.witness,
            Witness::Densities(
                ExtRat::Finite(Rat::new(5, 3)),
                ExtRat::Finite(Rat::new(4, 3))
            )
        );
        let out = value_density(LocationView::Slots, &wc(), &wd()).unwrap();
        assert_eq!(out.verdict, Verdict::StrictlyBetter);
        // ties are silent, even for a world against itself
        let out = value_density(LocationView::Slots, &wc(), &wc()).unwrap();
        assert_eq!(out.verdict, Verdict::NoVerdict(NoVerdictReason::Silent));
    }

    #[test]
    fn matrix_flags_ordeal_conflict() {
        let m = compare_all(&ordeal(), &zero_world(), &LocationView::ALL).unwrap();
        let flags = m.flags();
        assert!(flags
            .iter()
            .any(|(k, a, b)| *k == FlagKind::Conflict
                && a == "pareto:times"
                && b == "pareto:slots"));
        let rendered = m.render_machine();
        assert!(rendered.contains("pareto\ttimes\tStrictlyWorse"));
        assert!(rendered.contains("pareto\tslots\tStrictlyBetter"));
        assert!(rendered.contains("CONFLICT\tpareto:times\tpareto:slots"));
    }

    #[test]
    fn matrix_flags_freezer_disagreement() {
        let m = compare_all(&freezer_w(), &freezer_wss(), &LocationView::ALL).unwrap();
        let slots = m.cell(CriterionFamily::Pareto, LocationView::Slots).unwrap();
        assert_eq!(slots.outcome.verdict, Verdict::Equal);
        let persons = m
            .cell(CriterionFamily::Pareto, LocationView::Persons)
            .unwrap();
        assert_eq!(persons.outcome.verdict, Verdict::StrictlyWorse);
        assert!(m
            .flags()
            .iter()
            .any(|(k, a, b)| *k == FlagKind::Disagreement
                && a == "pareto:persons"
                && b == "pareto:slots"
                || *k == FlagKind::Disagreement
                    && a == "pareto:slots"
                    && b == "pareto:persons"));
    }

    #[test]
    fn self_comparison_golden_table() {
        // pinned outcomes for a world against itself
        let w = wc();
        let m = compare_all(&w, &w, &LocationView::ALL).unwrap();
        for cell in &m.cells {
            let expect = match (cell.family, cell.view) {
                (CriterionFamily::Pareto, _) => Verdict::Equal,
                (CriterionFamily::Sbi1, _) => Verdict::NoVerdict(NoVerdictReason::Silent),
                (CriterionFamily::Wpc, _) => Verdict::Equal,
                (_, LocationView::Persons) => {
                    Verdict::NoVerdict(NoVerdictReason::RequiresOrder)
                }
                (CriterionFamily::Overtaking, _) => Verdict::Equal,
                (CriterionFamily::IntervalDominance, _) => {
                    Verdict::NoVerdict(NoVerdictReason::Silent)
                }
                (CriterionFamily::ValueDensity, _) => {
                    Verdict::NoVerdict(NoVerdictReason::Silent)
                }
            };
            assert_eq!(
                cell.outcome.verdict, expect,
                "{} under {}",
                cell.family.label(),
                cell.view
            );
        }
        assert!(m.flags().is_empty());
    }

    #[test]
    fn swap_antisymmetry_on_fixtures() {
        let pairs = [
            (ordeal(), zero_world()),
            (wc(), wd()),
            (cycles_w1(), cycles_w2()),
            (freezer_w(), freezer_wss()),
        ];
        for (a, b) in &pairs {
            for family in CriterionFamily::ALL {
                for view in LocationView::ALL {
                    let fwd = run_criterion(family, view, a, b).unwrap();
                    let rev = run_criterion(family, view, b, a).unwrap();
                    assert_eq!(
                        fwd.verdict,
                        rev.verdict.mirrored(),
                        "{} {} on {} vs {}",
                        family.label(),
                        view,
                        a.name(),
                        b.name()
                    );
                }
            }
        }
    }
}
