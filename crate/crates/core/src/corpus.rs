//! The benchmark cases: classic thought experiments from the infinite
//! ethics literature, encoded as worldspec fixtures with the verdicts
//! each criterion is known to give. Running the corpus re-derives every
//! verdict and diffs it against the expected cell.

use std::fmt::Write as _;
use std::path::Path;

use crate::criteria::{compare_all, CriterionFamily, FlagKind, NoVerdictReason, Verdict};
use crate::error::Result;
use crate::world::LocationView;
use crate::worldspec::load_world;

/// One expected matrix cell with its source in the literature.
#[derive(Clone, Debug)]
pub struct ExpectedCell {
    pub family: CriterionFamily,
    pub view: LocationView,
    pub verdict: Verdict,
    pub citation: &'static str,
}

/// A fixture pair plus the cells and flags it must reproduce.
#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: &'static str,
    pub world1: &'static str,
    pub world2: &'static str,
    pub expected: Vec<ExpectedCell>,
    /// Flags that must appear (the matrix may flag more pairs).
    pub expected_flags: Vec<(FlagKind, &'static str, &'static str)>,
}

fn cell(
    family: CriterionFamily,
    view: LocationView,
    verdict: Verdict,
    citation: &'static str,
) -> ExpectedCell {
    ExpectedCell {
        family,
        view,
        verdict,
        citation,
    }
}

/// All cases shipped with the engine.
pub fn builtin_cases() -> Vec<CorpusCase> {
    use CriterionFamily::*;
    use LocationView::*;
    use NoVerdictReason::*;
    use Verdict::*;

    vec![
        CorpusCase {
            name: "ordeal",
            world1: "ordeal.ws",
            world2: "zero.ws",
            expected: vec![
                cell(Pareto, Times, StrictlyWorse, "Cain (1995): negative realized utility in every period"),
                cell(Pareto, Slots, StrictlyBetter, "every birth slot holds a life worth living"),
                cell(Pareto, Persons, NoVerdict(NotSameLocations), "non-identity: no common people to compare"),
                cell(Sbi1, Times, StrictlyWorse, "Vallentyne & Kagan (1997) SBI1 over times"),
                cell(Sbi1, Slots, StrictlyBetter, "lifetime utilities grow without bound"),
                cell(Overtaking, Times, StrictlyWorse, "realized sums diverge down"),
                cell(Overtaking, Slots, StrictlyBetter, "lifetime sums diverge up"),
                cell(IntervalDominance, Times, StrictlyWorse, "every period is worse"),
                cell(IntervalDominance, Slots, StrictlyBetter, "every slot is better"),
                cell(ValueDensity, Times, StrictlyWorse, "mean realized utility diverges down"),
                cell(ValueDensity, Slots, StrictlyBetter, "mean lifetime utility diverges up"),
                cell(Wpc, Persons, StrictlyBetter, "Arntzenius (2014) WPC with non-existence at zero"),
            ],
            expected_flags: vec![(FlagKind::Conflict, "pareto:times", "pareto:slots")],
        },
        CorpusCase {
            name: "ordeal_shared",
            world1: "ordeal_shared.ws",
            world2: "zero_shared.ws",
            expected: vec![
                cell(Pareto, Persons, StrictlyBetter, "same-people reading: everyone is better off"),
                cell(Pareto, Times, StrictlyWorse, "realized utility still negative everywhere"),
                cell(Pareto, Slots, StrictlyBetter, "slot utilities unchanged by the identity policy"),
            ],
            expected_flags: vec![
                (FlagKind::Conflict, "pareto:times", "pareto:persons"),
                (FlagKind::Conflict, "pareto:times", "pareto:slots"),
            ],
        },
        CorpusCase {
            name: "depletion",
            world1: "depletion_wc.ws",
            world2: "depletion_wd.ws",
            expected: vec![
                cell(Pareto, Slots, NoVerdict(Silent), "first two slots favor depletion, the rest conservation"),
                cell(Pareto, Persons, NoVerdict(NotSameLocations), "Parfit (1984): the two futures share no people"),
                cell(Sbi1, Slots, StrictlyBetter, "Vallentyne & Kagan (1997) SBI1: 2 beats 1 beyond a threshold"),
                cell(Sbi1, Persons, NoVerdict(NotSameLocations), "person-centered SBI1 is silent without common people"),
                cell(Wpc, Persons, NoVerdict(Silent), "Arntzenius (2014) WPC: both signed parts infinite"),
                cell(Overtaking, Slots, StrictlyBetter, "conservation overtakes at the fifth slot"),
                cell(IntervalDominance, Slots, StrictlyBetter, "long enough slot intervals always favor conservation"),
                cell(ValueDensity, Slots, StrictlyBetter, "mean utility 2 vs 1"),
            ],
            expected_flags: vec![],
        },
        CorpusCase {
            name: "cycles",
            world1: "cycles_w1.ws",
            world2: "cycles_w2.ws",
            expected: vec![
                cell(Pareto, Slots, NoVerdict(Silent), "Segerberg (1976): each world wins in some periods"),
                cell(Pareto, Persons, NoVerdict(NotSameLocations), "Askell (2018): different people in each world"),
                cell(Sbi1, Slots, NoVerdict(Silent), "no separating constants: both worlds range over {1,2}"),
                cell(Overtaking, Slots, StrictlyBetter, "two good periods out of three keep the lead"),
                cell(IntervalDominance, Slots, StrictlyBetter, "every long enough interval favors the 2-2-1 cycle"),
                cell(ValueDensity, Slots, StrictlyBetter, "density 5/3 vs 4/3"),
                cell(Wpc, Persons, NoVerdict(Silent), "both signed parts infinite"),
            ],
            expected_flags: vec![],
        },
        CorpusCase {
            name: "freezer_order",
            world1: "freezer_w.ws",
            world2: "freezer_wss.ws",
            expected: vec![
                cell(Pareto, Slots, Equal, "Askell (2018) Freezer: slot utilities ignore the incubation order"),
                cell(Pareto, Times, Equal, "realized utilities are the island state either way"),
                cell(Pareto, Persons, StrictlyWorse, "the reordering makes one individual strictly better off"),
                cell(Wpc, Persons, StrictlyWorse, "per-person differences total -1"),
            ],
            expected_flags: vec![(FlagKind::Disagreement, "pareto:persons", "pareto:slots")],
        },
        CorpusCase {
            name: "freezer_state",
            world1: "freezer_w.ws",
            world2: "freezer_b.ws",
            expected: vec![
                cell(Pareto, Slots, StrictlyBetter, "denser good periods dominate slot by slot"),
                cell(Pareto, Persons, StrictlyWorse, "the sparse state reordered leaves no one worse and one better"),
                cell(ValueDensity, Slots, StrictlyBetter, "density 3/2 vs 5/4"),
            ],
            expected_flags: vec![(FlagKind::Conflict, "pareto:persons", "pareto:slots")],
        },
    ]
}

/// Result of one expectation check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub case: String,
    pub what: String,
    pub passed: bool,
    pub expected: String,
    pub got: String,
}

/// Full corpus run.
#[derive(Clone, Debug, Default)]
pub struct CorpusReport {
    pub checks: Vec<CheckResult>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Tab-separated line per check plus a summary line.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                c.case,
                c.what,
                if c.passed { "PASS" } else { "FAIL" },
                c.expected,
                c.got
            );
        }
        let _ = writeln!(
            out,
            "corpus\t{}\t{}/{}",
            if self.all_passed() { "PASS" } else { "FAIL" },
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        );
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut current = "";
        for c in &self.checks {
            if c.case != current {
                let _ = writeln!(out, "case {}", c.case);
                current = &c.case;
            }
            if c.passed {
                let _ = writeln!(out, "  {:40} PASS  {}", c.what, c.got);
            } else {
                let _ = writeln!(
                    out,
                    "  {:40} FAIL  expected {}, got {}",
                    c.what, c.expected, c.got
                );
            }
        }
        let _ = writeln!(
            out,
            "{} of {} checks passed",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        );
        out
    }
}

/// Runs one case against its fixtures in `dir`.
pub fn run_case(case: &CorpusCase, dir: &Path) -> Result<Vec<CheckResult>> {
    let w1 = load_world(&dir.join(case.world1))?;
    let w2 = load_world(&dir.join(case.world2))?;
    let matrix = compare_all(&w1, &w2, &LocationView::ALL)?;
    let mut out = Vec::new();
    for exp in &case.expected {
        let got = matrix
            .cell(exp.family, exp.view)
            .map(|c| c.outcome.verdict.clone());
        let got_str = got
            .as_ref()
            .map(|v| v.to_string())
            .unwrap_or_else(|| "missing".into());
        out.push(CheckResult {
            case: case.name.to_string(),
            what: format!("{}:{}", exp.family.label(), exp.view),
            passed: got.as_ref() == Some(&exp.verdict),
            expected: exp.verdict.to_string(),
            got: got_str,
        });
    }
    let flags = matrix.flags();
    for (kind, a, b) in &case.expected_flags {
        let tag = match kind {
            FlagKind::Conflict => "CONFLICT",
            FlagKind::Disagreement => "DISAGREEMENT",
        };
        let present = flags.iter().any(|(k, fa, fb)| {
            k == kind && ((fa == a && fb == b) || (fa == b && fb == a))
        });
        out.push(CheckResult {
            case: case.name.to_string(),
            what: format!("{tag} {a} / {b}"),
            passed: present,
            expected: "flagged".into(),
            got: if present { "flagged".into() } else { "absent".into() },
        });
    }
    Ok(out)
}

/// Runs every case (or the ones whose name contains `filter`).
pub fn run_corpus(dir: &Path, filter: Option<&str>) -> Result<CorpusReport> {
    let mut report = CorpusReport::default();
    for case in builtin_cases() {
        if let Some(f) = filter {
            if !case.name.contains(f) {
                continue;
            }
        }
        report.checks.extend(run_case(&case, dir)?);
    }
    Ok(report)
}
