//! Worlds as infinite sequences of lives, and the three kinds of
//! locations derived from them.
//!
//! A world fixes an affine birth schedule (one person per birth slot), a
//! constant lifespan split into equal segments, one stream per segment
//! giving that segment's utility as a function of the slot index, and an
//! identity policy. From this the engine derives:
//!
//! * the *slot* view — lifetime utility of the person born at slot `i`,
//!   read de dicto (whoever occupies the slot);
//! * the *times* view — utility realized in each grid period, summed
//!   over everyone alive then;
//! * the *persons* view — utility per specific individual, which is
//!   only comparable across worlds that draw from a shared registry of
//!   individuals (or are literally the same world).

use std::fmt;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::schedule::ScheduleMap;
use crate::stream::ExpPeriodicStream;

/// Which locations a criterion quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocationView {
    Times,
    Persons,
    Slots,
}

impl LocationView {
    pub const ALL: [LocationView; 3] = [
        LocationView::Times,
        LocationView::Persons,
        LocationView::Slots,
    ];

    /// Times and slots come with a natural order; specific people do not.
    pub fn is_ordered(self) -> bool {
        !matches!(self, LocationView::Persons)
    }
}

impl fmt::Display for LocationView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocationView::Times => write!(f, "times"),
            LocationView::Persons => write!(f, "persons"),
            LocationView::Slots => write!(f, "slots"),
        }
    }
}

impl std::str::FromStr for LocationView {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "times" => Ok(LocationView::Times),
            "persons" => Ok(LocationView::Persons),
            "slots" => Ok(LocationView::Slots),
            other => Err(Error::Worldspec {
                line: 0,
                msg: format!("unknown view `{other}` (expected times|persons|slots)"),
            }),
        }
    }
}

/// Who a person is, for cross-world comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IdentityTag {
    /// A person that exists only in this world.
    Distinct { world: String, slot: u64 },
    /// A registered individual that may occupy slots in many worlds.
    Shared { registry: String, index: u64 },
}

impl fmt::Display for IdentityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityTag::Distinct { world, slot } => write!(f, "{world}:slot{slot}"),
            IdentityTag::Shared { registry, index } => write!(f, "{registry}:e{index}"),
        }
    }
}

/// World-level identity policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityPolicy {
    /// The non-identity default: no individual exists in two worlds.
    DistinctAcrossWorlds,
    /// Individuals come from a named registry; `schedule` sends registry
    /// index to birth slot and must be a verified bijection.
    SharedRegistry {
        registry: String,
        schedule: ScheduleMap,
    },
}

/// One instantiated life.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersonRecord {
    pub slot: u64,
    pub birth_time: Rat,
    pub lifespan: Rat,
    /// (duration, utility) per life segment; durations sum to the
    /// lifespan and utilities sum to the lifetime utility.
    pub segments: Vec<(Rat, Rat)>,
    pub identity: IdentityTag,
}

impl PersonRecord {
    pub fn lifetime_utility(&self) -> Rat {
        self.segments
            .iter()
            .fold(Rat::zero(), |acc, (_, u)| acc + u.clone())
    }
}

/// A finitely presented infinite world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct World {
    name: String,
    birth_step: Rat,
    birth_offset: Rat,
    lifespan: Rat,
    segments: Vec<ExpPeriodicStream>,
    identity: IdentityPolicy,
}

impl World {
    /// Builds a world; the birth schedule is `t_i = step·i + offset`.
    /// Shared-registry schedules are verified here, so every constructed
    /// world holds a genuine bijection.
    pub fn new(
        name: impl Into<String>,
        birth_step: Rat,
        birth_offset: Rat,
        lifespan: Rat,
        segments: Vec<ExpPeriodicStream>,
        identity: IdentityPolicy,
    ) -> Result<Self> {
        let name = name.into();
        if !birth_step.is_positive() {
            return Err(Error::Worldspec {
                line: 0,
                msg: format!("world `{name}`: birth step must be positive"),
            });
        }
        if !lifespan.is_positive() {
            return Err(Error::Worldspec {
                line: 0,
                msg: format!("world `{name}`: lifespan must be positive"),
            });
        }
        if segments.is_empty() {
            return Err(Error::Worldspec {
                line: 0,
                msg: format!("world `{name}`: at least one segment required"),
            });
        }
        if let IdentityPolicy::SharedRegistry { schedule, .. } = &identity {
            schedule.verify()?;
        }
        Ok(World {
            name,
            birth_step,
            birth_offset,
            lifespan,
            segments,
            identity,
        })
    }

    /// A world of incubated individuals: one birth per period, one life
    /// segment, the slot-`t` occupant living under conditions worth
    /// `state(t)`, and occupants drawn from `registry` in the order
    /// given by `schedule` (individual `e` occupies slot `schedule(e)`).
    pub fn incubated(
        name: impl Into<String>,
        registry: impl Into<String>,
        state: ExpPeriodicStream,
        schedule: ScheduleMap,
    ) -> Result<Self> {
        World::new(
            name,
            Rat::one(),
            Rat::zero(),
            Rat::one(),
            vec![state],
            IdentityPolicy::SharedRegistry {
                registry: registry.into(),
                schedule,
            },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn birth_step(&self) -> &Rat {
        &self.birth_step
    }

    pub fn birth_offset(&self) -> &Rat {
        &self.birth_offset
    }

    pub fn lifespan(&self) -> &Rat {
        &self.lifespan
    }

    pub fn segments(&self) -> &[ExpPeriodicStream] {
        &self.segments
    }

    pub fn identity(&self) -> &IdentityPolicy {
        &self.identity
    }

    pub fn birth_time(&self, slot: u64) -> Rat {
        &(&self.birth_step * &Rat::from_big(slot.into(), 1.into())) + &self.birth_offset
    }

    pub fn segment_duration(&self) -> Rat {
        &self.lifespan / &Rat::from_big((self.segments.len() as u64).into(), 1.into())
    }

    pub fn births_match(&self, other: &World) -> bool {
        self.birth_step == other.birth_step && self.birth_offset == other.birth_offset
    }

    /// Slot-indexed lifetime utilities: the pointwise sum of the segment
    /// streams.
    pub fn lifetime_stream(&self) -> ExpPeriodicStream {
        self.segments
            .iter()
            .fold(ExpPeriodicStream::zero(), |acc, s| acc.pointwise_add(s))
    }

    /// Utility realized in each grid period, where the grid period is
    /// the segment duration anchored at the first birth. Each segment's
    /// utility belongs wholly to the one period it occupies, which
    /// requires exactly one birth per period: the birth step must equal
    /// the segment duration.
    pub fn realized_time_stream(&self) -> Result<ExpPeriodicStream> {
        let d = self.segment_duration();
        if self.birth_step != d {
            return Err(Error::NonCommensurableGrid {
                step: self.birth_step.to_string(),
                duration: d.to_string(),
            });
        }
        // segment s of the slot-i person occupies grid period i + s - 1
        let mut acc = ExpPeriodicStream::zero();
        for (s, seg) in self.segments.iter().enumerate() {
            acc = acc.pointwise_add(&seg.shift_forward(s as u64));
        }
        Ok(acc)
    }

    /// The person occupying birth slot `slot`.
    pub fn person(&self, slot: u64) -> PersonRecord {
        assert!(slot >= 1, "slots start at 1");
        let d = self.segment_duration();
        let segments = self
            .segments
            .iter()
            .map(|s| (d.clone(), s.evaluate(slot)))
            .collect();
        let identity = match &self.identity {
            IdentityPolicy::DistinctAcrossWorlds => IdentityTag::Distinct {
                world: self.name.clone(),
                slot,
            },
            IdentityPolicy::SharedRegistry { registry, schedule } => IdentityTag::Shared {
                registry: registry.clone(),
                index: schedule
                    .preimage(slot)
                    .expect("verified schedules are surjective"),
            },
        };
        PersonRecord {
            slot,
            birth_time: self.birth_time(slot),
            lifespan: self.lifespan.clone(),
            segments,
            identity,
        }
    }

    /// Lifetime utilities indexed by individual rather than slot. For a
    /// shared registry this is `e ↦ lifetime(schedule(e))`; for the
    /// non-identity policy individuals coincide with slots.
    pub fn person_stream(&self) -> Result<ExpPeriodicStream> {
        match &self.identity {
            IdentityPolicy::DistinctAcrossWorlds => Ok(self.lifetime_stream()),
            IdentityPolicy::SharedRegistry { schedule, .. } => {
                schedule.compose_stream(&self.lifetime_stream())
            }
        }
    }

    /// True when the two worlds contain the very same individuals.
    pub fn same_population(&self, other: &World) -> bool {
        match (&self.identity, &other.identity) {
            (IdentityPolicy::DistinctAcrossWorlds, IdentityPolicy::DistinctAcrossWorlds) => {
                // a distinct-policy population is identified by the world
                // name: only the same world has the same people
                self.name == other.name && self.births_match(other)
            }
            (
                IdentityPolicy::SharedRegistry { registry: a, .. },
                IdentityPolicy::SharedRegistry { registry: b, .. },
            ) => a == b,
            _ => false,
        }
    }
}

/// Result of pairing two worlds' locations under a view.
#[derive(Clone, Debug)]
pub enum Alignment {
    Aligned {
        s1: ExpPeriodicStream,
        s2: ExpPeriodicStream,
        ordered: bool,
    },
    NotSameLocations { reason: String },
}

/// Pairs the location-indexed utility streams of two worlds under a
/// view, or reports that the locations differ. Under `Persons` the
/// streams are reindexed so equal indices refer to the same individual,
/// and no order is exposed.
pub fn align_locations(w1: &World, w2: &World, view: LocationView) -> Result<Alignment> {
    match view {
        LocationView::Times => {
            let r1 = w1.realized_time_stream()?;
            let r2 = w2.realized_time_stream()?;
            if w1.birth_step() == w2.birth_step()
                && w1.birth_offset() == w2.birth_offset()
                && w1.segment_duration() == w2.segment_duration()
            {
                Ok(Alignment::Aligned {
                    s1: r1,
                    s2: r2,
                    ordered: true,
                })
            } else {
                Ok(Alignment::NotSameLocations {
                    reason: "different time grids".into(),
                })
            }
        }
        LocationView::Slots => {
            if w1.births_match(w2) {
                Ok(Alignment::Aligned {
                    s1: w1.lifetime_stream(),
                    s2: w2.lifetime_stream(),
                    ordered: true,
                })
            } else {
                Ok(Alignment::NotSameLocations {
                    reason: "different birth schedules".into(),
                })
            }
        }
        LocationView::Persons => {
            if w1.same_population(w2) {
                Ok(Alignment::Aligned {
                    s1: w1.person_stream()?,
                    s2: w2.person_stream()?,
                    ordered: false,
                })
            } else {
                Ok(Alignment::NotSameLocations {
                    reason: "disjoint populations".into(),
                })
            }
        }
    }
}

/// The counterpart partition: people born at the same time in different
/// worlds form one class, labeled by the slot index.
#[derive(Clone, Debug)]
pub struct NdvPartition {
    worlds: Vec<World>,
}

impl NdvPartition {
    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    /// Members of the class labeled `slot`: one person per world.
    pub fn class(&self, slot: u64) -> Vec<PersonRecord> {
        self.worlds.iter().map(|w| w.person(slot)).collect()
    }

    /// The counterpart relation itself: two people are identified
    /// exactly when they are born at the same time.
    pub fn related(a: &PersonRecord, b: &PersonRecord) -> bool {
        a.birth_time == b.birth_time
    }
}

/// Builds the counterpart partition over several worlds. All worlds
/// must share one birth schedule, otherwise their people do not pair up
/// time-for-time.
pub fn ndv_partition(worlds: &[World]) -> Result<NdvPartition> {
    let first = worlds
        .first()
        .ok_or_else(|| Error::ScheduleMismatch("need at least one world".into()))?;
    for w in worlds {
        if !w.births_match(first) {
            return Err(Error::ScheduleMismatch(format!(
                "worlds `{}` and `{}` have different birth schedules",
                first.name(),
                w.name()
            )));
        }
    }
    Ok(NdvPartition {
        worlds: worlds.to_vec(),
    })
}
