//! Feasibility checks, quality bounds, and oracle comparison reports.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{DepthTwoDag, VertexId};
use crate::oracle::{optimal_makespan, OracleError};
use crate::schedule::{Direction, HingeDecision, Processor, Schedule};
use crate::scheduler::{makespan_lower_bound, makespan_upper_bound, schedule_depth_two};

/// One broken constraint in a schedule. `check_feasible` reports all of
/// them, not just the first, so broken assemblies can be diagnosed whole.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("vertex {vertex} has no slot")]
    MissingVertex { vertex: VertexId },
    #[error("vertex {vertex} sits at invalid time {time}")]
    TimeOutOfRange { vertex: VertexId, time: u32 },
    #[error("slot ({time}, {processor}) holds both {first} and {second}")]
    SlotCollision {
        time: u32,
        processor: Processor,
        first: VertexId,
        second: VertexId,
    },
    #[error("{from} runs at {from_time} and its successor {to} already at {to_time} on the same processor")]
    SameProcessorGap {
        from: VertexId,
        from_time: u32,
        to: VertexId,
        to_time: u32,
    },
    #[error("{from} runs at {from_time} and its successor {to} at {to_time} across processors, within communication distance")]
    CrossProcessorGap {
        from: VertexId,
        from_time: u32,
        to: VertexId,
        to_time: u32,
    },
}

/// First-come slot ownership. Sane schedules get a dense table indexed by
/// slot; documents carrying wild times fall back to hashing.
enum Occupied {
    Dense(Vec<u32>),
    Sparse(HashMap<(u32, Processor), VertexId>),
}

impl Occupied {
    fn for_horizon(max_time: u32, vertex_count: usize) -> Occupied {
        if (max_time as usize) <= 2 * vertex_count + 2 {
            Occupied::Dense(vec![u32::MAX; 2 * (max_time as usize + 1)])
        } else {
            Occupied::Sparse(HashMap::new())
        }
    }

    /// Claims the slot for `v`; returns the earlier claimant, if any.
    fn claim(&mut self, time: u32, processor: Processor, v: VertexId) -> Option<VertexId> {
        match self {
            Occupied::Dense(slots) => {
                let cell = &mut slots[2 * time as usize + processor.index()];
                if *cell == u32::MAX {
                    *cell = v.0;
                    None
                } else {
                    Some(VertexId(*cell))
                }
            }
            Occupied::Sparse(map) => match map.entry((time, processor)) {
                Entry::Occupied(e) => Some(*e.get()),
                Entry::Vacant(e) => {
                    e.insert(v);
                    None
                }
            },
        }
    }
}

/// Checks every unit-time and unit-communication constraint of `s` against
/// `g` and returns all violations; an empty result means the schedule is
/// feasible. Runs in `O(n + m)`.
pub fn check_feasible(g: &DepthTwoDag, s: &Schedule) -> Vec<Violation> {
    let mut violations = Vec::new();
    let max_time = s.iter().map(|(_, a)| a.time).max().unwrap_or(0);
    let mut occupied = Occupied::for_horizon(max_time, g.vertex_count());
    for v in g.vertices() {
        match s.assignment(v) {
            None => violations.push(Violation::MissingVertex { vertex: v }),
            Some(a) => {
                if a.time == 0 {
                    violations.push(Violation::TimeOutOfRange { vertex: v, time: a.time });
                    continue;
                }
                if let Some(prev) = occupied.claim(a.time, a.processor, v) {
                    violations.push(Violation::SlotCollision {
                        time: a.time,
                        processor: a.processor,
                        first: prev,
                        second: v,
                    });
                }
            }
        }
    }
    for (u, v) in g.edges() {
        let (Some(au), Some(av)) = (s.assignment(u), s.assignment(v)) else {
            continue; // already reported as missing
        };
        if au.processor == av.processor {
            if av.time < au.time + 1 {
                violations.push(Violation::SameProcessorGap {
                    from: u,
                    from_time: au.time,
                    to: v,
                    to_time: av.time,
                });
            }
        } else if av.time < au.time + 2 {
            violations.push(Violation::CrossProcessorGap {
                from: u,
                from_time: au.time,
                to: v,
                to_time: av.time,
            });
        }
    }
    violations
}

/// Where a makespan stands relative to the guaranteed bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub vertex_count: usize,
    pub makespan: u32,
    pub lower: u32,
    pub upper: u32,
}

impl BoundsReport {
    pub fn within(&self) -> bool {
        self.lower <= self.makespan && self.makespan <= self.upper
    }
}

pub fn check_bounds(g: &DepthTwoDag, s: &Schedule) -> BoundsReport {
    let n = g.vertex_count();
    BoundsReport {
        vertex_count: n,
        makespan: s.makespan(),
        lower: makespan_lower_bound(n),
        upper: makespan_upper_bound(n),
    }
}

/// All idle slots up to the makespan, earliest first, first processor first
/// within a column. For a complete schedule their count is exactly
/// `2 * makespan - n`.
pub fn idle_slots(s: &Schedule) -> Vec<(u32, Processor)> {
    let mut occupied: Vec<(u32, Processor)> = s.iter().map(|(_, a)| (a.time, a.processor)).collect();
    occupied.sort_unstable();
    let mut idles = Vec::new();
    for t in 1..=s.makespan() {
        for p in [Processor::P1, Processor::P2] {
            if occupied.binary_search(&(t, p)).is_err() {
                idles.push((t, p));
            }
        }
    }
    idles
}

/// A trivially feasible schedule: each level runs fully parallel, with one
/// idle column between consecutive non-empty levels to absorb every
/// communication delay. Nowhere near optimal; used as a sanity baseline.
pub fn fallback_schedule(g: &DepthTwoDag) -> Schedule {
    let mut s = Schedule::empty(g.vertex_count(), Direction::Forward);
    let mut t = 1u32;
    let mut first = true;
    for level in [g.a_level(), g.b_level(), g.c_level()] {
        if level.is_empty() {
            continue;
        }
        if !first {
            t += 1; // full idle column between levels
        }
        first = false;
        for pair in level.chunks(2) {
            s.set(pair[0], t, Processor::P1);
            if let Some(&second) = pair.get(1) {
                s.set(second, t, Processor::P2);
            }
            t += 1;
        }
    }
    s
}

/// Outcome of running the algorithm and the oracle on one instance.
#[derive(Clone, Debug)]
pub struct InstanceComparison {
    pub digest: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub algorithm_makespan: Option<u32>,
    pub oracle_makespan: u32,
    pub feasible: bool,
    /// Hinge decisions recorded while scheduling; empty when the scheduler
    /// failed outright.
    pub trace: Vec<HingeDecision>,
}

impl InstanceComparison {
    pub fn matches(&self) -> bool {
        self.feasible && self.algorithm_makespan == Some(self.oracle_makespan)
    }
}

/// A disagreeing instance, kept whole so it can be replayed.
#[derive(Clone, Debug)]
pub struct Deviation {
    pub record: InstanceComparison,
    pub instance: DepthTwoDag,
}

/// An instance the oracle refused to solve, typically for exceeding its
/// size limit. Recorded instead of aborting so one oversized instance
/// cannot sink a whole batch.
#[derive(Clone, Debug)]
pub struct SkippedInstance {
    pub digest: String,
    pub vertex_count: usize,
    pub error: OracleError,
}

/// Aggregate of a corpus comparison; `deviations` keeps the offending
/// instances for diagnosis.
#[derive(Clone, Debug, Default)]
pub struct ComparisonReport {
    pub records: Vec<InstanceComparison>,
    pub matching: usize,
    pub deviations: Vec<Deviation>,
    pub skipped: Vec<SkippedInstance>,
}

impl ComparisonReport {
    pub fn instances(&self) -> usize {
        self.records.len()
    }

    pub fn all_match(&self) -> bool {
        self.matching == self.records.len()
    }
}

/// Runs the scheduler and the exhaustive oracle over every instance and
/// tallies agreement on the optimal makespan. Instances the oracle cannot
/// handle are skipped and recorded, not fatal.
pub fn compare<I>(instances: I) -> ComparisonReport
where
    I: IntoIterator<Item = DepthTwoDag>,
{
    let mut report = ComparisonReport::default();
    for g in instances {
        let oracle_makespan = match optimal_makespan(&g) {
            Ok(m) => m,
            Err(error) => {
                report.skipped.push(SkippedInstance {
                    digest: g.digest(),
                    vertex_count: g.vertex_count(),
                    error,
                });
                continue;
            }
        };
        let (algorithm_makespan, feasible, trace) = match schedule_depth_two(&g) {
            Ok(s) => {
                let clean = check_feasible(&g, &s).is_empty();
                (Some(s.makespan()), clean, s.trace)
            }
            Err(_) => (None, false, Vec::new()),
        };
        let comparison = InstanceComparison {
            digest: g.digest(),
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            algorithm_makespan,
            oracle_makespan,
            feasible,
            trace,
        };
        if comparison.matches() {
            report.matching += 1;
        } else {
            report.deviations.push(Deviation { record: comparison.clone(), instance: g });
        }
        report.records.push(comparison);
    }
    report
}
