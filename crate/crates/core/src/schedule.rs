//! Two-processor schedules and the decision trace the scheduler leaves
//! behind.
//!
//! A schedule maps every vertex to a `(time, processor)` slot; times are
//! 1-based and each slot holds at most one vertex. The makespan is the
//! largest occupied time. Schedules built directly by the staged algorithm
//! run against the time-reversed instance and are flipped into forward
//! orientation at the end; [`Schedule::time_reversed`] performs that flip.

use std::fmt;

use crate::graph::{DepthTwoDag, VertexId};
use crate::hinge::{Hinge, HingeCase, HingeKind};

/// One of the two identical processors.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Processor {
    P1,
    P2,
}

impl Processor {
    pub fn other(self) -> Processor {
        match self {
            Processor::P1 => Processor::P2,
            Processor::P2 => Processor::P1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Processor::P1 => 0,
            Processor::P2 => 1,
        }
    }
}

impl fmt::Display for Processor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Processor::P1 => write!(f, "P1"),
            Processor::P2 => write!(f, "P2"),
        }
    }
}

/// Whether the schedule is stated in forward time or still in the reversed
/// frame the staged algorithm works in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Forward,
    Reverse,
}

/// A vertex's slot: unit start time (1-based) and processor.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Assignment {
    pub time: u32,
    pub processor: Processor,
}

/// Which level boundary a hinge decision resolved.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Boundary {
    /// Between the sinks and the middle level (handled first).
    Bc,
    /// Between the middle level and the sources (handled second).
    Ab,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Bc => write!(f, "B/C"),
            Boundary::Ab => write!(f, "A/B"),
        }
    }
}

/// Record of one hinge the scheduler committed to, for explanations and
/// verification reports.
#[derive(Clone, Debug)]
pub struct HingeDecision {
    pub boundary: Boundary,
    pub kind: HingeKind,
    pub case: HingeCase,
    pub hinge: Hinge,
}

/// A (possibly partial or infeasible) assignment of vertices to slots.
///
/// The type itself enforces nothing beyond "one slot per vertex"; use
/// [`crate::verify::check_feasible`] to test the precedence and
/// communication constraints. This keeps broken schedules representable so
/// they can be inspected and reported.
#[derive(Clone, Debug)]
pub struct Schedule {
    slots: Vec<Option<Assignment>>,
    pub direction: Direction,
    pub trace: Vec<HingeDecision>,
}

impl Schedule {
    pub fn empty(vertex_count: usize, direction: Direction) -> Schedule {
        Schedule {
            slots: vec![None; vertex_count],
            direction,
            trace: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.slots.len()
    }

    pub fn assignment(&self, v: VertexId) -> Option<Assignment> {
        self.slots[v.index()]
    }

    pub fn set(&mut self, v: VertexId, time: u32, processor: Processor) {
        debug_assert!(time >= 1);
        self.slots[v.index()] = Some(Assignment { time, processor });
    }

    pub fn clear(&mut self, v: VertexId) {
        self.slots[v.index()] = None;
    }

    /// Largest occupied time, 0 for the empty schedule.
    pub fn makespan(&self) -> u32 {
        self.slots
            .iter()
            .flatten()
            .map(|a| a.time)
            .max()
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Assignment)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.map(|a| (VertexId(i as u32), a)))
    }

    /// Occupant of a concrete slot, if any. Linear scan; fine for the small
    /// schedules this is used on (reports and tests).
    pub fn occupant(&self, time: u32, processor: Processor) -> Option<VertexId> {
        self.iter()
            .find(|(_, a)| a.time == time && a.processor == processor)
            .map(|(v, _)| v)
    }

    /// Flips the time axis: a vertex at time `t` moves to `M + 1 - t`, where
    /// `M` is the makespan; processors stay put. Flipping also toggles
    /// [`Schedule::direction`], so a schedule built in the reversed frame
    /// comes out forward. The decision trace is carried over unchanged.
    pub fn time_reversed(&self) -> Schedule {
        let m = self.makespan();
        let slots = self
            .slots
            .iter()
            .map(|slot| {
                slot.map(|a| Assignment {
                    time: m + 1 - a.time,
                    processor: a.processor,
                })
            })
            .collect();
        Schedule {
            slots,
            direction: match self.direction {
                Direction::Forward => Direction::Reverse,
                Direction::Reverse => Direction::Forward,
            },
            trace: self.trace.clone(),
        }
    }

    /// Pretty one-line summary, mainly for debug output.
    pub fn describe(&self, g: &DepthTwoDag) -> String {
        let mut items: Vec<(u32, Processor, String)> = self
            .iter()
            .map(|(v, a)| (a.time, a.processor, g.name(v).to_string()))
            .collect();
        items.sort();
        let body: Vec<String> = items
            .iter()
            .map(|(t, p, name)| format!("{name}@{t}/{p}"))
            .collect();
        format!("[{}]", body.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn makespan_of_empty_schedule_is_zero() {
        let s = Schedule::empty(3, Direction::Forward);
        assert_eq!(s.makespan(), 0);
    }

    #[test]
    fn time_reversal_flips_times_and_direction() {
        let mut s = Schedule::empty(2, Direction::Reverse);
        s.set(VertexId(0), 1, Processor::P1);
        s.set(VertexId(1), 3, Processor::P2);
        let f = s.time_reversed();
        assert_eq!(f.direction, Direction::Forward);
        assert_eq!(
            f.assignment(VertexId(0)),
            Some(Assignment { time: 3, processor: Processor::P1 })
        );
        assert_eq!(
            f.assignment(VertexId(1)),
            Some(Assignment { time: 1, processor: Processor::P2 })
        );
        assert_eq!(f.makespan(), 3);
    }

    #[test]
    fn occupant_finds_the_right_vertex() {
        let mut s = Schedule::empty(2, Direction::Forward);
        s.set(VertexId(0), 2, Processor::P2);
        assert_eq!(s.occupant(2, Processor::P2), Some(VertexId(0)));
        assert_eq!(s.occupant(2, Processor::P1), None);
    }
}
