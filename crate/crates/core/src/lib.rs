//! Optimal two-processor scheduling for unit-time task graphs of depth two
//! with unit communication delays.
//!
//! Tasks all take one time unit; a result crossing from one processor to
//! the other takes one further unit to arrive. For precedence graphs whose
//! chains span at most three levels, an optimal schedule on two processors
//! can be found in linear time: [`scheduler::schedule_depth_two`] builds
//! one by packing the levels back to front and committing a small *hinge*
//! of vertices at each level boundary.
//!
//! The crate also ships the supporting cast needed to trust such a claim:
//! an exhaustive [`oracle`] that brute-forces small instances, a
//! [`verify`] module that checks schedules constraint by constraint and
//! compares the algorithm against the oracle over whole instance families,
//! and generators for those families.
//!
//! ```
//! use duosched::{DepthTwoDag, schedule_depth_two};
//!
//! let g = DepthTwoDag::build(
//!     &["a1".into()],
//!     &["b1".into(), "b2".into()],
//!     &["c1".into()],
//!     &[
//!         ("a1".into(), "b1".into()),
//!         ("a1".into(), "b2".into()),
//!         ("b1".into(), "c1".into()),
//!     ],
//! )
//! .unwrap();
//! let s = schedule_depth_two(&g).unwrap();
//! assert_eq!(s.makespan(), 3);
//! ```

pub mod graph;
pub mod hinge;
pub mod oracle;
pub mod schedule;
pub mod scheduler;
pub mod verify;

pub use graph::{infer_levels, BipartiteView, DepthTwoDag, GraphError, Layer, Level, VertexId};
pub use hinge::{
    classify_left_hinge, hinge_candidates, horizontal_hinge, select_hinge, vertical_hinge, Hinge,
    HingeCase, HingeError, HingeKind, HingeSelection, HingeVertex,
};
pub use oracle::{
    enumerate_instances, optimal_makespan, optimal_makespan_with_limit, optimal_schedule,
    optimal_schedule_with_limit, random_instance, OracleError, FAMILY_EDGE_LIMIT,
    ORACLE_VERTEX_LIMIT,
};
pub use schedule::{
    Assignment, Boundary, Direction, HingeDecision, Processor, Schedule,
};
pub use scheduler::{
    makespan_lower_bound, makespan_upper_bound, schedule_bipartite, schedule_depth_two,
    schedule_with_cap, ScheduleError,
};
pub use verify::{
    check_bounds, check_feasible, compare, fallback_schedule, idle_slots, BoundsReport,
    ComparisonReport, Deviation, InstanceComparison, SkippedInstance, Violation,
};
