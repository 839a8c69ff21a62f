//! Exhaustive reference tools: a brute-force optimal scheduler and
//! instance-family generators for cross-checking the staged algorithm.
//!
//! The oracle explores schedules column by column. A search state is the
//! set of finished vertices plus the content of the most recent column,
//! which is all the future can depend on: a vertex may enter the next
//! column exactly when all its predecessors are done and none of them sits
//! in the previous column on the other processor. States are deduplicated
//! up to processor swap, and a breadth-first sweep finds the minimum number
//! of columns, with a witness schedule rebuilt from recorded transitions.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::graph::{DepthTwoDag, VertexId};
use crate::schedule::{Direction, Processor, Schedule};

/// The oracle's state space is exponential; everything the crate's own
/// tests need fits well below this.
pub const ORACLE_VERTEX_LIMIT: usize = 16;

/// Cap on `source_count * middle_count + middle_count * sink_count` for
/// exhaustive family enumeration.
pub const FAMILY_EDGE_LIMIT: usize = 20;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive search is limited to {limit} vertices, instance has {have}")]
    InstanceTooLarge { have: usize, limit: usize },
    #[error("family has {potential_edges} potential edges, more than the {limit} enumeration allows")]
    FamilyTooLarge { potential_edges: usize, limit: usize },
}

/// Provably optimal makespan of `g`, by exhaustive search.
pub fn optimal_makespan(g: &DepthTwoDag) -> Result<u32, OracleError> {
    optimal_schedule(g).map(|s| s.makespan())
}

/// Like [`optimal_makespan`] with a caller-chosen vertex cap. Runtime grows
/// exponentially with the cap; much beyond the default is a long wait.
pub fn optimal_makespan_with_limit(g: &DepthTwoDag, limit: usize) -> Result<u32, OracleError> {
    optimal_schedule_with_limit(g, limit).map(|s| s.makespan())
}

type Column = (Option<u8>, Option<u8>);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct StateKey {
    done: u32,
    last: Column,
}

#[derive(Clone, Copy)]
struct Transition {
    parent: StateKey,
    /// Column content as played, first processor first. The state key
    /// stores the processor-swapped normal form, but reconstruction and
    /// expansion need the orientation that was actually reached.
    action: Column,
}

fn canonical(column: Column) -> Column {
    let (x, y) = column;
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// An optimal schedule for `g`, by exhaustive search.
pub fn optimal_schedule(g: &DepthTwoDag) -> Result<Schedule, OracleError> {
    optimal_schedule_with_limit(g, ORACLE_VERTEX_LIMIT)
}

/// Like [`optimal_schedule`] with a caller-chosen vertex cap.
pub fn optimal_schedule_with_limit(g: &DepthTwoDag, limit: usize) -> Result<Schedule, OracleError> {
    let n = g.vertex_count();
    let limit = limit.min(32);
    if n > limit {
        return Err(OracleError::InstanceTooLarge { have: n, limit });
    }
    if n == 0 {
        return Ok(Schedule::empty(0, Direction::Forward));
    }
    let full: u32 = (1u32 << n) - 1;
    let preds: Vec<Vec<u8>> = g
        .vertices()
        .map(|v| g.predecessors(v).iter().map(|p| p.0 as u8).collect())
        .collect();

    let root = StateKey { done: 0, last: (None, None) };
    let mut seen: HashMap<StateKey, Transition> = HashMap::new();
    let mut frontier: Vec<(StateKey, Column)> = vec![(root, (None, None))];

    // Any schedule finishes within n columns plus slack, so the sweep is
    // bounded even against bugs in transition generation.
    for _depth in 0..2 * n + 4 {
        let mut next_frontier = Vec::new();
        for &(key, oriented) in &frontier {
            let ready = |other_last: Option<u8>| -> Vec<u8> {
                (0..n as u8)
                    .filter(|&v| {
                        key.done & (1 << v) == 0
                            && preds[v as usize].iter().all(|&p| {
                                key.done & (1 << p) != 0 && Some(p) != other_last
                            })
                    })
                    .collect()
            };
            let ready_p1 = ready(oriented.1);
            let ready_p2 = ready(oriented.0);
            let mut actions: Vec<Column> = vec![(None, None)];
            actions.extend(ready_p1.iter().map(|&v| (Some(v), None)));
            actions.extend(ready_p2.iter().map(|&w| (None, Some(w))));
            for &v in &ready_p1 {
                for &w in &ready_p2 {
                    if v != w {
                        actions.push((Some(v), Some(w)));
                    }
                }
            }
            for action in actions {
                let mut done = key.done;
                for v in [action.0, action.1].into_iter().flatten() {
                    done |= 1 << v;
                }
                let new_key = StateKey { done, last: canonical(action) };
                if new_key == key || seen.contains_key(&new_key) {
                    continue;
                }
                seen.insert(new_key, Transition { parent: key, action });
                if done == full {
                    return Ok(reconstruct(g, &seen, new_key, root));
                }
                next_frontier.push((new_key, action));
            }
        }
        frontier = next_frontier;
    }
    unreachable!("exhaustive search always completes a schedule");
}

fn reconstruct(
    g: &DepthTwoDag,
    seen: &HashMap<StateKey, Transition>,
    goal: StateKey,
    root: StateKey,
) -> Schedule {
    let mut columns: Vec<Column> = Vec::new();
    let mut key = goal;
    while key != root {
        let t = seen[&key];
        columns.push(t.action);
        key = t.parent;
    }
    columns.reverse();
    let mut s = Schedule::empty(g.vertex_count(), Direction::Forward);
    for (i, (p1, p2)) in columns.into_iter().enumerate() {
        if let Some(v) = p1 {
            s.set(VertexId(v as u32), i as u32 + 1, Processor::P1);
        }
        if let Some(v) = p2 {
            s.set(VertexId(v as u32), i as u32 + 1, Processor::P2);
        }
    }
    s
}

/// All valid instances with the given level sizes, every edge subset tried
/// once. Instances keep the canonical names `a1..`, `b1..`, `c1..`. A
/// middle vertex must have a source predecessor whenever sources exist, so
/// the family matches the strictest reading of validity; the builder alone
/// also admits middles justified only by a sink successor.
pub fn enumerate_instances(
    na: usize,
    nb: usize,
    nc: usize,
) -> Result<Vec<DepthTwoDag>, OracleError> {
    let ab = na * nb;
    let bc = nb * nc;
    let bits = ab + bc;
    if bits > FAMILY_EDGE_LIMIT {
        return Err(OracleError::FamilyTooLarge { potential_edges: bits, limit: FAMILY_EDGE_LIMIT });
    }
    let name = |prefix: &str, count: usize| -> Vec<String> {
        (1..=count).map(|i| format!("{prefix}{i}")).collect()
    };
    let (a, b, c) = (name("a", na), name("b", nb), name("c", nc));
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << bits) {
        let mut edges: Vec<(String, String)> = Vec::new();
        for i in 0..ab {
            if mask & (1 << i) != 0 {
                edges.push((a[i / nb].clone(), b[i % nb].clone()));
            }
        }
        for j in 0..bc {
            if mask & (1 << (ab + j)) != 0 {
                edges.push((b[j / nc].clone(), c[j % nc].clone()));
            }
        }
        let Ok(g) = DepthTwoDag::build(&a, &b, &c, &edges) else {
            continue;
        };
        if na > 0 && g.b_level().iter().any(|&v| g.predecessors(v).is_empty()) {
            continue;
        }
        out.push(g);
    }
    Ok(out)
}

/// A random valid instance: every middle vertex gets one source
/// predecessor, every sink one middle predecessor, and each remaining
/// potential edge joins independently with probability `extra`.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    na: usize,
    nb: usize,
    nc: usize,
    extra: f64,
) -> DepthTwoDag {
    assert!(nc == 0 || nb > 0, "sinks need a middle level");
    let name = |prefix: &str, count: usize| -> Vec<String> {
        (1..=count).map(|i| format!("{prefix}{i}")).collect()
    };
    let (a, b, c) = (name("a", na), name("b", nb), name("c", nc));
    let mut edges: Vec<(String, String)> = Vec::new();
    if na > 0 {
        for bj in &b {
            edges.push((a[rng.gen_range(0..na)].clone(), bj.clone()));
        }
    }
    for ck in &c {
        edges.push((b[rng.gen_range(0..nb)].clone(), ck.clone()));
    }
    sample_pairs(rng, na, nb, extra, |i, j| edges.push((a[i].clone(), b[j].clone())));
    sample_pairs(rng, nb, nc, extra, |i, j| edges.push((b[i].clone(), c[j].clone())));
    DepthTwoDag::build(&a, &b, &c, &edges).expect("generated instance is valid")
}

/// Visits each cell of a `rows x cols` grid independently with probability
/// `p`, jumping between hits geometrically so the cost is proportional to
/// the number of hits rather than the grid size.
fn sample_pairs<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    p: f64,
    mut emit: impl FnMut(usize, usize),
) {
    if rows == 0 || cols == 0 || p <= 0.0 {
        return;
    }
    let total = rows * cols;
    if p >= 1.0 {
        for i in 0..total {
            emit(i / cols, i % cols);
        }
        return;
    }
    let ln_skip = (1.0 - p).ln();
    let mut i = 0usize;
    while i < total {
        let u: f64 = 1.0 - rng.gen::<f64>();
        i = i.saturating_add((u.ln() / ln_skip) as usize);
        if i >= total {
            break;
        }
        emit(i / cols, i % cols);
        i += 1;
    }
}
