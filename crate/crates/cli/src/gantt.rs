//! Fixed-width ASCII Gantt tables, one row per processor.

use duosched::{DepthTwoDag, Processor, Schedule, VertexId};

/// Renders a schedule as a three-row table: processor rows P1 and P2, then
/// the time axis `1..makespan`. Idle slots are blank cells. Every cell is
/// one space plus its label left-justified to a fixed width: the longest
/// vertex name (or the makespan's digit count, if longer) plus one, so
/// columns always line up. Deterministic for identical input; no trailing
/// newline.
pub fn render_gantt(g: &DepthTwoDag, s: &Schedule) -> String {
    let makespan = s.makespan();
    let mut grid: Vec<[Option<VertexId>; 2]> = vec![[None; 2]; makespan as usize];
    for (v, a) in s.iter() {
        grid[(a.time - 1) as usize][a.processor.index()] = Some(v);
    }
    let longest_name = s.iter().map(|(v, _)| g.name(v).len()).max().unwrap_or(0);
    let digits = if makespan == 0 { 1 } else { makespan.ilog10() as usize + 1 };
    let cell = longest_name.max(digits) + 1;

    let mut lines = Vec::with_capacity(3);
    for p in [Processor::P1, Processor::P2] {
        let mut line = format!("{p} |");
        for column in &grid {
            let label = column[p.index()].map(|v| g.name(v)).unwrap_or("");
            line.push_str(&format!(" {label:<width$}", width = cell - 1));
        }
        lines.push(line);
    }
    let mut axis = String::from("t  |");
    for t in 1..=makespan {
        axis.push_str(&format!(" {t:<width$}", width = cell - 1));
    }
    lines.push(axis);
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use duosched::Direction;

    fn single() -> (DepthTwoDag, Schedule) {
        let g = DepthTwoDag::build(&[], &["x".to_string()], &[], &[]).unwrap();
        let mut s = Schedule::empty(1, Direction::Forward);
        s.set(g.vertex_by_name("x").unwrap(), 1, Processor::P1);
        (g, s)
    }

    #[test]
    fn single_vertex_table_matches_the_fixed_layout() {
        let (g, s) = single();
        assert_eq!(render_gantt(&g, &s), "P1 | x\nP2 |  \nt  | 1");
    }

    #[test]
    fn always_three_rows_even_when_empty() {
        let g = DepthTwoDag::build(&[], &["x".to_string()], &[], &[]).unwrap();
        let s = Schedule::empty(1, Direction::Forward);
        assert_eq!(render_gantt(&g, &s), "P1 |\nP2 |\nt  |");
    }

    #[test]
    fn idle_columns_render_blank_on_both_rows() {
        let g = DepthTwoDag::build(
            &[],
            &["b1".to_string(), "b2".to_string()],
            &["w1".to_string(), "w2".to_string()],
            &[
                ("b1".to_string(), "w1".to_string()),
                ("b1".to_string(), "w2".to_string()),
                ("b2".to_string(), "w1".to_string()),
                ("b2".to_string(), "w2".to_string()),
            ],
        )
        .unwrap();
        let mut s = Schedule::empty(4, Direction::Forward);
        s.set(g.vertex_by_name("b1").unwrap(), 1, Processor::P1);
        s.set(g.vertex_by_name("b2").unwrap(), 1, Processor::P2);
        s.set(g.vertex_by_name("w1").unwrap(), 3, Processor::P1);
        s.set(g.vertex_by_name("w2").unwrap(), 3, Processor::P2);
        let text = render_gantt(&g, &s);
        assert_eq!(text, "P1 | b1    w1\nP2 | b2    w2\nt  | 1  2  3 ");
    }

    #[test]
    fn wide_makespans_widen_the_cells() {
        let g = DepthTwoDag::build(
            &[],
            &(1..=20).map(|i| format!("v{i}")).collect::<Vec<_>>(),
            &[],
            &[],
        )
        .unwrap();
        let mut s = Schedule::empty(20, Direction::Forward);
        for (i, v) in g.b_level().iter().enumerate() {
            s.set(*v, i as u32 + 1, Processor::P1);
        }
        let text = render_gantt(&g, &s);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0].len(), lines[2].len());
        assert!(lines[2].ends_with("20 "));
    }
}
