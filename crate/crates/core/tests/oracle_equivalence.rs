//! Scaled-down standing sweeps against the exhaustive oracle. The full-size
//! runs live in the acceptance suite of the CLI crate; these keep the core
//! crate honest on its own.

use duosched::{
    compare, enumerate_instances, optimal_makespan, random_instance, DepthTwoDag,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Instance with no mandatory edges beyond validity: middle vertices may
/// keep only successors or only predecessors, unlike `random_instance`
/// which wires every level through.
fn relaxed_instance<R: Rng>(rng: &mut R, na: usize, nb: usize, nc: usize, p: f64) -> DepthTwoDag {
    let name = |prefix: &str, count: usize| -> Vec<String> {
        (1..=count).map(|i| format!("{prefix}{i}")).collect()
    };
    let nc = if nb == 0 { 0 } else { nc };
    let (a, b, c) = (name("a", na), name("b", nb), name("c", nc));
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut b_touched = vec![false; nb];
    for ai in &a {
        for (j, bj) in b.iter().enumerate() {
            if rng.gen_bool(p) {
                edges.push((ai.clone(), bj.clone()));
                b_touched[j] = true;
            }
        }
    }
    for (j, bj) in b.iter().enumerate() {
        for ck in &c {
            if rng.gen_bool(p) {
                edges.push((bj.clone(), ck.clone()));
                b_touched[j] = true;
            }
        }
    }
    // The builder rejects sinks without predecessors, and edge-free middle
    // vertices whenever the source level is populated; patch both up.
    for ck in &c {
        if !edges.iter().any(|(_, t)| t == ck) {
            let j = rng.gen_range(0..nb);
            edges.push((b[j].clone(), ck.clone()));
            b_touched[j] = true;
        }
    }
    if na > 0 {
        for (j, bj) in b.iter().enumerate() {
            if !b_touched[j] {
                let i = rng.gen_range(0..na);
                edges.push((a[i].clone(), bj.clone()));
            }
        }
    }
    DepthTwoDag::build(&a, &b, &c, &edges).expect("relaxed instance is valid")
}

fn assert_family_matches(label: &str, family: Vec<DepthTwoDag>) {
    let report = compare(family);
    assert!(report.skipped.is_empty(), "{label}: oracle skipped instances");
    if !report.all_match() {
        let worst = &report.deviations[0];
        panic!(
            "{label}: {} of {} instances deviate; first: algorithm {:?} vs oracle {} on {}",
            report.deviations.len(),
            report.instances(),
            worst.record.algorithm_makespan,
            worst.record.oracle_makespan,
            worst.instance.digest(),
        );
    }
}

#[test]
fn exhaustive_tiny_families_match_the_oracle() {
    for (na, nb, nc) in [
        (0, 1, 2),
        (0, 2, 3),
        (1, 1, 1),
        (1, 2, 2),
        (1, 3, 2),
        (2, 2, 0),
        (2, 2, 2),
        (2, 3, 2),
        (3, 2, 1),
        (2, 1, 3),
    ] {
        let family = enumerate_instances(na, nb, nc).expect("family within limits");
        assert_family_matches(&format!("family ({na},{nb},{nc})"), family);
    }
}

#[test]
fn random_instances_match_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd15c0);
    for &p in &[0.2, 0.5, 0.8] {
        let family: Vec<DepthTwoDag> = (0..400)
            .map(|_| {
                let nb = rng.gen_range(1..=6);
                let na = rng.gen_range(1..=(13 - nb).min(6));
                let nc = rng.gen_range(0..=(14 - na - nb).min(6));
                random_instance(&mut rng, na, nb, nc, p)
            })
            .collect();
        assert_family_matches(&format!("random p={p}"), family);
    }
}

#[test]
fn relaxed_instances_match_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ddba11);
    for &p in &[0.15, 0.4, 0.7] {
        let family: Vec<DepthTwoDag> = (0..300)
            .map(|_| {
                let na = rng.gen_range(0..=6);
                let nb = rng.gen_range(0..=(13 - na).min(6));
                let nc = rng.gen_range(0..=(14 - na - nb).min(6));
                relaxed_instance(&mut rng, na, nb, nc, p)
            })
            .collect();
        assert_family_matches(&format!("relaxed p={p}"), family);
    }
}

/// The nominal `floor(n/2) + 2` cap is not a universal upper bound: a tiny
/// even middle level between two complete boundaries forces a full idle
/// column at each boundary, and with odd `n` the optimum lands one past the
/// cap. The oracle certifies both the value and that nothing shorter exists.
#[test]
fn complete_bottleneck_exceeds_the_nominal_cap() {
    let a: Vec<String> = (1..=5).map(|i| format!("a{i}")).collect();
    let b: Vec<String> = (1..=2).map(|i| format!("b{i}")).collect();
    let c: Vec<String> = (1..=8).map(|i| format!("c{i}")).collect();
    let mut edges = Vec::new();
    for x in &a {
        for y in &b {
            edges.push((x.clone(), y.clone()));
        }
    }
    for y in &b {
        for z in &c {
            edges.push((y.clone(), z.clone()));
        }
    }
    let g = DepthTwoDag::build(&a, &b, &c, &edges).unwrap();
    let n = g.vertex_count();
    assert_eq!(n, 15);

    let optimum = optimal_makespan(&g).unwrap();
    assert_eq!(optimum, 10, "two full idle columns are unavoidable");
    assert_eq!(optimum, n.div_ceil(2) as u32 + 2);
    assert_eq!(optimum, duosched::makespan_upper_bound(n) + 1);

    let s = duosched::schedule_depth_two(&g).unwrap();
    assert_eq!(s.makespan(), optimum);
}

#[test]
fn oracle_is_symmetric_under_reversal() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xface);
    for i in 0..400 {
        let nb = rng.gen_range(1..=4);
        let na = rng.gen_range(1..=4);
        let nc = rng.gen_range(0..=(12 - na - nb).min(4));
        let g = random_instance(&mut rng, na, nb, nc, 0.4);
        let forward = optimal_makespan(&g).unwrap();
        let backward = optimal_makespan(&g.reverse()).unwrap();
        assert_eq!(
            forward,
            backward,
            "instance {i} ({}) differs from its reversal",
            g.digest()
        );
    }
}
