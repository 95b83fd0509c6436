mod common;

use std::collections::BTreeSet;

use common::{enumerate_ground, fixable_problem, random_problem, raw_energy};
use qamlz::ising::{apply_gauge, fix_variables, prune, retained_count, ungauge, AugmentedClassifierSet, GaugeVector};
use qamlz::rng::keyed_rng;
use qamlz::solver::solve_exact;

#[test]
fn coupler_arithmetic_for_the_full_augmentation() {
    let a = AugmentedClassifierSet::new(12, 0.025, 5).unwrap();
    assert_eq!(a.size(), 132);
    assert_eq!(a.n_couplers(), 8646);
    assert_eq!(retained_count(8646, 85.0), 1297);
}

#[test]
fn gauged_problems_share_the_ground_energy() {
    for k in 0..50 {
        let p = random_problem(4 + k % 9, 2000 + k as u64);
        let g = GaugeVector::random(p.n, &mut keyed_rng(k as u64, &[2]));
        let q = apply_gauge(&p, &g).unwrap();
        let a = solve_exact(&p, 1).unwrap().best().unwrap().energy;
        let gq = solve_exact(&q, 1).unwrap();
        let b = gq.best().unwrap();
        assert!((a - b.energy).abs() <= 1e-12, "pair {k}: {a} vs {}", b.energy);
        let back = ungauge(&b.spins, &g).unwrap();
        assert!((raw_energy(&p, &back) - b.energy).abs() <= 1e-12);
    }
}

#[test]
fn fixed_spins_agree_with_every_ground_state() {
    let mut fixed_total = 0;
    for k in 0..100 {
        let p = fixable_problem(6 + k % 9, 3000 + k as u64);
        let fx = fix_variables(&p);
        let (_, ground) = enumerate_ground(&p, 1e-12);
        for (i, a) in fx.assignments.iter().enumerate() {
            if let Some(v) = a {
                fixed_total += 1;
                assert!(ground.iter().all(|g| g[i] == *v), "instance {k}, spin {i}");
            }
        }
        if !fx.free.is_empty() {
            let red = solve_exact(&fx.reduced, 1).unwrap();
            let full = fx.expand(&red.best().unwrap().spins).unwrap();
            let (min, _) = enumerate_ground(&p, 0.0);
            assert!((raw_energy(&p, &full) - min).abs() < 1e-9);
            assert!((red.best().unwrap().energy + fx.offset - min).abs() < 1e-9);
        }
    }
    assert!(fixed_total > 200, "fixing rarely fired: {fixed_total}");
}

#[test]
fn pruning_keeps_nested_coupler_sets() {
    for k in 0..20 {
        let p = random_problem(16, 4000 + k);
        let sets: Vec<BTreeSet<(usize, usize)>> = [50.0, 85.0, 95.0]
            .iter()
            .map(|&c| {
                let q = prune(&p, c).unwrap();
                assert_eq!(q.h, p.h);
                assert_eq!(q.couplers.len(), retained_count(p.couplers.len(), c));
                q.couplers.iter().map(|&(i, j, _)| (i, j)).collect()
            })
            .collect();
        assert!(sets[2].is_subset(&sets[1]) && sets[1].is_subset(&sets[0]));
        let q = prune(&p, 85.0).unwrap();
        let min_kept = q.couplers.iter().map(|c| c.2.abs()).fold(f64::INFINITY, f64::min);
        let dropped = p.couplers.iter().filter(|c| !sets[1].contains(&(c.0, c.1)));
        assert!(dropped.map(|c| c.2.abs()).all(|v| v <= min_kept));
    }
}
