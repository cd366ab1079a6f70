//! Recovery-metric fixtures and statistical checks.

mod common;

use std::collections::HashSet;

use clustbench::recovery::{adjusted_rand_index, lfk_conditional_entropy, lfk_nmi, pair_counts};
use clustbench::Clustering;
use common::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn h(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Direct evaluation of every (k, l) binary-indicator entropy term.
fn direct_lfk_conditional(x: &[HashSet<usize>], y: &[HashSet<usize>], n: usize) -> f64 {
    let nf = n as f64;
    let mut total = 0.0;
    for k in x {
        let a = k.len() as f64 / nf;
        let hk = h(a) + h(1.0 - a);
        if hk == 0.0 {
            total += 1.0;
            continue;
        }
        let mut best: Option<f64> = None;
        for l in y {
            let p11 = k.intersection(l).count() as f64 / nf;
            let p10 = k.difference(l).count() as f64 / nf;
            let p01 = l.difference(k).count() as f64 / nf;
            let p00 = (n - k.union(l).count()) as f64 / nf;
            if h(p11) + h(p00) <= h(p01) + h(p10) {
                continue;
            }
            let b = l.len() as f64 / nf;
            let v = h(p11) + h(p10) + h(p01) + h(p00) - (h(b) + h(1.0 - b));
            best = Some(best.map_or(v, |c: f64| c.min(v)));
        }
        total += best.unwrap_or(hk) / hk;
    }
    total / x.len() as f64
}

fn sets(c: &Clustering) -> Vec<HashSet<usize>> {
    c.members()
        .into_iter()
        .map(|m| m.into_iter().collect())
        .collect()
}

#[test]
fn lfk_six_node_fixture() {
    let x = Clustering::from_labels(&[0, 0, 0, 1, 1, 1]);
    let y = Clustering::from_labels(&[0, 0, 1, 1, 2, 2]);
    let hxy = direct_lfk_conditional(&sets(&x), &sets(&y), 6);
    let hyx = direct_lfk_conditional(&sets(&y), &sets(&x), 6);
    assert!((lfk_conditional_entropy(&x, &y).unwrap() - hxy).abs() < 1e-12);
    assert!((lfk_conditional_entropy(&y, &x).unwrap() - hyx).abs() < 1e-12);
    let v = lfk_nmi(&x, &y).unwrap();
    assert!((v - (1.0 - 0.5 * (hxy + hyx))).abs() < 1e-12);
    assert!((v - 0.396240625180289).abs() < 1e-12, "{v}");
    assert!((hyx - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn lfk_matches_direct_evaluator_on_corpus() {
    for entry in corpus().iter().filter(|e| e.graph.node_count() <= 90) {
        let n = entry.graph.node_count();
        let parts = corpus_partitions(entry);
        for (xn, x) in &parts {
            for (yn, y) in &parts {
                let fast = lfk_conditional_entropy(x, y).unwrap();
                let slow = direct_lfk_conditional(&sets(x), &sets(y), n);
                assert!(
                    (fast - slow).abs() < 1e-12,
                    "{} / {xn} vs {yn}: {fast} vs {slow}",
                    entry.name
                );
            }
        }
    }
}

#[test]
fn ari_of_shuffled_labels_averages_zero() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    let x: Vec<usize> = (0..60).map(|i| i % 4).collect();
    let mut y: Vec<usize> = (0..60).map(|i| i % 5).collect();
    let cx = Clustering::from_labels(&x);
    let trials = 10_000;
    let mut sum = 0.0;
    for _ in 0..trials {
        y.shuffle(&mut rng);
        sum +=
            adjusted_rand_index(&pair_counts(&cx, &Clustering::from_labels(&y)).unwrap()).unwrap();
    }
    let mean = sum / trials as f64;
    assert!(mean.abs() < 0.02, "mean ARI {mean}");
}
