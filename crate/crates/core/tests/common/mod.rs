//! Brute-force oracles and random instance generators shared by the
//! integration tests. Written directly against edge lists so that they share
//! no code with the library beyond graph construction.

#![allow(dead_code)]

use std::collections::HashMap;

use balance_core::{Partition, SignedDigraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random signed digraph on nodes `0..n`. Each unordered pair gets an edge
/// with probability `density`; an edge is reciprocated with probability
/// `reciprocity`, and each edge is negative with probability `negative`.
pub fn random_graph(
    rng: &mut impl Rng,
    n: usize,
    density: f64,
    reciprocity: f64,
    negative: f64,
) -> SignedDigraph {
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !rng.gen_bool(density) {
                continue;
            }
            let (s, t) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            let sign = |r: &mut dyn rand::RngCore| if r.gen_bool(negative) { -1 } else { 1 };
            triples.push((s.to_string(), t.to_string(), sign(rng)));
            if rng.gen_bool(reciprocity) {
                triples.push((t.to_string(), s.to_string(), sign(rng)));
            }
        }
    }
    // Keep every node even if isolated.
    let mut b = balance_core::graph::GraphBuilder::new();
    for v in 0..n {
        b.node(v.to_string());
    }
    for (s, t, sign) in triples {
        b.edge(s, t, balance_core::Sign::from_int(sign).unwrap()).unwrap();
    }
    b.build()
}

/// A graph that is balanced by construction: a hidden bipartition decides
/// every sign.
pub fn balanced_graph(rng: &mut impl Rng, n: usize, density: f64) -> SignedDigraph {
    let side: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut b = balance_core::graph::GraphBuilder::new();
    for v in 0..n {
        b.node(v.to_string());
    }
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.gen_bool(density) {
                let sign = if side[s] == side[t] { 1 } else { -1 };
                b.edge(s.to_string(), t.to_string(), balance_core::Sign::from_int(sign).unwrap())
                    .unwrap();
            }
        }
    }
    b.build()
}

pub fn edge_list(g: &SignedDigraph) -> Vec<(usize, usize, i8)> {
    g.edges()
        .iter()
        .map(|e| (e.source, e.target, e.sign.value()))
        .collect()
}

pub fn count_frustrated(edges: &[(usize, usize, i8)], sides: &[bool]) -> u64 {
    edges
        .iter()
        .filter(|&&(s, t, sign)| (sign > 0) != (sides[s] == sides[t]))
        .count() as u64
}

/// Minimum frustration and every optimal canonical partition (node 0 on
/// side 0), by exhaustive enumeration of all 2^(n-1) assignments.
pub fn brute_force(g: &SignedDigraph) -> (u64, Vec<Partition>) {
    let n = g.node_count();
    let edges = edge_list(g);
    let free = n.saturating_sub(1);
    let mut best = u64::MAX;
    let mut optima = Vec::new();
    for mask in 0u64..(1 << free) {
        let sides: Vec<bool> = (0..n)
            .map(|v| v > 0 && (mask >> (v - 1)) & 1 == 1)
            .collect();
        let c = count_frustrated(&edges, &sides);
        if c < best {
            best = c;
            optima.clear();
        }
        if c == best {
            optima.push(Partition::new(sides));
        }
    }
    optima.sort();
    (best, optima)
}

/// Balanced and unbalanced transitive triad counts, from first principles:
/// every choice of one arc per pair is a semicycle; a triad counts when all
/// its semicycles are transitive, and is balanced when all of them have a
/// positive sign product.
pub fn brute_micro(g: &SignedDigraph) -> (u64, u64) {
    let n = g.node_count();
    let mut sign: HashMap<(usize, usize), i8> = HashMap::new();
    for (s, t, v) in edge_list(g) {
        sign.insert((s, t), v);
    }
    let (mut balanced, mut unbalanced) = (0, 0);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let pairs = [(a, b), (a, c), (b, c)];
                let options: Vec<Vec<(usize, usize, i8)>> = pairs
                    .iter()
                    .map(|&(x, y)| {
                        [(x, y), (y, x)]
                            .iter()
                            .filter_map(|&(s, t)| sign.get(&(s, t)).map(|&v| (s, t, v)))
                            .collect()
                    })
                    .collect();
                if options.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut all_transitive = true;
                let mut all_positive = true;
                for x in &options[0] {
                    for y in &options[1] {
                        for z in &options[2] {
                            let arcs = [*x, *y, *z];
                            for p in &arcs {
                                for q in &arcs {
                                    if p.1 == q.0 && p.0 != q.1 && !sign.contains_key(&(p.0, q.1)) {
                                        all_transitive = false;
                                    }
                                }
                            }
                            if arcs.iter().map(|e| e.2).product::<i8>() < 0 {
                                all_positive = false;
                            }
                        }
                    }
                }
                if all_transitive {
                    if all_positive {
                        balanced += 1;
                    } else {
                        unbalanced += 1;
                    }
                }
            }
        }
    }
    (balanced, unbalanced)
}

/// [`random_graph`] with reciprocity and negative share drawn from `rng`.
pub fn mixed_graph(rng: &mut impl Rng, n: usize, density: f64) -> SignedDigraph {
    let reciprocity = rng.gen_range(0.0..1.0);
    let negative = rng.gen_range(0.0..0.7);
    random_graph(rng, n, density, reciprocity, negative)
}
