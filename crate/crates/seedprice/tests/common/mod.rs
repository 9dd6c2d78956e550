//! Shared helpers for integration tests: independent cascade oracles and
//! small random instance corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use seedprice::{ConcaveInfluence, Money, MonetizingNetwork, NodeSet};

/// Reference cascade written as directly from the definition as possible:
/// every round recomputes every node's valuation from scratch over the full
/// adopter set, with no frontier bookkeeping.
pub fn oracle_cascade(net: &MonetizingNetwork, price: Money, seeds: &NodeSet) -> NodeSet {
    let mut adopters = seeds.clone();
    for v in 0..net.node_count() {
        if net.inherent_valuation(v) >= price {
            adopters.insert(v);
        }
    }
    loop {
        let mut next = adopters.clone();
        for v in 0..net.node_count() {
            if !adopters.contains(&v) && net.valuation_under(v, &adopters).unwrap() >= price {
                next.insert(v);
            }
        }
        if next == adopters {
            return adopters;
        }
        adopters = next;
    }
}

/// Asynchronous activation in a randomized order: repeatedly adopt one
/// arbitrary eligible node. Used to check order independence.
pub fn async_cascade(
    net: &MonetizingNetwork,
    price: Money,
    seeds: &NodeSet,
    rng: &mut ChaCha8Rng,
) -> NodeSet {
    let mut adopters = seeds.clone();
    for v in 0..net.node_count() {
        if net.inherent_valuation(v) >= price {
            adopters.insert(v);
        }
    }
    loop {
        let eligible: Vec<usize> = (0..net.node_count())
            .filter(|&v| !adopters.contains(&v) && net.valuation_under(v, &adopters).unwrap() >= price)
            .collect();
        if eligible.is_empty() {
            return adopters;
        }
        adopters.insert(eligible[rng.gen_range(0..eligible.len())]);
    }
}

/// Oracle revenue straight from the definition.
pub fn oracle_revenue(net: &MonetizingNetwork, n: usize, price: Money, seeds: &NodeSet) -> Money {
    let adopters = oracle_cascade(net, price, seeds);
    let paying = adopters.len() - seeds.len();
    price * paying.min(n.saturating_sub(seeds.len())) as f64
}

/// Small random instance: 8 nodes, edge probability 0.3, integer weights in
/// 1..=5, valuations from a normal clamped at zero.
pub fn small_instance(seed: u64) -> MonetizingNetwork {
    random_instance(seed, 8, 0.3)
}

pub fn random_instance(seed: u64, nodes: usize, edge_prob: f64) -> MonetizingNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<String> = (0..nodes).map(|i| format!("v{i}")).collect();
    let normal = Normal::new(4.0f64, 3.0).unwrap();
    let valuations: Vec<f64> = (0..nodes)
        .map(|_| normal.sample(&mut rng).max(0.0))
        .collect();
    let mut edges = Vec::new();
    for s in 0..nodes {
        for t in 0..nodes {
            if s != t && rng.gen_bool(edge_prob) {
                edges.push((
                    labels[s].clone(),
                    labels[t].clone(),
                    rng.gen_range(1..=5) as f64,
                ));
            }
        }
    }
    MonetizingNetwork::build(labels, valuations, edges, ConcaveInfluence::Identity).unwrap()
}

/// A random seed group over the instance's nodes.
pub fn random_seed_group(rng: &mut ChaCha8Rng, nodes: usize, max_size: usize) -> NodeSet {
    let size = rng.gen_range(0..=max_size.min(nodes));
    let mut group = NodeSet::new();
    while group.len() < size {
        group.insert(rng.gen_range(0..nodes));
    }
    group
}
