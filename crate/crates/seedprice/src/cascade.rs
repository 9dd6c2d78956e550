//! Adoption fixpoint under the monetary linear-threshold model, the revenue
//! function, potential buyers, and the two pruning quantities driving the
//! solvers.

use crate::error::{Error, Result};
use crate::model::{Money, MonetizingNetwork, NodeId, NodeSet};

/// Outcome of one influence cascade at a fixed price.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeResult {
    /// sigma(A): everyone who adopts, seeds included.
    pub adopters: NodeSet,
    /// Per-node valuation against the final adopter set.
    pub final_valuation: Vec<Money>,
    /// Propagation rounds until the fixpoint (round 0 adopters excluded).
    pub rounds: usize,
}

/// Runs the cascade to its fixpoint with synchronous rounds.
///
/// Round 0 adopters are the seeds plus everyone whose inherent valuation
/// already reaches the price. Each later round, every non-adopter whose
/// valuation under the current adopters reaches the price adopts. A node
/// adopts when its valuation equals the price.
pub fn run_cascade(net: &MonetizingNetwork, price: Money, seeds: &NodeSet) -> Result<CascadeResult> {
    let n = net.node_count();
    for &s in seeds {
        if s >= n {
            return Err(Error::UnknownNode(s.to_string()));
        }
    }
    let mut adopted = vec![false; n];
    let mut in_sum = vec![0.0f64; n];
    let mut frontier: Vec<NodeId> = Vec::new();
    for (v, slot) in adopted.iter_mut().enumerate() {
        if seeds.contains(&v) || net.inherent_valuation(v) >= price {
            *slot = true;
            frontier.push(v);
        }
    }
    let mut rounds = 0;
    // Each adopter pushes its out-edges exactly once, so the whole cascade is
    // O(|E|); in_sum[v] ends up as the total in-weight from the adopter set.
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            for &(v, w) in net.out_edges(u) {
                in_sum[v] += w;
            }
        }
        for &u in &frontier {
            for &(v, _) in net.out_edges(u) {
                if !adopted[v]
                    && net.inherent_valuation(v) + net.influence().evaluate(in_sum[v]) >= price
                {
                    adopted[v] = true;
                    next.push(v);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if !next.is_empty() {
            rounds += 1;
        }
        frontier = next;
    }
    let final_valuation = (0..n)
        .map(|v| net.inherent_valuation(v) + net.influence().evaluate(in_sum[v]))
        .collect();
    let adopters = (0..n).filter(|&v| adopted[v]).collect();
    Ok(CascadeResult {
        adopters,
        final_valuation,
        rounds,
    })
}

/// R(n, p, A) = p * min{|sigma(A) \ A|, n - |A|}.
pub fn revenue(net: &MonetizingNetwork, n: usize, price: Money, seeds: &NodeSet) -> Result<Money> {
    if seeds.len() > n {
        return Err(Error::SeedsExceedStock {
            seeds: seeds.len(),
            stock: n,
        });
    }
    let cascade = run_cascade(net, price, seeds)?;
    Ok(revenue_of_cascade(price, seeds.len(), cascade.adopters.len(), n))
}

/// Revenue from already-known cascade sizes; seeds are counted in `adopters`.
pub fn revenue_of_cascade(price: Money, seeds: usize, adopters: usize, n: usize) -> Money {
    let paying = (adopters - seeds).min(n - seeds);
    price * paying as Money
}

/// Everyone whose maximum valuation reaches the price.
pub fn potential_buyers(net: &MonetizingNetwork, price: Money) -> NodeSet {
    (0..net.node_count())
        .filter(|&v| net.max_valuation(v).expect("valid node") >= price)
        .collect()
}

/// R_bound(n, p) = p * min{n, m_p} where m_p counts potential buyers at p.
pub fn revenue_upper_bound(net: &MonetizingNetwork, n: usize, price: Money) -> Money {
    price * n.min(potential_buyers(net, price).len()) as Money
}

/// Per-price potential-buyer counts and revenue upper bounds, sorted by
/// descending bound with ascending-price tie-breaking: the canonical visit
/// order of every solver.
#[derive(Debug, Clone)]
pub struct BoundTable {
    entries: Vec<BoundEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEntry {
    pub price: Money,
    pub potential_buyers: usize,
    pub bound: Money,
}

impl BoundTable {
    pub fn new(net: &MonetizingNetwork, prices: &crate::model::PriceSet, n: usize) -> Self {
        let mut entries: Vec<BoundEntry> = prices
            .prices()
            .iter()
            .map(|&p| {
                let m = potential_buyers(net, p).len();
                BoundEntry {
                    price: p,
                    potential_buyers: m,
                    bound: p * n.min(m) as Money,
                }
            })
            .collect();
        entries.sort_by(|a, b| {
            b.bound
                .partial_cmp(&a.bound)
                .unwrap()
                .then(a.price.partial_cmp(&b.price).unwrap())
        });
        BoundTable { entries }
    }

    /// Entries in canonical visit order.
    pub fn entries(&self) -> &[BoundEntry] {
        &self.entries
    }
}

/// Largest admissible seed-group size k with k < n - r_global/p, or `None`
/// when even size 0 fails the bound. Callers still evaluate the empty seed
/// group at every examined price regardless.
pub fn seed_size_bound(n: usize, price: Money, r_global: Money) -> Option<usize> {
    let limit = n as f64 - r_global / price;
    if limit <= 0.0 {
        return None;
    }
    let mut k = limit.ceil() as i64 - 1;
    while k >= 0 && (k as f64) >= limit {
        k -= 1;
    }
    if k < 0 {
        None
    } else {
        Some(k as usize)
    }
}
