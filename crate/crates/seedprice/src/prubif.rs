//! The importance-feedback heuristic: normalized weights, feedback
//! propagation, potential-buyer filtering, and the greedy solver built on
//! the same price framework as the exact search.

use std::time::Instant;

use rayon::prelude::*;

use crate::cascade::{potential_buyers, revenue_of_cascade, run_cascade, BoundTable};
use crate::error::{Error, Result};
use crate::model::{Money, MonetizingNetwork, NodeId, NodeSet, PriceSet};
use crate::prub::{SearchStats, SolverResult};

/// IF values within this distance of 1 count as "reached 1" when collecting
/// newly converted nodes.
const ONE_EPS: f64 = 1e-12;

/// Snapshot of one (price, seed group) search point: the adopter set, the
/// accumulated in-weights from it, per-node valuations X_A, and the cached
/// potential-buyer set at the price.
#[derive(Debug, Clone)]
pub struct ImportanceState<'a> {
    net: &'a MonetizingNetwork,
    price: Money,
    seeds: NodeSet,
    adopters: NodeSet,
    adopted: Vec<bool>,
    in_weight_sum: Vec<f64>,
    valuation: Vec<Money>,
    potential: Vec<bool>,
}

impl<'a> ImportanceState<'a> {
    pub fn new(net: &'a MonetizingNetwork, price: Money, seeds: &NodeSet) -> Result<Self> {
        let cascade = run_cascade(net, price, seeds)?;
        let n = net.node_count();
        let mut adopted = vec![false; n];
        for &v in &cascade.adopters {
            adopted[v] = true;
        }
        let in_weight_sum: Vec<f64> = (0..n)
            .map(|v| {
                net.in_edges(v)
                    .iter()
                    .filter(|(u, _)| adopted[*u])
                    .map(|&(_, w)| w)
                    .sum()
            })
            .collect();
        let valuation = (0..n)
            .map(|v| net.inherent_valuation(v) + net.influence().evaluate(in_weight_sum[v]))
            .collect();
        let mut potential = vec![false; n];
        for v in potential_buyers(net, price) {
            potential[v] = true;
        }
        Ok(ImportanceState {
            net,
            price,
            seeds: seeds.clone(),
            adopters: cascade.adopters,
            adopted,
            in_weight_sum,
            valuation,
            potential,
        })
    }

    pub fn price(&self) -> Money {
        self.price
    }

    pub fn seeds(&self) -> &NodeSet {
        &self.seeds
    }

    pub fn adopters(&self) -> &NodeSet {
        &self.adopters
    }

    pub fn has_adopted(&self, v: NodeId) -> bool {
        self.adopted[v]
    }

    /// X_A(v): valuation under the current adopter set.
    pub fn valuation(&self, v: NodeId) -> Money {
        self.valuation[v]
    }

    pub fn is_potential_buyer(&self, v: NodeId) -> bool {
        self.potential[v]
    }

    pub fn network(&self) -> &MonetizingNetwork {
        self.net
    }

    /// Revenue of the current (price, seed group) point at stock `n`.
    pub fn revenue(&self, n: usize) -> Money {
        revenue_of_cascade(self.price, self.seeds.len(), self.adopters.len(), n)
    }

    /// Normalized weight given an explicit edge weight from some node to `v`.
    fn normalized_from_weight(&self, w_uv: f64, v: NodeId) -> f64 {
        if self.price <= self.valuation[v] {
            return 0.0;
        }
        let s = self.in_weight_sum[v];
        let f = self.net.influence();
        let gain = (f.evaluate(w_uv + s) - f.evaluate(s)).max(0.0);
        (gain / (self.price - self.valuation[v])).min(1.0)
    }

    /// The normalized weight from `u` to `v`: u's marginal push on v's
    /// valuation divided by v's remaining gap to the price, capped at 1.
    /// Zero when v is already satisfiable at the price or u = v.
    pub fn normalized_weight(&self, u: NodeId, v: NodeId) -> Result<f64> {
        let n = self.net.node_count();
        if u >= n || v >= n {
            return Err(Error::UnknownNode(u.max(v).to_string()));
        }
        if u == v {
            return Ok(0.0);
        }
        let w_uv = self
            .net
            .in_edges(v)
            .iter()
            .find(|(src, _)| *src == u)
            .map(|&(_, w)| w)
            .unwrap_or(0.0);
        Ok(self.normalized_from_weight(w_uv, v))
    }

    /// IF(u, v) for every v: the normalized weight from u augmented by the
    /// normalized weights of nodes u fully converts, iterated to fixpoint.
    /// IF(u, u) stays 0.
    pub fn importance_feedback(&self, u: NodeId) -> Vec<f64> {
        let n = self.net.node_count();
        let mut feedback = vec![0.0f64; n];
        for &(v, w) in self.net.out_edges(u) {
            if v != u {
                feedback[v] = self.normalized_from_weight(w, v);
            }
        }
        let mut converted = vec![false; n];
        let mut frontier: Vec<NodeId> = (0..n)
            .filter(|&v| v != u && feedback[v] >= 1.0 - ONE_EPS)
            .collect();
        for &v in &frontier {
            converted[v] = true;
        }
        // Each node is consumed into a frontier at most once, so this stops
        // within |V| steps.
        while !frontier.is_empty() {
            let mut gain = vec![0.0f64; n];
            for &i in &frontier {
                for &(v, w) in self.net.out_edges(i) {
                    if v != u {
                        gain[v] += self.normalized_from_weight(w, v);
                    }
                }
            }
            let mut next = Vec::new();
            for v in 0..n {
                if v == u || gain[v] == 0.0 {
                    continue;
                }
                feedback[v] = (feedback[v] + gain[v]).min(1.0);
                if !converted[v] && feedback[v] >= 1.0 - ONE_EPS {
                    converted[v] = true;
                    next.push(v);
                }
            }
            frontier = next;
        }
        feedback
    }

    /// Psi(u): the importance feedback summed over potential buyers.
    pub fn pricing_sensitive_importance(&self, u: NodeId) -> f64 {
        let feedback = self.importance_feedback(u);
        (0..self.net.node_count())
            .filter(|&v| self.potential[v])
            .map(|v| feedback[v])
            .sum()
    }
}

/// One greedy expansion step: the seed added and the revenue reached with it.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStep {
    pub seed: NodeId,
    pub revenue: Money,
}

/// Picks the next seed from `candidates` (non-adopters, ascending order).
pub(crate) trait SeedSelector {
    fn select(&mut self, state: &ImportanceState<'_>, candidates: &[NodeId]) -> NodeId;
}

/// Argmax of Psi with lowest-index tie-breaking; Psi values for distinct
/// candidates are independent and evaluated in parallel.
pub(crate) struct ImportanceSelector;

impl SeedSelector for ImportanceSelector {
    fn select(&mut self, state: &ImportanceState<'_>, candidates: &[NodeId]) -> NodeId {
        let scores: Vec<f64> = candidates
            .par_iter()
            .map(|&u| state.pricing_sensitive_importance(u))
            .collect();
        argmax(candidates, &scores)
    }
}

pub(crate) fn argmax(candidates: &[NodeId], scores: &[f64]) -> NodeId {
    let mut best = candidates[0];
    let mut best_score = scores[0];
    for (i, &u) in candidates.iter().enumerate().skip(1) {
        if scores[i] > best_score {
            best = u;
            best_score = scores[i];
        }
    }
    best
}

/// Greedy seed growth at one price under the dynamic size bound, updating
/// `r_global` / `best` exactly as the surrounding price loop does. Returns
/// the per-step trace.
pub(crate) fn greedy_at_price(
    net: &MonetizingNetwork,
    price: Money,
    n: usize,
    r_global: &mut Money,
    best: &mut Option<(Money, NodeSet)>,
    stats: &mut SearchStats,
    selector: &mut dyn SeedSelector,
) -> Result<Vec<GreedyStep>> {
    let mut seeds = NodeSet::new();
    let mut state = ImportanceState::new(net, price, &seeds)?;
    let rev = state.revenue(n);
    stats.groups_evaluated += 1;
    if rev > *r_global {
        *r_global = rev;
        *best = Some((price, seeds.clone()));
    }
    let mut trace = Vec::new();
    while (seeds.len() as f64) < n as f64 - *r_global / price {
        let candidates: Vec<NodeId> = (0..net.node_count())
            .filter(|&v| !state.has_adopted(v))
            .collect();
        if candidates.is_empty() {
            break;
        }
        let chosen = selector.select(&state, &candidates);
        seeds.insert(chosen);
        state = ImportanceState::new(net, price, &seeds)?;
        let rev = state.revenue(n);
        stats.groups_evaluated += 1;
        trace.push(GreedyStep {
            seed: chosen,
            revenue: rev,
        });
        if rev > *r_global {
            *r_global = rev;
            *best = Some((price, seeds.clone()));
        }
    }
    Ok(trace)
}

/// The shared price framework: bound table, descending-bound visit order,
/// stop at the first non-candidate price, greedy seed growth per price.
pub(crate) fn solve_with_selector(
    net: &MonetizingNetwork,
    prices: &PriceSet,
    n: usize,
    selector: &mut dyn SeedSelector,
) -> Result<SolverResult> {
    if n == 0 {
        return Err(Error::InvalidQuantity);
    }
    let start = Instant::now();
    let table = BoundTable::new(net, prices, n);
    let mut stats = SearchStats::default();
    let mut r_global = 0.0f64;
    let mut best: Option<(Money, NodeSet)> = None;
    for (i, entry) in table.entries().iter().enumerate() {
        if entry.bound <= r_global {
            stats.prices_pruned = table.entries().len() - i;
            break;
        }
        stats.prices_examined += 1;
        greedy_at_price(net, entry.price, n, &mut r_global, &mut best, &mut stats, selector)?;
    }
    stats.wall_time = start.elapsed();
    let (p_max, a_max) = best.unwrap_or((0.0, NodeSet::new()));
    Ok(SolverResult {
        p_max,
        a_max,
        revenue: r_global,
        stats,
    })
}

/// The importance-feedback heuristic solver.
pub fn solve_prubif(net: &MonetizingNetwork, prices: &PriceSet, n: usize) -> Result<SolverResult> {
    solve_with_selector(net, prices, n, &mut ImportanceSelector)
}

/// Greedy trace at one fixed price, starting from an already-achieved global
/// revenue `r_start`. Exposes the per-price seed picks for inspection.
pub fn prubif_price_trace(
    net: &MonetizingNetwork,
    price: Money,
    n: usize,
    r_start: Money,
) -> Result<Vec<GreedyStep>> {
    if n == 0 {
        return Err(Error::InvalidQuantity);
    }
    let mut r_global = r_start;
    let mut best = None;
    let mut stats = SearchStats::default();
    greedy_at_price(net, price, n, &mut r_global, &mut best, &mut stats, &mut ImportanceSelector)
}
