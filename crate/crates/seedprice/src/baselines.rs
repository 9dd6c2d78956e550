//! Comparison strategies: random and sum-of-weights seed selection, the
//! single-ingredient ablations of the importance heuristic, and the
//! no-social baseline.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Money, MonetizingNetwork, NodeId, PriceSet};
use crate::prub::{SearchStats, SolverResult};
use crate::prubif::{argmax, solve_with_selector, ImportanceState, SeedSelector};

/// Seed-selection strategy for [`solve_baseline`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    /// Uniform choice among non-adopters (seeded rng).
    Random,
    /// Largest raw out-weight sum among non-adopters.
    SumOfWeights,
    /// Normalized weight only: sum of w-hat over all nodes.
    AblationN,
    /// Feedback propagation without buyer filtering: sum of IF over all nodes.
    AblationF,
    /// Buyer filtering without feedback: sum of w-hat over potential buyers.
    AblationP,
    /// No seeding, adoption from inherent valuations only.
    NoSocial,
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StrategyKind::Random => "random",
            StrategyKind::SumOfWeights => "sumweights",
            StrategyKind::AblationN => "ablation-n",
            StrategyKind::AblationF => "ablation-f",
            StrategyKind::AblationP => "ablation-p",
            StrategyKind::NoSocial => "nosocial",
        };
        f.write_str(s)
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(StrategyKind::Random),
            "sumweights" | "sum-of-weights" => Ok(StrategyKind::SumOfWeights),
            "ablation-n" => Ok(StrategyKind::AblationN),
            "ablation-f" => Ok(StrategyKind::AblationF),
            "ablation-p" => Ok(StrategyKind::AblationP),
            "nosocial" => Ok(StrategyKind::NoSocial),
            other => Err(Error::InvalidParams(format!("unknown strategy '{other}'"))),
        }
    }
}

struct RandomSelector {
    rng: ChaCha8Rng,
}

impl SeedSelector for RandomSelector {
    fn select(&mut self, _state: &ImportanceState<'_>, candidates: &[NodeId]) -> NodeId {
        candidates[self.rng.gen_range(0..candidates.len())]
    }
}

struct ScoreSelector<F: Fn(&ImportanceState<'_>, NodeId) -> f64> {
    score: F,
}

impl<F: Fn(&ImportanceState<'_>, NodeId) -> f64> SeedSelector for ScoreSelector<F> {
    fn select(&mut self, state: &ImportanceState<'_>, candidates: &[NodeId]) -> NodeId {
        let scores: Vec<f64> = candidates.iter().map(|&u| (self.score)(state, u)).collect();
        argmax(candidates, &scores)
    }
}

fn out_weight_sum(net: &MonetizingNetwork, u: NodeId) -> f64 {
    net.out_edges(u).iter().map(|&(_, w)| w).sum()
}

fn normalized_weight_sum(state: &ImportanceState<'_>, u: NodeId, buyers_only: bool) -> f64 {
    state
        .network()
        .out_edges(u)
        .iter()
        .filter(|(v, _)| !buyers_only || state.is_potential_buyer(*v))
        .map(|&(v, _)| state.normalized_weight(u, v).expect("nodes in range"))
        .sum()
}

/// Runs the greedy price framework with the given seed-selection strategy.
pub fn solve_baseline(
    net: &MonetizingNetwork,
    prices: &PriceSet,
    n: usize,
    kind: StrategyKind,
    rng_seed: Option<u64>,
) -> Result<SolverResult> {
    match kind {
        StrategyKind::NoSocial => solve_nosocial(net, prices, n),
        StrategyKind::Random => {
            let seed = rng_seed.ok_or(Error::MissingSeedForRandom)?;
            let mut selector = RandomSelector {
                rng: ChaCha8Rng::seed_from_u64(seed),
            };
            solve_with_selector(net, prices, n, &mut selector)
        }
        StrategyKind::SumOfWeights => {
            let mut selector = ScoreSelector {
                score: |state: &ImportanceState<'_>, u| out_weight_sum(state.network(), u),
            };
            solve_with_selector(net, prices, n, &mut selector)
        }
        StrategyKind::AblationN => {
            let mut selector = ScoreSelector {
                score: |state: &ImportanceState<'_>, u| normalized_weight_sum(state, u, false),
            };
            solve_with_selector(net, prices, n, &mut selector)
        }
        StrategyKind::AblationF => {
            let mut selector = ScoreSelector {
                score: |state: &ImportanceState<'_>, u| state.importance_feedback(u).iter().sum(),
            };
            solve_with_selector(net, prices, n, &mut selector)
        }
        StrategyKind::AblationP => {
            let mut selector = ScoreSelector {
                score: |state: &ImportanceState<'_>, u| normalized_weight_sum(state, u, true),
            };
            solve_with_selector(net, prices, n, &mut selector)
        }
    }
}

/// Best revenue when adoption depends on inherent valuations alone and no
/// freebies are handed out: max over p of p * min{n, |{v : chi_v >= p}|}.
pub fn solve_nosocial(net: &MonetizingNetwork, prices: &PriceSet, n: usize) -> Result<SolverResult> {
    if n == 0 {
        return Err(Error::InvalidQuantity);
    }
    let start = Instant::now();
    let mut best_p = 0.0;
    let mut best_rev = 0.0;
    for &p in prices.prices() {
        let buyers = net.valuations().iter().filter(|&&x| x >= p).count();
        let rev = p * n.min(buyers) as Money;
        if rev > best_rev {
            best_rev = rev;
            best_p = p;
        }
    }
    Ok(SolverResult {
        p_max: best_p,
        a_max: Default::default(),
        revenue: best_rev,
        stats: SearchStats {
            prices_examined: prices.len(),
            prices_pruned: 0,
            groups_evaluated: prices.len(),
            wall_time: start.elapsed(),
        },
    })
}
