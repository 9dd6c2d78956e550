//! Exact search for the optimal (price, seed group) pair, plus the naive
//! brute-force solver used as its testing oracle.
//!
//! The exact solver visits prices in descending order of the per-price
//! revenue upper bound and stops outright at the first price whose bound
//! cannot beat the best revenue found so far. Within a price it enumerates
//! seed groups by ascending size, re-checking the size bound before each
//! size increment.

use std::time::{Duration, Instant};

use crate::cascade::{revenue_of_cascade, run_cascade, seed_size_bound, BoundTable};
use crate::error::{Error, Result};
use crate::model::{Money, MonetizingNetwork, NodeSet, PriceSet};

/// Node-count cap for the brute-force path.
pub const BRUTE_FORCE_NODE_LIMIT: usize = 20;

/// Search counters every solver reports.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub prices_examined: usize,
    pub prices_pruned: usize,
    pub groups_evaluated: usize,
    pub wall_time: Duration,
}

/// The (p_max, A_max) pair found, its revenue, and search counters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub p_max: Money,
    pub a_max: NodeSet,
    pub revenue: Money,
    pub stats: SearchStats,
}

impl SolverResult {
    fn empty() -> Self {
        SolverResult {
            p_max: 0.0,
            a_max: NodeSet::new(),
            revenue: 0.0,
            stats: SearchStats::default(),
        }
    }
}

/// Lexicographic fixed-size combinations over `0..pool`.
fn for_each_combination(pool: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > pool {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + pool - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn eval_group(
    net: &MonetizingNetwork,
    price: Money,
    n: usize,
    group: &NodeSet,
) -> Result<Money> {
    let cascade = run_cascade(net, price, group)?;
    Ok(revenue_of_cascade(price, group.len(), cascade.adopters.len(), n))
}

/// Optimal solver for the quantity-constrained revenue maximization problem.
pub fn solve_prub(net: &MonetizingNetwork, prices: &PriceSet, n: usize) -> Result<SolverResult> {
    if n == 0 {
        return Err(Error::InvalidQuantity);
    }
    let start = Instant::now();
    let table = BoundTable::new(net, prices, n);
    let mut best = SolverResult::empty();
    let mut r_global = 0.0f64;
    let node_count = net.node_count();

    for (i, entry) in table.entries().iter().enumerate() {
        if entry.bound <= r_global {
            // prices are sorted by descending bound: everything from here on
            // is non-candidate pricing
            best.stats.prices_pruned = table.entries().len() - i;
            break;
        }
        best.stats.prices_examined += 1;
        let p = entry.price;

        // the empty seed group is always evaluated
        let empty = NodeSet::new();
        let rev = eval_group(net, p, n, &empty)?;
        best.stats.groups_evaluated += 1;
        if rev > r_global {
            r_global = rev;
            best.p_max = p;
            best.a_max = empty;
            best.revenue = rev;
        }

        let mut size = 1;
        loop {
            match seed_size_bound(n, p, r_global) {
                Some(k) if size <= k && size <= node_count => {}
                _ => break,
            }
            for_each_combination(node_count, size, |group| {
                let group: NodeSet = group.iter().copied().collect();
                let rev = eval_group(net, p, n, &group).expect("nodes are in range");
                best.stats.groups_evaluated += 1;
                if rev > r_global {
                    r_global = rev;
                    best.p_max = p;
                    best.a_max = group;
                    best.revenue = rev;
                }
            });
            size += 1;
        }
    }
    best.stats.wall_time = start.elapsed();
    Ok(best)
}

/// Exhaustive maximization over every price and every seed group of size at
/// most n, with the same canonical visit order as [`solve_prub`] so results
/// match field by field. Guarded to small instances.
pub fn solve_bruteforce(
    net: &MonetizingNetwork,
    prices: &PriceSet,
    n: usize,
) -> Result<SolverResult> {
    if n == 0 {
        return Err(Error::InvalidQuantity);
    }
    let node_count = net.node_count();
    if node_count > BRUTE_FORCE_NODE_LIMIT {
        return Err(Error::InstanceTooLarge {
            nodes: node_count,
            limit: BRUTE_FORCE_NODE_LIMIT,
        });
    }
    let start = Instant::now();
    let table = BoundTable::new(net, prices, n);
    let mut best = SolverResult::empty();
    let mut r_global = 0.0f64;
    for entry in table.entries() {
        best.stats.prices_examined += 1;
        let p = entry.price;
        for size in 0..=n.min(node_count) {
            for_each_combination(node_count, size, |group| {
                let group: NodeSet = group.iter().copied().collect();
                let rev = eval_group(net, p, n, &group).expect("nodes are in range");
                best.stats.groups_evaluated += 1;
                if rev > r_global {
                    r_global = rev;
                    best.p_max = p;
                    best.a_max = group;
                    best.revenue = rev;
                }
            });
        }
    }
    best.stats.wall_time = start.elapsed();
    Ok(best)
}

/// Best seed group at one fixed price, enumerating sizes 0 upward under the
/// dynamic size bound (driven by the best revenue found at this price) and
/// capped at `size_cap`. Reproduces the per-price revenue curve.
pub fn per_price_best(
    net: &MonetizingNetwork,
    price: Money,
    n: usize,
    size_cap: usize,
) -> Result<(NodeSet, Money)> {
    let node_count = net.node_count();
    let mut best_group = NodeSet::new();
    let mut best_rev = eval_group(net, price, n, &best_group)?;
    let mut size = 1;
    loop {
        if size > size_cap || size > node_count || size > n {
            break;
        }
        match seed_size_bound(n, price, best_rev) {
            Some(k) if size <= k => {}
            _ => break,
        }
        for_each_combination(node_count, size, |group| {
            let group: NodeSet = group.iter().copied().collect();
            let rev = eval_group(net, price, n, &group).expect("nodes are in range");
            if rev > best_rev {
                best_rev = rev;
                best_group = group;
            }
        });
        size += 1;
    }
    Ok((best_group, best_rev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{demo_net, tiny_net};

    fn labels(net: &MonetizingNetwork, set: &NodeSet) -> Vec<String> {
        set.iter().map(|&v| net.label(v).to_string()).collect()
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0;
        for_each_combination(5, 0, |c| {
            assert!(c.is_empty());
            count += 1;
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn demo_optimum_n4() {
        let net = demo_net();
        let prices = PriceSet::integer_range(1, 10).unwrap();
        let res = solve_prub(&net, &prices, 4).unwrap();
        assert_eq!(res.p_max, 6.0);
        assert_eq!(labels(&net, &res.a_max), vec!["d"]);
        assert_eq!(res.revenue, 18.0);
    }

    #[test]
    fn demo_optimum_unconstrained() {
        let net = demo_net();
        let prices = PriceSet::integer_range(1, 10).unwrap();
        let res = solve_prub(&net, &prices, 6).unwrap();
        assert_eq!(res.p_max, 7.0);
        assert_eq!(labels(&net, &res.a_max), vec!["d", "f"]);
        assert_eq!(res.revenue, 28.0);
    }

    #[test]
    fn tiny_pricing_exception() {
        let net = tiny_net();
        let prices = PriceSet::integer_range(1, 10).unwrap();
        let res2 = solve_prub(&net, &prices, 2).unwrap();
        assert_eq!((res2.p_max, res2.revenue), (3.0, 6.0));
        assert!(res2.a_max.is_empty());
        let res3 = solve_prub(&net, &prices, 3).unwrap();
        assert_eq!((res3.p_max, res3.revenue), (7.0, 7.0));
        assert_eq!(labels(&net, &res3.a_max), vec!["a", "c"]);
    }

    #[test]
    fn bruteforce_matches_on_demo_net() {
        let net = demo_net();
        let prices = PriceSet::integer_range(1, 10).unwrap();
        let exact = solve_prub(&net, &prices, 4).unwrap();
        let brute = solve_bruteforce(&net, &prices, 4).unwrap();
        assert_eq!(brute.revenue, 18.0);
        assert_eq!(exact.p_max, brute.p_max);
        assert_eq!(exact.a_max, brute.a_max);
    }

    #[test]
    fn bruteforce_single_node() {
        let net = crate::model::build_network(
            &["x"],
            &[5.0],
            &[],
            crate::model::ConcaveInfluence::Identity,
        )
        .unwrap();
        let prices = PriceSet::new(vec![5.0]).unwrap();
        let res = solve_bruteforce(&net, &prices, 1).unwrap();
        assert_eq!((res.p_max, res.revenue), (5.0, 5.0));
        assert!(res.a_max.is_empty());
    }

    #[test]
    fn bruteforce_guard() {
        let labels: Vec<String> = (0..21).map(|i| format!("v{i}")).collect();
        let net = MonetizingNetwork::build(
            labels,
            vec![0.0; 21],
            vec![],
            crate::model::ConcaveInfluence::Identity,
        )
        .unwrap();
        let prices = PriceSet::new(vec![1.0]).unwrap();
        assert!(matches!(
            solve_bruteforce(&net, &prices, 1),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn per_price_curve_not_single_peaked() {
        let net = demo_net();
        let (g6, r6) = per_price_best(&net, 6.0, 4, 4).unwrap();
        let (g7, r7) = per_price_best(&net, 7.0, 4, 4).unwrap();
        let (_g8, r8) = per_price_best(&net, 8.0, 4, 4).unwrap();
        assert_eq!((r6, r7, r8), (18.0, 14.0, 16.0));
        assert_eq!(labels(&net, &g6), vec!["d"]);
        // the maximum at 7 is shared by several groups; the reported one
        // must replay to the same revenue
        assert_eq!(crate::cascade::revenue(&net, 4, 7.0, &g7).unwrap(), 14.0);
    }

    #[test]
    fn accounting_adds_up() {
        let net = demo_net();
        let prices = PriceSet::integer_range(1, 10).unwrap();
        let res = solve_prub(&net, &prices, 4).unwrap();
        assert_eq!(
            res.stats.prices_examined + res.stats.prices_pruned,
            prices.len()
        );
    }

    #[test]
    fn zero_quantity_rejected() {
        let net = demo_net();
        let prices = PriceSet::integer_range(1, 10).unwrap();
        assert!(matches!(
            solve_prub(&net, &prices, 0),
            Err(Error::InvalidQuantity)
        ));
    }
}
