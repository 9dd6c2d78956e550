//! The monetizing social network: a weighted digraph where every node
//! carries an inherent valuation and accumulated in-influence is turned
//! into extra valuation by a concave function.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Money amounts are plain doubles; tests compare at 1e-9 absolute tolerance.
pub type Money = f64;

/// Dense node index. External string labels are kept in a side map.
pub type NodeId = usize;

/// Deterministically ordered node set; used for seed groups and adopter sets.
pub type NodeSet = std::collections::BTreeSet<NodeId>;

/// Concave function turning summed in-weights into a valuation increment.
///
/// All variants satisfy F(0) = 0, non-decreasing, concave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConcaveInfluence {
    #[default]
    Identity,
    Sqrt,
    Log1p,
}

impl ConcaveInfluence {
    pub fn evaluate(&self, x: f64) -> f64 {
        match self {
            ConcaveInfluence::Identity => x,
            ConcaveInfluence::Sqrt => x.sqrt(),
            ConcaveInfluence::Log1p => x.ln_1p(),
        }
    }
}

impl fmt::Display for ConcaveInfluence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConcaveInfluence::Identity => "identity",
            ConcaveInfluence::Sqrt => "sqrt",
            ConcaveInfluence::Log1p => "log1p",
        };
        f.write_str(s)
    }
}

impl FromStr for ConcaveInfluence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(ConcaveInfluence::Identity),
            "sqrt" => Ok(ConcaveInfluence::Sqrt),
            "log1p" => Ok(ConcaveInfluence::Log1p),
            other => Err(Error::InvalidParams(format!(
                "unknown influence function '{other}' (expected identity, sqrt, or log1p)"
            ))),
        }
    }
}

/// Checks F(0)=0, monotonicity, and midpoint concavity on a sampled grid.
///
/// Arbitrary functions cannot be verified symbolically; 64 sample points over
/// `[0, max_x]` guard against misconfiguration.
pub fn validate_concave(f: impl Fn(f64) -> f64, max_x: f64) -> bool {
    if f(0.0).abs() > 1e-12 {
        return false;
    }
    let hi = if max_x > 0.0 { max_x } else { 1.0 };
    let step = hi / 64.0;
    let eps = 1e-9 * hi.max(1.0);
    let mut prev = f(0.0);
    for i in 1..=64 {
        let x = step * i as f64;
        let y = f(x);
        if y < prev - eps {
            return false;
        }
        prev = y;
    }
    // midpoint test: F((x+y)/2) >= (F(x)+F(y))/2
    for i in 0..63 {
        let x = step * i as f64;
        let y = step * (i + 2) as f64;
        if f((x + y) / 2.0) < (f(x) + f(y)) / 2.0 - eps {
            return false;
        }
    }
    true
}

/// Strictly ascending positive prices, the candidate pricings of the search.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSet {
    prices: Vec<Money>,
}

impl PriceSet {
    pub fn new(prices: Vec<Money>) -> Result<Self> {
        if prices.is_empty() {
            return Err(Error::EmptyPriceSet);
        }
        if prices[0] <= 0.0 || prices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPriceSet);
        }
        Ok(PriceSet { prices })
    }

    /// All integer prices in `[lo, hi]`.
    pub fn integer_range(lo: u64, hi: u64) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidPriceSet);
        }
        Self::new((lo..=hi).map(|p| p as Money).collect())
    }

    pub fn prices(&self) -> &[Money] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone)]
pub struct MonetizingNetwork {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    valuations: Vec<Money>,
    out_edges: Vec<Vec<(NodeId, f64)>>,
    in_edges: Vec<Vec<(NodeId, f64)>>,
    edge_count: usize,
    influence: ConcaveInfluence,
}

/// Builds a validated network.
///
/// `valuations` must cover every node (same order as `nodes`); edges are
/// `(source_label, target_label, weight)` triples.
pub fn build_network(
    nodes: &[&str],
    valuations: &[Money],
    weighted_edges: &[(&str, &str, f64)],
    influence_fn: ConcaveInfluence,
) -> Result<MonetizingNetwork> {
    MonetizingNetwork::build(
        nodes.iter().map(|s| s.to_string()).collect(),
        valuations.to_vec(),
        weighted_edges
            .iter()
            .map(|(u, v, w)| (u.to_string(), v.to_string(), *w))
            .collect(),
        influence_fn,
    )
}

impl MonetizingNetwork {
    pub fn build(
        nodes: Vec<String>,
        valuations: Vec<Money>,
        weighted_edges: Vec<(String, String, f64)>,
        influence_fn: ConcaveInfluence,
    ) -> Result<Self> {
        if valuations.len() != nodes.len() {
            return Err(Error::InvalidParams(format!(
                "{} valuations for {} nodes",
                valuations.len(),
                nodes.len()
            )));
        }
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, label) in nodes.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidParams(format!("duplicate node label '{label}'")));
            }
        }
        for (i, &x) in valuations.iter().enumerate() {
            if x.is_nan() || x < 0.0 {
                return Err(Error::NegativeValuation {
                    node: nodes[i].clone(),
                });
            }
        }
        let n = nodes.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for (from, to, w) in &weighted_edges {
            let u = *index
                .get(from)
                .ok_or_else(|| Error::UnknownNode(from.clone()))?;
            let v = *index
                .get(to)
                .ok_or_else(|| Error::UnknownNode(to.clone()))?;
            if u == v {
                return Err(Error::SelfLoop { node: from.clone() });
            }
            if w.is_nan() || *w < 0.0 {
                return Err(Error::NegativeWeight {
                    from: from.clone(),
                    to: to.clone(),
                });
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge {
                    from: from.clone(),
                    to: to.clone(),
                });
            }
            out_edges[u].push((v, *w));
            in_edges[v].push((u, *w));
        }
        let edge_count = weighted_edges.len();
        let net = MonetizingNetwork {
            labels: nodes,
            index,
            valuations,
            out_edges,
            in_edges,
            edge_count,
            influence: influence_fn,
        };
        let max_in = (0..n)
            .map(|v| net.total_in_weight(v))
            .fold(0.0f64, f64::max);
        if !validate_concave(|x| influence_fn.evaluate(x), max_in) {
            return Err(Error::InvalidInfluence);
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn influence(&self) -> ConcaveInfluence {
        self.influence
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn node_id(&self, label: &str) -> Result<NodeId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn inherent_valuation(&self, v: NodeId) -> Money {
        self.valuations[v]
    }

    pub fn valuations(&self) -> &[Money] {
        &self.valuations
    }

    pub fn out_edges(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.in_edges[v]
    }

    /// Iterates all edges as `(source, target, weight)` in source order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.out_edges
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&(v, w)| (u, v, w)))
    }

    pub fn total_in_weight(&self, v: NodeId) -> f64 {
        self.in_edges[v].iter().map(|&(_, w)| w).sum()
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.labels.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(v.to_string()))
        }
    }

    fn check_nodes<'a>(&self, nodes: impl IntoIterator<Item = &'a NodeId>) -> Result<()> {
        for &v in nodes {
            self.check_node(v)?;
        }
        Ok(())
    }

    /// `v`'s valuation when exactly the nodes of `influencers` exert influence:
    /// chi_v + F(sum of in-weights from the set).
    pub fn valuation_under(&self, v: NodeId, influencers: &NodeSet) -> Result<Money> {
        self.check_node(v)?;
        self.check_nodes(influencers)?;
        let total: f64 = self.in_edges[v]
            .iter()
            .filter(|(u, _)| influencers.contains(u))
            .map(|&(_, w)| w)
            .sum();
        Ok(self.valuations[v] + self.influence.evaluate(total))
    }

    /// The valuation under influence from all in-neighbors; the highest
    /// valuation `v` can ever reach.
    pub fn max_valuation(&self, v: NodeId) -> Result<Money> {
        self.check_node(v)?;
        Ok(self.valuations[v] + self.influence.evaluate(self.total_in_weight(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::demo_net;

    #[test]
    fn demo_shape() {
        let net = demo_net();
        assert_eq!(net.node_count(), 6);
        assert_eq!(net.edge_count(), 12);
    }

    #[test]
    fn single_node_no_edges_is_valid() {
        let net = build_network(&["x"], &[0.0], &[], ConcaveInfluence::Identity).unwrap();
        assert_eq!(net.node_count(), 1);
        assert_eq!(net.edge_count(), 0);
    }

    #[test]
    fn self_loop_rejected() {
        let err = build_network(&["a"], &[1.0], &[("a", "a", 1.0)], ConcaveInfluence::Identity)
            .unwrap_err();
        assert_eq!(err, Error::SelfLoop { node: "a".into() });
    }

    #[test]
    fn duplicate_edge_rejected() {
        let err = build_network(
            &["a", "b"],
            &[1.0, 1.0],
            &[("a", "b", 1.0), ("a", "b", 2.0)],
            ConcaveInfluence::Identity,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { .. }));
    }

    #[test]
    fn negative_inputs_rejected() {
        assert!(matches!(
            build_network(&["a"], &[-1.0], &[], ConcaveInfluence::Identity),
            Err(Error::NegativeValuation { .. })
        ));
        assert!(matches!(
            build_network(
                &["a", "b"],
                &[0.0, 0.0],
                &[("a", "b", -2.0)],
                ConcaveInfluence::Identity
            ),
            Err(Error::NegativeWeight { .. })
        ));
        assert!(matches!(
            build_network(
                &["a", "b"],
                &[0.0, 0.0],
                &[("a", "z", 1.0)],
                ConcaveInfluence::Identity
            ),
            Err(Error::UnknownNode(_))
        ));
    }

    #[test]
    fn valuation_under_demo_net() {
        let net = demo_net();
        let c = net.node_id("c").unwrap();
        let f = net.node_id("f").unwrap();
        let a = net.node_id("a").unwrap();
        let e = net.node_id("e").unwrap();
        // c under {f}: 3 + F(1) = 4
        let s: NodeSet = [f].into_iter().collect();
        assert_eq!(net.valuation_under(c, &s).unwrap(), 4.0);
        // c under {a, e, f}: 3 + F(3+2+1) = 9
        let s: NodeSet = [a, e, f].into_iter().collect();
        assert_eq!(net.valuation_under(c, &s).unwrap(), 9.0);
        // empty set: inherent valuation
        assert_eq!(net.valuation_under(c, &NodeSet::new()).unwrap(), 3.0);
    }

    #[test]
    fn max_valuation_demo_net() {
        let net = demo_net();
        let expect = [("a", 8.0), ("b", 10.0), ("c", 9.0), ("d", 4.0), ("e", 7.0), ("f", 4.0)];
        for (label, x) in expect {
            let v = net.node_id(label).unwrap();
            assert_eq!(net.max_valuation(v).unwrap(), x, "node {label}");
        }
    }

    #[test]
    fn max_valuation_isolated_node() {
        let net = build_network(&["x"], &[5.0], &[], ConcaveInfluence::Identity).unwrap();
        assert_eq!(net.max_valuation(0).unwrap(), 5.0);
    }

    #[test]
    fn concavity_validator() {
        assert!(validate_concave(|x| x, 10.0));
        assert!(validate_concave(|x| x.sqrt(), 10.0));
        assert!(validate_concave(|x| x.ln_1p(), 10.0));
        // convex: fails the midpoint test
        assert!(!validate_concave(|x| x * x, 10.0));
        // F(0) != 0
        assert!(!validate_concave(|x| x + 1.0, 10.0));
        // decreasing
        assert!(!validate_concave(|x| -x, 10.0));
    }

    #[test]
    fn price_set_validation() {
        assert_eq!(PriceSet::new(vec![]).unwrap_err(), Error::EmptyPriceSet);
        assert_eq!(
            PriceSet::new(vec![0.0, 1.0]).unwrap_err(),
            Error::InvalidPriceSet
        );
        assert_eq!(
            PriceSet::new(vec![2.0, 2.0]).unwrap_err(),
            Error::InvalidPriceSet
        );
        let ps = PriceSet::integer_range(1, 10).unwrap();
        assert_eq!(ps.len(), 10);
    }
}
