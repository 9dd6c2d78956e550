//! File formats: graph TSV, valuation TSV, and the results CSV.
//!
//! Graph files hold one `source<TAB>target<TAB>weight` edge per line; the
//! weight is optional (default 1) and duplicate lines for the same ordered
//! pair sum their weights, the way repeated interaction counts aggregate.
//! Valuation files hold `node<TAB>valuation` lines; nodes absent from the
//! file default to 0. Lines starting with `#` are comments in both.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ConcaveInfluence, Money, MonetizingNetwork, NodeSet};
use crate::prub::SolverResult;

/// Parses an edge list, aggregating duplicate (source, target) lines.
pub fn parse_edge_list(text: &str) -> Result<Vec<(String, String, f64)>> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut weights: HashMap<(String, String), f64> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let source = fields.next().filter(|s| !s.is_empty());
        let target = fields.next().filter(|s| !s.is_empty());
        let (source, target) = match (source, target) {
            (Some(s), Some(t)) => (s.to_string(), t.to_string()),
            _ => {
                return Err(Error::MalformedLine {
                    line: line_no,
                    detail: "expected source<TAB>target[<TAB>weight]".into(),
                })
            }
        };
        let weight = match fields.next() {
            None => 1.0,
            Some(w) => w.parse::<f64>().map_err(|_| Error::MalformedLine {
                line: line_no,
                detail: format!("bad weight '{w}'"),
            })?,
        };
        if fields.next().is_some() {
            return Err(Error::MalformedLine {
                line: line_no,
                detail: "too many fields".into(),
            });
        }
        if weight.is_nan() || weight < 0.0 {
            return Err(Error::NegativeWeightAt { line: line_no });
        }
        let key = (source, target);
        match weights.get_mut(&key) {
            Some(w) => *w += weight,
            None => {
                weights.insert(key.clone(), weight);
                order.push(key);
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|key| {
            let w = weights[&key];
            (key.0, key.1, w)
        })
        .collect())
}

/// Parses `node<TAB>valuation` lines into a label -> valuation map.
pub fn parse_valuations(text: &str) -> Result<HashMap<String, Money>> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let node = fields.next().filter(|s| !s.is_empty());
        let value = fields.next();
        let (node, value) = match (node, value, fields.next()) {
            (Some(n), Some(v), None) => (n.to_string(), v),
            _ => {
                return Err(Error::MalformedLine {
                    line: line_no,
                    detail: "expected node<TAB>valuation".into(),
                })
            }
        };
        let valuation = value.parse::<f64>().map_err(|_| Error::MalformedLine {
            line: line_no,
            detail: format!("bad valuation '{value}'"),
        })?;
        if valuation.is_nan() || valuation < 0.0 {
            return Err(Error::NegativeValuationAt { line: line_no });
        }
        if map.insert(node.clone(), valuation).is_some() {
            return Err(Error::DuplicateNode {
                line: line_no,
                node,
            });
        }
    }
    Ok(map)
}

/// Builds a network from parsed graph text and an optional valuation file.
/// Node order is first appearance in the edge list, then valuation-only
/// nodes in file order.
pub fn network_from_files(
    graph_text: &str,
    valuation_text: Option<&str>,
    influence: ConcaveInfluence,
) -> Result<MonetizingNetwork> {
    let edges = parse_edge_list(graph_text)?;
    let valuations = match valuation_text {
        Some(t) => parse_valuations(t)?,
        None => HashMap::new(),
    };
    let mut labels: Vec<String> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (s, t, _) in &edges {
        for l in [s, t] {
            if seen.insert(l.clone()) {
                labels.push(l.clone());
            }
        }
    }
    if let Some(t) = valuation_text {
        // keep valuation-only nodes, in file order
        for (i, raw) in t.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let node = line.split('\t').next().unwrap_or("").to_string();
            if !node.is_empty() && seen.insert(node.clone()) {
                labels.push(node);
            }
            let _ = i;
        }
    }
    let vals: Vec<Money> = labels
        .iter()
        .map(|l| valuations.get(l).copied().unwrap_or(0.0))
        .collect();
    MonetizingNetwork::build(labels, vals, edges, influence)
}

/// Serializes the graph back to edge-list TSV.
pub fn write_graph_tsv(net: &MonetizingNetwork, out: &mut impl Write) -> Result<()> {
    writeln!(out, "# source\ttarget\tweight")?;
    for (u, v, w) in net.edges() {
        writeln!(out, "{}\t{}\t{}", net.label(u), net.label(v), w)?;
    }
    Ok(())
}

/// Serializes inherent valuations to TSV.
pub fn write_valuations_tsv(net: &MonetizingNetwork, out: &mut impl Write) -> Result<()> {
    writeln!(out, "# node\tvaluation")?;
    for v in 0..net.node_count() {
        writeln!(out, "{}\t{}", net.label(v), net.inherent_valuation(v))?;
    }
    Ok(())
}

/// One solver invocation as a CSV row. The column order is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub solver: String,
    pub n: usize,
    pub n_over_v: f64,
    pub p_max: f64,
    pub revenue: f64,
    /// Seed labels joined with `;`.
    pub seed_set: String,
    pub prices_examined: usize,
    pub prices_pruned: usize,
    pub groups_or_rounds_evaluated: usize,
    pub wall_time_ms: u64,
}

impl ResultRow {
    pub fn from_result(
        net: &MonetizingNetwork,
        solver: &str,
        n: usize,
        res: &SolverResult,
        include_timing: bool,
    ) -> Self {
        ResultRow {
            solver: solver.to_string(),
            n,
            n_over_v: n as f64 / net.node_count() as f64,
            p_max: res.p_max,
            revenue: res.revenue,
            seed_set: seed_set_string(net, &res.a_max),
            prices_examined: res.stats.prices_examined,
            prices_pruned: res.stats.prices_pruned,
            groups_or_rounds_evaluated: res.stats.groups_evaluated,
            wall_time_ms: if include_timing {
                res.stats.wall_time.as_millis() as u64
            } else {
                0
            },
        }
    }
}

pub fn seed_set_string(net: &MonetizingNetwork, seeds: &NodeSet) -> String {
    seeds
        .iter()
        .map(|&v| net.label(v))
        .collect::<Vec<_>>()
        .join(";")
}

/// Writes rows as CSV with the fixed header.
pub fn write_results_csv(rows: &[ResultRow], out: &mut impl Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}
