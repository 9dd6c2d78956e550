//! Canonical example networks shipped with the crate.

use crate::io::network_from_files;
use crate::model::{ConcaveInfluence, MonetizingNetwork};

/// Six-node example: a($2), b($0), c($3), d($1), e($2), f($0), 12 edges.
pub const DEMO_GRAPH: &str = include_str!("../data/demo.tsv");
pub const DEMO_VALUATIONS: &str = include_str!("../data/demo.val");

/// Three-node pricing-exception example: a($1) -> b($3) <- c($3), weights 2.
pub const TINY_GRAPH: &str = include_str!("../data/tiny.tsv");
pub const TINY_VALUATIONS: &str = include_str!("../data/tiny.val");

pub fn demo_net() -> MonetizingNetwork {
    network_from_files(DEMO_GRAPH, Some(DEMO_VALUATIONS), ConcaveInfluence::Identity)
        .expect("demo_net fixture is valid")
}

pub fn tiny_net() -> MonetizingNetwork {
    network_from_files(TINY_GRAPH, Some(TINY_VALUATIONS), ConcaveInfluence::Identity)
        .expect("tiny_net fixture is valid")
}
