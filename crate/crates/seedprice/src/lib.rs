//! Revenue maximization with a quantity constraint on monetizing social
//! networks.
//!
//! A monetizing social network is a weighted digraph whose nodes carry
//! inherent valuations; adopting neighbors raise a node's valuation through
//! a concave influence function, and a node adopts once its valuation
//! reaches the commodity price. Given a price set and a limited stock, the
//! solvers pick the price and the free-sample seed group maximizing revenue:
//! exactly via bound-driven enumeration ([`prub::solve_prub`]) or greedily
//! via pricing-sensitive importance ([`prubif::solve_prubif`]), with
//! comparison baselines and a benchmark harness behind the `seedprice` CLI.

pub mod baselines;
pub mod cascade;
pub mod cli;
pub mod datagen;
mod error;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod prub;
pub mod prubif;

pub use error::{Error, Result};
pub use model::{ConcaveInfluence, Money, MonetizingNetwork, NodeId, NodeSet, PriceSet};
pub use prub::{SearchStats, SolverResult};
