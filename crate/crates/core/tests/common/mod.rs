#![allow(dead_code)]

use std::path::PathBuf;

use prism_core::{build_hypergraph, parse_database, LabeledHypergraph, NodeId};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> LabeledHypergraph {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    build_hypergraph(&parse_database(&text).expect("fixture parses"))
}

pub fn hg(text: &str) -> LabeledHypergraph {
    build_hypergraph(&parse_database(text).expect("valid database"))
}

pub fn node(h: &LabeledHypergraph, name: &str) -> NodeId {
    h.find_node(name).unwrap_or_else(|| panic!("no node {name}"))
}

/// Member name sets, each sorted, in sorted order.
pub fn name_sets(h: &LabeledHypergraph, sets: &[Vec<NodeId>]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = sets
        .iter()
        .map(|s| {
            let mut v: Vec<String> = s.iter().map(|&n| h.node_name(n).to_owned()).collect();
            v.sort();
            v
        })
        .collect();
    out.sort();
    out
}

pub fn strs(sets: &[&[&str]]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = sets
        .iter()
        .map(|s| {
            let mut v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            v.sort();
            v
        })
        .collect();
    out.sort();
    out
}
