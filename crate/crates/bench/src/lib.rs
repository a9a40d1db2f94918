//! Graph fixtures shared by the benchmarks.

use singdelta::{parse_graph, Lattice};

/// Named graphs used across benchmark groups.
pub const FIXTURES: &[(&str, &str)] = &[
    ("cqs_15_11", "cqs:15/11"),
    ("e8", "ade:E8"),
    ("star_5_2", "sf:-2;(2,1),(3,2),(5,2)"),
    ("star_7_3", "sf:-3;(7,3),(2,1),(4,1)"),
    ("four_legs", "sf:-4;(2,1)x4"),
];

pub fn lattice(spec: &str) -> Lattice {
    Lattice::new(&parse_graph(spec).expect("fixture parses")).expect("fixture is negative definite")
}
