//! The six-vertex running example: two research groups around author D.
//!
//! Vertices A..F are ids 0..5. The edge list is a reconstruction that
//! satisfies every property stated for the example: {A, B, D, E} is a
//! 3-core, C has degree 2 and joins them in a 2-core, and the query
//! `(D, k = 2)` has exactly the communities {B, C, D} (theme r/CM/{ML, AI})
//! and {A, D, E} (theme r/IS/DMS plus r/HW).

use crate::graph::{ProfiledGraph, VertexId};

pub const NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

pub const GPTREE: &str = "\
0 -1 r
1 0 CM
2 1 ML
3 1 AI
4 0 IS
5 4 DMS
6 0 HW
";

pub const EDGES: &str = "\
# A-B A-D A-E B-D B-E D-E B-C C-D E-F
0 1
0 3
0 4
1 3
1 4
3 4
1 2
2 3
4 5
";

pub const PTREES: &str = "\
0: 0,4,5,6
1: 0,1,2,3
2: 0,1,2,3
3: 0,1,2,3,4,5,6
4: 0,4,5,6
5: 0,6
";

pub const VERTEX_NAMES: &str = "0 A\n1 B\n2 C\n3 D\n4 E\n5 F\n";

pub fn graph() -> ProfiledGraph {
    ProfiledGraph::load(EDGES, PTREES, GPTREE).expect("bundled fixture is valid")
}

/// Id of a fixture vertex by its letter. Panics on unknown names.
pub fn vertex(name: &str) -> VertexId {
    NAMES
        .iter()
        .position(|&n| n == name)
        .unwrap_or_else(|| panic!("no fixture vertex {name}")) as VertexId
}
