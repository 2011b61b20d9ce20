//! Graphviz output: covering edges, with boxes drawn as clusters.
//! Usage: `dot_export [term]`.

use pomsets::poset::to_dot;
use pomsets::term::{interp_sp, parse_sp_term};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "print;([rx;ix;wx]|[ry;iy;wy]);print".into());
    let term = parse_sp_term(&text).expect("a series-parallel term");
    print!("{}", to_dot(&interp_sp(&term), "counter"));
}
