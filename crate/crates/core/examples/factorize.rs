//! Splitting a subsumption into a step that only adds order and a step that
//! only adds boxes, in both orders.

use pomsets::poset::{factorize_subsumption, find_homomorphism, HomMode, Poset};
use pomsets::term::{interp_sp, parse_sp_term};

fn p(s: &str) -> Poset {
    interp_sp(&parse_sp_term(s).unwrap())
}

fn main() {
    for (lower, upper) in [
        ("[a;b]", "a|b"),
        ("[a];[b]", "a|b"),
        ("(a|b);(c|d)", "a;c|b;d"),
        ("a;b", "b;a"),
    ] {
        let (lo, up) = (p(lower), p(upper));
        match factorize_subsumption(&lo, &up) {
            Some((r1, r2)) => {
                println!("{lower} <= {upper}");
                println!(
                    "  via {}: order of the upper poset, boxes of the lower",
                    r1.to_json()
                );
                println!(
                    "  via {}: order of the lower poset, boxes of the upper",
                    r2.to_json()
                );
                let ok = find_homomorphism(&r1, &lo, HomMode::BoxReflecting).is_some()
                    && find_homomorphism(&up, &r1, HomMode::OrderReflecting).is_some()
                    && find_homomorphism(&r2, &lo, HomMode::OrderReflecting).is_some()
                    && find_homomorphism(&up, &r2, HomMode::BoxReflecting).is_some();
                println!("  witnesses check out: {ok}");
            }
            None => println!("{lower} is not subsumed by {upper}"),
        }
    }
}
