//! Independence and the frame rules, including two relations under which
//! the backward direction breaks.

use pomsets::logic::{frame_check, parse_formula, FrameShape, Relation};
use pomsets::term::{interp_sp, parse_sp_term};

fn main() {
    let p = |s: &str| interp_sp(&parse_sp_term(s).unwrap());
    let f = |s: &str| parse_formula(s).unwrap();

    println!("under iso:");
    for shape in FrameShape::ALL {
        let r = frame_check(&p("a;b"), &p("[c]"), &f("c"), &f("a |> b"), shape, Relation::Iso).unwrap();
        println!(
            "  {shape:?}: preconditions {}, local {}, composed {}",
            r.preconditions(),
            r.local,
            r.composed
        );
    }

    println!("counterexamples:");
    let cases = [
        ("a", "[b|[c]]", "<>c", "a || b", Relation::Sub),
        ("a|b", "c", "<>c", "a", Relation::Rev),
    ];
    for (pp, qq, phi, psi, rel) in cases {
        let r = frame_check(&p(pp), &p(qq), &f(phi), &f(psi), FrameShape::Par, rel).unwrap();
        println!(
            "  {rel}: P={pp} Q={qq}: preconditions {}, forward {}, backward {}",
            r.preconditions(),
            r.forward(),
            r.backward()
        );
    }
}
