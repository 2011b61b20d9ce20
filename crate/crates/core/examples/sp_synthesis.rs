//! Recognising series-parallel posets and reading a term back off them.

use pomsets::poset::{iso, EventSet, Label, Poset};
use pomsets::term::{interp_sp, parse_sp_term, sp_check, synthesize_term};

fn poset(labels: &str, edges: &[(usize, usize)], boxes: &[&[usize]]) -> Poset {
    let labels = labels.split_whitespace().map(Label::from).collect();
    let boxes = boxes.iter().map(|b| EventSet::from_events(b.iter().copied()));
    Poset::from_parts(labels, edges.iter().copied(), boxes).unwrap()
}

fn main() {
    let counter = interp_sp(&parse_sp_term("print;([rx;ix;wx]|[ry;iy;wy]);print").unwrap());
    let samples = [
        ("counter", counter),
        ("N shape", poset("a b c d", &[(0, 2), (1, 2), (1, 3)], &[])),
        ("overlapping boxes", poset("a b c", &[], &[&[0, 1], &[1, 2]])),
        ("box entered from outside", poset("a b c", &[(0, 1)], &[&[1, 2]])),
        (
            "reads before writes",
            poset("rx ry wx wy", &[(0, 2), (0, 3), (1, 2), (1, 3)], &[]),
        ),
    ];
    for (name, p) in samples {
        match synthesize_term(&p) {
            Some(t) => {
                println!("{name}: {t}  (round trip {})", iso(&interp_sp(&t), &p));
            }
            None => println!(
                "{name}: {}",
                sp_check(&p).expect("a pattern explains the failure")
            ),
        }
    }
}
