//! The two-process counter, with and without boxes around each thread, and
//! the lost-update conflict checked under each relation.

use pomsets::cases::{build_counter, counter_checks, counter_conflict, faulty_counter_run};
use pomsets::logic::{sat, Relation};
use pomsets::term::interp_sp;

fn main() {
    println!("naive program: {}", build_counter(false));
    println!("boxed program: {}", build_counter(true));
    println!("conflict:      {}", counter_conflict());

    let run = interp_sp(&faulty_counter_run());
    for rel in Relation::ALL {
        let res = sat(&run, &counter_conflict(), rel).expect("positive formula");
        println!("faulty run |={} conflict: {}", rel.symbol(), res.holds);
    }

    println!();
    for check in counter_checks().expect("positive formulas") {
        println!("{check}");
    }
}
