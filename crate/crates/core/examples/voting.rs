//! The voting protocol: conflicts, sequential separation, vote-then-send and
//! the local frame argument. Usage: `voting [voters] [counters]`.

use std::time::Instant;

use pomsets::cases::{voting_checks, Voting};
use pomsets::term::{interp, render_term};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("a count"));
    let voters = args.next().unwrap_or(2);
    let counters = args.next().unwrap_or(2);
    let v = Voting::new(voters, counters).expect("at least one voter and one counter");

    println!("protocol: {}", render_term(&v.process()));
    println!("runs:     {}", interp(&v.process()).len());
    println!("seqsep:   {}", v.seqsep());
    println!();

    let start = Instant::now();
    let checks = voting_checks(&v).expect("well-formed formulas");
    for check in &checks {
        println!("{check}");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    println!(
        "\n{} checks, {failed} failed, {:.2?}",
        checks.len(),
        start.elapsed()
    );
}
