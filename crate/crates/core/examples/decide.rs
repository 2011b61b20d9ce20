//! Deciding equations and inequations in the four axiom systems.

use pomsets::term::{decide, parse_term, AxiomSystem, Query};

fn main() {
    let cases = [
        (AxiomSystem::Bsp, "1;a", "a", Query::Eq),
        (AxiomSystem::Bsp, "[[a;b]]", "[a;b]", Query::Eq),
        (AxiomSystem::Cmb, "[a;b]", "a;b", Query::Leq),
        (AxiomSystem::Cmb, "a;b", "[a;b]", Query::Leq),
        (AxiomSystem::Cmb, "(a|b);(c|d)", "a;c|b;d", Query::Leq),
        (AxiomSystem::Bsr, "a;(b+c)", "a;b+a;c", Query::Eq),
        (AxiomSystem::Bsr, "0;a", "0", Query::Eq),
        (AxiomSystem::Csrb, "(a|b);(c|d) + a;c|b;d", "a;c|b;d", Query::Eq),
        (AxiomSystem::Csrb, "a|b", "a;b", Query::Leq),
    ];
    for (system, lhs, rhs, query) in cases {
        let (l, r) = (parse_term(lhs).unwrap(), parse_term(rhs).unwrap());
        let op = match query {
            Query::Eq => "=",
            Query::Leq => "<=",
        };
        let answer = decide(system, &l, &r, query).expect("terms fit the system");
        println!("{system:>4}: {lhs} {op} {rhs}  ->  {answer}");
    }
    let err = decide(
        AxiomSystem::Bsp,
        &parse_term("a+b").unwrap(),
        &parse_term("a").unwrap(),
        Query::Eq,
    );
    println!("bsp with a sum: {}", err.unwrap_err());
}
