//! The model checker under the three relations, with witnesses, and set
//! level queries over the runs of a term.

use pomsets::logic::{parse_formula, sat, sat_set_term, Quantifier, Relation, SatMode};
use pomsets::term::{interp_sp, parse_sp_term, parse_term};

fn main() {
    let queries = [
        ("a;(b|c)", "a |> (b || c)"),
        ("a|b", "a |> b"),
        ("a;b", "a || b"),
        ("[a|b]", "[a || b]"),
        ("[a|b]", "a || b"),
        ("a;[b|c]", "<>[<>c]"),
        ("a", "emp"),
    ];
    for (term, formula) in queries {
        let p = interp_sp(&parse_sp_term(term).unwrap());
        let phi = parse_formula(formula).unwrap();
        let verdicts: Vec<String> = Relation::ALL
            .iter()
            .map(|&r| format!("{}:{}", r, sat(&p, &phi, r).unwrap().holds))
            .collect();
        println!("{term:>10} |= {formula:<16} {}", verdicts.join("  "));
    }

    let res = sat(
        &interp_sp(&parse_sp_term("a;[b|c]").unwrap()),
        &parse_formula("<>[<>c]").unwrap(),
        Relation::Iso,
    )
    .unwrap();
    println!("\nwitness: {}", serde_json::to_string(&res.witness).unwrap());

    let e = parse_term("a;(b+c)").unwrap();
    let phi = parse_formula("a |> b").unwrap();
    for q in [Quantifier::All, Quantifier::Some] {
        let holds = sat_set_term(&e, &phi, SatMode::new(Relation::Iso, q)).unwrap();
        println!("a;(b+c) |= a |> b for {q:?} runs: {holds}");
    }
}
