#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use pomsets::poset::{strengthenings, weakenings, Poset};
use pomsets::term::SpTerm;
use pomsets::testkit::{GenConfig, Generator};

pub fn generator(seed: u64) -> Generator {
    Generator::new(GenConfig {
        seed,
        ..GenConfig::default()
    })
}

/// A random rewrite of `s`. Some steps preserve the poset up to
/// isomorphism, some only up to subsumption, and some change it outright,
/// so pairs `(s, mutate(s))` exercise both answers of every decision.
pub fn mutate(s: &SpTerm, rng: &mut ChaCha8Rng) -> SpTerm {
    let step = rng.gen_range(0..10);
    match (step, s) {
        (0, SpTerm::Par(a, b)) => SpTerm::Par(b.clone(), a.clone()),
        (1, SpTerm::Seq(a, b)) => SpTerm::Par(a.clone(), b.clone()),
        (2, SpTerm::Box(a)) => (**a).clone(),
        (3, _) => s.clone().boxed(),
        (4, SpTerm::Seq(a, b)) => match &**a {
            SpTerm::Seq(x, y) => SpTerm::Seq(x.clone(), Box::new(SpTerm::Seq(y.clone(), b.clone()))),
            _ => SpTerm::Seq(b.clone(), a.clone()),
        },
        (5, _) => SpTerm::One.seq(s.clone()),
        (6, SpTerm::Seq(a, b)) => mutate(a, rng).seq(mutate(b, rng)),
        (6, SpTerm::Par(a, b)) => mutate(a, rng).par(mutate(b, rng)),
        (6, SpTerm::Box(a)) => mutate(a, rng).boxed(),
        (7, SpTerm::Atom(_)) => SpTerm::Atom("a".into()),
        (8, SpTerm::Seq(a, b)) => SpTerm::Seq(Box::new(mutate(a, rng)), b.clone()),
        (8, SpTerm::Par(a, b)) => SpTerm::Par(a.clone(), Box::new(mutate(b, rng))),
        _ => s.clone(),
    }
}

/// A random poset `Q` with `P ⊑ Q`.
pub fn random_weakening(p: &Poset, rng: &mut ChaCha8Rng) -> Poset {
    weakenings(p)
        .choose(rng)
        .cloned()
        .expect("P is its own weakening")
}

/// A random poset `Q` with `Q ⊑ P`.
pub fn random_strengthening(p: &Poset, rng: &mut ChaCha8Rng) -> Poset {
    strengthenings(p, 1)
        .choose(rng)
        .cloned()
        .expect("P is its own strengthening")
}

/// `p` with its events renumbered at random.
pub fn shuffled(p: &Poset, rng: &mut ChaCha8Rng) -> Poset {
    let mut perm: Vec<usize> = (0..p.len()).collect();
    perm.shuffle(rng);
    p.permute(&perm)
}
