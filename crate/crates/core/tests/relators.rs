use orbit_braid::combing::Comber;
use orbit_braid::presentation::{artin_presentation, orbit_presentation, Presentation};
use orbit_braid::word::{Letter, Word};

// Every relator combs to the identity, also when sandwiched next to a letter.
fn relators_comb_trivially(p: &Presentation) {
    let c = Comber::for_presentation(p).unwrap();
    for r in &p.relators {
        assert!(c.is_identity(r).unwrap(), "relator {r} is not trivial");
        for &g in &p.generators {
            for e in [1, -1] {
                let u = Word::letter(Letter::new(g, e));
                let expected = c.comb(&u).unwrap();
                assert_eq!(c.comb(&u.concat(r)).unwrap(), expected, "{u} · {r}");
                assert_eq!(c.comb(&r.concat(&u)).unwrap(), expected, "{r} · {u}");
            }
        }
    }
}

#[test]
fn orbit_relators_are_trivial() {
    for n in 1..=4 {
        relators_comb_trivially(&orbit_presentation(n).unwrap());
    }
}

#[test]
fn artin_relators_are_trivial() {
    for n in 1..=5 {
        relators_comb_trivially(&artin_presentation(n).unwrap());
    }
}
