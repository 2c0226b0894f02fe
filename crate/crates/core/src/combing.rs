//! Normal forms in the semidirect-product towers of G_n and P_n.
//!
//! An element is written uniquely as `w_n · w_{n−1} ⋯ w_1` where `w_j` is a
//! reduced word in the level-j free kernel. Lower-level letters are moved to
//! the right through higher ones using `x · y = (x y x⁻¹) · x`, with the
//! conjugation `x y x⁻¹` read off the relations of the presentation.

use std::collections::HashMap;
use std::fmt;

use crate::automorphism::{invert_local, push_local, FreeAutomorphism, LocalWord};
use crate::error::{invalid, Error, Result};
use crate::presentation::{
    artin_inverse_action_rhs, element_theta, orbit_action_rhs_with, Presentation, RelationSet, TowerKind,
    TowerSpec,
};
use crate::word::{Generator, Letter, Word};

pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// `levels[j - 1]` is the level-j component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    levels: Vec<Word>,
}

impl NormalForm {
    pub fn height(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn level(&self, j: u32) -> &Word {
        &self.levels[j as usize - 1]
    }

    /// Components from the top level down.
    pub fn components(&self) -> impl Iterator<Item = (u32, &Word)> {
        self.levels.iter().enumerate().rev().map(|(k, w)| (k as u32 + 1, w))
    }

    pub fn is_identity(&self) -> bool {
        self.levels.iter().all(Word::is_identity)
    }

    /// The word `w_n ⋯ w_1`.
    pub fn flatten(&self) -> Word {
        crate::word::product(self.levels.iter().rev())
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (level, w)) in self.components().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            if w.is_identity() {
                write!(f, "level {level}: 1")?;
            } else {
                write!(f, "level {level}: {w}")?;
            }
        }
        Ok(())
    }
}

/// Conjugation of a level by a lower generator: `x g x⁻¹` and `x⁻¹ g x`.
#[derive(Debug)]
struct Action {
    forward: FreeAutomorphism,
    backward: FreeAutomorphism,
}

/// Combing engine for one tower. Immutable after construction, so it can be
/// shared freely between threads.
#[derive(Debug)]
pub struct Comber {
    tower: TowerSpec,
    // actions[k - 1][actor]; actors acting trivially are absent
    actions: Vec<HashMap<Generator, Action>>,
    word_cap: usize,
}

impl Comber {
    pub fn new(tower: TowerSpec) -> Result<Self> {
        Self::with_cap(tower, DEFAULT_WORD_CAP)
    }

    pub fn for_presentation(p: &Presentation) -> Result<Self> {
        let tower = p.tower.clone().ok_or_else(|| invalid("presentation has no tower"))?;
        Self::new(tower)
    }

    pub fn with_cap(tower: TowerSpec, word_cap: usize) -> Result<Self> {
        Self::with_options(tower, RelationSet::Consistent, word_cap)
    }

    /// Fails with [`Error::NotAnAutomorphism`] when the relation set does not
    /// define an action by automorphisms on some level.
    pub fn with_options(tower: TowerSpec, relations: RelationSet, word_cap: usize) -> Result<Self> {
        if word_cap == 0 {
            return Err(invalid("word cap must be positive"));
        }
        let mut actions = Vec::with_capacity(tower.levels.len());
        for k in 1..=tower.height() {
            let mut table = HashMap::new();
            for j in 1..k {
                for &actor in tower.alphabet(j) {
                    let given = FreeAutomorphism {
                        images: tower
                            .alphabet(k)
                            .iter()
                            .map(|&target| given_action(tower.kind, relations, actor, target).map(|w| to_local(&tower, k, &w)))
                            .collect::<Result<Vec<_>>>()?,
                    };
                    if given.is_identity() {
                        continue;
                    }
                    let other = given.invert().ok_or(Error::NotAnAutomorphism { level: k })?;
                    let action = match tower.kind {
                        TowerKind::Orbit => Action { forward: given, backward: other },
                        TowerKind::Artin => Action { forward: other, backward: given },
                    };
                    table.insert(actor, action);
                }
            }
            actions.push(table);
        }
        Ok(Comber { tower, actions, word_cap })
    }

    pub fn tower(&self) -> &TowerSpec {
        &self.tower
    }

    pub fn word_cap(&self) -> usize {
        self.word_cap
    }

    fn locate(&self, g: Generator) -> Result<(u32, usize)> {
        self.tower.locate(g).ok_or(Error::UnknownGenerator(g))
    }

    fn check_cap(&self, len: usize) -> Result<()> {
        if len > self.word_cap {
            Err(Error::WordSizeExceeded { len, cap: self.word_cap })
        } else {
            Ok(())
        }
    }

    fn action(&self, actor: Letter, level: u32) -> Option<&FreeAutomorphism> {
        self.actions[level as usize - 1]
            .get(&actor.generator)
            .map(|a| if actor.inverse { &a.backward } else { &a.forward })
    }

    /// `actor · target · actor⁻¹` written in the target's level.
    pub fn conjugation_action(&self, actor: Letter, target: Letter) -> Result<Word> {
        let (j, _) = self.locate(actor.generator)?;
        let (k, idx) = self.locate(target.generator)?;
        if j >= k {
            return Err(invalid(format!("actor {} must lie below target {}", actor.generator, target.generator)));
        }
        let x = local_letter(idx, target.inverse);
        let image = match self.action(actor, k) {
            Some(a) => a.apply(&[x]),
            None => vec![x],
        };
        Ok(from_local(&self.tower, k, &image))
    }

    /// Unique normal form of `w`.
    pub fn comb(&self, w: &Word) -> Result<NormalForm> {
        let height = self.tower.height();
        let mut rest: Vec<(u32, usize, Letter)> = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let (level, idx) = self.locate(l.generator)?;
            rest.push((level, idx, l));
        }
        let mut levels = vec![Word::identity(); height as usize];
        for k in (1..=height).rev() {
            // Scanning from the right, `inv` holds the inverse of the level-k
            // kernel of the suffix read so far; a lower letter x acts on the
            // suffix kernel K by K ↦ x K x⁻¹, and φ(K)⁻¹ = φ(K⁻¹).
            let mut inv: LocalWord = Vec::new();
            let mut lower: Vec<(u32, usize, Letter)> = Vec::new();
            for (level, idx, l) in rest.into_iter().rev() {
                if level == k {
                    push_local(&mut inv, -local_letter(idx, l.inverse));
                    self.check_cap(inv.len())?;
                    continue;
                }
                match lower.last() {
                    Some(&(_, _, next)) if next == l.inv() => {
                        lower.pop();
                    }
                    _ => lower.push((level, idx, l)),
                }
                if let Some(a) = self.action(l, k) {
                    inv = a.apply(&inv);
                    self.check_cap(inv.len())?;
                }
            }
            levels[k as usize - 1] = from_local(&self.tower, k, &invert_local(&inv));
            lower.reverse();
            rest = lower;
        }
        Ok(NormalForm { levels })
    }

    /// Literal rewriting `x · y → (x y x⁻¹) · x` at the rightmost adjacent
    /// pair with level(x) < level(y). Slow; kept as an independent route to
    /// the normal form.
    pub fn comb_by_rewriting(&self, w: &Word) -> Result<NormalForm> {
        let mut letters: Vec<Letter> = w.letters().to_vec();
        for l in &letters {
            self.locate(l.generator)?;
        }
        let level = |l: &Letter| self.tower.level_of(l.generator).expect("checked");
        loop {
            let pos = (0..letters.len().saturating_sub(1)).rev().find(|&p| level(&letters[p]) < level(&letters[p + 1]));
            let Some(p) = pos else { break };
            let x = letters[p];
            let image = self.conjugation_action(x, letters[p + 1])?;
            let mut next: Vec<Letter> = Vec::with_capacity(letters.len() + image.len());
            next.extend_from_slice(&letters[..p]);
            next.extend_from_slice(image.letters());
            next.push(x);
            next.extend_from_slice(&letters[p + 2..]);
            letters = Word::reduce(next).into_letters();
            self.check_cap(letters.len())?;
        }
        let mut levels = vec![Vec::new(); self.tower.height() as usize];
        for l in letters {
            levels[level(&l) as usize - 1].push(l);
        }
        Ok(NormalForm { levels: levels.into_iter().map(Word::reduce).collect() })
    }

    pub fn words_equal(&self, u: &Word, v: &Word) -> Result<bool> {
        Ok(self.comb(u)? == self.comb(v)?)
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.comb(w)?.is_identity())
    }

    /// Splits `w = Θ_n^e · r` with `r` in the kernel of the exponent sum of
    /// ρ_{1,0}, which is a homomorphism to ℤ taking Θ_n to 1.
    pub fn theta_decompose(&self, w: &Word) -> Result<(i64, Word)> {
        if self.tower.kind != TowerKind::Orbit {
            return Err(invalid("theta decomposition needs the orbit tower"));
        }
        for g in w.generators() {
            self.locate(g)?;
        }
        let theta = element_theta(self.tower.height())?;
        let e = w.exponent_sum(Generator::rho(1, 0));
        Ok((e, theta.pow(-e).concat(w)))
    }

    /// Centrality of Θ_n and non-commuting witnesses for every other generator.
    pub fn center_check(&self, witness_budget: usize) -> Result<CenterReport> {
        if self.tower.kind != TowerKind::Orbit {
            return Err(invalid("center check needs the orbit tower"));
        }
        let n = self.tower.height();
        let theta = element_theta(n)?;
        let gens = self.tower.generators();
        let mut commutes = Vec::with_capacity(gens.len());
        for &g in &gens {
            let gw = Word::gen(g);
            let conj = theta.conjugate(&gw);
            commutes.push((g, self.comb(&conj)? == self.comb(&gw)?));
        }
        let mut witnesses = Vec::new();
        for &g in &gens {
            let gw = Word::gen(g);
            let e = gw.exponent_sum(Generator::rho(1, 0));
            if self.words_equal(&gw, &theta.pow(e))? {
                continue;
            }
            let mut found = None;
            for &h in gens.iter().filter(|&&h| h != g).take(witness_budget) {
                let hw = Word::gen(h);
                if !self.words_equal(&gw.concat(&hw), &hw.concat(&gw))? {
                    found = Some(h);
                    break;
                }
            }
            witnesses.push((g, found));
        }
        Ok(CenterReport { n, theta_commutes: commutes, witnesses })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReport {
    pub n: u32,
    /// Whether Θ_n g Θ_n⁻¹ combs to g.
    pub theta_commutes: Vec<(Generator, bool)>,
    /// Generators that are not powers of Θ_n, with a non-commuting generator
    /// if one was found within budget.
    pub witnesses: Vec<(Generator, Option<Generator>)>,
}

impl CenterReport {
    pub fn passed(&self) -> bool {
        self.theta_commutes.iter().all(|&(_, ok)| ok) && self.witnesses.iter().all(|(_, w)| w.is_some())
    }
}

fn given_action(kind: TowerKind, relations: RelationSet, actor: Generator, target: Generator) -> Result<Word> {
    match (kind, actor, target) {
        (TowerKind::Orbit, Generator::Rho { j, i }, Generator::Rho { j: k, i: l }) => {
            orbit_action_rhs_with(relations, j, i, k, l)
        }
        (TowerKind::Artin, Generator::Artin { i: r, j: s }, Generator::Artin { i, j }) => {
            artin_inverse_action_rhs(r, s, i, j)
        }
        _ => Err(invalid(format!("no action of {actor} on {target}"))),
    }
}

fn local_letter(idx: usize, inverse: bool) -> i32 {
    let x = idx as i32 + 1;
    if inverse {
        -x
    } else {
        x
    }
}

fn to_local(tower: &TowerSpec, level: u32, w: &Word) -> LocalWord {
    w.letters()
        .iter()
        .map(|l| {
            let (lv, idx) = tower.locate(l.generator).expect("relation letters lie in the tower");
            debug_assert_eq!(lv, level);
            local_letter(idx, l.inverse)
        })
        .collect()
}

fn from_local(tower: &TowerSpec, level: u32, w: &[i32]) -> Word {
    let alphabet = tower.alphabet(level);
    Word::reduce(w.iter().map(|&x| {
        let g = alphabet[x.unsigned_abs() as usize - 1];
        if x > 0 {
            Letter::pos(g)
        } else {
            Letter::neg(g)
        }
    }))
}

/// (q_n)_#: deletes every letter of level n.
pub fn project_qn(w: &Word, n: u32) -> Result<Word> {
    if n < 2 {
        return Err(invalid("projection q_n needs n >= 2"));
    }
    Ok(w.filter(|g| match *g {
        Generator::Rho { j, .. } | Generator::Artin { j, .. } => j != n,
        Generator::Surface { .. } => true,
    }))
}

/// (s_n)_#: the inclusion G_{n−1} → G_n, identity on symbols.
pub fn section_sn(w: &Word) -> Word {
    w.clone()
}

/// (s′_n)_#: ρ_{n−1,0} ↦ ρ_{n−1,0} ρ_{n,0}, every other generator fixed.
pub fn section_sprime(w: &Word, n: u32) -> Result<Word> {
    if n < 2 {
        return Err(invalid("section s'_n needs n >= 2"));
    }
    let top = Generator::rho(n - 1, 0);
    let image = Word::gen(top).concat(&Word::gen(Generator::rho(n, 0)));
    w.substitute(|g| Ok(if g == top { image.clone() } else { Word::gen(g) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{artin_presentation, element_c, element_full_twist, orbit_presentation};

    fn r(j: u32, i: u32) -> Generator {
        Generator::rho(j, i)
    }

    fn comber(n: u32) -> Comber {
        Comber::for_presentation(&orbit_presentation(n).unwrap()).unwrap()
    }

    #[test]
    fn action_examples() {
        let c = comber(3);
        assert_eq!(c.conjugation_action(Letter::pos(r(1, 0)), Letter::pos(r(2, 0))).unwrap(), Word::gen(r(2, 0)));
        assert_eq!(
            c.conjugation_action(Letter::pos(r(1, 0)), Letter::pos(r(2, 1))).unwrap(),
            element_c(2, 1).unwrap()
        );
        assert_eq!(
            c.conjugation_action(Letter::pos(r(2, 1)), Letter::pos(r(3, 1))).unwrap().to_string(),
            "r(3,2)^-1 r(3,1) r(3,2)"
        );
        assert!(c.conjugation_action(Letter::pos(r(2, 1)), Letter::pos(r(2, 0))).is_err());
        assert!(c.conjugation_action(Letter::pos(r(3, 1)), Letter::pos(r(2, 0))).is_err());
    }

    #[test]
    fn inverse_action_undoes_forward() {
        let c = comber(4);
        for &x in &c.tower().generators() {
            for &y in &c.tower().generators() {
                let (j, k) = (c.tower().level_of(x).unwrap(), c.tower().level_of(y).unwrap());
                if j >= k {
                    continue;
                }
                let fwd = c.conjugation_action(Letter::pos(x), Letter::pos(y)).unwrap();
                let back = fwd
                    .substitute(|g| c.conjugation_action(Letter::neg(x), Letter::pos(g)))
                    .unwrap();
                assert_eq!(back, Word::gen(y));
            }
        }
    }

    #[test]
    fn comb_examples() {
        let c = comber(2);
        let nf = c.comb(&"r(1,0) r(2,0)".parse().unwrap()).unwrap();
        assert_eq!(nf.level(2), &Word::gen(r(2, 0)));
        assert_eq!(nf.level(1), &Word::gen(r(1, 0)));
        assert_eq!(nf.to_string(), "level 2: r(2,0)\nlevel 1: r(1,0)");
        assert!(c.comb(&Word::identity()).unwrap().is_identity());

        let c3 = comber(3);
        let theta = element_theta(3).unwrap();
        let g = Word::gen(r(3, 1));
        assert_eq!(c3.comb(&theta.conjugate(&g)).unwrap(), c3.comb(&g).unwrap());
        assert!(c3.comb(&Word::gen(Generator::artin(1, 2))).is_err());
    }

    #[test]
    fn words_equal_examples() {
        let c = comber(2);
        assert!(!c.words_equal(&Word::identity(), &Word::gen(r(1, 0))).unwrap());
        let theta = element_theta(2).unwrap();
        let g = Word::gen(r(2, 1));
        assert!(c.words_equal(&theta.concat(&g), &g.concat(&theta)).unwrap());
    }

    #[test]
    fn projections_and_sections() {
        for n in 2..=5 {
            assert_eq!(project_qn(&element_theta(n).unwrap(), n).unwrap(), element_theta(n - 1).unwrap());
            assert!(project_qn(&Word::gen(r(n, 3.min(2 * n - 2))), n).unwrap().is_identity());
        }
        let w: Word = "r(1,0) r(4,0) r(2,1)".parse().unwrap();
        assert_eq!(project_qn(&w, 4).unwrap().to_string(), "r(1,0) r(2,1)");
        assert!(project_qn(&w, 1).is_err());
        assert_eq!(section_sn(&Word::gen(r(2, 1))), Word::gen(r(2, 1)));
        let c = comber(3);
        let s = section_sprime(&element_theta(2).unwrap(), 3).unwrap();
        assert!(c.words_equal(&s, &element_theta(3).unwrap()).unwrap());
    }

    #[test]
    fn theta_decompose_examples() {
        let c = comber(2);
        let theta = element_theta(2).unwrap();
        let (e, rest) = c.theta_decompose(&theta.pow(3)).unwrap();
        assert_eq!(e, 3);
        assert!(rest.is_identity());
        let (e, rest) = c.theta_decompose(&Word::gen(r(2, 1))).unwrap();
        assert_eq!((e, rest), (0, Word::gen(r(2, 1))));
        let w = theta.concat(&Word::gen(r(2, 1)));
        let (e, rest) = c.theta_decompose(&w).unwrap();
        assert_eq!(e, 1);
        assert!(c.words_equal(&rest, &Word::gen(r(2, 1))).unwrap());
    }

    #[test]
    fn center_small_cases() {
        let rep = comber(1).center_check(10).unwrap();
        assert!(rep.passed());
        assert!(rep.witnesses.is_empty());

        let rep = comber(2).center_check(10).unwrap();
        assert!(rep.passed());
        let w = rep.witnesses.iter().find(|(g, _)| *g == r(1, 0)).unwrap();
        assert!(w.1.is_some());
        // ρ_{1,0} ρ_{2,1} ρ_{1,0}⁻¹ = C_{2,1} differs from ρ_{2,1}
        let c = comber(2);
        assert_ne!(
            c.comb(&element_c(2, 1).unwrap()).unwrap(),
            c.comb(&Word::gen(r(2, 1))).unwrap()
        );
    }

    #[test]
    fn full_twist_is_central_in_pn() {
        for n in 2..=5 {
            let p = artin_presentation(n).unwrap();
            let c = Comber::for_presentation(&p).unwrap();
            let twist = element_full_twist(n).unwrap();
            for &g in &p.generators {
                let gw = Word::gen(g);
                assert_eq!(c.comb(&twist.conjugate(&gw)).unwrap(), c.comb(&gw).unwrap(), "n={n} g={g}");
            }
        }
    }

    #[test]
    fn printed_relation_is_not_an_automorphism() {
        let err = Comber::with_options(TowerSpec::orbit(3), RelationSet::AsPrinted, DEFAULT_WORD_CAP).unwrap_err();
        assert_eq!(err, Error::NotAnAutomorphism { level: 3 });
        assert!(Comber::with_options(TowerSpec::orbit(2), RelationSet::AsPrinted, DEFAULT_WORD_CAP).is_ok());
    }

    #[test]
    fn word_cap_is_enforced() {
        let c = Comber::with_cap(TowerSpec::orbit(3), 4).unwrap();
        let w: Word = "r(3,1) r(3,2) r(3,3) r(3,4) r(3,1)".parse().unwrap();
        assert!(matches!(c.comb(&w), Err(Error::WordSizeExceeded { cap: 4, .. })));
        assert!(Comber::with_cap(TowerSpec::orbit(2), 0).is_err());
    }
}
