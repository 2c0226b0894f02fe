//! Presentations of the orbit configuration group G_n and of the Artin pure
//! braid group P_n, together with their distinguished elements.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::word::{product, Generator, Letter, Word};

/// Which conjugation table a tower is combed with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerKind {
    /// G_n, level j owning ρ_{j,0}, …, ρ_{j,2j−2}.
    Orbit,
    /// P_n, level j owning A_{1,j}, …, A_{j−1,j}.
    Artin,
}

/// Level structure of an iterated semidirect product of free groups.
/// `levels[j - 1]` is the alphabet of level j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub kind: TowerKind,
    pub levels: Vec<Vec<Generator>>,
}

impl TowerSpec {
    pub fn orbit(n: u32) -> Self {
        let levels = (1..=n).map(|j| (0..=2 * j - 2).map(|i| Generator::rho(j, i)).collect()).collect();
        TowerSpec { kind: TowerKind::Orbit, levels }
    }

    pub fn artin(n: u32) -> Self {
        let levels = (1..=n).map(|j| (1..j).map(|i| Generator::artin(i, j)).collect()).collect();
        TowerSpec { kind: TowerKind::Artin, levels }
    }

    pub fn height(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn kernel_rank(&self, level: u32) -> usize {
        self.levels[level as usize - 1].len()
    }

    pub fn alphabet(&self, level: u32) -> &[Generator] {
        &self.levels[level as usize - 1]
    }

    /// Level and position within the level alphabet.
    pub fn locate(&self, g: Generator) -> Option<(u32, usize)> {
        let (level, idx) = match (self.kind, g) {
            (TowerKind::Orbit, Generator::Rho { j, i }) => (j, i as usize),
            (TowerKind::Artin, Generator::Artin { i, j }) => (j, i as usize - 1),
            _ => return None,
        };
        (level >= 1 && level <= self.height()).then_some((level, idx))
    }

    pub fn level_of(&self, g: Generator) -> Option<u32> {
        self.locate(g).map(|(l, _)| l)
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.levels.iter().flatten().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relators: Vec<Word>,
    pub tower: Option<TowerSpec>,
}

impl Presentation {
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self> {
        let p = Presentation { generators, relators, tower: None };
        p.check_symbols(&p.relators)?;
        Ok(p)
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.generators.contains(&g)
    }

    fn check_symbols(&self, words: &[Word]) -> Result<()> {
        let gens: BTreeSet<_> = self.generators.iter().collect();
        for w in words {
            if let Some(g) = w.generators().find(|g| !gens.contains(g)) {
                return Err(Error::UnknownGenerator(g));
            }
        }
        Ok(())
    }

    /// The group n generated by these generators modulo the old relators and `extra`.
    pub fn quotient_by(&self, extra: &[Word]) -> Result<Presentation> {
        self.check_symbols(extra)?;
        if extra.is_empty() {
            return Ok(self.clone());
        }
        let mut relators = self.relators.clone();
        relators.extend(extra.iter().cloned());
        Ok(Presentation { generators: self.generators.clone(), relators, tower: None })
    }
}

fn rho(j: u32, i: u32) -> Word {
    Word::gen(Generator::rho(j, i))
}

fn rho_inv(j: u32, i: u32) -> Word {
    Word::gen_inv(Generator::rho(j, i))
}

fn artin(i: u32, j: u32) -> Word {
    Word::gen(Generator::artin(i, j))
}

/// D_{j,k} = ρ_{k,j} ρ_{k,j+1} ⋯ ρ_{k,k−1}; D_{k,k} is the identity.
pub fn element_d(j: u32, k: u32) -> Result<Word> {
    if j < 1 || j > k {
        return Err(invalid(format!("D({j},{k}) needs 1 <= j <= k")));
    }
    Ok(Word::reduce((j..k).map(|m| Letter::pos(Generator::rho(k, m)))))
}

/// C_{k,j} = ρ_{k,0}⁻¹ D_{j+1,k}⁻¹ ρ_{k,j} D_{j+1,k} ρ_{k,0}.
pub fn element_c(k: u32, j: u32) -> Result<Word> {
    if j < 1 || j >= k {
        return Err(invalid(format!("C({k},{j}) needs 1 <= j < k")));
    }
    let d = element_d(j + 1, k)?;
    let inner = d.invert().concat(&rho(k, j)).concat(&d);
    Ok(rho_inv(k, 0).conjugate(&inner))
}

/// E_{k,m,q} = ρ_{k,m} ρ_{k,m+1} ⋯ ρ_{k,q}.
pub fn element_e(k: u32, m: u32, q: u32) -> Result<Word> {
    if k < 1 || m < k || q < m || q > 2 * k - 2 {
        return Err(invalid(format!("E({k},{m},{q}) needs k <= m <= q <= 2k-2")));
    }
    Ok(e_range(k, m, q))
}

// E with m = q + 1 is the empty product; this occurs inside the relations.
fn e_range(k: u32, m: u32, q: u32) -> Word {
    debug_assert!(m >= k && m <= q + 1 && (q <= 2 * k - 2 || m > q));
    Word::reduce((m..=q).map(|l| Letter::pos(Generator::rho(k, l))))
}

/// Θ_n = ρ_{1,0} ρ_{2,0} ⋯ ρ_{n,0}.
pub fn element_theta(n: u32) -> Result<Word> {
    if n < 1 {
        return Err(invalid("Theta(n) needs n >= 1"));
    }
    Ok(Word::reduce((1..=n).map(|j| Letter::pos(Generator::rho(j, 0)))))
}

/// Full twist Δ_n² = ∏_{j=2}^{n} (A_{1,j} A_{2,j} ⋯ A_{j−1,j}).
pub fn element_full_twist(n: u32) -> Result<Word> {
    if n < 1 {
        return Err(invalid("full twist needs n >= 1"));
    }
    Ok(Word::reduce((2..=n).flat_map(|j| (1..j).map(move |i| Letter::pos(Generator::artin(i, j))))))
}

/// `[a, b] = a b a⁻¹ b⁻¹`
fn commutator(a: &Word, b: &Word) -> Word {
    product([a, b, &a.invert(), &b.invert()])
}

/// Which outer conjugator to use in the relation for actors ρ_{j,i} with
/// j ≤ i ≤ 2j−2 acting on ρ_{k,k+j−1}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationSet {
    /// Outer conjugator `[ρ_{k,j}⁻¹, ρ_{k,k+i−j}⁻¹]`, shared with every other
    /// case of the family. The resulting maps are automorphisms of the level
    /// kernels and satisfy all relators.
    #[default]
    Consistent,
    /// Outer conjugator `[ρ_{k,j}⁻¹, ρ_{k,i−j+1}⁻¹]` as it is usually
    /// transcribed. The
    /// maps it defines are not automorphisms (first failure: ρ_{2,2} on
    /// level 3), so no combing engine can be built from it.
    AsPrinted,
}

/// Right-hand side of ρ_{j,i} ρ_{k,l} ρ_{j,i}⁻¹ = … for j < k, as given by
/// the defining relations of G_n.
pub fn orbit_action_rhs(j: u32, i: u32, k: u32, l: u32) -> Result<Word> {
    orbit_action_rhs_with(RelationSet::Consistent, j, i, k, l)
}

pub fn orbit_action_rhs_with(set: RelationSet, j: u32, i: u32, k: u32, l: u32) -> Result<Word> {
    if j < 1 || j >= k || i > 2 * j - 2 || l > 2 * k - 2 {
        return Err(invalid(format!("no orbit relation for actor r({j},{i}) on r({k},{l})")));
    }
    let r = |m: u32| rho(k, m);
    let ri = |m: u32| rho_inv(k, m);
    let conj = |u: &Word, v: &Word| u.conjugate(v);

    let w = if i == 0 {
        // actor ρ_{j,0}
        let c = element_c(k, j)?;
        if l == 0 || (j < l && l < k) {
            r(l)
        } else if (1..j).contains(&l) || (k..=k + j - 2).contains(&l) {
            conj(&c, &r(l))
        } else if l == j {
            c
        } else if l == k + j - 1 {
            let e = e_range(k, k, k + j - 2);
            let d1 = element_d(1, k)?;
            let inner = product([&e.invert(), &ri(0), &d1.invert(), &r(l), &d1, &r(0), &e]);
            conj(&c, &inner)
        } else {
            conj(&c, &conj(&r(k + j - 1), &r(l)))
        }
    } else if i < j {
        // 0 < i < j
        if l < i || (j + 1..=k + i - 2).contains(&l) || (k + i..=k + j - 2).contains(&l) || l >= k + j {
            r(l)
        } else if l == i {
            conj(&ri(j), &r(i))
        } else if l < j {
            conj(&commutator(&ri(j), &ri(i)), &r(l))
        } else if l == j {
            product([&ri(j), &ri(i), &r(j), &r(i), &r(j)])
        } else if l == k + i - 1 {
            let big = e_range(k, k + i - 1, k + j - 1);
            let small = e_range(k, k + i, k + j - 2);
            conj(&big.concat(&small.invert()), &r(k + i - 1))
        } else {
            debug_assert_eq!(l, k + j - 1);
            let big = e_range(k, k + i - 1, k + j - 2);
            let small = e_range(k, k + i, k + j - 2);
            conj(&small.invert().concat(&big), &r(k + j - 1))
        }
    } else {
        // j <= i <= 2j - 2
        let c = commutator(&ri(j), &ri(k + i - j));
        let a = i - j + 1;
        let conj_by_c = (1..=i - j).contains(&l)
            || (i - j + 2..j).contains(&l)
            || (k + i - j + 1..=k + j - 2).contains(&l)
            || l >= k + j;
        if conj_by_c {
            conj(&c, &r(l))
        } else if l == a {
            let d = element_d(a, k)?;
            let e1 = e_range(k, k, k + j - 1);
            let e2 = e_range(k, k, k + j - 2);
            let ca = element_c(k, a)?;
            let outer = product([&c, &d, &r(0), &e1, &e2.invert()]);
            conj(&outer, &ca)
        } else if l == k + j - 1 {
            let outer = match set {
                RelationSet::Consistent => c,
                RelationSet::AsPrinted => commutator(&ri(j), &ri(a)),
            };
            let e2 = e_range(k, k, k + j - 2);
            let ca = element_c(k, a)?;
            let x = product([&e2.invert(), &ca, &e2]);
            conj(&outer, &conj(&x, &r(k + j - 1)))
        } else if l == 0 || (j + 1..k + i - j).contains(&l) {
            r(l)
        } else if l == j {
            product([&ri(j), &ri(k + i - j), &r(j), &r(k + i - j), &r(j)])
        } else {
            debug_assert_eq!(l, k + i - j);
            conj(&ri(j), &r(k + i - j))
        }
    };
    Ok(w)
}

/// Right-hand side of A_{r,s}⁻¹ A_{i,j} A_{r,s} = … for s < j (classical
/// Artin relations).
pub fn artin_inverse_action_rhs(r: u32, s: u32, i: u32, j: u32) -> Result<Word> {
    if r < 1 || r >= s || s >= j || i < 1 || i >= j {
        return Err(invalid(format!("no Artin relation for A({r},{s}) on A({i},{j})")));
    }
    let target = artin(i, j);
    let w = if s < i || i < r {
        target
    } else if s == i {
        artin(r, j).conjugate(&target)
    } else if i == r {
        artin(r, j).concat(&artin(s, j)).conjugate(&target)
    } else {
        // r < i < s
        let c = commutator(&artin(r, j), &artin(s, j));
        c.conjugate(&target)
    };
    Ok(w)
}

/// Presentation of G_n with generators ρ_{j,i} and one relator
/// `ρ_{j,i} ρ_{k,l} ρ_{j,i}⁻¹ · rhs⁻¹` per instance, ordered by
/// (family, j, i, k, l).
pub fn orbit_presentation(n: u32) -> Result<Presentation> {
    orbit_presentation_with(n, RelationSet::Consistent)
}

pub fn orbit_presentation_with(n: u32, set: RelationSet) -> Result<Presentation> {
    if n < 1 {
        return Err(invalid("orbit presentation needs n >= 1"));
    }
    let tower = TowerSpec::orbit(n);
    let mut keyed = Vec::new();
    for j in 1..n {
        for i in 0..=2 * j - 2 {
            let family = if i == 0 {
                0
            } else if i < j {
                1
            } else {
                2
            };
            for k in j + 1..=n {
                for l in 0..=2 * k - 2 {
                    let lhs = rho(j, i).conjugate(&rho(k, l));
                    let rhs = orbit_action_rhs_with(set, j, i, k, l)?;
                    keyed.push(((family, j, i, k, l), lhs.concat(&rhs.invert())));
                }
            }
        }
    }
    keyed.sort_by_key(|(key, _)| *key);
    Ok(Presentation {
        generators: tower.generators(),
        relators: keyed.into_iter().map(|(_, w)| w).collect(),
        tower: Some(tower),
    })
}

/// Classical presentation of P_n on A_{i,j}, one relator
/// `A_{r,s}⁻¹ A_{i,j} A_{r,s} · rhs⁻¹` for every s < j.
pub fn artin_presentation(n: u32) -> Result<Presentation> {
    if n < 1 {
        return Err(invalid("Artin presentation needs n >= 1"));
    }
    let tower = TowerSpec::artin(n);
    let mut relators = Vec::new();
    for s in 2..=n {
        for r in 1..s {
            for j in s + 1..=n {
                for i in 1..j {
                    let lhs = artin(r, s).invert().conjugate(&artin(i, j));
                    let rhs = artin_inverse_action_rhs(r, s, i, j)?;
                    relators.push(lhs.concat(&rhs.invert()));
                }
            }
        }
    }
    Ok(Presentation { generators: tower.generators(), relators, tower: Some(tower) })
}

// ---------------------------------------------------------------------------
// export formats

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    schema_version: u32,
    generators: Vec<String>,
    relators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tower: Option<TowerJson>,
}

#[derive(Serialize, Deserialize)]
struct TowerJson {
    kind: TowerKind,
    levels: Vec<Vec<String>>,
}

fn parse_generator(s: &str) -> Result<Generator> {
    let w: Word = s.parse()?;
    match w.letters() {
        [l] if !l.inverse => Ok(l.generator),
        _ => Err(Error::Parse { pos: 0, msg: format!("'{s}' is not a single generator") }),
    }
}

impl Presentation {
    pub fn to_text(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        let mut out = format!("generators: {}\n", gens.join(" "));
        if self.relators.is_empty() {
            out.push_str("(no relators)\n");
        }
        for r in &self.relators {
            let _ = writeln!(out, "{r}");
        }
        out
    }

    /// Inverse of [`Presentation::to_text`]. The standard G_n and P_n
    /// presentations get their tower back.
    pub fn from_text(text: &str) -> Result<Presentation> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| invalid("empty presentation text"))?;
        let gens = header
            .strip_prefix("generators:")
            .ok_or_else(|| Error::Parse { pos: 0, msg: "expected 'generators:' header".into() })?;
        let generators = gens.split_whitespace().map(parse_generator).collect::<Result<Vec<_>>>()?;
        let mut relators = Vec::new();
        for line in lines {
            if line.trim() == "(no relators)" {
                continue;
            }
            relators.push(line.parse::<Word>()?);
        }
        let mut p = Presentation::new(generators, relators)?;
        p.tower = recognize_tower(&p);
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        let doc = PresentationJson {
            schema_version: 1,
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            relators: self
                .relators
                .iter()
                .map(|r| r.letters().iter().map(|l| l.to_string()).collect())
                .collect(),
            tower: self.tower.as_ref().map(|t| TowerJson {
                kind: t.kind,
                levels: t.levels.iter().map(|lv| lv.iter().map(|g| g.to_string()).collect()).collect(),
            }),
        };
        serde_json::to_string_pretty(&doc).expect("presentation serializes")
    }

    pub fn from_json(text: &str) -> Result<Presentation> {
        let doc: PresentationJson = serde_json::from_str(text)
            .map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })?;
        if doc.schema_version != 1 {
            return Err(invalid(format!("unsupported schema_version {}", doc.schema_version)));
        }
        let generators = doc.generators.iter().map(|s| parse_generator(s)).collect::<Result<Vec<_>>>()?;
        let relators = doc
            .relators
            .iter()
            .map(|r| Ok(Word::reduce(r.iter().map(|s| s.parse::<Word>()).collect::<Result<Vec<_>>>()?.into_iter().flat_map(Word::into_letters))))
            .collect::<Result<Vec<_>>>()?;
        let mut p = Presentation::new(generators, relators)?;
        if let Some(t) = doc.tower {
            let levels = t
                .levels
                .iter()
                .map(|lv| lv.iter().map(|s| parse_generator(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let tower = TowerSpec { kind: t.kind, levels };
            let expected = match tower.kind {
                TowerKind::Orbit => TowerSpec::orbit(tower.height()),
                TowerKind::Artin => TowerSpec::artin(tower.height()),
            };
            if tower != expected || tower.generators() != p.generators {
                return Err(invalid("tower does not match the generator list"));
            }
            p.tower = Some(tower);
        }
        Ok(p)
    }

    pub fn to_gap(&self) -> String {
        let name = |g: &Generator| match *g {
            Generator::Rho { j, i } => format!("r{j}_{i}"),
            Generator::Artin { i, j } => format!("A{i}_{j}"),
            Generator::Surface { j } => format!("p{j}"),
        };
        let names: Vec<String> = self.generators.iter().map(name).collect();
        let quoted: Vec<String> = names.iter().map(|s| format!("\"{s}\"")).collect();
        let mut out = format!("F := FreeGroup({});;\n", quoted.join(", "));
        for (k, s) in names.iter().enumerate() {
            let _ = writeln!(out, "{s} := F.{};;", k + 1);
        }
        out.push_str("rels := [");
        for (idx, r) in self.relators.iter().enumerate() {
            out.push_str(if idx == 0 { "\n  " } else { ",\n  " });
            if r.is_identity() {
                out.push_str("One(F)");
            }
            let factors: Vec<String> = r
                .letters()
                .iter()
                .map(|l| if l.inverse { format!("{}^-1", name(&l.generator)) } else { name(&l.generator) })
                .collect();
            out.push_str(&factors.join("*"));
        }
        out.push_str(if self.relators.is_empty() { "];;\n" } else { "\n];;\n" });
        out.push_str("G := F / rels;;\n");
        out
    }
}

fn recognize_tower(p: &Presentation) -> Option<TowerSpec> {
    let n = p.generators.len();
    let candidates = [
        (n as f64).sqrt().round() as u32,
        // P_m has m(m-1)/2 generators
        ((1.0 + (1.0 + 8.0 * n as f64).sqrt()) / 2.0).round() as u32,
    ];
    for (idx, &m) in candidates.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let standard = if idx == 0 { orbit_presentation(m) } else { artin_presentation(m) };
        if let Ok(s) = standard {
            if s.generators == p.generators && s.relators == p.relators {
                return s.tower;
            }
        }
    }
    None
}
