//! Verification suites. Each suite yields one line per check; independent
//! checks run in parallel and are reported in a fixed order.

use std::fmt::Write as _;

use orbit_braid::abelian::{smith_normal_form, FGAbelianGroup, IntMatrix};
use orbit_braid::combing::Comber;
use orbit_braid::fibration::{
    boundary_matrix_ab, iota_sharp_vector, quotient_check, split_ses_check, twist_identity,
    twist_identity_strict_corollary, Surface,
};
use orbit_braid::presentation::{element_theta, Presentation, TowerSpec};
use orbit_braid::random::WordSampler;
use orbit_braid::word::Generator;
use orbit_braid::Error;
use rayon::prelude::*;
use serde_json::json;

use crate::{with_schema, Failure, Format, Group, GroupArgs, Suite, VerifyArgs};

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<String, Failure> {
    let randomized = matches!(a.suite, Suite::Relators | Suite::Theta);
    let checks = match a.suite {
        Suite::Relators => relators(a)?,
        Suite::Center => center(a)?,
        Suite::Exactness => exactness(a)?,
        Suite::Quotient => quotient(a)?,
        Suite::Split => split(a)?,
        Suite::Theta => theta(a)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    let out = match a.format {
        Format::Json => {
            let list: Vec<_> = checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            let mut doc = json!({ "suite": suite_name(a.suite), "n": a.n, "checks": list, "passed": passed });
            if randomized {
                doc["seed"] = json!(a.seed);
            }
            with_schema(doc)
        }
        Format::Text => {
            let mut out = String::new();
            if randomized {
                let _ = writeln!(out, "seed: {}", a.seed);
            }
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    let _ = writeln!(out, "{tag} {}", c.name);
                } else {
                    let _ = writeln!(out, "{tag} {}: {}", c.name, c.detail);
                }
            }
            out
        }
        Format::Gap => return Err(Failure::Usage("--format gap is only available for presentation".into())),
    };
    if passed {
        Ok(out)
    } else {
        Err(Failure::ChecksFailed(out))
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Relators => "relators",
        Suite::Center => "center",
        Suite::Exactness => "exactness",
        Suite::Quotient => "quotient",
        Suite::Split => "split",
        Suite::Theta => "theta",
    }
}

fn group_args(a: &VerifyArgs) -> GroupArgs {
    GroupArgs { group: a.group, n: a.n, relations: a.relations }
}

fn need_surface(a: &VerifyArgs) -> Result<Surface, Failure> {
    let s: Surface = a.surface.ok_or_else(|| Failure::Usage("--surface is required for this suite".into()))?.into();
    if a.n < s.n0() {
        return Err(Failure::Usage(format!("--n must be at least {} for --surface {s}", s.n0())));
    }
    Ok(s)
}

fn need_gn(a: &VerifyArgs) -> Result<Comber, Failure> {
    if a.group != Group::Gn {
        return Err(Failure::Usage(format!("suite {} needs --group gn", suite_name(a.suite))));
    }
    group_args(a).comber(a.word_cap)
}

fn relators(a: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let g = group_args(a);
    let p: Presentation = g.presentation()?;
    let comber = match g.comber(a.word_cap) {
        Ok(c) => c,
        Err(Failure::Core(Error::NotAnAutomorphism { level })) => {
            // the relations do not even define a semidirect product
            let detail = format!("conjugation maps on level {level} do not form a free basis; relators cannot be combed");
            return Ok(vec![Check::new("actions are automorphisms", false, detail)]);
        }
        Err(e) => return Err(e),
    };
    let results: Vec<Result<Check, Error>> = p
        .relators
        .par_iter()
        .enumerate()
        .map(|(idx, r)| {
            let name = format!("relator {idx}");
            if !comber.is_identity(r)? {
                return Ok(Check::new(name, false, format!("[{r}] does not comb to the identity")));
            }
            let mut sampler = WordSampler::split(a.seed, idx as u64, p.generators.clone());
            for _ in 0..a.samples {
                let u = sampler.word(a.max_len);
                let v = sampler.word(a.max_len);
                let w = u.concat(r).concat(&v);
                if comber.comb(&w)? != comber.comb(&u.concat(&v))? {
                    return Ok(Check::new(name, false, format!("reproducer u·r·v = [{w}] vs u·v = [{}]", u.concat(&v))));
                }
            }
            Ok(Check::new(name, true, format!("[{r}], {} insertions", a.samples)))
        })
        .collect();
    Ok(results.into_iter().collect::<Result<Vec<_>, _>>()?)
}

fn center(a: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let comber = need_gn(a)?;
    let report = comber.center_check(usize::MAX)?;
    let mut checks: Vec<Check> = report
        .theta_commutes
        .iter()
        .map(|&(g, ok)| Check::new(format!("theta commutes with {g}"), ok, ""))
        .collect();
    checks.extend(report.witnesses.iter().map(|&(g, w)| match w {
        Some(h) => Check::new(format!("{g} is not central"), true, format!("witness {h}")),
        None => Check::new(format!("{g} is not central"), false, "no witness among the generators"),
    }));
    Ok(checks)
}

fn exactness(a: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let s = need_surface(a)?;
    let n = a.n;
    let m = boundary_matrix_ab(s, n)?;
    let rank = smith_normal_form(&m).rank;
    let mut checks = vec![Check::new("boundary is injective on H1", rank == n as usize, format!("rank {rank} of {n}"))];

    // rows of the loop-space factors are the last n-1 rows
    let z_rows = n as usize - 1;
    let mut z = IntMatrix::zeros(z_rows, m.cols());
    for i in 0..z_rows {
        for j in 0..m.cols() {
            z[(i, j)] = m[(m.rows() - z_rows + i, j)].clone();
        }
    }
    let snf = smith_normal_form(&z);
    let unimodular = snf.rank == z_rows && snf.d.iter().all(|d| *d == 1.into());
    checks.push(Check::new("image saturates the loop-space factors", unimodular, ""));

    let comber = s.fibre_comber(n)?;
    let report = if a.strict_corollary {
        twist_identity_strict_corollary(s, n, &comber)?
    } else {
        twist_identity(s, n, &comber)?
    };
    let name = if a.strict_corollary { "twist identity (alternative -z0 image)" } else { "twist identity" };
    checks.push(Check::new(
        name,
        report.holds,
        format!("signed sum {} vs tau_hat^2 {}", report.signed_sum, report.tau_hat_squared),
    ));
    Ok(checks)
}

fn quotient(a: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let s = need_surface(a)?;
    let r = quotient_check(s, a.n)?;
    Ok(vec![Check::new(
        "quotient agreement",
        r.agree(),
        format!("cokernel of boundary {} vs twist quotient {}", r.via_boundary, r.via_quotient),
    )])
}

fn split(a: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let s = need_surface(a)?;
    let coeff = match &a.coeff {
        Some(text) => parse_group(text).map_err(|e| Failure::Usage(format!("--coeff: {e}")))?,
        None => FGAbelianGroup::free(1),
    };
    let v = iota_sharp_vector(s, a.n, a.k).map_err(|e| Failure::Usage(format!("--k: {e}")))?;
    let r = split_ses_check(&coeff, a.n, &v)?;
    Ok(vec![
        Check::new("section h = g o pi_i", r.section_ok, format!("vector {v:?}, i = {}", r.unit_index)),
        Check::new(
            "quotient",
            r.quotient == r.expected_quotient,
            format!("{} (expected {})", r.quotient, r.expected_quotient),
        ),
    ])
}

fn theta(a: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let comber = need_gn(a)?;
    let theta = element_theta(a.n)?;
    let gens = TowerSpec::orbit(a.n).generators();
    let results: Vec<Result<Check, Error>> = (0..a.samples)
        .into_par_iter()
        .map(|idx| {
            let w = WordSampler::split(a.seed, idx as u64, gens.clone()).word(a.max_len);
            let (e, rem) = comber.theta_decompose(&w)?;
            let in_kernel = rem.exponent_sum(Generator::rho(1, 0)) == 0;
            let recombines = comber.words_equal(&theta.pow(e).concat(&rem), &w)?;
            let ok = in_kernel && recombines;
            let detail = if ok { format!("exponent {e}") } else { format!("reproducer [{w}]") };
            Ok(Check::new(format!("sample {idx}"), ok, detail))
        })
        .collect();
    Ok(results.into_iter().collect::<Result<Vec<_>, _>>()?)
}

/// Parses "0", "Z", "Z^2 x Z/2", "Z/3 + Z".
fn parse_group(text: &str) -> Result<FGAbelianGroup, String> {
    let mut free = 0usize;
    let mut orders = Vec::new();
    let text = text.trim();
    if text == "0" {
        return Ok(FGAbelianGroup::trivial());
    }
    for part in text.split(['x', '+']).map(str::trim) {
        if part == "Z" {
            free += 1;
        } else if let Some(r) = part.strip_prefix("Z^") {
            free += r.parse::<usize>().map_err(|e| format!("bad rank in {part:?}: {e}"))?;
        } else if let Some(d) = part.strip_prefix("Z/") {
            let d: i64 = d.parse().map_err(|e| format!("bad order in {part:?}: {e}"))?;
            if d < 1 {
                return Err(format!("order must be positive in {part:?}"));
            }
            orders.push(d);
        } else {
            return Err(format!("cannot parse {part:?}"));
        }
    }
    Ok(FGAbelianGroup::from_cyclic_orders(free, &orders))
}
