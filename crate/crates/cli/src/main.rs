//! `orbit-braid`: presentations, combing, verification suites, abelian
//! invariants and boundary maps from the command line.

mod suites;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbit_braid::abelian::{cokernel, h1, smith_normal_form};
use orbit_braid::combing::Comber;
use orbit_braid::fibration::{boundary_image, boundary_matrix_ab, reduced_image_minus_z0, pi2_basis, Pi2Label, Surface};
use orbit_braid::presentation::{
    artin_presentation, element_full_twist, element_theta, orbit_presentation_with, Presentation, RelationSet,
    TowerSpec,
};
use orbit_braid::word::Word;
use orbit_braid::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "orbit-braid", version, about = "Combing, presentations and boundary maps for orbit configuration braid groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the presentation of G_n or P_n.
    Presentation(PresentationArgs),
    /// Comb a word into its normal form.
    Comb(CombArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Abelianization of G_n, P_n or their twist quotients.
    Abelianize(AbelianizeArgs),
    /// Images of the boundary map on the basis of pi_2.
    Boundary(BoundaryArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    /// Orbit configuration braid group G_n.
    Gn,
    /// Pure braid group P_n.
    Pn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Gap,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SurfaceArg {
    S2,
    Rp2,
}

impl From<SurfaceArg> for Surface {
    fn from(s: SurfaceArg) -> Surface {
        match s {
            SurfaceArg::S2 => Surface::S2,
            SurfaceArg::Rp2 => Surface::RP2,
        }
    }
}

/// Which transcription of the G_n conjugation relations to use.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Relations {
    /// Relations under which every conjugation is an automorphism.
    Consistent,
    /// The commonly transcribed outer commutator for actors r(j,i), j <= i, on r(k,k+j-1).
    Printed,
}

impl From<Relations> for RelationSet {
    fn from(r: Relations) -> RelationSet {
        match r {
            Relations::Consistent => RelationSet::Consistent,
            Relations::Printed => RelationSet::AsPrinted,
        }
    }
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long, value_enum, default_value = "gn")]
    group: Group,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, value_enum, default_value = "consistent")]
    relations: Relations,
}

impl GroupArgs {
    fn presentation(&self) -> Result<Presentation, Failure> {
        Ok(match self.group {
            Group::Gn => orbit_presentation_with(self.n, self.relations.into())?,
            Group::Pn => artin_presentation(self.n)?,
        })
    }

    fn twist_square(&self) -> Result<Word, Failure> {
        Ok(match self.group {
            Group::Gn => element_theta(self.n)?.pow(2),
            Group::Pn => element_full_twist(self.n)?.pow(2),
        })
    }

    fn comber(&self, word_cap: usize) -> Result<Comber, Failure> {
        let tower = match self.group {
            Group::Gn => TowerSpec::orbit(self.n),
            Group::Pn => TowerSpec::artin(self.n),
        };
        Ok(Comber::with_options(tower, self.relations.into(), word_cap)?)
    }
}

#[derive(Args)]
struct PresentationArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Add the square of the central twist (Θ_n² or Δ_n⁴) as a relator.
    #[arg(long)]
    quotient: bool,
}

#[derive(Args)]
struct CombArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Word such as "r(1,0) r(2,1)^-1".
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = orbit_braid::combing::DEFAULT_WORD_CAP, value_parser = parse_cap)]
    word_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Relators,
    Center,
    Exactness,
    Quotient,
    Split,
    Theta,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, value_enum, default_value = "gn")]
    group: Group,
    #[arg(long, value_enum)]
    surface: Option<SurfaceArg>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, value_enum, default_value = "consistent")]
    relations: Relations,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples for the randomized suites.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Maximal length of random words.
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    /// Degree k of the homotopy group for the split suite.
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Coefficient group for the split suite, e.g. "Z x Z/2" (default: Z).
    #[arg(long)]
    coeff: Option<String>,
    #[arg(long, default_value_t = orbit_braid::combing::DEFAULT_WORD_CAP, value_parser = parse_cap)]
    word_cap: usize,
    /// Use the alternative image of -z0 (without the z0 factor) for S2 in the exactness suite.
    #[arg(long)]
    strict_corollary: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct AbelianizeArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Quotient by the square of the central twist first.
    #[arg(long)]
    quotient: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct BoundaryArgs {
    #[arg(long, value_enum)]
    surface: SurfaceArg,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Also print the matrix on H1 and its Smith form.
    #[arg(long)]
    abelianized: bool,
    /// Also print the alternative image of -z0 (without the z0 factor).
    #[arg(long)]
    strict_corollary: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn parse_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("the word cap must be positive".into()),
        Ok(c) => Ok(c),
        Err(e) => Err(e.to_string()),
    }
}

/// Everything that ends the run with a non-zero status.
pub enum Failure {
    Usage(String),
    Core(Error),
    ChecksFailed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Presentation(a) => cmd_presentation(&a),
        Command::Comb(a) => cmd_comb(&a),
        Command::Verify(a) => suites::cmd_verify(&a),
        Command::Abelianize(a) => cmd_abelianize(&a),
        Command::Boundary(a) => cmd_boundary(&a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::ChecksFailed(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e @ Error::WordSizeExceeded { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn with_schema(mut v: serde_json::Value) -> String {
    v.as_object_mut().expect("object").insert("schema_version".into(), json!(1));
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
}

fn cmd_presentation(a: &PresentationArgs) -> Result<String, Failure> {
    let mut p = a.group.presentation()?;
    if a.quotient {
        p = p.quotient_by(&[a.group.twist_square()?])?;
    }
    Ok(match a.format {
        Format::Text => p.to_text(),
        Format::Json => format!("{}\n", p.to_json()),
        Format::Gap => p.to_gap(),
    })
}

fn cmd_comb(a: &CombArgs) -> Result<String, Failure> {
    let w: Word = a.word.parse().map_err(|e| Failure::Usage(format!("--word: {e}")))?;
    let comber = a.group.comber(a.word_cap)?;
    let nf = comber.comb(&w).map_err(|e| match e {
        Error::UnknownGenerator(g) => Failure::Usage(format!("--word: generator {g} is not in the group")),
        e => Failure::Core(e),
    })?;
    Ok(match a.format {
        Format::Json => {
            let levels: Vec<_> = nf.components().map(|(k, w)| json!({ "level": k, "word": w.to_string() })).collect();
            with_schema(json!({ "levels": levels }))
        }
        Format::Text => format!("{nf}\n"),
        Format::Gap => return Err(Failure::Usage("--format gap is only available for presentation".into())),
    })
}

fn cmd_abelianize(a: &AbelianizeArgs) -> Result<String, Failure> {
    let mut p = a.group.presentation()?;
    if a.quotient {
        p = p.quotient_by(&[a.group.twist_square()?])?;
    }
    let g = h1(&p);
    Ok(match a.format {
        Format::Json => with_schema(g.to_json()),
        Format::Text => format!("{g}\n"),
        Format::Gap => return Err(Failure::Usage("--format gap is only available for presentation".into())),
    })
}

fn cmd_boundary(a: &BoundaryArgs) -> Result<String, Failure> {
    let surface: Surface = a.surface.into();
    if a.n < surface.n0() {
        return Err(Failure::Usage(format!("--n must be at least {} for --surface {surface}", surface.n0())));
    }
    let basis = pi2_basis(surface, a.n)?;
    let images = basis.iter().map(|&l| boundary_image(surface, a.n, l)).collect::<Result<Vec<_>, _>>()?;
    let strict = if a.strict_corollary && surface == Surface::S2 { Some(reduced_image_minus_z0(a.n)?) } else { None };
    let matrix = if a.abelianized { Some(boundary_matrix_ab(surface, a.n)?) } else { None };

    if a.format == Format::Json {
        let imgs: Vec<_> = basis
            .iter()
            .zip(&images)
            .map(|(l, e)| json!({ "label": l.to_string(), "r_part": e.r_part.to_string(), "z_part": e.z_part }))
            .collect();
        let mut doc = json!({ "surface": surface.to_string(), "n": a.n, "images": imgs });
        if let Some(e) = &strict {
            doc["strict_corollary_minus_z0"] = json!({ "r_part": e.r_part.to_string(), "z_part": e.z_part });
        }
        if let Some(m) = &matrix {
            let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect();
            let snf = smith_normal_form(m);
            doc["matrix"] = json!(rows);
            doc["smith_form"] = json!(snf.d.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            doc["cokernel"] = cokernel(m).to_json();
        }
        return Ok(with_schema(doc));
    }
    if a.format == Format::Gap {
        return Err(Failure::Usage("--format gap is only available for presentation".into()));
    }
    let mut out = String::new();
    for (l, e) in basis.iter().zip(&images) {
        let _ = writeln!(out, "d({l}) = {e}");
    }
    if let Some(e) = &strict {
        let _ = writeln!(out, "d({}) without the z0 factor = {e}", Pi2Label::MinusZ0);
    }
    if let Some(m) = &matrix {
        let _ = writeln!(out, "matrix: {m}");
        let d: Vec<String> = smith_normal_form(m).d.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "smith form: ({})", d.join(","));
        let _ = writeln!(out, "cokernel: {}", cokernel(m));
    }
    Ok(out)
}
