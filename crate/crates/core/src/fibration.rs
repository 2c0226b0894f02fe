//! The boundary map of the fibration `F_n(M) → Mⁿ` for `M = S²` and `M = RP²`,
//! on `π₁` of the homotopy fibre modelled as `R_{n−1} × Z^{n−1}`.
//!
//! For S² the group `R_{n−1}` is the pure braid group `P_{n−1}` (Artin letters);
//! for RP² it is the orbit configuration group `G_{n−1}` (ρ letters).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abelian::{abelianize_word, cokernel, h1, FGAbelianGroup, IntMatrix};
use crate::combing::Comber;
use crate::error::{invalid, Error, Result};
use crate::presentation::{artin_presentation, element_full_twist, element_theta, orbit_presentation, Presentation};
use crate::word::{Generator, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Surface {
    S2,
    RP2,
}

impl Surface {
    /// Smallest number of points for which the fibration is considered.
    pub fn n0(self) -> u32 {
        match self {
            Surface::S2 => 3,
            Surface::RP2 => 2,
        }
    }

    fn check(self, n: u32) -> Result<()> {
        if n < self.n0() {
            return Err(invalid(format!("n must be at least {} for {self}, got {n}", self.n0())));
        }
        Ok(())
    }

    /// Presentation of `R_{n−1}`.
    pub fn fibre_group(self, n: u32) -> Result<Presentation> {
        self.check(n)?;
        match self {
            Surface::S2 => artin_presentation(n - 1),
            Surface::RP2 => orbit_presentation(n - 1),
        }
    }

    /// Combing engine for `R_{n−1}`.
    pub fn fibre_comber(self, n: u32) -> Result<Comber> {
        Comber::for_presentation(&self.fibre_group(n)?)
    }

    /// The twist whose square is killed in the quotient: `Δ²_{n−1}` or `Θ_{n−1}`.
    pub fn twist(self, n: u32) -> Result<Word> {
        self.check(n)?;
        match self {
            Surface::S2 => element_full_twist(n - 1),
            Surface::RP2 => element_theta(n - 1),
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::S2 => "s2",
            Surface::RP2 => "rp2",
        })
    }
}

impl FromStr for Surface {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s2" => Ok(Surface::S2),
            "rp2" => Ok(Surface::RP2),
            _ => Err(invalid(format!("unknown surface {s:?} (expected s2 or rp2)"))),
        }
    }
}

/// Element of `R_{n−1} × Z^{n−1}`; multiplication is componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreElement {
    pub r_part: Word,
    pub z_part: Vec<i64>,
}

impl FibreElement {
    pub fn identity(n: u32) -> Self {
        FibreElement { r_part: Word::identity(), z_part: vec![0; n as usize - 1] }
    }

    pub fn mul(&self, other: &FibreElement) -> FibreElement {
        assert_eq!(self.z_part.len(), other.z_part.len(), "fibre elements of different n");
        FibreElement {
            r_part: self.r_part.concat(&other.r_part),
            z_part: self.z_part.iter().zip(&other.z_part).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inverse(&self) -> FibreElement {
        FibreElement { r_part: self.r_part.invert(), z_part: self.z_part.iter().map(|x| -x).collect() }
    }

    pub fn pow(&self, k: i64) -> FibreElement {
        FibreElement { r_part: self.r_part.pow(k), z_part: self.z_part.iter().map(|x| x * k).collect() }
    }

    /// Equality in the group, deciding the `R` part by combing.
    pub fn group_eq(&self, other: &FibreElement, comber: &Comber) -> Result<bool> {
        Ok(self.z_part == other.z_part && comber.words_equal(&self.r_part, &other.r_part)?)
    }
}

impl fmt::Display for FibreElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = if self.r_part.is_identity() { "1".to_string() } else { self.r_part.to_string() };
        let z: Vec<String> = self.z_part.iter().map(i64::to_string).collect();
        write!(f, "({r}; ({}))", z.join(","))
    }
}

/// Basis element of `π₂(Mⁿ) ≅ Zⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pi2Label {
    X(u32),
    Z0,
    /// Only for S².
    MinusZ0,
}

impl fmt::Display for Pi2Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pi2Label::X(i) => write!(f, "x{i}"),
            Pi2Label::Z0 => write!(f, "z0"),
            Pi2Label::MinusZ0 => write!(f, "-z0"),
        }
    }
}

/// `(x₀, …, x_{n−3}, z₀, −z₀)` for S², `(x₀, …, x_{n−2}, z₀)` for RP².
pub fn pi2_basis(surface: Surface, n: u32) -> Result<Vec<Pi2Label>> {
    surface.check(n)?;
    Ok(match surface {
        Surface::S2 => (0..n - 2).map(Pi2Label::X).chain([Pi2Label::Z0, Pi2Label::MinusZ0]).collect(),
        Surface::RP2 => (0..n - 1).map(Pi2Label::X).chain([Pi2Label::Z0]).collect(),
    })
}

/// The loop-space generator `δ` of the i-th basepoint.
pub fn delta_generator(surface: Surface, n: u32, i: u32) -> Result<FibreElement> {
    surface.check(n)?;
    if i + 1 >= n {
        return Err(invalid(format!("delta index {i} out of range 0..{}", n - 1)));
    }
    let mut e = FibreElement::identity(n);
    e.z_part[i as usize] = 1;
    Ok(e)
}

/// Lift of the full twist: `(Δ²_{n−1}, 0)` for S², `(Θ_{n−1}⁻¹, 0)` for RP².
pub fn tau_hat(surface: Surface, n: u32) -> Result<FibreElement> {
    let twist = surface.twist(n)?;
    let r_part = match surface {
        Surface::S2 => twist,
        Surface::RP2 => twist.invert(),
    };
    Ok(FibreElement { r_part, z_part: vec![0; n as usize - 1] })
}

fn sum_deltas(n: u32, upto: u32) -> FibreElement {
    let mut e = FibreElement::identity(n);
    for z in &mut e.z_part[..upto as usize] {
        *z = 1;
    }
    e
}

/// Image of a basis element of `π₂(Mⁿ)` under the boundary map.
pub fn boundary_image(surface: Surface, n: u32, label: Pi2Label) -> Result<FibreElement> {
    let basis = pi2_basis(surface, n)?;
    if !basis.contains(&label) {
        return Err(invalid(format!("{label} is not a basis label for {surface} with n = {n}")));
    }
    let tau2 = tau_hat(surface, n)?.pow(2);
    Ok(match (surface, label) {
        (_, Pi2Label::X(i)) => delta_generator(surface, n, i)?,
        (Surface::RP2, Pi2Label::Z0) => tau2.mul(&sum_deltas(n, n - 1).inverse()),
        (Surface::S2, Pi2Label::Z0) => delta_generator(surface, n, n - 2)?,
        (Surface::S2, Pi2Label::MinusZ0) => sum_deltas(n, n - 1).mul(&tau2.inverse()),
        (Surface::RP2, Pi2Label::MinusZ0) => unreachable!(),
    })
}

/// Alternative image of `−z₀` for S² without the `δ_{z₀}` factor. It is
/// kept as a diagnostic: with it the twist identity fails.
pub fn reduced_image_minus_z0(n: u32) -> Result<FibreElement> {
    let tau2 = tau_hat(Surface::S2, n)?.pow(2);
    Ok(sum_deltas(n, n - 2).mul(&tau2.inverse()))
}

/// Coefficients of the basis elements summing to a preimage of `τ̂²`.
pub fn boundary_coefficients(surface: Surface, n: u32) -> Result<Vec<(Pi2Label, i64)>> {
    Ok(pi2_basis(surface, n)?
        .into_iter()
        .map(|l| (l, if l == Pi2Label::MinusZ0 { -1 } else { 1 }))
        .collect())
}

#[derive(Clone, Debug)]
pub struct TwistIdentityReport {
    pub surface: Surface,
    pub n: u32,
    pub signed_sum: FibreElement,
    pub tau_hat_squared: FibreElement,
    pub holds: bool,
}

fn twist_identity_with(
    surface: Surface,
    n: u32,
    comber: &Comber,
    image: impl Fn(Pi2Label) -> Result<FibreElement>,
) -> Result<TwistIdentityReport> {
    let mut sum = FibreElement::identity(n);
    for (label, c) in boundary_coefficients(surface, n)? {
        sum = sum.mul(&image(label)?.pow(c));
    }
    let tau2 = tau_hat(surface, n)?.pow(2);
    let holds = sum.group_eq(&tau2, comber)?;
    Ok(TwistIdentityReport { surface, n, signed_sum: sum, tau_hat_squared: tau2, holds })
}

/// Checks that the signed sum of boundary images equals `τ̂²`.
pub fn twist_identity(surface: Surface, n: u32, comber: &Comber) -> Result<TwistIdentityReport> {
    twist_identity_with(surface, n, comber, |l| boundary_image(surface, n, l))
}

/// Same check with the alternative image of `−z₀` (S² only; RP² is
/// unaffected). Reports the discrepancy rather than hiding it.
pub fn twist_identity_strict_corollary(surface: Surface, n: u32, comber: &Comber) -> Result<TwistIdentityReport> {
    twist_identity_with(surface, n, comber, |l| match (surface, l) {
        (Surface::S2, Pi2Label::MinusZ0) => reduced_image_minus_z0(n),
        _ => boundary_image(surface, n, l),
    })
}

/// Matrix of the boundary map on `H₁`: rows are the generator classes of
/// `R_{n−1}` followed by the `n − 1` loop-space factors, columns follow
/// [`pi2_basis`].
pub fn boundary_matrix_ab(surface: Surface, n: u32) -> Result<IntMatrix> {
    let r = surface.fibre_group(n)?;
    let basis = pi2_basis(surface, n)?;
    let rows = r.generators.len() + n as usize - 1;
    let mut m = IntMatrix::zeros(rows, basis.len());
    for (c, &label) in basis.iter().enumerate() {
        let img = boundary_image(surface, n, label)?;
        let classes = abelianize_word(&img.r_part, &r.generators)?;
        for (k, x) in classes.into_iter().chain(img.z_part.iter().map(|&z| BigInt::from(z))).enumerate() {
            m[(k, c)] = x;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientReport {
    pub surface: Surface,
    pub n: u32,
    /// Cokernel of the abelianized boundary map.
    pub via_boundary: FGAbelianGroup,
    /// `H₁(R_{n−1}/⟨twist²⟩)` plus what survives of the loop-space factors.
    pub via_quotient: FGAbelianGroup,
}

impl QuotientReport {
    pub fn agree(&self) -> bool {
        self.via_boundary == self.via_quotient
    }
}

/// Computes `H₁` of the cokernel of the boundary map in two independent ways.
pub fn quotient_check(surface: Surface, n: u32) -> Result<QuotientReport> {
    let via_boundary = cokernel(&boundary_matrix_ab(surface, n)?);

    let r = surface.fibre_group(n)?;
    let twist = surface.twist(n)?;
    let quotient = r.quotient_by(&[twist.pow(2)])?;
    // The δ's hit the loop-space factors directly; whatever they leave over
    // survives into the quotient.
    let mut deltas = IntMatrix::zeros(n as usize - 1, pi2_basis(surface, n)?.len());
    for i in 0..n - 1 {
        let d = delta_generator(surface, n, i)?;
        for (k, &z) in d.z_part.iter().enumerate() {
            deltas[(k, i as usize)] = BigInt::from(z);
        }
    }
    let via_quotient = h1(&quotient).direct_sum(&cokernel(&deltas));
    Ok(QuotientReport { surface, n, via_boundary, via_quotient })
}

/// Image of a generator of `π_k(M)` under the diagonal inclusion into
/// `π_k(Mⁿ)`: anti-diagonal `(1, −1)` only for `S²`, `n = k = 2`.
pub fn iota_sharp_vector(surface: Surface, n: u32, k: u32) -> Result<Vec<i64>> {
    if k < 2 {
        return Err(invalid(format!("k must be at least 2, got {k}")));
    }
    if n < 1 {
        return Err(invalid("n must be positive"));
    }
    if surface == Surface::S2 && n == 2 && k == 2 {
        return Ok(vec![1, -1]);
    }
    Ok(vec![1; n as usize])
}

#[derive(Clone, Debug)]
pub struct SplitReport {
    /// Coordinate used for the section `h = g ∘ πᵢ`.
    pub unit_index: usize,
    pub section_ok: bool,
    pub quotient: FGAbelianGroup,
    pub expected_quotient: FGAbelianGroup,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.section_ok && self.quotient == self.expected_quotient
    }
}

/// For `Θ : A → Aⁿ, v ↦ (c₁v, …, cₙv)` with some `cᵢ = ±1`, checks that
/// `h = cᵢ · πᵢ` is a retraction of `Θ` and that `Aⁿ / Θ(A) ≅ A^{n−1}`.
pub fn split_ses_check(coeff: &FGAbelianGroup, n: u32, vector: &[i64]) -> Result<SplitReport> {
    if vector.len() != n as usize || n == 0 {
        return Err(invalid(format!("vector has length {}, expected n = {n}", vector.len())));
    }
    let i = vector.iter().position(|c| c.abs() == 1).ok_or(Error::NoUnitCoordinate)?;
    let g = coeff.num_generators();
    let orders: Vec<BigInt> =
        std::iter::repeat_n(BigInt::zero(), coeff.free_rank).chain(coeff.torsion.iter().cloned()).collect();
    let reduce = |x: BigInt, k: usize| if orders[k].is_zero() { x } else { x.mod_floor(&orders[k]) };

    let theta = |k: usize| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); g * n as usize];
        for (c, &s) in vector.iter().enumerate() {
            out[c * g + k] = reduce(BigInt::from(s), k);
        }
        out
    };
    let section = |x: &[BigInt]| -> Vec<BigInt> {
        (0..g).map(|k| reduce(&x[i * g + k] * BigInt::from(vector[i]), k)).collect()
    };
    let section_ok = (0..g).all(|k| {
        let mut e = vec![BigInt::zero(); g];
        e[k] = reduce(BigInt::one(), k);
        section(&theta(k)) == e
    });

    // relations of Aⁿ, then the image of Θ
    let size = g * n as usize;
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..n as usize {
        for (k, d) in orders.iter().enumerate() {
            if !d.is_zero() {
                let mut col = vec![BigInt::zero(); size];
                col[c * g + k] = d.clone();
                cols.push(col);
            }
        }
    }
    cols.extend((0..g).map(theta));
    let mut m = IntMatrix::zeros(size, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            m[(r, j)] = x.clone();
        }
    }
    Ok(SplitReport {
        unit_index: i,
        section_ok,
        quotient: cokernel(&m),
        expected_quotient: coeff.power(n as usize - 1),
    })
}

#[derive(Clone, Debug)]
pub struct NonsplitReport {
    pub n: u32,
    /// `H₁(P_{n−1}) ⊕ Z^{n−1}`.
    pub middle: FGAbelianGroup,
    /// `H₁` of the quotient by the image of the boundary map.
    pub quotient: FGAbelianGroup,
}

impl NonsplitReport {
    pub fn middle_torsion_free(&self) -> bool {
        !self.middle.has_torsion()
    }

    pub fn quotient_has_z2(&self) -> bool {
        self.quotient.torsion.iter().any(|t| t.is_even())
    }

    pub fn passed(&self) -> bool {
        self.middle_torsion_free() && self.quotient_has_z2()
    }
}

/// Abelian witness that `1 → Zⁿ → P_{n−1} × Z^{n−1} → P_n(S²) → 1` does not
/// split: the middle term is torsion free while the quotient is not.
pub fn nonsplit_witness_s2(n: u32) -> Result<NonsplitReport> {
    if n < 3 {
        return Err(invalid(format!("n must be at least 3, got {n}")));
    }
    let middle = h1(&artin_presentation(n - 1)?).direct_sum(&FGAbelianGroup::free(n as usize - 1));
    let quotient = cokernel(&boundary_matrix_ab(Surface::S2, n)?);
    Ok(NonsplitReport { n, middle, quotient })
}

/// The map from `G_n` to the pure braid group of `n + 1` strands of RP²,
/// with targets in the letters `A(i,j)` and `p(j)`.
pub fn upsilon_images(n: u32) -> Result<HashMap<Generator, Word>> {
    if n < 1 {
        return Err(invalid("n must be positive"));
    }
    let mut map = HashMap::new();
    for j in 1..=n {
        let p = Word::gen(Generator::surface(j));
        for i in 0..=2 * j - 2 {
            let image = if i == 0 {
                let band = crate::word::product(&(1..j).map(|a| Word::gen(Generator::artin(a, j))).collect::<Vec<_>>());
                p.concat(&band).concat(&p)
            } else if i < j {
                Word::gen(Generator::artin(i, j))
            } else {
                p.conjugate(&Word::gen(Generator::artin(i - j + 1, j)))
            };
            map.insert(Generator::rho(j, i), image);
        }
    }
    Ok(map)
}

/// Free presentation on the target letters of [`upsilon_images`]; only its
/// generators are used (for abelianized matrices).
pub fn upsilon_target(n: u32) -> Result<Presentation> {
    let mut gens: Vec<Generator> = Vec::new();
    for j in 2..=n + 1 {
        gens.extend((1..j).map(|i| Generator::artin(i, j)));
    }
    gens.extend((1..=n + 1).map(Generator::surface));
    Presentation::new(gens, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::smith_normal_form;

    fn z(v: &[i64]) -> Vec<i64> {
        v.to_vec()
    }

    #[test]
    fn deltas() {
        assert_eq!(delta_generator(Surface::RP2, 2, 0).unwrap(), FibreElement { r_part: Word::identity(), z_part: z(&[1]) });
        assert_eq!(delta_generator(Surface::S2, 3, 1).unwrap().z_part, z(&[0, 1]));
        assert!(delta_generator(Surface::S2, 3, 2).is_err());
    }

    #[test]
    fn tau_hats() {
        let t = tau_hat(Surface::RP2, 2).unwrap();
        assert_eq!(t.r_part, Word::gen_inv(Generator::rho(1, 0)));
        assert_eq!(t.z_part, z(&[0]));
        assert_eq!(tau_hat(Surface::S2, 3).unwrap().r_part, Word::gen(Generator::artin(1, 2)));
        let t = tau_hat(Surface::RP2, 4).unwrap();
        assert_eq!(t.r_part, "r(3,0)^-1 r(2,0)^-1 r(1,0)^-1".parse().unwrap());
        assert!(tau_hat(Surface::S2, 2).is_err());
    }

    #[test]
    fn boundary_images() {
        let b = boundary_image(Surface::RP2, 2, Pi2Label::Z0).unwrap();
        assert_eq!(b.r_part, Word::gen(Generator::rho(1, 0)).pow(-2));
        assert_eq!(b.z_part, z(&[-1]));
        let b = boundary_image(Surface::S2, 3, Pi2Label::X(0)).unwrap();
        assert_eq!(b, FibreElement { r_part: Word::identity(), z_part: z(&[1, 0]) });
        let b = boundary_image(Surface::S2, 3, Pi2Label::MinusZ0).unwrap();
        assert_eq!(b.r_part, Word::gen(Generator::artin(1, 2)).pow(-2));
        assert_eq!(b.z_part, z(&[1, 1]));
        assert!(boundary_image(Surface::RP2, 3, Pi2Label::MinusZ0).is_err());
    }

    #[test]
    fn boundary_matrices() {
        let m = boundary_matrix_ab(Surface::S2, 3).unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[vec![0, 0, -2], vec![1, 0, 1], vec![0, 1, 1]]));
        let d: Vec<_> = smith_normal_form(&m).d.iter().map(|x| x.to_string()).collect();
        assert_eq!(d, ["1", "1", "2"]);
        let m = boundary_matrix_ab(Surface::RP2, 2).unwrap();
        let d: Vec<_> = smith_normal_form(&m).d.iter().map(|x| x.to_string()).collect();
        assert_eq!(d, ["1", "2"]);
    }

    #[test]
    fn quotients() {
        let r = quotient_check(Surface::S2, 3).unwrap();
        assert!(r.agree());
        assert_eq!(r.via_boundary.to_string(), "Z/2");
        let r = quotient_check(Surface::RP2, 2).unwrap();
        assert!(r.agree());
        assert_eq!(r.via_boundary.to_string(), "Z/2");
        let r = quotient_check(Surface::RP2, 3).unwrap();
        assert!(r.agree());
        assert_eq!(r.via_boundary.to_string(), "Z^3 x Z/2");
    }

    #[test]
    fn twist_identities() {
        for s in [Surface::S2, Surface::RP2] {
            for n in s.n0()..=4 {
                let c = s.fibre_comber(n).unwrap();
                assert!(twist_identity(s, n, &c).unwrap().holds, "{s} {n}");
            }
        }
        let c = Surface::S2.fibre_comber(4).unwrap();
        let r = twist_identity_strict_corollary(Surface::S2, 4, &c).unwrap();
        assert!(!r.holds);
        assert_eq!(r.signed_sum.z_part, z(&[0, 0, 1]));
    }

    #[test]
    fn iota_vectors() {
        assert_eq!(iota_sharp_vector(Surface::S2, 2, 2).unwrap(), z(&[1, -1]));
        assert_eq!(iota_sharp_vector(Surface::S2, 4, 3).unwrap(), z(&[1, 1, 1, 1]));
        assert_eq!(iota_sharp_vector(Surface::RP2, 2, 5).unwrap(), z(&[1, 1]));
        assert!(iota_sharp_vector(Surface::RP2, 2, 1).is_err());
    }

    #[test]
    fn splittings() {
        let r = split_ses_check(&FGAbelianGroup::free(1), 3, &[1, 1, 1]).unwrap();
        assert!(r.passed());
        assert_eq!(r.quotient, FGAbelianGroup::free(2));
        let a = FGAbelianGroup::from_cyclic_orders(1, &[2]);
        let r = split_ses_check(&a, 2, &[1, -1]).unwrap();
        assert!(r.passed());
        assert_eq!(r.quotient, a);
        assert_eq!(split_ses_check(&FGAbelianGroup::free(1), 2, &[2, 2]).unwrap_err(), Error::NoUnitCoordinate);
    }

    #[test]
    fn nonsplit() {
        let r = nonsplit_witness_s2(3).unwrap();
        assert_eq!(r.middle, FGAbelianGroup::free(3));
        assert_eq!(r.quotient.to_string(), "Z/2");
        assert!(r.passed());
        assert!(nonsplit_witness_s2(2).is_err());
    }

    #[test]
    fn upsilon() {
        let u = upsilon_images(2).unwrap();
        assert_eq!(u[&Generator::rho(2, 1)], Word::gen(Generator::artin(1, 2)));
        assert_eq!(u[&Generator::rho(2, 0)], "p(2) A(1,2) p(2)".parse().unwrap());
        assert_eq!(u[&Generator::rho(2, 2)], "p(2) A(1,2) p(2)^-1".parse().unwrap());
        assert_eq!(u[&Generator::rho(1, 0)], "p(1)^2".parse().unwrap());
        assert_eq!(u.len(), 4);
    }
}
