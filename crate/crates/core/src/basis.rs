//! Labels of the truncated Fock ⊗ pseudospin basis, the tetradic Liouville
//! basis built from its projectors, and the parity gradings of both.
//!
//! All public indices are 1-based. A Fock label `|n; j, m_z>` carries the
//! global index `f = (2j+1) n + m_z + j + 1`; a Liouville label `|f', f>>`
//! (the projector `|f'><f|`) carries `F = (f' - 1) D_H + f`, i.e. the bra
//! index is the outer one.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Pseudospin length, stored as the integer `2j` so that half-integer spins
/// keep exact parity arithmetic.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub fn from_twice(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidParams("j must be at least 1/2".into()));
        }
        Ok(Spin(twice_j))
    }

    /// Parses a (half-)integer `j` given as a float.
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !(twice.is_finite() && twice >= 1.0 && (twice - twice.round()).abs() < 1e-9) {
            return Err(Error::InvalidParams(format!("j = {j} is not a positive half-integer")));
        }
        Spin::from_twice(twice.round() as u32)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Number of atoms `N = 2j` in the symmetric subspace.
    pub fn num_atoms(self) -> u32 {
        self.0
    }

    /// Multiplicity `2j + 1` of the pseudospin factor.
    pub fn multiplicity(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for Spin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for Spin {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = f64::deserialize(d)?;
        Spin::from_f64(j).map_err(serde::de::Error::custom)
    }
}

/// Physical constants of the open Dicke model plus the bosonic truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    /// Field frequency ω.
    pub omega: f64,
    /// Atomic splitting ω₀.
    pub omega0: f64,
    /// Corotating coupling γ₋.
    pub gamma_minus: f64,
    /// Counterrotating coupling γ₊.
    pub gamma_plus: f64,
    /// Cavity decay κ.
    pub kappa: f64,
    pub j: Spin,
    pub n_max: usize,
}

impl ModelParams {
    pub fn new(
        omega: f64,
        omega0: f64,
        gamma_minus: f64,
        gamma_plus: f64,
        kappa: f64,
        j: Spin,
        n_max: usize,
    ) -> Result<Self> {
        let p = ModelParams { omega, omega0, gamma_minus, gamma_plus, kappa, j, n_max };
        p.validate()?;
        Ok(p)
    }

    /// `ω = ω₀ = κ = 1`, the setting used throughout the study.
    pub fn unit(gamma_minus: f64, gamma_plus: f64, j: Spin, n_max: usize) -> Result<Self> {
        Self::new(1.0, 1.0, gamma_minus, gamma_plus, 1.0, j, n_max)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega, self.omega0, self.gamma_minus, self.gamma_plus, self.kappa]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if self.omega <= 0.0 || self.omega0 <= 0.0 {
            return Err(Error::InvalidParams("omega and omega0 must be positive".into()));
        }
        if self.kappa < 0.0 || self.gamma_minus < 0.0 || self.gamma_plus < 0.0 {
            return Err(Error::InvalidParams(
                "kappa, gamma_minus and gamma_plus must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn is_isotropic(&self) -> bool {
        self.gamma_minus == self.gamma_plus
    }

    /// Anisotropy δ = γ₊/γ₋ (infinite when γ₋ = 0 < γ₊).
    pub fn delta(&self) -> f64 {
        self.gamma_plus / self.gamma_minus
    }

    pub fn with_n_max(&self, n_max: usize) -> Self {
        ModelParams { n_max, ..self.clone() }
    }

    pub fn with_couplings(&self, gamma_minus: f64, gamma_plus: f64) -> Self {
        ModelParams { gamma_minus, gamma_plus, ..self.clone() }
    }

    pub fn basis(&self) -> Basis {
        Basis::new(self.j, self.n_max)
    }
}

/// Isotropic `γ = 2` at `j = 1`, `n_max = 40`, unit frequencies and loss.
impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            omega: 1.0,
            omega0: 1.0,
            gamma_minus: 2.0,
            gamma_plus: 2.0,
            kappa: 1.0,
            j: Spin(2),
            n_max: 40,
        }
    }
}

/// `D_H = (2j+1)(n_max+1)`.
pub fn hilbert_dim(j: Spin, n_max: usize) -> usize {
    j.multiplicity() * (n_max + 1)
}

/// `D_L = D_H²`.
pub fn liouville_dim(j: Spin, n_max: usize) -> usize {
    let d = hilbert_dim(j, n_max);
    d * d
}

/// Eigenvalue of a parity (super)operator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Positive,
    Negative,
}

impl Parity {
    pub fn sign(self) -> i32 {
        match self {
            Parity::Positive => 1,
            Parity::Negative => -1,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Parity::Positive),
            -1 => Ok(Parity::Negative),
            s => Err(Error::InvalidArgument(format!("parity sign must be ±1, got {s}"))),
        }
    }

    fn from_exponent(e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            Parity::Positive
        } else {
            Parity::Negative
        }
    }
}

impl std::ops::Mul for Parity {
    type Output = Parity;

    fn mul(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Positive
        } else {
            Parity::Negative
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Positive => "+1",
            Parity::Negative => "-1",
        })
    }
}

/// A Fock ⊗ pseudospin basis state `|n; j, m_z>`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct FockLabel {
    pub n: usize,
    /// `2 m_z`.
    pub twice_m: i32,
    /// 1-based global index.
    pub f: usize,
}

impl FockLabel {
    pub fn m_z(&self) -> f64 {
        f64::from(self.twice_m) / 2.0
    }
}

/// A Liouville basis projector `|f'><f|`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiouvilleLabel {
    pub bra: FockLabel,
    pub ket: FockLabel,
    /// 1-based composite index, bra outer.
    pub index: usize,
}

impl LiouvilleLabel {
    pub fn is_diagonal(&self) -> bool {
        self.bra.f == self.ket.f
    }
}

/// Truncated basis at fixed `(j, n_max)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    pub j: Spin,
    pub n_max: usize,
}

impl Basis {
    pub fn new(j: Spin, n_max: usize) -> Self {
        Basis { j, n_max }
    }

    pub fn dim(&self) -> usize {
        hilbert_dim(self.j, self.n_max)
    }

    pub fn liouville_dim(&self) -> usize {
        liouville_dim(self.j, self.n_max)
    }

    pub fn fock_index(&self, n: usize, twice_m: i32) -> Result<FockLabel> {
        let tj = self.j.twice() as i32;
        if n > self.n_max {
            return Err(Error::LabelOutOfRange(format!("n = {n} > n_max = {}", self.n_max)));
        }
        if twice_m.abs() > tj || (twice_m + tj) % 2 != 0 {
            return Err(Error::LabelOutOfRange(format!(
                "m_z = {}/2 is not a valid projection for j = {}",
                twice_m, self.j
            )));
        }
        let shift = ((twice_m + tj) / 2) as usize;
        Ok(FockLabel { n, twice_m, f: self.j.multiplicity() * n + shift + 1 })
    }

    /// Inverse of [`Basis::fock_index`]; returns `(n, 2 m_z)`.
    pub fn fock_unindex(&self, f: usize) -> Result<(usize, i32)> {
        if f == 0 || f > self.dim() {
            return Err(Error::LabelOutOfRange(format!("f = {f} outside 1..={}", self.dim())));
        }
        let mult = self.j.multiplicity();
        let n = (f - 1) / mult;
        let shift = ((f - 1) % mult) as i32;
        Ok((n, 2 * shift - self.j.twice() as i32))
    }

    pub fn label(&self, f: usize) -> Result<FockLabel> {
        let (n, twice_m) = self.fock_unindex(f)?;
        Ok(FockLabel { n, twice_m, f })
    }

    /// All Fock labels in index order.
    pub fn labels(&self) -> impl Iterator<Item = FockLabel> + '_ {
        let mult = self.j.multiplicity();
        let tj = self.j.twice() as i32;
        (0..self.dim()).map(move |i| FockLabel {
            n: i / mult,
            twice_m: 2 * (i % mult) as i32 - tj,
            f: i + 1,
        })
    }

    /// `p = (-1)^(n + m_z + j)`.
    pub fn hilbert_parity(&self, label: &FockLabel) -> Parity {
        let shift = i64::from((label.twice_m + self.j.twice() as i32) / 2);
        Parity::from_exponent(label.n as i64 + shift)
    }

    pub fn liouville_label(&self, bra: FockLabel, ket: FockLabel) -> LiouvilleLabel {
        LiouvilleLabel { bra, ket, index: (bra.f - 1) * self.dim() + ket.f }
    }

    pub fn liouville_unindex(&self, index: usize) -> Result<LiouvilleLabel> {
        let d = self.dim();
        if index == 0 || index > d * d {
            return Err(Error::LabelOutOfRange(format!("F = {index} outside 1..={}", d * d)));
        }
        let bra = self.label((index - 1) / d + 1)?;
        let ket = self.label((index - 1) % d + 1)?;
        Ok(LiouvilleLabel { bra, ket, index })
    }

    /// `P = (-1)^(n' + m'_z - n - m_z)`, which equals `p' p`.
    pub fn liouville_parity(&self, label: &LiouvilleLabel) -> Parity {
        // twice_m values share the parity of 2j, so the half-difference is exact
        let dm = i64::from(label.bra.twice_m - label.ket.twice_m) / 2;
        Parity::from_exponent(label.bra.n as i64 - label.ket.n as i64 + dm)
    }

    /// Hilbert parity class sizes `(n₊, n₋)`.
    pub fn parity_class_sizes(&self) -> (usize, usize) {
        let plus = self.labels().filter(|l| self.hilbert_parity(l) == Parity::Positive).count();
        (plus, self.dim() - plus)
    }

    /// Size of a Liouville parity sector: `n₊² + n₋²` or `2 n₊ n₋`.
    pub fn sector_dim(&self, sector: Parity) -> usize {
        let (p, m) = self.parity_class_sizes();
        match sector {
            Parity::Positive => p * p + m * m,
            Parity::Negative => 2 * p * m,
        }
    }
}
