//! Two-branch state families: coherent-state superpositions (CSS), photon-subtracted
//! squeezed vacua (PSV) and displaced Fock-state superpositions (DFS).
//!
//! Every family is a pair of orthonormal branches `b1, b2` together with the
//! superpositions `ψ± ∝ b1 ± b2`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::distinguishability::{d_kd, BranchSet};
use crate::error::{ensure_finite, Error, Result};
use crate::fock::{
    coherent_state, displace_with, fock_state, squeezed_vacuum, subtract_photons, superpose,
    FockVector, Sign, Truncation,
};
use crate::measurement::DetectorModel;

pub const CSS_MAX_ALPHA: f64 = 4.0;
pub const PSV_MAX_R: f64 = 2.5;
pub const DFS_MAX_ALPHA: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Css,
    Psv,
    Dfs,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Css, Family::Psv, Family::Dfs];

    pub fn name(self) -> &'static str {
        match self {
            Family::Css => "css",
            Family::Psv => "psv",
            Family::Dfs => "dfs",
        }
    }

    /// Name of the family's scan parameter.
    pub fn parameter_name(self) -> &'static str {
        match self {
            Family::Psv => "r",
            _ => "alpha",
        }
    }

    /// Small integer used in numeric tables.
    pub fn id(self) -> u8 {
        match self {
            Family::Css => 0,
            Family::Psv => 1,
            Family::Dfs => 2,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "css" => Ok(Family::Css),
            "psv" => Ok(Family::Psv),
            "dfs" => Ok(Family::Dfs),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    Css { alpha: f64 },
    Psv { r: f64, m: usize },
    Dfs { alpha: f64 },
}

impl FamilyParams {
    /// Builds parameters from a family and its scan value; `m` only matters for PSV.
    pub fn new(family: Family, value: f64, m: usize) -> Self {
        match family {
            Family::Css => FamilyParams::Css { alpha: value },
            Family::Psv => FamilyParams::Psv { r: value, m },
            Family::Dfs => FamilyParams::Dfs { alpha: value },
        }
    }

    pub fn family(&self) -> Family {
        match self {
            FamilyParams::Css { .. } => Family::Css,
            FamilyParams::Psv { .. } => Family::Psv,
            FamilyParams::Dfs { .. } => Family::Dfs,
        }
    }

    /// The scan parameter (`α` or `r`).
    pub fn value(&self) -> f64 {
        match *self {
            FamilyParams::Css { alpha } | FamilyParams::Dfs { alpha } => alpha,
            FamilyParams::Psv { r, .. } => r,
        }
    }

    pub fn build(&self, truncation: impl Into<Truncation>) -> Result<TwoBranchState> {
        match *self {
            FamilyParams::Css { alpha } => css(alpha, truncation),
            FamilyParams::Psv { r, m } => psv(r, m, truncation),
            FamilyParams::Dfs { alpha } => dfs(alpha, truncation),
        }
    }
}

/// Orthonormal branches plus both superpositions.
#[derive(Debug, Clone)]
pub struct TwoBranchState {
    pub branch_set: BranchSet,
    pub psi_plus: FockVector,
    pub psi_minus: FockVector,
    pub params: FamilyParams,
    /// Homodyne phase at which the branches separate best (radians).
    pub recommended_homodyne_angle: f64,
}

impl TwoBranchState {
    fn assemble(b1: FockVector, b2: FockVector, params: FamilyParams, angle: f64) -> Result<Self> {
        let psi_plus = superpose(&b1, &b2, Sign::Plus)?;
        let psi_minus = superpose(&b1, &b2, Sign::Minus)?;
        Ok(TwoBranchState {
            branch_set: BranchSet::balanced(b1, b2)?,
            psi_plus,
            psi_minus,
            params,
            recommended_homodyne_angle: angle,
        })
    }

    pub fn family(&self) -> Family {
        self.params.family()
    }

    pub fn superposition(&self, sign: Sign) -> &FockVector {
        match sign {
            Sign::Plus => &self.psi_plus,
            Sign::Minus => &self.psi_minus,
        }
    }

    /// Largest Fock cutoff among branches and superpositions.
    pub fn max_cutoff(&self) -> usize {
        self.branch_set
            .branches()
            .iter()
            .chain([&self.psi_plus, &self.psi_minus])
            .map(FockVector::cutoff)
            .max()
            .unwrap_or(0)
    }

    /// Homodyne detector at the recommended phase.
    pub fn homodyne(&self, sigma: f64) -> Result<DetectorModel> {
        DetectorModel::homodyne(self.recommended_homodyne_angle, sigma)
    }
}

/// Branches `|α⟩` and `|−α⟩` for real `0 < α ≤ 4`.
pub fn css(alpha: f64, truncation: impl Into<Truncation>) -> Result<TwoBranchState> {
    ensure_finite("alpha", alpha)?;
    if alpha <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if alpha > CSS_MAX_ALPHA {
        return Err(Error::UnsupportedRange(format!(
            "alpha {alpha} exceeds {CSS_MAX_ALPHA}"
        )));
    }
    let truncation = truncation.into();
    let b1 = coherent_state(Complex64::new(alpha, 0.0), truncation)?;
    let b2 = coherent_state(Complex64::new(-alpha, 0.0), truncation)?;
    TwoBranchState::assemble(b1, b2, FamilyParams::Css { alpha }, 0.0)
}

/// Subtracted squeezed vacua: with `ψa ∝ a^m S(r)|0⟩` and `ψb ∝ a^{m+1} S(r)|0⟩`,
/// the branches are `(ψa ± ψb)/√2`, so `ψ+ = ψa` and `ψ− = ψb`.
pub fn psv(r: f64, m: usize, truncation: impl Into<Truncation>) -> Result<TwoBranchState> {
    ensure_finite("r", r)?;
    if !(0.0..=PSV_MAX_R).contains(&r) {
        return Err(Error::UnsupportedRange(format!(
            "r must lie in [0, {PSV_MAX_R}], got {r}"
        )));
    }
    if r == 0.0 {
        return Err(Error::DegenerateSubtraction(0.0));
    }
    if m == 0 {
        return Err(Error::InvalidArgument(
            "at least one photon must be subtracted".into(),
        ));
    }
    let mut truncation = truncation.into();
    truncation.validate()?;
    let target = truncation.tail_tolerance;
    let (a, b) = loop {
        let vacuum = squeezed_vacuum(r, truncation)?;
        let (a, _) = subtract_photons(&vacuum, m)?;
        let (b, _) = subtract_photons(&a, 1)?;
        // Subtraction amplifies the neglected tail; tighten until the result is in budget.
        if b.tail_mass() <= target || truncation.tail_tolerance < 1e-290 {
            break (a, b);
        }
        truncation.tail_tolerance *= (target / b.tail_mass()).max(1e-30);
    };
    let b1 = superpose(&a, &b, Sign::Plus)?;
    let b2 = superpose(&a, &b, Sign::Minus)?;
    let params = FamilyParams::Psv { r, m };
    let mut state = TwoBranchState::assemble(b1, b2, params, 0.0)?;
    state.recommended_homodyne_angle = best_angle(&state.branch_set)?;
    Ok(state)
}

/// Picks the phase in `{0, π/2}` with the larger ideal-homodyne `D_KD`; ties go to 0.
fn best_angle(set: &BranchSet) -> Result<f64> {
    let along_x = d_kd(set, &DetectorModel::homodyne(0.0, 0.0)?)?;
    let along_p = d_kd(set, &DetectorModel::homodyne(FRAC_PI_2, 0.0)?)?;
    Ok(if along_p > along_x + 1e-12 {
        FRAC_PI_2
    } else {
        0.0
    })
}

/// Branches `D(α)(|0⟩ ± |1⟩)/√2` for real `0 ≤ α ≤ 4`.
pub fn dfs(alpha: f64, truncation: impl Into<Truncation>) -> Result<TwoBranchState> {
    ensure_finite("alpha", alpha)?;
    if alpha < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "alpha must be non-negative, got {alpha}"
        )));
    }
    if alpha > DFS_MAX_ALPHA {
        return Err(Error::UnsupportedRange(format!(
            "alpha {alpha} exceeds {DFS_MAX_ALPHA}"
        )));
    }
    let truncation = truncation.into();
    let vacuum = fock_state(0, 2)?;
    let one = fock_state(1, 2)?;
    let shift = Complex64::new(alpha, 0.0);
    let branch = |sign| -> Result<FockVector> {
        let base = superpose(&vacuum, &one, sign)?;
        if alpha == 0.0 {
            Ok(base)
        } else {
            displace_with(&base, shift, truncation)
        }
    };
    TwoBranchState::assemble(
        branch(Sign::Plus)?,
        branch(Sign::Minus)?,
        FamilyParams::Dfs { alpha },
        0.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_of(v: &FockVector) -> f64 {
        v.moments().mean_n
    }

    #[test]
    fn cat_photon_numbers() {
        let s = css(1.5, 1e-12).unwrap();
        let a2: f64 = 2.25;
        assert!((n_of(&s.psi_plus) - a2 * a2.tanh()).abs() < 1e-9);
        assert!((n_of(&s.psi_minus) - a2 / a2.tanh()).abs() < 1e-9);
        assert_eq!(s.recommended_homodyne_angle, 0.0);
    }

    #[test]
    fn css_range() {
        assert_eq!(css(0.0, 1e-12).unwrap_err().kind(), "invalid-argument");
        assert_eq!(css(4.5, 1e-12).unwrap_err().kind(), "unsupported-range");
        assert!(css(4.0, 1e-12).is_ok());
    }

    #[test]
    fn psv_superpositions_are_subtracted_states() {
        let s = psv(1.0, 1, 1e-12).unwrap();
        let c2r = 2.0f64.cosh();
        assert!((n_of(&s.psi_plus) - (1.5 * c2r - 0.5)).abs() < 1e-8);
        assert!(
            s.branch_set.branches()[0]
                .inner(&s.branch_set.branches()[1])
                .norm()
                < 1e-10
        );
        let (plain, _) = subtract_photons(&squeezed_vacuum(1.0, 1e-12).unwrap(), 1).unwrap();
        assert!((s.psi_plus.fidelity(&plain) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn psv_range() {
        assert_eq!(
            psv(0.0, 1, 1e-12).unwrap_err().kind(),
            "degenerate-subtraction"
        );
        assert_eq!(psv(-0.1, 1, 1e-12).unwrap_err().kind(), "unsupported-range");
        assert_eq!(psv(2.6, 1, 1e-12).unwrap_err().kind(), "unsupported-range");
        assert_eq!(psv(1.0, 0, 1e-12).unwrap_err().kind(), "invalid-argument");
    }

    #[test]
    fn psv_large_squeezing_stays_within_budget() {
        let s = psv(2.5, 1, 1e-12).unwrap();
        assert!(s.psi_minus.tail_mass() <= 1e-12);
        assert!(s.max_cutoff() <= crate::fock::MAX_CUTOFF);
    }

    #[test]
    fn dfs_photon_numbers() {
        let s = dfs(1.3, 1e-12).unwrap();
        // ψ+ ∝ D(α)|0⟩ and ψ− ∝ D(α)|1⟩
        assert!((n_of(&s.psi_plus) - 1.69).abs() < 1e-9);
        assert!((n_of(&s.psi_minus) - 2.69).abs() < 1e-9);
        let zero = dfs(0.0, 1e-12).unwrap();
        assert!((n_of(&zero.psi_minus) - 1.0).abs() < 1e-12);
        assert!(dfs(-1.0, 1e-12).is_err());
        assert_eq!(dfs(4.1, 1e-12).unwrap_err().kind(), "unsupported-range");
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("cat".parse::<Family>().is_err());
    }
}
