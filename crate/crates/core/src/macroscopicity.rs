//! Objective size `N`, and subjective size `M = N · D` seen through a detector.

use crate::catalog::TwoBranchState;
use crate::distinguishability::{distinguishability, Distinguishability};
use crate::error::{Error, Result};
use crate::fock::Sign;
use crate::measurement::{DetectorModel, Subject};

/// `⟨n⟩ − |⟨a⟩|²`: the photon number left after removing the coherent displacement.
///
/// Equal to `½(Var x + Var p − 1)`, and therefore invariant under displacement.
pub fn n_fluct<'a>(subject: impl Into<Subject<'a>>) -> Result<f64> {
    let state = match subject.into() {
        Subject::Pure(s) => s,
        Subject::Mixed(_) => return Err(Error::UnsupportedMixedState),
    };
    let m = state.moments();
    let raw = m.mean_n - m.mean_a.norm_sqr();
    if raw < -1e-9 {
        log::warn!("negative fluctuation photon number {raw:e}; clamping to 0");
    }
    Ok(raw.max(0.0))
}

/// `M = N · D` with `D` in `[0, 1]`.
pub fn m_subjective(n: f64, d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "distinguishability {d} outside [0, 1]"
        )));
    }
    if !(n >= 0.0 && n.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "objective size must be finite and >= 0, got {n}"
        )));
    }
    Ok(n * d)
}

/// Everything known about one superposition under one detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroReport {
    pub sign: Sign,
    pub detector: DetectorModel,
    pub mean_n: f64,
    pub n_fluct: f64,
    pub d_bc: f64,
    pub d_kd: f64,
    pub m_bc: f64,
    pub m_kd: f64,
}

impl MacroReport {
    /// Combines the sign-dependent sizes with branch distinguishability computed elsewhere.
    pub fn assemble(
        state: &TwoBranchState,
        sign: Sign,
        detector: DetectorModel,
        d: Distinguishability,
    ) -> Result<Self> {
        let psi = state.superposition(sign);
        let n = n_fluct(psi)?;
        Ok(MacroReport {
            sign,
            detector,
            mean_n: psi.moments().mean_n,
            n_fluct: n,
            d_bc: d.bc,
            d_kd: d.kd,
            m_bc: m_subjective(n, d.bc)?,
            m_kd: m_subjective(n, d.kd)?,
        })
    }
}

pub fn report(state: &TwoBranchState, sign: Sign, detector: DetectorModel) -> Result<MacroReport> {
    let d = distinguishability(&state.branch_set, &detector)?;
    MacroReport::assemble(state, sign, detector, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{css, dfs};
    use crate::fock::{coherent_state, fock_state, squeezed_vacuum, Ensemble};
    use num_complex::Complex64;

    #[test]
    fn coherent_states_have_no_fluctuation_size() {
        let s = coherent_state(Complex64::new(1.7, -0.4), 1e-12).unwrap();
        assert!(n_fluct(&s).unwrap() < 1e-10);
    }

    #[test]
    fn fock_and_squeezed_sizes() {
        assert!((n_fluct(&fock_state(3, 8).unwrap()).unwrap() - 3.0).abs() < 1e-12);
        let r: f64 = 0.8;
        let sq = squeezed_vacuum(r, 1e-12).unwrap();
        assert!((n_fluct(&sq).unwrap() - r.sinh().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn mixed_states_rejected() {
        let mix = Ensemble::new(vec![
            (0.5, fock_state(0, 2).unwrap()),
            (0.5, fock_state(1, 2).unwrap()),
        ])
        .unwrap();
        assert_eq!(n_fluct(&mix).unwrap_err().kind(), "unsupported-mixed-state");
    }

    #[test]
    fn subjective_size_checks_range() {
        assert_eq!(m_subjective(3.0, 0.5).unwrap(), 1.5);
        assert!(m_subjective(3.0, 1.1).is_err());
        assert!(m_subjective(3.0, -0.1).is_err());
    }

    #[test]
    fn odd_cat_report() {
        let s = css(1.5, 1e-12).unwrap();
        let rep = report(&s, Sign::Minus, DetectorModel::homodyne(0.0, 0.0).unwrap()).unwrap();
        let a2: f64 = 2.25;
        assert!((rep.n_fluct - a2 / a2.tanh()).abs() < 1e-9);
        assert!((rep.d_kd - libm::erf(2f64.sqrt() * 1.5)).abs() < 1e-5);
        assert!((rep.m_kd - rep.n_fluct * rep.d_kd).abs() < 1e-12);
    }

    #[test]
    fn displaced_superposition_sizes() {
        let s = dfs(2.0, 1e-12).unwrap();
        let plus = report(&s, Sign::Plus, DetectorModel::pnrd(0.0).unwrap()).unwrap();
        let minus = report(&s, Sign::Minus, DetectorModel::pnrd(0.0).unwrap()).unwrap();
        assert!(plus.n_fluct < 1e-9);
        assert!((minus.n_fluct - 1.0).abs() < 1e-9);
        assert_eq!(plus.d_kd, minus.d_kd);
    }
}
