//! How well a detector tells the branches of a superposition apart.
//!
//! A [`BranchSet`] holds coefficients `c_k` and pure branches `|b_k⟩`. Heralding
//! on an orthogonal partner mode leaves the mixture `Σ |c_k|² |b_k⟩⟨b_k|`; each
//! branch's outcome distribution is then compared with the distribution of the
//! renormalized mixture of all the *other* branches.
//!
//! Two comparisons are provided: `D_BC = 1 − Σ_k |c_k|² Ω(b_k, ρ̃_k)` built on the
//! Bhattacharyya coefficient, and `D_KD = Σ_k |c_k|² KD(b_k, ρ̃_k)` built on the
//! Kolmogorov (half-L1) distance.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::fock::{Ensemble, FockVector};
use crate::measurement::{
    blur_pdf, blur_pmf, homodyne_pdfs_shared, pnrd_pmf, DetectorKind, DetectorModel, Pdf, Pmf,
};

/// Amount by which a measure may stray outside `[0, 1]` before it is reported.
const CLAMP_NOISE: f64 = 1e-9;

/// Coefficients and branches of a multi-branch state.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet {
    coefficients: Vec<Complex64>,
    branches: Vec<FockVector>,
}

impl BranchSet {
    pub fn new(coefficients: Vec<Complex64>, branches: Vec<FockVector>) -> Result<Self> {
        if coefficients.len() != branches.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for {} branches",
                coefficients.len(),
                branches.len()
            )));
        }
        if branches.len() < 2 {
            return Err(Error::InvalidArgument(
                "a branch set needs at least two branches".into(),
            ));
        }
        let total: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "sum of |c_k|^2 is {total}, not 1"
            )));
        }
        if let Some(b) = branches.iter().find(|b| (b.norm_sqr() - 1.0).abs() > 1e-10) {
            return Err(Error::InvalidArgument(format!(
                "branch has squared norm {}",
                b.norm_sqr()
            )));
        }
        Ok(BranchSet {
            coefficients,
            branches,
        })
    }

    /// Two branches with equal weight `1/√2`.
    pub fn balanced(first: FockVector, second: FockVector) -> Result<Self> {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new(vec![h, h], vec![first, second])
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn branches(&self) -> &[FockVector] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// `|c_k|²`
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Same branches in reverse order.
    pub fn reversed(&self) -> BranchSet {
        BranchSet {
            coefficients: self.coefficients.iter().rev().copied().collect(),
            branches: self.branches.iter().rev().cloned().collect(),
        }
    }
}

/// Weights of the mixture of all branches except `k`, renormalized.
fn complement_weights(weights: &[f64], k: usize) -> Result<Vec<(usize, f64)>> {
    if k >= weights.len() {
        return Err(Error::InvalidArgument(format!(
            "branch index {k} out of range for {} branches",
            weights.len()
        )));
    }
    let rest: f64 = weights
        .iter()
        .enumerate()
        .filter(|(l, _)| *l != k)
        .map(|(_, w)| w)
        .sum();
    if rest <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "branches other than {k} carry no weight"
        )));
    }
    Ok(weights
        .iter()
        .enumerate()
        .filter(|(l, w)| *l != k && **w > 0.0)
        .map(|(l, w)| (l, w / rest))
        .collect())
}

/// `ρ̃_k`: the other branches of the set, weighted by `|c_l|²` and renormalized.
///
/// `k` is zero-based.
pub fn complement_mixture(set: &BranchSet, k: usize) -> Result<Ensemble> {
    let parts = complement_weights(&set.weights(), k)?;
    Ensemble::new(
        parts
            .into_iter()
            .map(|(l, w)| (w, set.branches[l].clone()))
            .collect(),
    )
}

/// An outcome distribution of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Continuous(Pdf),
    Discrete(Pmf),
}

impl From<Pdf> for Distribution {
    fn from(pdf: Pdf) -> Self {
        Distribution::Continuous(pdf)
    }
}

impl From<Pmf> for Distribution {
    fn from(pmf: Pmf) -> Self {
        Distribution::Discrete(pmf)
    }
}

impl Distribution {
    /// Number of samples or outcomes.
    pub fn len(&self) -> usize {
        match self {
            Distribution::Continuous(p) => p.grid().n_points,
            Distribution::Discrete(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Weighted average of aligned distributions.
    pub fn mixture(parts: &[(f64, &Distribution)]) -> Result<Distribution> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut acc = vec![0.0; first.len()];
        for (w, d) in parts {
            check_aligned(first, d)?;
            acc.iter_mut()
                .zip(d.samples())
                .for_each(|(a, v)| *a += w * v);
        }
        Ok(match first {
            Distribution::Continuous(p) => Distribution::Continuous(Pdf::new(*p.grid(), acc)?),
            Distribution::Discrete(_) => Distribution::Discrete(Pmf::new(acc)?),
        })
    }

    fn samples(&self) -> &[f64] {
        match self {
            Distribution::Continuous(p) => p.values(),
            Distribution::Discrete(p) => p.probabilities(),
        }
    }
}

fn check_aligned(p: &Distribution, q: &Distribution) -> Result<()> {
    match (p, q) {
        (Distribution::Continuous(a), Distribution::Continuous(b))
            if a.grid().matches(b.grid()) =>
        {
            Ok(())
        }
        (Distribution::Discrete(a), Distribution::Discrete(b)) if a.len() == b.len() => Ok(()),
        _ => Err(Error::GridMismatch),
    }
}

fn clamp_unit(raw: f64, what: &str) -> f64 {
    if !(-CLAMP_NOISE..=1.0 + CLAMP_NOISE).contains(&raw) {
        log::warn!("{what} = {raw:e} outside [0, 1] by more than {CLAMP_NOISE:e}; clamping");
    }
    raw.clamp(0.0, 1.0)
}

/// `Ω = ∫ √(P Q) dλ` (a sum for discrete outcomes).
pub fn bhattacharyya_coeff(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_aligned(p, q)?;
    let raw = match (p, q) {
        (Distribution::Continuous(a), Distribution::Continuous(b)) => {
            let dx = a.grid().dx();
            let root: Vec<f64> = a
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| (x * y).sqrt())
                .collect();
            dx * (root.iter().sum::<f64>() - 0.5 * (root[0] + root[root.len() - 1]))
        }
        _ => p
            .samples()
            .iter()
            .zip(q.samples())
            .map(|(x, y)| (x * y).sqrt())
            .sum(),
    };
    Ok(clamp_unit(raw, "Bhattacharyya coefficient"))
}

/// `KD = ½ ∫ |P − Q| dλ`.
///
/// For sampled densities the integrand is taken piecewise linear between samples,
/// with sign changes located exactly inside each cell.
pub fn kolmogorov_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_aligned(p, q)?;
    let raw = match (p, q) {
        (Distribution::Continuous(a), Distribution::Continuous(b)) => {
            let diff: Vec<f64> = a
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| x - y)
                .collect();
            0.5 * abs_integral(&diff, a.grid().dx())
        }
        _ => {
            0.5 * p
                .samples()
                .iter()
                .zip(q.samples())
                .map(|(x, y)| (x - y).abs())
                .sum::<f64>()
        }
    };
    Ok(clamp_unit(raw, "Kolmogorov distance"))
}

/// `∫ |f|` for samples of a smooth `f` on a uniform grid.
///
/// Cells where `f` changes sign are split at the linear zero crossing. Each
/// same-sign run then gets the Euler–Maclaurin endpoint term `h²/12 · Δ|f|'`,
/// which the kink at the crossing would otherwise leave at second order.
fn abs_integral(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    let slope = |i: usize| -> f64 {
        if i == 0 {
            (f[1] - f[0]) / h
        } else if i == n - 1 {
            (f[n - 1] - f[n - 2]) / h
        } else {
            (f[i + 1] - f[i - 1]) / (2.0 * h)
        }
    };
    let mut total = 0.0;
    let mut correction = 0.0;
    for i in 0..n - 1 {
        let (l, r) = (f[i], f[i + 1]);
        if l * r >= 0.0 {
            total += 0.5 * h * (l.abs() + r.abs());
        } else {
            total += 0.5 * h * (l * l + r * r) / (l.abs() + r.abs());
            // run ending at i, run starting at i + 1
            correction -= l.signum() * slope(i) - r.signum() * slope(i + 1);
        }
        if i > 0 && l == 0.0 && f[i - 1] * r < 0.0 {
            correction -= 2.0 * f[i - 1].signum() * slope(i);
        }
    }
    total + h * h / 12.0 * correction
}

/// Minimum single-shot error probability for equal priors, `(1 − KD)/2`.
pub fn error_probability(kolmogorov_distance: f64) -> f64 {
    0.5 * (1.0 - kolmogorov_distance)
}

/// Both distinguishability measures for one branch set and detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distinguishability {
    pub bc: f64,
    pub kd: f64,
}

/// Per-branch outcome distributions under one detector, aligned on a common support.
///
/// Building the ideal distributions once and blurring them for each resolution
/// avoids recomputing Hermite sums across a resolution sweep.
#[derive(Debug, Clone)]
pub struct BranchDistributions {
    kind: DetectorKind,
    sigma: f64,
    weights: Vec<f64>,
    distributions: Vec<Distribution>,
}

impl BranchDistributions {
    /// Distributions for a perfect-resolution detector of the given kind.
    pub fn ideal(set: &BranchSet, kind: DetectorKind) -> Result<Self> {
        let distributions = match kind {
            DetectorKind::Homodyne { angle } => {
                ensure_finite("angle", angle)?;
                let states: Vec<&FockVector> = set.branches.iter().collect();
                homodyne_pdfs_shared(&states, angle)?
                    .into_iter()
                    .map(Distribution::Continuous)
                    .collect()
            }
            DetectorKind::Pnrd => {
                let pmfs = set
                    .branches
                    .iter()
                    .map(pnrd_pmf)
                    .collect::<Result<Vec<Pmf>>>()?;
                let len = pmfs.iter().map(Pmf::support_len).max().unwrap_or(1);
                pmfs.into_iter()
                    .map(|p| {
                        let trimmed = p.probabilities()[..len.min(p.len())].to_vec();
                        Pmf::new(trimmed).map(|p| Distribution::Discrete(p.padded(len)))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(BranchDistributions {
            kind,
            sigma: 0.0,
            weights: set.weights(),
            distributions,
        })
    }

    /// Blurs the ideal distributions with resolution `sigma`.
    pub fn at_sigma(&self, sigma: f64) -> Result<Self> {
        if self.sigma != 0.0 {
            return Err(Error::InvalidArgument(
                "distributions are already blurred".into(),
            ));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "resolution must be finite and >= 0, got {sigma}"
            )));
        }
        if sigma == 0.0 {
            return Ok(self.clone());
        }
        let distributions = self
            .distributions
            .iter()
            .map(|d| match d {
                Distribution::Continuous(p) => blur_pdf(p, sigma).map(Distribution::Continuous),
                Distribution::Discrete(p) => blur_pmf(p, sigma).map(Distribution::Continuous),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BranchDistributions {
            sigma,
            distributions,
            ..self.clone()
        })
    }

    pub fn detector(&self) -> DetectorModel {
        DetectorModel {
            kind: self.kind,
            sigma: self.sigma,
        }
    }

    pub fn distributions(&self) -> &[Distribution] {
        &self.distributions
    }

    /// Samples per distribution (grid points or photon-number outcomes).
    pub fn support_size(&self) -> usize {
        self.distributions.first().map_or(0, Distribution::len)
    }

    /// Distribution of `ρ̃_k`.
    pub fn complement(&self, k: usize) -> Result<Distribution> {
        let parts = complement_weights(&self.weights, k)?;
        let refs: Vec<(f64, &Distribution)> = parts
            .iter()
            .map(|(l, w)| (*w, &self.distributions[*l]))
            .collect();
        Distribution::mixture(&refs)
    }

    pub fn measures(&self) -> Result<Distinguishability> {
        let mut overlap = 0.0;
        let mut distance = 0.0;
        for (k, w) in self.weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let rest = self.complement(k)?;
            overlap += w * bhattacharyya_coeff(&self.distributions[k], &rest)?;
            distance += w * kolmogorov_distance(&self.distributions[k], &rest)?;
        }
        Ok(Distinguishability {
            bc: clamp_unit(1.0 - overlap, "D_BC"),
            kd: clamp_unit(distance, "D_KD"),
        })
    }
}

/// Both measures for `set` under `detector`.
pub fn distinguishability(set: &BranchSet, detector: &DetectorModel) -> Result<Distinguishability> {
    BranchDistributions::ideal(set, detector.kind)?
        .at_sigma(detector.sigma)?
        .measures()
}

/// `D_BC = 1 − Σ_k |c_k|² Ω(b_k, ρ̃_k)`.
pub fn d_bc(set: &BranchSet, detector: &DetectorModel) -> Result<f64> {
    distinguishability(set, detector).map(|d| d.bc)
}

/// `D_KD = Σ_k (|c_k|²/2) ∫ |P(λ, b_k) − P(λ, ρ̃_k)| dλ`.
pub fn d_kd(set: &BranchSet, detector: &DetectorModel) -> Result<f64> {
    distinguishability(set, detector).map(|d| d.kd)
}

/// Closed-form `D_KD` of the displaced `(|0⟩ ± |1⟩)/√2` branches under ideal
/// photon counting, for real positive displacement `α`:
///
/// `e^{−α²} α Σ_{m≥0} α^{2m−2}/m! |m − α²|`.
///
/// The `m = α²` term vanishes whenever `α²` is a positive integer, which is where
/// the curve has its cusps.
pub fn dfs_kd_closed_form(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "closed form needs a real positive amplitude, got {alpha}"
        )));
    }
    let lambda = alpha * alpha;
    let ln_lambda = lambda.ln();
    let mut ln_fact = 0.0;
    let mut sum = 0.0;
    let mut quiet = 0;
    let mut m = 0usize;
    // e^{-λ} α α^{2m-2}/m! = e^{-λ} λ^m / (m! α)
    loop {
        if m > 0 {
            ln_fact += (m as f64).ln();
        }
        let weight = (-lambda + m as f64 * ln_lambda - ln_fact).exp() / alpha;
        let term = weight * (m as f64 - lambda).abs();
        sum += term;
        quiet = if term < 1e-16 { quiet + 1 } else { 0 };
        if (quiet >= 3 && m as f64 > lambda) || m > 100_000 {
            break;
        }
        m += 1;
    }
    Ok(clamp_unit(sum, "closed-form D_KD"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, displace, fock_state, superpose, Sign};
    use crate::measurement::Grid;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cat_branches(alpha: f64) -> BranchSet {
        BranchSet::balanced(
            coherent_state(c(alpha), 1e-12).unwrap(),
            coherent_state(c(-alpha), 1e-12).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn complement_of_two() {
        let set = cat_branches(1.0);
        let rest = complement_mixture(&set, 0).unwrap();
        assert_eq!(rest.components().len(), 1);
        assert_eq!(rest.components()[0].0, 1.0);
        assert_eq!(rest.components()[0].1, set.branches()[1]);
    }

    #[test]
    fn complement_of_three() {
        let b: Vec<FockVector> = (0..3).map(|n| fock_state(n, 3).unwrap()).collect();
        let coeffs = vec![c(0.5f64.sqrt()), c(0.5), c(0.5)];
        let set = BranchSet::new(coeffs, b).unwrap();
        let rest = complement_mixture(&set, 0).unwrap();
        let weights: Vec<f64> = rest.components().iter().map(|(w, _)| *w).collect();
        assert!((weights[0] - 0.5).abs() < 1e-15 && (weights[1] - 0.5).abs() < 1e-15);
        assert_eq!(
            complement_mixture(&cat_branches(1.0), 2)
                .unwrap_err()
                .kind(),
            "invalid-argument"
        );
    }

    #[test]
    fn branch_set_validation() {
        let one = fock_state(0, 2).unwrap();
        assert!(BranchSet::new(vec![c(1.0)], vec![one.clone()]).is_err());
        assert!(BranchSet::new(vec![c(1.0), c(1.0)], vec![one.clone(), one.clone()]).is_err());
    }

    #[test]
    fn overlap_and_distance_extremes() {
        let grid = Grid::new(-10.0, 10.0, 401).unwrap();
        let bump = |centre: f64| -> Distribution {
            let values = grid
                .points()
                .iter()
                .map(|x| {
                    let u: f64 = x - centre;
                    if u.abs() < 1.0 {
                        1.0 - u.abs()
                    } else {
                        0.0
                    }
                })
                .collect();
            Pdf::new(grid, values).unwrap().into()
        };
        let p = bump(-5.0);
        let q = bump(5.0);
        assert!((bhattacharyya_coeff(&p, &p).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(kolmogorov_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(bhattacharyya_coeff(&p, &q).unwrap(), 0.0);
        assert!((kolmogorov_distance(&p, &q).unwrap() - 1.0).abs() < 1e-9);
        let pmf = |v: Vec<f64>| Distribution::Discrete(Pmf::new(v).unwrap());
        assert_eq!(
            kolmogorov_distance(&pmf(vec![1.0, 0.0]), &pmf(vec![0.0, 1.0])).unwrap(),
            1.0
        );
        assert_eq!(
            bhattacharyya_coeff(&pmf(vec![1.0, 0.0]), &pmf(vec![0.0, 1.0])).unwrap(),
            0.0
        );
        assert_eq!(error_probability(1.0), 0.0);
        assert_eq!(error_probability(0.0), 0.5);
    }

    #[test]
    fn mismatched_supports() {
        let a = Distribution::Discrete(Pmf::new(vec![1.0]).unwrap());
        let b = Distribution::Discrete(Pmf::new(vec![0.5, 0.5]).unwrap());
        assert_eq!(
            kolmogorov_distance(&a, &b).unwrap_err(),
            Error::GridMismatch
        );
        let g1 = Grid::new(0.0, 1.0, 64).unwrap();
        let g2 = Grid::new(0.0, 2.0, 64).unwrap();
        let p = Distribution::Continuous(Pdf::new(g1, vec![1.0; 64]).unwrap());
        let q = Distribution::Continuous(Pdf::new(g2, vec![0.5; 64]).unwrap());
        assert_eq!(
            bhattacharyya_coeff(&p, &q).unwrap_err().kind(),
            "grid-mismatch"
        );
        assert_eq!(
            bhattacharyya_coeff(&p, &a).unwrap_err().kind(),
            "grid-mismatch"
        );
    }

    #[test]
    fn identical_branches_are_indistinguishable() {
        let s = coherent_state(c(0.9), 1e-12).unwrap();
        let set = BranchSet::balanced(s.clone(), s).unwrap();
        for det in [
            DetectorModel::homodyne(0.0, 0.0).unwrap(),
            DetectorModel::pnrd(0.0).unwrap(),
        ] {
            let d = distinguishability(&set, &det).unwrap();
            assert!(d.bc.abs() < 1e-9 && d.kd.abs() < 1e-9);
        }
    }

    #[test]
    fn cat_homodyne_overlap() {
        let set = cat_branches(1.0);
        let det = DetectorModel::homodyne(0.0, 0.0).unwrap();
        let dists = BranchDistributions::ideal(&set, det.kind).unwrap();
        let omega =
            bhattacharyya_coeff(&dists.distributions()[0], &dists.distributions()[1]).unwrap();
        assert!((omega - (-2.0f64).exp()).abs() < 1e-4);
        assert!((d_bc(&set, &det).unwrap() - (1.0 - (-2.0f64).exp())).abs() < 1e-4);
    }

    #[test]
    fn cat_photon_counting_is_blind() {
        let set = cat_branches(1.7);
        let det = DetectorModel::pnrd(0.0).unwrap();
        let d = distinguishability(&set, &det).unwrap();
        assert!(d.bc < 1e-9 && d.kd < 1e-9);
    }

    #[test]
    fn two_peak_pmf_against_single_peak() {
        let both = Pmf::new(vec![0.5, 0.5]).unwrap();
        let single = Pmf::new(vec![1.0, 0.0]).unwrap();
        let a: Distribution = blur_pmf(&both, 0.05).unwrap().into();
        let b: Distribution = blur_pmf(&single, 0.05).unwrap().into();
        assert!((kolmogorov_distance(&a, &b).unwrap() - 0.5).abs() < 1e-6);
    }

    /// `2 α e^{−α²} α^{2k}/k!` with `k = ⌊α²⌋`: the Poisson mean absolute
    /// deviation `2λ P(⌊λ⌋)` divided by `α`.
    fn poisson_mad_oracle(alpha: f64) -> f64 {
        let lambda = alpha * alpha;
        let k = lambda.floor() as usize;
        let mut p = (-lambda).exp();
        for j in 1..=k {
            p *= lambda / j as f64;
        }
        2.0 * lambda * p / alpha
    }

    #[test]
    fn closed_form_matches_mad_identity() {
        for &alpha in &[0.01, 0.3, 1.0, 1.2, 2f64.sqrt(), 2.0, 3.0, 4.0] {
            let series = dfs_kd_closed_form(alpha).unwrap();
            assert!(
                (series - poisson_mad_oracle(alpha)).abs() < 1e-12,
                "alpha {alpha}"
            );
        }
        assert!(dfs_kd_closed_form(0.01).unwrap() < 0.03);
        assert_eq!(
            dfs_kd_closed_form(0.0).unwrap_err().kind(),
            "invalid-argument"
        );
        assert!(dfs_kd_closed_form(-1.0).is_err());
    }

    #[test]
    fn closed_form_at_unit_amplitude() {
        // m = 1 term vanishes: e^{-1}(1 + Σ_{m≥2} |m − 1|/m!)
        let mut tail = 0.0;
        let mut fact = 1.0;
        for m in 2..40 {
            fact *= m as f64;
            tail += (m as f64 - 1.0) / fact;
        }
        let direct = (-1.0f64).exp() * (1.0 + tail);
        assert!((dfs_kd_closed_form(1.0).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn displaced_superposition_matches_closed_form() {
        let alpha = 2.0;
        let vac = fock_state(0, 2).unwrap();
        let one = fock_state(1, 2).unwrap();
        let plus = displace(&superpose(&vac, &one, Sign::Plus).unwrap(), c(alpha)).unwrap();
        let minus = displace(&superpose(&vac, &one, Sign::Minus).unwrap(), c(alpha)).unwrap();
        let set = BranchSet::balanced(plus, minus).unwrap();
        let kd = d_kd(&set, &DetectorModel::pnrd(0.0).unwrap()).unwrap();
        assert!((kd - dfs_kd_closed_form(alpha).unwrap()).abs() < 1e-6);
    }
}
