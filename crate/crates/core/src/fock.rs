//! Pure states of a single bosonic mode in a truncated Fock basis.
//!
//! Quadratures follow `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, so that the
//! vacuum has `var(x) = var(p) = 1/2` and `n = (x² + p² − 1)/2`.
//!
//! Constructors pick their own cutoff: they start from a generous estimate
//! and double it until the probability mass left beyond the cutoff falls
//! below the requested tail tolerance. That residual mass is recorded on the
//! returned [`FockVector`].

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Default bound on the probability mass allowed beyond the cutoff.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Environment variable overriding [`DEFAULT_TAIL_TOLERANCE`].
pub const TAIL_TOLERANCE_ENV: &str = "MACROLENS_TAIL_TOL";

/// Hard ceiling on any cutoff produced by the adaptive policy.
pub const MAX_CUTOFF: usize = 16_384;

/// Human-readable statement of the quadrature convention, repeated in output metadata.
pub const QUADRATURE_CONVENTION: &str =
    "x=(a+a^dag)/sqrt(2), p=(a-a^dag)/(i sqrt(2)), vacuum var(x)=var(p)=1/2, S(r)=exp[(r/2)(a^2-a^dag^2)] squeezes x for r>0";

/// Truncation policy shared by every state constructor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// Largest admissible probability mass beyond the cutoff.
    pub tail_tolerance: f64,
    /// Multiplier applied to every adaptively chosen cutoff (1 = converged policy).
    pub cutoff_scale: usize,
}

impl Truncation {
    pub fn new(tail_tolerance: f64) -> Self {
        Truncation {
            tail_tolerance,
            cutoff_scale: 1,
        }
    }

    /// Reads [`TAIL_TOLERANCE_ENV`], falling back to the default.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TAIL_TOLERANCE_ENV) {
            Ok(raw) => {
                let tol: f64 = raw.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("{TAIL_TOLERANCE_ENV}={raw:?} is not a number"))
                })?;
                let t = Truncation::new(tol);
                t.validate()?;
                Ok(t)
            }
            Err(_) => Ok(Truncation::default()),
        }
    }

    /// Same tolerance, every cutoff doubled.
    pub fn doubled(self) -> Self {
        Truncation {
            cutoff_scale: self.cutoff_scale * 2,
            ..self
        }
    }

    /// Tolerance squared, for quantities linear in the amplitudes.
    ///
    /// Wigner functions pick up cross terms `c_m c_n*`, so a tail of mass `ε`
    /// perturbs them at order `√ε`. Squaring the tolerance keeps that error at `ε`.
    pub fn for_phase_space(self) -> Self {
        Truncation {
            tail_tolerance: (self.tail_tolerance * self.tail_tolerance).max(1e-300),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance <= 1e-6) {
            return Err(Error::InvalidArgument(format!(
                "tail tolerance must lie in (0, 1e-6], got {}",
                self.tail_tolerance
            )));
        }
        if self.cutoff_scale == 0 {
            return Err(Error::InvalidArgument(
                "cutoff scale must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::new(DEFAULT_TAIL_TOLERANCE)
    }
}

impl From<f64> for Truncation {
    fn from(tail_tolerance: f64) -> Self {
        Truncation::new(tail_tolerance)
    }
}

/// Relative sign of a two-component superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Normalized pure state over photon numbers `0..cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
    tail_mass: f64,
}

impl FockVector {
    /// Normalizes the given amplitudes. The tail mass is taken to be zero.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::normalized(amplitudes, 0.0)
    }

    fn normalized(mut amplitudes: Vec<Complex64>, tail_mass: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument(
                "a state needs at least one amplitude".into(),
            ));
        }
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidArgument("amplitudes must be finite".into()));
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument(
                "the zero vector is not a state".into(),
            ));
        }
        amplitudes.iter_mut().for_each(|c| *c /= norm);
        Ok(FockVector {
            amplitudes,
            tail_mass,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len()
    }

    /// Estimated probability mass that lies at or beyond the cutoff.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// `⟨self|other⟩`, with the shorter vector implicitly zero-padded.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &FockVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Photon-number probabilities `|c_n|²`.
    pub fn photon_distribution(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Zero-extends the state to `cutoff` slots.
    pub fn pad_to_cutoff(&self, cutoff: usize) -> Result<FockVector> {
        if cutoff < self.cutoff() {
            return Err(Error::InvalidArgument(format!(
                "cannot shrink cutoff from {} to {cutoff}",
                self.cutoff()
            )));
        }
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.resize(cutoff, Complex64::new(0.0, 0.0));
        Ok(FockVector {
            amplitudes,
            tail_mass: self.tail_mass,
        })
    }

    /// First and second moments from the tridiagonal action of the ladder operators.
    pub fn moments(&self) -> Moments {
        let c = &self.amplitudes;
        let norm = self.norm_sqr();
        let mut mean_a = Complex64::new(0.0, 0.0);
        let mut mean_a2 = Complex64::new(0.0, 0.0);
        let mut mean_n = 0.0;
        for n in 1..c.len() {
            let nf = n as f64;
            mean_n += nf * c[n].norm_sqr();
            mean_a += c[n - 1].conj() * c[n] * nf.sqrt();
            if n >= 2 {
                mean_a2 += c[n - 2].conj() * c[n] * (nf * (nf - 1.0)).sqrt();
            }
        }
        mean_a /= norm;
        mean_a2 /= norm;
        mean_n /= norm;

        let mean_x = std::f64::consts::SQRT_2 * mean_a.re;
        let mean_p = std::f64::consts::SQRT_2 * mean_a.im;
        let var_x = mean_a2.re + mean_n + 0.5 - mean_x * mean_x;
        let var_p = -mean_a2.re + mean_n + 0.5 - mean_p * mean_p;
        Moments {
            mean_a,
            mean_a2,
            mean_n,
            mean_x,
            mean_p,
            var_x,
            var_p,
        }
    }
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|c| c.norm_sqr()).sum()
}

/// First and second moments of a single-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// `⟨a⟩`
    pub mean_a: Complex64,
    /// `⟨a²⟩`, needed for quadratures at arbitrary angles.
    pub mean_a2: Complex64,
    /// `⟨n⟩`
    pub mean_n: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

impl Moments {
    /// Mean and variance of `x_φ = (a e^{−iφ} + a† e^{iφ})/√2`.
    pub fn quadrature(&self, angle: f64) -> (f64, f64) {
        let rot = Complex64::from_polar(1.0, -angle);
        let mean = std::f64::consts::SQRT_2 * (self.mean_a * rot).re;
        let second = (self.mean_a2 * rot * rot).re + self.mean_n + 0.5;
        (mean, second - mean * mean)
    }
}

/// Statistical mixture of pure states with positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    components: Vec<(f64, FockVector)>,
}

impl Ensemble {
    pub fn new(components: Vec<(f64, FockVector)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument(
                "an ensemble needs at least one component".into(),
            ));
        }
        if let Some((w, _)) = components.iter().find(|(w, _)| !(*w > 0.0 && *w <= 1.0)) {
            return Err(Error::InvalidArgument(format!(
                "ensemble weight {w} outside (0, 1]"
            )));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "ensemble weights sum to {total}, not 1"
            )));
        }
        Ok(Ensemble { components })
    }

    pub fn pure(state: FockVector) -> Self {
        Ensemble {
            components: vec![(1.0, state)],
        }
    }

    pub fn components(&self) -> &[(f64, FockVector)] {
        &self.components
    }

    pub fn max_cutoff(&self) -> usize {
        self.components
            .iter()
            .map(|(_, s)| s.cutoff())
            .max()
            .unwrap_or(0)
    }

    /// Copy with every component zero-padded to the common cutoff.
    pub fn padded(&self) -> Ensemble {
        let cutoff = self.max_cutoff();
        Ensemble {
            components: self
                .components
                .iter()
                .map(|(w, s)| (*w, s.pad_to_cutoff(cutoff).expect("padding never shrinks")))
                .collect(),
        }
    }
}

/// `ln n!` by direct accumulation.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `Σ_{n ≥ from} e^{−λ} λⁿ / n!`, summed term by term in log space.
fn poisson_tail(lambda: f64, from: usize) -> f64 {
    if lambda == 0.0 {
        return if from == 0 { 1.0 } else { 0.0 };
    }
    let log_first = -lambda + from as f64 * lambda.ln() - ln_factorial(from);
    let mut term = log_first.exp();
    let mut sum = 0.0;
    let mut n = from;
    loop {
        sum += term;
        n += 1;
        term *= lambda / n as f64;
        if (n as f64 > lambda && term <= sum * 1e-17) || term == 0.0 || n > from + 100_000 {
            break;
        }
    }
    sum
}

fn check_cutoff(cutoff: usize, what: &str) -> Result<()> {
    if cutoff > MAX_CUTOFF {
        Err(Error::UnsupportedRange(format!(
            "{what} needs a cutoff of {cutoff}, above the limit {MAX_CUTOFF}"
        )))
    } else {
        Ok(())
    }
}

/// Coherent state `|α⟩ = e^{−|α|²/2} Σ αⁿ/√n! |n⟩`.
pub fn coherent_state(alpha: Complex64, truncation: impl Into<Truncation>) -> Result<FockVector> {
    ensure_finite("alpha.re", alpha.re)?;
    ensure_finite("alpha.im", alpha.im)?;
    let truncation = truncation.into();
    truncation.validate()?;

    let lambda = alpha.norm_sqr();
    let mut cutoff = 16usize.max((lambda + 10.0 * (lambda + 1.0).sqrt()).ceil() as usize);
    while poisson_tail(lambda, cutoff) >= truncation.tail_tolerance {
        cutoff *= 2;
        check_cutoff(cutoff, "coherent state")?;
    }
    cutoff *= truncation.cutoff_scale;
    check_cutoff(cutoff, "coherent state")?;

    let amplitudes = coherent_amplitudes(alpha, cutoff);
    FockVector::normalized(amplitudes, poisson_tail(lambda, cutoff))
}

/// Unnormalized-by-truncation coherent amplitudes, evaluated in log space.
fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> Vec<Complex64> {
    let lambda = alpha.norm_sqr();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff];
    if lambda == 0.0 {
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return amplitudes;
    }
    let ln_abs = alpha.norm().ln();
    let phase = alpha.arg();
    let mut ln_fact = 0.0;
    for (n, c) in amplitudes.iter_mut().enumerate() {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let ln_mag = -0.5 * lambda + n as f64 * ln_abs - 0.5 * ln_fact;
        *c = Complex64::from_polar(ln_mag.exp(), n as f64 * phase);
    }
    amplitudes
}

/// Squeezed vacuum `S(r)|0⟩` with `S(r) = exp[(r/2)(a² − a†²)]`.
pub fn squeezed_vacuum(r: f64, truncation: impl Into<Truncation>) -> Result<FockVector> {
    ensure_finite("r", r)?;
    if r.abs() > 3.0 {
        return Err(Error::UnsupportedRange(format!(
            "|r| = {} exceeds 3",
            r.abs()
        )));
    }
    let truncation = truncation.into();
    truncation.validate()?;

    // c_{2k+2} = c_{2k} · (−tanh r) · √((2k+1)/(2k+2))
    let t = r.tanh();
    let next = |c: f64, k: usize| c * (-t) * ((2 * k + 1) as f64 / (2 * k + 2) as f64).sqrt();

    let mut cutoff = (20.0 * (2.0 * r.abs()).exp()).ceil() as usize;
    let tail = |cutoff: usize| -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let mut c = 1.0 / r.cosh().sqrt();
        let mut k = 0;
        while 2 * k < cutoff {
            c = next(c, k);
            k += 1;
        }
        let mut sum = 0.0;
        loop {
            let term = c * c;
            sum += term;
            if term <= sum * 1e-17 || term == 0.0 {
                break sum;
            }
            c = next(c, k);
            k += 1;
        }
    };
    while tail(cutoff) >= truncation.tail_tolerance {
        cutoff *= 2;
        check_cutoff(cutoff, "squeezed vacuum")?;
    }
    cutoff *= truncation.cutoff_scale;
    check_cutoff(cutoff, "squeezed vacuum")?;

    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff];
    let mut c = 1.0 / r.cosh().sqrt();
    let mut k = 0;
    while 2 * k < cutoff {
        amplitudes[2 * k] = Complex64::new(c, 0.0);
        c = next(c, k);
        k += 1;
    }
    FockVector::normalized(amplitudes, tail(cutoff))
}

/// Number state `|n⟩` in a basis of `cutoff` slots.
pub fn fock_state(n: usize, cutoff: usize) -> Result<FockVector> {
    if n >= cutoff {
        return Err(Error::InvalidArgument(format!(
            "photon number {n} does not fit below cutoff {cutoff}"
        )));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff];
    amplitudes[n] = Complex64::new(1.0, 0.0);
    FockVector::normalized(amplitudes, 0.0)
}

/// Applies `a^m` and renormalizes.
///
/// Returns the normalized state together with `N_m = 1/‖a^m|ψ⟩‖`, the factor that
/// makes `N_m a^m |ψ⟩` a unit vector.
pub fn subtract_photons(state: &FockVector, m: usize) -> Result<(FockVector, f64)> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "subtract at least one photon".into(),
        ));
    }
    let c = state.amplitudes();
    let cutoff = c.len();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff];
    for (n, out) in amplitudes
        .iter_mut()
        .enumerate()
        .take(cutoff.saturating_sub(m))
    {
        let falling: f64 = (n + 1..=n + m).map(|k| k as f64).product();
        *out = c[n + m] * falling.sqrt();
    }
    let raw_norm = norm_sqr(&amplitudes);
    if raw_norm.is_nan() || raw_norm <= 1e-14 {
        return Err(Error::DegenerateSubtraction(raw_norm));
    }
    // Beyond the cutoff the amplitudes are amplified by at least cutoff^m.
    let tail = state.tail_mass() * ((cutoff + m) as f64).powi(m as i32) / raw_norm;
    let subtracted = FockVector::normalized(amplitudes, tail)?;
    Ok((subtracted, 1.0 / raw_norm.sqrt()))
}

/// Displacement `D(α)|ψ⟩` with the default truncation policy.
pub fn displace(state: &FockVector, alpha: Complex64) -> Result<FockVector> {
    displace_with(state, alpha, Truncation::default())
}

/// Displacement `D(α)|ψ⟩`.
///
/// The output basis is the input cutoff plus `⌈|α|² + 8|α| + 8⌉` slots (times the
/// cutoff scale), doubled until the mass pushed out of the basis is below tolerance.
/// Matrix elements come from associated Laguerre polynomials, evaluated diagonal by
/// diagonal with a normalized recurrence.
pub fn displace_with(
    state: &FockVector,
    alpha: Complex64,
    truncation: impl Into<Truncation>,
) -> Result<FockVector> {
    ensure_finite("alpha.re", alpha.re)?;
    ensure_finite("alpha.im", alpha.im)?;
    let truncation = truncation.into();
    truncation.validate()?;
    if alpha == Complex64::new(0.0, 0.0) {
        return Ok(state.clone());
    }

    let a = alpha.norm();
    let mut headroom = (a * a + 8.0 * a + 8.0).ceil() as usize * truncation.cutoff_scale;
    loop {
        let out_cutoff = state.cutoff() + headroom;
        check_cutoff(out_cutoff, "displaced state")?;
        let displaced = apply_displacement(state.amplitudes(), alpha, out_cutoff);
        let lost = (state.norm_sqr() - norm_sqr(&displaced)).max(0.0);
        if lost < truncation.tail_tolerance {
            return FockVector::normalized(displaced, state.tail_mass() + lost);
        }
        headroom *= 2;
    }
}

fn apply_displacement(c: &[Complex64], alpha: Complex64, out_cutoff: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); out_cutoff];
    let last = match c.iter().rposition(|z| z.norm_sqr() > 0.0) {
        Some(i) => i,
        None => return out,
    };
    let x = alpha.norm_sqr();
    let phase = Complex64::from_polar(1.0, alpha.arg());
    // Below the main diagonal: ⟨n+k|D|n⟩ = e^{ikθ} f_n^{(k)}
    for k in 0..out_cutoff {
        let len = (last + 1).min(out_cutoff - k);
        let rot = phase.powu(k as u32);
        laguerre_diagonal(x, k, len, |j, f| out[j + k] += rot * f * c[j]);
    }
    // Above it: ⟨m|D|m+k⟩ = (−e^{−iθ})^k f_m^{(k)}
    for k in 1..=last {
        let len = (last + 1 - k).min(out_cutoff);
        let rot = (-phase.conj()).powu(k as u32);
        laguerre_diagonal(x, k, len, |j, f| out[j] += rot * f * c[j + k]);
    }
    out
}

/// Visits `f_j = √(j!/(j+k)!) x^{k/2} e^{−x/2} L_j^{(k)}(x)` for `j < len`.
///
/// These are the moduli of displacement matrix elements along one diagonal. The
/// Laguerre recurrence is applied to `f` directly, with the scale kept as a separate
/// logarithm so that neither the prefactor nor the polynomial over- or underflows.
fn laguerre_diagonal(x: f64, k: usize, len: usize, mut visit: impl FnMut(usize, f64)) {
    const RESCALE_AT: f64 = 1e150;
    if len == 0 {
        return;
    }
    let kf = k as f64;
    let mut ln_scale = 0.5 * kf * x.ln() - 0.5 * x - 0.5 * ln_factorial(k);
    let (mut prev, mut cur) = (0.0f64, 1.0f64);
    for j in 0..len {
        let value = cur * ln_scale.exp();
        if value != 0.0 {
            visit(j, value);
        }
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + kf - x) * cur - (jf * (jf + kf)).sqrt() * prev)
            / ((jf + 1.0) * (jf + 1.0 + kf)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
            ln_scale += RESCALE_AT.ln();
        } else if cur != 0.0 && cur.abs() < 1.0 / RESCALE_AT && prev.abs() < 1.0 / RESCALE_AT {
            prev *= RESCALE_AT;
            cur *= RESCALE_AT;
            ln_scale -= RESCALE_AT.ln();
        }
    }
}

/// `(a ± b)/‖a ± b‖` on the common cutoff.
pub fn superpose(a: &FockVector, b: &FockVector, sign: Sign) -> Result<FockVector> {
    let cutoff = a.cutoff().max(b.cutoff());
    let zero = Complex64::new(0.0, 0.0);
    let s = sign.value();
    let amplitudes: Vec<Complex64> = (0..cutoff)
        .map(|n| {
            let x = a.amplitudes.get(n).copied().unwrap_or(zero);
            let y = b.amplitudes.get(n).copied().unwrap_or(zero);
            x + y * s
        })
        .collect();
    let norm_sqr = norm_sqr(&amplitudes);
    if norm_sqr.sqrt() <= 1e-10 {
        return Err(Error::DegenerateSuperposition(norm_sqr.sqrt()));
    }
    let tail = (a.tail_mass() + b.tail_mass()) * 2.0 / norm_sqr;
    FockVector::normalized(amplitudes, tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn coherent_vacuum() {
        let s = coherent_state(c(0.0), 1e-12).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0));
        assert!(s.amplitudes()[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn coherent_mean_photon_number() {
        // direct summation of n e^{-λ} λ^n / n!
        let lambda: f64 = 2.25;
        let mut p = (-lambda).exp();
        let mut oracle = 0.0;
        for n in 1..200 {
            p *= lambda / n as f64;
            oracle += n as f64 * p;
        }
        let s = coherent_state(c(1.5), 1e-12).unwrap();
        assert!((s.moments().mean_n - oracle).abs() < 1e-8);
        assert!((oracle - 2.25).abs() < 1e-12);
    }

    #[test]
    fn coherent_tail_bound() {
        let s = coherent_state(c(3.0), 1e-12).unwrap();
        assert!(s.cutoff() >= 40);
        assert!(s.tail_mass() < 1e-12);
        // brute-force partial sums of the Poisson tail
        let mut p = (-9.0f64).exp();
        let mut below = p;
        for n in 1..s.cutoff() {
            p *= 9.0 / n as f64;
            below += p;
        }
        assert!(1.0 - below < 1e-12);
    }

    #[test]
    fn coherent_rejects_non_finite() {
        let err = coherent_state(Complex64::new(f64::NAN, 0.0), 1e-12).unwrap_err();
        assert_eq!(err.kind(), "invalid-argument");
    }

    #[test]
    fn tolerance_is_validated() {
        assert!(coherent_state(c(1.0), 1e-3).is_err());
        assert!(coherent_state(c(1.0), 0.0).is_err());
    }

    #[test]
    fn squeezed_identity() {
        let s = squeezed_vacuum(0.0, 1e-12).unwrap();
        assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-15);
        assert!(s.amplitudes()[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn squeezed_variances_and_parity() {
        let s = squeezed_vacuum(1.0, 1e-12).unwrap();
        let m = s.moments();
        assert!((m.var_x - (-2.0f64).exp() / 2.0).abs() < 1e-8);
        assert!((m.var_p - 2.0f64.exp() / 2.0).abs() < 1e-8);
        assert!((m.var_x - 0.06767).abs() < 1e-5);
        assert!(s
            .amplitudes()
            .iter()
            .skip(1)
            .step_by(2)
            .all(|z| z.norm() == 0.0));
        assert!(s.tail_mass() < 1e-12);
    }

    #[test]
    fn squeezed_range_guard() {
        assert_eq!(
            squeezed_vacuum(3.5, 1e-12).unwrap_err().kind(),
            "unsupported-range"
        );
    }

    #[test]
    fn fock_states() {
        let vac = fock_state(0, 4).unwrap();
        assert_eq!(vac.moments().mean_n, 0.0);
        let one = fock_state(1, 4).unwrap();
        let m = one.moments();
        assert!((m.mean_n - 1.0).abs() < 1e-15);
        assert!((m.var_x - 1.5).abs() < 1e-15);
        assert_eq!(fock_state(5, 3).unwrap_err().kind(), "invalid-argument");
    }

    #[test]
    fn subtraction_basics() {
        let (s, norm) = subtract_photons(&fock_state(1, 4).unwrap(), 1).unwrap();
        assert_eq!(norm, 1.0);
        assert!((s.fidelity(&fock_state(0, 4).unwrap()) - 1.0).abs() < 1e-15);
        let err = subtract_photons(&fock_state(0, 4).unwrap(), 1).unwrap_err();
        assert_eq!(err.kind(), "degenerate-subtraction");
    }

    #[test]
    fn subtraction_normalization_factor() {
        // a|2> = √2 |1>
        let (_, norm) = subtract_photons(&fock_state(2, 5).unwrap(), 1).unwrap();
        assert!((norm - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        // a²|3> = √6 |1>
        let (s, norm) = subtract_photons(&fock_state(3, 5).unwrap(), 2).unwrap();
        assert!((norm - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let alpha = Complex64::new(1.2, -0.7);
        let d = displace(&fock_state(0, 1).unwrap(), alpha).unwrap();
        let coh = coherent_state(alpha, 1e-12).unwrap();
        assert!(d.fidelity(&coh) > 1.0 - 1e-10);
    }

    #[test]
    fn displaced_single_photon_moments() {
        let alpha = Complex64::new(0.8, 1.1);
        let d = displace(&fock_state(1, 2).unwrap(), alpha).unwrap();
        let m = d.moments();
        assert!((m.mean_n - 1.0 - alpha.norm_sqr()).abs() < 1e-8);
        assert!((m.mean_a - alpha).norm() < 1e-8);
    }

    #[test]
    fn displace_by_zero_is_identity() {
        let s = coherent_state(c(0.7), 1e-12).unwrap();
        assert_eq!(displace(&s, c(0.0)).unwrap(), s);
    }

    #[test]
    fn superpositions() {
        let vac = fock_state(0, 2).unwrap();
        let one = fock_state(1, 2).unwrap();
        let err = superpose(&vac, &vac, Sign::Minus).unwrap_err();
        assert_eq!(err.kind(), "degenerate-superposition");
        let s = superpose(&vac, &one, Sign::Plus).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - h).abs() < 1e-15);
    }

    #[test]
    fn small_odd_cat_is_single_photon() {
        let a = coherent_state(c(0.01), 1e-12).unwrap();
        let b = coherent_state(c(-0.01), 1e-12).unwrap();
        let cat = superpose(&a, &b, Sign::Minus).unwrap();
        let one = fock_state(1, cat.cutoff()).unwrap();
        assert!(cat.fidelity(&one) > 0.9999);
    }

    #[test]
    fn moments_of_coherent_state() {
        let m = coherent_state(c(2.0), 1e-12).unwrap().moments();
        assert!((m.mean_x - 2.0 * 2f64.sqrt()).abs() < 1e-10);
        assert!((m.var_x - 0.5).abs() < 1e-10);
        assert!(m.mean_p.abs() < 1e-12);
    }

    #[test]
    fn quadrature_at_angle() {
        let m = coherent_state(Complex64::new(0.0, 1.5), 1e-12)
            .unwrap()
            .moments();
        let (mean, var) = m.quadrature(std::f64::consts::FRAC_PI_2);
        assert!((mean - 1.5 * 2f64.sqrt()).abs() < 1e-10);
        assert!((var - 0.5).abs() < 1e-10);
        let sq = squeezed_vacuum(0.5, 1e-12).unwrap().moments();
        let (_, var_p) = sq.quadrature(std::f64::consts::FRAC_PI_2);
        assert!((var_p - sq.var_p).abs() < 1e-12);
    }

    #[test]
    fn padding() {
        let vac = fock_state(0, 1).unwrap();
        let padded = vac.pad_to_cutoff(8).unwrap();
        assert_eq!(padded.cutoff(), 8);
        assert_eq!(padded.norm_sqr(), 1.0);
        assert_eq!(vac.pad_to_cutoff(1).unwrap(), vac);
        let ten = fock_state(0, 10).unwrap();
        assert_eq!(ten.pad_to_cutoff(5).unwrap_err().kind(), "invalid-argument");
    }

    #[test]
    fn ensemble_weights() {
        let vac = fock_state(0, 2).unwrap();
        assert!(Ensemble::new(vec![(0.5, vac.clone()), (0.4, vac.clone())]).is_err());
        assert!(Ensemble::new(vec![(1.5, vac.clone())]).is_err());
        let e = Ensemble::new(vec![(0.5, vac.clone()), (0.5, fock_state(3, 5).unwrap())]).unwrap();
        assert_eq!(e.max_cutoff(), 5);
        assert!(e.padded().components().iter().all(|(_, s)| s.cutoff() == 5));
    }
}
