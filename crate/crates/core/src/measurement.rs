//! Outcome distributions of homodyne and photon-number-resolving detectors,
//! Gaussian resolution blur, and Wigner functions.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result};
use crate::fock::{Ensemble, FockVector};

/// Default number of samples on a homodyne grid.
pub const DEFAULT_GRID_POINTS: usize = 2048;

/// Smallest admissible sampled PDF.
pub const MIN_PDF_POINTS: usize = 64;

/// Largest number of samples the automatic grid policy will request.
const MAX_AUTO_POINTS: usize = 1 << 17;

/// Negative PDF values above this are treated as rounding noise.
const NEGATIVE_NOISE: f64 = 1e-12;

/// Probability mass a PDF may lose to the grid edges.
const COVERAGE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorKind {
    /// Quadrature `x_φ` at local-oscillator phase `angle` (radians).
    Homodyne { angle: f64 },
    /// Photon-number-resolving detector.
    Pnrd,
}

/// Detector kind plus Gaussian resolution.
///
/// `sigma` is in quadrature units for homodyne detection and in photon-number
/// units for the PNRD; the two are not interchangeable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    pub kind: DetectorKind,
    pub sigma: f64,
}

impl DetectorModel {
    pub fn homodyne(angle: f64, sigma: f64) -> Result<Self> {
        ensure_finite("angle", angle)?;
        Self::new(DetectorKind::Homodyne { angle }, sigma)
    }

    pub fn pnrd(sigma: f64) -> Result<Self> {
        Self::new(DetectorKind::Pnrd, sigma)
    }

    fn new(kind: DetectorKind, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "resolution must be finite and >= 0, got {sigma}"
            )));
        }
        Ok(DetectorModel { kind, sigma })
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self::new(self.kind, sigma)
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DetectorKind::Homodyne { .. } => "homodyne",
            DetectorKind::Pnrd => "pnrd",
        }
    }
}

/// Uniform sampling of an interval, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, n_points: usize) -> Result<Self> {
        ensure_finite("grid minimum", min)?;
        ensure_finite("grid maximum", max)?;
        if min >= max || n_points < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs min < max and at least two points, got [{min}, {max}] x {n_points}"
            )));
        }
        Ok(Grid { min, max, n_points })
    }

    pub fn dx(&self) -> f64 {
        (self.max - self.min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    pub(crate) fn matches(&self, other: &Grid) -> bool {
        let tol = 1e-9 * (self.max - self.min).abs().max(1.0);
        self.n_points == other.n_points
            && (self.min - other.min).abs() <= tol
            && (self.max - other.max).abs() <= tol
    }
}

fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, .., last] => dx * (values.iter().sum::<f64>() - 0.5 * (first + last)),
    }
}

/// Sampled probability density on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Pdf {
    grid: Grid,
    values: Vec<f64>,
}

impl Pdf {
    /// Negative entries are clipped to zero.
    pub fn new(grid: Grid, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::InvalidArgument(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.n_points
            )));
        }
        if grid.n_points < MIN_PDF_POINTS {
            return Err(Error::InvalidArgument(format!(
                "a PDF needs at least {MIN_PDF_POINTS} points, got {}",
                grid.n_points
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("PDF samples must be finite".into()));
        }
        for v in values.iter_mut() {
            if *v < 0.0 {
                if *v < -NEGATIVE_NOISE {
                    log::debug!("clipping PDF sample {v:e}");
                }
                *v = 0.0;
            }
        }
        Ok(Pdf { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn points(&self) -> Vec<f64> {
        self.grid.points()
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.values, self.grid.dx())
    }

    pub fn mean(&self) -> f64 {
        let weighted: Vec<f64> = self.weighted(1);
        trapezoid(&weighted, self.grid.dx()) / self.integral()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let centered: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (self.grid.point(i) - mean).powi(2) * v)
            .collect();
        trapezoid(&centered, self.grid.dx()) / self.integral()
    }

    fn weighted(&self, power: i32) -> Vec<f64> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| self.grid.point(i).powi(power) * v)
            .collect()
    }
}

/// Probability mass function over photon numbers `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probabilities: Vec<f64>,
}

impl Pmf {
    pub fn new(mut probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() || probabilities.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("a PMF needs finite entries".into()));
        }
        probabilities.iter_mut().for_each(|p| *p = p.max(0.0));
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "PMF sums to {total}, not 1"
            )));
        }
        Ok(Pmf { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Zero-extended copy with `len` outcomes.
    pub fn padded(&self, len: usize) -> Pmf {
        let mut probabilities = self.probabilities.clone();
        if len > probabilities.len() {
            probabilities.resize(len, 0.0);
        }
        Pmf { probabilities }
    }

    /// Index one past the last outcome with non-negligible probability.
    pub fn support_len(&self) -> usize {
        self.probabilities
            .iter()
            .rposition(|p| *p > 1e-30)
            .map_or(1, |i| i + 1)
    }

    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.probabilities
            .iter()
            .enumerate()
            .map(|(n, p)| (n as f64 - mean).powi(2) * p)
            .sum()
    }
}

/// Anything a detector can be pointed at.
#[derive(Debug, Clone, Copy)]
pub enum Subject<'a> {
    Pure(&'a FockVector),
    Mixed(&'a Ensemble),
}

impl<'a> From<&'a FockVector> for Subject<'a> {
    fn from(state: &'a FockVector) -> Self {
        Subject::Pure(state)
    }
}

impl<'a> From<&'a Ensemble> for Subject<'a> {
    fn from(ensemble: &'a Ensemble) -> Self {
        Subject::Mixed(ensemble)
    }
}

impl<'a> Subject<'a> {
    pub fn components(&self) -> Vec<(f64, &'a FockVector)> {
        match *self {
            Subject::Pure(s) => vec![(1.0, s)],
            Subject::Mixed(e) => e.components().iter().map(|(w, s)| (*w, s)).collect(),
        }
    }
}

/// Normalized Hermite functions `ψ_0(x) … ψ_{n_max}(x)`.
///
/// Uses `ψ_{n+1} = √(2/(n+1)) x ψ_n − √(n/(n+1)) ψ_{n−1}` on a rescaled mantissa so
/// that `e^{−x²/2}` never underflows before the polynomial part has grown.
pub fn hermite_functions(x: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut scale = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let (mut prev, mut cur) = (0.0f64, 1.0f64);
    out.push(rescale(cur, scale));
    for n in 0..n_max {
        let next =
            (2.0 / (n + 1) as f64).sqrt() * x * cur - (n as f64 / (n + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
            scale += RESCALE_AT.ln();
        }
        out.push(rescale(cur, scale));
    }
    out
}

const RESCALE_AT: f64 = 1e150;

/// `mantissa · e^{scale}` without spurious underflow.
fn rescale(mantissa: f64, scale: f64) -> f64 {
    if mantissa == 0.0 {
        return 0.0;
    }
    mantissa.signum() * (mantissa.abs().ln() + scale).exp()
}

fn rescale_complex(mantissa: Complex64, scale: f64) -> Complex64 {
    let r = mantissa.norm();
    if r == 0.0 {
        return mantissa;
    }
    mantissa / r * (r.ln() + scale).exp()
}

/// Recurrence coefficients `(√(2/(n+1)), √(n/(n+1)))`.
struct HermiteTable {
    up: Vec<f64>,
    down: Vec<f64>,
}

impl HermiteTable {
    fn new(n_max: usize) -> Self {
        HermiteTable {
            up: (0..n_max).map(|n| (2.0 / (n + 1) as f64).sqrt()).collect(),
            down: (0..n_max)
                .map(|n| (n as f64 / (n + 1) as f64).sqrt())
                .collect(),
        }
    }

    /// `Σ_n d_n ψ_n(x)` with the Hermite recurrence fused into the sum.
    fn wavefunction(&self, coeffs: &[Complex64], x: f64) -> Complex64 {
        let mut scale = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
        let (mut prev, mut cur) = (0.0f64, 1.0f64);
        let mut sum = coeffs[0] * cur;
        for n in 0..coeffs.len() - 1 {
            let next = self.up[n] * x * cur - self.down[n] * prev;
            prev = cur;
            cur = next;
            sum += coeffs[n + 1] * cur;
            if cur.abs() > RESCALE_AT {
                prev /= RESCALE_AT;
                cur /= RESCALE_AT;
                sum /= RESCALE_AT;
                scale += RESCALE_AT.ln();
            }
        }
        rescale_complex(sum, scale)
    }
}

/// Homodyne outcome density `P(x) = |Σ c_n e^{−inφ} ψ_n(x)|²` on an explicit grid.
///
/// Mixtures give the weight-averaged density. Fails with a coverage error when
/// the grid misses more than `1e-6` of the probability.
pub fn homodyne_pdf<'a>(subject: impl Into<Subject<'a>>, angle: f64, grid: Grid) -> Result<Pdf> {
    ensure_finite("angle", angle)?;
    let subject = subject.into();
    let xs = grid.points();
    let mut values = vec![0.0; grid.n_points];
    for (weight, state) in subject.components() {
        let last = state
            .amplitudes()
            .iter()
            .rposition(|c| c.norm_sqr() > 0.0)
            .unwrap_or(0);
        let coeffs: Vec<Complex64> = state.amplitudes()[..=last]
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64) * angle))
            .collect();
        let table = HermiteTable::new(coeffs.len());
        values
            .par_iter_mut()
            .zip(xs.par_iter())
            .for_each(|(v, &x)| *v += weight * table.wavefunction(&coeffs, x).norm_sqr());
    }
    let pdf = Pdf::new(grid, values)?;
    let captured = pdf.integral();
    if captured < 1.0 - COVERAGE_TOLERANCE {
        return Err(Error::GridCoverage { captured });
    }
    Ok(pdf)
}

/// Default homodyne grid for a set of states at phase `angle`.
///
/// Spans `[min μ − L, max μ + L]` with `L = widen · (6 √(max var) + 1)`, using at
/// least [`DEFAULT_GRID_POINTS`] samples and at least 16 per standard deviation of
/// the narrowest state.
pub fn homodyne_grid<'a>(
    states: impl IntoIterator<Item = &'a FockVector>,
    angle: f64,
    widen: f64,
) -> Result<Grid> {
    let stats: Vec<(f64, f64)> = states
        .into_iter()
        .map(|s| s.moments().quadrature(angle))
        .collect();
    if stats.is_empty() {
        return Err(Error::InvalidArgument(
            "no states to place a grid around".into(),
        ));
    }
    let max_var = stats.iter().map(|s| s.1).fold(0.0, f64::max);
    let min_std = stats
        .iter()
        .map(|s| s.1.max(1e-12).sqrt())
        .fold(f64::INFINITY, f64::min);
    let half_width = widen * (6.0 * max_var.sqrt() + 1.0);
    let lo = stats.iter().map(|s| s.0).fold(f64::INFINITY, f64::min) - half_width;
    let hi = stats.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max) + half_width;
    let resolved = ((hi - lo) / (min_std / 16.0)).ceil() as usize + 1;
    let n_points = resolved.clamp(DEFAULT_GRID_POINTS, MAX_AUTO_POINTS);
    Grid::new(lo, hi, n_points)
}

/// Homodyne densities of several states on one shared, automatically chosen grid.
///
/// The grid is widened until every density passes the coverage check.
pub fn homodyne_pdfs_shared(states: &[&FockVector], angle: f64) -> Result<Vec<Pdf>> {
    let mut widen = 1.0;
    loop {
        let grid = homodyne_grid(states.iter().copied(), angle, widen)?;
        let attempt: Result<Vec<Pdf>> = states
            .iter()
            .map(|s| homodyne_pdf(*s, angle, grid))
            .collect();
        match attempt {
            Err(Error::GridCoverage { .. }) if widen < 8.0 => widen *= 1.5,
            other => return other,
        }
    }
}

/// [`homodyne_pdf`] on the automatic grid of the subject's components.
pub fn homodyne_pdf_auto<'a>(subject: impl Into<Subject<'a>>, angle: f64) -> Result<Pdf> {
    let subject = subject.into();
    let components = subject.components();
    let mut widen = 1.0;
    loop {
        let grid = homodyne_grid(components.iter().map(|(_, s)| *s), angle, widen)?;
        match homodyne_pdf(subject, angle, grid) {
            Err(Error::GridCoverage { .. }) if widen < 8.0 => widen *= 1.5,
            other => return other,
        }
    }
}

/// Photon-number distribution; mixtures give the weight-averaged distribution.
pub fn pnrd_pmf<'a>(subject: impl Into<Subject<'a>>) -> Result<Pmf> {
    let components = subject.into().components();
    let len = components
        .iter()
        .map(|(_, s)| s.cutoff())
        .max()
        .unwrap_or(0);
    let mut probabilities = vec![0.0; len];
    for (weight, state) in components {
        for (p, c) in probabilities.iter_mut().zip(state.amplitudes()) {
            *p += weight * c.norm_sqr();
        }
    }
    Pmf::new(probabilities)
}

fn gaussian(u: f64, sigma: f64) -> f64 {
    (-0.5 * (u / sigma).powi(2)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma >= 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "resolution must be finite and >= 0, got {sigma}"
        )))
    }
}

/// Convolution with a normalized Gaussian of width `sigma`.
///
/// The output grid extends the input by `6σ` on both sides and keeps the input
/// spacing, coarsened by an integer factor once `σ` exceeds 16 input steps. Each
/// input sample's kernel is renormalized on the output grid, so the integral is
/// preserved exactly for narrow kernels too.
pub fn blur_pdf(pdf: &Pdf, sigma: f64) -> Result<Pdf> {
    check_sigma(sigma)?;
    if sigma == 0.0 {
        return Ok(pdf.clone());
    }
    let dx = pdf.grid.dx();
    let stride = ((sigma / (16.0 * dx)).floor() as usize).max(1);
    let h = stride as f64 * dx;
    let pad = (6.0 * sigma / h).ceil() as usize;
    let out_min = pdf.grid.min - pad as f64 * h;
    let out_n = ((pdf.grid.max + 6.0 * sigma - out_min) / h).ceil() as usize + 1;
    let out_grid = Grid::new(out_min, out_min + (out_n - 1) as f64 * h, out_n)?;

    // Output samples sit on the input lattice, so the kernel only depends on the
    // integer offset between samples and can be tabulated once.
    let n_in = pdf.grid.n_points as isize;
    let stride = stride as isize;
    let shift = pad as isize * stride;
    let kmax = (8.0 * sigma / dx).ceil() as isize + 1;
    let table: Vec<f64> = (-kmax..=kmax)
        .map(|d| gaussian(d as f64 * dx, sigma))
        .collect();
    let kernel = |d: isize| table[(d + kmax) as usize];

    // per-input normalization of the sampled kernel
    let norms: Vec<f64> = (0..n_in)
        .into_par_iter()
        .map(|i| {
            let lo = ((i + shift - kmax).max(0) + stride - 1) / stride;
            let hi = ((i + shift + kmax).div_euclid(stride)).min(out_n as isize - 1);
            h * (lo..=hi)
                .map(|j| kernel(j * stride - shift - i))
                .sum::<f64>()
        })
        .collect();
    let sources: Vec<f64> = (0..n_in)
        .map(|i| {
            let w = if i == 0 || i == n_in - 1 {
                0.5 * dx
            } else {
                dx
            };
            w * pdf.values[i as usize] / norms[i as usize]
        })
        .collect();

    let values: Vec<f64> = (0..out_n as isize)
        .into_par_iter()
        .map(|j| {
            let centre = j * stride - shift;
            let lo = (centre - kmax).max(0);
            let hi = (centre + kmax).min(n_in - 1);
            (lo..=hi)
                .map(|i| sources[i as usize] * kernel(centre - i))
                .sum()
        })
        .collect();
    Pdf::new(out_grid, values)
}

/// Gaussian mixture over `λ ∈ [−6σ, len−1+6σ]` centred on integer counts.
///
/// A zero resolution has no continuous representation; callers must stay
/// with the PMF in that case.
pub fn blur_pmf(pmf: &Pmf, sigma: f64) -> Result<Pdf> {
    check_sigma(sigma)?;
    if sigma == 0.0 {
        return Err(Error::UsePmfDirectly);
    }
    let last = (pmf.len() - 1) as f64;
    let lo = -6.0 * sigma;
    let hi = last + 6.0 * sigma;
    let n_points = (((hi - lo) / (sigma / 16.0)).ceil() as usize + 1).max(MIN_PDF_POINTS);
    let grid = Grid::new(lo, hi, n_points)?;
    let reach = 8.0 * sigma;
    let probs = pmf.probabilities();
    let values: Vec<f64> = (0..n_points)
        .into_par_iter()
        .map(|j| {
            let y = grid.point(j);
            let first = (y - reach).ceil().max(0.0) as usize;
            let end = ((y + reach).floor().max(-1.0) + 1.0) as usize;
            (first..end.min(probs.len()))
                .map(|n| probs[n] * gaussian(y - n as f64, sigma))
                .sum()
        })
        .collect();
    Pdf::new(grid, values)
}

/// Rectangular phase-space sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    pub x: Grid,
    pub p: Grid,
}

impl PhaseSpaceGrid {
    /// Square grid `[-half_width, half_width]²` with `n` points per axis.
    pub fn square(half_width: f64, n: usize) -> Result<Self> {
        let axis = Grid::new(-half_width, half_width, n)?;
        Ok(PhaseSpaceGrid { x: axis, p: axis })
    }
}

/// Wigner function sampled on a [`PhaseSpaceGrid`], stored x-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    pub grid: PhaseSpaceGrid,
    values: Vec<f64>,
}

impl WignerField {
    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.grid.p.n_points + ip]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `∫ W dp` at every x sample.
    pub fn marginal_x(&self) -> Vec<f64> {
        let np = self.grid.p.n_points;
        self.values
            .chunks(np)
            .map(|row| trapezoid(row, self.grid.p.dx()))
            .collect()
    }

    /// `∫ W dx` at every p sample.
    pub fn marginal_p(&self) -> Vec<f64> {
        let np = self.grid.p.n_points;
        let nx = self.grid.x.n_points;
        (0..np)
            .map(|ip| {
                let column: Vec<f64> = (0..nx).map(|ix| self.values[ix * np + ip]).collect();
                trapezoid(&column, self.grid.x.dx())
            })
            .collect()
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.marginal_x(), self.grid.x.dx())
    }
}

/// Wigner function `W(x, p)` of a pure state or mixture.
///
/// Evaluated from the density matrix with the Laguerre-polynomial recurrence over
/// Fock matrix elements, normalized so that `∬ W dx dp = 1` and the vacuum peaks
/// at `1/π`.
pub fn wigner<'a>(subject: impl Into<Subject<'a>>, grid: PhaseSpaceGrid) -> Result<WignerField> {
    let components = subject.into().components();
    let dim = components
        .iter()
        .map(|(_, s)| {
            s.amplitudes()
                .iter()
                .rposition(|c| c.norm_sqr() > 0.0)
                .map_or(1, |i| i + 1)
        })
        .max()
        .unwrap_or(1);
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (w, s) in &components {
        let c = s.amplitudes();
        for m in 0..dim.min(c.len()) {
            for n in 0..dim.min(c.len()) {
                rho[m * dim + n] += *w * c[m] * c[n].conj();
            }
        }
    }

    let nx = grid.x.n_points;
    let np = grid.p.n_points;
    let sqrt_k: Vec<f64> = (0..dim).map(|k| (k as f64).sqrt()).collect();
    let values: Vec<f64> = (0..nx * np)
        .into_par_iter()
        .map(|idx| {
            let x = grid.x.point(idx / np);
            let p = grid.p.point(idx % np);
            wigner_point(
                &rho,
                dim,
                &sqrt_k,
                Complex64::new(x, p) / std::f64::consts::SQRT_2,
            )
        })
        .collect();
    let field = WignerField { grid, values };
    let captured = field.integral();
    if captured < 1.0 - 1e-3 {
        return Err(Error::GridCoverage { captured });
    }
    Ok(field)
}

/// `Σ_{mn} ρ_{nm} W_{mn}` at phase-space point `a = (x + ip)/√2`, where `W_{mn}` is
/// the Wigner function of `|m⟩⟨n|` built up by recurrence in `m` and `n`.
fn wigner_point(rho: &[Complex64], dim: usize, sqrt_k: &[f64], a: Complex64) -> f64 {
    let two_a = 2.0 * a;
    let two_a_conj = two_a.conj();
    let mut row = vec![Complex64::new(0.0, 0.0); dim];
    row[0] = Complex64::new((-2.0 * a.norm_sqr()).exp() / std::f64::consts::PI, 0.0);
    let mut w = rho[0].re * row[0].re;
    for n in 1..dim {
        row[n] = two_a * row[n - 1] / sqrt_k[n];
        w += 2.0 * (rho[n] * row[n]).re;
    }
    for m in 1..dim {
        let mut temp = row[m];
        row[m] = (two_a_conj * temp - sqrt_k[m] * row[m - 1]) / sqrt_k[m];
        w += (rho[m * dim + m] * row[m]).re;
        for n in m + 1..dim {
            let next = (two_a * row[n - 1] - sqrt_k[m] * temp) / sqrt_k[n];
            temp = row[n];
            row[n] = next;
            w += 2.0 * (rho[m * dim + n] * row[n]).re;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, fock_state, superpose, Sign};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hermite_values_at_origin() {
        let psi = hermite_functions(0.0, 4);
        assert_eq!(psi[1], 0.0);
        assert!((psi[0] - PI.powf(-0.25)).abs() < 1e-15);
        assert!((psi[0] - 0.7511255).abs() < 1e-7);
    }

    #[test]
    fn hermite_orthonormal() {
        let grid = Grid::new(-12.0, 12.0, 2048).unwrap();
        let table: Vec<Vec<f64>> = grid
            .points()
            .iter()
            .map(|&x| hermite_functions(x, 30))
            .collect();
        for n in 0..=30 {
            for m in 0..=n {
                let prod: Vec<f64> = table.iter().map(|psi| psi[n] * psi[m]).collect();
                let overlap = trapezoid(&prod, grid.dx());
                let expected = if n == m { 1.0 } else { 0.0 };
                assert!((overlap - expected).abs() < 1e-8, "<{n}|{m}> = {overlap}");
            }
        }
    }

    #[test]
    fn hermite_finite_far_out() {
        for &x in &[-40.0, 25.0, 40.0] {
            let psi = hermite_functions(x, 2048);
            assert!(psi.iter().all(|v| v.is_finite()));
            // beyond its turning point √(2n+1) every function is tiny
            assert!(psi[10].abs() < 1e-100);
        }
        // ψ_2000 near its turning point is not flushed to zero
        let psi = hermite_functions(62.0, 2000);
        assert!(psi[2000].abs() > 1e-6);
    }

    #[test]
    fn vacuum_homodyne_is_gaussian() {
        let vac = fock_state(0, 1).unwrap();
        let pdf = homodyne_pdf_auto(&vac, 0.0).unwrap();
        let mid = pdf.grid().n_points / 2;
        let x = pdf.grid().point(mid);
        let expected = (-x * x).exp() / PI.sqrt();
        assert!((pdf.values()[mid] - expected).abs() < 1e-12);
        assert!((pdf.integral() - 1.0).abs() < 1e-6);
        assert!((pdf.variance() - 0.5).abs() < 1e-6);
        // value at 0 is π^{-1/2}
        let grid = Grid::new(-6.0, 6.0, 2049).unwrap();
        let pdf = homodyne_pdf(&vac, 0.0, grid).unwrap();
        assert!((pdf.values()[1024] - 0.5641895835).abs() < 1e-9);
    }

    #[test]
    fn coherent_homodyne_means() {
        let s = coherent_state(c(1.5), 1e-12).unwrap();
        let pdf = homodyne_pdf_auto(&s, 0.0).unwrap();
        assert!((pdf.mean() - 1.5 * 2f64.sqrt()).abs() < 1e-6);
        assert!((pdf.variance() - 0.5).abs() < 1e-6);
        let pdf = homodyne_pdf_auto(&s, FRAC_PI_2).unwrap();
        assert!(pdf.mean().abs() < 1e-6);
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let s = coherent_state(c(1.5), 1e-12).unwrap();
        let err = homodyne_pdf(&s, 0.0, Grid::new(-1.0, 1.0, 256).unwrap()).unwrap_err();
        assert_eq!(err.kind(), "grid-coverage-error");
    }

    #[test]
    fn pnrd_distributions() {
        let pmf = pnrd_pmf(&fock_state(1, 3).unwrap()).unwrap();
        assert_eq!(pmf.probabilities()[1], 1.0);
        let coh = coherent_state(c(1.0), 1e-12).unwrap();
        let pmf = pnrd_pmf(&coh).unwrap();
        let mut poisson = (-1.0f64).exp();
        for (n, p) in pmf.probabilities().iter().enumerate().take(12) {
            if n > 0 {
                poisson /= n as f64;
            }
            assert!((p - poisson).abs() < 1e-12);
        }
        let plus = coherent_state(c(1.3), 1e-12).unwrap();
        let minus = coherent_state(c(-1.3), 1e-12).unwrap();
        let cat = superpose(&plus, &minus, Sign::Plus).unwrap();
        let pmf = pnrd_pmf(&cat).unwrap();
        assert!(pmf
            .probabilities()
            .iter()
            .skip(1)
            .step_by(2)
            .all(|p| *p < 1e-30));
    }

    #[test]
    fn blur_zero_is_identity() {
        let pdf = homodyne_pdf_auto(&fock_state(0, 1).unwrap(), 0.0).unwrap();
        assert_eq!(blur_pdf(&pdf, 0.0).unwrap(), pdf);
    }

    #[test]
    fn blur_adds_variance() {
        let pdf = homodyne_pdf_auto(&fock_state(0, 1).unwrap(), 0.0).unwrap();
        let blurred = blur_pdf(&pdf, 1.0).unwrap();
        assert!((blurred.integral() - 1.0).abs() < 1e-6);
        assert!((blurred.variance() - 1.5).abs() < 1e-4);
        let wide = blur_pdf(&pdf, 2.0).unwrap();
        assert!((wide.integral() - 1.0).abs() < 1e-6);
        assert!((wide.variance() - 4.5).abs() < 1e-4);
    }

    #[test]
    fn blur_pmf_cases() {
        assert_eq!(
            blur_pmf(&Pmf::new(vec![1.0]).unwrap(), 0.0).unwrap_err(),
            Error::UsePmfDirectly
        );
        let single = blur_pmf(&Pmf::new(vec![1.0, 0.0]).unwrap(), 0.5).unwrap();
        assert!(single.mean().abs() < 1e-7);
        assert!((single.variance() - 0.25).abs() < 1e-6);
        let coh = coherent_state(c(2.0), 1e-12).unwrap();
        let pmf = pnrd_pmf(&coh).unwrap();
        let blob = blur_pmf(&pmf, 3.0).unwrap();
        assert!((blob.integral() - 1.0).abs() < 1e-6);
        assert!((blob.variance() - (pmf.variance() + 9.0)).abs() < 1e-4);
    }

    #[test]
    fn vacuum_wigner_peak() {
        let vac = fock_state(0, 1).unwrap();
        let field = wigner(&vac, PhaseSpaceGrid::square(6.0, 121).unwrap()).unwrap();
        assert!((field.value(60, 60) - 1.0 / PI).abs() < 1e-12);
        assert!((field.integral() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn wigner_orientation_follows_quadratures() {
        // α = i: the state sits at p = √2 and x = 0
        let s = coherent_state(Complex64::new(0.0, 1.0), 1e-12).unwrap();
        let grid = PhaseSpaceGrid::square(7.0, 141).unwrap();
        let field = wigner(&s, grid).unwrap();
        let marginal = field.marginal_p();
        let ps = grid.p.points();
        let mean: f64 = ps.iter().zip(&marginal).map(|(p, w)| p * w).sum::<f64>() * grid.p.dx();
        assert!((mean - 2f64.sqrt()).abs() < 1e-6);
    }
}
