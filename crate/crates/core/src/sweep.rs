//! Parameter sweeps and single-point evaluations rendered as [`ResultTable`]s.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::catalog::{Family, FamilyParams, TwoBranchState};
use crate::distinguishability::{error_probability, BranchDistributions, Distinguishability};
use crate::error::{Error, Result};
use crate::fock::{Sign, Truncation};
use crate::macroscopicity::{n_fluct, MacroReport};
use crate::measurement::{DetectorKind, DetectorModel};
use crate::table::{Audit, OutputFormat, ResultTable, SIGMA_NOTE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorChoice {
    Homodyne,
    Pnrd,
}

impl DetectorChoice {
    pub fn name(self) -> &'static str {
        match self {
            DetectorChoice::Homodyne => "homodyne",
            DetectorChoice::Pnrd => "pnrd",
        }
    }

    pub fn id(self) -> u8 {
        match self {
            DetectorChoice::Homodyne => 0,
            DetectorChoice::Pnrd => 1,
        }
    }

    /// Homodyne uses `angle` if given, otherwise the state's recommended phase.
    pub fn kind(self, state: &TwoBranchState, angle: Option<f64>) -> DetectorKind {
        match self {
            DetectorChoice::Homodyne => DetectorKind::Homodyne {
                angle: angle.unwrap_or(state.recommended_homodyne_angle),
            },
            DetectorChoice::Pnrd => DetectorKind::Pnrd,
        }
    }
}

impl std::str::FromStr for DetectorChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "homodyne" => Ok(DetectorChoice::Homodyne),
            "pnrd" => Ok(DetectorChoice::Pnrd),
            other => Err(Error::InvalidArgument(format!(
                "unknown detector `{other}`"
            ))),
        }
    }
}

/// Quantities a sweep can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    NFluct,
    MeanN,
    DBc,
    DKd,
    MBc,
    MKd,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::NFluct,
        Measure::MeanN,
        Measure::DBc,
        Measure::DKd,
        Measure::MBc,
        Measure::MKd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::NFluct => "n_fluct",
            Measure::MeanN => "mean_n",
            Measure::DBc => "d_bc",
            Measure::DKd => "d_kd",
            Measure::MBc => "m_bc",
            Measure::MKd => "m_kd",
        }
    }

    fn needs_detector(self) -> bool {
        !matches!(self, Measure::NFluct | Measure::MeanN)
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// Photons subtracted (PSV only).
    pub m: usize,
    pub detectors: Vec<DetectorChoice>,
    /// Fixed homodyne phase; `None` uses each state's recommended phase.
    pub angle: Option<f64>,
    pub sigmas: Vec<f64>,
    pub measures: Vec<Measure>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub truncation: Truncation,
}

impl SweepSpec {
    /// Homodyne detection at σ = 0, every measure, CSV to stdout.
    pub fn new(family: Family, start: f64, stop: f64, steps: usize) -> Self {
        SweepSpec {
            family,
            start,
            stop,
            steps,
            m: 1,
            detectors: vec![DetectorChoice::Homodyne],
            angle: None,
            sigmas: vec![0.0],
            measures: Measure::ALL.to_vec(),
            output: None,
            format: OutputFormat::Csv,
            truncation: Truncation::default(),
        }
    }

    /// Parses flat `key = value` text. Lists are comma separated; `#` starts a comment.
    ///
    /// Required keys: `family`, `start`, `stop`, `steps`. Optional: `m`, `detector`,
    /// `angle`, `sigma`, `measures`, `output`, `format`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", no + 1)))?;
            let key = key.trim().to_ascii_lowercase();
            if entries.iter().any(|(k, _)| *k == key) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    no + 1
                )));
            }
            entries.push((key, value.trim().to_string()));
        }
        let get = |key: &str| {
            entries
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
        };
        let need =
            |key: &str| get(key).ok_or_else(|| Error::Config(format!("missing key `{key}`")));
        let config = |e: Error| Error::Config(e.to_string());
        let number = |key: &str, v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("`{key}`: `{v}` is not a number")))
        };
        let count = |key: &str, v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("`{key}`: `{v}` is not a non-negative integer")))
        };
        let list = |v: &str| -> Vec<String> {
            v.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect()
        };

        for (key, _) in &entries {
            const KNOWN: [&str; 11] = [
                "family", "start", "stop", "steps", "m", "detector", "angle", "sigma", "measures",
                "output", "format",
            ];
            if !KNOWN.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key `{key}`")));
            }
        }

        let family: Family = need("family")?.parse().map_err(config)?;
        let mut spec = SweepSpec::new(
            family,
            number("start", need("start")?)?,
            number("stop", need("stop")?)?,
            count("steps", need("steps")?)?,
        );
        if let Some(v) = get("m") {
            spec.m = count("m", v)?;
        }
        if let Some(v) = get("detector") {
            spec.detectors = list(v)
                .iter()
                .map(|d| d.parse())
                .collect::<Result<_>>()
                .map_err(config)?;
        }
        if let Some(v) = get("angle") {
            spec.angle = Some(number("angle", v)?);
        }
        if let Some(v) = get("sigma") {
            spec.sigmas = list(v)
                .iter()
                .map(|s| number("sigma", s))
                .collect::<Result<_>>()?;
        }
        if let Some(v) = get("measures") {
            spec.measures = list(v)
                .iter()
                .map(|m| m.parse())
                .collect::<Result<_>>()
                .map_err(config)?;
        }
        if let Some(v) = get("output") {
            spec.output = Some(PathBuf::from(v));
        }
        if let Some(v) = get("format") {
            spec.format = v.parse().map_err(config)?;
        }
        spec.validate().map_err(config)?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::InvalidArgument(format!(
                "need finite start < stop, got {} and {}",
                self.start, self.stop
            )));
        }
        if self.sigmas.is_empty() || self.sigmas.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::InvalidArgument(
                "sigma entries must be finite and >= 0".into(),
            ));
        }
        if self.measures.is_empty() {
            return Err(Error::InvalidArgument("no measures requested".into()));
        }
        if self.detectors.is_empty() && self.measures.iter().any(|m| m.needs_detector()) {
            return Err(Error::InvalidArgument(
                "distinguishability measures need a detector".into(),
            ));
        }
        if let Some(a) = self.angle {
            crate::error::ensure_finite("angle", a)?;
        }
        self.truncation.validate()
    }

    /// Evenly spaced parameter values from `start` to `stop` inclusive.
    pub fn parameters(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.steps)
    }

    fn wants(&self, m: Measure) -> bool {
        self.measures.contains(&m)
    }

    fn sorted_sigmas(&self) -> Vec<f64> {
        let mut s = self.sigmas.clone();
        s.sort_by(f64::total_cmp);
        s
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec![
            self.family.parameter_name().to_string(),
            "sigma".to_string(),
        ];
        if self.wants(Measure::NFluct) {
            cols.extend(["n_plus".into(), "n_minus".into()]);
        }
        if self.wants(Measure::MeanN) {
            cols.extend(["mean_n_plus".into(), "mean_n_minus".into()]);
        }
        for det in &self.detectors {
            let d = det.name();
            if *det == DetectorChoice::Homodyne {
                cols.push("homodyne_angle".into());
            }
            if self.wants(Measure::DBc) {
                cols.push(format!("{d}_d_bc"));
            }
            if self.wants(Measure::DKd) {
                cols.push(format!("{d}_d_kd"));
            }
            if self.wants(Measure::MBc) {
                cols.extend([format!("{d}_m_bc_plus"), format!("{d}_m_bc_minus")]);
            }
            if self.wants(Measure::MKd) {
                cols.extend([format!("{d}_m_kd_plus"), format!("{d}_m_kd_minus")]);
            }
        }
        cols
    }
}

/// `n` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Runs `f` over `items` in parallel and returns results in input order,
/// reporting the earliest failure.
pub(crate) fn ordered_parallel<T, R, F>(items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    items
        .par_iter()
        .map(&f)
        .collect::<Vec<Result<R>>>()
        .into_iter()
        .collect()
}

/// Builds the state for one sweep point, tagging failures with the point.
pub(crate) fn build_state(
    params: FamilyParams,
    truncation: Truncation,
) -> Result<(TwoBranchState, Audit)> {
    let state = params
        .build(truncation)
        .map_err(|e| e.at_point(params.family().name(), params.value()))?;
    let audit = Audit::default().cutoff(state.max_cutoff());
    Ok((state, audit))
}

/// Ideal distributions for one detector, tagged with the point on failure.
pub(crate) fn ideal_distributions(
    state: &TwoBranchState,
    kind: DetectorKind,
) -> Result<BranchDistributions> {
    BranchDistributions::ideal(&state.branch_set, kind)
        .map_err(|e| e.at_point(state.family().name(), state.params.value()))
}

pub(crate) fn measures_at(
    state: &TwoBranchState,
    ideal: &BranchDistributions,
    sigma: f64,
) -> Result<(Distinguishability, usize)> {
    let blurred = ideal
        .at_sigma(sigma)
        .map_err(|e| e.at_point(state.family().name(), state.params.value()))?;
    let d = blurred
        .measures()
        .map_err(|e| e.at_point(state.family().name(), state.params.value()))?;
    Ok((d, blurred.support_size()))
}

/// Evaluates every point of `spec`. Rows are ordered by parameter, then by σ.
pub fn sweep(spec: &SweepSpec) -> Result<ResultTable> {
    spec.validate()?;
    let sigmas = spec.sorted_sigmas();
    let need_d = spec.measures.iter().any(|m| m.needs_detector());
    let per_point = ordered_parallel(&spec.parameters(), |&value| {
        let params = FamilyParams::new(spec.family, value, spec.m);
        let (state, mut audit) = build_state(params, spec.truncation)?;
        let at = |e: Error| e.at_point(spec.family.name(), value);
        let n = [
            n_fluct(&state.psi_plus).map_err(at)?,
            n_fluct(&state.psi_minus).map_err(at)?,
        ];
        let mean_n = [
            state.psi_plus.moments().mean_n,
            state.psi_minus.moments().mean_n,
        ];
        let ideals = if need_d {
            spec.detectors
                .iter()
                .map(|det| ideal_distributions(&state, det.kind(&state, spec.angle)))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let mut rows = Vec::with_capacity(sigmas.len());
        for &sigma in &sigmas {
            let mut row = vec![value, sigma];
            if spec.wants(Measure::NFluct) {
                row.extend(n);
            }
            if spec.wants(Measure::MeanN) {
                row.extend(mean_n);
            }
            for (i, det) in spec.detectors.iter().enumerate() {
                if *det == DetectorChoice::Homodyne {
                    row.push(spec.angle.unwrap_or(state.recommended_homodyne_angle));
                }
                let d = if need_d {
                    let (d, points) = measures_at(&state, &ideals[i], sigma)?;
                    audit = audit.grid(points);
                    d
                } else {
                    Distinguishability { bc: 0.0, kd: 0.0 }
                };
                if spec.wants(Measure::DBc) {
                    row.push(d.bc);
                }
                if spec.wants(Measure::DKd) {
                    row.push(d.kd);
                }
                if spec.wants(Measure::MBc) {
                    row.extend([n[0] * d.bc, n[1] * d.bc]);
                }
                if spec.wants(Measure::MKd) {
                    row.extend([n[0] * d.kd, n[1] * d.kd]);
                }
            }
            rows.push(row);
        }
        Ok((rows, audit))
    })?;

    let mut table = ResultTable::new(spec.columns());
    let mut audit = Audit::default();
    for (rows, a) in per_point {
        audit = audit.merge(a);
        for row in rows {
            table.push_row(row)?;
        }
    }
    table.set_meta("family", spec.family);
    if spec.family == Family::Psv {
        table.set_meta("m", spec.m);
    }
    let dets: Vec<&str> = spec.detectors.iter().map(|d| d.name()).collect();
    table.set_meta("detectors", dets.join(","));
    table.set_meta(
        "homodyne_angle",
        spec.angle
            .map_or("recommended per state".to_string(), |a| a.to_string()),
    );
    table.set_meta("sigma_units", SIGMA_NOTE);
    table.record_numerics(spec.truncation, audit);
    Ok(table)
}

/// One state, one detector, one resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputeRequest {
    pub params: FamilyParams,
    pub detector: DetectorChoice,
    /// Fixed homodyne phase; `None` uses the state's recommended phase.
    pub angle: Option<f64>,
    pub sigma: f64,
    pub sign: Sign,
    pub truncation: Truncation,
}

impl ComputeRequest {
    pub fn new(params: FamilyParams, detector: DetectorChoice, sigma: f64) -> Self {
        ComputeRequest {
            params,
            detector,
            angle: None,
            sigma,
            sign: Sign::Minus,
            truncation: Truncation::default(),
        }
    }
}

/// Full report for a single point.
pub fn compute_report(req: &ComputeRequest) -> Result<MacroReport> {
    let (state, _) = build_state(req.params, req.truncation)?;
    let detector = DetectorModel {
        kind: req.detector.kind(&state, req.angle),
        sigma: req.sigma,
    };
    let ideal = ideal_distributions(&state, detector.kind)?;
    let (d, _) = measures_at(&state, &ideal, req.sigma)?;
    MacroReport::assemble(&state, req.sign, detector, d)
        .map_err(|e| e.at_point(state.family().name(), state.params.value()))
}

/// [`compute_report`] rendered as a one-row table.
pub fn compute(req: &ComputeRequest) -> Result<ResultTable> {
    if !(req.sigma >= 0.0 && req.sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "resolution must be finite and >= 0, got {}",
            req.sigma
        )));
    }
    let (state, audit) = build_state(req.params, req.truncation)?;
    let kind = req.detector.kind(&state, req.angle);
    let ideal = ideal_distributions(&state, kind)?;
    let (d, points) = measures_at(&state, &ideal, req.sigma)?;
    let detector = DetectorModel {
        kind,
        sigma: req.sigma,
    };
    let rep = MacroReport::assemble(&state, req.sign, detector, d)
        .map_err(|e| e.at_point(state.family().name(), state.params.value()))?;

    let family = req.params.family();
    let mut table = ResultTable::new([
        family.parameter_name(),
        "sigma",
        "mean_n",
        "n_fluct",
        "d_bc",
        "d_kd",
        "m_bc",
        "m_kd",
        "error_probability",
    ]);
    table.push_row(vec![
        req.params.value(),
        req.sigma,
        rep.mean_n,
        rep.n_fluct,
        rep.d_bc,
        rep.d_kd,
        rep.m_bc,
        rep.m_kd,
        error_probability(rep.d_kd),
    ])?;
    table.set_meta("family", family);
    if let FamilyParams::Psv { m, .. } = req.params {
        table.set_meta("m", m);
    }
    table.set_meta("sign", req.sign.symbol());
    table.set_meta("detector", req.detector.name());
    if let DetectorKind::Homodyne { angle } = kind {
        table.set_meta("homodyne_angle", angle);
    }
    table.set_meta("sigma_units", SIGMA_NOTE);
    table.record_numerics(req.truncation, audit.grid(points));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_config() {
        let spec =
            SweepSpec::parse("family = css\nstart = 0.1\nstop = 3\nsteps = 31 # count\n").unwrap();
        assert_eq!(spec.family, Family::Css);
        assert_eq!(spec.steps, 31);
        assert_eq!(spec.detectors, vec![DetectorChoice::Homodyne]);
        assert_eq!(spec.parameters().last(), Some(&3.0));
    }

    #[test]
    fn parse_full_config() {
        let text = "family = dfs\nstart = 0.5\nstop = 2\nsteps = 4\ndetector = homodyne, pnrd\n\
                    sigma = 2, 0\nmeasures = d_kd\nformat = json\noutput = out.json\nangle = 0\n";
        let spec = SweepSpec::parse(text).unwrap();
        assert_eq!(spec.detectors.len(), 2);
        assert_eq!(spec.sorted_sigmas(), vec![0.0, 2.0]);
        assert_eq!(spec.format, OutputFormat::Json);
        assert_eq!(
            spec.columns(),
            [
                "alpha",
                "sigma",
                "homodyne_angle",
                "homodyne_d_kd",
                "pnrd_d_kd"
            ]
        );
    }

    #[test]
    fn config_errors() {
        let base = "family = css\nstart = 0.1\nstop = 3\nsteps = 3\n";
        for bad in [
            "colour = red",
            "steps = 4",
            "sigma = -1",
            "detector = eye",
            "no equals sign",
        ] {
            let err = SweepSpec::parse(&format!("{base}{bad}\n")).unwrap_err();
            assert_eq!(err.kind(), "config-error", "{bad}");
        }
        assert!(SweepSpec::parse("family = css\nstart = 3\nstop = 1\nsteps = 3\n").is_err());
        assert!(SweepSpec::parse("family = css\nstart = 0.1\nstop = 1\nsteps = 1\n").is_err());
        assert!(SweepSpec::parse("start = 0.1\nstop = 1\nsteps = 3\n").is_err());
    }

    #[test]
    fn sweep_rows_are_ordered() {
        let mut spec = SweepSpec::new(Family::Css, 0.5, 1.5, 3);
        spec.sigmas = vec![1.0, 0.0];
        let t = sweep(&spec).unwrap();
        assert_eq!(t.rows().len(), 6);
        let keys: Vec<(f64, f64)> = t.rows().iter().map(|r| (r[0], r[1])).collect();
        assert_eq!(
            keys,
            vec![
                (0.5, 0.0),
                (0.5, 1.0),
                (1.0, 0.0),
                (1.0, 1.0),
                (1.5, 0.0),
                (1.5, 1.0)
            ]
        );
        assert_eq!(sweep(&spec).unwrap().to_csv(), t.to_csv());
    }

    #[test]
    fn sweep_failure_names_point() {
        let spec = SweepSpec::new(Family::Psv, 0.0, 1.0, 2);
        let err = sweep(&spec).unwrap_err();
        assert_eq!(err.kind(), "degenerate-subtraction");
        assert!(err.to_string().starts_with("psv at parameter 0"));
    }

    #[test]
    fn compute_odd_cat() {
        let req = ComputeRequest::new(
            FamilyParams::Css { alpha: 1.5 },
            DetectorChoice::Homodyne,
            0.0,
        );
        let t = compute(&req).unwrap();
        let d = t.column("d_kd").unwrap()[0];
        assert!((d - 0.99730).abs() < 1e-5);
        assert_eq!(t.meta("sign"), Some("-"));
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
