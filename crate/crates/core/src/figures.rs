//! Data tables behind the standard figures.
//!
//! | id | alias | content |
//! |----|-------|---------|
//! | 1 | `fig-wigner` | Wigner grids of the odd cat and the coherent mixture at α = 1.5 |
//! | 2 | `fig-css` | CSS sizes and distinguishability vs α |
//! | 3 | `fig-psv` | PSV (m = 1) sizes and distinguishability vs r |
//! | 4 | `fig-dfs` | DFS sizes, homodyne and PNRD distinguishability vs α |
//! | 5 | `fig-noise-css` | CSS `D_KD` vs σ |
//! | 6 | `fig-noise-psv` | PSV `D_KD` vs σ |
//! | 7 | `fig-noise-dfs` | DFS `D_KD` vs σ, both detectors |
//! | 8 | `fig-summary` | `M_KD` against `⟨n⟩` for every family, detector and σ ∈ {0, 2} |

use crate::catalog::{css, Family, FamilyParams};
use crate::error::{Error, Result};
use crate::fock::{Ensemble, Sign, Truncation};
use crate::macroscopicity::n_fluct;
use crate::measurement::{wigner, DetectorKind, PhaseSpaceGrid};
use crate::sweep::{
    build_state, ideal_distributions, linspace, measures_at, ordered_parallel, DetectorChoice,
};
use crate::table::{Audit, ResultTable, SIGMA_NOTE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Wigner,
    Css,
    Psv,
    Dfs,
    NoiseCss,
    NoisePsv,
    NoiseDfs,
    Summary,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Wigner,
        FigureId::Css,
        FigureId::Psv,
        FigureId::Dfs,
        FigureId::NoiseCss,
        FigureId::NoisePsv,
        FigureId::NoiseDfs,
        FigureId::Summary,
    ];

    pub fn number(self) -> u8 {
        FigureId::ALL.iter().position(|f| *f == self).unwrap() as u8 + 1
    }

    pub fn alias(self) -> &'static str {
        match self {
            FigureId::Wigner => "fig-wigner",
            FigureId::Css => "fig-css",
            FigureId::Psv => "fig-psv",
            FigureId::Dfs => "fig-dfs",
            FigureId::NoiseCss => "fig-noise-css",
            FigureId::NoisePsv => "fig-noise-psv",
            FigureId::NoiseDfs => "fig-noise-dfs",
            FigureId::Summary => "fig-summary",
        }
    }
}

impl std::str::FromStr for FigureId {
    type Err = Error;

    /// Accepts `1`–`8`, the aliases, and the aliases without the `fig-` prefix.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        if let Ok(n) = key.parse::<usize>() {
            return n
                .checked_sub(1)
                .and_then(|i| FigureId::ALL.get(i).copied())
                .ok_or(Error::InvalidFigure(s.to_string()));
        }
        let bare = key.strip_prefix("fig-").unwrap_or(&key);
        FigureId::ALL
            .into_iter()
            .find(|f| &f.alias()[4..] == bare)
            .ok_or(Error::InvalidFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    /// Points along each family's parameter axis.
    pub points: usize,
    /// Points along the σ axis of the noise figures.
    pub sigma_points: usize,
    /// Points per phase-space axis of the Wigner figure.
    pub wigner_points: usize,
    pub truncation: Truncation,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            points: 61,
            sigma_points: 81,
            wigner_points: 101,
            truncation: Truncation::default(),
        }
    }
}

/// Amplitude of the cat and mixture in the Wigner figure.
pub const WIGNER_ALPHA: f64 = 1.5;
pub const WIGNER_HALF_WIDTH: f64 = 5.0;
pub const NOISE_SIGMA_MAX: f64 = 4.0;
/// Resolution of the degraded detectors in the summary figure.
pub const SUMMARY_SIGMA: f64 = 2.0;

/// Parameter range plotted for each family.
pub fn parameter_range(family: Family) -> (f64, f64) {
    match family {
        Family::Css => (0.05, 3.0),
        Family::Psv => (0.05, 2.5),
        Family::Dfs => (0.0, 3.0),
    }
}

/// Representative parameters of the noise figures.
pub fn noise_parameters(family: Family) -> &'static [f64] {
    match family {
        Family::Css => &[0.5, 1.0, 1.5, 2.0],
        Family::Psv => &[0.5, 1.0, 1.5, 2.0],
        Family::Dfs => &[0.5, 1.0, 2.0, 3.0],
    }
}

/// PSV figures use single-photon subtraction.
pub const PSV_SUBTRACTED: usize = 1;

fn family_params(family: Family, value: f64) -> FamilyParams {
    FamilyParams::new(family, value, PSV_SUBTRACTED)
}

pub fn run_figure(id: &str, options: &FigureOptions) -> Result<ResultTable> {
    let figure: FigureId = id.parse()?;
    options.truncation.validate()?;
    if options.points < 2 || options.sigma_points < 2 || options.wigner_points < 2 {
        return Err(Error::InvalidArgument(
            "figures need at least two points per axis".into(),
        ));
    }
    let mut table = match figure {
        FigureId::Wigner => wigner_figure(options)?,
        FigureId::Css => family_figure(Family::Css, options)?,
        FigureId::Psv => family_figure(Family::Psv, options)?,
        FigureId::Dfs => family_figure(Family::Dfs, options)?,
        FigureId::NoiseCss => noise_figure(Family::Css, options)?,
        FigureId::NoisePsv => noise_figure(Family::Psv, options)?,
        FigureId::NoiseDfs => noise_figure(Family::Dfs, options)?,
        FigureId::Summary => summary_figure(options)?,
    };
    table.set_meta(
        "figure",
        format!("{} ({})", figure.number(), figure.alias()),
    );
    Ok(table)
}

fn wigner_figure(options: &FigureOptions) -> Result<ResultTable> {
    let truncation = options.truncation.for_phase_space();
    let state = css(WIGNER_ALPHA, truncation).map_err(|e| e.at_point("css", WIGNER_ALPHA))?;
    let [b1, b2] = [
        &state.branch_set.branches()[0],
        &state.branch_set.branches()[1],
    ];
    let mixture = Ensemble::new(vec![(0.5, b1.clone()), (0.5, b2.clone())])?;
    let grid = PhaseSpaceGrid::square(WIGNER_HALF_WIDTH, options.wigner_points)?;
    let cat = wigner(&state.psi_minus, grid)?;
    let mix = wigner(&mixture, grid)?;
    let mut table = ResultTable::new(["x", "p", "w_superposition", "w_mixture"]);
    for ix in 0..grid.x.n_points {
        for ip in 0..grid.p.n_points {
            table.push_row(vec![
                grid.x.point(ix),
                grid.p.point(ip),
                cat.value(ix, ip),
                mix.value(ix, ip),
            ])?;
        }
    }
    table.set_meta("family", "css");
    table.set_meta("alpha", WIGNER_ALPHA);
    table.set_meta("superposition", "odd cat (|alpha> - |-alpha>) normalized");
    table.set_meta("mixture", "equal mixture of |alpha> and |-alpha>");
    table.record_numerics(
        truncation,
        Audit::default()
            .cutoff(state.max_cutoff())
            .grid(grid.x.n_points),
    );
    Ok(table)
}

fn family_figure(family: Family, options: &FigureOptions) -> Result<ResultTable> {
    let (start, stop) = parameter_range(family);
    let values = linspace(start, stop, options.points);
    let mut columns = vec![family.parameter_name(), "n_plus", "n_minus", "d_bc", "d_kd"];
    match family {
        Family::Css => columns.push("d_pnrd"),
        Family::Psv => columns.extend(["d_pnrd", "angle"]),
        Family::Dfs => columns.extend(["d_pnrd_bc", "d_pnrd"]),
    }
    let rows = ordered_parallel(&values, |&value| {
        let (state, audit) = build_state(family_params(family, value), options.truncation)?;
        let at = |e: Error| e.at_point(family.name(), value);
        let homodyne = ideal_distributions(&state, DetectorChoice::Homodyne.kind(&state, None))?;
        let (h, points) = measures_at(&state, &homodyne, 0.0)?;
        let pnrd = ideal_distributions(&state, DetectorKind::Pnrd)?;
        let (c, _) = measures_at(&state, &pnrd, 0.0)?;
        let mut row = vec![
            value,
            n_fluct(&state.psi_plus).map_err(at)?,
            n_fluct(&state.psi_minus).map_err(at)?,
            h.bc,
            h.kd,
        ];
        match family {
            Family::Css => row.push(c.kd),
            Family::Psv => row.extend([c.kd, state.recommended_homodyne_angle]),
            Family::Dfs => row.extend([c.bc, c.kd]),
        }
        Ok((row, audit.grid(points)))
    })?;
    let mut table = ResultTable::new(columns);
    let mut audit = Audit::default();
    for (row, a) in rows {
        table.push_row(row)?;
        audit = audit.merge(a);
    }
    table.set_meta("family", family);
    if family == Family::Psv {
        table.set_meta("m", PSV_SUBTRACTED);
    }
    table.set_meta(
        "detectors",
        "d_bc and d_kd: ideal homodyne at the recommended angle; d_pnrd*: ideal photon counting",
    );
    table.record_numerics(options.truncation, audit);
    Ok(table)
}

fn noise_figure(family: Family, options: &FigureOptions) -> Result<ResultTable> {
    let sigmas = linspace(0.0, NOISE_SIGMA_MAX, options.sigma_points);
    let with_pnrd = family == Family::Dfs;
    let per_point = ordered_parallel(noise_parameters(family), |&value| {
        let (state, mut audit) = build_state(family_params(family, value), options.truncation)?;
        let homodyne = ideal_distributions(&state, DetectorChoice::Homodyne.kind(&state, None))?;
        let pnrd = if with_pnrd {
            Some(ideal_distributions(&state, DetectorKind::Pnrd)?)
        } else {
            None
        };
        let mut rows = Vec::with_capacity(sigmas.len());
        for &sigma in &sigmas {
            let (h, points) = measures_at(&state, &homodyne, sigma)?;
            audit = audit.grid(points);
            let mut row = vec![value, sigma, h.kd];
            if let Some(p) = &pnrd {
                row.push(measures_at(&state, p, sigma)?.0.kd);
            }
            rows.push(row);
        }
        Ok((rows, audit))
    })?;
    let mut columns = vec![family.parameter_name(), "sigma", "d_kd"];
    if with_pnrd {
        columns.push("d_pnrd");
    }
    let mut table = ResultTable::new(columns);
    let mut audit = Audit::default();
    for (rows, a) in per_point {
        audit = audit.merge(a);
        for row in rows {
            table.push_row(row)?;
        }
    }
    table.set_meta("family", family);
    if family == Family::Psv {
        table.set_meta("m", PSV_SUBTRACTED);
    }
    table.set_meta("sigma_units", SIGMA_NOTE);
    table.record_numerics(options.truncation, audit);
    Ok(table)
}

/// Summary rows: `family_id, sign, detector_id, sigma, param, mean_n, n_fluct, d_kd, m_kd`.
///
/// Family ids are css = 0, psv = 1, dfs = 2; detector ids are homodyne = 0, pnrd = 1;
/// `sign` is +1 or −1. Both DFS signs are emitted even though `N(ψ+) = 0`.
fn summary_figure(options: &FigureOptions) -> Result<ResultTable> {
    let sigmas = [0.0, SUMMARY_SIGMA];
    let detectors = [DetectorChoice::Homodyne, DetectorChoice::Pnrd];
    let mut table = ResultTable::new([
        "family_id",
        "sign",
        "detector_id",
        "sigma",
        "param",
        "mean_n",
        "n_fluct",
        "d_kd",
        "m_kd",
    ]);
    let mut audit = Audit::default();
    for family in Family::ALL {
        let (start, stop) = parameter_range(family);
        let values = linspace(start, stop, options.points);
        // Per parameter: [sign][detector][sigma] -> (mean_n, n_fluct, d_kd)
        let cells = ordered_parallel(&values, |&value| {
            let (state, mut audit) = build_state(family_params(family, value), options.truncation)?;
            let at = |e: Error| e.at_point(family.name(), value);
            let mut d = [[0.0; 2]; 2];
            for (i, det) in detectors.iter().enumerate() {
                let ideal = ideal_distributions(&state, det.kind(&state, None))?;
                for (j, &sigma) in sigmas.iter().enumerate() {
                    let (m, points) = measures_at(&state, &ideal, sigma)?;
                    audit = audit.grid(points);
                    d[i][j] = m.kd;
                }
            }
            let sizes = [Sign::Plus, Sign::Minus].map(|s| -> Result<(f64, f64)> {
                let psi = state.superposition(s);
                Ok((psi.moments().mean_n, n_fluct(psi).map_err(at)?))
            });
            let [plus, minus] = sizes;
            Ok(([plus?, minus?], d, audit))
        })?;
        for (si, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
            for (di, det) in detectors.iter().enumerate() {
                for (gi, &sigma) in sigmas.iter().enumerate() {
                    for (value, (sizes, d, _)) in values.iter().zip(&cells) {
                        let (mean_n, n) = sizes[si];
                        let kd = d[di][gi];
                        table.push_row(vec![
                            family.id() as f64,
                            sign.value(),
                            det.id() as f64,
                            sigma,
                            *value,
                            mean_n,
                            n,
                            kd,
                            n * kd,
                        ])?;
                    }
                }
            }
        }
        for (_, _, a) in &cells {
            audit = audit.merge(*a);
        }
    }
    table.set_meta("family_ids", "css=0, psv=1, dfs=2");
    table.set_meta("detector_ids", "homodyne=0, pnrd=1");
    table.set_meta("m", PSV_SUBTRACTED);
    table.set_meta("sigma_units", SIGMA_NOTE);
    table.record_numerics(options.truncation, audit);
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> FigureOptions {
        FigureOptions {
            points: 5,
            sigma_points: 3,
            wigner_points: 41,
            ..FigureOptions::default()
        }
    }

    #[test]
    fn ids_and_aliases() {
        for f in FigureId::ALL {
            assert_eq!(f.number().to_string().parse::<FigureId>().unwrap(), f);
            assert_eq!(f.alias().parse::<FigureId>().unwrap(), f);
            assert_eq!(f.alias()[4..].parse::<FigureId>().unwrap(), f);
        }
        for bad in ["9", "0", "fig-cat", ""] {
            assert_eq!(bad.parse::<FigureId>().unwrap_err().kind(), "invalid-id");
        }
        assert!(run_figure("9", &quick()).is_err());
    }

    #[test]
    fn css_figure_columns() {
        let t = run_figure("2", &quick()).unwrap();
        assert_eq!(
            t.columns(),
            ["alpha", "n_plus", "n_minus", "d_bc", "d_kd", "d_pnrd"]
        );
        assert_eq!(t.rows().len(), 5);
        assert!(t.column("d_pnrd").unwrap().iter().all(|d| d.abs() < 1e-9));
        assert!(t.meta("cutoff_max").is_some());
    }

    #[test]
    fn noise_figure_shape() {
        let t = run_figure("fig-noise-dfs", &quick()).unwrap();
        assert_eq!(t.columns(), ["alpha", "sigma", "d_kd", "d_pnrd"]);
        assert_eq!(t.rows().len(), 4 * 3);
    }

    #[test]
    fn summary_stays_below_diagonal() {
        let t = run_figure("summary", &quick()).unwrap();
        assert_eq!(t.rows().len(), 3 * 2 * 2 * 2 * 5);
        for row in t.rows() {
            assert!(row[8] <= row[5] + 1e-9);
        }
    }

    #[test]
    fn wigner_figure_shape() {
        let t = run_figure("1", &quick()).unwrap();
        assert_eq!(t.rows().len(), 41 * 41);
        let min = |c: &str| {
            t.column(c)
                .unwrap()
                .into_iter()
                .fold(f64::INFINITY, f64::min)
        };
        assert!(min("w_superposition") < -0.05);
        assert!(min("w_mixture") >= -1e-10);
    }
}
