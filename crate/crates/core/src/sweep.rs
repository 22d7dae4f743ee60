//! Threshold finding along one family parameter and 2-D detection-region
//! scans.
//!
//! Bisection is guarded by a 101-point linear pre-scan: the detector verdict
//! must change exactly once on the bracket, otherwise the sweep aborts instead
//! of silently returning a wrong boundary. Detection side (above or below the
//! boundary) is inferred from the endpoint verdicts, since some families
//! detect only below their threshold.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entdetect::VERDICT_TOL;
use crate::states::{make_family, DensityMatrix, Family, FamilySpec, StateError};
use crate::steer::{thm1_verdict, Detection, SteerError};

/// Default bisection tolerance on the swept parameter.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Bisection iteration cap.
pub const MAX_ITERATIONS: usize = 200;

/// Points in the guarding linear pre-scan (inclusive of both ends).
pub const PRESCAN_POINTS: usize = 101;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    State(#[from] StateError),

    #[error(transparent)]
    Steer(#[from] SteerError),

    #[error("no sign change: detector '{detector}' gives the same verdict at {lo} and {hi}")]
    NoSignChange {
        detector: String,
        lo: f64,
        hi: f64,
    },

    #[error("non-monotone detector: verdict changes {transitions} times on the bracket")]
    NonMonotone { transitions: usize },

    #[error("bisection exceeded {MAX_ITERATIONS} iterations")]
    IterationCap,

    #[error("parameter bound is not finite")]
    NonFiniteBound,

    #[error("empty bracket: lo = {lo} must be below hi = {hi}")]
    EmptyBracket { lo: f64, hi: f64 },

    #[error("detector '{detector}' direction is not applicable to dims {d_a}⊗{d_b}")]
    DirectionNotApplicable {
        detector: String,
        d_a: usize,
        d_b: usize,
    },

    #[error("unknown detector '{0}' (expected thm1, thm1_ba, thm1_ab, ls2 or ls3)")]
    UnknownDetector(String),

    #[error("axis {name}: {reason}")]
    BadAxis { name: &'static str, reason: String },
}

/// Named boolean steering detectors usable in sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detector {
    /// Every applicable steering-map direction detects.
    Thm1,
    Thm1BtoA,
    Thm1AtoB,
    Ls2,
    Ls3,
}

impl Detector {
    pub const ALL: [Detector; 5] = [
        Detector::Thm1,
        Detector::Thm1BtoA,
        Detector::Thm1AtoB,
        Detector::Ls2,
        Detector::Ls3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Detector::Thm1 => "thm1",
            Detector::Thm1BtoA => "thm1_ba",
            Detector::Thm1AtoB => "thm1_ab",
            Detector::Ls2 => "ls2",
            Detector::Ls3 => "ls3",
        }
    }

    pub fn parse(s: &str) -> Result<Self, SweepError> {
        Self::ALL
            .iter()
            .copied()
            .find(|d| d.name() == s)
            .ok_or_else(|| SweepError::UnknownDetector(s.to_string()))
    }

    /// Evaluate the detector on one state.
    pub fn evaluate(&self, rho: &DensityMatrix, mu: f64) -> Result<bool, SweepError> {
        let report = thm1_verdict(rho, mu)?;
        let dims = rho.dims();
        let applicable = |d: Detection| d != Detection::NotApplicable;
        let require = |d: Detection| -> Result<bool, SweepError> {
            if !applicable(d) {
                return Err(SweepError::DirectionNotApplicable {
                    detector: self.name().to_string(),
                    d_a: dims.d_a,
                    d_b: dims.d_b,
                });
            }
            Ok(d == Detection::Detected)
        };
        match self {
            Detector::Thm1 => {
                let dirs = [report.detected_b_to_a, report.detected_a_to_b];
                Ok(dirs
                    .iter()
                    .filter(|&&d| applicable(d))
                    .all(|&d| d == Detection::Detected))
            }
            Detector::Thm1BtoA => require(report.detected_b_to_a),
            Detector::Thm1AtoB => require(report.detected_a_to_b),
            Detector::Ls2 => match report.ls2_value {
                Some(v) => Ok(v > 1.0 + VERDICT_TOL),
                None => Err(SweepError::DirectionNotApplicable {
                    detector: self.name().to_string(),
                    d_a: dims.d_a,
                    d_b: dims.d_b,
                }),
            },
            Detector::Ls3 => match report.ls3_value {
                Some(v) => Ok(v > 1.0 + VERDICT_TOL),
                None => Err(SweepError::DirectionNotApplicable {
                    detector: self.name().to_string(),
                    d_a: dims.d_a,
                    d_b: dims.d_b,
                }),
            },
        }
    }
}

/// Which side of the boundary the detector fires on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectSide {
    Above,
    Below,
}

/// Result of a threshold bisection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub param_name: String,
    pub boundary: f64,
    pub bracket: [f64; 2],
    pub detector: String,
    pub direction_of_detection: DetectSide,
    pub iterations: usize,
}

/// A family with one swept parameter; the rest are pinned in `fixed`.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub free: String,
    pub fixed: BTreeMap<String, f64>,
}

impl SweepSpec {
    pub fn new(family: Family, free: &str, fixed: &[(&str, f64)]) -> Result<Self, SweepError> {
        if !family.params().iter().any(|&(n, _, _)| n == free) {
            return Err(StateError::UnknownParam {
                family,
                name: free.to_string(),
            }
            .into());
        }
        Ok(Self {
            family,
            free: free.to_string(),
            fixed: fixed
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
        })
    }

    /// Range of the swept parameter declared by the family.
    pub fn free_range(&self) -> (f64, f64) {
        let (_, lo, hi) = self
            .family
            .params()
            .iter()
            .copied()
            .find(|&(n, _, _)| n == self.free)
            .expect("free parameter checked at construction");
        (lo, hi)
    }

    pub fn state_at(&self, x: f64) -> Result<DensityMatrix, SweepError> {
        let mut params = self.fixed.clone();
        params.insert(self.free.clone(), x);
        Ok(make_family(&FamilySpec {
            family: self.family,
            params,
        })?)
    }
}

/// Generic guarded bisection of a boolean predicate over [lo, hi].
///
/// Runs the 101-point pre-scan, rejects flat or non-monotone verdicts, then
/// bisects the single transition cell until the bracket width is at most
/// 2·tol. Returns (boundary, bracket, detection side, iterations).
pub fn find_boundary(
    mut verdict: impl FnMut(f64) -> Result<bool, SweepError>,
    detector_name: &str,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, [f64; 2], DetectSide, usize), SweepError> {
    if !lo.is_finite() || !hi.is_finite() || !tol.is_finite() || tol <= 0.0 {
        return Err(SweepError::NonFiniteBound);
    }
    if lo >= hi {
        return Err(SweepError::EmptyBracket { lo, hi });
    }

    let n = PRESCAN_POINTS;
    let mut scan = Vec::with_capacity(n);
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        scan.push((x, verdict(x)?));
    }
    let transitions: Vec<usize> = (0..n - 1).filter(|&i| scan[i].1 != scan[i + 1].1).collect();
    if scan[0].1 == scan[n - 1].1 {
        return Err(SweepError::NoSignChange {
            detector: detector_name.to_string(),
            lo,
            hi,
        });
    }
    if transitions.len() != 1 {
        return Err(SweepError::NonMonotone {
            transitions: transitions.len(),
        });
    }

    let side = if scan[n - 1].1 {
        DetectSide::Above
    } else {
        DetectSide::Below
    };
    let cell = transitions[0];
    let (mut a, va) = scan[cell];
    let (mut b, _) = scan[cell + 1];
    let mut iterations = 0;
    while b - a > 2.0 * tol {
        if iterations >= MAX_ITERATIONS {
            return Err(SweepError::IterationCap);
        }
        let mid = 0.5 * (a + b);
        if verdict(mid)? == va {
            a = mid;
        } else {
            b = mid;
        }
        iterations += 1;
    }
    Ok((0.5 * (a + b), [a, b], side, iterations))
}

/// Bisect the verdict boundary of a named detector along one family
/// parameter.
pub fn find_threshold(
    spec: &SweepSpec,
    detector: Detector,
    mu: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<ThresholdResult, SweepError> {
    let (boundary, bracket, side, iterations) = find_boundary(
        |x| detector.evaluate(&spec.state_at(x)?, mu),
        detector.name(),
        lo,
        hi,
        tol,
    )?;
    Ok(ThresholdResult {
        param_name: spec.free.clone(),
        boundary,
        bracket,
        detector: detector.name().to_string(),
        direction_of_detection: side,
        iterations,
    })
}

/// All four detector verdicts for one state, in the fixed column order
/// (thm1_ba, thm1_ab, ls2, ls3). Inequality columns are false when the state
/// is not 2⊗2.
pub fn detector_row(rho: &DensityMatrix, mu: f64) -> Result<[bool; 4], SweepError> {
    let report = thm1_verdict(rho, mu)?;
    Ok([
        report.detected_b_to_a.is_detected(),
        report.detected_a_to_b.is_detected(),
        report.ls2_value.is_some_and(|v| v > 1.0 + VERDICT_TOL),
        report.ls3_value.is_some_and(|v| v > 1.0 + VERDICT_TOL),
    ])
}

/// One line of the pre-scan table emitted by the CLI sweep command.
#[derive(Debug, Clone, Copy)]
pub struct PrescanRow {
    pub param: f64,
    pub verdicts: [bool; 4],
}

/// Evaluate all four detectors on the 101-point grid over [lo, hi].
pub fn prescan_table(
    spec: &SweepSpec,
    mu: f64,
    lo: f64,
    hi: f64,
) -> Result<Vec<PrescanRow>, SweepError> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(SweepError::NonFiniteBound);
    }
    if lo >= hi {
        return Err(SweepError::EmptyBracket { lo, hi });
    }
    let n = PRESCAN_POINTS;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        rows.push(PrescanRow {
            param: x,
            verdicts: detector_row(&spec.state_at(x)?, mu)?,
        });
    }
    Ok(rows)
}

/// Inclusive axis of a region scan.
#[derive(Debug, Clone, Copy)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    fn checked(&self, name: &'static str, lo: f64, hi: f64) -> Result<Vec<f64>, SweepError> {
        if self.steps < 2 {
            return Err(SweepError::BadAxis {
                name,
                reason: format!("needs at least 2 steps, got {}", self.steps),
            });
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min >= self.max {
            return Err(SweepError::BadAxis {
                name,
                reason: format!("range [{}, {}] is not increasing", self.min, self.max),
            });
        }
        if self.min < lo - 1e-12 || self.max > hi + 1e-12 {
            return Err(SweepError::BadAxis {
                name,
                reason: format!(
                    "range [{}, {}] outside the family domain [{lo}, {hi}]",
                    self.min, self.max
                ),
            });
        }
        Ok((0..self.steps)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64)
            .collect())
    }
}

/// Detector verdicts at one region grid point.
#[derive(Debug, Clone, Copy)]
pub struct RegionCell {
    pub thm1_ba: bool,
    pub thm1_ab: bool,
    pub ls2: bool,
    pub ls3: bool,
}

/// Verdict grid over the (α, θ) parameter square of the noisy partially
/// entangled family; cells are stored with θ varying fastest.
#[derive(Debug, Clone)]
pub struct RegionGrid {
    pub alphas: Vec<f64>,
    pub thetas: Vec<f64>,
    pub cells: Vec<RegionCell>,
}

impl RegionGrid {
    pub fn cell(&self, alpha_idx: usize, theta_idx: usize) -> RegionCell {
        self.cells[alpha_idx * self.thetas.len() + theta_idx]
    }
}

/// Evaluate all four detectors over an (α, θ) grid of werner_derivative
/// states. Cells are evaluated in a fixed order, so two runs (or any future
/// parallel schedule with a deterministic merge) yield identical grids.
pub fn region_scan(
    alpha_axis: AxisSpec,
    theta_axis: AxisSpec,
    mu: f64,
) -> Result<RegionGrid, SweepError> {
    let alphas = alpha_axis.checked("alpha", 0.0, 1.0)?;
    let thetas = theta_axis.checked("theta", 0.0, std::f64::consts::FRAC_PI_4)?;
    let mut cells = Vec::with_capacity(alphas.len() * thetas.len());
    for &alpha in &alphas {
        for &theta in &thetas {
            let rho = make_family(&FamilySpec::new(
                Family::WernerDerivative,
                &[("alpha", alpha), ("theta", theta)],
            )?)?;
            let [thm1_ba, thm1_ab, ls2, ls3] = detector_row(&rho, mu)?;
            cells.push(RegionCell {
                thm1_ba,
                thm1_ab,
                ls2,
                ls3,
            });
        }
    }
    Ok(RegionGrid {
        alphas,
        thetas,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steer::DEFAULT_MU;
    use std::f64::consts::FRAC_PI_4;

    fn sweep(family: Family, free: &str) -> SweepSpec {
        SweepSpec::new(family, free, &[]).unwrap()
    }

    #[test]
    fn werner_threshold_is_mu_scaled_ppt_boundary() {
        let spec = sweep(Family::Werner, "p");
        let res =
            find_threshold(&spec, Detector::Thm1, DEFAULT_MU, 0.0, 1.0, 1e-6).unwrap();
        assert!((res.boundary - 1.0 / 3.0f64.sqrt()).abs() < 1e-5, "{res:?}");
        assert_eq!(res.direction_of_detection, DetectSide::Above);
        assert!(res.bracket[1] - res.bracket[0] <= 2e-6);
        assert!(res.iterations > 0 && res.iterations < MAX_ITERATIONS);
    }

    #[test]
    fn nmems_detects_below_its_boundary() {
        let spec = sweep(Family::Nmems, "p");
        let res =
            find_threshold(&spec, Detector::Thm1, DEFAULT_MU, 0.0, 1.0, 1e-6).unwrap();
        assert!((res.boundary - 0.073).abs() < 1e-3, "{res:?}");
        assert_eq!(res.direction_of_detection, DetectSide::Below);
    }

    #[test]
    fn flat_verdict_is_rejected() {
        let spec = sweep(Family::Werner, "p");
        let err = find_threshold(&spec, Detector::Ls2, DEFAULT_MU, 0.8, 0.95, 1e-6).unwrap_err();
        assert!(matches!(err, SweepError::NoSignChange { .. }), "{err}");
    }

    #[test]
    fn non_monotone_predicate_is_rejected() {
        // sin(3x) > 0 flips three times on [0, 3].
        let err = find_boundary(|x| Ok((3.0 * x).sin() > 0.0), "synthetic", 0.0, 3.0, 1e-6)
            .unwrap_err();
        assert!(matches!(err, SweepError::NonMonotone { transitions: 3 }), "{err}");
    }

    #[test]
    fn boundary_stable_under_tol_refinement() {
        let spec = sweep(Family::Munro, "c");
        let coarse =
            find_threshold(&spec, Detector::Thm1, DEFAULT_MU, 0.0, 1.0, 1e-4).unwrap();
        let fine =
            find_threshold(&spec, Detector::Thm1, DEFAULT_MU, 0.0, 1.0, 5e-5).unwrap();
        assert!((coarse.boundary - fine.boundary).abs() <= 1e-4);
    }

    #[test]
    fn bad_brackets_are_rejected() {
        let spec = sweep(Family::Werner, "p");
        assert!(matches!(
            find_threshold(&spec, Detector::Thm1, DEFAULT_MU, 0.9, 0.1, 1e-6),
            Err(SweepError::EmptyBracket { .. })
        ));
        assert!(matches!(
            find_threshold(&spec, Detector::Thm1, DEFAULT_MU, 0.0, f64::NAN, 1e-6),
            Err(SweepError::NonFiniteBound)
        ));
    }

    #[test]
    fn prescan_table_shape_and_monotone_content() {
        let spec = sweep(Family::Werner, "p");
        let rows = prescan_table(&spec, DEFAULT_MU, 0.0, 1.0).unwrap();
        assert_eq!(rows.len(), PRESCAN_POINTS);
        assert_eq!(rows[0].param, 0.0);
        assert_eq!(rows[100].param, 1.0);
        // thm1_ba column flips exactly once for the Werner family.
        let flips = (0..100)
            .filter(|&i| rows[i].verdicts[0] != rows[i + 1].verdicts[0])
            .count();
        assert_eq!(flips, 1);
    }

    #[test]
    fn region_scan_nesting_and_known_points() {
        let grid = region_scan(
            AxisSpec {
                min: 0.0,
                max: 1.0,
                steps: 21,
            },
            AxisSpec {
                min: 0.0,
                max: FRAC_PI_4,
                steps: 21,
            },
            DEFAULT_MU,
        )
        .unwrap();
        assert_eq!(grid.cells.len(), 21 * 21);

        // Pure Bell-state corner: every detector fires.
        let corner = grid.cell(20, 20);
        assert!(corner.thm1_ba && corner.thm1_ab && corner.ls2 && corner.ls3);

        // ls2 ⊆ ls3 ⊆ thm1 pointwise on this family.
        for cell in &grid.cells {
            let thm1 = cell.thm1_ba && cell.thm1_ab;
            assert!(!cell.ls2 || cell.ls3);
            assert!(!cell.ls3 || thm1);
        }

        // α = 0.55 row (index 11) never triggers the steering-map detector.
        for it in 0..21 {
            let cell = grid.cell(11, it);
            assert!(!cell.thm1_ba && !cell.thm1_ab, "theta index {it}");
        }
    }

    #[test]
    fn region_scan_rejects_bad_axes() {
        let theta = AxisSpec {
            min: 0.0,
            max: FRAC_PI_4,
            steps: 5,
        };
        assert!(matches!(
            region_scan(
                AxisSpec {
                    min: 0.0,
                    max: 1.2,
                    steps: 5
                },
                theta,
                DEFAULT_MU
            ),
            Err(SweepError::BadAxis { name: "alpha", .. })
        ));
        assert!(matches!(
            region_scan(
                AxisSpec {
                    min: 0.0,
                    max: 1.0,
                    steps: 1
                },
                theta,
                DEFAULT_MU
            ),
            Err(SweepError::BadAxis { name: "alpha", .. })
        ));
    }
}
