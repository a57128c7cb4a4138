//! Sample analogues of the per-period estimands, recursive point
//! identification of the dynamic LATE profile, partial-identification
//! bounds, and data-only negative-weight diagnostics.
//!
//! Every function here works on an [`EstimandSet`], so the same code runs on
//! sample estimates and on exact population values from [`crate::dgp`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assumptions::Assumption;
use crate::dgp::POPULATION_ZERO;
use crate::estimands::{EstimandSet, SampleSize};
use crate::panel::{Panel, PanelError, UnitRecord, WEAK_FIRST_STAGE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimationError {
    #[error(transparent)]
    Panel(#[from] PanelError),
    #[error("relevance at t=1 fails (FS_1 = {fs1})")]
    RelevanceFailure { fs1: f64 },
    #[error("bounds [{lo}, {hi}] do not straddle zero; use the unrestricted method")]
    SignedBoundViolation { lo: f64, hi: f64 },
    #[error("effect bounds [{lo}, {hi}] are empty")]
    EmptyBounds { lo: f64, hi: f64 },
    #[error("bounds are defined for periods 2..={horizon}, got {t}")]
    PeriodOutOfRange { t: usize, horizon: usize },
}

/// Running per-arm sums over units. Shared by [`estimate`] and the
/// bootstrap so both use identical arithmetic.
#[derive(Debug, Clone)]
pub struct ArmSums {
    horizon: usize,
    n: [usize; 2],
    treated: [Vec<u64>; 2],
    switched: [Vec<u64>; 2],
    y: [Vec<f64>; 2],
}

impl ArmSums {
    pub fn new(horizon: usize) -> Self {
        Self {
            horizon,
            n: [0; 2],
            treated: [vec![0; horizon], vec![0; horizon]],
            switched: [vec![0; horizon], vec![0; horizon]],
            y: [vec![0.0; horizon], vec![0.0; horizon]],
        }
    }

    pub fn add(&mut self, unit: &UnitRecord) {
        let arm = usize::from(unit.z);
        self.n[arm] += 1;
        let start = unit.first_treated.period().unwrap_or(self.horizon + 1);
        for t in start..=self.horizon {
            self.treated[arm][t - 1] += 1;
            if start > 1 {
                self.switched[arm][t - 1] += 1;
            }
        }
        for (acc, y) in self.y[arm].iter_mut().zip(&unit.y) {
            *acc += y;
        }
    }

    pub fn finish(&self) -> Result<EstimandSet, EstimationError> {
        match self.n {
            [0, _] => return Err(PanelError::DegenerateInstrument { arm: 1 }.into()),
            [_, 0] => return Err(PanelError::DegenerateInstrument { arm: 0 }.into()),
            _ => {}
        }
        let mean = |arm: usize, v: &[f64]| -> Vec<f64> { v.iter().map(|s| s / self.n[arm] as f64).collect() };
        let share = |arm: usize, v: &[u64]| -> Vec<f64> {
            v.iter().map(|&c| c as f64 / self.n[arm] as f64).collect()
        };
        let y = [mean(0, &self.y[0]), mean(1, &self.y[1])];
        let d = [share(0, &self.treated[0]), share(1, &self.treated[1])];
        let sw = [share(0, &self.switched[0]), share(1, &self.switched[1])];
        Ok(EstimandSet::from_arm_means(
            [&y[0], &y[1]],
            [&d[0], &d[1]],
            [&sw[0], &sw[1]],
            Some(SampleSize { n: self.n[0] + self.n[1], n_z1: self.n[1], n_z0: self.n[0] }),
            0.0,
        ))
    }
}

/// Per-period `RF_t`, `FS_t`, `IV_t`, `rho_t` and switching shares.
pub fn estimate(panel: &Panel) -> Result<EstimandSet, EstimationError> {
    let mut sums = ArmSums::new(panel.horizon());
    for unit in panel.units() {
        sums.add(unit);
    }
    sums.finish()
}

/// Sample `FS_1` is a difference of count ratios and is tested for exact
/// zero; population values use [`POPULATION_ZERO`].
fn first_stage_is_zero(est: &EstimandSet) -> bool {
    let tol = if est.sample.is_some() { 0.0 } else { POPULATION_ZERO };
    est.fs(1).abs() <= tol
}

/// `|FS_1|` below [`WEAK_FIRST_STAGE`]; estimates are still reported.
pub fn weak_first_stage(est: &EstimandSet) -> bool {
    est.fs(1).abs() < WEAK_FIRST_STAGE
}

/// Dynamic LATE profile `Delta^tau(C_1)`, tau = 0..T-1, solving the
/// lower-triangular system with diagonal `FS_1` and subdiagonals `-rho_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentifiedProfile {
    pub deltas: Vec<f64>,
    pub fs1: f64,
    /// `rho_t`, t = 2..T.
    pub rho: Vec<f64>,
    pub rf: Vec<f64>,
    /// Valid as dynamic LATEs only under these.
    pub requires: Vec<Assumption>,
}

impl IdentifiedProfile {
    /// Largest `|(P * deltas - RF)_t|`.
    pub fn residual(&self) -> f64 {
        (1..=self.deltas.len())
            .map(|t| {
                let mut lhs = self.fs1 * self.deltas[t - 1];
                for k in 2..=t {
                    lhs -= self.rho[k - 2] * self.deltas[t - k];
                }
                (lhs - self.rf[t - 1]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Forward substitution: `Delta^0 = RF_1 / FS_1` and
/// `Delta^{t-1} = (RF_t + sum_{k=2..t} rho_k Delta^{t-k}) / FS_1`.
pub fn identify(est: &EstimandSet) -> Result<IdentifiedProfile, EstimationError> {
    if first_stage_is_zero(est) {
        return Err(EstimationError::RelevanceFailure { fs1: est.fs(1) });
    }
    let fs1 = est.fs(1);
    let mut deltas: Vec<f64> = Vec::with_capacity(est.horizon);
    for t in 1..=est.horizon {
        let correction: f64 = (2..=t).map(|k| est.rho(k) * deltas[t - k]).sum();
        deltas.push((est.rf(t) + correction) / fs1);
    }
    Ok(IdentifiedProfile {
        deltas,
        fs1,
        rho: est.rho.clone(),
        rf: est.rf.clone(),
        requires: vec![Assumption::CalendarHomogeneity],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsMethod {
    General,
    GeneralUnrestricted,
    Tight,
}

impl BoundsMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundsMethod::General => "general",
            BoundsMethod::GeneralUnrestricted => "general_unrestricted",
            BoundsMethod::Tight => "tight",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsInputs {
    /// Lower bound on contaminating effects.
    pub lo: f64,
    /// Upper bound on contaminating effects.
    pub hi: f64,
    pub rf_t: f64,
    pub fs_1: f64,
    pub fs_t: f64,
    pub switch_z0: f64,
    pub switch_z1: f64,
    /// `FS_1..FS_t`.
    pub fs_path: Vec<f64>,
}

/// Interval for `Delta_t^{t-1}(C_1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub t: usize,
    pub method: BoundsMethod,
    pub lower: f64,
    pub upper: f64,
    pub inputs: BoundsInputs,
    pub requires: Vec<Assumption>,
}

impl BoundsReport {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

fn bounds_inputs(
    est: &EstimandSet,
    t: usize,
    lo: f64,
    hi: f64,
    require_signed: bool,
) -> Result<BoundsInputs, EstimationError> {
    if t < 2 || t > est.horizon {
        return Err(EstimationError::PeriodOutOfRange { t, horizon: est.horizon });
    }
    if !(lo <= hi) {
        return Err(EstimationError::EmptyBounds { lo, hi });
    }
    if require_signed && !(lo <= 0.0 && hi >= 0.0) {
        return Err(EstimationError::SignedBoundViolation { lo, hi });
    }
    if first_stage_is_zero(est) || est.fs(1) < 0.0 {
        return Err(EstimationError::RelevanceFailure { fs1: est.fs(1) });
    }
    Ok(BoundsInputs {
        lo,
        hi,
        rf_t: est.rf(t),
        fs_1: est.fs(1),
        fs_t: est.fs(t),
        switch_z0: est.switch_z0(t),
        switch_z1: est.switch_z1(t),
        fs_path: est.fs[..t].to_vec(),
    })
}

/// Bounds valid under the basic IV conditions alone, for effect bounds with
/// `lo <= 0 <= hi`. Width shrinks with the probability of switching in after
/// the first period.
pub fn bounds_general(est: &EstimandSet, t: usize, lo: f64, hi: f64) -> Result<BoundsReport, EstimationError> {
    let inp = bounds_inputs(est, t, lo, hi, true)?;
    let base = inp.rf_t / inp.fs_1;
    let lower = base + inp.switch_z0 * lo / inp.fs_1 - inp.switch_z1 * hi / inp.fs_1;
    let upper = base + inp.switch_z0 * hi / inp.fs_1 - inp.switch_z1 * lo / inp.fs_1;
    Ok(BoundsReport { t, method: BoundsMethod::General, lower, upper, inputs: inp, requires: vec![] })
}

/// General bounds for arbitrary `lo <= hi`. When a bound does not have the
/// usual sign, the switching probability it multiplies is replaced by the
/// net first-stage change it must at least cover.
pub fn bounds_general_unrestricted(
    est: &EstimandSet,
    t: usize,
    lo: f64,
    hi: f64,
) -> Result<BoundsReport, EstimationError> {
    let inp = bounds_inputs(est, t, lo, hi, false)?;
    let fs1 = inp.fs_1;
    let decline = (inp.fs_1 - inp.fs_t).max(0.0);
    let rise = (inp.fs_t - inp.fs_1).max(0.0);
    let base = inp.rf_t / fs1;

    let minus_mass = |bound: f64| if bound < 0.0 { inp.switch_z0 } else { decline };
    let plus_mass = |bound: f64| if bound >= 0.0 { inp.switch_z1 } else { rise };

    let lower = base + minus_mass(lo) * lo / fs1 - plus_mass(hi) * hi / fs1;
    // Upper bound: the indicator on `hi` selects the arm-0 switching mass
    // when hi >= 0, the first-stage decline otherwise; symmetrically for lo.
    let upper_minus = if hi >= 0.0 { inp.switch_z0 } else { decline };
    let upper_plus = if lo < 0.0 { inp.switch_z1 } else { rise };
    let upper = base + upper_minus * hi / fs1 - upper_plus * lo / fs1;

    Ok(BoundsReport {
        t,
        method: BoundsMethod::GeneralUnrestricted,
        lower,
        upper,
        inputs: inp,
        requires: vec![],
    })
}

/// Tighter bounds when contaminating groups switching in at the same period
/// share a common effect. Only the first-stage path enters.
pub fn bounds_tight(est: &EstimandSet, t: usize, lo: f64, hi: f64) -> Result<BoundsReport, EstimationError> {
    let inp = bounds_inputs(est, t, lo, hi, true)?;
    let fs1 = inp.fs_1;
    let base = inp.rf_t / fs1;
    let rising: f64 = (2..=t)
        .filter(|&k| est.fs(k - 1) < est.fs(k))
        .map(|k| (est.fs(k - 1) - est.fs(k)) / fs1)
        .sum();
    let net = (inp.fs_1 - inp.fs_t) / fs1;
    let lower = base + lo * net + (hi - lo) * rising;
    let upper = base + hi * net + (lo - hi) * rising;
    Ok(BoundsReport {
        t,
        method: BoundsMethod::Tight,
        lower,
        upper,
        inputs: inp,
        requires: vec![Assumption::CrossGroupHomogeneity],
    })
}

/// Default effect bounds `±(max y - min y)`.
pub fn default_effect_bounds(panel: &Panel) -> (f64, f64) {
    let (lo, hi) = panel.outcome_range();
    let span = hi - lo;
    (-span, span)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFlag {
    /// Some first stage strictly decreased by this period, so the IV
    /// estimand must put a negative weight on some effect.
    Guaranteed,
    /// No strict decrease; negative weights are not ruled out.
    Possible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodWeightFlag {
    pub t: usize,
    pub flag: WeightFlag,
    /// Earliest `k <= t` with `FS_k < FS_{k-1}`.
    pub witness: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeWeightDiagnostic {
    pub periods: Vec<PeriodWeightFlag>,
    /// `FS_2 < FS_1`; `None` for single-period data.
    pub two_period_guaranteed: Option<bool>,
}

pub fn negative_weight_diagnostic(est: &EstimandSet) -> NegativeWeightDiagnostic {
    let mut witness = None;
    let periods = (2..=est.horizon)
        .map(|t| {
            if witness.is_none() && est.fs(t) < est.fs(t - 1) {
                witness = Some(t);
            }
            PeriodWeightFlag {
                t,
                flag: if witness.is_some() { WeightFlag::Guaranteed } else { WeightFlag::Possible },
                witness,
            }
        })
        .collect();
    NegativeWeightDiagnostic {
        periods,
        two_period_guaranteed: (est.horizon >= 2).then(|| est.fs(2) < est.fs(1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::ingest;
    use approx::assert_abs_diff_eq;

    /// Population-style estimands from an FS path, RF path and switching
    /// shares.
    fn est(rf: &[f64], fs: &[f64], sz0: &[f64], sz1: &[f64]) -> EstimandSet {
        let horizon = rf.len();
        let zeros = vec![0.0; horizon];
        let pad = |v: &[f64]| std::iter::once(0.0).chain(v.iter().copied()).collect::<Vec<_>>();
        EstimandSet::from_arm_means([&zeros, rf], [&zeros, fs], [&pad(sz0), &pad(sz1)], None, POPULATION_ZERO)
    }

    #[test]
    fn two_unit_panel() {
        let panel = ingest("unit_id,period,z,d,y\nA,1,1,1,2.0\nB,1,0,0,0.0\n".as_bytes()).unwrap();
        let e = estimate(&panel).unwrap();
        assert_eq!((e.rf.clone(), e.fs.clone(), e.iv.clone()), (vec![2.0], vec![1.0], vec![Some(2.0)]));
        assert_eq!(e.sample, Some(SampleSize { n: 2, n_z1: 1, n_z0: 1 }));
    }

    #[test]
    fn identical_outcomes_give_zero_reduced_form() {
        let panel = ingest(
            "unit_id,period,z,d,y\nA,1,1,1,5\nA,2,1,1,6\nB,1,0,0,5\nB,2,0,1,6\nC,1,0,0,5\nC,2,0,0,6\n".as_bytes(),
        )
        .unwrap();
        let e = estimate(&panel).unwrap();
        assert_eq!(e.rf, vec![0.0, 0.0]);
        assert_eq!(e.switch_z0, vec![0.5]);
        assert_eq!(e.switch_z1, vec![0.0]);
    }

    #[test]
    fn identify_two_period_example() {
        let e = est(&[0.2, 0.1], &[0.5, 0.3], &[0.2], &[0.0]);
        let p = identify(&e).unwrap();
        assert_abs_diff_eq!(p.deltas[0], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(p.deltas[1], 0.36, epsilon = 1e-15);
        assert!(p.residual() < 1e-15);
        assert_eq!(p.requires, vec![Assumption::CalendarHomogeneity]);
    }

    #[test]
    fn identify_diagonal_system() {
        let c = 1.7;
        let e = est(&[c * 0.4; 3], &[0.4; 3], &[0.0; 2], &[0.0; 2]);
        for d in identify(&e).unwrap().deltas {
            assert_abs_diff_eq!(d, c, epsilon = 1e-15);
        }
    }

    #[test]
    fn identify_requires_relevance() {
        let e = est(&[0.2, 0.1], &[0.0, 0.3], &[0.2], &[0.0]);
        assert!(matches!(identify(&e), Err(EstimationError::RelevanceFailure { .. })));
    }

    #[test]
    fn general_bounds_example() {
        let e = est(&[0.0, 0.1], &[0.5, 0.3], &[0.25], &[0.05]);
        let b = bounds_general(&e, 2, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(b.lower, -0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(b.upper, 0.8, epsilon = 1e-15);
        assert!(b.requires.is_empty());

        let point = bounds_general(&e, 2, 0.0, 0.0).unwrap();
        assert_eq!(point.lower, 0.1 / 0.5);
        assert_eq!(point.upper, 0.1 / 0.5);

        let static_est = est(&[0.0, 0.1], &[0.5, 0.5], &[0.0], &[0.0]);
        let collapsed = bounds_general(&static_est, 2, -3.0, 2.0).unwrap();
        assert_eq!((collapsed.lower, collapsed.upper), (0.2, 0.2));
    }

    #[test]
    fn general_bounds_errors() {
        let e = est(&[0.0, 0.1], &[0.5, 0.3], &[0.25], &[0.05]);
        assert!(matches!(bounds_general(&e, 2, 0.1, 1.0), Err(EstimationError::SignedBoundViolation { .. })));
        assert!(matches!(bounds_general(&e, 2, -1.0, -0.1), Err(EstimationError::SignedBoundViolation { .. })));
        assert!(matches!(bounds_general(&e, 1, -1.0, 1.0), Err(EstimationError::PeriodOutOfRange { .. })));
        assert!(matches!(
            bounds_general_unrestricted(&e, 2, 1.0, -1.0),
            Err(EstimationError::EmptyBounds { .. })
        ));
        let negative_fs1 = est(&[0.0, 0.1], &[-0.5, 0.3], &[0.25], &[0.05]);
        assert!(matches!(
            bounds_general(&negative_fs1, 2, -1.0, 1.0),
            Err(EstimationError::RelevanceFailure { .. })
        ));
    }

    #[test]
    fn unrestricted_bounds_example() {
        let e = est(&[0.0, 0.1], &[0.5, 0.3], &[0.25], &[0.05]);
        let b = bounds_general_unrestricted(&e, 2, 0.1, 1.0).unwrap();
        assert_abs_diff_eq!(b.lower, 0.2 + 0.2 * 0.1 / 0.5 - 0.05 * 1.0 / 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.lower, 0.14, epsilon = 1e-15);
        // hi >= 0 with lo >= 0: upper = base + sz0 * hi / fs1 - max(fs_t - fs_1, 0) * lo / fs1
        assert_abs_diff_eq!(b.upper, 0.2 + 0.25 * 1.0 / 0.5, epsilon = 1e-15);

        let straddle = bounds_general_unrestricted(&e, 2, -1.0, 1.0).unwrap();
        let general = bounds_general(&e, 2, -1.0, 1.0).unwrap();
        assert_eq!((straddle.lower, straddle.upper), (general.lower, general.upper));

        // Both bounds negative: hi < 0 uses the first-stage rise on the
        // lower bound and the decline on the upper bound.
        let neg = bounds_general_unrestricted(&e, 2, -1.0, -0.5).unwrap();
        assert_abs_diff_eq!(neg.lower, 0.2 + 0.25 * -1.0 / 0.5 - 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(neg.upper, 0.2 + 0.2 * -0.5 / 0.5 - 0.05 * -1.0 / 0.5, epsilon = 1e-15);
    }

    #[test]
    fn tight_bounds_examples() {
        let e = est(&[0.0, 0.1], &[0.5, 0.3], &[0.25], &[0.05]);
        let b = bounds_tight(&e, 2, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(b.lower, -0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.upper, 0.6, epsilon = 1e-15);
        assert_eq!(b.requires, vec![Assumption::CrossGroupHomogeneity]);

        // sign restriction with a nonincreasing first stage
        let e3 = est(&[0.0, 0.1, 0.3], &[0.5, 0.4, 0.4], &[0.1, 0.1], &[0.0, 0.0]);
        let b = bounds_tight(&e3, 3, 0.0, 2.0).unwrap();
        assert_eq!(b.lower, 0.3 / 0.5);

        // increasing segment contributes through the indicator
        let up = est(&[0.0, 0.1, 0.2], &[0.5, 0.6, 0.4], &[0.0, 0.2], &[0.1, 0.1]);
        let b = bounds_tight(&up, 3, -1.0, 1.0).unwrap();
        let base = 0.2 / 0.5;
        let net = (0.5 - 0.4) / 0.5;
        let rising = (0.5 - 0.6) / 0.5;
        assert_abs_diff_eq!(b.lower, base - net + 2.0 * rising, epsilon = 1e-14);
        assert_abs_diff_eq!(b.upper, base + net - 2.0 * rising, epsilon = 1e-14);
    }

    #[test]
    fn negative_weight_flags() {
        let d = negative_weight_diagnostic(&est(&[0.0, 0.0], &[0.5, 0.3], &[0.2], &[0.0]));
        assert_eq!(d.periods[0].flag, WeightFlag::Guaranteed);
        assert_eq!(d.two_period_guaranteed, Some(true));

        let d = negative_weight_diagnostic(&est(&[0.0; 3], &[0.5; 3], &[0.0; 2], &[0.0; 2]));
        assert!(d.periods.iter().all(|p| p.flag == WeightFlag::Possible));
        assert_eq!(d.two_period_guaranteed, Some(false));

        let d = negative_weight_diagnostic(&est(&[0.0; 3], &[0.5, 0.6, 0.4], &[0.0, 0.2], &[0.1, 0.1]));
        assert_eq!(d.periods[0].flag, WeightFlag::Possible);
        assert_eq!(d.periods[1].flag, WeightFlag::Guaranteed);
        assert_eq!(d.periods[1].witness, Some(3));

        let d = negative_weight_diagnostic(&est(&[0.0], &[0.5], &[], &[]));
        assert!(d.periods.is_empty());
        assert_eq!(d.two_period_guaranteed, None);
    }

    #[test]
    fn default_bounds_from_outcome_range() {
        let panel = ingest("unit_id,period,z,d,y\nA,1,1,1,2.0\nB,1,0,0,-0.5\n".as_bytes()).unwrap();
        assert_eq!(default_effect_bounds(&panel), (-2.5, 2.5));
    }
}
