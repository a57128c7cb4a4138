//! Per-period reduced forms, first stages and switching probabilities.
//!
//! The same record is produced by the population oracle in [`crate::dgp`]
//! and by the sample estimator in [`crate::estimators`]. Vectors are stored
//! 0-based; accessors take 1-based periods.

use serde::{Deserialize, Serialize};

/// Arm sizes of the sample an [`EstimandSet`] was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSize {
    pub n: usize,
    pub n_z1: usize,
    pub n_z0: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimandSet {
    pub horizon: usize,
    /// `RF_t`, t = 1..T.
    pub rf: Vec<f64>,
    /// `FS_t`, t = 1..T.
    pub fs: Vec<f64>,
    /// `RF_t / FS_t`, `None` where `FS_t = 0`.
    pub iv: Vec<Option<f64>>,
    /// `rho_t = FS_{t-1} - FS_t`, t = 2..T.
    pub rho: Vec<f64>,
    /// `P(D_t > D_1 | Z = 0)`, t = 2..T.
    pub switch_z0: Vec<f64>,
    /// `P(D_t > D_1 | Z = 1)`, t = 2..T.
    pub switch_z1: Vec<f64>,
    /// `None` for population values.
    pub sample: Option<SampleSize>,
}

impl EstimandSet {
    /// Assembles the record from arm means, indexed `[z = 0, z = 1]`. `rho`
    /// and `iv` are derived here so every producer shares the same
    /// arithmetic; `iv_t` is undefined when `|FS_t| <= zero_tol`.
    pub fn from_arm_means(
        mean_y: [&[f64]; 2],
        mean_d: [&[f64]; 2],
        switch: [&[f64]; 2],
        sample: Option<SampleSize>,
        zero_tol: f64,
    ) -> Self {
        let [y0, y1] = mean_y;
        let [d0, d1] = mean_d;
        let horizon = y0.len();
        let rf: Vec<f64> = y1.iter().zip(y0).map(|(a, b)| a - b).collect();
        let fs: Vec<f64> = d1.iter().zip(d0).map(|(a, b)| a - b).collect();
        let iv = rf
            .iter()
            .zip(&fs)
            .map(|(&r, &f)| if f.abs() > zero_tol { Some(r / f) } else { None })
            .collect();
        let rho = fs.windows(2).map(|w| w[0] - w[1]).collect();
        Self {
            horizon,
            rf,
            fs,
            iv,
            rho,
            switch_z0: switch[0][1..].to_vec(),
            switch_z1: switch[1][1..].to_vec(),
            sample,
        }
    }

    pub fn rf(&self, t: usize) -> f64 {
        self.rf[t - 1]
    }

    pub fn fs(&self, t: usize) -> f64 {
        self.fs[t - 1]
    }

    pub fn iv(&self, t: usize) -> Option<f64> {
        self.iv[t - 1]
    }

    /// Defined for `t >= 2`.
    pub fn rho(&self, t: usize) -> f64 {
        self.rho[t - 2]
    }

    pub fn switch_z0(&self, t: usize) -> f64 {
        self.switch_z0[t - 2]
    }

    pub fn switch_z1(&self, t: usize) -> f64 {
        self.switch_z1[t - 2]
    }
}
