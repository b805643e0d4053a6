//! Tray-by-tray binary distillation column with constant molar overflow and
//! constant relative volatility.
//!
//! Stage 0 is the top tray, stage `n_trays - 1` is the reboiler acting as an
//! equilibrium stage. The overhead vapor is totally condensed into a reflux
//! drum whose inventory drives the product draw, so the production rate is a
//! function of state. The reboiler inventory integrates and is stabilized by
//! a base-layer P-controller on the drain during open-loop sampling.
//!
//! States:  [x_1 .. x_N (stage light mole fractions), M_r (kmol), M_c (kmol)]
//! Inputs:  [feed (mol/s), reflux (mol/s), boilup (mol/s), drain (mol/s)]
//! Outputs: [distillate impurity (mole fraction), production rate (mol/s),
//!           reboiler inventory (kmol)]

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{Plant, PlantDims};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ColumnConfig {
    /// Number of equilibrium stages including the reboiler.
    pub n_trays: usize,
    /// Feed stage, 0-indexed from the top.
    pub feed_tray: usize,
    /// Relative volatility, > 1.
    pub relative_volatility: f64,
    /// Light-component feed mole fraction.
    pub feed_composition: f64,
    /// Molar holdup per tray [kmol].
    pub tray_holdup: f64,
    /// Initial reboiler inventory [kmol].
    pub reboiler_holdup: f64,
    /// Condenser drum discharge coefficient [(mol/s)/kmol]: product draw is
    /// `drum_discharge * M_c`.
    pub drum_discharge: f64,
    /// Initial condenser drum inventory [kmol].
    pub condenser_holdup: f64,
    /// Hard bounds per input [feed, reflux, boilup, drain] in mol/s.
    pub input_bounds: [[f64; 2]; 4],
}

impl Default for ColumnConfig {
    fn default() -> Self {
        ColumnConfig {
            n_trays: 20,
            feed_tray: 10,
            relative_volatility: 2.5,
            feed_composition: 0.79,
            tray_holdup: 10.0,
            reboiler_holdup: 30.0,
            drum_discharge: 5.0,
            condenser_holdup: 5.6,
            input_bounds: [[20.0, 60.0], [30.0, 90.0], [40.0, 130.0], [0.0, 40.0]],
        }
    }
}

pub struct ColumnPlant {
    cfg: ColumnConfig,
    bounds: Vec<[f64; 2]>,
}

pub const COL_FEED: usize = 0;
pub const COL_REFLUX: usize = 1;
pub const COL_BOILUP: usize = 2;
pub const COL_DRAIN: usize = 3;

impl ColumnPlant {
    pub fn new(cfg: ColumnConfig) -> Self {
        assert!(cfg.n_trays >= 3, "need at least 3 stages");
        assert!(cfg.feed_tray > 0 && cfg.feed_tray < cfg.n_trays - 1);
        assert!(cfg.relative_volatility > 1.0);
        assert!(cfg.feed_composition > 0.0 && cfg.feed_composition < 1.0);
        let bounds = cfg.input_bounds.to_vec();
        ColumnPlant { cfg, bounds }
    }

    pub fn config(&self) -> &ColumnConfig {
        &self.cfg
    }

    fn n_stages(&self) -> usize {
        self.cfg.n_trays
    }

    fn idx_mr(&self) -> usize {
        self.cfg.n_trays
    }

    fn idx_mc(&self) -> usize {
        self.cfg.n_trays + 1
    }

    /// Vapor-liquid equilibrium: y = a x / (1 + (a - 1) x).
    fn vle(&self, x: f64) -> f64 {
        let a = self.cfg.relative_volatility;
        a * x / (1.0 + (a - 1.0) * x)
    }

    /// Nominal balanced inputs [feed, reflux, boilup, drain].
    ///
    /// The drain closes the overall balance: drain = reflux + feed - boilup,
    /// which makes the integrating inventory stationary.
    pub fn nominal_inputs(&self) -> DVector<f64> {
        let feed = 40.0;
        let reflux = 56.0;
        let boilup = 84.0;
        let drain = reflux + feed - boilup;
        DVector::from_vec(vec![feed, reflux, boilup, drain])
    }

    /// A coarse initial state for the steady-state search.
    pub fn initial_state(&self) -> DVector<f64> {
        let n = self.n_stages();
        let mut x = DVector::zeros(n + 2);
        for i in 0..n {
            // Linear composition profile from nearly pure light at the top
            // to the expected bottoms composition.
            let frac = i as f64 / (n - 1) as f64;
            x[i] = 0.999 * (1.0 - frac) + 0.30 * frac;
        }
        x[self.idx_mr()] = self.cfg.reboiler_holdup;
        x[self.idx_mc()] = self.cfg.condenser_holdup;
        x
    }

    /// Product draw [mol/s] at a given state.
    pub fn production_rate(&self, x: &DVector<f64>) -> f64 {
        self.cfg.drum_discharge * x[self.idx_mc()]
    }
}

impl Plant for ColumnPlant {
    fn name(&self) -> &str {
        "column"
    }

    fn dims(&self) -> PlantDims {
        PlantDims {
            n_x: self.cfg.n_trays + 2,
            n_u: 4,
            n_y: 3,
        }
    }

    fn drift(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut dx = DVector::zeros(self.dims().n_x);
        // Drum discharge is the only input-free term.
        dx[self.idx_mc()] = -self.cfg.drum_discharge * x[self.idx_mc()] / 1000.0;
        dx
    }

    fn input_map(&self, i: usize, x: &DVector<f64>) -> DVector<f64> {
        let n = self.n_stages();
        let reb = n - 1;
        let feed_tray = self.cfg.feed_tray;
        let m_tray = self.cfg.tray_holdup * 1000.0; // mol
        let m_reb = x[self.idx_mr()] * 1000.0; // mol
        let mut g = DVector::zeros(self.dims().n_x);
        match i {
            COL_FEED => {
                g[feed_tray] = (self.cfg.feed_composition - x[feed_tray]) / m_tray;
                for t in (feed_tray + 1)..reb {
                    g[t] = (x[t - 1] - x[t]) / m_tray;
                }
                g[reb] = (x[reb - 1] - x[reb]) / m_reb;
                g[self.idx_mr()] = 1.0 / 1000.0;
            }
            COL_REFLUX => {
                g[0] = (self.vle(x[0]) - x[0]) / m_tray;
                for t in 1..reb {
                    g[t] = (x[t - 1] - x[t]) / m_tray;
                }
                g[reb] = (x[reb - 1] - x[reb]) / m_reb;
                g[self.idx_mr()] = 1.0 / 1000.0;
                g[self.idx_mc()] = -1.0 / 1000.0;
            }
            COL_BOILUP => {
                for t in 0..reb {
                    g[t] = (self.vle(x[t + 1]) - self.vle(x[t])) / m_tray;
                }
                g[reb] = -(self.vle(x[reb]) - x[reb]) / m_reb;
                g[self.idx_mr()] = -1.0 / 1000.0;
                g[self.idx_mc()] = 1.0 / 1000.0;
            }
            COL_DRAIN => {
                g[self.idx_mr()] = -1.0 / 1000.0;
            }
            _ => panic!("column has 4 inputs, asked for {i}"),
        }
        g
    }

    fn output(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![
            1.0 - self.vle(x[0]),
            self.production_rate(x),
            x[self.idx_mr()],
        ])
    }

    fn input_bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }
}
