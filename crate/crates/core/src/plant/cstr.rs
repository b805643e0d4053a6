//! Exothermic CSTR benchmark: first-order reaction A -> B with Arrhenius
//! kinetics, manipulated dilution rate and coolant temperature.
//!
//! States:  [concentration of A (mol/L), reactor temperature (K)]
//! Inputs:  [dilution rate (1/s), coolant temperature (K)]
//! Outputs: [concentration, temperature]

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{Plant, PlantDims};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CstrConfig {
    pub k0: f64,
    /// Activation energy over gas constant [K].
    pub e_over_r: f64,
    pub feed_concentration: f64,
    pub feed_temperature: f64,
    /// Adiabatic temperature rise coefficient [K L / mol].
    pub heat_rise: f64,
    /// Coolant heat transfer coefficient [1/s].
    pub cooling_rate: f64,
    pub input_bounds: [[f64; 2]; 2],
}

impl Default for CstrConfig {
    fn default() -> Self {
        CstrConfig {
            k0: 300.0,
            e_over_r: 5000.0,
            feed_concentration: 1.0,
            feed_temperature: 350.0,
            heat_rise: 150.0,
            cooling_rate: 0.02,
            input_bounds: [[0.5e-3, 20.0e-3], [280.0, 370.0]],
        }
    }
}

pub struct CstrPlant {
    cfg: CstrConfig,
    bounds: Vec<[f64; 2]>,
}

impl CstrPlant {
    pub fn new(cfg: CstrConfig) -> Self {
        let bounds = cfg.input_bounds.to_vec();
        CstrPlant { cfg, bounds }
    }

    fn rate_constant(&self, temp: f64) -> f64 {
        self.cfg.k0 * (-self.cfg.e_over_r / temp).exp()
    }

    pub fn nominal_inputs(&self) -> DVector<f64> {
        DVector::from_vec(vec![5.0e-3, 330.0])
    }

    pub fn initial_state(&self) -> DVector<f64> {
        DVector::from_vec(vec![0.5, 340.0])
    }
}

impl Plant for CstrPlant {
    fn name(&self) -> &str {
        "cstr"
    }

    fn dims(&self) -> PlantDims {
        PlantDims {
            n_x: 2,
            n_u: 2,
            n_y: 2,
        }
    }

    fn drift(&self, x: &DVector<f64>) -> DVector<f64> {
        let (c, t) = (x[0], x[1]);
        let r = self.rate_constant(t) * c;
        DVector::from_vec(vec![-r, self.cfg.heat_rise * r - self.cfg.cooling_rate * t])
    }

    fn input_map(&self, i: usize, x: &DVector<f64>) -> DVector<f64> {
        let (c, t) = (x[0], x[1]);
        match i {
            0 => DVector::from_vec(vec![
                self.cfg.feed_concentration - c,
                self.cfg.feed_temperature - t,
            ]),
            1 => DVector::from_vec(vec![0.0, self.cfg.cooling_rate]),
            _ => panic!("cstr has 2 inputs, asked for {i}"),
        }
    }

    fn output(&self, x: &DVector<f64>) -> DVector<f64> {
        x.clone()
    }

    fn input_bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }
}
