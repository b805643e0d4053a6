//! Base-layer proportional controller wrapper.
//!
//! The wrapped plant exposes the same number of inputs as the inner plant,
//! but the controlled channel carries a setpoint instead of the raw input.
//! The realized (biased) manipulation is substituted into the dynamics and
//! can be queried for snapshot recording.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{Plant, PlantDims};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PControllerConfig {
    /// Which inner input the controller manipulates.
    pub controlled_input: usize,
    /// Which state it measures.
    pub measured_state: usize,
    /// Proportional gain, input units per state unit. The sign encodes the
    /// control direction: u = gain * (setpoint - measurement).
    pub gain: f64,
    /// Which wrapped channel carries the setpoint (normally equals
    /// `controlled_input`).
    pub setpoint_input: usize,
    /// Admissible setpoint range exposed as the wrapped channel's bounds.
    pub setpoint_bounds: [f64; 2],
}

pub struct PControlledPlant {
    inner: Box<dyn Plant>,
    cfg: PControllerConfig,
    name: String,
    bounds: Vec<[f64; 2]>,
}

/// Wrap a plant with a stabilizing P-controller on one input channel.
pub fn wrap_p_controller(
    inner: Box<dyn Plant>,
    cfg: PControllerConfig,
) -> Result<PControlledPlant> {
    let dims = inner.dims();
    if cfg.controlled_input >= dims.n_u {
        return Err(Error::IndexOutOfRange {
            context: "p-controller controlled_input".into(),
            index: cfg.controlled_input,
            len: dims.n_u,
        });
    }
    if cfg.setpoint_input >= dims.n_u {
        return Err(Error::IndexOutOfRange {
            context: "p-controller setpoint_input".into(),
            index: cfg.setpoint_input,
            len: dims.n_u,
        });
    }
    if cfg.measured_state >= dims.n_x {
        return Err(Error::IndexOutOfRange {
            context: "p-controller measured_state".into(),
            index: cfg.measured_state,
            len: dims.n_x,
        });
    }
    if !cfg.gain.is_finite() {
        return Err(Error::InvalidArgument("p-controller gain must be finite".into()));
    }
    let mut bounds = inner.input_bounds().to_vec();
    bounds[cfg.setpoint_input] = cfg.setpoint_bounds;
    let name = format!("{}+p", inner.name());
    Ok(PControlledPlant {
        inner,
        cfg,
        name,
        bounds,
    })
}

impl PControlledPlant {
    pub fn inner(&self) -> &dyn Plant {
        self.inner.as_ref()
    }

    pub fn controller(&self) -> &PControllerConfig {
        &self.cfg
    }

    /// Realized value of the controlled input at state `x` under the wrapped
    /// input vector `u` (whose setpoint channel carries the setpoint).
    pub fn realized_controlled_input(&self, x: &DVector<f64>, u: &DVector<f64>) -> f64 {
        let setpoint = u[self.cfg.setpoint_input];
        let raw = self.cfg.gain * (setpoint - x[self.cfg.measured_state]);
        let [lo, hi] = self.inner.input_bounds()[self.cfg.controlled_input];
        raw.clamp(lo, hi)
    }

    /// Inner-plant input vector corresponding to a wrapped input vector.
    pub fn realize(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let mut inner_u = u.clone();
        inner_u[self.cfg.controlled_input] = self.realized_controlled_input(x, u);
        if self.cfg.setpoint_input != self.cfg.controlled_input {
            // The setpoint rode on a spare channel; restore its raw value.
            inner_u[self.cfg.setpoint_input] = u[self.cfg.setpoint_input];
        }
        inner_u
    }
}

impl Plant for PControlledPlant {
    fn name(&self) -> &str {
        &self.name
    }

    fn dims(&self) -> PlantDims {
        self.inner.dims()
    }

    fn drift(&self, x: &DVector<f64>) -> DVector<f64> {
        self.inner.drift(x)
    }

    /// Affine maps of the uncontrolled channels; the setpoint channel enters
    /// through the clamped P-law inside `rhs` and has no affine map.
    fn input_map(&self, i: usize, x: &DVector<f64>) -> DVector<f64> {
        if i == self.cfg.setpoint_input || i == self.cfg.controlled_input {
            DVector::zeros(self.inner.dims().n_x)
        } else {
            self.inner.input_map(i, x)
        }
    }

    fn output(&self, x: &DVector<f64>) -> DVector<f64> {
        self.inner.output(x)
    }

    fn input_bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }

    fn rhs(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let inner_u = self.realize(x, u);
        self.inner.rhs(x, &inner_u)
    }

    fn rhs_jacobian_u(&self, x: &DVector<f64>, u: &DVector<f64>) -> DMatrix<f64> {
        // Finite differences of the wrapped rhs; the clamp kink makes the
        // affine shortcut invalid here.
        let dims = self.dims();
        let mut jac = DMatrix::zeros(dims.n_x, dims.n_u);
        let mut up = u.clone();
        let mut um = u.clone();
        for j in 0..dims.n_u {
            let h = 1e-7 * (1.0 + u[j].abs());
            up[j] = u[j] + h;
            um[j] = u[j] - h;
            let fp = self.rhs(x, &up);
            let fm = self.rhs(x, &um);
            jac.set_column(j, &((fp - fm) / (2.0 * h)));
            up[j] = u[j];
            um[j] = u[j];
        }
        jac
    }
}
