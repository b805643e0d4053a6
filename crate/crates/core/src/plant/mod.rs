//! Input-affine continuous-time plants and the machinery to simulate them.
//!
//! A plant has the form
//!
//! ```text
//!   dx/dt = f(x) + sum_i g_i(x) * u_i,      y = h(x)
//! ```
//!
//! with smooth `f`, `g_i`, `h`. Plants are the data generators for model
//! reduction and the ground truth in closed-loop runs.

mod column;
mod cstr;
mod integrate;
mod linear;
mod pcontrol;
mod registry;
mod steady;

pub use column::{ColumnConfig, ColumnPlant};
pub use cstr::{CstrConfig, CstrPlant};
pub use integrate::{integrate_step, simulate_profile, InputProfile, InputStep, Trajectory};
pub use linear::{CustomPlant, LinearPlant};
pub use pcontrol::{wrap_p_controller, PControlledPlant, PControllerConfig};
pub use registry::{build_plant, PlantSpec};
pub use steady::{steady_state, SteadyStateOptions};

use nalgebra::{DMatrix, DVector};

/// State/input/output dimensions of a plant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlantDims {
    pub n_x: usize,
    pub n_u: usize,
    pub n_y: usize,
}

/// The input-affine plant contract.
///
/// `drift`, `input_map` and `output` must be pure functions of their
/// arguments; repeated calls with equal inputs return bitwise-equal results.
pub trait Plant: Send + Sync {
    fn name(&self) -> &str;

    fn dims(&self) -> PlantDims;

    /// Autonomous part f(x).
    fn drift(&self, x: &DVector<f64>) -> DVector<f64>;

    /// Input channel map g_i(x).
    fn input_map(&self, i: usize, x: &DVector<f64>) -> DVector<f64>;

    /// Output map h(x).
    fn output(&self, x: &DVector<f64>) -> DVector<f64>;

    /// Per-input [lo, hi] in physical units, lo < hi.
    fn input_bounds(&self) -> &[[f64; 2]];

    /// Total state derivative. The default composes the affine form; plants
    /// with embedded base-layer control override it.
    fn rhs(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let mut dx = self.drift(x);
        for i in 0..self.dims().n_u {
            if u[i] != 0.0 {
                dx.axpy(u[i], &self.input_map(i, x), 1.0);
            }
        }
        dx
    }

    /// Jacobian of `rhs` with respect to the state at fixed input.
    ///
    /// Default: central differences with step 1e-7 * (1 + |x_i|). Plants
    /// with a cheap exact Jacobian override this.
    fn rhs_jacobian_x(&self, x: &DVector<f64>, u: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dims().n_x;
        let mut jac = DMatrix::zeros(n, n);
        let mut xp = x.clone();
        let mut xm = x.clone();
        for j in 0..n {
            let h = 1e-7 * (1.0 + x[j].abs());
            xp[j] = x[j] + h;
            xm[j] = x[j] - h;
            let fp = self.rhs(&xp, u);
            let fm = self.rhs(&xm, u);
            let scale = 1.0 / (2.0 * h);
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) * scale;
            }
            xp[j] = x[j];
            xm[j] = x[j];
        }
        jac
    }

    /// Jacobian of `rhs` with respect to the input at fixed state.
    ///
    /// For the affine form this is exactly [g_1(x) .. g_nu(x)].
    fn rhs_jacobian_u(&self, x: &DVector<f64>, _u: &DVector<f64>) -> DMatrix<f64> {
        let dims = self.dims();
        let mut jac = DMatrix::zeros(dims.n_x, dims.n_u);
        for i in 0..dims.n_u {
            jac.set_column(i, &self.input_map(i, x));
        }
        jac
    }
}

pub(crate) fn check_dim(context: &str, expected: usize, got: usize) -> crate::Result<()> {
    if expected != got {
        return Err(crate::Error::DimensionMismatch {
            context: context.to_string(),
            expected,
            got,
        });
    }
    Ok(())
}
