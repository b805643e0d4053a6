use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{ColumnConfig, ColumnPlant, CstrConfig, CstrPlant, LinearPlant, Plant};
use crate::{Error, Result};

/// Plant selection for configs and the CLI, addressed by name.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum PlantSpec {
    Column {
        #[serde(default)]
        config: Option<ColumnConfig>,
    },
    Cstr {
        #[serde(default)]
        config: Option<CstrConfig>,
    },
    Linear {
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        c: Vec<Vec<f64>>,
        input_bounds: Vec<[f64; 2]>,
    },
}

impl PlantSpec {
    pub fn column_default() -> Self {
        PlantSpec::Column { config: None }
    }
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("matrix has no rows".into()));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidArgument("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

/// Build a plant from its spec.
pub fn build_plant(spec: &PlantSpec) -> Result<Box<dyn Plant>> {
    match spec {
        PlantSpec::Column { config } => Ok(Box::new(ColumnPlant::new(
            config.clone().unwrap_or_default(),
        ))),
        PlantSpec::Cstr { config } => Ok(Box::new(CstrPlant::new(
            config.clone().unwrap_or_default(),
        ))),
        PlantSpec::Linear {
            a,
            b,
            c,
            input_bounds,
        } => {
            let a = matrix_from_rows(a)?;
            let b = matrix_from_rows(b)?;
            let c = matrix_from_rows(c)?;
            Ok(Box::new(LinearPlant::new(
                "linear",
                a,
                b,
                c,
                input_bounds.clone(),
            )))
        }
    }
}

/// Nominal operating point helpers used by the CLI and the harness.
pub fn nominal_inputs(spec: &PlantSpec) -> Result<DVector<f64>> {
    match spec {
        PlantSpec::Column { config } => {
            Ok(ColumnPlant::new(config.clone().unwrap_or_default()).nominal_inputs())
        }
        PlantSpec::Cstr { config } => {
            Ok(CstrPlant::new(config.clone().unwrap_or_default()).nominal_inputs())
        }
        PlantSpec::Linear { input_bounds, .. } => Ok(DVector::from_iterator(
            input_bounds.len(),
            input_bounds.iter().map(|[lo, hi]| 0.5 * (lo + hi)),
        )),
    }
}

pub fn initial_state_guess(spec: &PlantSpec) -> Result<DVector<f64>> {
    match spec {
        PlantSpec::Column { config } => {
            Ok(ColumnPlant::new(config.clone().unwrap_or_default()).initial_state())
        }
        PlantSpec::Cstr { config } => {
            Ok(CstrPlant::new(config.clone().unwrap_or_default()).initial_state())
        }
        PlantSpec::Linear { a, .. } => Ok(DVector::zeros(a.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_builds_by_name() {
        let spec: PlantSpec = serde_json::from_str(r#"{"name": "column"}"#).unwrap();
        let plant = build_plant(&spec).unwrap();
        assert_eq!(plant.name(), "column");
        assert_eq!(plant.dims().n_x, 22);
    }

    #[test]
    fn unknown_names_fail_to_parse() {
        let parsed: std::result::Result<PlantSpec, _> =
            serde_json::from_str(r#"{"name": "reactor9000"}"#);
        assert!(parsed.is_err());
    }
}
