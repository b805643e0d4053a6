use nalgebra::{DMatrix, DVector};

use super::{Plant, PlantDims};

/// Linear time-invariant test plant dx/dt = A x + B u, y = C x.
pub struct LinearPlant {
    name: String,
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    bounds: Vec<[f64; 2]>,
}

impl LinearPlant {
    pub fn new(
        name: impl Into<String>,
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        bounds: Vec<[f64; 2]>,
    ) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "A must be square");
        assert_eq!(b.nrows(), a.nrows(), "B row count must match state dim");
        assert_eq!(c.ncols(), a.nrows(), "C column count must match state dim");
        assert_eq!(bounds.len(), b.ncols(), "one bound pair per input");
        LinearPlant {
            name: name.into(),
            a,
            b,
            c,
            bounds,
        }
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }
}

impl Plant for LinearPlant {
    fn name(&self) -> &str {
        &self.name
    }

    fn dims(&self) -> PlantDims {
        PlantDims {
            n_x: self.a.nrows(),
            n_u: self.b.ncols(),
            n_y: self.c.nrows(),
        }
    }

    fn drift(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x
    }

    fn input_map(&self, i: usize, _x: &DVector<f64>) -> DVector<f64> {
        self.b.column(i).into_owned()
    }

    fn output(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.c * x
    }

    fn input_bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }

    fn rhs_jacobian_x(&self, _x: &DVector<f64>, _u: &DVector<f64>) -> DMatrix<f64> {
        self.a.clone()
    }
}

type StateFn = Box<dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync>;

/// Closure-backed plant for fixtures and one-off systems.
pub struct CustomPlant {
    name: String,
    dims: PlantDims,
    drift: StateFn,
    input_maps: Vec<StateFn>,
    output: StateFn,
    bounds: Vec<[f64; 2]>,
}

impl CustomPlant {
    pub fn new(
        name: impl Into<String>,
        dims: PlantDims,
        drift: StateFn,
        input_maps: Vec<StateFn>,
        output: StateFn,
        bounds: Vec<[f64; 2]>,
    ) -> Self {
        assert_eq!(input_maps.len(), dims.n_u);
        assert_eq!(bounds.len(), dims.n_u);
        CustomPlant {
            name: name.into(),
            dims,
            drift,
            input_maps,
            output,
            bounds,
        }
    }

    /// Scalar plant dx/dt = f(x) + g * u with y = x, handy in tests.
    pub fn scalar(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: f64,
        bound: [f64; 2],
    ) -> Self {
        CustomPlant::new(
            name,
            PlantDims {
                n_x: 1,
                n_u: 1,
                n_y: 1,
            },
            Box::new(move |x: &DVector<f64>| DVector::from_element(1, f(x[0]))),
            vec![Box::new(move |_x: &DVector<f64>| {
                DVector::from_element(1, g)
            })],
            Box::new(|x: &DVector<f64>| x.clone()),
            vec![bound],
        )
    }
}

impl Plant for CustomPlant {
    fn name(&self) -> &str {
        &self.name
    }

    fn dims(&self) -> PlantDims {
        self.dims
    }

    fn drift(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.drift)(x)
    }

    fn input_map(&self, i: usize, x: &DVector<f64>) -> DVector<f64> {
        (self.input_maps[i])(x)
    }

    fn output(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.output)(x)
    }

    fn input_bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }
}
