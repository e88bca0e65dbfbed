//! Dense points with an optional matrix shape.
//!
//! Matrix-valued feasible regions (nuclear-norm ball, Birkhoff polytope)
//! store their elements flattened row-major and carry the `(rows, cols)`
//! shape alongside the coordinates.

/// A point of the ambient space: a dense real vector, optionally carrying a
/// matrix shape for flattened matrix variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
    shape: Option<(usize, usize)>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords, shape: None }
    }

    /// A flattened `rows x cols` matrix, row-major.
    pub fn matrix(coords: Vec<f64>, rows: usize, cols: usize) -> Self {
        assert_eq!(coords.len(), rows * cols, "shape mismatch");
        Point { coords, shape: Some((rows, cols)) }
    }

    pub fn zeros(n: usize) -> Self {
        Point::new(vec![0.0; n])
    }

    /// Coordinate vector `e_i` in dimension `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        Point::new(c)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn shape(&self) -> Option<(usize, usize)> {
        self.shape
    }

    pub fn with_shape(mut self, shape: Option<(usize, usize)>) -> Self {
        self.shape = shape;
        self
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_p(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.coords.iter().fold(0.0, |m, v| m.max(v.abs()));
        }
        self.coords
            .iter()
            .map(|v| v.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    /// `self - other`
    pub fn sub(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
            shape: self.shape,
        }
    }

    /// `self + other`
    pub fn add(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            shape: self.shape,
        }
    }

    pub fn scale(&self, s: f64) -> Point {
        Point {
            coords: self.coords.iter().map(|a| a * s).collect(),
            shape: self.shape,
        }
    }

    /// `self + s * other`, in place.
    pub fn add_scaled(&mut self, s: f64, other: &Point) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += s * b;
        }
    }

    /// Convex step `x + gamma (v - x)` used by every Frank-Wolfe update.
    pub fn convex_step(&self, gamma: f64, v: &Point) -> Point {
        debug_assert_eq!(self.dim(), v.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&v.coords)
                .map(|(x, vi)| x + gamma * (vi - x))
                .collect(),
            shape: self.shape,
        }
    }

    /// Maximum absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}
