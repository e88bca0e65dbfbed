//! Deterministic problem instances shared by the experiment catalog and
//! the acceptance battery.

use condgrad::objectives::DiagQuadratic;
use condgrad::point::Point;
use condgrad::region::FeasibleRegion;
use condgrad::stochastic::stream_rng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    stream_rng(seed, stream)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// The right triangle `conv{(-1,0), (1,0), (0,1)}` with the objective
/// `f(x,y) = 2x^2 + y^2` (optimum at the origin).
pub fn triangle() -> (DiagQuadratic, FeasibleRegion) {
    let f = DiagQuadratic::new(vec![2.0, 1.0], vec![0.0, 0.0]).with_optimum(0.0);
    let region = FeasibleRegion::Polytope {
        vertices: vec![
            Point::new(vec![-1.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![0.0, 1.0]),
        ],
    };
    (f, region)
}

/// Separable quadratic over the simplex whose optimum sits in the interior
/// of the face spanned by the first `face.len()` vertices, pinned by the
/// KKT conditions with multiplier 1: `c_i = w_i + 1/(2 l_i)` on the face
/// and `c_i = 0` off it. The optimal value is `sum_F 1/(4 l_i)`.
pub fn face_quadratic(n: usize, weights_on_face: &[f64], seed: u64) -> DiagQuadratic {
    assert!(weights_on_face.len() <= n);
    let mut r = rng(seed, 0);
    let l: Vec<f64> = (0..n).map(|_| uniform(&mut r, 0.5, 2.0)).collect();
    let mut center = vec![0.0; n];
    for (i, &wi) in weights_on_face.iter().enumerate() {
        center[i] = wi + 1.0 / (2.0 * l[i]);
    }
    let f_star: f64 = weights_on_face.iter().enumerate().map(|(i, _)| 1.0 / (4.0 * l[i])).sum();
    DiagQuadratic::new(l, center).with_optimum(f_star)
}

/// Interior-optimum quadratic over the l1 ball of radius `tau`: the center
/// has `||c||_1 = tau/2`, so `x* = c` and `f* = 0`.
pub fn interior_l1_quadratic(n: usize, tau: f64, seed: u64) -> (DiagQuadratic, FeasibleRegion) {
    let mut r = rng(seed, 1);
    let l: Vec<f64> = (0..n).map(|_| uniform(&mut r, 0.5, 2.0)).collect();
    let mut c: Vec<f64> = (0..n).map(|_| uniform(&mut r, -1.0, 1.0)).collect();
    let norm1: f64 = c.iter().map(|v| v.abs()).sum();
    for v in c.iter_mut() {
        *v *= 0.5 * tau / norm1;
    }
    let f = DiagQuadratic::new(l, c).with_optimum(0.0);
    (f, FeasibleRegion::L1Ball { n, tau })
}

/// Quadratic over the l1 ball whose optimum is pinned by KKT in the
/// interior of the face spanned by the first `weights_on_face.len()`
/// positive vertices (weights sum to `tau`); `f* = sum_F 1/(4 l_i)`.
pub fn l1_face_quadratic(
    n: usize,
    tau: f64,
    weights_on_face: &[f64],
    scale: f64,
    seed: u64,
) -> (DiagQuadratic, FeasibleRegion) {
    let mut r = rng(seed, 7);
    let l: Vec<f64> = (0..n).map(|_| scale * uniform(&mut r, 0.5, 2.0)).collect();
    let mut center = vec![0.0; n];
    for (i, &wi) in weights_on_face.iter().enumerate() {
        center[i] = wi + 1.0 / (2.0 * l[i]);
    }
    let f_star: f64 = weights_on_face.iter().enumerate().map(|(i, _)| 1.0 / (4.0 * l[i])).sum();
    let f = DiagQuadratic::new(l, center).with_optimum(f_star);
    (f, FeasibleRegion::L1Ball { n, tau })
}

/// Random positive-weight quadratic over the simplex with an interior
/// optimum (center inside the simplex), `f* = 0` exactly.
pub fn interior_simplex_quadratic(n: usize, seed: u64) -> DiagQuadratic {
    let mut r = rng(seed, 2);
    let l: Vec<f64> = (0..n).map(|_| uniform(&mut r, 0.5, 2.0)).collect();
    let mut c: Vec<f64> = (0..n).map(|_| uniform(&mut r, 0.05, 1.0)).collect();
    let s: f64 = c.iter().sum();
    c.iter_mut().for_each(|v| *v /= s);
    DiagQuadratic::new(l, c).with_optimum(0.0)
}

/// A doubly stochastic matrix built as a convex mixture of `k` random
/// permutation matrices of the `n x n` Birkhoff polytope. Returns the
/// mixture and the atoms used.
pub fn birkhoff_mixture(n: usize, k: usize, seed: u64) -> (Point, Vec<Point>) {
    let mut r = rng(seed, 3);
    let mut atoms = Vec::with_capacity(k);
    for _ in 0..k {
        // random permutation by Fisher-Yates
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = r.gen_range(0..=i);
            perm.swap(i, j);
        }
        let mut m = vec![0.0; n * n];
        for (row, &col) in perm.iter().enumerate() {
            m[row * n + col] = 1.0;
        }
        atoms.push(Point::matrix(m, n, n));
    }
    let mut w: Vec<f64> = (0..k).map(|_| uniform(&mut r, 0.2, 1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= s);
    let mut u = Point::matrix(vec![0.0; n * n], n, n);
    for (a, &wi) in atoms.iter().zip(&w) {
        u.add_scaled(wi, a);
    }
    (u, atoms)
}

/// Gaussian measurement vectors for the design problem.
pub fn gaussian_vectors(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand_distr::StandardNormal;
    let mut r = rng(seed, 4);
    (0..n).map(|_| (0..d).map(|_| r.sample::<f64, _>(StandardNormal)).collect()).collect()
}

/// Random 3-D point cloud in the unit cube.
pub fn random_points_3d(m: usize, seed: u64) -> Vec<Point> {
    let mut r = rng(seed, 5);
    (0..m)
        .map(|_| Point::new(vec![uniform(&mut r, -1.0, 1.0), uniform(&mut r, -1.0, 1.0), uniform(&mut r, -1.0, 1.0)]))
        .collect()
}

/// The nearest-extreme-point comparison setup, scaled to desk size: a
/// separable quadratic over the 0/1 hypercube (or simplex) whose optimum
/// lies on a 5-dimensional face, with the start point next to that face.
pub struct NepInstance {
    pub objective: DiagQuadratic,
    pub region: FeasibleRegion,
    pub start: Point,
}

pub fn nep_instance(n: usize, on_simplex: bool, seed: u64) -> NepInstance {
    let mut r = rng(seed, 6);
    if on_simplex {
        // optimum: first five coordinates positive, normalized
        let mut c = vec![0.0; n];
        let mut s = 0.0;
        for ci in c.iter_mut().take(5) {
            *ci = uniform(&mut r, 0.2, 1.0);
            s += *ci;
        }
        for ci in c.iter_mut().take(5) {
            *ci /= s;
        }
        let objective = DiagQuadratic::new(vec![1.0; n], c).with_optimum(0.0);
        let start = Point::unit(n, n - 1);
        NepInstance { objective, region: FeasibleRegion::Simplex { n }, start }
    } else {
        // random vertex with the first five entries set to 0.5
        let mut c: Vec<f64> = (0..n).map(|_| if r.gen_bool(0.5) { 1.0 } else { 0.0 }).collect();
        for ci in c.iter_mut().take(5) {
            *ci = 0.5;
        }
        // start: the optimum with the face coordinates zeroed and the sixth
        // flipped, so the distance to the optimal face is small
        let mut start = c.clone();
        for si in start.iter_mut().take(5) {
            *si = 0.0;
        }
        start[5] = 1.0 - start[5];
        let objective = DiagQuadratic::new(vec![1.0; n], c).with_optimum(0.0);
        NepInstance { objective, region: FeasibleRegion::Hypercube01 { n }, start: Point::new(start) }
    }
}
