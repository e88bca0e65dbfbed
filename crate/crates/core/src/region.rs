//! Feasible regions and their oracles: exact linear minimization (LMO),
//! nearest-extreme-point (NEP) oracle, and brute-force vertex enumeration
//! for testing.

use crate::error::{Error, Result};
use crate::hungarian::min_cost_assignment;
use crate::point::Point;

/// Anything a vanilla Frank-Wolfe run needs from the feasible region.
/// Implemented by [`FeasibleRegion`]; tests use it to inject inexact LMOs.
pub trait LinearOracle {
    fn lmo(&self, c: &Point) -> Result<Point>;
    fn diameter(&self) -> f64;
    fn feasible_point(&self) -> Point;
}

/// A compact convex feasible region with an exact LMO.
#[derive(Debug, Clone)]
pub enum FeasibleRegion {
    /// Probability simplex: `x >= 0`, `sum x = 1`, vertices `e_1..e_n`.
    Simplex { n: usize },
    /// `||x||_1 <= tau`, vertices `+-tau e_i`.
    L1Ball { n: usize, tau: f64 },
    /// `||x||_p <= tau`, `p >= 1` (`p = 1` and `p = inf` fold into the
    /// polyhedral cases).
    LpBall { n: usize, tau: f64, p: f64 },
    /// Axis-aligned box `lower <= x <= upper`.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// `[0,1]^n`.
    Hypercube01 { n: usize },
    /// Matrices with nuclear norm at most `tau`, flattened row-major.
    NuclearBall { rows: usize, cols: usize, tau: f64 },
    /// Doubly stochastic `n x n` matrices, flattened row-major.
    Birkhoff { n: usize },
    /// Explicit convex hull of a finite vertex list.
    Polytope { vertices: Vec<Point> },
}

impl FeasibleRegion {
    pub fn dim(&self) -> usize {
        match self {
            FeasibleRegion::Simplex { n }
            | FeasibleRegion::L1Ball { n, .. }
            | FeasibleRegion::LpBall { n, .. }
            | FeasibleRegion::Hypercube01 { n } => *n,
            FeasibleRegion::Box { lower, .. } => lower.len(),
            FeasibleRegion::NuclearBall { rows, cols, .. } => rows * cols,
            FeasibleRegion::Birkhoff { n } => n * n,
            FeasibleRegion::Polytope { vertices } => vertices[0].dim(),
        }
    }

    pub fn shape(&self) -> Option<(usize, usize)> {
        match self {
            FeasibleRegion::NuclearBall { rows, cols, .. } => Some((*rows, *cols)),
            FeasibleRegion::Birkhoff { n } => Some((*n, *n)),
            _ => None,
        }
    }

    /// Exact diameter in the Euclidean norm (closed form per kind).
    pub fn diameter(&self) -> f64 {
        match self {
            FeasibleRegion::Simplex { .. } => 2f64.sqrt(),
            FeasibleRegion::L1Ball { tau, .. } => 2.0 * tau,
            FeasibleRegion::LpBall { n, tau, p } => {
                if *p <= 2.0 {
                    2.0 * tau
                } else if p.is_infinite() {
                    2.0 * tau * (*n as f64).sqrt()
                } else {
                    2.0 * tau * (*n as f64).powf(0.5 - 1.0 / p)
                }
            }
            FeasibleRegion::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| (u - l) * (u - l))
                .sum::<f64>()
                .sqrt(),
            FeasibleRegion::Hypercube01 { n } => (*n as f64).sqrt(),
            FeasibleRegion::NuclearBall { tau, .. } => 2.0 * tau,
            FeasibleRegion::Birkhoff { n } => (2.0 * *n as f64).sqrt(),
            FeasibleRegion::Polytope { vertices } => {
                let mut d2: f64 = 0.0;
                for (i, v) in vertices.iter().enumerate() {
                    for w in &vertices[i + 1..] {
                        d2 = d2.max(v.sub(w).norm_sq());
                    }
                }
                d2.sqrt()
            }
        }
    }

    /// A canonical feasible point (used as the pre-start point when the
    /// runner initializes at `lmo(grad f(x_arbitrary))`).
    pub fn feasible_point(&self) -> Point {
        match self {
            FeasibleRegion::Simplex { n } => Point::new(vec![1.0 / *n as f64; *n]),
            FeasibleRegion::L1Ball { n, .. } | FeasibleRegion::LpBall { n, .. } => {
                Point::zeros(*n)
            }
            FeasibleRegion::Box { lower, upper } => Point::new(
                lower.iter().zip(upper).map(|(l, u)| 0.5 * (l + u)).collect(),
            ),
            FeasibleRegion::Hypercube01 { n } => Point::new(vec![0.5; *n]),
            FeasibleRegion::NuclearBall { rows, cols, .. } => {
                Point::matrix(vec![0.0; rows * cols], *rows, *cols)
            }
            FeasibleRegion::Birkhoff { n } => {
                Point::matrix(vec![1.0 / *n as f64; n * n], *n, *n)
            }
            FeasibleRegion::Polytope { vertices } => {
                let n = vertices[0].dim();
                let mut c = Point::zeros(n);
                for v in vertices {
                    c.add_scaled(1.0 / vertices.len() as f64, v);
                }
                c
            }
        }
    }

    /// Linear minimization oracle: an extreme point minimizing `<c, .>`.
    /// Ties break to the lowest index; the nuclear-ball vertex uses the
    /// positive-first-nonzero-entry sign convention.
    pub fn lmo(&self, c: &Point) -> Result<Point> {
        if !c.is_finite() {
            return Err(Error::NumericFailure("non-finite LMO cost".into()));
        }
        if c.dim() != self.dim() {
            return Err(Error::ContractViolation(format!(
                "LMO cost dimension {} != region dimension {}",
                c.dim(),
                self.dim()
            )));
        }
        let cs = c.coords();
        match self {
            FeasibleRegion::Simplex { n } => {
                let i = argmin(cs);
                Ok(Point::unit(*n, i))
            }
            FeasibleRegion::L1Ball { n, tau } => Ok(l1_lmo(cs, *n, *tau)),
            FeasibleRegion::LpBall { n, tau, p } => {
                if *p == 1.0 {
                    Ok(l1_lmo(cs, *n, *tau))
                } else if p.is_infinite() {
                    Ok(Point::new(
                        cs.iter().map(|&ci| if ci > 0.0 { -*tau } else { *tau }).collect(),
                    ))
                } else {
                    // v = -tau sign(c) |c|^{q-1} / ||c||_q^{q-1}, q = p/(p-1)
                    let q = p / (p - 1.0);
                    let nq = c.norm_p(q);
                    if nq == 0.0 {
                        let mut v = vec![0.0; *n];
                        v[0] = -*tau;
                        return Ok(Point::new(v));
                    }
                    let v: Vec<f64> = cs
                        .iter()
                        .map(|&ci| {
                            -tau * ci.signum() * (ci.abs() / nq).powf(q - 1.0)
                        })
                        .collect();
                    Ok(Point::new(v))
                }
            }
            FeasibleRegion::Box { lower, upper } => Ok(Point::new(
                cs.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(&ci, (&l, &u))| if ci > 0.0 { l } else if ci < 0.0 { u } else { l })
                    .collect(),
            )),
            FeasibleRegion::Hypercube01 { .. } => Ok(Point::new(
                cs.iter().map(|&ci| if ci < 0.0 { 1.0 } else { 0.0 }).collect(),
            )),
            FeasibleRegion::NuclearBall { rows, cols, tau } => {
                nuclear_lmo(cs, *rows, *cols, *tau)
            }
            FeasibleRegion::Birkhoff { n } => {
                let cost: Vec<Vec<f64>> =
                    (0..*n).map(|i| cs[i * n..(i + 1) * n].to_vec()).collect();
                let perm = min_cost_assignment(&cost);
                let mut v = vec![0.0; n * n];
                for (i, &j) in perm.iter().enumerate() {
                    v[i * n + j] = 1.0;
                }
                Ok(Point::matrix(v, *n, *n))
            }
            FeasibleRegion::Polytope { vertices } => {
                let mut best = 0;
                let mut best_val = f64::INFINITY;
                for (i, v) in vertices.iter().enumerate() {
                    let val = c.dot(v);
                    if val < best_val {
                        best_val = val;
                        best = i;
                    }
                }
                Ok(vertices[best].clone())
            }
        }
    }

    /// Exhaustive duplicate-free vertex list for small polyhedral regions.
    pub fn enumerate_vertices(&self) -> Result<Vec<Point>> {
        match self {
            FeasibleRegion::Simplex { n } => {
                if *n > 100_000 {
                    return Err(Error::Capability("simplex too large to enumerate".into()));
                }
                Ok((0..*n).map(|i| Point::unit(*n, i)).collect())
            }
            FeasibleRegion::L1Ball { n, tau } => {
                if *n > 50_000 {
                    return Err(Error::Capability("l1 ball too large to enumerate".into()));
                }
                let mut vs = Vec::with_capacity(2 * n);
                for i in 0..*n {
                    let mut v = vec![0.0; *n];
                    v[i] = *tau;
                    vs.push(Point::new(v.clone()));
                    v[i] = -*tau;
                    vs.push(Point::new(v));
                }
                Ok(vs)
            }
            FeasibleRegion::Hypercube01 { n } => {
                if *n > 16 {
                    return Err(Error::Capability("hypercube too large to enumerate".into()));
                }
                Ok((0..1usize << n)
                    .map(|mask| {
                        Point::new(
                            (0..*n).map(|i| ((mask >> i) & 1) as f64).collect(),
                        )
                    })
                    .collect())
            }
            FeasibleRegion::Box { lower, upper } => {
                let n = lower.len();
                if n > 16 {
                    return Err(Error::Capability("box too large to enumerate".into()));
                }
                Ok((0..1usize << n)
                    .map(|mask| {
                        Point::new(
                            (0..n)
                                .map(|i| if (mask >> i) & 1 == 1 { upper[i] } else { lower[i] })
                                .collect(),
                        )
                    })
                    .collect())
            }
            FeasibleRegion::Birkhoff { n } => {
                if *n > 5 {
                    return Err(Error::Capability("birkhoff too large to enumerate".into()));
                }
                let mut vs = Vec::new();
                let mut perm: Vec<usize> = (0..*n).collect();
                permutations(&mut perm, 0, &mut |p| {
                    let mut v = vec![0.0; n * n];
                    for (i, &j) in p.iter().enumerate() {
                        v[i * n + j] = 1.0;
                    }
                    vs.push(Point::matrix(v, *n, *n));
                });
                Ok(vs)
            }
            FeasibleRegion::Polytope { vertices } => Ok(vertices.clone()),
            FeasibleRegion::LpBall { .. } | FeasibleRegion::NuclearBall { .. } => Err(
                Error::Capability("region has no finite vertex set to enumerate".into()),
            ),
        }
    }

    /// Whether all vertices are 0/1 vectors (enables the NEP reduction and
    /// the decomposition-invariant pairwise runner).
    pub fn is_zero_one(&self) -> bool {
        matches!(
            self,
            FeasibleRegion::Simplex { .. }
                | FeasibleRegion::Hypercube01 { .. }
                | FeasibleRegion::Birkhoff { .. }
        )
    }

    /// Nearest-extreme-point oracle:
    /// `argmin over extreme points of <c, v> + lambda ||v - x||^2`.
    ///
    /// For 0/1 polytopes `||v||^2 = <v, 1>`, so this reduces to an LMO with
    /// cost `c + lambda (1 - 2x)`. For the Euclidean ball the extreme points
    /// are the sphere and the oracle is again linear.
    pub fn nep(&self, c: &Point, lambda: f64, x: &Point) -> Result<Point> {
        if lambda < 0.0 {
            return Err(Error::ContractViolation("nep: lambda must be >= 0".into()));
        }
        if self.is_zero_one() {
            let cost: Vec<f64> = c
                .coords()
                .iter()
                .zip(x.coords())
                .map(|(&ci, &xi)| ci + lambda * (1.0 - 2.0 * xi))
                .collect();
            return self.lmo(&Point::new(cost).with_shape(c.shape()));
        }
        if let FeasibleRegion::LpBall { n, tau, p } = self {
            if (*p - 2.0).abs() < 1e-15 {
                // minimize <c - 2 lambda x, v> over the sphere ||v|| = tau
                let w: Vec<f64> = c
                    .coords()
                    .iter()
                    .zip(x.coords())
                    .map(|(&ci, &xi)| ci - 2.0 * lambda * xi)
                    .collect();
                let nw = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                if nw == 0.0 {
                    let mut v = vec![0.0; *n];
                    v[0] = -*tau;
                    return Ok(Point::new(v));
                }
                return Ok(Point::new(w.iter().map(|&wi| -tau * wi / nw).collect()));
            }
        }
        Err(Error::Capability(
            "nep oracle supported only for 0/1 polytopes and the l2 ball".into(),
        ))
    }

    /// Feasibility test with per-kind tolerance on constraint violation.
    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        let cs = x.coords();
        match self {
            FeasibleRegion::Simplex { .. } => {
                cs.iter().all(|&v| v >= -tol)
                    && (cs.iter().sum::<f64>() - 1.0).abs() <= tol
            }
            FeasibleRegion::L1Ball { tau, .. } => x.norm_p(1.0) <= tau + tol,
            FeasibleRegion::LpBall { tau, p, .. } => x.norm_p(*p) <= tau + tol,
            FeasibleRegion::Box { lower, upper } => cs
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(&v, (&l, &u))| v >= l - tol && v <= u + tol),
            FeasibleRegion::Hypercube01 { .. } => {
                cs.iter().all(|&v| (-tol..=1.0 + tol).contains(&v))
            }
            FeasibleRegion::NuclearBall { rows, cols, tau } => {
                nuclear_norm(cs, *rows, *cols) <= tau + tol
            }
            FeasibleRegion::Birkhoff { n } => {
                let ok_entries = cs.iter().all(|&v| v >= -tol);
                let ok_rows = (0..*n).all(|i| {
                    ((0..*n).map(|j| cs[i * n + j]).sum::<f64>() - 1.0).abs() <= tol
                });
                let ok_cols = (0..*n).all(|j| {
                    ((0..*n).map(|i| cs[i * n + j]).sum::<f64>() - 1.0).abs() <= tol
                });
                ok_entries && ok_rows && ok_cols
            }
            // No general membership test for an H-free hull; accept points
            // within diameter of the vertex centroid. Tests that need exact
            // membership use barycentric reconstruction instead.
            FeasibleRegion::Polytope { vertices } => {
                let c = self.feasible_point();
                x.sub(&c).norm() <= self.diameter() + tol || vertices.iter().any(|v| v == x)
            }
        }
    }

    /// Away vertex over the minimal face containing `x`, used by the
    /// decomposition-invariant pairwise runner. Only 0/1 polytopes.
    ///
    /// Maximizes `<grad, v>` over vertices of the minimal face: coordinates
    /// with `x_i = 0` are forced to 0 (and `x_i = 1` forced to 1 for the
    /// hypercube).
    pub fn face_away_vertex(&self, grad: &Point, x: &Point) -> Result<Point> {
        let g = grad.coords();
        let xs = x.coords();
        match self {
            FeasibleRegion::Simplex { n } => {
                let mut best = usize::MAX;
                let mut best_val = f64::NEG_INFINITY;
                for i in 0..*n {
                    if xs[i] > 0.0 && g[i] > best_val {
                        best_val = g[i];
                        best = i;
                    }
                }
                if best == usize::MAX {
                    return Err(Error::ContractViolation("empty support".into()));
                }
                Ok(Point::unit(*n, best))
            }
            FeasibleRegion::Hypercube01 { n } => Ok(Point::new(
                (0..*n)
                    .map(|i| {
                        // coordinates pinned by the minimal face; free ones
                        // maximize the masked cost
                        if xs[i] <= 0.0 {
                            0.0
                        } else if xs[i] >= 1.0 || g[i] > 0.0 {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect(),
            )),
            FeasibleRegion::Birkhoff { n } => {
                // max <g, v> over the support = min <-g, v> with forbidden
                // entries priced out.
                let big = g.iter().fold(0.0f64, |m, v| m.max(v.abs())) * (*n as f64 + 1.0) + 1.0;
                let cost: Vec<Vec<f64>> = (0..*n)
                    .map(|i| {
                        (0..*n)
                            .map(|j| {
                                if xs[i * n + j] > 0.0 {
                                    -g[i * n + j]
                                } else {
                                    big
                                }
                            })
                            .collect()
                    })
                    .collect();
                let perm = min_cost_assignment(&cost);
                let mut v = vec![0.0; n * n];
                for (i, &j) in perm.iter().enumerate() {
                    if xs[i * n + j] <= 0.0 {
                        return Err(Error::NumericFailure(
                            "no assignment within the support".into(),
                        ));
                    }
                    v[i * n + j] = 1.0;
                }
                Ok(Point::matrix(v, *n, *n))
            }
            _ => Err(Error::Capability(
                "face-restricted away vertex requires a 0/1 polytope".into(),
            )),
        }
    }
}

impl LinearOracle for FeasibleRegion {
    fn lmo(&self, c: &Point) -> Result<Point> {
        FeasibleRegion::lmo(self, c)
    }
    fn diameter(&self) -> f64 {
        FeasibleRegion::diameter(self)
    }
    fn feasible_point(&self) -> Point {
        FeasibleRegion::feasible_point(self)
    }
}

fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for (i, &v) in xs.iter().enumerate() {
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    best
}

fn l1_lmo(cs: &[f64], n: usize, tau: f64) -> Point {
    let mut k = 0;
    let mut best = -1.0;
    for (i, &ci) in cs.iter().enumerate() {
        if ci.abs() > best {
            best = ci.abs();
            k = i;
        }
    }
    let mut v = vec![0.0; n];
    v[k] = if cs[k] > 0.0 { -tau } else { tau };
    Point::new(v)
}

/// Top singular pair of the flattened `rows x cols` matrix `c` by power
/// iteration on `C^T C`, then `v = -tau u1 v1^T`.
///
/// Deterministic all-ones start; tolerance 1e-10 on the relative Rayleigh
/// residual; one restart from a second deterministic vector. Near-tied top
/// singular values make plain power iteration arbitrarily slow, so after
/// the restart a deterministic cyclic-Jacobi eigensolve of `C^T C` takes
/// over before the error path fires.
fn nuclear_lmo(c: &[f64], rows: usize, cols: usize, tau: f64) -> Result<Point> {
    let max_iter = 10 * (rows + cols);
    let frob_sq: f64 = c.iter().map(|v| v * v).sum();
    if frob_sq == 0.0 {
        // zero cost: any vertex; fixed convention -tau e1 e1^T
        let mut v = vec![0.0; rows * cols];
        v[0] = -tau;
        return Ok(Point::matrix(v, rows, cols));
    }

    let mat_vec = |w: &[f64]| -> Vec<f64> {
        // C w
        (0..rows)
            .map(|i| c[i * cols..(i + 1) * cols].iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    };
    let mat_t_vec = |u: &[f64]| -> Vec<f64> {
        // C^T u
        let mut w = vec![0.0; cols];
        for i in 0..rows {
            for j in 0..cols {
                w[j] += c[i * cols + j] * u[i];
            }
        }
        w
    };

    let starts: [fn(usize) -> Vec<f64>; 2] = [
        |n| vec![1.0 / (n as f64).sqrt(); n],
        |n| (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } / (n as f64).sqrt()).collect(),
    ];

    let finish = |w: &[f64]| -> Option<Point> {
        let cw = mat_vec(w);
        let sigma_sq: f64 = cw.iter().map(|v| v * v).sum();
        let sigma = sigma_sq.sqrt();
        if sigma == 0.0 {
            return None;
        }
        let mut u: Vec<f64> = cw.iter().map(|v| v / sigma).collect();
        let mut vv = w.to_vec();
        // sign convention: first nonzero entry of u positive
        if let Some(&lead) = u.iter().find(|v| v.abs() > 1e-300) {
            if lead < 0.0 {
                for e in u.iter_mut() {
                    *e = -*e;
                }
                for e in vv.iter_mut() {
                    *e = -*e;
                }
            }
        }
        let mut out = vec![0.0; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                out[i * cols + j] = -tau * u[i] * vv[j];
            }
        }
        Some(Point::matrix(out, rows, cols))
    };

    for start in starts {
        let mut w = start(cols);
        for _ in 0..max_iter {
            let cw = mat_vec(&w);
            let z = mat_t_vec(&cw); // C^T C w
            let lam = w.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>(); // Rayleigh quotient
            let res_sq: f64 = z.iter().zip(&w).map(|(zi, wi)| (zi - lam * wi) * (zi - lam * wi)).sum();
            let nz = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if res_sq.sqrt() <= 1e-10 * lam.max(1e-300) {
                match finish(&w) {
                    Some(p) => return Ok(p),
                    None => break, // w in the null space; restart
                }
            }
            if nz == 0.0 {
                break; // degenerate; restart from the other vector
            }
            for (wi, zi) in w.iter_mut().zip(&z) {
                *wi = zi / nz;
            }
        }
    }
    // near-tied spectrum: deterministic cyclic Jacobi on C^T C
    if let Some(w) = jacobi_top_eigenvector(&mat_t_mat(c, rows, cols), cols) {
        if let Some(p) = finish(&w) {
            return Ok(p);
        }
    }
    Err(Error::NumericFailure(
        "power iteration for nuclear-ball LMO did not converge".into(),
    ))
}

fn mat_t_mat(c: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut s = vec![0.0; cols * cols];
    for r in 0..rows {
        let row = &c[r * cols..(r + 1) * cols];
        for i in 0..cols {
            for j in 0..cols {
                s[i * cols + j] += row[i] * row[j];
            }
        }
    }
    s
}

/// Eigenvector of the largest eigenvalue of a symmetric matrix by cyclic
/// Jacobi rotations. Deterministic; `None` if 50 sweeps do not reduce the
/// off-diagonal mass.
fn jacobi_top_eigenvector(s: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut a = s.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm: f64 = s.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..50 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-14 * norm {
            // pick the largest diagonal entry's column of V
            let mut best = 0;
            for i in 1..n {
                if a[i * n + i] > a[best * n + best] {
                    best = i;
                }
            }
            return Some((0..n).map(|i| v[i * n + best]).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sgn / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cos = 1.0 / (t * t + 1.0).sqrt();
                let sin = t * cos;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cos * akp - sin * akq;
                    a[k * n + q] = sin * akp + cos * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cos * apk - sin * aqk;
                    a[q * n + k] = sin * apk + cos * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = cos * vkp - sin * vkq;
                    v[k * n + q] = sin * vkp + cos * vkq;
                }
            }
        }
    }
    None
}

/// Nuclear norm by accumulating top singular values with deflation.
/// Test/feasibility helper, not on the oracle hot path.
fn nuclear_norm(c: &[f64], rows: usize, cols: usize) -> f64 {
    let k = rows.min(cols);
    let mut work = c.to_vec();
    let mut total = 0.0;
    for _ in 0..k {
        match nuclear_lmo(&work, rows, cols, 1.0) {
            Ok(v) => {
                // v = -u1 v1^T; sigma = <C, u1 v1^T> = -<C, v>
                let sigma: f64 = -work.iter().zip(v.coords()).map(|(a, b)| a * b).sum::<f64>();
                if sigma <= 1e-12 * (1.0 + total) {
                    break;
                }
                total += sigma;
                // deflate C <- C - sigma u1 v1^T = C + sigma * v
                for (wi, &vi) in work.iter_mut().zip(v.coords()) {
                    *wi += sigma * vi;
                }
            }
            Err(_) => break,
        }
    }
    total
}

fn permutations(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    // lexicographic order: rotate the candidate into place
    for i in k..perm.len() {
        perm[k..=i].rotate_right(1);
        permutations(perm, k + 1, f);
        perm[k..=i].rotate_left(1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_lmo_lowest_index_tie_break() {
        let r = FeasibleRegion::Simplex { n: 3 };
        let v = r.lmo(&Point::new(vec![3.0, -1.0, 2.0])).unwrap();
        assert_eq!(v, Point::unit(3, 1));
        // tie between coordinates 1 and 2
        let v = r.lmo(&Point::new(vec![2.0, 0.0, 0.0])).unwrap();
        assert_eq!(v, Point::unit(3, 1));
    }

    #[test]
    fn l1_lmo_example() {
        let r = FeasibleRegion::L1Ball { n: 3, tau: 2.0 };
        let v = r.lmo(&Point::new(vec![1.0, -3.0, 2.0])).unwrap();
        assert_eq!(v.coords(), &[0.0, 2.0, 0.0]);
    }

    #[test]
    fn lp_ball_lmo_is_hoelder_tight() {
        let r = FeasibleRegion::LpBall { n: 2, tau: 1.0, p: 2.0 };
        let v = r.lmo(&Point::new(vec![3.0, 4.0])).unwrap();
        assert!((v.coords()[0] + 0.6).abs() < 1e-15);
        assert!((v.coords()[1] + 0.8).abs() < 1e-15);
    }

    #[test]
    fn nuclear_lmo_diagonal_cost() {
        let r = FeasibleRegion::NuclearBall { rows: 2, cols: 2, tau: 1.0 };
        let v = r.lmo(&Point::matrix(vec![2.0, 0.0, 0.0, -1.0], 2, 2)).unwrap();
        let expect = [-1.0, 0.0, 0.0, 0.0];
        for (a, b) in v.coords().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-9, "{:?}", v.coords());
        }
    }

    #[test]
    fn birkhoff_lmo_two_permutations() {
        let r = FeasibleRegion::Birkhoff { n: 2 };
        let v = r.lmo(&Point::matrix(vec![1.0, 2.0, 3.0, 0.0], 2, 2)).unwrap();
        assert_eq!(v.coords(), &[1.0, 0.0, 0.0, 1.0]); // identity, cost 1
    }

    #[test]
    fn vertex_enumeration_counts() {
        assert_eq!(FeasibleRegion::Simplex { n: 3 }.enumerate_vertices().unwrap().len(), 3);
        assert_eq!(FeasibleRegion::Hypercube01 { n: 2 }.enumerate_vertices().unwrap().len(), 4);
        assert_eq!(FeasibleRegion::Birkhoff { n: 3 }.enumerate_vertices().unwrap().len(), 6);
    }

    #[test]
    fn nep_matches_lmo_at_lambda_zero() {
        let r = FeasibleRegion::Hypercube01 { n: 4 };
        let c = Point::new(vec![0.3, -0.2, 0.0, 1.0]);
        let x = Point::new(vec![0.5; 4]);
        assert_eq!(r.nep(&c, 0.0, &x).unwrap(), r.lmo(&c).unwrap());
    }

    #[test]
    fn nep_hypercube_rounds_to_nearest_vertex() {
        let r = FeasibleRegion::Hypercube01 { n: 2 };
        let v = r
            .nep(&Point::zeros(2), 1.0, &Point::new(vec![0.9, 0.1]))
            .unwrap();
        assert_eq!(v.coords(), &[1.0, 0.0]);
    }

    #[test]
    fn nep_brute_force_on_simplex() {
        let r = FeasibleRegion::Simplex { n: 3 };
        let mut state = 7u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for _ in 0..200 {
            let c = Point::new(vec![next() - 0.5, next() - 0.5, next() - 0.5]);
            let lam = next() * 2.0;
            let mut x = vec![next(), next(), next()];
            let s: f64 = x.iter().sum();
            x.iter_mut().for_each(|v| *v /= s);
            let x = Point::new(x);
            let got = r.nep(&c, lam, &x).unwrap();
            let best = r
                .enumerate_vertices()
                .unwrap()
                .into_iter()
                .min_by(|a, b| {
                    let fa = c.dot(a) + lam * a.sub(&x).norm_sq();
                    let fb = c.dot(b) + lam * b.sub(&x).norm_sq();
                    fa.partial_cmp(&fb).unwrap()
                })
                .unwrap();
            let got_val = c.dot(&got) + lam * got.sub(&x).norm_sq();
            let best_val = c.dot(&best) + lam * best.sub(&x).norm_sq();
            assert!((got_val - best_val).abs() <= 1e-12);
        }
    }

    #[test]
    fn face_away_vertex_respects_support() {
        let r = FeasibleRegion::Simplex { n: 4 };
        let x = Point::new(vec![0.5, 0.0, 0.5, 0.0]);
        let g = Point::new(vec![0.1, 9.0, 0.4, 9.0]);
        let v = r.face_away_vertex(&g, &x).unwrap();
        assert_eq!(v, Point::unit(4, 2)); // best within the support
    }

    #[test]
    fn unsupported_enumeration_is_a_capability_error() {
        let r = FeasibleRegion::LpBall { n: 3, tau: 1.0, p: 1.5 };
        assert!(matches!(r.enumerate_vertices(), Err(Error::Capability(_))));
    }
}
