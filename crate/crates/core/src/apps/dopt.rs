//! D-optimal experimental design: minimize `-ln det V(x)` over the simplex
//! with closed-form steps and rank-1 state updates.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::Point;

/// Which runner drives the design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoptVariant {
    Fw,
    /// Adds away steps with the analogous closed-form away line search.
    Afw,
}

/// Design state: weights on the simplex plus the incrementally maintained
/// `V(x)^{-1}`, `ln det V(x)`, and the gradient coordinates
/// `<grad f, e_i> = -||a_i||^2_{V^{-1}}`.
#[derive(Debug, Clone)]
pub struct DesignState {
    /// Measurement vectors `a_1..a_n` in `R^d`.
    pub vectors: Vec<Vec<f64>>,
    /// Weights `x` on the simplex.
    pub weights: Vec<f64>,
    /// `V(x)^{-1}`, row-major `d x d`.
    pub v_inv: Vec<f64>,
    /// `ln det V(x)`.
    pub log_det: f64,
    /// `grad_i = -a_i^T V^{-1} a_i`.
    pub grad: Vec<f64>,
    pub dim: usize,
    steps_since_refresh: u32,
    refresh_period: u32,
}

/// Rank-1 refreshes flush accumulated error this often.
const REFRESH_PERIOD: u32 = 50;

fn mat_vec(m: &[f64], d: usize, v: &[f64]) -> Vec<f64> {
    (0..d)
        .map(|i| m[i * d..(i + 1) * d].iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Cholesky factor of a symmetric positive definite matrix; `None` when the
/// matrix is not numerically positive definite (relative pivot threshold).
fn cholesky(v: &[f64], d: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; d * d];
    let scale = (0..d).fold(0.0f64, |m, i| m.max(v[i * d + i].abs())).max(1e-300);
    for i in 0..d {
        for j in 0..=i {
            let mut s = v[i * d + j];
            for k in 0..j {
                s -= l[i * d + k] * l[j * d + k];
            }
            if i == j {
                if s <= 1e-12 * scale || !s.is_finite() {
                    return None;
                }
                l[i * d + i] = s.sqrt();
            } else {
                l[i * d + j] = s / l[j * d + j];
            }
        }
    }
    Some(l)
}

fn cholesky_inverse(l: &[f64], d: usize) -> Vec<f64> {
    // solve L L^T X = I column by column
    let mut inv = vec![0.0; d * d];
    for col in 0..d {
        // forward solve L y = e_col
        let mut y = vec![0.0; d];
        for i in 0..d {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                s -= l[i * d + k] * y[k];
            }
            y[i] = s / l[i * d + i];
        }
        // back solve L^T x = y
        let mut x = vec![0.0; d];
        for i in (0..d).rev() {
            let mut s = y[i];
            for k in i + 1..d {
                s -= l[k * d + i] * x[k];
            }
            x[i] = s / l[i * d + i];
        }
        for i in 0..d {
            inv[i * d + col] = x[i];
        }
    }
    inv
}

impl DesignState {
    /// Build the state at the given weights by dense factorization.
    pub fn new(vectors: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::ContractViolation("no measurement vectors".into()));
        }
        let d = vectors[0].len();
        if vectors.iter().any(|a| a.len() != d) || weights.len() != n {
            return Err(Error::ContractViolation("dimension mismatch".into()));
        }
        let mut state = DesignState {
            vectors,
            weights,
            v_inv: vec![0.0; d * d],
            log_det: 0.0,
            grad: vec![0.0; n],
            dim: d,
            steps_since_refresh: 0,
            refresh_period: REFRESH_PERIOD,
        };
        state.refresh()?;
        Ok(state)
    }

    /// Uniform start `x0 = 1/n`.
    pub fn uniform(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let n = vectors.len();
        DesignState::new(vectors, vec![1.0 / n as f64; n])
    }

    /// Override how many rank-1 steps run between dense refreshes
    /// (`u32::MAX` disables refreshing; drift tests use this).
    pub fn with_refresh_period(mut self, period: u32) -> Self {
        self.refresh_period = period.max(1);
        self
    }

    /// Dense recomputation of `V^{-1}`, `ln det V`, and the gradient cache.
    pub fn refresh(&mut self) -> Result<()> {
        let d = self.dim;
        let mut v = vec![0.0; d * d];
        for (a, &w) in self.vectors.iter().zip(&self.weights) {
            if w != 0.0 {
                for i in 0..d {
                    for j in 0..d {
                        v[i * d + j] += w * a[i] * a[j];
                    }
                }
            }
        }
        let l = cholesky(&v, d).ok_or_else(|| {
            Error::ContractViolation(
                "measurement vectors do not span the space (V singular)".into(),
            )
        })?;
        self.log_det = 2.0 * (0..d).map(|i| l[i * d + i].ln()).sum::<f64>();
        if !self.log_det.is_finite() {
            return Err(Error::ContractViolation("non-finite log det".into()));
        }
        self.v_inv = cholesky_inverse(&l, d);
        for (gi, a) in self.grad.iter_mut().zip(&self.vectors) {
            let va = mat_vec(&self.v_inv, d, a);
            *gi = -a.iter().zip(&va).map(|(x, y)| x * y).sum::<f64>();
        }
        self.steps_since_refresh = 0;
        Ok(())
    }

    /// `||a_i||^2_{V^{-1}}`.
    pub fn norm_vinv(&self, i: usize) -> f64 {
        -self.grad[i]
    }

    /// Frank-Wolfe gap of the design problem: `max_i ||a_i||^2_{V^{-1}} - d`.
    pub fn fw_gap(&self) -> f64 {
        let max_a = self.grad.iter().fold(f64::NEG_INFINITY, |m, &g| m.max(-g));
        max_a - self.dim as f64
    }

    /// Signed rank-1 step towards (`gamma > 0`) or away from (`gamma < 0`)
    /// vertex `i`: `x <- (1 - gamma) x + gamma e_i`, with `V^{-1}`, the log
    /// determinant and all gradient coordinates updated in `O(d^2 + n d)`.
    fn rank1_signed(&mut self, i: usize, gamma: f64) -> Result<()> {
        let d = self.dim;
        let a_norm = self.norm_vinv(i);
        let denom = 1.0 - gamma + gamma * a_norm;
        if denom <= 0.0 || 1.0 - gamma <= 0.0 {
            return Err(Error::NumericFailure(format!(
                "rank-1 update degenerate: 1 - g + g ||a||^2 = {denom}"
            )));
        }
        // det V <- (1 - g + g ||a||^2) (1 - g)^{d-1} det V
        self.log_det += denom.ln() + (d as f64 - 1.0) * (1.0 - gamma).ln();
        // w = V^{-1} a_i; correlations c_j = a_j^T V^{-1} a_i
        let w = mat_vec(&self.v_inv, d, &self.vectors[i]);
        let corr: Vec<f64> = self
            .vectors
            .iter()
            .map(|a| a.iter().zip(&w).map(|(x, y)| x * y).sum())
            .collect();
        // V^{-1} <- 1/(1-g) (V^{-1} - g w w^T / denom)
        let scale = 1.0 / (1.0 - gamma);
        for r in 0..d {
            for c in 0..d {
                self.v_inv[r * d + c] = scale * (self.v_inv[r * d + c] - gamma * w[r] * w[c] / denom);
            }
        }
        // grad_j = -||a_j||^2 <- (grad_j + g c_j^2 / denom) / (1 - g)
        for (g, &cj) in self.grad.iter_mut().zip(&corr) {
            *g = scale * (*g + gamma * cj * cj / denom);
        }
        for (j, wgt) in self.weights.iter_mut().enumerate() {
            *wgt *= 1.0 - gamma;
            if j == i {
                *wgt += gamma;
            }
        }
        self.steps_since_refresh += 1;
        if self.steps_since_refresh >= self.refresh_period {
            self.refresh()?;
        }
        Ok(())
    }
}

/// Public rank-1 update for a Frank-Wolfe step towards vertex `i` with
/// `0 <= gamma < 1`.
pub fn dopt_rank1_update(state: &mut DesignState, i: usize, gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::ContractViolation("rank-1 step needs 0 <= gamma < 1".into()));
    }
    if gamma == 0.0 {
        return Ok(());
    }
    state.rank1_signed(i, gamma)
}

#[derive(Debug, Clone)]
pub struct DoptResult {
    pub state: DesignState,
    pub iterations: u64,
    pub fw_gap: f64,
    pub converged: bool,
}

/// Solve the D-optimal design problem over the simplex from `x0 = 1/n`.
///
/// Each iteration picks `i = argmax ||a_i||^2_{V^{-1}}` and applies the
/// closed-form line-search step
/// `gamma = ((1/d) ||a_i||^2 - 1) / (||a_i||^2 - 1)` (the dimension `d`
/// in the numerator comes from the stationarity condition
/// `trace(V^{-1} V) = d`). The away variant moves weight off the support
/// atom with minimal `||a_j||^2_{V^{-1}}` when its gap dominates, with the
/// analogous closed form capped at `w_j / (1 - w_j)`.
pub fn dopt_design(
    vectors: Vec<Vec<f64>>,
    tol: f64,
    max_iters: u64,
    variant: DoptVariant,
) -> Result<DoptResult> {
    let mut state = DesignState::uniform(vectors)?;
    let d = state.dim as f64;
    let mut iterations = 0;

    for t in 0..max_iters {
        let gap = state.fw_gap();
        if gap <= tol {
            return Ok(DoptResult { state, iterations: t, fw_gap: gap, converged: true });
        }
        // Frank-Wolfe candidate: largest ||a||^2_{V^{-1}}
        let (mut fw_i, mut fw_a) = (0usize, f64::NEG_INFINITY);
        for i in 0..state.vectors.len() {
            let a = state.norm_vinv(i);
            if a > fw_a {
                fw_a = a;
                fw_i = i;
            }
        }
        // away candidate: smallest ||a||^2_{V^{-1}} on the support
        let (mut aw_i, mut aw_a) = (usize::MAX, f64::INFINITY);
        for i in 0..state.vectors.len() {
            if state.weights[i] > 0.0 {
                let a = state.norm_vinv(i);
                if a < aw_a {
                    aw_a = a;
                    aw_i = i;
                }
            }
        }
        let fw_gap_dir = fw_a - d;
        let away_gap = d - aw_a;

        let use_away = variant == DoptVariant::Afw && aw_i != usize::MAX && away_gap > fw_gap_dir;
        if use_away {
            let w = state.weights[aw_i];
            let gamma_max = if w < 1.0 { w / (1.0 - w) } else { f64::INFINITY };
            // stationary point of the away ray; beyond the cap means drop
            let gamma_star = if aw_a > 1.0 {
                (1.0 - aw_a / d) / (aw_a - 1.0)
            } else {
                f64::INFINITY
            };
            let gamma = gamma_star.min(gamma_max).min(1e12);
            state.rank1_signed(aw_i, -gamma)?;
        } else {
            let gamma = ((fw_a / d - 1.0) / (fw_a - 1.0)).clamp(0.0, 1.0 - 1e-9);
            state.rank1_signed(fw_i, gamma)?;
        }
        iterations = t + 1;
    }
    let gap = state.fw_gap();
    Ok(DoptResult { state, iterations, fw_gap: gap, converged: gap <= tol })
}

/// The design objective `f(x) = -ln det V(x)` as a plain [`Objective`]
/// (dense evaluation; gradient checks and reference solvers).
#[derive(Debug, Clone)]
pub struct LogDetObjective {
    pub vectors: Vec<Vec<f64>>,
}

impl Objective for LogDetObjective {
    fn value(&self, x: &Point) -> f64 {
        let d = self.vectors[0].len();
        let mut v = vec![0.0; d * d];
        for (a, &w) in self.vectors.iter().zip(x.coords()) {
            for i in 0..d {
                for j in 0..d {
                    v[i * d + j] += w * a[i] * a[j];
                }
            }
        }
        match cholesky(&v, d) {
            Some(l) => -2.0 * (0..d).map(|i| l[i * d + i].ln()).sum::<f64>(),
            None => f64::INFINITY,
        }
    }

    fn gradient(&self, x: &Point) -> Point {
        let d = self.vectors[0].len();
        let mut v = vec![0.0; d * d];
        for (a, &w) in self.vectors.iter().zip(x.coords()) {
            for i in 0..d {
                for j in 0..d {
                    v[i * d + j] += w * a[i] * a[j];
                }
            }
        }
        let l = cholesky(&v, d).expect("V(x) must be positive definite");
        let inv = cholesky_inverse(&l, d);
        let g: Vec<f64> = self
            .vectors
            .iter()
            .map(|a| {
                let va = mat_vec(&inv, d, a);
                -a.iter().zip(&va).map(|(p, q)| p * q).sum::<f64>()
            })
            .collect();
        Point::new(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_two_vector_example() {
        // d = 1, a = (2, 1), x0 = (0.5, 0.5): ||a_1||^2_{V^{-1}} = 1.6,
        // closed-form gamma = (1.6 - 1)/(1.6 - 1) = 1 (clamped), x -> e_1
        let state = DesignState::uniform(vec![vec![2.0], vec![1.0]]).unwrap();
        assert!((state.norm_vinv(0) - 1.6).abs() < 1e-12);
        let res = dopt_design(vec![vec![2.0], vec![1.0]], 1e-9, 50, DoptVariant::Fw).unwrap();
        assert!(res.converged);
        assert!(res.state.weights[0] > 1.0 - 1e-6);
    }

    #[test]
    fn scaled_coordinate_vectors_are_already_optimal() {
        // a_i = c_i e_i: det V = prod x_i c_i^2, maximized at x = 1/d
        let vectors = vec![
            vec![3.0, 0.0, 0.0],
            vec![0.0, 0.5, 0.0],
            vec![0.0, 0.0, 7.0],
        ];
        let state = DesignState::uniform(vectors).unwrap();
        assert!(state.fw_gap().abs() <= 1e-9);
    }

    #[test]
    fn rank1_matches_dense_recomputation() {
        let vectors: Vec<Vec<f64>> = (0..10)
            .map(|i| {
                (0..4)
                    .map(|j| (((i * 13 + j * 7) % 17) as f64 / 17.0 - 0.4) + 0.2)
                    .collect()
            })
            .collect();
        let mut state = DesignState::uniform(vectors.clone()).unwrap();
        dopt_rank1_update(&mut state, 3, 0.3).unwrap();
        let mut dense = DesignState::new(vectors, state.weights.clone()).unwrap();
        dense.refresh().unwrap();
        assert!((state.log_det - dense.log_det).abs() <= 1e-8 * (1.0 + dense.log_det.abs()));
        for (a, b) in state.v_inv.iter().zip(&dense.v_inv) {
            assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()));
        }
        for (a, b) in state.grad.iter().zip(&dense.grad) {
            assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn gamma_zero_is_a_no_op() {
        let vectors = vec![vec![1.0, 0.2], vec![0.3, 1.0], vec![0.5, 0.5]];
        let mut state = DesignState::uniform(vectors).unwrap();
        let before = state.clone();
        dopt_rank1_update(&mut state, 1, 0.0).unwrap();
        assert_eq!(state.log_det, before.log_det);
        assert_eq!(state.weights, before.weights);
    }

    #[test]
    fn rank_deficient_vectors_are_rejected() {
        // two vectors spanning only a line in R^2
        let err = DesignState::uniform(vec![vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert!(matches!(err, Err(Error::ContractViolation(_))));
    }

    #[test]
    fn monotone_log_det_under_closed_form_steps() {
        let vectors: Vec<Vec<f64>> = (0..20)
            .map(|i| (0..3).map(|j| (((i * 7 + j * 11) % 13) as f64 / 13.0) - 0.3).collect())
            .collect();
        let mut state = DesignState::uniform(vectors).unwrap();
        let d = state.dim as f64;
        let mut prev = -state.log_det;
        for _ in 0..100 {
            if state.fw_gap() <= 1e-10 {
                break;
            }
            let (mut i, mut a) = (0usize, f64::NEG_INFINITY);
            for j in 0..state.vectors.len() {
                if state.norm_vinv(j) > a {
                    a = state.norm_vinv(j);
                    i = j;
                }
            }
            let gamma = ((a / d - 1.0) / (a - 1.0)).clamp(0.0, 1.0 - 1e-9);
            dopt_rank1_update(&mut state, i, gamma).unwrap();
            let cur = -state.log_det;
            assert!(cur <= prev + 1e-10, "objective increased");
            prev = cur;
        }
    }
}
