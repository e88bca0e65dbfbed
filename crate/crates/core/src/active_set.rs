//! Explicit convex decompositions of iterates: atoms plus barycentric
//! weights, with the coefficient updates used by the away-step and pairwise
//! runners.

use crate::error::{Error, Result};
use crate::point::Point;

/// Weights below this threshold are dropped and the rest renormalized.
/// Keeping phantom atoms around artificially enlarges the away gap.
pub const WEIGHT_EPS: f64 = 1e-12;

/// An active set: `iterate = sum_i weights[i] * atoms[i]` with positive
/// weights summing to one and pairwise-distinct atoms.
#[derive(Debug, Clone)]
pub struct ActiveSet {
    atoms: Vec<Point>,
    weights: Vec<f64>,
    iterate: Point,
}

/// A coefficient update applied by [`ActiveSet::update`].
#[derive(Debug, Clone)]
pub enum ActiveSetUpdate {
    /// `x <- x + gamma (v - x)`: scale all weights by `1 - gamma`, add
    /// `gamma` to `v`. At `gamma = 1` the set collapses to `{v}`.
    FwStep { vertex: Point, gamma: f64 },
    /// `x <- x - gamma (a - x)`: scale all weights by `1 + gamma`,
    /// subtract `gamma` from `a`. At `gamma = gamma_max = w_a/(1 - w_a)`
    /// the atom is dropped.
    AwayStep { vertex: Point, gamma: f64 },
    /// Remove an atom and renormalize the remaining weights.
    Drop { vertex: Point },
    /// Move `gamma` weight directly from `from` onto `to` (pairwise step;
    /// `gamma = w_from` swaps the atom out entirely).
    Pairwise { from: Point, to: Point, gamma: f64 },
}

impl ActiveSet {
    /// Singleton decomposition `{x0: 1}`.
    pub fn singleton(x0: Point) -> Self {
        ActiveSet { iterate: x0.clone(), atoms: vec![x0], weights: vec![1.0] }
    }

    pub fn from_parts(atoms: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::ContractViolation("empty or mismatched active set".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::ContractViolation("weights must be positive and sum to 1".into()));
        }
        let mut s = ActiveSet {
            iterate: Point::zeros(atoms[0].dim()).with_shape(atoms[0].shape()),
            atoms,
            weights,
        };
        s.recompute_iterate();
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iterate(&self) -> &Point {
        &self.iterate
    }

    pub fn weight_of(&self, atom: &Point) -> Option<f64> {
        self.position(atom).map(|i| self.weights[i])
    }

    fn position(&self, atom: &Point) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// Index of the atom maximizing `<grad, atom>` (the away atom);
    /// lowest index on ties.
    pub fn away_atom(&self, grad: &Point) -> (usize, f64) {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (i, a) in self.atoms.iter().enumerate() {
            let v = grad.dot(a);
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        (best, best_val)
    }

    /// Index of the atom minimizing `<grad, atom>` (the in-set Frank-Wolfe
    /// atom used by the blended runner); lowest index on ties.
    pub fn towards_atom(&self, grad: &Point) -> (usize, f64) {
        let mut best = 0;
        let mut best_val = f64::INFINITY;
        for (i, a) in self.atoms.iter().enumerate() {
            let v = grad.dot(a);
            if v < best_val {
                best_val = v;
                best = i;
            }
        }
        (best, best_val)
    }

    /// Apply a coefficient update, prune weights below [`WEIGHT_EPS`],
    /// renormalize, and recompute the iterate.
    pub fn update(&mut self, update: ActiveSetUpdate) -> Result<()> {
        match update {
            ActiveSetUpdate::FwStep { vertex, gamma } => {
                if !(0.0..=1.0 + 1e-12).contains(&gamma) {
                    return Err(Error::ContractViolation(format!(
                        "fw step gamma {gamma} outside [0, 1]"
                    )));
                }
                let gamma = gamma.min(1.0);
                if gamma == 1.0 {
                    *self = ActiveSet::singleton(vertex);
                    return Ok(());
                }
                for w in &mut self.weights {
                    *w *= 1.0 - gamma;
                }
                match self.position(&vertex) {
                    Some(i) => self.weights[i] += gamma,
                    None => {
                        self.atoms.push(vertex);
                        self.weights.push(gamma);
                    }
                }
            }
            ActiveSetUpdate::AwayStep { vertex, gamma } => {
                let i = self.position(&vertex).ok_or_else(|| {
                    Error::ContractViolation("away atom not in the active set".into())
                })?;
                let w = self.weights[i];
                if w >= 1.0 {
                    return Err(Error::ContractViolation(
                        "away step from a singleton set".into(),
                    ));
                }
                let gamma_max = w / (1.0 - w);
                if gamma < 0.0 || gamma > gamma_max * (1.0 + 1e-9) + 1e-15 {
                    return Err(Error::ContractViolation(format!(
                        "away gamma {gamma} exceeds gamma_max {gamma_max}"
                    )));
                }
                let gamma = gamma.min(gamma_max);
                for w in &mut self.weights {
                    *w *= 1.0 + gamma;
                }
                self.weights[i] -= gamma;
            }
            ActiveSetUpdate::Drop { vertex } => {
                let i = self.position(&vertex).ok_or_else(|| {
                    Error::ContractViolation("dropped atom not in the active set".into())
                })?;
                if self.atoms.len() == 1 {
                    return Err(Error::ContractViolation(
                        "cannot drop the last atom".into(),
                    ));
                }
                self.atoms.remove(i);
                self.weights.remove(i);
            }
            ActiveSetUpdate::Pairwise { from, to, gamma } => {
                let i = self.position(&from).ok_or_else(|| {
                    Error::ContractViolation("pairwise source atom not active".into())
                })?;
                let w = self.weights[i];
                if gamma < 0.0 || gamma > w * (1.0 + 1e-9) + 1e-15 {
                    return Err(Error::ContractViolation(format!(
                        "pairwise gamma {gamma} exceeds the source weight {w}"
                    )));
                }
                let gamma = gamma.min(w);
                self.weights[i] -= gamma;
                match self.position(&to) {
                    Some(j) => self.weights[j] += gamma,
                    None => {
                        self.atoms.push(to);
                        self.weights.push(gamma);
                    }
                }
            }
        }
        self.prune_and_renormalize();
        self.recompute_iterate();
        Ok(())
    }

    /// Directly overwrite the weights (barycentric inner solvers).
    /// Length must match; pruning and renormalization apply.
    pub fn set_weights(&mut self, weights: Vec<f64>) -> Result<()> {
        if weights.len() != self.atoms.len() {
            return Err(Error::ContractViolation("weight length mismatch".into()));
        }
        if weights.iter().any(|&w| w < -1e-12) {
            return Err(Error::ContractViolation("negative weight".into()));
        }
        self.weights = weights.into_iter().map(|w| w.max(0.0)).collect();
        self.prune_and_renormalize();
        self.recompute_iterate();
        Ok(())
    }

    fn prune_and_renormalize(&mut self) {
        let mut i = 0;
        while i < self.atoms.len() {
            if self.weights[i] < WEIGHT_EPS && self.atoms.len() > 1 {
                self.atoms.remove(i);
                self.weights.remove(i);
            } else {
                i += 1;
            }
        }
        let sum: f64 = self.weights.iter().sum();
        if sum > 0.0 {
            for w in &mut self.weights {
                *w /= sum;
            }
        }
    }

    fn recompute_iterate(&mut self) {
        let mut x = Point::zeros(self.atoms[0].dim()).with_shape(self.atoms[0].shape());
        for (a, &w) in self.atoms.iter().zip(&self.weights) {
            x.add_scaled(w, a);
        }
        self.iterate = x;
    }

    /// Check the decomposition invariants; used by runners in debug builds
    /// and by tests.
    pub fn check_invariants(&self) -> Result<()> {
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::NumericFailure(format!("weights sum to {sum}")));
        }
        let mut recon = Point::zeros(self.atoms[0].dim());
        for (a, &w) in self.atoms.iter().zip(&self.weights) {
            recon.add_scaled(w, a);
        }
        if recon.max_abs_diff(&self.iterate) > 1e-10 {
            return Err(Error::NumericFailure("iterate does not match decomposition".into()));
        }
        for (i, a) in self.atoms.iter().enumerate() {
            for b in &self.atoms[i + 1..] {
                if a == b {
                    return Err(Error::NumericFailure("duplicate atoms".into()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fw_step_with_unit_gamma_collapses() {
        let mut s = ActiveSet::singleton(Point::unit(3, 0));
        s.update(ActiveSetUpdate::FwStep { vertex: Point::unit(3, 1), gamma: 1.0 }).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.iterate(), &Point::unit(3, 1));
    }

    #[test]
    fn fw_step_splits_weight() {
        let mut s = ActiveSet::singleton(Point::unit(3, 0));
        s.update(ActiveSetUpdate::FwStep { vertex: Point::unit(3, 1), gamma: 1.0 / 3.0 })
            .unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.weights()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.weights()[1] - 1.0 / 3.0).abs() < 1e-15);
        s.check_invariants().unwrap();
    }

    #[test]
    fn away_step_at_gamma_max_drops_the_atom() {
        let mut s = ActiveSet::from_parts(
            vec![Point::unit(3, 0), Point::unit(3, 1)],
            vec![0.25, 0.75],
        )
        .unwrap();
        let gamma_max = 0.25 / 0.75;
        s.update(ActiveSetUpdate::AwayStep { vertex: Point::unit(3, 0), gamma: gamma_max })
            .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.atoms()[0], Point::unit(3, 1));
        s.check_invariants().unwrap();
    }

    #[test]
    fn out_of_range_gamma_is_rejected() {
        let mut s = ActiveSet::from_parts(
            vec![Point::unit(2, 0), Point::unit(2, 1)],
            vec![0.5, 0.5],
        )
        .unwrap();
        let err = s.update(ActiveSetUpdate::AwayStep { vertex: Point::unit(2, 0), gamma: 1.5 });
        assert!(matches!(err, Err(Error::ContractViolation(_))));
    }

    #[test]
    fn pairwise_moves_weight() {
        let mut s = ActiveSet::from_parts(
            vec![Point::unit(3, 0), Point::unit(3, 1)],
            vec![0.6, 0.4],
        )
        .unwrap();
        s.update(ActiveSetUpdate::Pairwise {
            from: Point::unit(3, 0),
            to: Point::unit(3, 2),
            gamma: 0.6,
        })
        .unwrap();
        assert_eq!(s.len(), 2); // atom 0 swapped out entirely
        s.check_invariants().unwrap();
    }
}
