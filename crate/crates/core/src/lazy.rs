//! Weak-separation oracle: the lazy relaxation of the LMO with an LRU
//! vertex cache.

use crate::error::Result;
use crate::point::Point;
use crate::region::FeasibleRegion;

/// LRU cache of previously returned vertices. Front = most recently used.
#[derive(Debug, Clone)]
pub struct WeakSeparationCache {
    atoms: Vec<Point>,
    capacity: usize,
    pub hits: u64,
    pub misses: u64,
}

impl Default for WeakSeparationCache {
    fn default() -> Self {
        WeakSeparationCache::with_capacity(256)
    }
}

impl WeakSeparationCache {
    pub fn with_capacity(capacity: usize) -> Self {
        assert!(capacity > 0);
        WeakSeparationCache { atoms: Vec::new(), capacity, hits: 0, misses: 0 }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    fn promote_or_insert(&mut self, v: &Point) {
        if let Some(i) = self.atoms.iter().position(|a| a == v) {
            let a = self.atoms.remove(i);
            self.atoms.insert(0, a);
        } else {
            self.atoms.insert(0, v.clone());
            if self.atoms.len() > self.capacity {
                self.atoms.pop(); // evict least recently used
            }
        }
    }
}

/// Answer of the weak-separation oracle.
#[derive(Debug, Clone)]
pub enum SeparationAnswer {
    /// A vertex `v` with `<c, x - v> > phi / k`.
    Positive(Point),
    /// No feasible point beats the threshold; carries the exact gap
    /// `<c, x - lmo(c)>` from the certifying full LMO call.
    Negative(f64),
}

/// Weak separation: search the cache for a vertex improving by more than
/// `phi / k`; fall back to one true LMO call; a negative answer certifies
/// `<c, x - z> <= phi` for all feasible `z` and returns the exact gap.
///
/// Returns the answer and the number of true LMO calls performed (0 or 1).
pub fn weak_separation(
    region: &FeasibleRegion,
    cache: &mut WeakSeparationCache,
    c: &Point,
    x: &Point,
    phi: f64,
    k: f64,
) -> Result<(SeparationAnswer, u64)> {
    debug_assert!(phi >= 0.0, "phi must be nonnegative");
    debug_assert!(k >= 1.0);
    let threshold = phi / k;
    for (i, v) in cache.atoms.iter().enumerate() {
        if c.dot(&x.sub(v)) > threshold {
            let v = cache.atoms.remove(i);
            cache.atoms.insert(0, v.clone());
            cache.hits += 1;
            return Ok((SeparationAnswer::Positive(v), 0));
        }
    }
    cache.misses += 1;
    let v = region.lmo(c)?;
    let gap = c.dot(&x.sub(&v));
    if gap > threshold {
        cache.promote_or_insert(&v);
        Ok((SeparationAnswer::Positive(v), 1))
    } else {
        Ok((SeparationAnswer::Negative(gap), 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Objective;
    use crate::objectives::DiagQuadratic;

    #[test]
    fn positive_answer_via_one_lmo() {
        // f = x^2 on [-1,1] at x = 1: c = 2, gap 4 > phi = 2
        let region = FeasibleRegion::Box { lower: vec![-1.0], upper: vec![1.0] };
        let mut cache = WeakSeparationCache::with_capacity(4);
        let c = Point::new(vec![2.0]);
        let x = Point::new(vec![1.0]);
        let (ans, lmo_calls) = weak_separation(&region, &mut cache, &c, &x, 2.0, 1.0).unwrap();
        match ans {
            SeparationAnswer::Positive(v) => assert_eq!(v.coords(), &[-1.0]),
            _ => panic!("expected positive"),
        }
        assert_eq!(lmo_calls, 1);

        // repeated query now hits the cache: zero LMO calls
        let (ans, lmo_calls) = weak_separation(&region, &mut cache, &c, &x, 2.0, 1.0).unwrap();
        assert!(matches!(ans, SeparationAnswer::Positive(_)));
        assert_eq!(lmo_calls, 0);
        assert_eq!(cache.hits, 1);
    }

    #[test]
    fn negative_at_the_optimum() {
        let f = DiagQuadratic::norm_sq(1);
        let region = FeasibleRegion::Box { lower: vec![-1.0], upper: vec![1.0] };
        let mut cache = WeakSeparationCache::default();
        let x = Point::new(vec![0.0]);
        let c = f.gradient(&x);
        let (ans, _) = weak_separation(&region, &mut cache, &c, &x, 0.5, 1.0).unwrap();
        match ans {
            SeparationAnswer::Negative(g) => assert_eq!(g, 0.0),
            _ => panic!("expected negative"),
        }
    }

    #[test]
    fn lru_eviction() {
        let region = FeasibleRegion::Simplex { n: 4 };
        let mut cache = WeakSeparationCache::with_capacity(2);
        let x = Point::new(vec![0.25; 4]);
        // three different costs produce three different vertices
        for i in 0..3 {
            let mut c = vec![1.0; 4];
            c[i] = -1.0;
            let _ = weak_separation(&region, &mut cache, &Point::new(c), &x, 1e-6, 1.0).unwrap();
        }
        assert_eq!(cache.len(), 2);
    }
}
