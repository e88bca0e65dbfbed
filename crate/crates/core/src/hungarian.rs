//! O(n^3) Hungarian algorithm for dense min-cost assignment.
//!
//! Shortest-augmenting-path formulation with row/column potentials
//! (Jonker-Volgenant style). Deterministic: rows are processed in order and
//! ties resolve to the lowest column index.

/// Solves `min sum_i cost[i][perm[i]]` over permutations.
/// Returns the column assigned to each row.
///
/// `cost` must be square. Entries may be any finite reals.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    assert!(cost.iter().all(|row| row.len() == n));
    if n == 0 {
        return Vec::new();
    }
    // Potentials and matching, 1-based with a dummy 0 slot for the scan.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    // way[j]: previous column on the alternating path to column j
    let mut match_col = vec![usize::MAX; n + 1]; // row matched to column j (MAX = free)

    for i in 0..n {
        // Augment starting from row i via a virtual column n.
        let mut j_cur = n;
        match_col[n] = i;
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut way = vec![n; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j_cur] = true;
            let i_cur = match_col[j_cur];
            let mut delta = f64::INFINITY;
            let mut j_next = n;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                let reduced = cost[i_cur][j] - u[i_cur] - v[j];
                if reduced < min_to[j] {
                    min_to[j] = reduced;
                    way[j] = j_cur;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j_next = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[match_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j_cur = j_next;
            if match_col[j_cur] == usize::MAX {
                break;
            }
        }
        // Unwind the alternating path.
        while j_cur != n {
            let j_prev = way[j_cur];
            match_col[j_cur] = match_col[j_prev];
            j_cur = j_prev;
        }
    }

    let mut perm = vec![usize::MAX; n];
    for j in 0..n {
        if match_col[j] != usize::MAX {
            perm[match_col[j]] = j;
        }
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(cost: &[Vec<f64>]) -> f64 {
        fn go(cost: &[Vec<f64>], row: usize, used: &mut [bool]) -> f64 {
            if row == cost.len() {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for j in 0..cost.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(cost[row][j] + go(cost, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        go(cost, 0, &mut vec![false; cost.len()])
    }

    fn total(cost: &[Vec<f64>], perm: &[usize]) -> f64 {
        perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum()
    }

    #[test]
    fn two_by_two() {
        let cost = vec![vec![1.0, 2.0], vec![3.0, 0.0]];
        let perm = min_cost_assignment(&cost);
        assert_eq!(perm, vec![0, 1]); // identity, total 1
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        // deterministic LCG, no external RNG needed here
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for n in 1..=5 {
            for _ in 0..50 {
                let cost: Vec<Vec<f64>> =
                    (0..n).map(|_| (0..n).map(|_| next() * 10.0 - 5.0).collect()).collect();
                let perm = min_cost_assignment(&cost);
                let mut seen = vec![false; n];
                for &j in &perm {
                    assert!(!seen[j]);
                    seen[j] = true;
                }
                let bf = brute_force(&cost);
                assert!((total(&cost, &perm) - bf).abs() <= 1e-9 * (1.0 + bf.abs()));
            }
        }
    }
}
