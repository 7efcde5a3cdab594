//! Small numerical checks used by the simulation studies.

use alloc::vec::Vec;

/// Kolmogorov-Smirnov distance `sup |F_n - F|` between a sample and a
/// continuous distribution function.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut sorted: Vec<f64> = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Kendall's tau-a: `(concordant - discordant) / (n choose 2)`, with tied
/// pairs counting as neither. `O(n log n)` (Knight's merge-sort count).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let total = (n * (n - 1) / 2) as f64;
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let tied_runs = |eq: &dyn Fn(usize, usize) -> bool| {
        let mut ties = 0usize;
        let mut run = 1usize;
        for i in 1..=n {
            if i < n && eq(i - 1, i) {
                run += 1;
            } else {
                ties += run * (run - 1) / 2;
                run = 1;
            }
        }
        ties
    };
    let x_ties = tied_runs(&|a, b| pairs[a].0 == pairs[b].0);
    let joint_ties = tied_runs(&|a, b| pairs[a] == pairs[b]);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut scratch = ys.clone();
    let swaps = merge_count(&mut ys, &mut scratch);
    let y_ties = {
        let mut ties = 0usize;
        let mut run = 1usize;
        for i in 1..=n {
            if i < n && ys[i - 1] == ys[i] {
                run += 1;
            } else {
                ties += run * (run - 1) / 2;
                run = 1;
            }
        }
        ties
    };
    let n0 = n * (n - 1) / 2;
    let net = n0 as f64 - x_ties as f64 - y_ties as f64 + joint_ties as f64 - 2.0 * swaps as f64;
    net / total
}

/// Stable merge sort of `v` returning the number of strict inversions.
fn merge_count(v: &mut [f64], scratch: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = v.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        merge_count(left, sl) + merge_count(right, sr)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            scratch[k] = v[j];
            count += (mid - i) as u64;
            j += 1;
        } else {
            scratch[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&scratch[..n]);
    count
}

/// Kendall's tau-a via the `O(n²)` pair count.
pub fn kendall_tau_naive(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let mut s: i64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = (x[i] - x[j]) * (y[i] - y[j]);
            s += if a > 0.0 {
                1
            } else if a < 0.0 {
                -1
            } else {
                0
            };
        }
    }
    s as f64 / (n * (n - 1) / 2) as f64
}

/// Mean and `1/n` variance in two passes.
pub fn mean_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_a_grid_is_half_step() {
        let sample: Vec<f64> = (0..10).map(|i| (i as f64 + 0.5) / 10.0).collect();
        let d = ks_distance(&sample, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.05).abs() < 1e-12);
    }

    #[test]
    fn kendall_fast_matches_pair_count() {
        let x = [1.0, 3.0, 2.0, 2.0, 5.0, 4.0, 1.0, 3.0];
        let y = [2.0, 1.0, 2.0, 4.0, 3.0, 3.0, 0.0, 1.0];
        assert!((kendall_tau(&x, &y) - kendall_tau_naive(&x, &y)).abs() < 1e-15);
    }

    #[test]
    fn kendall_extremes() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall_tau(&x, &x), 1.0);
        assert_eq!(kendall_tau(&x, &[4.0, 3.0, 2.0, 1.0]), -1.0);
    }
}
