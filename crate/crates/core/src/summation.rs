//! Deterministic compensated summation.
//!
//! Reductions over quadrature nodes are computed by first collecting the terms in
//! node order and then summing with a fixed pairwise tree whose leaves are
//! Kahan–Babuška (Neumaier) blocks. The result depends only on the term order,
//! never on how many worker threads produced the terms.

const LEAF: usize = 64;

/// Neumaier-compensated sum of a slice.
pub fn neumaier_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for &t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Pairwise sum with compensated leaves.
pub fn pairwise_sum(terms: &[f64]) -> f64 {
    if terms.len() <= LEAF {
        return neumaier_sum(terms);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

/// Sum of `f(i)` for `i in 0..len`, evaluated in parallel and reduced deterministically.
pub fn parallel_sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    use rayon::prelude::*;
    let terms: Vec<f64> = (0..len).into_par_iter().map(f).collect();
    pairwise_sum(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut terms = vec![1.0e16, 1.0, -1.0e16];
        assert_eq!(neumaier_sum(&terms), 1.0);
        terms = vec![0.1; 10_000];
        assert!((pairwise_sum(&terms) - 1000.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_sum_is_independent_of_thread_count() {
        let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| parallel_sum(100_003, f));
        let b = four.install(|| parallel_sum(100_003, f));
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
