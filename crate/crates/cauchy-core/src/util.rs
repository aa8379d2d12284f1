//! Small numeric helpers: fixed-order pairwise summation and the
//! thread-count knob.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pairwise summation in index order. The recursion tree is a function of
/// the slice length alone, so the result is bitwise reproducible no matter
/// how the values were produced.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= 32 {
        let mut acc = Complex64::new(0.0, 0.0);
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise summation of real values in index order.
pub fn pairwise_sum_real(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_real(&values[..mid]) + pairwise_sum_real(&values[mid..])
}

/// Smallest power of two `>= n` (and `>= 1`).
pub fn next_power_of_two(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Thread cap from the `CAUCHY_THREADS` environment variable; defaults to
/// the available parallelism capped at 8. Invalid values are a
/// configuration error.
pub fn thread_cap() -> Result<usize> {
    match std::env::var("CAUCHY_THREADS") {
        Err(_) => Ok(std::thread::available_parallelism().map(usize::from).unwrap_or(1).min(8)),
        Ok(raw) => {
            let n: usize = raw
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("CAUCHY_THREADS must be a positive integer, got {raw:?}")))?;
            if n == 0 || n > 256 {
                return Err(Error::Config(format!(
                    "CAUCHY_THREADS must be in 1..=256, got {n}"
                )));
            }
            Ok(n)
        }
    }
}

/// Runs `f(start, chunk)` over disjoint chunks of `0..len` on up to
/// `threads` scoped threads, writing into the matching chunk of `out`.
/// Each element depends only on its own index, so the output is identical
/// for every thread count.
pub fn parallel_fill<T, F>(out: &mut [T], threads: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    let len = out.len();
    let threads = threads.max(1).min(len.max(1));
    if threads == 1 || len < 1024 {
        f(0, out);
        return;
    }
    let chunk = len.div_ceil(threads);
    std::thread::scope(|scope| {
        for (i, part) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || f(i * chunk, part));
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: Vec<Complex64> = (0..100).map(|k| Complex64::new(k as f64, -(k as f64))).collect();
        let naive: Complex64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).norm() < 1e-9);
    }

    #[test]
    fn pairwise_is_deterministic() {
        let v: Vec<Complex64> =
            (0..1000).map(|k| Complex64::new((k as f64).sin(), (k as f64).cos())).collect();
        assert_eq!(pairwise_sum(&v), pairwise_sum(&v.clone()));
    }

    #[test]
    fn parallel_fill_is_thread_count_independent() {
        let mut a = vec![0.0f64; 5000];
        let mut b = vec![0.0f64; 5000];
        let job = |start: usize, out: &mut [f64]| {
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = ((start + i) as f64).sqrt().sin();
            }
        };
        parallel_fill(&mut a, 1, job);
        parallel_fill(&mut b, 4, job);
        assert_eq!(a, b);
    }

    #[test]
    fn power_of_two_helpers() {
        assert_eq!(next_power_of_two(260), 512);
        assert!(is_power_of_two(256));
        assert!(!is_power_of_two(260));
    }
}
