//! Deterministic parallel reduction primitives.
//!
//! Everything here is built around one rule: the result must be bitwise
//! identical for any worker count.  Work is split into fixed-size chunks
//! (2¹⁶ items) regardless of workers; each chunk is reduced sequentially
//! with compensated (Kahan) summation; chunk partials are then combined
//! by a pairwise tree in chunk-index order.  Workers only affect *which
//! thread* computes a chunk, never the arithmetic.

use std::sync::atomic::{AtomicUsize, Ordering};

/// Fixed chunk length; independent of worker count by design.
pub const CHUNK: usize = 1 << 16;

/// Kahan compensated accumulator for one f64 lane.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Map contiguous index chunks to values, in parallel, preserving chunk
/// order in the output.  `f` receives the chunk's index range.
///
/// Chunk boundaries depend only on `n`, so the per-chunk results are
/// identical for any `workers ≥ 1`; the returned Vec is ordered by chunk
/// index, making any subsequent fold deterministic.
pub fn map_chunks<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync,
{
    let n_chunks = n.div_ceil(CHUNK);
    if n_chunks == 0 {
        return Vec::new();
    }
    let workers = workers.max(1).min(n_chunks);
    let mut out: Vec<Option<T>> = (0..n_chunks).map(|_| None).collect();
    if workers == 1 {
        for (c, slot) in out.iter_mut().enumerate() {
            let lo = c * CHUNK;
            *slot = Some(f(lo..(lo + CHUNK).min(n)));
        }
    } else {
        let next = AtomicUsize::new(0);
        let slots = std::sync::Mutex::new(&mut out);
        // hand out chunks dynamically; order is restored by writing into
        // the chunk's slot, so scheduling cannot affect the result
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let c = next.fetch_add(1, Ordering::Relaxed);
                    if c >= n_chunks {
                        break;
                    }
                    let lo = c * CHUNK;
                    let v = f(lo..(lo + CHUNK).min(n));
                    let mut guard = slots.lock().unwrap();
                    guard[c] = Some(v);
                });
            }
        });
    }
    out.into_iter().map(|s| s.unwrap()).collect()
}

/// Pairwise tree fold over lanes of `[f64; N]`, in slice order.
pub fn tree_combine<const N: usize>(mut parts: Vec<[f64; N]>) -> [f64; N] {
    if parts.is_empty() {
        return [0.0; N];
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        for pair in parts.chunks(2) {
            if pair.len() == 2 {
                let mut s = [0.0; N];
                for i in 0..N {
                    s[i] = pair[0][i] + pair[1][i];
                }
                next.push(s);
            } else {
                next.push(pair[0]);
            }
        }
        parts = next;
    }
    parts[0]
}

/// Deterministic parallel sum of `term(i)` for i in 0..n, with N lanes
/// (e.g. N = 2 for a complex sum).  Chunked Kahan + pairwise combine.
pub fn sum_chunked<const N: usize, F>(n: usize, workers: usize, term: F) -> [f64; N]
where
    F: Fn(usize) -> [f64; N] + Sync,
{
    let parts = map_chunks(n, workers, |range| {
        let mut acc = [KahanSum::default(); N];
        for i in range {
            let v = term(i);
            for lane in 0..N {
                acc[lane].add(v[lane]);
            }
        }
        let mut out = [0.0; N];
        for lane in 0..N {
            out[lane] = acc[lane].value();
        }
        out
    });
    tree_combine(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_adversarial_input() {
        // 1 + 1e-16 repeated: naive summation loses the small terms
        let mut k = KahanSum::default();
        k.add(1.0);
        for _ in 0..1000 {
            k.add(1e-16);
        }
        assert!((k.value() - (1.0 + 1000.0 * 1e-16)).abs() < 1e-18);
    }

    #[test]
    fn identical_across_worker_counts() {
        let n = 300_000;
        let term = |i: usize| {
            let x = i as f64 * 0.001;
            [x.sin() / (1.0 + x), x.cos() / (2.0 + x)]
        };
        let base = sum_chunked::<2, _>(n, 1, term);
        for w in [2, 4, 8] {
            let v = sum_chunked::<2, _>(n, w, term);
            assert_eq!(v[0].to_bits(), base[0].to_bits(), "workers={w}");
            assert_eq!(v[1].to_bits(), base[1].to_bits(), "workers={w}");
        }
    }

    #[test]
    fn map_chunks_ordering() {
        let ids = map_chunks(CHUNK * 3 + 7, 4, |r| r.start / CHUNK);
        assert_eq!(ids, vec![0, 1, 2, 3]);
        let empty: Vec<usize> = map_chunks(0, 4, |r| r.start);
        assert!(empty.is_empty());
    }

    #[test]
    fn tree_combine_small() {
        assert_eq!(tree_combine::<1>(vec![]), [0.0]);
        assert_eq!(tree_combine(vec![[1.0], [2.0], [3.0]]), [6.0]);
    }
}
