//! Prime and prime-power predicates used by the arithmetic helpers.
//!
//! Desk-scale inputs (n well below 2^40), so trial division is adequate
//! and keeps everything exactly reproducible.

/// Deterministic primality test by trial division (6k±1 wheel).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// If n = p^k with p prime and k ≥ 1, return (p, k).
pub fn prime_power_base(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    // the smallest prime factor of a prime power is its base
    let p = smallest_prime_factor(n);
    let mut m = n;
    let mut k = 0u32;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    if m == 1 {
        Some((p, k))
    } else {
        None
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    if n % 3 == 0 {
        return 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        if n % (d + 2) == 0 {
            return d + 2;
        }
        d += 6;
    }
    n
}

/// All primes ≤ limit by Eratosthenes (used by tests to cross-validate
/// the trial-division predicates).
pub fn sieve_primes(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            primes.push(n as u64);
            let mut m = n * n;
            while m <= limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    primes
}
