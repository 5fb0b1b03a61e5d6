// SPDX-License-Identifier: Apache-2.0

//! Prime sieves used by the analytic formulas and the branch profiler.

/// Sieve of Eratosthenes. `is_prime[n]` for `n` in `0..=n_max`.
pub fn prime_flags(n_max: usize) -> Vec<bool> {
    let mut flags = vec![true; n_max + 1];
    flags[0] = false;
    if n_max >= 1 {
        flags[1] = false;
    }
    let mut p = 2;
    while p * p <= n_max {
        if flags[p] {
            let mut k = p * p;
            while k <= n_max {
                flags[k] = false;
                k += p;
            }
        }
        p += 1;
    }
    flags
}

/// All primes `<= n_max` in increasing order.
pub fn primes_up_to(n_max: usize) -> Vec<usize> {
    prime_flags(n_max)
        .iter()
        .enumerate()
        .filter_map(|(n, &p)| p.then_some(n))
        .collect()
}

/// Prime counting function π(n).
pub fn prime_count(n_max: usize) -> usize {
    prime_flags(n_max).iter().filter(|&&p| p).count()
}

/// Deterministic primality by trial division, for scalar argument checks.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest-prime-factor table; `spf[0] = spf[1] = 0`.
pub fn smallest_prime_factors(n_max: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n_max + 1];
    for p in 2..=n_max {
        if spf[p] != 0 {
            continue;
        }
        let mut k = p;
        while k <= n_max {
            if spf[k] == 0 {
                spf[k] = p as u32;
            }
            k += p;
        }
    }
    spf
}

/// Prime factorisation `[(p, μ)]` of `n` using an spf table.
pub fn factorize(mut n: usize, spf: &[u32]) -> Vec<(usize, u32)> {
    let mut out: Vec<(usize, u32)> = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut mu = 0;
        while n.is_multiple_of(p) {
            n /= p;
            mu += 1;
        }
        out.push((p, mu));
    }
    out
}

/// Ω(n): number of prime factors counted with multiplicity.
pub fn big_omega(n: usize, spf: &[u32]) -> u32 {
    factorize(n, spf).iter().map(|&(_, mu)| mu).sum()
}
