//! Small-integer number theory: primality and trial-division factoring.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// Prime factors of `n` with multiplicity, ascending. Empty for `n <= 1`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    while n.is_multiple_of(2) {
        out.push(2);
        n /= 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
        d += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    let f = prime_factors(n);
    f.windows(2).all(|w| w[0] != w[1])
}

/// Inverse of `a` modulo a prime `p`, for `a` not divisible by `p`.
pub fn inverse_mod(a: i128, p: i128) -> i128 {
    let (mut old_r, mut r) = (a.rem_euclid(p), p);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(p)
}
