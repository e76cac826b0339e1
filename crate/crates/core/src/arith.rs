//! Machine-integer number theory used throughout the crate.

/// `a * b mod m` without overflow.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    add_mod(a % m, m - b % m, m)
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Exponent of `p` in `n` (`n != 0`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// The idempotent of `Z/nZ` that is 1 modulo `q` and 0 modulo `n / q`,
/// where `q` is a unitary divisor of `n`.
pub fn crt_idempotent(n: u64, q: u64) -> u64 {
    let rest = n / q;
    if rest == 1 {
        return 1 % n;
    }
    let inv = inv_mod(rest % q, q).expect("unitary divisor");
    mul_mod(rest, inv, n)
}

/// Solve the simultaneous congruences `x = r_i mod m_i` (moduli need not be
/// coprime). Returns `(x, lcm)` with `0 <= x < lcm`.
pub fn crt(congruences: &[(u64, u64)]) -> Option<(u64, u64)> {
    let mut x: i128 = 0;
    let mut m: i128 = 1;
    for &(r, mi) in congruences {
        let mi = mi as i128;
        let r = r as i128 % mi;
        let g = gcd(m as u64, mi as u64) as i128;
        if (r - x).rem_euclid(g) != 0 {
            return None;
        }
        let m_g = m / g;
        let mi_g = mi / g;
        let inv = inv_mod((m_g % mi_g) as u64, mi_g as u64)? as i128;
        let k = ((r - x) / g).rem_euclid(mi_g) * inv % mi_g;
        x += m * k;
        m *= mi_g;
        x = x.rem_euclid(m);
    }
    Some((x as u64, m as u64))
}

/// Iterator over the primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0..2000u64 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn factorisation_multiplies_back() {
        for n in 1..500u64 {
            let prod: u64 = factorize(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn crt_handles_shared_factors() {
        assert_eq!(crt(&[(1, 4), (3, 6)]), Some((9, 12)));
        assert_eq!(crt(&[(1, 4), (2, 6)]), None);
        assert_eq!(crt(&[(2, 3), (3, 5), (2, 7)]), Some((23, 105)));
    }

    #[test]
    fn idempotents_split_the_ring() {
        let e = crt_idempotent(12, 4);
        assert_eq!(e % 4, 1);
        assert_eq!(e % 3, 0);
        assert_eq!(mul_mod(e, e, 12), e);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(sub_mod(1, 3, 5), 3);
    }
}
