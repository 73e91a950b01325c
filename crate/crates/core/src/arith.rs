//! Exact integer helpers: square roots, primality, factorization and the
//! Legendre symbol. Everything here works on machine integers without any
//! floating point.

use num_integer::{Integer, Roots};

/// Floor square root, `None` for negative input.
pub fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        None
    } else {
        Some(n.sqrt())
    }
}

/// `Some(r)` with `r >= 0` and `r * r == n`, otherwise `None`.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    let r = isqrt(n)?;
    (r * r == n).then_some(r)
}

pub fn is_power_of_two(n: i128) -> bool {
    n > 0 && n & (n - 1) == 0
}

/// Exponent of `p` in `n`, `None` when `n == 0`.
pub fn valuation(n: i128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as i128;
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Some(e)
}

/// Splits `n != 0` into `(p^e, e, unit)` with `n = p^e * unit`.
pub fn split_power(n: i128, p: u64) -> (u32, i128) {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (e, n)
}

pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
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

// Brent's variant; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut seed = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + seed) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = (x.abs_diff(y)).gcd(&n);
        }
        if d != n {
            return d;
        }
        seed += 1;
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization as ascending `(prime, exponent)` pairs. Trial division
/// up to 10^6, Pollard rho for whatever remains.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n < 2 {
        return out;
    }
    let mut n = n;
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += 1,
        None => out.push((p, 1)),
    };
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && d * d <= n {
        while n % d == 0 {
            push(d, &mut out);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![];
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            push(m, &mut out);
        } else {
            let f = pollard_rho(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    out.sort_unstable();
    out
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Legendre symbol `(a | p)` for an odd prime `p`, via the binary Jacobi
/// recursion.
pub fn legendre(a: i128, p: u64) -> i8 {
    debug_assert!(p % 2 == 1);
    let modulus = p as u128;
    let mut a = a.rem_euclid(p as i128) as u128;
    let mut n = modulus;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}
