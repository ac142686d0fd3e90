//! Rational integer utilities: primality, factorization, sieves and residue symbols.

use crate::error::{Error, Result};

/// Largest integer accepted by [`factorize`].
pub const FACTOR_CAP: u64 = 1 << 63;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: i128, b: i128) -> Result<i128> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).map(i128::abs).ok_or(Error::Overflow("lcm"))
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u128);
    r * r == n as u128
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    match factorize(n.unsigned_abs()) {
        Ok(f) => f.iter().all(|&(_, e)| e == 1),
        Err(_) => false,
    }
}

/// Writes n = core * f^2 with core square-free (sign kept in core).
pub fn squarefree_decompose(n: i64) -> Result<(i64, i64)> {
    if n == 0 {
        return Err(Error::invalid("zero has no square-free part"));
    }
    let mut core = n.signum();
    let mut f = 1i64;
    for (p, e) in factorize(n.unsigned_abs())? {
        let p = p as i64;
        for _ in 0..e / 2 {
            f *= p;
        }
        if e % 2 == 1 {
            core *= p;
        }
    }
    Ok((core, f))
}

/// Splits a discriminant D = f^2 d_K into the fundamental discriminant and the conductor.
pub fn fundamental_discriminant(disc: i64) -> Result<(i64, i64)> {
    let r = disc.rem_euclid(4);
    if r != 0 && r != 1 {
        return Err(Error::invalid(format!("{disc} is not 0 or 1 mod 4")));
    }
    if is_square(disc as i128) {
        return Err(Error::invalid(format!("{disc} is a perfect square")));
    }
    let (d, f) = squarefree_decompose(disc)?;
    if d.rem_euclid(4) == 1 {
        Ok((d, f))
    } else {
        // d is 2 or 3 mod 4, so 4 | f^2 with f even
        if f % 2 != 0 {
            return Err(Error::invalid(format!("{disc} is not a discriminant")));
        }
        Ok((4 * d, f / 2))
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's variant of Pollard rho; n must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization with exponents, sorted by prime. Rejects n >= 2^63.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::invalid("cannot factor zero"));
    }
    if n >= FACTOR_CAP {
        return Err(Error::Unsupported(format!("{n} exceeds the 2^63 factoring cap")));
    }
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![m];
    let mut large = Vec::new();
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            large.push(x);
            continue;
        }
        let d = pollard_brent(x);
        stack.push(d);
        stack.push(x / d);
    }
    large.sort_unstable();
    for p in large {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in the closed interval [lo, hi] by a segmented sieve.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    let base = primes_up_to(isqrt(hi as u128) as u64);
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in &base {
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = start;
        while j <= hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    (0..len).filter(|&i| !composite[i]).map(|i| lo + i as u64).collect()
}

/// Smallest-prime-factor table for 0..=n (entries 0 and 1 are 0).
pub fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Kronecker symbol (a | n).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && (a.rem_euclid(8) == 3 || a.rem_euclid(8) == 5) {
            result = -result;
        }
        n >>= v;
    }
    // Jacobi symbol (a | n) with n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A square root of a modulo an odd prime p (Tonelli-Shanks), or None for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, p.div_ceil(4), p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Euler totient of a positive integer.
pub fn euler_phi(n: u64) -> Result<u64> {
    let mut r = n;
    for (p, _) in factorize(n)? {
        r = r / p * (p - 1);
    }
    Ok(r)
}

/// Classical Moebius function.
pub fn mobius(n: u64) -> Result<i32> {
    let f = factorize(n)?;
    if f.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.len() % 2 == 0 { 1 } else { -1 })
}
