//! Independent oracles for the integration tests. Nothing here calls into the
//! library's arithmetic; each routine is the most direct computation available.
#![allow(dead_code)]

/// Trial division.
pub fn is_prime_naive(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Plain sieve of Eratosthenes as a bitmap.
pub fn sieve(n: usize) -> Vec<bool> {
    let mut s = vec![true; n + 1];
    s[0] = false;
    if n >= 1 {
        s[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if s[i] {
            let mut j = i * i;
            while j <= n {
                s[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    s
}

/// a + bi is a Gaussian prime iff a^2 + b^2 is prime, or one coordinate
/// vanishes and the other is +-p with p = 3 mod 4.
pub fn is_gaussian_prime(a: i64, b: i64) -> bool {
    if a == 0 || b == 0 {
        let p = (a + b).unsigned_abs();
        return p % 4 == 3 && is_prime_naive(p);
    }
    is_prime_naive((a * a + b * b) as u64)
}

/// #{(a, b) : a > 0, b >= 0, a^2 + b^2 <= L}: one generator per nonzero ideal of Z[i].
pub fn gaussian_ideal_count(l: u64) -> u64 {
    let mut count = 0u64;
    let mut a = 1u64;
    while a * a <= l {
        let rest = l - a * a;
        let mut b = (rest as f64).sqrt() as u64;
        while b * b > rest {
            b -= 1;
        }
        while (b + 1) * (b + 1) <= rest {
            b += 1;
        }
        count += b + 1;
        a += 1;
    }
    count
}

/// Elements of Z[sqrt2] as (a, b) = a + b sqrt2, in i128.
pub fn z2_mul(x: (i128, i128), y: (i128, i128)) -> (i128, i128) {
    (x.0 * y.0 + 2 * x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

/// #{eta a : eta unit, max(|.|) <= M} in Z[sqrt2]: +-(1+sqrt2)^m a for |m| <= 60.
pub fn z2_orbit_count(a: (i128, i128), m: i128) -> u64 {
    let inside = |x: (i128, i128)| x.0.abs() <= m && x.1.abs() <= m;
    let mut count = u64::from(inside(a)) * 2;
    for step in [(1i128, 1i128), (-1, 1)] {
        let mut x = a;
        for _ in 0..60 {
            x = z2_mul(x, step);
            if inside(x) {
                count += 2;
            }
        }
    }
    count
}

/// The closed-form domain of Q(sqrt2): a > 2b >= 0 or b > a >= 0.
pub fn z2_closed_form(a: i64, b: i64) -> bool {
    (a > 2 * b && 2 * b >= 0) || (b > a && a >= 0)
}

/// Trapezoid rule with n intervals.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for i in 1..n {
        s += f(a + i as f64 * h);
    }
    s * h
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// #{(a, b, c) : |b| <= a <= c, b >= 0 if |b| = a or a = c, gcd = 1, b^2 - 4ac = D}
/// by scanning every triple with a, |b| up to sqrt|D|.
pub fn class_number_brute(d: i64) -> u64 {
    let lim = ((-d) as f64).sqrt() as i64 + 1;
    let mut h = 0;
    for a in 1..=lim {
        for b in -a..=a {
            for c in a..=(-d) {
                if b * b - 4 * a * c != d {
                    continue;
                }
                if (b.abs() == a || a == c) && b < 0 {
                    continue;
                }
                if gcd(gcd(a, b), c) == 1 {
                    h += 1;
                }
            }
        }
    }
    h
}

/// Exact rank by fraction-free elimination on rows.
pub fn rank_exact(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let (f, g) = (m[i][c], m[rank][c]);
                for k in 0..cols {
                    m[i][k] = m[i][k] * g - m[rank][k] * f;
                }
                let h = m[i].iter().fold(0i128, |acc, &x| {
                    let (mut a, mut b) = (acc.abs(), x.abs());
                    while b != 0 {
                        (a, b) = (b, a % b);
                    }
                    a
                });
                if h > 1 {
                    for x in m[i].iter_mut() {
                        *x /= h;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduces x modulo the lattice whose basis is the columns of an upper-triangular HNF.
pub fn reduce_mod_hnf(x: &[i64], hnf: &[i64], n: usize) -> Vec<i64> {
    let mut v = x.to_vec();
    for i in (0..n).rev() {
        let d = hnf[i * n + i];
        let q = v[i].div_euclid(d);
        for k in 0..=i {
            v[k] -= q * hnf[k * n + i];
        }
    }
    v
}

/// All residues of Z^n modulo an upper-triangular HNF, as the box of its diagonal.
pub fn residues(hnf: &[i64], n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for i in 0..n {
        let d = hnf[i * n + i];
        out = out.into_iter().flat_map(|v| (0..d).map(move |k| {
            let mut w = v.clone();
            w.push(k);
            w
        })).collect();
    }
    out
}
