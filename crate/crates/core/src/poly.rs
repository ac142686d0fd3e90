//! Univariate polynomials: complex root finding over Z and factorization over F_p.
//! Coefficients are stored lowest degree first.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{mul_mod, pow_mod};

pub fn eval_complex(f: &[i64], z: Complex64) -> Complex64 {
    f.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
}

/// Integer roots of a monic-or-not integer polynomial (rational root screen for monic input).
pub fn integer_roots(f: &[i64]) -> Vec<i64> {
    let c0 = f[0];
    if c0 == 0 {
        return vec![0];
    }
    let a = c0.unsigned_abs();
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= a {
        if a % d == 0 {
            for q in [d, a / d] {
                for s in [q as i64, -(q as i64)] {
                    let v = f.iter().rev().try_fold(0i128, |acc, &c| acc.checked_mul(s as i128)?.checked_add(c as i128));
                    if v == Some(0) && !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// All complex roots of a monic integer polynomial by Aberth-Ehrlich iteration.
pub fn complex_roots(f: &[i64]) -> Vec<Complex64> {
    let n = f.len() - 1;
    let lead = f[n] as f64;
    let cf: Vec<f64> = f.iter().map(|&c| c as f64 / lead).collect();
    let df: Vec<f64> = (1..=n).map(|i| cf[i] * i as f64).collect();
    let ev = |c: &[f64], z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * z + x);
    // Cauchy bound on root moduli
    let bound = 1.0 + cf[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = ev(&cf, z[i]);
            let dp = ev(&df, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    // Newton polish
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dp = ev(&df, *zi);
            if dp.norm() > 0.0 {
                *zi -= ev(&cf, *zi) / dp;
            }
        }
    }
    z
}

/// Polynomial arithmetic over F_p on normalized coefficient vectors (no trailing zeros).
pub mod fp {
    use super::*;

    pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn from_int(f: &[i64], p: u64) -> Vec<u64> {
        trim(f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn deg(f: &[u64]) -> isize {
        f.len() as isize - 1
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn monic(f: &[u64], p: u64) -> Vec<u64> {
        match f.last() {
            None => Vec::new(),
            Some(&l) => {
                let i = inv(l, p);
                f.iter().map(|&c| mul_mod(c, i, p)).collect()
            }
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(r)
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        if r.len() < b.len() {
            return (Vec::new(), trim(r));
        }
        let li = inv(b[db], p);
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + db], li, p);
            q[k] = c;
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mul_mod(c, bj, p)) % p;
                }
            }
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        divrem(a, b, p).1
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    pub fn pow_mod_poly(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        r
    }

    pub fn derivative(f: &[u64], p: u64) -> Vec<u64> {
        trim((1..f.len()).map(|i| mul_mod(f[i], i as u64 % p, p)).collect())
    }

    /// Square-free decomposition: pairs (g, e) with f = prod g^e, each g square-free.
    pub fn squarefree(f: &[u64], p: u64) -> Vec<(Vec<u64>, u32)> {
        let f = monic(f, p);
        if f.len() <= 1 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let d = derivative(&f, p);
        if d.is_empty() {
            // f = g(x^p) = g(x)^p over F_p
            let g: Vec<u64> = f.iter().step_by(p as usize).copied().collect();
            for (h, e) in squarefree(&g, p) {
                out.push((h, e * p as u32));
            }
            return out;
        }
        let mut c = gcd(&f, &d, p);
        let mut w = divrem(&f, &c, p).0;
        let mut i = 1u32;
        while w.len() > 1 {
            let y = gcd(&w, &c, p);
            let z = divrem(&w, &y, p).0;
            if z.len() > 1 {
                out.push((monic(&z, p), i));
            }
            i += 1;
            w = y;
            c = divrem(&c, &w, p).0;
        }
        if c.len() > 1 {
            let g: Vec<u64> = c.iter().step_by(p as usize).copied().collect();
            for (h, e) in squarefree(&g, p) {
                out.push((h, e * p as u32));
            }
        }
        out
    }

    /// Distinct-degree factorization of a square-free monic polynomial.
    pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut d = 1;
        while f.len() > 1 && 2 * d <= f.len() - 1 {
            h = pow_mod_poly(&h, p as u128, &f, p);
            let g = gcd(&f, &sub(&h, &x, p), p);
            if g.len() > 1 {
                f = divrem(&f, &g, p).0;
                h = rem(&h, &f, p);
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let dd = f.len() - 1;
            out.push((monic(&f, p), dd));
        }
        out
    }

    /// Splits a product of distinct irreducibles of common degree d.
    pub fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        let n = f.len() - 1;
        if n == d {
            return vec![monic(f, p)];
        }
        loop {
            let a: Vec<u64> = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.len() <= 1 {
                continue;
            }
            let g = if p == 2 {
                // trace map a + a^2 + ... + a^(2^(d-1))
                let mut t = a.clone();
                let mut s = a.clone();
                for _ in 1..d {
                    t = rem(&mul(&t, &t, p), f, p);
                    s = sub(&s, &sub(&[], &t, p), p);
                }
                gcd(f, &s, p)
            } else {
                // a^((p^d - 1)/2) = prod_k (a^((p-1)/2))^(p^k)
                let u = pow_mod_poly(&a, ((p - 1) / 2) as u128, f, p);
                let mut t = u.clone();
                let mut b = u;
                for _ in 1..d {
                    t = pow_mod_poly(&t, p as u128, f, p);
                    b = rem(&mul(&b, &t, p), f, p);
                }
                gcd(f, &sub(&b, &[1], p), p)
            };
            if g.len() > 1 && g.len() < f.len() {
                let q = divrem(f, &g, p).0;
                let mut out = equal_degree(&g, d, p, rng);
                out.extend(equal_degree(&monic(&q, p), d, p, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities, sorted.
    pub fn factor(f: &[u64], p: u64) -> Vec<(Vec<u64>, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let mut out = Vec::new();
        for (g, e) in squarefree(f, p) {
            for (h, d) in distinct_degree(&g, p) {
                for irr in equal_degree(&h, d, p, &mut rng) {
                    out.push((irr, e));
                }
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::fp;
    use super::*;

    #[test]
    fn factor_x2_plus_1() {
        let f = fp::from_int(&[1, 0, 1], 5);
        let fac = fp::factor(&f, 5);
        assert_eq!(fac, vec![(vec![2, 1], 1), (vec![3, 1], 1)]);
        let fac3 = fp::factor(&fp::from_int(&[1, 0, 1], 3), 3);
        assert_eq!(fac3, vec![(vec![1, 0, 1], 1)]);
        let fac2 = fp::factor(&fp::from_int(&[1, 0, 1], 2), 2);
        assert_eq!(fac2, vec![(vec![1, 1], 2)]);
    }

    #[test]
    fn factor_recombines_mod_small_primes() {
        let polys: [&[i64]; 4] = [&[-2, 0, 0, 1], &[1, 1, 0, 1, 1], &[3, 0, 2, 0, 0, 1], &[-1, -1, 1]];
        for f in polys {
            for p in [2u64, 3, 5, 7, 11, 13, 101] {
                let fpoly = fp::from_int(f, p);
                let fac = fp::factor(&fpoly, p);
                let mut prod = vec![1u64];
                for (g, e) in &fac {
                    for _ in 0..*e {
                        prod = fp::mul(&prod, g, p);
                    }
                }
                assert_eq!(prod, fp::monic(&fpoly, p), "f={f:?} p={p}");
            }
        }
    }

    #[test]
    fn cube_root_of_two() {
        let r = complex_roots(&[-2, 0, 0, 1]);
        let real: Vec<_> = r.iter().filter(|z| z.im.abs() < 1e-9).collect();
        assert_eq!(real.len(), 1);
        assert!((real[0].re - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
        for z in &r {
            assert!(eval_complex(&[-2, 0, 0, 1], *z).norm() < 1e-12);
        }
    }

    #[test]
    fn rational_roots() {
        assert_eq!(integer_roots(&[-4, 0, 1]), vec![-2, 2]);
        assert!(integer_roots(&[-2, 0, 0, 1]).is_empty());
    }
}
