//! Nonzero ideals of O_K in Hermite normal form, prime decomposition and the
//! multiplicative functions built on it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{factorize, gcd, lcm};
use crate::error::{Error, Result};
use crate::field::{AlgInt, Field};
use crate::linalg;
use crate::poly::fp;

/// A nonzero ideal as the upper-triangular HNF of its Z-basis (columns), row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Ideal {
    hnf: Vec<i64>,
    norm: u64,
}

impl Ord for Ideal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.norm, &self.hnf).cmp(&(other.norm, &other.hnf))
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let rows: Vec<String> = (0..n)
            .map(|i| (0..n).map(|j| self.hnf[i * n + j].to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "hnf:[{}]", rows.join(";"))
    }
}

impl Ideal {
    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn degree(&self) -> usize {
        (self.hnf.len() as f64).sqrt().round() as usize
    }

    /// Row-major HNF entries.
    pub fn hnf(&self) -> &[i64] {
        &self.hnf
    }

    /// The canonical Z-basis (HNF columns) as ring elements.
    pub fn basis(&self) -> Vec<AlgInt> {
        let n = self.degree();
        (0..n).map(|j| AlgInt::new((0..n).map(|i| self.hnf[i * n + j]).collect())).collect()
    }

    /// Smallest positive rational integer in the ideal.
    pub fn min_integer(&self) -> u64 {
        self.hnf[0] as u64
    }

    fn wide(&self) -> Vec<i128> {
        self.hnf.iter().map(|&x| x as i128).collect()
    }

    fn columns_wide(&self) -> Vec<Vec<i128>> {
        let n = self.degree();
        (0..n).map(|j| (0..n).map(|i| self.hnf[i * n + j] as i128).collect()).collect()
    }

    pub fn contains(&self, x: &AlgInt) -> bool {
        let v: Vec<i128> = x.coords.iter().map(|&c| c as i128).collect();
        linalg::solve_upper(&self.wide(), self.degree(), &v).is_some()
    }

    /// Inclusion self ⊆ other.
    pub fn is_subset(&self, other: &Ideal) -> bool {
        let h = other.wide();
        let n = self.degree();
        self.columns_wide().iter().all(|c| linalg::solve_upper(&h, n, c).is_some())
    }

    pub fn is_unit(&self) -> bool {
        self.norm == 1
    }
}

/// A prime ideal above p with ramification index e and residue degree f.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeIdeal {
    pub ideal: Ideal,
    pub p: u64,
    pub e: u32,
    pub f: u32,
}

/// Prime factorization: prime ideal -> exponent, ordered by (norm, HNF).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FactoredIdeal {
    pub factors: BTreeMap<Ideal, u32>,
}

impl FactoredIdeal {
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
    pub fn len(&self) -> usize {
        self.factors.len()
    }
}

fn ideal_from_hnf_wide(h: &[i128], n: usize) -> Result<Ideal> {
    let hnf = h.iter().map(|&x| i64::try_from(x).map_err(|_| Error::Overflow("ideal HNF entry"))).collect::<Result<Vec<_>>>()?;
    let norm = (0..n).try_fold(1u64, |acc, i| acc.checked_mul(hnf[i * n + i] as u64)).ok_or(Error::Overflow("ideal norm"))?;
    Ok(Ideal { hnf, norm })
}

impl Field {
    fn wide_basis_products(&self, gens: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
        let n = self.degree();
        let mut out = Vec::with_capacity(gens.len() * n);
        for g in gens {
            for j in 0..n {
                let mut e = vec![0i128; n];
                e[j] = 1;
                out.push(self.mul_wide(g, &e)?);
            }
        }
        Ok(out)
    }

    /// The ideal generated by the given elements.
    pub fn ideal_from_generators(&self, gens: &[AlgInt]) -> Result<Ideal> {
        let wide: Vec<Vec<i128>> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.coords.iter().map(|&x| x as i128).collect()).collect();
        if wide.is_empty() {
            return Err(Error::invalid("the zero ideal is not allowed"));
        }
        let all = self.wide_basis_products(&wide)?;
        let h = linalg::hnf_full(&all, self.degree())?;
        ideal_from_hnf_wide(&h, self.degree())
    }

    /// alpha O_K.
    pub fn principal_ideal(&self, alpha: &AlgInt) -> Result<Ideal> {
        if alpha.is_zero() {
            return Err(Error::invalid("zero generator"));
        }
        let n = self.degree();
        let m = self.mult_matrix(alpha);
        let cols: Vec<Vec<i128>> = (0..n).map(|j| (0..n).map(|i| m[i * n + j]).collect()).collect();
        let h = linalg::hnf_full(&cols, n)?;
        ideal_from_hnf_wide(&h, n)
    }

    pub fn unit_ideal(&self) -> Ideal {
        self.principal_ideal(&self.one()).expect("unit ideal")
    }

    /// Validates a user-supplied HNF (row-major) and checks closure under multiplication.
    pub fn ideal_from_hnf(&self, hnf: &[i64]) -> Result<Ideal> {
        let n = self.degree();
        if hnf.len() != n * n {
            return Err(Error::invalid(format!("HNF must have {} entries", n * n)));
        }
        for i in 0..n {
            if hnf[i * n + i] <= 0 {
                return Err(Error::invalid("HNF diagonal must be positive"));
            }
            for j in 0..i {
                if hnf[i * n + j] != 0 {
                    return Err(Error::invalid("HNF must be upper triangular"));
                }
            }
            for j in i + 1..n {
                if hnf[i * n + j] < 0 || hnf[i * n + j] >= hnf[i * n + i] {
                    return Err(Error::invalid("HNF off-diagonal entries must lie in [0, diagonal)"));
                }
            }
        }
        let cand = ideal_from_hnf_wide(&hnf.iter().map(|&x| x as i128).collect::<Vec<_>>(), n)?;
        let closure = self.ideal_from_generators(&cand.basis())?;
        if closure != cand {
            return Err(Error::invalid("lattice is not closed under multiplication by O_K"));
        }
        Ok(cand)
    }

    /// Parses `hnf:[a,b;0,c]` or `gen:<coords>`.
    pub fn parse_ideal(&self, s: &str) -> Result<Ideal> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("hnf:") {
            let body = rest.trim().trim_start_matches('[').trim_end_matches(']');
            let mut entries = Vec::new();
            for row in body.split(';') {
                for x in row.split(',') {
                    entries.push(x.trim().parse::<i64>().map_err(|e| Error::parse(format!("bad HNF entry {x:?}: {e}")))?);
                }
            }
            self.ideal_from_hnf(&entries)
        } else if let Some(rest) = s.strip_prefix("gen:") {
            self.principal_ideal(&AlgInt::parse(rest, self.degree())?)
        } else {
            Err(Error::parse(format!("ideal literal must start with hnf: or gen:, got {s:?}")))
        }
    }

    pub fn ideal_mul(&self, a: &Ideal, b: &Ideal) -> Result<Ideal> {
        self.same_degree(a)?;
        self.same_degree(b)?;
        let n = self.degree();
        let mut gens = Vec::with_capacity(n * n);
        for x in a.columns_wide() {
            for y in b.columns_wide() {
                gens.push(self.mul_wide(&x, &y)?);
            }
        }
        let modulus = (a.norm as i128).checked_mul(b.norm as i128).ok_or(Error::Overflow("ideal product"))?;
        let h = linalg::hnf_full_mod(&gens, n, modulus)?;
        ideal_from_hnf_wide(&h, n)
    }

    pub fn ideal_pow(&self, a: &Ideal, k: u32) -> Result<Ideal> {
        let mut r = self.unit_ideal();
        for _ in 0..k {
            r = self.ideal_mul(&r, a)?;
        }
        Ok(r)
    }

    /// The sum a + b.
    pub fn ideal_add(&self, a: &Ideal, b: &Ideal) -> Result<Ideal> {
        self.same_degree(a)?;
        self.same_degree(b)?;
        let n = self.degree();
        let mut gens = a.columns_wide();
        gens.extend(b.columns_wide());
        let modulus = gcd(a.norm as i128, b.norm as i128);
        let h = linalg::hnf_full_mod(&gens, n, modulus)?;
        ideal_from_hnf_wide(&h, n)
    }

    /// The intersection a ∩ b, from the integer relations between the two bases.
    pub fn ideal_intersect(&self, a: &Ideal, b: &Ideal) -> Result<Ideal> {
        self.same_degree(a)?;
        self.same_degree(b)?;
        let n = self.degree();
        let ca = a.columns_wide();
        let cb = b.columns_wide();
        let mut cols = ca.clone();
        cols.extend(cb.iter().map(|v| v.iter().map(|x| -x).collect()));
        let ker = linalg::kernel_basis(&cols)?;
        let mut gens = Vec::with_capacity(ker.len());
        for k in ker {
            let mut v = vec![0i128; n];
            for (j, c) in ca.iter().enumerate() {
                for i in 0..n {
                    v[i] = v[i].checked_add(k[j].checked_mul(c[i]).ok_or(Error::Overflow("intersection"))?).ok_or(Error::Overflow("intersection"))?;
                }
            }
            gens.push(v);
        }
        let modulus = lcm(a.norm as i128, b.norm as i128)?;
        let h = linalg::hnf_full_mod(&gens, n, modulus)?;
        ideal_from_hnf_wide(&h, n)
    }

    fn same_degree(&self, a: &Ideal) -> Result<()> {
        if a.degree() != self.degree() {
            return Err(Error::invalid("ideal belongs to a different field"));
        }
        Ok(())
    }

    /// Prime ideals above p with (e, f), by Kummer-Dedekind on the defining polynomial.
    pub fn primes_above(&self, p: u64) -> Result<Arc<Vec<PrimeIdeal>>> {
        if let Some(v) = self.splitting.read().expect("splitting memo poisoned").get(&p) {
            return Ok(v.clone());
        }
        if !crate::arith::is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if self.index() % p as i64 == 0 {
            return Err(Error::Unsupported(format!("{p} divides the index of Z[theta]; Kummer-Dedekind does not apply")));
        }
        let n = self.degree();
        let fac = fp::factor(&fp::from_int(self.minpoly(), p), p);
        let mut out = Vec::with_capacity(fac.len());
        for (g, e) in fac {
            let mut gc = vec![0i64; n];
            for (i, &c) in g.iter().enumerate() {
                if i < n {
                    gc[i] = c as i64;
                }
            }
            let f = (g.len() - 1) as u32;
            let ideal = if f as usize == n {
                self.ideal_from_generators(&[self.from_int(p as i64)])?
            } else {
                self.ideal_from_generators(&[self.from_int(p as i64), AlgInt::new(gc)])?
            };
            out.push(PrimeIdeal { ideal, p, e, f });
        }
        out.sort_by(|a, b| a.ideal.cmp(&b.ideal));
        let sum: u32 = out.iter().map(|q| q.e * q.f).sum();
        if sum as usize != n {
            return Err(Error::Internal(format!("sum e*f = {sum} != {n} above {p}")));
        }
        let arc = Arc::new(out);
        self.splitting.write().expect("splitting memo poisoned").insert(p, arc.clone());
        Ok(arc)
    }

    /// p O_K as a product of prime ideals.
    pub fn factor_rational_prime(&self, p: u64) -> Result<FactoredIdeal> {
        let mut factors = BTreeMap::new();
        for q in self.primes_above(p)?.iter() {
            factors.insert(q.ideal.clone(), q.e);
        }
        Ok(FactoredIdeal { factors })
    }

    /// Valuation of a at the prime ideal q (which lies above p with residue degree f).
    fn valuation(&self, a: &Ideal, q: &PrimeIdeal, max: u32) -> Result<u32> {
        let mut k = 0;
        let mut qk = q.ideal.clone();
        while k < max && a.is_subset(&qk) {
            k += 1;
            if k < max {
                qk = self.ideal_mul(&qk, &q.ideal)?;
            }
        }
        Ok(k)
    }

    pub fn factor_ideal(&self, a: &Ideal) -> Result<FactoredIdeal> {
        self.same_degree(a)?;
        let mut factors = BTreeMap::new();
        for (p, vp) in factorize(a.norm)? {
            let mut remaining = vp;
            for q in self.primes_above(p)?.iter() {
                if remaining == 0 {
                    break;
                }
                let v = self.valuation(a, q, remaining / q.f)?;
                if v > 0 {
                    factors.insert(q.ideal.clone(), v);
                    remaining -= v * q.f;
                }
            }
            if remaining != 0 {
                return Err(Error::Internal(format!("factorization of {a} does not account for its norm at {p}")));
            }
        }
        Ok(FactoredIdeal { factors })
    }

    /// Multiplies a factorization back together.
    pub fn recombine(&self, f: &FactoredIdeal) -> Result<Ideal> {
        let mut r = self.unit_ideal();
        for (q, &e) in &f.factors {
            r = self.ideal_mul(&r, &self.ideal_pow(q, e)?)?;
        }
        Ok(r)
    }

    pub fn is_prime_ideal(&self, a: &Ideal) -> Result<bool> {
        if a.norm == 1 {
            return Ok(false);
        }
        let fac = factorize(a.norm)?;
        if fac.len() != 1 {
            return Ok(false);
        }
        let (p, k) = fac[0];
        Ok(self.primes_above(p)?.iter().any(|q| q.f == k && q.ideal == *a))
    }

    pub fn mobius_k(&self, a: &Ideal) -> Result<i32> {
        let f = self.factor_ideal(a)?;
        if f.factors.values().any(|&e| e > 1) {
            return Ok(0);
        }
        Ok(if f.len() % 2 == 0 { 1 } else { -1 })
    }

    /// phi_K(a) = #(O_K / a)^x.
    pub fn totient_k(&self, a: &Ideal) -> Result<u128> {
        let f = self.factor_ideal(a)?;
        let mut r = 1u128;
        for (q, &e) in &f.factors {
            let nq = q.norm as u128;
            r *= nq.pow(e - 1) * (nq - 1);
        }
        Ok(r)
    }

    /// The part of a supported on primes above p.
    pub fn p_part(&self, a: &Ideal, p: u64) -> Result<Ideal> {
        let f = self.factor_ideal(a)?;
        let mut r = self.unit_ideal();
        for (q, &e) in &f.factors {
            if q.norm % p == 0 {
                r = self.ideal_mul(&r, &self.ideal_pow(q, e)?)?;
            }
        }
        Ok(r)
    }

    /// Divisors b | a with N(b) <= r together with mu_K(b), in nondecreasing norm order.
    /// With `squarefree_only` the mu = 0 divisors are skipped.
    pub fn divisors_up_to(&self, a: &Ideal, r: f64, squarefree_only: bool) -> Result<Vec<(Ideal, i32)>> {
        let f = self.factor_ideal(a)?;
        self.divisors_from_factorization(&f, r, squarefree_only)
    }

    pub fn divisors_from_factorization(&self, f: &FactoredIdeal, r: f64, squarefree_only: bool) -> Result<Vec<(Ideal, i32)>> {
        let mut out: Vec<(Ideal, i32, u32)> = vec![(self.unit_ideal(), 1, 0)];
        for (q, &e) in &f.factors {
            let maxe = if squarefree_only { 1 } else { e };
            let mut next = Vec::new();
            for (d, mu, w) in &out {
                let mut cur = d.clone();
                next.push((cur.clone(), *mu, *w));
                for k in 1..=maxe {
                    if (cur.norm as f64) * (q.norm as f64) > r {
                        break;
                    }
                    cur = self.ideal_mul(&cur, q)?;
                    let m = match k {
                        1 => -mu,
                        _ => 0,
                    };
                    next.push((cur.clone(), m, w + k));
                }
            }
            out = next;
        }
        let mut res: Vec<(Ideal, i32)> = out.into_iter().filter(|(d, _, _)| d.norm as f64 <= r).map(|(d, m, _)| (d, m)).collect();
        res.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(res)
    }

    /// All ideals of norm <= bound, as products of prime powers, sorted by (norm, HNF).
    pub fn ideals_up_to(&self, bound: u64) -> Result<Vec<Ideal>> {
        let mut primes: Vec<Ideal> = Vec::new();
        for p in crate::arith::primes_up_to(bound) {
            for q in self.primes_above(p)?.iter() {
                if q.ideal.norm <= bound {
                    primes.push(q.ideal.clone());
                }
            }
        }
        let mut out = vec![self.unit_ideal()];
        for q in &primes {
            let mut next = Vec::new();
            for d in &out {
                next.push(d.clone());
                let mut cur = d.clone();
                while cur.norm.saturating_mul(q.norm) <= bound {
                    cur = self.ideal_mul(&cur, q)?;
                    next.push(cur.clone());
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// True when a + b = O_K.
    pub fn coprime(&self, a: &Ideal, b: &Ideal) -> Result<bool> {
        Ok(self.ideal_add(a, b)?.is_unit())
    }
}
