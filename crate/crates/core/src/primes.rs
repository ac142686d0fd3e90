//! Prime elements, prime-ideal counts and the density experiments built on them.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, is_prime, is_square, isqrt, kronecker, primes_in_range, primes_up_to};
use crate::error::{Error, Result};
use crate::field::{enumerate_box, enumerate_box_in_basis, AlgInt, Field, FieldKind};
use crate::ideal::Ideal;
use crate::lattice::{fundamental_units, DomainSpec};

/// Outcome of a counting experiment. `seconds` is reported but excluded from
/// the deterministic JSON payload.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DensityReport {
    pub experiment: String,
    pub field: String,
    #[serde(rename = "L_or_M")]
    pub scale: f64,
    pub count: u64,
    pub reference: f64,
    pub ratio: f64,
    #[serde(skip)]
    pub seconds: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl DensityReport {
    fn new(experiment: &str, field: &Field, scale: f64, count: u64, reference: f64, start: Instant) -> Self {
        DensityReport {
            experiment: experiment.to_string(),
            field: field.to_string(),
            scale,
            count,
            reference,
            ratio: count as f64 / reference,
            seconds: start.elapsed().as_secs_f64(),
            extra: BTreeMap::new(),
        }
    }
}

/// True iff a O_K is a prime ideal.
pub fn is_prime_element(field: &Field, a: &AlgInt) -> Result<bool> {
    let norm = field.abs_norm(a)?;
    prime_of_norm_containing(field, a, norm, None)
}

// a O_K (or a b^-1) is prime iff its norm is p^f for a prime q of degree f above p
// with a ∈ b q, by comparing norms.
fn prime_of_norm_containing(field: &Field, a: &AlgInt, norm: u128, base: Option<&Ideal>) -> Result<bool> {
    if norm < 2 {
        return Ok(false);
    }
    let norm = u64::try_from(norm).map_err(|_| Error::Unsupported("norm exceeds 64 bits".into()))?;
    if is_prime(norm) {
        return Ok(true);
    }
    let fac = factorize(norm)?;
    if fac.len() != 1 {
        return Ok(false);
    }
    let (p, k) = fac[0];
    for q in field.primes_above(p)?.iter() {
        if q.f != k {
            continue;
        }
        let target = match base {
            Some(b) => field.ideal_mul(b, &q.ideal)?,
            None => q.ideal.clone(),
        };
        if target.contains(a) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// True iff a * b^-1 is a prime ideal of O_K; requires a ∈ b.
pub fn is_prime_in_ideal(field: &Field, a: &AlgInt, b: &Ideal) -> Result<bool> {
    if !b.contains(a) {
        return Err(Error::invalid(format!("{a} is not in the ideal {b}")));
    }
    let norm = field.abs_norm(a)?;
    let nb = b.norm() as u128;
    if norm % nb != 0 {
        return Err(Error::Internal("norm of a is not divisible by N(b)".into()));
    }
    prime_of_norm_containing(field, a, norm / nb, Some(b))
}

fn keep(field: &Field, a: &AlgInt, filter: Option<&DomainSpec>) -> Result<bool> {
    if a.is_zero() || !is_prime_element(field, a)? {
        return Ok(false);
    }
    match filter {
        Some(d) => d.in_domain(a),
        None => Ok(true),
    }
}

/// Prime elements of the box ||a|| <= M in lexicographic order, optionally restricted to a domain.
pub fn enumerate_prime_elements(field: &Field, m: f64, filter: Option<&DomainSpec>) -> Result<Vec<AlgInt>> {
    if m < 1.0 {
        return Ok(Vec::new());
    }
    let n = field.degree();
    let hi = m.floor() as i64;
    // split on the leading coordinate; order is preserved by the indexed collect
    let chunks: Vec<Result<Vec<AlgInt>>> = (-hi..=hi)
        .into_par_iter()
        .map(|lead| {
            let mut out = Vec::new();
            for rest in enumerate_box(n - 1, m, None) {
                let mut c = Vec::with_capacity(n);
                c.push(lead);
                c.extend(rest);
                let a = AlgInt::new(c);
                if keep(field, &a, filter)? {
                    out.push(a);
                }
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

/// Elements a of the ideal b with ||a||_{inf, basis} <= M and a b^-1 prime.
pub fn enumerate_prime_elements_in_ideal(field: &Field, b: &Ideal, m: f64) -> Result<Vec<AlgInt>> {
    let basis = b.basis();
    let mut out = Vec::new();
    for a in enumerate_box_in_basis(&basis, m, None) {
        if !a.is_zero() && is_prime_in_ideal(field, &a, b)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// (t, c) with N(x + y w) = x^2 + t x y + c y^2 in a quadratic field.
fn quadratic_norm_form(d: i64) -> (i128, i128) {
    if d.rem_euclid(4) == 1 {
        (1, (1 - d as i128) / 4)
    } else {
        (0, -(d as i128))
    }
}

/// Whether some element of O_K has |N(a)| = n, for a quadratic field.
/// In the real case the search is confined to associates with |sigma_1/sigma_2| in [1/eps, eps).
pub fn has_element_of_norm(field: &Field, n: u64) -> Result<bool> {
    let d = field.quadratic_d().ok_or_else(|| Error::Unsupported("norm equation solver needs a quadratic field".into()))?;
    let dk = field.discriminant();
    let (t, _) = quadratic_norm_form(d);
    let n = n as i128;
    let ymax: i128 = if d < 0 {
        isqrt((4 * n / -dk) as u128) as i128 + 1
    } else {
        let units = fundamental_units(field)?;
        let eps = field.embed(&units.fundamental[0])[0].re.abs();
        let eps = eps.max(1.0 / eps);
        (2.0 * (n as f64 * eps).sqrt() / (dk as f64).sqrt()).ceil() as i128 + 1
    };
    let signs: &[i128] = if d < 0 { &[1] } else { &[1, -1] };
    for y in 0..=ymax {
        for &s in signs {
            // x^2 + t x y + c y^2 = s n  <=>  (2x + t y)^2 = d_K y^2 + 4 s n
            let disc = dk * y * y + 4 * s * n;
            if disc >= 0 && is_square(disc) {
                let r = isqrt(disc as u128) as i128;
                if (r - t * y).rem_euclid(2) == 0 {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Splitting of p in a quadratic field: +1 split, -1 inert, 0 ramified.
pub fn quadratic_split_type(field: &Field, p: u64) -> Result<i32> {
    let dk = field.discriminant() as i64;
    Ok(kronecker(dk, p as i64))
}

/// Number of prime ideals of norm <= L (Landau).
pub fn prime_ideal_count(field: &Field, l: f64) -> Result<DensityReport> {
    let start = Instant::now();
    let lim = l.floor() as u64;
    let primes = primes_up_to(lim);
    let count: u64 = match field.kind() {
        FieldKind::Rational => primes.len() as u64,
        FieldKind::Quadratic { .. } => primes
            .par_iter()
            .map(|&p| match quadratic_split_type(field, p).unwrap() {
                1 => 2,
                0 => 1,
                _ => u64::from(p.checked_mul(p).is_some_and(|q| q <= lim)),
            })
            .sum(),
        FieldKind::Monogenic { .. } => {
            let counts: Vec<Result<u64>> = primes
                .par_iter()
                .map(|&p| {
                    let qs = field.primes_above(p)?;
                    Ok(qs.iter().filter(|q| (q.f as f64) * (p as f64).ln() <= l.ln() + 1e-12 && q.ideal.norm() <= lim).count() as u64)
                })
                .collect();
            counts.into_iter().sum::<Result<u64>>()?
        }
    };
    Ok(DensityReport::new("primes-count", field, l, count, l / l.ln(), start))
}

/// Principal prime ideals of norm <= L against (1/h) L / log L, for quadratic fields.
/// `extra` carries the total prime-ideal count and the principal/total ratio.
pub fn chebotarev_ratio(field: &Field, l: f64, h: Option<u64>) -> Result<DensityReport> {
    let start = Instant::now();
    let d = field.quadratic_d().ok_or_else(|| Error::Unsupported("chebotarev experiment needs a quadratic field".into()))?;
    let h = match h.or(field.supplied_class_number()) {
        Some(h) => h,
        None => crate::quadform::class_number_of_field(d)?,
    };
    let lim = l.floor() as u64;
    let primes = primes_up_to(lim);
    let pairs: Vec<Result<(u64, u64)>> = primes
        .par_iter()
        .map(|&p| {
            Ok(match quadratic_split_type(field, p)? {
                // both conjugates are principal or neither
                1 => {
                    let pr = has_element_of_norm(field, p)?;
                    (2 * u64::from(pr), 2)
                }
                0 => (u64::from(has_element_of_norm(field, p)?), 1),
                _ => {
                    let inside = p.checked_mul(p).is_some_and(|q| q <= lim);
                    (u64::from(inside), u64::from(inside))
                }
            })
        })
        .collect();
    let (mut principal, mut total) = (0u64, 0u64);
    for r in pairs {
        let (a, b) = r?;
        principal += a;
        total += b;
    }
    let reference = l / l.ln() / h as f64;
    let mut rep = DensityReport::new("chebotarev", field, l, principal, reference, start);
    rep.extra.insert("class_number".into(), h as f64);
    rep.extra.insert("total_prime_ideals".into(), total as f64);
    rep.extra.insert("principal_over_total".into(), principal as f64 / total as f64);
    Ok(rep)
}

/// Primes in [M, M + M^a] against 0.09 M^a / log M.
pub fn short_interval_count(m: f64, a: f64) -> Result<DensityReport> {
    let start = Instant::now();
    if !(0.0..1.0).contains(&a) || a == 0.0 {
        return Err(Error::invalid("exponent a must lie in (0, 1)"));
    }
    let len = m.powf(a);
    if len < 1.0 {
        return Err(Error::invalid("interval shorter than 1"));
    }
    let lo = m.ceil() as u64;
    let hi = (m + len).floor() as u64;
    let count = primes_in_range(lo, hi).len() as u64;
    let mut rep = DensityReport::new("short-interval", &Field::rational(), m, count, 0.09 * len / m.ln(), start);
    rep.extra.insert("a".into(), a);
    rep.extra.insert("interval_length".into(), len);
    Ok(rep)
}

/// Prime elements in the l-infinity interval {b : ||b - x|| <= ||x||^a}.
pub fn short_interval_count_field(field: &Field, center: &AlgInt, a: f64) -> Result<DensityReport> {
    let start = Instant::now();
    let m = center.linf() as f64;
    let radius = m.powf(a);
    if radius < 1.0 {
        return Err(Error::invalid("interval shorter than 1"));
    }
    let mut count = 0u64;
    for off in enumerate_box(field.degree(), radius, None) {
        let b = field.add(center, &AlgInt::new(off))?;
        if !b.is_zero() && is_prime_element(field, &b)? {
            count += 1;
        }
    }
    let n = field.degree() as i32;
    let reference = (2.0 * radius).powi(n) / (m.powi(n)).ln();
    let mut rep = DensityReport::new("short-interval", field, m, count, reference, start);
    rep.extra.insert("a".into(), a);
    rep.extra.insert("radius".into(), radius);
    Ok(rep)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClassicalStats {
    #[serde(rename = "L")]
    pub l: f64,
    pub theta: f64,
    pub chebyshev_bound: f64,
    pub mertens_sum: f64,
    pub mertens_error: f64,
    pub tail_sum: f64,
    /// upper end actually used for the tail sum over (L, min(L^2, cap)]
    pub tail_limit: f64,
}

/// Upper end of the sieve used for the 1/p^2 tail proxy.
pub const TAIL_CAP: u64 = 50_000_000;

/// Chebyshev theta, the Mertens sum and a truncated tail sum of 1/p^2.
pub fn classical_stats(l: f64) -> Result<ClassicalStats> {
    if l < 2.0 {
        return Err(Error::invalid("L must be at least 2"));
    }
    let lim = l.floor() as u64;
    let primes = primes_up_to(lim);
    let theta: f64 = primes.iter().map(|&p| (p as f64).ln()).sum();
    let mertens: f64 = primes.iter().map(|&p| (p as f64).ln() / p as f64).sum();
    let tail_hi = lim.saturating_mul(lim).min(TAIL_CAP.max(lim));
    let tail: f64 = primes_in_range(lim + 1, tail_hi).iter().map(|&p| 1.0 / (p as f64 * p as f64)).sum();
    Ok(ClassicalStats {
        l,
        theta,
        chebyshev_bound: 2.0 * std::f64::consts::LN_2 * l,
        mertens_sum: mertens,
        mertens_error: mertens - l.ln(),
        tail_sum: tail,
        tail_limit: tail_hi as f64,
    })
}

/// theta(x) at the given points (any order), from one sieve up to the largest.
pub fn theta_at(points: &[u64]) -> Vec<f64> {
    let top = points.iter().copied().max().unwrap_or(0);
    let primes = primes_up_to(top);
    let mut prefix = Vec::with_capacity(primes.len() + 1);
    prefix.push(0.0f64);
    for &p in &primes {
        prefix.push(prefix.last().unwrap() + (p as f64).ln());
    }
    points.iter().map(|&x| prefix[primes.partition_point(|&p| p <= x)]).collect()
}
