//! Number fields given by a power basis, exact element arithmetic, embeddings
//! and lattice-box enumeration.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::is_squarefree;
use crate::error::{Error, Result};
use crate::ideal::PrimeIdeal;
use crate::lattice::UnitData;
use crate::linalg;
use crate::poly;

/// Default tolerance for float comparisons on embeddings.
pub const DEFAULT_TOL: f64 = 1e-9;

/// An algebraic integer as exact coordinates over the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgInt {
    pub coords: Vec<i64>,
}

impl AlgInt {
    pub fn new(coords: Vec<i64>) -> Self {
        AlgInt { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The l-infinity length max |a_i|.
    pub fn linf(&self) -> u64 {
        self.coords.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// Parses `2,1`, `(2,1)` or `[2,1]`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let coords = t
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|e| Error::parse(format!("bad coordinate {x:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != n {
            return Err(Error::parse(format!("expected {n} coordinates, got {}", coords.len())));
        }
        Ok(AlgInt { coords })
    }
}

impl fmt::Display for AlgInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Quadratic { d: i64 },
    Monogenic { poly: Vec<i64>, index: i64 },
}

/// A number field K with ring of integers given by the power basis 1, w, ..., w^(n-1).
///
/// For quadratic fields w is sqrt(d) or (1+sqrt(d))/2. Monogenic fields use the
/// ring Z[theta], which is the maximal order only when the claimed index is 1.
pub struct Field {
    kind: FieldKind,
    n: usize,
    r1: usize,
    r2: usize,
    disc: i128,
    minpoly: Vec<i64>,
    table: Vec<i64>,
    emb: Vec<Complex64>,
    tol: f64,
    class_number: Option<u64>,
    units: Option<UnitData>,
    pub(crate) splitting: RwLock<HashMap<u64, Arc<Vec<PrimeIdeal>>>>,
}

pub type FieldSpec = Field;

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("kind", &self.kind).field("n", &self.n).field("disc", &self.disc).finish()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::Rational => write!(f, "rational"),
            FieldKind::Quadratic { d } => write!(f, "quadratic d={d}"),
            FieldKind::Monogenic { poly, .. } => {
                let c: Vec<String> = poly.iter().map(|x| x.to_string()).collect();
                write!(f, "monogenic poly={}", c.join(","))
            }
        }
    }
}

fn reduce_powers(minpoly: &[i64], n: usize) -> Result<Vec<Vec<i64>>> {
    // theta^k in the power basis for k < 2n - 1
    let mut pows: Vec<Vec<i64>> = Vec::with_capacity(2 * n);
    for k in 0..n {
        let mut v = vec![0i64; n];
        v[k] = 1;
        pows.push(v);
    }
    for _ in n..2 * n - 1 {
        let prev = pows.last().unwrap();
        let mut v = vec![0i64; n];
        let top = prev[n - 1];
        for i in 1..n {
            v[i] = prev[i - 1];
        }
        for i in 0..n {
            v[i] = v[i]
                .checked_sub(top.checked_mul(minpoly[i]).ok_or(Error::Overflow("power basis"))?)
                .ok_or(Error::Overflow("power basis"))?;
        }
        pows.push(v);
    }
    Ok(pows)
}

impl Field {
    fn build(kind: FieldKind, minpoly: Vec<i64>, roots: Vec<Complex64>, r1: usize, index: i64) -> Result<Field> {
        let n = minpoly.len() - 1;
        let pows = reduce_powers(&minpoly, n)?;
        let mut table = vec![0i64; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    table[(i * n + j) * n + k] = pows[i + j][k];
                }
            }
        }
        let mut emb = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, r) in roots.iter().enumerate() {
            let mut z = Complex64::new(1.0, 0.0);
            for j in 0..n {
                emb[i * n + j] = z;
                z *= r;
            }
        }
        let mut f = Field {
            kind,
            n,
            r1,
            r2: (n - r1) / 2,
            disc: 0,
            minpoly,
            table,
            emb,
            tol: DEFAULT_TOL,
            class_number: None,
            units: None,
            splitting: RwLock::new(HashMap::new()),
        };
        let raw = f.basis_discriminant()?;
        let i2 = (index as i128) * (index as i128);
        if raw % i2 != 0 {
            return Err(Error::invalid(format!("index {index} incompatible with polynomial discriminant {raw}")));
        }
        f.disc = raw / i2;
        Ok(f)
    }

    /// The field of rational numbers (n = 1).
    pub fn rational() -> Field {
        Field::build(FieldKind::Rational, vec![0, 1], vec![Complex64::new(0.0, 0.0)], 1, 1)
            .expect("rational field")
    }

    /// Q(sqrt d) with its ring of integers Z[w].
    pub fn quadratic(d: i64) -> Result<Field> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::invalid(format!("d = {d} must be square-free and not 0 or 1")));
        }
        let s = (d.unsigned_abs() as f64).sqrt();
        let one_mod_four = d.rem_euclid(4) == 1;
        let minpoly = if one_mod_four { vec![-(d - 1) / 4, -1, 1] } else { vec![-d, 0, 1] };
        let (roots, r1) = if d > 0 {
            let (a, b) = if one_mod_four { ((1.0 + s) / 2.0, (1.0 - s) / 2.0) } else { (s, -s) };
            (vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)], 2)
        } else {
            let w = if one_mod_four { Complex64::new(0.5, s / 2.0) } else { Complex64::new(0.0, s) };
            (vec![w, w.conj()], 0)
        };
        Field::build(FieldKind::Quadratic { d }, minpoly, roots, r1, 1)
    }

    /// Z[theta] for a monic irreducible integer polynomial, coefficients lowest first.
    pub fn monogenic(minpoly: &[i64], claimed_index: i64) -> Result<Field> {
        if minpoly.len() < 3 {
            return Err(Error::invalid("degree must be at least 2"));
        }
        if *minpoly.last().unwrap() != 1 {
            return Err(Error::invalid("polynomial must be monic"));
        }
        if claimed_index < 1 {
            return Err(Error::invalid("claimed index must be positive"));
        }
        if !poly::integer_roots(minpoly).is_empty() {
            return Err(Error::invalid("polynomial is reducible (has a rational root)"));
        }
        let n = minpoly.len() - 1;
        let roots = poly::complex_roots(minpoly);
        let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut reals: Vec<f64> = Vec::new();
        let mut upper: Vec<Complex64> = Vec::new();
        let mut lower = 0usize;
        for z in &roots {
            if z.im.abs() <= 1e-9 * scale {
                reals.push(z.re);
            } else if z.im > 0.0 {
                upper.push(*z);
            } else {
                lower += 1;
            }
        }
        if upper.len() != lower || reals.len() + 2 * upper.len() != n {
            return Err(Error::Internal("root finder did not separate conjugate pairs".into()));
        }
        reals.sort_by(|a, b| b.total_cmp(a));
        upper.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        let r1 = reals.len();
        let mut ordered: Vec<Complex64> = reals.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        ordered.extend(upper.iter().copied());
        ordered.extend(upper.iter().map(|z| z.conj()));
        Field::build(
            FieldKind::Monogenic { poly: minpoly.to_vec(), index: claimed_index },
            minpoly.to_vec(),
            ordered,
            r1,
            claimed_index,
        )
    }

    /// Parses `rational`, `quadratic d=<int>` or `monogenic poly=<c0,...,cn> [index=<k>]`.
    pub fn parse(spec: &str) -> Result<Field> {
        let mut words = spec.split_whitespace();
        let kind = words.next().ok_or_else(|| Error::parse("empty field spec"))?;
        let mut kv: HashMap<&str, &str> = HashMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| Error::parse(format!("expected key=value, got {w:?}")))?;
            kv.insert(k, v);
        }
        let get_int = |k: &str| -> Result<i64> {
            kv.get(k)
                .ok_or_else(|| Error::parse(format!("field spec missing {k}=")))?
                .parse::<i64>()
                .map_err(|e| Error::parse(format!("bad {k}: {e}")))
        };
        let allowed: &[&str] = match kind {
            "rational" => &[],
            "quadratic" => &["d"],
            "monogenic" => &["poly", "index"],
            other => return Err(Error::parse(format!("unknown field kind {other:?}"))),
        };
        if let Some(k) = kv.keys().find(|k| !allowed.contains(k)) {
            return Err(Error::parse(format!("unknown field spec key {k:?}")));
        }
        match kind {
            "rational" => Ok(Field::rational()),
            "quadratic" => Field::quadratic(get_int("d")?),
            _ => {
                let p = kv.get("poly").ok_or_else(|| Error::parse("field spec missing poly="))?;
                let coeffs = p
                    .split(',')
                    .map(|c| c.trim().parse::<i64>().map_err(|e| Error::parse(format!("bad coefficient {c:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                let index = if kv.contains_key("index") { get_int("index")? } else { 1 };
                Field::monogenic(&coeffs, index)
            }
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Field {
        self.tol = tol;
        self
    }

    pub fn with_class_number(mut self, h: u64) -> Field {
        self.class_number = Some(h);
        self
    }

    /// Attaches user-supplied unit data; validated by [`crate::lattice::validate_units`].
    pub fn with_units(mut self, units: UnitData) -> Result<Field> {
        crate::lattice::validate_units(&self, &units)?;
        self.units = Some(units);
        Ok(self)
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }
    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }
    pub fn discriminant(&self) -> i128 {
        self.disc
    }
    pub fn minpoly(&self) -> &[i64] {
        &self.minpoly
    }
    pub fn tol(&self) -> f64 {
        self.tol
    }
    pub fn supplied_class_number(&self) -> Option<u64> {
        self.class_number
    }
    pub fn supplied_units(&self) -> Option<&UnitData> {
        self.units.as_ref()
    }
    pub fn quadratic_d(&self) -> Option<i64> {
        match self.kind {
            FieldKind::Quadratic { d } => Some(d),
            _ => None,
        }
    }
    /// The claimed index [O_K : Z[theta]] (1 for rational and quadratic fields).
    pub fn index(&self) -> i64 {
        match self.kind {
            FieldKind::Monogenic { index, .. } => index,
            _ => 1,
        }
    }

    /// Structure constant: coefficient of w_k in w_i w_j.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> i64 {
        self.table[(i * self.n + j) * self.n + k]
    }

    /// sigma_i(w_j).
    pub fn embedding_of_basis(&self, i: usize, j: usize) -> Complex64 {
        self.emb[i * self.n + j]
    }

    pub fn zero(&self) -> AlgInt {
        AlgInt::new(vec![0; self.n])
    }

    pub fn one(&self) -> AlgInt {
        self.from_int(1)
    }

    pub fn from_int(&self, a: i64) -> AlgInt {
        let mut c = vec![0; self.n];
        c[0] = a;
        AlgInt::new(c)
    }

    pub fn elem(&self, coords: &[i64]) -> Result<AlgInt> {
        if coords.len() != self.n {
            return Err(Error::invalid(format!("element needs {} coordinates, got {}", self.n, coords.len())));
        }
        Ok(AlgInt::new(coords.to_vec()))
    }

    fn check(&self, a: &AlgInt) -> Result<()> {
        if a.coords.len() != self.n {
            return Err(Error::invalid(format!("element {a} does not belong to a degree-{} field", self.n)));
        }
        Ok(())
    }

    pub fn add(&self, a: &AlgInt, b: &AlgInt) -> Result<AlgInt> {
        self.check(a)?;
        self.check(b)?;
        let c = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow("element addition")))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgInt::new(c))
    }

    pub fn sub(&self, a: &AlgInt, b: &AlgInt) -> Result<AlgInt> {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &AlgInt) -> AlgInt {
        AlgInt::new(a.coords.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &AlgInt, k: i64) -> Result<AlgInt> {
        let c = a.coords.iter().map(|x| x.checked_mul(k).ok_or(Error::Overflow("element scaling"))).collect::<Result<Vec<_>>>()?;
        Ok(AlgInt::new(c))
    }

    /// Product through the structure constants, in i128 with checked narrowing.
    pub fn mul_wide(&self, a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
        let n = self.n;
        let mut out = vec![0i128; n];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                let ab = a[i].checked_mul(b[j]).ok_or(Error::Overflow("element product"))?;
                for k in 0..n {
                    let t = self.table[(i * n + j) * n + k];
                    if t != 0 {
                        out[k] = ab
                            .checked_mul(t as i128)
                            .and_then(|v| out[k].checked_add(v))
                            .ok_or(Error::Overflow("element product"))?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, a: &AlgInt, b: &AlgInt) -> Result<AlgInt> {
        self.check(a)?;
        self.check(b)?;
        let wa: Vec<i128> = a.coords.iter().map(|&x| x as i128).collect();
        let wb: Vec<i128> = b.coords.iter().map(|&x| x as i128).collect();
        narrow(&self.mul_wide(&wa, &wb)?)
    }

    pub fn pow(&self, a: &AlgInt, e: u32) -> Result<AlgInt> {
        let mut r = self.one();
        let mut b = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b)?;
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b)?;
            }
        }
        Ok(r)
    }

    /// Matrix of multiplication by a; column j holds a * w_j. Row-major n x n.
    pub fn mult_matrix(&self, a: &AlgInt) -> Vec<i128> {
        let n = self.n;
        let mut m = vec![0i128; n * n];
        for j in 0..n {
            for i in 0..n {
                for k in 0..n {
                    m[k * n + j] += a.coords[i] as i128 * self.table[(i * n + j) * n + k] as i128;
                }
            }
        }
        m
    }

    /// The signed norm N_{K/Q}(a), the determinant of multiplication by a.
    pub fn element_norm(&self, a: &AlgInt) -> Result<i128> {
        self.check(a)?;
        linalg::det(&self.mult_matrix(a), self.n)
    }

    /// N(a) = |N_{K/Q}(a)| = #(O_K / a O_K).
    pub fn abs_norm(&self, a: &AlgInt) -> Result<u128> {
        if a.is_zero() {
            return Err(Error::invalid("norm of zero"));
        }
        Ok(self.element_norm(a)?.unsigned_abs())
    }

    pub fn trace(&self, a: &AlgInt) -> i128 {
        let m = self.mult_matrix(a);
        (0..self.n).map(|i| m[i * self.n + i]).sum()
    }

    fn basis_discriminant(&self) -> Result<i128> {
        let n = self.n;
        let mut g = vec![0i128; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut c = vec![0i64; n];
                for k in 0..n {
                    c[k] = self.table[(i * n + j) * n + k];
                }
                g[i * n + j] = self.trace(&AlgInt::new(c));
            }
        }
        linalg::det(&g, n)
    }

    /// Exact quotient a / b when it lies in O_K.
    pub fn div_exact(&self, a: &AlgInt, b: &AlgInt) -> Result<Option<AlgInt>> {
        if b.is_zero() {
            return Err(Error::invalid("division by zero"));
        }
        let rhs: Vec<i128> = a.coords.iter().map(|&x| x as i128).collect();
        let sol = linalg::solve_rational(&self.mult_matrix(b), self.n, &rhs)
            .ok_or_else(|| Error::Internal("multiplication matrix of a nonzero element is singular".into()))?;
        if sol.iter().any(|r| !r.is_integer()) {
            return Ok(None);
        }
        let c: Vec<i128> = sol.iter().map(|r| r.to_integer()).collect();
        Ok(Some(narrow(&c)?))
    }

    /// Inverse of a unit; error if a is not a unit.
    pub fn unit_inverse(&self, a: &AlgInt) -> Result<AlgInt> {
        self.div_exact(&self.one(), a)?.ok_or_else(|| Error::invalid(format!("{a} is not a unit")))
    }

    /// Galois conjugate in a quadratic field.
    pub fn conjugate(&self, a: &AlgInt) -> Result<AlgInt> {
        match self.kind {
            FieldKind::Quadratic { d } => {
                let (x, y) = (a.coords[0], a.coords[1]);
                if d.rem_euclid(4) == 1 {
                    Ok(AlgInt::new(vec![x.checked_add(y).ok_or(Error::Overflow("conjugate"))?, -y]))
                } else {
                    Ok(AlgInt::new(vec![x, -y]))
                }
            }
            FieldKind::Rational => Ok(a.clone()),
            _ => Err(Error::Unsupported("Galois conjugation outside quadratic fields".into())),
        }
    }

    /// All n complex images sigma_i(a): reals first, then upper-half-plane
    /// representatives by argument, then their conjugates.
    pub fn embed(&self, a: &AlgInt) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.emb[i * self.n + j] * a.coords[j] as f64).sum())
            .collect()
    }

    /// The Minkowski embedding: r1 real images followed by one image per conjugate pair.
    pub fn minkowski_embed(&self, a: &AlgInt) -> Vec<Complex64> {
        let mut e = self.embed(a);
        e.truncate(self.r1 + self.r2);
        e
    }

    /// Solves for coordinates of the element with the given embedding images, rounding to integers.
    pub fn from_embedding_rounded(&self, z: &[Complex64]) -> Option<AlgInt> {
        let n = self.n;
        // real system from the first r1 + r2 images (real and imaginary parts)
        let mut a = Vec::with_capacity(n * n);
        let mut b = Vec::with_capacity(n);
        for i in 0..self.r1 {
            for j in 0..n {
                a.push(self.emb[i * n + j].re);
            }
            b.push(z[i].re);
        }
        for i in self.r1..self.r1 + self.r2 {
            for j in 0..n {
                a.push(self.emb[i * n + j].re);
            }
            b.push(z[i].re);
            for j in 0..n {
                a.push(self.emb[i * n + j].im);
            }
            b.push(z[i].im);
        }
        let x = linalg::solve_f64(&a, n, &b)?;
        Some(AlgInt::new(x.iter().map(|v| v.round() as i64).collect()))
    }
}

pub(crate) fn narrow(v: &[i128]) -> Result<AlgInt> {
    let c = v.iter().map(|&x| i64::try_from(x).map_err(|_| Error::Overflow("coordinate exceeds 64 bits"))).collect::<Result<Vec<_>>>()?;
    Ok(AlgInt::new(c))
}

/// Lattice points of the closed box max|a_i| <= M, optionally restricted to
/// the annulus max|a_i| >= M1, in lexicographic order.
#[derive(Clone, Debug)]
pub struct BoxIter {
    cur: Option<Vec<i64>>,
    lo: i64,
    hi: i64,
    inner: u64,
}

impl Iterator for BoxIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            let out = self.cur.clone()?;
            // advance odometer, last coordinate fastest
            let cur = self.cur.as_mut().unwrap();
            let mut k = cur.len();
            loop {
                if k == 0 {
                    self.cur = None;
                    break;
                }
                k -= 1;
                if cur[k] < self.hi {
                    cur[k] += 1;
                    break;
                }
                cur[k] = self.lo;
            }
            if self.inner == 0 || out.iter().any(|c| c.unsigned_abs() >= self.inner) {
                return Some(out);
            }
        }
    }
}

/// Enumerates integer vectors of length n with max|a_i| <= M (and >= M1 if given).
pub fn enumerate_box(n: usize, m: f64, inner: Option<f64>) -> BoxIter {
    let hi = if m >= 0.0 { m.floor() as i64 } else { -1 };
    let inner_bound = inner.map(|x| x.max(0.0).ceil() as u64).unwrap_or(0);
    let empty = hi < 0 || inner.is_some_and(|x| x > m) || inner_bound > hi.max(0) as u64;
    BoxIter { cur: if empty { None } else { Some(vec![-hi; n]) }, lo: -hi, hi, inner: inner_bound }
}

/// Ring elements of the box of an ideal basis: sum c_i v_i with max|c_i| <= M.
pub fn enumerate_box_in_basis<'a>(
    basis: &'a [AlgInt],
    m: f64,
    inner: Option<f64>,
) -> impl Iterator<Item = AlgInt> + 'a {
    let n = basis.len();
    enumerate_box(n, m, inner).map(move |c| {
        let mut v = vec![0i64; n];
        for (ci, b) in c.iter().zip(basis) {
            for k in 0..n {
                v[k] += ci * b.coords[k];
            }
        }
        AlgInt::new(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(c: &[i64]) -> AlgInt {
        AlgInt::new(c.to_vec())
    }

    #[test]
    fn quadratic_constructor_examples() {
        let gi = Field::quadratic(-1).unwrap();
        assert_eq!(gi.degree(), 2);
        assert_eq!(gi.signature(), (0, 1));
        assert_eq!(gi.discriminant(), -4);
        assert_eq!(Field::quadratic(5).unwrap().discriminant(), 5);
        assert_eq!(Field::quadratic(2).unwrap().discriminant(), 8);
        assert_eq!(Field::quadratic(-5).unwrap().discriminant(), -20);
        assert!(Field::quadratic(4).is_err());
        assert!(Field::quadratic(1).is_err());
        assert!(Field::quadratic(0).is_err());
    }

    #[test]
    fn monogenic_constructor_examples() {
        let a = Field::monogenic(&[1, 0, 1], 1).unwrap();
        let b = Field::quadratic(-1).unwrap();
        assert_eq!(a.discriminant(), b.discriminant());
        assert_eq!(a.table, b.table);
        let c = Field::monogenic(&[-2, 0, 0, 1], 1).unwrap();
        assert_eq!(c.signature(), (1, 1));
        assert_eq!(c.discriminant(), -108);
        assert!(Field::monogenic(&[-4, 0, 1], 1).is_err());
        assert!(Field::monogenic(&[1, 0, 2], 1).is_err());
        assert!(Field::monogenic(&[1, 1], 1).is_err());
    }

    #[test]
    fn ring_ops_examples() {
        let gi = Field::quadratic(-1).unwrap();
        assert_eq!(gi.mul(&el(&[1, 1]), &el(&[1, -1])).unwrap(), el(&[2, 0]));
        let r2 = Field::quadratic(2).unwrap();
        assert_eq!(r2.mul(&el(&[1, 1]), &el(&[-1, 1])).unwrap(), el(&[1, 0]));
        let a = el(&[3, -7]);
        assert_eq!(r2.mul(&a, &r2.one()).unwrap(), a);
        assert!(r2.mul(&a, &el(&[1, 2, 3])).is_err());
    }

    #[test]
    fn norms() {
        let gi = Field::quadratic(-1).unwrap();
        assert_eq!(gi.abs_norm(&el(&[3, 4])).unwrap(), 25);
        let r2 = Field::quadratic(2).unwrap();
        assert_eq!(r2.element_norm(&el(&[1, 1])).unwrap(), -1);
        assert_eq!(r2.abs_norm(&el(&[1, 1])).unwrap(), 1);
        assert!(r2.abs_norm(&r2.zero()).is_err());
        let q5 = Field::quadratic(5).unwrap();
        // w = (1+sqrt5)/2 has norm -1
        assert_eq!(q5.element_norm(&el(&[0, 1])).unwrap(), -1);
        let c = Field::monogenic(&[-2, 0, 0, 1], 1).unwrap();
        assert_eq!(c.element_norm(&el(&[0, 1, 0])).unwrap(), 2);
    }

    #[test]
    fn structure_constants_commute_and_associate() {
        for f in [Field::quadratic(-7).unwrap(), Field::monogenic(&[-2, 0, 0, 1], 1).unwrap(), Field::monogenic(&[1, -1, 0, 0, 1], 1).unwrap()] {
            let n = f.degree();
            let basis: Vec<AlgInt> = (0..n).map(|i| AlgInt::new((0..n).map(|k| i64::from(k == i)).collect())).collect();
            for a in &basis {
                for b in &basis {
                    assert_eq!(f.mul(a, b).unwrap(), f.mul(b, a).unwrap());
                    for c in &basis {
                        let l = f.mul(&f.mul(a, b).unwrap(), c).unwrap();
                        let r = f.mul(a, &f.mul(b, c).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn embeddings_satisfy_minpoly() {
        for f in [Field::quadratic(2).unwrap(), Field::quadratic(-3).unwrap(), Field::monogenic(&[-2, 0, 0, 1], 1).unwrap(), Field::monogenic(&[1, -1, 0, 0, 1], 1).unwrap()] {
            let n = f.degree();
            for i in 0..n {
                let z = f.embedding_of_basis(i, 1.min(n - 1));
                assert!(poly::eval_complex(f.minpoly(), z).norm() < f.tol());
            }
        }
    }

    #[test]
    fn embedding_order_for_real_quadratic() {
        let f = Field::quadratic(2).unwrap();
        let e = f.embed(&el(&[0, 1]));
        assert!((e[0].re - 2f64.sqrt()).abs() < 1e-15);
        assert!((e[1].re + 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn box_enumeration_examples() {
        assert_eq!(enumerate_box(2, 1.0, None).count(), 9);
        assert_eq!(enumerate_box(2, 2.0, Some(2.0)).count(), 16);
        assert_eq!(enumerate_box(2, 0.0, None).collect::<Vec<_>>(), vec![vec![0, 0]]);
        assert_eq!(enumerate_box(2, -1.0, None).count(), 0);
        assert_eq!(enumerate_box(2, 1.0, Some(2.0)).count(), 0);
        let pts: Vec<_> = enumerate_box(2, 1.0, None).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(Field::parse("quadratic d=-1").unwrap().discriminant(), -4);
        assert_eq!(Field::parse("monogenic poly=-2,0,0,1").unwrap().degree(), 3);
        assert_eq!(Field::parse("rational").unwrap().degree(), 1);
        assert!(Field::parse("quadratic").is_err());
        assert!(Field::parse("cubic d=2").is_err());
        assert!(Field::parse("quadratic d=2 e=3").is_err());
    }

    #[test]
    fn exact_division_and_unit_inverse() {
        let gi = Field::quadratic(-1).unwrap();
        // 3 + 4i = (2 + i)^2
        assert_eq!(gi.div_exact(&el(&[3, 4]), &el(&[2, 1])).unwrap(), Some(el(&[2, 1])));
        assert_eq!(gi.div_exact(&el(&[3, 4]), &el(&[1, 1])).unwrap(), None);
        let r2 = Field::quadratic(2).unwrap();
        assert_eq!(r2.unit_inverse(&el(&[1, 1])).unwrap(), el(&[-1, 1]));
        assert!(r2.unit_inverse(&el(&[2, 0])).is_err());
    }
}
