//! Smooth cutoffs, the truncated von Mangoldt weights, the linear-forms family
//! and the empirical Goldston-Yildirim average.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, kronecker, primes_up_to, spf_table};
use crate::constellation::Shape;
use crate::error::{Error, Result};
use crate::field::{AlgInt, Field, FieldKind};
use crate::ideal::{FactoredIdeal, Ideal};
use crate::linalg::rank;
use crate::primes::DensityReport;

/// The cutoff chi: smooth, even, chi(0) = 1, supported in [-1, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum Chi {
    /// exp(1 - 1/(1 - x^2))
    Bump,
    /// 1 - |x| with the corners at 0 and 1 smoothed over width delta
    SmoothedTriangle { delta: f64 },
}

impl Default for Chi {
    fn default() -> Self {
        Chi::Bump
    }
}

impl fmt::Display for Chi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chi::Bump => write!(f, "bump"),
            Chi::SmoothedTriangle { delta } => write!(f, "smoothed-triangle:{delta}"),
        }
    }
}

impl FromStr for Chi {
    type Err = Error;

    /// "bump" or "smoothed-triangle[:delta]" (delta defaults to 0.02).
    fn from_str(s: &str) -> Result<Chi> {
        let s = s.trim();
        if s == "bump" {
            return Ok(Chi::Bump);
        }
        if let Some(rest) = s.strip_prefix("smoothed-triangle") {
            let delta = match rest.strip_prefix(':') {
                Some(d) => d.parse::<f64>().map_err(|_| Error::parse(format!("bad delta in '{s}'")))?,
                None if rest.is_empty() => 0.02,
                None => return Err(Error::parse(format!("unknown cutoff '{s}'"))),
            };
            return Chi::smoothed_triangle(delta);
        }
        Err(Error::parse(format!("unknown cutoff '{s}'")))
    }
}

// smooth step from 0 at v <= 0 to 1 at v >= 1
fn step(v: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    if v >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / v).exp();
    let b = (-1.0 / (1.0 - v)).exp();
    a / (a + b)
}

fn step_integral(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else if v >= 1.0 {
        0.5 + (v - 1.0)
    } else {
        adaptive_simpson(&step, 0.0, v, 1e-13)
    }
}

impl Chi {
    pub fn smoothed_triangle(delta: f64) -> Result<Chi> {
        if !(delta > 0.0 && delta <= 0.5) {
            return Err(Error::invalid("delta must lie in (0, 1/2]"));
        }
        Ok(Chi::SmoothedTriangle { delta })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        if x >= 1.0 {
            return 0.0;
        }
        match *self {
            Chi::Bump => (1.0 - 1.0 / (1.0 - x * x)).exp(),
            Chi::SmoothedTriangle { delta } => {
                let a = 1.0 / (1.0 - delta);
                let big = if x <= delta {
                    a * delta * step_integral(x / delta)
                } else if x <= 1.0 - delta {
                    a * (delta / 2.0 + x - delta)
                } else {
                    a * (1.0 - delta - delta * step_integral((1.0 - x) / delta))
                };
                (1.0 - big).clamp(0.0, 1.0)
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax >= 1.0 {
            return 0.0;
        }
        match *self {
            Chi::Bump => {
                let t = 1.0 - x * x;
                self.eval(x) * (-2.0 * x / (t * t))
            }
            Chi::SmoothedTriangle { delta } => {
                let phi = step(ax / delta) * step((1.0 - ax) / delta) / (1.0 - delta);
                -x.signum() * phi
            }
        }
    }

    /// c_chi = int_0^1 chi'(x)^2 dx, absolute tolerance 1e-9.
    pub fn c_chi(&self) -> f64 {
        let g = |x: f64| self.derivative(x).powi(2);
        match *self {
            Chi::Bump => adaptive_simpson(&g, 0.0, 1.0, 1e-10),
            Chi::SmoothedTriangle { delta } => {
                adaptive_simpson(&g, 0.0, delta, 1e-11)
                    + adaptive_simpson(&g, delta, 1.0 - delta, 1e-11)
                    + adaptive_simpson(&g, 1.0 - delta, 1.0, 1e-11)
            }
        }
    }
}

/// Adaptive Simpson quadrature on [a, b].
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    // split first so that narrow features are not missed by the initial estimate
    let pieces = 16;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == pieces { b } else { lo + h };
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            rec(f, lo, hi, fa, fm, fb, whole, tol / pieces as f64, 40)
        })
        .sum()
}

/// R, the cutoff, and the modulus W with its prime bound w.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightParams {
    #[serde(rename = "R")]
    pub r: f64,
    pub chi: Chi,
    pub w: f64,
    #[serde(rename = "W")]
    pub big_w: u64,
    pub c_chi: f64,
}

impl WeightParams {
    /// W defaults to the product of the primes <= w; w defaults to the largest prime factor of W.
    pub fn new(r: f64, chi: Chi, w: Option<f64>, big_w: Option<u64>) -> Result<WeightParams> {
        if !(r > 1.0) || !r.is_finite() {
            return Err(Error::invalid("R must exceed 1"));
        }
        let (w, big_w) = match (w, big_w) {
            (_, Some(0)) => return Err(Error::invalid("W must be positive")),
            (Some(w), Some(bw)) => (w, bw),
            (Some(w), None) => {
                let mut prod: u64 = 1;
                for p in primes_up_to(w.max(0.0).floor() as u64) {
                    prod = prod.checked_mul(p).ok_or(Error::Overflow("primorial W"))?;
                }
                (w, prod)
            }
            (None, Some(bw)) => (factorize(bw)?.last().map_or(1.0, |&(p, _)| p as f64), bw),
            (None, None) => (1.0, 1),
        };
        if let Some(&(p, _)) = factorize(big_w)?.iter().find(|&&(p, _)| p as f64 > w) {
            return Err(Error::invalid(format!("W = {big_w} has the prime factor {p} > w = {w}")));
        }
        let c_chi = chi.c_chi();
        if c_chi <= 1.0 {
            return Err(Error::Internal(format!("c_chi = {c_chi} is not above 1")));
        }
        Ok(WeightParams { r, chi, w, big_w, c_chi })
    }

    pub fn log_r(&self) -> f64 {
        self.r.ln()
    }

    fn weight(&self, norm: u64, mu: i32) -> f64 {
        mu as f64 * self.chi.eval((norm as f64).ln() / self.log_r())
    }
}

/// Lambda_{R,chi}(a) = log R * sum over b | a with N(b) <= R of mu(b) chi(log N(b)/log R).
pub fn lambda(field: &Field, a: &Ideal, params: &WeightParams) -> Result<f64> {
    let f = field.factor_ideal(a)?;
    lambda_factored(field, &f, params)
}

fn lambda_factored(field: &Field, f: &FactoredIdeal, params: &WeightParams) -> Result<f64> {
    let divs = field.divisors_from_factorization(f, params.r, true)?;
    let s: f64 = divs.iter().map(|(d, mu)| params.weight(d.norm(), *mu)).sum();
    Ok(params.log_r() * s)
}

/// Lambda of the principal ideal of a nonzero element.
pub fn lambda_element(field: &Field, a: &AlgInt, params: &WeightParams) -> Result<f64> {
    if a.is_zero() {
        return Err(Error::invalid("Lambda of zero"));
    }
    lambda(field, &field.principal_ideal(a)?, params)
}

/// Lambda^b(a) = Lambda(a b^-1) for a in b.
pub fn lambda_in_ideal(field: &Field, a: &AlgInt, b: &Ideal, params: &WeightParams) -> Result<f64> {
    if a.is_zero() {
        return Err(Error::invalid("Lambda of zero"));
    }
    if !b.contains(a) {
        return Err(Error::invalid(format!("{a} is not in the ideal {b}")));
    }
    let mut fa = field.factor_ideal(&field.principal_ideal(a)?)?;
    for (q, e) in field.factor_ideal(b)?.factors {
        let cur = fa.factors.get_mut(&q).ok_or_else(|| Error::Internal("ideal quotient is not integral".into()))?;
        *cur -= e;
        if *cur == 0 {
            fa.factors.remove(&q);
        }
    }
    lambda_factored(field, &fa, params)
}

/// One map psi_S^(omega): Z^(2r+2) -> Z^dim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    /// the excluded index j in 1..=r+1
    pub j: usize,
    /// (i, omega_i) for i in e_j = [r+1] \ {j}
    pub omega: Vec<(usize, u8)>,
    /// dim rows, 2r+2 columns ordered a_1^0..a_{r+1}^0, a_1^1..a_{r+1}^1
    pub matrix: Vec<Vec<i64>>,
}

impl LinearForm {
    pub fn column(i: usize, bit: u8, r: usize) -> usize {
        bit as usize * (r + 1) + (i - 1)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// The set A^(omega) of columns with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        let cols = self.matrix.first().map_or(0, |r| r.len());
        (0..cols).filter(|&c| self.matrix.iter().any(|row| row[c] != 0)).collect()
    }

    fn rows_i128(&self) -> Vec<Vec<i128>> {
        self.matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearFormFamily {
    pub r: usize,
    pub dim: usize,
    /// s_1..s_r (the nonzero points of S)
    pub points: Vec<Vec<i64>>,
    pub forms: Vec<LinearForm>,
}

/// ker(f) is not contained in ker(g), i.e. rank of the stacked rows exceeds rank(f).
pub fn kernel_not_contained(f: &LinearForm, g: &LinearForm) -> Result<bool> {
    let rf = rank(&f.rows_i128())?;
    let mut both = f.rows_i128();
    both.extend(g.rows_i128());
    Ok(rank(&both)? > rf)
}

/// All (r+1) 2^r maps psi_S^(omega) of a standard shape.
pub fn build_linear_forms(shape: &Shape) -> Result<LinearFormFamily> {
    if !shape.is_standard()? {
        return Err(Error::invalid("linear forms need a standard shape"));
    }
    let dim = shape.dim();
    let mut pts: Vec<Vec<i64>> = shape.points().iter().filter(|p| p.iter().any(|&c| c != 0)).cloned().collect();
    pts.sort();
    let r = pts.len();
    if r == 0 {
        return Err(Error::invalid("shape {0} is degenerate"));
    }
    if r > 20 {
        return Err(Error::Unsupported(format!("shape with {} points gives too many forms", r + 1)));
    }
    let cols = 2 * r + 2;
    let mut forms = Vec::with_capacity((r + 1) << r);
    for j in 1..=r + 1 {
        let e: Vec<usize> = (1..=r + 1).filter(|&i| i != j).collect();
        for mask in 0u32..(1 << r) {
            let omega: Vec<(usize, u8)> = e.iter().enumerate().map(|(k, &i)| (i, ((mask >> k) & 1) as u8)).collect();
            let mut m = vec![vec![0i64; cols]; dim];
            for &(i, bit) in &omega {
                let coef: Vec<i64> = if j <= r {
                    if i <= r {
                        pts[i - 1].iter().zip(&pts[j - 1]).map(|(a, b)| a - b).collect()
                    } else {
                        pts[j - 1].clone()
                    }
                } else {
                    pts[i - 1].clone()
                };
                let c = LinearForm::column(i, bit, r);
                for (row, v) in m.iter_mut().zip(coef) {
                    row[c] = v;
                }
            }
            forms.push(LinearForm { j, omega, matrix: m });
        }
    }
    let fam = LinearFormFamily { r, dim, points: pts, forms };
    for f in &fam.forms {
        let want: Vec<usize> = f.omega.iter().map(|&(i, b)| LinearForm::column(i, b, r)).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        if f.support() != want {
            return Err(Error::Internal("linear form support differs from A^(omega)".into()));
        }
    }
    Ok(fam)
}

/// Checks kernel non-containment for every ordered pair of distinct maps.
pub fn check_kernel_independence(fam: &LinearFormFamily) -> Result<usize> {
    let mut pairs = 0;
    for (a, f) in fam.forms.iter().enumerate() {
        for (b, g) in fam.forms.iter().enumerate() {
            if a == b {
                continue;
            }
            if !kernel_not_contained(f, g)? {
                return Err(Error::Internal(format!("ker of form {a} lies in ker of form {b}")));
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

/// Inputs of the Goldston-Yildirim average E[prod_j Lambda(W psi_j(x) + b_j)^2].
#[derive(Clone, Debug)]
pub struct GyInput {
    pub params: WeightParams,
    /// n x t integer matrices into the coordinates of O_K
    pub forms: Vec<Vec<Vec<i64>>>,
    pub shifts: Vec<AlgInt>,
    /// inclusive bounds of the box in Z^t
    pub box_lo: Vec<i64>,
    pub box_hi: Vec<i64>,
    /// kappa to use for K != Q; estimated at `kappa_l` when absent
    pub kappa: Option<f64>,
    pub kappa_l: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GyReport {
    pub empirical: f64,
    pub main_term: f64,
    pub ratio: f64,
    pub kappa: f64,
    pub c_chi: f64,
    pub phi_w: u128,
    pub points: u64,
    pub zero_values: u64,
    pub warnings: Vec<String>,
}

const GY_CHUNK: u64 = 1 << 15;

/// Empirical average against the main term (W^n c_chi log R / (phi_K(W) kappa))^m.
/// Points where some theta_j vanishes contribute 0 and are counted in `zero_values`.
pub fn gy_average(field: &Field, input: &GyInput) -> Result<GyReport> {
    let p = &input.params;
    let n = field.degree();
    let m = input.forms.len();
    let t = input.box_lo.len();
    if m == 0 || input.shifts.len() != m || input.box_hi.len() != t {
        return Err(Error::invalid("need m >= 1 forms, m shifts and matching box bounds"));
    }
    for f in &input.forms {
        if f.len() != n || f.iter().any(|row| row.len() != t) {
            return Err(Error::invalid(format!("each form must be a {n} x {t} matrix")));
        }
    }
    for b in &input.shifts {
        if b.coords.len() != n {
            return Err(Error::invalid("shift has the wrong degree"));
        }
    }
    let mut warnings = Vec::new();
    let w_ideal = field.principal_ideal(&field.from_int(p.big_w as i64))?;
    for b in &input.shifts {
        let bi = if b.is_zero() { w_ideal.clone() } else { field.principal_ideal(b)? };
        if !field.coprime(&bi, &w_ideal)? {
            return Err(Error::invalid(format!("shift {b} is not coprime to W = {}", p.big_w)));
        }
    }
    let mut total: u64 = 1;
    let need = p.r.powi(4 * m as i32 + 1);
    for (lo, hi) in input.box_lo.iter().zip(&input.box_hi) {
        if hi < lo {
            return Err(Error::invalid("empty box"));
        }
        let side = (hi - lo + 1) as u64;
        if (side as f64) < need {
            warnings.push(format!("box side {side} is below R^(4m+1) = {need:.3e}"));
        }
        total = total.checked_mul(side).ok_or(Error::Overflow("box size"))?;
    }

    // squarefree ideals of norm <= R with their weights mu chi(log N / log R)
    let mut all_primes = FactoredIdeal::default();
    for q in primes_up_to(p.r.floor() as u64) {
        for pi in field.primes_above(q)?.iter() {
            if pi.ideal.norm() as f64 <= p.r {
                all_primes.factors.insert(pi.ideal.clone(), 1);
            }
        }
    }
    let divs: Vec<(Ideal, f64)> = field
        .divisors_from_factorization(&all_primes, p.r, true)?
        .into_iter()
        .map(|(d, mu)| {
            let wgt = p.weight(d.norm(), mu);
            (d, wgt)
        })
        .collect();
    let rational: Vec<(i128, f64)> = if matches!(field.kind(), FieldKind::Rational) {
        divs.iter().map(|(d, w)| (d.norm() as i128, *w)).collect()
    } else {
        Vec::new()
    };
    let log_r = p.log_r();
    let big_w = p.big_w as i128;

    let lambda_at = |theta: &[i128]| -> Result<Option<f64>> {
        if theta.iter().all(|&c| c == 0) {
            return Ok(None);
        }
        let s: f64 = if !rational.is_empty() {
            rational.iter().filter(|(d, _)| theta[0] % d == 0).map(|(_, w)| w).sum()
        } else {
            let a = crate::field::narrow(theta)?;
            divs.iter().filter(|(d, _)| d.contains(&a)).map(|(_, w)| w).sum()
        };
        Ok(Some(log_r * s))
    };

    let chunks = total.div_ceil(GY_CHUNK);
    let partial: Vec<Result<(f64, u64)>> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut acc = 0.0f64;
            let mut zeros = 0u64;
            let mut x = vec![0i64; t];
            for idx in ci * GY_CHUNK..((ci + 1) * GY_CHUNK).min(total) {
                // mixed-radix decode, last coordinate fastest
                let mut rem = idx;
                for k in (0..t).rev() {
                    let side = (input.box_hi[k] - input.box_lo[k] + 1) as u64;
                    x[k] = input.box_lo[k] + (rem % side) as i64;
                    rem /= side;
                }
                let mut prod = 1.0f64;
                let mut zero = false;
                for (f, b) in input.forms.iter().zip(&input.shifts) {
                    let theta: Vec<i128> = f
                        .iter()
                        .zip(&b.coords)
                        .map(|(row, &bc)| big_w * row.iter().zip(&x).map(|(&a, &xi)| a as i128 * xi as i128).sum::<i128>() + bc as i128)
                        .collect();
                    match lambda_at(&theta)? {
                        Some(l) => prod *= l * l,
                        None => {
                            zero = true;
                            break;
                        }
                    }
                }
                if zero {
                    zeros += 1;
                } else {
                    acc += prod;
                }
            }
            Ok((acc, zeros))
        })
        .collect();
    let mut sum = 0.0;
    let mut zero_values = 0;
    for r in partial {
        let (a, z) = r?;
        sum += a;
        zero_values += z;
    }
    let empirical = sum / total as f64;
    let kappa = match (field.kind(), input.kappa) {
        (FieldKind::Rational, _) => 1.0,
        (_, Some(k)) => k,
        _ => estimate_kappa(field, input.kappa_l)?.ratio,
    };
    let phi_w = field.totient_k(&w_ideal)?;
    let base = (p.big_w as f64).powi(n as i32) * p.c_chi * log_r / (phi_w as f64 * kappa);
    let main_term = base.powi(m as i32);
    Ok(GyReport { empirical, main_term, ratio: empirical / main_term, kappa, c_chi: p.c_chi, phi_w, points: total, zero_values, warnings })
}

/// Number of ideals of norm p^k for each k <= kmax, given residue degrees above p.
fn local_ideal_counts(degrees: &[u32], kmax: usize) -> Vec<u64> {
    let mut c = vec![0u64; kmax + 1];
    c[0] = 1;
    for &f in degrees {
        let f = f as usize;
        for k in f..=kmax {
            c[k] += c[k - f];
        }
    }
    c
}

/// #{a : N(a) <= L} / L from the multiplicative ideal-counting function.
pub fn estimate_kappa(field: &Field, l: f64) -> Result<DensityReport> {
    let start = Instant::now();
    if l < 10.0 {
        return Err(Error::invalid("L must be at least 10"));
    }
    if l > 1e9 {
        return Err(Error::Infeasible(format!("ideal counting up to {l:.3e}")));
    }
    let lim = l.floor() as usize;
    let spf = spf_table(lim);
    let dk = field.discriminant() as i64;
    let mut local: HashMap<u64, Vec<u64>> = HashMap::new();
    if let FieldKind::Monogenic { .. } = field.kind() {
        for p in primes_up_to(lim as u64) {
            let degs: Vec<u32> = field.primes_above(p)?.iter().map(|q| q.f).collect();
            let kmax = ((lim as f64).ln() / (p as f64).ln()).floor() as usize + 1;
            local.insert(p, local_ideal_counts(&degs, kmax));
        }
    }
    let local_count = |p: u64, k: usize| -> u64 {
        match field.kind() {
            FieldKind::Rational => 1,
            FieldKind::Quadratic { .. } => match kronecker(dk, p as i64) {
                1 => k as u64 + 1,
                0 => 1,
                _ => u64::from(k % 2 == 0),
            },
            FieldKind::Monogenic { .. } => local[&p][k],
        }
    };
    let mut a = vec![0u64; lim + 1];
    a[1] = 1;
    let mut total: u64 = 1;
    for n in 2..=lim {
        let p = spf[n] as usize;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        a[n] = local_count(p as u64, k) * a[m];
        total += a[n];
    }
    let mut rep = DensityReport {
        experiment: "kappa".into(),
        field: field.to_string(),
        scale: l,
        count: total,
        reference: l,
        ratio: total as f64 / l,
        seconds: start.elapsed().as_secs_f64(),
        extra: BTreeMap::new(),
    };
    rep.extra.insert("kappa".into(), rep.ratio);
    Ok(rep)
}
