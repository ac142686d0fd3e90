//! Log embedding, unit data and the explicit fundamental domain D_K(eps, sigma)
//! for the action of the unit group, with canonical associates and orbit counts.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::isqrt;
use crate::error::{Error, Result};
use crate::field::{enumerate_box, AlgInt, Field, FieldKind};
use crate::linalg;

/// Upper bound on continued-fraction steps in the unit search.
pub const CF_STEP_CAP: usize = 1_000_000;

/// Torsion and fundamental units of O_K.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitData {
    pub torsion_order: u32,
    pub torsion_generator: AlgInt,
    pub fundamental: Vec<AlgInt>,
}

impl UnitData {
    pub fn rank(&self) -> usize {
        self.fundamental.len()
    }
}

/// u0 = (1,...,1, sqrt2,...,sqrt2) with r1 ones and r2 entries sqrt 2.
pub fn u0(field: &Field) -> Vec<f64> {
    let (r1, r2) = field.signature();
    let mut v = vec![1.0; r1];
    v.extend(std::iter::repeat_n(SQRT_2, r2));
    v
}

/// Weighted log embedding: log|sigma_i(a)| on real places, sqrt2 log|sigma_j(a)| on complex ones.
pub fn log_embed(field: &Field, a: &AlgInt) -> Result<Vec<f64>> {
    if a.is_zero() {
        return Err(Error::invalid("log embedding of zero"));
    }
    let w = u0(field);
    Ok(field.minkowski_embed(a).iter().zip(&w).map(|(z, wi)| wi * z.norm().ln()).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal projection onto the hyperplane H = u0^perp.
pub fn project_h(field: &Field, v: &[f64]) -> Result<Vec<f64>> {
    let u = u0(field);
    if v.len() != u.len() {
        return Err(Error::invalid(format!("vector of length {} does not match r1 + r2 = {}", v.len(), u.len())));
    }
    let t = dot(v, &u) / dot(&u, &u);
    Ok(v.iter().zip(&u).map(|(x, ui)| x - t * ui).collect())
}

fn torsion_check(field: &Field, g: &AlgInt, order: u32) -> Result<bool> {
    let mut x = g.clone();
    for k in 1..=order {
        if x == field.one() {
            return Ok(k == order);
        }
        x = field.mul(&x, g)?;
    }
    Ok(false)
}

/// Checks norms, torsion order, rank and numerical independence of user units.
pub fn validate_units(field: &Field, u: &UnitData) -> Result<()> {
    let (r1, r2) = field.signature();
    if u.fundamental.len() + 1 != r1 + r2 {
        return Err(Error::invalid(format!("expected {} fundamental units, got {}", r1 + r2 - 1, u.fundamental.len())));
    }
    for e in &u.fundamental {
        if field.abs_norm(e)? != 1 {
            return Err(Error::invalid(format!("{e} is not a unit")));
        }
    }
    if !torsion_check(field, &u.torsion_generator, u.torsion_order)? {
        return Err(Error::invalid(format!("torsion generator does not have order {}", u.torsion_order)));
    }
    if !u.fundamental.is_empty() {
        let vecs = u.fundamental.iter().map(|e| log_embed(field, e)).collect::<Result<Vec<_>>>()?;
        let k = vecs.len();
        let g: Vec<f64> = (0..k * k).map(|t| dot(&vecs[t / k], &vecs[t % k])).collect();
        if linalg::det_f64(&g, k) <= field.tol() {
            return Err(Error::invalid("unit log vectors are numerically dependent"));
        }
    }
    Ok(())
}

/// Fundamental unit of a real quadratic field from the continued fraction of w.
fn real_quadratic_unit(field: &Field, d: i64) -> Result<AlgInt> {
    let one_mod_four = d.rem_euclid(4) == 1;
    let s = isqrt(d as u128) as i128;
    let d = d as i128;
    let (mut pp, mut qq) = if one_mod_four { (1i128, 2i128) } else { (0i128, 1i128) };
    let (mut p_prev, mut p_cur) = (0i128, 1i128);
    let (mut q_prev, mut q_cur) = (1i128, 0i128);
    let ovf = || Error::Overflow("continued fraction unit search");
    for _ in 0..CF_STEP_CAP {
        let a = (pp + s).div_euclid(qq);
        let p_next = a.checked_mul(p_cur).and_then(|x| x.checked_add(p_prev)).ok_or_else(ovf)?;
        let q_next = a.checked_mul(q_cur).and_then(|x| x.checked_add(q_prev)).ok_or_else(ovf)?;
        (p_prev, p_cur) = (p_cur, p_next);
        (q_prev, q_cur) = (q_cur, q_next);
        let (x, y) = if one_mod_four { (p_cur - q_cur, q_cur) } else { (p_cur, q_cur) };
        if let (Ok(x), Ok(y)) = (i64::try_from(x), i64::try_from(y)) {
            let cand = AlgInt::new(vec![x, y]);
            if field.element_norm(&cand).map(|n| n.abs() == 1).unwrap_or(false) {
                return Ok(cand);
            }
        } else {
            return Err(ovf());
        }
        pp = a * qq - pp;
        qq = (d - pp * pp) / qq;
    }
    Err(Error::Unsupported(format!("continued fraction period exceeds {CF_STEP_CAP}")))
}

/// Unit data: user-supplied if present, otherwise computed for Q and quadratic fields.
pub fn fundamental_units(field: &Field) -> Result<UnitData> {
    if let Some(u) = field.supplied_units() {
        return Ok(u.clone());
    }
    match field.kind() {
        FieldKind::Rational => Ok(UnitData { torsion_order: 2, torsion_generator: field.from_int(-1), fundamental: vec![] }),
        FieldKind::Quadratic { d } => {
            let d = *d;
            if d < 0 {
                let (order, gen) = match d {
                    -1 => (4, AlgInt::new(vec![0, 1])),
                    -3 => (6, AlgInt::new(vec![0, 1])),
                    _ => (2, field.from_int(-1)),
                };
                Ok(UnitData { torsion_order: order, torsion_generator: gen, fundamental: vec![] })
            } else {
                Ok(UnitData { torsion_order: 2, torsion_generator: field.from_int(-1), fundamental: vec![real_quadratic_unit(field, d)?] })
            }
        }
        FieldKind::Monogenic { .. } => Err(Error::Unsupported("units of a general field must be supplied".into())),
    }
}

/// Theta = max_i sum_j |sigma_i(w_j)|, so that |sigma_i(a)| <= Theta ||a||.
pub fn theta(field: &Field) -> f64 {
    let n = field.degree();
    (0..n).map(|i| (0..n).map(|j| field.embedding_of_basis(i, j).norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// The fundamental domain D_K(eps, sigma) together with the constants of the orbit lemma.
#[derive(Clone, Debug)]
pub struct DomainSpec {
    field: Arc<Field>,
    pub units: UnitData,
    pub sigma_index: usize,
    pub u0: Vec<f64>,
    /// u_i = L(eps_i), i = 1..k
    pub unit_vectors: Vec<Vec<f64>>,
    gram_inv: Vec<f64>,
    unit_inverses: Vec<AlgInt>,
    pub theta: f64,
    pub xi: f64,
    /// minimal c with F ⊆ cT for the centred unit cell F
    pub c: f64,
    tol: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DomainSpecJson {
    pub field: String,
    pub d: Option<i64>,
    pub units: Vec<Vec<i64>>,
    pub torsion_generator: Vec<i64>,
    pub sigma_index: usize,
    pub torsion_order: u32,
    pub theta: f64,
    pub xi: f64,
}

fn simplex_volume(vertices: &[Vec<f64>]) -> f64 {
    let k = vertices.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let diffs: Vec<Vec<f64>> = vertices[1..].iter().map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect()).collect();
    let g: Vec<f64> = (0..k * k).map(|t| dot(&diffs[t / k], &diffs[t % k])).collect();
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    linalg::det_f64(&g, k).max(0.0).sqrt() / fact
}

impl DomainSpec {
    pub fn new(field: Arc<Field>, units: UnitData, sigma_index: usize) -> Result<DomainSpec> {
        let (r1, r2) = field.signature();
        let m = r1 + r2;
        if sigma_index >= m {
            return Err(Error::invalid(format!("sigma index {sigma_index} out of range 0..{m}")));
        }
        validate_units(&field, &units)?;
        let n = field.degree();
        let k = units.rank();
        let u0v = u0(&field);
        let unit_vectors = units.fundamental.iter().map(|e| log_embed(&field, e)).collect::<Result<Vec<_>>>()?;
        let gram: Vec<f64> = (0..k * k).map(|t| dot(&unit_vectors[t / k], &unit_vectors[t % k])).collect();
        let mut gram_inv = vec![0.0; k * k];
        for j in 0..k {
            let e: Vec<f64> = (0..k).map(|i| f64::from(i == j)).collect();
            let col = linalg::solve_f64(&gram, k, &e).ok_or_else(|| Error::invalid("ill-conditioned unit basis"))?;
            for i in 0..k {
                gram_inv[i * k + j] = col[i];
            }
        }
        let unit_inverses = units.fundamental.iter().map(|e| field.unit_inverse(e)).collect::<Result<Vec<_>>>()?;
        let th = theta(&field);
        // T = (1/n)(u0 + (-inf,0]^m) ∩ H is the simplex with vertices u0/n - e_i/u0_i
        let t_vertices: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..m).map(|l| u0v[l] / n as f64 - if l == i { 1.0 / u0v[i] } else { 0.0 }).collect())
            .collect();
        let vol_t = simplex_volume(&t_vertices);
        let vol_f = if k == 0 { 1.0 } else { linalg::det_f64(&gram, k).sqrt() };
        let mut c = 0.0f64;
        if k > 0 {
            for mask in 0..(1u32 << k) {
                let mut v = vec![0.0; m];
                for (i, u) in unit_vectors.iter().enumerate() {
                    let s = if mask >> i & 1 == 1 { 0.5 } else { -0.5 };
                    for l in 0..m {
                        v[l] += s * u[l];
                    }
                }
                for l in 0..m {
                    c = c.max(n as f64 * v[l] / u0v[l]);
                }
            }
        }
        let xi = (units.torsion_order as f64 * vol_t / vol_f).max(c.exp() * th.powi(n as i32));
        let tol = field.tol();
        Ok(DomainSpec { field, units, sigma_index, u0: u0v, unit_vectors, gram_inv, unit_inverses, theta: th, xi, c, tol })
    }

    /// The domain with computed units and sigma = first embedding.
    pub fn standard(field: Arc<Field>) -> Result<DomainSpec> {
        let u = fundamental_units(&field)?;
        DomainSpec::new(field, u, 0)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.units.rank()
    }

    pub fn to_json(&self) -> DomainSpecJson {
        DomainSpecJson {
            field: self.field.to_string(),
            d: self.field.quadratic_d(),
            units: self.units.fundamental.iter().map(|e| e.coords.clone()).collect(),
            torsion_generator: self.units.torsion_generator.coords.clone(),
            sigma_index: self.sigma_index,
            torsion_order: self.units.torsion_order,
            theta: self.theta,
            xi: self.xi,
        }
    }

    /// Coordinates y_1..y_k of L(a) in the basis u_1..u_k (the u0 component is dropped).
    pub fn unit_coordinates(&self, a: &AlgInt) -> Result<Vec<f64>> {
        let l = log_embed(&self.field, a)?;
        let k = self.rank();
        let rhs: Vec<f64> = self.unit_vectors.iter().map(|u| dot(&l, u)).collect();
        Ok((0..k).map(|i| (0..k).map(|j| self.gram_inv[i * k + j] * rhs[j]).sum()).collect())
    }

    fn arg_in_window(&self, a: &AlgInt) -> bool {
        let z: Complex64 = self.field.minkowski_embed(a)[self.sigma_index];
        let mut t = z.arg();
        if t < -self.tol {
            t += 2.0 * PI;
        }
        t >= -self.tol && t < 2.0 * PI / self.units.torsion_order as f64 - self.tol
    }

    /// Membership in D_K(eps, sigma): y_i ∈ [0,1) (tested as [-tol, 1-tol)) and
    /// 0 <= arg sigma(a) < 2 pi / #mu.
    pub fn in_domain(&self, a: &AlgInt) -> Result<bool> {
        let y = self.unit_coordinates(a)?;
        if y.iter().any(|&v| v < -self.tol || v >= 1.0 - self.tol) {
            return Ok(false);
        }
        Ok(self.arg_in_window(a))
    }

    fn unit_power(&self, i: usize, m: i64) -> Result<AlgInt> {
        let base = if m >= 0 { &self.units.fundamental[i] } else { &self.unit_inverses[i] };
        let e = u32::try_from(m.unsigned_abs()).map_err(|_| Error::Overflow("unit exponent"))?;
        self.field.pow(base, e)
    }

    /// The unique associate of a inside the domain.
    pub fn canonical_associate(&self, a: &AlgInt) -> Result<AlgInt> {
        let y = self.unit_coordinates(a)?;
        let mut b = a.clone();
        for (i, yi) in y.iter().enumerate() {
            let m = (yi + self.tol).floor() as i64;
            if m != 0 {
                b = self.field.mul(&b, &self.unit_power(i, -m)?)?;
            }
        }
        // correct rounding at cell walls
        for _ in 0..4 {
            let y = self.unit_coordinates(&b)?;
            let mut moved = false;
            for (i, yi) in y.iter().enumerate() {
                if *yi < -self.tol {
                    b = self.field.mul(&b, &self.units.fundamental[i])?;
                    moved = true;
                } else if *yi >= 1.0 - self.tol {
                    b = self.field.mul(&b, &self.unit_inverses[i])?;
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        let mut c = b;
        for _ in 0..self.units.torsion_order {
            if self.arg_in_window(&c) {
                return Ok(c);
            }
            c = self.field.mul(&c, &self.units.torsion_generator)?;
        }
        Err(Error::Internal(format!("no torsion twist of {a} lands in the argument window")))
    }

    /// (C_min, C_max): extremes of N(a)/||a||^n over nonzero box points in the domain.
    pub fn nl_constants(&self, m: f64) -> Result<(f64, f64)> {
        let n = self.field.degree() as i32;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for c in enumerate_box(self.field.degree(), m, Some(1.0)) {
            let a = AlgInt::new(c);
            if self.in_domain(&a)? {
                let r = self.field.abs_norm(&a)? as f64 / (a.linf() as f64).powi(n);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        if hi == 0.0 {
            return Err(Error::invalid("no domain points in the box; increase M"));
        }
        Ok((lo, hi))
    }

    /// Xi (log(Xi M^n / N(a)))^k, the orbit-size bound; None when N(a) > Xi M^n.
    pub fn orbit_bound(&self, norm: f64, m: f64) -> Option<f64> {
        let n = self.field.degree() as i32;
        let big = self.xi * m.powi(n);
        if norm > big {
            return None;
        }
        Some(self.xi * (big / norm).ln().powi(self.rank() as i32))
    }

    /// #(units * a ∩ box(M)), exactly.
    pub fn orbit_count(&self, a: &AlgInt, m: f64) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::invalid("orbit of zero"));
        }
        let field = &self.field;
        let k = self.rank();
        let n = field.degree();
        let norm = field.abs_norm(a)? as f64;
        let cube = if k == 0 {
            vec![vec![]]
        } else {
            // |sigma_i(b)| <= Theta ||b|| <= Theta M bounds the log coordinates of b in H
            let mm = self.u0.len();
            let top = (self.theta * m.max(1.0)).ln();
            let upper: Vec<f64> = (0..mm).map(|i| self.u0[i] * (top - norm.ln() / n as f64)).collect();
            let pos: f64 = (0..mm).map(|j| self.u0[j] * upper[j].max(0.0)).sum();
            let radius: f64 = (0..mm)
                .map(|i| {
                    let lower = -(pos - self.u0[i] * upper[i].max(0.0)) / self.u0[i];
                    upper[i].abs().max(lower.abs())
                })
                .map(|b| b * b)
                .sum::<f64>()
                .sqrt();
            let ya = self.unit_coordinates(a)?;
            let span = radius;
            // |y_i - ya_i| <= |row_i(G^-1 U^T)| * span
            let mut ranges = Vec::with_capacity(k);
            for i in 0..k {
                let row: Vec<f64> = (0..mm).map(|l| (0..k).map(|j| self.gram_inv[i * k + j] * self.unit_vectors[j][l]).sum()).collect();
                let w = dot(&row, &row).sqrt() * span + 1.0;
                ranges.push(((-ya[i] - w).floor() as i64, (-ya[i] + w).ceil() as i64));
            }
            let mut pts: Vec<Vec<i64>> = vec![vec![]];
            for (lo, hi) in ranges {
                pts = pts.into_iter().flat_map(|p| (lo..=hi).map(move |v| { let mut q = p.clone(); q.push(v); q })).collect();
            }
            pts
        };
        let bound = m.floor().max(-1.0);
        let mut count = 0u64;
        'outer: for e in cube {
            let mut b = a.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei != 0 {
                    match self.unit_power(i, ei).and_then(|u| field.mul(&b, &u)) {
                        Ok(v) => b = v,
                        Err(Error::Overflow(_)) => continue 'outer,
                        Err(err) => return Err(err),
                    }
                }
            }
            for _ in 0..self.units.torsion_order {
                if (b.linf() as f64) <= bound {
                    count += 1;
                }
                b = field.mul(&b, &self.units.torsion_generator)?;
            }
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(c: &[i64]) -> AlgInt {
        AlgInt::new(c.to_vec())
    }

    fn domain(d: i64) -> DomainSpec {
        DomainSpec::standard(Arc::new(Field::quadratic(d).unwrap())).unwrap()
    }

    #[test]
    fn units_of_quadratic_fields() {
        let u = fundamental_units(&Field::quadratic(2).unwrap()).unwrap();
        assert_eq!(u.fundamental, vec![el(&[1, 1])]);
        let u = fundamental_units(&Field::quadratic(-1).unwrap()).unwrap();
        assert_eq!((u.torsion_order, u.rank()), (4, 0));
        assert_eq!(u.torsion_generator, el(&[0, 1]));
        let u = fundamental_units(&Field::quadratic(5).unwrap()).unwrap();
        assert_eq!(u.fundamental, vec![el(&[0, 1])]);
        assert_eq!(fundamental_units(&Field::quadratic(7).unwrap()).unwrap().fundamental, vec![el(&[8, 3])]);
        assert_eq!(fundamental_units(&Field::quadratic(13).unwrap()).unwrap().fundamental, vec![el(&[1, 1])]);
        assert_eq!(fundamental_units(&Field::quadratic(-3).unwrap()).unwrap().torsion_order, 6);
        assert_eq!(fundamental_units(&Field::quadratic(-5).unwrap()).unwrap().torsion_order, 2);
        assert!(fundamental_units(&Field::monogenic(&[-2, 0, 0, 1], 1).unwrap()).is_err());
    }

    #[test]
    fn log_embedding_examples() {
        let f = Field::quadratic(2).unwrap();
        let l = log_embed(&f, &el(&[1, 1])).unwrap();
        let e = (1.0 + SQRT_2).ln();
        assert!((l[0] - e).abs() < 1e-12 && (l[1] + e).abs() < 1e-12);
        let q = Field::rational();
        assert!((log_embed(&q, &el(&[2])).unwrap()[0] - 2f64.ln()).abs() < 1e-15);
        let gi = Field::quadratic(-1).unwrap();
        let l = log_embed(&gi, &el(&[0, 1])).unwrap();
        assert!(dot(&l, &u0(&gi)).abs() < 1e-15);
        let l = log_embed(&gi, &el(&[2, 1])).unwrap();
        assert!((dot(&l, &u0(&gi)) - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let f = Field::monogenic(&[-2, 0, 0, 1], 1).unwrap();
        let u = u0(&f);
        assert!(project_h(&f, &u).unwrap().iter().all(|x| x.abs() < 1e-15));
        let v = project_h(&f, &[0.3, -1.7]).unwrap();
        let w = project_h(&f, &v).unwrap();
        assert!(v.iter().zip(&w).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(project_h(&f, &[1.0]).is_err());
    }

    #[test]
    fn sqrt2_domain_examples() {
        let d = domain(2);
        assert!(d.in_domain(&el(&[3, 1])).unwrap());
        assert!(!d.in_domain(&el(&[1, 1])).unwrap());
        assert!(d.in_domain(&el(&[0, 1])).unwrap());
        assert_eq!(d.canonical_associate(&el(&[1, 1])).unwrap(), el(&[1, 0]));
        let xi = 2.0 / (1.0 + SQRT_2).ln();
        let alt = (1.0 + SQRT_2) * (1.0 + SQRT_2).powi(2);
        assert!((d.xi - xi.max(alt)).abs() < 1e-9);
        assert!((d.theta - (1.0 + SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_canonical_associate() {
        let d = domain(-1);
        assert_eq!(d.canonical_associate(&el(&[-1, 1])).unwrap(), el(&[1, 1]));
        let a = el(&[3, 2]);
        assert_eq!(d.canonical_associate(&a).unwrap(), a);
    }

    #[test]
    fn orbit_count_examples() {
        let d = domain(2);
        assert_eq!(d.orbit_count(&el(&[0, 1]), 10.0).unwrap(), 14);
        assert_eq!(d.orbit_count(&el(&[0, 1]), 0.5).unwrap(), 0);
        let d5 = domain(-5);
        assert_eq!(d5.orbit_count(&el(&[3, 2]), 3.0).unwrap(), 2);
        assert_eq!(d5.orbit_count(&el(&[3, 2]), 2.0).unwrap(), 0);
    }

    #[test]
    fn nl_constants_bounds() {
        let d = domain(-1);
        let (lo, hi) = d.nl_constants(60.0).unwrap();
        assert!(lo >= 1.0);
        assert!(hi <= d.theta.powi(2) + 1e-12);
        let d2 = domain(2);
        let (lo, hi) = d2.nl_constants(100.0).unwrap();
        assert!(lo > 0.0);
        assert!(hi <= d2.theta.powi(2));
    }

    #[test]
    fn user_units_validation() {
        let f = Field::monogenic(&[-2, 0, 0, 1], 1).unwrap();
        // 1 - theta + theta^2... use theta - 1 which has norm 1 in Q(2^(1/3))
        let eps = el(&[-1, 1, 0]);
        assert_eq!(f.abs_norm(&eps).unwrap(), 1);
        let ok = UnitData { torsion_order: 2, torsion_generator: f.from_int(-1), fundamental: vec![eps] };
        let f = f.with_units(ok).unwrap();
        let d = DomainSpec::standard(Arc::new(f)).unwrap();
        let a = el(&[5, 3, 1]);
        let c = d.canonical_associate(&a).unwrap();
        assert!(d.in_domain(&c).unwrap());
        let g = Field::quadratic(2).unwrap();
        let bad = UnitData { torsion_order: 2, torsion_generator: g.from_int(-1), fundamental: vec![el(&[2, 1])] };
        assert!(g.with_units(bad).is_err());
    }
}
