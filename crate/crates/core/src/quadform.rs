//! Binary quadratic forms, their reduction and class numbers, and the
//! correspondence with invertible ideals of quadratic orders.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{fundamental_discriminant, gcd, is_prime, is_square, is_squarefree, isqrt};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::fundamental_units;
use crate::linalg::hnf_full;

/// Exact rationals used for elements of K.
pub type Q = Ratio<i128>;

/// a x^2 + b x y + c y^2
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DefiniteSign {
    Positive,
    Negative,
    Indefinite,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormInvariants {
    #[serde(rename = "D")]
    pub disc: i128,
    pub primitive: bool,
    pub degenerate: bool,
    pub definite_sign: DefiniteSign,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    /// Parses "a,b,c" with optional surrounding parentheses.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let v: Vec<i64> = t
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::parse(format!("bad form coefficient '{x}' in '{s}'"))))
            .collect::<Result<_>>()?;
        if v.len() != 3 {
            return Err(Error::parse(format!("a form needs three coefficients: '{s}'")));
        }
        Ok(QuadForm::new(v[0], v[1], v[2]))
    }

    pub fn disc(&self) -> i128 {
        let (a, b, c) = self.wide();
        b * b - 4 * a * c
    }

    fn wide(&self) -> (i128, i128, i128) {
        (self.a as i128, self.b as i128, self.c as i128)
    }

    pub fn is_primitive(&self) -> bool {
        let (a, b, c) = self.wide();
        gcd(gcd(a, b), c) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (a, b, c) = self.wide();
        let (x, y) = (x as i128, y as i128);
        a * x * x + b * x * y + c * y * y
    }

    pub fn negate(&self) -> QuadForm {
        QuadForm::new(-self.a, -self.b, -self.c)
    }

    pub fn invariants(&self) -> FormInvariants {
        let d = self.disc();
        let degenerate = d >= 0 && is_square(d);
        let definite_sign = if degenerate {
            DefiniteSign::Degenerate
        } else if d > 0 {
            DefiniteSign::Indefinite
        } else if self.a > 0 {
            DefiniteSign::Positive
        } else {
            DefiniteSign::Negative
        };
        FormInvariants { disc: d, primitive: self.is_primitive(), degenerate, definite_sign }
    }
}

pub fn form_invariants(f: &QuadForm) -> FormInvariants {
    f.invariants()
}

fn narrow_form(a: i128, b: i128, c: i128) -> Result<QuadForm> {
    let cv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("form reduction"));
    Ok(QuadForm::new(cv(a)?, cv(b)?, cv(c)?))
}

fn check_discriminant(d: i128) -> Result<()> {
    if d == 0 || d.rem_euclid(4) > 1 {
        return Err(Error::invalid(format!("{d} is not a discriminant")));
    }
    if d > 0 && is_square(d) {
        return Err(Error::invalid(format!("discriminant {d} is a perfect square")));
    }
    Ok(())
}

fn reduce_positive(mut a: i128, mut b: i128, mut c: i128) -> (i128, i128, i128) {
    let d = b * b - 4 * a * c;
    loop {
        // b into (-a, a]
        let m = 2 * a;
        let mut r = b.rem_euclid(m);
        if r > a {
            r -= m;
        }
        if r != b {
            b = r;
            c = (b * b - d) / (4 * a);
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

fn is_reduced_indefinite(s: i128, a: i128, b: i128) -> bool {
    0 < b && b <= s && s < 2 * a.abs() + b && 2 * a.abs() - b <= s
}

// one step (a,b,c) -> (c, b', .) of the reduction operator
fn rho(d: i128, s: i128, a: i128, b: i128, c: i128) -> (i128, i128, i128) {
    let _ = a;
    let ac = c.abs();
    let m = 2 * ac;
    let r = (-b).rem_euclid(m);
    let nb = if ac > s {
        if r <= ac {
            r
        } else {
            r - m
        }
    } else {
        s - (s - r).rem_euclid(m)
    };
    (c, nb, (nb * nb - d) / (4 * c))
}

const RHO_CAP: usize = 1_000_000;

fn indefinite_cycle(a: i128, b: i128, c: i128) -> Result<Vec<(i128, i128, i128)>> {
    let d = b * b - 4 * a * c;
    let s = isqrt(d as u128) as i128;
    let mut f = (a, b, c);
    let mut steps = 0;
    while !is_reduced_indefinite(s, f.0, f.1) {
        f = rho(d, s, f.0, f.1, f.2);
        steps += 1;
        if steps > RHO_CAP {
            return Err(Error::Internal("indefinite reduction did not terminate".into()));
        }
    }
    let start = f;
    let mut cycle = vec![start];
    loop {
        f = rho(d, s, f.0, f.1, f.2);
        if f == start {
            return Ok(cycle);
        }
        cycle.push(f);
        if cycle.len() > RHO_CAP {
            return Err(Error::Internal("reduction cycle too long".into()));
        }
    }
}

/// Canonical representative of the proper equivalence class of a primitive
/// non-degenerate form: the reduced form for definite F (negated for
/// negative definite), the lexicographically least form on the reduction
/// cycle for indefinite F.
pub fn reduce_form(f: &QuadForm) -> Result<QuadForm> {
    let d = f.disc();
    check_discriminant(d)?;
    let (a, b, c) = f.wide();
    if d < 0 {
        if a > 0 {
            let (a, b, c) = reduce_positive(a, b, c);
            narrow_form(a, b, c)
        } else {
            let (a, b, c) = reduce_positive(-a, -b, -c);
            narrow_form(-a, -b, -c)
        }
    } else {
        // a c != 0 since D is not a square
        let cyc = indefinite_cycle(a, b, c)?;
        let (a, b, c) = *cyc.iter().min().unwrap();
        narrow_form(a, b, c)
    }
}

/// Whether two forms are properly equivalent.
pub fn equivalent(f: &QuadForm, g: &QuadForm) -> Result<bool> {
    Ok(f.disc() == g.disc() && reduce_form(f)? == reduce_form(g)?)
}

/// Reduced primitive positive definite forms of discriminant D < 0.
pub fn reduced_forms_definite(d: i128) -> Result<Vec<QuadForm>> {
    check_discriminant(d)?;
    if d > 0 {
        return Err(Error::invalid("definite forms need D < 0"));
    }
    let mut out = Vec::new();
    let amax = isqrt((-d / 3) as u128) as i128;
    for a in 1..=amax {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push(narrow_form(a, b, c)?);
        }
    }
    Ok(out)
}

/// Reduced primitive indefinite forms of discriminant D > 0 (both signs of a).
pub fn reduced_forms_indefinite(d: i128) -> Result<Vec<QuadForm>> {
    check_discriminant(d)?;
    if d < 0 {
        return Err(Error::invalid("indefinite forms need D > 0"));
    }
    let s = isqrt(d as u128) as i128;
    let mut out = Vec::new();
    for b in 1..=s {
        if (b - d).rem_euclid(2) != 0 {
            continue;
        }
        let m = (d - b * b) / 4; // = -a c > 0
        for a in 1..=m {
            if m % a != 0 || !is_reduced_indefinite(s, a, b) {
                continue;
            }
            for sa in [a, -a] {
                let c = -m / sa;
                if gcd(gcd(sa, b), c) == 1 {
                    out.push(narrow_form(sa, b, c)?);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Number of proper equivalence classes of primitive forms of discriminant D,
/// counting only positive definite forms when D < 0. For D > 0 this is the
/// narrow class number h+(D).
pub fn class_number(d: i128) -> Result<u64> {
    check_discriminant(d)?;
    if d < 0 {
        return Ok(reduced_forms_definite(d)?.len() as u64);
    }
    let forms = reduced_forms_indefinite(d)?;
    let mut seen: HashSet<QuadForm> = HashSet::new();
    let mut classes = 0;
    for f in forms {
        if seen.contains(&f) {
            continue;
        }
        classes += 1;
        for (a, b, c) in indefinite_cycle(f.a as i128, f.b as i128, f.c as i128)? {
            seen.insert(narrow_form(a, b, c)?);
        }
    }
    Ok(classes)
}

/// #Q(D): all proper classes of primitive forms, negative definite included.
pub fn form_class_count(d: i128) -> Result<u64> {
    let h = class_number(d)?;
    Ok(if d < 0 { 2 * h } else { h })
}

/// Ordinary class number of the maximal order of Q(sqrt d).
pub fn class_number_of_field(d: i64) -> Result<u64> {
    if d == 0 || d == 1 || !is_squarefree(d) {
        return Err(Error::invalid(format!("{d} is not a squarefree integer other than 0, 1")));
    }
    let dk = if d.rem_euclid(4) == 1 { d as i128 } else { 4 * d as i128 };
    let hp = class_number(dk)?;
    if d < 0 {
        return Ok(hp);
    }
    let field = Field::quadratic(d)?;
    let u = fundamental_units(&field)?;
    let n = field.element_norm(&u.fundamental[0])?;
    Ok(if n == -1 { hp } else { hp / 2 })
}

/// The order Z + f w Z of conductor f in Q(sqrt d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Order {
    pub d: i64,
    pub f: i64,
    pub dk: i128,
    #[serde(rename = "D")]
    pub disc: i128,
}

impl Order {
    pub fn new(d: i64, f: i64) -> Result<Order> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::invalid(format!("{d} is not a squarefree integer other than 0, 1")));
        }
        if f < 1 {
            return Err(Error::invalid("conductor must be positive"));
        }
        let dk = if d.rem_euclid(4) == 1 { d as i128 } else { 4 * d as i128 };
        let disc = (f as i128) * (f as i128) * dk;
        Ok(Order { d, f, dk, disc })
    }

    pub fn from_discriminant(disc: i128) -> Result<Order> {
        check_discriminant(disc)?;
        let dd = i64::try_from(disc).map_err(|_| Error::Overflow("discriminant"))?;
        let (dk, f) = fundamental_discriminant(dd)?;
        let d = if dk.rem_euclid(4) == 1 { dk } else { dk / 4 };
        Order::new(d, f)
    }

    fn d1(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    /// sqrt(D) / sqrt(d)
    fn g(&self) -> i128 {
        self.f as i128 * if self.d1() { 1 } else { 2 }
    }

    /// Z-basis (1, f w) over (1, sqrt d).
    pub fn basis(&self) -> [Elem; 2] {
        let f = Q::from_integer(self.f as i128);
        let fw = if self.d1() { Elem::new(f / 2, f / 2) } else { Elem::new(Q::zero(), f) };
        [Elem::from_int(1), fw]
    }

    /// Covolume of the order with respect to (1, sqrt d).
    pub fn covolume(&self) -> Q {
        let f = Q::from_integer(self.f as i128);
        if self.d1() {
            f / 2
        } else {
            f
        }
    }

    pub fn contains(&self, x: &Elem) -> bool {
        // x = s + t f w
        let g = Q::from_integer(self.f as i128);
        let t = if self.d1() { x.v * 2 / g } else { x.v / g };
        let s = if self.d1() { x.u - t * g / 2 } else { x.u };
        s.is_integer() && t.is_integer()
    }

    pub fn maximal(&self) -> Order {
        Order::new(self.d, 1).unwrap()
    }

    pub fn unit_ideal(&self) -> OrderIdeal {
        let b = self.basis();
        OrderIdeal::from_basis(*self, b[0], b[1]).unwrap()
    }
}

/// u + v sqrt d
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Elem {
    #[serde(serialize_with = "ser_q")]
    pub u: Q,
    #[serde(serialize_with = "ser_q")]
    pub v: Q,
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl Elem {
    pub fn new(u: Q, v: Q) -> Elem {
        Elem { u, v }
    }

    pub fn from_int(a: i128) -> Elem {
        Elem::new(Q::from_integer(a), Q::zero())
    }

    pub fn mul(&self, o: &Elem, d: i64) -> Elem {
        Elem::new(self.u * o.u + self.v * o.v * d as i128, self.u * o.v + self.v * o.u)
    }

    pub fn add(&self, o: &Elem) -> Elem {
        Elem::new(self.u + o.u, self.v + o.v)
    }

    pub fn scale(&self, k: i128) -> Elem {
        Elem::new(self.u * k, self.v * k)
    }

    pub fn conj(&self) -> Elem {
        Elem::new(self.u, -self.v)
    }

    pub fn norm(&self, d: i64) -> Q {
        self.u * self.u - self.v * self.v * d as i128
    }
}

/// A fractional ideal of an order given by a Z-basis; `signature` is the
/// orientation of (gamma1, gamma2) relative to (1, sqrt d).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderIdeal {
    pub order: Order,
    pub basis: [Elem; 2],
    pub signature: i8,
}

fn orientation(a: &Elem, b: &Elem) -> Q {
    a.u * b.v - a.v * b.u
}

impl OrderIdeal {
    /// Checks that the span is a full lattice closed under multiplication by f w.
    pub fn from_basis(order: Order, g1: Elem, g2: Elem) -> Result<OrderIdeal> {
        let det = orientation(&g1, &g2);
        if det.is_zero() {
            return Err(Error::invalid("basis is degenerate"));
        }
        let id = OrderIdeal { order, basis: [g1, g2], signature: if det.is_positive() { 1 } else { -1 } };
        let fw = order.basis()[1];
        for g in [g1, g2] {
            if !id.contains(&g.mul(&fw, order.d))? {
                return Err(Error::invalid("span is not a module over the order"));
            }
        }
        Ok(id)
    }

    /// Lattice generated by arbitrary elements, as an HNF basis of signature +1.
    pub fn from_generators(order: Order, gens: &[Elem]) -> Result<OrderIdeal> {
        let (g1, g2) = hnf_rational(gens)?;
        OrderIdeal::from_basis(order, g1, g2)
    }

    /// Coordinates of x in the basis, if integral.
    pub fn coordinates(&self, x: &Elem) -> Option<(i128, i128)> {
        let [a, b] = &self.basis;
        let det = orientation(a, b);
        let s = orientation(x, b) / det;
        let t = orientation(a, x) / det;
        (s.is_integer() && t.is_integer()).then(|| (s.to_integer(), t.to_integer()))
    }

    pub fn contains(&self, x: &Elem) -> Result<bool> {
        Ok(self.coordinates(x).is_some())
    }

    /// HNF basis; two ideals are equal as lattices iff their canonical bases agree.
    pub fn canonical(&self) -> Result<OrderIdeal> {
        let (g1, g2) = hnf_rational(&self.basis)?;
        Ok(OrderIdeal { order: self.order, basis: [g1, g2], signature: 1 })
    }

    pub fn same_lattice(&self, other: &OrderIdeal) -> Result<bool> {
        Ok(self.canonical()?.basis == other.canonical()?.basis)
    }

    /// Same lattice with the basis reordered to the requested orientation.
    pub fn oriented(&self, sign: i8) -> OrderIdeal {
        if self.signature == sign {
            self.clone()
        } else {
            OrderIdeal { order: self.order, basis: [self.basis[1], self.basis[0]], signature: sign }
        }
    }

    pub fn conjugate(&self) -> Result<OrderIdeal> {
        OrderIdeal::from_generators(self.order, &[self.basis[0].conj(), self.basis[1].conj()])
    }

    pub fn mul(&self, other: &OrderIdeal) -> Result<OrderIdeal> {
        let d = self.order.d;
        let gens: Vec<Elem> =
            self.basis.iter().flat_map(|x| other.basis.iter().map(move |y| x.mul(y, d))).collect();
        OrderIdeal::from_generators(self.order, &gens)
    }

    pub fn scale(&self, xi: &Elem) -> Result<OrderIdeal> {
        let d = self.order.d;
        OrderIdeal::from_basis(self.order, xi.mul(&self.basis[0], d), xi.mul(&self.basis[1], d))
    }

    /// Extension to the maximal order.
    pub fn extend_to_maximal(&self) -> Result<OrderIdeal> {
        let m = self.order.maximal();
        let ob = m.basis();
        let d = self.order.d;
        let gens: Vec<Elem> = self.basis.iter().flat_map(|x| ob.iter().map(move |y| x.mul(y, d))).collect();
        OrderIdeal::from_generators(m, &gens)
    }

    /// Inverse conj(c)/N(c); invertibility is checked by c * c^-1 = O.
    pub fn inverse(&self) -> Result<OrderIdeal> {
        let n = order_ideal_norm(self)?;
        let inv_n = Elem::new(n.recip(), Q::zero());
        let inv = self.conjugate()?.scale(&inv_n)?;
        if !self.mul(&inv)?.same_lattice(&self.order.unit_ideal())? {
            return Err(Error::invalid("ideal is not invertible"));
        }
        Ok(inv)
    }
}

fn hnf_rational(gens: &[Elem]) -> Result<(Elem, Elem)> {
    let mut den: i128 = 1;
    for g in gens {
        for q in [g.u, g.v] {
            let dq = *q.denom();
            den = den / gcd(den, dq) * dq;
        }
    }
    let ints: Vec<Vec<i128>> =
        gens.iter().map(|g| vec![(g.u * den).to_integer(), (g.v * den).to_integer()]).collect();
    let h = hnf_full(&ints, 2)?;
    let dq = Q::from_integer(den);
    let (mut a, mut b, mut c) = (h[0], h[1], h[3]);
    if a < 0 {
        a = -a;
    }
    if c < 0 {
        c = -c;
        b = -b;
    }
    b = b.rem_euclid(a);
    Ok((
        Elem::new(Q::from_integer(a) / dq, Q::zero()),
        Elem::new(Q::from_integer(b) / dq, Q::from_integer(c) / dq),
    ))
}

/// N(c) = |det c| / det O.
pub fn order_ideal_norm(c: &OrderIdeal) -> Result<Q> {
    Ok(orientation(&c.basis[0], &c.basis[1]).abs() / c.order.covolume())
}

/// c = aZ + tau Z with tau = (-b - f sqrt(d_K))/2 and basis (a, -tau) of signature sgn(a).
pub fn form_to_ideal(form: &QuadForm) -> Result<(OrderIdeal, i8)> {
    if !form.is_primitive() {
        return Err(Error::invalid(format!("form {form} is not primitive")));
    }
    let order = Order::from_discriminant(form.disc())?;
    let (a, b) = (form.a as i128, form.b as i128);
    if a == 0 {
        return Err(Error::invalid("degenerate form"));
    }
    let half = Q::new(1, 2);
    let tau = Elem::new(-Q::from_integer(b) * half, -Q::from_integer(order.g()) * half);
    let neg_tau = Elem::new(-tau.u, -tau.v);
    if !order.contains(&tau) {
        return Err(Error::Internal("tau is not in the order".into()));
    }
    let c = OrderIdeal::from_basis(order, Elem::from_int(a), neg_tau)?;
    let eps = if a > 0 { 1 } else { -1 };
    if c.signature != eps {
        return Err(Error::Internal("basis signature differs from sgn(a)".into()));
    }
    if !c.mul(&c.conjugate()?)?.same_lattice(&order.unit_ideal().scale(&Elem::from_int(a))?)? {
        return Err(Error::Internal("c * conj(c) != aO".into()));
    }
    Ok((c, eps))
}

/// N(g1 x + g2 y) / (eps N(c)) for the basis of c oriented to eps.
pub fn ideal_to_form(c: &OrderIdeal, eps: i8) -> Result<QuadForm> {
    c.inverse()?;
    let c = c.oriented(eps);
    let nf = norm_form(&c)?;
    let e = eps as i128;
    let f = narrow_form(nf.a * e, nf.b * e, nf.c * e)?;
    if f.disc() != c.order.disc {
        return Err(Error::Internal(format!("form {f} has discriminant {} not {}", f.disc(), c.order.disc)));
    }
    if !f.is_primitive() {
        return Err(Error::Internal(format!("form {f} is not primitive")));
    }
    Ok(f)
}

/// Integer coefficients of N(g1 x + g2 y)/N(c).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NormForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl NormForm {
    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a * x * x + self.b * x * y + self.c * y * y
    }
}

pub fn norm_form(c: &OrderIdeal) -> Result<NormForm> {
    let d = c.order.d;
    let [g1, g2] = c.basis;
    let n = order_ideal_norm(c)?;
    let a = g1.norm(d) / n;
    let cc = g2.norm(d) / n;
    // N(g1 + g2) - N(g1) - N(g2) = trace(g1 conj g2)
    let b = (g1.add(&g2).norm(d) - g1.norm(d) - g2.norm(d)) / n;
    if !(a.is_integer() && b.is_integer() && cc.is_integer()) {
        return Err(Error::invalid("norm form has non-integral coefficients"));
    }
    Ok(NormForm { a: a.to_integer(), b: b.to_integer(), c: cc.to_integer() })
}

/// Smallest power of the fundamental unit lying in the order with norm +1, as |sigma_1|.
fn positive_order_unit(order: &Order) -> Result<f64> {
    let field = Field::quadratic(order.d)?;
    let u = fundamental_units(&field)?;
    let e = &u.fundamental[0];
    let to_elem = |a: &crate::field::AlgInt| -> Elem {
        let (x, y) = (a.coords[0] as i128, a.coords[1] as i128);
        if order.d1() {
            Elem::new(Q::from_integer(x) + Q::new(y, 2), Q::new(y, 2))
        } else {
            Elem::new(Q::from_integer(x), Q::from_integer(y))
        }
    };
    let base = to_elem(e);
    let mut p = base;
    let mut size = field.embed(e)[0].re.abs();
    let size1 = size;
    for _ in 0..64 {
        if order.contains(&p) && p.norm(order.d) == Q::from_integer(1) {
            return Ok(size.max(1.0 / size));
        }
        p = p.mul(&base, order.d);
        size *= size1;
    }
    Err(Error::Unsupported("order unit exponent too large".into()))
}

/// Whether some (x, y) has G(x, y) = s, using the unit-domain bound on y for D > 0:
/// some associate of gamma = x g1 + y g2 has |gamma - conj gamma| <= 2 sqrt(n eta), n = |N(gamma)|.
fn represents(g: &NormForm, s: i128, disc: i128, d: i64, v2: Q, n: f64, eta: f64) -> bool {
    let ymax: i128 = if disc < 0 {
        isqrt((4 * g.a.abs() / -disc) as u128) as i128 + 1
    } else {
        let v2 = (*v2.numer() as f64 / *v2.denom() as f64).abs();
        ((eta * n).sqrt() / ((d as f64).sqrt() * v2)).ceil() as i128 + 1
    };
    for y in -ymax..=ymax {
        // (2 a x + b y)^2 = disc y^2 + 4 a s
        let t = disc * y * y + 4 * g.a * s;
        if t < 0 || !is_square(t) {
            continue;
        }
        let r = isqrt(t as u128) as i128;
        for rr in [r, -r] {
            let num = rr - g.b * y;
            if num % (2 * g.a) == 0 {
                return true;
            }
        }
    }
    false
}

/// Whether xi c2 = c1 for some xi in K with sgn N(xi) e2 = e1.
pub fn narrowly_equivalent(c1: &OrderIdeal, e1: i8, c2: &OrderIdeal, e2: i8) -> Result<bool> {
    if c1.order != c2.order {
        return Ok(false);
    }
    let order = c1.order;
    let s = (e1 * e2) as i128;
    if order.disc < 0 && s < 0 {
        return Ok(false);
    }
    // c1 conj(c2) = xi N(c2) O; look for a generator of norm s N(c1 conj c2)
    let prod = c1.mul(&c2.conjugate()?)?.canonical()?;
    let g = norm_form(&prod)?;
    let eta = if order.disc > 0 { positive_order_unit(&order)? } else { 1.0 };
    let n = order_ideal_norm(&prod)?;
    let n = *n.numer() as f64 / *n.denom() as f64;
    Ok(represents(&g, s, order.disc, order.d, prod.basis[1].v, n, eta))
}

/// Box points with F(x, y) = sign * p for a positive prime p, in lexicographic order.
pub fn prime_rep_search(form: &QuadForm, m: i64, sign: i8) -> Result<Vec<(i64, i64)>> {
    check_sign(form, sign)?;
    let rows: Vec<Vec<(i64, i64)>> = (-m..=m)
        .into_par_iter()
        .map(|x| (-m..=m).filter(|&y| prime_value(form, x, y, sign).is_some()).map(|y| (x, y)).collect())
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

fn check_sign(form: &QuadForm, sign: i8) -> Result<()> {
    let d = form.disc();
    if sign != 1 && sign != -1 {
        return Err(Error::invalid("sign must be 1 or -1"));
    }
    if d < 0 && (sign as i64) * form.a < 0 {
        return Err(Error::invalid(format!("definite form {form} takes no values of sign {sign}")));
    }
    if d >= 0 && is_square(d) {
        return Err(Error::invalid(format!("form {form} is degenerate")));
    }
    Ok(())
}

fn prime_value(form: &QuadForm, x: i64, y: i64, sign: i8) -> Option<u64> {
    let v = form.eval(x, y) * sign as i128;
    if v > 1 && v < u64::MAX as i128 && is_prime(v as u64) {
        Some(v as u64)
    } else {
        None
    }
}

/// A homothetic copy base + k S on which F takes prime values of one sign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormConstellation {
    pub base: (i64, i64),
    pub k: i64,
    pub values: Vec<u64>,
    pub closeness: f64,
}

/// max |p_i/p_j - 1| * (min p)^((1 - theta)/2)
pub fn closeness(values: &[u64], theta: f64) -> f64 {
    let lo = *values.iter().min().unwrap() as f64;
    let hi = *values.iter().max().unwrap() as f64;
    (hi / lo - 1.0) * lo.powf((1.0 - theta) / 2.0)
}

#[derive(Clone, Debug)]
pub struct FormSearch {
    pub m: i64,
    pub k_max: i64,
    pub sign: i8,
    pub distinct_primes: bool,
    pub theta: f64,
    pub limit: Option<usize>,
}

/// S-constellations in F^-1(sign P) within the box, ordered by k then base.
pub fn quadform_constellation(form: &QuadForm, shape: &[(i64, i64)], opts: &FormSearch) -> Result<Vec<FormConstellation>> {
    if shape.is_empty() {
        return Err(Error::invalid("empty shape"));
    }
    let pts = prime_rep_search(form, opts.m, opts.sign)?;
    let set: HashSet<(i64, i64)> = pts.iter().copied().collect();
    let s0 = shape[0];
    let mut out = Vec::new();
    for k in 1..=opts.k_max.max(1) {
        let mut bases = BTreeSet::new();
        for &(x, y) in &pts {
            bases.insert((x - k * s0.0, y - k * s0.1));
        }
        for base in bases {
            let img: Vec<(i64, i64)> = shape.iter().map(|s| (base.0 + k * s.0, base.1 + k * s.1)).collect();
            if !img.iter().all(|p| set.contains(p)) {
                continue;
            }
            let values: Vec<u64> = img.iter().map(|p| prime_value(form, p.0, p.1, opts.sign).unwrap()).collect();
            if opts.distinct_primes {
                let uniq: BTreeSet<u64> = values.iter().copied().collect();
                if uniq.len() != values.len() {
                    continue;
                }
            }
            let cl = closeness(&values, opts.theta);
            out.push(FormConstellation { base, k, values, closeness: cl });
            if opts.limit.is_some_and(|l| out.len() >= l) {
                return Ok(out);
            }
        }
    }
    Ok(out)
}
