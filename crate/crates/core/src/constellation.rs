//! Shapes and brute-force search for homothetic copies a + kS inside a finite set.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{AlgInt, Field};
use crate::ideal::Ideal;
use crate::linalg::echelon;

/// A finite set of integer vectors, kept sorted and without repeats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    points: Vec<Vec<i64>>,
    dim: usize,
}

fn lattice_key(gens: &[Vec<i64>], dim: usize) -> Result<Vec<(usize, Vec<i128>)>> {
    let g: Vec<Vec<i128>> = gens.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    Ok(echelon(&g, dim)?.0)
}

impl Shape {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Shape> {
        let dim = points.first().map(|p| p.len()).ok_or_else(|| Error::invalid("empty shape"))?;
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::invalid("shape points must share a positive dimension"));
        }
        let set: BTreeSet<Vec<i64>> = points.into_iter().collect();
        Ok(Shape { points: set.into_iter().collect(), dim })
    }

    /// Parses "(0,0);(1,0)" or "0,0 1,0" style lists; a single-coordinate list like "-1,0,1" means points in Z.
    pub fn parse_list(s: &str) -> Result<Shape> {
        let t = s.trim();
        if t.contains('(') || t.contains('[') || t.contains(';') {
            let pts = t
                .split(|c| c == ';' || c == ')' || c == ']')
                .map(|p| p.trim().trim_start_matches([',', ' ']).trim_start_matches(['(', '[']).trim())
                .filter(|p| !p.is_empty())
                .map(parse_vector)
                .collect::<Result<Vec<_>>>()?;
            Shape::new(pts)
        } else if t.contains(char::is_whitespace) {
            Shape::new(t.split_whitespace().map(parse_vector).collect::<Result<Vec<_>>>()?)
        } else {
            Shape::new(parse_vector(t)?.into_iter().map(|x| vec![x]).collect())
        }
    }

    /// One vector per line, `#` starts a comment; errors name the offending line.
    pub fn parse_file_contents(text: &str) -> Result<Shape> {
        let mut pts = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let v = parse_vector(body).map_err(|e| Error::parse(format!("shape line {}: {e}", no + 1)))?;
            if let Some(first) = pts.first() {
                let first: &Vec<i64> = first;
                if first.len() != v.len() {
                    return Err(Error::parse(format!(
                        "shape line {}: expected {} coordinates, found {}",
                        no + 1,
                        first.len(),
                        v.len()
                    )));
                }
            }
            pts.push(v);
        }
        if pts.is_empty() {
            return Err(Error::parse("shape file has no points"));
        }
        Shape::new(pts)
    }

    pub fn from_file(path: &Path) -> Result<Shape> {
        Shape::parse_file_contents(&std::fs::read_to_string(path)?)
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// r = #S - 1
    pub fn r(&self) -> usize {
        self.points.len() - 1
    }

    fn contains(&self, p: &[i64]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    /// Whether the integer span of S is all of Z^dim.
    pub fn generates(&self) -> Result<bool> {
        let key = lattice_key(&self.points, self.dim)?;
        Ok(key.len() == self.dim && key.iter().all(|(row, v)| v[*row] == 1))
    }

    /// 0 in S, S = -S, and S generates.
    pub fn is_standard(&self) -> Result<bool> {
        let zero = vec![0; self.dim];
        if !self.contains(&zero) {
            return Ok(false);
        }
        if self.points.iter().any(|p| !self.contains(&p.iter().map(|x| -x).collect::<Vec<_>>())) {
            return Ok(false);
        }
        self.generates()
    }

    /// Adjoins e_1, e_2, ... that are not yet in the span until S generates,
    /// then closes under negation and adjoins 0.
    pub fn standardize(&self) -> Result<Shape> {
        let mut pts = self.points.clone();
        let full = Shape::new(pts.clone())?;
        if !full.generates()? {
            for i in 0..self.dim {
                let mut e = vec![0i64; self.dim];
                e[i] = 1;
                let before = lattice_key(&pts, self.dim)?;
                let mut with = pts.clone();
                with.push(e.clone());
                if lattice_key(&with, self.dim)? != before {
                    pts = with;
                }
                if Shape::new(pts.clone())?.generates()? {
                    break;
                }
            }
        }
        let neg: Vec<Vec<i64>> = pts.iter().map(|p| p.iter().map(|x| -x).collect()).collect();
        pts.extend(neg);
        pts.push(vec![0; self.dim]);
        Shape::new(pts)
    }
}

fn parse_vector(s: &str) -> Result<Vec<i64>> {
    let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<i64>().map_err(|_| Error::parse(format!("'{x}' is not an integer"))))
        .collect()
}

/// Whether a O_K = b O_K.
pub fn are_associates(field: &Field, a: &AlgInt, b: &AlgInt) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::invalid("associates of zero"));
    }
    Ok(field.principal_ideal(a)? == field.principal_ideal(b)?)
}

/// a + kS, with the realized points in the order of the shape's points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constellation {
    pub base: AlgInt,
    pub k: i64,
    pub points: Vec<AlgInt>,
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions<'a> {
    /// drop constellations with two associate points (needs the field)
    pub no_associates: Option<&'a Field>,
    /// also allow k <= -1
    pub allow_negative_k: bool,
}

fn realize(base: &[i64], k: i64, s: &[i64]) -> Option<Vec<i64>> {
    base.iter().zip(s).map(|(b, x)| k.checked_mul(*x).and_then(|y| b.checked_add(y))).collect()
}

fn pairwise_non_associate(field: &Field, pts: &[AlgInt]) -> Result<bool> {
    let mut seen: HashSet<Ideal> = HashSet::new();
    for p in pts {
        if p.is_zero() {
            continue;
        }
        if !seen.insert(field.principal_ideal(p)?) {
            return Ok(false);
        }
    }
    Ok(pts.iter().filter(|p| p.is_zero()).count() <= 1)
}

/// Every (a, k) with 1 <= k <= k_max and a + kS inside A, ordered by k then a.
pub fn find_constellations(a: &[AlgInt], shape: &Shape, k_max: i64, opts: &SearchOptions) -> Result<Vec<Constellation>> {
    if k_max < 1 {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    if let Some(x) = a.iter().find(|x| x.coords.len() != shape.dim()) {
        return Err(Error::invalid(format!("{x} does not match the shape dimension {}", shape.dim())));
    }
    let set: HashSet<&[i64]> = a.iter().map(|x| x.coords.as_slice()).collect();
    let s0 = &shape.points()[0];
    let ks: Vec<i64> = if opts.allow_negative_k { (-k_max..=-1).chain(1..=k_max).collect() } else { (1..=k_max).collect() };
    let mut out = Vec::new();
    for k in ks {
        let mut bases: BTreeSet<Vec<i64>> = BTreeSet::new();
        for x in a {
            if let Some(b) = realize(&x.coords, -k, s0) {
                bases.insert(b);
            }
        }
        'base: for b in bases {
            let mut pts = Vec::with_capacity(shape.points().len());
            for s in shape.points() {
                match realize(&b, k, s) {
                    Some(p) if set.contains(p.as_slice()) => pts.push(AlgInt::new(p)),
                    _ => continue 'base,
                }
            }
            if let Some(field) = opts.no_associates {
                if !pairwise_non_associate(field, &pts)? {
                    continue;
                }
            }
            out.push(Constellation { base: AlgInt::new(b), k, points: pts });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstellationCounts {
    #[serde(rename = "N_S")]
    pub n_s: u64,
    #[serde(rename = "N_S_sharp")]
    pub n_s_sharp: u64,
    /// number of (a, k) parameterizations before identifying equal sets
    pub parameterizations: u64,
}

/// Distinct realized sets, and those without associate pairs.
pub fn count_constellations(field: &Field, a: &[AlgInt], shape: &Shape, k_max: i64) -> Result<ConstellationCounts> {
    let all = find_constellations(a, shape, k_max, &SearchOptions::default())?;
    let mut sets: BTreeSet<Vec<AlgInt>> = BTreeSet::new();
    let mut sharp: BTreeSet<Vec<AlgInt>> = BTreeSet::new();
    for c in &all {
        let mut key = c.points.clone();
        key.sort();
        key.dedup();
        if pairwise_non_associate(field, &c.points)? {
            sharp.insert(key.clone());
        }
        sets.insert(key);
    }
    Ok(ConstellationCounts { n_s: sets.len() as u64, n_s_sharp: sharp.len() as u64, parameterizations: all.len() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(c: &[i64]) -> AlgInt {
        AlgInt::new(c.to_vec())
    }

    #[test]
    fn standard_shapes() {
        let s = Shape::parse_list("-1,0,1").unwrap();
        assert!(s.is_standard().unwrap());
        assert_eq!(s.standardize().unwrap(), s);
        let s = Shape::parse_list("(1,0)").unwrap();
        assert!(!s.is_standard().unwrap());
        let st = s.standardize().unwrap();
        assert_eq!(st, Shape::parse_list("(0,0);(1,0);(-1,0);(0,1);(0,-1)").unwrap());
        let st = Shape::parse_list("2").unwrap().standardize().unwrap();
        assert_eq!(st, Shape::parse_list("-2,-1,0,1,2").unwrap());
        // {0, +-2} does not generate Z
        assert!(!Shape::parse_list("-2,0,2").unwrap().is_standard().unwrap());
        assert!(!Shape::parse_list("0").unwrap().generates().unwrap());
    }

    #[test]
    fn shape_file_errors_name_the_line() {
        let err = Shape::parse_file_contents("# header\n0 0\n1 x\n").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = Shape::parse_file_contents("0 0\n1 0 0\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let s = Shape::parse_file_contents("0 0 # origin\n1,0\n\n").unwrap();
        assert_eq!(s.points().len(), 2);
    }

    #[test]
    fn associates() {
        let gi = Field::quadratic(-1).unwrap();
        assert!(are_associates(&gi, &el(&[1, 1]), &el(&[-1, 1])).unwrap());
        assert!(!are_associates(&gi, &el(&[1, 1]), &el(&[1, 2])).unwrap());
        let f = Field::quadratic(2).unwrap();
        assert!(are_associates(&f, &el(&[1, 0]), &el(&[1, 1])).unwrap());
        assert!(are_associates(&f, &el(&[0, 0]), &el(&[1, 1])).is_err());
    }

    #[test]
    fn rational_primes_progression() {
        let a: Vec<AlgInt> = [2, 3, 5, 7].iter().map(|&p| el(&[p])).collect();
        let s = Shape::parse_list("0,1,2").unwrap();
        let cs = find_constellations(&a, &s, 3, &SearchOptions::default()).unwrap();
        assert!(cs.iter().any(|c| c.base == el(&[3]) && c.k == 2));
        let single = find_constellations(&a, &Shape::parse_list("0").unwrap(), 1, &SearchOptions::default()).unwrap();
        assert_eq!(single.len(), 4);
        let q = Field::rational();
        let counts = count_constellations(&q, &[], &s, 3).unwrap();
        assert_eq!((counts.n_s, counts.n_s_sharp), (0, 0));
    }

    #[test]
    fn symmetric_shape_counts_sets_once() {
        // {-1,0,1} at (a, k) and (a, -k) give the same set
        let a: Vec<AlgInt> = (0..10).map(|x| el(&[x])).collect();
        let s = Shape::parse_list("-1,0,1").unwrap();
        let opts = SearchOptions { no_associates: None, allow_negative_k: true };
        let both = find_constellations(&a, &s, 1, &opts).unwrap();
        assert_eq!(both.len(), 16);
        let q = Field::rational();
        let c = count_constellations(&q, &a, &s, 1).unwrap();
        assert_eq!(c.n_s, 8);
        // {0,1,2} contains no associate pair, {1,2,3} neither; {-1,0,1} is excluded above since a >= 0
        assert!(c.n_s_sharp <= c.n_s);
    }
}
