//! Exact integer lattice reduction (Hermite normal form, kernels, ranks) and
//! a few small dense float solves.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

type Vector = Vec<i128>;

fn sub_mul(v: &mut [i128], q: i128, w: &[i128]) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for (a, b) in v.iter_mut().zip(w) {
        let t = q.checked_mul(*b).ok_or(Error::Overflow("lattice reduction"))?;
        *a = a.checked_sub(t).ok_or(Error::Overflow("lattice reduction"))?;
    }
    Ok(())
}

fn round_div(a: i128, b: i128) -> i128 {
    // nearest integer to a/b, ties toward zero are irrelevant here
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r > b.abs() {
        q + b.signum()
    } else {
        q
    }
}

/// Column echelon form of a set of integer vectors by unimodular column
/// operations. Rows `0..pivot_rows` are eliminated bottom-up. Returns the
/// pivot columns (pivot row, vector) in increasing pivot row order, with
/// off-pivot entries reduced into [0, pivot), and the leftover vectors that
/// vanish on the pivot rows.
pub fn echelon(gens: &[Vector], pivot_rows: usize) -> Result<(Vec<(usize, Vector)>, Vec<Vector>)> {
    let mut active: Vec<Vector> = gens
        .iter()
        .filter(|v| v[..pivot_rows].iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let mut zero_top: Vec<Vector> = gens
        .iter()
        .filter(|v| v[..pivot_rows].iter().all(|&x| x == 0) && v.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let mut pivots: Vec<(usize, Vector)> = Vec::new();
    for row in (0..pivot_rows).rev() {
        loop {
            let hits: Vec<usize> = (0..active.len()).filter(|&i| active[i][row] != 0).collect();
            if hits.is_empty() {
                break;
            }
            let best = *hits.iter().min_by_key(|&&i| active[i][row].unsigned_abs()).unwrap();
            if hits.len() == 1 {
                let mut v = active.swap_remove(best);
                if v[row] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                pivots.push((row, v));
                break;
            }
            let piv = active[best].clone();
            for &i in &hits {
                if i != best {
                    let q = round_div(active[i][row], piv[row]);
                    sub_mul(&mut active[i], q, &piv)?;
                }
            }
            let mut k = 0;
            while k < active.len() {
                if active[k][..pivot_rows].iter().all(|&x| x == 0) {
                    let v = active.swap_remove(k);
                    if v.iter().any(|&x| x != 0) {
                        zero_top.push(v);
                    }
                } else {
                    k += 1;
                }
            }
        }
    }
    pivots.sort_by_key(|p| p.0);
    // reduce entries to the right of each pivot
    for i in (0..pivots.len()).rev() {
        let (r, piv) = pivots[i].clone();
        for k in i + 1..pivots.len() {
            let q = pivots[k].1[r].div_euclid(piv[r]);
            sub_mul(&mut pivots[k].1, q, &piv)?;
        }
    }
    Ok((pivots, zero_top))
}

/// Hermite normal form of a full-rank lattice in Z^n, as a row-major n x n
/// upper-triangular matrix whose columns form the canonical basis.
pub fn hnf_full(gens: &[Vector], n: usize) -> Result<Vec<i128>> {
    let (pivots, _) = echelon(gens, n)?;
    if pivots.len() != n {
        return Err(Error::invalid("generators do not span a full-rank lattice"));
    }
    let mut h = vec![0i128; n * n];
    for (j, (_, col)) in pivots.iter().enumerate() {
        for i in 0..n {
            h[i * n + j] = col[i];
        }
    }
    Ok(h)
}

/// HNF for a lattice known to contain modulus * Z^n; entries stay bounded by the modulus.
pub fn hnf_full_mod(gens: &[Vector], n: usize, modulus: i128) -> Result<Vec<i128>> {
    let m = modulus.abs();
    let mut all: Vec<Vector> = gens.iter().map(|v| v.iter().map(|x| x.rem_euclid(m)).collect()).collect();
    for i in 0..n {
        let mut e = vec![0i128; n];
        e[i] = m;
        all.push(e);
    }
    hnf_full(&all, n)
}

/// Coordinates of x in the basis given by the columns of the upper-triangular
/// matrix h, if they are integral.
pub fn solve_upper(h: &[i128], n: usize, x: &[i128]) -> Option<Vec<i128>> {
    let mut y = vec![0i128; n];
    for i in (0..n).rev() {
        let mut acc = x[i];
        for k in i + 1..n {
            acc = acc.checked_sub(h[i * n + k].checked_mul(y[k])?)?;
        }
        let d = h[i * n + i];
        if d == 0 || acc % d != 0 {
            return None;
        }
        y[i] = acc / d;
    }
    Some(y)
}

/// A basis of the integer relations {c : sum c_j v_j = 0} among the given vectors.
pub fn kernel_basis(cols: &[Vector]) -> Result<Vec<Vector>> {
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let n = cols[0].len();
    let m = cols.len();
    let aug: Vec<Vector> = cols
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let mut w = v.clone();
            w.extend((0..m).map(|k| i128::from(k == j)));
            w
        })
        .collect();
    let (_, rest) = echelon(&aug, n)?;
    Ok(rest.into_iter().map(|w| w[n..].to_vec()).collect())
}

/// Exact rank of a list of integer vectors.
pub fn rank(vectors: &[Vector]) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    let n = vectors[0].len();
    Ok(echelon(vectors, n)?.0.len())
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[i128], n: usize) -> Result<i128> {
    if n == 0 {
        return Ok(1);
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                Some(r) => {
                    for c in 0..n {
                        a.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = a[i * n + j].checked_mul(a[k * n + k]);
                let t2 = a[i * n + k].checked_mul(a[k * n + j]);
                let v = match (t1, t2) {
                    (Some(x), Some(y)) => x.checked_sub(y),
                    _ => None,
                }
                .ok_or(Error::Overflow("determinant"))?;
                a[i * n + j] = v / prev;
            }
        }
        prev = a[k * n + k];
    }
    Ok(sign * a[(n - 1) * n + n - 1])
}

/// Solves M x = b over the rationals; None if M is singular.
pub fn solve_rational(m: &[i128], n: usize, b: &[i128]) -> Option<Vec<Ratio<i128>>> {
    let mut a: Vec<Vec<Ratio<i128>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Ratio<i128>> = (0..n).map(|j| Ratio::from_integer(m[i * n + j])).collect();
            row.push(Ratio::from_integer(b[i]));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = Ratio::one() / a[col][col];
        for v in a[col].iter_mut() {
            *v *= inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in col..=n {
                    let t = a[col][c] * f;
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n]).collect())
}

/// Solves A x = b for a small dense real system by Gaussian elimination with partial pivoting.
pub fn solve_f64(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = a[i * n..(i + 1) * n].to_vec();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..=n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Some(x)
}

/// Determinant of a small dense real matrix.
pub fn det_f64(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x * n + col].abs().total_cmp(&m[y * n + col].abs())).unwrap();
        if m[piv * n + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..n {
                m.swap(col * n + c, piv * n + c);
            }
            d = -d;
        }
        d *= m[col * n + col];
        for r in col + 1..n {
            let f = m[r * n + col] / m[col * n + col];
            for c in col..n {
                m[r * n + c] -= f * m[col * n + c];
            }
        }
    }
    d
}
