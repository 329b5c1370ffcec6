//! Dense exact Gaussian elimination.

use num_traits::Zero;

use crate::Rational;

/// Reduced row echelon form of `rows` (each of width `width`).
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    pub width: usize,
}

pub fn rref(rows: &[Vec<Rational>], width: usize) -> Echelon {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    Echelon {
        rows: m,
        pivots,
        width,
    }
}

pub fn rank(rows: &[Vec<Rational>], width: usize) -> usize {
    rref(rows, width).pivots.len()
}

/// Basis of `{x : rows · x = 0}`, one vector per free column.
pub fn nullspace(rows: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    let e = rref(rows, width);
    let free: Vec<usize> = (0..width).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); width];
            v[f] = Rational::from_integer(1.into());
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Affine solution set of `rows · x = rhs`: a particular solution plus a
/// nullspace basis, or `None` when the system is inconsistent.
pub fn solve_affine(
    rows: &[Vec<Rational>],
    rhs: &[Rational],
    width: usize,
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let augmented: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let e = rref(&augmented, width + 1);
    if e.pivots.contains(&width) {
        return None;
    }
    let mut x = vec![Rational::zero(); width];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = row[width].clone();
    }
    Some((x, nullspace(rows, width)))
}

/// Unique solution of a square nonsingular system.
pub fn solve_square(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = rows.len();
    let (x, null) = solve_affine(rows, rhs, n)?;
    null.is_empty().then_some(x)
}
