//! H-polyhedra and exact vertex enumeration.
//!
//! Enumeration runs the double description method on the homogenized cone
//! `{(t, y) : t ≥ 0, A y ≤ b t}` after eliminating equality rows. Rays are
//! kept as primitive integer vectors, so every combination step is
//! fraction-free.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{rank, solve_affine};
use super::lp::{lp_solve, LinearProgram, LpOutcome, Relation};
use crate::error::{Error, Result};
use crate::rational::{common_denominator, dot};
use crate::Rational;

pub const MAX_DIMENSION: usize = 8;
pub const MAX_INEQUALITIES: usize = 64;

/// `{x : a·x ≤ b for each inequality, a·x = b for each equality}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope {
    pub dim: usize,
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
}

/// Vertices and extreme rays of a pointed polyhedron.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron {
    pub vertices: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
}

impl HPolytope {
    pub fn new(dim: usize) -> Self {
        HPolytope {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn add_inequality(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.inequalities.push((row, rhs));
    }

    pub fn add_equality(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.equalities.push((row, rhs));
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.inequalities.iter().all(|(a, b)| dot(a, x) <= *b)
            && self.equalities.iter().all(|(a, b)| dot(a, x) == *b)
    }

    fn check_shape(&self) -> Result<()> {
        for (a, _) in self.inequalities.iter().chain(&self.equalities) {
            if a.len() != self.dim {
                return Err(Error::Shape(format!(
                    "row of width {} in a polytope of dimension {}",
                    a.len(),
                    self.dim
                )));
            }
        }
        Ok(())
    }

    fn check_size(&self) -> Result<()> {
        if self.dim > MAX_DIMENSION {
            return Err(Error::SizeLimit {
                what: "polytope dimension",
                actual: self.dim,
                limit: MAX_DIMENSION,
            });
        }
        if self.inequalities.len() > MAX_INEQUALITIES {
            return Err(Error::SizeLimit {
                what: "inequality count",
                actual: self.inequalities.len(),
                limit: MAX_INEQUALITIES,
            });
        }
        Ok(())
    }

    fn is_feasible(&self) -> Result<bool> {
        let mut lp = LinearProgram::minimize(vec![Rational::zero(); self.dim]);
        for (a, b) in &self.inequalities {
            lp.add_constraint(a.clone(), Relation::Le, b.clone());
        }
        for (a, b) in &self.equalities {
            lp.add_constraint(a.clone(), Relation::Eq, b.clone());
        }
        Ok(!matches!(lp_solve(&lp)?, LpOutcome::Infeasible))
    }

    /// True iff `x` lies in the polytope and its active rows have full rank.
    /// This is the textbook vertex test, independent of enumeration.
    pub fn is_vertex(&self, x: &[Rational]) -> bool {
        if !self.contains(x) {
            return false;
        }
        let active: Vec<Vec<Rational>> = self
            .equalities
            .iter()
            .map(|(a, _)| a.clone())
            .chain(
                self.inequalities
                    .iter()
                    .filter(|(a, b)| dot(a, x) == *b)
                    .map(|(a, _)| a.clone()),
            )
            .collect();
        rank(&active, self.dim) == self.dim
    }
}

/// All vertices of a bounded polytope, lexicographically sorted.
pub fn enumerate_vertices(p: &HPolytope) -> Result<Vec<Vec<Rational>>> {
    let poly = vertices_and_rays(p)?;
    if !poly.rays.is_empty() {
        return Err(Error::Unbounded);
    }
    Ok(poly.vertices)
}

/// Vertices and extreme rays of a pointed polyhedron. A polyhedron that
/// contains a line is reported as [`Error::Unbounded`]; an empty one yields
/// no vertices and no rays.
pub fn vertices_and_rays(p: &HPolytope) -> Result<Polyhedron> {
    p.check_shape()?;
    p.check_size()?;
    let empty = Polyhedron {
        vertices: Vec::new(),
        rays: Vec::new(),
    };

    let (eq_rows, eq_rhs): (Vec<_>, Vec<_>) = p.equalities.iter().cloned().unzip();
    let Some((origin, basis)) = solve_affine(&eq_rows, &eq_rhs, p.dim) else {
        return Ok(empty);
    };
    let k = basis.len();
    // Inequalities in the reduced coordinates y, with x = origin + basis·y.
    let reduced: Vec<(Vec<Rational>, Rational)> = p
        .inequalities
        .iter()
        .map(|(a, b)| {
            let row: Vec<Rational> = basis.iter().map(|v| dot(a, v)).collect();
            (row, b - dot(a, &origin))
        })
        .collect();

    if k == 0 {
        let vertices = if reduced.iter().all(|(_, b)| !b.is_negative()) {
            vec![origin]
        } else {
            Vec::new()
        };
        return Ok(Polyhedron {
            vertices,
            rays: Vec::new(),
        });
    }

    // Homogenized rows h with h·(t, y) ≥ 0: first t ≥ 0, then b t − a y ≥ 0.
    let mut hrows: Vec<Vec<BigInt>> = Vec::with_capacity(reduced.len() + 1);
    let mut t_row = vec![BigInt::zero(); k + 1];
    t_row[0] = BigInt::one();
    hrows.push(t_row);
    for (a, b) in &reduced {
        let mut row: Vec<Rational> = Vec::with_capacity(k + 1);
        row.push(b.clone());
        row.extend(a.iter().map(|v| -v.clone()));
        hrows.push(integerize(&row));
    }

    let rays = match double_description(&hrows, k + 1) {
        Some(r) => r,
        None => {
            // Not pointed: the polyhedron contains a line unless it is empty.
            return if p.is_feasible()? {
                Err(Error::Unbounded)
            } else {
                Ok(empty)
            };
        }
    };

    let lift = |y: &[Rational]| -> Vec<Rational> {
        let mut x = origin.clone();
        for (coef, v) in y.iter().zip(&basis) {
            if coef.is_zero() {
                continue;
            }
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += coef * vi;
            }
        }
        x
    };
    let lift_direction = |y: &[Rational]| -> Vec<Rational> {
        let mut x = vec![Rational::zero(); p.dim];
        for (coef, v) in y.iter().zip(&basis) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += coef * vi;
            }
        }
        x
    };

    let mut vertices = Vec::new();
    let mut directions = Vec::new();
    for ray in &rays {
        if ray[0].is_positive() {
            let t = Rational::from_integer(ray[0].clone());
            let y: Vec<Rational> = ray[1..]
                .iter()
                .map(|v| Rational::from_integer(v.clone()) / &t)
                .collect();
            vertices.push(lift(&y));
        } else {
            let y: Vec<Rational> = ray[1..]
                .iter()
                .map(|v| Rational::from_integer(v.clone()))
                .collect();
            directions.push(normalize_direction(lift_direction(&y)));
        }
    }
    if vertices.is_empty() {
        return Ok(empty);
    }
    vertices.sort();
    vertices.dedup();
    directions.sort();
    directions.dedup();
    Ok(Polyhedron {
        vertices,
        rays: directions,
    })
}

fn normalize_direction(v: Vec<Rational>) -> Vec<Rational> {
    let scale = v
        .iter()
        .map(|x| x.abs())
        .max()
        .filter(|m| !m.is_zero())
        .unwrap_or_else(Rational::one);
    v.into_iter().map(|x| x / &scale).collect()
}

fn integerize(row: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(row);
    let ints: Vec<BigInt> = row
        .iter()
        .map(|v| (v * Rational::from_integer(den.clone())).to_integer())
        .collect();
    primitive(ints)
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

type Mask = u128;

struct Ray {
    v: Vec<BigInt>,
    zeros: Mask,
}

/// Extreme rays of the pointed cone `{x : H x ≥ 0}` in dimension `d`, or
/// `None` when `H` has rank below `d` (the cone contains a line).
fn double_description(h: &[Vec<BigInt>], d: usize) -> Option<Vec<Vec<BigInt>>> {
    assert!(h.len() <= Mask::BITS as usize);
    let as_rat = |row: &[BigInt]| -> Vec<Rational> {
        row.iter()
            .map(|v| Rational::from_integer(v.clone()))
            .collect()
    };

    // Greedy choice of d independent rows for the initial simplicial cone.
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    let mut chosen_rows: Vec<Vec<Rational>> = Vec::with_capacity(d);
    for (i, row) in h.iter().enumerate() {
        if chosen.len() == d {
            break;
        }
        chosen_rows.push(as_rat(row));
        if rank(&chosen_rows, d) == chosen_rows.len() {
            chosen.push(i);
        } else {
            chosen_rows.pop();
        }
    }
    if chosen.len() < d {
        return None;
    }

    // Initial rays: columns of the inverse of the chosen square block.
    let mut rays: Vec<Ray> = Vec::with_capacity(d);
    for j in 0..d {
        let mut e = vec![Rational::zero(); d];
        e[j] = Rational::one();
        let col =
            super::linalg::solve_square(&chosen_rows, &e).expect("chosen rows are independent");
        let v = integerize(&col);
        let mut zeros: Mask = 0;
        for (jj, &row) in chosen.iter().enumerate() {
            if jj != j {
                zeros |= 1 << row;
            }
        }
        rays.push(Ray { v, zeros });
    }

    let mut processed: Mask = chosen.iter().fold(0, |m, &i| m | (1 << i));
    for (i, row) in h.iter().enumerate() {
        if processed & (1 << i) != 0 {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| idot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&r| values[r].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&r| values[r].is_negative())
            .collect();

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (r, ray) in rays.iter().enumerate() {
            if values[r].is_positive() {
                next.push(Ray {
                    v: ray.v.clone(),
                    zeros: ray.zeros,
                });
            } else if values[r].is_zero() {
                next.push(Ray {
                    v: ray.v.clone(),
                    zeros: ray.zeros | (1 << i),
                });
            }
        }
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros & rays[n].zeros & processed;
                if (common.count_ones() as usize) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(r, ray)| r == p || r == n || ray.zeros & common != common);
                if !adjacent {
                    continue;
                }
                let sp = &values[p];
                let sn = -&values[n];
                let v: Vec<BigInt> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| sp * a + &sn * b)
                    .collect();
                next.push(Ray {
                    v: primitive(v),
                    zeros: common | (1 << i),
                });
            }
        }
        rays = next;
        processed |= 1 << i;
    }
    Some(rays.into_iter().map(|r| r.v).collect())
}
