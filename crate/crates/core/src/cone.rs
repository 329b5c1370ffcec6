//! The cone of semimetrics: extremality of a distance matrix and a seeded
//! search for extremal matrices.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constructions::derive_seed;
use crate::error::{Error, Result};
use crate::exactgeom::linalg::nullspace;
use crate::lipschitz::MAX_POINTS;
use crate::metric::{default_labels, FiniteMetricSpace};
use crate::Rational;

/// Number of independent shards a search is split into. Fixed so results do
/// not depend on how many threads run them.
pub const SEARCH_SHARDS: u64 = 8;

/// Symmetric, zero-diagonal, nonnegative matrix satisfying the triangle
/// inequality. Distinct points may be at distance zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Semimetric {
    d: Vec<Vec<Rational>>,
}

impl Semimetric {
    pub fn new(d: Vec<Vec<Rational>>) -> Result<Self> {
        let n = d.len();
        if d.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("semimetric matrix must be square".into()));
        }
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(Error::Constraint(format!("nonzero diagonal entry at {i}")));
            }
            for j in 0..n {
                if d[i][j] != d[j][i] {
                    return Err(Error::Constraint(format!(
                        "asymmetric entries at ({i},{j})"
                    )));
                }
                if d[i][j].is_negative() {
                    return Err(Error::Constraint(format!("negative entry at ({i},{j})")));
                }
                for k in 0..n {
                    if d[i][k] > &d[i][j] + &d[j][k] {
                        return Err(Error::Constraint(format!(
                            "triangle ({i},{j},{k}) violated"
                        )));
                    }
                }
            }
        }
        Ok(Semimetric { d })
    }

    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        Semimetric {
            d: space.matrix().to_vec(),
        }
    }

    /// Fails unless every off-diagonal entry is positive.
    pub fn to_space(&self) -> Result<FiniteMetricSpace> {
        FiniteMetricSpace::new(default_labels(self.len()), self.d.clone())
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.d
    }

    /// Upper-triangle entries in row order.
    pub fn entries(&self) -> Vec<Rational> {
        pair_list(self.len())
            .into_iter()
            .map(|(i, j)| self.d[i][j].clone())
            .collect()
    }

    pub fn scaled(&self, q: &Rational) -> Self {
        Semimetric {
            d: self
                .d
                .iter()
                .map(|r| r.iter().map(|v| v * q).collect())
                .collect(),
        }
    }

    /// Relabels point `p[i]` as `i`.
    pub fn permuted(&self, p: &[usize]) -> Self {
        Semimetric {
            d: p.iter()
                .map(|&a| p.iter().map(|&b| self.d[a][b].clone()).collect())
                .collect(),
        }
    }
}

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeExtremality {
    pub extremal: bool,
    pub face_dimension: usize,
    /// Basis of the face's linear span, as symmetric matrices.
    pub basis: Vec<Vec<Vec<Rational>>>,
}

fn tight_rows(d: &Semimetric) -> Vec<Vec<Rational>> {
    let n = d.len();
    let m = n * n.saturating_sub(1) / 2;
    let mut rows = Vec::new();
    for (i, j) in pair_list(n) {
        if d.d[i][j].is_zero() {
            let mut row = vec![Rational::zero(); m];
            row[pair_index(n, i, j)] = Rational::one();
            rows.push(row);
        }
    }
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                if j != i && j != k && d.d[i][k] == &d.d[i][j] + &d.d[j][k] {
                    let mut row = vec![Rational::zero(); m];
                    row[pair_index(n, i, k)] += Rational::one();
                    row[pair_index(n, i, j)] -= Rational::one();
                    row[pair_index(n, j, k)] -= Rational::one();
                    rows.push(row);
                }
            }
        }
    }
    rows
}

fn face_dimension(d: &Semimetric) -> usize {
    let n = d.len();
    let m = n * n.saturating_sub(1) / 2;
    nullspace(&tight_rows(d), m).len()
}

/// Dimension of the smallest face of the semimetric cone containing `d`,
/// read off the tight triangle equalities; extremal means dimension 1.
pub fn cone_extremality(d: &Semimetric) -> Result<ConeExtremality> {
    if d.d.iter().flatten().all(|v| v.is_zero()) {
        return Err(Error::Precondition("the zero matrix spans no ray".into()));
    }
    let n = d.len();
    let m = n * (n - 1) / 2;
    let basis: Vec<Vec<Vec<Rational>>> = nullspace(&tight_rows(d), m)
        .into_iter()
        .map(|v| {
            let mut mat = vec![vec![Rational::zero(); n]; n];
            for (k, (i, j)) in pair_list(n).into_iter().enumerate() {
                mat[i][j] = v[k].clone();
                mat[j][i] = v[k].clone();
            }
            mat
        })
        .collect();
    Ok(ConeExtremality {
        extremal: basis.len() == 1,
        face_dimension: basis.len(),
        basis,
    })
}

fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn go(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, out);
            p.swap(k, i);
        }
    }
    go(0, &mut p, &mut out);
    out
}

/// Representative of `d` up to positive scaling and relabeling: the
/// primitive integer matrix whose upper triangle is lexicographically least
/// over all permutations.
pub fn canonical_form(d: &Semimetric) -> Semimetric {
    let n = d.len();
    let best = permutations(n)
        .into_iter()
        .map(|p| primitive(&d.permuted(&p).entries()))
        .min()
        .expect("at least the identity permutation");
    let mut mat = vec![vec![Rational::zero(); n]; n];
    for (k, (i, j)) in pair_list(n).into_iter().enumerate() {
        mat[i][j] = Rational::from_integer(best[k].clone());
        mat[j][i] = Rational::from_integer(best[k].clone());
    }
    Semimetric { d: mat }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSearch {
    pub samples: usize,
    /// Samples whose local search ended on an extreme ray.
    pub extremal_hits: usize,
    /// Distinct extremal matrices in canonical form, sorted.
    pub findings: Vec<Semimetric>,
}

fn random_entry(rng: &mut ChaCha8Rng, commensurable_only: bool) -> Rational {
    if commensurable_only {
        Rational::from_integer(rng.gen_range(1..=9).into())
    } else {
        Rational::new(rng.gen_range(1..=24).into(), rng.gen_range(1..=5).into())
    }
}

fn random_semimetric(n: usize, rng: &mut ChaCha8Rng, commensurable_only: bool) -> Semimetric {
    let mut d = vec![vec![Rational::zero(); n]; n];
    for (i, j) in pair_list(n) {
        let v = random_entry(rng, commensurable_only);
        d[i][j] = v.clone();
        d[j][i] = v;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    Semimetric { d }
}

/// Moves one entry at a time to an end of its feasible interval whenever
/// that shrinks the face, keeping every entry positive.
fn descend(mut d: Semimetric, rng: &mut ChaCha8Rng) -> Semimetric {
    let n = d.len();
    let mut dim = face_dimension(&d);
    loop {
        if dim <= 1 {
            return d;
        }
        let mut pairs = pair_list(n);
        for k in (1..pairs.len()).rev() {
            pairs.swap(k, rng.gen_range(0..=k));
        }
        let mut improved = false;
        'pairs: for (i, j) in pairs {
            let others = (0..n).filter(|&k| k != i && k != j);
            let low = others
                .clone()
                .map(|k| (&d.d[i][k] - &d.d[k][j]).abs())
                .max();
            let high = others.map(|k| &d.d[i][k] + &d.d[k][j]).min();
            for candidate in [low, high].into_iter().flatten() {
                if !candidate.is_positive() || candidate == d.d[i][j] {
                    continue;
                }
                let mut next = d.clone();
                next.d[i][j] = candidate.clone();
                next.d[j][i] = candidate;
                let next_dim = face_dimension(&next);
                if next_dim < dim {
                    d = next;
                    dim = next_dim;
                    improved = true;
                    break 'pairs;
                }
            }
        }
        if !improved {
            return d;
        }
    }
}

fn shard_budget(budget: usize, shard: u64) -> usize {
    let s = SEARCH_SHARDS as usize;
    budget / s + usize::from((shard as usize) < budget % s)
}

/// Seeded search for strictly positive extremal `n`-point metrics. Work is
/// split into [`SEARCH_SHARDS`] shards with derived seeds and merged in
/// shard order, so the result depends only on `(n, budget, seed,
/// commensurable_only)`.
pub fn search_extremal(
    n: usize,
    budget: usize,
    seed: u64,
    commensurable_only: bool,
) -> Result<ConeSearch> {
    if n < 2 {
        return Err(Error::Precondition(
            "search needs at least two points".into(),
        ));
    }
    if n > MAX_POINTS {
        return Err(Error::SizeLimit {
            what: "search size",
            actual: n,
            limit: MAX_POINTS,
        });
    }
    let shards: Vec<(usize, usize, BTreeSet<Semimetric>)> = (0..SEARCH_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, shard));
            let count = shard_budget(budget, shard);
            let mut hits = 0;
            let mut found = BTreeSet::new();
            for _ in 0..count {
                let start = random_semimetric(n, &mut rng, commensurable_only);
                let end = descend(start, &mut rng);
                if face_dimension(&end) == 1 {
                    hits += 1;
                    found.insert(canonical_form(&end));
                }
            }
            (count, hits, found)
        })
        .collect();
    let mut samples = 0;
    let mut extremal_hits = 0;
    let mut findings = BTreeSet::new();
    for (count, hits, found) in shards {
        samples += count;
        extremal_hits += hits;
        findings.extend(found);
    }
    Ok(ConeSearch {
        samples,
        extremal_hits,
        findings: findings.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn semi(rows: &[&[i64]]) -> Semimetric {
        Semimetric::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn small_cones() {
        let two = semi(&[&[0, 3], &[3, 0]]);
        let r = cone_extremality(&two).unwrap();
        assert!(r.extremal);
        assert_eq!(r.face_dimension, 1);

        let eq = semi(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(cone_extremality(&eq).unwrap().face_dimension, 3);

        let path = semi(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        let r = cone_extremality(&path).unwrap();
        assert!(!r.extremal);
        assert_eq!(r.face_dimension, 2);
    }

    #[test]
    fn cut_semimetric_is_extremal() {
        let cut = semi(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]);
        assert!(cone_extremality(&cut).unwrap().extremal);
        assert!(cut.to_space().is_err());
    }

    #[test]
    fn zero_matrix_rejected() {
        let z = semi(&[&[0, 0], &[0, 0]]);
        assert!(cone_extremality(&z).is_err());
    }

    #[test]
    fn invalid_semimetric_rejected() {
        let bad: Vec<Vec<Rational>> = [[0, 1, 3], [1, 0, 1], [3, 1, 0]]
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        assert!(Semimetric::new(bad).is_err());
    }

    #[test]
    fn canonical_form_ignores_scale_and_labels() {
        let a = semi(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        let b = semi(&[&[0, 4, 2], &[4, 0, 2], &[2, 2, 0]]);
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn searches() {
        let two = search_extremal(2, 16, 5, true).unwrap();
        assert_eq!(two.samples, 16);
        assert_eq!(two.extremal_hits, 16);
        assert_eq!(two.findings.len(), 1);

        let three = search_extremal(3, 40, 5, false).unwrap();
        assert!(three.findings.is_empty());
    }
}
