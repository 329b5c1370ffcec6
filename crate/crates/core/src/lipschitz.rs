//! Lipschitz functions on finite spaces.
//!
//! Functions modulo constants are represented by the slice `f(x₀) = 0`.
//! Extreme points of the unit ball are found two ways: as vertices of the
//! sliced Lipschitz polytope, and by connectivity of the tight graph. The two
//! are kept independent so they can check each other.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{enumerate_vertices, HPolytope};
use crate::metric::FiniteMetricSpace;
use crate::Rational;

/// Largest space on which extremal functions are enumerated.
pub const MAX_POINTS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LipschitzFunction {
    values: Vec<Rational>,
}

impl LipschitzFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        LipschitzFunction { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(
            values
                .iter()
                .map(|&v| Rational::from_integer(v.into()))
                .collect(),
        )
    }

    /// `ρ(x, ·)`.
    pub fn distance(space: &FiniteMetricSpace, x: usize) -> Self {
        Self::new(space.row(x).to_vec())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self::new(self.values.iter().map(|v| -v.clone()).collect())
    }

    pub fn shifted(&self, c: &Rational) -> Self {
        Self::new(self.values.iter().map(|v| v + c).collect())
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        Self::new(self.values.iter().map(|v| v * s).collect())
    }

    /// Representative with value 0 at the first point.
    pub fn normalized(&self) -> Self {
        match self.values.first() {
            Some(v0) => self.shifted(&-v0.clone()),
            None => self.clone(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn min_value(&self) -> Option<&Rational> {
        self.values.iter().min()
    }

    pub fn max_value(&self) -> Option<&Rational> {
        self.values.iter().max()
    }

    /// Equality modulo additive constants.
    pub fn same_class(&self, other: &Self) -> bool {
        self.len() == other.len() && self.normalized() == other.normalized()
    }
}

fn check_len(space: &FiniteMetricSpace, f: &LipschitzFunction) -> Result<()> {
    if f.len() != space.len() {
        return Err(Error::Shape(format!(
            "function with {} values on a space of {} points",
            f.len(),
            space.len()
        )));
    }
    Ok(())
}

pub(crate) fn check_enumerable(space: &FiniteMetricSpace) -> Result<()> {
    if space.len() > MAX_POINTS {
        return Err(Error::SizeLimit {
            what: "space size",
            actual: space.len(),
            limit: MAX_POINTS,
        });
    }
    Ok(())
}

/// `max_{x≠y} |f(x) − f(y)| / ρ(x,y)`.
pub fn lipschitz_constant(space: &FiniteMetricSpace, f: &LipschitzFunction) -> Result<Rational> {
    check_len(space, f)?;
    let n = space.len();
    if n < 2 {
        return Err(Error::Precondition(
            "Lipschitz constant is undefined on a one-point space".into(),
        ));
    }
    let mut best = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let r = (f.value(i) - f.value(j)).abs() / space.dist(i, j);
            if r > best {
                best = r;
            }
        }
    }
    Ok(best)
}

pub(crate) fn is_one_lipschitz(space: &FiniteMetricSpace, f: &[Rational]) -> bool {
    let n = space.len();
    (0..n).all(|i| (i + 1..n).all(|j| (&f[i] - &f[j]).abs() <= *space.dist(i, j)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// First failing pair `(x, y)`, `x ≤ y`, in lexicographic order.
    pub witness: Option<(usize, usize)>,
}

/// Checks `|f(x) − f(y)| ≤ ρ(x,y) ≤ f(x) + f(y)` over all pairs, `x = y`
/// included (which forces `f ≥ 0`).
pub fn is_admissible(space: &FiniteMetricSpace, f: &LipschitzFunction) -> Result<Admissibility> {
    check_len(space, f)?;
    let n = space.len();
    for x in 0..n {
        for y in x..n {
            let d = space.dist(x, y);
            let (fx, fy) = (f.value(x), f.value(y));
            if (fx - fy).abs() > *d || *d > fx + fy {
                return Ok(Admissibility {
                    admissible: false,
                    witness: Some((x, y)),
                });
            }
        }
    }
    Ok(Admissibility {
        admissible: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalityCertificate {
    pub verdict: bool,
    /// Directed edges `i → j` with `f(i) − f(j) = ρ(i,j)`.
    pub tight_edges: Vec<(usize, usize)>,
    /// Connected components of the undirected tight graph, each sorted,
    /// ordered by smallest member. A single component means extremal.
    pub components: Vec<Vec<usize>>,
}

/// Extremality via connectivity of the tight graph. Requires Lipschitz
/// constant exactly 1; constant functions are reported non-extremal.
pub fn is_extremal_tight_graph(
    space: &FiniteMetricSpace,
    f: &LipschitzFunction,
) -> Result<ExtremalityCertificate> {
    let lip = lipschitz_constant(space, f)?;
    let n = space.len();
    if lip.is_zero() {
        return Ok(ExtremalityCertificate {
            verdict: false,
            tight_edges: Vec::new(),
            components: (0..n).map(|i| vec![i]).collect(),
        });
    }
    if !lip.is_one() {
        return Err(Error::Precondition(format!(
            "tight-graph test needs Lipschitz constant 1, got {lip}"
        )));
    }
    let mut tight_edges = Vec::new();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && f.value(i) - f.value(j) == *space.dist(i, j) {
                tight_edges.push((i, j));
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_slot[r] {
            Some(slot) => components[slot].push(i),
            None => {
                root_slot[r] = Some(components.len());
                components.push(vec![i]);
            }
        }
    }
    Ok(ExtremalityCertificate {
        verdict: components.len() == 1,
        tight_edges,
        components,
    })
}

/// The unit ball of Lipschitz functions modulo constants, sliced at
/// `f(x₀) = 0`, in coordinates `(f(x₁), …, f(x_{n−1}))`.
pub fn lipschitz_polytope(space: &FiniteMetricSpace) -> HPolytope {
    let n = space.len();
    let dim = n.saturating_sub(1);
    let mut p = HPolytope::new(dim);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // f(i) − f(j) ≤ ρ(i,j), with coordinate k ↦ point k + 1.
            let mut row = vec![Rational::zero(); dim];
            if i > 0 {
                row[i - 1] += Rational::one();
            }
            if j > 0 {
                row[j - 1] -= Rational::one();
            }
            p.add_inequality(row, space.dist(i, j).clone());
        }
    }
    p
}

fn lift(slice: Vec<Rational>) -> LipschitzFunction {
    let mut values = Vec::with_capacity(slice.len() + 1);
    values.push(Rational::zero());
    values.extend(slice);
    LipschitzFunction::new(values)
}

/// Extreme points of the unit ball of Lipschitz functions modulo
/// constants, normalized to value 0 at the first point and sorted.
pub fn enumerate_extremal(space: &FiniteMetricSpace) -> Result<Vec<LipschitzFunction>> {
    check_enumerable(space)?;
    if space.len() < 2 {
        return Ok(Vec::new());
    }
    let vertices = enumerate_vertices(&lipschitz_polytope(space))?;
    Ok(vertices.into_iter().map(lift).collect())
}

/// Vertex test on the sliced Lipschitz polytope (rank of active rows).
pub fn is_polytope_vertex(space: &FiniteMetricSpace, f: &LipschitzFunction) -> Result<bool> {
    check_len(space, f)?;
    if space.len() < 2 {
        return Ok(false);
    }
    let g = f.normalized();
    Ok(lipschitz_polytope(space).is_vertex(&g.values()[1..]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub defect: Rational,
    /// Host point attaining the defect (lowest index on ties).
    pub point: usize,
    /// Constant `a` with `f ≈ ρ(point, ·) − a` on the subset; 0 when not additive.
    pub shift: Rational,
}

/// Best approximation of `f` (given on `subset` of `host`) by a host
/// distance function, optionally up to an additive constant.
pub fn representability_defect(
    host: &FiniteMetricSpace,
    subset: &[usize],
    f: &LipschitzFunction,
    additive: bool,
) -> Result<Representation> {
    if subset.is_empty() {
        return Err(Error::Empty("subset"));
    }
    if f.len() != subset.len() {
        return Err(Error::Shape(format!(
            "function with {} values on a subset of {} points",
            f.len(),
            subset.len()
        )));
    }
    for &z in subset {
        host.check_point(z)?;
    }
    let mut best: Option<Representation> = None;
    for x in 0..host.len() {
        let gaps: Vec<Rational> = subset
            .iter()
            .zip(f.values())
            .map(|(&z, fz)| host.dist(x, z) - fz)
            .collect();
        let (defect, shift) = if additive {
            let lo = gaps.iter().min().expect("nonempty");
            let hi = gaps.iter().max().expect("nonempty");
            (
                (hi - lo) / Rational::from_integer(2.into()),
                (hi + lo) / Rational::from_integer(2.into()),
            )
        } else {
            let worst = gaps.iter().map(|g| g.abs()).max().expect("nonempty");
            (worst, Rational::zero())
        };
        if best.as_ref().is_none_or(|b| defect < b.defect) {
            best = Some(Representation {
                defect,
                point: x,
                shift,
            });
        }
    }
    Ok(best.expect("host is nonempty"))
}

/// Integer vector on the class of an extremal function of an
/// integer-distance space: differences of extremal values are integers
/// because the tight graph is connected with integer edge lengths.
pub fn integer_ray_representative(
    space: &FiniteMetricSpace,
    f: &LipschitzFunction,
) -> Result<Vec<BigInt>> {
    if !space.is_integral() {
        return Err(Error::Precondition(
            "space has non-integer distances".into(),
        ));
    }
    let cert = is_extremal_tight_graph(space, f)?;
    if !cert.verdict {
        return Err(Error::Precondition("function is not extremal".into()));
    }
    let g = f.normalized();
    if let Some(v) = g.values().iter().find(|v| !v.is_integer()) {
        return Err(Error::Invariant(format!(
            "extremal function has non-integer coordinate difference {v}"
        )));
    }
    Ok(g.values().iter().map(|v| v.to_integer()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn equilateral() -> FiniteMetricSpace {
        FiniteMetricSpace::uniform(3, int(1)).unwrap()
    }

    fn f(v: &[Rational]) -> LipschitzFunction {
        LipschitzFunction::new(v.to_vec())
    }

    #[test]
    fn constants() {
        let s = equilateral();
        assert_eq!(
            lipschitz_constant(&s, &LipschitzFunction::distance(&s, 0)).unwrap(),
            int(1)
        );
        assert_eq!(
            lipschitz_constant(&s, &LipschitzFunction::from_integers(&[4, 4, 4])).unwrap(),
            int(0)
        );
        assert_eq!(
            lipschitz_constant(&s, &f(&[int(0), ratio(1, 2), int(1)])).unwrap(),
            int(1)
        );
        let one = FiniteMetricSpace::uniform(1, int(1)).unwrap();
        assert!(lipschitz_constant(&one, &LipschitzFunction::from_integers(&[0])).is_err());
    }

    #[test]
    fn admissibility() {
        let s = equilateral();
        assert!(
            is_admissible(&s, &LipschitzFunction::distance(&s, 1))
                .unwrap()
                .admissible
        );
        assert_eq!(
            is_admissible(&s, &LipschitzFunction::from_integers(&[0, 1, 0])).unwrap(),
            Admissibility {
                admissible: false,
                witness: Some((0, 2))
            }
        );
        assert!(
            is_admissible(&s, &LipschitzFunction::from_integers(&[5, 5, 5]))
                .unwrap()
                .admissible
        );
    }

    #[test]
    fn tight_graph() {
        let s = equilateral();
        let c = is_extremal_tight_graph(&s, &LipschitzFunction::from_integers(&[0, 1, 1])).unwrap();
        assert!(c.verdict);
        assert_eq!(c.tight_edges, vec![(1, 0), (2, 0)]);

        let c = is_extremal_tight_graph(&s, &f(&[int(0), ratio(1, 2), int(1)])).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.components, vec![vec![0, 2], vec![1]]);

        let two = FiniteMetricSpace::uniform(2, int(3)).unwrap();
        assert!(
            is_extremal_tight_graph(&two, &LipschitzFunction::distance(&two, 1))
                .unwrap()
                .verdict
        );

        assert!(
            !is_extremal_tight_graph(&s, &LipschitzFunction::from_integers(&[2, 2, 2]))
                .unwrap()
                .verdict
        );
        assert!(matches!(
            is_extremal_tight_graph(&s, &LipschitzFunction::from_integers(&[0, 2, 0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn extremal_two_and_three_points() {
        let two = FiniteMetricSpace::uniform(2, int(2)).unwrap();
        assert_eq!(
            enumerate_extremal(&two).unwrap(),
            vec![
                LipschitzFunction::from_integers(&[0, -2]),
                LipschitzFunction::from_integers(&[0, 2])
            ]
        );
        let got = enumerate_extremal(&equilateral()).unwrap();
        let expected: Vec<LipschitzFunction> = [
            [0, -1, -1],
            [0, -1, 0],
            [0, 0, -1],
            [0, 0, 1],
            [0, 1, 0],
            [0, 1, 1],
        ]
        .iter()
        .map(|v| LipschitzFunction::from_integers(v))
        .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn oversize_rejected() {
        let big = FiniteMetricSpace::uniform(9, int(1)).unwrap();
        assert!(matches!(
            enumerate_extremal(&big),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn defects() {
        let s = equilateral();
        let r = representability_defect(&s, &[1, 2], &f(&[int(1), int(1)]), false).unwrap();
        assert_eq!(r.defect, int(0));
        assert_eq!(r.point, 0);

        let r = representability_defect(
            &s,
            &[0, 1, 2],
            &LipschitzFunction::from_integers(&[0, 1, 0]),
            true,
        )
        .unwrap();
        assert_eq!(
            r,
            Representation {
                defect: ratio(1, 2),
                point: 0,
                shift: ratio(1, 2)
            }
        );
        let r = representability_defect(
            &s,
            &[0, 1, 2],
            &LipschitzFunction::from_integers(&[0, 1, 1]),
            true,
        )
        .unwrap();
        assert_eq!(r.defect, int(0));
        assert!(representability_defect(&s, &[], &f(&[]), true).is_err());
    }

    #[test]
    fn integer_representatives() {
        let s = equilateral();
        let r =
            integer_ray_representative(&s, &LipschitzFunction::from_integers(&[0, 1, 1])).unwrap();
        assert_eq!(r, vec![0.into(), 1.into(), 1.into()]);
        let r =
            integer_ray_representative(&s, &LipschitzFunction::from_integers(&[0, -1, 0])).unwrap();
        assert_eq!(r, vec![0.into(), (-1).into(), 0.into()]);
        let frac = FiniteMetricSpace::uniform(2, ratio(1, 2)).unwrap();
        assert!(integer_ray_representative(&frac, &LipschitzFunction::distance(&frac, 0)).is_err());
    }
}
