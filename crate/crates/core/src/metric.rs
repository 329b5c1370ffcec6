//! Finite metric spaces, the zero-mass measure space over them, fundamental
//! vertices, and the convex-hull characterization of metrics.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::min_coefficient_sum;
use crate::rational::format_rational;
use crate::Rational;

/// First reason a matrix fails to be a metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricFault {
    Diagonal {
        i: usize,
    },
    Symmetry {
        i: usize,
        j: usize,
    },
    NonPositive {
        i: usize,
        j: usize,
    },
    /// `d(i,k) > d(i,j) + d(j,k)`.
    Triangle {
        i: usize,
        j: usize,
        k: usize,
    },
}

impl fmt::Display for MetricFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricFault::Diagonal { i } => write!(f, "nonzero diagonal at {i}"),
            MetricFault::Symmetry { i, j } => write!(f, "d({i},{j}) != d({j},{i})"),
            MetricFault::NonPositive { i, j } => write!(f, "d({i},{j}) is not positive"),
            MetricFault::Triangle { i, j, k } => write!(f, "d({i},{k}) > d({i},{j}) + d({j},{k})"),
        }
    }
}

fn check_square(d: &[Vec<Rational>]) -> Result<()> {
    let n = d.len();
    if let Some(row) = d.iter().find(|r| r.len() != n) {
        return Err(Error::Shape(format!(
            "row of length {} in a {n}-row matrix",
            row.len()
        )));
    }
    Ok(())
}

/// Scans for the first triangle violation in lexicographic `(i, j, k)` order.
pub(crate) fn first_triangle_violation(d: &[Vec<Rational>]) -> Option<MetricFault> {
    let n = d.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                if d[i][k] > &d[i][j] + &d[j][k] {
                    return Some(MetricFault::Triangle { i, j, k });
                }
            }
        }
    }
    None
}

/// `Ok(None)` when `d` is a genuine metric, otherwise the first fault found
/// (diagonal, then symmetry, then positivity, then triangles).
pub fn validate_metric(d: &[Vec<Rational>]) -> Result<Option<MetricFault>> {
    check_square(d)?;
    let n = d.len();
    if let Some(i) = (0..n).find(|&i| !d[i][i].is_zero()) {
        return Ok(Some(MetricFault::Diagonal { i }));
    }
    for i in 0..n {
        for j in i + 1..n {
            if d[i][j] != d[j][i] {
                return Ok(Some(MetricFault::Symmetry { i, j }));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !d[i][j].is_positive() {
                return Ok(Some(MetricFault::NonPositive { i, j }));
            }
        }
    }
    Ok(first_triangle_violation(d))
}

/// Labeled points with an exact rational distance matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    d: Vec<Vec<Rational>>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, d: Vec<Vec<Rational>>) -> Result<Self> {
        if labels.len() != d.len() {
            return Err(Error::Shape(format!(
                "{} labels for a {}x{} matrix",
                labels.len(),
                d.len(),
                d.len()
            )));
        }
        if d.is_empty() {
            return Err(Error::Empty("metric space"));
        }
        if let Some(fault) = validate_metric(&d)? {
            return Err(Error::Metric(fault));
        }
        Ok(FiniteMetricSpace { labels, d })
    }

    /// Space with labels `x0, x1, ...`.
    pub fn from_matrix(d: Vec<Vec<Rational>>) -> Result<Self> {
        let labels = default_labels(d.len());
        Self::new(labels, d)
    }

    /// `n` points at mutual distance `side`.
    pub fn uniform(n: usize, side: Rational) -> Result<Self> {
        let d = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::zero()
                        } else {
                            side.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_matrix(d)
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.d
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.d[i][j]
    }

    /// The distance function `ρ(x, ·)`.
    pub fn row(&self, x: usize) -> &[Rational] {
        &self.d[x]
    }

    pub fn check_point(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            return Err(Error::PointIndex {
                index,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Appends a point with distance vector `row`, validating the result.
    pub fn extended(&self, label: String, row: &[Rational]) -> Result<Self> {
        if row.len() != self.len() {
            return Err(Error::Shape(format!(
                "extension row of length {} for {} points",
                row.len(),
                self.len()
            )));
        }
        let mut d = self.d.clone();
        for (r, v) in d.iter_mut().zip(row) {
            r.push(v.clone());
        }
        let mut last = row.to_vec();
        last.push(Rational::zero());
        d.push(last);
        let mut labels = self.labels.clone();
        labels.push(label);
        Self::new(labels, d)
    }

    /// A label not used by any point, of the form `z{n}`.
    pub fn fresh_label(&self) -> String {
        let mut n = self.len();
        loop {
            let candidate = format!("z{n}");
            if !self.labels.contains(&candidate) {
                return candidate;
            }
            n += 1;
        }
    }

    /// True if every distance is an integer.
    pub fn is_integral(&self) -> bool {
        self.d.iter().flatten().all(|v| v.is_integer())
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, row) in self.labels.iter().zip(&self.d) {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "{label}: [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A finitely supported measure of total mass zero. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedMeasure {
    entries: BTreeMap<usize, Rational>,
}

impl SignedMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in entries {
            *map.entry(i).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let total: Rational = map.values().sum();
        if !total.is_zero() {
            return Err(Error::NotInV0(total));
        }
        Ok(SignedMeasure { entries: map })
    }

    pub fn from_dense(coefficients: &[Rational]) -> Result<Self> {
        Self::from_entries(coefficients.iter().cloned().enumerate())
    }

    /// `e_{x,y} = δ_x − δ_y`.
    pub fn elementary(x: usize, y: usize) -> Self {
        if x == y {
            return Self::zero();
        }
        let mut entries = BTreeMap::new();
        entries.insert(x, Rational::one());
        entries.insert(y, -Rational::one());
        SignedMeasure { entries }
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.entries.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest point index carrying mass, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (i, c) in &self.entries {
            v[*i] = c.clone();
        }
        v
    }

    /// `Σ c_k f(z_k)`.
    pub fn pair_with(&self, f: &[Rational]) -> Rational {
        self.entries
            .iter()
            .fold(Rational::zero(), |acc, (i, c)| acc + c * &f[*i])
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        SignedMeasure {
            entries: self.entries.iter().map(|(i, c)| (*i, c * s)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::from_entries(
            self.entries
                .iter()
                .chain(&other.entries)
                .map(|(i, c)| (*i, c.clone())),
        )
        .expect("sum of zero-mass measures has zero mass")
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-Rational::one())
    }

    /// Positive and negative parts, as `(point, mass)` lists with positive masses.
    pub fn split(&self) -> (Vec<(usize, Rational)>, Vec<(usize, Rational)>) {
        let pos = self
            .entries
            .iter()
            .filter(|(_, c)| c.is_positive())
            .map(|(i, c)| (*i, c.clone()))
            .collect();
        let neg = self
            .entries
            .iter()
            .filter(|(_, c)| c.is_negative())
            .map(|(i, c)| (*i, -c.clone()))
            .collect();
        (pos, neg)
    }

    pub fn check_in(&self, space: &FiniteMetricSpace) -> Result<()> {
        if let Some(i) = self.max_index() {
            space.check_point(i)?;
        }
        Ok(())
    }
}

/// `ē_{x,y} = (δ_x − δ_y) / ρ(x,y)`.
pub fn fundamental_vertex(space: &FiniteMetricSpace, x: usize, y: usize) -> Result<SignedMeasure> {
    space.check_point(x)?;
    space.check_point(y)?;
    if x == y {
        return Err(Error::DegeneratePair(x));
    }
    Ok(SignedMeasure::elementary(x, y).scaled(&space.dist(x, y).recip()))
}

/// All fundamental vertices in lexicographic order of ordered pairs.
pub fn fundamental_vertices(space: &FiniteMetricSpace) -> Vec<((usize, usize), SignedMeasure)> {
    let n = space.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for x in 0..n {
        for y in 0..n {
            if x != y {
                out.push(((x, y), fundamental_vertex(space, x, y).expect("valid pair")));
            }
        }
    }
    out
}

/// Candidate points `c(x,y)·e_{x,y}` on the fundamental rays.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateVertexData {
    c: Vec<Vec<Rational>>,
}

impl CandidateVertexData {
    /// `c` must be square, symmetric and positive off the diagonal; the
    /// diagonal is ignored.
    pub fn new(c: Vec<Vec<Rational>>) -> Result<Self> {
        check_square(&c)?;
        let n = c.len();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if c[i][j] != c[j][i] {
                    return Err(Error::Metric(MetricFault::Symmetry { i, j }));
                }
                if !c[i][j].is_positive() {
                    return Err(Error::Metric(MetricFault::NonPositive { i, j }));
                }
            }
        }
        Ok(CandidateVertexData { c })
    }

    /// Candidate data `c = 1/ρ` from a (possibly non-metric) positive matrix.
    pub fn from_distances(rho: &[Vec<Rational>]) -> Result<Self> {
        check_square(rho)?;
        let n = rho.len();
        let mut c = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    if !rho[i][j].is_positive() {
                        return Err(Error::Metric(MetricFault::NonPositive { i, j }));
                    }
                    c[i][j] = rho[i][j].recip();
                }
            }
        }
        Self::new(c)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coefficient(&self, x: usize, y: usize) -> &Rational {
        &self.c[x][y]
    }

    /// `ρ = 1/c` with zero diagonal.
    pub fn implied_distances(&self) -> Vec<Vec<Rational>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::zero()
                        } else {
                            self.c[i][j].recip()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn vertex(&self, x: usize, y: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len()];
        v[x] = self.c[x][y].clone();
        v[y] = -self.c[x][y].clone();
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Witness {
    pub triangle: Option<MetricFault>,
    /// Candidate vertex `(x, y)` expressible with coefficient sum `< 1`.
    pub vertex: Option<(usize, usize)>,
    pub coefficient_sum: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Report {
    pub is_metric: bool,
    pub hull_condition: bool,
    pub agreement: bool,
    pub witness: Option<Lemma1Witness>,
}

/// Decides both sides of the hull criterion independently: the triangle
/// inequality for `ρ = 1/c`, and whether some candidate vertex is a
/// nonnegative combination of the others with coefficient sum below one.
pub fn lemma1_check(data: &CandidateVertexData) -> Result<Lemma1Report> {
    let rho = data.implied_distances();
    let triangle = first_triangle_violation(&rho);
    let is_metric = triangle.is_none();

    let n = data.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let vertices: Vec<Vec<Rational>> = pairs.iter().map(|&(x, y)| data.vertex(x, y)).collect();
    let mut interior: Option<((usize, usize), Rational)> = None;
    for (idx, &pair) in pairs.iter().enumerate() {
        let others: Vec<Vec<Rational>> = vertices
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .map(|(_, v)| v.clone())
            .collect();
        if let Some(s) = min_coefficient_sum(&vertices[idx], &others)? {
            if s < Rational::one() {
                interior = Some((pair, s));
                break;
            }
        }
    }
    let hull_condition = interior.is_none();
    let witness = (!is_metric || !hull_condition).then(|| Lemma1Witness {
        triangle: triangle.clone(),
        vertex: interior.as_ref().map(|(p, _)| *p),
        coefficient_sum: interior.as_ref().map(|(_, s)| s.clone()),
    });
    Ok(Lemma1Report {
        is_metric,
        hull_condition,
        agreement: is_metric == hull_condition,
        witness,
    })
}

/// Restriction of the metric to `subset`, keeping its order.
pub fn induced_submetric(space: &FiniteMetricSpace, subset: &[usize]) -> Result<FiniteMetricSpace> {
    if subset.is_empty() {
        return Err(Error::Empty("subset"));
    }
    let mut seen = vec![false; space.len()];
    for &i in subset {
        space.check_point(i)?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicatePoint(i));
        }
    }
    let labels = subset.iter().map(|&i| space.labels()[i].clone()).collect();
    let d = subset
        .iter()
        .map(|&i| subset.iter().map(|&j| space.dist(i, j).clone()).collect())
        .collect();
    Ok(FiniteMetricSpace { labels, d })
}

pub fn diameter(space: &FiniteMetricSpace) -> Rational {
    space
        .matrix()
        .iter()
        .flatten()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    fn bad_triangle() -> Vec<Vec<Rational>> {
        // a, b, c with d(a,b) = d(b,c) = 1 and d(a,c) = 3.
        mat(&[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]])
    }

    #[test]
    fn validate_examples() {
        assert_eq!(
            validate_metric(&mat(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])).unwrap(),
            None
        );
        assert_eq!(
            validate_metric(&bad_triangle()).unwrap(),
            Some(MetricFault::Triangle { i: 0, j: 1, k: 2 })
        );
        assert_eq!(
            validate_metric(&mat(&[&[0, 1], &[2, 0]])).unwrap(),
            Some(MetricFault::Symmetry { i: 0, j: 1 })
        );
        assert_eq!(
            validate_metric(&mat(&[&[1, 1], &[1, 0]])).unwrap(),
            Some(MetricFault::Diagonal { i: 0 })
        );
        assert_eq!(
            validate_metric(&mat(&[&[0, 0], &[0, 0]])).unwrap(),
            Some(MetricFault::NonPositive { i: 0, j: 1 })
        );
        assert!(matches!(
            validate_metric(&mat(&[&[0, 1]])),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn fundamental_vertex_formula() {
        let s = FiniteMetricSpace::from_matrix(mat(&[&[0, 2], &[2, 0]])).unwrap();
        let v = fundamental_vertex(&s, 0, 1).unwrap();
        assert_eq!(v.to_dense(2), vec![ratio(1, 2), ratio(-1, 2)]);
        assert_eq!(fundamental_vertex(&s, 1, 0).unwrap(), v.negated());
        assert_eq!(fundamental_vertex(&s, 1, 1), Err(Error::DegeneratePair(1)));
        let unit = FiniteMetricSpace::uniform(2, int(1)).unwrap();
        assert_eq!(
            fundamental_vertex(&unit, 0, 1).unwrap(),
            SignedMeasure::elementary(0, 1)
        );
    }

    #[test]
    fn measures_reject_mass() {
        assert_eq!(
            SignedMeasure::from_dense(&[int(1), int(1)]),
            Err(Error::NotInV0(int(2)))
        );
        let m = SignedMeasure::from_dense(&[int(0), int(2), int(-2)]).unwrap();
        assert_eq!(m.support(), vec![1, 2]);
    }

    #[test]
    fn candidate_check_equilateral() {
        let data = CandidateVertexData::from_distances(&mat(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]))
            .unwrap();
        let r = lemma1_check(&data).unwrap();
        assert!(r.is_metric && r.hull_condition && r.agreement);
        assert!(r.witness.is_none());
    }

    #[test]
    fn candidate_check_violation_reproduces_two_thirds() {
        let data = CandidateVertexData::from_distances(&bad_triangle()).unwrap();
        let r = lemma1_check(&data).unwrap();
        assert!(!r.is_metric && !r.hull_condition && r.agreement);
        let w = r.witness.unwrap();
        assert_eq!(w.vertex, Some((0, 2)));
        assert_eq!(w.coefficient_sum, Some(ratio(2, 3)));
    }

    #[test]
    fn submetric_and_diameter() {
        let s = FiniteMetricSpace::uniform(3, int(1)).unwrap();
        assert_eq!(induced_submetric(&s, &[0, 1, 2]).unwrap(), s);
        let two = induced_submetric(&s, &[2, 0]).unwrap();
        assert_eq!(two.labels(), &["x2".to_string(), "x0".to_string()]);
        assert_eq!(two.dist(0, 1), &int(1));
        assert_eq!(induced_submetric(&s, &[1]).unwrap().len(), 1);
        assert_eq!(induced_submetric(&s, &[]), Err(Error::Empty("subset")));
        assert_eq!(
            induced_submetric(&s, &[1, 1]),
            Err(Error::DuplicatePoint(1))
        );
        assert_eq!(diameter(&s), int(1));
        assert_eq!(diameter(&induced_submetric(&s, &[0]).unwrap()), int(0));
    }
}
