//! Building bigger spaces: one-point extensions, exact realization of
//! extremal functions, face piercing, the rigidification loop, growth of
//! constrained universal-space approximations, and random test spaces.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactgeom::vertices_and_rays;
use crate::lipschitz::{
    enumerate_extremal, is_admissible, is_extremal_tight_graph, lipschitz_constant,
    representability_defect, LipschitzFunction,
};
use crate::metric::{
    diameter, fundamental_vertex, induced_submetric, FiniteMetricSpace, SignedMeasure,
};
use crate::rational::ceil;
use crate::rigidity::{
    admissible_polyhedron, max_extension, random_convex_combinations, rigidity_defect,
    SAMPLE_SUBSET_SIZE,
};
use crate::Rational;

/// Which distances a construction may introduce.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DistanceConstraint {
    /// Any positive rational.
    #[default]
    RealRational,
    /// Rationals not smaller than one.
    RationalAtLeastOne,
    /// Integers not smaller than one.
    IntegerAtLeastOne,
}

impl DistanceConstraint {
    pub fn name(self) -> &'static str {
        match self {
            DistanceConstraint::RealRational => "rational",
            DistanceConstraint::RationalAtLeastOne => "rational-ge1",
            DistanceConstraint::IntegerAtLeastOne => "integer",
        }
    }

    /// Whether a positive distance respects the constraint.
    pub fn admits(self, d: &Rational) -> bool {
        match self {
            DistanceConstraint::RealRational => d.is_positive(),
            DistanceConstraint::RationalAtLeastOne => *d >= Rational::one(),
            DistanceConstraint::IntegerAtLeastOne => d.is_integer() && *d >= Rational::one(),
        }
    }

    pub fn check_space(self, space: &FiniteMetricSpace) -> Result<()> {
        let n = space.len();
        for i in 0..n {
            for j in i + 1..n {
                if !self.admits(space.dist(i, j)) {
                    return Err(Error::Constraint(format!(
                        "distance {} between points {i} and {j} is not allowed under {}",
                        space.dist(i, j),
                        self.name()
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for DistanceConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceConstraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" | "real-rational" => Ok(DistanceConstraint::RealRational),
            "rational-ge1" => Ok(DistanceConstraint::RationalAtLeastOne),
            "integer" | "integer-ge1" => Ok(DistanceConstraint::IntegerAtLeastOne),
            other => Err(Error::Parse(format!(
                "unknown distance constraint {other:?}"
            ))),
        }
    }
}

/// Adds one point at distance `g(x)` from each point `x`.
pub fn katetov_extend(
    space: &FiniteMetricSpace,
    g: &LipschitzFunction,
    constraint: DistanceConstraint,
) -> Result<FiniteMetricSpace> {
    let adm = is_admissible(space, g)?;
    if let Some((i, j)) = adm.witness {
        return Err(Error::Inadmissible(i, j));
    }
    if let Some(i) = g.values().iter().position(|v| v.is_zero()) {
        return Err(Error::DuplicatePoint(i));
    }
    if let Some(v) = g.values().iter().find(|v| !constraint.admits(v)) {
        return Err(Error::Constraint(format!(
            "distance {v} is not allowed under {constraint}"
        )));
    }
    space.extended(space.fresh_label(), g.values())
}

fn two() -> Rational {
    Rational::from_integer(2.into())
}

/// Half the smallest distance of the space, or 1 for a single point.
fn positivity_margin(space: &FiniteMetricSpace) -> Rational {
    let n = space.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| space.dist(i, j).clone())
        .min()
        .map_or_else(Rational::one, |d| d / two())
}

/// Smallest `C` making `f + C` admissible on the subset: the largest of
/// `(ρ(y,y′) − f(y) − f(y′)) / 2` over pairs (including `y = y′`).
fn lower_shift(space: &FiniteMetricSpace, subset: &[usize], f: &[Rational]) -> Rational {
    let mut c: Option<Rational> = None;
    for (a, &y) in subset.iter().enumerate() {
        for (b, &z) in subset.iter().enumerate().skip(a) {
            let need = (space.dist(y, z) - &f[a] - &f[b]) / two();
            if c.as_ref().is_none_or(|c| need > *c) {
                c = Some(need);
            }
        }
    }
    c.expect("subset is nonempty")
}

/// Smallest admissible shift `C` of `f` on the subset that also keeps every
/// new distance positive and inside the constraint.
fn realization_shift(
    space: &FiniteMetricSpace,
    subset: &[usize],
    f: &[Rational],
    constraint: DistanceConstraint,
) -> Result<Rational> {
    let base = lower_shift(space, subset, f);
    let low = f.iter().min().expect("subset is nonempty");
    Ok(match constraint {
        DistanceConstraint::RealRational => {
            if (low + &base).is_zero() {
                base + positivity_margin(space)
            } else {
                base
            }
        }
        DistanceConstraint::RationalAtLeastOne => base.max(Rational::one() - low),
        DistanceConstraint::IntegerAtLeastOne => {
            if let Some(v) = f.iter().find(|v| !(*v - &f[0]).is_integer()) {
                return Err(Error::Constraint(format!(
                    "values {} and {v} differ by a non-integer, no integral shift exists",
                    f[0]
                )));
            }
            let c = base.max(Rational::one() - low);
            // Smallest C' >= c with f[0] + C' integral.
            ceil(&(&f[0] + &c)) - &f[0]
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub space: FiniteMetricSpace,
    /// The shift `C`: the new point is at distance `f(y) + C` from `y ∈ F`.
    pub constant: Rational,
    /// Index of the new point.
    pub point: usize,
    /// Whether `f` was extremal on the subset. Realization works either way.
    pub extremal: bool,
}

/// Adds a point `z` with `ρ(z, y) = f(y) + C` on the subset (smallest
/// admissible positive `C`) and the maximal extension elsewhere, so `f`
/// becomes additively representable with defect exactly 0.
pub fn additive_realization(
    space: &FiniteMetricSpace,
    subset: &[usize],
    f: &LipschitzFunction,
    constraint: DistanceConstraint,
) -> Result<Realization> {
    let sub = induced_submetric(space, subset)?;
    if f.len() != subset.len() {
        return Err(Error::Shape(format!(
            "function with {} values on a subset of {} points",
            f.len(),
            subset.len()
        )));
    }
    if constraint != DistanceConstraint::RealRational {
        constraint.check_space(space)?;
    }
    let extremal = if sub.len() < 2 {
        false
    } else {
        let lip = lipschitz_constant(&sub, f)?;
        if lip > Rational::one() {
            return Err(Error::Precondition(format!(
                "function has Lipschitz constant {lip} > 1"
            )));
        }
        lip.is_one() && is_extremal_tight_graph(&sub, f)?.verdict
    };
    let constant = realization_shift(space, subset, f.values(), constraint)?;
    let on_subset: Vec<Rational> = f.values().iter().map(|v| v + &constant).collect();
    let row = max_extension(space, subset, &on_subset);
    let grown = katetov_extend(space, &LipschitzFunction::new(row), constraint)?;
    let point = space.len();
    let check = representability_defect(&grown, subset, f, true)?;
    if !check.defect.is_zero() {
        return Err(Error::Invariant(format!(
            "realized function keeps defect {}",
            check.defect
        )));
    }
    Ok(Realization {
        space: grown,
        constant,
        point,
        extremal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piercing {
    pub space: FiniteMetricSpace,
    /// Shift `C` of the near point `z₁`, at distance `f + C`.
    pub near_constant: Rational,
    /// Level `C′` of the far point `z₂`, at distance `C′ − f`.
    pub far_constant: Rational,
    /// Indices of `z₁` and `z₂`.
    pub near: usize,
    pub far: usize,
    /// `f` extended by `−C` at `z₁` and `C′` at `z₂`; 1-Lipschitz.
    pub extension: LipschitzFunction,
    /// `ē_{z₂,z₁}`, on which the extension takes the value 1.
    pub tight_vertex: SignedMeasure,
    /// The function actually used (shifted to minimum 0 when normalizing).
    pub function: LipschitzFunction,
}

/// Adds two points on opposite sides of the face exposed by the extremal
/// function `f`, joined by a new fundamental vertex lying on the face of
/// the extended unit ball exposed by the extension of `f`.
pub fn pierce_face(
    space: &FiniteMetricSpace,
    f: &LipschitzFunction,
    normalize: bool,
) -> Result<Piercing> {
    if !is_extremal_tight_graph(space, f)?.verdict {
        return Err(Error::Precondition(
            "pierce_face needs an extremal function".into(),
        ));
    }
    let f = if normalize {
        f.shifted(&-f.min_value().expect("nonempty").clone())
    } else {
        f.clone()
    };
    let n = space.len();
    let all: Vec<usize> = (0..n).collect();
    let near_constant =
        realization_shift(space, &all, f.values(), DistanceConstraint::RealRational)?;

    let high = f.max_value().expect("nonempty").clone();
    let mut far_constant = high.clone();
    for i in 0..n {
        for j in i..n {
            let need = (space.dist(i, j) + f.value(i) + f.value(j)) / two();
            far_constant = far_constant.max(need);
        }
    }
    if far_constant == high {
        far_constant += positivity_margin(space);
    }

    let near_row: Vec<Rational> = f.values().iter().map(|v| v + &near_constant).collect();
    let with_near = katetov_extend(
        space,
        &LipschitzFunction::new(near_row),
        DistanceConstraint::RealRational,
    )?;
    let mut far_row: Vec<Rational> = f.values().iter().map(|v| &far_constant - v).collect();
    far_row.push(&near_constant + &far_constant);
    let grown = katetov_extend(
        &with_near,
        &LipschitzFunction::new(far_row),
        DistanceConstraint::RealRational,
    )?;

    let mut ext = f.values().to_vec();
    ext.push(-near_constant.clone());
    ext.push(far_constant.clone());
    let extension = LipschitzFunction::new(ext);
    let (near, far) = (n, n + 1);
    let tight_vertex = fundamental_vertex(&grown, far, near)?;
    if lipschitz_constant(&grown, &extension)? != Rational::one()
        || !tight_vertex.pair_with(extension.values()).is_one()
    {
        return Err(Error::Invariant(
            "pierced extension is not tight on the new vertex".into(),
        ));
    }
    Ok(Piercing {
        space: grown,
        near_constant,
        far_constant,
        near,
        far,
        extension,
        tight_vertex,
        function: f,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRound {
    pub round: usize,
    /// Number of points of the snapshot; snapshot `k` is the first `k` points
    /// of the final space.
    pub snapshot_id: usize,
    /// Indices of the points added in this round.
    pub added: Vec<usize>,
    /// Largest defect over the subsets examined in this round.
    pub defect: Rational,
    /// Rigidity defect of the tracked initial subset.
    pub initial_defect: Rational,
    pub diameter: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionTrace {
    pub rounds: Vec<TraceRound>,
    pub epsilon: Option<Rational>,
    pub constraint: DistanceConstraint,
    pub seed: u64,
    /// Tracked subset of the starting space.
    pub initial_subset: Vec<usize>,
    pub space: FiniteMetricSpace,
}

impl ExtensionTrace {
    /// The space as it was when `round` was recorded.
    pub fn snapshot(&self, round: usize) -> Result<FiniteMetricSpace> {
        let r = self
            .rounds
            .get(round)
            .ok_or_else(|| Error::Precondition(format!("trace has no round {round}")))?;
        induced_submetric(&self.space, &(0..r.snapshot_id).collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidifyOptions {
    pub max_rounds: usize,
    pub constraint: DistanceConstraint,
    pub seed: u64,
    pub max_new_points_per_round: usize,
    /// Random subsets examined per round once the space is too large to be
    /// examined whole.
    pub subsets_per_round: usize,
}

impl Default for RigidifyOptions {
    fn default() -> Self {
        RigidifyOptions {
            max_rounds: 3,
            constraint: DistanceConstraint::RealRational,
            seed: 0,
            max_new_points_per_round: 4,
            subsets_per_round: 2,
        }
    }
}

fn leading(n: usize) -> Vec<usize> {
    (0..n.min(SAMPLE_SUBSET_SIZE)).collect()
}

fn sampled_subset(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut s = sample(rng, n, SAMPLE_SUBSET_SIZE).into_vec();
    s.sort_unstable();
    s
}

/// Repeatedly realizes every extremal function whose additive defect is at
/// least `epsilon`, until the round defect drops below `epsilon` or the
/// round budget runs out.
pub fn rigidify(
    space: &FiniteMetricSpace,
    epsilon: &Rational,
    options: &RigidifyOptions,
) -> Result<ExtensionTrace> {
    if !epsilon.is_positive() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    if options.constraint != DistanceConstraint::RealRational {
        options.constraint.check_space(space)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let initial = leading(space.len());
    let mut current = space.clone();
    let mut rounds = Vec::new();
    let mut added = Vec::new();
    for round in 0..=options.max_rounds {
        let n = current.len();
        let mut subsets = vec![initial.clone()];
        if n > SAMPLE_SUBSET_SIZE {
            subsets.extend((0..options.subsets_per_round).map(|_| sampled_subset(n, &mut rng)));
        } else if n > initial.len() {
            subsets.push((0..n).collect());
        }
        let mut reports = Vec::with_capacity(subsets.len());
        for s in &subsets {
            reports.push(rigidity_defect(&current, s, epsilon)?);
        }
        let defect_of =
            |r: &crate::rigidity::RigidityReport| r.defect.clone().expect("rigidity defect");
        let defect = reports
            .iter()
            .map(defect_of)
            .max()
            .expect("at least one subset");
        rounds.push(TraceRound {
            round,
            snapshot_id: n,
            added: std::mem::take(&mut added),
            defect: defect.clone(),
            initial_defect: defect_of(&reports[0]),
            diameter: diameter(&current),
        });
        if defect < *epsilon || round == options.max_rounds {
            break;
        }
        'subsets: for s in &subsets {
            let sub = induced_submetric(&current, s)?;
            let mut scored = Vec::new();
            for f in enumerate_extremal(&sub)? {
                let d = representability_defect(&current, s, &f, true)?.defect;
                if d >= *epsilon {
                    scored.push((d, f));
                }
            }
            scored.sort_by(|a, b| b.cmp(a));
            for (_, f) in scored {
                if added.len() >= options.max_new_points_per_round {
                    break 'subsets;
                }
                if representability_defect(&current, s, &f, true)?.defect < *epsilon {
                    continue;
                }
                let r = additive_realization(&current, s, &f, options.constraint)?;
                added.push(r.point);
                current = r.space;
            }
        }
    }
    Ok(ExtensionTrace {
        rounds,
        epsilon: Some(epsilon.clone()),
        constraint: options.constraint,
        seed: options.seed,
        initial_subset: initial,
        space: current,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowOptions {
    pub rounds: usize,
    pub points_per_round: usize,
    pub seed: u64,
    /// Random convex combinations added to the vertex pool per extension.
    pub sample_size: usize,
}

impl Default for GrowOptions {
    fn default() -> Self {
        GrowOptions {
            rounds: 3,
            points_per_round: 2,
            seed: 0,
            sample_size: 4,
        }
    }
}

/// Moves an admissible function into the constraint while keeping it
/// admissible: rounding up for integers, shifting by a constant otherwise.
fn constrain(
    space: &FiniteMetricSpace,
    g: Vec<Rational>,
    constraint: DistanceConstraint,
) -> Vec<Rational> {
    let low = g.iter().min().expect("nonempty").clone();
    match constraint {
        DistanceConstraint::IntegerAtLeastOne => {
            g.iter().map(|v| ceil(v).max(Rational::one())).collect()
        }
        DistanceConstraint::RationalAtLeastOne => {
            let shift = (Rational::one() - low).max(Rational::zero());
            g.into_iter().map(|v| v + &shift).collect()
        }
        DistanceConstraint::RealRational => {
            if low.is_zero() {
                let m = positivity_margin(space);
                g.into_iter().map(|v| v + &m).collect()
            } else {
                g
            }
        }
    }
}

/// Grows a finite approximation of the universal space with the given
/// distance constraint by seeded Katětov extensions.
pub fn grow_universal(
    seed_space: &FiniteMetricSpace,
    constraint: DistanceConstraint,
    options: &GrowOptions,
) -> Result<ExtensionTrace> {
    constraint.check_space(seed_space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let initial = leading(seed_space.len());
    let zero = Rational::zero();
    let mut current = seed_space.clone();
    let mut rounds = Vec::new();
    let mut added = Vec::new();
    for round in 0..=options.rounds {
        let initial_defect = rigidity_defect(&current, &initial, &Rational::one())?
            .defect
            .unwrap_or_else(|| zero.clone());
        rounds.push(TraceRound {
            round,
            snapshot_id: current.len(),
            added: std::mem::take(&mut added),
            defect: initial_defect.clone(),
            initial_defect,
            diameter: diameter(&current),
        });
        if round == options.rounds {
            break;
        }
        for _ in 0..options.points_per_round {
            let n = current.len();
            let anchors = if n > SAMPLE_SUBSET_SIZE {
                sampled_subset(n, &mut rng)
            } else {
                (0..n).collect()
            };
            let core = induced_submetric(&current, &anchors)?;
            let mut pool = vertices_and_rays(&admissible_polyhedron(&core))?.vertices;
            let mixes = random_convex_combinations(&pool, options.sample_size, &mut rng);
            pool.extend(mixes);
            let pick = rng.gen_range(0..pool.len());
            let g = max_extension(&current, &anchors, &pool[pick]);
            let g = constrain(&current, g, constraint);
            current = katetov_extend(&current, &LipschitzFunction::new(g), constraint)?;
            added.push(current.len() - 1);
        }
    }
    Ok(ExtensionTrace {
        rounds,
        epsilon: None,
        constraint,
        seed: options.seed,
        initial_subset: initial,
        space: current,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RandomModel {
    /// Random rationals closed under shortest paths.
    ShortestPathCompletion,
    /// Random integers in `1..=9` closed under shortest paths.
    IntegerUniform,
    /// Four points `A, B, C` around a center `D` at distances `a, b, c`, with
    /// leaves at the sums of their spokes.
    StarFamily,
}

impl RandomModel {
    pub fn name(self) -> &'static str {
        match self {
            RandomModel::ShortestPathCompletion => "shortest-path-completion",
            RandomModel::IntegerUniform => "integer-uniform",
            RandomModel::StarFamily => "star-family",
        }
    }
}

impl FromStr for RandomModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shortest-path-completion" => Ok(RandomModel::ShortestPathCompletion),
            "integer-uniform" => Ok(RandomModel::IntegerUniform),
            "star-family" => Ok(RandomModel::StarFamily),
            other => Err(Error::Parse(format!("unknown random model {other:?}"))),
        }
    }
}

/// Mixes a base seed with a sample index into an independent stream seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn shortest_paths(mut d: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = d.len();
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
    d
}

/// The four-point star: center `D` at distances `a, b, c` from `A, B, C`,
/// and `ρ(A,B) = a + b` and so on.
pub fn star_space(a: &Rational, b: &Rational, c: &Rational) -> Result<FiniteMetricSpace> {
    let spokes = [a, b, c];
    let mut d = vec![vec![Rational::zero(); 4]; 4];
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                d[i][j] = spokes[i] + spokes[j];
            }
        }
        d[i][3] = spokes[i].clone();
        d[3][i] = spokes[i].clone();
    }
    FiniteMetricSpace::new(["A", "B", "C", "D"].map(String::from).to_vec(), d)
}

/// Seeded random metric space; deterministic for fixed arguments. The star
/// model always has four points and requires `n = 4`.
pub fn random_metric(n: usize, model: RandomModel, seed: u64) -> Result<FiniteMetricSpace> {
    if n == 0 {
        return Err(Error::Empty("metric space"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symmetric = |draw: &mut dyn FnMut(&mut ChaCha8Rng) -> Rational| {
        let mut d = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = draw(&mut rng);
                d[i][j] = v.clone();
                d[j][i] = v;
            }
        }
        shortest_paths(d)
    };
    match model {
        RandomModel::ShortestPathCompletion => {
            let d = symmetric(&mut |r| {
                Rational::new(r.gen_range(1..=12).into(), r.gen_range(1..=4).into())
            });
            FiniteMetricSpace::from_matrix(d)
        }
        RandomModel::IntegerUniform => {
            let d = symmetric(&mut |r| Rational::from_integer(r.gen_range(1..=9).into()));
            FiniteMetricSpace::from_matrix(d)
        }
        RandomModel::StarFamily => {
            if n != 4 {
                return Err(Error::Precondition(format!(
                    "the star model has 4 points, not {n}"
                )));
            }
            let mut spoke =
                || Rational::new(rng.gen_range(1..=6).into(), rng.gen_range(1..=3).into());
            let (a, b, c) = (spoke(), spoke(), spoke());
            star_space(&a, &b, &c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::validate_metric;
    use crate::rational::{int, ratio};

    fn equilateral() -> FiniteMetricSpace {
        FiniteMetricSpace::uniform(3, int(1)).unwrap()
    }

    fn ints(v: &[i64]) -> LipschitzFunction {
        LipschitzFunction::from_integers(v)
    }

    #[test]
    fn katetov_examples() {
        let s = equilateral();
        let g = ints(&[1, 2, 2]);
        let t = katetov_extend(&s, &g, DistanceConstraint::RealRational).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.row(3)[..3], *g.values());
        assert_eq!(
            katetov_extend(&s, &ints(&[0, 1, 0]), DistanceConstraint::RealRational),
            Err(Error::Inadmissible(0, 2))
        );
        assert!(katetov_extend(&s, &g, DistanceConstraint::IntegerAtLeastOne).is_ok());
        let half = LipschitzFunction::new(vec![ratio(1, 2), ratio(3, 2), ratio(1, 2)]);
        assert!(matches!(
            katetov_extend(&s, &half, DistanceConstraint::IntegerAtLeastOne),
            Err(Error::Constraint(_))
        ));
        assert_eq!(
            katetov_extend(&s, &ints(&[0, 1, 1]), DistanceConstraint::RealRational),
            Err(Error::DuplicatePoint(0))
        );
    }

    #[test]
    fn realization_of_worst_function() {
        let s = equilateral();
        let r = additive_realization(
            &s,
            &[0, 1, 2],
            &ints(&[0, 1, 0]),
            DistanceConstraint::RealRational,
        )
        .unwrap();
        assert_eq!(r.constant, ratio(1, 2));
        assert_eq!(r.space.row(3)[..3], [ratio(1, 2), ratio(3, 2), ratio(1, 2)]);
        assert!(r.extremal);
    }

    #[test]
    fn realization_of_distance_function() {
        let s = equilateral();
        let f = LipschitzFunction::distance(&s, 0);
        let r = additive_realization(&s, &[0, 1, 2], &f, DistanceConstraint::RealRational).unwrap();
        assert_eq!(r.constant, ratio(1, 2));
        assert_eq!(
            representability_defect(&r.space, &[0, 1, 2], &f, true)
                .unwrap()
                .defect,
            int(0)
        );
    }

    #[test]
    fn integer_realization() {
        let s = FiniteMetricSpace::uniform(3, int(2)).unwrap();
        let f = ints(&[0, 2, 2]);
        let r = additive_realization(&s, &[0, 1, 2], &f, DistanceConstraint::IntegerAtLeastOne)
            .unwrap();
        assert!(r.constant.is_integer());
        assert!(r.space.is_integral());
        let g = ints(&[0, 2, 0]);
        let r = additive_realization(&s, &[0, 1, 2], &g, DistanceConstraint::IntegerAtLeastOne)
            .unwrap();
        assert_eq!(r.constant, int(1));
        assert_eq!(r.space.row(3)[..3], [int(1), int(3), int(1)]);
    }

    #[test]
    fn realization_outside_subset_uses_max_extension() {
        let s = FiniteMetricSpace::uniform(4, int(1)).unwrap();
        let r = additive_realization(
            &s,
            &[0, 1, 2],
            &ints(&[0, 1, 0]),
            DistanceConstraint::RealRational,
        )
        .unwrap();
        assert_eq!(*r.space.dist(4, 3), ratio(3, 2));
    }

    #[test]
    fn piercing_equilateral() {
        let s = equilateral();
        let p = pierce_face(&s, &ints(&[0, 1, 1]), true).unwrap();
        assert_eq!(p.near_constant, ratio(1, 2));
        assert_eq!(p.far_constant, ratio(3, 2));
        assert_eq!(p.space.row(3)[..3], [ratio(1, 2), ratio(3, 2), ratio(3, 2)]);
        assert_eq!(
            p.space.row(4)[..4],
            [ratio(3, 2), ratio(1, 2), ratio(1, 2), int(2)]
        );
        assert_eq!(p.tight_vertex.pair_with(p.extension.values()), int(1));
        assert!(validate_metric(p.space.matrix()).unwrap().is_none());
        for (i, j) in [(1, 0), (2, 0)] {
            assert_eq!(
                p.extension.value(i) - p.extension.value(j),
                p.space.dist(i, j).clone()
            );
        }
        assert!(matches!(
            pierce_face(
                &s,
                &LipschitzFunction::new(vec![int(0), ratio(1, 2), int(1)]),
                true
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rigidify_small_cases() {
        let two = FiniteMetricSpace::uniform(2, int(1)).unwrap();
        let t = rigidify(&two, &ratio(1, 4), &RigidifyOptions::default()).unwrap();
        assert_eq!(t.rounds.len(), 1);
        assert_eq!(t.rounds[0].defect, int(0));

        let t = rigidify(
            &equilateral(),
            &ratio(1, 4),
            &RigidifyOptions {
                max_rounds: 1,
                ..RigidifyOptions::default()
            },
        )
        .unwrap();
        assert_eq!(t.rounds[0].defect, ratio(1, 2));
        assert_eq!(t.rounds[1].initial_defect, int(0));
        assert_eq!(t.rounds[1].added.len(), 3);
        assert_eq!(t.snapshot(0).unwrap(), equilateral());
    }

    #[test]
    fn grow_respects_constraints() {
        let one = FiniteMetricSpace::uniform(1, int(1)).unwrap();
        let opts = GrowOptions {
            rounds: 3,
            seed: 1,
            ..GrowOptions::default()
        };
        let z = grow_universal(&one, DistanceConstraint::IntegerAtLeastOne, &opts).unwrap();
        assert_eq!(z.space.len(), 7);
        DistanceConstraint::IntegerAtLeastOne
            .check_space(&z.space)
            .unwrap();
        let q = grow_universal(&one, DistanceConstraint::RationalAtLeastOne, &opts).unwrap();
        DistanceConstraint::RationalAtLeastOne
            .check_space(&q.space)
            .unwrap();
        assert_eq!(
            z,
            grow_universal(&one, DistanceConstraint::IntegerAtLeastOne, &opts).unwrap()
        );
        let bad = FiniteMetricSpace::uniform(2, ratio(1, 2)).unwrap();
        assert!(grow_universal(&bad, DistanceConstraint::RationalAtLeastOne, &opts).is_err());
    }

    #[test]
    fn random_models() {
        let s = star_space(&int(1), &int(1), &int(1)).unwrap();
        assert_eq!(diameter(&s), int(2));
        assert_eq!(*s.dist(0, 3), int(1));
        let a = random_metric(5, RandomModel::IntegerUniform, 9).unwrap();
        assert!(a.is_integral());
        assert_eq!(a, random_metric(5, RandomModel::IntegerUniform, 9).unwrap());
        assert!(random_metric(4, RandomModel::StarFamily, 2).is_ok());
        assert!("bogus".parse::<RandomModel>().is_err());
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
    }
}
